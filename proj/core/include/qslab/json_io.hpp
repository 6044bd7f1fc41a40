#pragma once

// JSON / DOT / CSV exporters. Output is deterministic: object keys are
// sorted, doubles use shortest round-trip formatting, and non-finite values
// are written as null.

#include <string>

#include <nlohmann/json.hpp>

#include "qslab/commutant.hpp"
#include "qslab/decoherence.hpp"
#include "qslab/espace.hpp"
#include "qslab/kstruct.hpp"
#include "qslab/relevance.hpp"

namespace qslab {

/// Row-major [[re, im], ...].
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const KStructure& s);
KStructure kstructure_from_json(const nlohmann::json& j);

/// Matrices (witness) only when full is set.
nlohmann::json to_json(const Certificate& c, bool full = false);
nlohmann::json to_json(const ErgodicityReport& r);
nlohmann::json to_json(const SpaceGraph& g);
nlohmann::json to_json(const DecoherenceTrace& t);

std::string to_dot(const SpaceGraph& g, const std::string& name = "space");
/// Header "t,offdiag,oracle".
std::string to_csv(const DecoherenceTrace& t);

}  // namespace qslab
