#include <benchmark/benchmark.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "qslab/commutant.hpp"
#include "qslab/decoherence.hpp"
#include "qslab/espace.hpp"
#include "qslab/models.hpp"
#include "qslab/random.hpp"

#ifdef QSLAB_WITH_CLI
#include "runner.hpp"
#endif

using namespace qslab;

static void BM_PauliExpand(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Model m = build_ising_chain(n, 1.0, 0.7, true);
  for (auto _ : state) benchmark::DoNotOptimize(pauli_expand(m.hamiltonian, m.tps));
}
BENCHMARK(BM_PauliExpand)->DenseRange(3, 6);

static void BM_PartialTrace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Tps tps = Tps::qubits(n);
  const HermitianOp rho = HermitianOp::projector(random_ket(1 << n, 3));
  const int keep[] = {0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, tps, keep));
}
BENCHMARK(BM_PartialTrace)->DenseRange(3, 7);

static void BM_CommutantSample(benchmark::State& state) {
  const Model m = build_ising_chain(4, 1.0, 0.7, false);
  const CommutantBasis cb = commutant_basis(m.hamiltonian);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_commutant_unitary(cb, seed++, false));
}
BENCHMARK(BM_CommutantSample);

static void BM_CommutantSampleOffOrbit(benchmark::State& state) {
  const Model m = build_ising_chain(3, 1.0, 1.0, false);
  const CommutantBasis cb = commutant_basis(m.hamiltonian);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_commutant_unitary(cb, seed++, true));
}
BENCHMARK(BM_CommutantSampleOffOrbit)->Unit(benchmark::kMillisecond);

static void BM_ErgodicitySearch(benchmark::State& state) {
  const int bound = static_cast<int>(state.range(0));
  std::vector<double> diag{0.0, 1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)};
  const HermitianOp h = HermitianOp::diagonal(diag);
  for (auto _ : state) benchmark::DoNotOptimize(ergodicity_report(h, bound, 1e-6));
}
BENCHMARK(BM_ErgodicitySearch)->Arg(3)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_DecoherenceTrace(benchmark::State& state) {
  const ZurekSpec spec{std::vector<double>(static_cast<std::size_t>(state.range(0)), 0.8), 1.0};
  const Ket psi0 = zurek_initial_state(spec, 0.6, 0.8);
  std::vector<double> times(200);
  for (int i = 0; i < 200; ++i) times[i] = 0.03 * i;
  for (auto _ : state) benchmark::DoNotOptimize(decoherence_trace(spec, psi0, times));
}
BENCHMARK(BM_DecoherenceTrace)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

#ifdef QSLAB_WITH_CLI
static void BM_DemoBundle(benchmark::State& state) {
  const std::filesystem::path file = std::filesystem::path(QSLAB_DATA_DIR) / "bundles" / "demos.json";
  const nlohmann::json doc = cli::read_json_file(file);
  std::vector<cli::RunConfig> configs;
  for (const auto& e : doc.at("runs")) configs.push_back(cli::config_from_json(e, file.parent_path()));
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cli::report_bundle(configs, "demos", jobs));
}
BENCHMARK(BM_DemoBundle)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
#endif

BENCHMARK_MAIN();
