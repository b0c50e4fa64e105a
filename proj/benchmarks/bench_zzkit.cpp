#include <benchmark/benchmark.h>

#include <cmath>

#include "zzkit/circuit.hpp"
#include "zzkit/foster.hpp"
#include "zzkit/hamiltonian.hpp"
#include "zzkit/labeling.hpp"
#include "zzkit/protocols.hpp"
#include "zzkit/vector_fit.hpp"

using namespace zzkit;

static void BM_TransmonSpectrum(benchmark::State& state) {
  circuit::TransmonSpec t;
  t.squid = {36.675413e9, 0.48, 0.5};
  t.ec = 308.9e6;
  for (auto _ : state) benchmark::DoNotOptimize(circuit::transmon_spectrum(t));
}
BENCHMARK(BM_TransmonSpectrum);

static void BM_ZetaExact(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const auto kp = spectrum::two_mode_params(6.27e9, 4.27e9, -351e6, -312e6, 240e6);
  for (auto _ : state) {
    const auto h = spectrum::build_hamiltonian(kp, {levels, levels}, std::nullopt);
    benchmark::DoNotOptimize(spectrum::zeta_exact(spectrum::diagonalize_and_label(h)));
  }
}
BENCHMARK(BM_ZetaExact)->Arg(3)->Arg(5)->Arg(8);

static void BM_BlockadePoint(benchmark::State& state) {
  dynamics::TwoQubitModel m;
  m.omega1 = 6.3165e9;
  m.omega2 = 4.5075e9;
  m.zeta = 19e6;
  dynamics::BlockadeSettings s;
  s.pulse_length = static_cast<double>(state.range(0)) * 1e-9;
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::blockade_point(m, 100e-9, s));
}
BENCHMARK(BM_BlockadePoint)->Arg(16)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_VectorFit(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  std::vector<circuit::FosterMode> ms;
  for (int i = 0; i < modes; ++i) {
    const double w = 2 * M_PI * 3e9 * std::pow(1.6, i);
    circuit::FosterMode m;
    m.capacitance_c = 1.0 / (w * 50.0);
    m.inductance_l = 50.0 / w;
    ms.push_back(m);
  }
  std::vector<double> omegas;
  for (int i = 0; i < 400; ++i) omegas.push_back(2 * M_PI * 1e9 * std::pow(40.0, i / 399.0));
  const auto samples = circuit::synthesize_impedance(ms, omegas);
  for (auto _ : state) benchmark::DoNotOptimize(circuit::vector_fit(samples, 2 * modes));
}
BENCHMARK(BM_VectorFit)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
