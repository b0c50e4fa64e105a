#include "zzkit/pauli.hpp"

#include "zzkit/errors.hpp"

namespace zzkit::spectrum {

namespace {

// <i|Z|i> for qubit state i under the convention.
double zsign(int i, ZConvention c) {
  const double s = i == 0 ? 1.0 : -1.0;
  return c == ZConvention::ground_positive ? s : -s;
}

}  // namespace

std::array<double, 4> PauliDecomposition::computational_energies() const {
  std::array<double, 4> e{};
  int k = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double z1 = zsign(i, convention);
      const double z2 = zsign(j, convention);
      e[k++] = beta[0] + beta[1] * z2 + beta[4] * z1 + beta[5] * z1 * z2;
    }
  }
  return e;
}

PauliDecomposition pauli_from_energies(double e00, double e01, double e10, double e11,
                                       double j_dressed, ZConvention convention) {
  PauliDecomposition d;
  d.convention = convention;
  const double s = convention == ZConvention::ground_positive ? 1.0 : -1.0;
  d.beta[0] = (e00 + e01 + e10 + e11) / 4.0;
  d.beta[1] = s * (e00 - e01 + e10 - e11) / 4.0;
  d.beta[4] = s * (e00 + e01 - e10 - e11) / 4.0;
  d.beta[5] = (e00 - e01 - e10 + e11) / 4.0;
  d.beta[2] = d.beta[3] = j_dressed / 2.0;
  return d;
}

PauliDecomposition pauli_decomposition(const LabeledSpectrum& spectrum, double j_dressed,
                                       ZConvention convention) {
  if (spectrum.computational_ambiguous()) {
    throw AmbiguousLabelError("Pauli decomposition needs unambiguous computational labels");
  }
  return pauli_from_energies(spectrum.energy({0, 0}), spectrum.energy({0, 1}),
                             spectrum.energy({1, 0}), spectrum.energy({1, 1}), j_dressed,
                             convention);
}

ConditionalFrequencies conditional_frequencies(const PauliDecomposition& d) {
  const auto e = d.computational_energies();
  ConditionalFrequencies f;
  f.w1_given0 = e[2] - e[0];
  f.w1_given1 = e[3] - e[1];
  f.w2_given0 = e[1] - e[0];
  f.w2_given1 = e[3] - e[2];
  return f;
}

}  // namespace zzkit::spectrum
