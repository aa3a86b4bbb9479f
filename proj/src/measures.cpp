#include "cadwmr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cadwmr/errors.hpp"

namespace cadwmr {

namespace {

constexpr double kClampWindow = 1e-12;

// x log2 x with 0 log 0 = 0; tiny negative round-off is clamped to 0.
double xlog2x(double x) {
  if (x < -kClampWindow) {
    throw NumericalError("negative logarithm argument " + std::to_string(x));
  }
  if (x <= 0.0) return 0.0;
  return x * std::log2(x);
}

const Matrix4c& spin_flip_operator() {
  static const Matrix4c yy = [] {
    Matrix2c sy;
    sy << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return kron(sy, sy);
  }();
  return yy;
}

const Matrix4c& magic_basis() {
  static const Matrix4c b = [] {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    Matrix4c m = Matrix4c::Zero();
    // columns: Phi+, i Phi-, i Psi+, Psi-
    m(0, 0) = h;
    m(3, 0) = h;
    m(0, 1) = i * h;
    m(3, 1) = -i * h;
    m(1, 2) = i * h;
    m(2, 2) = i * h;
    m(1, 3) = h;
    m(2, 3) = -h;
    return m;
  }();
  return b;
}

void require_x_state(const DensityMatrix4& rho, const char* what) {
  if (!is_x_state(rho, kXStateTol)) {
    throw UnsupportedStateError(std::string(what) + " closed form is only valid for X-states");
  }
}

}  // namespace

double jsd_coherence(const DensityMatrix4& rho) {
  const Matrix4c diag = rho.matrix().diagonal().asDiagonal();
  const DensityMatrix4 dephased(diag);
  const DensityMatrix4 mid(0.5 * (rho.matrix() + diag));
  std::array<double, 4> pops{};
  for (int i = 0; i < 4; ++i) pops[i] = rho.population(i);
  const double radicand =
      von_neumann_entropy(mid) - 0.5 * von_neumann_entropy(rho) - 0.5 * shannon_entropy_bits(pops);
  if (radicand < -kClampWindow) {
    throw NumericalError("JSD radicand is negative: " + std::to_string(radicand));
  }
  return std::sqrt(std::max(radicand, 0.0));
}

std::array<double, 4> spin_flip_spectrum(const DensityMatrix4& rho) {
  const Matrix4c& yy = spin_flip_operator();
  const Matrix4c flipped = yy * rho.matrix().conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix4c> solver(rho.matrix() * flipped, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spin-flip eigensolver did not converge");
  }
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const Complex ev = solver.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8) {
      throw NumericalError("spin-flip spectrum has imaginary part " + std::to_string(ev.imag()));
    }
    out[i] = std::max(ev.real(), 0.0);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::array<double, 4> spin_flip_spectrum_x(const DensityMatrix4& rho) {
  const double outer = std::sqrt(std::max(rho.population(0) * rho.population(3), 0.0));
  const double inner = std::sqrt(std::max(rho.population(1) * rho.population(2), 0.0));
  const double c14 = std::abs(rho(0, 3));
  const double c23 = std::abs(rho(1, 2));
  std::array<double, 4> out{(outer + c14) * (outer + c14), (outer - c14) * (outer - c14),
                            (inner + c23) * (inner + c23), (inner - c23) * (inner - c23)};
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double concurrence_from_spectrum(const std::array<double, 4>& lambdas) {
  const double c = std::sqrt(lambdas[0]) - std::sqrt(lambdas[1]) - std::sqrt(lambdas[2]) -
                   std::sqrt(lambdas[3]);
  return std::clamp(c, 0.0, 1.0);
}

double concurrence(const DensityMatrix4& rho) {
  if (is_x_state(rho, 0.0)) return concurrence_from_spectrum(spin_flip_spectrum_x(rho));
  return concurrence_from_spectrum(spin_flip_spectrum(rho));
}

double dense_coding_capacity(const DensityMatrix4& rho) {
  Matrix2c u[4];
  u[0] = Matrix2c::Identity();
  u[1] << 0.0, 1.0, 1.0, 0.0;   // |x> -> |x+1>
  u[2] << 1.0, 0.0, 0.0, -1.0;  // e^{i pi x}|x>
  u[3] << 0.0, -1.0, 1.0, 0.0;  // e^{i pi (x+1)}|x+1> up to phase
  Matrix4c encoded = Matrix4c::Zero();
  for (const auto& ui : u) {
    const Matrix4c k = kron(ui, Matrix2c::Identity());
    encoded += k * rho.matrix() * k.adjoint();
  }
  const DensityMatrix4 averaged(0.25 * encoded);
  return von_neumann_entropy(averaged) - von_neumann_entropy(rho);
}

double fully_entangled_fraction(const DensityMatrix4& rho) {
  const Matrix4c& b = magic_basis();
  const Matrix4c transformed = b.adjoint() * rho.matrix() * b;
  const Eigen::Matrix4d re = transformed.real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(0.5 * (re + re.transpose()),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(3);
}

double teleportation_fidelity(const DensityMatrix4& rho) {
  return (1.0 + 2.0 * fully_entangled_fraction(rho)) / 3.0;
}

FanoBlochX fano_bloch_x(const DensityMatrix4& rho) {
  const double c23 = std::abs(rho(2, 1));
  const double c14 = std::abs(rho(3, 0));
  FanoBlochX f;
  f.gamma1 = 2.0 * (c23 + c14);
  f.gamma2 = 2.0 * (c23 - c14);
  f.gamma3 = 1.0 - 2.0 * (rho.population(1) + rho.population(2));
  f.x_a3 = 2.0 * (rho.population(0) + rho.population(1)) - 1.0;
  return f;
}

double trace_distance_discord(const DensityMatrix4& rho) {
  require_x_state(rho, "trace distance discord");
  const FanoBlochX f = fano_bloch_x(rho);
  const double g1 = f.gamma1 * f.gamma1;
  const double g2 = f.gamma2 * f.gamma2;
  const double g3 = f.gamma3 * f.gamma3;
  const double hi = std::max(g3, g2 + f.x_a3 * f.x_a3);
  const double lo = std::min(g3, g1);
  const double den = hi - lo + g1 - g2;
  if (std::abs(den) < 1e-12) return 0.5 * std::abs(f.gamma1);
  const double ratio = (g1 * hi - g2 * lo) / den;
  return 0.5 * std::sqrt(std::max(ratio, 0.0));
}

SteeringCoefficients steering_coefficients(const DensityMatrix4& rho) {
  const double r11 = rho.population(0);
  const double r22 = rho.population(1);
  const double r33 = rho.population(2);
  const double r44 = rho.population(3);
  SteeringCoefficients s;
  s.c1 = 2.0 * (rho(1, 2).real() + rho(0, 3).real());
  s.c2 = 2.0 * (rho(1, 2).real() - rho(0, 3).real());
  s.c3 = r11 + r44 - r22 - r33;
  s.r_marg = r11 + r22 - r44 - r33;
  s.s_marg = r11 - r44 - r22 + r33;
  return s;
}

double epr_steering(const DensityMatrix4& rho) {
  require_x_state(rho, "EPR steering");
  const SteeringCoefficients k = steering_coefficients(rho);
  double qs = 0.0;
  for (double c : {k.c1, k.c2}) qs += xlog2x(1.0 + c) + xlog2x(1.0 - c);
  // -(1+r)log(1+r) + (1-r)log(1-r). The conditional-entropy form 6 - 2 sum H(b|a)
  // has a minus on both halves, so the two differ by 2 (1-r) log2(1-r).
  qs += -xlog2x(1.0 + k.r_marg) + xlog2x(1.0 - k.r_marg);
  qs += 0.5 * xlog2x(1.0 + k.c3 + k.r_marg + k.s_marg);
  qs += 0.5 * xlog2x(1.0 + k.c3 - k.r_marg - k.s_marg);
  qs += 0.5 * xlog2x(1.0 - k.c3 - k.r_marg + k.s_marg);
  qs += 0.5 * xlog2x(1.0 - k.c3 + k.r_marg - k.s_marg);
  return qs;
}

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::Chi: return "chi";
    case Measure::Fidelity: return "fidelity";
    case Measure::Concurrence: return "concurrence";
    case Measure::Qs: return "qs";
    case Measure::Tdd: return "tdd";
    case Measure::Jsd: return "jsd";
  }
  return "unknown";
}

std::optional<double> CorrelationVector::get(Measure m) const {
  switch (m) {
    case Measure::Chi: return chi;
    case Measure::Fidelity: return fidelity;
    case Measure::Concurrence: return concurrence;
    case Measure::Qs: return qs;
    case Measure::Tdd: return tdd;
    case Measure::Jsd: return jsd;
  }
  return std::nullopt;
}

void CorrelationVector::set(Measure m, double value) {
  switch (m) {
    case Measure::Chi: chi = value; break;
    case Measure::Fidelity: fidelity = value; break;
    case Measure::Concurrence: concurrence = value; break;
    case Measure::Qs: qs = value; break;
    case Measure::Tdd: tdd = value; break;
    case Measure::Jsd: jsd = value; break;
  }
}

CorrelationVector correlation_vector(const DensityMatrix4& rho) {
  CorrelationVector v;
  v.chi = dense_coding_capacity(rho);
  v.fidelity = teleportation_fidelity(rho);
  v.concurrence = concurrence(rho);
  v.jsd = jsd_coherence(rho);
  if (is_x_state(rho, kXStateTol)) {
    v.qs = epr_steering(rho);
    v.tdd = trace_distance_discord(rho);
  }
  return v;
}

NormalizationTable NormalizationTable::standard() {
  NormalizationTable t;
  t[Measure::Chi] = {2.0, 1.0};
  t[Measure::Fidelity] = {1.0, 2.0 / 3.0};
  t[Measure::Concurrence] = {1.0, 0.0};
  t[Measure::Qs] = {6.0, 2.0};
  t[Measure::Tdd] = {1.0, 0.0};
  t[Measure::Jsd] = {0.56, 0.0};
  return t;
}

CorrelationVector normalize(const CorrelationVector& v, const NormalizationTable& table) {
  CorrelationVector out = v;
  for (Measure m : kAllMeasures) {
    const NormalizationEntry& e = table[m];
    const double span = e.max - e.classical_limit;
    if (span == 0.0 || !std::isfinite(span)) {
      throw ConfigError("normalization table entry for " + std::string(measure_name(m)) +
                        " has max == classical limit");
    }
    if (const auto value = v.get(m)) out.set(m, (*value - e.classical_limit) / span);
  }
  return out;
}

}  // namespace cadwmr
