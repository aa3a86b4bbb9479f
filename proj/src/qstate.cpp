#include "cadwmr/qstate.hpp"

#include <algorithm>
#include <cmath>
#include "cadwmr/text.hpp"

#include "cadwmr/errors.hpp"

namespace cadwmr {

namespace {

void check_unit_interval(double value, std::string_view what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

double hermitian_defect(const Matrix4c& m) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

}  // namespace

DensityMatrix4::DensityMatrix4() : m_(Matrix4c::Zero()) { m_(0, 0) = 1.0; }

DensityMatrix4::DensityMatrix4(const Matrix4c& m) {
  if (!m.allFinite()) {
    throw ContractError("density matrix has non-finite entries");
  }
  const double defect = hermitian_defect(m);
  if (defect > 1e-10) {
    throw ContractError("density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  m_ = 0.5 * (m + m.adjoint());
}

DensityMatrix4 DensityMatrix4::from_pure(const Vector4c& psi) {
  return DensityMatrix4(psi * psi.adjoint());
}

DensityMatrix4 DensityMatrix4::basis(int index) {
  if (index < 0 || index > 3) {
    throw DomainError("basis index must be in 0..3");
  }
  Matrix4c m = Matrix4c::Zero();
  m(index, index) = 1.0;
  return DensityMatrix4(m);
}

double DensityMatrix4::trace() const { return m_.trace().real(); }

DensityMatrix4 DensityMatrix4::normalized() const {
  const double tr = trace();
  if (!(tr >= 1e-14)) {
    throw NumericalError("cannot normalize a state with trace " + std::to_string(tr));
  }
  return DensityMatrix4(m_ / tr);
}

std::string StateFamily::name() const {
  if (kind == FamilyKind::Bell) return "bell";
  return std::string(family_kind_name(kind)) + "(" + format_double(parameter) + ")";
}

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "bell") return FamilyKind::Bell;
  if (name == "werner") return FamilyKind::Werner;
  if (name == "mems") return FamilyKind::Mems;
  if (name == "nme") return FamilyKind::Nme;
  throw ConfigError("unknown state family '" + std::string(name) + "'");
}

std::string_view family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Bell: return "bell";
    case FamilyKind::Werner: return "werner";
    case FamilyKind::Mems: return "mems";
    case FamilyKind::Nme: return "nme";
  }
  return "unknown";
}

double mems_g(double gamma) { return gamma < 2.0 / 3.0 ? 1.0 / 3.0 : gamma / 2.0; }

DensityMatrix4 make_state(const StateFamily& family) {
  Matrix4c m = Matrix4c::Zero();
  switch (family.kind) {
    case FamilyKind::Bell:
      m(0, 0) = m(3, 3) = m(0, 3) = m(3, 0) = 0.5;
      break;
    case FamilyKind::Werner: {
      const double rb = family.parameter;
      check_unit_interval(rb, "Werner r_b");
      m = Matrix4c::Identity() * (0.25 * (1.0 - rb));
      m(0, 0) += 0.5 * rb;
      m(3, 3) += 0.5 * rb;
      m(0, 3) += 0.5 * rb;
      m(3, 0) += 0.5 * rb;
      break;
    }
    case FamilyKind::Mems: {
      const double gamma = family.parameter;
      check_unit_interval(gamma, "MEMS gamma");
      const double g = mems_g(gamma);
      m(0, 0) = m(3, 3) = g;
      m(1, 1) = 1.0 - 2.0 * g;
      m(0, 3) = m(3, 0) = 0.5 * gamma;
      break;
    }
    case FamilyKind::Nme: {
      const double alpha2 = family.parameter;
      check_unit_interval(alpha2, "NME alpha^2");
      const double alpha = std::sqrt(alpha2);
      const double beta = std::sqrt(1.0 - alpha2);
      m(0, 0) = alpha2;
      m(3, 3) = 1.0 - alpha2;
      m(0, 3) = m(3, 0) = alpha * beta;
      break;
    }
  }
  return DensityMatrix4(m);
}

Spectrum hermitian_eigenvalues(const Matrix4c& m) {
  if (!m.allFinite() || hermitian_defect(m) > 1e-10) {
    throw ContractError("hermitian_eigenvalues: input is not Hermitian");
  }
  const Matrix4c h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  Spectrum s;
  for (int i = 0; i < 4; ++i) s.values[i] = ev(3 - i);
  return s;
}

double shannon_entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double v : probabilities) {
    const double x = std::clamp(v, 0.0, 1.0);
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix4& rho) {
  const Spectrum s = hermitian_eigenvalues(rho.matrix());
  return shannon_entropy_bits(s.values);
}

PurityReport purity_and_linear_entropy(const DensityMatrix4& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  const double purity = rho.matrix().cwiseAbs2().sum();
  return {purity, 4.0 / 3.0 * (1.0 - purity)};
}

bool is_x_state(const DensityMatrix4& rho, double tol) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j || i + j == 3) continue;
      if (std::abs(rho(i, j)) > tol) return false;
    }
  }
  return true;
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

double max_abs_diff(const Matrix4c& a, const Matrix4c& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace cadwmr
