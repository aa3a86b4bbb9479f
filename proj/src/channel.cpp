#include "cadwmr/channel.hpp"

#include <cmath>
#include <string>

#include "cadwmr/errors.hpp"

namespace cadwmr {

namespace {

void require_closed_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

void require_half_open_unit(double v, const char* what) {
  if (!(v >= 0.0 && v < 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1), got " + std::to_string(v));
  }
}

Matrix4c sandwich(const Matrix4c& k, const Matrix4c& rho) { return k * rho * k.adjoint(); }

Matrix2c diag2(double a, double b) {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

MeasuredState apply_diagonal_measurement(const DensityMatrix4& rho, const Matrix4c& op) {
  const Matrix4c out = sandwich(op, rho.matrix());
  const double tr = out.trace().real();
  if (!(tr >= 1e-14)) {
    throw DegenerateMeasurementError("measurement annihilates the state (trace " +
                                     std::to_string(tr) + ")");
  }
  return {DensityMatrix4(out / tr), tr};
}

}  // namespace

void ChannelParams::validate() const {
  require_closed_unit(p, "damping strength p");
  require_closed_unit(eta, "memory parameter eta");
}

void WmrParams::validate() const {
  require_half_open_unit(q, "weak-measurement strength q");
  require_half_open_unit(r, "reversal strength r");
}

WmrMode parse_wmr_mode(std::string_view name) {
  if (name == "none") return WmrMode::None;
  if (name == "wm1") return WmrMode::OneQubit;
  if (name == "wm2") return WmrMode::TwoQubit;
  throw ConfigError("unknown WMR mode '" + std::string(name) + "' (expected none, wm1, wm2)");
}

std::string_view wmr_mode_name(WmrMode mode) {
  switch (mode) {
    case WmrMode::None: return "none";
    case WmrMode::OneQubit: return "wm1";
    case WmrMode::TwoQubit: return "wm2";
  }
  return "unknown";
}

std::array<Matrix2c, 2> ad_kraus(double p) {
  require_closed_unit(p, "damping strength p");
  Matrix2c e1 = Matrix2c::Zero();
  e1(0, 1) = std::sqrt(p);
  return {diag2(1.0, std::sqrt(1.0 - p)), e1};
}

std::array<Matrix4c, 2> cad_kraus(double p) {
  require_closed_unit(p, "damping strength p");
  Matrix4c a0 = Matrix4c::Identity();
  a0(3, 3) = std::sqrt(1.0 - p);
  Matrix4c a1 = Matrix4c::Zero();
  a1(0, 3) = std::sqrt(p);
  return {a0, a1};
}

Matrix4c wm_operator(double q, WmrMode mode) {
  const double s = std::sqrt(1.0 - q);
  switch (mode) {
    case WmrMode::None: return Matrix4c::Identity();
    case WmrMode::OneQubit: return kron(Matrix2c::Identity(), diag2(1.0, s));
    case WmrMode::TwoQubit: return kron(diag2(1.0, s), diag2(1.0, s));
  }
  return Matrix4c::Identity();
}

Matrix4c qmr_operator(double r, WmrMode mode) {
  const double s = std::sqrt(1.0 - r);
  switch (mode) {
    case WmrMode::None: return Matrix4c::Identity();
    case WmrMode::OneQubit: return kron(Matrix2c::Identity(), diag2(s, 1.0));
    case WmrMode::TwoQubit: return kron(diag2(s, 1.0), diag2(s, 1.0));
  }
  return Matrix4c::Identity();
}

DensityMatrix4 apply_ad_uncorrelated(const DensityMatrix4& rho, double p) {
  const auto e = ad_kraus(p);
  Matrix4c out = Matrix4c::Zero();
  for (const auto& a : e)
    for (const auto& b : e) out += sandwich(kron(a, b), rho.matrix());
  return DensityMatrix4(out);
}

DensityMatrix4 apply_cad(const DensityMatrix4& rho, const ChannelParams& params) {
  params.validate();
  if (params.eta == 0.0) return apply_ad_uncorrelated(rho, params.p);
  const auto a = cad_kraus(params.p);
  Matrix4c correlated = sandwich(a[0], rho.matrix()) + sandwich(a[1], rho.matrix());
  if (params.eta == 1.0) return DensityMatrix4(correlated);
  const Matrix4c uncorrelated = apply_ad_uncorrelated(rho, params.p).matrix();
  return DensityMatrix4((1.0 - params.eta) * uncorrelated + params.eta * correlated);
}

MeasuredState apply_wm(const DensityMatrix4& rho, double q, WmrMode mode) {
  require_half_open_unit(q, "weak-measurement strength q");
  if (q == 0.0 || mode == WmrMode::None) return {rho, 1.0};
  return apply_diagonal_measurement(rho, wm_operator(q, mode));
}

MeasuredState apply_qmr(const DensityMatrix4& rho, double r, WmrMode mode) {
  require_half_open_unit(r, "reversal strength r");
  if (r == 0.0 || mode == WmrMode::None) return {rho, 1.0};
  return apply_diagonal_measurement(rho, qmr_operator(r, mode));
}

PipelineOutput wmr_pipeline(const DensityMatrix4& rho, const ChannelParams& channel,
                            const WmrParams& wmr) {
  channel.validate();
  wmr.validate();
  if (wmr.mode == WmrMode::None) return {apply_cad(rho, channel), 1.0};
  const MeasuredState weak = apply_wm(rho, wmr.q, wmr.mode);
  const DensityMatrix4 damped = apply_cad(weak.state, channel);
  const MeasuredState reversed = apply_qmr(damped, wmr.r, wmr.mode);
  return {reversed.state, weak.trace_before_norm * reversed.trace_before_norm};
}

}  // namespace cadwmr
