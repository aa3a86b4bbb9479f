#pragma once

// Amplitude-damping channels with optional correlation (memory) between the
// two qubits, and the weak-measurement / measurement-reversal sandwich around
// them.

#include <string_view>

#include "cadwmr/qstate.hpp"

namespace cadwmr {

/// Damping strength p and memory eta, both in [0, 1].
struct ChannelParams {
  double p = 0.0;
  double eta = 0.0;

  void validate() const;
};

enum class WmrMode { None, OneQubit, TwoQubit };

WmrMode parse_wmr_mode(std::string_view name);  // "none", "wm1", "wm2"
std::string_view wmr_mode_name(WmrMode mode);

/// Weak-measurement strength q and reversal strength r, both in [0, 1).
/// The same strengths are used on both qubits in TwoQubit mode; OneQubit acts
/// on the second qubit only.
struct WmrParams {
  double q = 0.0;
  double r = 0.0;
  WmrMode mode = WmrMode::None;

  void validate() const;
};

/// Result of a non-trace-preserving step: the renormalized state and the
/// trace it had before renormalization.
struct MeasuredState {
  DensityMatrix4 state;
  double trace_before_norm = 1.0;
};

struct PipelineOutput {
  DensityMatrix4 state;
  double success_probability = 1.0;
};

/// Single-qubit damping Kraus pair {E0, E1}.
std::array<Matrix2c, 2> ad_kraus(double p);

/// Fully correlated two-qubit Kraus pair {A0, A1}.
std::array<Matrix4c, 2> cad_kraus(double p);

/// Diagonal weak-measurement operator for the given mode.
Matrix4c wm_operator(double q, WmrMode mode);
/// Diagonal reversal operator for the given mode.
Matrix4c qmr_operator(double r, WmrMode mode);

DensityMatrix4 apply_ad_uncorrelated(const DensityMatrix4& rho, double p);
DensityMatrix4 apply_cad(const DensityMatrix4& rho, const ChannelParams& params);

/// Strength 0 (or mode None) returns the input unchanged with weight 1.
/// Throws DegenerateMeasurementError when Tr(M rho M^dagger) < 1e-14.
MeasuredState apply_wm(const DensityMatrix4& rho, double q, WmrMode mode);
MeasuredState apply_qmr(const DensityMatrix4& rho, double r, WmrMode mode);

/// WM -> CAD -> QMR, renormalized. Mode None reduces to apply_cad.
PipelineOutput wmr_pipeline(const DensityMatrix4& rho, const ChannelParams& channel,
                            const WmrParams& wmr);

}  // namespace cadwmr
