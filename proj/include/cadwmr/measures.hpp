#pragma once

// Correlation quantities of a two-qubit state: JSD coherence, concurrence,
// dense-coding capacity, optimal teleportation fidelity, trace-distance
// discord and the entropic EPR-steering quantity.

#include <array>
#include <optional>
#include <string_view>

#include "cadwmr/qstate.hpp"

namespace cadwmr {

/// Tolerance used to decide whether the X-state closed forms apply.
inline constexpr double kXStateTol = 1e-10;

double jsd_coherence(const DensityMatrix4& rho);

/// Eigenvalues of rho * (sy x sy) rho^* (sy x sy), descending and clamped at 0.
/// Uses a general complex eigensolver; throws NumericalError if an eigenvalue
/// has an imaginary part above 1e-8.
std::array<double, 4> spin_flip_spectrum(const DensityMatrix4& rho);

/// Same spectrum from the X-state structure:
/// (sqrt(r11 r44) +- |r14|)^2 and (sqrt(r22 r33) +- |r23|)^2.
std::array<double, 4> spin_flip_spectrum_x(const DensityMatrix4& rho);

/// Wootters concurrence. X-states take the structural spectrum (no square
/// roots of round-off), other states the general eigensolver.
double concurrence(const DensityMatrix4& rho);
double concurrence_from_spectrum(const std::array<double, 4>& lambdas);

double dense_coding_capacity(const DensityMatrix4& rho);

/// Fully entangled fraction: largest eigenvalue of Re(B^dagger rho B) in the
/// magic basis {Phi+, i Phi-, i Psi+, Psi-}.
double fully_entangled_fraction(const DensityMatrix4& rho);
double teleportation_fidelity(const DensityMatrix4& rho);

struct FanoBlochX {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double x_a3 = 0.0;
};

/// Coherences enter by modulus, i.e. after the local phase rotation that makes
/// rho_14 and rho_23 real and nonnegative (identical for such states).
FanoBlochX fano_bloch_x(const DensityMatrix4& rho);

/// X-state closed form; throws UnsupportedStateError on non-X input.
double trace_distance_discord(const DensityMatrix4& rho);

struct SteeringCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double r_marg = 0.0;
  double s_marg = 0.0;
};

SteeringCoefficients steering_coefficients(const DensityMatrix4& rho);

/// Left-hand side of the entropic steering inequality for X-states (steering
/// is demonstrated when the value exceeds 2). Throws UnsupportedStateError on
/// non-X input and NumericalError on a log argument below -1e-12.
double epr_steering(const DensityMatrix4& rho);

enum class Measure { Chi = 0, Fidelity, Concurrence, Qs, Tdd, Jsd };
inline constexpr std::array<Measure, 6> kAllMeasures = {Measure::Chi, Measure::Fidelity,
                                                        Measure::Concurrence, Measure::Qs,
                                                        Measure::Tdd, Measure::Jsd};
std::string_view measure_name(Measure m);  // chi, fidelity, concurrence, qs, tdd, jsd

struct CorrelationVector {
  double chi = 0.0;
  double fidelity = 0.0;
  double concurrence = 0.0;
  std::optional<double> qs;   // absent for non-X states
  std::optional<double> tdd;  // absent for non-X states
  double jsd = 0.0;

  std::optional<double> get(Measure m) const;
  void set(Measure m, double value);
};

CorrelationVector correlation_vector(const DensityMatrix4& rho);

struct NormalizationEntry {
  double max = 1.0;
  double classical_limit = 0.0;
};

/// Per-measure maximum and classical limit, indexed by Measure.
struct NormalizationTable {
  std::array<NormalizationEntry, 6> entries{};

  static NormalizationTable standard();
  const NormalizationEntry& operator[](Measure m) const {
    return entries[static_cast<std::size_t>(m)];
  }
  NormalizationEntry& operator[](Measure m) { return entries[static_cast<std::size_t>(m)]; }
};

/// (x - classical) / (max - classical) per component; throws ConfigError on a
/// zero denominator. Values below 0 are kept.
CorrelationVector normalize(const CorrelationVector& v, const NormalizationTable& table);

}  // namespace cadwmr
