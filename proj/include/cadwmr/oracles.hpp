#pragma once

// Brute-force reference computations used to cross-check the closed forms,
// plus random state generators. Nothing here is used by the production
// measures; tests and the `verify` command link against it.

#include <cstdint>
#include <random>
#include <vector>

#include "cadwmr/qstate.hpp"

namespace cadwmr::oracle {

/// Projector direction on the first qubit's Bloch sphere.
struct BlochDirection {
  double theta = 0.0;
  double phi = 0.0;
};

/// || rho - Pi_n(rho) ||_1 where Pi_n dephases qubit a in the basis of
/// (I + n.sigma)/2 and its complement.
double measurement_disturbance(const Matrix4c& rho, const BlochDirection& n);

struct GridSpec {
  int theta_steps = 360;  // over [0, pi]
  int phi_steps = 720;    // over [0, 2 pi)
};

struct GridMinimum {
  double value = 0.0;
  BlochDirection at;
};

/// Exhaustive scan of the direction grid. Both variants return identical
/// results; ties resolve to the lowest (theta, phi) index.
GridMinimum disturbance_grid_serial(const Matrix4c& rho, const GridSpec& grid);
GridMinimum disturbance_grid_parallel(const Matrix4c& rho, const GridSpec& grid);

/// Grid scan followed by Nelder-Mead refinement. The returned value is the
/// trace-norm distance to the nearest classical-quantum state (no 1/2 factor).
GridMinimum trace_distance_discord_oracle(const DensityMatrix4& rho, const GridSpec& grid = {});

/// Steering quantity from the joint Pauli outcome statistics of any state:
/// 6 - 2 * sum_i H(sigma_i^b | sigma_i^a). On X-states this equals
/// epr_steering(rho) - 2 (1 - r) log2(1 - r), r being qubit a's z polarization.
double steering_from_conditional_entropies(const DensityMatrix4& rho);

/// Concurrence of a pure state a|00> + b|01> + c|10> + d|11>: 2|ad - bc|.
double pure_state_concurrence(const Vector4c& psi);

using Rng = std::mt19937_64;

/// Haar-like random unitary via QR of a complex Gaussian matrix.
Matrix2c random_unitary2(Rng& rng);
Matrix4c random_unitary4(Rng& rng);
/// Hermitian matrix with entries (real and imaginary parts) uniform in [-1, 1].
Matrix4c random_hermitian(Rng& rng);
/// G G^dagger / Tr with complex Gaussian G (full rank almost surely).
DensityMatrix4 random_density_matrix(Rng& rng);
/// Random X-state: Dirichlet populations, coherences with random modulus
/// (within positivity) and phase. real_only restricts phases to 0 or pi.
DensityMatrix4 random_x_state(Rng& rng, bool real_only = false);

}  // namespace cadwmr::oracle
