#include "cadwmr/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "cadwmr/measures.hpp"

namespace cadwmr::oracle {

namespace {

Matrix2c bloch_projector(const BlochDirection& n) {
  const double x = std::sin(n.theta) * std::cos(n.phi);
  const double y = std::sin(n.theta) * std::sin(n.phi);
  const double z = std::cos(n.theta);
  Matrix2c p;
  p << 0.5 * (1.0 + z), Complex(0.5 * x, -0.5 * y), Complex(0.5 * x, 0.5 * y), 0.5 * (1.0 - z);
  return p;
}

BlochDirection grid_point(const GridSpec& grid, int i, int j) {
  return {std::numbers::pi * i / grid.theta_steps, 2.0 * std::numbers::pi * j / grid.phi_steps};
}

// Row i of the grid; each row is independent so the parallel scan can split on it.
GridMinimum scan_row(const Matrix4c& rho, const GridSpec& grid, int i) {
  GridMinimum best{std::numeric_limits<double>::infinity(), {}};
  for (int j = 0; j < grid.phi_steps; ++j) {
    const BlochDirection n = grid_point(grid, i, j);
    const double v = measurement_disturbance(rho, n);
    if (v < best.value) best = {v, n};
  }
  return best;
}

struct Simplex2 {
  std::array<std::array<double, 2>, 3> x;
  std::array<double, 3> f;
};

GridMinimum nelder_mead(const Matrix4c& rho, BlochDirection start, double step) {
  auto eval = [&](const std::array<double, 2>& v) {
    return measurement_disturbance(rho, {v[0], v[1]});
  };
  Simplex2 s;
  s.x = {{{start.theta, start.phi}, {start.theta + step, start.phi}, {start.theta, start.phi + step}}};
  for (int k = 0; k < 3; ++k) s.f[k] = eval(s.x[k]);

  for (int iter = 0; iter < 4000; ++iter) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
    const auto best = s.x[order[0]];
    const auto mid = s.x[order[1]];
    const auto worst = s.x[order[2]];
    const double fb = s.f[order[0]], fm = s.f[order[1]], fw = s.f[order[2]];
    const double size = std::max(std::hypot(mid[0] - best[0], mid[1] - best[1]),
                                 std::hypot(worst[0] - best[0], worst[1] - best[1]));
    if (size < 1e-13 || (fw - fb) < 1e-16 * std::max(1.0, std::abs(fb))) break;

    const std::array<double, 2> c{0.5 * (best[0] + mid[0]), 0.5 * (best[1] + mid[1])};
    auto along = [&](double t) {
      return std::array<double, 2>{c[0] + t * (worst[0] - c[0]), c[1] + t * (worst[1] - c[1])};
    };
    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fb) {
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        s.x[order[2]] = xe, s.f[order[2]] = fe;
      } else {
        s.x[order[2]] = xr, s.f[order[2]] = fr;
      }
      continue;
    }
    if (fr < fm) {
      s.x[order[2]] = xr, s.f[order[2]] = fr;
      continue;
    }
    const auto xc = fr < fw ? along(-0.5) : along(0.5);
    const double fc = eval(xc);
    if (fc < std::min(fr, fw)) {
      s.x[order[2]] = xc, s.f[order[2]] = fc;
      continue;
    }
    // shrink toward best
    for (int k : {order[1], order[2]}) {
      s.x[k] = {best[0] + 0.5 * (s.x[k][0] - best[0]), best[1] + 0.5 * (s.x[k][1] - best[1])};
      s.f[k] = eval(s.x[k]);
    }
  }
  const int k = static_cast<int>(std::min_element(s.f.begin(), s.f.end()) - s.f.begin());
  return {s.f[k], {s.x[k][0], s.x[k][1]}};
}

double binary_entropy_of(std::span<const double> p) { return shannon_entropy_bits(p); }

}  // namespace

double measurement_disturbance(const Matrix4c& rho, const BlochDirection& n) {
  const Matrix2c p2 = bloch_projector(n);
  const Matrix4c p = kron(p2, Matrix2c::Identity());
  const Matrix4c q = Matrix4c::Identity() - p;
  const Matrix4c d = p * rho * q + q * rho * p;  // rho - (P rho P + Q rho Q)
  const Spectrum s = hermitian_eigenvalues(d);
  double norm = 0.0;
  for (double v : s.values) norm += std::abs(v);
  return norm;
}

GridMinimum disturbance_grid_serial(const Matrix4c& rho, const GridSpec& grid) {
  GridMinimum best{std::numeric_limits<double>::infinity(), {}};
  for (int i = 0; i <= grid.theta_steps; ++i) {
    const GridMinimum row = scan_row(rho, grid, i);
    if (row.value < best.value) best = row;
  }
  return best;
}

GridMinimum disturbance_grid_parallel(const Matrix4c& rho, const GridSpec& grid) {
  std::vector<GridMinimum> rows(static_cast<std::size_t>(grid.theta_steps) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i <= grid.theta_steps; ++i) rows[i] = scan_row(rho, grid, i);
  GridMinimum best{std::numeric_limits<double>::infinity(), {}};
  for (const auto& row : rows)
    if (row.value < best.value) best = row;
  return best;
}

GridMinimum trace_distance_discord_oracle(const DensityMatrix4& rho, const GridSpec& grid) {
  const GridMinimum coarse = disturbance_grid_parallel(rho.matrix(), grid);
  const double step = std::numbers::pi / grid.theta_steps;
  GridMinimum refined = nelder_mead(rho.matrix(), coarse.at, step);
  // restart once from the refined point to escape a collapsed simplex
  const GridMinimum again = nelder_mead(rho.matrix(), refined.at, 0.1 * step);
  if (again.value < refined.value) refined = again;
  return refined.value < coarse.value ? refined : coarse;
}

double steering_from_conditional_entropies(const DensityMatrix4& rho) {
  Matrix2c paulis[3];
  paulis[0] << 0.0, 1.0, 1.0, 0.0;
  paulis[1] << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  paulis[2] << 1.0, 0.0, 0.0, -1.0;
  double conditional_sum = 0.0;
  for (const auto& s : paulis) {
    const Matrix2c plus = 0.5 * (Matrix2c::Identity() + s);
    const Matrix2c minus = 0.5 * (Matrix2c::Identity() - s);
    const Matrix2c proj[2] = {plus, minus};
    std::array<double, 4> joint{};
    std::array<double, 2> alice{};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double prob = (kron(proj[a], proj[b]) * rho.matrix()).trace().real();
        joint[2 * a + b] = prob;
        alice[a] += prob;
      }
    }
    conditional_sum += binary_entropy_of(joint) - binary_entropy_of(alice);
  }
  return 6.0 - 2.0 * conditional_sum;
}

double pure_state_concurrence(const Vector4c& psi) {
  return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

namespace {

template <int N>
Eigen::Matrix<Complex, N, N> random_unitary(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix<Complex, N, N> z;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::Matrix<Complex, N, N>> qr(z);
  Eigen::Matrix<Complex, N, N> q = qr.householderQ();
  const Eigen::Matrix<Complex, N, N> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < N; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

Matrix2c random_unitary2(Rng& rng) { return random_unitary<2>(rng); }
Matrix4c random_unitary4(Rng& rng) { return random_unitary<4>(rng); }

Matrix4c random_hermitian(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix4c m;
  for (int i = 0; i < 4; ++i) {
    m(i, i) = u(rng);
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = Complex(u(rng), u(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

DensityMatrix4 random_density_matrix(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix4c z;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = Complex(g(rng), g(rng));
  const Matrix4c m = z * z.adjoint();
  return DensityMatrix4(m / m.trace().real());
}

DensityMatrix4 random_x_state(Rng& rng, bool real_only) {
  std::exponential_distribution<double> e(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> pop{};
  double total = 0.0;
  for (double& v : pop) total += (v = e(rng));
  for (double& v : pop) v /= total;
  auto phase = [&] {
    if (real_only) return Complex(u(rng) < 0.5 ? 1.0 : -1.0, 0.0);
    return std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
  };
  const Complex c14 = std::sqrt(pop[0] * pop[3]) * u(rng) * phase();
  const Complex c23 = std::sqrt(pop[1] * pop[2]) * u(rng) * phase();
  Matrix4c m = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) m(i, i) = pop[i];
  m(0, 3) = c14;
  m(3, 0) = std::conj(c14);
  m(1, 2) = c23;
  m(2, 1) = std::conj(c23);
  return DensityMatrix4(m);
}

}  // namespace cadwmr::oracle
