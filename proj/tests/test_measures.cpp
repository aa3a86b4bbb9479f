#include <doctest.h>

#include <cmath>
#include <random>

#include "cadwmr/channel.hpp"
#include "cadwmr/errors.hpp"
#include "cadwmr/measures.hpp"
#include "cadwmr/oracles.hpp"
#include "cadwmr/sweep.hpp"

using namespace cadwmr;

namespace {

const DensityMatrix4 kBell = make_state(StateFamily::bell());
const DensityMatrix4 kGround = DensityMatrix4::basis(0);
const DensityMatrix4 kMixed = make_state(StateFamily::werner(0.0));

double h2(double p) { return (p <= 0 || p >= 1) ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

DensityMatrix4 conjugated(const DensityMatrix4& rho, const Matrix4c& u) {
  return DensityMatrix4(u * rho.matrix() * u.adjoint());
}

// Reduced state of the second qubit.
Matrix2c partial_trace_first(const Matrix4c& m) {
  Matrix2c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m(i, j) + m(2 + i, 2 + j);
  return out;
}

double entropy2(const Matrix2c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(m);
  double h = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-300) h -= l * std::log2(l);
  }
  return h;
}

}  // namespace

TEST_CASE("JSD coherence") {
  // (rho + rho_d)/2 has spectrum {3/4, 1/4}; S(rho) = 0; S(rho_d) = 1
  const double oracle = std::sqrt(h2(0.25) - 0.5);
  CHECK(oracle == doctest::Approx(0.5579).epsilon(1e-4));
  CHECK(jsd_coherence(kBell) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(jsd_coherence(kGround) == 0.0);
  CHECK(jsd_coherence(make_state(StateFamily::mems(0.0))) == doctest::Approx(0.0));
  CHECK(jsd_coherence(kMixed) == doctest::Approx(0.0));
}

TEST_CASE("concurrence reference values") {
  CHECK(concurrence(kBell) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(concurrence(make_state(StateFamily::werner(0.8))) == doctest::Approx((3 * 0.8 - 1) / 2).epsilon(1e-13));
  CHECK(concurrence(kMixed) == 0.0);
  // general eigen path on the same Werner state
  const auto lambdas = spin_flip_spectrum(make_state(StateFamily::werner(0.8)));
  CHECK(concurrence_from_spectrum(lambdas) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("concurrence of pure states") {
  for (int k = 0; k <= 100; ++k) {
    const double a2 = k / 100.0;
    CHECK(std::abs(concurrence(make_state(StateFamily::nme(a2))) - 2 * std::sqrt(a2 * (1 - a2))) <= 1e-10);
  }
  oracle::Rng rng(21);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    Vector4c psi;
    for (int k = 0; k < 4; ++k) psi(k) = Complex(g(rng), g(rng));
    psi.normalize();
    CHECK(std::abs(concurrence(DensityMatrix4::from_pure(psi)) - oracle::pure_state_concurrence(psi)) <= 1e-6);
  }
}

TEST_CASE("structural and general spin-flip spectra agree on X-states") {
  oracle::Rng rng(22);
  for (int i = 0; i < 500; ++i) {
    const DensityMatrix4 x = oracle::random_x_state(rng);
    CHECK(std::abs(concurrence_from_spectrum(spin_flip_spectrum_x(x)) -
                   concurrence_from_spectrum(spin_flip_spectrum(x))) <= 1e-6);
  }
}

TEST_CASE("dense coding capacity") {
  CHECK(dense_coding_capacity(kBell) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dense_coding_capacity(kGround) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(dense_coding_capacity(kMixed)) <= 1e-12);
  // oracle: the encoded average is I/2 (x) rho_B, so chi = 1 + S(rho_B) - S(rho)
  oracle::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix4 rho = oracle::random_density_matrix(rng);
    const double expected = 1.0 + entropy2(partial_trace_first(rho.matrix())) - von_neumann_entropy(rho);
    CHECK(dense_coding_capacity(rho) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("teleportation fidelity") {
  CHECK(teleportation_fidelity(kBell) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(teleportation_fidelity(kGround) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(teleportation_fidelity(kMixed) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(fully_entangled_fraction(kGround) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("fully entangled fraction bounds every maximally entangled overlap") {
  oracle::Rng rng(24);
  const Vector4c phi_plus = Vector4c(1, 0, 0, 1) / std::sqrt(2.0);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix4 rho = oracle::random_density_matrix(rng);
    const double fef = fully_entangled_fraction(rho);
    double best = 0.0;
    for (int k = 0; k < 4000; ++k) {
      const Vector4c psi = kron(Matrix2c::Identity(), oracle::random_unitary2(rng)) * phi_plus;
      const double overlap = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
      CHECK(overlap <= fef + 1e-12);
      best = std::max(best, overlap);
    }
    CHECK(best >= fef - 5e-3);
  }
}

TEST_CASE("trace distance discord reference values") {
  CHECK(trace_distance_discord(kGround) == 0.0);
  CHECK(trace_distance_discord(make_state(StateFamily::werner(0.8))) == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(trace_distance_discord(kBell) == doctest::Approx(0.5).epsilon(1e-13));
  const DensityMatrix4 mems = make_state(StateFamily::mems(0.8));
  const double oracle = oracle::trace_distance_discord_oracle(mems).value;
  CHECK(trace_distance_discord(mems) == doctest::Approx(0.5 * oracle).epsilon(1e-8));
}

TEST_CASE("trace distance discord requires an X-state") {
  Vector4c plus0;
  plus0 << 1, 0, 1, 0;
  CHECK_THROWS_AS(trace_distance_discord(DensityMatrix4::from_pure(plus0.normalized())), UnsupportedStateError);
  CHECK_THROWS_AS(epr_steering(DensityMatrix4::from_pure(plus0.normalized())), UnsupportedStateError);
}

TEST_CASE("closed-form discord is half the measurement-disturbance minimum") {
  oracle::Rng rng(25);
  const oracle::GridSpec grid{36, 72};
  double lo = 1e300, hi = -1e300;
  int used = 0;
  while (used < 200) {
    const DensityMatrix4 x = oracle::random_x_state(rng, used % 2 == 0);
    const double closed = trace_distance_discord(x);
    if (closed < 1e-6) continue;
    const double ratio = closed / oracle::trace_distance_discord_oracle(x, grid).value;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ++used;
  }
  CHECK(hi - lo <= 1e-6);
  CHECK(0.5 * (hi + lo) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("discord degenerate branch is continuous") {
  for (double rb : {0.1, 0.5, 0.8, 1.0}) {
    const DensityMatrix4 w = make_state(StateFamily::werner(rb));
    Matrix4c m = w.matrix();
    m(1, 1) += 1e-6;
    m(2, 2) -= 1e-6;
    m(1, 2) += 1e-6;
    m(2, 1) += 1e-6;
    CHECK(std::abs(trace_distance_discord(DensityMatrix4(m)) - trace_distance_discord(w)) < 1e-4);
  }
}

TEST_CASE("steering quantity reference values") {
  CHECK(epr_steering(kBell) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(epr_steering(kGround) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(epr_steering(kMixed)) <= 1e-13);
  CHECK(oracle::steering_from_conditional_entropies(kBell) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(oracle::steering_from_conditional_entropies(kGround) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(oracle::steering_from_conditional_entropies(kMixed)) <= 1e-13);
}

TEST_CASE("steering closed form against conditional entropies") {
  // The closed form carries +(1-r)log2(1-r) where the entropic quantity has a
  // minus sign; everything else coincides.
  oracle::Rng rng(26);
  for (int i = 0; i < 500; ++i) {
    const DensityMatrix4 x = oracle::random_x_state(rng);
    const double m = 1.0 - steering_coefficients(x).r_marg;
    const double marginal = m > 0 ? 2 * m * std::log2(m) : 0.0;
    CHECK(epr_steering(x) == doctest::Approx(oracle::steering_from_conditional_entropies(x) + marginal).epsilon(1e-12));
  }
  // Bell-diagonal states have r = 0 and the two agree exactly
  for (double rb : {0.2, 0.6, 0.9}) {
    const DensityMatrix4 w = make_state(StateFamily::werner(rb));
    CHECK(epr_steering(w) == doctest::Approx(oracle::steering_from_conditional_entropies(w)).epsilon(1e-12));
  }
}

TEST_CASE("entropic steering quantity lies in [0, 6]") {
  oracle::Rng rng(27);
  for (int i = 0; i < 2000; ++i) {
    const double v = oracle::steering_from_conditional_entropies(oracle::random_density_matrix(rng));
    CHECK(v >= -1e-12);
    CHECK(v <= 6.0 + 1e-12);
  }
}

TEST_CASE("local unitary invariance") {
  oracle::Rng rng(28);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix4 rho = oracle::random_density_matrix(rng);
    const DensityMatrix4 t = conjugated(rho, kron(oracle::random_unitary2(rng), oracle::random_unitary2(rng)));
    CHECK(std::abs(concurrence(rho) - concurrence(t)) <= 1e-8);
    CHECK(std::abs(teleportation_fidelity(rho) - teleportation_fidelity(t)) <= 1e-8);
    CHECK(std::abs(dense_coding_capacity(rho) - dense_coding_capacity(t)) <= 1e-8);
  }
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix4 x = oracle::random_x_state(rng);
    const DensityMatrix4 t = conjugated(x, kron(oracle::random_unitary2(rng), oracle::random_unitary2(rng)));
    const oracle::GridSpec grid{36, 72};
    CHECK(std::abs(oracle::trace_distance_discord_oracle(x, grid).value -
                   oracle::trace_distance_discord_oracle(t, grid).value) <= 1e-8);
  }
}

TEST_CASE("steering oracle is invariant under matched Clifford rotations") {
  // u (x) conj(u) with u Clifford permutes the Pauli triad identically on both
  // sides (up to signs), which leaves the sum of conditional entropies fixed.
  const double s = 1.0 / std::sqrt(2.0);
  Matrix2c h, ph;
  h << s, s, s, -s;
  ph << 1, 0, 0, Complex(0, 1);
  oracle::Rng rng(29);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix4 rho = oracle::random_density_matrix(rng);
    const double base = oracle::steering_from_conditional_entropies(rho);
    Matrix2c u = Matrix2c::Identity();
    for (int k = 0; k < 12; ++k) {
      u = ((k * 7 + i) % 3 == 0 ? ph : h) * u;
      const DensityMatrix4 t = conjugated(rho, kron(u, u.conjugate()));
      CHECK(std::abs(oracle::steering_from_conditional_entropies(t) - base) <= 1e-8);
    }
  }
}

TEST_CASE("correlation vectors of reference states") {
  const CorrelationVector b = correlation_vector(kBell);
  CHECK(b.chi == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(b.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.concurrence == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(*b.qs == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(*b.tdd == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.jsd == doctest::Approx(0.5579).epsilon(1e-4));

  const CorrelationVector m = correlation_vector(kMixed);
  CHECK(std::abs(m.chi) <= 1e-12);
  CHECK(m.fidelity == doctest::Approx(0.5));
  CHECK(m.concurrence == 0.0);
  CHECK(std::abs(*m.qs) <= 1e-12);
  CHECK(*m.tdd == 0.0);
  CHECK(std::abs(m.jsd) <= 1e-12);

  const CorrelationVector g = correlation_vector(kGround);
  CHECK(g.chi == doctest::Approx(1.0));
  CHECK(g.fidelity == doctest::Approx(2.0 / 3.0));
  CHECK(g.concurrence == 0.0);
  CHECK(*g.qs == doctest::Approx(2.0));
  CHECK(*g.tdd == 0.0);
  CHECK(g.jsd == 0.0);

  Vector4c plus0;
  plus0 << 1, 0, 1, 0;
  const CorrelationVector nx = correlation_vector(DensityMatrix4::from_pure(plus0.normalized()));
  CHECK_FALSE(nx.qs.has_value());
  CHECK_FALSE(nx.tdd.has_value());
}

TEST_CASE("normalization anchors") {
  const NormalizationTable t = NormalizationTable::standard();
  CorrelationVector v;
  v.qs = 6.0;
  v.chi = 1.0;
  v.fidelity = 2.0 / 3.0;
  v.tdd = 1.0;
  v.jsd = 0.56;
  v.concurrence = -0.5;
  const CorrelationVector n = normalize(v, t);
  CHECK(*n.qs == doctest::Approx(1.0));
  CHECK(n.chi == doctest::Approx(0.0));
  CHECK(std::abs(n.fidelity) <= 1e-15);
  CHECK(*n.tdd == doctest::Approx(1.0));
  CHECK(n.jsd == doctest::Approx(1.0));
  CHECK(n.concurrence == doctest::Approx(-0.5));  // below the classical limit is kept

  NormalizationTable bad = t;
  bad[Measure::Chi] = {1.0, 1.0};
  CHECK_THROWS_AS(normalize(v, bad), ConfigError);
}

TEST_CASE("normalization preserves componentwise order") {
  oracle::Rng rng(30);
  const NormalizationTable t = NormalizationTable::standard();
  for (int i = 0; i < 500; ++i) {
    const CorrelationVector a = correlation_vector(oracle::random_x_state(rng));
    const CorrelationVector b = correlation_vector(oracle::random_x_state(rng));
    const CorrelationVector na = normalize(a, t), nb = normalize(b, t);
    for (Measure m : kAllMeasures) CHECK((*a.get(m) < *b.get(m)) == (*na.get(m) < *nb.get(m)));
  }
}

TEST_CASE("hierarchy along the memoryless Bell decay") {
  SweepConfig cfg;
  cfg.family = StateFamily::bell();
  cfg.points = 2001;
  const SweepTable table = run_sweep(cfg, true);
  const NormalizationTable t = NormalizationTable::standard();
  std::vector<double> nqs, nc;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const CorrelationVector n = normalize(table.rows[i].raw, t);
    nqs.push_back(*n.qs);
    nc.push_back(n.concurrence);
    if (table.values[i] < 1.0 - 1e-4) CHECK(n.concurrence > 0.0);
    if (n.concurrence > 0.0) CHECK(*n.tdd > 0.0);
  }
  const auto qs_cross = zero_crossings(table.values, nqs);
  REQUIRE_FALSE(qs_cross.empty());
  // concurrence only reaches 0 at the p = 1 endpoint
  for (double c : zero_crossings(table.values, nc)) CHECK(c > 1.0 - 1e-3);
  CHECK(qs_cross.front() < 1.0);
}

TEST_CASE("measure names") {
  CHECK(measure_name(Measure::Chi) == "chi");
  CHECK(measure_name(Measure::Jsd) == "jsd");
}
