#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cadwmr/dataset.hpp"
#include "cadwmr/errors.hpp"
#include "cadwmr/oracles.hpp"
#include "cadwmr/sweep.hpp"

using namespace cadwmr;

namespace {

std::string csv_of(const SweepTable& t) {
  std::ostringstream os;
  write_sweep_csv(os, t);
  return os.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("sweep header layout") {
  CHECK(sweep_csv_header(false, false) == "sweep_var,value,chi,fidelity,concurrence,qs,tdd,jsd");
  CHECK(sweep_csv_header(true, false) ==
        "sweep_var,value,chi,fidelity,concurrence,qs,tdd,jsd,n_chi,n_fidelity,n_concurrence,n_qs,n_tdd,n_jsd");
  CHECK(sweep_csv_header(true, true) ==
        "sweep_var,value,chi,fidelity,concurrence,qs,tdd,jsd,n_chi,n_fidelity,n_concurrence,n_qs,n_tdd,n_jsd,"
        "r_star,success_prob");
  CHECK(sweep_csv_header(false, true) == "sweep_var,value,chi,fidelity,concurrence,qs,tdd,jsd,r_star,success_prob");
}

TEST_CASE("pristine endpoint of a Bell p-sweep") {
  SweepConfig cfg;
  cfg.points = 201;
  const SweepTable t = run_sweep(cfg);
  REQUIRE(t.rows.size() == 201);
  CHECK(t.values.front() == 0.0);
  CHECK(t.values.back() == 1.0);
  CHECK(t.rows.front().raw.concurrence == doctest::Approx(1.0));
  CHECK(t.rows.front().raw.chi == doctest::Approx(2.0));
  CHECK(*t.rows.front().raw.qs == doctest::Approx(6.0));
  const auto lines = lines_of(csv_of(t));
  CHECK(lines.size() == 202);
  CHECK(lines[1].rfind("p,0,", 0) == 0);
}

TEST_CASE("sweep configuration errors") {
  SweepConfig cfg;
  cfg.variable = SweepVariable::Q;
  CHECK_THROWS_AS(run_sweep(cfg), ConfigError);  // q sweep without a reversal protocol
  cfg = {};
  cfg.variable = SweepVariable::Alpha2;
  CHECK_THROWS_AS(run_sweep(cfg), ConfigError);  // alpha2 sweep needs the nme family
  cfg = {};
  cfg.points = 1;
  CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
  cfg = {};
  cfg.eta = 1.5;
  CHECK_THROWS_AS(run_sweep(cfg), DomainError);
  cfg = {};
  cfg.family = StateFamily::werner(2.0);
  CHECK_THROWS_AS(run_sweep(cfg), DomainError);
  CHECK_THROWS_AS(parse_sweep_variable("x"), ConfigError);
}

TEST_CASE("q sweep reports the optimal reversal and its success probability") {
  SweepConfig cfg;
  cfg.family = StateFamily::werner(0.8);
  cfg.eta = 1.0;
  cfg.mode = WmrMode::TwoQubit;
  cfg.variable = SweepVariable::Q;
  cfg.points = 11;
  const SweepTable t = run_sweep(cfg);
  CHECK(t.with_reversal);
  CHECK(t.values.back() == doctest::Approx(0.99));
  for (const PointResult& r : t.rows) {
    REQUIRE(r.r_star.has_value());
    CHECK(*r.r_star >= 0.0);
    CHECK(*r.r_star < 1.0);
    CHECK(r.success_probability > 0.0);
    CHECK(r.success_probability <= 1.0);
  }
  const auto lines = lines_of(csv_of(t));
  CHECK(lines[0].find(",r_star,success_prob") != std::string::npos);
}

TEST_CASE("alpha2 sweep on non-maximally entangled states") {
  SweepConfig cfg;
  cfg.family = StateFamily::nme(0.5);
  cfg.variable = SweepVariable::Alpha2;
  cfg.mode = WmrMode::TwoQubit;
  cfg.eta = 1.0;
  cfg.points = 21;
  const SweepTable t = run_sweep(cfg);
  // product states at both endpoints
  CHECK(t.rows.front().raw.concurrence == 0.0);
  CHECK(t.rows.back().raw.concurrence == 0.0);
  CHECK(t.rows[10].raw.concurrence > 0.5);
  for (const PointResult& r : t.rows) CHECK(r.raw.tdd.has_value());
}

TEST_CASE("serial and parallel sweeps are bit identical") {
  for (WmrMode mode : {WmrMode::None, WmrMode::OneQubit, WmrMode::TwoQubit}) {
    SweepConfig cfg;
    cfg.family = StateFamily::mems(0.8);
    cfg.eta = 0.5;
    cfg.mode = mode;
    cfg.points = 41;
    CHECK(csv_of(run_sweep(cfg, false)) == csv_of(run_sweep(cfg, true)));
  }
}

TEST_CASE("parallel evaluation rethrows the first failing point") {
  std::vector<PointSpec> specs(8);
  specs[5].channel.p = 2.0;
  specs[6].q = 1.5;
  specs[6].mode = WmrMode::TwoQubit;
  CHECK_THROWS_WITH_AS(evaluate_points_parallel(specs), doctest::Contains("damping"), DomainError);
}

TEST_CASE("zero crossings by linear interpolation") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 0.5, -0.5, -1.0};
  const auto c = zero_crossings(x, y);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == doctest::Approx(1.5));
  CHECK(zero_crossings(x, std::vector<double>{1, 2, 3, 4}).empty());
  CHECK_THROWS_AS(zero_crossings(x, std::vector<double>{1, 2}), ConfigError);
}

TEST_CASE("Bell dataset endpoints") {
  const Dataset d = build_dataset(StateFamily::bell(), Scenario::NoWmr, 0.0, 101);
  REQUIRE(d.rows.size() == 101);
  const DatasetRow& first = d.rows.front();
  CHECK(first.features[0] == doctest::Approx(0.5579).epsilon(1e-4));  // jsd
  CHECK(first.features[1] == doctest::Approx(1.0));                    // concurrence
  CHECK(first.features[2] == doctest::Approx(1.0));                    // fidelity
  CHECK(first.features[3] == doctest::Approx(6.0));                    // qs
  CHECK(first.features[4] == doctest::Approx(2.0));                    // chi
  CHECK(first.target == doctest::Approx(0.5));
  const DatasetRow& last = d.rows.back();
  CHECK(last.sweep_value == 1.0);
  CHECK(last.features[0] == doctest::Approx(0.0));
  CHECK(last.features[1] == doctest::Approx(0.0));
  CHECK(last.features[2] == doctest::Approx(2.0 / 3.0));
  CHECK(last.features[3] == doctest::Approx(2.0));
  CHECK(last.features[4] == doctest::Approx(1.0));
  CHECK(last.target == doctest::Approx(0.0));
}

TEST_CASE("reversal dataset is finite with a monotone q column") {
  const Dataset d = build_dataset(StateFamily::werner(0.8), Scenario::WmrTwoQubit, 1.0, 101);
  CHECK(d.sweep_var == "q");
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    if (i > 0) CHECK(d.rows[i].sweep_value > d.rows[i - 1].sweep_value);
    for (double f : d.rows[i].features) CHECK(std::isfinite(f));
    CHECK(std::isfinite(d.rows[i].target));
  }
  CHECK_THROWS_AS(build_dataset(StateFamily::bell(), Scenario::NoWmr, 0.0, 49), ConfigError);
}

TEST_CASE("dataset CSV round trip") {
  const Dataset d = build_dataset(StateFamily::mems(0.8), Scenario::NoWmr, 1.0, 60);
  std::stringstream ss;
  write_dataset_csv(ss, d);
  const std::string text = ss.str();
  CHECK(text.rfind("scenario,eta,sweep_var,sweep_value,jsd,concurrence,fidelity,qs,chi,tdd\n", 0) == 0);
  std::istringstream is(text);
  const Dataset back = read_dataset_csv(is);
  REQUIRE(back.rows.size() == d.rows.size());
  CHECK(back.scenario == d.scenario);
  CHECK(back.eta == d.eta);
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    CHECK(back.rows[i].features == d.rows[i].features);
    CHECK(back.rows[i].target == d.rows[i].target);
  }
}

TEST_CASE("malformed dataset CSV names the row and column") {
  const std::string header = "scenario,eta,sweep_var,sweep_value,jsd,concurrence,fidelity,qs,chi,tdd\n";
  {
    std::istringstream is(header + "no_wmr,0,p,0,0.1,0.2,0.3,0.4,0.5,0.6\nno_wmr,0,p,0.1,0.1,abc,0.3,0.4,0.5,0.6\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(is), doctest::Contains("row 3, column 6 (concurrence)"), ParseError);
  }
  {
    std::istringstream is(header + "no_wmr,0,p,0,0.1,0.2\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(is), doctest::Contains("row 2"), ParseError);
  }
  {
    std::istringstream is("scenario,eta,foo\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(is), doctest::Contains("row 1, column 3"), ParseError);
  }
  {
    std::istringstream is(header + "later,0,p,0,0.1,0.2,0.3,0.4,0.5,0.6\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(is), doctest::Contains("column 1 (scenario)"), ParseError);
  }
  {
    std::istringstream is(header + "no_wmr,0,p,0,0.1,0.2,0.3,0.4,0.5,nan\n");
    CHECK_THROWS_AS(read_dataset_csv(is), ParseError);
  }
}

TEST_CASE("scenario names") {
  CHECK(parse_scenario("no_wmr") == Scenario::NoWmr);
  CHECK(scenario_name(Scenario::WmrTwoQubit) == "wmr_two_qubit");
  CHECK_THROWS_AS(parse_scenario("wm1"), ConfigError);
}

TEST_CASE("disturbance grid kernels agree") {
  oracle::Rng rng(41);
  for (int i = 0; i < 3; ++i) {
    const DensityMatrix4 x = oracle::random_x_state(rng);
    const oracle::GridSpec grid{90, 180};
    const oracle::GridMinimum a = oracle::disturbance_grid_serial(x.matrix(), grid);
    const oracle::GridMinimum b = oracle::disturbance_grid_parallel(x.matrix(), grid);
    CHECK(a.value == b.value);
    CHECK(a.at.theta == b.at.theta);
    CHECK(a.at.phi == b.at.phi);
  }
}
