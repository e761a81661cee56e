#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "barons/errors.hpp"
#include "barons/harness.hpp"
#include "doctest.h"

using namespace barons;

namespace {
Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

RunConfig zero_config() {
  RunConfig cfg;
  cfg.domain = {DomainKind::Box, 2, 0.0, 1.0, ""};
  cfg.loss = LossFamily::LinearZero;
  cfg.T = 10;
  return cfg;
}

RunConfig portfolio_config(long T, std::uint64_t seed) {
  RunConfig cfg;
  cfg.domain = {DomainKind::ReducedSimplex, 4, 0.0, 1.0, ""};
  cfg.loss = LossFamily::PortfolioIid;
  cfg.T = T;
  cfg.seed = seed;
  cfg.record_wall_time = false;
  return cfg;
}

std::string csv_text(const Trace& t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}
}  // namespace

TEST_CASE("zero-gradient run") {
  const ExperimentResult res = run_experiment(zero_config());
  REQUIRE(res.trace.rows.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(res.trace.rows[i].t == static_cast<long>(i + 1));
    CHECK(res.trace.rows[i].loss == 0.0);
    CHECK_FALSE(res.trace.rows[i].landmark_updated);
    CHECK((res.iterates[i] - vec({0.5, 0.5})).norm() < 1e-12);
  }
  CHECK(res.landmark_updates == 0);
  CHECK(res.feasibility_violations == 0);
}

TEST_CASE("runs are bit-identical for the same seed") {
  const RunConfig cfg = portfolio_config(300, 7);
  ExperimentResult a = run_experiment(cfg);
  ExperimentResult b = run_experiment(cfg);
  summarize(a, cfg);
  summarize(b, cfg);
  CHECK(csv_text(a.trace) == csv_text(b.trace));
  RunConfig other = cfg;
  other.seed = 8;
  CHECK(csv_text(run_experiment(other).trace) != csv_text(run_experiment(cfg).trace));
}

TEST_CASE("trace metadata carries parameters and counters") {
  const RunConfig cfg = portfolio_config(200, 7);
  ExperimentResult res = run_experiment(cfg);
  summarize(res, cfg);
  for (const char* key : {"eta", "eps", "m_newton", "landmark_threshold", "lambda_target", "landmark_updates",
                          "gradient_oracle_calls", "hessian_oracle_calls", "comparator_delta", "comparator_bias",
                          "final_regret", "max_local_norm"}) {
    CHECK_MESSAGE(res.trace.get(key).has_value(), key);
  }
  CHECK(std::stol(*res.trace.get("landmark_updates")) == res.landmark_updates);
  CHECK(std::stod(*res.trace.get("comparator_delta")) == doctest::Approx(1e-8 * 200));
  // One Hessian per landmark plus the initial one; m_newton gradients per round.
  CHECK(std::stol(*res.trace.get("hessian_oracle_calls")) >= res.landmark_updates);
  CHECK(std::stol(*res.trace.get("gradient_oracle_calls")) >= 200);
}

TEST_CASE("comparator for constant returns approaches the shrunk vertex") {
  const long T = 5000;
  const Vector r = vec({2.0, 1.0});
  std::vector<LossRecord> log(T, PortfolioReturns{r});
  const BarrierPtr phi = make_log_barrier(build_reduced_simplex(2));
  const Vector center = vec({0.5});
  const double c = 1.0 / T;
  const Comparator comp = best_fixed_comparator(log, phi, center, c);

  // Grid search of sum l + delta Phi over the reduced simplex at resolution 1e-4.
  const double delta = 1e-8 * T;
  double best_x = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 10000; ++k) {
    const double x = k * 1e-4;
    const double f = -T * std::log(1.0 + x) + delta * (-std::log(x) - std::log(1.0 - x));
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  CHECK(std::abs(comp.w[0] - shrink_toward(vec({best_x}), c, center)[0]) <= 1e-4);
  CHECK(std::abs(comp.w[0] - shrink_toward(vec({1.0}), c, center)[0]) <= 1e-4);
  CHECK(comp.delta == doctest::Approx(delta));
  CHECK(comp.c == c);
}

TEST_CASE("symmetric and zero-loss comparators") {
  const BarrierPtr phi = make_log_barrier(build_reduced_simplex(2));
  std::vector<LossRecord> sym;
  for (int t = 0; t < 1000; ++t) sym.push_back(PortfolioReturns{t % 2 ? vec({2.0, 0.5}) : vec({0.5, 2.0})});
  CHECK(best_fixed_comparator(sym, phi, vec({0.5}), 1e-3).w[0] == doctest::Approx(0.5).epsilon(1e-9));

  auto iid = returns_iid(3, 2, 0.5, 1.5);
  std::vector<LossRecord> random;
  for (int t = 0; t < 4000; ++t) random.push_back(iid->next());
  CHECK(std::abs(best_fixed_comparator(random, phi, vec({0.5}), 1e-3).w[0] - 0.5) < 0.1);

  const BarrierPtr box = make_log_barrier(build_box(2, 0, 1));
  std::vector<LossRecord> zeros(50, LinearLoss{Vector::Zero(2)});
  const Comparator z = best_fixed_comparator(zeros, box, vec({0.5, 0.5}), 0.02);
  CHECK((z.w - vec({0.5, 0.5})).norm() < 1e-9);
  CHECK(std::abs(z.bias) < 1e-12);
}

TEST_CASE("regret curves") {
  ExperimentResult res = run_experiment(zero_config());
  const auto flat = regret_curve(res.trace, vec({0.2, 0.7}), res.loss_log);
  for (double v : flat) CHECK(v == 0.0);

  Trace one;
  one.rows.push_back({1, 0.0, 0.0, 0.0, false, 0.0, 0.0});
  const Vector w1 = vec({0.3, 0.6});
  const Vector g = vec({1.0, -2.0});
  one.rows[0].loss = g.dot(w1);
  const Vector comp = vec({0.5, 0.1});
  const auto curve = regret_curve(one, comp, {LinearLoss{g}});
  CHECK(curve.back() == doctest::Approx(g.dot(w1 - comp)));

  CHECK_THROWS_AS(regret_curve(one, comp, {}), DimensionMismatch);
}

TEST_CASE("two-asset regret matches an independent recomputation") {
  RunConfig cfg;
  cfg.domain = {DomainKind::ReducedSimplex, 2, 0.0, 1.0, ""};
  cfg.loss = LossFamily::PortfolioTwoAsset;
  cfg.T = 1000;
  ExperimentResult res = run_experiment(cfg);
  const double reg = summarize(res, cfg);
  const Comparator comp = best_fixed_comparator(res.loss_log, res.barrier, res.center, cfg.shrink_c());
  double recomputed = 0.0;
  for (std::size_t t = 0; t < res.loss_log.size(); ++t) {
    const Vector& r = std::get<PortfolioReturns>(res.loss_log[t]).r;
    const double w = res.iterates[t][0];
    const double u = comp.w[0];
    recomputed += -std::log(w * r[0] + (1 - w) * r[1]) + std::log(u * r[0] + (1 - u) * r[1]);
  }
  CHECK(std::abs(reg - recomputed) <= 1e-8);
  CHECK(res.feasibility_violations == 0);
}

TEST_CASE("csv header, NaN cells and round trip") {
  const RunConfig cfg = portfolio_config(120, 2);
  ExperimentResult res = run_experiment(cfg);
  summarize(res, cfg);
  const std::string text = csv_text(res.trace);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line) && line[0] == '#') {
  }
  CHECK(line == "t,loss,local_norm_g,decrement,landmark_updated,landmark_distance,wall_time_us");
  std::getline(lines, line);
  CHECK(line.find(",,") != std::string::npos);  // round 1 is not monitored

  std::istringstream in(text);
  const Trace back = read_csv(in);
  REQUIRE(back.rows.size() == res.trace.rows.size());
  CHECK(back.metadata == res.trace.metadata);
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    const TraceRow& a = res.trace.rows[i];
    const TraceRow& b = back.rows[i];
    CHECK(a.t == b.t);
    CHECK(a.loss == b.loss);
    CHECK(a.local_norm_g == b.local_norm_g);
    CHECK(a.landmark_updated == b.landmark_updated);
    CHECK(a.landmark_distance == b.landmark_distance);
    CHECK(a.wall_time_us == b.wall_time_us);
    CHECK(std::isnan(a.decrement) == std::isnan(b.decrement));
    if (!std::isnan(a.decrement)) CHECK(a.decrement == b.decrement);
  }
}

TEST_CASE("csv reader errors") {
  std::istringstream bad_header("t,loss\n1,2\n");
  CHECK_THROWS_AS(read_csv(bad_header), IoError);
  std::istringstream short_row(std::string(kTraceHeader) + "\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(short_row), IoError);
  std::istringstream bad_cell(std::string(kTraceHeader) + "\n1,x,0,,0,0,0\n");
  CHECK_THROWS_AS(read_csv(bad_cell), IoError);
  CHECK_THROWS_AS(read_csv(std::string("/nonexistent/trace.csv")), IoError);
}

TEST_CASE("errors carry the round index") {
  RunConfig cfg;
  cfg.domain = {DomainKind::Box, 2, -1.0, 1.0, ""};
  cfg.loss = LossFamily::LogLoss;
  cfg.T = 5;
  try {
    run_experiment(cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("round 1") != std::string::npos);
  }
}

TEST_CASE("config validation inside run_experiment") {
  RunConfig cfg = zero_config();
  cfg.c = 1.5;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  RunConfig wrong = zero_config();
  wrong.loss = LossFamily::PortfolioIid;
  CHECK_THROWS_AS(run_experiment(wrong), ConfigError);
}

TEST_CASE("baselines run through the harness") {
  RunConfig ftrl = portfolio_config(200, 4);
  ftrl.algorithm = Algorithm::FtrlExact;
  const ExperimentResult f = run_experiment(ftrl);
  CHECK(f.feasibility_violations == 0);
  CHECK(f.landmark_updates == 0);

  RunConfig ogd = portfolio_config(200, 4);
  ogd.algorithm = Algorithm::Ogd;
  ExperimentResult o = run_experiment(ogd);
  CHECK(o.trace.rows.size() == 200);
  CHECK(std::isfinite(summarize(o, ogd)));
}
