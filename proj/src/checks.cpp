#include "barons/checks.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "barons/baselines.hpp"
#include "barons/harness.hpp"
#include "json.hpp"

namespace barons {

namespace {

using json = nlohmann::json;

std::vector<double> to_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json describe(const Polytope& p) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < p.num_constraints(); ++i) rows.push_back(to_list(p.normals().row(i).transpose()));
  return {{"A", rows}, {"b", to_list(p.offsets())}};
}

class Tally {
 public:
  Tally(CheckReport& report, int trial) : report_(report), trial_(trial) {}

  void add(const std::string& name, double lhs, double rhs, const std::function<json()>& context) {
    add(name, lhs, rhs, lhs <= rhs, context);
  }

  void add(const std::string& name, double lhs, double rhs, bool ok, const std::function<json()>& context) {
    auto it = std::find_if(report_.counts.begin(), report_.counts.end(),
                           [&](const InequalityCount& c) { return c.name == name; });
    if (it == report_.counts.end()) {
      report_.counts.push_back({name, 0, 0});
      it = std::prev(report_.counts.end());
    }
    const double gap = std::isnan(lhs - rhs) ? std::numeric_limits<double>::infinity() : lhs - rhs;
    report_.worst_gap = std::max(report_.worst_gap, gap);
    if (ok) {
      ++it->passed;
      return;
    }
    ++it->failed;
    if (report_.first_counterexample.empty()) {
      json j = context();
      j["suite"] = report_.suite;
      j["trial"] = trial_;
      j["inequality"] = name;
      j["lhs"] = lhs;
      j["rhs"] = rhs;
      report_.first_counterexample = j.dump();
    }
  }

 private:
  CheckReport& report_;
  int trial_;
};

Vector random_unit(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n;
  Vector u(d);
  do {
    for (auto& x : u) x = n(rng);
  } while (u.norm() < 1e-12);
  return u / u.norm();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Instance {
  Polytope polytope;
  BarrierPtr barrier;
  Vector y;
};

Instance random_instance(std::mt19937_64& rng) {
  const int d = std::uniform_int_distribution<int>(1, 5)(rng);
  const int m = std::uniform_int_distribution<int>(2 * d, 12)(rng);
  Polytope p = random_polytope(rng, d, m);
  Vector y = random_interior_point(rng, p);
  BarrierPtr barrier = make_log_barrier(p);
  return {std::move(p), std::move(barrier), std::move(y)};
}

// Shift s such that grad(Phi + <s, .>)(y) = v with |v|_{H(y)^{-1}} = lambda.
Vector shift_with_decrement(std::mt19937_64& rng, const Barrier& phi, const Vector& y, double lambda) {
  const SpdFactor f = SpdFactor::factorize(phi.hessian(y));
  const Vector v = lambda * f.color(random_unit(rng, y.size()));
  return v - phi.gradient(y);
}

json instance_json(const Instance& inst) {
  json j = describe(inst.polytope);
  j["y"] = to_list(inst.y);
  return j;
}

// Infinite outside the domain so that an infeasible step fails the comparison.
double decrement_at(const ShiftedObjective& obj, const Vector& w) {
  if (!obj.barrier().is_interior(w)) return std::numeric_limits<double>::infinity();
  return newton_decrement(obj, w);
}

void decrement_decrease(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  const double M = inst.barrier->params().M;
  const double lambda = uniform(rng, 0.0, 1.0 / (40.0 * M));
  const double eps = uniform(rng, 0.0, 1.0 / (40.0 * M));
  const double alpha = uniform(rng, 0.0, 0.2);
  const Vector s = shift_with_decrement(rng, *inst.barrier, inst.y, lambda);
  const ShiftedObjective obj(inst.barrier, s);

  Oracle oracle(inst.barrier, {eps, alpha, NoiseMode::Adversarial, rng()});
  const Vector grad = oracle.gradient(inst.y) + s;
  const HessianApprox h = oracle.hessian(inst.y);
  const Vector y_next = approx_newton_step(inst.y, h.factor, grad);

  const double lam = newton_decrement(obj, inst.y);
  const double lhs = decrement_at(obj, y_next);
  const double k = 20.0 * (1.0 + alpha) * eps;
  const double rhs = k + (1.0 + k) * (9.0 * M * lam * lam + 2.5 * alpha * lam) + 1e-9;
  Tally(report, trial).add("lambda(y+) <= 20(1+a)e + (1+20(1+a)e)(9M l^2 + 2.5 a l)", lhs, rhs, [&] {
    json j = instance_json(inst);
    j["shift"] = to_list(s);
    j["lambda"] = lam;
    j["eps"] = eps;
    j["alpha"] = alpha;
    return j;
  });
}

void quadratic_convergence(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  const double M = inst.barrier->params().M;
  const double target = uniform(rng, 0.0, 0.5 / M);
  const Vector s = shift_with_decrement(rng, *inst.barrier, inst.y, target);
  const ShiftedObjective obj(inst.barrier, s);
  const double lam = newton_decrement(obj, inst.y);
  const SpdFactor f = SpdFactor::factorize(obj.hessian(inst.y));
  const Vector x_next = approx_newton_step(inst.y, f, obj.gradient(inst.y));
  const double lhs = decrement_at(obj, x_next);
  const double rhs = M * lam * lam / ((1.0 - M * lam) * (1.0 - M * lam)) + 1e-9;
  Tally(report, trial).add("lambda(x+) <= M l^2 / (1 - M l)^2", lhs, rhs, [&] {
    json j = instance_json(inst);
    j["shift"] = to_list(s);
    j["lambda"] = lam;
    return j;
  });
}

void minimizer_proximity(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  const double M = inst.barrier->params().M;
  const double target = uniform(rng, 0.0, 0.5 / M);
  const Vector s = shift_with_decrement(rng, *inst.barrier, inst.y, target);
  const ShiftedObjective obj(inst.barrier, s);
  const double lam = newton_decrement(obj, inst.y);
  Vector x_f;
  try {
    x_f = damped_newton_minimize(obj, inst.y, 1e-12).w;
  } catch (const MaxIterExceeded& e) {
    x_f = e.best().w;
  }
  const double lhs = quad_norm(inst.y - x_f, inst.barrier->hessian(x_f));
  const double rhs = lam / (1.0 - M * lam) + 1e-6;
  Tally(report, trial).add("|x - x_f|_{H(x_f)} <= l / (1 - M l)", lhs, rhs, [&] {
    json j = instance_json(inst);
    j["shift"] = to_list(s);
    j["lambda"] = lam;
    j["x_f"] = to_list(x_f);
    return j;
  });
}

void hessian_stability(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  const double M = inst.barrier->params().M;
  const Matrix hx = inst.barrier->hessian(inst.y);
  const Vector u = random_unit(rng, inst.y.size());
  const double radius = uniform(rng, 0.0, 0.99) / M;
  const Vector w = inst.y + radius * u / quad_norm(u, hx);
  const double r = M * quad_norm(w - inst.y, hx);
  Tally tally(report, trial);
  auto context = [&] {
    json j = instance_json(inst);
    j["w"] = to_list(w);
    j["r"] = r;
    return j;
  };
  if (!inst.barrier->is_interior(w)) {
    tally.add("(1-r)^2 <= eig(H(w), H(x)) <= (1-r)^-2", 1.0, 0.0, false, context);
    return;
  }
  const Vector ev = generalized_eigenvalues(inst.barrier->hessian(w), hx);
  const double lo = (1.0 - r) * (1.0 - r);
  const double hi = 1.0 / lo;
  const double lower_gap = lo * (1.0 - 1e-9) - ev.minCoeff();
  const double upper_gap = ev.maxCoeff() - hi * (1.0 + 1e-9);
  tally.add("(1-r)^2 <= eig(H(w), H(x)) <= (1-r)^-2", std::max(lower_gap, upper_gap), 0.0, context);
}

void dikin_feasibility(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  const double M = inst.barrier->params().M;
  const Matrix hx = inst.barrier->hessian(inst.y);
  double worst = std::numeric_limits<double>::infinity();
  Vector worst_w;
  for (int k = 0; k < 32; ++k) {
    const Vector u = random_unit(rng, inst.y.size());
    const Vector w = inst.y + (0.999 / M) * u / quad_norm(u, hx);
    const double min_slack = slacks(inst.polytope, w).minCoeff();
    if (min_slack < worst) {
      worst = min_slack;
      worst_w = w;
    }
  }
  Tally(report, trial).add("min slack on the 0.999/M Dikin ellipsoid > 0", -worst, 0.0, worst > 0.0, [&] {
    json j = instance_json(inst);
    j["w"] = to_list(worst_w);
    return j;
  });
}

void newton_step_norm(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  const Eigen::Index d = inst.y.size();
  const double target = uniform(rng, 0.0, 1.0);
  const Vector s = shift_with_decrement(rng, *inst.barrier, inst.y, target);
  const ShiftedObjective obj(inst.barrier, s);
  const double lam = newton_decrement(obj, inst.y);
  const double alpha = uniform(rng, 0.0, 0.2);

  // H = L (I + E) L^T with |E|_2 = alpha is an alpha-sandwich of LL^T.
  std::normal_distribution<double> n;
  Matrix e(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) e(i, j) = n(rng);
  e = 0.5 * (e + e.transpose()).eval();
  const double spec = Eigen::SelfAdjointEigenSolver<Matrix>(e).eigenvalues().cwiseAbs().maxCoeff();
  if (spec > 0.0) e *= alpha / spec;
  const Matrix hy = obj.hessian(inst.y);
  const Matrix l = SpdFactor::factorize(hy).lower();
  Matrix h = l * (Matrix::Identity(d, d) + e) * l.transpose();
  h = 0.5 * (h + h.transpose()).eval();

  const Vector step = SpdFactor::factorize(h).solve(obj.gradient(inst.y));
  const double lhs = quad_norm(step, hy);
  const double rhs = lam / (1.0 - alpha) + 1e-9;
  Tally(report, trial).add("|H^-1 grad|_{H(y)} <= l / (1 - a)", lhs, rhs, [&] {
    json j = instance_json(inst);
    j["shift"] = to_list(s);
    j["alpha"] = alpha;
    j["lambda"] = lam;
    return j;
  });
}

void barrier_derivatives(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  BarrierPtr phi = inst.barrier;
  std::string kind = "log";
  if (trial % 2 == 1) {
    phi = hybrid_compose(inst.barrier, static_cast<double>(inst.polytope.num_constraints()), uniform(rng, 1.0, 3.0));
    kind = "hybrid";
  }
  const Vector& w = inst.y;
  const double h = 1e-4 * std::min(1.0, slacks(inst.polytope, w).minCoeff());
  const Eigen::Index d = w.size();

  const Vector g = phi->gradient(w);
  Vector g_fd(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Vector wp = w, wm = w;
    wp[i] += h;
    wm[i] -= h;
    g_fd[i] = (phi->value(wp) - phi->value(wm)) / (2.0 * h);
  }
  const Vector v = random_unit(rng, d);
  const Vector hv = phi->hessian(w) * v;
  const Vector hv_fd = (phi->gradient(w + h * v) - phi->gradient(w - h * v)) / (2.0 * h);

  auto context = [&] {
    json j = instance_json(inst);
    j["barrier"] = kind;
    j["step"] = h;
    return j;
  };
  Tally tally(report, trial);
  tally.add("|g_fd - g| <= 1e-5 max(1, |g|)", (g_fd - g).norm(), 1e-5 * std::max(1.0, g.norm()), context);
  tally.add("|Hv_fd - Hv| <= 1e-4 max(1, |Hv|)", (hv_fd - hv).norm(), 1e-4 * std::max(1.0, hv.norm()), context);
}

void barrier_parameter(CheckReport& report, std::mt19937_64& rng, int trial) {
  const Instance inst = random_instance(rng);
  const Vector g = inst.barrier->gradient(inst.y);
  const double lhs = g.dot(SpdFactor::factorize(inst.barrier->hessian(inst.y)).solve(g));
  const double m = static_cast<double>(inst.polytope.num_constraints());
  Tally(report, trial).add("g^T H^-1 g <= m", lhs, m + 1e-9, [&] { return instance_json(inst); });
}

using Suite = void (*)(CheckReport&, std::mt19937_64&, int);

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> suites = {
      {"newton-decrement-decrease", decrement_decrease},
      {"quadratic-convergence", quadratic_convergence},
      {"minimizer-proximity", minimizer_proximity},
      {"hessian-stability", hessian_stability},
      {"dikin-feasibility", dikin_feasibility},
      {"newton-step-norm", newton_step_norm},
      {"barrier-derivatives", barrier_derivatives},
      {"barrier-parameter", barrier_parameter},
  };
  return suites;
}

}  // namespace

bool CheckReport::ok() const {
  if (counts.empty()) return false;
  return std::all_of(counts.begin(), counts.end(), [](const InequalityCount& c) { return c.failed == 0; });
}

const std::vector<std::string>& check_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

bool is_check_suite(const std::string& name) { return registry().count(name) > 0; }

CheckReport run_check(const std::string& suite, std::uint64_t seed, int trials) {
  const auto it = registry().find(suite);
  if (it == registry().end()) throw std::invalid_argument("unknown check suite '" + suite + "'");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  CheckReport report;
  report.suite = suite;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    try {
      it->second(report, rng, t);
    } catch (const Error& e) {
      Tally(report, t).add("trial completed without error", 1.0, 0.0, false,
                           [&] { return json{{"error", e.what()}}; });
    }
  }
  return report;
}

Polytope random_polytope(std::mt19937_64& rng, int d, int m) {
  if (d < 1 || m < 2 * d) throw Error("random_polytope: need d >= 1 and m >= 2d");
  Matrix a = Matrix::Zero(m, d);
  Vector b(m);
  for (int j = 0; j < d; ++j) {
    a(j, j) = 1.0;
    b[j] = -uniform(rng, 0.5, 2.0);
    a(d + j, j) = -1.0;
    b[d + j] = -uniform(rng, 0.5, 2.0);
  }
  for (int i = 2 * d; i < m; ++i) {
    a.row(i) = random_unit(rng, d).transpose();
    b[i] = -uniform(rng, 0.2, 1.5);
  }
  std::normal_distribution<double> n;
  Matrix g(d, d);
  for (auto& x : g.reshaped()) x = n(rng);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  return Polytope(a * q, b, Vector::Zero(d));
}

Vector random_interior_point(std::mt19937_64& rng, const Polytope& p, double max_fraction) {
  const Vector origin = p.witness();
  const Vector s0 = slacks(p, origin);
  const Vector u = random_unit(rng, p.dimension());
  const Vector rate = p.normals() * u;
  double reach = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < rate.size(); ++i) {
    if (rate[i] < 0.0) reach = std::min(reach, s0[i] / -rate[i]);
  }
  if (!std::isfinite(reach)) reach = 1.0;
  return origin + uniform(rng, 0.0, max_fraction) * reach * u;
}

StrictRunReport strict_invariant_run(const StrictRunOptions& opts) {
  const Polytope interval = build_box(1, -1.0, 1.0);
  const BarrierPtr phi = make_log_barrier(interval);
  const double M = phi->params().M;

  StrictRunReport rep;
  rep.params = make_params(M, 1.0 / (1000.0 * opts.b * M), 1.0 / (20000.0 * M), opts.b, Mode::Strict);
  const BaronsParams& p = rep.params;
  rep.proximity_bound = std::pow(15.0 / 16.0, p.m_newton - 1) / (49.0 * M) + 240.0 * p.eps;

  MonitorOptions mon;
  mon.monitor_every = 1;
  mon.record_inner_decrements = true;
  Barons alg(phi, p, interval.witness(), mon);

  std::mt19937_64 rng(opts.seed);
  std::bernoulli_distribution coin(0.5);
  Vector w_star = alg.iterate();
  std::vector<LossRecord> log;
  log.reserve(opts.T);
  double local_sum = 0.0;
  double barons_loss = 0.0;
  double ftrl_loss = 0.0;

  for (long t = 1; t <= opts.T; ++t) {
    const Vector w = alg.iterate();
    if (!is_strictly_feasible(interval, w)) ++rep.feasibility_violations;
    Vector g(1);
    g[0] = coin(rng) ? opts.b : -opts.b;
    log.push_back(LinearLoss{g});

    local_sum += dual_quad_norm(g, SpdFactor::factorize(phi->hessian(w)));
    rep.linearized_gap += g.dot(w - w_star);
    barons_loss += g.dot(w);
    ftrl_loss += g.dot(w_star);

    const RoundReport r = alg.round(g);
    if (r.guard_engaged) ++rep.guard_events;

    rep.max_decrement = std::max(rep.max_decrement, r.decrement);
    if (!(r.decrement <= p.lambda_target)) ++rep.decrement_violations;

    if (!r.inner_decrements.empty()) {
      const double first = r.inner_decrements.front();
      for (std::size_t m = 0; m < r.inner_decrements.size(); ++m) {
        ++rep.decay_checks;
        const double bound = std::pow(15.0 / 16.0, static_cast<double>(m)) * first + 500.0 * p.eps;
        if (!(r.inner_decrements[m] <= bound)) ++rep.decay_violations;
      }
    }

    w_star = ftrl_exact_round(phi, alg.state().s, w_star);
    const double prox = quad_norm(r.w_next - w_star, phi->hessian(w_star));
    rep.max_proximity = std::max(rep.max_proximity, prox);
    if (!(prox <= rep.proximity_bound)) ++rep.proximity_violations;
    ++rep.rounds;
  }

  rep.landmark_updates = alg.state().stats.landmark_updates;
  rep.gap_budget = opts.gap_constant * p.eps * local_sum;
  const Vector center = analytic_center(phi, interval.witness());
  const Comparator comp = best_fixed_comparator(log, phi, center, 1.0 / static_cast<double>(opts.T));
  double comp_loss = 0.0;
  for (const auto& rec : log) comp_loss += loss_value(rec, comp.w);
  rep.barons_regret = barons_loss - comp_loss;
  rep.ftrl_regret = ftrl_loss - comp_loss;
  return rep;
}

}  // namespace barons
