#include "barons/barons.hpp"

#include <cmath>
#include <sstream>

namespace barons {

std::string to_string(Mode m) { return m == Mode::Strict ? "strict" : "practical"; }

Mode mode_from_string(const std::string& s) {
  if (s == "strict") return Mode::Strict;
  if (s == "practical") return Mode::Practical;
  throw Error("unknown mode '" + s + "' (expected strict or practical)");
}

int newton_steps_for(double eps, double M) {
  if (!(eps > 0.0) || !(M > 0.0)) throw Error("newton_steps_for: eps and M must be positive");
  const double steps = std::ceil(std::log(1.0 / (10.0 * eps * M)) / std::log(16.0 / 15.0));
  return steps < 1.0 ? 1 : static_cast<int>(steps);
}

BaronsParams make_params(double M, double eta, double eps, double bound_scale, Mode mode,
                         const std::string& bound_symbol, double alpha_hess) {
  if (!(M > 0.0)) throw Error("params: M must be positive");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error("params: eta must be positive and finite");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error("params: eps must be positive and finite");
  if (!(bound_scale > 0.0)) throw Error("params: gradient bound must be positive");
  if (!(alpha_hess >= 0.0 && alpha_hess < 1.0)) throw Error("params: alpha_hess must lie in [0, 1)");

  BaronsParams p;
  p.eta = eta;
  p.eps = eps;
  p.alpha_hess = alpha_hess;
  p.M = M;
  p.mode = mode;
  p.m_newton = newton_steps_for(eps, M);
  p.landmark_threshold = 1.0 / (41.0 * M);
  p.lambda_target = std::min(1.0 / (1000.0 * M), 1000.0 * eps);

  // Relative slack so that parameters set exactly at the cap are accepted.
  constexpr double kRel = 1e-12;
  const double eta_cap = 1.0 / (1000.0 * bound_scale * M);
  const double eps_cap = 1.0 / (20000.0 * M);
  auto describe = [](const std::string& rule, double value, double cap) {
    std::ostringstream os;
    os << rule << " violated: " << value << " > " << cap;
    return os.str();
  };
  if (eta > eta_cap * (1.0 + kRel)) {
    p.warnings.push_back(describe("η ≤ 1/(1000 " + bound_symbol + " M_Φ)", eta, eta_cap));
  }
  if (eps > eps_cap * (1.0 + kRel)) {
    p.warnings.push_back(describe("ε ≤ 1/(20000 M_Φ)", eps, eps_cap));
  }
  if (mode == Mode::Strict && !p.warnings.empty()) {
    std::string msg = "PreconditionViolated: " + p.warnings.front();
    for (std::size_t i = 1; i < p.warnings.size(); ++i) msg += "; " + p.warnings[i];
    throw PreconditionViolated(msg);
  }
  return p;
}

BaronsParams compute_params(const BarrierParams& barrier, const GradientBound& bound, long T,
                            double c, Mode mode) {
  if (T < 2) throw Error("params: T must be at least 2");
  if (!(barrier.nu > 0.0) || !(barrier.M > 0.0)) throw Error("params: nu and M must be positive");
  const double t = static_cast<double>(T);
  const double eps = std::sqrt(barrier.nu / t);

  if (const auto* local = std::get_if<LocalNormBound>(&bound)) {
    if (!(c > 0.0 && c < 1.0)) throw Error("params: c must lie in (0, 1)");
    if (!(local->b > 0.0)) throw Error("params: b must be positive");
    const double eta = std::sqrt(barrier.nu * std::log(1.0 / c) / (local->b * local->b * t));
    return make_params(barrier.M, eta, eps, local->b, mode, "b");
  }
  const auto& euc = std::get<EuclideanBound>(bound);
  if (!(euc.G > 0.0) || !(euc.R > 0.0)) throw Error("params: G and R must be positive");
  const double eta = barrier.nu / (euc.R * euc.G) * std::sqrt((std::log(t) + 1.0) / t);
  return make_params(barrier.M, eta, eps, euc.G, mode, "G");
}

Barons::Barons(BarrierPtr barrier, BaronsParams params, const Vector& w0, MonitorOptions monitor)
    : params_(std::move(params)),
      monitor_(monitor),
      oracle_(std::move(barrier),
              OracleConfig{params_.eps, params_.alpha_hess, monitor.noise, monitor.noise_seed}) {
  const Vector center = analytic_center(oracle_.barrier_ptr(), w0);
  state_.w = center;
  state_.s = Vector::Zero(center.size());
  refresh_landmark(center);
}

void Barons::refresh_landmark(const Vector& u) {
  HessianApprox approx = oracle_.hessian(u);
  state_.u = u;
  state_.h = std::move(approx.h);
  state_.h_factor.emplace(std::move(approx.factor));
}

double Barons::landmark_distance() const {
  return quad_norm(state_.w - state_.u, *state_.h_factor);
}

RoundReport Barons::round(const Vector& g) {
  if (g.size() != state_.w.size()) throw DimensionMismatch("barons round", state_.w.size(), g.size());
  if (!g.allFinite()) throw Error("barons round: non-finite subgradient");

  BaronsState& st = state_;
  ++st.t;
  st.s += params_.eta * g;

  const Barrier& phi = oracle_.barrier();
  const ShiftedObjective potential(oracle_.barrier_ptr(), st.s);
  const double guard_level = 1.0 / (20.0 * params_.M);

  RoundReport report;
  Vector w = st.w;
  bool left_domain = false;
  double proxy = 0.0;  // |grad_tilde| in the landmark H^{-1} norm at the last inner iterate

  for (int m = 0; m < params_.m_newton; ++m) {
    if (monitor_.record_inner_decrements) report.inner_decrements.push_back(newton_decrement(potential, w));
    try {
      const Vector grad_tilde = oracle_.gradient(w) + st.s;
      const Vector step = st.h_factor->solve(grad_tilde);
      proxy = std::sqrt(std::max(0.0, grad_tilde.dot(step)));
      Vector next = w - step;
      ++st.stats.inner_steps;
      if (!phi.is_interior(next)) {
        left_domain = true;
        break;
      }
      w = std::move(next);
    } catch (const NotInterior&) {
      left_domain = true;
      break;
    } catch (const NotSpd&) {
      left_domain = true;
      break;
    }
  }
  if (monitor_.record_inner_decrements && !left_domain) {
    report.inner_decrements.push_back(newton_decrement(potential, w));
  }

  const bool monitored = monitor_.monitor_every > 0 && st.t % monitor_.monitor_every == 0;
  if (monitored && !left_domain) report.decrement = newton_decrement(potential, w);

  bool force_landmark = false;
  if (left_domain || proxy > guard_level || (monitored && report.decrement > guard_level)) {
    // Outside the basin where the cached Hessian is trustworthy: finish the
    // round with exact damped Newton and re-anchor the landmark.
    try {
      const NewtonResult fix = damped_newton_minimize(potential, w, params_.lambda_target);
      w = fix.w;
      if (monitored) report.decrement = fix.decrement;
    } catch (const Error& e) {
      throw DivergenceDetected("round " + std::to_string(st.t) + ": fallback Newton failed: " + e.what());
    }
    ++st.stats.guard_events;
    report.guard_engaged = true;
    force_landmark = true;
  }

  if (monitored) {
    ++st.stats.decrement_checks;
    if (report.decrement > params_.lambda_target) ++st.stats.decrement_violations;
  }

  st.w = w;
  report.distance_to_landmark = landmark_distance();
  if (force_landmark || report.distance_to_landmark > params_.landmark_threshold) {
    refresh_landmark(st.w);
    ++st.stats.landmark_updates;
    report.landmark_updated = true;
    report.landmark_distance = 0.0;
  } else {
    report.landmark_distance = report.distance_to_landmark;
  }
  report.w_next = st.w;
  return report;
}

}  // namespace barons
