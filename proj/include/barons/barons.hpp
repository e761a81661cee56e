#pragma once

// Barrier-regularized online Newton steps with landmark Hessians.
//
// Each round adds eta * g to the running gradient sum s, then takes
// `m_newton` approximate Newton steps on Phi(w) + <s, w> using the Hessian
// cached at the current landmark u. The landmark (and its factorization) is
// recomputed only when the new iterate leaves the ball of radius 1/(41 M)
// around u in the cached Hessian norm.

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "barons/barrier.hpp"
#include "barons/newton.hpp"

namespace barons {

enum class Mode { Strict, Practical };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Subgradients satisfy |g_t| <= b in the dual local norm of the barrier.
struct LocalNormBound {
  double b = 1.0;
};

/// Subgradients satisfy |g_t| <= G and the domain lies in the ball of radius R.
struct EuclideanBound {
  double G = 1.0;
  double R = 1.0;
};

using GradientBound = std::variant<LocalNormBound, EuclideanBound>;

struct BaronsParams {
  double eta = 0.0;
  double eps = 0.0;
  double alpha_hess = 0.001;
  int m_newton = 1;
  double landmark_threshold = 0.0;  // 1 / (41 M)
  double lambda_target = 0.0;       // min{1 / (1000 M), 1000 eps}
  double M = 1.0;
  Mode mode = Mode::Practical;
  /// Violated step-size preconditions (practical mode only; strict mode throws).
  std::vector<std::string> warnings;
};

/// Smallest m with (15/16)^m <= 10 eps M, at least 1.
int newton_steps_for(double eps, double M);

/// Builds parameters from explicit (eta, eps). `bound_scale` is the gradient
/// bound entering the step-size precondition eta <= 1/(1000 bound_scale M);
/// `bound_symbol` names it in diagnostics. Strict mode throws
/// PreconditionViolated naming the violated inequality.
BaronsParams make_params(double M, double eta, double eps, double bound_scale, Mode mode,
                         const std::string& bound_symbol = "b", double alpha_hess = 0.001);

/// Step size and tolerance schedules:
///   local norm bound b:   eta = sqrt(nu ln(1/c) / (b^2 T)),       eps = sqrt(nu / T)
///   Euclidean bound G, R: eta = (nu / (R G)) sqrt((ln T + 1) / T), eps = sqrt(nu / T)
BaronsParams compute_params(const BarrierParams& barrier, const GradientBound& bound, long T,
                            double c, Mode mode);

struct BaronsStats {
  long landmark_updates = 0;
  long inner_steps = 0;
  long guard_events = 0;
  long decrement_checks = 0;
  long decrement_violations = 0;
};

struct BaronsState {
  long t = 0;
  Vector w;  // iterate to play next
  Vector s;  // eta * sum of observed subgradients
  Vector u;  // landmark
  Matrix h;  // cached landmark Hessian
  std::optional<SpdFactor> h_factor;
  BaronsStats stats;
};

struct MonitorOptions {
  /// Exact decrement of the new iterate is checked every this many rounds; 0 disables.
  int monitor_every = 50;
  /// Record the exact decrement at every inner Newton iterate (expensive).
  bool record_inner_decrements = false;
  NoiseMode noise = NoiseMode::Off;
  std::uint64_t noise_seed = 0;
};

struct RoundReport {
  Vector w_next;
  bool landmark_updated = false;
  double distance_to_landmark = 0.0;  // before the landmark test
  double landmark_distance = 0.0;     // after it
  double decrement = std::numeric_limits<double>::quiet_NaN();
  bool guard_engaged = false;
  /// lambda(w^m, Phi_{t+1}) for m = 1 .. m_newton + 1 when recorded.
  std::vector<double> inner_decrements;
};

class Barons {
 public:
  /// Starts at the analytic center found from `w0`, with the landmark there.
  Barons(BarrierPtr barrier, BaronsParams params, const Vector& w0, MonitorOptions monitor = {});

  /// Observes a subgradient at the current iterate and moves to the next one.
  /// Throws DivergenceDetected if the fallback Newton solve cannot recover.
  RoundReport round(const Vector& g);

  const BaronsState& state() const noexcept { return state_; }
  const BaronsParams& params() const noexcept { return params_; }
  const Vector& iterate() const noexcept { return state_.w; }
  const Barrier& barrier() const noexcept { return oracle_.barrier(); }
  const BarrierPtr& barrier_ptr() const noexcept { return oracle_.barrier_ptr(); }

  /// |w - u| in the cached landmark Hessian norm.
  double landmark_distance() const;

 private:
  void refresh_landmark(const Vector& u);

  BaronsParams params_;
  MonitorOptions monitor_;
  Oracle oracle_;
  BaronsState state_;
};

}  // namespace barons
