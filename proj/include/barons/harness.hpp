#pragma once

// Experiment orchestration: play an algorithm against a loss stream, record a
// per-round trace, and measure regret against the best fixed comparator.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "barons/barons.hpp"
#include "barons/losses.hpp"

namespace barons {

enum class DomainKind { Box, ReducedSimplex, File };
enum class BarrierKind { Log, Hybrid };
enum class Algorithm { Barons, FtrlExact, Ogd };
enum class LossFamily { PortfolioIid, PortfolioTwoAsset, LinearSphere, LinearZero, LogLoss };
enum class BoundKind { Local, Euclidean };

struct DomainSpec {
  DomainKind kind = DomainKind::Box;
  int d = 2;
  double lo = 0.0;
  double hi = 1.0;
  std::string file;
};

struct BarrierSpec {
  BarrierKind kind = BarrierKind::Log;
  std::optional<double> nu;  // hybrid weight numerator; defaults to the log-barrier's m
  double R = 1.0;
};

struct RunConfig {
  DomainSpec domain;
  BarrierSpec barrier;

  Algorithm algorithm = Algorithm::Barons;
  Mode mode = Mode::Practical;
  BoundKind bound = BoundKind::Local;
  double b = 2.0;
  double G = 1.0;
  std::optional<double> c;  // comparator shrink and schedule parameter; defaults to 1/T
  std::optional<double> eta;
  std::optional<double> eps;
  double alpha_hess = 0.001;
  NoiseMode noise = NoiseMode::Off;
  std::uint64_t noise_seed = 0;
  int monitor_every = 50;
  bool record_inner_decrements = false;
  double ogd_G = 1.0;
  double ogd_R = 1.4142135623730951;

  LossFamily loss = LossFamily::PortfolioIid;
  double loss_lo = 0.5;
  double loss_hi = 1.5;
  double loss_G = 1.0;

  long T = 1000;
  std::uint64_t seed = 1;
  std::string output = "trace.csv";
  bool record_wall_time = true;
  bool measure_local_norms = true;
  double feasibility_margin = 1e-12;

  double shrink_c() const { return c ? *c : 1.0 / static_cast<double>(T); }
};

struct TraceRow {
  long t = 0;
  double loss = 0.0;
  double local_norm_g = 0.0;
  double decrement = 0.0;  // NaN when not monitored
  bool landmark_updated = false;
  double landmark_distance = 0.0;
  double wall_time_us = 0.0;
};

struct Trace {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<TraceRow> rows;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  std::optional<std::string> get(const std::string& key) const;
};

struct ExperimentResult {
  Trace trace;
  std::vector<LossRecord> loss_log;
  std::vector<Vector> iterates;     // w_t, t = 1..T
  std::vector<Vector> subgradients;  // g_t observed at w_t
  BarrierPtr barrier;
  Vector center;
  std::optional<BaronsParams> params;
  long feasibility_violations = 0;
  double max_local_norm = 0.0;
  long landmark_updates = 0;
};

/// Builds the domain described by `spec`.
Polytope build_domain(const DomainSpec& spec);
BarrierPtr build_barrier(const Polytope& p, const BarrierSpec& spec);
std::unique_ptr<LossStream> build_loss_stream(const RunConfig& cfg);
/// Resolved schedule for BARONS / exact FTRL.
BaronsParams resolve_params(const RunConfig& cfg, const BarrierParams& barrier);

/// Deterministic given the config (wall times aside). Errors carry the round index.
ExperimentResult run_experiment(const RunConfig& cfg);

struct Comparator {
  Vector w;
  double delta = 0.0;  // weight of the barrier regularizer
  double c = 0.0;      // shrink toward the analytic center
  double bias = 0.0;   // delta * (Phi(w_reg) - Phi(center))
};

/// argmin sum_t l_t(w) + delta Phi(w) with delta = 1e-8 T (barrier
/// continuation), then shrunk by c toward `center`.
Comparator best_fixed_comparator(const std::vector<LossRecord>& loss_log, const BarrierPtr& barrier,
                                 const Vector& center, double c);

/// Cumulative regret: partial sums of trace loss minus comparator loss.
std::vector<double> regret_curve(const Trace& trace, const Vector& comparator,
                                 const std::vector<LossRecord>& loss_log);

/// Computes the comparator and final regret and adds them to the trace metadata.
/// Returns the final regret.
double summarize(ExperimentResult& result, const RunConfig& cfg);

// CSV: "# key=value" metadata lines, then the header
// t,loss,local_norm_g,decrement,landmark_updated,landmark_distance,wall_time_us
// and one row per round. NaN cells are written empty.
inline constexpr const char* kTraceHeader =
    "t,loss,local_norm_g,decrement,landmark_updated,landmark_distance,wall_time_us";

void write_csv(const Trace& trace, std::ostream& out);
void write_csv(const Trace& trace, const std::string& path);
Trace read_csv(std::istream& in);
Trace read_csv(const std::string& path);

std::string to_string(Algorithm a);
std::string to_string(LossFamily f);

}  // namespace barons
