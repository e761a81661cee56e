#include "barons/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "barons/baselines.hpp"
#include "barons/errors.hpp"

namespace barons {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& cell, const std::string& column) {
  if (cell.empty()) return kNaN;
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw IoError("trace csv: bad value '" + cell + "' in column " + column);
  }
}

double local_norm(const Barrier& barrier, const Vector& w, const Vector& g) {
  try {
    return dual_quad_norm(g, SpdFactor::factorize(barrier.hessian(w)));
  } catch (const Error&) {
    return kNaN;
  }
}

}  // namespace

void Trace::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

void Trace::set(const std::string& key, double value) { set(key, format_double(value)); }

std::optional<std::string> Trace::get(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Barons: return "barons";
    case Algorithm::FtrlExact: return "ftrl_exact";
    case Algorithm::Ogd: return "ogd";
  }
  return "?";
}

std::string to_string(LossFamily f) {
  switch (f) {
    case LossFamily::PortfolioIid: return "portfolio_iid";
    case LossFamily::PortfolioTwoAsset: return "portfolio_two_asset";
    case LossFamily::LinearSphere: return "linear_sphere";
    case LossFamily::LinearZero: return "linear_zero";
    case LossFamily::LogLoss: return "logloss";
  }
  return "?";
}

Polytope build_domain(const DomainSpec& spec) {
  switch (spec.kind) {
    case DomainKind::Box: return build_box(spec.d, spec.lo, spec.hi);
    case DomainKind::ReducedSimplex: return build_reduced_simplex(spec.d);
    case DomainKind::File: return read_polytope_file(spec.file);
  }
  throw Error("unknown domain kind");
}

BarrierPtr build_barrier(const Polytope& p, const BarrierSpec& spec) {
  BarrierPtr log = make_log_barrier(p);
  if (spec.kind == BarrierKind::Log) return log;
  const double nu = spec.nu ? *spec.nu : barrier_params_log(p).nu;
  return hybrid_compose(std::move(log), nu, spec.R);
}

std::unique_ptr<LossStream> build_loss_stream(const RunConfig& cfg) {
  switch (cfg.loss) {
    case LossFamily::PortfolioIid:
      if (cfg.domain.kind != DomainKind::ReducedSimplex) {
        throw ConfigError("loss.family", "portfolio losses require domain.kind = reduced_simplex");
      }
      return returns_iid(cfg.seed, cfg.domain.d, cfg.loss_lo, cfg.loss_hi);
    case LossFamily::PortfolioTwoAsset:
      if (cfg.domain.kind != DomainKind::ReducedSimplex || cfg.domain.d != 2) {
        throw ConfigError("loss.family", "portfolio_two_asset requires a reduced_simplex with d = 2");
      }
      return returns_two_asset_adversarial(cfg.seed);
    case LossFamily::LinearSphere:
      return linear_adversary_iid_sphere(cfg.seed, static_cast<int>(build_domain(cfg.domain).dimension()),
                                         cfg.loss_G);
    case LossFamily::LinearZero:
      return linear_zero(static_cast<int>(build_domain(cfg.domain).dimension()));
    case LossFamily::LogLoss:
      return labels_logistic(cfg.seed, static_cast<int>(build_domain(cfg.domain).dimension()));
  }
  throw Error("unknown loss family");
}

BaronsParams resolve_params(const RunConfig& cfg, const BarrierParams& barrier) {
  GradientBound bound;
  double scale = cfg.b;
  std::string symbol = "b";
  if (cfg.bound == BoundKind::Local) {
    bound = LocalNormBound{cfg.b};
  } else {
    bound = EuclideanBound{cfg.G, cfg.barrier.R};
    scale = cfg.G;
    symbol = "G";
  }
  const BaronsParams base = compute_params(barrier, bound, cfg.T, cfg.shrink_c(), Mode::Practical);
  return make_params(barrier.M, cfg.eta ? *cfg.eta : base.eta, cfg.eps ? *cfg.eps : base.eps, scale,
                     cfg.mode, symbol, cfg.alpha_hess);
}

ExperimentResult run_experiment(const RunConfig& cfg) {
  if (cfg.T < 1) throw ConfigError("run.T", "T must be at least 1");
  const double c = cfg.shrink_c();
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("algorithm.c", "c must lie in (0, 1)");

  const Polytope domain = build_domain(cfg.domain);
  ExperimentResult res;
  res.barrier = build_barrier(domain, cfg.barrier);
  auto stream = build_loss_stream(cfg);
  if (stream->dimension() != domain.dimension()) {
    throw ConfigError("loss.family", "loss dimension " + std::to_string(stream->dimension()) +
                                         " does not match domain dimension " +
                                         std::to_string(domain.dimension()));
  }
  res.center = analytic_center(res.barrier, domain.witness());

  Trace& trace = res.trace;
  trace.set("algorithm", to_string(cfg.algorithm));
  trace.set("loss_family", to_string(cfg.loss));
  trace.set("T", std::to_string(cfg.T));
  trace.set("seed", std::to_string(cfg.seed));
  trace.set("d", std::to_string(domain.dimension()));
  trace.set("m", std::to_string(domain.num_constraints()));
  trace.set("M", res.barrier->params().M);
  trace.set("nu", res.barrier->params().nu);

  std::optional<Barons> barons;
  Vector w = res.center;
  Vector s = Vector::Zero(domain.dimension());
  Vector w_full;  // OGD iterate on the full simplex

  if (cfg.algorithm != Algorithm::Ogd) {
    res.params = resolve_params(cfg, res.barrier->params());
    const BaronsParams& p = *res.params;
    trace.set("mode", to_string(p.mode));
    trace.set("eta", p.eta);
    trace.set("eps", p.eps);
    trace.set("alpha_hess", p.alpha_hess);
    trace.set("m_newton", std::to_string(p.m_newton));
    trace.set("landmark_threshold", p.landmark_threshold);
    trace.set("lambda_target", p.lambda_target);
    trace.set("c", c);
    std::string warnings;
    for (const auto& wmsg : p.warnings) warnings += (warnings.empty() ? "" : "; ") + wmsg;
    if (!warnings.empty()) trace.set("precondition_warnings", warnings);
  } else {
    if (cfg.domain.kind != DomainKind::ReducedSimplex) {
      throw ConfigError("algorithm.name", "ogd requires domain.kind = reduced_simplex");
    }
    w_full = Vector::Constant(cfg.domain.d, 1.0 / cfg.domain.d);
    w = w_full.head(cfg.domain.d - 1);
    trace.set("ogd_G", cfg.ogd_G);
    trace.set("ogd_R", cfg.ogd_R);
  }

  if (cfg.algorithm == Algorithm::Barons) {
    MonitorOptions mon;
    mon.monitor_every = cfg.monitor_every;
    mon.record_inner_decrements = cfg.record_inner_decrements;
    mon.noise = cfg.noise;
    mon.noise_seed = cfg.noise_seed;
    barons.emplace(res.barrier, *res.params, domain.witness(), mon);
    w = barons->iterate();
  }

  const auto& counters = res.barrier->counters();
  const std::uint64_t grad_calls0 = counters.gradient_calls.load();
  const std::uint64_t hess_calls0 = counters.hessian_calls.load();

  res.loss_log.reserve(cfg.T);
  res.iterates.reserve(cfg.T);
  res.subgradients.reserve(cfg.T);
  trace.rows.reserve(cfg.T);

  for (long t = 1; t <= cfg.T; ++t) {
    const auto start = std::chrono::steady_clock::now();
    TraceRow row;
    row.t = t;
    row.decrement = kNaN;
    try {
      const LossRecord rec = stream->next();
      const LossEvent ev = evaluate(rec, w);
      row.loss = ev.loss;

      if (cfg.algorithm != Algorithm::Ogd &&
          !is_strictly_feasible(domain, w, cfg.feasibility_margin)) {
        ++res.feasibility_violations;
      }
      row.local_norm_g = cfg.measure_local_norms ? local_norm(*res.barrier, w, ev.g) : kNaN;
      if (!std::isnan(row.local_norm_g)) res.max_local_norm = std::max(res.max_local_norm, row.local_norm_g);

      res.loss_log.push_back(rec);
      res.iterates.push_back(w);
      res.subgradients.push_back(ev.g);

      switch (cfg.algorithm) {
        case Algorithm::Barons: {
          const RoundReport rep = barons->round(ev.g);
          row.decrement = rep.decrement;
          row.landmark_updated = rep.landmark_updated;
          row.landmark_distance = rep.landmark_distance;
          w = rep.w_next;
          break;
        }
        case Algorithm::FtrlExact:
          s += res.params->eta * ev.g;
          w = ftrl_exact_round(res.barrier, s, w);
          break;
        case Algorithm::Ogd: {
          Vector full_g;
          if (const auto* pr = std::get_if<PortfolioReturns>(&rec)) {
            full_g = portfolio_full_gradient(w_full, pr->r);
          } else {
            full_g = Vector::Zero(w_full.size());
            full_g.head(ev.g.size()) = ev.g;
          }
          const double step = cfg.ogd_R / (cfg.ogd_G * std::sqrt(static_cast<double>(t)));
          w_full = ogd_simplex_round(w_full, full_g, step);
          w = w_full.head(w_full.size() - 1);
          break;
        }
      }
    } catch (const DivergenceDetected& e) {
      throw DivergenceDetected("round " + std::to_string(t) + ": " + e.what());
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw Error("round " + std::to_string(t) + ": " + e.what());
    }
    if (cfg.record_wall_time) {
      row.wall_time_us =
          std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    }
    trace.rows.push_back(row);
  }

  trace.set("gradient_oracle_calls", std::to_string(counters.gradient_calls.load() - grad_calls0));
  trace.set("hessian_oracle_calls", std::to_string(counters.hessian_calls.load() - hess_calls0));
  if (barons) {
    const BaronsStats& st = barons->state().stats;
    res.landmark_updates = st.landmark_updates;
    trace.set("landmark_updates", std::to_string(st.landmark_updates));
    trace.set("inner_steps", std::to_string(st.inner_steps));
    trace.set("guard_events", std::to_string(st.guard_events));
    trace.set("decrement_checks", std::to_string(st.decrement_checks));
    trace.set("decrement_violations", std::to_string(st.decrement_violations));
  } else {
    trace.set("landmark_updates", "0");
  }
  trace.set("feasibility_violations", std::to_string(res.feasibility_violations));
  trace.set("max_local_norm", res.max_local_norm);
  if (cfg.bound == BoundKind::Local) {
    trace.set("b_configured", cfg.b);
    if (res.max_local_norm > cfg.b) trace.set("local_norm_warning", "max local norm exceeds b");
  }
  return res;
}

Comparator best_fixed_comparator(const std::vector<LossRecord>& loss_log, const BarrierPtr& barrier,
                                 const Vector& center, double c) {
  const double T = static_cast<double>(std::max<std::size_t>(loss_log.size(), 1));
  const double delta_final = 1e-8 * T;
  const Barrier& phi = *barrier;

  // Minimize sum_t l_t / delta + Phi, which is self-concordant with constant
  // max(M_Phi, sqrt(delta)), while delta decreases geometrically.
  Vector w = center;
  double delta = std::max(T, delta_final);
  while (true) {
    const double inv = 1.0 / delta;
    SelfConcordantObjective obj{
        [&](const Vector& x) {
          Vector g = phi.gradient(x);
          for (const auto& rec : loss_log) g += inv * evaluate(rec, x).g;
          return g;
        },
        [&](const Vector& x) {
          Matrix h = phi.hessian(x);
          for (const auto& rec : loss_log) h += inv * loss_hessian(rec, x);
          return h;
        },
        [&](const Vector& x) { return phi.is_interior(x); },
        std::max(phi.params().M, std::sqrt(delta)),
    };
    try {
      w = damped_newton_minimize(obj, w, 1e-9, 1000).w;
    } catch (const MaxIterExceeded& e) {
      w = e.best().w;
    }
    if (delta <= delta_final) break;
    delta = std::max(delta / 4.0, delta_final);
  }

  Comparator out;
  out.delta = delta_final;
  out.c = c;
  out.bias = delta_final * (phi.value(w) - phi.value(center));
  out.w = shrink_toward(w, c, center);
  return out;
}

std::vector<double> regret_curve(const Trace& trace, const Vector& comparator,
                                 const std::vector<LossRecord>& loss_log) {
  if (trace.rows.size() != loss_log.size()) {
    throw DimensionMismatch("regret_curve", static_cast<long>(loss_log.size()),
                            static_cast<long>(trace.rows.size()));
  }
  std::vector<double> curve(trace.rows.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    acc += trace.rows[i].loss - loss_value(loss_log[i], comparator);
    curve[i] = acc;
  }
  return curve;
}

double summarize(ExperimentResult& result, const RunConfig& cfg) {
  const Comparator comp = best_fixed_comparator(result.loss_log, result.barrier, result.center, cfg.shrink_c());
  const auto curve = regret_curve(result.trace, comp.w, result.loss_log);
  const double final_regret = curve.empty() ? 0.0 : curve.back();
  result.trace.set("comparator_delta", comp.delta);
  result.trace.set("comparator_c", comp.c);
  result.trace.set("comparator_bias", comp.bias);
  result.trace.set("final_regret", final_regret);
  return final_regret;
}

void write_csv(const Trace& trace, std::ostream& out) {
  for (const auto& [k, v] : trace.metadata) out << "# " << k << '=' << v << '\n';
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.t << ',' << format_double(r.loss) << ',' << format_double(r.local_norm_g) << ','
        << format_double(r.decrement) << ',' << (r.landmark_updated ? 1 : 0) << ','
        << format_double(r.landmark_distance) << ',' << format_double(r.wall_time_us) << '\n';
  }
  if (!out) throw IoError("trace csv: write failed");
}

void write_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(trace, out);
}

Trace read_csv(std::istream& in) {
  static const char* kColumns[] = {"t", "loss", "local_norm_g", "decrement", "landmark_updated",
                                   "landmark_distance", "wall_time_us"};
  Trace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw IoError("trace csv: metadata line without '=': " + line);
      trace.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (line != kTraceHeader) throw IoError("trace csv: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw IoError("trace csv: expected 7 columns, got " + std::to_string(cells.size()));
    TraceRow r;
    r.t = static_cast<long>(parse_double(cells[0], kColumns[0]));
    r.loss = parse_double(cells[1], kColumns[1]);
    r.local_norm_g = parse_double(cells[2], kColumns[2]);
    r.decrement = parse_double(cells[3], kColumns[3]);
    r.landmark_updated = parse_double(cells[4], kColumns[4]) != 0.0;
    r.landmark_distance = parse_double(cells[5], kColumns[5]);
    r.wall_time_us = parse_double(cells[6], kColumns[6]);
    if (!trace.rows.empty() && r.t <= trace.rows.back().t) throw IoError("trace csv: t not increasing");
    trace.rows.push_back(r);
  }
  if (!header_seen) throw IoError("trace csv: missing header row");
  return trace;
}

Trace read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_csv(in);
}

}  // namespace barons
