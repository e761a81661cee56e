#include "barons/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "barons/errors.hpp"

namespace barons {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// ini_parser only knows whole-line comments and keeps quotes; strip trailing
// comments outside quotes and unquote values before handing lines over.
std::string preprocess(std::istream& in) {
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    bool quoted = false;
    std::string kept;
    for (char ch : line) {
      if (ch == '"') {
        quoted = !quoted;
        continue;
      }
      if (ch == '#' && !quoted) break;
      kept += ch;
    }
    out << trim(kept) << '\n';
  }
  return out.str();
}

std::string full_key(const std::string& section, const std::string& key) { return section + "." + key; }

double to_double(const std::string& k, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(k, k + ": expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& k, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(k, k + ": expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_seed(const std::string& k, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size() || v.find('-') != std::string::npos) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(k, k + ": expected a non-negative integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& k, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(k, k + ": expected true or false, got '" + v + "'");
}

template <class E>
E to_enum(const std::string& k, const std::string& v,
          std::initializer_list<std::pair<const char*, E>> choices) {
  std::string names;
  for (const auto& [name, e] : choices) {
    if (v == name) return e;
    names += (names.empty() ? "" : "|") + std::string(name);
  }
  throw ConfigError(k, k + ": expected one of " + names + ", got '" + v + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void set_config_value(RunConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value) {
  const std::string k = full_key(section, key);
  const std::string& v = value;
  auto unknown = [&] { return ConfigError(k, "unknown config key '" + k + "'"); };

  if (section == "domain") {
    if (key == "kind") {
      cfg.domain.kind = to_enum<DomainKind>(
          k, v, {{"box", DomainKind::Box}, {"reduced_simplex", DomainKind::ReducedSimplex}, {"file", DomainKind::File}});
    } else if (key == "d") {
      cfg.domain.d = static_cast<int>(to_long(k, v));
    } else if (key == "lo") {
      cfg.domain.lo = to_double(k, v);
    } else if (key == "hi") {
      cfg.domain.hi = to_double(k, v);
    } else if (key == "file") {
      cfg.domain.file = v;
    } else {
      throw unknown();
    }
  } else if (section == "barrier") {
    if (key == "kind") {
      cfg.barrier.kind = to_enum<BarrierKind>(k, v, {{"log", BarrierKind::Log}, {"hybrid", BarrierKind::Hybrid}});
    } else if (key == "nu") {
      cfg.barrier.nu = to_double(k, v);
    } else if (key == "R") {
      cfg.barrier.R = to_double(k, v);
    } else {
      throw unknown();
    }
  } else if (section == "algorithm") {
    if (key == "name") {
      cfg.algorithm = to_enum<Algorithm>(
          k, v, {{"barons", Algorithm::Barons}, {"ftrl_exact", Algorithm::FtrlExact}, {"ogd", Algorithm::Ogd}});
    } else if (key == "mode") {
      cfg.mode = to_enum<Mode>(k, v, {{"strict", Mode::Strict}, {"practical", Mode::Practical}});
    } else if (key == "bound") {
      cfg.bound = to_enum<BoundKind>(k, v, {{"local", BoundKind::Local}, {"euclidean", BoundKind::Euclidean}});
    } else if (key == "b") {
      cfg.b = to_double(k, v);
    } else if (key == "G") {
      cfg.G = to_double(k, v);
    } else if (key == "c") {
      cfg.c = to_double(k, v);
    } else if (key == "eta") {
      cfg.eta = to_double(k, v);
    } else if (key == "eps") {
      cfg.eps = to_double(k, v);
    } else if (key == "alpha_hess") {
      cfg.alpha_hess = to_double(k, v);
    } else if (key == "noise") {
      cfg.noise = to_enum<NoiseMode>(k, v, {{"off", NoiseMode::Off}, {"adversarial", NoiseMode::Adversarial}});
    } else if (key == "noise_seed") {
      cfg.noise_seed = to_seed(k, v);
    } else if (key == "monitor_every") {
      cfg.monitor_every = static_cast<int>(to_long(k, v));
    } else if (key == "record_inner_decrements") {
      cfg.record_inner_decrements = to_bool(k, v);
    } else if (key == "ogd_G") {
      cfg.ogd_G = to_double(k, v);
    } else if (key == "ogd_R") {
      cfg.ogd_R = to_double(k, v);
    } else {
      throw unknown();
    }
  } else if (section == "loss") {
    if (key == "family") {
      cfg.loss = to_enum<LossFamily>(k, v,
                                     {{"portfolio_iid", LossFamily::PortfolioIid},
                                      {"portfolio_two_asset", LossFamily::PortfolioTwoAsset},
                                      {"linear_sphere", LossFamily::LinearSphere},
                                      {"linear_zero", LossFamily::LinearZero},
                                      {"logloss", LossFamily::LogLoss}});
    } else if (key == "lo") {
      cfg.loss_lo = to_double(k, v);
    } else if (key == "hi") {
      cfg.loss_hi = to_double(k, v);
    } else if (key == "G") {
      cfg.loss_G = to_double(k, v);
    } else {
      throw unknown();
    }
  } else if (section == "run") {
    if (key == "T") {
      cfg.T = to_long(k, v);
    } else if (key == "seed") {
      cfg.seed = to_seed(k, v);
    } else if (key == "output") {
      cfg.output = v;
    } else if (key == "record_wall_time") {
      cfg.record_wall_time = to_bool(k, v);
    } else if (key == "measure_local_norms") {
      cfg.measure_local_norms = to_bool(k, v);
    } else if (key == "feasibility_margin") {
      cfg.feasibility_margin = to_double(k, v);
    } else {
      throw unknown();
    }
  } else {
    throw ConfigError(k, "unknown config section '" + section + "' (key '" + k + "')");
  }
}

void apply_config(RunConfig& cfg, std::istream& in, const std::string& source) {
  std::istringstream cleaned(preprocess(in));
  pt::ptree tree;
  try {
    pt::read_ini(cleaned, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("<syntax>", source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, source + ": key '" + section + "' outside of any section");
    }
    for (const auto& [key, leaf] : body) set_config_value(cfg, section, key, leaf.data());
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open config file " + path);
  apply_config(cfg, in, path);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.find('.');
  if (eq == std::string::npos || dot == std::string::npos) {
    throw ConfigError(lhs, "override '" + assignment + "' must look like section.key=value");
  }
  set_config_value(cfg, lhs.substr(0, dot), lhs.substr(dot + 1), trim(assignment.substr(eq + 1)));
}

void validate(const RunConfig& cfg) {
  if (cfg.T < 1) throw ConfigError("run.T", "run.T must be at least 1");
  const double c = cfg.shrink_c();
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("algorithm.c", "algorithm.c must lie in (0, 1)");
  if (cfg.domain.d < 1) throw ConfigError("domain.d", "domain.d must be positive");
  if (cfg.domain.kind == DomainKind::ReducedSimplex && cfg.domain.d < 2) {
    throw ConfigError("domain.d", "domain.d must be at least 2 for a reduced simplex");
  }
  if (cfg.domain.kind == DomainKind::Box && !(cfg.domain.lo < cfg.domain.hi)) {
    throw ConfigError("domain.lo", "domain.lo must be below domain.hi");
  }
  if (cfg.domain.kind == DomainKind::File && cfg.domain.file.empty()) {
    throw ConfigError("domain.file", "domain.file is required when domain.kind = file");
  }
  if (!(cfg.barrier.R > 0.0)) throw ConfigError("barrier.R", "barrier.R must be positive");
  if (cfg.barrier.nu && !(*cfg.barrier.nu > 0.0)) throw ConfigError("barrier.nu", "barrier.nu must be positive");
  if (!(cfg.b > 0.0)) throw ConfigError("algorithm.b", "algorithm.b must be positive");
  if (!(cfg.G > 0.0)) throw ConfigError("algorithm.G", "algorithm.G must be positive");
  if (cfg.eta && !(*cfg.eta > 0.0)) throw ConfigError("algorithm.eta", "algorithm.eta must be positive");
  if (cfg.eps && !(*cfg.eps > 0.0)) throw ConfigError("algorithm.eps", "algorithm.eps must be positive");
  if (!(cfg.alpha_hess >= 0.0 && cfg.alpha_hess < 1.0)) {
    throw ConfigError("algorithm.alpha_hess", "algorithm.alpha_hess must lie in [0, 1)");
  }
  if (cfg.monitor_every < 0) throw ConfigError("algorithm.monitor_every", "algorithm.monitor_every must be >= 0");
  if (cfg.algorithm == Algorithm::Ogd && cfg.domain.kind != DomainKind::ReducedSimplex) {
    throw ConfigError("algorithm.name", "ogd requires domain.kind = reduced_simplex");
  }
  if (!(cfg.loss_lo > 0.0 && cfg.loss_lo <= cfg.loss_hi)) {
    throw ConfigError("loss.lo", "loss.lo and loss.hi must satisfy 0 < lo <= hi");
  }
  if (!(cfg.feasibility_margin >= 0.0)) {
    throw ConfigError("run.feasibility_margin", "run.feasibility_margin must be non-negative");
  }
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream o;
  const char* domain_kind[] = {"box", "reduced_simplex", "file"};
  const char* barrier_kind[] = {"log", "hybrid"};
  o << "[domain]\n"
    << "kind = " << domain_kind[static_cast<int>(cfg.domain.kind)] << '\n'
    << "d = " << cfg.domain.d << '\n'
    << "lo = " << fmt(cfg.domain.lo) << '\n'
    << "hi = " << fmt(cfg.domain.hi) << '\n';
  if (!cfg.domain.file.empty()) o << "file = \"" << cfg.domain.file << "\"\n";
  o << "\n[barrier]\n"
    << "kind = " << barrier_kind[static_cast<int>(cfg.barrier.kind)] << '\n';
  if (cfg.barrier.nu) o << "nu = " << fmt(*cfg.barrier.nu) << '\n';
  o << "R = " << fmt(cfg.barrier.R) << '\n';
  o << "\n[algorithm]\n"
    << "name = " << to_string(cfg.algorithm) << '\n'
    << "mode = " << to_string(cfg.mode) << '\n'
    << "bound = " << (cfg.bound == BoundKind::Local ? "local" : "euclidean") << '\n'
    << "b = " << fmt(cfg.b) << '\n'
    << "G = " << fmt(cfg.G) << '\n';
  if (cfg.c) o << "c = " << fmt(*cfg.c) << '\n';
  if (cfg.eta) o << "eta = " << fmt(*cfg.eta) << '\n';
  if (cfg.eps) o << "eps = " << fmt(*cfg.eps) << '\n';
  o << "alpha_hess = " << fmt(cfg.alpha_hess) << '\n'
    << "noise = " << (cfg.noise == NoiseMode::Off ? "off" : "adversarial") << '\n'
    << "noise_seed = " << cfg.noise_seed << '\n'
    << "monitor_every = " << cfg.monitor_every << '\n'
    << "record_inner_decrements = " << (cfg.record_inner_decrements ? "true" : "false") << '\n'
    << "ogd_G = " << fmt(cfg.ogd_G) << '\n'
    << "ogd_R = " << fmt(cfg.ogd_R) << '\n';
  o << "\n[loss]\n"
    << "family = " << to_string(cfg.loss) << '\n'
    << "lo = " << fmt(cfg.loss_lo) << '\n'
    << "hi = " << fmt(cfg.loss_hi) << '\n'
    << "G = " << fmt(cfg.loss_G) << '\n';
  o << "\n[run]\n"
    << "T = " << cfg.T << '\n'
    << "seed = " << cfg.seed << '\n'
    << "output = \"" << cfg.output << "\"\n"
    << "record_wall_time = " << (cfg.record_wall_time ? "true" : "false") << '\n'
    << "measure_local_norms = " << (cfg.measure_local_norms ? "true" : "false") << '\n'
    << "feasibility_margin = " << fmt(cfg.feasibility_margin) << '\n';
  return o.str();
}

}  // namespace barons
