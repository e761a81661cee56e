#include <sstream>

#include "barons/config.hpp"
#include "barons/errors.hpp"
#include "doctest.h"

using namespace barons;

namespace {
RunConfig parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  apply_config(cfg, in);
  return cfg;
}

std::string error_key(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}
}  // namespace

TEST_CASE("defaults") {
  const RunConfig cfg;
  CHECK(cfg.algorithm == Algorithm::Barons);
  CHECK(cfg.mode == Mode::Practical);
  CHECK(cfg.b == 2.0);
  CHECK(cfg.monitor_every == 50);
  CHECK(cfg.shrink_c() == doctest::Approx(1e-3));
}

TEST_CASE("sections, comments and quotes") {
  const RunConfig cfg = parse(R"(
# leading comment
[domain]
kind = reduced_simplex   # trailing comment
d = 4

[algorithm]
name = ftrl_exact
mode = strict
b = 1.5
c = 0.01
noise = adversarial
record_inner_decrements = true

[loss]
family = portfolio_iid
lo = 0.8

[run]
T = 250
seed = 42
output = "out dir/trace #1.csv"
)");
  CHECK(cfg.domain.kind == DomainKind::ReducedSimplex);
  CHECK(cfg.domain.d == 4);
  CHECK(cfg.algorithm == Algorithm::FtrlExact);
  CHECK(cfg.mode == Mode::Strict);
  CHECK(cfg.b == 1.5);
  CHECK(cfg.c == 0.01);
  CHECK(cfg.noise == NoiseMode::Adversarial);
  CHECK(cfg.record_inner_decrements);
  CHECK(cfg.loss_lo == 0.8);
  CHECK(cfg.T == 250);
  CHECK(cfg.seed == 42);
  CHECK(cfg.output == "out dir/trace #1.csv");
}

TEST_CASE("errors name the key") {
  CHECK(error_key("[algorithm]\nfoo = 1\n") == "algorithm.foo");
  CHECK(error_key("[nosection]\nT = 1\n") == "nosection.T");
  CHECK(error_key("[run]\nT = ten\n") == "run.T");
  CHECK(error_key("[run]\nseed = -3\n") == "run.seed");
  CHECK(error_key("[algorithm]\nmode = fast\n") == "algorithm.mode");
  CHECK(error_key("[run]\nrecord_wall_time = maybe\n") == "run.record_wall_time");
  CHECK(error_key("T = 5\n[run]\n") == "T");
}

TEST_CASE("overrides") {
  RunConfig cfg;
  apply_override(cfg, "run.T=77");
  apply_override(cfg, "algorithm.eta = 0.002");
  CHECK(cfg.T == 77);
  CHECK(cfg.eta == 0.002);
  CHECK_THROWS_AS(apply_override(cfg, "T=5"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "run.nope=5"), ConfigError);
}

TEST_CASE("validation") {
  RunConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.T = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.c = 1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.algorithm = Algorithm::Ogd;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.domain.kind = DomainKind::File;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("dump then parse reproduces the config") {
  RunConfig cfg;
  cfg.domain = {DomainKind::Box, 3, -1.0, 1.0, ""};
  cfg.barrier.kind = BarrierKind::Hybrid;
  cfg.barrier.nu = 6.0;
  cfg.barrier.R = 1.7320508075688772;
  cfg.bound = BoundKind::Euclidean;
  cfg.eps = 1e-4;
  cfg.loss = LossFamily::LinearSphere;
  cfg.T = 1234;
  cfg.seed = 99;
  const RunConfig back = parse(dump_config(cfg));
  CHECK(dump_config(back) == dump_config(cfg));
  CHECK(back.barrier.R == cfg.barrier.R);
  CHECK(back.eps == cfg.eps);
}
