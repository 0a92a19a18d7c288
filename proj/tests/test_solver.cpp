#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ohbk/errors.hpp"
#include "ohbk/solver.hpp"

using namespace ohbk;
using linalg::Vector;
using solver::SolverState;
using sources::Measurement;

namespace {

Vector random_vector(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (double& x : v) x = normal(gen);
  return v;
}

SolverState random_state(std::mt19937_64& gen, std::size_t n, double beta) {
  SolverState s = solver::init(random_vector(gen, n), beta);
  s.x_prev = random_vector(gen, n);
  return s;
}

}  // namespace

TEST_CASE("init") {
  const auto s = solver::init(Vector(3), 0.5);
  CHECK(s.x_curr == Vector(3));
  CHECK(s.x_prev == s.x_curr);
  CHECK(s.t == 0);
  CHECK_THROWS_AS(solver::init(Vector(3), 1.2), ArgumentError);
  CHECK_THROWS_AS(solver::init(Vector(3), 1.0), ArgumentError);
  CHECK_THROWS_AS(solver::init(Vector(3), -0.1), ArgumentError);
}

TEST_CASE("first step carries no momentum") {
  const auto s = solver::step(solver::init(Vector{0, 0}, 0.5), Measurement{Vector{1, 0}, 2});
  CHECK(s.x_curr == Vector{2, 0});
  CHECK(s.x_prev == Vector{0, 0});
  CHECK(s.t == 1);
}

TEST_CASE("hand-evaluated momentum step") {
  SolverState s = solver::init(Vector{1, 0}, 0.5);
  s.x_prev = Vector{0, 0};
  const auto next = solver::step(s, Measurement{Vector{0, 1}, 3});
  // (1,0) - (0 - 3)/1 * (0,1) + 0.5 * ((1,0) - (0,0)) = (1.5, 3)
  CHECK(next.x_curr == Vector{1.5, 3});
  CHECK(next.x_prev == Vector{1, 0});
}

TEST_CASE("step errors") {
  const auto s = solver::init(Vector(2), 0.1);
  CHECK_THROWS_AS(solver::step(s, Measurement{Vector{1, 2, 3}, 0}), DimensionError);
  CHECK_THROWS_AS(solver::step(s, Measurement{Vector{1, std::nan("")}, 0}), ArgumentError);
  CHECK_THROWS_AS(solver::step(s, Measurement{Vector{1, 1}, INFINITY}), ArgumentError);
}

TEST_CASE("degenerate measurements are skipped") {
  SolverState s = solver::init(Vector{1, 2}, 0.3);
  s.x_prev = Vector{0, 0};
  const auto next = solver::step(s, Measurement{Vector{1e-13, 0}, 5});
  CHECK(next.x_curr == s.x_curr);
  CHECK(next.x_prev == s.x_prev);
  CHECK(next.t == 0);
  CHECK(next.skipped == 1);
}

TEST_CASE("projection exactness and idempotence at beta = 0") {
  std::mt19937_64 gen(1);
  for (int k = 0; k < 2000; ++k) {
    const SolverState s = random_state(gen, 20, 0.0);
    const Measurement m{random_vector(gen, 20), std::normal_distribution<double>(0, 3)(gen)};
    const auto once = solver::step(s, m);
    const double resid = linalg::dot(m.phi, once.x_curr) - m.y;
    REQUIRE(std::abs(resid) <= 1e-10 * linalg::norm(m.phi) * linalg::norm(once.x_curr));
    const auto twice = solver::step(once, m);
    REQUIRE(linalg::distance(twice.x_curr, once.x_curr) <= 1e-12 * linalg::norm(once.x_curr));
  }
}

TEST_CASE("momentum decomposes exactly into projection plus beta * displacement") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> beta_dist(0.0, 0.99);
  for (int k = 0; k < 2000; ++k) {
    const double beta = beta_dist(gen);
    SolverState s = random_state(gen, 15, beta);
    SolverState s0 = s;
    s0.beta = 0.0;
    const Measurement m{random_vector(gen, 15), std::normal_distribution<double>()(gen)};
    const auto with = solver::step(s, m);
    const auto without = solver::step(s0, m);
    const Vector expected = linalg::axpy(beta, linalg::axpy(-1.0, s.x_prev, s.x_curr), without.x_curr);
    REQUIRE(linalg::distance(with.x_curr, expected) <= 1e-14 * (1.0 + linalg::norm(s.x_curr)));
  }
}

TEST_CASE("the update is invariant to rescaling the measurement") {
  std::mt19937_64 gen(3);
  for (double c : {-3.0, 1e-3, 0.5, 7.0, 1e4}) {
    for (int k = 0; k < 200; ++k) {
      const SolverState s = random_state(gen, 10, 0.4);
      const Measurement m{random_vector(gen, 10), std::normal_distribution<double>()(gen)};
      Vector scaled = m.phi;
      for (double& x : scaled) x *= c;
      const auto a = solver::step(s, m);
      const auto b = solver::step(s, Measurement{scaled, c * m.y});
      REQUIRE(linalg::distance(a.x_curr, b.x_curr) <= 1e-12 * linalg::norm(a.x_curr));
    }
  }
}

TEST_CASE("x* is a fixed point") {
  std::mt19937_64 gen(4);
  const Vector x_star = random_vector(gen, 8);
  SolverState s = solver::init(x_star, 0.6);
  for (int k = 0; k < 100; ++k) {
    const Vector phi = random_vector(gen, 8);
    Measurement m{phi, linalg::dot(phi, x_star)};
    solver::step_in_place(s, m);
  }
  CHECK(linalg::distance(s.x_curr, x_star) <= 1e-13);
}

TEST_CASE("run records one error per consumed measurement") {
  const auto spec = sources::SourceSpec::uniform(50, 0.0, 1.0, 7);
  solver::RunOptions options;
  options.iterations = 300;
  const auto traj = solver::run(spec, 0.3, options);
  REQUIRE(traj.errors.size() == 301);
  sources::MeasurementSource src(spec);
  CHECK(traj.errors[0] == linalg::norm(src.ground_truth().x_star));
  for (std::size_t k = 0; k < traj.errors.size(); ++k) {
    CHECK(traj.iterations[k] == k);
    CHECK(std::isfinite(traj.errors[k]));
    CHECK(traj.errors[k] >= 0.0);
  }
  CHECK(traj.error_at(300) == traj.final_error());
  CHECK_THROWS_AS(traj.error_at(301), ArgumentError);

  const auto again = solver::run(spec, 0.3, options);
  CHECK(again.errors == traj.errors);
}

TEST_CASE("record stride keeps t = 0 and the last iteration") {
  solver::RunOptions options;
  options.iterations = 25;
  options.record_every = 10;
  const auto traj = solver::run(sources::SourceSpec::gaussian(5, 1), 0.0, options);
  CHECK(traj.iterations == std::vector<std::size_t>{0, 10, 20, 25});
  options.record_every = 1;
  const auto full = solver::run(sources::SourceSpec::gaussian(5, 1), 0.0, options);
  CHECK(traj.error_at(20) == full.error_at(20));
  CHECK(traj.final_error() == full.final_error());
}

TEST_CASE("starting at x* gives identically zero error") {
  const auto spec = sources::SourceSpec::gaussian(12, 3);
  sources::MeasurementSource src(spec);
  solver::RunOptions options;
  options.iterations = 200;
  options.x0 = src.ground_truth().x_star;
  const auto traj = solver::run(src, 0.5, options);
  for (double e : traj.errors) CHECK(e == 0.0);
}

TEST_CASE("one dimension is recovered by a single projection") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    solver::RunOptions options;
    options.iterations = 1;
    const auto traj = solver::run(sources::SourceSpec::uniform(1, 0.0, 1.0, seed), 0.0, options);
    CHECK(traj.errors[1] <= 4 * std::numeric_limits<double>::epsilon() * traj.errors[0]);
  }
}

TEST_CASE("plain online Kaczmarz reduces the error on Gaussian data") {
  solver::RunOptions options;
  options.iterations = 2000;
  std::vector<double> ratio;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto traj = solver::run(sources::SourceSpec::gaussian(50, seed), 0.0, options);
    ratio.push_back(traj.final_error() / traj.errors[0]);
  }
  std::nth_element(ratio.begin(), ratio.begin() + 5, ratio.end());
  CHECK(ratio[5] < 1.0);
}

TEST_CASE("stream-once dataset run stops at end of stream") {
  auto data = std::make_shared<const sources::DataMatrix>(
      4, 2, std::vector<double>{1, 0, 0, 1, 1, 1, 1, -1});
  solver::RunOptions options;
  options.iterations = 100;
  const auto traj = solver::run(
      sources::SourceSpec::dataset(data, sources::RowOrder::once, 0), 0.0, options);
  CHECK(traj.final_iteration() == 4);
  CHECK(traj.errors.size() == 5);
  // Two orthogonal rows pin down x* in the plane.
  CHECK(traj.errors[2] <= 1e-15 * traj.errors[0]);
}

TEST_CASE("paired runs match independent runs exactly") {
  const auto spec = sources::SourceSpec::uniform(20, 0.2, 1.0, 9);
  solver::RunOptions options;
  options.iterations = 500;
  options.record_every = 7;
  const std::vector<double> betas{0.0, 0.25, 0.5};
  const auto paired = solver::run_paired(spec, betas, options);
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const auto single = solver::run(spec, betas[k], options);
    CHECK(paired[k].iterations == single.iterations);
    CHECK(paired[k].errors == single.errors);
  }
}
