#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "balcut/common.hpp"
#include "balcut/lapterm.hpp"
#include "balcut/mmw.hpp"
#include "balcut/refcheck.hpp"
#include "balcut/rng.hpp"

using balcut::DenseSym;
using balcut::Embedding;
using balcut::FeedbackMatrix;
using balcut::LapTerm;
using balcut::MmwConfig;
using balcut::NormalizedFeedback;
using balcut::Rng;

namespace {

MmwConfig small_cfg(int n, double r) {
  MmwConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.d = 24;
  cfg.epsilon = 1.0;
  cfg.T = 8;
  cfg.p = 30;
  cfg.alpha = 10;
  cfg.zeta = 1;
  cfg.relax_couplings = true;
  return cfg;
}

FeedbackMatrix diag_feedback(std::vector<double> d) {
  FeedbackMatrix m;
  m.terms = {{LapTerm::diagonal(std::move(d)), 1.0}};
  m.width_bound = 1.0;
  m.origin = "test";
  return m;
}

}  // namespace

TEST_CASE("taylor polynomial reproduces the exponential on a diagonal") {
  // A = diag(ln 2, 0) as a single normalized feedback with eps = 2, zeta = 1/2:
  // A x = (eps/2) * Y x with Y = (M + zeta)/( 2 zeta), so pick M to make
  // Y = diag(ln 2, 0): M = diag(ln 2 - 1/2, -1/2) at zeta = 1/2, eps = 2.
  FeedbackMatrix m;
  m.terms = {{LapTerm::diagonal({std::log(2.0) - 0.5, -0.5}), 1.0}};
  m.width_bound = 0.5;  // true norm: max(|ln 2 - 1/2|, 1/2)
  NormalizedFeedback y = balcut::normalize_feedback(m, 0.5);

  std::vector<NormalizedFeedback> ys = {y};
  double v0[2] = {1, 0}, v1[2] = {0, 1};
  double out[2];
  balcut::taylor_exp_apply(ys, 2.0, 30, v0, out, 2);
  CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  balcut::taylor_exp_apply(ys, 2.0, 30, v1, out, 2);
  CHECK(out[0] == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize_feedback is a contraction when the width holds") {
  // M = diag(0.8, -0.6), zeta = 1: Y = diag(0.9, 0.2), inside [0, 1].
  NormalizedFeedback y = balcut::normalize_feedback(diag_feedback({0.8, -0.6}), 1.0);
  double x0[2] = {1, 0}, x1[2] = {0, 1}, out[2];
  y.matvec(x0, out, 2);
  CHECK(out[0] == doctest::Approx(0.9));
  CHECK(out[1] == doctest::Approx(0.0).scale(1));
  y.matvec(x1, out, 2);
  CHECK(out[1] == doctest::Approx(0.2));
}

TEST_CASE("next_iterate holds the trace invariant and is deterministic") {
  MmwConfig cfg = small_cfg(16, 4.0);
  cfg.seed = 77;
  std::vector<NormalizedFeedback> ys;
  ys.push_back(balcut::normalize_feedback(diag_feedback(std::vector<double>(16, 0.3)), 1.0));

  Embedding w1 = balcut::next_iterate(ys, cfg, 2);
  Embedding w2 = balcut::next_iterate(ys, cfg, 2);
  CHECK(w1.vecs == w2.vecs);  // same t, same seed: identical sketch
  w1.validate();
  double tr = 0;
  for (int i = 0; i < w1.n; ++i) tr += w1.norm2(i);
  CHECK(tr == doctest::Approx(4.0).epsilon(1e-9));

  // Different iteration index draws a fresh sketch.
  Embedding w3 = balcut::next_iterate(ys, cfg, 3);
  CHECK(w1.vecs != w3.vecs);
}

TEST_CASE("block apply matches the scalar apply lane by lane") {
  Rng rng(31);
  const int n = 12, d = 5;
  std::vector<std::pair<LapTerm, double>> terms = {
      {LapTerm::edge(0, 5), 1.3},
      {LapTerm::path_triple(2, 7, 9), -0.4},
      {LapTerm::complete({1, 3, 4, 8}), 0.25},
      {LapTerm::diagonal({1, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 3}), 0.5},
      {LapTerm::identity(0.75), 1.0},
  };
  FeedbackMatrix m;
  m.terms = terms;

  std::vector<double> x(static_cast<std::size_t>(n) * d);
  for (auto& v : x) v = rng.next_gaussian();
  std::vector<double> y_block(static_cast<std::size_t>(n) * d, 0.0);
  m.apply_add_block(x.data(), y_block.data(), n, d, 0.9);

  // Scalar path, one lane at a time.
  for (int lane = 0; lane < d; ++lane) {
    std::vector<double> xl(static_cast<std::size_t>(n)), yl(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) xl[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i) * d + lane];
    m.apply_add(xl.data(), yl.data(), n, 0.9);
    for (int i = 0; i < n; ++i)
      CHECK(y_block[static_cast<std::size_t>(i) * d + lane] ==
            doctest::Approx(yl[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("quadform agrees with the dense inner product") {
  Rng rng(44);
  const int n = 10, d = 6;
  Embedding w;
  w.n = n;
  w.d = d;
  w.vecs.resize(static_cast<std::size_t>(n) * d);
  for (auto& v : w.vecs) v = rng.next_gaussian();
  double tr = 0;
  for (int i = 0; i < n; ++i) tr += w.norm2(i);
  w.trace_scale = tr;

  std::vector<std::pair<LapTerm, double>> terms = {
      {LapTerm::edge(1, 4), 2.0},
      {LapTerm::path_triple(0, 3, 8), 1.0},
      {LapTerm::complete({2, 5, 6}), -0.5},
      {LapTerm::diagonal({0, 1, 0, 0, 2, 0, 0, 0, 0, 1}), 1.0},
      {LapTerm::identity(1.5), 1.0},
  };
  FeedbackMatrix m;
  m.terms = terms;

  // X = W^T W densely.
  DenseSym x = DenseSym::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double dot = 0;
      for (int k = 0; k < d; ++k)
        dot += w.vecs[static_cast<std::size_t>(i) * d + k] * w.vecs[static_cast<std::size_t>(j) * d + k];
      x.at(i, j) = dot;
    }
  DenseSym md = balcut::densify(terms, n);
  CHECK(m.quadform(w) == doctest::Approx(balcut::dense_inner(md, x)).epsilon(1e-9));
}

TEST_CASE("mmw_solve returns yes immediately when the oracle accepts") {
  MmwConfig cfg = small_cfg(8, 2.0);
  auto oracle = [](const Embedding&, int) {
    return balcut::OracleVerdict<int>::accept(42);
  };
  auto out = balcut::mmw_solve<int>(oracle, cfg);
  REQUIRE(out.yes.has_value());
  CHECK(*out.yes == 42);
  CHECK(out.iterations == 1);
  CHECK_FALSE(out.exhausted);
  REQUIRE(out.log.size() == 1);
  CHECK(out.log[0].yes);
}

TEST_CASE("mmw_solve exhausts after T rejections and keeps the log") {
  MmwConfig cfg = small_cfg(8, 2.0);
  cfg.T = 5;
  int calls = 0;
  auto oracle = [&](const Embedding&, int) {
    ++calls;
    return balcut::OracleVerdict<int>::reject(diag_feedback(std::vector<double>(8, 0.1)));
  };
  auto out = balcut::mmw_solve<int>(oracle, cfg);
  CHECK_FALSE(out.yes.has_value());
  CHECK(out.exhausted);
  CHECK(out.iterations == 5);
  CHECK(calls == 5);
  CHECK(out.log.size() == 5);
  for (const auto& e : out.log) {
    CHECK_FALSE(e.yes);
    CHECK(e.origin == "test");
    CHECK(e.width == doctest::Approx(1.0));
  }
  CHECK(out.last_iterate.n == 8);
}

TEST_CASE("config validation enforces the couplings unless relaxed") {
  MmwConfig cfg;
  cfg.n = 64;
  cfg.r = 4;
  cfg.epsilon = 0.5;
  cfg.T = 4;  // far below 2 ln(n)/eps^2
  cfg.p = 4;
  cfg.alpha = 100;
  cfg.zeta = 1;
  cfg.gamma = 0.25;
  CHECK_THROWS(cfg.validate());
  cfg.relax_couplings = true;
  CHECK_NOTHROW(cfg.validate());
  cfg.epsilon = 5.0;  // outside (0, 4) regardless of relaxation
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("degenerate normalization raises a numerical error") {
  // Enough identity contractions overflow exp(A) past double range; the
  // Frobenius normalization must refuse rather than emit non-finite vectors.
  MmwConfig cfg = small_cfg(6, 2.0);
  cfg.epsilon = 3.9;
  cfg.p = 800;
  std::vector<NormalizedFeedback> ys;
  for (int k = 0; k < 400; ++k)
    ys.push_back(balcut::normalize_feedback(diag_feedback(std::vector<double>(6, 1.0)), 1.0));
  CHECK_THROWS_AS(balcut::next_iterate(ys, cfg, 1), balcut::NumericalError);
}

TEST_CASE("dense regret audit holds on random contraction sequences") {
  // Psi = lambda_max(sum Y) must stay below (1+eps) sum <Y_t, X_t> + ln(n)/eps
  // when X_t are the matrix-exponential iterates.
  Rng rng(99);
  const int n = 12;
  for (double eps : {0.1, 0.3, 0.8}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<DenseSym> ys;
      int T = 20;
      for (int t = 0; t < T; ++t) {
        // Random symmetric contraction: Y = Q D Q^T with D in [0, 1].
        DenseSym y = DenseSym::zero(n);
        // Random diagonal in a random orthogonal-ish basis via Jacobi mixing.
        for (int i = 0; i < n; ++i) y.at(i, i) = rng.next_double();
        for (int k = 0; k < 30; ++k) {
          int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
          int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
          if (i == j) continue;
          double c = std::cos(rng.next_uniform(0, 3.14159)), s = std::sin(rng.next_uniform(0, 3.14159));
          // Apply Givens rotation on both sides.
          for (int col = 0; col < n; ++col) {
            double a = y.at(i, col), b = y.at(j, col);
            y.at(i, col) = c * a - s * b;
            y.at(j, col) = s * a + c * b;
          }
          for (int row = 0; row < n; ++row) {
            double a = y.at(row, i), b = y.at(row, j);
            y.at(row, i) = c * a - s * b;
            y.at(row, j) = s * a + c * b;
          }
        }
        // Clamp into [0, Id] spectrally: Y <- (Y + ||Y|| Id) / (2 ||Y||).
        double norm = balcut::dense_opnorm(y);
        if (norm > 0) {
          y = balcut::dense_scale(y, 1.0 / (2.0 * norm));
          for (int i = 0; i < n; ++i) y.at(i, i) += 0.5;
        }
        ys.push_back(y);
      }
      auto xs = balcut::dense_mmw_iterates(ys, eps);
      REQUIRE(xs.size() == ys.size());
      for (const auto& x : xs) {
        CHECK(balcut::dense_trace(x) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(balcut::dense_lambda_min(x) >= -1e-12);
      }
      CHECK(balcut::eigenvalue_regret_check(ys, xs, eps));
    }
  }
}
