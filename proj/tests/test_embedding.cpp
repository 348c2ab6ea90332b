#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "balcut/common.hpp"
#include "balcut/embedding.hpp"
#include "balcut/graph.hpp"
#include "balcut/rng.hpp"

using balcut::Embedding;
using balcut::GaussianSketch;
using balcut::Graph;
using balcut::Rng;

namespace {

Embedding make(int d, int n, std::vector<double> vecs, double trace) {
  Embedding w;
  w.d = d;
  w.n = n;
  w.vecs = std::move(vecs);
  w.trace_scale = trace;
  return w;
}

}  // namespace

TEST_CASE("norms and squared distances") {
  // Two opposite unit vectors along e1 in d = 2.
  Embedding w = make(2, 2, {1, 0, -1, 0}, 2.0);
  CHECK(w.norm2(0) == 1.0);
  CHECK(w.norm2(1) == 1.0);
  CHECK(w.sqdist(0, 1) == 4.0);
  CHECK(w.sqdist(0, 0) == 0.0);
  w.validate();
}

TEST_CASE("validate rejects inconsistent shapes and traces") {
  Embedding bad = make(2, 2, {1, 0, 0}, 2.0);  // wrong length
  CHECK_THROWS(bad.validate());
  Embedding off = make(2, 2, {1, 0, -1, 0}, 5.0);  // trace says 5, actual 2
  CHECK_THROWS(off.validate());
}

TEST_CASE("objective sums squared distances over edges") {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  // Points 0, 1, 2 on a line: coordinates 0, 1, 3 in d = 1.
  Embedding w = make(1, 3, {0, 1, 3}, 10.0);
  CHECK(balcut::objective(g, w) == doctest::Approx(1.0 + 4.0));
}

TEST_CASE("spread counts ordered pairs") {
  // +-e1: the unordered pair distance is 4; ordered doubles it.
  Embedding w = make(2, 2, {1, 0, -1, 0}, 2.0);
  CHECK(balcut::spread(w, {0, 1}) == doctest::Approx(8.0));
  CHECK(balcut::spread(w, {0}) == 0.0);
  CHECK(balcut::spread(w, {}) == 0.0);
}

TEST_CASE("tall_set thresholds on squared norm, ascending") {
  Embedding w = make(1, 4, {0.5, 2.0, 1.0, -3.0}, 0.25 + 4 + 1 + 9);
  auto tall = balcut::tall_set(w);  // default threshold 2
  CHECK(tall == std::vector<int>{1, 3});
  auto taller = balcut::tall_set(w, 8.0);
  CHECK(taller == std::vector<int>{3});
}

TEST_CASE("triangle_violation frozen values") {
  // Collinear points 0, 1, 2 in 1-D: sq(0,1) + sq(1,2) - sq(0,2) = 1+1-4 = -2.
  Embedding w = make(1, 3, {0, 1, 2}, 5.0);
  CHECK(balcut::triangle_violation(w, 0, 1, 2) == doctest::Approx(-2.0));
  // Routing through an endpoint instead: sq(1,0) + sq(0,2) - sq(1,2) = 4.
  CHECK(balcut::triangle_violation(w, 1, 0, 2) == doctest::Approx(4.0));
}

TEST_CASE("sketch entries are addressed, not sequential") {
  GaussianSketch s(8, 77);
  double first = s.entry(3, 141);
  (void)s.entry(0, 0);
  (void)s.row(5, 32);
  CHECK(s.entry(3, 141) == first);
  // Same (d, seed) reproduces; different seeds differ.
  GaussianSketch s2(8, 77);
  CHECK(s2.entry(3, 141) == first);
  GaussianSketch s3(8, 78);
  CHECK(s3.entry(3, 141) != first);
}

TEST_CASE("sketch rows have variance 1/d") {
  const int d = 16;
  GaussianSketch s(d, 12345);
  double sum = 0, sumsq = 0;
  const int cnt = 20000;
  for (int i = 0; i < cnt; ++i) {
    double x = s.entry(i % d, static_cast<std::uint64_t>(i));
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / cnt;
  double var = sumsq / cnt - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0 / d).epsilon(0.05));
}

TEST_CASE("johnson-lindenstrauss at the default dimension") {
  // Sketch well-separated points and check pairwise squared distances are
  // preserved within 35 percent at the default dimension.
  const int n = 24;
  const int d_in = n;
  std::vector<double> input(static_cast<std::size_t>(d_in) * n, 0.0);
  // Orthogonal basis scaled by sqrt(2): all pairwise sqdists are 4.
  for (int i = 0; i < n; ++i)
    input[static_cast<std::size_t>(i) * d_in + i] = std::sqrt(2.0);

  int d_out = balcut::default_sketch_dim(n);
  GaussianSketch s(d_out, 3);
  std::vector<double> out = balcut::sketch_apply(s, input, d_in, n);
  Embedding w;
  w.d = d_out;
  w.n = n;
  w.vecs = out;
  w.trace_scale = 0;  // not validated here

  int bad = 0, pairs = 0;
  double sum = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double sq = w.sqdist(i, j);
      if (sq < 4.0 * 0.5 || sq > 4.0 * 1.5) ++bad;
      sum += sq;
      ++pairs;
    }
  CHECK(bad == 0);
  CHECK(sum / pairs == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("default sketch dimension grows logarithmically") {
  CHECK(balcut::default_sketch_dim(2) == static_cast<int>(std::ceil(40 * std::log(2))));
  CHECK(balcut::default_sketch_dim(1000) == static_cast<int>(std::ceil(40 * std::log(1000))));
  CHECK(balcut::default_sketch_dim(1) == balcut::default_sketch_dim(2));
}
