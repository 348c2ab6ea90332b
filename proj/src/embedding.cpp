#include "balcut/embedding.hpp"

#include <cmath>

#include "balcut/common.hpp"
#include "balcut/rng.hpp"

namespace balcut {

double Embedding::norm2(int i) const {
  const double* v = col(i);
  double s = 0;
  for (int k = 0; k < d; ++k) s += v[k] * v[k];
  return s;
}

double Embedding::sqdist(int i, int j) const {
  const double* a = col(i);
  const double* b = col(j);
  double s = 0;
  for (int k = 0; k < d; ++k) {
    double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

void Embedding::validate(double rel_tol) const {
  BALCUT_REQUIRE(d > 0 && n > 0, "embedding dimensions must be positive");
  BALCUT_REQUIRE(vecs.size() == static_cast<std::size_t>(d) * n,
                 "embedding storage size mismatch");
  double tr = 0;
  for (int i = 0; i < n; ++i) tr += norm2(i);
  BALCUT_REQUIRE(std::isfinite(tr), "embedding contains non-finite values");
  double scale = std::max(1.0, std::abs(trace_scale));
  BALCUT_REQUIRE(std::abs(tr - trace_scale) <= rel_tol * scale,
                 "embedding trace does not match trace_scale");
}

double objective(const Graph& g, const Embedding& w) {
  BALCUT_REQUIRE(g.n == w.n, "objective: size mismatch");
  double s = 0;
  for (auto [u, v] : g.edges) s += w.sqdist(u, v);
  return s;
}

double spread(const Embedding& w, const std::vector<int>& s) {
  // sum over ordered pairs = 2|S| * sum ||v_i||^2 - 2 ||sum v_i||^2
  double norms = 0;
  std::vector<double> acc(w.d, 0.0);
  for (int i : s) {
    BALCUT_REQUIRE(i >= 0 && i < w.n, "spread: vertex out of range");
    norms += w.norm2(i);
    const double* v = w.col(i);
    for (int k = 0; k < w.d; ++k) acc[k] += v[k];
  }
  double acc2 = 0;
  for (int k = 0; k < w.d; ++k) acc2 += acc[k] * acc[k];
  return 2.0 * static_cast<double>(s.size()) * norms - 2.0 * acc2;
}

std::vector<int> tall_set(const Embedding& w, double threshold) {
  std::vector<int> out;
  for (int i = 0; i < w.n; ++i) {
    if (w.norm2(i) > threshold) out.push_back(i);
  }
  return out;
}

double triangle_violation(const Embedding& w, int i, int j, int k) {
  return w.sqdist(i, j) + w.sqdist(j, k) - w.sqdist(i, k);
}

GaussianSketch::GaussianSketch(int d_out, std::uint64_t seed_in)
    : d(d_out), seed(seed_in) {
  BALCUT_REQUIRE(d_out > 0, "sketch dimension must be positive");
}

double GaussianSketch::entry(int row, std::uint64_t c) const {
  Rng rng(seed);
  std::uint64_t idx = (static_cast<std::uint64_t>(row) << 32) | c;
  return rng.gaussian_at(idx) / std::sqrt(static_cast<double>(d));
}

std::vector<double> GaussianSketch::row(int r, std::uint64_t count) const {
  Rng rng(seed);
  double scale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<double> out(count);
  std::uint64_t base = static_cast<std::uint64_t>(r) << 32;
  for (std::uint64_t c = 0; c < count; ++c) {
    out[c] = rng.gaussian_at(base | c) * scale;
  }
  return out;
}

std::vector<double> sketch_apply(const GaussianSketch& s, const std::vector<double>& input,
                                 int d_in, int n) {
  BALCUT_REQUIRE(d_in > 0 && n > 0, "sketch_apply: bad dimensions");
  BALCUT_REQUIRE(input.size() == static_cast<std::size_t>(d_in) * n,
                 "sketch_apply: input size mismatch");
  BALCUT_REQUIRE(static_cast<std::uint64_t>(d_in) < (1ull << 32),
                 "sketch_apply: input dimension too large");
  std::vector<double> out(static_cast<std::size_t>(s.d) * n, 0.0);
  for (int r = 0; r < s.d; ++r) {
    std::vector<double> phi = s.row(r, static_cast<std::uint64_t>(d_in));
    for (int j = 0; j < n; ++j) {
      const double* in_col = input.data() + static_cast<std::size_t>(j) * d_in;
      double acc = 0;
      for (int c = 0; c < d_in; ++c) acc += phi[c] * in_col[c];
      out[static_cast<std::size_t>(j) * s.d + r] = acc;
    }
  }
  return out;
}

int default_sketch_dim(int n) {
  double v = 40.0 * std::log(std::max(2, n));
  return static_cast<int>(std::ceil(v));
}

}  // namespace balcut
