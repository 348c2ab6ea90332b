#include "balcut/lapterm.hpp"

#include <algorithm>
#include <cstring>

#include "balcut/common.hpp"

namespace balcut {

LapTerm LapTerm::edge(int i, int j) {
  BALCUT_REQUIRE(i != j, "edge term needs distinct endpoints");
  LapTerm t;
  t.kind = Kind::EdgeLaplacian;
  t.i = i;
  t.j = j;
  return t;
}

LapTerm LapTerm::complete(std::vector<int> set) {
  LapTerm t;
  t.kind = Kind::CompleteLaplacian;
  t.set = std::move(set);
  return t;
}

LapTerm LapTerm::path_triple(int i, int j, int k) {
  BALCUT_REQUIRE(i != j && j != k && i != k, "path triple needs distinct vertices");
  LapTerm t;
  t.kind = Kind::PathTriple;
  t.i = i;
  t.j = j;
  t.k = k;
  return t;
}

LapTerm LapTerm::diagonal(std::vector<double> diag) {
  LapTerm t;
  t.kind = Kind::Diagonal;
  t.diag = std::move(diag);
  return t;
}

LapTerm LapTerm::identity(double scale) {
  LapTerm t;
  t.kind = Kind::Identity;
  t.scale = scale;
  return t;
}

std::size_t LapTerm::entry_support(int n) const {
  switch (kind) {
    case Kind::EdgeLaplacian:
      return 4;
    case Kind::CompleteLaplacian:
      return set.size() * set.size();
    case Kind::PathTriple:
      return 9;
    case Kind::Diagonal:
      return diag.size();
    case Kind::Identity:
      return static_cast<std::size_t>(n);
  }
  return 0;
}

namespace {

inline void add_pair_lap(double w, int i, int j, const double* x, double* y) {
  double d = x[i] - x[j];
  y[i] += w * d;
  y[j] -= w * d;
}

inline void add_pair_lap_block(double w, int i, int j, const double* x, double* y, int d) {
  const double* xi = x + static_cast<std::size_t>(i) * d;
  const double* xj = x + static_cast<std::size_t>(j) * d;
  double* yi = y + static_cast<std::size_t>(i) * d;
  double* yj = y + static_cast<std::size_t>(j) * d;
  for (int r = 0; r < d; ++r) {
    double diff = xi[r] - xj[r];
    yi[r] += w * diff;
    yj[r] -= w * diff;
  }
}

}  // namespace

void lapterm_apply_add(const LapTerm& t, double w, const double* x, double* y, int n) {
  switch (t.kind) {
    case LapTerm::Kind::EdgeLaplacian:
      BALCUT_ASSERT(t.i < n && t.j < n, "edge term out of range");
      add_pair_lap(w, t.i, t.j, x, y);
      return;
    case LapTerm::Kind::CompleteLaplacian: {
      // (K_S x)_i = |S| x_i - sum_{j in S} x_j for i in S.
      double sum = 0;
      for (int v : t.set) sum += x[v];
      double sz = static_cast<double>(t.set.size());
      for (int v : t.set) y[v] += w * (sz * x[v] - sum);
      return;
    }
    case LapTerm::Kind::PathTriple:
      add_pair_lap(w, t.i, t.j, x, y);
      add_pair_lap(w, t.j, t.k, x, y);
      add_pair_lap(-w, t.i, t.k, x, y);
      return;
    case LapTerm::Kind::Diagonal:
      BALCUT_ASSERT(t.diag.size() == static_cast<std::size_t>(n), "diagonal size mismatch");
      for (int v = 0; v < n; ++v) y[v] += w * t.diag[v] * x[v];
      return;
    case LapTerm::Kind::Identity:
      for (int v = 0; v < n; ++v) y[v] += w * t.scale * x[v];
      return;
  }
}

void lapterm_apply_add_block(const LapTerm& t, double w, const double* x, double* y, int n,
                             int d) {
  switch (t.kind) {
    case LapTerm::Kind::EdgeLaplacian:
      BALCUT_ASSERT(t.i < n && t.j < n, "edge term out of range");
      add_pair_lap_block(w, t.i, t.j, x, y, d);
      return;
    case LapTerm::Kind::CompleteLaplacian: {
      std::vector<double> sum(static_cast<std::size_t>(d), 0.0);
      for (int v : t.set) {
        const double* xv = x + static_cast<std::size_t>(v) * d;
        for (int r = 0; r < d; ++r) sum[static_cast<std::size_t>(r)] += xv[r];
      }
      double sz = static_cast<double>(t.set.size());
      for (int v : t.set) {
        const double* xv = x + static_cast<std::size_t>(v) * d;
        double* yv = y + static_cast<std::size_t>(v) * d;
        for (int r = 0; r < d; ++r) yv[r] += w * (sz * xv[r] - sum[static_cast<std::size_t>(r)]);
      }
      return;
    }
    case LapTerm::Kind::PathTriple:
      add_pair_lap_block(w, t.i, t.j, x, y, d);
      add_pair_lap_block(w, t.j, t.k, x, y, d);
      add_pair_lap_block(-w, t.i, t.k, x, y, d);
      return;
    case LapTerm::Kind::Diagonal: {
      BALCUT_ASSERT(t.diag.size() == static_cast<std::size_t>(n), "diagonal size mismatch");
      for (int v = 0; v < n; ++v) {
        const double* xv = x + static_cast<std::size_t>(v) * d;
        double* yv = y + static_cast<std::size_t>(v) * d;
        double wd = w * t.diag[static_cast<std::size_t>(v)];
        for (int r = 0; r < d; ++r) yv[r] += wd * xv[r];
      }
      return;
    }
    case LapTerm::Kind::Identity: {
      double ws = w * t.scale;
      std::size_t total = static_cast<std::size_t>(n) * d;
      for (std::size_t idx = 0; idx < total; ++idx) y[idx] += ws * x[idx];
      return;
    }
  }
}

void lapterm_matvec(const LapTerm& t, const double* x, double* y, int n) {
  std::memset(y, 0, sizeof(double) * static_cast<std::size_t>(n));
  lapterm_apply_add(t, 1.0, x, y, n);
}

double quadform(const LapTerm& t, const Embedding& w) {
  // <t, W^T W>, evaluated per kind in O(support * d) rather than via n-length
  // matvecs; feedback matrices carry ~m edge terms, so this path is hot.
  switch (t.kind) {
    case LapTerm::Kind::EdgeLaplacian:
      return w.sqdist(t.i, t.j);
    case LapTerm::Kind::PathTriple:
      return w.sqdist(t.i, t.j) + w.sqdist(t.j, t.k) - w.sqdist(t.i, t.k);
    case LapTerm::Kind::CompleteLaplacian: {
      // <K_S, W^T W> = |S| * sum_{v in S} |w_v|^2 - |sum_{v in S} w_v|^2.
      std::vector<double> total(static_cast<std::size_t>(w.d), 0.0);
      double norms = 0;
      for (int v : t.set) {
        const double* col = w.col(v);
        for (int r = 0; r < w.d; ++r) total[static_cast<std::size_t>(r)] += col[r];
        norms += w.norm2(v);
      }
      double cross = 0;
      for (int r = 0; r < w.d; ++r) cross += total[static_cast<std::size_t>(r)] * total[static_cast<std::size_t>(r)];
      return static_cast<double>(t.set.size()) * norms - cross;
    }
    case LapTerm::Kind::Diagonal: {
      BALCUT_ASSERT(t.diag.size() == static_cast<std::size_t>(w.n), "diagonal size mismatch");
      double acc = 0;
      for (int v = 0; v < w.n; ++v) acc += t.diag[static_cast<std::size_t>(v)] * w.norm2(v);
      return acc;
    }
    case LapTerm::Kind::Identity: {
      double acc = 0;
      for (int v = 0; v < w.n; ++v) acc += w.norm2(v);
      return t.scale * acc;
    }
  }
  BALCUT_ASSERT(false, "unreachable lapterm kind");
  return 0;
}

}  // namespace balcut
