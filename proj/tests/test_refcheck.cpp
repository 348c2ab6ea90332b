#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "balcut/common.hpp"
#include "balcut/graph.hpp"
#include "balcut/lapterm.hpp"
#include "balcut/refcheck.hpp"

using balcut::DenseSym;
using balcut::Graph;
using balcut::LapTerm;

TEST_CASE("densify builds the expected edge Laplacian") {
  std::vector<std::pair<LapTerm, double>> terms = {{LapTerm::edge(0, 1), 2.0}};
  DenseSym m = balcut::densify(terms, 3);
  CHECK(m.at(0, 0) == 2.0);
  CHECK(m.at(1, 1) == 2.0);
  CHECK(m.at(0, 1) == -2.0);
  CHECK(m.at(1, 0) == -2.0);
  CHECK(m.at(2, 2) == 0.0);
  CHECK(m.at(0, 2) == 0.0);
}

TEST_CASE("dense_expm on a diagonal matrix exponentiates entrywise") {
  DenseSym m = DenseSym::zero(2);
  m.at(0, 0) = std::log(2.0);
  m.at(1, 1) = 0.0;
  DenseSym e = balcut::dense_expm(m);
  CHECK(e.at(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.at(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.at(0, 1) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("dense_expm of a rotationally mixed matrix") {
  // M = R diag(ln 2, ln 3) R^T with R a 45-degree rotation.
  double c = std::sqrt(0.5);
  double l1 = std::log(2.0), l2 = std::log(3.0);
  DenseSym m = DenseSym::zero(2);
  m.at(0, 0) = c * c * l1 + c * c * l2;
  m.at(1, 1) = c * c * l1 + c * c * l2;
  m.at(0, 1) = m.at(1, 0) = c * c * (l1 - l2);
  DenseSym e = balcut::dense_expm(m);
  CHECK(e.at(0, 0) == doctest::Approx(2.5).epsilon(1e-10));   // (2 + 3) / 2
  CHECK(e.at(0, 1) == doctest::Approx(-0.5).epsilon(1e-10));  // (2 - 3) / 2
}

TEST_CASE("eigenvalue extremes and operator norm") {
  DenseSym m = DenseSym::zero(2);
  m.at(0, 0) = 3;
  m.at(1, 1) = -5;
  CHECK(balcut::dense_lambda_max(m) == doctest::Approx(3.0));
  CHECK(balcut::dense_lambda_min(m) == doctest::Approx(-5.0));
  CHECK(balcut::dense_opnorm(m) == doctest::Approx(5.0));
  CHECK(balcut::dense_trace(m) == doctest::Approx(-2.0));
}

TEST_CASE("dense algebra helpers") {
  DenseSym a = DenseSym::zero(2), b = DenseSym::zero(2);
  a.at(0, 0) = 1;
  a.at(0, 1) = a.at(1, 0) = 2;
  b.at(1, 1) = 3;
  DenseSym s = balcut::dense_add(a, balcut::dense_scale(b, 2.0));
  CHECK(s.at(0, 0) == 1.0);
  CHECK(s.at(1, 1) == 6.0);
  // <a, b> = sum_ij a_ij b_ij.
  CHECK(balcut::dense_inner(a, b) == doctest::Approx(0.0).scale(1));
  CHECK(balcut::dense_inner(a, a) == doctest::Approx(1 + 4 + 4));
}

TEST_CASE("psd check accepts Laplacians and rejects negative terms") {
  std::vector<std::pair<LapTerm, double>> lap = {{LapTerm::edge(0, 1), 1.0},
                                                 {LapTerm::edge(1, 2), 1.0}};
  CHECK(balcut::dense_psd_check(lap, 3));
  std::vector<std::pair<LapTerm, double>> neg = {{LapTerm::identity(-1.0), 1.0}};
  CHECK_FALSE(balcut::dense_psd_check(neg, 3));
}

TEST_CASE("power iteration matches dense operator norm") {
  // Symmetric operator with dominant negative eigenvalue.
  DenseSym m = DenseSym::zero(3);
  m.at(0, 0) = 1;
  m.at(1, 1) = -4;
  m.at(2, 2) = 2;
  m.at(0, 2) = m.at(2, 0) = 0.5;
  auto matvec = [&](const double* x, double* y) {
    for (int i = 0; i < 3; ++i) {
      y[i] = 0;
      for (int j = 0; j < 3; ++j) y[i] += m.at(i, j) * x[j];
    }
  };
  double est = balcut::power_iteration_norm(matvec, 3, 1e-9);
  CHECK(est == doctest::Approx(balcut::dense_opnorm(m)).epsilon(1e-6));
}

TEST_CASE("exact balanced mincut on K22 and K4") {
  Graph k22 = Graph::from_edges(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK(balcut::exact_min_balanced_cut(k22, 0.5) == 2);
  Graph k4 = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(balcut::exact_min_balanced_cut(k4, 0.5) == 4);
  // Balance parameter outside (0, 1/2] is rejected.
  CHECK_THROWS_AS(balcut::exact_min_balanced_cut(k4, 0.75), balcut::InputError);
  // Unsatisfiable balance: n = 3, a = 1/2 needs both sides >= 2.
  Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(balcut::exact_min_balanced_cut(p3, 0.5) == -1);
}

TEST_CASE("exact terminal mincut on the capped path") {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(balcut::exact_min_stcut_terminal(g, {0}, {2}, 0.5) == 0.5);
  CHECK(balcut::exact_min_stcut_terminal(g, {0}, {2}, 3.0) == 1.0);
}

TEST_CASE("tree enumeration minimum costs on small graphs") {
  // Path 0-1-2: best tree splits off an endpoint; cost 3*1 + 2*1 = 5.
  Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(balcut::enumerate_trees_min_cost(p3) == 5);
  // Triangle: every split cuts 2 edges at the root; cost 3*2 + 2*1 = 8.
  Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(balcut::enumerate_trees_min_cost(tri) == 8);
  // Single edge: cost 2*1 = 2.
  Graph e2 = Graph::from_edges(2, {{0, 1}});
  CHECK(balcut::enumerate_trees_min_cost(e2) == 2);
  // Two disconnected edges on 4 vertices: root split severs nothing,
  // children each pay 2. Total 4.
  Graph m2 = Graph::from_edges(4, {{0, 1}, {2, 3}});
  CHECK(balcut::enumerate_trees_min_cost(m2) == 4);
}
