#include <doctest.h>

#include <random>

#include "checks.hpp"
#include "fixtures.hpp"
#include "linkage/connectivity.hpp"
#include "oracles.hpp"

using namespace linkage;

TEST_CASE("menger on the complete digraph uses direct arcs") {
  auto r = menger_paths(complete_digraph(5), {0, 1}, {3, 4}, 2);
  auto* ps = std::get_if<PathSystem>(&r);
  REQUIRE(ps);
  CHECK(ps->paths.size() == 2);
  for (const Path& p : ps->paths) CHECK(p.size() == 2);
  CHECK(check_path_system(complete_digraph(5), *ps).empty());
}

TEST_CASE("menger from the sink of TT5 returns an empty separator") {
  auto r = menger_paths(transitive_tournament(5), {4}, {0}, 1);
  auto* sep = std::get_if<Separator>(&r);
  REQUIRE(sep);
  CHECK(sep->vertices.empty());
}

TEST_CASE("menger on circulant 9 between 3-sets") {
  Digraph d = circulant_tournament(9);
  CHECK(checks::menger_agrees(d, {0, 1, 2}, {3, 4, 5}, 3, {}).empty());
  CHECK(checks::menger_agrees(d, {0, 3, 6}, {1, 4, 7}, 3, {}).empty());
  auto r = menger_paths(d, {0, 1, 2}, {3, 4, 5}, 3);
  CHECK(std::holds_alternative<PathSystem>(r));
}

TEST_CASE("overlapping menger sets are rejected") {
  Digraph d = complete_digraph(4);
  CHECK_THROWS_AS(menger_paths(d, {0, 1}, {1, 2}, 1), GraphError);
  CHECK_THROWS_AS(menger_paths(d, {0}, {2}, 1, {0}), GraphError);
  CHECK_THROWS_AS(menger_paths(d, {0}, {2}, 0), GraphError);
}

TEST_CASE("menger results agree with separator enumeration") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    int n = 4 + static_cast<int>(rng() % 6);
    Digraph d = random_digraph(n, 0.25 + 0.05 * (t % 8), 500 + t);
    std::vector<Vertex> order = fixtures::iota_vec(n);
    std::shuffle(order.begin(), order.end(), rng);
    int a = 1 + static_cast<int>(rng() % 2), b = 1 + static_cast<int>(rng() % 2);
    int f = static_cast<int>(rng() % 2);
    std::vector<Vertex> xs(order.begin(), order.begin() + a);
    std::vector<Vertex> ys(order.begin() + a, order.begin() + a + b);
    std::vector<Vertex> fb(order.begin() + a + b, order.begin() + a + b + f);
    int k = 1 + static_cast<int>(rng() % 3);
    INFO("trial " << t);
    CHECK(checks::menger_agrees(d, xs, ys, k, fb) == "");
  }
}

TEST_CASE("menger output is deterministic") {
  Digraph d = random_semicomplete(40, 8, 0.2);
  auto a = menger_paths(d, {0, 1, 2}, {10, 11, 12}, 3, {5});
  auto b = menger_paths(d, {0, 1, 2}, {10, 11, 12}, 3, {5});
  REQUIRE(std::holds_alternative<PathSystem>(a));
  CHECK(std::get<PathSystem>(a) == std::get<PathSystem>(b));
}

TEST_CASE("vertex connectivity examples") {
  std::vector<Arc> cycle{{0, 1}, {1, 2}, {2, 0}};
  CHECK(vertex_connectivity(Digraph(3, cycle)) == 1);
  for (int n = 2; n <= 8; ++n) CHECK(vertex_connectivity(transitive_tournament(n)) == 0);
  CHECK(vertex_connectivity(complete_digraph(6)) == 5);
  CHECK(vertex_connectivity(circulant_tournament(9)) >= 3);
}

TEST_CASE("circulant connectivity meets the regular tournament bound") {
  for (int n = 3; n <= 15; n += 2) {
    int kappa = vertex_connectivity(circulant_tournament(n));
    CHECK(kappa >= (n + 2) / 3);
    if (n <= 11) CHECK(kappa == oracle::connectivity(circulant_tournament(n)));
  }
}

TEST_CASE("vertex connectivity agrees with deletion-set enumeration") {
  for (int seed = 0; seed < 40; ++seed) {
    int n = 3 + seed % 7;
    Digraph d = seed % 2 ? random_semicomplete(n, seed, 0.3) : random_digraph(n, 0.6, seed);
    INFO("seed " << seed);
    CHECK(vertex_connectivity(d) == oracle::connectivity(d));
  }
}

TEST_CASE("connectivity is invariant under relabelling") {
  std::mt19937_64 rng(3);
  for (int seed = 0; seed < 10; ++seed) {
    Digraph d = random_semicomplete(20, seed, 0.3);
    std::vector<Vertex> perm = fixtures::iota_vec(20);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(vertex_connectivity(d) == vertex_connectivity(d.permuted(perm)));
  }
}

TEST_CASE("is_k_connected matches the exact value") {
  for (int seed = 0; seed < 10; ++seed) {
    Digraph d = random_semicomplete(25, seed, 0.4);
    int kappa = vertex_connectivity(d);
    CHECK(is_k_connected(d, kappa));
    CHECK_FALSE(is_k_connected(d, kappa + 1));
  }
  CHECK_FALSE(is_k_connected(complete_digraph(4), 4));
  CHECK(is_k_connected(complete_digraph(4), 3));
}

TEST_CASE("k disjoint paths exist between any k-sets of a 2k-connected digraph") {
  std::mt19937_64 rng(5);
  for (int seed = 0; seed < 20; ++seed) {
    Digraph d = random_semicomplete(30, 40 + seed, 0.5);
    int kappa = vertex_connectivity(d);
    if (kappa < 2) continue;
    int k = kappa / 2;
    std::vector<Vertex> order = fixtures::iota_vec(30);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Vertex> xs(order.begin(), order.begin() + k), ys(order.begin() + k, order.begin() + 2 * k);
    CHECK(std::holds_alternative<PathSystem>(menger_paths(d, xs, ys, k)));
  }
}

TEST_CASE("local connectivity counts internally disjoint paths") {
  Digraph d = circulant_tournament(9);
  // 0 -> 5 is not an arc in circulant 9.
  CHECK_FALSE(d.has_arc(0, 5));
  CHECK(local_connectivity(d, 0, 5, 10) == oracle::min_separator(d, {0}, {5}, {}, {0, 5}));
  CHECK(local_connectivity(d, 0, 5, 2) == 2);
  CHECK_THROWS_AS(local_connectivity(d, 0, 1, 3), GraphError);
}

TEST_CASE("path system validation") {
  Digraph d = complete_digraph(4);
  CHECK(check_path_system(d, PathSystem{{{0, 1}, {2, 3}}, true}).empty());
  CHECK_FALSE(check_path_system(d, PathSystem{{{0, 1}, {1, 2}}, true}).empty());
  CHECK(check_path_system(d, PathSystem{{{0, 1}, {1, 2}}, false}).empty());
  CHECK_FALSE(check_path_system(transitive_tournament(3), PathSystem{{{2, 0}}, true}).empty());
}
