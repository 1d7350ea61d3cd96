#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "checks.hpp"
#include "fixtures.hpp"
#include "linkage/reroute.hpp"

using namespace linkage;

namespace {

// K<->4 on 0..3 plus the given extra arcs on vertices 4.. .
Digraph k4_with(int n, std::vector<Arc> extra) {
  DigraphBuilder b(n);
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = 0; v < 4; ++v)
      if (u != v) b.add_arc(u, v);
  for (auto [u, v] : extra) b.add_arc(u, v);
  return b.build();
}

Subdivision k4_subdivision(const Digraph& d) {
  return std::get<Subdivision>(subdivide_on(d, {0, 1, 2, 3}, 0));
}

}  // namespace

TEST_CASE("a system that avoids F is kept") {
  Digraph d = k4_with(8, {{4, 5}, {6, 7}});
  Subdivision f = k4_subdivision(d);
  PathSystem q{{{4, 5}, {6, 7}}, true};
  auto out = free_subdivision(d, f, q, 4);
  auto* r = std::get_if<RerouteResult>(&out);
  REQUIRE(r);
  CHECK(r->q_hat.paths == q.paths);
  CHECK(r->s_prime == f.branch);
  CHECK(r->trace.rule == std::vector<int>{1, 1});
  CHECK(checks::reroute_sound(d, f, q, 4, *r) == "");
  CHECK(audit_reroute(d, f, q, 4, *r) == "");
}

TEST_CASE("a path crossing one subdivision arc") {
  Digraph d = k4_with(6, {{4, 0}, {1, 5}});
  Subdivision f = k4_subdivision(d);
  PathSystem q{{{4, 0, 1, 5}}, true};
  auto out = free_subdivision(d, f, q, 2);
  auto* r = std::get_if<RerouteResult>(&out);
  REQUIRE(r);
  CHECK(checks::reroute_sound(d, f, q, 2, *r) == "");
  CHECK(audit_reroute(d, f, q, 2, *r) == "");
  CHECK(r->q_hat.paths[0].front() == 4);
  CHECK(r->q_hat.paths[0].back() == 5);
  CHECK(r->s_prime == std::vector<Vertex>{2, 3});
}

TEST_CASE("a crossing that needs the re-cut rule") {
  // Path 0 enters F at 0 and leaves from 1; path 1 passes through 2 and 3.
  // Only the prefix of path 0 and the suffix of path 1 survive.
  Digraph d = k4_with(8, {{4, 0}, {1, 5}, {6, 2}, {3, 7}});
  Subdivision f = k4_subdivision(d);
  PathSystem q{{{4, 0, 1, 5}, {6, 2, 3, 7}}, true};
  auto out = free_subdivision(d, f, q, 0);
  auto* r = std::get_if<RerouteResult>(&out);
  REQUIRE(r);
  CHECK(checks::reroute_sound(d, f, q, 0, *r) == "");
  CHECK(audit_reroute(d, f, q, 0, *r) == "");
}

TEST_CASE("a suffix that no prefix tree reaches is joined through F") {
  auto [d, f, q] = fixtures::rule_three_case();
  REQUIRE(check_subdivision(d, f) == "");
  auto out = free_subdivision(d, f, q, 1);
  auto* r = std::get_if<RerouteResult>(&out);
  REQUIRE(r);
  CHECK(r->trace.rule == std::vector<int>{3});
  CHECK(r->q_hat.paths[0] == Path{5, 0, 2, 4, 6});
  CHECK(checks::reroute_sound(d, f, q, 1, *r) == "");
  CHECK(audit_reroute(d, f, q, 1, *r) == "");
}

TEST_CASE("trimming variant on the K4 fixture") {
  Digraph d = k4_with(6, {{1, 5}, {4, 0}});
  Subdivision f = k4_subdivision(d);
  PathSystem q{{{0, 2, 1, 5}}, true};
  auto out = free_subdivision(d, f, q, 2, RerouteVariant::Moreover);
  auto* r = std::get_if<RerouteResult>(&out);
  REQUIRE(r);
  CHECK(r->variant == RerouteVariant::Moreover);
  CHECK(r->q_hat.paths[0] == Path{1, 5});
  CHECK(r->origins == std::vector<Vertex>{1});
  CHECK(checks::reroute_sound(d, f, q, 2, *r) == "");
  CHECK(audit_reroute(d, f, q, 2, *r) == "");
}

TEST_CASE("input errors") {
  Digraph d = k4_with(6, {{4, 0}, {1, 5}, {4, 5}});
  Subdivision f = k4_subdivision(d);
  CHECK_THROWS_AS(free_subdivision(d, f, PathSystem{{}, true}, 0), GraphError);
  CHECK_THROWS_AS(free_subdivision(d, f, PathSystem{{{4, 0}}, true}, 0), GraphError);
  CHECK_THROWS_AS(free_subdivision(d, f, PathSystem{{{4, 5}}, true}, 0, RerouteVariant::Moreover),
                  GraphError);
  CHECK_THROWS_AS(free_subdivision(d, f, PathSystem{{{4, 5}}, false}, 0), GraphError);
  Subdivision broken = f;
  broken.paths.erase({0, 1});
  CHECK_THROWS_AS(free_subdivision(d, broken, PathSystem{{{4, 5}}, true}, 0), GraphError);
}

TEST_CASE("too few freed vertices is a structured failure") {
  Digraph d = k4_with(8, {{4, 0}, {1, 5}, {6, 2}, {3, 7}});
  Subdivision f = k4_subdivision(d);
  PathSystem q{{{4, 0, 1, 5}, {6, 2, 3, 7}}, true};
  auto out = free_subdivision(d, f, q, 4);
  CHECK(std::holds_alternative<RerouteFailure>(out));
}

TEST_CASE("random crossing systems re-validate in both variants") {
  std::map<int, int> rules;
  int standard = 0, trimmed = 0, crossing = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    std::mt19937_64 pick(seed);
    const int s = 3 + static_cast<int>(pick() % 2);
    const int ell = pick() % 2 ? 0 : 2;
    const int r = 1 + static_cast<int>(pick() % 4);
    const bool on_branch = pick() % 4 == 0;
    auto fx = fixtures::reroute_case(seed, s, ell, on_branch ? std::min(r, s) : r, on_branch);
    if (!fx) continue;
    const int freed = std::max(0, s - 2 * static_cast<int>(fx->q.paths.size()));
    VertexMask in_f = make_mask(fx->d.size(), fx->f.vertices());
    for (const Path& p : fx->q.paths)
      if (std::any_of(p.begin(), p.end(), [&](Vertex v) { return in_f[v]; })) ++crossing;
    auto variant = on_branch ? RerouteVariant::Moreover : RerouteVariant::Standard;
    auto out = free_subdivision(fx->d, fx->f, fx->q, freed, variant);
    auto* res = std::get_if<RerouteResult>(&out);
    INFO("seed " << seed);
    REQUIRE(res);
    CHECK(checks::reroute_sound(fx->d, fx->f, fx->q, freed, *res) == "");
    CHECK(audit_reroute(fx->d, fx->f, fx->q, freed, *res) == "");
    (on_branch ? trimmed : standard)++;
    for (int rule : res->trace.rule) ++rules[rule];
    auto again = free_subdivision(fx->d, fx->f, fx->q, freed, variant);
    CHECK(std::get<RerouteResult>(again).q_hat == res->q_hat);
  }
  CHECK(standard >= 50);
  CHECK(trimmed >= 20);
  CHECK(crossing >= 100);
  CHECK(rules[2] > 0);
  MESSAGE("rules used: 1=" << rules[1] << " 2=" << rules[2] << " 3=" << rules[3]);
}
