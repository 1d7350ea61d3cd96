#pragma once

// Result audits shared by the unit tests and the acceptance runner. Each
// returns an empty string when the result holds up against the brute-force
// reference.

#include <algorithm>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "linkage/connectivity.hpp"
#include "linkage/reroute.hpp"
#include "linkage/subdivision.hpp"
#include "oracles.hpp"

namespace checks {

using namespace linkage;

inline std::string menger_agrees(const Digraph& d, const std::vector<Vertex>& xs,
                                 const std::vector<Vertex>& ys, int k,
                                 const std::vector<Vertex>& forbidden) {
  const int n = d.size();
  const int best = oracle::min_separator(d, xs, ys, forbidden);
  MengerResult r = menger_paths(d, xs, ys, k, forbidden);
  if (auto* ps = std::get_if<PathSystem>(&r)) {
    if (best < k) return "paths returned but a separator of size " + std::to_string(best) + " exists";
    if (static_cast<int>(ps->paths.size()) != k) return "wrong number of paths";
    if (auto e = check_path_system(d, *ps); !e.empty()) return e;
    std::set<Vertex> xset(xs.begin(), xs.end()), yset(ys.begin(), ys.end()),
        fset(forbidden.begin(), forbidden.end());
    for (const Path& p : ps->paths) {
      if (!xset.count(p.front()) || !yset.count(p.back())) return "path with wrong ends";
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (fset.count(p[i])) return "path uses a forbidden vertex";
        if (i > 0 && xset.count(p[i])) return "path revisits X";
        if (i + 1 < p.size() && yset.count(p[i])) return "path passes through Y";
      }
    }
    return {};
  }
  const auto& sep = std::get<Separator>(r).vertices;
  if (static_cast<int>(sep.size()) >= k) return "separator not smaller than k";
  if (best >= k) return "separator returned but k paths exist";
  std::vector<char> gone(n, 0);
  for (Vertex f : forbidden) gone[f] = 1;
  for (Vertex s : sep) gone[s] = 1;
  if (oracle::reaches(d, xs, ys, gone)) return "separator leaves an X->Y path";
  return {};
}

inline std::string subdivision_sound(const Digraph& d, const Subdivision& f, bool complete) {
  std::set<Vertex> branch(f.branch.begin(), f.branch.end());
  std::set<Vertex> interiors;
  for (const auto& [pair, p] : f.paths) {
    if (p.front() != pair.first || p.back() != pair.second) return "path with wrong ends";
    if (static_cast<int>(p.size()) - 1 > f.max_len) return "path too long";
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (!d.has_arc(p[i], p[i + 1])) return "missing arc";
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (branch.count(p[i])) return "interior on a branch vertex";
      if (!interiors.insert(p[i]).second) return "interiors intersect";
    }
  }
  if (complete && f.paths.size() != f.branch.size() * (f.branch.size() - 1)) return "pairs missing";
  return {};
}

inline std::string dominates(const Digraph& d, const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  for (Vertex u : a)
    for (Vertex v : b) {
      if (!d.has_arc(u, v)) return "missing " + std::to_string(u) + "->" + std::to_string(v);
      if (d.has_arc(v, u)) return "backward " + std::to_string(v) + "->" + std::to_string(u);
    }
  return {};
}

inline std::string split_sound(const Digraph& d, const std::vector<std::vector<Vertex>>& blocks,
                               const SplitParams& params, const SplitResult& r) {
  for (const SplitLogEntry& e : r.log) {
    if (e.loss > e.bound()) return "loss above bound: " + format_log_entry(e);
    if (e.loss < 0) return "negative loss";
  }
  if (auto* fail = std::get_if<SplitFailure>(&r.outcome)) return "failure " + fail->stage + ": " + fail->message;
  if (auto* found = std::get_if<SubdivisionFound>(&r.outcome)) {
    if (auto e = subdivision_sound(d, found->subdivision, true); !e.empty()) return e;
    const auto& blk = blocks[found->block];
    for (Vertex b : found->subdivision.branch)
      if (std::find(blk.begin(), blk.end(), b) == blk.end()) return "branch vertex outside its block";
    return {};
  }
  const auto& tt = std::get<TTBlowup>(r.outcome);
  if (tt.parts.size() != blocks.size()) return "wrong number of parts";
  std::set<int> used_blocks(tt.block_of.begin(), tt.block_of.end());
  if (used_blocks.size() != blocks.size()) return "a block is matched twice";
  for (std::size_t i = 0; i < tt.parts.size(); ++i) {
    if (static_cast<int>(tt.parts[i].size()) < params.part_min) return "part below the minimum";
    const auto& blk = blocks[tt.block_of[i]];
    for (Vertex v : tt.parts[i])
      if (std::find(blk.begin(), blk.end(), v) == blk.end()) return "part leaves its block";
    for (std::size_t j = i + 1; j < tt.parts.size(); ++j)
      if (auto e = dominates(d, tt.parts[i], tt.parts[j]); !e.empty()) return "parts: " + e;
  }
  for (std::size_t i = 0; i < r.sequence.size(); ++i)
    for (std::size_t j = i + 1; j < r.sequence.size(); ++j)
      if (auto e = dominates(d, r.sequence[i], r.sequence[j]); !e.empty()) return "sequence: " + e;
  return {};
}

inline std::string reroute_sound(const Digraph& d, const Subdivision& f, const PathSystem& q, int freed_min,
                                 const RerouteResult& r) {
  const int n = d.size();
  const auto& out = r.q_hat.paths;
  if (out.size() != q.paths.size()) return "wrong number of paths";
  std::vector<char> on_q(n, 0), branch(n, 0), origin(n, 0);
  for (Vertex b : f.branch) branch[b] = 1;
  std::set<Vertex> old_origins;
  for (const Path& p : q.paths) old_origins.insert(p.front());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const Path& p = out[j];
    if (p.empty() || p.back() != q.paths[j].back()) return "path " + std::to_string(j) + " misses its target";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (on_q[p[i]]) return "paths intersect at " + std::to_string(p[i]);
      on_q[p[i]] = 1;
      if (i + 1 < p.size() && !d.has_arc(p[i], p[i + 1])) return "missing arc on an output path";
    }
    origin[p.front()] = 1;
    if (r.variant == RerouteVariant::Standard && !old_origins.count(p.front())) return "new origin in standard mode";
    if (r.variant == RerouteVariant::Moreover && !branch[p.front()]) return "origin off the branch set";
  }
  if (static_cast<int>(r.s_prime.size()) < freed_min) return "too few freed branch vertices";
  for (Vertex u : r.s_prime) {
    if (!branch[u]) return "freed vertex is not a branch vertex";
    for (Vertex v : r.s_prime) {
      if (u == v) continue;
      for (Vertex w : f.path(u, v))
        if (on_q[w]) return "freed subdivision path meets the system";
    }
  }
  if (r.variant == RerouteVariant::Moreover)
    for (Vertex u : f.branch) {
      if (origin[u]) continue;
      for (Vertex v : f.branch) {
        if (u == v) continue;
        for (Vertex w : f.path(u, v))
          if (on_q[w] && !(w == v && origin[v])) return "path out of a non-origin meets the system";
      }
    }
  return {};
}

}  // namespace checks
