#pragma once

// Brute-force reference answers for small digraphs. Nothing here shares
// code with the library beyond the Digraph container.

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "linkage/digraph.hpp"

namespace oracle {

using linkage::Digraph;
using linkage::Path;
using linkage::Vertex;

inline bool reaches(const Digraph& d, const std::vector<Vertex>& from, const std::vector<Vertex>& to,
                    const std::vector<char>& gone) {
  const int n = d.size();
  std::vector<char> seen(n, 0), target(n, 0);
  for (Vertex t : to) target[t] = !gone[t];
  std::vector<Vertex> stack;
  for (Vertex s : from)
    if (!gone[s] && !seen[s]) seen[s] = 1, stack.push_back(s);
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    if (target[u]) return true;
    for (Vertex w = 0; w < n; ++w)
      if (d.has_arc(u, w) && !gone[w] && !seen[w]) seen[w] = 1, stack.push_back(w);
  }
  return false;
}

/// Smallest number of vertices meeting every X->Y path that avoids
/// `forbidden`, by subset enumeration. Vertices in `keep` may not be chosen.
inline int min_separator(const Digraph& d, const std::vector<Vertex>& xs, const std::vector<Vertex>& ys,
                         const std::vector<Vertex>& forbidden = {}, const std::vector<Vertex>& keep = {}) {
  const int n = d.size();
  std::vector<char> base(n, 0), kept(n, 0);
  for (Vertex f : forbidden) base[f] = 1;
  for (Vertex v : keep) kept[v] = 1;
  std::vector<Vertex> free;
  for (Vertex v = 0; v < n; ++v)
    if (!base[v] && !kept[v]) free.push_back(v);
  const int m = static_cast<int>(free.size());
  for (int size = 0; size <= m; ++size) {
    std::vector<int> pick(size);
    std::function<bool(int, int)> rec = [&](int at, int from) {
      if (at == size) {
        std::vector<char> gone = base;
        for (int i : pick) gone[free[i]] = 1;
        return !reaches(d, xs, ys, gone);
      }
      for (int i = from; i < m; ++i) {
        pick[at] = i;
        if (rec(at + 1, i + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return size;
  }
  return m;
}

inline bool strongly_connected(const Digraph& d, const std::vector<char>& gone) {
  const int n = d.size();
  Vertex first = -1;
  for (Vertex v = 0; v < n && first < 0; ++v)
    if (!gone[v]) first = v;
  if (first < 0) return true;
  for (Vertex v = 0; v < n; ++v) {
    if (gone[v] || v == first) continue;
    if (!reaches(d, {first}, {v}, gone) || !reaches(d, {v}, {first}, gone)) return false;
  }
  return true;
}

/// Vertex connectivity by enumerating deletion sets.
inline int connectivity(const Digraph& d) {
  const int n = d.size();
  for (int size = 0; size <= n - 2; ++size) {
    std::vector<int> pick(size);
    std::function<bool(int, int)> rec = [&](int at, int from) {
      if (at == size) {
        std::vector<char> gone(n, 0);
        for (int i : pick) gone[i] = 1;
        return !strongly_connected(d, gone);
      }
      for (int i = from; i < n; ++i) {
        pick[at] = i;
        if (rec(at + 1, i + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return size;
  }
  return std::max(0, n - 1);
}

/// Whether any Hamiltonian path exists (plain DFS over orderings).
inline bool has_hamiltonian_path(const Digraph& d) {
  const int n = d.size();
  if (n == 0) return true;
  std::vector<char> used(n, 0);
  std::function<bool(Vertex, int)> go = [&](Vertex u, int depth) {
    if (depth == n) return true;
    for (Vertex w = 0; w < n; ++w)
      if (!used[w] && d.has_arc(u, w)) {
        used[w] = 1;
        if (go(w, depth + 1)) return true;
        used[w] = 0;
      }
    return false;
  };
  for (Vertex s = 0; s < n; ++s) {
    std::fill(used.begin(), used.end(), 0);
    used[s] = 1;
    if (go(s, 1)) return true;
  }
  return false;
}

/// All simple a->b paths whose vertices avoid `blocked` (a and b excepted).
inline void for_each_path(const Digraph& d, Vertex a, Vertex b, const std::vector<char>& blocked,
                          int max_len, const std::function<bool(const Path&)>& visit) {
  const int n = d.size();
  std::vector<char> on(n, 0);
  Path p{a};
  on[a] = 1;
  std::function<bool(Vertex)> go = [&](Vertex u) {
    if (u == b) return visit(p);
    if (static_cast<int>(p.size()) - 1 >= max_len) return false;
    for (Vertex w = 0; w < n; ++w) {
      if (!d.has_arc(u, w) || on[w]) continue;
      if (w != b && blocked[w]) continue;
      on[w] = 1;
      p.push_back(w);
      bool stop = go(w);
      p.pop_back();
      on[w] = 0;
      if (stop) return true;
    }
    return false;
  };
  go(a);
}

/// Whether an a->b path of length <= max_len with interior outside `blocked` exists.
inline bool short_path_exists(const Digraph& d, Vertex a, Vertex b, int max_len,
                              const std::vector<char>& blocked) {
  bool found = false;
  for_each_path(d, a, b, blocked, max_len, [&](const Path&) { return found = true; });
  return found;
}

/// Whether disjoint x_i -> y_i paths exist, by enumerating path families.
inline bool linkable(const Digraph& d, const std::vector<Vertex>& xs, const std::vector<Vertex>& ys) {
  const int n = d.size();
  const int k = static_cast<int>(xs.size());
  std::vector<char> used(n, 0);
  for (Vertex v : xs) used[v] = 1;
  for (Vertex v : ys) used[v] = 1;
  std::function<bool(int)> go = [&](int i) {
    if (i == k) return true;
    bool ok = false;
    for_each_path(d, xs[i], ys[i], used, n, [&](const Path& p) {
      for (std::size_t j = 1; j + 1 < p.size(); ++j) used[p[j]] = 1;
      ok = go(i + 1);
      for (std::size_t j = 1; j + 1 < p.size(); ++j) used[p[j]] = 0;
      return ok;
    });
    return ok;
  };
  return go(0);
}

/// Size of a maximum bipartite matching by exhaustive recursion.
inline int max_matching(int left, int right, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(left);
  for (auto [a, b] : edges) adj[a].push_back(b);
  std::vector<char> taken(right, 0);
  std::function<int(int)> go = [&](int i) {
    if (i == left) return 0;
    int best = go(i + 1);
    for (int r : adj[i])
      if (!taken[r]) {
        taken[r] = 1;
        best = std::max(best, 1 + go(i + 1));
        taken[r] = 0;
      }
    return best;
  };
  return go(0);
}

}  // namespace oracle
