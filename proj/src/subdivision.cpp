#include "linkage/subdivision.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace linkage {

std::vector<Vertex> Subdivision::vertices() const {
  std::set<Vertex> all(branch.begin(), branch.end());
  for (const auto& [pair, p] : paths) all.insert(p.begin(), p.end());
  return {all.begin(), all.end()};
}

std::string check_subdivision(const Digraph& d, const Subdivision& f, bool require_complete) {
  VertexMask is_branch = make_mask(d.size(), f.branch);
  if (static_cast<std::size_t>(std::count(is_branch.begin(), is_branch.end(), 1)) != f.branch.size())
    return "branch set has duplicates";
  std::vector<char> used(d.size(), 0);
  for (const auto& [pair, p] : f.paths) {
    auto [a, b] = pair;
    std::string tag = "path " + std::to_string(a) + "->" + std::to_string(b);
    if (a == b || !is_branch[a] || !is_branch[b]) return tag + " is not between branch vertices";
    if (!is_path(d, p)) return tag + " is not a directed path";
    if (p.front() != a || p.back() != b) return tag + " has wrong ends";
    if (static_cast<int>(p.size()) - 1 > f.max_len) return tag + " is too long";
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (is_branch[p[i]]) return tag + " passes through a branch vertex";
      if (used[p[i]]) return tag + " shares interior vertex " + std::to_string(p[i]);
      used[p[i]] = 1;
    }
  }
  if (require_complete && !f.complete()) return "subdivision is incomplete";
  return {};
}

namespace {

struct HostDegrees {
  std::vector<int> out, in;  // indexed like host
};

HostDegrees host_degrees(const Digraph& d, const std::vector<Vertex>& host) {
  VertexMask in_host = make_mask(d.size(), host);
  HostDegrees hd;
  for (Vertex w : host) {
    int o = 0, i = 0;
    for (Vertex x : d.out_neighbors(w)) o += in_host[x];
    for (Vertex x : d.in_neighbors(w)) i += in_host[x];
    hd.out.push_back(o);
    hd.in.push_back(i);
  }
  return hd;
}

std::vector<Vertex> all_vertices(const Digraph& d) {
  std::vector<Vertex> v(d.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Shortest a->b path of length <= max_len whose interior avoids `blocked`.
std::optional<Path> short_path(const Digraph& d, Vertex a, Vertex b, int max_len,
                               const VertexMask& blocked) {
  if (max_len < 1) return std::nullopt;
  std::vector<int> dist(d.size(), -1);
  std::vector<Vertex> parent(d.size(), -1), queue{a};
  dist[a] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    for (Vertex w : d.out_neighbors(u)) {
      if (w == b) {
        Path p{b};
        for (Vertex x = u; x != -1; x = parent[x]) p.push_back(x);
        std::reverse(p.begin(), p.end());
        return p;
      }
      if (dist[w] != -1 || blocked[w] || dist[u] + 2 > max_len) continue;
      dist[w] = dist[u] + 1;
      parent[w] = u;
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Vertex>> degree_window_subset(const Digraph& d, int size,
                                                        const WindowParams& wp,
                                                        const std::vector<Vertex>& host_in) {
  const std::vector<Vertex> host = host_in.empty() ? all_vertices(d) : host_in;
  if (size <= 0 || size > static_cast<int>(host.size())) return std::nullopt;
  const int window = wp.window < 0 ? 10 * size : wp.window;
  const double floor = wp.ratio * static_cast<double>(host.size());
  HostDegrees hd = host_degrees(d, host);
  std::vector<int> order;
  for (std::size_t i = 0; i < host.size(); ++i)
    if (hd.out[i] >= floor && hd.in[i] >= floor) order.push_back(static_cast<int>(i));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair(hd.in[a], host[a]) < std::pair(hd.in[b], host[b]);
  });
  for (std::size_t i = 0; i + size <= order.size(); ++i) {
    if (hd.in[order[i + size - 1]] - hd.in[order[i]] > window) continue;
    std::vector<Vertex> pick;
    for (int j = 0; j < size; ++j) pick.push_back(host[order[i + j]]);
    std::sort(pick.begin(), pick.end());
    return pick;
  }
  return std::nullopt;
}

std::vector<Vertex> lowest_spread_subset(const Digraph& d, int size, const std::vector<Vertex>& host) {
  if (size > static_cast<int>(host.size())) throw GraphError("host smaller than requested subset");
  HostDegrees hd = host_degrees(d, host);
  std::vector<int> order(host.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair(hd.in[a], host[a]) < std::pair(hd.in[b], host[b]);
  });
  std::size_t best = 0;
  int best_spread = -1;
  for (std::size_t i = 0; i + size <= order.size(); ++i) {
    int spread = hd.in[order[i + size - 1]] - hd.in[order[i]];
    if (best_spread < 0 || spread < best_spread) {
      best_spread = spread;
      best = i;
    }
  }
  std::vector<Vertex> pick;
  for (int j = 0; j < size; ++j) pick.push_back(host[order[best + j]]);
  std::sort(pick.begin(), pick.end());
  return pick;
}

Subdivision grow_partial_subdivision(const Digraph& d, std::vector<Vertex> branch, int ell,
                                     const VertexMask& allowed) {
  if (ell < 0) throw GraphError("ell must be non-negative");
  std::sort(branch.begin(), branch.end());
  Subdivision f;
  f.branch = branch;
  f.max_len = ell + 1;
  VertexMask blocked(d.size(), 0);
  if (!allowed.empty())
    for (Vertex v = 0; v < d.size(); ++v) blocked[v] = !allowed[v];
  for (Vertex b : branch) blocked[b] = 1;
  for (Vertex a : branch) {
    for (Vertex b : branch) {
      if (a == b) continue;
      auto p = short_path(d, a, b, ell + 1, blocked);
      if (!p) continue;
      for (std::size_t i = 1; i + 1 < p->size(); ++i) blocked[(*p)[i]] = 1;
      f.paths.emplace(std::pair(a, b), std::move(*p));
    }
  }
  return f;
}

SubdivisionResult subdivide_on(const Digraph& d, std::vector<Vertex> branch, int ell,
                               const VertexMask& allowed) {
  Subdivision f = grow_partial_subdivision(d, std::move(branch), ell, allowed);
  if (f.complete()) return f;
  for (Vertex a : f.branch)
    for (Vertex b : f.branch)
      if (a != b && !f.paths.count({a, b})) return Blocked{a, b, std::move(f)};
  return f;
}

SubdivisionResult find_subdivision(const Digraph& d, const std::vector<Vertex>& host, int s,
                                   int ell, const VertexMask& allowed, const WindowParams& wp) {
  if (s < 1 || static_cast<int>(host.size()) < s) throw GraphError("host smaller than branch size");
  auto branch = degree_window_subset(d, s, wp, host);
  if (!branch) branch = lowest_spread_subset(d, s, host);
  return subdivide_on(d, *branch, ell, allowed);
}

std::variant<std::vector<int>, HallViolation> hall_matching(
    int left, int right, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(left);
  for (auto [a, b] : edges) {
    if (a < 0 || a >= left || b < 0 || b >= right) throw GraphError("bipartite edge out of range");
    adj[a].push_back(b);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  std::vector<int> match_left(left, -1), match_right(right, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int a) {
    for (int b : adj[a]) {
      if (seen[b]) continue;
      seen[b] = 1;
      if (match_right[b] < 0 || augment(match_right[b])) {
        match_left[a] = b;
        match_right[b] = a;
        return true;
      }
    }
    return false;
  };
  for (int a = 0; a < left; ++a) {
    seen.assign(right, 0);
    if (augment(a)) continue;
    // Left vertices reachable from a by alternating paths span too few rights.
    std::vector<char> in_s(left, 0), in_n(right, 0);
    std::vector<int> stack{a};
    in_s[a] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int b : adj[x]) {
        if (in_n[b]) continue;
        in_n[b] = 1;
        int partner = match_right[b];
        if (partner >= 0 && !in_s[partner]) {
          in_s[partner] = 1;
          stack.push_back(partner);
        }
      }
    }
    HallViolation hv;
    for (int i = 0; i < left; ++i)
      if (in_s[i]) hv.left.push_back(i);
    for (int j = 0; j < right; ++j)
      if (in_n[j]) hv.neighbours.push_back(j);
    return hv;
  }
  return match_left;
}

std::string check_tt_blowup(const Digraph& d, const TTBlowup& b) {
  std::vector<int> part_of(d.size(), -1);
  for (std::size_t i = 0; i < b.parts.size(); ++i) {
    if (b.parts[i].empty()) return "part " + std::to_string(i) + " is empty";
    for (Vertex v : b.parts[i]) {
      if (part_of[v] != -1) return "vertex " + std::to_string(v) + " lies in two parts";
      part_of[v] = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < b.parts.size(); ++i)
    for (std::size_t j = i + 1; j < b.parts.size(); ++j)
      for (Vertex u : b.parts[i])
        for (Vertex v : b.parts[j])
          if (!d.has_arc(u, v) || d.has_arc(v, u))
            return "parts " + std::to_string(i) + " and " + std::to_string(j) +
                   " are not dominated at " + std::to_string(u) + "," + std::to_string(v);
  return {};
}

std::string format_log_entry(const SplitLogEntry& e) {
  std::ostringstream out;
  out << "split h=" << e.h << " size=" << e.size << " block=" << e.block << " pair=(" << e.u
      << "," << e.v << ") out=" << e.out_size << " in=" << e.in_size << " loss=" << e.loss
      << " bound=" << e.bound() << " [used=" << e.used << " spread=" << e.spread
      << " in_excess=" << e.in_excess << "]";
  return out.str();
}

SplitResult split_to_tt_blowup(const Digraph& d, const std::vector<std::vector<Vertex>>& blocks,
                               const SplitParams& params) {
  if (params.ell < 2) throw GraphError("splitting needs ell >= 2");
  if (params.s < 2 || params.part_min < 1 || params.splits_factor < 1)
    throw GraphError("bad splitting parameters");
  const int alpha = static_cast<int>(blocks.size());
  if (alpha == 0) throw GraphError("no blocks");
  std::vector<int> block_of(d.size(), -1);
  std::vector<Vertex> all;
  for (int i = 0; i < alpha; ++i)
    for (Vertex v : blocks[i]) {
      if (v < 0 || v >= d.size()) throw GraphError("block vertex out of range");
      if (block_of[v] != -1) throw GraphError("blocks overlap");
      block_of[v] = i;
      all.push_back(v);
    }
  std::sort(all.begin(), all.end());
  const VertexMask host = make_mask(d.size(), all);

  SplitResult res;
  const int slots = params.splits_factor * alpha;
  std::vector<std::vector<Vertex>> seq(slots);
  seq[0] = all;
  auto fail = [&](std::string stage, std::string msg) {
    res.outcome = SplitFailure{std::move(stage), std::move(msg), {}};
    res.sequence = seq;
    return res;
  };

  for (int split = 0; split + 1 < slots; ++split) {
    int h = 0;
    for (int i = 1; i < slots; ++i)
      if (seq[i].size() > seq[h].size()) h = i;
    const std::vector<Vertex>& g = seq[h];
    const int want = params.s * alpha;
    if (static_cast<int>(g.size()) < want)
      return fail("split", "largest set has " + std::to_string(g.size()) + " vertices, need " +
                               std::to_string(want));
    auto a = degree_window_subset(d, want, params.window, g);
    if (!a) a = lowest_spread_subset(d, want, g);
    std::vector<int> count(alpha, 0);
    for (Vertex v : *a) ++count[block_of[v]];
    int blk = static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
    std::vector<Vertex> branch;
    for (Vertex v : *a)
      if (block_of[v] == blk && static_cast<int>(branch.size()) < params.s) branch.push_back(v);

    auto sub = subdivide_on(d, branch, params.ell, host);
    if (auto* f = std::get_if<Subdivision>(&sub)) {
      res.outcome = SubdivisionFound{blk, std::move(*f)};
      res.sequence = seq;
      return res;
    }
    auto& blocked = std::get<Blocked>(sub);
    const Vertex u = blocked.u, v = blocked.v;
    VertexMask in_g = make_mask(d.size(), g);
    VertexMask in_m = make_mask(d.size(), blocked.partial.vertices());
    std::vector<Vertex> out_part, in_part;
    for (Vertex w : g) {
      if (in_m[w]) continue;
      if (d.has_arc(u, w)) out_part.push_back(w);
      if (d.has_arc(w, v)) in_part.push_back(w);
    }

    SplitLogEntry e;
    e.h = h;
    e.size = static_cast<int>(g.size());
    e.block = blk;
    e.u = u;
    e.v = v;
    e.out_size = static_cast<int>(out_part.size());
    e.in_size = static_cast<int>(in_part.size());
    std::set<Vertex> uni(out_part.begin(), out_part.end());
    uni.insert(in_part.begin(), in_part.end());
    e.loss = e.size - static_cast<int>(uni.size());
    e.used = static_cast<int>(blocked.partial.vertices().size());
    HostDegrees hd = host_degrees(d, g);
    int lo = d.size(), hi = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::binary_search(branch.begin(), branch.end(), g[i]))
        lo = std::min(lo, hd.in[i]), hi = std::max(hi, hd.in[i]);
    e.spread = hi - lo;
    for (Vertex w : g)
      if (in_g[w] && d.has_arc(w, u) && !d.has_arc(w, v)) ++e.in_excess;
    res.log.push_back(e);

    if (out_part.empty() || in_part.empty())
      return fail("split", "split " + std::to_string(split) + " left an empty side: " +
                               format_log_entry(e));
    if (static_cast<int>(uni.size()) != e.out_size + e.in_size)
      return fail("split", "internal: the two sides of a blocked pair overlap");

    seq.insert(seq.begin() + h + 1, std::vector<Vertex>{});
    seq.pop_back();
    seq[h] = std::move(in_part);
    seq[h + 1] = std::move(out_part);
  }
  res.sequence = seq;

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < alpha; ++i)
    for (int j = 0; j < slots; ++j) {
      int common = 0;
      for (Vertex v : seq[j]) common += block_of[v] == i;
      if (common >= params.part_min) edges.emplace_back(i, j);
    }
  auto matching = hall_matching(alpha, slots, edges);
  if (auto* hv = std::get_if<HallViolation>(&matching)) {
    SplitFailure f{"hall", "blocks cannot be matched to sets with enough common vertices", hv->left};
    res.outcome = std::move(f);
    return res;
  }
  const auto& match = std::get<std::vector<int>>(matching);
  std::vector<int> order(alpha);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return match[a] < match[b]; });
  TTBlowup out;
  for (int i : order) {
    std::vector<Vertex> part;
    for (Vertex v : seq[match[i]])
      if (block_of[v] == i) part.push_back(v);
    out.parts.push_back(std::move(part));
    out.block_of.push_back(i);
  }
  res.outcome = std::move(out);
  return res;
}

}  // namespace linkage
