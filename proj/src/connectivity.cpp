#include "linkage/connectivity.hpp"

#include <algorithm>
#include <string>

#include "flow.hpp"

namespace linkage {

using detail::FlowNetwork;

std::vector<Vertex> PathSystem::vertices() const {
  std::vector<Vertex> all;
  for (const auto& p : paths) all.insert(all.end(), p.begin(), p.end());
  return all;
}

std::string check_path_system(const Digraph& d, const PathSystem& ps) {
  std::vector<int> owner(d.size(), -1);
  for (std::size_t i = 0; i < ps.paths.size(); ++i) {
    const Path& p = ps.paths[i];
    if (!is_path(d, p)) return "path " + std::to_string(i) + " is not a directed path";
    for (std::size_t pos = 0; pos < p.size(); ++pos) {
      Vertex v = p[pos];
      bool endpoint = pos == 0 || pos + 1 == p.size();
      if (owner[v] != -1) {
        if (ps.endpoint_disjoint || !endpoint)
          return "paths " + std::to_string(owner[v]) + " and " + std::to_string(i) +
                 " share vertex " + std::to_string(v);
      }
      owner[v] = static_cast<int>(i);
    }
  }
  if (!ps.endpoint_disjoint) {
    // Interior vertices must not be endpoints of other paths either.
    std::vector<int> interior_of(d.size(), -1);
    for (std::size_t i = 0; i < ps.paths.size(); ++i)
      for (std::size_t pos = 1; pos + 1 < ps.paths[i].size(); ++pos)
        interior_of[ps.paths[i][pos]] = static_cast<int>(i);
    for (std::size_t i = 0; i < ps.paths.size(); ++i)
      for (Vertex v : {ps.paths[i].front(), ps.paths[i].back()})
        if (interior_of[v] != -1 && interior_of[v] != static_cast<int>(i))
          return "endpoint " + std::to_string(v) + " is interior to another path";
  }
  return {};
}

namespace {

// Vertex v splits into in-node 2v and out-node 2v+1; the in->out edge has
// capacity 1 and every arc edge is uncapacitated, so minimum cuts are vertex
// separators.
struct SplitNetwork {
  FlowNetwork net;
  int big;

  SplitNetwork(const Digraph& d, const VertexMask& removed, int extra_nodes)
      : net(2 * d.size() + extra_nodes), big(d.size() + 1) {
    for (Vertex v = 0; v < d.size(); ++v)
      if (!removed[v]) net.add_edge(2 * v, 2 * v + 1, 1);
    for (Vertex u = 0; u < d.size(); ++u) {
      if (removed[u]) continue;
      for (Vertex v : d.out_neighbors(u))
        if (!removed[v]) net.add_edge(2 * u + 1, 2 * v, big);
    }
  }
};

void check_disjoint_sets(int n, const std::vector<std::vector<Vertex>>& sets) {
  std::vector<char> seen(n, 0);
  for (const auto& s : sets) {
    for (Vertex v : s) {
      if (v < 0 || v >= n) throw GraphError("vertex " + std::to_string(v) + " out of range");
      if (seen[v]) throw GraphError("vertex sets overlap at " + std::to_string(v));
      seen[v] = 1;
    }
  }
}

}  // namespace

MengerResult menger_paths(const Digraph& d, const std::vector<Vertex>& sources,
                          const std::vector<Vertex>& sinks, int k,
                          const std::vector<Vertex>& forbidden) {
  if (k < 1) throw GraphError("menger_paths needs k >= 1");
  const int n = d.size();
  check_disjoint_sets(n, {sources, sinks, forbidden});
  SplitNetwork split(d, make_mask(n, forbidden), 2);
  FlowNetwork& net = split.net;
  const int s = 2 * n, t = 2 * n + 1;
  std::vector<Vertex> xs = sources, ys = sinks;
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  for (Vertex x : xs) net.add_edge(s, 2 * x, split.big);
  for (Vertex y : ys) net.add_edge(2 * y + 1, t, split.big);

  int flow = net.max_flow(s, t, k);
  if (flow < k) {
    auto reach = net.residual_reach(s);
    Separator sep;
    for (Vertex v = 0; v < n; ++v)
      if (reach[2 * v] && !reach[2 * v + 1]) sep.vertices.push_back(v);
    return sep;
  }

  VertexMask is_source = make_mask(n, xs), is_sink = make_mask(n, ys);
  PathSystem ps;
  for (int id : net.adjacent(s)) {
    const auto& e = net.edge(id);
    if (e.cap == 0 || e.flow <= 0) continue;
    Path raw;
    int node = e.to;
    while (node != t) {
      Vertex v = node / 2;
      if (node % 2 == 0) {
        raw.push_back(v);
        node = node + 1;
        continue;
      }
      int next = -1;
      for (int eid : net.adjacent(node)) {
        const auto& f = net.edge(eid);
        if (f.cap > 0 && f.flow > 0) {
          next = f.to;
          break;
        }
      }
      node = next;
    }
    // Trim to the last source vertex and the first sink vertex after it.
    std::size_t start = 0;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (is_source[raw[i]]) start = i;
    std::size_t stop = start;
    while (!is_sink[raw[stop]]) ++stop;
    ps.paths.emplace_back(raw.begin() + start, raw.begin() + stop + 1);
  }
  return ps;
}

int local_connectivity(const Digraph& d, Vertex s, Vertex t, int limit) {
  if (d.has_arc(s, t)) throw GraphError("local_connectivity needs a non-arc pair");
  SplitNetwork split(d, VertexMask(d.size(), 0), 0);
  return split.net.max_flow(2 * s + 1, 2 * t, limit);
}

namespace {

// Even's schedule: some vertex among the first kappa+1 lies outside a
// minimum separator, so it suffices to test pairs involving those vertices.
int connectivity_up_to(const Digraph& d, int cap) {
  const int n = d.size();
  int best = std::min(cap, n - 1);
  SplitNetwork split(d, VertexMask(n, 0), 0);
  FlowNetwork& net = split.net;
  for (Vertex i = 0; i < n && i <= best; ++i) {
    for (Vertex j = 0; j < n && best > 0; ++j) {
      if (j == i) continue;
      if (!d.has_arc(i, j)) {
        net.reset();
        best = std::min(best, net.max_flow(2 * i + 1, 2 * j, best));
      }
      if (!d.has_arc(j, i) && best > 0) {
        net.reset();
        best = std::min(best, net.max_flow(2 * j + 1, 2 * i, best));
      }
    }
  }
  return best;
}

}  // namespace

int vertex_connectivity(const Digraph& d) {
  if (d.size() < 2) throw GraphError("vertex_connectivity needs n >= 2");
  return connectivity_up_to(d, d.size() - 1);
}

bool is_k_connected(const Digraph& d, int k) {
  if (d.size() < k + 1) return false;
  if (k <= 0) return true;
  return connectivity_up_to(d, k) >= k;
}

}  // namespace linkage
