#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "linkage/digraph.hpp"
#include "linkage/oracle.hpp"
#include "linkage/reroute.hpp"
#include "linkage/subdivision.hpp"

namespace fixtures {

using namespace linkage;

// Layered digraph for the linker. Layer i is the out-neighbourhood of x_i:
// 'J' layers are transitive (no short cycles, so no subdivision), 'I' layers
// are random tournaments. Earlier layers dominate later ones. A few return
// vertices Z receive arcs from the I layers and dominate the J layers, which
// keeps the digraph strong without creating subdivisions in J layers. Optional
// relay vertices lead from the J layers back into the I layers.
struct Layered {
  Digraph d;
  LinkageInstance inst;
  std::vector<std::vector<Vertex>> layers;
  std::vector<Vertex> z;
};

inline Layered layered(const std::string& kinds, int m, int zc, std::uint64_t seed, int rc = 0) {
  const int k = static_cast<int>(kinds.size());
  const int n = 2 * k + k * m + zc + rc;
  std::mt19937_64 rng(seed);
  Layered f;
  for (int i = 0; i < k; ++i) {
    f.inst.x.push_back(i);
    f.inst.y.push_back(k + i);
  }
  int next = 2 * k;
  f.layers.resize(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) f.layers[i].push_back(next++);
  for (int j = 0; j < zc; ++j) f.z.push_back(next++);
  std::vector<Vertex> relay;
  for (int j = 0; j < rc; ++j) relay.push_back(next++);

  DigraphBuilder b(n);
  for (int i = 0; i < k; ++i) {
    const auto& L = f.layers[i];
    for (int a = 0; a < m; ++a)
      for (int c = a + 1; c < m; ++c) {
        if (kinds[i] == 'J' || rng() % 2) b.add_arc(L[a], L[c]);
        else b.add_arc(L[c], L[a]);
      }
    for (int j = i + 1; j < k; ++j)
      for (Vertex u : L)
        for (Vertex v : f.layers[j]) b.add_arc(u, v);
    for (Vertex u : L) {
      for (Vertex z : f.z) {
        if (kinds[i] == 'J') b.add_arc(z, u);
        else b.add_arc(u, z);
      }
      for (Vertex w : relay) {
        if (kinds[i] == 'J') b.add_arc(u, w);
        else b.add_arc(w, u);
      }
      for (int t = 0; t < 2 * k; ++t) {
        if (t == i) b.add_arc(t, u);
        else b.add_arc(u, t);
      }
    }
  }
  for (std::size_t a = 0; a < f.z.size(); ++a) {
    for (std::size_t c = a + 1; c < f.z.size(); ++c) b.add_arc(f.z[a], f.z[c]);
    for (int t = 0; t < 2 * k; ++t) b.add_arc(f.z[a], t);
  }
  for (std::size_t a = 0; a < relay.size(); ++a) {
    for (std::size_t c = a + 1; c < relay.size(); ++c) b.add_arc(relay[a], relay[c]);
    for (Vertex z : f.z) b.add_arc(z, relay[a]);
    for (int t = 0; t < 2 * k; ++t) b.add_arc(relay[a], t);
  }
  // Terminals: y's dominate x's, otherwise by index.
  for (int a = 0; a < 2 * k; ++a)
    for (int c = a + 1; c < 2 * k; ++c) {
      if (a < k && c >= k) b.add_arc(c, a);
      else b.add_arc(a, c);
    }
  f.d = b.build();
  return f;
}

// Blow-up of a transitive tournament whose parts are transitive ('T') or
// backward-path ('B') tournaments of the given size, relabelled by a seeded
// shuffle. Block i collects the parts listed in block_parts[i].
struct Blowup {
  Digraph d;
  std::vector<std::vector<Vertex>> parts;
  std::vector<std::vector<Vertex>> blocks;
};

inline Blowup tt_blowup(const std::string& kinds, int size,
                        const std::vector<std::vector<int>>& block_parts, std::uint64_t seed) {
  const int t = static_cast<int>(kinds.size());
  const int n = t * size;
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(label.begin(), label.end(), rng);
  Blowup f;
  f.parts.resize(t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < size; ++j) f.parts[i].push_back(label[i * size + j]);
  DigraphBuilder b(n);
  for (int i = 0; i < t; ++i) {
    Digraph inner = kinds[i] == 'B' ? backward_path_tournament(size) : transitive_tournament(size);
    for (auto [u, v] : inner.arcs()) b.add_arc(f.parts[i][u], f.parts[i][v]);
    for (int j = i + 1; j < t; ++j)
      for (Vertex u : f.parts[i])
        for (Vertex v : f.parts[j]) b.add_arc(u, v);
  }
  f.d = b.build();
  for (const auto& list : block_parts) {
    std::vector<Vertex> blk;
    for (int p : list) blk.insert(blk.end(), f.parts[p].begin(), f.parts[p].end());
    std::sort(blk.begin(), blk.end());
    f.blocks.push_back(std::move(blk));
  }
  return f;
}

// Subdivision F with s branch vertices in a sparse random digraph, plus r
// disjoint paths into targets off F that are forced through F: origins only
// have arcs into F and targets only arcs from F. With `on_branch` the
// origins are branch vertices.
struct RerouteCase {
  Digraph d;
  Subdivision f;
  PathSystem q;
};

// K<->4 on 0..3 whose path 2 -> 3 runs through 4, and one path 5 0 4 6 that
// enters F at branch vertex 0 and leaves from the interior 4. Its suffix meets
// no prefix tree, so it is joined back through F.
inline RerouteCase rule_three_case() {
  DigraphBuilder b(7);
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = 0; v < 4; ++v)
      if (u != v && !(u == 2 && v == 3)) b.add_arc(u, v);
  for (auto [u, v] : std::vector<Arc>{{5, 0}, {0, 4}, {4, 6}, {2, 4}, {4, 3}}) b.add_arc(u, v);
  RerouteCase c{b.build(), {}, PathSystem{{{5, 0, 4, 6}}, true}};
  c.f.branch = {0, 1, 2, 3};
  c.f.max_len = 2;
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = 0; v < 4; ++v)
      if (u != v) c.f.paths[{u, v}] = Path{u, v};
  c.f.paths[{2, 3}] = Path{2, 4, 3};
  return c;
}

inline std::optional<RerouteCase> reroute_case(std::uint64_t seed, int s, int ell, int r, bool on_branch) {
  std::mt19937_64 rng(seed);
  const int n = 18 + static_cast<int>(rng() % 14);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Vertex> branch(order.begin(), order.begin() + s);
  std::sort(branch.begin(), branch.end());
  DigraphBuilder sparse(random_digraph(n, 0.22, seed * 31 + 7));
  if (ell == 0)
    for (Vertex u : branch)
      for (Vertex v : branch)
        if (u != v) sparse.add_arc(u, v);
  Digraph base = sparse.build();
  auto sub = subdivide_on(base, branch, ell);
  auto* f = std::get_if<Subdivision>(&sub);
  if (!f) return std::nullopt;
  VertexMask in_f = make_mask(n, f->vertices());
  std::vector<Vertex> origins, targets;
  if (on_branch) {
    origins.assign(branch.begin(), branch.begin() + std::min(r, s));
  }
  for (Vertex v : order) {
    if (in_f[v]) continue;
    if (static_cast<int>(origins.size()) < r) origins.push_back(v);
    else if (static_cast<int>(targets.size()) < r) targets.push_back(v);
  }
  if (static_cast<int>(origins.size()) < r || static_cast<int>(targets.size()) < r) return std::nullopt;
  DigraphBuilder b(base);
  std::vector<Vertex> f_vertices = f->vertices();
  if (!on_branch) {
    for (Vertex o : origins) {
      for (Vertex w = 0; w < n; ++w)
        if (b.has_arc(o, w) && !in_f[w]) b.remove_arc(o, w);
      for (int j = 0; j < 2; ++j) b.add_arc(o, f_vertices[rng() % f_vertices.size()]);
    }
  }
  for (Vertex t : targets) {
    for (Vertex w = 0; w < n; ++w)
      if (b.has_arc(w, t) && !in_f[w]) b.remove_arc(w, t);
    for (int j = 0; j < 2; ++j) b.add_arc(f_vertices[rng() % f_vertices.size()], t);
  }
  Digraph d = b.build();
  auto m = menger_paths(d, origins, targets, r);
  auto* ps = std::get_if<PathSystem>(&m);
  if (!ps) return std::nullopt;
  return RerouteCase{d, *f, *ps};
}

inline std::vector<Vertex> iota_vec(int n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace fixtures
