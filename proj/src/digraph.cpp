#include "linkage/digraph.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace linkage {

namespace {

// mt19937_64 output is specified by the standard; the distributions are not,
// so uniform doubles are derived by hand to keep generators reproducible.
double unit_random(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Digraph::Digraph(int n, std::span<const Arc> arcs) {
  DigraphBuilder b(n);
  for (auto [u, v] : arcs) b.add_arc(u, v);
  *this = b.build();
}

Digraph::Digraph(int n, std::vector<std::uint8_t> matrix)
    : n_(n), matrix_(std::move(matrix)), out_(n), in_(n) {
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (has_arc(u, v)) {
        out_[u].push_back(v);
        in_[v].push_back(u);
        ++arc_count_;
      }
    }
  }
}

std::vector<Arc> Digraph::arcs() const {
  std::vector<Arc> result;
  result.reserve(arc_count_);
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : out_[u]) result.emplace_back(u, v);
  return result;
}

Digraph Digraph::permuted(std::span<const Vertex> perm) const {
  if (static_cast<int>(perm.size()) != n_) throw GraphError("permutation size mismatch");
  DigraphBuilder b(n_);
  for (auto [u, v] : arcs()) b.add_arc(perm[u], perm[v]);
  return b.build();
}

DigraphBuilder::DigraphBuilder(int n) : n_(n) {
  if (n < 0) throw GraphError("negative vertex count");
  matrix_.assign(static_cast<std::size_t>(n) * n, 0);
}

DigraphBuilder::DigraphBuilder(const Digraph& d) : n_(d.size()), matrix_(d.matrix_) {}

void DigraphBuilder::check(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw GraphError("arc (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
  if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
}

void DigraphBuilder::add_arc(Vertex u, Vertex v) {
  check(u, v);
  matrix_[static_cast<std::size_t>(u) * n_ + v] = 1;
}

void DigraphBuilder::remove_arc(Vertex u, Vertex v) {
  check(u, v);
  matrix_[static_cast<std::size_t>(u) * n_ + v] = 0;
}

void DigraphBuilder::orient(Vertex u, Vertex v) {
  add_arc(u, v);
  remove_arc(v, u);
}

Digraph DigraphBuilder::build() const { return Digraph(n_, matrix_); }

bool is_tournament(const Digraph& d) {
  for (Vertex u = 0; u < d.size(); ++u)
    for (Vertex v = u + 1; v < d.size(); ++v)
      if (d.has_arc(u, v) == d.has_arc(v, u)) return false;
  return true;
}

bool is_semicomplete(const Digraph& d) {
  for (Vertex u = 0; u < d.size(); ++u)
    for (Vertex v = u + 1; v < d.size(); ++v)
      if (!d.has_arc(u, v) && !d.has_arc(v, u)) return false;
  return true;
}

Semidegree semidegree(const Digraph& d) {
  if (d.size() == 0) return {0, 0, 0};
  int mo = d.out_degree(0), mi = d.in_degree(0);
  for (Vertex v = 1; v < d.size(); ++v) {
    mo = std::min(mo, d.out_degree(v));
    mi = std::min(mi, d.in_degree(v));
  }
  return {mo, mi, std::min(mo, mi)};
}

Digraph circulant_tournament(int n) {
  if (n < 3 || n % 2 == 0) throw GraphError("circulant tournament needs odd n >= 3");
  DigraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i)
    for (int step = 1; step <= (n - 1) / 2; ++step) b.add_arc(i, (i + step) % n);
  return b.build();
}

Digraph transitive_tournament(int n) {
  if (n < 1) throw GraphError("transitive tournament needs n >= 1");
  DigraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) b.add_arc(i, j);
  return b.build();
}

Digraph backward_path_tournament(int m) {
  if (m < 1) throw GraphError("backward path tournament needs m >= 1");
  DigraphBuilder b(m);
  for (Vertex i = 0; i + 1 < m; ++i) b.add_arc(i, i + 1);
  for (Vertex j = 2; j < m; ++j)
    for (Vertex i = 0; i + 2 <= j; ++i) b.add_arc(j, i);
  return b.build();
}

Digraph complete_digraph(int n) {
  DigraphBuilder b(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v) b.add_arc(u, v);
  return b.build();
}

Digraph blow_up(const Digraph& templ, std::span<const Digraph> parts) {
  if (static_cast<int>(parts.size()) != templ.size())
    throw GraphError("blow-up needs one part per template vertex");
  std::vector<int> offset(parts.size() + 1, 0);
  for (std::size_t i = 0; i < parts.size(); ++i) offset[i + 1] = offset[i] + parts[i].size();
  DigraphBuilder b(offset.back());
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (auto [u, v] : parts[i].arcs()) b.add_arc(offset[i] + u, offset[i] + v);
  for (auto [ti, tj] : templ.arcs())
    for (Vertex u = offset[ti]; u < offset[ti + 1]; ++u)
      for (Vertex v = offset[tj]; v < offset[tj + 1]; ++v) b.add_arc(u, v);
  return b.build();
}

Path hamiltonian_path(const Digraph& d) {
  if (!is_semicomplete(d)) throw GraphError("hamiltonian_path needs a semicomplete digraph");
  Path path;
  if (d.size() == 0) return path;
  path.push_back(0);
  for (Vertex v = 1; v < d.size(); ++v) {
    if (d.has_arc(v, path.front())) {
      path.insert(path.begin(), v);
      continue;
    }
    // path.front() -> v, so a switch from "-> v" to "v ->" exists or v goes last.
    auto pos = path.size();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (d.has_arc(path[i], v) && d.has_arc(v, path[i + 1])) {
        pos = i + 1;
        break;
      }
    }
    path.insert(path.begin() + static_cast<std::ptrdiff_t>(pos), v);
  }
  return path;
}

Digraph random_semicomplete(int n, std::uint64_t seed, double digon_prob) {
  std::mt19937_64 rng(seed);
  DigraphBuilder b(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (unit_random(rng) < 0.5)
        b.add_arc(u, v);
      else
        b.add_arc(v, u);
      if (unit_random(rng) < digon_prob) {
        b.add_arc(u, v);
        b.add_arc(v, u);
      }
    }
  }
  return b.build();
}

Digraph random_digraph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DigraphBuilder b(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && unit_random(rng) < p) b.add_arc(u, v);
  return b.build();
}

bool is_path(const Digraph& d, std::span<const Vertex> path) {
  if (path.empty()) return false;
  VertexMask seen(d.size(), 0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    Vertex v = path[i];
    if (v < 0 || v >= d.size() || seen[v]) return false;
    seen[v] = 1;
    if (i > 0 && !d.has_arc(path[i - 1], v)) return false;
  }
  return true;
}

VertexMask make_mask(int n, std::span<const Vertex> vertices) {
  VertexMask m(n, 0);
  for (Vertex v : vertices) m[v] = 1;
  return m;
}

VertexMask reachable_from(const Digraph& d, Vertex source, const VertexMask& blocked) {
  VertexMask seen(d.size(), 0);
  std::vector<Vertex> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : d.out_neighbors(u)) {
      if (!seen[w] && !blocked[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace linkage
