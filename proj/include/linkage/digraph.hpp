#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace linkage {

using Vertex = int;

/// A directed path given by its vertex sequence.
using Path = std::vector<Vertex>;

using Arc = std::pair<Vertex, Vertex>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense digraph on vertices 0..n-1. No self-loops; digons allowed.
/// Immutable once built; adjacency lists are kept sorted by vertex id.
class Digraph {
 public:
  Digraph() = default;
  Digraph(int n, std::span<const Arc> arcs);

  int size() const noexcept { return n_; }
  bool has_arc(Vertex u, Vertex v) const noexcept {
    return matrix_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }
  std::span<const Vertex> out_neighbors(Vertex v) const { return out_[v]; }
  std::span<const Vertex> in_neighbors(Vertex v) const { return in_[v]; }
  int out_degree(Vertex v) const { return static_cast<int>(out_[v].size()); }
  int in_degree(Vertex v) const { return static_cast<int>(in_[v].size()); }
  std::size_t arc_count() const noexcept { return arc_count_; }

  /// All arcs in (tail, head) lexicographic order.
  std::vector<Arc> arcs() const;

  /// Digraph with vertex v renamed to perm[v].
  Digraph permuted(std::span<const Vertex> perm) const;

  bool operator==(const Digraph& other) const {
    return n_ == other.n_ && matrix_ == other.matrix_;
  }

 private:
  friend class DigraphBuilder;
  explicit Digraph(int n, std::vector<std::uint8_t> matrix);

  int n_ = 0;
  std::size_t arc_count_ = 0;
  std::vector<std::uint8_t> matrix_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
};

/// Mutable arc matrix used by the generators.
class DigraphBuilder {
 public:
  explicit DigraphBuilder(int n);
  explicit DigraphBuilder(const Digraph& d);

  int size() const noexcept { return n_; }
  void add_arc(Vertex u, Vertex v);
  void remove_arc(Vertex u, Vertex v);
  /// Makes {u,v} a single arc u->v.
  void orient(Vertex u, Vertex v);
  bool has_arc(Vertex u, Vertex v) const {
    return matrix_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }
  Digraph build() const;

 private:
  void check(Vertex u, Vertex v) const;
  int n_;
  std::vector<std::uint8_t> matrix_;
};

struct Semidegree {
  int min_out;
  int min_in;
  int min_semi;
  bool operator==(const Semidegree&) const = default;
};

bool is_tournament(const Digraph& d);
bool is_semicomplete(const Digraph& d);
Semidegree semidegree(const Digraph& d);

/// Arc i->j iff (j-i) mod n lies in 1..(n-1)/2. Requires odd n >= 3.
Digraph circulant_tournament(int n);
Digraph transitive_tournament(int n);
/// Tournament whose identity order is a backward Hamiltonian path.
Digraph backward_path_tournament(int m);
Digraph complete_digraph(int n);
/// Blow-up of a template digraph: part i replaces template vertex i and
/// occupies the next consecutive id range.
Digraph blow_up(const Digraph& templ, std::span<const Digraph> parts);

/// Hamiltonian path of a semicomplete digraph by vertex insertion.
Path hamiltonian_path(const Digraph& d);

/// Random semicomplete digraph: each pair gets one uniformly oriented arc,
/// upgraded to a digon with probability `digon_prob`.
Digraph random_semicomplete(int n, std::uint64_t seed, double digon_prob = 0.0);
/// Each ordered pair becomes an arc independently with probability p.
Digraph random_digraph(int n, double p, std::uint64_t seed);

bool is_path(const Digraph& d, std::span<const Vertex> path);

/// Bit mask over vertex ids.
using VertexMask = std::vector<char>;
VertexMask make_mask(int n, std::span<const Vertex> vertices);

/// Vertices reachable from `source` using only vertices not in `blocked`.
/// The source itself is never blocked.
VertexMask reachable_from(const Digraph& d, Vertex source, const VertexMask& blocked);

}  // namespace linkage
