#pragma once

#include <string>
#include <variant>
#include <vector>

#include "linkage/digraph.hpp"

namespace linkage {

/// Ordered collection of paths in a host digraph.
struct PathSystem {
  std::vector<Path> paths;
  /// When false, paths may share endpoints (interiors stay disjoint).
  bool endpoint_disjoint = true;

  std::vector<Vertex> vertices() const;
  bool operator==(const PathSystem&) const = default;
};

/// Empty string when valid, otherwise a description of the first defect.
std::string check_path_system(const Digraph& d, const PathSystem& ps);

/// Vertex set whose removal destroys every X->Y path.
struct Separator {
  std::vector<Vertex> vertices;
};

using MengerResult = std::variant<PathSystem, Separator>;

/// Up to k vertex-disjoint X->Y paths avoiding `forbidden`. Each returned
/// path starts at its only X vertex and ends at its only Y vertex. Returns a
/// separator of size < k when k such paths do not exist.
MengerResult menger_paths(const Digraph& d, const std::vector<Vertex>& sources,
                          const std::vector<Vertex>& sinks, int k,
                          const std::vector<Vertex>& forbidden = {});

/// Maximum number of internally disjoint s->t paths, capped at `limit`.
/// Requires that s->t is not an arc.
int local_connectivity(const Digraph& d, Vertex s, Vertex t, int limit);

/// Exact vertex connectivity.
int vertex_connectivity(const Digraph& d);

/// True iff d has at least k+1 vertices and no separator of size < k.
/// Cheaper than vertex_connectivity because every flow stops at k.
bool is_k_connected(const Digraph& d, int k);

}  // namespace linkage
