#pragma once

#include <string>
#include <variant>
#include <vector>

#include "linkage/connectivity.hpp"
#include "linkage/subdivision.hpp"

namespace linkage {

enum class RerouteVariant { Standard, Moreover };

/// Per input path: where it was cut and what it hooked onto.
struct RerouteTrace {
  // Prefix stage: prefix ends at position pre_cut (path length - 1 when the
  // whole path is kept). pre_branch is the branch vertex reached from the cut
  // vertex along its subdivision path, -1 when the whole path is kept.
  std::vector<int> pre_cut;
  std::vector<Vertex> pre_branch;
  std::vector<Path> pre_tail;  // cut vertex ... pre_branch
  // Suffix stage: suffix starts at post_cut (0 when the whole path is kept).
  std::vector<int> post_cut;
  std::vector<Vertex> post_branch;  // start of the subdivision path, -1 if none
  std::vector<Vertex> post_end;     // its other branch vertex
  std::vector<Path> post_head;      // post_branch ... cut vertex
  // Re-cut suffix: starts at accept_cut; accept_index is the prefix tree it
  // hangs from, -1 when the suffix stage result is kept.
  std::vector<int> accept_cut;
  std::vector<int> accept_index;
  // Per output path (indexed by target): rule 1, 2 or 3 and the input path
  // whose origin it starts from.
  std::vector<int> rule;
  std::vector<int> origin_index;
};

struct RerouteResult {
  PathSystem q_hat;             // q_hat.paths[j] ends at the j-th target
  std::vector<Vertex> origins;  // start of each output path
  std::vector<Vertex> s_prime;  // freed branch vertices, ascending
  RerouteVariant variant = RerouteVariant::Standard;
  RerouteTrace trace;
};

struct RerouteFailure {
  std::string stage;
  std::string message;
  RerouteTrace trace;
};

using RerouteOutcome = std::variant<RerouteResult, RerouteFailure>;

/// Rebuilds the disjoint system `q` (paths from distinct origins to targets
/// outside F) so that at least `freed_min` branch vertices of F, together
/// with every subdivision path between two of them, are untouched. The
/// Moreover variant requires every origin to be a branch vertex and only
/// trims the paths back to their last useful entry into F; the new origins
/// are then branch vertices and subdivision paths out of the other branch
/// vertices avoid the system except at their own end.
RerouteOutcome free_subdivision(const Digraph& d, const Subdivision& f, const PathSystem& q,
                                int freed_min,
                                RerouteVariant variant = RerouteVariant::Standard);

/// Independent re-check of a result against the input: disjointness, ends,
/// freed-set avoidance, the origin property of the Moreover variant, and the
/// structural facts the construction relies on. Empty when all hold.
std::string audit_reroute(const Digraph& d, const Subdivision& f, const PathSystem& q,
                          int freed_min, const RerouteResult& r);

}  // namespace linkage
