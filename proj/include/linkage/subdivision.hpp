#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "linkage/digraph.hpp"

namespace linkage {

/// Subdivision of the complete digraph on `branch`: one path per ordered
/// pair of branch vertices, each of length at most max_len, with pairwise
/// disjoint interiors that avoid the branch set. A partial subdivision
/// realizes only some pairs.
struct Subdivision {
  std::vector<Vertex> branch;  // ascending
  std::map<std::pair<Vertex, Vertex>, Path> paths;
  int max_len = 0;

  bool complete() const { return paths.size() == branch.size() * (branch.size() - 1); }
  const Path& path(Vertex a, Vertex b) const { return paths.at({a, b}); }
  /// Branch vertices and all interiors, ascending.
  std::vector<Vertex> vertices() const;
};

/// Empty when `f` is valid in d (complete or not, per `require_complete`).
std::string check_subdivision(const Digraph& d, const Subdivision& f, bool require_complete = true);

struct WindowParams {
  double ratio = 9.0 / 40.0;
  int window = -1;  // in-degree spread; negative means 10 * size
};

/// `size` vertices of `host` whose in- and out-degrees inside the host are
/// at least ratio * |host| and whose in-degrees differ by at most the window.
/// Empty host means all of d.
std::optional<std::vector<Vertex>> degree_window_subset(const Digraph& d, int size,
                                                        const WindowParams& wp = {},
                                                        const std::vector<Vertex>& host = {});

/// `size` vertices of host that are consecutive in in-degree order with the
/// smallest in-degree spread.
std::vector<Vertex> lowest_spread_subset(const Digraph& d, int size, const std::vector<Vertex>& host);

/// Greedy partial subdivision: ordered pairs of `branch` in lexicographic
/// order, each realized by a shortest path of length at most ell+1 whose
/// interior avoids the branch set, earlier interiors and vertices outside
/// `allowed` (empty mask allows everything).
Subdivision grow_partial_subdivision(const Digraph& d, std::vector<Vertex> branch, int ell,
                                     const VertexMask& allowed = {});

/// First unrealized pair of a partial subdivision.
struct Blocked {
  Vertex u;
  Vertex v;
  Subdivision partial;
};

using SubdivisionResult = std::variant<Subdivision, Blocked>;

/// Subdivision on a fixed branch set.
SubdivisionResult subdivide_on(const Digraph& d, std::vector<Vertex> branch, int ell,
                               const VertexMask& allowed = {});

/// Picks a branch set of size s inside `host` (degree window, falling back to
/// the lowest in-degree spread) and grows a subdivision on it.
SubdivisionResult find_subdivision(const Digraph& d, const std::vector<Vertex>& host, int s,
                                   int ell, const VertexMask& allowed = {},
                                   const WindowParams& wp = {});

struct HallViolation {
  std::vector<int> left;  // |N(left)| < |left|
  std::vector<int> neighbours;
};

/// Matching covering the left side (match[i] = right partner of left i) or
/// a Hall-violating left set.
std::variant<std::vector<int>, HallViolation> hall_matching(
    int left, int right, const std::vector<std::pair<int, int>>& edges);

struct TTBlowup {
  std::vector<std::vector<Vertex>> parts;  // parts[i] -> parts[j] for i < j
  std::vector<int> block_of;               // input block each part lies in
};

/// Empty when every earlier part fully dominates every later one (and no
/// arc goes back), all parts are nonempty, and the parts are disjoint.
std::string check_tt_blowup(const Digraph& d, const TTBlowup& b);

struct SplitParams {
  int s = 4;
  int ell = 2;
  int part_min = 5;
  int splits_factor = 5;
  WindowParams window;
};

struct SplitLogEntry {
  int h = 0;
  int size = 0;  // |G_h| before the split
  int block = 0;
  Vertex u = -1;
  Vertex v = -1;
  int out_size = 0;  // |U'|
  int in_size = 0;   // |V'|
  int loss = 0;
  int used = 0;      // |V(M)|
  int spread = 0;    // in-degree spread of the branch set inside G_h
  int in_excess = 0; // |N-(u) \ N-(v)| inside G_h
  int bound() const { return used + spread + in_excess; }
};

std::string format_log_entry(const SplitLogEntry& e);

struct SubdivisionFound {
  int block;
  Subdivision subdivision;
};

struct SplitFailure {
  std::string stage;
  std::string message;
  std::vector<int> blocks;  // violating block set for Hall failures
};

struct SplitResult {
  std::variant<TTBlowup, SubdivisionFound, SplitFailure> outcome;
  std::vector<SplitLogEntry> log;
  std::vector<std::vector<Vertex>> sequence;  // final G_1.., for auditing
};

/// Repeatedly splits the largest set of a sequence of splits_factor * alpha
/// sets (initially the union of the blocks) along blocked branch pairs, then
/// matches blocks to sets of the sequence. Path searches stay inside the
/// union of the blocks.
SplitResult split_to_tt_blowup(const Digraph& d, const std::vector<std::vector<Vertex>>& blocks,
                               const SplitParams& params);

}  // namespace linkage
