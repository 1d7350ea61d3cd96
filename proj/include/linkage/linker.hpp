#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "linkage/connectivity.hpp"
#include "linkage/oracle.hpp"
#include "linkage/reroute.hpp"
#include "linkage/subdivision.hpp"

namespace linkage {

/// Constants of the linking procedure. asymptotic(k) gives the proof's values,
/// which need tens of millions of vertices; scaled(k) gives values that run
/// on a few hundred.
struct LinkerParams {
  int s = 10;                    // branch vertices per subdivision
  int ell = 2;                   // interior vertices per subdivision path
  std::int64_t w_size = 0;       // per-terminal out-neighbourhood; 0 = largest that fits
  std::int64_t u_block = 0;      // block size handed to the splitter; 0 = smallest W'_j
  int v_part = 6;                // minimum part size after splitting
  int splits_factor = 5;
  WindowParams window;
  int freed_min = 4;             // freed branch vertices per subdivision
  double v_prime_ratio = 0.5;    // V'_k: in-degree from S_l at least this share of |S_l|
  int case1_in_fan = 1;          // in-neighbours of an origin in S'_l
  int v_out_fan = 1;             // out-neighbours of a V''_k vertex in S'_l
  int chain_direct_fan = 3;      // out-neighbours in the next S for a direct hop
  int chain_hop_fan = 1;         // out-neighbours in the next S' of a relay vertex
  int q2_in_fan = 5;             // in-neighbours in S_i that let a path be finished early
  int release_hits = 4;          // intersections taken along the path being cut
  bool check_connectivity = true;
  std::int64_t budget = 1000000; // loop iterations before giving up

  static LinkerParams asymptotic(int k);
  static LinkerParams scaled(int k);
  /// Empty when usable.
  std::string validate() const;
};

/// Per role r (0-based, I roles first in Hamiltonian order, then J roles in
/// domination order), terminal[r] is the index into the instance.
struct Configuration {
  int k = 0;
  std::vector<int> terminal;
  int l = 0;                                  // number of I roles
  std::vector<std::vector<Vertex>> w;         // by terminal index
  std::vector<Subdivision> f;                 // by I role
  std::vector<std::vector<Vertex>> parts;     // by J role (role l + j)
  std::vector<Vertex> v_k_prime, v_k_second;  // split of the last part
  std::vector<std::pair<int, int>> h_arcs;    // arcs of the auxiliary digraph on I roles
  std::vector<std::string> notes;

  bool has_j() const { return !parts.empty(); }
  const std::vector<Vertex>& s_of(int role) const { return f[role].branch; }
  const std::vector<Vertex>& v_of(int role) const { return parts[role - l]; }
};

struct LinkerFailure {
  std::string stage;
  std::string anchor;
  std::string message;
};

struct Selection {
  int case_tag = 0;  // 1: origins in V'_k, 2: origins in S_l
  std::vector<Vertex> source_set;
  Vertex special = -1;
};

/// Paths indexed by role: paths[r] ends at y of terminal[r]; `special` ends
/// at the special vertex (empty when there is none).
struct RoleSystem {
  std::vector<Path> paths;
  Path special;
  std::vector<std::vector<Vertex>> freed;  // S' per I role
  std::vector<std::string> notes;

  std::vector<Vertex> vertices() const;
};

template <class T>
using Staged = std::variant<T, LinkerFailure>;

Staged<Configuration> build_configuration(const Digraph& d, const LinkageInstance& inst,
                                          const LinkerParams& params);

Staged<Selection> select_O_and_special(const Digraph& d, const Configuration& cfg,
                                       const LinkerParams& params);

/// Paths from the source set to Y and the special vertex, avoiding X, cut so
/// that only their first vertex lies in the source set.
Staged<RoleSystem> route_to_targets(const Digraph& d, const LinkageInstance& inst,
                                    const Configuration& cfg, const Selection& sel);

Staged<RoleSystem> free_and_release(const Digraph& d, const Configuration& cfg,
                                    const Selection& sel, const RoleSystem& q,
                                    const LinkerParams& params);

/// Final paths x -> y per terminal index.
Staged<PathSystem> link_back(const Digraph& d, const LinkageInstance& inst,
                             const Configuration& cfg, const Selection& sel,
                             const RoleSystem& q, const LinkerParams& params);

struct LinkReport {
  std::variant<PathSystem, LinkerFailure> outcome;
  int case_tag = 0;
  int l = 0;
  std::vector<std::string> notes;
  double seconds = 0;

  bool ok() const { return outcome.index() == 0; }
};

LinkReport link(const Digraph& d, const LinkageInstance& inst, const LinkerParams& params);

nlohmann::json to_json(const LinkerParams& p);
/// Fields present in `j` override `base`; unknown fields are an error.
LinkerParams params_from_json(const nlohmann::json& j, LinkerParams base);
nlohmann::json to_json(const LinkReport& r, const LinkerParams& p);

}  // namespace linkage
