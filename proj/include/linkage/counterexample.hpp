#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linkage/digraph.hpp"
#include "linkage/oracle.hpp"

namespace linkage {

/// Which block vertex the terminals x_i do not dominate inside the last
/// block: the k-th path vertex (construction text) or the (m-k+1)-th one
/// (connectivity argument text).
enum class ExcludedVertex { KthVertex, MirrorVertex };

std::string to_string(ExcludedVertex v);
ExcludedVertex excluded_vertex_from_string(const std::string& s);

/// Vertex classes of the non-linked tournament. Every list is 0-indexed:
/// blocks[i][j] is the (j+1)-th vertex of the (i+1)-th block path.
struct CounterexampleLayout {
  int k = 0;
  int m = 0;
  int half = 0;  // floor(m/2)
  ExcludedVertex excluded = ExcludedVertex::KthVertex;

  // Gadget side.
  std::vector<Vertex> regular;  // W, S, x'_1, Y_2 in circulant order
  std::vector<Vertex> w, s;
  std::vector<Vertex> x_prime;  // x'_1..x'_k
  std::vector<Vertex> y;        // y_1..y_k

  // Block side.
  std::vector<std::vector<Vertex>> blocks;
  /// Circulant label of each vertex of the last block, in path order.
  std::vector<Vertex> last_block_labels;

  std::vector<Vertex> x;

  int gadget_size() const { return m + k; }
  int total_size() const { return (k + 1) * m + 2 * k; }

  std::vector<Arc> matching_arcs() const;     // last block -> block starts
  std::vector<Arc> half_block_arcs() const;   // second half of block 2 -> block 1
  std::vector<Arc> exit_arcs() const;         // block ends -> x'_i
  std::vector<Arc> y1_feed_arcs() const;      // second half of block 2 -> y_1

  /// Out-neighbours of x_i among block vertices, ascending.
  std::vector<Vertex> terminal_block_out(int i) const;

  LinkageInstance instance() const { return {x, y}; }
};

/// Checks m odd, m >= 10k, k >= 2; throws GraphError otherwise.
void check_counterexample_params(int k, int m);

/// The gadget tournament on W, S, X', Y alone, with gadget ids.
std::pair<Digraph, CounterexampleLayout> build_D1(int k, int m);
/// The block tournament alone, with block vertex ids starting at 0.
std::pair<Digraph, CounterexampleLayout> build_D2(int k, int m);

struct Counterexample {
  Digraph digraph;
  LinkageInstance instance;
  CounterexampleLayout layout;
};

Counterexample build_counterexample(int k, int m,
                                    ExcludedVertex excluded = ExcludedVertex::KthVertex);

/// Name of every construction rule that prescribes the arc u->v. A correct
/// construction has exactly one rule per arc and none per non-arc.
std::vector<std::string> arc_rules(const CounterexampleLayout& layout, Vertex u, Vertex v);

struct AuditResult {
  std::size_t arcs_checked = 0;
  std::vector<std::string> deviations;
  bool ok() const { return deviations.empty(); }
};

/// Exhaustive comparison of d against the rule set, capped at `max_report`
/// listed deviations.
AuditResult audit_construction(const Digraph& d, const CounterexampleLayout& layout,
                               std::size_t max_report = 20);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Inconclusive;
  std::string anchor;
  std::string detail;
  double seconds = 0;
};

struct VerificationReport {
  int k = 0;
  int m = 0;
  ExcludedVertex excluded = ExcludedVertex::KthVertex;
  int min_semidegree = 0;
  int connectivity = 0;
  std::uint64_t search_nodes = 0;
  CheckResult semidegree;
  CheckResult connected;
  CheckResult not_linked;
  std::vector<std::string> deviations;
  Verdict overall() const;
};

/// Runs the three checks concurrently: minimum semidegree >= floor(m/2),
/// vertex connectivity >= 2k, and exhaustive search refuting the designated
/// linkage. Deviations from the construction rules are listed separately.
VerificationReport verify_counterexample(const Digraph& d, const LinkageInstance& inst, int k,
                                         int m, std::uint64_t budget,
                                         ExcludedVertex excluded = ExcludedVertex::KthVertex);

nlohmann::json to_json(const CounterexampleLayout& layout);
CounterexampleLayout layout_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VerificationReport& report);

}  // namespace linkage
