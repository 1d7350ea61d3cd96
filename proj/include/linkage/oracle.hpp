#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "linkage/connectivity.hpp"
#include "linkage/digraph.hpp"

namespace linkage {

/// Terminal pairs (x[i], y[i]); all 2k terminals distinct.
struct LinkageInstance {
  std::vector<Vertex> x;
  std::vector<Vertex> y;

  int k() const { return static_cast<int>(x.size()); }
  /// Throws GraphError on size mismatch, duplicates or out-of-range ids.
  void validate(int n) const;
  bool operator==(const LinkageInstance&) const = default;
};

/// Exhaustive search completed without finding a linkage.
struct Infeasible {
  std::uint64_t nodes = 0;
};

/// Search stopped at the node budget; nothing is known.
struct BudgetExhausted {
  std::uint64_t nodes = 0;
};

using LinkageResult = std::variant<PathSystem, Infeasible, BudgetExhausted>;

/// Empty when `ps` links every x[i] to y[i] by pairwise disjoint paths.
std::string check_linkage(const Digraph& d, const LinkageInstance& inst, const PathSystem& ps);

/// Exact search for a linkage. Paths are grown one pair at a time by
/// depth-first extension. Only chordless paths are explored (a chord could be
/// shortcut without touching other paths), and a state is dropped as soon as
/// some open pair loses reachability in the residual digraph.
LinkageResult find_linkage_exact(const Digraph& d, const LinkageInstance& inst,
                                 std::uint64_t budget);

struct KLinked {};
struct CounterTuple {
  LinkageInstance instance;
};
using KLinkedResult = std::variant<KLinked, CounterTuple, BudgetExhausted>;

/// Checks every ordered 2k-tuple of distinct vertices in lexicographic order.
/// `budget` applies to each tuple separately.
KLinkedResult is_k_linked(const Digraph& d, int k, std::uint64_t budget);

}  // namespace linkage
