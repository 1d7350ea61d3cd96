#include "linkage/oracle.hpp"

#include <algorithm>
#include <string>
#include <optional>

namespace linkage {

void LinkageInstance::validate(int n) const {
  if (x.size() != y.size()) throw GraphError("terminal lists differ in length");
  VertexMask seen(n, 0);
  for (const auto* side : {&x, &y}) {
    for (Vertex v : *side) {
      if (v < 0 || v >= n) throw GraphError("terminal " + std::to_string(v) + " out of range");
      if (seen[v]) throw GraphError("duplicate terminal " + std::to_string(v));
      seen[v] = 1;
    }
  }
}

std::string check_linkage(const Digraph& d, const LinkageInstance& inst, const PathSystem& ps) {
  if (static_cast<int>(ps.paths.size()) != inst.k()) return "wrong number of paths";
  if (auto err = check_path_system(d, ps); !err.empty()) return err;
  for (int i = 0; i < inst.k(); ++i) {
    const Path& p = ps.paths[i];
    if (p.front() != inst.x[i] || p.back() != inst.y[i])
      return "path " + std::to_string(i) + " has wrong endpoints";
  }
  return {};
}

namespace {

class Search {
 public:
  Search(const Digraph& d, const LinkageInstance& inst, std::uint64_t budget)
      : d_(d), inst_(inst), budget_(budget), used_(d.size(), 0), open_(inst.k(), 1),
        paths_(inst.k()), seen_(d.size(), 0) {
    for (Vertex v : inst.x) used_[v] = 1;
    for (Vertex v : inst.y) used_[v] = 1;
  }

  LinkageResult run() {
    if (solve()) return PathSystem{paths_, true};
    if (exhausted_) return BudgetExhausted{nodes_};
    return Infeasible{nodes_};
  }

 private:
  bool tick() {
    if (++nodes_ > budget_) exhausted_ = true;
    return !exhausted_;
  }

  // Number of vertices reachable from `from` through unused vertices, or -1
  // when `to` is not among them. Fills parent_ for path recovery.
  int frontier(Vertex from, Vertex to) {
    std::fill(seen_.begin(), seen_.end(), 0);
    queue_.clear();
    queue_.push_back(from);
    seen_[from] = 1;
    bool hit = false;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      Vertex u = queue_[head];
      if (u == to) {
        hit = true;
        continue;
      }
      for (Vertex w : d_.out_neighbors(u)) {
        if (seen_[w] || (used_[w] && w != to)) continue;
        seen_[w] = 1;
        parent_[w] = u;
        queue_.push_back(w);
      }
    }
    return hit ? static_cast<int>(queue_.size()) : -1;
  }

  bool solve() {
    if (!tick()) return false;
    int chosen = -1, best = 0, open_count = 0;
    for (int j = 0; j < inst_.k(); ++j) {
      if (!open_[j]) continue;
      ++open_count;
      int f = frontier(inst_.x[j], inst_.y[j]);
      if (f < 0) return false;
      if (chosen < 0 || f < best) {
        chosen = j;
        best = f;
      }
    }
    if (open_count == 0) return true;
    if (open_count == 1) {
      parent_.assign(d_.size(), -1);
      frontier(inst_.x[chosen], inst_.y[chosen]);
      Path p;
      for (Vertex v = inst_.y[chosen]; v != inst_.x[chosen]; v = parent_[v]) p.push_back(v);
      p.push_back(inst_.x[chosen]);
      std::reverse(p.begin(), p.end());
      paths_[chosen] = std::move(p);
      open_[chosen] = 0;
      return true;
    }
    open_[chosen] = 0;
    paths_[chosen] = {inst_.x[chosen]};
    std::vector<int> chords(d_.size(), 0);
    if (extend(chosen, chords)) return true;
    open_[chosen] = 1;
    paths_[chosen].clear();
    return false;
  }

  // chords[v] counts arcs into v from path vertices other than the head.
  bool extend(int j, std::vector<int>& chords) {
    if (!tick()) return false;
    Path& path = paths_[j];
    const Vertex head = path.back(), target = inst_.y[j];
    if (d_.has_arc(head, target)) {
      path.push_back(target);
      if (solve()) return true;
      path.pop_back();
      return false;
    }
    if (frontier(head, target) < 0) return false;
    for (int i = 0; i < inst_.k(); ++i)
      if (open_[i] && frontier(inst_.x[i], inst_.y[i]) < 0) return false;

    std::vector<Vertex> candidates;
    for (Vertex v : d_.out_neighbors(head))
      if (!used_[v] && chords[v] == 0) candidates.push_back(v);
    for (Vertex w : d_.out_neighbors(head)) ++chords[w];
    bool found = false;
    for (Vertex v : candidates) {
      used_[v] = 1;
      path.push_back(v);
      found = extend(j, chords);
      if (found) break;
      path.pop_back();
      used_[v] = 0;
      if (exhausted_) break;
    }
    for (Vertex w : d_.out_neighbors(head)) --chords[w];
    return found;
  }

  const Digraph& d_;
  const LinkageInstance& inst_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  VertexMask used_;
  std::vector<char> open_;
  std::vector<Path> paths_;
  VertexMask seen_;
  std::vector<Vertex> queue_;
  std::vector<Vertex> parent_ = std::vector<Vertex>(d_.size(), -1);
};

}  // namespace

LinkageResult find_linkage_exact(const Digraph& d, const LinkageInstance& inst,
                                 std::uint64_t budget) {
  inst.validate(d.size());
  if (inst.k() == 0) return PathSystem{};
  return Search(d, inst, budget).run();
}

KLinkedResult is_k_linked(const Digraph& d, int k, std::uint64_t budget) {
  if (d.size() < 2 * k) throw GraphError("is_k_linked needs n >= 2k");
  std::vector<Vertex> tuple;
  VertexMask taken(d.size(), 0);
  bool any_exhausted = false;
  std::uint64_t exhausted_nodes = 0;
  std::optional<CounterTuple> counter;

  auto rec = [&](auto&& self) -> void {
    if (counter) return;
    if (static_cast<int>(tuple.size()) == 2 * k) {
      LinkageInstance inst{{tuple.begin(), tuple.begin() + k}, {tuple.begin() + k, tuple.end()}};
      auto r = find_linkage_exact(d, inst, budget);
      if (std::holds_alternative<Infeasible>(r)) {
        counter = CounterTuple{inst};
      } else if (auto* b = std::get_if<BudgetExhausted>(&r)) {
        any_exhausted = true;
        exhausted_nodes = std::max(exhausted_nodes, b->nodes);
      }
      return;
    }
    for (Vertex v = 0; v < d.size(); ++v) {
      if (taken[v]) continue;
      taken[v] = 1;
      tuple.push_back(v);
      self(self);
      tuple.pop_back();
      taken[v] = 0;
    }
  };
  rec(rec);
  if (counter) return *counter;
  if (any_exhausted) return BudgetExhausted{exhausted_nodes};
  return KLinked{};
}

}  // namespace linkage
