#include "linkage/reroute.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace linkage {

namespace {

// Which subdivision path each interior vertex belongs to.
struct FIndex {
  std::vector<std::pair<Vertex, Vertex>> ends;
  std::vector<const Path*> paths;
  std::vector<int> path_of;  // -1 for branch and outside vertices
  std::vector<int> pos;
  VertexMask branch;

  FIndex(int n, const Subdivision& f) : path_of(n, -1), pos(n, -1), branch(make_mask(n, f.branch)) {
    for (const auto& [key, p] : f.paths) {
      int id = static_cast<int>(paths.size());
      ends.push_back(key);
      paths.push_back(&p);
      for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        path_of[p[i]] = id;
        pos[p[i]] = static_cast<int>(i);
      }
    }
  }
};

// Vertex -> (path index, position) for a family of subpaths.
struct Owners {
  std::vector<int> who, at;
  explicit Owners(int n) : who(n, -1), at(n, -1) {}
  void clear() {
    std::fill(who.begin(), who.end(), -1);
    std::fill(at.begin(), at.end(), -1);
  }
  void add(int idx, const Path& q, int from, int to) {
    for (int p = from; p <= to; ++p) {
      who[q[p]] = idx;
      at[q[p]] = p;
    }
  }
};

Path concat(Path a, const Path& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  a.insert(a.end(), b.begin() + (a.back() == b.front() ? 1 : 0), b.end());
  return a;
}

class Rerouter {
 public:
  Rerouter(const Digraph& d, const Subdivision& f, const PathSystem& q)
      : d_(d), f_(f), q_(q), fx_(d.size(), f), r_(static_cast<int>(q.paths.size())) {
    tr_.pre_cut.resize(r_);
    tr_.pre_branch.assign(r_, -1);
    tr_.pre_tail.assign(r_, {});
    tr_.post_cut.assign(r_, 0);
    tr_.post_branch.assign(r_, -1);
    tr_.post_end.assign(r_, -1);
    tr_.post_head.assign(r_, {});
    tr_.accept_cut.assign(r_, 0);
    tr_.accept_index.assign(r_, -1);
    tr_.rule.assign(r_, 0);
    tr_.origin_index.assign(r_, -1);
    for (int i = 0; i < r_; ++i) tr_.pre_cut[i] = len(i) - 1;
  }

  const RerouteTrace& trace() const { return tr_; }

  int len(int i) const { return static_cast<int>(q_.paths[i].size()); }
  const Path& qp(int i) const { return q_.paths[i]; }

  // Earliest pre-good cut of path i strictly before its current cut.
  struct PreCut {
    Vertex b;
    Path tail;
  };

  std::optional<PreCut> pre_candidate(int i, int p, const Owners& own) const {
    const Vertex f = qp(i)[p];
    auto taken = [&](Vertex b) {
      for (int j = 0; j < r_; ++j)
        if (j != i && tr_.pre_branch[j] == b) return true;
      return false;
    };
    if (fx_.branch[f]) {
      if (taken(f)) return std::nullopt;
      return PreCut{f, {f}};
    }
    int e = fx_.path_of[f];
    if (e < 0) return std::nullopt;
    const Path& sp = *fx_.paths[e];
    Path tail(sp.begin() + fx_.pos[f], sp.end());
    if (taken(tail.back())) return std::nullopt;
    for (std::size_t t = 1; t < tail.size(); ++t) {
      Vertex x = tail[t];
      if (own.who[x] == -1) continue;
      if (own.who[x] == i && own.at[x] > p) continue;
      return std::nullopt;
    }
    return PreCut{tail.back(), std::move(tail)};
  }

  void prefix_owners(Owners& own) const {
    own.clear();
    for (int j = 0; j < r_; ++j) own.add(j, qp(j), 0, tr_.pre_cut[j]);
  }

  // Returns true if some prefix could still be shortened.
  bool prefix_step() {
    Owners own(d_.size());
    bool changed = false;
    for (int i = 0; i < r_; ++i) {
      prefix_owners(own);
      for (int p = 0; p < tr_.pre_cut[i]; ++p) {
        if (auto c = pre_candidate(i, p, own)) {
          tr_.pre_cut[i] = p;
          tr_.pre_branch[i] = c->b;
          tr_.pre_tail[i] = std::move(c->tail);
          changed = true;
          break;
        }
      }
    }
    return changed;
  }

  void compute_prefixes() {
    while (prefix_step()) {
    }
  }

  VertexMask non_pre_useful() const {
    VertexMask m = fx_.branch;
    for (Vertex b : tr_.pre_branch)
      if (b >= 0) m[b] = 0;
    return m;
  }

  struct PostCut {
    Vertex c, dd;
    Path head;
  };

  std::optional<PostCut> post_candidate(int i, int p, const Owners& own, const VertexMask& free) const {
    const Vertex t = qp(i)[p];
    auto taken = [&](Vertex c) {
      for (int j = 0; j < r_; ++j)
        if (j != i && tr_.post_branch[j] == c) return true;
      return false;
    };
    if (fx_.branch[t]) {
      if (!free[t] || taken(t)) return std::nullopt;
      for (Vertex g : f_.branch)
        if (g != t && free[g]) return PostCut{t, g, {t}};
      return std::nullopt;
    }
    int e = fx_.path_of[t];
    if (e < 0) return std::nullopt;
    auto [c, dd] = fx_.ends[e];
    if (!free[c] || !free[dd] || taken(c)) return std::nullopt;
    const Path& sp = *fx_.paths[e];
    Path head(sp.begin(), sp.begin() + fx_.pos[t] + 1);
    for (std::size_t h = 0; h + 1 < head.size(); ++h) {
      Vertex x = head[h];
      if (own.who[x] == -1) continue;
      if (own.who[x] == i && own.at[x] < p) continue;
      return std::nullopt;
    }
    return PostCut{c, dd, std::move(head)};
  }

  void suffix_owners(Owners& own) const {
    own.clear();
    for (int j = 0; j < r_; ++j) own.add(j, qp(j), tr_.post_cut[j], len(j) - 1);
  }

  bool suffix_step(const VertexMask& free) {
    Owners own(d_.size());
    bool changed = false;
    for (int i = 0; i < r_; ++i) {
      suffix_owners(own);
      for (int p = len(i) - 1; p > tr_.post_cut[i]; --p) {
        if (auto c = post_candidate(i, p, own, free)) {
          tr_.post_cut[i] = p;
          tr_.post_branch[i] = c->c;
          tr_.post_end[i] = c->dd;
          tr_.post_head[i] = std::move(c->head);
          changed = true;
          break;
        }
      }
    }
    return changed;
  }

  void compute_suffixes(const VertexMask& free) {
    while (suffix_step(free)) {
    }
  }

  bool proper_prefix(int i) const { return tr_.pre_branch[i] >= 0; }

  // Prefix trees: the prefix, its useful tail, and the subdivision paths from
  // the useful branch vertex to every non-useful branch vertex.
  void build_trees(const VertexMask& free) {
    parent_.assign(r_, {});
    for (int i = 0; i < r_; ++i) {
      if (!proper_prefix(i)) continue;
      auto& par = parent_[i];
      par.assign(d_.size(), -2);
      Path root(qp(i).begin(), qp(i).begin() + tr_.pre_cut[i] + 1);
      root = concat(root, tr_.pre_tail[i]);
      Vertex prev = -1;
      for (Vertex v : root) {
        par[v] = prev;
        prev = v;
      }
      const Vertex b = tr_.pre_branch[i];
      for (Vertex g : f_.branch) {
        if (g == b || !free[g]) continue;
        const Path& fan = f_.path(b, g);
        for (std::size_t t = 1; t < fan.size(); ++t)
          if (par[fan[t]] == -2) par[fan[t]] = fan[t - 1];
      }
    }
  }

  bool in_tree(int i, Vertex x) const { return !parent_[i].empty() && parent_[i][x] != -2; }

  Path tree_route(int i, Vertex x) const {
    Path p;
    for (Vertex v = x; v != -1; v = parent_[i][v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
  }

  void accept_owners(Owners& own) const {
    own.clear();
    for (int j = 0; j < r_; ++j) own.add(j, qp(j), tr_.accept_cut[j], len(j) - 1);
  }

  bool accept_step() {
    Owners own(d_.size());
    bool changed = false;
    for (int j = 0; j < r_; ++j) {
      accept_owners(own);
      const int lo = tr_.accept_cut[j] + (tr_.accept_index[j] >= 0 ? 1 : 0);
      bool done = false;
      for (int p = len(j) - 1; p >= lo && !done; --p) {
        const Vertex x = qp(j)[p];
        for (int i = 0; i < r_ && !done; ++i) {
          if (!in_tree(i, x)) continue;
          bool used = false;
          for (int k = 0; k < r_; ++k)
            if (k != j && tr_.accept_index[k] == i) used = true;
          if (used) continue;
          Path route = tree_route(i, x);
          bool ok = true;
          for (std::size_t t = 0; t + 1 < route.size() && ok; ++t) {
            Vertex v = route[t];
            if (own.who[v] == -1) continue;
            if (own.who[v] == j && own.at[v] < p) continue;
            ok = false;
          }
          if (!ok) continue;
          tr_.accept_cut[j] = p;
          tr_.accept_index[j] = i;
          changed = done = true;
        }
      }
    }
    return changed;
  }

  void compute_accepted() {
    for (int j = 0; j < r_; ++j) tr_.accept_cut[j] = tr_.post_cut[j];
    while (accept_step()) {
    }
  }

  std::optional<std::string> reconnect(std::vector<Path>& out) {
    out.assign(r_, {});
    std::vector<char> k1(r_, 1), k2(r_, 1);
    for (int i = 0; i < r_; ++i) {
      if (proper_prefix(i)) continue;
      out[i] = qp(i);
      tr_.rule[i] = 1;
      tr_.origin_index[i] = i;
      k1[i] = k2[i] = 0;
    }
    for (int j = 0; j < r_; ++j) {
      int i = tr_.accept_index[j];
      if (i < 0 || !k1[i] || !k2[j]) continue;
      Path head = tree_route(i, qp(j)[tr_.accept_cut[j]]);
      out[j] = concat(head, Path(qp(j).begin() + tr_.accept_cut[j], qp(j).end()));
      tr_.rule[j] = 2;
      tr_.origin_index[j] = i;
      k1[i] = k2[j] = 0;
    }
    std::vector<int> rest1, rest2;
    for (int i = 0; i < r_; ++i) {
      if (k1[i]) rest1.push_back(i);
      if (k2[i]) rest2.push_back(i);
    }
    for (std::size_t t = 0; t < rest1.size(); ++t) {
      int i = rest1[t], j = rest2[t];
      if (tr_.post_branch[j] < 0)
        return "path " + std::to_string(j) + " has no post-useful entry for the third rule";
      Path p(qp(i).begin(), qp(i).begin() + tr_.pre_cut[i] + 1);
      p = concat(p, tr_.pre_tail[i]);
      p = concat(p, f_.path(tr_.pre_branch[i], tr_.post_branch[j]));
      p = concat(p, tr_.post_head[j]);
      p = concat(p, Path(qp(j).begin() + tr_.post_cut[j], qp(j).end()));
      out[j] = std::move(p);
      tr_.rule[j] = 3;
      tr_.origin_index[j] = i;
    }
    return std::nullopt;
  }

  RerouteTrace& trace_mut() { return tr_; }

 private:
  const Digraph& d_;
  const Subdivision& f_;
  const PathSystem& q_;
  FIndex fx_;
  int r_;
  RerouteTrace tr_;
  std::vector<std::vector<Vertex>> parent_;
};

std::string check_inputs(const Digraph& d, const Subdivision& f, const PathSystem& q,
                         RerouteVariant variant) {
  if (auto e = check_subdivision(d, f); !e.empty()) return "subdivision: " + e;
  if (q.paths.empty()) return "empty path system";
  if (!q.endpoint_disjoint) return "path system must be fully disjoint";
  if (auto e = check_path_system(d, q); !e.empty()) return "path system: " + e;
  VertexMask in_f = make_mask(d.size(), f.vertices());
  VertexMask branch = make_mask(d.size(), f.branch);
  for (const auto& p : q.paths) {
    if (in_f[p.back()]) return "target " + std::to_string(p.back()) + " lies on the subdivision";
    if (variant == RerouteVariant::Moreover && !branch[p.front()])
      return "origin " + std::to_string(p.front()) + " is not a branch vertex";
  }
  return {};
}

}  // namespace

RerouteOutcome free_subdivision(const Digraph& d, const Subdivision& f, const PathSystem& q,
                                int freed_min, RerouteVariant variant) {
  if (auto e = check_inputs(d, f, q, variant); !e.empty()) throw GraphError(e);
  Rerouter rr(d, f, q);
  const int r = static_cast<int>(q.paths.size());
  RerouteResult res;
  res.variant = variant;
  auto failure = [&](std::string stage, std::string msg) {
    return RerouteFailure{std::move(stage), std::move(msg), rr.trace()};
  };

  VertexMask free;
  std::vector<Path> out;
  if (variant == RerouteVariant::Standard) {
    rr.compute_prefixes();
    free = rr.non_pre_useful();
    rr.compute_suffixes(free);
    rr.build_trees(free);
    rr.compute_accepted();
    if (auto err = rr.reconnect(out)) return failure("reconnect", *err);
  } else {
    free = make_mask(d.size(), f.branch);
    rr.compute_suffixes(free);
    out.resize(r);
    auto& tr = rr.trace_mut();
    for (int i = 0; i < r; ++i) {
      Path tail(q.paths[i].begin() + tr.post_cut[i], q.paths[i].end());
      out[i] = tr.post_branch[i] >= 0 ? concat(tr.post_head[i], tail) : tail;
      tr.accept_cut[i] = tr.post_cut[i];
      tr.rule[i] = 0;
      tr.origin_index[i] = i;
    }
  }

  res.trace = rr.trace();
  res.q_hat.paths = out;
  for (const auto& p : out) res.origins.push_back(p.front());
  VertexMask on_q = make_mask(d.size(), res.q_hat.vertices());
  VertexMask useful(d.size(), 0);
  for (int i = 0; i < r; ++i) {
    if (res.trace.pre_branch[i] >= 0) useful[res.trace.pre_branch[i]] = 1;
    if (res.trace.post_branch[i] >= 0) useful[res.trace.post_branch[i]] = 1;
  }
  for (Vertex v : f.branch)
    if (!useful[v] && !on_q[v]) res.s_prime.push_back(v);

  if (auto e = audit_reroute(d, f, q, freed_min, res); !e.empty()) return failure("audit", e);
  return res;
}

std::string audit_reroute(const Digraph& d, const Subdivision& f, const PathSystem& q,
                          int freed_min, const RerouteResult& r) {
  const int n = d.size();
  const int k = static_cast<int>(q.paths.size());
  if (static_cast<int>(r.q_hat.paths.size()) != k) return "wrong number of paths";
  if (!r.q_hat.endpoint_disjoint) return "output must be fully disjoint";
  if (auto e = check_path_system(d, r.q_hat); !e.empty()) return "output: " + e;
  std::vector<Vertex> want_origins, got_origins;
  for (int j = 0; j < k; ++j) {
    if (r.q_hat.paths[j].back() != q.paths[j].back())
      return "output path " + std::to_string(j) + " ends at the wrong target";
    want_origins.push_back(q.paths[j].front());
    got_origins.push_back(r.q_hat.paths[j].front());
  }
  std::sort(want_origins.begin(), want_origins.end());
  std::sort(got_origins.begin(), got_origins.end());
  VertexMask branch = make_mask(n, f.branch);
  if (r.variant == RerouteVariant::Standard) {
    if (want_origins != got_origins) return "origins changed";
  } else {
    for (Vertex o : got_origins)
      if (!branch[o]) return "new origin " + std::to_string(o) + " is not a branch vertex";
  }

  VertexMask on_q = make_mask(n, r.q_hat.vertices());
  if (static_cast<int>(r.s_prime.size()) < freed_min)
    return "only " + std::to_string(r.s_prime.size()) + " freed branch vertices, need " +
           std::to_string(freed_min);
  for (Vertex v : r.s_prime) {
    if (!branch[v]) return "freed vertex " + std::to_string(v) + " is not a branch vertex";
    if (on_q[v]) return "freed vertex " + std::to_string(v) + " lies on the output";
  }
  for (Vertex u : r.s_prime)
    for (Vertex v : r.s_prime) {
      if (u == v) continue;
      for (Vertex x : f.path(u, v))
        if (on_q[x])
          return "subdivision path " + std::to_string(u) + "->" + std::to_string(v) +
                 " meets the output at " + std::to_string(x);
    }

  if (r.variant == RerouteVariant::Moreover) {
    VertexMask is_origin = make_mask(n, got_origins);
    for (Vertex u : f.branch) {
      if (is_origin[u]) continue;
      for (Vertex v : f.branch) {
        if (u == v) continue;
        for (Vertex x : f.path(u, v)) {
          if (!on_q[x]) continue;
          if (x == v && is_origin[v]) continue;
          return "subdivision path " + std::to_string(u) + "->" + std::to_string(v) +
                 " meets the output at " + std::to_string(x);
        }
      }
    }
    return {};
  }

  // Prefixes avoid every subdivision path into a branch vertex that is not
  // pre-useful, except at their own useful branch vertex.
  const auto& tr = r.trace;
  VertexMask pre_useful(n, 0);
  for (Vertex b : tr.pre_branch)
    if (b >= 0) pre_useful[b] = 1;
  for (int i = 0; i < k; ++i) {
    VertexMask on_prefix(n, 0);
    for (int p = 0; p <= tr.pre_cut[i]; ++p) on_prefix[q.paths[i][p]] = 1;
    for (const auto& [key, path] : f.paths) {
      if (pre_useful[key.second]) continue;
      for (Vertex x : path)
        if (on_prefix[x] && x != tr.pre_branch[i])
          return "prefix " + std::to_string(i) + " meets subdivision path " +
                 std::to_string(key.first) + "->" + std::to_string(key.second);
    }
  }
  // Helpful paths are disjoint from each other, from kept paths, and from
  // every re-cut suffix.
  std::vector<int> helpful_owner(n, -1);
  for (int j = 0; j < k; ++j) {
    if (tr.rule[j] != 2) continue;
    const Path& p = r.q_hat.paths[j];
    const Vertex start = q.paths[j][tr.accept_cut[j]];
    for (Vertex x : p) {
      if (x == start) break;
      if (helpful_owner[x] != -1) return "helpful paths overlap";
      helpful_owner[x] = j;
    }
  }
  for (int j = 0; j < k; ++j) {
    int from = tr.rule[j] == 1 ? 0 : tr.accept_cut[j];
    for (int p = from; p < static_cast<int>(q.paths[j].size()); ++p)
      if (helpful_owner[q.paths[j][p]] != -1)
        return "suffix " + std::to_string(j) + " meets a helpful path";
  }
  return {};
}

}  // namespace linkage
