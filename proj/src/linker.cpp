#include "linkage/linker.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "linkage/io.hpp"

namespace linkage {

LinkerParams LinkerParams::asymptotic(int k) {
  LinkerParams p;
  const std::int64_t k64 = k;
  p.s = 20 * k;
  p.ell = 2;
  p.w_size = (10000000 * k64 * k64 * k64 * k64 - 2 * k64) / k64;
  p.u_block = 1000000 * k64 * k64 * k64;
  p.v_part = 16 * (k + 1);
  p.freed_min = 17 * k;
  p.case1_in_fan = 7 * k;
  p.v_out_fan = 7 * k;
  p.chain_direct_fan = 5 * k;
  p.chain_hop_fan = 2 * k;
  p.q2_in_fan = 10 * k;
  return p;
}

LinkerParams LinkerParams::scaled(int k) {
  LinkerParams p;
  p.s = 5 * k;
  p.freed_min = std::max(1, p.s - 2 * (k + 1));
  p.v_part = 2 * (k + 1);
  p.chain_direct_fan = (p.s + 3) / 4;
  p.q2_in_fan = (p.s + 1) / 2;
  return p;
}

std::string LinkerParams::validate() const {
  if (s < 2) return "s must be at least 2";
  if (ell < 2) return "ell must be at least 2";
  if (w_size < 0 || u_block < 0) return "sizes must be non-negative";
  if (v_part < 1 || splits_factor < 1) return "part sizes must be positive";
  if (freed_min < 0) return "freed_min must be non-negative";
  if (v_prime_ratio <= 0 || v_prime_ratio > 1) return "v_prime_ratio must lie in (0, 1]";
  if (case1_in_fan < 1 || v_out_fan < 1 || chain_direct_fan < 1 || chain_hop_fan < 1 ||
      q2_in_fan < 1)
    return "fan sizes must be positive";
  if (release_hits < 2) return "release_hits must be at least 2";
  if (budget < 1) return "budget must be positive";
  return {};
}

std::vector<Vertex> RoleSystem::vertices() const {
  std::set<Vertex> all;
  for (const auto& p : paths) all.insert(p.begin(), p.end());
  all.insert(special.begin(), special.end());
  return {all.begin(), all.end()};
}

namespace {

LinkerFailure fail(std::string stage, std::string anchor, std::string message) {
  return LinkerFailure{std::move(stage), std::move(anchor), std::move(message)};
}

std::string str(const std::vector<Vertex>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

int arcs_into(const Digraph& d, const std::vector<Vertex>& from, Vertex v) {
  int c = 0;
  for (Vertex u : from) c += d.has_arc(u, v);
  return c;
}

int arcs_out(const Digraph& d, Vertex v, const std::vector<Vertex>& to) {
  int c = 0;
  for (Vertex u : to) c += d.has_arc(v, u);
  return c;
}

std::vector<Vertex> minus(const std::vector<Vertex>& a, const VertexMask& drop) {
  std::vector<Vertex> out;
  for (Vertex v : a)
    if (!drop[v]) out.push_back(v);
  return out;
}

// Last vertex of p lying in `set`, as a position; -1 if none.
int last_hit(const Path& p, const VertexMask& set) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (set[p[i]]) return i;
  return -1;
}

int hits(const Path& p, const VertexMask& set) {
  int c = 0;
  for (Vertex v : p) c += set[v];
  return c;
}

}  // namespace

Staged<Configuration> build_configuration(const Digraph& d, const LinkageInstance& inst,
                                          const LinkerParams& params) {
  const int n = d.size();
  const int k = inst.k();
  Configuration cfg;
  cfg.k = k;
  std::vector<Vertex> terms = inst.x;
  terms.insert(terms.end(), inst.y.begin(), inst.y.end());
  const VertexMask term = make_mask(n, terms);

  std::int64_t w_size = params.w_size;
  if (w_size == 0) {
    std::int64_t low = n;
    for (Vertex x : inst.x) {
      std::int64_t c = 0;
      for (Vertex v : d.out_neighbors(x)) c += !term[v];
      low = std::min(low, c);
    }
    w_size = low / k;
  }
  if (w_size < params.s)
    return fail("degree", "disjoint out-neighbourhoods W_i of the terminals",
                "per-terminal budget " + std::to_string(w_size) + " is below s = " +
                    std::to_string(params.s));
  VertexMask taken = term;
  cfg.w.resize(k);
  for (int i = 0; i < k; ++i) {
    for (Vertex v : d.out_neighbors(inst.x[i])) {
      if (static_cast<std::int64_t>(cfg.w[i].size()) == w_size) break;
      if (taken[v]) continue;
      taken[v] = 1;
      cfg.w[i].push_back(v);
    }
    if (static_cast<std::int64_t>(cfg.w[i].size()) < w_size)
      return fail("degree", "disjoint out-neighbourhoods W_i of the terminals",
                  "x_" + std::to_string(i + 1) + " has only " + std::to_string(cfg.w[i].size()) +
                      " free out-neighbours, need " + std::to_string(w_size));
  }

  // Terminals whose W_i hosts a subdivision, with the subdivision.
  std::map<int, Subdivision> found;
  VertexMask occupied = term;
  for (int i = 0; i < k; ++i) {
    std::vector<Vertex> host = minus(cfg.w[i], occupied);
    if (static_cast<int>(host.size()) < params.s) continue;
    VertexMask allowed(n);
    for (Vertex v = 0; v < n; ++v) allowed[v] = !occupied[v];
    auto r = find_subdivision(d, host, params.s, params.ell, allowed, params.window);
    if (auto* f = std::get_if<Subdivision>(&r)) {
      for (Vertex v : f->vertices()) occupied[v] = 1;
      found.emplace(i, std::move(*f));
    }
  }

  std::vector<int> j_terms;
  std::vector<std::vector<Vertex>> j_parts;
  for (;;) {
    j_terms.clear();
    for (int i = 0; i < k; ++i)
      if (!found.count(i)) j_terms.push_back(i);
    if (j_terms.empty()) break;
    std::int64_t u = params.u_block;
    if (u == 0) {
      u = w_size;
      for (int j : j_terms) u = std::min<std::int64_t>(u, minus(cfg.w[j], occupied).size());
    }
    std::vector<std::vector<Vertex>> blocks;
    for (int j : j_terms) {
      std::vector<Vertex> rest = minus(cfg.w[j], occupied);
      if (static_cast<std::int64_t>(rest.size()) < u)
        return fail("blowup", "blocks U_i of W'_i for splitting",
                    "W'_" + std::to_string(j + 1) + " has " + std::to_string(rest.size()) +
                        " vertices, need " + std::to_string(u));
      rest.resize(u);
      blocks.push_back(std::move(rest));
    }
    if (u < static_cast<std::int64_t>(params.s) * static_cast<std::int64_t>(blocks.size()) ||
        u < params.v_part)
      return fail("blowup", "blocks U_i of W'_i for splitting",
                  "block size " + std::to_string(u) + " too small for " +
                      std::to_string(blocks.size()) + " blocks");
    SplitParams sp{params.s, params.ell, params.v_part, params.splits_factor, params.window};
    SplitResult sr = split_to_tt_blowup(d, blocks, sp);
    if (auto* sf = std::get_if<SubdivisionFound>(&sr.outcome)) {
      const int j = j_terms[sf->block];
      for (Vertex v : sf->subdivision.vertices()) occupied[v] = 1;
      cfg.notes.push_back("splitting found a subdivision in W_" + std::to_string(j + 1));
      found.emplace(j, std::move(sf->subdivision));
      continue;
    }
    if (auto* fl = std::get_if<SplitFailure>(&sr.outcome))
      return fail("blowup", "splitting: transitive blow-up over the J blocks",
                  fl->stage + ": " + fl->message);
    const auto& tt = std::get<TTBlowup>(sr.outcome);
    std::vector<int> ordered;
    for (std::size_t p = 0; p < tt.parts.size(); ++p) {
      ordered.push_back(j_terms[tt.block_of[p]]);
      j_parts.push_back(tt.parts[p]);
    }
    j_terms = ordered;
    break;
  }

  // Auxiliary digraph on the I terminals and its Hamiltonian order.
  std::vector<int> i_terms;
  for (const auto& [i, f] : found) i_terms.push_back(i);
  const int l = static_cast<int>(i_terms.size());
  std::vector<Arc> h;
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b) {
      if (a == b) continue;
      const auto& sa = found.at(i_terms[a]).branch;
      const auto& sb = found.at(i_terms[b]).branch;
      int good = 0;
      for (Vertex u : sa) good += 4 * arcs_out(d, u, sb) >= static_cast<int>(sb.size());
      if (4 * good >= static_cast<int>(sa.size())) h.push_back({a, b});
    }
  Digraph hd(l, h);
  if (!is_semicomplete(hd))
    return fail("H_I", "the auxiliary digraph on the subdivisions is semicomplete",
                "some pair of branch sets has no quarter-dense direction");
  Path order = l > 0 ? hamiltonian_path(hd) : Path{};
  for (int a : order) {
    cfg.terminal.push_back(i_terms[a]);
    cfg.f.push_back(found.at(i_terms[a]));
  }
  for (const auto& [a, b] : h) {
    auto pa = std::find(order.begin(), order.end(), a) - order.begin();
    auto pb = std::find(order.begin(), order.end(), b) - order.begin();
    cfg.h_arcs.emplace_back(static_cast<int>(pa), static_cast<int>(pb));
  }
  std::sort(cfg.h_arcs.begin(), cfg.h_arcs.end());
  cfg.l = l;
  cfg.terminal.insert(cfg.terminal.end(), j_terms.begin(), j_terms.end());
  cfg.parts = j_parts;

  if (cfg.has_j()) {
    const auto& vk = cfg.parts.back();
    for (Vertex v : vk) {
      bool prime = true;
      if (l > 0) {
        const auto& sl = cfg.f.back().branch;
        prime = arcs_into(d, sl, v) >= params.v_prime_ratio * static_cast<double>(sl.size());
      }
      (prime ? cfg.v_k_prime : cfg.v_k_second).push_back(v);
    }
  }
  return cfg;
}

Staged<Selection> select_O_and_special(const Digraph& d, const Configuration& cfg,
                                       const LinkerParams&) {
  Selection sel;
  const int k = cfg.k;
  auto best_out = [&](const std::vector<Vertex>& set) {
    Vertex best = -1;
    int score = -1;
    for (Vertex v : set) {
      int c = arcs_out(d, v, set);
      if (c > score) score = c, best = v;
    }
    return best;
  };
  if (!cfg.has_j()) {
    sel.case_tag = 2;
    sel.source_set = cfg.f.back().branch;
  } else {
    const std::size_t vk = cfg.parts.back().size();
    if (cfg.l == 0 || 2 * cfg.v_k_prime.size() >= vk) {
      sel.case_tag = 1;
      sel.source_set = cfg.v_k_prime;
      sel.special = best_out(cfg.parts.front());
    } else {
      sel.case_tag = 2;
      sel.source_set = cfg.f.back().branch;
      sel.special = cfg.parts.size() == 1 ? best_out(cfg.v_k_second) : best_out(cfg.parts.front());
    }
    std::erase(sel.source_set, sel.special);
  }
  const std::size_t need = cfg.has_j() ? k + 1 : k;
  if (sel.source_set.size() < need)
    return fail("O-selection", "origin set O of k+1 vertices",
                "source set has " + std::to_string(sel.source_set.size()) + " vertices, need " +
                    std::to_string(need));
  return sel;
}

Staged<RoleSystem> route_to_targets(const Digraph& d, const LinkageInstance& inst,
                                    const Configuration& cfg, const Selection& sel) {
  std::vector<Vertex> sinks;
  for (int t : cfg.terminal) sinks.push_back(inst.y[t]);
  if (sel.special >= 0) sinks.push_back(sel.special);
  const int want = static_cast<int>(sinks.size());
  auto mr = menger_paths(d, sel.source_set, sinks, want, inst.x);
  if (auto* sep = std::get_if<Separator>(&mr))
    return fail("menger", "k+1 disjoint paths from O to Y and the special vertex avoiding X",
                "separator " + str(sep->vertices));
  const auto& ps = std::get<PathSystem>(mr);
  RoleSystem rs;
  rs.paths.resize(cfg.k);
  const VertexMask source = make_mask(d.size(), sel.source_set);
  for (const auto& p : ps.paths) {
    for (std::size_t i = 1; i < p.size(); ++i)
      if (source[p[i]])
        return fail("menger", "only the first vertex of each path lies in O",
                    "path re-enters the source set at " + std::to_string(p[i]));
    if (p.back() == sel.special) {
      rs.special = p;
      continue;
    }
    auto it = std::find(sinks.begin(), sinks.end(), p.back());
    rs.paths[it - sinks.begin()] = p;
  }
  return rs;
}

Staged<RoleSystem> free_and_release(const Digraph& d, const Configuration& cfg,
                                    const Selection& sel, const RoleSystem& q,
                                    const LinkerParams& params) {
  const int n = d.size();
  const int k = cfg.k;
  const int l = cfg.l;
  RoleSystem cur = q;
  cur.freed.assign(l, {});

  for (int i = 0; i < l; ++i) {
    PathSystem ps;
    ps.paths = cur.paths;
    if (!cur.special.empty()) ps.paths.push_back(cur.special);
    const bool moreover = sel.case_tag == 2 && i == l - 1;
    RerouteOutcome out;
    try {
      out = free_subdivision(d, cfg.f[i], ps, params.freed_min,
                             moreover ? RerouteVariant::Moreover : RerouteVariant::Standard);
    } catch (const GraphError& e) {
      return fail("reroute", "rerouting the path system off each subdivision",
                  "subdivision " + std::to_string(i + 1) + ": " + e.what());
    }
    if (auto* f = std::get_if<RerouteFailure>(&out))
      return fail("reroute", "rerouting the path system off each subdivision",
                  "subdivision " + std::to_string(i + 1) + " " + f->stage + ": " + f->message);
    auto& r = std::get<RerouteResult>(out);
    for (int j = 0; j < k; ++j) cur.paths[j] = r.q_hat.paths[j];
    if (!cur.special.empty()) cur.special = r.q_hat.paths[k];
    cur.freed[i] = r.s_prime;
  }
  if (!cfg.has_j()) return cur;

  const VertexMask before = make_mask(n, cur.vertices());
  const std::size_t vk = cfg.parts.back().size();
  std::int64_t steps = 0;
  for (int t = l; t < k; ++t) {
    const bool last = t == k - 1;
    if (last && 2 * cfg.v_k_second.size() <= vk) {
      cur.notes.push_back("release: last part skipped, V''_k is at most half of V_k");
      continue;
    }
    const auto& cond = last ? cfg.v_k_second : cfg.v_of(t);
    VertexMask count_set = make_mask(n, cond);
    if (t == l)
      for (Vertex v : cond) count_set[v] = count_set[v] && d.has_arc(sel.special, v);
    auto free_in = [&] {
      VertexMask on = make_mask(n, cur.vertices());
      int c = 0;
      for (Vertex v : cond) c += !on[v];
      return c;
    };
    const std::string stage = "release(" + std::to_string(t + 1) + ")";
    const char* anchor = "at least two free vertices in each part after the swaps";
    for (int have = free_in(); have < 2;) {
      if (++steps > params.budget) return fail("budget", anchor, "iteration budget exhausted");
      // Candidate paths: roles 0..k-1, then the special path as index k.
      int best = -1, best_hits = -1;
      for (int r = 0; r <= k; ++r) {
        const Path& p = r < k ? cur.paths[r] : cur.special;
        int h = hits(p, count_set);
        if (h > best_hits) best_hits = h, best = r;
      }
      if (best_hits < params.release_hits)
        return fail(stage, anchor,
                    "best path meets the part in " + std::to_string(best_hits) + " vertices, need " +
                        std::to_string(params.release_hits));
      Path& qp = best < k ? cur.paths[best] : cur.special;
      std::vector<int> pos;
      for (int i = 0; i < static_cast<int>(qp.size()) && static_cast<int>(pos.size()) < params.release_hits; ++i)
        if (count_set[qp[i]]) pos.push_back(i);
      const int p1 = pos.front(), p4 = pos.back();
      if (best == k) {
        qp.resize(p1 + 1);
      } else {
        const Vertex y_special = cur.special.back();
        if (!d.has_arc(y_special, qp[p4]))
          return fail(stage, anchor,
                      "no arc from the special vertex " + std::to_string(y_special) + " to " +
                          std::to_string(qp[p4]));
        Path joined = cur.special;
        joined.insert(joined.end(), qp.begin() + p4, qp.end());
        Path cut(qp.begin(), qp.begin() + p1 + 1);
        cur.paths[best] = std::move(joined);
        cur.special = std::move(cut);
      }
      const int now = free_in();
      cur.notes.push_back(stage + ": swapped, special vertex now " +
                          std::to_string(cur.special.back()));
      if (now <= have) return fail(stage, anchor, "swap released nothing");
      have = now;
    }
  }
  for (Vertex v : cur.vertices())
    if (!before[v])
      return fail("release", "the released system only uses vertices of the rerouted one",
                  "vertex " + std::to_string(v) + " is new");
  return cur;
}

namespace {

// Shared state of the final stage: which vertices are spoken for.
class Assembly {
 public:
  Assembly(const Digraph& d, const LinkageInstance& inst, const Configuration& cfg,
           const RoleSystem& q, const LinkerParams& params)
      : d_(d), inst_(inst), cfg_(cfg), params_(params), paths_(q.paths), special_(q.special),
        freed_(q.freed), used_(d.size(), 0), done_(cfg.k) {
    for (Vertex v : inst.x) used_[v] = 1;
    for (Vertex v : inst.y) used_[v] = 1;
  }

  bool blocked(Vertex v) const { return used_[v] || on_q_[v]; }
  void take(Vertex v) { used_[v] = 1; }
  void take(const Path& p) {
    for (Vertex v : p) used_[v] = 1;
  }
  void refresh() {
    on_q_.assign(d_.size(), 0);
    for (int r = 0; r < cfg_.k; ++r)
      if (done_[r].empty())
        for (Vertex v : paths_[r]) on_q_[v] = 1;
    for (Vertex v : special_) on_q_[v] = 1;
  }

  int free_count(const std::vector<Vertex>& set) const {
    int c = 0;
    for (Vertex v : set) c += !blocked(v);
    return c;
  }

  // Lowest free vertex of `set` that passes `ok`.
  template <class Pred>
  Vertex pick(const std::vector<Vertex>& set, Pred ok) const {
    for (Vertex v : set)
      if (!blocked(v) && ok(v)) return v;
    return -1;
  }

  // Walk from u (in S'_level, already taken) to some vertex of S'_l.
  std::variant<Path, LinkerFailure> chain(Vertex u, int level) {
    Path walk{u};
    const char* anchor = "disjoint chain walks from the freed sets to S'_l";
    for (Vertex cur = u; level < cfg_.l - 1; ++level) {
      const auto& next = freed_[level + 1];
      const auto& next_all = cfg_.s_of(level + 1);
      auto free_out = [&](Vertex v) {
        int c = 0;
        for (Vertex w : next) c += !blocked(w) && d_.has_arc(v, w);
        return c;
      };
      if (arcs_out(d_, cur, next_all) >= params_.chain_direct_fan) {
        Vertex to = pick(next, [&](Vertex w) { return d_.has_arc(cur, w); });
        if (to >= 0) {
          take(to);
          walk.push_back(to);
          cur = to;
          continue;
        }
      }
      bool moved = false;
      for (Vertex relay : freed_[level]) {
        if (relay == cur || blocked(relay)) continue;
        if (free_out(relay) < params_.chain_hop_fan) continue;
        const Path& sp = cfg_.f[level].path(cur, relay);
        bool clear = true;
        for (std::size_t i = 1; i < sp.size(); ++i) clear = clear && !blocked(sp[i]);
        if (!clear) continue;
        Vertex to = pick(next, [&](Vertex w) { return d_.has_arc(relay, w); });
        for (std::size_t i = 1; i < sp.size(); ++i) walk.push_back(sp[i]);
        walk.push_back(to);
        take(walk);
        cur = to;
        moved = true;
        break;
      }
      if (!moved)
        return fail("chain", anchor,
                    "walk from " + std::to_string(u) + " starves at level " +
                        std::to_string(level + 1));
    }
    return walk;
  }

  // Subdivision path inside F_l from a to b, if its interior is free.
  std::optional<Path> last_link(Vertex a, Vertex b) const {
    const Path& p = cfg_.f.back().path(a, b);
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
      if (blocked(p[i])) return std::nullopt;
    return p;
  }

  const Digraph& d_;
  const LinkageInstance& inst_;
  const Configuration& cfg_;
  const LinkerParams& params_;
  std::vector<Path> paths_;
  Path special_;
  std::vector<std::vector<Vertex>> freed_;
  VertexMask used_, on_q_;
  std::vector<Path> done_;  // by role
};

Path join(Path a, const Path& b) {
  a.insert(a.end(), b.begin() + (!a.empty() && !b.empty() && a.back() == b.front()), b.end());
  return a;
}

std::optional<LinkerFailure> case_one(Assembly& as) {
  const auto& cfg = as.cfg_;
  const Digraph& d = as.d_;
  const int k = cfg.k, l = cfg.l;
  const char* anchor = "case O in V'_k: paths x_i x_i^+ o_i and chain walks";
  as.refresh();
  for (int r = l; r < k; ++r) {
    const Vertex x = as.inst_.x[cfg.terminal[r]];
    const Path& q = as.paths_[r];
    const Vertex o = q.front();
    if (r == k - 1) {
      if (!d.has_arc(x, o)) return fail("case1", anchor, "x_k does not dominate its origin");
      as.done_[r] = join({x}, q);
      as.take(as.done_[r]);
      continue;
    }
    Vertex xp = as.pick(cfg.v_of(r), [&](Vertex v) { return d.has_arc(x, v) && d.has_arc(v, o); });
    if (xp < 0)
      return fail("case1", anchor, "no free vertex in V_" + std::to_string(r + 1) + " to reach o");
    as.take(xp);
    as.done_[r] = join({x, xp}, q);
    as.take(as.done_[r]);
  }
  if (l == 0) return std::nullopt;

  const auto& sl = as.freed_[l - 1];
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < l; ++r) {
    const Vertex o = as.paths_[r].front();
    int fan = 0;
    for (std::size_t z = 0; z < sl.size(); ++z)
      if (!as.blocked(sl[z]) && d.has_arc(sl[z], o)) {
        ++fan;
        edges.emplace_back(r, static_cast<int>(z));
      }
    if (fan < as.params_.case1_in_fan)
      return fail("case1", anchor,
                  "origin " + std::to_string(o) + " has " + std::to_string(fan) +
                      " free in-neighbours in S'_l");
  }
  auto m = hall_matching(l, static_cast<int>(sl.size()), edges);
  if (std::holds_alternative<HallViolation>(m))
    return fail("case1", anchor, "no matching from S'_l onto the I origins");
  const auto& match = std::get<std::vector<int>>(m);
  std::vector<Vertex> z(l);
  for (int r = 0; r < l; ++r) as.take(z[r] = sl[match[r]]);

  std::vector<Vertex> start(l);
  for (int r = 0; r < l; ++r) {
    const Vertex x = as.inst_.x[cfg.terminal[r]];
    start[r] = as.pick(as.freed_[r], [&](Vertex v) { return d.has_arc(x, v); });
    if (start[r] < 0)
      return fail("case1", anchor, "no free out-neighbour of x in S'_" + std::to_string(r + 1));
    as.take(start[r]);
  }
  for (int r = 0; r < l; ++r) {
    auto w = as.chain(start[r], r);
    if (auto* f = std::get_if<LinkerFailure>(&w)) return *f;
    const Path& walk = std::get<Path>(w);
    auto link = as.last_link(walk.back(), z[r]);
    if (!link) return fail("case1", anchor, "subdivision path to z_i is occupied");
    as.take(*link);
    Path p{as.inst_.x[cfg.terminal[r]]};
    p = join(p, walk);
    p = join(p, *link);
    as.done_[r] = join(p, as.paths_[r]);
  }
  return std::nullopt;
}

std::optional<LinkerFailure> case_two(Assembly& as, std::vector<std::string>& notes) {
  const auto& cfg = as.cfg_;
  const Digraph& d = as.d_;
  const auto& params = as.params_;
  const int n = d.size();
  const int k = cfg.k, l = cfg.l;
  const char* anchor = "case O in S_l: operations on paths meeting V''_k";
  auto x_of = [&](int r) { return as.inst_.x[cfg.terminal[r]]; };

  std::vector<int> j_rem, j_unuse, i_rem;
  for (int r = l; r < k; ++r) j_rem.push_back(r);
  if (cfg.has_j()) j_unuse.push_back(k - 1);
  for (int r = 0; r < l; ++r) i_rem.push_back(r);
  std::vector<Path> prefix(k);  // partial x -> S'_level paths
  std::vector<int> level(k, -1);
  VertexMask x_new(n, 0);
  const VertexMask v2 = make_mask(n, cfg.v_k_second);
  const auto& v2_list = cfg.v_k_second;

  as.refresh();
  auto erase = [](std::vector<int>& v, int r) { std::erase(v, r); };

  if (cfg.has_j()) {
    // Finish J paths through their last vertex in V''_k.
    while (as.free_count(v2_list) < static_cast<int>(j_rem.size())) {
      int chosen = -1, at = -1;
      for (int r : j_rem)
        if ((at = last_hit(as.paths_[r], v2)) >= 0) {
          chosen = r;
          break;
        }
      if (chosen < 0) break;
      const Path& q = as.paths_[chosen];
      const Vertex v = q[at];
      const Vertex x = x_of(chosen);
      Path tail(q.begin() + at, q.end());
      Path p{x};
      if (chosen == k - 1) {
        if (!d.has_arc(x, v)) return fail("Q*1", anchor, "x_k does not dominate V''_k");
      } else {
        Vertex xp = as.pick(cfg.v_of(chosen), [&](Vertex w) {
          return d.has_arc(x, w) && d.has_arc(w, v);
        });
        if (xp < 0) return fail("Q*1", anchor, "no free vertex left in V_" + std::to_string(chosen + 1));
        p.push_back(xp);
      }
      p = join(p, tail);
      as.done_[chosen] = p;
      as.refresh();
      as.take(p);
      erase(j_rem, chosen);
      notes.push_back("Q*1 finished terminal " + std::to_string(cfg.terminal[chosen] + 1));
    }

    std::int64_t steps = 0;
    auto open_j = [&] {
      std::vector<int> out;
      for (int r : j_rem)
        if (std::find(j_unuse.begin(), j_unuse.end(), r) == j_unuse.end()) out.push_back(r);
      return out;
    };
    while (as.free_count(v2_list) < static_cast<int>(j_rem.size()) && !open_j().empty() &&
           !i_rem.empty()) {
      if (++steps > params.budget) return fail("budget", anchor, "iteration budget exhausted");
      const int free_before = as.free_count(v2_list);
      const std::size_t jrem_before = j_rem.size();
      int i = -1, best = -1;
      for (int r : i_rem) {
        int h = hits(as.paths_[r], v2);
        if (h > best) best = h, i = r;
      }
      if (best <= 0) return fail("Q*2", anchor, "no remaining I path meets V''_k");
      const Path& q = as.paths_[i];
      const int at = last_hit(q, v2);
      const Vertex v = q[at];
      const int ip = open_j().front();
      Vertex xp = as.pick(cfg.v_of(ip), [&](Vertex w) { return d.has_arc(x_of(ip), w); });
      if (xp < 0) return fail("Q*2", anchor, "no free vertex left in V_" + std::to_string(ip + 1));
      if (arcs_into(d, cfg.s_of(i), xp) >= params.q2_in_fan) {
        Vertex xi = as.pick(as.freed_[i], [&](Vertex w) {
          return !x_new[w] && d.has_arc(x_of(i), w) && d.has_arc(w, xp);
        });
        if (xi < 0) return fail("Q*2", anchor, "no free in-neighbour of x+ in S'_i");
        if (!d.has_arc(xp, v)) return fail("Q*2", anchor, "x+ does not dominate v");
        Path p = join({x_of(i), xi, xp}, Path(q.begin() + at, q.end()));
        as.done_[i] = p;
        as.refresh();
        as.take(p);
        erase(i_rem, i);
        j_unuse.push_back(ip);
        notes.push_back("Q*2 finished terminal " + std::to_string(cfg.terminal[i] + 1));
      } else {
        Vertex xpp = as.pick(as.freed_[i], [&](Vertex w) { return !x_new[w] && d.has_arc(xp, w); });
        if (xpp < 0) return fail("Q*2", anchor, "x+ has no free out-neighbour in S'_i");
        prefix[ip] = {x_of(ip), xp, xpp};
        level[ip] = i;
        as.take(prefix[ip]);
        x_new[xpp] = 1;
        erase(j_rem, ip);
        notes.push_back("Q*2 routed terminal " + std::to_string(cfg.terminal[ip] + 1) +
                        " into S'_" + std::to_string(i + 1));
      }
      if (j_rem.size() == jrem_before && as.free_count(v2_list) < free_before + 2)
        return fail("Q*2", "each operation shrinks J_rem or frees two vertices of V''_k",
                    "no progress");
    }
    if (as.free_count(v2_list) < static_cast<int>(j_rem.size()))
      return fail("Q*2", "V''_k has |J_rem| free vertices",
                  std::to_string(as.free_count(v2_list)) + " free, " +
                      std::to_string(j_rem.size()) + " needed");
  }

  // Remaining J paths enter S'_l through V''_k.
  const auto& sl = as.freed_[l - 1];
  for (int r : j_rem) {
    const Vertex x = x_of(r);
    Vertex xp = -1;
    Vertex xpp = as.pick(v2_list, [&](Vertex w) {
      if (r == k - 1 ? !d.has_arc(x, w) : false) return false;
      int fan = 0;
      for (Vertex z : sl) fan += !as.blocked(z) && !x_new[z] && d.has_arc(w, z);
      return fan >= params.v_out_fan;
    });
    if (xpp < 0) return fail("assembly", "V''_k vertices have out-neighbours in S'_l",
                             "no usable V''_k vertex for terminal " + std::to_string(cfg.terminal[r] + 1));
    as.take(xpp);
    if (r != k - 1) {
      xp = as.pick(cfg.v_of(r), [&](Vertex w) { return d.has_arc(x, w) && d.has_arc(w, xpp); });
      if (xp < 0) return fail("assembly", anchor, "no free vertex left in V_" + std::to_string(r + 1));
      as.take(xp);
    }
    Vertex z = as.pick(sl, [&](Vertex w) { return !x_new[w] && d.has_arc(xpp, w); });
    if (z < 0) return fail("assembly", anchor, "V''_k vertex has no free out-neighbour in S'_l");
    as.take(z);
    x_new[z] = 1;
    prefix[r] = xp < 0 ? Path{x, xpp, z} : Path{x, xp, xpp, z};
    level[r] = l - 1;
  }
  for (int r : i_rem) {
    const Vertex x = x_of(r);
    Vertex xp = as.pick(as.freed_[r], [&](Vertex w) { return !x_new[w] && d.has_arc(x, w); });
    if (xp < 0) return fail("assembly", anchor, "x has no free out-neighbour in S'_" + std::to_string(r + 1));
    as.take(xp);
    x_new[xp] = 1;
    prefix[r] = {x, xp};
    level[r] = r;
  }
  for (int r = 0; r < k; ++r) {
    if (!as.done_[r].empty()) continue;
    auto w = as.chain(prefix[r].back(), level[r]);
    if (auto* f = std::get_if<LinkerFailure>(&w)) return *f;
    const Path& walk = std::get<Path>(w);
    const Path& q = as.paths_[r];
    auto link = as.last_link(walk.back(), q.front());
    if (!link) return fail("assembly", "subdivision paths of F_l reach the origins",
                           "path to origin " + std::to_string(q.front()) + " is occupied");
    as.take(*link);
    Path p = join(prefix[r], walk);
    p = join(p, *link);
    as.done_[r] = join(p, q);
  }
  return std::nullopt;
}

}  // namespace

Staged<PathSystem> link_back(const Digraph& d, const LinkageInstance& inst,
                             const Configuration& cfg, const Selection& sel,
                             const RoleSystem& q, const LinkerParams& params) {
  Assembly as(d, inst, cfg, q, params);
  std::vector<std::string> notes;
  auto err = sel.case_tag == 1 ? case_one(as) : case_two(as, notes);
  if (err) return *err;
  PathSystem ps;
  ps.paths.resize(cfg.k);
  for (int r = 0; r < cfg.k; ++r) ps.paths[cfg.terminal[r]] = as.done_[r];
  return ps;
}

LinkReport link(const Digraph& d, const LinkageInstance& inst, const LinkerParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  LinkReport rep;
  auto finish = [&](std::variant<PathSystem, LinkerFailure> out) {
    rep.outcome = std::move(out);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  try {
    inst.validate(d.size());
  } catch (const GraphError& e) {
    return finish(fail("precondition", "distinct terminals", e.what()));
  }
  if (auto e = params.validate(); !e.empty()) return finish(fail("params", "parameters", e));
  const int k = inst.k();
  if (k == 0) return finish(PathSystem{});
  if (!is_semicomplete(d))
    return finish(fail("precondition", "semicomplete input", "some pair has no arc"));
  if (params.check_connectivity && !is_k_connected(d, 2 * k + 1))
    return finish(fail("precondition", "(2k+1)-connected input",
                       "the digraph is not " + std::to_string(2 * k + 1) + "-connected"));

  // Every x_i -> y_i an arc: the arcs themselves are the linkage.
  bool direct = true;
  for (int i = 0; i < k; ++i) direct = direct && d.has_arc(inst.x[i], inst.y[i]);
  if (direct) {
    PathSystem ps;
    for (int i = 0; i < k; ++i) ps.paths.push_back({inst.x[i], inst.y[i]});
    rep.notes.push_back("all terminal pairs are arcs");
    return finish(std::move(ps));
  }

  auto cfg_r = build_configuration(d, inst, params);
  if (auto* f = std::get_if<LinkerFailure>(&cfg_r)) return finish(*f);
  const auto& cfg = std::get<Configuration>(cfg_r);
  rep.l = cfg.l;
  rep.notes = cfg.notes;
  rep.notes.push_back("I = " + std::to_string(cfg.l) + " subdivisions, J = " +
                      std::to_string(cfg.parts.size()) + " parts");

  auto sel_r = select_O_and_special(d, cfg, params);
  if (auto* f = std::get_if<LinkerFailure>(&sel_r)) return finish(*f);
  const auto& sel = std::get<Selection>(sel_r);
  rep.case_tag = sel.case_tag;

  auto q_r = route_to_targets(d, inst, cfg, sel);
  if (auto* f = std::get_if<LinkerFailure>(&q_r)) return finish(*f);
  auto star_r = free_and_release(d, cfg, sel, std::get<RoleSystem>(q_r), params);
  if (auto* f = std::get_if<LinkerFailure>(&star_r)) return finish(*f);
  const auto& star = std::get<RoleSystem>(star_r);
  rep.notes.insert(rep.notes.end(), star.notes.begin(), star.notes.end());

  auto p_r = link_back(d, inst, cfg, sel, star, params);
  if (auto* f = std::get_if<LinkerFailure>(&p_r)) return finish(*f);
  PathSystem& ps = std::get<PathSystem>(p_r);
  if (auto e = check_linkage(d, inst, ps); !e.empty())
    return finish(fail("internal-error", "final validation", e));
  return finish(std::move(ps));
}

nlohmann::json to_json(const LinkerParams& p) {
  return {{"s", p.s},
          {"ell", p.ell},
          {"w_size", p.w_size},
          {"u_block", p.u_block},
          {"v_part", p.v_part},
          {"splits_factor", p.splits_factor},
          {"window_ratio", p.window.ratio},
          {"window", p.window.window},
          {"freed_min", p.freed_min},
          {"v_prime_ratio", p.v_prime_ratio},
          {"case1_in_fan", p.case1_in_fan},
          {"v_out_fan", p.v_out_fan},
          {"chain_direct_fan", p.chain_direct_fan},
          {"chain_hop_fan", p.chain_hop_fan},
          {"q2_in_fan", p.q2_in_fan},
          {"release_hits", p.release_hits},
          {"check_connectivity", p.check_connectivity},
          {"budget", p.budget}};
}

LinkerParams params_from_json(const nlohmann::json& j, LinkerParams p) {
  if (!j.is_object()) throw ParseError("parameters must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "s") p.s = v.get<int>();
    else if (key == "ell") p.ell = v.get<int>();
    else if (key == "w_size") p.w_size = v.get<std::int64_t>();
    else if (key == "u_block") p.u_block = v.get<std::int64_t>();
    else if (key == "v_part") p.v_part = v.get<int>();
    else if (key == "splits_factor") p.splits_factor = v.get<int>();
    else if (key == "window_ratio") p.window.ratio = v.get<double>();
    else if (key == "window") p.window.window = v.get<int>();
    else if (key == "freed_min") p.freed_min = v.get<int>();
    else if (key == "v_prime_ratio") p.v_prime_ratio = v.get<double>();
    else if (key == "case1_in_fan") p.case1_in_fan = v.get<int>();
    else if (key == "v_out_fan") p.v_out_fan = v.get<int>();
    else if (key == "chain_direct_fan") p.chain_direct_fan = v.get<int>();
    else if (key == "chain_hop_fan") p.chain_hop_fan = v.get<int>();
    else if (key == "q2_in_fan") p.q2_in_fan = v.get<int>();
    else if (key == "release_hits") p.release_hits = v.get<int>();
    else if (key == "check_connectivity") p.check_connectivity = v.get<bool>();
    else if (key == "budget") p.budget = v.get<std::int64_t>();
    else throw ParseError("unknown parameter '" + key + "'");
  }
  return p;
}

nlohmann::json to_json(const LinkReport& r, const LinkerParams& p) {
  nlohmann::json j{{"params", to_json(p)},
                   {"case", r.case_tag},
                   {"subdivisions", r.l},
                   {"notes", r.notes},
                   {"seconds", r.seconds}};
  if (const auto* ps = std::get_if<PathSystem>(&r.outcome)) {
    j["status"] = "linked";
    j["paths"] = ps->paths;
  } else {
    const auto& f = std::get<LinkerFailure>(r.outcome);
    j["status"] = "failure";
    j["stage"] = f.stage;
    j["anchor"] = f.anchor;
    j["message"] = f.message;
  }
  return j;
}

}  // namespace linkage
