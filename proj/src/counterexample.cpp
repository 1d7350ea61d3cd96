#include "linkage/counterexample.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <optional>

#include "linkage/connectivity.hpp"
#include "linkage/io.hpp"

namespace linkage {

std::string to_string(ExcludedVertex v) {
  return v == ExcludedVertex::KthVertex ? "kth" : "mirror";
}

ExcludedVertex excluded_vertex_from_string(const std::string& s) {
  if (s == "kth") return ExcludedVertex::KthVertex;
  if (s == "mirror") return ExcludedVertex::MirrorVertex;
  throw GraphError("unknown excluded-vertex variant '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

void check_counterexample_params(int k, int m) {
  if (k < 2) throw GraphError("counterexample needs k >= 2");
  if (m % 2 == 0) throw GraphError("counterexample needs odd m");
  if (m < 10 * k) throw GraphError("counterexample needs m >= 10k");
}

std::vector<Arc> CounterexampleLayout::matching_arcs() const {
  std::vector<Arc> arcs;
  for (int i = 0; i + 1 < k; ++i) arcs.emplace_back(blocks[k - 1][i], blocks[i][0]);
  return arcs;
}

std::vector<Arc> CounterexampleLayout::half_block_arcs() const {
  std::vector<Arc> arcs;
  for (int j = half; j < m; ++j)
    for (Vertex v : blocks[0]) arcs.emplace_back(blocks[1][j], v);
  return arcs;
}

std::vector<Arc> CounterexampleLayout::exit_arcs() const {
  std::vector<Arc> arcs;
  for (int i = 0; i < k; ++i) arcs.emplace_back(blocks[i][m - 1], x_prime[i]);
  return arcs;
}

std::vector<Arc> CounterexampleLayout::y1_feed_arcs() const {
  std::vector<Arc> arcs;
  for (int j = half; j < m; ++j) arcs.emplace_back(blocks[1][j], y[0]);
  return arcs;
}

std::vector<Vertex> CounterexampleLayout::terminal_block_out(int i) const {
  const int skip = excluded == ExcludedVertex::KthVertex ? k - 1 : m - k;
  std::vector<Vertex> out;
  for (int j = 0; j < m; ++j) {
    if (i == k - 1 && j == skip) continue;
    if (i == 1 && j >= half) continue;
    out.push_back(blocks[i][j]);
  }
  return out;
}

namespace {

void fill_gadget_layout(CounterexampleLayout& lay) {
  const int k = lay.k, m = lay.m;
  Vertex next = 0;
  for (int i = 0; i < m - 2 * k + 1; ++i) lay.w.push_back(next++);
  for (int i = 0; i < k - 1; ++i) lay.s.push_back(next++);
  lay.x_prime.push_back(next++);
  std::vector<Vertex> y_tail;
  for (int i = 0; i < k - 1; ++i) y_tail.push_back(next++);
  for (Vertex v = 0; v < m; ++v) lay.regular.push_back(v);
  for (int i = 0; i < k - 1; ++i) lay.x_prime.push_back(next++);
  lay.y.push_back(next++);
  lay.y.insert(lay.y.end(), y_tail.begin(), y_tail.end());
}

void fill_block_layout(CounterexampleLayout& lay, Vertex base) {
  const int k = lay.k, m = lay.m;
  lay.blocks.assign(k, {});
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) lay.blocks[i].push_back(base + i * m + j);
  lay.last_block_labels = hamiltonian_path(circulant_tournament(m));
}

CounterexampleLayout base_layout(int k, int m, ExcludedVertex excluded) {
  check_counterexample_params(k, m);
  CounterexampleLayout lay;
  lay.k = k;
  lay.m = m;
  lay.half = m / 2;
  lay.excluded = excluded;
  return lay;
}

void add_gadget_arcs(DigraphBuilder& b, const CounterexampleLayout& lay) {
  const int m = lay.m;
  const Digraph reg = circulant_tournament(m);
  for (auto [u, v] : reg.arcs()) b.orient(lay.regular[u], lay.regular[v]);
  std::vector<Vertex> xp2(lay.x_prime.begin() + 1, lay.x_prime.end());
  for (std::size_t i = 0; i < xp2.size(); ++i)
    for (std::size_t j = i + 1; j < xp2.size(); ++j) b.orient(xp2[i], xp2[j]);
  const Vertex y1 = lay.y[0];
  for (Vertex u : lay.regular) {
    bool in_s = std::find(lay.s.begin(), lay.s.end(), u) != lay.s.end();
    for (Vertex x : xp2) {
      if (in_s) b.orient(x, u);
      else b.orient(u, x);
    }
    if (in_s) b.orient(u, y1);
    else b.orient(y1, u);
  }
  for (Vertex x : xp2) b.orient(x, y1);
}

void add_block_arcs(DigraphBuilder& b, const CounterexampleLayout& lay) {
  const int k = lay.k, m = lay.m;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (Vertex u : lay.blocks[i])
        for (Vertex v : lay.blocks[j]) b.orient(u, v);
  const Digraph backward = backward_path_tournament(m);
  for (int i = 0; i + 1 < k; ++i)
    for (auto [u, v] : backward.arcs()) b.orient(lay.blocks[i][u], lay.blocks[i][v]);
  const Digraph reg = circulant_tournament(m);
  std::vector<int> pos(m);
  for (int j = 0; j < m; ++j) pos[lay.last_block_labels[j]] = j;
  for (auto [u, v] : reg.arcs()) b.orient(lay.blocks[k - 1][pos[u]], lay.blocks[k - 1][pos[v]]);
  for (auto [u, v] : lay.matching_arcs()) b.orient(u, v);
  for (auto [u, v] : lay.half_block_arcs()) b.orient(u, v);
}

enum class Role { W, S, XPrime1, YTail, XPrime2, Y1, Block, X };

struct RoleOf {
  Role role;
  int index;   // position within the class (block: block number)
  int offset;  // block: path position; regular vertices: circulant position
};

class RuleBook {
 public:
  explicit RuleBook(const CounterexampleLayout& lay) : lay_(lay) {
    Vertex top = 0;
    auto bump = [&](const std::vector<Vertex>& vs) {
      for (Vertex v : vs) top = std::max(top, v + 1);
    };
    bump(lay.regular), bump(lay.x_prime), bump(lay.y), bump(lay.x);
    for (const auto& blk : lay.blocks) bump(blk);
    roles_.assign(top, std::nullopt);
    for (std::size_t i = 0; i < lay.regular.size(); ++i) {
      Vertex v = lay.regular[i];
      Role r = Role::W;
      int idx = 0;
      if (auto it = std::find(lay.s.begin(), lay.s.end(), v); it != lay.s.end()) {
        r = Role::S, idx = static_cast<int>(it - lay.s.begin());
      } else if (v == lay.x_prime[0]) {
        r = Role::XPrime1;
      } else if (auto yt = std::find(lay.y.begin() + 1, lay.y.end(), v); yt != lay.y.end()) {
        r = Role::YTail, idx = static_cast<int>(yt - lay.y.begin());
      }
      roles_[v] = RoleOf{r, idx, static_cast<int>(i)};
    }
    for (std::size_t i = 1; i < lay.x_prime.size(); ++i)
      if (lay.x_prime[i] >= 0) roles_[lay.x_prime[i]] = RoleOf{Role::XPrime2, static_cast<int>(i), 0};
    if (!lay.y.empty()) roles_[lay.y[0]] = RoleOf{Role::Y1, 0, 0};
    for (std::size_t b = 0; b < lay.blocks.size(); ++b)
      for (std::size_t j = 0; j < lay.blocks[b].size(); ++j)
        roles_[lay.blocks[b][j]] = RoleOf{Role::Block, static_cast<int>(b), static_cast<int>(j)};
    for (std::size_t i = 0; i < lay.x.size(); ++i) roles_[lay.x[i]] = RoleOf{Role::X, static_cast<int>(i), 0};
    if (!lay.blocks.empty()) {
      for (int i = 0; i < lay.k; ++i) {
        terminal_out_.emplace_back(roles_.size(), 0);
        for (Vertex v : lay.terminal_block_out(i)) terminal_out_.back()[v] = 1;
      }
    }
  }

  std::vector<std::string> rules(Vertex u, Vertex v) const {
    std::vector<std::string> hits;
    if (u == v || u < 0 || v < 0 || u >= static_cast<Vertex>(roles_.size()) ||
        v >= static_cast<Vertex>(roles_.size()) || !roles_[u] || !roles_[v])
      return hits;
    const RoleOf a = *roles_[u], b = *roles_[v];
    const int k = lay_.k, m = lay_.m, h = lay_.half;
    auto is_regular = [](Role r) {
      return r == Role::W || r == Role::S || r == Role::XPrime1 || r == Role::YTail;
    };
    auto gadget = [&](Role r) { return is_regular(r) || r == Role::XPrime2 || r == Role::Y1; };
    auto add = [&](bool cond, const char* name) {
      if (cond) hits.emplace_back(name);
    };
    auto second_half = [&](const RoleOf& r) {
      return r.role == Role::Block && r.index == 1 && r.offset >= h;
    };

    // Gadget internals.
    if (is_regular(a.role) && is_regular(b.role)) {
      int gap = ((b.offset - a.offset) % m + m) % m;
      add(gap >= 1 && gap <= (m - 1) / 2, "gadget:regular");
    }
    add(a.role == Role::XPrime2 && b.role == Role::XPrime2 && a.index < b.index,
        "gadget:x'-transitive");
    add(is_regular(a.role) && a.role != Role::S && b.role == Role::XPrime2, "gadget:into-x'");
    add(a.role == Role::XPrime2 && (b.role == Role::Y1 || b.role == Role::S), "gadget:x'-out");
    add(a.role == Role::S && b.role == Role::Y1, "gadget:s-to-y1");
    add(a.role == Role::Y1 && is_regular(b.role) && b.role != Role::S, "gadget:y1-out");

    // Block internals.
    if (a.role == Role::Block && b.role == Role::Block) {
      if (a.index == b.index && a.index < k - 1) {
        add(b.offset == a.offset + 1 || a.offset >= b.offset + 2, "blocks:backward-path");
      } else if (a.index == b.index) {
        Vertex la = lay_.last_block_labels[a.offset], lb = lay_.last_block_labels[b.offset];
        int gap = ((lb - la) % m + m) % m;
        add(gap >= 1 && gap <= (m - 1) / 2, "blocks:regular");
      }
      bool matching = a.index == k - 1 && b.index < k - 1 && a.offset == b.index && b.offset == 0;
      bool half = second_half(a) && b.index == 0;
      add(matching, "blocks:matching");
      add(half, "blocks:half-to-first");
      bool reversed_matching =
          b.index == k - 1 && a.index < k - 1 && b.offset == a.index && a.offset == 0;
      bool reversed_half = second_half(b) && a.index == 0;
      add(a.index < b.index && !reversed_matching && !reversed_half, "blocks:forward");
    }

    // Terminal side.
    add(a.role == Role::X && b.role == Role::X && a.index < b.index, "x:transitive");
    bool x1_xp1 = a.role == Role::X && a.index == 0 && b.role == Role::XPrime1;
    add(gadget(a.role) && a.role != Role::YTail && a.role != Role::Y1 && b.role == Role::X &&
            !(b.index == 0 && a.role == Role::XPrime1),
        "gadget-to-x");
    add(x1_xp1, "x1-to-x'1");
    auto is_y = [](Role r) { return r == Role::YTail || r == Role::Y1; };
    add(a.role == Role::X && is_y(b.role) && a.index != b.index, "x-to-y");
    add(is_y(a.role) && b.role == Role::X && a.index == b.index, "y-to-own-x");
    if (!terminal_out_.empty()) {
      add(a.role == Role::X && b.role == Role::Block && terminal_out_[a.index][v], "x-to-blocks");
      add(a.role == Role::Block && b.role == Role::X && !terminal_out_[b.index][u], "blocks-to-x");
    }

    // Between the two halves.
    bool exit = a.role == Role::Block && a.offset == m - 1 &&
                ((a.index == 0 && b.role == Role::XPrime1) ||
                 (b.role == Role::XPrime2 && b.index == a.index));
    bool feed = second_half(a) && b.role == Role::Y1;
    add(exit, "blocks:exit-to-x'");
    add(feed, "blocks:feed-y1");
    bool rev_exit = b.role == Role::Block && b.offset == m - 1 &&
                    ((b.index == 0 && a.role == Role::XPrime1) ||
                     (a.role == Role::XPrime2 && a.index == b.index));
    bool rev_feed = second_half(b) && a.role == Role::Y1;
    add(gadget(a.role) && b.role == Role::Block && !rev_exit && !rev_feed, "gadget-to-blocks");
    return hits;
  }

 private:
  const CounterexampleLayout& lay_;
  std::vector<std::optional<RoleOf>> roles_;
  std::vector<std::vector<char>> terminal_out_;
};

}  // namespace

std::pair<Digraph, CounterexampleLayout> build_D1(int k, int m) {
  CounterexampleLayout lay = base_layout(k, m, ExcludedVertex::KthVertex);
  fill_gadget_layout(lay);
  DigraphBuilder b(lay.gadget_size());
  add_gadget_arcs(b, lay);
  return {b.build(), lay};
}

std::pair<Digraph, CounterexampleLayout> build_D2(int k, int m) {
  CounterexampleLayout lay = base_layout(k, m, ExcludedVertex::KthVertex);
  fill_block_layout(lay, 0);
  DigraphBuilder b(k * m);
  add_block_arcs(b, lay);
  return {b.build(), lay};
}

Counterexample build_counterexample(int k, int m, ExcludedVertex excluded) {
  CounterexampleLayout lay = base_layout(k, m, excluded);
  fill_gadget_layout(lay);
  fill_block_layout(lay, lay.gadget_size());
  for (int i = 0; i < k; ++i) lay.x.push_back(lay.gadget_size() + k * m + i);

  DigraphBuilder b(lay.total_size());
  add_gadget_arcs(b, lay);
  add_block_arcs(b, lay);

  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) b.orient(lay.x[i], lay.x[j]);
  std::vector<char> is_y(lay.total_size(), 0);
  for (Vertex v : lay.y) is_y[v] = 1;
  for (Vertex u = 0; u < lay.gadget_size(); ++u) {
    if (is_y[u]) continue;
    for (Vertex x : lay.x) b.orient(u, x);
  }
  b.orient(lay.x[0], lay.x_prime[0]);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) b.orient(lay.y[i], lay.x[i]);
      else b.orient(lay.x[i], lay.y[j]);
    }
  for (int i = 0; i < k; ++i) {
    std::vector<char> out(lay.total_size(), 0);
    for (Vertex v : lay.terminal_block_out(i)) out[v] = 1;
    for (const auto& blk : lay.blocks)
      for (Vertex v : blk) {
        if (out[v]) b.orient(lay.x[i], v);
        else b.orient(v, lay.x[i]);
      }
  }
  for (Vertex u = 0; u < lay.gadget_size(); ++u)
    for (const auto& blk : lay.blocks)
      for (Vertex v : blk) b.orient(u, v);
  for (auto [u, v] : lay.exit_arcs()) b.orient(u, v);
  for (auto [u, v] : lay.y1_feed_arcs()) b.orient(u, v);

  Digraph d = b.build();
  if (!is_tournament(d)) throw GraphError("internal: construction is not a tournament");
  LinkageInstance inst = lay.instance();
  return {std::move(d), std::move(inst), std::move(lay)};
}

std::vector<std::string> arc_rules(const CounterexampleLayout& layout, Vertex u, Vertex v) {
  return RuleBook(layout).rules(u, v);
}

AuditResult audit_construction(const Digraph& d, const CounterexampleLayout& layout,
                               std::size_t max_report) {
  AuditResult res;
  RuleBook book(layout);
  std::size_t extra = 0;
  auto report = [&](std::string msg) {
    if (res.deviations.size() < max_report) res.deviations.push_back(std::move(msg));
    else ++extra;
  };
  for (Vertex u = 0; u < d.size(); ++u) {
    for (Vertex v = 0; v < d.size(); ++v) {
      if (u == v) continue;
      auto hits = book.rules(u, v);
      bool arc = d.has_arc(u, v);
      if (arc) ++res.arcs_checked;
      if (arc && hits.size() != 1) {
        std::string msg = "arc " + std::to_string(u) + "->" + std::to_string(v) + " matches " +
                          std::to_string(hits.size()) + " rules";
        for (const auto& r : hits) msg += " " + r;
        report(std::move(msg));
      } else if (!arc && !hits.empty()) {
        report("missing arc " + std::to_string(u) + "->" + std::to_string(v) + " (" + hits[0] + ")");
      }
    }
  }
  if (extra > 0) res.deviations.push_back("... and " + std::to_string(extra) + " more");
  return res;
}

Verdict VerificationReport::overall() const {
  Verdict all[] = {semidegree.verdict, connected.verdict, not_linked.verdict};
  if (std::find(std::begin(all), std::end(all), Verdict::Fail) != std::end(all)) return Verdict::Fail;
  if (std::find(std::begin(all), std::end(all), Verdict::Inconclusive) != std::end(all))
    return Verdict::Inconclusive;
  return Verdict::Pass;
}

namespace {

template <class F>
CheckResult timed(F&& f) {
  auto start = std::chrono::steady_clock::now();
  CheckResult r = f();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

VerificationReport verify_counterexample(const Digraph& d, const LinkageInstance& inst, int k,
                                         int m, std::uint64_t budget, ExcludedVertex excluded) {
  check_counterexample_params(k, m);
  inst.validate(d.size());
  VerificationReport rep;
  rep.k = k;
  rep.m = m;
  rep.excluded = excluded;

  auto semi = std::async(std::launch::async, [&] {
    return timed([&] {
      int got = semidegree(d).min_semi;
      rep.min_semidegree = got;
      bool ok = got >= m / 2;
      return CheckResult{ok ? Verdict::Pass : Verdict::Fail, "minimum semidegree >= floor(m/2)",
                         "min semidegree " + std::to_string(got) + ", need " + std::to_string(m / 2), 0};
    });
  });
  auto conn = std::async(std::launch::async, [&] {
    return timed([&] {
      int kappa = d.size() >= 2 ? vertex_connectivity(d) : 0;
      rep.connectivity = kappa;
      bool ok = kappa >= 2 * k;
      return CheckResult{ok ? Verdict::Pass : Verdict::Fail, "vertex connectivity >= 2k",
                         "kappa " + std::to_string(kappa) + ", need " + std::to_string(2 * k), 0};
    });
  });
  auto link = std::async(std::launch::async, [&] {
    return timed([&] {
      auto res = find_linkage_exact(d, inst, budget);
      CheckResult r{Verdict::Inconclusive, "designated terminals admit no linkage", "", 0};
      if (auto* inf = std::get_if<Infeasible>(&res)) {
        rep.search_nodes = inf->nodes;
        r.verdict = Verdict::Pass;
        r.detail = "exhaustive search refuted linkage after " + std::to_string(inf->nodes) + " nodes";
      } else if (auto* ex = std::get_if<BudgetExhausted>(&res)) {
        rep.search_nodes = ex->nodes;
        r.detail = "budget of " + std::to_string(budget) + " nodes exhausted";
      } else {
        r.verdict = Verdict::Fail;
        r.detail = "found a linkage";
      }
      return r;
    });
  });
  rep.semidegree = semi.get();
  rep.connected = conn.get();
  rep.not_linked = link.get();

  Counterexample ref = build_counterexample(k, m, excluded);
  if (d.size() != ref.layout.total_size()) {
    rep.deviations.push_back("vertex count " + std::to_string(d.size()) + ", construction has " +
                             std::to_string(ref.layout.total_size()));
  } else {
    rep.deviations = audit_construction(d, ref.layout).deviations;
  }
  if (!(inst == ref.instance)) rep.deviations.push_back("instance differs from the designated terminals");
  return rep;
}

nlohmann::json to_json(const CounterexampleLayout& lay) {
  nlohmann::json j;
  j["k"] = lay.k;
  j["m"] = lay.m;
  j["half"] = lay.half;
  j["excluded"] = to_string(lay.excluded);
  j["W"] = lay.w;
  j["S"] = lay.s;
  j["X_prime"] = lay.x_prime;
  j["Y"] = lay.y;
  j["X"] = lay.x;
  j["blocks"] = lay.blocks;
  j["last_block_labels"] = lay.last_block_labels;
  j["bundles"] = {{"matching", lay.matching_arcs()},
                  {"half_to_first", lay.half_block_arcs()},
                  {"exit", lay.exit_arcs()},
                  {"feed_y1", lay.y1_feed_arcs()}};
  j["instance"] = to_json(lay.instance());
  return j;
}

CounterexampleLayout layout_from_json(const nlohmann::json& j) {
  int k = j.at("k").get<int>(), m = j.at("m").get<int>();
  ExcludedVertex ex = excluded_vertex_from_string(j.value("excluded", std::string("kth")));
  CounterexampleLayout lay = build_counterexample(k, m, ex).layout;
  if (j.contains("X") && j["X"].get<std::vector<Vertex>>() != lay.x)
    throw GraphError("layout classes do not match the construction");
  return lay;
}

nlohmann::json to_json(const VerificationReport& rep) {
  auto check = [](const CheckResult& c) {
    return nlohmann::json{{"verdict", to_string(c.verdict)},
                          {"anchor", c.anchor},
                          {"detail", c.detail},
                          {"seconds", c.seconds}};
  };
  return {{"k", rep.k},
          {"m", rep.m},
          {"excluded", to_string(rep.excluded)},
          {"min_semidegree", rep.min_semidegree},
          {"connectivity", rep.connectivity},
          {"search_nodes", rep.search_nodes},
          {"checks",
           {{"semidegree", check(rep.semidegree)},
            {"connectivity", check(rep.connected)},
            {"no_linkage", check(rep.not_linked)}}},
          {"deviations", rep.deviations},
          {"overall", to_string(rep.overall())}};
}

}  // namespace linkage
