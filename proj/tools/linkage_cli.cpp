#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkage/connectivity.hpp"
#include "linkage/counterexample.hpp"
#include "linkage/io.hpp"
#include "linkage/linker.hpp"
#include "linkage/oracle.hpp"

using namespace linkage;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kInconclusive = 2 };

bool log_enabled() {
  const char* v = std::getenv("LINKAGE_LOG");
  return v && *v && std::string(v) != "0";
}

void log(const std::string& msg) {
  if (log_enabled()) std::cerr << "[linkage] " << msg << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// FNV-1a, enough to tell inputs apart in reports.
std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream ss;
  ss << "fnv1a64:" << std::hex << h;
  return ss.str();
}

std::vector<Vertex> parse_list(const std::string& s) {
  std::vector<Vertex> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("bad vertex list '" + s + "'");
    }
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

struct Report {
  json j;

  Report(int argc, char** argv) {
    j["command"] = std::vector<std::string>(argv, argv + argc);
    j["verdicts"] = json::array();
    j["outputs"] = json::array();
  }
  void input(const std::string& path, const std::string& bytes) {
    j["inputs"].push_back({{"path", path}, {"digest", digest(bytes)}});
  }
  void verdict(const std::string& check, Verdict v, const std::string& anchor, double seconds) {
    j["verdicts"].push_back(
        {{"check", check}, {"verdict", to_string(v)}, {"anchor", anchor}, {"seconds", seconds}});
  }
  void output(const std::string& path) { j["outputs"].push_back(path); }
  void print() const { std::cout << j.dump(2) << "\n"; }
};

struct Loaded {
  Digraph d;
  std::string bytes;
};

Loaded load(const std::string& path) {
  std::string bytes = read_file(path);
  return {parse_digraph(bytes), bytes};
}

LinkageInstance terminals(const std::string& xs, const std::string& ys, const std::string& file) {
  LinkageInstance inst;
  if (!file.empty()) {
    json j = json::parse(read_file(file));
    inst = instance_from_json(j.contains("instance") ? j["instance"] : j);
  } else {
    inst.x = parse_list(xs);
    inst.y = parse_list(ys);
  }
  return inst;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disjoint-path linkages in semicomplete digraphs"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a digraph in text format");
  gen->require_subcommand(1);
  std::string out_path = "-";
  int k = 2, m = 21, n = 9;
  std::string excluded = "kth";
  std::uint64_t seed = 0;
  double digon = 0.0;
  auto* g_ce = gen->add_subcommand("counterexample", "Non-linked tournament with its instance");
  g_ce->add_option("--k", k, "number of pairs")->required();
  g_ce->add_option("--m", m, "block length, odd and at least 10k")->required();
  g_ce->add_option("--excluded", excluded, "kth or mirror")->check(CLI::IsMember({"kth", "mirror"}));
  g_ce->add_option("--out", out_path, "digraph file")->required();
  std::vector<CLI::App*> simple;
  for (const char* kind : {"circulant", "transitive", "backward"}) {
    auto* s = gen->add_subcommand(kind, std::string(kind) + " tournament");
    s->add_option("--n", n, "number of vertices")->required();
    s->add_option("--out", out_path, "digraph file, - for stdout");
    simple.push_back(s);
  }
  auto* g_rand = gen->add_subcommand("random-semicomplete", "Seeded random semicomplete digraph");
  g_rand->add_option("--n", n)->required();
  g_rand->add_option("--seed", seed, "default 0");
  g_rand->add_option("--digon-prob", digon, "probability of a 2-cycle per pair");
  g_rand->add_option("--out", out_path);

  // verify
  auto* ver = app.add_subcommand("verify", "Check the counterexample claims");
  std::string graph_path, layout_path;
  std::uint64_t budget = 100000000;
  ver->add_option("digraph", graph_path)->required();
  ver->add_option("layout", layout_path)->required();
  ver->add_option("--budget", budget, "search node budget");

  // kappa
  auto* kap = app.add_subcommand("kappa", "Vertex connectivity");
  kap->add_option("digraph", graph_path)->required();

  // oracle
  auto* ora = app.add_subcommand("oracle", "Exact linkage search");
  std::string xs, ys, inst_path;
  ora->add_option("digraph", graph_path)->required();
  ora->add_option("--x", xs, "comma list of sources");
  ora->add_option("--y", ys, "comma list of targets");
  ora->add_option("--instance", inst_path, "JSON with x and y (a layout file works)");
  ora->add_option("--budget", budget);

  // link
  auto* lnk = app.add_subcommand("link", "Run the constructive linker");
  std::string params_path, paths_out;
  bool fallback = false, asymptotic = false;
  lnk->add_option("digraph", graph_path)->required();
  lnk->add_option("--x", xs);
  lnk->add_option("--y", ys);
  lnk->add_option("--instance", inst_path);
  lnk->add_option("--params", params_path, "JSON overriding LinkerParams fields");
  lnk->add_flag("--asymptotic-params", asymptotic, "start from the proof's constants instead of scaled ones");
  lnk->add_option("--out", paths_out, "write the path list here on success");
  lnk->add_flag("--fallback-oracle", fallback, "on failure, run the exact search instead");
  lnk->add_option("--budget", budget, "oracle budget for the fallback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInconclusive;
  }

  Report rep(argc, argv);
  try {
    if (gen->parsed()) {
      Digraph d;
      if (g_ce->parsed()) {
        auto ce = build_counterexample(k, m, excluded_vertex_from_string(excluded));
        d = ce.digraph;
        json lay = to_json(ce.layout);
        const std::string base = out_path == "-" ? "counterexample" : out_path;
        write_text(base + ".layout.json", lay.dump(2) + "\n");
        write_text(base + ".instance.json", to_json(ce.instance).dump(2) + "\n");
        rep.output(base + ".layout.json");
        rep.output(base + ".instance.json");
      } else if (simple[0]->parsed()) {
        d = circulant_tournament(n);
      } else if (simple[1]->parsed()) {
        d = transitive_tournament(n);
      } else if (simple[2]->parsed()) {
        d = backward_path_tournament(n);
      } else {
        d = random_semicomplete(n, seed, digon);
      }
      write_text(out_path, format_digraph(d));
      if (out_path != "-") {
        rep.output(out_path);
        rep.j["vertices"] = d.size();
        rep.j["arcs"] = d.arc_count();
        rep.print();
      }
      return kPass;
    }

    auto [d, bytes] = load(graph_path);
    rep.input(graph_path, bytes);
    log("loaded " + graph_path + " with " + std::to_string(d.size()) + " vertices");

    if (ver->parsed()) {
      std::string lay_bytes = read_file(layout_path);
      rep.input(layout_path, lay_bytes);
      json lj = json::parse(lay_bytes);
      CounterexampleLayout lay = layout_from_json(lj);
      LinkageInstance inst = lj.contains("instance") ? instance_from_json(lj["instance"]) : lay.instance();
      auto vr = verify_counterexample(d, inst, lay.k, lay.m, budget, lay.excluded);
      rep.verdict("semidegree", vr.semidegree.verdict, vr.semidegree.anchor, vr.semidegree.seconds);
      rep.verdict("connectivity", vr.connected.verdict, vr.connected.anchor, vr.connected.seconds);
      rep.verdict("not-linked", vr.not_linked.verdict, vr.not_linked.anchor, vr.not_linked.seconds);
      rep.j["result"] = to_json(vr);
      rep.print();
      switch (vr.overall()) {
        case Verdict::Pass: return kPass;
        case Verdict::Fail: return kFail;
        case Verdict::Inconclusive: return kInconclusive;
      }
    }

    if (kap->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      int kappa = vertex_connectivity(d);
      rep.j["result"] = {{"kappa", kappa}, {"vertices", d.size()}};
      rep.verdict("kappa", Verdict::Pass, "vertex connectivity computed", since(t0));
      rep.print();
      return kPass;
    }

    LinkageInstance inst = terminals(xs, ys, inst_path);
    if (!inst_path.empty()) rep.input(inst_path, read_file(inst_path));
    inst.validate(d.size());
    rep.j["instance"] = to_json(inst);

    auto run_oracle = [&](const char* check) {
      auto t0 = std::chrono::steady_clock::now();
      LinkageResult r = find_linkage_exact(d, inst, budget);
      const double secs = since(t0);
      if (auto* ps = std::get_if<PathSystem>(&r)) {
        rep.verdict(check, Verdict::Pass, "linkage exists", secs);
        rep.j["result"] = {{"status", "linked"}, {"paths", ps->paths}};
        return kPass;
      }
      if (auto* inf = std::get_if<Infeasible>(&r)) {
        rep.verdict(check, Verdict::Fail, "no linkage exists", secs);
        rep.j["result"] = {{"status", "infeasible"}, {"nodes", inf->nodes}};
        return kFail;
      }
      rep.verdict(check, Verdict::Inconclusive, "search budget exhausted", secs);
      rep.j["result"] = {{"status", "budget"}, {"nodes", std::get<BudgetExhausted>(r).nodes}};
      return kInconclusive;
    };

    if (ora->parsed()) {
      int code = run_oracle("oracle");
      rep.print();
      return code;
    }

    if (lnk->parsed()) {
      LinkerParams params = asymptotic ? LinkerParams::asymptotic(inst.k()) : LinkerParams::scaled(inst.k());
      if (!params_path.empty()) {
        std::string pb = read_file(params_path);
        rep.input(params_path, pb);
        params = params_from_json(json::parse(pb), params);
      }
      LinkReport lr = link(d, inst, params);
      for (const auto& note : lr.notes) log(note);
      rep.j["link"] = to_json(lr, params);
      if (lr.ok()) {
        rep.verdict("link", Verdict::Pass, "disjoint paths x_i -> y_i validated", lr.seconds);
        if (!paths_out.empty()) {
          write_text(paths_out, to_json(std::get<PathSystem>(lr.outcome)).dump(2) + "\n");
          rep.output(paths_out);
        }
        rep.print();
        return kPass;
      }
      const auto& f = std::get<LinkerFailure>(lr.outcome);
      rep.verdict("link", Verdict::Fail, f.anchor, lr.seconds);
      log("linker stopped at " + f.stage + ": " + f.message);
      int code = kFail;
      if (fallback) code = run_oracle("fallback-oracle");
      rep.print();
      return code;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kPass;
}
