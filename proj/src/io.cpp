#include "linkage/io.hpp"

#include <fstream>
#include <sstream>

namespace linkage {

void write_digraph(std::ostream& out, const Digraph& d) {
  out << d.size() << ' ' << d.arc_count() << '\n';
  for (auto [u, v] : d.arcs()) out << u << ' ' << v << '\n';
}

std::string format_digraph(const Digraph& d) {
  std::ostringstream out;
  write_digraph(out, d);
  return out.str();
}

Digraph read_digraph(std::istream& in) {
  long long n = -1, a = -1;
  if (!(in >> n >> a) || n < 0 || a < 0) throw ParseError("bad digraph header");
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(a));
  for (long long i = 0; i < a; ++i) {
    long long u, v;
    if (!(in >> u >> v)) throw ParseError("expected " + std::to_string(a) + " arcs, got " + std::to_string(i));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ParseError("arc " + std::to_string(u) + " " + std::to_string(v) + " out of range");
    arcs.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  std::string extra;
  if (in >> extra) throw ParseError("trailing data after arc list");
  try {
    return Digraph(static_cast<int>(n), arcs);
  } catch (const GraphError& e) {
    throw ParseError(e.what());
  }
}

Digraph parse_digraph(const std::string& text) {
  std::istringstream in(text);
  return read_digraph(in);
}

Digraph load_digraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_digraph(in);
}

void save_digraph(const std::string& path, const Digraph& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_digraph(out, d);
}

nlohmann::json to_json(const PathSystem& ps) {
  return {{"paths", ps.paths}, {"endpoint_disjoint", ps.endpoint_disjoint}};
}

nlohmann::json to_json(const LinkageInstance& inst) {
  return {{"x", inst.x}, {"y", inst.y}};
}

LinkageInstance instance_from_json(const nlohmann::json& j) {
  try {
    return {j.at("x").get<std::vector<Vertex>>(), j.at("y").get<std::vector<Vertex>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad instance: ") + e.what());
  }
}

}  // namespace linkage
