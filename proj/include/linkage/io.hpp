#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "linkage/connectivity.hpp"
#include "linkage/digraph.hpp"
#include "linkage/oracle.hpp"

namespace linkage {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text format: a header line "n a", then a lines "u v". Arcs are written in
/// lexicographic order with LF endings, so output is canonical.
void write_digraph(std::ostream& out, const Digraph& d);
std::string format_digraph(const Digraph& d);
Digraph read_digraph(std::istream& in);
Digraph parse_digraph(const std::string& text);
Digraph load_digraph(const std::string& path);
void save_digraph(const std::string& path, const Digraph& d);

nlohmann::json to_json(const PathSystem& ps);
nlohmann::json to_json(const LinkageInstance& inst);
LinkageInstance instance_from_json(const nlohmann::json& j);

}  // namespace linkage
