#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "linkage/counterexample.hpp"
#include "linkage/io.hpp"

using namespace linkage;

TEST_CASE("text format is the header plus sorted arcs") {
  CHECK(format_digraph(transitive_tournament(3)) == "3 3\n0 1\n0 2\n1 2\n");
  CHECK(format_digraph(Digraph(2, std::span<const Arc>{})) == "2 0\n");
}

TEST_CASE("format and parse round-trip byte for byte") {
  for (const Digraph& d : {circulant_tournament(9), random_semicomplete(25, 4, 0.3),
                           build_counterexample(2, 21).digraph}) {
    std::string text = format_digraph(d);
    Digraph back = parse_digraph(text);
    CHECK(back == d);
    CHECK(format_digraph(back) == text);
  }
}

TEST_CASE("malformed text is a parse error") {
  CHECK_THROWS_AS(parse_digraph(""), ParseError);
  CHECK_THROWS_AS(parse_digraph("3 2\n0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_digraph("3 1\n0 3\n"), ParseError);
  CHECK_THROWS_AS(parse_digraph("3 1\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_digraph("3 1\n0 1\n2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_digraph("-1 0\n"), ParseError);
  CHECK(parse_digraph("3 1\r\n0 1\r\n").arc_count() == 1);
}

TEST_CASE("files round-trip") {
  auto path = std::filesystem::temp_directory_path() / "linkage_io_test.txt";
  Digraph d = circulant_tournament(11);
  save_digraph(path.string(), d);
  CHECK(load_digraph(path.string()) == d);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_digraph(path.string()), ParseError);
}

TEST_CASE("instances round-trip through JSON") {
  LinkageInstance inst{{0, 4}, {7, 2}};
  CHECK(instance_from_json(to_json(inst)) == inst);
  CHECK_THROWS(instance_from_json(nlohmann::json{{"x", {1}}}));
}

TEST_CASE("path systems serialise their paths") {
  PathSystem ps{{{0, 1, 2}, {3, 4}}, true};
  auto j = to_json(ps);
  CHECK(j["paths"] == nlohmann::json::parse("[[0,1,2],[3,4]]"));
}
