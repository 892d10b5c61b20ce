#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"

using namespace hoopflux;
using namespace hoopflux::testing;

namespace {

std::string message_of(std::string_view text) {
  try {
    parse_scene(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("the bundled scene round-trips") {
  const Scene s = example_scene();
  CHECK(validate_scene(s).empty());
  const std::string text = serialize_scene(s);
  CHECK(parse_scene(text) == s);
  CHECK(serialize_scene(parse_scene(text)) == text);
}

TEST_CASE("random scenes round-trip, refinements included") {
  Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    Scene s = random_scene(rng, 4, 3);
    s.faces["F"] = random_face(rng, s, "F", 0.5);
    s.loops.insert_or_assign("l", random_loop(rng, s, 4));
    s.fields["A"] = random_field(rng, s);
    s.gauges["f"] = random_gauge(rng, s);
    add_random_graph(rng, s, "g", 3, 3, true);
    const Scene r = refine_segment(s, s.segments.begin()->first).scene;
    CHECK(parse_scene(serialize_scene(r)) == r);
  }
}

TEST_CASE("syntax errors carry line and column") {
  const std::string m = message_of("{\n  \"segments\": [\n    {\"id\": \"a\",, }\n  ]\n}");
  CHECK(contains(m, "ParseError"));
  CHECK(contains(m, "line 3"));
}

TEST_CASE("structural errors carry the location") {
  CHECK(contains(message_of(R"({"segments": [{"id": "a", "source": "x"}]})"), "/segments/0"));
  CHECK(contains(message_of(R"({"segments": [], "colour": 1})"), "colour"));
  CHECK(contains(message_of(R"({"segments": [{"id": "a", "source": "x", "target": "y"}],
      "faces": [{"id": "F", "crossings": [{"segment": "a", "kind": "sideways"}]}]})"),
                 "/faces/0/crossings/0"));
}

TEST_CASE("all build problems are reported together") {
  const std::string m = message_of(R"({
    "segments": [{"id": "a", "source": "x", "target": "y"}, {"id": "a", "source": "y", "target": "x"},
                 {"id": "b", "source": "y", "target": "z"}],
    "loops": [{"name": "l", "steps": ["a", "a"]}, {"name": "m", "steps": ["nope"]}]
  })");
  CHECK(contains(m, "ValidationError"));
  CHECK(contains(m, "3 problem"));
}

TEST_CASE("steps and combos") {
  CHECK(parse_step("-a") == Step{"a", Direction::Reverse});
  CHECK(to_string(Step{"a", Direction::Reverse}) == "-a");
  const FluxCombo c({{1, "S1"}, {2, "S2"}});
  CHECK(to_string(c) == "S1 + 2*S2");
  CHECK(to_string(FluxCombo::single("S1", -1)) == "-S1");
  CHECK(combo_from_json(combo_to_json(c), "here") == c);
  CHECK(combo_from_json(Json("S1"), "here") == FluxCombo::single("S1"));
  CHECK(to_string(Crossing::transversal(Endpoint::AtSource, Side::Below)) == "transversal(source, below)");
}

TEST_CASE("save and load") {
  const auto path = std::filesystem::temp_directory_path() / "hoopflux_scene_io_test.json";
  const Scene s = example_scene();
  save_scene(s, path);
  CHECK(load_scene(path) == s);
  std::filesystem::remove(path);
  CHECK(error_code_of([&] { load_scene(path); }) == ErrorCode::Parse);
}
