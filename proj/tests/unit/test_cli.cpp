#include <filesystem>
#include <sstream>

#include "common.hpp"
#include "hoopflux/cli.hpp"

using namespace hoopflux;
using namespace hoopflux::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scene_path() { return std::string(HOOPFLUX_DATA_DIR) + "/example.json"; }

Json json_of(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  return Json::parse(call(std::move(args)).out);
}

}  // namespace

TEST_CASE("validate") {
  const Outcome o = call({"validate", scene_path()});
  CHECK(o.code == 0);
  CHECK(o.err.empty());
  CHECK(json_of({"validate", scene_path()})["verb"] == "validate");
}

TEST_CASE("epsilon examples through the command line") {
  CHECK(json_of({"epsilon", scene_path(), "--face", "S", "--loop", "l"})["result"]["epsilon"] == "1/2");
  CHECK(json_of({"epsilon", scene_path(), "--face", "Tr", "--loop", "circle"})["result"]["epsilon"] == "-1");
}

TEST_CASE("exit codes") {
  CHECK(call({"check-face", scene_path(), "--face", "B", "--loops", "through"}).code == 1);
  CHECK(call({"gauge-reduce", scene_path(), "--graph", "tree", "--poly", "x_e1"}).code == 1);
  CHECK(call({"epsilon", scene_path(), "--face", "nope", "--loop", "l"}).code == 2);
  CHECK(call({"epsilon", scene_path()}).code == 2);
  CHECK(call({"frobnicate", scene_path()}).code == 2);
  CHECK(call({"validate", "/nonexistent/scene.json"}).code == 2);
  CHECK(call({"refine", scene_path(), "--segment", "c1"}).code == 2);
  CHECK(call({"refine", scene_path(), "--segment", "c1", "--out", scene_path()}).code == 2);
}

TEST_CASE("errors in json mode are structured") {
  const Outcome o = call({"epsilon", scene_path(), "--face", "S9", "--loop", "l", "--format", "json"});
  CHECK(o.code == 2);
  const Json j = Json::parse(o.out);
  CHECK(j["result"].is_null());
  CHECK(j["error"]["kind"] == "UnknownName");
  CHECK(o.err.find("did you mean") != std::string::npos);
}

TEST_CASE("suggestions") {
  CHECK(cli::suggest("circel", {"circle", "through", "l"}) == "circle");
  CHECK(cli::suggest("zzzzzz", {"circle", "through"}).empty());
}

TEST_CASE("constrain and probe reproduce the triangle verdicts") {
  const Json c = json_of({"constrain", scene_path(), "--system", "big"});
  CHECK(c["result"]["chosen"] == Json::array({"S2", "S3"}));
  const Json bad = json_of({"probe-order", scene_path(), "--finer", "big", "--coarser", "small", "--finer-hint",
                            "S2,S3", "--coarser-hint", "S1"});
  CHECK(bad["result"]["constrained_geq"] == false);
  const Json good = json_of({"probe-order", scene_path(), "--finer", "big", "--coarser", "small", "--finer-hint",
                             "S2,S3", "--coarser-hint", "S2"});
  CHECK(good["result"]["constrained_geq"] == true);
}

TEST_CASE("refine writes a valid scene") {
  const auto path = std::filesystem::temp_directory_path() / "hoopflux_cli_refine.json";
  const Outcome o = call({"refine", scene_path(), "--segment", "c1", "--out", path.string()});
  CHECK(o.code == 0);
  const Scene s = load_scene(path);
  CHECK(s.refinements.size() == 1);
  CHECK(json_of({"epsilon", path.string(), "--face", "T", "--loop", "circle"})["result"]["epsilon"] == "1");
  std::filesystem::remove(path);
}

TEST_CASE("text and json carry the same result") {
  const Outcome text = call({"hoop-reduce", scene_path(), "--loops", "L2,L3,L23"});
  const Json j = json_of({"hoop-reduce", scene_path(), "--loops", "L2,L3,L23"});
  CHECK(text.code == 0);
  for (const auto& hoop : j["result"]["basis"]) {
    CHECK(text.out.find(hoop["label"].get<std::string>()) != std::string::npos);
  }
}

TEST_CASE("verify-assumptions on the example sample") {
  const Outcome o = call({"verify-assumptions", scene_path(), "--sample", "lam_prime,lam,circ,boundary"});
  CHECK(o.code == 0);
  CHECK(o.out.find("FAIL") == std::string::npos);
}
