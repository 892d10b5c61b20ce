#include "hoopflux/scene_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hoopflux/error.hpp"

namespace hoopflux {
namespace {

[[noreturn]] void structure_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Parse, "at " + where + ": " + what);
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) structure_error(where, "expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!obj.contains(k)) structure_error(where, std::string("missing key '") + k + "'");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) structure_error(where, "unknown key '" + key + "'");
  }
}

const std::string& as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) structure_error(where, "expected a string");
  return j.get_ref<const std::string&>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) structure_error(where, "expected an array");
  return j;
}

Rational as_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) structure_error(where, "expected a rational literal string");
  try {
    return parse_rational(j.get_ref<const std::string&>());
  } catch (const Error& e) {
    structure_error(where, e.detail());
  }
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t index) { return where + "/" + std::to_string(index); }

std::vector<Step> steps_from_json(const Json& j, const std::string& where) {
  std::vector<Step> steps;
  const Json& arr = as_array(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    try {
      steps.push_back(parse_step(as_string(arr[i], at(where, i))));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Parse) throw;
      structure_error(at(where, i), e.detail());
    }
  }
  return steps;
}

Crossing crossing_from_json(const Json& j, const std::string& where, SegmentId& segment) {
  check_keys(j, where, {"segment", "kind"}, {"end", "side"});
  segment = as_string(j["segment"], at(where, "segment"));
  const std::string& kind = as_string(j["kind"], at(where, "kind"));
  if (kind == "closure" || kind == "disjoint") {
    if (j.contains("end") || j.contains("side")) structure_error(where, "'end'/'side' only apply to transversal records");
    return kind == "closure" ? Crossing::in_closure() : Crossing::disjoint();
  }
  if (kind != "transversal") structure_error(at(where, "kind"), "expected closure, transversal or disjoint");
  if (!j.contains("end") || !j.contains("side")) structure_error(where, "transversal records need 'end' and 'side'");
  const std::string& end = as_string(j["end"], at(where, "end"));
  const std::string& side = as_string(j["side"], at(where, "side"));
  if (end != "source" && end != "target") structure_error(at(where, "end"), "expected source or target");
  if (side != "above" && side != "below") structure_error(at(where, "side"), "expected above or below");
  return Crossing::transversal(end == "source" ? Endpoint::AtSource : Endpoint::AtTarget,
                               side == "above" ? Side::Above : Side::Below);
}

Json crossing_to_json(const SegmentId& segment, const Crossing& c) {
  Json j{{"segment", segment.str()}};
  switch (c.kind) {
    case CrossingKind::InClosure: j["kind"] = "closure"; break;
    case CrossingKind::Disjoint: j["kind"] = "disjoint"; break;
    case CrossingKind::Transversal:
      j["kind"] = "transversal";
      j["end"] = c.end == Endpoint::AtSource ? "source" : "target";
      j["side"] = c.side == Side::Above ? "above" : "below";
      break;
  }
  return j;
}

template <class Map>
Json values_to_json(const Map& values) {
  Json j = Json::object();
  for (const auto& [k, v] : values) j[k.str()] = to_string(v);
  return j;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Step parse_step(std::string_view text) {
  Step s;
  if (!text.empty() && text.front() == '-') {
    s.direction = Direction::Reverse;
    text.remove_prefix(1);
  }
  if (text.empty()) throw Error(ErrorCode::Parse, "empty step");
  s.segment = std::string(text);
  return s;
}

std::string to_string(const Step& step) {
  return (step.direction == Direction::Reverse ? "-" : "") + step.segment.str();
}

Json steps_to_json(const std::vector<Step>& steps) {
  Json j = Json::array();
  for (const Step& s : steps) j.push_back(to_string(s));
  return j;
}

FluxCombo combo_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return FluxCombo::single(j.get<std::string>());
  if (!j.is_object()) structure_error(where, "expected a face name or an object of face coefficients");
  std::vector<FluxTerm> terms;
  for (const auto& [face, coefficient] : j.items()) {
    terms.push_back({as_rational(coefficient, at(where, face)), FaceId(face)});
  }
  FluxCombo combo(std::move(terms));
  if (combo.is_zero()) structure_error(where, "momentum combination is zero");
  return combo;
}

Json combo_to_json(const FluxCombo& combo) {
  Json j = Json::object();
  for (const FluxTerm& t : combo.terms()) j[t.face.str()] = to_string(t.coefficient);
  return j;
}

std::string to_string(const FluxCombo& combo) {
  std::string out;
  for (const FluxTerm& t : combo.terms()) {
    const bool negative = t.coefficient < 0;
    const Rational magnitude = negative ? Rational(-t.coefficient) : t.coefficient;
    if (out.empty()) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    if (magnitude != 1) out += to_string(magnitude) + "*";
    out += t.face.str();
  }
  return out.empty() ? "0" : out;
}

std::string to_string(const Crossing& c) {
  switch (c.kind) {
    case CrossingKind::InClosure: return "closure";
    case CrossingKind::Disjoint: return "disjoint";
    case CrossingKind::Transversal:
      return std::string("transversal(") + (c.end == Endpoint::AtSource ? "source" : "target") + ", " +
             (c.side == Side::Above ? "above" : "below") + ")";
  }
  return "?";
}

Scene parse_scene(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    // strip nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix
    if (const auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
  }
  check_keys(root, "", {"segments"}, {"faces", "loops", "graphs", "fields", "gauges", "systems", "refinements"});

  Scene scene;
  std::vector<std::string> problems;
  auto duplicate = [&](const std::string& kind, const std::string& name) {
    problems.push_back("duplicate " + kind + " '" + name + "'");
  };

  const Json& segments = as_array(root["segments"], "/segments");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string where = at("/segments", i);
    check_keys(segments[i], where, {"id", "source", "target"});
    Segment s{as_string(segments[i]["id"], at(where, "id")), as_string(segments[i]["source"], at(where, "source")),
              as_string(segments[i]["target"], at(where, "target"))};
    if (!scene.segments.emplace(s.id, s).second) duplicate("segment", s.id.str());
  }

  if (root.contains("refinements")) {
    const Json& arr = as_array(root["refinements"], "/refinements");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = at("/refinements", i);
      check_keys(arr[i], where, {"original", "first", "second", "midpoint"});
      scene.refinements.push_back({as_string(arr[i]["original"], at(where, "original")),
                                   as_string(arr[i]["first"], at(where, "first")),
                                   as_string(arr[i]["second"], at(where, "second")),
                                   as_string(arr[i]["midpoint"], at(where, "midpoint"))});
    }
  }

  if (root.contains("faces")) {
    const Json& arr = as_array(root["faces"], "/faces");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = at("/faces", i);
      check_keys(arr[i], where, {"id", "crossings"});
      Face f;
      f.id = as_string(arr[i]["id"], at(where, "id"));
      const Json& crossings = as_array(arr[i]["crossings"], at(where, "crossings"));
      for (std::size_t k = 0; k < crossings.size(); ++k) {
        SegmentId seg;
        const Crossing c = crossing_from_json(crossings[k], at(at(where, "crossings"), k), seg);
        if (!f.crossings.emplace(seg, c).second) {
          problems.push_back("face '" + f.id.str() + "' lists segment '" + seg.str() + "' twice");
        }
      }
      const FaceId id = f.id;
      if (!scene.faces.emplace(id, std::move(f)).second) duplicate("face", id.str());
    }
  }

  if (root.contains("loops")) {
    const Json& arr = as_array(root["loops"], "/loops");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = at("/loops", i);
      check_keys(arr[i], where, {"name", "steps"});
      const std::string& name = as_string(arr[i]["name"], at(where, "name"));
      std::vector<Step> steps = steps_from_json(arr[i]["steps"], at(where, "steps"));
      try {
        if (!scene.loops.emplace(name, Loop::make(scene.segments, std::move(steps))).second) duplicate("loop", name);
      } catch (const Error& e) {
        problems.push_back("loop '" + name + "': " + e.what());
      }
    }
  }

  if (root.contains("graphs")) {
    const Json& arr = as_array(root["graphs"], "/graphs");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = at("/graphs", i);
      check_keys(arr[i], where, {"name", "edges"});
      Graph g;
      g.name = as_string(arr[i]["name"], at(where, "name"));
      const Json& edges = as_array(arr[i]["edges"], at(where, "edges"));
      bool ok = true;
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string ew = at(at(where, "edges"), k);
        check_keys(edges[k], ew, {"name", "steps"});
        const std::string& edge_name = as_string(edges[k]["name"], at(ew, "name"));
        std::vector<Step> steps = steps_from_json(edges[k]["steps"], at(ew, "steps"));
        try {
          g.edges.push_back({edge_name, Path::make(scene.segments, std::move(steps))});
        } catch (const Error& e) {
          problems.push_back("graph '" + g.name + "' edge '" + edge_name + "': " + e.what());
          ok = false;
        }
      }
      if (!ok) continue;
      const std::string name = g.name;
      if (!scene.graphs.emplace(name, std::move(g)).second) duplicate("graph", name);
    }
  }

  if (root.contains("fields")) {
    const Json& arr = as_array(root["fields"], "/fields");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = at("/fields", i);
      check_keys(arr[i], where, {"name", "values"});
      const std::string& name = as_string(arr[i]["name"], at(where, "name"));
      if (!arr[i]["values"].is_object()) structure_error(at(where, "values"), "expected an object");
      FieldSample a;
      for (const auto& [seg, v] : arr[i]["values"].items()) {
        a.set(seg, as_rational(v, at(at(where, "values"), seg)));
      }
      if (!scene.fields.emplace(name, std::move(a)).second) duplicate("field", name);
    }
  }

  if (root.contains("gauges")) {
    const Json& arr = as_array(root["gauges"], "/gauges");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = at("/gauges", i);
      check_keys(arr[i], where, {"name", "values"});
      const std::string& name = as_string(arr[i]["name"], at(where, "name"));
      if (!arr[i]["values"].is_object()) structure_error(at(where, "values"), "expected an object");
      GaugeFunction f;
      for (const auto& [v, value] : arr[i]["values"].items()) {
        f.set(v, as_rational(value, at(at(where, "values"), v)));
      }
      if (!scene.gauges.emplace(name, std::move(f)).second) duplicate("gauge", name);
    }
  }

  if (root.contains("systems")) {
    const Json& arr = as_array(root["systems"], "/systems");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = at("/systems", i);
      check_keys(arr[i], where, {"name", "momenta"}, {"loops", "graph"});
      SystemDescription d;
      d.name = as_string(arr[i]["name"], at(where, "name"));
      if (arr[i].contains("loops")) {
        const Json& loops = as_array(arr[i]["loops"], at(where, "loops"));
        for (std::size_t k = 0; k < loops.size(); ++k) d.loops.push_back(as_string(loops[k], at(at(where, "loops"), k)));
      }
      if (arr[i].contains("graph")) d.graph = as_string(arr[i]["graph"], at(where, "graph"));
      const Json& momenta = as_array(arr[i]["momenta"], at(where, "momenta"));
      for (std::size_t k = 0; k < momenta.size(); ++k) {
        d.momenta.push_back(combo_from_json(momenta[k], at(at(where, "momenta"), k)));
      }
      const std::string name = d.name;
      if (!scene.systems.emplace(name, std::move(d)).second) duplicate("system", name);
    }
  }

  for (std::string& p : validate_scene(scene)) problems.push_back(std::move(p));
  if (!problems.empty()) {
    std::string message = std::to_string(problems.size()) + " problem(s)";
    for (const std::string& p : problems) message += "\n  - " + p;
    throw Error(ErrorCode::Validation, message);
  }
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot read scene file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scene(buffer.str());
}

Json scene_to_json(const Scene& scene) {
  Json root = Json::object();
  Json segments = Json::array();
  for (const auto& [id, s] : scene.segments) {
    segments.push_back({{"id", id.str()}, {"source", s.source.str()}, {"target", s.target.str()}});
  }
  root["segments"] = std::move(segments);
  if (!scene.refinements.empty()) {
    Json arr = Json::array();
    for (const RefinementRecord& r : scene.refinements) {
      arr.push_back({{"original", r.original.str()},
                     {"first", r.first.str()},
                     {"second", r.second.str()},
                     {"midpoint", r.midpoint.str()}});
    }
    root["refinements"] = std::move(arr);
  }
  if (!scene.faces.empty()) {
    Json arr = Json::array();
    for (const auto& [id, f] : scene.faces) {
      Json crossings = Json::array();
      for (const auto& [seg, c] : f.crossings) crossings.push_back(crossing_to_json(seg, c));
      arr.push_back({{"id", id.str()}, {"crossings", std::move(crossings)}});
    }
    root["faces"] = std::move(arr);
  }
  if (!scene.loops.empty()) {
    Json arr = Json::array();
    for (const auto& [name, l] : scene.loops) arr.push_back({{"name", name}, {"steps", steps_to_json(l.steps())}});
    root["loops"] = std::move(arr);
  }
  if (!scene.graphs.empty()) {
    Json arr = Json::array();
    for (const auto& [name, g] : scene.graphs) {
      Json edges = Json::array();
      for (const GraphEdge& e : g.edges) edges.push_back({{"name", e.name}, {"steps", steps_to_json(e.path.steps())}});
      arr.push_back({{"name", name}, {"edges", std::move(edges)}});
    }
    root["graphs"] = std::move(arr);
  }
  if (!scene.fields.empty()) {
    Json arr = Json::array();
    for (const auto& [name, a] : scene.fields) arr.push_back({{"name", name}, {"values", values_to_json(a.values)}});
    root["fields"] = std::move(arr);
  }
  if (!scene.gauges.empty()) {
    Json arr = Json::array();
    for (const auto& [name, f] : scene.gauges) arr.push_back({{"name", name}, {"values", values_to_json(f.values)}});
    root["gauges"] = std::move(arr);
  }
  if (!scene.systems.empty()) {
    Json arr = Json::array();
    for (const auto& [name, d] : scene.systems) {
      Json j{{"name", name}};
      if (d.graph) j["graph"] = *d.graph;
      if (!d.loops.empty()) j["loops"] = d.loops;
      Json momenta = Json::array();
      for (const FluxCombo& c : d.momenta) momenta.push_back(combo_to_json(c));
      j["momenta"] = std::move(momenta);
      arr.push_back(std::move(j));
    }
    root["systems"] = std::move(arr);
  }
  return root;
}

std::string serialize_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write scene file '" + path.string() + "'");
  out << serialize_scene(scene);
}

}  // namespace hoopflux
