#include "hoopflux/cli.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hoopflux/error.hpp"
#include "hoopflux/gauge.hpp"
#include "hoopflux/scene_io.hpp"

namespace hoopflux::cli {
namespace {

// ---------------------------------------------------------------------------
// Name lookup with suggestions

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

template <class Map>
std::vector<std::string> keys_of(const Map& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) {
    if constexpr (std::is_same_v<std::decay_t<decltype(k)>, std::string>) {
      out.push_back(k);
    } else {
      out.push_back(k.str());
    }
  }
  return out;
}

[[noreturn]] void unknown(const std::string& kind, const std::string& name, const std::vector<std::string>& known) {
  std::string message = "no " + kind + " named '" + name + "'";
  if (const std::string s = suggest(name, known); !s.empty()) message += " (did you mean '" + s + "'?)";
  throw Error(ErrorCode::UnknownName, message);
}

const Face& find_face(const Scene& scene, const std::string& name) {
  const auto it = scene.faces.find(name);
  if (it == scene.faces.end()) unknown("face", name, keys_of(scene.faces));
  return it->second;
}

const Loop& find_loop(const Scene& scene, const std::string& name) {
  const auto it = scene.loops.find(name);
  if (it == scene.loops.end()) unknown("loop", name, keys_of(scene.loops));
  return it->second;
}

const Graph& find_graph(const Scene& scene, const std::string& name) {
  const auto it = scene.graphs.find(name);
  if (it == scene.graphs.end()) unknown("graph", name, keys_of(scene.graphs));
  return it->second;
}

const SystemDescription& find_system(const Scene& scene, const std::string& name) {
  const auto it = scene.systems.find(name);
  if (it == scene.systems.end()) unknown("system", name, keys_of(scene.systems));
  return it->second;
}

const FieldSample& find_field(const Scene& scene, const std::string& name) {
  const auto it = scene.fields.find(name);
  if (it == scene.fields.end()) unknown("field", name, keys_of(scene.fields));
  return it->second;
}

const GaugeFunction& find_gauge(const Scene& scene, const std::string& name) {
  const auto it = scene.gauges.find(name);
  if (it == scene.gauges.end()) unknown("gauge", name, keys_of(scene.gauges));
  return it->second;
}

void require_segment(const Scene& scene, const std::string& name) {
  if (!scene.segments.count(name)) unknown("segment", name, keys_of(scene.segments));
}

FiniteSystem load_system(const Scene& scene, const std::string& name) {
  const SystemDescription& d = find_system(scene, name);
  if (d.graph) {
    throw Error(ErrorCode::InvalidArgument,
                "system '" + name + "' is defined over graph '" + *d.graph + "'; this verb needs a loop system");
  }
  std::vector<Chain> chains;
  for (const std::string& l : d.loops) chains.push_back(chain_of(find_loop(scene, l)));
  return make_system(scene, name, d.momenta, HoopSet::certified(d.loops, std::move(chains)));
}

UnconstrainedSystem load_unconstrained(const Scene& scene, const std::string& name) {
  const SystemDescription& d = find_system(scene, name);
  if (!d.graph) {
    throw Error(ErrorCode::InvalidArgument, "system '" + name + "' is a loop system; this verb needs a graph system");
  }
  find_graph(scene, *d.graph);
  return UnconstrainedSystem{name, d.momenta, *d.graph};
}

// ---------------------------------------------------------------------------
// JSON helpers

Json rational_json(const Rational& q) { return to_string(q); }

Json vector_json(const Vector& v) {
  Json j = Json::array();
  for (const Rational& q : v) j.push_back(rational_json(q));
  return j;
}

Json matrix_json(const Matrix& m) {
  Json j = Json::array();
  for (const Vector& row : m) j.push_back(vector_json(row));
  return j;
}

Json chain_json(const Chain& c) {
  Json j = Json::object();
  for (const auto& [seg, n] : c.coefficients()) j[seg.str()] = n;
  return j;
}

Json frame_json(const HoopSet& frame) {
  Json j = Json::array();
  for (std::size_t i = 0; i < frame.size(); ++i) {
    Json h{{"label", frame.labels[i]}, {"chain", chain_json(frame.chains[i])}};
    if (frame.certificate) h["exclusive"] = frame.certificate->exclusive[i].str();
    j.push_back(std::move(h));
  }
  return j;
}

Json combos_json(const std::vector<FluxCombo>& combos) {
  Json j = Json::array();
  for (const FluxCombo& c : combos) j.push_back(to_string(c));
  return j;
}

Json system_json(const Scene& scene, const FiniteSystem& s) {
  Json j{{"name", s.name}, {"frame", frame_json(s.frame)}, {"momenta", combos_json(s.momenta)}};
  if (s.frame.certificate && s.frame.size() == s.momenta.size()) {
    const GMatrix g = g_matrix(scene, s.momenta, s.frame);
    j["g"] = matrix_json(g.entries);
    j["determinant"] = rational_json(g.determinant);
  }
  j["nondegenerate"] = is_nondegenerate(scene, s);
  return j;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string variable_name(const std::string& label) {
  const bool plain = !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '~';
  });
  return plain ? "x_" + label : "x_{" + label + "}";
}

/// x1.. (1-based) or x_<label> / x_{<label>}.
VariableResolver label_resolver(const std::vector<std::string>& labels) {
  return [labels](std::string_view name) -> std::size_t {
    std::string n(name);
    if (n.size() >= 2 && n[0] == 'x' &&
        std::all_of(n.begin() + 1, n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const unsigned long k = std::stoul(n.substr(1));
      if (k >= 1 && k <= labels.size()) return k - 1;
      throw Error(ErrorCode::FrameMismatch, "variable '" + n + "' exceeds the " + std::to_string(labels.size()) +
                                                "-dimensional frame");
    }
    std::string label;
    if (n.rfind("x_{", 0) == 0 && n.back() == '}') {
      label = n.substr(3, n.size() - 4);
    } else if (n.rfind("x_", 0) == 0) {
      label = n.substr(2);
    }
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (label.empty() || it == labels.end()) {
      std::vector<std::string> known;
      for (const std::string& l : labels) known.push_back(variable_name(l));
      unknown("variable", n, known);
    }
    return static_cast<std::size_t>(it - labels.begin());
  };
}

VariableNamer label_namer(const std::vector<std::string>& labels) {
  return [labels](std::size_t i) { return i < labels.size() ? variable_name(labels[i]) : "x" + std::to_string(i + 1); };
}

std::string fresh_loop_name(const Scene& scene, const std::string& stem) {
  if (!scene.loops.count(stem)) return stem;
  for (std::size_t k = 1;; ++k) {
    const std::string candidate = stem + "~" + std::to_string(k);
    if (!scene.loops.count(candidate)) return candidate;
  }
}

/// Registers every frame hoop as a named loop and the system itself.
Scene export_system(Scene scene, const FiniteSystem& s) {
  SystemDescription d;
  d.name = s.name;
  d.momenta = s.momenta;
  for (std::size_t i = 0; i < s.frame.size(); ++i) {
    std::optional<Loop> rep = representative(scene.segments, s.frame.chains[i]);
    if (!rep) {
      throw Error(ErrorCode::InvalidArgument, "frame hoop '" + s.frame.labels[i] + "' has no single-loop representative");
    }
    const std::string name = fresh_loop_name(scene, s.name + "." + s.frame.labels[i]);
    scene.loops.emplace(name, std::move(*rep));
    d.loops.push_back(name);
  }
  scene.systems[d.name] = std::move(d);
  return scene;
}

/// 1-based indices or face names of single-face momenta.
std::vector<std::size_t> parse_hint(const std::string& text, const std::vector<FluxCombo>& momenta) {
  std::vector<std::size_t> out;
  for (const std::string& token : split(text, ',')) {
    if (std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const unsigned long k = std::stoul(token);
      if (k < 1 || k > momenta.size()) {
        throw Error(ErrorCode::InvalidArgument, "hint index " + token + " is out of range");
      }
      out.push_back(k - 1);
      continue;
    }
    const auto it = std::find(momenta.begin(), momenta.end(), FluxCombo::single(token));
    if (it == momenta.end()) {
      std::vector<std::string> names;
      for (const FluxCombo& c : momenta) names.push_back(to_string(c));
      unknown("momentum", token, names);
    }
    out.push_back(static_cast<std::size_t>(it - momenta.begin()));
  }
  return out;
}

Json constrained_json(const ConstrainedSystem& c, const UnconstrainedSystem& u) {
  Json loops = Json::array();
  for (std::size_t i = 0; i < c.loops.loops.size(); ++i) {
    loops.push_back({{"edge", c.loops.edges[i]},
                     {"label", c.loops.frame.labels[i]},
                     {"steps", steps_to_json(c.loops.loops[i].steps())}});
  }
  Json chosen = Json::array();
  for (std::size_t i : c.chosen) chosen.push_back(to_string(u.momenta[i]));
  Json kernel = Json::array();
  for (const Vector& v : c.kernel) {
    std::vector<FluxTerm> terms;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (const FluxTerm& t : u.momenta[i].terms()) terms.push_back({v[i] * t.coefficient, t.face});
    }
    kernel.push_back({{"coefficients", vector_json(v)}, {"combination", to_string(FluxCombo(std::move(terms)))}});
  }
  return Json{{"unconstrained", u.name},
              {"graph", u.graph},
              {"loops", std::move(loops)},
              {"restricted_epsilon", matrix_json(c.restricted)},
              {"annihilator", std::move(kernel)},
              {"annihilator_dimension", c.kernel.size()},
              {"chosen", std::move(chosen)},
              {"g", matrix_json(c.system.g)},
              {"nondegenerate", c.system.nondegenerate}};
}

// ---------------------------------------------------------------------------
// Text rendering of the structured report

void render(const Json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto is_flat = [](const Json& v) {
    return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) {
             return e.is_primitive() && (!e.is_string() || e.get<std::string>().find(' ') == std::string::npos);
           });
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_primitive()) {
        os << pad << k << ": " << scalar(v) << "\n";
      } else if (v.empty()) {
        os << pad << k << ": " << (v.is_object() ? "{}" : "[]") << "\n";
      } else if (is_flat(v)) {
        os << pad << k << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
        os << "]\n";
      } else {
        os << pad << k << ":\n";
        render(v, os, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const Json& v : j) {
      if (v.is_primitive()) {
        os << pad << "- " << scalar(v) << "\n";
      } else if (is_flat(v)) {
        os << pad << "- [";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
        os << "]\n";
      } else {
        os << pad << "-\n";
        render(v, os, indent + 2);
      }
    }
  } else {
    os << pad << scalar(j) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Verbs

struct Report {
  Json inputs = Json::object();
  Json result = Json::object();
  Json witnesses = Json::array();
  int status = 0;
  std::optional<Scene> written;
};

struct Options {
  std::string scene_path;
  std::string format = "text";
  std::string out_path;
  // verb arguments
  std::string face, loop, loops, faces, pool, system, coarser, segment, graph, poly, hint, finer_hint, coarser_hint,
      join, name, order = "asc", sample, polys, field, gauge;
};

Report verb_validate(const Scene& scene, const Options&) {
  Report r;
  r.result = Json{{"valid", true},
                  {"segments", scene.segments.size()},
                  {"faces", scene.faces.size()},
                  {"loops", scene.loops.size()},
                  {"graphs", scene.graphs.size()},
                  {"fields", scene.fields.size()},
                  {"gauges", scene.gauges.size()},
                  {"systems", scene.systems.size()},
                  {"refinements", scene.refinements.size()}};
  for (const auto& [name, g] : scene.graphs) {
    r.witnesses.push_back("graph '" + name + "': " + std::to_string(g.edges.size()) + " edges, " +
                          std::to_string(graph_vertices(g).size()) + " vertices");
  }
  return r;
}

Report verb_hoop_reduce(const Scene& scene, const Options& o) {
  Report r;
  std::vector<std::string> names = o.loops.empty() ? keys_of(scene.loops) : split(o.loops, ',');
  std::vector<Loop> loops;
  for (const std::string& n : names) loops.push_back(find_loop(scene, n));
  if (o.order != "asc" && o.order != "desc") throw Error(ErrorCode::InvalidArgument, "--order must be asc or desc");
  r.inputs = Json{{"loops", names}, {"order", o.order}};
  const BasisResult b =
      independent_basis(scene.segments, loops, o.order == "asc" ? ForestOrder::Ascending : ForestOrder::Descending);
  Json basis = frame_json(b.basis);
  for (std::size_t i = 0; i < b.loops.size(); ++i) basis[i]["steps"] = steps_to_json(b.loops[i].steps());
  Json decompositions = Json::object();
  for (std::size_t i = 0; i < names.size(); ++i) decompositions[names[i]] = b.decompositions[i];
  r.result = Json{{"rank", b.basis.size()}, {"basis", std::move(basis)}, {"decompositions", std::move(decompositions)}};
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (is_trivial(loops[i])) r.witnesses.push_back("loop '" + names[i] + "' is a trivial hoop");
  }
  return r;
}

Report verb_epsilon(const Scene& scene, const Options& o) {
  Report r;
  const Face& f = find_face(scene, o.face);
  r.inputs = Json{{"face", o.face}};
  Json steps = Json::array();
  if (!o.loop.empty()) {
    const Loop& l = find_loop(scene, o.loop);
    r.inputs["loop"] = o.loop;
    const CrossingCounts c = crossing_counts(f, l.path());
    r.result = Json{{"epsilon", epsilon_loop(f, l).str()},
                    {"epsilon_hoop", epsilon_hoop(f, chain_of(l)).str()},
                    {"counts", {{"t_plus", c.t_plus}, {"s_plus", c.s_plus}, {"t_minus", c.t_minus}, {"s_minus", c.s_minus}}}};
    for (const Step& s : l.steps()) {
      const Crossing c = f.classify(s);
      if (c.kind != CrossingKind::Disjoint) r.witnesses.push_back(to_string(s) + ": " + to_string(c));
    }
  } else if (!o.graph.empty()) {
    const Graph& g = find_graph(scene, o.graph);
    r.inputs["graph"] = o.graph;
    Json edges = Json::object();
    for (const GraphEdge& e : g.edges) edges[e.name] = epsilon_edge(f, e.path);
    r.result = Json{{"edge_epsilon", std::move(edges)}};
  } else {
    throw Error(ErrorCode::InvalidArgument, "epsilon needs --loop or --graph");
  }
  return r;
}

Report verb_check_face(const Scene& scene, const Options& o) {
  Report r;
  const Face& f = find_face(scene, o.face);
  std::vector<std::string> names = o.loops.empty() ? keys_of(scene.loops) : split(o.loops, ',');
  std::vector<Loop> pool;
  for (const std::string& n : names) pool.push_back(find_loop(scene, n));
  r.inputs = Json{{"face", o.face}, {"loops", names}};
  const FaceWitness w = face_validity(f, pool);
  r.result = Json{{"valid", true}, {"witness", names[w.index]}, {"epsilon", w.epsilon.str()}};
  for (const auto& [seg, c] : f.crossings) r.witnesses.push_back(seg.str() + ": " + to_string(c));
  return r;
}

Report verb_build_system(const Scene& scene, const Options& o) {
  Report r;
  const std::string name = o.name.empty() ? "built" : o.name;
  r.inputs = Json{{"name", name}};
  const int modes = !o.loops.empty() + !o.faces.empty() + !o.join.empty();
  if (modes != 1) throw Error(ErrorCode::InvalidArgument, "build-system needs exactly one of --loops, --faces, --join");
  SceneSystem built;
  if (!o.loops.empty()) {
    r.inputs["loops"] = split(o.loops, ',');
    std::vector<Loop> loops;
    for (const std::string& n : split(o.loops, ',')) loops.push_back(find_loop(scene, n));
    built = extend_to_system(scene, loops, name);
  } else if (!o.faces.empty()) {
    r.inputs["faces"] = split(o.faces, ',');
    std::vector<FaceId> faces;
    for (const std::string& n : split(o.faces, ',')) faces.push_back(find_face(scene, n).id);
    std::vector<std::string> pool_names = o.pool.empty() ? keys_of(scene.loops) : split(o.pool, ',');
    r.inputs["pool"] = pool_names;
    std::vector<Loop> pool;
    for (const std::string& n : pool_names) pool.push_back(find_loop(scene, n));
    built = extend_to_system_momentum(scene, faces, pool, name);
  } else {
    const std::vector<std::string> pair = split(o.join, ',');
    if (pair.size() != 2) throw Error(ErrorCode::InvalidArgument, "--join takes two system names");
    r.inputs["join"] = pair;
    const FiniteSystem a = load_system(scene, pair[0]);
    const FiniteSystem b = load_system(scene, pair[1]);
    built = common_refinement(scene, a, b, name);
    const SystemOrderWitness wa = system_geq(built.scene, built.system, normalize(built.scene, a));
    const SystemOrderWitness wb = system_geq(built.scene, built.system, normalize(built.scene, b));
    r.witnesses.push_back(Json{{"coarser", pair[0]}, {"momentum", matrix_json(wa.momentum)}, {"hoops", wa.hoops.matrix}});
    r.witnesses.push_back(Json{{"coarser", pair[1]}, {"momentum", matrix_json(wb.momentum)}, {"hoops", wb.hoops.matrix}});
  }
  r.result = system_json(built.scene, built.system);
  Json added = Json::array();
  for (const auto& [id, f] : built.scene.faces) {
    if (!scene.faces.count(id)) added.push_back(id.str());
  }
  r.result["added_faces"] = std::move(added);
  r.result["refinements"] = built.scene.refinements.size() - scene.refinements.size();
  r.written = export_system(built.scene, built.system);
  return r;
}

Report verb_check_system(const Scene& scene, const Options& o) {
  Report r;
  r.inputs = Json{{"system", o.system}};
  const SystemDescription& d = find_system(scene, o.system);
  if (d.graph) {
    const UnconstrainedSystem u = load_unconstrained(scene, o.system);
    const Graph& g = find_graph(scene, u.graph);
    const Matrix gm = unconstrained_g(scene, u);
    Json edges = Json::array();
    for (const GraphEdge& e : g.edges) edges.push_back(e.name);
    r.result = Json{{"name", u.name}, {"graph", u.graph}, {"edges", std::move(edges)},
                    {"momenta", combos_json(u.momenta)}, {"g", matrix_json(gm)},
                    {"nondegenerate", is_nondegenerate(scene, u)}};
    if (gm.size() == g.edges.size()) r.result["determinant"] = rational_json(determinant(gm));
    if (!o.coarser.empty()) {
      r.inputs["coarser"] = o.coarser;
      unconstrained_geq(scene, u, load_unconstrained(scene, o.coarser));
      r.result["geq"] = true;
    }
    return r;
  }
  const FiniteSystem s = load_system(scene, o.system);
  r.result = system_json(scene, s);
  if (!o.coarser.empty()) {
    r.inputs["coarser"] = o.coarser;
    const SystemOrderWitness w = system_geq(scene, s, load_system(scene, o.coarser));
    r.result["geq"] = true;
    r.witnesses.push_back(Json{{"momentum", matrix_json(w.momentum)}, {"hoops", w.hoops.matrix}});
  }
  return r;
}

Report verb_refine(const Scene& scene, const Options& o) {
  Report r;
  require_segment(scene, o.segment);
  r.inputs = Json{{"segment", o.segment}};
  RefinedScene refined = refine_segment(scene, o.segment);
  const RefinementRecord& rec = refined.record;
  r.result = Json{{"original", rec.original.str()},
                  {"first", rec.first.str()},
                  {"second", rec.second.str()},
                  {"midpoint", rec.midpoint.str()}};
  for (const auto& [id, f] : scene.faces) {
    const Crossing c = f.classify(rec.original);
    if (c.kind == CrossingKind::Disjoint) continue;
    const Face& nf = refined.scene.faces.at(id);
    r.witnesses.push_back(id.str() + ": " + rec.first.str() + " " + to_string(nf.classify(rec.first)) + ", " +
                          rec.second.str() + " " + to_string(nf.classify(rec.second)));
  }
  r.written = std::move(refined.scene);
  return r;
}

Report verb_gauge_reduce(const Scene& scene, const Options& o) {
  Report r;
  const Graph& g = find_graph(scene, o.graph);
  std::vector<std::string> edge_names;
  for (const GraphEdge& e : g.edges) edge_names.push_back(e.name);
  const Polynomial p = parse_polynomial(o.poly, label_resolver(edge_names));
  r.inputs = Json{{"graph", o.graph}, {"poly", o.poly}};
  const MaximalTree tree = maximal_tree(g);
  const LoopBasis lb = loop_basis(g, tree);
  r.result["tree"] = tree.edges;
  Json roots = Json::array();
  for (const VertexId& v : tree.roots) roots.push_back(v.str());
  r.result["roots"] = std::move(roots);
  Json loops = Json::array();
  for (std::size_t i = 0; i < lb.loops.size(); ++i) {
    loops.push_back({{"edge", lb.edges[i]}, {"label", lb.frame.labels[i]}, {"steps", steps_to_json(lb.loops[i].steps())}});
  }
  r.result["loops"] = std::move(loops);
  for (const auto& [v, d] : gauge_directions(g)) {
    const Polynomial dp = directional_derivative(p, d);
    if (!dp.is_zero()) r.witnesses.push_back("d_" + v.str() + " P = " + format(dp, label_namer(edge_names)));
  }
  const std::variant<Rational, CylFunction> reduced = gauge_reduce(g, p);
  if (const Rational* c = std::get_if<Rational>(&reduced)) {
    r.result["constant"] = rational_json(*c);
  } else {
    const CylFunction& psi = std::get<CylFunction>(reduced);
    r.result["reduced"] = format(psi.poly, label_namer(psi.frame.labels));
  }
  if (!o.field.empty()) {
    const FieldSample& a = find_field(scene, o.field);
    r.inputs["field"] = o.field;
    const Rational lhs = evaluate(p, edge_coordinates(g, a));
    const Rational rhs = std::holds_alternative<Rational>(reduced)
                             ? std::get<Rational>(reduced)
                             : evaluate(std::get<CylFunction>(reduced).poly,
                                        coordinate_map(std::get<CylFunction>(reduced).frame, a));
    r.result["value"] = rational_json(lhs);
    r.result["reduced_value"] = rational_json(rhs);
    if (!o.gauge.empty()) {
      r.inputs["gauge"] = o.gauge;
      const FieldSample moved = gauge_transform(scene, a, find_gauge(scene, o.gauge));
      r.result["transformed_value"] = rational_json(evaluate(p, edge_coordinates(g, moved)));
    }
  }
  return r;
}

Report verb_constrain(const Scene& scene, const Options& o) {
  Report r;
  const UnconstrainedSystem u = load_unconstrained(scene, o.system);
  r.inputs = Json{{"system", o.system}};
  std::optional<std::vector<std::size_t>> hint;
  if (!o.hint.empty()) {
    hint = parse_hint(o.hint, u.momenta);
    r.inputs["hint"] = o.hint;
  }
  const ConstrainedSystem c = constrain_system(scene, u, hint);
  r.result = constrained_json(c, u);
  r.witnesses.push_back("annihilator dimension " + std::to_string(c.kernel.size()) + " = " +
                        std::to_string(u.momenta.size()) + " momenta - " + std::to_string(c.loops.loops.size()) +
                        " loops");
  if (!o.out_path.empty()) {
    FiniteSystem s = c.system;
    s.name = o.name.empty() ? s.name : o.name;
    r.written = export_system(scene, s);
  }
  return r;
}

Report verb_probe_order(const Scene& scene, const Options& o) {
  Report r;
  const UnconstrainedSystem finer = load_unconstrained(scene, o.system);
  const UnconstrainedSystem coarser = load_unconstrained(scene, o.coarser);
  r.inputs = Json{{"finer", o.system}, {"coarser", o.coarser}};
  std::optional<std::vector<std::size_t>> fh;
  std::optional<std::vector<std::size_t>> ch;
  if (!o.finer_hint.empty()) {
    fh = parse_hint(o.finer_hint, finer.momenta);
    r.inputs["finer_hint"] = o.finer_hint;
  }
  if (!o.coarser_hint.empty()) {
    ch = parse_hint(o.coarser_hint, coarser.momenta);
    r.inputs["coarser_hint"] = o.coarser_hint;
  }
  const OrderProbe probe = order_preservation_probe(scene, finer, coarser, fh, ch);
  r.result = Json{{"unconstrained_geq", true},
                  {"finer", constrained_json(probe.finer, finer)},
                  {"coarser", constrained_json(probe.coarser, coarser)},
                  {"constrained_geq", probe.comparable}};
  if (!probe.comparable) r.witnesses.push_back(probe.reason);
  return r;
}

Report verb_verify(const Scene& scene, const Options& o) {
  Report r;
  std::vector<std::string> names = split(o.sample, ',');
  std::vector<FiniteSystem> sample;
  for (const std::string& n : names) sample.push_back(load_system(scene, n));
  VerificationProbes probes;
  std::vector<std::string> loop_names = o.loops.empty() ? keys_of(scene.loops) : split(o.loops, ',');
  for (const std::string& n : loop_names) probes.loops.push_back(find_loop(scene, n));
  std::vector<std::string> face_names = o.faces.empty() ? keys_of(scene.faces) : split(o.faces, ',');
  for (const std::string& n : face_names) probes.faces.push_back(find_face(scene, n).id);
  std::vector<std::string> poly_texts = split(o.polys, ';');
  for (const std::string& t : poly_texts) probes.polynomials.push_back(parse_polynomial(t));
  r.inputs = Json{{"sample", names}, {"loops", loop_names}, {"faces", face_names}, {"polys", poly_texts}};
  const AssumptionReport report = verify_assumptions(scene, sample, probes);
  Json rows = Json::array();
  for (const AssumptionResult& a : report.results) {
    rows.push_back({{"id", a.id}, {"title", a.title}, {"passed", a.passed}, {"warnings", a.warnings}});
    for (const std::string& w : a.witnesses) r.witnesses.push_back(a.id + ": " + w);
  }
  r.result = Json{{"assumptions", std::move(rows)}, {"all_passed", report.all_passed()}};
  r.status = report.all_passed() ? 0 : 1;
  return r;
}

void render_table(const Json& result, std::ostream& os) {
  for (const Json& row : result["assumptions"]) {
    os << (row["passed"].get<bool>() ? "PASS  " : "FAIL  ") << row["id"].get<std::string>() << "  "
       << row["title"].get<std::string>() << "\n";
    for (const Json& w : row["warnings"]) os << "      warning: " << w.get<std::string>() << "\n";
  }
}

}  // namespace

std::string suggest(const std::string& name, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_distance = std::max<std::size_t>(2, name.size() / 3) + 1;
  for (const std::string& c : candidates) {
    const std::size_t d = edit_distance(name, c);
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  return best;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact hoop, flux and gauge-reduction calculus on combinatorial scenes", "hoopflux"};
  app.require_subcommand(1);
  Options o;

  using Handler = std::function<Report(const Scene&, const Options&)>;
  std::vector<std::pair<CLI::App*, Handler>> verbs;
  auto verb = [&](const std::string& name, const std::string& description, Handler handler) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("scene", o.scene_path, "Scene file (JSON)")->required();
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    verbs.emplace_back(sub, std::move(handler));
    return sub;
  };

  verb("validate", "Parse and validate a scene", verb_validate);
  {
    CLI::App* s = verb("hoop-reduce", "Independent hoop basis of a set of loops", verb_hoop_reduce);
    s->add_option("--loops", o.loops, "Comma-separated loop names (default: all)");
    s->add_option("--order", o.order, "Spanning forest order")->check(CLI::IsMember({"asc", "desc"}));
  }
  {
    CLI::App* s = verb("epsilon", "Signed crossing number of a face with a loop or graph edges", verb_epsilon);
    s->add_option("--face", o.face, "Face id")->required();
    s->add_option("--loop", o.loop, "Loop name");
    s->add_option("--graph", o.graph, "Graph name (per-edge numbers)");
  }
  {
    CLI::App* s = verb("check-face", "Find a loop witnessing that a face is valid", verb_check_face);
    s->add_option("--face", o.face, "Face id")->required();
    s->add_option("--loops", o.loops, "Witness pool (default: all loops)");
  }
  {
    CLI::App* s = verb("build-system", "Extend loops or faces to a system, or join two systems", verb_build_system);
    s->add_option("--loops", o.loops, "Loops to extend");
    s->add_option("--faces", o.faces, "Faces to extend");
    s->add_option("--pool", o.pool, "Witness loops for --faces (default: all loops)");
    s->add_option("--join", o.join, "Two system names");
    s->add_option("--name", o.name, "Name of the new system");
    s->add_option("--out", o.out_path, "Write the extended scene here");
  }
  {
    CLI::App* s = verb("check-system", "Nondegeneracy and, optionally, order against another system",
                       verb_check_system);
    s->add_option("--system", o.system, "System name")->required();
    s->add_option("--coarser", o.coarser, "Check system >= coarser");
  }
  {
    CLI::App* s = verb("refine", "Split a segment at a fresh midpoint", verb_refine);
    s->add_option("--segment", o.segment, "Segment id")->required();
    s->add_option("--out", o.out_path, "Write the refined scene here");
  }
  {
    CLI::App* s = verb("gauge-reduce", "Reduce a gauge-invariant edge polynomial to the loop frame",
                       verb_gauge_reduce);
    s->add_option("--graph", o.graph, "Graph name")->required();
    s->add_option("--poly", o.poly, "Polynomial in x_<edge> or x1, x2, ...")->required();
    s->add_option("--field", o.field, "Evaluate both sides on this field sample");
    s->add_option("--gauge", o.gauge, "With --field, also evaluate on the gauge-transformed sample");
  }
  {
    CLI::App* s = verb("constrain", "Constrained system from an unconstrained graph system", verb_constrain);
    s->add_option("--system", o.system, "Unconstrained system name")->required();
    s->add_option("--hint", o.hint, "Kept momenta: 1-based indices or face names");
    s->add_option("--name", o.name, "Name of the exported system");
    s->add_option("--out", o.out_path, "Write a scene with the constrained system here");
  }
  {
    CLI::App* s = verb("probe-order", "Does constraining preserve the order of two systems?", verb_probe_order);
    s->add_option("--finer", o.system, "Finer unconstrained system")->required();
    s->add_option("--coarser", o.coarser, "Coarser unconstrained system")->required();
    s->add_option("--finer-hint", o.finer_hint, "Complement hint for the finer system");
    s->add_option("--coarser-hint", o.coarser_hint, "Complement hint for the coarser system");
  }
  {
    CLI::App* s = verb("verify-assumptions", "Run the assumption suite on sample systems", verb_verify);
    s->add_option("--sample", o.sample, "Comma-separated loop-system names")->required();
    s->add_option("--loops", o.loops, "Probe loops (default: all)");
    s->add_option("--faces", o.faces, "Probe faces (default: all)");
    s->add_option("--polys", o.polys, "Semicolon-separated probe polynomials in x1, x2, ...");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  CLI::App* chosen = nullptr;
  Handler handler;
  for (auto& [sub, h] : verbs) {
    if (sub->parsed()) {
      chosen = sub;
      handler = h;
    }
  }
  const std::string verb_name = chosen->get_name();
  const bool json = o.format == "json";
  auto emit_error = [&](const std::string& kind, const std::string& message) {
    err << "error: " << kind << ": " << message << "\n";
    if (json) {
      Json j{{"verb", verb_name},
             {"inputs", Json::object()},
             {"result", nullptr},
             {"witnesses", Json::array()},
             {"error", {{"kind", kind}, {"message", message}}}};
      out << j.dump(2) << "\n";
    }
  };

  try {
    const Scene scene = load_scene(o.scene_path);
    Report r = handler(scene, o);
    if (r.written) {
      if (o.out_path.empty()) {
        if (verb_name == "refine") throw Error(ErrorCode::InvalidArgument, "refine needs --out");
      } else {
        if (std::filesystem::exists(o.out_path) && std::filesystem::equivalent(o.out_path, o.scene_path)) {
          throw Error(ErrorCode::InvalidArgument, "--out may not overwrite the input scene");
        }
        save_scene(*r.written, o.out_path);
        r.inputs["out"] = o.out_path;
      }
    }
    Json report{{"verb", verb_name}, {"inputs", r.inputs}, {"result", r.result}, {"witnesses", r.witnesses}};
    if (json) {
      out << report.dump(2) << "\n";
    } else if (verb_name == "verify-assumptions") {
      render_table(r.result, out);
      for (const Json& w : r.witnesses) out << "  " << w.get<std::string>() << "\n";
    } else {
      out << verb_name << "\n";
      render(Json{{"inputs", r.inputs}, {"result", r.result}, {"witnesses", r.witnesses}}, out, 2);
    }
    return r.status;
  } catch (const Error& e) {
    emit_error(std::string(to_string(e.code())), e.detail());
    return is_domain_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    emit_error("Error", e.what());
    return 2;
  }
}

}  // namespace hoopflux::cli
