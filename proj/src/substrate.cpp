#include "hoopflux/substrate.hpp"

#include <algorithm>
#include <unordered_set>

#include "hoopflux/error.hpp"

namespace hoopflux {

// ---------------------------------------------------------------------------
// Paths and loops

const VertexId& step_source(const Segment& segment, Direction direction) {
  return direction == Direction::Forward ? segment.source : segment.target;
}

const VertexId& step_target(const Segment& segment, Direction direction) {
  return direction == Direction::Forward ? segment.target : segment.source;
}

namespace {

const Segment& lookup(const SegmentRegistry& registry, const SegmentId& id) {
  auto it = registry.find(id);
  if (it == registry.end()) {
    throw Error(ErrorCode::UnknownSegment, "segment '" + id.str() + "' does not exist");
  }
  return it->second;
}

Direction flipped(Direction d) { return d == Direction::Forward ? Direction::Reverse : Direction::Forward; }

}  // namespace

Path Path::make(const SegmentRegistry& registry, std::vector<Step> steps) {
  if (steps.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a path needs at least one step");
  }
  const VertexId source = step_source(lookup(registry, steps.front().segment), steps.front().direction);
  VertexId at = source;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Segment& seg = lookup(registry, steps[k].segment);
    if (step_source(seg, steps[k].direction) != at) {
      throw Error(ErrorCode::Chaining, "step " + std::to_string(k) + " (" + seg.id.str() + ") starts at '" +
                                           step_source(seg, steps[k].direction).str() + "' but the path is at '" +
                                           at.str() + "'");
    }
    at = step_target(seg, steps[k].direction);
  }
  return Path(std::move(steps), source, at);
}

std::vector<VertexId> Path::vertices(const SegmentRegistry& registry) const {
  std::vector<VertexId> out;
  out.reserve(steps_.size() + 1);
  out.push_back(source_);
  for (const Step& step : steps_) {
    out.push_back(step_target(lookup(registry, step.segment), step.direction));
  }
  return out;
}

Path compose(std::span<const Path> paths) {
  if (paths.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot compose an empty list of paths");
  }
  std::vector<Step> steps;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    if (k > 0 && paths[k - 1].target() != paths[k].source()) {
      throw Error(ErrorCode::Chaining, "path " + std::to_string(k - 1) + " ends at '" + paths[k - 1].target().str() +
                                           "' but path " + std::to_string(k) + " starts at '" +
                                           paths[k].source().str() + "'");
    }
    steps.insert(steps.end(), paths[k].steps().begin(), paths[k].steps().end());
  }
  return Path(std::move(steps), paths.front().source(), paths.back().target());
}

Path compose(const Path& first, const Path& second) {
  const Path both[] = {first, second};
  return compose(both);
}

Path reverse(const Path& path) {
  std::vector<Step> steps;
  steps.reserve(path.steps().size());
  for (auto it = path.steps().rbegin(); it != path.steps().rend(); ++it) {
    steps.push_back({it->segment, flipped(it->direction)});
  }
  return Path(std::move(steps), path.target(), path.source());
}

Loop Loop::make(Path path) {
  if (!path.is_closed()) {
    throw Error(ErrorCode::Chaining,
                "loop starts at '" + path.source().str() + "' but ends at '" + path.target().str() + "'");
  }
  return Loop(std::move(path));
}

Loop Loop::make(const SegmentRegistry& registry, std::vector<Step> steps) {
  return make(Path::make(registry, std::move(steps)));
}

Loop reverse(const Loop& loop) { return Loop::make(reverse(loop.path())); }

// ---------------------------------------------------------------------------
// Faces

Crossing Crossing::reversed() const {
  if (kind != CrossingKind::Transversal) return *this;
  return transversal(end == Endpoint::AtSource ? Endpoint::AtTarget : Endpoint::AtSource, side);
}

bool operator==(const Crossing& a, const Crossing& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != CrossingKind::Transversal) return true;
  return a.end == b.end && a.side == b.side;
}

Crossing Face::classify(const SegmentId& segment) const {
  auto it = crossings.find(segment);
  return it == crossings.end() ? Crossing::disjoint() : it->second;
}

Crossing Face::classify(const Step& step) const {
  const Crossing c = classify(step.segment);
  return step.direction == Direction::Forward ? c : c.reversed();
}

void Face::set(const SegmentId& segment, Crossing crossing) {
  if (crossing.kind == CrossingKind::Disjoint) {
    crossings.erase(segment);
  } else {
    crossings[segment] = crossing;
  }
}

Face flip_orientation(const Face& face, FaceId new_id) {
  Face out{std::move(new_id), {}};
  for (const auto& [seg, c] : face.crossings) {
    if (c.kind == CrossingKind::Transversal) {
      out.set(seg, Crossing::transversal(c.end, c.side == Side::Above ? Side::Below : Side::Above));
    } else {
      out.set(seg, c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field samples, gauge functions

Rational FieldSample::at(const SegmentId& segment) const {
  auto it = values.find(segment);
  return it == values.end() ? Rational(0) : it->second;
}

void FieldSample::set(const SegmentId& segment, const Rational& value) {
  if (value == 0) {
    values.erase(segment);
  } else {
    values[segment] = value;
  }
}

Rational GaugeFunction::at(const VertexId& vertex) const {
  auto it = values.find(vertex);
  return it == values.end() ? Rational(0) : it->second;
}

void GaugeFunction::set(const VertexId& vertex, const Rational& value) {
  if (value == 0) {
    values.erase(vertex);
  } else {
    values[vertex] = value;
  }
}

// ---------------------------------------------------------------------------
// Flux combinations

FluxCombo::FluxCombo(std::vector<FluxTerm> terms) {
  std::map<FaceId, Rational> merged;
  for (FluxTerm& t : terms) merged[t.face] += t.coefficient;
  for (auto& [face, coefficient] : merged) {
    if (coefficient != 0) terms_.push_back({coefficient, face});
  }
}

FluxCombo FluxCombo::single(FaceId face, const Rational& coefficient) {
  return FluxCombo({FluxTerm{coefficient, std::move(face)}});
}

FluxCombo FluxCombo::operator+(const FluxCombo& other) const {
  std::vector<FluxTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return FluxCombo(std::move(all));
}

FluxCombo FluxCombo::scaled(const Rational& factor) const {
  std::vector<FluxTerm> all = terms_;
  for (FluxTerm& t : all) t.coefficient *= factor;
  return FluxCombo(std::move(all));
}

// ---------------------------------------------------------------------------
// Graphs

const GraphEdge& Graph::edge(const std::string& edge_name) const {
  for (const GraphEdge& e : edges) {
    if (e.name == edge_name) return e;
  }
  throw Error(ErrorCode::UnknownName, "graph '" + name + "' has no edge '" + edge_name + "'");
}

std::optional<std::size_t> Graph::index_of(const std::string& edge_name) const {
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].name == edge_name) return k;
  }
  return std::nullopt;
}

std::vector<std::string> validate_graph(const SegmentRegistry& registry, const Graph& graph) {
  std::vector<std::string> problems;
  const std::string where = "graph '" + graph.name + "': ";
  std::set<std::string> names;
  std::map<SegmentId, std::string> owner;
  std::map<VertexId, std::string> interior_owner;
  std::map<VertexId, std::vector<std::string>> endpoint_users;
  for (const GraphEdge& e : graph.edges) {
    if (e.name.empty()) problems.push_back(where + "edge with empty name");
    if (!names.insert(e.name).second) problems.push_back(where + "duplicate edge name '" + e.name + "'");
    if (e.path.source() == e.path.target()) {
      problems.push_back(where + "edge '" + e.name + "' violates the two-point boundary rule (source = target)");
    }
    std::vector<VertexId> verts;
    try {
      verts = e.path.vertices(registry);
    } catch (const Error& err) {
      problems.push_back(where + "edge '" + e.name + "': " + err.what());
      continue;
    }
    std::set<VertexId> seen(verts.begin(), verts.end());
    if (seen.size() != verts.size()) {
      problems.push_back(where + "edge '" + e.name + "' is not embedded (revisits a vertex)");
    }
    for (const Step& s : e.path.steps()) {
      auto [it, fresh] = owner.emplace(s.segment, e.name);
      if (!fresh && it->second != e.name) {
        problems.push_back(where + "edges '" + it->second + "' and '" + e.name + "' share segment '" +
                           s.segment.str() + "'");
      }
    }
    for (std::size_t k = 1; k + 1 < verts.size(); ++k) interior_owner.emplace(verts[k], e.name);
    endpoint_users[verts.front()].push_back(e.name);
    endpoint_users[verts.back()].push_back(e.name);
  }
  for (const GraphEdge& e : graph.edges) {
    std::vector<VertexId> verts;
    try {
      verts = e.path.vertices(registry);
    } catch (const Error&) {
      continue;
    }
    for (std::size_t k = 0; k < verts.size(); ++k) {
      auto it = interior_owner.find(verts[k]);
      if (it != interior_owner.end() && it->second != e.name) {
        problems.push_back(where + "edge '" + e.name + "' meets the interior of edge '" + it->second +
                           "' at vertex '" + verts[k].str() + "'");
      }
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Scene lookups and fresh names

const Segment& segment(const Scene& scene, const SegmentId& id) { return lookup(scene.segments, id); }

const Face& face(const Scene& scene, const FaceId& id) {
  auto it = scene.faces.find(id);
  if (it == scene.faces.end()) throw Error(ErrorCode::UnknownName, "face '" + id.str() + "' does not exist");
  return it->second;
}

const Loop& loop(const Scene& scene, const std::string& name) {
  auto it = scene.loops.find(name);
  if (it == scene.loops.end()) throw Error(ErrorCode::UnknownName, "loop '" + name + "' does not exist");
  return it->second;
}

const Graph& graph(const Scene& scene, const std::string& name) {
  auto it = scene.graphs.find(name);
  if (it == scene.graphs.end()) throw Error(ErrorCode::UnknownName, "graph '" + name + "' does not exist");
  return it->second;
}

std::set<VertexId> vertices(const Scene& scene) {
  std::set<VertexId> out;
  for (const auto& [id, seg] : scene.segments) {
    out.insert(seg.source);
    out.insert(seg.target);
  }
  for (const RefinementRecord& r : scene.refinements) out.insert(r.midpoint);
  for (const auto& [name, g] : scene.gauges) {
    for (const auto& [v, value] : g.values) out.insert(v);
  }
  return out;
}

namespace {

bool segment_name_taken(const Scene& scene, const std::string& candidate) {
  if (scene.segments.count(SegmentId(candidate))) return true;
  for (const RefinementRecord& r : scene.refinements) {
    if (r.original.str() == candidate) return true;
  }
  return false;
}

template <class Taken>
std::string first_free(const std::string& stem, Taken taken) {
  if (!taken(stem)) return stem;
  for (std::size_t k = 2;; ++k) {
    std::string candidate = stem + "~" + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

}  // namespace

SegmentId fresh_segment_id(const Scene& scene, const std::string& stem) {
  return first_free(stem, [&](const std::string& c) { return segment_name_taken(scene, c); });
}

VertexId fresh_vertex_id(const Scene& scene, const std::string& stem) {
  const std::set<VertexId> used = vertices(scene);
  return first_free(stem, [&](const std::string& c) { return used.count(VertexId(c)) > 0; });
}

FaceId fresh_face_id(const Scene& scene, const std::string& stem) {
  return first_free(stem, [&](const std::string& c) { return scene.faces.count(FaceId(c)) > 0; });
}

void add_segment(Scene& scene, Segment seg) {
  if (seg.source == seg.target) {
    throw Error(ErrorCode::Validation, "segment '" + seg.id.str() + "' violates the two-point boundary rule");
  }
  if (segment_name_taken(scene, seg.id.str())) {
    throw Error(ErrorCode::Validation, "segment id '" + seg.id.str() + "' is already used");
  }
  SegmentId id = seg.id;
  scene.segments.emplace(std::move(id), std::move(seg));
}

std::vector<std::string> validate_scene(const Scene& scene) {
  std::vector<std::string> problems;
  for (const auto& [id, seg] : scene.segments) {
    if (id != seg.id) problems.push_back("segment key '" + id.str() + "' differs from its id '" + seg.id.str() + "'");
    if (id.empty()) problems.push_back("segment with empty id");
    if (!id.str().empty() && id.str().front() == '-') {
      problems.push_back("segment id '" + id.str() + "' may not start with '-'");
    }
    if (seg.source == seg.target) {
      problems.push_back("segment '" + id.str() + "' violates the two-point boundary rule (source = target = '" +
                         seg.source.str() + "')");
    }
  }
  std::set<SegmentId> retired;
  for (const RefinementRecord& r : scene.refinements) {
    if (scene.segments.count(r.original)) {
      problems.push_back("refined segment '" + r.original.str() + "' is still live");
    }
    if (!retired.insert(r.original).second) {
      problems.push_back("segment '" + r.original.str() + "' refined twice");
    }
  }
  for (const RefinementRecord& r : scene.refinements) {
    for (const SegmentId& child : {r.first, r.second}) {
      if (!scene.segments.count(child) && !retired.count(child)) {
        problems.push_back("refinement of '" + r.original.str() + "' names unknown segment '" + child.str() + "'");
      }
    }
  }
  for (const auto& [id, f] : scene.faces) {
    if (id != f.id) problems.push_back("face key '" + id.str() + "' differs from its id '" + f.id.str() + "'");
    for (const auto& [seg, c] : f.crossings) {
      if (!scene.segments.count(seg)) {
        problems.push_back("face '" + id.str() + "' has a dangling crossing for unknown segment '" + seg.str() + "'");
      }
      if (c.kind == CrossingKind::Disjoint) {
        problems.push_back("face '" + id.str() + "' stores an explicit Disjoint record for '" + seg.str() + "'");
      }
    }
  }
  for (const auto& [name, l] : scene.loops) {
    try {
      Loop::make(Path::make(scene.segments, l.steps()));
    } catch (const Error& err) {
      problems.push_back("loop '" + name + "': " + err.what());
    }
  }
  for (const auto& [name, g] : scene.graphs) {
    if (name != g.name) problems.push_back("graph key '" + name + "' differs from its name '" + g.name + "'");
    for (std::string& p : validate_graph(scene.segments, g)) problems.push_back(std::move(p));
  }
  for (const auto& [name, field] : scene.fields) {
    for (const auto& [seg, value] : field.values) {
      if (!scene.segments.count(seg)) {
        problems.push_back("field '" + name + "' refers to unknown segment '" + seg.str() + "'");
      }
    }
  }
  for (const auto& [name, sys] : scene.systems) {
    if (name != sys.name) problems.push_back("system key '" + name + "' differs from its name '" + sys.name + "'");
    if (sys.graph.has_value() == !sys.loops.empty()) {
      problems.push_back("system '" + name + "' must name either loops or a graph");
    }
    for (const std::string& l : sys.loops) {
      if (!scene.loops.count(l)) problems.push_back("system '" + name + "' refers to unknown loop '" + l + "'");
    }
    if (sys.graph && !scene.graphs.count(*sys.graph)) {
      problems.push_back("system '" + name + "' refers to unknown graph '" + *sys.graph + "'");
    }
    for (const FluxCombo& combo : sys.momenta) {
      for (const FluxTerm& t : combo.terms()) {
        if (!scene.faces.count(t.face)) {
          problems.push_back("system '" + name + "' refers to unknown face '" + t.face.str() + "'");
        }
      }
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Refinement

Path refine(const Path& path, const RefinementRecord& record) {
  std::vector<Step> steps;
  steps.reserve(path.steps().size() + 1);
  for (const Step& s : path.steps()) {
    if (s.segment != record.original) {
      steps.push_back(s);
    } else if (s.direction == Direction::Forward) {
      steps.push_back({record.first, Direction::Forward});
      steps.push_back({record.second, Direction::Forward});
    } else {
      steps.push_back({record.second, Direction::Reverse});
      steps.push_back({record.first, Direction::Reverse});
    }
  }
  return Path(std::move(steps), path.source(), path.target());
}

Loop refine(const Loop& loop, const RefinementRecord& record) { return Loop::make(refine(loop.path(), record)); }

FieldSample refine(const FieldSample& field, const RefinementRecord& record) {
  FieldSample out = field;
  auto it = out.values.find(record.original);
  if (it != out.values.end()) {
    Rational v = it->second;
    out.values.erase(it);
    out.set(record.first, v);
  }
  return out;
}

Face refine(const Face& face, const RefinementRecord& record) {
  Face out = face;
  auto it = out.crossings.find(record.original);
  if (it == out.crossings.end()) return out;
  const Crossing c = it->second;
  out.crossings.erase(it);
  if (c.kind == CrossingKind::InClosure) {
    out.set(record.first, c);
    out.set(record.second, c);
  } else if (c.kind == CrossingKind::Transversal) {
    out.set(c.end == Endpoint::AtSource ? record.first : record.second, c);
  }
  return out;
}

RefinedScene refine_segment(const Scene& scene, const SegmentId& id) {
  const Segment original = segment(scene, id);
  RefinementRecord record;
  record.original = id;
  record.midpoint = fresh_vertex_id(scene, id.str() + ".m");
  record.first = fresh_segment_id(scene, id.str() + ".1");
  {
    Scene probe = scene;
    probe.segments.emplace(record.first, Segment{record.first, original.source, record.midpoint});
    record.second = fresh_segment_id(probe, id.str() + ".2");
  }

  Scene out = scene;
  out.segments.erase(id);
  out.segments.emplace(record.first, Segment{record.first, original.source, record.midpoint});
  out.segments.emplace(record.second, Segment{record.second, record.midpoint, original.target});
  for (auto& [name, l] : out.loops) l = refine(l, record);
  for (auto& [name, g] : out.graphs) {
    for (GraphEdge& e : g.edges) e.path = refine(e.path, record);
  }
  for (auto& [fid, f] : out.faces) f = refine(f, record);
  for (auto& [name, field] : out.fields) field = refine(field, record);
  out.refinements.push_back(record);
  return {std::move(out), std::move(record)};
}

std::vector<SegmentId> current_segments(const Scene& scene, const SegmentId& id) {
  if (scene.segments.count(id)) return {id};
  for (const RefinementRecord& r : scene.refinements) {
    if (r.original == id) {
      std::vector<SegmentId> out = current_segments(scene, r.first);
      std::vector<SegmentId> tail = current_segments(scene, r.second);
      out.insert(out.end(), tail.begin(), tail.end());
      return out;
    }
  }
  throw Error(ErrorCode::UnknownSegment, "segment '" + id.str() + "' is neither live nor retired");
}

Path normalize(const Scene& scene, const Path& path) {
  if (scene.refinements.empty()) return path;
  std::vector<Step> steps;
  for (const Step& s : path.steps()) {
    std::vector<SegmentId> parts = current_segments(scene, s.segment);
    if (s.direction == Direction::Reverse) std::reverse(parts.begin(), parts.end());
    for (SegmentId& p : parts) steps.push_back({std::move(p), s.direction});
  }
  return Path::make(scene.segments, std::move(steps));
}

Loop normalize(const Scene& scene, const Loop& loop) { return Loop::make(normalize(scene, loop.path())); }

FieldSample normalize(const Scene& scene, const FieldSample& field) {
  if (scene.refinements.empty()) return field;
  FieldSample out;
  for (const auto& [seg, value] : field.values) {
    const SegmentId head = current_segments(scene, seg).front();
    out.set(head, out.at(head) + value);
  }
  return out;
}

Rational d_of(const Scene& scene, const GaugeFunction& f, const SegmentId& id) {
  const Segment& seg = segment(scene, id);
  return f.at(seg.target) - f.at(seg.source);
}

}  // namespace hoopflux
