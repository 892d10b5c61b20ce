#pragma once

// Discrete stand-in for the spatial manifold: atomic oriented segments,
// paths and loops built from them, faces given by per-segment crossing
// tables, field samples (integrated one-forms) and gauge functions.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hoopflux/ids.hpp"
#include "hoopflux/rational.hpp"

namespace hoopflux {

enum class Direction { Forward, Reverse };

struct Segment {
  SegmentId id;
  VertexId source;
  VertexId target;

  friend bool operator==(const Segment&, const Segment&) = default;
};

using SegmentRegistry = std::map<SegmentId, Segment>;

struct Step {
  SegmentId segment;
  Direction direction = Direction::Forward;

  friend bool operator==(const Step&, const Step&) = default;
};

struct RefinementRecord;

/// Nonempty, endpoint-chained sequence of signed segment traversals.
class Path {
 public:
  /// Validates every step against `registry`. Throws UnknownSegment,
  /// Chaining, or InvalidArgument for an empty step list.
  static Path make(const SegmentRegistry& registry, std::vector<Step> steps);

  const std::vector<Step>& steps() const noexcept { return steps_; }
  const VertexId& source() const noexcept { return source_; }
  const VertexId& target() const noexcept { return target_; }
  bool is_closed() const noexcept { return source_ == target_; }

  /// Vertex sequence visited, source first; size is steps().size() + 1.
  std::vector<VertexId> vertices(const SegmentRegistry& registry) const;

  friend bool operator==(const Path&, const Path&) = default;

  friend Path compose(std::span<const Path> paths);
  friend Path reverse(const Path& path);
  friend Path refine(const Path& path, const RefinementRecord& record);

 private:
  Path(std::vector<Step> steps, VertexId source, VertexId target)
      : steps_(std::move(steps)), source_(std::move(source)), target_(std::move(target)) {}

  std::vector<Step> steps_;
  VertexId source_;
  VertexId target_;
};

/// A closed path.
class Loop {
 public:
  /// Throws Chaining when the path does not return to its source.
  static Loop make(Path path);
  static Loop make(const SegmentRegistry& registry, std::vector<Step> steps);

  const Path& path() const noexcept { return path_; }
  const std::vector<Step>& steps() const noexcept { return path_.steps(); }
  const VertexId& base() const noexcept { return path_.source(); }

  friend bool operator==(const Loop&, const Loop&) = default;

 private:
  explicit Loop(Path path) : path_(std::move(path)) {}

  Path path_;
};

/// Concatenates paths in order; the first path is traversed first.
/// Throws Chaining if a target does not meet the next source, and
/// InvalidArgument on an empty list.
Path compose(std::span<const Path> paths);
Path compose(const Path& first, const Path& second);
Path reverse(const Path& path);
Loop reverse(const Loop& loop);

const VertexId& step_source(const Segment& segment, Direction direction);
const VertexId& step_target(const Segment& segment, Direction direction);

// ---------------------------------------------------------------------------
// Faces

enum class CrossingKind { InClosure, Disjoint, Transversal };
enum class Endpoint { AtSource, AtTarget };
enum class Side { Above, Below };

struct Crossing {
  CrossingKind kind = CrossingKind::Disjoint;
  Endpoint end = Endpoint::AtSource;  // meaningful for Transversal only
  Side side = Side::Above;            // meaningful for Transversal only

  static Crossing in_closure() { return {CrossingKind::InClosure}; }
  static Crossing disjoint() { return {CrossingKind::Disjoint}; }
  static Crossing transversal(Endpoint end, Side side) { return {CrossingKind::Transversal, end, side}; }

  /// Classification seen when the segment is traversed backwards:
  /// AtSource and AtTarget swap, the side is kept.
  Crossing reversed() const;

  friend bool operator==(const Crossing& a, const Crossing& b);
};

/// Oriented face. Segments absent from `crossings` are Disjoint; Disjoint
/// entries are never stored.
struct Face {
  FaceId id;
  std::map<SegmentId, Crossing> crossings;

  Crossing classify(const SegmentId& segment) const;
  Crossing classify(const Step& step) const;

  void set(const SegmentId& segment, Crossing crossing);

  friend bool operator==(const Face&, const Face&) = default;
};

/// Same surface with the opposite orientation: Above and Below swap.
Face flip_orientation(const Face& face, FaceId new_id);

// ---------------------------------------------------------------------------
// Field samples and gauge functions

/// Integrals of a one-form over each segment; unmapped segments read 0.
struct FieldSample {
  std::map<SegmentId, Rational> values;

  Rational at(const SegmentId& segment) const;
  void set(const SegmentId& segment, const Rational& value);

  friend bool operator==(const FieldSample&, const FieldSample&) = default;
};

/// Function on vertices; unmapped vertices read 0.
struct GaugeFunction {
  std::map<VertexId, Rational> values;

  Rational at(const VertexId& vertex) const;
  void set(const VertexId& vertex, const Rational& value);

  friend bool operator==(const GaugeFunction&, const GaugeFunction&) = default;
};

// ---------------------------------------------------------------------------
// Momentum combinations (formal real combinations of faces)

struct FluxTerm {
  Rational coefficient;
  FaceId face;

  friend bool operator==(const FluxTerm&, const FluxTerm&) = default;
};

/// Sum of coefficient * flux(face). Kept canonical: one term per face,
/// sorted by face id, no zero coefficients.
class FluxCombo {
 public:
  FluxCombo() = default;
  explicit FluxCombo(std::vector<FluxTerm> terms);
  static FluxCombo single(FaceId face, const Rational& coefficient = 1);

  const std::vector<FluxTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  FluxCombo operator+(const FluxCombo& other) const;
  FluxCombo scaled(const Rational& factor) const;

  friend bool operator==(const FluxCombo&, const FluxCombo&) = default;

 private:
  std::vector<FluxTerm> terms_;
};

// ---------------------------------------------------------------------------
// Graphs and scene-level records

struct GraphEdge {
  std::string name;
  Path path;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Ordered list of named edges. Validity (distinct endpoints, embedded
/// edges meeting only at boundary vertices) is checked by validate_graph.
struct Graph {
  std::string name;
  std::vector<GraphEdge> edges;

  const GraphEdge& edge(const std::string& edge_name) const;
  std::optional<std::size_t> index_of(const std::string& edge_name) const;

  friend bool operator==(const Graph&, const Graph&) = default;
};

/// A finite physical system as stored in a scene file: either a hoop frame
/// (named loops) or a graph frame, plus a basis of momentum combinations.
struct SystemDescription {
  std::string name;
  std::vector<std::string> loops;
  std::optional<std::string> graph;
  std::vector<FluxCombo> momenta;

  friend bool operator==(const SystemDescription&, const SystemDescription&) = default;
};

/// `original` was split into first: source -> midpoint and
/// second: midpoint -> target.
struct RefinementRecord {
  SegmentId original;
  SegmentId first;
  SegmentId second;
  VertexId midpoint;

  friend bool operator==(const RefinementRecord&, const RefinementRecord&) = default;
};

struct Scene {
  SegmentRegistry segments;
  std::map<FaceId, Face> faces;
  std::map<std::string, Loop> loops;
  std::map<std::string, Graph> graphs;
  std::map<std::string, FieldSample> fields;
  std::map<std::string, GaugeFunction> gauges;
  std::map<std::string, SystemDescription> systems;
  /// Retired segments, oldest first. Lets values built before a refinement
  /// be migrated to the current segment set.
  std::vector<RefinementRecord> refinements;

  friend bool operator==(const Scene&, const Scene&) = default;
};

const Segment& segment(const Scene& scene, const SegmentId& id);
const Face& face(const Scene& scene, const FaceId& id);
const Loop& loop(const Scene& scene, const std::string& name);
const Graph& graph(const Scene& scene, const std::string& name);

/// Every vertex mentioned by a live or retired segment or a gauge function.
std::set<VertexId> vertices(const Scene& scene);

/// Fresh identifiers derived from `stem`, unused by live or retired objects.
SegmentId fresh_segment_id(const Scene& scene, const std::string& stem);
VertexId fresh_vertex_id(const Scene& scene, const std::string& stem);
FaceId fresh_face_id(const Scene& scene, const std::string& stem);

/// Adds a segment; throws Validation on a duplicate id or equal endpoints.
void add_segment(Scene& scene, Segment segment);

/// Lists every violated invariant; empty when the scene is valid.
std::vector<std::string> validate_scene(const Scene& scene);
std::vector<std::string> validate_graph(const SegmentRegistry& registry, const Graph& graph);

// ---------------------------------------------------------------------------
// Refinement

struct RefinedScene {
  Scene scene;
  RefinementRecord record;
};

/// Splits `id` at a fresh midpoint and migrates every loop, graph, face and
/// field sample of the scene. Throws UnknownSegment.
RefinedScene refine_segment(const Scene& scene, const SegmentId& id);

Path refine(const Path& path, const RefinementRecord& record);
Loop refine(const Loop& loop, const RefinementRecord& record);
/// The whole value stays on the first half; the second half reads 0.
FieldSample refine(const FieldSample& field, const RefinementRecord& record);
/// A transversal record stays on the half containing its endpoint.
Face refine(const Face& face, const RefinementRecord& record);

/// Expands retired segments into their current descendants, in order.
std::vector<SegmentId> current_segments(const Scene& scene, const SegmentId& id);
Path normalize(const Scene& scene, const Path& path);
Loop normalize(const Scene& scene, const Loop& loop);
FieldSample normalize(const Scene& scene, const FieldSample& field);

/// f(target) - f(source). Throws UnknownSegment.
Rational d_of(const Scene& scene, const GaugeFunction& f, const SegmentId& id);

}  // namespace hoopflux
