#pragma once

// Finite physical systems, their order, directedness witnesses and the
// assumption verification suite.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hoopflux/cylcalc.hpp"

namespace hoopflux {

struct FiniteSystem {
  std::string name;
  std::vector<FluxCombo> momenta;
  HoopSet frame;
  /// Cached G matrix and flag, filled by make_system.
  Matrix g;
  bool nondegenerate = false;

  friend bool operator==(const FiniteSystem&, const FiniteSystem&) = default;
};

/// Builds the system and caches its G matrix. A dimension mismatch is not an
/// error here; it just yields a degenerate system with an empty cache.
FiniteSystem make_system(const Scene& scene, std::string name, std::vector<FluxCombo> momenta, HoopSet frame);

/// Recomputes every condition: certified frame, dim F = N, det G != 0.
bool is_nondegenerate(const Scene& scene, const FiniteSystem& system);

/// Migrates the frame chains through the scene's refinements and refreshes
/// the cached G.
FiniteSystem normalize(const Scene& scene, const FiniteSystem& system);

struct SystemOrderWitness {
  /// momentum[k][j]: coefficient of the finer combo j in coarser combo k.
  Matrix momentum;
  /// hoops.matrix[I][I']: coefficient of finer hoop I' in coarser hoop I.
  Projection hoops;
};

/// Throws NotComparable naming the failing side ("momentum" or "hoop").
SystemOrderWitness system_geq(const Scene& scene, const FiniteSystem& finer, const FiniteSystem& coarser);
bool system_geq_holds(const Scene& scene, const FiniteSystem& finer, const FiniteSystem& coarser);

struct SceneSystem {
  Scene scene;
  FiniteSystem system;
};

struct DualFaces {
  Scene scene;
  HoopSet frame;               // normalized to the new scene
  std::vector<FaceId> faces;   // one per requested index, in order
};

/// Refines each requested hoop's exclusive segment at a fresh midpoint and
/// adds a face crossing it there, oriented so epsilon = +1 on that hoop and
/// 0 on all others. Defaults to every hoop. Throws UncertifiedFrame.
DualFaces synthesize_dual_faces(const Scene& scene, const HoopSet& frame,
                                std::optional<std::vector<std::size_t>> indices = std::nullopt);

/// Throws EmptyInput when the loops have no nontrivial hoop.
SceneSystem extend_to_system(const Scene& scene, const std::vector<Loop>& loops, const std::string& name = "ext");

/// Throws NoWitness when a face has no witness in the pool, EmptyInput for
/// an empty face list.
SceneSystem extend_to_system_momentum(const Scene& scene, const std::vector<FaceId>& faces,
                                      const std::vector<Loop>& hoop_pool, const std::string& name = "ext");

/// Upper bound of both systems in the returned scene.
SceneSystem common_refinement(const Scene& scene, const FiniteSystem& first, const FiniteSystem& second,
                              const std::string& name = "join");

/// n loops on fresh vertices and segments, with their dual faces.
SceneSystem fresh_disjoint_system(const Scene& scene, std::size_t n, const std::string& name = "fresh");

/// Adds, for every segment carrying a transversal record of the given combos,
/// loops that isolate each end. Their epsilon rows span the momentum vectors.
struct SeparatingLoops {
  Scene scene;
  std::vector<Chain> chains;
};
SeparatingLoops separating_loops(const Scene& scene, const std::vector<FluxCombo>& combos);

/// Equal rational spans of the two chain sets.
bool same_reduced_space(const HoopSet& a, const HoopSet& b);

/// Same span, different certified hoops where possible: the opposite spanning
/// forest order, else reversed order with flipped signs.
HoopSet recombine_frame(const SegmentRegistry& registry, const HoopSet& frame);

// ---------------------------------------------------------------------------
// Assumption verification

struct VerifierOps {
  std::function<SceneSystem(const Scene&, const std::vector<Loop>&)> build_from_loops;
  std::function<SceneSystem(const Scene&, const std::vector<FaceId>&, const std::vector<Loop>&)> build_from_faces;
  std::function<FieldSample(const HoopSet&, const Vector&)> preimage;
  std::function<CylFunction(const Scene&, const FluxCombo&, const CylFunction&)> combo_apply;
  /// phi applied to the I-th coordinate function.
  std::function<CylFunction(const Scene&, const FluxCombo&, const HoopSet&, std::size_t)> dof_apply;
  std::function<bool(const HoopSet&, const HoopSet&)> same_reduced_space;
  std::function<SystemOrderWitness(const Scene&, const FiniteSystem&, const FiniteSystem&)> system_geq;
  std::function<SceneSystem(const Scene&, const FiniteSystem&, const FiniteSystem&)> common_refinement;

  static VerifierOps defaults();
};

struct VerificationProbes {
  std::vector<Loop> loops;
  std::vector<Polynomial> polynomials;
  std::vector<FaceId> faces;
};

struct AssumptionResult {
  std::string id;  // "1a", "1b", "2", "3a", "3b", "4", "5", "6a", "6b"
  std::string title;
  bool passed = true;
  std::vector<std::string> witnesses;
  std::vector<std::string> warnings;
};

struct AssumptionReport {
  std::vector<AssumptionResult> results;

  bool all_passed() const;
  const AssumptionResult& at(const std::string& id) const;
};

/// Sample systems must live in `scene` (after normalization). Probe faces
/// without a witness among the scene's loops are skipped with a warning.
AssumptionReport verify_assumptions(const Scene& scene, const std::vector<FiniteSystem>& sample,
                                    const VerificationProbes& probes,
                                    const VerifierOps& ops = VerifierOps::defaults());

}  // namespace hoopflux
