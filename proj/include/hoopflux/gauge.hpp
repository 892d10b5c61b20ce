#pragma once

// Graph frames, gauge action, maximal-tree reduction and the passage from
// unconstrained to constrained systems.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hoopflux/systems.hpp"

namespace hoopflux {

/// A' = A + df on every live segment of the scene.
FieldSample gauge_transform(const Scene& scene, const FieldSample& a, const GaugeFunction& f);

/// (kappa_e(A))_e in graph order.
Vector edge_coordinates(const Graph& graph, const FieldSample& a);

/// Endpoints of the graph's edges, sorted.
std::vector<VertexId> graph_vertices(const Graph& graph);

struct MaximalTree {
  std::vector<std::string> edges;  // in the order they were added
  std::vector<VertexId> roots;     // one per connected component

  bool contains(const std::string& edge) const;
};

/// Grows one tree per component: start from the lowest-named unused edge,
/// then repeatedly add the lowest-named edge with exactly one endpoint in the
/// tree. The root is the source of the first edge.
MaximalTree maximal_tree(const Graph& graph);

struct LoopBasis {
  std::vector<std::string> edges;  // non-tree edges, graph order
  std::vector<Loop> loops;
  HoopSet frame;                   // labels "loop(<edge>)"
};

/// One loop per non-tree edge e: tree path root -> source(e), e, tree path
/// target(e) -> root.
LoopBasis loop_basis(const Graph& graph, const MaximalTree& tree);

/// theta(root) = 0, theta(v) = kappa_{e'}(A) + theta(v') along the tree path
/// towards the root; makes every tree edge read 0 after the transform.
GaugeFunction theta_assignment(const Scene& scene, const Graph& graph, const MaximalTree& tree,
                               const FieldSample& a);

/// d_v: +1 on edges ending at v, -1 on edges starting at v.
std::map<VertexId, Vector> gauge_directions(const Graph& graph);

/// Throws FrameMismatch when the polynomial uses more variables than edges.
bool is_gauge_invariant(const Graph& graph, const Polynomial& p);

/// Constant when the graph has no loops, otherwise a function on the loop
/// frame. Throws NotInvariant or FrameMismatch.
std::variant<Rational, CylFunction> gauge_reduce(const Graph& graph, const Polynomial& p);

/// (n - m)_e for each edge.
Vector edge_epsilon_row(const Face& face, const Graph& graph);
Vector edge_combo_row(const Scene& scene, const FluxCombo& combo, const Graph& graph);
/// sum_e epsilon(S, e) dP/dx_e
Polynomial graph_flux_apply(const Scene& scene, const FluxCombo& combo, const Graph& graph, const Polynomial& p);

/// Checks g_f^{-1*}(phi(g_f^* P)) == phi(P) exactly.
bool flux_gauge_invariance_check(const Scene& scene, const FaceId& face, const Graph& graph, const Polynomial& p,
                                 const GaugeFunction& f);

struct UnconstrainedSystem {
  std::string name;
  std::vector<FluxCombo> momenta;
  std::string graph;
};

Matrix unconstrained_g(const Scene& scene, const UnconstrainedSystem& system);
bool is_nondegenerate(const Scene& scene, const UnconstrainedSystem& system);
/// Edge and momentum inclusion; throws NotComparable naming the side.
void unconstrained_geq(const Scene& scene, const UnconstrainedSystem& finer, const UnconstrainedSystem& coarser);

struct ConstrainedSystem {
  FiniteSystem system;
  LoopBasis loops;
  Matrix restricted;              // N x M: phi_J applied to kappa of loop m
  Matrix kernel;                  // basis of the annihilating subspace, reduced
  std::vector<std::size_t> chosen;  // indices of the kept momenta
};

/// Throws NoLoops when the graph is a forest, InvalidArgument for a degenerate
/// input or an unusable hint.
ConstrainedSystem constrain_system(const Scene& scene, const UnconstrainedSystem& system,
                                   std::optional<std::vector<std::size_t>> hint = std::nullopt);

struct OrderProbe {
  ConstrainedSystem finer;
  ConstrainedSystem coarser;
  bool comparable = false;
  std::string reason;
};

/// Throws NotComparable when the unconstrained pair is not ordered.
OrderProbe order_preservation_probe(const Scene& scene, const UnconstrainedSystem& finer,
                                    const UnconstrainedSystem& coarser,
                                    std::optional<std::vector<std::size_t>> finer_hint = std::nullopt,
                                    std::optional<std::vector<std::size_t>> coarser_hint = std::nullopt);

/// Epsilon rows of the combos on the graph's loop basis extended by
/// separating loops, i.e. on enough gauge-invariant functions to tell the
/// restricted operators apart.
struct RestrictionProbe {
  Scene scene;
  HoopSet frame;
  Matrix rows;
  std::size_t rank = 0;
};
RestrictionProbe restricted_flux_rank(const Scene& scene, const Graph& graph, const std::vector<FluxCombo>& combos);

}  // namespace hoopflux
