#pragma once

// Random scene generators, an independent rational linear solver used as an
// oracle, and fault-injected verifier hooks.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hoopflux/gauge.hpp"

namespace hoopflux::testing {

using Rng = std::mt19937_64;

long uniform(Rng& rng, long lo, long hi);
Rational random_rational(Rng& rng, long magnitude = 5, long max_denominator = 4);

/// Connected multigraph of segments on `vertices` vertices named "<prefix>v<k>":
/// a random spanning tree plus `extra` further segments. No self-loops.
Scene random_scene(Rng& rng, std::size_t vertices, std::size_t extra, const std::string& prefix = "");

/// Random walk of `length` steps from `base`, closed by the shortest way back.
Loop random_loop(Rng& rng, const Scene& scene, const VertexId& base, std::size_t length);
Loop random_loop(Rng& rng, const Scene& scene, std::size_t length);

/// Each segment gets a random non-disjoint record with probability `density`.
Face random_face(Rng& rng, const Scene& scene, const FaceId& id, double density = 0.3);

FieldSample random_field(Rng& rng, const Scene& scene);
GaugeFunction random_gauge(Rng& rng, const Scene& scene);
Polynomial random_polynomial(Rng& rng, std::size_t variables, unsigned max_degree, std::size_t terms);

/// Adds a graph whose edges are chains of 1-3 fresh segments through fresh
/// interior vertices between distinct random endpoints among `vertices`
/// vertices. `connected` forces a spanning tree of edges first.
Graph add_random_graph(Rng& rng, Scene& scene, const std::string& name, std::size_t vertices, std::size_t edges,
                       bool connected);

/// One face per edge with epsilon(face_e, e') = delta; named "<graph>.F<k>".
std::vector<FaceId> add_edge_dual_faces(Scene& scene, const Graph& graph);

/// Gauge-invariant polynomial in the edge variables of `graph`, built from
/// products of fundamental loop forms. Constant if the graph has no loops.
Polynomial random_gauge_invariant(Rng& rng, const Graph& graph);

/// Certified frame from random loops in `scene`; may be smaller than asked.
HoopSet random_frame(Rng& rng, const Scene& scene, std::size_t loops, std::size_t length);

// ---------------------------------------------------------------------------
// Oracle: plain Gauss-Jordan over mpq, written without the library's linalg.

/// x with sum_i x_i * vectors[i] == target, free variables set to 0.
std::optional<std::vector<Rational>> oracle_combination(const std::vector<std::vector<Rational>>& vectors,
                                                        const std::vector<Rational>& target);
std::size_t oracle_rank(std::vector<std::vector<Rational>> rows);

/// Chains as rational vectors over the union of their supports.
std::vector<std::vector<Rational>> chain_vectors(const std::vector<Chain>& chains);

/// Integral decomposition per the oracle, or nullopt.
std::optional<std::vector<Rational>> oracle_decompose(const Chain& target, const std::vector<Chain>& basis);

/// Hoop side by the oracle (integral combinations) and momentum side by the
/// oracle on momentum vectors.
bool oracle_geq(const Scene& scene, const FiniteSystem& finer, const FiniteSystem& coarser);

// ---------------------------------------------------------------------------
// Fault injection

/// Verifier hooks with one deliberate bug that only the named assumption
/// should notice. Assumption "4" has no hook; see broken_g_sample.
VerifierOps faulty_ops(const std::string& assumption);
std::vector<FiniteSystem> broken_g_sample(std::vector<FiniteSystem> sample);

struct GeneratedSample {
  Scene scene;
  std::vector<FiniteSystem> systems;
  VerificationProbes probes;
};
GeneratedSample generated_sample(Rng& rng, std::size_t systems);

}  // namespace hoopflux::testing
