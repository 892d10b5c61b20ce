#pragma once

// Reduced configuration spaces, cylindrical functions and flux operators.

#include <vector>

#include "hoopflux/flux.hpp"
#include "hoopflux/polynomial.hpp"

namespace hoopflux {

/// Polynomial in the coordinates x_I = kappa of the I-th frame hoop.
struct CylFunction {
  HoopSet frame;
  Polynomial poly;

  friend bool operator==(const CylFunction&, const CylFunction&) = default;
};

/// sum_seg c(seg) * A(seg)
Rational kappa_eval(const Chain& c, const FieldSample& a);
/// (kappa_eval(chain_I, A))_I
Vector coordinate_map(const HoopSet& frame, const FieldSample& a);
/// Field supported on the exclusive segments whose coordinates are `point`.
/// Throws UncertifiedFrame or DimensionMismatch.
FieldSample preimage(const HoopSet& frame, const Vector& point);

/// (epsilon(S, hoop_I))_I as rationals.
Vector epsilon_row(const Face& face, const HoopSet& frame);
Vector combo_row(const Scene& scene, const FluxCombo& combo, const HoopSet& frame);

/// sum_I epsilon(S, hoop_I) dpsi/dx_I. Throws UncertifiedFrame.
CylFunction flux_apply(const Face& face, const CylFunction& psi);
CylFunction combo_apply(const Scene& scene, const FluxCombo& combo, const CylFunction& psi);

/// Coarse coordinates from fine ones: x_I = sum_I' matrix[I][I'] x'_I'.
struct Projection {
  std::vector<std::vector<long>> matrix;

  friend bool operator==(const Projection&, const Projection&) = default;
};

/// Throws NotComparable when a coarse hoop does not decompose over `finer`.
Projection projection_between(const HoopSet& finer, const HoopSet& coarser);
/// The composite coarse <- middle <- fine.
Projection compose(const Projection& coarse_from_middle, const Projection& middle_from_fine);
/// Substitutes the coarse coordinates by their fine expressions.
CylFunction pullback(const Projection& p, const CylFunction& coarse, const HoopSet& finer);

struct GMatrix {
  Matrix entries;  // entries[J][I] = phi_J kappa_I
  Rational determinant;
  bool nondegenerate = false;
};

/// Throws DimensionMismatch unless there are as many combos as hoops.
GMatrix g_matrix(const Scene& scene, const std::vector<FluxCombo>& momenta, const HoopSet& frame);

/// Rows are momentum vectors over their joint support.
Matrix momentum_matrix(const Scene& scene, const std::vector<FluxCombo>& combos, std::size_t& cols);
std::size_t momentum_rank(const Scene& scene, const std::vector<FluxCombo>& combos);
/// Coefficients c with combo == sum_k c_k basis_k as operators, or nullopt.
std::optional<Vector> momentum_coefficients(const Scene& scene, const std::vector<FluxCombo>& basis,
                                            const FluxCombo& combo);

}  // namespace hoopflux
