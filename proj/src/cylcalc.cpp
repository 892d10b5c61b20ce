#include "hoopflux/cylcalc.hpp"

#include <set>

#include "hoopflux/error.hpp"

namespace hoopflux {

Rational kappa_eval(const Chain& c, const FieldSample& a) {
  Rational sum = 0;
  for (const auto& [seg, coeff] : c.coefficients()) sum += a.at(seg) * coeff;
  return sum;
}

Vector coordinate_map(const HoopSet& frame, const FieldSample& a) {
  Vector x;
  x.reserve(frame.size());
  for (const Chain& c : frame.chains) x.push_back(kappa_eval(c, a));
  return x;
}

FieldSample preimage(const HoopSet& frame, const Vector& point) {
  if (!frame.certificate) throw Error(ErrorCode::UncertifiedFrame, "preimage needs a certified frame");
  if (point.size() != frame.size()) {
    throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(point.size()) + " coordinates, frame has " +
                                                  std::to_string(frame.size()) + " hoops");
  }
  FieldSample a;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const SegmentId& s = frame.certificate->exclusive[i];
    a.set(s, point[i] * frame.chains[i].at(s));
  }
  return a;
}

Vector epsilon_row(const Face& face, const HoopSet& frame) {
  Vector row;
  row.reserve(frame.size());
  for (const Chain& c : frame.chains) row.push_back(epsilon_hoop(face, c).to_rational());
  return row;
}

Vector combo_row(const Scene& scene, const FluxCombo& combo, const HoopSet& frame) {
  Vector row(frame.size(), Rational(0));
  for (const FluxTerm& t : combo.terms()) {
    const Vector r = epsilon_row(face(scene, t.face), frame);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] += t.coefficient * r[i];
  }
  return row;
}

namespace {

void require_certified(const HoopSet& frame) {
  if (!frame.certificate) throw Error(ErrorCode::UncertifiedFrame, "flux operators act on certified hoop frames only");
}

}  // namespace

CylFunction flux_apply(const Face& face, const CylFunction& psi) {
  require_certified(psi.frame);
  return {psi.frame, directional_derivative(psi.poly, epsilon_row(face, psi.frame))};
}

CylFunction combo_apply(const Scene& scene, const FluxCombo& combo, const CylFunction& psi) {
  require_certified(psi.frame);
  return {psi.frame, directional_derivative(psi.poly, combo_row(scene, combo, psi.frame))};
}

Projection projection_between(const HoopSet& finer, const HoopSet& coarser) {
  Projection p;
  for (std::size_t i = 0; i < coarser.size(); ++i) {
    try {
      p.matrix.push_back(decompose_hoop(coarser.chains[i], finer));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotInSpan) throw;
      throw Error(ErrorCode::NotComparable, "hoop '" + coarser.labels[i] + "' is not a composition of the finer frame");
    }
  }
  return p;
}

Projection compose(const Projection& coarse_from_middle, const Projection& middle_from_fine) {
  Projection out;
  const std::size_t fine = middle_from_fine.matrix.empty() ? 0 : middle_from_fine.matrix.front().size();
  for (const auto& row : coarse_from_middle.matrix) {
    if (row.size() != middle_from_fine.matrix.size()) {
      throw Error(ErrorCode::DimensionMismatch, "projections do not compose");
    }
    std::vector<long> r(fine, 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      for (std::size_t j = 0; j < fine; ++j) r[j] += row[k] * middle_from_fine.matrix[k][j];
    }
    out.matrix.push_back(std::move(r));
  }
  return out;
}

CylFunction pullback(const Projection& p, const CylFunction& coarse, const HoopSet& finer) {
  std::vector<Polynomial> images;
  for (const auto& row : p.matrix) {
    if (row.size() != finer.size()) throw Error(ErrorCode::DimensionMismatch, "projection does not match the frame");
    Vector coeffs;
    for (long n : row) coeffs.push_back(Rational(static_cast<long>(n)));
    images.push_back(Polynomial::linear(coeffs));
  }
  return {finer, substitute(coarse.poly, images)};
}

GMatrix g_matrix(const Scene& scene, const std::vector<FluxCombo>& momenta, const HoopSet& frame) {
  if (momenta.size() != frame.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(momenta.size()) + " momenta against " +
                                                  std::to_string(frame.size()) + " hoops");
  }
  GMatrix g;
  for (const FluxCombo& c : momenta) g.entries.push_back(combo_row(scene, c, frame));
  g.determinant = determinant(g.entries);
  g.nondegenerate = g.determinant != 0;
  return g;
}

Matrix momentum_matrix(const Scene& scene, const std::vector<FluxCombo>& combos, std::size_t& cols) {
  std::vector<MomentumVector> vectors;
  std::set<MomentumKey> keys;
  for (const FluxCombo& c : combos) {
    vectors.push_back(momentum_vector(scene, c));
    for (const auto& [k, v] : vectors.back()) keys.insert(k);
  }
  std::map<MomentumKey, std::size_t> column;
  for (const MomentumKey& k : keys) column.emplace(k, column.size());
  cols = keys.size();
  Matrix m = zero_matrix(combos.size(), cols);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (const auto& [k, v] : vectors[i]) m[i][column.at(k)] = v;
  }
  return m;
}

std::size_t momentum_rank(const Scene& scene, const std::vector<FluxCombo>& combos) {
  std::size_t cols = 0;
  const Matrix m = momentum_matrix(scene, combos, cols);
  return rank(m, cols);
}

std::optional<Vector> momentum_coefficients(const Scene& scene, const std::vector<FluxCombo>& basis,
                                            const FluxCombo& combo) {
  std::vector<FluxCombo> all = basis;
  all.push_back(combo);
  std::size_t cols = 0;
  const Matrix m = momentum_matrix(scene, all, cols);
  // columns of the system are the basis vectors
  Matrix a = zero_matrix(cols, basis.size());
  Vector b(cols, Rational(0));
  for (std::size_t k = 0; k < cols; ++k) {
    for (std::size_t j = 0; j < basis.size(); ++j) a[k][j] = m[j][k];
    b[k] = m.back()[k];
  }
  return solve(a, basis.size(), b);
}

}  // namespace hoopflux
