#pragma once

// Signed face/loop intersection numbers.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hoopflux/hoop.hpp"

namespace hoopflux {

/// Exact half-integer, stored as twice its value.
class HalfInteger {
 public:
  HalfInteger() = default;
  static HalfInteger from_twice(long twice) { return HalfInteger(twice); }
  static HalfInteger from_integer(long value) { return HalfInteger(2 * value); }

  long twice() const noexcept { return twice_; }
  bool is_zero() const noexcept { return twice_ == 0; }
  Rational to_rational() const {
    Rational q(twice_, 2L);
    q.canonicalize();
    return q;
  }
  std::string str() const;

  HalfInteger operator+(HalfInteger o) const { return HalfInteger(twice_ + o.twice_); }
  HalfInteger operator-(HalfInteger o) const { return HalfInteger(twice_ - o.twice_); }
  HalfInteger operator-() const { return HalfInteger(-twice_); }
  HalfInteger operator*(long n) const { return HalfInteger(twice_ * n); }

  friend bool operator==(HalfInteger, HalfInteger) = default;
  friend std::ostream& operator<<(std::ostream& os, HalfInteger h) { return os << h.str(); }

 private:
  explicit HalfInteger(long twice) : twice_(twice) {}
  long twice_ = 0;
};

/// +1 for Transversal(AtTarget, Above) and (AtSource, Below), -1 for the other
/// two transversal records, 0 otherwise.
int crossing_sign(const Crossing& c);

struct CrossingCounts {
  long t_plus = 0;
  long s_plus = 0;
  long t_minus = 0;
  long s_minus = 0;

  friend bool operator==(const CrossingCounts&, const CrossingCounts&) = default;
};

/// Counted per step occurrence with the reversal rule applied.
CrossingCounts crossing_counts(const Face& face, const Path& path);

/// (t+ - s+ - (t- - s-)) / 2 from the step-by-step counts.
HalfInteger epsilon_loop(const Face& face, const Loop& loop);
/// Per-segment sum of coefficient * crossing sign, halved.
HalfInteger epsilon_hoop(const Face& face, const Chain& chain);
/// n - m for an edge: the unhalved signed count.
long epsilon_edge(const Face& face, const Path& edge);

struct FaceWitness {
  std::size_t index;  // position in the witness list
  HalfInteger epsilon;
};

/// First non-trivial loop with nonzero epsilon. Throws NoWitness.
FaceWitness face_validity(const Face& face, const std::vector<Loop>& witnesses);

/// Operator identity of a momentum combination: for every (segment, end)
/// carrying a transversal record, the coefficient-weighted side sign
/// (+1 Above, -1 Below). Two combinations act identically on every loop of
/// every refinement of the scene iff these vectors agree.
using MomentumKey = std::pair<SegmentId, Endpoint>;
using MomentumVector = std::map<MomentumKey, Rational>;

MomentumVector momentum_vector(const Scene& scene, const FluxCombo& combo);
/// sum_i alpha_i * epsilon(S_i, chain) as a rational.
Rational combo_epsilon(const Scene& scene, const FluxCombo& combo, const Chain& chain);

}  // namespace hoopflux
