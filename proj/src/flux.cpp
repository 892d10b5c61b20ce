#include "hoopflux/flux.hpp"

#include "hoopflux/error.hpp"

namespace hoopflux {

std::string HalfInteger::str() const {
  if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

int crossing_sign(const Crossing& c) {
  if (c.kind != CrossingKind::Transversal) return 0;
  const int end = c.end == Endpoint::AtTarget ? 1 : -1;
  const int side = c.side == Side::Above ? 1 : -1;
  return end * side;
}

CrossingCounts crossing_counts(const Face& face, const Path& path) {
  CrossingCounts n;
  for (const Step& step : path.steps()) {
    const Crossing c = face.classify(step);
    if (c.kind != CrossingKind::Transversal) continue;
    const bool above = c.side == Side::Above;
    if (c.end == Endpoint::AtTarget) {
      ++(above ? n.t_plus : n.t_minus);
    } else {
      ++(above ? n.s_plus : n.s_minus);
    }
  }
  return n;
}

HalfInteger epsilon_loop(const Face& face, const Loop& loop) {
  const CrossingCounts n = crossing_counts(face, loop.path());
  return HalfInteger::from_twice(n.t_plus - n.s_plus - (n.t_minus - n.s_minus));
}

HalfInteger epsilon_hoop(const Face& face, const Chain& chain) {
  long twice = 0;
  for (const auto& [seg, c] : face.crossings) twice += chain.at(seg) * crossing_sign(c);
  return HalfInteger::from_twice(twice);
}

long epsilon_edge(const Face& face, const Path& edge) {
  long n = 0;
  for (const Step& step : edge.steps()) n += crossing_sign(face.classify(step));
  return n;
}

FaceWitness face_validity(const Face& face, const std::vector<Loop>& witnesses) {
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const Chain c = chain_of(witnesses[i]);
    if (c.is_zero()) continue;
    const HalfInteger e = epsilon_hoop(face, c);
    if (!e.is_zero()) return {i, e};
  }
  throw Error(ErrorCode::NoWitness, "no witness loop gives face '" + face.id.str() + "' a nonzero epsilon (" +
                                        std::to_string(witnesses.size()) + " tried)");
}

MomentumVector momentum_vector(const Scene& scene, const FluxCombo& combo) {
  MomentumVector out;
  for (const FluxTerm& t : combo.terms()) {
    for (const auto& [seg, c] : face(scene, t.face).crossings) {
      if (c.kind != CrossingKind::Transversal) continue;
      Rational& slot = out[{seg, c.end}];
      if (c.side == Side::Above) {
        slot += t.coefficient;
      } else {
        slot -= t.coefficient;
      }
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

Rational combo_epsilon(const Scene& scene, const FluxCombo& combo, const Chain& chain) {
  Rational sum = 0;
  for (const FluxTerm& t : combo.terms()) sum += t.coefficient * epsilon_hoop(face(scene, t.face), chain).to_rational();
  return sum;
}

}  // namespace hoopflux
