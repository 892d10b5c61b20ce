#include "hoopflux/systems.hpp"

#include <algorithm>
#include <set>

#include "hoopflux/error.hpp"

namespace hoopflux {

FiniteSystem make_system(const Scene& scene, std::string name, std::vector<FluxCombo> momenta, HoopSet frame) {
  FiniteSystem s{std::move(name), std::move(momenta), std::move(frame), {}, false};
  if (s.frame.certificate && s.momenta.size() == s.frame.size() && !s.frame.chains.empty()) {
    GMatrix g = g_matrix(scene, s.momenta, s.frame);
    s.g = std::move(g.entries);
    s.nondegenerate = g.nondegenerate;
  }
  return s;
}

bool is_nondegenerate(const Scene& scene, const FiniteSystem& system) {
  if (!system.frame.certificate || system.frame.chains.empty()) return false;
  if (system.momenta.size() != system.frame.size()) return false;
  for (const FluxCombo& c : system.momenta) {
    if (c.is_zero()) return false;
  }
  return g_matrix(scene, system.momenta, normalize(scene, system.frame)).nondegenerate;
}

FiniteSystem normalize(const Scene& scene, const FiniteSystem& system) {
  return make_system(scene, system.name, system.momenta, normalize(scene, system.frame));
}

SystemOrderWitness system_geq(const Scene& scene, const FiniteSystem& finer, const FiniteSystem& coarser) {
  SystemOrderWitness w;
  try {
    w.hoops = projection_between(normalize(scene, finer.frame), normalize(scene, coarser.frame));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotComparable) throw;
    throw Error(ErrorCode::NotComparable, "hoop side: " + e.detail());
  }
  for (std::size_t k = 0; k < coarser.momenta.size(); ++k) {
    std::optional<Vector> c = momentum_coefficients(scene, finer.momenta, coarser.momenta[k]);
    if (!c) {
      throw Error(ErrorCode::NotComparable, "momentum side: operator " + std::to_string(k + 1) + " of '" +
                                                coarser.name + "' is not in the span of '" + finer.name + "'");
    }
    w.momentum.push_back(std::move(*c));
  }
  return w;
}

bool system_geq_holds(const Scene& scene, const FiniteSystem& finer, const FiniteSystem& coarser) {
  try {
    system_geq(scene, finer, coarser);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotComparable) return false;
    throw;
  }
}

DualFaces synthesize_dual_faces(const Scene& scene, const HoopSet& frame,
                                std::optional<std::vector<std::size_t>> indices) {
  if (!frame.certificate) throw Error(ErrorCode::UncertifiedFrame, "dual faces need a certified frame");
  if (!indices) {
    indices.emplace();
    for (std::size_t i = 0; i < frame.size(); ++i) indices->push_back(i);
  }
  DualFaces out{scene, normalize(scene, frame), {}};
  for (std::size_t idx : *indices) {
    if (idx >= out.frame.size()) throw Error(ErrorCode::InvalidArgument, "dual face index out of range");
    const SegmentId s = out.frame.certificate->exclusive[idx];
    const long c = out.frame.chains[idx].at(s);
    RefinedScene r = refine_segment(out.scene, s);
    out.scene = std::move(r.scene);
    out.frame = normalize(out.scene, out.frame);
    Face d{fresh_face_id(out.scene, "D." + out.frame.labels[idx]), {}};
    const Side first = c > 0 ? Side::Above : Side::Below;
    const Side second = c > 0 ? Side::Below : Side::Above;
    d.set(r.record.first, Crossing::transversal(Endpoint::AtTarget, first));
    d.set(r.record.second, Crossing::transversal(Endpoint::AtSource, second));
    out.faces.push_back(d.id);
    out.scene.faces.emplace(d.id, std::move(d));
  }
  return out;
}

namespace {

std::vector<FluxCombo> singles(const std::vector<FaceId>& faces) {
  std::vector<FluxCombo> out;
  for (const FaceId& f : faces) out.push_back(FluxCombo::single(f));
  return out;
}

}  // namespace

SceneSystem extend_to_system(const Scene& scene, const std::vector<Loop>& loops, const std::string& name) {
  std::vector<Chain> chains;
  for (const Loop& l : loops) chains.push_back(normalize(scene, chain_of(l)));
  BasisResult b = independent_basis(scene.segments, chains);
  if (b.basis.chains.empty()) {
    throw Error(ErrorCode::EmptyInput, "no nontrivial hoop among the " + std::to_string(loops.size()) + " loops");
  }
  DualFaces d = synthesize_dual_faces(scene, b.basis);
  FiniteSystem s = make_system(d.scene, name, singles(d.faces), d.frame);
  return {std::move(d.scene), std::move(s)};
}

SeparatingLoops separating_loops(const Scene& scene, const std::vector<FluxCombo>& combos) {
  std::map<SegmentId, std::set<Endpoint>> ends;
  for (const FluxCombo& c : combos) {
    for (const auto& [key, value] : momentum_vector(scene, c)) ends[key.first].insert(key.second);
  }
  SeparatingLoops out{scene, {}};
  for (const auto& [t, which] : ends) {
    const Segment original = segment(out.scene, t);
    if (which.size() == 2) {
      RefinedScene r = refine_segment(out.scene, t);
      out.scene = std::move(r.scene);
      const SegmentId z1 = fresh_segment_id(out.scene, "z." + t.str() + ".s");
      add_segment(out.scene, {z1, r.record.midpoint, original.source});
      const SegmentId z2 = fresh_segment_id(out.scene, "z." + t.str() + ".t");
      add_segment(out.scene, {z2, original.target, r.record.midpoint});
      out.chains.push_back(Chain({{r.record.first, 1}, {z1, 1}}));
      out.chains.push_back(Chain({{r.record.second, 1}, {z2, 1}}));
    } else {
      const SegmentId z = fresh_segment_id(out.scene, "z." + t.str());
      add_segment(out.scene, {z, original.target, original.source});
      out.chains.push_back(Chain({{t, 1}, {z, 1}}));
    }
  }
  for (Chain& c : out.chains) c = normalize(out.scene, c);
  return out;
}

namespace {

/// Keeps the operator-independent combos, takes a basis of the hoops'
/// span (adding separating loops when the kept combos are not told apart on
/// it) and completes the momenta with dual faces.
SceneSystem complete_system(const Scene& scene, const std::vector<FluxCombo>& combos, std::vector<Chain> hoops,
                            const std::string& name) {
  std::vector<FluxCombo> chosen;
  {
    std::size_t cols = 0;
    const Matrix m = momentum_matrix(scene, combos, cols);
    for (std::size_t i : independent_rows(m, cols)) chosen.push_back(combos[i]);
  }

  Scene current = scene;
  HoopSet frame = independent_basis(current.segments, hoops).basis;
  auto rows_for = [&](const HoopSet& f) {
    Matrix e;
    for (const FluxCombo& c : chosen) e.push_back(combo_row(current, c, f));
    return e;
  };
  if (rank(rows_for(frame), frame.size()) < chosen.size()) {
    SeparatingLoops sep = separating_loops(current, chosen);
    current = std::move(sep.scene);
    for (Chain& c : hoops) c = normalize(current, c);
    hoops.insert(hoops.end(), sep.chains.begin(), sep.chains.end());
    frame = independent_basis(current.segments, hoops).basis;
  }

  Matrix g = rows_for(frame);
  std::vector<std::size_t> missing;
  for (std::size_t j = 0; j < frame.size() && g.size() < frame.size(); ++j) {
    Vector unit(frame.size(), Rational(0));
    unit[j] = 1;
    g.push_back(unit);
    if (rank(g, frame.size()) == g.size()) {
      missing.push_back(j);
    } else {
      g.pop_back();
    }
  }
  DualFaces d = synthesize_dual_faces(current, frame, missing);
  std::vector<FluxCombo> momenta = chosen;
  for (const FaceId& f : d.faces) momenta.push_back(FluxCombo::single(f));
  FiniteSystem s = make_system(d.scene, name, std::move(momenta), d.frame);
  return {std::move(d.scene), std::move(s)};
}

}  // namespace

SceneSystem common_refinement(const Scene& scene, const FiniteSystem& first, const FiniteSystem& second,
                              const std::string& name) {
  std::vector<FluxCombo> combos = first.momenta;
  combos.insert(combos.end(), second.momenta.begin(), second.momenta.end());
  std::vector<Chain> hoops;
  for (const FiniteSystem* s : {&first, &second}) {
    for (const Chain& c : s->frame.chains) hoops.push_back(normalize(scene, c));
  }
  return complete_system(scene, combos, std::move(hoops), name);
}

SceneSystem extend_to_system_momentum(const Scene& scene, const std::vector<FaceId>& faces,
                                      const std::vector<Loop>& hoop_pool, const std::string& name) {
  if (faces.empty()) throw Error(ErrorCode::EmptyInput, "no faces given");
  std::vector<Loop> pool;
  for (const Loop& l : hoop_pool) pool.push_back(normalize(scene, l));
  std::vector<Chain> witnesses;
  for (const FaceId& f : faces) {
    const FaceWitness w = face_validity(face(scene, f), pool);
    witnesses.push_back(chain_of(pool[w.index]));
  }
  return complete_system(scene, singles(faces), std::move(witnesses), name);
}

SceneSystem fresh_disjoint_system(const Scene& scene, std::size_t n, const std::string& name) {
  if (n == 0) throw Error(ErrorCode::EmptyInput, "a fresh system needs at least one loop");
  Scene s = scene;
  const VertexId hub = fresh_vertex_id(s, "hub");
  std::vector<Loop> loops;
  for (std::size_t k = 1; k <= n; ++k) {
    const VertexId u = fresh_vertex_id(s, hub.str() + ".u" + std::to_string(k));
    const SegmentId p = fresh_segment_id(s, hub.str() + ".p" + std::to_string(k));
    s.segments.emplace(p, Segment{p, hub, u});
    const SegmentId q = fresh_segment_id(s, hub.str() + ".q" + std::to_string(k));
    s.segments.emplace(q, Segment{q, u, hub});
    loops.push_back(Loop::make(s.segments, {{p, Direction::Forward}, {q, Direction::Forward}}));
  }
  return extend_to_system(s, loops, name);
}

bool same_reduced_space(const HoopSet& a, const HoopSet& b) {
  std::map<SegmentId, std::size_t> column;
  for (const HoopSet* f : {&a, &b}) {
    for (const Chain& c : f->chains) {
      for (const auto& [seg, v] : c.coefficients()) column.emplace(seg, 0);
    }
  }
  std::size_t k = 0;
  for (auto& [seg, idx] : column) idx = k++;
  auto rows = [&](const HoopSet& f) {
    Matrix m;
    for (const Chain& c : f.chains) {
      Vector r(column.size(), Rational(0));
      for (const auto& [seg, v] : c.coefficients()) r[column.at(seg)] = Rational(static_cast<long>(v));
      m.push_back(std::move(r));
    }
    return m;
  };
  const Matrix ma = rows(a);
  const Matrix mb = rows(b);
  Matrix both = ma;
  both.insert(both.end(), mb.begin(), mb.end());
  const std::size_t ra = rank(ma, column.size());
  return ra == rank(mb, column.size()) && ra == rank(both, column.size());
}

HoopSet recombine_frame(const SegmentRegistry& registry, const HoopSet& frame) {
  if (!frame.chains.empty()) {
    HoopSet other = independent_basis(registry, frame.chains, ForestOrder::Descending).basis;
    if (other.size() == frame.size() && other.chains != frame.chains && same_reduced_space(other, frame)) return other;
  }
  std::vector<std::string> labels;
  std::vector<Chain> chains;
  for (std::size_t i = frame.size(); i-- > 0;) {
    labels.push_back("inv(" + frame.labels[i] + ")");
    chains.push_back(-frame.chains[i]);
  }
  return HoopSet::certified(std::move(labels), std::move(chains));
}

// ---------------------------------------------------------------------------
// Assumption verification

VerifierOps VerifierOps::defaults() {
  VerifierOps ops;
  ops.build_from_loops = [](const Scene& s, const std::vector<Loop>& l) { return hoopflux::extend_to_system(s, l); };
  ops.build_from_faces = [](const Scene& s, const std::vector<FaceId>& f, const std::vector<Loop>& pool) {
    return hoopflux::extend_to_system_momentum(s, f, pool);
  };
  ops.preimage = [](const HoopSet& f, const Vector& x) { return hoopflux::preimage(f, x); };
  ops.combo_apply = [](const Scene& s, const FluxCombo& c, const CylFunction& psi) { return hoopflux::combo_apply(s, c, psi); };
  ops.dof_apply = [](const Scene& s, const FluxCombo& c, const HoopSet& f, std::size_t i) {
    return hoopflux::combo_apply(s, c, CylFunction{f, Polynomial::variable(i)});
  };
  ops.same_reduced_space = [](const HoopSet& a, const HoopSet& b) { return hoopflux::same_reduced_space(a, b); };
  ops.system_geq = [](const Scene& s, const FiniteSystem& a, const FiniteSystem& b) { return hoopflux::system_geq(s, a, b); };
  ops.common_refinement = [](const Scene& s, const FiniteSystem& a, const FiniteSystem& b) {
    return hoopflux::common_refinement(s, a, b);
  };
  return ops;
}

bool AssumptionReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const AssumptionResult& r) { return r.passed; });
}

const AssumptionResult& AssumptionReport::at(const std::string& id) const {
  for (const AssumptionResult& r : results) {
    if (r.id == id) return r;
  }
  throw Error(ErrorCode::UnknownName, "no assumption '" + id + "' in the report");
}

namespace {

void fail(AssumptionResult& r, std::string witness) {
  r.passed = false;
  r.witnesses.push_back(std::move(witness));
}

std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

Vector probe_point(std::size_t n) {
  Vector x;
  for (std::size_t i = 0; i < n; ++i) {
    Rational v(static_cast<long>(i + 1), static_cast<unsigned long>(i + 2));
    if (i % 2 == 1) v = -v;
    x.push_back(v);
  }
  return x;
}

Polynomial truncate(const Polynomial& p, std::size_t n) {
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < p.variable_count(); ++i) {
    images.push_back(i < n ? Polynomial::variable(i) : Polynomial());
  }
  return substitute(p, images);
}

template <class F>
void guarded(AssumptionResult& r, const std::string& context, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    fail(r, context + ": " + e.what());
  }
}

}  // namespace

AssumptionReport verify_assumptions(const Scene& scene, const std::vector<FiniteSystem>& sample,
                                    const VerificationProbes& probes, const VerifierOps& ops) {
  AssumptionReport report;
  auto add = [&](std::string id, std::string title) -> AssumptionResult& {
    report.results.push_back({std::move(id), std::move(title), true, {}, {}});
    return report.results.back();
  };
  std::vector<FiniteSystem> systems;
  for (const FiniteSystem& s : sample) {
    FiniteSystem n = s;
    n.frame = normalize(scene, s.frame);
    systems.push_back(std::move(n));
  }
  auto vacuous = [&](AssumptionResult& r) {
    if (systems.empty()) r.warnings.push_back("empty sample: passes vacuously");
    return systems.empty();
  };

  {
    AssumptionResult& r = add("1a", "finite d.o.f. sets are compatible with some system");
    if (probes.loops.empty()) {
      r.warnings.push_back("no probe loops: passes vacuously");
    } else {
      guarded(r, "extend_to_system", [&] {
        const SceneSystem built = ops.build_from_loops(scene, probes.loops);
        if (!is_nondegenerate(built.scene, built.system)) fail(r, "built system is degenerate");
        for (std::size_t i = 0; i < probes.loops.size(); ++i) {
          const Chain c = normalize(built.scene, chain_of(probes.loops[i]));
          try {
            const std::vector<long> n = decompose_hoop(c, built.system.frame);
            r.witnesses.push_back("probe loop " + std::to_string(i + 1) + " decomposes over '" + built.system.name +
                                  "' (" + std::to_string(n.size()) + " hoops)");
          } catch (const Error& e) {
            fail(r, "probe loop " + std::to_string(i + 1) + ": " + e.what());
          }
        }
      });
    }
  }

  {
    AssumptionResult& r = add("1b", "finite momentum sets lie in some system");
    std::vector<Loop> pool;
    for (const auto& [name, l] : scene.loops) pool.push_back(l);
    std::vector<FaceId> valid;
    for (const FaceId& f : probes.faces) {
      try {
        face_validity(face(scene, f), pool);
        valid.push_back(f);
      } catch (const Error& e) {
        r.warnings.push_back("probe face '" + f.str() + "' skipped: " + e.what());
      }
    }
    if (valid.empty()) {
      r.warnings.push_back("no usable probe faces: passes vacuously");
    } else {
      guarded(r, "extend_to_system_momentum", [&] {
        const SceneSystem built = ops.build_from_faces(scene, valid, pool);
        if (!is_nondegenerate(built.scene, built.system)) fail(r, "built system is degenerate");
        for (const FaceId& f : valid) {
          if (momentum_coefficients(built.scene, built.system.momenta, FluxCombo::single(f))) {
            r.witnesses.push_back("flux of '" + f.str() + "' lies in the momentum space of '" + built.system.name + "'");
          } else {
            fail(r, "flux of '" + f.str() + "' is missing from the built momentum space");
          }
        }
      });
    }
  }

  {
    AssumptionResult& r = add("2", "reduced configuration spaces are all of R^N");
    if (!vacuous(r)) {
      for (const FiniteSystem& s : systems) {
        guarded(r, s.name, [&] {
          std::vector<Vector> points;
          for (std::size_t i = 0; i < s.frame.size(); ++i) {
            Vector e(s.frame.size(), Rational(0));
            e[i] = 1;
            points.push_back(std::move(e));
          }
          points.push_back(probe_point(s.frame.size()));
          for (const Vector& x : points) {
            const Vector got = coordinate_map(s.frame, ops.preimage(s.frame, x));
            if (got != x) {
              fail(r, s.name + ": preimage of " + vec_str(x) + " maps to " + vec_str(got));
              return;
            }
          }
          r.witnesses.push_back(s.name + ": " + std::to_string(points.size()) + " target points reached");
        });
      }
    }
  }

  std::vector<Polynomial> polys = probes.polynomials;
  {
    AssumptionResult& r = add("3a", "flux action decomposes through the coordinate derivatives");
    if (polys.empty()) {
      polys = {parse_polynomial("x1^2*x2 - 3*x1 + 1/2"), parse_polynomial("x1*x2*x3 + x2^3 - 2/3*x3")};
      r.warnings.push_back("no probe polynomials given: using built-in ones");
    }
    if (!vacuous(r)) {
      for (const FiniteSystem& s : systems) {
        guarded(r, s.name, [&] {
          std::size_t checked = 0;
          for (std::size_t k = 0; k < s.momenta.size(); ++k) {
            Vector c;
            for (const Chain& ch : s.frame.chains) c.push_back(combo_epsilon(scene, s.momenta[k], ch));
            for (const Polynomial& p : polys) {
              const Polynomial psi = truncate(p, s.frame.size());
              const CylFunction lhs = ops.combo_apply(scene, s.momenta[k], CylFunction{s.frame, psi});
              const Polynomial rhs = directional_derivative(psi, c);
              if (lhs.poly != rhs) {
                fail(r, s.name + ": operator " + std::to_string(k + 1) + " on " + format(psi) + " gives " +
                            format(lhs.poly) + ", expected " + format(rhs));
                return;
              }
              ++checked;
            }
          }
          r.witnesses.push_back(s.name + ": " + std::to_string(checked) + " operator/function pairs agree");
        });
      }
    }
  }

  {
    AssumptionResult& r = add("3b", "flux of a configuration d.o.f. is constant");
    if (!vacuous(r)) {
      for (const FiniteSystem& s : systems) {
        guarded(r, s.name, [&] {
          for (std::size_t k = 0; k < s.momenta.size(); ++k) {
            for (std::size_t i = 0; i < s.frame.size(); ++i) {
              const CylFunction out = ops.dof_apply(scene, s.momenta[k], s.frame, i);
              if (!out.poly.is_constant()) {
                fail(r, s.name + ": operator " + std::to_string(k + 1) + " on hoop '" + s.frame.labels[i] +
                            "' gives " + format(out.poly));
                return;
              }
            }
          }
          r.witnesses.push_back(s.name + ": all " + std::to_string(s.momenta.size() * s.frame.size()) +
                                " values constant");
        });
      }
    }
  }

  {
    AssumptionResult& r = add("4", "G matrix is non-degenerate");
    if (!vacuous(r)) {
      for (const FiniteSystem& s : systems) {
        guarded(r, s.name, [&] {
          const GMatrix g = g_matrix(scene, s.momenta, s.frame);
          if (g.entries != s.g) {
            fail(r, s.name + ": cached G disagrees with the recomputed one");
          } else if (!g.nondegenerate || !s.nondegenerate) {
            fail(r, s.name + ": det G = " + to_string(g.determinant));
          } else {
            r.witnesses.push_back(s.name + ": det G = " + to_string(g.determinant));
          }
        });
      }
    }
  }

  {
    AssumptionResult& r = add("5", "systems over the same reduced space are comparable");
    if (!vacuous(r)) {
      for (const FiniteSystem& s : systems) {
        guarded(r, s.name, [&] {
          const HoopSet other = recombine_frame(scene.segments, s.frame);
          const FiniteSystem t = make_system(scene, s.name + "'", s.momenta, other);
          if (!t.nondegenerate) {
            fail(r, s.name + ": recombined system is degenerate");
            return;
          }
          if (!ops.same_reduced_space(s.frame, other)) {
            fail(r, s.name + ": recombined frame not recognized as the same reduced space");
            return;
          }
          ops.system_geq(scene, t, s);
          ops.system_geq(scene, s, t);
          r.witnesses.push_back(s.name + ": comparable both ways with a recombined frame");
        });
      }
    }
  }

  {
    add("6a", "d.o.f. of a subsystem are combinations of the larger system's");
    add("6b", "operators of a subsystem are combinations of the larger system's");
    AssumptionResult& ra = report.results[report.results.size() - 2];
    AssumptionResult& b = report.results.back();
    const bool empty_a = vacuous(ra);
    const bool empty_b = vacuous(b);
    if (!empty_a && !empty_b) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = 0; i < systems.size(); ++i) {
        for (std::size_t j = i + 1; j < systems.size(); ++j) pairs.emplace_back(i, j);
      }
      if (pairs.empty()) pairs.emplace_back(0, 0);
      for (const auto& [i, j] : pairs) {
        const std::string tag = systems[i].name + " v " + systems[j].name;
        try {
          const SceneSystem up = ops.common_refinement(scene, systems[i], systems[j]);
          for (std::size_t k : {i, j}) {
            const FiniteSystem low = normalize(up.scene, systems[k]);
            const SystemOrderWitness w = ops.system_geq(up.scene, up.system, low);
            bool ok_a = w.hoops.matrix.size() == low.frame.size();
            for (std::size_t h = 0; ok_a && h < low.frame.size(); ++h) {
              const auto& row = w.hoops.matrix[h];
              if (row.size() != up.system.frame.size()) {
                ok_a = false;
                break;
              }
              Chain sum;
              for (std::size_t f = 0; f < row.size(); ++f) sum = sum + up.system.frame.chains[f].scaled(row[f]);
              ok_a = sum == low.frame.chains[h];
            }
            bool ok_b = w.momentum.size() == low.momenta.size();
            for (std::size_t m = 0; ok_b && m < low.momenta.size(); ++m) {
              if (w.momentum[m].size() != up.system.momenta.size()) {
                ok_b = false;
                break;
              }
              FluxCombo sum;
              for (std::size_t f = 0; f < w.momentum[m].size(); ++f) {
                sum = sum + up.system.momenta[f].scaled(w.momentum[m][f]);
              }
              ok_b = momentum_vector(up.scene, sum) == momentum_vector(up.scene, low.momenta[m]);
            }
            const std::string where = tag + ", join over " + systems[k].name;
            if (ok_a) {
              ra.witnesses.push_back(where + ": hoop matrix reproduces every chain");
            } else {
              fail(ra, where + ": hoop matrix does not reproduce the chains");
            }
            if (ok_b) {
              b.witnesses.push_back(where + ": momentum coefficients reproduce every operator");
            } else {
              fail(b, where + ": momentum coefficients do not reproduce the operators");
            }
          }
        } catch (const Error& e) {
          fail(ra, tag + ": " + e.what());
          fail(b, tag + ": " + e.what());
        }
      }
    }
  }
  return report;
}

}  // namespace hoopflux
