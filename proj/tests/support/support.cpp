#include "support.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "hoopflux/error.hpp"

namespace hoopflux::testing {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational random_rational(Rng& rng, long magnitude, long max_denominator) {
  Rational q(uniform(rng, -magnitude, magnitude), uniform(rng, 1, max_denominator));
  q.canonicalize();
  return q;
}

Scene random_scene(Rng& rng, std::size_t vertices, std::size_t extra, const std::string& prefix) {
  Scene scene;
  auto v = [&](std::size_t k) { return VertexId(prefix + "v" + std::to_string(k)); };
  std::size_t next = 0;
  auto add = [&](std::size_t a, std::size_t b) {
    const SegmentId id(prefix + "s" + std::to_string(next++));
    if (uniform(rng, 0, 1)) std::swap(a, b);
    scene.segments.emplace(id, Segment{id, v(a), v(b)});
  };
  for (std::size_t k = 1; k < vertices; ++k) add(k, static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(k) - 1)));
  for (std::size_t k = 0; k < extra && vertices > 1; ++k) {
    const std::size_t a = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(vertices) - 1));
    std::size_t b = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(vertices) - 2));
    if (b >= a) ++b;
    add(a, b);
  }
  return scene;
}

namespace {

struct Arc {
  SegmentId segment;
  Direction direction;
  VertexId to;
};

std::map<VertexId, std::vector<Arc>> adjacency(const Scene& scene) {
  std::map<VertexId, std::vector<Arc>> adj;
  for (const auto& [id, s] : scene.segments) {
    adj[s.source].push_back({id, Direction::Forward, s.target});
    adj[s.target].push_back({id, Direction::Reverse, s.source});
  }
  return adj;
}

}  // namespace

Loop random_loop(Rng& rng, const Scene& scene, const VertexId& base, std::size_t length) {
  const auto adj = adjacency(scene);
  std::vector<Step> steps;
  VertexId at = base;
  for (std::size_t i = 0; i < length; ++i) {
    const std::vector<Arc>& out = adj.at(at);
    const Arc& a = out[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(out.size()) - 1))];
    steps.push_back({a.segment, a.direction});
    at = a.to;
  }
  // shortest way back
  std::map<VertexId, std::pair<VertexId, Step>> parent;
  std::deque<VertexId> queue{base};
  std::set<VertexId> seen{base};
  while (!queue.empty() && !seen.count(at)) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (const Arc& a : adj.at(u)) {
      if (seen.insert(a.to).second) {
        // reversed arc walks from a.to back to u
        parent[a.to] = {u, Step{a.segment, a.direction == Direction::Forward ? Direction::Reverse : Direction::Forward}};
        queue.push_back(a.to);
      }
    }
  }
  while (at != base) {
    const auto& [prev, step] = parent.at(at);
    steps.push_back(step);
    at = prev;
  }
  if (steps.empty()) {
    const Arc& a = adj.at(base).front();
    steps = {{a.segment, a.direction}, {a.segment, a.direction == Direction::Forward ? Direction::Reverse : Direction::Forward}};
  }
  return Loop::make(scene.segments, std::move(steps));
}

Loop random_loop(Rng& rng, const Scene& scene, std::size_t length) {
  auto it = scene.segments.begin();
  std::advance(it, uniform(rng, 0, static_cast<long>(scene.segments.size()) - 1));
  return random_loop(rng, scene, it->second.source, length);
}

Face random_face(Rng& rng, const Scene& scene, const FaceId& id, double density) {
  Face f;
  f.id = id;
  std::bernoulli_distribution pick(density);
  for (const auto& [seg, s] : scene.segments) {
    if (!pick(rng)) continue;
    switch (uniform(rng, 0, 4)) {
      case 0: f.set(seg, Crossing::in_closure()); break;
      case 1: f.set(seg, Crossing::transversal(Endpoint::AtSource, Side::Above)); break;
      case 2: f.set(seg, Crossing::transversal(Endpoint::AtSource, Side::Below)); break;
      case 3: f.set(seg, Crossing::transversal(Endpoint::AtTarget, Side::Above)); break;
      default: f.set(seg, Crossing::transversal(Endpoint::AtTarget, Side::Below)); break;
    }
  }
  return f;
}

FieldSample random_field(Rng& rng, const Scene& scene) {
  FieldSample a;
  for (const auto& [seg, s] : scene.segments) a.set(seg, random_rational(rng, 9, 5));
  return a;
}

GaugeFunction random_gauge(Rng& rng, const Scene& scene) {
  GaugeFunction f;
  for (const VertexId& v : vertices(scene)) f.set(v, random_rational(rng, 9, 5));
  return f;
}

Polynomial random_polynomial(Rng& rng, std::size_t variables, unsigned max_degree, std::size_t terms) {
  Polynomial p;
  if (variables == 0) return Polynomial::constant(random_rational(rng));
  for (std::size_t t = 0; t < terms; ++t) {
    Monomial m(variables, 0);
    const unsigned degree = static_cast<unsigned>(uniform(rng, 0, max_degree));
    for (unsigned d = 0; d < degree; ++d) ++m[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(variables) - 1))];
    while (!m.empty() && m.back() == 0) m.pop_back();
    p.add_term(std::move(m), random_rational(rng));
  }
  return p;
}

Graph add_random_graph(Rng& rng, Scene& scene, const std::string& name, std::size_t vertices, std::size_t edges,
                       bool connected) {
  Graph g;
  g.name = name;
  auto v = [&](std::size_t k) { return VertexId(name + ".v" + std::to_string(k)); };
  auto add_edge = [&](std::size_t a, std::size_t b) {
    const std::string ename = name + ".e" + std::to_string(g.edges.size() + 1);
    const std::size_t pieces = static_cast<std::size_t>(uniform(rng, 1, 3));
    std::vector<Step> steps;
    VertexId at = v(a);
    for (std::size_t k = 1; k <= pieces; ++k) {
      const VertexId to = k == pieces ? v(b) : VertexId(ename + ".p" + std::to_string(k));
      const SegmentId id(ename + ".s" + std::to_string(k));
      // segments may run against the edge
      if (uniform(rng, 0, 3) == 0) {
        scene.segments.emplace(id, Segment{id, to, at});
        steps.push_back({id, Direction::Reverse});
      } else {
        scene.segments.emplace(id, Segment{id, at, to});
        steps.push_back({id, Direction::Forward});
      }
      at = to;
    }
    g.edges.push_back({ename, Path::make(scene.segments, std::move(steps))});
  };
  std::size_t made = 0;
  if (connected) {
    for (std::size_t k = 1; k < vertices && made < edges; ++k, ++made) {
      const std::size_t parent = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(k) - 1));
      if (uniform(rng, 0, 1)) {
        add_edge(k, parent);
      } else {
        add_edge(parent, k);
      }
    }
  }
  for (; made < edges; ++made) {
    const std::size_t a = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(vertices) - 1));
    std::size_t b = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(vertices) - 2));
    if (b >= a) ++b;
    add_edge(a, b);
  }
  scene.graphs[name] = g;
  return g;
}

std::vector<FaceId> add_edge_dual_faces(Scene& scene, const Graph& graph) {
  std::vector<FaceId> out;
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    Face f;
    f.id = FaceId(graph.name + ".F" + std::to_string(k + 1));
    const Step& first = graph.edges[k].path.steps().front();
    // meets the edge at the far end of its first step, from above
    f.set(first.segment, first.direction == Direction::Forward
                             ? Crossing::transversal(Endpoint::AtTarget, Side::Above)
                             : Crossing::transversal(Endpoint::AtSource, Side::Above));
    for (std::size_t s = 1; s < graph.edges[k].path.steps().size(); ++s) {
      f.set(graph.edges[k].path.steps()[s].segment, Crossing::in_closure());
    }
    out.push_back(f.id);
    scene.faces[f.id] = std::move(f);
  }
  return out;
}

Polynomial random_gauge_invariant(Rng& rng, const Graph& graph) {
  const LoopBasis lb = loop_basis(graph, maximal_tree(graph));
  Polynomial p = Polynomial::constant(random_rational(rng));
  if (lb.loops.empty()) return p;
  // a loop as a combination of edge variables, read off the first segment of each edge
  std::vector<Vector> forms;
  for (const Loop& l : lb.loops) {
    const Chain c = chain_of(l);
    Vector f;
    for (const GraphEdge& e : graph.edges) {
      const Chain ec = chain_of(e.path);
      const SegmentId& s = ec.coefficients().begin()->first;
      f.push_back(Rational(c.at(s) * ec.at(s)));
    }
    forms.push_back(std::move(f));
  }
  for (int k = 0; k < 2; ++k) {
    Polynomial term = Polynomial::constant(random_rational(rng));
    const long factors = uniform(rng, 1, 2);
    for (long f = 0; f < factors; ++f) {
      term = term * Polynomial::linear(forms[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(forms.size()) - 1))]);
    }
    p = p + term;
  }
  return p;
}

HoopSet random_frame(Rng& rng, const Scene& scene, std::size_t loops, std::size_t length) {
  std::vector<Loop> ls;
  for (std::size_t i = 0; i < loops; ++i) ls.push_back(random_loop(rng, scene, length));
  return independent_basis(scene.segments, ls).basis;
}

// ---------------------------------------------------------------------------
// Oracle

std::optional<std::vector<Rational>> oracle_combination(const std::vector<std::vector<Rational>>& vectors,
                                                        const std::vector<Rational>& target) {
  const std::size_t n = vectors.size();
  const std::size_t dim = target.size();
  // augmented matrix: dim rows, n + 1 columns
  std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(n + 1));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = vectors[c].at(r);
    a[r][n] = target[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < dim; ++c) {
    std::size_t p = row;
    while (p < dim && a[p][c] == 0) ++p;
    if (p == dim) continue;
    std::swap(a[p], a[row]);
    const Rational inv = 1 / a[row][c];
    for (Rational& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == row || a[r][c] == 0) continue;
      const Rational factor = a[r][c];
      for (std::size_t k = 0; k <= n; ++k) a[r][k] -= factor * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < dim; ++r) {
    if (a[r][n] != 0) return std::nullopt;
  }
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = a[r][n];
  return x;
}

std::size_t oracle_rank(std::vector<std::vector<Rational>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const Rational factor = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> chain_vectors(const std::vector<Chain>& chains) {
  std::map<SegmentId, std::size_t> index;
  for (const Chain& c : chains) {
    for (const auto& [seg, n] : c.coefficients()) index.emplace(seg, 0);
  }
  std::size_t k = 0;
  for (auto& [seg, i] : index) i = k++;
  std::vector<std::vector<Rational>> out;
  for (const Chain& c : chains) {
    std::vector<Rational> v(index.size(), Rational(0));
    for (const auto& [seg, n] : c.coefficients()) v[index.at(seg)] = Rational(n);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<Rational>> oracle_decompose(const Chain& target, const std::vector<Chain>& basis) {
  std::vector<Chain> all = basis;
  all.push_back(target);
  std::vector<std::vector<Rational>> vs = chain_vectors(all);
  const std::vector<Rational> t = vs.back();
  vs.pop_back();
  auto x = oracle_combination(vs, t);
  if (!x) return std::nullopt;
  for (const Rational& q : *x) {
    if (q.get_den() != 1) return std::nullopt;
  }
  return x;
}

namespace {

std::vector<std::vector<Rational>> momentum_vectors(const Scene& scene, const std::vector<FluxCombo>& combos) {
  std::vector<MomentumVector> mv;
  std::set<MomentumKey> keys;
  for (const FluxCombo& c : combos) {
    mv.push_back(momentum_vector(scene, c));
    for (const auto& [k, v] : mv.back()) keys.insert(k);
  }
  std::vector<std::vector<Rational>> out;
  for (const MomentumVector& m : mv) {
    std::vector<Rational> v;
    for (const MomentumKey& k : keys) {
      const auto it = m.find(k);
      v.push_back(it == m.end() ? Rational(0) : it->second);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

bool oracle_geq(const Scene& scene, const FiniteSystem& finer, const FiniteSystem& coarser) {
  for (const Chain& c : coarser.frame.chains) {
    if (!oracle_decompose(c, finer.frame.chains)) return false;
  }
  for (const FluxCombo& c : coarser.momenta) {
    std::vector<FluxCombo> all = finer.momenta;
    all.push_back(c);
    std::vector<std::vector<Rational>> vs = momentum_vectors(scene, all);
    const std::vector<Rational> t = vs.back();
    vs.pop_back();
    if (!oracle_combination(vs, t)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Faults

VerifierOps faulty_ops(const std::string& assumption) {
  VerifierOps ops = VerifierOps::defaults();
  const VerifierOps good = VerifierOps::defaults();
  if (assumption == "1a") {
    // forget the last hoop of an otherwise correct system
    ops.build_from_loops = [good](const Scene& s, const std::vector<Loop>& loops) {
      SceneSystem out = good.build_from_loops(s, loops);
      HoopSet& f = out.system.frame;
      f.labels.pop_back();
      f.chains.pop_back();
      f.certificate->exclusive.pop_back();
      out.system = make_system(out.scene, out.system.name,
                               {out.system.momenta.begin(), out.system.momenta.end() - 1}, f);
      return out;
    };
  } else if (assumption == "1b") {
    ops.build_from_faces = [good](const Scene& s, const std::vector<FaceId>& faces, const std::vector<Loop>& pool) {
      if (faces.size() == 1) {
        // a system that ignores the requested face entirely
        return good.build_from_loops(s, {pool.front()});
      }
      std::vector<FaceId> fewer(faces.begin(), faces.end() - 1);
      return good.build_from_faces(s, fewer, pool);
    };
  } else if (assumption == "2") {
    ops.preimage = [](const HoopSet&, const Vector&) { return FieldSample{}; };
  } else if (assumption == "3a") {
    ops.combo_apply = [good](const Scene& s, const FluxCombo& c, const CylFunction& psi) {
      CylFunction out = good.combo_apply(s, c, psi);
      out.poly = out.poly + Polynomial::constant(1);
      return out;
    };
  } else if (assumption == "3b") {
    ops.dof_apply = [](const Scene&, const FluxCombo&, const HoopSet& f, std::size_t i) {
      return CylFunction{f, Polynomial::variable(i)};
    };
  } else if (assumption == "5") {
    ops.same_reduced_space = [](const HoopSet&, const HoopSet&) { return false; };
  } else if (assumption == "6a") {
    ops.system_geq = [good](const Scene& s, const FiniteSystem& a, const FiniteSystem& b) {
      SystemOrderWitness w = good.system_geq(s, a, b);
      if (!w.hoops.matrix.empty() && !w.hoops.matrix.front().empty()) w.hoops.matrix.front().front() += 1;
      return w;
    };
  } else if (assumption == "6b") {
    ops.system_geq = [good](const Scene& s, const FiniteSystem& a, const FiniteSystem& b) {
      SystemOrderWitness w = good.system_geq(s, a, b);
      if (!w.momentum.empty() && !w.momentum.front().empty()) w.momentum.front().front() += 1;
      return w;
    };
  }
  return ops;
}

std::vector<FiniteSystem> broken_g_sample(std::vector<FiniteSystem> sample) {
  if (!sample.empty() && !sample.front().g.empty()) sample.front().g.front().front() += 1;
  return sample;
}

GeneratedSample generated_sample(Rng& rng, std::size_t systems) {
  GeneratedSample out;
  out.scene = random_scene(rng, 5, 5);
  for (int k = 0; k < 3; ++k) {
    const FaceId id("F" + std::to_string(k + 1));
    out.scene.faces[id] = random_face(rng, out.scene, id);
  }
  for (std::size_t i = 0; i < systems; ++i) {
    std::vector<Loop> loops;
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 3));
    for (std::size_t k = 0; k < n; ++k) loops.push_back(random_loop(rng, out.scene, 4));
    try {
      SceneSystem built = extend_to_system(out.scene, loops, "sys" + std::to_string(i + 1));
      out.scene = std::move(built.scene);
      out.systems.push_back(std::move(built.system));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyInput) throw;  // all loops were trivial
    }
  }
  for (FiniteSystem& s : out.systems) s = normalize(out.scene, s);
  for (std::size_t k = 0; k < 3; ++k) {
    Loop l = random_loop(rng, out.scene, 5);
    out.scene.loops.insert_or_assign("probe" + std::to_string(k + 1), l);
    out.probes.loops.push_back(std::move(l));
  }
  for (const auto& [id, f] : out.scene.faces) {
    if (id.str().rfind("F", 0) == 0) out.probes.faces.push_back(id);
  }
  for (int k = 0; k < 2; ++k) out.probes.polynomials.push_back(random_polynomial(rng, 3, 3, 3));
  return out;
}

}  // namespace hoopflux::testing
