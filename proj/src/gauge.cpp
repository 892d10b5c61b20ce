#include "hoopflux/gauge.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "hoopflux/error.hpp"

namespace hoopflux {

FieldSample gauge_transform(const Scene& scene, const FieldSample& a, const GaugeFunction& f) {
  FieldSample out = a;
  for (const auto& [id, seg] : scene.segments) out.set(id, a.at(id) + d_of(scene, f, id));
  return out;
}

Vector edge_coordinates(const Graph& graph, const FieldSample& a) {
  Vector x;
  for (const GraphEdge& e : graph.edges) x.push_back(kappa_eval(chain_of(e.path), a));
  return x;
}

std::vector<VertexId> graph_vertices(const Graph& graph) {
  std::set<VertexId> v;
  for (const GraphEdge& e : graph.edges) {
    v.insert(e.path.source());
    v.insert(e.path.target());
  }
  return {v.begin(), v.end()};
}

bool MaximalTree::contains(const std::string& edge) const {
  return std::find(edges.begin(), edges.end(), edge) != edges.end();
}

MaximalTree maximal_tree(const Graph& graph) {
  std::vector<std::size_t> by_name(graph.edges.size());
  std::iota(by_name.begin(), by_name.end(), 0);
  std::sort(by_name.begin(), by_name.end(),
            [&](std::size_t a, std::size_t b) { return graph.edges[a].name < graph.edges[b].name; });
  MaximalTree tree;
  std::set<VertexId> covered;
  std::set<std::size_t> used;
  for (std::size_t start : by_name) {
    const GraphEdge& first = graph.edges[start];
    if (covered.count(first.path.source())) continue;  // already in an earlier component
    std::set<VertexId> in_tree{first.path.source(), first.path.target()};
    tree.edges.push_back(first.name);
    tree.roots.push_back(first.path.source());
    used.insert(start);
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t k : by_name) {
        if (used.count(k)) continue;
        const bool s = in_tree.count(graph.edges[k].path.source()) > 0;
        const bool t = in_tree.count(graph.edges[k].path.target()) > 0;
        if (s != t) {
          in_tree.insert(graph.edges[k].path.source());
          in_tree.insert(graph.edges[k].path.target());
          tree.edges.push_back(graph.edges[k].name);
          used.insert(k);
          grew = true;
          break;
        }
      }
    }
    covered.insert(in_tree.begin(), in_tree.end());
  }
  return tree;
}

namespace {

struct TreeStep {
  std::size_t edge;
  bool forward;  // edge traversed source -> target when walking towards the root
  VertexId next;
};

struct RootedTree {
  std::map<VertexId, std::optional<TreeStep>> towards_root;  // nullopt at roots
  std::map<VertexId, VertexId> root_of;
  std::vector<VertexId> order;  // roots first, then breadth-first
};

RootedTree root_tree(const Graph& graph, const MaximalTree& tree) {
  std::map<VertexId, std::vector<std::size_t>> incident;
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    if (!tree.contains(graph.edges[k].name)) continue;
    incident[graph.edges[k].path.source()].push_back(k);
    incident[graph.edges[k].path.target()].push_back(k);
  }
  RootedTree r;
  for (const VertexId& root : tree.roots) {
    r.towards_root[root] = std::nullopt;
    r.root_of[root] = root;
    r.order.push_back(root);
    std::deque<VertexId> queue{root};
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      for (std::size_t k : incident[v]) {
        const Path& p = graph.edges[k].path;
        const bool v_is_source = p.source() == v;
        const VertexId& w = v_is_source ? p.target() : p.source();
        if (r.towards_root.count(w)) continue;
        // walking from w back to v
        r.towards_root[w] = TreeStep{k, !v_is_source, v};
        r.root_of[w] = root;
        r.order.push_back(w);
        queue.push_back(w);
      }
    }
  }
  return r;
}

/// e(v): path from v to its root along the tree, or nullopt at a root.
std::optional<Path> tree_path(const Graph& graph, const RootedTree& r, VertexId v) {
  std::vector<Path> parts;
  while (const auto& step = r.towards_root.at(v)) {
    const Path& p = graph.edges[step->edge].path;
    parts.push_back(step->forward ? p : reverse(p));
    v = step->next;
  }
  if (parts.empty()) return std::nullopt;
  return compose(parts);
}

}  // namespace

LoopBasis loop_basis(const Graph& graph, const MaximalTree& tree) {
  const RootedTree r = root_tree(graph, tree);
  LoopBasis out;
  std::vector<std::string> labels;
  std::vector<Chain> chains;
  for (const GraphEdge& e : graph.edges) {
    if (tree.contains(e.name)) continue;
    std::vector<Path> parts;
    if (auto to_source = tree_path(graph, r, e.path.source())) parts.push_back(reverse(*to_source));
    parts.push_back(e.path);
    if (auto from_target = tree_path(graph, r, e.path.target())) parts.push_back(*from_target);
    Loop l = Loop::make(compose(parts));
    out.edges.push_back(e.name);
    labels.push_back("loop(" + e.name + ")");
    chains.push_back(chain_of(l));
    out.loops.push_back(std::move(l));
  }
  out.frame = HoopSet::certified(std::move(labels), std::move(chains));
  return out;
}

GaugeFunction theta_assignment(const Scene& scene, const Graph& graph, const MaximalTree& tree, const FieldSample& a) {
  (void)scene;
  const RootedTree r = root_tree(graph, tree);
  std::map<VertexId, Rational> theta;
  GaugeFunction f;
  for (const VertexId& v : r.order) {
    const auto& step = r.towards_root.at(v);
    if (!step) {
      theta[v] = 0;
      continue;
    }
    const Rational k = kappa_eval(chain_of(graph.edges[step->edge].path), a);
    theta[v] = (step->forward ? k : Rational(-k)) + theta.at(step->next);
    f.set(v, theta[v]);
  }
  return f;
}

std::map<VertexId, Vector> gauge_directions(const Graph& graph) {
  std::map<VertexId, Vector> d;
  for (const VertexId& v : graph_vertices(graph)) d[v] = Vector(graph.edges.size(), Rational(0));
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    d[graph.edges[k].path.target()][k] += 1;
    d[graph.edges[k].path.source()][k] -= 1;
  }
  return d;
}

namespace {

void require_frame(const Graph& graph, const Polynomial& p) {
  if (p.variable_count() > graph.edges.size()) {
    throw Error(ErrorCode::FrameMismatch, "polynomial uses x" + std::to_string(p.variable_count()) + " but graph '" +
                                              graph.name + "' has " + std::to_string(graph.edges.size()) + " edges");
  }
}

}  // namespace

bool is_gauge_invariant(const Graph& graph, const Polynomial& p) {
  require_frame(graph, p);
  for (const auto& [v, d] : gauge_directions(graph)) {
    if (!directional_derivative(p, d).is_zero()) return false;
  }
  return true;
}

std::variant<Rational, CylFunction> gauge_reduce(const Graph& graph, const Polynomial& p) {
  require_frame(graph, p);
  for (const auto& [v, d] : gauge_directions(graph)) {
    if (!directional_derivative(p, d).is_zero()) {
      throw Error(ErrorCode::NotInvariant, "polynomial changes along the gauge direction of vertex '" + v.str() + "'");
    }
  }
  const MaximalTree tree = maximal_tree(graph);
  LoopBasis loops = loop_basis(graph, tree);
  std::vector<Polynomial> images;
  std::size_t j = 0;
  for (const GraphEdge& e : graph.edges) {
    images.push_back(tree.contains(e.name) ? Polynomial() : Polynomial::variable(j++));
  }
  Polynomial reduced = substitute(p, images);
  if (loops.loops.empty()) return reduced.constant_term();
  return CylFunction{std::move(loops.frame), std::move(reduced)};
}

Vector edge_epsilon_row(const Face& face, const Graph& graph) {
  Vector row;
  for (const GraphEdge& e : graph.edges) row.push_back(Rational(static_cast<long>(epsilon_edge(face, e.path))));
  return row;
}

Vector edge_combo_row(const Scene& scene, const FluxCombo& combo, const Graph& graph) {
  Vector row(graph.edges.size(), Rational(0));
  for (const FluxTerm& t : combo.terms()) {
    const Vector r = edge_epsilon_row(face(scene, t.face), graph);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] += t.coefficient * r[i];
  }
  return row;
}

Polynomial graph_flux_apply(const Scene& scene, const FluxCombo& combo, const Graph& graph, const Polynomial& p) {
  require_frame(graph, p);
  return directional_derivative(p, edge_combo_row(scene, combo, graph));
}

bool flux_gauge_invariance_check(const Scene& scene, const FaceId& face_id, const Graph& graph, const Polynomial& p,
                                 const GaugeFunction& f) {
  require_frame(graph, p);
  std::vector<Polynomial> forward;
  std::vector<Polynomial> backward;
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const Path& e = graph.edges[k].path;
    const Rational shift = f.at(e.target()) - f.at(e.source());
    forward.push_back(Polynomial::variable(k) + Polynomial::constant(shift));
    backward.push_back(Polynomial::variable(k) - Polynomial::constant(shift));
  }
  const FluxCombo phi = FluxCombo::single(face_id);
  const Polynomial moved = substitute(p, forward);
  const Polynomial lhs = substitute(graph_flux_apply(scene, phi, graph, moved), backward);
  return lhs == graph_flux_apply(scene, phi, graph, p);
}

Matrix unconstrained_g(const Scene& scene, const UnconstrainedSystem& system) {
  const Graph& g = graph(scene, system.graph);
  Matrix m;
  for (const FluxCombo& c : system.momenta) m.push_back(edge_combo_row(scene, c, g));
  return m;
}

bool is_nondegenerate(const Scene& scene, const UnconstrainedSystem& system) {
  const Graph& g = graph(scene, system.graph);
  if (g.edges.empty() || system.momenta.size() != g.edges.size()) return false;
  return determinant(unconstrained_g(scene, system)) != 0;
}

void unconstrained_geq(const Scene& scene, const UnconstrainedSystem& finer, const UnconstrainedSystem& coarser) {
  const Graph& fine = graph(scene, finer.graph);
  const Graph& coarse = graph(scene, coarser.graph);
  for (const GraphEdge& e : coarse.edges) {
    Chain residual = chain_of(e.path);
    for (const GraphEdge& f : fine.edges) {
      const Chain fc = chain_of(f.path);
      const SegmentId& s = fc.coefficients().begin()->first;
      const long n = residual.at(s) * fc.at(s);
      residual = residual - fc.scaled(n);
    }
    if (!residual.is_zero()) {
      throw Error(ErrorCode::NotComparable,
                  "edge side: edge '" + e.name + "' is not a composition of the edges of '" + fine.name + "'");
    }
  }
  for (std::size_t k = 0; k < coarser.momenta.size(); ++k) {
    if (!momentum_coefficients(scene, finer.momenta, coarser.momenta[k])) {
      throw Error(ErrorCode::NotComparable, "momentum side: operator " + std::to_string(k + 1) + " of '" +
                                                coarser.name + "' is not in the span of '" + finer.name + "'");
    }
  }
}

ConstrainedSystem constrain_system(const Scene& scene, const UnconstrainedSystem& system,
                                   std::optional<std::vector<std::size_t>> hint) {
  const Graph& g = graph(scene, system.graph);
  if (!is_nondegenerate(scene, system)) {
    throw Error(ErrorCode::InvalidArgument, "unconstrained system '" + system.name + "' is degenerate");
  }
  ConstrainedSystem out;
  out.loops = loop_basis(g, maximal_tree(g));
  const std::size_t n = system.momenta.size();
  const std::size_t m = out.loops.loops.size();
  if (m == 0) {
    throw Error(ErrorCode::NoLoops, "graph '" + g.name + "' is a forest; only constant invariants exist");
  }
  for (const FluxCombo& c : system.momenta) {
    Vector row;
    for (const Loop& l : out.loops.loops) {
      Rational v = 0;
      for (const FluxTerm& t : c.terms()) {
        v += t.coefficient * Rational(static_cast<long>(epsilon_edge(face(scene, t.face), l.path())));
      }
      row.push_back(v);
    }
    out.restricted.push_back(std::move(row));
  }
  const Rref k = rref(left_kernel(out.restricted, m), n);
  out.kernel = k.reduced;
  if (hint) {
    std::set<std::size_t> distinct(hint->begin(), hint->end());
    if (hint->size() != m || distinct.size() != m || *distinct.rbegin() >= n) {
      throw Error(ErrorCode::InvalidArgument, "complement hint must name " + std::to_string(m) +
                                                  " distinct momenta out of " + std::to_string(n));
    }
    Matrix rows;
    for (std::size_t i : *hint) rows.push_back(out.restricted[i]);
    if (rank(rows, m) != m) {
      throw Error(ErrorCode::InvalidArgument, "hinted momenta do not complement the annihilating subspace");
    }
    out.chosen = *hint;
  } else {
    std::set<std::size_t> pivots(k.pivots.begin(), k.pivots.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (!pivots.count(i)) out.chosen.push_back(i);
    }
  }
  std::vector<FluxCombo> kept;
  for (std::size_t i : out.chosen) kept.push_back(system.momenta[i]);
  out.system = make_system(scene, system.name + ".c", std::move(kept), out.loops.frame);
  return out;
}

OrderProbe order_preservation_probe(const Scene& scene, const UnconstrainedSystem& finer,
                                    const UnconstrainedSystem& coarser,
                                    std::optional<std::vector<std::size_t>> finer_hint,
                                    std::optional<std::vector<std::size_t>> coarser_hint) {
  unconstrained_geq(scene, finer, coarser);
  OrderProbe out;
  out.finer = constrain_system(scene, finer, std::move(finer_hint));
  out.coarser = constrain_system(scene, coarser, std::move(coarser_hint));
  try {
    system_geq(scene, out.finer.system, out.coarser.system);
    out.comparable = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotComparable) throw;
    out.reason = e.detail();
  }
  return out;
}

RestrictionProbe restricted_flux_rank(const Scene& scene, const Graph& g, const std::vector<FluxCombo>& combos) {
  const LoopBasis lb = loop_basis(g, maximal_tree(g));
  SeparatingLoops sep = separating_loops(scene, combos);
  std::vector<Chain> chains;
  for (const Chain& c : lb.frame.chains) chains.push_back(normalize(sep.scene, c));
  chains.insert(chains.end(), sep.chains.begin(), sep.chains.end());
  RestrictionProbe out;
  out.frame = independent_basis(sep.scene.segments, chains).basis;
  out.scene = std::move(sep.scene);
  for (const FluxCombo& c : combos) out.rows.push_back(combo_row(out.scene, c, out.frame));
  out.rank = rank(out.rows, out.frame.size());
  return out;
}

}  // namespace hoopflux
