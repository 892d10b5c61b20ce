// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "hoopflux/cli.hpp"
#include "hoopflux/error.hpp"
#include "hoopflux/gauge.hpp"
#include "hoopflux/scene_io.hpp"
#include "support.hpp"

using namespace hoopflux;
using namespace hoopflux::testing;

namespace {

struct Verdict {
  bool passed = true;
  std::string detail;
};

// Collects the first few failure messages; a criterion passes iff none.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_.push_back(what);
  }
  long checks() const { return checks_; }
  Verdict verdict(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    std::string d = std::to_string(failures_) + " of " + std::to_string(checks_) + " checks failed";
    for (const auto& m : messages_) d += "; " + m;
    return {false, d};
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::vector<std::string> messages_;
};

Scene example_scene() { return load_scene(std::string(HOOPFLUX_DATA_DIR) + "/example.json"); }

Verdict epsilon_examples() {
  const Scene s = example_scene();
  Tally t;
  const HalfInteger boundary = epsilon_loop(s.faces.at("S"), s.loops.at("l"));
  const HalfInteger up = epsilon_loop(s.faces.at("T"), s.loops.at("circle"));
  const HalfInteger down = epsilon_loop(s.faces.at("Tr"), s.loops.at("circle"));
  t.expect(boundary.to_rational() == Rational(1, 2), "boundary loop gives " + boundary.str());
  t.expect(up == HalfInteger::from_integer(1), "circle gives " + up.str());
  t.expect(down == HalfInteger::from_integer(-1), "flipped face gives " + down.str());
  t.expect(flip_orientation(s.faces.at("T"), "Tr") == s.faces.at("Tr"), "Tr is not T flipped");
  return t.verdict("boundary 1/2, circle " + up.str() + ", flipped " + down.str());
}

// Inserts s s^-1 at a random vertex of the loop.
Loop with_backtrack(Rng& rng, const Scene& scene, const Loop& l) {
  std::vector<Step> steps = l.steps();
  const std::vector<VertexId> vs = l.path().vertices(scene.segments);
  const std::size_t at = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(steps.size())));
  const VertexId& v = vs[at];
  std::vector<Step> options;
  for (const auto& [id, seg] : scene.segments) {
    if (seg.source == v) options.push_back({id, Direction::Forward});
    if (seg.target == v) options.push_back({id, Direction::Reverse});
  }
  const Step s = options[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(options.size()) - 1))];
  const Step back{s.segment, s.direction == Direction::Forward ? Direction::Reverse : Direction::Forward};
  steps.insert(steps.begin() + static_cast<long>(at), {s, back});
  return Loop::make(scene.segments, steps);
}

Loop rotated(Rng& rng, const Scene& scene, const Loop& l) {
  std::vector<Step> steps = l.steps();
  if (steps.empty()) return l;
  std::rotate(steps.begin(), steps.begin() + uniform(rng, 0, static_cast<long>(steps.size()) - 1), steps.end());
  return Loop::make(scene.segments, steps);
}

Verdict representative_independence() {
  Rng rng(1001);
  Tally t;
  long rewrites = 0;
  while (rewrites < 1200) {
    Scene s = random_scene(rng, 5, 4);
    Face f = random_face(rng, s, "F", 0.5);
    Loop l = random_loop(rng, s, 5);
    if (l.steps().empty()) continue;
    const HalfInteger expected = epsilon_hoop(f, chain_of(l));
    t.expect(epsilon_loop(f, l) == expected, "loop and hoop disagree");
    for (int k = 0; k < 4; ++k) {
      const long kind = uniform(rng, 0, 2);
      if (kind == 0) {
        l = with_backtrack(rng, s, l);
      } else if (kind == 1) {
        l = rotated(rng, s, l);
      } else {
        auto it = s.segments.begin();
        std::advance(it, uniform(rng, 0, static_cast<long>(s.segments.size()) - 1));
        const RefinedScene r = refine_segment(s, it->first);
        l = refine(l, r.record);
        f = refine(f, r.record);
        s = r.scene;
      }
      ++rewrites;
      t.expect(epsilon_loop(f, l) == expected, "rewrite kind " + std::to_string(kind) + " changed epsilon");
      t.expect(epsilon_hoop(f, chain_of(l)) == expected, "hoop value moved after rewrite");
    }
  }
  return t.verdict(std::to_string(rewrites) + " rewrites, " + std::to_string(t.checks()) + " comparisons");
}

Verdict decomposition_oracle() {
  Rng rng(1002);
  Tally t;
  long instances = 0;
  long integral = 0;
  while (instances < 600) {
    const Scene s = random_scene(rng, 6, 6);
    const HoopSet basis = random_frame(rng, s, 4, 6);
    if (basis.size() == 0) continue;
    ++instances;
    std::vector<Rational> a;
    const bool make_integral = uniform(rng, 0, 1) == 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      a.push_back(make_integral ? Rational(uniform(rng, -3, 3)) : random_rational(rng, 3, 3));
    }
    // target: the combination rounded down coefficientwise to an integer chain
    std::map<SegmentId, Rational> exact;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (const auto& [seg, n] : basis.chains[i].coefficients()) exact[seg] += a[i] * n;
    }
    bool all_integral = std::all_of(a.begin(), a.end(), [](const Rational& q) { return q.get_den() == 1; });
    Chain target;
    for (const auto& [seg, q] : exact) {
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
      target.add(seg, fl.get_si());
    }
    const auto oracle = oracle_decompose(target, basis.chains);
    std::optional<std::vector<long>> got;
    try {
      got = decompose_hoop(target, basis);
    } catch (const Error& e) {
      t.expect(e.code() == ErrorCode::NotInSpan, std::string("unexpected error ") + e.what());
    }
    t.expect(got.has_value() == oracle.has_value(), "library and oracle disagree on membership");
    if (all_integral) {
      ++integral;
      t.expect(got.has_value(), "integral combination rejected");
      if (got) {
        for (std::size_t i = 0; i < a.size(); ++i) t.expect(Rational((*got)[i]) == a[i], "wrong coefficient");
      }
    }
    if (got && oracle) {
      for (std::size_t i = 0; i < got->size(); ++i) t.expect(Rational((*got)[i]) == (*oracle)[i], "coefficients differ");
    }
    // any rational solution the oracle finds for an integer chain is integral
    std::vector<std::vector<Rational>> vs = chain_vectors([&] {
      std::vector<Chain> all = basis.chains;
      all.push_back(target);
      return all;
    }());
    const std::vector<Rational> tv = vs.back();
    vs.pop_back();
    if (const auto x = oracle_combination(vs, tv)) {
      t.expect(std::all_of(x->begin(), x->end(), [](const Rational& q) { return q.get_den() == 1; }),
               "rational combination with non-integer coefficients");
    }
  }
  return t.verdict(std::to_string(instances) + " instances (" + std::to_string(integral) + " integral)");
}

Verdict order_oracle() {
  Rng rng(1003);
  Tally t;
  long pairs = 0;
  long holds = 0;
  while (pairs < 600) {
    const Scene s = random_scene(rng, 6, 6);
    const HoopSet finer = random_frame(rng, s, 4, 6);
    if (finer.size() == 0) continue;
    HoopSet coarser;
    switch (uniform(rng, 0, 2)) {
      case 0:
        coarser = random_frame(rng, s, 3, 6);
        break;
      case 1: {
        std::vector<Chain> combos;
        for (int k = 0; k < 2; ++k) {
          Chain c;
          for (const Chain& f : finer.chains) c = c + f.scaled(uniform(rng, -2, 2));
          combos.push_back(c);
        }
        coarser = independent_basis(s.segments, combos).basis;
        break;
      }
      default: {
        const std::size_t keep = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(finer.size())));
        coarser = HoopSet::certified({finer.labels.begin(), finer.labels.begin() + static_cast<long>(keep)},
                                     {finer.chains.begin(), finer.chains.begin() + static_cast<long>(keep)});
      }
    }
    ++pairs;
    bool expected = true;
    for (const Chain& c : coarser.chains) expected = expected && oracle_decompose(c, finer.chains).has_value();
    const bool got = hoopset_geq(finer, coarser);
    holds += got;
    t.expect(got == expected, "hoopset_geq disagrees with the oracle");
  }
  return t.verdict(std::to_string(pairs) + " pairs, " + std::to_string(holds) + " ordered");
}

Verdict dual_faces() {
  Rng rng(1005);
  Tally t;
  std::size_t largest = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      HoopSet frame;
      Scene s;
      do {
        s = random_scene(rng, 9, n + 3);
        frame = random_frame(rng, s, n + 6, 8);
      } while (frame.size() < n);
      frame.labels.resize(n);
      frame.chains.resize(n);
      frame.certificate->exclusive.resize(n);
      const DualFaces d = synthesize_dual_faces(s, frame);
      std::vector<FluxCombo> momenta;
      for (const FaceId& f : d.faces) momenta.push_back(FluxCombo::single(f));
      const GMatrix g = g_matrix(d.scene, momenta, d.frame);
      t.expect(g.entries == identity_matrix(n), "G is not the identity for N = " + std::to_string(n));
      largest = std::max(largest, n);
    }
  }
  return t.verdict("identity for N = 1.." + std::to_string(largest));
}

Verdict directedness() {
  Rng rng(1006);
  Tally t;
  long pairs = 0;
  while (pairs < 200) {
    GeneratedSample g = generated_sample(rng, 2);
    if (g.systems.size() < 2) continue;
    ++pairs;
    const SceneSystem j = common_refinement(g.scene, g.systems[0], g.systems[1]);
    t.expect(j.system.nondegenerate, "join is degenerate");
    for (const FiniteSystem& sys : g.systems) {
      const FiniteSystem n = normalize(j.scene, sys);
      t.expect(system_geq_holds(j.scene, j.system, n), "join is not above '" + sys.name + "'");
      t.expect(oracle_geq(j.scene, j.system, n), "oracle: join is not above '" + sys.name + "'");
    }
  }
  return t.verdict(std::to_string(pairs) + " pairs joined");
}

Verdict assumption_suite() {
  Rng rng(1007);
  Tally t;
  const std::vector<std::string> faults{"1a", "1b", "2", "3a", "3b", "4", "5", "6a", "6b"};
  int samples = 0;
  while (samples < 5) {
    GeneratedSample g = generated_sample(rng, 3);
    if (g.systems.size() < 2) continue;
    ++samples;
    const AssumptionReport clean = verify_assumptions(g.scene, g.systems, g.probes);
    for (const auto& a : clean.results) t.expect(a.passed, "clean sample fails " + a.id);
    for (const std::string& id : faults) {
      const AssumptionReport r = id == "4" ? verify_assumptions(g.scene, broken_g_sample(g.systems), g.probes)
                                           : verify_assumptions(g.scene, g.systems, g.probes, faulty_ops(id));
      for (const auto& a : r.results) {
        t.expect(a.passed == (a.id != id), "fault " + id + ": assumption " + a.id + (a.passed ? " passed" : " failed"));
      }
    }
  }
  return t.verdict(std::to_string(samples) + " samples clean, 9 faults each caught alone");
}

Verdict gauge_fixing() {
  Rng rng(1008);
  Tally t;
  int graphs = 0;
  int trees = 0;
  long evaluations = 0;
  while (graphs < 200) {
    Scene s;
    const bool tree_only = graphs % 5 == 4;
    const std::size_t vertices = static_cast<std::size_t>(uniform(rng, 2, 5));
    const std::size_t edges = tree_only ? vertices - 1 : vertices - 1 + static_cast<std::size_t>(uniform(rng, 1, 3));
    const Graph g = add_random_graph(rng, s, "g", vertices, edges, true);
    ++graphs;
    const MaximalTree tree = maximal_tree(g);
    const FieldSample a = random_field(rng, s);
    const Vector fixed = edge_coordinates(g, gauge_transform(s, a, theta_assignment(s, g, tree, a)));
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (tree.contains(g.edges[k].name)) t.expect(fixed[k] == 0, "tree edge survives the theta gauge");
    }
    const Polynomial p = random_gauge_invariant(rng, g);
    const auto reduced = gauge_reduce(g, p);
    if (tree_only) {
      ++trees;
      t.expect(std::holds_alternative<Rational>(reduced), "tree graph did not reduce to a constant");
      t.expect(!is_gauge_invariant(g, Polynomial::variable(0)), "tree edge variable counted as invariant");
      continue;
    }
    if (!std::holds_alternative<CylFunction>(reduced)) {
      t.expect(false, "graph with loops reduced to a constant");
      continue;
    }
    const CylFunction& psi = std::get<CylFunction>(reduced);
    for (int k = 0; k < 100; ++k) {
      const FieldSample b = random_field(rng, s);
      ++evaluations;
      t.expect(evaluate(p, edge_coordinates(g, b)) == evaluate(psi.poly, coordinate_map(psi.frame, b)),
               "round trip fails");
    }
  }
  return t.verdict(std::to_string(graphs) + " graphs (" + std::to_string(trees) + " trees), " +
                   std::to_string(evaluations) + " field samples");
}

Verdict flux_gauge_covariance() {
  Rng rng(1009);
  Tally t;
  int triples = 0;
  while (triples < 200) {
    Scene s = random_scene(rng, 3, 1);
    const Graph g = add_random_graph(rng, s, "g", 4, static_cast<std::size_t>(uniform(rng, 3, 6)), true);
    s.faces["F"] = random_face(rng, s, "F", 0.5);
    const Polynomial p = random_polynomial(rng, g.edges.size(), 3, 4);
    const GaugeFunction f = random_gauge(rng, s);
    ++triples;
    t.expect(flux_gauge_invariance_check(s, "F", g, p, f), "flux does not commute with the gauge shift");
  }
  return t.verdict(std::to_string(triples) + " triples");
}

Verdict constraint_structure() {
  Rng rng(1010);
  Tally t;
  int systems = 0;
  while (systems < 100) {
    Scene s;
    const std::size_t vertices = static_cast<std::size_t>(uniform(rng, 2, 5));
    const Graph g = add_random_graph(rng, s, "g", vertices, vertices - 1 + static_cast<std::size_t>(uniform(rng, 1, 3)), true);
    const std::vector<FaceId> duals = add_edge_dual_faces(s, g);
    // an invertible recombination of the duals: unit upper triangular
    const std::size_t n = duals.size();
    std::vector<FluxCombo> momenta;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<FluxTerm> terms{{1, duals[i]}};
      for (std::size_t j = i + 1; j < n; ++j) terms.push_back({Rational(uniform(rng, -2, 2)), duals[j]});
      momenta.push_back(FluxCombo(terms));
    }
    const UnconstrainedSystem u{"u", momenta, "g"};
    const ConstrainedSystem c = constrain_system(s, u);
    const std::size_t m = c.loops.loops.size();
    ++systems;
    t.expect(c.kernel.size() == n - m, "dim F0 = " + std::to_string(c.kernel.size()) + ", expected " +
                                            std::to_string(n - m));
    t.expect(n - oracle_rank(c.restricted) == c.kernel.size(), "oracle disagrees on dim F0");
    t.expect(c.system.nondegenerate, "constrained system is degenerate");
  }
  const Scene ex = example_scene();
  const UnconstrainedSystem big{"big", {FluxCombo::single("S1"), FluxCombo::single("S2"), FluxCombo::single("S3")},
                                "theta"};
  const UnconstrainedSystem small{"small", {FluxCombo::single("S1"), FluxCombo::single("S2")}, "pair"};
  const OrderProbe bad =
      order_preservation_probe(ex, big, small, std::vector<std::size_t>{1, 2}, std::vector<std::size_t>{0});
  const OrderProbe good =
      order_preservation_probe(ex, big, small, std::vector<std::size_t>{1, 2}, std::vector<std::size_t>{1});
  t.expect(!bad.comparable, "hints (S1 | S2,S3) should be incomparable");
  t.expect(good.comparable, "hint S2 should be comparable");
  return t.verdict(std::to_string(systems) + " systems with dim F0 = N - M; triangle verdicts reproduced");
}

Verdict restricted_rank() {
  const Scene s = example_scene();
  const RestrictionProbe p =
      restricted_flux_rank(s, s.graphs.at("twoedge"), {FluxCombo::single("R1"), FluxCombo::single("R2")});
  // on the ring loop alone both operators act the same way up to sign
  const LoopBasis ring = loop_basis(s.graphs.at("twoedge"), maximal_tree(s.graphs.at("twoedge")));
  Matrix bare;
  for (const char* f : {"R1", "R2"}) bare.push_back(combo_row(s, FluxCombo::single(f), ring.frame));
  Tally t;
  t.expect(p.rank == 2, "rank " + std::to_string(p.rank));
  return t.verdict("rank " + std::to_string(p.rank) + " on a frame of " + std::to_string(p.frame.size()) +
                   " gauge-invariant hoops (rank " + std::to_string(rank(bare, ring.frame.size())) +
                   " on the ring loop alone)");
}

Verdict golden_files() {
  const std::filesystem::path golden = HOOPFLUX_GOLDEN_DIR;
  const std::string scene = std::string(HOOPFLUX_DATA_DIR) + "/example.json";
  std::ifstream in(golden / "cases.json");
  const Json cases = Json::parse(in);
  const auto work = std::filesystem::temp_directory_path() / "hoopflux_acceptance";
  std::filesystem::create_directories(work);
  const auto here = std::filesystem::current_path();
  std::filesystem::current_path(work);
  Tally t;
  std::set<std::string> verbs;
  for (const Json& c : cases) {
    std::vector<std::string> args;
    for (const Json& a : c["args"]) args.push_back(a.get<std::string>() == "@SCENE@" ? scene : a.get<std::string>());
    args.push_back("--format");
    args.push_back("json");
    verbs.insert(args.front());
    std::filesystem::remove("out.json");
    std::ostringstream out;
    std::ostringstream err;
    cli::run(args, out, err);
    std::ifstream expected_file(golden / (c["name"].get<std::string>() + ".json"), std::ios::binary);
    std::ostringstream expected;
    expected << expected_file.rdbuf();
    t.expect(expected_file.good() && out.str() == expected.str(), c["name"].get<std::string>() + " differs");
  }
  std::filesystem::current_path(here);
  std::filesystem::remove_all(work);
  return t.verdict(std::to_string(cases.size()) + " cases over " + std::to_string(verbs.size()) + " verbs");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"epsilon examples", epsilon_examples},
      {"epsilon is independent of the representative", representative_independence},
      {"hoop decomposition agrees with the rational oracle", decomposition_oracle},
      {"hoop order agrees with the linear-combination oracle", order_oracle},
      {"dual faces pair to the identity", dual_faces},
      {"common refinement is an upper bound", directedness},
      {"assumption suite and injected faults", assumption_suite},
      {"maximal-tree gauge fixing and reduction", gauge_fixing},
      {"flux commutes with gauge shifts", flux_gauge_covariance},
      {"constraint subspace dimension and triangle order", constraint_structure},
      {"restricted flux operators stay independent", restricted_rank},
      {"CLI golden files", golden_files},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.passed;
    std::cout << (v.passed ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
