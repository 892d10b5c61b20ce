#include "hoopflux/hoop.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "hoopflux/error.hpp"

namespace hoopflux {

Chain::Chain(std::map<SegmentId, long> coefficients) {
  for (auto& [seg, c] : coefficients) {
    if (c != 0) coefficients_.emplace(seg, c);
  }
}

long Chain::at(const SegmentId& segment) const {
  auto it = coefficients_.find(segment);
  return it == coefficients_.end() ? 0 : it->second;
}

void Chain::add(const SegmentId& segment, long amount) {
  if (amount == 0) return;
  auto [it, fresh] = coefficients_.emplace(segment, amount);
  if (!fresh) {
    it->second += amount;
    if (it->second == 0) coefficients_.erase(it);
  }
}

Chain Chain::operator+(const Chain& other) const {
  Chain out = *this;
  for (const auto& [seg, c] : other.coefficients_) out.add(seg, c);
  return out;
}

Chain Chain::operator-(const Chain& other) const { return *this + (-other); }

Chain Chain::operator-() const { return scaled(-1); }

Chain Chain::scaled(long factor) const {
  Chain out;
  if (factor == 0) return out;
  for (const auto& [seg, c] : coefficients_) out.coefficients_.emplace(seg, c * factor);
  return out;
}

Chain chain_of(const Path& path) {
  Chain out;
  for (const Step& s : path.steps()) out.add(s.segment, s.direction == Direction::Forward ? 1 : -1);
  return out;
}

Chain chain_of(const Loop& loop) { return chain_of(loop.path()); }

bool hoops_equal(const Loop& a, const Loop& b) { return chain_of(a) == chain_of(b); }

Chain hoop_compose(const Chain& a, const Chain& b) { return a + b; }

Chain hoop_inverse(const Chain& c) { return -c; }

bool is_trivial(const Loop& loop) { return chain_of(loop).is_zero(); }

std::map<VertexId, long> boundary(const SegmentRegistry& registry, const Chain& c) {
  std::map<VertexId, long> out;
  for (const auto& [id, coeff] : c.coefficients()) {
    auto it = registry.find(id);
    if (it == registry.end()) throw Error(ErrorCode::UnknownSegment, "segment '" + id.str() + "' does not exist");
    out[it->second.target] += coeff;
    out[it->second.source] -= coeff;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::optional<Loop> representative(const SegmentRegistry& registry, const Chain& c) {
  if (c.is_zero() || !boundary(registry, c).empty()) return std::nullopt;
  struct Arc {
    Step step;
    VertexId head;
  };
  std::map<VertexId, std::vector<Arc>> out;
  std::size_t arcs = 0;
  VertexId start;
  for (const auto& [id, coeff] : c.coefficients()) {
    const Segment& seg = registry.at(id);
    const Direction d = coeff > 0 ? Direction::Forward : Direction::Reverse;
    const VertexId& tail = step_source(seg, d);
    if (arcs == 0) start = tail;
    for (long k = 0; k < (coeff > 0 ? coeff : -coeff); ++k) {
      out[tail].push_back({{id, d}, step_target(seg, d)});
      ++arcs;
    }
  }
  // Hierholzer; arcs are consumed from the front so lower ids go first.
  std::map<VertexId, std::size_t> next;
  std::vector<std::pair<VertexId, std::optional<Step>>> stack{{start, std::nullopt}};
  std::vector<Step> circuit;
  while (!stack.empty()) {
    const VertexId v = stack.back().first;
    std::size_t& k = next[v];
    auto& arcs_here = out[v];
    if (k < arcs_here.size()) {
      const Arc& a = arcs_here[k++];
      stack.push_back({a.head, a.step});
    } else {
      if (stack.back().second) circuit.push_back(*stack.back().second);
      stack.pop_back();
    }
  }
  if (circuit.size() != arcs) return std::nullopt;
  std::reverse(circuit.begin(), circuit.end());
  return Loop::make(registry, std::move(circuit));
}

IndependenceCertificate check_independent(const std::vector<Chain>& chains) {
  std::map<SegmentId, std::size_t> users;
  for (const Chain& c : chains) {
    for (const auto& [seg, coeff] : c.coefficients()) ++users[seg];
  }
  IndependenceCertificate cert;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (chains[i].is_zero()) {
      throw Error(ErrorCode::NotIndependent, "hoop " + std::to_string(i) + " is trivial");
    }
    std::optional<SegmentId> pick;
    for (const auto& [seg, coeff] : chains[i].coefficients()) {
      if ((coeff == 1 || coeff == -1) && users[seg] == 1) {
        pick = seg;
        break;
      }
    }
    if (!pick) {
      throw Error(ErrorCode::NotIndependent,
                  "hoop " + std::to_string(i) + " has no segment traversed once and untouched by the others");
    }
    cert.exclusive.push_back(*pick);
  }
  return cert;
}

HoopSet HoopSet::certified(std::vector<std::string> labels, std::vector<Chain> chains) {
  if (labels.size() != chains.size()) throw Error(ErrorCode::InvalidArgument, "label count differs from hoop count");
  IndependenceCertificate cert = check_independent(chains);
  return HoopSet{std::move(labels), std::move(chains), std::move(cert)};
}

HoopSet HoopSet::uncertified(std::vector<std::string> labels, std::vector<Chain> chains) {
  if (labels.size() != chains.size()) throw Error(ErrorCode::InvalidArgument, "label count differs from hoop count");
  return HoopSet{std::move(labels), std::move(chains), std::nullopt};
}

std::vector<long> decompose_hoop(const Chain& target, const HoopSet& basis) {
  if (!basis.certificate) throw Error(ErrorCode::UncertifiedFrame, "decomposition needs a certified frame");
  std::vector<long> n(basis.size());
  Chain residual = target;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const SegmentId& s = basis.certificate->exclusive[i];
    n[i] = target.at(s) * basis.chains[i].at(s);  // own coefficient is +-1
    residual = residual - basis.chains[i].scaled(n[i]);
  }
  if (!residual.is_zero()) {
    const auto& [seg, c] = *residual.coefficients().begin();
    throw Error(ErrorCode::NotInSpan,
                "hoop is not a composition of the frame (residual " + std::to_string(c) + " on '" + seg.str() + "')");
  }
  return n;
}

namespace {

struct Incidence {
  SegmentId segment;
  VertexId other;
};

}  // namespace

BasisResult independent_basis(const SegmentRegistry& registry, const std::vector<Chain>& chains, ForestOrder order) {
  std::vector<SegmentId> support;
  {
    std::set<SegmentId> all;
    for (const Chain& c : chains) {
      if (!boundary(registry, c).empty()) {
        throw Error(ErrorCode::InvalidArgument, "chain is not closed; only loop chains have a hoop basis");
      }
      for (const auto& [seg, coeff] : c.coefficients()) all.insert(seg);
    }
    support.assign(all.begin(), all.end());
  }
  if (order == ForestOrder::Descending) std::reverse(support.begin(), support.end());

  std::map<VertexId, std::vector<Incidence>> adjacency;
  for (const SegmentId& id : support) {
    const Segment& seg = registry.at(id);
    adjacency[seg.source].push_back({id, seg.target});
    adjacency[seg.target].push_back({id, seg.source});
  }

  // parent[v] = segment leading towards the component root
  std::map<VertexId, SegmentId> parent;
  std::map<VertexId, std::size_t> depth;
  std::set<SegmentId> tree;
  for (const SegmentId& id : support) {
    const VertexId& start = registry.at(id).source;
    if (depth.count(start)) continue;
    depth[start] = 0;
    std::deque<VertexId> queue{start};
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      for (const Incidence& inc : adjacency[v]) {
        if (depth.count(inc.other)) continue;
        depth[inc.other] = depth[v] + 1;
        parent[inc.other] = inc.segment;
        tree.insert(inc.segment);
        queue.push_back(inc.other);
      }
    }
  }

  auto climb = [&](const VertexId& v) -> std::pair<Step, VertexId> {
    const SegmentId& s = parent.at(v);
    const Segment& seg = registry.at(s);
    if (seg.source == v) return {{s, Direction::Forward}, seg.target};
    return {{s, Direction::Reverse}, seg.source};
  };

  BasisResult result;
  std::vector<std::string> labels;
  std::vector<Chain> basis_chains;
  for (const SegmentId& id : support) {
    if (tree.count(id)) continue;
    const Segment& seg = registry.at(id);
    // tree path from seg.target back to seg.source
    std::vector<Step> up;    // from target towards the common ancestor
    std::vector<Step> down;  // from source towards the common ancestor, reversed later
    VertexId a = seg.target;
    VertexId b = seg.source;
    while (a != b) {
      if (depth.at(a) >= depth.at(b)) {
        auto [step, next] = climb(a);
        up.push_back(step);
        a = next;
      } else {
        auto [step, next] = climb(b);
        down.push_back(step);
        b = next;
      }
    }
    std::vector<Step> steps{{id, Direction::Forward}};
    steps.insert(steps.end(), up.begin(), up.end());
    for (auto it = down.rbegin(); it != down.rend(); ++it) {
      steps.push_back({it->segment, it->direction == Direction::Forward ? Direction::Reverse : Direction::Forward});
    }
    Loop l = Loop::make(registry, std::move(steps));
    basis_chains.push_back(chain_of(l));
    labels.push_back("fund(" + id.str() + ")");
    result.loops.push_back(std::move(l));
  }
  if (order == ForestOrder::Descending) {
    // keep the frame listed by increasing non-tree segment id
    std::reverse(labels.begin(), labels.end());
    std::reverse(result.loops.begin(), result.loops.end());
    std::reverse(basis_chains.begin(), basis_chains.end());
  }
  result.basis = HoopSet::certified(std::move(labels), std::move(basis_chains));
  for (const Chain& c : chains) result.decompositions.push_back(decompose_hoop(c, result.basis));
  return result;
}

BasisResult independent_basis(const SegmentRegistry& registry, const std::vector<Loop>& loops, ForestOrder order) {
  std::vector<Chain> chains;
  chains.reserve(loops.size());
  for (const Loop& l : loops) chains.push_back(chain_of(l));
  return independent_basis(registry, chains, order);
}

bool hoopset_geq(const HoopSet& finer, const HoopSet& coarser) {
  try {
    for (const Chain& c : coarser.chains) decompose_hoop(c, finer);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotInSpan) return false;
    throw;
  }
  return true;
}

Chain refine(const Chain& c, const RefinementRecord& record) {
  const long v = c.at(record.original);
  if (v == 0) return c;
  std::map<SegmentId, long> m = c.coefficients();
  m.erase(record.original);
  m[record.first] += v;
  m[record.second] += v;
  return Chain(std::move(m));
}

Chain normalize(const Scene& scene, const Chain& c) {
  if (scene.refinements.empty()) return c;
  Chain out;
  for (const auto& [seg, coeff] : c.coefficients()) {
    for (const SegmentId& part : current_segments(scene, seg)) out.add(part, coeff);
  }
  return out;
}

HoopSet normalize(const Scene& scene, const HoopSet& frame) {
  std::vector<Chain> chains;
  chains.reserve(frame.size());
  for (const Chain& c : frame.chains) chains.push_back(normalize(scene, c));
  if (frame.certificate) return HoopSet::certified(frame.labels, std::move(chains));
  return HoopSet::uncertified(frame.labels, std::move(chains));
}

}  // namespace hoopflux
