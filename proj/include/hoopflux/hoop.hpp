#pragma once

// Abelian hoop group realized as integer chains over segments.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hoopflux/substrate.hpp"

namespace hoopflux {

/// Finite segment -> nonzero integer mapping. Zero coefficients are dropped.
class Chain {
 public:
  Chain() = default;
  explicit Chain(std::map<SegmentId, long> coefficients);

  long at(const SegmentId& segment) const;
  void add(const SegmentId& segment, long amount);

  const std::map<SegmentId, long>& coefficients() const noexcept { return coefficients_; }
  bool is_zero() const noexcept { return coefficients_.empty(); }

  Chain operator+(const Chain& other) const;
  Chain operator-(const Chain& other) const;
  Chain operator-() const;
  Chain scaled(long factor) const;

  friend bool operator==(const Chain&, const Chain&) = default;

 private:
  std::map<SegmentId, long> coefficients_;
};

/// Forward traversals minus reverse traversals, per segment.
Chain chain_of(const Path& path);
Chain chain_of(const Loop& loop);

bool hoops_equal(const Loop& a, const Loop& b);
Chain hoop_compose(const Chain& a, const Chain& b);
Chain hoop_inverse(const Chain& c);
bool is_trivial(const Loop& loop);

/// A loop whose chain is `c` (Eulerian circuit starting at the source of the
/// lowest arc), or nullopt when `c` is zero, not closed or has a
/// disconnected support.
std::optional<Loop> representative(const SegmentRegistry& registry, const Chain& c);

/// Signed in-minus-out count at each vertex; empty for loop chains.
std::map<VertexId, long> boundary(const SegmentRegistry& registry, const Chain& c);

/// exclusive[I] has coefficient +-1 in chain I and 0 in every other chain.
struct IndependenceCertificate {
  std::vector<SegmentId> exclusive;

  friend bool operator==(const IndependenceCertificate&, const IndependenceCertificate&) = default;
};

/// Picks the lowest-id exclusive segment for every chain. Throws
/// NotIndependent naming the first chain without a candidate.
IndependenceCertificate check_independent(const std::vector<Chain>& chains);

/// Ordered list of labelled hoops. `certificate` is empty only for frames
/// built with `uncertified`.
struct HoopSet {
  std::vector<std::string> labels;
  std::vector<Chain> chains;
  std::optional<IndependenceCertificate> certificate;

  /// Throws NotIndependent, or InvalidArgument on label/chain count mismatch.
  static HoopSet certified(std::vector<std::string> labels, std::vector<Chain> chains);
  static HoopSet uncertified(std::vector<std::string> labels, std::vector<Chain> chains);

  std::size_t size() const noexcept { return chains.size(); }

  friend bool operator==(const HoopSet&, const HoopSet&) = default;
};

/// Integer coefficients read off the exclusive segments, checked against
/// the residual. Throws NotInSpan or UncertifiedFrame.
std::vector<long> decompose_hoop(const Chain& target, const HoopSet& basis);

enum class ForestOrder { Ascending, Descending };

struct BasisResult {
  HoopSet basis;
  std::vector<Loop> loops;  // one fundamental loop per basis hoop
  std::vector<std::vector<long>> decompositions;  // one row per input
};

/// Spanning forest of the support graph; one fundamental loop per non-tree
/// segment, labelled "fund(<segment>)". Ascending order visits segments and
/// adjacency lists by increasing id; Descending reverses both.
BasisResult independent_basis(const SegmentRegistry& registry, const std::vector<Chain>& chains,
                              ForestOrder order = ForestOrder::Ascending);
BasisResult independent_basis(const SegmentRegistry& registry, const std::vector<Loop>& loops,
                              ForestOrder order = ForestOrder::Ascending);

/// True iff every hoop of `coarser` decomposes over `finer`.
bool hoopset_geq(const HoopSet& finer, const HoopSet& coarser);

/// Coefficient of a retired segment is copied onto all its descendants.
Chain refine(const Chain& c, const RefinementRecord& record);
Chain normalize(const Scene& scene, const Chain& c);
/// Normalizes every chain and re-certifies when the input was certified.
HoopSet normalize(const Scene& scene, const HoopSet& frame);

}  // namespace hoopflux
