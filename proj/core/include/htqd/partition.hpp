#pragma once

#include "htqd/covering.hpp"
#include "htqd/refine.hpp"
#include "htqd/surface.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace htqd {

/// An equivalence on the flags of one surface, compatible with next/twin and
/// with the flat metric up to the corner-level sign gauge. Blocks are the
/// fibers of quotient coverings once self-identified cells are split.
struct FlagPartition {
  std::vector<int> block_of;             // flag -> block, blocks ordered by least member
  std::vector<std::vector<int>> blocks;  // sorted members
  std::vector<std::pair<int, int>> provenance;

  int block_count() const { return static_cast<int>(blocks.size()); }
  bool same_blocks(const FlagPartition& o) const { return block_of == o.block_of; }
  bool refines(const FlagPartition& coarser) const;
};

/// Incremental signed-flag closure engine. Merges propagate through next and
/// twin with exact sign bookkeeping; contradictions poison the builder.
class PartitionBuilder {
 public:
  explicit PartitionBuilder(const Surface& s);

  /// Identifies x with y using the sign forced by their vectors; false (and
  /// poisoned state) when no sign matches or the closure derives a vector or
  /// puncture/non-puncture contradiction.
  bool merge(int x, int y);
  /// Identification with a proposed sign: vector(y) must equal sign*vector(x).
  bool merge_with_sign(int x, int y, int sign);

  bool failed() const { return failed_; }
  bool same_block(int x, int y);
  /// Stabilized-status check: each non-puncture vertex class must induce one
  /// orbifold order (winding times source order constant over the class).
  bool status_consistent();

  FlagPartition freeze();

 private:
  int find(int a);
  int vfind(int a);
  bool merge_signed(int a, int b);
  int signed_next(int a) const;
  int signed_twin(int a) const;

  const Surface* s_;
  int n_ = 0;
  std::vector<int> parent_, size_;
  std::vector<Vec2> root_vec_;
  std::vector<int> vparent_;
  std::vector<char> vpunct_, vother_;
  bool failed_ = false;
  std::vector<std::pair<int, int>> provenance_;
};

/// Finest equivariant metric-compatible partition identifying x with y under
/// the proposed sign, or nullopt on contradiction.
std::optional<FlagPartition> propagate_single_pair(const Surface& s, int x, int y, int sign);

/// Join of the fiber partitions of two coverings with a common source (the
/// stabilized alternating saturation).
FlagPartition pair_closure(const CoveringMap& p1, const CoveringMap& p2);

struct EdgeLocus {
  int flag;  // canonical flag of a self-identified edge; split at 1/2
};

struct FaceLocus {
  int anchor_flag;  // least flag of a self-identified face
  Vec2 point;       // half-turn center in that face's chart
};

struct RefinementNeeded {
  std::vector<EdgeLocus> edges;
  std::vector<FaceLocus> faces;

  Script to_script() const;
};

struct Quotient {
  Surface surface;
  CoveringMap map;  // input surface -> quotient
};

using QuotientOutcome = std::variant<Quotient, RefinementNeeded>;

QuotientOutcome quotient_by_partition(const Surface& s, const FlagPartition& part);

struct PairQuotient {
  Surface quotient;
  CoveringMap factor1;       // refined p1.target -> quotient
  CoveringMap factor2;       // refined p2.target -> quotient
  CoveringMap from_witness;  // refined common source -> quotient
  CoveringMap refined_p1;    // common source and targets after auto-refinement
  CoveringMap refined_p2;
  int refinement_rounds = 0;
};

/// Common quotient of p1.target and p2.target through their common covering
/// source, with the self-identification refinement loop applied.
PairQuotient common_quotient_pair(const CoveringMap& p1, const CoveringMap& p2);

struct MinimalResult {
  Surface minimal;
  CoveringMap covering;           // refined input -> minimal element
  FlagPartition input_partition;  // stabilized partition on the surface as given
  Surface refined_input;
  int refinement_rounds = 0;
};

using PairOrderProvider =
    std::function<std::vector<std::pair<int, int>>(const Surface&)>;

/// Coarsest valid quotient of q: the minimal element of its commensurability
/// class. Requires 3g - 3 + p > 0.
MinimalResult maximal_quotient(const Surface& q);
MinimalResult maximal_quotient_ordered(const Surface& q, const PairOrderProvider& order);

/// The greedy join over candidate identifications; exposed for confluence
/// and oracle tests.
FlagPartition greedy_partition(const Surface& s, const std::vector<std::pair<int, int>>& pairs);

std::vector<std::pair<int, int>> default_pair_order(const Surface& s);

}  // namespace htqd
