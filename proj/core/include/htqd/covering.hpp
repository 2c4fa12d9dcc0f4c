#pragma once

#include "htqd/refine.hpp"
#include "htqd/surface.hpp"

#include <map>
#include <optional>
#include <vector>

namespace htqd {

/// A simplicial covering of half-translation surfaces: a flag map commuting
/// with next and twin, matching vectors up to one sign per source face.
struct CoveringMap {
  Surface source;
  Surface target;
  std::vector<int> phi;  // dense source flag -> dense target flag
};

struct LocalDegree {
  int source_vertex;
  int target_vertex;
  int winding;  // m with a_source = m * a_target
};

struct CoveringReport {
  int degree = 0;
  std::vector<LocalDegree> local;
};

struct CoveringOutcome {
  bool ok = false;
  CoveringReport report;
  std::vector<Issue> issues;
};

CoveringOutcome validate_covering(const CoveringMap& map);

/// Throwing wrapper for contexts where an invalid covering is a bug.
CoveringReport require_covering(const CoveringMap& map);

/// Sheet permutation data over each edge orbit of a base complex. Keys are
/// canonical flags (min of the twin pair, dense index); perm[i] = j means
/// crossing the keyed flag from sheet i lands on sheet j.
struct MonodromySpec {
  int degree = 0;
  std::map<int, std::vector<int>> perms;
};

struct CoverComponent {
  Surface surface;
  CoveringMap map;
};

/// Builds the degree-d cover described by the spec and splits it into
/// connected components. Throws LocalDegreeViolation when the data ramifies
/// at a filled vertex or incompatibly at an orbifold vertex.
std::vector<CoverComponent> construct_cover(const Surface& base, const MonodromySpec& spec);

struct SymmetryResult {
  bool symmetric = false;
  std::optional<Surface> pushforward;
  std::vector<Issue> issues;
};

/// Decides whether the differential qt (same combinatorics as map.source,
/// vectors free) is a lift of a differential on map.target; returns the
/// push-forward witness when it is.
SymmetryResult is_symmetric(const Surface& qt, const CoveringMap& map);

struct FiberComponent {
  Surface surface;
  CoveringMap proj1;
  CoveringMap proj2;
};

std::vector<FiberComponent> fiber_product(const CoveringMap& p1, const CoveringMap& p2);

/// Extends phi(anchor_src) = anchor_dst to a full flag map equivariant for
/// next and twin; nullopt on conflict. Total because sources are connected.
std::optional<std::vector<int>> propagate_flag_map(const Surface& src, const Surface& dst,
                                                   int anchor_src, int anchor_dst);

/// All coverings q1 -> q2, anchored search over target flags; empty when the
/// area ratio is not a positive integer or no flag assignment validates.
std::vector<CoveringMap> find_coverings(const Surface& q1, const Surface& q2);

int enumeration_degree_cap();  // default 6, QDC_MAX_DEGREE overrides

/// All connected degree-d covers up to conjugacy of the total differential,
/// sorted by canonical encoding.
std::vector<CoverComponent> enumerate_covers(const Surface& base, int degree);

/// Refines the target by the script and the source by its full pullback,
/// extending the flag map; the degree is unchanged.
CoveringMap refine_cover(const CoveringMap& map, const Script& target_script);

/// Pullback of a target script through a covering (one source item per
/// preimage cell, deterministic order). Exposed for shared-source refinement
/// of several coverings.
Script pull_back_script(const CoveringMap& map, const ScriptItem& item);

}  // namespace htqd
