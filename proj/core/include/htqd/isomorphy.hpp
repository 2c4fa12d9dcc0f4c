#pragma once

#include "htqd/covering.hpp"
#include "htqd/surface.hpp"

#include <optional>
#include <string>
#include <vector>

namespace htqd {

/// Canonical representative of a conjugacy class: the Delaunay cell complex
/// of the flat surface, relabeled and gauge-fixed by the lexicographically
/// minimal traversal. Equal bytes iff conjugate.
struct CanonicalForm {
  std::string bytes;   // versioned deterministic encoding
  Surface surface;     // canonical complex, flags relabeled in traversal order
  int anchor = 0;      // starting flag of the winning traversal (post-relabel: 0)
};

/// Delaunay cell complex with removable marked points (filled, cone angle
/// 2*pi) deleted. Cocircular neighbor cells stay merged, so the complex is
/// canonical rather than an arbitrary triangulation.
Surface canonicalize(const Surface& s);

CanonicalForm canonical_form(const Surface& s);

struct Conjugacy {
  Surface canonical1;
  Surface canonical2;
  CoveringMap witness;  // degree-1 covering canonical1 -> canonical2
};

std::optional<Conjugacy> are_conjugate(const Surface& q1, const Surface& q2);

// forward declaration; full type lives in fibered.hpp
struct AffineAutomorphism;

/// All flat self-isomorphisms with derivative +-1 of the canonical complex,
/// closed under composition. Element 0 is the identity.
std::vector<AffineAutomorphism> symmetry_group(const Surface& q);

}  // namespace htqd
