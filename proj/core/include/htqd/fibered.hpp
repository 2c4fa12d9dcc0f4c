#pragma once

#include "htqd/covering.hpp"
#include "htqd/partition.hpp"
#include "htqd/surface.hpp"

#include <optional>
#include <vector>

namespace htqd {

/// An affine self-map of a half-translation surface with constant rational
/// derivative. When the map preserves the given cell structure it carries an
/// explicit flag bijection; parabolic or hyperbolic derivatives preserve no
/// finite cell structure, so such automorphisms are represented by the
/// derivative alone and certified through re-cutting conjugacy.
struct AffineAutomorphism {
  Surface surface;
  std::optional<std::vector<int>> flag_map;
  Mat2 derivative;
};

struct AffineOutcome {
  bool ok = false;
  std::vector<Issue> issues;
};

AffineOutcome validate_affine(const AffineAutomorphism& f);

/// Finite order of f (smallest k with f^k = id), or nullopt for infinite
/// order. Derivative-only automorphisms are decidable only in the infinite
/// case; a finite-order candidate without a flag map raises an error.
std::optional<int> order_of(const AffineAutomorphism& f);

struct Descent {
  Surface quotient;
  CoveringMap projection;        // refined source -> quotient
  AffineAutomorphism induced;    // automorphism of the quotient
  AffineAutomorphism lifted;     // f carried to the refined source
  CoveringMap refined_cover;     // refined source -> refined original target
  CoveringMap base_factor;       // refined original target -> quotient
  bool factors_through_base = true;
  int refinement_rounds = 0;
};

/// Quotients p's source by the stabilized join of the p-fiber partition with
/// its images under the flag map of f, and induces f on the quotient. The
/// contract projection o f = induced o projection holds exactly as flag maps.
Descent descend_automorphism(const AffineAutomorphism& f, const CoveringMap& p);

}  // namespace htqd
