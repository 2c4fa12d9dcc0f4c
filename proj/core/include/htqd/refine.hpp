#pragma once

#include "htqd/surface.hpp"

#include <variant>
#include <vector>

namespace htqd {

/// Inserts a vertex at parameter t in (0,1) along the given flag (and at
/// 1-t along its twin). The flag keeps its index and its origin; the far
/// fragments get fresh indices.
struct SplitEdge {
  int edge;
  Rational t;
};

/// Adds a straight edge between the origin corners of two flags of one face.
struct InsertChord {
  int from;
  int to;
};

/// Star-subdivides a face from a new interior vertex. The point is given in
/// the face chart: the origin corner of the face's smallest flag sits at
/// (0,0) and the boundary develops in next-order.
struct SplitFace {
  int face_flag;
  Vec2 point;
};

using ScriptItem = std::variant<SplitEdge, InsertChord, SplitFace>;

struct Script {
  std::vector<ScriptItem> items;
};

/// Trace of one applied item: the flags it created (in creation order) and
/// the new vertex's representative flag, or -1 for insert_chord.
struct ItemTrace {
  std::vector<int> new_flags;
  int new_vertex_flag = -1;
};

struct RefineResult {
  Surface surface;
  std::vector<ItemTrace> items;
};

/// Applies script items in order. Pre-existing flag indices survive with
/// their origin corners intact; new flags are appended, so the result's
/// flag 0..n-1 prefix corresponds to the input complex.
RefineResult refine(const Surface& s, const Script& script);

}  // namespace htqd
