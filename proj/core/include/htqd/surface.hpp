#pragma once

#include "htqd/errors.hpp"
#include "htqd/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace htqd {

enum class StatusKind { Puncture, Filled, Orbifold };

struct VertexStatus {
  StatusKind kind = StatusKind::Puncture;
  int order = 0;  // n >= 2 for Orbifold, 0 otherwise

  bool operator==(const VertexStatus& o) const { return kind == o.kind && order == o.order; }
  bool operator!=(const VertexStatus& o) const { return !(*this == o); }
  bool is_puncture() const { return kind == StatusKind::Puncture; }
};

std::string status_str(const VertexStatus& s);

/// Raw half-edge tables used to build a Surface. Flags are dense indices
/// 0..n-1; `status_by_flag` may assign a status to any one flag of a vertex
/// (conflicting assignments on one vertex are a schema error). Unassigned
/// vertices default to puncture when the cone angle is pi and filled
/// otherwise.
struct SurfaceData {
  std::vector<int> next;
  std::vector<int> twin;
  std::vector<Vec2> vec;
  std::vector<std::optional<VertexStatus>> status_by_flag;
  std::vector<long long> ids;  // external flag names; defaults to 0..n-1
  std::string name;
};

/// A half-translation surface: a polygonal cell complex with exact rational
/// holonomy vectors per half-edge. Immutable once constructed. Construction
/// derives orbits and cone angles and resolves vertex statuses; it throws
/// on structurally malformed tables. Geometric validity (polygon faces,
/// convex corners, twin vectors, connectivity) is checked by validate().
class Surface {
 public:
  explicit Surface(SurfaceData data);

  int flag_count() const { return static_cast<int>(next_.size()); }
  int next(int e) const { return next_[e]; }
  int prev(int e) const { return prev_[e]; }
  int twin(int e) const { return twin_[e]; }
  /// Successor flag in the corner orbit around the origin vertex of e.
  int around(int e) const { return next_[twin_[e]]; }
  const Vec2& vec(int e) const { return vec_[e]; }

  int face_count() const { return static_cast<int>(faces_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int face_of(int e) const { return face_of_[e]; }
  int vertex_of(int e) const { return vertex_of_[e]; }
  /// Flags of face f in next-order, starting at the smallest flag.
  const std::vector<int>& face_flags(int f) const { return faces_[f]; }
  /// Flags of vertex v in around-order, starting at the smallest flag.
  const std::vector<int>& vertex_flags(int v) const { return vertices_[v]; }

  VertexStatus status(int v) const { return status_[v]; }
  /// Cone angle of vertex v in units of pi (number of horizontal prongs).
  int angle_multiple(int v) const { return angle_[v]; }
  /// +1 for a translation gluing (vec(twin) == -vec), -1 for a half-turn
  /// gluing (vec(twin) == vec). Meaningless when neither holds; validate()
  /// reports those edges.
  int gluing_sign(int e) const { return gluing_sign_[e]; }

  long long external_id(int e) const { return ids_[e]; }
  const std::vector<long long>& external_ids() const { return ids_; }
  const std::string& name() const { return name_; }

  /// Structural + geometric equality on dense tables (external ids and the
  /// name are labels and do not participate).
  bool operator==(const Surface& o) const;
  bool operator!=(const Surface& o) const { return !(*this == o); }

  /// Developed corner positions of face f in its chart: the corner of
  /// face_flags(f)[0] sits at the origin and positions follow boundary order.
  std::vector<Vec2> face_chart(int f) const;

 private:
  std::vector<int> next_, prev_, twin_;
  std::vector<Vec2> vec_;
  std::vector<long long> ids_;
  std::string name_;
  std::vector<int> face_of_, vertex_of_;
  std::vector<std::vector<int>> faces_, vertices_;
  std::vector<VertexStatus> status_;
  std::vector<int> angle_;
  std::vector<int> gluing_sign_;
};

struct VertexInfo {
  int vertex;
  long long rep_flag;     // external id of the smallest flag
  int corner_count;
  int angle_multiple;
  VertexStatus status;
};

struct ValidationReport {
  std::vector<VertexInfo> vertices;
  int V = 0, E = 0, F = 0;
  int genus = 0;
  int puncture_count = 0;
  int orbifold_point_count = 0;
  Rational area;
  Rational orbifold_euler_characteristic;
  bool type_condition_ok = true;  // 3g - 3 + p > 0 with p = punctures + orbifold points
};

struct ValidationOutcome {
  bool ok = false;  // no error-level issues (warnings allowed)
  ValidationReport report;
  std::vector<Issue> issues;
};

ValidationOutcome validate(const Surface& s);

/// Per-vertex cone angle multiples (angle = a * pi), indexed by vertex.
std::vector<int> cone_angle_multiples(const Surface& s);

Rational area(const Surface& s);

Rational orbifold_euler_characteristic(const Surface& s);

/// Applies a positive-determinant rational linear map to every holonomy
/// vector. Combinatorics and statuses are untouched.
Surface matrix_act(const Mat2& m, const Surface& s);

// ---- exact predicates shared across modules ----

/// True when the ray through r (from the origin) lies in the half-open
/// counterclockwise sector [u, w); the sector width must be in (0, pi].
bool ray_in_sector(const Vec2& u, const Vec2& w, const Vec2& r);

/// Corner check: the ccw angle from u to w lies in (0, pi].
bool corner_convex(const Vec2& u, const Vec2& w);

/// Exact incircle predicate: > 0 when d is strictly inside the circle
/// through a, b, c (a, b, c counterclockwise), 0 when cocircular.
int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace htqd
