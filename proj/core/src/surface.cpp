#include "htqd/surface.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace htqd {

std::string status_str(const VertexStatus& s) {
  switch (s.kind) {
    case StatusKind::Puncture: return "puncture";
    case StatusKind::Filled: return "filled";
    case StatusKind::Orbifold: return "orbifold(" + std::to_string(s.order) + ")";
  }
  return "?";
}

bool ray_in_sector(const Vec2& u, const Vec2& w, const Vec2& r) {
  const Rational cru = cross(r, u);
  if (cru == 0 && dot(r, u) > 0) return true;   // on the included boundary ray
  const Rational crw = cross(r, w);
  if (crw == 0 && dot(r, w) > 0) return false;  // on the excluded boundary ray
  return cross(u, r) > 0 && cross(r, w) > 0;
}

bool corner_convex(const Vec2& u, const Vec2& w) {
  const Rational c = cross(u, w);
  if (c > 0) return true;
  return c == 0 && dot(u, w) < 0;  // straight corner, angle exactly pi
}

int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const Vec2 ad = a - d, bd = b - d, cd = c - d;
  const Rational la = dot(ad, ad), lb = dot(bd, bd), lc = dot(cd, cd);
  const Rational det = ad.x * (bd.y * lc - cd.y * lb) - ad.y * (bd.x * lc - cd.x * lb) +
                       la * (bd.x * cd.y - cd.x * bd.y);
  return det.sign();
}

namespace {

// Counts horizontal rays (theta == 0 mod pi) in the half-open ccw sector
// [u, w). Meaning requires sector width in (0, pi]; callers validate that
// separately.
int horizontal_rays_in_sector(const Vec2& u, const Vec2& w) {
  if (u.is_zero() || w.is_zero()) return 0;
  static const Vec2 plus{1, 0}, minus{-1, 0};
  int n = 0;
  if (ray_in_sector(u, w, plus)) ++n;
  if (ray_in_sector(u, w, minus)) ++n;
  return n;
}

bool same_direction(const Vec2& a, const Vec2& b) { return cross(a, b) == 0 && dot(a, b) > 0; }

}  // namespace

Surface::Surface(SurfaceData data)
    : next_(std::move(data.next)),
      twin_(std::move(data.twin)),
      vec_(std::move(data.vec)),
      ids_(std::move(data.ids)),
      name_(std::move(data.name)) {
  const int n = static_cast<int>(next_.size());
  if (static_cast<int>(twin_.size()) != n || static_cast<int>(vec_.size()) != n)
    throw Error(Code::MalformedComplex, "table sizes differ");
  if (n == 0) throw Error(Code::MalformedComplex, "empty complex");
  if (ids_.empty()) {
    ids_.resize(n);
    std::iota(ids_.begin(), ids_.end(), 0);
  }
  if (static_cast<int>(ids_.size()) != n)
    throw Error(Code::MalformedComplex, "id table size differs");

  std::vector<int> seen(n, 0);
  for (int e = 0; e < n; ++e) {
    if (next_[e] < 0 || next_[e] >= n || twin_[e] < 0 || twin_[e] >= n)
      throw Error(Code::MalformedComplex, "flag index out of range", {ids_[e]});
    seen[next_[e]]++;
  }
  for (int e = 0; e < n; ++e) {
    if (seen[e] != 1) throw Error(Code::MalformedComplex, "next is not a permutation", {ids_[e]});
    if (twin_[twin_[e]] != e || twin_[e] == e)
      throw Error(Code::MalformedComplex, "twin is not a fixed-point-free involution", {ids_[e]});
  }

  prev_.assign(n, -1);
  for (int e = 0; e < n; ++e) prev_[next_[e]] = e;

  face_of_.assign(n, -1);
  for (int e = 0; e < n; ++e) {
    if (face_of_[e] != -1) continue;
    std::vector<int> cycle;
    for (int x = e; face_of_[x] == -1; x = next_[x]) {
      face_of_[x] = static_cast<int>(faces_.size());
      cycle.push_back(x);
    }
    faces_.push_back(std::move(cycle));
  }
  vertex_of_.assign(n, -1);
  for (int e = 0; e < n; ++e) {
    if (vertex_of_[e] != -1) continue;
    std::vector<int> orbit;
    for (int x = e; vertex_of_[x] == -1; x = around(x)) {
      vertex_of_[x] = static_cast<int>(vertices_.size());
      orbit.push_back(x);
    }
    vertices_.push_back(std::move(orbit));
  }

  gluing_sign_.assign(n, 0);
  for (int e = 0; e < n; ++e) {
    if (vec_[e].is_zero()) continue;
    if (vec_[twin_[e]] == -vec_[e]) gluing_sign_[e] = 1;
    else if (vec_[twin_[e]] == vec_[e]) gluing_sign_[e] = -1;
  }

  angle_.assign(vertices_.size(), 0);
  for (int v = 0; v < vertex_count(); ++v) {
    int count = 0;
    for (int e : vertices_[v]) count += horizontal_rays_in_sector(vec_[e], -vec_[prev_[e]]);
    angle_[v] = count;
  }

  status_.assign(vertices_.size(), VertexStatus{});
  std::vector<char> assigned(vertices_.size(), 0);
  if (!data.status_by_flag.empty()) {
    if (static_cast<int>(data.status_by_flag.size()) != n)
      throw Error(Code::MalformedComplex, "status table size differs");
    for (int e = 0; e < n; ++e) {
      if (!data.status_by_flag[e]) continue;
      const VertexStatus st = *data.status_by_flag[e];
      if (st.kind == StatusKind::Orbifold && st.order < 2)
        throw Error(Code::SchemaError, "orbifold order must be >= 2", {ids_[e]});
      if ((st.kind != StatusKind::Orbifold) != (st.order == 0))
        throw Error(Code::SchemaError, "status order field inconsistent", {ids_[e]});
      const int v = vertex_of_[e];
      if (assigned[v] && status_[v] != st)
        throw Error(Code::SchemaError, "conflicting statuses on one vertex", {ids_[e]});
      status_[v] = st;
      assigned[v] = 1;
    }
  }
  for (int v = 0; v < vertex_count(); ++v) {
    if (assigned[v]) continue;
    status_[v] = angle_[v] == 1 ? VertexStatus{StatusKind::Puncture, 0}
                                : VertexStatus{StatusKind::Filled, 0};
  }
}

bool Surface::operator==(const Surface& o) const {
  return next_ == o.next_ && twin_ == o.twin_ && vec_ == o.vec_ && status_ == o.status_;
}

std::vector<Vec2> Surface::face_chart(int f) const {
  const auto& flags = faces_[f];
  std::vector<Vec2> pos(flags.size());
  Vec2 p{0, 0};
  for (std::size_t k = 0; k < flags.size(); ++k) {
    pos[k] = p;
    p = p + vec_[flags[k]];
  }
  return pos;
}

Rational area(const Surface& s) {
  Rational total = 0;
  for (int f = 0; f < s.face_count(); ++f) {
    const auto pos = s.face_chart(f);
    Rational twice = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
      twice += cross(pos[k], pos[(k + 1) % pos.size()]);
    total += twice / 2;
  }
  return total;
}

std::vector<int> cone_angle_multiples(const Surface& s) {
  std::vector<int> out(s.vertex_count());
  for (int v = 0; v < s.vertex_count(); ++v) out[v] = s.angle_multiple(v);
  return out;
}

Rational orbifold_euler_characteristic(const Surface& s) {
  const int chi = s.vertex_count() - s.flag_count() / 2 + s.face_count();
  Rational out = chi;
  for (int v = 0; v < s.vertex_count(); ++v) {
    const VertexStatus st = s.status(v);
    if (st.kind == StatusKind::Puncture) out -= 1;
    else if (st.kind == StatusKind::Orbifold) out -= Rational(st.order - 1, st.order);
  }
  return out;
}

ValidationOutcome validate(const Surface& s) {
  ValidationOutcome out;
  auto err = [&](Code c, std::string msg, std::vector<long long> ids = {}) {
    out.issues.push_back(Issue{c, std::move(msg), std::move(ids), false});
  };

  const int n = s.flag_count();
  for (int e = 0; e < n; ++e)
    if (s.vec(e).is_zero()) err(Code::ZeroVector, "zero holonomy vector", {s.external_id(e)});
  for (int e = 0; e < n; ++e) {
    if (e < s.twin(e) && !s.vec(e).is_zero() && s.gluing_sign(e) == 0)
      err(Code::BadTwinVector, "twin vector is neither v nor -v",
          {s.external_id(e), s.external_id(s.twin(e))});
  }

  bool faces_ok = true;
  for (int f = 0; f < s.face_count(); ++f) {
    const auto& flags = s.face_flags(f);
    bool zero_here = false;
    Vec2 sum{0, 0};
    for (int e : flags) {
      sum = sum + s.vec(e);
      if (s.vec(e).is_zero()) zero_here = true;
    }
    if (zero_here) {
      faces_ok = false;
      continue;
    }
    if (!sum.is_zero()) {
      err(Code::NonClosedFace, "face boundary vectors do not sum to zero",
          {s.external_id(flags[0])});
      faces_ok = false;
      continue;
    }
    bool corners_ok = true;
    for (int e : flags) {
      if (!corner_convex(s.vec(e), -s.vec(s.prev(e)))) {
        err(Code::NonConvexCorner, "interior corner angle outside (0, pi]", {s.external_id(e)});
        corners_ok = false;
      }
    }
    if (!corners_ok) {
      faces_ok = false;
      continue;
    }
    int turning = 0;
    for (int e : flags) {
      const Vec2& u = s.vec(e);
      const Vec2& w = s.vec(s.next(e));
      if (same_direction(u, w)) continue;  // straight corner, no turning
      if (ray_in_sector(u, w, Vec2{1, 0})) ++turning;
      if (ray_in_sector(u, w, Vec2{-1, 0})) ++turning;
    }
    if (turning != 2) {
      err(Code::NonClosedFace, "face boundary does not bound a simple polygon (winding != 1)",
          {s.external_id(flags[0])});
      faces_ok = false;
      continue;
    }
    const auto pos = s.face_chart(f);
    Rational twice = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
      twice += cross(pos[k], pos[(k + 1) % pos.size()]);
    if (twice <= 0) {
      err(Code::NonClosedFace, "face has nonpositive area", {s.external_id(flags[0])});
      faces_ok = false;
    }
  }

  // connectivity over the {next, twin} action
  {
    std::vector<char> reach(n, 0);
    std::vector<int> stack{0};
    reach[0] = 1;
    while (!stack.empty()) {
      int e = stack.back();
      stack.pop_back();
      for (int x : {s.next(e), s.twin(e)}) {
        if (!reach[x]) {
          reach[x] = 1;
          stack.push_back(x);
        }
      }
    }
    if (std::find(reach.begin(), reach.end(), 0) != reach.end())
      err(Code::Disconnected, "complex is not connected");
  }

  for (int v = 0; v < s.vertex_count(); ++v) {
    if (s.angle_multiple(v) == 1 && s.status(v).kind == StatusKind::Filled)
      err(Code::PoleNotPunctured, "cone angle pi (simple pole) at a filled vertex",
          {s.external_id(s.vertex_flags(v)[0])});
  }

  ValidationReport& rep = out.report;
  rep.V = s.vertex_count();
  rep.E = n / 2;
  rep.F = s.face_count();
  const int chi = rep.V - rep.E + rep.F;
  if ((2 - chi) % 2 != 0) {
    err(Code::InternalError, "odd Euler characteristic on a closed oriented complex");
  } else {
    rep.genus = (2 - chi) / 2;
  }
  if (faces_ok) {
    int gb = 0;
    for (int v = 0; v < s.vertex_count(); ++v) gb += 2 - s.angle_multiple(v);
    if (gb != 2 * chi)
      err(Code::InternalError, "Gauss-Bonnet accounting failed on a face-valid complex");
  }
  for (int v = 0; v < s.vertex_count(); ++v) {
    rep.vertices.push_back(VertexInfo{v, s.external_id(s.vertex_flags(v)[0]),
                                      static_cast<int>(s.vertex_flags(v).size()),
                                      s.angle_multiple(v), s.status(v)});
    if (s.status(v).kind == StatusKind::Puncture) rep.puncture_count++;
    if (s.status(v).kind == StatusKind::Orbifold) rep.orbifold_point_count++;
  }
  rep.area = area(s);
  rep.orbifold_euler_characteristic = orbifold_euler_characteristic(s);
  const int p = rep.puncture_count + rep.orbifold_point_count;
  rep.type_condition_ok = 3 * rep.genus - 3 + p > 0;
  if (!rep.type_condition_ok)
    out.issues.push_back(Issue{Code::TypeConditionViolated,
                               "3g - 3 + p <= 0; commensurability operations refuse this surface",
                               {},
                               true});

  out.ok = std::none_of(out.issues.begin(), out.issues.end(),
                        [](const Issue& i) { return !i.warning; });
  return out;
}

Surface matrix_act(const Mat2& m, const Surface& s) {
  if (m.det() <= 0)
    throw Error(Code::NonPositiveDeterminant, "matrix determinant must be positive");
  SurfaceData data;
  const int n = s.flag_count();
  data.next.resize(n);
  data.twin.resize(n);
  data.vec.resize(n);
  data.ids = s.external_ids();
  data.name = s.name();
  data.status_by_flag.assign(n, std::nullopt);
  for (int e = 0; e < n; ++e) {
    data.next[e] = s.next(e);
    data.twin[e] = s.twin(e);
    data.vec[e] = m.apply(s.vec(e));
  }
  for (int v = 0; v < s.vertex_count(); ++v)
    data.status_by_flag[s.vertex_flags(v)[0]] = s.status(v);
  return Surface(std::move(data));
}

}  // namespace htqd
