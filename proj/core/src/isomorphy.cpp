#include "htqd/isomorphy.hpp"

#include "htqd/fibered.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace htqd {

namespace {

// Mutable half-edge scratch complex for the canonicalization surgeries.
struct Work {
  std::vector<int> next, twin;
  std::vector<Vec2> vec;
  std::vector<VertexStatus> stat;  // per flag, constant on vertex orbits
  std::vector<char> alive;

  explicit Work(const Surface& s) {
    const int n = s.flag_count();
    next.resize(n);
    twin.resize(n);
    vec.resize(n);
    stat.resize(n);
    alive.assign(n, 1);
    for (int e = 0; e < n; ++e) {
      next[e] = s.next(e);
      twin[e] = s.twin(e);
      vec[e] = s.vec(e);
      stat[e] = s.status(s.vertex_of(e));
    }
  }

  int size() const { return static_cast<int>(next.size()); }

  int prev_of(int e) const {
    int x = e;
    while (next[x] != e) x = next[x];
    return x;
  }

  int add_flag(const Vec2& v, const VertexStatus& st) {
    next.push_back(-1);
    twin.push_back(-1);
    vec.push_back(v);
    stat.push_back(st);
    alive.push_back(1);
    return size() - 1;
  }

  // +1 translation gluing, -1 half-turn gluing
  int gluing(int e) const {
    if (vec[twin[e]] == -vec[e]) return 1;
    if (vec[twin[e]] == vec[e]) return -1;
    throw Error(Code::InternalError, "invalid twin vectors in canonicalization scratch");
  }

  std::vector<int> face_cycle(int e) const {
    std::vector<int> out;
    int x = e;
    do {
      out.push_back(x);
      x = next[x];
    } while (x != e);
    return out;
  }

  std::vector<int> vertex_cycle(int e) const {
    std::vector<int> out;
    int x = e;
    do {
      out.push_back(x);
      x = next[twin[x]];
    } while (x != e);
    return out;
  }

  int angle_multiple_at(int e) const {
    int count = 0;
    for (int x : vertex_cycle(e)) {
      const Vec2 u = vec[x];
      const Vec2 w = -vec[prev_of(x)];
      if (ray_in_sector(u, w, Vec2{1, 0})) ++count;
      if (ray_in_sector(u, w, Vec2{-1, 0})) ++count;
    }
    return count;
  }

  Surface build() const {
    std::vector<int> order;
    for (int e = 0; e < size(); ++e)
      if (alive[e]) order.push_back(e);
    std::vector<int> local(size(), -1);
    for (std::size_t k = 0; k < order.size(); ++k) local[order[k]] = static_cast<int>(k);
    SurfaceData d;
    d.next.resize(order.size());
    d.twin.resize(order.size());
    d.vec.resize(order.size());
    d.status_by_flag.resize(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      d.next[k] = local[next[order[k]]];
      d.twin[k] = local[twin[order[k]]];
      d.vec[k] = vec[order[k]];
      d.status_by_flag[k] = stat[order[k]];
    }
    return Surface(std::move(d));
  }
};

std::vector<Vec2> develop_cycle(const Work& w, const std::vector<int>& cycle) {
  std::vector<Vec2> pos(cycle.size());
  Vec2 p{0, 0};
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    pos[k] = p;
    p = p + w.vec[cycle[k]];
  }
  return pos;
}

// Fan-free triangulation of one convex (possibly straight-cornered) face by
// clipping strictly convex corners.
void triangulate_face(Work& w, int seed) {
  while (true) {
    std::vector<int> cycle = w.face_cycle(seed);
    const int m = static_cast<int>(cycle.size());
    if (m <= 3) return;
    const auto pos = develop_cycle(w, cycle);
    int pick = -1;
    for (int j = 0; j < m; ++j) {
      const int pj = (j + m - 1) % m;
      if (cross(w.vec[cycle[pj]], w.vec[cycle[j]]) > 0) {
        if (pick == -1 || cycle[j] < cycle[pick]) pick = j;
      }
    }
    if (pick == -1) throw Error(Code::InternalError, "face without strictly convex corner");
    const int j = pick;
    const int fj = cycle[j];
    const int fprev = cycle[(j + m - 1) % m];
    const int fnext = cycle[(j + 1) % m];
    const int fprev2 = cycle[(j + m - 2) % m];
    const Vec2 u = pos[(j + m - 1) % m] - pos[(j + 1) % m];
    const int c = w.add_flag(u, w.stat[fnext]);
    const int c2 = w.add_flag(-u, w.stat[fprev]);
    w.twin[c] = c2;
    w.twin[c2] = c;
    // ear triangle (fprev, fj, c); remainder continues through c2
    w.next[fj] = c;
    w.next[c] = fprev;
    w.next[fprev2] = c2;
    w.next[c2] = fnext;
    seed = c2;
  }
}

void triangulate_all(Work& w) {
  std::vector<char> done(w.size(), 0);
  for (int e = 0; e < w.size(); ++e) {
    if (!w.alive[e] || done[e]) continue;
    for (int x : w.face_cycle(e)) done[x] = 1;
    triangulate_face(w, e);
  }
}

// Deletes one regular marked point (filled, angle 2*pi) from a triangulated
// complex by developing its star and retriangulating the link polygon.
void remove_vertex(Work& w, int seed_flag) {
  const std::vector<int> star = w.vertex_cycle(seed_flag);  // around-order (clockwise)
  const int d = static_cast<int>(star.size());
  if (d < 3) throw Error(Code::InternalError, "degree < 3 at a regular marked point");

  // develop: v at the origin, g transports across successive spokes
  std::vector<Vec2> p(d);
  std::vector<int> g(d);
  std::vector<int> opp(d);
  int gg = 1;
  for (int i = 0; i < d; ++i) {
    g[i] = gg;
    p[i] = Rational(gg) * w.vec[star[i]];
    opp[i] = w.next[star[i]];
    for (int x : w.vertex_cycle(opp[i])) {
      if (std::find(star.begin(), star.end(), x) != star.end())
        throw Error(Code::InternalError, "marked point lies on its own link");
      break;  // only the membership of the orbit matters; checked via any flag
    }
    gg *= w.gluing(star[i]);
  }
  if (gg != 1) throw Error(Code::InternalError, "nontrivial holonomy at a regular marked point");
  for (int i = 0; i < d; ++i) {
    const int j = (i + d - 1) % d;
    if (p[j] != p[i] + Rational(g[i]) * w.vec[opp[i]])
      throw Error(Code::InternalError, "star development did not close up");
  }

  // ccw link polygon: P[k] = p[d-1-k], boundary edge from P[k] to P[k+1]
  // is opp[d-1-k], regauged into the common chart
  std::vector<Vec2> P(d);
  std::vector<int> side(d);
  for (int k = 0; k < d; ++k) {
    const int i = d - 1 - k;
    P[k] = p[i];
    side[k] = opp[i];
    w.vec[opp[i]] = Rational(g[i]) * w.vec[opp[i]];
  }

  // drop the star
  for (int s : star) {
    w.alive[s] = 0;
    w.alive[w.twin[s]] = 0;
  }

  // ear-clip the link polygon (star-shaped, hence simple; containment check
  // needed because it need not be convex)
  std::vector<int> act(d);
  for (int k = 0; k < d; ++k) act[k] = k;
  while (act.size() > 3) {
    const int m = static_cast<int>(act.size());
    int pick = -1;
    for (int k = 0; k < m; ++k) {
      const Vec2& a = P[act[(k + m - 1) % m]];
      const Vec2& b = P[act[k]];
      const Vec2& c = P[act[(k + 1) % m]];
      if (cross(b - a, c - b) <= 0) continue;
      bool blocked = false;
      for (int j = 0; j < m && !blocked; ++j) {
        if (j == k || j == (k + m - 1) % m || j == (k + 1) % m) continue;
        const Vec2& x = P[act[j]];
        if (cross(b - a, x - a) >= 0 && cross(c - b, x - b) >= 0 && cross(a - c, x - c) >= 0)
          blocked = true;
      }
      if (!blocked && (pick == -1 || act[k] < act[pick])) pick = k;
    }
    if (pick == -1) throw Error(Code::InternalError, "link polygon has no clippable ear");
    const int m2 = m;
    const int k = pick;
    const int ia = act[(k + m2 - 1) % m2];
    const int ib = act[k];
    const int ic = act[(k + 1) % m2];
    const Vec2 u = P[ia] - P[ic];
    const int c1 = w.add_flag(u, w.stat[side[ic]]);
    const int c2f = w.add_flag(-u, w.stat[side[ia]]);
    w.twin[c1] = c2f;
    w.twin[c2f] = c1;
    w.next[side[ia]] = side[ib];
    w.next[side[ib]] = c1;
    w.next[c1] = side[ia];
    side[ia] = c2f;
    act.erase(act.begin() + k);
  }
  w.next[side[act[0]]] = side[act[1]];
  w.next[side[act[1]]] = side[act[2]];
  w.next[side[act[2]]] = side[act[0]];
}

void remove_marked_points(Work& w) {
  while (true) {
    int target = -1;
    std::vector<char> seen(w.size(), 0);
    for (int e = 0; e < w.size(); ++e) {
      if (!w.alive[e] || seen[e]) continue;
      const auto orbit = w.vertex_cycle(e);
      for (int x : orbit) seen[x] = 1;
      if (w.stat[e].kind != StatusKind::Filled) continue;
      if (w.angle_multiple_at(e) != 2) continue;
      // keep one vertex if everything were removable (degenerate unmarked tori)
      target = e;
      break;
    }
    if (target == -1) return;
    bool only_vertex = true;
    {
      std::vector<char> seen2(w.size(), 0);
      for (int x : w.vertex_cycle(target)) seen2[x] = 1;
      for (int e = 0; e < w.size(); ++e)
        if (w.alive[e] && !seen2[e]) { only_vertex = false; break; }
    }
    if (only_vertex) return;
    remove_vertex(w, target);
  }
}

struct Quad {
  int b, c, dd, f;
  Vec2 P0, P1, QA, QB;
  int sT;
};

Quad quad_of(const Work& w, int e) {
  Quad q;
  q.b = w.next[e];
  q.c = w.next[q.b];
  const int T = w.twin[e];
  q.dd = w.next[T];
  q.f = w.next[q.dd];
  if (w.next[q.c] != e || w.next[q.f] != T)
    throw Error(Code::InternalError, "flip on non-triangular faces");
  q.sT = w.gluing(e);
  q.P0 = Vec2{0, 0};
  q.P1 = w.vec[e];
  q.QA = w.vec[e] + w.vec[q.b];
  q.QB = Rational(q.sT) * w.vec[q.dd];
  return q;
}

void flip_edge(Work& w, int e) {
  const int T = w.twin[e];
  const Quad q = quad_of(w, e);
  if (q.b == T || q.c == T)
    throw Error(Code::InternalError, "degenerate flip configuration");
  w.vec[e] = q.QB - q.QA;
  w.vec[T] = q.QA - q.QB;
  w.vec[q.dd] = Rational(q.sT) * w.vec[q.dd];
  w.vec[q.f] = Rational(q.sT) * w.vec[q.f];
  const VertexStatus sc = w.stat[q.c], sf = w.stat[q.f];
  w.next[e] = q.f;
  w.next[q.f] = q.b;
  w.next[q.b] = e;
  w.next[T] = q.c;
  w.next[q.c] = q.dd;
  w.next[q.dd] = T;
  w.stat[e] = sc;
  w.stat[T] = sf;
  if (cross(w.vec[e], w.vec[q.f]) <= 0 || cross(w.vec[T], w.vec[q.c]) <= 0)
    throw Error(Code::InternalError, "flip produced a nonpositive triangle");
}

void delaunay_flips(Work& w) {
  const int cap = 1000 + 50 * w.size() * w.size();
  int flips = 0;
  bool again = true;
  while (again) {
    again = false;
    for (int e = 0; e < w.size(); ++e) {
      if (!w.alive[e] || e > w.twin[e]) continue;
      const Quad q = quad_of(w, e);
      if (incircle(q.P0, q.P1, q.QA, q.QB) > 0) {
        flip_edge(w, e);
        again = true;
        if (++flips > cap) throw Error(Code::IterationLimitExceeded, "Delaunay flips exceeded cap");
      }
    }
  }
}

void merge_cocircular(Work& w) {
  std::vector<int> pending;
  for (int e = 0; e < w.size(); ++e) {
    if (!w.alive[e] || e > w.twin[e]) continue;
    const Quad q = quad_of(w, e);
    if (incircle(q.P0, q.P1, q.QA, q.QB) == 0) pending.push_back(e);
  }
  bool progress = true;
  while (!pending.empty() && progress) {
    progress = false;
    std::vector<int> keep;
    for (int e : pending) {
      const int T = w.twin[e];
      // regauge the T-side face into e's chart before splicing
      bool same_face = false;
      for (int x : w.face_cycle(e))
        if (x == T) same_face = true;
      if (same_face) {
        keep.push_back(e);
        continue;
      }
      if (w.gluing(e) == -1) {
        for (int x : w.face_cycle(T)) w.vec[x] = -w.vec[x];
      }
      const int pe = w.prev_of(e), pT = w.prev_of(T);
      w.next[pe] = w.next[T];
      w.next[pT] = w.next[e];
      w.alive[e] = 0;
      w.alive[T] = 0;
      progress = true;
    }
    pending = std::move(keep);
  }
  if (!pending.empty())
    throw Error(Code::InternalError, "cocircular edge interior to a single cell");
}

struct Traversal {
  std::vector<int> disc;    // flag -> discovery index
  std::vector<int> order;   // discovery index -> flag
  std::vector<int> sigma;   // face gauge, +-1
};

Traversal traverse(const Surface& s, int anchor, int sign) {
  Traversal t;
  const int n = s.flag_count();
  t.disc.assign(n, -1);
  t.order.reserve(n);
  t.sigma.assign(s.face_count(), 0);
  t.sigma[s.face_of(anchor)] = sign;
  std::deque<int> bfs;
  t.disc[anchor] = 0;
  t.order.push_back(anchor);
  bfs.push_back(anchor);
  while (!bfs.empty()) {
    const int e = bfs.front();
    bfs.pop_front();
    for (int x : {s.next(e), s.twin(e)}) {
      if (t.disc[x] != -1) continue;
      if (x == s.twin(e)) {
        const int f = s.face_of(x);
        if (t.sigma[f] == 0) t.sigma[f] = t.sigma[s.face_of(e)] * s.gluing_sign(e);
      }
      t.disc[x] = static_cast<int>(t.order.size());
      t.order.push_back(x);
      bfs.push_back(x);
    }
  }
  return t;
}

std::string encode(const Surface& s, const Traversal& t) {
  std::ostringstream out;
  out << s.flag_count() << "\n";
  for (int k = 0; k < s.flag_count(); ++k) {
    const int e = t.order[k];
    const Vec2 v = Rational(t.sigma[s.face_of(e)]) * s.vec(e);
    const VertexStatus st = s.status(s.vertex_of(e));
    out << t.disc[s.next(e)] << " " << t.disc[s.twin(e)] << " " << rational_str(v.x) << " "
        << rational_str(v.y) << " ";
    switch (st.kind) {
      case StatusKind::Puncture: out << "p"; break;
      case StatusKind::Filled: out << "f"; break;
      case StatusKind::Orbifold: out << "o" << st.order; break;
    }
    out << "\n";
  }
  return out.str();
}

Surface relabel_gauged(const Surface& s, const Traversal& t) {
  const int n = s.flag_count();
  SurfaceData d;
  d.next.resize(n);
  d.twin.resize(n);
  d.vec.resize(n);
  d.status_by_flag.assign(n, std::nullopt);
  for (int e = 0; e < n; ++e) {
    d.next[t.disc[e]] = t.disc[s.next(e)];
    d.twin[t.disc[e]] = t.disc[s.twin(e)];
    d.vec[t.disc[e]] = Rational(t.sigma[s.face_of(e)]) * s.vec(e);
  }
  for (int v = 0; v < s.vertex_count(); ++v) {
    int best = -1;
    for (int e : s.vertex_flags(v)) best = best == -1 ? t.disc[e] : std::min(best, t.disc[e]);
    d.status_by_flag[best] = s.status(v);
  }
  return Surface(std::move(d));
}

}  // namespace

Surface canonicalize(const Surface& s) {
  Work w(s);
  triangulate_all(w);
  remove_marked_points(w);
  delaunay_flips(w);
  merge_cocircular(w);
  return w.build();
}

CanonicalForm canonical_form(const Surface& s) {
  const Surface c = canonicalize(s);
  std::string best;
  Traversal best_t;
  for (int anchor = 0; anchor < c.flag_count(); ++anchor) {
    for (int sign : {1, -1}) {
      Traversal t = traverse(c, anchor, sign);
      std::string enc = encode(c, t);
      if (best.empty() || enc < best) {
        best = std::move(enc);
        best_t = std::move(t);
      }
    }
  }
  CanonicalForm out{std::string("htqd-canonical/1\n") + best, relabel_gauged(c, best_t), 0};
  return out;
}

std::optional<Conjugacy> are_conjugate(const Surface& q1, const Surface& q2) {
  CanonicalForm c1 = canonical_form(q1);
  CanonicalForm c2 = canonical_form(q2);
  if (c1.bytes != c2.bytes) return std::nullopt;
  std::vector<int> identity(c1.surface.flag_count());
  for (int e = 0; e < c1.surface.flag_count(); ++e) identity[e] = e;
  CoveringMap witness{c1.surface, c2.surface, std::move(identity)};
  require_covering(witness);
  return Conjugacy{std::move(c1.surface), std::move(c2.surface), std::move(witness)};
}

std::vector<AffineAutomorphism> symmetry_group(const Surface& q) {
  const Surface c = canonicalize(q);
  std::vector<AffineAutomorphism> out;
  std::vector<std::vector<int>> maps;
  for (int t = 0; t < c.flag_count(); ++t) {
    auto phi = propagate_flag_map(c, c, 0, t);
    if (!phi) continue;
    bool ok = true;
    int uniform = 0;
    bool mixed = false;
    for (int f = 0; f < c.face_count() && ok; ++f) {
      int tau = 0;
      for (int e : c.face_flags(f)) {
        int sgn;
        if (c.vec((*phi)[e]) == c.vec(e)) sgn = 1;
        else if (c.vec((*phi)[e]) == -c.vec(e)) sgn = -1;
        else { ok = false; break; }
        if (tau == 0) tau = sgn;
        else if (tau != sgn) { ok = false; break; }
      }
      if (!ok) break;
      if (uniform == 0) uniform = tau;
      else if (uniform != tau) mixed = true;
    }
    if (!ok) continue;
    for (int v = 0; v < c.vertex_count() && ok; ++v) {
      if (c.status(c.vertex_of((*phi)[c.vertex_flags(v)[0]])) != c.status(v)) ok = false;
    }
    if (!ok) continue;
    const Mat2 a = (!mixed && uniform == -1) ? -Mat2::identity() : Mat2::identity();
    maps.push_back(*phi);
    out.push_back(AffineAutomorphism{c, std::move(*phi), a});
  }
  // group closure sanity
  for (const auto& f : maps) {
    for (const auto& g : maps) {
      std::vector<int> comp(f.size());
      for (std::size_t e = 0; e < f.size(); ++e) comp[e] = f[g[e]];
      if (std::find(maps.begin(), maps.end(), comp) == maps.end())
        throw Error(Code::InternalError, "symmetry set not closed under composition");
    }
  }
  return out;
}

}  // namespace htqd
