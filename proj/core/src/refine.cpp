#include "htqd/refine.hpp"

#include <algorithm>

namespace htqd {

namespace {

struct Tables {
  std::vector<int> next, twin;
  std::vector<Vec2> vec;
  std::vector<std::optional<VertexStatus>> status;
  std::vector<long long> ids;
  long long next_id;

  explicit Tables(const Surface& s) {
    const int n = s.flag_count();
    next.resize(n);
    twin.resize(n);
    vec.resize(n);
    status.assign(n, std::nullopt);
    ids = s.external_ids();
    for (int e = 0; e < n; ++e) {
      next[e] = s.next(e);
      twin[e] = s.twin(e);
      vec[e] = s.vec(e);
    }
    for (int v = 0; v < s.vertex_count(); ++v) status[s.vertex_flags(v)[0]] = s.status(v);
    next_id = *std::max_element(ids.begin(), ids.end()) + 1;
  }

  int add_flag(const Vec2& v) {
    next.push_back(-1);
    twin.push_back(-1);
    vec.push_back(v);
    status.push_back(std::nullopt);
    ids.push_back(next_id++);
    return static_cast<int>(next.size()) - 1;
  }

  Surface build(std::string name) const {
    SurfaceData d;
    d.next = next;
    d.twin = twin;
    d.vec = vec;
    d.status_by_flag = status;
    d.ids = ids;
    d.name = std::move(name);
    return Surface(std::move(d));
  }
};

ItemTrace apply_split_edge(Tables& t, const Surface& s, const SplitEdge& item) {
  if (item.edge < 0 || item.edge >= static_cast<int>(t.next.size()))
    throw Error(Code::SchemaError, "split_edge: no such flag", {item.edge});
  if (!(item.t > 0 && item.t < 1))
    throw Error(Code::DegenerateSplit, "split parameter must lie strictly in (0,1)",
                {t.ids[item.edge]});
  const int e = item.edge;
  const int w = t.twin[e];
  const Vec2 ve = t.vec[e];
  const Vec2 vw = t.vec[w];
  const int e2 = t.add_flag((1 - item.t) * ve);
  const int w2 = t.add_flag(item.t * vw);
  t.vec[e] = item.t * ve;
  t.vec[w] = (1 - item.t) * vw;
  t.next[e2] = t.next[e];
  t.next[e] = e2;
  t.next[w2] = t.next[w];
  t.next[w] = w2;
  t.twin[e] = w2;
  t.twin[w2] = e;
  t.twin[w] = e2;
  t.twin[e2] = w;
  t.status[e2] = VertexStatus{StatusKind::Filled, 0};
  (void)s;
  return ItemTrace{{e2, w2}, e2};
}

ItemTrace apply_insert_chord(Tables& t, const Surface& s, const InsertChord& item) {
  if (item.from < 0 || item.from >= s.flag_count() || item.to < 0 || item.to >= s.flag_count())
    throw Error(Code::SchemaError, "insert_chord: no such flag");
  const int f = s.face_of(item.from);
  if (s.face_of(item.to) != f || item.from == item.to)
    throw Error(Code::SchemaError, "insert_chord: flags must be distinct corners of one face",
                {t.ids[item.from], t.ids[item.to]});
  if (s.next(item.from) == item.to || s.next(item.to) == item.from)
    throw Error(Code::ChordIsExistingEdge, "chord endpoints are adjacent corners",
                {t.ids[item.from], t.ids[item.to]});
  const auto& flags = s.face_flags(f);
  const auto chart = s.face_chart(f);
  auto pos_of = [&](int flag) {
    for (std::size_t k = 0; k < flags.size(); ++k)
      if (flags[k] == flag) return chart[k];
    throw Error(Code::InternalError, "flag not on its face");
  };
  const Vec2 a = pos_of(item.from);
  const Vec2 b = pos_of(item.to);
  const Vec2 u = b - a;
  const int c = t.add_flag(u);        // origin(from) -> origin(to)
  const int c2 = t.add_flag(-u);      // reverse side
  t.twin[c] = c2;
  t.twin[c2] = c;
  const int pf = s.prev(item.from);
  const int pt = s.prev(item.to);
  t.next[pt] = c2;
  t.next[c2] = item.from;
  t.next[pf] = c;
  t.next[c] = item.to;

  // both sides must remain honest polygons; a chord through a straight
  // boundary run produces a zero-angle corner
  auto corner_ok = [&](int flag) {
    int p = -1;
    for (int x = 0; x < static_cast<int>(t.next.size()); ++x)
      if (t.next[x] == flag) { p = x; break; }
    return corner_convex(t.vec[flag], -t.vec[p]);
  };
  for (int flag : {c, c2, item.from, item.to})
    if (!corner_ok(flag))
      throw Error(Code::PointNotInterior, "chord does not lie in the open face interior",
                  {t.ids[item.from], t.ids[item.to]});
  return ItemTrace{{c, c2}, -1};
}

ItemTrace apply_split_face(Tables& t, const Surface& s, const SplitFace& item) {
  if (item.face_flag < 0 || item.face_flag >= s.flag_count())
    throw Error(Code::SchemaError, "split_face: no such flag");
  const int f = s.face_of(item.face_flag);
  const auto& flags = s.face_flags(f);
  const auto chart = s.face_chart(f);
  const int m = static_cast<int>(flags.size());
  for (int k = 0; k < m; ++k) {
    const Vec2& a = chart[k];
    const Vec2& b = chart[(k + 1) % m];
    if (cross(b - a, item.point - a) <= 0)
      throw Error(Code::PointNotInterior, "point is not strictly inside the face",
                  {t.ids[flags[0]]});
  }
  // spoke a_k: corner k -> center, b_k: center -> corner k
  std::vector<int> in(m), out(m);
  ItemTrace trace;
  for (int k = 0; k < m; ++k) {
    in[k] = t.add_flag(item.point - chart[k]);
    out[k] = t.add_flag(chart[k] - item.point);
    t.twin[in[k]] = out[k];
    t.twin[out[k]] = in[k];
    trace.new_flags.push_back(in[k]);
    trace.new_flags.push_back(out[k]);
  }
  for (int k = 0; k < m; ++k) {
    const int kk = (k + 1) % m;
    t.next[flags[k]] = in[kk];
    t.next[in[kk]] = out[k];
    t.next[out[k]] = flags[k];
  }
  t.status[out[0]] = VertexStatus{StatusKind::Filled, 0};
  trace.new_vertex_flag = out[0];
  return trace;
}

}  // namespace

RefineResult refine(const Surface& s, const Script& script) {
  Surface cur = s;
  std::vector<ItemTrace> traces;
  for (const auto& item : script.items) {
    Tables t(cur);
    ItemTrace tr;
    if (const auto* se = std::get_if<SplitEdge>(&item)) tr = apply_split_edge(t, cur, *se);
    else if (const auto* ic = std::get_if<InsertChord>(&item)) tr = apply_insert_chord(t, cur, *ic);
    else tr = apply_split_face(t, cur, std::get<SplitFace>(item));
    traces.push_back(std::move(tr));
    cur = t.build(cur.name());
  }
  return RefineResult{std::move(cur), std::move(traces)};
}

}  // namespace htqd
