#include "htqd/covering.hpp"

#include "htqd/isomorphy.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>

namespace htqd {

namespace {

// Resolves the per-source-face sign tau with vec(phi(e)) = tau * vec(e).
// Returns 0 on mismatch, recording an issue.
int face_sign(const Surface& src, const Surface& dst, const std::vector<int>& phi, int face,
              std::vector<Issue>* issues) {
  const auto& flags = src.face_flags(face);
  int tau = 0;
  for (int e : flags) {
    int s;
    if (dst.vec(phi[e]) == src.vec(e)) s = 1;
    else if (dst.vec(phi[e]) == -src.vec(e)) s = -1;
    else {
      if (issues)
        issues->push_back(Issue{Code::VectorMismatch,
                                "image vector is neither v nor -v",
                                {src.external_id(e)},
                                false});
      return 0;
    }
    if (tau == 0) tau = s;
    else if (tau != s) {
      if (issues)
        issues->push_back(Issue{Code::SignInconsistency,
                                "vector signs differ within one face",
                                {src.external_id(e)},
                                false});
      return 0;
    }
  }
  return tau;
}

// Vertex-local covering rules; returns the forced source status or nullopt
// (with an issue) when the winding is not allowed over the target status.
std::optional<VertexStatus> local_status(const VertexStatus& target, int winding,
                                         std::vector<Issue>* issues, long long id) {
  auto bad = [&](const std::string& msg) -> std::optional<VertexStatus> {
    if (issues) issues->push_back(Issue{Code::LocalDegreeViolation, msg, {id}, false});
    return std::nullopt;
  };
  switch (target.kind) {
    case StatusKind::Filled:
      if (winding != 1) return bad("covering ramifies over a filled vertex");
      return VertexStatus{StatusKind::Filled, 0};
    case StatusKind::Puncture:
      return VertexStatus{StatusKind::Puncture, 0};
    case StatusKind::Orbifold:
      if (target.order % winding != 0)
        return bad("local winding does not divide the orbifold order");
      if (winding == target.order) return VertexStatus{StatusKind::Filled, 0};
      return VertexStatus{StatusKind::Orbifold, target.order / winding};
  }
  return std::nullopt;
}

}  // namespace

CoveringOutcome validate_covering(const CoveringMap& map) {
  CoveringOutcome out;
  const Surface& src = map.source;
  const Surface& dst = map.target;
  auto err = [&](Code c, std::string msg, std::vector<long long> ids = {}) {
    out.issues.push_back(Issue{c, std::move(msg), std::move(ids), false});
  };

  const int n = src.flag_count();
  if (static_cast<int>(map.phi.size()) != n) {
    err(Code::StructureMismatch, "flag map is not total on the source");
    return out;
  }
  for (int e = 0; e < n; ++e) {
    if (map.phi[e] < 0 || map.phi[e] >= dst.flag_count()) {
      err(Code::StructureMismatch, "flag map image out of range", {src.external_id(e)});
      return out;
    }
  }
  bool equivariant = true;
  for (int e = 0; e < n; ++e) {
    if (map.phi[src.next(e)] != dst.next(map.phi[e]) ||
        map.phi[src.twin(e)] != dst.twin(map.phi[e])) {
      err(Code::NotEquivariant, "flag map does not commute with next/twin",
          {src.external_id(e)});
      equivariant = false;
    }
  }
  if (!equivariant) return out;

  for (int f = 0; f < src.face_count(); ++f) {
    const int sz_src = static_cast<int>(src.face_flags(f).size());
    const int sz_dst = static_cast<int>(dst.face_flags(dst.face_of(map.phi[src.face_flags(f)[0]])).size());
    if (sz_src != sz_dst) {
      err(Code::DegreeMismatch, "source face wraps around its image face",
          {src.external_id(src.face_flags(f)[0])});
      return out;
    }
    if (face_sign(src, dst, map.phi, f, &out.issues) == 0) return out;
  }

  std::vector<int> preimages(dst.face_count(), 0);
  for (int f = 0; f < src.face_count(); ++f)
    preimages[dst.face_of(map.phi[src.face_flags(f)[0]])]++;
  const int d = preimages.empty() ? 0 : preimages[0];
  for (int g = 0; g < dst.face_count(); ++g) {
    if (preimages[g] != d) {
      err(Code::DegreeMismatch, "target faces have unequal preimage counts");
      return out;
    }
  }
  if (area(src) != Rational(d) * area(dst)) {
    err(Code::DegreeMismatch, "area is not degree-multiplicative");
    return out;
  }
  out.report.degree = d;

  for (int v = 0; v < src.vertex_count(); ++v) {
    const int rep = src.vertex_flags(v)[0];
    const int tv = dst.vertex_of(map.phi[rep]);
    const int c_src = static_cast<int>(src.vertex_flags(v).size());
    const int c_dst = static_cast<int>(dst.vertex_flags(tv).size());
    if (c_src % c_dst != 0) {
      err(Code::LocalDegreeViolation, "corner orbit sizes are not proportional",
          {src.external_id(rep)});
      continue;
    }
    const int m = c_src / c_dst;
    if (src.angle_multiple(v) != m * dst.angle_multiple(tv)) {
      err(Code::LocalDegreeViolation, "cone angles are not winding-multiplicative",
          {src.external_id(rep)});
      continue;
    }
    auto forced = local_status(dst.status(tv), m, &out.issues, src.external_id(rep));
    if (!forced) continue;
    if (src.status(v) != *forced) {
      err(Code::LocalDegreeViolation,
          "source status " + status_str(src.status(v)) + " should be " + status_str(*forced),
          {src.external_id(rep)});
      continue;
    }
    out.report.local.push_back(LocalDegree{v, tv, m});
  }

  out.ok = out.issues.empty();
  return out;
}

CoveringReport require_covering(const CoveringMap& map) {
  CoveringOutcome out = validate_covering(map);
  if (!out.ok)
    throw Error(out.issues.empty() ? Code::InternalError : out.issues[0].code,
                out.issues.empty() ? "covering validation failed"
                                   : "covering validation failed: " + out.issues[0].message);
  return out.report;
}

std::vector<CoverComponent> construct_cover(const Surface& base, const MonodromySpec& spec) {
  const int n = base.flag_count();
  const int d = spec.degree;
  if (d < 1) throw Error(Code::SchemaError, "monodromy degree must be positive");
  for (int e = 0; e < n; ++e) {
    const int r = std::min(e, base.twin(e));
    auto it = spec.perms.find(r);
    if (it == spec.perms.end())
      throw Error(Code::SchemaError, "monodromy permutation missing for an edge orbit",
                  {base.external_id(r)});
    const auto& p = it->second;
    if (static_cast<int>(p.size()) != d)
      throw Error(Code::SchemaError, "permutation size differs from the degree",
                  {base.external_id(r)});
    std::vector<char> hit(d, 0);
    for (int v : p) {
      if (v < 0 || v >= d || hit[v])
        throw Error(Code::SchemaError, "not a permutation", {base.external_id(r)});
      hit[v] = 1;
    }
  }

  // total complex, sheet-major flag indices s*n + e
  std::vector<int> tnext(d * n), ttwin(d * n);
  std::vector<Vec2> tvec(d * n);
  std::vector<std::vector<int>> inverse;
  for (int e = 0; e < n; ++e) (void)e;
  std::map<int, std::vector<int>> inv_perms;
  for (const auto& [r, p] : spec.perms) {
    std::vector<int> inv(d);
    for (int i = 0; i < d; ++i) inv[p[i]] = i;
    inv_perms[r] = std::move(inv);
  }
  for (int s = 0; s < d; ++s) {
    for (int e = 0; e < n; ++e) {
      const int g = s * n + e;
      tnext[g] = s * n + base.next(e);
      const int r = std::min(e, base.twin(e));
      const int sheet = e == r ? spec.perms.at(r)[s] : inv_perms.at(r)[s];
      ttwin[g] = sheet * n + base.twin(e);
      tvec[g] = base.vec(e);
    }
  }

  // connected components over {next, twin}
  std::vector<int> comp(d * n, -1);
  int ncomp = 0;
  for (int g = 0; g < d * n; ++g) {
    if (comp[g] != -1) continue;
    std::vector<int> stack{g};
    comp[g] = ncomp;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : {tnext[x], ttwin[x]}) {
        if (comp[y] == -1) {
          comp[y] = ncomp;
          stack.push_back(y);
        }
      }
    }
    ++ncomp;
  }

  std::vector<CoverComponent> out;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> glob;
    for (int g = 0; g < d * n; ++g)
      if (comp[g] == c) glob.push_back(g);
    std::vector<int> local(d * n, -1);
    for (std::size_t k = 0; k < glob.size(); ++k) local[glob[k]] = static_cast<int>(k);

    SurfaceData data;
    data.next.resize(glob.size());
    data.twin.resize(glob.size());
    data.vec.resize(glob.size());
    std::vector<int> phi(glob.size());
    for (std::size_t k = 0; k < glob.size(); ++k) {
      data.next[k] = local[tnext[glob[k]]];
      data.twin[k] = local[ttwin[glob[k]]];
      data.vec[k] = tvec[glob[k]];
      phi[k] = glob[k] % n;
    }
    Surface plain(std::move(data));  // statuses still defaulted

    SurfaceData withstatus;
    withstatus.next.resize(glob.size());
    withstatus.twin.resize(glob.size());
    withstatus.vec.resize(glob.size());
    withstatus.status_by_flag.assign(glob.size(), std::nullopt);
    for (int k = 0; k < static_cast<int>(glob.size()); ++k) {
      withstatus.next[k] = plain.next(k);
      withstatus.twin[k] = plain.twin(k);
      withstatus.vec[k] = plain.vec(k);
    }
    for (int v = 0; v < plain.vertex_count(); ++v) {
      const int rep = plain.vertex_flags(v)[0];
      const int tv = base.vertex_of(phi[rep]);
      const int m = static_cast<int>(plain.vertex_flags(v).size()) /
                    static_cast<int>(base.vertex_flags(tv).size());
      auto forced = local_status(base.status(tv), m, nullptr, base.external_id(phi[rep]));
      if (!forced)
        throw Error(Code::LocalDegreeViolation,
                    "monodromy ramifies where the base statuses forbid it",
                    {base.external_id(phi[rep])});
      withstatus.status_by_flag[rep] = *forced;
    }
    Surface surf(std::move(withstatus));
    CoveringMap cmap{surf, base, phi};
    require_covering(cmap);
    out.push_back(CoverComponent{std::move(surf), std::move(cmap)});
  }
  return out;
}

SymmetryResult is_symmetric(const Surface& qt, const CoveringMap& map) {
  SymmetryResult res;
  const Surface& src = map.source;
  const Surface& dst = map.target;
  if (qt.flag_count() != src.flag_count()) {
    res.issues.push_back(Issue{Code::StructureMismatch, "flag counts differ", {}, false});
    return res;
  }
  for (int e = 0; e < qt.flag_count(); ++e) {
    if (qt.next(e) != src.next(e) || qt.twin(e) != src.twin(e)) {
      res.issues.push_back(
          Issue{Code::StructureMismatch, "combinatorics differ from the covering source",
                {qt.external_id(e)}, false});
      return res;
    }
  }

  // reference preimage per target face: the one containing the smallest flag
  std::vector<int> ref_flag(dst.face_count(), -1);
  for (int e = 0; e < src.flag_count(); ++e) {
    int g = dst.face_of(map.phi[e]);
    if (ref_flag[g] == -1) ref_flag[g] = e;
  }
  std::vector<Vec2> w(dst.flag_count(), Vec2{0, 0});
  for (int g = 0; g < dst.face_count(); ++g) {
    int e = ref_flag[g];
    const int sz = static_cast<int>(dst.face_flags(g).size());
    for (int k = 0; k < sz; ++k) {
      w[map.phi[e]] = qt.vec(e);
      e = src.next(e);
    }
  }

  SurfaceData data;
  const int m = dst.flag_count();
  data.next.resize(m);
  data.twin.resize(m);
  data.vec = std::move(w);
  data.status_by_flag.assign(m, std::nullopt);
  for (int t = 0; t < m; ++t) {
    data.next[t] = dst.next(t);
    data.twin[t] = dst.twin(t);
  }
  for (int v = 0; v < dst.vertex_count(); ++v)
    data.status_by_flag[dst.vertex_flags(v)[0]] = dst.status(v);
  Surface witness(std::move(data));

  auto wv = validate(witness);
  if (!wv.ok) {
    res.issues.push_back(Issue{Code::VectorMismatch,
                               "push-forward vectors do not form a valid surface", {}, false});
    for (auto& i : wv.issues) res.issues.push_back(i);
    return res;
  }
  CoveringMap down{qt, witness, map.phi};
  auto cv = validate_covering(down);
  if (!cv.ok) {
    res.issues = cv.issues;
    return res;
  }
  res.symmetric = true;
  res.pushforward = std::move(witness);
  return res;
}

std::vector<FiberComponent> fiber_product(const CoveringMap& p1, const CoveringMap& p2) {
  if (!(p1.target == p2.target))
    throw Error(Code::TargetMismatch, "fiber product requires a common target surface");
  const Surface& s1 = p1.source;
  const Surface& s2 = p2.source;
  const Surface& base = p1.target;

  const int n1 = s1.flag_count(), n2 = s2.flag_count();
  std::vector<int> pair_index(n1 * n2, -1);
  std::vector<std::pair<int, int>> pairs;
  for (int e1 = 0; e1 < n1; ++e1)
    for (int e2 = 0; e2 < n2; ++e2)
      if (p1.phi[e1] == p2.phi[e2]) {
        pair_index[e1 * n2 + e2] = static_cast<int>(pairs.size());
        pairs.emplace_back(e1, e2);
      }

  const int N = static_cast<int>(pairs.size());
  std::vector<int> tnext(N), ttwin(N);
  std::vector<Vec2> tvec(N);
  for (int k = 0; k < N; ++k) {
    auto [e1, e2] = pairs[k];
    tnext[k] = pair_index[s1.next(e1) * n2 + s2.next(e2)];
    ttwin[k] = pair_index[s1.twin(e1) * n2 + s2.twin(e2)];
    tvec[k] = s1.vec(e1);
  }

  std::vector<int> comp(N, -1);
  int ncomp = 0;
  for (int k = 0; k < N; ++k) {
    if (comp[k] != -1) continue;
    std::vector<int> stack{k};
    comp[k] = ncomp;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : {tnext[x], ttwin[x]})
        if (comp[y] == -1) {
          comp[y] = ncomp;
          stack.push_back(y);
        }
    }
    ++ncomp;
  }

  std::vector<FiberComponent> out;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> glob;
    for (int k = 0; k < N; ++k)
      if (comp[k] == c) glob.push_back(k);
    std::vector<int> local(N, -1);
    for (std::size_t k = 0; k < glob.size(); ++k) local[glob[k]] = static_cast<int>(k);

    SurfaceData data;
    data.next.resize(glob.size());
    data.twin.resize(glob.size());
    data.vec.resize(glob.size());
    std::vector<int> f1(glob.size()), f2(glob.size());
    for (std::size_t k = 0; k < glob.size(); ++k) {
      data.next[k] = local[tnext[glob[k]]];
      data.twin[k] = local[ttwin[glob[k]]];
      data.vec[k] = tvec[glob[k]];
      f1[k] = pairs[glob[k]].first;
      f2[k] = pairs[glob[k]].second;
    }
    Surface plain(std::move(data));

    SurfaceData withstatus;
    withstatus.next.resize(glob.size());
    withstatus.twin.resize(glob.size());
    withstatus.vec.resize(glob.size());
    withstatus.status_by_flag.assign(glob.size(), std::nullopt);
    for (int k = 0; k < static_cast<int>(glob.size()); ++k) {
      withstatus.next[k] = plain.next(k);
      withstatus.twin[k] = plain.twin(k);
      withstatus.vec[k] = plain.vec(k);
    }
    for (int v = 0; v < plain.vertex_count(); ++v) {
      const int rep = plain.vertex_flags(v)[0];
      const int bv = base.vertex_of(p1.phi[f1[rep]]);
      const int l = static_cast<int>(plain.vertex_flags(v).size()) /
                    static_cast<int>(base.vertex_flags(bv).size());
      auto forced = local_status(base.status(bv), l, nullptr, 0);
      if (!forced)
        throw Error(Code::InternalError, "fiber product produced an illegal local winding");
      withstatus.status_by_flag[rep] = *forced;
    }
    Surface surf(std::move(withstatus));
    CoveringMap q1{surf, s1, f1}, q2{surf, s2, f2};
    require_covering(q1);
    require_covering(q2);
    out.push_back(FiberComponent{std::move(surf), std::move(q1), std::move(q2)});
  }
  return out;
}

std::optional<std::vector<int>> propagate_flag_map(const Surface& src, const Surface& dst,
                                                   int anchor_src, int anchor_dst) {
  std::vector<int> phi(src.flag_count(), -1);
  std::deque<int> work;
  phi[anchor_src] = anchor_dst;
  work.push_back(anchor_src);
  while (!work.empty()) {
    const int e = work.front();
    work.pop_front();
    const std::pair<int, int> steps[2] = {{src.next(e), dst.next(phi[e])},
                                          {src.twin(e), dst.twin(phi[e])}};
    for (auto [se, de] : steps) {
      if (phi[se] == -1) {
        phi[se] = de;
        work.push_back(se);
      } else if (phi[se] != de) {
        return std::nullopt;
      }
    }
  }
  for (int e = 0; e < src.flag_count(); ++e)
    if (phi[e] == -1) return std::nullopt;  // source not connected
  return phi;
}

std::vector<CoveringMap> find_coverings(const Surface& q1, const Surface& q2) {
  std::vector<CoveringMap> out;
  const Rational ratio = area(q1) / area(q2);
  if (denominator(ratio) != 1 || ratio < 1) return out;
  for (int t = 0; t < q2.flag_count(); ++t) {
    auto phi = propagate_flag_map(q1, q2, 0, t);
    if (!phi) continue;
    CoveringMap cand{q1, q2, *phi};
    if (validate_covering(cand).ok) out.push_back(std::move(cand));
  }
  return out;
}

int enumeration_degree_cap() {
  if (const char* env = std::getenv("QDC_MAX_DEGREE")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return 6;
}

std::vector<CoverComponent> enumerate_covers(const Surface& base, int degree) {
  if (degree < 1) throw Error(Code::SchemaError, "cover degree must be positive");
  if (degree > enumeration_degree_cap())
    throw Error(Code::SchemaError, "cover degree exceeds the enumeration cap");

  std::vector<int> edge_reps;
  for (int e = 0; e < base.flag_count(); ++e)
    if (e < base.twin(e)) edge_reps.push_back(e);

  std::vector<std::vector<int>> all_perms;
  {
    std::vector<int> p(degree);
    std::iota(p.begin(), p.end(), 0);
    do all_perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }

  std::map<std::string, CoverComponent> dedup;
  std::vector<std::size_t> choice(edge_reps.size(), 0);
  while (true) {
    MonodromySpec spec;
    spec.degree = degree;
    for (std::size_t k = 0; k < edge_reps.size(); ++k)
      spec.perms[edge_reps[k]] = all_perms[choice[k]];

    bool usable = true;
    // vertex rules from cycle structure before building anything
    for (int v = 0; v < base.vertex_count() && usable; ++v) {
      std::vector<int> sheet(degree);
      std::iota(sheet.begin(), sheet.end(), 0);
      for (int e : base.vertex_flags(v)) {
        // around(e) crosses the edge of e itself
        const int r = std::min(e, base.twin(e));
        const auto& p = spec.perms.at(r);
        if (e == r)
          for (int& s : sheet) s = p[s];
        else
          for (int& s : sheet) s = static_cast<int>(std::find(p.begin(), p.end(), s) - p.begin());
      }
      // cycle lengths of the vertex monodromy are the local windings
      std::vector<char> seen(degree, 0);
      for (int s0 = 0; s0 < degree && usable; ++s0) {
        if (seen[s0]) continue;
        int len = 0, s = s0;
        do {
          seen[s] = 1;
          s = sheet[s];
          ++len;
        } while (s != s0);
        if (!local_status(base.status(v), len, nullptr, 0)) usable = false;
      }
    }

    if (usable) {
      auto comps = construct_cover(base, spec);
      if (comps.size() == 1) {
        auto cf = canonical_form(comps[0].surface);
        dedup.emplace(cf.bytes, std::move(comps[0]));
      }
    }

    std::size_t k = 0;
    for (; k < choice.size(); ++k) {
      if (++choice[k] < all_perms.size()) break;
      choice[k] = 0;
    }
    if (k == choice.size()) break;
    if (edge_reps.empty()) break;
  }

  std::vector<CoverComponent> out;
  for (auto& [bytes, comp] : dedup) out.push_back(std::move(comp));
  return out;
}

Script pull_back_script(const CoveringMap& map, const ScriptItem& item) {
  const Surface& src = map.source;
  const Surface& dst = map.target;
  Script out;
  if (const auto* se = std::get_if<SplitEdge>(&item)) {
    for (int e = 0; e < src.flag_count(); ++e)
      if (map.phi[e] == se->edge) out.items.push_back(SplitEdge{e, se->t});
  } else if (const auto* ic = std::get_if<InsertChord>(&item)) {
    for (int f = 0; f < src.face_count(); ++f) {
      if (dst.face_of(map.phi[src.face_flags(f)[0]]) != dst.face_of(ic->from)) continue;
      int u = -1, v = -1;
      for (int e : src.face_flags(f)) {
        if (map.phi[e] == ic->from) u = e;
        if (map.phi[e] == ic->to) v = e;
      }
      if (u < 0 || v < 0) throw Error(Code::InternalError, "chord pullback lost a corner");
      out.items.push_back(InsertChord{u, v});
    }
  } else {
    const auto& sf = std::get<SplitFace>(item);
    const int g = dst.face_of(sf.face_flag);
    const auto gchart = dst.face_chart(g);
    const auto& gflags = dst.face_flags(g);
    auto pos_in_g = [&](int flag) {
      for (std::size_t k = 0; k < gflags.size(); ++k)
        if (gflags[k] == flag) return gchart[k];
      throw Error(Code::InternalError, "flag not on target face");
    };
    for (int f = 0; f < src.face_count(); ++f) {
      const int anchor = src.face_flags(f)[0];
      if (dst.face_of(map.phi[anchor]) != g) continue;
      int tau;
      if (dst.vec(map.phi[anchor]) == src.vec(anchor)) tau = 1;
      else tau = -1;
      const Vec2 shift = pos_in_g(map.phi[anchor]);
      // chart map F -> G is z -> tau*z + shift, so preimage is tau*(p - shift)
      const Vec2 local = Rational(tau) * (sf.point - shift);
      out.items.push_back(SplitFace{anchor, local});
    }
  }
  return out;
}

CoveringMap refine_cover(const CoveringMap& map, const Script& target_script) {
  CoveringMap cur = map;
  for (const auto& item : target_script.items) {
    Script tgt_one{{item}};
    Script src_items = pull_back_script(cur, item);
    Surface new_target = refine(cur.target, tgt_one).surface;
    Surface new_source = refine(cur.source, src_items).surface;
    auto phi = propagate_flag_map(new_source, new_target, 0, cur.phi[0]);
    if (!phi) throw Error(Code::InternalError, "refined covering failed to propagate");
    CoveringMap next_map{std::move(new_source), std::move(new_target), std::move(*phi)};
    require_covering(next_map);
    cur = std::move(next_map);
  }
  return cur;
}

}  // namespace htqd
