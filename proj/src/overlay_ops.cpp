#include <algorithm>
#include <map>
#include <set>

#include "nscorn/error.hpp"
#include "nscorn/overlay.hpp"

namespace nscorn {

namespace {

int dart_of_edge_with_face(const CombinatorialMap& m, int e, int f) {
  Dart d = m.edge_dart(e);
  if (m.face_of(d) == f) return d;
  if (m.face_of(m.alpha(d)) == f) return m.alpha(d);
  fail("NotTransverse", "curve crosses an edge that does not bound its face");
}

int other_face(const CombinatorialMap& m, int e, int f) {
  return m.face_of(m.alpha(dart_of_edge_with_face(m, e, f)));
}

// Event indices passed while walking curve c forward from crossing position
// pu to crossing position pv. Closed curves wrap (pu after pv on a shared
// segment means a full loop); arcs must go forward.
std::vector<int> events_between(const Overlay& o, int c, int pu, int pv) {
  const int ne = o.event_count(c);
  int su = o.crossing_seg(c, pu), sv = o.crossing_seg(c, pv);
  std::vector<int> out;
  if (o.closed(c)) {
    if (su == sv && pu < pv) return out;
    int k = (su + 1) % ne;
    while (true) {
      out.push_back(k);
      if (k == sv) break;
      k = (k + 1) % ne;
    }
    return out;
  }
  require(su < sv || (su == sv && pu < pv), "InvariantViolation",
          "arc positions out of traversal order");
  for (int k = su; k < sv; ++k) out.push_back(k);
  return out;
}

struct DSU {
  std::vector<int> p;
  explicit DSU(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

struct Bigon {
  int a = -1, b = -1;
  std::set<int> region;
  std::vector<Dart> rim;
  int i1 = -1, i2 = -1;  // transition slots: rim[i] -> rim[i+1] switches curve
};

// Degree-1 and degree-3 vertices made of curve pieces only: free arc ends and
// arc-on-curve junctions. Regions swallowing one are not plain bigons.
std::vector<int> slit_vertices(const Overlay& o) {
  const CombinatorialMap& rm = o.refined();
  std::vector<int> out;
  for (int v = 0; v < rm.vertex_count(); ++v) {
    const auto& darts = rm.vertex_darts(v);
    if (darts.size() != 1 && darts.size() != 3) continue;
    bool all_curve = true;
    for (Dart d : darts)
      if (o.dart_info(d).curve < 0) all_curve = false;
    if (all_curve) out.push_back(v);
  }
  return out;
}

}  // namespace

Overlay reduce_to_minimal_position(Overlay o) {
  const int cap = static_cast<int>(o.crossings_.size()) + 16;
  for (int iter = 0; iter <= cap; ++iter) {
    const CombinatorialMap& rm = o.refined();
    const int nc = o.curve_count();

    std::map<int, int> xid;  // refined vertex -> crossing index
    for (int i = 0; i < static_cast<int>(o.crossings_.size()); ++i)
      xid[o.crossings_[i].vertex] = i;
    std::vector<int> slits = slit_vertices(o);

    bool have = false;
    Bigon best;
    std::tuple<int, int, int, int> best_key;

    for (int a = 0; a < nc; ++a)
      for (int b = a + 1; b < nc; ++b) {
        if (o.crossing_count(a, b) == 0) continue;

        DSU dsu(rm.face_count());
        for (int e = 0; e < rm.edge_count(); ++e) {
          Dart d = rm.edge_dart(e);
          int cu = o.dart_info(d).curve;
          if (cu == a || cu == b) continue;
          dsu.unite(rm.face_of(d), rm.face_of(rm.alpha(d)));
        }
        std::map<int, std::set<int>> regions;
        for (int f = 0; f < rm.face_count(); ++f) regions[dsu.find(f)].insert(f);

        for (auto& [root, R] : regions) {
          bool marked = false;
          for (int f : R)
            if (rm.face(f).boundary) marked = true;
          if (marked) continue;
          for (int v : slits) {
            bool inside = true;
            for (Dart d : rm.vertex_darts(v))
              if (!R.count(rm.face_of(d)) || !R.count(rm.face_of(rm.alpha(d)))) inside = false;
            if (inside) marked = true;
          }
          if (marked) continue;

          SubsurfaceShape shape = face_union_shape(rm, R);
          if (!shape.connected || shape.chi != 1 || shape.boundary_circuits != 1 ||
              shape.punctures != 0)
            continue;

          Dart start = -1;
          for (Dart d = 0; d < rm.dart_count() && start < 0; ++d)
            if (R.count(rm.face_of(d)) && !R.count(rm.face_of(rm.alpha(d)))) start = d;
          if (start < 0) continue;

          std::vector<Dart> rim;
          Dart t = start;
          bool ok = true;
          do {
            rim.push_back(t);
            if (static_cast<int>(rim.size()) > rm.dart_count()) {
              ok = false;
              break;
            }
            Dart n = rm.phi(t);
            while (R.count(rm.face_of(rm.alpha(n)))) n = rm.phi(rm.alpha(n));
            t = n;
          } while (t != start);
          if (!ok) continue;

          for (Dart d : rim) {
            int cu = o.dart_info(d).curve;
            if (cu != a && cu != b) ok = false;
          }
          if (!ok) continue;

          const int n = static_cast<int>(rim.size());
          std::vector<int> trans;
          for (int i = 0; i < n; ++i)
            if (o.dart_info(rim[i]).curve != o.dart_info(rim[(i + 1) % n]).curve)
              trans.push_back(i);
          if (trans.size() != 2) continue;
          int v1 = rm.vertex_of(rim[(trans[0] + 1) % n]);
          int v2 = rm.vertex_of(rim[(trans[1] + 1) % n]);
          if (v1 == v2) continue;
          bool corners_ok = true;
          for (int v : {v1, v2}) {
            auto it = xid.find(v);
            if (it == xid.end() || o.crossings_[it->second].a != a ||
                o.crossings_[it->second].b != b)
              corners_ok = false;
          }
          if (!corners_ok) continue;

          std::tuple<int, int, int, int> key{static_cast<int>(R.size()), a, b,
                                             std::min(v1, v2)};
          if (!have || key < best_key) {
            have = true;
            best_key = key;
            best = Bigon{a, b, R, rim, trans[0], trans[1]};
          }
        }
      }

    if (!have) {
      o.reduced_ = true;
      return o;
    }

    // Reroute the higher-index curve along the other's rim run, pushed just
    // inside the region.
    const int x = best.a, y = best.b;
    const int n = static_cast<int>(best.rim.size());
    auto run = [&](int from_slot, int to_slot) {
      std::vector<Dart> r;
      for (int i = (from_slot + 1) % n; ; i = (i + 1) % n) {
        r.push_back(best.rim[i]);
        if (i == to_slot) break;
      }
      return r;
    };
    std::vector<Dart> run1 = run(best.i1, best.i2), run2 = run(best.i2, best.i1);
    std::vector<Dart>&yrun = o.dart_info(run1[0]).curve == y ? run1 : run2;
    std::vector<Dart>&xrun = o.dart_info(run1[0]).curve == y ? run2 : run1;

    for (const CurveSpec& w : o.specs_)
      for (const CurveSpec::Endpoint* ep : {&w.start, &w.finish})
        require(w.closed || ep->kind != CurveSpec::Endpoint::OnCurve || ep->host != y,
                "InvariantViolation", "cannot reroute a curve that anchors an arc");

    int vS_y = rm.vertex_of(yrun.front());
    int vE_y = rm.vertex_of(rm.alpha(yrun.back()));
    bool y_fwd = o.dart_info(yrun.front()).forward;
    bool x_fwd = o.dart_info(xrun.front()).forward;
    int vS_x = rm.vertex_of(xrun.front());
    int vE_x = rm.vertex_of(rm.alpha(xrun.back()));
    require(vS_x == vE_y && vE_x == vS_y, "InvariantViolation", "rim runs do not chain");

    auto pos_on = [&](int curve, int vertex) {
      const Overlay::Crossing& cr = o.crossings_[xid.at(vertex)];
      return curve == cr.a ? cr.pos_a : cr.pos_b;
    };

    int posStart = y_fwd ? pos_on(y, vS_y) : pos_on(y, vE_y);
    int posEnd = y_fwd ? pos_on(y, vE_y) : pos_on(y, vS_y);
    std::vector<int> removed = events_between(o, y, posStart, posEnd);

    std::vector<int> L_rim =
        x_fwd ? events_between(o, x, pos_on(x, vS_x), pos_on(x, vE_x))
              : events_between(o, x, pos_on(x, vE_x), pos_on(x, vS_x));
    if (!x_fwd) std::reverse(L_rim.begin(), L_rim.end());
    std::vector<int> repl_idx = L_rim;
    if (y_fwd) std::reverse(repl_idx.begin(), repl_idx.end());
    int v_start = y_fwd ? vS_y : vE_y;

    // Working rank tables: everything except the events being deleted.
    std::set<int> removed_set(removed.begin(), removed.end());
    std::map<int, std::vector<Rank>> ranks;
    for (int c = 0; c < nc; ++c)
      for (int k = 0; k < o.event_count(c); ++k) {
        if (c == y && removed_set.count(k)) continue;
        ranks[o.event(c, k).first].push_back(o.event(c, k).second);
      }
    for (auto& [e, lst] : ranks) std::sort(lst.begin(), lst.end());

    // The refined vertex where x crosses its event k.
    std::map<int, int> seg_first_vertex;
    for (Dart d : o.walk(x)) {
      int s = o.dart_info(d).seg;
      if (!seg_first_vertex.count(s)) seg_first_vertex[s] = rm.vertex_of(d);
    }
    auto event_vertex = [&](int k) {
      return seg_first_vertex.at(o.closed(x) ? k : k + 1);
    };

    std::vector<std::pair<int, Rank>> replacement;
    for (int k : repl_idx) {
      auto [e, r] = o.event(x, k);
      int ve = event_vertex(k);
      Dart up = -1;
      for (Dart d : rm.vertex_darts(ve)) {
        const Overlay::DartInfo& di = o.dart_info(d);
        if (di.curve < 0 && di.forward) up = d;
      }
      require(up >= 0, "InvariantViolation", "edge crossing lost its skeleton strand");
      bool side_up =
          best.region.count(rm.face_of(up)) || best.region.count(rm.face_of(rm.alpha(up)));
      auto& lst = ranks[e];
      // The rerouted strand hugs x on the side away from the vanished region.
      Rank nb = side_up ? Rank(0) : Rank(1);
      if (side_up) {
        auto it = std::lower_bound(lst.begin(), lst.end(), r);
        if (it != lst.begin()) nb = *(it - 1);
      } else {
        auto it = std::upper_bound(lst.begin(), lst.end(), r);
        if (it != lst.end()) nb = *it;
      }
      Rank nr = (r + nb) / 2;
      lst.insert(std::upper_bound(lst.begin(), lst.end(), nr), nr);
      replacement.push_back({e, nr});
    }

    const CombinatorialMap& base = o.base_;
    const int ne = o.event_count(y);
    std::vector<std::pair<int, Rank>> events;
    int start_face = -1;
    auto corner_start_face = [&]() {
      int f_corner = o.base_face_of(rm.face_of(rm.vertex_darts(v_start)[0]));
      return base.face_key(other_face(base, replacement[0].first, f_corner));
    };
    if (o.closed(y)) {
      int s0 = (o.crossing_seg(y, posEnd) + 1) % ne;
      events = replacement;
      for (int i = 0, k = s0; i < ne - static_cast<int>(removed.size());
           ++i, k = (k + 1) % ne)
        events.push_back(o.event(y, k));
      start_face = replacement.empty() ? base.face_key(o.event_home(y, s0))
                                       : corner_start_face();
    } else {
      int su = o.crossing_seg(y, posStart), sv = o.crossing_seg(y, posEnd);
      for (int k = 0; k < su; ++k) events.push_back(o.event(y, k));
      events.insert(events.end(), replacement.begin(), replacement.end());
      for (int k = sv; k < ne; ++k) events.push_back(o.event(y, k));
      if (su > 0)
        start_face = base.face_key(o.event_home(y, 0));
      else if (!replacement.empty())
        start_face = corner_start_face();
      else
        start_face = base.face_key(o.event_home(y, sv));
    }
    require(!events.empty(), "InvariantViolation", "reroute erased the whole curve");

    std::vector<CurveSpec> specs = o.specs_;
    specs[y].events = std::move(events);
    specs[y].start_face = start_face;
    o = Overlay::build(o.base_, std::move(specs));
  }
  fail("InvariantViolation", "bigon removal failed to terminate");
}

int intersection_number(const Overlay& o, int a, int b) {
  require(o.is_reduced(), "NotReduced", "intersection number needs a reduced overlay");
  return o.crossing_count(a, b);
}

bool is_isotopic(const Overlay& o, int a, int b) {
  require(o.is_reduced(), "NotReduced", "isotopy test needs a reduced overlay");
  require(o.closed(a) && o.closed(b), "InvariantViolation", "isotopy compares closed curves");
  if (a == b) return true;
  if (o.crossing_count(a, b) > 0) return false;
  if (o.curve_class(a) != o.curve_class(b)) return false;

  const CombinatorialMap& rm = o.refined();
  CutResult first = cut_along_cycle(rm, Walk{o.walk(a)});
  for (const CutComponent& comp : first.components) {
    if (comp.from_parent[o.walk(b)[0]] < 0) continue;
    std::vector<Dart> wb;
    for (Dart d : o.walk(b)) {
      Dart t = comp.from_parent[d];
      require(t >= 0, "InvariantViolation", "disjoint curve was split by a cut");
      wb.push_back(t);
    }
    CutResult second = cut_along_cycle(comp.map, Walk{wb});
    for (const CutComponent& sub : second.components) {
      if (sub.genus != 0 || sub.punctures != 0 || sub.boundary_faces != 2) continue;
      if (sub.new_boundary_keys.size() != 1) continue;
      std::set<int> bk = sub.map.boundary_keys();
      bk.erase(sub.new_boundary_keys[0]);
      if (bk.size() != 1) continue;
      int other_key = *bk.begin();
      // The second boundary circle must be one of the faces the first cut
      // created, not a boundary inherited from the original surface.
      for (int ka : comp.new_boundary_keys) {
        int fa = comp.map.face_by_key(ka);
        for (Dart d : comp.map.face(fa).darts) {
          Dart t = sub.from_parent[d];
          if (t < 0) continue;
          if (sub.map.face_of(t) == sub.map.face_by_key(other_key)) return true;
          break;
        }
      }
    }
    return false;
  }
  fail("InvariantViolation", "curve lost by the cut");
}

bool ns_edge(const Overlay& o, int a, int b) {
  require(o.is_reduced(), "NotReduced", "edge test needs a reduced overlay");
  require(o.closed(a) && o.closed(b), "InvariantViolation", "edge test compares closed curves");
  int g = o.base().genus();
  require(g >= 1, "InvariantViolation", "curve graph needs positive genus");
  if (o.curve_separating(a) || o.curve_separating(b))
    fail("SeparatingInput", "both curves must be nonseparating");
  if (is_isotopic(o, a, b)) fail("IsotopicInput", "curves are isotopic");
  int i = intersection_number(o, a, b);
  return g == 1 ? i <= 1 : i == 0;
}

SubArc subarc(const Overlay& o, int c, int p, int q) {
  require(o.closed(c), "InvariantViolation", "subarc walks a closed curve");
  const auto& alongc = o.crossings_along(c);
  auto pos_of = [&](int v) {
    for (int i = 0; i < static_cast<int>(alongc.size()); ++i)
      if (o.crossings()[alongc[i]].vertex == v) return i;
    fail("VertexNotOnCurve", "vertex is not a crossing on the curve");
  };
  int fp = pos_of(p), tq = pos_of(q);
  if (fp == tq) fail("DegenerateEndpoints", "subarc endpoints coincide");
  SubArc res;
  res.curve = c;
  res.from_pos = fp;
  res.to_pos = tq;
  const auto& w = o.walk(c);
  const int n = static_cast<int>(w.size());
  for (int k = o.walk_offset(c, fp); k != o.walk_offset(c, tq); k = (k + 1) % n)
    res.darts.push_back(w[k]);
  return res;
}

namespace {

std::vector<std::pair<int, Rank>> displace(const Overlay& o, int c,
                                           const std::vector<int>& idx, int nonce) {
  require(nonce >= 1, "InvariantViolation", "displacement nonce must be positive");
  std::map<int, std::vector<Rank>> ranks;
  for (int w = 0; w < o.curve_count(); ++w)
    for (int k = 0; k < o.event_count(w); ++k)
      ranks[o.event(w, k).first].push_back(o.event(w, k).second);
  for (auto& [e, lst] : ranks) std::sort(lst.begin(), lst.end());
  Rank p3 = 1;
  for (int i = 0; i < nonce; ++i) p3 *= 3;

  std::vector<std::pair<int, Rank>> out;
  for (int k : idx) {
    auto [e, r] = o.event(c, k);
    // The curve's left side points up the edge exactly when the dart bounding
    // the entered face runs the edge's own way.
    Dart ak = dart_of_edge_with_face(o.base(), e, o.event_home(c, k));
    bool up = ak == o.base().edge_dart(e);
    const auto& lst = ranks.at(e);
    Rank nb = up ? Rank(1) : Rank(0);
    if (up) {
      auto it = std::upper_bound(lst.begin(), lst.end(), r);
      if (it != lst.end()) nb = *it;
    } else {
      auto it = std::lower_bound(lst.begin(), lst.end(), r);
      if (it != lst.begin()) nb = *(it - 1);
    }
    out.push_back({e, r + (nb - r) / p3});
  }
  return out;
}

}  // namespace

std::vector<std::pair<int, Rank>> displaced_events(const Overlay& o, int c, int from_pos,
                                                   int to_pos, int nonce) {
  return displace(o, c, events_between(o, c, from_pos, to_pos), nonce);
}

std::vector<std::pair<int, Rank>> displaced_events_all(const Overlay& o, int c, int nonce) {
  std::vector<int> idx(o.event_count(c));
  for (int k = 0; k < static_cast<int>(idx.size()); ++k) idx[k] = k;
  return displace(o, c, idx, nonce);
}

std::vector<int> event_indices_between(const Overlay& o, int c, int from_pos, int to_pos) {
  return events_between(o, c, from_pos, to_pos);
}

std::vector<std::pair<int, Rank>> displaced_event_list(const Overlay& o, int c,
                                                       const std::vector<int>& indices,
                                                       int nonce) {
  return displace(o, c, indices, nonce);
}

CurveSpec left_pushoff(const CombinatorialMap& m, const Walk& w, const std::string& name,
                       long denom) {
  // denom 2 would put both ends of a doubly-crossed edge at rank 1/2.
  require(denom >= 3, "InvariantViolation", "push-off denominator must be at least 3");
  require_simple_cycle(m, w);
  const auto& wd = w.darts;
  const int L = static_cast<int>(wd.size());

  CurveSpec sp;
  sp.name = name;
  sp.closed = true;
  const Rank eps(1, denom);
  int first_face = -1;
  for (int i = 0; i < L; ++i) {
    Dart g_out = wd[i];
    Dart g_in = m.alpha(wd[(i + L - 1) % L]);
    const auto& rot = m.vertex_darts(m.vertex_of(g_out));
    const int deg = static_cast<int>(rot.size());
    int io = -1;
    for (int j = 0; j < deg; ++j)
      if (rot[j] == g_out) io = j;
    require(io >= 0, "InvariantViolation", "walk dart missing from its vertex rotation");
    // Germs on the walk's left, counterclockwise from the outgoing dart. The
    // push-off rounds the vertex the other way, so it crosses them in
    // reverse, and lands in the face right of each germ it crosses.
    std::vector<Dart> left;
    for (int j = (io + 1) % deg; rot[j] != g_in; j = (j + 1) % deg) left.push_back(rot[j]);
    for (int j = static_cast<int>(left.size()) - 1; j >= 0; --j) {
      Dart h = left[j];
      int e = m.edge_of(h);
      Rank r = (h == m.edge_dart(e)) ? eps : Rank(1) - eps;
      sp.events.push_back({e, r});
      if (first_face < 0) first_face = m.face_of(h);
    }
  }
  require(!sp.events.empty(), "NotTransverse", "push-off crosses no edges");
  sp.start_face = m.face_key(first_face);
  return sp;
}

int algebraic_intersection(const Overlay& o, int a, int b) {
  require(a != b, "NotTransverse", "algebraic intersection needs two distinct curves");
  require(a >= 0 && a < o.curve_count() && b >= 0 && b < o.curve_count(), "NotTransverse",
          "curve index out of range");
  require(o.closed(a) && o.closed(b), "NotTransverse",
          "algebraic intersection is defined for closed curves");
  const CombinatorialMap& rm = o.refined();
  auto out_germ = [&](int c, int pos) { return o.walk(c)[o.walk_offset(c, pos)]; };
  auto in_germ = [&](int c, int pos) {
    const auto& w = o.walk(c);
    const int n = static_cast<int>(w.size());
    return rm.alpha(w[(o.walk_offset(c, pos) + n - 1) % n]);
  };
  const int lo = std::min(a, b), hi = std::max(a, b);
  int total = 0;
  for (const auto& cr : o.crossings()) {
    if (cr.a != lo || cr.b != hi) continue;
    int pa = (a == lo) ? cr.pos_a : cr.pos_b;
    int pb = (a == lo) ? cr.pos_b : cr.pos_a;
    Dart aout = out_germ(a, pa), ain = in_germ(a, pa);
    Dart bout = out_germ(b, pb);
    // Positive crossing: the rotation reads a-out, b-out, a-in, b-in
    // counterclockwise (the second tangent is the first turned left).
    const auto& rot = rm.vertex_darts(cr.vertex);
    const int deg = static_cast<int>(rot.size());
    int ia = -1;
    for (int j = 0; j < deg; ++j)
      if (rot[j] == aout) ia = j;
    bool positive = false;
    for (int j = 1; j < deg; ++j) {
      Dart g = rot[(ia + j) % deg];
      if (g == bout) {
        positive = true;
        break;
      }
      if (g == ain) break;
    }
    total += positive ? 1 : -1;
  }
  return total;
}

namespace {

// Splits an even-degree edge set into vertex-simple cycles. Traces from the
// lowest edge, always leaving by the lowest unused edge, and peels off a
// cycle whenever the open path returns to a vertex it already holds.
std::vector<Walk> resolve_cycles(const CombinatorialMap& m, const std::set<int>& edges) {
  std::set<int> left(edges);
  std::vector<Walk> out;
  while (!left.empty()) {
    const int e0 = *left.begin();
    left.erase(e0);
    std::vector<Dart> trail{m.edge_dart(e0)};
    const int start = m.vertex_of(trail[0]);
    int at = m.vertex_of(m.alpha(trail[0]));
    while (at != start) {
      int best_e = -1;
      Dart best_d = 0;
      for (Dart g : m.vertex_darts(at)) {
        int e = m.edge_of(g);
        if (!left.count(e)) continue;
        if (best_e < 0 || e < best_e) {
          best_e = e;
          best_d = g;
        }
      }
      require(best_e >= 0, "InvariantViolation", "edge set has an odd vertex");
      left.erase(best_e);
      trail.push_back(best_d);
      at = m.vertex_of(m.alpha(best_d));
    }
    std::vector<Dart> sd;
    std::vector<int> sv;
    for (Dart t : trail) {
      sv.push_back(m.vertex_of(t));
      sd.push_back(t);
      int v = m.vertex_of(m.alpha(t));
      for (int i = 0; i < static_cast<int>(sv.size()); ++i)
        if (sv[i] == v) {
          out.push_back(Walk{std::vector<Dart>(sd.begin() + i, sd.end())});
          sd.erase(sd.begin() + i, sd.end());
          sv.erase(sv.begin() + i, sv.end());
          break;
        }
    }
    require(sd.empty(), "InvariantViolation", "cycle resolution left an open path");
  }
  return out;
}

}  // namespace

Walk find_dual_curve(const CombinatorialMap& m, const Walk& c) {
  require_simple_cycle(m, c);
  require(!is_separating(m, c), "NotSeparating", "dual search needs a nonseparating cycle");
  std::set<int> cedges;
  for (Dart d : c.darts) cedges.insert(m.edge_of(d));

  auto basis = h1_basis_cached(m);
  const int nb = static_cast<int>(basis->basis_cycles.size());

  auto verified = [&](const Walk& cand) {
    if (pairing_mod2(m, cand, cedges) % 2 == 0) return false;
    Overlay t = Overlay::build(m, {left_pushoff(m, c, "c", 3), left_pushoff(m, cand, "d", 5)});
    t = reduce_to_minimal_position(std::move(t));
    return intersection_number(t, 0, 1) == 1;
  };

  for (const Walk& w : basis->basis_cycles)
    if (verified(w)) return w;

  for (int size = 2; size <= nb; ++size) {
    std::vector<int> pick(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::set<int> edges;
      for (int i : pick)
        for (int e : basis->basis_edge_sets[i]) {
          if (!edges.insert(e).second) edges.erase(e);
        }
      for (const Walk& w : resolve_cycles(m, edges))
        if (verified(w)) return w;
      int j = size - 1;
      while (j >= 0 && pick[j] == nb - size + j) --j;
      if (j < 0) break;
      ++pick[j];
      for (int t = j + 1; t < size; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
  fail("SearchExhausted", "no embedded cycle meeting the curve once within the basis budget");
}

}  // namespace nscorn
