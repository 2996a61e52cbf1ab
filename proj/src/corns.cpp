#include "nscorn/corns.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "nscorn/error.hpp"

namespace nscorn {

namespace {

// ---------------------------------------------------------------- positions

int pos_count(const Overlay& o, int c) { return static_cast<int>(o.crossings_along(c).size()); }

int id_at(const Overlay& o, int c, int pos) { return o.crossings_along(c)[pos]; }

int pos_on(const Overlay::Crossing& cr, int c) {
  if (cr.a == c) return cr.pos_a;
  if (cr.b == c) return cr.pos_b;
  return -1;
}

int other_curve(const Overlay::Crossing& cr, int c) { return cr.a == c ? cr.b : cr.a; }

// steps forward along c from one crossing position to another; negative when
// an arc would have to walk backwards
int fwd_gap(const Overlay& o, int c, int from, int to) {
  const int n = pos_count(o, c);
  if (o.closed(c)) return ((to - from) % n + n) % n;
  return to - from;
}

// parent-forward window of a crossing-bounded side
struct Win {
  int curve;
  int lo, hi;
};

Win win_of(const CornArc& s) {
  return s.forward ? Win{s.curve, s.from_pos, s.to_pos} : Win{s.curve, s.to_pos, s.from_pos};
}

int win_len(const Overlay& o, const Win& w) { return fwd_gap(o, w.curve, w.lo, w.hi); }

int win_offset(const Overlay& o, const Win& w, int pos) {
  int g = fwd_gap(o, w.curve, w.lo, pos);
  if (g < 0 || g > win_len(o, w)) return -1;
  return g;
}

bool in_win(const Overlay& o, const Win& w, int pos) { return win_offset(o, w, pos) >= 0; }

// offset of pos along the side's own traversal, or -1
int trav_offset(const Overlay& o, const CornArc& s, int pos) {
  Win w = win_of(s);
  int g = win_offset(o, w, pos);
  if (g < 0) return -1;
  return s.forward ? g : win_len(o, w) - g;
}

CornArc cross_arc(int curve, int from, int to, bool fwd) {
  CornArc s;
  s.curve = curve;
  s.from_pos = from;
  s.to_pos = to;
  s.forward = fwd;
  return s;
}

CornArc reversed(const CornArc& s) {
  CornArc r = s;
  r.from_pos = s.to_pos;
  r.to_pos = s.from_pos;
  r.forward = !s.forward;
  return r;
}

// sub-piece of a side from position x to position y, both on the side
CornArc side_piece(const Overlay& o, const CornArc& side, int x, int y) {
  int fx = trav_offset(o, side, x), fy = trav_offset(o, side, y);
  require(fx >= 0 && fy >= 0, "InvariantViolation", "piece endpoints leave the side");
  CornArc p;
  p.curve = side.curve;
  p.from_pos = x;
  p.to_pos = y;
  p.forward = (fx <= fy) ? side.forward : !side.forward;
  return p;
}

// crossing ids lying on both sides (same-parent sides share a crossing
// exactly when both windows hold its position)
std::vector<int> shared_crossings(const Overlay& o, const CornArc& s1, const CornArc& s2) {
  Win w1 = win_of(s1), w2 = win_of(s2);
  std::vector<int> out;
  const auto& xs = o.crossings();
  for (int x = 0; x < static_cast<int>(xs.size()); ++x) {
    int p1 = pos_on(xs[x], s1.curve);
    if (p1 < 0 || !in_win(o, w1, p1)) continue;
    int p2 = pos_on(xs[x], s2.curve);
    if (p2 < 0 || !in_win(o, w2, p2)) continue;
    out.push_back(x);
  }
  return out;
}

// ------------------------------------------------------------------- events

std::vector<int> side_events(const Overlay& o, const CornArc& s) {
  if (s.whole) {
    std::vector<int> all(o.event_count(s.curve));
    for (int k = 0; k < static_cast<int>(all.size()); ++k) all[k] = k;
    if (!s.forward) std::reverse(all.begin(), all.end());
    return all;
  }
  if (s.pin_bounded) {
    require(s.from_seg < s.to_seg || (s.from_seg == s.to_seg && s.from_t <= s.to_t),
            "InvariantViolation", "pin window runs against the host");
    std::vector<int> out;
    // closed host: segment k runs event k -> event k+1; arc host: segment k
    // ends at event k
    if (o.closed(s.curve))
      for (int e = s.from_seg + 1; e <= s.to_seg; ++e) out.push_back(e);
    else
      for (int e = s.from_seg; e < s.to_seg; ++e) out.push_back(e);
    if (!s.forward) std::reverse(out.begin(), out.end());
    return out;
  }
  if (s.from_pos == s.to_pos) return {};
  if (s.forward) return event_indices_between(o, s.curve, s.from_pos, s.to_pos);
  auto v = event_indices_between(o, s.curve, s.to_pos, s.from_pos);
  std::reverse(v.begin(), v.end());
  return v;
}

H1Class class_of_sides(const Overlay& o, const std::vector<CornArc>& sides) {
  std::vector<int> edges;
  for (const CornArc& s : sides)
    for (int k : side_events(o, s)) edges.push_back(o.event(s.curve, k).first);
  return class_of_crossings(o.base(), *h1_basis_cached(o.base()), edges);
}

int other_base_face(const CombinatorialMap& m, int e, int f) {
  Dart d = m.edge_dart(e);
  int f1 = m.face_of(d), f2 = m.face_of(m.alpha(d));
  return f == f1 ? f2 : f1;
}

// Transverse copy of a side cycle. Each side's events are displaced onto its
// own track (nonce base + index), so the copy never touches the parents or
// its own other sides.
CurveSpec realize_cycle(const Overlay& o, const std::vector<CornArc>& sides,
                        const std::string& name, int nonce_base) {
  CurveSpec sp;
  sp.name = name;
  sp.closed = true;
  int first_curve = -1, first_event = -1;
  bool first_fwd = true;
  for (int i = 0; i < static_cast<int>(sides.size()); ++i) {
    const CornArc& s = sides[i];
    auto idx = side_events(o, s);
    auto disp = displaced_event_list(o, s.curve, idx, nonce_base + i);
    if (first_event < 0 && !idx.empty()) {
      first_curve = s.curve;
      first_event = idx[0];
      first_fwd = s.forward;
    }
    sp.events.insert(sp.events.end(), disp.begin(), disp.end());
  }
  require(!sp.events.empty(), "InvariantViolation", "realized cycle crosses no skeleton edge");
  int f = o.event_home(first_curve, first_event);
  if (!first_fwd) f = other_base_face(o.base(), o.event(first_curve, first_event).first, f);
  sp.start_face = o.base().face_key(f);
  return sp;
}

std::vector<CornArc> bicorn_sides(const Bicorn& b) {
  if (b.degenerate) {
    CornArc w;
    w.curve = b.whole_curve;
    w.whole = true;
    return {w};
  }
  return {b.alpha, b.beta};
}

std::vector<CornArc> corn_sides(const TwoKCorn& c) {
  std::vector<CornArc> out;
  for (int i = 0; i < c.k; ++i) {
    out.push_back(c.a_sides[i]);
    out.push_back(c.b_sides[i]);
  }
  return out;
}

// ---------------------------------------------------------------- chirality

Dart strand_out(const Overlay& o, int c, int pos) { return o.walk(c)[o.walk_offset(c, pos)]; }

Dart strand_in(const Overlay& o, int c, int pos) {
  const auto& w = o.walk(c);
  int off = o.walk_offset(c, pos);
  if (!o.closed(c)) {
    require(off >= 1, "InvariantViolation", "crossing at the tip of an arc");
    return o.refined().alpha(w[off - 1]);
  }
  return o.refined().alpha(w[(off + static_cast<int>(w.size()) - 1) % static_cast<int>(w.size())]);
}

// Whether the germ of one strand points into the left of the other, oriented
// strand at a shared crossing. Left germs are the ones met counterclockwise
// from the reference's outgoing germ before its incoming germ.
bool germ_on_left(const Overlay& o, int ref_c, int ref_pos, bool ref_fwd, int oth_c, int oth_pos,
                  bool oth_fwd) {
  Dart rout = ref_fwd ? strand_out(o, ref_c, ref_pos) : strand_in(o, ref_c, ref_pos);
  Dart rin = ref_fwd ? strand_in(o, ref_c, ref_pos) : strand_out(o, ref_c, ref_pos);
  Dart g = oth_fwd ? strand_out(o, oth_c, oth_pos) : strand_in(o, oth_c, oth_pos);
  const auto& rot = o.refined().vertex_darts(o.refined().vertex_of(rout));
  const int deg = static_cast<int>(rot.size());
  int i0 = -1;
  for (int j = 0; j < deg; ++j)
    if (rot[j] == rout) i0 = j;
  require(i0 >= 0, "InvariantViolation", "germ missing from its rotation");
  for (int j = 1; j < deg; ++j) {
    Dart x = rot[(i0 + j) % deg];
    if (x == g) return true;
    if (x == rin) return false;
  }
  fail("InvariantViolation", "strands do not cross at the shared vertex");
}

// ------------------------------------------------------------ refined walks

// darts along the parent covering a side, in traversal order
std::vector<Dart> window_darts(const Overlay& o, const CornArc& s) {
  const auto& w = o.walk(s.curve);
  const int n = static_cast<int>(w.size());
  std::vector<Dart> fwd;
  if (s.whole) {
    fwd = w;
  } else {
    int o1 = o.walk_offset(s.curve, s.forward ? s.from_pos : s.to_pos);
    int o2 = o.walk_offset(s.curve, s.forward ? s.to_pos : s.from_pos);
    if (o.closed(s.curve)) {
      for (int k = o1; k != o2; k = (k + 1) % n) fwd.push_back(w[k]);
    } else {
      require(o1 <= o2, "InvariantViolation", "side window leaves its arc");
      for (int k = o1; k < o2; ++k) fwd.push_back(w[k]);
    }
  }
  if (!s.forward) {
    std::reverse(fwd.begin(), fwd.end());
    for (Dart& d : fwd) d = o.refined().alpha(d);
  }
  return fwd;
}

Walk refined_walk_of_bicorn(const Overlay& o, const Bicorn& b) {
  Walk res;
  if (b.degenerate) {
    res.darts = o.walk(b.whole_curve);
    return res;
  }
  const CombinatorialMap& rm = o.refined();
  if (b.alpha.pin_bounded) {
    const auto& ws = o.walk(b.beta.curve);
    int v_start = rm.vertex_of(ws.front());
    int v_end = rm.vertex_of(rm.alpha(ws.back()));
    int v_lower = b.beta.forward ? v_end : v_start;
    int v_upper = b.beta.forward ? v_start : v_end;
    if (v_lower != v_upper) {
      const auto& wa = o.walk(b.alpha.curve);
      const int na = static_cast<int>(wa.size());
      int i0 = -1;
      for (int i = 0; i < na; ++i)
        if (rm.vertex_of(wa[i]) == v_lower) {
          i0 = i;
          break;
        }
      require(i0 >= 0, "InvariantViolation", "pin vertex is not on the host walk");
      int i = i0;
      while (true) {
        res.darts.push_back(wa[i]);
        if (rm.vertex_of(rm.alpha(wa[i])) == v_upper) break;
        i = o.closed(b.alpha.curve) ? (i + 1) % na : i + 1;
        require(i != i0 && i < na, "InvariantViolation", "pin window never closes");
      }
    }
    if (b.beta.forward)
      res.darts.insert(res.darts.end(), ws.begin(), ws.end());
    else
      for (int j = static_cast<int>(ws.size()) - 1; j >= 0; --j)
        res.darts.push_back(rm.alpha(ws[j]));
    return res;
  }
  for (const CornArc& s : {b.alpha, b.beta})
    for (Dart d : window_darts(o, s)) res.darts.push_back(d);
  return res;
}

// --------------------------------------------------------------- validation

void check_side_shape(const Overlay& o, const CornArc& s) {
  require(!s.whole && !s.pin_bounded, "InvariantViolation", "side must be crossing-bounded");
  require(s.curve >= 0 && s.curve < o.curve_count(), "InvariantViolation",
          "side parent out of range");
  const int n = pos_count(o, s.curve);
  require(s.from_pos >= 0 && s.from_pos < n && s.to_pos >= 0 && s.to_pos < n,
          "InvariantViolation", "side endpoint out of range");
  require(s.from_pos != s.to_pos, "InvariantViolation", "side endpoints coincide");
  if (!o.closed(s.curve)) {
    Win w = win_of(s);
    require(w.lo <= w.hi, "InvariantViolation", "side window leaves its arc");
  }
}

Bicorn to_bicorn(const TwoKCorn& c) {
  Bicorn b;
  b.alpha = c.a_sides[0];
  b.beta = c.b_sides[0];
  b.corner_p = c.p[0];
  b.corner_q = c.q[0];
  return b;
}

}  // namespace

void validate_corn(const Overlay& o, const TwoKCorn& c) {
  const int k = c.k;
  require(k >= 1, "InvariantViolation", "corn needs at least one side of each kind");
  require(static_cast<int>(c.a_sides.size()) == k && static_cast<int>(c.b_sides.size()) == k &&
              static_cast<int>(c.p.size()) == k && static_cast<int>(c.q.size()) == k,
          "InvariantViolation", "corn field sizes disagree");
  for (int i = 0; i < k; ++i) {
    check_side_shape(o, c.a_sides[i]);
    check_side_shape(o, c.b_sides[i]);
  }
  const int nx = static_cast<int>(o.crossings().size());
  std::set<int> corners;
  for (int i = 0; i < k; ++i) {
    require(c.p[i] >= 0 && c.p[i] < nx && c.q[i] >= 0 && c.q[i] < nx, "InvariantViolation",
            "corner id out of range");
    corners.insert(c.p[i]);
    corners.insert(c.q[i]);
  }
  require(static_cast<int>(corners.size()) == 2 * k, "InvariantViolation", "corners repeat");
  for (int i = 0; i < k; ++i) {
    require(id_at(o, c.a_sides[i].curve, c.a_sides[i].from_pos) == c.p[i] &&
                id_at(o, c.a_sides[i].curve, c.a_sides[i].to_pos) == c.q[i],
            "InvariantViolation", "side endpoints disagree with the corners");
    require(id_at(o, c.b_sides[i].curve, c.b_sides[i].from_pos) == c.q[i] &&
                id_at(o, c.b_sides[i].curve, c.b_sides[i].to_pos) == c.p[(i + 1) % k],
            "InvariantViolation", "side endpoints disagree with the corners");
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      std::set<int> expected;
      if (k == 1) {
        expected = {c.p[0], c.q[0]};
      } else if (j == i) {
        expected = {c.q[i]};
      } else if (j == (i + k - 1) % k) {
        expected = {c.p[i]};
      }
      auto got = shared_crossings(o, c.a_sides[i], c.b_sides[j]);
      require(std::set<int>(got.begin(), got.end()) == expected, "InvariantViolation",
              "sides meet away from their corners");
    }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      require(shared_crossings(o, c.a_sides[i], c.a_sides[j]).empty(), "InvariantViolation",
              "sides of one family overlap");
      require(shared_crossings(o, c.b_sides[i], c.b_sides[j]).empty(), "InvariantViolation",
              "sides of one family overlap");
    }
}

void validate_bicorn(const Overlay& o, const Bicorn& b) {
  if (b.degenerate) {
    require(b.whole_curve >= 0 && b.whole_curve < o.curve_count() && o.closed(b.whole_curve),
            "InvariantViolation", "degenerate bicorn must be a closed parent");
    return;
  }
  if (b.alpha.pin_bounded) {
    require(b.beta.whole && b.beta.curve >= 0 && b.beta.curve < o.curve_count() &&
                !o.closed(b.beta.curve),
            "InvariantViolation", "pin-form bicorn pairs a host window with an open arc");
    const CurveSpec& sp = o.spec(b.beta.curve);
    require(sp.start.kind == CurveSpec::Endpoint::OnCurve &&
                sp.finish.kind == CurveSpec::Endpoint::OnCurve &&
                sp.start.host == b.alpha.curve && sp.finish.host == b.alpha.curve,
            "InvariantViolation", "arc endpoints must be pinned on the host");
    auto lo = std::make_pair(b.alpha.from_seg, b.alpha.from_t);
    auto hi = std::make_pair(b.alpha.to_seg, b.alpha.to_t);
    auto s1 = std::make_pair(sp.start.host_seg, sp.start.t);
    auto s2 = std::make_pair(sp.finish.host_seg, sp.finish.t);
    require((s1 == lo && s2 == hi) || (s1 == hi && s2 == lo), "InvariantViolation",
            "host window does not end at the pins");
    return;
  }
  TwoKCorn c;
  c.k = 1;
  c.a_sides = {b.alpha};
  c.b_sides = {b.beta};
  c.p = {b.corner_p};
  c.q = {b.corner_q};
  validate_corn(o, c);
}

CurveSpec realize_bicorn(const Overlay& o, const Bicorn& b, const std::string& name,
                         int nonce_base) {
  validate_bicorn(o, b);
  return realize_cycle(o, bicorn_sides(b), name, nonce_base);
}

CurveSpec realize_corn(const Overlay& o, const TwoKCorn& c, const std::string& name,
                       int nonce_base) {
  validate_corn(o, c);
  return realize_cycle(o, corn_sides(c), name, nonce_base);
}

H1Class bicorn_class(const Overlay& o, const Bicorn& b) {
  return class_of_sides(o, bicorn_sides(b));
}

H1Class corn_class(const Overlay& o, const TwoKCorn& c) {
  return class_of_sides(o, corn_sides(c));
}

bool bicorn_separating(const Overlay& o, const Bicorn& b) { return bicorn_class(o, b).zero(); }

std::vector<Bicorn> enumerate_bicorns(const Overlay& o, int a, int b) {
  require(o.is_reduced(), "NotReduced", "bicorn enumeration needs a reduced overlay");
  require(a >= 0 && a < o.curve_count() && b >= 0 && b < o.curve_count() && a != b,
          "InvariantViolation", "bicorns need two distinct curves");
  require(o.closed(a) && o.closed(b), "InvariantViolation", "bicorns need closed curves");
  std::vector<Bicorn> out;
  for (int w : {a, b}) {
    Bicorn d;
    d.degenerate = true;
    d.whole_curve = w;
    out.push_back(d);
  }
  const auto& crs = o.crossings();
  const int lo = std::min(a, b), hi = std::max(a, b);
  std::vector<int> ids;
  for (int x = 0; x < static_cast<int>(crs.size()); ++x)
    if (crs[x].a == lo && crs[x].b == hi) ids.push_back(x);
  for (int i = 0; i < static_cast<int>(ids.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(ids.size()); ++j)
      for (int aw = 0; aw < 2; ++aw)
        for (int bw = 0; bw < 2; ++bw) {
          int px = aw == 0 ? ids[i] : ids[j];
          int qx = aw == 0 ? ids[j] : ids[i];
          Bicorn cand;
          cand.corner_p = px;
          cand.corner_q = qx;
          cand.alpha = cross_arc(a, pos_on(crs[px], a), pos_on(crs[qx], a), true);
          cand.beta = cross_arc(b, pos_on(crs[qx], b), pos_on(crs[px], b), bw == 0);
          auto got = shared_crossings(o, cand.alpha, cand.beta);
          if (std::set<int>(got.begin(), got.end()) == std::set<int>{px, qx})
            out.push_back(cand);
        }
  return out;
}

std::vector<Bicorn> nonseparating_bicorns(const Overlay& o, int a, int b) {
  if (o.curve_separating(a) || o.curve_separating(b))
    fail("SeparatingInput", "input curves must be nonseparating");
  std::vector<Bicorn> out;
  for (const Bicorn& x : enumerate_bicorns(o, a, b))
    if (!bicorn_separating(o, x)) out.push_back(x);
  return out;
}

namespace {

// ------------------------------------------------------------------- step 1

std::pair<int, int> step1_scan(const Overlay& o, const std::vector<int>& A, const TwoKCorn& c) {
  for (int a : A) {
    require(a >= 0 && a < o.curve_count() && o.closed(a), "InvariantViolation",
            "family member must be a closed overlay curve");
    for (int s = 0; s < c.k; ++s) {
      Win w = win_of(c.b_sides[s]);
      int hits = 0;
      for (const auto& cr : o.crossings()) {
        if (pos_on(cr, a) < 0 || other_curve(cr, a) != c.b_sides[s].curve) continue;
        if (in_win(o, w, pos_on(cr, c.b_sides[s].curve))) ++hits;
      }
      if (hits >= 2) return {a, s};
    }
  }
  return {-1, -1};
}

// Cuts the chosen member along its consecutive visits to the side and
// returns the first nonseparating consecutive-pair bicorn.
Bicorn step1_build(const Overlay& o, const TwoKCorn& c, int a, int s) {
  const CornArc& side = c.b_sides[s];
  Win w = win_of(side);
  struct Hit {
    int a_pos, id;
  };
  std::vector<Hit> xs;
  const auto& crs = o.crossings();
  for (int x = 0; x < static_cast<int>(crs.size()); ++x) {
    if (pos_on(crs[x], a) < 0 || other_curve(crs[x], a) != side.curve) continue;
    if (!in_win(o, w, pos_on(crs[x], side.curve))) continue;
    xs.push_back({pos_on(crs[x], a), x});
  }
  std::sort(xs.begin(), xs.end(), [](const Hit& l, const Hit& r) { return l.a_pos < r.a_pos; });
  const int m = static_cast<int>(xs.size());
  require(m >= 2, "InvariantViolation", "side is crossed fewer than twice");
  H1Class sum;
  int best = -1;
  Bicorn best_b;
  for (int i = 0; i < m; ++i) {
    const Hit& h1 = xs[i];
    const Hit& h2 = xs[(i + 1) % m];
    Bicorn cand;
    cand.alpha = cross_arc(a, h1.a_pos, h2.a_pos, true);
    cand.beta = side_piece(o, side, pos_on(crs[h2.id], side.curve), pos_on(crs[h1.id], side.curve));
    cand.corner_p = h1.id;
    cand.corner_q = h2.id;
    H1Class cls = bicorn_class(o, cand);
    sum = (i == 0) ? cls : (sum ^ cls);
    if (best < 0 && !cls.zero()) {
      best = i;
      best_b = cand;
    }
  }
  require(sum == o.curve_class(a), "InvariantViolation",
          "cut classes do not telescope to the curve class");
  require(best >= 0, "InvariantViolation", "every consecutive cut separates");
  validate_bicorn(o, best_b);
  return best_b;
}

// ------------------------------------------------------------------- audits

struct HopAudit {
  int inter = 0;
  bool isotopic = false;
};

HopAudit audit_hop(const Overlay& o, const std::vector<CornArc>& x,
                   const std::vector<CornArc>& y) {
  CurveSpec sx = realize_cycle(o, x, "x", 1);
  CurveSpec sy = realize_cycle(o, y, "y", 1 + static_cast<int>(x.size()));
  Overlay t = reduce_to_minimal_position(Overlay::build(o.base(), {sx, sy}));
  HopAudit h;
  h.inter = intersection_number(t, 0, 1);
  h.isotopic = h.inter == 0 && is_isotopic(t, 0, 1);
  return h;
}

struct CertBuilder {
  const Overlay& o;
  PathCertificate cert;
  std::vector<CornArc> last;

  void start(const std::vector<CornArc>& c0) {
    last = c0;
    cert.chain.push_back(realize_cycle(o, c0, "x0", 1));
  }
  int hop(const std::vector<CornArc>& next, int max_expected, const std::string& note) {
    HopAudit h = audit_hop(o, last, next);
    require(h.inter <= max_expected, "InvariantViolation",
            "hop exceeds the proven crossing bound");
    int bound = h.isotopic ? 0 : (h.inter == 0 ? 1 : 2 * h.inter + 1);
    cert.hop_inter.push_back(h.inter);
    cert.hop_bounds.push_back(bound);
    cert.notes.push_back(note);
    cert.total_bound += bound;
    cert.chain.push_back(
        realize_cycle(o, next, "x" + std::to_string(cert.chain.size()), 1));
    last = next;
    return h.inter;
  }
};

// ------------------------------------------------------------ normalization

struct Normalized {
  bool whole = false;
  int curve = -1;
  TwoKCorn corn;
};

// Cleans a cyclic side list into a corn: drops point sides, merges aligned
// same-parent junctions, checks alternation against the first family, and
// reads the corners off the junction crossings. A list that closes up into
// an entire parent is reported as such instead.
Normalized normalize_cycle(const Overlay& o, const std::set<int>& a_parents,
                           std::vector<CornArc> sides) {
  std::vector<CornArc> kept;
  for (const CornArc& s : sides)
    if (s.from_pos != s.to_pos) kept.push_back(s);
  sides = std::move(kept);
  require(!sides.empty(), "InvariantViolation", "cycle has no sides left");
  bool again = true;
  while (again && sides.size() > 1) {
    again = false;
    for (int i = 0; i < static_cast<int>(sides.size()); ++i) {
      CornArc& x = sides[i];
      const CornArc& y = sides[(i + 1) % sides.size()];
      if (x.curve != y.curve || x.forward != y.forward || x.to_pos != y.from_pos) continue;
      x.to_pos = y.to_pos;
      sides.erase(sides.begin() + (i + 1) % sides.size());
      if (sides.size() == 1 && sides[0].from_pos == sides[0].to_pos)
        return Normalized{true, sides[0].curve, {}};
      require(x.from_pos != x.to_pos, "InvariantViolation", "cycle doubles back on a parent");
      again = true;
      break;
    }
  }
  const int total = static_cast<int>(sides.size());
  require(total >= 2 && total % 2 == 0, "InvariantViolation", "side cycle does not alternate");
  int first = -1;
  for (int i = 0; i < total && first < 0; ++i)
    if (a_parents.count(sides[i].curve)) first = i;
  require(first >= 0, "InvariantViolation", "cycle misses the first family");
  std::rotate(sides.begin(), sides.begin() + first, sides.end());
  Normalized n;
  TwoKCorn& c = n.corn;
  c.k = total / 2;
  for (int i = 0; i < c.k; ++i) {
    require(a_parents.count(sides[2 * i].curve) && !a_parents.count(sides[2 * i + 1].curve),
            "InvariantViolation", "side cycle does not alternate");
    c.a_sides.push_back(sides[2 * i]);
    c.b_sides.push_back(sides[2 * i + 1]);
  }
  for (int i = 0; i < c.k; ++i) {
    const CornArc& prev = sides[(2 * i + 2 * c.k - 1) % (2 * c.k)];
    require(id_at(o, prev.curve, prev.to_pos) ==
                id_at(o, c.a_sides[i].curve, c.a_sides[i].from_pos),
            "InvariantViolation", "cycle junction mismatch");
    require(id_at(o, c.a_sides[i].curve, c.a_sides[i].to_pos) ==
                id_at(o, c.b_sides[i].curve, c.b_sides[i].from_pos),
            "InvariantViolation", "cycle junction mismatch");
    c.p.push_back(id_at(o, c.a_sides[i].curve, c.a_sides[i].from_pos));
    c.q.push_back(id_at(o, c.a_sides[i].curve, c.a_sides[i].to_pos));
  }
  validate_corn(o, c);
  return n;
}

// ------------------------------------------------------------ probe sweeps

struct YPoint {
  int xid;
  int a_off, a_pos;
  int side, b_pos;
};

std::vector<YPoint> y_points(const Overlay& o, const TwoKCorn& c, const Bicorn& d) {
  require(!d.degenerate && !d.alpha.pin_bounded && d.alpha.forward, "InvariantViolation",
          "probe must be a crossing-bounded bicorn");
  const int a = d.alpha.curve;
  Win wa{a, d.alpha.from_pos, d.alpha.to_pos};
  std::vector<YPoint> ys;
  const auto& crs = o.crossings();
  for (int x = 0; x < static_cast<int>(crs.size()); ++x) {
    int pa = pos_on(crs[x], a);
    if (pa < 0) continue;
    int off = win_offset(o, wa, pa);
    if (off < 0) continue;
    int oc = other_curve(crs[x], a);
    for (int s = 0; s < c.k; ++s) {
      if (c.b_sides[s].curve != oc) continue;
      int pb = pos_on(crs[x], oc);
      if (!in_win(o, win_of(c.b_sides[s]), pb)) continue;
      ys.push_back({x, off, pa, s, pb});
      break;
    }
  }
  std::sort(ys.begin(), ys.end(), [](const YPoint& l, const YPoint& r) { return l.a_off < r.a_off; });
  require(ys.size() >= 2 && ys.front().a_off == 0 && ys.back().a_off == win_len(o, wa),
          "InvariantViolation", "probe corners missing from the sweep");
  return ys;
}

struct DArc {
  CornArc arc;  // forward window on the probe curve between consecutive hits
  int s_from, s_to;
  int b_from, b_to;
  bool l_from = false, l_to = false;
  enum Kind { NonAdj, Same, Par, Equal } kind = Same;
  int m = -1;  // A-side for Par / Equal
};

std::vector<DArc> build_darcs(const Overlay& o, const TwoKCorn& c, const std::vector<YPoint>& ys,
                              int a) {
  std::vector<DArc> out;
  for (int t = 0; t + 1 < static_cast<int>(ys.size()); ++t) {
    DArc d;
    d.arc = cross_arc(a, ys[t].a_pos, ys[t + 1].a_pos, true);
    d.s_from = ys[t].side;
    d.s_to = ys[t + 1].side;
    d.b_from = ys[t].b_pos;
    d.b_to = ys[t + 1].b_pos;
    if (d.s_from == d.s_to) {
      d.kind = DArc::Same;
    } else if (d.s_to == (d.s_from + 1) % c.k) {
      d.kind = DArc::Par;
      d.m = d.s_to;
    } else if (d.s_from == (d.s_to + 1) % c.k) {
      d.kind = DArc::Par;
      d.m = d.s_from;
    } else {
      d.kind = DArc::NonAdj;
    }
    if (d.kind == DArc::Par) {
      const CornArc& al = c.a_sides[d.m];
      if (al.curve == a && win_of(al).lo == win_of(d.arc).lo && win_of(al).hi == win_of(d.arc).hi)
        d.kind = DArc::Equal;
    }
    if (d.kind != DArc::Equal) {
      const CornArc& sf = c.b_sides[d.s_from];
      const CornArc& st = c.b_sides[d.s_to];
      d.l_from = germ_on_left(o, sf.curve, d.b_from, sf.forward, a, ys[t].a_pos, true);
      d.l_to = germ_on_left(o, st.curve, d.b_to, st.forward, a, ys[t + 1].a_pos, false);
    }
    out.push_back(d);
  }
  return out;
}

int par_foot_pos(const DArc& d, int side) { return d.s_from == side ? d.b_from : d.b_to; }

// nesting for arcs parallel to one A-side: the inner one hugs the side
bool par_nested(const Overlay& o, const TwoKCorn& c, const DArc& in, const DArc& out) {
  const int m = in.m, mp = (in.m + c.k - 1) % c.k;
  int im = trav_offset(o, c.b_sides[m], par_foot_pos(in, m));
  int ip = trav_offset(o, c.b_sides[mp], par_foot_pos(in, mp));
  int om = trav_offset(o, c.b_sides[m], par_foot_pos(out, m));
  int op = trav_offset(o, c.b_sides[mp], par_foot_pos(out, mp));
  return ip >= op && im <= om;
}

// bicorn cut off by an arc returning to one side
std::vector<CornArc> span_bicorn_sides(const Overlay& o, const TwoKCorn& c, const DArc& d) {
  return {d.arc, side_piece(o, c.b_sides[d.s_from], d.b_to, d.b_from)};
}

// corn cut off by an arc running parallel to A-side m
std::vector<CornArc> parallel_corn_sides(const Overlay& o, const TwoKCorn& c, const DArc& d) {
  const int m = d.m, mp = (d.m + c.k - 1) % c.k;
  int v_pos = par_foot_pos(d, m), u_pos = par_foot_pos(d, mp);
  CornArc delta = (d.s_from == m) ? d.arc : reversed(d.arc);
  return {c.a_sides[m], side_piece(o, c.b_sides[m], c.b_sides[m].from_pos, v_pos), delta,
          side_piece(o, c.b_sides[mp], u_pos, c.b_sides[mp].to_pos)};
}

// the two halves of the corn cut along an arc joining non-adjacent sides
std::pair<std::vector<CornArc>, std::vector<CornArc>> split_sides(const Overlay& o,
                                                                  const TwoKCorn& c,
                                                                  const DArc& d) {
  auto half = [&](const CornArc& delta, int s_out, int out_pos, int s_in, int in_pos) {
    std::vector<CornArc> v{delta};
    v.push_back(side_piece(o, c.b_sides[s_out], out_pos, c.b_sides[s_out].to_pos));
    for (int j = (s_out + 1) % c.k;; j = (j + 1) % c.k) {
      v.push_back(c.a_sides[j]);
      if (j == s_in) {
        v.push_back(side_piece(o, c.b_sides[j], c.b_sides[j].from_pos, in_pos));
        break;
      }
      v.push_back(c.b_sides[j]);
    }
    return v;
  };
  return {half(d.arc, d.s_to, d.b_to, d.s_from, d.b_from),
          half(reversed(d.arc), d.s_from, d.b_from, d.s_to, d.b_to)};
}

struct Span {
  int u_off, v_off;
  int u_pos, v_pos;
  CornArc arc;  // oriented from the u end to the v end
};

Span make_span(const Overlay& o, const TwoKCorn& c, const DArc& d) {
  const CornArc& side = c.b_sides[d.s_from];
  int ff = trav_offset(o, side, d.b_from), ft = trav_offset(o, side, d.b_to);
  Span s;
  if (ff <= ft) {
    s = Span{ff, ft, d.b_from, d.b_to, d.arc};
  } else {
    s = Span{ft, ff, d.b_to, d.b_from, reversed(d.arc)};
  }
  return s;
}

// reroute of the corn across the replacement arcs
std::vector<CornArc> assemble_reroute(const Overlay& o, const TwoKCorn& c,
                                      const std::vector<CornArc>& xsides,
                                      const std::vector<std::pair<int, int>>& keep,
                                      const std::vector<std::vector<Span>>& spans) {
  std::vector<CornArc> out;
  for (int i = 0; i < c.k; ++i) {
    out.push_back(xsides[i]);
    const CornArc& b = c.b_sides[i];
    int cur = keep[i].first;
    for (const Span& sp : spans[i]) {
      out.push_back(side_piece(o, b, cur, sp.u_pos));
      out.push_back(sp.arc);
      cur = sp.v_pos;
    }
    out.push_back(side_piece(o, b, cur, keep[i].second));
  }
  return out;
}

// ------------------------------------------------------------------ reducer

struct Reducer {
  const Overlay& o;
  const std::vector<int>& A;
  std::set<int> a_parents;
  CertBuilder cb;

  // normalize, record the hop, and keep walking
  Bicorn hop_and_descend(const std::vector<CornArc>& sides, int expect, int max_k,
                         const std::string& note) {
    Normalized n = normalize_cycle(o, a_parents, sides);
    if (n.whole) {
      Bicorn d;
      d.degenerate = true;
      d.whole_curve = n.curve;
      cb.hop(bicorn_sides(d), expect, note);
      return d;
    }
    require(n.corn.k <= max_k, "InvariantViolation", "descent did not shrink the corn");
    cb.hop(corn_sides(n.corn), expect, note);
    return run(n.corn);
  }

  Bicorn run(const TwoKCorn& c) {
    if (c.k == 1) return to_bicorn(c);
    auto pick = step1_scan(o, A, c);
    if (pick.first < 0) {
      Bicorn d;
      d.degenerate = true;
      d.whole_curve = A.front();
      cb.hop(bicorn_sides(d), c.k, "every member meets every side at most once");
      return d;
    }
    Bicorn d = step1_build(o, c, pick.first, pick.second);
    return c.k == 2 ? base_case(c, d, pick.second) : induction(c, d);
  }

  Bicorn induction(const TwoKCorn& c, const Bicorn& d) {
    auto ys = y_points(o, c, d);
    auto ds = build_darcs(o, c, ys, d.alpha.curve);

    // an arc joining non-adjacent sides cuts the corn into smaller corns
    for (const DArc& dd : ds)
      if (dd.kind == DArc::NonAdj) {
        auto halves = split_sides(o, c, dd);
        H1Class c1 = class_of_sides(o, halves.first);
        H1Class c2 = class_of_sides(o, halves.second);
        require((c1 ^ c2) == corn_class(o, c), "InvariantViolation",
                "split halves do not add up to the corn");
        require(!c1.zero() || !c2.zero(), "InvariantViolation", "both split halves separate");
        return hop_and_descend(!c1.zero() ? halves.first : halves.second, 1, c.k - 1,
                               "cut along an arc joining far sides");
      }

    // (i): an arc returning to one side from the other side
    for (const DArc& dd : ds)
      if (dd.kind == DArc::Same && dd.l_from != dd.l_to) {
        auto sides = span_bicorn_sides(o, c, dd);
        require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                "once-crossing pocket separates");
        return hop_and_descend(sides, 1, 1, "arc recrossing one side with a flip");
      }

    // (ii): two same-chirality returns to one side, interleaved
    for (int t = 0; t < static_cast<int>(ds.size()); ++t) {
      const DArc& x = ds[t];
      if (x.kind != DArc::Same || x.l_from != x.l_to) continue;
      for (int u = t + 1; u < static_cast<int>(ds.size()); ++u) {
        const DArc& y = ds[u];
        if (y.kind != DArc::Same || y.s_from != x.s_from || y.l_from != y.l_to ||
            y.l_from != x.l_from)
          continue;
        Span sx = make_span(o, c, x), sy = make_span(o, c, y);
        int inside = (sx.u_off < sy.u_off && sy.u_off < sx.v_off ? 1 : 0) +
                     (sx.u_off < sy.v_off && sy.v_off < sx.v_off ? 1 : 0);
        if (inside != 1) continue;
        auto sides = span_bicorn_sides(o, c, x);
        require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                "interleaved pocket separates");
        return hop_and_descend(sides, 0, 1, "interleaved returns to one side");
      }
    }

    // (iii): a parallel arc crossing from one side of the corn to the other
    for (const DArc& dd : ds)
      if (dd.kind == DArc::Par && dd.l_from != dd.l_to) {
        auto sides = parallel_corn_sides(o, c, dd);
        require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                "parallel pocket separates");
        return hop_and_descend(sides, 1, 2, "parallel arc crossing the corn");
      }

    // (iv): parallels around consecutive corners in crossed order
    for (int fam = 0; fam < 2; ++fam) {
      const bool want = fam == 0;
      for (int s = 0; s < c.k; ++s) {
        for (const DArc& x : ds) {
          if (x.kind != DArc::Par || x.m != s || x.l_from != want || x.l_to != want) continue;
          int fx = trav_offset(o, c.b_sides[s], par_foot_pos(x, s));
          for (const DArc& y : ds) {
            if (y.kind != DArc::Par || y.m != (s + 1) % c.k || y.l_from != want ||
                y.l_to != want)
              continue;
            int fy = trav_offset(o, c.b_sides[s], par_foot_pos(y, s));
            if (fx <= fy) continue;
            auto sides = parallel_corn_sides(o, c, x);
            require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                    "crossed parallel pocket separates");
            return hop_and_descend(sides, 0, 2, "parallels crossing around one side");
          }
        }
      }
    }

    // (v): a return whose span swallows one foot of a parallel
    for (int fam = 0; fam < 2; ++fam) {
      const bool want = fam == 0;
      for (const DArc& x : ds) {
        if (x.kind != DArc::Same || x.l_from != want || x.l_to != want) continue;
        Span sx = make_span(o, c, x);
        for (const DArc& y : ds) {
          if (y.kind != DArc::Par || y.l_from != want || y.l_to != want) continue;
          int foot = -1;
          if (y.s_from == x.s_from)
            foot = trav_offset(o, c.b_sides[x.s_from], y.b_from);
          else if (y.s_to == x.s_from)
            foot = trav_offset(o, c.b_sides[x.s_from], y.b_to);
          if (foot <= sx.u_off || foot >= sx.v_off) continue;
          auto sides = span_bicorn_sides(o, c, x);
          require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                  "swallowing pocket separates");
          return hop_and_descend(sides, 0, 1, "return swallowing a parallel foot");
        }
      }
    }

    // (vi): two same-chirality parallels to one side, not nested
    for (int fam = 0; fam < 2; ++fam) {
      const bool want = fam == 0;
      for (int t = 0; t < static_cast<int>(ds.size()); ++t) {
        const DArc& x = ds[t];
        if (x.kind != DArc::Par || x.l_from != want || x.l_to != want) continue;
        for (int u = t + 1; u < static_cast<int>(ds.size()); ++u) {
          const DArc& y = ds[u];
          if (y.kind != DArc::Par || y.m != x.m || y.l_from != want || y.l_to != want) continue;
          if (par_nested(o, c, x, y) || par_nested(o, c, y, x)) continue;
          auto sides = parallel_corn_sides(o, c, x);
          require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                  "unnested parallel pocket separates");
          return hop_and_descend(sides, 0, 2, "unnested parallels to one side");
        }
      }
    }

    return reroute(c, d, ds, 0);
  }

  Bicorn base_case(const TwoKCorn& c, const Bicorn& d, int s_star) {
    auto ys = y_points(o, c, d);
    auto ds = build_darcs(o, c, ys, d.alpha.curve);
    const int nd = static_cast<int>(ds.size());
    const int other = 1 - s_star;

    std::vector<const DArc*> interior;
    for (int t = 1; t + 1 < nd; ++t) interior.push_back(&ds[t]);
    for (const DArc* dd : interior)
      require(dd->kind == DArc::Same && dd->s_from == other, "InvariantViolation",
              "interior probe point off the opposite side");

    for (const DArc* dd : interior)
      if (dd->l_from != dd->l_to) {
        auto sides = span_bicorn_sides(o, c, *dd);
        require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                "once-crossing pocket separates");
        return hop_and_descend(sides, 1, 1, "arc recrossing the side with a flip");
      }
    for (int t = 0; t < static_cast<int>(interior.size()); ++t) {
      const DArc& x = *interior[t];
      for (int u = t + 1; u < static_cast<int>(interior.size()); ++u) {
        const DArc& y = *interior[u];
        if (y.l_from != x.l_from) continue;
        Span sx = make_span(o, c, x), sy = make_span(o, c, y);
        int inside = (sx.u_off < sy.u_off && sy.u_off < sx.v_off ? 1 : 0) +
                     (sx.u_off < sy.v_off && sy.v_off < sx.v_off ? 1 : 0);
        if (inside != 1) continue;
        auto sides = span_bicorn_sides(o, c, x);
        require(!class_of_sides(o, sides).zero(), "InvariantViolation",
                "interleaved pocket separates");
        return hop_and_descend(sides, 0, 1, "interleaved returns to the side");
      }
    }
    return reroute(c, d, ds, 3);
  }

  // Steps the corn off the probe: replaces pocket arcs of the corn by the
  // outermost surviving arcs of one chirality, preferring the left family,
  // then finishes through the rerouted copy.
  Bicorn reroute(const TwoKCorn& c, const Bicorn& d, const std::vector<DArc>& ds,
                 int final_expect) {
    const int k = c.k;
    auto family = [&](bool want) {
      std::vector<const DArc*> F;
      for (const DArc& dd : ds)
        if ((dd.kind == DArc::Same || dd.kind == DArc::Par) && dd.l_from == want &&
            dd.l_to == want)
          F.push_back(&dd);
      return F;
    };
    std::vector<const DArc*> F = family(true);
    if (F.empty()) F = family(false);
    if (F.empty()) {
      cb.hop(bicorn_sides(d), final_expect, "probe meets the corn along shared arcs only");
      return d;
    }

    // outermost parallel per A-side, or the side itself
    std::vector<CornArc> xsides(k);
    std::vector<std::pair<int, int>> keep(k), keep_off(k);
    std::vector<bool> has_par(k, false);
    for (int i = 0; i < k; ++i) {
      xsides[i] = c.a_sides[i];
      keep[i] = {c.b_sides[i].from_pos, c.b_sides[i].to_pos};
      keep_off[i] = {0, win_len(o, win_of(c.b_sides[i]))};
    }
    for (int m = 0; m < k; ++m) {
      std::vector<const DArc*> pm;
      for (const DArc* dd : F)
        if (dd->kind == DArc::Par && dd->m == m) pm.push_back(dd);
      if (pm.empty()) continue;
      const DArc* outer = nullptr;
      for (const DArc* cand : pm) {
        bool all = true;
        for (const DArc* oth : pm)
          if (oth != cand && !par_nested(o, c, *oth, *cand)) {
            all = false;
            break;
          }
        if (all) {
          outer = cand;
          break;
        }
      }
      require(outer != nullptr, "InvariantViolation", "parallel arcs fail to nest");
      const int mp = (m + k - 1) % k;
      int zp = par_foot_pos(*outer, m), wp = par_foot_pos(*outer, mp);
      xsides[m] = (outer->s_from == mp) ? outer->arc : reversed(outer->arc);
      has_par[m] = true;
      keep[m].first = zp;
      keep_off[m].first = trav_offset(o, c.b_sides[m], zp);
      keep[mp].second = wp;
      keep_off[mp].second = trav_offset(o, c.b_sides[mp], wp);
    }
    for (int i = 0; i < k; ++i)
      require(keep_off[i].first <= keep_off[i].second, "InvariantViolation",
              "replacement arcs cross over a side");

    // outermost returns inside the kept windows
    std::vector<std::vector<Span>> spans(k);
    for (const DArc* dd : F) {
      if (dd->kind != DArc::Same) continue;
      const int s = dd->s_from;
      Span sp = make_span(o, c, *dd);
      bool maximal = true;
      for (const DArc* oth : F) {
        if (oth == dd || oth->kind != DArc::Same || oth->s_from != s) continue;
        Span so = make_span(o, c, *oth);
        if (so.u_off <= sp.u_off && sp.v_off <= so.v_off &&
            !(so.u_off == sp.u_off && so.v_off == sp.v_off)) {
          maximal = false;
          break;
        }
      }
      if (!maximal) continue;
      if (sp.u_off >= keep_off[s].first && sp.v_off <= keep_off[s].second)
        spans[s].push_back(sp);
      else if (sp.v_off <= keep_off[s].first || sp.u_off >= keep_off[s].second)
        continue;  // inside a replaced pocket
      else
        fail("InvariantViolation", "return straddles a replaced pocket");
    }
    for (auto& v : spans) {
      std::sort(v.begin(), v.end(), [](const Span& l, const Span& r) { return l.u_off < r.u_off; });
      for (int j = 0; j + 1 < static_cast<int>(v.size()); ++j)
        require(v[j].v_off <= v[j + 1].u_off, "InvariantViolation", "kept returns interleave");
    }

    // a nonseparating pocket finishes the walk directly
    for (int m = 0; m < k; ++m) {
      if (!has_par[m]) continue;
      const int mp = (m + k - 1) % k;
      std::vector<CornArc> cp{
          c.a_sides[m], side_piece(o, c.b_sides[m], c.b_sides[m].from_pos, keep[m].first),
          reversed(xsides[m]),
          side_piece(o, c.b_sides[mp], keep[mp].second, c.b_sides[mp].to_pos)};
      if (!class_of_sides(o, cp).zero())
        return hop_and_descend(cp, 0, 2, "replacement pocket is nonseparating");
    }
    for (int s = 0; s < k; ++s)
      for (const Span& sp : spans[s]) {
        std::vector<CornArc> cs{sp.arc, side_piece(o, c.b_sides[s], sp.v_pos, sp.u_pos)};
        if (!class_of_sides(o, cs).zero())
          return hop_and_descend(cs, 0, 1, "kept pocket is nonseparating");
      }

    std::vector<CornArc> c0 = assemble_reroute(o, c, xsides, keep, spans);
    require(class_of_sides(o, c0) == corn_class(o, c), "InvariantViolation",
            "reroute changed the homology class");
    Normalized n = normalize_cycle(o, a_parents, c0);
    require(!n.whole, "InvariantViolation", "reroute closed up into a parent");
    cb.hop(corn_sides(n.corn), 0, "reroute off the probe");
    cb.hop(bicorn_sides(d), final_expect, "rerouted curve clears the probe");
    return d;
  }
};

}  // namespace

Bicorn step1_bicorn(const Overlay& o, const std::vector<int>& A, const TwoKCorn& c) {
  validate_corn(o, c);
  require(!A.empty(), "InvariantViolation", "curve family must be nonempty");
  auto pick = step1_scan(o, A, c);
  if (pick.first < 0) fail("NoQualifyingSide", "every member meets every side at most once");
  return step1_build(o, c, pick.first, pick.second);
}

ArcClass classify_arc(const Overlay& o, const TwoKCorn& c, const CornArc& arc) {
  validate_corn(o, c);
  check_side_shape(o, arc);
  const auto& crs = o.crossings();
  auto locate = [&](int xid, int arc_pos) -> std::pair<int, int> {
    for (int s = 0; s < c.k; ++s) {
      const CornArc& side = c.b_sides[s];
      int pb = side.curve == arc.curve ? arc_pos
               : other_curve(crs[xid], arc.curve) == side.curve ? pos_on(crs[xid], side.curve)
                                                                : -1;
      if (pb >= 0 && in_win(o, win_of(side), pb)) return {s, pb};
    }
    fail("InvariantViolation", "arc endpoint misses every side");
  };
  ArcClass res;
  auto [bi, pb_from] = locate(id_at(o, arc.curve, arc.from_pos), arc.from_pos);
  auto [bj, pb_to] = locate(id_at(o, arc.curve, arc.to_pos), arc.to_pos);
  res.bi = bi;
  res.bj = bj;

  // the side itself needs no interior check
  for (int i = 0; i < c.k; ++i) {
    const CornArc& al = c.a_sides[i];
    if (al.curve != arc.curve) continue;
    if (win_of(al).lo == win_of(arc).lo && win_of(al).hi == win_of(arc).hi) {
      res.kind = ArcClass::EqualsSide;
      res.side = i;
      return res;
    }
  }

  Win wa = win_of(arc);
  const int len = win_len(o, wa);
  for (int x = 0; x < static_cast<int>(crs.size()); ++x) {
    int pa = pos_on(crs[x], arc.curve);
    if (pa < 0) continue;
    int off = win_offset(o, wa, pa);
    if (off <= 0 || off >= len) continue;
    int oc = other_curve(crs[x], arc.curve);
    auto touches = [&](const CornArc& side) {
      if (side.curve == arc.curve) return in_win(o, win_of(side), pa);
      return side.curve == oc && in_win(o, win_of(side), pos_on(crs[x], oc));
    };
    for (int s = 0; s < c.k; ++s)
      if (touches(c.a_sides[s]) || touches(c.b_sides[s]))
        fail("ArcTouchesInterior", "arc interior meets the corn");
  }

  if (bi == bj) {
    res.kind = ArcClass::JoinsSame;
  } else if (bj == (bi + 1) % c.k) {
    res.kind = ArcClass::ParallelTo;
    res.side = bj;
  } else if (bi == (bj + 1) % c.k) {
    res.kind = ArcClass::ParallelTo;
    res.side = bi;
  } else {
    res.kind = ArcClass::JoinsNonAdjacent;
  }
  // chirality is meaningful only where the arc is transverse to the side
  const CornArc& sf = c.b_sides[bi];
  const CornArc& st = c.b_sides[bj];
  if (sf.curve != arc.curve)
    res.from_left = germ_on_left(o, sf.curve, pb_from, sf.forward, arc.curve, arc.from_pos,
                                 arc.forward);
  if (st.curve != arc.curve)
    res.to_left = germ_on_left(o, st.curve, pb_to, st.forward, arc.curve, arc.to_pos,
                               !arc.forward);
  return res;
}

bool arc_nested_in(const Overlay& o, const TwoKCorn& c, const CornArc& inner,
                   const CornArc& outer) {
  ArcClass ci = classify_arc(o, c, inner), co = classify_arc(o, c, outer);
  if (ci.kind != co.kind) return false;
  auto foot = [&](const CornArc& arc, int end_pos, int side) {
    int xid = id_at(o, arc.curve, end_pos);
    return trav_offset(o, c.b_sides[side], pos_on(o.crossings()[xid], c.b_sides[side].curve));
  };
  if (ci.kind == ArcClass::JoinsSame) {
    if (ci.bi != co.bi) return false;
    int i1 = foot(inner, inner.from_pos, ci.bi), i2 = foot(inner, inner.to_pos, ci.bi);
    int o1 = foot(outer, outer.from_pos, co.bi), o2 = foot(outer, outer.to_pos, co.bi);
    return std::min(o1, o2) <= std::min(i1, i2) && std::max(i1, i2) <= std::max(o1, o2);
  }
  if (ci.kind == ArcClass::ParallelTo) {
    if (ci.side != co.side) return false;
    const int m = ci.side, mp = (m + c.k - 1) % c.k;
    auto feet = [&](const CornArc& arc, const ArcClass& cls) {
      int fm = cls.bi == m ? foot(arc, arc.from_pos, m) : foot(arc, arc.to_pos, m);
      int fp = cls.bi == mp ? foot(arc, arc.from_pos, mp) : foot(arc, arc.to_pos, mp);
      return std::make_pair(fm, fp);
    };
    auto [im, ip] = feet(inner, ci);
    auto [om, op] = feet(outer, co);
    return ip >= op && im <= om;
  }
  return false;
}

std::pair<Bicorn, PathCertificate> reduce_corn(const Overlay& o, const std::vector<int>& A,
                                               const std::vector<int>& B, const TwoKCorn& c) {
  require(o.is_reduced(), "NotReduced", "corn reduction needs a reduced overlay");
  require(!A.empty() && !B.empty(), "InvariantViolation", "curve families must be nonempty");
  std::set<int> as(A.begin(), A.end()), bs(B.begin(), B.end());
  require(as.size() == A.size() && bs.size() == B.size(), "InvariantViolation",
          "family members repeat");
  for (int x : A)
    require(!bs.count(x), "InvariantViolation", "families must not share members");
  auto check_family = [&](const std::vector<int>& fam) {
    for (int x : fam) {
      require(x >= 0 && x < o.curve_count() && o.closed(x), "InvariantViolation",
              "family member must be a closed overlay curve");
      if (o.curve_separating(x)) fail("SeparatingInput", "family members must be nonseparating");
    }
    for (int i = 0; i < static_cast<int>(fam.size()); ++i)
      for (int j = i + 1; j < static_cast<int>(fam.size()); ++j)
        require(o.crossing_count(fam[i], fam[j]) == 0, "InvariantViolation",
                "family members must be disjoint");
  };
  check_family(A);
  check_family(B);
  validate_corn(o, c);
  for (const CornArc& s : c.a_sides)
    require(as.count(s.curve), "InvariantViolation", "side parent missing from the first family");
  for (const CornArc& s : c.b_sides)
    require(bs.count(s.curve), "InvariantViolation",
            "side parent missing from the second family");
  if (corn_class(o, c).zero()) fail("SeparatingInput", "corn must be nonseparating");

  Reducer red{o, A, as, CertBuilder{o, {}, {}}};
  if (c.k == 1) return {to_bicorn(c), PathCertificate{}};
  red.cb.start(corn_sides(c));
  Bicorn d = red.run(c);
  require(red.cb.cert.total_bound <= c.k * c.k + 2 * c.k, "InvariantViolation",
          "certificate exceeds the distance budget");
  return {d, std::move(red.cb.cert)};
}

Bicorn nontrivsep_to_nonsep(const Overlay& o, int a, int b, const Bicorn& c) {
  require(o.is_reduced(), "NotReduced", "needs a reduced overlay");
  validate_bicorn(o, c);
  require(!c.degenerate && !c.alpha.pin_bounded, "InvariantViolation",
          "crossing-form bicorn expected");
  require(c.alpha.curve == a && c.beta.curve == b, "InvariantViolation",
          "bicorn sides must lie on the given pair");
  require(o.closed(a), "InvariantViolation", "first curve must be closed");
  if (!bicorn_class(o, c).zero())
    fail("PreconditionNotNontrivSep", "bicorn is nonseparating");
  if (is_trivially_separating(o.refined(), refined_walk_of_bicorn(o, c)))
    fail("PreconditionNotNontrivSep", "bicorn cuts off a punctured disk");

  const Bicorn cc = c.alpha.forward ? c : Bicorn{reversed(c.alpha), reversed(c.beta),
                                                 c.corner_q, c.corner_p, false, -1};
  const int P = cc.alpha.from_pos;
  Win wb = win_of(cc.beta);
  struct Hit {
    int gap, a_pos, id;
  };
  std::vector<Hit> hits;
  const auto& crs = o.crossings();
  for (int x = 0; x < static_cast<int>(crs.size()); ++x) {
    if (pos_on(crs[x], a) < 0 || other_curve(crs[x], a) != b) continue;
    if (!in_win(o, wb, pos_on(crs[x], b))) continue;
    hits.push_back({fwd_gap(o, a, P, pos_on(crs[x], a)), pos_on(crs[x], a), x});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& l, const Hit& r) { return l.gap < r.gap; });
  const int n = static_cast<int>(hits.size());
  require(n >= 2 && hits[0].gap == 0, "InvariantViolation", "corner sweep is inconsistent");
  require(hits[1].a_pos == cc.alpha.to_pos, "InvariantViolation",
          "second visit is not the far corner");
  H1Class sum;
  int best = -1;
  Bicorn best_b;
  for (int i = 0; i < n; ++i) {
    const Hit& h1 = hits[i];
    const Hit& h2 = hits[(i + 1) % n];
    Bicorn cand;
    cand.alpha = cross_arc(a, h1.a_pos, h2.a_pos, true);
    cand.beta = side_piece(o, cc.beta, pos_on(crs[h2.id], b), pos_on(crs[h1.id], b));
    cand.corner_p = h1.id;
    cand.corner_q = h2.id;
    H1Class cls = bicorn_class(o, cand);
    sum = (i == 0) ? cls : (sum ^ cls);
    if (i >= 1 && best < 0 && !cls.zero()) {
      best = i;
      best_b = cand;
    }
  }
  require(sum == o.curve_class(a), "InvariantViolation",
          "cut classes do not telescope to the curve class");
  require(best >= 1, "InvariantViolation", "every consecutive cut separates");
  validate_bicorn(o, best_b);
  CurveSpec sx = realize_bicorn(o, cc, "c", 1);
  CurveSpec sy = realize_bicorn(o, best_b, "d", 3);
  Overlay t = reduce_to_minimal_position(Overlay::build(o.base(), {sx, sy}));
  require(intersection_number(t, 0, 1) == 0, "InvariantViolation",
          "candidate crosses the input bicorn");
  return best_b;
}

std::vector<GeneratorBicorn> arc_bicorn_generators(const Overlay& o, int a,
                                                   const std::vector<int>& arcs) {
  require(a >= 0 && a < o.curve_count(), "InvariantViolation", "host index out of range");
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(arcs.size()); ++j) {
      if (arcs[i] == arcs[j]) fail("ArcsNotDisjoint", "generator arc repeated");
      if (o.crossing_count(arcs[i], arcs[j]) > 0)
        fail("ArcsNotDisjoint", "generator arcs cross");
    }
  std::vector<GeneratorBicorn> out;
  for (int sig : arcs) {
    require(sig >= 0 && sig < o.curve_count() && sig != a, "InvariantViolation",
            "generator index out of range");
    require(!o.closed(sig), "InvariantViolation", "generator must be an open arc");
    const CurveSpec& sp = o.spec(sig);
    require(sp.start.kind == CurveSpec::Endpoint::OnCurve && sp.start.host == a &&
                sp.finish.kind == CurveSpec::Endpoint::OnCurve && sp.finish.host == a,
            "InvariantViolation", "generator endpoints must be pinned on the host");
    require(o.crossing_count(sig, a) == 0, "InvariantViolation",
            "generator interior touches the host");
    auto s1 = std::make_pair(sp.start.host_seg, sp.start.t);
    auto s2 = std::make_pair(sp.finish.host_seg, sp.finish.t);
    require(s1 != s2, "InvariantViolation", "generator pins coincide");
    const bool start_upper = s1 > s2;
    const auto& lo = start_upper ? s2 : s1;
    const auto& hi = start_upper ? s1 : s2;
    GeneratorBicorn g;
    g.bicorn.alpha.curve = a;
    g.bicorn.alpha.pin_bounded = true;
    g.bicorn.alpha.forward = true;
    g.bicorn.alpha.from_seg = lo.first;
    g.bicorn.alpha.from_t = lo.second;
    g.bicorn.alpha.to_seg = hi.first;
    g.bicorn.alpha.to_t = hi.second;
    g.bicorn.beta.curve = sig;
    g.bicorn.beta.whole = true;
    g.bicorn.beta.forward = start_upper;
    g.cls = class_of_sides(o, {g.bicorn.alpha, g.bicorn.beta});
    out.push_back(g);
  }
  return out;
}

GeneratorBicorn nontrivsep_bicorn_search(const Overlay& o,
                                         const std::vector<GeneratorBicorn>& gens) {
  for (const GeneratorBicorn& g : gens) {
    if (!g.cls.zero()) continue;
    if (!is_trivially_separating(o.refined(), refined_walk_of_bicorn(o, g.bicorn))) return g;
  }
  fail("NoneFound", "every separating generator cuts off a punctured disk");
}

}  // namespace nscorn
