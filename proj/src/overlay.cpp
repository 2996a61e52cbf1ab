#include "nscorn/overlay.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "nscorn/error.hpp"

namespace nscorn {

namespace {

using Q = Rank;

struct Pt {
  Q x, y;
};

bool operator<(const Pt& a, const Pt& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}
Pt operator-(const Pt& a, const Pt& b) { return {a.x - b.x, a.y - b.y}; }
Pt operator+(const Pt& a, const Pt& b) { return {a.x + b.x, a.y + b.y}; }
Pt operator*(const Q& s, const Pt& a) { return {s * a.x, s * a.y}; }

Q cross(const Pt& a, const Pt& b) { return a.x * b.y - a.y * b.x; }

// Rational point on the unit circle. Increasing u walks clockwise, so a face
// boundary laid out in phi order keeps the face interior on the right,
// matching the convention that face_of(d) lies right of d.
Pt circle_point(const Q& u) {
  Q u2 = u * u;
  Q den = 1 + u2;
  return {(1 - u2) / den, Q(-2) * u / den};
}

// Counterclockwise angular order starting just above the positive x axis.
int half_plane(const Pt& v) {
  if (v.y > 0 || (v.y == 0 && v.x > 0)) return 0;
  return 1;
}
bool angle_less(const Pt& a, const Pt& b) {
  int ha = half_plane(a), hb = half_plane(b);
  if (ha != hb) return ha < hb;
  return cross(a, b) > 0;
}

// Strict interior intersection; parameters along each segment returned.
// Chord endpoints sit on a circle, so distinct chords never overlap along a
// line and the parallel case can simply report no crossing.
struct Hit {
  Q s, t;
  Pt at;
};
std::optional<Hit> seg_intersect(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  Pt r = b - a, s = d - c;
  Q den = cross(r, s);
  if (den == 0) return std::nullopt;
  Pt ca = c - a;
  Q u = cross(ca, s) / den;
  Q v = cross(ca, r) / den;
  if (u <= 0 || u >= 1 || v <= 0 || v >= 1) return std::nullopt;
  return Hit{u, v, a + u * r};
}

bool point_on_segment(const Pt& p, const Pt& a, const Pt& b, Q* param = nullptr) {
  Pt r = b - a;
  if (cross(r, p - a) != 0) return false;
  Q t = (r.x != 0) ? Q((p.x - a.x) / r.x) : Q((p.y - a.y) / r.y);
  if (t < 0 || t > 1) return false;
  if (param) *param = t;
  return true;
}

int dart_of_edge_with_face(const CombinatorialMap& m, int e, int f) {
  Dart d = m.edge_dart(e);
  if (m.face_of(d) == f) return d;
  if (m.face_of(m.alpha(d)) == f) return m.alpha(d);
  fail("NotTransverse", "curve crosses an edge that does not bound its face");
}

int other_face(const CombinatorialMap& m, int e, int f) {
  return m.face_of(m.alpha(dart_of_edge_with_face(m, e, f)));
}

struct EndRef {
  enum Kind { OnEdge, OnHost, Tip } kind = OnEdge;
  int event = -1;  // OnEdge: event index along the curve
  int node = -1;   // OnHost/Tip: face-node id
};

struct FaceNode {
  int kind = 0;  // 0 crossing, 1 T point, 2 tip
  int face = -1;
  Pt at;
  int c1 = -1, s1 = -1;  // crossing: first chord; T: host chord
  int c2 = -1, s2 = -1;  // crossing: second chord; T/tip: the arc segment
  int xindex = -1;
  std::vector<std::pair<Pt, Dart>> spokes;
};

struct SegLayout {
  int home = -1;
  EndRef from, to;
  Pt a, b;
  bool placed = false;
  std::vector<std::pair<Q, int>> cuts;  // (chord parameter, face-node id)
  int first_piece = -1, piece_count = 0;
};

struct EdgeEvent {
  Q rank;
  int curve = -1, ev = -1;
  Dart c_fwd = -1, c_back = -1;
};

struct Builder {
  const CombinatorialMap& m;
  const std::vector<CurveSpec>& specs;

  // Outputs handed to the Overlay.
  std::vector<std::vector<int>> homes;
  std::vector<Overlay::DartInfo> dinfo;
  std::vector<Overlay::Crossing> xings;
  std::vector<std::vector<Dart>> walks;
  std::vector<std::vector<int>> along, offsets, seg_of_pos;
  std::vector<Dart> sig, alp;

  // Scratch.
  std::vector<std::vector<SegLayout>> segs;
  std::vector<FaceNode> fnodes;
  std::vector<std::vector<EdgeEvent>> on_edge;
  std::vector<std::map<std::pair<int, int>, int>> slot_of;
  std::vector<std::map<Dart, int>> pos_in_face;
  std::vector<Pt> face_center;
  std::vector<int> edge_piece_base;
  int piece_n = 0;

  Builder(const CombinatorialMap& base, const std::vector<CurveSpec>& sp)
      : m(base), specs(sp) {}

  int curves() const { return static_cast<int>(specs.size()); }
  static Dart fore(int piece) { return 2 * piece; }
  static Dart aft(int piece) { return 2 * piece + 1; }

  // Face entered after crossing event k of curve c.
  int after_face(int c, int k) const {
    return specs[c].closed ? homes[c][k] : homes[c][k + 1];
  }

  void resolve_homes();
  void index_edge_events();
  void lay_out_chords();
  void place_tips();
  void intersect_chords();
  void number_crossings();
  void allocate_pieces();
  void assemble();
  int locate_cell(const CombinatorialMap& plain, int f);
  void relocate_marks(const CombinatorialMap& plain, std::map<int, int>& punct,
                      std::set<int>& bkeys);
  void traversal_metadata(const CombinatorialMap& rm);
};

void Builder::resolve_homes() {
  const int nc = curves();
  homes.assign(nc, {});
  for (int c = 0; c < nc; ++c) {
    const CurveSpec& sp = specs[c];
    const int ne = static_cast<int>(sp.events.size());
    for (const auto& [e, r] : sp.events) {
      require(e >= 0 && e < m.edge_count(), "InvariantViolation", "curve event names no edge");
      require(r > 0 && r < 1, "TangencyOrTriplePoint", "crossing rank touches an edge end");
    }
    if (sp.closed) {
      require(ne >= 2, "NotTransverse", "a closed transverse curve crosses at least two edges");
    } else {
      for (const CurveSpec::Endpoint* ep : {&sp.start, &sp.finish}) {
        if (ep->kind == CurveSpec::Endpoint::OnCurve) {
          require(ep->host >= 0 && ep->host < c, "InvariantViolation",
                  "arc endpoint host must be an earlier curve");
          require(ep->t > 0 && ep->t < 1, "TangencyOrTriplePoint",
                  "arc endpoint parameter touches a chord end");
        } else {
          require(ne >= 1, "NotTransverse", "a free arc end needs an adjacent crossing");
        }
      }
    }

    auto host_home = [&](const CurveSpec::Endpoint& ep) {
      require(ep.host_seg >= 0 && ep.host_seg < static_cast<int>(homes[ep.host].size()),
              "InvariantViolation", "arc endpoint names no host segment");
      return homes[ep.host][ep.host_seg];
    };

    std::vector<int>& home = homes[c];
    if (!sp.closed && ne == 0) {
      require(sp.start.kind == CurveSpec::Endpoint::OnCurve &&
                  sp.finish.kind == CurveSpec::Endpoint::OnCurve,
              "NotTransverse", "an eventless arc needs both ends pinned");
      int f1 = host_home(sp.start), f2 = host_home(sp.finish);
      require(f1 == f2, "NotTransverse", "pinned arc ends lie in different faces");
      require(sp.start.host != sp.finish.host || sp.start.host_seg != sp.finish.host_seg,
              "TangencyOrTriplePoint", "eventless arc would lie along its host");
      home = {f1};
      continue;
    }

    auto propagate = [&](int f0) {
      std::vector<int> after(ne);
      after[0] = f0;
      for (int k = 1; k < ne; ++k) after[k] = other_face(m, sp.events[k].first, after[k - 1]);
      return after;
    };
    auto consistent = [&](int f0) {
      try {
        std::vector<int> after = propagate(f0);
        if (sp.closed && other_face(m, sp.events[0].first, after[ne - 1]) != f0) return false;
        if (!sp.closed && sp.start.kind == CurveSpec::Endpoint::OnCurve &&
            other_face(m, sp.events[0].first, f0) != host_home(sp.start))
          return false;
        if (!sp.closed && sp.finish.kind == CurveSpec::Endpoint::OnCurve &&
            after[ne - 1] != host_home(sp.finish))
          return false;
      } catch (const Error&) {
        return false;
      }
      return true;
    };

    int f0 = -1;
    if (sp.start_face >= 0) {
      f0 = m.face_by_key(sp.start_face);
      require(consistent(f0), "NotTransverse",
              "declared start face does not fit the crossing list");
    } else {
      Dart d0 = m.edge_dart(sp.events[0].first);
      std::vector<int> cand;
      for (int f : {m.face_of(d0), m.face_of(m.alpha(d0))})
        if (consistent(f)) cand.push_back(f);
      require(!cand.empty(), "NotTransverse", "no face sequence fits the crossing list");
      require(cand.size() == 1, "AmbiguousTraversal",
              "both sides of the first edge fit; declare start_face");
      f0 = cand[0];
    }

    std::vector<int> after = propagate(f0);
    if (sp.closed) {
      home = after;
    } else {
      home.assign(ne + 1, -1);
      home[0] = other_face(m, sp.events[0].first, f0);
      for (int k = 0; k < ne; ++k) home[k + 1] = after[k];
    }
  }
}

void Builder::index_edge_events() {
  on_edge.assign(m.edge_count(), {});
  slot_of.assign(m.edge_count(), {});
  for (int c = 0; c < curves(); ++c)
    for (int k = 0; k < static_cast<int>(specs[c].events.size()); ++k)
      on_edge[specs[c].events[k].first].push_back(
          {specs[c].events[k].second, c, k, -1, -1});
  for (int e = 0; e < m.edge_count(); ++e) {
    auto& v = on_edge[e];
    std::sort(v.begin(), v.end(),
              [](const EdgeEvent& x, const EdgeEvent& y) { return x.rank < y.rank; });
    for (size_t j = 0; j + 1 < v.size(); ++j)
      if (v[j].rank == v[j + 1].rank) {
        if (v[j].curve == v[j + 1].curve) fail("SelfCrossing", "curve touches itself on an edge");
        fail("TangencyOrTriplePoint", "two crossings share an edge position");
      }
    for (size_t j = 0; j < v.size(); ++j) slot_of[e][{v[j].curve, v[j].ev}] = static_cast<int>(j);
  }
}

void Builder::lay_out_chords() {
  pos_in_face.assign(m.face_count(), {});
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& darts = m.face(f).darts;
    for (int i = 0; i < static_cast<int>(darts.size()); ++i) pos_in_face[f][darts[i]] = i;
  }
  auto boundary_point = [&](int f, int e, const Q& rank) {
    int d = dart_of_edge_with_face(m, e, f);
    Q t = (d == m.edge_dart(e)) ? rank : 1 - rank;
    return circle_point(Q(pos_in_face[f].at(d)) + t);
  };

  const int nc = curves();
  segs.assign(nc, {});
  for (int c = 0; c < nc; ++c) {
    const CurveSpec& sp = specs[c];
    const int ne = static_cast<int>(sp.events.size());
    const int ns = static_cast<int>(homes[c].size());
    segs[c].resize(ns);
    for (int s = 0; s < ns; ++s) segs[c][s].home = homes[c][s];

    auto pin = [&](const CurveSpec::Endpoint& ep, int self_seg) {
      SegLayout& host = segs[ep.host][ep.host_seg];
      require(host.placed && host.from.kind == EndRef::OnEdge && host.to.kind == EndRef::OnEdge,
              "InvariantViolation", "arc endpoint host segment is not a plain chord");
      FaceNode node;
      node.kind = 1;
      node.face = host.home;
      node.at = host.a + ep.t * (host.b - host.a);
      node.c1 = ep.host;
      node.s1 = ep.host_seg;
      node.c2 = c;
      node.s2 = self_seg;
      int id = static_cast<int>(fnodes.size());
      fnodes.push_back(node);
      host.cuts.push_back({ep.t, id});
      EndRef ref;
      ref.kind = EndRef::OnHost;
      ref.node = id;
      return ref;
    };

    if (sp.closed) {
      for (int k = 0; k < ne; ++k) {
        SegLayout& sg = segs[c][k];
        int kn = (k + 1) % ne;
        sg.from = {EndRef::OnEdge, k, -1};
        sg.to = {EndRef::OnEdge, kn, -1};
        sg.a = boundary_point(sg.home, sp.events[k].first, sp.events[k].second);
        sg.b = boundary_point(sg.home, sp.events[kn].first, sp.events[kn].second);
        sg.placed = true;
      }
      continue;
    }

    for (int s = 0; s < ns; ++s) {
      SegLayout& sg = segs[c][s];
      if (s > 0) {
        sg.from = {EndRef::OnEdge, s - 1, -1};
        sg.a = boundary_point(sg.home, sp.events[s - 1].first, sp.events[s - 1].second);
      }
      if (s < ne) {
        sg.to = {EndRef::OnEdge, s, -1};
        sg.b = boundary_point(sg.home, sp.events[s].first, sp.events[s].second);
      }
    }
    if (sp.start.kind == CurveSpec::Endpoint::OnCurve) {
      segs[c][0].from = pin(sp.start, 0);
      segs[c][0].a = fnodes[segs[c][0].from.node].at;
    } else if (ne > 0) {
      segs[c][0].from = {EndRef::Tip, -1, -1};
    }
    if (sp.finish.kind == CurveSpec::Endpoint::OnCurve) {
      segs[c][ns - 1].to = pin(sp.finish, ns - 1);
      segs[c][ns - 1].b = fnodes[segs[c][ns - 1].to.node].at;
    } else if (ne > 0) {
      segs[c][ns - 1].to = {EndRef::Tip, -1, -1};
    }
    for (int s = 0; s < ns; ++s) {
      SegLayout& sg = segs[c][s];
      sg.placed = sg.from.kind != EndRef::Tip && sg.to.kind != EndRef::Tip;
    }
  }

  // Aiming points for free ends: average of every boundary point of the face.
  face_center.assign(m.face_count(), Pt{0, 0});
  std::vector<std::vector<Pt>> face_pts(m.face_count());
  for (int f = 0; f < m.face_count(); ++f)
    for (int i = 0; i < static_cast<int>(m.face(f).darts.size()); ++i)
      face_pts[f].push_back(circle_point(Q(i)));
  for (int c = 0; c < nc; ++c)
    for (const auto& sg : segs[c])
      if (sg.placed) {
        face_pts[sg.home].push_back(sg.a);
        face_pts[sg.home].push_back(sg.b);
      }
  for (int f = 0; f < m.face_count(); ++f) {
    Pt sum{0, 0};
    for (const Pt& p : face_pts[f]) sum = sum + p;
    face_center[f] = Q(1, static_cast<unsigned>(face_pts[f].size())) * sum;
  }
}

void Builder::place_tips() {
  for (int c = 0; c < curves(); ++c)
    for (int s = 0; s < static_cast<int>(segs[c].size()); ++s) {
      SegLayout& sg = segs[c][s];
      if (sg.placed) continue;
      bool tip_at_from = sg.from.kind == EndRef::Tip;
      require(!(sg.from.kind == EndRef::Tip && sg.to.kind == EndRef::Tip),
              "InvariantViolation", "arc segment free on both sides");
      Pt anchor = tip_at_from ? sg.b : sg.a;
      Pt target = face_center[sg.home];
      // Stop halfway to the first obstacle on the ray; the stub then crosses
      // nothing and no later stub can touch it.
      Q stop = 1;
      for (int c2 = 0; c2 < curves(); ++c2)
        for (const auto& other : segs[c2]) {
          if (!other.placed || other.home != sg.home) continue;
          if (auto h = seg_intersect(anchor, target, other.a, other.b))
            stop = std::min(stop, h->s);
          Q t;
          if (point_on_segment(other.a, anchor, target, &t) && t > 0) stop = std::min(stop, t);
          if (point_on_segment(other.b, anchor, target, &t) && t > 0) stop = std::min(stop, t);
        }
      FaceNode node;
      node.kind = 2;
      node.face = sg.home;
      node.at = anchor + (stop / 2) * (target - anchor);
      node.c2 = c;
      node.s2 = s;
      int id = static_cast<int>(fnodes.size());
      fnodes.push_back(node);
      (tip_at_from ? sg.from.node : sg.to.node) = id;
      (tip_at_from ? sg.a : sg.b) = node.at;
      sg.placed = true;
    }
}

void Builder::intersect_chords() {
  std::vector<std::vector<std::pair<int, int>>> by_face(m.face_count());
  for (int c = 0; c < curves(); ++c)
    for (int s = 0; s < static_cast<int>(segs[c].size()); ++s)
      by_face[segs[c][s].home].push_back({c, s});

  for (int f = 0; f < m.face_count(); ++f) {
    auto& list = by_face[f];
    std::map<Pt, std::set<std::pair<int, int>>> users;
    for (const auto& fn : fnodes)
      if (fn.kind == 1 && fn.face == f) {
        users[fn.at].insert({fn.c1, fn.s1});
        users[fn.at].insert({fn.c2, fn.s2});
      }
    for (size_t i = 0; i < list.size(); ++i)
      for (size_t j = i + 1; j < list.size(); ++j) {
        SegLayout& p = segs[list[i].first][list[i].second];
        SegLayout& q = segs[list[j].first][list[j].second];
        auto h = seg_intersect(p.a, p.b, q.a, q.b);
        if (!h) continue;
        if (list[i].first == list[j].first)
          fail("SelfCrossing", "curve crosses itself inside a face");
        FaceNode node;
        node.kind = 0;
        node.face = f;
        node.at = h->at;
        node.c1 = list[i].first;
        node.s1 = list[i].second;
        node.c2 = list[j].first;
        node.s2 = list[j].second;
        int id = static_cast<int>(fnodes.size());
        fnodes.push_back(node);
        p.cuts.push_back({h->s, id});
        q.cuts.push_back({h->t, id});
        users[h->at].insert(list[i]);
        users[h->at].insert(list[j]);
      }
    for (const auto& [pt, who] : users)
      require(who.size() <= 2, "TangencyOrTriplePoint",
              "three strands meet at one point of a face");
  }
}

void Builder::number_crossings() {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(fnodes.size()); ++i)
    if (fnodes[i].kind == 0) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (fnodes[x].face != fnodes[y].face) return fnodes[x].face < fnodes[y].face;
    return fnodes[x].at < fnodes[y].at;
  });
  xings.resize(order.size());
  for (int r = 0; r < static_cast<int>(order.size()); ++r) {
    fnodes[order[r]].xindex = r;
    xings[r].a = std::min(fnodes[order[r]].c1, fnodes[order[r]].c2);
    xings[r].b = std::max(fnodes[order[r]].c1, fnodes[order[r]].c2);
  }
}

void Builder::allocate_pieces() {
  piece_n = 0;
  edge_piece_base.assign(m.edge_count(), 0);
  for (int e = 0; e < m.edge_count(); ++e) {
    edge_piece_base[e] = piece_n;
    piece_n += static_cast<int>(on_edge[e].size()) + 1;
  }
  for (int c = 0; c < curves(); ++c)
    for (auto& sg : segs[c]) {
      std::sort(sg.cuts.begin(), sg.cuts.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      sg.first_piece = piece_n;
      sg.piece_count = static_cast<int>(sg.cuts.size()) + 1;
      piece_n += sg.piece_count;
    }
}

void Builder::assemble() {
  const int nd = 2 * piece_n;
  sig.assign(nd, -1);
  alp.assign(nd, -1);
  for (int p = 0; p < piece_n; ++p) {
    alp[fore(p)] = aft(p);
    alp[aft(p)] = fore(p);
  }

  dinfo.assign(nd, {});
  for (int e = 0; e < m.edge_count(); ++e)
    for (int j = 0; j <= static_cast<int>(on_edge[e].size()); ++j) {
      dinfo[fore(edge_piece_base[e] + j)] = {-1, e, true};
      dinfo[aft(edge_piece_base[e] + j)] = {-1, e, false};
    }

  for (int c = 0; c < curves(); ++c)
    for (int s = 0; s < static_cast<int>(segs[c].size()); ++s) {
      SegLayout& sg = segs[c][s];
      std::vector<std::pair<Pt, int>> stops;
      stops.push_back({sg.a, sg.from.kind == EndRef::OnEdge ? -1 : sg.from.node});
      for (const auto& [t, id] : sg.cuts) stops.push_back({sg.a + t * (sg.b - sg.a), id});
      stops.push_back({sg.b, sg.to.kind == EndRef::OnEdge ? -1 : sg.to.node});
      for (int p = 0; p < sg.piece_count; ++p) {
        int pc = sg.first_piece + p;
        dinfo[fore(pc)] = {c, s, true};
        dinfo[aft(pc)] = {c, s, false};
        if (int id = stops[p].second; id >= 0)
          fnodes[id].spokes.push_back({stops[p + 1].first - stops[p].first, fore(pc)});
        if (int id = stops[p + 1].second; id >= 0)
          fnodes[id].spokes.push_back({stops[p].first - stops[p + 1].first, aft(pc)});
      }
      if (sg.from.kind == EndRef::OnEdge) {
        const auto& ev = specs[c].events[sg.from.event];
        on_edge[ev.first][slot_of[ev.first].at({c, sg.from.event})].c_fwd = fore(sg.first_piece);
      }
      if (sg.to.kind == EndRef::OnEdge) {
        const auto& ev = specs[c].events[sg.to.event];
        on_edge[ev.first][slot_of[ev.first].at({c, sg.to.event})].c_back =
            aft(sg.first_piece + sg.piece_count - 1);
      }
    }

  // Original vertices keep the base rotation, each dart standing in for the
  // end piece of its edge on that side.
  auto away_dart = [&](Dart d) {
    int e = m.edge_of(d);
    if (d == m.edge_dart(e)) return fore(edge_piece_base[e]);
    return aft(edge_piece_base[e] + static_cast<int>(on_edge[e].size()));
  };
  for (int v = 0; v < m.vertex_count(); ++v)
    for (Dart d : m.vertex_darts(v)) sig[away_dart(d)] = away_dart(m.sigma(d));

  // Skeleton crossings: counterclockwise rotation (E+, back, E-, fwd) where
  // E+ runs the way the entered face's boundary dart does.
  for (int e = 0; e < m.edge_count(); ++e)
    for (int j = 0; j < static_cast<int>(on_edge[e].size()); ++j) {
      EdgeEvent& ev = on_edge[e][j];
      require(ev.c_fwd >= 0 && ev.c_back >= 0, "InvariantViolation",
              "skeleton crossing is missing a strand");
      Dart e_down = aft(edge_piece_base[e] + j);
      Dart e_up = fore(edge_piece_base[e] + j + 1);
      Dart a_k = dart_of_edge_with_face(m, e, after_face(ev.curve, ev.ev));
      Dart e_plus = (a_k == m.edge_dart(e)) ? e_up : e_down;
      Dart e_minus = (e_plus == e_up) ? e_down : e_up;
      sig[e_plus] = ev.c_back;
      sig[ev.c_back] = e_minus;
      sig[e_minus] = ev.c_fwd;
      sig[ev.c_fwd] = e_plus;
    }

  for (auto& fn : fnodes) {
    int want = fn.kind == 0 ? 4 : fn.kind == 1 ? 3 : 1;
    require(static_cast<int>(fn.spokes.size()) == want, "InvariantViolation",
            "face node has the wrong valence");
    std::sort(fn.spokes.begin(), fn.spokes.end(),
              [](const auto& x, const auto& y) { return angle_less(x.first, y.first); });
    for (size_t i = 0; i + 1 < fn.spokes.size(); ++i)
      require(angle_less(fn.spokes[i].first, fn.spokes[i + 1].first), "TangencyOrTriplePoint",
              "two strands leave a point in the same direction");
    for (size_t i = 0; i < fn.spokes.size(); ++i)
      sig[fn.spokes[i].second] = fn.spokes[(i + 1) % fn.spokes.size()].second;
  }

  for (Dart d = 0; d < nd; ++d)
    require(sig[d] >= 0, "InvariantViolation", "unassigned rotation slot");
}

// Refined cell holding the reference point of base face f. The reference
// point is the first probe on the curve y = x^2 (a line meets it at most
// twice) lying on no strand and reachable cleanly from some face corner.
int Builder::locate_cell(const CombinatorialMap& plain, int f) {
  const auto& fdarts = m.face(f).darts;
  std::vector<std::tuple<Pt, Pt, Dart>> pieces;  // (from, to, fore dart) in f
  for (int c = 0; c < curves(); ++c)
    for (const auto& sg : segs[c]) {
      if (sg.home != f) continue;
      std::vector<Pt> stops{sg.a};
      for (const auto& [t, id] : sg.cuts) stops.push_back(sg.a + t * (sg.b - sg.a));
      stops.push_back(sg.b);
      for (int p = 0; p < sg.piece_count; ++p)
        pieces.emplace_back(stops[p], stops[p + 1], fore(sg.first_piece + p));
    }

  for (int probe = 0; probe < 200; ++probe) {
    Q t(1, 3 + probe);
    Pt goal{t, t * t};
    bool on_strand = false;
    for (const auto& [a, b, d] : pieces)
      if (point_on_segment(goal, a, b)) {
        on_strand = true;
        break;
      }
    if (on_strand) continue;

    for (int corner = 0; corner < static_cast<int>(fdarts.size()); ++corner) {
      Pt start = circle_point(Q(corner));
      bool clean = true;
      std::vector<std::pair<Q, Dart>> hits;
      for (const auto& [a, b, d] : pieces) {
        Q u;
        if ((point_on_segment(a, start, goal, &u) && u > 0 && u < 1) ||
            (point_on_segment(b, start, goal, &u) && u > 0 && u < 1)) {
          clean = false;
          break;
        }
        if (auto h = seg_intersect(start, goal, a, b)) hits.push_back({h->s, d});
      }
      if (!clean) continue;
      std::sort(hits.begin(), hits.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      for (size_t i = 0; clean && i + 1 < hits.size(); ++i)
        if (hits[i].first == hits[i + 1].first) clean = false;
      if (!clean) continue;

      // Entry cell at the corner: right of the first piece of the corner's
      // outgoing boundary dart.
      Dart d0 = fdarts[corner];
      int e0 = m.edge_of(d0);
      Dart t0 = (d0 == m.edge_dart(e0))
                    ? fore(edge_piece_base[e0])
                    : aft(edge_piece_base[e0] + static_cast<int>(on_edge[e0].size()));
      int cur = plain.face_of(t0);
      for (const auto& [u, d] : hits) {
        if (plain.face_of(d) == cur) {
          cur = plain.face_of(plain.alpha(d));
        } else {
          require(plain.face_of(plain.alpha(d)) == cur, "InvariantViolation",
                  "cell walk left its face");
          cur = plain.face_of(d);
        }
      }
      return cur;
    }
  }
  fail("InvariantViolation", "no usable reference point for locating a face cell");
}

void Builder::relocate_marks(const CombinatorialMap& plain, std::map<int, int>& punct,
                             std::set<int>& bkeys) {
  for (const auto& [key, count] : m.punctures_by_key()) {
    int cell = locate_cell(plain, m.face_by_key(key));
    punct[plain.face_key(cell)] += count;
  }
  for (int key : m.boundary_keys()) {
    int f = m.face_by_key(key);
    for (int c = 0; c < curves(); ++c)
      for (const auto& sg : segs[c])
        require(sg.home != f, "InvariantViolation", "curve enters a boundary face");
    bkeys.insert(plain.face_key(locate_cell(plain, f)));
  }
}

void Builder::traversal_metadata(const CombinatorialMap& rm) {
  const int nc = curves();
  walks.assign(nc, {});
  along.assign(nc, {});
  offsets.assign(nc, {});
  seg_of_pos.assign(nc, {});
  std::vector<int> pos(nc, 0);
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < static_cast<int>(segs[c].size()); ++s) {
      SegLayout& sg = segs[c][s];
      for (int p = 0; p < sg.piece_count; ++p) {
        Dart d = fore(sg.first_piece + p);
        if (p > 0) {
          int id = sg.cuts[p - 1].second;
          if (fnodes[id].kind == 0) {
            int x = fnodes[id].xindex;
            Overlay::Crossing& cr = xings[x];
            cr.vertex = rm.vertex_of(d);
            (c == cr.a ? cr.pos_a : cr.pos_b) = pos[c];
            along[c].push_back(x);
            offsets[c].push_back(static_cast<int>(walks[c].size()));
            seg_of_pos[c].push_back(s);
            ++pos[c];
          }
        }
        walks[c].push_back(d);
      }
    }
}

}  // namespace

Overlay Overlay::build(const CombinatorialMap& base, std::vector<CurveSpec> curves) {
  Overlay o;
  o.base_ = base;
  o.specs_ = std::move(curves);

  for (int e = 0; e < base.edge_count(); ++e)
    require(base.face_of(base.edge_dart(e)) != base.face_of(base.alpha(base.edge_dart(e))),
            "InvariantViolation", "overlay needs two distinct faces along every edge");

  Builder b(base, o.specs_);
  b.resolve_homes();
  b.index_edge_events();
  b.lay_out_chords();
  b.place_tips();
  b.intersect_chords();
  b.number_crossings();
  b.allocate_pieces();
  b.assemble();

  CombinatorialMap plain = CombinatorialMap::build(b.sig, b.alp);
  require(plain.genus() == base.genus(), "InvariantViolation", "refinement changed the genus");

  o.face_home_.assign(plain.face_count(), -1);
  for (int rf = 0; rf < plain.face_count(); ++rf) {
    Dart d = plain.face_key(rf);
    const DartInfo di = b.dinfo[d];
    if (di.curve >= 0) {
      o.face_home_[rf] = b.homes[di.curve][di.seg];
    } else {
      Dart bd = base.edge_dart(di.seg);
      o.face_home_[rf] = base.face_of(di.forward ? bd : base.alpha(bd));
    }
  }

  std::map<int, int> punct;
  std::set<int> bkeys;
  b.relocate_marks(plain, punct, bkeys);
  o.refined_ = CombinatorialMap::build(b.sig, b.alp, punct, bkeys);

  b.traversal_metadata(o.refined_);
  o.homes_ = std::move(b.homes);
  o.dart_info_ = std::move(b.dinfo);
  o.crossings_ = std::move(b.xings);
  o.walks_ = std::move(b.walks);
  o.along_ = std::move(b.along);
  o.offsets_ = std::move(b.offsets);
  o.seg_of_pos_ = std::move(b.seg_of_pos);
  if (o.crossings_.empty()) o.reduced_ = true;
  return o;
}

int Overlay::crossing_count(int a, int b) const {
  require(a >= 0 && a < curve_count() && b >= 0 && b < curve_count() && a != b,
          "InvariantViolation", "crossing count needs two distinct curves");
  int lo = std::min(a, b), hi = std::max(a, b);
  int n = 0;
  for (const Crossing& c : crossings_)
    if (c.a == lo && c.b == hi) ++n;
  return n;
}

int Overlay::event_home(int c, int k) const {
  return specs_[c].closed ? homes_[c][k] : homes_[c][k + 1];
}

std::vector<int> Overlay::crossed_base_edges(int c) const {
  std::vector<int> out;
  for (const auto& [e, r] : specs_[c].events) out.push_back(e);
  return out;
}

H1Class Overlay::curve_class(int c) const {
  require(specs_[c].closed, "InvariantViolation", "homology class asks for a closed curve");
  auto basis = h1_basis_cached(base_);
  return class_of_crossings(base_, *basis, crossed_base_edges(c));
}

bool Overlay::curve_separating(int c) const { return curve_class(c).zero(); }

}  // namespace nscorn
