#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "nscorn/overlay.hpp"

using namespace nscorn;

namespace {

Rank rk(long n, long d) { return Rank(n, d); }

CurveSpec loop(const char* name, std::vector<std::pair<int, Rank>> ev, int sf = -1) {
  CurveSpec s;
  s.name = name;
  s.events = std::move(ev);
  s.start_face = sf;
  return s;
}

CurveSpec open_arc(const char* name, std::vector<std::pair<int, Rank>> ev, int sf,
                   CurveSpec::Endpoint start = {}, CurveSpec::Endpoint finish = {}) {
  CurveSpec s = loop(name, std::move(ev), sf);
  s.closed = false;
  s.start = start;
  s.finish = finish;
  return s;
}

CurveSpec::Endpoint pin_on(int host, int seg, Rank t) {
  CurveSpec::Endpoint e;
  e.kind = CurveSpec::Endpoint::OnCurve;
  e.host = host;
  e.host_seg = seg;
  e.t = std::move(t);
  return e;
}

// All fixtures live on torus_grid(2, 2). Face keys: 1 is the square at the
// origin, 2 its right neighbour, 0 the square above the origin, 3 the last
// one. Edge 0 is the bottom of the origin square (rank = x), edge 1 its left
// side (rank = y), edge 4 the middle vertical, edge 6 the top horizontal.

// Horizontal loop at height 1/2.
CurveSpec horiz() { return loop("a", {{1, rk(1, 2)}, {4, rk(1, 2)}}, 1); }
// Vertical loop at width 1/2.
CurveSpec vert() { return loop("b", {{0, rk(1, 2)}, {6, rk(1, 2)}}, 1); }
// Horizontal loop at height 1/4, disjoint from horiz().
CurveSpec horiz_low() { return loop("a2", {{1, rk(1, 4)}, {4, rk(1, 4)}}, 1); }
// Slanted vertical loop: crosses vert() twice, cobounds two bigon halves.
CurveSpec slant() { return loop("c", {{0, rk(1, 3)}, {6, rk(2, 3)}}, 1); }
// Loop winding once up and twice across: meets horiz() three times, one
// crossing survives reduction.
CurveSpec winder() {
  return loop("w", {{0, rk(1, 2)}, {4, rk(3, 5)}, {1, rk(2, 5)}, {6, rk(1, 2)}}, 1);
}
// Small circle around the origin vertex; separating.
CurveSpec vertex_circle() {
  return loop("t", {{0, rk(1, 10)}, {1, rk(1, 10)}, {2, rk(1, 10)}, {3, rk(1, 10)}}, 1);
}
// Free-free arc crossing the left vertical edge once.
CurveSpec stub_arc() { return open_arc("s", {{1, rk(1, 3)}}, 1); }

}  // namespace

TEST_CASE("transverse loops on the square torus meet once") {
  CombinatorialMap g = torus_grid(2, 2);
  Overlay o = Overlay::build(g, {horiz(), vert()});

  CHECK(o.curve_count() == 2);
  REQUIRE(o.crossings().size() == 1);
  CHECK(o.crossing_count(0, 1) == 1);
  CHECK(o.crossing_count(1, 0) == 1);
  CHECK_THROWS_WITH_AS(o.crossing_count(0, 0), doctest::Contains("InvariantViolation"), Error);
  CHECK_FALSE(o.is_reduced());

  const Overlay::Crossing& cr = o.crossings()[0];
  CHECK(cr.a == 0);
  CHECK(cr.b == 1);
  CHECK(cr.pos_a == 0);
  CHECK(cr.pos_b == 0);
  CHECK(o.crossings_along(0) == std::vector<int>{0});
  CHECK(o.crossings_along(1) == std::vector<int>{0});
  CHECK(o.crossing_seg(0, 0) == 0);
  CHECK(o.crossing_seg(1, 0) == 0);

  // The walk is one refined dart per piece: the split segment gives two.
  CHECK(o.walk(0).size() == 3);
  CHECK(o.walk(1).size() == 3);
  CHECK(o.walk_offset(0, 0) == 1);
  CHECK(o.walk_offset(1, 0) == 1);

  for (int c = 0; c < 2; ++c) {
    Walk w;
    w.darts = o.walk(c);
    CHECK(is_closed_walk(o.refined(), w));
    for (Dart d : w.darts) {
      CHECK(o.dart_info(d).curve == c);
      CHECK(o.dart_info(d).forward);
      CHECK(o.dart_info(o.refined().alpha(d)).curve == c);
      CHECK_FALSE(o.dart_info(o.refined().alpha(d)).forward);
    }
  }

  CHECK(o.crossed_base_edges(0) == std::vector<int>{1, 4});
  CHECK(o.crossed_base_edges(1) == std::vector<int>{0, 6});
  CHECK(o.event_home(0, 0) == g.face_by_key(1));
  CHECK(o.event_home(0, 1) == g.face_by_key(2));
  CHECK(o.event_home(1, 1) == g.face_by_key(0));
  CHECK(o.event(0, 1) == std::pair<int, Rank>{4, rk(1, 2)});
}

TEST_CASE("the refined map splits faces along both strands") {
  CombinatorialMap g = torus_grid(2, 2);
  Overlay o = Overlay::build(g, {horiz(), vert()});
  const CombinatorialMap& rm = o.refined();

  CHECK(rm.genus() == 1);
  CHECK(rm.vertex_count() == 9);
  CHECK(rm.edge_count() == 18);
  CHECK(rm.face_count() == 9);

  std::map<int, int> splits;
  for (int f = 0; f < rm.face_count(); ++f) ++splits[o.base_face_of(f)];
  CHECK(splits[g.face_by_key(1)] == 4);
  CHECK(splits[g.face_by_key(0)] == 2);
  CHECK(splits[g.face_by_key(2)] == 2);
  CHECK(splits[g.face_by_key(3)] == 1);

  for (int v = 0; v < rm.vertex_count(); ++v) CHECK(rm.degree(v) == 4);

  // Around the crossing the two strands alternate.
  std::vector<Dart> ds = rm.vertex_darts(o.crossings()[0].vertex);
  REQUIRE(ds.size() == 4);
  CHECK(o.dart_info(ds[0]).curve == o.dart_info(ds[2]).curve);
  CHECK(o.dart_info(ds[1]).curve == o.dart_info(ds[3]).curve);
  CHECK(o.dart_info(ds[0]).curve != o.dart_info(ds[1]).curve);
}

TEST_CASE("cutting along one loop leaves a cylinder") {
  Overlay o = Overlay::build(torus_grid(2, 2), {horiz(), vert()});
  Walk w;
  w.darts = o.walk(0);
  CutResult res = cut_along_cycle(o.refined(), w);
  REQUIRE(res.components.size() == 1);
  const CutComponent& comp = res.components[0];
  CHECK(comp.genus == 0);
  CHECK(comp.punctures == 0);
  CHECK(comp.boundary_faces == 2);
  CHECK(comp.new_boundary_keys.size() == 2);
}

TEST_CASE("a slanted loop sheds both crossings with its parallel") {
  CombinatorialMap g = torus_grid(2, 2);
  Overlay o = Overlay::build(g, {vert(), slant()});
  CHECK(o.crossing_count(0, 1) == 2);
  CHECK(o.curve_class(0) == o.curve_class(1));
  CHECK_FALSE(o.is_reduced());
  CHECK_THROWS_WITH_AS(intersection_number(o, 0, 1), doctest::Contains("NotReduced"), Error);

  Overlay r = reduce_to_minimal_position(std::move(o));
  CHECK(r.is_reduced());
  CHECK(r.crossing_count(0, 1) == 0);
  CHECK(intersection_number(r, 0, 1) == 0);
  CHECK(r.spec(0).events == vert().events);

  // The rerouted copy hugs the straight one on the far side of whichever of
  // the two bigons was removed.
  std::set<std::pair<int, Rank>> got(r.spec(1).events.begin(), r.spec(1).events.end());
  std::set<std::pair<int, Rank>> upper{{0, rk(1, 3)}, {6, rk(1, 4)}};
  std::set<std::pair<int, Rank>> lower{{0, rk(3, 4)}, {6, rk(2, 3)}};
  CHECK((got == upper || got == lower));

  CHECK(is_isotopic(r, 0, 1));
  CHECK_THROWS_WITH_AS(ns_edge(r, 0, 1), doctest::Contains("IsotopicInput"), Error);
}

TEST_CASE("a winding loop keeps exactly one crossing after reduction") {
  CombinatorialMap g = torus_grid(2, 2);
  Overlay o = Overlay::build(g, {horiz(), winder(), stub_arc()});
  CHECK(o.crossing_count(0, 1) == 3);
  CHECK(o.crossing_count(0, 2) == 0);
  CHECK(o.crossing_count(1, 2) == 0);
  CHECK(o.curve_class(0) != o.curve_class(1));
  CHECK_THROWS_WITH_AS(is_isotopic(o, 0, 1), doctest::Contains("NotReduced"), Error);
  CHECK_THROWS_WITH_AS(ns_edge(o, 0, 1), doctest::Contains("NotReduced"), Error);

  Overlay r = reduce_to_minimal_position(std::move(o));
  CHECK(r.is_reduced());
  CHECK(r.crossing_count(0, 1) == 1);
  CHECK(intersection_number(r, 0, 1) == 1);
  CHECK(r.refined().genus() == 1);
  CHECK(r.spec(0).events == horiz().events);
  CHECK(r.spec(2).events == stub_arc().events);
  CHECK(r.walk(2).size() == 2);

  CHECK_FALSE(is_isotopic(r, 0, 1));
  CHECK(ns_edge(r, 0, 1));
}

TEST_CASE("reduction leaves an already minimal pair alone") {
  Overlay o = Overlay::build(torus_grid(2, 2), {horiz(), vert()});
  Overlay r = reduce_to_minimal_position(std::move(o));
  CHECK(r.is_reduced());
  CHECK(r.crossing_count(0, 1) == 1);
  CHECK(intersection_number(r, 0, 1) == 1);
  CHECK_FALSE(is_isotopic(r, 0, 1));
  CHECK(ns_edge(r, 0, 1));
}

TEST_CASE("parallel copies are isotopic") {
  Overlay o = Overlay::build(torus_grid(2, 2), {horiz(), horiz_low()});
  CHECK(o.crossing_count(0, 1) == 0);
  CHECK(o.is_reduced());
  CHECK(o.curve_class(0) == o.curve_class(1));
  CHECK(is_isotopic(o, 0, 1));
  CHECK(is_isotopic(o, 1, 0));
  CHECK(is_isotopic(o, 0, 0));
}

TEST_CASE("a loop around a vertex separates") {
  CombinatorialMap g = torus_grid(2, 2);
  Overlay o = Overlay::build(g, {vertex_circle(), horiz()});
  CHECK(o.crossing_count(0, 1) == 0);
  CHECK(o.is_reduced());
  CHECK(o.curve_class(0).zero());
  CHECK_FALSE(o.curve_class(1).zero());
  CHECK(o.curve_separating(0));
  CHECK_FALSE(o.curve_separating(1));
  CHECK_FALSE(is_isotopic(o, 0, 1));
  CHECK_THROWS_WITH_AS(ns_edge(o, 0, 1), doctest::Contains("SeparatingInput"), Error);
  CHECK_THROWS_WITH_AS(ns_edge(o, 1, 0), doctest::Contains("SeparatingInput"), Error);
}

TEST_CASE("genus zero admits no curve-graph edges") {
  CombinatorialMap sphere = CombinatorialMap::build({2, 3, 0, 1}, {1, 0, 3, 2});
  REQUIRE(sphere.genus() == 0);
  CurveSpec c1 = loop("c1", {{0, rk(1, 2)}, {1, rk(1, 2)}}, 0);
  CurveSpec c2 = loop("c2", {{0, rk(1, 3)}, {1, rk(1, 3)}}, 0);
  Overlay o = Overlay::build(sphere, {c1, c2});
  CHECK(o.refined().genus() == 0);
  CHECK(o.crossing_count(0, 1) == 0);
  CHECK(o.curve_separating(0));
  CHECK(is_isotopic(o, 0, 1));
  CHECK_THROWS_WITH_AS(ns_edge(o, 0, 1), doctest::Contains("InvariantViolation"), Error);
}

TEST_CASE("sub-arcs follow the walk between crossings") {
  Overlay o = Overlay::build(torus_grid(2, 2), {horiz(), winder()});
  const CombinatorialMap& rm = o.refined();
  REQUIRE(o.crossings_along(0).size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(o.crossings()[o.crossings_along(0)[i]].pos_a == i);
    CHECK(o.crossings()[o.crossings_along(1)[i]].pos_b == i);
  }
  auto vx = [&](int pos) { return o.crossings()[o.crossings_along(0)[pos]].vertex; };

  SubArc sa = subarc(o, 0, vx(0), vx(1));
  CHECK(sa.curve == 0);
  CHECK(sa.from_pos == 0);
  CHECK(sa.to_pos == 1);
  REQUIRE(sa.darts.size() == 1);
  CHECK(rm.vertex_of(sa.darts.front()) == vx(0));
  CHECK(rm.vertex_of(rm.alpha(sa.darts.back())) == vx(1));

  CHECK(subarc(o, 0, vx(0), vx(2)).darts.size() == 3);
  SubArc wrap = subarc(o, 0, vx(2), vx(0));
  CHECK(wrap.darts.size() == 2);
  CHECK(rm.vertex_of(wrap.darts.front()) == vx(2));
  CHECK(rm.vertex_of(rm.alpha(wrap.darts.back())) == vx(0));
  for (Dart d : wrap.darts) CHECK(o.dart_info(d).curve == 0);

  CHECK_THROWS_WITH_AS(subarc(o, 0, vx(0), vx(0)), doctest::Contains("DegenerateEndpoints"),
                       Error);
  int off_curve = rm.vertex_of(o.walk(1)[0]);
  CHECK_THROWS_WITH_AS(subarc(o, 0, off_curve, vx(1)), doctest::Contains("VertexNotOnCurve"),
                       Error);
}

TEST_CASE("displaced events re-draw a loop beside itself") {
  CombinatorialMap g = torus_grid(2, 2);
  Overlay solo = Overlay::build(g, {horiz()});
  std::vector<std::pair<int, Rank>> d1 = displaced_events_all(solo, 0, 1);
  std::vector<std::pair<int, Rank>> want1{{1, rk(2, 3)}, {4, rk(2, 3)}};
  CHECK(d1 == want1);
  std::vector<std::pair<int, Rank>> d2 = displaced_events_all(solo, 0, 2);
  std::vector<std::pair<int, Rank>> want2{{1, rk(5, 9)}, {4, rk(5, 9)}};
  CHECK(d2 == want2);

  CurveSpec copy = loop("a'", std::move(d1), 1);
  Overlay o = Overlay::build(g, {horiz(), copy});
  CHECK(o.crossing_count(0, 1) == 0);
  CHECK(is_isotopic(o, 0, 1));
}

TEST_CASE("displacement picks the gap on the curve's left") {
  Overlay o = Overlay::build(torus_grid(2, 2), {horiz(), winder()});
  // Positions 0 and 1 sit on the same segment in traversal order.
  CHECK(o.crossing_seg(0, 0) == 0);
  CHECK(o.crossing_seg(0, 1) == 0);
  CHECK(o.crossing_seg(0, 2) == 1);
  CHECK(displaced_events(o, 0, 0, 1, 1).empty());

  std::vector<std::pair<int, Rank>> mid = displaced_events(o, 0, 1, 2, 1);
  std::vector<std::pair<int, Rank>> want_mid{{4, rk(8, 15)}};
  CHECK(mid == want_mid);

  std::vector<std::pair<int, Rank>> tail = displaced_events(o, 0, 2, 0, 1);
  std::vector<std::pair<int, Rank>> want_tail{{1, rk(2, 3)}};
  CHECK(tail == want_tail);

  CHECK_THROWS_WITH_AS(displaced_events(o, 0, 0, 1, 0), doctest::Contains("InvariantViolation"),
                       Error);
}

TEST_CASE("free arcs hang tips inside faces") {
  CombinatorialMap g = torus_grid(2, 2);
  Overlay o = Overlay::build(g, {stub_arc()});
  const CombinatorialMap& rm = o.refined();
  CHECK_FALSE(o.closed(0));
  CHECK(o.walk(0).size() == 2);
  CHECK(o.crossings().empty());
  CHECK(o.is_reduced());
  CHECK(rm.genus() == 1);
  CHECK(rm.face_count() == 4);

  std::map<int, int> hist;
  for (int v = 0; v < rm.vertex_count(); ++v) ++hist[rm.degree(v)];
  CHECK(hist[1] == 2);
  CHECK(hist[4] == 5);
}

TEST_CASE("arcs pin onto earlier curves") {
  CombinatorialMap g = torus_grid(2, 2);

  // One end tied to the horizontal loop, the other hanging free above it.
  CurveSpec tee = open_arc("p", {{0, rk(1, 4)}}, 0, pin_on(0, 0, rk(1, 4)));
  Overlay o = Overlay::build(g, {horiz(), tee});
  const CombinatorialMap& rm = o.refined();
  CHECK(o.crossings().empty());
  CHECK(o.walk(0).size() == 3);
  // Chord from the tie-point to the edge, then the stub past it.
  CHECK(o.walk(1).size() == 2);
  std::map<int, int> hist;
  for (int v = 0; v < rm.vertex_count(); ++v) ++hist[rm.degree(v)];
  CHECK(hist[1] == 1);
  CHECK(hist[3] == 1);

  // Both ends tied to the winding loop inside its shared face.
  CurveSpec chord =
      open_arc("q", {}, -1, pin_on(0, 0, rk(1, 2)), pin_on(0, 2, rk(1, 2)));
  Overlay o2 = Overlay::build(g, {winder(), chord});
  CHECK(o2.walk(1).size() == 1);
  CHECK(o2.crossings().empty());
  std::map<int, int> hist2;
  for (int v = 0; v < o2.refined().vertex_count(); ++v) ++hist2[o2.refined().degree(v)];
  CHECK(hist2[3] == 2);
  CHECK(hist2[1] == 0);
}

TEST_CASE("punctures ride into a refined cell of their face") {
  CombinatorialMap g = with_punctures(torus_grid(2, 2), {{1, 2}});
  Overlay o = Overlay::build(g, {horiz(), vert()});
  const CombinatorialMap& rm = o.refined();
  CHECK(rm.puncture_total() == 2);
  int seen = 0;
  for (const auto& [key, count] : rm.punctures_by_key()) {
    CHECK(o.base_face_of(rm.face_by_key(key)) == g.face_by_key(1));
    seen += count;
  }
  CHECK(seen == 2);
}

TEST_CASE("malformed curve families are rejected") {
  CombinatorialMap g = torus_grid(2, 2);
  auto build1 = [&](CurveSpec s) { return Overlay::build(g, {std::move(s)}); };

  // Improper base: an edge with the same face on both sides.
  CHECK_THROWS_WITH_AS(Overlay::build(one_vertex_surface(1), {horiz()}),
                       doctest::Contains("InvariantViolation"), Error);

  CHECK_THROWS_WITH_AS(build1(loop("x", {{99, rk(1, 2)}, {4, rk(1, 2)}}, 1)),
                       doctest::Contains("InvariantViolation"), Error);
  CHECK_THROWS_WITH_AS(build1(loop("x", {{1, rk(0, 1)}, {4, rk(1, 2)}}, 1)),
                       doctest::Contains("TangencyOrTriplePoint"), Error);
  CHECK_THROWS_WITH_AS(build1(loop("x", {{1, rk(1, 2)}}, 1)),
                       doctest::Contains("NotTransverse"), Error);

  // Both sides of the first edge carry a consistent face sequence.
  CHECK_THROWS_WITH_AS(build1(loop("x", {{1, rk(1, 2)}, {4, rk(1, 2)}})),
                       doctest::Contains("AmbiguousTraversal"), Error);
  CHECK_THROWS_WITH_AS(build1(open_arc("x", {{1, rk(1, 3)}}, -1)),
                       doctest::Contains("AmbiguousTraversal"), Error);

  // Face sequences that do not close up or start on a wrong face.
  CHECK_THROWS_WITH_AS(build1(loop("x", {{0, rk(1, 2)}, {6, rk(1, 2)}}, 2)),
                       doctest::Contains("NotTransverse"), Error);
  CHECK_THROWS_WITH_AS(build1(loop("x", {{0, rk(1, 2)}, {4, rk(1, 2)}}, 1)),
                       doctest::Contains("NotTransverse"), Error);

  // Self-crossings: a repeated rank and an interior chord crossing.
  CHECK_THROWS_WITH_AS(
      build1(loop("x", {{1, rk(1, 2)}, {4, rk(1, 3)}, {1, rk(1, 2)}, {4, rk(2, 3)}}, 1)),
      doctest::Contains("SelfCrossing"), Error);
  CHECK_THROWS_WITH_AS(
      build1(loop("x", {{1, rk(1, 3)}, {4, rk(2, 3)}, {1, rk(2, 3)}, {4, rk(1, 3)}}, 1)),
      doctest::Contains("SelfCrossing"), Error);
  CHECK_THROWS_WITH_AS(
      build1(loop("x", {{0, rk(1, 2)}, {1, rk(3, 5)}, {1, rk(2, 5)}, {6, rk(1, 2)}}, 1)),
      doctest::Contains("SelfCrossing"), Error);

  // Two curves through the same point on an edge.
  CHECK_THROWS_WITH_AS(Overlay::build(g, {horiz(), horiz()}),
                       doctest::Contains("TangencyOrTriplePoint"), Error);

  // Arc endpoint problems: an unknown host and a chord along its own host.
  CHECK_THROWS_WITH_AS(build1(open_arc("x", {{1, rk(1, 3)}}, 1, pin_on(0, 0, rk(1, 2)))),
                       doctest::Contains("InvariantViolation"), Error);
  CHECK_THROWS_WITH_AS(
      Overlay::build(g, {winder(), open_arc("x", {}, -1, pin_on(0, 0, rk(1, 3)),
                                            pin_on(0, 0, rk(2, 3)))}),
      doctest::Contains("TangencyOrTriplePoint"), Error);
}
