#include "doctest.h"
#include "nscorn/surface_map.hpp"

using namespace nscorn;

namespace {

int grid_dart(int n, int /*m*/, int i, int j, int dir) { return 4 * (i + n * j) + dir; }

}  // namespace

TEST_CASE("one-vertex surfaces have a single face and the right genus") {
  auto t = one_vertex_surface(1);
  CHECK(t.dart_count() == 4);
  CHECK(t.vertex_count() == 1);
  CHECK(t.edge_count() == 2);
  CHECK(t.face_count() == 1);
  CHECK(t.euler_characteristic(true) == 0);
  CHECK(t.genus() == 1);

  auto g2 = one_vertex_surface(2);
  CHECK(g2.vertex_count() == 1);
  CHECK(g2.edge_count() == 4);
  CHECK(g2.face_count() == 1);
  CHECK(g2.euler_characteristic(true) == -2);
  CHECK(g2.genus() == 2);

  auto g3 = one_vertex_surface(3);
  CHECK(g3.face_count() == 1);
  CHECK(g3.genus() == 3);
}

TEST_CASE("torus grids have square faces keyed by their minimal dart") {
  auto g = torus_grid(2, 2);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 8);
  CHECK(g.face_count() == 4);
  CHECK(g.euler_characteristic(true) == 0);
  CHECK(g.genus() == 1);

  // The unit square with corners (0,0),(1,0),(1,1),(0,1) sits to the right of
  // its clockwise boundary darts N(0,0), E(0,1), S(1,1), W(1,0).
  int f = g.face_of(grid_dart(2, 2, 0, 0, 1));
  CHECK(g.face_of(grid_dart(2, 2, 0, 1, 0)) == f);
  CHECK(g.face_of(grid_dart(2, 2, 1, 1, 3)) == f);
  CHECK(g.face_of(grid_dart(2, 2, 1, 0, 2)) == f);
  CHECK(static_cast<int>(g.face(f).darts.size()) == 4);
  CHECK(g.face_key(f) == 1);

  // Every face of the 2x2 grid is keyed by one of the darts 0..3.
  std::set<int> keys;
  for (int i = 0; i < g.face_count(); ++i) keys.insert(g.face_key(i));
  CHECK(keys == std::set<int>{0, 1, 2, 3});

  // Proper: each edge borders two distinct faces.
  for (int e = 0; e < g.edge_count(); ++e) {
    Dart d = g.edge_dart(e);
    CHECK(g.face_of(d) != g.face_of(g.alpha(d)));
  }

  auto g33 = torus_grid(3, 3);
  CHECK(g33.vertex_count() == 9);
  CHECK(g33.edge_count() == 18);
  CHECK(g33.face_count() == 9);
  CHECK(g33.genus() == 1);
}

TEST_CASE("punctures affect only the uncapped characteristic") {
  auto g = with_punctures(torus_grid(2, 2), {{0, 1}, {3, 2}});
  CHECK(g.puncture_total() == 3);
  CHECK(g.euler_characteristic(true) == 0);
  CHECK(g.euler_characteristic(false) == -3);
  CHECK(g.genus() == 1);
  CHECK(g.face(g.face_by_key(3)).punctures == 2);
  CHECK_THROWS_WITH_AS(with_punctures(g, {{5, 1}}), doctest::Contains("UnknownFaceId"), Error);
}

TEST_CASE("build rejects malformed permutation data") {
  // alpha with a fixed point
  CHECK_THROWS_WITH_AS(CombinatorialMap::build({1, 0}, {0, 1}),
                       doctest::Contains("InvalidInvolution"), Error);
  // sigma not a permutation
  CHECK_THROWS_WITH_AS(CombinatorialMap::build({0, 0}, {1, 0}),
                       doctest::Contains("InvalidInvolution"), Error);
  // two disjoint one-vertex tori
  std::vector<Dart> sig{2, 3, 1, 0, 6, 7, 5, 4};
  std::vector<Dart> alp{1, 0, 3, 2, 5, 4, 7, 6};
  CHECK_THROWS_WITH_AS(CombinatorialMap::build(sig, alp), doctest::Contains("Disconnected"),
                       Error);
}

TEST_CASE("walk validation") {
  auto g = torus_grid(3, 3);
  CHECK(is_closed_walk(g, Walk{{grid_dart(3, 3, 0, 0, 0), grid_dart(3, 3, 1, 0, 0),
                                grid_dart(3, 3, 2, 0, 0)}}));
  CHECK_FALSE(is_closed_walk(g, Walk{{grid_dart(3, 3, 0, 0, 0), grid_dart(3, 3, 1, 0, 1)}}));
  CHECK_THROWS_WITH_AS(
      require_simple_cycle(g, Walk{{grid_dart(3, 3, 0, 0, 0), grid_dart(3, 3, 1, 0, 1)}}),
      doctest::Contains("NotAClosedWalk"), Error);
  // immediate backtrack reuses the edge
  CHECK_THROWS_WITH_AS(
      require_simple_cycle(g, Walk{{grid_dart(3, 3, 0, 0, 0), grid_dart(3, 3, 1, 0, 2)}}),
      doctest::Contains("NotSimple"), Error);
}

TEST_CASE("cutting the one-vertex torus along a core loop yields a cylinder") {
  auto t = one_vertex_surface(1);
  auto res = cut_along_cycle(t, Walk{{0}});
  REQUIRE(res.components.size() == 1);
  const auto& c = res.components[0];
  CHECK(c.genus == 0);
  CHECK(c.boundary_faces == 2);
  CHECK(c.map.vertex_count() == 2);
  CHECK(c.map.edge_count() == 3);
  CHECK(c.map.face_count() == 3);
  CHECK(c.map.euler_characteristic(true) == 2);
  CHECK_FALSE(is_witness(t, c));
}

TEST_CASE("cutting a torus grid along a horizontal loop") {
  auto g = with_punctures(torus_grid(2, 2), {{0, 1}, {3, 2}});
  Walk loop{{grid_dart(2, 2, 0, 0, 0), grid_dart(2, 2, 1, 0, 0)}};
  auto res = cut_along_cycle(g, loop);
  REQUIRE(res.components.size() == 1);
  const auto& c = res.components[0];
  CHECK(c.genus == 0);
  CHECK(c.boundary_faces == 2);
  CHECK(c.punctures == 3);
  CHECK(c.map.face_count() == 4 + 2);
  CHECK_FALSE(is_witness(g, c));
}

TEST_CASE("cutting out a grid square separates a disk") {
  auto g = with_punctures(torus_grid(3, 3), {{1, 1}, {grid_dart(3, 3, 1, 1, 1), 2}});
  Walk square{{grid_dart(3, 3, 0, 0, 0), grid_dart(3, 3, 1, 0, 1), grid_dart(3, 3, 1, 1, 2),
               grid_dart(3, 3, 0, 1, 3)}};
  auto res = cut_along_cycle(g, square);
  REQUIRE(res.components.size() == 2);
  int disk = res.components[0].map.dart_count() < res.components[1].map.dart_count() ? 0 : 1;
  const auto& d = res.components[disk];
  const auto& rest = res.components[1 - disk];
  CHECK(d.genus == 0);
  CHECK(d.boundary_faces == 1);
  CHECK(d.punctures == 1);  // the puncture inside the square travels with it
  CHECK(d.map.vertex_count() == 4);
  CHECK(d.map.edge_count() == 4);
  CHECK(d.map.face_count() == 2);
  CHECK(rest.genus == 1);
  CHECK(rest.boundary_faces == 1);
  CHECK(rest.punctures == 2);
  CHECK(is_witness(g, rest));
  CHECK_FALSE(is_witness(g, d));
  // puncture conservation
  CHECK(d.punctures + rest.punctures == g.puncture_total());
}

TEST_CASE("cut rejects non-simple input") {
  auto g = torus_grid(3, 3);
  Walk eight{{grid_dart(3, 3, 0, 0, 0), grid_dart(3, 3, 1, 0, 0), grid_dart(3, 3, 2, 0, 0),
              grid_dart(3, 3, 0, 0, 1), grid_dart(3, 3, 0, 1, 3)}};
  CHECK_THROWS_WITH_AS(cut_along_cycle(g, eight), doctest::Contains("NotSimple"), Error);
}

TEST_CASE("face unions look like the subsurfaces they fill") {
  auto g = torus_grid(3, 3);

  auto one = face_union_shape(g, {g.face_by_key(1)});
  CHECK(one.connected);
  CHECK(one.chi == 1);
  CHECK(one.boundary_circuits == 1);
  CHECK(one.genus == 0);

  // a full row of squares wraps into an annulus
  std::set<int> row;
  for (int i = 0; i < 3; ++i) row.insert(g.face_of(grid_dart(3, 3, i, 0, 1)));
  REQUIRE(row.size() == 3);
  auto annulus = face_union_shape(g, row);
  CHECK(annulus.connected);
  CHECK(annulus.chi == 0);
  CHECK(annulus.boundary_circuits == 2);
  CHECK(annulus.genus == 0);

  // everything
  std::set<int> all;
  for (int f = 0; f < g.face_count(); ++f) all.insert(f);
  auto whole = face_union_shape(g, all);
  CHECK(whole.connected);
  CHECK(whole.chi == 0);
  CHECK(whole.boundary_circuits == 0);
  CHECK(whole.genus == 1);

  // two squares sharing only a corner are not edge-connected
  std::set<int> diag{g.face_of(grid_dart(3, 3, 0, 0, 1)), g.face_of(grid_dart(3, 3, 1, 1, 1))};
  REQUIRE(diag.size() == 2);
  CHECK_FALSE(face_union_shape(g, diag).connected);
}

TEST_CASE("edge subdivision preserves the surface and face keys") {
  auto g = with_punctures(torus_grid(2, 2), {{1, 1}});
  auto s = subdivide_edges(g, 2);
  CHECK(s.vertex_count() == 4 + 8);
  CHECK(s.edge_count() == 16);
  CHECK(s.face_count() == 4);
  CHECK(s.euler_characteristic(true) == 0);
  CHECK(s.genus() == 1);
  CHECK(s.puncture_total() == 1);
  CHECK(s.face(s.face_by_key(1)).punctures == 1);

  auto s3 = subdivide_edges(g, 3);
  CHECK(s3.vertex_count() == 4 + 16);
  CHECK(s3.edge_count() == 24);
  CHECK(s3.genus() == 1);
}

TEST_CASE("adding a chord splits a face") {
  auto t = one_vertex_surface(1);
  auto c = add_chord(t, 0, 1);
  CHECK(c.vertex_count() == 1);
  CHECK(c.edge_count() == 3);
  CHECK(c.face_count() == 2);
  CHECK(c.genus() == 1);

  auto g = torus_grid(2, 2);
  // corners on different faces
  CHECK_THROWS_WITH_AS(add_chord(g, 1, 2), doctest::Contains("InvariantViolation"), Error);
}

TEST_CASE("vertex rotations start at their minimal dart") {
  auto g = torus_grid(2, 2);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& rot = g.vertex_darts(v);
    CHECK(rot.front() == *std::min_element(rot.begin(), rot.end()));
    for (Dart d : rot) CHECK(g.vertex_of(d) == v);
    CHECK(static_cast<int>(rot.size()) == 4);
  }
}
