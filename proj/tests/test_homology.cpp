#include <cstdlib>
#include <functional>

#include "doctest.h"
#include "nscorn/homology.hpp"
#include "nscorn/overlay.hpp"

using namespace nscorn;

namespace {

int gd(int n, int i, int j, int dir) { return 4 * (((i % n) + n) % n + n * (((j % n) + n) % n)) + dir; }

// Two-vertex digon sphere with two punctures on each face.
CombinatorialMap four_punctured_sphere() {
  return CombinatorialMap::build({2, 3, 0, 1}, {1, 0, 3, 2}, {{0, 2}, {1, 2}});
}

// All simple cycles with at most max_len edges, one representative per edge
// set, found by dart-level DFS.
std::vector<Walk> simple_cycles_upto(const CombinatorialMap& m, int max_len) {
  std::vector<Walk> out;
  std::set<std::set<int>> seen;
  std::vector<Dart> path;
  std::set<int> used_vertices, used_edges;
  std::function<void(int)> grow = [&](int start_vertex) {
    int at = path.empty() ? start_vertex : m.vertex_of(m.alpha(path.back()));
    for (Dart d : m.vertex_darts(at)) {
      if (used_edges.count(m.edge_of(d))) continue;
      int head = m.vertex_of(m.alpha(d));
      if (head == start_vertex) {
        std::set<int> edges(used_edges);
        edges.insert(m.edge_of(d));
        if (seen.insert(edges).second) {
          Walk w;
          w.darts = path;
          w.darts.push_back(d);
          out.push_back(w);
        }
        continue;
      }
      if (used_vertices.count(head) || static_cast<int>(path.size()) + 1 >= max_len) continue;
      path.push_back(d);
      used_vertices.insert(head);
      used_edges.insert(m.edge_of(d));
      grow(start_vertex);
      used_edges.erase(m.edge_of(d));
      used_vertices.erase(head);
      path.pop_back();
    }
  };
  for (int v = 0; v < m.vertex_count(); ++v) {
    used_vertices.insert(v);
    grow(v);
    used_vertices.erase(v);
  }
  return out;
}

}  // namespace

TEST_CASE("basis rank is twice the genus") {
  CHECK(h1_basis(with_punctures(torus_grid(2, 2), {{0, 1}})).basis_cycles.size() == 2);
  CHECK(h1_basis(one_vertex_surface(2)).basis_cycles.size() == 4);
  CHECK(h1_basis(four_punctured_sphere()).basis_cycles.size() == 0);
  CHECK(h1_basis(one_vertex_surface(3)).basis_cycles.size() == 6);
}

TEST_CASE("one-vertex torus core curves pair as a symplectic pair") {
  auto t = one_vertex_surface(1);
  auto basis = h1_basis(t);
  Walk a{{0}}, b{{2}};
  CHECK(pairing_mod2(t, a, {1}) == 1);  // a against the b-edge
  CHECK(pairing_mod2(t, a, {0}) == 0);  // self-pairing vanishes
  CHECK(pairing_mod2(t, b, {1}) == 0);
  auto ca = class_of(t, basis, a);
  auto cb = class_of(t, basis, b);
  CHECK_FALSE(ca.zero());
  CHECK_FALSE(cb.zero());
  CHECK(ca != cb);
  CHECK_FALSE((ca ^ cb).zero());
  CHECK((ca ^ ca).zero());
  CHECK_FALSE(is_separating(t, a));
  CHECK_FALSE(is_separating(t, b));
}

TEST_CASE("parallel grid rows are homologous and nonseparating") {
  auto g = torus_grid(3, 3);
  auto basis = h1_basis(g);
  Walk row0{{gd(3, 0, 0, 0), gd(3, 1, 0, 0), gd(3, 2, 0, 0)}};
  Walk row1{{gd(3, 0, 1, 0), gd(3, 1, 1, 0), gd(3, 2, 1, 0)}};
  auto c0 = class_of(g, basis, row0);
  auto c1 = class_of(g, basis, row1);
  CHECK_FALSE(c0.zero());
  CHECK(c0 == c1);
  CHECK_FALSE(is_separating(g, row0));
}

TEST_CASE("glued grids form a genus-2 surface with a separating seam") {
  auto left = torus_grid(3, 3);
  auto glued = glue_faces(left, 1, torus_grid(3, 3), 1);
  const auto& s = glued.map;
  CHECK(s.vertex_count() == 14);
  CHECK(s.edge_count() == 32);
  CHECK(s.face_count() == 16);
  CHECK(s.euler_characteristic(true) == -2);
  CHECK(s.genus() == 2);
  CHECK(h1_basis(s).basis_cycles.size() == 4);

  // The seam is the waist: separating but not trivially so.
  CHECK(is_separating(s, glued.seam));
  CHECK_FALSE(is_trivially_separating(s, glued.seam));
  auto cut = cut_along_cycle(s, glued.seam);
  REQUIRE(cut.components.size() == 2);
  CHECK(cut.components[0].genus == 1);
  CHECK(cut.components[1].genus == 1);

  // A surviving grid row on the left half stays nonseparating.
  Walk row{{glued.from1[gd(3, 0, 2, 0)], glued.from1[gd(3, 1, 2, 0)],
            glued.from1[gd(3, 2, 2, 0)]}};
  for (Dart d : row.darts) REQUIRE(d >= 0);
  CHECK_FALSE(is_separating(s, row));
}

TEST_CASE("a square around a puncture is trivially separating") {
  auto g = with_punctures(torus_grid(3, 3), {{1, 1}});
  int f = g.face_by_key(1);
  Walk square{g.face(f).darts};
  CHECK(is_separating(g, square));
  CHECK(is_trivially_separating(g, square));

  // Around an unpunctured face it still bounds a disk.
  Walk other{g.face(g.face_by_key(0)).darts};
  CHECK(is_separating(g, other));
  CHECK(is_trivially_separating(g, other));

  // Nonseparating input is rejected.
  Walk row{{gd(3, 0, 0, 0), gd(3, 1, 0, 0), gd(3, 2, 0, 0)}};
  CHECK_THROWS_WITH_AS(is_trivially_separating(g, row), doctest::Contains("NotSeparating"),
                       Error);
}

TEST_CASE("every simple cycle on the 4-punctured sphere separates") {
  auto s = four_punctured_sphere();
  for (const auto& c : simple_cycles_upto(s, 4)) {
    CHECK(is_separating(s, c));
    CHECK(cut_along_cycle(s, c).components.size() == 2);
  }
}

TEST_CASE("separating test agrees with cut component count on small cycles") {
  auto check_map = [](const CombinatorialMap& m, int max_len) {
    auto cycles = simple_cycles_upto(m, max_len);
    REQUIRE(cycles.size() > 0);
    for (const auto& c : cycles) {
      bool sep = is_separating(m, c);
      auto cut = cut_along_cycle(m, c);
      CHECK(sep == (cut.components.size() == 2));
    }
    return cycles.size();
  };
  check_map(with_punctures(torus_grid(2, 2), {{0, 1}}), 6);
  check_map(one_vertex_surface(2), 6);
  check_map(glue_faces(torus_grid(2, 2), 1, torus_grid(2, 2), 1).map, 6);
}

TEST_CASE("crossing-parity classes match walk classes for skeleton-avoiding pairs") {
  // A transverse curve crossing exactly the edges of a basis cycle once each
  // pairs with the basis the same way the cycle's geometric dual would.
  auto t = one_vertex_surface(1);
  auto basis = h1_basis(t);
  auto cls = class_of_crossings(t, basis, {0});  // crosses the a-edge once
  CHECK_FALSE(cls.zero());
  auto twice = class_of_crossings(t, basis, {0, 0});
  CHECK(twice.zero());
}

TEST_CASE("push-off of a grid row is a parallel transverse copy") {
  auto g = torus_grid(2, 2);
  Walk row{{gd(2, 0, 0, 0), gd(2, 1, 0, 0)}};
  auto spec = left_pushoff(g, row, "r");
  // One crossing per vertical edge the row passes, a third of the way up.
  REQUIRE(spec.events.size() == 2);
  CHECK(spec.events[0].second == Rank(1, 3));
  CHECK(spec.events[1].second == Rank(1, 3));
  auto ov = Overlay::build(g, {spec});
  CHECK(ov.is_reduced());
  auto basis = h1_basis_cached(g);
  CHECK(ov.curve_class(0) == class_of(g, *basis, row));
  CHECK_FALSE(ov.curve_separating(0));

  CHECK_THROWS_WITH_AS(left_pushoff(g, row, "r", 2), doctest::Contains("InvariantViolation"),
                       Error);
}

TEST_CASE("signed crossings of a dual pair sum to plus or minus one") {
  auto g = torus_grid(2, 2);
  Walk row{{gd(2, 0, 0, 0), gd(2, 1, 0, 0)}};
  Walk col{{gd(2, 0, 0, 1), gd(2, 0, 1, 1)}};
  auto ov = reduce_to_minimal_position(
      Overlay::build(g, {left_pushoff(g, row, "r", 3), left_pushoff(g, col, "c", 5)}));
  CHECK(ov.crossing_count(0, 1) == 1);  // no bigon to remove
  CHECK(intersection_number(ov, 0, 1) == 1);
  int s = algebraic_intersection(ov, 0, 1);
  CHECK(std::abs(s) == 1);
  CHECK(algebraic_intersection(ov, 1, 0) == -s);
  CHECK_THROWS_WITH_AS(algebraic_intersection(ov, 0, 0), doctest::Contains("NotTransverse"),
                       Error);
}

TEST_CASE("dual search returns a cycle meeting the input exactly once") {
  auto g = torus_grid(2, 2);
  Walk row{{gd(2, 0, 0, 0), gd(2, 1, 0, 0)}};
  Walk dual = find_dual_curve(g, row);
  std::set<int> row_edges;
  for (Dart d : row.darts) row_edges.insert(g.edge_of(d));
  CHECK(pairing_mod2(g, dual, row_edges) == 1);
  auto ov = reduce_to_minimal_position(
      Overlay::build(g, {left_pushoff(g, row, "r", 3), left_pushoff(g, dual, "d", 5)}));
  CHECK(intersection_number(ov, 0, 1) == 1);
}

TEST_CASE("dual search rejects separating input") {
  auto glued = glue_faces(torus_grid(3, 3), 1, torus_grid(3, 3), 1);
  const auto& s = glued.map;
  CHECK_THROWS_WITH_AS(find_dual_curve(s, glued.seam), doctest::Contains("NotSeparating"), Error);

  Walk row{{glued.from1[gd(3, 0, 2, 0)], glued.from1[gd(3, 1, 2, 0)],
            glued.from1[gd(3, 2, 2, 0)]}};
  Walk dual = find_dual_curve(s, row);
  auto ov = reduce_to_minimal_position(
      Overlay::build(s, {left_pushoff(s, row, "r", 3), left_pushoff(s, dual, "d", 5)}));
  CHECK(intersection_number(ov, 0, 1) == 1);
}
