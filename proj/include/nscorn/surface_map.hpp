#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "nscorn/error.hpp"

namespace nscorn {

// Dart of a combinatorial map. Darts are 0..n-1; sigma is the counterclockwise
// rotation at the dart's origin vertex, alpha the edge involution. Faces are
// the orbits of phi(d) = sigma(alpha(d)); with this convention face_of(d) is
// the region to the right of d when walking along it.
using Dart = int;

struct FaceInfo {
  std::vector<Dart> darts;  // phi-orbit, rotated to start at the minimal dart
  int punctures = 0;
  bool boundary = false;  // cut artifact; boundary faces never carry punctures
};

// Closed or open walk as a dart sequence; dart k+1 must start where dart k
// ends (origin(darts[k+1]) == origin(alpha(darts[k]))).
struct Walk {
  std::vector<Dart> darts;
};

class CombinatorialMap {
public:
  // Validates that alpha is a fixed-point-free involution, sigma a
  // permutation, the map connected, and puncture keys name existing faces
  // (keys are the minimal dart of the face).
  static CombinatorialMap build(std::vector<Dart> sigma, std::vector<Dart> alpha,
                                const std::map<int, int>& face_punctures = {},
                                const std::set<int>& boundary_face_keys = {});

  int dart_count() const { return static_cast<int>(sigma_.size()); }
  Dart sigma(Dart d) const { return sigma_[d]; }
  Dart sigma_inv(Dart d) const { return sigma_inv_[d]; }
  Dart alpha(Dart d) const { return alpha_[d]; }
  Dart phi(Dart d) const { return sigma_[alpha_[d]]; }

  int vertex_of(Dart d) const { return vertex_of_[d]; }
  int vertex_count() const { return static_cast<int>(vertex_darts_.size()); }
  // Rotation at v, counterclockwise, starting from the minimal dart.
  const std::vector<Dart>& vertex_darts(int v) const { return vertex_darts_[v]; }
  int degree(int v) const { return static_cast<int>(vertex_darts_[v].size()); }

  int edge_of(Dart d) const { return edge_of_[d]; }
  int edge_count() const { return dart_count() / 2; }
  // Lower dart of edge e; edges are numbered in increasing lower-dart order,
  // so edge_dart(e) is also increasing in e.
  Dart edge_dart(int e) const { return edge_dart_[e]; }

  int face_of(Dart d) const { return face_of_[d]; }
  int face_count() const { return static_cast<int>(faces_.size()); }
  const FaceInfo& face(int f) const { return faces_[f]; }
  int face_key(int f) const { return faces_[f].darts.front(); }  // minimal dart
  int face_by_key(int key) const;

  int puncture_total() const { return puncture_total_; }

  // capped: every face (boundary included) counts as a disk. Uncapped
  // subtracts one per puncture, giving the Euler characteristic of the
  // punctured surface itself.
  int euler_characteristic(bool capped) const;
  int genus() const;  // of the capped surface

  // Identity token for memoized per-map computations (homology bases).
  std::uint64_t uid() const { return uid_; }

  bool same_darts(const CombinatorialMap& o) const {
    return sigma_ == o.sigma_ && alpha_ == o.alpha_;
  }

  const std::vector<Dart>& sigma_perm() const { return sigma_; }
  const std::vector<Dart>& alpha_perm() const { return alpha_; }
  const std::map<int, int>& punctures_by_key() const { return punctures_by_key_; }
  std::set<int> boundary_keys() const;

private:
  int face_by_key_or(int fallback, int key) const;

  std::vector<Dart> sigma_, sigma_inv_, alpha_;
  std::vector<int> vertex_of_, edge_of_, face_of_;
  std::vector<std::vector<Dart>> vertex_darts_;
  std::vector<Dart> edge_dart_;
  std::vector<FaceInfo> faces_;
  std::map<int, int> punctures_by_key_;
  int puncture_total_ = 0;
  std::uint64_t uid_ = 0;
};

// Walk checks. A simple cycle visits each vertex at most once and never
// reuses an edge.
bool is_closed_walk(const CombinatorialMap& m, const Walk& w);
void require_simple_cycle(const CombinatorialMap& m, const Walk& w);

struct CutComponent {
  CombinatorialMap map;
  int genus = 0;
  int punctures = 0;
  int boundary_faces = 0;
  // Keys (in this component's map) of the two boundary faces the cut itself
  // created, as opposed to boundary faces inherited from earlier cuts.
  std::vector<int> new_boundary_keys;
  // Dart translation: parent-map dart -> component dart, -1 when absent.
  // Parent darts keep their role (the cut cycle's darts become the left
  // boundary copies), so walks disjoint from the cycle can be carried over.
  std::vector<Dart> from_parent;
};

struct CutResult {
  std::vector<CutComponent> components;
};

// Cuts the surface along an embedded cycle in the 1-skeleton. One component
// with two new boundary faces when the cycle is nonseparating, two components
// with one each when separating. Face punctures are carried over; new
// boundary faces are flagged and puncture-free.
CutResult cut_along_cycle(const CombinatorialMap& m, const Walk& cycle);

// True when the subsurface already carries the whole genus of m.
bool is_witness(const CombinatorialMap& m, const CutComponent& sub);

// Shape of a union of closed faces, seen as a bordered subsurface.
struct SubsurfaceShape {
  bool connected = false;
  int chi = 0;                // of the bordered subsurface, punctures ignored
  int boundary_circuits = 0;
  int genus = 0;
  int punctures = 0;
};
SubsurfaceShape face_union_shape(const CombinatorialMap& m, const std::set<int>& faces);

// Map surgery used by the instance corpus.
CombinatorialMap subdivide_edges(const CombinatorialMap& m, int pieces);
// New edge between origin(u) and origin(v), inserted immediately clockwise of
// u and of v in their rotations; both corners must lie on the same face.
CombinatorialMap add_chord(const CombinatorialMap& m, Dart u, Dart v);

// Connected sum: removes a puncture-free face from each map and glues the two
// boundary circles orientation-compatibly. Both faces must have the same
// degree and visit distinct vertices and edges. seam is the glued circle as a
// simple cycle in the result; from1/from2 translate old dart ids (-1 for the
// deleted face darts).
struct GlueResult {
  CombinatorialMap map;
  Walk seam;
  std::vector<Dart> from1, from2;
};
GlueResult glue_faces(const CombinatorialMap& m1, int key1, const CombinatorialMap& m2, int key2);

// Generators: one-vertex genus-g surface (4g darts, one face), n x m torus
// grid (unit squares, proper: each edge borders two distinct faces for
// n, m >= 2). Punctures are supplied by the caller afterwards.
CombinatorialMap one_vertex_surface(int genus, const std::map<int, int>& punctures = {});
CombinatorialMap torus_grid(int n, int m, const std::map<int, int>& punctures = {});
CombinatorialMap with_punctures(const CombinatorialMap& m, const std::map<int, int>& by_key);

}  // namespace nscorn
