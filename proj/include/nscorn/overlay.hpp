#pragma once

#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nscorn/homology.hpp"
#include "nscorn/surface_map.hpp"

namespace nscorn {

// Position of a crossing along an edge, measured from the origin of the
// edge's lower dart. Exact rationals keep every incidence decision exact.
using Rank = boost::multiprecision::cpp_rational;

// A curve transverse to the skeleton, given by the ordered list of edge
// crossings. Consecutive crossings are joined by a straight chord inside the
// face they share; start_face pins which side of events[0] the first chord
// lies on (the (edge, rank) list alone does not always determine it).
struct CurveSpec {
  std::string name;
  bool closed = true;
  std::vector<std::pair<int, Rank>> events;
  int start_face = -1;

  // Open arcs only: where each end sits. A Free end stops just past the
  // adjacent event inside its face; an OnCurve end is pinned to another
  // curve of the same overlay at position t along that curve's segment.
  struct Endpoint {
    enum Kind { Free, OnCurve };
    Kind kind = Free;
    int host = -1;
    int host_seg = -1;
    Rank t;
  };
  Endpoint start, finish;
};

// Arrangement of a curve family over a base map. The refined map carries the
// skeleton plus all curves as extra edges; every curve-curve crossing is a
// degree-4 vertex with alternating strands.
class Overlay {
public:
  static Overlay build(const CombinatorialMap& base, std::vector<CurveSpec> curves);

  const CombinatorialMap& base() const { return base_; }
  const CombinatorialMap& refined() const { return refined_; }

  int curve_count() const { return static_cast<int>(specs_.size()); }
  const CurveSpec& spec(int c) const { return specs_[c]; }
  bool closed(int c) const { return specs_[c].closed; }

  // Refined-map darts along curve c, one per piece, in traversal order.
  const std::vector<Dart>& walk(int c) const { return walks_[c]; }

  struct Crossing {
    int vertex;       // refined-map vertex id
    int a, b;         // curve indices, a <= b (equal never happens; kept sorted)
    int pos_a, pos_b; // indices into crossings_along(a) / crossings_along(b)
  };
  const std::vector<Crossing>& crossings() const { return crossings_; }
  // Indices into crossings(), ordered along curve c's traversal.
  const std::vector<int>& crossings_along(int c) const { return along_[c]; }
  int crossing_count(int a, int b) const;

  bool is_reduced() const { return reduced_; }

  // Provenance of refined cells.
  int base_face_of(int refined_face) const { return face_home_[refined_face]; }
  struct DartInfo {
    int curve = -1;   // -1 for skeleton pieces
    int seg = -1;     // segment index along the curve (skeleton: base edge id)
    bool forward = false;
  };
  const DartInfo& dart_info(Dart d) const { return dart_info_[d]; }
  // Base edge ids crossed by curve c, in traversal order, with multiplicity.
  std::vector<int> crossed_base_edges(int c) const;
  // Index into walk(c) of the piece that starts at crossing position j.
  int walk_offset(int c, int pos) const { return offsets_[c][pos]; }

  int event_count(int c) const { return static_cast<int>(specs_[c].events.size()); }
  const std::pair<int, Rank>& event(int c, int k) const { return specs_[c].events[k]; }
  // Base face entered after crossing event k.
  int event_home(int c, int k) const;
  // Segment of curve c holding crossing position pos. Closed curves: segment
  // k runs from event k to event k+1; arcs: segment k ends at event k.
  int crossing_seg(int c, int pos) const { return seg_of_pos_[c][pos]; }

  H1Class curve_class(int c) const;
  bool curve_separating(int c) const;

  friend Overlay reduce_to_minimal_position(Overlay o);

private:
  CombinatorialMap base_, refined_;
  std::vector<CurveSpec> specs_;
  std::vector<std::vector<Dart>> walks_;
  std::vector<Crossing> crossings_;
  std::vector<std::vector<int>> along_;
  std::vector<std::vector<int>> offsets_;
  std::vector<std::vector<int>> seg_of_pos_;
  std::vector<std::vector<int>> homes_;
  std::vector<int> face_home_;
  std::vector<DartInfo> dart_info_;
  bool reduced_ = false;
};

// Removes removable bigons until none remain. Picks the smallest bigon
// first (fewest refined faces), which keeps the total crossing count
// strictly decreasing even in multi-curve families.
Overlay reduce_to_minimal_position(Overlay o);

// Geometric intersection number of two curves in a reduced overlay.
int intersection_number(const Overlay& o, int a, int b);

// Disjoint closed curves cobounding an annulus. Requires a reduced overlay;
// curves that still cross are never isotopic.
bool is_isotopic(const Overlay& o, int a, int b);

// Whether nonseparating closed curves a, b span an edge of the curve graph:
// genus 1 asks i(a,b) <= 1, genus >= 2 asks i(a,b) == 0; isotopic pairs are
// rejected. Requires a reduced overlay.
bool ns_edge(const Overlay& o, int a, int b);

// Oriented sub-arc of closed curve c between two of its crossing vertices.
struct SubArc {
  int curve = -1;
  int from_pos = -1, to_pos = -1; // positions along the curve's crossing list
  std::vector<Dart> darts;        // refined walk from p to q
};
SubArc subarc(const Overlay& o, int c, int p, int q);

// Re-emits part of an overlay curve as fresh CurveSpec events: every rank is
// displaced into the adjacent gap on the curve's left, scaled by 3^-nonce so
// independently extracted copies never collide. arc walks from crossing
// position from_pos to to_pos; whole_curve ignores the positions.
std::vector<std::pair<int, Rank>> displaced_events(const Overlay& o, int c, int from_pos,
                                                   int to_pos, int nonce);
std::vector<std::pair<int, Rank>> displaced_events_all(const Overlay& o, int c, int nonce);

// Event indices met while walking curve c forward from crossing position
// from_pos to to_pos. Closed curves wrap; arc positions must be in order.
std::vector<int> event_indices_between(const Overlay& o, int c, int from_pos, int to_pos);
// Displaced copies of the given events of curve c, in the order given. Same
// displacement rule as displaced_events.
std::vector<std::pair<int, Rank>> displaced_event_list(const Overlay& o, int c,
                                                       const std::vector<int>& indices,
                                                       int nonce);

// Transverse copy of an embedded skeleton cycle, pushed off to the walk's
// left. Crosses every edge incident to a visited vertex on the left side,
// at distance 1/denom from the vertex (denom >= 3; two copies built with
// coprime denominators never share a rank).
CurveSpec left_pushoff(const CombinatorialMap& m, const Walk& w, const std::string& name,
                       long denom = 3);

// Sum of crossing signs between two distinct closed curves of the overlay,
// read off the rotation at each crossing vertex. Antisymmetric; same parity
// as the geometric count.
int algebraic_intersection(const Overlay& o, int a, int b);

// Simple skeleton cycle meeting the nonseparating cycle c exactly once.
// Scans basis cycles, then sums of up to 2g of them resolved into embedded
// cycles; each candidate with odd pairing is verified geometrically via
// push-off overlay reduction.
Walk find_dual_curve(const CombinatorialMap& m, const Walk& c);

} // namespace nscorn
