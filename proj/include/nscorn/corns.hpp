#pragma once

#include <set>
#include <string>
#include <vector>

#include "nscorn/homology.hpp"
#include "nscorn/overlay.hpp"

namespace nscorn {

// One side of a corn: a sub-arc of an overlay curve. Crossing-bounded sides
// run between two crossing positions on the parent and are traversed from
// from_pos to to_pos, along the parent when forward is set and against it
// otherwise. whole stands in for an entire parent curve. pin_bounded sides
// run between two pinned arc endpoints on the parent instead of between
// crossings, with the pins given as (segment, offset) pairs.
struct CornArc {
  int curve = -1;
  int from_pos = -1, to_pos = -1;
  bool forward = true;
  bool whole = false;
  bool pin_bounded = false;
  int from_seg = -1, to_seg = -1;
  Rank from_t, to_t;
};

// Closed curve made of one arc of each of two transverse curves, glued at
// two of their crossings: alpha runs p -> q, beta runs q -> p. A degenerate
// bicorn is a whole parent curve on its own. Pin-form bicorns pair a
// pin-bounded window on the host with a whole open arc whose endpoints are
// the pins; their corners are -1.
struct Bicorn {
  CornArc alpha, beta;
  int corner_p = -1, corner_q = -1;
  bool degenerate = false;
  int whole_curve = -1;
};

// Closed curve alternating k arcs from one family with k arcs from another:
// a_sides[i] runs p[i] -> q[i], b_sides[i] runs q[i] -> p[(i+1)%k]. Entries
// of p and q are crossing ids of the overlay.
struct TwoKCorn {
  int k = 0;
  std::vector<CornArc> a_sides, b_sides;
  std::vector<int> p, q;
};

// Chain of realized curves linking a corn to a bicorn, with the audited
// crossing count of each consecutive pair and the distance bound it yields
// (1 for disjoint non-isotopic neighbours, 2i+1 otherwise, 0 for isotopic).
struct PathCertificate {
  std::vector<CurveSpec> chain;
  std::vector<int> hop_inter;
  std::vector<int> hop_bounds;
  std::vector<std::string> notes;
  int total_bound = 0;
};

// Position of an embedded arc relative to a corn, read off its endpoints.
// JoinsSame: both ends on B-side bi. ParallelTo: ends on the two B-sides
// adjacent to A-side `side`. JoinsNonAdjacent: ends on non-adjacent B-sides.
// EqualsSide: the arc is A-side `side` itself. from_left / to_left record,
// at each endpoint, whether the arc leaves into the left of the oriented
// corn strand it meets.
struct ArcClass {
  enum Kind { JoinsNonAdjacent, JoinsSame, ParallelTo, EqualsSide };
  Kind kind = JoinsSame;
  int bi = -1, bj = -1;  // B-side indices of the from / to endpoints
  int side = -1;         // A-side index for ParallelTo / EqualsSide
  bool from_left = false, to_left = false;
};

// Pin-form bicorn built from one generator arc together with its class.
struct GeneratorBicorn {
  Bicorn bicorn;
  H1Class cls;
};

// Structural checks; throw on violation. A crossing-bounded corn requires
// distinct corners, sides that meet only at the stated corners, and pairwise
// point-disjoint sides within each family.
void validate_bicorn(const Overlay& o, const Bicorn& b);
void validate_corn(const Overlay& o, const TwoKCorn& c);

// Transverse realization: each side contributes its parent's skeleton
// events displaced slightly to the side's own track, so distinct sides of
// one build never collide. The result feeds Overlay::build over o's base.
CurveSpec realize_bicorn(const Overlay& o, const Bicorn& b, const std::string& name,
                         int nonce_base = 1);
CurveSpec realize_corn(const Overlay& o, const TwoKCorn& c, const std::string& name,
                       int nonce_base = 1);

// Mod-2 class from the skeleton edges the sides cross.
H1Class bicorn_class(const Overlay& o, const Bicorn& b);
H1Class corn_class(const Overlay& o, const TwoKCorn& c);
bool bicorn_separating(const Overlay& o, const Bicorn& b);

// All bicorns of the pair {a, b} in a reduced overlay: the two degenerate
// ones, then for each unordered crossing pair the embedded members of the
// four arc pairings, in crossing-id order.
std::vector<Bicorn> enumerate_bicorns(const Overlay& o, int a, int b);
std::vector<Bicorn> nonseparating_bicorns(const Overlay& o, int a, int b);

// First member of A (in the given order) having a side of c it crosses at
// least twice, cut along that side into consecutive-intersection candidates;
// returns the first nonseparating candidate. NoQualifyingSide when every
// member meets every side at most once.
Bicorn step1_bicorn(const Overlay& o, const std::vector<int>& A, const TwoKCorn& c);

// Classifies an embedded arc meeting c exactly at its endpoints.
ArcClass classify_arc(const Overlay& o, const TwoKCorn& c, const CornArc& arc);

// Whether inner lies in the pocket outer cuts off: same-side arcs compare
// foot spans, parallels compare feet against the shared corner ends.
bool arc_nested_in(const Overlay& o, const TwoKCorn& c, const CornArc& inner,
                   const CornArc& outer);

// Walks a nonseparating 2k-corn over the multicurves A, B down to a bicorn,
// auditing every hop of the produced chain by realizing both curves and
// reducing. The certificate's total_bound never exceeds k*k + 2*k.
std::pair<Bicorn, PathCertificate> reduce_corn(const Overlay& o, const std::vector<int>& A,
                                               const std::vector<int>& B, const TwoKCorn& c);

// Given a trivial-class bicorn c of a and b that does not bound a once-
// punctured disk on either side, returns a nonseparating bicorn of the same
// pair that is disjoint from c.
Bicorn nontrivsep_to_nonsep(const Overlay& o, int a, int b, const Bicorn& c);

// Pin-form bicorns of the host curve a with each of the given disjoint
// arcs pinned on it, together with their classes. Their span is the cycle
// space of the union graph.
std::vector<GeneratorBicorn> arc_bicorn_generators(const Overlay& o, int a,
                                                   const std::vector<int>& arcs);

// First generator bicorn that separates but does not cut off a once-
// punctured disk. NoneFound when every separating generator is trivial.
GeneratorBicorn nontrivsep_bicorn_search(const Overlay& o,
                                         const std::vector<GeneratorBicorn>& gens);

}  // namespace nscorn
