#pragma once

#include <memory>

#include "nscorn/surface_map.hpp"

namespace nscorn {

// Z/2 homology class in the fixed basis of its map: coords[i] is the
// intersection parity with basis cycle i. The intersection form is
// nondegenerate on the chosen basis, so the zero vector characterizes
// null-homologous (separating) simple cycles.
struct H1Class {
  std::vector<unsigned char> coords;

  bool zero() const {
    for (auto c : coords)
      if (c) return false;
    return true;
  }
  H1Class& operator^=(const H1Class& o) {
    require(coords.size() == o.coords.size(), "InvariantViolation",
            "class vectors from different bases");
    for (size_t i = 0; i < coords.size(); ++i) coords[i] ^= o.coords[i];
    return *this;
  }
  friend H1Class operator^(H1Class a, const H1Class& b) { return a ^= b; }
  friend bool operator==(const H1Class& a, const H1Class& b) { return a.coords == b.coords; }
  friend bool operator!=(const H1Class& a, const H1Class& b) { return !(a == b); }
};

// 2g cycles in the 1-skeleton whose classes form a basis of the first
// homology of the capped surface. Built from spanning-tree fundamental
// cycles, kept when independent modulo face boundaries; fully deterministic
// (tree and cycles scanned in increasing edge order).
struct H1Basis {
  std::uint64_t map_uid = 0;
  std::set<int> tree_edges;
  std::vector<Walk> basis_cycles;
  std::vector<std::set<int>> basis_edge_sets;  // edge ids per basis cycle
};

H1Basis h1_basis(const CombinatorialMap& m);
// Memoized by map uid; thread-safe.
std::shared_ptr<const H1Basis> h1_basis_cached(const CombinatorialMap& m);

// Intersection parity of the left push-off of closed walk c with the cycle
// supported on the given edge set. Backtracking spurs in c are cancelled
// first (they are null-homotopic).
int pairing_mod2(const CombinatorialMap& m, const Walk& c, const std::set<int>& edges);

// Class of a closed walk in the 1-skeleton.
H1Class class_of(const CombinatorialMap& m, const H1Basis& basis, const Walk& c);
// Class of a transverse curve given by the edges it crosses, with
// multiplicity (a curve crossing edge e twice lists it twice).
H1Class class_of_crossings(const CombinatorialMap& m, const H1Basis& basis,
                           const std::vector<int>& crossed_edges);

bool is_separating(const CombinatorialMap& m, const Walk& c);
// Separating and one side a punctured disk (genus 0, single boundary face).
bool is_trivially_separating(const CombinatorialMap& m, const Walk& c);

}  // namespace nscorn
