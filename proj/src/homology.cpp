#include "nscorn/homology.hpp"

#include <algorithm>
#include <mutex>

namespace nscorn {

namespace {

using Bits = std::vector<std::uint64_t>;

Bits make_bits(int n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, int i) { b[i / 64] ^= std::uint64_t(1) << (i % 64); }
void xor_into(Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}
int lowest_bit(const Bits& b) {
  for (size_t i = 0; i < b.size(); ++i)
    if (b[i]) return static_cast<int>(i) * 64 + __builtin_ctzll(b[i]);
  return -1;
}

// Echelon basis over Z/2 keyed by pivot position.
struct Echelon {
  std::map<int, Bits> rows;

  // Reduces v in place; returns true (and absorbs v) when v was independent.
  bool add(Bits& v) {
    for (int p = lowest_bit(v); p >= 0; p = lowest_bit(v)) {
      auto it = rows.find(p);
      if (it == rows.end()) {
        rows.emplace(p, v);
        return true;
      }
      xor_into(v, it->second);
    }
    return false;
  }
};

// Cancels backtracking spurs (d followed cyclically by alpha(d)) until stable.
std::vector<Dart> cancel_spurs(const CombinatorialMap& m, std::vector<Dart> w) {
  bool changed = true;
  while (changed && w.size() >= 2) {
    changed = false;
    for (size_t k = 0; k < w.size(); ++k) {
      size_t j = (k + 1) % w.size();
      if (w[j] == m.alpha(w[k])) {
        if (j > k) {
          w.erase(w.begin() + j);
          w.erase(w.begin() + k);
        } else {
          w.erase(w.begin() + k);
          w.erase(w.begin() + j);
        }
        changed = true;
        break;
      }
    }
  }
  return w;
}

}  // namespace

H1Basis h1_basis(const CombinatorialMap& m) {
  const int V = m.vertex_count(), E = m.edge_count();

  // Spanning tree, edges scanned in increasing id from vertex 0.
  std::vector<int> up_dart(V, -1);  // dart at v along the tree edge toward the parent
  std::vector<int> depth(V, -1);
  std::set<int> tree;
  {
    depth[0] = 0;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int e = 0; e < E; ++e) {
        Dart d = m.edge_dart(e);
        int u = m.vertex_of(d), v = m.vertex_of(m.alpha(d));
        if (depth[u] >= 0 && depth[v] < 0) {
          depth[v] = depth[u] + 1;
          up_dart[v] = m.alpha(d);
          tree.insert(e);
          grew = true;
        } else if (depth[v] >= 0 && depth[u] < 0) {
          depth[u] = depth[v] + 1;
          up_dart[u] = d;
          tree.insert(e);
          grew = true;
        }
      }
    }
  }

  // Face boundaries span the null classes.
  Echelon ech;
  for (int f = 0; f < m.face_count(); ++f) {
    std::map<int, int> cnt;
    for (Dart d : m.face(f).darts) ++cnt[m.edge_of(d)];
    Bits b = make_bits(E);
    for (auto& [e, c] : cnt)
      if (c % 2) set_bit(b, e);
    ech.add(b);
  }

  H1Basis basis;
  basis.map_uid = m.uid();
  basis.tree_edges = tree;

  auto walk_up = [&](int v, std::vector<Dart>& out) {
    while (up_dart[v] >= 0) {
      out.push_back(up_dart[v]);
      v = m.vertex_of(m.alpha(up_dart[v]));
    }
  };

  for (int e = 0; e < E; ++e) {
    if (tree.count(e)) continue;
    Dart d = m.edge_dart(e);
    // Fundamental cycle: chord d, then the tree path from its head back to
    // its tail (common tail of the two root paths cancels).
    std::vector<Dart> from_head, from_tail;
    walk_up(m.vertex_of(m.alpha(d)), from_head);
    walk_up(m.vertex_of(d), from_tail);
    while (!from_head.empty() && !from_tail.empty() && from_head.back() == from_tail.back()) {
      from_head.pop_back();
      from_tail.pop_back();
    }
    Walk cycle;
    cycle.darts.push_back(d);
    for (Dart t : from_head) cycle.darts.push_back(t);
    for (auto it = from_tail.rbegin(); it != from_tail.rend(); ++it)
      cycle.darts.push_back(m.alpha(*it));

    Bits b = make_bits(E);
    std::set<int> edges;
    for (Dart t : cycle.darts) {
      set_bit(b, m.edge_of(t));
      edges.insert(m.edge_of(t));
    }
    if (!ech.add(b)) continue;  // dependent modulo boundaries
    require_simple_cycle(m, cycle);
    basis.basis_cycles.push_back(std::move(cycle));
    basis.basis_edge_sets.push_back(std::move(edges));
  }

  require(static_cast<int>(basis.basis_cycles.size()) == 2 * m.genus(), "InvariantViolation",
          "homology basis has wrong rank");
  return basis;
}

std::shared_ptr<const H1Basis> h1_basis_cached(const CombinatorialMap& m) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const H1Basis>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m.uid());
    if (it != cache.end()) return it->second;
  }
  auto fresh = std::make_shared<const H1Basis>(h1_basis(m));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(m.uid(), std::move(fresh));
  return it->second;
}

int pairing_mod2(const CombinatorialMap& m, const Walk& c, const std::set<int>& edges) {
  require(is_closed_walk(m, c), "NotAClosedWalk", "pairing needs a closed walk");
  std::vector<Dart> w = cancel_spurs(m, c.darts);
  if (w.empty()) return 0;
  int cnt = 0;
  const int n = static_cast<int>(w.size());
  for (int k = 0; k < n; ++k) {
    Dart o = w[k];
    Dart i = m.alpha(w[(k - 1 + n) % n]);
    // Left sector: strictly counterclockwise from the outgoing dart to the
    // incoming reversal; the left push-off crosses exactly these edge ends.
    for (Dart t = m.sigma(o); t != i; t = m.sigma(t))
      if (edges.count(m.edge_of(t))) ++cnt;
  }
  return cnt % 2;
}

H1Class class_of(const CombinatorialMap& m, const H1Basis& basis, const Walk& c) {
  require(basis.map_uid == m.uid(), "InvariantViolation", "basis belongs to another map");
  H1Class cls;
  for (const auto& edges : basis.basis_edge_sets)
    cls.coords.push_back(static_cast<unsigned char>(pairing_mod2(m, c, edges)));
  return cls;
}

H1Class class_of_crossings(const CombinatorialMap& m, const H1Basis& basis,
                           const std::vector<int>& crossed_edges) {
  require(basis.map_uid == m.uid(), "InvariantViolation", "basis belongs to another map");
  for (int e : crossed_edges)
    require(e >= 0 && e < m.edge_count(), "InvariantViolation", "crossed edge out of range");
  H1Class cls;
  for (const auto& edges : basis.basis_edge_sets) {
    int cnt = 0;
    for (int e : crossed_edges) cnt += edges.count(e);
    cls.coords.push_back(static_cast<unsigned char>(cnt % 2));
  }
  return cls;
}

bool is_separating(const CombinatorialMap& m, const Walk& c) {
  require_simple_cycle(m, c);
  return class_of(m, *h1_basis_cached(m), c).zero();
}

bool is_trivially_separating(const CombinatorialMap& m, const Walk& c) {
  require(is_separating(m, c), "NotSeparating", "curve is nonseparating");
  auto cut = cut_along_cycle(m, c);
  for (const auto& comp : cut.components)
    if (comp.genus == 0 && comp.boundary_faces == 1) return true;
  return false;
}

}  // namespace nscorn
