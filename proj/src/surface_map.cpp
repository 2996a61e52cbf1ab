#include "nscorn/surface_map.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

namespace nscorn {

namespace {

std::uint64_t next_uid() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

bool is_permutation_of_range(const std::vector<Dart>& p) {
  std::vector<char> seen(p.size(), 0);
  for (Dart d : p) {
    if (d < 0 || d >= static_cast<int>(p.size()) || seen[d]) return false;
    seen[d] = 1;
  }
  return true;
}

}  // namespace

CombinatorialMap CombinatorialMap::build(std::vector<Dart> sigma, std::vector<Dart> alpha,
                                         const std::map<int, int>& face_punctures,
                                         const std::set<int>& boundary_face_keys) {
  const int n = static_cast<int>(sigma.size());
  require(n > 0 && n % 2 == 0, "InvalidInvolution", "dart count must be positive and even");
  require(static_cast<int>(alpha.size()) == n, "InvalidInvolution",
          "sigma and alpha must have equal length");
  require(is_permutation_of_range(sigma), "InvalidInvolution", "sigma is not a permutation");
  require(is_permutation_of_range(alpha), "InvalidInvolution", "alpha is not a permutation");
  for (Dart d = 0; d < n; ++d) {
    require(alpha[d] != d, "InvalidInvolution", "alpha has a fixed point at dart " + std::to_string(d));
    require(alpha[alpha[d]] == d, "InvalidInvolution",
            "alpha is not an involution at dart " + std::to_string(d));
  }

  CombinatorialMap m;
  m.sigma_ = std::move(sigma);
  m.alpha_ = std::move(alpha);
  m.sigma_inv_.assign(n, 0);
  for (Dart d = 0; d < n; ++d) m.sigma_inv_[m.sigma_[d]] = d;

  // Connectivity over <sigma, alpha>.
  {
    std::vector<char> seen(n, 0);
    std::vector<Dart> stack{0};
    seen[0] = 1;
    int visited = 0;
    while (!stack.empty()) {
      Dart d = stack.back();
      stack.pop_back();
      ++visited;
      for (Dart t : {m.sigma_[d], m.alpha_[d]}) {
        if (!seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
    require(visited == n, "Disconnected", "map is not connected");
  }

  // Vertices: sigma-orbits, discovered in ascending dart order so each orbit
  // list starts at its minimal dart.
  m.vertex_of_.assign(n, -1);
  for (Dart d = 0; d < n; ++d) {
    if (m.vertex_of_[d] >= 0) continue;
    int v = static_cast<int>(m.vertex_darts_.size());
    std::vector<Dart> orbit;
    Dart t = d;
    do {
      m.vertex_of_[t] = v;
      orbit.push_back(t);
      t = m.sigma_[t];
    } while (t != d);
    m.vertex_darts_.push_back(std::move(orbit));
  }

  // Edges: alpha-orbits in ascending lower-dart order.
  m.edge_of_.assign(n, -1);
  for (Dart d = 0; d < n; ++d) {
    if (m.edge_of_[d] >= 0) continue;
    int e = static_cast<int>(m.edge_dart_.size());
    m.edge_of_[d] = e;
    m.edge_of_[m.alpha_[d]] = e;
    m.edge_dart_.push_back(d);
  }

  // Faces: phi-orbits.
  m.face_of_.assign(n, -1);
  for (Dart d = 0; d < n; ++d) {
    if (m.face_of_[d] >= 0) continue;
    int f = static_cast<int>(m.faces_.size());
    FaceInfo info;
    Dart t = d;
    do {
      m.face_of_[t] = f;
      info.darts.push_back(t);
      t = m.phi(t);
    } while (t != d);
    m.faces_.push_back(std::move(info));
  }

  for (const auto& [key, count] : face_punctures) {
    require(count > 0, "UnknownFaceId", "puncture count must be positive for face " + std::to_string(key));
    int f = m.face_by_key_or(-1, key);
    require(f >= 0, "UnknownFaceId", "no face with minimal dart " + std::to_string(key));
    m.faces_[f].punctures = count;
    m.puncture_total_ += count;
    m.punctures_by_key_[key] = count;
  }
  for (int key : boundary_face_keys) {
    int f = m.face_by_key_or(-1, key);
    require(f >= 0, "UnknownFaceId", "no face with minimal dart " + std::to_string(key));
    require(m.faces_[f].punctures == 0, "InvariantViolation", "boundary face carries punctures");
    m.faces_[f].boundary = true;
  }

  require((2 - m.euler_characteristic(true)) % 2 == 0, "OddCappedChi",
          "capped Euler characteristic is odd");
  m.uid_ = next_uid();
  return m;
}

int CombinatorialMap::face_by_key_or(int fallback, int key) const {
  for (int f = 0; f < face_count(); ++f)
    if (face_key(f) == key) return f;
  return fallback;
}

int CombinatorialMap::face_by_key(int key) const {
  int f = face_by_key_or(-1, key);
  require(f >= 0, "UnknownFaceId", "no face with minimal dart " + std::to_string(key));
  return f;
}

int CombinatorialMap::euler_characteristic(bool capped) const {
  int chi = vertex_count() - edge_count() + face_count();
  return capped ? chi : chi - puncture_total_;
}

int CombinatorialMap::genus() const { return (2 - euler_characteristic(true)) / 2; }

std::set<int> CombinatorialMap::boundary_keys() const {
  std::set<int> keys;
  for (int f = 0; f < face_count(); ++f)
    if (faces_[f].boundary) keys.insert(face_key(f));
  return keys;
}

bool is_closed_walk(const CombinatorialMap& m, const Walk& w) {
  if (w.darts.empty()) return false;
  const int n = static_cast<int>(w.darts.size());
  for (int k = 0; k < n; ++k) {
    Dart d = w.darts[k];
    if (d < 0 || d >= m.dart_count()) return false;
    Dart next = w.darts[(k + 1) % n];
    if (m.vertex_of(next) != m.vertex_of(m.alpha(d))) return false;
  }
  return true;
}

void require_simple_cycle(const CombinatorialMap& m, const Walk& w) {
  require(is_closed_walk(m, w), "NotAClosedWalk", "dart sequence does not close up");
  std::set<int> vertices, edges;
  for (Dart d : w.darts) {
    require(vertices.insert(m.vertex_of(d)).second, "NotSimple", "cycle revisits a vertex");
    require(edges.insert(m.edge_of(d)).second, "NotSimple", "cycle reuses an edge");
  }
}

CutResult cut_along_cycle(const CombinatorialMap& m, const Walk& cycle) {
  require_simple_cycle(m, cycle);
  const int n0 = m.dart_count();
  const int n = static_cast<int>(cycle.darts.size());

  // Original cycle darts stay as the left copies; two fresh darts per cycle
  // edge form the right copies. dR[k] doubles cycle.darts[k], aR[k] doubles
  // its alpha partner.
  auto dR = [&](int k) { return n0 + 2 * k; };
  auto aR = [&](int k) { return n0 + 2 * k + 1; };

  std::vector<Dart> sig(m.sigma_perm());
  std::vector<Dart> alp(m.alpha_perm());
  sig.resize(n0 + 2 * n);
  alp.resize(n0 + 2 * n);
  for (int k = 0; k < n; ++k) {
    alp[dR(k)] = aR(k);
    alp[aR(k)] = dR(k);
  }

  std::set<Dart> on_cycle(cycle.darts.begin(), cycle.darts.end());
  for (Dart d : cycle.darts) on_cycle.insert(m.alpha(d));

  // Split the rotation at each cycle vertex. Sector strictly counterclockwise
  // from the outgoing dart o to the incoming reversal i is the left side.
  for (int k = 0; k < n; ++k) {
    Dart o = cycle.darts[k];
    Dart i = m.alpha(cycle.darts[(k - 1 + n) % n]);
    std::vector<Dart> left, right;
    for (Dart t = m.sigma(o); t != i; t = m.sigma(t)) left.push_back(t);
    for (Dart t = m.sigma(i); t != o; t = m.sigma(t)) right.push_back(t);

    Dart iR = aR((k - 1 + n) % n);
    Dart oR = dR(k);

    Dart prev = o;
    for (Dart t : left) {
      sig[prev] = t;
      prev = t;
    }
    sig[prev] = i;
    sig[i] = o;

    prev = iR;
    for (Dart t : right) {
      sig[prev] = t;
      prev = t;
    }
    sig[prev] = oR;
    sig[oR] = iR;
  }

  // Components of <sigma, alpha> on the cut dart set.
  const int nt = n0 + 2 * n;
  std::vector<int> comp(nt, -1);
  int comp_count = 0;
  for (Dart s = 0; s < nt; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<Dart> stack{s};
    comp[s] = comp_count;
    while (!stack.empty()) {
      Dart d = stack.back();
      stack.pop_back();
      for (Dart t : {sig[d], alp[d]}) {
        if (comp[t] < 0) {
          comp[t] = comp_count;
          stack.push_back(t);
        }
      }
    }
    ++comp_count;
  }
  require(comp_count <= 2, "InvariantViolation", "cut produced more than two components");

  // Boundary faces: the left one is the orbit of the original cycle darts,
  // the right one the orbit of the reversed right copies.
  std::set<Dart> left_face(cycle.darts.begin(), cycle.darts.end());
  std::set<Dart> right_face;
  for (int k = 0; k < n; ++k) right_face.insert(aR(k));

  // Face bookkeeping on the big cut map via phi = sig(alp(d)).
  std::vector<int> face_of(nt, -1);
  struct BigFace {
    Dart min_dart;
    int punctures;
    bool boundary;
    bool fresh;
  };
  std::vector<BigFace> big_faces;
  for (Dart d = 0; d < nt; ++d) {
    if (face_of[d] >= 0) continue;
    int f = static_cast<int>(big_faces.size());
    std::vector<Dart> orbit;
    Dart t = d;
    do {
      face_of[t] = f;
      orbit.push_back(t);
      t = sig[alp[t]];
    } while (t != d);
    BigFace bf{orbit.front(), 0, false, false};
    if (left_face.count(orbit.front()) || right_face.count(orbit.front())) {
      bf.boundary = true;
      bf.fresh = true;
    } else {
      Dart rep = orbit.front();
      Dart orig = rep < n0 ? rep : cycle.darts[(rep - n0) / 2];
      const FaceInfo& info = m.face(m.face_of(orig));
      bf.punctures = info.punctures;
      bf.boundary = info.boundary;
    }
    big_faces.push_back(bf);
  }

  CutResult result;
  for (int c = 0; c < comp_count; ++c) {
    std::vector<Dart> darts;
    for (Dart d = 0; d < nt; ++d)
      if (comp[d] == c) darts.push_back(d);
    std::vector<int> remap(nt, -1);
    for (int idx = 0; idx < static_cast<int>(darts.size()); ++idx) remap[darts[idx]] = idx;

    std::vector<Dart> cs(darts.size()), ca(darts.size());
    for (Dart d : darts) {
      cs[remap[d]] = remap[sig[d]];
      ca[remap[d]] = remap[alp[d]];
    }

    // Face keys survive remapping because remap is order preserving.
    std::map<int, int> punctures;
    std::set<int> boundary;
    std::vector<int> fresh_keys;
    std::set<int> seen_faces;
    for (Dart d : darts) {
      int f = face_of[d];
      if (!seen_faces.insert(f).second) continue;
      int key = remap[big_faces[f].min_dart];
      if (big_faces[f].boundary) boundary.insert(key);
      if (big_faces[f].fresh) fresh_keys.push_back(key);
      if (big_faces[f].punctures > 0) punctures[key] = big_faces[f].punctures;
    }
    std::sort(fresh_keys.begin(), fresh_keys.end());

    CutComponent out;
    out.map = CombinatorialMap::build(std::move(cs), std::move(ca), punctures, boundary);
    out.genus = out.map.genus();
    out.punctures = out.map.puncture_total();
    out.boundary_faces = static_cast<int>(out.map.boundary_keys().size());
    out.new_boundary_keys = std::move(fresh_keys);
    out.from_parent.assign(remap.begin(), remap.begin() + n0);
    result.components.push_back(std::move(out));
  }
  return result;
}

bool is_witness(const CombinatorialMap& m, const CutComponent& sub) {
  return sub.genus == m.genus();
}

SubsurfaceShape face_union_shape(const CombinatorialMap& m, const std::set<int>& faces) {
  SubsurfaceShape shape;
  if (faces.empty()) return shape;
  for (int f : faces)
    require(f >= 0 && f < m.face_count(), "UnknownFaceId", "face index out of range");

  auto inside = [&](Dart d) { return faces.count(m.face_of(d)) > 0; };

  std::set<int> vertices, edges;
  for (Dart d = 0; d < m.dart_count(); ++d) {
    if (inside(d)) {
      vertices.insert(m.vertex_of(d));
      vertices.insert(m.vertex_of(m.alpha(d)));
      edges.insert(m.edge_of(d));
    }
  }
  shape.chi = static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
              static_cast<int>(faces.size());

  // Edge-adjacency connectivity over the chosen faces.
  {
    std::map<int, int> comp;
    std::vector<int> stack{*faces.begin()};
    comp[*faces.begin()] = 0;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (Dart d : m.face(f).darts) {
        int g = m.face_of(m.alpha(d));
        if (faces.count(g) && !comp.count(g)) {
          comp[g] = 0;
          stack.push_back(g);
        }
      }
    }
    shape.connected = comp.size() == faces.size();
  }

  // Rim circuits: follow phi, skipping interior edges.
  std::set<Dart> boundary_darts;
  for (Dart d = 0; d < m.dart_count(); ++d)
    if (inside(d) && !inside(m.alpha(d))) boundary_darts.insert(d);
  std::set<Dart> seen;
  for (Dart d : boundary_darts) {
    if (seen.count(d)) continue;
    Dart t = d;
    do {
      seen.insert(t);
      t = m.phi(t);
      while (inside(m.alpha(t))) t = m.phi(m.alpha(t));
    } while (t != d);
    ++shape.boundary_circuits;
  }

  for (int f : faces) shape.punctures += m.face(f).punctures;
  if (shape.connected) shape.genus = (2 - shape.chi - shape.boundary_circuits) / 2;
  return shape;
}

CombinatorialMap subdivide_edges(const CombinatorialMap& m, int pieces) {
  require(pieces >= 1, "InvariantViolation", "pieces must be >= 1");
  if (pieces == 1) return CombinatorialMap::build(m.sigma_perm(), m.alpha_perm(),
                                                  m.punctures_by_key(), m.boundary_keys());
  const int n0 = m.dart_count();
  const int per_edge = 2 * (pieces - 1);
  std::vector<Dart> sig(n0 + m.edge_count() * per_edge);
  std::vector<Dart> alp(sig.size());

  for (Dart d = 0; d < n0; ++d) sig[d] = m.sigma(d);

  for (int e = 0; e < m.edge_count(); ++e) {
    Dart a = m.edge_dart(e);
    Dart b = m.alpha(a);
    int base = n0 + e * per_edge;
    // Chain vertices w_1..w_{pieces-1}; A_j leaves w_j forward, B_j backward.
    auto A = [&](int j) { return base + 2 * (j - 1); };
    auto B = [&](int j) { return base + 2 * (j - 1) + 1; };
    for (int j = 1; j < pieces; ++j) {
      sig[A(j)] = B(j);
      sig[B(j)] = A(j);
    }
    alp[a] = B(1);
    alp[B(1)] = a;
    for (int j = 1; j + 1 < pieces; ++j) {
      alp[A(j)] = B(j + 1);
      alp[B(j + 1)] = A(j);
    }
    alp[A(pieces - 1)] = b;
    alp[b] = A(pieces - 1);
  }

  return CombinatorialMap::build(std::move(sig), std::move(alp), m.punctures_by_key(),
                                 m.boundary_keys());
}

CombinatorialMap add_chord(const CombinatorialMap& m, Dart u, Dart v) {
  require(u >= 0 && u < m.dart_count() && v >= 0 && v < m.dart_count() && u != v,
          "InvariantViolation", "chord endpoints must be distinct darts");
  require(m.face_of(u) == m.face_of(v), "InvariantViolation",
          "chord corners lie on different faces");
  require(m.face(m.face_of(u)).punctures == 0, "InvariantViolation",
          "cannot split a face that already carries punctures");
  const int n0 = m.dart_count();
  std::vector<Dart> sig(m.sigma_perm());
  std::vector<Dart> alp(m.alpha_perm());
  sig.resize(n0 + 2);
  alp.resize(n0 + 2);
  alp[n0] = n0 + 1;
  alp[n0 + 1] = n0;
  sig[m.sigma_inv(u)] = n0;
  sig[n0] = u;
  sig[m.sigma_inv(v)] = n0 + 1;
  sig[n0 + 1] = v;
  // The split face was puncture-free, so keys of other faces carry over.
  return CombinatorialMap::build(std::move(sig), std::move(alp), m.punctures_by_key(),
                                 m.boundary_keys());
}

GlueResult glue_faces(const CombinatorialMap& m1, int key1, const CombinatorialMap& m2,
                      int key2) {
  int f1 = m1.face_by_key(key1);
  int f2 = m2.face_by_key(key2);
  const auto& D1 = m1.face(f1).darts;
  const auto& D2 = m2.face(f2).darts;
  const int r = static_cast<int>(D1.size());
  require(static_cast<int>(D2.size()) == r, "InvariantViolation",
          "glued faces must have equal degree");
  require(m1.face(f1).punctures == 0 && m2.face(f2).punctures == 0, "InvariantViolation",
          "glued faces must be puncture-free");
  auto check_face = [](const CombinatorialMap& m, const std::vector<Dart>& D) {
    std::set<int> vs, es;
    for (Dart d : D) {
      require(vs.insert(m.vertex_of(d)).second, "InvariantViolation",
              "glued face revisits a vertex");
      require(es.insert(m.edge_of(d)).second, "InvariantViolation",
              "glued face revisits an edge");
    }
  };
  check_face(m1, D1);
  check_face(m2, D2);

  const int n1 = m1.dart_count(), n2 = m2.dart_count();
  std::set<Dart> del1(D1.begin(), D1.end()), del2(D2.begin(), D2.end());
  GlueResult out;
  out.from1.assign(n1, -1);
  out.from2.assign(n2, -1);
  int next = 0;
  for (Dart d = 0; d < n1; ++d)
    if (!del1.count(d)) out.from1[d] = next++;
  for (Dart d = 0; d < n2; ++d)
    if (!del2.count(d)) out.from2[d] = next++;

  std::vector<Dart> sig(next, -1), alp(next, -1);
  for (Dart d = 0; d < n1; ++d) {
    if (del1.count(d)) continue;
    if (!del1.count(m1.sigma(d))) sig[out.from1[d]] = out.from1[m1.sigma(d)];
    if (!del1.count(m1.alpha(d))) alp[out.from1[d]] = out.from1[m1.alpha(d)];
  }
  for (Dart d = 0; d < n2; ++d) {
    if (del2.count(d)) continue;
    if (!del2.count(m2.sigma(d))) sig[out.from2[d]] = out.from2[m2.sigma(d)];
    if (!del2.count(m2.alpha(d))) alp[out.from2[d]] = out.from2[m2.alpha(d)];
  }

  // Identify edge(D1[k]) with edge(D2[-k]) direction-reversed, so vertex
  // origin(D1[k]) merges with origin(D2[1-k]). At each merged vertex the gap
  // left by the deleted darts closes by splicing the two rotation arcs.
  auto g_at = [&](int idx) { return D2[((idx % r) + r) % r]; };
  for (int k = 0; k < r; ++k) {
    Dart dk = D1[k];
    Dart gk = g_at(-k);       // edge partner
    Dart gv = g_at(1 - k);    // deleted dart at the merged vertex
    alp[out.from1[m1.alpha(dk)]] = out.from2[m2.alpha(gk)];
    alp[out.from2[m2.alpha(gk)]] = out.from1[m1.alpha(dk)];
    sig[out.from1[m1.sigma_inv(dk)]] = out.from2[m2.sigma(gv)];
    sig[out.from2[m2.sigma_inv(gv)]] = out.from1[m1.sigma(dk)];
  }

  std::map<int, int> punctures;
  std::set<int> boundary;
  for (const auto& [key, cnt] : m1.punctures_by_key()) punctures[out.from1[key]] = cnt;
  for (const auto& [key, cnt] : m2.punctures_by_key()) punctures[out.from2[key]] = cnt;
  for (int key : m1.boundary_keys())
    if (key != key1) boundary.insert(out.from1[key]);
  for (int key : m2.boundary_keys())
    if (key != key2) boundary.insert(out.from2[key]);

  out.map = CombinatorialMap::build(std::move(sig), std::move(alp), punctures, boundary);
  for (int k = r - 1; k >= 0; --k) out.seam.darts.push_back(out.from1[m1.alpha(D1[k])]);
  require_simple_cycle(out.map, out.seam);
  return out;
}

CombinatorialMap one_vertex_surface(int genus, const std::map<int, int>& punctures) {
  require(genus >= 1, "InvariantViolation", "one_vertex_surface needs genus >= 1");
  const int n = 4 * genus;
  std::vector<Dart> order;
  for (int h = 0; h < genus; ++h)
    for (Dart d : {4 * h, 4 * h + 2, 4 * h + 1, 4 * h + 3}) order.push_back(d);
  std::vector<Dart> sig(n), alp(n);
  for (int k = 0; k < n; ++k) sig[order[k]] = order[(k + 1) % n];
  for (int h = 0; h < genus; ++h) {
    alp[4 * h] = 4 * h + 1;
    alp[4 * h + 1] = 4 * h;
    alp[4 * h + 2] = 4 * h + 3;
    alp[4 * h + 3] = 4 * h + 2;
  }
  return CombinatorialMap::build(std::move(sig), std::move(alp), punctures);
}

CombinatorialMap torus_grid(int n, int m, const std::map<int, int>& punctures) {
  require(n >= 1 && m >= 1, "InvariantViolation", "grid dimensions must be positive");
  auto vid = [&](int i, int j) { return ((i % n) + n) % n + n * (((j % m) + m) % m); };
  auto dart = [&](int i, int j, int dir) { return 4 * vid(i, j) + dir; };  // E N W S
  const int total = 4 * n * m;
  std::vector<Dart> sig(total), alp(total);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      for (int dir = 0; dir < 4; ++dir) sig[dart(i, j, dir)] = dart(i, j, (dir + 1) % 4);
      alp[dart(i, j, 0)] = dart(i + 1, j, 2);
      alp[dart(i, j, 2)] = dart(i - 1, j, 0);
      alp[dart(i, j, 1)] = dart(i, j + 1, 3);
      alp[dart(i, j, 3)] = dart(i, j - 1, 1);
    }
  return CombinatorialMap::build(std::move(sig), std::move(alp), punctures);
}

CombinatorialMap with_punctures(const CombinatorialMap& m, const std::map<int, int>& by_key) {
  return CombinatorialMap::build(m.sigma_perm(), m.alpha_perm(), by_key, m.boundary_keys());
}

}  // namespace nscorn
