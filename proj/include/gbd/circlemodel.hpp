#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/laurent.hpp"
#include "gbd/leveldata.hpp"
#include "gbd/prng.hpp"
#include "gbd/skeleton.hpp"

namespace gbd {

/// Orbit tables for the square successor map, for O(1) iterated steps.
class SquareOrbits {
 public:
  explicit SquareOrbits(const GbdSkeleton& s) : orbit_id_(s.edges.size(), -1),
                                                orbit_pos_(s.edges.size(), 0) {
    for (size_t e = 0; e < s.edges.size(); ++e) {
      if (orbit_id_[e] >= 0) continue;
      int id = static_cast<int>(orbits_.size());
      orbits_.emplace_back();
      int cur = static_cast<int>(e);
      do {
        orbit_id_[cur] = id;
        orbit_pos_[cur] = static_cast<int>(orbits_[id].size());
        orbits_[id].push_back(cur);
        cur = s.fsucc[cur];
      } while (cur != static_cast<int>(e));
    }
  }

  int step(int edge, long long k) const {
    const auto& orb = orbits_[orbit_id_[edge]];
    long long n = static_cast<long long>(orb.size());
    long long p = (orbit_pos_[edge] + k) % n;
    if (p < 0) p += n;
    return orb[static_cast<size_t>(p)];
  }

  long long order(int edge) const {
    return static_cast<long long>(orbits_[orbit_id_[edge]].size());
  }

 private:
  std::vector<int> orbit_id_, orbit_pos_;
  std::vector<std::vector<int>> orbits_;
};

/// A general path of the 2-graph in canonical blue-then-red form: the blue
/// component anchored at the range, and the length of the red walk at the
/// source level.
struct TwoGraphPath {
  BluePath blue;
  long long red_len = 0;
};

inline Vertex range_of(const TwoGraphPath& p) { return p.blue.anchor; }

inline Vertex source_of(const GbdSkeleton& s, const TwoGraphPath& p) {
  return s.red_step(path_source(s, p.blue), -p.red_len);
}

/// Generator words of the relation family.
struct CkGenerator {
  enum class Kind { VertexProj, Blue, Red, Word };
  Kind kind = Kind::VertexProj;
  Vertex vertex;          // VertexProj; Red: walk source
  BluePath alpha, beta;   // Blue: alpha; Word: s_alpha s_mu^(*) s_beta*
  long long red_len = 0;  // Red/Word: walk length
  bool starred = false;   // Word: the red factor appears as an adjoint

  static CkGenerator vertex_proj(Vertex v) {
    CkGenerator g;
    g.kind = Kind::VertexProj;
    g.vertex = v;
    return g;
  }
  static CkGenerator blue(BluePath a) {
    CkGenerator g;
    g.kind = Kind::Blue;
    g.alpha = std::move(a);
    return g;
  }
  static CkGenerator red(Vertex from, long long len) {
    CkGenerator g;
    g.kind = Kind::Red;
    g.vertex = from;
    g.red_len = len;
    return g;
  }
  /// The power lambda(v)^k of the full red cycle at v.
  static CkGenerator red_cycle_power(const GbdSkeleton& s, Vertex v, long long k) {
    return red(v, k * s.cycle_length(v.level, v.cycle));
  }
  static CkGenerator word(BluePath a, long long len, BluePath b, bool star = false) {
    CkGenerator g;
    g.kind = Kind::Word;
    g.alpha = std::move(a);
    g.beta = std::move(b);
    g.red_len = len;
    g.starred = star;
    return g;
  }
};

/// Block matrices over Laurent polynomials, one block per top-level cycle of
/// the model that produced them.
struct CircleElement {
  std::vector<LaurentMat> blocks;

  CircleElement& operator+=(const CircleElement& o) {
    internal_check(blocks.size() == o.blocks.size(), "summand count mismatch");
    for (size_t j = 0; j < blocks.size(); ++j) blocks[j] += o.blocks[j];
    return *this;
  }
  friend CircleElement operator+(CircleElement a, const CircleElement& b) {
    a += b;
    return a;
  }
  friend CircleElement operator-(const CircleElement& a, const CircleElement& b) {
    internal_check(a.blocks.size() == b.blocks.size(), "summand count mismatch");
    CircleElement out;
    for (size_t j = 0; j < a.blocks.size(); ++j) out.blocks.push_back(a.blocks[j] - b.blocks[j]);
    return out;
  }
  friend CircleElement operator*(const CircleElement& a, const CircleElement& b) {
    internal_check(a.blocks.size() == b.blocks.size(), "summand count mismatch");
    CircleElement out;
    for (size_t j = 0; j < a.blocks.size(); ++j) out.blocks.push_back(a.blocks[j] * b.blocks[j]);
    return out;
  }
  CircleElement adjoint() const {
    CircleElement out;
    for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
    return out;
  }
  CircleElement scaled(const Rat& c) const {
    CircleElement out;
    for (const auto& b : blocks) out.blocks.push_back(b.scaled(c));
    return out;
  }
  friend bool operator==(const CircleElement& a, const CircleElement& b) {
    return a.blocks == b.blocks;
  }
  friend bool operator!=(const CircleElement& a, const CircleElement& b) { return !(a == b); }
  bool is_zero() const {
    for (const auto& b : blocks)
      if (!b.is_zero()) return false;
    return true;
  }
};

/// Matrix model of the truncated algebra at a chosen depth. Index sets are
/// blue paths into the top-level cycles: all anchor levels for the full
/// picture, level-0 anchors only for the corner. The marked red edge of each
/// top cycle is the one leaving position 0.
class CircleModel {
 public:
  CircleModel(const GbdSkeleton& s, int depth, bool corner_only)
      : skel_(&s), depth_(depth), corner_(corner_only), orbits_(s) {
    require(depth >= 0 && depth <= s.depth(), "model depth beyond skeleton");
    int blocks = s.cycles_at(depth);
    paths_.resize(blocks);
    for (int j = 0; j < blocks; ++j) {
      int hi = corner_only ? 0 : depth;
      for (int m = 0; m <= hi; ++m) {
        for (BluePath& p : enumerate_blue_paths(s, m, depth, j)) paths_[j].push_back(std::move(p));
      }
      require(paths_[j].size() <= 4096,
              "model index too large (" + std::to_string(paths_[j].size()) +
                  " paths in one block); reduce the depth");
      for (size_t ix = 0; ix < paths_[j].size(); ++ix) {
        const BluePath& p = paths_[j][ix];
        index_[key(p)] = {j, static_cast<int>(ix)};
        anchored_[p.anchor].push_back({j, static_cast<int>(ix)});
      }
    }
  }

  const GbdSkeleton& skeleton() const { return *skel_; }
  int depth() const { return depth_; }
  bool corner_only() const { return corner_; }
  int block_count() const { return static_cast<int>(paths_.size()); }
  int block_dim(int j) const { return static_cast<int>(paths_[j].size()); }
  const std::vector<BluePath>& block_paths(int j) const { return paths_[j]; }

  CircleElement zero() const {
    CircleElement e;
    for (const auto& p : paths_) e.blocks.emplace_back(static_cast<int>(p.size()));
    return e;
  }

  CircleElement identity() const {
    CircleElement e;
    for (const auto& p : paths_)
      e.blocks.push_back(LaurentMat::identity(static_cast<int>(p.size())));
    return e;
  }

  std::pair<int, int> locate(const BluePath& p) const {
    auto it = index_.find(key(p));
    return it == index_.end() ? std::pair<int, int>{-1, -1} : it->second;
  }

  /// Occurrence count of the marked edge in the forward walk of the given
  /// length from a top-level vertex.
  long long crossings(const Vertex& v, long long len) const {
    long long w = skel_->cycle_length(v.level, v.cycle);
    long long q = v.pos % w;
    long long d = (w - q) % w;  // steps until the marked edge leaves position 0
    if (len <= d) return 0;
    return 1 + (len - d - 1) / w;
  }

  BluePath square_step_path(const BluePath& p, long long k) const {
    BluePath out;
    long long len = skel_->cycle_length(p.anchor.level, p.anchor.cycle);
    out.anchor = skel_->red_step(p.anchor, k % len);
    out.edges.reserve(p.edges.size());
    for (int e : p.edges) out.edges.push_back(orbits_.step(e, k));
    return out;
  }

  /// pi(s_alpha s_mu s_beta*) where mu is the forward red walk of the given
  /// length from the source of beta. Starred form takes the adjoint route.
  /// Terms whose paths fall outside the index are dropped; on a valid diagram
  /// that never happens, on a corrupted one the relation checks pick it up.
  CircleElement represent_word(const BluePath& alpha, long long red_len, const BluePath& beta,
                               bool starred = false) const {
    if (starred) return represent_word(beta, red_len, alpha, false).adjoint();
    require(red_len >= 0, "red walk length must be nonnegative");
    Vertex sa = path_source(*skel_, alpha);
    Vertex sb = path_source(*skel_, beta);
    require(sa.level == sb.level && sa.cycle == sb.cycle,
            "word sources must sit on one cycle");
    require(skel_->red_step(sb, red_len) == sa, "red walk does not join the word's legs");
    CircleElement out = zero();
    auto it = anchored_.find(sb);
    if (it == anchored_.end()) return out;
    for (const auto& [j, ix] : it->second) {
      const BluePath& gamma = paths_[j][ix];
      BluePath moved = square_step_path(gamma, red_len);
      BluePath row = concat(alpha, moved);
      BluePath col = concat(beta, gamma);
      auto [rj, ri] = locate(row);
      auto [cj, ci] = locate(col);
      if (rj != j || cj != j || ri < 0 || ci < 0) continue;
      Vertex top = path_source(*skel_, gamma);
      out.blocks[j](ri, ci) += LaurentPoly::monomial(Rat(1), crossings(top, red_len));
    }
    return out;
  }

  CircleElement represent_path(const TwoGraphPath& p) const {
    BluePath trivial{source_of(*skel_, p), {}};
    return represent_word(p.blue, p.red_len, trivial);
  }

  CircleElement represent(const CkGenerator& g) const {
    switch (g.kind) {
      case CkGenerator::Kind::VertexProj: {
        CircleElement out = zero();
        auto it = anchored_.find(g.vertex);
        if (it != anchored_.end())
          for (const auto& [j, ix] : it->second)
            out.blocks[j](ix, ix) += LaurentPoly::one();
        return out;
      }
      case CkGenerator::Kind::Blue:
        return represent_word(g.alpha, 0, BluePath{path_source(*skel_, g.alpha), {}});
      case CkGenerator::Kind::Red: {
        BluePath from{g.vertex, {}};
        BluePath to{skel_->red_step(g.vertex, g.red_len), {}};
        return represent_word(to, g.red_len, from);
      }
      case CkGenerator::Kind::Word:
        return represent_word(g.alpha, g.red_len, g.beta, g.starred);
    }
    throw std::logic_error("unreachable");
  }

  /// Unitary sum over all index paths of the full-cycle words.
  CircleElement cycle_unitary() const {
    CircleElement out = zero();
    for (int j = 0; j < block_count(); ++j)
      for (const BluePath& p : paths_[j]) {
        Vertex sp = path_source(*skel_, p);
        out += represent_word(p, skel_->cycle_length(sp.level, sp.cycle), p);
      }
    return out;
  }

  /// z on one diagonal entry of one block, 1 on every other index path: the
  /// image of the word with one full red cycle at that path's source. (The
  /// full cycle crosses the marked edge exactly once.)
  CircleElement generator_unitary(int block, int which = 0) const {
    CircleElement out = identity();
    out.blocks.at(block)(which, which) = LaurentPoly::monomial(Rat(1), 1);
    return out;
  }

 private:
  static std::pair<Vertex, std::vector<int>> key(const BluePath& p) {
    return {p.anchor, p.edges};
  }

  static BluePath concat(const BluePath& a, const BluePath& b) {
    BluePath out = a;
    out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
    return out;
  }

  const GbdSkeleton* skel_;
  int depth_;
  bool corner_;
  SquareOrbits orbits_;
  std::vector<std::vector<BluePath>> paths_;
  std::map<std::pair<Vertex, std::vector<int>>, std::pair<int, int>> index_;
  std::map<Vertex, std::vector<std::pair<int, int>>> anchored_;
};

struct CkFailure {
  std::string relation;
  std::string witness;
};

struct CkReport {
  std::vector<CkFailure> failures;
  int checks = 0;
  bool ok() const { return failures.empty(); }
  std::string summary() const {
    if (ok()) return "all relations hold (" + std::to_string(checks) + " checks)";
    std::ostringstream os;
    for (const auto& f : failures) os << f.relation << ": " << f.witness << "\n";
    return os.str();
  }
};

namespace detail {

inline std::vector<Vertex> all_vertices(const GbdSkeleton& s, int depth) {
  std::vector<Vertex> out;
  for (int n = 0; n <= depth; ++n)
    for (int j = 0; j < s.cycles_at(n); ++j)
      for (long long p = 0; p < s.cycle_length(n, j); ++p) out.push_back({n, j, p});
  return out;
}

/// Random path with a prescribed source vertex: walk upward through in-edges,
/// then attach a red walk.
inline TwoGraphPath random_path_to(Rng& rng, const GbdSkeleton& s, Vertex source) {
  long long len = s.cycle_length(source.level, source.cycle);
  long long red = rng.uniform(0, 2 * len);
  Vertex at = s.red_step(source, red);
  int up = static_cast<int>(rng.uniform(0, at.level));
  std::vector<int> edges;
  for (int t = 0; t < up; ++t) {
    const auto& in = s.edges_with_source(at);
    if (in.empty()) break;
    int e = in[static_cast<size_t>(rng.uniform(0, static_cast<long long>(in.size()) - 1))];
    edges.insert(edges.begin(), e);
    at = s.edges[e].range();
  }
  TwoGraphPath p;
  p.blue.anchor = at;
  p.blue.edges = std::move(edges);
  p.red_len = red;
  return p;
}

inline TwoGraphPath compose(const GbdSkeleton& s, const SquareOrbits& orb, const TwoGraphPath& a,
                            const TwoGraphPath& b) {
  internal_check(source_of(s, a) == range_of(b), "paths not composable");
  TwoGraphPath out;
  out.blue = a.blue;
  for (int e : b.blue.edges) out.blue.edges.push_back(orb.step(e, a.red_len));
  out.red_len = a.red_len + b.red_len;
  return out;
}

}  // namespace detail

/// Exact verification of the relation family in the matrix model: mutual
/// orthogonality of the vertex projections, multiplicativity on sampled
/// composable pairs, the isometry relation, both edge-sum decompositions, and
/// unitarity of the cycle sum.
inline CkReport verify_ck(const CircleModel& model, Rng& rng, int pair_samples = 60) {
  require(!model.corner_only(), "relation checks need the full path index");
  CkReport rep;
  const GbdSkeleton& s = model.skeleton();
  SquareOrbits orbits(s);
  int N = model.depth();
  std::vector<Vertex> verts = detail::all_vertices(s, N);
  // CK1: vertex projections are orthogonal self-adjoint idempotents summing
  // to the identity
  std::vector<CircleElement> projs;
  for (const Vertex& v : verts) projs.push_back(model.represent(CkGenerator::vertex_proj(v)));
  CircleElement total = model.zero();
  for (size_t a = 0; a < projs.size(); ++a) {
    ++rep.checks;
    if (projs[a] != projs[a].adjoint() || projs[a] * projs[a] != projs[a])
      rep.failures.push_back({"CK1", "projection at " + verts[a].to_string() + " not a projection"});
    total += projs[a];
    for (size_t b = a + 1; b < projs.size(); ++b) {
      ++rep.checks;
      if (!(projs[a] * projs[b]).is_zero())
        rep.failures.push_back(
            {"CK1", verts[a].to_string() + " and " + verts[b].to_string() + " not orthogonal"});
    }
  }
  ++rep.checks;
  if (total != model.identity())
    rep.failures.push_back({"CK1", "vertex projections do not sum to the identity"});

  // CK2/CK3 on sampled composable pairs
  for (int t = 0; t < pair_samples; ++t) {
    const Vertex& anchor = verts[static_cast<size_t>(
        rng.uniform(0, static_cast<long long>(verts.size()) - 1))];
    TwoGraphPath rho2 = detail::random_path_to(rng, s, anchor);
    TwoGraphPath rho1 = detail::random_path_to(rng, s, range_of(rho2));
    TwoGraphPath prod = detail::compose(s, orbits, rho1, rho2);
    CircleElement m1 = model.represent_path(rho1);
    CircleElement m2 = model.represent_path(rho2);
    CircleElement mp = model.represent_path(prod);
    ++rep.checks;
    if (m1 * m2 != mp)
      rep.failures.push_back({"CK2", "product of sampled composable pair " + std::to_string(t) +
                                         " does not match the concatenation"});
    ++rep.checks;
    if (m2.adjoint() * m2 != model.represent(CkGenerator::vertex_proj(source_of(s, rho2))))
      rep.failures.push_back({"CK3", "isometry relation fails for sampled path " +
                                         std::to_string(t) + " with source " +
                                         source_of(s, rho2).to_string()});
  }

  // CK4, red form: the unique red edge into each vertex
  for (const Vertex& v : verts) {
    Vertex pred = s.red_step(v, -1);
    CircleElement f = model.represent(CkGenerator::red(pred, 1));
    ++rep.checks;
    if (f * f.adjoint() != model.represent(CkGenerator::vertex_proj(v)))
      rep.failures.push_back({"CK4-red", "red edge into " + v.to_string()});
  }
  // CK4, blue form: vertices above the top level of the model
  for (const Vertex& v : verts) {
    if (v.level >= N) continue;
    CircleElement sum = model.zero();
    for (int e : s.edges_with_range(v)) {
      BluePath pe{v, {e}};
      CircleElement se = model.represent(CkGenerator::blue(pe));
      sum += se * se.adjoint();
    }
    ++rep.checks;
    if (sum != model.represent(CkGenerator::vertex_proj(v)))
      rep.failures.push_back({"CK4-blue", "edge sum at " + v.to_string()});
  }

  // unitarity of the cycle sum
  CircleElement u = model.cycle_unitary();
  ++rep.checks;
  if (u * u.adjoint() != model.identity() || u.adjoint() * u != model.identity())
    rep.failures.push_back({"unitary", "cycle sum is not unitary"});
  return rep;
}

/// The inclusion of the depth-N corner into the depth-(N+1) corner, realised
/// on the matrix models: a word s_alpha s_mu s_beta* expands over the blue
/// edges hanging off the source of beta, the blue legs advance through the
/// squares, and the red walk drops to the deeper level.
class CornerInclusion {
 public:
  CornerInclusion(const GbdSkeleton& s, int depth)
      : skel_(&s),
        depth_(depth),
        domain_(s, depth, true),
        codomain_(s, depth + 1, true),
        orbits_(s) {
    require(depth + 1 <= s.depth(), "inclusion needs the next level");
  }

  const CircleModel& domain() const { return domain_; }
  const CircleModel& codomain() const { return codomain_; }

  CircleElement apply(const CircleElement& x) const {
    internal_check(static_cast<int>(x.blocks.size()) == domain_.block_count(),
                   "element does not live in the domain model");
    CircleElement out = codomain_.zero();
    for (int j = 0; j < domain_.block_count(); ++j) {
      internal_check(x.blocks[j].dim() == domain_.block_dim(j), "block size mismatch");
      for (int r = 0; r < x.blocks[j].dim(); ++r)
        for (int cix = 0; cix < x.blocks[j].dim(); ++cix)
          for (const auto& [k, coeff] : x.blocks[j](r, cix).terms())
            out += include_monomial(j, r, cix, k).scaled(coeff);
    }
    return out;
  }

 private:
  /// Image of z^k Theta(alpha, beta) in the deeper model.
  CircleElement include_monomial(int block, int row, int col, long long k) const {
    const BluePath& alpha = domain_.block_paths(block)[row];
    const BluePath& beta = domain_.block_paths(block)[col];
    Vertex sa = path_source(*skel_, alpha);
    Vertex sb = path_source(*skel_, beta);
    long long w = skel_->cycle_length(sa.level, sa.cycle);
    long long d0 = (sa.pos - sb.pos) % w;
    if (d0 < 0) d0 += w;
    long long k0 = domain_.crossings(sb, d0);
    if (k < k0) {
      // realise as the adjoint of the reversed word
      return include_word(block, col, row, -k).adjoint();
    }
    return include_word(block, row, col, k);
  }

  /// Direct form: the word with k marked-edge crossings from beta's source to
  /// alpha's source.
  CircleElement include_word(int block, int row, int col, long long k) const {
    const BluePath& alpha = domain_.block_paths(block)[row];
    const BluePath& beta = domain_.block_paths(block)[col];
    Vertex sa = path_source(*skel_, alpha);
    Vertex sb = path_source(*skel_, beta);
    long long w = skel_->cycle_length(sa.level, sa.cycle);
    long long d0 = (sa.pos - sb.pos) % w;
    if (d0 < 0) d0 += w;
    long long k0 = domain_.crossings(sb, d0);
    internal_check(k >= k0, "no direct word with the requested crossing count");
    long long len = d0 + (k - k0) * w;
    CircleElement out = codomain_.zero();
    for (int e : skel_->edges_with_range(sb)) {
      int moved = orbits_.step(e, len);
      BluePath rowp = alpha;
      rowp.edges.push_back(moved);
      BluePath colp = beta;
      colp.edges.push_back(e);
      auto [rj, ri] = codomain_.locate(rowp);
      auto [cj, ci] = codomain_.locate(colp);
      internal_check(rj == cj && ri >= 0 && ci >= 0, "inclusion image fell outside the index");
      Vertex down = skel_->edges[e].source();
      out.blocks[rj](ri, ci) += LaurentPoly::monomial(Rat(1), codomain_.crossings(down, len));
    }
    return out;
  }

  const GbdSkeleton* skel_;
  int depth_;
  CircleModel domain_;
  CircleModel codomain_;
  SquareOrbits orbits_;
};

/// Debug dump: the path index of each block and the represented vertex and
/// edge generators as exponent tables.
inline std::string model_dump(const CircleModel& model) {
  std::ostringstream os;
  const GbdSkeleton& s = model.skeleton();
  auto path_str = [&](const BluePath& p) {
    std::ostringstream ps;
    ps << p.anchor.to_string();
    for (int e : p.edges) ps << "." << e;
    return ps.str();
  };
  auto element_str = [&](const CircleElement& x) {
    std::ostringstream es;
    for (size_t j = 0; j < x.blocks.size(); ++j) {
      es << "  block " << j << ":\n";
      for (int r = 0; r < x.blocks[j].dim(); ++r)
        for (int c = 0; c < x.blocks[j].dim(); ++c)
          if (!x.blocks[j](r, c).is_zero())
            es << "    (" << r << "," << c << ") = " << x.blocks[j](r, c).to_string() << "\n";
    }
    return es.str();
  };
  os << "model depth " << model.depth() << (model.corner_only() ? " (corner index)\n"
                                                                : " (full index)\n");
  for (int j = 0; j < model.block_count(); ++j) {
    os << "block " << j << " paths:\n";
    const auto& paths = model.block_paths(j);
    for (size_t ix = 0; ix < paths.size(); ++ix)
      os << "  " << ix << ": " << path_str(paths[ix]) << "\n";
  }
  for (const Vertex& v : detail::all_vertices(s, model.depth())) {
    os << "generator vertex " << v.to_string() << ":\n";
    os << element_str(model.represent(CkGenerator::vertex_proj(v)));
    os << "generator red edge from " << v.to_string() << ":\n";
    os << element_str(model.represent(CkGenerator::red(v, 1)));
  }
  for (size_t e = 0; e < s.edges.size(); ++e) {
    if (s.edges[e].level + 1 > model.depth()) continue;
    os << "generator blue edge " << e << ":\n";
    BluePath pe{s.edges[e].range(), {static_cast<int>(e)}};
    os << element_str(model.represent(CkGenerator::blue(pe)));
  }
  return os.str();
}

/// Winding number of a unitary's block: its determinant must be a single
/// monomial with coefficient +-1; anything else is an error.
inline long long k1_winding(const CircleElement& u, int block) {
  LaurentPoly d = u.blocks.at(block).det();
  Rat c;
  long long k = 0;
  require(d.is_monomial(c, k) && (c == 1 || c == -1),
          "determinant is not a unit monomial; the element is not unitary in the block");
  return k;
}

/// Trace of the constant coefficient of a block (the rank of a constant
/// projection supported there).
inline Rat constant_rank(const CircleElement& x, int block) {
  return x.blocks.at(block).trace().coeff(0);
}

}  // namespace gbd
