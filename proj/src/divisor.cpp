#include "tropbetti/divisor.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <iterator>
#include <set>
#include <thread>

namespace tropbetti {

namespace {

struct Constraint {
  gf2::Vector row;
  bool rhs;
};

std::vector<IntVec> face_coords(const LatticePolytope& p, const Face& f) {
  std::vector<IntVec> out;
  for (auto v : f.vertices) out.push_back(p.vertices()[v]);
  return out;
}

bool contains_all(const IndexSet& big, const IndexSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

// ---------------------------------------------------------------- DivisorF2

DivisorF2 DivisorF2::from(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return DivisorF2{std::move(s)};
}

bool DivisorF2::contains(std::size_t v) const { return std::binary_search(support.begin(), support.end(), v); }

DivisorF2 operator+(const DivisorF2& a, const DivisorF2& b) {
  DivisorF2 out;
  std::set_symmetric_difference(a.support.begin(), a.support.end(), b.support.begin(), b.support.end(),
                                std::back_inserter(out.support));
  return out;
}

std::string to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::Case1: return "case1";
    case CaseStatus::Case2: return "case2";
    case CaseStatus::Fail: return "fail";
  }
  return "fail";
}

std::string to_string(Restriction r) {
  switch (r) {
    case Restriction::Zero: return "zero";
    case Restriction::NonzeroCertified: return "nonzero-certified";
    case Restriction::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(ConfigKind k) {
  switch (k) {
    case ConfigKind::SimpleVertex: return "simple-vertex";
    case ConfigKind::PointedVertex: return "pointed-vertex";
    case ConfigKind::NonAdmissibleVertex: return "non-admissible-vertex";
    case ConfigKind::SimpleEdge: return "simple-edge";
    case ConfigKind::EmptyEdge: return "empty-edge";
    case ConfigKind::NonAdmissibleEdge: return "non-admissible-edge";
    case ConfigKind::Other: return "other";
  }
  return "other";
}

std::size_t AdmissibilityReport::failures() const {
  return static_cast<std::size_t>(std::count_if(verdicts.begin(), verdicts.end(),
                                                 [](const LocalVerdict& v) { return v.status == CaseStatus::Fail; }));
}

// ---------------------------------------------------------------- DivisorLab

DivisorLab::DivisorLab(const LatticePolytope& delta, const CentralTriangulation& t, bool strict_adjacency)
    : delta_(&delta), t_(&t), strict_(strict_adjacency), adj_(t) {
  if (t.dim() != delta.dim()) throw ContractViolation("DivisorLab: triangulation and polytope differ in rank");
  const int facet_dim = static_cast<int>(delta.dim()) - 1;
  is_skeleton_.assign(t.points.size(), false);
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    parity_.push_back(parity(t.points[i]));
    std::vector<std::size_t> tight;
    for (std::size_t f = 0; f < delta.facets().size(); ++f)
      if (dot(delta.facets()[f].normal, t.points[i]) == 1) tight.push_back(f);
    tight_.push_back(std::move(tight));
    if (delta.carrier(t.points[i]).dim < facet_dim) {
      is_skeleton_[i] = true;
      skeleton_.push_back(i);
    }
  }
}

DivisorF2 DivisorLab::principal(const gf2::Vector& m) const {
  if (m.size() != delta_->dim()) throw ContractViolation("principal: m has the wrong length");
  DivisorF2 out;
  for (std::size_t i = 0; i < parity_.size(); ++i)
    if (m.dot(parity_[i])) out.support.push_back(i);
  return out;
}

DivisorF2 DivisorLab::effective_support(const DivisorF2& l) const {
  DivisorF2 out;
  for (auto v : l.support)
    if (is_skeleton_.at(v)) out.support.push_back(v);
  return out;
}

RestrictionReport DivisorLab::restriction(const DivisorF2& l, std::optional<std::int64_t> mirror_h11) const {
  RestrictionReport rep;
  const std::size_t rank = delta_->dim();
  const std::size_t n_hyp = rank - 1;
  const auto eff = effective_support(l);

  gf2::Matrix a(skeleton_.size(), rank);
  gf2::Vector b(skeleton_.size());
  for (std::size_t i = 0; i < skeleton_.size(); ++i) {
    for (auto j : parity_[skeleton_[i]].support()) a.set(i, j);
    if (eff.contains(skeleton_[i])) b.set(i);
  }
  if (auto m = gf2::solve_affine(a, b)) {
    rep.verdict = Restriction::Zero;
    rep.witness = *m;
    rep.reason = "L plus a principal divisor is supported on facet-interior points";
  }

  bool dual_smooth = false;
  try {
    dual_smooth = delta_->dual().is_smooth();
  } catch (const NotReflexive&) {
    dual_smooth = false;
  }
  rep.surjectivity_hypothesis = (delta_->is_smooth() && n_hyp >= 3) || dual_smooth;

  // Facet-interior divisors modulo principal ones.
  const std::size_t npts = t_->points.size();
  std::vector<gf2::Vector> gens;
  for (std::size_t i = 0; i < rank; ++i) {
    gf2::Vector row(npts);
    for (std::size_t v = 0; v < npts; ++v)
      if (parity_[v].get(i)) row.set(v);
    gens.push_back(std::move(row));
  }
  const auto principal_rank = gf2::rank(gens);
  for (std::size_t v = 0; v < npts; ++v)
    if (!is_skeleton_[v]) gens.push_back(gf2::Vector::unit(npts, v));
  rep.invisible_rank = static_cast<std::int64_t>(gf2::rank(gens) - principal_rank);
  if (mirror_h11) rep.kernel_dim = static_cast<std::int64_t>(npts - principal_rank) - *mirror_h11;

  if (rep.verdict == Restriction::Zero) return rep;
  if (!rep.surjectivity_hypothesis) {
    rep.reason = "no principal correction found and the surjectivity hypothesis fails";
  } else if (!rep.kernel_dim) {
    rep.reason = "no principal correction found; mirror h^{1,1} unavailable for the kernel check";
  } else if (*rep.kernel_dim != rep.invisible_rank) {
    rep.reason = "no principal correction found but the restriction kernel (dim " + std::to_string(*rep.kernel_dim) +
                 ") is larger than the span of invisible divisors (dim " + std::to_string(rep.invisible_rank) + ")";
  } else {
    rep.verdict = Restriction::NonzeroCertified;
    rep.reason = "restriction kernel equals the span of invisible divisors and L is outside it";
  }
  return rep;
}

bool DivisorLab::visible(std::size_t r, std::size_t w) const {
  const auto& a = tight_.at(r);
  const auto& b = tight_.at(w);
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else ++common, ++i, ++j;
  }
  return common >= 2;
}

bool DivisorLab::relevant_neighbor(std::size_t r, std::size_t w) const {
  if (!adj_.adjacent(r, w)) return false;
  return strict_ || r == w || visible(r, w);
}

IndexSet DivisorLab::adjacent_L(const DivisorF2& l, std::size_t r) const {
  if (r >= t_->points.size() || !is_skeleton_[r]) throw ContractViolation("adjacent_L: r is not a skeleton point");
  IndexSet out;
  for (auto v : l.support)
    if (relevant_neighbor(r, v)) out.push_back(v);
  return out;
}

namespace {

std::vector<Constraint> case_constraints(const DivisorLab& lab, const std::vector<gf2::Vector>& par, std::size_t r,
                                         const IndexSet& lr, CaseStatus which) {
  std::vector<Constraint> rows;
  rows.push_back({par[r], which == CaseStatus::Case2});
  for (auto v : lr)
    if (v != r) rows.push_back({par[v], true});
  for (auto w : lab.adjacency().neighbors(r)) {
    if (std::binary_search(lr.begin(), lr.end(), w)) continue;
    if (!lab.relevant_neighbor(r, w)) continue;
    rows.push_back({par[w], false});
  }
  return rows;
}

}  // namespace

LocalVerdict DivisorLab::check_case1(std::size_t r, const DivisorF2& l) const {
  const auto lr = adjacent_L(l, r);
  if (!std::binary_search(lr.begin(), lr.end(), r)) throw ContractViolation("check_case1: r is not in L");
  const auto rows = case_constraints(*this, parity_, r, lr, CaseStatus::Case1);
  gf2::Matrix a(rows.size(), delta_->dim());
  gf2::Vector b(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto j : rows[i].row.support()) a.set(i, j);
    if (rows[i].rhs) b.set(i);
  }
  LocalVerdict v{r, CaseStatus::Fail, gf2::solve_affine(a, b), rows.size(), lr};
  if (v.witness) v.status = CaseStatus::Case1;
  return v;
}

LocalVerdict DivisorLab::check_case2(std::size_t r, const DivisorF2& l) const {
  const auto lr = adjacent_L(l, r);
  if (std::binary_search(lr.begin(), lr.end(), r)) throw ContractViolation("check_case2: r is in L");
  const auto rows = case_constraints(*this, parity_, r, lr, CaseStatus::Case2);
  gf2::Matrix a(rows.size(), delta_->dim());
  gf2::Vector b(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto j : rows[i].row.support()) a.set(i, j);
    if (rows[i].rhs) b.set(i);
  }
  LocalVerdict v{r, CaseStatus::Fail, gf2::solve_affine(a, b), rows.size(), lr};
  if (v.witness) v.status = CaseStatus::Case2;
  return v;
}

bool DivisorLab::satisfies(std::size_t r, const DivisorF2& l, CaseStatus which, const gf2::Vector& m) const {
  if (which == CaseStatus::Fail) return false;
  const auto lr = adjacent_L(l, r);
  const bool r_in = std::binary_search(lr.begin(), lr.end(), r);
  if (r_in != (which == CaseStatus::Case1)) return false;
  const auto rows = case_constraints(*this, parity_, r, lr, which);
  return std::all_of(rows.begin(), rows.end(), [&](const Constraint& c) { return m.dot(c.row) == c.rhs; });
}

AdmissibilityReport DivisorLab::is_admissible(const DivisorF2& l, unsigned jobs) const {
  AdmissibilityReport rep;
  rep.strict_adjacency = strict_;
  rep.verdicts.resize(skeleton_.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < skeleton_.size(); i = next++) {
      const auto r = skeleton_[i];
      rep.verdicts[i] = l.contains(r) ? check_case1(r, l) : check_case2(r, l);
    }
  };
  jobs = std::max(1U, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  rep.admissible = rep.failures() == 0;
  if (n() < 3) {
    rep.ambient_only = true;
    rep.notes.push_back("n < 3: restriction to the hypersurface need not be surjective, so passing certifies the condition "
                        "in the ambient toric variety only");
  }
  if (!rep.admissible)
    rep.notes.push_back("Case 1 and Case 2 are sufficient conditions; failing them is inconclusive");
  return rep;
}

// ---------------------------------------------------------------- configurations

VertexFrame DivisorLab::vertex_frame(std::size_t vertex) const {
  const auto& p = *delta_;
  VertexFrame fr;
  fr.vertex = vertex;
  const auto& r = p.vertices().at(vertex);
  IndexSet tight;
  for (std::size_t f = 0; f < p.facets().size(); ++f)
    if (std::binary_search(p.facets()[f].vertices.begin(), p.facets()[f].vertices.end(), vertex)) tight.push_back(f);
  for (const auto& e : p.faces(1)) {
    if (!std::binary_search(e.vertices.begin(), e.vertices.end(), vertex)) continue;
    const auto other = e.vertices[0] == vertex ? e.vertices[1] : e.vertices[0];
    auto dir = p.vertices()[other] - r;
    const auto g = gcd_of(dir);
    for (auto& x : dir) x /= g;
    fr.edges.push_back(e);
    fr.next_points.push_back(r + dir);
    IndexSet off;
    for (auto f : tight)
      if (!std::binary_search(e.facets.begin(), e.facets.end(), f)) off.push_back(f);
    if (off.size() != 1) throw HypothesisFailed("vertex_frame: vertex is not smooth", {r});
    fr.opposite_normals.push_back(p.facets()[off.front()].normal);
  }
  if (fr.edges.size() != p.dim() || tight.size() != p.dim())
    throw HypothesisFailed("vertex_frame: vertex is not smooth", {r});
  return fr;
}

std::optional<gf2::Vector> DivisorLab::face_parity(const Face& f, const DivisorF2& l) const {
  const auto pts = delta_->lattice_points(f);
  std::set<gf2::Vector> present;
  std::optional<gf2::Vector> chosen;
  for (const auto& x : pts) {
    const auto par = parity(x);
    present.insert(par);
    const auto idx = t_->find(x);
    if (idx && l.contains(*idx)) {
      if (chosen && *chosen != par) return std::nullopt;
      chosen = par;
    }
  }
  if (chosen) {
    for (const auto& x : pts) {
      const auto idx = t_->find(x);
      const bool in_l = idx && l.contains(*idx);
      if ((parity(x) == *chosen) != in_l) return std::nullopt;
    }
    return chosen;
  }
  std::vector<gf2::Vector> absent;
  for (const auto& par : delta_->parity_flat(f).elements())
    if (!present.count(par)) absent.push_back(par);
  if (absent.size() == 1) return absent.front();
  return std::nullopt;
}

namespace {

const Face* two_face_with(const LatticePolytope& p, const Face& a, const Face& b) {
  for (const auto& f : p.faces(2))
    if (contains_all(f.vertices, a.vertices) && contains_all(f.vertices, b.vertices)) return &f;
  return nullptr;
}

}  // namespace

ConfigClass DivisorLab::classify_vertex(std::size_t vertex, const DivisorF2& l) const {
  ConfigClass out;
  VertexFrame fr;
  try {
    fr = vertex_frame(vertex);
  } catch (const HypothesisFailed&) {
    out.detail = "vertex is not smooth";
    return out;
  }
  const std::size_t k = fr.edges.size();
  const auto pr = parity(delta_->vertices()[vertex]);
  std::vector<gf2::Vector> pv;
  for (const auto& v : fr.next_points) pv.push_back(parity(v));
  std::vector<std::vector<std::optional<gf2::Vector>>> pf(k, std::vector<std::optional<gf2::Vector>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const Face* f = two_face_with(*delta_, fr.edges[i], fr.edges[j]);
      if (!f) {
        out.detail = "missing 2-face";
        return out;
      }
      pf[i][j] = pf[j][i] = face_parity(*f, l);
      if (!pf[i][j]) {
        out.detail = "L meets a 2-face in more than one parity class";
        return out;
      }
    }
  }
  auto all_pairs = [&](auto pred) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (!pred(i, j)) return false;
    return true;
  };
  auto fourth = [&](std::size_t i, std::size_t j) { return pr ^ pv[i] ^ pv[j]; };
  if (all_pairs([&](std::size_t i, std::size_t j) { return *pf[i][j] == pr; })) {
    out.kind = ConfigKind::SimpleVertex;
    return out;
  }
  for (std::size_t s = 0; s < k; ++s) {
    const bool pointed = all_pairs([&](std::size_t i, std::size_t j) {
      if (i == s || j == s) return *pf[i][j] == pv[s];
      return *pf[i][j] == fourth(i, j);
    });
    if (pointed) {
      out.kind = ConfigKind::PointedVertex;
      out.distinguished_edge = s;
      return out;
    }
  }
  if (all_pairs([&](std::size_t i, std::size_t j) { return *pf[i][j] == fourth(i, j); })) {
    out.kind = ConfigKind::NonAdmissibleVertex;
    return out;
  }
  out.detail = "parity pattern matches no named configuration";
  return out;
}

ConfigClass DivisorLab::classify_edge(const Face& edge, const DivisorF2& l) const {
  ConfigClass out;
  if (edge.dim != 1) throw ContractViolation("classify_edge: face is not an edge");
  std::vector<gf2::Vector> ps;
  for (const auto& f : delta_->faces(2)) {
    if (!contains_all(f.vertices, edge.vertices)) continue;
    auto p = face_parity(f, l);
    if (!p) {
      out.detail = "L meets a 2-face in more than one parity class";
      return out;
    }
    ps.push_back(*p);
  }
  const auto flat = delta_->parity_flat(edge);
  const bool all_equal = std::all_of(ps.begin(), ps.end(), [&](const gf2::Vector& p) { return p == ps.front(); });
  if (!ps.empty() && all_equal && flat.contains(ps.front())) {
    out.kind = ConfigKind::SimpleEdge;
    return out;
  }
  const bool none_on_edge = std::none_of(ps.begin(), ps.end(), [&](const gf2::Vector& p) { return flat.contains(p); });
  if (none_on_edge && ps.size() == 3) {
    gf2::Vector sum = ps[0] ^ ps[1] ^ ps[2];
    if (sum.is_zero()) {
      out.kind = ConfigKind::NonAdmissibleEdge;
      return out;
    }
    bool independent = true;
    for (const auto& e : flat.elements()) {
      auto with = ps;
      with.push_back(e);
      independent = independent && gf2::independent(with);
    }
    if (independent) {
      out.kind = ConfigKind::EmptyEdge;
      return out;
    }
  }
  out.detail = "parity pattern matches no named configuration";
  return out;
}

DivisorF2 DivisorLab::from_face_parities(const std::vector<std::pair<Face, gf2::Vector>>& choices) const {
  IndexSet s;
  for (const auto& [f, p] : choices) {
    for (const auto& x : delta_->lattice_points(f))
      if (parity(x) == p) s.push_back(t_->index_of(x));
  }
  return DivisorF2::from(std::move(s));
}

HypothesisAudit audit_hypotheses(const LatticePolytope& p) {
  HypothesisAudit a;
  a.smooth = p.is_smooth();
  a.four_dimensional = p.dim() == 4;
  a.even_edges = true;
  for (const auto& e : p.faces(1)) {
    if (p.edge_length(e) % 2 != 0) {
      a.even_edges = false;
      a.odd_edge = e;
      break;
    }
  }
  a.three_parities = true;
  for (const auto& f : p.faces(2)) {
    const auto count = p.boundary_parities(f).size();
    if (count != 3) {
      a.three_parities = false;
      a.bad_face = f;
      a.bad_face_parities = count;
      break;
    }
  }
  return a;
}

HypothesisAudit require_construction_hypotheses(const LatticePolytope& p) {
  auto a = audit_hypotheses(p);
  if (!a.four_dimensional) throw HypothesisFailed("the global construction needs a 4-dimensional polytope", {});
  if (!a.smooth) throw HypothesisFailed("the global construction needs a smooth polytope", {});
  if (!a.even_edges && !a.three_parities) {
    std::string msg = "neither hypothesis holds: edge of odd length " + std::to_string(p.edge_length(*a.odd_edge)) +
                      " and a 2-face whose boundary has " + std::to_string(a.bad_face_parities) + " parities";
    throw HypothesisFailed(msg, face_coords(p, *a.bad_face));
  }
  return a;
}

GlobalConstruction DivisorLab::construct_global(std::size_t v0) const {
  const auto& p = *delta_;
  GlobalConstruction out;
  if (v0 >= p.vertices().size()) throw ContractViolation("construct_global: basepoint is not a vertex index");
  out.audit = require_construction_hypotheses(p);
  const auto base = parity(p.vertices()[v0]);

  if (out.audit.even_edges) {
    out.bullet = "even-edges";
    for (const auto& v : p.vertices())
      if (parity(v) != base) throw InternalError("even edges but vertices of different parity");
    IndexSet s;
    for (auto r : skeleton_)
      if (parity_[r] == base) s.push_back(r);
    out.divisor = DivisorF2::from(std::move(s));
    for (const auto& f : p.faces(2)) out.face_parity.emplace(f.vertices, base);
    return out;
  }
  out.bullet = "three-parities";
  // Breadth-first over the edge graph from v0; each 2-face is assigned when
  // first reached. The rule per face is closed-form, so the order only
  // decides which conflict is reported first.
  std::vector<bool> seen(p.vertices().size(), false);
  std::deque<std::size_t> queue{v0};
  seen[v0] = true;
  std::vector<const Face*> order;
  std::set<IndexSet> assigned;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto& f : p.faces(2)) {
      if (!std::binary_search(f.vertices.begin(), f.vertices.end(), v)) continue;
      if (assigned.insert(f.vertices).second) order.push_back(&f);
    }
    for (const auto& e : p.faces(1)) {
      if (!std::binary_search(e.vertices.begin(), e.vertices.end(), v)) continue;
      const auto w = e.vertices[0] == v ? e.vertices[1] : e.vertices[0];
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  IndexSet s;
  for (const Face* f : order) {
    gf2::Vector chosen = base;
    const auto flat = p.parity_flat(*f);
    if (!flat.contains(base)) {
      const auto bdry = p.boundary_parities(*f);
      std::vector<gf2::Vector> missing;
      for (const auto& par : flat.elements())
        if (!bdry.count(par)) missing.push_back(par);
      if (missing.size() != 1) throw HypothesisFailed("2-face without a unique interior-only parity", face_coords(p, *f));
      chosen = missing.front();
    }
    out.face_parity.emplace(f->vertices, chosen);
    for (const auto& x : p.lattice_points(*f))
      if (parity(x) == chosen) s.push_back(t_->index_of(x));
  }
  out.divisor = DivisorF2::from(std::move(s));
  for (const Face* f : order) {
    const auto& chosen = out.face_parity.at(f->vertices);
    for (const auto& x : p.lattice_points(*f)) {
      const bool in_l = out.divisor.contains(t_->index_of(x));
      if (in_l != (parity(x) == chosen)) {
        auto witness = face_coords(p, *f);
        witness.push_back(x);
        throw HypothesisFailed("per-face parity choices conflict on a shared boundary point", witness);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- cube model

gf2::Vector cube_product(std::size_t n, const gf2::Vector& a, const gf2::Vector& b) {
  const std::size_t k = n + 1;
  if (a.size() != k || b.size() != k) throw ContractViolation("cube_product: classes must have length n+1");
  const gf2::WedgeBasis wb(k, 2);
  gf2::Vector out(wb.size());
  // x_i x_j = x_{ij} for i != j and x_i^2 = 0.
  for (auto i : a.support())
    for (auto j : b.support())
      if (i != j) out.flip(wb.index_of({std::min(i, j), std::max(i, j)}));
  return out;
}

gf2::Vector cube_square(std::size_t n, const gf2::Vector& beta) { return cube_product(n, beta, beta); }

gf2::Matrix cube_cup_matrix(std::size_t n, const gf2::Vector& d) {
  const std::size_t k = n + 1;
  const gf2::WedgeBasis wb(k, 2);
  gf2::Matrix m(wb.size(), k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto e = gf2::Vector::unit(k, i);
    const auto image = cube_square(n, e) ^ cube_product(n, e, d);
    for (auto r : image.support()) m.set(r, i);
  }
  return m;
}

std::vector<gf2::Vector> cube_cup_kernel(std::size_t n, const gf2::Vector& d) {
  return gf2::kernel_basis(cube_cup_matrix(n, d));
}

}  // namespace tropbetti
