#include "tropbetti/tropical.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace tropbetti {

namespace {

bool pairs_to_one(const std::vector<IntVec>& xs, const IntVec& u) {
  return std::all_of(xs.begin(), xs.end(), [&](const IntVec& x) { return dot(x, u) == 1; });
}

Face face_from_tight_facets(const LatticePolytope& p, const std::vector<IntVec>& pts) {
  IndexSet tight;
  for (std::size_t f = 0; f < p.facets().size(); ++f) {
    const auto& fac = p.facets()[f];
    if (std::all_of(pts.begin(), pts.end(), [&](const IntVec& x) { return dot(fac.normal, x) == fac.rhs; }))
      tight.push_back(f);
  }
  return p.face_of_facets(tight);
}

}  // namespace

Face min_cone(const LatticePolytope& coarse, const std::vector<IntVec>& generators) {
  if (generators.empty()) return Face{-1, {}, {}};
  for (const auto& g : generators)
    if (!coarse.contains(g) || coarse.is_interior(g))
      throw ContractViolation("min_cone: generator is not a boundary point of the coarse polytope");
  // The smallest face containing all generators is cut out by the facets
  // tight at every one of them.
  const auto f = face_from_tight_facets(coarse, generators);
  if (f.dim == static_cast<int>(coarse.dim())) throw ContractViolation("min_cone: generators lie in no proper face");
  return f;
}

Face dual_face(const LatticePolytope& p, const std::vector<IntVec>& generators) {
  if (generators.empty()) return p.faces(static_cast<int>(p.dim())).front();
  IndexSet verts;
  for (std::size_t v = 0; v < p.vertices().size(); ++v)
    if (pairs_to_one(generators, p.vertices()[v])) verts.push_back(v);
  for (const auto& level : p.face_lattice())
    for (const auto& f : level)
      if (f.vertices == verts) return f;
  throw ContractViolation("dual_face: generators do not span a cone over a face of the dual polytope");
}

std::int64_t CohomologyTable::euler(std::size_t p) const {
  std::int64_t e = 0;
  for (std::size_t q = 0; q < dims.at(p).size(); ++q) e += (q % 2 == 0 ? 1 : -1) * dims[p][q];
  return e;
}

TropicalComplex::TropicalComplex(const CentralTriangulation& cone_side, const CentralTriangulation& simplex_side)
    : cone_side_(&cone_side), simplex_side_(&simplex_side) {
  if (cone_side.dim() == 0 || cone_side.dim() != simplex_side.dim())
    throw ContractViolation("TropicalComplex: triangulations live in different ranks");
  const std::size_t rank = cone_side.dim();
  n_ = rank - 1;

  std::vector<std::vector<IndexSet>> sigma_faces(rank + 1);
  for (std::size_t k = 0; k <= n_; ++k) sigma_faces[k] = simplex_side.faces(static_cast<int>(k));

  for (int k = -1; k <= static_cast<int>(n_); ++k) {
    for (const auto& tau : cone_side.faces(k)) {
      const auto tau_pts = cone_side.coordinates(tau);
      std::vector<bool> allowed(simplex_side.points.size());
      for (std::size_t u = 0; u < allowed.size(); ++u) allowed[u] = pairs_to_one(tau_pts, simplex_side.points[u]);
      const int codim = static_cast<int>(rank) - static_cast<int>(tau.size());
      bool any = false;
      for (std::size_t sk = 0; sk <= n_; ++sk) {
        for (const auto& s : sigma_faces[sk]) {
          if (!std::all_of(s.begin(), s.end(), [&](std::size_t u) { return allowed[u]; })) continue;
          if (sk >= 1) {
            cells_.push_back(PosetCell{tau, s, false, codim - static_cast<int>(sk)});
            any = true;
          }
          if (tau.empty()) cells_.push_back(PosetCell{tau, s, true, codim - static_cast<int>(sk) - 1});
        }
      }
      if (any || tau.empty()) {
        TauData data;
        const std::size_t cols = rank;
        gf2::Matrix m(tau.size(), cols);
        for (std::size_t i = 0; i < tau.size(); ++i) {
          const auto par = parity(tau_pts[i]);
          for (auto j : par.support()) m.set(i, j);
        }
        data.w_basis = gf2::kernel_basis(m);
        tau_cache_.emplace(tau, std::move(data));
      }
    }
  }
  std::sort(cells_.begin(), cells_.end());
  by_dim_.assign(n_ + 1, {});
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    index_.emplace(cells_[i], i);
    const auto d = cells_[i].dim;
    if (d < 0 || d > static_cast<int>(n_)) throw InternalError("poset cell with out-of-range dimension");
    by_dim_[static_cast<std::size_t>(d)].push_back(i);
  }
  cofaces_.assign(cells_.size(), {});
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    auto add = [&](const PosetCell& target) {
      auto j = find(target);
      if (!j) throw InternalError("coface of a poset cell is missing from the poset");
      cofaces_[i].push_back(*j);
    };
    for (std::size_t drop = 0; drop < c.tau.size(); ++drop) {
      PosetCell t = c;
      t.tau.erase(t.tau.begin() + static_cast<std::ptrdiff_t>(drop));
      t.dim = c.dim + 1;
      add(t);
    }
    if (c.sigma_dim() >= 2) {
      if (c.sigma_origin) {
        PosetCell t = c;
        t.sigma_origin = false;
        t.dim = c.dim + 1;
        add(t);
      }
      if (c.sigma.size() >= 2 && (c.sigma_origin || c.sigma.size() >= 3)) {
        for (std::size_t drop = 0; drop < c.sigma.size(); ++drop) {
          PosetCell t = c;
          t.sigma.erase(t.sigma.begin() + static_cast<std::ptrdiff_t>(drop));
          t.dim = c.dim + 1;
          add(t);
        }
      }
    }
    std::sort(cofaces_[i].begin(), cofaces_[i].end());
  }
}

const std::vector<std::size_t>& TropicalComplex::cells_of_dim(int q) const {
  static const std::vector<std::size_t> empty;
  if (q < 0 || q > static_cast<int>(n_)) return empty;
  return by_dim_[static_cast<std::size_t>(q)];
}

std::optional<std::size_t> TropicalComplex::find(const PosetCell& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const TropicalComplex::TauData& TropicalComplex::tau_data(const IndexSet& tau) const {
  auto it = tau_cache_.find(tau);
  if (it == tau_cache_.end()) throw InternalError("tau without cached data");
  return it->second;
}

std::vector<gf2::Vector> TropicalComplex::sigma_directions(const PosetCell& c) const {
  std::vector<gf2::Vector> dirs;
  const auto& pts = simplex_side_->points;
  if (c.sigma_origin) {
    for (auto u : c.sigma) dirs.push_back(parity(pts[u]));
  } else {
    const auto base = parity(pts[c.sigma.front()]);
    for (std::size_t i = 1; i < c.sigma.size(); ++i) dirs.push_back(parity(pts[c.sigma[i]]) ^ base);
  }
  return dirs;
}

SheafFiber TropicalComplex::fiber(std::size_t p, std::size_t cell) const {
  const auto& c = cells_.at(cell);
  const auto& w = tau_data(c.tau).w_basis;
  const std::size_t rank = n_ + 1;
  SheafFiber f;
  f.p = p;
  f.ambient_wedge_dim = gf2::binomial(rank, p);
  if (p > w.size()) {
    f.quotient = gf2::Quotient({}, {});
    return f;
  }
  const auto space = gf2::wedge_subspace(w, p);
  f.numerator_dim = space.size();
  const auto edges = sigma_directions(c);
  const std::size_t s = edges.size();
  std::vector<gf2::Vector> denominator;
  if (p >= s) {
    // Extend the edge directions of sigma to a basis of C(tau)^perp.
    std::vector<gf2::Vector> basis = edges;
    if (!gf2::independent(basis)) throw InternalError("sigma is not a primitive simplex modulo 2");
    std::vector<gf2::Vector> extra;
    for (const auto& v : w) {
      basis.push_back(v);
      if (gf2::independent(basis)) {
        extra.push_back(v);
      } else {
        basis.pop_back();
      }
    }
    if (basis.size() != w.size()) throw InternalError("sigma directions are not orthogonal to tau");
    const gf2::WedgeBasis wb(rank, p);
    for (const auto& sub : gf2::subsets(extra.size(), p - s)) {
      auto factors = edges;
      for (auto i : sub) factors.push_back(extra[i]);
      denominator.push_back(wb.wedge(factors));
    }
  }
  f.denominator_dim = gf2::rank(denominator);
  f.quotient = gf2::Quotient(space, denominator);
  return f;
}

namespace {

struct Layout {
  std::vector<SheafFiber> fibers;
  std::vector<std::size_t> offset;  // position of each cell's block inside its C^q
  std::vector<std::size_t> chain_dim;
};

}  // namespace

static Layout make_layout(const TropicalComplex& cx, std::size_t p) {
  Layout l;
  l.fibers.reserve(cx.cells().size());
  l.offset.assign(cx.cells().size(), 0);
  for (std::size_t i = 0; i < cx.cells().size(); ++i) l.fibers.push_back(cx.fiber(p, i));
  l.chain_dim.assign(cx.n() + 1, 0);
  for (std::size_t q = 0; q <= cx.n(); ++q) {
    for (auto i : cx.cells_of_dim(static_cast<int>(q))) {
      l.offset[i] = l.chain_dim[q];
      l.chain_dim[q] += l.fibers[i].dim();
    }
  }
  return l;
}

static gf2::SparseMatrix assemble(const TropicalComplex& cx, const Layout& l, int q) {
  const auto rows = q + 1 <= static_cast<int>(cx.n()) ? l.chain_dim[static_cast<std::size_t>(q + 1)] : 0;
  const auto cols = (q >= 0 && q <= static_cast<int>(cx.n())) ? l.chain_dim[static_cast<std::size_t>(q)] : 0;
  gf2::SparseMatrix m(rows, cols);
  if (rows == 0 || cols == 0) return m;
  for (auto i : cx.cells_of_dim(q)) {
    const auto& src = l.fibers[i];
    for (std::size_t j = 0; j < src.dim(); ++j) {
      auto& column = m.columns[l.offset[i] + j];
      const auto& rep = src.quotient.complement()[j];
      for (auto t : cx.cofaces(i)) {
        const auto& dst = l.fibers[t];
        if (dst.dim() == 0) continue;
        const auto image = dst.quotient.project(rep);
        for (auto b : image.support()) column.push_back(static_cast<std::uint32_t>(l.offset[t] + b));
      }
      std::sort(column.begin(), column.end());
    }
  }
  return m;
}

gf2::SparseMatrix TropicalComplex::coboundary(std::size_t p, int q) const {
  return assemble(*this, make_layout(*this, p), q);
}

std::vector<std::int64_t> TropicalComplex::cohomology(std::size_t p, CohomologyTable* detail) const {
  const auto layout = make_layout(*this, p);
  const std::size_t top = n_;
  std::vector<gf2::SparseMatrix> deltas;
  for (std::size_t q = 0; q < top; ++q) deltas.push_back(assemble(*this, layout, static_cast<int>(q)));
  for (std::size_t q = 0; q + 1 < deltas.size(); ++q) {
    if (!gf2::product_is_zero(deltas[q + 1], deltas[q]))
      throw AssemblyError("delta^2 != 0 for p = " + std::to_string(p) + " at q = " + std::to_string(q));
  }
  // Clearing: a pivot row of the reduced delta_q names a column of
  // delta_{q+1} that reduces to zero.
  std::vector<std::int64_t> ranks(top + 1, 0);
  std::vector<bool> skip;
  for (std::size_t q = 0; q < top; ++q) {
    std::vector<std::uint32_t> pivots;
    if (skip.size() != deltas[q].cols) skip.assign(deltas[q].cols, false);
    ranks[q] = static_cast<std::int64_t>(gf2::rank(deltas[q], &skip, &pivots));
    skip.assign(deltas[q].rows, false);
    for (auto r : pivots) skip[r] = true;
  }
  std::vector<std::int64_t> dims(top + 1, 0);
  for (std::size_t q = 0; q <= top; ++q) {
    dims[q] = static_cast<std::int64_t>(layout.chain_dim[q]) - ranks[q] - (q > 0 ? ranks[q - 1] : 0);
    if (dims[q] < 0) throw InternalError("negative cohomology dimension");
  }
  if (detail) {
    detail->chain_dims[p].assign(layout.chain_dim.begin(), layout.chain_dim.end());
    detail->ranks[p] = ranks;
  }
  return dims;
}

CohomologyTable TropicalComplex::cohomology_table(unsigned jobs) const {
  CohomologyTable table;
  table.n = n_;
  table.dims.assign(n_ + 1, {});
  table.chain_dims.assign(n_ + 1, {});
  table.ranks.assign(n_ + 1, {});
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(n_ + 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t p = next++; p <= n_; p = next++) {
      try {
        table.dims[p] = cohomology(p, &table);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

bool mirror_check(const CohomologyTable& a, const CohomologyTable& b, std::pair<std::size_t, std::size_t>* first_mismatch) {
  if (a.n != b.n) {
    if (first_mismatch) *first_mismatch = {0, 0};
    return false;
  }
  for (std::size_t p = 0; p <= a.n; ++p) {
    for (std::size_t q = 0; q <= a.n; ++q) {
      if (a.dims[p][q] != b.dims[a.n - p][q]) {
        if (first_mismatch) *first_mismatch = {p, q};
        return false;
      }
    }
  }
  return true;
}

}  // namespace tropbetti
