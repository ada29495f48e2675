#include "mirrorcorr/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "mirrorcorr/errors.hpp"

namespace mirrorcorr::oracle {

namespace {

using SparseState = std::map<Occupation, double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// a on slot: returns sqrt(n) and lowers, or 0 when empty.
double lower(Occupation& occ, int slot) {
  const int n = occ[static_cast<std::size_t>(slot)];
  if (n == 0) return 0.0;
  occ[static_cast<std::size_t>(slot)] = n - 1;
  return std::sqrt(static_cast<double>(n));
}

double raise(Occupation& occ, int slot) {
  const int n = occ[static_cast<std::size_t>(slot)];
  occ[static_cast<std::size_t>(slot)] = n + 1;
  return std::sqrt(static_cast<double>(n + 1));
}

void enumerate(const TruncationSpec& t, std::size_t slot, int remaining, Occupation& current,
               std::vector<Occupation>& out) {
  if (slot == current.size()) {
    out.push_back(current);
    return;
  }
  const int cap = std::min(slot == 0 ? t.wall_max : t.mode_max, remaining);
  for (int n = 0; n <= cap; ++n) {
    current[slot] = n;
    enumerate(t, slot + 1, remaining - n, current, out);
  }
  current[slot] = 0;
}

SparseState to_sparse(const Eigen::VectorXd& psi, const FockBasis& basis) {
  if (psi.size() != basis.dimension()) {
    throw DomainError("state vector dimension " + std::to_string(psi.size()) +
                      " does not match basis dimension " + std::to_string(basis.dimension()));
  }
  SparseState out;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (psi[i] != 0.0) out.emplace(basis.occupation(i), psi[i]);
  }
  return out;
}

double inner(const SparseState& a, const SparseState& b) {
  const SparseState& small = a.size() <= b.size() ? a : b;
  const SparseState& large = a.size() <= b.size() ? b : a;
  double sum = 0.0;
  for (const auto& [occ, v] : small) {
    auto it = large.find(occ);
    if (it != large.end()) sum += v * it->second;
  }
  return sum;
}

double norm(const SparseState& a) { return std::sqrt(inner(a, a)); }

// phi(x) psi = sum_k u_k (a_k + a_k^+) psi over the cavity's modes.
SparseState apply_field(const SparseState& psi, const Eigen::ArrayXd& u, Cavity cavity,
                        const FockBasis& basis) {
  SparseState out;
  for (const auto& [occ, v] : psi) {
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      const int slot = basis.slot(cavity, static_cast<int>(k) + 1);
      Occupation down = occ;
      const double fd = lower(down, slot);
      if (fd != 0.0) out[down] += u[k] * fd * v;
      Occupation up = occ;
      const double fu = raise(up, slot);
      out[up] += u[k] * fu * v;
    }
  }
  return out;
}

// N[phi(x)^2] psi = sum_pq u_p u_q (a_p a_q + 2 a_p^+ a_q + a_p^+ a_q^+) psi.
SparseState apply_normal_ordered_square(const SparseState& psi, const Eigen::ArrayXd& u,
                                        Cavity cavity, const FockBasis& basis) {
  SparseState out;
  const auto m = static_cast<int>(u.size());
  for (const auto& [occ, v] : psi) {
    for (int p = 0; p < m; ++p) {
      const int sp = basis.slot(cavity, p + 1);
      for (int q = 0; q < m; ++q) {
        const int sq = basis.slot(cavity, q + 1);
        const double w = u[p] * u[q] * v;
        {
          Occupation o = occ;
          double f = lower(o, sq);
          if (f != 0.0) f *= lower(o, sp);
          if (f != 0.0) out[o] += w * f;
        }
        {
          Occupation o = occ;
          double f = lower(o, sq);
          if (f != 0.0) {
            f *= raise(o, sp);
            out[o] += 2.0 * w * f;
          }
        }
        {
          Occupation o = occ;
          double f = raise(o, sq);
          f *= raise(o, sp);
          out[o] += w * f;
        }
      }
    }
  }
  return out;
}

Eigen::ArrayXd truncated_mode_functions(double x, Cavity cavity, const FockBasis& basis,
                                        const ModeSet& modes, const PhysicalParams& params) {
  const int m = cavity == Cavity::left ? basis.truncation().modes_left
                                       : basis.truncation().modes_right;
  if (m > modes.size()) throw DomainError("truncation uses more modes than the ModeSet holds");
  return mode_functions(x, cavity, modes, params).head(m);
}

}  // namespace

void TruncationSpec::validate() const {
  if (modes_left < 0 || modes_right < 0 || modes_left + modes_right < 1) {
    throw DomainError("TruncationSpec: need at least one field mode");
  }
  if (wall_max < 1 || mode_max < 1 || total_max < 1) {
    throw DomainError("TruncationSpec: occupation caps must be >= 1");
  }
}

FockBasis::FockBasis(TruncationSpec trunc) : trunc_(trunc) {
  trunc_.validate();
  Occupation current(static_cast<std::size_t>(1 + trunc_.modes_left + trunc_.modes_right), 0);
  enumerate(trunc_, 0, trunc_.total_max, current, states_);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    index_.emplace(states_[i], static_cast<Eigen::Index>(i));
  }
}

FockBasisState FockBasis::state(Eigen::Index i) const {
  const Occupation& occ = occupation(i);
  FockBasisState s;
  s.n_wall = occ[0];
  s.occ_left.assign(occ.begin() + 1, occ.begin() + 1 + trunc_.modes_left);
  s.occ_right.assign(occ.begin() + 1 + trunc_.modes_left, occ.end());
  return s;
}

std::optional<Eigen::Index> FockBasis::find(const Occupation& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FockBasis::slot(Cavity cavity, int j) const {
  const int m = cavity == Cavity::left ? trunc_.modes_left : trunc_.modes_right;
  if (j < 1 || j > m) throw DomainError("mode " + std::to_string(j) + " not in truncation");
  return cavity == Cavity::left ? j : trunc_.modes_left + j;
}

SparseMatrix build_hamiltonian(const FockBasis& basis, const ModeSet& modes,
                               const CouplingModel& model, Eigen::Index max_dimension) {
  const Eigen::Index dim = basis.dimension();
  if (dim > max_dimension) {
    throw DomainError("Fock basis dimension " + std::to_string(dim) + " exceeds budget " +
                      std::to_string(max_dimension));
  }
  const TruncationSpec& t = basis.truncation();
  if (std::max(t.modes_left, t.modes_right) > modes.size()) {
    throw DomainError("truncation uses more modes than the ModeSet holds");
  }
  const PhysicalParams& p = model.params;

  // Lower triangle (row >= col) accumulated per column, mirrored afterwards.
  std::map<std::pair<Eigen::Index, Eigen::Index>, double> lower_entries;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Occupation& occ = basis.occupation(col);
    double diagonal = p.hbar * p.omega0 * occ[0];
    for (int j = 1; j <= t.modes_left; ++j) {
      diagonal += p.hbar * modes.omega(j) * occ[static_cast<std::size_t>(basis.slot(Cavity::left, j))];
    }
    for (int j = 1; j <= t.modes_right; ++j) {
      diagonal +=
          p.hbar * modes.omega(j) * occ[static_cast<std::size_t>(basis.slot(Cavity::right, j))];
    }
    lower_entries[{col, col}] += diagonal;

    // -(b + b^+) sum_{kj} C_{kj} N[(a_j + a_j^+)(a_k + a_k^+)]
    for (Cavity cavity : {Cavity::left, Cavity::right}) {
      const int m = cavity == Cavity::left ? t.modes_left : t.modes_right;
      for (int j = 1; j <= m; ++j) {
        const int sj = basis.slot(cavity, j);
        for (int k = 1; k <= m; ++k) {
          const int sk = basis.slot(cavity, k);
          const double c_kj = coupling(cavity, k, j, modes, model);
          for (int term = 0; term < 4; ++term) {
            for (int wall = 0; wall < 2; ++wall) {
              Occupation o = occ;
              double f = 1.0;
              switch (term) {
                case 0:  // a_j a_k
                  f *= lower(o, sk);
                  if (f != 0.0) f *= lower(o, sj);
                  break;
                case 1:  // a_j^+ a_k
                  f *= lower(o, sk);
                  if (f != 0.0) f *= raise(o, sj);
                  break;
                case 2:  // a_k^+ a_j
                  f *= lower(o, sj);
                  if (f != 0.0) f *= raise(o, sk);
                  break;
                default:  // a_j^+ a_k^+
                  f *= raise(o, sk);
                  f *= raise(o, sj);
                  break;
              }
              if (f == 0.0) continue;
              f *= wall == 0 ? lower(o, 0) : raise(o, 0);
              if (f == 0.0) continue;
              const auto row = basis.find(o);
              if (!row || *row < col) continue;
              lower_entries[{*row, col}] += -c_kj * f;
            }
          }
        }
      }
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * lower_entries.size());
  for (const auto& [rc, v] : lower_entries) {
    if (v == 0.0 && rc.first != rc.second) continue;
    triplets.emplace_back(rc.first, rc.second, v);
    if (rc.first != rc.second) triplets.emplace_back(rc.second, rc.first, v);
  }
  SparseMatrix H(dim, dim);
  H.setFromTriplets(triplets.begin(), triplets.end());
  H.makeCompressed();
  return H;
}

namespace {

GroundState finish(const SparseMatrix& H, double energy, Eigen::VectorXd v,
                   Eigen::Index vacuum_index, int iterations) {
  v.normalize();
  if (v[vacuum_index] < 0.0) v = -v;
  GroundState gs;
  gs.energy = energy;
  gs.residual = (H * v - energy * v).norm();
  gs.vector = std::move(v);
  gs.iterations = iterations;
  return gs;
}

GroundState dense_ground_state(const SparseMatrix& H, Eigen::Index vacuum_index) {
  const Eigen::MatrixXd dense(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense eigensolver failed", 0.0, std::numeric_limits<double>::infinity());
  }
  return finish(H, solver.eigenvalues()[0], solver.eigenvectors().col(0), vacuum_index, 1);
}

GroundState lanczos_ground_state(const SparseMatrix& H, double tol, Eigen::Index vacuum_index,
                                 int max_restarts) {
  const Eigen::Index dim = H.rows();
  const Eigen::Index krylov = std::min<Eigen::Index>(dim, 120);
  Eigen::VectorXd start = Eigen::VectorXd::Zero(dim);
  start[vacuum_index] = 1.0;
  GroundState best;
  best.residual = std::numeric_limits<double>::infinity();
  int iterations = 0;

  for (int restart = 0; restart <= max_restarts; ++restart) {
    Eigen::MatrixXd V(dim, krylov);
    Eigen::VectorXd alpha(krylov), beta(krylov);
    V.col(0) = start.normalized();
    Eigen::Index steps = krylov;
    for (Eigen::Index i = 0; i < krylov; ++i) {
      ++iterations;
      Eigen::VectorXd w = H * V.col(i);
      alpha[i] = V.col(i).dot(w);
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        w -= V.leftCols(i + 1) * (V.leftCols(i + 1).transpose() * w);
      }
      beta[i] = w.norm();
      if (i + 1 == krylov) break;
      if (beta[i] <= 1e-14 * std::abs(alpha[i]) + 1e-300) {
        steps = i + 1;
        break;
      }
      V.col(i + 1) = w / beta[i];
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index i = 0; i < steps; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < steps) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(T);
    const Eigen::VectorXd ritz = V.leftCols(steps) * small.eigenvectors().col(0);
    GroundState gs = finish(H, small.eigenvalues()[0], ritz, vacuum_index, iterations);
    // Rayleigh quotient of the normalized Ritz vector.
    gs.energy = gs.vector.dot(H * gs.vector);
    gs.residual = (H * gs.vector - gs.energy * gs.vector).norm();
    if (gs.residual < best.residual) best = gs;
    if (best.residual <= tol) return best;
    start = best.vector;
  }
  throw ConvergenceError("Lanczos did not converge; best residual " + std::to_string(best.residual),
                         best.energy, best.residual);
}

}  // namespace

GroundState ground_state(const SparseMatrix& H, double tol, EigenMethod method,
                         Eigen::Index vacuum_index, int max_restarts) {
  if (H.rows() != H.cols() || H.rows() == 0) throw DomainError("ground_state: H must be square");
  if (!(tol > 0.0)) throw DomainError("ground_state: tol must be positive");
  if (method == EigenMethod::automatic) {
    method = H.rows() < 500 ? EigenMethod::dense : EigenMethod::lanczos;
  }
  GroundState gs = method == EigenMethod::dense
                       ? dense_ground_state(H, vacuum_index)
                       : lanczos_ground_state(H, tol, vacuum_index, max_restarts);
  if (gs.residual > tol) {
    throw ConvergenceError("ground state residual " + std::to_string(gs.residual) +
                               " above tolerance",
                           gs.energy, gs.residual);
  }
  return gs;
}

CorrelationResult measure_correlation(const Eigen::VectorXd& psi, double x1, double x2,
                                      const FockBasis& basis, const ModeSet& modes,
                                      const PhysicalParams& params) {
  const SparseState state = to_sparse(psi, basis);
  const Eigen::ArrayXd u = truncated_mode_functions(x1, Cavity::left, basis, modes, params);
  const Eigen::ArrayXd v = truncated_mode_functions(x2, Cavity::right, basis, modes, params);
  const SparseState n1 = apply_normal_ordered_square(state, u, Cavity::left, basis);
  const SparseState n2 = apply_normal_ordered_square(state, v, Cavity::right, basis);
  const double joint = inner(n1, n2);
  const double mean1 = inner(state, n1);
  const double mean2 = inner(state, n2);
  CorrelationResult out;
  out.value = joint - mean1 * mean2;
  out.method = CorrelationMethod::exact_diag;
  out.est_abs_err = 64.0 * kEps * (norm(n1) * norm(n2) + std::abs(mean1 * mean2));
  out.n_modes_used = basis.truncation().modes_left + basis.truncation().modes_right;
  return out;
}

CorrelationResult measure_field_correlation(const Eigen::VectorXd& psi, double x1, double x2,
                                            const FockBasis& basis, const ModeSet& modes,
                                            const PhysicalParams& params) {
  const SparseState state = to_sparse(psi, basis);
  const Eigen::ArrayXd u = truncated_mode_functions(x1, Cavity::left, basis, modes, params);
  const Eigen::ArrayXd v = truncated_mode_functions(x2, Cavity::right, basis, modes, params);
  const SparseState p1 = apply_field(state, u, Cavity::left, basis);
  const SparseState p2 = apply_field(state, v, Cavity::right, basis);
  const double mean1 = inner(state, p1);
  const double mean2 = inner(state, p2);
  CorrelationResult out;
  out.value = inner(p1, p2) - mean1 * mean2;
  out.method = CorrelationMethod::exact_diag;
  out.est_abs_err = 64.0 * kEps * (norm(p1) * norm(p2) + std::abs(mean1 * mean2));
  out.n_modes_used = basis.truncation().modes_left + basis.truncation().modes_right;
  return out;
}

double measure_phi_squared_shift(const Eigen::VectorXd& psi, double x, Cavity cavity,
                                 const FockBasis& basis, const ModeSet& modes,
                                 const PhysicalParams& params) {
  const SparseState state = to_sparse(psi, basis);
  const Eigen::ArrayXd u = truncated_mode_functions(x, cavity, basis, modes, params);
  return inner(state, apply_normal_ordered_square(state, u, cavity, basis));
}

double vacuum_deficit(const Eigen::VectorXd& psi, const FockBasis& basis) {
  if (psi.size() != basis.dimension()) throw DomainError("vacuum_deficit: dimension mismatch");
  const double c0 = psi[basis.vacuum_index()];
  // 1 - c0^2 computed as the weight outside the vacuum, which keeps its
  // relative accuracy when the deficit is tiny.
  double outside = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i != basis.vacuum_index()) outside += psi[i] * psi[i];
  }
  return outside / (outside + c0 * c0);
}

double measure_pair_amplitude(const Eigen::VectorXd& psi, Cavity cavity, int j, int k,
                              const FockBasis& basis) {
  if (psi.size() != basis.dimension()) throw DomainError("measure_pair_amplitude: dimension mismatch");
  Occupation occ(basis.occupation(0).size(), 0);
  occ[0] = 1;
  occ[static_cast<std::size_t>(basis.slot(cavity, j))] += 1;
  occ[static_cast<std::size_t>(basis.slot(cavity, k))] += 1;
  const auto idx = basis.find(occ);
  if (!idx) throw DomainError("pair state not in the truncated basis");
  return psi[*idx];
}

void write_matrix_coordinates(std::ostream& out, const SparseMatrix& H) {
  out << "# " << H.rows() << ' ' << H.nonZeros() << '\n';
  char buf[64];
  for (int k = 0; k < H.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(H, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

}  // namespace mirrorcorr::oracle
