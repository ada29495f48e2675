#pragma once

// Exact diagonalization of the two-cavity Hamiltonian on a truncated Fock
// basis. Matrix elements come from bosonic ladder algebra only; nothing here
// uses the perturbative amplitude formulas.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "mirrorcorr/correlation_result.hpp"
#include "mirrorcorr/model.hpp"

namespace mirrorcorr::oracle {

struct TruncationSpec {
  int modes_left = 2;
  int modes_right = 2;
  int wall_max = 5;   // mirror occupation cap
  int mode_max = 5;   // per field mode cap
  int total_max = 5;  // total quanta cap Q_max

  void validate() const;
};

// Occupations ordered as [mirror, left modes..., right modes...].
using Occupation = std::vector<int>;

struct FockBasisState {
  int n_wall = 0;
  std::vector<int> occ_left;
  std::vector<int> occ_right;
};

class FockBasis {
 public:
  explicit FockBasis(TruncationSpec trunc);

  Eigen::Index dimension() const { return static_cast<Eigen::Index>(states_.size()); }
  const TruncationSpec& truncation() const { return trunc_; }
  const Occupation& occupation(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }
  FockBasisState state(Eigen::Index i) const;
  std::optional<Eigen::Index> find(const Occupation& occ) const;
  Eigen::Index vacuum_index() const { return 0; }

  // Offset of mode j (1-based) of a cavity in an Occupation.
  int slot(Cavity cavity, int j) const;

 private:
  TruncationSpec trunc_;
  std::vector<Occupation> states_;
  std::map<Occupation, Eigen::Index> index_;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

// Throws DomainError when the basis exceeds max_dimension
// (message reports the dimension).
SparseMatrix build_hamiltonian(const FockBasis& basis, const ModeSet& modes,
                               const CouplingModel& model, Eigen::Index max_dimension = 200000);

enum class EigenMethod { automatic, dense, lanczos };

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd vector;  // unit norm, vacuum coefficient >= 0
  double residual = 0.0;   // |H v - E v|
  int iterations = 0;
};

// Lowest eigenpair. `automatic` uses the dense solver below dimension 500 and
// restarted Lanczos (full reorthogonalization, started from the vacuum) above.
GroundState ground_state(const SparseMatrix& H, double tol,
                         EigenMethod method = EigenMethod::automatic,
                         Eigen::Index vacuum_index = 0, int max_restarts = 50);

// Connected <phi^2(x1) phi^2(x2)> on the vector, with field operators built
// from the first M modes of each cavity.
CorrelationResult measure_correlation(const Eigen::VectorXd& psi, double x1, double x2,
                                      const FockBasis& basis, const ModeSet& modes,
                                      const PhysicalParams& params);

// Connected <phi(x1) phi(x2)>.
CorrelationResult measure_field_correlation(const Eigen::VectorXd& psi, double x1, double x2,
                                            const FockBasis& basis, const ModeSet& modes,
                                            const PhysicalParams& params);

// <psi|N[phi^2(x)]|psi>, the shift of <phi^2> from its bare vacuum value.
double measure_phi_squared_shift(const Eigen::VectorXd& psi, double x, Cavity cavity,
                                 const FockBasis& basis, const ModeSet& modes,
                                 const PhysicalParams& params);

// 1 - |<vac|psi>|^2.
double vacuum_deficit(const Eigen::VectorXd& psi, const FockBasis& basis);

// Coefficient of the normalized state |1; {1_j 1_k}> (or |1; {2_j}>).
double measure_pair_amplitude(const Eigen::VectorXd& psi, Cavity cavity, int j, int k,
                              const FockBasis& basis);

// One "row col value" line per stored entry (0-based, 17 significant digits),
// after a "# dimension nnz" header.
void write_matrix_coordinates(std::ostream& out, const SparseMatrix& H);

}  // namespace mirrorcorr::oracle
