#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "covert/types.hpp"

namespace covert::conic {

/// Real-valued linear functional over Hermitian matrix variables and
/// nonnegative scalars:
///   constant + sum Re tr(C X_b) + sum Re(c X_b(i, j)) + sum a s.
struct LinearForm {
  struct Dense {
    int block;
    CMat coef;  // Hermitian
  };
  struct Entry {
    int block;
    int row, col;
    cdouble coef;
  };
  double constant = 0.0;
  std::vector<Dense> dense;
  std::vector<Entry> entries;
  std::vector<std::pair<int, double>> scalars;

  LinearForm& trace(int block, CMat coef, double scale = 1.0);
  LinearForm& entry(int block, int row, int col, cdouble coef);
  LinearForm& scalar(int index, double coef);
  LinearForm& offset(double value);
  LinearForm& add(const LinearForm& other, double scale = 1.0);
};

enum class Sense { le, ge, eq };

struct Constraint {
  LinearForm form;
  Sense sense = Sense::eq;
  double rhs = 0.0;
  std::string name;
};

/// Semidefinite program with Hermitian PSD matrix blocks and nonnegative
/// (optionally upper-bounded) scalars.
class SdpProblem {
 public:
  int add_matrix(int dim, std::string name = {});
  int add_scalar(std::string name = {}, double upper = kInf);
  void add_constraint(LinearForm form, Sense sense, double rhs, std::string name = {});
  void maximize(LinearForm objective);
  void minimize(LinearForm objective);

  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int num_scalars() const { return static_cast<int>(upper_.size()); }
  int block_dim(int b) const { return dims_[b]; }
  const std::string& block_name(int b) const { return block_names_[b]; }
  const std::string& scalar_name(int s) const { return scalar_names_[s]; }
  double scalar_upper(int s) const { return upper_[s]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearForm& objective() const { return objective_; }
  bool is_maximize() const { return maximize_; }

  /// Throws std::invalid_argument on unknown variables, shape mismatches or
  /// non-Hermitian coefficients.
  void validate() const;

 private:
  std::vector<int> dims_;
  std::vector<std::string> block_names_;
  std::vector<double> upper_;
  std::vector<std::string> scalar_names_;
  std::vector<Constraint> constraints_;
  LinearForm objective_;
  bool maximize_ = false;
};

enum class SdpStatus { optimal, infeasible, inaccurate };

const char* to_string(SdpStatus status);

struct SdpSolution {
  SdpStatus status = SdpStatus::inaccurate;
  std::vector<CMat> matrices;
  RVec scalars;
  double objective = 0.0;         // in the problem's own sense, constant included
  double primal_residual = 0.0;   // max row violation of the scaled equality system
  double gap = 0.0;               // relative duality gap
  int iterations = 0;
};

struct SolverOptions {
  int max_iterations = 100;
  double tol_residual = 1e-9;
  double tol_gap = 1e-8;
  double step_fraction = 0.98;
  // Looser acceptance used when progress stalls before the tight targets.
  double accept_residual = 1e-7;
  double accept_gap = 1e-6;
  bool verbose = false;  // per-iteration log on stderr
};

/// Primal-dual interior-point method (HKM search direction with Mehrotra
/// predictor-corrector) on Hermitian blocks. Deterministic.
SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

/// Evaluates a linear form at a point.
double evaluate(const LinearForm& form, const std::vector<CMat>& matrices, const RVec& scalars);

/// Equivalent problem with real data: each n x n Hermitian block X becomes a
/// 2n x 2n block [[Re X, -Im X], [Im X, Re X]] and each coefficient C becomes
/// 1/2 [[Re C, -Im C], [Im C, Re C]], so Re tr(C X) equals the embedded inner
/// product exactly.
SdpProblem complex_to_real(const SdpProblem& problem);

/// Hermitian matrix recovered from a 2n x 2n embedded block.
CMat embedded_to_complex(const CMat& embedded);

/// Text dump of a problem as sparse triplets (see README) for offline
/// cross-validation with an external solver.
void write_dump(std::ostream& out, const SdpProblem& problem);

/// Parses the output of `write_dump`. Names are not preserved. Throws
/// std::invalid_argument on malformed input.
SdpProblem read_dump(std::istream& in);

}  // namespace covert::conic
