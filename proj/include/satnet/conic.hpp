#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace satnet {

using Eigen::MatrixXcd;
using Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

/// Cone layout of the slack vector, in row order:
/// zero rows, non-negative rows, PSD blocks (svec of real dim D), exp triples.
struct ConeLayout {
  int n_zero = 0;
  int n_nonneg = 0;
  std::vector<int> psd_dims;  // real dimensions D (svec length D(D+1)/2)
  int n_exp = 0;              // number of (x, y, z) triples

  int rows() const;
};

enum class SolveStatus { Optimal, Inaccurate, Infeasible, Unbounded, Error };

const char* to_string(SolveStatus s);

struct SolverOptions {
  double eps = 1e-8;        // primal/dual residual and gap tolerance
  int max_iters = 200;
  bool verbose = false;
};

struct Solution {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  VectorXd scalars;              // indexed by scalar-variable handle
  std::vector<MatrixXcd> psd;    // indexed by PSD-variable handle
  int iterations = 0;
  double solve_time_s = 0.0;
  double primal_res = 0.0, dual_res = 0.0, gap = 0.0;
  std::string message;
};

/// Raw cone-LP solution in standard form min c'x s.t. Ax + s = b, s in K.
struct ConeLpResult {
  SolveStatus status = SolveStatus::Error;
  VectorXd x, y, s;
  int iterations = 0;
  double primal_res = 0.0, dual_res = 0.0, gap = 0.0;
};

ConeLpResult solve_cone_lp(const SparseMat& A, const VectorXd& b,
                           const VectorXd& c, const ConeLayout& cone,
                           const SolverOptions& opts);

/// Linear expression: constant + sum coef*scalar + sum Re tr(C_j F_j).
struct LinExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> scalars;       // (handle, coef)
  std::vector<std::pair<int, MatrixXcd>> mats;       // (handle, Hermitian C)

  LinExpr& add(int scalar_var, double coef = 1.0);
  LinExpr& add_trace(int psd_var, const MatrixXcd& C);
  LinExpr& operator+=(double v);
};

LinExpr scalar_expr(int var, double coef = 1.0);
LinExpr const_expr(double v);

enum class Sense { Eq, Le, Ge };  // expr (=, <=, >=) 0

/// Builds the convex subproblem: named scalar variables, Hermitian PSD
/// matrix variables (real symmetric embedding), linear rows and
/// exponential-cone rows "affine >= e^var"; maximizes a linear objective.
class ConicProgram {
 public:
  int add_scalar(const std::string& name);
  int add_hermitian_psd(const std::string& name, int d);

  void add_linear(const LinExpr& expr, Sense sense);
  void add_exp_ge(const LinExpr& affine, int scalar_var);
  void set_objective_max(const LinExpr& expr);

  int num_scalars() const { return static_cast<int>(scalar_names_.size()); }
  int num_psd() const { return static_cast<int>(psd_dims_.size()); }
  int psd_dim(int handle) const { return psd_dims_[handle]; }
  int num_linear() const;
  int num_exp() const { return static_cast<int>(exp_rows_.size()); }

  /// Assembles the standard form; exposed for tests and for dump().
  void assemble(SparseMat& A, VectorXd& b, VectorXd& c, ConeLayout& cone) const;

  Solution solve(const SolverOptions& opts = {}) const;

  /// Sparse-text dump of the assembled program for external cross-checks.
  void dump(std::ostream& os) const;

  /// Complex-trace accessor used in tests: Re tr(C F) for a PSD handle and
  /// the matrix recovered from a raw solution vector.
  MatrixXcd extract_psd(const VectorXd& x, int handle) const;

 private:
  struct Row {
    LinExpr expr;
    Sense sense;
  };
  struct ExpRow {
    LinExpr affine;
    int var;
  };

  int svec_offset(int handle) const;  // offset of PSD block in x
  void expr_coeffs(const LinExpr& e, std::vector<Eigen::Triplet<double>>& trip,
                   int row, double scale) const;

  std::vector<std::string> scalar_names_;
  std::vector<std::string> psd_names_;
  std::vector<int> psd_dims_;  // complex dimensions d
  std::vector<Row> rows_;
  std::vector<ExpRow> exp_rows_;
  LinExpr objective_;
  bool objective_set_ = false;
};

/// svec packing of a real symmetric matrix with sqrt(2) off-diagonal scaling
/// (an isometry: svec(S).dot(svec(U)) = tr(S U)).
VectorXd svec(const Eigen::MatrixXd& S);
Eigen::MatrixXd unsvec(const VectorXd& v, int D);

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.
Eigen::MatrixXd embed_hermitian(const MatrixXcd& H);
MatrixXcd extract_hermitian(const Eigen::MatrixXd& U);

}  // namespace satnet
