#include "satnet/conic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace satnet {

namespace {

const double kSqrt2 = std::sqrt(2.0);

inline int svec_len(int D) { return D * (D + 1) / 2; }
inline int svec_idx(int i, int j) { return j * (j + 1) / 2 + i; }  // i <= j

}  // namespace

int ConeLayout::rows() const {
  int r = n_zero + n_nonneg + 3 * n_exp;
  for (int D : psd_dims) r += svec_len(D);
  return r;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Inaccurate: return "inaccurate";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    default: return "error";
  }
}

VectorXd svec(const Eigen::MatrixXd& S) {
  const int D = static_cast<int>(S.rows());
  VectorXd v(svec_len(D));
  for (int j = 0; j < D; ++j)
    for (int i = 0; i <= j; ++i)
      v(svec_idx(i, j)) = (i == j) ? S(i, j) : kSqrt2 * S(i, j);
  return v;
}

Eigen::MatrixXd unsvec(const VectorXd& v, int D) {
  if (v.size() != svec_len(D)) throw std::invalid_argument("unsvec: bad size");
  Eigen::MatrixXd S(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i <= j; ++i) {
      double x = v(svec_idx(i, j));
      S(i, j) = S(j, i) = (i == j) ? x : x / kSqrt2;
    }
  return S;
}

Eigen::MatrixXd embed_hermitian(const MatrixXcd& H) {
  const int d = static_cast<int>(H.rows());
  Eigen::MatrixXd U(2 * d, 2 * d);
  U.topLeftCorner(d, d) = H.real();
  U.bottomRightCorner(d, d) = H.real();
  U.topRightCorner(d, d) = -H.imag();
  U.bottomLeftCorner(d, d) = H.imag();
  return U;
}

MatrixXcd extract_hermitian(const Eigen::MatrixXd& U) {
  const int d = static_cast<int>(U.rows()) / 2;
  Eigen::MatrixXd re =
      0.5 * (U.topLeftCorner(d, d) + U.bottomRightCorner(d, d));
  Eigen::MatrixXd im =
      0.5 * (U.bottomLeftCorner(d, d) - U.topRightCorner(d, d));
  re = 0.5 * (re + re.transpose()).eval();
  im = 0.5 * (im - im.transpose()).eval();
  MatrixXcd H(d, d);
  H.real() = re;
  H.imag() = im;
  return H;
}

LinExpr& LinExpr::add(int scalar_var, double coef) {
  scalars.emplace_back(scalar_var, coef);
  return *this;
}

LinExpr& LinExpr::add_trace(int psd_var, const MatrixXcd& C) {
  mats.emplace_back(psd_var, C);
  return *this;
}

LinExpr& LinExpr::operator+=(double v) {
  constant += v;
  return *this;
}

LinExpr scalar_expr(int var, double coef) {
  LinExpr e;
  e.add(var, coef);
  return e;
}

LinExpr const_expr(double v) {
  LinExpr e;
  e.constant = v;
  return e;
}

int ConicProgram::add_scalar(const std::string& name) {
  for (const auto& s : scalar_names_)
    if (s == name) throw std::invalid_argument("duplicate scalar: " + name);
  scalar_names_.push_back(name);
  return num_scalars() - 1;
}

int ConicProgram::add_hermitian_psd(const std::string& name, int d) {
  if (d < 1) throw std::invalid_argument("psd dimension must be >= 1");
  for (const auto& s : psd_names_)
    if (s == name) throw std::invalid_argument("duplicate psd var: " + name);
  psd_names_.push_back(name);
  psd_dims_.push_back(d);
  return num_psd() - 1;
}

void ConicProgram::add_linear(const LinExpr& expr, Sense sense) {
  rows_.push_back({expr, sense});
}

void ConicProgram::add_exp_ge(const LinExpr& affine, int scalar_var) {
  exp_rows_.push_back({affine, scalar_var});
}

void ConicProgram::set_objective_max(const LinExpr& expr) {
  objective_ = expr;
  objective_set_ = true;
}

int ConicProgram::num_linear() const { return static_cast<int>(rows_.size()); }

int ConicProgram::svec_offset(int handle) const {
  int off = num_scalars();
  for (int h = 0; h < handle; ++h) off += svec_len(2 * psd_dims_[h]);
  return off;
}

void ConicProgram::expr_coeffs(const LinExpr& e,
                               std::vector<Eigen::Triplet<double>>& trip,
                               int row, double scale) const {
  for (const auto& [var, coef] : e.scalars) {
    if (var < 0 || var >= num_scalars())
      throw std::invalid_argument("undeclared scalar variable");
    trip.emplace_back(row, var, scale * coef);
  }
  for (const auto& [h, C] : e.mats) {
    if (h < 0 || h >= num_psd())
      throw std::invalid_argument("undeclared psd variable");
    if (C.rows() != psd_dims_[h] || C.cols() != psd_dims_[h])
      throw std::invalid_argument("trace coefficient dimension mismatch");
    // Re tr(C F) = (1/2) svec(embed(C)) . svec(U)
    VectorXd w = 0.5 * svec(embed_hermitian(C));
    const int off = svec_offset(h);
    for (int i = 0; i < w.size(); ++i)
      if (w(i) != 0.0) trip.emplace_back(row, off + i, scale * w(i));
  }
}

void ConicProgram::assemble(SparseMat& A, VectorXd& b, VectorXd& c,
                            ConeLayout& cone) const {
  const int ns = num_scalars();
  int n = ns;
  for (int d : psd_dims_) n += svec_len(2 * d);

  // Structural equality rows tying each embedding to [[Re,-Im],[Im,Re]].
  int n_struct = 0;
  for (int d : psd_dims_) n_struct += d * (d + 1);
  int n_eq = 0, n_ineq = 0;
  for (const auto& r : rows_) (r.sense == Sense::Eq ? n_eq : n_ineq)++;

  cone = ConeLayout{};
  cone.n_zero = n_struct + n_eq;
  cone.n_nonneg = n_ineq;
  for (int d : psd_dims_) cone.psd_dims.push_back(2 * d);
  cone.n_exp = num_exp();
  const int m = cone.rows();

  std::vector<Eigen::Triplet<double>> trip;
  b = VectorXd::Zero(m);
  int row = 0;
  for (int h = 0; h < num_psd(); ++h) {
    const int d = psd_dims_[h];
    const int off = svec_offset(h);
    // U[i][j] = U[d+i][d+j] for i <= j
    for (int j = 0; j < d; ++j)
      for (int i = 0; i <= j; ++i) {
        trip.emplace_back(row, off + svec_idx(i, j), 1.0);
        trip.emplace_back(row, off + svec_idx(d + i, d + j), -1.0);
        ++row;
      }
    // antisymmetry of the off-diagonal block
    for (int j = 0; j < d; ++j)
      for (int i = 0; i <= j; ++i) {
        if (i == j) {
          trip.emplace_back(row, off + svec_idx(i, d + i), 1.0);
        } else {
          trip.emplace_back(row, off + svec_idx(i, d + j), 1.0);
          trip.emplace_back(row, off + svec_idx(j, d + i), 1.0);
        }
        ++row;
      }
  }
  for (const auto& r : rows_) {
    if (r.sense != Sense::Eq) continue;
    expr_coeffs(r.expr, trip, row, 1.0);
    b(row) = -r.expr.constant;
    ++row;
  }
  for (const auto& r : rows_) {
    if (r.sense == Sense::Eq) continue;
    const double scale = (r.sense == Sense::Le) ? 1.0 : -1.0;
    expr_coeffs(r.expr, trip, row, scale);
    b(row) = -scale * r.expr.constant;
    ++row;
  }
  // PSD membership: s = x_block
  for (int h = 0; h < num_psd(); ++h) {
    const int off = svec_offset(h);
    const int len = svec_len(2 * psd_dims_[h]);
    for (int i = 0; i < len; ++i) {
      trip.emplace_back(row, off + i, -1.0);
      ++row;
    }
  }
  // exp triples (eta, 1, affine)
  for (const auto& e : exp_rows_) {
    if (e.var < 0 || e.var >= ns)
      throw std::invalid_argument("undeclared exp-cone variable");
    trip.emplace_back(row, e.var, -1.0);
    ++row;             // s1 = eta
    b(row) = 1.0;
    ++row;             // s2 = 1
    expr_coeffs(e.affine, trip, row, -1.0);
    b(row) = e.affine.constant;
    ++row;             // s3 = affine
  }

  A.resize(m, n);
  A.setFromTriplets(trip.begin(), trip.end());

  c = VectorXd::Zero(n);
  if (objective_set_) {
    std::vector<Eigen::Triplet<double>> otrip;
    expr_coeffs(objective_, otrip, 0, -1.0);  // min -objective
    for (const auto& t : otrip) c(t.col()) += t.value();
  }
}

MatrixXcd ConicProgram::extract_psd(const VectorXd& x, int handle) const {
  const int D = 2 * psd_dims_[handle];
  return extract_hermitian(unsvec(x.segment(svec_offset(handle), svec_len(D)), D));
}

Solution ConicProgram::solve(const SolverOptions& opts) const {
  if (!objective_set_) throw std::runtime_error("objective not set");
  SparseMat A;
  VectorXd b, c;
  ConeLayout cone;
  assemble(A, b, c, cone);

  const auto t0 = std::chrono::steady_clock::now();
  ConeLpResult r = solve_cone_lp(A, b, c, cone, opts);
  const auto t1 = std::chrono::steady_clock::now();

  Solution sol;
  sol.status = r.status;
  sol.iterations = r.iterations;
  sol.solve_time_s = std::chrono::duration<double>(t1 - t0).count();
  sol.primal_res = r.primal_res;
  sol.dual_res = r.dual_res;
  sol.gap = r.gap;
  sol.scalars = VectorXd::Zero(num_scalars());
  sol.psd.assign(num_psd(), MatrixXcd());
  if (r.status == SolveStatus::Optimal || r.status == SolveStatus::Inaccurate) {
    sol.scalars = r.x.head(num_scalars());
    for (int h = 0; h < num_psd(); ++h) sol.psd[h] = extract_psd(r.x, h);
    sol.objective = objective_.constant - c.dot(r.x);
  } else {
    sol.message = to_string(r.status);
  }
  return sol;
}

void ConicProgram::dump(std::ostream& os) const {
  SparseMat A;
  VectorXd b, c;
  ConeLayout cone;
  assemble(A, b, c, cone);
  os.precision(17);
  os << "conelp rows " << A.rows() << " cols " << A.cols() << "\n";
  os << "zero " << cone.n_zero << " nonneg " << cone.n_nonneg << " psd";
  for (int D : cone.psd_dims) os << ' ' << D;
  os << " exp " << cone.n_exp << "\n";
  os << "A " << A.nonZeros() << "\n";
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << "\n";
  os << "b\n";
  for (int i = 0; i < b.size(); ++i) os << b(i) << "\n";
  os << "c\n";
  for (int i = 0; i < c.size(); ++i) os << c(i) << "\n";
}

}  // namespace satnet
