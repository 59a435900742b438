#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <vector>

#include "satnet/conic.hpp"

// C ABI of the interior-point core (solver/src/lib.rs).
extern "C" {

struct SatnetSolveInfo {
  int status;
  double obj_val;
  unsigned iterations;
  double solve_time;
};

int satnet_clarabel_solve(
    std::size_t m, std::size_t n, const std::size_t* colptr,
    const std::size_t* rowval, const double* nzval, std::size_t nnz,
    const double* b, const double* q, std::size_t n_zero, std::size_t n_nonneg,
    const std::size_t* psd_dims, std::size_t n_psd, std::size_t n_exp,
    double eps, unsigned max_iter, int verbose, double* x_out, double* z_out,
    double* s_out, SatnetSolveInfo* info);

// Keeps the dense-linear-algebra backend single threaded: the PSD blocks are
// small, and concurrent solves parallelize at the instance level instead.
void openblas_set_num_threads(int);

}  // extern "C"

namespace satnet {

namespace {

// Status codes returned by the core (see solver/src/lib.rs).
constexpr int kSolved = 0;
constexpr int kAlmostSolved = 1;
constexpr int kPrimalInfeasible = 2;
constexpr int kDualInfeasible = 3;
constexpr int kMaxIterations = 4;

void configure_blas_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { openblas_set_num_threads(1); });
}

}  // namespace

ConeLpResult solve_cone_lp(const SparseMat& A, const VectorXd& b,
                           const VectorXd& c, const ConeLayout& cone,
                           const SolverOptions& opts) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  ConeLpResult res;
  res.x = VectorXd::Zero(n);
  res.y = VectorXd::Zero(m);
  res.s = VectorXd::Zero(m);
  if (m == 0 || n == 0 || b.size() != m || c.size() != n ||
      cone.rows() != m) {
    res.status = SolveStatus::Error;
    return res;
  }
  configure_blas_once();

  SparseMat Ac = A;
  Ac.makeCompressed();
  const int nnz = static_cast<int>(Ac.nonZeros());
  std::vector<std::size_t> colptr(n + 1), rowval(nnz);
  for (int j = 0; j <= n; ++j)
    colptr[j] = static_cast<std::size_t>(Ac.outerIndexPtr()[j]);
  for (int k = 0; k < nnz; ++k)
    rowval[k] = static_cast<std::size_t>(Ac.innerIndexPtr()[k]);
  std::vector<std::size_t> psd(cone.psd_dims.begin(), cone.psd_dims.end());

  SatnetSolveInfo info{};
  const int rc = satnet_clarabel_solve(
      m, n, colptr.data(), rowval.data(), Ac.valuePtr(), nnz, b.data(),
      c.data(), cone.n_zero, cone.n_nonneg, psd.data(), psd.size(), cone.n_exp,
      opts.eps, static_cast<unsigned>(std::max(opts.max_iters, 1)),
      opts.verbose ? 1 : 0, res.x.data(), res.y.data(), res.s.data(), &info);
  res.iterations = static_cast<int>(info.iterations);
  if (rc != 0) {
    res.status = SolveStatus::Error;
    return res;
  }

  // Residuals of min c'x s.t. Ax + s = b, s in K against the original data.
  res.primal_res = (Ac * res.x + res.s - b).norm() / (1.0 + b.norm());
  res.dual_res = (SparseMat(Ac.transpose()) * res.y + c).norm() / (1.0 + c.norm());
  const double pobj = c.dot(res.x), dobj = -b.dot(res.y);
  res.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

  switch (info.status) {
    case kSolved:
      res.status = SolveStatus::Optimal;
      break;
    case kAlmostSolved:
      res.status = SolveStatus::Inaccurate;
      break;
    case kPrimalInfeasible:
      res.status = SolveStatus::Infeasible;
      break;
    case kDualInfeasible:
      res.status = SolveStatus::Unbounded;
      break;
    case kMaxIterations:
    default:
      // Stalled runs still count as usable when the returned point is close
      // to feasibility and complementarity; otherwise surface an error.
      res.status = (res.primal_res < 1e-5 && res.dual_res < 1e-5 &&
                    res.gap < 1e-4)
                       ? SolveStatus::Inaccurate
                       : SolveStatus::Error;
      break;
  }
  return res;
}

}  // namespace satnet
