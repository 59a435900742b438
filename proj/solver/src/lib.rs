//! C ABI wrapper around the Clarabel interior-point solver for cone LPs
//!   minimize  q'x  subject to  Ax + s = b,  s in K
//! with K an ordered product of zero, nonnegative, PSD-triangle and
//! exponential cones.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

#[repr(C)]
pub struct SatnetSolveInfo {
    pub status: i32,
    pub obj_val: f64,
    pub iterations: u32,
    pub solve_time: f64,
}

pub const STATUS_SOLVED: i32 = 0;
pub const STATUS_ALMOST_SOLVED: i32 = 1;
pub const STATUS_PRIMAL_INFEASIBLE: i32 = 2;
pub const STATUS_DUAL_INFEASIBLE: i32 = 3;
pub const STATUS_MAX_ITERATIONS: i32 = 4;
pub const STATUS_NUMERICAL_ERROR: i32 = 5;
pub const STATUS_SETUP_ERROR: i32 = 6;

/// # Safety
/// All pointers must reference buffers of the documented sizes:
/// colptr n+1, rowval/nzval nnz, b m, q n, psd_dims n_psd,
/// x_out n, z_out m, s_out m.
#[no_mangle]
pub unsafe extern "C" fn satnet_clarabel_solve(
    m: usize,
    n: usize,
    colptr: *const usize,
    rowval: *const usize,
    nzval: *const f64,
    nnz: usize,
    b: *const f64,
    q: *const f64,
    n_zero: usize,
    n_nonneg: usize,
    psd_dims: *const usize,
    n_psd: usize,
    n_exp: usize,
    eps: f64,
    max_iter: u32,
    verbose: i32,
    x_out: *mut f64,
    z_out: *mut f64,
    s_out: *mut f64,
    info: *mut SatnetSolveInfo,
) -> i32 {
    let colptr = std::slice::from_raw_parts(colptr, n + 1).to_vec();
    let rowval = std::slice::from_raw_parts(rowval, nnz).to_vec();
    let nzval = std::slice::from_raw_parts(nzval, nnz).to_vec();
    let b = std::slice::from_raw_parts(b, m).to_vec();
    let q = std::slice::from_raw_parts(q, n).to_vec();
    let psd = std::slice::from_raw_parts(psd_dims, n_psd);

    let a = CscMatrix::new(m, n, colptr, rowval, nzval);
    let p = CscMatrix::<f64>::zeros((n, n));

    let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
    if n_zero > 0 {
        cones.push(SupportedConeT::ZeroConeT(n_zero));
    }
    if n_nonneg > 0 {
        cones.push(SupportedConeT::NonnegativeConeT(n_nonneg));
    }
    for &d in psd {
        cones.push(SupportedConeT::PSDTriangleConeT(d));
    }
    for _ in 0..n_exp {
        cones.push(SupportedConeT::ExponentialConeT());
    }

    let settings = DefaultSettings::<f64> {
        verbose: verbose != 0,
        max_iter,
        tol_gap_abs: eps,
        tol_gap_rel: eps,
        tol_feas: eps,
        ..DefaultSettings::default()
    };

    let mut solver = match DefaultSolver::new(&p, &q, &a, &b, &cones, settings) {
        Ok(s) => s,
        Err(_) => {
            (*info).status = STATUS_SETUP_ERROR;
            return -1;
        }
    };
    solver.solve();

    let sol = &solver.solution;
    let xo = std::slice::from_raw_parts_mut(x_out, n);
    let zo = std::slice::from_raw_parts_mut(z_out, m);
    let so = std::slice::from_raw_parts_mut(s_out, m);
    xo.copy_from_slice(&sol.x);
    zo.copy_from_slice(&sol.z);
    so.copy_from_slice(&sol.s);

    (*info).obj_val = sol.obj_val;
    (*info).iterations = solver.info.iterations;
    (*info).solve_time = solver.info.solve_time;
    (*info).status = match sol.status {
        SolverStatus::Solved => STATUS_SOLVED,
        SolverStatus::AlmostSolved => STATUS_ALMOST_SOLVED,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            STATUS_PRIMAL_INFEASIBLE
        }
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
            STATUS_DUAL_INFEASIBLE
        }
        SolverStatus::MaxIterations | SolverStatus::MaxTime => STATUS_MAX_ITERATIONS,
        _ => STATUS_NUMERICAL_ERROR,
    };
    0
}
