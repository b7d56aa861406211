//! Solving the nonhomogeneous problem two ways: Green's-function summation,
//! and a dense linear system assembled from the operator definitions. The
//! dense route is the brute-force oracle the rest of the crate is checked
//! against.
//!
//! Unknown ordering is `u(a), u(a+1), ..., u(b)`. Rows are the difference
//! equation at `t = a+2, ..., b`, then the left boundary condition, then the
//! right one. The boundary-value operator acts on functions that include the
//! base point, which shows up in two places beyond the plain fractional
//! difference weights:
//!
//! * each interior row carries the coefficient `H_{-nu}(t, a)` on `u(a)`
//!   (the operator is the first difference of the `(nu-1)`-order difference,
//!   so the base value enters through the inner first difference), and
//! * the left boundary row carries `(beta - alpha) h(a+1)` on its right-hand
//!   side, which is exactly the boundary behavior of the solution operator's
//!   first column.
//!
//! With both in place the dense solution operator and the Green's-function
//! summation agree to roundoff, column by column.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::green::{self, Problem};
use crate::monomials::monomial_run;

/// Relative pivot threshold below which a factorization is singular.
pub const PIVOT_RELATIVE_THRESHOLD: f64 = 1e-13;

/// A boundary value problem instance: the problem plus its forcing on
/// offsets `1..=n`. Only offsets `2..=n` enter the difference equation; the
/// offset-1 value enters through the left boundary row.
#[derive(Clone, Debug)]
pub struct BvpInstance {
    problem: Problem,
    forcing: GridFunction,
}

impl BvpInstance {
    pub fn new(problem: Problem, forcing: GridFunction) -> Result<Self> {
        if forcing.grid() != problem.grid() {
            return Err(Error::domain("forcing grid does not match problem grid"));
        }
        if forcing.start_offset() != 1 {
            return Err(Error::domain(format!(
                "forcing must start at offset 1, got {}",
                forcing.start_offset()
            )));
        }
        Ok(BvpInstance { problem, forcing })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn forcing(&self) -> &GridFunction {
        &self.forcing
    }
}

/// Dense square matrix in row-major storage.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_max_abs(&self, i: usize) -> f64 {
        self.row(i).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// The assembled system `matrix * u = rhs` with the grid it came from.
#[derive(Clone, Debug)]
pub struct DenseSystem {
    grid: Grid,
    matrix: DenseMatrix,
    rhs: Vec<f64>,
}

impl DenseSystem {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Number of unknowns, `n + 1`.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Grid offset whose difference equation sits in interior row `i`.
    pub fn interior_t(i: usize) -> usize {
        i + 2
    }

    pub fn interior_rows(&self) -> usize {
        self.dim().saturating_sub(2)
    }
}

/// Assemble the dense system for an instance.
pub fn assemble_dense(instance: &BvpInstance) -> DenseSystem {
    let problem = instance.problem();
    let n = problem.span();
    let nu = problem.nu();
    let bc = problem.bc();
    let h = instance.forcing();
    let mut m = DenseMatrix::zeros(n + 1);
    let mut rhs = vec![0.0; n + 1];

    // interior rows: -(nabla^nu u)(t) = h(t) for t = 2..=n
    let base_kernel = monomial_run(-nu, n);
    for t in 2..=n {
        let i = t - 2;
        let w = crate::calculus::frac_diff_weights(nu, t).expect("validated order and offset");
        for k in 1..=t {
            m.set(i, k, -w.coefficient(k));
        }
        m.set(i, 0, base_kernel[t]);
        rhs[i] = h.value(t);
    }

    // left boundary row: alpha u(a+1) - beta (nabla u)(a+1) = (beta-alpha) h(a+1)
    m.set(n - 1, 0, bc.beta);
    m.set(n - 1, 1, bc.alpha - bc.beta);
    rhs[n - 1] = (bc.beta - bc.alpha) * h.value(1);

    // right boundary row: gamma u(b) + delta (nabla u)(b) = 0
    m.set(n, n, bc.gamma + bc.delta);
    m.set(n, n - 1, -bc.delta);

    DenseSystem {
        grid: problem.grid(),
        matrix: m,
        rhs,
    }
}

/// LU factorization with scaled partial pivoting.
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
    perm_sign: i8,
    pivots: Vec<f64>,
    /// Max-abs of the original row that supplied each pivot.
    pivot_row_scales: Vec<f64>,
}

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Self {
        let dim = a.dim();
        let mut lu = a.clone();
        let scales: Vec<f64> = (0..dim).map(|i| a.row_max_abs(i)).collect();
        let mut perm: Vec<usize> = (0..dim).collect();
        let mut perm_sign = 1i8;
        let mut pivots = Vec::with_capacity(dim);
        let mut pivot_row_scales = Vec::with_capacity(dim);

        for k in 0..dim {
            let mut best = k;
            let mut best_val = -1.0;
            for r in k..dim {
                let s = scales[perm[r]];
                let ratio = if s > 0.0 { lu.at(r, k).abs() / s } else { 0.0 };
                if ratio > best_val {
                    best_val = ratio;
                    best = r;
                }
            }
            if best != k {
                for j in 0..dim {
                    let (x, y) = (lu.at(k, j), lu.at(best, j));
                    lu.set(k, j, y);
                    lu.set(best, j, x);
                }
                perm.swap(k, best);
                perm_sign = -perm_sign;
            }
            let pivot = lu.at(k, k);
            pivots.push(pivot);
            pivot_row_scales.push(scales[perm[k]]);
            if pivot != 0.0 {
                for r in (k + 1)..dim {
                    let factor = lu.at(r, k) / pivot;
                    lu.set(r, k, factor);
                    for j in (k + 1)..dim {
                        lu.set(r, j, lu.at(r, j) - factor * lu.at(k, j));
                    }
                }
            }
        }
        LuFactors {
            lu,
            perm,
            perm_sign,
            pivots,
            pivot_row_scales,
        }
    }

    /// True when some pivot falls below the relative threshold of its row.
    pub fn is_singular(&self) -> bool {
        self.pivots
            .iter()
            .zip(&self.pivot_row_scales)
            .any(|(p, s)| p.abs() < PIVOT_RELATIVE_THRESHOLD * s.max(f64::MIN_POSITIVE))
    }

    /// Determinant as `(sign, ln |det|)`; sign 0 for an exactly zero pivot.
    pub fn signed_log_det(&self) -> (i8, f64) {
        let mut sign = self.perm_sign;
        let mut log = 0.0;
        for &p in &self.pivots {
            if p == 0.0 {
                return (0, f64::NEG_INFINITY);
            }
            if p < 0.0 {
                sign = -sign;
            }
            log += p.abs().ln();
        }
        (sign, log)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if self.is_singular() {
            let worst = self
                .pivots
                .iter()
                .zip(&self.pivot_row_scales)
                .map(|(p, s)| p.abs() / s.max(f64::MIN_POSITIVE))
                .fold(f64::INFINITY, f64::min);
            return Err(Error::SingularSystem(format!(
                "pivot ratio {worst:.3e} below threshold {PIVOT_RELATIVE_THRESHOLD:.0e}"
            )));
        }
        let dim = self.lu.dim();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for k in 0..dim {
            for j in 0..k {
                x[k] -= self.lu.at(k, j) * x[j];
            }
        }
        for k in (0..dim).rev() {
            for j in (k + 1)..dim {
                x[k] -= self.lu.at(k, j) * x[j];
            }
            x[k] /= self.lu.at(k, k);
        }
        Ok(x)
    }
}

/// Solution of a dense system together with its reported residual
/// `max |A x - b| / max |b|`.
#[derive(Clone, Debug)]
pub struct DenseSolution {
    pub solution: GridFunction,
    pub residual: f64,
}

/// Factor-and-substitute with partial pivoting.
pub fn solve_dense(system: &DenseSystem) -> Result<DenseSolution> {
    let factors = LuFactors::factor(system.matrix());
    let x = factors.solve(system.rhs())?;
    let ax = system.matrix().mul_vec(&x);
    let bnorm = system.rhs().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let rnorm = ax
        .iter()
        .zip(system.rhs())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let residual = if bnorm > 0.0 { rnorm / bnorm } else { rnorm };
    Ok(DenseSolution {
        solution: GridFunction::new(system.grid(), 0, x)?,
        residual,
    })
}

/// Solve by summation against the Green's function:
/// `u(t) = sum_s G(t, s) h(s)` over `s = 1..=n`, on offsets `0..=n`.
pub fn solve_via_green(instance: &BvpInstance) -> Result<GridFunction> {
    let problem = instance.problem();
    let table = green::green_table(problem)?;
    let n = problem.span();
    let h = instance.forcing();
    let values: Vec<f64> = (0..=n)
        .map(|t| (1..=n).map(|s| table.entry(t, s) * h.value(s)).sum())
        .collect();
    GridFunction::new(problem.grid(), 0, values)
}

/// Per-row defect of a candidate solution against the assembled system.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub interior_max: f64,
    pub left_bc: f64,
    pub right_bc: f64,
    pub max: f64,
}

/// Maximum absolute defect of `u` over the interior equations and the two
/// boundary rows.
pub fn residual(instance: &BvpInstance, u: &GridFunction) -> Result<ResidualReport> {
    let n = instance.problem().span();
    if u.start_offset() != 0 {
        return Err(Error::domain("residual expects a solution on offsets 0..=n"));
    }
    let system = assemble_dense(instance);
    let defect: Vec<f64> = system
        .matrix()
        .mul_vec(u.values())
        .iter()
        .zip(system.rhs())
        .map(|(a, b)| (a - b).abs())
        .collect();
    let interior_max = defect[..n - 1].iter().fold(0.0_f64, |m, v| m.max(*v));
    let left_bc = defect[n - 1];
    let right_bc = defect[n];
    Ok(ResidualReport {
        interior_max,
        left_bc,
        right_bc,
        max: interior_max.max(left_bc).max(right_bc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::{green_table, BoundaryParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(nu: f64, n: usize, bc: (f64, f64, f64, f64)) -> Problem {
        let grid = Grid::new(0.0, n).unwrap();
        let bc = BoundaryParams::new(bc.0, bc.1, bc.2, bc.3).unwrap();
        Problem::new(grid, nu, bc).unwrap()
    }

    fn instance(p: Problem, h: Vec<f64>) -> BvpInstance {
        let forcing = GridFunction::new(p.grid(), 1, h).unwrap();
        BvpInstance::new(p, forcing).unwrap()
    }

    #[test]
    fn lu_solves_identity() {
        let mut m = DenseMatrix::zeros(4);
        for i in 0..4 {
            m.set(i, i, 1.0);
        }
        let f = LuFactors::factor(&m);
        assert!(!f.is_singular());
        let x = f.solve(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0, 4.0]);
        let (sign, log) = f.signed_log_det();
        assert_eq!(sign, 1);
        assert!(log.abs() < 1e-15);
    }

    #[test]
    fn lu_detects_singular() {
        let mut m = DenseMatrix::zeros(3);
        m.set(0, 0, 1.0);
        m.set(0, 1, 2.0);
        m.set(1, 0, 2.0);
        m.set(1, 1, 4.0);
        m.set(2, 2, 1.0);
        let f = LuFactors::factor(&m);
        assert!(f.is_singular());
        assert!(matches!(
            f.solve(&[1.0, 1.0, 1.0]),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn lu_determinant_tracks_sign() {
        let mut m = DenseMatrix::zeros(2);
        m.set(0, 0, 0.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 0.0);
        let (sign, log) = LuFactors::factor(&m).signed_log_det();
        assert_eq!(sign, -1);
        assert!(log.abs() < 1e-15);
    }

    #[test]
    fn zero_forcing_gives_zero_solution() {
        let p = problem(1.5, 8, (1.0, 2.0, 1.0, 1.0));
        let inst = instance(p, vec![0.0; 8]);
        let u = solve_via_green(&inst).unwrap();
        assert!(u.values().iter().all(|&v| v == 0.0));
        let d = solve_dense(&assemble_dense(&inst)).unwrap();
        assert!(d.solution.values().iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn impulse_forcing_reproduces_green_columns() {
        let p = problem(1.4, 9, (1.0, 2.0, 1.0, 1.0));
        let table = green_table(&p).unwrap();
        for s0 in 1..=9usize {
            let h: Vec<f64> = (1..=9).map(|s| if s == s0 { 1.0 } else { 0.0 }).collect();
            let inst = instance(p, h);
            let ug = solve_via_green(&inst).unwrap();
            let ud = solve_dense(&assemble_dense(&inst)).unwrap().solution;
            let col = table.column(s0);
            for t in 0..=9 {
                assert!((ug.value(t) - col[t]).abs() < 1e-12);
                assert!(
                    (ud.value(t) - col[t]).abs() < 1e-8 * col[t].abs().max(1.0),
                    "s0={s0} t={t}: dense {} vs column {}",
                    ud.value(t),
                    col[t]
                );
            }
        }
    }

    #[test]
    fn dense_matches_green_on_random_forcing() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p = problem(1.4, 20, (1.0, 2.0, 1.0, 1.0));
        for _ in 0..10 {
            let h: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
            let inst = instance(p, h);
            let ug = solve_via_green(&inst).unwrap();
            let ud = solve_dense(&assemble_dense(&inst)).unwrap().solution;
            let denom = ud.max_abs().max(1.0);
            for t in 0..=20 {
                assert!((ug.value(t) - ud.value(t)).abs() / denom < 1e-8);
            }
        }
    }

    #[test]
    fn superposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = problem(1.6, 12, (0.5, 1.5, 1.0, 0.5));
        let h1: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
        let h2: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c = 1.75;
        let combo: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + c * b).collect();
        let u1 = solve_via_green(&instance(p, h1)).unwrap();
        let u2 = solve_via_green(&instance(p, h2)).unwrap();
        let uc = solve_via_green(&instance(p, combo)).unwrap();
        for t in 0..=12 {
            let want = u1.value(t) + c * u2.value(t);
            assert!((uc.value(t) - want).abs() <= 1e-10 * want.abs().max(1.0));
        }
    }

    #[test]
    fn singular_parameters_are_reported() {
        // alpha = 0, gamma = 0 makes xi = 0 and the dense system singular
        let p = problem(1.4, 6, (0.0, 1.0, 0.0, 1.0));
        let inst = instance(p, vec![1.0; 6]);
        let system = assemble_dense(&inst);
        let factors = LuFactors::factor(system.matrix());
        let (_, logdet) = factors.signed_log_det();
        let log_scale: f64 = (0..system.dim())
            .map(|i| system.matrix().row_max_abs(i).ln())
            .sum();
        assert!(logdet - log_scale < (1e-10_f64).ln());
        assert!(matches!(
            solve_dense(&system),
            Err(Error::SingularSystem(_))
        ));
        assert!(matches!(
            solve_via_green(&inst),
            Err(Error::SingularProblem(_))
        ));
    }

    #[test]
    fn near_integer_order_rows_become_stencil() {
        let p = problem(2.0 - 1e-6, 6, (1.0, 1.0, 1.0, 0.0));
        let system = assemble_dense(&instance(p, vec![0.0; 6]));
        for i in 0..system.interior_rows() {
            let t = DenseSystem::interior_t(i);
            let row = system.matrix().row(i);
            // -(stencil): -1, +2, -1 on the last three offsets
            assert!((row[t] + 1.0).abs() < 1e-5, "row {i}: {:?}", row);
            assert!((row[t - 1] - 2.0).abs() < 1e-5);
            assert!((row[t - 2] + 1.0).abs() < 1e-5);
            for (j, &v) in row.iter().enumerate().take(t.saturating_sub(2)) {
                assert!(v.abs() < 1e-4, "row {i} col {j}");
            }
        }
    }

    #[test]
    fn residual_of_green_solution_is_tiny() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = problem(1.3, 15, (1.0, 2.0, 1.0, 1.0));
        let h: Vec<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
        let hnorm = h.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let inst = instance(p, h);
        let u = solve_via_green(&inst).unwrap();
        let report = residual(&inst, &u).unwrap();
        assert!(report.max <= 1e-8 * hnorm, "residual {}", report.max);

        // zero solution of the zero problem has an exactly zero residual
        let zero_inst = instance(p, vec![0.0; 15]);
        let zero = GridFunction::constant(p.grid(), 0, 0.0).unwrap();
        assert_eq!(residual(&zero_inst, &zero).unwrap().max, 0.0);

        // perturbing one value grows the defect linearly
        let mut vals = u.values().to_vec();
        vals[7] += 1e-3;
        let perturbed = GridFunction::new(p.grid(), 0, vals).unwrap();
        let r1 = residual(&inst, &perturbed).unwrap().max;
        let mut vals = u.values().to_vec();
        vals[7] += 2e-3;
        let perturbed = GridFunction::new(p.grid(), 0, vals).unwrap();
        let r2 = residual(&inst, &perturbed).unwrap().max;
        assert!((r2 / r1 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn dense_solution_reports_small_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = problem(1.7, 25, (1.0, 3.0, 2.0, 1.0));
        let h: Vec<f64> = (0..25).map(|_| rng.random_range(-1.0..1.0)).collect();
        let out = solve_dense(&assemble_dense(&instance(p, h))).unwrap();
        assert!(out.residual <= 1e-10);
    }

    #[test]
    fn instance_validation() {
        let p = problem(1.5, 4, (1.0, 2.0, 1.0, 1.0));
        let wrong_start = GridFunction::constant(p.grid(), 0, 1.0).unwrap();
        assert!(BvpInstance::new(p, wrong_start).is_err());
        let other_grid = Grid::new(0.0, 5).unwrap();
        let wrong_grid = GridFunction::constant(other_grid, 1, 1.0).unwrap();
        assert!(BvpInstance::new(p, wrong_grid).is_err());
    }
}
