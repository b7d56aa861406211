//! The Lyapunov-type necessary condition: if the q-perturbed problem admits
//! a nontrivial solution, then `sum |q| > 1 / Omega`.
//!
//! Nontrivial solutions are detected through the scaled determinant of the
//! q-perturbed dense system, and constant eigenpotentials are located by
//! bisecting a determinant sign change.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::green::{omega, Problem};
use crate::solver::{assemble_dense, BvpInstance, DenseMatrix, DenseSystem, LuFactors};

/// Relative determinant threshold for declaring the perturbed system
/// singular (a nontrivial solution exists).
pub const DET_RELATIVE_THRESHOLD: f64 = 1e-10;

/// Bisection terminates when the bracket width drops below this.
pub const BISECTION_WIDTH: f64 = 1e-10;

/// A potential `q` on offsets `1..=n`.
#[derive(Clone, Debug)]
pub struct Potential {
    values: GridFunction,
}

impl Potential {
    pub fn new(values: GridFunction) -> Result<Self> {
        if values.start_offset() != 1 {
            return Err(Error::domain(format!(
                "potential must start at offset 1, got {}",
                values.start_offset()
            )));
        }
        Ok(Potential { values })
    }

    pub fn constant(grid: Grid, value: f64) -> Result<Self> {
        Self::new(GridFunction::constant(grid, 1, value)?)
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    /// `sum_{s=a+1}^{b} |q(s)|`.
    pub fn l1_norm(&self) -> f64 {
        self.values.values().iter().map(|v| v.abs()).sum()
    }
}

/// Outcome of testing one potential against the threshold.
#[derive(Clone, Copy, Debug)]
pub struct LyapunovVerdict {
    pub l1_norm: f64,
    pub threshold: f64,
    pub nontrivial_solution_exists: bool,
    pub inequality_holds: bool,
}

/// The threshold `1 / Omega`; requires theorem-mode hypotheses.
pub fn lyapunov_threshold(problem: &Problem) -> Result<f64> {
    let om = omega(problem)?;
    if !(om > 0.0) || !om.is_finite() {
        return Err(Error::HypothesisViolation(format!(
            "Omega = {om} is not positive finite"
        )));
    }
    Ok(1.0 / om)
}

fn zero_instance(problem: &Problem) -> BvpInstance {
    let forcing = GridFunction::constant(problem.grid(), 1, 0.0).expect("valid span");
    BvpInstance::new(*problem, forcing).expect("matching grid")
}

/// The homogeneous dense matrix with `q(t)` subtracted from the diagonal
/// entry of each interior row (the difference-equation form of
/// `(nabla^nu u)(t) + q(t) u(t) = 0`).
fn perturbed_matrix(base: &DenseSystem, q: impl Fn(usize) -> f64) -> DenseMatrix {
    let mut m = base.matrix().clone();
    for i in 0..base.interior_rows() {
        let t = DenseSystem::interior_t(i);
        m.set(i, t, m.at(i, t) - q(t));
    }
    m
}

/// Scaled log-determinant: `(sign, ln|det| - sum ln(row max))`.
fn scaled_log_det(m: &DenseMatrix) -> (i8, f64) {
    let (sign, log_det) = LuFactors::factor(m).signed_log_det();
    if sign == 0 {
        return (0, f64::NEG_INFINITY);
    }
    let log_scale: f64 = (0..m.dim())
        .map(|i| m.row_max_abs(i).max(f64::MIN_POSITIVE).ln())
        .sum();
    (sign, log_det - log_scale)
}

fn is_singular_margin(margin: f64) -> bool {
    margin < DET_RELATIVE_THRESHOLD.ln()
}

/// Test a potential: scaled determinant for nontrivial-solution detection,
/// l1 norm, and the inequality verdict.
///
/// The necessity theorem promises `nontrivial_solution_exists` implies
/// `inequality_holds`; callers treat the contrary pair as a failure.
pub fn evaluate_potential(problem: &Problem, q: &Potential) -> Result<LyapunovVerdict> {
    let threshold = lyapunov_threshold(problem)?;
    if q.values().grid() != problem.grid() {
        return Err(Error::domain("potential grid does not match problem grid"));
    }
    let base = assemble_dense(&zero_instance(problem));
    let m = perturbed_matrix(&base, |t| q.values().value(t));
    let (sign, margin) = scaled_log_det(&m);
    let nontrivial = sign == 0 || is_singular_margin(margin);
    let l1 = q.l1_norm();
    Ok(LyapunovVerdict {
        l1_norm: l1,
        threshold,
        nontrivial_solution_exists: nontrivial,
        inequality_holds: l1 > threshold,
    })
}

/// Default search bracket for constant eigenpotentials.
pub fn default_bracket(problem: &Problem) -> (f64, f64) {
    let n = problem.span() as f64;
    (0.0, 10.0 * n.powf(problem.nu()))
}

/// Bisect a determinant sign change over `[search_min, search_max]` down to
/// a bracket of width [`BISECTION_WIDTH`]; the returned constant potential
/// makes the homogeneous problem admit a nontrivial solution.
pub fn find_constant_eigenpotential(
    problem: &Problem,
    search_min: f64,
    search_max: f64,
) -> Result<f64> {
    if !(search_min.is_finite() && search_max.is_finite() && search_min < search_max) {
        return Err(Error::domain(format!(
            "invalid bracket [{search_min}, {search_max}]"
        )));
    }
    let base = assemble_dense(&zero_instance(problem));
    let sign_at = |lam: f64| scaled_log_det(&perturbed_matrix(&base, |_| lam)).0;
    bisect(&sign_at, search_min, search_max)
}

fn bisect(sign_at: &impl Fn(f64) -> i8, mut lo: f64, mut hi: f64) -> Result<f64> {
    let s_lo = sign_at(lo);
    let s_hi = sign_at(hi);
    if s_lo == 0 {
        return Ok(lo);
    }
    if s_hi == 0 {
        return Ok(hi);
    }
    if s_lo == s_hi {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..200 {
        if hi - lo < BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match sign_at(mid) {
            0 => return Ok(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locate the smallest constant eigenpotential by scanning the default
/// bracket geometrically for the first determinant sign change, then
/// bisecting it.
///
/// Errors with `NoSignChange` when the determinant keeps one sign over the
/// whole bracket. That happens for genuinely vacuous instances (a span-2
/// grid with a right Dirichlet condition pins the only interior diagonal to
/// zero, so no constant potential makes the problem singular).
pub fn locate_eigenpotential(problem: &Problem) -> Result<f64> {
    let threshold = lyapunov_threshold(problem)?;
    let (_, cap) = default_bracket(problem);
    let base = assemble_dense(&zero_instance(problem));
    let sign_at = |lam: f64| scaled_log_det(&perturbed_matrix(&base, |_| lam)).0;
    let s0 = sign_at(0.0);
    if s0 == 0 {
        return Ok(0.0);
    }
    // first sign change cannot sit below threshold / n by the necessity
    // theorem, so start the scan just under it
    let mut lam = 0.1 * threshold / problem.span() as f64;
    let mut prev = 0.0;
    while lam <= cap {
        if sign_at(lam) != s0 {
            return bisect(&sign_at, prev, lam);
        }
        prev = lam;
        lam *= 1.3;
    }
    Err(Error::NoSignChange { lo: 0.0, hi: cap })
}

/// True when the constant-potential determinant does not depend on the
/// potential at all, so no constant eigenpotential exists.
pub fn constant_potential_is_vacuous(problem: &Problem) -> bool {
    let base = assemble_dense(&zero_instance(problem));
    let d0 = scaled_log_det(&perturbed_matrix(&base, |_| 0.0));
    let (_, cap) = default_bracket(problem);
    let d1 = scaled_log_det(&perturbed_matrix(&base, |_| cap));
    d0.0 == d1.0 && (d0.1 - d1.1).abs() < 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::BoundaryParams;
    use crate::monomials::monomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(nu: f64, n: usize, bc: (f64, f64, f64, f64)) -> Problem {
        let grid = Grid::new(0.0, n).unwrap();
        let bc = BoundaryParams::new(bc.0, bc.1, bc.2, bc.3).unwrap();
        Problem::new(grid, nu, bc).unwrap()
    }

    #[test]
    fn threshold_examples() {
        let p = problem(1.5, 6, (0.0, 1.0, 1.0, 0.0));
        let want = 1.0 / monomial(0.5, 6, 0).unwrap();
        assert!((lyapunov_threshold(&p).unwrap() - want).abs() < 1e-14);

        let p = problem(1.5, 10, (1.0, 2.0, 1.0, 1.0));
        let thr = lyapunov_threshold(&p).unwrap();
        assert!(thr.is_finite() && thr > 0.0);
        let (max_g, _) = crate::green::green_table(&p).unwrap().max_entry();
        assert!(thr < 1.0 / max_g);

        let bad = problem(1.5, 6, (2.0, 1.0, 1.0, 1.0));
        assert!(matches!(
            lyapunov_threshold(&bad),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn zero_potential_is_trivial() {
        let p = problem(1.5, 8, (1.0, 2.0, 1.0, 1.0));
        let q = Potential::constant(p.grid(), 0.0).unwrap();
        let verdict = evaluate_potential(&p, &q).unwrap();
        assert!(!verdict.nontrivial_solution_exists);
        assert!(!verdict.inequality_holds);
        assert_eq!(verdict.l1_norm, 0.0);
    }

    #[test]
    fn located_eigenpotential_witnesses_the_inequality() {
        let p = problem(1.5, 10, (1.0, 2.0, 1.0, 1.0));
        let lam = find_constant_eigenpotential(&p, 0.0, 50.0).unwrap();
        assert!(lam > 0.0);
        let thr = lyapunov_threshold(&p).unwrap();
        assert!(10.0 * lam > thr);

        let q = Potential::constant(p.grid(), lam).unwrap();
        let verdict = evaluate_potential(&p, &q).unwrap();
        assert!(verdict.nontrivial_solution_exists);
        assert!(verdict.inequality_holds);

        // a millionth to either side the system is comfortably regular
        for eps in [1e-6, -1e-6] {
            let q = Potential::constant(p.grid(), lam + eps).unwrap();
            let verdict = evaluate_potential(&p, &q).unwrap();
            assert!(!verdict.nontrivial_solution_exists, "eps={eps}");
        }
    }

    #[test]
    fn no_sign_change_is_reported() {
        let p = problem(1.5, 10, (1.0, 2.0, 1.0, 1.0));
        assert!(matches!(
            find_constant_eigenpotential(&p, 0.0, 1e-6),
            Err(Error::NoSignChange { .. })
        ));
        assert!(find_constant_eigenpotential(&p, 5.0, 1.0).is_err());
    }

    #[test]
    fn locate_agrees_with_bracketed_search() {
        let p = problem(1.5, 10, (1.0, 2.0, 1.0, 1.0));
        let a = locate_eigenpotential(&p).unwrap();
        let b = find_constant_eigenpotential(&p, 0.0, 50.0).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn eigenpotential_shrinks_as_grid_grows() {
        let lams: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&n| locate_eigenpotential(&problem(1.5, n, (1.0, 2.0, 1.0, 1.0))).unwrap())
            .collect();
        assert!(lams[0] > lams[1] && lams[1] > lams[2], "{lams:?}");
    }

    #[test]
    fn span_two_dirichlet_instances_are_vacuous() {
        for nu in [1.1, 1.5, 1.9] {
            let p = problem(nu, 2, (1.0, 1.0, 1.0, 0.0));
            assert!(constant_potential_is_vacuous(&p));
            assert!(matches!(
                locate_eigenpotential(&p),
                Err(Error::NoSignChange { .. })
            ));
            let p = problem(nu, 2, (1.0, 1.0, 1.0, 1.0));
            assert!(!constant_potential_is_vacuous(&p));
        }
    }

    #[test]
    fn sub_threshold_potentials_leave_system_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let p = problem(1.3, 12, (1.0, 2.0, 1.0, 1.0));
        let thr = lyapunov_threshold(&p).unwrap();
        for _ in 0..25 {
            let raw: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm: f64 = raw.iter().map(|v| v.abs()).sum();
            let scale = 0.99 * thr / norm;
            let vals: Vec<f64> = raw.iter().map(|v| v * scale).collect();
            let q = Potential::new(GridFunction::new(p.grid(), 1, vals).unwrap()).unwrap();
            let verdict = evaluate_potential(&p, &q).unwrap();
            assert!(!verdict.nontrivial_solution_exists);
            assert!(!verdict.inequality_holds);
        }
    }
}
