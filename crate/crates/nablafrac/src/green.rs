//! The Green's function for the two-point nabla fractional boundary value
//! problem, its solvability constant xi, the bounds Omega and Lambda, and
//! the sign/monotonicity verification they rest on.
//!
//! Construction only needs xi != 0 and tolerates any coefficient signs.
//! The bound and sign theorems additionally need the hypotheses
//! `alpha, beta, gamma, delta >= 0` and `beta >= alpha` ("theorem mode");
//! operations that rely on them fail with `HypothesisViolation` otherwise.
//!
//! Two strictness caveats carried by the formulas themselves, verified
//! exactly in the tests: with `alpha = 0` the row sum at the base point
//! equals Lambda, and with `alpha = 0, delta = 0` the table maximum equals
//! Omega. Both bounds are strict everywhere else.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::monomials::{monomial, monomial_run};

/// Relative threshold on xi below which the problem is reported singular.
pub const XI_RELATIVE_THRESHOLD: f64 = 1e-12;

/// Roundoff slack for the nonnegativity and monotonicity scans.
pub const SIGN_SLACK: f64 = 1e-12;

/// Coefficients of the two boundary conditions
/// `alpha u(a+1) - beta (nabla u)(a+1) = 0` and
/// `gamma u(b) + delta (nabla u)(b) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl BoundaryParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let bc = BoundaryParams {
            alpha,
            beta,
            gamma,
            delta,
        };
        if ![alpha, beta, gamma, delta].iter().all(|v| v.is_finite()) {
            return Err(Error::domain("boundary coefficients must be finite"));
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::domain(
                "left boundary condition is void: alpha^2 + beta^2 must be positive",
            ));
        }
        if gamma == 0.0 && delta == 0.0 {
            return Err(Error::domain(
                "right boundary condition is void: gamma^2 + delta^2 must be positive",
            ));
        }
        Ok(bc)
    }

    /// Violations of the sign hypotheses required by the bound theorems.
    pub fn theorem_mode_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for (name, val) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if val < 0.0 {
                v.push(format!("{name} = {val} is negative"));
            }
        }
        if self.beta < self.alpha {
            v.push(format!("beta = {} < alpha = {}", self.beta, self.alpha));
        }
        v
    }

    pub fn is_theorem_mode(&self) -> bool {
        self.theorem_mode_violations().is_empty()
    }
}

/// A boundary value problem: grid, fractional order in (1, 2), and
/// boundary coefficients.
#[derive(Clone, Copy, Debug)]
pub struct Problem {
    grid: Grid,
    nu: f64,
    bc: BoundaryParams,
}

impl Problem {
    pub fn new(grid: Grid, nu: f64, bc: BoundaryParams) -> Result<Self> {
        if !(nu > 1.0 && nu < 2.0) {
            return Err(Error::domain(format!(
                "fractional order nu = {nu} must lie strictly in (1, 2)"
            )));
        }
        Ok(Problem { grid, nu, bc })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn bc(&self) -> BoundaryParams {
        self.bc
    }

    pub fn span(&self) -> usize {
        self.grid.span()
    }
}

fn h_at(problem: &Problem, order_shift: f64, d: i64) -> f64 {
    // Interior helper: all call sites keep d >= 0, so this cannot fail.
    monomial(problem.nu + order_shift, d, 0).expect("monomial on validated window")
}

/// xi and the magnitude of its largest term, for the relative singularity
/// gate.
fn xi_with_scale(problem: &Problem) -> (f64, f64) {
    let n = problem.span() as i64;
    let b = problem.bc();
    let h1b = h_at(problem, -1.0, n);
    let h2b = h_at(problem, -2.0, n);
    let terms = [
        (b.beta - b.alpha) * b.gamma,
        b.alpha * b.gamma * h1b,
        b.alpha * b.delta * h2b,
    ];
    let xi = terms.iter().sum();
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    (xi, scale)
}

/// The solvability constant
/// `xi = (beta - alpha) gamma + alpha gamma H_{nu-1}(b, a) + alpha delta H_{nu-2}(b, a)`.
///
/// Zero is a legal return; consumers that need invertibility go through the
/// singularity gate.
pub fn xi(problem: &Problem) -> f64 {
    xi_with_scale(problem).0
}

/// xi after the relative singularity gate.
pub fn checked_xi(problem: &Problem) -> Result<f64> {
    let (xi, scale) = xi_with_scale(problem);
    if scale == 0.0 || xi.abs() < XI_RELATIVE_THRESHOLD * scale {
        return Err(Error::SingularProblem(format!(
            "xi = {xi} vanishes relative to its term scale {scale}"
        )));
    }
    Ok(xi)
}

fn require_theorem_mode(problem: &Problem) -> Result<()> {
    let violations = problem.bc().theorem_mode_violations();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(violations.join("; ")))
    }
}

fn check_entry_window(problem: &Problem, t_offset: usize, s_offset: usize) -> Result<()> {
    let n = problem.span();
    if t_offset > n || s_offset < 1 || s_offset > n {
        return Err(Error::domain(format!(
            "Green entry ({t_offset}, {s_offset}) outside 0..={n} x 1..={n}"
        )));
    }
    Ok(())
}

/// The branch `u(t, s)` of the Green's function, valid as a formula at any
/// table position.
pub fn green_u(problem: &Problem, t_offset: usize, s_offset: usize) -> Result<f64> {
    check_entry_window(problem, t_offset, s_offset)?;
    let xi = checked_xi(problem)?;
    let n = problem.span() as i64;
    let (t, s) = (t_offset as i64, s_offset as i64);
    let b = problem.bc();
    let h1t = h_at(problem, -1.0, t);
    let h1bs = h_at(problem, -1.0, n - s + 1);
    let h2bs = h_at(problem, -2.0, n - s + 1);
    Ok((b.alpha * b.gamma * h1t * h1bs
        + b.alpha * b.delta * h1t * h2bs
        + (b.beta - b.alpha) * b.gamma * h1bs
        + (b.beta - b.alpha) * b.delta * h2bs)
        / xi)
}

/// The branch `v(t, s) = u(t, s) - H_{nu-1}(t, rho(s))`.
pub fn green_v(problem: &Problem, t_offset: usize, s_offset: usize) -> Result<f64> {
    let u = green_u(problem, t_offset, s_offset)?;
    let d = t_offset as i64 - s_offset as i64 + 1;
    let correction = if d >= 0 {
        monomial(problem.nu - 1.0, d, 0).expect("window checked")
    } else {
        0.0
    };
    Ok(u - correction)
}

/// `G(t, s)`: the `u` branch for `t <= s-1`, the `v` branch for `t >= s`.
pub fn green(problem: &Problem, t_offset: usize, s_offset: usize) -> Result<f64> {
    if t_offset < s_offset {
        green_u(problem, t_offset, s_offset)
    } else {
        green_v(problem, t_offset, s_offset)
    }
}

/// Upper bound on the table maximum under theorem-mode hypotheses:
/// `Omega = (1/xi) [alpha gamma H1^2 + alpha delta H1 + (beta-alpha) gamma H1
/// + (beta-alpha) delta]` with `H1 = H_{nu-1}(b, a)`.
pub fn omega(problem: &Problem) -> Result<f64> {
    require_theorem_mode(problem)?;
    let xi = checked_xi(problem)?;
    Ok(omega_formula(problem, xi))
}

fn omega_formula(problem: &Problem, xi: f64) -> f64 {
    let n = problem.span() as i64;
    let b = problem.bc();
    let h1b = h_at(problem, -1.0, n);
    (b.alpha * b.gamma * h1b * h1b
        + b.alpha * b.delta * h1b
        + (b.beta - b.alpha) * b.gamma * h1b
        + (b.beta - b.alpha) * b.delta)
        / xi
}

/// Upper bound on every row sum of the table under theorem-mode hypotheses:
/// `Lambda = (1/xi) [alpha gamma H1 Hn + alpha delta H1^2
/// + (beta-alpha) gamma Hn + (beta-alpha) delta H1]` with
/// `H1 = H_{nu-1}(b, a)`, `Hn = H_nu(b, a)`.
pub fn lambda_bound(problem: &Problem) -> Result<f64> {
    require_theorem_mode(problem)?;
    let xi = checked_xi(problem)?;
    Ok(lambda_formula(problem, xi))
}

fn lambda_formula(problem: &Problem, xi: f64) -> f64 {
    let n = problem.span() as i64;
    let b = problem.bc();
    let h1b = h_at(problem, -1.0, n);
    let hnb = h_at(problem, 0.0, n);
    (b.alpha * b.gamma * h1b * hnb
        + b.alpha * b.delta * h1b * h1b
        + (b.beta - b.alpha) * b.gamma * hnb
        + (b.beta - b.alpha) * b.delta * h1b)
        / xi
}

/// The dense Green table with its cached constants.
#[derive(Clone, Debug)]
pub struct GreenTable {
    grid: Grid,
    nu: f64,
    bc: BoundaryParams,
    xi: f64,
    omega: f64,
    lambda_bound: f64,
    /// Row `t` in `0..=n`, column index `s - 1` for `s` in `1..=n`.
    entries: Vec<Vec<f64>>,
}

/// Materialize every entry together with xi, Omega and Lambda.
///
/// The cached Omega/Lambda are the formula values; they are meaningful
/// bounds only under theorem-mode hypotheses.
pub fn green_table(problem: &Problem) -> Result<GreenTable> {
    let xi = checked_xi(problem)?;
    let n = problem.span();
    let b = problem.bc();
    let h1 = monomial_run(problem.nu - 1.0, n + 1);
    let h2 = monomial_run(problem.nu - 2.0, n + 1);
    let mut entries = vec![vec![0.0; n]; n + 1];
    for (t, row) in entries.iter_mut().enumerate() {
        for s in 1..=n {
            let (h1t, h1bs, h2bs) = (h1[t], h1[n - s + 1], h2[n - s + 1]);
            let mut g = (b.alpha * b.gamma * h1t * h1bs
                + b.alpha * b.delta * h1t * h2bs
                + (b.beta - b.alpha) * b.gamma * h1bs
                + (b.beta - b.alpha) * b.delta * h2bs)
                / xi;
            if t >= s {
                g -= h1[t - s + 1];
            }
            row[s - 1] = g;
        }
    }
    Ok(GreenTable {
        grid: problem.grid(),
        nu: problem.nu(),
        bc: b,
        xi,
        omega: omega_formula(problem, xi),
        lambda_bound: lambda_formula(problem, xi),
        entries,
    })
}

impl GreenTable {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn bc(&self) -> BoundaryParams {
        self.bc
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda_bound(&self) -> f64 {
        self.lambda_bound
    }

    pub fn span(&self) -> usize {
        self.grid.span()
    }

    pub fn entry(&self, t_offset: usize, s_offset: usize) -> f64 {
        self.entries[t_offset][s_offset - 1]
    }

    /// `G(., s)` over `t = 0..=n`.
    pub fn column(&self, s_offset: usize) -> Vec<f64> {
        self.entries.iter().map(|row| row[s_offset - 1]).collect()
    }

    pub fn row_sum(&self, t_offset: usize) -> f64 {
        self.entries[t_offset].iter().sum()
    }

    pub fn min_entry(&self) -> (f64, (usize, usize)) {
        self.extremum(|v, m| v < m)
    }

    pub fn max_entry(&self) -> (f64, (usize, usize)) {
        self.extremum(|v, m| v > m)
    }

    fn extremum(&self, better: impl Fn(f64, f64) -> bool) -> (f64, (usize, usize)) {
        let mut best = (self.entries[0][0], (0, 1));
        for (t, row) in self.entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if better(v, best.0) {
                    best = (v, (t, j + 1));
                }
            }
        }
        best
    }
}

/// One verified claim with its worst observed value and, on failure, the
/// witnessing table position.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub worst: f64,
    pub witness: Option<(usize, usize)>,
}

/// Result of the sign and monotonicity verification.
#[derive(Clone, Debug)]
pub struct SignReport {
    pub xi: f64,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

/// Scan the table for the sign-theorem claims: xi positive, every entry
/// nonnegative, `u(., s)` nondecreasing in `t` below the diagonal (strictly
/// increasing when `alpha > 0`), `v(., s)` nonincreasing on and above it.
pub fn verify_sign_and_monotonicity(problem: &Problem) -> Result<SignReport> {
    require_theorem_mode(problem)?;
    let table = green_table(problem)?;
    let n = table.span();
    let b = problem.bc();
    let mut checks = Vec::new();

    checks.push(CheckOutcome {
        name: "xi_positive",
        pass: table.xi() > 0.0,
        worst: table.xi(),
        witness: None,
    });

    let (min, at) = table.min_entry();
    checks.push(CheckOutcome {
        name: "entries_nonnegative",
        pass: min >= -SIGN_SLACK,
        worst: min,
        witness: Some(at),
    });

    // u-branch forward differences on t <= s-1, including the edge at the
    // base point.
    let mut u_worst = (f64::INFINITY, None);
    for s in 1..=n {
        for t in 1..s {
            let d = table.entry(t, s) - table.entry(t - 1, s);
            if d < u_worst.0 {
                u_worst = (d, Some((t, s)));
            }
        }
    }
    let u_has_diffs = u_worst.1.is_some();
    checks.push(CheckOutcome {
        name: "u_nondecreasing_in_t",
        pass: !u_has_diffs || u_worst.0 >= -SIGN_SLACK,
        worst: if u_has_diffs { u_worst.0 } else { 0.0 },
        witness: u_worst.1,
    });
    if b.alpha > 0.0 && u_has_diffs {
        checks.push(CheckOutcome {
            name: "u_strictly_increasing_in_t",
            pass: u_worst.0 > 0.0,
            worst: u_worst.0,
            witness: u_worst.1,
        });
    }

    // v-branch forward differences on t >= s.
    let mut v_worst = (f64::NEG_INFINITY, None);
    for s in 1..=n {
        for t in (s + 1)..=n {
            let d = table.entry(t, s) - table.entry(t - 1, s);
            if d > v_worst.0 {
                v_worst = (d, Some((t, s)));
            }
        }
    }
    let v_has_diffs = v_worst.1.is_some();
    checks.push(CheckOutcome {
        name: "v_nonincreasing_in_t",
        pass: !v_has_diffs || v_worst.0 <= SIGN_SLACK,
        worst: if v_has_diffs { v_worst.0 } else { 0.0 },
        witness: v_worst.1,
    });

    let pass = checks.iter().all(|c| c.pass);
    Ok(SignReport {
        xi: table.xi(),
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(nu: f64, n: usize, bc: (f64, f64, f64, f64)) -> Problem {
        let grid = Grid::new(0.0, n).unwrap();
        let bc = BoundaryParams::new(bc.0, bc.1, bc.2, bc.3).unwrap();
        Problem::new(grid, nu, bc).unwrap()
    }

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs() + 1e-12
    }

    #[test]
    fn boundary_params_guards() {
        assert!(BoundaryParams::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(BoundaryParams::new(1.0, 0.0, 0.0, 0.0).is_err());
        let bc = BoundaryParams::new(1.0, 0.5, 1.0, -1.0).unwrap();
        assert!(!bc.is_theorem_mode());
        assert_eq!(bc.theorem_mode_violations().len(), 2);
        assert!(BoundaryParams::new(1.0, 2.0, 1.0, 1.0)
            .unwrap()
            .is_theorem_mode());
    }

    #[test]
    fn problem_rejects_orders_outside_window() {
        let grid = Grid::new(0.0, 4).unwrap();
        let bc = BoundaryParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(Problem::new(grid, 1.0, bc).is_err());
        assert!(Problem::new(grid, 2.0, bc).is_err());
        assert!(Problem::new(grid, 1.5, bc).is_ok());
    }

    #[test]
    fn xi_examples() {
        assert!(close(xi(&problem(1.5, 4, (0.0, 1.0, 1.0, 0.0))), 1.0, 1e-14));
        assert!(close(
            xi(&problem(1.5, 2, (1.0, 1.0, 1.0, 0.0))),
            1.5,
            1e-14
        ));
        let p = problem(1.5, 4, (0.0, 1.0, 0.0, 1.0));
        assert_eq!(xi(&p), 0.0);
        assert!(matches!(checked_xi(&p), Err(Error::SingularProblem(_))));
        assert!(matches!(
            green_table(&p),
            Err(Error::SingularProblem(_))
        ));
    }

    #[test]
    fn u_vanishes_at_base_when_beta_equals_alpha() {
        let p = problem(1.3, 6, (1.0, 1.0, 1.0, 1.0));
        for s in 1..=6 {
            assert!(green_u(&p, 0, s).unwrap().abs() < 1e-15);
            assert!(green(&p, 0, s).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn v_on_diagonal_is_u_minus_one() {
        let p = problem(1.7, 8, (1.0, 2.0, 1.0, 1.0));
        for s in 1..=8 {
            let u = green_u(&p, s, s).unwrap();
            let v = green_v(&p, s, s).unwrap();
            assert!(close(v, u - 1.0, 1e-13));
        }
    }

    #[test]
    fn table_matches_pointwise_and_caches_constants() {
        let p = problem(1.5, 10, (1.0, 2.0, 1.0, 1.0));
        let table = green_table(&p).unwrap();
        for t in 0..=10 {
            for s in 1..=10 {
                assert_eq!(table.entry(t, s), green(&p, t, s).unwrap());
            }
        }
        assert_eq!(table.xi(), xi(&p));
        assert!(close(table.omega(), omega(&p).unwrap(), 1e-15));
        assert!(close(table.lambda_bound(), lambda_bound(&p).unwrap(), 1e-15));
    }

    #[test]
    fn smallest_grid_has_one_finite_column() {
        let p = problem(1.5, 1, (1.0, 2.0, 1.0, 1.0));
        let table = green_table(&p).unwrap();
        assert_eq!(table.column(1).len(), 2);
        assert!(table.column(1).iter().all(|v| v.is_finite()));
    }

    #[test]
    fn bounds_dominate_table_on_theorem_instance() {
        let p = problem(1.5, 10, (1.0, 2.0, 1.0, 1.0));
        let table = green_table(&p).unwrap();
        let (min, _) = table.min_entry();
        let (max, _) = table.max_entry();
        assert!(min >= -SIGN_SLACK);
        assert!(max < omega(&p).unwrap());
        let lambda = lambda_bound(&p).unwrap();
        for t in 0..=10 {
            assert!(table.row_sum(t) < lambda);
        }
        // Lambda <= n * Omega
        assert!(lambda <= 10.0 * omega(&p).unwrap() + 1e-12);
    }

    #[test]
    fn omega_examples() {
        // single surviving term: Omega = H_{nu-1}(b, a)
        let p = problem(1.5, 4, (0.0, 1.0, 1.0, 0.0));
        let h1b = monomial(0.5, 4, 0).unwrap();
        assert!(close(omega(&p).unwrap(), h1b, 1e-14));
        // and Lambda = H_nu(b, a)
        let hnb = monomial(1.5, 4, 0).unwrap();
        assert!(close(lambda_bound(&p).unwrap(), hnb, 1e-14));
    }

    #[test]
    fn omega_invariant_under_coefficient_scaling() {
        for c in [2.0, 0.5, 7.0] {
            let p = problem(1.4, 8, (1.0, 2.0, 1.0, 1.0));
            let q = problem(1.4, 8, (c, 2.0 * c, c, c));
            assert!(close(omega(&p).unwrap(), omega(&q).unwrap(), 1e-12));
            assert!(close(
                lambda_bound(&p).unwrap(),
                lambda_bound(&q).unwrap(),
                1e-12
            ));
        }
    }

    #[test]
    fn known_equality_families() {
        // alpha = 0: the base-point row sum equals Lambda exactly.
        let p = problem(1.5, 10, (0.0, 1.0, 1.0, 1.0));
        let table = green_table(&p).unwrap();
        let lambda = lambda_bound(&p).unwrap();
        assert!((table.row_sum(0) - lambda).abs() <= 1e-13 * lambda.abs());
        for t in 1..=10 {
            assert!(table.row_sum(t) + SIGN_SLACK < lambda);
        }
        // alpha = 0, delta = 0: the table maximum equals Omega exactly.
        let p = problem(1.5, 10, (0.0, 1.0, 1.0, 0.0));
        let table = green_table(&p).unwrap();
        let (max, _) = table.max_entry();
        assert!((max - omega(&p).unwrap()).abs() <= 1e-13 * max.abs());
    }

    #[test]
    fn hypothesis_gates() {
        let p = problem(1.3, 6, (2.0, 1.0, 1.0, 1.0)); // beta < alpha
        assert!(matches!(omega(&p), Err(Error::HypothesisViolation(_))));
        assert!(matches!(
            lambda_bound(&p),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            verify_sign_and_monotonicity(&p),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn verification_passes_on_theorem_instances() {
        let report = verify_sign_and_monotonicity(&problem(1.3, 12, (1.0, 2.0, 1.0, 1.0))).unwrap();
        assert!(report.pass, "{:?}", report.checks);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "u_strictly_increasing_in_t" && c.pass));

        // alpha = 0 leaves u constant in t: nondecreasing passes, the strict
        // check is not applicable.
        let report = verify_sign_and_monotonicity(&problem(1.5, 8, (0.0, 1.0, 1.0, 0.0))).unwrap();
        assert!(report.pass);
        assert!(report
            .checks
            .iter()
            .find(|c| c.name == "u_nondecreasing_in_t")
            .is_some_and(|c| c.worst.abs() < 1e-15));
        assert!(!report
            .checks
            .iter()
            .any(|c| c.name == "u_strictly_increasing_in_t"));
    }

    #[test]
    fn entry_window_checked() {
        let p = problem(1.5, 4, (1.0, 2.0, 1.0, 1.0));
        assert!(green(&p, 5, 1).is_err());
        assert!(green(&p, 0, 0).is_err());
        assert!(green(&p, 0, 5).is_err());
    }
}
