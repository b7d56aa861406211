//! Command-line surface: monomial evaluation, Green-table export, solving,
//! the verification suite, and the Lyapunov analysis.
//!
//! Data goes to standard output or files; human-readable summaries go to
//! standard error. Exit codes: 0 success, 2 parse/domain errors, 3 singular
//! problems, 4 verification or hypothesis failures, 5 failed searches.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::green::green_table;
use crate::io::{
    format_float, read_grid_function_file, read_problem_file, write_green_csv,
    write_grid_function, write_verdict,
};
use crate::lyapunov::{
    evaluate_potential, find_constant_eigenpotential, lyapunov_threshold, Potential,
};
use crate::monomials::monomial;
use crate::solver::{residual, solve_via_green, BvpInstance};
use crate::verify::{check_instance, run_default_lattice, CheckResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_SEARCH: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "nablafrac",
    about = "Discrete nabla fractional boundary value problems: Green tables, solves, bounds, and Lyapunov analysis",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Taylor monomial H_mu(a+k, a) at full precision
    Monomial {
        /// Monomial order
        #[arg(long)]
        mu: f64,
        /// Offset from the base point
        #[arg(long)]
        k: usize,
    },
    /// Write the Green's function table as CSV with xi, Omega, Lambda footer
    Green {
        /// Problem file (a, n, nu, alpha, beta, gamma, delta)
        #[arg(long)]
        spec: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the boundary value problem for a forcing file
    Solve {
        #[arg(long)]
        spec: PathBuf,
        /// Forcing in grid-function format on offsets 1..=n
        #[arg(long)]
        forcing: PathBuf,
        /// Output path for the solution (grid-function format, offsets 0..=n)
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite (full lattice by default)
    Verify {
        /// Verify a single problem file instead of the lattice
        #[arg(long, conflicts_with = "lattice")]
        spec: Option<PathBuf>,
        /// Force the full lattice run (the default when no spec is given)
        #[arg(long)]
        lattice: bool,
        /// Seed for the randomized suites
        #[arg(long, default_value_t = 424242)]
        seed: u64,
        /// Override the oracle-equivalence tolerance
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Lyapunov threshold, potential verdicts, and eigenpotential search
    Lyapunov {
        #[arg(long)]
        spec: PathBuf,
        /// Potential file in grid-function format on offsets 1..=n
        #[arg(long, conflicts_with = "bracket")]
        potential: Option<PathBuf>,
        /// Bisection bracket LO:HI for a constant eigenpotential search
        #[arg(long)]
        bracket: Option<String>,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Pole(_) | Error::Domain(_) | Error::Parse { .. } => EXIT_PARSE,
        Error::SingularProblem(_) | Error::SingularSystem(_) => EXIT_SINGULAR,
        Error::HypothesisViolation(_) => EXIT_VERIFY,
        Error::NoSignChange { .. } => EXIT_SEARCH,
        Error::Io(_) => EXIT_FAILURE,
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout and errors on stderr
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Monomial { mu, k } => cmd_monomial(mu, k),
        Command::Green { spec, out } => cmd_green(&spec, &out),
        Command::Solve { spec, forcing, out } => cmd_solve(&spec, &forcing, &out),
        Command::Verify {
            spec,
            lattice: _,
            seed,
            tol,
        } => cmd_verify(spec.as_deref(), seed, tol),
        Command::Lyapunov {
            spec,
            potential,
            bracket,
        } => cmd_lyapunov(&spec, potential.as_deref(), bracket.as_deref()),
    }
}

fn cmd_monomial(mu: f64, k: usize) -> Result<i32> {
    let value = monomial(mu, k as i64, 0)?;
    println!("{}", format_float(value));
    Ok(EXIT_OK)
}

fn cmd_green(spec: &Path, out: &Path) -> Result<i32> {
    let problem = read_problem_file(spec)?;
    let table = green_table(&problem)?;
    let mut writer = BufWriter::new(File::create(out)?);
    write_green_csv(&table, &mut writer)?;
    writer.flush()?;
    let (max, at) = table.max_entry();
    eprintln!(
        "green table {}x{} written to {}; xi={:.6e} omega={:.6e} lambda={:.6e} max={:.6e} at ({},{})",
        problem.span() + 1,
        problem.span(),
        out.display(),
        table.xi(),
        table.omega(),
        table.lambda_bound(),
        max,
        at.0,
        at.1
    );
    Ok(EXIT_OK)
}

fn cmd_solve(spec: &Path, forcing_path: &Path, out: &Path) -> Result<i32> {
    let problem = read_problem_file(spec)?;
    let forcing = read_grid_function_file(forcing_path, problem.grid())?;
    let instance = BvpInstance::new(problem, forcing)?;
    let solution = solve_via_green(&instance)?;
    let report = residual(&instance, &solution)?;
    let mut writer = BufWriter::new(File::create(out)?);
    write_grid_function(&solution, &mut writer)?;
    writer.flush()?;
    println!("residual={}", format_float(report.max));
    eprintln!(
        "solution written to {}; interior defect {:.3e}, boundary defects {:.3e}/{:.3e}",
        out.display(),
        report.interior_max,
        report.left_bc,
        report.right_bc
    );
    Ok(EXIT_OK)
}

fn print_results(results: &[CheckResult]) -> i32 {
    let mut all_pass = true;
    for r in results {
        println!("{}", r.line());
        all_pass &= r.pass;
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("result={}", if all_pass { "pass" } else { "fail" });
    eprintln!(
        "{} checks, {} failed",
        results.len(),
        failed
    );
    if all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn cmd_verify(spec: Option<&Path>, seed: u64, tol: Option<f64>) -> Result<i32> {
    let oracle_tol = tol.unwrap_or(1e-8);
    let results = match spec {
        Some(path) => {
            let problem = read_problem_file(path)?;
            check_instance(&problem, seed, oracle_tol)
        }
        None => run_default_lattice(seed, oracle_tol),
    };
    Ok(print_results(&results))
}

fn parse_bracket(raw: &str) -> Result<(f64, f64)> {
    let (lo, hi) = raw
        .split_once(':')
        .ok_or_else(|| Error::parse("bracket", "expected LO:HI"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| Error::parse("bracket", format!("`{lo}` is not a number")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| Error::parse("bracket", format!("`{hi}` is not a number")))?;
    Ok((lo, hi))
}

fn cmd_lyapunov(spec: &Path, potential: Option<&Path>, bracket: Option<&str>) -> Result<i32> {
    let problem = read_problem_file(spec)?;
    let threshold = lyapunov_threshold(&problem)?;
    let mut stdout = std::io::stdout().lock();

    if let Some(path) = potential {
        let values = read_grid_function_file(path, problem.grid())?;
        let q = Potential::new(values)?;
        let verdict = evaluate_potential(&problem, &q)?;
        write_verdict(&verdict, &mut stdout)?;
        return Ok(EXIT_OK);
    }
    if let Some(raw) = bracket {
        let (lo, hi) = parse_bracket(raw)?;
        let lam = find_constant_eigenpotential(&problem, lo, hi)?;
        writeln!(stdout, "lambda_star={}", format_float(lam))?;
        let q = Potential::constant(problem.grid(), lam)?;
        let verdict = evaluate_potential(&problem, &q)?;
        write_verdict(&verdict, &mut stdout)?;
        eprintln!(
            "constant eigenpotential {lam:.9e}; sum|q| = {:.9e} vs threshold {:.9e}",
            verdict.l1_norm, threshold
        );
        return Ok(EXIT_OK);
    }
    writeln!(stdout, "threshold={}", format_float(threshold))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_parsing() {
        assert_eq!(parse_bracket("0:50").unwrap(), (0.0, 50.0));
        assert_eq!(parse_bracket(" 1.5 : 2.5 ").unwrap(), (1.5, 2.5));
        assert!(parse_bracket("12").is_err());
        assert!(parse_bracket("a:b").is_err());
    }

    #[test]
    fn exit_codes_follow_error_kinds() {
        assert_eq!(exit_code(&Error::domain("x")), EXIT_PARSE);
        assert_eq!(exit_code(&Error::Pole("x".into())), EXIT_PARSE);
        assert_eq!(
            exit_code(&Error::SingularProblem("x".into())),
            EXIT_SINGULAR
        );
        assert_eq!(exit_code(&Error::SingularSystem("x".into())), EXIT_SINGULAR);
        assert_eq!(
            exit_code(&Error::HypothesisViolation("x".into())),
            EXIT_VERIFY
        );
        assert_eq!(
            exit_code(&Error::NoSignChange { lo: 0.0, hi: 1.0 }),
            EXIT_SEARCH
        );
    }
}
