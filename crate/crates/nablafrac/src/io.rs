//! Text formats shared with the command-line interface.
//!
//! * Grid functions: one `offset,value` record per line, offsets contiguous.
//! * Problem files: `key = value` lines for `a, n, nu, alpha, beta, gamma,
//!   delta`.
//! * Green tables: CSV with a `t\s` header and a trailing comment block
//!   carrying xi, Omega and Lambda.
//! * Lyapunov verdicts: `key=value` lines.
//!
//! Values are printed with 17 significant digits so that reading a file back
//! reproduces every double bit for bit. Blank lines and `#` comments are
//! tolerated on input.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::green::{BoundaryParams, GreenTable, Problem};
use crate::grid::{Grid, GridFunction};
use crate::lyapunov::LyapunovVerdict;

/// Full-precision decimal formatting (17 significant digits).
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// Serialize a grid function as `offset,value` records.
pub fn write_grid_function(u: &GridFunction, out: &mut impl Write) -> Result<()> {
    for k in u.offsets() {
        writeln!(out, "{k},{}", format_float(u.value(k)))?;
    }
    Ok(())
}

/// Parse `offset,value` records; returns the starting offset and values.
pub fn parse_grid_values(text: &str) -> Result<(usize, Vec<f64>)> {
    let mut records: Vec<(usize, f64)> = Vec::new();
    for (lineno, line) in content_lines(text) {
        let (off_str, val_str) = line.split_once(',').ok_or_else(|| {
            Error::parse("value", format!("line {lineno}: expected `offset,value`"))
        })?;
        let offset: usize = off_str.trim().parse().map_err(|_| {
            Error::parse(
                "offset",
                format!("line {lineno}: `{}` is not an offset", off_str.trim()),
            )
        })?;
        let value: f64 = val_str.trim().parse().map_err(|_| {
            Error::parse(
                "value",
                format!("line {lineno}: `{}` is not a number", val_str.trim()),
            )
        })?;
        records.push((offset, value));
    }
    if records.is_empty() {
        return Err(Error::parse("offset", "no records found"));
    }
    let start = records[0].0;
    for (i, (offset, _)) in records.iter().enumerate() {
        if *offset != start + i {
            return Err(Error::parse(
                "offset",
                format!("offsets must be contiguous, expected {} got {offset}", start + i),
            ));
        }
    }
    Ok((start, records.into_iter().map(|(_, v)| v).collect()))
}

/// Parse a grid function against a known grid.
pub fn parse_grid_function(text: &str, grid: Grid) -> Result<GridFunction> {
    let (start, values) = parse_grid_values(text)?;
    GridFunction::new(grid, start, values)
        .map_err(|e| Error::parse("value", format!("{e}")))
}

/// Serialize a problem file.
pub fn write_problem(problem: &Problem, out: &mut impl Write) -> Result<()> {
    let bc = problem.bc();
    writeln!(out, "a = {}", format_float(problem.grid().base()))?;
    writeln!(out, "n = {}", problem.span())?;
    writeln!(out, "nu = {}", format_float(problem.nu()))?;
    writeln!(out, "alpha = {}", format_float(bc.alpha))?;
    writeln!(out, "beta = {}", format_float(bc.beta))?;
    writeln!(out, "gamma = {}", format_float(bc.gamma))?;
    writeln!(out, "delta = {}", format_float(bc.delta))?;
    Ok(())
}

/// Parse a problem file; failures name the offending field.
pub fn parse_problem(text: &str) -> Result<Problem> {
    const FIELDS: [&str; 7] = ["a", "n", "nu", "alpha", "beta", "gamma", "delta"];
    let mut seen: Vec<(String, String)> = Vec::new();
    for (lineno, line) in content_lines(text) {
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::parse("line", format!("line {lineno}: expected `key = value`"))
        })?;
        let key = key.trim().to_string();
        if !FIELDS.contains(&key.as_str()) {
            return Err(Error::parse(key, format!("line {lineno}: unknown field")));
        }
        if seen.iter().any(|(k, _)| *k == key) {
            return Err(Error::parse(key, format!("line {lineno}: duplicate field")));
        }
        seen.push((key, value.trim().to_string()));
    }
    let lookup = |field: &str| -> Result<&str> {
        seen.iter()
            .find(|(k, _)| k == field)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::parse(field, "missing field"))
    };
    let real = |field: &str| -> Result<f64> {
        let raw = lookup(field)?;
        raw.parse()
            .map_err(|_| Error::parse(field, format!("`{raw}` is not a number")))
    };

    let a = real("a")?;
    let n_raw = lookup("n")?;
    let n: usize = n_raw
        .parse()
        .map_err(|_| Error::parse("n", format!("`{n_raw}` is not a positive integer")))?;
    if n < 1 {
        return Err(Error::parse("n", "span must be at least 1"));
    }
    let nu = real("nu")?;
    if !(nu > 1.0 && nu < 2.0) {
        return Err(Error::parse("nu", format!("{nu} is not strictly inside (1, 2)")));
    }
    let (alpha, beta) = (real("alpha")?, real("beta")?);
    let (gamma, delta) = (real("gamma")?, real("delta")?);
    if alpha == 0.0 && beta == 0.0 {
        return Err(Error::parse("alpha", "alpha and beta cannot both be zero"));
    }
    if gamma == 0.0 && delta == 0.0 {
        return Err(Error::parse("gamma", "gamma and delta cannot both be zero"));
    }
    let grid = Grid::new(a, n).map_err(|e| Error::parse("a", format!("{e}")))?;
    let bc = BoundaryParams::new(alpha, beta, gamma, delta)
        .map_err(|e| Error::parse("alpha", format!("{e}")))?;
    Problem::new(grid, nu, bc).map_err(|e| Error::parse("nu", format!("{e}")))
}

pub fn read_problem_file(path: &std::path::Path) -> Result<Problem> {
    parse_problem(&std::fs::read_to_string(path)?)
}

pub fn read_grid_function_file(path: &std::path::Path, grid: Grid) -> Result<GridFunction> {
    parse_grid_function(&std::fs::read_to_string(path)?, grid)
}

/// Green table CSV: header `t\s,1,...,n`, one row per t offset, and a
/// trailing comment block with xi, Omega and Lambda.
pub fn write_green_csv(table: &GreenTable, out: &mut impl Write) -> Result<()> {
    let n = table.span();
    let header: Vec<String> = (1..=n).map(|s| s.to_string()).collect();
    writeln!(out, "t\\s,{}", header.join(","))?;
    for t in 0..=n {
        let row: Vec<String> = (1..=n).map(|s| format_float(table.entry(t, s))).collect();
        writeln!(out, "{t},{}", row.join(","))?;
    }
    writeln!(out, "# xi = {}", format_float(table.xi()))?;
    writeln!(out, "# omega = {}", format_float(table.omega()))?;
    writeln!(out, "# lambda = {}", format_float(table.lambda_bound()))?;
    Ok(())
}

/// Parsed form of a Green table CSV.
#[derive(Clone, Debug)]
pub struct GreenCsv {
    pub entries: Vec<Vec<f64>>,
    pub xi: f64,
    pub omega: f64,
    pub lambda_bound: f64,
}

pub fn parse_green_csv(text: &str) -> Result<GreenCsv> {
    let mut entries = Vec::new();
    let mut constants = [None; 3];
    for line in text.lines().map(str::trim) {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once('=') {
                let idx = match key.trim() {
                    "xi" => 0,
                    "omega" => 1,
                    "lambda" => 2,
                    _ => continue,
                };
                constants[idx] = Some(value.trim().parse::<f64>().map_err(|_| {
                    Error::parse(key.trim().to_string(), "bad number in footer")
                })?);
            }
            continue;
        }
        if line.starts_with("t\\s") {
            continue;
        }
        let mut fields = line.split(',');
        let _t = fields.next();
        let row: std::result::Result<Vec<f64>, _> =
            fields.map(|f| f.trim().parse::<f64>()).collect();
        entries.push(row.map_err(|_| Error::parse("value", "bad number in table row"))?);
    }
    let [xi, omega, lambda_bound] = constants;
    Ok(GreenCsv {
        entries,
        xi: xi.ok_or_else(|| Error::parse("xi", "missing footer constant"))?,
        omega: omega.ok_or_else(|| Error::parse("omega", "missing footer constant"))?,
        lambda_bound: lambda_bound.ok_or_else(|| Error::parse("lambda", "missing footer constant"))?,
    })
}

/// Verdict as `key=value` lines.
pub fn write_verdict(verdict: &LyapunovVerdict, out: &mut impl Write) -> Result<()> {
    writeln!(out, "l1_norm={}", format_float(verdict.l1_norm))?;
    writeln!(out, "threshold={}", format_float(verdict.threshold))?;
    writeln!(
        out,
        "nontrivial_solution_exists={}",
        verdict.nontrivial_solution_exists
    )?;
    writeln!(out, "inequality_holds={}", verdict.inequality_holds)?;
    Ok(())
}

/// Read a whole stream into a string (CLI helper).
pub fn read_to_string(mut reader: impl BufRead) -> Result<String> {
    let mut buf = String::new();
    reader.read_to_string(&mut buf)?;
    Ok(buf)
}
