//! Generalized rising functions and nabla fractional Taylor monomials.
//!
//! The monomial of order `mu` based at `a` is
//! `H_mu(t, a) = (t - a)^{rising mu} / Gamma(mu + 1)`, with three
//! conventions that the rest of the crate leans on:
//!
//! * `H_mu(a, a) = 0` for every order,
//! * `H_mu == 0` identically when `mu` is a negative integer,
//! * a rising function with nonpositive-integer base and finite numerator
//!   is exactly zero.
//!
//! Orders within [`POLE_SNAP`](crate::signed::POLE_SNAP) of a negative
//! integer are snapped to it; the gamma pole makes nearby values meaningless.
//!
//! For integer offset differences `d >= 1` the monomial satisfies
//! `H_mu(1) = 1`, `H_mu(d+1) = H_mu(d) * (d + mu) / d`, and the running
//! product is both cheaper and more accurate than three log-gammas, so it is
//! the evaluation path for grid arguments. Real-argument gamma ratios go
//! through signed log-gamma with reflection handled by the kernel.

use crate::error::{Error, Result};
use crate::signed::{is_nonpositive_integer, SignedLogMagnitude, POLE_SNAP};

/// True when `mu` is (within snapping tolerance) a negative integer, so the
/// monomial of that order vanishes identically.
pub fn is_negative_integer_order(mu: f64) -> bool {
    let r = mu.round();
    r <= -1.0 && (mu - r).abs() < POLE_SNAP
}

/// Gamma(x) / Gamma(y) with sign tracking.
///
/// A pole in the denominator with a finite numerator gives exact zero; a
/// pole in the numerator with a finite denominator is an error; both at
/// once is an unsupported combination.
pub fn gamma_ratio(x: f64, y: f64) -> Result<SignedLogMagnitude> {
    let px = is_nonpositive_integer(x);
    let py = is_nonpositive_integer(y);
    match (px, py) {
        (true, true) => Err(Error::Pole(format!(
            "Gamma({x})/Gamma({y}): poles in both numerator and denominator"
        ))),
        (true, false) => Err(Error::Pole(format!(
            "Gamma({x})/Gamma({y}): numerator pole, finite denominator"
        ))),
        (false, true) => Ok(SignedLogMagnitude::zero()),
        (false, false) => {
            Ok(SignedLogMagnitude::from_gamma(x).div(SignedLogMagnitude::from_gamma(y)))
        }
    }
}

/// Generalized rising function `t^{rising r} = Gamma(t + r) / Gamma(t)`,
/// with the zero convention at nonpositive-integer bases.
pub fn rising(t: f64, r: f64) -> Result<f64> {
    if is_nonpositive_integer(t) {
        if is_nonpositive_integer(t + r) {
            return Err(Error::domain(format!(
                "rising({t}, {r}): base and argument are both nonpositive integers"
            )));
        }
        return Ok(0.0);
    }
    if is_nonpositive_integer(t + r) {
        return Err(Error::domain(format!(
            "rising({t}, {r}): Gamma({}) pole over finite Gamma({t})",
            t + r
        )));
    }
    Ok(gamma_ratio(t + r, t)?.value())
}

/// `H_mu(a + t_offset, a + base_offset)` on an integer grid.
///
/// Requires `t_offset >= base_offset - 1`; the `-1` case covers arguments at
/// the backward jump of the base point.
pub fn monomial(mu: f64, t_offset: i64, base_offset: i64) -> Result<f64> {
    let d = t_offset - base_offset;
    if d < -1 {
        return Err(Error::domain(format!(
            "monomial: offset difference {d} below -1"
        )));
    }
    if is_negative_integer_order(mu) || d == 0 {
        return Ok(0.0);
    }
    if d == -1 {
        // rising(-1, mu): zero by convention unless mu - 1 is also a pole.
        return match rising(-1.0, mu) {
            Ok(v) => Ok(v),
            Err(Error::Pole(m)) | Err(Error::Domain(m)) => Err(Error::Domain(m)),
            Err(e) => Err(e),
        };
    }
    Ok(monomial_value(mu, d as usize))
}

/// `H_mu(d)` for `d >= 1` by the running product; no poles can occur here
/// once negative-integer orders are screened out.
fn monomial_value(mu: f64, d: usize) -> f64 {
    let mut v = 1.0;
    for j in 1..d {
        let j = j as f64;
        v *= (j + mu) / j;
    }
    v
}

/// All of `H_mu(0), H_mu(1), ..., H_mu(d_max)` in one pass.
///
/// Convolution-style operators consume the monomial along a contiguous run
/// of offset differences; sharing the running product keeps that linear.
pub fn monomial_run(mu: f64, d_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; d_max + 1];
    if is_negative_integer_order(mu) || d_max == 0 {
        return out;
    }
    out[1] = 1.0;
    for d in 1..d_max {
        let j = d as f64;
        out[d + 1] = out[d] * (j + mu) / j;
    }
    out
}

/// The ratio `h_mu(t, s) = H_mu(t, rho(s)) / H_mu(t, a)` through its
/// four-gamma closed form
/// `Gamma(t-s+mu+1) Gamma(t-a) / (Gamma(t-s+1) Gamma(t-a+mu))`.
///
/// Positive throughout its window `mu > -1`, `s >= a+1`, `t >= s`.
pub fn monomial_ratio(mu: f64, t_offset: i64, s_offset: i64) -> Result<f64> {
    if mu <= -1.0 {
        return Err(Error::domain(format!("monomial_ratio: order {mu} <= -1")));
    }
    if s_offset < 1 || t_offset < s_offset {
        return Err(Error::domain(format!(
            "monomial_ratio: need 1 <= s <= t, got s={s_offset}, t={t_offset}"
        )));
    }
    let d = (t_offset - s_offset) as f64;
    let t = t_offset as f64;
    let num = gamma_ratio(d + mu + 1.0, d + 1.0)?;
    let den = gamma_ratio(t + mu, t)?;
    Ok(num.div(den).value())
}

/// Sign of the backward difference in `t` of `h_mu(t, s)`, from the closed
/// form `mu (s-a-1) Gamma(t-s+mu) Gamma(t-a-1) / (Gamma(t-s+1) Gamma(t-a+mu))`.
///
/// `+1` for positive orders, `-1` for orders in (-1, 0), and `0` at
/// `s = a+1` where the ratio is constant in `t`.
pub fn monomial_ratio_nabla_sign(mu: f64, t_offset: i64, s_offset: i64) -> Result<i8> {
    if mu <= -1.0 || mu.abs() < POLE_SNAP {
        return Err(Error::domain(format!(
            "monomial_ratio_nabla_sign: order {mu} outside (-1, 0) U (0, inf)"
        )));
    }
    if s_offset < 1 || t_offset < s_offset + 1 {
        return Err(Error::domain(format!(
            "monomial_ratio_nabla_sign: need 1 <= s <= t-1, got s={s_offset}, t={t_offset}"
        )));
    }
    if s_offset == 1 {
        return Ok(0);
    }
    let d = (t_offset - s_offset) as f64;
    let t = t_offset as f64;
    let factor = mu * (s_offset - 1) as f64;
    let slm = gamma_ratio(d + mu, d + 1.0)?
        .mul(gamma_ratio(t - 1.0, t + mu)?)
        .mul(SignedLogMagnitude::new(
            if factor > 0.0 { 1 } else { -1 },
            factor.abs().ln(),
        ));
    Ok(slm.sign())
}
