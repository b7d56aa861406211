//! Nabla difference and sum operators on grid functions.
//!
//! Integer-order differences shrink the domain from the left; the fractional
//! sum extends it to the base point with an exact zero there. The fractional
//! difference follows the composition route: an integer difference of order
//! `N = ceil(nu)` applied to the fractional sum of order `N - nu`. Orders
//! within snapping distance of an integer are routed to the integer-order
//! paths, where the composition collapses.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::monomials::monomial_run;
use crate::signed::POLE_SNAP;

/// First-order backward difference; output starts one offset later.
pub fn nabla(u: &GridFunction) -> Result<GridFunction> {
    if u.len() < 2 {
        return Err(Error::domain(
            "nabla needs at least two consecutive points",
        ));
    }
    let start = u.start_offset() + 1;
    let values = u
        .values()
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect::<Vec<_>>();
    GridFunction::new(u.grid(), start, values)
}

/// N-fold backward difference.
pub fn nabla_n(u: &GridFunction, order: usize) -> Result<GridFunction> {
    if u.len() < order + 1 {
        return Err(Error::domain(format!(
            "nabla^{order} needs {} points, domain has {}",
            order + 1,
            u.len()
        )));
    }
    let mut cur = u.clone();
    for _ in 0..order {
        cur = nabla(&cur)?;
    }
    Ok(cur)
}

fn nearest_integer_order(nu: f64) -> Option<usize> {
    let r = nu.round();
    if (nu - r).abs() < POLE_SNAP && r >= 0.0 {
        Some(r as usize)
    } else {
        None
    }
}

/// Fractional nabla sum of order `nu >= 0` based at the grid base point.
///
/// Input lives on offsets `1..=n`; output lives on `0..=n` with an exact
/// zero at offset 0. Order zero returns the input unchanged.
pub fn frac_sum(u: &GridFunction, nu: f64) -> Result<GridFunction> {
    if nu < 0.0 {
        return Err(Error::domain(format!("fractional sum order {nu} < 0")));
    }
    if u.start_offset() != 1 {
        return Err(Error::domain(format!(
            "fractional sum input must start at offset 1, got {}",
            u.start_offset()
        )));
    }
    if let Some(0) = nearest_integer_order(nu) {
        return Ok(u.clone());
    }
    let n = u.grid().span();
    let kernel = monomial_run(nu - 1.0, n);
    let mut values = vec![0.0; n + 1];
    for t in 1..=n {
        // sum_{s=1}^{t} H_{nu-1}(t - s + 1) u(s), Neumaier-compensated
        let mut acc = 0.0;
        let mut comp = 0.0;
        for s in 1..=t {
            let term = kernel[t - s + 1] * u.value(s);
            let sum = acc + term;
            comp += if acc.abs() >= term.abs() {
                (acc - sum) + term
            } else {
                (term - sum) + acc
            };
            acc = sum;
        }
        values[t] = acc + comp;
    }
    GridFunction::new(u.grid(), 0, values)
}

/// Fractional nabla difference of order `nu > 0` via the composition route.
pub fn frac_diff(u: &GridFunction, nu: f64) -> Result<GridFunction> {
    if nu <= 0.0 {
        return Err(Error::domain(format!(
            "fractional difference order {nu} must be positive"
        )));
    }
    if let Some(order) = nearest_integer_order(nu) {
        return nabla_n(u, order);
    }
    let order = nu.ceil() as usize;
    let summed = frac_sum(u, order as f64 - nu)?;
    nabla_n(&summed, order)
}

/// The linear weights of the fractional difference at one evaluation point:
/// `(nabla_a^nu u)(a + t_offset) = sum_k coefficients[k-1] * u(a + k)`.
#[derive(Clone, Debug)]
pub struct OperatorWeights {
    t_offset: usize,
    coefficients: Vec<f64>,
}

impl OperatorWeights {
    pub fn t_offset(&self) -> usize {
        self.t_offset
    }

    /// Weight on `u(a + k)` for `k` in `1..=t_offset`.
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients[k - 1]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Apply the weights to a function covering offsets `1..=t_offset`.
    pub fn apply(&self, u: &GridFunction) -> Result<f64> {
        if u.start_offset() > 1 || u.end_offset() < self.t_offset {
            return Err(Error::domain(format!(
                "weights at offset {} need u on 1..={}",
                self.t_offset, self.t_offset
            )));
        }
        Ok((1..=self.t_offset)
            .map(|k| self.coefficients[k - 1] * u.value(k))
            .sum())
    }
}

/// Expand the composition `nabla^2 [ sum H_{1-nu}(., rho(s)) u(s) ]` into
/// per-source weights. Orders in `(1, 2]`; the integer endpoint yields the
/// plain second-difference stencil on the last three offsets.
pub fn frac_diff_weights(nu: f64, t_offset: usize) -> Result<OperatorWeights> {
    if !(nu > 1.0 && nu <= 2.0 + POLE_SNAP) {
        return Err(Error::domain(format!(
            "frac_diff_weights: order {nu} outside (1, 2]"
        )));
    }
    if t_offset < 2 {
        return Err(Error::domain(format!(
            "frac_diff_weights: evaluation offset {t_offset} below 2"
        )));
    }
    if let Some(2) = nearest_integer_order(nu) {
        if t_offset < 3 {
            return Err(Error::domain(
                "second difference at offset 2 would read u(a)",
            ));
        }
        let mut coefficients = vec![0.0; t_offset];
        coefficients[t_offset - 1] = 1.0;
        coefficients[t_offset - 2] = -2.0;
        coefficients[t_offset - 3] = 1.0;
        return Ok(OperatorWeights {
            t_offset,
            coefficients,
        });
    }
    let kernel = monomial_run(1.0 - nu, t_offset);
    let m = |tau: usize, k: usize| -> f64 {
        if tau + 1 >= k {
            kernel[tau + 1 - k]
        } else {
            0.0
        }
    };
    let coefficients = (1..=t_offset)
        .map(|k| m(t_offset, k) - 2.0 * m(t_offset - 1, k) + m(t_offset - 2, k))
        .collect();
    Ok(OperatorWeights {
        t_offset,
        coefficients,
    })
}
