//! Finite grids `{a, a+1, ..., a+n}` and real-valued functions on them.
//!
//! All arithmetic is done on integer offsets from the base point; the real
//! base `a` only matters for display. Operators shrink domains
//! asymmetrically, so a grid function carries its own starting offset.

use crate::error::{Error, Result};

/// A grid `{a, a+1, ..., b}` with `b = a + n`, addressed by offsets `0..=n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    a: f64,
    n: usize,
}

impl Grid {
    pub fn new(a: f64, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("grid span n must be at least 1"));
        }
        if !a.is_finite() {
            return Err(Error::domain("grid base point must be finite"));
        }
        Ok(Grid { a, n })
    }

    pub fn base(&self) -> f64 {
        self.a
    }

    /// Span `n = b - a`.
    pub fn span(&self) -> usize {
        self.n
    }

    /// Right endpoint `b = a + n`.
    pub fn right(&self) -> f64 {
        self.a + self.n as f64
    }

    /// Grid point at offset `k`.
    pub fn point(&self, k: usize) -> f64 {
        self.a + k as f64
    }
}

/// Real values attached to the contiguous offsets `start_offset..=n` of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    start_offset: usize,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, start_offset: usize, values: Vec<f64>) -> Result<Self> {
        if start_offset > grid.span() {
            return Err(Error::domain(format!(
                "start offset {} exceeds grid span {}",
                start_offset,
                grid.span()
            )));
        }
        let expect = grid.span() - start_offset + 1;
        if values.len() != expect {
            return Err(Error::domain(format!(
                "expected {} values for offsets {}..={}, got {}",
                expect,
                start_offset,
                grid.span(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite value {bad}")));
        }
        Ok(GridFunction {
            grid,
            start_offset,
            values,
        })
    }

    pub fn from_fn(grid: Grid, start_offset: usize, mut f: impl FnMut(usize) -> f64) -> Result<Self> {
        let values = (start_offset..=grid.span()).map(f).collect();
        Self::new(grid, start_offset, values)
    }

    pub fn constant(grid: Grid, start_offset: usize, c: f64) -> Result<Self> {
        Self::new(grid, start_offset, vec![c; grid.span() - start_offset + 1])
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn start_offset(&self) -> usize {
        self.start_offset
    }

    pub fn end_offset(&self) -> usize {
        self.grid.span()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a grid offset. Panics if the offset is outside the domain.
    pub fn value(&self, offset: usize) -> f64 {
        assert!(
            offset >= self.start_offset && offset <= self.end_offset(),
            "offset {} outside domain {}..={}",
            offset,
            self.start_offset,
            self.end_offset()
        );
        self.values[offset - self.start_offset]
    }

    pub fn get(&self, offset: usize) -> Option<f64> {
        if offset >= self.start_offset && offset <= self.end_offset() {
            Some(self.values[offset - self.start_offset])
        } else {
            None
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn offsets(&self) -> impl Iterator<Item = usize> {
        self.start_offset..=self.grid.span()
    }

    /// Restrict the domain to `start..=n`, dropping leading values.
    pub fn restrict(&self, start: usize) -> Result<Self> {
        if start < self.start_offset {
            return Err(Error::domain(format!(
                "cannot extend domain: {} < current start {}",
                start, self.start_offset
            )));
        }
        Self::new(
            self.grid,
            start,
            self.values[start - self.start_offset..].to_vec(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_zero_span() {
        assert!(Grid::new(0.0, 0).is_err());
        assert!(Grid::new(2.5, 1).is_ok());
    }

    #[test]
    fn grid_points() {
        let g = Grid::new(-1.5, 4).unwrap();
        assert_eq!(g.point(0), -1.5);
        assert_eq!(g.point(4), 2.5);
        assert_eq!(g.right(), 2.5);
    }

    #[test]
    fn function_length_checked() {
        let g = Grid::new(0.0, 3).unwrap();
        assert!(GridFunction::new(g, 1, vec![1.0, 2.0, 3.0]).is_ok());
        assert!(GridFunction::new(g, 1, vec![1.0, 2.0]).is_err());
        assert!(GridFunction::new(g, 0, vec![1.0, 2.0, 3.0]).is_err());
        assert!(GridFunction::new(g, 1, vec![1.0, f64::NAN, 3.0]).is_err());
    }

    #[test]
    fn indexing_by_offset() {
        let g = Grid::new(0.0, 3).unwrap();
        let u = GridFunction::new(g, 1, vec![10.0, 20.0, 30.0]).unwrap();
        assert_eq!(u.value(1), 10.0);
        assert_eq!(u.value(3), 30.0);
        assert_eq!(u.get(0), None);
        assert_eq!(u.offsets().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn restrict_drops_leading_values() {
        let g = Grid::new(0.0, 3).unwrap();
        let u = GridFunction::new(g, 0, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let r = u.restrict(2).unwrap();
        assert_eq!(r.start_offset(), 2);
        assert_eq!(r.values(), &[2.0, 3.0]);
        assert!(r.restrict(1).is_err());
    }
}
