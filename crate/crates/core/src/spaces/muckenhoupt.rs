//! Discrete Muckenhoupt constants over grid-aligned dyadic cubes.
//!
//! The supremum runs over a finite cube family, so the result is a lower
//! bound for the continuum constant. Each cube is normalized by a local
//! scale before averaging; both constants are scale invariant, and constant
//! weights then give exactly 1.

use crate::error::{Error, Result};
use crate::grid::{DyadicPartition, Grid, GridFunction};

/// Dyadic cubes with side `2^j`, `min_exp <= j <= max_exp`, tiling the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeFamily {
    pub min_exp: i32,
    pub max_exp: i32,
}

impl CubeFamily {
    /// Every grid-aligned dyadic cube inside the box.
    pub fn all(grid: &Grid) -> Self {
        Self {
            min_exp: grid.cell_exp(),
            max_exp: grid.box_level(),
        }
    }

    fn levels(&self, grid: &Grid) -> Result<Vec<DyadicPartition>> {
        (self.min_exp..=self.max_exp)
            .map(|j| DyadicPartition::new(*grid, grid.box_level(), j))
            .collect()
    }
}

/// `max_Q (avg_Q ω)^{1/p} (avg_Q ω^{1-p'})^{1/p'}`; `+∞` when ω vanishes on
/// a probed cell.
pub fn ap_constant(weight: &GridFunction, p: f64, family: CubeFamily) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    let conj = p / (p - 1.0);
    let mut best: f64 = 0.0;
    for partition in family.levels(weight.grid())? {
        for cube in partition.cubes() {
            let scale = cube.cells().map(|c| weight.value(c)).fold(0.0, f64::max);
            let has_zero = cube.cells().any(|c| weight.value(c) == 0.0);
            if has_zero {
                return Ok(f64::INFINITY);
            }
            let count = cube.cell_count() as f64;
            let mean: f64 = cube.cells().map(|c| weight.value(c) / scale).sum::<f64>() / count;
            let dual: f64 = cube
                .cells()
                .map(|c| (weight.value(c) / scale).powf(1.0 - conj))
                .sum::<f64>()
                / count;
            best = best.max(mean.powf(1.0 / p) * dual.powf(1.0 / conj));
        }
    }
    Ok(best)
}

/// `max_Q avg_Q ω / min_Q ω`; `+∞` when ω vanishes on a probed cell.
pub fn a1_constant(weight: &GridFunction, family: CubeFamily) -> Result<f64> {
    let mut best: f64 = 0.0;
    for partition in family.levels(weight.grid())? {
        for cube in partition.cubes() {
            let floor = cube
                .cells()
                .map(|c| weight.value(c))
                .fold(f64::INFINITY, f64::min);
            if floor == 0.0 {
                return Ok(f64::INFINITY);
            }
            let mean: f64 = cube.cells().map(|c| weight.value(c) / floor).sum::<f64>()
                / cube.cell_count() as f64;
            best = best.max(mean);
        }
    }
    Ok(best)
}
