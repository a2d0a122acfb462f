//! Scripted experiments: blow-up of the `L^1`-embedding constant on the unit
//! ball under the weight `|x|^{n(p-1)+1}`, and a synthesized Cauchy sequence
//! exercising the completeness construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellSet, Grid, GridFunction};
use crate::report::{csv_table, fmt_f64};
use crate::spaces::{WeightSpec, WeightedSpace};

/// `|x|^a` sampled at cell centers.
pub fn power_weight(a: f64, grid: &Grid) -> Result<GridFunction> {
    WeightSpec::Power(a).sample(grid)
}

/// Per-cell mean of `|x|^a`, `a > -1`. Exact in one dimension; in two
/// dimensions a 16 × 16 midpoint rule per cell.
pub fn cell_mean_power_weight(a: f64, grid: &Grid) -> Result<GridFunction> {
    if !(a > -1.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "power {a} is not locally integrable"
        )));
    }
    let h = grid.cell_side();
    match grid.dim() {
        1 => {
            // F(x) = sign(x) |x|^{a+1} / (a+1) is an antiderivative of |x|^a
            let anti = |x: f64| x.signum() * x.abs().powf(a + 1.0) / (a + 1.0);
            GridFunction::from_fn(*grid, |c| (anti(c[0] + h / 2.0) - anti(c[0] - h / 2.0)) / h)
        }
        _ => {
            const SUB: usize = 16;
            let step = h / SUB as f64;
            GridFunction::from_fn(*grid, |c| {
                let mut sum = 0.0;
                for i in 0..SUB {
                    let x = c[0] - h / 2.0 + (i as f64 + 0.5) * step;
                    for j in 0..SUB {
                        let y = c[1] - h / 2.0 + (j as f64 + 0.5) * step;
                        sum += (x * x + y * y).sqrt().powf(a);
                    }
                }
                sum / (SUB * SUB) as f64
            })
        }
    }
}

fn resolvable(n_value: u64, grid: &Grid) -> Result<()> {
    let cells_per_unit = 2f64.powi(-grid.cell_exp());
    let ok = n_value > 0
        && n_value.is_power_of_two()
        && (n_value as f64) <= cells_per_unit
        && 1.0 / n_value as f64 <= grid.half_side();
    if ok {
        Ok(())
    } else {
        Err(Error::Unresolvable {
            n: n_value,
            cell_side: grid.cell_side(),
        })
    }
}

/// `|B(0, 1/N)| / ‖χ_{B(0, 1/N)}‖` for a given weight.
pub fn indicator_ratio(p: f64, n_value: u64, weight: &GridFunction) -> Result<f64> {
    let grid = weight.grid();
    resolvable(n_value, grid)?;
    let ball = CellSet::ball(*grid, 1.0 / n_value as f64);
    let space = WeightedSpace::new(p, weight.clone())?;
    let norm = space.indicator_norm(ball.cells());
    if norm == 0.0 {
        return Err(Error::NullSet);
    }
    Ok(ball.measure() / norm)
}

/// Ratio for the weight `|x|^{n(p-1)+1}` (cell means), `N` a power of two
/// with `1/N` a multiple of the cell side.
pub fn blowup_ratio(p: f64, n_value: u64, grid: &Grid) -> Result<f64> {
    let a = blowup_exponent(p, grid.dim());
    indicator_ratio(p, n_value, &cell_mean_power_weight(a, grid)?)
}

pub fn blowup_exponent(p: f64, dim: usize) -> f64 {
    dim as f64 * (p - 1.0) + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupRow {
    #[serde(rename = "N")]
    pub n_value: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub p: f64,
    pub n: usize,
    /// Weight exponent `a`.
    pub exponent: f64,
    /// Weight multiplier.
    pub scale: f64,
    pub rows: Vec<BlowupRow>,
    /// Least-squares slope of `log ratio` against `log N`.
    pub slope: f64,
}

impl BlowupReport {
    pub fn to_csv(&self) -> String {
        csv_table(
            &["N", "ratio", "log_N", "log_ratio"],
            self.rows.iter().map(|r| {
                vec![
                    r.n_value.to_string(),
                    fmt_f64(r.ratio),
                    fmt_f64((r.n_value as f64).ln()),
                    fmt_f64(r.ratio.ln()),
                ]
            }),
        )
    }
}

/// Least-squares slope through `(x, y)`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Blow-up table for the weight `scale · |x|^exponent`.
pub fn blowup_fit_weighted(
    p: f64,
    exponent: f64,
    scale: f64,
    n_list: &[u64],
    grid: &Grid,
) -> Result<BlowupReport> {
    if n_list.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "need at least 4 values of N, got {}",
            n_list.len()
        )));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "N values must be strictly increasing".into(),
        ));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "weight scale must be positive, got {scale}"
        )));
    }
    let weight = cell_mean_power_weight(exponent, grid)?.scale(scale)?;
    let rows = n_list
        .iter()
        .map(|&n_value| {
            indicator_ratio(p, n_value, &weight).map(|ratio| BlowupRow { n_value, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.n_value as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
    Ok(BlowupReport {
        p,
        n: grid.dim(),
        exponent,
        scale,
        slope: ls_slope(&xs, &ys),
        rows,
    })
}

pub fn blowup_fit(p: f64, n_list: &[u64], grid: &Grid) -> Result<BlowupReport> {
    blowup_fit_weighted(p, blowup_exponent(p, grid.dim()), 1.0, n_list, grid)
}

/// Shape of the synthesized increments `d_j`, each scaled to norm `2^{-j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IncrementMode {
    Zero,
    /// Every `d_j` a multiple of the constant one; the tails are then exactly
    /// `2^{1-k} - 2^{-K}`.
    Geometric,
    /// Independent uniform cell values in `[-1, 1]`.
    Random {
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompletenessRow {
    pub k: usize,
    /// `2^{1-k}`.
    pub tail_bound: f64,
    /// `‖f - f_{n_k}‖`.
    pub measured: f64,
    /// `‖g_k‖` with `g_k = Σ_{j<=k} |d_j|`.
    pub g_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub p: f64,
    pub k_max: usize,
    pub mode: IncrementMode,
    pub rows: Vec<CompletenessRow>,
    /// `g_K` is finite on every positive-weight cell.
    pub limit_finite: bool,
}

impl CompletenessReport {
    /// Every bound holds up to `slack`, and `‖g_k‖` is nondecreasing and
    /// at most one.
    pub fn holds(&self, slack: f64) -> bool {
        let tails = self.rows.iter().all(|r| r.measured <= r.tail_bound + slack);
        let g_bounded = self.rows.iter().all(|r| r.g_norm <= 1.0 + slack);
        let g_monotone = self
            .rows
            .windows(2)
            .all(|w| w[0].g_norm <= w[1].g_norm + slack);
        tails && g_bounded && g_monotone && self.limit_finite
    }

    pub fn to_csv(&self) -> String {
        csv_table(
            &["k", "tail_bound", "measured", "g_norm"],
            self.rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    fmt_f64(r.tail_bound),
                    fmt_f64(r.measured),
                    fmt_f64(r.g_norm),
                ]
            }),
        )
    }
}

/// Builds `f_{n_k} = f - r_k` with `r_k = Σ_{j=k}^{K} d_j` and
/// `‖d_j‖ = 2^{-j}`, so consecutive terms differ by `d_j`. Requires
/// `p >= 1`; the tail bound uses the triangle inequality.
pub fn completeness_run(
    space: &WeightedSpace,
    seed_function: &GridFunction,
    k_max: usize,
    mode: IncrementMode,
) -> Result<CompletenessReport> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "K must be at least 2, got {k_max}"
        )));
    }
    if !space.is_banach() {
        return Err(Error::InvalidExponent(space.p()));
    }
    let grid = *space.grid();
    space.ensure_grid(seed_function)?;
    let mut rng = match mode {
        IncrementMode::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut increments = Vec::with_capacity(k_max);
    for j in 1..=k_max {
        let shape = match mode {
            IncrementMode::Zero => GridFunction::zeros(grid),
            IncrementMode::Geometric => GridFunction::constant(grid, 1.0),
            IncrementMode::Random { .. } => {
                let rng = rng.as_mut().expect("seeded");
                let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                GridFunction::new(grid, values)?
            }
        };
        let norm = space.norm(&shape)?;
        let d = if norm > 0.0 {
            shape.scale(0.5f64.powi(j as i32) / norm)?
        } else {
            GridFunction::zeros(grid)
        };
        increments.push(d);
    }

    // r_k for k = K down to 1
    let mut remainders = vec![GridFunction::zeros(grid); k_max + 1];
    for k in (1..=k_max).rev() {
        let next = remainders
            .get(k + 1)
            .cloned()
            .unwrap_or_else(|| GridFunction::zeros(grid));
        remainders[k] = next.add(&increments[k - 1])?;
    }
    let mut g = GridFunction::zeros(grid);
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        g = g.add(&increments[k - 1].abs())?;
        let f_k = seed_function.sub(&remainders[k])?;
        rows.push(CompletenessRow {
            k,
            tail_bound: 0.5f64.powi(k as i32 - 1),
            measured: space.distance(seed_function, &f_k)?,
            g_norm: space.norm(&g)?,
        });
    }
    let limit_finite = g
        .values()
        .iter()
        .zip(space.weight().values())
        .all(|(v, &w)| w == 0.0 || v.is_finite());
    Ok(CompletenessReport {
        p: space.p(),
        k_max,
        mode,
        rows,
        limit_finite,
    })
}
