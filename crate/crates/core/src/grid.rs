//! Uniform dyadic grids on symmetric boxes and piecewise-constant functions.
//!
//! A [`Grid`] covers `R_L = [-2^L, 2^L]^n` (`n` in {1, 2}) with half-open
//! cells of side `h = 2^e`. Every dyadic quantity is stored as an integer
//! exponent so cells, cubes and boxes align exactly.
//!
//! Cell `k` along an axis is `[-2^L + k h, -2^L + (k + 1) h)`. Multi-indices
//! are flattened row-major with axis 0 slowest. Dyadic cubes follow the same
//! half-open convention: a cube of side `2^i` is `[a, a + 2^i)` per axis with
//! `a` on the `2^i` lattice.
//!
//! Outside the box every function is identically zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of cells (log2) a grid may hold.
const MAX_CELLS_LOG2: i32 = 26;

/// Coordinates of a cell or point; axes beyond the grid dimension are zero.
pub type Point = [f64; 2];

/// Integer multi-index; axes beyond the grid dimension are zero.
pub type MultiIndex = [usize; 2];

/// Cell shift in units of the cell side.
pub type Shift = [i64; 2];

pub(crate) fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    box_level: i32,
    cell_exp: i32,
}

impl Grid {
    pub fn new(dim: usize, box_level: i32, cell_exp: i32) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if cell_exp > box_level {
            return Err(Error::CellLargerThanBox {
                box_level,
                cell_exp,
            });
        }
        let per_axis_log2 = box_level - cell_exp + 1;
        if per_axis_log2 * dim as i32 > MAX_CELLS_LOG2 {
            return Err(Error::GridTooLarge {
                dim,
                cells_per_axis_log2: per_axis_log2,
            });
        }
        Ok(Self {
            dim,
            box_level,
            cell_exp,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_level(&self) -> i32 {
        self.box_level
    }

    pub fn cell_exp(&self) -> i32 {
        self.cell_exp
    }

    pub fn cell_side(&self) -> f64 {
        pow2(self.cell_exp)
    }

    /// Half side `2^L` of the ambient box.
    pub fn half_side(&self) -> f64 {
        pow2(self.box_level)
    }

    pub fn cells_per_axis(&self) -> usize {
        1usize << (self.box_level - self.cell_exp + 1)
    }

    pub fn len(&self) -> usize {
        self.cells_per_axis().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        pow2(self.cell_exp * self.dim as i32)
    }

    /// Same box, cells halved.
    pub fn refine(&self) -> Result<Grid> {
        Grid::new(self.dim, self.box_level, self.cell_exp - 1)
    }

    pub fn multi_index(&self, cell: usize) -> MultiIndex {
        if self.dim == 1 {
            [cell, 0]
        } else {
            let n = self.cells_per_axis();
            [cell / n, cell % n]
        }
    }

    pub fn flat_index(&self, idx: MultiIndex) -> usize {
        if self.dim == 1 {
            idx[0]
        } else {
            idx[0] * self.cells_per_axis() + idx[1]
        }
    }

    pub fn axis_center(&self, k: usize) -> f64 {
        -self.half_side() + (k as f64 + 0.5) * self.cell_side()
    }

    pub fn center(&self, cell: usize) -> Point {
        let idx = self.multi_index(cell);
        let mut c = [0.0; 2];
        for (axis, slot) in c.iter_mut().enumerate().take(self.dim) {
            *slot = self.axis_center(idx[axis]);
        }
        c
    }

    pub fn center_norm(&self, cell: usize) -> f64 {
        let c = self.center(cell);
        c[0].hypot(c[1])
    }

    pub fn center_max_norm(&self, cell: usize) -> f64 {
        let c = self.center(cell);
        c[0].abs().max(c[1].abs())
    }

    /// Cell index of `idx + shift`, or `None` when it falls outside the box.
    pub fn offset(&self, idx: MultiIndex, shift: Shift) -> Option<usize> {
        let n = self.cells_per_axis() as i64;
        let mut out = [0usize; 2];
        for axis in 0..self.dim {
            let k = idx[axis] as i64 + shift[axis];
            if k < 0 || k >= n {
                return None;
            }
            out[axis] = k as usize;
        }
        Some(self.flat_index(out))
    }

    /// Converts a displacement to a whole number of cells per axis.
    pub fn aligned_shift(&self, y: &[f64]) -> Result<Shift> {
        if y.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "shift has {} components on a {}-dimensional grid",
                y.len(),
                self.dim
            )));
        }
        let h = self.cell_side();
        let mut shift = [0i64; 2];
        for (axis, &component) in y.iter().enumerate() {
            let ratio = component / h;
            let k = ratio.round();
            if !ratio.is_finite() || (ratio - k).abs() > 1e-9 * k.abs().max(1.0) {
                return Err(Error::MisalignedShift {
                    component,
                    cell_side: h,
                });
            }
            shift[axis] = k as i64;
        }
        Ok(shift)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some((cell, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { cell, value });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Evaluates `f` at every cell center. The closure sees only the
    /// grid's `dim` coordinates.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|cell| f(&grid.center(cell)[..grid.dim()]))
            .collect();
        Self::new(grid, values)
    }

    /// Indicator of a cell set.
    pub fn indicator(set: &CellSet) -> Self {
        let mut values = vec![0.0; set.grid.len()];
        for &cell in &set.cells {
            values[cell] = 1.0;
        }
        Self {
            grid: set.grid,
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn abs(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Same function on the grid with cells halved.
    pub fn refine(&self) -> Result<Self> {
        let fine = self.grid.refine()?;
        let values = (0..fine.len())
            .map(|cell| {
                let idx = fine.multi_index(cell);
                self.values[self.grid.flat_index([idx[0] / 2, idx[1] / 2])]
            })
            .collect();
        Ok(Self { grid: fine, values })
    }

    pub(crate) fn ensure_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Analytic family primitives accepted by [`sample`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Primitive {
    Zero,
    Constant {
        value: f64,
    },
    /// `amplitude * exp(-|x - center|^2 / (2 sigma^2))`
    Gaussian {
        center: Vec<f64>,
        sigma: f64,
        amplitude: f64,
    },
    /// Smooth bump `amplitude * exp(1 - 1 / (1 - (|x - center| / radius)^2))`
    /// on the open ball, zero elsewhere.
    Bump {
        center: Vec<f64>,
        radius: f64,
        amplitude: f64,
    },
    /// Indicator of the open ball `B(center, radius)`.
    Indicator {
        center: Vec<f64>,
        radius: f64,
    },
    /// `|x|^exponent` on the closed box `[-support, support]^n`.
    Power {
        exponent: f64,
        support: f64,
    },
    /// Raw per-cell values, row-major.
    Table {
        values: Vec<f64>,
    },
}

fn distance(x: &[f64], center: &[f64]) -> f64 {
    x.iter()
        .zip(center)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Samples a primitive at cell centers.
pub fn sample(primitive: &Primitive, grid: &Grid) -> Result<GridFunction> {
    let check_center = |center: &[f64]| {
        if center.len() == grid.dim() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "center has {} coordinates on a {}-dimensional grid",
                center.len(),
                grid.dim()
            )))
        }
    };
    match primitive {
        Primitive::Zero => Ok(GridFunction::zeros(*grid)),
        Primitive::Constant { value } => GridFunction::from_fn(*grid, |_| *value),
        Primitive::Gaussian {
            center,
            sigma,
            amplitude,
        } => {
            check_center(center)?;
            if !(*sigma > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "gaussian sigma {sigma} must be positive"
                )));
            }
            GridFunction::from_fn(*grid, |x| {
                let d = distance(x, center);
                amplitude * (-(d * d) / (2.0 * sigma * sigma)).exp()
            })
        }
        Primitive::Bump {
            center,
            radius,
            amplitude,
        } => {
            check_center(center)?;
            if !(*radius > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "bump radius {radius} must be positive"
                )));
            }
            GridFunction::from_fn(*grid, |x| {
                let t = distance(x, center) / radius;
                if t < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            })
        }
        Primitive::Indicator { center, radius } => {
            check_center(center)?;
            GridFunction::from_fn(*grid, |x| {
                if distance(x, center) < *radius {
                    1.0
                } else {
                    0.0
                }
            })
        }
        Primitive::Power { exponent, support } => GridFunction::from_fn(*grid, |x| {
            let inside = x.iter().all(|c| c.abs() <= *support);
            if inside {
                x.iter().map(|c| c * c).sum::<f64>().sqrt().powf(*exponent)
            } else {
                0.0
            }
        }),
        Primitive::Table { values } => GridFunction::new(*grid, values.clone()),
    }
}

/// Translation by a grid-aligned displacement `y`: `(τ_y f)(x) = f(x - y)`.
pub fn translate(f: &GridFunction, y: &[f64]) -> Result<GridFunction> {
    let shift = f.grid().aligned_shift(y)?;
    Ok(translate_cells(f, shift))
}

/// Translation by whole cells. Mass leaving the box is dropped; cells
/// entering from outside are zero.
pub fn translate_cells(f: &GridFunction, shift: Shift) -> GridFunction {
    let grid = *f.grid();
    let back = [-shift[0], -shift[1]];
    let values = (0..grid.len())
        .map(|cell| match grid.offset(grid.multi_index(cell), back) {
            Some(src) => f.value(src),
            None => 0.0,
        })
        .collect();
    GridFunction { grid, values }
}

/// Region shape for tails and shift stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Ball,
    Box,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Ball => "ball",
            Region::Box => "box",
        }
    }
}

fn outside(grid: &Grid, cell: usize, radius: f64, region: Region) -> bool {
    match region {
        Region::Ball => grid.center_norm(cell) >= radius,
        Region::Box => grid.center_max_norm(cell) > radius,
    }
}

/// `f` times the indicator of the complement of `B(0, radius)` or
/// `[-radius, radius]^n`, judged by cell centers.
pub fn restrict_outside(f: &GridFunction, radius: f64, region: Region) -> GridFunction {
    let grid = *f.grid();
    let values = (0..grid.len())
        .map(|cell| {
            if outside(&grid, cell, radius, region) {
                f.value(cell)
            } else {
                0.0
            }
        })
        .collect();
    GridFunction { grid, values }
}

/// Complement of [`restrict_outside`].
pub fn restrict_inside(f: &GridFunction, radius: f64, region: Region) -> GridFunction {
    let grid = *f.grid();
    let values = (0..grid.len())
        .map(|cell| {
            if outside(&grid, cell, radius, region) {
                0.0
            } else {
                f.value(cell)
            }
        })
        .collect();
    GridFunction { grid, values }
}

/// A union of grid cells, stored as sorted cell indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    grid: Grid,
    cells: Vec<usize>,
}

impl CellSet {
    pub fn from_cells(grid: Grid, mut cells: Vec<usize>) -> Result<Self> {
        cells.sort_unstable();
        cells.dedup();
        if let Some(&bad) = cells.iter().find(|&&c| c >= grid.len()) {
            return Err(Error::InvalidArgument(format!(
                "cell {bad} is outside the grid"
            )));
        }
        Ok(Self { grid, cells })
    }

    pub fn empty(grid: Grid) -> Self {
        Self {
            grid,
            cells: Vec::new(),
        }
    }

    pub fn all(grid: Grid) -> Self {
        Self {
            grid,
            cells: (0..grid.len()).collect(),
        }
    }

    /// Cells whose centers lie in the open ball `B(0, radius)`.
    pub fn ball(grid: Grid, radius: f64) -> Self {
        let cells = (0..grid.len())
            .filter(|&c| grid.center_norm(c) < radius)
            .collect();
        Self { grid, cells }
    }

    /// Cells whose centers lie in the closed box `[-half, half]^n`.
    pub fn centered_box(grid: Grid, half: f64) -> Self {
        let cells = (0..grid.len())
            .filter(|&c| grid.center_max_norm(c) <= half)
            .collect();
        Self { grid, cells }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Lebesgue measure of the union.
    pub fn measure(&self) -> f64 {
        self.cells.len() as f64 * self.grid.cell_volume()
    }
}

/// A dyadic cube of a [`DyadicPartition`], described by its lower-corner
/// cell and side in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cube {
    grid: Grid,
    corner: MultiIndex,
    side_cells: usize,
}

impl Cube {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn corner(&self) -> MultiIndex {
        self.corner
    }

    pub fn side_cells(&self) -> usize {
        self.side_cells
    }

    pub fn cell_count(&self) -> usize {
        self.side_cells.pow(self.grid.dim() as u32)
    }

    pub fn lower_corner(&self) -> Point {
        let mut p = [0.0; 2];
        let h = self.grid.cell_side();
        for (axis, slot) in p.iter_mut().enumerate().take(self.grid.dim()) {
            *slot = -self.grid.half_side() + self.corner[axis] as f64 * h;
        }
        p
    }

    pub fn measure(&self) -> f64 {
        self.cell_count() as f64 * self.grid.cell_volume()
    }

    /// Flat indices of the cells inside the cube.
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        let s = self.side_cells;
        let second = if self.grid.dim() == 2 { s } else { 1 };
        (0..s).flat_map(move |a| {
            (0..second).map(move |b| {
                self.grid
                    .flat_index([self.corner[0] + a, self.corner[1] + b])
            })
        })
    }
}

/// Partition of `R_m = [-2^m, 2^m]^n` into dyadic cubes of side `2^i`,
/// ordered row-major by cube corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPartition {
    grid: Grid,
    box_exp: i32,
    cube_exp: i32,
}

impl DyadicPartition {
    pub fn new(grid: Grid, box_exp: i32, cube_exp: i32) -> Result<Self> {
        let ordered =
            grid.cell_exp() <= cube_exp && cube_exp <= box_exp && box_exp <= grid.box_level();
        if !ordered {
            return Err(Error::InvalidPartition {
                cell_exp: grid.cell_exp(),
                cube_exp,
                box_exp,
                box_level: grid.box_level(),
            });
        }
        Ok(Self {
            grid,
            box_exp,
            cube_exp,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `m`: the partitioned box is `[-2^m, 2^m]^n`.
    pub fn box_exp(&self) -> i32 {
        self.box_exp
    }

    /// `i`: cubes have side `2^i`.
    pub fn cube_exp(&self) -> i32 {
        self.cube_exp
    }

    pub fn cubes_per_axis(&self) -> usize {
        1usize << (self.box_exp - self.cube_exp + 1)
    }

    pub fn len(&self) -> usize {
        self.cubes_per_axis().pow(self.grid.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn side_cells(&self) -> usize {
        1usize << (self.cube_exp - self.grid.cell_exp())
    }

    /// First cell index (per axis) of `R_m`.
    fn first_cell(&self) -> usize {
        (self.grid.cells_per_axis() - self.cubes_per_axis() * self.side_cells()) / 2
    }

    pub fn cube(&self, q: usize) -> Cube {
        let per_axis = self.cubes_per_axis();
        let qi = if self.grid.dim() == 1 {
            [q, 0]
        } else {
            [q / per_axis, q % per_axis]
        };
        let s = self.side_cells();
        let o = self.first_cell();
        let mut corner = [0usize; 2];
        for axis in 0..self.grid.dim() {
            corner[axis] = o + qi[axis] * s;
        }
        Cube {
            grid: self.grid,
            corner,
            side_cells: s,
        }
    }

    pub fn cubes(&self) -> impl Iterator<Item = Cube> + '_ {
        (0..self.len()).map(|q| self.cube(q))
    }

    /// Index of the cube containing `cell`, or `None` outside `R_m`.
    pub fn cube_of_cell(&self, cell: usize) -> Option<usize> {
        let idx = self.grid.multi_index(cell);
        let o = self.first_cell();
        let s = self.side_cells();
        let per_axis = self.cubes_per_axis();
        let mut q = [0usize; 2];
        for axis in 0..self.grid.dim() {
            let k = idx[axis].checked_sub(o)? / s;
            if k >= per_axis {
                return None;
            }
            q[axis] = k;
        }
        Some(if self.grid.dim() == 1 {
            q[0]
        } else {
            q[0] * per_axis + q[1]
        })
    }

    /// Expands per-cube coefficients into a grid function (zero outside `R_m`).
    pub fn expand(&self, coeffs: &[f64]) -> Result<GridFunction> {
        if coeffs.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        let mut values = vec![0.0; self.grid.len()];
        for (q, cube) in self.cubes().enumerate() {
            for cell in cube.cells() {
                values[cell] = coeffs[q];
            }
        }
        GridFunction::new(self.grid, values)
    }
}

/// Exact mean of `f` over a cube.
pub fn cube_average(f: &GridFunction, cube: &Cube) -> Result<f64> {
    if f.grid() != cube.grid() {
        return Err(Error::GridMismatch);
    }
    let sum: f64 = cube.cells().map(|c| f.value(c)).sum();
    Ok(sum / cube.cell_count() as f64)
}

/// Nonzero grid shifts `s` with `|s h| <= radius` (ball: Euclidean norm,
/// box: max norm).
pub fn shift_stencil(grid: &Grid, radius: f64, region: Region) -> Vec<Shift> {
    let reach = radius / grid.cell_side();
    let k = (reach * (1.0 + 1e-12)).floor().max(0.0) as i64;
    let second = if grid.dim() == 2 { k } else { 0 };
    let mut shifts = Vec::new();
    for a in -k..=k {
        for b in -second..=second {
            if a == 0 && b == 0 {
                continue;
            }
            let keep = match region {
                Region::Box => true,
                Region::Ball => ((a * a + b * b) as f64).sqrt() <= reach * (1.0 + 1e-12),
            };
            if keep {
                shifts.push([a, b]);
            }
        }
    }
    shifts
}

/// Offsets `s` (including zero) whose cell centers lie in the open ball of
/// radius `radius` around a cell center.
pub fn ball_offsets(grid: &Grid, radius: f64) -> Vec<Shift> {
    let reach = radius / grid.cell_side();
    let k = reach.ceil() as i64;
    let second = if grid.dim() == 2 { k } else { 0 };
    let mut offsets = Vec::new();
    for a in -k..=k {
        for b in -second..=second {
            if (((a * a + b * b) as f64).sqrt()) < reach {
                offsets.push([a, b]);
            }
        }
    }
    offsets
}

/// Ball average `x ↦ mean of f over cells with centers in B(x, r)`, with `f`
/// taken as zero outside the box.
pub fn ball_average_field(f: &GridFunction, radius: f64) -> Result<GridFunction> {
    let grid = *f.grid();
    if !(radius >= grid.cell_side() / 2.0) {
        return Err(Error::EmptyStencil {
            radius,
            cell_side: grid.cell_side(),
        });
    }
    let offsets = ball_offsets(&grid, radius);
    let count = offsets.len() as f64;
    let values = (0..grid.len())
        .map(|cell| {
            let idx = grid.multi_index(cell);
            let sum: f64 = offsets
                .iter()
                .filter_map(|&s| grid.offset(idx, s))
                .map(|c| f.value(c))
                .sum();
            sum / count
        })
        .collect();
    GridFunction::new(grid, values)
}
