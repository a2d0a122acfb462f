//! Uniform moduli of a finite family: boundedness, tails outside a ball or
//! box, translation deviation (equicontinuity) and ball-average deviation.
//!
//! Translations are sampled over grid-aligned shifts only, so the
//! translation modulus is a lower bound of the continuum supremum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    ball_average_field, restrict_outside, shift_stencil, Grid, GridFunction, Region, Shift,
};
use crate::spaces::WeightedSpace;

/// Relative rounding budget for inequality checks, scaled by the family bound.
pub const INEQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    grid: Grid,
    members: Vec<GridFunction>,
    labels: Vec<String>,
}

impl Family {
    pub fn new(members: Vec<GridFunction>, labels: Vec<String>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        let grid = *first.grid();
        if members.iter().any(|f| f.grid() != &grid) {
            return Err(Error::GridMismatch);
        }
        if labels.len() != members.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} members",
                labels.len(),
                members.len()
            )));
        }
        Ok(Self {
            grid,
            members,
            labels,
        })
    }

    /// Members labelled `f0, f1, ...`.
    pub fn unlabeled(members: Vec<GridFunction>) -> Result<Self> {
        let labels = (0..members.len()).map(|k| format!("f{k}")).collect();
        Self::new(members, labels)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn members(&self) -> &[GridFunction] {
        &self.members
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &GridFunction)> {
        self.labels.iter().map(String::as_str).zip(&self.members)
    }

    pub(crate) fn check_space(&self, space: &WeightedSpace) -> Result<()> {
        if space.grid() == &self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

fn max_over<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn bound_modulus(family: &Family, space: &WeightedSpace) -> Result<f64> {
    family.check_space(space)?;
    Ok(max_over(
        family
            .members
            .iter()
            .map(|f| space.norm_of_values(f.values())),
    ))
}

/// `max_f ‖f χ_{complement}‖` where the complement is taken outside
/// `B(0, radius)` or `[-radius, radius]^n`.
pub fn tail_modulus(
    family: &Family,
    space: &WeightedSpace,
    radius: f64,
    region: Region,
) -> Result<f64> {
    family.check_space(space)?;
    Ok(max_over(family.members.iter().map(|f| {
        space.norm_of_values(restrict_outside(f, radius, region).values())
    })))
}

/// `‖τ_s f - f‖` for a cell shift `s`, computed without materializing `τ_s f`.
pub(crate) fn shift_deviation(f: &GridFunction, space: &WeightedSpace, shift: Shift) -> f64 {
    let grid = f.grid();
    let back = [-shift[0], -shift[1]];
    let p = space.p();
    let weight = space.weight().values();
    let mut sum = 0.0;
    for (cell, &w) in weight.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let moved = grid
            .offset(grid.multi_index(cell), back)
            .map_or(0.0, |src| f.value(src));
        sum += (moved - f.value(cell)).abs().powf(p) * w;
    }
    (sum * grid.cell_volume()).powf(1.0 / p)
}

fn admissible_shifts(grid: &Grid, radius: f64, stencil: Region) -> Result<Vec<Shift>> {
    let shifts = shift_stencil(grid, radius, stencil);
    if shifts.is_empty() {
        return Err(Error::EmptyStencil {
            radius,
            cell_side: grid.cell_side(),
        });
    }
    Ok(shifts)
}

/// `max_{s} ‖τ_{s h} f - f‖` over nonzero grid shifts with `|s h| <= radius`.
pub fn member_translation_modulus(
    f: &GridFunction,
    space: &WeightedSpace,
    radius: f64,
    stencil: Region,
) -> Result<f64> {
    space.ensure_grid(f)?;
    let shifts = admissible_shifts(f.grid(), radius, stencil)?;
    Ok(max_over(
        shifts.iter().map(|&s| shift_deviation(f, space, s)),
    ))
}

/// Equicontinuity modulus `max_f max_{0 < |y| <= r} ‖τ_y f - f‖` over
/// grid-aligned `y`. With `Region::Box` and `r = 2^i` this is the
/// supremum over `y ∈ R_i`.
pub fn translation_modulus(
    family: &Family,
    space: &WeightedSpace,
    radius: f64,
    stencil: Region,
) -> Result<f64> {
    family.check_space(space)?;
    let shifts = admissible_shifts(&family.grid, radius, stencil)?;
    Ok(max_over(family.members.iter().flat_map(|f| {
        shifts.iter().map(move |&s| shift_deviation(f, space, s))
    })))
}

/// `max_f ‖A_r f - f‖` with `A_r` the ball average of [`ball_average_field`].
pub fn averaged_modulus(family: &Family, space: &WeightedSpace, radius: f64) -> Result<f64> {
    family.check_space(space)?;
    let mut best: f64 = 0.0;
    for f in &family.members {
        let avg = ball_average_field(f, radius)?;
        best = best.max(space.distance(&avg, f)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CStarCheck {
    pub radius: f64,
    pub averaged: f64,
    pub translation: f64,
    pub tolerance: f64,
    /// `translation + tolerance - averaged`; nonnegative on success.
    pub margin: f64,
    pub passed: bool,
}

/// Checks `averaged_modulus(r) <= translation_modulus(r) + tol`. The ball
/// average over the open stencil is a mean of translates whose shifts all
/// lie in the closed translation stencil, so Minkowski gives the bound for
/// `p >= 1`. Quasi-norms are refused.
pub fn verify_c_implies_cstar(
    family: &Family,
    space: &WeightedSpace,
    radius: f64,
) -> Result<CStarCheck> {
    if !space.is_banach() {
        return Err(Error::InvalidExponent(space.p()));
    }
    let averaged = averaged_modulus(family, space, radius)?;
    // No nonzero shift fits below one cell; the average is then the identity.
    let translation = if radius < family.grid.cell_side() {
        0.0
    } else {
        translation_modulus(family, space, radius, Region::Ball)?
    };
    let tolerance = INEQUALITY_TOL * bound_modulus(family, space)?;
    let margin = translation + tolerance - averaged;
    Ok(CStarCheck {
        radius,
        averaged,
        translation,
        tolerance,
        margin,
        passed: margin >= 0.0,
    })
}

/// Sampled modulus curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliReport {
    pub bound: f64,
    pub tail_region: Region,
    pub stencil: Region,
    /// `(N, tail_modulus(N))`, `N` increasing.
    pub tail: Vec<(f64, f64)>,
    /// `(r, translation_modulus(r))`, `r` increasing.
    pub translation: Vec<(f64, f64)>,
    /// `(r, averaged_modulus(r))`, `r` increasing.
    pub averaged: Vec<(f64, f64)>,
}

impl ModuliReport {
    pub fn compute(
        family: &Family,
        space: &WeightedSpace,
        radii: &[f64],
        tail_radii: &[f64],
        tail_region: Region,
        stencil: Region,
    ) -> Result<Self> {
        let mut radii = radii.to_vec();
        radii.sort_by(f64::total_cmp);
        let mut tail_radii = tail_radii.to_vec();
        tail_radii.sort_by(f64::total_cmp);
        let bound = bound_modulus(family, space)?;
        let tail = tail_radii
            .iter()
            .map(|&n| Ok((n, tail_modulus(family, space, n, tail_region)?)))
            .collect::<Result<_>>()?;
        let translation = radii
            .iter()
            .map(|&r| Ok((r, translation_modulus(family, space, r, stencil)?)))
            .collect::<Result<_>>()?;
        let averaged = radii
            .iter()
            .map(|&r| Ok((r, averaged_modulus(family, space, r)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            bound,
            tail_region,
            stencil,
            tail,
            translation,
            averaged,
        })
    }

    /// Tail nonincreasing, translation nondecreasing. The averaged curve has
    /// no monotonicity guarantee and is not checked.
    pub fn is_monotone(&self) -> bool {
        self.tail.windows(2).all(|w| w[1].1 <= w[0].1)
            && self.translation.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    /// Long-format table with header `modulus,parameter,value`.
    pub fn to_csv(&self) -> String {
        let mut rows = vec![("bound".to_string(), 0.0, self.bound)];
        let tail = format!("tail_{}", self.tail_region.as_str());
        let translation = format!("translation_{}", self.stencil.as_str());
        rows.extend(self.tail.iter().map(|&(n, v)| (tail.clone(), n, v)));
        rows.extend(
            self.translation
                .iter()
                .map(|&(r, v)| (translation.clone(), r, v)),
        );
        rows.extend(
            self.averaged
                .iter()
                .map(|&(r, v)| ("averaged".to_string(), r, v)),
        );
        crate::report::csv_table(
            &["modulus", "parameter", "value"],
            rows.iter().map(|(name, x, v)| {
                vec![
                    name.clone(),
                    crate::report::fmt_f64(*x),
                    crate::report::fmt_f64(*v),
                ]
            }),
        )
    }
}
