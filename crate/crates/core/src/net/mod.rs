//! Explicit finite ε-nets for families in weighted `L^p` (`p >= 1`).
//!
//! The construction splits the distance budget into three equal parts:
//!
//! 1. truncate to a box `R_m = [-2^m, 2^m]^n` whose tail is below `ε/3`;
//! 2. replace `f χ_{R_m}` by its averages over dyadic cubes of side `2^i`,
//!    with `i` chosen so that `2^n sup_{y ∈ R_i} ‖τ_y f - f‖ < ε/3`;
//! 3. round each cube average to a lattice `δZ` with
//!    `(δ/2) ‖χ_{R_m}‖ <= ε/3`.
//!
//! The rounding error is dominated pointwise by `(δ/2) χ_{R_m}`, so step 3
//! needs only lattice monotonicity and works for every weight.
//!
//! The step "choose δ with ∫_{R_δ} ‖τ_y f - f‖ dy < ∞" from the classical
//! argument is subsumed by the mesh selection: every discrete modulus is
//! finite.

mod certificate;
mod greedy;
mod validate;

pub use certificate::{
    Budget, CubeWitness, MemberRecord, NetCertificate, NetPlan, PartitionDescriptor, QuasiAudit,
    QuasiRecord, Variant, CERTIFICATE_FORMAT,
};
pub use greedy::{greedy_net, GreedyNet};
pub use validate::{validate_certificate, ValidationReport};

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    cube_average, pow2, restrict_outside, DyadicPartition, GridFunction, Region, Shift,
};
use crate::moduli::{
    member_translation_modulus, shift_deviation, tail_modulus, Family, INEQUALITY_TOL,
};
use crate::spaces::WeightedSpace;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )))
    }
}

/// Smallest `m` with `tail_modulus(2^m, box) < ε/3`, searched from the cell
/// exponent up to the box level. Returns `m` and the tail value.
pub fn select_tail_level(
    family: &Family,
    space: &WeightedSpace,
    epsilon: f64,
) -> Result<(i32, f64)> {
    check_epsilon(epsilon)?;
    let grid = family.grid();
    let target = epsilon / 3.0;
    let mut best = f64::INFINITY;
    for m in grid.cell_exp()..=grid.box_level() {
        let tail = tail_modulus(family, space, pow2(m), Region::Box)?;
        if tail < target {
            return Ok((m, tail));
        }
        best = best.min(tail);
    }
    Err(Error::TailNotSmall {
        target,
        best,
        level: grid.box_level(),
    })
}

/// Largest `i <= max_exp` with `translation_modulus(2^i, box) < 2^{-n} ε/3`.
/// Returns `i` and the modulus at `2^i`.
///
/// The box stencils are nested, so levels are scanned upward and only the
/// shifts new to each level are evaluated; the scan stops at the first level
/// that breaks the threshold.
pub fn select_mesh(
    family: &Family,
    space: &WeightedSpace,
    epsilon: f64,
    max_exp: i32,
) -> Result<(i32, f64)> {
    check_epsilon(epsilon)?;
    let grid = family.grid();
    let dim = grid.dim();
    let target = pow2(-(dim as i32)) * epsilon / 3.0;
    let mut modulus: f64 = 0.0;
    let mut accepted: Option<(i32, f64)> = None;
    let mut reach_prev: i64 = 0;
    for i in grid.cell_exp()..=max_exp {
        let reach = 1i64 << (i - grid.cell_exp());
        let second = if dim == 2 { reach } else { 0 };
        'shifts: for a in -reach..=reach {
            for b in -second..=second {
                if a.abs().max(b.abs()) <= reach_prev {
                    continue;
                }
                let shift: Shift = [a, b];
                for f in family.members() {
                    modulus = modulus.max(shift_deviation(f, space, shift));
                    if modulus >= target {
                        break 'shifts;
                    }
                }
            }
        }
        if modulus >= target {
            break;
        }
        accepted = Some((i, modulus));
        reach_prev = reach;
    }
    accepted.ok_or(Error::MeshTooCoarse { target, modulus })
}

/// Cube coefficients of the averaging projector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    pub coeffs: Vec<f64>,
    /// Cubes on which the weight vanishes identically (vanishing variant).
    pub null_cubes: Vec<usize>,
    /// One positive-weight cell per non-null cube (vanishing variant).
    pub witnesses: Vec<CubeWitness>,
}

/// Averages `f` over every cube of `partition`. In the vanishing variant a
/// cube with `‖χ_Q‖ = 0` gets coefficient zero, and every other cube records
/// a positive-weight cell.
pub fn project_phi(
    f: &GridFunction,
    partition: &DyadicPartition,
    space: &WeightedSpace,
    variant: Variant,
) -> Result<Projection> {
    space.ensure_grid(f)?;
    if partition.grid() != f.grid() {
        return Err(Error::GridMismatch);
    }
    let weight = space.weight();
    let mut coeffs = Vec::with_capacity(partition.len());
    let mut null_cubes = Vec::new();
    let mut witnesses = Vec::new();
    for (q, cube) in partition.cubes().enumerate() {
        if variant == Variant::Vanishing {
            match cube.cells().find(|&c| weight.value(c) > 0.0) {
                Some(cell) => witnesses.push(CubeWitness { cube: q, cell }),
                None => {
                    null_cubes.push(q);
                    coeffs.push(0.0);
                    continue;
                }
            }
        }
        let avg = cube_average(f, &cube)?;
        if !avg.is_finite() {
            return Err(Error::NonFinite {
                cell: q,
                value: avg,
            });
        }
        coeffs.push(avg);
    }
    Ok(Projection {
        coeffs,
        null_cubes,
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionError {
    /// `‖f χ_{R_m} - Φ(f χ_{R_m})‖`.
    pub measured: f64,
    /// `2^n sup_{y ∈ R_i} ‖τ_y f - f‖`.
    pub guarantee: f64,
}

impl ProjectionError {
    pub fn within_guarantee(&self, tol: f64) -> bool {
        self.measured <= self.guarantee + tol
    }
}

pub fn projection_error(
    f: &GridFunction,
    coeffs: &[f64],
    partition: &DyadicPartition,
    space: &WeightedSpace,
) -> Result<ProjectionError> {
    let inside = restrict_outside(f, pow2(partition.box_exp()), Region::Box);
    let inside = f.sub(&inside)?;
    let projected = partition.expand(coeffs)?;
    let measured = space.distance(&inside, &projected)?;
    let modulus = member_translation_modulus(f, space, pow2(partition.cube_exp()), Region::Box)?;
    Ok(ProjectionError {
        measured,
        guarantee: pow2(f.grid().dim() as i32) * modulus,
    })
}

/// Lattice-rounded coefficient vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizedNet {
    /// Distinct rounded vectors in order of first appearance.
    pub elements: Vec<Vec<f64>>,
    /// Input vector → element index.
    pub assignment: Vec<usize>,
    /// `‖Σ_Q (c_Q - ĉ_Q) χ_Q‖` per input vector.
    pub errors: Vec<f64>,
    /// `(δ/2) ‖χ_{R_m}‖`, the bound every error obeys.
    pub bound: f64,
}

/// Rounds every coefficient to the nearest point of `δZ` and deduplicates.
pub fn quantize_net(
    coeff_vectors: &[Vec<f64>],
    delta: f64,
    coeff_bound: f64,
    partition: &DyadicPartition,
    space: &WeightedSpace,
) -> Result<QuantizedNet> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lattice step must be positive, got {delta}"
        )));
    }
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut elements = Vec::new();
    let mut assignment = Vec::with_capacity(coeff_vectors.len());
    let mut errors = Vec::with_capacity(coeff_vectors.len());
    for coeffs in coeff_vectors {
        if coeffs.len() != partition.len() {
            return Err(Error::LengthMismatch {
                expected: partition.len(),
                got: coeffs.len(),
            });
        }
        if let Some(&value) = coeffs.iter().find(|c| !(c.abs() <= coeff_bound)) {
            return Err(Error::CoefficientOutOfBound {
                value,
                bound: coeff_bound,
            });
        }
        let lattice: Vec<i64> = coeffs.iter().map(|c| (c / delta).round() as i64).collect();
        let rounded: Vec<f64> = lattice.iter().map(|&k| k as f64 * delta).collect();
        let residual: Vec<f64> = coeffs.iter().zip(&rounded).map(|(c, r)| c - r).collect();
        errors.push(space.norm(&partition.expand(&residual)?)?);
        let next = elements.len();
        let slot = *index.entry(lattice).or_insert(next);
        if slot == next {
            elements.push(rounded);
        }
        assignment.push(slot);
    }
    let all_cells: Vec<usize> = partition
        .cubes()
        .flat_map(|c| c.cells().collect::<Vec<_>>())
        .collect();
    Ok(QuantizedNet {
        elements,
        assignment,
        errors,
        bound: delta / 2.0 * space.indicator_norm(&all_cells),
    })
}

/// Lattice step with `(δ/2) ‖χ_{R_m}‖ <= ε/3`.
fn lattice_step(epsilon: f64, box_norm: f64) -> f64 {
    if box_norm == 0.0 {
        return epsilon;
    }
    let third = epsilon / 3.0;
    let mut delta = 2.0 * third / box_norm;
    while delta / 2.0 * box_norm > third {
        delta = delta.next_down();
    }
    delta
}

/// Runs the three-step construction and measures every member's distance to
/// its net element. Requires `p >= 1`; exponents below one go through
/// [`crate::quasi::quasi_certificate`].
pub fn build_certificate(
    family: &Family,
    space: &WeightedSpace,
    epsilon: f64,
    variant: Variant,
) -> Result<NetCertificate> {
    check_epsilon(epsilon)?;
    if !space.is_banach() {
        return Err(Error::InvalidExponent(space.p()));
    }
    if variant == Variant::Banach && !space.is_strict() {
        return Err(Error::InvalidArgument(
            "weight vanishes on some cells; use the vanishing variant".into(),
        ));
    }
    if space.grid() != family.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *family.grid();
    let (m, tail_bound) = select_tail_level(family, space, epsilon)?;
    let (i_eps, mesh_modulus) = select_mesh(family, space, epsilon, m)?;
    let partition = DyadicPartition::new(grid, m, i_eps)?;

    let projections = family
        .members()
        .iter()
        .map(|f| project_phi(f, &partition, space, variant))
        .collect::<Result<Vec<_>>>()?;
    let coeff_vectors: Vec<Vec<f64>> = projections.iter().map(|p| p.coeffs.clone()).collect();
    let coeff_max = coeff_vectors
        .iter()
        .flatten()
        .fold(0.0f64, |acc, c| acc.max(c.abs()));

    let box_cells: Vec<usize> = partition
        .cubes()
        .flat_map(|c| c.cells().collect::<Vec<_>>())
        .collect();
    let box_indicator_norm = space.indicator_norm(&box_cells);
    let delta = lattice_step(epsilon, box_indicator_norm);
    let coeff_bound = (coeff_max / delta).ceil() * delta;
    let quantized = quantize_net(
        &coeff_vectors,
        delta,
        coeff_bound.max(coeff_max),
        &partition,
        space,
    )?;

    let elements: Vec<GridFunction> = quantized
        .elements
        .iter()
        .map(|c| partition.expand(c))
        .collect::<Result<_>>()?;
    let mut members = Vec::with_capacity(family.len());
    let mut budget = Budget {
        third: epsilon / 3.0,
        tail: tail_bound,
        projection: 0.0,
        quantization: 0.0,
    };
    for (k, (label, f)) in family.iter().enumerate() {
        let net_index = quantized.assignment[k];
        let distance = space.distance(f, &elements[net_index])?;
        let tail = space.norm(&restrict_outside(f, pow2(m), Region::Box))?;
        let proj = projection_error(f, &projections[k].coeffs, &partition, space)?;
        budget.projection = budget.projection.max(proj.measured);
        budget.quantization = budget.quantization.max(quantized.errors[k]);
        if !(distance < epsilon) {
            return Err(Error::AuditFailed {
                label: label.to_string(),
                distance,
                epsilon,
            });
        }
        members.push(MemberRecord {
            label: label.to_string(),
            net_index,
            distance,
            tail,
            projection_error: proj.measured,
            projection_guarantee: proj.guarantee,
            quantization_error: quantized.errors[k],
        });
    }

    let first = projections.first().expect("family is nonempty");
    Ok(NetCertificate {
        format: CERTIFICATE_FORMAT.to_string(),
        grid,
        p: space.p(),
        variant,
        plan: NetPlan {
            epsilon,
            m,
            i_eps,
            delta,
            coeff_max,
            coeff_bound: coeff_bound.max(coeff_max),
            box_indicator_norm,
            mesh_modulus,
            budget,
        },
        partition: PartitionDescriptor::of(&partition),
        net_elements: quantized.elements,
        members,
        null_cubes: first.null_cubes.clone(),
        witnesses: first.witnesses.clone(),
        quasi: None,
    })
}

/// Tolerance for the projection inequality, relative to the family bound.
pub fn projection_tolerance(bound: f64) -> f64 {
    INEQUALITY_TOL * bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample, Grid, Primitive};
    use crate::moduli::{bound_modulus, translation_modulus};
    use crate::spaces::WeightSpec;

    fn gaussian(g: Grid, center: f64, sigma: f64) -> GridFunction {
        sample(
            &Primitive::Gaussian {
                center: vec![center],
                sigma,
                amplitude: 1.0,
            },
            &g,
        )
        .unwrap()
    }

    #[test]
    fn tail_level_examples() {
        let g = Grid::new(1, 2, -4).unwrap();
        let space = WeightedSpace::lebesgue(1.0, g).unwrap();
        let supported = GridFunction::from_fn(g, |x| {
            if x[0].abs() < 1.0 {
                1.0 - x[0].abs()
            } else {
                0.0
            }
        })
        .unwrap();
        let fam = Family::unlabeled(vec![supported]).unwrap();
        assert_eq!(select_tail_level(&fam, &space, 0.01).unwrap().0, 0);

        let zero = Family::unlabeled(vec![GridFunction::zeros(g)]).unwrap();
        assert_eq!(
            select_tail_level(&zero, &space, 0.01).unwrap(),
            (g.cell_exp(), 0.0)
        );

        // mass in the outermost cells is only captured by the whole box
        let heavy = GridFunction::from_fn(g, |x| if x[0].abs() > 3.9 { 4.0 } else { 0.0 }).unwrap();
        let fam = Family::unlabeled(vec![heavy]).unwrap();
        assert_eq!(select_tail_level(&fam, &space, 0.1).unwrap(), (2, 0.0));

        // weight supported outside [-3, 3]
        let w = GridFunction::from_fn(g, |x| if x[0].abs() > 3.0 { 1.0 } else { 0.0 }).unwrap();
        let space_out = WeightedSpace::new(1.0, w).unwrap();
        let fam = Family::unlabeled(vec![GridFunction::constant(g, 1.0)]).unwrap();
        assert_eq!(select_tail_level(&fam, &space_out, 0.1).unwrap().0, 2);
        assert!(select_tail_level(&fam, &space_out, 0.0).is_err());
    }

    #[test]
    fn mesh_for_unit_indicator_matches_exact_modulus() {
        // Oracle: ‖τ_y χ_[0,1) - χ_[0,1)‖_1 = 2|y| for |y| <= 1, so the
        // largest i with 2 * 2^i < 2^-1 ε/3 is floor(log2(ε/12)).
        let g = Grid::new(1, 2, -10).unwrap();
        let space = WeightedSpace::lebesgue(1.0, g).unwrap();
        let f = GridFunction::from_fn(g, |x| if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 })
            .unwrap();
        let fam = Family::unlabeled(vec![f]).unwrap();
        for eps in [0.1, 0.05, 0.3] {
            let (i, modulus) = select_mesh(&fam, &space, eps, 2).unwrap();
            let mut expected = g.cell_exp();
            while 2.0 * pow2(expected + 1) < eps / 6.0 {
                expected += 1;
            }
            assert_eq!(i, expected, "eps {eps}");
            assert_eq!(modulus, 2.0 * pow2(i));
            assert_eq!(
                modulus,
                translation_modulus(&fam, &space, pow2(i), Region::Box).unwrap()
            );
        }
        assert_eq!(select_mesh(&fam, &space, 0.1, 2).unwrap().0, -7);
        assert!(matches!(
            select_mesh(&fam, &space, 1e-4, 2),
            Err(Error::MeshTooCoarse { .. })
        ));
    }

    #[test]
    fn mesh_coarsest_for_constants_and_huge_epsilon() {
        let g = Grid::new(1, 1, -3).unwrap();
        let w = GridFunction::from_fn(g, |x| if x[0].abs() < 0.5 { 1.0 } else { 0.0 }).unwrap();
        let space = WeightedSpace::new(2.0, w).unwrap();
        let fam = Family::unlabeled(vec![GridFunction::constant(g, 1.0)]).unwrap();
        // shifts up to 1 keep the weighted region inside [-2, 2]; a shift of 2 does not
        assert_eq!(select_mesh(&fam, &space, 1e-6, 1).unwrap(), (0, 0.0));
        let unit = WeightedSpace::lebesgue(2.0, g).unwrap();
        let bump = Family::unlabeled(vec![gaussian(g, 0.0, 0.3)]).unwrap();
        assert_eq!(select_mesh(&bump, &unit, 1e6, 0).unwrap().0, 0);
    }

    #[test]
    fn project_phi_examples() {
        let g = Grid::new(1, 1, -3).unwrap();
        let space = WeightedSpace::lebesgue(2.0, g).unwrap();
        let part = DyadicPartition::new(g, 1, -1).unwrap();
        let c = GridFunction::constant(g, 2.5);
        for variant in [Variant::Banach, Variant::Vanishing] {
            let proj = project_phi(&c, &part, &space, variant).unwrap();
            assert!(proj.coeffs.iter().all(|&v| v == 2.5));
            assert!(proj.null_cubes.is_empty());
        }

        // weight vanishing on the cube [0, 0.5)
        let w = GridFunction::from_fn(g, |x| if (0.0..0.5).contains(&x[0]) { 0.0 } else { 1.0 })
            .unwrap();
        let vspace = WeightedSpace::new(2.0, w).unwrap();
        let proj = project_phi(&c, &part, &vspace, Variant::Vanishing).unwrap();
        assert_eq!(proj.null_cubes, vec![4]);
        assert_eq!(proj.coeffs[4], 0.0);
        assert_eq!(proj.witnesses.len(), part.len() - 1);
        for wit in &proj.witnesses {
            assert!(vspace.weight().value(wit.cell) > 0.0);
            assert_eq!(part.cube_of_cell(wit.cell), Some(wit.cube));
        }

        // half of R_m, cube straddling the boundary at 0.25
        let half = GridFunction::from_fn(g, |x| if x[0] < 0.25 { 1.0 } else { 0.0 }).unwrap();
        let proj = project_phi(&half, &part, &space, Variant::Banach).unwrap();
        assert_eq!(proj.coeffs[4], 0.5);
        assert_eq!(proj.coeffs[3], 1.0);
        assert_eq!(proj.coeffs[5], 0.0);
    }

    #[test]
    fn projection_error_examples() {
        let g = Grid::new(1, 1, -5).unwrap();
        let space = WeightedSpace::from_spec(2.0, &WeightSpec::Power(0.5), &g).unwrap();
        let part = DyadicPartition::new(g, 1, -2).unwrap();
        let c = GridFunction::constant(g, 1.0);
        let proj = project_phi(&c, &part, &space, Variant::Banach).unwrap();
        assert_eq!(
            projection_error(&c, &proj.coeffs, &part, &space)
                .unwrap()
                .measured,
            0.0
        );

        let f = gaussian(g, 0.2, 0.4);
        let proj = project_phi(&f, &part, &space, Variant::Banach).unwrap();
        let err = projection_error(&f, &proj.coeffs, &part, &space).unwrap();
        assert!(err.measured > 0.0);
        assert!(err.within_guarantee(projection_tolerance(space.norm(&f).unwrap())));

        let zeros = vec![0.0; part.len()];
        let degenerate = projection_error(&f, &zeros, &part, &space).unwrap();
        assert!((degenerate.measured - space.norm(&f).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn quantize_examples() {
        let g = Grid::new(1, 0, -2).unwrap();
        let space = WeightedSpace::lebesgue(1.0, g).unwrap();
        let part = DyadicPartition::new(g, 0, -1).unwrap();
        let on_lattice = vec![vec![0.5, -0.25, 0.0, 1.0]];
        let q = quantize_net(&on_lattice, 0.25, 1.0, &part, &space).unwrap();
        assert_eq!(q.elements, on_lattice);
        assert_eq!(q.errors, vec![0.0]);

        let coarse = quantize_net(&[vec![0.3, -0.3, 0.0, 0.5]], 1.0, 0.5, &part, &space).unwrap();
        assert!(coarse.errors[0] <= coarse.bound);
        assert_eq!(coarse.bound, 0.5 * 2.0);

        let close = vec![vec![0.10, 0.2, 0.3, 0.4], vec![0.11, 0.21, 0.29, 0.41]];
        let q = quantize_net(&close, 0.25, 1.0, &part, &space).unwrap();
        assert_eq!(q.elements.len(), 1);
        assert_eq!(q.assignment, vec![0, 0]);

        assert!(matches!(
            quantize_net(&[vec![2.0, 0.0, 0.0, 0.0]], 0.25, 1.0, &part, &space),
            Err(Error::CoefficientOutOfBound { .. })
        ));
    }

    #[test]
    fn lattice_step_respects_third() {
        for (eps, norm) in [(0.1, 3.0), (1.0 / 7.0, 0.3), (2.0, 1e-3)] {
            let d = lattice_step(eps, norm);
            assert!(d / 2.0 * norm <= eps / 3.0);
            assert!(d > 0.999_999 * 2.0 * eps / (3.0 * norm));
        }
    }

    #[test]
    fn zero_and_singleton_families() {
        let g = Grid::new(1, 1, -8).unwrap();
        let space = WeightedSpace::lebesgue(2.0, g).unwrap();
        let zero = Family::unlabeled(vec![GridFunction::zeros(g)]).unwrap();
        let cert = build_certificate(&zero, &space, 0.1, Variant::Banach).unwrap();
        assert_eq!(cert.net_size(), 1);
        assert!(cert.net_elements[0].iter().all(|&c| c == 0.0));
        assert_eq!(cert.members[0].distance, 0.0);

        let single = Family::unlabeled(vec![gaussian(g, 0.0, 0.5)]).unwrap();
        let eps = 0.1 * bound_modulus(&single, &space).unwrap();
        let cert = build_certificate(&single, &space, eps, Variant::Banach).unwrap();
        assert_eq!(cert.net_size(), 1);
        assert!(cert.members[0].distance < eps);
        assert!(cert.plan.budget.holds());
    }

    #[test]
    fn build_rejects_quasi_and_null_weights_in_banach_mode() {
        let g = Grid::new(1, 0, -3).unwrap();
        let fam = Family::unlabeled(vec![GridFunction::zeros(g)]).unwrap();
        let quasi = WeightedSpace::lebesgue(0.5, g).unwrap();
        assert!(matches!(
            build_certificate(&fam, &quasi, 0.1, Variant::Banach),
            Err(Error::InvalidExponent(_))
        ));
        let mut w = vec![1.0; g.len()];
        w[0] = 0.0;
        let null = WeightedSpace::new(1.0, GridFunction::new(g, w).unwrap()).unwrap();
        assert!(build_certificate(&fam, &null, 0.1, Variant::Banach).is_err());
        assert!(build_certificate(&fam, &null, 0.1, Variant::Vanishing).is_ok());
        assert!(build_certificate(&fam, &null, 0.0, Variant::Vanishing).is_err());
    }

    #[test]
    fn idempotent_on_cube_constants() {
        let g = Grid::new(2, 0, -3).unwrap();
        let space = WeightedSpace::lebesgue(1.0, g).unwrap();
        let part = DyadicPartition::new(g, 0, -1).unwrap();
        let coeffs: Vec<f64> = (0..part.len()).map(|q| q as f64 * 0.5 - 1.0).collect();
        let f = part.expand(&coeffs).unwrap();
        let proj = project_phi(&f, &part, &space, Variant::Banach).unwrap();
        assert_eq!(proj.coeffs, coeffs);
        assert_eq!(
            projection_error(&f, &proj.coeffs, &part, &space)
                .unwrap()
                .measured,
            0.0
        );
    }
}
