//! Certificate auditing from scratch.
//!
//! Nothing here reuses the builder's projection, expansion or norm code:
//! cube membership is recomputed from cell coordinates and norms are summed
//! directly from the weight values.

use serde::Serialize;

use super::certificate::{NetCertificate, Variant, CERTIFICATE_FORMAT};
use crate::grid::Grid;
use crate::moduli::Family;
use crate::quasi::{select_power, transfer_family};
use crate::spaces::WeightedSpace;

const LATTICE_TOL: f64 = 1e-9;
const RECORD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub epsilon: f64,
    pub members_checked: usize,
    /// Largest recomputed member-to-net distance in the space of the net.
    pub max_distance: f64,
    /// Largest recomputed original-space distance (exponents below one).
    pub max_original_distance: Option<f64>,
    pub failures: Vec<String>,
}

/// Cube of `cell` in the certificate's partition, from cell coordinates.
fn cube_index(grid: &Grid, box_exp: i32, cube_exp: i32, cell: usize) -> Option<usize> {
    let per_axis = grid.cells_per_axis();
    let side = 1usize << (cube_exp - grid.cell_exp());
    let box_cells = 1usize << (box_exp - grid.cell_exp() + 1);
    let lo = (per_axis - box_cells) / 2;
    let cubes_per_axis = box_cells / side;
    let coords = if grid.dim() == 1 {
        vec![cell]
    } else {
        vec![cell / per_axis, cell % per_axis]
    };
    let mut q = 0;
    for k in coords {
        if k < lo || k >= lo + box_cells {
            return None;
        }
        q = q * cubes_per_axis + (k - lo) / side;
    }
    Some(q)
}

fn element_values(grid: &Grid, box_exp: i32, cube_exp: i32, coeffs: &[f64]) -> Vec<f64> {
    (0..grid.len())
        .map(|cell| cube_index(grid, box_exp, cube_exp, cell).map_or(0.0, |q| coeffs[q]))
        .collect()
}

fn raw_distance(weight: &[f64], volume: f64, p: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for ((&w, &x), &y) in weight.iter().zip(a).zip(b) {
        if w > 0.0 {
            sum += w * (x - y).abs().powf(p);
        }
    }
    (sum * volume).powf(1.0 / p)
}

fn close(recorded: f64, measured: f64) -> bool {
    (recorded - measured).abs() <= RECORD_TOL * measured.abs().max(1e-300) + 1e-15
}

/// Audits `certificate` against `family` in `space`. For certificates that
/// carry a power-transfer record, `space` is the original quasi-normed
/// space; the net itself is audited in the transferred space and every
/// member is audited again in the original one.
pub fn validate_certificate(
    family: &Family,
    certificate: &NetCertificate,
    space: &WeightedSpace,
) -> ValidationReport {
    let mut failures = Vec::new();
    let mut report = ValidationReport {
        passed: false,
        epsilon: certificate.plan.epsilon,
        members_checked: 0,
        max_distance: 0.0,
        max_original_distance: None,
        failures: Vec::new(),
    };
    if certificate.format != CERTIFICATE_FORMAT {
        failures.push(format!(
            "unknown certificate format {:?}",
            certificate.format
        ));
    }
    if family.grid() != &certificate.grid || space.grid() != &certificate.grid {
        failures.push("certificate grid does not match the family".into());
        report.failures = failures;
        return report;
    }

    let (working_family, working_space) = match &certificate.quasi {
        None => {
            if certificate.p != space.p() {
                failures.push(format!(
                    "certificate exponent {} differs from space exponent {}",
                    certificate.p,
                    space.p()
                ));
            }
            (family.clone(), space.clone())
        }
        Some(record) => {
            let n = match select_power(space.p()) {
                Ok(n) => n,
                Err(e) => {
                    failures.push(format!("transfer record on a space that needs none: {e}"));
                    report.failures = failures;
                    return report;
                }
            };
            if record.n != n || record.p != space.p() {
                failures.push(format!(
                    "transfer record (p = {}, N = {}) does not match p = {}",
                    record.p,
                    record.n,
                    space.p()
                ));
            }
            let transferred = transfer_family(family, n, record.split)
                .and_then(|fam| space.with_exponent(space.p() * n as f64).map(|s| (fam, s)));
            match transferred {
                Ok(pair) => pair,
                Err(e) => {
                    failures.push(format!("cannot transfer family: {e}"));
                    report.failures = failures;
                    return report;
                }
            }
        }
    };
    if certificate.quasi.is_some() && certificate.p != working_space.p() {
        failures.push(format!(
            "certificate exponent {} differs from transferred exponent {}",
            certificate.p,
            working_space.p()
        ));
    }

    let grid = certificate.grid;
    let plan = &certificate.plan;
    let p = certificate.p;
    let weight = working_space.weight().values();
    let volume = grid.cell_volume();
    let (box_exp, cube_exp) = (
        certificate.partition.box_exp,
        certificate.partition.cube_exp,
    );
    let layout_ok = grid.cell_exp() <= cube_exp
        && cube_exp <= box_exp
        && box_exp <= grid.box_level()
        && box_exp == plan.m
        && cube_exp == plan.i_eps
        && certificate.partition.dim == grid.dim()
        && certificate.partition.cubes_per_axis == 1usize << (box_exp - cube_exp + 1);
    if !layout_ok {
        failures.push("partition descriptor is inconsistent with the plan".into());
        report.failures = failures;
        return report;
    }
    let cube_count = certificate.partition.cube_count();

    // lattice membership
    if !(plan.delta > 0.0 && plan.delta.is_finite()) {
        failures.push(format!("lattice step {} is not positive", plan.delta));
    }
    for (e, element) in certificate.net_elements.iter().enumerate() {
        if element.len() != cube_count {
            failures.push(format!(
                "net element {e} has {} coefficients, expected {cube_count}",
                element.len()
            ));
            continue;
        }
        for (q, &c) in element.iter().enumerate() {
            let k = c / plan.delta;
            if !((k - k.round()).abs() <= LATTICE_TOL) {
                failures.push(format!(
                    "net element {e} coefficient {q} = {c:e} is off the lattice"
                ));
            }
            if !(c.abs() <= plan.coeff_bound * (1.0 + 1e-12)) {
                failures.push(format!(
                    "net element {e} coefficient {q} = {c:e} exceeds the bound {:e}",
                    plan.coeff_bound
                ));
            }
        }
    }
    if failures
        .iter()
        .any(|f| f.contains("coefficients, expected"))
    {
        report.failures = failures;
        return report;
    }

    // quantization budget from the recorded lattice step
    let box_mass: f64 = (0..grid.len())
        .filter(|&c| cube_index(&grid, box_exp, cube_exp, c).is_some())
        .map(|c| weight[c])
        .sum();
    let box_norm = (box_mass * volume).powf(1.0 / p);
    if plan.delta / 2.0 * box_norm > plan.epsilon / 3.0 {
        failures.push("lattice step exceeds the quantization budget".into());
    }

    // null cubes and witnesses
    match certificate.variant {
        Variant::Banach => {
            if let Some(cell) = weight.iter().position(|&w| w <= 0.0) {
                failures.push(format!(
                    "banach variant with vanishing weight at cell {cell}"
                ));
            }
        }
        Variant::Vanishing => {
            let mut mass = vec![0.0; cube_count];
            for (cell, &w) in weight.iter().enumerate() {
                if let Some(q) = cube_index(&grid, box_exp, cube_exp, cell) {
                    mass[q] += w;
                }
            }
            for &q in &certificate.null_cubes {
                if q >= cube_count || mass[q] != 0.0 {
                    failures.push(format!("cube {q} is recorded as null but carries weight"));
                    continue;
                }
                if certificate.net_elements.iter().any(|e| e[q] != 0.0) {
                    failures.push(format!("null cube {q} has a nonzero coefficient"));
                }
            }
            let null_count = mass.iter().filter(|&&m| m == 0.0).count();
            if null_count != certificate.null_cubes.len() {
                failures.push(format!(
                    "{null_count} null cubes, {} recorded",
                    certificate.null_cubes.len()
                ));
            }
            if certificate.witnesses.len() + certificate.null_cubes.len() != cube_count {
                failures.push("witness list does not cover every non-null cube".into());
            }
            for w in &certificate.witnesses {
                let inside = w.cell < grid.len()
                    && cube_index(&grid, box_exp, cube_exp, w.cell) == Some(w.cube);
                if !inside || weight[w.cell] <= 0.0 {
                    failures.push(format!(
                        "witness cell {} does not show cube {} is non-null",
                        w.cell, w.cube
                    ));
                }
            }
        }
    }

    // members
    if certificate.members.len() != working_family.len() {
        failures.push(format!(
            "certificate covers {} members, family has {}",
            certificate.members.len(),
            working_family.len()
        ));
        report.failures = failures;
        return report;
    }
    let elements: Vec<Vec<f64>> = certificate
        .net_elements
        .iter()
        .map(|c| element_values(&grid, box_exp, cube_exp, c))
        .collect();
    for (record, (label, f)) in certificate.members.iter().zip(working_family.iter()) {
        if record.label != label {
            failures.push(format!("member {label} recorded as {}", record.label));
        }
        let Some(element) = elements.get(record.net_index) else {
            failures.push(format!(
                "member {label} points at missing net element {}",
                record.net_index
            ));
            continue;
        };
        let d = raw_distance(weight, volume, p, f.values(), element);
        report.max_distance = report.max_distance.max(d);
        if !(d < plan.epsilon) {
            failures.push(format!(
                "member {label}: distance {d:e} >= epsilon {:e}",
                plan.epsilon
            ));
        }
        if !close(record.distance, d) {
            failures.push(format!(
                "member {label}: recorded distance {:e}, measured {d:e}",
                record.distance
            ));
        }
        report.members_checked += 1;
    }

    // original-space audit
    if let Some(record) = &certificate.quasi {
        let n = record.n as i32;
        let orig_weight = space.weight().values();
        let q = space.p();
        let mut worst: f64 = 0.0;
        if record.audit.len() != family.len() {
            failures.push(format!(
                "transfer audit covers {} of {} members",
                record.audit.len(),
                family.len()
            ));
        }
        for (audit, (label, f)) in record.audit.iter().zip(family.iter()) {
            if audit.label != label {
                failures.push(format!(
                    "audit entry {} does not match member {label}",
                    audit.label
                ));
                continue;
            }
            let lookup = |k: usize| -> Option<&Vec<f64>> {
                certificate
                    .members
                    .get(k)
                    .and_then(|m| elements.get(m.net_index))
            };
            let Some(pos) = lookup(audit.positive) else {
                failures.push(format!("audit entry {label} points at a missing member"));
                continue;
            };
            let neg = audit.negative.and_then(lookup);
            if audit.negative.is_some() != neg.is_some() || audit.negative.is_some() != record.split
            {
                failures.push(format!(
                    "audit entry {label} has an inconsistent negative part"
                ));
                continue;
            }
            let rebuilt: Vec<f64> = (0..grid.len())
                .map(|c| pos[c].powi(n) - neg.map_or(0.0, |v| v[c].powi(n)))
                .collect();
            let d = raw_distance(orig_weight, volume, q, f.values(), &rebuilt);
            worst = worst.max(d);
            if !(d < record.epsilon) {
                failures.push(format!(
                    "member {label}: original-space distance {d:e} >= epsilon {:e}",
                    record.epsilon
                ));
            }
            if !close(audit.distance, d) {
                failures.push(format!(
                    "member {label}: recorded original distance {:e}, measured {d:e}",
                    audit.distance
                ));
            }
        }
        report.max_original_distance = Some(worst);
    }

    report.passed = failures.is_empty();
    report.failures = failures;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{DyadicPartition, GridFunction};

    #[test]
    fn cube_index_agrees_with_partition() {
        for (dim, l, h, m, i) in [
            (1, 2, -3, 1, -1),
            (2, 1, -2, 0, -1),
            (2, 0, -3, 0, 0),
            (1, 0, -2, -2, -2),
        ] {
            let g = Grid::new(dim, l, h).unwrap();
            let part = DyadicPartition::new(g, m, i).unwrap();
            for cell in 0..g.len() {
                assert_eq!(
                    cube_index(&g, m, i, cell),
                    part.cube_of_cell(cell),
                    "{dim} {cell}"
                );
            }
            let coeffs: Vec<f64> = (0..part.len()).map(|q| q as f64 + 1.0).collect();
            assert_eq!(
                element_values(&g, m, i, &coeffs),
                part.expand(&coeffs).unwrap().values()
            );
        }
    }

    #[test]
    fn raw_distance_matches_space() {
        let g = Grid::new(1, 0, -3).unwrap();
        let w = GridFunction::from_fn(g, |x| x[0].abs()).unwrap();
        let space = WeightedSpace::new(1.5, w.clone()).unwrap();
        let f = GridFunction::from_fn(g, |x| x[0].sin()).unwrap();
        let z = GridFunction::zeros(g);
        let d = raw_distance(w.values(), g.cell_volume(), 1.5, f.values(), z.values());
        assert!((d - space.norm(&f).unwrap()).abs() < 1e-15);
    }
}
