//! Nets for exponents `0 < p < 1` by power transfer.
//!
//! With `N = ⌊1/p⌋ + 1` the map `f ↦ f^{1/N}` sends nonnegative functions in
//! `L^p_ω` to `L^{pN}_ω`, where `pN >= 1` and the norm is a genuine norm.
//! A net `{h}` built there yields the net `{h^N}` for the original family;
//! its covering radius is controlled by
//! `‖f - g‖_p <= Σ_{i+j=N-1} ‖f‖_p^{i/N} ‖g‖_p^{j/N} ‖f^{1/N} - g^{1/N}‖_{pN}`
//! and audited directly.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::moduli::{bound_modulus, Family};
use crate::net::{build_certificate, NetCertificate, QuasiAudit, QuasiRecord, Variant};
use crate::spaces::WeightedSpace;

/// Relative slack of [`factorization_gap`].
pub const FACTORIZATION_TOL: f64 = 1e-9;

/// `N = ⌊1/p⌋ + 1`, the smallest integer with `pN > 1`.
pub fn select_power(p: f64) -> Result<u32> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    Ok((1.0 / p).floor() as u32 + 1)
}

/// Cellwise `f^{1/N}` of a nonnegative function.
pub fn power_transfer(f: &GridFunction, n: u32) -> Result<GridFunction> {
    if n == 0 {
        return Err(Error::InvalidArgument("power N must be positive".into()));
    }
    if let Some((cell, &value)) = f.values().iter().enumerate().find(|(_, &v)| v < 0.0) {
        return Err(Error::NegativeValue { cell, value });
    }
    let inv = 1.0 / n as f64;
    f.map(|v| v.powf(inv))
}

/// Both sides of the factorization bound for `f, g >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FactorizationGap {
    /// `‖f - g‖_p`.
    pub lhs: f64,
    /// `constant · ‖f^{1/N} - g^{1/N}‖_{pN}`.
    pub rhs: f64,
    /// `Σ_{i+j=N-1} ‖f‖_p^{i/N} ‖g‖_p^{j/N}`.
    pub constant: f64,
    pub passed: bool,
}

pub fn factorization_gap(
    f: &GridFunction,
    g: &GridFunction,
    space: &WeightedSpace,
    n: u32,
) -> Result<FactorizationGap> {
    let rf = power_transfer(f, n)?;
    let rg = power_transfer(g, n)?;
    let lhs = space.distance(f, g)?;
    let nf = space.norm(f)?;
    let ng = space.norm(g)?;
    let inv = 1.0 / n as f64;
    let constant: f64 = (0..n)
        .map(|i| nf.powf(i as f64 * inv) * ng.powf((n - 1 - i) as f64 * inv))
        .sum();
    let y = space.with_exponent(space.p() * n as f64)?;
    let rhs = constant * y.distance(&rf, &rg)?;
    Ok(FactorizationGap {
        lhs,
        rhs,
        constant,
        passed: lhs <= rhs * (1.0 + FACTORIZATION_TOL),
    })
}

/// `{f^{1/N}}`, or with `split` the roots of positive and negative parts in
/// the order `f0+, f0-, f1+, ...`.
pub fn transfer_family(family: &Family, n: u32, split: bool) -> Result<Family> {
    let mut members = Vec::new();
    let mut labels = Vec::new();
    for (label, f) in family.iter() {
        if split {
            members.push(power_transfer(&f.map(|v| v.max(0.0))?, n)?);
            members.push(power_transfer(&f.map(|v| (-v).max(0.0))?, n)?);
            labels.push(format!("{label}+"));
            labels.push(format!("{label}-"));
        } else {
            members.push(power_transfer(f, n)?);
            labels.push(label.to_string());
        }
    }
    Family::new(members, labels)
}

/// Builds a net for a family in `L^p_ω`, `0 < p < 1`, through the transferred
/// space `L^{pN}_ω`, then audits every member in the original quasi-norm.
///
/// Without `split` all members must be nonnegative. With `split` each member
/// is covered by `h_+^N - h_-^N`; by the quasi-triangle inequality
/// `‖u + v‖_p <= 2^{1/p - 1} (‖u‖_p + ‖v‖_p)` each part is then netted at
/// radius `ε 2^{-1/p}`.
pub fn quasi_certificate(
    family: &Family,
    space: &WeightedSpace,
    epsilon: f64,
    variant: Variant,
    split: bool,
) -> Result<NetCertificate> {
    let n = select_power(space.p())?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let part_epsilon = if split {
        epsilon * 2f64.powf(-1.0 / space.p())
    } else {
        epsilon
    };
    let transferred = transfer_family(family, n, split)?;
    let y = space.with_exponent(space.p() * n as f64)?;
    let bound = bound_modulus(family, space)?;
    let c_max = n as f64 * bound.powf((n - 1) as f64 / n as f64);
    let epsilon_prime = if c_max > 0.0 {
        part_epsilon / c_max
    } else {
        part_epsilon
    };

    let mut cert = build_certificate(&transferred, &y, epsilon_prime, variant)?;

    let grid = *family.grid();
    let partition = cert.partition.on(&grid)?;
    let elements: Vec<GridFunction> = cert
        .net_elements
        .iter()
        .map(|c| partition.expand(c))
        .collect::<Result<_>>()?;
    let power = |k: usize| -> Result<GridFunction> {
        elements[cert.members[k].net_index].map(|v| v.powi(n as i32))
    };
    let mut audit = Vec::with_capacity(family.len());
    for (j, (label, f)) in family.iter().enumerate() {
        let (positive, negative) = if split {
            (2 * j, Some(2 * j + 1))
        } else {
            (j, None)
        };
        let mut rebuilt = power(positive)?;
        if let Some(k) = negative {
            rebuilt = rebuilt.sub(&power(k)?)?;
        }
        let distance = space.distance(f, &rebuilt)?;
        if !(distance < epsilon) {
            return Err(Error::AuditFailed {
                label: label.to_string(),
                distance,
                epsilon,
            });
        }
        audit.push(QuasiAudit {
            label: label.to_string(),
            positive,
            negative,
            distance,
        });
    }
    cert.quasi = Some(QuasiRecord {
        p: space.p(),
        n,
        epsilon,
        epsilon_prime,
        c_max,
        split,
        audit,
    });
    Ok(cert)
}
