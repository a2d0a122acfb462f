//! Total-boundedness certificates for finite families of functions in
//! weighted Lebesgue spaces `L^p_ω(R^n)`, `n ∈ {1, 2}`, `0 < p < ∞`.
//!
//! Functions are piecewise constant on dyadic grids ([`grid`]). The crate
//! measures the compactness moduli of a family ([`moduli`]), builds an
//! explicit ε-net by truncation, dyadic cube averaging and coefficient
//! rounding ([`net`]), reduces exponents below one to the normed case by a
//! power transfer ([`quasi`]), and probes the lattice axioms and
//! Muckenhoupt constants of a weight ([`spaces`]).
//!
//! ```
//! use compactnet_core::{build_certificate, sample, validate_certificate, Family, Grid, Primitive, Variant, WeightedSpace};
//!
//! let grid = Grid::new(1, 2, -6).unwrap();
//! let space = WeightedSpace::lebesgue(2.0, grid).unwrap();
//! let members = [-0.5, 0.0, 0.5]
//!     .iter()
//!     .map(|&c| sample(&Primitive::Gaussian { center: vec![c], sigma: 0.5, amplitude: 1.0 }, &grid))
//!     .collect::<Result<Vec<_>, _>>()
//!     .unwrap();
//! let family = Family::unlabeled(members).unwrap();
//! let cert = build_certificate(&family, &space, 0.2, Variant::Banach).unwrap();
//! assert!(validate_certificate(&family, &cert, &space).passed);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod grid;
pub mod moduli;
pub mod net;
pub mod quasi;
pub mod report;
pub mod spaces;

pub use error::{Error, Result};
pub use grid::{
    ball_average_field, cube_average, restrict_inside, restrict_outside, sample, shift_stencil,
    translate, translate_cells, CellSet, Cube, DyadicPartition, Grid, GridFunction, Primitive,
    Region, Shift,
};
pub use moduli::{
    averaged_modulus, bound_modulus, member_translation_modulus, tail_modulus, translation_modulus,
    verify_c_implies_cstar, CStarCheck, Family, ModuliReport, INEQUALITY_TOL,
};
pub use net::{
    build_certificate, greedy_net, project_phi, projection_error, quantize_net, select_mesh,
    select_tail_level, validate_certificate, NetCertificate, ValidationReport, Variant,
};
pub use quasi::{
    factorization_gap, power_transfer, quasi_certificate, select_power, transfer_family,
};
pub use spaces::{weighted_norm, y_norm, WeightSpec, WeightedSpace};
