use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DyadicPartition, Grid};

pub const CERTIFICATE_FORMAT: &str = "compactnet-certificate/1";

/// Which averaging projector to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Plain cube averages; requires a strictly positive weight.
    Banach,
    /// Cubes where the weight vanishes identically get coefficient zero.
    Vanishing,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Banach => "banach",
            Variant::Vanishing => "vanishing",
        }
    }
}

/// Measured worst cases of the three error terms, each of which must stay
/// within `epsilon / 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub third: f64,
    pub tail: f64,
    pub projection: f64,
    pub quantization: f64,
}

impl Budget {
    pub fn holds(&self) -> bool {
        self.tail < self.third && self.projection < self.third && self.quantization <= self.third
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetPlan {
    pub epsilon: f64,
    /// Truncation box `[-2^m, 2^m]^n`.
    pub m: i32,
    /// Cube side exponent.
    pub i_eps: i32,
    /// Coefficient lattice step.
    pub delta: f64,
    /// Largest measured `|f_Q|`.
    pub coeff_max: f64,
    /// `coeff_max` rounded up to the lattice; net coefficients lie in
    /// `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: f64,
    /// `‖χ_{R_m}‖` in the working space.
    pub box_indicator_norm: f64,
    /// Box-stencil translation modulus at scale `2^i_eps`.
    pub mesh_modulus: f64,
    pub budget: Budget,
}

/// Partition layout: cubes of side `2^cube_exp` tiling `[-2^box_exp, 2^box_exp]^dim`,
/// ordered row-major by lower corner with axis 0 slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDescriptor {
    pub dim: usize,
    pub box_exp: i32,
    pub cube_exp: i32,
    pub cubes_per_axis: usize,
}

impl PartitionDescriptor {
    pub fn of(partition: &DyadicPartition) -> Self {
        Self {
            dim: partition.grid().dim(),
            box_exp: partition.box_exp(),
            cube_exp: partition.cube_exp(),
            cubes_per_axis: partition.cubes_per_axis(),
        }
    }

    pub fn cube_count(&self) -> usize {
        self.cubes_per_axis.pow(self.dim as u32)
    }

    pub fn on(&self, grid: &Grid) -> Result<DyadicPartition> {
        if grid.dim() != self.dim {
            return Err(Error::GridMismatch);
        }
        let partition = DyadicPartition::new(*grid, self.box_exp, self.cube_exp)?;
        if partition.cubes_per_axis() != self.cubes_per_axis {
            return Err(Error::InvalidArgument(
                "partition descriptor is inconsistent".into(),
            ));
        }
        Ok(partition)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberRecord {
    pub label: String,
    pub net_index: usize,
    /// `‖f - net element‖`, measured directly.
    pub distance: f64,
    /// `‖f - f χ_{R_m}‖`.
    pub tail: f64,
    pub projection_error: f64,
    /// `2^n sup_{y ∈ R_i} ‖τ_y f - f‖`, the bound the projection error obeys.
    pub projection_guarantee: f64,
    pub quantization_error: f64,
}

/// A positive-weight cell inside a non-null cube, showing the cube average
/// is taken over a set of positive weighted measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeWitness {
    pub cube: usize,
    pub cell: usize,
}

/// Record of the power transfer used for exponents below one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiRecord {
    pub p: f64,
    #[serde(rename = "N")]
    pub n: u32,
    /// Target radius in the original quasi-norm.
    pub epsilon: f64,
    /// Radius used in the transferred space.
    pub epsilon_prime: f64,
    pub c_max: f64,
    /// Members were split into positive and negative parts.
    pub split: bool,
    pub audit: Vec<QuasiAudit>,
}

/// Original-space distance from a member to its reconstructed net element
/// `h_+^N - h_-^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiAudit {
    pub label: String,
    pub positive: usize,
    pub negative: Option<usize>,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetCertificate {
    pub format: String,
    pub grid: Grid,
    /// Exponent of the space the net lives in.
    pub p: f64,
    pub variant: Variant,
    pub plan: NetPlan,
    pub partition: PartitionDescriptor,
    pub net_elements: Vec<Vec<f64>>,
    pub members: Vec<MemberRecord>,
    pub null_cubes: Vec<usize>,
    pub witnesses: Vec<CubeWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasi: Option<QuasiRecord>,
}

impl NetCertificate {
    pub fn net_size(&self) -> usize {
        self.net_elements.len()
    }

    pub fn max_distance(&self) -> f64 {
        self.members.iter().map(|m| m.distance).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        crate::report::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: NetCertificate = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("certificate: {e}")))?;
        // re-validate the grid invariants skipped by deserialization
        Grid::new(cert.grid.dim(), cert.grid.box_level(), cert.grid.cell_exp())?;
        Ok(cert)
    }
}
