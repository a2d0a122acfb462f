use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be 1 or 2, got {0}")]
    UnsupportedDimension(usize),

    #[error("cell exponent {cell_exp} exceeds box level {box_level}")]
    CellLargerThanBox { box_level: i32, cell_exp: i32 },

    #[error("grid with {cells_per_axis_log2} doublings per axis in dimension {dim} is too large")]
    GridTooLarge {
        dim: usize,
        cells_per_axis_log2: i32,
    },

    #[error("functions live on different grids")]
    GridMismatch,

    #[error("expected {expected} cell values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value {value} at cell {cell}")]
    NonFinite { cell: usize, value: f64 },

    #[error("shift component {component} is not a multiple of the cell side {cell_side}")]
    MisalignedShift { component: f64, cell_side: f64 },

    #[error("invalid dyadic exponents: need cell_exp {cell_exp} <= i {cube_exp} <= m {box_exp} <= box level {box_level}")]
    InvalidPartition {
        cell_exp: i32,
        cube_exp: i32,
        box_exp: i32,
        box_level: i32,
    },

    #[error("radius {radius} leaves an empty stencil at cell side {cell_side}")]
    EmptyStencil { radius: f64, cell_side: f64 },

    #[error("exponent p = {0} is outside the admissible range")]
    InvalidExponent(f64),

    #[error("weight is negative or non-finite at cell {cell}")]
    InvalidWeight { cell: usize },

    #[error("function is negative at cell {cell} ({value})")]
    NegativeValue { cell: usize, value: f64 },

    #[error("indicator of the probed set has zero norm")]
    NullSet,

    #[error("family has no members")]
    EmptyFamily,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "select_tail_level: tail modulus never drops below {target:e} within the box (best {best:e} at level {level}); the tail condition is unverifiable at this resolution"
    )]
    TailNotSmall { target: f64, best: f64, level: i32 },

    #[error(
        "select_mesh: translation modulus {modulus:e} at the cell scale exceeds {target:e}; the equicontinuity condition is unverifiable at this resolution"
    )]
    MeshTooCoarse { target: f64, modulus: f64 },

    #[error("coefficient {value} lies outside [-{bound}, {bound}]")]
    CoefficientOutOfBound { value: f64, bound: f64 },

    #[error("1/N = 1/{n} is not resolvable on a grid with cell side {cell_side}")]
    Unresolvable { n: u64, cell_side: f64 },

    #[error("original-space audit failed for member {label}: distance {distance:e} >= epsilon {epsilon:e}")]
    AuditFailed {
        label: String,
        distance: f64,
        epsilon: f64,
    },
}

impl Error {
    /// True when the error means a compactness hypothesis could not be
    /// verified numerically, as opposed to malformed input.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::TailNotSmall { .. } | Error::MeshTooCoarse { .. } | Error::AuditFailed { .. }
        )
    }
}
