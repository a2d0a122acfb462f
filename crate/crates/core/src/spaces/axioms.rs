//! Probe-based checks of the lattice axioms (B0)-(B5) and of the stronger
//! local-integrability condition (B5*).
//!
//! (B3) concerns arbitrary monotone limits; here it is checked on the
//! finite chains supplied by the caller only.

use serde::Serialize;

use super::{WeightSpec, WeightedSpace};
use crate::error::{Error, Result};
use crate::grid::{CellSet, Grid, GridFunction, Point};

const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    B0,
    B1,
    B2,
    B3,
}

/// Increasing chain `f_1 <= f_2 <= ... <= limit`, all nonnegative.
#[derive(Debug, Clone)]
pub struct MonotoneChain {
    pub steps: Vec<GridFunction>,
    pub limit: GridFunction,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomProbes {
    pub functions: Vec<GridFunction>,
    /// Pairs `(g, f)` intended to satisfy `0 <= g <= f`.
    pub dominated_pairs: Vec<(GridFunction, GridFunction)>,
    pub chains: Vec<MonotoneChain>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub cases: usize,
    /// Probes that did not meet the axiom's hypothesis and were skipped.
    pub skipped: usize,
    /// Index of the first failing probe with a description.
    pub failure: Option<(usize, String)>,
}

impl AxiomCheck {
    fn new(axiom: Axiom) -> Self {
        Self {
            axiom,
            cases: 0,
            skipped: 0,
            failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn fail(&mut self, probe: usize, detail: String) {
        if self.failure.is_none() {
            self.failure = Some((probe, detail));
        }
    }
}

/// A probe that is nonzero only on weight-null cells: `‖f‖ = 0` although
/// `f != 0` pointwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullCellWitness {
    pub probe: usize,
    pub cell: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub null_cell_witnesses: Vec<NullCellWitness>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is checked")
    }
}

fn le_rel(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * b.abs().max(a.abs())
}

/// Checks (B0)-(B3) on the supplied probes. Probes on a foreign grid count
/// as skipped.
pub fn check_lattice_axioms(space: &WeightedSpace, probes: &AxiomProbes) -> AxiomReport {
    let weight = space.weight().values();
    let mut b0 = AxiomCheck::new(Axiom::B0);
    let mut b1 = AxiomCheck::new(Axiom::B1);
    let mut null_cell_witnesses = Vec::new();

    for (k, f) in probes.functions.iter().enumerate() {
        let Ok(norm) = space.norm(f) else {
            b0.skipped += 1;
            b1.skipped += 1;
            continue;
        };
        // (B0) in the weighted sense: zero norm iff f vanishes wherever ω > 0.
        b0.cases += 1;
        let vanishes_on_support = f
            .values()
            .iter()
            .zip(weight)
            .all(|(&v, &w)| w == 0.0 || v == 0.0);
        if (norm == 0.0) != vanishes_on_support {
            b0.fail(
                k,
                format!("norm {norm:e} but weighted support vanishing = {vanishes_on_support}"),
            );
        }
        if norm == 0.0 {
            if let Some(cell) = f.values().iter().position(|&v| v != 0.0) {
                null_cell_witnesses.push(NullCellWitness { probe: k, cell });
            }
        }

        b1.cases += 1;
        let abs_norm = space.norm_of_values(f.abs().values());
        if (abs_norm - norm).abs() > REL_TOL * norm.max(abs_norm) {
            b1.fail(
                k,
                format!("‖|f|‖ = {abs_norm:e} differs from ‖f‖ = {norm:e}"),
            );
        }
    }

    let mut b2 = AxiomCheck::new(Axiom::B2);
    for (k, (g, f)) in probes.dominated_pairs.iter().enumerate() {
        let dominated = g.grid() == space.grid()
            && f.grid() == space.grid()
            && g.values()
                .iter()
                .zip(f.values())
                .all(|(&a, &b)| 0.0 <= a && a <= b);
        if !dominated {
            b2.skipped += 1;
            continue;
        }
        b2.cases += 1;
        let (ng, nf) = (
            space.norm_of_values(g.values()),
            space.norm_of_values(f.values()),
        );
        if !le_rel(ng, nf) {
            b2.fail(k, format!("‖g‖ = {ng:e} exceeds ‖f‖ = {nf:e}"));
        }
    }

    let mut b3 = AxiomCheck::new(Axiom::B3);
    for (k, chain) in probes.chains.iter().enumerate() {
        let mut links: Vec<&GridFunction> = chain.steps.iter().collect();
        links.push(&chain.limit);
        let increasing = links
            .iter()
            .all(|f| f.grid() == space.grid() && f.is_nonnegative())
            && links
                .windows(2)
                .all(|w| w[0].values().iter().zip(w[1].values()).all(|(a, b)| a <= b));
        if !increasing {
            b3.skipped += 1;
            continue;
        }
        b3.cases += 1;
        let norms: Vec<f64> = links
            .iter()
            .map(|f| space.norm_of_values(f.values()))
            .collect();
        let limit = *norms.last().expect("chain has a limit");
        if let Some(step) = norms.windows(2).position(|w| !le_rel(w[0], w[1])) {
            b3.fail(
                k,
                format!(
                    "norms decrease at step {step}: {:e} > {:e}",
                    norms[step],
                    norms[step + 1]
                ),
            );
        } else if let Some(last) = chain.steps.last() {
            // the chain's own limit must be reached when the last step equals it
            if last == &chain.limit && (norms[norms.len() - 2] - limit).abs() > REL_TOL * limit {
                b3.fail(k, "norm of the final step differs from the limit".into());
            }
        }
    }

    AxiomReport {
        checks: vec![b0, b1, b2, b3],
        null_cell_witnesses,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct B4Check {
    pub passed: bool,
    pub indicator_norm: f64,
}

/// `χ_A` has finite norm. Always true on a finite grid.
pub fn check_b4(space: &WeightedSpace, set: &CellSet) -> Result<B4Check> {
    if set.grid() != space.grid() {
        return Err(Error::GridMismatch);
    }
    let indicator_norm = space.indicator_norm(set.cells());
    Ok(B4Check {
        passed: indicator_norm.is_finite(),
        indicator_norm,
    })
}

/// The point `x0 ∈ A` with `|f(x0)| < ∞` required by (B5).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct B5Witness {
    pub cell: usize,
    pub center: Point,
    pub value: f64,
}

/// Searches `A` for a positive-weight cell where `f` is finite. Needs
/// `‖χ_A‖ != 0`.
pub fn check_b5(space: &WeightedSpace, f: &GridFunction, set: &CellSet) -> Result<B5Witness> {
    space.ensure_grid(f)?;
    if set.grid() != space.grid() {
        return Err(Error::GridMismatch);
    }
    if space.indicator_norm(set.cells()) == 0.0 {
        return Err(Error::NullSet);
    }
    let w = space.weight();
    set.cells()
        .iter()
        .copied()
        .find(|&c| w.value(c) > 0.0 && f.value(c).is_finite())
        .map(|cell| B5Witness {
            cell,
            center: space.grid().center(cell),
            value: f.value(cell),
        })
        .ok_or(Error::NullSet)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualIntegral {
    /// `Σ_A ω^{1-p'} |cell|`, or `max_A 1/ω` when `p = 1`.
    pub dual_sum: f64,
    /// Best constant `C(A)` in `∫_A |f| <= C(A) ‖f‖`.
    pub constant: f64,
}

/// Discrete dual integral governing (B5*). Infinite when ω vanishes on `A`.
pub fn check_b5_star(space: &WeightedSpace, set: &CellSet) -> Result<DualIntegral> {
    let p = space.p();
    if p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if set.grid() != space.grid() {
        return Err(Error::GridMismatch);
    }
    let w = space.weight();
    if p == 1.0 {
        let dual_sum = set
            .cells()
            .iter()
            .map(|&c| {
                let v = w.value(c);
                if v > 0.0 {
                    1.0 / v
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max);
        return Ok(DualIntegral {
            dual_sum,
            constant: dual_sum,
        });
    }
    let conj = p / (p - 1.0);
    let sum: f64 = set
        .cells()
        .iter()
        .map(|&c| {
            let v = w.value(c);
            if v > 0.0 {
                v.powf(1.0 - conj)
            } else {
                f64::INFINITY
            }
        })
        .sum();
    let dual_sum = sum * space.grid().cell_volume();
    Ok(DualIntegral {
        dual_sum,
        constant: dual_sum.powf(1.0 / conj),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum B5StarVerdict {
    Holds,
    FailsUnderRefinement,
    Inconclusive,
}

impl B5StarVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            B5StarVerdict::Holds => "holds",
            B5StarVerdict::FailsUnderRefinement => "fails under refinement",
            B5StarVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Dual sums across successive halvings of the cell side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct B5StarSweep {
    pub cell_exps: Vec<i32>,
    pub dual_sums: Vec<f64>,
    /// Ratios of consecutive dual sums.
    pub growth: Vec<f64>,
}

impl B5StarSweep {
    /// Divergence shows as a fixed growth factor per halving; convergence as
    /// growth factors approaching one.
    pub fn verdict(&self) -> B5StarVerdict {
        if self.dual_sums.iter().any(|s| s.is_infinite()) {
            return B5StarVerdict::FailsUnderRefinement;
        }
        if !self.growth.is_empty() && self.growth.iter().all(|&g| g >= 1.5) {
            B5StarVerdict::FailsUnderRefinement
        } else if self.growth.last().is_some_and(|&g| g < 1.25) {
            B5StarVerdict::Holds
        } else {
            B5StarVerdict::Inconclusive
        }
    }
}

/// Evaluates [`check_b5_star`] on `base` and `refinements` successively
/// refined grids, with `set` rebuilt on each grid.
pub fn dual_refinement_sweep(
    weight: &WeightSpec,
    p: f64,
    base: &Grid,
    refinements: u32,
    set: impl Fn(&Grid) -> CellSet,
) -> Result<B5StarSweep> {
    let mut cell_exps = Vec::new();
    let mut dual_sums = Vec::new();
    for level in 0..=refinements {
        let w = weight.sample_refined(base, level)?;
        let grid = *w.grid();
        let space = WeightedSpace::new(p, w)?;
        let dual = check_b5_star(&space, &set(&grid))?;
        cell_exps.push(grid.cell_exp());
        dual_sums.push(dual.dual_sum);
    }
    let growth = dual_sums.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(B5StarSweep {
        cell_exps,
        dual_sums,
        growth,
    })
}
