use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::Family;
use crate::spaces::WeightedSpace;

/// A net drawn from the family itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyNet {
    /// Member indices in the order they were added.
    pub centers: Vec<usize>,
    /// Covering radius after each addition.
    pub radius_trace: Vec<f64>,
    /// Nearest center (as a position in `centers`) for every member.
    pub assignment: Vec<usize>,
}

impl GreedyNet {
    pub fn size(&self) -> usize {
        self.centers.len()
    }

    pub fn covering_radius(&self) -> f64 {
        *self.radius_trace.last().expect("net is nonempty")
    }
}

/// Farthest-point net: start from member 0 and keep adding the member
/// farthest from the current centers until every distance is below `epsilon`.
/// The insertion order does not depend on `epsilon`, so the size is
/// nonincreasing in `epsilon`.
pub fn greedy_net(family: &Family, space: &WeightedSpace, epsilon: f64) -> Result<GreedyNet> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    family.check_space(space)?;
    let members = family.members();
    let mut nearest = vec![f64::INFINITY; members.len()];
    let mut assignment = vec![0; members.len()];
    let mut centers = Vec::new();
    let mut radius_trace = Vec::new();
    let mut next = 0;
    loop {
        let slot = centers.len();
        centers.push(next);
        for (k, f) in members.iter().enumerate() {
            let d = space.distance(f, &members[next])?;
            if d < nearest[k] {
                nearest[k] = d;
                assignment[k] = slot;
            }
        }
        let (far, radius) =
            nearest
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (k, d)| {
                    if d > best.1 {
                        (k, d)
                    } else {
                        best
                    }
                });
        radius_trace.push(radius);
        if radius < epsilon {
            break;
        }
        next = far;
    }
    Ok(GreedyNet {
        centers,
        radius_trace,
        assignment,
    })
}
