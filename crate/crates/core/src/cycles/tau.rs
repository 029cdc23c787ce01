use serde::Serialize;

use super::{fiberize, Projection};
use crate::error::Result;
use crate::geometry::{DirectionSet, PointConfig};

/// Iterates of τ until a fixed point or the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauTrace {
    /// X, τ(X), τ²(X), …; the last entry is the fixed point.
    pub sets: Vec<Vec<usize>>,
    pub empty: bool,
}

impl TauTrace {
    pub fn fixed_point(&self) -> &[usize] {
        self.sets.last().map_or(&[], Vec::as_slice)
    }
}

/// τ(Z) keeps the points of Z whose fiber inside Z has at least two members,
/// for every direction simultaneously.
pub fn tau_closure(points: &PointConfig, directions: &DirectionSet) -> Result<TauTrace> {
    let fm = fiberize(points, &Projection::from_directions(directions))?;
    let mut current: Vec<usize> = (0..points.len()).collect();
    let mut sets = vec![current.clone()];
    loop {
        if current.is_empty() {
            break;
        }
        let mut inside = vec![false; points.len()];
        for &j in &current {
            inside[j] = true;
        }
        let next: Vec<usize> = current
            .iter()
            .copied()
            .filter(|&j| {
                (0..fm.n_functions()).all(|i| fm.fiber_members(i, j).iter().filter(|&&q| inside[q]).count() >= 2)
            })
            .collect();
        if next == current {
            break;
        }
        sets.push(next.clone());
        current = next;
    }
    let empty = current.is_empty();
    Ok(TauTrace { sets, empty })
}
