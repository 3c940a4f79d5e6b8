use serde::Serialize;

use crate::engine::Diagram;
use crate::pattern::Name;

/// Every spacetime occurrence of one name. May be empty, and may branch
/// (several cells at one step).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub name: Name,
    /// `(step, cell)` pairs in row-major order.
    pub points: Vec<(usize, usize)>,
}

impl Trajectory {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of cells holding the name at each step `0..height`.
    pub fn occupancy(&self, height: usize) -> Vec<usize> {
        let mut counts = vec![0; height];
        for &(t, _) in &self.points {
            counts[t] += 1;
        }
        counts
    }

    /// True when the name occupies more cells at some step than at an
    /// earlier step.
    pub fn branches(&self, height: usize) -> bool {
        let occ = self.occupancy(height);
        let mut seen_max = 0;
        for (t, &c) in occ.iter().enumerate() {
            if t > 0 && seen_max > 0 && c > seen_max {
                return true;
            }
            seen_max = seen_max.max(c);
        }
        false
    }
}

pub fn track_name(diagram: &Diagram, name: Name) -> Trajectory {
    let points = diagram
        .rows
        .iter()
        .enumerate()
        .flat_map(|(t, row)| {
            row.iter()
                .enumerate()
                .filter(move |(_, &n)| n == name)
                .map(move |(i, _)| (t, i))
        })
        .collect();
    Trajectory { name, points }
}
