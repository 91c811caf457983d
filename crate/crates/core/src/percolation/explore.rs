//! Cluster exploration from one side of the rectangle.
//!
//! Starting from the vertex column on the chosen side, each round queries
//! every edge with exactly one endpoint in the explored set and adds the far
//! endpoints of those edges that are present in `ψ·ξ`. Exploration started on
//! the left side (`𝒜_R`) decides the horizontal crossing while rarely
//! touching edges in the right half.

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::percolation::lattice::EdgeConfig;

/// Column the exploration starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// When to stop growing the explored set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopRule {
    /// Until a round adds nothing.
    #[default]
    Fixpoint,
    /// As soon as a vertex on the opposite side has been reached.
    OppositeSide,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationTrace {
    pub crossing: bool,
    pub queried: FixedBitSet,
    pub rounds: usize,
}

/// Explore `ψ·ξ` from `side`.
pub fn explore(
    observed: &EdgeConfig,
    inner: &EdgeConfig,
    side: Side,
    stop: StopRule,
) -> Result<ExplorationTrace> {
    Ok(explore_config(&observed.and(inner)?, side, stop))
}

/// Explore a configuration that already is the product `ψ·ξ`.
pub fn explore_config(c: &EdgeConfig, side: Side, stop: StopRule) -> ExplorationTrace {
    let lat = *c.lattice();
    let (start_x, goal_x) = match side {
        Side::Left => (0, lat.width()),
        Side::Right => (lat.width(), 0),
    };
    let mut explored = vec![false; lat.vertex_count()];
    let mut queried = FixedBitSet::with_capacity(lat.edge_count());
    let mut frontier: Vec<usize> = (0..=lat.height()).map(|y| lat.vertex(start_x, y)).collect();
    for &v in &frontier {
        explored[v] = true;
    }
    let mut reached = false;
    let mut rounds = 0;
    let mut added = Vec::new();
    while !frontier.is_empty() {
        if reached && stop == StopRule::OppositeSide {
            break;
        }
        // Edges from older vertices to the outside were queried in earlier
        // rounds and found absent, so only the newest vertices matter.
        for &v in &frontier {
            for (e, u) in lat.incident(v) {
                if explored[u] {
                    continue;
                }
                queried.insert(e);
                if c.is_present(e) {
                    added.push(u);
                }
            }
        }
        rounds += 1;
        frontier.clear();
        for &u in &added {
            if !explored[u] {
                explored[u] = true;
                frontier.push(u);
                if lat.coords(u).0 == goal_x {
                    reached = true;
                }
            }
        }
        added.clear();
    }
    ExplorationTrace {
        crossing: reached,
        queried,
        rounds,
    }
}
