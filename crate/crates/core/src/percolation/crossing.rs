//! Primal and dual crossings of a rectangle.
//!
//! Dual vertices are the `n × m` faces `(i + ½, j + ½)` plus two terminals
//! standing for the exterior on either side of the crossing direction. A dual
//! edge is present exactly when the primal edge it crosses is absent. Primal
//! edges lying along the sides that a crossing starts and ends on are
//! irrelevant to it and have no dual counterpart. With this convention a
//! primal horizontal crossing occurs exactly when no dual vertical crossing
//! does, and likewise with the directions swapped.

use crate::percolation::lattice::{EdgeConfig, EdgeKind, RectLattice};

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    #[inline]
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    #[inline]
    pub fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
    }

    #[inline]
    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Crossing direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Left side to right side.
    Horizontal,
    /// Bottom side to top side.
    Vertical,
}

/// Primal clusters with the two sides of `dir` merged into terminals.
///
/// Returns the sets and the indices `(start, end)` of the terminals.
pub(crate) fn primal_clusters(c: &EdgeConfig, dir: Direction) -> (DisjointSets, usize, usize) {
    let lat = *c.lattice();
    let nv = lat.vertex_count();
    let (start, end) = (nv, nv + 1);
    let mut ds = DisjointSets::new(nv + 2);
    match dir {
        Direction::Horizontal => {
            for y in 0..=lat.height() {
                ds.union(start, lat.vertex(0, y));
                ds.union(end, lat.vertex(lat.width(), y));
            }
        }
        Direction::Vertical => {
            for x in 0..=lat.width() {
                ds.union(start, lat.vertex(x, 0));
                ds.union(end, lat.vertex(x, lat.height()));
            }
        }
    }
    for e in c.present_edges() {
        let (a, b) = lat.endpoints(e);
        ds.union(a, b);
    }
    (ds, start, end)
}

/// The dual edge crossing primal edge `e`, for dual crossings in direction
/// `dir`; `None` when `e` runs along a side the dual crossing connects.
pub(crate) fn dual_edge(lat: &RectLattice, e: usize, dir: Direction) -> Option<(usize, usize)> {
    let (w, h) = (lat.width(), lat.height());
    let face = |i: usize, j: usize| j * w + i;
    let (start, end) = (w * h, w * h + 1);
    match (dir, lat.edge_position(e)) {
        (Direction::Vertical, (EdgeKind::Horizontal, i, j)) => Some((
            if j == 0 { start } else { face(i, j - 1) },
            if j == h { end } else { face(i, j) },
        )),
        (Direction::Vertical, (EdgeKind::Vertical, i, j)) => {
            (i > 0 && i < w).then(|| (face(i - 1, j), face(i, j)))
        }
        (Direction::Horizontal, (EdgeKind::Vertical, i, j)) => Some((
            if i == 0 { start } else { face(i - 1, j) },
            if i == w { end } else { face(i, j) },
        )),
        (Direction::Horizontal, (EdgeKind::Horizontal, i, j)) => {
            (j > 0 && j < h).then(|| (face(i, j - 1), face(i, j)))
        }
    }
}

/// Dual clusters for a dual crossing in direction `dir`, with the terminal
/// indices `(start, end)`: bottom/top for vertical, left/right for horizontal.
pub(crate) fn dual_clusters(c: &EdgeConfig, dir: Direction) -> (DisjointSets, usize, usize) {
    let lat = *c.lattice();
    let faces = lat.width() * lat.height();
    let mut ds = DisjointSets::new(faces + 2);
    for e in 0..lat.edge_count() {
        if c.is_present(e) {
            continue;
        }
        if let Some((a, b)) = dual_edge(&lat, e, dir) {
            ds.union(a, b);
        }
    }
    (ds, faces, faces + 1)
}

pub fn has_crossing(c: &EdgeConfig, dir: Direction) -> bool {
    let (mut ds, s, t) = primal_clusters(c, dir);
    ds.same(s, t)
}

pub fn has_dual_crossing(c: &EdgeConfig, dir: Direction) -> bool {
    let (mut ds, s, t) = dual_clusters(c, dir);
    ds.same(s, t)
}

/// A path of present edges joins `{0} × [0, m]` to `{n} × [0, m]`.
pub fn has_horizontal_crossing(c: &EdgeConfig) -> bool {
    has_crossing(c, Direction::Horizontal)
}

pub fn has_vertical_crossing(c: &EdgeConfig) -> bool {
    has_crossing(c, Direction::Vertical)
}

/// A path of present dual edges crosses the rectangle from left to right.
pub fn has_dual_horizontal_crossing(c: &EdgeConfig) -> bool {
    has_dual_crossing(c, Direction::Horizontal)
}

pub fn has_dual_vertical_crossing(c: &EdgeConfig) -> bool {
    has_dual_crossing(c, Direction::Vertical)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let lat = RectLattice::new(1, 1).unwrap();
        assert!(has_horizontal_crossing(&EdgeConfig::from_mask(lat, 0b0001)));
        assert!(!has_horizontal_crossing(&EdgeConfig::empty(lat)));
        assert!(!has_horizontal_crossing(&EdgeConfig::from_mask(
            lat, 0b1100
        )));
        let crossing = (0..16u64)
            .filter(|&m| has_horizontal_crossing(&EdgeConfig::from_mask(lat, m)))
            .count();
        assert_eq!(crossing, 12);
    }

    #[test]
    fn dual_extremes() {
        for (w, h) in [(1, 1), (3, 2), (4, 7)] {
            let lat = RectLattice::new(w, h).unwrap();
            assert!(has_dual_horizontal_crossing(&EdgeConfig::empty(lat)));
            assert!(!has_dual_horizontal_crossing(&EdgeConfig::full(lat)));
            assert!(has_dual_vertical_crossing(&EdgeConfig::empty(lat)));
            assert!(!has_dual_vertical_crossing(&EdgeConfig::full(lat)));
        }
    }

    #[test]
    fn two_by_two_dichotomy_both_directions() {
        let lat = RectLattice::new(2, 2).unwrap();
        let (mut primal, mut dual) = (0, 0);
        for m in 0..1u64 << 12 {
            let c = EdgeConfig::from_mask(lat, m);
            let h = has_horizontal_crossing(&c);
            let dv = has_dual_vertical_crossing(&c);
            assert_ne!(h, dv, "mask {m:#b}");
            assert_ne!(has_vertical_crossing(&c), has_dual_horizontal_crossing(&c));
            primal += h as usize;
            dual += dv as usize;
        }
        assert_eq!(primal, 2752);
        assert_eq!(primal + dual, 4096);
    }

    #[test]
    fn disjoint_sets_basic() {
        let mut ds = DisjointSets::new(6);
        ds.union(0, 1);
        ds.union(2, 3);
        ds.union(1, 3);
        assert!(ds.same(0, 2));
        assert!(!ds.same(0, 4));
    }
}
