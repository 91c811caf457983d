use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// The rectangle `[0, n] × [0, m]` of the square lattice.
///
/// Vertices `(x, y)` are indexed `y (n + 1) + x`. Horizontal edges
/// `(i, j)-(i+1, j)` come first with index `j n + i`; vertical edges
/// `(i, j)-(i, j+1)` follow with index `n (m + 1) + j (n + 1) + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RectLattice {
    width: usize,
    height: usize,
}

/// Orientation of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

impl RectLattice {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "lattice needs width and height >= 1, got {width}x{height}"
            )));
        }
        Ok(RectLattice { width, height })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn horizontal_count(&self) -> usize {
        self.width * (self.height + 1)
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.horizontal_count() + self.height * (self.width + 1)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        (self.width + 1) * (self.height + 1)
    }

    #[inline]
    pub fn vertex(&self, x: usize, y: usize) -> usize {
        y * (self.width + 1) + x
    }

    #[inline]
    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % (self.width + 1), v / (self.width + 1))
    }

    #[inline]
    pub fn horizontal_edge(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.width && j <= self.height);
        j * self.width + i
    }

    #[inline]
    pub fn vertical_edge(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.width && j < self.height);
        self.horizontal_count() + j * (self.width + 1) + i
    }

    /// Kind and lower-left endpoint `(i, j)` of edge `e`.
    #[inline]
    pub fn edge_position(&self, e: usize) -> (EdgeKind, usize, usize) {
        let h = self.horizontal_count();
        if e < h {
            (EdgeKind::Horizontal, e % self.width, e / self.width)
        } else {
            let k = e - h;
            (
                EdgeKind::Vertical,
                k % (self.width + 1),
                k / (self.width + 1),
            )
        }
    }

    /// Vertex indices of both endpoints of `e`.
    #[inline]
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        match self.edge_position(e) {
            (EdgeKind::Horizontal, i, j) => (self.vertex(i, j), self.vertex(i + 1, j)),
            (EdgeKind::Vertical, i, j) => (self.vertex(i, j), self.vertex(i, j + 1)),
        }
    }

    /// Edges incident to `v`, paired with the opposite endpoint.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (x, y) = self.coords(v);
        let w = self.width + 1;
        let left = (x > 0).then(|| (self.horizontal_edge(x - 1, y), v - 1));
        let right = (x < self.width).then(|| (self.horizontal_edge(x, y), v + 1));
        let down = (y > 0).then(|| (self.vertical_edge(x, y - 1), v - w));
        let up = (y < self.height).then(|| (self.vertical_edge(x, y), v + w));
        [left, right, down, up].into_iter().flatten()
    }

    /// Edges with both endpoints in the column band `lo <= x <= hi`.
    pub fn edges_in_band(&self, lo: f64, hi: f64) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| {
                let (a, b) = self.endpoints(e);
                let xa = self.coords(a).0 as f64;
                let xb = self.coords(b).0 as f64;
                xa >= lo && xb >= lo && xa <= hi && xb <= hi
            })
            .collect()
    }

    /// `K_R`: edges contained in the right half `[⌊n/2⌋, n] × [0, m]`.
    pub fn right_half(&self) -> Vec<usize> {
        self.edges_in_band((self.width / 2) as f64, self.width as f64)
    }

    /// `K_L`: edges contained in the left half `[0, ⌈n/2⌉] × [0, m]`.
    pub fn left_half(&self) -> Vec<usize> {
        self.edges_in_band(0.0, self.width.div_ceil(2) as f64)
    }

    /// Edges contained in the rightmost quarter `[3n/4, n] × [0, m]`.
    pub fn right_quarter(&self) -> Vec<usize> {
        self.edges_in_band(0.75 * self.width as f64, self.width as f64)
    }

    /// The edge obtained by reflecting `e` through `x = n/2`.
    pub fn mirror_edge(&self, e: usize) -> usize {
        match self.edge_position(e) {
            (EdgeKind::Horizontal, i, j) => self.horizontal_edge(self.width - 1 - i, j),
            (EdgeKind::Vertical, i, j) => self.vertical_edge(self.width - i, j),
        }
    }

    /// `max(w/h, h/w)`.
    pub fn aspect(&self) -> f64 {
        let (w, h) = (self.width as f64, self.height as f64);
        (w / h).max(h / w)
    }
}

impl fmt::Display for RectLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Present / absent state of every edge of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeConfig {
    lattice: RectLattice,
    present: FixedBitSet,
}

impl EdgeConfig {
    pub fn empty(lattice: RectLattice) -> Self {
        EdgeConfig {
            lattice,
            present: FixedBitSet::with_capacity(lattice.edge_count()),
        }
    }

    pub fn full(lattice: RectLattice) -> Self {
        let mut c = Self::empty(lattice);
        c.present.insert_range(..);
        c
    }

    /// Bit `e` of `mask` is the state of edge `e`; only for lattices with at
    /// most 64 edges.
    pub fn from_mask(lattice: RectLattice, mask: u64) -> Self {
        let mut c = Self::empty(lattice);
        for e in 0..lattice.edge_count().min(64) {
            if mask >> e & 1 == 1 {
                c.present.insert(e);
            }
        }
        c
    }

    pub fn from_fn(lattice: RectLattice, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut c = Self::empty(lattice);
        for e in 0..lattice.edge_count() {
            if f(e) {
                c.present.insert(e);
            }
        }
        c
    }

    pub fn lattice(&self) -> &RectLattice {
        &self.lattice
    }

    #[inline]
    pub fn is_present(&self, e: usize) -> bool {
        self.present.contains(e)
    }

    pub fn set(&mut self, e: usize, present: bool) {
        self.present.set(e, present);
    }

    pub fn flip(&mut self, e: usize) {
        self.present.toggle(e);
    }

    pub fn count_present(&self) -> usize {
        self.present.count_ones(..)
    }

    pub fn present_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.present.ones()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.present
    }

    /// Inverse of [`EdgeConfig::from_mask`].
    pub fn to_mask(&self) -> u64 {
        self.present
            .ones()
            .filter(|&e| e < 64)
            .fold(0, |m, e| m | 1 << e)
    }

    /// Coordinatewise product `ψ·ξ`.
    pub fn and(&self, other: &EdgeConfig) -> Result<EdgeConfig> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        let mut present = self.present.clone();
        present.intersect_with(&other.present);
        Ok(EdgeConfig {
            lattice: self.lattice,
            present,
        })
    }

    pub fn is_subset(&self, other: &EdgeConfig) -> bool {
        self.lattice == other.lattice && self.present.is_subset(&other.present)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_a_bijection() {
        for (w, h) in [(1, 1), (2, 3), (5, 2), (4, 4)] {
            let lat = RectLattice::new(w, h).unwrap();
            assert_eq!(lat.edge_count(), w * (h + 1) + h * (w + 1));
            let mut seen = std::collections::HashSet::new();
            for e in 0..lat.edge_count() {
                let (a, b) = lat.endpoints(e);
                let (xa, ya) = lat.coords(a);
                let (xb, yb) = lat.coords(b);
                assert_eq!(xa.abs_diff(xb) + ya.abs_diff(yb), 1);
                assert!(seen.insert((a.min(b), a.max(b))));
                let back = match lat.edge_position(e) {
                    (EdgeKind::Horizontal, i, j) => lat.horizontal_edge(i, j),
                    (EdgeKind::Vertical, i, j) => lat.vertical_edge(i, j),
                };
                assert_eq!(back, e);
                assert_eq!(lat.mirror_edge(lat.mirror_edge(e)), e);
            }
            let mut degree = 0;
            for v in 0..lat.vertex_count() {
                for (e, u) in lat.incident(v) {
                    let (a, b) = lat.endpoints(e);
                    assert!((a == v && b == u) || (a == u && b == v));
                    degree += 1;
                }
            }
            assert_eq!(degree, 2 * lat.edge_count());
        }
    }

    #[test]
    fn one_by_one_edge_order() {
        let lat = RectLattice::new(1, 1).unwrap();
        assert_eq!(lat.endpoints(0), (lat.vertex(0, 0), lat.vertex(1, 0)));
        assert_eq!(lat.endpoints(1), (lat.vertex(0, 1), lat.vertex(1, 1)));
        assert_eq!(lat.endpoints(2), (lat.vertex(0, 0), lat.vertex(0, 1)));
        assert_eq!(lat.endpoints(3), (lat.vertex(1, 0), lat.vertex(1, 1)));
    }

    #[test]
    fn halves_cover_all_edges() {
        for w in 1..7 {
            let lat = RectLattice::new(w, 3).unwrap();
            let mut covered = vec![false; lat.edge_count()];
            for e in lat.left_half().into_iter().chain(lat.right_half()) {
                covered[e] = true;
            }
            assert!(covered.iter().all(|&c| c), "width {w}");
            let mirrored: Vec<usize> = lat
                .left_half()
                .iter()
                .map(|&e| lat.mirror_edge(e))
                .collect();
            let mut right = lat.right_half();
            let mut m = mirrored.clone();
            right.sort();
            m.sort();
            assert_eq!(right, m);
        }
        let lat = RectLattice::square(8).unwrap();
        assert!(lat
            .right_quarter()
            .iter()
            .all(|&e| lat.coords(lat.endpoints(e).0).0 >= 6));
    }

    #[test]
    fn config_ops() {
        let lat = RectLattice::new(2, 2).unwrap();
        let a = EdgeConfig::from_mask(lat, 0b1011_0110_1010);
        assert_eq!(a.to_mask(), 0b1011_0110_1010);
        let b = EdgeConfig::from_mask(lat, 0b0110_0101_1100);
        assert_eq!(a.and(&b).unwrap().to_mask(), 0b0010_0100_1000);
        assert!(a.and(&b).unwrap().is_subset(&a));
        assert_eq!(EdgeConfig::full(lat).count_present(), 12);
        let other = EdgeConfig::empty(RectLattice::new(3, 2).unwrap());
        assert_eq!(a.and(&other), Err(Error::LatticeMismatch));
        assert!(RectLattice::new(0, 3).is_err());
    }
}
