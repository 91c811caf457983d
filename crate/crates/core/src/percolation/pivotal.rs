use fixedbitset::FixedBitSet;

use crate::percolation::crossing::{
    dual_clusters, dual_edge, has_horizontal_crossing, primal_clusters, Direction,
};
use crate::percolation::lattice::EdgeConfig;

/// Pivotal edges for the horizontal crossing, by flipping every edge and
/// recomputing connectivity. `O(E² α)`.
pub fn pivotal_edges_baseline(c: &EdgeConfig) -> FixedBitSet {
    let base = has_horizontal_crossing(c);
    let mut work = c.clone();
    let mut out = FixedBitSet::with_capacity(c.lattice().edge_count());
    for e in 0..c.lattice().edge_count() {
        work.flip(e);
        if has_horizontal_crossing(&work) != base {
            out.insert(e);
        }
        work.flip(e);
    }
    out
}

/// Pivotal edges for the horizontal crossing in `O(E α)`.
///
/// Without a crossing, an absent edge is pivotal when its endpoints lie in
/// the left-connected and the right-connected cluster respectively. With a
/// crossing there is no dual top-bottom crossing, and a present edge is
/// pivotal when its dual edge joins the bottom-connected and the
/// top-connected dual cluster.
pub fn pivotal_edges(c: &EdgeConfig) -> FixedBitSet {
    let lat = *c.lattice();
    let mut out = FixedBitSet::with_capacity(lat.edge_count());
    let (mut ds, left, right) = primal_clusters(c, Direction::Horizontal);
    let (l, r) = (ds.find(left), ds.find(right));
    if l != r {
        for e in 0..lat.edge_count() {
            if c.is_present(e) {
                continue;
            }
            let (a, b) = lat.endpoints(e);
            let (ra, rb) = (ds.find(a), ds.find(b));
            if (ra == l && rb == r) || (ra == r && rb == l) {
                out.insert(e);
            }
        }
        return out;
    }
    let (mut dual, bottom, top) = dual_clusters(c, Direction::Vertical);
    let (b, t) = (dual.find(bottom), dual.find(top));
    for e in c.present_edges() {
        if let Some((x, y)) = dual_edge(&lat, e, Direction::Vertical) {
            let (rx, ry) = (dual.find(x), dual.find(y));
            if (rx == b && ry == t) || (rx == t && ry == b) {
                out.insert(e);
            }
        }
    }
    out
}

/// Whether the single edge `e` is pivotal in `c`; the state of `e` in `c` is
/// irrelevant.
pub fn is_pivotal(c: &EdgeConfig, e: usize) -> bool {
    let mut without = c.clone();
    without.set(e, false);
    let (mut ds, left, right) = primal_clusters(&without, Direction::Horizontal);
    let (l, r) = (ds.find(left), ds.find(right));
    if l == r {
        return false;
    }
    let (a, b) = c.lattice().endpoints(e);
    let (ra, rb) = (ds.find(a), ds.find(b));
    (ra == l && rb == r) || (ra == r && rb == l)
}
