//! Rectangles, long rectangles, and domains on the grid torus.
//!
//! A rectangle is stored by its lifted geometry: west column `col_w`, column
//! span, south row `row_s`, row span. Short rectangles have both spans in
//! `(0, n)`; long rectangles are width one in one direction and span
//! `(n, 2n)` in the other, wrapping the torus once with a multiplicity-2
//! overlap. For `r` in `Rect(x, y)` the state `x` occupies the SW and NE
//! corners of the lift and `y` the NW and SE corners; this orientation is
//! pinned by the Maslov grading relation (tested below).

use crate::grid::{GridDiagram, GridState};
use crate::perm::Perm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RectKind {
    Short,
    VerticalLong,
    HorizontalLong,
}

/// Lifted geometry of a (possibly long) rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub n: u16,
    /// west edge circle index in `[0, n)`
    pub col_w: u16,
    /// width; `(0,n)` short, `1` for vertical long, `(n,2n)` horizontal long
    pub col_span: u16,
    /// south edge circle index in `[0, n)`
    pub row_s: u16,
    pub row_span: u16,
}

impl Rect {
    pub fn kind(&self) -> RectKind {
        let n = self.n;
        if self.row_span > n {
            RectKind::VerticalLong
        } else if self.col_span > n {
            RectKind::HorizontalLong
        } else {
            RectKind::Short
        }
    }

    pub fn is_long(&self) -> bool {
        self.kind() != RectKind::Short
    }

    /// Number of lifts of circle-interval point `v + k*n` in `[lo, lo+span)`.
    fn line_mult(v: u16, lo: u16, span: u16, n: u16) -> u16 {
        // v' = smallest lift of v that is >= lo
        let v = v % n;
        let vlift = if v >= lo { v } else { v + n };
        let mut count = 0;
        let mut t = vlift;
        while t < lo + span {
            count += 1;
            t += n;
        }
        count
    }

    /// Multiplicity of the cell whose SW corner is `(c, r)`.
    pub fn cell_mult(&self, c: usize, r: usize) -> u16 {
        Self::line_mult(c as u16, self.col_w, self.col_span, self.n)
            * Self::line_mult(r as u16, self.row_s, self.row_span, self.n)
    }

    /// Multiplicity at the marking centered in cell `(c, r)` (same value).
    pub fn mark_mult(&self, c: usize, r: usize) -> u16 {
        self.cell_mult(c, r)
    }

    /// Count of strict-interior lattice circles: lifts of `v` strictly
    /// inside `(lo, lo+span)`.
    fn line_interior(v: u16, lo: u16, span: u16, n: u16) -> u16 {
        let v = v % n;
        let mut vlift = if v > lo { v } else { v + n };
        if vlift == lo {
            vlift += n;
        }
        let mut count = 0;
        let mut t = vlift;
        while t < lo + span {
            count += 1;
            t += n;
        }
        count
    }

    /// Number of points of the state `x` in the open interior.
    pub fn interior_points(&self, x: &GridState) -> u16 {
        let n = self.n as usize;
        let mut total = 0;
        for c in 0..n {
            let ci = Self::line_interior(c as u16, self.col_w, self.col_span, self.n);
            if ci == 0 {
                continue;
            }
            let ri = Self::line_interior(x.get(c) as u16, self.row_s, self.row_span, self.n);
            total += ci * ri;
        }
        total
    }

    /// The double-point degree: 1 for long rectangles, `|Int(r) ∩ x|` for
    /// short ones.
    pub fn t_degree(&self, from: &GridState) -> u16 {
        if self.is_long() {
            1
        } else {
            self.interior_points(from)
        }
    }

    /// Total multiplicity over the O-markings, per column.
    pub fn o_counts(&self, g: &GridDiagram) -> Vec<u16> {
        (0..g.n)
            .map(|c| self.mark_mult(c, g.o_rows[c] as usize))
            .collect()
    }

    /// Total multiplicity over the X-markings (sum).
    pub fn x_total(&self, g: &GridDiagram) -> u16 {
        (0..g.n)
            .map(|c| self.mark_mult(c, g.x_rows[c] as usize))
            .sum()
    }

    /// Multiplicity matrix over the n x n cells.
    pub fn mult_matrix(&self) -> Vec<Vec<u16>> {
        let n = self.n as usize;
        (0..n)
            .map(|r| (0..n).map(|c| self.cell_mult(c, r)).collect())
            .collect()
    }

    /// For long rectangles: the associated short rectangle (one full annulus
    /// deleted). Connects the same pair of states.
    pub fn associated_short(&self) -> Rect {
        let mut r = *self;
        match self.kind() {
            RectKind::VerticalLong => r.row_span -= self.n,
            RectKind::HorizontalLong => r.col_span -= self.n,
            RectKind::Short => {}
        }
        r
    }

    /// Column circles carrying the west and east edges (mod n).
    pub fn edge_cols(&self) -> (u16, u16) {
        (self.col_w % self.n, (self.col_w + self.col_span) % self.n)
    }
}

/// All rectangles (optionally including long ones) from `x` to `y`.
///
/// Empty unless the states differ in exactly two columns.
pub fn rects_between(x: &GridState, y: &GridState, include_long: bool) -> Vec<Rect> {
    let n = x.n();
    let mut diff = Vec::with_capacity(3);
    for c in 0..n {
        if x.get(c) != y.get(c) {
            diff.push(c);
            if diff.len() > 2 {
                return Vec::new();
            }
        }
    }
    if diff.len() != 2 {
        return Vec::new();
    }
    let (c1, c2) = (diff[0], diff[1]);
    if x.get(c1) != y.get(c2) || x.get(c2) != y.get(c1) {
        return Vec::new();
    }
    rects_for_pair(x, c1, c2, include_long)
}

/// Rectangles from `x` to `x` with columns `c1 < c2` transposed.
pub fn rects_for_pair(x: &GridState, c1: usize, c2: usize, include_long: bool) -> Vec<Rect> {
    let n = x.n() as u16;
    let (c1u, c2u) = (c1 as u16, c2 as u16);
    let r1 = x.get(c1) as u16;
    let r2 = x.get(c2) as u16;
    let modn = |v: i32| -> u16 { (v.rem_euclid(n as i32)) as u16 };
    let mut out = Vec::with_capacity(if include_long { 4 } else { 2 });
    // short A: columns [c1, c2], SW at (c1, r1)
    out.push(Rect {
        n,
        col_w: c1u,
        col_span: c2u - c1u,
        row_s: r1,
        row_span: modn(r2 as i32 - r1 as i32),
    });
    // short B: columns [c2, c1 + n], SW at (c2, r2)
    out.push(Rect {
        n,
        col_w: c2u,
        col_span: c1u + n - c2u,
        row_s: r2,
        row_span: modn(r1 as i32 - r2 as i32),
    });
    if include_long && n >= 2 {
        // vertical longs: need the two columns adjacent on the torus
        if c2 == c1 + 1 {
            out.push(Rect {
                n,
                col_w: c1u,
                col_span: 1,
                row_s: r1,
                row_span: n + modn(r2 as i32 - r1 as i32),
            });
        }
        if c1 == 0 && c2 == n as usize - 1 {
            out.push(Rect {
                n,
                col_w: c2u,
                col_span: 1,
                row_s: r2,
                row_span: n + modn(r1 as i32 - r2 as i32),
            });
        }
        // horizontal longs: need the two rows adjacent on the torus
        if r2 == (r1 + 1) % n {
            out.push(Rect {
                n,
                col_w: c1u,
                col_span: n + (c2u - c1u),
                row_s: r1,
                row_span: 1,
            });
        }
        if r1 == (r2 + 1) % n {
            out.push(Rect {
                n,
                col_w: c2u,
                col_span: n + (c1u + n - c2u),
                row_s: r2,
                row_span: 1,
            });
        }
    }
    out
}

/// All `(c1, c2, rects)` with targets `x` transposed at those columns.
pub fn rects_from_state(x: &GridState, include_long: bool) -> Vec<(usize, usize, Vec<Rect>)> {
    let n = x.n();
    let mut out = Vec::new();
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            out.push((c1, c2, rects_for_pair(x, c1, c2, include_long)));
        }
    }
    out
}

/// A domain: an integer combination of cells connecting two states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    pub from: Perm,
    pub to: Perm,
    pub mult: Vec<i32>, // row-major n x n
}

impl Domain {
    pub fn from_rect(g_n: usize, from: &GridState, to: &GridState, r: &Rect) -> Domain {
        let n = g_n;
        let mut mult = vec![0i32; n * n];
        for row in 0..n {
            for col in 0..n {
                mult[row * n + col] = r.cell_mult(col, row) as i32;
            }
        }
        Domain {
            from: from.clone(),
            to: to.clone(),
            mult,
        }
    }

    /// The composite domain of `self` followed by `other`.
    pub fn compose(&self, other: &Domain) -> Domain {
        assert_eq!(self.to, other.from);
        Domain {
            from: self.from.clone(),
            to: other.to.clone(),
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Public rectangle record carrying its endpoint states (the spec's
/// `RectLike`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectLike {
    pub kind: RectKind,
    pub from: GridState,
    pub to: GridState,
    pub geom: Rect,
}

/// Marking-count record for a rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicities {
    pub o_counts: Vec<u16>,
    pub x_counts: Vec<u16>,
    pub interior_from_points: u16,
    pub t_degree: u16,
}

pub fn multiplicities(g: &GridDiagram, r: &RectLike) -> Multiplicities {
    let o_counts = r.geom.o_counts(g);
    let x_counts: Vec<u16> = (0..g.n)
        .map(|c| r.geom.mark_mult(c, g.x_rows[c] as usize))
        .collect();
    Multiplicities {
        o_counts,
        x_counts,
        interior_from_points: r.geom.interior_points(&r.from),
        t_degree: r.geom.t_degree(&r.from),
    }
}

/// The spec-facing enumeration: all of `Rect(x,y)` (or `Rect*(x,y)`).
pub fn rect_likes_between(x: &GridState, y: &GridState, include_long: bool) -> Vec<RectLike> {
    rects_between(x, y, include_long)
        .into_iter()
        .map(|geom| RectLike {
            kind: geom.kind(),
            from: x.clone(),
            to: y.clone(),
            geom,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDiagram;
    use crate::perm::all_perms;

    fn unknot2() -> GridDiagram {
        GridDiagram::new(2, vec![0, 1], vec![1, 0]).unwrap()
    }

    #[test]
    fn same_state_no_rects() {
        let x = Perm::from_slice(&[1, 0, 2]);
        assert!(rects_between(&x, &x, true).is_empty());
    }

    #[test]
    fn two_short_rects_partition_torus() {
        // the four torus rectangles determined by two differing points split
        // two per direction, and together tile the torus twice per pair
        for x in all_perms(4) {
            for c1 in 0..4 {
                for c2 in c1 + 1..4 {
                    let y = x.swapped(c1, c2);
                    let fwd = rects_between(&x, &y, false);
                    let bwd = rects_between(&y, &x, false);
                    assert_eq!(fwd.len(), 2);
                    assert_eq!(bwd.len(), 2);
                    // all four are distinct and each covers its column band
                    let mut seen = std::collections::HashSet::new();
                    for r in fwd.iter().chain(bwd.iter()) {
                        assert!(seen.insert((r.col_w, r.col_span, r.row_s, r.row_span)));
                        assert!(r.kind() == RectKind::Short);
                    }
                }
            }
        }
    }

    #[test]
    fn maslov_relation_fixes_orientation() {
        // M(x) - M(y) = 1 - 2|r ∩ O| + 2|x ∩ Int(r)| and
        // A(x) - A(y) = |r ∩ X| - |r ∩ O| for every rectangle in Rect(x,y),
        // exhaustively for small diagrams.
        let diagrams = [
            unknot2(),
            GridDiagram::new(3, vec![0, 1, 2], vec![2, 0, 1]).unwrap(),
            GridDiagram::new(4, vec![1, 2, 3, 0], vec![3, 0, 1, 2]).unwrap(),
        ];
        for g in diagrams {
            for x in g.states() {
                let bx = g.grading(&x);
                for (c1, c2, rects) in rects_from_state(&x, false) {
                    let y = x.swapped(c1, c2);
                    let by = g.grading(&y);
                    for r in rects {
                        let o: i32 = r.o_counts(&g).iter().map(|&v| v as i32).sum();
                        let xi = r.interior_points(&x) as i32;
                        let xx = r.x_total(&g) as i32;
                        assert_eq!(
                            bx.maslov - by.maslov,
                            1 - 2 * o + 2 * xi,
                            "M relation fails for {x:?} -> {y:?} rect {r:?}"
                        );
                        assert_eq!(bx.alexander2 - by.alexander2, 2 * (xx - o));
                    }
                }
            }
        }
    }

    #[test]
    fn unknot_rect_marking_split() {
        // from the (0,0)-graded state both rectangles cross an X; from the
        // (-1,-1) state both cross an O
        let g = unknot2();
        let top = Perm::from_slice(&[1, 0]);
        let bot = Perm::from_slice(&[0, 1]);
        for r in rects_between(&top, &bot, false) {
            assert_eq!(r.x_total(&g), 1);
            assert_eq!(r.o_counts(&g).iter().sum::<u16>(), 0);
        }
        for r in rects_between(&bot, &top, false) {
            assert_eq!(r.x_total(&g), 0);
            assert_eq!(r.o_counts(&g).iter().sum::<u16>(), 1);
        }
    }

    /// Brute-force long-rectangle oracle: scan all width-one lifted windows
    /// with span in (n, 2n).
    fn brute_force_longs(x: &Perm, y: &Perm) -> Vec<Rect> {
        let n = x.n() as u16;
        let mut out = Vec::new();
        // vertical candidates
        for col in 0..n {
            for row_s in 0..n {
                for span in n + 1..2 * n {
                    let r = Rect {
                        n,
                        col_w: col,
                        col_span: 1,
                        row_s,
                        row_span: span,
                    };
                    if connects(&r, x, y) {
                        out.push(r);
                    }
                }
            }
        }
        for row in 0..n {
            for col_s in 0..n {
                for span in n + 1..2 * n {
                    let r = Rect {
                        n,
                        col_w: col_s,
                        col_span: span,
                        row_s: row,
                        row_span: 1,
                    };
                    if connects(&r, x, y) {
                        out.push(r);
                    }
                }
            }
        }
        out
    }

    /// Boundary test: ∂(∂r ∩ α) = y - x with x at SW/NE of the lift.
    fn connects(r: &Rect, x: &Perm, y: &Perm) -> bool {
        let n = r.n as usize;
        let sw = (r.col_w as usize % n, r.row_s as usize % n);
        let ne = (
            ((r.col_w + r.col_span) as usize) % n,
            ((r.row_s + r.row_span) as usize) % n,
        );
        let nw = (sw.0, ne.1);
        let se = (ne.0, sw.1);
        // corners must be distinct points on the torus
        if sw.0 == ne.0 || sw.1 == ne.1 {
            return false;
        }
        x.get(sw.0) == sw.1
            && x.get(ne.0) == ne.1
            && y.get(nw.0) == nw.1
            && y.get(se.0) == se.1
            && (0..n).all(|c| c == sw.0 || c == ne.0 || x.get(c) == y.get(c))
    }

    #[test]
    fn long_rect_enumeration_matches_brute_force() {
        for x in all_perms(3) {
            for c1 in 0..3 {
                for c2 in c1 + 1..3 {
                    let y = x.swapped(c1, c2);
                    let mut fast: Vec<Rect> = rects_between(&x, &y, true)
                        .into_iter()
                        .filter(|r| r.is_long())
                        .collect();
                    let mut brute = brute_force_longs(&x, &y);
                    fast.sort_by_key(|r| (r.col_w, r.col_span, r.row_s, r.row_span));
                    brute.sort_by_key(|r| (r.col_w, r.col_span, r.row_s, r.row_span));
                    assert_eq!(fast, brute, "long rects mismatch {x:?} -> {y:?}");
                }
            }
        }
    }

    #[test]
    fn long_rect_properties() {
        // every long rectangle has some multiplicity-2 cell, some
        // multiplicity-1 cell, and T = 1
        for x in all_perms(4) {
            for (_, _, rects) in rects_from_state(&x, true) {
                for r in rects.iter().filter(|r| r.is_long()) {
                    let m = r.mult_matrix();
                    let flat: Vec<u16> = m.into_iter().flatten().collect();
                    assert!(flat.iter().any(|&v| v == 2));
                    assert!(flat.iter().any(|&v| v == 1));
                    assert!(flat.iter().all(|&v| v <= 2));
                    assert_eq!(r.t_degree(&x), 1);
                }
            }
        }
    }

    #[test]
    fn vertical_annulus_total_o() {
        // a vertical annulus of width one has total O-multiplicity 1
        let g = GridDiagram::new(3, vec![0, 1, 2], vec![2, 0, 1]).unwrap();
        let ann = Rect {
            n: 3,
            col_w: 1,
            col_span: 1,
            row_s: 0,
            row_span: 3,
        };
        assert_eq!(ann.o_counts(&g).iter().sum::<u16>(), 1);
    }

    #[test]
    fn empty_short_rect_t_zero() {
        let x = Perm::from_slice(&[1, 0]);
        let y = Perm::from_slice(&[0, 1]);
        for r in rects_between(&x, &y, false) {
            assert_eq!(r.t_degree(&x), 0);
        }
    }
}
