//! Toroidal grid diagrams, grid states, Maslov/Alexander gradings, grid
//! moves, and link components.
//!
//! Conventions: the fundamental domain is `[0,n) x [0,n)` with columns
//! west-to-east and rows south-to-north. Vertical circles sit at integer
//! x-coordinates, horizontal circles at integer y. State points are at
//! integer points `(i, x[i])`; the markings sit at half-integer centers
//! `(i + 1/2, r + 1/2)`.

use crate::perm::{all_perms, Perm};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("not a permutation: {0} row list repeats or exceeds n-1")]
    NotAPermutation(&'static str),
    #[error("marking collision: column {0} carries both X and O")]
    MarkingCollision(usize),
    #[error("size mismatch: expected {expected} entries, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("malformed diagram text: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("bad location {0} for grid of size {1}")]
    BadLocation(usize, usize),
}

/// An n-by-n toroidal grid diagram: one X and one O in each row and column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDiagram {
    pub n: usize,
    /// row index of the O in each column
    pub o_rows: Vec<u8>,
    /// row index of the X in each column
    pub x_rows: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// A grid state: one intersection point per vertical and horizontal circle,
/// as the permutation column -> row.
pub type GridState = Perm;

/// Maslov grading (an integer) and Alexander grading (a half-integer stored
/// doubled; integral exactly when the diagram has one link component).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bigrading {
    pub maslov: i32,
    /// twice the Alexander grading
    pub alexander2: i32,
}

impl Bigrading {
    pub fn new(maslov: i32, alexander2: i32) -> Self {
        Bigrading { maslov, alexander2 }
    }

    /// Alexander grading when it is an integer; panics otherwise.
    pub fn alexander_int(&self) -> i32 {
        assert!(self.alexander2 % 2 == 0, "half-integral Alexander grading");
        self.alexander2 / 2
    }

    pub fn alexander_string(&self) -> String {
        if self.alexander2 % 2 == 0 {
            format!("{}", self.alexander2 / 2)
        } else {
            format!("{}/2", self.alexander2)
        }
    }
}

impl GridDiagram {
    pub fn new(n: usize, o_rows: Vec<u8>, x_rows: Vec<u8>) -> Result<Self, GridError> {
        Self::with_name(n, o_rows, x_rows, None)
    }

    pub fn with_name(
        n: usize,
        o_rows: Vec<u8>,
        x_rows: Vec<u8>,
        name: Option<String>,
    ) -> Result<Self, GridError> {
        if o_rows.len() != n {
            return Err(GridError::SizeMismatch {
                expected: n,
                got: o_rows.len(),
            });
        }
        if x_rows.len() != n {
            return Err(GridError::SizeMismatch {
                expected: n,
                got: x_rows.len(),
            });
        }
        if !Perm::is_permutation(&o_rows) {
            return Err(GridError::NotAPermutation("O"));
        }
        if !Perm::is_permutation(&x_rows) {
            return Err(GridError::NotAPermutation("X"));
        }
        if n >= 2 {
            for i in 0..n {
                if o_rows[i] == x_rows[i] {
                    return Err(GridError::MarkingCollision(i));
                }
            }
        }
        Ok(GridDiagram {
            n,
            o_rows,
            x_rows,
            name,
        })
    }

    /// Parse the bit-exact text format:
    /// line 1 `n=<int>`, line 2 `O=<comma-separated rows>`,
    /// line 3 `X=<comma-separated rows>`, optional line 4 `name=<string>`.
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let nline = lines
            .next()
            .ok_or_else(|| GridError::Malformed("missing n= line".into()))?;
        let n: usize = nline
            .strip_prefix("n=")
            .ok_or_else(|| GridError::Malformed("first line must be n=<int>".into()))?
            .trim()
            .parse()
            .map_err(|_| GridError::Malformed("bad integer after n=".into()))?;
        let parse_rows = |line: &str, tag: &str| -> Result<Vec<u8>, GridError> {
            let body = line
                .strip_prefix(tag)
                .ok_or_else(|| GridError::Malformed(format!("expected {tag}<rows> line")))?;
            body.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| GridError::Malformed(format!("bad row entry {t:?}")))
                })
                .collect()
        };
        let oline = lines
            .next()
            .ok_or_else(|| GridError::Malformed("missing O= line".into()))?;
        let xline = lines
            .next()
            .ok_or_else(|| GridError::Malformed("missing X= line".into()))?;
        let o_rows = parse_rows(oline, "O=")?;
        let x_rows = parse_rows(xline, "X=")?;
        let name = lines
            .next()
            .and_then(|l| l.strip_prefix("name="))
            .map(|s| s.to_string());
        Self::with_name(n, o_rows, x_rows, name)
    }

    /// The bit-exact text format emitted by this engine.
    pub fn to_text(&self) -> String {
        let join = |v: &[u8]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut s = format!(
            "n={}\nO={}\nX={}\n",
            self.n,
            join(&self.o_rows),
            join(&self.x_rows)
        );
        if let Some(name) = &self.name {
            s.push_str(&format!("name={name}\n"));
        }
        s
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    /// All grid states in lexicographic order.
    pub fn states(&self) -> Vec<GridState> {
        all_perms(self.n)
    }

    /// Partition of the columns into link components with component count.
    ///
    /// Components are found by alternately following X -> O within rows and
    /// O -> X within columns until the cycles close.
    pub fn link_components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        // column of the O in each row / column of the X in each row
        let mut o_col_of_row = vec![0usize; n];
        let mut x_col_of_row = vec![0usize; n];
        for c in 0..n {
            o_col_of_row[self.o_rows[c] as usize] = c;
            x_col_of_row[self.x_rows[c] as usize] = c;
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut c = start;
            loop {
                seen[c] = true;
                comp.push(c);
                // follow the vertical segment of column c from X to O (same
                // column), then the horizontal segment of the O's row to that
                // row's X, landing in the X's column.
                let row_of_o = self.o_rows[c] as usize;
                let next = x_col_of_row[row_of_o];
                c = next;
                if c == start {
                    break;
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort();
        comps
    }

    pub fn component_count(&self) -> usize {
        self.link_components().len()
    }

    /// Component index of each column.
    pub fn column_components(&self) -> Vec<usize> {
        let comps = self.link_components();
        let mut idx = vec![0usize; self.n];
        for (k, comp) in comps.iter().enumerate() {
            for &c in comp {
                idx[c] = k;
            }
        }
        idx
    }

    /// Marking positions as doubled coordinates (centers at odd integers).
    fn marks2(rows: &[u8]) -> Vec<(i64, i64)> {
        rows.iter()
            .enumerate()
            .map(|(c, &r)| (2 * c as i64 + 1, 2 * r as i64 + 1))
            .collect()
    }

    fn state_points2(x: &GridState) -> Vec<(i64, i64)> {
        x.0.iter()
            .enumerate()
            .map(|(c, &r)| (2 * c as i64, 2 * r as i64))
            .collect()
    }

    /// The bigrading (M, A) of a state, computed exactly from the planar
    /// point-count functions over the fixed fundamental domain.
    pub fn grading(&self, x: &GridState) -> Bigrading {
        self.grader().grading(x)
    }

    /// Precomputed grading evaluator (marking positions and component
    /// count), for bulk use.
    pub fn grader(&self) -> Grader {
        Grader {
            n: self.n,
            om: Self::marks2(&self.o_rows),
            xm: Self::marks2(&self.x_rows),
            j_oo: j2(&Self::marks2(&self.o_rows), &Self::marks2(&self.o_rows)),
            j_xx: j2(&Self::marks2(&self.x_rows), &Self::marks2(&self.x_rows)),
            single_component: self.component_count() == 1,
        }
    }

    /// Reflect through the main diagonal (exchanges rows and columns). Used
    /// to reduce row moves to column moves.
    pub fn transpose(&self) -> GridDiagram {
        let n = self.n;
        let mut o = vec![0u8; n];
        let mut x = vec![0u8; n];
        for c in 0..n {
            o[self.o_rows[c] as usize] = c as u8;
            x[self.x_rows[c] as usize] = c as u8;
        }
        GridDiagram {
            n,
            o_rows: o,
            x_rows: x,
            name: None,
        }
    }

    /// Mirror image: reflect columns east-west.
    pub fn mirror(&self) -> GridDiagram {
        let n = self.n;
        let mut o = vec![0u8; n];
        let mut x = vec![0u8; n];
        for c in 0..n {
            o[n - 1 - c] = self.o_rows[c];
            x[n - 1 - c] = self.x_rows[c];
        }
        GridDiagram {
            n,
            o_rows: o,
            x_rows: x,
            name: None,
        }
    }
}

/// `2*J(P,Q) = I(P,Q) + I(Q,P)` over doubled coordinates.
fn j2(p: &[(i64, i64)], q: &[(i64, i64)]) -> i64 {
    let mut c = 0i64;
    for &(a1, a2) in p {
        for &(b1, b2) in q {
            if a1 < b1 && a2 < b2 {
                c += 1;
            }
            if b1 < a1 && b2 < a2 {
                c += 1;
            }
        }
    }
    c
}

/// Bulk grading evaluator.
pub struct Grader {
    n: usize,
    om: Vec<(i64, i64)>,
    xm: Vec<(i64, i64)>,
    j_oo: i64,
    j_xx: i64,
    single_component: bool,
}

impl Grader {
    pub fn grading(&self, x: &GridState) -> Bigrading {
        assert_eq!(x.n(), self.n);
        let xp = GridDiagram::state_points2(x);
        let j_xx_state = j2(&xp, &xp);
        let m2 = j_xx_state - 2 * j2(&xp, &self.om) + self.j_oo + 2;
        let mx2 = j_xx_state - 2 * j2(&xp, &self.xm) + self.j_xx + 2;
        assert!(m2 % 2 == 0, "internal grading error: M not integral");
        let maslov = (m2 / 2) as i32;
        // 2A = (M - M_X) - (n - 1)
        let a2 = (m2 - mx2) / 2 - (self.n as i64 - 1);
        assert!(
            (m2 - mx2) % 2 == 0,
            "internal grading error: M - M_X not integral"
        );
        if self.single_component {
            assert!(
                a2 % 2 == 0,
                "internal grading error: A not integral on a knot diagram"
            );
        }
        Bigrading::new(maslov, a2 as i32)
    }
}

/// Which grid move to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMove {
    /// Swap columns `i`, `i+1` (disjoint or nested projected segments).
    ColumnCommutation(usize),
    /// Swap columns `i`, `i+1` whose projected segments share a vertex.
    ColumnSwitch(usize),
    /// Swap rows `r`, `r+1`.
    RowCommutation(usize),
    RowSwitch(usize),
    /// Stabilization of type X:SW at the X in column `i`.
    StabilizeXSW(usize),
    /// Destabilization of type X:SW merging columns `i`, `i+1`.
    DestabilizeXSW(usize),
}

/// Classification of how the projected segments of two adjacent columns sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentRelation {
    Disjoint,
    /// first contains second / second contains first
    Nested,
    SharedVertex,
    Interleaved,
}

/// Vertical extent of column c's connecting segment, as doubled heights of
/// the two marking centers.
fn column_span2(g: &GridDiagram, c: usize) -> (i64, i64) {
    let a = 2 * g.o_rows[c] as i64 + 1;
    let b = 2 * g.x_rows[c] as i64 + 1;
    (a.min(b), a.max(b))
}

/// Decide how the (closed) projections of the segments of columns `i`, `i+1`
/// relate on the vertical circle.
pub fn column_segment_relation(g: &GridDiagram, i: usize) -> SegmentRelation {
    let (a0, a1) = column_span2(g, i);
    let (b0, b1) = column_span2(g, i + 1);
    // shared endpoint?
    if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
        return SegmentRelation::SharedVertex;
    }
    let inside = |x: i64, lo: i64, hi: i64| lo < x && x < hi;
    let b0_in = inside(b0, a0, a1);
    let b1_in = inside(b1, a0, a1);
    if b0_in && b1_in {
        return SegmentRelation::Nested;
    }
    if !b0_in && !b1_in {
        // either disjoint or a contains... check the reverse containment
        let a0_in = inside(a0, b0, b1);
        let a1_in = inside(a1, b0, b1);
        if a0_in && a1_in {
            return SegmentRelation::Nested;
        }
        if !a0_in && !a1_in {
            return SegmentRelation::Disjoint;
        }
    }
    SegmentRelation::Interleaved
}

pub fn apply_move(g: &GridDiagram, mv: GridMove) -> Result<GridDiagram, MoveError> {
    let n = g.n;
    match mv {
        GridMove::ColumnCommutation(i) | GridMove::ColumnSwitch(i) => {
            if i >= n {
                return Err(MoveError::BadLocation(i, n));
            }
            let j = (i + 1) % n;
            if j == i {
                return Err(MoveError::BadLocation(i, n));
            }
            // moves are defined on adjacent columns within the fundamental
            // domain; wrap-around pairs are normalized by the caller
            if i + 1 >= n {
                return Err(MoveError::BadLocation(i, n));
            }
            let rel = column_segment_relation(g, i);
            let want_switch = matches!(mv, GridMove::ColumnSwitch(_));
            let ok = match rel {
                SegmentRelation::Disjoint | SegmentRelation::Nested => !want_switch,
                SegmentRelation::SharedVertex => want_switch,
                SegmentRelation::Interleaved => false,
            };
            if !ok {
                return Err(MoveError::IllegalMove(format!(
                    "columns {i},{} are {:?}",
                    i + 1,
                    rel
                )));
            }
            let mut o = g.o_rows.clone();
            let mut x = g.x_rows.clone();
            o.swap(i, i + 1);
            x.swap(i, i + 1);
            Ok(GridDiagram {
                n,
                o_rows: o,
                x_rows: x,
                name: None,
            })
        }
        GridMove::RowCommutation(r) | GridMove::RowSwitch(r) => {
            if r + 1 >= n {
                return Err(MoveError::BadLocation(r, n));
            }
            let t = g.transpose();
            let inner = match mv {
                GridMove::RowCommutation(_) => GridMove::ColumnCommutation(r),
                _ => GridMove::ColumnSwitch(r),
            };
            Ok(apply_move(&t, inner)?.transpose())
        }
        GridMove::StabilizeXSW(i) => {
            if i >= n {
                return Err(MoveError::BadLocation(i, n));
            }
            let r = g.x_rows[i] as usize;
            // subdivide column i (new columns i west, i+1 east) and row r
            // (new rows r south, r+1 north); the 2x2 block becomes
            //   X1 O1
            //   .  X2
            // i.e. X1 at (i, r+1), O1 at (i+1, r+1), X2 at (i+1, r).
            let nn = n + 1;
            let ncol = |c: usize| if c < i { c } else { c + 1 };
            let nrow = |row: usize| if row <= r { row } else { row + 1 };
            let mut o = vec![0u8; nn];
            let mut x = vec![0u8; nn];
            for c in 0..n {
                if c == i {
                    continue;
                }
                o[ncol(c)] = nrow(g.o_rows[c] as usize) as u8;
                x[ncol(c)] = nrow(g.x_rows[c] as usize) as u8;
            }
            // old column i's O stays in the west half
            o[i] = nrow(g.o_rows[i] as usize) as u8;
            x[i] = (r + 1) as u8; // X1
            o[i + 1] = (r + 1) as u8; // O1
            x[i + 1] = r as u8; // X2
            Ok(GridDiagram {
                n: nn,
                o_rows: o,
                x_rows: x,
                name: None,
            })
        }
        GridMove::DestabilizeXSW(i) => {
            if i + 1 >= n || n < 2 {
                return Err(MoveError::BadLocation(i, n));
            }
            // detect the X:SW pattern created by StabilizeXSW at columns
            // (i, i+1): X at (i, r+1), X at (i+1, r), O at (i+1, r+1).
            let r1 = g.x_rows[i] as usize;
            if r1 == 0 {
                return Err(MoveError::IllegalMove(
                    "no X:SW pattern at this location".into(),
                ));
            }
            let r = r1 - 1;
            if g.x_rows[i + 1] as usize != r || g.o_rows[i + 1] as usize != r + 1 {
                return Err(MoveError::IllegalMove(
                    "no X:SW pattern at this location".into(),
                ));
            }
            let nn = n - 1;
            let ocol = |c: usize| if c <= i { c } else { c - 1 };
            let orow = |row: usize| if row <= r { row } else { row - 1 };
            let mut o = vec![0u8; nn];
            let mut x = vec![0u8; nn];
            for c in 0..n {
                if c == i + 1 {
                    continue;
                }
                let dst = ocol(c);
                if c == i {
                    // merged column keeps its O and gets the X at row r
                    o[dst] = orow(g.o_rows[c] as usize) as u8;
                    x[dst] = r as u8;
                } else {
                    o[dst] = orow(g.o_rows[c] as usize) as u8;
                    x[dst] = orow(g.x_rows[c] as usize) as u8;
                }
            }
            GridDiagram::new(nn, o, x).map_err(|e| MoveError::IllegalMove(e.to_string()))
        }
    }
}
