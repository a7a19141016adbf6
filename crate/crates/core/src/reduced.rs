//! Reduced-variable complexes: finite complexes over `F[U..., v]` obtained
//! from a grid complex by killing variables and identifying variables along
//! link components.
//!
//! Identifying two variables of the same link component replaces the complex
//! by a quasi-isomorphic-up-to-`W` one: the homology picks up a tensor
//! factor `W = F_(0,0) + F_(-1,-1)` per identification (the cone of the
//! null-homotopic map `V_i - V_j`). The engine computes on the reduced
//! complex and divides the `W`-factors back out of the tables, keeping the
//! count in `w_factors`. Slice bases here are tiny: at most one monomial
//! per state for a full collapse.

use crate::grid::{Bigrading, GridDiagram, GridState};
use crate::linalg::{smith_invariant_factors, BitMatrix, BitVec, Eliminator};
use crate::perm::{all_perms, factorial};
use crate::rect::rects_for_pair;
use crate::signs::SignAssignment;
use num_bigint::BigInt;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

pub const MAX_CLASSES: usize = 4;

/// One differential term out of a state: target state, per-class variable
/// exponents, double-point degree, sign.
#[derive(Debug, Clone, Copy)]
pub struct Arrow {
    pub to: u32,
    pub exps: [u16; MAX_CLASSES],
    pub t: u16,
    pub sign: i8,
}

/// How the grid variables are reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarReduction {
    /// class index per column, or `None` for a killed variable
    pub class_of_col: Vec<Option<u8>>,
    pub n_classes: usize,
    /// number of `W = F_(0,0) + F_(-1,-1)` tensor factors the reduction
    /// introduces relative to the variant being computed
    pub w_factors: usize,
}

impl VarReduction {
    /// All variables identified: computes (variant of the diagram) tensor
    /// `W^(n-1)` for a knot diagram.
    pub fn full_collapse(g: &GridDiagram) -> Self {
        assert_eq!(g.component_count(), 1, "full collapse needs a knot");
        VarReduction {
            class_of_col: vec![Some(0); g.n],
            n_classes: 1,
            w_factors: g.n - 1,
        }
    }

    /// Variables identified along link components: computes the collapsed
    /// variant tensor `W^(n - l)`.
    pub fn component_collapse(g: &GridDiagram) -> Self {
        let comp = g.column_components();
        let l = g.component_count();
        assert!(l <= MAX_CLASSES, "too many link components");
        VarReduction {
            class_of_col: comp.iter().map(|&k| Some(k as u8)).collect(),
            n_classes: l,
            w_factors: g.n - l,
        }
    }

    /// Last column's variable killed, the rest identified: computes the hat
    /// variant tensor `W^(n-2)` for a knot diagram.
    pub fn hat_fast(g: &GridDiagram) -> Self {
        assert_eq!(g.component_count(), 1, "hat_fast needs a knot");
        let mut class_of_col = vec![Some(0u8); g.n];
        class_of_col[g.n - 1] = None;
        VarReduction {
            class_of_col,
            n_classes: if g.n >= 2 { 1 } else { 0 },
            w_factors: g.n.saturating_sub(2),
        }
    }

    /// All variables killed: the fully blocked (tilde) complex, equal to
    /// the hat variant tensor `W^(n-1)` for a knot diagram.
    pub fn tilde(g: &GridDiagram) -> Self {
        VarReduction {
            class_of_col: vec![None; g.n],
            n_classes: 0,
            w_factors: g.n - 1,
        }
    }
}

/// A basis element of a bigraded slice: state index, per-class exponents,
/// power of v.
pub type SliceElem = (u32, [u16; MAX_CLASSES], u16);

pub struct SliceBasis {
    pub m: i32,
    pub a2: i32,
    pub elems: Vec<SliceElem>,
    pub pos: HashMap<SliceElem, usize>,
}

impl SliceBasis {
    pub fn dim(&self) -> usize {
        self.elems.len()
    }
}

pub struct ReducedComplex<'a> {
    pub g: &'a GridDiagram,
    pub red: VarReduction,
    pub enhanced: bool,
    pub sign: Option<&'a SignAssignment>,
    pub states: Vec<GridState>,
    pub gradings: Vec<Bigrading>,
    by_a2: BTreeMap<i32, Vec<u32>>,
    arrow_cache: Vec<OnceLock<Box<[Arrow]>>>,
}

impl<'a> ReducedComplex<'a> {
    pub fn new(
        g: &'a GridDiagram,
        red: VarReduction,
        enhanced: bool,
        sign: Option<&'a SignAssignment>,
    ) -> Self {
        let states = all_perms(g.n);
        let grader = g.grader();
        let gradings: Vec<Bigrading> = states.par_iter().map(|x| grader.grading(x)).collect();
        let mut by_a2: BTreeMap<i32, Vec<u32>> = BTreeMap::new();
        for (i, b) in gradings.iter().enumerate() {
            by_a2.entry(b.alexander2).or_default().push(i as u32);
        }
        let arrow_cache = (0..factorial(g.n)).map(|_| OnceLock::new()).collect();
        ReducedComplex {
            g,
            red,
            enhanced,
            sign,
            states,
            gradings,
            by_a2,
            arrow_cache,
        }
    }

    /// Differential arrows out of a state: X-free short rectangles that
    /// avoid killed variables (and have T = 0 for plain complexes).
    pub fn arrows(&self, idx: u32) -> &[Arrow] {
        self.arrow_cache[idx as usize].get_or_init(|| {
            let x = &self.states[idx as usize];
            let n = self.g.n;
            let mut out = Vec::new();
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    let y = x.swapped(c1, c2);
                    let yi = y.lehmer_rank() as u32;
                    for r in rects_for_pair(x, c1, c2, false) {
                        if r.x_total(self.g) != 0 {
                            continue;
                        }
                        let t = r.t_degree(x);
                        if !self.enhanced && t != 0 {
                            continue;
                        }
                        let mut exps = [0u16; MAX_CLASSES];
                        let mut dead = false;
                        for c in 0..n {
                            let m = r.mark_mult(c, self.g.o_rows[c] as usize);
                            if m == 0 {
                                continue;
                            }
                            match self.red.class_of_col[c] {
                                None => {
                                    dead = true;
                                    break;
                                }
                                Some(k) => exps[k as usize] += m,
                            }
                        }
                        if dead {
                            continue;
                        }
                        let sign = match self.sign {
                            Some(s) => s.sign_of(x, &y, &r).unwrap(),
                            None => 1,
                        };
                        out.push(Arrow {
                            to: yi,
                            exps,
                            t,
                            sign,
                        });
                    }
                }
            }
            out.into_boxed_slice()
        })
    }

    /// The slice basis at bigrading `(m, a2)` (Alexander doubled).
    pub fn slice(&self, m: i32, a2: i32) -> SliceBasis {
        let mut elems = Vec::new();
        let nc = self.red.n_classes;
        for (&sa2, idxs) in self.by_a2.range(a2..) {
            let k2 = sa2 - a2;
            if k2 % 2 != 0 {
                continue;
            }
            let k = (k2 / 2) as u32;
            if nc == 0 && k != 0 {
                continue;
            }
            for &i in idxs {
                let sm = self.gradings[i as usize].maslov;
                // m = M(x) - 2k + 2j
                let twoj = m - sm + k2;
                if twoj % 2 != 0 {
                    continue;
                }
                let j = twoj / 2;
                if j < 0 {
                    continue;
                }
                if !self.enhanced && j != 0 {
                    continue;
                }
                // enumerate compositions of k into nc parts
                compositions(k as u16, nc, &mut |exps| {
                    elems.push((i, exps, j as u16));
                });
            }
        }
        elems.sort_unstable();
        let pos = elems
            .iter()
            .enumerate()
            .map(|(p, &e)| (e, p))
            .collect();
        SliceBasis { m, a2, elems, pos }
    }

    fn target_of(&self, e: &SliceElem, ar: &Arrow) -> SliceElem {
        let mut exps = e.1;
        for k in 0..MAX_CLASSES {
            exps[k] += ar.exps[k];
        }
        (ar.to, exps, e.2 + ar.t)
    }

    /// Boundary matrix from `from` to `to` (one Maslov lower), rows indexed
    /// by source basis elements, over GF(2).
    pub fn matrix_f2(&self, from: &SliceBasis, to: &SliceBasis) -> BitMatrix {
        debug_assert_eq!(from.m - 1, to.m);
        debug_assert_eq!(from.a2, to.a2);
        let mut m = BitMatrix::zeros(from.dim(), to.dim());
        for (row, e) in from.elems.iter().enumerate() {
            for ar in self.arrows(e.0) {
                let tgt = self.target_of(e, ar);
                if let Some(&col) = to.pos.get(&tgt) {
                    m.flip(row, col);
                }
            }
        }
        m
    }

    /// Same over the integers (signed arrows).
    pub fn matrix_z(&self, from: &SliceBasis, to: &SliceBasis) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; to.dim()]; from.dim()];
        for (row, e) in from.elems.iter().enumerate() {
            for ar in self.arrows(e.0) {
                let tgt = self.target_of(e, ar);
                if let Some(&col) = to.pos.get(&tgt) {
                    m[row][col] += ar.sign as i64;
                }
            }
        }
        m
    }

    /// Matrix of `v^k d_k`-type components only (fixed double-point degree).
    pub fn matrix_f2_t(&self, from: &SliceBasis, to: &SliceBasis, t: u16) -> BitMatrix {
        let mut m = BitMatrix::zeros(from.dim(), to.dim());
        for (row, e) in from.elems.iter().enumerate() {
            for ar in self.arrows(e.0) {
                if ar.t != t {
                    continue;
                }
                let tgt = self.target_of(e, ar);
                if let Some(&col) = to.pos.get(&tgt) {
                    m.flip(row, col);
                }
            }
        }
        m
    }

    /// The `d1` endomorphism matrix on a plain reduced complex:
    /// `(m, a2) -> (m-3, a2)` counting T = 1 rectangles.
    pub fn d1_matrix(&self, from: &SliceBasis, to: &SliceBasis) -> BitMatrix {
        debug_assert!(!self.enhanced);
        debug_assert_eq!(from.m - 3, to.m);
        let n = self.g.n;
        let mut m = BitMatrix::zeros(from.dim(), to.dim());
        for (row, e) in from.elems.iter().enumerate() {
            let x = &self.states[e.0 as usize];
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    let y = x.swapped(c1, c2);
                    let yi = y.lehmer_rank() as u32;
                    for r in rects_for_pair(x, c1, c2, false) {
                        if r.x_total(self.g) != 0 || r.t_degree(x) != 1 {
                            continue;
                        }
                        let mut exps = e.1;
                        let mut dead = false;
                        for c in 0..n {
                            let mm = r.mark_mult(c, self.g.o_rows[c] as usize);
                            if mm == 0 {
                                continue;
                            }
                            match self.red.class_of_col[c] {
                                None => {
                                    dead = true;
                                    break;
                                }
                                Some(k) => exps[k as usize] += mm,
                            }
                        }
                        if dead {
                            continue;
                        }
                        if let Some(&col) = to.pos.get(&(yi, exps, e.2)) {
                            m.flip(row, col);
                        }
                    }
                }
            }
        }
        m
    }

    /// Multiplication by the class-`k` variable as a slice map
    /// `(m, a2) -> (m-2, a2-2)`.
    pub fn var_matrix(&self, from: &SliceBasis, to: &SliceBasis, k: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(from.dim(), to.dim());
        for (row, e) in from.elems.iter().enumerate() {
            let mut exps = e.1;
            exps[k] += 1;
            if let Some(&col) = to.pos.get(&(e.0, exps, e.2)) {
                m.set(row, col, true);
            }
        }
        m
    }

    /// Multiplication by v: `(m, a2) -> (m+2, a2)`.
    pub fn v_matrix(&self, from: &SliceBasis, to: &SliceBasis) -> BitMatrix {
        let mut m = BitMatrix::zeros(from.dim(), to.dim());
        for (row, e) in from.elems.iter().enumerate() {
            if let Some(&col) = to.pos.get(&(e.0, e.1, e.2 + 1)) {
                m.set(row, col, true);
            }
        }
        m
    }

    /// Homology dimension of the slice at `(m, a2)` over GF(2).
    pub fn homology_dim(&self, m: i32, a2: i32) -> usize {
        let here = self.slice(m, a2);
        if here.dim() == 0 {
            return 0;
        }
        let above = self.slice(m + 1, a2);
        let below = self.slice(m - 1, a2);
        let d_out = self.matrix_f2(&here, &below);
        let d_in = self.matrix_f2(&above, &here);
        here.dim() - d_out.rank() - d_in.rank()
    }

    /// Integral homology of the slice: free rank and torsion coefficients.
    pub fn homology_z(&self, m: i32, a2: i32) -> (usize, Vec<BigInt>) {
        let here = self.slice(m, a2);
        if here.dim() == 0 {
            return (0, Vec::new());
        }
        let above = self.slice(m + 1, a2);
        let below = self.slice(m - 1, a2);
        let to_big = |m: Vec<Vec<i64>>| -> Vec<Vec<BigInt>> {
            m.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect()
        };
        let (rank_out, _) = smith_invariant_factors(&to_big(self.matrix_z(&here, &below)));
        let (rank_in, torsion) = smith_invariant_factors(&to_big(self.matrix_z(&above, &here)));
        (here.dim() - rank_out - rank_in, torsion)
    }

    /// Full homology data of a slice with explicit representatives.
    pub fn slice_homology(&self, m: i32, a2: i32, reversed: bool) -> SliceHomology {
        let here = self.slice(m, a2);
        let above = self.slice(m + 1, a2);
        let below = self.slice(m - 1, a2);
        let d_out = self.matrix_f2(&here, &below);
        let d_in = self.matrix_f2(&above, &here);
        SliceHomology::build(here, &d_in, &d_out, reversed)
    }

    /// GF(2) homology dims over a window, in parallel.
    pub fn f2_table(&self, w: &Window) -> BTreeMap<(i32, i32), usize> {
        let slices = w.cells();
        let dims: Vec<((i32, i32), usize)> = slices
            .par_iter()
            .map(|&(m, a2)| ((m, a2), self.homology_dim(m, a2)))
            .collect();
        dims.into_iter().filter(|&(_, d)| d > 0).collect()
    }

    /// Integral homology over a window.
    pub fn z_table(&self, w: &Window) -> BTreeMap<(i32, i32), (usize, Vec<BigInt>)> {
        let slices = w.cells();
        let dims: Vec<((i32, i32), (usize, Vec<BigInt>))> = slices
            .par_iter()
            .map(|&(m, a2)| ((m, a2), self.homology_z(m, a2)))
            .collect();
        dims.into_iter()
            .filter(|(_, (r, t))| *r > 0 || !t.is_empty())
            .collect()
    }

    /// Rank of the induced action of the class-`k` variable on homology at
    /// each window cell.
    pub fn action_rank(&self, m: i32, a2: i32, action: Action) -> usize {
        let src = self.slice_homology(m, a2, false);
        if src.dim == 0 {
            return 0;
        }
        let (tm, ta2) = match action {
            Action::Var(_) => (m - 2, a2 - 2),
            Action::V => (m + 2, a2),
        };
        let tgt = self.slice_homology(tm, ta2, false);
        if tgt.dim == 0 {
            return 0;
        }
        let map = match action {
            Action::Var(k) => self.var_matrix(&src.basis, &tgt.basis, k),
            Action::V => self.v_matrix(&src.basis, &tgt.basis),
        };
        induced_rank(&src, &tgt, &map)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Action {
    Var(usize),
    V,
}

/// Enumerate weak compositions of `k` into `nc` parts.
fn compositions(k: u16, nc: usize, f: &mut impl FnMut([u16; MAX_CLASSES])) {
    let mut exps = [0u16; MAX_CLASSES];
    if nc == 0 {
        debug_assert_eq!(k, 0);
        f(exps);
        return;
    }
    fn rec(
        k: u16,
        part: usize,
        nc: usize,
        exps: &mut [u16; MAX_CLASSES],
        f: &mut impl FnMut([u16; MAX_CLASSES]),
    ) {
        if part == nc - 1 {
            exps[part] = k;
            f(*exps);
            exps[part] = 0;
            return;
        }
        for v in 0..=k {
            exps[part] = v;
            rec(k - v, part + 1, nc, exps, f);
        }
        exps[part] = 0;
    }
    rec(k, 0, nc, &mut exps, f);
}

/// Homology of one slice with cycle representatives and coordinates.
pub struct SliceHomology {
    pub basis: SliceBasis,
    pub dim: usize,
    pub reps: Vec<BitVec>,
    img: Eliminator,
    hcoords: Eliminator,
    d_out: BitMatrix,
}

impl SliceHomology {
    fn build(basis: SliceBasis, d_in: &BitMatrix, d_out: &BitMatrix, reversed: bool) -> Self {
        let dim_c = basis.dim();
        // image of d_in
        let mut img = Eliminator::new(dim_c);
        let in_rows: Vec<usize> = if reversed {
            (0..d_in.nrows()).rev().collect()
        } else {
            (0..d_in.nrows()).collect()
        };
        for r in in_rows {
            img.insert(d_in.rows[r].clone());
        }
        // kernel of d_out via augmented elimination over source rows
        let mut ker = Vec::new();
        let mut elim = Eliminator::with_aug(d_out.ncols, dim_c);
        let rows: Vec<usize> = if reversed {
            (0..dim_c).rev().collect()
        } else {
            (0..dim_c).collect()
        };
        for (step, r) in rows.iter().enumerate() {
            let mut aug = BitVec::zeros(dim_c);
            aug.set(*r, true);
            let _ = step;
            if let Some(mut combo) = elim.insert_with_aug(d_out.rows[*r].clone(), aug) {
                // dependent row: combo (including this row) is a kernel vector
                if !combo.get(*r) {
                    combo.set(*r, true);
                }
                ker.push(combo);
            }
        }
        // homology representatives: kernel vectors independent mod image
        let mut hcoords = Eliminator::with_aug(dim_c, dim_c);
        let mut reps = Vec::new();
        for v in ker {
            let reduced = img.reduce(&v);
            if reduced.is_zero() {
                continue;
            }
            let mut aug = BitVec::zeros(dim_c);
            aug.set(reps.len().min(dim_c - 1), true);
            if hcoords.insert_with_aug(reduced.clone(), aug).is_none() {
                reps.push(reduced);
            }
        }
        SliceHomology {
            basis,
            dim: reps.len(),
            reps,
            img,
            hcoords,
            d_out: d_out.clone(),
        }
    }

    /// Coordinates of a cycle in the homology basis; panics if `v` is not a
    /// cycle, returns None if it is not expressible (internal error).
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        let dv = self.d_out.transpose().apply(v);
        assert!(dv.is_zero(), "coords of a non-cycle");
        let reduced = self.img.reduce(v);
        if reduced.is_zero() {
            return Some(BitVec::zeros(self.basis.dim().max(1)));
        }
        self.hcoords.express(&reduced)
    }

    /// Is the cycle a boundary?
    pub fn is_boundary(&self, v: &BitVec) -> bool {
        self.img.reduce(v).is_zero()
    }
}

/// Rank of the map induced on homology by a chain-level slice map given as
/// rows per source basis element.
pub fn induced_rank(src: &SliceHomology, tgt: &SliceHomology, map: &BitMatrix) -> usize {
    let tmap = map.transpose();
    let mut elim = Eliminator::new(tgt.basis.dim().max(1));
    let mut rank = 0;
    for rep in &src.reps {
        let image = tmap.apply(rep);
        let coords = tgt
            .coords(&image)
            .expect("induced image not expressible in target homology");
        let reduced = tgt.img.reduce(&image);
        let _ = coords;
        if elim.insert(reduced) {
            rank += 1;
        }
    }
    rank
}

/// A bigraded computation window: `a2` doubled Alexander bounds, Maslov
/// bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Window {
    pub m_min: i32,
    pub m_max: i32,
    pub a2_min: i32,
    pub a2_max: i32,
}

impl Window {
    /// The spec default: Alexander from `A_min - n - 2` to `A_max` over the
    /// states, Maslov bounds induced (with v-headroom for enhanced
    /// complexes).
    pub fn default_for(g: &GridDiagram, enhanced: bool) -> Window {
        let states = all_perms(g.n);
        let grs: Vec<Bigrading> = states.iter().map(|x| g.grading(x)).collect();
        let a2_max = grs.iter().map(|b| b.alexander2).max().unwrap();
        let a2_min = grs.iter().map(|b| b.alexander2).min().unwrap() - 2 * (g.n as i32 + 2);
        let delta_min = grs.iter().map(|b| b.maslov - b.alexander2).min().unwrap();
        let delta_max = grs.iter().map(|b| b.maslov - b.alexander2).max().unwrap();
        let m_min = delta_min + a2_min;
        let v_headroom = if enhanced { 2 * (g.n as i32 + 2) } else { 0 };
        let m_max = delta_max + a2_max + v_headroom;
        Window {
            m_min,
            m_max,
            a2_min,
            a2_max,
        }
    }

    pub fn contains(&self, m: i32, a2: i32) -> bool {
        m >= self.m_min && m <= self.m_max && a2 >= self.a2_min && a2 <= self.a2_max
    }

    pub fn cells(&self) -> Vec<(i32, i32)> {
        let mut v = Vec::new();
        for a2 in self.a2_min..=self.a2_max {
            for m in self.m_min..=self.m_max {
                v.push((m, a2));
            }
        }
        v
    }
}

/// Divide a `W^w`-tensored dimension table back down: if `T = X (x) W^w`
/// with `W = F_(0,0) + F_(-1,-1)`, recover `X` on the cells of `win` whose
/// upward strip `(m+i, a2+2i)` is covered by the window before leaving it
/// through the Alexander ceiling.
pub fn deconvolve_w(
    t: &BTreeMap<(i32, i32), usize>,
    w: usize,
    win: &Window,
) -> Option<BTreeMap<(i32, i32), usize>> {
    if w == 0 {
        return Some(t.clone());
    }
    // X(m,a2) = sum_i (-1)^i C(w+i-1, i) T(m+i, a2+2i)
    let mut out = BTreeMap::new();
    let mut covered: std::collections::BTreeSet<(i32, i32)> = Default::default();
    for a2 in win.a2_min..=win.a2_max {
        'cells: for m in win.m_min..=win.m_max {
            let mut acc: i64 = 0;
            let mut coef: i64 = 1;
            let mut i: i32 = 0;
            loop {
                let cell = (m + i, a2 + 2 * i);
                if cell.1 > win.a2_max {
                    break; // beyond the Alexander ceiling: true zeros
                }
                if cell.0 > win.m_max {
                    continue 'cells; // strip not covered; skip this cell
                }
                acc += coef * t.get(&cell).copied().unwrap_or(0) as i64;
                i += 1;
                // next coefficient: (-1)^i C(w+i-1, i)
                coef = -coef * (w as i64 + i as i64 - 1) / i as i64;
            }
            if acc < 0 {
                return None;
            }
            covered.insert((m, a2));
            if acc > 0 {
                out.insert((m, a2), acc as usize);
            }
        }
    }
    // verify: the W-expansion reproduces t wherever all contributors are
    // covered cells
    let binom = |w: usize, i: usize| -> i64 {
        let mut v: i64 = 1;
        for k in 0..i {
            v = v * (w as i64 - k as i64) / (k as i64 + 1);
        }
        v
    };
    for &(m, a2) in &covered {
        let mut expect: usize = 0;
        let mut all_covered = true;
        for i in 0..=w as i32 {
            let cell = (m - i, a2 - 2 * i);
            if !covered.contains(&cell) {
                all_covered = false;
                break;
            }
            expect += binom(w, i as usize) as usize * out.get(&cell).copied().unwrap_or(0);
        }
        if all_covered && expect != t.get(&(m, a2)).copied().unwrap_or(0) {
            return None;
        }
    }
    Some(out)
}
