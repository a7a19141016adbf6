//! Combinatorial grid homology engine.
//!
//! Computes grid homology GH-minus and GH-hat, the double-point enhanced
//! homology GHL over the two-element field and its sign-refined integral
//! version, derived invariants (tau and friends, rho, the induced
//! differential on homology), and machine-verifies the algebraic identities
//! the theory rests on: d^2 = 0, sign-assignment axioms, homotopy identities,
//! commutation/stabilization quasi-isomorphisms, and the skein long exact
//! sequence.

pub mod grid;
pub mod linalg;
pub mod perm;
pub mod rect;
pub mod reduced;
pub mod complexes;
pub mod signs;

pub use grid::{apply_move, Bigrading, GridDiagram, GridError, GridMove, GridState, MoveError};
pub use perm::Perm;
pub use rect::{rect_likes_between, rects_between, Rect, RectKind, RectLike};
