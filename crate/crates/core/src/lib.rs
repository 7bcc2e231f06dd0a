// Index-based loops are the natural idiom for the dense transform
// matrices; iterator rewrites obscure the row/column symmetry.
#![allow(clippy::needless_range_loop)]

//! Homology of finite ternary groups and the knot invariants it
//! supports: region-coloring counts of braid closures, per-coloring
//! homology classes, and cocycle state sums.
//!
//! The pipeline: build a [`cube::TernaryCube`] directly or from an
//! even-relator presentation through [`coset::odd_even_split`], verify
//! it, take the quotient chain complex of [`chain`], compute homology
//! with the exact Smith normal form of [`snf`], then color braid
//! closures with [`coloring`] and evaluate [`cocycle`] state sums.

pub mod braid;
pub mod chain;
pub mod cocycle;
pub mod coloring;
pub mod coset;
pub mod cube;
pub mod error;
pub mod homology;
pub mod par;
pub mod presentation;
pub mod snf;

pub use braid::{knot_by_name, parse_braid, BraidWord, KNOT_TABLE};
pub use chain::{
    boundary, boundary_matrix, is_degenerate, nondegenerate_basis, verify_complex, BoundaryMatrix,
    BoundaryPart, Chain, DEFAULT_MAX_BASIS,
};
pub use cocycle::{
    coboundary_space, cocycle_space, state_sum, verify_cocycle, CocycleFunction, StateSum,
};
pub use coloring::{
    cycle_of_coloring, enumerate_colorings, invariant_report, sweep_coloring, InvariantReport,
    RegionColoring,
};
pub use coset::{coset_enumerate, odd_even_split, triangle_cube, FiniteBinaryGroup};
pub use cube::{Element, SkewTable, TernaryCube};
pub use error::{Error, Result};
pub use homology::{
    class_of_cycle, homology_group, homology_group_with_cap, ClassCoordinates, HomologyClassifier,
    HomologyGroup,
};
pub use num_bigint::BigInt;
pub use presentation::{triangle_presentation, GroupPresentation};
pub use snf::{smith_normal_form, SmithDecomposition, SmithOptions, SparseIntMatrix};
