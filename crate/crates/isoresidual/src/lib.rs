//! Exact combinatorics of isoresidual fibers of genus-zero strata of
//! meromorphic 1-forms with a single zero.
//!
//! The crate enumerates the decorated plane trees classifying such fibers
//! over real residue configurations, counts fibers over generic and resonant
//! configurations with closed formulas, walks the chambers of the real
//! resonance arrangement with exact rational arithmetic, and computes the
//! monodromy of the isoresidual cover as explicit permutation groups.
//!
//! Entry points:
//! - [`stratum`]: signatures, residues, pole subsets, sign functions.
//! - [`tree`]: decorated trees, canonical keys, corners, surgery.
//! - [`fiber`]: fiber enumeration and the counting formulas.
//! - [`arrangement`]: chamber sampling, walls, the chamber graph.
//! - [`monodromy`]: meridian actions, wall crossings, group computation.
//! - [`perm`]: permutation algebra and small-degree group identification.
//! - [`verify`]: the end-to-end verification suite behind `isoresidual verify`.

pub mod arrangement;
pub mod error;
pub mod fiber;
pub mod monodromy;
pub mod perm;
pub mod report;
pub mod stratum;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use stratum::{PoleSubset, ResidueConfig, Sign, SignFunction, StratumSignature};
pub use tree::DecoratedTree;
