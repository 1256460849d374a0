//! Exact computations of connective K-theory groups of `B Z/p` and of
//! `B Z/p ∧ B Z/p`, together with the mod-2 Steenrod linear algebra and the
//! long-exact-sequence bookkeeping used for the orthogonal case.

pub mod error;
pub mod exactseq;
pub mod group;
pub mod homological;
pub mod kmodules;
pub mod map;
pub mod matrix;
pub mod scalar;
pub mod snf;
pub mod steenrod;
pub mod verify;

pub use error::{AlgebraError, AuditError, ExactSeqError, FixtureError};
pub use exactseq::{bo_smash_group, bott_audit, FixtureSet, LongExactSequence};
pub use group::{cokernel_group, groups_isomorphic, FgAbelianGroup, PresentedGroup};
pub use map::{kernel_of_map, AbelianGroupMap};
pub use matrix::IntegerMatrix;
pub use scalar::IntegerRing;
pub use snf::{smith_normal_form, SmithForm};
pub use steenrod::Space;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Integer matrix over [`Int`].
pub type IntMatrix = IntegerMatrix<Int>;
/// Presented group over [`Int`].
pub type IntPresentedGroup = PresentedGroup<Int>;
