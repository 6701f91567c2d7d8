//! Exact decomposition of resultants of polynomial systems equivariant under
//! a direct product of two symmetric groups, and of discriminants of
//! block-invariant homogeneous polynomials.
//!
//! The pipeline: [`polyring`] provides exact sparse polynomial arithmetic
//! over `Q[parameters]`; [`combinatorics`] enumerates partitions and the
//! multinomial weights; [`equivariant`] validates block-equivariant systems
//! and computes their divided differences and specializations; [`resultant`]
//! computes Macaulay and Sylvester resultants with fraction-free exact linear
//! algebra; [`decompose`] assembles the decomposition into small resultant
//! factors with explicit exponents; [`oracle`] certifies every identity
//! against direct computation at random rational specializations.

pub mod combinatorics;
pub mod decompose;
pub mod equivariant;
pub mod oracle;
pub mod polyring;
pub mod resultant;
