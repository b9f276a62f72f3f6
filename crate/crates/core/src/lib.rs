//! Computing with finitely generated varieties of universal algebras.
//!
//! The crate builds free algebras in `HSP(A)` for a finite algebra `A`,
//! congruences, quotients, coproducts and cokernel pairs, and decides
//! Mal'tsev-type properties of such varieties: existence of a Mal'tsev
//! term, the weakly Mal'tsev property and its regular-relation variant.
//! Positive answers come with witness terms; negative answers come with
//! separating homomorphism pairs that can be re-checked independently.

pub mod algebra;
pub mod closure;
pub mod congruence;
pub mod error;
pub mod hom;
pub mod maltsev;
pub mod relation;
pub mod term;
pub mod variety;

pub use algebra::FiniteAlgebra;
pub use error::{Error, Result};
pub use hom::Homomorphism;
pub use term::{Identity, Signature, Term};
pub use variety::{Caps, FreeAlgebra, VarietyPresentation};
