//! Exact computation of central extensions of finite-dimensional
//! nonassociative algebras: second cohomology for varieties given by
//! polynomial identities, central extensions, automorphism actions of the
//! null-filiform algebra μ₀ⁿ and orbit classification over finite fields.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod identity;
pub mod linalg;
pub mod nullfiliform;
pub mod orbits;
pub mod par;
pub mod reproduce;
pub mod scalar;
pub mod table1;

pub use algebra::Algebra;
pub use cohomology::{BilinearForm, CohomologySpace};
pub use error::{Error, Result};
pub use identity::{builtin_variety, IdentitySchema, VarietySpec};
pub use linalg::Subspace;
pub use nullfiliform::Automorphism;
pub use par::Exec;
pub use scalar::{FieldSpec, Scalar};
