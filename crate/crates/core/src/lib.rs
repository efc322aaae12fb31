//! Exact arithmetic for Drinfeld modular forms over `F_q[θ]` and their
//! t-deformations.
//!
//! The crate computes truncated `u`-expansions (`g`, `h`, `Δ`, `E`, `d₂`,
//! `𝔼`, `f_{l,ν}`, `f_s`) with exact coefficients in `F_q[θ, t]`, verifies
//! τ-recurrences and the shadowed-partition approximation of `d₂`, and
//! checks the finite-field identities behind `G_{l,k} = (-1)^{l+1} G_{1,k}^l`
//! by exact polynomial comparison and brute-force enumeration.
//!
//! Nothing here depends on the Carlitz period: `u_c` is expanded from the
//! Carlitz module as `1/φ_c(1/u)`, and every identity checked is homogeneous
//! in the period.

pub mod algebra;
pub mod error;
pub mod forms;
pub mod identities;
pub mod serialize;
pub mod shadowed;
pub mod taurec;
pub mod useries;

pub use algebra::{APoly, Field, FieldSpec, Fq, ThetaTPoly};
pub use error::{Error, Result};
pub use useries::USeries;
