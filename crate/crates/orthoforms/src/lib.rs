//! Exact computations with Jacobi forms of lattice index, their additive and
//! multiplicative lifts to orthogonal modular forms on `2U ⊕ L`, and the
//! generator tables of the resulting algebras.
//!
//! All arithmetic is exact. q-exponents are stored scaled by 24.

pub mod arrangements;
pub mod error;
pub mod jacobi;
pub mod lattice;
pub mod laurent;
pub mod lifts;
pub mod qseries;
pub mod rational;
pub mod tables;

pub use arrangements::{
    build_arrangement, looijenga_check, Arrangement, CheckScope, HeegnerDivisor, LooijengaCertificate, Verdict,
};
pub use error::{Error, Result};
pub use jacobi::{prec_for_qmax, theta_block, JacobiClass, JacobiExpansion, ThetaBlockSpec};
pub use lattice::{Component, CosetClass, DualVector, Family, Lattice, RootLatticeSpec, SplitSpec};
pub use laurent::{Mono, Poly};
pub use lifts::{borch, grit, psi_input, verify_theta_identity, FourierJacobiSeries, ThetaIdentityReport};
pub use qseries::QSeries;
pub use rational::Q;
pub use tables::{
    enumerate_families, generator_weights, jacobian_weight, BigradedAlgebra, FamilyEntry, FamilyTag, GeneratorTable,
};
