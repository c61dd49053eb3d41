//! Exact cohomology of n-Leibniz and Filippov algebras given by structure
//! constants: deformation and central-extension complexes, their first
//! cohomology, and the dual (Levi-Civita contracted) analysis of simple
//! Filippov algebras.

pub mod algebra;
pub mod cochain;
pub mod cohomology;
pub mod dual;
pub mod error;
mod index;
pub mod linalg;
pub mod reproduce;
pub mod tensor;

pub use algebra::{
    build_central_extension, build_deformed, direct_sum, fi_residual, first_order_fi_defect, fo_action,
    fo_compose, levi_civita, simple_filippov, CentralExtension, DeformedAlgebra, FundamentalObject,
    NLeibnizAlgebra, SignatureVector,
};
pub use cochain::{cochain_basis, Cochain, CochainShape, SymmetryClass, Valued};
pub use cohomology::{
    coboundary_matrix, coboundary_preimage, cocycle_basis, delta_central, delta_deformation, h1, h1_two_prime,
    CohomologyReport, Problem, TwoPrimeH1,
};
pub use dual::{
    block_dimensions, central_trace_reduce, classify_traceless, dual_cocycle_check, dualize, exceptional_dual,
    semisimple_cocycle_symmetric_vanishes, symmetric_split, trace_identities, trace_reduce, undualize,
    CentralReduction, DualCochain, TraceData, TraceReduction, TracelessVerdict,
};
pub use error::{Error, Result};
pub use linalg::{ExactMatrix, FieldSpec, Scalar};
pub use reproduce::{reproduce, FieldPolicy, TheoremReport, Theorem};
pub use tensor::SparseTensor;
