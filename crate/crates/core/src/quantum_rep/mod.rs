//! Polynomial-space representation of the quantized string's Lorentz
//! algebra.
//!
//! Operators act on complex combinations of monomials in `x_0..x_3` of total
//! degree at most `N`. Truncation spoils the canonical relations only on the
//! top degree, so every relation is checked on the degree `≤ N - 1` subspace.

mod algebra;
mod poly;
mod quat;

pub use algebra::{
    angular_momentum, antisymmetry_residual, build_canonical, dotted_commutator_residual,
    integrality_residual, jz_block_spectrum, jz_spectrum, lorentz_closure_residual,
    mixed_algebra_residual, orbital_tensor, quantum_check, tensor_closure_residual,
    tensor_difference, tensor_from_spinor, tensor_from_three_vector, three_vector_form,
    three_vector_residuals, CanonicalRep, HbarSign, OperatorSpinor, OperatorTensor, QuantumReport,
    SpinOperators, SpinorOperatorMatrix, ThreeVectorResiduals,
};
pub use poly::{PolyBasis, PolyOperator, SparseMatrix};
pub use quat::{QuatOperator, QuatUnit};

/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 6;
