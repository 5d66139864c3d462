//! Spectra of the drifted Laplacian and the stability operator on generated
//! expanders, through 1-d Sturm-Liouville reductions and the ground-state
//! unitary transform, plus the exact flat-space oracle.

pub mod eigen;
mod hermite;
mod operator;
mod spectrum;

pub use eigen::{
    dense_from_tridiagonal, gershgorin_bounds, jacobi_eigenvalues, lowest_eigenvalues, sturm_count,
};
pub use hermite::{
    hermite_eigenfunction, hermite_eigenfunction_1d, hermite_eigenvalue, hermite_polynomial,
    multi_indices,
};
pub use operator::{
    ground_state_transform, BoundaryCondition, GridLevel, PotentialKind, ReductionConfig,
    WeightedOperator1D,
};
pub use spectrum::{
    bottom_spectrum, rayleigh_quotient, rayleigh_quotient_weighted, SpectrumResult,
};
