//! Integer cohomology of the decalage cochain complex.

mod complex;
pub mod snf;

pub use complex::{
    build_complex, build_complex_over, coherence_classes, cohomology, CochainComplex, CoherenceClasses,
    CohomologyGroup,
};
pub use snf::{invariant_factors, smith_normal_form, SnfResult, SparseMatrix};
