//! Explicit matrix models of pairs `(g, h)`: exact complements, centralizers
//! and flat-splitting detection, commuting-pair search in `m`, and the
//! eigenvalue-sequence test for Condition (R).

mod algebra;
mod catalog;
mod matrix;
pub mod oracle;
pub mod poly;
mod spectrum;

use thiserror::Error;

pub use algebra::{
    cartan_intersection, center, centralizer, centralizer_in, commuting_pair_search, commuting_partner,
    flat_splitting_test, in_span, orth_complement, random_element, rationalize, search_in, span_dim,
    CommutingSearch, FlatWitness, SearchConfig, SearchStage,
};
pub use catalog::{
    build_model, build_model_named, catalog, coords_in, gram, lemma_pair_su3, quaternion, quaternionic, rotation,
    so_basis, so_root_plane, so_torus, sp_basis, sp_root_plane, sp_torus, su_basis, MatrixAlgebra, ModelName,
};
pub use matrix::{gq, gq_int, CMatrix, GaussRat};
pub use spectrum::{
    berger_h_envelope, charpoly, condition_r_report, default_t_samples, eigen_tolerance, eigenvalue_sequence,
    family_at, imaginary_charpoly, printed_family, seq_dependent, ConditionRReport, EigenSeq, Membership,
    RootInterval, SamplePair,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unsupported model name: {0}")]
    Unsupported(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("degenerate inner product on {0}")]
    Degenerate(String),
    #[error("{0} has no constructed subalgebra h")]
    NoSubalgebra(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is not skew: eigenvalues off the imaginary axis")]
    NotSkew,
}
