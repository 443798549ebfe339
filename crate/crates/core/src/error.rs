use alloc::string::String;

/// Errors raised by the algebraic and dynamical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),
    #[error("algebra is not nilpotent (lower central series stalls at dimension {stalled_at})")]
    NotNilpotent { stalled_at: usize },
    #[error("algebra is abelian; the quotient by the center is trivial")]
    AbelianInput,
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("subalgebras do not span the algebra (rank {rank} of {dim})")]
    NotSpanning { rank: usize, dim: usize },
    #[error("matrix is not an automorphism: basis pair ({i}, {j}) violates the bracket law by {residual:e}")]
    NotAutomorphism { i: usize, j: usize, residual: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("eigenvalue {re} + {im}i has modulus too close to 1 to classify")]
    ModulusAmbiguous { re: f64, im: f64 },
    #[error("matrix is not a derivation (residual {residual:e})")]
    NotDerivation { residual: f64 },
    #[error("matrix family is not closed under the commutator (residual {residual:e})")]
    NotClosed { residual: f64 },
    #[error("automorphism does not live on g5_4")]
    WrongAlgebra,
    #[error("automorphism fails the Aut(g5_4) block-shape check")]
    ShapeCheckFailed,
    #[error("nilpotency class {class} exceeds 2")]
    ClassTooHigh { class: usize },
    #[error("motion is not pseudohyperbolic")]
    NotPseudohyperbolic,
    #[error("eigenvalue 1 has algebraic multiplicity {algebraic} but geometric multiplicity {geometric}")]
    MultiplicityMismatch { algebraic: usize, geometric: usize },
    #[error("solver did not reach its residual target ({residual:e})")]
    NoConvergence { residual: f64 },
    #[error("point is outside the domain of the projection (residual {residual:e})")]
    NotInDomain { residual: f64 },
    #[error("pair is not transversal: {what} has rank {rank}, expected {expected}")]
    NotTransversal { what: &'static str, rank: usize, expected: usize },
    #[error("base point does not lie on the invariant line (residual {residual:e})")]
    BaseNotOnLine { residual: f64 },
    #[error("pair is not positive: {0}")]
    NotPositivePair(String),
    #[error("index {0} exceeds the iteration budget")]
    IndexOverflow(i64),
    #[error("the chosen matrix commutes with the hyperbolic generator")]
    CommutingChoice,
    #[error("exact arithmetic requested on an algebra without rational structure constants")]
    NotExact,
}

pub type Result<T> = core::result::Result<T, Error>;
