//! Exact computation of knot and link concordance invariants and certified
//! bounds on the stabilizing number sn and the topological 4-genus.

pub mod casson_gordon;
pub mod ccomplex_link;
pub mod exact_algebra;
pub mod linking_form;
pub mod obstructions;
pub mod seifert_knot;

#[cfg(test)]
mod testing;

pub use casson_gordon::{CgError, CgEvaluation, CgValue, LabelCharacter, SatelliteTree};
pub use ccomplex_link::{CComplexData, CComplexError, LinkSignature, SignVector};
pub use exact_algebra::{
    AlgebraError, CyclotomicScalar, HermitianForm, IntegerMatrix, Rational, RootOfUnity, SignatureResult,
};
pub use linking_form::{GroupElement, LinkingForm, LinkingFormError, Metabolizer, Subgroup};
pub use obstructions::{BoundReport, ObstructionError, Verdict};
pub use seifert_knot::{LaurentPoly, SeifertError, SeifertMatrix};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    CComplex(#[from] CComplexError),
    #[error(transparent)]
    LinkingForm(#[from] LinkingFormError),
    #[error(transparent)]
    CassonGordon(#[from] CgError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
}
