//! Exact proofs that real quadratic fields are 2-stage euclidean, by
//! covering the fundamental domain with hyperbolic regions, and continued
//! fractions computed from such coverings.

pub mod arith;
pub mod certificate;
pub mod cfrac;
pub mod covering;
pub mod error;
pub mod field;
pub mod geometry;
pub mod ideals;
pub mod survey;

pub use arith::{QuadraticReal, Rational};
pub use certificate::{
    ennola_floor, smoothness_report, verify_certificate, Certificate, SmoothnessReport, VerificationReport,
};
pub use cfrac::{
    cfrac, cfrac_chain, cfrac_chain_for, eval_cf, verify_chain, ContinuedFraction, CoveringIndex, DivisionChain,
};
pub use covering::{compute_qn, prove, Schedule};
pub use error::*;
pub use field::{Embedding, FieldElement, OmegaKind, QuadField};
pub use geometry::{fundamental_box, Point2, Rect, Region};
pub use ideals::{canonical_associate, class_number_is_one, ideals_up_to, splitting_type, IdealGen, SplittingType};
pub use survey::{run_survey, SurveyRow, SurveyStatus};
