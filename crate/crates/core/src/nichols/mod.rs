//! Graded Betti numbers of Nichols-algebra cohomology from the reflection
//! recurrences, the checks of those recurrences, and independent oracles:
//! Kostant's theorem, small-degree bar complexes, and a Verma module over the
//! small quantum group of `sl_2`.

mod betti;
mod kostant;
mod oracle;
mod verma;

pub use betti::{
    betti_relations_check, betti_solve, betti_solve_with, relation_question_check, BettiOptions, BettiSolution,
    BettiTable, QuestionReport,
};
pub use kostant::{kostant_oracle, KostantReport, OrbitElement, WeylOrbitDatum};
pub use oracle::{braiding_from_state, nichols_small_oracle, NicholsAlgebra, SmallOracle};
pub use verma::{verma_check, VermaReport};

use thiserror::Error;

use crate::groupoid::GroupoidError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NicholsError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("object {object} has no Kubota or Dirichlet reflection at index {index}")]
    Unclassifiable { object: usize, index: usize },
    #[error("h(j={j}, d={d:?}) on object {object} did not reach an anchor")]
    NotAnchored { object: usize, j: i64, d: Vec<i64> },
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("total degree {0} is too large for the brute-force oracle")]
    DegreeTooLarge(u32),
    #[error("bad parameters: {0}")]
    BadParameters(String),
}
