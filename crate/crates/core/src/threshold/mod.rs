//! Gap removal that keeps the unit threshold: `x + 1 < y ⇔ g(x) + 1 < g(y)`.

mod plan;
mod schedule;

pub use plan::{
    apply_plan, certify, plan_gap, Construction, Orientation, PieceTag, PlanPiece, ThresholdPlan,
    WindowGammas,
};
pub use schedule::{
    remove_epsilon, remove_strong, CellFamily, Identification, ScheduleStep, ScheduleTrace,
    StrongTrace,
};

use crate::grid::GridError;
use crate::plmap::PlMapError;
use crate::pointset::{Gap, PointSetError};
use crate::rational::Rational;
use crate::structure::{FailReason, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThresholdError {
    #[error("gap {0:?} is neither closed-open nor open-closed")]
    NotBad(Gap),
    #[error("gap {0:?} has length at least 1")]
    GapTooLong(Gap),
    #[error("structure check failed: {0:?}")]
    StructureViolated(FailReason),
    #[error("{certificate} certificate failed at ({x}, {y})")]
    CertificateFailed {
        certificate: String,
        x: Rational,
        y: Rational,
    },
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(Rational),
    #[error("bad gaps fill unit interval {0}")]
    BudgetDegenerate(i64),
    #[error(transparent)]
    Structure(StructureError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Map(#[from] PlMapError),
    #[error(transparent)]
    Set(#[from] PointSetError),
}

impl From<StructureError> for ThresholdError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::GapTooLong(g) => ThresholdError::GapTooLong(g),
            StructureError::NotBad(g) => ThresholdError::NotBad(g),
            other => ThresholdError::Structure(other),
        }
    }
}

#[cfg(test)]
mod tests;
