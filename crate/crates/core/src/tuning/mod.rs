//! Learning the pruning threshold and the attribute schedule from fully
//! known training matrices.

mod alpha;
mod schedule;

pub use alpha::{
    compute_q, evaluate_alpha, select_alpha, select_alpha_with, AccuracyCostPoint, AlphaCandidateSet,
};
pub use schedule::{
    baseline_schedule, learn_schedule, schedule_cost, schedule_cost_upper, schedule_cost_upper_at,
    BaselineVariant,
};
