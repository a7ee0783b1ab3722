//! Rate studies, self-convergence tables and the Besov membership check.

mod besov;
mod fit;
mod rate;
mod selfconv;

pub use besov::{besov_check, BesovProfile, BesovReport};
pub use fit::{fit_loglog, LogLogFit};
pub use rate::{
    errors_csv, rate_study, slopes_csv, summary_text, write_rate_study, ErrorRow, GuardConfig, RateStudyConfig,
    RateStudyResult, RunDiagnostics, SlopeRow, StudyKind, MIN_FIT_POINTS,
};
pub use selfconv::{
    self_convergence, LevelRow, Problem, Refinement, SelfConvergence, SelfConvergenceConfig, MIN_ORDER,
};
