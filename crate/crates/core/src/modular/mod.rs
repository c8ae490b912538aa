//! Modular covariance, regularity and anti-ellipticity criteria.

pub mod audit;
pub mod covariance;
pub mod elliptic;
pub mod regularity;

pub use audit::{euler_theorem_audit, EulerAuditReport, ModularAction, RapidityPoincare, RepDataAction};
pub use covariance::{
    build_ds2_counterexample, covariance_counterexample, modular_covariance_test, Counterexample, CounterexampleChecks,
    CovariancePuzzle, CovarianceTestReport, CovarianceVerdict,
};
pub use elliptic::{anti_elliptic, anti_elliptic_report, is_elliptic, AntiEllipticReport, Ideal, IdealDecomposition, IdealKind};
pub use regularity::{
    regularity_cone_check, semidirect_regularity_check, RegularityQuery, RegularityReport, SemidirectReport,
    SemidirectSplit, SideReport,
};
