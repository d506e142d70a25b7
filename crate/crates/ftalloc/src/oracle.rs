//! The resource oracle: maps an allocation and a circuit workload to
//! physical qubits `Q` and runtime `R`, and scalarizes the pair into the
//! shared cost `C = Q^w * R^(1-w)`.
//!
//! Two oracle backends ship here: a synthetic surface-code surrogate
//! ([`synthetic::SyntheticOracle`]) and a line-protocol bridge to an
//! external estimator process ([`external::ExternalOracle`]).

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::GameConfig;
use crate::simplex::Allocation;

pub mod external;
pub mod synthetic;

/// Oracle failures.
///
/// The first three variants flag an infeasible query point rather than a
/// broken oracle; the solver converts them to `+inf` cost and retreats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// Required code distance exceeds the model cap; the logical budget
    /// at this point is unrealistically tight.
    #[error("distance overflow: per-operation target {target:e} needs distance beyond {max}")]
    DistanceOverflow { target: f64, max: u32 },
    /// Required distillation rounds exceed the model cap.
    #[error("distillation overflow: per-state target {target:e} needs more than {max} rounds")]
    DistillationOverflow { target: f64, max: u32 },
    /// An external bridge answered with its error form for this point.
    #[error("oracle reported: {0}")]
    Reported(String),
    /// A wire exchange produced something that is not a valid response.
    #[error("protocol error: {reason}; raw line: {raw:?}")]
    Protocol { reason: String, raw: String },
    /// The bridge process is gone or unresponsive.
    #[error("oracle unavailable: {0}")]
    Unavailable(String),
    /// A response carried numbers outside the estimate domain.
    #[error("invalid estimate: Q = {q}, R = {r} (need Q >= 1 and R > 0)")]
    InvalidEstimate { q: f64, r: f64 },
}

impl OracleError {
    /// True for errors that mark one query point as infeasible instead
    /// of signalling a broken oracle.
    pub fn is_infeasible_point(&self) -> bool {
        matches!(
            self,
            OracleError::DistanceOverflow { .. }
                | OracleError::DistillationOverflow { .. }
                | OracleError::Reported(_)
        )
    }
}

/// Abstract workload descriptor consumed by the surrogate model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitProfile {
    pub name: String,
    /// Logical qubit count.
    pub n_qubits: u64,
    /// Logical time-steps.
    pub depth: u64,
    /// Native T gates.
    pub t_count: u64,
    /// Arbitrary-angle rotations that need synthesis.
    pub rotation_count: u64,
    /// Physical error rate.
    #[serde(default = "default_p_phys")]
    pub p_phys: f64,
    /// Code threshold.
    #[serde(default = "default_p_threshold")]
    pub p_threshold: f64,
    /// Surface-code cycle duration in microseconds.
    #[serde(default = "default_cycle_time_us")]
    pub cycle_time_us: f64,
}

fn default_p_phys() -> f64 {
    1e-3
}

fn default_p_threshold() -> f64 {
    1e-2
}

fn default_cycle_time_us() -> f64 {
    1.0
}

/// Errors loading a circuit profile from disk.
#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("cannot read profile: {0}")]
    Io(#[from] io::Error),
    #[error("cannot parse profile: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid profile {name:?}: {reason}")]
    Invalid { name: String, reason: String },
}

impl CircuitProfile {
    /// Field-relation checks that the JSON schema cannot express.
    pub fn validate(&self) -> Result<(), ProfileError> {
        let fail = |reason: &str| {
            Err(ProfileError::Invalid {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        if self.name.is_empty() {
            return fail("name must be non-empty");
        }
        if self.n_qubits == 0 {
            return fail("n_qubits must be at least 1");
        }
        if self.depth == 0 {
            return fail("depth must be at least 1");
        }
        if !(self.p_phys > 0.0 && self.p_phys < 1.0) {
            return fail("p_phys must lie in (0, 1)");
        }
        if !(self.p_threshold > 0.0 && self.p_threshold < 1.0) {
            return fail("p_threshold must lie in (0, 1)");
        }
        if self.p_phys >= self.p_threshold {
            return fail("p_phys must be below p_threshold");
        }
        if !(self.cycle_time_us > 0.0) {
            return fail("cycle_time_us must be positive");
        }
        Ok(())
    }

    /// Loads and validates one profile file (a single JSON object with
    /// exactly the profile fields; unknown fields are rejected).
    pub fn from_file(path: &Path) -> Result<Self, ProfileError> {
        let text = fs::read_to_string(path)?;
        let profile: CircuitProfile = serde_json::from_str(&text)?;
        profile.validate()?;
        Ok(profile)
    }
}

/// An oracle answer: physical qubits and wall-clock runtime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResourceEstimate {
    /// Physical qubit count (integral for the synthetic model).
    pub physical_qubits: f64,
    /// Runtime in seconds.
    pub runtime_seconds: f64,
}

impl ResourceEstimate {
    pub fn new(physical_qubits: f64, runtime_seconds: f64) -> Result<Self, OracleError> {
        if !(physical_qubits >= 1.0) || !(runtime_seconds > 0.0) {
            return Err(OracleError::InvalidEstimate {
                q: physical_qubits,
                r: runtime_seconds,
            });
        }
        Ok(ResourceEstimate {
            physical_qubits,
            runtime_seconds,
        })
    }
}

/// Absolute error budgets per player, in probability units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetPartition {
    pub eps_logical: f64,
    pub eps_tstates: f64,
    pub eps_rotations: f64,
}

/// Splits the global budget according to the strategy profile.
pub fn partition(s: &Allocation, epsilon_total: f64) -> BudgetPartition {
    BudgetPartition {
        eps_logical: s.logical() * epsilon_total,
        eps_tstates: s.t_states() * epsilon_total,
        eps_rotations: s.rotations() * epsilon_total,
    }
}

/// The shared cost `C = Q^w * R^(1-w)`.
pub fn cost(est: &ResourceEstimate, w: f64) -> f64 {
    debug_assert!(w > 0.0 && w < 1.0, "weight out of range: {w}");
    est.physical_qubits.powf(w) * est.runtime_seconds.powf(1.0 - w)
}

/// Space-time volume `Q * R`, the improvement metric.
///
/// At `w = 0.5` this is the square of [`cost`], so the two rank any set
/// of estimates identically.
pub fn space_time_volume(est: &ResourceEstimate) -> f64 {
    est.physical_qubits * est.runtime_seconds
}

/// A resource estimator backend.
pub trait ResourceOracle {
    /// Estimates physical qubits and runtime for one allocation.
    fn estimate(
        &self,
        profile: &CircuitProfile,
        s: &Allocation,
        epsilon_total: f64,
    ) -> Result<ResourceEstimate, OracleError>;

    /// Whether concurrent calls are allowed.
    fn reentrant(&self) -> bool {
        false
    }

    /// Short human-readable backend descriptor for run manifests.
    fn describe(&self) -> String;
}

/// A scalar objective over allocations; what the equilibrium solver and
/// the verifier actually minimize.
///
/// Implementations return `+inf` for infeasible points and reserve `Err`
/// for failures that should abort the enclosing restart.
pub trait CostOracle {
    fn cost(&self, s: &Allocation) -> Result<f64, OracleError>;
}

/// Adapter turning a closure into a [`CostOracle`]; handy for synthetic
/// landscapes in tests and examples.
pub struct CostFn<F>(pub F);

impl<F: Fn(&Allocation) -> f64> CostOracle for CostFn<F> {
    fn cost(&self, s: &Allocation) -> Result<f64, OracleError> {
        Ok((self.0)(s))
    }
}

/// Binds a resource oracle to one circuit and one configuration, turning
/// it into the game's shared cost function.
pub struct Objective<'a, O: ResourceOracle + ?Sized> {
    oracle: &'a O,
    profile: &'a CircuitProfile,
    weight: f64,
    epsilon_total: f64,
}

impl<'a, O: ResourceOracle + ?Sized> Objective<'a, O> {
    pub fn new(oracle: &'a O, profile: &'a CircuitProfile, cfg: &GameConfig) -> Self {
        Objective {
            oracle,
            profile,
            weight: cfg.weight_w,
            epsilon_total: cfg.epsilon_total,
        }
    }

    /// Raw (Q, R) pair at one allocation; infeasible points stay errors
    /// here because there is no pair to report.
    pub fn estimate(&self, s: &Allocation) -> Result<ResourceEstimate, OracleError> {
        self.oracle.estimate(self.profile, s, self.epsilon_total)
    }
}

impl<O: ResourceOracle + ?Sized> CostOracle for Objective<'_, O> {
    fn cost(&self, s: &Allocation) -> Result<f64, OracleError> {
        match self.estimate(s) {
            Ok(est) => Ok(cost(&est, self.weight)),
            Err(e) if e.is_infeasible_point() => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_scales_components() {
        let u = Allocation::uniform();
        let p = partition(&u, 0.1);
        for v in [p.eps_logical, p.eps_tstates, p.eps_rotations] {
            assert!((v - 0.1 / 3.0).abs() <= 1e-15);
        }
        let sum = p.eps_logical + p.eps_tstates + p.eps_rotations;
        assert!((sum - 0.1).abs() <= 1e-12);

        let s = Allocation::new([0.5, 0.25, 0.25], 0.005).unwrap();
        let p = partition(&s, 0.1);
        assert_eq!(
            [p.eps_logical, p.eps_tstates, p.eps_rotations],
            [0.05, 0.025, 0.025]
        );
    }

    #[test]
    fn cost_examples() {
        let even = ResourceEstimate::new(100.0, 100.0).unwrap();
        assert!((cost(&even, 0.5) - 100.0).abs() <= 1e-9);
        let mixed = ResourceEstimate::new(4.0, 9.0).unwrap();
        assert!((cost(&mixed, 0.5) - 6.0).abs() <= 1e-9);
        assert_eq!(space_time_volume(&mixed), 36.0);
    }

    #[test]
    fn estimate_domain_is_enforced() {
        assert!(ResourceEstimate::new(0.5, 1.0).is_err());
        assert!(ResourceEstimate::new(10.0, 0.0).is_err());
        assert!(ResourceEstimate::new(10.0, -1.0).is_err());
        assert!(ResourceEstimate::new(1.0, 1e-9).is_ok());
    }

    #[test]
    fn profile_json_rejects_unknown_fields() {
        let good = r#"{"name":"x","n_qubits":4,"depth":10,"t_count":5,"rotation_count":0}"#;
        let p: CircuitProfile = serde_json::from_str(good).unwrap();
        assert_eq!(p.p_phys, 1e-3);
        assert_eq!(p.p_threshold, 1e-2);
        assert_eq!(p.cycle_time_us, 1.0);

        let typo = r#"{"name":"x","n_qubits":4,"depth":10,"t_count":5,"rotation_counts":0}"#;
        assert!(serde_json::from_str::<CircuitProfile>(typo).is_err());
    }

    #[test]
    fn profile_validation_catches_relation_errors() {
        let mut p: CircuitProfile = serde_json::from_str(
            r#"{"name":"x","n_qubits":4,"depth":10,"t_count":5,"rotation_count":0}"#,
        )
        .unwrap();
        p.p_phys = 0.02; // above threshold
        assert!(p.validate().is_err());
        p.p_phys = 1e-3;
        p.depth = 0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn infeasible_errors_are_classified() {
        assert!(OracleError::DistanceOverflow { target: 1e-40, max: 99 }.is_infeasible_point());
        assert!(OracleError::DistillationOverflow { target: 1e-40, max: 4 }.is_infeasible_point());
        assert!(OracleError::Reported("budget too tight".into()).is_infeasible_point());
        assert!(!OracleError::Unavailable("gone".into()).is_infeasible_point());
        assert!(!OracleError::Protocol {
            reason: "bad json".into(),
            raw: "{".into()
        }
        .is_infeasible_point());
    }

    #[test]
    fn cost_fn_wraps_closures() {
        let flat = CostFn(|_s: &Allocation| 7.0);
        assert_eq!(flat.cost(&Allocation::uniform()).unwrap(), 7.0);
    }
}
