//! Solver hyperparameters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Invalid hyperparameter combinations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("epsilon_total = {0} must lie in (0, 1)")]
    EpsilonTotal(f64),
    #[error("eps_min = {0} must lie in (0, 1/3)")]
    EpsMin(f64),
    #[error("weight_w = {0} must lie in (0, 1)")]
    Weight(f64),
    #[error("tol_delta = {0} must be nonnegative")]
    TolDelta(f64),
    #[error("restarts must be at least 1")]
    Restarts,
    #[error("max_sweeps must be at least 1")]
    MaxSweeps,
    #[error("brent_xtol = {0} must be positive")]
    BrentXtol(f64),
    #[error("brent_max_eval = {0} must be at least 3")]
    BrentMaxEval(u32),
}

/// Everything the allocation game needs to run, in one snapshot.
///
/// The defaults reproduce the evaluation setting: a global budget of 0.1
/// split with floor 0.005, geometric-mean cost (w = 0.5), and an ε-Nash
/// stopping threshold of 1e-6.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameConfig {
    /// Global error budget distributed among the players.
    pub epsilon_total: f64,
    /// Minimum budget fraction any player may hold.
    pub eps_min: f64,
    /// Exponent balancing qubits against runtime in the shared cost.
    pub weight_w: f64,
    /// Number of random restarts.
    pub restarts: u32,
    /// Sweep cap per restart.
    pub max_sweeps: u32,
    /// ε-Nash stopping threshold on per-sweep cost change.
    pub tol_delta: f64,
    /// Base seed; restart k derives its own stream from it.
    pub rng_seed: u64,
    /// Measure the stopping threshold relative to the current cost
    /// instead of absolutely.
    pub relative_delta: bool,
    /// Position tolerance handed to the scalar minimizer.
    pub brent_xtol: f64,
    /// Objective-evaluation cap per best response.
    pub brent_max_eval: u32,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            epsilon_total: 0.1,
            eps_min: 0.005,
            weight_w: 0.5,
            restarts: 16,
            max_sweeps: 100,
            tol_delta: 1e-6,
            rng_seed: 0,
            relative_delta: false,
            brent_xtol: 1e-6,
            brent_max_eval: 100,
        }
    }
}

impl GameConfig {
    /// Checks every field range; call before handing the config to the
    /// solver.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon_total > 0.0 && self.epsilon_total < 1.0) {
            return Err(ConfigError::EpsilonTotal(self.epsilon_total));
        }
        if !(self.eps_min > 0.0 && self.eps_min < 1.0 / 3.0) {
            return Err(ConfigError::EpsMin(self.eps_min));
        }
        if !(self.weight_w > 0.0 && self.weight_w < 1.0) {
            return Err(ConfigError::Weight(self.weight_w));
        }
        if !(self.tol_delta >= 0.0) {
            return Err(ConfigError::TolDelta(self.tol_delta));
        }
        if self.restarts == 0 {
            return Err(ConfigError::Restarts);
        }
        if self.max_sweeps == 0 {
            return Err(ConfigError::MaxSweeps);
        }
        if !(self.brent_xtol > 0.0) {
            return Err(ConfigError::BrentXtol(self.brent_xtol));
        }
        if self.brent_max_eval < 3 {
            return Err(ConfigError::BrentMaxEval(self.brent_max_eval));
        }
        Ok(())
    }
}
