//! Strategy profiles on the ε-interior of the 2-simplex.
//!
//! A profile assigns one budget fraction to each of the three players.
//! All constructors enforce feasibility: every fraction is at least the
//! configured floor `eps_min` and the fractions sum to one.

use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

/// Absolute tolerance on the simplex sum constraint.
///
/// Near double-precision round-off for three-term sums; anything looser
/// would let visibly broken profiles through, anything tighter rejects
/// honest rounding noise.
pub const SUM_TOL: f64 = 1e-12;

/// The three budget consumers, in fixed iteration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlayerId {
    /// Logical operations on error-corrected qubits.
    Logical,
    /// T-state distillation.
    TStates,
    /// Arbitrary-angle rotation synthesis.
    Rotations,
}

impl PlayerId {
    /// Fixed cyclic order used everywhere a sweep visits the players.
    pub const ALL: [PlayerId; 3] = [PlayerId::Logical, PlayerId::TStates, PlayerId::Rotations];

    /// Position of this player inside an allocation triple.
    pub fn index(self) -> usize {
        match self {
            PlayerId::Logical => 0,
            PlayerId::TStates => 1,
            PlayerId::Rotations => 2,
        }
    }

    /// The two opponents, in fixed (index) order.
    pub fn opponents(self) -> (PlayerId, PlayerId) {
        match self {
            PlayerId::Logical => (PlayerId::TStates, PlayerId::Rotations),
            PlayerId::TStates => (PlayerId::Logical, PlayerId::Rotations),
            PlayerId::Rotations => (PlayerId::Logical, PlayerId::TStates),
        }
    }

    /// Short label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            PlayerId::Logical => "logical",
            PlayerId::TStates => "t_states",
            PlayerId::Rotations => "rotations",
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Failures of simplex construction or deviation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    /// Raw profile has no mass to normalize (all-zero or non-finite).
    #[error("degenerate profile: input has no usable mass")]
    DegenerateProfile,
    /// The floor is too large for three players to satisfy it.
    #[error("infeasible floor: eps_min = {eps_min} must be below 1/3")]
    InfeasibleFloor { eps_min: f64 },
    /// A component sits below the configured floor.
    #[error("{player} component {value} is below the floor {eps_min}")]
    BelowFloor {
        player: PlayerId,
        value: f64,
        eps_min: f64,
    },
    /// A component exceeds the cap implied by the two opponents' floors.
    #[error("{player} component {value} exceeds the cap {cap}")]
    AboveCap {
        player: PlayerId,
        value: f64,
        cap: f64,
    },
    /// Components do not sum to one within [`SUM_TOL`].
    #[error("components sum to {sum}, expected 1 within {SUM_TOL}")]
    SumMismatch { sum: f64 },
    /// Requested deviation lies outside the admissible interval.
    #[error("deviation {x} outside [{lo}, {hi}]")]
    DeviationOutOfBounds { x: f64, lo: f64, hi: f64 },
    /// A deviation would push an opponent below the floor.
    #[error("opponent floor violated: {player} would receive {share} < {eps_min}")]
    OpponentFloorViolated {
        player: PlayerId,
        share: f64,
        eps_min: f64,
    },
}

/// A feasible strategy profile `(s_L, s_T, s_R)`.
///
/// Immutable once built; every constructor on this type either proves
/// feasibility or refuses to produce a value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Allocation {
    s: [f64; 3],
}

impl Allocation {
    /// Validates and wraps a raw triple.
    ///
    /// The floor check is exact (no tolerance): the resource oracle must
    /// never see a budget below `eps_min`.
    pub fn new(s: [f64; 3], eps_min: f64) -> Result<Self, SimplexError> {
        if !(eps_min > 0.0) || eps_min >= 1.0 / 3.0 {
            return Err(SimplexError::InfeasibleFloor { eps_min });
        }
        let cap = 1.0 - 2.0 * eps_min;
        for player in PlayerId::ALL {
            let v = s[player.index()];
            if !(v >= eps_min) {
                return Err(SimplexError::BelowFloor {
                    player,
                    value: v,
                    eps_min,
                });
            }
            if v > cap + SUM_TOL {
                return Err(SimplexError::AboveCap {
                    player,
                    value: v,
                    cap,
                });
            }
        }
        let sum = s[0] + s[1] + s[2];
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(SimplexError::SumMismatch { sum });
        }
        Ok(Allocation { s })
    }

    /// The uniform baseline `(1/3, 1/3, 1/3)`.
    pub fn uniform() -> Self {
        let third = 1.0 / 3.0;
        Allocation {
            s: [third, third, third],
        }
    }

    /// Wraps a triple that is feasible by construction.
    pub(crate) fn new_unchecked(s: [f64; 3]) -> Self {
        debug_assert!((s[0] + s[1] + s[2] - 1.0).abs() <= SUM_TOL, "sum drift: {s:?}");
        Allocation { s }
    }

    /// Budget fraction of one player.
    pub fn get(&self, player: PlayerId) -> f64 {
        self.s[player.index()]
    }

    /// The triple as an array in player order (L, T, R).
    pub fn components(&self) -> [f64; 3] {
        self.s
    }

    pub fn logical(&self) -> f64 {
        self.s[0]
    }

    pub fn t_states(&self) -> f64 {
        self.s[1]
    }

    pub fn rotations(&self) -> f64 {
        self.s[2]
    }

    /// True when every component clears the floor and the sum holds.
    pub fn is_feasible(&self, eps_min: f64) -> bool {
        self.s.iter().all(|v| *v >= eps_min)
            && (self.s[0] + self.s[1] + self.s[2] - 1.0).abs() <= SUM_TOL
    }

    /// Largest component-wise absolute difference to another profile.
    pub fn max_abs_diff(&self, other: &Allocation) -> f64 {
        self.s
            .iter()
            .zip(other.s.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s[0], self.s[1], self.s[2])
    }
}

/// Projects a raw nonnegative triple onto the ε-interior of the simplex.
///
/// Clips each component into `[eps_min, 1]`, divides by the sum, then
/// repairs: any component that fell below the floor after division is
/// pinned to exactly `eps_min` and the remaining mass is redistributed
/// over the unpinned components proportionally. With three players the
/// repair loop settles in at most three passes, because at most two
/// components can ever be pinned.
pub fn clip_renormalize(raw: [f64; 3], eps_min: f64) -> Result<Allocation, SimplexError> {
    if !(eps_min > 0.0) || eps_min >= 1.0 / 3.0 {
        return Err(SimplexError::InfeasibleFloor { eps_min });
    }
    if raw.iter().any(|v| !v.is_finite()) || raw.iter().all(|v| *v == 0.0) {
        return Err(SimplexError::DegenerateProfile);
    }

    // Fast path: already feasible. Returning the input bit-for-bit makes
    // the projection idempotent.
    let sum = raw[0] + raw[1] + raw[2];
    if raw.iter().all(|v| *v >= eps_min && *v <= 1.0) && (sum - 1.0).abs() <= SUM_TOL {
        return Ok(Allocation::new_unchecked(raw));
    }

    let mut x = raw.map(|v| v.clamp(eps_min, 1.0));
    let mut pinned = [false; 3];
    for _pass in 0..3 {
        let pinned_count = pinned.iter().filter(|p| **p).count() as f64;
        let free_mass = 1.0 - pinned_count * eps_min;
        let unpinned_sum: f64 = x
            .iter()
            .zip(pinned.iter())
            .filter(|(_, p)| !**p)
            .map(|(v, _)| *v)
            .sum();
        let scale = free_mass / unpinned_sum;
        let mut violated = false;
        for i in 0..3 {
            if pinned[i] {
                continue;
            }
            x[i] *= scale;
            if x[i] < eps_min {
                x[i] = eps_min;
                pinned[i] = true;
                violated = true;
            }
        }
        if !violated {
            break;
        }
    }
    Ok(Allocation::new_unchecked(x))
}

/// Unilateral deviation of one player to fraction `x`, preserving the
/// opponents' relative ratio `rho = s_j / (s_j + s_k)`.
///
/// Fails if `x` leaves `[eps_min, 1 - 2*eps_min]` or if either opponent's
/// rescaled share would fall below the floor; the caller is expected to
/// shrink its search interval in response.
pub fn deviate(
    s: &Allocation,
    player: PlayerId,
    x: f64,
    eps_min: f64,
) -> Result<Allocation, SimplexError> {
    let lo = eps_min;
    let hi = 1.0 - 2.0 * eps_min;
    if !(x >= lo && x <= hi) {
        return Err(SimplexError::DeviationOutOfBounds { x, lo, hi });
    }
    let (j, k) = player.opponents();
    let sj = s.get(j);
    let sk = s.get(k);
    let rho = sj / (sj + sk);
    let rest = 1.0 - x;
    let share_j = rho * rest;
    let share_k = (1.0 - rho) * rest;
    if share_j < eps_min {
        return Err(SimplexError::OpponentFloorViolated {
            player: j,
            share: share_j,
            eps_min,
        });
    }
    if share_k < eps_min {
        return Err(SimplexError::OpponentFloorViolated {
            player: k,
            share: share_k,
            eps_min,
        });
    }
    let mut out = [0.0; 3];
    out[player.index()] = x;
    out[j.index()] = share_j;
    out[k.index()] = share_k;
    Ok(Allocation::new_unchecked(out))
}

/// Draws one uniform sample from the simplex (Dirichlet(1,1,1)) and
/// projects it onto the ε-interior.
///
/// The draw normalizes three independent unit-rate exponentials obtained
/// by inverse CDF, which keeps the sampler branch-free and therefore
/// bit-reproducible for a fixed RNG stream.
pub fn sample_dirichlet_111<R: Rng + ?Sized>(
    rng: &mut R,
    eps_min: f64,
) -> Result<Allocation, SimplexError> {
    let mut draws = [0.0f64; 3];
    for v in &mut draws {
        let u: f64 = rng.gen();
        *v = -(1.0 - u).ln();
    }
    clip_renormalize(draws, eps_min)
}
