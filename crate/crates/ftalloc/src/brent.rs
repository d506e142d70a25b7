//! Derivative-free minimization of a univariate function on a closed
//! interval, combining golden-section steps with successive parabolic
//! interpolation.
//!
//! The objective only needs to be total: points the caller considers
//! infeasible should come back as `f64::INFINITY`, which the bracketing
//! logic treats as "worse than anything finite" and retreats from.

use thiserror::Error;

/// Golden ratio constant (3 - sqrt(5)) / 2.
const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Number of consecutive near-stalls of the bracket before parabolic
/// steps are suspended. Integer-valued oracles produce plateaus on which
/// the parabola degenerates; golden-section steps always shrink.
const STALL_LIMIT: u32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BrentError {
    #[error("invalid interval: need a < b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// Outcome of a bounded scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketResult {
    /// Argmin found; always inside the requested interval.
    pub x_star: f64,
    /// Objective value at `x_star`.
    pub f_star: f64,
    /// Objective evaluations spent.
    pub evaluations: u32,
    /// False when the evaluation cap ran out before the bracket closed.
    pub converged: bool,
}

struct Tally<F> {
    f: F,
    used: u32,
}

impl<F: FnMut(f64) -> f64> Tally<F> {
    fn call(&mut self, x: f64) -> f64 {
        self.used += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

/// Minimizes `f` over `[a, b]` to absolute position tolerance `xtol`.
///
/// Both endpoints are evaluated up front so the result is never worse
/// than either boundary, and the best of the final interior point and
/// the two endpoints is returned. Exhausting `max_eval` is not an error;
/// the best point seen so far comes back with `converged = false`.
pub fn brent_minimize<F>(
    f: F,
    a: f64,
    b: f64,
    xtol: f64,
    max_eval: u32,
) -> Result<BracketResult, BrentError>
where
    F: FnMut(f64) -> f64,
{
    if !(a < b) {
        return Err(BrentError::InvalidInterval { a, b });
    }
    if !(xtol > 0.0) {
        return Err(BrentError::InvalidTolerance(xtol));
    }

    let mut tally = Tally { f, used: 0 };
    let sqrt_eps = f64::EPSILON.sqrt();

    if max_eval == 0 {
        return Ok(BracketResult {
            x_star: a,
            f_star: f64::INFINITY,
            evaluations: 0,
            converged: false,
        });
    }
    let fa = tally.call(a);
    if max_eval < 2 {
        return Ok(BracketResult {
            x_star: a,
            f_star: fa,
            evaluations: tally.used,
            converged: false,
        });
    }
    let fb = tally.call(b);
    if max_eval < 3 {
        let (x_star, f_star) = if fb < fa { (b, fb) } else { (a, fa) };
        return Ok(BracketResult {
            x_star,
            f_star,
            evaluations: tally.used,
            converged: false,
        });
    }

    let (mut lo, mut hi) = (a, b);
    let mut x = lo + GOLDEN * (hi - lo);
    let mut w = x;
    let mut v = x;
    let mut fx = tally.call(x);
    let mut fw = fx;
    let mut fv = fx;

    // d is the most recent step, e the one before it.
    let mut d = 0.0f64;
    let mut e = 0.0f64;
    let mut stall = 0u32;
    let mut converged = false;

    loop {
        let m = 0.5 * (lo + hi);
        let tol1 = sqrt_eps * x.abs() + xtol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (hi - lo) {
            converged = true;
            break;
        }
        if tally.used >= max_eval {
            break;
        }

        let width_before = hi - lo;
        let mut golden = true;
        if stall < STALL_LIMIT && e.abs() > tol1 {
            // Parabola through (v, fv), (w, fw), (x, fx).
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            // Accept only if the step stays interior and shrinks faster
            // than the step before last.
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { hi - x } else { lo - x };
            d = GOLDEN * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = tally.call(u);

        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }

        if hi - lo > 0.9 * width_before {
            stall += 1;
        } else {
            stall = 0;
        }
    }

    // Endpoint safeguard: never report a point worse than a boundary.
    let mut x_star = x;
    let mut f_star = fx;
    if fa < f_star {
        x_star = a;
        f_star = fa;
    }
    if fb < f_star {
        x_star = b;
        f_star = fb;
    }

    Ok(BracketResult {
        x_star,
        f_star,
        evaluations: tally.used,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_vertex() {
        let r = brent_minimize(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-8, 200).unwrap();
        assert!(r.converged);
        assert!((r.x_star - 0.3).abs() <= 1e-7, "x_star = {}", r.x_star);
        assert!(r.f_star <= 1e-14);
    }

    #[test]
    fn monotone_function_returns_lower_endpoint() {
        let r = brent_minimize(|x| x, 0.005, 0.99, 1e-6, 200).unwrap();
        assert!((r.x_star - 0.005).abs() <= 1e-6);
        assert_eq!(r.f_star, 0.005, "endpoint evaluation must win exactly");
    }

    #[test]
    fn matches_dense_grid_on_shifted_sine() {
        // Independent oracle: exhaustive scan of one million points.
        let f = |x: f64| x.sin() + 0.1 * x;
        let n = 1_000_000usize;
        let (a, b) = (2.0, 6.0);
        let mut grid_x = a;
        let mut grid_f = f(a);
        for i in 1..=n {
            let x = a + (b - a) * (i as f64) / (n as f64);
            let v = f(x);
            if v < grid_f {
                grid_f = v;
                grid_x = x;
            }
        }
        let xtol = 1e-6;
        let r = brent_minimize(f, a, b, xtol, 500).unwrap();
        assert!(r.converged);
        assert!(
            (r.x_star - grid_x).abs() <= 2.0 * xtol,
            "brent {} vs grid {}",
            r.x_star,
            grid_x
        );
    }

    #[test]
    fn never_worse_than_endpoints() {
        let cases: Vec<Box<dyn FnMut(f64) -> f64>> = vec![
            Box::new(|x: f64| (x - 2.0).abs()),
            Box::new(|x: f64| -x),
            Box::new(|x: f64| (10.0 * x).sin()),
        ];
        for mut f in cases {
            let fa = f(0.0);
            let fb = f(1.0);
            let r = brent_minimize(&mut f, 0.0, 1.0, 1e-7, 300).unwrap();
            assert!(r.f_star <= fa && r.f_star <= fb);
            assert!((0.0..=1.0).contains(&r.x_star));
        }
    }

    #[test]
    fn infeasible_sentinel_regions_are_avoided() {
        // Left half of the interval is "infeasible".
        let f = |x: f64| {
            if x < 0.5 {
                f64::INFINITY
            } else {
                (x - 0.7) * (x - 0.7)
            }
        };
        let r = brent_minimize(f, 0.0, 1.0, 1e-7, 300).unwrap();
        assert!((r.x_star - 0.7).abs() <= 1e-5);
        assert!(r.f_star.is_finite());
    }

    #[test]
    fn exhausted_budget_reports_not_converged() {
        let r = brent_minimize(|x| (x - 0.5).powi(2), 0.0, 1.0, 1e-12, 5).unwrap();
        assert!(!r.converged);
        assert_eq!(r.evaluations, 5);
        assert!((0.0..=1.0).contains(&r.x_star));
    }

    #[test]
    fn rejects_bad_interval_and_tolerance() {
        assert!(matches!(
            brent_minimize(|x| x, 1.0, 1.0, 1e-6, 10),
            Err(BrentError::InvalidInterval { .. })
        ));
        assert!(matches!(
            brent_minimize(|x| x, 2.0, 1.0, 1e-6, 10),
            Err(BrentError::InvalidInterval { .. })
        ));
        assert!(matches!(
            brent_minimize(|x| x, 0.0, 1.0, 0.0, 10),
            Err(BrentError::InvalidTolerance(_))
        ));
    }

    /// Plain golden-section minimizer used as the evaluation-count
    /// yardstick.
    fn golden_section_evals(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64) -> u32 {
        let mut x1 = lo + GOLDEN * (hi - lo);
        let mut x2 = hi - GOLDEN * (hi - lo);
        let mut f1 = f(x1);
        let mut f2 = f(x2);
        let mut evals = 2u32;
        while hi - lo > xtol {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = lo + GOLDEN * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = hi - GOLDEN * (hi - lo);
                f2 = f(x2);
            }
            evals += 1;
        }
        evals
    }

    #[test]
    fn cheaper_than_golden_section_on_smooth_unimodal() {
        let xtol = 1e-6;
        let smooth: Vec<(fn(f64) -> f64, f64, f64)> = vec![
            (|x| (x - 0.37).powi(2), 0.0, 1.0),
            (|x| x.sin() + 0.1 * x, 2.0, 6.0),
            (|x| (x - 1.3).powi(4) + x, 0.0, 3.0),
            (|x| x.exp() - 2.0 * x, 0.0, 2.0),
        ];
        for (f, a, b) in smooth {
            let golden = golden_section_evals(f, a, b, xtol);
            let r = brent_minimize(f, a, b, xtol, 500).unwrap();
            assert!(
                r.evaluations <= golden,
                "brent used {} evals, golden {}",
                r.evaluations,
                golden
            );
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// Random convex quadratics over random subintervals of [0,1];
            /// the closed-form vertex clamped to the interval is the oracle.
            #[test]
            fn agrees_with_clamped_vertex(
                center in -0.5f64..1.5,
                curvature in 0.1f64..50.0,
                lo in 0.0f64..0.45,
                width in 0.1f64..0.55,
            ) {
                let hi = lo + width;
                let f = move |x: f64| curvature * (x - center) * (x - center);
                let xtol = 1e-6;
                let r = brent_minimize(f, lo, hi, xtol, 500).unwrap();
                let expect = center.clamp(lo, hi);
                prop_assert!(
                    (r.x_star - expect).abs() <= xtol,
                    "got {}, expected {}", r.x_star, expect
                );
            }
        }
    }
}
