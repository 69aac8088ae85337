//! Fixed-point Grover-Long inner loop.
//!
//! Given the target weight `lambda` of a stage (the squared overlap of the
//! initial state with the target set), the schedule fixes an iteration count
//! `g` and a matched phase `alpha` such that `g` applications of the iterate
//! `G(alpha) = -S(alpha, initial) S(alpha, target)` rotate the initial state
//! exactly onto the target with no overshoot, unlike the plain Grover iterate.
//! `S(alpha, X)` multiplies `e^{i alpha}` onto the component along |X>.
//!
//! The loop is implemented twice: on the full statevector (the production
//! path, with `S(alpha, initial)` realized through the modelled-state
//! rotation R(mu)) and as an exact 2x2 recurrence on the invariant subspace
//! ([`analytic_2d`]), which serves as an independent cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelledState;
use crate::oracle::StageOracle;
use crate::qsim::StateVector;

/// Estimated weights at or above this skip the stage outright (`g = 0`):
/// the target already holds essentially all of the state's mass.
pub const LAMBDA_SKIP_THRESHOLD: f64 = 0.999;

/// Float noise at exact schedule boundaries (e.g. lambda = 1/4) can leave
/// the arcsine argument a few ulps under 1; snapping inside this band makes
/// the matched phase land on its closed-form value.
const PHASE_ARG_SNAP: f64 = 1e-12;

/// Guard subtracted before the ceiling so that an iteration count sitting
/// exactly on an integer is not bumped up by rounding error.
const ITERATION_GUARD: f64 = 1e-9;

/// Iteration count and matched phase for one stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageSchedule {
    /// Target weight the schedule was derived from.
    pub lambda: f64,
    /// Complementary weight `1 - lambda`.
    pub lambda_bar: f64,
    /// Number of Grover iterations.
    pub g: u32,
    /// Phase applied by both reflections, in (0, pi].
    pub alpha: f64,
}

/// Derives the stage schedule from the target weight:
/// `g = ceil(pi / (4 asin(sqrt(lambda))) - 1/2)` and
/// `alpha = 2 asin(min(1, sin(pi / (4g + 2)) / sqrt(lambda)))`.
pub fn schedule_for(lambda: f64) -> Result<StageSchedule> {
    check_lambda(lambda)?;
    let lambda_bar = 1.0 - lambda;
    if lambda >= LAMBDA_SKIP_THRESHOLD {
        return Ok(StageSchedule {
            lambda,
            lambda_bar,
            g: 0,
            alpha: PI,
        });
    }
    let theta = lambda.sqrt().asin();
    let g = (PI / (4.0 * theta) - 0.5 - ITERATION_GUARD).ceil().max(0.0) as u32;
    Ok(StageSchedule {
        lambda,
        lambda_bar,
        g,
        alpha: matched_phase(lambda, g),
    })
}

fn matched_phase(lambda: f64, g: u32) -> f64 {
    let arg = (PI / (4.0 * f64::from(g) + 2.0)).sin() / lambda.sqrt();
    let arg = if arg >= 1.0 - PHASE_ARG_SNAP {
        1.0
    } else {
        arg
    };
    2.0 * arg.asin()
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::LambdaDomain { lambda })
    }
}

/// Exact evolution on the invariant 2D subspace spanned by the off-target
/// and on-target components. Starts at `(sqrt(1 - lambda), sqrt(lambda))`
/// and applies `g` iterates; returns the final `(off, on)` amplitude pair.
pub fn analytic_2d(lambda: f64, alpha: f64, g: u32) -> Result<(Complex64, Complex64)> {
    check_lambda(lambda)?;
    let lambda_bar = 1.0 - lambda;
    let phase = Complex64::from_polar(1.0, alpha);
    let one = Complex64::new(1.0, 0.0);
    // reflection about the initial state, in the 2D basis
    let s00 = one + (phase - one) * lambda_bar;
    let s01 = (phase - one) * (lambda * lambda_bar).sqrt();
    let s11 = one + (phase - one) * lambda;

    let mut off = Complex64::new(lambda_bar.sqrt(), 0.0);
    let mut on = Complex64::new(lambda.sqrt(), 0.0);
    for _ in 0..g {
        let marked = phase * on; // target reflection: diag(1, e^{i alpha})
        let new_off = -(s00 * off + s01 * marked);
        let new_on = -(s01 * off + s11 * marked);
        off = new_off;
        on = new_on;
    }
    Ok((off, on))
}

/// One Grover iterate on the statevector: oracle phase, then the reflection
/// about the modelled state (R, phase on |0...0>, R again; R is its own
/// inverse), then the iterate's global minus sign. Consumes one oracle
/// query. `alpha` must match the phase the oracle was built with.
pub fn grover_iterate(
    sv: &mut StateVector,
    oracle: &mut StageOracle<'_>,
    model: &ModelledState,
    alpha: f64,
) -> Result<()> {
    oracle.apply(sv)?;
    model.apply_rotation(sv)?;
    sv.apply_phase_on_zero(alpha)?;
    model.apply_rotation(sv)?;
    sv.negate();
    Ok(())
}

/// Runs one full stage: prepares |mu> from |0...0> and applies `schedule.g`
/// iterates. Consumes exactly `schedule.g` oracle queries.
pub fn run_stage(
    model_prev: &ModelledState,
    oracle: &mut StageOracle<'_>,
    schedule: &StageSchedule,
) -> Result<StateVector> {
    let mut sv = model_prev.prepare()?;
    for _ in 0..schedule.g {
        grover_iterate(&mut sv, oracle, model_prev, schedule.alpha)?;
    }
    Ok(sv)
}
