use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, RobinPair};
use crate::spectrum::characteristic::{characteristic, CharEval, CharScale};

/// Tuning knobs shared by the Newton polish and the continuation driver.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Convergence threshold on the scaled characteristic residual.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// First continuation step in the homotopy parameter `s`.
    pub initial_continuation_step: f64,
    /// Step floor; falling below it aborts the continuation.
    pub min_continuation_step: f64,
    /// Reject iterates that leave their eigenvalue band or cross a line
    /// `Re lambda = k nu` while the combined absorption is nonzero.
    pub band_guard: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            newton_tol: 1e-12,
            max_newton_iters: 48,
            initial_continuation_step: 1.0 / 16.0,
            min_continuation_step: (2.0f64).powi(-20),
            band_guard: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.newton_tol > 0.0
            && self.newton_tol.is_finite()
            && self.max_newton_iters > 0
            && self.min_continuation_step > 0.0
            && self.min_continuation_step <= self.initial_continuation_step
            && self.initial_continuation_step <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("inconsistent solver options: {self:?}")))
        }
    }
}

const MAX_STEP_HALVINGS: usize = 16;

/// Damped Newton iteration on the characteristic function.
///
/// Steps that fail to reduce the residual are halved; convergence is
/// declared on the scale-independent residual so the quotient and raw
/// branches agree. Iterates that wander into a pole guard without having
/// converged are rejected.
pub fn newton_refine(
    seed: Complex64,
    robin: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
) -> Result<Complex64> {
    newton_refine_inner(seed, robin, geom, opts, false, 0, f64::NAN)
}

/// `deflate_origin` divides out the ever-present spurious root of the raw
/// characteristic at `lambda = 0`; the branch-0 continuation needs this
/// because its eigenvalue sits a distance `O(sqrt(s))` from that root.
pub(crate) fn newton_refine_inner(
    seed: Complex64,
    robin: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
    deflate_origin: bool,
    branch: usize,
    s: f64,
) -> Result<Complex64> {
    opts.validate()?;
    if !seed.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite Newton seed {seed}")));
    }
    let mut lam = seed;
    let mut ev = characteristic(lam, robin, geom);
    let mut iters = 0;
    while iters < opts.max_newton_iters {
        if ev.residual <= opts.newton_tol {
            return Ok(lam);
        }
        if ev.scale == CharScale::RawNearPole {
            return Err(Error::PoleProximity { branch, s, lambda: lam });
        }
        let step = newton_step(lam, &ev, deflate_origin);
        let Some(step) = step else {
            return Err(Error::NoConvergence {
                branch,
                s,
                residual: ev.residual,
                tol: opts.newton_tol,
                iters,
            });
        };

        // Halve until the residual actually decreases.
        let mut improved = None;
        let mut delta = step;
        for _ in 0..MAX_STEP_HALVINGS {
            let cand = lam + delta;
            let cand_ev = characteristic(cand, robin, geom);
            if cand_ev.residual < ev.residual {
                improved = Some((cand, cand_ev));
                break;
            }
            delta *= 0.5;
        }
        match improved {
            Some((cand, cand_ev)) => {
                lam = cand;
                ev = cand_ev;
            }
            None => {
                return Err(Error::NoConvergence {
                    branch,
                    s,
                    residual: ev.residual,
                    tol: opts.newton_tol,
                    iters,
                })
            }
        }
        iters += 1;
    }
    if ev.residual <= opts.newton_tol {
        Ok(lam)
    } else {
        Err(Error::NoConvergence {
            branch,
            s,
            residual: ev.residual,
            tol: opts.newton_tol,
            iters,
        })
    }
}

fn newton_step(lam: Complex64, ev: &CharEval, deflate_origin: bool) -> Option<Complex64> {
    let mut deriv = ev.derivative;
    if deflate_origin && lam.norm() > 0.0 {
        // Newton on value/lambda: step = -v / (v' - v/lambda).
        deriv -= ev.value / lam;
    }
    if !deriv.is_finite() || deriv.norm() == 0.0 {
        return None;
    }
    let step = -ev.value / deriv;
    if step.is_finite() {
        Some(step)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::characteristic::asymptotic_seed;

    fn geom_pi() -> Geometry {
        Geometry::new(std::f64::consts::PI).unwrap()
    }

    #[test]
    fn exact_root_is_returned_unchanged() {
        // Balanced pair: n nu is already a root, Newton must not move it.
        let g = geom_pi();
        let robin = RobinPair::new(0.7, -0.7);
        let opts = SolverOptions::default();
        for n in 1..=5 {
            let seed = Complex64::new(n as f64, 0.0);
            let lam = newton_refine(seed, robin, g, &opts).unwrap();
            assert_eq!(lam, seed);
        }
    }

    #[test]
    fn converges_from_asymptotic_seed() {
        let g = geom_pi();
        let robin = RobinPair::new(1.0, 1.0);
        let opts = SolverOptions::default();
        for n in 4..=40 {
            let lam = newton_refine(asymptotic_seed(n, robin, g), robin, g, &opts).unwrap();
            let ev = characteristic(lam, robin, g);
            assert!(ev.residual <= opts.newton_tol);
            // Stay attached to the right branch.
            assert!(
                (lam.re - n as f64).abs() < 0.5,
                "n = {n} drifted to {lam}"
            );
        }
    }

    #[test]
    fn agrees_with_external_root_reference() {
        // Roots computed with 50-digit arithmetic, frozen here.
        let g = geom_pi();
        let cases = [
            (
                RobinPair::new(1.0, 1.0),
                Complex64::new(1.1, -0.4),
                Complex64::new(1.268822759695297993102, -0.465115781080982839643),
            ),
            (
                RobinPair::new(1.0, 1.0),
                Complex64::new(2.05, -0.3),
                Complex64::new(2.060915807485697809992, -0.3247984196852794272361),
            ),
            (
                RobinPair::new(2.0, 0.5),
                Complex64::new(1.4, -0.4),
                Complex64::new(1.423270564618518488886, -0.3655176226699992902006),
            ),
            (
                RobinPair::new(1.0, -0.5),
                Complex64::new(1.1, -0.2),
                Complex64::new(1.119624198438686918208, -0.2038620823964596710085),
            ),
        ];
        let opts = SolverOptions::default();
        for (robin, seed, reference) in cases {
            let lam = newton_refine(seed, robin, g, &opts).unwrap();
            assert!(
                (lam - reference).norm() < 1e-12,
                "pair ({}, {}): {lam} vs {reference}",
                robin.a_l,
                robin.a_0
            );
        }
    }

    #[test]
    fn origin_deflation_avoids_the_spurious_root() {
        // Branch 0 of (2, 0.5): the plain iteration from a cautious seed can
        // fall into lambda = 0, the deflated one must not.
        let g = geom_pi();
        let robin = RobinPair::new(2.0, 0.5);
        let opts = SolverOptions::default();
        let seed = Complex64::new(0.35, -0.25);
        let lam = newton_refine_inner(seed, robin, g, &opts, true, 0, f64::NAN).unwrap();
        let reference = Complex64::new(0.6030796322100615880991, -0.3003811474618285041463);
        assert!((lam - reference).norm() < 1e-11, "got {lam}");
    }

    #[test]
    fn hopeless_seed_reports_no_convergence() {
        let g = geom_pi();
        let robin = RobinPair::new(1.0, 1.0);
        let opts = SolverOptions {
            max_newton_iters: 3,
            ..SolverOptions::default()
        };
        let r = newton_refine(Complex64::new(40.0, 30.0), robin, g, &opts);
        assert!(matches!(
            r,
            Err(Error::NoConvergence { .. }) | Err(Error::PoleProximity { .. })
        ));
    }
}
