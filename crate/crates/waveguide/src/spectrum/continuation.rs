//! Eigenvalue branches by homotopy in the boundary coefficients.
//!
//! The pair `(a_l, a_0)` is scaled by `s` from 0 to 1. At `s = 0` every
//! branch is known exactly (`lambda_n = n nu`), and each accepted step
//! warm-starts the next Newton polish. The step length halves on failure,
//! doubles after two consecutive successes and aborts at a hard floor.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, RobinPair};
use crate::spectrum::characteristic::characteristic;
use crate::spectrum::newton::{newton_refine_inner, SolverOptions};

/// One computed eigenvalue branch at a fixed boundary pair.
#[derive(Debug, Clone)]
pub struct TransverseMode {
    pub index: usize,
    /// Frequency root with `Re lambda >= 0`.
    pub lambda: Complex64,
    /// Eigenvalue `mu = lambda^2`.
    pub mu: Complex64,
    /// Scaled characteristic residual at `lambda`.
    pub residual: f64,
    /// Positive normalisation constant of the unit-norm eigenfunction.
    pub norm_coeff: f64,
    /// Bilinear self-pairing `\int_0^l phi_n(y)^2 dy`.
    pub pairing: Complex64,
}

/// Branches `0..=n_max` for one boundary pair, in index order.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    geom: Geometry,
    robin: RobinPair,
    modes: Vec<TransverseMode>,
}

impl SpectrumTable {
    pub fn geom(&self) -> Geometry {
        self.geom
    }

    pub fn robin(&self) -> RobinPair {
        self.robin
    }

    pub fn modes(&self) -> &[TransverseMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn mode(&self, n: usize) -> &TransverseMode {
        &self.modes[n]
    }

    /// Copy of the table keeping only branches `0..n`. Useful when a
    /// consumer needs a fixed truncation level below what was solved.
    pub fn truncated(&self, n: usize) -> Result<SpectrumTable> {
        if n == 0 || n > self.modes.len() {
            return Err(Error::InvalidInput(format!(
                "cannot truncate a table of {} modes to {n}",
                self.modes.len()
            )));
        }
        Ok(SpectrumTable {
            geom: self.geom,
            robin: self.robin,
            modes: self.modes[..n].to_vec(),
        })
    }
}

/// Solve one branch at the full pair.
pub fn solve_mode(
    n: usize,
    robin: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
) -> Result<TransverseMode> {
    opts.validate()?;
    if !robin.is_finite() {
        return Err(Error::InvalidInput(format!(
            "boundary pair ({}, {}) is not finite",
            robin.a_l, robin.a_0
        )));
    }
    let lambda = if robin.is_zero() {
        // Neumann walls: the branch values are exact multiples of nu and
        // need no iteration at all.
        Complex64::new(n as f64 * geom.nu(), 0.0)
    } else if n == 0 && robin.sum() == 0.0 {
        balanced_branch0(robin, geom)?
    } else {
        track_branch(n, robin, geom, opts)?
    };
    finish_mode(n, lambda, robin, geom)
}

/// Branches `0..=n_max` in parallel; index order is preserved and the
/// first failing branch aborts the table.
pub fn solve_spectrum(
    n_max: usize,
    robin: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
) -> Result<SpectrumTable> {
    opts.validate()?;
    let results: Vec<Result<TransverseMode>> = (0..=n_max)
        .into_par_iter()
        .map(|n| solve_mode(n, robin, geom, opts))
        .collect();
    let mut modes = Vec::with_capacity(n_max + 1);
    for r in results {
        modes.push(r?);
    }
    check_table(&modes)?;
    Ok(SpectrumTable { geom, robin, modes })
}

fn finish_mode(
    n: usize,
    lambda: Complex64,
    robin: RobinPair,
    geom: Geometry,
) -> Result<TransverseMode> {
    let residual = if robin.is_zero() {
        0.0
    } else {
        characteristic(lambda, robin, geom).residual
    };
    let form = basis::normalized_form(lambda, robin, geom)?;
    let pairing = basis::pairing_integral(&form, geom.width());
    Ok(TransverseMode {
        index: n,
        lambda,
        mu: lambda * lambda,
        residual,
        norm_coeff: form.norm_coeff,
        pairing,
    })
}

/// Branch 0 of an exactly balanced pair `(a, -a)`.
///
/// Both characteristic factors share the root `lambda = |a|`, so the scaled
/// form cancels it away and continuation cannot see it; the branch is known
/// in closed form instead. For `a_l > 0` the eigenfunction is the plain wave
/// `e^{i a y}`. For `a_l < 0` the wave travels the other way and its
/// frequency coincides with the pole `a_0`, which the coefficient-ratio
/// representation cannot normalize. Past `|a| >= nu` the branch has crossed
/// another one on its way from the Neumann origin, so its index is no
/// longer meaningful.
fn balanced_branch0(robin: RobinPair, geom: Geometry) -> Result<Complex64> {
    let a = robin.a_l;
    let lambda = Complex64::new(a.abs(), 0.0);
    if a < 0.0 {
        return Err(Error::RatioSingularity {
            lambda,
            a_0: robin.a_0,
        });
    }
    if a.abs() >= geom.nu() {
        return Err(Error::TableDegeneracy {
            i: 0,
            j: (a.abs() / geom.nu()).floor() as usize,
            detail: format!(
                "balanced pair ({}, {}) carries branch 0 across a branch crossing",
                robin.a_l, robin.a_0
            ),
        });
    }
    Ok(lambda)
}

fn check_table(modes: &[TransverseMode]) -> Result<()> {
    for i in 0..modes.len() {
        for j in (i + 1)..modes.len() {
            let scale = 1.0 + modes[i].mu.norm() + modes[j].mu.norm();
            if (modes[i].mu - modes[j].mu).norm() <= 1e-9 * scale {
                return Err(Error::TableDegeneracy {
                    i,
                    j,
                    detail: format!(
                        "eigenvalues collide: {} vs {}",
                        modes[i].mu, modes[j].mu
                    ),
                });
            }
        }
    }
    for w in modes.windows(2) {
        if w[1].lambda.re <= w[0].lambda.re {
            return Err(Error::TableDegeneracy {
                i: w[0].index,
                j: w[1].index,
                detail: format!(
                    "Re lambda not increasing: {} then {}",
                    w[0].lambda.re, w[1].lambda.re
                ),
            });
        }
    }
    Ok(())
}

/// Second-order small-`s` expansion of the branch-0 frequency:
/// `mu = -i S / l + S^2/3 - P` with `S = a_l + a_0`, `P = a_l a_0`.
/// The quadratic terms matter because the linear one vanishes on balanced
/// pairs, where the exact branch is `lambda_0 = s |a|`.
pub(crate) fn branch0_seed(pair: RobinPair, geom: Geometry) -> Complex64 {
    let s = pair.sum();
    let p = pair.a_l * pair.a_0;
    let mu = Complex64::new(s * s / 3.0 - p, -s / geom.width());
    mu.sqrt()
}

/// Warm Newton polish plus the band guard, shared by the continuation
/// driver and the sweep module.
pub(crate) fn refine_checked(
    n: usize,
    seed: Complex64,
    prev: Option<Complex64>,
    pair: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
    s: f64,
) -> Result<Complex64> {
    let lam = newton_refine_inner(seed, pair, geom, opts, n == 0, n, s)?;
    if opts.band_guard {
        band_check(n, lam, prev, pair, geom, s)?;
    }
    Ok(lam)
}

/// Band boxes and forbidden-line bookkeeping.
///
/// Absorbing pairs confine branch `n` to `(n nu, (n+1) nu)`; sign-mixed
/// pairs get the wider box `(max(0, (n-1) nu), (n+1) nu)`. While the
/// combined absorption is nonzero no accepted step may cross a line
/// `Re lambda = k nu`. A roundoff margin keeps points that sit on a line
/// at `s -> 0` from tripping the guard.
fn band_check(
    n: usize,
    lambda: Complex64,
    prev: Option<Complex64>,
    pair: RobinPair,
    geom: Geometry,
    s: f64,
) -> Result<()> {
    if pair.is_zero() {
        return Ok(());
    }
    let nu = geom.nu();
    let margin = 1e-9 * nu * (n as f64 + 1.0);
    let (lo, hi) = if pair.is_absorbing() {
        (n as f64 * nu, (n + 1) as f64 * nu)
    } else {
        (((n as f64 - 1.0) * nu).max(0.0), (n + 1) as f64 * nu)
    };
    let re = lambda.re;
    if !(re > lo - margin && re < hi + margin) {
        return Err(Error::BandViolation {
            branch: n,
            s,
            re_lambda: re,
        });
    }
    if pair.sum() != 0.0 {
        if let Some(prev) = prev {
            // Any line k nu strictly between the previous and the current
            // real part (with clearance beyond roundoff on both sides)
            // marks a branch mix-up.
            let a = prev.re.min(re);
            let b = prev.re.max(re);
            let mut k = (a / nu).ceil() as i64;
            while (k as f64) * nu < b {
                let line = k as f64 * nu;
                if line - a > margin && b - line > margin {
                    return Err(Error::BandViolation {
                        branch: n,
                        s,
                        re_lambda: re,
                    });
                }
                k += 1;
            }
        }
    }
    Ok(())
}

fn track_branch(
    n: usize,
    robin: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
) -> Result<Complex64> {
    let nu = geom.nu();
    let mut s_cur: f64;
    let mut lam_cur: Complex64;

    if n == 0 {
        // The origin is a degenerate start: jump to a small s_0 where the
        // quadratic expansion seeds Newton reliably.
        let mut s0 = (1e-2 / (robin.a_l.abs() + robin.a_0.abs() + 1.0)).min(1.0);
        loop {
            if s0 < opts.min_continuation_step {
                return Err(Error::ContinuationStall {
                    branch: 0,
                    s: 0.0,
                    floor: opts.min_continuation_step,
                });
            }
            let pair = robin.scaled(s0);
            match refine_checked(0, branch0_seed(pair, geom), None, pair, geom, opts, s0) {
                Ok(lam) => {
                    lam_cur = lam;
                    s_cur = s0;
                    break;
                }
                Err(_) => s0 *= 0.5,
            }
        }
    } else {
        s_cur = 0.0;
        lam_cur = Complex64::new(n as f64 * nu, 0.0);
    }

    let mut step = opts.initial_continuation_step;
    let mut streak = 0usize;
    let mut last_err: Option<Error> = None;
    while s_cur < 1.0 {
        if step < opts.min_continuation_step {
            return Err(match last_err {
                Some(e @ Error::BandViolation { .. }) => e,
                _ => Error::ContinuationStall {
                    branch: n,
                    s: s_cur,
                    floor: opts.min_continuation_step,
                },
            });
        }
        let s_next = (s_cur + step).min(1.0);
        let pair = robin.scaled(s_next);
        match refine_checked(n, lam_cur, Some(lam_cur), pair, geom, opts, s_next) {
            Ok(lam) => {
                lam_cur = lam;
                s_cur = s_next;
                streak += 1;
                if streak >= 2 {
                    step *= 2.0;
                    streak = 0;
                }
            }
            Err(e) => {
                last_err = Some(e);
                streak = 0;
                step *= 0.5;
            }
        }
    }
    Ok(lam_cur)
}
