//! Eigenvalue branches as curves: scale a boundary-pair direction by
//! `s`, warm-start each branch along the grid and watch where it goes.
//! On top of the raw trajectories sit sign-change detection for the
//! overdamping transition and spectral-gap curves.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, RobinPair};
use crate::halfline::gap_from_branch_mus;
use crate::spectrum::{refine_checked, solve_mode, SolverOptions};

/// One sample of one eigenvalue branch along a sweep.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub s: f64,
    pub n: usize,
    pub lambda: Complex64,
    pub mu: Complex64,
}

/// Bundle of sweep outputs. Consecutive points of every reported branch
/// differ by less than `nu / 2` in `lambda`; a grid too coarse to keep
/// that promise is rejected rather than silently connected.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub direction: RobinPair,
    pub s_grid: Vec<f64>,
    /// `branches[n]` is branch `n` sampled over `s_grid`.
    pub branches: Vec<Vec<TrajectoryPoint>>,
    /// Per branch, the first scaling where `Im mu_n` changes sign,
    /// bisected down to a bracket of 1e-8; `None` when the sign never
    /// flips on the grid.
    pub crossings: Vec<Option<f64>>,
    /// `(s, gap)` samples where the branch set is deep enough to certify
    /// the gap; empty when none are (see `gap_curve`).
    pub gap_curve: Vec<(f64, f64)>,
}

/// Bisection bracket width for overdamping crossings.
const CROSSING_TOL: f64 = 1e-8;

/// Branch `n` of `s -> direction scaled by s`, sampled on `steps` evenly
/// spaced points from 0 to `s_max` inclusive. Each point's Newton seed is
/// the previous root; if a step moves the root by `nu / 2` or more the
/// segment is re-walked in halved sub-steps down to a floor before the
/// branch is declared lost.
pub fn trajectory(
    n: usize,
    direction: RobinPair,
    geom: Geometry,
    s_max: f64,
    steps: usize,
    opts: &SolverOptions,
) -> Result<Vec<TrajectoryPoint>> {
    opts.validate()?;
    check_direction(direction)?;
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "a sweep needs at least two grid points, got {steps}"
        )));
    }
    if !s_max.is_finite() || s_max <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "sweep endpoint must be positive and finite, got {s_max}"
        )));
    }
    let s_grid = uniform_grid(s_max, steps);
    sweep_branch(n, direction, geom, &s_grid, opts)
}

/// Scan a sign-mixed, net-absorbing direction for the scalings where
/// branches cross the real axis. The preconditions `a_l a_0 < 0` and
/// `a_l + a_0 > 0` select the regime where crossings are expected for
/// every branch once `s` grows; within `s_max` a branch may still show
/// none, which is reported as `None`, not an error.
///
/// The report's `gap_curve` is left empty: certifying a gap needs more
/// branches than a crossing scan, so it is a separate call (`gap_curve`).
pub fn overdamping_scan(
    direction: RobinPair,
    geom: Geometry,
    n_max: usize,
    s_max: f64,
    steps: usize,
    opts: &SolverOptions,
) -> Result<SweepReport> {
    opts.validate()?;
    check_direction(direction)?;
    if !(direction.a_l * direction.a_0 < 0.0 && direction.sum() > 0.0) {
        return Err(Error::InvalidInput(format!(
            "overdamping scan needs opposite-sign walls with net absorption, \
             got ({}, {})",
            direction.a_l, direction.a_0
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "a sweep needs at least two grid points, got {steps}"
        )));
    }
    if !s_max.is_finite() || s_max <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "sweep endpoint must be positive and finite, got {s_max}"
        )));
    }
    let s_grid = uniform_grid(s_max, steps);
    let branches = sweep_all(n_max, direction, geom, &s_grid, opts)?;
    let crossings = branches
        .iter()
        .map(|b| refine_crossing(b, direction, geom, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        direction,
        s_grid,
        branches,
        crossings,
        gap_curve: Vec::new(),
    })
}

/// Spectral gap along the sweep: `(s, gap(s))` for every grid point. The
/// branch set must be deep enough for the gap's tail criterion at every
/// `s`, otherwise the table-too-short error propagates.
pub fn gap_curve(
    direction: RobinPair,
    geom: Geometry,
    s_grid: &[f64],
    n_max: usize,
    opts: &SolverOptions,
) -> Result<Vec<(f64, f64)>> {
    opts.validate()?;
    check_direction(direction)?;
    check_grid(s_grid)?;
    let branches = sweep_all(n_max, direction, geom, s_grid, opts)?;
    s_grid
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mus: Vec<Complex64> = branches.iter().map(|b| b[i].mu).collect();
            let report = gap_from_branch_mus(&mus, direction.scaled(s), geom)?;
            Ok((s, report.gap))
        })
        .collect()
}

/// Everything a branch-portrait plot needs in one call: branches 0 through
/// `n_max` over the grid, crossings refined, and the gap sampled wherever
/// the branch set is deep enough to certify it. The reference portrait uses
/// the width-pi strip with `n_max = 30` (31 branches).
pub fn figure_data(
    direction: RobinPair,
    s_grid: &[f64],
    geom: Geometry,
    n_max: usize,
    opts: &SolverOptions,
) -> Result<SweepReport> {
    opts.validate()?;
    check_direction(direction)?;
    check_grid(s_grid)?;
    let branches = sweep_all(n_max, direction, geom, s_grid, opts)?;
    let crossings = branches
        .iter()
        .map(|b| refine_crossing(b, direction, geom, opts))
        .collect::<Result<Vec<_>>>()?;
    let gap_curve = s_grid
        .iter()
        .enumerate()
        .filter_map(|(i, &s)| {
            let mus: Vec<Complex64> = branches.iter().map(|b| b[i].mu).collect();
            gap_from_branch_mus(&mus, direction.scaled(s), geom)
                .ok()
                .map(|r| (s, r.gap))
        })
        .collect();
    Ok(SweepReport {
        direction,
        s_grid: s_grid.to_vec(),
        branches,
        crossings,
        gap_curve,
    })
}

fn check_direction(direction: RobinPair) -> Result<()> {
    if !direction.is_finite() {
        return Err(Error::InvalidInput(format!(
            "sweep direction ({}, {}) is not finite",
            direction.a_l, direction.a_0
        )));
    }
    Ok(())
}

fn check_grid(s_grid: &[f64]) -> Result<()> {
    if s_grid.is_empty() {
        return Err(Error::InvalidInput("empty sweep grid".into()));
    }
    if !s_grid[0].is_finite() || s_grid[0] < 0.0 {
        return Err(Error::InvalidInput(format!(
            "sweep grid must start at a nonnegative scaling, got {}",
            s_grid[0]
        )));
    }
    for w in s_grid.windows(2) {
        if !w[1].is_finite() || w[1] <= w[0] {
            return Err(Error::InvalidInput(format!(
                "sweep grid must increase strictly, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn uniform_grid(s_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| s_max * i as f64 / (steps - 1) as f64)
        .collect()
}

/// All branches `0..=n_max` in parallel over one grid; branch order is
/// preserved and the first failing branch aborts the sweep.
fn sweep_all(
    n_max: usize,
    direction: RobinPair,
    geom: Geometry,
    s_grid: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<Vec<TrajectoryPoint>>> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| sweep_branch(n, direction, geom, s_grid, opts))
        .collect()
}

fn sweep_branch(
    n: usize,
    direction: RobinPair,
    geom: Geometry,
    s_grid: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<TrajectoryPoint>> {
    check_grid(s_grid)?;
    let nu = geom.nu();
    // Balanced pairs cancel branch 0 out of the scaled characteristic
    // form, so continuation cannot see it; the closed-form branch from
    // the mode solver takes over point by point.
    if n == 0 && direction.sum() == 0.0 && !direction.is_zero() {
        return s_grid
            .iter()
            .map(|&s| {
                let mode = solve_mode(0, direction.scaled(s), geom, opts)?;
                Ok(TrajectoryPoint {
                    s,
                    n,
                    lambda: mode.lambda,
                    mu: mode.mu,
                })
            })
            .collect();
    }

    let floor = opts.min_continuation_step * s_grid.last().unwrap().max(1.0);
    let mut points = Vec::with_capacity(s_grid.len());
    let mut cur_s = 0.0;
    let mut cur_lam = Complex64::new(n as f64 * nu, 0.0);
    for &target in s_grid {
        let lam = if target == 0.0 {
            cur_lam
        } else if n == 0 && cur_s == 0.0 {
            // lambda = 0 is a root of the characteristic form for every
            // pair, so branch 0 cannot be warm-started from its Neumann
            // origin; the mode solver knows how to leave it.
            let mode = solve_mode(0, direction.scaled(target), geom, opts)?;
            cur_s = target;
            cur_lam = mode.lambda;
            cur_lam
        } else {
            walk_segment(n, direction, geom, opts, &mut cur_s, &mut cur_lam, target, floor)?
        };
        if let Some(prev) = points.last() {
            let prev: &TrajectoryPoint = prev;
            let jump = (lam - prev.lambda).norm();
            if jump >= nu / 2.0 {
                return Err(Error::BranchJump {
                    branch: n,
                    s_prev: prev.s,
                    s: target,
                    jump,
                });
            }
        }
        points.push(TrajectoryPoint {
            s: target,
            n,
            lambda: lam,
            mu: lam * lam,
        });
    }
    Ok(points)
}

/// March the root from `cur_s` to `target`, halving the sub-step whenever
/// Newton fails or the root moves too far to trust, down to `floor`.
#[allow(clippy::too_many_arguments)]
fn walk_segment(
    n: usize,
    direction: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
    cur_s: &mut f64,
    cur_lam: &mut Complex64,
    target: f64,
    floor: f64,
) -> Result<Complex64> {
    let nu = geom.nu();
    let mut step = target - *cur_s;
    while *cur_s < target {
        let trial = (*cur_s + step).min(target);
        let outcome = refine_checked(
            n,
            *cur_lam,
            Some(*cur_lam),
            direction.scaled(trial),
            geom,
            opts,
            trial,
        );
        match outcome {
            Ok(lam) if (lam - *cur_lam).norm() < nu / 2.0 => {
                *cur_s = trial;
                *cur_lam = lam;
                step = (step * 2.0).min(target - *cur_s).max(floor);
            }
            outcome => {
                step *= 0.5;
                if step < floor {
                    return Err(match outcome {
                        Ok(lam) => Error::BranchJump {
                            branch: n,
                            s_prev: *cur_s,
                            s: trial,
                            jump: (lam - *cur_lam).norm(),
                        },
                        Err(e) => e,
                    });
                }
            }
        }
    }
    Ok(*cur_lam)
}

/// First sign change of `Im mu` along a branch, refined by bisection on
/// `s` until the bracket is narrower than 1e-8. Grid points with exactly
/// zero imaginary part (the unscaled start) never form a bracket.
fn refine_crossing(
    branch: &[TrajectoryPoint],
    direction: RobinPair,
    geom: Geometry,
    opts: &SolverOptions,
) -> Result<Option<f64>> {
    let n = match branch.first() {
        Some(p) => p.n,
        None => return Ok(None),
    };
    for w in branch.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.mu.im * b.mu.im >= 0.0 {
            continue;
        }
        let mut lo = (a.s, a.lambda, a.mu.im);
        let mut hi = (b.s, b.lambda, b.mu.im);
        while hi.0 - lo.0 > CROSSING_TOL {
            let mid = 0.5 * (lo.0 + hi.0);
            let lam = refine_checked(
                n,
                lo.1,
                Some(lo.1),
                direction.scaled(mid),
                geom,
                opts,
                mid,
            )?;
            let im = (lam * lam).im;
            if im == 0.0 {
                return Ok(Some(mid));
            }
            if (im > 0.0) == (lo.2 > 0.0) {
                lo = (mid, lam, im);
            } else {
                hi = (mid, lam, im);
            }
        }
        return Ok(Some(0.5 * (lo.0 + hi.0)));
    }
    Ok(None)
}
