//! One function per subcommand. Each resolves its flags, runs the library,
//! and writes its files through [`OutputSet`] so every run ends with a
//! manifest. Nothing here computes anything numerical on its own; the
//! commands are plumbing around the library calls.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use waveguide::basis::{biorthogonality_residual, dual_family, gram_report};
use waveguide::evolution::{
    decay_fit, edge_mass_fraction, initial_decompose, gaussian_wave, mode_state, propagate,
    random_state, smoothing_functional, state_norm, EvolutionPlan, ModalState, WaveState,
};
use waveguide::halfline::{
    resolvent_bound_map, spectral_gap, GapAttaining, GridRegion, HalfLineSpectrum,
};
use waveguide::quadrature::YGrid;
use waveguide::spectrum::{solve_spectrum, SolverOptions, SpectrumTable};
use waveguide::sweeps::{figure_data, gap_curve, overdamping_scan};
use waveguide::{Error, Geometry, RobinPair};

use crate::gridfile;
use crate::output::{fmt_f64, Csv, OutputSet};
use crate::svg;
use crate::{
    CommonArgs, EvolveArgs, Failure, OverdampArgs, PseudospecArgs, RieszArgs, SmoothingArgs,
    SpectrumArgs, TrajectoriesArgs,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The single-pair commands have no sensible default coefficients, so the
/// three geometry flags are mandatory there.
fn require(value: Option<f64>, flag: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("missing required flag --{flag}")))
}

fn solver_options(common: &CommonArgs) -> SolverOptions {
    let mut opts = SolverOptions::default();
    if let Some(tol) = common.tol {
        opts.newton_tol = tol;
    }
    opts
}

/// Resolved pair geometry plus the solver options, shared by all commands.
struct Setup {
    geom: Geometry,
    robin: RobinPair,
    opts: SolverOptions,
}

impl Setup {
    /// Explicit coefficients required.
    fn strict(common: &CommonArgs) -> Result<Setup, Failure> {
        let l = require(common.l, "l")?;
        let a_l = require(common.al, "al")?;
        let a_0 = require(common.a0, "a0")?;
        Ok(Setup {
            geom: Geometry::new(l)?,
            robin: RobinPair::new(a_l, a_0),
            opts: solver_options(common),
        })
    }

    /// Sweep commands fall back to the reference ray on the width-pi strip.
    fn with_ray_defaults(common: &CommonArgs) -> Result<Setup, Failure> {
        Ok(Setup {
            geom: Geometry::new(common.l.unwrap_or(PI))?,
            robin: RobinPair::new(common.al.unwrap_or(1.0), common.a0.unwrap_or(-0.5)),
            opts: solver_options(common),
        })
    }

    fn record(&self, out: &mut OutputSet) {
        out.param("l", json!(self.geom.width()));
        out.param("al", json!(self.robin.a_l));
        out.param("a0", json!(self.robin.a_0));
        out.param("tol", json!(self.opts.newton_tol));
    }
}

fn c64(z: Complex64) -> [String; 2] {
    [fmt_f64(z.re), fmt_f64(z.im)]
}

// ---------------------------------------------------------------- spectrum

pub fn spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let setup = Setup::strict(&args.common)?;
    let n_max = args.common.nmax.unwrap_or(30);
    let mut out = OutputSet::new(&args.common.out_dir, "spectrum")?;
    setup.record(&mut out);
    out.param("nmax", json!(n_max));

    let table = solve_spectrum(n_max, setup.robin, setup.geom, &setup.opts)?;

    let mut csv = Csv::new("n,re_lambda,im_lambda,re_mu,im_mu,residual,pairing_abs");
    for m in table.modes() {
        let [lr, li] = c64(m.lambda);
        let [mr, mi] = c64(m.mu);
        csv.row(&[
            m.index.to_string(),
            lr,
            li,
            mr,
            mi,
            fmt_f64(m.residual),
            fmt_f64(m.pairing.norm()),
        ]);
    }
    out.write("spectrum.csv", &csv.into_bytes())?;

    out.write("gap.json", &json_bytes(&gap_value(&table)?)?)?;

    let gram = gram_report(&table, table.len())?;
    let duals = dual_family(&table)?;
    let gram_json = json!({
        "size": gram.size,
        "eig_min": gram.extreme_eigs.0,
        "eig_max": gram.extreme_eigs.1,
        "riesz_condition": gram.riesz_condition,
        "biorthogonality_residual": biorthogonality_residual(&duals),
    });
    out.write("gram.json", &json_bytes(&gram_json)?)?;
    out.finish(VERSION)
}

/// The gap needs the table to reach its asymptotic depth; a table too
/// shallow for that is not an error of the run, just an uncertified gap.
fn gap_value(table: &SpectrumTable) -> Result<Value, Failure> {
    let gap = HalfLineSpectrum::new(table.clone()).and_then(|spec| spectral_gap(&spec));
    Ok(match gap {
        Ok(report) => json!({
            "certified": true,
            "gap": report.gap,
            "positive": report.is_positive(),
            "attained_by": match report.attaining {
                GapAttaining::Mode(n) => format!("mode {n}"),
                GapAttaining::Tail => "tail".to_string(),
            },
        }),
        Err(Error::TableTooShort(reason)) => json!({
            "certified": false,
            "reason": format!("TableTooShort: {reason}"),
        }),
        Err(e) => return Err(e.into()),
    })
}

fn json_bytes(value: &Value) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Failure::Io(format!("json serialization failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

// ------------------------------------------------------------ trajectories

pub fn trajectories(args: TrajectoriesArgs) -> Result<(), Failure> {
    let setup = Setup::with_ray_defaults(&args.common)?;
    let n_max = args.common.nmax.unwrap_or(30);
    if !(args.smax > 0.0 && args.smax.is_finite()) {
        return Err(Failure::Usage(format!(
            "--smax must be positive and finite, got {}",
            args.smax
        )));
    }
    if args.steps < 2 {
        return Err(Failure::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    let mut out = OutputSet::new(&args.common.out_dir, "trajectories")?;
    setup.record(&mut out);
    out.param("nmax", json!(n_max));
    out.param("smax", json!(args.smax));
    out.param("steps", json!(args.steps));

    let s_grid: Vec<f64> = (0..args.steps)
        .map(|i| args.smax * i as f64 / (args.steps - 1) as f64)
        .collect();
    let report = figure_data(setup.robin, &s_grid, setup.geom, n_max, &setup.opts)?;

    let mut csv = Csv::new("s,n,re_lambda,im_lambda");
    for branch in &report.branches {
        for p in branch {
            let [lr, li] = c64(p.lambda);
            csv.row(&[fmt_f64(p.s), p.n.to_string(), lr, li]);
        }
    }
    out.write("trajectories.csv", &csv.into_bytes())?;

    let curves: Vec<Vec<(f64, f64)>> = report
        .branches
        .iter()
        .map(|b| b.iter().map(|p| (p.lambda.re, p.lambda.im)).collect())
        .collect();
    let plot = svg::branch_portrait(&curves, "Re lambda", "Im lambda");
    out.write("trajectories.svg", plot.as_bytes())?;
    out.finish(VERSION)
}

// ------------------------------------------------------------------ evolve

/// Initial-data catalog shared by `evolve` and `smoothing`.
enum DataSpec {
    Gaussian,
    Random,
    Mode(usize),
    File(std::path::PathBuf),
}

fn parse_data(spec: &str) -> Result<DataSpec, Failure> {
    if spec == "gaussian" {
        return Ok(DataSpec::Gaussian);
    }
    if spec == "random" {
        return Ok(DataSpec::Random);
    }
    if let Some(n) = spec.strip_prefix("mode:") {
        let n = n.parse().map_err(|_| {
            Failure::Usage(format!("mode index in --data {spec:?} is not an integer"))
        })?;
        return Ok(DataSpec::Mode(n));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return Ok(DataSpec::File(path.into()));
    }
    Err(Failure::Usage(format!(
        "--data must be gaussian, random, mode:N or file:PATH, got {spec:?}"
    )))
}

/// Build the evolution plan and initial state for one run. A grid file
/// overrides the box and transverse grids (the file's nodes are the grids);
/// the synthetic catalog uses the flag-level box and a Gauss-Legendre rule.
fn plan_and_state(
    setup: &Setup,
    n_max: usize,
    data: &DataSpec,
    seed: u64,
    xbox: f64,
    nx: usize,
    ynodes: usize,
) -> Result<(EvolutionPlan, ModalState), Failure> {
    let n_modes = n_max + 1;
    Ok(match data {
        DataSpec::File(path) => {
            let grid = gridfile::read_grid(path)?;
            let l = setup.geom.width();
            if (grid.width() - l).abs() > 1e-9 * l.max(1.0) {
                return Err(Failure::Usage(format!(
                    "grid file spans [0, {}] transversally but --l is {l}",
                    grid.width()
                )));
            }
            let y_grid = YGrid::trapezoid(l, grid.y.len())?;
            let table = solve_spectrum(n_max, setup.robin, setup.geom, &setup.opts)?;
            let plan = EvolutionPlan::new(&table, n_modes, grid.x_box(), grid.x.len(), y_grid)?;
            let wave = WaveState { t: 0.0, values: grid.values };
            let state = initial_decompose(&plan, &wave)?;
            (plan, state)
        }
        _ => {
            let y_grid = YGrid::gauss_legendre(setup.geom.width(), ynodes)?;
            let table = solve_spectrum(n_max, setup.robin, setup.geom, &setup.opts)?;
            let plan = EvolutionPlan::new(&table, n_modes, xbox, nx, y_grid)?;
            let state = match data {
                DataSpec::Gaussian => {
                    // 0.11 of the width keeps the packet clear of the walls:
                    // a wall-touching Gaussian violates the impedance
                    // conditions and its modal tail (~1/n^2) cannot meet the
                    // projection certificate at any reasonable depth.
                    let wave = gaussian_wave(&plan, 2.0, 0.11 * setup.geom.width())?;
                    initial_decompose(&plan, &wave)?
                }
                DataSpec::Random => random_state(&plan, n_modes, seed)?,
                DataSpec::Mode(n) => {
                    let envelope: Vec<Complex64> = plan
                        .x_nodes()
                        .iter()
                        .map(|&x| Complex64::new((-x * x / 8.0).exp(), 0.0))
                        .collect();
                    mode_state(&plan, *n, &envelope)?
                }
                DataSpec::File(_) => unreachable!(),
            };
            (plan, state)
        }
    })
}

pub fn evolve(args: EvolveArgs) -> Result<(), Failure> {
    let setup = Setup::strict(&args.common)?;
    // 16 modes: deep enough for the default Gaussian packet to pass the
    // projection certificate with a ~20x margin.
    let n_max = args.common.nmax.unwrap_or(15);
    let data = parse_data(&args.data)?;
    if !(args.tmax > 0.0 && args.tmax.is_finite()) {
        return Err(Failure::Usage(format!(
            "--tmax must be positive and finite, got {}",
            args.tmax
        )));
    }
    if args.samples < 2 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 2, got {}",
            args.samples
        )));
    }
    let mut out = OutputSet::new(&args.common.out_dir, "evolve")?;
    setup.record(&mut out);
    out.param("nmax", json!(n_max));
    out.param("tmax", json!(args.tmax));
    out.param("samples", json!(args.samples));
    out.param("data", json!(args.data));
    out.param("seed", json!(args.common.seed));
    out.param("xbox", json!(args.xbox));
    out.param("nx", json!(args.nx));
    out.param("ynodes", json!(args.ynodes));
    if let Some(delta) = args.delta {
        out.param("delta", json!(delta));
    }

    let (plan, u0) =
        plan_and_state(&setup, n_max, &data, args.common.seed, args.xbox, args.nx, args.ynodes)?;

    // The decay bound compares against the gap of the whole spectrum, which
    // needs a table deep in the asymptotic regime, deeper than the handful
    // of evolved modes.
    let gap_table = solve_spectrum(n_max.max(32), setup.robin, setup.geom, &setup.opts)?;
    let gap = spectral_gap(&HalfLineSpectrum::new(gap_table)?)?;
    let riesz_c = plan.gram().riesz_condition;

    let norm0 = state_norm(&plan, &u0)?;
    let mut times = Vec::with_capacity(args.samples);
    let mut norms = Vec::with_capacity(args.samples);
    let mut csv = Csv::new("t,norm,bound");
    for i in 0..args.samples {
        let t = args.tmax * i as f64 / (args.samples - 1) as f64;
        let norm = state_norm(&plan, &propagate(&plan, &u0, t)?)?;
        let bound = riesz_c * (-gap.gap * t).exp() * norm0;
        csv.row(&[fmt_f64(t), fmt_f64(norm), fmt_f64(bound)]);
        times.push(t);
        norms.push(norm);
    }
    out.write("norms.csv", &csv.into_bytes())?;

    let fit = decay_fit(&times, &norms, (args.tmax / 2.0, args.tmax))?;
    let fit_json = json!({
        "rate": fit.rate,
        "intercept": fit.intercept,
        "window": [fit.window.0, fit.window.1],
        "residual": fit.residual,
        "gap": gap.gap,
        "riesz_condition": riesz_c,
        "norm0": norm0,
    });
    out.write("fit.json", &json_bytes(&fit_json)?)?;

    if let Some(delta) = args.delta {
        let report = smoothing_functional(&plan, &u0, delta, args.tmax, args.samples.max(3))?;
        let smoothing_json = json!({
            "delta": report.delta,
            "horizon": report.horizon,
            "q": report.q,
            "late_increment": report.late_increment,
            "q_over_norm_sq": report.q / (norm0 * norm0),
        });
        out.write("smoothing.json", &json_bytes(&smoothing_json)?)?;
    }

    // A periodic box only stands in for the real line while the wave stays
    // clear of its edges; warn when the final state no longer does.
    let edge = edge_mass_fraction(&plan, &propagate(&plan, &u0, args.tmax)?)?;
    if edge > 1e-6 {
        eprintln!(
            "warning: {:.2e} of the final mass sits near the box edge; \
             enlarge --xbox to trust late-time norms",
            edge
        );
    }
    out.finish(VERSION)
}

// -------------------------------------------------------------- pseudospec

pub fn pseudospec(args: PseudospecArgs) -> Result<(), Failure> {
    let setup = Setup::strict(&args.common)?;
    let n_max = args.common.nmax.unwrap_or(24);
    let mut out = OutputSet::new(&args.common.out_dir, "pseudospec")?;
    setup.record(&mut out);
    out.param("nmax", json!(n_max));
    out.param("re_min", json!(args.re_min));
    out.param("re_max", json!(args.re_max));
    out.param("im_min", json!(args.im_min));
    out.param("im_max", json!(args.im_max));
    out.param("nre", json!(args.nre));
    out.param("nim", json!(args.nim));

    let table = solve_spectrum(n_max, setup.robin, setup.geom, &setup.opts)?;
    let riesz_c = gram_report(&table, table.len())?.riesz_condition;
    let spec = HalfLineSpectrum::new(table)?;
    let region = GridRegion::new(
        (args.re_min, args.re_max),
        (args.im_min, args.im_max),
        (args.nre, args.nim),
    )?;
    let map = resolvent_bound_map(&region, &spec, riesz_c)?;

    let res = region.re_points();
    let ims = region.im_points();
    let mut csv = Csv::new("re,im,bound");
    for (iy, &im) in ims.iter().enumerate() {
        for (ix, &re) in res.iter().enumerate() {
            csv.row(&[fmt_f64(re), fmt_f64(im), fmt_f64(map[iy * res.len() + ix])]);
        }
    }
    out.write("resolvent.csv", &csv.into_bytes())?;

    let plot = svg::heat_map(&map, &res, &ims, "Re z", "Im z");
    out.write("resolvent.svg", plot.as_bytes())?;
    out.finish(VERSION)
}

// ---------------------------------------------------------------- overdamp

pub fn overdamp(args: OverdampArgs) -> Result<(), Failure> {
    let setup = Setup::with_ray_defaults(&args.common)?;
    let n_max = args.common.nmax.unwrap_or(3);
    let mut out = OutputSet::new(&args.common.out_dir, "overdamp")?;
    setup.record(&mut out);
    out.param("nmax", json!(n_max));
    out.param("smax", json!(args.smax));
    out.param("steps", json!(args.steps));
    out.param("gap_nmax", json!(args.gap_nmax));

    let report = overdamping_scan(setup.robin, setup.geom, n_max, args.smax, args.steps, &setup.opts)?;
    let crossings: Vec<Value> = report
        .crossings
        .iter()
        .enumerate()
        .map(|(n, s)| json!({ "n": n, "s_star": s }))
        .collect();
    let crossings_json = json!({
        "l": setup.geom.width(),
        "al": setup.robin.a_l,
        "a0": setup.robin.a_0,
        "smax": args.smax,
        "crossings": crossings,
    });
    out.write("crossings.json", &json_bytes(&crossings_json)?)?;

    // The scan itself only tracks the few branches whose crossings are
    // sought; certifying the gap along the ray takes a deep branch set.
    // One warm sweep covers the whole ray when the depth suffices
    // everywhere; otherwise each point is retried alone and the ones even
    // that depth cannot certify are skipped.
    let points = match gap_curve(setup.robin, setup.geom, &report.s_grid, args.gap_nmax, &setup.opts)
    {
        Ok(points) => points,
        Err(Error::TableTooShort(_)) => {
            let mut points = Vec::new();
            let mut skipped = 0;
            for &s in &report.s_grid {
                match gap_curve(setup.robin, setup.geom, &[s], args.gap_nmax, &setup.opts) {
                    Ok(one) => points.extend(one),
                    Err(Error::TableTooShort(_)) => skipped += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            eprintln!(
                "warning: gap not certified at {skipped} of {} ray points (branch depth {}); \
                 raise --gap-nmax to cover them",
                report.s_grid.len(),
                args.gap_nmax
            );
            points
        }
        Err(e) => return Err(e.into()),
    };
    let mut csv = Csv::new("s,gap");
    for (s, gap) in points {
        csv.row(&[fmt_f64(s), fmt_f64(gap)]);
    }
    out.write("gap_curve.csv", &csv.into_bytes())?;
    out.finish(VERSION)
}

// ------------------------------------------------------------------- riesz

pub fn riesz(args: RieszArgs) -> Result<(), Failure> {
    let setup = Setup::strict(&args.common)?;
    let n_max = args.common.nmax.unwrap_or(32);
    let mut out = OutputSet::new(&args.common.out_dir, "riesz")?;
    setup.record(&mut out);
    out.param("nmax", json!(n_max));

    let table = solve_spectrum(n_max, setup.robin, setup.geom, &setup.opts)?;
    let duals = dual_family(&table)?;

    // Condition numbers over doubling family sizes expose whether the
    // family is stabilising towards a Riesz basis or deteriorating.
    let mut sizes = Vec::new();
    let mut size = 4;
    while size < table.len() {
        sizes.push(size);
        size *= 2;
    }
    sizes.push(table.len());
    let conditions: Vec<Value> = sizes
        .iter()
        .map(|&size| {
            let report = gram_report(&table, size)?;
            Ok(json!({
                "size": report.size,
                "eig_min": report.extreme_eigs.0,
                "eig_max": report.extreme_eigs.1,
                "riesz_condition": report.riesz_condition,
            }))
        })
        .collect::<Result<_, Failure>>()?;

    let riesz_json = json!({
        "l": setup.geom.width(),
        "al": setup.robin.a_l,
        "a0": setup.robin.a_0,
        "biorthogonality_residual": biorthogonality_residual(&duals),
        "conditions": conditions,
    });
    out.write("riesz.json", &json_bytes(&riesz_json)?)?;
    out.finish(VERSION)
}

// --------------------------------------------------------------- smoothing

pub fn smoothing(args: SmoothingArgs) -> Result<(), Failure> {
    let setup = Setup::strict(&args.common)?;
    let n_max = args.common.nmax.unwrap_or(15);
    let data = parse_data(&args.data)?;
    let mut out = OutputSet::new(&args.common.out_dir, "smoothing")?;
    setup.record(&mut out);
    out.param("nmax", json!(n_max));
    out.param("delta", json!(args.delta));
    out.param("tmax", json!(args.tmax));
    out.param("nt", json!(args.nt));
    out.param("data", json!(args.data));
    out.param("seed", json!(args.common.seed));
    out.param("xbox", json!(args.xbox));
    out.param("nx", json!(args.nx));
    out.param("ynodes", json!(args.ynodes));

    let (plan, u0) =
        plan_and_state(&setup, n_max, &data, args.common.seed, args.xbox, args.nx, args.ynodes)?;
    let norm0 = state_norm(&plan, &u0)?;
    let report = smoothing_functional(&plan, &u0, args.delta, args.tmax, args.nt)?;

    let smoothing_json = json!({
        "delta": report.delta,
        "horizon": report.horizon,
        "q": report.q,
        "late_increment": report.late_increment,
        "norm0": norm0,
        "q_over_norm_sq": report.q / (norm0 * norm0),
    });
    out.write("smoothing.json", &json_bytes(&smoothing_json)?)?;
    out.finish(VERSION)
}
