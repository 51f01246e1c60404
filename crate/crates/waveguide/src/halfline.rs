//! Geometry of the full operator's spectrum.
//!
//! Separation of variables turns the spectrum into a union of horizontal
//! half-lines, one per transverse eigenvalue: `S = U_n { mu_n + r : r >= 0 }`.
//! Everything here is plane geometry against that set: pointwise distances,
//! the spectral gap (distance from the real axis), and resolvent-bound maps
//! over rectangular regions.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, RobinPair};
use crate::spectrum::SpectrumTable;

/// The half-line spectrum spanned by a computed table, plus the limiting
/// imaginary part `-2 (a_l + a_0) / l` its deep branches approach.
#[derive(Debug, Clone)]
pub struct HalfLineSpectrum {
    table: SpectrumTable,
    tail_imag: f64,
}

impl HalfLineSpectrum {
    /// Wrap a table; rejects tables whose deepest mode has not yet come
    /// close to the tail law (the asymptotic extension would then lie).
    pub fn new(table: SpectrumTable) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::TableTooShort(
                "half-line spectrum needs at least one mode".into(),
            ));
        }
        let tail_imag = -2.0 * table.robin().sum() / table.geom().width();
        let n = table.len() - 1;
        let deepest = table.mode(n).mu.im;
        if n >= 1 && (deepest - tail_imag).abs() > 10.0 / n as f64 {
            return Err(Error::TableTooShort(format!(
                "Im mu_{n} = {deepest} is still {} away from the tail value {tail_imag}",
                (deepest - tail_imag).abs()
            )));
        }
        Ok(HalfLineSpectrum { table, tail_imag })
    }

    pub fn table(&self) -> &SpectrumTable {
        &self.table
    }

    pub fn tail_imag(&self) -> f64 {
        self.tail_imag
    }

    /// Origin of half-line `n`: the computed eigenvalue inside the table,
    /// the two-term asymptotic `(n nu)^2 + i tail` beyond it.
    pub fn origin(&self, n: usize) -> Complex64 {
        if n < self.table.len() {
            self.table.mode(n).mu
        } else {
            let nv = n as f64 * self.table.geom().nu();
            Complex64::new(nv * nv, self.tail_imag)
        }
    }
}

/// Distance from `z` to the single half-line `{mu + r : r >= 0}`: the
/// vertical drop when `z` lies over the line, the distance to its origin
/// otherwise.
pub fn halfline_distance(z: Complex64, mu: Complex64) -> f64 {
    if z.re >= mu.re {
        (z.im - mu.im).abs()
    } else {
        (z - mu).norm()
    }
}

/// Distance from `z` to the half-line spectrum, with the distance minimum
/// certified even past the end of the table.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumDistance {
    pub value: f64,
    /// True when the minimum could not be certified from computed modes
    /// alone and asymptotic half-lines were consulted.
    pub tail_extended: bool,
}

/// Minimum of [`halfline_distance`] over all half-lines. Every computed
/// mode is checked; beyond the table the asymptotic origins take over and
/// the scan stops as soon as the horizontal offset alone exceeds the
/// running minimum (their real parts increase monotonically).
pub fn spectrum_distance(z: Complex64, spec: &HalfLineSpectrum) -> Result<SpectrumDistance> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::TableTooShort(format!(
            "distance from non-finite point {z} cannot be certified"
        )));
    }
    let mut best = f64::INFINITY;
    for m in spec.table().modes() {
        best = best.min(halfline_distance(z, m.mu));
    }
    let mut n = spec.table().len();
    let mut tail_extended = false;
    loop {
        let mu = spec.origin(n);
        if mu.re - z.re > best {
            break;
        }
        tail_extended = true;
        best = best.min(halfline_distance(z, mu));
        n += 1;
    }
    Ok(SpectrumDistance {
        value: best,
        tail_extended,
    })
}

/// Which part of the spectrum realizes the gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapAttaining {
    Mode(usize),
    Tail,
}

/// The spectral gap `inf_n (-Im mu_n)` combined with the tail limit; a
/// nonpositive gap is data (the overdamped or amplifying regime), not an
/// error.
#[derive(Debug, Clone, Copy)]
pub struct GapReport {
    pub gap: f64,
    pub attaining: GapAttaining,
}

impl GapReport {
    /// True exactly when every spectral half-line sits strictly below the
    /// real axis.
    pub fn is_positive(&self) -> bool {
        self.gap > 0.0
    }
}

/// How far the deepest computed mode may sit from the tail value, relative
/// to the tail, before the infimum over *uncomputed* modes becomes
/// untrustworthy.
const GAP_DEPTH_TOLERANCE: f64 = 0.05;

/// Distance from the real axis to the spectrum: `min(min_n -Im mu_n, -tail)`.
pub fn spectral_gap(spec: &HalfLineSpectrum) -> Result<GapReport> {
    let mus: Vec<Complex64> = spec.table().modes().iter().map(|m| m.mu).collect();
    gap_from_branch_mus(&mus, spec.table().robin(), spec.table().geom())
}

/// Gap core over raw branch eigenvalues in index order, shared with the
/// sweep module, which has the eigenvalues in hand without a full table.
pub(crate) fn gap_from_branch_mus(
    mus: &[Complex64],
    robin: RobinPair,
    geom: Geometry,
) -> Result<GapReport> {
    let Some(deepest) = mus.last().map(|m| m.im) else {
        return Err(Error::TableTooShort("no modes to take a gap over".into()));
    };
    let n = mus.len() - 1;
    let tail = -2.0 * robin.sum() / geom.width();
    if (deepest - tail).abs() > GAP_DEPTH_TOLERANCE * tail.abs() {
        return Err(Error::TableTooShort(format!(
            "gap needs Im mu to settle within {:.0}% of the tail {tail}; \
             mode {n} is still at {deepest}",
            GAP_DEPTH_TOLERANCE * 100.0
        )));
    }
    let mut gap = -tail;
    let mut attaining = GapAttaining::Tail;
    for (i, m) in mus.iter().enumerate() {
        if -m.im < gap {
            gap = -m.im;
            attaining = GapAttaining::Mode(i);
        }
    }
    Ok(GapReport { gap, attaining })
}

/// Rectangular complex-plane sampling window.
#[derive(Debug, Clone, Copy)]
pub struct GridRegion {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    /// Sample counts `(n_re, n_im)`, endpoints included.
    pub resolution: (usize, usize),
}

impl GridRegion {
    pub fn new(
        re_range: (f64, f64),
        im_range: (f64, f64),
        resolution: (usize, usize),
    ) -> Result<Self> {
        let ok_interval = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && b > a;
        if !ok_interval(re_range) || !ok_interval(im_range) {
            return Err(Error::InvalidInput(format!(
                "degenerate region [{}, {}] x [{}, {}]",
                re_range.0, re_range.1, im_range.0, im_range.1
            )));
        }
        if resolution.0 < 2 || resolution.1 < 2 {
            return Err(Error::InvalidInput(format!(
                "resolution {}x{} too small, need at least 2 samples per axis",
                resolution.0, resolution.1
            )));
        }
        Ok(GridRegion {
            re_range,
            im_range,
            resolution,
        })
    }

    pub fn re_points(&self) -> Vec<f64> {
        linspace(self.re_range.0, self.re_range.1, self.resolution.0)
    }

    pub fn im_points(&self) -> Vec<f64> {
        linspace(self.im_range.0, self.im_range.1, self.resolution.1)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * step })
        .collect()
}

/// Points closer to the spectrum than this are reported as unbounded.
const RESOLVENT_DISTANCE_FLOOR: f64 = 1e-12;

/// Estimate `riesz_c / dist(z, S)` over the region, row-major with the real
/// axis fastest. The Riesz condition stands in for the (non-constructive)
/// similarity constant, so the map is an estimate of the resolvent norm's
/// shape, not a certified bound.
pub fn resolvent_bound_map(
    region: &GridRegion,
    spec: &HalfLineSpectrum,
    riesz_c: f64,
) -> Result<Vec<f64>> {
    if !(riesz_c.is_finite() && riesz_c >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "Riesz constant {riesz_c} must be >= 1"
        )));
    }
    let res = region.re_points();
    let ims = region.im_points();
    let rows: Vec<Result<Vec<f64>>> = ims
        .par_iter()
        .map(|&im| {
            res.iter()
                .map(|&re| {
                    let d = spectrum_distance(Complex64::new(re, im), spec)?.value;
                    Ok(if d < RESOLVENT_DISTANCE_FLOOR {
                        f64::INFINITY
                    } else {
                        riesz_c / d
                    })
                })
                .collect()
        })
        .collect();
    let mut grid = Vec::with_capacity(res.len() * ims.len());
    for row in rows {
        grid.extend(row?);
    }
    Ok(grid)
}
