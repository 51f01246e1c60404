//! Quadrature rules on the transverse interval.
//!
//! Every grid carries a coarser companion rule over the same sample vector,
//! so integral consumers can form a two-resolution self-estimate without
//! asking the caller for more data: the trapezoid companion is the
//! every-other-node subset, the Gauss-Legendre companion is a half-order
//! node set appended after the primary nodes.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    Trapezoid,
    GaussLegendre,
}

/// Nodes and weights on `[0, l]`, primary rule first, companion after it.
#[derive(Debug, Clone)]
pub struct YGrid {
    rule: QuadRule,
    l: f64,
    nodes: Vec<f64>,
    /// Weights aligned with `nodes[..primary]`.
    weights: Vec<f64>,
    primary: usize,
    coarse_idx: Vec<usize>,
    coarse_weights: Vec<f64>,
}

impl YGrid {
    /// Uniform trapezoid rule with `n` nodes including the endpoints.
    /// `n` must be odd and at least 5 so the stride-2 companion is itself
    /// a trapezoid rule on the same interval.
    pub fn trapezoid(l: f64, n: usize) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidInput(format!("interval width {l} invalid")));
        }
        if n < 5 || n % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "trapezoid grid needs an odd node count >= 5, got {n}"
            )));
        }
        let h = l / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        let coarse_idx: Vec<usize> = (0..n).step_by(2).collect();
        let m = coarse_idx.len();
        let mut coarse_weights = vec![2.0 * h; m];
        coarse_weights[0] = h;
        coarse_weights[m - 1] = h;
        Ok(YGrid {
            rule: QuadRule::Trapezoid,
            l,
            nodes,
            weights,
            primary: n,
            coarse_idx,
            coarse_weights,
        })
    }

    /// Gauss-Legendre rule with `n` primary nodes; a `ceil(n/2)`-point rule
    /// is appended as the companion.
    pub fn gauss_legendre(l: f64, n: usize) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidInput(format!("interval width {l} invalid")));
        }
        if n < 4 {
            return Err(Error::InvalidInput(format!(
                "Gauss-Legendre grid needs at least 4 nodes, got {n}"
            )));
        }
        let (mut nodes, weights) = legendre_rule(n, l);
        let m = n.div_ceil(2);
        let (coarse_nodes, coarse_weights) = legendre_rule(m, l);
        let primary = nodes.len();
        let coarse_idx: Vec<usize> = (primary..primary + m).collect();
        nodes.extend_from_slice(&coarse_nodes);
        Ok(YGrid {
            rule: QuadRule::GaussLegendre,
            l,
            nodes,
            weights,
            primary,
            coarse_idx,
            coarse_weights,
        })
    }

    pub fn rule(&self) -> QuadRule {
        self.rule
    }

    pub fn interval_width(&self) -> f64 {
        self.l
    }

    /// All nodes a sample vector must cover (primary rule, then companion).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of primary nodes; `nodes()[..primary_len()]` carries the
    /// integration weights.
    pub fn primary_len(&self) -> usize {
        self.primary
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Primary-rule integral of a sampled function.
    pub fn integrate(&self, samples: &[Complex64]) -> Result<Complex64> {
        self.check_len(samples.len())?;
        Ok(self
            .weights
            .iter()
            .zip(samples)
            .map(|(w, v)| w * v)
            .sum())
    }

    /// Companion-rule integral of the same sample vector.
    pub fn integrate_coarse(&self, samples: &[Complex64]) -> Result<Complex64> {
        self.check_len(samples.len())?;
        Ok(self
            .coarse_idx
            .iter()
            .zip(&self.coarse_weights)
            .map(|(&i, w)| w * samples[i])
            .sum())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.nodes.len() {
            return Err(Error::InvalidInput(format!(
                "sample vector has {len} entries, grid expects {}",
                self.nodes.len()
            )));
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights mapped to `[0, l]`, ascending nodes.
fn legendre_rule(n: usize, l: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        // Standard initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_eval(n, x);
        // Nodes come out descending; store reversed so they ascend.
        nodes[n - 1 - k] = 0.5 * l * (x + 1.0);
        weights[n - 1 - k] = l / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
