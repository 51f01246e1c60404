use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, RobinPair};

/// Discretisation of the transverse finite-difference oracle.
#[derive(Debug, Clone, Copy)]
pub struct CNConfig {
    /// Uniform grid points on `[0, l]`, endpoints included.
    pub n_y: usize,
    /// Time step.
    pub dt: f64,
    /// Number of steps; the horizon is `dt * steps`.
    pub steps: usize,
}

impl CNConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_y < 32 {
            return Err(Error::InvalidInput(format!(
                "transverse oracle needs at least 32 grid points, got {}",
                self.n_y
            )));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "time step must be positive and finite, got {}",
                self.dt
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidInput("zero time steps requested".into()));
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.steps as f64
    }
}

/// Second-order difference operator for `i v_t = -v_yy` with the impedance
/// walls folded in through ghost points: `(v_1 - v_{-1}) / 2h = -i a_0 v_0`
/// at the lower wall and its mirror image at the upper one. Stored as the
/// three diagonals scaled by `1/h^2`.
struct WallLaplacian {
    sub: Vec<Complex64>,
    diag: Vec<Complex64>,
    sup: Vec<Complex64>,
}

impl WallLaplacian {
    fn new(robin: RobinPair, geom: Geometry, n_y: usize) -> Self {
        let h = geom.width() / (n_y - 1) as f64;
        let w = 1.0 / (h * h);
        let mut sub = vec![Complex64::new(w, 0.0); n_y];
        let mut diag = vec![Complex64::new(-2.0 * w, 0.0); n_y];
        let mut sup = vec![Complex64::new(w, 0.0); n_y];
        sub[0] = Complex64::new(0.0, 0.0);
        sup[n_y - 1] = Complex64::new(0.0, 0.0);
        // Eliminating the ghost value doubles the inward neighbour and
        // adds the wall coefficient to the diagonal.
        sup[0] = Complex64::new(2.0 * w, 0.0);
        diag[0] = Complex64::new(-2.0 * w, 2.0 * robin.a_0 / h);
        sub[n_y - 1] = Complex64::new(2.0 * w, 0.0);
        diag[n_y - 1] = Complex64::new(-2.0 * w, 2.0 * robin.a_l / h);
        WallLaplacian { sub, diag, sup }
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        let n = v.len();
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.sub[i] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }
}

/// Solve `(I - c D) x = rhs` for tridiagonal `D` by the Thomas sweep.
fn solve_shifted(
    d: &WallLaplacian,
    c: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = rhs.len();
    let one = Complex64::new(1.0, 0.0);
    let mut diag: Vec<Complex64> = (0..n).map(|i| one - c * d.diag[i]).collect();
    let mut out = rhs.to_vec();
    // Forward elimination.
    for i in 1..n {
        let denom = diag[i - 1];
        if denom.norm() < 1e-300 {
            return Err(Error::LinearSolveFailure { row: i - 1 });
        }
        let m = (-c * d.sub[i]) / denom;
        diag[i] -= m * (-c * d.sup[i - 1]);
        let carry = m * out[i - 1];
        out[i] -= carry;
    }
    // Back substitution.
    let last = diag[n - 1];
    if last.norm() < 1e-300 {
        return Err(Error::LinearSolveFailure { row: n - 1 });
    }
    out[n - 1] /= last;
    for i in (0..n - 1).rev() {
        let carry = (-c * d.sup[i]) * out[i + 1];
        out[i] = (out[i] - carry) / diag[i];
    }
    Ok(out)
}

/// Crank-Nicolson evolution of `i v_t = -v_yy` with impedance walls, the
/// independent check on the spectral propagator. Unconditionally stable;
/// runs single-threaded. Returns the state at every step, the initial one
/// included, so the trajectory has `steps + 1` entries.
pub fn cn_evolve(
    v0: &[Complex64],
    robin: RobinPair,
    geom: Geometry,
    cfg: &CNConfig,
) -> Result<Vec<Vec<Complex64>>> {
    cfg.validate()?;
    if v0.len() != cfg.n_y {
        return Err(Error::InvalidInput(format!(
            "initial data has {} samples, config says {}",
            v0.len(),
            cfg.n_y
        )));
    }
    if v0.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::InvalidInput("initial data is not finite".into()));
    }
    let d = WallLaplacian::new(robin, geom, cfg.n_y);
    // v_t = i D v, so each half step applies I +- (i dt / 2) D.
    let c = Complex64::new(0.0, cfg.dt / 2.0);
    let mut trajectory = Vec::with_capacity(cfg.steps + 1);
    trajectory.push(v0.to_vec());
    let mut rhs = vec![Complex64::new(0.0, 0.0); cfg.n_y];
    for _ in 0..cfg.steps {
        let v = trajectory.last().unwrap();
        d.apply(v, &mut rhs);
        for (r, &x) in rhs.iter_mut().zip(v) {
            *r = x + c * *r;
        }
        trajectory.push(solve_shifted(&d, c, &rhs)?);
    }
    Ok(trajectory)
}

/// Trapezoid-rule squared norm on the uniform oracle grid.
fn trapezoid_norm_sq(v: &[Complex64], h: f64) -> f64 {
    let inner: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    h * (inner - 0.5 * (v[0].norm_sqr() + v[v.len() - 1].norm_sqr()))
}

/// Worst violation of the boundary-flux energy law over a trajectory:
/// `|d/dt ||v||^2 + 2 (a_l |v(l)|^2 + a_0 |v(0)|^2)|` with the time
/// derivative differenced across each step and the wall moduli averaged
/// over the step's endpoints. Decays as O(dt^2 + h^2) for smooth data.
pub fn energy_identity_residual(
    trajectory: &[Vec<Complex64>],
    robin: RobinPair,
    geom: Geometry,
    cfg: &CNConfig,
) -> Result<f64> {
    if trajectory.len() < 2 {
        return Err(Error::InvalidInput(
            "energy residual needs at least two states".into(),
        ));
    }
    if trajectory.iter().any(|v| v.len() != cfg.n_y) {
        return Err(Error::InvalidInput(format!(
            "trajectory states do not all have {} samples",
            cfg.n_y
        )));
    }
    let h = geom.width() / (cfg.n_y - 1) as f64;
    let last = cfg.n_y - 1;
    let mut worst = 0.0f64;
    for pair in trajectory.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let drift = (trapezoid_norm_sq(b, h) - trapezoid_norm_sq(a, h)) / cfg.dt;
        let wall_l = 0.5 * (a[last].norm_sqr() + b[last].norm_sqr());
        let wall_0 = 0.5 * (a[0].norm_sqr() + b[0].norm_sqr());
        let flux = 2.0 * (robin.a_l * wall_l + robin.a_0 * wall_0);
        worst = worst.max((drift + flux).abs());
    }
    Ok(worst)
}
