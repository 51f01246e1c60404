use crate::error::{Error, Result};

/// Cross-section of the waveguide: the strip is `R x (0, l)` and all
/// transverse quantities live on the interval `(0, l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    l: f64,
}

impl Geometry {
    pub fn new(l: f64) -> Result<Self> {
        if !l.is_finite() || l <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "interval width must be a positive finite number, got {l}"
            )));
        }
        Ok(Geometry { l })
    }

    /// Width of the transverse interval.
    pub fn width(&self) -> f64 {
        self.l
    }

    /// Transverse frequency unit `nu = pi / l`. Branch `n` of the
    /// eigenvalue family starts at `lambda = n * nu` when both boundary
    /// coefficients vanish.
    pub fn nu(&self) -> f64 {
        std::f64::consts::PI / self.l
    }
}

/// Impedance coefficients of the two boundary conditions
/// `u'(0) = -i a_0 u(0)` and `u'(l) = i a_l u(l)`.
///
/// Positive coefficients absorb energy, negative ones inject it; the pair
/// `(a, -a)` is the balanced gain/loss configuration with a real spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinPair {
    pub a_l: f64,
    pub a_0: f64,
}

impl RobinPair {
    pub fn new(a_l: f64, a_0: f64) -> Self {
        RobinPair { a_l, a_0 }
    }

    /// Combined absorption `a_l + a_0`; its sign separates damped,
    /// balanced and amplified configurations.
    pub fn sum(&self) -> f64 {
        self.a_l + self.a_0
    }

    /// True when both coefficients are exactly zero (pure Neumann walls).
    pub fn is_zero(&self) -> bool {
        self.a_l == 0.0 && self.a_0 == 0.0
    }

    /// Both coefficients nonnegative and at least one positive.
    pub fn is_absorbing(&self) -> bool {
        self.a_l >= 0.0 && self.a_0 >= 0.0 && !self.is_zero()
    }

    pub fn scaled(&self, s: f64) -> Self {
        RobinPair::new(s * self.a_l, s * self.a_0)
    }

    pub fn negated(&self) -> Self {
        RobinPair::new(-self.a_l, -self.a_0)
    }

    pub fn is_finite(&self) -> bool {
        self.a_l.is_finite() && self.a_0.is_finite()
    }
}
