//! The elliptic bracket `[u]` and the quantities derived from it.
//!
//! `[u]` is the normalised theta function
//!
//! ```text
//! [u] = sin(πu/2I) · Π_{n≥1} (1 − 2q^{2n} cos(πu/I) + q^{4n}) (1 − q^{2n})
//! ```
//!
//! with nome `q = exp(−π I'/I)`. It is entire and odd, flips sign under
//! `u → u + 2I` and picks up `−q^{-1} exp(−πiu/I)` under `u → u + 2iI'`.
//! Its zeros form the lattice `2I·ℤ + 2iI'·ℤ`.

mod contour;

pub use contour::{count_zeros, locate_zeros, ContourOptions, Rectangle, ZeroProfile};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative size of the imaginary part tolerated in a bracket value that
/// must be positive real.
const REGIME_IMAG_TOLERANCE: f64 = 1e-10;

/// Truncation and period data shared by every bracket evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticContext {
    nome: f64,
    half_width: f64,
    half_height: f64,
    order: usize,
    eval_tolerance: f64,
}

impl Default for EllipticContext {
    fn default() -> Self {
        Self::new(Self::DEFAULT_NOME, 1.0).expect("default context is valid")
    }
}

impl EllipticContext {
    pub const DEFAULT_NOME: f64 = 0.1;
    pub const DEFAULT_TOLERANCE: f64 = 1e-14;

    pub fn new(nome: f64, half_width: f64) -> Result<Self> {
        Self::with_tolerance(nome, half_width, Self::DEFAULT_TOLERANCE)
    }

    /// Builds a context whose truncation order is the smallest `N` with
    /// `nome^{2N} < eval_tolerance`.
    pub fn with_tolerance(nome: f64, half_width: f64, eval_tolerance: f64) -> Result<Self> {
        if !(nome > 0.0 && nome < 1.0) {
            return Err(Error::InvalidContext(format!("nome {nome} outside (0, 1)")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidContext(format!(
                "half width {half_width} must be positive"
            )));
        }
        if !(eval_tolerance > 0.0 && eval_tolerance < 1.0) {
            return Err(Error::InvalidContext(format!(
                "tolerance {eval_tolerance} outside (0, 1)"
            )));
        }
        let q2 = nome * nome;
        let mut order = 1;
        let mut tail = q2;
        while tail >= eval_tolerance {
            tail *= q2;
            order += 1;
        }
        Ok(Self {
            nome,
            half_width,
            half_height: -half_width * nome.ln() / PI,
            order,
            eval_tolerance,
        })
    }

    /// The `q → 0` limit, where `[u] = sin(πu/2I)`. The imaginary
    /// quasi-period is infinite here, so `bracket_quasi_factor` is
    /// meaningless for this context.
    pub fn trigonometric(half_width: f64) -> Self {
        Self {
            nome: 0.0,
            half_width,
            half_height: f64::INFINITY,
            order: 0,
            eval_tolerance: Self::DEFAULT_TOLERANCE,
        }
    }

    /// Overrides the truncation order. Only raising it is allowed, since a
    /// lower order would break the tail bound.
    pub fn with_order(mut self, order: usize) -> Result<Self> {
        if order < self.order {
            return Err(Error::InvalidContext(format!(
                "order {order} below the tolerance-mandated {}",
                self.order
            )));
        }
        self.order = order;
        Ok(self)
    }

    pub fn nome(&self) -> f64 {
        self.nome
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn half_height(&self) -> f64 {
        self.half_height
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eval_tolerance(&self) -> f64 {
        self.eval_tolerance
    }

    /// Real quasi-period `2I`.
    pub fn real_period(&self) -> Complex64 {
        Complex64::new(2.0 * self.half_width, 0.0)
    }

    /// Imaginary quasi-period `2iI'`.
    pub fn imag_period(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * self.half_height)
    }

    pub fn bracket(&self, u: Complex64) -> Complex64 {
        let w = u * (PI / self.half_width);
        let mut value = (w * 0.5).sin();
        if self.order == 0 {
            return value;
        }
        let cos_w = w.cos();
        let q2 = self.nome * self.nome;
        let mut q2n = 1.0;
        for _ in 0..self.order {
            q2n *= q2;
            value *= (1.0 - 2.0 * q2n * cos_w + q2n * q2n) * (1.0 - q2n);
        }
        value
    }

    /// Like [`bracket`](Self::bracket) but reports overflow instead of
    /// returning a non-finite value.
    pub fn checked_bracket(&self, u: Complex64) -> Result<Complex64> {
        let value = self.bracket(u);
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(Error::Range(u))
        }
    }

    /// Multiplier `m(u)` with `[u + 2iI'] = m(u)·[u]`.
    pub fn bracket_quasi_factor(&self, u: Complex64) -> Complex64 {
        let phase = (Complex64::new(0.0, -PI) * u / self.half_width).exp();
        -phase / self.nome
    }

    /// Square root of a bracket whose argument is carried symbolically.
    ///
    /// The root is `i^n · sqrt([f])`, where `f` is the field-affine part and
    /// `n` the integer drop. `[f]` must be positive real.
    pub fn half_bracket(&self, arg: HalfBracketArg) -> Result<Complex64> {
        let value = self.bracket(arg.field);
        let modulus = value.norm();
        if !(value.re > 0.0) || value.im.abs() > REGIME_IMAG_TOLERANCE * modulus {
            return Err(Error::RegimeViolation {
                argument: arg.field,
                value,
            });
        }
        Ok(i_pow(arg.drop) * value.sqrt())
    }

    /// Distance from `z` to the nearest point of the zero lattice
    /// `2I·ℤ + 2iI'·ℤ`.
    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let re_period = 2.0 * self.half_width;
        let mut d = z;
        if self.half_height.is_finite() {
            let im_period = 2.0 * self.half_height;
            d.im -= (d.im / im_period).round() * im_period;
        }
        d.re -= (d.re / re_period).round() * re_period;
        d.norm()
    }
}

/// `i^n`.
pub fn i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Argument of a half bracket: the full argument is `field − 2·drop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfBracketArg {
    pub field: Complex64,
    pub drop: u32,
}

impl HalfBracketArg {
    pub fn new(field: Complex64, drop: u32) -> Self {
        Self { field, drop }
    }

    pub fn value(&self) -> Complex64 {
        self.field - 2.0 * f64::from(self.drop)
    }
}
