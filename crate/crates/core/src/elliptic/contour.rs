//! Argument-principle zero counting and zero location on rectangles.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::EllipticContext;
use crate::error::{Error, Result};

/// Axis-aligned rectangle `[corner, corner + width] × [corner, corner + i·height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub corner: Complex64,
    pub width: f64,
    pub height: f64,
}

impl Rectangle {
    pub fn new(corner: Complex64, width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && height > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "rectangle sides must be positive, got {width} × {height}"
            )));
        }
        Ok(Self {
            corner,
            width,
            height,
        })
    }

    /// Period rectangle `2I × 2I'` with the given lower-left corner.
    pub fn fundamental(ctx: &EllipticContext, corner: Complex64) -> Self {
        Self {
            corner,
            width: 2.0 * ctx.half_width(),
            height: 2.0 * ctx.half_height(),
        }
    }

    pub fn center(&self) -> Complex64 {
        self.corner + Complex64::new(self.width, self.height) * 0.5
    }

    pub fn diameter(&self) -> f64 {
        self.width.hypot(self.height)
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        let d = z - self.corner;
        d.re >= -slack
            && d.re <= self.width + slack
            && d.im >= -slack
            && d.im <= self.height + slack
    }

    pub fn translated(&self, by: Complex64) -> Self {
        Self {
            corner: self.corner + by,
            ..*self
        }
    }

    /// Anticlockwise corners starting at the lower-left one.
    fn corners(&self) -> [Complex64; 4] {
        let w = Complex64::new(self.width, 0.0);
        let h = Complex64::new(0.0, self.height);
        [self.corner, self.corner + w, self.corner + w + h, self.corner + h]
    }

    /// Splits into four quadrants at the relative position `(fx, fy)`.
    fn split(&self, fx: f64, fy: f64) -> [Rectangle; 4] {
        let w0 = self.width * fx;
        let h0 = self.height * fy;
        let w1 = self.width - w0;
        let h1 = self.height - h0;
        let c = self.corner;
        [
            Rectangle { corner: c, width: w0, height: h0 },
            Rectangle { corner: c + w0, width: w1, height: h0 },
            Rectangle { corner: c + Complex64::new(0.0, h0), width: w0, height: h1 },
            Rectangle { corner: c + Complex64::new(w0, h0), width: w1, height: h1 },
        ]
    }
}

/// Tuning for contour walks and root polishing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Initial samples per rectangle side.
    pub samples_per_side: usize,
    /// `|f|` below `boundary_guard · max|f|` on the contour counts as a zero on it.
    pub boundary_guard: f64,
    /// Maximum bisection depth of a single contour segment.
    pub max_depth: u32,
    /// Rectangles smaller than this are treated as holding a zero cluster.
    pub cluster_tolerance: f64,
    pub max_newton_steps: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            samples_per_side: 32,
            boundary_guard: 1e-11,
            max_depth: 40,
            cluster_tolerance: 1e-10,
            max_newton_steps: 60,
        }
    }
}

/// Winding number of `f` around the boundary of `rect`, i.e. the number of
/// zeros inside counted with multiplicity.
///
/// The boundary is walked anticlockwise; segments are bisected until the
/// phase of `f` moves by less than π/4 per step, so every phase increment
/// is unambiguous and the total is an exact multiple of 2π.
pub fn count_zeros<F>(ctx: &EllipticContext, f: F, rect: &Rectangle) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    count_zeros_with(ctx, &f, rect, &ContourOptions::default())
}

fn count_zeros_with<F>(
    _ctx: &EllipticContext,
    f: &F,
    rect: &Rectangle,
    opts: &ContourOptions,
) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let corners = rect.corners();
    let n = opts.samples_per_side.max(4);
    let mut points = Vec::with_capacity(4 * n + 1);
    for side in 0..4 {
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        for k in 0..n {
            points.push(a + (b - a) * (k as f64 / n as f64));
        }
    }
    points.push(corners[0]);
    let values = points.iter().map(|&z| f(z)).collect::<Result<Vec<_>>>()?;
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let guard = opts.boundary_guard * scale;
    for (z, v) in points.iter().zip(&values) {
        if !(v.norm() > guard) {
            return Err(Error::BoundaryZero {
                point: *z,
                modulus: v.norm(),
            });
        }
    }

    let mut total = 0.0;
    for k in 0..points.len() - 1 {
        total += segment_phase(
            f,
            (points[k], values[k]),
            (points[k + 1], values[k + 1]),
            guard,
            opts.max_depth,
        )?;
    }
    let winding = total / (2.0 * PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > 1e-6 {
        return Err(Error::BoundaryZero {
            point: rect.corner,
            modulus: 0.0,
        });
    }
    Ok(rounded as i64)
}

fn segment_phase<F>(
    f: &F,
    (a, fa): (Complex64, Complex64),
    (b, fb): (Complex64, Complex64),
    guard: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let whole = (fb / fa).arg();
    let m = (a + b) * 0.5;
    let fm = f(m)?;
    if !(fm.norm() > guard) {
        return Err(Error::BoundaryZero {
            point: m,
            modulus: fm.norm(),
        });
    }
    let left = (fm / fa).arg();
    let right = (fb / fm).arg();
    let quarter = PI / 4.0;
    if left.abs() < quarter && right.abs() < quarter && (left + right - whole).abs() < 1e-9 {
        return Ok(whole);
    }
    if depth == 0 {
        return Err(Error::BoundaryZero {
            point: m,
            modulus: fm.norm(),
        });
    }
    Ok(segment_phase(f, (a, fa), (m, fm), guard, depth - 1)?
        + segment_phase(f, (m, fm), (b, fb), guard, depth - 1)?)
}

/// Locates the zeros of `f` inside `rect`, which must hold exactly
/// `expected_count` of them.
///
/// Rectangles are quartered using winding counts until each piece holds a
/// single zero that Newton iteration (with a central-difference
/// derivative) converges to.
pub fn locate_zeros<F>(
    ctx: &EllipticContext,
    f: F,
    rect: &Rectangle,
    expected_count: usize,
) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let opts = ContourOptions::default();
    let found = count_zeros_with(ctx, &f, rect, &opts)?;
    if found != expected_count as i64 {
        return Err(Error::InvalidSpec(format!(
            "rectangle holds {found} zeros, expected {expected_count}"
        )));
    }
    let mut zeros = Vec::with_capacity(expected_count);
    search(ctx, &f, rect, expected_count, &opts, &mut zeros)?;
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(zeros)
}

const SPLIT_OFFSETS: [(f64, f64); 5] = [
    (0.5, 0.5),
    (0.4871, 0.5129),
    (0.5317, 0.4683),
    (0.4419, 0.5573),
    (0.5861, 0.4237),
];

fn search<F>(
    ctx: &EllipticContext,
    f: &F,
    rect: &Rectangle,
    count: usize,
    opts: &ContourOptions,
    out: &mut Vec<Complex64>,
) -> Result<()>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if count == 0 {
        return Ok(());
    }
    if count == 1 {
        if let Some(z) = newton(f, rect.center(), rect.diameter(), opts)? {
            if rect.contains(z, 1e-12 * rect.diameter().max(1.0)) {
                out.push(z);
                return Ok(());
            }
        }
    }
    if rect.diameter() < opts.cluster_tolerance {
        if count == 1 {
            return Err(Error::ConvergenceFailure(rect.center()));
        }
        out.extend(std::iter::repeat_n(rect.center(), count));
        return Ok(());
    }

    let mut last_err = None;
    for &(fx, fy) in &SPLIT_OFFSETS {
        let parts = rect.split(fx, fy);
        let counts: Result<Vec<i64>> = parts
            .iter()
            .map(|r| count_zeros_with(ctx, f, r, opts))
            .collect();
        match counts {
            Ok(counts) if counts.iter().sum::<i64>() == count as i64 => {
                for (part, &n) in parts.iter().zip(&counts) {
                    search(ctx, f, part, n as usize, opts, out)?;
                }
                return Ok(());
            }
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(Error::ConvergenceFailure(rect.center())))
}

fn newton<F>(
    f: &F,
    start: Complex64,
    scale: f64,
    opts: &ContourOptions,
) -> Result<Option<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut z = start;
    for _ in 0..opts.max_newton_steps {
        let fz = f(z)?;
        if fz.norm() == 0.0 {
            return Ok(Some(z));
        }
        let h = 1e-6 * scale.max(1e-3);
        let dh = Complex64::new(h, 0.0);
        let df = (f(z + dh)? - f(z - dh)?) / (2.0 * h);
        if df.norm() == 0.0 || !df.re.is_finite() || !df.im.is_finite() {
            return Ok(None);
        }
        let step = fz / df;
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) || step.norm() > 10.0 * scale {
            return Ok(None);
        }
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// Factorised description of an entire function with quasi-periodicity of
/// the bracket type: `f(u) = κ Π_{j<L} [u − ζ_j] · [u − η + Σ_{j<L} ζ_j]`,
/// so that `η = Σ_j ζ_j` over all `L` zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroProfile {
    pub zero_count: usize,
    pub zeros: Vec<Complex64>,
    pub kappa: Complex64,
    pub eta: Complex64,
}

impl ZeroProfile {
    /// Fits `κ` at `probe` from the given zeros.
    pub fn from_zeros<F>(
        ctx: &EllipticContext,
        f: F,
        zeros: Vec<Complex64>,
        probe: Complex64,
    ) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let eta = zeros.iter().sum();
        let product: Complex64 = zeros.iter().map(|&z| ctx.bracket(probe - z)).product();
        let kappa = f(probe)? / product;
        Ok(Self {
            zero_count: zeros.len(),
            zeros,
            kappa,
            eta,
        })
    }

    /// `κ Π [u − ζ_j]`.
    pub fn evaluate(&self, ctx: &EllipticContext, u: Complex64) -> Complex64 {
        self.kappa
            * self
                .zeros
                .iter()
                .map(|&z| ctx.bracket(u - z))
                .product::<Complex64>()
    }
}
