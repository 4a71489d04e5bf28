//! Closed-form partition functions and the checks run against them.
//!
//! Every check returns a [`VerificationReport`]. Residuals are relative
//! unless stated otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{count_zeros, locate_zeros, EllipticContext, HalfBracketArg, Rectangle};
use crate::error::{Error, Result};
use crate::felderhof::{EdgeLabels, FaceParams, FelderhofVertexKind, SymbolicHeight};
use crate::lattice::{dwpf_bruteforce, dwpf_transfer, FaceModel, LatticeSpec, ModelParams};
use crate::ps::{self, Sign, SINGULAR_GUARD};

pub mod tolerances {
    /// Identities built from full brackets only.
    pub const BRACKET: f64 = 1e-10;
    /// Identities where half brackets participate.
    pub const HALF_BRACKET: f64 = 1e-9;
    /// Located zeros against predicted ones.
    pub const ZERO_MATCH: f64 = 1e-8;
    /// Two evaluators of the same sum.
    pub const EVALUATOR_AGREEMENT: f64 = 1e-12;
    /// Single-face partition functions.
    pub const SINGLE_FACE: f64 = 1e-12;
    /// Same arithmetic on both sides.
    pub const ROUNDING: f64 = 4.0 * f64::EPSILON;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub residual: f64,
    pub ratio: Option<Complex64>,
    /// Phase of `ratio` in `(−π, π]`.
    pub phase: Option<f64>,
    pub zeros: Vec<Complex64>,
    pub passed: bool,
    pub tolerance: f64,
    pub brute: Option<Complex64>,
    pub closed: Option<Complex64>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            residual,
            ratio: None,
            phase: None,
            zeros: Vec::new(),
            passed: residual <= tolerance,
            tolerance,
            brute: None,
            closed: None,
        }
    }

    fn with_ratio(mut self, ratio: Complex64) -> Self {
        self.ratio = Some(ratio);
        self.phase = Some(ratio.arg());
        self
    }

    fn with_values(mut self, brute: Complex64, closed: Complex64) -> Self {
        self.brute = Some(brute);
        self.closed = Some(closed);
        self
    }
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_difference(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// `a / b` with both scaled first, so values near the bottom of the
/// floating-point range do not underflow `|b|²`.
pub fn quotient(a: Complex64, b: Complex64) -> Complex64 {
    let scale = b.re.abs().max(b.im.abs());
    if scale == 0.0 || !scale.is_finite() {
        return a / b;
    }
    (a / scale) / (b / scale)
}

fn felderhof_parts(spec: &LatticeSpec) -> Result<(&[Complex64], &[Complex64], SymbolicHeight)> {
    match &spec.model {
        ModelParams::Felderhof { p, q, base } => Ok((p, q, *base)),
        _ => Err(Error::InvalidSpec("expected a Felderhof-type spec".into())),
    }
}

/// Factorized domain wall partition function of the Felderhof-type model.
pub fn dwpf_felderhof_closed(spec: &LatticeSpec) -> Result<Complex64> {
    let (p, q, h) = felderhof_parts(spec)?;
    let ctx = &spec.elliptic;
    let br = |x: Complex64| ctx.bracket(x);
    let half = |x: Complex64, drop: u32| ctx.half_bracket(HalfBracketArg::new(x, drop));
    let sum = |xs: &[Complex64]| xs.iter().sum::<Complex64>();
    let (sp, sq) = (sum(p), sum(q));

    let mut z = Complex64::new(1.0, 0.0);
    for (&pj, &qj) in p.iter().zip(q) {
        z *= half(2.0 * pj, 0)? * half(2.0 * qj, 0)?;
    }
    z /= half(2.0 * (h.affine + sp), h.drop)? * half(2.0 * (h.affine + sq), h.drop)?;
    z *= br(sum(&spec.v) - sum(&spec.u) + sp + sq + 2.0 * h.value());
    let l = spec.size;
    for j in 0..l {
        for k in j + 1..l {
            z *= br(spec.u[j] - spec.u[k] + p[j] + p[k]) * br(spec.v[k] - spec.v[j] + q[k] + q[j]);
        }
    }
    Ok(z)
}

/// Factorized domain wall partition function of the Perk-Schultz-type
/// model, with `h = h_{+−}` at the top-left corner.
pub fn dwpf_ps_closed(spec: &LatticeSpec) -> Result<Complex64> {
    let ModelParams::PerkSchultz { base, omega } = &spec.model else {
        return Err(Error::InvalidSpec("expected a Perk-Schultz-type spec".into()));
    };
    let ctx = &spec.elliptic;
    let br = |x: Complex64| ctx.bracket(x);
    let l = spec.size;
    let h = ps::h_scalar(base, omega, Sign::Plus, Sign::Minus) + (l as f64 - 1.0);
    let den = br(h);
    if den.norm() < SINGULAR_GUARD {
        return Err(Error::SingularHeight {
            argument: h,
            modulus: den.norm(),
        });
    }
    let shift: Complex64 = spec.u.iter().zip(&spec.v).map(|(u, v)| u - v).sum();
    let one = br(Complex64::new(1.0, 0.0));
    let mut z = br(h - shift) / den;
    for i in 0..l {
        for j in i + 1..l {
            z *= br(1.0 + spec.u[i] - spec.u[j]) * br(1.0 - (spec.v[i] - spec.v[j])) / (one * one);
        }
    }
    Ok(z)
}

pub fn dwpf_closed(spec: &LatticeSpec) -> Result<Complex64> {
    match spec.model {
        ModelParams::Felderhof { .. } => dwpf_felderhof_closed(spec),
        ModelParams::PerkSchultz { .. } => dwpf_ps_closed(spec),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodShift {
    Real,
    Imaginary,
}

/// Multiplier predicted for `Z` when `u₁` moves by one quasi-period.
pub fn felderhof_period_factor(spec: &LatticeSpec, shift: PeriodShift) -> Result<Complex64> {
    let (p, q, h) = felderhof_parts(spec)?;
    let l = spec.size as i32;
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    match shift {
        PeriodShift::Real => Ok(Complex64::new(sign, 0.0)),
        PeriodShift::Imaginary => {
            let ctx = &spec.elliptic;
            let vq: Complex64 = spec.v.iter().zip(q).map(|(v, q)| v + q).sum();
            let arg = f64::from(l) * spec.u[0] + f64::from(l - 2) * p[0] - vq - 2.0 * h.value();
            let phase = (Complex64::new(0.0, -PI) * arg / ctx.half_width()).exp();
            Ok(sign / ctx.nome().powi(l) * phase)
        }
    }
}

fn period(ctx: &EllipticContext, shift: PeriodShift) -> Complex64 {
    match shift {
        PeriodShift::Real => ctx.real_period(),
        PeriodShift::Imaginary => ctx.imag_period(),
    }
}

/// Quasi-periodicity in `u₁`, checked on the brute-force and closed forms.
pub fn check_property1(spec: &LatticeSpec, shift: PeriodShift) -> Result<VerificationReport> {
    let factor = felderhof_period_factor(spec, shift)?;
    let shifted = spec.with_u1(spec.u[0] + period(&spec.elliptic, shift));
    let brute = (dwpf_bruteforce(spec)?, dwpf_bruteforce(&shifted)?);
    let closed = (dwpf_felderhof_closed(spec)?, dwpf_felderhof_closed(&shifted)?);
    let residual = relative_difference(brute.1, factor * brute.0).max(relative_difference(closed.1, factor * closed.0));
    let (name, tol) = match shift {
        PeriodShift::Real => ("property1_real", tolerances::BRACKET),
        PeriodShift::Imaginary => ("property1_imaginary", tolerances::HALF_BRACKET),
    };
    let ratio = if brute.0 == Complex64::new(0.0, 0.0) {
        factor
    } else {
        quotient(brute.1, brute.0)
    };
    Ok(VerificationReport::new(name, residual, tol)
        .with_ratio(quotient(ratio, factor))
        .with_values(brute.0, closed.0))
}

/// Simple zeros `u_j − p₁ − p_j` (`j ≥ 2`) and the balancing zero of `Z`
/// as a function of `u₁`.
pub fn felderhof_predicted_zeros(spec: &LatticeSpec) -> Result<(Vec<Complex64>, Complex64)> {
    let (p, q, h) = felderhof_parts(spec)?;
    let simple = (1..spec.size).map(|j| spec.u[j] - p[0] - p[j]).collect();
    let balancing = spec.v.iter().sum::<Complex64>() - spec.u[1..].iter().sum::<Complex64>()
        + p.iter().sum::<Complex64>()
        + q.iter().sum::<Complex64>()
        + 2.0 * h.value();
    Ok((simple, balancing))
}

/// Counts and locates the zeros of `u₁ ↦ f(u₁)` over a fundamental
/// rectangle whose left edge sits `margin` left of `anchor`; the rectangle
/// is nudged once if a zero lands on its boundary.
pub fn zeros_in_u1<F>(ctx: &EllipticContext, f: F, anchor: f64, margin: f64) -> Result<(i64, Vec<Complex64>)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let corner = Complex64::new(anchor - margin, -ctx.half_height());
    let nudge = Complex64::new(0.0137 * ctx.half_width(), 0.0071 * ctx.half_height());
    let mut last_err = None;
    for rect in [
        Rectangle::fundamental(ctx, corner),
        Rectangle::fundamental(ctx, corner + nudge),
    ] {
        let count = match count_zeros(ctx, &f, &rect) {
            Ok(n) => n,
            Err(e @ Error::BoundaryZero { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        return match locate_zeros(ctx, &f, &rect, count.max(0) as usize) {
            Ok(zeros) => Ok((count, zeros)),
            Err(e) => Err(e),
        };
    }
    Err(last_err.expect("loop ran"))
}

/// Largest lattice-reduced distance from each target to its nearest zero.
pub fn match_zeros(ctx: &EllipticContext, targets: &[Complex64], zeros: &[Complex64]) -> f64 {
    targets
        .iter()
        .map(|&t| {
            zeros
                .iter()
                .map(|&z| ctx.lattice_distance(z - t))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Zeros of brute-force `Z` in `u₁`: the count must equal `L` and every
/// predicted zero must be matched.
pub fn check_property2(spec: &LatticeSpec) -> Result<VerificationReport> {
    if spec.size < 2 {
        return Err(Error::InvalidSpec("zero check needs L ≥ 2".into()));
    }
    let (p, ..) = felderhof_parts(spec)?;
    let (mut predicted, balancing) = felderhof_predicted_zeros(spec)?;
    predicted.push(balancing);
    let anchor = (1..spec.size)
        .map(|j| (spec.u[j] - p[0] - p[j]).re)
        .fold(f64::INFINITY, f64::min);
    let ctx = spec.elliptic;
    let (count, zeros) = zeros_in_u1(&ctx, |u1| dwpf_bruteforce(&spec.with_u1(u1)), anchor, 0.1 * ctx.half_width())?;
    let residual = match_zeros(&ctx, &predicted, &zeros);
    let mut report = VerificationReport::new("property2_zeros", residual, tolerances::ZERO_MATCH);
    report.passed &= count == spec.size as i64;
    report.zeros = zeros;
    Ok(report)
}

/// Product of the frozen first row and column at the recursion point: a
/// `c₊` corner face, `b₋`-pattern faces along the first row and
/// `b₊`-pattern faces down the first column.
pub fn frozen_border_weight(spec: &LatticeSpec) -> Result<Complex64> {
    let mut w = spec.face_weight(0, 0, EdgeLabels::new(0, 0, 1, 1), 0)?;
    for k in 1..spec.size {
        w *= spec.face_weight(0, k, EdgeLabels::new(1, 0, 0, 1), 0)?;
        w *= spec.face_weight(k, 0, EdgeLabels::new(0, 1, 1, 0), 0)?;
    }
    Ok(w)
}

/// Point in `u₁` where the top-left `a₊` weight vanishes.
pub fn recursion_point(spec: &LatticeSpec) -> Complex64 {
    match &spec.model {
        ModelParams::Felderhof { p, q, .. } => spec.v[0] - p[0] - q[0],
        ModelParams::PerkSchultz { .. } => spec.v[0] - 1.0,
    }
}

fn recursion_report(spec: &LatticeSpec, name: &str, tol: f64) -> Result<VerificationReport> {
    let inner = spec
        .inner()
        .ok_or_else(|| Error::InvalidSpec("recursion needs L ≥ 2".into()))?;
    let at = spec.with_u1(recursion_point(spec));
    let lhs = dwpf_bruteforce(&at)?;
    let rhs = frozen_border_weight(&at)? * dwpf_bruteforce(&inner)?;
    Ok(VerificationReport::new(name, relative_difference(lhs, rhs), tol)
        .with_ratio(quotient(lhs, rhs))
        .with_values(lhs, rhs))
}

/// Recursion of `Z_L` onto `Z_{L−1}`, brute force on both sides.
pub fn check_property3(spec: &LatticeSpec) -> Result<VerificationReport> {
    felderhof_parts(spec)?;
    recursion_report(spec, "property3_recursion", tolerances::HALF_BRACKET)
}

/// `Z_{1×1} = c₊`.
pub fn check_property4(spec: &LatticeSpec) -> Result<VerificationReport> {
    let (p, q, h) = felderhof_parts(spec)?;
    if spec.size != 1 {
        return Err(Error::InvalidSpec("initial condition needs L = 1".into()));
    }
    let fp = FaceParams {
        u: spec.u[0],
        v: spec.v[0],
        p: p[0],
        q: q[0],
        h_tl: h,
    };
    let c_plus = crate::felderhof::weight(&spec.elliptic, &fp, FelderhofVertexKind::CPlus)?;
    let z = dwpf_bruteforce(spec)?;
    Ok(VerificationReport::new("property4_initial", relative_difference(z, c_plus), tolerances::ROUNDING)
        .with_ratio(quotient(z, c_plus))
        .with_values(z, c_plus))
}

/// `dwpf_bruteforce / dwpf_closed`. PS passes on `|ratio − 1|`; Felderhof
/// passes on `||ratio| − 1|`, with the phase reported.
pub fn compare_brute_closed(spec: &LatticeSpec) -> Result<VerificationReport> {
    compare_with_closed(spec, dwpf_bruteforce(spec)?, "brute_closed")
}

/// As [`compare_brute_closed`] with the transfer evaluator, for lattices
/// too large to enumerate.
pub fn compare_transfer_closed(spec: &LatticeSpec) -> Result<VerificationReport> {
    compare_with_closed(spec, dwpf_transfer(spec)?, "transfer_closed")
}

fn compare_with_closed(spec: &LatticeSpec, z: Complex64, suffix: &str) -> Result<VerificationReport> {
    let closed = dwpf_closed(spec)?;
    let ratio = quotient(z, closed);
    let report = match spec.model {
        ModelParams::PerkSchultz { .. } => {
            VerificationReport::new(format!("ps_{suffix}"), (ratio - 1.0).norm(), tolerances::BRACKET)
        }
        ModelParams::Felderhof { .. } => VerificationReport::new(
            format!("felderhof_{suffix}"),
            (ratio.norm() - 1.0).abs(),
            tolerances::HALF_BRACKET,
        ),
    };
    Ok(report.with_ratio(ratio).with_values(z, closed))
}

/// Batch comparison: every modulus within tolerance of one and the phases
/// constant across the batch. The reported phase is the batch mean.
pub fn compare_brute_closed_batch(specs: &[LatticeSpec]) -> Result<VerificationReport> {
    let reports = specs.iter().map(compare_brute_closed).collect::<Result<Vec<_>>>()?;
    phase_constancy(&reports)
}

/// Folds single comparisons into one report whose residual is the larger
/// of the worst modulus error and the phase spread.
pub fn phase_constancy(reports: &[VerificationReport]) -> Result<VerificationReport> {
    let Some(first) = reports.first() else {
        return Err(Error::InvalidSpec("empty batch".into()));
    };
    let reference = first.phase.unwrap_or(f64::NAN);
    let offsets: Vec<f64> = reports
        .iter()
        .map(|r| wrap_phase(r.phase.unwrap_or(f64::NAN) - reference))
        .collect();
    let nan_max = |acc: f64, x: f64| if x.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(x) };
    let nan_min = |acc: f64, x: f64| if x.is_nan() || acc.is_nan() { f64::NAN } else { acc.min(x) };
    let lo = offsets.iter().copied().fold(f64::INFINITY, nan_min);
    let hi = offsets.iter().copied().fold(f64::NEG_INFINITY, nan_max);
    let spread = hi - lo;
    let modulus = reports.iter().map(|r| r.residual).fold(0.0, nan_max);
    let mean = wrap_phase(reference + offsets.iter().sum::<f64>() / offsets.len() as f64);
    let mut report = VerificationReport::new("phase_constancy", nan_max(modulus, spread), first.tolerance);
    report.ratio = Some(Complex64::from_polar(1.0, mean));
    report.phase = Some(mean);
    Ok(report)
}

fn wrap_phase(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

pub fn compare_transfer_brute(spec: &LatticeSpec) -> Result<VerificationReport> {
    let brute = dwpf_bruteforce(spec)?;
    let transfer = dwpf_transfer(spec)?;
    Ok(
        VerificationReport::new("transfer_brute", relative_difference(transfer, brute), tolerances::EVALUATOR_AGREEMENT)
            .with_ratio(quotient(transfer, brute))
            .with_values(brute, transfer),
    )
}

/// Zeros of brute-force `Z` in `u₁` for the Perk-Schultz-type model:
/// `u_j − 1` for `j ≥ 2` plus the zero of the leading bracket.
pub fn check_ps_zeros(spec: &LatticeSpec) -> Result<VerificationReport> {
    let ModelParams::PerkSchultz { base, omega } = &spec.model else {
        return Err(Error::InvalidSpec("expected a Perk-Schultz-type spec".into()));
    };
    if spec.size < 2 {
        return Err(Error::InvalidSpec("zero check needs L ≥ 2".into()));
    }
    let mut predicted: Vec<Complex64> = spec.u[1..].iter().map(|u| u - 1.0).collect();
    let h = ps::h_scalar(base, omega, Sign::Plus, Sign::Minus);
    predicted.push(
        h + (spec.size as f64 - 1.0) + spec.v.iter().sum::<Complex64>() - spec.u[1..].iter().sum::<Complex64>(),
    );
    let anchor = predicted[..spec.size - 1]
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    let ctx = spec.elliptic;
    let (count, zeros) = zeros_in_u1(&ctx, |u1| dwpf_bruteforce(&spec.with_u1(u1)), anchor, 0.1 * ctx.half_width())?;
    let mut report = VerificationReport::new("ps_zeros_located", match_zeros(&ctx, &predicted, &zeros), tolerances::ZERO_MATCH);
    report.passed &= count == spec.size as i64;
    report.zeros = zeros;
    Ok(report)
}

/// Perk-Schultz analogues of the four properties plus the closed-form
/// comparison, one report each.
pub fn check_ps_property_suite(spec: &LatticeSpec) -> Result<Vec<VerificationReport>> {
    let ModelParams::PerkSchultz { base, omega } = &spec.model else {
        return Err(Error::InvalidSpec("expected a Perk-Schultz-type spec".into()));
    };
    let ctx = &spec.elliptic;
    let mut out = Vec::new();

    let corner = LatticeSpec::perk_schultz(*ctx, spec.u[..1].to_vec(), spec.v[..1].to_vec(), *base, *omega)?;
    let z1 = dwpf_bruteforce(&corner)?;
    let h = ps::h_scalar(base, omega, Sign::Plus, Sign::Minus);
    let c_plus = ctx.bracket(h - (spec.u[0] - spec.v[0])) / ctx.bracket(h);
    out.push(
        VerificationReport::new("ps_initial", relative_difference(z1, c_plus), tolerances::SINGLE_FACE)
            .with_ratio(quotient(z1, c_plus))
            .with_values(z1, c_plus),
    );

    let z = dwpf_bruteforce(spec)?;
    let sign = if spec.size.is_multiple_of(2) { 1.0 } else { -1.0 };
    let shifted = dwpf_bruteforce(&spec.with_u1(spec.u[0] + ctx.real_period()))?;
    out.push(VerificationReport::new(
        "ps_real_period",
        relative_difference(shifted, sign * z),
        tolerances::BRACKET,
    ));

    if spec.size >= 2 {
        let targets: Vec<Complex64> = spec.u[1..].iter().map(|u| u - 1.0).collect();
        let worst = targets
            .iter()
            .map(|&t| dwpf_bruteforce(&spec.with_u1(t)).map(|w| w.norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let mut zeros = VerificationReport::new("ps_zeros", worst / z.norm(), tolerances::BRACKET);
        zeros.zeros = targets;
        out.push(zeros);
        out.push(recursion_report(spec, "ps_recursion", tolerances::BRACKET)?);
    }

    out.push(compare_brute_closed(spec)?);
    Ok(out)
}
