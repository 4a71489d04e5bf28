//! The gl(1|1) Perk-Schultz-type elliptic height model.
//!
//! Heights take values on a target lattice spanned by `ê₊` and `ê₋`;
//! adjacent corners differ by one unit vector. Weights depend on `u − v`
//! and, for the `b` and `c` faces, on the scalar `h_{μν}` of the top-left
//! corner.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};

/// `|[x]|` below this makes a height singular.
pub const SINGULAR_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Edge label convention shared with the lattice engine: `ê₊ ↔ 0`, `ê₋ ↔ 1`.
    pub fn from_label(label: u8) -> Sign {
        if label == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightVector {
    pub plus: Complex64,
    pub minus: Complex64,
}

impl HeightVector {
    pub fn new(plus: Complex64, minus: Complex64) -> Self {
        Self { plus, minus }
    }

    pub fn component(&self, s: Sign) -> Complex64 {
        match s {
            Sign::Plus => self.plus,
            Sign::Minus => self.minus,
        }
    }

    pub fn step(&self, s: Sign) -> Self {
        self.offset(
            i32::from(s == Sign::Plus),
            i32::from(s == Sign::Minus),
        )
    }

    /// `self + n_plus·ê₊ + n_minus·ê₋`.
    pub fn offset(&self, n_plus: i32, n_minus: i32) -> Self {
        Self {
            plus: self.plus + f64::from(n_plus),
            minus: self.minus + f64::from(n_minus),
        }
    }
}

/// Antisymmetric 2×2 matrix, fixed by its `(+, −)` entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaMatrix {
    pub omega: Complex64,
}

impl OmegaMatrix {
    pub fn new(omega: Complex64) -> Self {
        Self { omega }
    }

    pub fn entry(&self, mu: Sign, nu: Sign) -> Complex64 {
        match (mu, nu) {
            (Sign::Plus, Sign::Minus) => self.omega,
            (Sign::Minus, Sign::Plus) => -self.omega,
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

/// Graded height scalar `h_{μν} = ε_μ h_μ − ε_ν h_ν + ω_{μν}` with
/// `ε_± = ±1`, so `h_{+−} = h₊ + h₋ + ω₊₋` and `h_{−+} = −h_{+−}`.
pub fn h_scalar(h: &HeightVector, omega: &OmegaMatrix, mu: Sign, nu: Sign) -> Complex64 {
    mu.value() * h.component(mu) - nu.value() * h.component(nu) + omega.entry(mu, nu)
}

/// Face type; the sign is the step type of the left edge.
///
/// With `ν = −μ`, the steps (left, top, bottom, right) are `(μ, μ, μ, μ)`
/// for `A(μ)`, `(μ, ν, ν, μ)` for `B(μ)` and `(μ, μ, ν, ν)` for `C(μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PsVertexKind {
    A(Sign),
    B(Sign),
    C(Sign),
}

/// Step types along the four edges of a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSteps {
    pub left: Sign,
    pub top: Sign,
    pub bottom: Sign,
    pub right: Sign,
}

impl PsVertexKind {
    pub const ALL: [PsVertexKind; 6] = [
        Self::A(Sign::Plus),
        Self::A(Sign::Minus),
        Self::B(Sign::Plus),
        Self::B(Sign::Minus),
        Self::C(Sign::Plus),
        Self::C(Sign::Minus),
    ];

    pub fn edge_steps(self) -> EdgeSteps {
        let (left, top, bottom, right) = match self {
            Self::A(m) => (m, m, m, m),
            Self::B(m) => (m, m.flip(), m.flip(), m),
            Self::C(m) => (m, m, m.flip(), m.flip()),
        };
        EdgeSteps {
            left,
            top,
            bottom,
            right,
        }
    }

    pub fn from_edge_steps(steps: EdgeSteps) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.edge_steps() == steps)
    }
}

pub fn ps_weight(
    ctx: &EllipticContext,
    u: Complex64,
    v: Complex64,
    kind: PsVertexKind,
    h_tl: &HeightVector,
    omega: &OmegaMatrix,
) -> Result<Complex64> {
    let b = |x: Complex64| ctx.bracket(x);
    let one = b(Complex64::new(1.0, 0.0));
    let x = u - v;
    match kind {
        PsVertexKind::A(m) => Ok(b(1.0 + m.value() * x) / one),
        PsVertexKind::B(m) => {
            let hs = h_scalar(h_tl, omega, m, m.flip());
            let den = guarded(ctx, hs)?;
            Ok(b(x) * b(hs - 1.0) / (one * den))
        }
        PsVertexKind::C(m) => {
            let hs = h_scalar(h_tl, omega, m, m.flip());
            let den = guarded(ctx, hs)?;
            Ok(b(hs - x) / den)
        }
    }
}

fn guarded(ctx: &EllipticContext, arg: Complex64) -> Result<Complex64> {
    let value = ctx.bracket(arg);
    if value.norm() < SINGULAR_GUARD {
        return Err(Error::SingularHeight {
            argument: arg,
            modulus: value.norm(),
        });
    }
    Ok(value)
}

/// Target-lattice point relative to a base height.
pub type LatticePoint = (i32, i32);

fn unit_step(from: LatticePoint, to: LatticePoint) -> Option<Sign> {
    match (to.0 - from.0, to.1 - from.1) {
        (1, 0) => Some(Sign::Plus),
        (0, 1) => Some(Sign::Minus),
        _ => None,
    }
}

/// Weight of a face from its corner points; zero unless all four edges are
/// unit steps forming one of the six patterns.
pub fn face_weight(
    ctx: &EllipticContext,
    u: Complex64,
    v: Complex64,
    base: &HeightVector,
    omega: &OmegaMatrix,
    [tl, tr, bl, br]: [LatticePoint; 4],
) -> Result<Complex64> {
    let steps = (|| {
        Some(EdgeSteps {
            left: unit_step(tl, bl)?,
            top: unit_step(tl, tr)?,
            bottom: unit_step(bl, br)?,
            right: unit_step(tr, br)?,
        })
    })();
    match steps.and_then(PsVertexKind::from_edge_steps) {
        Some(kind) => ps_weight(ctx, u, v, kind, &base.offset(tl.0, tl.1), omega),
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// External corners of a Yang-Baxter hexagon, as target-lattice points
/// relative to `base`. `b` is the top corner; `a`, `f`, `e` run down the
/// left side and `c`, `d` down the right side to `e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hexagon {
    pub base: HeightVector,
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub c: LatticePoint,
    pub d: LatticePoint,
    pub e: LatticePoint,
    pub f: LatticePoint,
}

impl Hexagon {
    pub fn is_admissible(&self) -> bool {
        let adj = |x, y| unit_step(x, y).is_some();
        adj(self.b, self.a)
            && adj(self.b, self.c)
            && adj(self.a, self.f)
            && adj(self.c, self.d)
            && adj(self.f, self.e)
            && adj(self.d, self.e)
    }

    /// All admissible hexagons with `b` at the origin.
    pub fn shapes(base: HeightVector) -> Vec<Hexagon> {
        let steps = [(1, 0), (0, 1)];
        let add = |x: LatticePoint, s: (i32, i32)| (x.0 + s.0, x.1 + s.1);
        let mut out = Vec::new();
        for s0 in steps {
            for s1 in steps {
                for s2 in steps {
                    for s3 in steps {
                        for s4 in steps {
                            let b = (0, 0);
                            let a = add(b, s0);
                            let c = add(b, s1);
                            let d = add(c, s2);
                            let f = add(a, s3);
                            let e = add(f, s4);
                            let hex = Hexagon { base, a, b, c, d, e, f };
                            if hex.is_admissible() {
                                out.push(hex);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsYbeOutcome {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// True for inadmissible hexagons, whose sides vanish identically.
    pub vacuous: bool,
}

impl PsYbeOutcome {
    pub fn relative_residual(&self) -> f64 {
        let scale = self.lhs.norm().max(self.rhs.norm());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).norm() / scale
        }
    }
}

/// Both sides of the Yang-Baxter equation around `hex`. The internal
/// height `g` only ranges over points adjacent to its neighbours.
pub fn ps_ybe_residual(
    ctx: &EllipticContext,
    (u1, u2, u3): (Complex64, Complex64, Complex64),
    hex: &Hexagon,
    omega: &OmegaMatrix,
) -> Result<PsYbeOutcome> {
    let zero = Complex64::new(0.0, 0.0);
    if !hex.is_admissible() {
        return Ok(PsYbeOutcome {
            lhs: zero,
            rhs: zero,
            vacuous: true,
        });
    }
    let Hexagon { base, a, b, c, d, e, f } = *hex;
    let w = |x: Complex64, y: Complex64, corners| face_weight(ctx, x, y, &base, omega, corners);
    let candidates = |from: LatticePoint| [(from.0 + 1, from.1), (from.0, from.1 + 1)];

    let mut lhs = zero;
    for g in candidates(b) {
        lhs += w(u1, u2, [b, g, a, f])? * w(u1, u3, [g, d, f, e])? * w(u2, u3, [b, c, g, d])?;
    }
    let mut rhs = zero;
    for g in candidates(a) {
        rhs += w(u2, u3, [a, g, f, e])? * w(u1, u3, [b, c, a, g])? * w(u1, u2, [c, d, g, e])?;
    }
    Ok(PsYbeOutcome {
        lhs,
        rhs,
        vacuous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn omega() -> OmegaMatrix {
        OmegaMatrix::new(c(0.3, 0.1))
    }

    #[test]
    fn h_scalar_examples() {
        let h = HeightVector::new(c(0.7, 0.0), c(1.1, 0.0));
        let zero = OmegaMatrix::new(c(0.0, 0.0));
        assert_eq!(h_scalar(&h, &zero, Sign::Plus, Sign::Minus), c(1.8, 0.0));
        let w = omega();
        let pm = h_scalar(&h, &w, Sign::Plus, Sign::Minus);
        assert!((pm - c(2.1, 0.1)).norm() < 1e-15);
        assert!((h_scalar(&h, &w, Sign::Minus, Sign::Plus) + pm).norm() < 1e-15);
        let stepped = h_scalar(&h.step(Sign::Plus), &w, Sign::Plus, Sign::Minus);
        assert!((stepped - pm - 1.0).norm() < 1e-15);
    }

    #[test]
    fn weights_at_equal_rapidities() {
        let ctx = EllipticContext::default();
        let h = HeightVector::new(c(1.0, 0.0), c(0.9, 0.0));
        let u = c(0.37, 0.02);
        for m in [Sign::Plus, Sign::Minus] {
            let a = ps_weight(&ctx, u, u, PsVertexKind::A(m), &h, &omega()).unwrap();
            assert!((a - 1.0).norm() < 1e-15);
            let b = ps_weight(&ctx, u, u, PsVertexKind::B(m), &h, &omega()).unwrap();
            assert!(b.norm() < 1e-15);
            let cc = ps_weight(&ctx, u, u, PsVertexKind::C(m), &h, &omega()).unwrap();
            assert!((cc - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn a_weight_product_identity() {
        let ctx = EllipticContext::default();
        let h = HeightVector::new(c(1.0, 0.0), c(0.9, 0.0));
        let (u, v) = (c(0.41, 0.1), c(0.13, -0.05));
        let ap = ps_weight(&ctx, u, v, PsVertexKind::A(Sign::Plus), &h, &omega()).unwrap();
        let am = ps_weight(&ctx, u, v, PsVertexKind::A(Sign::Minus), &h, &omega()).unwrap();
        let one = ctx.bracket(c(1.0, 0.0));
        let want = ctx.bracket(1.0 + (u - v)) * ctx.bracket(1.0 - (u - v)) / (one * one);
        assert!((ap * am - want).norm() < 1e-14);
    }

    #[test]
    fn singular_height_is_reported() {
        let ctx = EllipticContext::default();
        let h = HeightVector::new(c(1.0, 0.0), c(1.0, 0.0));
        let w = OmegaMatrix::new(c(0.0, 0.0));
        let err = ps_weight(&ctx, c(0.1, 0.0), c(0.0, 0.0), PsVertexKind::C(Sign::Plus), &h, &w);
        assert!(matches!(err, Err(Error::SingularHeight { .. })));
    }

    #[test]
    fn patterns_conserve_step_multisets() {
        for kind in PsVertexKind::ALL {
            let s = kind.edge_steps();
            let mut lb = [s.left.label(), s.bottom.label()];
            let mut tr = [s.top.label(), s.right.label()];
            lb.sort();
            tr.sort();
            assert_eq!(lb, tr, "{kind:?}");
            assert_eq!(PsVertexKind::from_edge_steps(s), Some(kind));
        }
    }

    #[test]
    fn there_are_twenty_hexagon_shapes() {
        let base = HeightVector::new(c(0.6, 0.0), c(0.4, 0.0));
        assert_eq!(Hexagon::shapes(base).len(), 20);
    }

    #[test]
    fn all_plus_hexagon_is_exact() {
        let ctx = EllipticContext::default();
        let base = HeightVector::new(c(0.6, 0.0), c(0.4, 0.0));
        let hex = Hexagon {
            base,
            b: (0, 0),
            a: (1, 0),
            c: (1, 0),
            f: (2, 0),
            d: (2, 0),
            e: (3, 0),
        };
        let rap = (c(0.3, 0.0), c(0.1, 0.0), c(-0.2, 0.0));
        let out = ps_ybe_residual(&ctx, rap, &hex, &omega()).unwrap();
        assert_eq!(out.lhs, out.rhs);
    }

    #[test]
    fn ybe_holds_on_every_shape() {
        let ctx = EllipticContext::default();
        let base = HeightVector::new(c(0.6, 0.05), c(0.4, 0.0));
        let rap = (c(0.3, 0.05), c(0.1, 0.0), c(-0.2, 0.1));
        for hex in Hexagon::shapes(base) {
            let out = ps_ybe_residual(&ctx, rap, &hex, &omega()).unwrap();
            assert!(out.relative_residual() < 1e-10, "{hex:?}: {out:?}");
        }
    }

    #[test]
    fn inadmissible_hexagon_is_vacuous() {
        let ctx = EllipticContext::default();
        let mut hex = Hexagon::shapes(HeightVector::new(c(0.6, 0.0), c(0.4, 0.0)))[0];
        hex.e = (7, 7);
        let out = ps_ybe_residual(&ctx, (c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0)), &hex, &omega()).unwrap();
        assert!(out.vacuous);
    }
}
