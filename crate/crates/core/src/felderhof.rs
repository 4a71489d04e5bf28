//! Felderhof-type elliptic height model with external fields.
//!
//! A face with top-left height `h`, horizontal line `(u, p)` and vertical
//! line `(v, q)` has corners
//!
//! ```text
//! h            h + q − Δ₁
//! h + p − Δ₂   h + q + p − Δ₃
//! ```
//!
//! and six non-zero weights. Heights are carried as [`SymbolicHeight`] so
//! the half brackets in the `b` and `c` weights can follow the
//! `i^n` branch convention of [`EllipticContext::half_bracket`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{EllipticContext, HalfBracketArg};
use crate::error::{Error, Result};

/// A height split into its field-affine part and an integer number of
/// unit drops. Its numeric value is `affine − drop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolicHeight {
    pub affine: Complex64,
    pub drop: u32,
}

impl SymbolicHeight {
    pub fn new(affine: Complex64, drop: u32) -> Self {
        Self { affine, drop }
    }

    pub fn real(affine: f64) -> Self {
        Self::new(Complex64::new(affine, 0.0), 0)
    }

    pub fn value(&self) -> Complex64 {
        self.affine - f64::from(self.drop)
    }

    /// `self + field − drop`.
    pub fn step(&self, field: Complex64, drop: u32) -> Self {
        Self::new(self.affine + field, self.drop + drop)
    }

    /// Argument `2(self + extra)` for a half bracket.
    fn doubled(&self, extra: Complex64) -> HalfBracketArg {
        HalfBracketArg::new(2.0 * (self.affine + extra), self.drop)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FelderhofVertexKind {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    CPlus,
    CMinus,
}

/// Unit drops across the left, top, bottom and right edges of a face.
///
/// The height changes by `p − left` down the left edge, `q − top` along
/// the top edge, `q − bottom` along the bottom edge and `p − right` down
/// the right edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeLabels {
    pub left: u8,
    pub top: u8,
    pub bottom: u8,
    pub right: u8,
}

impl EdgeLabels {
    pub const fn new(left: u8, top: u8, bottom: u8, right: u8) -> Self {
        Self {
            left,
            top,
            bottom,
            right,
        }
    }

    /// The per-face conservation law `left + bottom = top + right`.
    pub fn is_conserving(&self) -> bool {
        self.left + self.bottom == self.top + self.right
    }
}

impl FelderhofVertexKind {
    pub const ALL: [FelderhofVertexKind; 6] = [
        Self::APlus,
        Self::AMinus,
        Self::BPlus,
        Self::BMinus,
        Self::CPlus,
        Self::CMinus,
    ];

    /// `(Δ₁, Δ₂, Δ₃)`.
    pub fn deltas(self) -> (i32, i32, i32) {
        match self {
            Self::APlus => (0, 0, 0),
            Self::AMinus => (1, 1, 2),
            Self::BPlus => (1, 0, 1),
            Self::BMinus => (0, 1, 1),
            Self::CPlus => (0, 0, 1),
            Self::CMinus => (1, 1, 1),
        }
    }

    pub fn edge_labels(self) -> EdgeLabels {
        match self {
            Self::APlus => EdgeLabels::new(0, 0, 0, 0),
            Self::AMinus => EdgeLabels::new(1, 1, 1, 1),
            Self::BPlus => EdgeLabels::new(0, 1, 1, 0),
            Self::BMinus => EdgeLabels::new(1, 0, 0, 1),
            Self::CPlus => EdgeLabels::new(0, 0, 1, 1),
            Self::CMinus => EdgeLabels::new(1, 1, 0, 0),
        }
    }

    pub fn from_edge_labels(labels: EdgeLabels) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.edge_labels() == labels)
    }
}

/// Kind of the face whose corner drops relative to the top-left corner are
/// `(Δ₁, Δ₂, Δ₃)` (top-right, bottom-left, bottom-right).
pub fn classify_face(deltas: (i32, i32, i32)) -> Result<FelderhofVertexKind> {
    FelderhofVertexKind::ALL
        .into_iter()
        .find(|k| k.deltas() == deltas)
        .ok_or(Error::ZeroWeightFace(deltas))
}

/// Rapidities, fields and top-left height of one face.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaceParams {
    pub u: Complex64,
    pub v: Complex64,
    pub p: Complex64,
    pub q: Complex64,
    pub h_tl: SymbolicHeight,
}

pub fn weight(ctx: &EllipticContext, fp: &FaceParams, kind: FelderhofVertexKind) -> Result<Complex64> {
    use FelderhofVertexKind::*;
    let FaceParams { u, v, p, q, h_tl: h } = *fp;
    let br = |x: Complex64| ctx.bracket(x);
    let half = |arg: HalfBracketArg| ctx.half_bracket(arg);
    let zero = Complex64::new(0.0, 0.0);

    match kind {
        APlus => Ok(br(u - v + p + q)),
        AMinus => Ok(br(v - u + p + q)),
        BPlus | BMinus => {
            let ratio = half(h.doubled(zero))? * half(h.doubled(p + q))?
                / (half(h.doubled(p))? * half(h.doubled(q))?);
            let arg = if kind == BPlus { u - v + q - p } else { u - v + p - q };
            Ok(ratio * br(arg))
        }
        CPlus | CMinus => {
            let ratio = half(HalfBracketArg::new(2.0 * p, 0))? * half(HalfBracketArg::new(2.0 * q, 0))?
                / (half(h.doubled(p))? * half(h.doubled(q))?);
            let two_h = 2.0 * h.value();
            let arg = if kind == CPlus {
                v - u + p + q + two_h
            } else {
                u - v + p + q + two_h
            };
            Ok(ratio * br(arg))
        }
    }
}

/// Weight of a face given its four corners; zero when the corner drops are
/// not one of the six admissible patterns.
pub fn face_weight(
    ctx: &EllipticContext,
    (u, v): (Complex64, Complex64),
    (p, q): (Complex64, Complex64),
    [tl, tr, bl, br]: [SymbolicHeight; 4],
) -> Result<Complex64> {
    let d = |x: SymbolicHeight| x.drop as i32 - tl.drop as i32;
    match classify_face((d(tr), d(bl), d(br))) {
        Ok(kind) => weight(ctx, &FaceParams { u, v, p, q, h_tl: tl }, kind),
        Err(Error::ZeroWeightFace(_)) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// Parameters of one Yang-Baxter instance: three lines `(u, p)`, `(v, q)`,
/// `(w, r)` around the base height `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YbeParams {
    pub u: Complex64,
    pub v: Complex64,
    pub w: Complex64,
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub h: SymbolicHeight,
}

/// Boundary drops `(k, l, m, n, o)` of the Yang-Baxter hexagon.
pub type BoundaryTuple = (u32, u32, u32, u32, u32);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YbeOutcome {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// True when neither side has a single non-zero-weight term.
    pub vacuous: bool,
}

impl YbeOutcome {
    pub fn residual(&self) -> Complex64 {
        self.lhs - self.rhs
    }

    pub fn relative_residual(&self) -> f64 {
        let scale = self.lhs.norm().max(self.rhs.norm());
        if scale == 0.0 {
            0.0
        } else {
            self.residual().norm() / scale
        }
    }
}

/// Largest internal drop tried in the Yang-Baxter sums.
const MAX_INTERNAL_DROP: u32 = 3;

/// Both sides of the Yang-Baxter equation for one boundary tuple.
pub fn ybe_residual(ctx: &EllipticContext, ps: &YbeParams, boundary: BoundaryTuple) -> Result<YbeOutcome> {
    let YbeParams { u, v, w, p, q, r, h } = *ps;
    let (k, l, m, n, o) = boundary;
    let at = |field: Complex64, drop: u32| h.step(field, drop);
    let zero = Complex64::new(0.0, 0.0);

    let mut lhs = zero;
    let mut rhs = zero;
    let mut structural = false;
    for j in 0..=MAX_INTERNAL_DROP {
        let left = [
            (
                (u, v),
                (p, q),
                [at(zero, 0), at(q, j), at(p, o), at(q + p, n)],
            ),
            (
                (u, w),
                (p, r),
                [at(q, j), at(q + r, l), at(q + p, n), at(q + r + p, m)],
            ),
            (
                (v, w),
                (q, r),
                [at(zero, 0), at(r, k), at(q, j), at(r + q, l)],
            ),
        ];
        let right = [
            (
                (u, v),
                (p, q),
                [at(r, k), at(r + q, l), at(r + p, j), at(r + q + p, m)],
            ),
            (
                (u, w),
                (p, r),
                [at(zero, 0), at(r, k), at(p, o), at(r + p, j)],
            ),
            (
                (v, w),
                (q, r),
                [at(p, o), at(p + r, j), at(p + q, n), at(p + r + q, m)],
            ),
        ];
        for (faces, acc) in [(left, &mut lhs), (right, &mut rhs)] {
            if faces.iter().all(|(_, _, c)| is_admissible(c)) {
                structural = true;
                let mut term = Complex64::new(1.0, 0.0);
                for (rap, fields, corners) in faces {
                    term *= face_weight(ctx, rap, fields, corners)?;
                }
                *acc += term;
            }
        }
    }
    Ok(YbeOutcome {
        lhs,
        rhs,
        vacuous: !structural,
    })
}

fn is_admissible([tl, tr, bl, br]: &[SymbolicHeight; 4]) -> bool {
    let d = |x: &SymbolicHeight| x.drop as i32 - tl.drop as i32;
    classify_face((d(tr), d(bl), d(br))).is_ok()
}

/// Every boundary tuple for which at least one side of the Yang-Baxter
/// equation has a non-zero-weight term, derived from the six-kind table.
pub fn admissible_boundary_tuples() -> Vec<BoundaryTuple> {
    let ctx = EllipticContext::default();
    let probe = YbeParams {
        u: Complex64::new(0.1, 0.0),
        v: Complex64::new(0.05, 0.0),
        w: Complex64::new(0.02, 0.0),
        p: Complex64::new(0.1, 0.0),
        q: Complex64::new(0.12, 0.0),
        r: Complex64::new(0.14, 0.0),
        h: SymbolicHeight::real(0.07),
    };
    let range = 0..=MAX_INTERNAL_DROP;
    let mut out = Vec::new();
    for k in range.clone() {
        for l in range.clone() {
            for m in range.clone() {
                for n in range.clone() {
                    for o in range.clone() {
                        let t = (k, l, m, n, o);
                        let outcome = ybe_residual(&ctx, &probe, t).expect("probe stays in regime");
                        if !outcome.vacuous {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    out
}

/// The three-term bracket identity the `(0,1,1,1,1)` Yang-Baxter equation
/// reduces to once the half brackets are cancelled. Returns `LHS − RHS`.
pub fn reduced_identity_residual(
    ctx: &EllipticContext,
    (u, v, w): (Complex64, Complex64, Complex64),
    (p, q, r): (Complex64, Complex64, Complex64),
    h: Complex64,
) -> Complex64 {
    let (lhs, rhs) = reduced_identity_sides(ctx, (u, v, w), (p, q, r), h);
    lhs - rhs
}

pub fn reduced_identity_sides(
    ctx: &EllipticContext,
    (u, v, w): (Complex64, Complex64, Complex64),
    (p, q, r): (Complex64, Complex64, Complex64),
    h: Complex64,
) -> (Complex64, Complex64) {
    let b = |x: Complex64| ctx.bracket(x);
    let lhs = b(u - v + p + q + 2.0 * h) * b(u - w + p + r) * b(v - w + q - r) * b(2.0 * (h + q + r))
        + b(u - v + p - q) * b(u - w + p + r + 2.0 * (h + q)) * b(w - v + q + r + 2.0 * h) * b(2.0 * r);
    let rhs = b(u - v + p + q + 2.0 * (h + r)) * b(u - w + p - r) * b(v - w + q + r) * b(2.0 * (h + q));
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn classify_known_faces() {
        assert_eq!(classify_face((0, 0, 0)).unwrap(), FelderhofVertexKind::APlus);
        assert_eq!(classify_face((0, 0, 1)).unwrap(), FelderhofVertexKind::CPlus);
        assert_eq!(classify_face((1, 0, 0)), Err(Error::ZeroWeightFace((1, 0, 0))));
    }

    #[test]
    fn classify_round_trips() {
        for kind in FelderhofVertexKind::ALL {
            assert_eq!(classify_face(kind.deltas()).unwrap(), kind);
        }
    }

    #[test]
    fn edge_labels_follow_from_corner_drops() {
        for kind in FelderhofVertexKind::ALL {
            let (d1, d2, d3) = kind.deltas();
            let want = EdgeLabels::new(d2 as u8, d1 as u8, (d3 - d2) as u8, (d3 - d1) as u8);
            assert_eq!(kind.edge_labels(), want, "{kind:?}");
            assert!(kind.edge_labels().is_conserving());
            assert_eq!(FelderhofVertexKind::from_edge_labels(want), Some(kind));
        }
    }

    #[test]
    fn six_kinds_are_all_conserving_labelings() {
        let mut n = 0;
        for bits in 0u8..16 {
            let l = EdgeLabels::new(bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1);
            if l.is_conserving() {
                n += 1;
                assert!(FelderhofVertexKind::from_edge_labels(l).is_some());
            }
        }
        assert_eq!(n, 6);
    }

    fn params(u: f64, v: f64) -> FaceParams {
        FaceParams {
            u: c(u),
            v: c(v),
            p: c(0.21),
            q: c(0.17),
            h_tl: SymbolicHeight::real(0.08),
        }
    }

    #[test]
    fn a_weights_vanish_on_their_zero_loci() {
        let ctx = EllipticContext::default();
        let a = weight(&ctx, &params(0.4 - 0.21 - 0.17, 0.4), FelderhofVertexKind::APlus).unwrap();
        assert!(a.norm() < 1e-16);
        let a = weight(&ctx, &params(0.4 + 0.21 + 0.17, 0.4), FelderhofVertexKind::AMinus).unwrap();
        assert!(a.norm() < 1e-16);
    }

    #[test]
    fn symmetric_fields_swap_a_weights() {
        let ctx = EllipticContext::default();
        let half = |u: f64, v: f64| FaceParams {
            p: c(0.5),
            q: c(0.5),
            ..params(u, v)
        };
        let ap = weight(&ctx, &half(0.13, 0.04), FelderhofVertexKind::APlus).unwrap();
        let am = weight(&ctx, &half(0.04, 0.13), FelderhofVertexKind::AMinus).unwrap();
        assert!((ap - am).norm() < 1e-15);
        assert!((ap - ctx.bracket(c(0.13 - 0.04 + 1.0))).norm() < 1e-15);
    }

    #[test]
    fn squared_weights_are_bracket_ratios() {
        let ctx = EllipticContext::default();
        for drop in 0..4 {
            let fp = FaceParams {
                h_tl: SymbolicHeight::new(c(0.08), drop),
                ..params(0.11, 0.03)
            };
            let h = fp.h_tl.value();
            let b = |x: Complex64| ctx.bracket(x);
            let bp = weight(&ctx, &fp, FelderhofVertexKind::BPlus).unwrap();
            let want = b(2.0 * h) * b(2.0 * (h + fp.p + fp.q)) / (b(2.0 * (h + fp.p)) * b(2.0 * (h + fp.q)))
                * b(fp.u - fp.v + fp.q - fp.p).powi(2);
            assert!((bp * bp - want).norm() < 1e-13 * want.norm());
            let cm = weight(&ctx, &fp, FelderhofVertexKind::CMinus).unwrap();
            let want = b(2.0 * fp.p) * b(2.0 * fp.q) / (b(2.0 * (h + fp.p)) * b(2.0 * (h + fp.q)))
                * b(fp.u - fp.v + fp.p + fp.q + 2.0 * h).powi(2);
            assert!((cm * cm - want).norm() < 1e-13 * want.norm());
        }
    }

    #[test]
    fn regime_violation_propagates() {
        let ctx = EllipticContext::default();
        let fp = FaceParams {
            h_tl: SymbolicHeight::real(1.3),
            ..params(0.1, 0.0)
        };
        assert!(matches!(
            weight(&ctx, &fp, FelderhofVertexKind::CPlus),
            Err(Error::RegimeViolation { .. })
        ));
        assert!(weight(&ctx, &fp, FelderhofVertexKind::APlus).is_ok());
    }

    fn ybe_params() -> YbeParams {
        YbeParams {
            u: c(0.13),
            v: c(0.07),
            w: c(0.16),
            p: c(0.11),
            q: c(0.18),
            r: c(0.09),
            h: SymbolicHeight::real(0.06),
        }
    }

    #[test]
    fn ybe_example_tuple() {
        let ctx = EllipticContext::default();
        let out = ybe_residual(&ctx, &ybe_params(), (0, 1, 1, 1, 1)).unwrap();
        assert!(!out.vacuous);
        assert!(out.lhs.norm() > 0.0);
        assert!(out.relative_residual() < 1e-10, "{out:?}");
    }

    #[test]
    fn vacuous_tuple_is_flagged() {
        let ctx = EllipticContext::default();
        let out = ybe_residual(&ctx, &ybe_params(), (3, 0, 0, 0, 3)).unwrap();
        assert!(out.vacuous);
        assert_eq!(out.residual(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn ybe_holds_for_all_admissible_tuples() {
        let ctx = EllipticContext::default();
        let tuples = admissible_boundary_tuples();
        assert!(tuples.contains(&(0, 1, 1, 1, 1)));
        for t in tuples {
            let out = ybe_residual(&ctx, &ybe_params(), t).unwrap();
            assert!(out.relative_residual() < 1e-10, "{t:?}: {out:?}");
        }
    }

    #[test]
    fn reduced_identity_at_constant_fixing_point() {
        let ctx = EllipticContext::default();
        let (v, w, p, q, r, h) = (c(0.3), c(-0.2), c(0.15), c(0.22), c(0.31), c(0.4));
        let u = v - p + q;
        let (lhs, rhs) = reduced_identity_sides(&ctx, (u, v, w), (p, q, r), h);
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(rhs.norm()));
    }

    #[test]
    fn reduced_identity_invariant_under_height_period() {
        let ctx = EllipticContext::default();
        let rap = (Complex64::new(0.3, 0.1), c(0.1), Complex64::new(-0.2, 0.05));
        let fields = (c(0.15), Complex64::new(0.22, -0.1), c(0.31));
        let h = Complex64::new(0.4, 0.02);
        let (lhs, _) = reduced_identity_sides(&ctx, rap, fields, h);
        let r0 = reduced_identity_residual(&ctx, rap, fields, h);
        let r1 = reduced_identity_residual(&ctx, rap, fields, h + ctx.real_period());
        assert!((r0 - r1).norm() < 1e-10 * lhs.norm());
    }
}
