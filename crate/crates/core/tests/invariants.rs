use dwpf_core::elliptic::{EllipticContext, HalfBracketArg};
use dwpf_core::felderhof::{self, admissible_boundary_tuples, ybe_residual, YbeParams};
use dwpf_core::lattice::{dwpf_bruteforce, dwpf_transfer, LatticeSpec};
use dwpf_core::ps::{self, ps_ybe_residual, Hexagon, HeightVector, OmegaMatrix, PsVertexKind};
use dwpf_core::verification::relative_difference;
use dwpf_core::SymbolicHeight;
use num_complex::Complex64;
use proptest::prelude::*;

fn complex(re: std::ops::Range<f64>, im: std::ops::Range<f64>) -> impl Strategy<Value = Complex64> {
    (re, im).prop_map(|(a, b)| Complex64::new(a, b))
}

fn real(r: std::ops::Range<f64>) -> impl Strategy<Value = Complex64> {
    r.prop_map(|a| Complex64::new(a, 0.0))
}

fn context() -> impl Strategy<Value = EllipticContext> {
    (0.01f64..0.5).prop_map(|q| EllipticContext::new(q, 1.0).unwrap())
}

proptest! {
    #[test]
    fn bracket_is_odd(ctx in context(), u in complex(-3.0..3.0, -1.0..1.0)) {
        prop_assert!(relative_difference(ctx.bracket(-u), -ctx.bracket(u)) < 1e-13);
    }

    #[test]
    fn bracket_quasi_periods(ctx in context(), u in complex(-2.0..2.0, -0.5..0.5)) {
        let b = ctx.bracket(u);
        prop_assert!(relative_difference(ctx.bracket(u + ctx.real_period()), -b) < 1e-10);
        let shifted = ctx.bracket(u + ctx.imag_period());
        prop_assert!(relative_difference(shifted, ctx.bracket_quasi_factor(u) * b) < 1e-10);
    }

    #[test]
    fn half_bracket_squares_to_bracket(ctx in context(), f in 0.01f64..1.99, drop in 0u32..6) {
        let arg = HalfBracketArg::new(Complex64::new(f, 0.0), drop);
        let root = ctx.half_bracket(arg).unwrap();
        prop_assert!(relative_difference(root * root, ctx.bracket(arg.value())) < 1e-13);
    }

    #[test]
    fn weights_depend_on_rapidity_difference(
        u in complex(0.0..0.5, -0.1..0.1),
        v in complex(0.0..0.5, -0.1..0.1),
        s in complex(-1.0..1.0, -0.2..0.2),
        t in 1.5f64..2.5,
    ) {
        let ctx = EllipticContext::default();
        let h = HeightVector::new(Complex64::new(t / 2.0, 0.0), Complex64::new(t / 2.0, 0.0));
        let om = OmegaMatrix::new(Complex64::new(0.3, 0.1));
        for kind in PsVertexKind::ALL {
            let a = ps::ps_weight(&ctx, u, v, kind, &h, &om).unwrap();
            let b = ps::ps_weight(&ctx, u + s, v + s, kind, &h, &om).unwrap();
            prop_assert!(relative_difference(a, b) < 1e-12);
        }
        let fp = |u, v| felderhof::FaceParams {
            u, v, p: Complex64::new(0.15, 0.0), q: Complex64::new(0.12, 0.0), h_tl: SymbolicHeight::real(0.07),
        };
        for kind in felderhof::FelderhofVertexKind::ALL {
            let a = felderhof::weight(&ctx, &fp(u, v), kind).unwrap();
            let b = felderhof::weight(&ctx, &fp(u + s, v + s), kind).unwrap();
            prop_assert!(relative_difference(a, b) < 1e-12);
        }
    }

    #[test]
    fn reduced_identity(
        ctx in context(),
        u in complex(-1.0..1.0, -0.3..0.3),
        v in complex(-1.0..1.0, -0.3..0.3),
        w in complex(-1.0..1.0, -0.3..0.3),
        p in complex(-1.0..1.0, -0.3..0.3),
        q in complex(-1.0..1.0, -0.3..0.3),
        r in complex(-1.0..1.0, -0.3..0.3),
        h in complex(-1.0..1.0, -0.3..0.3),
    ) {
        let (lhs, rhs) = felderhof::reduced_identity_sides(&ctx, (u, v, w), (p, q, r), h);
        prop_assert!(relative_difference(lhs, rhs) < 1e-10);
    }

    #[test]
    fn felderhof_ybe(
        u in real(0.0..0.2), v in real(0.0..0.2), w in real(0.0..0.2),
        p in real(0.05..0.2), q in real(0.05..0.2), r in real(0.05..0.2),
        h in 0.05f64..0.1,
        pick in any::<prop::sample::Index>(),
    ) {
        let ctx = EllipticContext::default();
        let tuples = admissible_boundary_tuples();
        let tuple = tuples[pick.index(tuples.len())];
        let ps = YbeParams { u, v, w, p, q, r, h: SymbolicHeight::real(h) };
        let out = ybe_residual(&ctx, &ps, tuple).unwrap();
        prop_assert!(out.relative_residual() < 1e-10, "{tuple:?}: {out:?}");
    }

    #[test]
    fn ps_ybe(
        u1 in real(0.0..0.5), u2 in real(0.0..0.5), u3 in real(0.0..0.5),
        t in 1.5f64..2.5,
        pick in any::<prop::sample::Index>(),
    ) {
        let ctx = EllipticContext::default();
        let base = HeightVector::new(Complex64::new(t / 2.0, 0.0), Complex64::new(t / 2.0, 0.0));
        let shapes = Hexagon::shapes(base);
        let hex = shapes[pick.index(shapes.len())];
        let out = ps_ybe_residual(&ctx, (u1, u2, u3), &hex, &OmegaMatrix::new(Complex64::new(0.3, 0.1))).unwrap();
        prop_assert!(out.relative_residual() < 1e-10);
    }

    #[test]
    fn transfer_equals_bruteforce(
        size in 1usize..=3,
        seeds in prop::collection::vec(0.0f64..1.0, 16),
        h in 0.05f64..0.1,
    ) {
        let at = |k: usize, lo: f64, hi: f64| Complex64::new(lo + (hi - lo) * seeds[k], 0.0);
        let l = size as f64;
        let spec = LatticeSpec::felderhof(
            EllipticContext::default(),
            (0..size).map(|k| at(k, 0.0, 0.2)).collect(),
            (0..size).map(|k| at(k + 4, 0.0, 0.2)).collect(),
            (0..size).map(|k| at(k + 8, 0.1 / l, 0.4 / l)).collect(),
            (0..size).map(|k| at(k + 12, 0.1 / l, 0.4 / l)).collect(),
            SymbolicHeight::real(h),
        ).unwrap();
        let a = dwpf_bruteforce(&spec).unwrap();
        let b = dwpf_transfer(&spec).unwrap();
        prop_assert!(relative_difference(a, b) < 1e-12);
    }
}
