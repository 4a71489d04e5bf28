//! Seeded parameter draws. Library operations stay pure; all randomness
//! lives here.

use dwpf_core::elliptic::EllipticContext;
use dwpf_core::felderhof::YbeParams;
use dwpf_core::lattice::LatticeSpec;
use dwpf_core::ps::{Hexagon, HeightVector, OmegaMatrix};
use dwpf_core::{ModelKind, Result, SymbolicHeight};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Explicit, RunConfig};

pub const PS_OMEGA: Complex64 = Complex64::new(0.3, 0.1);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn reals<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.random_range(lo..hi), 0.0)).collect()
}

/// Spec drawn from the default regime with the default elliptic context.
pub fn sample_spec(model: ModelKind, size: usize, seed: u64) -> LatticeSpec {
    sample_spec_in(EllipticContext::default(), model, size, seed).expect("default regime is admissible")
}

/// Felderhof: `u, v ∈ (0, 0.2)`, `p, q ∈ (0.1/L, 0.4/L)`, `h ∈ (0.05, 0.1)`.
/// PS: `u, v ∈ (0, 0.5)`, `ω = 0.3 + 0.1i`, base `(t/2, t/2)` with
/// `t ∈ (1.5, 2.5)`.
pub fn sample_spec_in(ctx: EllipticContext, model: ModelKind, size: usize, seed: u64) -> Result<LatticeSpec> {
    let mut r = rng(seed);
    match model {
        ModelKind::Felderhof => {
            let l = size as f64;
            let u = reals(&mut r, size, 0.0, 0.2);
            let v = reals(&mut r, size, 0.0, 0.2);
            let p = reals(&mut r, size, 0.1 / l, 0.4 / l);
            let q = reals(&mut r, size, 0.1 / l, 0.4 / l);
            let h = r.random_range(0.05..0.1);
            LatticeSpec::felderhof(ctx, u, v, p, q, SymbolicHeight::real(h))
        }
        ModelKind::PerkSchultz => {
            let u = reals(&mut r, size, 0.0, 0.5);
            let v = reals(&mut r, size, 0.0, 0.5);
            let t: f64 = r.random_range(1.5..2.5);
            let half = Complex64::new(t / 2.0, 0.0);
            LatticeSpec::perk_schultz(ctx, u, v, HeightVector::new(half, half), OmegaMatrix::new(PS_OMEGA))
        }
    }
}

fn lift(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Spec for sample `index` of a run: sampled with seed `seed + index`,
/// then overridden by any explicit lists.
pub fn spec_for_run(cfg: &RunConfig, index: usize) -> Result<LatticeSpec> {
    let ctx = EllipticContext::new(cfg.nome, 1.0)?;
    let seed = cfg.seed.wrapping_add(index as u64);
    if cfg.explicit.is_empty() {
        return sample_spec_in(ctx, cfg.model, cfg.size, seed);
    }
    let mut spec = sample_spec_in(ctx, cfg.model, cfg.size, seed)?;
    let Explicit { u, v, p, q, h } = &cfg.explicit;
    if let Some(u) = u {
        spec.u = lift(u);
    }
    if let Some(v) = v {
        spec.v = lift(v);
    }
    match &mut spec.model {
        dwpf_core::ModelParams::Felderhof { p: sp, q: sq, base } => {
            if let Some(p) = p {
                *sp = lift(p);
            }
            if let Some(q) = q {
                *sq = lift(q);
            }
            if let Some(h) = h {
                *base = SymbolicHeight::real(*h);
            }
            spec.check_regime()?;
        }
        dwpf_core::ModelParams::PerkSchultz { base, .. } => {
            if let Some(h) = h {
                let half = Complex64::new(h / 2.0, 0.0);
                *base = HeightVector::new(half, half);
            }
        }
    }
    Ok(spec)
}

/// Yang-Baxter draw: rapidities in `(0, 0.2)`, fields in `(0.05, 0.2)`,
/// base height in `(0.05, 0.1)`.
pub fn sample_ybe<R: Rng>(rng: &mut R) -> YbeParams {
    let mut x = |lo: f64, hi: f64| Complex64::new(rng.random_range(lo..hi), 0.0);
    YbeParams {
        u: x(0.0, 0.2),
        v: x(0.0, 0.2),
        w: x(0.0, 0.2),
        p: x(0.05, 0.2),
        q: x(0.05, 0.2),
        r: x(0.05, 0.2),
        h: SymbolicHeight::new(x(0.05, 0.1), 0),
    }
}

/// Complex draw for the three-term bracket identity.
pub fn sample_identity<R: Rng>(rng: &mut R) -> [Complex64; 7] {
    std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-0.3..0.3)))
}

/// Random admissible hexagon with three rapidities in `(0, 0.5)`.
pub fn sample_hexagon<R: Rng>(rng: &mut R) -> ((Complex64, Complex64, Complex64), Hexagon) {
    let mut x = || Complex64::new(rng.random_range(0.0..0.5), 0.0);
    let us = (x(), x(), x());
    let t: f64 = rng.random_range(1.5..2.5);
    let half = Complex64::new(t / 2.0, 0.0);
    let shapes = Hexagon::shapes(HeightVector::new(half, half));
    let hex = shapes[rng.random_range(0..shapes.len())];
    (us, hex)
}
