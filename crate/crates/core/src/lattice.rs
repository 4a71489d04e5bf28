//! Domain wall boundary conditions, configuration enumeration and the two
//! partition-function evaluators (brute force and row transfer).
//!
//! Both models share one edge-label language: every edge carries a label
//! in `{0, 1}`. For the Felderhof-type model the label is the unit drop of
//! the height across the edge; for the Perk-Schultz-type model `0` is an
//! `ê₊` step and `1` an `ê₋` step. Face `(i, j)` has left edge
//! `vertical(i, j)`, right edge `vertical(i, j + 1)`, top edge
//! `horizontal(i, j)` and bottom edge `horizontal(i + 1, j)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{EllipticContext, HalfBracketArg};
use crate::error::{Error, Result};
use crate::felderhof::{self, EdgeLabels, FaceParams, FelderhofVertexKind, SymbolicHeight};
use crate::ps::{self, HeightVector, OmegaMatrix, PsVertexKind, Sign};

/// Largest lattice the CLI enumerates configuration by configuration.
pub const BRUTE_FORCE_MAX: usize = 6;

/// Largest lattice the transfer evaluator accepts.
pub const MAX_TRANSFER_SIZE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Felderhof,
    #[serde(rename = "ps")]
    PerkSchultz,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Felderhof => f.write_str("felderhof"),
            ModelKind::PerkSchultz => f.write_str("ps"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelParams {
    Felderhof {
        p: Vec<Complex64>,
        q: Vec<Complex64>,
        base: SymbolicHeight,
    },
    PerkSchultz {
        base: HeightVector,
        omega: OmegaMatrix,
    },
}

/// Everything needed to define one domain wall partition function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub size: usize,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub model: ModelParams,
    pub elliptic: EllipticContext,
}

impl LatticeSpec {
    /// Felderhof-type spec; rejects inputs whose half brackets leave the
    /// positive-real regime.
    pub fn felderhof(
        elliptic: EllipticContext,
        u: Vec<Complex64>,
        v: Vec<Complex64>,
        p: Vec<Complex64>,
        q: Vec<Complex64>,
        base: SymbolicHeight,
    ) -> Result<Self> {
        let spec = Self::felderhof_unchecked(elliptic, u, v, p, q, base)?;
        spec.check_regime()?;
        Ok(spec)
    }

    /// Felderhof-type spec without the regime guard; weight evaluation can
    /// then fail with `RegimeViolation`.
    pub fn felderhof_unchecked(
        elliptic: EllipticContext,
        u: Vec<Complex64>,
        v: Vec<Complex64>,
        p: Vec<Complex64>,
        q: Vec<Complex64>,
        base: SymbolicHeight,
    ) -> Result<Self> {
        let size = u.len();
        if p.len() != size || q.len() != size {
            return Err(Error::InvalidSpec(format!(
                "field lists must have length {size}, got {} and {}",
                p.len(),
                q.len()
            )));
        }
        let spec = Self {
            size,
            u,
            v,
            model: ModelParams::Felderhof { p, q, base },
            elliptic,
        };
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn perk_schultz(
        elliptic: EllipticContext,
        u: Vec<Complex64>,
        v: Vec<Complex64>,
        base: HeightVector,
        omega: OmegaMatrix,
    ) -> Result<Self> {
        let spec = Self {
            size: u.len(),
            u,
            v,
            model: ModelParams::PerkSchultz { base, omega },
            elliptic,
        };
        spec.check_shape()?;
        Ok(spec)
    }

    fn check_shape(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidSpec("lattice size must be positive".into()));
        }
        if self.v.len() != self.size {
            return Err(Error::InvalidSpec(format!(
                "rapidity lists must have equal length, got {} and {}",
                self.size,
                self.v.len()
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> ModelKind {
        match self.model {
            ModelParams::Felderhof { .. } => ModelKind::Felderhof,
            ModelParams::PerkSchultz { .. } => ModelKind::PerkSchultz,
        }
    }

    /// Evaluates every half bracket a Felderhof configuration can touch:
    /// `[2p_i]`, `[2q_j]` and `[2(h + P_i + Q_j + δ)]` for the four corner
    /// offsets `δ` of each face. No-op for the PS model.
    pub fn check_regime(&self) -> Result<()> {
        let ModelParams::Felderhof { p, q, base } = &self.model else {
            return Ok(());
        };
        let ctx = &self.elliptic;
        for x in p.iter().chain(q) {
            ctx.half_bracket(HalfBracketArg::new(2.0 * x, 0))?;
        }
        let pp = prefix_sums(p);
        let qq = prefix_sums(q);
        for pi in &pp {
            for qj in &qq {
                let h = base.affine + pi + qj;
                ctx.half_bracket(HalfBracketArg::new(2.0 * h, 0))?;
            }
        }
        Ok(())
    }

    /// Copy with the first horizontal rapidity replaced.
    pub fn with_u1(&self, u1: Complex64) -> Self {
        let mut out = self.clone();
        out.u[0] = u1;
        out
    }

    /// The `(L−1)×(L−1)` spec left after removing the first row and column
    /// around a `c₊` top-left face: base height moves to corner `(1, 1)`.
    pub fn inner(&self) -> Option<Self> {
        if self.size < 2 {
            return None;
        }
        let model = match &self.model {
            ModelParams::Felderhof { p, q, base } => ModelParams::Felderhof {
                p: p[1..].to_vec(),
                q: q[1..].to_vec(),
                base: base.step(p[0] + q[0], 1),
            },
            ModelParams::PerkSchultz { base, omega } => ModelParams::PerkSchultz {
                base: base.offset(1, 1),
                omega: *omega,
            },
        };
        Some(Self {
            size: self.size - 1,
            u: self.u[1..].to_vec(),
            v: self.v[1..].to_vec(),
            model,
            elliptic: self.elliptic,
        })
    }

    /// Height of corner `(i, j)` given the drop count `d` accumulated on the
    /// way there from the top-left corner.
    pub fn felderhof_corner(&self, i: usize, j: usize, drop: u32) -> Option<SymbolicHeight> {
        let ModelParams::Felderhof { p, q, base } = &self.model else {
            return None;
        };
        let field: Complex64 = p[..i].iter().sum::<Complex64>() + q[..j].iter().sum::<Complex64>();
        Some(base.step(field, drop))
    }

    pub fn ps_corner(&self, i: usize, j: usize, minus_steps: u32) -> Option<HeightVector> {
        let ModelParams::PerkSchultz { base, .. } = &self.model else {
            return None;
        };
        let d = minus_steps as i32;
        Some(base.offset((i + j) as i32 - d, d))
    }
}

fn prefix_sums(xs: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for x in xs {
        acc += x;
        out.push(acc);
    }
    out
}

/// Face weights as seen by the evaluators.
pub trait FaceModel {
    /// Weight of face `(i, j)` with the given edge labels, where `tl_drop`
    /// is the number of `1` labels on a boundary-to-corner path to its
    /// top-left corner.
    fn face_weight(&self, i: usize, j: usize, labels: EdgeLabels, tl_drop: u32) -> Result<Complex64>;
}

impl FaceModel for LatticeSpec {
    fn face_weight(&self, i: usize, j: usize, labels: EdgeLabels, tl_drop: u32) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        match &self.model {
            ModelParams::Felderhof { p, q, .. } => {
                let Some(kind) = FelderhofVertexKind::from_edge_labels(labels) else {
                    return Ok(zero);
                };
                let fp = FaceParams {
                    u: self.u[i],
                    v: self.v[j],
                    p: p[i],
                    q: q[j],
                    h_tl: self.felderhof_corner(i, j, tl_drop).expect("felderhof spec"),
                };
                felderhof::weight(&self.elliptic, &fp, kind)
            }
            ModelParams::PerkSchultz { omega, .. } => {
                let steps = ps::EdgeSteps {
                    left: Sign::from_label(labels.left),
                    top: Sign::from_label(labels.top),
                    bottom: Sign::from_label(labels.bottom),
                    right: Sign::from_label(labels.right),
                };
                if !labels.is_conserving() {
                    return Ok(zero);
                }
                let Some(kind) = PsVertexKind::from_edge_steps(steps) else {
                    return Ok(zero);
                };
                let h = self.ps_corner(i, j, tl_drop).expect("ps spec");
                ps::ps_weight(&self.elliptic, self.u[i], self.v[j], kind, &h, omega)
            }
        }
    }
}

/// Every admissible face weighs one; partition functions become counts.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitWeights;

impl FaceModel for UnitWeights {
    fn face_weight(&self, _: usize, _: usize, labels: EdgeLabels, _: u32) -> Result<Complex64> {
        Ok(Complex64::new(if labels.is_conserving() { 1.0 } else { 0.0 }, 0.0))
    }
}

/// Moduli of another model's weights. Its partition function is the sum of
/// `|term|` over configurations.
#[derive(Debug, Clone, Copy)]
pub struct AbsWeights<'a, M>(pub &'a M);

impl<M: FaceModel> FaceModel for AbsWeights<'_, M> {
    fn face_weight(&self, i: usize, j: usize, labels: EdgeLabels, tl_drop: u32) -> Result<Complex64> {
        Ok(Complex64::new(self.0.face_weight(i, j, labels, tl_drop)?.norm(), 0.0))
    }
}

/// `Σ|term| / |Z|`: roughly how many digits the configuration sum loses
/// to cancellation.
pub fn cancellation_ratio(spec: &LatticeSpec) -> Result<f64> {
    let total = partition_transfer(&AbsWeights(spec), spec.size)?.re;
    Ok(total / dwpf_transfer(spec)?.norm())
}

/// Boundary edge labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    pub top: Vec<u8>,
    pub left: Vec<u8>,
    pub bottom: Vec<u8>,
    pub right: Vec<u8>,
}

/// Domain wall boundary: no drop (`ê₊`) along the top and left, a unit drop
/// (`ê₋`) along the bottom and right. The same labels serve both models.
pub fn build_dwbc(spec: &LatticeSpec) -> Boundary {
    dwbc_for_size(spec.size)
}

pub fn dwbc_for_size(size: usize) -> Boundary {
    Boundary {
        top: vec![0; size],
        left: vec![0; size],
        bottom: vec![1; size],
        right: vec![1; size],
    }
}

/// Labels on all `2L(L+1)` edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    size: usize,
    /// `(L+1) × L`, row-major over horizontal lines.
    horizontal: Vec<u8>,
    /// `L × (L+1)`, row-major over face rows.
    vertical: Vec<u8>,
}

impl Configuration {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Horizontal edge on line `i` (`0..=L`) in column `j`.
    pub fn horizontal(&self, i: usize, j: usize) -> u8 {
        self.horizontal[i * self.size + j]
    }

    /// Vertical edge in face row `i` on line `j` (`0..=L`).
    pub fn vertical(&self, i: usize, j: usize) -> u8 {
        self.vertical[i * (self.size + 1) + j]
    }

    pub fn face_labels(&self, i: usize, j: usize) -> EdgeLabels {
        EdgeLabels::new(
            self.vertical(i, j),
            self.horizontal(i, j),
            self.horizontal(i + 1, j),
            self.vertical(i, j + 1),
        )
    }

    /// Drops from the top-left corner down the left boundary, then along
    /// line `i`.
    pub fn corner_drop(&self, i: usize, j: usize) -> u32 {
        let down: u32 = (0..i).map(|k| u32::from(self.vertical(k, 0))).sum();
        let across: u32 = (0..j).map(|k| u32::from(self.horizontal(i, k))).sum();
        down + across
    }

    /// Drops along the top boundary, then down line `j`.
    pub fn corner_drop_via_top(&self, i: usize, j: usize) -> u32 {
        let across: u32 = (0..j).map(|k| u32::from(self.horizontal(0, k))).sum();
        let down: u32 = (0..i).map(|k| u32::from(self.vertical(k, j))).sum();
        across + down
    }

    pub fn matches_boundary(&self, b: &Boundary) -> bool {
        let l = self.size;
        (0..l).all(|k| {
            self.horizontal(0, k) == b.top[k]
                && self.horizontal(l, k) == b.bottom[k]
                && self.vertical(k, 0) == b.left[k]
                && self.vertical(k, l) == b.right[k]
        })
    }

    pub fn faces_conserve(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.face_labels(i, j).is_conserving()))
    }

    /// 0/1 matrix marking `c`-type faces with sign `+1` for `c₊` and `−1`
    /// for `c₋`, the usual alternating sign matrix of a six-vertex state.
    pub fn sign_matrix(&self) -> Vec<Vec<i8>> {
        (0..self.size)
            .map(|i| {
                (0..self.size)
                    .map(|j| match FelderhofVertexKind::from_edge_labels(self.face_labels(i, j)) {
                        Some(FelderhofVertexKind::CPlus) => 1,
                        Some(FelderhofVertexKind::CMinus) => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }
}

/// Calls `visit` on every configuration compatible with `boundary`, in
/// row-major order with label `0` tried before `1`.
pub fn for_each_configuration<F>(size: usize, boundary: &Boundary, mut visit: F) -> Result<()>
where
    F: FnMut(&Configuration) -> Result<()>,
{
    let mut cfg = Configuration {
        size,
        horizontal: vec![0; (size + 1) * size],
        vertical: vec![0; size * (size + 1)],
    };
    for k in 0..size {
        cfg.horizontal[k] = boundary.top[k];
        cfg.vertical[k * (size + 1)] = boundary.left[k];
    }
    dfs(&mut cfg, boundary, 0, &mut visit)
}

fn dfs<F>(cfg: &mut Configuration, boundary: &Boundary, face: usize, visit: &mut F) -> Result<()>
where
    F: FnMut(&Configuration) -> Result<()>,
{
    let l = cfg.size;
    if face == l * l {
        return visit(cfg);
    }
    let (i, j) = (face / l, face % l);
    let left = cfg.vertical(i, j);
    let top = cfg.horizontal(i, j);
    for bottom in 0..=1u8 {
        if i + 1 == l && bottom != boundary.bottom[j] {
            continue;
        }
        let Some(right) = (left + bottom).checked_sub(top).filter(|&r| r <= 1) else {
            continue;
        };
        if j + 1 == l && right != boundary.right[i] {
            continue;
        }
        cfg.horizontal[(i + 1) * l + j] = bottom;
        cfg.vertical[i * (l + 1) + j + 1] = right;
        dfs(cfg, boundary, face + 1, visit)?;
    }
    Ok(())
}

/// All configurations obeying the domain wall boundary, in deterministic order.
pub fn enumerate_configurations(spec: &LatticeSpec) -> impl Iterator<Item = Configuration> {
    configurations_for_size(spec.size).into_iter()
}

pub fn configurations_for_size(size: usize) -> Vec<Configuration> {
    let mut out = Vec::new();
    for_each_configuration(size, &dwbc_for_size(size), |c| {
        out.push(c.clone());
        Ok(())
    })
    .expect("collecting cannot fail");
    out
}

/// Pairwise sum, fixed order.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Sum over configurations of the product of face weights.
pub fn partition_bruteforce<M: FaceModel>(model: &M, size: usize) -> Result<Complex64> {
    let mut terms = Vec::new();
    for_each_configuration(size, &dwbc_for_size(size), |cfg| {
        let mut w = Complex64::new(1.0, 0.0);
        for i in 0..size {
            for j in 0..size {
                w *= model.face_weight(i, j, cfg.face_labels(i, j), cfg.corner_drop(i, j))?;
            }
        }
        terms.push(w);
        Ok(())
    })?;
    Ok(pairwise_sum(&terms))
}

pub fn dwpf_bruteforce(spec: &LatticeSpec) -> Result<Complex64> {
    partition_bruteforce(spec, spec.size)
}

/// Row-transfer evaluation. The state between rows is the bit mask of the
/// `L` labels on a horizontal line; line `i` carries exactly `i` ones.
pub fn partition_transfer<M: FaceModel>(model: &M, size: usize) -> Result<Complex64> {
    if size == 0 || size > MAX_TRANSFER_SIZE {
        return Err(Error::InvalidSpec(format!(
            "transfer evaluator supports 1..={MAX_TRANSFER_SIZE}, got {size}"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let states = 1usize << size;
    let mut cache = WeightCache::new(size);
    let mut current = vec![zero; states];
    current[0] = Complex64::new(1.0, 0.0);
    for row in 0..size {
        let mut next = vec![zero; states];
        for (top, &amp) in current.iter().enumerate() {
            if amp == zero {
                continue;
            }
            let mut walk = RowWalk {
                model,
                cache: &mut cache,
                row,
                size,
                top,
                next: &mut next,
            };
            walk.run(0, 0, 0, amp)?;
        }
        current = next;
    }
    Ok(current[states - 1])
}

pub fn dwpf_transfer(spec: &LatticeSpec) -> Result<Complex64> {
    partition_transfer(spec, spec.size)
}

/// Number of configurations, counted by the transfer evaluator with unit
/// weights.
pub fn count_configurations_transfer(size: usize) -> Result<u64> {
    let z = partition_transfer(&UnitWeights, size)?;
    Ok(z.re.round() as u64)
}

struct WeightCache {
    size: usize,
    entries: Vec<Option<Complex64>>,
}

impl WeightCache {
    fn new(size: usize) -> Self {
        Self {
            size,
            entries: vec![None; size * size * 16 * (size + 1)],
        }
    }

    fn get<M: FaceModel>(&mut self, model: &M, i: usize, j: usize, labels: EdgeLabels, drop: u32) -> Result<Complex64> {
        let code = usize::from(labels.left)
            | usize::from(labels.top) << 1
            | usize::from(labels.bottom) << 2
            | usize::from(labels.right) << 3;
        let idx = ((i * self.size + j) * 16 + code) * (self.size + 1) + drop as usize;
        if let Some(w) = self.entries[idx] {
            return Ok(w);
        }
        let w = model.face_weight(i, j, labels, drop)?;
        self.entries[idx] = Some(w);
        Ok(w)
    }
}

struct RowWalk<'a, M> {
    model: &'a M,
    cache: &'a mut WeightCache,
    row: usize,
    size: usize,
    top: usize,
    next: &'a mut Vec<Complex64>,
}

impl<M: FaceModel> RowWalk<'_, M> {
    fn run(&mut self, col: usize, left: u8, bottom_mask: usize, acc: Complex64) -> Result<()> {
        if col == self.size {
            if left == 1 {
                self.next[bottom_mask] += acc;
            }
            return Ok(());
        }
        let top = ((self.top >> col) & 1) as u8;
        let drop = (self.top & ((1 << col) - 1)).count_ones();
        for bottom in 0..=1u8 {
            let Some(right) = (left + bottom).checked_sub(top).filter(|&r| r <= 1) else {
                continue;
            };
            let labels = EdgeLabels::new(left, top, bottom, right);
            let w = self.cache.get(self.model, self.row, col, labels, drop)?;
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            self.run(col + 1, right, bottom_mask | usize::from(bottom) << col, acc * w)?;
        }
        Ok(())
    }
}
