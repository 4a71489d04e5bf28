use std::io::Write;
use std::time::Instant;

use dwpf_core::felderhof::{admissible_boundary_tuples, reduced_identity_sides, ybe_residual};
use dwpf_core::lattice::{cancellation_ratio, LatticeSpec, ModelParams, BRUTE_FORCE_MAX};
use dwpf_core::ps::ps_ybe_residual;
use dwpf_core::verification::{
    self, check_property1, check_property2, check_property3, check_property4, check_ps_property_suite,
    check_ps_zeros, compare_brute_closed, compare_transfer_brute, compare_transfer_closed, phase_constancy, relative_difference,
    PeriodShift, VerificationReport,
};
use dwpf_core::{EllipticContext, Error, ModelKind};

use crate::config::{Command, RunConfig};
use crate::report::{Emitter, Record};
use crate::sample::{rng, sample_hexagon, sample_identity, sample_ybe, spec_for_run};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Regime(String),
    Core(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Regime(_) => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Regime(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RegimeViolation { argument, value } => CliError::Regime(format!(
                "regime violation: half bracket of argument {argument} needs a positive real bracket, got [{argument}] = {value}"
            )),
            Error::SingularHeight { argument, modulus } => {
                CliError::Regime(format!("singular height: |[{argument}]| = {modulus:e}"))
            }
            Error::InvalidSpec(m) | Error::InvalidContext(m) => CliError::Usage(m),
            other => CliError::Core(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

struct Runner<'a, W> {
    cfg: &'a RunConfig,
    emitter: Emitter<W>,
    all_passed: bool,
}

impl<W: Write> Runner<'_, W> {
    /// Times `check`, then emits its reports.
    fn record<F>(&mut self, seed: u64, check: F) -> Result<(), CliError>
    where
        F: FnOnce() -> dwpf_core::Result<Vec<VerificationReport>>,
    {
        let start = Instant::now();
        let reports = check()?;
        let ms = start.elapsed().as_secs_f64() * 1e3 / reports.len().max(1) as f64;
        for r in &reports {
            let mut rec = Record::from_report(r, self.cfg.model, self.cfg.size, seed, ms);
            if let Some(t) = self.cfg.tolerance {
                rec.override_tolerance(t);
            }
            self.all_passed &= rec.passed;
            self.emitter.emit(&rec)?;
        }
        Ok(())
    }
}

fn one(r: dwpf_core::Result<VerificationReport>) -> dwpf_core::Result<Vec<VerificationReport>> {
    r.map(|r| vec![r])
}

/// Runs the configured command, writing one record per check. Returns
/// whether every check passed.
pub fn run<W: Write>(cfg: &RunConfig, out: W) -> Result<bool, CliError> {
    let mut runner = Runner {
        cfg,
        emitter: Emitter::new(out, cfg.emit),
        all_passed: true,
    };
    let specs = (0..cfg.samples)
        .map(|s| Ok((cfg.seed.wrapping_add(s as u64), spec_for_run(cfg, s)?)))
        .collect::<Result<Vec<_>, CliError>>();
    match cfg.command {
        Command::Dwpf => {
            let mut singles = Vec::new();
            for (seed, spec) in &specs? {
                let r = if spec.size <= BRUTE_FORCE_MAX {
                    compare_brute_closed(spec)?
                } else {
                    compare_transfer_closed(spec)?
                };
                let tolerance = cfg.tolerance.unwrap_or(r.tolerance);
                let cancel = cancellation_ratio(spec)?;
                if cancel * f64::EPSILON > tolerance {
                    eprintln!(
                        "warning: seed {seed}: the configuration sum cancels by a factor {cancel:.1e}; \
                         double precision cannot guarantee tolerance {tolerance:e}"
                    );
                }
                singles.push(r.clone());
                runner.record(*seed, || Ok(vec![r]))?;
            }
            if cfg.model == ModelKind::Felderhof && singles.len() > 1 {
                runner.record(cfg.seed, || one(phase_constancy(&singles)))?;
            }
        }
        Command::Zeros => {
            if cfg.size < 2 {
                return Err(CliError::Usage("zeros needs L ≥ 2".into()));
            }
            for (seed, spec) in &specs? {
                runner.record(*seed, || match cfg.model {
                    ModelKind::Felderhof => one(check_property2(spec)),
                    ModelKind::PerkSchultz => one(check_ps_zeros(spec)),
                })?;
            }
        }
        Command::Suite => {
            for (seed, spec) in &specs? {
                runner.record(*seed, || suite(spec))?;
            }
        }
        Command::Ybe => {
            let ctx = EllipticContext::new(cfg.nome, 1.0)?;
            match cfg.model {
                ModelKind::Felderhof => {
                    runner.record(cfg.seed, || felderhof_ybe(&ctx, cfg.samples, cfg.seed))?;
                }
                ModelKind::PerkSchultz => {
                    runner.record(cfg.seed, || one(ps_ybe(&ctx, cfg.samples, cfg.seed)))?;
                }
            }
        }
    }
    Ok(runner.all_passed)
}

/// Every property check applicable to one spec.
pub fn suite(spec: &LatticeSpec) -> dwpf_core::Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    match &spec.model {
        ModelParams::Felderhof { p, q, base } => {
            out.push(check_property1(spec, PeriodShift::Real)?);
            out.push(check_property1(spec, PeriodShift::Imaginary)?);
            if spec.size >= 2 {
                out.push(check_property2(spec)?);
                out.push(check_property3(spec)?);
            }
            let corner = LatticeSpec::felderhof(
                spec.elliptic,
                spec.u[..1].to_vec(),
                spec.v[..1].to_vec(),
                p[..1].to_vec(),
                q[..1].to_vec(),
                *base,
            )?;
            out.push(check_property4(&corner)?);
            out.push(compare_brute_closed(spec)?);
        }
        ModelParams::PerkSchultz { .. } => {
            out.extend(check_ps_property_suite(spec)?);
            if spec.size >= 2 {
                out.push(check_ps_zeros(spec)?);
            }
        }
    }
    if spec.size <= dwpf_core::lattice::MAX_TRANSFER_SIZE {
        out.push(compare_transfer_brute(spec)?);
    }
    Ok(out)
}

/// Every admissible boundary tuple for `samples` draws, plus the reduced
/// three-term identity for `samples` complex draws.
pub fn felderhof_ybe(ctx: &EllipticContext, samples: usize, seed: u64) -> dwpf_core::Result<Vec<VerificationReport>> {
    let mut r = rng(seed);
    let tuples = admissible_boundary_tuples();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let ps = sample_ybe(&mut r);
        for &t in &tuples {
            let out = ybe_residual(ctx, &ps, t)?;
            if !out.vacuous {
                worst = worst.max(out.relative_residual());
            }
        }
    }
    let ybe = VerificationReport::new("felderhof_ybe", worst, verification::tolerances::BRACKET);

    let mut worst = 0.0f64;
    for _ in 0..samples {
        let [u, v, w, p, q, rr, h] = sample_identity(&mut r);
        let (lhs, rhs) = reduced_identity_sides(ctx, (u, v, w), (p, q, rr), h);
        worst = worst.max(relative_difference(lhs, rhs));
    }
    let identity = VerificationReport::new("reduced_identity", worst, verification::tolerances::BRACKET);
    Ok(vec![ybe, identity])
}

pub fn ps_ybe(ctx: &EllipticContext, samples: usize, seed: u64) -> dwpf_core::Result<VerificationReport> {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (us, hex) = sample_hexagon(&mut r);
        let out = ps_ybe_residual(ctx, us, &hex, &dwpf_core::OmegaMatrix::new(crate::sample::PS_OMEGA))?;
        worst = worst.max(out.relative_residual());
    }
    Ok(VerificationReport::new("ps_ybe", worst, verification::tolerances::BRACKET))
}
