//! Randomized verification runs over the identity catalog and the inversion
//! kinds.
//!
//! Every trial owns the ChaCha8 stream `trial_index` of the configured seed,
//! so a trial's draws and results do not depend on the worker count.
//! Reports list trials by index and serialize doubles with 17 significant
//! digits.

mod json;
mod sampler;
pub mod selftest;

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inversions::{delta_residual, normalization_link, KindTag, Order, SequenceOracle};
use crate::multiindex::{iterate_box, iterate_simplex, MultiIndex};
use crate::summations::{Extent, IdentityId, Status};

pub use sampler::{draw_inversion, sample_instance, InversionDraw, SampledInstance, SamplerConfig, RNG_NAME};

type C = Complex<f64>;

pub const SCHEMA_VERSION: u32 = 1;

/// Default bound on the normalization link of geometric kinds.
pub const LINK_TOL: f64 = 1e-9;

/// Worker cap from `EHS_THREADS`; `None` leaves the choice to rayon.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("EHS_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::Usage(format!("EHS_THREADS: {e}"))),
        Ok(s) => parse_thread_cap(&s).map(Some),
    }
}

/// A positive worker count.
pub fn parse_thread_cap(s: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::Usage(format!("EHS_THREADS must be a positive integer, got `{s}`"))),
    }
}

/// Runs `f` on a pool sized by [`thread_cap`].
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Usage(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Identity(IdentityId),
    /// `m` is ignored by the general kinds.
    Inversion { kind: KindTag, m: i64 },
}

impl Target {
    pub fn name(&self) -> String {
        match self {
            Target::Identity(id) => id.name().to_string(),
            Target::Inversion { kind, m } if kind.is_geometric() => format!("{kind}:m={m}"),
            Target::Inversion { kind, .. } => kind.to_string(),
        }
    }
}

/// One grid point: a dimension, an extent and, for inversions, the columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub r: usize,
    pub extent: Extent,
    /// Columns `l ≤ n` of the δ-check; empty for identities.
    pub columns: Vec<MultiIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grid {
    /// A single point shared by every target.
    Point(Point),
    /// Every `r` in the range with `n_i ≤ box_cap` or `N ≤ simplex_cap`;
    /// inversions take every column `l ≤ n`.
    Sweep {
        r_min: usize,
        r_max: usize,
        box_cap: i64,
        simplex_cap: i64,
    },
}

fn corners(r: usize, cap: i64) -> impl Iterator<Item = MultiIndex> {
    iterate_box(&MultiIndex::new(vec![cap; r]))
}

impl Grid {
    fn points(&self, target: &Target) -> Vec<Point> {
        match self {
            Grid::Point(p) => vec![p.clone()],
            Grid::Sweep {
                r_min,
                r_max,
                box_cap,
                simplex_cap,
            } => {
                let mut out = Vec::new();
                for r in *r_min..=*r_max {
                    match target {
                        Target::Identity(id) => {
                            if id.fixed_dim().is_some_and(|d| d != r) {
                                continue;
                            }
                            if id.is_simplex() {
                                out.extend((0..=*simplex_cap).map(|big| Point {
                                    r,
                                    extent: Extent::Simplex(big),
                                    columns: vec![],
                                }));
                            } else {
                                out.extend(corners(r, *box_cap).map(|n| Point {
                                    r,
                                    extent: Extent::Box(n),
                                    columns: vec![],
                                }));
                            }
                        }
                        Target::Inversion { .. } => out.extend(corners(r, *box_cap).map(|n| Point {
                            r,
                            columns: iterate_box(&n).collect(),
                            extent: Extent::Box(n),
                        })),
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed: u64,
    pub target: String,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<i64>>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<i64>,
    /// Column with the worst δ-residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<i64>>,
    #[serde(serialize_with = "json::pair")]
    pub p: C,
    #[serde(serialize_with = "json::pair")]
    pub q: C,
    #[serde(serialize_with = "json::params")]
    pub params: BTreeMap<String, C>,
    #[serde(serialize_with = "json::pair")]
    pub lhs: C,
    #[serde(serialize_with = "json::pair")]
    pub rhs: C,
    #[serde(serialize_with = "json::float")]
    pub rel_error: f64,
    /// `Σ|summand| / |lhs|` for identities, `Σ|f g|` for inversions.
    #[serde(serialize_with = "json::float")]
    pub condition: f64,
    #[serde(serialize_with = "json::opt_float", skip_serializing_if = "Option::is_none")]
    pub link_error: Option<f64>,
    #[serde(serialize_with = "json::status")]
    pub status: Status,
    /// Draws rejected as degenerate before this trial's draw.
    pub resamples: usize,
    /// Why an evaluation failed outright, such as an overflow.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    /// Over passing trials.
    #[serde(serialize_with = "json::opt_float")]
    pub max_rel_error: Option<f64>,
    pub pass_count: usize,
    pub fail_count: usize,
    pub degenerate_count: usize,
    /// Rejected draws over all trials.
    pub resampled_draws: usize,
    pub wall_time_ms: Option<u64>,
}

impl Summary {
    pub fn from_trials(trials: &[TrialRecord]) -> Self {
        let mut s = Summary::default();
        for t in trials {
            s.resampled_draws += t.resamples;
            match t.status {
                Status::Pass => {
                    s.pass_count += 1;
                    s.max_rel_error = Some(s.max_rel_error.map_or(t.rel_error, |m| m.max(t.rel_error)));
                }
                Status::Fail => s.fail_count += 1,
                Status::Degenerate => s.degenerate_count += 1,
            }
        }
        s
    }

    /// Rejected draws over all draws.
    pub fn degenerate_rate(&self) -> f64 {
        let draws = self.pass_count + self.fail_count + self.resampled_draws;
        if draws == 0 {
            0.0
        } else {
            self.resampled_draws as f64 / draws as f64
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub rng: String,
    pub seed: u64,
    #[serde(serialize_with = "json::float")]
    pub tol: f64,
    pub selection: Vec<String>,
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub trials: usize,
    pub tol: f64,
    pub link_tol: f64,
    pub cfg: SamplerConfig,
    pub command: Vec<String>,
    /// Records `wall_time_ms`, which makes reports differ between runs.
    pub timing: bool,
}

impl SuiteOptions {
    pub fn new(trials: usize, tol: f64, cfg: SamplerConfig) -> Self {
        Self {
            trials,
            tol,
            link_tol: LINK_TOL,
            cfg,
            command: vec![],
            timing: false,
        }
    }
}

struct Job {
    index: u64,
    target: Target,
    point: Point,
}

fn check_point(target: &Target, p: &Point) -> Result<()> {
    match (target, &p.extent) {
        (Target::Identity(id), extent) => {
            if let Some(d) = id.fixed_dim() {
                if p.r != d {
                    return Err(Error::Usage(format!("{} is defined for r = {d} only", id.name())));
                }
            }
            match (id.is_simplex(), extent) {
                (true, Extent::Simplex(big)) if *big >= 0 => Ok(()),
                (false, Extent::Box(n)) if n.dim() == p.r && n.is_nonnegative() => Ok(()),
                (true, _) => Err(Error::Usage(format!("{} needs --N K with K ≥ 0", id.name()))),
                (false, _) => Err(Error::Usage(format!("{} needs --n with {} non-negative entries", id.name(), p.r))),
            }
        }
        (Target::Inversion { kind, m }, Extent::Box(n)) => {
            if kind.is_geometric() && *m < 1 {
                return Err(Error::Usage(format!("--m must be positive, got {m}")));
            }
            if n.dim() != p.r || !n.is_nonnegative() {
                return Err(Error::Usage(format!("--n must have {} non-negative entries", p.r)));
            }
            if p.columns.is_empty() {
                return Err(Error::Usage("inversion check needs at least one column l".into()));
            }
            for l in &p.columns {
                if l.dim() != p.r || !l.is_nonnegative() || !l.le(n) {
                    return Err(Error::Usage(format!("column l = {l} must satisfy 0 ≤ l ≤ n = {n}")));
                }
            }
            Ok(())
        }
        (Target::Inversion { .. }, Extent::Simplex(_)) => Err(Error::Usage("inversions take a box corner --n".into())),
    }
}

/// Runs every trial of every grid point of every target on a pool capped by
/// `EHS_THREADS`. Trial indices enumerate targets, then points, then trials.
pub fn run_suite(selection: &[Target], grid: &Grid, opts: &SuiteOptions) -> Result<VerificationReport> {
    with_pool(|| execute_suite(selection, grid, opts))?
}

/// [`run_suite`] on the current pool.
pub(crate) fn execute_suite(selection: &[Target], grid: &Grid, opts: &SuiteOptions) -> Result<VerificationReport> {
    if selection.is_empty() {
        return Err(Error::Usage("empty selection".into()));
    }
    opts.cfg.validate()?;
    if !(opts.tol >= 0.0) {
        return Err(Error::Usage(format!("tolerance must be non-negative, got {}", opts.tol)));
    }
    let start = Instant::now();
    let mut jobs = Vec::new();
    for target in selection {
        let points = grid.points(target);
        if points.is_empty() {
            return Err(Error::Usage(format!("grid has no points for {}", target.name())));
        }
        for point in points {
            check_point(target, &point)?;
            for _ in 0..opts.trials {
                jobs.push(Job {
                    index: jobs.len() as u64,
                    target: *target,
                    point: point.clone(),
                });
            }
        }
    }
    let trials = jobs.par_iter().map(|job| run_job(job, opts)).collect::<Result<Vec<_>>>()?;
    let mut summary = Summary::from_trials(&trials);
    if opts.timing {
        summary.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        command: opts.command.clone(),
        rng: RNG_NAME.to_string(),
        seed: opts.cfg.seed,
        tol: opts.tol,
        selection: selection.iter().map(Target::name).collect(),
        trials,
        summary,
    })
}

fn nan_pair() -> C {
    C::new(f64::NAN, f64::NAN)
}

fn run_job(job: &Job, opts: &SuiteOptions) -> Result<TrialRecord> {
    let (n, big_n) = match &job.point.extent {
        Extent::Box(n) => (Some(n.entries().to_vec()), None),
        Extent::Simplex(big) => (None, Some(*big)),
    };
    let mut rec = TrialRecord {
        trial_index: job.index,
        seed: opts.cfg.seed,
        target: job.target.name(),
        r: job.point.r,
        n,
        big_n,
        l: None,
        p: nan_pair(),
        q: nan_pair(),
        params: BTreeMap::new(),
        lhs: nan_pair(),
        rhs: nan_pair(),
        rel_error: f64::NAN,
        condition: f64::NAN,
        link_error: None,
        status: Status::Degenerate,
        resamples: 0,
        error: None,
    };
    let outcome = match job.target {
        Target::Identity(id) => identity_trial(&mut rec, id, &job.point, opts, job.index),
        Target::Inversion { kind, m } => inversion_trial(&mut rec, kind, m, &job.point, opts, job.index),
    };
    match outcome {
        Err(e @ Error::Usage(_)) => Err(e),
        Err(e) => {
            rec.status = Status::Fail;
            rec.error = Some(e.to_string());
            Ok(rec)
        }
        Ok(()) => Ok(rec),
    }
}

fn identity_trial(rec: &mut TrialRecord, id: IdentityId, point: &Point, opts: &SuiteOptions, index: u64) -> Result<()> {
    match sample_instance(id, point.r, &point.extent, opts.tol, &opts.cfg, index)? {
        Ok(s) => {
            rec.p = s.instance.ctx.p();
            rec.q = s.instance.ctx.q();
            rec.params = s.instance.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            rec.lhs = s.verification.lhs;
            rec.rhs = s.verification.rhs;
            rec.rel_error = s.verification.rel_error;
            rec.condition = s.verification.condition;
            rec.status = s.verification.status;
            rec.resamples = s.rejected;
        }
        Err(rejected) => rec.resamples = rejected,
    }
    Ok(())
}

/// Outcome of the δ-check of one draw over a set of columns.
#[derive(Debug, Clone)]
pub struct InversionCheck {
    pub worst_column: MultiIndex,
    pub raw: C,
    pub delta: C,
    pub residual: f64,
    pub scale: f64,
    pub link: Option<f64>,
}

/// δ-residuals in both orders for every column, and for geometric kinds
/// the normalization link along row `n`.
pub fn check_inversion(draw: &InversionDraw, n: &MultiIndex, columns: &[MultiIndex]) -> Result<InversionCheck> {
    let seqs = draw.oracle.as_ref().map(|o| o as &dyn SequenceOracle<f64>);
    let mut worst: Option<InversionCheck> = None;
    for l in columns {
        for order in [Order::FG, Order::GF] {
            let res = delta_residual(&draw.kind, seqs, n, l, order, &draw.ctx)?;
            let residual = res.normalized();
            if worst.as_ref().is_none_or(|w| residual > w.residual) {
                let delta = if l == n { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) };
                worst = Some(InversionCheck {
                    worst_column: l.clone(),
                    raw: res.raw + delta,
                    delta,
                    residual,
                    scale: res.scale,
                    link: None,
                });
            }
        }
    }
    let mut out = worst.ok_or_else(|| Error::Usage("no columns".into()))?;
    if draw.kind.tag().is_geometric() {
        let mut link: f64 = 0.0;
        for k in iterate_box(n) {
            link = link.max(normalization_link(&draw.kind, n, &k, &draw.ctx)?);
        }
        out.link = Some(link);
    }
    Ok(out)
}

fn inversion_trial(rec: &mut TrialRecord, kind: KindTag, m: i64, point: &Point, opts: &SuiteOptions, index: u64) -> Result<()> {
    let Extent::Box(n) = &point.extent else {
        unreachable!("checked by check_point")
    };
    let mut rng = opts.cfg.trial_rng(index);
    let mut rejected = 0;
    while rejected <= opts.cfg.max_resamples {
        let Some(draw) = draw_inversion(kind, m, n, &opts.cfg, &mut rng) else {
            rejected += 1;
            continue;
        };
        let check = match check_inversion(&draw, n, &point.columns) {
            Ok(c) => c,
            Err(e) if e.is_degenerate() => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        rec.p = draw.ctx.p();
        rec.q = draw.ctx.q();
        rec.params = draw.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        rec.l = Some(check.worst_column.entries().to_vec());
        rec.lhs = check.raw;
        rec.rhs = check.delta;
        rec.rel_error = check.residual;
        rec.condition = check.scale;
        rec.link_error = check.link;
        let ok = check.residual <= opts.tol && check.link.is_none_or(|l| l <= opts.link_tol);
        rec.status = if ok { Status::Pass } else { Status::Fail };
        rec.resamples = rejected;
        return Ok(());
    }
    rec.resamples = rejected;
    Ok(())
}

/// Every `k ≥ 0` of dimension `r` with `|k| ≤ cap`.
pub fn simplex_points(r: usize, cap: i64) -> impl Iterator<Item = MultiIndex> {
    iterate_simplex(r, cap, false)
}
