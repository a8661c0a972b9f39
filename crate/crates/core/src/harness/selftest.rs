//! The acceptance checks, runnable from the library and the CLI.
//!
//! Each criterion draws from its own seed family with one stream per item,
//! and items run on the worker pool, so results are identical at any
//! thread count.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_inversion, draw_inversion, execute_suite, json, with_pool, Grid, SamplerConfig, SuiteOptions, Target};
use crate::error::{Error, Result};
use crate::inversions::{
    delta_residual, entry, krattenthaler_delta, krattenthaler_f, krattenthaler_g, vanishing_lemma_sum, InversionKind, KindTag, Lemma,
    MatrixEntryRequest, Order, SequenceOracle, Table, TableOracle, Which,
};
use crate::multiindex::{iterate_box, iterate_simplex, MultiIndex};
use crate::scalar::rel_diff;
use crate::summations::{
    bailey_pair_residual, complete_params, quartic_form_gap, relative_error, simplex_specialization_residual, summand, BaileyPair,
    BaileyPairSpec, BkForm, Extent, IdentityId, Params, SpecializationPair, SqrtBranch,
};
use crate::theta::{gustafson_sum, theta_eval, EllipticContext};

type C = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Fewer trials and smaller grids.
    pub quick: bool,
}

/// One family of measurements judged against one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub count: usize,
    pub failures: usize,
    /// Items whose every draw was degenerate.
    pub degenerate: usize,
    #[serde(serialize_with = "json::float")]
    pub worst: f64,
    #[serde(serialize_with = "json::float")]
    pub threshold: f64,
}

impl Check {
    fn from_outcomes(label: impl Into<String>, threshold: f64, outcomes: &[Outcome]) -> Self {
        let mut c = Check {
            label: label.into(),
            count: outcomes.len(),
            failures: 0,
            degenerate: 0,
            worst: 0.0,
            threshold,
        };
        for o in outcomes {
            match o.value {
                None => c.degenerate += 1,
                Some(v) => {
                    if !(v <= threshold) {
                        c.failures += 1;
                    }
                    c.worst = if v.is_nan() { f64::NAN } else { c.worst.max(v) };
                }
            }
        }
        c
    }

    /// A single measured quantity, such as a rate.
    fn scalar(label: impl Into<String>, value: f64, threshold: f64, strict: bool) -> Self {
        let ok = if strict { value < threshold } else { value <= threshold };
        Check {
            label: label.into(),
            count: 1,
            failures: usize::from(!ok),
            degenerate: 0,
            worst: value,
            threshold,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub number: u32,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Criterion {
    fn new(number: u32, title: &str, checks: Vec<Check>) -> Self {
        Self {
            number,
            title: title.to_string(),
            passed: checks.iter().all(Check::passed),
            checks,
        }
    }

    /// `criterion N: PASS|FAIL title`, then one line per failing check.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "criterion {}: {} {}",
            self.number,
            if self.passed { "PASS" } else { "FAIL" },
            self.title
        )];
        for c in self.checks.iter().filter(|c| !c.passed()) {
            out.push(format!(
                "    {}: {} of {} over threshold {:e} (worst {:e})",
                c.label, c.failures, c.count, c.threshold, c.worst
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub seed: u64,
    pub quick: bool,
    pub criteria: Vec<Criterion>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            for line in c.lines() {
                s.push_str(&line);
                s.push('\n');
            }
        }
        s
    }
}

/// One measured item; `None` when every draw was degenerate.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    value: Option<f64>,
}

struct Plan {
    seed: u64,
    quick: bool,
    cfg: SamplerConfig,
}

impl Plan {
    fn trials(&self, full: usize) -> usize {
        if self.quick {
            (full / 5).max(2)
        } else {
            full
        }
    }

    /// The stream of item `index` in family `family`.
    fn rng(&self, family: u64, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ family.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        rng.set_stream(index as u64);
        rng
    }

    /// Runs `f` on items `0..count` in parallel, resampling degenerate draws.
    fn run<F>(&self, family: u64, count: usize, f: F) -> Vec<Outcome>
    where
        F: Fn(&mut ChaCha8Rng, usize) -> Result<f64> + Sync,
    {
        self.run_n(family, count, |rng, i| f(rng, i).map(|v| [v]))
            .into_iter()
            .map(|[o]| o)
            .collect()
    }

    /// As [`Plan::run`] with `K` measurements per item.
    fn run_n<const K: usize, F>(&self, family: u64, count: usize, f: F) -> Vec<[Outcome; K]>
    where
        F: Fn(&mut ChaCha8Rng, usize) -> Result<[f64; K]> + Sync,
    {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = self.rng(family, i);
                for _ in 0..=self.cfg.max_resamples {
                    match f(&mut rng, i) {
                        Ok(v) => return v.map(|v| Outcome { value: Some(v) }),
                        Err(e) if e.is_degenerate() || matches!(e, Error::InvalidContext(_)) => continue,
                        Err(_) => return [Outcome { value: Some(f64::NAN) }; K],
                    }
                }
                [Outcome { value: None }; K]
            })
            .collect()
    }

    fn ctx(&self, rng: &mut ChaCha8Rng) -> Result<EllipticContext<f64>> {
        self.cfg
            .context(rng)
            .ok_or_else(|| Error::Degenerate("base fails the genericity screen".into()))
    }

    /// A context with `0 < |p| ≤ p_max`.
    fn elliptic_ctx(&self, rng: &mut ChaCha8Rng) -> Result<EllipticContext<f64>> {
        let cfg = SamplerConfig { p_zero: false, ..self.cfg.clone() };
        cfg.context(rng)
            .ok_or_else(|| Error::Degenerate("base fails the genericity screen".into()))
    }

    fn z(&self, rng: &mut ChaCha8Rng) -> C {
        self.cfg.complex(rng)
    }
}

fn normalized(raw: C, scale: f64) -> f64 {
    if raw.norm() == 0.0 {
        0.0
    } else {
        raw.norm() / scale
    }
}

fn theta_identities(plan: &Plan) -> Criterion {
    let n = plan.trials(200);
    let inversion = plan.run(11, n, |rng, _| {
        let c = plan.elliptic_ctx(rng)?;
        let x = plan.z(rng);
        let (lhs, rhs) = (theta_eval(x.inv(), &c)?, -theta_eval(x, &c)? / x);
        Ok(normalized(lhs - rhs, lhs.norm().max(rhs.norm())))
    });
    let periodic = plan.run(12, n, |rng, _| {
        let c = plan.elliptic_ctx(rng)?;
        let x = plan.z(rng);
        let (lhs, rhs) = (theta_eval(c.p() * x, &c)?, -theta_eval(x, &c)? / x);
        Ok(normalized(lhs - rhs, lhs.norm().max(rhs.norm())))
    });
    let addition = plan.run(13, n, |rng, _| {
        let c = plan.elliptic_ctx(rng)?;
        let (x, y, u, v) = (plan.z(rng), plan.z(rng), plan.z(rng), plan.z(rng));
        let th = |z: C| theta_eval(z, &c);
        let t1 = th(x * y)? * th(x / y)? * th(u * v)? * th(u / v)?;
        let t2 = th(x * v)? * th(x / v)? * th(u * y)? * th(u / y)?;
        let t3 = u / y * th(y * v)? * th(y / v)? * th(x * u)? * th(x / u)?;
        Ok(normalized(t1 - t2 - t3, t1.norm() + t2.norm() + t3.norm()))
    });
    Criterion::new(
        1,
        "theta inversion, quasi-periodicity and addition",
        vec![
            Check::from_outcomes("inversion", 1e-11, &inversion),
            Check::from_outcomes("quasi-periodicity", 1e-11, &periodic),
            Check::from_outcomes("addition", 1e-11, &addition),
        ],
    )
}

fn gustafson(plan: &Plan) -> Criterion {
    let n = plan.trials(50);
    let mut checks = Vec::new();
    for k in 2..=6usize {
        for scaled in [false, true] {
            let out = plan.run(20 + 2 * k as u64 + u64::from(scaled), n, |rng, _| {
                let c = plan.elliptic_ctx(rng)?;
                let a: Vec<C> = (0..k).map(|_| plan.z(rng)).collect();
                let b: Vec<C> = (0..k - 2).map(|_| plan.z(rng)).collect();
                let lambda = scaled.then(|| plan.z(rng));
                Ok(gustafson_sum(&a, &b, lambda, &c)?.normalized())
            });
            let label = format!("k={k} {}", if scaled { "lambda" } else { "plain" });
            checks.push(Check::from_outcomes(label, 1e-10, &out));
        }
    }
    Criterion::new(2, "Gustafson vanishing sums", checks)
}

/// `(r, n)` for every `r ∈ 1..=r_max` and `n ≥ 0` with `|n| ≤ cap`.
fn grid(r_max: usize, cap: i64, min_total: i64) -> Vec<MultiIndex> {
    (1..=r_max)
        .flat_map(|r| iterate_simplex(r, cap, false).filter(move |n| n.total() >= min_total))
        .collect()
}

fn inversions(plan: &Plan) -> Criterion {
    let cap = if plan.quick { 2 } else { 4 };
    let rows = grid(3, cap, 0);
    let n = plan.trials(20);
    let items: Vec<(MultiIndex, usize)> = rows.iter().flat_map(|r| (0..n).map(move |t| (r.clone(), t))).collect();
    let mut checks = Vec::new();
    let mut family = 100;
    let mut run = |kind: KindTag, m: i64| -> (Vec<Outcome>, Vec<Outcome>) {
        family += 1;
        let out = plan.run_n(family, items.len(), |rng, i| {
            let row = &items[i].0;
            let draw = draw_inversion(kind, m, row, &plan.cfg, rng)
                .ok_or_else(|| Error::Degenerate("base fails the genericity screen".into()))?;
            let columns: Vec<_> = iterate_box(row).collect();
            let chk = check_inversion(&draw, row, &columns)?;
            Ok([chk.residual, chk.link.unwrap_or(0.0)])
        });
        out.into_iter().map(|[d, l]| (d, l)).unzip()
    };
    for kind in [KindTag::Ar, KindTag::Bcr, KindTag::Cr] {
        let (out, _) = run(kind, 1);
        checks.push(Check::from_outcomes(format!("{kind} delta"), 1e-8, &out));
    }
    for kind in [KindTag::ArGeomPos, KindTag::ArGeomNeg, KindTag::BcrGeom] {
        for m in 1..=4 {
            let (out, links) = run(kind, m);
            checks.push(Check::from_outcomes(format!("{kind} m={m} delta"), 1e-8, &out));
            checks.push(Check::from_outcomes(format!("{kind} m={m} link"), 1e-9, &links));
        }
    }
    Criterion::new(3, "matrix inversions and normalization links", checks)
}

fn lemmas(plan: &Plan) -> Criterion {
    let cap = if plan.quick { 2 } else { 4 };
    let rows = grid(3, cap, 1);
    let n = plan.trials(20);
    let items: Vec<MultiIndex> = rows.iter().flat_map(|r| std::iter::repeat_n(r.clone(), n)).collect();
    let mut checks = Vec::new();
    for (family, cfg_lemma) in [(201, false), (202, true)] {
        let out = plan.run(family, items.len(), |rng, i| {
            let row = &items[i];
            let draw = draw_inversion(KindTag::Ar, 1, row, &plan.cfg, rng)
                .ok_or_else(|| Error::Degenerate("base fails the genericity screen".into()))?;
            let oracle = draw.oracle.as_ref().expect("general kind");
            let lemma = if cfg_lemma { Lemma::Cfg { b: plan.z(rng) } } else { Lemma::Afg };
            Ok(vanishing_lemma_sum(lemma, row, oracle, &draw.ctx)?.normalized())
        });
        checks.push(Check::from_outcomes(if cfg_lemma { "C_r lemma" } else { "A_r lemma" }, 1e-9, &out));
    }
    Criterion::new(4, "vanishing lemmas", checks)
}

fn catalog(plan: &Plan) -> Result<Criterion> {
    let (r_max, box_cap, simplex_cap) = if plan.quick { (2, 2, 3) } else { (3, 3, 4) };
    let trials = plan.trials(20);
    let mut checks = Vec::new();
    for (lane, p_zero) in [("elliptic", false), ("p=0", true)] {
        for id in IdentityId::ALL {
            let cfg = SamplerConfig {
                seed: plan.seed ^ (0x5000 + id as u64 * 2 + u64::from(p_zero)),
                p_zero,
                ..plan.cfg.clone()
            };
            let grid = Grid::Sweep {
                r_min: 1,
                r_max: id.fixed_dim().unwrap_or(r_max),
                box_cap,
                simplex_cap,
            };
            let report = execute_suite(&[Target::Identity(id)], &grid, &SuiteOptions::new(trials, 1e-8, cfg))?;
            let outcomes: Vec<Outcome> = report
                .trials
                .iter()
                .map(|t| Outcome {
                    value: (t.status != crate::summations::Status::Degenerate).then_some(t.rel_error),
                })
                .collect();
            checks.push(Check::from_outcomes(format!("{} {lane}", id.name()), 1e-8, &outcomes));
            checks.push(Check::scalar(
                format!("{} {lane} degenerate rate", id.name()),
                report.summary.degenerate_rate(),
                0.2,
                true,
            ));
        }
    }
    Ok(Criterion::new(5, "identity catalog", checks))
}

fn pair_spec(plan: &Plan, rng: &mut ChaCha8Rng, pair: BaileyPair, r: usize) -> BaileyPairSpec<f64> {
    let mut params = Params::new().with_vec("x", &(0..r).map(|_| plan.z(rng)).collect::<Vec<_>>());
    for s in pair.scalars() {
        if Some(*s) != pair.free_param() {
            params.set(s, plan.z(rng));
        }
    }
    BaileyPairSpec {
        derivation: pair,
        r,
        params,
        branch: SqrtBranch::Principal,
        bk_form: BkForm::First,
    }
}

fn bailey_pairs(plan: &Plan) -> Criterion {
    let cap = if plan.quick { 2 } else { 4 };
    let rows = grid(2, cap, 0);
    let n = plan.trials(10);
    let items: Vec<MultiIndex> = rows.iter().flat_map(|r| std::iter::repeat_n(r.clone(), n)).collect();
    let mut checks = Vec::new();
    for (p, pair) in BaileyPair::ALL.into_iter().enumerate() {
        let forms: &[BkForm] = if pair == BaileyPair::DrQuarticPair {
            &[BkForm::First, BkForm::Second]
        } else {
            &[BkForm::First]
        };
        let out = plan.run(300 + p as u64, items.len(), |rng, i| {
            let row = &items[i];
            let c = plan.ctx(rng)?;
            let base = pair_spec(plan, rng, pair, row.dim());
            let mut worst: f64 = 0.0;
            for branch in [SqrtBranch::Principal, SqrtBranch::Negated] {
                for &bk_form in forms {
                    let spec = BaileyPairSpec {
                        branch,
                        bk_form,
                        ..base.clone()
                    }
                    .complete(&c)?;
                    worst = worst.max(bailey_pair_residual(&spec, row, &c)?);
                }
            }
            Ok(worst)
        });
        checks.push(Check::from_outcomes(pair.name(), 1e-8, &out));
    }
    let gaps = plan.run(310, items.len(), |rng, i| {
        let row = &items[i];
        let c = plan.ctx(rng)?;
        let spec = pair_spec(plan, rng, BaileyPair::DrQuarticPair, row.dim()).complete(&c)?;
        quartic_form_gap(&spec, row, &c)
    });
    checks.push(Check::from_outcomes("quartic b_k forms", 1e-10, &gaps));
    Criterion::new(6, "Bailey pairs", checks)
}

fn specializations(plan: &Plan) -> Criterion {
    let cap = if plan.quick { 2 } else { 4 };
    let rows = grid(3, cap, 0);
    let n = plan.trials(5);
    let items: Vec<(MultiIndex, i64)> = rows
        .iter()
        .flat_map(|r| (0..=cap).flat_map(move |big| std::iter::repeat_n((r.clone(), big), n)))
        .collect();
    let mut checks = Vec::new();
    for (s, pair) in SpecializationPair::ALL.into_iter().enumerate() {
        let out = plan.run(400 + s as u64, items.len(), |rng, i| {
            let (row, big) = &items[i];
            let c = plan.ctx(rng)?;
            let mut params = Params::new();
            for name in pair.inputs(row.dim()) {
                params.set(&name, plan.z(rng));
            }
            let s = simplex_specialization_residual(pair, row, *big, &params, &c)?;
            if !(s.condition <= plan.cfg.cap_for(1e-9)) {
                return Err(Error::Degenerate("specialization above the condition cap".into()));
            }
            Ok(s.rel_error)
        });
        checks.push(Check::from_outcomes(pair.name(), 1e-9, &out));
    }
    Criterion::new(7, "simplex and box specializations", checks)
}

fn rational(rng: &mut ChaCha8Rng) -> (i64, i64) {
    let num = rng.random_range(1..=9) * if rng.random::<bool>() { 1 } else { -1 };
    (num, rng.random_range(1..=9))
}

fn rational_reduction(plan: &Plan) -> Criterion {
    const LEN: usize = 6;
    let n = plan.trials(20);
    let items = plan.run(500, n, |rng, _| rational_trial(rng, LEN, false));
    let exact = plan.run(501, n, |rng, _| rational_trial(rng, LEN, true));
    Criterion::new(
        8,
        "trigonometric one-dimensional reduction",
        vec![
            Check::from_outcomes("delta and entries at p=0", 1e-10, &items),
            Check::from_outcomes("rational pair exact", 0.0, &exact),
        ],
    )
}

/// Draws rational `a_t`, `c_t`; either compares the `p = 0` A_r pair with
/// the rational pair at `A = a + 1/a`, `C = c + 1/c`, or checks the rational
/// pair exactly.
fn rational_trial(rng: &mut ChaCha8Rng, len: usize, exact: bool) -> Result<f64> {
    let a: Vec<(i64, i64)> = (0..len).map(|_| rational(rng)).collect();
    let cs: Vec<(i64, i64)> = (0..len).map(|_| rational(rng)).collect();
    let map = |(u, v): (i64, i64)| BigRational::new(BigInt::from(u), BigInt::from(v)) + BigRational::new(BigInt::from(v), BigInt::from(u));
    let big_a: Vec<BigRational> = a.iter().copied().map(map).collect();
    let big_c: Vec<BigRational> = cs.iter().copied().map(map).collect();
    if exact {
        for nn in 0..len {
            for l in 0..=nn {
                if krattenthaler_delta(&big_a, &big_c, nn, l)? != BigRational::from_integer(0.into()) {
                    return Ok(1.0);
                }
            }
        }
        return Ok(0.0);
    }
    let to_c = |(u, v): (i64, i64)| C::new(u as f64 / v as f64, 0.0);
    let (af, cf): (Vec<C>, Vec<C>) = (a.iter().copied().map(to_c).collect(), cs.iter().copied().map(to_c).collect());
    let ctx = EllipticContext::new(C::new(0.0, 0.0), C::new(0.6, 0.2))?;
    let oracle = TableOracle::new(Some(Table::new(0, af.clone())), vec![Table::new(0, cf.clone())])?;
    let fa: Vec<f64> = big_a.iter().map(to_f64).collect();
    let fc: Vec<f64> = big_c.iter().map(to_f64).collect();
    let rat_a: Vec<C> = fa.iter().map(|v| C::new(*v, 0.0)).collect();
    let rat_c: Vec<C> = fc.iter().map(|v| C::new(*v, 0.0)).collect();
    let u = |n: usize| af[..n].iter().product::<C>() / cf[..=n].iter().product::<C>();
    let mut worst: f64 = 0.0;
    for nn in 0..len {
        let row = MultiIndex::new(vec![nn as i64]);
        for k in 0..=nn {
            let col = MultiIndex::new(vec![k as i64]);
            for (which, expect) in [
                (Which::Forward, krattenthaler_f(&rat_a, &rat_c, nn, k)?),
                (Which::Inverse, krattenthaler_g(&rat_a, &rat_c, nn, k)?),
            ] {
                let req = MatrixEntryRequest {
                    kind: InversionKind::GeneralAr,
                    row: row.clone(),
                    col: col.clone(),
                    which,
                };
                let got = entry(&req, Some(&oracle as &dyn SequenceOracle<f64>), &ctx)?;
                worst = worst.max(rel_diff(got, expect * u(nn) / u(k)));
            }
            for order in [Order::FG, Order::GF] {
                let res = delta_residual(&InversionKind::GeneralAr, Some(&oracle), &row, &col, order, &ctx)?;
                worst = worst.max(res.normalized());
            }
        }
    }
    Ok(worst)
}

fn to_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

fn quartic_cross_check(plan: &Plan) -> Criterion {
    let n = plan.trials(20);
    let mut checks = Vec::new();
    for (lane, p_zero) in [("p=0", true), ("elliptic", false)] {
        let cfg = SamplerConfig { p_zero, ..plan.cfg.clone() };
        let out = plan.run(600 + u64::from(p_zero), 3 * n, |rng, i| {
            let c = cfg
                .context(rng)
                .ok_or_else(|| Error::Degenerate("base fails the genericity screen".into()))?;
            let a = cfg.complex(rng);
            let corner = Extent::Box(MultiIndex::new(vec![1 + (i % 3) as i64]));
            let one_dim = complete_params(IdentityId::QuarticR1, 1, corner.clone(), Params::new().with("a", a), &c)?;
            let theorem = complete_params(
                IdentityId::DrQuartic,
                1,
                corner.clone(),
                Params::new().with("a", a).with("x1", C::new(1.0, 0.0)),
                &c,
            )?;
            let Extent::Box(corner) = corner else { unreachable!() };
            let mut worst: f64 = 0.0;
            for k in iterate_box(&corner) {
                worst = worst.max(relative_error(summand(&one_dim, &k)?, summand(&theorem, &k)?));
            }
            Ok(worst)
        });
        checks.push(Check::from_outcomes(format!("termwise {lane}"), 1e-11, &out));
    }
    Criterion::new(9, "one-dimensional quartic against the r = 1 theorem", checks)
}

/// Criteria 1 through 9; criterion 10 concerns the CLI around this call.
pub fn run_selftest(opts: SelftestOptions) -> Result<SelftestReport> {
    let plan = Plan {
        seed: opts.seed,
        quick: opts.quick,
        cfg: SamplerConfig::new(opts.seed),
    };
    let criteria = with_pool(|| -> Result<Vec<Criterion>> {
        Ok(vec![
            theta_identities(&plan),
            gustafson(&plan),
            inversions(&plan),
            lemmas(&plan),
            catalog(&plan)?,
            bailey_pairs(&plan),
            specializations(&plan),
            rational_reduction(&plan),
            quartic_cross_check(&plan),
        ])
    })??;
    Ok(SelftestReport {
        schema_version: super::SCHEMA_VERSION,
        seed: opts.seed,
        quick: opts.quick,
        criteria,
    })
}

/// Runs one criterion by number, for callers that time them separately.
pub fn run_criterion(number: u32, opts: SelftestOptions) -> Result<Criterion> {
    let plan = Plan {
        seed: opts.seed,
        quick: opts.quick,
        cfg: SamplerConfig::new(opts.seed),
    };
    with_pool(|| match number {
        1 => Ok(theta_identities(&plan)),
        2 => Ok(gustafson(&plan)),
        3 => Ok(inversions(&plan)),
        4 => Ok(lemmas(&plan)),
        5 => catalog(&plan),
        6 => Ok(bailey_pairs(&plan)),
        7 => Ok(specializations(&plan)),
        8 => Ok(rational_reduction(&plan)),
        9 => Ok(quartic_cross_check(&plan)),
        _ => Err(Error::Usage(format!("no criterion {number}"))),
    })?
}
