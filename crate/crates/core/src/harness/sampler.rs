use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::inversions::{GeomParams, InversionKind, KindTag, Table, TableOracle};
use crate::multiindex::MultiIndex;
use crate::summations::{complete_params, verify, Extent, IdentityId, IdentityInstance, Params, Status, Verification};
use crate::theta::{EllipticContext, DEFAULT_TRUNC_EPS};

type C = Complex<f64>;

/// Relative accuracy assumed for one evaluated summand.
pub const TERM_ACCURACY: f64 = 1e-14;

/// Lower bound on the derived cap; well-conditioned draws sit near 1 to 10.
pub const MIN_CONDITION_CAP: f64 = 1e2;

/// Generator and stream layout pinned in every report.
pub const RNG_NAME: &str = "ChaCha8Rng/seed_from_u64+stream=trial_index";

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Upper bound on `|p|`, in `(0, 1)`.
    pub p_max: f64,
    /// Moduli of `q` and of every drawn parameter.
    pub modulus_range: (f64, f64),
    pub degeneracy_guard: f64,
    pub max_resamples: usize,
    /// Draws whose term-magnitude condition exceeds this are resampled.
    pub condition_cap: f64,
    /// Pins `p = 0`.
    pub p_zero: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            p_max: 0.5,
            modulus_range: (0.5, 1.5),
            degeneracy_guard: 1e-13,
            max_resamples: 100,
            condition_cap: 1e6,
            p_zero: false,
        }
    }
}

impl SamplerConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn with_p_max(mut self, p_max: f64) -> Result<Self> {
        self.p_max = p_max;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_max > 0.0 && self.p_max < 1.0) {
            return Err(Error::Usage(format!("p_max must lie in (0, 1), got {}", self.p_max)));
        }
        let (lo, hi) = self.modulus_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::Usage(format!("modulus range [{lo}, {hi}] must satisfy 0 < lo ≤ hi")));
        }
        if !(self.degeneracy_guard > 0.0) {
            return Err(Error::Usage("degeneracy guard must be positive".into()));
        }
        if !(self.condition_cap >= 1.0) {
            return Err(Error::Usage("condition cap must be at least 1".into()));
        }
        Ok(())
    }

    /// The largest condition at which a comparison at `tol` is meaningful.
    pub fn cap_for(&self, tol: f64) -> f64 {
        self.condition_cap.min((tol / TERM_ACCURACY).max(MIN_CONDITION_CAP))
    }

    /// The stream for one trial; independent of scheduling.
    pub fn trial_rng(&self, trial_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial_index);
        rng
    }

    /// Uniform modulus in the configured range and uniform phase.
    pub fn complex(&self, rng: &mut ChaCha8Rng) -> C {
        let (lo, hi) = self.modulus_range;
        let m = if hi > lo { rng.random_range(lo..hi) } else { lo };
        C::from_polar(m, rng.random_range(0.0..std::f64::consts::TAU))
    }

    /// `|p|` uniform in `(0, p_max]` unless pinned to zero.
    pub fn nome(&self, rng: &mut ChaCha8Rng) -> C {
        if self.p_zero {
            return C::new(0.0, 0.0);
        }
        let m = self.p_max * (1.0 - rng.random::<f64>());
        C::from_polar(m, rng.random_range(0.0..std::f64::consts::TAU))
    }

    /// Draws `p` and `q`; `None` when `q` fails the genericity screen.
    pub fn context(&self, rng: &mut ChaCha8Rng) -> Option<EllipticContext<f64>> {
        let p = self.nome(rng);
        let q = self.complex(rng);
        EllipticContext::with_tolerances(p, q, DEFAULT_TRUNC_EPS, self.degeneracy_guard).ok()
    }
}

/// A screened identity draw together with its evaluation.
#[derive(Debug, Clone)]
pub struct SampledInstance {
    pub instance: IdentityInstance<f64>,
    pub verification: Verification<f64>,
    /// Draws rejected before this one.
    pub rejected: usize,
}

/// Draws parameters for `id`, solves its constraint and screens the result
/// by evaluating it. Rejected draws are degenerate ones and those above
/// [`SamplerConfig::cap_for`]. `Ok(Err(n))` reports exhaustion after `n` rejections.
pub fn sample_instance(
    id: IdentityId,
    r: usize,
    extent: &Extent,
    tol: f64,
    cfg: &SamplerConfig,
    trial_index: u64,
) -> Result<std::result::Result<SampledInstance, usize>> {
    let mut rng = cfg.trial_rng(trial_index);
    let free = id.free_param(r);
    let cap = cfg.cap_for(tol);
    let mut rejected = 0;
    while rejected <= cfg.max_resamples {
        let Some(ctx) = cfg.context(&mut rng) else {
            rejected += 1;
            continue;
        };
        let mut params = Params::new();
        for name in id.schema(r) {
            if Some(&name) != free.as_ref() {
                params.set(&name, cfg.complex(&mut rng));
            }
        }
        let instance = match complete_params(id, r, extent.clone(), params, &ctx) {
            Ok(inst) => inst,
            Err(e) if e.is_degenerate() => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let verification = verify(&instance, tol)?;
        if verification.status == Status::Degenerate || !(verification.condition <= cap) {
            rejected += 1;
            continue;
        }
        return Ok(Ok(SampledInstance {
            instance,
            verification,
            rejected,
        }));
    }
    Ok(Err(rejected))
}

/// Inputs of one inversion trial.
#[derive(Debug, Clone)]
pub struct InversionDraw {
    pub kind: InversionKind<f64>,
    /// Present for the general kinds.
    pub oracle: Option<TableOracle<f64>>,
    pub ctx: EllipticContext<f64>,
    /// Every drawn value, named for the report.
    pub params: Params<f64>,
}

fn table(cfg: &SamplerConfig, rng: &mut ChaCha8Rng, offset: i64, len: usize) -> Table<f64> {
    Table::new(offset, (0..len).map(|_| cfg.complex(rng)).collect())
}

fn record_table(params: &mut Params<f64>, name: &str, t: &Table<f64>, offset: i64, len: usize) {
    for i in 0..len as i64 {
        if let Some(v) = t.get(offset + i) {
            params.set(&format!("{name}({})", offset + i), v);
        }
    }
}

/// Draws the sequences (general kinds) or the progression parameters
/// (geometric kinds) for rows up to `n`.
pub fn draw_inversion(
    kind: KindTag,
    m: i64,
    n: &MultiIndex,
    cfg: &SamplerConfig,
    rng: &mut ChaCha8Rng,
) -> Option<InversionDraw> {
    let r = n.dim();
    let ctx = cfg.context(rng)?;
    let mut params = Params::new();
    let span = n.total().max(1) + 1;
    let (offset, len) = (-span, 3 * span as usize + 1);
    let (kind, oracle) = match kind {
        KindTag::Ar | KindTag::Bcr | KindTag::Cr => {
            let a = table(cfg, rng, offset, len);
            let cs: Vec<_> = (0..r).map(|_| table(cfg, rng, offset, len)).collect();
            for (j, c) in cs.iter().enumerate() {
                record_table(&mut params, &format!("c{}", j + 1), c, offset, len);
            }
            let (kind, a) = match kind {
                KindTag::Ar => (InversionKind::GeneralAr, Some(a)),
                KindTag::Bcr => (InversionKind::GeneralBCr, Some(a)),
                _ => {
                    let b = cfg.complex(rng);
                    params.set("b", b);
                    (InversionKind::GeneralCr { b }, None)
                }
            };
            if let Some(a) = &a {
                record_table(&mut params, "a", a, offset, len);
            }
            (kind, Some(TableOracle::new(a, cs).ok()?))
        }
        geometric => {
            let a = cfg.complex(rng);
            let x: Vec<_> = (0..r).map(|_| cfg.complex(rng)).collect();
            params.set("a", a);
            for (j, xj) in x.iter().enumerate() {
                params.set(&format!("x{}", j + 1), *xj);
            }
            let g = GeomParams { m, a, x };
            let kind = match geometric {
                KindTag::ArGeomPos => InversionKind::GeomArPos(g),
                KindTag::ArGeomNeg => InversionKind::GeomArNeg(g),
                _ => InversionKind::GeomBCr(g),
            };
            (kind, None)
        }
    };
    Some(InversionDraw { kind, oracle, ctx, params })
}
