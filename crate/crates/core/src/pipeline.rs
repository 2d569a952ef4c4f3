//! Screening pipeline over enumerated networks and single-network analysis.
//!
//! Per network: injectivity screen, flux-cone and sign diagnostics, a
//! randomized search for parameters with several nondegenerate positive
//! steady states, and stability labels at the best witness found. The search
//! can only find witnesses, so "no-multistationarity-found" is a lower-bound
//! statement, never a proof of absence.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num::{BigInt, One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::fluxcone::{extreme_rays, strictly_positive_flux_exists};
use crate::linalg::Q;
use crate::lowdim::{self, DegeneracyKind, TwoSpeciesVerdict};
use crate::massaction::{build_f, det_jac_f};
use crate::network::{
    enumerate_networks, parse_network, reaction_masks, zero_one_universe, MaskCanon, stoichiometric_data, FilterSet,
    NetworkError, ReactionNetwork, StoichiometricData,
};
use crate::onedim;
use crate::sign::{sign_report, structured_injectivity, Injectivity, SignVariant, SignVerdict};
use crate::solver::{solve_positive_steady_states, SolveError, Stability, SteadyStateSolution};

pub const SCHEMA_VERSION: &str = "zocrn-report/1";

/// Environment variable overriding the configured worker count.
pub const WORKERS_ENV: &str = "ZOCRN_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("unsupported network: {0}")]
    Unsupported(String),
    /// Parameters that do not fit the network.
    #[error("invalid input: {0}")]
    Input(String),
    #[error("solver failed: {0}")]
    Solve(#[from] SolveError),
    #[error(transparent)]
    OneDim(#[from] onedim::OneDimError),
    #[error(transparent)]
    LowDim(#[from] lowdim::LowDimError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub species: usize,
    pub reactions: usize,
    pub filters: FilterSet,
    /// Explicit network texts; when non-empty they replace enumeration.
    pub networks: Vec<String>,
    /// Random subsample size drawn from the enumerated list.
    pub subsample: Option<usize>,
    /// Random (κ, c) samples per network.
    pub sample_count: usize,
    /// Log-uniform bounds for rate constants and for the point defining c, as rationals.
    pub kappa_bounds: (String, String),
    pub significant_digits: u32,
    /// Random κ-lines scanned for count changes, each refined by bisection.
    pub line_searches: usize,
    pub line_points: usize,
    pub bisection_steps: usize,
    pub use_witness_seeds: bool,
    /// Keep searching after a screen succeeds; a witness found then counts as an invariant violation.
    pub search_screened: bool,
    pub seed: u64,
    pub workers: Option<usize>,
    pub timeout_secs: f64,
    pub output_json: Option<PathBuf>,
    pub output_csv: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            species: 3,
            reactions: 5,
            filters: FilterSet { rank: None, positive_flux: true, nondegenerate: true, canonical: true },
            networks: Vec::new(),
            subsample: None,
            sample_count: 50,
            kappa_bounds: ("1/100".into(), "100".into()),
            significant_digits: 3,
            line_searches: 2,
            line_points: 5,
            bisection_steps: 6,
            use_witness_seeds: true,
            search_screened: false,
            seed: 0,
            workers: None,
            timeout_secs: 10.0,
            output_json: None,
            output_csv: None,
        }
    }
}

fn parse_rational(s: &str) -> Result<Q, PipelineError> {
    let bad = || PipelineError::Config(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            if let Ok(n) = s.parse::<BigInt>() {
                return Ok(Q::from_integer(n));
            }
            let (int, frac) = s.split_once('.').ok_or_else(bad)?;
            let digits = format!("{int}{frac}");
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            Ok(Q::new(n, BigInt::from(10).pow(frac.len() as u32)))
        }
    }
}

/// Comma-separated rationals ("1,3/2,0.5").
pub fn parse_rational_list(s: &str) -> Result<Vec<Q>, PipelineError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

impl PipelineConfig {
    pub fn from_path(path: &Path) -> Result<Self, PipelineError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })?;
        let cfg: PipelineConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| PipelineError::Config(e.to_string()))?
        } else {
            toml::from_str(&text).map_err(|e| PipelineError::Config(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn bounds(&self) -> Result<(Q, Q), PipelineError> {
        let lo = parse_rational(&self.kappa_bounds.0)?;
        let hi = parse_rational(&self.kappa_bounds.1)?;
        Ok((lo, hi))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.sample_count == 0 {
            return Err(PipelineError::Config("sample_count must be at least 1".into()));
        }
        let (lo, hi) = self.bounds()?;
        if !lo.is_positive() || hi < lo {
            return Err(PipelineError::Config("kappa bounds must satisfy 0 < lower <= upper".into()));
        }
        if self.significant_digits == 0 || self.significant_digits > 12 {
            return Err(PipelineError::Config("significant_digits must lie in 1..=12".into()));
        }
        if self.timeout_secs <= 0.0 {
            return Err(PipelineError::Config("timeout_secs must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(PipelineError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Worker count: environment override, then the config, then rayon's default.
    pub fn effective_workers(&self) -> Option<usize> {
        std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()).filter(|&n: &usize| n > 0).or(self.workers)
    }
}

/// Log-uniform sample in [lo, hi] rounded to `digits` significant decimal digits.
pub fn log_uniform_rational(rng: &mut impl Rng, lo: &Q, hi: &Q, digits: u32) -> Q {
    let (l, h) = (lo.to_f64().unwrap().ln(), hi.to_f64().unwrap().ln());
    let v = if h > l { rng.gen_range(l..h).exp() } else { l.exp() };
    round_sig(v, digits).clamp(lo.clone(), hi.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// The flux cone has no strictly positive vector.
    NoPositiveSteadyState,
    ScreenedInjective,
    /// Rank two with a positive certificate for det Jac_h.
    SignCertified,
    NoMultistationarityFound,
    Multistationary,
    Multistable,
    TimedOut,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::NoPositiveSteadyState,
        Stage::ScreenedInjective,
        Stage::SignCertified,
        Stage::NoMultistationarityFound,
        Stage::Multistationary,
        Stage::Multistable,
        Stage::TimedOut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::NoPositiveSteadyState => "no-positive-steady-state",
            Stage::ScreenedInjective => "screened-injective",
            Stage::SignCertified => "sign-certified",
            Stage::NoMultistationarityFound => "no-multistationarity-found",
            Stage::Multistationary => "multistationary",
            Stage::Multistable => "multistable",
            Stage::TimedOut => "timed-out",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kappa: Vec<String>,
    pub c: Vec<String>,
    pub steady_states: Vec<Vec<f64>>,
    pub stability: Vec<Stability>,
    pub nondegenerate: usize,
    pub stable: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rank: usize,
    pub rays: usize,
    pub theta: Option<usize>,
    pub b_terms: Option<usize>,
    pub b_tilde_terms: Option<usize>,
    pub sign_verdict: Option<SignVerdict>,
    pub samples: usize,
    pub degenerate_samples: usize,
    /// Stable states with det Jac_f ≥ 0 at full rank; always expected to be zero.
    pub invariant_violations: usize,
    pub revalidated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkVerdictRecord {
    pub index: usize,
    pub network: String,
    pub stage: Stage,
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionCounts {
    /// All m-subsets of the zero-one universe.
    pub raw: u64,
    pub canonical: u64,
    pub positive_flux: u64,
    pub positive_flux_canonical: u64,
    pub nontrivial: u64,
    pub nontrivial_canonical: u64,
    /// Nontrivial networks of full rank (stoichiometric subspace of dimension s).
    pub full_rank_nontrivial: u64,
    pub full_rank_nontrivial_canonical: u64,
    /// Sum of orbit sizes over canonical networks; equals `raw`.
    pub orbit_total: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub schema_version: String,
    pub networks: usize,
    pub by_stage: Vec<(Stage, usize)>,
    pub errors: usize,
    pub invariant_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub summary: PipelineSummary,
    pub records: Vec<NetworkVerdictRecord>,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Network counts on `s` species with `m` reactions under each counting convention.
///
/// All filters are invariant under relabeling species, so uncanonicalized counts are
/// sums of orbit sizes over canonical representatives; `raw` is the binomial count.
pub fn count_conventions(s: usize, m: usize) -> Result<ConventionCounts, PipelineError> {
    let canon = FilterSet { canonical: true, ..Default::default() };
    let flux = FilterSet { positive_flux: true, ..Default::default() };
    let nontrivial = FilterSet { positive_flux: true, nondegenerate: true, ..Default::default() };
    let checker = MaskCanon::new(s);
    let universe = zero_one_universe(s).len() as u64;
    let out = enumerate_networks(s, m, &canon)?
        .par_bridge()
        .map(|net| {
            let orbit = checker.orbit_size(&reaction_masks(&net)) as u64;
            let f = flux.accepts(&net);
            let n = f && nontrivial.accepts(&net);
            let full = n && net.rank() == s;
            ConventionCounts {
                raw: 0,
                canonical: 1,
                positive_flux: if f { orbit } else { 0 },
                positive_flux_canonical: u64::from(f),
                nontrivial: if n { orbit } else { 0 },
                nontrivial_canonical: u64::from(n),
                full_rank_nontrivial: if full { orbit } else { 0 },
                full_rank_nontrivial_canonical: u64::from(full),
                orbit_total: orbit,
            }
        })
        .reduce(ConventionCounts::default, |a, b| ConventionCounts {
            raw: 0,
            canonical: a.canonical + b.canonical,
            positive_flux: a.positive_flux + b.positive_flux,
            positive_flux_canonical: a.positive_flux_canonical + b.positive_flux_canonical,
            nontrivial: a.nontrivial + b.nontrivial,
            nontrivial_canonical: a.nontrivial_canonical + b.nontrivial_canonical,
            full_rank_nontrivial: a.full_rank_nontrivial + b.full_rank_nontrivial,
            full_rank_nontrivial_canonical: a.full_rank_nontrivial_canonical + b.full_rank_nontrivial_canonical,
            orbit_total: a.orbit_total + b.orbit_total,
        });
    Ok(ConventionCounts { raw: binomial(universe, m as u64), ..out })
}

/// Networks selected by the config, in a deterministic order.
pub fn select_networks(cfg: &PipelineConfig) -> Result<Vec<ReactionNetwork>, PipelineError> {
    let mut nets: Vec<ReactionNetwork> = if cfg.networks.is_empty() {
        enumerate_networks(cfg.species, cfg.reactions, &cfg.filters)?.collect()
    } else {
        cfg.networks.iter().map(|t| parse_network(t)).collect::<Result<_, _>>()?
    };
    if let Some(k) = cfg.subsample {
        if k < nets.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_5a3b);
            let mut idx = rand::seq::index::sample(&mut rng, nets.len(), k).into_vec();
            idx.sort_unstable();
            nets = idx.into_iter().map(|i| nets[i].clone()).collect();
        }
    }
    Ok(nets)
}

struct Sample {
    kappa: Vec<Q>,
    c: Vec<Q>,
    nondegenerate: usize,
    sols: Vec<SteadyStateSolution>,
}

struct Searcher<'a> {
    net: &'a ReactionNetwork,
    sd: &'a StoichiometricData,
    lo: Q,
    hi: Q,
    digits: u32,
    deadline: Instant,
    samples: usize,
    degenerate: usize,
    best: Option<Sample>,
}

impl Searcher<'_> {
    fn expired(&self) -> bool {
        Instant::now() >= self.deadline
    }

    fn random_kappa(&self, rng: &mut ChaCha8Rng) -> Vec<Q> {
        (0..self.sd.m).map(|_| log_uniform_rational(rng, &self.lo, &self.hi, self.digits)).collect()
    }

    fn random_c(&self, rng: &mut ChaCha8Rng) -> Vec<Q> {
        let x: Vec<Q> = (0..self.sd.s).map(|_| log_uniform_rational(rng, &self.lo, &self.hi, self.digits)).collect();
        self.sd.total_constants(&x)
    }

    /// Nondegenerate count at (κ, c), or None for a degenerate or failed solve.
    fn evaluate(&mut self, kappa: Vec<Q>, c: Vec<Q>) -> Option<usize> {
        self.samples += 1;
        match solve_positive_steady_states(self.net, &kappa, &c) {
            Ok(sols) => {
                let nondegenerate = sols.iter().filter(|s| s.nondegenerate).count();
                let stable = |s: &Sample| s.sols.iter().filter(|x| x.stability == Stability::Stable).count();
                let cand = Sample { kappa, c, nondegenerate, sols };
                let better = match &self.best {
                    None => true,
                    Some(b) => (cand.nondegenerate, stable(&cand)) > (b.nondegenerate, stable(b)),
                };
                if better {
                    self.best = Some(cand);
                }
                Some(nondegenerate)
            }
            Err(_) => {
                self.degenerate += 1;
                None
            }
        }
    }

    fn line_search(&mut self, rng: &mut ChaCha8Rng, points: usize, steps: usize) {
        let a = self.random_kappa(rng);
        let b = self.random_kappa(rng);
        let c = self.random_c(rng);
        let digits = self.digits;
        let at = |t: f64| -> Vec<Q> {
            a.iter()
                .zip(&b)
                .map(|(x, y)| {
                    let (lx, ly) = (x.to_f64().unwrap().ln(), y.to_f64().unwrap().ln());
                    let v = (lx + t * (ly - lx)).exp();
                    round_sig(v, digits)
                })
                .collect()
        };
        let ts: Vec<f64> = (0..points.max(2)).map(|i| i as f64 / (points.max(2) - 1) as f64).collect();
        let mut counts = Vec::new();
        for &t in &ts {
            if self.expired() {
                return;
            }
            counts.push(self.evaluate(at(t), c.clone()));
        }
        for w in 0..ts.len() - 1 {
            let (mut l, mut r) = (ts[w], ts[w + 1]);
            let (cl, cr) = (counts[w], counts[w + 1]);
            if cl == cr {
                continue;
            }
            for _ in 0..steps {
                if self.expired() {
                    return;
                }
                let mid = 0.5 * (l + r);
                let cm = self.evaluate(at(mid), c.clone());
                if cm == cl {
                    l = mid;
                } else {
                    r = mid;
                }
            }
        }
    }
}

fn round_sig(v: f64, digits: u32) -> Q {
    let exp = v.log10().floor() as i32 - (digits as i32 - 1);
    let mantissa = BigInt::from((v / 10f64.powi(exp)).round() as i64);
    let ten = BigInt::from(10);
    if exp >= 0 {
        Q::from_integer(mantissa * ten.pow(exp as u32))
    } else {
        Q::new(mantissa, ten.pow((-exp) as u32))
    }
}

fn witness_of(s: &Sample) -> Witness {
    Witness {
        kappa: s.kappa.iter().map(|k| k.to_string()).collect(),
        c: s.c.iter().map(|k| k.to_string()).collect(),
        steady_states: s.sols.iter().map(|x| x.midpoint()).collect(),
        stability: s.sols.iter().map(|x| x.stability).collect(),
        nondegenerate: s.nondegenerate,
        stable: s.sols.iter().filter(|x| x.stability == Stability::Stable).count(),
    }
}

fn network_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64)
}

/// Screen and search one network.
pub fn screen_network(cfg: &PipelineConfig, index: usize, net: &ReactionNetwork) -> NetworkVerdictRecord {
    let start = Instant::now();
    let mut record = NetworkVerdictRecord {
        index,
        network: net.reactions_line(),
        stage: Stage::NoMultistationarityFound,
        witness: None,
        diagnostics: Diagnostics::default(),
        error: None,
    };
    let sd = stoichiometric_data(net);
    record.diagnostics.rank = sd.rank;
    if sd.s > 4 {
        record.error = Some(format!("{} species exceed the supported 4", sd.s));
        return record;
    }
    let rays = extreme_rays(&sd);
    record.diagnostics.rays = rays.len();
    if !strictly_positive_flux_exists(&rays) {
        record.stage = Stage::NoPositiveSteadyState;
        return record;
    }
    let mut screened = None;
    if sd.rank == 2 {
        if let Ok(rep) = sign_report(&sd, SignVariant::Reduced) {
            record.diagnostics.theta = Some(rep.theta.len());
            record.diagnostics.b_terms = Some(rep.b_terms);
            record.diagnostics.b_tilde_terms = Some(rep.b_tilde_terms);
            record.diagnostics.sign_verdict = Some(rep.verdict);
            if rep.verdict == SignVerdict::PositiveCertified {
                screened = Some(Stage::SignCertified);
            }
        }
    }
    if screened.is_none() && structured_injectivity(&sd) == Injectivity::Injective {
        screened = Some(Stage::ScreenedInjective);
    }
    if let Some(stage) = screened {
        record.stage = stage;
        if !cfg.search_screened {
            return record;
        }
    }
    let (lo, hi) = cfg.bounds().expect("validated config");
    let mut search = Searcher {
        net,
        sd: &sd,
        lo,
        hi,
        digits: cfg.significant_digits,
        deadline: start + Duration::from_secs_f64(cfg.timeout_secs),
        samples: 0,
        degenerate: 0,
        best: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(network_seed(cfg.seed, index));
    if cfg.use_witness_seeds {
        for kappa in catalog::witness_kappas(net) {
            search.evaluate(kappa, Vec::new());
        }
    }
    let mut timed_out = false;
    for _ in 0..cfg.sample_count {
        if search.expired() {
            timed_out = true;
            break;
        }
        let kappa = search.random_kappa(&mut rng);
        let c = search.random_c(&mut rng);
        search.evaluate(kappa, c);
    }
    for _ in 0..cfg.line_searches {
        if search.expired() {
            timed_out = true;
            break;
        }
        search.line_search(&mut rng, cfg.line_points, cfg.bisection_steps);
    }
    timed_out |= search.expired();
    record.diagnostics.samples = search.samples;
    record.diagnostics.degenerate_samples = search.degenerate;
    if let Some(best) = search.best.take() {
        // Re-solve at the recorded parameters; only the confirmed count is reported.
        let best = match solve_positive_steady_states(net, &best.kappa, &best.c) {
            Ok(sols) => {
                record.diagnostics.revalidated = true;
                let nondegenerate = sols.iter().filter(|s| s.nondegenerate).count();
                Sample { nondegenerate: nondegenerate.min(best.nondegenerate), sols, ..best }
            }
            Err(e) => {
                record.error = Some(format!("re-validation failed: {e}"));
                Sample { nondegenerate: 0, ..best }
            }
        };
        if sd.s == 3 && sd.rank == 3 {
            record.diagnostics.invariant_violations = best
                .sols
                .iter()
                .filter(|s| s.stability == Stability::Stable && s.det_jac_f_sign >= 0)
                .count();
        }
        let w = witness_of(&best);
        if let Some(stage) = screened {
            if w.nondegenerate >= 2 {
                record.diagnostics.invariant_violations += 1;
                record.error = Some(format!("{} network shows {} nondegenerate states", stage.as_str(), w.nondegenerate));
            }
            record.witness = Some(w);
            return record;
        }
        record.stage = if w.nondegenerate >= 2 && w.stable >= 2 {
            Stage::Multistable
        } else if w.nondegenerate >= 2 {
            Stage::Multistationary
        } else if timed_out {
            Stage::TimedOut
        } else {
            Stage::NoMultistationarityFound
        };
        record.witness = Some(w);
    } else if timed_out && screened.is_none() {
        record.stage = Stage::TimedOut;
    }
    record
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Records sorted by network index, plus the stage summary.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    cfg.validate()?;
    let nets = select_networks(cfg)?;
    let records: Vec<NetworkVerdictRecord> = with_workers(cfg.effective_workers(), || {
        nets.par_iter().enumerate().map(|(i, n)| screen_network(cfg, i, n)).collect()
    });
    let summary = summarize(&records);
    let report = PipelineReport { summary, records };
    if let Some(p) = &cfg.output_json {
        write_file(p, &serde_json::to_string_pretty(&report_json(&report)).expect("serializable"))?;
    }
    if let Some(p) = &cfg.output_csv {
        write_file(p, &records_csv(&report.records))?;
    }
    Ok(report)
}

pub fn summarize(records: &[NetworkVerdictRecord]) -> PipelineSummary {
    let by_stage = Stage::ALL.iter().map(|&s| (s, records.iter().filter(|r| r.stage == s).count())).collect();
    PipelineSummary {
        schema_version: SCHEMA_VERSION.to_string(),
        networks: records.len(),
        by_stage,
        errors: records.iter().filter(|r| r.error.is_some()).count(),
        invariant_violations: records.iter().map(|r| r.diagnostics.invariant_violations).sum(),
    }
}

pub fn report_json(report: &PipelineReport) -> serde_json::Value {
    let stages: serde_json::Map<String, serde_json::Value> =
        report.summary.by_stage.iter().map(|(s, n)| (s.as_str().to_string(), (*n).into())).collect();
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "summary": {
            "networks": report.summary.networks,
            "stages": stages,
            "errors": report.summary.errors,
            "invariant_violations": report.summary.invariant_violations,
        },
        "records": report.records,
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn records_csv(records: &[NetworkVerdictRecord]) -> String {
    let mut out = String::from("index,network,stage,rank,rays,samples,nondegenerate,stable,error\n");
    for r in records {
        let (nd, st) = r.witness.as_ref().map_or((0, 0), |w| (w.nondegenerate, w.stable));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.index,
            csv_field(&r.network),
            r.stage.as_str(),
            r.diagnostics.rank,
            r.diagnostics.rays,
            r.diagnostics.samples,
            nd,
            st,
            csv_field(r.error.as_deref().unwrap_or(""))
        ));
    }
    out
}

fn write_file(path: &Path, text: &str) -> Result<(), PipelineError> {
    std::fs::write(path, text).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

/// Report for `analyze`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub network: ReactionNetwork,
    pub rank: usize,
    pub summary: String,
    pub detail: serde_json::Value,
}

impl AnalysisReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "network": self.network.to_string(),
            "species": self.network.num_species(),
            "reactions": self.network.num_reactions(),
            "rank": self.rank,
            "summary": self.summary,
            "detail": self.detail,
        })
    }
}

fn fmt_point(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{}", (v * 1e9).round() / 1e9)).collect();
    format!("({})", parts.join(","))
}

fn solutions_json(sols: &[SteadyStateSolution]) -> serde_json::Value {
    sols.iter().map(|s| s.to_json()).collect()
}

fn describe_solutions(sols: &[SteadyStateSolution]) -> String {
    if sols.is_empty() {
        return "no positive steady states at these parameters".into();
    }
    let parts: Vec<String> = sols
        .iter()
        .map(|s| {
            let st = match s.stability {
                Stability::Stable => "stable",
                Stability::Unstable => "unstable",
                Stability::Undetermined => "undetermined",
            };
            format!("{st} {}", fmt_point(&s.midpoint()))
        })
        .collect();
    format!("{} positive steady state(s): {}", sols.len(), parts.join(", "))
}

fn check_lengths(sd: &StoichiometricData, kappa: Option<&[Q]>, c: Option<&[Q]>) -> Result<(), PipelineError> {
    if let Some(k) = kappa {
        if k.len() != sd.m {
            return Err(PipelineError::Input(format!("{} rate constants for {} reactions", k.len(), sd.m)));
        }
        if k.iter().any(|v| !v.is_positive()) {
            return Err(PipelineError::Input("rate constants must be positive".into()));
        }
    }
    if let Some(c) = c {
        if c.len() != sd.d() {
            return Err(PipelineError::Input(format!("{} total constants, need {}", c.len(), sd.d())));
        }
    }
    Ok(())
}

/// Dispatch by rank and species count.
pub fn analyze_network(
    net: &ReactionNetwork,
    kappa: Option<&[Q]>,
    c: Option<&[Q]>,
) -> Result<AnalysisReport, PipelineError> {
    let sd = stoichiometric_data(net);
    if sd.s > 4 {
        return Err(PipelineError::Unsupported(format!("{} species, at most 4 supported", sd.s)));
    }
    if !sd.is_zero_one() {
        return Err(PipelineError::Unsupported("stoichiometric coefficients must be 0 or 1".into()));
    }
    check_lengths(&sd, kappa, c)?;
    let c_default: Vec<Q> = Vec::new();
    let c_eff: Option<&[Q]> = if sd.d() == 0 { Some(c.unwrap_or(&c_default)) } else { c };
    let rays = extreme_rays(&sd);
    let flux = strictly_positive_flux_exists(&rays);
    let mut detail = serde_json::json!({ "extreme_rays": rays.len(), "positive_flux": flux });
    let mut summary;
    match sd.rank {
        0 => {
            summary = "no reactions change the state".into();
        }
        1 => {
            let st = onedim::analyze_one_dim(&sd)?;
            detail["one_dim"] = serde_json::json!({ "structure": st, "region": onedim::region(&st) });
            summary = if st.all_rows_change_sign {
                let reg: Vec<String> = onedim::region(&st).into_iter().map(|i| i.text).collect();
                if reg.is_empty() {
                    "one stable positive steady state in every class".into()
                } else {
                    format!("one stable positive steady state exactly in the classes with {}", reg.join(", "))
                }
            } else {
                "no positive steady states".into()
            };
            if let (Some(k), Some(c)) = (kappa, c_eff) {
                let rep = onedim::one_dim_full_verdict(net, k, c)?;
                summary = match &rep.steady_state {
                    Some(s) => format!("exactly one stable positive steady state {}", fmt_point(&s.midpoint())),
                    None => "no positive steady states in this class".into(),
                };
                detail["one_dim"] = rep.to_json();
            }
        }
        2 if sd.s == 2 => {
            let red = lowdim::two_species_reduce(net)?;
            let names = ["C1", "C2", "C3"];
            let mut coeffs = serde_json::Map::new();
            for (n, p) in names.iter().zip(&red.reduced) {
                coeffs.insert(n.to_string(), p.to_json());
            }
            detail["template_slots"] = red.k1.iter().map(|i| i + 1).collect::<Vec<_>>().into();
            detail["reduced_coefficients"] = coeffs.into();
            let det = det_jac_f(&build_f(&sd));
            detail["det_jac_f_is_zero"] = det.is_zero().into();
            summary = if det.is_zero() {
                "degenerate-continuum: det Jac_f vanishes identically".into()
            } else {
                "at most one positive steady state".into()
            };
            if let Some(k) = kappa {
                let v = lowdim::two_species_verdict(&red, k)?;
                detail["verdict"] = serde_json::to_value(v).unwrap();
                summary = match v {
                    TwoSpeciesVerdict::DegenerateContinuum => "degenerate-continuum".into(),
                    TwoSpeciesVerdict::NoPositive => "no positive steady states at these parameters".into(),
                    TwoSpeciesVerdict::OneNondegenerate => {
                        let sols = solve_positive_steady_states(net, k, &[])?;
                        detail["steady_states"] = solutions_json(&sols);
                        format!("one nondegenerate stable positive steady state: {}", describe_solutions(&sols))
                    }
                };
            }
        }
        2 => {
            let dv = if sd.s == 3 { Some(lowdim::degeneracy_verdict(net)?) } else { None };
            if sd.s == 3 {
                let cls = lowdim::classify_conservation_pair(&sd, net)?;
                detail["conservation_class"] = serde_json::to_value(&cls).unwrap();
            }
            let rep = sign_report(&sd, SignVariant::Reduced).ok();
            if let Some(r) = &rep {
                detail["sign"] = serde_json::to_value(r).unwrap();
            }
            summary = match (dv.as_ref().map(|d| d.kind), rep.as_ref().map(|r| r.verdict)) {
                (Some(DegeneracyKind::NoPositiveFlux), _) | (None, None) if !flux => {
                    "no positive steady states: no strictly positive flux".into()
                }
                (Some(DegeneracyKind::OnlyDegenerate), _) | (_, Some(SignVerdict::ZeroPolynomial)) => {
                    "only-degenerate: every positive steady state is degenerate".into()
                }
                (_, Some(SignVerdict::PositiveCertified)) => {
                    "positive-certified: at most one nondegenerate positive steady state per class".into()
                }
                _ => "inconclusive: sign criterion did not certify".into(),
            };
            if let (Some(k), Some(c)) = (kappa, c_eff) {
                match solve_positive_steady_states(net, k, c) {
                    Ok(sols) => {
                        detail["steady_states"] = solutions_json(&sols);
                        summary = format!("{summary}; {}", describe_solutions(&sols));
                    }
                    Err(SolveError::DegenerateContinuum) => summary = format!("{summary}; degenerate-continuum"),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        _ => {
            let inj = structured_injectivity(&sd);
            detail["injectivity"] = serde_json::to_value(inj).unwrap();
            summary = if !flux {
                "no positive steady states: no strictly positive flux".into()
            } else if inj == Injectivity::Injective {
                "injective: at most one positive steady state per class".into()
            } else {
                "injectivity undetermined".into()
            };
            if let (Some(k), Some(c)) = (kappa, c_eff) {
                match solve_positive_steady_states(net, k, c) {
                    Ok(sols) => {
                        detail["steady_states"] = solutions_json(&sols);
                        summary = format!("{summary}; {}", describe_solutions(&sols));
                    }
                    Err(SolveError::DegenerateContinuum) => summary = format!("{summary}; degenerate-continuum"),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    if let Some(k) = kappa {
        detail["kappa"] = k.iter().map(|v| v.to_string()).collect::<Vec<_>>().into();
    }
    Ok(AnalysisReport { network: net.clone(), rank: sd.rank, summary, detail })
}

/// Unit rates, used when a command needs some κ.
pub fn unit_kappa(m: usize) -> Vec<Q> {
    vec![Q::one(); m]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn single(id: &str) -> NetworkVerdictRecord {
        let cfg = PipelineConfig { sample_count: 5, line_searches: 1, ..Default::default() };
        screen_network(&cfg, 0, &catalog::network(id))
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational_list("1, 3/2,0.25").unwrap(), vec![q(1), Q::new(3.into(), 2.into()), Q::new(1.into(), 4.into())]);
        assert!(parse_rational_list("1/0").is_err());
        assert!(parse_rational_list("x").is_err());
        assert_eq!(parse_rational_list("").unwrap(), vec![]);
    }

    #[test]
    fn log_uniform_stays_in_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (lo, hi) = (Q::new(1.into(), 100.into()), q(100));
        for _ in 0..500 {
            let v = log_uniform_rational(&mut rng, &lo, &hi, 3);
            assert!(v >= lo && v <= hi);
            assert!(v.denom() <= &BigInt::from(100_000));
        }
    }

    #[test]
    fn witness_fixtures_reach_their_stage() {
        let rec = single("example5");
        assert_eq!(rec.stage, Stage::Multistationary);
        assert_eq!(rec.witness.unwrap().nondegenerate, 2);
        let rec = single("example6");
        assert_eq!(rec.stage, Stage::Multistable);
        assert_eq!(rec.witness.unwrap().stable, 2);
    }

    #[test]
    fn rank_three_with_three_reactions_has_nothing() {
        let cfg = PipelineConfig {
            species: 3,
            reactions: 3,
            filters: FilterSet { rank: Some(3), ..Default::default() },
            subsample: Some(40),
            sample_count: 2,
            ..Default::default()
        };
        let rep = run_pipeline(&cfg).unwrap();
        assert_eq!(rep.records.len(), 40);
        assert!(rep.records.iter().all(|r| r.stage == Stage::NoPositiveSteadyState));
    }

    #[test]
    fn pipeline_is_deterministic() {
        let cfg = PipelineConfig {
            reactions: 4,
            subsample: Some(6),
            sample_count: 3,
            line_searches: 1,
            seed: 7,
            ..Default::default()
        };
        let a = run_pipeline(&cfg).unwrap();
        let b = run_pipeline(&PipelineConfig { workers: Some(1), ..cfg }).unwrap();
        assert_eq!(records_csv(&a.records), records_csv(&b.records));
    }

    #[test]
    fn config_round_trips_through_toml() {
        let cfg = PipelineConfig { subsample: Some(3), seed: 11, ..Default::default() };
        let text = toml::to_string(&cfg).unwrap();
        let back: PipelineConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let bad = PipelineConfig { sample_count: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn conventions_at_two_species() {
        let c = count_conventions(2, 2).unwrap();
        assert_eq!(c.raw, 66);
        assert_eq!(c.orbit_total, 66);
        let direct = |f: FilterSet| enumerate_networks(2, 2, &f).unwrap().count() as u64;
        assert_eq!(c.positive_flux, direct(FilterSet { positive_flux: true, ..Default::default() }));
        assert_eq!(c.canonical, direct(FilterSet { canonical: true, ..Default::default() }));
        let nt = FilterSet { positive_flux: true, nondegenerate: true, ..Default::default() };
        assert_eq!(c.nontrivial, direct(nt.clone()));
        assert_eq!(c.nontrivial_canonical, direct(FilterSet { canonical: true, ..nt }));
    }

    #[test]
    fn analyze_dispatch() {
        let e2 = catalog::network("example2");
        let r = analyze_network(&e2, Some(&[q(1), q(1)]), Some(&[q(2), q(0)])).unwrap();
        assert_eq!(r.summary, "exactly one stable positive steady state (1,1,1)");
        let r = analyze_network(&catalog::network("g35"), None, None).unwrap();
        assert!(r.summary.starts_with("positive-certified"), "{}", r.summary);
        let r = analyze_network(&catalog::network("example3"), None, None).unwrap();
        assert!(r.summary.starts_with("degenerate-continuum"), "{}", r.summary);
        let e5 = catalog::network("example5");
        let r = analyze_network(&e5, Some(&catalog::example5_kappa()), None).unwrap();
        assert!(r.summary.contains("2 positive steady state(s): stable (1,1,1), unstable (2,2,2)"), "{}", r.summary);
        assert!(analyze_network(&e5, Some(&[q(1)]), None).is_err());
    }
}
