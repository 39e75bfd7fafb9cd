//! Running properties over seeded random cases and collecting a report.

use std::fmt::Write as _;
use std::time::Instant;

use fresco_core::rational::{qf, serde_qvec};
use fresco_core::{FrescoError, Result, Q};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::input::{Input, InputFile};
use crate::properties::{find, Ctx, Property, Verdict, PROPERTIES};
use crate::random::SampleSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Cases per property.
    pub cases: usize,
    pub rank_max: usize,
    pub m_max: usize,
    #[serde(with = "serde_qvec")]
    pub alpha_pool: Vec<Q>,
    pub value_dim_max: usize,
    pub log_bound: usize,
    pub cert_degree: usize,
    pub guard: usize,
    /// Extra attempts at a higher truncation after an instability.
    pub retries: usize,
    /// Property names; empty means all.
    pub properties: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cases: 20,
            rank_max: 6,
            m_max: 2,
            alpha_pool: vec![qf(1, 2), qf(1, 3), qf(2, 3), qf(1, 1)],
            value_dim_max: 2,
            log_bound: 2,
            cert_degree: 40,
            guard: 8,
            retries: 2,
            properties: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn spec(&self) -> SampleSpec {
        SampleSpec {
            alpha_pool: self.alpha_pool.clone(),
            m_max: self.m_max,
            log_bound: self.log_bound,
            value_dim_max: self.value_dim_max,
            rank_max: self.rank_max,
            cert_degree: self.cert_degree,
            guard: self.guard,
        }
    }

    pub fn selected(&self) -> Result<Vec<&'static Property>> {
        if self.properties.is_empty() {
            return Ok(PROPERTIES.iter().collect());
        }
        self.properties
            .iter()
            .map(|n| find(n).ok_or_else(|| FrescoError::Parse(format!("unknown property {n:?}"))))
            .collect()
    }
}

/// Step between retry truncations.
pub const RETRY_STEP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    Parallel,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Cases still unstable after every retry.
    pub unresolved: usize,
    pub retries: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.unresolved == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub case: usize,
    /// Seed of this case alone.
    pub case_seed: u64,
    pub cert_degree: usize,
    pub guard: usize,
    pub detail: String,
    pub input: InputFile,
    /// Whether the reloaded dump fails the same way.
    pub replays: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub properties: Vec<PropertyReport>,
    pub wall_ms: u64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::all_passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn without_timing(mut self) -> Self {
        self.wall_ms = 0;
        self
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for p in &self.properties {
            let status = if p.all_passed() { "ok" } else { "FAILED" };
            let _ = writeln!(
                s,
                "{:<28} {:>6} pass {:>4} fail {:>4} skip {:>4} unresolved {:>4} retries  {status}",
                p.name, p.passed, p.failed, p.skipped, p.unresolved, p.retries
            );
            for c in &p.counterexamples {
                let _ = writeln!(s, "    case {} (seed {:#x}): {}", c.case, c.case_seed, c.detail);
            }
        }
        let _ = writeln!(s, "seed {}, {} cases per property, {} ms", self.config.seed, self.config.cases, self.wall_ms);
        s
    }
}

/// Seed of case `case` of the property at `index`, independent of execution order.
pub fn case_seed(seed: u64, index: usize, case: usize) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r.set_word_pos(2 * case as u128);
    r.next_u64()
}

#[derive(Clone, Debug)]
enum Outcome {
    Pass,
    Fail(String),
    Skip,
    Unresolved,
}

struct CaseRecord {
    outcome: Outcome,
    retries: usize,
    cert: usize,
    seed: u64,
    input: Input,
}

fn is_instability(e: &FrescoError) -> bool {
    matches!(e, FrescoError::RankUnstable(_) | FrescoError::GuardExhausted(_))
}

fn run_case(prop: &Property, index: usize, case: usize, cfg: &SuiteConfig) -> CaseRecord {
    let seed = case_seed(cfg.seed, index, case);
    let input = prop.sample(seed, &cfg.spec());
    let mut cert = cfg.cert_degree;
    for attempt in 0..=cfg.retries {
        cert = cfg.cert_degree + attempt * RETRY_STEP;
        let ctx = Ctx { cert, guard: cfg.guard };
        let outcome = match prop.check(&input, &ctx) {
            Ok(Verdict::Pass) => Outcome::Pass,
            Ok(Verdict::Fail(m)) => Outcome::Fail(m),
            Ok(Verdict::Skip(_)) => Outcome::Skip,
            Err(e) if is_instability(&e) => continue,
            Err(e) => Outcome::Fail(format!("error: {e}")),
        };
        return CaseRecord { outcome, retries: attempt, cert, seed, input };
    }
    CaseRecord { outcome: Outcome::Unresolved, retries: cfg.retries, cert, seed, input }
}

/// Re-runs a dumped counterexample from its serialized input.
pub fn replay(c: &Counterexample) -> Result<Verdict> {
    let prop = find(&c.property).ok_or_else(|| FrescoError::Parse(format!("unknown property {:?}", c.property)))?;
    let input = Input::from_file(&c.input)?;
    prop.check(&input, &Ctx { cert: c.cert_degree, guard: c.guard })
}

fn detail_of(v: &Result<Verdict>) -> Option<String> {
    match v {
        Ok(Verdict::Fail(m)) => Some(m.clone()),
        Err(e) if !is_instability(e) => Some(format!("error: {e}")),
        _ => None,
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_suite_with(cfg, ExecMode::Parallel)
}

pub fn run_suite_with(cfg: &SuiteConfig, mode: ExecMode) -> Result<Report> {
    let start = Instant::now();
    let props = cfg.selected()?;
    let jobs: Vec<(usize, &Property, usize)> = props
        .iter()
        .map(|p| (PROPERTIES.iter().position(|q| q.name == p.name).expect("registered"), *p))
        .flat_map(|(i, p)| (0..cfg.cases).map(move |c| (i, p, c)))
        .collect();
    let run = |&(i, p, c): &(usize, &Property, usize)| (i, c, run_case(p, i, c, cfg));
    let mut records: Vec<(usize, usize, CaseRecord)> = match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            jobs.par_iter().map(run).collect()
        }
        _ => jobs.iter().map(run).collect(),
    };
    records.sort_by_key(|(i, c, _)| (*i, *c));

    let mut reports: Vec<PropertyReport> = Vec::new();
    for (i, case, rec) in records {
        let name = PROPERTIES[i].name;
        if reports.last().is_none_or(|r| r.name != name) {
            reports.push(PropertyReport { name: name.to_string(), ..Default::default() });
        }
        let r = reports.last_mut().expect("just pushed");
        r.retries += rec.retries;
        match rec.outcome {
            Outcome::Pass => r.passed += 1,
            Outcome::Skip => r.skipped += 1,
            Outcome::Unresolved => r.unresolved += 1,
            Outcome::Fail(detail) => {
                r.failed += 1;
                let mut c = Counterexample {
                    property: name.to_string(),
                    case,
                    case_seed: rec.seed,
                    cert_degree: rec.cert,
                    guard: cfg.guard,
                    detail: detail.clone(),
                    input: rec.input.to_file(),
                    replays: false,
                };
                c.replays = detail_of(&replay(&c)).as_deref() == Some(detail.as_str());
                r.counterexamples.push(c);
            }
        }
    }
    Ok(Report { config: cfg.clone(), properties: reports, wall_ms: start.elapsed().as_millis() as u64 })
}
