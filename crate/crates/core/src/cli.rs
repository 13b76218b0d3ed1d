//! Command implementations behind the `slicegap` binary.
//!
//! Each command returns an [`Outcome`]: the exit code and the text for stdout and stderr.
//! Exit codes: 0 success, 1 property violation, 2 input error, 3 internal stall.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{gamma_entropy, xi, EntropyConfig, EntropyError};
use crate::format::{parse_gamma, parse_tensor, parse_words};
use crate::order::{gap_assert, ProductOrdering, ScanConfig};
use crate::support::SupportSet;
use crate::tensor::{concise_reduce, SliceClass};
use crate::trifference::{
    format_word, haemers_certify, inductive_bound, is_trifferent, max_trifferent, HaemersCertificate, TrifferenceError,
    DEFAULT_SEARCH_BUDGET,
};
use crate::witness::{witness_and_bounds, EngineConfig, WitnessError, WitnessReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_STALL: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub ordering_budget: u128,
    pub json: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-6,
            max_iters: 200_000,
            seed: 0,
            ordering_budget: 1_000_000,
            json: false,
        }
    }
}

impl RunConfig {
    pub fn entropy(&self) -> EntropyConfig {
        EntropyConfig {
            tol: self.tol,
            max_iters: self.max_iters,
            seed: self.seed,
            ..EntropyConfig::default()
        }
    }

    pub fn engine(&self) -> EngineConfig {
        EngineConfig {
            scan: ScanConfig {
                ordering_budget: self.ordering_budget,
                seed: self.seed,
                entropy: self.entropy(),
                ..ScanConfig::default()
            },
            ..EngineConfig::default()
        }
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0) {
            return Err(format!("--tol must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 || self.ordering_budget == 0 {
            return Err("budgets must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: stderr.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn entropy_failure(e: EntropyError) -> Outcome {
    match e {
        EntropyError::NoConvergence { .. } => Outcome::fail(EXIT_STALL, e.to_string()),
        _ => Outcome::fail(EXIT_INPUT, e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub slice_class: SliceClass,
    pub shape: Vec<usize>,
    pub concise_shape: Vec<usize>,
    /// H of the support in the concise presentation.
    pub h_gamma: f64,
    /// Best antichain entropy found; absent for slice and zero tensors.
    pub h_value: Option<f64>,
    pub lower_base: Option<f64>,
    pub upper_base: Option<f64>,
    pub witness: Option<WitnessReport>,
    pub summary: String,
}

pub fn cmd_analyze(path: &Path, cfg: &RunConfig) -> Outcome {
    if let Err(e) = cfg.validate() {
        return Outcome::fail(EXIT_INPUT, e);
    }
    let text = match read(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let v = match parse_tensor(&text) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_INPUT, format!("{}: {e}", path.display())),
    };
    let concise = match concise_reduce(&v) {
        Ok((c, _)) => c,
        Err(e) => return Outcome::fail(EXIT_STALL, e.to_string()),
    };
    let class = v.slice_class();
    let h_gamma = if class == SliceClass::Zero {
        0.0
    } else {
        match gamma_entropy(&concise.support(), &cfg.entropy()) {
            Ok(r) => r.value,
            Err(e) => return entropy_failure(e),
        }
    };
    let mut report = AnalyzeReport {
        slice_class: class,
        shape: v.shape().to_vec(),
        concise_shape: concise.shape().to_vec(),
        h_gamma,
        h_value: None,
        lower_base: None,
        upper_base: None,
        witness: None,
        summary: String::new(),
    };
    match class {
        SliceClass::Zero => report.summary = "zero tensor; slice rank 0".into(),
        SliceClass::Slice => {
            report.lower_base = Some(1.0);
            report.upper_base = Some(1.0);
            report.summary = "slice; asymptotic slice rank 1".into();
        }
        SliceClass::NonSlice => match witness_and_bounds(&v, &cfg.engine()) {
            Ok((w, b)) => {
                report.h_value = Some(w.h_value);
                report.lower_base = Some(b.lower_base);
                report.upper_base = Some(b.upper_base);
                report.summary = format!(
                    "not a slice; asymptotic slice rank between {:.6} and {:.6} ({:?} certificate)",
                    b.lower_base, b.upper_base, w.certificate
                );
                report.witness = Some(w);
            }
            Err(WitnessError::Entropy(e)) => return entropy_failure(e),
            Err(e) => return Outcome::fail(EXIT_STALL, e.to_string()),
        },
    }
    if cfg.json {
        return Outcome::ok(to_json(&report));
    }
    let mut out = format!(
        "slice_class: {:?}\nshape: {:?}\nconcise_shape: {:?}\nH(support): {:.9}\n",
        report.slice_class, report.shape, report.concise_shape, report.h_gamma
    );
    if let Some(w) = &report.witness {
        out += &format!("H(antichain): {:.9}\n", w.h_value);
        out += &format!("ordering: {:?}\n", w.ordering.per_axis());
        out += &format!("antichain: {:?}\n", w.antichain.points());
        out += &format!("basis steps: {}\n", w.transforms.len());
    }
    if let (Some(lo), Some(hi)) = (report.lower_base, report.upper_base) {
        out += &format!("lower_base: {lo:.9}\nupper_base: {hi:.9}\n");
    }
    out += &report.summary;
    out.push('\n');
    Outcome::ok(out)
}

pub fn cmd_entropy(path: &Path, cfg: &RunConfig) -> Outcome {
    if let Err(e) = cfg.validate() {
        return Outcome::fail(EXIT_INPUT, e);
    }
    let text = match read(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let g = match parse_gamma(&text) {
        Ok(g) => g,
        Err(e) => return Outcome::fail(EXIT_INPUT, format!("{}: {e}", path.display())),
    };
    let r = match gamma_entropy(&g, &cfg.entropy()) {
        Ok(r) => r,
        Err(e) => return entropy_failure(e),
    };
    if cfg.json {
        return Outcome::ok(to_json(&r));
    }
    let mut out = format!(
        "H: {:.9}\nexp(H): {:.9}\nupper bound: {:.9}\nmarginal entropies: {:?}\niterations: {}\nargmax:\n",
        r.value, r.exponent_base, r.upper_bound, r.marginal_entropies, r.iterations
    );
    for (p, w) in r.argmax.support().iter().zip(r.argmax.weights()) {
        out += &format!("  {p:?} {w:.9}\n");
    }
    Outcome::ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapFailure {
    pub gamma: SupportSet,
    pub ordering: ProductOrdering,
    pub h_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScanSummary {
    pub k: usize,
    pub trials: usize,
    pub passed: usize,
    pub zero: usize,
    pub min_nonzero_h: Option<f64>,
    pub xi: f64,
    pub failures: Vec<GapFailure>,
}

/// Random support in `[1..4]^k` with between 1 and 12 points.
pub fn random_support(k: usize, rng: &mut ChaCha8Rng) -> SupportSet {
    let n = rng.gen_range(1..=12);
    let pts = (0..n).map(|_| (0..k).map(|_| rng.gen_range(1..=4)).collect());
    SupportSet::new(k, pts).expect("arity k")
}

pub fn cmd_gap_scan(k: usize, trials: usize, cfg: &RunConfig) -> Outcome {
    if let Err(e) = cfg.validate() {
        return Outcome::fail(EXIT_INPUT, e);
    }
    if !(2..=6).contains(&k) {
        return Outcome::fail(EXIT_INPUT, format!("k must be in 2..=6, got {k}"));
    }
    if trials == 0 {
        return Outcome::fail(EXIT_INPUT, "trials must be at least 1");
    }
    let xi_k = xi(k).expect("k >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ecfg = cfg.entropy();
    let mut summary = GapScanSummary {
        k,
        trials,
        passed: 0,
        zero: 0,
        min_nonzero_h: None,
        xi: xi_k,
        failures: Vec::new(),
    };
    for _ in 0..trials {
        let g = random_support(k, &mut rng);
        let s = ProductOrdering::random(&g, &mut rng);
        let r = match gap_assert(&g, &s, 1e-4, &ecfg) {
            Ok(r) => r,
            Err(crate::order::OrderError::Entropy(e)) => return entropy_failure(e),
            Err(e) => return Outcome::fail(EXIT_STALL, e.to_string()),
        };
        if r.zero {
            summary.zero += 1;
        } else {
            summary.min_nonzero_h = Some(summary.min_nonzero_h.map_or(r.h_value, |m| m.min(r.h_value)));
        }
        if r.passed {
            summary.passed += 1;
        } else {
            summary.failures.push(GapFailure {
                gamma: g,
                ordering: s,
                h_value: r.h_value,
            });
        }
    }
    let code = if summary.passed == trials { EXIT_OK } else { EXIT_VIOLATION };
    let stdout = if cfg.json {
        to_json(&summary)
    } else {
        let min = summary.min_nonzero_h.map_or("none".to_string(), |h| format!("{h:.9}"));
        let mut out = format!(
            "k={k} trials={trials} passed={} zero={} min_nonzero_H={min} xi_k={xi_k:.9}\n",
            summary.passed, summary.zero
        );
        for f in &summary.failures {
            out += &format!("FAIL {:?} {:?} H={}\n", f.gamma.points(), f.ordering.per_axis(), f.h_value);
        }
        out
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub size: usize,
    pub trifferent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub size: usize,
    pub inductive_bound: f64,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrifferenceCmd<'a> {
    Verify(&'a Path),
    Search(usize),
    Bound(usize),
    Certify(&'a Path),
}

fn read_words(path: &Path) -> Result<Vec<Vec<u8>>, Outcome> {
    let text = read(path)?;
    parse_words(&text).map_err(|e| Outcome::fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

pub fn cmd_trifference(cmd: TrifferenceCmd<'_>, cfg: &RunConfig) -> Outcome {
    let emit = |json: String, text: String| Outcome::ok(if cfg.json { json } else { text });
    match cmd {
        TrifferenceCmd::Verify(path) => {
            let words = match read_words(path) {
                Ok(w) => w,
                Err(o) => return o,
            };
            let trifferent = is_trifferent(&words).expect("lengths checked by parser");
            let mut set = words.clone();
            set.sort();
            set.dedup();
            let r = VerifyReport {
                n: words[0].len(),
                size: set.len(),
                trifferent,
            };
            let mut o = emit(to_json(&r), format!("n={} size={} trifferent={}\n", r.n, r.size, r.trifferent));
            if !trifferent {
                o.code = EXIT_VIOLATION;
            }
            o
        }
        TrifferenceCmd::Search(n) => match max_trifferent(n, DEFAULT_SEARCH_BUDGET) {
            Ok((size, witness)) => {
                let r = SearchReport {
                    n,
                    size,
                    inductive_bound: inductive_bound(n),
                    witness: witness.iter().map(|w| format_word(w)).collect(),
                };
                let text = format!(
                    "T({n}) = {size} (inductive bound {:.3})\n{}\n",
                    r.inductive_bound,
                    r.witness.join("\n")
                );
                emit(to_json(&r), text)
            }
            Err(e @ TrifferenceError::BudgetExceeded { .. }) => Outcome::fail(EXIT_STALL, e.to_string()),
            Err(e) => Outcome::fail(EXIT_INPUT, e.to_string()),
        },
        TrifferenceCmd::Bound(n) => {
            let r = BoundReport {
                n,
                bound: inductive_bound(n),
            };
            emit(to_json(&r), format!("{}\n", r.bound))
        }
        TrifferenceCmd::Certify(path) => {
            let words = match read_words(path) {
                Ok(w) => w,
                Err(o) => return o,
            };
            match haemers_certify(&words) {
                Ok(c) => {
                    let text = certificate_text(&c);
                    let mut o = emit(to_json(&c), text);
                    if !c.passed {
                        o.code = EXIT_VIOLATION;
                    }
                    o
                }
                Err(TrifferenceError::NotTrifferent) => Outcome::fail(EXIT_VIOLATION, "the set is not trifferent"),
                Err(e) => Outcome::fail(EXIT_INPUT, e.to_string()),
            }
        }
    }
}

fn certificate_text(c: &HaemersCertificate) -> String {
    format!(
        "n={} |A|={} pairs={} diagonal_nonzero={} off_diagonal_zero={} monomials={} 3^n={}\n\
         cap |A| <= {:.3}\n{}\n",
        c.n,
        c.size,
        c.pairs,
        c.diagonal_nonzero,
        c.off_diagonal_zero,
        c.monomials,
        c.dimension,
        c.implied_cap,
        if c.passed { "pass" } else { "FAIL" }
    )
}
