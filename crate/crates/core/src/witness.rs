//! Search for bases and an ordering under which the antichain of a non-slice tensor's
//! support has positive entropy, and the resulting exponent bounds for asymptotic slice rank.
//!
//! The loop keeps a concise presentation and repeatedly scans for the positive section of
//! largest dimension `d`. While `d < k` it moves one fixed coordinate of that section to
//! another value `z`, checks that the antichain reappears in the section at `z`, and
//! eliminates one of its points there. Each round strictly decreases `(|B|, -d)`, where
//! `|B|` is the total basis size.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::{gamma_entropy, is_entropy_zero, EntropyError};
use crate::order::{
    cartesian_check, has_positive_antichain, maximal_elements, ordering_count, section, section_entropy_scan, OrderError, ProductOrdering,
    ScanConfig, SectionSpec,
};
use crate::support::SupportSet;
use crate::tensor::{concise_reduce, eliminate_section_point, BasisStep, DenseTensor, SliceClass, TensorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("input is a slice tensor")]
    SliceInput,
    #[error("input is the zero tensor")]
    ZeroInput,
    #[error("no progress: potential {now:?} did not drop below {before:?}")]
    ProgressStalled {
        before: (usize, usize),
        now: (usize, usize),
    },
    #[error("round limit {0} reached")]
    RoundLimit(usize),
    #[error("antichain of section {section:?} does not reappear at value {z}")]
    TransportViolated { section: SectionSpec, z: i64 },
    #[error("transport hypotheses were not established")]
    HypothesisUnverified,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Every ordering of every section needed was enumerated.
    Exhaustive,
    /// Some sections were only sampled. The reported antichain entropy is still computed
    /// directly, so the lower bound stands.
    Heuristic,
}

/// How the transport hypotheses were established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypotheses {
    Exhaustive,
    Sampled,
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub scan: ScanConfig,
    pub max_rounds: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            scan: ScanConfig::default(),
            max_rounds: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub slice_class: SliceClass,
    pub h_value: f64,
    pub lower_base: f64,
    pub upper_base: f64,
    pub ordering: ProductOrdering,
    pub antichain: SupportSet,
    /// Basis steps taking the input to the final presentation, in order.
    pub transforms: Vec<BasisStep>,
    pub iterations: usize,
    pub certificate: Certificate,
    pub final_shape: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticBounds {
    pub lower_base: f64,
    pub upper_base: f64,
}

/// Checks the hypotheses of the transport step for the section `spec` of `g` under `s`:
/// the antichain has positive entropy, and every section obtained by freeing some of the
/// fixed axes has a zero-entropy antichain under every ordering.
///
/// Sections with more than `budget` orderings are not enumerated; the result is then
/// [`Hypotheses::Sampled`] at best.
pub fn verify_transport_hypotheses(
    g: &SupportSet,
    spec: &SectionSpec,
    s: &ProductOrdering,
    budget: u128,
) -> Result<Hypotheses, WitnessError> {
    let sec = section(g, spec)?;
    if sec.is_empty() || is_entropy_zero(&maximal_elements(&sec, s)?)? {
        return Ok(Hypotheses::Unverified);
    }
    let mut status = Hypotheses::Exhaustive;
    let n = spec.axes.len();
    // Every proper subset of the fixed axes, as a bit mask.
    for mask in 0..(1u32 << n) - 1 {
        let keep: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let sub = SectionSpec::new(
            keep.iter().map(|&j| spec.axes[j]).collect(),
            keep.iter().map(|&j| spec.values[j]).collect(),
        );
        let bigger = section(g, &sub)?;
        if is_entropy_zero(&bigger)? {
            continue;
        }
        if ordering_count(&bigger) > budget {
            status = Hypotheses::Sampled;
            continue;
        }
        if has_positive_antichain(&bigger)? {
            return Ok(Hypotheses::Unverified);
        }
    }
    Ok(status)
}

/// Whether the antichain of section `spec` under `s` lies in the section obtained by
/// replacing the first fixed value with `z1`.
pub fn transport_check(
    g: &SupportSet,
    spec: &SectionSpec,
    s: &ProductOrdering,
    z1: i64,
    hypotheses: Hypotheses,
) -> Result<bool, WitnessError> {
    if hypotheses == Hypotheses::Unverified {
        return Err(WitnessError::HypothesisUnverified);
    }
    if spec.axes.is_empty() {
        return Err(OrderError::InvalidSection("transport needs a fixed axis".into()).into());
    }
    if z1 == spec.values[0] {
        return Ok(true);
    }
    let anti = maximal_elements(&section(g, spec)?, s)?;
    let mut moved = spec.clone();
    moved.values[0] = z1;
    Ok(anti.is_subset(&section(g, &moved)?))
}

struct EngineRun {
    report: WitnessReport,
    presentations: Vec<SupportSet>,
}

fn run_engine(v: &DenseTensor, cfg: &EngineConfig) -> Result<EngineRun, WitnessError> {
    match v.slice_class() {
        SliceClass::Zero => return Err(WitnessError::ZeroInput),
        SliceClass::Slice => return Err(WitnessError::SliceInput),
        SliceClass::NonSlice => {}
    }
    let k = v.order();
    let mut presentations = vec![v.support()];
    let (mut cur, reduce) = concise_reduce(v)?;
    let mut steps: Vec<BasisStep> = reduce.into_iter().filter(|s| !is_trivial(s)).collect();
    let mut exhaustive = true;
    let g = cur.support();
    if cartesian_check(&g)?.is_none() {
        // A product support has no positive section; knock one point out of it. The two
        // slices stay independent, so the result is still concise.
        let y: Vec<usize> = g.points()[0][1..].iter().map(|&c| c as usize).collect();
        presentations.push(g);
        let (next, t) = eliminate_section_point(&cur, 0, 1, 2, &y)?;
        cur = next;
        steps.push(BasisStep::square(t));
    }
    let mut potential: Option<(usize, usize)> = None;
    for round in 1..=cfg.max_rounds {
        let g = cur.support();
        presentations.push(g.clone());
        let hit = match section_entropy_scan(&g, &cfg.scan) {
            Ok(hit) => hit,
            Err(OrderError::NoPositiveSection) => {
                let now = (cur.shape().iter().sum(), k + 1);
                return Err(WitnessError::ProgressStalled {
                    before: potential.unwrap_or(now),
                    now,
                });
            }
            Err(e) => return Err(e.into()),
        };
        exhaustive &= hit.exhaustive;
        // (|B|, -d) encoded as (|B|, k - d) so that both parts decrease.
        let now = (cur.shape().iter().sum::<usize>(), k - hit.dimension);
        if let Some(before) = potential {
            if now >= before {
                return Err(WitnessError::ProgressStalled { before, now });
            }
        }
        potential = Some(now);
        if hit.dimension == k {
            let h = gamma_entropy(&g, &cfg.scan.entropy)?.value;
            let report = WitnessReport {
                slice_class: SliceClass::NonSlice,
                h_value: hit.h_value,
                lower_base: hit.h_value.exp(),
                upper_base: h.exp(),
                ordering: hit.ordering,
                antichain: hit.antichain,
                transforms: steps,
                iterations: round,
                certificate: if exhaustive { Certificate::Exhaustive } else { Certificate::Heuristic },
                final_shape: cur.shape().to_vec(),
            };
            return Ok(EngineRun { report, presentations });
        }
        let axis = hit.section.axes[0];
        let x1 = hit.section.values[0];
        // Concise, so the values on each axis are exactly 1..=d_axis.
        let z1 = (1..=cur.shape()[axis] as i64).find(|&z| z != x1).ok_or(WitnessError::SliceInput)?;
        let hyp = if hit.exhaustive { Hypotheses::Exhaustive } else { Hypotheses::Sampled };
        if !transport_check(&g, &hit.section, &hit.ordering, z1, hyp)? {
            return Err(WitnessError::TransportViolated {
                section: hit.section,
                z: z1,
            });
        }
        let y = &hit.antichain.points()[0];
        let mut full = vec![0i64; k];
        for (&a, &val) in hit.section.axes.iter().zip(&hit.section.values) {
            full[a] = val;
        }
        for (&a, &val) in hit.section.free_axes(k).iter().zip(y) {
            full[a] = val;
        }
        let rest: Vec<usize> = (0..k).filter(|&a| a != axis).map(|a| full[a] as usize).collect();
        let (next, t) = eliminate_section_point(&cur, axis, x1 as usize, z1 as usize, &rest)?;
        steps.push(BasisStep::square(t));
        let (reduced, more) = concise_reduce(&next)?;
        steps.extend(more.into_iter().filter(|s| !is_trivial(s)));
        cur = reduced;
    }
    Err(WitnessError::RoundLimit(cfg.max_rounds))
}

fn is_trivial(step: &BasisStep) -> bool {
    step.keep == step.transform.dim() && step.transform.is_identity()
}

/// Bases and an ordering under which the support's antichain has positive entropy.
pub fn find_positive_entropy_presentation(v: &DenseTensor, cfg: &EngineConfig) -> Result<WitnessReport, WitnessError> {
    Ok(run_engine(v, cfg)?.report)
}

/// Lower and upper exponent bases for the asymptotic slice rank of `v`.
///
/// The upper base is the smallest `exp(H(Γ))` over the presentations met during the search.
pub fn asymptotic_bounds(v: &DenseTensor, cfg: &EngineConfig) -> Result<AsymptoticBounds, WitnessError> {
    match v.slice_class() {
        SliceClass::Zero => Err(WitnessError::ZeroInput),
        SliceClass::Slice => Ok(AsymptoticBounds {
            lower_base: 1.0,
            upper_base: 1.0,
        }),
        SliceClass::NonSlice => Ok(witness_and_bounds(v, cfg)?.1),
    }
}

/// The witness report together with the bounds, from a single search.
pub fn witness_and_bounds(v: &DenseTensor, cfg: &EngineConfig) -> Result<(WitnessReport, AsymptoticBounds), WitnessError> {
    let run = run_engine(v, cfg)?;
    let mut upper = run.report.upper_base;
    for g in &run.presentations {
        upper = upper.min(gamma_entropy(g, &cfg.scan.entropy)?.value.exp());
    }
    let bounds = AsymptoticBounds {
        lower_base: run.report.lower_base,
        upper_base: upper,
    };
    Ok((run.report, bounds))
}
