//! Cost-benefit analysis of interaction tasks: device utilization, the
//! benefit-per-cost ratio (alphabet compression minus potential distortion,
//! divided by expected cost), mistake-shift distortion, step-layout
//! comparison, and knowledge-rate estimation.

use crate::action::{ActionAlphabet, KnowledgeLedger};
use crate::dist::{kl_divergence, EpsilonPolicy, ProbabilityDistribution};
use crate::device::InputDeviceSpec;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// How many elementary steps each letter of an alphabet costs, and what a
/// step is worth in seconds.
///
/// The step map must cover exactly the labels of the alphabet it is
/// evaluated against; that alignment is checked at evaluation time.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    per_letter_steps: BTreeMap<String, u32>,
    unit_step_seconds: f64,
    fixed_overhead_seconds: f64,
}

impl CostModel {
    pub fn new(
        per_letter_steps: BTreeMap<String, u32>,
        unit_step_seconds: f64,
        fixed_overhead_seconds: f64,
    ) -> Result<Self> {
        for (label, steps) in &per_letter_steps {
            if *steps == 0 {
                return Err(Error::Validation(format!(
                    "letter {label:?} needs at least one step"
                )));
            }
        }
        if !unit_step_seconds.is_finite() || unit_step_seconds <= 0.0 {
            return Err(Error::Validation(format!(
                "unit step duration must be positive, got {unit_step_seconds}"
            )));
        }
        if !fixed_overhead_seconds.is_finite() || fixed_overhead_seconds < 0.0 {
            return Err(Error::Validation(format!(
                "fixed overhead must be non-negative, got {fixed_overhead_seconds}"
            )));
        }
        Ok(Self {
            per_letter_steps,
            unit_step_seconds,
            fixed_overhead_seconds,
        })
    }

    /// Cost model that charges the same step count for every one of the
    /// given labels.
    pub fn uniform(labels: impl IntoIterator<Item = String>, steps: u32, unit_step_seconds: f64, fixed_overhead_seconds: f64) -> Result<Self> {
        Self::new(
            labels.into_iter().map(|l| (l, steps)).collect(),
            unit_step_seconds,
            fixed_overhead_seconds,
        )
    }

    pub fn per_letter_steps(&self) -> &BTreeMap<String, u32> {
        &self.per_letter_steps
    }

    pub fn unit_step_seconds(&self) -> f64 {
        self.unit_step_seconds
    }

    pub fn fixed_overhead_seconds(&self) -> f64 {
        self.fixed_overhead_seconds
    }

    /// Expected cost in seconds of drawing one letter from `d`:
    /// `unit_step_seconds x E[steps] + fixed_overhead_seconds`.
    ///
    /// The step map and the distribution must carry exactly the same labels.
    pub fn expected_seconds(&self, d: &ProbabilityDistribution) -> Result<f64> {
        if self.per_letter_steps.len() != d.len() {
            return Err(Error::Alignment(format!(
                "cost model covers {} letters but the alphabet has {}",
                self.per_letter_steps.len(),
                d.len()
            )));
        }
        let mut expected_steps = 0.0;
        for (label, p) in d.iter() {
            let steps = self.per_letter_steps.get(label).ok_or_else(|| {
                Error::Alignment(format!("no step count for letter {label:?}"))
            })?;
            expected_steps += p * f64::from(*steps);
        }
        Ok(self.unit_step_seconds * expected_steps + self.fixed_overhead_seconds)
    }
}

/// A systematic selection mistake: `mass` of the probability of `from_label`
/// ends up on `to_label` instead, and each affected case costs
/// `extra_cost_seconds` to recover from.
#[derive(Debug, Clone, PartialEq)]
pub struct MistakeModel {
    from_label: String,
    to_label: String,
    mass: f64,
    extra_cost_seconds: f64,
}

impl MistakeModel {
    pub fn new(
        from_label: impl Into<String>,
        to_label: impl Into<String>,
        mass: f64,
        extra_cost_seconds: f64,
    ) -> Result<Self> {
        let from_label = from_label.into();
        let to_label = to_label.into();
        if from_label == to_label {
            return Err(Error::Validation(format!(
                "mistake source and target are both {from_label:?}"
            )));
        }
        if !mass.is_finite() || !(0.0..1.0).contains(&mass) {
            return Err(Error::Validation(format!(
                "mistake mass must lie in [0, 1), got {mass}"
            )));
        }
        if !extra_cost_seconds.is_finite() || extra_cost_seconds < 0.0 {
            return Err(Error::Validation(format!(
                "recovery cost must be non-negative, got {extra_cost_seconds}"
            )));
        }
        Ok(Self {
            from_label,
            to_label,
            mass,
            extra_cost_seconds,
        })
    }

    pub fn from_label(&self) -> &str {
        &self.from_label
    }

    pub fn to_label(&self) -> &str {
        &self.to_label
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn extra_cost_seconds(&self) -> f64 {
        self.extra_cost_seconds
    }
}

/// Everything the benefit-per-cost metric produces for one task.
///
/// `action_capacity`, `alphabet_compression`, and `potential_distortion` are
/// in bits; `expected_cost_seconds` in seconds; `cost_benefit` in bits per
/// second; `du` is the dimensionless device-utilization ratio, present only
/// when a device and a task duration were supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskEvaluation {
    pub action_capacity: f64,
    pub alphabet_compression: f64,
    pub potential_distortion: f64,
    pub expected_cost_seconds: f64,
    pub du: Option<f64>,
    pub cost_benefit: f64,
}

/// Fraction of a device's raw bit budget a task actually uses:
/// `action_capacity / (task_seconds x dev_bandwidth)`.
///
/// Deliberately not clamped at 1: capacity and bandwidth are declared
/// independently, so over-unity inputs are representable.
pub fn device_utilization(
    action_capacity: f64,
    task_seconds: f64,
    dev_bandwidth: f64,
) -> Result<f64> {
    if !action_capacity.is_finite() || action_capacity < 0.0 {
        return Err(Error::Domain(format!(
            "action capacity must be non-negative, got {action_capacity}"
        )));
    }
    if !task_seconds.is_finite() || task_seconds <= 0.0 {
        return Err(Error::Domain(format!(
            "task duration must be positive, got {task_seconds}"
        )));
    }
    if !dev_bandwidth.is_finite() || dev_bandwidth <= 0.0 {
        return Err(Error::Domain(format!(
            "device bandwidth must be positive, got {dev_bandwidth}"
        )));
    }
    Ok(action_capacity / (task_seconds * dev_bandwidth))
}

/// Entropy lost between an input and an output distribution:
/// `H(input) - H(output)`. For a task completed with a single definite
/// answer the output entropy is 0, so this equals the input entropy.
pub fn alphabet_compression(
    input: &ProbabilityDistribution,
    output: &ProbabilityDistribution,
) -> f64 {
    input.entropy() - output.entropy()
}

/// Moves `mass` of probability from one letter to another, leaving the rest
/// untouched.
pub fn apply_mistake_shift(
    d: &ProbabilityDistribution,
    m: &MistakeModel,
) -> Result<ProbabilityDistribution> {
    shift_mass(d, m.from_label(), m.to_label(), m.mass())
}

/// Shared shift kernel; unlike [`MistakeModel`], allows `mass` all the way
/// up to `p(from)` inclusive (needed when probing the exhaustion boundary).
fn shift_mass(
    d: &ProbabilityDistribution,
    from: &str,
    to: &str,
    mass: f64,
) -> Result<ProbabilityDistribution> {
    let p_from = d
        .probability(from)
        .ok_or_else(|| Error::Alignment(format!("no letter {from:?} in the alphabet")))?;
    d.probability(to)
        .ok_or_else(|| Error::Alignment(format!("no letter {to:?} in the alphabet")))?;
    if from == to {
        return Err(Error::Validation("shift source equals target".into()));
    }
    if !mass.is_finite() || mass < 0.0 {
        return Err(Error::Domain(format!(
            "shift mass must be non-negative, got {mass}"
        )));
    }
    // Tiny slack so that a mass quoted to the displayed precision of a
    // renormalized probability still passes.
    if mass > p_from + 1e-12 {
        return Err(Error::Domain(format!(
            "shift mass {mass} exceeds p({from:?}) = {p_from}"
        )));
    }
    let mass = mass.min(p_from);
    // Built without renormalization: letters other than the pair stay
    // bitwise identical, and the pair exchanges exactly the shifted mass.
    Ok(ProbabilityDistribution::from_validated(
        d.iter()
            .map(|(label, p)| {
                let q = if label == from {
                    p - mass
                } else if label == to {
                    p + mass
                } else {
                    p
                };
                (label.to_string(), q)
            })
            .collect(),
    ))
}

/// Runs the full benefit-per-cost pipeline for one task.
///
/// Expected cost uses the alphabet's own letter probabilities (the mistake
/// adds `mass x extra_cost_seconds` on top). Potential distortion is the
/// capped divergence of the mistake-shifted distribution from the original,
/// or 0 without a mistake. The ratio is
/// `(alphabet_compression - potential_distortion) / expected_cost`.
pub fn evaluate_task(
    alphabet: &ActionAlphabet,
    cost: &CostModel,
    mistake: Option<&MistakeModel>,
    device: Option<&InputDeviceSpec>,
    task_seconds: Option<f64>,
    policy: &EpsilonPolicy,
) -> Result<TaskEvaluation> {
    let d = alphabet.distribution();
    let mut expected_cost = cost.expected_seconds(d)?;
    let mut potential_distortion = 0.0;
    if let Some(m) = mistake {
        let shifted = apply_mistake_shift(d, m)?;
        potential_distortion = kl_divergence(&shifted, d, policy)?;
        expected_cost += m.mass() * m.extra_cost_seconds();
    }
    let action_capacity = alphabet.capacity();
    // A completed task collapses the alphabet to a single definite letter,
    // so the compression is the full input entropy.
    let alphabet_compression = action_capacity;
    let du = match (device, task_seconds) {
        (Some(dev), Some(t)) => Some(device_utilization(
            action_capacity,
            t,
            dev.bandwidth(),
        )?),
        _ => None,
    };
    Ok(TaskEvaluation {
        action_capacity,
        alphabet_compression,
        potential_distortion,
        expected_cost_seconds: expected_cost,
        du,
        cost_benefit: (alphabet_compression - potential_distortion) / expected_cost,
    })
}

/// Absolute tolerance of the bisection in [`negative_threshold`].
pub const THRESHOLD_TOLERANCE: f64 = 1e-6;

/// Smallest mistake mass shifting `from` to `to` that drives the benefit
/// `H(d) - KL(shifted || d)` negative, found by bisection to within
/// [`THRESHOLD_TOLERANCE`]. Returns `None` when no mass up to `p(from)`
/// manages it.
pub fn negative_threshold(
    d: &ProbabilityDistribution,
    from: &str,
    to: &str,
    policy: &EpsilonPolicy,
) -> Result<Option<f64>> {
    let p_from = d
        .probability(from)
        .ok_or_else(|| Error::Alignment(format!("no letter {from:?} in the alphabet")))?;
    if d.probability(to).is_none() {
        return Err(Error::Alignment(format!("no letter {to:?} in the alphabet")));
    }
    if from == to {
        return Err(Error::Validation("shift source equals target".into()));
    }
    let entropy = d.entropy();
    let benefit = |mass: f64| -> Result<f64> {
        let shifted = shift_mass(d, from, to, mass)?;
        Ok(entropy - kl_divergence(&shifted, d, policy)?)
    };
    if p_from <= 0.0 || benefit(p_from)? >= 0.0 {
        return Ok(None);
    }
    // benefit(0) = H(d) >= 0, benefit(p_from) < 0: bisect the sign change.
    let (mut lo, mut hi) = (0.0, p_from);
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if benefit(mid)? < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Re-evaluates a task after permuting which letter gets which step count:
/// the new step count of letter `l` is the old step count of
/// `permutation[l]`. Probabilities (and hence capacity) are untouched, and
/// no mistake model applies.
pub fn reassign_steps(
    alphabet: &ActionAlphabet,
    cost: &CostModel,
    permutation: &BTreeMap<String, String>,
) -> Result<TaskEvaluation> {
    let labels: Vec<&str> = alphabet.distribution().labels().collect();
    if permutation.len() != labels.len() {
        return Err(Error::Validation(format!(
            "permutation maps {} labels but the alphabet has {}",
            permutation.len(),
            labels.len()
        )));
    }
    let mut targets = std::collections::HashSet::new();
    for label in &labels {
        let target = permutation.get(*label).ok_or_else(|| {
            Error::Validation(format!("permutation misses letter {label:?}"))
        })?;
        if !labels.contains(&target.as_str()) {
            return Err(Error::Validation(format!(
                "permutation target {target:?} is not a letter of the alphabet"
            )));
        }
        if !targets.insert(target.as_str()) {
            return Err(Error::Validation(format!(
                "permutation maps two letters onto {target:?}"
            )));
        }
    }
    let mut permuted = BTreeMap::new();
    for label in &labels {
        let source = &permutation[*label];
        let steps = cost.per_letter_steps().get(source).ok_or_else(|| {
            Error::Alignment(format!("no step count for letter {source:?}"))
        })?;
        permuted.insert((*label).to_string(), *steps);
    }
    let swapped = CostModel::new(
        permuted,
        cost.unit_step_seconds(),
        cost.fixed_overhead_seconds(),
    )?;
    evaluate_task(
        alphabet,
        &swapped,
        None,
        None,
        None,
        &EpsilonPolicy::default(),
    )
}

/// Breakdown of how fast a task converts knowledge into action data.
///
/// The second transformation (`f2`) turns decided-upon knowledge into an
/// input action and contributes the action alphabet's entropy; the first
/// (`f1`) compresses everything else in the ledger down to that decision.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeRate {
    /// Ledger total minus the action alphabet's entropy; `None` when the
    /// ledger is empty (no first transformation to speak of). A negative
    /// value means the ledger understates what the action itself carries —
    /// report it, but treat it as a warning.
    pub f1_compression: Option<f64>,
    /// Entropy of the action alphabet, in bits.
    pub f2_compression: f64,
    /// Total benefit in bits: the ledger total, or the action entropy alone
    /// when the ledger is empty.
    pub total_benefit: f64,
    /// Total benefit divided by the task duration, in bits per second.
    pub rate: f64,
}

/// Estimates the knowledge-to-action rate of a task: how many bits of
/// ledgered knowledge the interaction converts per second.
pub fn estimate_f1_f2_rate(
    ledger: &KnowledgeLedger,
    f2: &ActionAlphabet,
    task_seconds: f64,
) -> Result<KnowledgeRate> {
    if !task_seconds.is_finite() || task_seconds <= 0.0 {
        return Err(Error::Domain(format!(
            "task duration must be positive, got {task_seconds}"
        )));
    }
    let f2_compression = f2.capacity();
    let (f1_compression, total_benefit) = if ledger.is_empty() {
        (None, f2_compression)
    } else {
        let total = ledger.total_bits();
        (Some(total - f2_compression), total)
    };
    Ok(KnowledgeRate {
        f1_compression,
        f2_compression,
        total_benefit,
        rate: total_benefit / task_seconds,
    })
}
