//! Controlled-experiment analysis: turns trial records (accuracy and
//! response time) into benefit and cost via a four-stage alphabet workflow.
//!
//! A study concatenates one bit slice per sub-model into `k`-bit answer
//! letters. The same `2^k`-letter alphabet is viewed at four stages: the
//! softened ground truth (`a1`), the maximally uncertain question stage
//! (`a2`), a softened individual decision (`a3`), and the raw aggregated
//! responses (`a4`).

use crate::action::bit_labels;
use crate::dist::{kl_divergence, EpsilonPolicy, ProbabilityDistribution};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::io::Read;

/// One investigated aspect of a stimulus, answered with `bits` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubModelSpec {
    name: String,
    bits: u32,
}

impl SubModelSpec {
    pub fn new(name: impl Into<String>, bits: u32) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Validation("empty sub-model name".into()));
        }
        if bits == 0 {
            return Err(Error::Validation(format!(
                "sub-model {name:?} needs at least one bit"
            )));
        }
        Ok(Self { name, bits })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

/// How responses should be aggregated into the answer-stage entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregationMode {
    /// Each participant is assumed to answer consistently: the answer stage
    /// is a softened one-hot at the (modal) decision, so compression depends
    /// only on the design.
    ConsistentIndividual,
    /// Answers come from interchangeable participants (a random team, or one
    /// participant treated as a random source): the answer stage is the raw
    /// response distribution itself.
    RandomTeamOrSingleParticipant,
}

/// The full description of a study: its sub-models, softening policy,
/// reference ground truth, aggregation mode, and (optionally) how many
/// distinct stimuli the material was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyDesign {
    submodels: Vec<SubModelSpec>,
    epsilon: EpsilonPolicy,
    ground_truth: String,
    aggregation_mode: AggregationMode,
    stimulus_space_size: Option<u64>,
}

/// Checks that `s` is a `k`-bit string of '0'/'1'.
fn check_bit_string(s: &str, k: u32, what: &str) -> Result<()> {
    if s.len() != k as usize {
        return Err(Error::Format(format!(
            "{what} {s:?} has {} bits, expected {k}",
            s.len()
        )));
    }
    if !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Format(format!("{what} {s:?} is not a bit string")));
    }
    Ok(())
}

impl StudyDesign {
    pub fn new(
        submodels: Vec<SubModelSpec>,
        epsilon: EpsilonPolicy,
        ground_truth: impl Into<String>,
        aggregation_mode: AggregationMode,
        stimulus_space_size: Option<u64>,
    ) -> Result<Self> {
        if submodels.is_empty() {
            return Err(Error::Validation("a study needs at least one sub-model".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for s in &submodels {
            if !seen.insert(s.name()) {
                return Err(Error::Validation(format!(
                    "duplicate sub-model name {:?}",
                    s.name()
                )));
            }
        }
        let total: u64 = submodels.iter().map(|s| u64::from(s.bits())).sum();
        if total > 24 {
            return Err(Error::TooLarge(format!(
                "{total} total bits would need 2^{total} letters, beyond the 2^24 cap"
            )));
        }
        let ground_truth = ground_truth.into();
        check_bit_string(&ground_truth, total as u32, "ground truth")?;
        if stimulus_space_size == Some(0) {
            return Err(Error::Validation(
                "stimulus space size must be positive".into(),
            ));
        }
        Ok(Self {
            submodels,
            epsilon,
            ground_truth,
            aggregation_mode,
            stimulus_space_size,
        })
    }

    pub fn submodels(&self) -> &[SubModelSpec] {
        &self.submodels
    }

    pub fn epsilon(&self) -> &EpsilonPolicy {
        &self.epsilon
    }

    pub fn ground_truth(&self) -> &str {
        &self.ground_truth
    }

    pub fn aggregation_mode(&self) -> AggregationMode {
        self.aggregation_mode
    }

    pub fn stimulus_space_size(&self) -> Option<u64> {
        self.stimulus_space_size
    }

    /// Total answer width `k` in bits.
    pub fn total_bits(&self) -> u32 {
        self.submodels.iter().map(SubModelSpec::bits).sum()
    }

    /// The `2^k` answer letters in counting order.
    pub fn labels(&self) -> Vec<String> {
        bit_labels(self.total_bits()).expect("total bits capped at 24")
    }

    /// Upper bound on stimulus entropy, `log2` of the stimulus space size,
    /// when a size was declared.
    pub fn stimulus_entropy_upper_bound(&self) -> Option<f64> {
        self.stimulus_space_size.map(|n| (n as f64).log2())
    }

    /// The same design aimed at a different ground truth.
    pub fn with_ground_truth(&self, ground_truth: impl Into<String>) -> Result<Self> {
        let ground_truth = ground_truth.into();
        check_bit_string(&ground_truth, self.total_bits(), "ground truth")?;
        Ok(Self {
            ground_truth,
            ..self.clone()
        })
    }
}

/// One participant's answer to one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    participant_id: String,
    trial_id: String,
    ground_truth: String,
    response: String,
    response_time_ms: f64,
}

impl TrialRecord {
    pub fn new(
        participant_id: impl Into<String>,
        trial_id: impl Into<String>,
        ground_truth: impl Into<String>,
        response: impl Into<String>,
        response_time_ms: f64,
    ) -> Result<Self> {
        let participant_id = participant_id.into();
        let trial_id = trial_id.into();
        let ground_truth = ground_truth.into();
        let response = response.into();
        if participant_id.is_empty() {
            return Err(Error::Validation("empty participant id".into()));
        }
        if trial_id.is_empty() {
            return Err(Error::Validation("empty trial id".into()));
        }
        if ground_truth.is_empty() {
            return Err(Error::Format("empty ground truth".into()));
        }
        check_bit_string(&ground_truth, ground_truth.len() as u32, "ground truth")?;
        check_bit_string(&response, ground_truth.len() as u32, "response")?;
        if !response_time_ms.is_finite() || response_time_ms <= 0.0 {
            return Err(Error::Validation(format!(
                "response time must be positive, got {response_time_ms} ms"
            )));
        }
        Ok(Self {
            participant_id,
            trial_id,
            ground_truth,
            response,
            response_time_ms,
        })
    }

    pub fn participant_id(&self) -> &str {
        &self.participant_id
    }

    pub fn trial_id(&self) -> &str {
        &self.trial_id
    }

    pub fn ground_truth(&self) -> &str {
        &self.ground_truth
    }

    pub fn response(&self) -> &str {
        &self.response
    }

    pub fn response_time_ms(&self) -> f64 {
        self.response_time_ms
    }
}

/// The answer alphabet seen at the four stages of a trial.
#[derive(Debug, Clone, PartialEq)]
pub struct StageAlphabets {
    /// Softened one-hot at the ground truth.
    pub a1: ProbabilityDistribution,
    /// Exactly uniform: the stage where the answer is maximally uncertain.
    pub a2: ProbabilityDistribution,
    /// Softened one-hot at the decided answer.
    pub a3: ProbabilityDistribution,
    /// Raw relative response frequencies (zero cells stay zero; softening is
    /// applied only inside divergences).
    pub a4: ProbabilityDistribution,
}

/// Builds the four stage alphabets for a single ground truth.
///
/// `responses` maps answer letters to non-negative weights (typically
/// counts); letters not mentioned get zero frequency.
pub fn build_stage_alphabets(
    design: &StudyDesign,
    decision: &str,
    responses: &BTreeMap<String, f64>,
) -> Result<StageAlphabets> {
    let k = design.total_bits();
    check_bit_string(decision, k, "decision")?;
    let labels = design.labels();
    let mut total_weight = 0.0;
    for (letter, weight) in responses {
        check_bit_string(letter, k, "response letter")?;
        if !weight.is_finite() || *weight < 0.0 {
            return Err(Error::Validation(format!(
                "weight of {letter:?} must be finite and non-negative, got {weight}"
            )));
        }
        total_weight += weight;
    }
    if total_weight <= 0.0 {
        return Err(Error::Domain("no response mass to aggregate".into()));
    }
    let a1 = ProbabilityDistribution::one_hot(labels.clone(), design.ground_truth())?
        .epsilon_adjusted(design.epsilon())?;
    let a2 = ProbabilityDistribution::uniform(labels.clone())?;
    let a3 = ProbabilityDistribution::one_hot(labels.clone(), decision)?
        .epsilon_adjusted(design.epsilon())?;
    let a4 = ProbabilityDistribution::new(
        labels
            .into_iter()
            .map(|l| {
                let w = responses.get(&l).copied().unwrap_or(0.0);
                (l, w / total_weight)
            })
            .collect(),
    )?;
    Ok(StageAlphabets { a1, a2, a3, a4 })
}

/// What one study (or one ground-truth group of it) measures.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    /// Entropy removed between the question stage and the answer stage, in
    /// bits.
    pub alphabet_compression: f64,
    /// Capped divergence of the aggregated responses from the softened
    /// ground truth, in bits.
    pub potential_distortion: f64,
    /// `alphabet_compression - potential_distortion`, in bits.
    pub benefit: f64,
    /// Arithmetic mean response time, in seconds.
    pub mean_response_time_s: f64,
    /// `benefit / mean_response_time_s`, in bits per second.
    pub cost_benefit: f64,
    /// Fraction of trials whose response matched the truth, per sub-model.
    pub per_submodel_accuracy: BTreeMap<String, f64>,
}

/// Modal letter of a weight map; ties break toward the lexicographically
/// smallest letter (BTreeMap iteration order makes this deterministic).
fn modal_letter(weights: &BTreeMap<String, f64>) -> String {
    let mut best: Option<(&str, f64)> = None;
    for (letter, w) in weights {
        match best {
            Some((_, bw)) if *w <= bw => {}
            _ => best = Some((letter, *w)),
        }
    }
    best.map(|(l, _)| l.to_string()).expect("non-empty weights")
}

/// Per-group compression and distortion for one shared ground truth.
fn analyze_group(
    design: &StudyDesign,
    truth: &str,
    records: &[&TrialRecord],
) -> Result<(f64, f64)> {
    let group_design = design.with_ground_truth(truth)?;
    let mut weights: BTreeMap<String, f64> = BTreeMap::new();
    for r in records {
        *weights.entry(r.response().to_string()).or_insert(0.0) += 1.0;
    }
    let decision = modal_letter(&weights);
    let stages = build_stage_alphabets(&group_design, &decision, &weights)?;
    let compression = match design.aggregation_mode() {
        AggregationMode::ConsistentIndividual => stages.a2.entropy() - stages.a3.entropy(),
        AggregationMode::RandomTeamOrSingleParticipant => {
            stages.a2.entropy() - stages.a4.entropy()
        }
    };
    let distortion = kl_divergence(&stages.a4, &stages.a1, design.epsilon())?;
    Ok((compression, distortion))
}

/// Analyzes a full record set against a design.
///
/// Records are grouped by their ground truth; compression and distortion
/// are computed per group and averaged weighted by group size, so studies
/// that mix several true answers are handled conservatively. Cost is the
/// arithmetic mean response time over all records.
pub fn study_cost_benefit(design: &StudyDesign, records: &[TrialRecord]) -> Result<StudyResult> {
    if records.is_empty() {
        return Err(Error::Domain("no records".into()));
    }
    let k = design.total_bits();
    for r in records {
        if r.ground_truth().len() != k as usize {
            return Err(Error::Format(format!(
                "record {}/{} carries {} answer bits, but the design declares {k}",
                r.participant_id(),
                r.trial_id(),
                r.ground_truth().len()
            )));
        }
    }
    let mut groups: BTreeMap<&str, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.ground_truth()).or_default().push(r);
    }
    let n = records.len() as f64;
    let mut alphabet_compression = 0.0;
    let mut potential_distortion = 0.0;
    for (truth, group) in &groups {
        let (compression, distortion) = analyze_group(design, truth, group)?;
        let weight = group.len() as f64 / n;
        alphabet_compression += weight * compression;
        potential_distortion += weight * distortion;
    }
    let mean_response_time_s =
        records.iter().map(TrialRecord::response_time_ms).sum::<f64>() / n / 1000.0;
    let benefit = alphabet_compression - potential_distortion;
    Ok(StudyResult {
        alphabet_compression,
        potential_distortion,
        benefit,
        mean_response_time_s,
        cost_benefit: benefit / mean_response_time_s,
        per_submodel_accuracy: per_submodel_accuracy(design, records)?,
    })
}

/// Fraction of records whose response agrees with their own ground truth on
/// each sub-model's slice of bits.
pub fn per_submodel_accuracy(
    design: &StudyDesign,
    records: &[TrialRecord],
) -> Result<BTreeMap<String, f64>> {
    if records.is_empty() {
        return Err(Error::Domain("no records".into()));
    }
    let k = design.total_bits() as usize;
    for r in records {
        if r.ground_truth().len() != k {
            return Err(Error::Format(format!(
                "record {}/{} carries {} answer bits, but the design declares {k}",
                r.participant_id(),
                r.trial_id(),
                r.ground_truth().len()
            )));
        }
    }
    let mut out = BTreeMap::new();
    let mut offset = 0usize;
    for submodel in design.submodels() {
        let width = submodel.bits() as usize;
        let slice = offset..offset + width;
        let hits = records
            .iter()
            .filter(|r| r.response()[slice.clone()] == r.ground_truth()[slice.clone()])
            .count();
        out.insert(submodel.name().to_string(), hits as f64 / records.len() as f64);
        offset += width;
    }
    Ok(out)
}

/// Median response time in seconds; an even record count averages the two
/// middle values. Reported alongside the mean but never used by the metric.
pub fn median_response_time_s(records: &[TrialRecord]) -> Option<f64> {
    if records.is_empty() {
        return None;
    }
    let mut times: Vec<f64> = records.iter().map(TrialRecord::response_time_ms).collect();
    times.sort_by(|a, b| a.partial_cmp(b).expect("times are finite"));
    let mid = times.len() / 2;
    let median_ms = if times.len() % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    };
    Some(median_ms / 1000.0)
}

/// Exact header a trial CSV must carry.
pub const TRIAL_CSV_HEADER: [&str; 5] = [
    "participant",
    "trial",
    "ground_truth",
    "response",
    "response_time_ms",
];

/// Parses trial records from CSV bytes.
///
/// The header must be exactly `participant,trial,ground_truth,response,
/// response_time_ms`; LF and CRLF line endings both work. Invalid rows do
/// not abort the parse: every offending row is collected into one error that
/// names each row by line number.
pub fn ingest_trials<R: Read>(reader: R) -> Result<Vec<TrialRecord>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Format(format!("unreadable CSV header: {e}")))?;
    let expected: Vec<&str> = TRIAL_CSV_HEADER.to_vec();
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(Error::Format(format!(
            "CSV header must be {:?}, found {:?}",
            expected.join(","),
            found.join(",")
        )));
    }
    let mut records = Vec::new();
    let mut row_errors = Vec::new();
    for result in csv_reader.into_records() {
        match result {
            Err(e) => {
                let line = e
                    .position()
                    .map(|p| p.line().to_string())
                    .unwrap_or_else(|| "?".into());
                row_errors.push(format!("row {line}: {e}"));
            }
            Ok(record) => {
                let line = record
                    .position()
                    .map(|p| p.line().to_string())
                    .unwrap_or_else(|| "?".into());
                if record.len() != TRIAL_CSV_HEADER.len() {
                    row_errors.push(format!(
                        "row {line}: expected {} fields, found {}",
                        TRIAL_CSV_HEADER.len(),
                        record.len()
                    ));
                    continue;
                }
                let time_field = record[4].trim();
                let time: f64 = match time_field.parse() {
                    Ok(t) => t,
                    Err(_) => {
                        row_errors.push(format!(
                            "row {line}: response time {time_field:?} is not a number"
                        ));
                        continue;
                    }
                };
                match TrialRecord::new(
                    record[0].trim(),
                    record[1].trim(),
                    record[2].trim(),
                    record[3].trim(),
                    time,
                ) {
                    Ok(r) => records.push(r),
                    Err(e) => row_errors.push(format!("row {line}: {e}")),
                }
            }
        }
    }
    if !row_errors.is_empty() {
        return Err(Error::TrialData(row_errors));
    }
    if records.is_empty() {
        return Err(Error::Domain("no records".into()));
    }
    Ok(records)
}
