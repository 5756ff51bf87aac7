//! Action alphabets: the sets of distinguishable actions an interface lets a
//! user perform, with capacities for common widget families, plus ledgers of
//! knowledge quantified in bits.

use crate::dist::ProbabilityDistribution;
use crate::error::{Error, Result};
use std::collections::HashSet;
use std::f64::consts::LN_2;
use std::str::FromStr;

/// Letter-count cap above which alphabets are never enumerated explicitly;
/// capacities beyond it must come from analytic (log-space) formulas.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

/// The widget family an alphabet was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetKind {
    Radio,
    Checkbox,
    Freehand,
    Gesture,
    Composite,
    Custom,
}

/// A finite alphabet of user actions with a probability for each letter and,
/// optionally, a binary codeword per letter.
///
/// Codewords, when present, are equal-length, distinct bit strings — the
/// binary encoding under which letters of different alphabets can be
/// concatenated.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionAlphabet {
    distribution: ProbabilityDistribution,
    kind: AlphabetKind,
    codewords: Option<Vec<String>>,
}

fn check_codewords(codewords: &[String], letter_count: usize) -> Result<()> {
    if codewords.len() != letter_count {
        return Err(Error::Validation(format!(
            "{} codewords for {letter_count} letters",
            codewords.len()
        )));
    }
    let width = codewords.first().map_or(0, |c| c.len());
    if width == 0 {
        return Err(Error::Validation("empty codeword".into()));
    }
    let mut seen = HashSet::new();
    for c in codewords {
        if c.len() != width {
            return Err(Error::Validation(format!(
                "codeword {c:?} has length {}, expected {width}",
                c.len()
            )));
        }
        if !c.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Validation(format!(
                "codeword {c:?} is not a bit string"
            )));
        }
        if !seen.insert(c.as_str()) {
            return Err(Error::Validation(format!("duplicate codeword {c:?}")));
        }
    }
    Ok(())
}

impl ActionAlphabet {
    pub fn new(
        distribution: ProbabilityDistribution,
        kind: AlphabetKind,
        codewords: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some(cw) = &codewords {
            check_codewords(cw, distribution.len())?;
        }
        Ok(Self {
            distribution,
            kind,
            codewords,
        })
    }

    /// Builds a custom alphabet straight from `(label, probability)` pairs.
    pub fn custom(
        letters: Vec<(String, f64)>,
        codewords: Option<Vec<String>>,
    ) -> Result<Self> {
        Self::new(
            ProbabilityDistribution::new(letters)?,
            AlphabetKind::Custom,
            codewords,
        )
    }

    pub fn distribution(&self) -> &ProbabilityDistribution {
        &self.distribution
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn codewords(&self) -> Option<&[String]> {
        self.codewords.as_deref()
    }

    pub fn len(&self) -> usize {
        self.distribution.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distribution.is_empty()
    }

    /// Codeword length in bits, when codewords are present.
    pub fn codeword_bits(&self) -> Option<usize> {
        self.codewords
            .as_ref()
            .and_then(|cw| cw.first())
            .map(String::len)
    }

    /// Action capacity in bits: the entropy of the letter distribution.
    pub fn capacity(&self) -> f64 {
        self.distribution.entropy()
    }
}

/// All `k`-bit strings in counting order: `00…0`, `00…1`, …, `11…1`.
pub fn bit_labels(k: u32) -> Result<Vec<String>> {
    if k == 0 {
        return Err(Error::Domain("need at least one bit".into()));
    }
    if k > 24 {
        return Err(Error::TooLarge(format!(
            "2^{k} letters exceed the enumeration limit of 2^24"
        )));
    }
    let width = k as usize;
    Ok((0..(1u64 << k))
        .map(|i| format!("{i:0width$b}"))
        .collect())
}

/// A mutually exclusive selection among `k` options.
///
/// Letters carry one-hot codewords of length `k`: the first option maps to
/// `0…01`, the last to `10…0`.
pub fn radio_alphabet(probs: Vec<(String, f64)>) -> Result<ActionAlphabet> {
    let k = probs.len();
    let distribution = ProbabilityDistribution::new(probs)?;
    let codewords = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if j == k - 1 - i { '1' } else { '0' })
                .collect()
        })
        .collect();
    ActionAlphabet::new(distribution, AlphabetKind::Radio, Some(codewords))
}

/// Entropy of a single independent yes/no choice with probability `p`.
fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

fn checkbox_probs(k: u32, per_box_probs: Option<&[f64]>) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::Domain("need at least one checkbox".into()));
    }
    let probs = match per_box_probs {
        Some(p) => {
            if p.len() != k as usize {
                return Err(Error::Alignment(format!(
                    "{} per-box probabilities for {k} boxes",
                    p.len()
                )));
            }
            for (i, q) in p.iter().enumerate() {
                if !q.is_finite() || !(0.0..=1.0).contains(q) {
                    return Err(Error::Validation(format!(
                        "box {i} probability must lie in [0, 1], got {q}"
                    )));
                }
            }
            p.to_vec()
        }
        None => vec![0.5; k as usize],
    };
    Ok(probs)
}

/// Capacity in bits of `k` independent checkboxes, computed analytically as
/// the sum of per-box binary entropies. Works for any `k`, including ones
/// too large to enumerate.
pub fn checkbox_capacity(k: u32, per_box_probs: Option<&[f64]>) -> Result<f64> {
    Ok(checkbox_probs(k, per_box_probs)?
        .iter()
        .copied()
        .map(binary_entropy)
        .sum())
}

/// An array of `k` independent checkboxes, enumerated as all `2^k` tick
/// combinations.
///
/// Letters are the `k`-bit combination strings (first bit = first box, `1` =
/// ticked), which double as the codewords; the probability of a combination
/// is the product of per-box on/off probabilities (default 0.5 each, giving
/// a uniform alphabet of capacity `k` bits).
///
/// `k > 24` is refused with a size error — use [`checkbox_capacity`] for
/// the analytic capacity instead.
pub fn checkbox_alphabet(k: u32, per_box_probs: Option<&[f64]>) -> Result<ActionAlphabet> {
    let per_box = checkbox_probs(k, per_box_probs)?;
    let labels = bit_labels(k)?;
    let letters = labels
        .iter()
        .enumerate()
        .map(|(idx, label)| {
            let p = per_box
                .iter()
                .enumerate()
                .map(|(j, q)| {
                    let ticked = (idx >> (k as usize - 1 - j)) & 1 == 1;
                    if ticked {
                        *q
                    } else {
                        1.0 - q
                    }
                })
                .product();
            (label.clone(), p)
        })
        .collect();
    ActionAlphabet::new(
        ProbabilityDistribution::new(letters)?,
        AlphabetKind::Checkbox,
        Some(labels),
    )
}

/// Capacity of a freehand path drawn on a `width x height` canvas with up to
/// `max_points` points, assuming all paths are equally likely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreehandCapacity {
    /// Bits per path point: `log2(width * height)`.
    pub per_point_bits: f64,
    /// Bits of the whole path alphabet: `log2` of the number of paths of
    /// length 1 through `max_points`.
    pub total_bits: f64,
}

/// Computes freehand path capacity entirely in log space.
///
/// The path count is `A + A^2 + … + A^m = A (A^m - 1) / (A - 1)` with
/// `A = width * height`; its log is evaluated without ever forming the
/// astronomically large sum.
pub fn freehand_capacity(width: u32, height: u32, max_points: u32) -> Result<FreehandCapacity> {
    let area = width as u64 * height as u64;
    if area < 2 {
        return Err(Error::Domain(format!(
            "canvas of {width}x{height} cells cannot distinguish any paths"
        )));
    }
    if max_points == 0 {
        return Err(Error::Domain("a path needs at least one point".into()));
    }
    let per_point_bits = (area as f64).log2();
    let m = max_points as f64;
    let total_bits = if max_points == 1 {
        per_point_bits
    } else {
        // log2(A (A^m - 1) / (A - 1))
        //   = (m + 1) log2 A + log2(1 - A^-m) - log2(A - 1)
        let a_pow_neg_m = (-m * per_point_bits).exp2();
        (m + 1.0) * per_point_bits + (-a_pow_neg_m).ln_1p() / LN_2
            - ((area - 1) as f64).log2()
    };
    Ok(FreehandCapacity {
        per_point_bits,
        total_bits,
    })
}

/// A vocabulary of `n` elementary gestures, or — when `composite` is true —
/// all ordered pairs of them (`n^2` letters), uniformly distributed.
pub fn gesture_alphabet(n_elementary: u32, composite: bool) -> Result<ActionAlphabet> {
    if n_elementary < 2 {
        return Err(Error::Domain(
            "a gesture vocabulary needs at least two gestures".into(),
        ));
    }
    let n = n_elementary as u64;
    if composite && n * n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!(
            "{n}^2 composite gestures exceed the enumeration limit of 2^24"
        )));
    }
    let width = n_elementary.to_string().len();
    let name = |i: u64| format!("g{:0width$}", i + 1, width = width);
    let labels: Vec<String> = if composite {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("{}+{}", name(i), name(j))))
            .collect()
    } else {
        (0..n).map(name).collect()
    };
    ActionAlphabet::new(
        ProbabilityDistribution::uniform(labels)?,
        AlphabetKind::Gesture,
        None,
    )
}

/// Concatenates independent sub-model alphabets into one composite alphabet:
/// letters are the cross product (last part varying fastest), codewords the
/// concatenated part codewords, probabilities the products.
///
/// Every part must carry codewords. A single part is returned unchanged.
pub fn concat_submodels(parts: &[ActionAlphabet]) -> Result<ActionAlphabet> {
    if parts.is_empty() {
        return Err(Error::Domain("no parts to concatenate".into()));
    }
    for (i, part) in parts.iter().enumerate() {
        if part.codewords().is_none() {
            return Err(Error::MissingCodewords(format!(
                "part {i} has no codewords to concatenate"
            )));
        }
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    let mut letters: Vec<(String, String, f64)> = vec![(String::new(), String::new(), 1.0)];
    for part in parts {
        let expanded = letters.len() as u64 * part.len() as u64;
        if expanded > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!(
                "composite alphabet would have {expanded} letters, beyond the 2^24 limit"
            )));
        }
        let codewords = part.codewords().expect("checked above");
        letters = letters
            .iter()
            .flat_map(|(label, code, p)| {
                part.distribution()
                    .iter()
                    .zip(codewords)
                    .map(move |((l, q), c)| {
                        (format!("{label}{l}"), format!("{code}{c}"), p * q)
                    })
            })
            .collect();
    }
    let (labels, codes): (Vec<_>, Vec<_>) = letters
        .iter()
        .map(|(l, c, _)| (l.clone(), c.clone()))
        .unzip();
    let distribution = ProbabilityDistribution::new(
        labels
            .into_iter()
            .zip(letters.iter().map(|(_, _, p)| *p))
            .collect(),
    )?;
    ActionAlphabet::new(distribution, AlphabetKind::Composite, Some(codes))
}

/// The kind of knowledge a ledger entry quantifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnowledgeCategory {
    /// Knowledge the interface asks for explicitly.
    ExplicitPrompt,
    /// Knowledge of the situation the user happens to hold.
    Situational,
    /// A learned vocabulary of inputs.
    SoftAlphabet,
    /// A learned model of how inputs map to outcomes.
    SoftModel,
}

impl KnowledgeCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ExplicitPrompt => "explicit_prompt",
            Self::Situational => "situational",
            Self::SoftAlphabet => "soft_alphabet",
            Self::SoftModel => "soft_model",
        }
    }
}

impl FromStr for KnowledgeCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit_prompt" => Ok(Self::ExplicitPrompt),
            "situational" => Ok(Self::Situational),
            "soft_alphabet" => Ok(Self::SoftAlphabet),
            "soft_model" => Ok(Self::SoftModel),
            other => Err(Error::Format(format!(
                "unknown knowledge category {other:?} (expected explicit_prompt, situational, soft_alphabet, or soft_model)"
            ))),
        }
    }
}

/// One quantified piece of knowledge a user brings to (or takes from) a task.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    name: String,
    category: KnowledgeCategory,
    bits: f64,
}

impl LedgerEntry {
    pub fn new(name: impl Into<String>, category: KnowledgeCategory, bits: f64) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Validation("empty ledger entry name".into()));
        }
        if !bits.is_finite() || bits < 0.0 {
            return Err(Error::Validation(format!(
                "entry {name:?} must have a finite, non-negative bit count, got {bits}"
            )));
        }
        Ok(Self {
            name,
            category,
            bits,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn category(&self) -> KnowledgeCategory {
        self.category
    }

    pub fn bits(&self) -> f64 {
        self.bits
    }
}

/// An itemized account of the knowledge involved in a task, in bits.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeLedger {
    entries: Vec<LedgerEntry>,
}

impl KnowledgeLedger {
    pub fn new(entries: Vec<LedgerEntry>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total bits across all entries.
    pub fn total_bits(&self) -> f64 {
        self.entries.iter().map(LedgerEntry::bits).sum()
    }
}

/// Total bits recorded in a ledger.
pub fn ledger_total(ledger: &KnowledgeLedger) -> f64 {
    ledger.total_bits()
}
