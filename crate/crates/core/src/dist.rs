//! Discrete probability distributions over labeled letters, Shannon entropy,
//! and Kullback-Leibler divergence with epsilon capping.
//!
//! All information quantities are in bits (base-2 logarithms) and use the
//! convention `0 * log2(0) = 0`.

use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet};

/// Tolerance for "probabilities sum to 1" checks. Inputs whose sum lies
/// within this tolerance of 1 are renormalized exactly before use; anything
/// further off is rejected.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Per-cell tolerance used when comparing two distributions for equality.
pub const CELL_TOLERANCE: f64 = 1e-9;

/// Epsilon used by [`EpsilonPolicy::default`].
pub const DEFAULT_EPSILON: f64 = 0.006299;

/// How much probability mass to grant impossible-looking letters before
/// computing a divergence.
///
/// Capping keeps divergences finite when an observed distribution places
/// zero mass where a reference distribution does not (or vice versa). The
/// epsilon must lie strictly between 0 and 0.5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonPolicy {
    epsilon: f64,
}

impl EpsilonPolicy {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon <= 0.0 || epsilon >= 0.5 {
            return Err(Error::Domain(format!(
                "epsilon must lie strictly between 0 and 0.5, got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for EpsilonPolicy {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// A probability distribution over a finite set of labeled letters.
///
/// Labels are unique and non-empty; probabilities are non-negative and sum
/// to 1 within [`SUM_TOLERANCE`] (after which they are renormalized so the
/// stored values sum to 1 up to floating-point rounding). Letter order is
/// preserved from construction and is significant only for display;
/// information quantities align letters by label.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    letters: Vec<(String, f64)>,
}

/// Validates labels: non-empty, unique.
fn check_labels<'a, I: Iterator<Item = &'a str>>(labels: I) -> Result<()> {
    let mut seen = HashSet::new();
    for label in labels {
        if label.is_empty() {
            return Err(Error::Validation("empty label".into()));
        }
        if !seen.insert(label) {
            return Err(Error::Validation(format!("duplicate label {label:?}")));
        }
    }
    Ok(())
}

impl ProbabilityDistribution {
    /// Builds a distribution from `(label, probability)` pairs.
    pub fn new(letters: Vec<(String, f64)>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Validation(
                "a distribution needs at least one letter".into(),
            ));
        }
        check_labels(letters.iter().map(|(l, _)| l.as_str()))?;
        for (label, p) in &letters {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::Validation(format!(
                    "probability of {label:?} must be finite and non-negative, got {p}"
                )));
            }
        }
        let sum: f64 = letters.iter().map(|(_, p)| p).sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Validation(format!(
                "probabilities sum to {sum}, expected 1 within {SUM_TOLERANCE}"
            )));
        }
        let letters = letters
            .into_iter()
            .map(|(l, p)| (l, p / sum))
            .collect();
        Ok(Self { letters })
    }

    /// Constructs without renormalizing, for internal transformations whose
    /// cells are valid by construction (e.g. moving mass between two letters
    /// of an already-valid distribution).
    pub(crate) fn from_validated(letters: Vec<(String, f64)>) -> Self {
        Self { letters }
    }

    /// Uniform distribution over the given labels.
    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Validation(
                "a distribution needs at least one letter".into(),
            ));
        }
        let p = 1.0 / labels.len() as f64;
        Self::new(labels.into_iter().map(|l| (l, p)).collect())
    }

    /// Distribution that puts all mass on `chosen`, which must be one of the
    /// labels.
    pub fn one_hot(labels: Vec<String>, chosen: &str) -> Result<Self> {
        if !labels.iter().any(|l| l == chosen) {
            return Err(Error::Alignment(format!(
                "chosen label {chosen:?} is not among the letters"
            )));
        }
        Self::new(
            labels
                .into_iter()
                .map(|l| {
                    let p = if l == chosen { 1.0 } else { 0.0 };
                    (l, p)
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one letter
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.letters.iter().map(|(l, _)| l.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.letters.iter().map(|(l, p)| (l.as_str(), *p))
    }

    /// Probability of the letter with the given label, if present.
    pub fn probability(&self, label: &str) -> Option<f64> {
        self.letters
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| *p)
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.letters
            .iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(_, p)| -p * p.log2())
            .sum()
    }

    fn zero_count(&self) -> usize {
        self.letters.iter().filter(|(_, p)| *p == 0.0).count()
    }

    /// Caps zero-probability letters at `epsilon / (n - 1)` and rescales the
    /// remaining letters so the total stays 1.
    ///
    /// A strictly positive distribution is returned unchanged. For a one-hot
    /// distribution the result is `1 - epsilon` on the chosen letter and
    /// `epsilon / (n - 1)` elsewhere.
    pub fn epsilon_adjusted(&self, policy: &EpsilonPolicy) -> Result<Self> {
        let n = self.len();
        if n < 2 {
            return Err(Error::Domain(
                "epsilon adjustment needs at least two letters".into(),
            ));
        }
        Ok(self.epsilon_adjusted_unchecked(policy))
    }

    /// Same as [`Self::epsilon_adjusted`] but skips the `n >= 2` check; a
    /// single-letter distribution has no zeros and is returned unchanged.
    fn epsilon_adjusted_unchecked(&self, policy: &EpsilonPolicy) -> Self {
        let zeros = self.zero_count();
        if zeros == 0 {
            return self.clone();
        }
        let fill = policy.epsilon() / (self.len() - 1) as f64;
        let scale = 1.0 - zeros as f64 * fill;
        let letters = self
            .letters
            .iter()
            .map(|(l, p)| {
                let q = if *p == 0.0 { fill } else { p * scale };
                (l.clone(), q)
            })
            .collect();
        Self { letters }
    }

    /// True when both distributions have the same label set and every
    /// probability matches within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        self.letters.iter().all(|(l, p)| {
            other
                .probability(l)
                .is_some_and(|q| (p - q).abs() <= tol)
        })
    }
}

/// Entropy of a uniform distribution over `n` letters, `log2(n)`; the upper
/// bound for any distribution over `n` letters.
pub fn max_entropy(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("letter count must be at least 1".into()));
    }
    Ok((n as f64).log2())
}

/// Kullback-Leibler divergence `D(q || p)` in bits, with both arguments
/// epsilon-adjusted first so the result is always finite.
///
/// Letters are aligned by label; both distributions must have the same label
/// set. The result is non-negative and equals 0 exactly when the adjusted
/// distributions coincide.
pub fn kl_divergence(
    q: &ProbabilityDistribution,
    p: &ProbabilityDistribution,
    policy: &EpsilonPolicy,
) -> Result<f64> {
    if q.len() != p.len() {
        return Err(Error::Alignment(format!(
            "label sets differ: {} letters vs {}",
            q.len(),
            p.len()
        )));
    }
    let q = q.epsilon_adjusted_unchecked(policy);
    let p = p.epsilon_adjusted_unchecked(policy);
    let p_by_label: HashMap<&str, f64> = p.iter().collect();
    let mut total = 0.0;
    for (label, qi) in q.iter() {
        let pi = *p_by_label.get(label).ok_or_else(|| {
            Error::Alignment(format!("label {label:?} missing from the second argument"))
        })?;
        if qi > 0.0 {
            total += qi * (qi / pi).log2();
        }
    }
    // Rounding can push a mathematically non-negative sum a hair below zero.
    Ok(total.max(0.0))
}
