//! Joint distributions, mutual information, and the data processing
//! inequality over two-stage channels.

use crate::dist::{ProbabilityDistribution, SUM_TOLERANCE};
use crate::error::{Error, Result};

/// A joint probability distribution over two labeled variables, stored as a
/// row-major matrix of cell probabilities.
///
/// Cells are non-negative and sum to 1 within [`SUM_TOLERANCE`] (then are
/// renormalized). Row and column labels are unique within their own axis.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    cells: Vec<Vec<f64>>,
}

fn check_axis_labels(labels: &[String], axis: &str) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::Validation(format!("{axis} axis has no labels")));
    }
    let mut seen = std::collections::HashSet::new();
    for label in labels {
        if label.is_empty() {
            return Err(Error::Validation(format!("empty {axis} label")));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::Validation(format!(
                "duplicate {axis} label {label:?}"
            )));
        }
    }
    Ok(())
}

impl JointDistribution {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        cells: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_axis_labels(&row_labels, "row")?;
        check_axis_labels(&col_labels, "column")?;
        if cells.len() != row_labels.len() {
            return Err(Error::Validation(format!(
                "expected {} rows of cells, got {}",
                row_labels.len(),
                cells.len()
            )));
        }
        for (i, row) in cells.iter().enumerate() {
            if row.len() != col_labels.len() {
                return Err(Error::Validation(format!(
                    "row {i} has {} cells, expected {}",
                    row.len(),
                    col_labels.len()
                )));
            }
            for (j, c) in row.iter().enumerate() {
                if !c.is_finite() || *c < 0.0 {
                    return Err(Error::Validation(format!(
                        "cell ({i}, {j}) must be finite and non-negative, got {c}"
                    )));
                }
            }
        }
        let sum: f64 = cells.iter().flatten().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Validation(format!(
                "cells sum to {sum}, expected 1 within {SUM_TOLERANCE}"
            )));
        }
        let cells = cells
            .into_iter()
            .map(|row| row.into_iter().map(|c| c / sum).collect())
            .collect();
        Ok(Self {
            row_labels,
            col_labels,
            cells,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    fn row_sums(&self) -> Vec<f64> {
        self.cells.iter().map(|row| row.iter().sum()).collect()
    }

    fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols()];
        for row in &self.cells {
            for (j, c) in row.iter().enumerate() {
                sums[j] += c;
            }
        }
        sums
    }

    /// Marginal distribution of the row variable.
    pub fn row_marginal(&self) -> ProbabilityDistribution {
        ProbabilityDistribution::new(
            self.row_labels
                .iter()
                .cloned()
                .zip(self.row_sums())
                .collect(),
        )
        .expect("marginal of a valid joint distribution is valid")
    }

    /// Marginal distribution of the column variable.
    pub fn col_marginal(&self) -> ProbabilityDistribution {
        ProbabilityDistribution::new(
            self.col_labels
                .iter()
                .cloned()
                .zip(self.col_sums())
                .collect(),
        )
        .expect("marginal of a valid joint distribution is valid")
    }

    /// Joint Shannon entropy `H(X, Y)` in bits.
    pub fn entropy(&self) -> f64 {
        self.cells
            .iter()
            .flatten()
            .filter(|c| **c > 0.0)
            .map(|c| -c * c.log2())
            .sum()
    }

    /// Mutual information `I(X; Y)` in bits.
    ///
    /// Zero cells contribute nothing; the result is clamped at 0 because
    /// rounding can otherwise leave it a hair negative.
    pub fn mutual_information(&self) -> f64 {
        let px = self.row_sums();
        let py = self.col_sums();
        let mut mi = 0.0;
        for (i, row) in self.cells.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if *c > 0.0 {
                    mi += c * (c / (px[i] * py[j])).log2();
                }
            }
        }
        mi.max(0.0)
    }
}

/// A row-stochastic channel matrix: entry `(i, j)` is the probability of
/// output `j` given input `i`. Every row is a valid distribution (rows are
/// renormalized within [`SUM_TOLERANCE`], like distribution cells).
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    rows: Vec<Vec<f64>>,
}

impl StochasticMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Validation("channel matrix has no rows".into()));
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(Error::Validation("channel matrix has no columns".into()));
        }
        let mut normalized = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            for (j, c) in row.iter().enumerate() {
                if !c.is_finite() || *c < 0.0 {
                    return Err(Error::Validation(format!(
                        "entry ({i}, {j}) must be finite and non-negative, got {c}"
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::Validation(format!(
                    "row {i} sums to {sum}, expected 1 within {SUM_TOLERANCE}"
                )));
            }
            normalized.push(row.into_iter().map(|c| c / sum).collect());
        }
        Ok(Self { rows: normalized })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Composes two channels: the result maps an input of `self` straight to
    /// an output of `next` (ordinary matrix product).
    pub fn compose(&self, next: &StochasticMatrix) -> Result<StochasticMatrix> {
        if self.n_cols() != next.n_rows() {
            return Err(Error::Alignment(format!(
                "cannot chain a {}-output channel into a {}-input channel",
                self.n_cols(),
                next.n_rows()
            )));
        }
        let rows = (0..self.n_rows())
            .map(|i| {
                (0..next.n_cols())
                    .map(|k| {
                        (0..self.n_cols())
                            .map(|j| self.rows[i][j] * next.rows[j][k])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        StochasticMatrix::new(rows)
    }
}

/// Outcome of a data-processing-inequality check over the chain
/// source -> mid -> end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpiCheck {
    /// Mutual information between the source and the mid stage, in bits.
    pub i12: f64,
    /// Mutual information between the source and the end stage, in bits.
    pub i13: f64,
    /// `i13 <= i12 + 1e-9`: processing never adds information.
    pub holds: bool,
}

/// Slack allowed when checking `i13 <= i12`.
pub const DPI_TOLERANCE: f64 = 1e-9;

/// Builds the joint distributions induced by pushing `source` through
/// `channel1` and then `channel2`, and checks that the mutual information
/// between the source and the chain's end does not exceed the mutual
/// information between the source and the chain's midpoint.
pub fn dpi_check(
    source: &ProbabilityDistribution,
    channel1: &StochasticMatrix,
    channel2: &StochasticMatrix,
) -> Result<DpiCheck> {
    if source.len() != channel1.n_rows() {
        return Err(Error::Alignment(format!(
            "source has {} letters but the first channel has {} input rows",
            source.len(),
            channel1.n_rows()
        )));
    }
    let direct = channel1.compose(channel2)?;
    let i12 = joint_of(source, channel1)?.mutual_information();
    let i13 = joint_of(source, &direct)?.mutual_information();
    Ok(DpiCheck {
        i12,
        i13,
        holds: i13 <= i12 + DPI_TOLERANCE,
    })
}

/// Joint distribution of a source and the output of a channel applied to it:
/// cell `(i, j) = p(i) * channel[i][j]`.
fn joint_of(
    source: &ProbabilityDistribution,
    channel: &StochasticMatrix,
) -> Result<JointDistribution> {
    let row_labels: Vec<String> = source.labels().map(str::to_string).collect();
    let col_labels: Vec<String> = (0..channel.n_cols()).map(|j| format!("out{j}")).collect();
    let cells = source
        .iter()
        .enumerate()
        .map(|(i, (_, p))| channel.row(i).iter().map(|c| p * c).collect())
        .collect();
    JointDistribution::new(row_labels, col_labels, cells)
}
