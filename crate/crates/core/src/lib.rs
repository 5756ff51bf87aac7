//! Information-theoretic measures for human-computer interaction.
//!
//! The crate models interaction as information flowing through alphabets:
//!
//! - [`dist`] — labeled probability distributions, Shannon entropy, and
//!   epsilon-capped Kullback-Leibler divergence;
//! - [`joint`] — joint distributions, mutual information, and
//!   data-processing-inequality checks over channel chains;
//! - [`device`] — input devices and their raw capacity and bandwidth;
//! - [`action`] — action alphabets for common widget families, composite
//!   alphabets, and knowledge ledgers;
//! - [`cost_benefit`] — device utilization and the benefit-per-cost metric,
//!   with mistake-shift distortion and step-layout analysis;
//! - [`study`] — controlled-experiment trial ingestion and the four-stage
//!   alphabet analysis of study data.
//!
//! All quantities are in bits (base-2), seconds, or bits per second; the
//! convention `0 * log2(0) = 0` applies throughout. Every public type is an
//! immutable value, so everything here is freely shareable across threads.

pub mod action;
pub mod cost_benefit;
pub mod device;
pub mod dist;
pub mod error;
pub mod joint;
pub mod study;

pub use action::{
    bit_labels, checkbox_alphabet, checkbox_capacity, concat_submodels, freehand_capacity,
    gesture_alphabet, ledger_total, radio_alphabet, ActionAlphabet, AlphabetKind,
    FreehandCapacity, KnowledgeCategory, KnowledgeLedger, LedgerEntry, ENUMERATION_LIMIT,
};
pub use cost_benefit::{
    alphabet_compression, apply_mistake_shift, device_utilization, estimate_f1_f2_rate,
    evaluate_task, negative_threshold, reassign_steps, CostModel, KnowledgeRate, MistakeModel,
    TaskEvaluation, THRESHOLD_TOLERANCE,
};
pub use device::{DeviceVariable, InputDeviceSpec};
pub use dist::{
    kl_divergence, max_entropy, EpsilonPolicy, ProbabilityDistribution, CELL_TOLERANCE,
    DEFAULT_EPSILON, SUM_TOLERANCE,
};
pub use error::{Error, Result};
pub use joint::{dpi_check, DpiCheck, JointDistribution, StochasticMatrix, DPI_TOLERANCE};
pub use study::{
    build_stage_alphabets, ingest_trials, median_response_time_s, per_submodel_accuracy,
    study_cost_benefit, AggregationMode, StageAlphabets, StudyDesign, StudyResult, SubModelSpec,
    TrialRecord, TRIAL_CSV_HEADER,
};
