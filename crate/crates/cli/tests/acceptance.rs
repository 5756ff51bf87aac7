//! Acceptance suite: ten end-to-end checks, one per required behaviour,
//! each printing a `[criterion N] PASS` line with the measured values.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use inbits::{
    apply_mistake_shift, checkbox_capacity, device_utilization, dpi_check, estimate_f1_f2_rate,
    evaluate_task, freehand_capacity, gesture_alphabet, kl_divergence, max_entropy,
    negative_threshold, radio_alphabet, reassign_steps, study_cost_benefit, ActionAlphabet,
    AggregationMode, CostModel, DeviceVariable, EpsilonPolicy, InputDeviceSpec, KnowledgeCategory,
    KnowledgeLedger, LedgerEntry, MistakeModel, ProbabilityDistribution, StochasticMatrix,
    StudyDesign, SubModelSpec, TrialRecord,
};
use inbits_cli::{run_command, OutputFormat, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::PathBuf;

// ---------------------------------------------------------------------------
// Shared constructions
// ---------------------------------------------------------------------------

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run_cli(args: &[&str]) -> Report {
    let mut argv = vec!["inbits".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let out = run_command(argv);
    assert_eq!(out.exit_code, 0, "command {args:?} failed: {}", out.diagnostics);
    out.report.expect("successful commands carry a report")
}

fn mouse() -> InputDeviceSpec {
    InputDeviceSpec::new(
        "mouse",
        vec![
            DeviceVariable::new("x", 1920).unwrap(),
            DeviceVariable::new("y", 1080).unwrap(),
            DeviceVariable::new("left_button", 2).unwrap(),
            DeviceVariable::new("right_button", 2).unwrap(),
        ],
        100.0,
    )
    .unwrap()
}

fn data_glove() -> InputDeviceSpec {
    let mut variables: Vec<DeviceVariable> = ["thumb", "index", "middle", "ring", "little"]
        .iter()
        .map(|f| DeviceVariable::new(format!("{f}_flex"), 180).unwrap())
        .collect();
    variables.push(DeviceVariable::new("wrist_yaw", 360).unwrap());
    variables.push(DeviceVariable::new("wrist_roll", 360).unwrap());
    InputDeviceSpec::new("data_glove", variables, 200.0).unwrap()
}

fn menu(p1: f64, p2: f64, p3: f64) -> ActionAlphabet {
    radio_alphabet(vec![
        ("more_event_info".into(), p1),
        ("select_channel".into(), p2),
        ("view_hd_alternatives".into(), p3),
    ])
    .unwrap()
}

fn menu_cost() -> CostModel {
    CostModel::new(
        [
            ("more_event_info".to_string(), 1),
            ("select_channel".to_string(), 2),
            ("view_hd_alternatives".to_string(), 3),
        ]
        .into(),
        2.0,
        0.0,
    )
    .unwrap()
}

fn menu_mistake() -> MistakeModel {
    MistakeModel::new("select_channel", "more_event_info", 0.2, 4.0).unwrap()
}

fn swap_select_and_more() -> BTreeMap<String, String> {
    [
        ("more_event_info", "select_channel"),
        ("select_channel", "more_event_info"),
        ("view_hd_alternatives", "view_hd_alternatives"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

fn three_bit_design(mode: AggregationMode) -> StudyDesign {
    StudyDesign::new(
        vec![
            SubModelSpec::new("context", 1).unwrap(),
            SubModelSpec::new("pattern", 1).unwrap(),
            SubModelSpec::new("statistic", 1).unwrap(),
        ],
        EpsilonPolicy::new(0.006299).unwrap(),
        "111",
        mode,
        None,
    )
    .unwrap()
}

/// The 1000-trial response pool used by the study fixtures, as records.
fn replication_records() -> Vec<TrialRecord> {
    let counts = [
        ("000", 8),
        ("001", 17),
        ("010", 25),
        ("011", 103),
        ("100", 11),
        ("101", 46),
        ("110", 107),
        ("111", 683),
    ];
    let mut records = Vec::new();
    let mut i = 0usize;
    for (letter, count) in counts {
        for _ in 0..count {
            records.push(
                TrialRecord::new(
                    format!("p{:02}", i % 20 + 1),
                    format!("t{i:04}"),
                    "111",
                    letter,
                    2750.0,
                )
                .unwrap(),
            );
            i += 1;
        }
    }
    assert_eq!(records.len(), 1000);
    records
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> ProbabilityDistribution {
    let weights: Vec<f64> = (0..n).map(|_| 1e-3 + rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    ProbabilityDistribution::new(
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("l{i}"), w / total))
            .collect(),
    )
    .unwrap()
}

fn random_channel(rng: &mut ChaCha8Rng, n_in: usize, n_out: usize) -> StochasticMatrix {
    let rows: Vec<Vec<f64>> = (0..n_in)
        .map(|_| {
            let weights: Vec<f64> = (0..n_out).map(|_| 1e-3 + rng.random::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            weights.iter().map(|w| w / total).collect()
        })
        .collect();
    StochasticMatrix::new(rows).unwrap()
}

// ---------------------------------------------------------------------------
// Criterion 1: device capacity and bandwidth
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_device_capacity_and_bandwidth() {
    let mouse = mouse();
    let capacity = mouse.instantaneous_capacity();
    let bandwidth = mouse.bandwidth();
    assert!(
        (capacity - 22.984).abs() <= 0.001,
        "mouse capacity {capacity} outside 22.984 +/- 0.001"
    );
    assert!(
        (bandwidth - 2298.4).abs() <= 0.1,
        "mouse bandwidth {bandwidth} outside 2298.4 +/- 0.1"
    );

    let glove_bandwidth = data_glove().bandwidth();
    assert!(
        (glove_bandwidth - 10888.6).abs() <= 0.5,
        "glove bandwidth {glove_bandwidth} outside 10888.6 +/- 0.5"
    );

    println!(
        "[criterion 1] PASS: mouse capacity {capacity:.6} bits, bandwidth \
         {bandwidth:.4} bits/s; glove bandwidth {glove_bandwidth:.4} bits/s"
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: action capacities of the three menu distributions
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_menu_action_capacities() {
    let cases = [
        (menu(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), 1.58),
        (menu(0.2, 0.7, 0.1), 1.16),
        (menu(0.09, 0.9, 0.01), 0.52),
    ];
    let mut measured = Vec::new();
    for (alphabet, expected) in &cases {
        let capacity = alphabet.capacity();
        assert!(
            (capacity - expected).abs() <= 0.01,
            "capacity {capacity} outside {expected} +/- 0.01"
        );
        measured.push(format!("{capacity:.4}"));
    }
    println!(
        "[criterion 2] PASS: menu capacities {} bits (targets 1.58/1.16/0.52 +/- 0.01)",
        measured.join("/")
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: device-utilization worked examples, checkbox annotation
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_device_utilization_examples() {
    // Four uniform options (2 bits) in 2 s on a 1600 bits/s pointer.
    let radio_du = device_utilization(2.0, 2.0, 1600.0).unwrap();
    assert_eq!(radio_du, 0.000625, "radio du {radio_du} is not exactly 0.0625%");

    // A 1400-bit freehand trace in 1 s on the same pointer.
    let freehand_du = device_utilization(1400.0, 1.0, 1600.0).unwrap();
    assert_eq!(freehand_du, 0.875, "freehand du {freehand_du} is not exactly 87.5%");

    // Sixteen single strokes (4 bits) in 2 s on the glove.
    let gesture = gesture_alphabet(16, false).unwrap();
    let gesture_du =
        device_utilization(gesture.capacity(), 2.0, data_glove().bandwidth()).unwrap();
    assert!(
        (gesture_du * 100.0 - 0.0184).abs() <= 0.001,
        "gesture du {gesture_du} outside 0.0184% +/- 0.001%"
    );

    // Four tick boxes (4 bits) in 4 s on the pointer, via the CLI so the
    // convention note is part of the checked surface.
    let report = run_cli(&[
        "task",
        "eval",
        &fixture("du_examples.json"),
        "--task",
        "checkbox_panel",
    ]);
    let section = report.section_containing("checkbox_panel").unwrap();
    let checkbox_du = section.number("device utilization").unwrap();
    assert_eq!(
        checkbox_du, 0.000625,
        "checkbox du {checkbox_du} is not exactly 0.0625%"
    );
    let note = section.text("note").expect("checkbox report carries a note");
    assert!(
        note.contains("16") && note.contains("0.25%"),
        "note does not document the 16-bit reading and its 0.25% utilization: {note}"
    );
    let alternative = checkbox_capacity(4, None).map(|k| 2f64.powi(k as i32)).unwrap();
    assert_eq!(alternative, 16.0);

    println!(
        "[criterion 3] PASS: du radio {:.4}%, freehand {:.1}%, gesture {:.4}%, \
         checkbox {:.4}% with note quantifying the 16-bit reading at 0.25%",
        radio_du * 100.0,
        freehand_du * 100.0,
        gesture_du * 100.0,
        checkbox_du * 100.0
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: freehand capacity closed form
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_freehand_capacity() {
    let single = freehand_capacity(512, 512, 1).unwrap();
    assert_eq!(
        single.total_bits, 18.0,
        "single-point capacity {} is not exactly 18 bits",
        single.total_bits
    );

    let twenty = freehand_capacity(512, 512, 20).unwrap();
    assert!(
        twenty.total_bits > 360.0 && twenty.total_bits < 360.01,
        "twenty-point capacity {} outside (360, 360.01)",
        twenty.total_bits
    );

    println!(
        "[criterion 4] PASS: freehand 512x512 capacity {} bits at 1 point, \
         {:.7} bits at 20 points",
        single.total_bits, twenty.total_bits
    );
}

// ---------------------------------------------------------------------------
// Criterion 5: menu costs, ratios, mistakes, and step swaps
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_menu_cost_benefit() {
    let policy = EpsilonPolicy::default();
    let menus = [
        menu(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
        menu(0.2, 0.7, 0.1),
        menu(0.09, 0.9, 0.01),
    ];

    // Baseline expected costs and benefit ratios.
    let expected_costs = [4.0, 3.8, 3.84];
    let expected_ratios = [0.40, 0.30, 0.13];
    let mut costs = Vec::new();
    let mut ratios = Vec::new();
    for ((alphabet, cost_target), ratio_target) in
        menus.iter().zip(expected_costs).zip(expected_ratios)
    {
        let eval = evaluate_task(alphabet, &menu_cost(), None, None, None, &policy).unwrap();
        assert!(
            (eval.expected_cost_seconds - cost_target).abs() <= 1e-12,
            "cost {} is not exactly {cost_target}",
            eval.expected_cost_seconds
        );
        assert!(
            (eval.cost_benefit - ratio_target).abs() <= 0.005,
            "ratio {} outside {ratio_target} +/- 0.005",
            eval.cost_benefit
        );
        costs.push(format!("{:.2}", eval.expected_cost_seconds));
        ratios.push(format!("{:.4}", eval.cost_benefit));
    }

    // The mistake model distorts the two skewed menus and dilutes their
    // ratios.
    let expected_distortions = [0.16, 0.24];
    let expected_degraded = [0.22, 0.06];
    let mut distortions = Vec::new();
    let mut degraded = Vec::new();
    for ((alphabet, pd_target), ratio_target) in menus[1..]
        .iter()
        .zip(expected_distortions)
        .zip(expected_degraded)
    {
        let eval = evaluate_task(
            alphabet,
            &menu_cost(),
            Some(&menu_mistake()),
            None,
            None,
            &policy,
        )
        .unwrap();
        assert!(
            (eval.potential_distortion - pd_target).abs() <= 0.005,
            "distortion {} outside {pd_target} +/- 0.005",
            eval.potential_distortion
        );
        assert!(
            (eval.cost_benefit - ratio_target).abs() <= 0.005,
            "degraded ratio {} outside {ratio_target} +/- 0.005",
            eval.cost_benefit
        );
        distortions.push(format!("{:.4}", eval.potential_distortion));
        degraded.push(format!("{:.4}", eval.cost_benefit));
    }

    // Swapping the step counts of the two most-used options helps both
    // skewed menus.
    let expected_swapped = [0.41, 0.23];
    let mut swapped_ratios = Vec::new();
    for (alphabet, ratio_target) in menus[1..].iter().zip(expected_swapped) {
        let eval = reassign_steps(alphabet, &menu_cost(), &swap_select_and_more()).unwrap();
        assert!(
            (eval.cost_benefit - ratio_target).abs() <= 0.005,
            "swapped ratio {} outside {ratio_target} +/- 0.005",
            eval.cost_benefit
        );
        swapped_ratios.push(format!("{:.4}", eval.cost_benefit));
    }

    println!(
        "[criterion 5] PASS: costs {} s, ratios {}, distortions {}, degraded \
         ratios {}, swapped ratios {}",
        costs.join("/"),
        ratios.join("/"),
        distortions.join("/"),
        degraded.join("/"),
        swapped_ratios.join("/")
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: negative-benefit threshold, bisection vs grid scan
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_negative_benefit_threshold() {
    let policy = EpsilonPolicy::default();
    let alphabet = menu(0.09, 0.9, 0.01);
    let d = alphabet.distribution();

    let bisected = negative_threshold(d, "select_channel", "more_event_info", &policy)
        .unwrap()
        .expect("the benefit must go negative before the source letter is exhausted");
    assert!(
        (0.30..=0.33).contains(&bisected),
        "threshold {bisected} outside [0.30, 0.33]"
    );

    // Independent oracle: walk a 0.001-step grid and take the first mass
    // whose benefit is negative, rebuilding the shifted distribution by hand.
    let entropy = d.entropy();
    let benefit = |mass: f64| -> f64 {
        let shifted = ProbabilityDistribution::new(vec![
            ("more_event_info".into(), 0.09 + mass),
            ("select_channel".into(), 0.9 - mass),
            ("view_hd_alternatives".into(), 0.01),
        ])
        .unwrap();
        entropy - kl_divergence(&shifted, d, &policy).unwrap()
    };
    let mut grid_first = None;
    let mut step = 1;
    while f64::from(step) * 0.001 <= 0.9 {
        let mass = f64::from(step) * 0.001;
        if benefit(mass) < 0.0 {
            grid_first = Some(mass);
            break;
        }
        step += 1;
    }
    let grid_first = grid_first.expect("the grid scan must also find a sign change");
    assert!(
        (bisected - grid_first).abs() <= 0.001,
        "bisection {bisected} and grid scan {grid_first} disagree by more than one step"
    );

    println!(
        "[criterion 6] PASS: threshold mass {bisected:.6} in [0.30, 0.33]; \
         0.001-step grid scan first negative at {grid_first:.3}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 7: knowledge-ledger rate
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_ledger_rate() {
    let ledger = KnowledgeLedger::new(vec![
        LedgerEntry::new("file type relevance", KnowledgeCategory::SoftAlphabet, 10.0).unwrap(),
        LedgerEntry::new("recent edits", KnowledgeCategory::Situational, 47.0).unwrap(),
    ]);
    let options = (0..15).map(|i| (format!("w{i}"), 1.0 / 15.0)).collect();
    let f2 = radio_alphabet(options).unwrap();
    let rate = estimate_f1_f2_rate(&ledger, &f2, 1.0).unwrap();
    assert_eq!(rate.rate, 57.0, "rate {} is not exactly 57 bits/s", rate.rate);
    assert_eq!(rate.total_benefit, 57.0);

    println!(
        "[criterion 7] PASS: ledger of 10 + 47 bits over 1 s yields exactly \
         {} bits/s (action entropy {:.4} bits)",
        rate.rate, rate.f2_compression
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: three-bit study analysis
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_three_bit_study() {
    let design = three_bit_design(AggregationMode::ConsistentIndividual);
    let records = replication_records();
    let result = study_cost_benefit(&design, &records).unwrap();

    let question_entropy = f64::from(design.total_bits());
    assert_eq!(question_entropy, 3.0);

    // The decision-stage entropy is the question entropy minus the measured
    // compression.
    let decision_entropy = question_entropy - result.alphabet_compression;
    assert!(
        (0.072..=0.074).contains(&decision_entropy),
        "decision-stage entropy {decision_entropy} outside [0.072, 0.074]"
    );
    assert!(
        (2.925..=2.929).contains(&result.alphabet_compression),
        "compression {} outside [2.925, 2.929]",
        result.alphabet_compression
    );
    assert!(
        (1.583..=1.603).contains(&result.potential_distortion),
        "distortion {} outside [1.583, 1.603]",
        result.potential_distortion
    );
    assert!(
        (1.325..=1.345).contains(&result.benefit),
        "benefit {} outside [1.325, 1.345]",
        result.benefit
    );

    println!(
        "[criterion 8] PASS: question entropy {question_entropy} bits, decision \
         entropy {decision_entropy:.6} bits, compression {:.6} bits, distortion \
         {:.6} bits, benefit {:.6} bits",
        result.alphabet_compression, result.potential_distortion, result.benefit
    );
}

// ---------------------------------------------------------------------------
// Criterion 9: randomized property families
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_property_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
    let policy = EpsilonPolicy::default();

    // Entropy bounds, and uniformity attaining the maximum.
    for _ in 0..500 {
        let n = rng.random_range(2..=8);
        let d = random_distribution(&mut rng, n);
        let h = d.entropy();
        assert!(h >= 0.0 && h <= max_entropy(n as u64).unwrap() + 1e-12);
    }
    for n in 2..=8usize {
        let uniform =
            ProbabilityDistribution::uniform((0..n).map(|i| format!("l{i}")).collect()).unwrap();
        assert!((uniform.entropy() - max_entropy(n as u64).unwrap()).abs() <= 1e-12);
    }

    // Capped divergence: non-negative everywhere, zero against itself.
    for _ in 0..500 {
        let n = rng.random_range(2..=8);
        let p = random_distribution(&mut rng, n);
        let q = random_distribution(&mut rng, n);
        assert!(kl_divergence(&q, &p, &policy).unwrap() >= 0.0);
        assert!(kl_divergence(&p, &p, &policy).unwrap().abs() <= 1e-12);
    }

    // Processing chains never gain information about the source.
    let mut min_slack = f64::INFINITY;
    for _ in 0..1000 {
        let n1 = rng.random_range(2..=6);
        let n2 = rng.random_range(2..=6);
        let n3 = rng.random_range(2..=6);
        let source = random_distribution(&mut rng, n1);
        let first = random_channel(&mut rng, n1, n2);
        let second = random_channel(&mut rng, n2, n3);
        let check = dpi_check(&source, &first, &second).unwrap();
        assert!(
            check.holds,
            "processing gained information: {} -> {}",
            check.i12, check.i13
        );
        min_slack = min_slack.min(check.i12 - check.i13);
    }

    // Mistake shifts conserve probability mass and leave bystanders alone.
    for _ in 0..500 {
        let n = rng.random_range(3..=8);
        let d = random_distribution(&mut rng, n);
        let from = format!("l{}", rng.random_range(0..n));
        let mut to = format!("l{}", rng.random_range(0..n));
        while to == from {
            to = format!("l{}", rng.random_range(0..n));
        }
        let mass = rng.random::<f64>() * d.probability(&from).unwrap();
        let mistake = MistakeModel::new(&from, &to, mass, 0.0).unwrap();
        let shifted = apply_mistake_shift(&d, &mistake).unwrap();
        let total: f64 = shifted.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() <= 1e-12);
        for (label, p) in d.iter() {
            if label != from && label != to {
                assert_eq!(shifted.probability(label), Some(p));
            }
        }
    }

    // Re-dealing step counts can change cost but never the capacity.
    for _ in 0..500 {
        let n = rng.random_range(2..=8);
        let d = random_distribution(&mut rng, n);
        let alphabet = ActionAlphabet::custom(
            d.iter().map(|(l, p)| (l.to_string(), p)).collect(),
            None,
        )
        .unwrap();
        let steps: BTreeMap<String, u32> = d
            .labels()
            .map(|l| (l.to_string(), rng.random_range(1..=9)))
            .collect();
        let cost = CostModel::new(steps, 1.0, 0.0).unwrap();
        let mut targets: Vec<String> = d.labels().map(str::to_string).collect();
        for i in (1..targets.len()).rev() {
            targets.swap(i, rng.random_range(0..=i));
        }
        let permutation: BTreeMap<String, String> = d
            .labels()
            .map(str::to_string)
            .zip(targets)
            .collect();
        let eval = reassign_steps(&alphabet, &cost, &permutation).unwrap();
        assert_eq!(eval.action_capacity, alphabet.capacity());
        assert_eq!(eval.potential_distortion, 0.0);
    }

    // In the consistent-individual mode the measured compression is a
    // property of the design alone: fuzzing the response pool cannot move it.
    let design = three_bit_design(AggregationMode::ConsistentIndividual);
    let letters: Vec<String> = design.labels();
    let mut compressions = Vec::new();
    for _ in 0..100 {
        let n_records = rng.random_range(50..=200);
        let records: Vec<TrialRecord> = (0..n_records)
            .map(|i| {
                TrialRecord::new(
                    format!("p{:02}", i % 7 + 1),
                    format!("t{i:04}"),
                    "111",
                    letters[rng.random_range(0..letters.len())].clone(),
                    500.0 + rng.random::<f64>() * 4500.0,
                )
                .unwrap()
            })
            .collect();
        let result = study_cost_benefit(&design, &records).unwrap();
        compressions.push(result.alphabet_compression);
    }
    let first = compressions[0];
    for c in &compressions {
        assert!(
            (c - first).abs() <= 1e-12,
            "consistent-mode compression moved with the responses: {first} vs {c}"
        );
    }

    println!(
        "[criterion 9] PASS: entropy bounds (500), divergence non-negativity \
         and self-zero (500), processing chains held (1000, min slack \
         {min_slack:.3e} bits), mistake-shift conservation (500), step \
         reassignment capacity invariance (500), consistent-mode compression \
         fixed at {first:.6} bits across 100 fuzzed response pools"
    );
}

// ---------------------------------------------------------------------------
// Criterion 10: the same numbers through the command-line interface
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_cli_end_to_end() {
    // Devices (criterion 1 numbers through the CLI).
    let report = run_cli(&["device", "cap", &fixture("devices.json"), "--device", "mouse"]);
    let section = report.section_containing("device: mouse").unwrap();
    let capacity = section.number("instantaneous capacity").unwrap();
    let bandwidth = section.number("bandwidth").unwrap();
    assert!((capacity - 22.984).abs() <= 0.001);
    assert!((bandwidth - 2298.4).abs() <= 0.1);
    let report = run_cli(&[
        "device",
        "cap",
        &fixture("devices.json"),
        "--device",
        "data_glove",
    ]);
    let glove_bandwidth = report.sections[0].number("bandwidth").unwrap();
    assert!((glove_bandwidth - 10888.6).abs() <= 0.5);

    // Menus (criterion 5 numbers through the CLI).
    let cases = [
        ("tv_uniform", 4.0, 0.40, None, None),
        ("tv_skewed", 3.8, 0.30, Some((0.16, 0.22)), Some(0.41)),
        ("tv_peaked", 3.84, 0.13, Some((0.24, 0.06)), Some(0.23)),
    ];
    for (task, cost_target, ratio_target, mistake_targets, swap_target) in cases {
        let mut args = vec![
            "task".to_string(),
            "eval".to_string(),
            fixture("tv_menu.json"),
            "--task".to_string(),
            task.to_string(),
        ];
        if swap_target.is_some() {
            args.push("--swap".to_string());
            args.push("select_channel,more_event_info".to_string());
        }
        let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let report = run_cli(&arg_refs);

        let baseline = &report.sections[0];
        let cost = baseline.number("expected cost").unwrap();
        let ratio = baseline.number("cost-benefit").unwrap();
        assert!((cost - cost_target).abs() <= 1e-12, "{task} cost {cost}");
        assert!(
            (ratio - ratio_target).abs() <= 0.005,
            "{task} ratio {ratio} outside {ratio_target} +/- 0.005"
        );

        if let Some((pd_target, degraded_target)) = mistake_targets {
            let with_mistake = report
                .section_containing("(with mistake)")
                .expect("skewed menus declare a mistake");
            let pd = with_mistake.number("potential distortion").unwrap();
            let degraded = with_mistake.number("cost-benefit").unwrap();
            assert!((pd - pd_target).abs() <= 0.005, "{task} distortion {pd}");
            assert!(
                (degraded - degraded_target).abs() <= 0.005,
                "{task} degraded ratio {degraded}"
            );
        }
        if let Some(swap_ratio_target) = swap_target {
            let swapped = report
                .section_containing("steps swapped")
                .expect("swap was requested");
            let swapped_ratio = swapped.number("cost-benefit").unwrap();
            assert!(
                (swapped_ratio - swap_ratio_target).abs() <= 0.005,
                "{task} swapped ratio {swapped_ratio}"
            );
        }
    }

    // Study (criterion 8 numbers through the CLI).
    let report = run_cli(&[
        "study",
        "analyze",
        &fixture("study_three_bit.json"),
        &fixture("study_three_bit_trials.csv"),
    ]);
    let section = &report.sections[0];
    assert_eq!(section.number("question stage entropy"), Some(3.0));
    let decision = section.number("decision stage entropy").unwrap();
    let compression = section.number("alphabet compression").unwrap();
    let distortion = section.number("potential distortion").unwrap();
    let benefit = section.number("benefit").unwrap();
    assert!((0.072..=0.074).contains(&decision), "decision {decision}");
    assert!(
        (2.925..=2.929).contains(&compression),
        "compression {compression}"
    );
    assert!(
        (1.583..=1.603).contains(&distortion),
        "distortion {distortion}"
    );
    assert!((1.325..=1.345).contains(&benefit), "benefit {benefit}");

    // JSON reports round-trip byte-identically for all three command shapes.
    for args in [
        vec!["device", "cap", &fixture("devices.json"), "--device", "mouse"],
        vec![
            "task",
            "eval",
            &fixture("tv_menu.json"),
            "--task",
            "tv_peaked",
            "--swap",
            "select_channel,more_event_info",
        ],
        vec![
            "study",
            "analyze",
            &fixture("study_three_bit.json"),
            &fixture("study_three_bit_trials.csv"),
        ],
    ] {
        let mut argv = vec!["inbits", "--format", "json"];
        argv.extend(args.iter().copied());
        let out = run_command(argv.iter().map(|s| s.to_string()));
        assert_eq!(out.exit_code, 0, "{}", out.diagnostics);
        let reparsed: Report = serde_json::from_str(&out.rendered).unwrap();
        assert_eq!(
            reparsed.render(OutputFormat::Json),
            out.rendered,
            "JSON round-trip is not byte-identical for {args:?}"
        );
    }

    println!(
        "[criterion 10] PASS: CLI reproduces device numbers (mouse {capacity:.4} \
         bits, {bandwidth:.4} bits/s; glove {glove_bandwidth:.4} bits/s), menu \
         costs and ratios, study numbers (compression {compression:.6} bits, \
         distortion {distortion:.6} bits, benefit {benefit:.6} bits), and JSON \
         reports round-trip byte-identically"
    );
}
