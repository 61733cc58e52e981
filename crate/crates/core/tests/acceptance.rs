//! End-to-end acceptance gate. Every criterion prints one
//! `ACCEPTANCE <name>: PASS` line (visible under `--nocapture`); a failed
//! assertion keeps the line from printing and fails the test.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use saldet::compactness::{propagate_compactness_with_tol, RegionGraph};
use saldet::eval::{
    adaptive_threshold, binarize, evaluate, f_measure, load_dataset, mae, precision_recall,
    DatasetLayout, EvalItem, GroundTruthMask,
};
use saldet::foreground::estimate_margins;
use saldet::imaging::{IntegralMap, ScalarMap};
use saldet::objectness::{accumulate_hypotheses, HypothesisWindow, ProposalSet};
use saldet::pipeline::{detect, rescale_saliency, PipelineConfig};
use saldet::synth::synth_image;

/// Worklist propagation agrees with exhaustive fixed-point iteration on 100
/// random connected graphs, within 1e-9 per vertex, in under a second.
///
/// Both sides run with a zero update threshold: two states that are merely
/// stable at 1e-9 can drift apart by more than 1e-9 after a chain of
/// square-root relaxations, so the comparison pins the exact attractor.
#[test]
fn algorithm1_worklist_matches_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let started = Instant::now();
    for case in 0..100 {
        let n = rng.random_range(2..=20usize);
        let mut edges = Vec::new();
        for v in 1..n as u32 {
            edges.push((rng.random_range(0..v), v));
        }
        for _ in 0..rng.random_range(0..=n) {
            let a = rng.random_range(0..n as u32);
            let b = rng.random_range(0..n as u32);
            if a != b {
                edges.push((a, b));
            }
        }
        let of: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let graph = RegionGraph::from_parts(of.clone(), &edges).unwrap();
        let source = rng.random_range(0..n);

        let (worklist, _) = propagate_compactness_with_tol(&graph, source, 0.0).unwrap();

        // Oracle: sweep every directed edge until nothing improves.
        let mut c = vec![0.0f64; n];
        c[source] = of[source];
        loop {
            let mut changed = false;
            for &(a, b) in &edges {
                for (i, j) in [(a as usize, b as usize), (b as usize, a as usize)] {
                    let candidate = (c[i] * of[j]).sqrt();
                    if candidate > c[j] {
                        c[j] = candidate;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        for v in 0..n {
            assert!(
                (worklist[v] - c[v]).abs() <= 1e-9,
                "case {case}: vertex {v} worklist {} oracle {}",
                worklist[v],
                c[v]
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE algorithm1_worklist_matches_fixed_point: PASS ({elapsed:?})");
}

/// Every hand-computed metric example reproduces exactly, plus the sampled
/// identities: F(p,p) = p on 100 values and recall monotone in threshold on
/// 50 random map/mask pairs.
#[test]
fn metrics_reproduce_hand_examples() {
    // f_measure
    assert!((f_measure(0.8, 0.4, 0.3) - 0.65).abs() < 1e-12);
    assert_eq!(f_measure(1.0, 0.0, 0.3), 0.0);
    assert_eq!(f_measure(0.0, 0.0, 0.3), 0.0);
    for i in 0..100 {
        let p = (i as f64 + 1.0) / 100.0;
        for beta2 in [0.3, 1.0, 2.0] {
            assert!((f_measure(p, p, beta2) - p).abs() < 1e-12);
        }
    }

    // adaptive_threshold
    let half = ScalarMap::from_fn(4, 4, |_, _| 0.5);
    assert!((adaptive_threshold(&half) - 1.0).abs() < 1e-12);
    let zero = ScalarMap::zeros(4, 4);
    assert_eq!(adaptive_threshold(&zero), 0.0);
    assert!(saldet::eval::adaptive_mask(&zero)
        .as_slice()
        .iter()
        .all(|&b| !b));
    let two = ScalarMap::from_values(2, 1, vec![0.2, 0.6]).unwrap();
    assert!((adaptive_threshold(&two) - 0.8).abs() < 1e-12);

    // mae
    let s = ScalarMap::from_values(2, 1, vec![0.25, 0.5]).unwrap();
    let gt = GroundTruthMask::from_bools(2, 1, vec![false, true]).unwrap();
    assert!((mae(&s, &gt).unwrap() - 0.375).abs() < 1e-12);
    let ones = ScalarMap::from_fn(3, 3, |_, _| 1.0);
    let empty = GroundTruthMask::from_bools(3, 3, vec![false; 9]).unwrap();
    assert!((mae(&ones, &empty).unwrap() - 1.0).abs() < 1e-12);

    // precision_recall conventions
    let gt25 = GroundTruthMask::from_bools(2, 2, vec![true, false, false, false]).unwrap();
    let all_on = binarize(&ScalarMap::from_fn(2, 2, |_, _| 1.0), 0);
    let (p, r) = precision_recall(&all_on, &gt25).unwrap();
    assert!((p - 0.25).abs() < 1e-12);
    assert_eq!(r, 1.0);
    let gt_two = GroundTruthMask::from_bools(2, 2, vec![true, true, false, false]).unwrap();
    let half_of_gt = binarize(
        &ScalarMap::from_values(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap(),
        255,
    );
    let (p, r) = precision_recall(&half_of_gt, &gt_two).unwrap();
    assert_eq!((p, r), (1.0, 0.5));

    // binarize examples
    let mix = ScalarMap::from_values(2, 1, vec![0.2, 0.8]).unwrap();
    assert!(binarize(&mix, 0).as_slice().iter().all(|&b| b));
    assert_eq!(binarize(&mix, 128).as_slice(), &[false, true]);

    // evaluate: constant 0.5 maps against 25%-coverage masks
    let constant = ScalarMap::from_fn(4, 4, |_, _| 0.5);
    let quarter = GroundTruthMask::from_bools(
        4,
        4,
        (0..16).map(|i| i % 4 == 0).collect(),
    )
    .unwrap();
    assert!((mae(&constant, &quarter).unwrap() - 0.5).abs() < 1e-12);
    let report = evaluate(vec![EvalItem {
        name: "flat".into(),
        saliency: constant,
        mask: quarter,
    }])
    .unwrap();
    for t in 0..=127usize {
        assert!(
            (report.curve[t].precision - 0.25).abs() < 1e-12,
            "threshold {t}"
        );
    }

    // recall monotone on random pairs
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    for _ in 0..50 {
        let w = rng.random_range(4..20u32);
        let h = rng.random_range(4..20u32);
        let s = ScalarMap::from_fn(w, h, |_, _| rng.random());
        let gt = GroundTruthMask::from_bools(
            w,
            h,
            (0..w * h).map(|_| rng.random_bool(0.4)).collect(),
        )
        .unwrap();
        let mut last = f64::INFINITY;
        for t in 0..=255u8 {
            let (_, recall) = precision_recall(&binarize(&s, t), &gt).unwrap();
            assert!(recall <= last + 1e-15, "recall rose at t = {t}");
            last = recall;
        }
    }
    println!("ACCEPTANCE metrics_reproduce_hand_examples: PASS");
}

/// Integral-image rectangle sums and margin estimation agree with naive
/// scans on 200 random maps: exactly on integer-valued inputs, to 1e-9 on
/// real-valued ones.
#[test]
fn integral_and_margins_match_naive() {
    fn naive_rect(m: &ScalarMap, l: u32, t: u32, r: u32, b: u32) -> f64 {
        let mut sum = 0.0;
        for y in t..=b {
            for x in l..=r {
                sum += m.get(x, y);
            }
        }
        sum
    }

    fn naive_margins(m: &ScalarMap, theta: f64) -> (u32, u32, u32, u32) {
        let (w, h) = m.dims();
        let total = naive_rect(m, 0, 0, w - 1, h - 1);
        let target = theta * total;
        let top = (0..h)
            .find(|&t| naive_rect(m, 0, 0, w - 1, t) >= target)
            .unwrap_or(h - 1);
        let bottom = (0..h)
            .rev()
            .find(|&b| naive_rect(m, 0, b, w - 1, h - 1) >= target)
            .unwrap_or(0);
        let left = (0..w)
            .find(|&l| naive_rect(m, 0, 0, l, h - 1) >= target)
            .unwrap_or(w - 1);
        let right = (0..w)
            .rev()
            .find(|&r| naive_rect(m, r, 0, w - 1, h - 1) >= target)
            .unwrap_or(0);
        (left, top, right, bottom)
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    for case in 0..200 {
        let w = rng.random_range(3..24u32);
        let h = rng.random_range(3..24u32);
        let integer_valued = case % 2 == 0;
        let m = if integer_valued {
            ScalarMap::from_fn(w, h, |_, _| rng.random_range(0..16) as f64)
        } else {
            ScalarMap::from_fn(w, h, |_, _| rng.random::<f64>() + 1e-3)
        };
        let integral = IntegralMap::build(&m);
        for _ in 0..20 {
            let l = rng.random_range(0..w);
            let r = rng.random_range(l..w);
            let t = rng.random_range(0..h);
            let b = rng.random_range(t..h);
            let fast = integral.rect_sum(l, t, r, b);
            let slow = naive_rect(&m, l, t, r, b);
            if integer_valued {
                assert_eq!(fast, slow, "case {case}: rect ({l},{t},{r},{b})");
            } else {
                assert!(
                    (fast - slow).abs() <= 1e-9 * slow.abs().max(1.0),
                    "case {case}: rect ({l},{t},{r},{b}) fast {fast} slow {slow}"
                );
            }
        }
        if m.total() > 0.0 {
            let theta = rng.random_range(0.02..=0.5);
            let fast = estimate_margins(&m, theta).unwrap();
            let slow = naive_margins(&m, theta);
            assert_eq!(
                (fast.l, fast.t, fast.r, fast.b),
                slow,
                "case {case}: theta {theta}"
            );
        }
    }
    println!("ACCEPTANCE integral_and_margins_match_naive: PASS");
}

/// Corner-increment accumulation equals per-window rasterization, exactly,
/// on 100 random proposal sets over frames between 16x16 and 64x64.
#[test]
fn accumulation_matches_rasterization() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    for case in 0..100 {
        let w = rng.random_range(16..=64u32);
        let h = rng.random_range(16..=64u32);
        let count = rng.random_range(1..=48usize);
        let windows: Vec<HypothesisWindow> = (0..count)
            .map(|_| {
                let l = rng.random_range(0..w);
                let t = rng.random_range(0..h);
                let r = rng.random_range(l..w);
                let b = rng.random_range(t..h);
                HypothesisWindow::new(l, t, r, b).unwrap()
            })
            .collect();
        let set = ProposalSet::new(windows.clone());
        let fast = accumulate_hypotheses(&set, w, h).unwrap();

        let mut slow = vec![0.0f64; (w * h) as usize];
        for win in &windows {
            for y in win.t..=win.b {
                for x in win.l..=win.r {
                    slow[(y * w + x) as usize] += 1.0;
                }
            }
        }
        assert_eq!(fast.values(), slow.as_slice(), "case {case}");
    }
    println!("ACCEPTANCE accumulation_matches_rasterization: PASS");
}

/// Default pipeline on 50 fixed-seed synthetic frames: mean adaptive F_beta
/// at least 0.80 and mean MAE at most 0.12.
#[test]
fn synthetic_end_to_end_quality() {
    let config = PipelineConfig::default();
    let mut items = Vec::new();
    for index in 0..50u32 {
        let (frame, mask) = synth_image(2024, index, 160, 120).unwrap();
        let result = detect(&frame, &config).unwrap();
        items.push(EvalItem {
            name: format!("{index:04}"),
            saliency: result.saliency,
            mask,
        });
    }
    let report = evaluate(items).unwrap();
    println!(
        "synthetic set: mean F_beta {:.4}, mean MAE {:.4}",
        report.mean_f_beta, report.mean_mae
    );
    assert!(
        report.mean_f_beta >= 0.80,
        "mean F_beta {:.4} below 0.80",
        report.mean_f_beta
    );
    assert!(
        report.mean_mae <= 0.12,
        "mean MAE {:.4} above 0.12",
        report.mean_mae
    );
    println!("ACCEPTANCE synthetic_end_to_end_quality: PASS");
}

/// Two full detect+eval runs over the synthetic set produce byte-identical
/// map PNGs and metric CSVs.
#[test]
fn determinism_byte_identical() {
    let config = PipelineConfig::default();
    let run = |dir: &std::path::Path| {
        let mut items = Vec::new();
        for index in 0..6u32 {
            let (frame, mask) = synth_image(99, index, 96, 72).unwrap();
            let result = detect(&frame, &config).unwrap();
            let name = format!("{index:04}");
            saldet::io::save_gray_png(dir.join(format!("{name}.png")), &result.saliency).unwrap();
            items.push(EvalItem {
                name,
                saliency: result.saliency,
                mask,
            });
        }
        let report = evaluate(items).unwrap();
        std::fs::write(dir.join("report.csv"), report.per_image_csv()).unwrap();
        std::fs::write(dir.join("curve.csv"), report.curve_csv()).unwrap();
    };

    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(a.path());
    run(b.path());

    let mut names: Vec<String> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for name in names {
        let bytes_a = std::fs::read(a.path().join(&name)).unwrap();
        let bytes_b = std::fs::read(b.path().join(&name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{name} differs between runs");
    }
    println!("ACCEPTANCE determinism_byte_identical: PASS");
}

/// Single-threaded detect on a 400x300 frame finishes within 1.0 s (best of
/// three after a warmup), with objectness and compactness together covering
/// at least half of the summed stage time.
#[test]
fn performance_envelope() {
    let (frame, _) = synth_image(7, 0, 400, 300).unwrap();
    let config = PipelineConfig::default();
    detect(&frame, &config).unwrap();

    let mut best = Duration::MAX;
    let mut result = None;
    for _ in 0..3 {
        let started = Instant::now();
        let r = detect(&frame, &config).unwrap();
        best = best.min(started.elapsed());
        result = Some(r);
    }
    let result = result.unwrap();
    let stage_total: f64 = result.timings.iter().map(|t| t.ms).sum();
    let heavy: f64 = result
        .timings
        .iter()
        .filter(|t| t.stage == "objectness" || t.stage == "compactness")
        .map(|t| t.ms)
        .sum();
    println!(
        "detect 400x300: best {best:?}; stages {:?}",
        result
            .timings
            .iter()
            .map(|t| (t.stage, format!("{:.1}ms", t.ms)))
            .collect::<Vec<_>>()
    );
    assert!(best <= Duration::from_secs(1), "best run {best:?}");
    assert!(
        heavy >= 0.5 * stage_total,
        "objectness+compactness {heavy:.1}ms of {stage_total:.1}ms"
    );
    println!("ACCEPTANCE performance_envelope: PASS ({best:?})");
}

/// Contrast stretching preserves pixel rank order on 20 random maps and
/// reaches the required coverage at 0.5 whenever the input max is positive.
#[test]
fn rescale_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA8);
    for case in 0..20 {
        let w = rng.random_range(8..24u32);
        let h = rng.random_range(8..24u32);
        // Mix in hard zeros and repeated values so ties get exercised.
        let m = ScalarMap::from_fn(w, h, |_, _| match rng.random_range(0..4) {
            0 => 0.0,
            1 => 0.25,
            _ => rng.random::<f64>().powi(3),
        });
        let out = rescale_saliency(&m, 90.0).unwrap();
        let v_in = m.values();
        let v_out = out.values();
        for i in 0..v_in.len() {
            for j in (i + 1)..v_in.len() {
                match v_in[i].partial_cmp(&v_in[j]).unwrap() {
                    std::cmp::Ordering::Less => assert!(
                        v_out[i] <= v_out[j],
                        "case {case}: order broken at ({i},{j})"
                    ),
                    std::cmp::Ordering::Greater => assert!(
                        v_out[i] >= v_out[j],
                        "case {case}: order broken at ({i},{j})"
                    ),
                    std::cmp::Ordering::Equal => assert_eq!(
                        v_out[i], v_out[j],
                        "case {case}: tie broken at ({i},{j})"
                    ),
                }
            }
        }
        if v_in.iter().any(|&v| v > 0.0) {
            let need = ((w * h) as f64 * 0.10).ceil() as usize;
            let have = v_out.iter().filter(|&&v| v >= 0.5).count();
            assert!(have >= need, "case {case}: coverage {have} < {need}");
        }
    }
    println!("ACCEPTANCE rescale_contract: PASS");
}

/// Optional dataset sanity check, gated on SALDET_MSRA1000_DIR. Runs the
/// full pipeline over the directory with four worker threads, then checks
/// wall time, curve monotonicity, and an MAE floor that guards against the
/// pipeline inverting foreground and background.
#[test]
fn msra1000_sanity() {
    let Ok(root) = std::env::var("SALDET_MSRA1000_DIR") else {
        println!("ACCEPTANCE msra1000_sanity: SKIP (SALDET_MSRA1000_DIR not set)");
        return;
    };
    let pairs = load_dataset(&root, DatasetLayout::Msra1000).unwrap();
    let config = PipelineConfig::default();
    let started = Instant::now();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let items = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..4 {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(pair) = pairs.get(i) else { break };
                let frame = saldet::io::load_rgb(&pair.image).unwrap();
                let mask = GroundTruthMask::load(&pair.mask).unwrap();
                let result = detect(&frame, &config).unwrap();
                items.lock().unwrap().push(EvalItem {
                    name: pair.name.clone(),
                    saliency: result.saliency,
                    mask,
                });
            });
        }
    });
    let elapsed = started.elapsed();
    let report = evaluate(items.into_inner().unwrap()).unwrap();
    println!(
        "msra1000: {} images in {elapsed:?}, mean F_beta {:.4}, mean MAE {:.4}",
        report.image_count, report.mean_f_beta, report.mean_mae
    );
    assert!(elapsed <= Duration::from_secs(20 * 60), "took {elapsed:?}");
    for t in 1..256 {
        assert!(
            report.curve[t].recall <= report.curve[t - 1].recall + 1e-12,
            "mean recall rose at t = {t}"
        );
    }
    assert!(
        report.mean_mae <= 0.30,
        "mean MAE {:.4} above 0.30",
        report.mean_mae
    );
    println!("ACCEPTANCE msra1000_sanity: PASS");
}
