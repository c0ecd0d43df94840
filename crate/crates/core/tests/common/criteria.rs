//! The acceptance criteria, one function each. Every check returns a
//! verdict with a short detail line; the `acceptance` target prints them.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use instance_order::io::token::OrderRelation;
use instance_order::io::{
    parse_dataset, parse_order_token, parse_released, serialize_dataset, DatasetFile, OrderKind,
    ReleasedOptions, TokenErrorKind,
};
use instance_order::losses::{instance_disparity_loss, smoothness_loss};
use instance_order::metrics::{
    depth_map_metrics, evaluate_occlusion, evaluate_whdr, occlusion_labels, occlusion_prf, whdr,
    DepthLabel, DepthMapReport, WhdrCategory,
};
use instance_order::model::{
    DepthOrder, DepthRelation, ImageAnnotation, InstanceRef, OcclusionMode, OcclusionRelation,
    PairOrder, RangeKind,
};
use instance_order::raster::{InstanceMask, PlaneImage, ScalarMap};
use instance_order::stats::{
    aggregate_votes, conditional_tables, dataset_statistics, StatsCounts, StatsReport,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::cli_cases::setup;
use super::{
    integer_grid, random_dataset, random_image, random_mask_pair, random_prediction,
    reference_disparity_loss, reference_prf, reference_smoothness, reference_whdr, run_cli,
};

pub enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;
type RangeFilter = fn(RangeKind) -> bool;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub type Criterion = (&'static str, fn() -> Verdict);

pub const ALL: [Criterion; 10] = [
    ("occlusion metrics match directed-fact enumeration", || {
        wrap(occlusion_oracle())
    }),
    ("WHDR fixtures and bracketing", || {
        wrap(whdr_fixtures_and_bracketing())
    }),
    ("disparity metrics identities and scale invariance", || {
        wrap(disparity_metrics())
    }),
    ("instance disparity loss properties", || {
        wrap(disparity_loss())
    }),
    ("smoothness loss cases and shift invariance", || {
        wrap(smoothness())
    }),
    (
        "parser round trip, grammar examples, malformed tokens",
        || wrap(parser()),
    ),
    ("vote aggregation stopping rule, exhaustive", || {
        wrap(aggregation())
    }),
    ("conditional tables column-stochastic", || {
        wrap(conditional())
    }),
    ("released data totals and shares", released_data),
    ("CLI output identical across runs and thread counts", || {
        wrap(cli_determinism())
    }),
];

fn wrap(r: Check) -> Verdict {
    match r {
        Ok(detail) => Verdict::Pass(detail),
        Err(detail) => Verdict::Fail(detail),
    }
}

pub fn occlusion_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0x0cc1);
    let images: Vec<ImageAnnotation> = (0..1000).map(|k| random_image(&mut rng, k, 8)).collect();
    let preds: Vec<(ImageAnnotation, ImageAnnotation)> = images
        .iter()
        .map(|img| {
            (
                random_prediction(&mut rng, img, true),
                random_prediction(&mut rng, img, false),
            )
        })
        .collect();
    let start = Instant::now();
    let mut checked = 0usize;
    for (gt, (pred_bi, pred_three)) in images.iter().zip(&preds) {
        for pred in [pred_bi, pred_three] {
            for (mode, without_bi) in [
                (OcclusionMode::WithBidirectional, false),
                (OcclusionMode::WithoutBidirectional, true),
            ] {
                let got = occlusion_prf(&occlusion_labels(gt), &occlusion_labels(pred), mode)
                    .ok()
                    .map(|r| (r.recall, r.precision, r.f1));
                let expected = reference_prf(&[(gt, pred)], without_bi);
                ensure(got == expected, || {
                    format!(
                        "image {}: {mode:?} got {got:?}, expected {expected:?}",
                        gt.image_id()
                    )
                })?;
                checked += 1;
            }
        }
    }
    // Dataset level: facts pooled over all images.
    let gt = DatasetFile::new(images.clone()).unwrap();
    for (pred_images, allow) in [
        (preds.iter().map(|p| p.0.clone()).collect::<Vec<_>>(), true),
        (preds.iter().map(|p| p.1.clone()).collect(), false),
    ] {
        let pred = DatasetFile::new(pred_images).unwrap();
        let pairs: Vec<(&ImageAnnotation, &ImageAnnotation)> =
            gt.images().iter().zip(pred.images()).collect();
        for (mode, without_bi) in [
            (OcclusionMode::WithBidirectional, false),
            (OcclusionMode::WithoutBidirectional, true),
        ] {
            let got = evaluate_occlusion(&gt, &pred, mode).ok().map(|c| {
                let r = c.prf();
                (r.recall, r.precision, r.f1)
            });
            let expected = reference_prf(&pairs, without_bi);
            ensure(got == expected, || {
                format!("dataset ({allow}) {mode:?}: got {got:?}, expected {expected:?}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{checked} image evaluations exact, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

pub fn whdr_fixtures_and_bracketing() -> Check {
    let label = |a, b, order, count| DepthLabel {
        pair: (a, b),
        relation: DepthRelation::distinct(order),
        count,
    };
    let gt = [
        label(1, 2, DepthOrder::Closer, 2),
        label(3, 4, DepthOrder::Equal, 4),
    ];
    let third = whdr(
        &gt,
        &[((1, 2), DepthOrder::Closer), ((3, 4), DepthOrder::Farther)],
        WhdrCategory::All,
    )
    .map_err(|e| e.to_string())?;
    ensure(third == 1.0 / 3.0, || format!("hand case gave {third}"))?;
    let right = whdr(
        &gt,
        &[((1, 2), DepthOrder::Closer), ((3, 4), DepthOrder::Equal)],
        WhdrCategory::All,
    )
    .map_err(|e| e.to_string())?;
    let wrong = whdr(
        &gt,
        &[((1, 2), DepthOrder::Farther), ((3, 4), DepthOrder::Closer)],
        WhdrCategory::All,
    )
    .map_err(|e| e.to_string())?;
    ensure(right == 0.0 && wrong == 1.0, || {
        format!("extremes gave {right} and {wrong}")
    })?;

    let mut rng = StdRng::seed_from_u64(0x3d2);
    let mut bracketed = 0usize;
    for _ in 0..1000 {
        let gt = random_dataset(&mut rng, 3, 6);
        let pred = DatasetFile::new(
            gt.images()
                .iter()
                .map(|img| random_prediction(&mut rng, img, true))
                .collect(),
        )
        .unwrap();
        let tally = evaluate_whdr(&gt, &pred).map_err(|e| e.to_string())?;
        let get = |c| tally.whdr(c).ok();
        let (dist, over, all) = (
            get(WhdrCategory::Distinct),
            get(WhdrCategory::Overlap),
            get(WhdrCategory::All),
        );
        let categories: [(Option<f64>, RangeFilter); 3] = [
            (dist, |r| r == RangeKind::Distinct),
            (over, |r| r == RangeKind::Overlap),
            (all, |_| true),
        ];
        for (value, keep) in categories {
            let reference = reference_whdr(&gt, &pred, keep);
            let agree = match (value, reference) {
                (Some(v), Some(r)) => (v - r).abs() <= 1e-12,
                (None, None) => true,
                _ => false,
            };
            ensure(agree, || {
                format!("tally {value:?} vs weighted sum {reference:?}")
            })?;
        }
        if let (Some(d), Some(o), Some(a)) = (dist, over, all) {
            ensure(d.min(o) <= a && a <= d.max(o), || {
                format!("all={a} outside [{d}, {o}]")
            })?;
            bracketed += 1;
        }
    }
    Ok(format!(
        "1/3 exact, extremes 0 and 1, {bracketed} datasets bracketed"
    ))
}

fn positive_map(rng: &mut StdRng, h: usize, w: usize) -> ScalarMap {
    ScalarMap::new(h, w, (0..h * w).map(|_| rng.gen_range(0.1..50.0)).collect()).unwrap()
}

fn errors(r: &DepthMapReport) -> [f64; 3] {
    [r.abs_rel, r.sq_rel, r.rmse_log]
}

fn deltas(r: &DepthMapReport) -> [f64; 3] {
    [r.delta1, r.delta2, r.delta3]
}

pub fn disparity_metrics() -> Check {
    let mut rng = StdRng::seed_from_u64(0xd15);
    for _ in 0..50 {
        let (h, w) = (rng.gen_range(1..12), rng.gen_range(1..12));
        let gt = positive_map(&mut rng, h, w);
        let valid = InstanceMask::full(h, w);
        let same = depth_map_metrics(&gt, &gt, &valid, false).map_err(|e| e.to_string())?;
        ensure(
            errors(&same) == [0.0; 3] && deltas(&same) == [1.0; 3],
            || format!("pred = gt gave {same:?}"),
        )?;
        let doubled = gt.map(|v| 2.0 * v).unwrap();
        let raw = depth_map_metrics(&gt, &doubled, &valid, false).map_err(|e| e.to_string())?;
        ensure(
            (raw.abs_rel - 1.0).abs() <= 1e-12 && deltas(&raw) == [0.0; 3],
            || format!("pred = 2 gt unscaled gave {raw:?}"),
        )?;
        let scaled = depth_map_metrics(&gt, &doubled, &valid, true).map_err(|e| e.to_string())?;
        ensure(
            errors(&scaled).iter().all(|e| *e < 1e-9) && deltas(&scaled) == [1.0; 3],
            || format!("pred = 2 gt scaled gave {scaled:?}"),
        )?;
    }
    for trial in 0..200 {
        let (h, w) = (rng.gen_range(1..16), rng.gen_range(1..16));
        let gt = positive_map(&mut rng, h, w);
        let pred = positive_map(&mut rng, h, w);
        let valid = InstanceMask::full(h, w);
        let s = rng.gen_range(1e-3..1e3);
        let base = depth_map_metrics(&gt, &pred, &valid, true).map_err(|e| e.to_string())?;
        let other = depth_map_metrics(&gt, &pred.map(|v| s * v).unwrap(), &valid, true)
            .map_err(|e| e.to_string())?;
        let close = errors(&base)
            .iter()
            .zip(errors(&other))
            .all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(1.0));
        ensure(close && deltas(&base) == deltas(&other), || {
            format!("trial {trial}, scale {s}: {base:?} vs {other:?}")
        })?;
    }
    Ok("identities exact, 200 scale trials agree".into())
}

fn single_pixel_masks(va: &[f64], vb: &[f64]) -> (ScalarMap, InstanceMask, InstanceMask) {
    let values: Vec<f64> = va.iter().chain(vb).copied().collect();
    let n = values.len();
    let disp = ScalarMap::new(1, n, values).unwrap();
    let a = InstanceMask::from_indices(1, n, (0..va.len()).collect()).unwrap();
    let b = InstanceMask::from_indices(1, n, (va.len()..n).collect()).unwrap();
    (disp, a, b)
}

pub fn disparity_loss() -> Check {
    let tagged = [
        (vec![0.8, 0.9], vec![0.1, 0.2], 0.0),
        (vec![0.1, 0.2], vec![0.8, 0.9], 0.5),
        (vec![0.5], vec![0.5], 0.5),
    ];
    for (va, vb, expected) in &tagged {
        let (disp, a, b) = single_pixel_masks(va, vb);
        let got = instance_disparity_loss(&disp, &a, &b, 1).map_err(|e| e.to_string())?;
        ensure(got == *expected, || {
            format!("A={va:?} B={vb:?}: {got} != {expected}")
        })?;
    }
    let mut rng = StdRng::seed_from_u64(0x1d15);
    for trial in 0..500 {
        let (h, w) = (rng.gen_range(1..=32), rng.gen_range(1..=32));
        if h * w < 2 {
            continue;
        }
        let disp = integer_grid(&mut rng, h, w, 12);
        let (a, b) = random_mask_pair(&mut rng, h, w);
        let d = if rng.gen_bool(0.5) { 1 } else { -1 };
        let loss = instance_disparity_loss(&disp, &a, &b, d).map_err(|e| e.to_string())?;
        let naive = reference_disparity_loss(&disp, &a, &b, f64::from(d));
        ensure(loss == naive, || {
            format!("trial {trial}: {loss} vs naive {naive}")
        })?;
        let swapped = instance_disparity_loss(&disp, &b, &a, -d).map_err(|e| e.to_string())?;
        ensure(loss == swapped, || {
            format!("trial {trial}: swap gave {swapped}, expected {loss}")
        })?;
        let s = rng.gen_range(0.01..100.0);
        let scaled = instance_disparity_loss(&disp.map(|v| s * v).unwrap(), &a, &b, d)
            .map_err(|e| e.to_string())?;
        ensure(loss == scaled, || {
            format!("trial {trial}: scale {s} gave {scaled}, expected {loss}")
        })?;
    }
    Ok("tagged examples 0, 0.5, 0.5 exact; 500 fixtures agree".into())
}

pub fn smoothness() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5300);
    for _ in 0..20 {
        let (h, w) = (rng.gen_range(1..10), rng.gen_range(2..10));
        let disp = ScalarMap::filled(h, w, rng.gen_range(-5.0..5.0)).unwrap();
        let image = PlaneImage::gray(
            ScalarMap::new(h, w, (0..h * w).map(|_| rng.gen()).collect()).unwrap(),
        );
        let v = smoothness_loss(&disp, &image).map_err(|e| e.to_string())?;
        ensure(v == 0.0, || format!("constant disparity gave {v}"))?;
    }
    let disp = ScalarMap::new(1, 2, vec![0.0, 1.0]).unwrap();
    let flat = PlaneImage::gray(ScalarMap::filled(1, 2, 0.3).unwrap());
    let one = smoothness_loss(&disp, &flat).map_err(|e| e.to_string())?;
    ensure((one - 1.0).abs() <= 1e-12, || {
        format!("flat image gave {one}")
    })?;
    let zero = ScalarMap::filled(1, 2, 0.0).unwrap();
    let edge = PlaneImage::new([
        ScalarMap::new(1, 2, vec![0.0, 2f64.ln()]).unwrap(),
        zero.clone(),
        zero,
    ])
    .map_err(|e| e.to_string())?;
    let half = smoothness_loss(&disp, &edge).map_err(|e| e.to_string())?;
    ensure((half - 0.5).abs() <= 1e-12, || {
        format!("ln 2 edge gave {half}")
    })?;
    for trial in 0..200 {
        let (h, w) = (rng.gen_range(2..=24), rng.gen_range(2..=24));
        let disp = integer_grid(&mut rng, h, w, 50);
        let planes =
            [(); 3].map(|_| ScalarMap::new(h, w, (0..h * w).map(|_| rng.gen()).collect()).unwrap());
        let image = PlaneImage::new(planes).unwrap();
        let base = smoothness_loss(&disp, &image).map_err(|e| e.to_string())?;
        let c = f64::from(rng.gen_range(-1000..1000));
        let shifted =
            smoothness_loss(&disp.map(|v| v + c).unwrap(), &image).map_err(|e| e.to_string())?;
        ensure(base == shifted, || {
            format!("trial {trial}: shift {c} gave {shifted}, expected {base}")
        })?;
        let reference = reference_smoothness(&disp, &image);
        ensure(
            (base - reference).abs() <= 1e-12 * reference.max(1.0),
            || format!("trial {trial}: {base} vs loop reference {reference}"),
        )?;
    }
    Ok("constant 0, hand cases 1.0 and 0.5, 200 shifted grids identical".into())
}

pub fn parser() -> Check {
    let mut rng = StdRng::seed_from_u64(0x9a55);
    for k in 0..1000 {
        let d = random_dataset(&mut rng, 4, 7);
        let bytes = serialize_dataset(&d);
        let back = parse_dataset(&bytes).map_err(|e| format!("dataset {k}: {e}"))?;
        ensure(back == d, || {
            format!("dataset {k}: round trip changed the data")
        })?;
        ensure(serialize_dataset(&back) == bytes, || {
            format!("dataset {k}: bytes changed")
        })?;
    }
    let ok = |kind, text: &str, first, second, rel| {
        let p = parse_order_token(kind, text).map_err(|e| format!("{text:?}: {e}"))?;
        ensure(
            (p.first, p.second, p.relation) == (first, second, rel),
            || format!("{text:?} parsed as {p:?}"),
        )
    };
    ok(
        OrderKind::Occlusion,
        "1<2",
        1,
        2,
        OrderRelation::Occlusion(OcclusionRelation::AoccludesB),
    )?;
    ok(
        OrderKind::Occlusion,
        "1<2 & 2<1",
        1,
        2,
        OrderRelation::Occlusion(OcclusionRelation::Bidirectional),
    )?;
    ok(
        OrderKind::Depth,
        "3=7",
        3,
        7,
        OrderRelation::Depth(DepthOrder::Equal),
    )?;
    let malformed = [
        (OrderKind::Occlusion, "1<1", 2, TokenErrorKind::SelfPair(1)),
        (OrderKind::Occlusion, "1<", 2, TokenErrorKind::ExpectedId),
        (OrderKind::Occlusion, "a<2", 0, TokenErrorKind::ExpectedId),
        (
            OrderKind::Occlusion,
            "1<2 & 3<1",
            6,
            TokenErrorKind::MismatchedBidirectional,
        ),
        (OrderKind::Depth, "1<2x", 3, TokenErrorKind::TrailingInput),
    ];
    for (kind, text, offset, expected) in malformed {
        match parse_order_token(kind, text) {
            Err(e) if e.offset == offset && e.kind == expected => {}
            other => return Err(format!("{text:?}: got {other:?}")),
        }
    }
    Ok("1000 round trips stable, grammar examples and 5 malformed tokens as expected".into())
}

/// First label whose second occurrence comes earliest, by direct scan.
fn stopping_oracle(stream: &[u8]) -> Option<(u8, u32)> {
    (1..=stream.len()).find_map(|end| {
        let last = stream[end - 1];
        let seen = stream[..end].iter().filter(|&&v| v == last).count();
        (seen == 2).then_some((last, end as u32))
    })
}

pub fn aggregation() -> Check {
    let mut streams = 0usize;
    for len in 1..=5u32 {
        for mut code in 0..3usize.pow(len) {
            let stream: Vec<u8> = (0..len)
                .map(|_| {
                    let v = (code % 3) as u8;
                    code /= 3;
                    v
                })
                .collect();
            let got = aggregate_votes(&stream).ok().map(|a| (a.label, a.count));
            let expected = stopping_oracle(&stream);
            ensure(got == expected, || {
                format!("{stream:?}: got {got:?}, expected {expected:?}")
            })?;
            streams += 1;
        }
    }
    for (stream, label, count) in [("aa", 'a', 2), ("aba", 'a', 3), ("abcb", 'b', 4)] {
        let votes: Vec<char> = stream.chars().collect();
        let got = aggregate_votes(&votes).map_err(|e| e.to_string())?;
        ensure((got.label, got.count) == (label, count), || {
            format!("{stream}: {got:?}")
        })?;
    }
    Ok(format!("{streams} streams agree with the direct scan"))
}

pub fn conditional() -> Check {
    let mut rng = StdRng::seed_from_u64(0xc0d);
    for k in 0..300 {
        let images = rng.gen_range(1..6);
        let d = random_dataset(&mut rng, images, 7);
        let (occ_given_depth, depth_given_occ) = conditional_tables(&d);
        for table in [&occ_given_depth, &depth_given_occ] {
            for (c, sum) in table.column_sums().into_iter().enumerate() {
                let expected = if table.empty_columns.contains(&c) {
                    0.0
                } else {
                    1.0
                };
                ensure((sum - expected).abs() <= 1e-9, || {
                    format!("dataset {k}: column {} sums to {sum}", table.col_labels[c])
                })?;
            }
        }
    }
    let instances: Vec<InstanceRef> = (1..=4).map(|i| InstanceRef::new(1, i)).collect();
    let closer = DepthRelation::distinct(DepthOrder::Closer);
    let pairs = vec![
        PairOrder::new(1, 2)
            .with_occlusion(OcclusionRelation::None, Some(2))
            .with_depth(closer, Some(2)),
        PairOrder::new(1, 3)
            .with_occlusion(OcclusionRelation::None, Some(3))
            .with_depth(closer, Some(2)),
        PairOrder::new(2, 4)
            .with_occlusion(OcclusionRelation::AoccludesB, Some(2))
            .with_depth(DepthRelation::distinct(DepthOrder::Farther), Some(2)),
    ];
    let d = DatasetFile::new(vec![ImageAnnotation::new(1, instances, pairs).unwrap()]).unwrap();
    let p = conditional_tables(&d).0.get("none", "closer");
    ensure(p == Some(1.0), || format!("P(none | closer) = {p:?}"))?;
    Ok("300 random datasets column-stochastic; P(none | closer) = 1".into())
}

/// Paths of the distributed order files, from `INSTANCE_ORDER_RELEASED`
/// (a path list in the platform's `PATH` syntax).
fn released_paths() -> Option<Vec<PathBuf>> {
    let raw = std::env::var_os("INSTANCE_ORDER_RELEASED")?;
    let paths: Vec<PathBuf> = std::env::split_paths(&raw)
        .filter(|p| !p.as_os_str().is_empty())
        .collect();
    (!paths.is_empty()).then_some(paths)
}

pub fn released_data() -> Verdict {
    let Some(paths) = released_paths() else {
        return Verdict::Skip("INSTANCE_ORDER_RELEASED not set".into());
    };
    wrap(released_checks(&paths))
}

fn released_checks(paths: &[PathBuf]) -> Check {
    let mut counts = StatsCounts::default();
    for path in paths {
        let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let d = parse_released(&bytes, ReleasedOptions::default())
            .map_err(|e| format!("{}: {e}", path.display()))?;
        counts = counts.merge(&dataset_statistics(&d).counts);
    }
    let report = StatsReport::from_counts(counts);
    let c = &report.counts;
    let totals = (c.n_images, c.n_instances, report.n_orders);
    ensure(totals == (100_623, 503_939, 2_859_919), || {
        format!("totals (images, instances, orders) = {totals:?}")
    })?;
    // "A is closer than B" in either canonical orientation.
    let none_strict = c.joint[0][0] + c.joint[0][1];
    let all_strict: u64 = (0..4).map(|o| c.joint[o][0] + c.joint[o][1]).sum();
    let p_none = none_strict as f64 / all_strict as f64;
    ensure((p_none - 0.83).abs() <= 0.01, || {
        format!("P(none | closer) = {p_none:.4}")
    })?;
    let distinct = 100.0 * (report.depth_types[0] + report.depth_types[1]);
    let overlap = 100.0 * (report.depth_types[2] + report.depth_types[3]);
    ensure(
        (distinct - 72.9).abs() <= 0.5 && (overlap - 26.2).abs() <= 0.5,
        || format!("distinct {distinct:.2}%, overlap {overlap:.2}%"),
    )?;
    Ok(format!("totals exact, P(none | closer) = {p_none:.3}, distinct {distinct:.1}%, overlap {overlap:.1}%"))
}

pub fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases = setup(dir.path());
    let mut runs = 0usize;
    for case in &cases {
        let args: Vec<&str> = case.args.iter().map(String::as_str).collect();
        let mut outputs: HashMap<&str, (i32, Vec<u8>)> = HashMap::new();
        for (label, threads) in [
            ("first", None),
            ("second", None),
            ("one thread", Some("1")),
            ("four threads", Some("4")),
        ] {
            let mut full = Vec::new();
            if let Some(t) = threads {
                full.extend(["--threads", t]);
            }
            full.extend(&args);
            let run = run_cli(&full, dir.path());
            ensure(run.code == case.code, || {
                format!(
                    "{} ({label}): exit {} expected {}: {}",
                    case.name, run.code, case.code, run.stderr
                )
            })?;
            outputs.insert(label, (run.code, run.stdout));
            runs += 1;
        }
        let first = &outputs["first"];
        for (label, out) in &outputs {
            ensure(out == first, || {
                format!("{}: {label} output differs from first run", case.name)
            })?;
        }
    }
    Ok(format!(
        "{} subcommand cases, {runs} runs byte-identical",
        cases.len()
    ))
}
