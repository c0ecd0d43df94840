use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::args::*;
use super::{CliError, Sink};
use crate::baselines::{
    predict_by_area, predict_by_yaxis, predict_depth_from_disparity, BaselineError, InstanceStat,
    TrimSpec,
};
use crate::graph::{build_order_graph, check_depth_consistency};
use crate::io::{
    load_disparity, load_mask, load_plane, load_planes, parse_dataset, parse_predictions,
    parse_released, parse_with_mode, serialize_dataset, serialize_predictions, DatasetFile,
    ParseMode, ReleasedOptions,
};
use crate::losses::{
    combined_objective, instance_disparity_loss, smoothness_loss, LossError, LossWeights,
};
use crate::metrics::{
    depth_map_metrics, evaluate_occlusion, evaluate_whdr, point_pair_eval, positive_pixels,
    DepthMapReportJson, OcclusionReportJson, PointPairReportJson, QueryFile, WhdrCategory,
    WhdrReportJson,
};
use crate::model::{
    DepthRelation, ImageAnnotation, ImageId, InstanceId, InstanceRef, OcclusionMode, PairOrder,
};
use crate::raster::{DisparityMap, InstanceMask, PlaneImage};
use crate::report::{fixed_rows, to_json, Fixed6};
use crate::stats::{
    aggregate_votes, dataset_statistics, image_seed, subsample_instances, StatsReport,
    DEPTH_LABELS, OCCLUSION_LABELS,
};
use crate::synth::{random_dataset, SynthSpec};

pub fn dispatch(command: Command, sink: &mut Sink) -> Result<(), CliError> {
    match command {
        Command::Validate(a) => validate(a, sink),
        Command::Eval(e) => eval(e, sink),
        Command::Baseline(a) => baseline(a, sink),
        Command::Loss(l) => loss(l, sink),
        Command::Stats(a) => stats(a, sink),
        Command::Aggregate(a) => aggregate(a, sink),
        Command::Subsample(a) => subsample(a, sink),
        Command::Synth(a) => synth(a, sink),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn emit_json<T: Serialize>(sink: &mut Sink, value: &T) -> Result<(), CliError> {
    let text = to_json(value).map_err(|e| CliError::validation(e.to_string()))?;
    sink.out.extend_from_slice(text.as_bytes());
    Ok(())
}

fn load_annotations(path: &Path) -> Result<DatasetFile, CliError> {
    parse_dataset(&read(path)?).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn load_prediction_file(path: &Path) -> Result<DatasetFile, CliError> {
    parse_predictions(&read(path)?).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn load_pfm(path: &Path) -> Result<DisparityMap, CliError> {
    load_disparity(&read(path)?).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn load_pgm_mask(path: &Path) -> Result<InstanceMask, CliError> {
    load_mask(&read(path)?).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct CycleEntry {
    image_id: ImageId,
    cycle: Vec<InstanceId>,
}

#[derive(Serialize)]
struct ValidReport {
    valid: bool,
    images: usize,
    small_instances: Vec<(ImageId, InstanceId)>,
    depth_cycles: Vec<CycleEntry>,
}

#[derive(Serialize)]
struct InvalidReport {
    valid: bool,
    path: Option<String>,
    error: String,
}

fn validate(a: ValidateArgs, sink: &mut Sink) -> Result<(), CliError> {
    let bytes = read(&a.path)?;
    let mode = if a.predictions {
        ParseMode::Predictions
    } else {
        ParseMode::Annotations
    };
    let d = match parse_with_mode(&bytes, mode) {
        Ok(d) => d,
        Err(e) => {
            emit_json(
                sink,
                &InvalidReport {
                    valid: false,
                    path: e.path().map(str::to_owned),
                    error: e.to_string(),
                },
            )?;
            return Err(CliError::validation(format!("{}: {e}", a.path.display())));
        }
    };
    let per_image: Vec<Vec<CycleEntry>> = d
        .images()
        .par_iter()
        .map(|img| {
            let graph = build_order_graph(img).expect("validated annotation forms a graph");
            check_depth_consistency(&graph)
                .into_iter()
                .map(|c| CycleEntry {
                    image_id: img.image_id(),
                    cycle: c.0,
                })
                .collect()
        })
        .collect();
    let depth_cycles: Vec<CycleEntry> = per_image.into_iter().flatten().collect();
    for c in &depth_cycles {
        sink.warn(format!(
            "image {}: depth cycle through {:?}",
            c.image_id, c.cycle
        ));
    }
    emit_json(
        sink,
        &ValidReport {
            valid: true,
            images: d.images().len(),
            small_instances: d.small_instances().to_vec(),
            depth_cycles,
        },
    )
}

fn eval(e: EvalCommand, sink: &mut Sink) -> Result<(), CliError> {
    match e {
        EvalCommand::Occ { gt, pred, mode } => {
            let gt = load_annotations(&gt)?;
            let pred = load_prediction_file(&pred)?;
            let mode = match mode {
                ModeArg::WithBi => OcclusionMode::WithBidirectional,
                ModeArg::WithoutBi => OcclusionMode::WithoutBidirectional,
            };
            let counts = evaluate_occlusion(&gt, &pred, mode)
                .map_err(|e| CliError::validation(e.to_string()))?;
            emit_json(sink, &OcclusionReportJson::from(counts.prf()))
        }
        EvalCommand::DepthOrder { gt, pred, category } => {
            let gt = load_annotations(&gt)?;
            let pred = load_prediction_file(&pred)?;
            let tally =
                evaluate_whdr(&gt, &pred).map_err(|e| CliError::validation(e.to_string()))?;
            let categories: Vec<WhdrCategory> = if category.is_empty() {
                WhdrCategory::ALL.to_vec()
            } else {
                category
                    .iter()
                    .map(|c| match c {
                        CategoryArg::Distinct => WhdrCategory::Distinct,
                        CategoryArg::Overlap => WhdrCategory::Overlap,
                        CategoryArg::All => WhdrCategory::All,
                    })
                    .collect()
            };
            for c in &categories {
                if tally.is_empty(*c) {
                    sink.warn(format!("no pairs in category {c:?}"));
                }
            }
            emit_json(sink, &WhdrReportJson::new(&tally, &categories))
        }
        EvalCommand::Disparity {
            gt,
            pred,
            valid,
            median_scale,
        } => {
            let gt = load_pfm(&gt)?;
            let pred = load_pfm(&pred)?;
            let valid = match valid {
                Some(path) => load_pgm_mask(&path)?,
                None => positive_pixels(&gt),
            };
            let report = depth_map_metrics(&gt, &pred, &valid, median_scale)
                .map_err(|e| CliError::validation(e.to_string()))?;
            emit_json(sink, &DepthMapReportJson::from(report))
        }
        EvalCommand::Points { disp, queries } => {
            let disp = load_pfm(&disp)?;
            let bytes = read(&queries)?;
            let file: QueryFile = serde_json::from_slice(&bytes)
                .map_err(|e| CliError::io(format!("{}: {e}", queries.display())))?;
            let report = point_pair_eval(&disp, &file.into_queries())
                .map_err(|e| CliError::validation(e.to_string()))?;
            emit_json(sink, &PointPairReportJson::from(report))
        }
    }
}

/// Lazily loaded rasters of one image.
struct ImageRasters {
    dir: Option<PathBuf>,
    masks: HashMap<InstanceId, InstanceMask>,
    disparity: Option<DisparityMap>,
}

impl ImageRasters {
    fn new(root: Option<&Path>, image_id: ImageId) -> Self {
        Self {
            dir: root.map(|r| r.join(image_id.to_string())),
            masks: HashMap::new(),
            disparity: None,
        }
    }

    fn dir(&self) -> Result<&Path, CliError> {
        self.dir
            .as_deref()
            .ok_or_else(|| CliError::usage("this method needs --rasters"))
    }

    fn mask(&mut self, id: InstanceId) -> Result<&InstanceMask, CliError> {
        if !self.masks.contains_key(&id) {
            let mask = load_pgm_mask(&self.dir()?.join(format!("{id}.pgm")))?;
            self.masks.insert(id, mask);
        }
        Ok(&self.masks[&id])
    }

    fn disparity(&mut self) -> Result<&DisparityMap, CliError> {
        if self.disparity.is_none() {
            self.disparity = Some(load_pfm(&self.dir()?.join("disparity.pfm"))?);
        }
        Ok(self.disparity.as_ref().expect("just loaded"))
    }

    /// Fills area and bottom row from the mask when the annotation lacks them.
    fn complete(&mut self, inst: &InstanceRef) -> Result<InstanceRef, CliError> {
        let mut inst = inst.clone();
        if (inst.area.is_none() || inst.bottom_row.is_none()) && self.dir.is_some() {
            let mask = self.mask(inst.instance_id)?;
            let area = u32::try_from(mask.len()).ok().filter(|&a| a > 0);
            let bottom = mask.bottom_row().and_then(|r| u32::try_from(r).ok());
            inst.area = inst.area.or(area);
            inst.bottom_row = inst.bottom_row.or(bottom);
        }
        Ok(inst)
    }
}

fn baseline_error(image_id: ImageId, e: BaselineError) -> CliError {
    CliError::validation(format!("image {image_id}: {e}"))
}

fn predict_image(
    img: &ImageAnnotation,
    a: &BaselineArgs,
    target: TargetArg,
    trim: TrimSpec,
) -> Result<ImageAnnotation, CliError> {
    let id = img.image_id();
    let mut rasters = ImageRasters::new(a.rasters.as_deref(), id);
    let mut pairs = Vec::new();
    for p in img.pairs() {
        let wanted = match target {
            TargetArg::Occlusion => p.occlusion.is_some(),
            TargetArg::Depth => p.depth.is_some(),
        };
        if !wanted {
            continue;
        }
        let out = PairOrder::new(p.a, p.b);
        let out = match a.method {
            MethodArg::Area | MethodArg::Yaxis => {
                let lookup = |x| img.instance(x).expect("pair endpoints are declared");
                let ia = rasters.complete(lookup(p.a))?;
                let ib = rasters.complete(lookup(p.b))?;
                let order = if a.method == MethodArg::Area {
                    predict_by_area(&ia, &ib)
                } else {
                    predict_by_yaxis(&ia, &ib)
                }
                .map_err(|e| baseline_error(id, e))?;
                match target {
                    TargetArg::Occlusion => out.with_occlusion(order.to_occlusion(), None),
                    TargetArg::Depth => {
                        out.with_depth(DepthRelation::distinct(order.to_depth()), None)
                    }
                }
            }
            MethodArg::DispMean | MethodArg::DispMedian => {
                let stat = if a.method == MethodArg::DispMean {
                    InstanceStat::Mean
                } else {
                    InstanceStat::Median
                };
                let ma = rasters.mask(p.a)?.clone();
                let mb = rasters.mask(p.b)?.clone();
                let disp = rasters.disparity()?;
                let order = predict_depth_from_disparity(disp, &ma, &mb, stat, trim, a.eq_tol)
                    .map_err(|e| baseline_error(id, e))?;
                out.with_depth(DepthRelation::distinct(order), None)
            }
        };
        pairs.push(out);
    }
    ImageAnnotation::new(id, img.instances().to_vec(), pairs)
        .map_err(|e| CliError::validation(format!("image {id}: {e}")))
}

fn baseline(a: BaselineArgs, sink: &mut Sink) -> Result<(), CliError> {
    let disparity_method = matches!(a.method, MethodArg::DispMean | MethodArg::DispMedian);
    let target = match (a.target, disparity_method) {
        (Some(TargetArg::Occlusion), true) => {
            return Err(CliError::usage(
                "disparity methods predict depth orders only",
            ))
        }
        (Some(t), _) => t,
        (None, true) => TargetArg::Depth,
        (None, false) => TargetArg::Occlusion,
    };
    let trim = TrimSpec::new(a.trim).map_err(|e| CliError::usage(e.to_string()))?;
    if !a.eq_tol.is_finite() || a.eq_tol < 0.0 {
        return Err(CliError::usage(format!(
            "--eq-tol must be non-negative, got {}",
            a.eq_tol
        )));
    }
    if disparity_method && a.rasters.is_none() {
        return Err(CliError::usage("disparity methods need --rasters"));
    }
    let gt = load_annotations(&a.annotations)?;
    let images: Vec<ImageAnnotation> = gt
        .images()
        .par_iter()
        .map(|img| predict_image(img, &a, target, trim))
        .collect::<Result<_, _>>()?;
    let pred = DatasetFile::new(images).map_err(|e| CliError::validation(e.to_string()))?;
    sink.out.extend_from_slice(&serialize_predictions(&pred));
    Ok(())
}

fn loss_error(e: LossError) -> CliError {
    match e {
        LossError::BadDirection(_) | LossError::BadWeight(_) => CliError::usage(e.to_string()),
        _ => CliError::validation(e.to_string()),
    }
}

fn emit_float(sink: &mut Sink, v: f64) {
    sink.out.extend_from_slice(format!("{v}\n").as_bytes());
}

fn loss(l: LossCommand, sink: &mut Sink) -> Result<(), CliError> {
    match l {
        LossCommand::Disp {
            disp,
            mask_a,
            mask_b,
            direction,
        } => {
            if direction != 1 && direction != -1 {
                return Err(CliError::usage(format!(
                    "--direction must be 1 or -1, got {direction}"
                )));
            }
            let disp = load_pfm(&disp)?;
            let ma = load_pgm_mask(&mask_a)?;
            let mb = load_pgm_mask(&mask_b)?;
            let v = instance_disparity_loss(&disp, &ma, &mb, direction).map_err(loss_error)?;
            emit_float(sink, v);
            Ok(())
        }
        LossCommand::Smooth { disp, image } => {
            let disp = load_pfm(&disp)?;
            let planes: Vec<Vec<u8>> = image.iter().map(|p| read(p)).collect::<Result<_, _>>()?;
            let fmt_err = |e: crate::io::NetpbmError| CliError::io(format!("image planes: {e}"));
            let image = match planes.as_slice() {
                [gray] => PlaneImage::gray(load_plane(gray).map_err(fmt_err)?),
                [r, g, b] => load_planes(r, g, b).map_err(fmt_err)?,
                _ => {
                    return Err(CliError::usage(
                        "--image takes one gray plane or three colour planes",
                    ))
                }
            };
            let v = smoothness_loss(&disp, &image).map_err(loss_error)?;
            emit_float(sink, v);
            Ok(())
        }
        LossCommand::Combined {
            loo,
            ldo,
            ldisp,
            ls,
            preset,
            weights,
        } => {
            let w = match (preset, weights) {
                (Some(PresetArg::D), _) => LossWeights::DEPTH,
                (Some(PresetArg::Od), _) => LossWeights::OCCLUSION_DEPTH,
                (None, Some(w)) => {
                    let arr: [f64; 4] = w
                        .try_into()
                        .map_err(|_| CliError::usage("--weights needs four values"))?;
                    LossWeights::new(arr).map_err(loss_error)?
                }
                (None, None) => return Err(CliError::usage("give --preset or --weights")),
            };
            if let Some(bad) = [loo, ldo, ldisp, ls].into_iter().find(|v| !v.is_finite()) {
                return Err(CliError::usage(format!(
                    "loss values must be finite, got {bad}"
                )));
            }
            emit_float(sink, combined_objective(loo, ldo, ldisp, ls, &w));
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CountHist {
    occlusion: BTreeMap<u32, u64>,
    depth: BTreeMap<u32, u64>,
}

#[derive(Serialize)]
struct OccTypes {
    none: Fixed6,
    uni: Fixed6,
    bi: Fixed6,
}

#[derive(Serialize)]
struct DepthTypes {
    distinct_strict: Fixed6,
    distinct_equal: Fixed6,
    overlap_directed: Fixed6,
    overlap_mutual: Fixed6,
}

#[derive(Serialize)]
struct Agreement {
    occlusion: Fixed6,
    depth: Fixed6,
}

#[derive(Serialize)]
struct TableLabels {
    occlusion: [&'static str; 4],
    depth: [&'static str; 6],
}

#[derive(Serialize)]
struct StatsJson {
    n_images: u64,
    n_instances: u64,
    n_orders: u64,
    n_occlusion_orders: u64,
    n_depth_orders: u64,
    instances_per_image: BTreeMap<usize, u64>,
    count_hist: CountHist,
    occ_types: OccTypes,
    depth_types: DepthTypes,
    /// Per-pair share settled by the first two workers (count = 2).
    first_two_agreement: Agreement,
    table_labels: TableLabels,
    p_occ_given_depth: Vec<Vec<Fixed6>>,
    p_depth_given_occ: Vec<Vec<Fixed6>>,
}

impl From<&StatsReport> for StatsJson {
    fn from(r: &StatsReport) -> Self {
        let c = &r.counts;
        Self {
            n_images: c.n_images,
            n_instances: c.n_instances,
            n_orders: r.n_orders,
            n_occlusion_orders: c.n_occlusion_orders,
            n_depth_orders: c.n_depth_orders,
            instances_per_image: c.instances_per_image.clone(),
            count_hist: CountHist {
                occlusion: c.occlusion_count_hist.clone(),
                depth: c.depth_count_hist.clone(),
            },
            occ_types: OccTypes {
                none: Fixed6(r.occ_types[0]),
                uni: Fixed6(r.occ_types[1]),
                bi: Fixed6(r.occ_types[2]),
            },
            depth_types: DepthTypes {
                distinct_strict: Fixed6(r.depth_types[0]),
                distinct_equal: Fixed6(r.depth_types[1]),
                overlap_directed: Fixed6(r.depth_types[2]),
                overlap_mutual: Fixed6(r.depth_types[3]),
            },
            first_two_agreement: Agreement {
                occlusion: Fixed6(r.first_two_agreement[0]),
                depth: Fixed6(r.first_two_agreement[1]),
            },
            table_labels: TableLabels {
                occlusion: OCCLUSION_LABELS,
                depth: DEPTH_LABELS,
            },
            p_occ_given_depth: fixed_rows(&r.p_occ_given_depth.probs),
            p_depth_given_occ: fixed_rows(&r.p_depth_given_occ.probs),
        }
    }
}

fn stats(a: StatsArgs, sink: &mut Sink) -> Result<(), CliError> {
    let bytes = read(&a.path)?;
    let d = match a.format {
        FormatArg::Native => {
            if a.implied_none {
                return Err(CliError::usage(
                    "--implied-none applies to --format released only",
                ));
            }
            parse_dataset(&bytes)
        }
        FormatArg::Released => parse_released(
            &bytes,
            ReleasedOptions {
                implied_none: a.implied_none,
            },
        ),
    }
    .map_err(|e| CliError::io(format!("{}: {e}", a.path.display())))?;
    let report = dataset_statistics(&d);
    let joint_total: u64 = report.counts.joint.iter().flatten().sum();
    if joint_total > 0 {
        for (table, name) in [
            (&report.p_occ_given_depth, "occlusion given depth"),
            (&report.p_depth_given_occ, "depth given occlusion"),
        ] {
            for &c in &table.empty_columns {
                sink.warn(format!(
                    "{name}: column {} has no pairs",
                    table.col_labels[c]
                ));
            }
        }
    }
    emit_json(sink, &StatsJson::from(&report))
}

fn aggregate(a: AggregateArgs, sink: &mut Sink) -> Result<(), CliError> {
    let bytes = read(&a.path)?;
    let text = String::from_utf8(bytes)
        .map_err(|e| CliError::io(format!("{}: invalid UTF-8: {e}", a.path.display())))?;
    for (n, line) in text.lines().enumerate() {
        let votes: Vec<&str> = line.split_whitespace().collect();
        if votes.is_empty() {
            continue;
        }
        let r = aggregate_votes(&votes)
            .map_err(|e| CliError::validation(format!("line {}: {e}", n + 1)))?;
        sink.out
            .extend_from_slice(format!("{} {}\n", r.label, r.count).as_bytes());
    }
    Ok(())
}

fn subsample(a: SubsampleArgs, sink: &mut Sink) -> Result<(), CliError> {
    if a.cap == 0 {
        return Err(CliError::usage("--cap must be at least 1"));
    }
    let d = load_annotations(&a.path)?;
    let images: Vec<ImageAnnotation> = d
        .images()
        .par_iter()
        .map(|img| {
            subsample_instances(img, a.cap, image_seed(a.seed, img.image_id()))
                .expect("cap is positive")
        })
        .collect();
    let out = DatasetFile::new(images).map_err(|e| CliError::validation(e.to_string()))?;
    sink.out.extend_from_slice(&serialize_dataset(&out));
    Ok(())
}

fn synth(a: SynthArgs, sink: &mut Sink) -> Result<(), CliError> {
    if a.max_instances < 2 {
        return Err(CliError::usage("--max-instances must be at least 2"));
    }
    let d = random_dataset(SynthSpec {
        images: a.images,
        max_instances: a.max_instances,
        seed: a.seed,
    });
    sink.out.extend_from_slice(&serialize_dataset(&d));
    Ok(())
}
