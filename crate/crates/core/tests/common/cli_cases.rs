//! Fixture files and invocations covering every subcommand.

use std::fs;
use std::path::Path;

use instance_order::io::{write_disparity, write_mask, write_plane};
use instance_order::raster::{InstanceMask, ScalarMap};

pub struct Case {
    pub name: &'static str,
    pub args: Vec<String>,
    pub code: i32,
}

const GT: &str = r#"{"images": [
  {"image_id": 1,
   "instances": [{"id": 1, "area": 100, "bottom_row": 40}, {"id": 2, "area": 50, "bottom_row": 20}],
   "occlusion": [{"order": "1<2", "count": 2}],
   "depth": [{"order": "1<2", "count": 2, "overlap": false}]},
  {"image_id": 2,
   "instances": [{"id": 1, "class": "person", "area": 900}, {"id": 2, "area": 300}],
   "occlusion": [{"order": "1<2 & 2<1", "count": 3}],
   "depth": [{"order": "1=2", "count": 4, "overlap": false}]}
]}
"#;

const PRED: &str = r#"{"images": [
  {"image_id": 1, "instances": [{"id": 1}, {"id": 2}],
   "occlusion": [{"order": "1<2"}], "depth": [{"order": "1<2"}]},
  {"image_id": 2, "instances": [{"id": 1}, {"id": 2}],
   "occlusion": [{"order": "1<2"}], "depth": [{"order": "2<1"}]}
]}
"#;

const BASE: &str = r#"{"images": [
  {"image_id": 5,
   "instances": [{"id": 1, "area": 100}, {"id": 2, "area": 50}],
   "occlusion": [{"order": "1<2", "count": 2}],
   "depth": [{"order": "2<1", "count": 2, "overlap": false}]}
]}
"#;

const COUNT_ONE: &str = r#"{"images": [
  {"image_id": 3, "instances": [{"id": 1}, {"id": 2}],
   "occlusion": [{"order": "1<2", "count": 1}]}
]}
"#;

const CYCLIC: &str = r#"{"images": [
  {"image_id": 4, "instances": [{"id": 1}, {"id": 2}, {"id": 3}],
   "depth": [{"order": "1<2", "count": 2, "overlap": false},
             {"order": "2<3", "count": 2, "overlap": false},
             {"order": "3<1", "count": 2, "overlap": false}]}
]}
"#;

const QUERIES: &str = r#"{"queries": [
  {"p1": [0, 0], "p2": [0, 1], "relation": "closer"},
  {"p1": [1, 0], "p2": [1, 1], "relation": "closer"},
  {"p1": [0, 1], "p2": [1, 0], "relation": "farther"}
]}
"#;

const VOTES: &str = "a a\na b a\na b c b\n";

fn map(h: usize, w: usize, v: &[f64]) -> ScalarMap {
    ScalarMap::new(h, w, v.to_vec()).unwrap()
}

/// Writes all fixtures under `dir` and returns the invocations with their
/// expected exit codes. Paths in the arguments are relative to `dir`.
pub fn setup(dir: &Path) -> Vec<Case> {
    let w = |name: &str, bytes: &[u8]| fs::write(dir.join(name), bytes).unwrap();
    w("gt.json", GT.as_bytes());
    w("pred.json", PRED.as_bytes());
    w("base.json", BASE.as_bytes());
    w("count_one.json", COUNT_ONE.as_bytes());
    w("cyclic.json", CYCLIC.as_bytes());
    w("empty.json", b"{\"images\": []}\n");
    w("queries.json", QUERIES.as_bytes());
    w("votes.txt", VOTES.as_bytes());

    w(
        "depth_gt.pfm",
        &write_disparity(&map(2, 2, &[1.0, 2.0, 4.0, 8.0])),
    );
    w(
        "depth_pred.pfm",
        &write_disparity(&map(2, 2, &[2.0, 4.0, 8.0, 16.0])),
    );
    w(
        "depth_off.pfm",
        &write_disparity(&map(2, 2, &[1.5, 2.0, 3.0, 10.0])),
    );
    w(
        "points.pfm",
        &write_disparity(&map(2, 2, &[0.9, 0.1, 0.5, 0.5])),
    );

    // 2x3 disparity; A is the left column, B the right column.
    let disp = map(2, 3, &[0.8, 0.4, 0.1, 0.9, 0.5, 0.2]);
    w("disp.pfm", &write_disparity(&disp));
    w(
        "mask_a.pgm",
        &write_mask(&InstanceMask::from_indices(2, 3, vec![0, 3]).unwrap()),
    );
    w(
        "mask_b.pgm",
        &write_mask(&InstanceMask::from_indices(2, 3, vec![2, 5]).unwrap()),
    );
    w(
        "gray.pgm",
        &write_plane(&map(2, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0])),
    );

    let rasters = dir.join("rasters").join("5");
    fs::create_dir_all(&rasters).unwrap();
    fs::write(rasters.join("disparity.pfm"), write_disparity(&disp)).unwrap();
    fs::write(
        rasters.join("1.pgm"),
        write_mask(&InstanceMask::from_indices(2, 3, vec![0, 3]).unwrap()),
    )
    .unwrap();
    fs::write(
        rasters.join("2.pgm"),
        write_mask(&InstanceMask::from_indices(2, 3, vec![2, 5]).unwrap()),
    )
    .unwrap();

    let case = |name, args: &[&str], code| Case {
        name,
        args: args.iter().map(|s| s.to_string()).collect(),
        code,
    };
    vec![
        case("validate_ok", &["validate", "gt.json"], 0),
        case("validate_count_one", &["validate", "count_one.json"], 1),
        case("validate_cyclic", &["validate", "cyclic.json"], 0),
        case(
            "eval_occ_with_bi",
            &["eval", "occ", "--gt", "gt.json", "--pred", "pred.json"],
            0,
        ),
        case(
            "eval_occ_without_bi",
            &[
                "eval",
                "occ",
                "--gt",
                "gt.json",
                "--pred",
                "pred.json",
                "--mode",
                "without-bi",
            ],
            0,
        ),
        case(
            "eval_occ_self",
            &["eval", "occ", "--gt", "gt.json", "--pred", "gt.json"],
            0,
        ),
        case(
            "eval_occ_mismatch",
            &["eval", "occ", "--gt", "gt.json", "--pred", "base.json"],
            1,
        ),
        case(
            "eval_depth_order",
            &[
                "eval",
                "depth-order",
                "--gt",
                "gt.json",
                "--pred",
                "pred.json",
            ],
            0,
        ),
        case(
            "eval_depth_order_all",
            &[
                "eval",
                "depth-order",
                "--gt",
                "gt.json",
                "--pred",
                "pred.json",
                "--category",
                "all",
            ],
            0,
        ),
        case(
            "eval_disparity_scaled",
            &[
                "eval",
                "disparity",
                "--gt",
                "depth_gt.pfm",
                "--pred",
                "depth_pred.pfm",
                "--median-scale",
            ],
            0,
        ),
        case(
            "eval_disparity_unscaled",
            &[
                "eval",
                "disparity",
                "--gt",
                "depth_gt.pfm",
                "--pred",
                "depth_off.pfm",
            ],
            0,
        ),
        case(
            "eval_points",
            &[
                "eval",
                "points",
                "--disp",
                "points.pfm",
                "--queries",
                "queries.json",
            ],
            0,
        ),
        case(
            "baseline_area",
            &["baseline", "--method", "area", "--annotations", "base.json"],
            0,
        ),
        case(
            "baseline_yaxis_depth",
            &[
                "baseline",
                "--method",
                "yaxis",
                "--annotations",
                "base.json",
                "--rasters",
                "rasters",
                "--target",
                "depth",
            ],
            0,
        ),
        case(
            "baseline_disp_median",
            &[
                "baseline",
                "--method",
                "disp-median",
                "--annotations",
                "base.json",
                "--rasters",
                "rasters",
            ],
            0,
        ),
        case(
            "baseline_disp_mean_occlusion",
            &[
                "baseline",
                "--method",
                "disp-mean",
                "--annotations",
                "base.json",
                "--rasters",
                "rasters",
                "--target",
                "occlusion",
            ],
            2,
        ),
        case(
            "loss_disp",
            &[
                "loss",
                "disp",
                "--disp",
                "disp.pfm",
                "--mask-a",
                "mask_a.pgm",
                "--mask-b",
                "mask_b.pgm",
                "--direction",
                "1",
            ],
            0,
        ),
        case(
            "loss_disp_reversed",
            &[
                "loss",
                "disp",
                "--disp",
                "disp.pfm",
                "--mask-a",
                "mask_a.pgm",
                "--mask-b",
                "mask_b.pgm",
                "--direction",
                "-1",
            ],
            0,
        ),
        case(
            "loss_smooth",
            &[
                "loss", "smooth", "--disp", "disp.pfm", "--image", "gray.pgm",
            ],
            0,
        ),
        case(
            "loss_combined",
            &[
                "loss", "combined", "--loo", "9", "--ldo", "1", "--ldisp", "0.5", "--ls", "2",
                "--preset", "d",
            ],
            0,
        ),
        case(
            "loss_combined_weights",
            &[
                "loss",
                "combined",
                "--loo",
                "1",
                "--ldo",
                "1",
                "--ldisp",
                "1",
                "--ls",
                "1",
                "--weights",
                "1,1,1,0.1",
            ],
            0,
        ),
        case("stats", &["stats", "gt.json"], 0),
        case("stats_empty", &["stats", "empty.json"], 0),
        case("aggregate", &["aggregate", "votes.txt"], 0),
        case(
            "synth",
            &[
                "synth",
                "--images",
                "3",
                "--max-instances",
                "5",
                "--seed",
                "42",
            ],
            0,
        ),
        case(
            "subsample",
            &["subsample", "gt.json", "--cap", "1", "--seed", "7"],
            0,
        ),
        case("usage_error", &["eval", "occ", "--gt", "gt.json"], 2),
        case("missing_file", &["stats", "absent.json"], 3),
    ]
}
