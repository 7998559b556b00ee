use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn cvtele(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvtele"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let header = rdr.headers().unwrap().iter().map(String::from).collect();
        let rows = rdr
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect();
        Csv { header, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
    }

    fn num(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap()
    }
}

#[test]
fn analyze_lossless_state() {
    let o = cvtele(&["analyze", "--r", "1", "--eta-a", "1", "--eta-b", "1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["witnesses"]["nu"].as_f64().unwrap() - 0.1353352832366127).abs() < 1e-12);
    assert!((v["protocols"]["F_bk"].as_f64().unwrap() - 0.8807970779778824).abs() < 1e-12);
    assert_eq!(v["protocols"]["best"]["secure"], true);
    assert_eq!(v["protocols"]["best"]["protocol"], "BK");
    assert_eq!(v["verification"]["all_pass"], true);
}

#[test]
fn analyze_vacuum_and_nonphysical() {
    let o = cvtele(&["analyze", "--n", "1", "--m", "1", "--c", "0"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witnesses"]["nu"], 1.0);
    assert_eq!(v["witnesses"]["steer_AB"], false);

    let o = cvtele(&["analyze", "--n", "1", "--m", "1", "--c", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-physical covariance"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cvtele(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(cvtele(&["analyze"]).status.code(), Some(2));
    assert_eq!(cvtele(&["analyze", "--r", "-1"]).status.code(), Some(2));
    assert_eq!(cvtele(&["sweep", "--columns", "nope"]).status.code(), Some(2));
    assert_eq!(cvtele(&["sweep", "--r", "1", "--columns", "F_qat"]).status.code(), Some(2));
    assert_eq!(cvtele(&["sweep", "--r", "2:1:0.1"]).status.code(), Some(2));
}

#[test]
fn single_point_sweep_matches_analyze() {
    let cols = "n,m,c,nu,g_sym,E_BA,E_AB,F_bk,F_lsatt_opt,F_best,region,secure";
    let sweep = cvtele(&[
        "sweep", "--r", "0.85", "--eta-a", "0.3", "--eta-b", "0.9", "--columns", cols,
    ]);
    let analyze = cvtele(&["analyze", "--r", "0.85", "--eta-a", "0.3", "--eta-b", "0.9", "--format", "csv"]);
    let (s, a) = (Csv::parse(&stdout(&sweep)), Csv::parse(&stdout(&analyze)));
    assert_eq!(s.rows.len(), 1);
    for name in s.header.iter() {
        assert_eq!(s.rows[0][s.col(name)], a.rows[0][a.col(name)], "{name}");
    }
    assert!((s.num(0, "n") - 1.548_494_637_366_99).abs() < 1e-12);
}

#[test]
fn csv_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |p: &std::path::Path| {
        vec![
            "sweep".to_string(),
            "--r".into(),
            "0.1:2:0.3".into(),
            "--eta-a".into(),
            "0.05:1:0.19".into(),
            "--eta-b".into(),
            "0.5,1".into(),
            "--columns".into(),
            "n,m,c,nu,E_BA,F_best,mv_lower,mv_upper".into(),
            "--output".into(),
            p.display().to_string(),
        ]
    };
    for p in [&p1, &p2] {
        let a: Vec<String> = args(p);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(cvtele(&refs).status.success());
    }
    let (b1, b2) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(b1, b2);
    assert!(!b1.contains(&b'\r'));

    let csv = Csv::parse(std::str::from_utf8(&b1).unwrap());
    assert_eq!(csv.rows.len(), 7 * 6 * 2);
    for (i, row) in csv.rows.iter().enumerate() {
        let (r, ea, eb) = (csv.num(i, "r"), csv.num(i, "eta_A"), csv.num(i, "eta_B"));
        let s = cvtele::lossy_state(r, ea, eb).unwrap();
        assert_eq!(csv.num(i, "n").to_bits(), s.n().to_bits());
        assert_eq!(csv.num(i, "c").to_bits(), s.c().to_bits());
        assert_eq!(csv.num(i, "nu").to_bits(), cvtele::nu(&s).to_bits());
        assert_eq!(csv.num(i, "F_best").to_bits(), cvtele::best_of_three(&s).fidelity.to_bits());
        assert_eq!(row.len(), csv.header.len());
    }
}

#[test]
fn out_of_domain_points_keep_their_rows() {
    let o = cvtele(&["sweep", "--r", "1", "--eta-a", "0.5,1.5", "--eta-b", "1", "--columns", "nu,F_best"]);
    assert!(o.status.success());
    let csv = Csv::parse(&stdout(&o));
    assert_eq!(csv.rows.len(), 2);
    assert_eq!(csv.rows[1][csv.col("nu")], "NA");
    assert_ne!(csv.rows[0][csv.col("nu")], "NA");
}

#[test]
fn json_lines() {
    let o = cvtele(&[
        "sweep", "--r", "1", "--eta-a", "1", "--eta-b", "0.5,1", "--columns", "nu,two_way,region",
        "--format", "json",
    ]);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["two_way"], true);
    assert_eq!(lines[1]["region"], "III");
    let keys: Vec<&String> = lines[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["r", "eta_A", "eta_B", "nu", "two_way", "region"]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.conf");
    std::fs::write(&cfg, "# test grid\nr = 0.5,1\neta_a = 1\neta_b = 0.2:1:0.2\ncolumns = nu\nformat = json\n").unwrap();
    let cfg = cfg.display().to_string();
    let o = cvtele(&["sweep", "--config", &cfg]);
    assert_eq!(stdout(&o).lines().count(), 10);
    let o = cvtele(&["sweep", "--config", &cfg, "--r", "2", "--format", "csv"]);
    let csv = Csv::parse(&stdout(&o));
    assert_eq!(csv.rows.len(), 5);
    assert_eq!(csv.num(0, "r"), 2.0);

    std::fs::write(dir.path().join("bad.conf"), "speed = 1\n").unwrap();
    let bad = dir.path().join("bad.conf").display().to_string();
    assert_eq!(cvtele(&["sweep", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn fig2_steering_needs_efficient_steerer() {
    let o = cvtele(&["figure", "fig2-steer"]);
    let csv = Csv::parse(&stdout(&o));
    assert_eq!(csv.rows.len(), 10_000);
    let steer = csv.col("steer_AB");
    let mut steerable = 0;
    for (i, row) in csv.rows.iter().enumerate() {
        if row[steer] == "1" {
            steerable += 1;
            assert!(csv.num(i, "eta_B") > 0.5);
            assert!(csv.num(i, "E_AB") < 1.0);
        }
    }
    assert!(steerable > 0);
}

#[test]
fn supp_fig1_marks_qt_limit() {
    let csv = Csv::parse(&stdout(&cvtele(&["figure", "supp-fig1"])));
    let marked: Vec<usize> = (0..csv.rows.len())
        .filter(|&i| csv.rows[i][csv.col("marked")] == "1")
        .collect();
    assert_eq!(marked.len(), 3);
    for i in marked {
        let r = csv.num(i, "r");
        assert!((csv.num(i, "gbar") - 1.0 / (r / 2.0).tanh()).abs() < 1e-9);
        assert!((csv.num(i, "F_rel") - 0.5).abs() < 1e-6);
    }
    assert_eq!(csv.rows.len(), 3 * 402);
}

#[test]
fn supp_fig2_peaks_at_unit_gain() {
    let csv = Csv::parse(&stdout(&cvtele(&["figure", "supp-fig2"])));
    for r in [0.5, 1.0, 2.0] {
        let best = (0..csv.rows.len())
            .filter(|&i| csv.num(i, "r") == r)
            .max_by(|&a, &b| csv.num(a, "F_qat").total_cmp(&csv.num(b, "F_qat")))
            .unwrap();
        assert_eq!(csv.num(best, "gbar"), 1.0);
    }
}

#[test]
fn supp_fig3_marks_unit_fidelity_optimum() {
    let csv = Csv::parse(&stdout(&cvtele(&["figure", "supp-fig3"])));
    for i in (0..csv.rows.len()).filter(|&i| csv.rows[i][csv.col("marked")] == "1") {
        assert!((csv.num(i, "gbar") - csv.num(i, "r").tanh()).abs() < 1e-12);
        assert!((csv.num(i, "F_qat") - 1.0).abs() < 1e-12);
    }
}

#[test]
fn fig4_regions() {
    let csv = Csv::parse(&stdout(&cvtele(&["figure", "fig4-left"])));
    assert_eq!(csv.rows.len(), 10_000);
    let region = csv.col("region");
    let count = |csv: &Csv, labels: &[&str]| {
        csv.rows.iter().filter(|r| labels.contains(&r[region].as_str())).count()
    };
    assert!(count(&csv, &["III"]) > 0);
    let at = |r: &str| {
        Csv::parse(&stdout(&cvtele(&[
            "sweep", "--r", r, "--eta-a", "0.01:1:0.01", "--eta-b", "0.01:1:0.01", "--columns",
            "F_bk,F_lsatt_opt,F_esa_opt,F_best,protocol,region,secure",
        ])))
    };
    // Secure late attenuation switches on between r = 0.85 and 0.95.
    assert_eq!(count(&at("0.85"), &["I", "II"]), 0);
    assert!(count(&at("0.95"), &["I", "II"]) > 0);
}

#[test]
fn fig3b_rows_respect_bounds() {
    let csv = Csv::parse(&stdout(&cvtele(&["figure", "fig3b"])));
    assert_eq!(csv.rows.len(), 31 * 10_000);
    for i in (0..csv.rows.len()).step_by(97) {
        if csv.num(i, "nu") < 1.0 {
            let f = csv.num(i, "F_best");
            assert!(f >= csv.num(i, "mv_lower") - 1e-12 && f <= csv.num(i, "mv_upper") + 1e-12);
        }
    }
}

#[test]
fn verify_low_density_is_quick_and_green() {
    let t = Instant::now();
    let o = cvtele(&["verify", "--grid-density", "low"]);
    let elapsed = t.elapsed();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(elapsed < Duration::from_secs(5), "{elapsed:?}");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["properties"].as_array().unwrap().len(), 7);
    assert_eq!(cvtele(&["verify", "--grid-density", "low", "--format", "csv"]).status.code(), Some(2));
}
