use std::f64::consts::LN_2;

use jcm_wehrl::jcm::ModelConfig;
use jcm_wehrl::scenario::{
    figure_preset, read_table, run_sweep, write_output, OutputFormat, Quantity, SweepConfig,
};

fn trivial() -> SweepConfig {
    let model = ModelConfig::builder(0.0, 0.0).t_grid(vec![0.0]).build().unwrap();
    SweepConfig::new(model, Quantity::ALL)
        .unwrap()
        .with_theta_pi(vec![0.25, 1.0])
        .unwrap()
        .with_phi_pi(vec![0.0, 0.25])
        .unwrap()
}

#[test]
fn trivial_record_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let result = run_sweep(&trivial()).unwrap();
    let table = result.table();
    let r = &table.rows[0];
    assert_eq!(&r[..5], &[0.0, 0.0, 0.0, 1.0, 1.0]);
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        let path = dir.path().join(format!("trivial.{format}"));
        write_output(&result, format, &path).unwrap();
        let back = read_table(&path, format).unwrap();
        assert!(back.bitwise_eq(&table), "{format}");
    }
}

#[test]
fn json_carries_meta_and_records() {
    let result = run_sweep(&trivial()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&result.render(OutputFormat::Json)).unwrap();
    assert_eq!(doc["meta"]["constants"], "exact");
    assert_eq!(doc["meta"]["config"]["alpha"], 0.0);
    assert_eq!(doc["meta"]["config"]["theta"][0], "0.25pi");
    assert!(doc["meta"]["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(doc["records"].as_array().unwrap().len(), 1);
    assert_eq!(doc["records"][0]["W_theta_hat"], 0.0);
    assert_eq!(doc["records"][0]["error"], serde_json::Value::Null);
}

#[test]
fn empty_result_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut result = run_sweep(&trivial()).unwrap();
    result.records.clear();
    let path = dir.path().join("empty.csv");
    write_output(&result, OutputFormat::Csv, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("t,b,c,h,eta,gamma,") && text.ends_with(",error\n"));
}

#[test]
fn unwritable_destination_names_the_path() {
    let result = run_sweep(&trivial()).unwrap();
    let err = write_output(&result, OutputFormat::Csv, std::path::Path::new("/no/such/dir/x.csv")).unwrap_err();
    assert!(err.to_string().starts_with("/no/such/dir/x.csv"));
}

#[test]
fn fig1_has_one_record_per_grid_point_and_maximal_sigma_x_entropy() {
    let preset = figure_preset("fig1").unwrap();
    let result = run_sweep(&preset.panels[0].config).unwrap();
    assert_eq!(result.records.len(), 2000);
    assert!(result.records.windows(2).all(|w| w[0].t < w[1].t));
    for r in &result.records {
        assert!(r.is_clean());
        assert!((r.info.unwrap()[0] - LN_2).abs() < 1e-12);
        let g = r.gamma.unwrap();
        assert!((0.0..=LN_2 + 1e-12).contains(&g));
    }
}

#[test]
fn fig2_columns_match_the_declared_quantities() {
    let preset = figure_preset("fig2").unwrap();
    for panel in &preset.panels {
        let csv = run_sweep(&panel.config).unwrap().render(OutputFormat::Csv);
        assert_eq!(
            csv.lines().next().unwrap(),
            "t,W_theta,W_phi,W_theta_hat,W_rescaled,error"
        );
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let preset = figure_preset("fig3").unwrap();
    let render = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_sweep(&preset.panels[0].config).unwrap().render(OutputFormat::Csv))
    };
    let one = render(1);
    assert_eq!(one, render(3));
    assert_eq!(one, render(1));
}
