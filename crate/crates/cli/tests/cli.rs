use std::path::PathBuf;
use std::process::{Command, Output};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ubb-plan"))
}

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().expect("run ubb-plan")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn summary(text: &str, key: &str) -> f64 {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .flat_map(|l| l.split_whitespace())
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing in\n{text}"))
        .parse()
        .unwrap()
}

#[test]
fn single_cell_table() {
    let o = run(&["throughput-table", "--rtt", "1.0", "--plr", "1.0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# ubb-plan throughput-table version="));
    assert_eq!(data_rows(&text), vec![vec!["1.0".to_string(), "117".to_string()]]);
}

#[test]
fn default_table_shape() {
    let text = stdout(&run(&["throughput-table"]));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|r| r.len() == 21));
    assert_eq!(rows[0][1], "1045");
    assert_eq!(rows[12][20], "12");
}

#[test]
fn full_precision_table() {
    let text = stdout(&run(&[
        "--precision",
        "full",
        "throughput-table",
        "--rtt",
        "1.0",
        "--plr",
        "1.0",
    ]));
    assert_eq!(data_rows(&text)[0][1], "116800000");
}

#[test]
fn validation_errors_exit_2_and_stay_off_stdout() {
    let o = run(&["throughput-table", "--mss", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("mss"));

    let o = run(&["throughput-table", "--rtt", "abc"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["hit-ratio", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["nsu-curve"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scenario_endpoints() {
    for (file, target) in [("scenario-A.toml", 1.75), ("scenario-B.toml", 3.0)] {
        let path = scenarios().join(file);
        let o = run(&["--scenario", path.to_str().unwrap(), "nsu-curve"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let rows = data_rows(&text);
        assert_eq!(rows.len(), 251);
        assert_eq!(rows[0], ["0", "", "", "1.000000"]);
        assert_eq!(rows[1][1], "1");
        assert!((summary(&text, "endpoint_nsu") - target).abs() < 1e-9);
        assert!((summary(&text, "target_nsu") - target).abs() < 1e-12);
    }
}

#[test]
fn forced_empty_placement() {
    let path = scenarios().join("scenario-A.toml");
    let text = stdout(&run(&[
        "--scenario",
        path.to_str().unwrap(),
        "nsu-curve",
        "--equipped",
        "0",
    ]));
    assert_eq!(data_rows(&text), vec![vec!["0", "", "", "1.000000"]]);
    assert_eq!(summary(&text, "endpoint_nsu"), 1.0);
}

fn write_scenario(dir: &tempfile::TempDir, body: &str) -> PathBuf {
    let p = dir.path().join("s.toml");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn infeasible_calibration_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(
        &dir,
        "[cache]\nhit_ratio = 0.0\n[ecc]\nrtt_with_ms = 1.0\ncalibrate_target = 3.0\n",
    );
    let o = run(&["--scenario", p.to_str().unwrap(), "nsu-curve"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_scenario_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(&dir, "[cache]\nhit_ration = 0.5\n");
    let o = run(&["--scenario", p.to_str().unwrap(), "nsu-curve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hit_ration"));
}

#[test]
fn order_file_and_greedy_flag() {
    let dir = tempfile::tempdir().unwrap();
    let order: String = (1..=250).rev().map(|i| format!("{i}\n")).collect();
    std::fs::write(dir.path().join("order.txt"), order).unwrap();
    let p = write_scenario(
        &dir,
        "[cache]\nhit_ratio = 0.5\n[ecc]\nrtt_with_ms = 1.0\nrtt_without_ms = 3.0\norder = \"file\"\norder_file = \"order.txt\"\n",
    );
    let text = stdout(&run(&["--scenario", p.to_str().unwrap(), "nsu-curve"]));
    let rows = data_rows(&text);
    assert_eq!(rows[1][1], "250");
    assert!(text.contains("greedy_order_differs=true"));
    assert!((summary(&text, "endpoint_nsu") - 2.0).abs() < 1e-12);

    std::fs::write(dir.path().join("order.txt"), "1\n2\n").unwrap();
    let o = run(&["--scenario", p.to_str().unwrap(), "nsu-curve"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trap_report_rows() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(
        &dir,
        r#"
[[path]]
name = "line"
rtt_ms = 10.0
plr_pct = 0.25
bit_rate_mbps = 100.0

[[path]]
name = "exact"
rtt_ms = 10.0
plr_pct = 0.25
bit_rate_mbps = 23.36
"#,
    );
    let text = stdout(&run(&["--scenario", p.to_str().unwrap(), "trap-report"]));
    let rows = data_rows(&text);
    assert_eq!(rows[0][0], "line");
    assert_eq!(rows[0][3], "23.4");
    assert_eq!(rows[0][4], "4.280822");
    assert_eq!(rows[0][5], "true");
    assert_eq!(rows[1][4], "1.000000");
    assert_eq!(rows[1][5], "false");
    assert!(text.contains("r_a=34.6%"));
    assert!(text.contains("r_m=19.8%"));
}

#[test]
fn feasibility_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(
        &dir,
        r#"
[services]
names = ["MoVAR-UE", "Netflix HD"]

[[path]]
name = "p"
rtt_ms = 5.0
plr_pct = 0.01
bit_rate_mbps = 10000.0
"#,
    );
    let text = stdout(&run(&["--scenario", p.to_str().unwrap(), "feasibility"]));
    let rows = data_rows(&text);
    assert_eq!(rows[0][0], "MoVAR-UE");
    assert_eq!(rows[0][5], "false");
    assert_eq!(rows[0][6], "latency-loss");
    assert_eq!(rows[0][7], "1.168");
    assert_eq!(rows[0][8], "51600.0");
    assert_eq!(rows[1][5], "true");
    assert_eq!(rows[1][8], "");
    assert!(text.contains("movar_discrepancy"));

    let p = write_scenario(
        &dir,
        "[services]\nnames = [\"Betamax\"]\n[[path]]\nname=\"p\"\nrtt_ms=1.0\nplr_pct=0.1\nbit_rate_mbps=1.0\n",
    );
    assert_eq!(
        run(&["--scenario", p.to_str().unwrap(), "feasibility"]).status.code(),
        Some(2)
    );
}

#[test]
fn compression_skips_live_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(
        &dir,
        r#"
[services]
names = ["VoD-4K", "live-4K"]
compression_factor = 4.0

[[path]]
name = "p"
rtt_ms = 10.0
plr_pct = 0.25
bit_rate_mbps = 100.0
"#,
    );
    let o = run(&["--scenario", p.to_str().unwrap(), "feasibility"]);
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows[0][2], "3.8");
    assert_eq!(rows[1][2], "25.0");
    assert!(String::from_utf8_lossy(&o.stderr).contains("live-4K"));
}

#[test]
fn catalog_dump() {
    let text = stdout(&run(&["feasibility", "--catalog"]));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 22);
    let find = |name: &str| rows.iter().find(|r| r[0] == name).unwrap().clone();
    assert_eq!(find("Netflix UHD")[2], "25.0");
    assert_eq!(find("MoVAR-ES")[2], "25.0");
    assert_eq!(find("MoVAR-EL")[2], "100.0");
    assert_eq!(find("MoVAR-AE")[2], "400.0");
    assert_eq!(find("MoVAR-UE")[2], "1000.0");
    assert_eq!(find("MoVAR-UE")[6], "1");
    assert_eq!(find("live-4K")[5], "true");
}

#[test]
fn catalog_file_override() {
    let example = scenarios().join("catalog.example.toml");
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(
        &dir,
        &format!("[services]\ncatalog_file = {:?}\n", example.to_str().unwrap()),
    );
    let o = run(&["--scenario", p.to_str().unwrap(), "feasibility", "--catalog"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_rows(&stdout(&o)).len(), 22);
}

#[test]
fn hit_ratio_sweep() {
    let text = stdout(&run(&[
        "hit-ratio",
        "--alpha",
        "0.8",
        "--items",
        "10000",
        "--step",
        "0.05",
    ]));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 21);
    assert_eq!(rows[0][2], "0.000000");
    assert_eq!(rows[20][2], "1.000000");
    let hr: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(hr.windows(2).all(|w| w[1] >= w[0]));
    assert!((0.5..=0.65).contains(&hr[2]));
    assert_eq!(rows[2][3], "true");
    assert_eq!(rows[1][3], "false");
    assert_eq!(summary(&text, "min_stored_items"), 603.0);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = run(&["--out", out.to_str().unwrap(), "throughput-table"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(out).unwrap(),
        stdout(&run(&["throughput-table"]))
    );
}

#[test]
fn io_errors_exit_1() {
    let o = run(&["--scenario", "/nonexistent/scenario.toml", "nsu-curve"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--out", "/nonexistent/dir/out.csv", "hit-ratio"]);
    assert_eq!(o.status.code(), Some(1));
}
