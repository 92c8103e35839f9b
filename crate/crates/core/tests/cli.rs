use cslam::cli::main_with;

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(std::iter::once("cslam").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn solve_worked_case() {
    let base = ["solve", "--uav", "53.97,23.24,2", "--gmt", "28.20,23.04,2", "--tau", "1.368076e-7"];
    for extra in [&[][..], &["--closed-form"][..]] {
        let mut args = base.to_vec();
        args.extend(["--theta", "1.5707963267948966", "--phi", "2.233889"]);
        args.extend_from_slice(extra);
        let (code, out, err) = cli(&args);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.trim(), "41.59 39.09 2.00");
    }
}

#[test]
fn infeasible_solve_exits_3() {
    let (code, _, err) = cli(&["solve", "--uav", "0,0,0", "--gmt", "10,0,0", "--tau", "1e-9", "--theta", "1", "--phi", "1"]);
    assert_eq!(code, 3);
    assert!(err.starts_with("error[InfeasibleDelay]"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["solve", "--bogus"]).0, 2);
    assert_eq!(cli(&["run", "--builtin", "box-room", "--out-dir", "x"]).0, 2);
    assert_eq!(cli(&["scenario", "no-such-scene"]).0, 2);
    assert_eq!(cli(&["solve", "--uav", "1,2", "--gmt", "0,0,0", "--tau", "1", "--theta", "1", "--phi", "1"]).0, 2);
}

#[test]
fn open_field_maps_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, stdout, err) = cli(&["run", "--builtin", "open-field", "--oracle", "--out-dir", out]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.starts_with("0 points"));
    let ply = std::fs::read_to_string(dir.path().join("points.ply")).unwrap();
    assert!(ply.contains("element vertex 0\n"));
    let metrics = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 2);
}

#[test]
fn scenario_file_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.toml");
    let (code, _, _) = cli(&["scenario", "box-room", "--out", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, err) = cli(&["validate", "--scenario", file.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn dataset_train_sweep_run_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let (code, out, err) = cli(&["gen-dataset", "--builtin", "single-wall", "--out", &p("d.txt"), "--k", "4"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("snapshots"));
    let (code, out, err) = cli(&[
        "train", "--dataset", &p("d.txt"), "--model", &p("m.json"), "--history", &p("h.csv"), "--epochs", "5", "--batch-size", "32",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("validation accuracy"));
    assert_eq!(std::fs::read_to_string(p("h.csv")).unwrap().lines().count(), 6);
    let (code, _, err) = cli(&["sweep-k", "--dataset", &p("d.txt"), "--ks", "1,4", "--out", &p("k.csv"), "--epochs", "2"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(std::fs::read_to_string(p("k.csv")).unwrap().lines().count(), 3);
    let (code, _, err) = cli(&["sweep-k", "--dataset", &p("d.txt"), "--ks", "9", "--out", &p("k.csv")]);
    assert_eq!(code, 2, "{err}");

    let mut scenario = cslam::scenes::builtin_scenario("single-wall").unwrap();
    scenario.lscn.k = 4;
    cslam::io::write_scenario(p("s.toml"), &scenario).unwrap();
    let (code, out, err) = cli(&["run", "--scenario", &p("s.toml"), "--model", &p("m.json"), "--out-dir", &p("run")]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("points"));
    assert!(std::fs::read_to_string(p("run/confusion.csv")).unwrap().starts_with("true_state,"));
}
