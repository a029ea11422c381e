use std::process::{Command, Output};

fn octacube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octacube"))
        .args(args)
        .env_remove("OCTACUBE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_ground_state_row() {
    let o = octacube(&["spectrum", "--emax-int", "39"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1], "3,1,1,2,11,5,3,1,39,64.1524286070808");
}

#[test]
fn spectrum_below_ground_is_empty() {
    let o = octacube(&["spectrum", "--emax-int", "38"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn spectrum_usage_errors() {
    assert_eq!(
        octacube(&["spectrum", "--emax", "-5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        octacube(&["spectrum", "--emax", "nan"]).status.code(),
        Some(2)
    );
    assert_eq!(octacube(&["spectrum"]).status.code(), Some(2));
    assert_eq!(
        octacube(&["spectrum", "--emax-int", "5", "--emax", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spectrum_physical_cutoff_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let o = octacube(&[
        "spectrum",
        "--emax",
        "20000",
        "--units-energy",
        "hbar2-m3L2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 1_130_469);
}

#[test]
fn weyl_staircase() {
    let o = octacube(&["weyl", "--emax-int", "200", "--points", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "E,N_exact,N_weyl");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0,0,0");
    assert_eq!(
        octacube(&["weyl", "--emax-int", "200", "--points", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_group_and_masses() {
    for suite in ["group", "masses"] {
        let o = octacube(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["suite"], suite);
        let checks = v["checks"].as_array().unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c["pass"] == true));
    }
    let o = octacube(&["verify", "group"]);
    assert!(stdout(&o).contains("order=1152"));
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    assert_eq!(octacube(&["verify", "bogus"]).status.code(), Some(2));
}

#[test]
fn verify_all_is_deterministic() {
    let args = [
        "verify",
        "all",
        "--seed",
        "7",
        "--mc-samples",
        "20000",
        "--tiling-samples",
        "20000",
        "--events",
        "2000",
    ];
    let a = octacube(&args);
    let b = octacube(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
}

fn densities(args: &[&str]) -> Vec<f64> {
    let o = octacube(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lon,lat,density"));
    lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn density_single_point_at_centroid() {
    let c = "0.583333333333333,0.216666666666667,0.116666666666667,0.05";
    let d = densities(&[
        "density", "--normal", "0,0,0,1", "--offset", "0.05", "--center", c, "--radius", "0",
    ]);
    assert_eq!(d.len(), 1);
    assert!(d[0] > 0.0);
}

#[test]
fn density_grid_symmetric_under_group() {
    let base = [
        "density",
        "--normal",
        "0.3,-0.2,1,0.5",
        "--offset",
        "0.1",
        "--center",
        "0.5,0.2,0.1,0.05",
        "--radius",
        "0.6",
        "--pole",
        "0,0,0,1",
        "--reference",
        "1,0,0,0",
        "--resolution",
        "20",
    ];
    let a = densities(&base);
    assert_eq!(a.len(), 400);
    assert!(a.iter().all(|&x| x >= 0.0));
    // the same slice after swapping z2 and z3 (reflection in the mirror normal (0,1,-1,0))
    let moved = [
        "density",
        "--normal",
        "0.3,1,-0.2,0.5",
        "--offset",
        "0.1",
        "--center",
        "0.5,0.1,0.2,0.05",
        "--radius",
        "0.6",
        "--pole",
        "0,0,0,1",
        "--reference",
        "1,0,0,0",
        "--resolution",
        "20",
    ];
    let b = densities(&moved);
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v
    };
    let peak = a.iter().copied().fold(0.0, f64::max);
    for (x, y) in sorted(a).iter().zip(sorted(b)) {
        assert!((x - y).abs() < 1e-9 * peak);
    }
}

#[test]
fn density_usage_errors() {
    let far = [
        "density", "--normal", "0,0,0,1", "--offset", "5", "--center", "0,0,0,0", "--radius", "1",
    ];
    assert_eq!(octacube(&far).status.code(), Some(2));
    let bad_qn = [
        "density", "--qn", "1,1,1,1", "--normal", "0,0,0,1", "--offset", "0", "--center",
        "0,0,0,0", "--radius", "1",
    ];
    assert_eq!(octacube(&bad_qn).status.code(), Some(2));
}

#[test]
fn group_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("group.json");
    let o = octacube(&["group", "--json", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["order"], 1152);
    assert_eq!(v["elements"].as_array().unwrap().len(), 1152);
}

#[test]
fn norm_and_overlap_json() {
    let o = octacube(&["norm", "--samples", "20000", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["value_re", "value_im", "std_error", "n_samples", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["n_samples"], 20000);
    assert_eq!(v["seed"], 3);
    let same = ["overlap", "--qn-a", "3,1,1,2", "--qn-b", "3,1,1,2"];
    assert_eq!(octacube(&same).status.code(), Some(2));
    let o = octacube(&[
        "overlap",
        "--qn-a",
        "3,1,1,2",
        "--qn-b",
        "4,1,1,2",
        "--samples",
        "5000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        octacube(&["norm", "--samples", "10"]).status.code(),
        Some(2)
    );
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_octacube"));
        c.args(["norm", "--samples", "30000", "--seed", "5"]);
        match threads {
            Some(t) => c.env("OCTACUBE_THREADS", t),
            None => c.env_remove("OCTACUBE_THREADS"),
        };
        c.output().unwrap()
    };
    let a = run(None);
    let b = run(Some("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(Some("0")).status.code(), Some(2));
}

#[test]
fn trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let o = octacube(&[
        "trace",
        "--seed",
        "2",
        "--events",
        "50",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "t,event_kind,x1,x2,x3,x4,p1,p2,p3,p4,I1,I2,I3,I4");
    assert_eq!(lines.len(), 52);
}
