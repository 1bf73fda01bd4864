use std::process::{Command, Output};

fn fracmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmono"))
        .args(args)
        .env_remove("FRACMONO_SYSTEM")
        .env_remove("FRACMONO_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn euler_examples() {
    assert_eq!(stdout(&fracmono(&["euler", "1:2"])), "1/2\n");
    assert_eq!(stdout(&fracmono(&["euler", ""])), "0\n");
    assert_eq!(stdout(&fracmono(&["euler", "1:2,1:2"])), "1\n");
    assert_eq!(stdout(&fracmono(&["euler", "1:2,1:-2,2:3"])), "1/6\n");
    assert_eq!(fracmono(&["euler", "2:4"]).status.code(), Some(2));
    assert_eq!(fracmono(&["euler", "1:0"]).status.code(), Some(2));
    assert_eq!(fracmono(&["euler", "one:two"]).status.code(), Some(2));
}

#[test]
fn transport_examples() {
    let t = |e: &str, o: &str, c: &str| {
        let out = fracmono(&["transport", "--euler", e, "--orders", o, "--cycle", c]);
        (out.status.code(), stdout(&out))
    };
    assert_eq!(t("1/2", "2", "2,0"), (Some(0), "2,1\n".into()));
    assert_eq!(t("1/2", "2", "1,0"), (Some(0), "NOT_TRANSPORTABLE\n".into()));
    assert_eq!(t("0", "", "7,-3"), (Some(0), "7,-3\n".into()));
    assert_eq!(t("-1/6", "2,3", "-6,1"), (Some(0), "-6,2\n".into()));
    assert_eq!(t("1/3", "2", "2,0").0, Some(2));
    assert_eq!(t("1/2", "0", "2,0").0, Some(2));
}

#[test]
fn analyze_golden_certificate() {
    let out = fracmono(&["analyze", "--system", "res:1:-2", "--loop", "circle:0,0.25,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matrix"], serde_json::json!([["1", "1/2"], ["0", "1"]]));
    assert_eq!(v["euler"], "1/2");
    assert_eq!(v["N"], 2);
    assert_eq!(v["k"], 1);
    assert_eq!(v["orders_on_loop"], serde_json::json!([2]));
}

#[test]
fn analyze_qsp_cusp_loop_is_identity() {
    let out = fracmono(&[
        "analyze",
        "--system",
        "qsp",
        "--loop",
        "poly:0.6,0.25;0.9,0.25;0.9,0.5;0.6,0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["matrix"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn analyze_exit_codes() {
    let through_origin = fracmono(&["analyze", "--system", "res:1:-2", "--loop", "circle:0.5,0,0.5"]);
    assert_eq!(through_origin.status.code(), Some(3));
    assert!(through_origin.stdout.is_empty());
    assert!(String::from_utf8_lossy(&through_origin.stderr).contains("fixed point"));
    assert_eq!(
        fracmono(&["analyze", "--system", "nope", "--loop", "circle:0,0,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fracmono(&["analyze", "--system", "res:1:-2", "--loop", "circle:0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fracmono(&["analyze", "--system", "res:1:-2", "--loop", "poly:0,0;1,1;1,0;0,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fracmono(&[
            "analyze",
            "--system",
            "res:1:-2",
            "--loop",
            "circle:0,1,0.5",
            "--tol-point",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn analyze_is_byte_identical() {
    let args = ["analyze", "--system", "s2xs2", "--loop", "circle:-1,0,0.3"];
    let a = fracmono(&args);
    let b = fracmono(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_csv_contains_branch() {
    let out = fracmono(&["scan", "--system", "res:1:-2", "--window=-2,2,-1,4", "--grid", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("J,H,q1,p1,q2,p2,gram_det"));
    let on_branch = lines
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .filter(|(j, h)| *j < 0.0 && (h - j * j).abs() < 1e-6)
        .count();
    assert!(on_branch >= 10, "{on_branch}");
}

#[test]
fn scan_writes_svg() {
    let dir = std::env::temp_dir().join(format!("fracmono-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("diagram.svg");
    let csv = dir.join("points.csv");
    let out = fracmono(&[
        "scan",
        "--system",
        "s2xs2",
        "--grid",
        "4",
        "--loop",
        "circle:-1,0,0.3",
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<svg") && s.contains("stroke-dasharray"));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("J,H,x1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_reports_residuals() {
    let out = fracmono(&["verify", "--system", "res:1:-2", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let poisson = &v["checks"][0];
    assert_eq!(poisson["name"], "poisson_residual");
    assert!(poisson["value"].as_f64().unwrap() < 1e-9);
}

#[test]
fn verify_holonomy_around_focus_focus() {
    let out = fracmono(&[
        "verify",
        "--system",
        "res:1:-1",
        "--samples",
        "50",
        "--holonomy-loop",
        "circle:0,0,0.5",
        "--expect-k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["holonomy"]["k_estimate"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert_eq!(v["holonomy"]["stations"].as_array().unwrap().len(), 65);
}

#[test]
fn verify_rejects_singular_holonomy_loop() {
    let out = fracmono(&[
        "verify",
        "--system",
        "res:1:-2",
        "--samples",
        "10",
        "--holonomy-loop",
        "circle:0,0.03,0.045",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn failing_verify_still_writes_full_report() {
    let out = fracmono(&[
        "verify",
        "--system",
        "res:1:-2",
        "--samples",
        "20",
        "--tol-grad",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn list_systems_shows_catalog() {
    let text = stdout(&fracmono(&["list-systems"]));
    for id in ["res:1:-2", "res:m:-n", "s2xs2", "qsp"] {
        assert!(text.contains(id), "{id}");
    }
    assert!(text.contains("weights (1,2)"));
    assert!(text.contains("b=") && text.contains("c="));
    let v = json(&fracmono(&["list-systems", "--format", "json"]));
    assert_eq!(v[0]["fixed_points"][0]["weights"], serde_json::json!([1, 2]));
}

#[test]
fn environment_overrides_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_fracmono"))
        .args(["analyze", "--loop", "circle:0,0.25,0.5"])
        .env("FRACMONO_SYSTEM", "res:1:-2")
        .env("FRACMONO_FORMAT", "text")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("matrix        [[1, 1/2], [0, 1]]"));
}

#[test]
fn unsupported_format_is_invalid_input() {
    assert_eq!(
        fracmono(&[
            "analyze",
            "--system",
            "res:1:-2",
            "--loop",
            "circle:0,0.25,0.5",
            "--format",
            "csv"
        ])
        .status
        .code(),
        Some(2)
    );
}
