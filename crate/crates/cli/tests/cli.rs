use std::path::PathBuf;
use std::process::Command;

use splitorder::suites::{Failure, FuzzConfig, SuiteReport};
use splitorder::{polytope_of, ExponentMatrix};
use splitorder_cli::draw::Viewport;
use splitorder_cli::{report_fuzz, run, DrawOptions};

const NU: &str = r#"{"n":3,"nu":[[0,0,1],[3,0,1],[3,2,0]]}"#;
const NU_PRIME: &str = r#"{"n":3,"nu":[[0,0,2],[3,0,1],[3,2,0]]}"#;
const ZERO3: &str = r#"{"n":3,"nu":[[0,0,0],[0,0,0],[0,0,0]]}"#;

fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

struct Out {
    code: u8,
    stdout: String,
    stderr: String,
}

fn call(args: &[&str]) -> Out {
    let mut o = Vec::new();
    let mut e = Vec::new();
    let mut full = vec!["splitorder"];
    full.extend_from_slice(args);
    let code = run(full, &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn call_file(cmd: &str, name: &str, contents: &str) -> Out {
    let p = fixture(name, contents);
    call(&[cmd, p.to_str().unwrap()])
}

#[test]
fn check_reports_orders_and_violations() {
    let o = call_file("check", "check_nu.json", NU);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "order: true\nreduced: true\nhas_containing_maximal: true\n");

    let o = call_file("check", "check_nu_prime.json", NU_PRIME);
    assert_eq!(o.code, 1);
    assert_eq!(
        o.stdout,
        "order: false\nreduced: false\nhas_containing_maximal: true\nviolated: (1,3) via k=2\nhull: [[0,0,1],[3,0,1],[3,2,0]]\n"
    );

    let o = call_file("check", "check_zero.json", ZERO3);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("order: true\n"));

    let o = call_file("check", "check_cycle.json", r#"{"n":2,"nu":[[0,-2],[1,0]]}"#);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("has_containing_maximal: false\n"));
    assert!(o.stdout.contains("hull: none"));
}

#[test]
fn malformed_input_exits_two() {
    let o = call_file("check", "bad_diag.json", r#"{"n":2,"nu":[[1,0],[0,0]]}"#);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("parse error"), "{}", o.stderr);
    assert_eq!(call_file("check", "bad_json.json", "{").code, 2);
    assert_eq!(call_file("check", "bad_n.json", r#"{"n":3,"nu":[[0,1],[1,0]]}"#).code, 2);
    assert_eq!(call(&["check", "/nonexistent/file.json"]).code, 2);
    assert_eq!(call(&["frobnicate"]).code, 2);
    assert_eq!(call(&["--help"]).code, 0);
}

#[test]
fn hull_and_roundtrip() {
    let o = call_file("hull", "hull.json", NU_PRIME);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.trim(), r#"{"n":3,"nu":[[0,0,1],[3,0,1],[3,2,0]]}"#);
    assert_eq!(call_file("hull", "hull_cycle.json", r#"{"n":2,"nu":[[0,-2],[1,0]]}"#).code, 1);

    let o = call_file("roundtrip", "rt.json", NU);
    assert_eq!(o.code, 0);
    let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["fixed_point"], true);
    assert_eq!(report["vertices"].as_array().unwrap().len(), 13);
    let o = call_file("roundtrip", "rt_prime.json", NU_PRIME);
    assert_eq!(o.code, 0, "a non-reduced input still round-trips through its hull");
}

#[test]
fn vertices_prints_points_and_count() {
    let o = call_file("vertices", "v_nu.json", NU);
    assert_eq!(o.code, 0);
    let pts: Vec<Vec<i64>> = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(pts.len(), 13);
    assert!(pts.iter().all(|p| p[0] == 0));
    assert_eq!(o.stderr, "13 lattice points\n");

    let o = call_file("vertices", "v_zero.json", ZERO3);
    assert_eq!(o.stdout.trim(), "[[0,0,0]]");

    let o = call_file("vertices", "v_geo.json", r#"{"n":2,"nu":[[0,1],[2,0]]}"#);
    assert_eq!(o.stdout.trim(), "[[0,-1],[0,0],[0,1],[0,2]]");
}

#[test]
fn intersect_matches_entrywise_max() {
    let o = call_file("intersect", "i1.json", "[[0,0,-1],[0,3,3],[0,0,2]]");
    assert_eq!(o.stdout.trim(), r#"{"n":3,"nu":[[0,0,1],[3,0,1],[3,2,0]]}"#);
    let o = call_file("intersect", "i2.json", "[[0,0,-1],[0,3,2],[0,1,3]]");
    assert_eq!(o.stdout.trim(), r#"{"n":3,"nu":[[0,0,1],[3,0,1],[3,2,0]]}"#);
    // unnormalized vertices are shifted to first coordinate 0
    let o = call_file("intersect", "i3.json", "[[2,3,1]]");
    assert_eq!(o.stdout.trim(), r#"{"n":3,"nu":[[0,-1,1],[1,0,2],[-1,-2,0]]}"#);

    let vs = [[0i64, 2, -1, 3], [0, -2, 0, 1], [0, 1, 1, -3]];
    let text = serde_json::to_string(&vs).unwrap();
    let o = call_file("intersect", "i4.json", &text);
    let mu: ExponentMatrix = serde_json::from_str(&o.stdout).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(mu.get(i, j), vs.iter().map(|v| v[i] - v[j]).max().unwrap());
        }
    }
    assert_eq!(call_file("intersect", "i5.json", "[]").code, 1);
}

#[test]
fn hijikata_reports_level_and_geodesic() {
    let o = call_file("hijikata", "h.json", r#"{"n":2,"nu":[[0,-2],[5,0]]}"#);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "level: 3\nnormal form: [[0,0],[3,0]]\ngeodesic: [[0,2],[0,3],[0,4],[0,5]]\n");
    assert_eq!(call_file("hijikata", "h_bad.json", r#"{"n":2,"nu":[[0,-2],[1,0]]}"#).code, 1);
    assert_eq!(call_file("hijikata", "h_n3.json", NU).code, 1);
}

#[test]
fn fuzz_is_deterministic_and_passes() {
    let args = ["fuzz", "--trials", "200", "--seed", "7", "--n", "3"];
    let a = call(&args);
    let b = call(&args);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.ends_with("all invariants hold\n"));
    let seq = call(&["fuzz", "--trials", "200", "--seed", "7", "--n", "3", "--sequential"]);
    assert_eq!(seq.stdout, a.stdout);
    let other = call(&["fuzz", "--trials", "200", "--seed", "8", "--n", "3"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn fuzz_two_dimensional_sweep() {
    let o = call(&["fuzz", "--trials", "50", "--n", "2", "--min", "-3", "--max", "5"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("PASS hijikata n=2: 81 trials (orders=60)"), "{}", o.stdout);
}

#[test]
fn failures_produce_a_dump() {
    let failing = SuiteReport {
        name: "bijection n=3".into(),
        trials: 10,
        counters: Default::default(),
        failures: vec![Failure {
            trial: 4,
            detail: "is_order disagrees with is_reduced".into(),
            input: serde_json::json!({ "minimized": { "n": 2, "nu": [[0, -1], [0, 0]] } }),
        }],
    };
    let passing = SuiteReport { name: "hijikata n=2".into(), failures: vec![], ..failing.clone() };
    let dump = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dump.json");
    let mut out = Vec::new();
    let code = report_fuzz(&FuzzConfig::default(), &[passing, failing], Some(&dump), &mut out).unwrap();
    assert_eq!(code, 1);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("PASS hijikata n=2: 10 trials\n"));
    assert!(text.contains("FAIL bijection n=3: 10 trials, 1 failing\n"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_eq!(v["counterexamples"][0]["suite"], "bijection n=3");
    assert_eq!(v["counterexamples"][0]["failure"]["trial"], 4);
    assert_eq!(v["config"]["seed"], FuzzConfig::default().seed);
}

#[test]
fn fuzz_rejects_bad_configuration() {
    for args in [
        vec!["fuzz", "--trials", "0"],
        vec!["fuzz", "--min", "3", "--max", "1"],
        vec!["fuzz", "--n", "1"],
        vec!["fuzz", "--n", "9"],
        vec!["fuzz", "--prime", "4"],
        vec!["fuzz", "--max", "1000"],
    ] {
        assert_eq!(call(&args).code, 2, "{args:?}");
    }
}

fn parse_svg(text: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(text).expect("well-formed XML")
}

fn draw(name: &str, json: &str) -> (String, ExponentMatrix) {
    let input = fixture(name, json);
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{name}.svg"));
    let o = call(&["draw", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    (std::fs::read_to_string(out).unwrap(), serde_json::from_str(json).unwrap())
}

fn titles<'a>(doc: &'a roxmltree::Document, class: &str) -> Vec<(roxmltree::Node<'a, 'a>, String)> {
    doc.descendants()
        .filter(|n| n.attribute("class").is_some_and(|c| c.split(' ').any(|t| t == class)))
        .map(|n| {
            let t = n.children().find(|c| c.has_tag_name("title")).and_then(|c| c.text()).unwrap_or("");
            (n, t.to_string())
        })
        .collect()
}

#[test]
fn draw_example_has_thirteen_consistent_dots() {
    let (svg, nu) = draw("draw_nu.json", NU);
    let doc = parse_svg(&svg);
    assert_eq!(doc.root_element().attribute("version"), Some("1.1"));
    let poly = polytope_of(&nu);
    let vp = Viewport::new(&nu, DrawOptions::default());
    let dots = titles(&doc, "point");
    assert_eq!(dots.len(), 13);
    for (node, title) in dots {
        let cx: f64 = node.attribute("cx").unwrap().parse().unwrap();
        let cy: f64 = node.attribute("cy").unwrap().parse().unwrap();
        let (x2, x3) = vp.from_screen(cx, cy);
        assert!(poly.contains_point(&[0, x2, x3]));
        assert_eq!(title, format!("[0, {x2}, {x3}]"));
    }
    assert_eq!(titles(&doc, "supporting").len(), 6);
    assert!(titles(&doc, "non-supporting").is_empty());
}

#[test]
fn draw_non_order_dashes_the_disjoint_wall() {
    let (svg, _) = draw("draw_nu_prime.json", NU_PRIME);
    let doc = parse_svg(&svg);
    let dashed = titles(&doc, "non-supporting");
    assert_eq!(dashed.len(), 1);
    assert_eq!(dashed[0].1, "x_3 = -2");
    assert!(dashed[0].0.attribute("stroke-dasharray").is_some());
    let dots = titles(&doc, "point");
    assert_eq!(dots.len(), 13);
    // no dot lies on x_3 = -2
    assert!(dots.iter().all(|(_, t)| !t.ends_with(", -2]")));
}

#[test]
fn draw_zero_matrix_and_wrong_dimension() {
    let (svg, _) = draw("draw_zero.json", ZERO3);
    let doc = parse_svg(&svg);
    let dots = titles(&doc, "point");
    assert_eq!(dots.len(), 1);
    assert_eq!(dots[0].1, "[0, 0, 0]");
    let o = call_file("draw", "draw_n2.json", r#"{"n":2,"nu":[[0,0],[0,0]]}"#);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("n = 3"));
}

#[test]
fn draw_output_is_byte_identical() {
    let (a, _) = draw("draw_same.json", NU);
    let (b, _) = draw("draw_same.json", NU);
    assert_eq!(a, b);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_splitorder");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    let nu = fixture("bin_nu.json", NU);
    let nu_p = fixture("bin_nu_prime.json", NU_PRIME);
    let bad = fixture("bin_bad.json", "not json");
    assert_eq!(code(&["check", nu.to_str().unwrap()]), 0);
    assert_eq!(code(&["check", nu_p.to_str().unwrap()]), 1);
    assert_eq!(code(&["check", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["check"]), 2);
}
