use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn wickstar(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wickstar"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_projection_product() {
    let o = wickstar(&["eval", "sigma(A) * sigma(B)", "--let", "A=[[1,0],[0,0]]", "--let", "B=[[0,0],[0,1]]"], None);
    let v = json_out(&o);
    assert_eq!(v["type"], "element");
    assert_eq!(v["seed"], 0);
    // (1 − ν)|z0|²|z1|²: the constant and ν terms are opposite, nothing else
    let powers = v["expansion"]["powers"].as_object().unwrap();
    assert_eq!(powers.len(), 2);
    let entry = |p: &str| powers[p]["entries"][0].clone();
    assert_eq!(entry("0")["re"], "1/4");
    assert_eq!(entry("1")["re"], "-1/4");
    assert_eq!(entry("0")["I"], json!([0, 1]));
}

#[test]
fn eval_quotient_is_matrix_product() {
    let o = wickstar(
        &["eval", "quot(1)(sigma(A)*sigma(B))", "--let", "A=[[1,2],[0,1]]", "--let", "B=[[0,1],[1,0]]"],
        None,
    );
    let v = json_out(&o);
    assert_eq!(v["type"], "operator");
    let entries = v["value"]["entries"].as_array().unwrap();
    let get = |i: u64, j: u64| {
        entries
            .iter()
            .find(|e| e["I"] == json!([i]) && e["J"] == json!([j]))
            .map(|e| e["re"].as_str().unwrap().to_string())
            .unwrap_or_else(|| "0".into())
    };
    assert_eq!([get(0, 0), get(0, 1), get(1, 0), get(1, 1)], ["2", "1", "1", "0"]);
}

#[test]
fn eval_scalar_and_session_file() {
    let v = json_out(&wickstar(&["eval", "subst(1/2)(unit)"], None));
    assert_eq!(v, json!({"expr": "subst(1/2)(unit)", "seed": 0, "type": "scalar", "value": ["1"]}));

    let dir = std::env::temp_dir().join(format!("wickstar-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let session = dir.join("session.json");
    let out = dir.join("out.json");
    std::fs::write(&session, r#"{"seed": 5, "bindings": {"A": {"matrix": [[0, 1], [1, 0]]}}}"#).unwrap();
    let o = wickstar(
        &["eval", "quot(1)(sigma(A)^2)", "--input", session.to_str().unwrap(), "--output", out.to_str().unwrap()],
        None,
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["seed"], 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    let o = wickstar(&["eval", "sigma(A"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 7"));
    assert_eq!(wickstar(&["eval", "sigma(C)"], None).status.code(), Some(2));
    assert_eq!(wickstar(&["check", "--suite", "nope"], None).status.code(), Some(2));
    assert_eq!(wickstar(&["check", "--suite", "assoc", "--n", "9"], None).status.code(), Some(2));
    assert_eq!(wickstar(&["star"], Some("not json")).status.code(), Some(2));
}

#[test]
fn check_suites() {
    let v = json_out(&wickstar(&["check", "--suite", "assoc", "--n", "1", "--max-degree", "2", "--instances", "20"], None));
    assert_eq!((v["passed"].clone(), v["instances"].clone()), (json!(true), json!(20)));
    let v = json_out(&wickstar(&["check", "--suite", "quotient", "--n", "1", "--K", "2", "--instances", "5"], None));
    assert_eq!(v["dimension"], 9);
    let v = json_out(&wickstar(&["check", "--suite", "torus", "--n", "1", "--K", "3", "--instances", "5"], None));
    assert_eq!(v["dimension"], 9);
    for suite in ["cor2", "invariance", "disk", "starexp", "oracle"] {
        let v = json_out(&wickstar(&["check", "--suite", suite, "--seed", "2", "--instances", "5"], None));
        assert_eq!(v["passed"], true, "{suite}");
    }
}

#[test]
fn output_is_byte_stable() {
    let args = ["check", "--suite", "oracle", "--seed", "17", "--instances", "8"];
    let a = wickstar(&args, None).stdout;
    let b = wickstar(&args, None).stdout;
    assert_eq!(a, b);
    let e = ["eval", "(sigma(A) + nu) * sigma(A)", "--let", "A=[[1,\"1/2\"],[\"1/2\",{\"re\":0,\"im\":1}]]"];
    assert_eq!(wickstar(&e, None).stdout, wickstar(&e, None).stdout);
}

#[test]
fn star_and_quotient_from_stdin() {
    let input = r#"{"left": {"matrix": [[1,0],[0,0]]}, "right": {"matrix": [[0,0],[0,1]]}}"#;
    let v = json_out(&wickstar(&["star"], Some(input)));
    assert_eq!(v["type"], "element");
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);

    let v = json_out(&wickstar(&["quotient", "--K", "1"], Some(r#"{"matrix": [[1,2],[3,4]]}"#)));
    assert_eq!(v["value"]["K"], 1);

    let v = json_out(&wickstar(&["subst", "--alpha", "-1/3"], Some(r#"[[1,0],[0,1]]"#)));
    // the identity has symbol 1 at every α
    assert_eq!(v["value"]["k"], 0);
    assert_eq!(v["value"]["entries"][0]["re"], "1");
}

#[test]
fn torus_and_disk() {
    let f = json!({"dim": 2, "lambda": "1/2", "Lambda": [[0, 1], [-1, 0]], "coeffs": [{"k": [1, 0], "terms": [{"amp": "1", "phase": "0"}]}]});
    let g = json!({"dim": 2, "lambda": "1/2", "Lambda": [[0, 1], [-1, 0]], "coeffs": [{"k": [0, 1], "terms": [{"amp": "1", "phase": "0"}]}]});
    let o = wickstar(&["torus", "--K", "2"], Some(&json!({"left": f, "right": g}).to_string()));
    let v = json_out(&o);
    assert_eq!(v["type"], "fourier");
    assert!(v.get("quotient").is_some());

    let d = json!({"coeffs": [{"p": 0, "q": 1, "num": ["1"], "den": ["1"]}]});
    let e = json!({"coeffs": [{"p": 1, "q": 0, "num": ["1"], "den": ["1"]}]});
    let v = json_out(&wickstar(&["disk"], Some(&json!({"left": d, "right": e}).to_string())));
    // f01 ∗ f10 = f11 + ν f00
    let coeffs = v["value"]["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 2);
}

#[test]
fn extract_recovers_or_rejects() {
    // (1 − ν)|z0|⁴ is the lift of a degree-2 symbol
    let series = json!({"n": 1, "degree": 2, "powers": {
        "0": {"n": 1, "k": 2, "entries": [{"I": [0, 0], "J": [0, 0], "re": "1"}]},
        "1": {"n": 1, "k": 2, "entries": [{"I": [0, 0], "J": [0, 0], "re": "-1"}]}
    }});
    let v = json_out(&wickstar(&["extract"], Some(&series.to_string())));
    assert_eq!((v["member"].clone(), v["level"].clone()), (json!(true), json!(2)));
    // without its ν term no structured element up to level 4 matches
    let series = json!({"n": 1, "degree": 2, "powers": {
        "0": {"n": 1, "k": 2, "entries": [{"I": [0, 0], "J": [0, 0], "re": "1"}]}
    }});
    let v = json_out(&wickstar(&["extract", "--level-bound", "4"], Some(&series.to_string())));
    assert_eq!(v["member"], false);
}
