use tailsum::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tailsum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn an_cube_both_methods() {
    let (code, out, _) = call(&["an", "--poly", "X^3", "--n", "5", "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "60");
}

#[test]
fn an_oracle_only() {
    let (code, out, _) = call(&["an", "--poly", "X^2", "--n", "12", "--method", "oracle"]);
    assert_eq!((code, out.trim()), (0, "12"));
}

#[test]
fn solve_quintic_json() {
    let (code, out, _) = call(&["solve", "--poly", "X^5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["c"], serde_json::json!(["4", "8", "28/3", "16/3", "-2/9"]));
    assert_eq!(v["k"], 5);
}

#[test]
fn verify_square_is_clean() {
    let (code, out, err) = call(&["verify", "--poly", "X^2", "--from", "1", "--to", "1000"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1000);
    assert!(lines.iter().all(|l| l["match"] == true && l["a_formula"] == l["n"]));
    assert!(err.contains("0 mismatches"));
}

#[test]
fn closed_form_quartic_json() {
    let (code, out, _) = call(&["closed-form", "--poly", "X^4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["V"], 4);
    let consts: Vec<&str> = v["classes"].as_array().unwrap().iter().map(|c| c["constant"].as_str().unwrap()).collect();
    assert_eq!(consts, ["1", "3/4", "1/2", "1/4"]);
}

#[test]
fn table_formats() {
    let (code, out, _) = call(&["table", "--poly", "X^3", "--from", "1", "--to", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(3).unwrap(), "3,24,closed");
    let (code, out, _) = call(&["table", "--poly", "X^3", "--from", "1", "--to", "2", "--format", "latex"]);
    assert_eq!(code, 0);
    assert!(out.contains("2 & 12 \\\\"));
}

#[test]
fn explore_monomials() {
    let (code, out, _) = call(&["explore-ck", "--family", "monomial", "--kmax", "12"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["fits"][0]["poly_in_k"], "k - 1");
    assert_eq!(v["fits"][0]["status"], "range-consistent");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(call(&["an", "--poly", "X^2 + 0.5", "--n", "3"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["verify", "--poly", "X^2", "--from", "9", "--to", "1"]).0, 2);
    assert_eq!(call(&["explore-ck", "--family", "bogus", "--kmax", "5"]).0, 2);
}

#[test]
fn precondition_errors_exit_3() {
    assert_eq!(call(&["solve", "--poly", "X"]).0, 3);
    assert_eq!(call(&["solve", "--poly=-X^2"]).0, 3);
    assert_eq!(call(&["closed-form", "--poly", "X^2 - 100"]).0, 3);
}

#[test]
fn below_threshold_without_tightening_is_refused() {
    let (code, _, err) = call(&["an", "--poly", "X^2 + 10000", "--n", "1"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = call(&["an", "--poly", "X^2 + 10000", "--n", "1", "--method", "oracle"]);
    assert_eq!(code, 0);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("closed-form"));
}
