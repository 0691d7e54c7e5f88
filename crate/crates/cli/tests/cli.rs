use std::fs;
use std::process::{Command, Output};

fn regrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regrep"))
        .args(args)
        .env_remove("REGREP_OUT_DIR")
        .output()
        .expect("spawn regrep")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn repr_of_unit_weights_is_identity() {
    let o = regrep(&["repr", "--poly", "u:-1,2,1", "--x", "1,0,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1,0,0\n0,1,0\n0,0,1\n");
}

#[test]
fn repr_cubic_example() {
    let o = regrep(&["repr", "--poly", "u:-1,2,1", "--x", "0,-1,1"]);
    assert_eq!(stdout(&o), "0,1,-2\n-1,2,-3\n1,-2,4\n");
}

#[test]
fn power_zero_is_identity() {
    let o = regrep(&["power", "--poly", "u:-1,2,1", "--x", "0,-1,1", "--n", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1,0,0\n0,1,0\n0,0,1\n");
}

#[test]
fn approx_reproduces_first_table_rows() {
    let o = regrep(&[
        "approx", "--poly", "u:-1,2,1", "--x", "0,-1,1", "--num", "2,1", "--den", "3,1", "--n", "5,20",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "n,value_num,value_den,abs_error,den_digits,reduced_den_digits");
    assert_eq!(lines[1], "5,-636,793,7.9919e-5,3,3");
    assert!(lines[2].starts_with("20,-547809845787,683107704412,3.0899e-18,14,12"));
}

#[test]
fn approx_accepts_ranges() {
    let o = regrep(&[
        "approx", "--poly", "u:-1,2,1", "--x", "0,-1,1", "--num", "2,1", "--den", "3,1", "--n", "1..4",
    ]);
    assert_eq!(data_lines(&stdout(&o)).len(), 5);
}

#[test]
fn c_ratio_of_ramanujan_cubic() {
    let o = regrep(&["c-ratio", "--poly", "u:-1,2,1", "--x", "0,0,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "c,2.08815"), "{text}");
    assert!(text.lines().any(|l| l == "certified,true"));
    assert!(text.lines().any(|l| l == "dominant,0"));
}

#[test]
fn compare_runs_named_methods() {
    let o = regrep(&[
        "compare", "--poly", "u:-1,2,1", "--x0", "-2", "--steps", "3", "--methods", "newton,chebyshev",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# method=newton"));
    assert!(text.contains("3,-810791467,449955054,1.0574e-6,9,9"));
    assert!(text.contains("# method=chebyshev"));
}

#[test]
fn roots_lists_three_real_roots() {
    let o = regrep(&["roots", "--poly", "u:-1,2,1"]);
    let text = stdout(&o);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("0,-1.8019377358"));
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")));
}

#[test]
fn malformed_input_exits_one() {
    let o = regrep(&["repr", "--poly", "bogus", "--x", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let o = regrep(&["repr", "--poly", "u:-1,2", "--x", "1,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = regrep(&["repr", "--x", "1,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = regrep(&["--precision-bits", "8", "roots", "--poly", "u:1,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn undecidable_dominance_exits_two() {
    let o = regrep(&["c-ratio", "--poly", "u:-1,2,1", "--x", "1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dominance"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(
        &path,
        "poly = \"u:-1,2,1\"\n[approx]\nx = [0, -1, 1]\nnum = \"2,1\"\nden = \"3,1\"\nn = \"5\"\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let o = regrep(&["--config", cfg, "approx"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_lines(&stdout(&o))[1], "5,-636,793,7.9919e-5,3,3");
    // the command line wins over the file
    let o = regrep(&["--config", cfg, "approx", "--n", "20"]);
    assert!(data_lines(&stdout(&o))[1].starts_with("20,"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let o = regrep(&["--output", path.to_str().unwrap(), "repr", "--poly", "u:-1,2,1", "--x", "1,0,0"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(path).unwrap(), "1,0,0\n0,1,0\n0,0,1\n");
}

#[test]
fn tables_use_output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_regrep"))
        .args(["tables", "--id", "7"])
        .env("REGREP_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let table = fs::read_to_string(dir.path().join("table7.csv")).unwrap();
    assert!(table.starts_with("method_or_stride,n,digits,abs_error\nN=M^3,1,8,1.9e-9\n"));
    let report = fs::read_to_string(dir.path().join("discrepancies.csv")).unwrap();
    assert!(report.starts_with("table,cell,expected,measured,status\n"));
    assert!(stdout(&o).contains(",12,0"));
}

#[test]
fn output_is_deterministic() {
    let args = ["approx", "--poly", "u:-1,2,1", "--x", "0,0,1", "--num", "2,1", "--den", "1,1", "--n", "1..30"];
    assert_eq!(regrep(&args).stdout, regrep(&args).stdout);
}
