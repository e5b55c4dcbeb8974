use std::path::Path;
use std::process::{Command, Output};

use blockdim::bitseq::read_bits;

fn blockdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockdim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn generate_writes_bits_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "s.bits");
    let o = blockdim(&["generate", "sharp", "--alpha", "1/4", "--epsilon", "1/20", "--length", "5000", "--seed", "1", "-o", &out]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert_eq!(read_bits(&out).unwrap().len(), 5000);
    let meta = std::fs::read_to_string(format!("{out}.meta")).unwrap();
    for key in ["p=10", "q=21", "alpha_prime=1/4"] {
        assert!(meta.lines().any(|l| l == key), "missing {key} in {meta}");
    }
}

#[test]
fn generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a"), path(dir.path(), "b"));
    for p in [&a, &b] {
        let o = blockdim(&["generate", "counterexample", "--length", "2000", "--seed", "42", "-o", p]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn analyze_csv_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let bits = path(dir.path(), "c.bits");
    blockdim(&["generate", "champernowne", "--length", "20000", "-o", &bits]);
    let o = blockdim(&["analyze", &bits, "--ell", "1..3", "--geometric", "1000:10", "--cross-check"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,ell,beta,gamma,h,hc");
    // n ∈ {1000, 10000, 20000} × ℓ ∈ {1, 2, 3}
    assert_eq!(lines.len(), 1 + 9);
    assert!(lines[1].starts_with("1000,1,"));
    assert!(lines[9].starts_with("20000,3,"));
}

#[test]
fn analyze_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let bits = path(dir.path(), "w.bits");
    blockdim(&["generate", "bernoulli", "--alpha", "1/3", "--length", "30000", "--seed", "5", "-o", &bits]);
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_blockdim"))
            .args(["analyze", &bits, "--ell", "1..6", "--n", "100,5000,30000", "--exact"])
            .env("BLOCKDIM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let one = run("1");
    assert!(one.lines().next().unwrap().ends_with("beta_exact,gamma_exact"));
    assert_eq!(one, run("4"));
}

#[test]
fn analyze_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let bits = path(dir.path(), "k.bits");
    std::fs::write(&bits, "0000000000\n").unwrap();
    let o = blockdim(&["analyze", &bits, "--ell", "2", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("\"beta\":0") && text.contains("\"h\":0"), "{text}");
}

#[test]
fn markov_default_chain_reports_constants() {
    let o = blockdim(&["markov"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("pi 5/24 1/4 7/24 1/4"));
    assert!(text.contains("snake_bound 11/24"));
    assert!(text.lines().any(|l| l.starts_with("6,9503/20736,11/24,")));
}

#[test]
fn markov_rejects_float_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let chain = path(dir.path(), "f.chain");
    std::fs::write(&chain, "states 1\n0 0 0 0.5\n0 0 1 0.5\n").unwrap();
    let o = blockdim(&["markov", "--chain", &chain]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8(o.stderr).unwrap().lines().count(), 1);
}

#[test]
fn verify_passes_on_generated_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let bits = path(dir.path(), "v.bits");
    blockdim(&["generate", "sturmian", "--length", "10000", "-o", &bits]);
    let o = blockdim(&["verify", &bits, "--ell", "1..6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(",ok")).count(), 6);
}

#[test]
fn add_writes_sum_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y, z) = (path(dir.path(), "x"), path(dir.path(), "y"), path(dir.path(), "z"));
    std::fs::write(&x, "0100").unwrap();
    std::fs::write(&y, "0011").unwrap();
    let o = blockdim(&["add", &x, &y, "-o", &z]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&z).unwrap(), "0111");
    assert!(String::from_utf8(o.stderr).unwrap().contains("uncertainty_span=3"));

    let o = blockdim(&["add", &x, &y, "-o", &z, "--report", "1,2"]);
    assert_eq!(stdout(&o).lines().next(), Some("ell,h_x,h_y,h_sum,slack,carry_penalty"));
}

#[test]
fn reproduce_exact_only() {
    let o = blockdim(&["reproduce", "--exact-only"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.bits");
    std::fs::write(&bad, "01x1").unwrap();
    for args in [
        vec!["analyze", bad.as_str()],
        vec!["analyze", "/no/such/file"],
        vec!["generate", "bernoulli", "--alpha", "0.3", "--length", "10", "-o", bad.as_str()],
        vec!["generate", "sharp", "--alpha", "3/4", "--epsilon", "1/20", "--length", "10", "-o", bad.as_str()],
        vec!["frobnicate"],
    ] {
        let o = blockdim(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    std::fs::write(&bad, "0101").unwrap();
    let o = blockdim(&["analyze", &bad, "--ell", "1..9"]);
    assert_eq!(o.status.code(), Some(2));
}
