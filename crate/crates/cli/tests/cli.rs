use std::fs;
use std::process::Command;

use lemnatomic::classfield::{DensityReport, Prop1Report, Prop2Report, SplittingReport, TheoremReport};
use lemnatomic::lemnatomic::{content_checksum, LemnatomicRecord, Method};
use lemnatomic::zipoly::PolyZi;
use lemnatomic::GaussInt;
use lemnatomic_cli::cache::{Cache, CacheEntry, SCHEMA_VERSION};
use lemnatomic_cli::{run, Outcome};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("lemnatomic").chain(args.iter().copied()))
}

fn g(s: &str) -> GaussInt {
    s.parse().unwrap()
}

#[test]
fn factor_json_matches_documented_shape() {
    let out = cli(&["factor", "5", "--json"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), r#"{"unit":"1","factors":[["-1+2i",1],["-1-2i",1]]}"#);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lemnatomic");
    let ok = Command::new(bin).args(["factor", "-3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "-3 = (1) * (-3)");
    let bad = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
    let flag = Command::new(bin).args(["factor", "5", "--no-such-flag"]).output().unwrap();
    assert_eq!(flag.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(cli(&["factor", "0"]).code, 1);
    assert_eq!(cli(&["factor", "3+"]).code, 1);
    assert_eq!(cli(&["primary", "2"]).code, 1);
    assert_eq!(cli(&["lemnatomic", "1+i"]).code, 1);
    assert_eq!(cli(&["lemnatomic"]).code, 1);
    assert_eq!(cli(&["reduce", "lemnatomic:-3", "5"]).code, 1);
    assert_eq!(cli(&["scan-splitting", "/no/such/file.json"]).code, 1);
    assert_eq!(cli(&["orbit-check", "-3", "--pi", "3"]).code, 1);
}

#[test]
fn lemnatomic_both_reports_agreement() {
    let out = cli(&["lemnatomic", "-1+2i", "--method", "both"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("pipelines agree: true"));
    assert!(out.stdout.contains("coefficients: [-1+2i, 0, 0, 0, 1]"));
    let out = cli(&["lemnatomic", "--beta", "-3", "--json"]);
    let r: LemnatomicRecord = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.coefficients, PolyZi::from_ints(&[-3, 0, 0, 0, 6, 0, 0, 0, 1]));
    r.validate().unwrap();
}

#[test]
fn theorem_search_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    fs::write(&h, PolyZi::new(vec![g("-1+2i"), g("0"), g("0"), g("0"), g("1")]).to_json()).unwrap();
    let h = h.to_str().unwrap();
    // the discriminant of X^4 + β is even, so the default policy rejects it
    assert_eq!(cli(&["verify-theorem", h, "--max-norm", "5000"]).code, 1);
    let out = cli(&["verify-theorem", h, "--max-norm", "5000", "--allow-even-disc", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: TheoremReport = serde_json::from_str(&out.stdout).unwrap();
    let c = r.candidates.iter().find(|c| c.beta == g("-1+2i")).unwrap();
    assert!(c.witness && c.subgroup_order == 1 && c.group_order == 4);
    assert!(r.witnesses.contains(&g("-1+2i")));
    assert_eq!(cli(&["verify-theorem", r#"{"coeffs":["1","0","1"]}"#]).code, 1);
    let out = cli(&["verify-theorem", r#"{"coeffs":["-1","1"]}"#, "--json"]);
    let r: TheoremReport = serde_json::from_str(&out.stdout).unwrap();
    assert!(r.witnesses.is_empty());
}

#[test]
fn reports_parse_back() {
    let out = cli(&["scan-splitting", "lemnatomic:-1+2i", "--max-norm", "500", "--json"]);
    let r: SplittingReport = serde_json::from_str(&out.stdout).unwrap();
    assert!(r.primes.iter().all(|p| GaussInt::new(-6, 2).divides(&(p - &GaussInt::one()))));
    let out = cli(&["verify-prop1", "-3", "--json"]);
    let r: Prop1Report = serde_json::from_str(&out.stdout).unwrap();
    assert!(r.passed);
    let out = cli(&["density", r#"{"coeffs":["-1","1"]}"#, "--json"]);
    let r: DensityReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.ratio, 1.0);
    for (mode, expected) in [("primary", false), ("raw", true)] {
        let out = cli(&["prop2-evidence", "lemnatomic:-1+2i", "--beta", "-1+2i", "--normalization", mode, "--json"]);
        let r: Prop2Report = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(r.criterion_satisfied, expected, "{mode}");
    }
    let v: serde_json::Value = serde_json::from_str(&cli(&["unitgroup", "15", "--json"]).stdout).unwrap();
    assert_eq!(v["invariant_factors"], serde_json::json!([4, 4, 8]));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn sweeps_pass_and_are_deterministic() {
    let args = ["orbit-check", "-1+2i", "--max-norm", "2000", "--json"];
    let a = cli(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, cli(&args));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(a.stdout, cli(&seq).stdout);
    let scan = cli(&["scan-splitting", "lemnatomic:-1+2i", "--json"]);
    let r: SplittingReport = serde_json::from_str(&scan.stdout).unwrap();
    let first = r.primes[0].to_string();
    let out = cli(&["split-test", "lemnatomic:-1+2i", &first, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["splits_completely"], true);
    let out = cli(&["reduce", "lemnatomic:-1+2i", "-3"]);
    assert!(out.stdout.contains("factor degrees: [4]"));
}

#[test]
fn cache_hits_misses_and_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = cli(&["lemnatomic", "-3", "--cache-dir", d, "--json"]);
    assert_eq!(first.code, 0);
    let path = dir.path().join("lemnatomic_-3.json");
    assert!(path.exists());
    assert_eq!(cli(&["lemnatomic", "-3", "--cache-dir", d, "--json"]).stdout, first.stdout);
    // truncated entry: recomputed and overwritten
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, &text[..20]).unwrap();
    assert_eq!(cli(&["lemnatomic", "-3", "--cache-dir", d, "--json"]).stdout, first.stdout);
    assert_eq!(fs::read_to_string(&path).unwrap(), text);
    // no stray temporary files
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn unwritable_cache_only_warns() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let bad = blocker.join("sub");
    let out = cli(&["lemnatomic", "-1+2i", "--cache-dir", bad.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("warning"));
}

#[test]
fn violated_sweep_exits_two() {
    // a consistent but wrong cache entry: X^8 has the right degree and is
    // monic, yet it is inseparable modulo every prime
    let dir = tempfile::tempdir().unwrap();
    let beta = g("-3");
    let poly = PolyZi::monomial(GaussInt::one(), 8);
    let record = LemnatomicRecord {
        beta: beta.clone(),
        degree: 8,
        checksum: content_checksum(&beta, &poly),
        coefficients: poly,
        method: Method::Exact,
        precision_bits: None,
        pipelines_agree: None,
    };
    let entry = CacheEntry { schema_version: SCHEMA_VERSION, record };
    fs::write(Cache::new(dir.path()).path(&beta), serde_json::to_string(&entry).unwrap()).unwrap();
    let out = cli(&["verify-prop1", "-3", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("verification failed"));
}
