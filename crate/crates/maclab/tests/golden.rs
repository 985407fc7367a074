//! Golden-report regression: fresh runs must match the committed corpus
//! byte-for-byte after stripping the volatile fields, for every corpus
//! entry, across reruns and thread counts, and (for symbolic checks)
//! across seeds.

use maclab::run::{dispatch, Command, RunConfig};
use maclab::{golden_compare, strip_timing, GoldenOutcome};

fn cfg(command: Command, type_str: &str) -> RunConfig {
    RunConfig {
        command,
        root_system: type_str.to_string(),
        n: None,
        nq: 6,
        nt: 6,
        qden: 1,
        weight_bound: -4,
        p_bound: 3,
        threads: 1,
        seed: 1,
        dump_order: None,
        m: None,
        cap: 20_000,
        object: None,
        degree: None,
        z_weight: None,
    }
}

fn corpus() -> Vec<(&'static str, RunConfig)> {
    let mut v = Vec::new();
    let mut c = cfg(Command::VerifyTrunc, "A1");
    c.n = Some(2);
    c.weight_bound = -6;
    v.push(("trunc_a1_n2.json", c));
    let mut c = cfg(Command::VerifyTrunc, "A2");
    c.n = Some(2);
    c.weight_bound = -3;
    v.push(("trunc_a2_n2.json", c));
    let mut c = cfg(Command::VerifySym, "A1");
    c.weight_bound = -3;
    v.push(("sym_a1.json", c));
    let mut c = cfg(Command::VerifyDelta1, "A1");
    c.m = Some(1);
    c.n = Some(2);
    v.push(("delta1_m1_n2.json", c));
    let mut c = cfg(Command::VerifyNakano, "A1");
    c.weight_bound = -3;
    c.p_bound = 2;
    v.push(("nakano_a1.json", c));
    let mut c = cfg(Command::VerifyHarmonic, "A1");
    c.weight_bound = -3;
    c.p_bound = 2;
    v.push(("harmonic_a1.json", c));
    let mut c = cfg(Command::Verify1psi1, "A1");
    c.nq = 4;
    c.nt = 4;
    v.push(("psi1_a1.json", c));
    let mut c = cfg(Command::Verify1psi1, "A2");
    c.nq = 3;
    c.nt = 3;
    v.push(("psi1_a2.json", c));
    let mut c = cfg(Command::VerifyMacdonaldCt, "A1");
    c.nq = 4;
    c.nt = 4;
    v.push(("macct_a1.json", c));
    let mut c = cfg(Command::VerifyLevel1, "A1");
    c.nq = 4;
    c.nt = 4;
    v.push(("level1_a1.json", c));
    let mut c = cfg(Command::BaileySl2, "A1");
    c.qden = 2;
    c.nq = 4;
    c.nt = 4;
    v.push(("bailey.json", c));
    let mut c = cfg(Command::VerifyBrylinski, "A1");
    c.nq = 4;
    c.nt = 3;
    v.push(("brylinski_a1.json", c));
    let mut c = cfg(Command::VerifyOrtho, "D4");
    c.nq = 3;
    c.nt = 3;
    v.push(("ortho_d4.json", c));
    let mut c = cfg(Command::DumpSeries, "A1");
    c.nq = 3;
    c.nt = 3;
    c.object = Some("kac".to_string());
    v.push(("series_kac_a1.json", c));
    v
}

fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/v1")
}

#[test]
fn corpus_matches() {
    for (file, config) in corpus() {
        let fresh = dispatch(&config).to_json();
        let stored = std::fs::read_to_string(golden_dir().join(file))
            .unwrap_or_else(|_| panic!("missing corpus file {file}"));
        match golden_compare(&fresh, Some(&stored)) {
            GoldenOutcome::Match => {}
            GoldenOutcome::Drift(paths) => panic!("{file} drifted at {paths:?}"),
        }
    }
}

#[test]
fn reports_are_stable_across_runs_and_threads() {
    for (file, config) in corpus() {
        let one = strip_timing(&dispatch(&config).to_json()).unwrap();
        let two = strip_timing(&dispatch(&config).to_json()).unwrap();
        assert_eq!(one, two, "{file}: rerun drift");
        let mut threaded = config.clone();
        threaded.threads = 4;
        let four = strip_timing(&dispatch(&threaded).to_json()).unwrap();
        assert_eq!(one, four, "{file}: thread-count drift");
    }
}

#[test]
fn symbolic_checks_ignore_the_seed() {
    let (_, mut config) = corpus()
        .into_iter()
        .find(|(f, _)| *f == "psi1_a1.json")
        .unwrap();
    let base = strip_timing(&dispatch(&config).to_json()).unwrap();
    config.seed = 99;
    let reseeded = strip_timing(&dispatch(&config).to_json()).unwrap();
    assert_eq!(
        base, reseeded,
        "the symbolic route must not depend on the seed"
    );
}

#[test]
fn sampled_checks_record_their_points() {
    // A different seed draws different torus points, which the report
    // carries; golden comparison must flag the drift.
    let (_, mut config) = corpus()
        .into_iter()
        .find(|(f, _)| *f == "psi1_a2.json")
        .unwrap();
    let base = dispatch(&config).to_json();
    config.seed = 2;
    let reseeded = dispatch(&config).to_json();
    match golden_compare(&reseeded, Some(&base)) {
        GoldenOutcome::Drift(paths) => {
            assert!(paths.iter().any(|p| p.contains("points")), "{paths:?}");
        }
        GoldenOutcome::Match => panic!("expected point drift"),
    }
}

#[test]
fn doctored_results_are_detected() {
    let stored = std::fs::read_to_string(golden_dir().join("trunc_a1_n2.json")).unwrap();
    let doctored = stored.replace("\"status\": \"PASS\"", "\"status\": \"FAIL\"");
    match golden_compare(&doctored, Some(&stored)) {
        GoldenOutcome::Drift(paths) => assert!(paths.iter().any(|p| p.contains("status"))),
        GoldenOutcome::Match => panic!("doctored report must drift"),
    }
    match golden_compare(&stored, None) {
        GoldenOutcome::Drift(paths) => assert_eq!(paths, vec!["absent".to_string()]),
        GoldenOutcome::Match => panic!("absent golden must drift"),
    }
}
