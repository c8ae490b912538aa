use std::time::Instant;

use wedgekit::atlas::*;
use wedgekit::euler::SymmetryOptions;
use wedgekit::lie::Family;
use wedgekit::Execution;

#[test]
fn atlas_matches_expected_table() {
    let t = Instant::now();
    let entries: Vec<AtlasEntry> =
        build_atlas(&SymmetryOptions::default(), Execution::best()).into_iter().map(|r| r.unwrap()).collect();
    let mismatches = compare_with_expected(&entries);
    assert!(mismatches.is_empty(), "{mismatches:#?}");
    assert_eq!(entries.len(), expected_atlas().entries.len());
    eprintln!("atlas built in {:.2}s", t.elapsed().as_secs_f64());
}

#[test]
fn atlas_counts() {
    // Orbit counts by construction of the sl_n nodes.
    for n in 2..=6 {
        let e = expected_entry(&Family::Sl { n }).unwrap();
        assert_eq!(e.orbit_count, n - 1);
        let sym: Vec<bool> = e.orbits.iter().map(|o| o.symmetric.unwrap()).collect();
        let want: Vec<bool> = (1..n).map(|j| 2 * j == n).collect();
        assert_eq!(sym, want);
    }
    let e = atlas_entry(&Family::Sp { n: 2 }, &SymmetryOptions::default()).unwrap();
    assert_eq!(e.orbit_count, 1);
    assert_eq!(e.orbits[0].symmetric, Some(true));
    assert!(e.tube_type);
}

#[test]
fn atlas_is_deterministic() {
    let opts = SymmetryOptions::default();
    let a = atlas_entry(&Family::Sl { n: 4 }, &opts).unwrap();
    let b = atlas_entry(&Family::Sl { n: 4 }, &opts).unwrap();
    assert_eq!(wedgekit::linalg::canonical_json(&a), wedgekit::linalg::canonical_json(&b));
}

#[test]
fn report_envelope() {
    let cfg = RunConfig::new("atlas", 7, 1e-8, None, 1).unwrap();
    let r = Report::new(&cfg, true, vec![0.1_f64]);
    let s = r.to_json();
    assert!(s.contains("\"formatVersion\": 1"));
    assert!(s.contains("1.0000000000000001e-1"));
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["config"]["seed"], 7);
}
