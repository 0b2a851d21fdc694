mod common;

use common::{min_root_gap, oracle_agrees, SAMPLES};
use secant_quandle::harness::corpus;
use secant_quandle::trisecant::realize_generic;
use secant_quandle::parse_braid_word;

#[test]
fn single_crossing_matches_sampling() {
    let w = parse_braid_word("3: 1").unwrap();
    let r = realize_generic(&w, 0, 5).unwrap();
    oracle_agrees(&r).unwrap();
}

#[test]
fn corpus_matches_sampling() {
    for (k, w) in corpus().iter().enumerate() {
        for seed in [0, 1 + k as u64] {
            let r = realize_generic(w, seed, 5).unwrap();
            assert!(min_root_gap(&r) > 2.0 / SAMPLES as f64, "[{w}] has roots closer than the sampling step");
            oracle_agrees(&r).unwrap();
        }
    }
}
