//! Acceptance gate: ten criteria, one test and hence one pass/fail line
//! each.  Every comparison is exact integer equality; seeds are fixed so
//! the run is reproducible.

use gdf::verify::{
    check_braid_linking_formula, check_descending_vanishing, check_double_preservation,
    check_formula_identity, check_inversion_exhaustive, check_inversion_random,
    check_oracle_sanity, check_p_preserves_value, check_p_resolves_double,
    check_past_degree_vanishing, check_q_descending, check_routing_independence,
    check_tree_round_trip, check_word_formula, check_word_vanishing, Check,
};

const SEED: u64 = 2026;

fn require(c: Check) {
    assert!(c.pass, "{} [{}]: {}", c.name, c.anchor, c.detail);
    println!("{}: {}", c.name, c.detail);
}

#[test]
fn criterion_01_subdiagram_expansion_inverts() {
    require(check_inversion_exhaustive(3));
    require(check_inversion_random(SEED, 200));
}

#[test]
fn criterion_02_expansion_preserves_double_points() {
    require(check_double_preservation(SEED, 200));
}

#[test]
fn criterion_03_projection_well_defined() {
    require(check_p_resolves_double(SEED, 50));
    require(check_p_preserves_value(SEED, 10));
    require(check_routing_independence(SEED, 50));
}

#[test]
fn criterion_04_omega_vanishes_on_descending() {
    require(check_descending_vanishing(3));
}

#[test]
fn criterion_05_omega_vanishes_past_degree() {
    require(check_past_degree_vanishing(3));
}

#[test]
fn criterion_06_formula_recovers_invariant() {
    require(check_formula_identity(SEED, 10));
}

#[test]
fn criterion_07_q_is_descending_and_value_preserving() {
    require(check_q_descending(SEED, 50));
}

#[test]
fn criterion_08_tree_round_trip() {
    require(check_tree_round_trip(SEED, 3, 200));
}

#[test]
fn criterion_09_oracle_sanity() {
    require(check_oracle_sanity(SEED, 50));
}

#[test]
fn criterion_10_word_theorem() {
    require(check_word_vanishing());
    require(check_word_formula(SEED, 100));
    require(check_braid_linking_formula(SEED, 100));
}
