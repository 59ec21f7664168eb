//! Scratch probes for the empirically constrained parts of the projection.

use gdf::diagram::GaussDiagram;
use gdf::expansion::random_diagram;
use gdf::oracle::{c2_invariant, OracleCache};
use gdf::projection::{cap, p_diagram, step2_applicable, step2_clump, Pipeline, Routing};
use gdf::tree::{c, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn make_first_over(d: &GaussDiagram) -> GaussDiagram {
    let mut out = d.clone();
    for id in d.real_chords() {
        if d.first_role(id) == Some(gdf::diagram::Role::Under) {
            out = out.switch(id).unwrap();
        }
    }
    out
}

#[test]
fn probe_step2_oracle_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let nu = c2_invariant();
    let mut oracle = OracleCache::new();
    let mut found = 0;
    let mut tried = 0;
    while found < 50 && tried < 20000 {
        tried += 1;
        let n = rng.random_range(3..=5);
        let d = make_first_over(&random_diagram(&mut rng, n, true));
        if d.double_count() < 1 {
            continue;
        }
        let t = Tree::from_diagram(d.clone());
        if !step2_applicable(&t) {
            continue;
        }
        // the slide is a local isotopy only when the slid chord and the
        // double do not interleave; an interleaved pair drags a cap path
        // along and the recap is free to route it differently
        let q = gdf::projection::slide_site_pub(&t).unwrap();
        let r = d.passages()[q - 1].chord;
        let x = d.passages()[q].chord;
        let (r0, r1) = d.positions(r).unwrap();
        let (x0, x1) = d.positions(x).unwrap();
        let interleaved = (r0 < x0 && x0 < r1 && r1 < x1) || (x0 < r0 && r0 < x1 && x1 < r1);
        if interleaved {
            continue;
        }
        found += 1;
        let after = step2_clump(&t).unwrap();
        let v0 = oracle
            .eval_pd(&cap(&t, Routing::Standard).unwrap(), &nu)
            .unwrap();
        let v1 = oracle
            .eval_pd(&cap(&after, Routing::Standard).unwrap(), &nu)
            .unwrap();
        assert_eq!(
            v0,
            v1,
            "step2 changed the oracle value on {}",
            t.diagram().canonical_key()
        );
    }
    eprintln!("step2 invariance: {} applicable trees out of {} tried", found, tried);
    assert!(found >= 50, "only found {} applicable trees", found);
}

#[test]
fn probe_p_preserves_c2_on_braid_closures() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let nu = c2_invariant();
    let mut oracle = OracleCache::new();
    for _ in 0..10 {
        let strands = rng.random_range(2..=3);
        let len = rng.random_range(3..=6);
        let word = gdf::braid::random_knot_word(&mut rng, strands, len);
        let (g, pd) = gdf::braid::braid_closure(strands, &word).unwrap();
        let direct = oracle.eval_pd(&pd, &nu).unwrap();
        let projected = p_diagram(&g, 2, Routing::Standard).unwrap();
        let via_p = oracle.eval_sum(&projected, &nu).unwrap();
        assert_eq!(direct, via_p, "P changed c2 on closure of {:?}", word);
    }
}

#[test]
fn probe_routing_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let nu = c2_invariant();
    let mut oracle = OracleCache::new();
    let mut found = 0;
    while found < 50 {
        let n = rng.random_range(1..=4);
        let mut d = random_diagram(&mut rng, n, true);
        for id in d.real_chords() {
            if d.first_role(id) == Some(gdf::diagram::Role::Under) {
                d = d.switch(id).unwrap();
            }
        }
        let dt = Tree::from_diagram(d);
        if !dt.is_descending() {
            continue;
        }
        let v0 = oracle
            .eval_pd(&cap(&dt, Routing::Standard).unwrap(), &nu)
            .unwrap();
        let v1 = oracle
            .eval_pd(&cap(&dt, Routing::Reverse).unwrap(), &nu)
            .unwrap();
        assert_eq!(
            v0,
            v1,
            "routing changed value on {}",
            dt.diagram().canonical_key()
        );
        found += 1;
    }
}

#[test]
fn probe_omega_vanishing_sample() {
    let mut pipe = Pipeline::new(c2_invariant(), 2);
    let all3 = gdf::expansion::enumerate(3);
    let three: Vec<&String> = all3
        .iter()
        .filter(|k| GaussDiagram::parse(k).unwrap().chord_count() == 3)
        .collect();
    eprintln!("3-chord diagrams: {}", three.len());
    let start = std::time::Instant::now();
    for (i, key) in three.iter().enumerate().take(60) {
        let b = GaussDiagram::parse(key).unwrap();
        let w = pipe.omega(&b).unwrap();
        assert_eq!(w, 0, "omega nonzero on {}", key);
        if i % 20 == 19 {
            eprintln!("  {} done in {:?}", i + 1, start.elapsed());
        }
    }
}

#[test]
fn probe_main_identity_small() {
    let mut pipe = Pipeline::new(c2_invariant(), 2);
    let table = pipe.omega_table().unwrap();
    let nu = c2_invariant();
    let mut oracle = OracleCache::new();
    let (tre, tre_pd) = gdf::braid::trefoil();
    let (fig, fig_pd) = gdf::braid::figure_eight();
    assert_eq!(
        gdf::expansion::eval_formula(&table, &tre),
        oracle.eval_pd(&tre_pd, &nu).unwrap()
    );
    assert_eq!(
        gdf::expansion::eval_formula(&table, &fig),
        oracle.eval_pd(&fig_pd, &nu).unwrap()
    );
    assert_eq!(gdf::expansion::eval_formula(&table, &GaussDiagram::empty()), 0);
}
