//! Long-knot closures of braid words.
//!
//! A braid word on `strands` columns is a list of letters `(i, sign)` with
//! `1 <= i < strands`, read top to bottom; letter `(i, +1)` crosses column
//! `i-1` over column `i`.  The closure is cut open at column 0, giving a long
//! knot whenever the underlying permutation is a single cycle.  Both the
//! Gauss diagram and a consistent planar diagram come out of one strand walk,
//! so the pair agrees by construction.

use std::collections::BTreeMap;

use rand::Rng;

use crate::diagram::{ChordId, ChordKind, GaussDiagram, Passage, PdCrossing, PlanarDiagram, Role};
use crate::error::{Error, Result};

/// Column permutation of the word: entry `c` is the bottom column reached
/// from top column `c`.
fn permutation(strands: usize, word: &[(usize, i8)]) -> Vec<usize> {
    (0..strands)
        .map(|c| {
            let mut col = c;
            for &(i, _) in word {
                if col == i - 1 {
                    col = i;
                } else if col == i {
                    col = i - 1;
                }
            }
            col
        })
        .collect()
}

/// True when the closure of the word is a single component.
pub fn closes_to_knot(strands: usize, word: &[(usize, i8)]) -> bool {
    let perm = permutation(strands, word);
    let mut seen = 1;
    let mut col = perm[0];
    while col != 0 {
        col = perm[col];
        seen += 1;
    }
    seen == strands
}

/// Close a braid word into a long knot, walked from the top of column 0.
/// Crossings are numbered by first visit, arcs by traversal order.
pub fn braid_closure(
    strands: usize,
    word: &[(usize, i8)],
) -> Result<(GaussDiagram, PlanarDiagram)> {
    if strands == 0 {
        return Err(Error::BadGluing("braid needs at least one strand".into()));
    }
    for &(i, sign) in word {
        if i == 0 || i >= strands {
            return Err(Error::BadGluing(format!(
                "generator index {} out of range for {} strands",
                i, strands
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::BadGluing(format!("bad generator sign {}", sign)));
        }
    }
    if !closes_to_knot(strands, word) {
        return Err(Error::BadGluing(
            "closure has more than one component".into(),
        ));
    }

    #[derive(Default, Clone)]
    struct Partial {
        sign: i8,
        u_in: u32,
        u_out: u32,
        o_in: u32,
        o_out: u32,
    }
    // row -> crossing index in first-visit order
    let mut row_index: Vec<Option<usize>> = vec![None; word.len()];
    let mut partial: Vec<Partial> = Vec::new();
    let mut passages = Vec::new();
    let mut signs = BTreeMap::new();
    let mut arc: u32 = 1;
    let mut col = 0usize;
    loop {
        for (r, &(i, sign)) in word.iter().enumerate() {
            if col != i - 1 && col != i {
                continue;
            }
            let from_left = col == i - 1;
            let over = (sign > 0) == from_left;
            let idx = *row_index[r].get_or_insert_with(|| {
                partial.push(Partial {
                    sign,
                    ..Partial::default()
                });
                partial.len() - 1
            });
            let id = (idx + 1) as ChordId;
            passages.push(Passage {
                chord: id,
                role: if over { Role::Over } else { Role::Under },
            });
            signs.insert(id, sign);
            let p = &mut partial[idx];
            if over {
                p.o_in = arc;
                p.o_out = arc + 1;
            } else {
                p.u_in = arc;
                p.u_out = arc + 1;
            }
            arc += 1;
            col = if from_left { i } else { i - 1 };
        }
        if col == 0 {
            break;
        }
        // closure arc back to the top of the same column
    }

    let crossings = partial
        .iter()
        .map(|p| {
            let arcs = if p.sign > 0 {
                [p.u_in, p.o_out, p.u_out, p.o_in]
            } else {
                [p.u_in, p.o_in, p.u_out, p.o_out]
            };
            PdCrossing {
                arcs,
                sign: p.sign,
                kind: ChordKind::Real,
            }
        })
        .collect();
    let strand: Vec<u32> = (1..=arc).collect();
    let gauss = GaussDiagram::from_passages(passages, &signs)?;
    Ok((gauss, PlanarDiagram::new(crossings, strand)))
}

/// Seeded random braid word whose closure is a long knot.  Retries until the
/// permutation closes up; a letter is appended when the requested length can
/// never close (the permutation parity is fixed by the length, so e.g. an
/// even-length word on two strands always closes to a two-component link).
pub fn random_knot_word(rng: &mut impl Rng, strands: usize, len: usize) -> Vec<(usize, i8)> {
    assert!(strands >= 2 && len + 1 >= strands);
    for attempt in 0.. {
        let len = len + (attempt / 64) % 2;
        let word: Vec<(usize, i8)> = (0..len)
            .map(|_| {
                (
                    rng.random_range(1..strands),
                    if rng.random_range(0..2) == 0 { 1 } else { -1 },
                )
            })
            .collect();
        if closes_to_knot(strands, &word) {
            return word;
        }
    }
    unreachable!()
}

/// Standard small closures used throughout the tests.
pub fn trefoil() -> (GaussDiagram, PlanarDiagram) {
    braid_closure(2, &[(1, 1), (1, 1), (1, 1)]).expect("trefoil closes")
}

pub fn figure_eight() -> (GaussDiagram, PlanarDiagram) {
    braid_closure(3, &[(1, 1), (2, -1), (1, 1), (2, -1)]).expect("figure eight closes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_closure() {
        let (g, pd) = braid_closure(1, &[]).unwrap();
        assert_eq!(g.chord_count(), 0);
        assert_eq!(pd, PlanarDiagram::unknot());
    }

    #[test]
    fn trefoil_code() {
        let (g, pd) = trefoil();
        assert_eq!(g.canonical_key(), "O1+ U2+ O3+ U1+ O2+ U3+");
        assert_eq!(pd.to_gauss().unwrap().canonical_key(), g.canonical_key());
    }

    #[test]
    fn figure_eight_code() {
        let (g, pd) = figure_eight();
        assert_eq!(g.chord_count(), 4);
        assert_eq!(pd.to_gauss().unwrap().canonical_key(), g.canonical_key());
    }

    #[test]
    fn rejects_links() {
        assert!(braid_closure(2, &[(1, 1), (1, 1)]).is_err());
        assert!(braid_closure(3, &[(1, 1)]).is_err());
    }

    #[test]
    fn rejects_bad_letters() {
        assert!(braid_closure(2, &[(2, 1)]).is_err());
        assert!(braid_closure(2, &[(0, 1)]).is_err());
        assert!(braid_closure(2, &[(1, 2)]).is_err());
    }

    #[test]
    fn random_closures_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let word = random_knot_word(&mut rng, 3, 6);
            let (g, pd) = braid_closure(3, &word).unwrap();
            assert_eq!(pd.to_gauss().unwrap().canonical_key(), g.canonical_key());
        }
    }
}
