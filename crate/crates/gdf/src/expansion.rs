//! The subdiagram expansion s, its signed inverse, enumeration of abstract
//! diagrams, and evaluation of Gauss-diagram formulas via the dirac pairing.

use crate::diagram::{ChordId, GaussDiagram};
use crate::error::Result;
use crate::formal::FormalSum;
use serde::{Deserialize, Serialize};

fn subsets(ids: &[ChordId]) -> impl Iterator<Item = Vec<ChordId>> + '_ {
    (0u64..(1u64 << ids.len())).map(move |mask| {
        ids.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &id)| id)
            .collect()
    })
}

/// Sum over all subsets of real chords of the subdiagram they span.  Double
/// chords are retained in every term.
pub fn s_diagram(d: &GaussDiagram) -> FormalSum<String> {
    let reals = d.real_chords();
    let mut out = FormalSum::new();
    for keep in subsets(&reals) {
        out.add(d.subdiagram(&keep).unwrap().canonical_key(), 1);
    }
    out
}

/// Signed subdiagram sum: coefficient (-1)^(real chords removed).
pub fn s_inv_diagram(d: &GaussDiagram) -> FormalSum<String> {
    let reals = d.real_chords();
    let n = reals.len();
    let mut out = FormalSum::new();
    for keep in subsets(&reals) {
        let sign = if (n - keep.len()) % 2 == 0 { 1 } else { -1 };
        out.add(d.subdiagram(&keep).unwrap().canonical_key(), sign);
    }
    out
}

/// Linear extension of `s_diagram` to formal sums of diagram keys.
pub fn s(x: &FormalSum<String>) -> Result<FormalSum<String>> {
    x.extend(|k| Ok(s_diagram(&GaussDiagram::parse(k)?)))
}

/// Linear extension of `s_inv_diagram`.
pub fn s_inv(x: &FormalSum<String>) -> Result<FormalSum<String>> {
    x.extend(|k| Ok(s_inv_diagram(&GaussDiagram::parse(k)?)))
}

/// All ways of pairing positions 0..2k-1, as lists of (first, second) pairs.
fn pairings(positions: Vec<usize>) -> Vec<Vec<(usize, usize)>> {
    if positions.is_empty() {
        return vec![Vec::new()];
    }
    let first = positions[0];
    let mut out = Vec::new();
    for i in 1..positions.len() {
        let second = positions[i];
        let rest: Vec<usize> = positions[1..]
            .iter()
            .filter(|&&p| p != second)
            .copied()
            .collect();
        for mut sub in pairings(rest) {
            sub.insert(0, (first, second));
            out.push(sub);
        }
    }
    out
}

fn diagrams_with_chords(k: usize, with_doubles: bool) -> Vec<String> {
    use crate::diagram::{Passage, Role};
    use std::collections::BTreeMap;
    let mut keys = Vec::new();
    let states_per_chord = if with_doubles { 8usize } else { 4 };
    for pairing in pairings((0..2 * k).collect()) {
        for state in 0..states_per_chord.pow(k as u32) {
            let mut passages = vec![
                Passage {
                    chord: 0,
                    role: Role::Over
                };
                2 * k
            ];
            let mut signs = BTreeMap::new();
            let mut st = state;
            for (ci, &(a, b)) in pairing.iter().enumerate() {
                let id = ci as ChordId + 1;
                let local = st % states_per_chord;
                st /= states_per_chord;
                let sign = if local & 1 == 0 { 1i8 } else { -1 };
                let first_over = local & 2 == 0;
                let double = with_doubles && local & 4 != 0;
                let (ra, rb) = match (double, first_over) {
                    (false, true) => (Role::Over, Role::Under),
                    (false, false) => (Role::Under, Role::Over),
                    (true, true) => (Role::DOver, Role::DUnder),
                    (true, false) => (Role::DUnder, Role::DOver),
                };
                passages[a] = Passage { chord: id, role: ra };
                passages[b] = Passage { chord: id, role: rb };
                signs.insert(id, sign);
            }
            let d = GaussDiagram::from_passages(passages, &signs).unwrap();
            keys.push(d.canonical_key());
        }
    }
    keys.sort();
    keys.dedup();
    keys
}

/// All abstract real-chord diagrams with 0..=kmax chords, canonical keys in
/// lexicographic order within each chord count.  The count with exactly k
/// chords is (2k-1)!! * 4^k.
pub fn enumerate(kmax: usize) -> Vec<String> {
    let mut out = Vec::new();
    for k in 0..=kmax {
        out.extend(diagrams_with_chords(k, false));
    }
    out
}

/// All abstract diagrams allowing double chords as well (8 states per
/// chord).  Used by the exhaustive descending-diagram checks.
pub fn enumerate_mixed(kmax: usize) -> Vec<String> {
    let mut out = Vec::new();
    for k in 0..=kmax {
        out.extend(diagrams_with_chords(k, true));
    }
    out
}

/// Seeded random diagram with `n` chords: uniform interleaving, roles and
/// signs.  `with_doubles` draws each chord real or double with equal odds.
pub fn random_diagram(rng: &mut impl rand::Rng, n: usize, with_doubles: bool) -> GaussDiagram {
    use crate::diagram::{Passage, Role};
    use std::collections::BTreeMap;
    let mut slots: Vec<ChordId> = (1..=n as ChordId).flat_map(|i| [i, i]).collect();
    for i in (1..slots.len()).rev() {
        slots.swap(i, rng.random_range(0..=i));
    }
    let mut first: BTreeMap<ChordId, Role> = BTreeMap::new();
    let mut passages = Vec::new();
    let mut signs = BTreeMap::new();
    for id in slots {
        let role = match first.get(&id) {
            None => {
                let over = rng.random_range(0..2) == 0;
                let double = with_doubles && rng.random_range(0..2) == 0;
                let r = match (double, over) {
                    (false, true) => Role::Over,
                    (false, false) => Role::Under,
                    (true, true) => Role::DOver,
                    (true, false) => Role::DUnder,
                };
                first.insert(id, r);
                r
            }
            Some(r) => r.complement(),
        };
        passages.push(Passage { chord: id, role });
        signs.insert(id, if rng.random_range(0..2) == 0 { 1 } else { -1 });
    }
    GaussDiagram::from_passages(passages, &signs).unwrap()
}

/// A degree-n Gauss diagram formula: canonical diagram key -> coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaTable {
    pub degree: usize,
    pub invariant: String,
    pub entries: Vec<FormulaEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaEntry {
    pub diagram: String,
    pub coeff: i64,
}

impl FormulaTable {
    pub fn from_sum(degree: usize, invariant: &str, sum: &FormalSum<String>) -> Self {
        let entries = sum
            .iter()
            .map(|(k, c)| FormulaEntry {
                diagram: k.clone(),
                coeff: c,
            })
            .collect();
        FormulaTable {
            degree,
            invariant: invariant.to_string(),
            entries,
        }
    }

    pub fn as_sum(&self) -> FormalSum<String> {
        self.entries
            .iter()
            .map(|e| (e.diagram.clone(), e.coeff))
            .collect()
    }
}

/// Evaluate a Gauss-diagram formula on a real diagram: the dirac pairing of
/// the table with s(D), i.e. the sum of table coefficients over all
/// subdiagrams of D.
pub fn eval_formula(table: &FormulaTable, d: &GaussDiagram) -> i64 {
    let tab = table.as_sum();
    FormalSum::dirac(&tab, &s_diagram(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

    #[test]
    fn s_one_chord() {
        let d = GaussDiagram::parse("O1+ U1+").unwrap();
        let sum = s_diagram(&d);
        assert_eq!(sum.len(), 2);
        assert_eq!(sum.coeff(&"O1+ U1+".to_string()), 1);
        assert_eq!(sum.coeff(&String::new()), 1);
    }

    #[test]
    fn s_trefoil_term_count() {
        let d = GaussDiagram::parse(TREFOIL).unwrap();
        let sum = s_diagram(&d);
        // chords 1 and 3 leave the same one-chord subdiagram, so the eight
        // subsets collapse to seven distinct keys with total mass eight
        assert_eq!(sum.len(), 7);
        assert_eq!(sum.iter().map(|(_, c)| c).sum::<i64>(), 8);
        assert_eq!(sum.coeff(&"O1+ U1+".to_string()), 2);
    }

    #[test]
    fn s_inv_two_chords_signs() {
        let d = GaussDiagram::parse("O1+ U2+ U1+ O2+").unwrap();
        let sum = s_inv_diagram(&d);
        assert_eq!(sum.coeff(&d.canonical_key()), 1);
        assert_eq!(sum.coeff(&String::new()), 1);
        let d1 = d.subdiagram(&[1]).unwrap().canonical_key();
        let d2 = d.subdiagram(&[2]).unwrap().canonical_key();
        assert_eq!(sum.coeff(&d1), -1);
        assert_eq!(sum.coeff(&d2), -1);
    }

    #[test]
    fn s_inv_empty() {
        let e = FormalSum::singleton(String::new());
        assert_eq!(s_inv(&e).unwrap(), e);
    }

    #[test]
    fn s_inv_of_s_is_identity_one_chord() {
        let d = GaussDiagram::parse("O1+ U1+").unwrap();
        let x = FormalSum::singleton(d.canonical_key());
        assert_eq!(s_inv(&s(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn s_preserves_double_resolution() {
        // s(over - under) = over + empty - under - empty = over - under
        let over = GaussDiagram::parse("O1+ U1+").unwrap();
        let under = GaussDiagram::parse("U1- O1-").unwrap();
        let mut x = FormalSum::new();
        x.add(over.canonical_key(), 1);
        x.add(under.canonical_key(), -1);
        assert_eq!(s(&x).unwrap(), x);
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate(0), vec![String::new()]);
        assert_eq!(enumerate(1).len(), 5);
        let e3 = enumerate(3);
        let count = |k: usize| e3.iter().filter(|key| GaussDiagram::parse(key).unwrap().chord_count() == k).count();
        assert_eq!(count(2), 48);
        assert_eq!(count(3), 960);
    }

    #[test]
    fn eval_formula_basics() {
        let t = GaussDiagram::parse(TREFOIL).unwrap();
        let empty_table = FormulaTable::from_sum(2, "zero", &FormalSum::new());
        assert_eq!(eval_formula(&empty_table, &t), 0);
        let const_table =
            FormulaTable::from_sum(0, "one", &FormalSum::singleton(String::new()));
        assert_eq!(eval_formula(&const_table, &t), 1);
        assert_eq!(eval_formula(&const_table, &GaussDiagram::empty()), 1);
    }

    #[test]
    fn formula_table_json_shape() {
        let mut sum = FormalSum::new();
        sum.add("O1+ U1+".to_string(), 2);
        let t = FormulaTable::from_sum(2, "c2", &sum);
        let js = serde_json::to_string(&t).unwrap();
        let back: FormulaTable = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
    }
}
