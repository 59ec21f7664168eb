//! Finite type invariants of words in a free or pure braid group: subword
//! expansion, its signed inverse, and combinatorial subword formulas.
//!
//! Words live unreduced: `a a'` and the empty word are distinct basis
//! elements of the module of formal sums, and free reduction is a separate
//! explicit operation used only when testing group-invariance.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal::FormalSum;

/// A single letter: a generator name plus an inversion flag.  Printed as
/// the bare name or with a trailing apostrophe (`a`, `a'`, `A1_2'`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: &str, inverse: bool) -> Self {
        Letter {
            gen: gen.to_string(),
            inverse,
        }
    }

    pub fn inverted(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen, if self.inverse { "'" } else { "" })
    }
}

/// An unreduced word: a finite sequence of letters.  Space-separated
/// syntax, e.g. `a b a'`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (name, inverse) = match tok.strip_suffix('\'') {
                Some(base) => (base, true),
                None => (tok, false),
            };
            if name.is_empty() || name.contains('\'') {
                return Err(Error::Parse(format!("bad letter {tok:?}")));
            }
            letters.push(Letter::new(name, inverse));
        }
        Ok(Word { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn key(&self) -> String {
        self.to_string()
    }

    /// Free reduction: repeatedly delete adjacent `g g'` / `g' g` pairs.
    /// This leaves the word's class in the free group; it is *not* applied
    /// anywhere implicitly.
    pub fn reduced(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for l in &self.letters {
            if stack.last().map_or(false, |t| *t == l.inverted()) {
                stack.pop();
            } else {
                stack.push(l.clone());
            }
        }
        Word { letters: stack }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

/// All 2^m subsequences of the letters, in mask order, each preserving the
/// original letter order.
pub fn subwords(w: &Word) -> Vec<Word> {
    let m = w.len();
    assert!(m < 63, "word too long for subset enumeration");
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0u64..(1 << m) {
        let letters = w
            .letters
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect();
        out.push(Word { letters });
    }
    out
}

/// s on a single word: the sum of all subwords with coefficient +1.
pub fn s_word_one(w: &Word) -> FormalSum<String> {
    let mut out = FormalSum::new();
    for u in subwords(w) {
        out.add(u.key(), 1);
    }
    out
}

/// s⁻¹ on a single word of m letters: the distributed expansion of
/// (g₁−1)(g₂−1)⋯(gₘ−1), i.e. each k-letter subword signed (−1)^{m−k}.
pub fn s_inv_word_one(w: &Word) -> FormalSum<String> {
    let m = w.len() as i64;
    let mut out = FormalSum::new();
    for u in subwords(w) {
        let sign = if (m - u.len() as i64) % 2 == 0 { 1 } else { -1 };
        out.add(u.key(), sign);
    }
    out
}

/// Linear extension of s to formal sums of word keys.
pub fn s_word(x: &FormalSum<String>) -> Result<FormalSum<String>> {
    let mut out = FormalSum::new();
    for (k, c) in x.iter() {
        out.add_sum(&s_word_one(&Word::parse(k)?), c);
    }
    Ok(out)
}

/// Linear extension of s⁻¹ to formal sums of word keys.
pub fn s_inv_word(x: &FormalSum<String>) -> Result<FormalSum<String>> {
    let mut out = FormalSum::new();
    for (k, c) in x.iter() {
        out.add_sum(&s_inv_word_one(&Word::parse(k)?), c);
    }
    Ok(out)
}

/// Exponent sum: occurrences of g minus occurrences of g⁻¹.
pub fn exp_sum(w: &Word, g: &str) -> i64 {
    let mut total = 0;
    for l in &w.letters {
        if l.gen == g {
            total += if l.inverse { -1 } else { 1 };
        }
    }
    total
}

/// An integer invariant of words with a declared finite type degree.  The
/// evaluation must be constant on words equal in the underlying group.
#[derive(Clone)]
pub struct WordInvariant {
    pub name: String,
    pub degree: usize,
    pub evaluate: Arc<dyn Fn(&Word) -> i64 + Send + Sync>,
}

impl WordInvariant {
    pub fn eval(&self, w: &Word) -> i64 {
        (self.evaluate)(w)
    }

    /// Linear extension to a formal sum of word keys.
    pub fn eval_sum(&self, x: &FormalSum<String>) -> Result<i64> {
        let mut total = 0;
        for (k, c) in x.iter() {
            total += c * self.eval(&Word::parse(k)?);
        }
        Ok(total)
    }
}

/// The exponent sum of a single generator, the canonical type 1 invariant.
pub fn exp_invariant(g: &str) -> WordInvariant {
    let gen = g.to_string();
    WordInvariant {
        name: format!("exp_{g}"),
        degree: 1,
        evaluate: Arc::new(move |w| exp_sum(w, &gen)),
    }
}

/// Pointwise product; the declared degree adds.
pub fn product_invariant(a: &WordInvariant, b: &WordInvariant) -> WordInvariant {
    let (fa, fb) = (a.evaluate.clone(), b.evaluate.clone());
    WordInvariant {
        name: format!("{}*{}", a.name, b.name),
        degree: a.degree + b.degree,
        evaluate: Arc::new(move |w| fa(w) * fb(w)),
    }
}

/// Linking number of strands i and j read off a pure braid word: the
/// exponent sum of the band generator A_ij.  Factors through
/// abelianization, hence invariant under the pure braid relations.
pub fn braid_linking(w: &Word, strands: usize, pair: (usize, usize)) -> Result<i64> {
    let (i, j) = pair;
    if !(1 <= i && i < j && j <= strands) {
        return Err(Error::NotApplicable(format!(
            "strand pair ({i},{j}) out of range for {strands} strands"
        )));
    }
    Ok(exp_sum(w, &format!("A{i}_{j}")))
}

/// The generator alphabet of the pure braid group on k strands: every
/// A_ij with 1 ≤ i < j ≤ k.
pub fn pure_braid_alphabet(strands: usize) -> Vec<String> {
    let mut out = Vec::new();
    for i in 1..=strands {
        for j in (i + 1)..=strands {
            out.push(format!("A{i}_{j}"));
        }
    }
    out
}

/// Look up an invariant by name: `exp_<g>` for an exponent sum,
/// `lk_<i>_<j>` for a pure-braid linking number on `strands` strands, and
/// `*` for pointwise products, e.g. `exp_a*exp_b`.
pub fn named_invariant(name: &str, strands: usize) -> Result<WordInvariant> {
    if let Some((a, b)) = name.split_once('*') {
        let (x, y) = (named_invariant(a, strands)?, named_invariant(b, strands)?);
        return Ok(product_invariant(&x, &y));
    }
    if let Some(g) = name.strip_prefix("exp_") {
        return Ok(exp_invariant(g));
    }
    if let Some(rest) = name.strip_prefix("lk_") {
        if let Some((i, j)) = rest.split_once('_') {
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad strand pair in {name:?}")))
            };
            let (i, j) = (parse(i)?, parse(j)?);
            braid_linking(&Word::empty(), strands, (i, j))?;
            return Ok(WordInvariant {
                name: name.to_string(),
                degree: 1,
                evaluate: Arc::new(move |w| {
                    braid_linking(w, strands, (i, j)).unwrap_or(0)
                }),
            });
        }
    }
    Err(Error::Parse(format!(
        "unknown invariant {name:?}; expected exp_<g>, <a>*<b>, or lk_<i>_<j>"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFormulaTable {
    pub degree: usize,
    pub invariant: String,
    pub entries: Vec<WordFormulaEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFormulaEntry {
    pub word: String,
    pub coeff: i64,
}

/// All words of length ≤ max_len over the alphabet together with its
/// formal inverses, in length-then-lex order.
pub fn enumerate_words(alphabet: &[String], max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = alphabet
        .iter()
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let mut ls = w.letters.clone();
                ls.push(l.clone());
                next.push(Word { letters: ls });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The subword formula for a declared type-n invariant: table[u] =
/// ν(s⁻¹(u)) over all words u of length ≤ n on the alphabet.  Zero
/// entries are dropped.
pub fn omega_word_table(
    nu: &WordInvariant,
    n: usize,
    alphabet: &[String],
) -> Result<WordFormulaTable> {
    let mut entries = BTreeMap::new();
    for u in enumerate_words(alphabet, n) {
        let v = nu.eval_sum(&s_inv_word_one(&u))?;
        if v != 0 {
            entries.insert(u.key(), v);
        }
    }
    Ok(WordFormulaTable {
        degree: n,
        invariant: nu.name.clone(),
        entries: entries
            .into_iter()
            .map(|(word, coeff)| WordFormulaEntry { word, coeff })
            .collect(),
    })
}

/// Evaluate a subword formula: the sum of table coefficients over all
/// subwords of w of length ≤ the table degree.
pub fn eval_word_formula(table: &WordFormulaTable, w: &Word) -> i64 {
    let tab: BTreeMap<&str, i64> = table
        .entries
        .iter()
        .map(|e| (e.word.as_str(), e.coeff))
        .collect();
    let mut total = 0;
    for u in subwords(w) {
        if u.len() <= table.degree {
            total += tab.get(u.key().as_str()).copied().unwrap_or(0);
        }
    }
    total
}

/// A seeded random word of the given length over the alphabet and its
/// inverses.
pub fn random_word(rng: &mut impl rand::Rng, alphabet: &[String], len: usize) -> Word {
    let letters = (0..len)
        .map(|_| {
            let g = &alphabet[rng.random_range(0..alphabet.len())];
            Letter::new(g, rng.random_bool(0.5))
        })
        .collect();
    Word { letters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Vec<String> {
        vec!["a".to_string(), "b".to_string()]
    }

    #[test]
    fn parse_round_trip() {
        let w = Word::parse("a b a'").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "a b a'");
        assert!(Word::parse("").unwrap().is_empty());
        assert!(Word::parse("a''").is_err());
    }

    #[test]
    fn subwords_of_ab() {
        let subs = subwords(&Word::parse("a b").unwrap());
        let mut keys: Vec<String> = subs.iter().map(Word::to_string).collect();
        keys.sort();
        assert_eq!(keys, vec!["", "a", "a b", "b"]);
        assert_eq!(subwords(&Word::empty()), vec![Word::empty()]);
        let w = Word::parse("a b a' b' a").unwrap();
        assert_eq!(subwords(&w).len(), 32);
    }

    #[test]
    fn s_inv_of_ab_is_product_expansion() {
        // (a-1)(b-1) = ab - a - b + 1
        let x = s_inv_word_one(&Word::parse("a b").unwrap());
        assert_eq!(x.coeff(&"a b".to_string()), 1);
        assert_eq!(x.coeff(&"a".to_string()), -1);
        assert_eq!(x.coeff(&"b".to_string()), -1);
        assert_eq!(x.coeff(&String::new()), 1);
        assert_eq!(x.len(), 4);
    }

    #[test]
    fn s_word_empty() {
        let x = s_word_one(&Word::empty());
        assert_eq!(x.len(), 1);
        assert_eq!(x.coeff(&String::new()), 1);
    }

    #[test]
    fn s_inv_inverts_s_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let len = rng.random_range(0..=10);
            let w = random_word(&mut rng, &ab(), len);
            let one = FormalSum::singleton(w.key());
            assert_eq!(s_inv_word(&s_word(&one).unwrap()).unwrap(), one);
            assert_eq!(s_word(&s_inv_word(&one).unwrap()).unwrap(), one);
        }
    }

    #[test]
    fn exp_sum_basics() {
        assert_eq!(exp_sum(&Word::parse("a b a'").unwrap(), "a"), 0);
        assert_eq!(exp_sum(&Word::parse("a a b").unwrap(), "a"), 2);
        assert_eq!(exp_sum(&Word::parse("a a b").unwrap(), "b"), 1);
        assert_eq!(exp_sum(&Word::parse("a a b").unwrap(), "c"), 0);
    }

    #[test]
    fn exp_a_table_at_degree_one() {
        let t = omega_word_table(&exp_invariant("a"), 1, &ab()).unwrap();
        let get = |k: &str| {
            t.entries
                .iter()
                .find(|e| e.word == k)
                .map(|e| e.coeff)
                .unwrap_or(0)
        };
        assert_eq!(get("a"), 1);
        assert_eq!(get("a'"), -1);
        assert_eq!(get("b"), 0);
        assert_eq!(get(""), 0);
    }

    #[test]
    fn product_table_at_degree_two() {
        let nu = product_invariant(&exp_invariant("a"), &exp_invariant("b"));
        assert_eq!(nu.degree, 2);
        assert_eq!(nu.eval(&Word::parse("a b").unwrap()), 1);
        let t = omega_word_table(&nu, 2, &ab()).unwrap();
        let get = |k: &str| {
            t.entries
                .iter()
                .find(|e| e.word == k)
                .map(|e| e.coeff)
                .unwrap_or(0)
        };
        // ν(ab) - ν(a) - ν(b) + ν(∅) = 1 - 0 - 0 + 0
        assert_eq!(get("a b"), 1);
    }

    #[test]
    fn type_two_vanishes_on_length_three() {
        let nu = product_invariant(&exp_invariant("a"), &exp_invariant("b"));
        for u in enumerate_words(&ab(), 3) {
            if u.len() == 3 {
                assert_eq!(nu.eval_sum(&s_inv_word_one(&u)).unwrap(), 0, "word {u}");
            }
        }
    }

    #[test]
    fn formula_recovers_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let nu1 = exp_invariant("a");
        let t1 = omega_word_table(&nu1, 1, &ab()).unwrap();
        let nu2 = product_invariant(&exp_invariant("a"), &exp_invariant("b"));
        let t2 = omega_word_table(&nu2, 2, &ab()).unwrap();
        for _ in 0..100 {
            let len = rng.random_range(0..=8);
            let w = random_word(&mut rng, &ab(), len);
            assert_eq!(eval_word_formula(&t1, &w), nu1.eval(&w), "exp_a on {w}");
            assert_eq!(eval_word_formula(&t2, &w), nu2.eval(&w), "exp_a*exp_b on {w}");
        }
    }

    #[test]
    fn braid_linking_basics() {
        let w = Word::parse("A1_2").unwrap();
        assert_eq!(braid_linking(&w, 3, (1, 2)).unwrap(), 1);
        let w = Word::parse("A1_2 A1_3 A1_2'").unwrap();
        assert_eq!(braid_linking(&w, 3, (1, 2)).unwrap(), 0);
        assert_eq!(braid_linking(&w, 3, (1, 3)).unwrap(), 1);
        assert!(braid_linking(&w, 3, (2, 1)).is_err());
        assert!(braid_linking(&w, 3, (1, 4)).is_err());
    }

    #[test]
    fn braid_linking_formula_reproduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let alpha = pure_braid_alphabet(3);
        assert_eq!(alpha, vec!["A1_2", "A1_3", "A2_3"]);
        let nu = WordInvariant {
            name: "lk_1_2".to_string(),
            degree: 1,
            evaluate: Arc::new(|w| braid_linking(w, 3, (1, 2)).unwrap()),
        };
        let t = omega_word_table(&nu, 1, &alpha).unwrap();
        for _ in 0..100 {
            let len = rng.random_range(0..=6);
            let w = random_word(&mut rng, &alpha, len);
            assert_eq!(eval_word_formula(&t, &w), nu.eval(&w), "word {w}");
        }
    }

    #[test]
    fn free_reduction_is_explicit_only() {
        let w = Word::parse("a a'").unwrap();
        // unreduced words are distinct basis elements...
        assert_ne!(FormalSum::singleton(w.key()), FormalSum::singleton(String::new()));
        // ...and reduction is a separate operation.
        assert_eq!(w.reduced(), Word::empty());
        assert_eq!(Word::parse("a b b' a' b").unwrap().reduced().to_string(), "b");
    }

    #[test]
    fn invariance_under_free_reduction_samples() {
        // exp sums are constant on free-group classes: compare a word with
        // its reduction and with a conjugated insertion.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let nu = product_invariant(&exp_invariant("a"), &exp_invariant("b"));
        for _ in 0..50 {
            let len = rng.random_range(0..=8);
            let w = random_word(&mut rng, &ab(), len);
            assert_eq!(nu.eval(&w), nu.eval(&w.reduced()));
            let at = rng.random_range(0..=w.len());
            let g = Letter::new(["a", "b"][rng.random_range(0..2)], rng.random_bool(0.5));
            let mut ls = w.letters.clone();
            ls.insert(at, g.inverted());
            ls.insert(at, g);
            assert_eq!(nu.eval(&Word { letters: ls }), nu.eval(&w));
        }
    }

    #[test]
    fn table_json_round_trip() {
        let t = omega_word_table(&exp_invariant("a"), 1, &ab()).unwrap();
        let js = serde_json::to_string(&t).unwrap();
        let back: WordFormulaTable = serde_json::from_str(&js).unwrap();
        assert_eq!(t, back);
    }
}
