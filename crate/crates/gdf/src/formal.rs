//! Free integer module over an orderable key type.
//!
//! Keys are canonical serializations of diagrams, trees, planar diagrams or
//! words; two structurally equal objects must produce the identical key so
//! that term merging and the dirac pairing are well defined.

use std::collections::BTreeMap;
use std::fmt;

/// A finite integer linear combination of canonical keys.
///
/// Invariant: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum<K: Ord + Clone> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn new() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }

    pub fn singleton(key: K) -> Self {
        Self::with_coeff(key, 1)
    }

    pub fn with_coeff(key: K, coeff: i64) -> Self {
        let mut s = Self::new();
        s.add(key, coeff);
        s
    }

    /// Add `coeff * key`, dropping the term if the total cancels.
    pub fn add(&mut self, key: K, coeff: i64) {
        if coeff == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn coeff(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// ca*a + cb*b with zero coefficients dropped.
    pub fn combine(a: &Self, b: &Self, ca: i64, cb: i64) -> Self {
        let mut out = Self::new();
        for (k, c) in a.iter() {
            out.add(k.clone(), ca * c);
        }
        for (k, c) in b.iter() {
            out.add(k.clone(), cb * c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::new();
        for (k, coeff) in self.iter() {
            out.add(k.clone(), c * coeff);
        }
        out
    }

    pub fn add_sum(&mut self, other: &Self, c: i64) {
        for (k, coeff) in other.iter() {
            self.add(k.clone(), c * coeff);
        }
    }

    /// Linear extension: sum a[k] * f(k).  Failure of `f` on any key
    /// propagates.
    pub fn extend<K2, E, F>(&self, mut f: F) -> Result<FormalSum<K2>, E>
    where
        K2: Ord + Clone,
        F: FnMut(&K) -> Result<FormalSum<K2>, E>,
    {
        let mut out = FormalSum::new();
        for (k, c) in self.iter() {
            out.add_sum(&f(k)?, c);
        }
        Ok(out)
    }

    /// Infallible linear extension.
    pub fn extend_ok<K2, F>(&self, mut f: F) -> FormalSum<K2>
    where
        K2: Ord + Clone,
        F: FnMut(&K) -> FormalSum<K2>,
    {
        let mut out = FormalSum::new();
        for (k, c) in self.iter() {
            out.add_sum(&f(k), c);
        }
        out
    }

    /// Dirac inner product: sum over shared keys of a[k]*b[k].
    pub fn dirac(a: &Self, b: &Self) -> i64 {
        // iterate over the smaller support
        let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        small.iter().map(|(k, c)| c * big.coeff(k)).sum()
    }

    /// Apply an integer functional linearly.
    pub fn pair_with<F>(&self, mut f: F) -> i64
    where
        F: FnMut(&K) -> i64,
    {
        self.iter().map(|(k, c)| c * f(k)).sum()
    }
}

impl<K: Ord + Clone + fmt::Display> FormalSum<K> {
    /// Textual dump: one `<coefficient> <key>` pair per line, sorted by key.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.iter() {
            out.push_str(&format!("{:+} {}\n", c, k));
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for FormalSum<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut s = Self::new();
        for (k, c) in iter {
            s.add(k, c);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_sum(rng: &mut ChaCha8Rng) -> FormalSum<String> {
        let n = rng.random_range(0..5);
        (0..n)
            .map(|_| {
                (
                    format!("k{}", rng.random_range(0..6)),
                    rng.random_range(-3..=3i64),
                )
            })
            .collect()
    }

    #[test]
    fn combine_cancellation() {
        let x = FormalSum::singleton("k".to_string());
        let r = FormalSum::combine(&x, &x, 1, -1);
        assert!(r.is_empty());
    }

    #[test]
    fn combine_merges_coefficients() {
        let a = FormalSum::with_coeff("k", 2);
        let b = FormalSum::with_coeff("k", 3);
        let r = FormalSum::combine(&a, &b, 1, 1);
        assert_eq!(r.coeff(&"k"), 5);
    }

    #[test]
    fn combine_disjoint() {
        let a = FormalSum::with_coeff("k1", 1);
        let b = FormalSum::with_coeff("k2", 1);
        let r = FormalSum::combine(&a, &b, 2, -1);
        assert_eq!(r.coeff(&"k1"), 2);
        assert_eq!(r.coeff(&"k2"), -1);
    }

    #[test]
    fn extend_identity_and_zero() {
        let a: FormalSum<String> =
            [("x".to_string(), 3), ("y".to_string(), -2)].into_iter().collect();
        let id = a.extend_ok(|k| FormalSum::singleton(k.clone()));
        assert_eq!(id, a);
        let z = a.extend_ok(|_| FormalSum::<String>::new());
        assert!(z.is_empty());
        let dbl = a.extend_ok(|k| FormalSum::with_coeff(k.clone(), 2));
        assert_eq!(dbl.coeff(&"x".to_string()), 6);
    }

    #[test]
    fn dirac_examples() {
        let k = FormalSum::singleton("k");
        assert_eq!(FormalSum::dirac(&k, &k), 1);
        let k2 = FormalSum::singleton("j");
        assert_eq!(FormalSum::dirac(&k, &k2), 0);
        let a: FormalSum<&str> = [("k", 2), ("j", 1)].into_iter().collect();
        let b: FormalSum<&str> = [("k", 3), ("j", -1)].into_iter().collect();
        assert_eq!(FormalSum::dirac(&a, &b), 5);
    }

    #[test]
    fn linearity_of_extend_over_combine() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_sum(&mut rng);
            let b = random_sum(&mut rng);
            let ca = rng.random_range(-2..=2);
            let cb = rng.random_range(-2..=2);
            let f = |k: &String| FormalSum::with_coeff(format!("f{}", k), 3);
            let lhs = FormalSum::combine(&a, &b, ca, cb).extend_ok(f);
            let rhs = FormalSum::combine(&a.extend_ok(f), &b.extend_ok(f), ca, cb);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn dirac_symmetric_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_sum(&mut rng);
            let b = random_sum(&mut rng);
            let c = random_sum(&mut rng);
            assert_eq!(FormalSum::dirac(&a, &b), FormalSum::dirac(&b, &a));
            let ab = FormalSum::combine(&a, &b, 1, 1);
            assert_eq!(
                FormalSum::dirac(&ab, &c),
                FormalSum::dirac(&a, &c) + FormalSum::dirac(&b, &c)
            );
        }
    }
}
