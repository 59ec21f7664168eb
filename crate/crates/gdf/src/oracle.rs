//! Integer-valued invariants of real long knots computed from planar
//! diagrams: the Conway coefficient c2 via the Wirtinger presentation and an
//! exact fraction-free Alexander determinant, extended to double points by
//! the Vassiliev resolution.
//!
//! All arithmetic is exact integer Laurent arithmetic; no floating point.

use crate::diagram::{ChordKind, PlanarDiagram};
use crate::error::{Error, Result};
use crate::formal::FormalSum;
use std::collections::HashMap;

/// Integer Laurent polynomial in one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    /// exponent of coeffs[0]; coeffs is empty exactly for the zero poly and
    /// otherwise has nonzero first and last entries
    lo: i64,
    coeffs: Vec<i128>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: i128) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn monomial(c: i128, exp: i64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            LaurentPoly {
                lo: exp,
                coeffs: vec![c],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.lo += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn coeff(&self, exp: i64) -> i128 {
        if self.is_zero() || exp < self.lo || exp >= self.lo + self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[(exp - self.lo) as usize]
        }
    }

    pub fn min_exp(&self) -> i64 {
        self.lo
    }

    pub fn max_exp(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.max_exp().max(other.max_exp());
        let mut coeffs = vec![0i128; (hi - lo + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[(other.lo - lo) as usize + i] += c;
        }
        LaurentPoly { lo, coeffs }.trim()
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly {
            lo: self.lo + other.lo,
            coeffs,
        }
        .trim()
    }

    /// Exact division; panics if the division leaves a remainder, which the
    /// Bareiss elimination guarantees never happens.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let mut rem = self.coeffs.clone();
        let d = &divisor.coeffs;
        let dn = d.len();
        assert!(rem.len() >= dn, "non-exact polynomial division");
        let qn = rem.len() - dn + 1;
        let mut q = vec![0i128; qn];
        for i in (0..qn).rev() {
            let c = rem[i + dn - 1];
            if c == 0 {
                continue;
            }
            let lead = d[dn - 1];
            assert!(c % lead == 0, "non-exact polynomial division");
            let qi = c / lead;
            q[i] = qi;
            for (j, &dj) in d.iter().enumerate() {
                rem[i + j] -= qi * dj;
            }
        }
        assert!(rem.iter().all(|&c| c == 0), "non-exact polynomial division");
        LaurentPoly {
            lo: self.lo - divisor.lo,
            coeffs: q,
        }
        .trim()
    }

    pub fn eval_at_one(&self) -> i128 {
        self.coeffs.iter().sum()
    }

    /// Second derivative evaluated at t = 1.
    pub fn second_derivative_at_one(&self) -> i128 {
        (0..self.coeffs.len() as i64)
            .map(|i| {
                let e = self.lo + i;
                self.coeffs[i as usize] * (e * (e - 1)) as i128
            })
            .sum()
    }

    /// Coefficientwise symmetry under t -> 1/t.
    pub fn is_symmetric(&self) -> bool {
        let n = self.coeffs.len();
        if n == 0 {
            return true;
        }
        self.lo + self.max_exp() == 0 && (0..n).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    pub fn to_string_pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let e = self.lo + i as i64;
            let term = match e {
                0 => format!("{}", c),
                1 if c == 1 => "t".to_string(),
                1 if c == -1 => "-t".to_string(),
                1 => format!("{}t", c),
                _ if c == 1 => format!("t^{}", e),
                _ if c == -1 => format!("-t^{}", e),
                _ => format!("{}t^{}", c, e),
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 && !p.starts_with('-') {
                out.push('+');
            }
            out.push_str(p);
        }
        out
    }
}

/// Fraction-free Bareiss determinant over integer Laurent polynomials.
fn determinant(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut sign = 1i128;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return LaurentPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
            m[i][k] = LaurentPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

/// Union-find over arc labels, merging arcs across over-passages so that the
/// classes are the Wirtinger generators.
struct Classes {
    parent: HashMap<u32, u32>,
}

impl Classes {
    fn new() -> Self {
        Classes {
            parent: HashMap::new(),
        }
    }
    fn find(&mut self, x: u32) -> u32 {
        let p = *self.parent.get(&x).unwrap_or(&x);
        if p == x {
            x
        } else {
            let r = self.find(p);
            self.parent.insert(x, r);
            r
        }
    }
    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent.insert(ra, rb);
        }
    }
}

/// Alexander polynomial of the closed-up long knot, via the Wirtinger
/// presentation.  Normalized to be symmetric in t <-> 1/t with value 1 at
/// t = 1.
pub fn alexander(pd: &PlanarDiagram) -> Result<LaurentPoly> {
    if pd.crossings.iter().any(|c| c.kind == ChordKind::Double) {
        return Err(Error::BadPlanar(
            "alexander requires all crossings real".into(),
        ));
    }
    let n = pd.crossings.len();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    // close up: last arc is identified with the first
    let mut cls = Classes::new();
    if let (Some(&first), Some(&last)) = (pd.strand.first(), pd.strand.last()) {
        cls.union(last, first);
    }
    for c in &pd.crossings {
        cls.union(PlanarDiagram::over_in(c), PlanarDiagram::over_out(c));
    }
    // index the generator classes
    let mut gen_index: HashMap<u32, usize> = HashMap::new();
    for &arc in &pd.strand {
        let r = cls.find(arc);
        let next = gen_index.len();
        gen_index.entry(r).or_insert(next);
    }
    if gen_index.len() != n {
        return Err(Error::BadPlanar(format!(
            "expected {} Wirtinger generators, found {}",
            n,
            gen_index.len()
        )));
    }
    // one relation per crossing: u_out = t^e u_in + (1 - t^e) over
    let mut matrix = vec![vec![LaurentPoly::zero(); n]; n];
    for (row, c) in pd.crossings.iter().enumerate() {
        let e = c.sign as i64;
        let gu_in = gen_index[&cls.find(PlanarDiagram::under_in(c))];
        let gu_out = gen_index[&cls.find(PlanarDiagram::under_out(c))];
        let gov = gen_index[&cls.find(PlanarDiagram::over_in(c))];
        let te = LaurentPoly::monomial(1, e);
        matrix[row][gu_in] = matrix[row][gu_in].add(&te);
        matrix[row][gov] = matrix[row][gov].add(&LaurentPoly::one().sub(&te));
        matrix[row][gu_out] = matrix[row][gu_out].sub(&LaurentPoly::one());
    }
    // delete the last row and column
    let minor: Vec<Vec<LaurentPoly>> = matrix[..n - 1]
        .iter()
        .map(|row| row[..n - 1].to_vec())
        .collect();
    let det = determinant(minor);
    normalize_alexander(det)
}

fn normalize_alexander(det: LaurentPoly) -> Result<LaurentPoly> {
    if det.is_zero() {
        return Err(Error::BadPlanar("vanishing Alexander determinant".into()));
    }
    let c = det.min_exp() + det.max_exp();
    if c % 2 != 0 {
        return Err(Error::BadPlanar(
            "Alexander determinant cannot be centered".into(),
        ));
    }
    let mut centered = LaurentPoly::monomial(1, -c / 2).mul(&det);
    match centered.eval_at_one() {
        1 => {}
        -1 => centered = centered.neg(),
        v => {
            return Err(Error::BadPlanar(format!(
                "Alexander determinant evaluates to {} at t=1",
                v
            )))
        }
    }
    Ok(centered)
}

/// The z^2 Conway coefficient: half the second derivative of the normalized
/// Alexander polynomial at t = 1.  A type-2 invariant.
pub fn c2(pd: &PlanarDiagram) -> Result<i64> {
    let delta = alexander(pd)?;
    let dd = delta.second_derivative_at_one();
    debug_assert!(dd % 2 == 0);
    Ok((dd / 2) as i64)
}

/// An integer-valued invariant of real long-knot planar diagrams with a
/// declared finite type degree.
#[derive(Clone, Copy)]
pub struct Invariant {
    pub name: &'static str,
    pub degree: usize,
    pub evaluate: fn(&PlanarDiagram) -> Result<i64>,
}

pub fn c2_invariant() -> Invariant {
    Invariant {
        name: "c2",
        degree: 2,
        evaluate: c2,
    }
}

/// Vassiliev extension on a single planar diagram: resolve every double
/// crossing into (as recorded) - (switched), recursively, then apply the
/// invariant.
pub fn eval_singular_pd(pd: &PlanarDiagram, nu: &Invariant) -> Result<i64> {
    match pd
        .crossings
        .iter()
        .position(|c| c.kind == ChordKind::Double)
    {
        None => (nu.evaluate)(pd),
        Some(idx) => {
            let mut as_recorded = pd.clone();
            as_recorded.crossings[idx].kind = ChordKind::Real;
            let switched = pd.switch_crossing(idx);
            Ok(eval_singular_pd(&as_recorded, nu)? - eval_singular_pd(&switched, nu)?)
        }
    }
}

/// Linear extension of the Vassiliev evaluation to formal sums of planar
/// diagram keys.
pub fn eval_singular(x: &FormalSum<String>, nu: &Invariant) -> Result<i64> {
    let mut total = 0i64;
    for (key, coeff) in x.iter() {
        let pd = PlanarDiagram::from_key(key)?;
        total += coeff * eval_singular_pd(&pd, nu)?;
    }
    Ok(total)
}

/// Memoizing wrapper around the Vassiliev evaluation, keyed by the planar
/// diagram's canonical key.
#[derive(Default)]
pub struct OracleCache {
    memo: HashMap<String, i64>,
}

impl OracleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eval_pd(&mut self, pd: &PlanarDiagram, nu: &Invariant) -> Result<i64> {
        let key = pd.canonical_key();
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = eval_singular_pd(pd, nu)?;
        self.memo.insert(key, v);
        Ok(v)
    }

    pub fn eval_sum(&mut self, x: &FormalSum<String>, nu: &Invariant) -> Result<i64> {
        let mut total = 0i64;
        for (key, coeff) in x.iter() {
            if let Some(&v) = self.memo.get(key) {
                total += coeff * v;
                continue;
            }
            let pd = PlanarDiagram::from_key(key)?;
            let v = eval_singular_pd(&pd, nu)?;
            self.memo.insert(key.clone(), v);
            total += coeff * v;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::braid_closure;

    #[test]
    fn laurent_arithmetic() {
        let a = LaurentPoly::monomial(1, 1).add(&LaurentPoly::monomial(1, -1));
        let b = a.sub(&LaurentPoly::one()); // t - 1 + 1/t
        assert_eq!(b.coeff(1), 1);
        assert_eq!(b.coeff(0), -1);
        assert_eq!(b.coeff(-1), 1);
        assert!(b.is_symmetric());
        assert_eq!(b.eval_at_one(), 1);
        let sq = b.mul(&b);
        assert_eq!(sq.coeff(2), 1);
        assert_eq!(sq.coeff(0), 3);
        assert_eq!(sq.div_exact(&b), b);
    }

    #[test]
    fn determinant_small() {
        let t = LaurentPoly::monomial(1, 1);
        let one = LaurentPoly::one();
        let m = vec![
            vec![t.clone(), one.clone()],
            vec![one.clone(), t.clone()],
        ];
        let d = determinant(m);
        // t^2 - 1
        assert_eq!(d.coeff(2), 1);
        assert_eq!(d.coeff(0), -1);
    }

    #[test]
    fn unknot_alexander() {
        let pd = PlanarDiagram::unknot();
        assert_eq!(alexander(&pd).unwrap(), LaurentPoly::one());
        assert_eq!(c2(&pd).unwrap(), 0);
    }

    #[test]
    fn kink_is_unknot() {
        let (g, pd) = braid_closure(2, &[(1, 1)]).unwrap();
        assert_eq!(g.canonical_key(), "O1+ U1+");
        assert_eq!(alexander(&pd).unwrap(), LaurentPoly::one());
        assert_eq!(c2(&pd).unwrap(), 0);
    }

    #[test]
    fn trefoil_alexander_and_c2() {
        let (g, pd) = braid_closure(2, &[(1, 1), (1, 1), (1, 1)]).unwrap();
        assert_eq!(g.canonical_key(), "O1+ U2+ O3+ U1+ O2+ U3+");
        let delta = alexander(&pd).unwrap();
        assert_eq!(delta.to_string_pretty(), "t-1+t^-1");
        assert_eq!(c2(&pd).unwrap(), 1);
    }

    #[test]
    fn figure_eight_alexander_and_c2() {
        let (_, pd) = braid_closure(3, &[(1, 1), (2, -1), (1, 1), (2, -1)]).unwrap();
        let delta = alexander(&pd).unwrap();
        assert_eq!(delta.to_string_pretty(), "-t+3-t^-1");
        assert_eq!(c2(&pd).unwrap(), -1);
    }

    #[test]
    fn mirror_trefoil_c2() {
        let (_, pd) = braid_closure(2, &[(1, -1), (1, -1), (1, -1)]).unwrap();
        assert_eq!(c2(&pd).unwrap(), 1);
    }

    #[test]
    fn singular_resolution_on_planar_kink() {
        // one double crossing: nu(over) - nu(under); both are unknots here
        let (_, mut pd) = braid_closure(2, &[(1, 1), (1, 1), (1, 1)]).unwrap();
        pd.crossings[0].kind = ChordKind::Double;
        let nu = c2_invariant();
        let over = {
            let mut p = pd.clone();
            p.crossings[0].kind = ChordKind::Real;
            p
        };
        let under = pd.switch_crossing(0);
        assert_eq!(
            eval_singular_pd(&pd, &nu).unwrap(),
            c2(&over).unwrap() - c2(&under).unwrap()
        );
    }
}
