//! Truncated free associative algebra over `Q` on the alphabet `{a, b}`:
//! the oracle substrate for the BCH series. `log(exp(a) exp(b))` is expanded
//! here with exact rationals and then projected onto Hall coordinates by an
//! exact linear solve.

use crate::error::{Error, Result};
use crate::hall::{HallBasis, HallNode};
use crate::padic::PRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse polynomial on words over a two-letter alphabet, truncated at a
/// maximum word length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAssocPoly {
    max_len: usize,
    terms: BTreeMap<Vec<u8>, BigRational>,
}

impl FreeAssocPoly {
    pub fn zero(max_len: usize) -> Self {
        FreeAssocPoly {
            max_len,
            terms: BTreeMap::new(),
        }
    }

    pub fn letter(l: u8, max_len: usize) -> Self {
        let mut p = Self::zero(max_len);
        p.add_term(vec![l], BigRational::one());
        p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, BigRational> {
        &self.terms
    }

    pub fn add_term(&mut self, word: Vec<u8>, coeff: BigRational) {
        if coeff.is_zero() || word.len() > self.max_len {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &FreeAssocPoly) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn scaled(&self, s: &BigRational) -> FreeAssocPoly {
        let mut out = Self::zero(self.max_len);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &FreeAssocPoly) -> FreeAssocPoly {
        let mut out = Self::zero(self.max_len);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if w1.len() + w2.len() > self.max_len {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The part of the polynomial supported on words of a fixed length.
    pub fn graded_part(&self, len: usize) -> BTreeMap<Vec<u8>, BigRational> {
        self.terms
            .iter()
            .filter(|(w, _)| w.len() == len)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }
}

fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    f
}

/// `log(exp(a) exp(b))` truncated at word length `c`, exactly.
pub fn log_exp_a_exp_b(c: usize) -> FreeAssocPoly {
    // P - 1 where P = exp(a) exp(b): words a^i b^j with coefficient
    // 1/(i! j!), excluding (i, j) = (0, 0)
    let mut p_minus_one = FreeAssocPoly::zero(c);
    for i in 0..=c {
        for j in 0..=(c - i) {
            if i + j == 0 {
                continue;
            }
            let mut w = vec![0u8; i];
            w.extend(vec![1u8; j]);
            let denom = factorial(i as u64) * factorial(j as u64);
            p_minus_one.add_term(w, BigRational::new(BigInt::one(), denom));
        }
    }
    // log(1 + X) = sum_{k>=1} (-1)^{k+1} X^k / k; X has no constant term so
    // powers beyond c vanish
    let mut log = FreeAssocPoly::zero(c);
    let mut power = p_minus_one.clone();
    for k in 1..=c {
        let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        let coeff = BigRational::new(sign, BigInt::from(k));
        log.add_assign(&power.scaled(&coeff));
        if k < c {
            power = power.mul(&p_minus_one);
        }
    }
    log
}

/// Expansion of a Hall basis element into the associative algebra:
/// generators become single letters, `[u, v]` becomes `uv - vu`.
pub fn hall_expansion(basis: &HallBasis, idx: usize, max_len: usize) -> FreeAssocPoly {
    match basis.node(idx) {
        HallNode::Generator(g) => FreeAssocPoly::letter((g - 1) as u8, max_len),
        HallNode::Pair { left, right } => {
            let u = hall_expansion(basis, left as usize, max_len);
            let v = hall_expansion(basis, right as usize, max_len);
            let mut out = u.mul(&v);
            let vu = v.mul(&u);
            out.add_assign(&vu.scaled(&-BigRational::one()));
            out
        }
    }
}

/// Solve for the Hall coordinates of the weight-`w` graded part of a Lie
/// element given in the associative algebra. The element must lie in the
/// Lie span; the exact rational system is solved by Gaussian elimination
/// and checked for consistency.
pub fn project_graded_to_hall(
    z: &FreeAssocPoly,
    basis: &HallBasis,
    w: u32,
) -> Result<Vec<(usize, PRational)>> {
    let target = z.graded_part(w as usize);
    let hall_ids: Vec<usize> = basis.weight_range(w).collect();
    if hall_ids.is_empty() {
        if target.is_empty() {
            return Ok(Vec::new());
        }
        return Err(Error::Internal(
            "graded part nonzero but no Hall monomials at that weight".into(),
        ));
    }
    // collect the word support
    let mut words: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let expansions: Vec<FreeAssocPoly> = hall_ids
        .iter()
        .map(|&h| hall_expansion(basis, h, w as usize))
        .collect();
    for e in &expansions {
        for w_ in e.terms().keys() {
            let next = words.len();
            words.entry(w_.clone()).or_insert(next);
        }
    }
    for w_ in target.keys() {
        let next = words.len();
        words.entry(w_.clone()).or_insert(next);
    }
    let rows = words.len();
    let cols = hall_ids.len();
    // dense augmented matrix [A | b]
    let mut a = vec![vec![BigRational::zero(); cols + 1]; rows];
    for (col, e) in expansions.iter().enumerate() {
        for (word, c) in e.terms() {
            a[words[word]][col] = c.clone();
        }
    }
    for (word, c) in &target {
        a[words[word]][cols] = c.clone();
    }
    // exact Gaussian elimination
    let mut pivot_row = 0usize;
    let mut pivot_cols = Vec::new();
    for col in 0..cols {
        let Some(r) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, r);
        let inv = a[pivot_row][col].recip();
        for x in a[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r2 in 0..rows {
            if r2 != pivot_row && !a[r2][col].is_zero() {
                let f = a[r2][col].clone();
                for cx in 0..=cols {
                    let sub = &a[pivot_row][cx] * &f;
                    a[r2][cx] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    // consistency: rows below the pivots must have zero target
    for r in a.iter().skip(pivot_row) {
        if !r[cols].is_zero() {
            return Err(Error::Internal(
                "associative element does not lie in the Lie span".into(),
            ));
        }
    }
    // unique solution expected: every column must be a pivot column
    if pivot_cols.len() != cols {
        return Err(Error::Internal(
            "Hall expansions are not independent".into(),
        ));
    }
    let mut out = Vec::new();
    for (rank, &col) in pivot_cols.iter().enumerate() {
        let coeff = a[rank][cols].clone();
        if !coeff.is_zero() {
            out.push((hall_ids[col], coeff));
        }
    }
    Ok(out)
}
