//! Dynkin's combinatorial form of the BCH series, used as an independent
//! recomputation of the oracle route. Each term is a right-nested bracket
//! of a word `a^{r_1} b^{s_1} ... a^{r_n} b^{s_n}`, rewritten into Hall
//! coordinates by the rewriting engine rather than a linear solve.

use crate::error::Result;
use crate::hall::{bracket_reduce, HallBasis, IntCombination};
use crate::padic::PRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    f
}

/// Right-nested bracketing `[w_1, [w_2, [..., [w_{m-1}, w_m]...]]]` of a
/// letter word, in Hall coordinates.
fn right_nested(word: &[usize], basis: &HallBasis) -> IntCombination {
    let mut comb = IntCombination::basis(word[word.len() - 1]);
    for &letter in word[..word.len() - 1].iter().rev() {
        comb = bracket_reduce(&IntCombination::basis(letter), &comb, basis);
    }
    comb
}

/// The class-`c` BCH series by Dynkin's formula, on the given two-generator
/// Hall basis. Terms are returned sorted by basis index.
pub fn dynkin_series(c: u32, basis: &HallBasis) -> Result<Vec<(usize, PRational)>> {
    assert_eq!(basis.d(), 2, "Dynkin series is binary");
    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
    // blocks (r_i, s_i) with r_i + s_i >= 1, total weight m <= c
    let mut blocks: Vec<(u64, u64)> = Vec::new();
    enumerate_blocks(c as u64, 0, &mut blocks, &mut |blocks: &[(u64, u64)]| {
        let n = blocks.len() as u64;
        let m: u64 = blocks.iter().map(|&(r, s)| r + s).sum();
        let mut word = Vec::new();
        for &(r, s) in blocks {
            word.extend(std::iter::repeat(0usize).take(r as usize));
            word.extend(std::iter::repeat(1usize).take(s as usize));
        }
        let nested = right_nested(&word, basis);
        if nested.is_zero() {
            return;
        }
        let mut denom = BigInt::from(n) * BigInt::from(m);
        for &(r, s) in blocks {
            denom *= factorial(r) * factorial(s);
        }
        let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        let scale = BigRational::new(sign, denom);
        for (&idx, coeff) in nested.iter() {
            let entry = acc.entry(idx).or_insert_with(BigRational::zero);
            *entry += &scale * BigRational::from(coeff.clone());
        }
    });
    Ok(acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

fn enumerate_blocks(
    budget: u64,
    used: u64,
    blocks: &mut Vec<(u64, u64)>,
    visit: &mut impl FnMut(&[(u64, u64)]),
) {
    if !blocks.is_empty() {
        visit(blocks);
    }
    // append one more block (r, s) with r + s >= 1 within the budget
    for r in 0..=(budget - used) {
        for s in 0..=(budget - used - r) {
            if r + s == 0 {
                continue;
            }
            blocks.push((r, s));
            enumerate_blocks(budget, used + r + s, blocks, visit);
            blocks.pop();
        }
    }
}
