//! Hall basis of the free nilpotent Lie algebra on `d` generators of class
//! `c`, and rewriting of arbitrary bracket expressions into integer Hall
//! coordinates.
//!
//! The total order is weight-ascending, then recursive-lexicographic on the
//! bracket structure. A pair `[u, v]` is a Hall element iff `u > v` and,
//! when `u = [a, b]`, additionally `b <= v`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

pub const DEFAULT_BASIS_CAP: u64 = 10_000;

/// One basis monomial: a generator, or a Hall pair of earlier basis entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HallNode {
    Generator(u32),
    Pair { left: u32, right: u32 },
}

/// Hall basis through weight `c`, with a memoized pairwise bracket table.
/// Immutable after generation; concurrent `bracket_reduce` calls are safe.
pub struct HallBasis {
    d: u32,
    c: u32,
    nodes: Vec<HallNode>,
    weights: Vec<u32>,
    weight_start: Vec<usize>,
    pair_index: HashMap<(u32, u32), u32>,
    memo: Arc<RwLock<HashMap<(u32, u32), Arc<IntCombination>>>>,
}

impl std::fmt::Debug for HallBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HallBasis(d={}, c={}, size={})", self.d, self.c, self.nodes.len())
    }
}

/// Number of weight-`n` Hall elements on `d` generators:
/// `(1/n) * sum_{k|n} mu(k) d^{n/k}`.
pub fn witt_dimension(d: u64, n: u64) -> u64 {
    assert!(d >= 1 && n >= 1);
    let mut total: i128 = 0;
    for k in 1..=n {
        if n % k != 0 {
            continue;
        }
        let mu = mobius(k);
        if mu == 0 {
            continue;
        }
        let power = (d as i128).checked_pow((n / k) as u32).expect("witt dimension overflow");
        total += mu as i128 * power;
    }
    debug_assert!(total >= 0 && total % n as i128 == 0);
    (total / n as i128) as u64
}

fn mobius(mut n: u64) -> i64 {
    let mut primes = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn generate_hall_basis(d: u32, c: u32) -> Result<HallBasis> {
    generate_hall_basis_capped(d, c, DEFAULT_BASIS_CAP)
}

pub fn generate_hall_basis_capped(d: u32, c: u32, cap: u64) -> Result<HallBasis> {
    assert!(d >= 1 && c >= 1);
    let expected: u64 = (1..=c as u64).map(|n| witt_dimension(d as u64, n)).sum();
    if expected > cap {
        return Err(Error::SizeLimitExceeded {
            what: "hall basis",
            needed: expected,
            cap,
        });
    }

    let mut nodes: Vec<HallNode> = Vec::new();
    let mut weights: Vec<u32> = Vec::new();
    let mut weight_start = vec![0usize; c as usize + 2];
    for g in 0..d {
        nodes.push(HallNode::Generator(g + 1));
        weights.push(1);
    }
    weight_start[1] = 0;
    weight_start[2] = d as usize;

    for w in 2..=c {
        let mut fresh: Vec<(u32, u32)> = Vec::new();
        for wl in 1..w {
            let wr = w - wl;
            for u in weight_start[wl as usize]..weight_start[wl as usize + 1] {
                for v in weight_start[wr as usize]..weight_start[wr as usize + 1] {
                    if u <= v {
                        continue; // order is the index order
                    }
                    let ok = match nodes[u] {
                        HallNode::Generator(_) => true,
                        HallNode::Pair { right, .. } => (right as usize) <= v,
                    };
                    if ok {
                        fresh.push((u as u32, v as u32));
                    }
                }
            }
        }
        // recursive-lex order within the weight block
        fresh.sort();
        for (l, r) in fresh {
            nodes.push(HallNode::Pair { left: l, right: r });
            weights.push(w);
        }
        weight_start[w as usize + 1] = nodes.len();
    }

    debug_assert_eq!(nodes.len() as u64, expected);
    let mut pair_index = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if let HallNode::Pair { left, right } = n {
            pair_index.insert((*left, *right), i as u32);
        }
    }
    Ok(HallBasis {
        d,
        c,
        nodes,
        weights,
        weight_start,
        pair_index,
        memo: Arc::new(RwLock::new(HashMap::new())),
    })
}

impl HallBasis {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn class(&self) -> u32 {
        self.c
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn node(&self, i: usize) -> HallNode {
        self.nodes[i]
    }

    /// Indices of the basis elements of a given weight.
    pub fn weight_range(&self, w: u32) -> std::ops::Range<usize> {
        self.weight_start[w as usize]..self.weight_start[w as usize + 1]
    }

    pub fn weight_profile(&self) -> Vec<usize> {
        (1..=self.c).map(|w| self.weight_range(w).len()).collect()
    }

    /// Nested bracket string, e.g. `[[x2,x1],x1]`.
    pub fn display(&self, i: usize) -> String {
        let names: Vec<String> = (1..=self.d).map(|g| format!("x{g}")).collect();
        self.display_with(i, &names)
    }

    pub fn display_with(&self, i: usize, names: &[String]) -> String {
        let mut s = String::new();
        self.write_node(i, names, &mut s);
        s
    }

    fn write_node(&self, i: usize, names: &[String], out: &mut String) {
        match self.nodes[i] {
            HallNode::Generator(g) => {
                let _ = write!(out, "{}", names[(g - 1) as usize]);
            }
            HallNode::Pair { left, right } => {
                out.push('[');
                self.write_node(left as usize, names, out);
                out.push(',');
                self.write_node(right as usize, names, out);
                out.push(']');
            }
        }
    }

    /// Bracket of two basis elements in Hall coordinates, memoized.
    /// Brackets of weight above the class truncate to zero.
    pub fn basis_bracket(&self, u: usize, v: usize) -> Arc<IntCombination> {
        if u == v {
            return Arc::new(IntCombination::zero());
        }
        if u < v {
            return Arc::new(self.basis_bracket(v, u).neg());
        }
        if self.weights[u] + self.weights[v] > self.c {
            return Arc::new(IntCombination::zero());
        }
        let key = (u as u32, v as u32);
        if let Some(hit) = self.memo.read().expect("memo poisoned").get(&key) {
            return hit.clone();
        }
        let result = self.compute_pair(u, v);
        let arc = Arc::new(result);
        self.memo
            .write()
            .expect("memo poisoned")
            .insert(key, arc.clone());
        arc
    }

    fn compute_pair(&self, u: usize, v: usize) -> IntCombination {
        debug_assert!(u > v);
        let is_hall = match self.nodes[u] {
            HallNode::Generator(_) => true,
            HallNode::Pair { right, .. } => (right as usize) <= v,
        };
        if is_hall {
            let idx = *self
                .pair_index
                .get(&(u as u32, v as u32))
                .expect("hall pair must exist in the generated basis");
            return IntCombination::basis(idx as usize);
        }
        // u = [a, b] with b > v: [[a,b],v] = [[a,v],b] + [a,[b,v]]
        let (a, b) = match self.nodes[u] {
            HallNode::Pair { left, right } => (left as usize, right as usize),
            HallNode::Generator(_) => unreachable!(),
        };
        let av = self.basis_bracket(a, v);
        let mut acc = self.bracket_comb_elem(&av, b);
        let bv = self.basis_bracket(b, v);
        acc.add_assign(&self.bracket_elem_comb(a, &bv));
        acc
    }

    fn bracket_comb_elem(&self, comb: &IntCombination, e: usize) -> IntCombination {
        let mut acc = IntCombination::zero();
        for (&t, coeff) in comb.iter() {
            let br = self.basis_bracket(t, e);
            acc.add_scaled(&br, coeff);
        }
        acc
    }

    fn bracket_elem_comb(&self, e: usize, comb: &IntCombination) -> IntCombination {
        let mut acc = IntCombination::zero();
        for (&t, coeff) in comb.iter() {
            let br = self.basis_bracket(e, t);
            acc.add_scaled(&br, coeff);
        }
        acc
    }
}

/// Bilinear bracket of two integer Hall combinations, truncated at the
/// basis class.
pub fn bracket_reduce(a: &IntCombination, b: &IntCombination, basis: &HallBasis) -> IntCombination {
    let mut acc = IntCombination::zero();
    for (&u, cu) in a.iter() {
        for (&v, cv) in b.iter() {
            let br = basis.basis_bracket(u, v);
            if br.is_zero() {
                continue;
            }
            acc.add_scaled(&br, &(cu * cv));
        }
    }
    acc
}

/// Sparse integer combination of Hall basis elements. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCombination {
    terms: BTreeMap<usize, BigInt>,
}

impl IntCombination {
    pub fn zero() -> Self {
        IntCombination {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(i, BigInt::one());
        IntCombination { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut c = Self::zero();
        for (i, x) in terms {
            c.add_term(i, &x);
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: usize) -> BigInt {
        self.terms.get(&i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, i: usize, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(i).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn add_assign(&mut self, other: &IntCombination) {
        for (&i, c) in other.iter() {
            self.add_term(i, c);
        }
    }

    pub fn add_scaled(&mut self, other: &IntCombination, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (&i, c) in other.iter() {
            self.add_term(i, &(c * scale));
        }
    }

    pub fn neg(&self) -> IntCombination {
        IntCombination {
            terms: self.terms.iter().map(|(&i, c)| (i, -c)).collect(),
        }
    }

    /// Largest absolute coefficient, for overflow sanity checks in tests.
    pub fn max_abs(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn witt_examples() {
        assert_eq!(witt_dimension(2, 3), 2);
        assert_eq!(witt_dimension(3, 2), 3);
        for d in 1..6 {
            assert_eq!(witt_dimension(d, 1), d);
        }
        assert_eq!(witt_dimension(2, 4), 3);
        assert_eq!(witt_dimension(2, 5), 6);
    }

    #[test]
    fn basis_d2_c2() {
        let b = generate_hall_basis(2, 2).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.display(0), "x1");
        assert_eq!(b.display(1), "x2");
        assert_eq!(b.display(2), "[x2,x1]");
    }

    #[test]
    fn basis_d1_is_abelian() {
        let b = generate_hall_basis(1, 3).unwrap();
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn basis_d2_c5_profile() {
        let b = generate_hall_basis(2, 5).unwrap();
        assert_eq!(b.len(), 14);
        assert_eq!(b.weight_profile(), vec![2, 1, 2, 3, 6]);
    }

    #[test]
    fn basis_size_matches_witt_sum_and_bound() {
        for d in 2..4u32 {
            for c in 1..5u32 {
                let b = generate_hall_basis(d, c).unwrap();
                let witt: u64 = (1..=c as u64).map(|n| witt_dimension(d as u64, n)).sum();
                assert_eq!(b.len() as u64, witt);
                let bound = ((d as u64).pow(c + 1) - d as u64) / (d as u64 - 1);
                assert!(b.len() as u64 <= bound);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = generate_hall_basis_capped(5, 8, 100).unwrap_err();
        assert!(matches!(err, Error::SizeLimitExceeded { .. }));
    }

    #[test]
    fn bracket_examples() {
        let b = generate_hall_basis(2, 2).unwrap();
        let x1 = IntCombination::basis(0);
        let x2 = IntCombination::basis(1);
        assert!(bracket_reduce(&x1, &x1, &b).is_zero());
        let x2x1 = bracket_reduce(&x2, &x1, &b);
        assert_eq!(x2x1, IntCombination::basis(2));
        let x1x2 = bracket_reduce(&x1, &x2, &b);
        assert_eq!(x1x2, IntCombination::basis(2).neg());
    }

    fn random_combination(rng: &mut ChaCha8Rng, basis: &HallBasis, weight: u32) -> IntCombination {
        let mut c = IntCombination::zero();
        for i in basis.weight_range(weight) {
            let coeff = rng.gen_range(-4i64..=4);
            c.add_term(i, &BigInt::from(coeff));
        }
        c
    }

    #[test]
    fn antisymmetry_on_random_combinations() {
        let basis = generate_hall_basis(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let w = rng.gen_range(1..=2u32);
            let a = random_combination(&mut rng, &basis, w);
            assert!(bracket_reduce(&a, &a, &basis).is_zero());
        }
    }

    #[test]
    fn jacobi_on_random_triples() {
        let basis = generate_hall_basis(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            // weights summing to at most the class, so truncation is inert
            let wa = rng.gen_range(1..=2u32);
            let wb = rng.gen_range(1..=(4 - wa).min(2));
            let wc = 5 - wa - wb;
            let a = random_combination(&mut rng, &basis, wa);
            let b = random_combination(&mut rng, &basis, wb);
            let c = random_combination(&mut rng, &basis, wc.max(1));
            let mut sum = bracket_reduce(&a, &bracket_reduce(&b, &c, &basis), &basis);
            sum.add_assign(&bracket_reduce(&c, &bracket_reduce(&a, &b, &basis), &basis));
            sum.add_assign(&bracket_reduce(&b, &bracket_reduce(&c, &a, &basis), &basis));
            assert!(sum.is_zero(), "jacobi violated at weights ({wa},{wb},{wc})");
        }
    }

    #[test]
    fn bracket_is_weight_graded() {
        let basis = generate_hall_basis(2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let wa = rng.gen_range(1..=4u32);
            let wb = rng.gen_range(1..=4u32);
            let a = random_combination(&mut rng, &basis, wa);
            let b = random_combination(&mut rng, &basis, wb);
            let br = bracket_reduce(&a, &b, &basis);
            if wa + wb > 5 {
                assert!(br.is_zero());
            } else {
                for (&i, _) in br.iter() {
                    assert_eq!(basis.weight(i), wa + wb);
                }
            }
        }
    }

    #[test]
    fn concurrent_bracket_reduce_is_consistent() {
        let basis = std::sync::Arc::new(generate_hall_basis(2, 6).unwrap());
        let mut handles = Vec::new();
        for t in 0..4 {
            let b = basis.clone();
            handles.push(std::thread::spawn(move || {
                let x1 = IntCombination::basis(t % 2);
                let x2 = IntCombination::basis((t + 1) % 2);
                let mut acc = bracket_reduce(&x1, &x2, &b);
                for _ in 0..4 {
                    acc = bracket_reduce(&acc, &x2, &b);
                }
                acc
            }));
        }
        let results: Vec<IntCombination> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert_eq!(results[0], results[2]);
        assert_eq!(results[1], results[3]);
    }
}
