use super::{FiniteLieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::padic::{howell_form, span_intersection, HowellForm, ResidueMatrix};
use num_bigint::BigUint;
use num_traits::Zero;

/// A subgroup of the additive module of a [`FiniteLieAlgebra`], held as the
/// Howell form of its pullback to `(Z/p^E)^n`. The pullback always contains
/// the coordinate relations `p^{e_i} u_i`, so two sublattices are equal as
/// subgroups iff their Howell forms are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct Sublattice {
    howell: HowellForm,
}

impl std::fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Sublattice{:?}", self.howell)
    }
}

fn relation_rows(alg: &FiniteLieAlgebra) -> Vec<Vec<BigUint>> {
    let n = alg.dim();
    let e_top = alg.modulus().exponent();
    let mut rows = Vec::new();
    for (i, &e) in alg.orders().iter().enumerate() {
        if e < e_top {
            let mut r = vec![BigUint::zero(); n];
            r[i] = alg.modulus().p_pow(e);
            rows.push(r);
        }
    }
    rows
}

impl Sublattice {
    /// Smallest sublattice containing the given coordinate vectors.
    pub fn span(alg: &FiniteLieAlgebra, rows: &[Vec<BigUint>]) -> Sublattice {
        let n = alg.dim();
        let mut all = relation_rows(alg);
        for r in rows {
            assert_eq!(r.len(), n, "generator has wrong length");
            all.push(r.clone());
        }
        let m = ResidueMatrix::from_rows(alg.modulus().clone(), n, all);
        Sublattice {
            howell: howell_form(&m),
        }
    }

    pub fn span_elements(alg: &FiniteLieAlgebra, elems: &[LieElement]) -> Sublattice {
        let rows: Vec<Vec<BigUint>> = elems.iter().map(|e| e.coords().to_vec()).collect();
        Sublattice::span(alg, &rows)
    }

    pub fn zero(alg: &FiniteLieAlgebra) -> Sublattice {
        Sublattice::span(alg, &[])
    }

    pub fn full(alg: &FiniteLieAlgebra) -> Sublattice {
        let n = alg.dim();
        let rows: Vec<Vec<BigUint>> = (0..n)
            .map(|i| {
                let mut r = vec![BigUint::zero(); n];
                r[i] = BigUint::from(1u32);
                r
            })
            .collect();
        Sublattice::span(alg, &rows)
    }

    pub fn howell(&self) -> &HowellForm {
        &self.howell
    }

    /// Generating rows (the saturated Howell rows, in parent coordinates).
    pub fn rows(&self) -> Vec<Vec<BigUint>> {
        self.howell.matrix().iter_rows().map(|r| r.to_vec()).collect()
    }

    pub fn contains(&self, v: &[BigUint]) -> bool {
        self.howell.contains(v)
    }

    pub fn contains_element(&self, e: &LieElement) -> bool {
        self.howell.contains(e.coords())
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other
            .howell
            .matrix()
            .iter_rows()
            .all(|r| self.howell.contains(r))
    }

    /// `log_p` of the number of elements, as a subgroup of the algebra
    /// module (relation rows discounted).
    pub fn log_size(&self, alg: &FiniteLieAlgebra) -> u64 {
        let rel_log: u64 = alg
            .orders()
            .iter()
            .map(|&e| (alg.modulus().exponent() - e) as u64)
            .sum();
        self.howell.log_span_size() - rel_log
    }

    /// `log_p` of the index in the whole algebra.
    pub fn index_log(&self, alg: &FiniteLieAlgebra) -> u64 {
        alg.log_size() - self.log_size(alg)
    }

    pub fn is_zero(&self, alg: &FiniteLieAlgebra) -> bool {
        self.log_size(alg) == 0
    }

    pub fn is_full(&self, alg: &FiniteLieAlgebra) -> bool {
        self.log_size(alg) == alg.log_size()
    }

    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        let stacked = self.howell.matrix().vstack(other.howell.matrix());
        Sublattice {
            howell: howell_form(&stacked),
        }
    }

    pub fn intersect(&self, other: &Sublattice) -> Sublattice {
        Sublattice {
            howell: span_intersection(self.howell.matrix(), other.howell.matrix()),
        }
    }

    /// Image under multiplication by `p^k`.
    pub fn p_scaled(&self, alg: &FiniteLieAlgebra, k: u32) -> Sublattice {
        let p = alg.modulus().p_pow(k);
        let rows: Vec<Vec<BigUint>> = self
            .howell
            .matrix()
            .iter_rows()
            .map(|r| r.iter().map(|x| alg.modulus().mul(x, &p)).collect())
            .collect();
        Sublattice::span(alg, &rows)
    }

    /// Additive span of brackets `[self, other]`; by bilinearity the
    /// generator-level brackets span the whole set.
    pub fn bracket_span(&self, alg: &FiniteLieAlgebra, other: &Sublattice) -> Sublattice {
        let mut rows = Vec::new();
        for a in self.howell.matrix().iter_rows() {
            for b in other.howell.matrix().iter_rows() {
                let br = alg.bracket_raw(a, b);
                if !br.is_zero() {
                    rows.push(br.into_coords());
                }
            }
        }
        Sublattice::span(alg, &rows)
    }

    /// Brackets of generators with all basis elements stay inside the span.
    pub fn is_ideal(&self, alg: &FiniteLieAlgebra) -> bool {
        self.ideal_violation(alg).is_none()
    }

    fn ideal_violation(&self, alg: &FiniteLieAlgebra) -> Option<(usize, usize)> {
        for (gi, g) in self.howell.matrix().iter_rows().enumerate() {
            for j in 0..alg.dim() {
                let br = alg.bracket_raw(g, alg.basis_element(j).coords());
                if !self.contains(br.coords()) {
                    return Some((gi, j));
                }
            }
        }
        None
    }

    pub fn require_ideal(&self, alg: &FiniteLieAlgebra) -> Result<()> {
        match self.ideal_violation(alg) {
            None => Ok(()),
            Some((generator, basis)) => Err(Error::NotAnIdeal { generator, basis }),
        }
    }

    /// Is the lattice closed under the bracket (a subalgebra)?
    pub fn is_subalgebra(&self, alg: &FiniteLieAlgebra) -> bool {
        let rows = self.rows();
        for a in &rows {
            for b in &rows {
                let br = alg.bracket_raw(a, b);
                if !self.contains(br.coords()) {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical representative of the coset `v + self`.
    pub fn coset_representative(&self, v: &[BigUint]) -> Vec<BigUint> {
        self.howell.coset_representative(v)
    }

    /// Enumerate all elements (as subgroup members), for desk-scale work.
    pub fn elements(&self, alg: &FiniteLieAlgebra, cap_log: u64) -> Result<Vec<LieElement>> {
        let log = self.log_size(alg);
        if log > cap_log {
            return Err(Error::TooLargeForExhaustive {
                log_order: log,
                cap: cap_log,
            });
        }
        let md = alg.modulus();
        let matrix = self.howell.matrix();
        let pivots = self.howell.pivots();
        // each Howell row contributes coefficients 0..p^{E-v}; the set of all
        // combinations enumerates the span without repetition
        let mut out: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); alg.dim()]];
        for (t, piv) in pivots.iter().enumerate() {
            let count_log = md.exponent() - piv.val;
            let count = md.p_pow(count_log);
            let row = matrix.row(t);
            let mut next = Vec::new();
            let mut c = BigUint::zero();
            let mut scaled_rows: Vec<Vec<BigUint>> = Vec::new();
            while &c < &count {
                scaled_rows.push(row.iter().map(|x| md.mul(&c, x)).collect());
                c += 1u32;
            }
            for base in &out {
                for s in &scaled_rows {
                    let v: Vec<BigUint> = base
                        .iter()
                        .zip(s.iter())
                        .map(|(a, b)| md.add(a, b))
                        .collect();
                    next.push(v);
                }
            }
            out = next;
        }
        // reduce into element coordinates and dedupe (relation rows collapse)
        let mut set = std::collections::BTreeSet::new();
        for v in out {
            set.insert(alg.element_from_residues(v).into_coords());
        }
        Ok(set
            .into_iter()
            .map(|coords| alg.element_from_residues(coords))
            .collect())
    }
}

/// `[I, _i L]`: `i` successive generator-bracket closures with Howell
/// reduction after each step. The input must be an ideal.
pub fn iterated_bracket_ideal(
    alg: &FiniteLieAlgebra,
    ideal: &Sublattice,
    i: u32,
) -> Result<Sublattice> {
    ideal.require_ideal(alg)?;
    let full = Sublattice::full(alg);
    let mut current = ideal.clone();
    for _ in 0..i {
        current = current.bracket_span(alg, &full);
    }
    Ok(current)
}

/// Smallest subalgebra containing the given elements: fixed-point iteration
/// of bracket closure plus Howell reduction. Terminates because spans grow
/// strictly inside a finite module.
pub fn subalgebra_generated(alg: &FiniteLieAlgebra, elems: &[LieElement]) -> Sublattice {
    let mut current = Sublattice::span_elements(alg, elems);
    loop {
        let next = current.sum(&current.bracket_span(alg, &current));
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Smallest ideal containing the given elements.
pub fn ideal_closure(alg: &FiniteLieAlgebra, elems: &[LieElement]) -> Sublattice {
    let full = Sublattice::full(alg);
    let mut current = Sublattice::span_elements(alg, elems);
    loop {
        let next = current.sum(&current.bracket_span(alg, &full));
        if next == current {
            return current;
        }
        current = next;
    }
}
