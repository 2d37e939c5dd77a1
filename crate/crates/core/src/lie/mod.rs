//! Finite nilpotent `Z_p`-Lie algebras as first-class values: structure
//! constants on a basis with prime-power orders, sublattices and ideals,
//! characteristic series, predicates, quotients, and the cover construction
//! behind the omega-extension property.

mod cover;
mod lattice;
mod present;
mod quotient;

pub use cover::{omega_extension_cover, CoverWitness, FreePresentation};
pub use lattice::{ideal_closure, iterated_bracket_ideal, subalgebra_generated, Sublattice};
pub use present::{
    enumerate_sublattices, fingerprint, present_sublattice, rank_sectional,
    rank_sectional_exact, sublattice_min_generators, verify_isomorphism, Fingerprint,
    RankValue, SubPresentation,
};
pub use quotient::{quotient, QuotientMap};

use crate::error::{Error, Result};
use crate::padic::Modulus;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::fmt;

/// An element, held as a coordinate vector with coordinate `i` reduced
/// modulo `p^{e_i}` of its parent algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieElement {
    coords: Vec<BigUint>,
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

impl LieElement {
    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigUint> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Structure constants of a finite nilpotent `Z_p`-Lie algebra on a basis
/// with additive orders `p^{e_1} >= ... >= p^{e_n}`.
///
/// The full `n x n` table is stored; the upper-triangular constructor fills
/// the lower half by antisymmetry, while [`FiniteLieAlgebra::from_full_table`]
/// accepts both halves so that [`check_axioms`] can exhibit violations.
#[derive(Clone)]
pub struct FiniteLieAlgebra {
    modulus: Modulus,
    orders: Vec<u32>,
    /// `table[i * n + j]` holds the sparse coordinates of `[b_i, b_j]`,
    /// entry `(k, c)` meaning coefficient `c` on `b_k`, reduced mod `p^{e_k}`.
    table: Vec<Vec<(usize, BigUint)>>,
}

impl fmt::Debug for FiniteLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteLieAlgebra(p={}, orders={:?})",
            self.modulus.p(),
            self.orders
        )
    }
}

/// Outcome of the exhaustive axiom validator.
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub antisymmetry_violations: Vec<(usize, usize)>,
    pub jacobi_violations: Vec<(usize, usize, usize)>,
    pub well_defined_violations: Vec<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry_violations.is_empty()
            && self.jacobi_violations.is_empty()
            && self.well_defined_violations.is_empty()
    }
}

impl FiniteLieAlgebra {
    /// Build from brackets given only for `i < j`; antisymmetry holds by
    /// construction.
    pub fn new(
        modulus: Modulus,
        orders: Vec<u32>,
        brackets: &[((usize, usize), Vec<(usize, BigInt)>)],
    ) -> Result<Self> {
        let n = orders.len();
        let mut full: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); n * n];
        for ((i, j), terms) in brackets {
            if *i >= *j {
                return Err(Error::Schema(format!(
                    "bracket pair ({i},{j}) must satisfy i < j"
                )));
            }
            full[i * n + j] = terms.clone();
            full[j * n + i] = terms.iter().map(|(k, c)| (*k, -c)).collect();
        }
        Self::from_full_table(modulus, orders, full)
    }

    /// Build from a full `n x n` table (row-major, sparse entries). No axiom
    /// is enforced here; run [`check_axioms`] to validate.
    pub fn from_full_table(
        modulus: Modulus,
        orders: Vec<u32>,
        full: Vec<Vec<(usize, BigInt)>>,
    ) -> Result<Self> {
        let n = orders.len();
        if full.len() != n * n {
            return Err(Error::Schema("bracket table has wrong shape".into()));
        }
        for w in orders.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Schema(
                    "orders must be non-increasing".into(),
                ));
            }
        }
        for &e in &orders {
            if e == 0 {
                return Err(Error::Schema("orders must be at least p^1".into()));
            }
            if e > modulus.exponent() {
                return Err(Error::Schema(
                    "order exceeds the working modulus exponent".into(),
                ));
            }
        }
        let mut table: Vec<Vec<(usize, BigUint)>> = vec![Vec::new(); n * n];
        for (pos, terms) in full.iter().enumerate() {
            let mut sparse = Vec::new();
            for (k, c) in terms {
                if *k >= n {
                    return Err(Error::Schema(format!("bracket target {k} out of range")));
                }
                let md_k = modulus.with_exponent(orders[*k]);
                let red = md_k.reduce_int(c);
                if !red.is_zero() {
                    sparse.push((*k, red));
                }
            }
            sparse.sort_by_key(|(k, _)| *k);
            table[pos] = sparse;
        }
        Ok(FiniteLieAlgebra {
            modulus,
            orders,
            table,
        })
    }

    /// The abelian algebra with the given orders.
    pub fn abelian(modulus: Modulus, orders: Vec<u32>) -> Result<Self> {
        let n = orders.len();
        Self::from_full_table(modulus, orders, vec![Vec::new(); n * n])
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// `log_p` of the number of elements.
    pub fn log_size(&self) -> u64 {
        self.orders.iter().map(|&e| e as u64).sum()
    }

    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, BigUint)] {
        &self.table[i * self.dim() + j]
    }

    /// Same algebra represented at a deeper working exponent.
    pub fn with_working_exponent(&self, e: u32) -> FiniteLieAlgebra {
        assert!(e >= self.orders.first().copied().unwrap_or(1));
        FiniteLieAlgebra {
            modulus: self.modulus.with_exponent(e),
            orders: self.orders.clone(),
            table: self.table.clone(),
        }
    }

    pub fn zero_element(&self) -> LieElement {
        LieElement {
            coords: vec![BigUint::zero(); self.dim()],
        }
    }

    pub fn basis_element(&self, i: usize) -> LieElement {
        let mut coords = vec![BigUint::zero(); self.dim()];
        coords[i] = BigUint::from(1u32);
        LieElement { coords }
    }

    /// Reduce raw coordinates into an element.
    pub fn element(&self, coords: Vec<BigInt>) -> Result<LieElement> {
        if coords.len() != self.dim() {
            return Err(Error::ParentMismatch(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        Ok(self.element_from_residues(
            coords
                .iter()
                .map(|c| self.modulus.reduce_int(c))
                .collect(),
        ))
    }

    pub fn element_from_residues(&self, coords: Vec<BigUint>) -> LieElement {
        assert_eq!(coords.len(), self.dim());
        let coords = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| self.reduce_coord(i, &c))
            .collect();
        LieElement { coords }
    }

    fn reduce_coord(&self, i: usize, c: &BigUint) -> BigUint {
        c % self.modulus.p_pow(self.orders[i])
    }

    fn check_parent(&self, x: &LieElement) -> Result<()> {
        if x.coords.len() != self.dim() {
            return Err(Error::ParentMismatch(format!(
                "element has {} coordinates, algebra has {}",
                x.coords.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .enumerate()
            .map(|(i, (a, b))| self.reduce_coord(i, &(a + b)))
            .collect();
        LieElement { coords }
    }

    pub fn neg(&self, x: &LieElement) -> LieElement {
        let coords = x
            .coords
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if a.is_zero() {
                    BigUint::zero()
                } else {
                    self.modulus.p_pow(self.orders[i]) - a
                }
            })
            .collect();
        LieElement { coords }
    }

    pub fn sub(&self, x: &LieElement, y: &LieElement) -> LieElement {
        self.add(x, &self.neg(y))
    }

    pub fn scalar_mul(&self, c: &BigUint, x: &LieElement) -> LieElement {
        let coords = x
            .coords
            .iter()
            .enumerate()
            .map(|(i, a)| self.reduce_coord(i, &(a * c)))
            .collect();
        LieElement { coords }
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        Ok(self.bracket_raw(&x.coords, &y.coords))
    }

    pub(crate) fn bracket_raw(&self, x: &[BigUint], y: &[BigUint]) -> LieElement {
        let n = self.dim();
        let mut coords = vec![BigUint::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let scale = self.modulus.mul(xi, yj);
                if scale.is_zero() {
                    continue;
                }
                for (k, c) in self.structure_constants(i, j) {
                    coords[*k] = self.reduce_coord(*k, &(&coords[*k] + c * &scale));
                }
            }
        }
        LieElement { coords }
    }

    /// Exhaustive validator over basis pairs and triples.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.dim();
        let mut report = AxiomReport::default();
        // antisymmetry including the diagonal: [b_i, b_j] + [b_j, b_i] = 0
        for i in 0..n {
            for j in i..n {
                let bij = self.bracket_raw(
                    &self.basis_element(i).coords,
                    &self.basis_element(j).coords,
                );
                let bji = self.bracket_raw(
                    &self.basis_element(j).coords,
                    &self.basis_element(i).coords,
                );
                if !self.add(&bij, &bji).is_zero() {
                    report.antisymmetry_violations.push((i, j));
                }
            }
        }
        // well-definedness: p^{e_i} * [b_i, b_j] = 0 given coordinate i is
        // only defined mod p^{e_i}
        for i in 0..n {
            let pei = self.modulus.p_pow(self.orders[i]);
            for j in 0..n {
                let bij = self.bracket_raw(
                    &self.basis_element(i).coords,
                    &self.basis_element(j).coords,
                );
                for (k, c) in bij.coords.iter().enumerate() {
                    if !self.reduce_coord(k, &(c * &pei)).is_zero() {
                        report.well_defined_violations.push((i, j, k));
                    }
                }
            }
        }
        // Jacobi on all basis triples
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let bi = self.basis_element(i);
                    let bj = self.basis_element(j);
                    let bk = self.basis_element(k);
                    let t1 = self.bracket_raw(&self.bracket_raw(&bi.coords, &bj.coords).coords, &bk.coords);
                    let t2 = self.bracket_raw(&self.bracket_raw(&bk.coords, &bi.coords).coords, &bj.coords);
                    let t3 = self.bracket_raw(&self.bracket_raw(&bj.coords, &bk.coords).coords, &bi.coords);
                    if !self.add(&self.add(&t1, &t2), &t3).is_zero() {
                        report.jacobi_violations.push((i, j, k));
                    }
                }
            }
        }
        report
    }

    /// Lower central series `gamma_1 = L`, `gamma_{i+1} = [gamma_i, L]`,
    /// computed until it stabilizes. For a nilpotent algebra the last entry
    /// is the zero sublattice.
    pub fn lower_central_series(&self) -> Vec<Sublattice> {
        let mut chain = vec![Sublattice::full(self)];
        loop {
            let last = chain.last().unwrap();
            if last.is_zero(self) {
                break;
            }
            let next = last.bracket_span(self, &Sublattice::full(self));
            if &next == last {
                break; // not nilpotent; callers decide how to react
            }
            chain.push(next);
        }
        chain
    }

    /// Nilpotency class; errors when the series stabilizes above zero.
    pub fn nilpotency_class(&self) -> Result<usize> {
        let chain = self.lower_central_series();
        if chain.last().unwrap().is_zero(self) {
            Ok(chain.len() - 1)
        } else {
            Err(Error::NotNilpotent)
        }
    }

    /// Full p-torsion `Omega_1(L) = {a : p.a = 0}`, from the coordinatewise
    /// kernel of multiplication by `p`.
    pub fn omega_1(&self) -> Sublattice {
        let rows: Vec<Vec<BigUint>> = (0..self.dim())
            .map(|i| {
                let mut r = vec![BigUint::zero(); self.dim()];
                r[i] = self.modulus.p_pow(self.orders[i] - 1);
                r
            })
            .collect();
        Sublattice::span(self, &rows)
    }

    /// The sublattice `pL`.
    pub fn p_multiple(&self) -> Sublattice {
        let rows: Vec<Vec<BigUint>> = (0..self.dim())
            .map(|i| {
                let mut r = vec![BigUint::zero(); self.dim()];
                r[i] = self.modulus.p_big();
                r
            })
            .collect();
        Sublattice::span(self, &rows)
    }

    /// `gamma_2(L) = [L, L]`.
    pub fn derived(&self) -> Sublattice {
        Sublattice::full(self).bracket_span(self, &Sublattice::full(self))
    }

    /// `[L, L] contained in pL`.
    pub fn is_powerful(&self) -> bool {
        self.p_multiple().contains_lattice(&self.derived())
    }

    /// Elements of order `p` are central: `[Omega_1(L), L] = 0`.
    pub fn is_p_central(&self) -> bool {
        let omega = self.omega_1();
        for r in omega.rows() {
            for j in 0..self.dim() {
                if !self
                    .bracket_raw(&r, self.basis_element(j).coords())
                    .is_zero()
                {
                    return false;
                }
            }
        }
        true
    }

    /// Minimal number of generators: the `F_p`-dimension of
    /// `L / (pL + [L,L])`.
    pub fn min_generators(&self) -> u64 {
        let frattini = self.p_multiple().sum(&self.derived());
        frattini.index_log(self)
    }

    /// Center `{x : [x, L] = 0}`, as the kernel of the adjoint map.
    pub fn center(&self) -> Sublattice {
        let n = self.dim();
        // adjoint matrix: x -> ([x, b_1], ..., [x, b_n]) flattened, each
        // coordinate k embedded at the working modulus scaled by
        // p^{E - e_k} so that "zero mod p^{e_k}" becomes "zero mod p^E"
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n * n);
            for j in 0..n {
                let br = self.bracket_raw(
                    &self.basis_element(i).coords,
                    &self.basis_element(j).coords,
                );
                for (k, c) in br.coords.iter().enumerate() {
                    let scale = self.modulus.p_pow(self.modulus.exponent() - self.orders[k]);
                    row.push(self.modulus.mul(c, &scale));
                }
            }
            rows.push(row);
        }
        let m = crate::padic::ResidueMatrix::from_rows(self.modulus.clone(), n * n, rows);
        let kernel = crate::padic::row_kernel(&m);
        let kernel_rows: Vec<Vec<BigUint>> =
            kernel.matrix().iter_rows().map(|r| r.to_vec()).collect();
        Sublattice::span(self, &kernel_rows)
    }
}

#[cfg(test)]
mod tests;
