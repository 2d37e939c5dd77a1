use super::{FiniteLieAlgebra, LieElement, Sublattice};
use crate::error::{Error, Result};
use crate::padic::{smith_form, Modulus, ResidueMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

/// Coordinate data of a quotient `L / I`: the Smith basis change on the
/// ambient module, the retained coordinates, and their orders.
#[derive(Clone)]
pub struct QuotientMap {
    parent_modulus: Modulus,
    v: ResidueMatrix,
    v_inv: ResidueMatrix,
    kept: Vec<usize>,
    orders: Vec<u32>,
}

impl QuotientMap {
    pub fn quotient_orders(&self) -> &[u32] {
        &self.orders
    }

    /// Parent coordinates -> quotient coordinates.
    pub fn project(&self, parent_coords: &[BigUint]) -> Vec<BigUint> {
        let y = self.v.apply_row(parent_coords);
        self.kept
            .iter()
            .zip(&self.orders)
            .map(|(&col, &f)| &y[col] % self.parent_modulus.p_pow(f))
            .collect()
    }

    pub fn project_element(&self, quotient: &FiniteLieAlgebra, x: &LieElement) -> LieElement {
        quotient.element_from_residues(self.project(x.coords()))
    }

    /// A coordinate section of the projection (not a homomorphism in
    /// general, but projects back to the identity).
    pub fn lift(&self, quot_coords: &[BigUint]) -> Vec<BigUint> {
        let n = self.v.cols();
        let mut y = vec![BigUint::zero(); n];
        for (a, &col) in self.kept.iter().enumerate() {
            y[col] = quot_coords[a].clone();
        }
        self.v_inv.apply_row(&y)
    }

    /// Lift of the `a`-th quotient basis vector, in parent coordinates.
    pub fn basis_lift(&self, a: usize) -> Vec<BigUint> {
        self.v_inv.row_vec(self.kept[a])
    }

    /// Image of a parent sublattice in the quotient.
    pub fn project_lattice(
        &self,
        quotient: &FiniteLieAlgebra,
        lattice: &Sublattice,
    ) -> Sublattice {
        let rows: Vec<Vec<BigUint>> = lattice
            .howell()
            .matrix()
            .iter_rows()
            .map(|r| self.project(r))
            .collect();
        Sublattice::span(quotient, &rows)
    }
}

/// Quotient of an algebra by an ideal: a presentation of `L/I` on a fresh
/// basis obtained by Smith diagonalization of the relation lattice, plus the
/// coordinate projection. The order of the quotient equals the index of the
/// ideal.
pub fn quotient(
    alg: &FiniteLieAlgebra,
    ideal: &Sublattice,
) -> Result<(FiniteLieAlgebra, QuotientMap)> {
    ideal.require_ideal(alg)?;
    quotient_unchecked(alg, ideal)
}

/// Same construction without the ideal check; used internally where the
/// closure property holds by an argument the caller owns.
pub(crate) fn quotient_unchecked(
    alg: &FiniteLieAlgebra,
    ideal: &Sublattice,
) -> Result<(FiniteLieAlgebra, QuotientMap)> {
    let md = alg.modulus().clone();
    let n = alg.dim();
    let smith = smith_form(ideal.howell().matrix());

    // order exponent of each smith coordinate; columns beyond the diagonal
    // keep the full working depth
    let mut exps: Vec<(usize, u32)> = (0..n)
        .map(|t| {
            let f = smith
                .diag
                .get(t)
                .copied()
                .unwrap_or_else(|| md.exponent());
            (t, f)
        })
        .collect();
    // retained coordinates, largest order first (orders must be descending)
    exps.retain(|&(_, f)| f > 0);
    exps.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let kept: Vec<usize> = exps.iter().map(|&(t, _)| t).collect();
    let orders: Vec<u32> = exps.iter().map(|&(_, f)| f).collect();

    let map = QuotientMap {
        parent_modulus: md.clone(),
        v: smith.v,
        v_inv: smith.v_inv,
        kept,
        orders: orders.clone(),
    };

    // transport structure constants through basis lifts
    let nq = orders.len();
    let mut full: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); nq * nq];
    for a in 0..nq {
        let la = map.basis_lift(a);
        for b in 0..nq {
            if a == b {
                continue;
            }
            let lb = map.basis_lift(b);
            let br = alg.bracket_raw(&la, &lb);
            let proj = map.project(br.coords());
            full[a * nq + b] = proj
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, BigInt::from(c.clone())))
                .collect();
        }
    }
    let q = FiniteLieAlgebra::from_full_table(md, orders, full)?;

    // order bookkeeping: |L| = |L/I| * |I|
    if q.log_size() + ideal.log_size(alg) != alg.log_size() {
        return Err(Error::Internal(
            "quotient size bookkeeping failed".into(),
        ));
    }
    Ok((q, map))
}
