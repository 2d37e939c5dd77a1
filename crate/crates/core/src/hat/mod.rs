//! The powerful hull of a free nilpotent algebra, the extension of an ideal
//! into it, and the resulting embedding theorem pipeline, with every bound
//! checked exactly.
//!
//! The hull is represented on a rescaled basis: the basis element `h` of
//! weight `w` stands for `p^{-(w-1)} h`, so a weight-`i` by weight-`j`
//! bracket picks up the integral factor `p^{(i+j-1)-(i-1)-(j-1)} = p`.
//! Everything then stays in `Z/p^E`; divisions never happen.

use crate::error::{Error, Result};
use crate::hall::{generate_hall_basis, HallBasis};
use crate::lie::{
    quotient, CoverWitness, FiniteLieAlgebra, QuotientMap, Sublattice,
};
use crate::padic::{Modulus, ResidueMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

fn basis_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<HallBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<HallBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn shared_hall_basis(d: u32, c: u32) -> Result<Arc<HallBasis>> {
    if let Some(hit) = basis_cache().lock().expect("cache poisoned").get(&(d, c)) {
        return Ok(hit.clone());
    }
    let b = Arc::new(generate_hall_basis(d, c)?);
    basis_cache()
        .lock()
        .expect("cache poisoned")
        .insert((d, c), b.clone());
    Ok(b)
}

/// The free nilpotent algebra `L_c(X)` on the Hall basis, truncated at
/// `p^E` (orders all `E`).
pub fn free_nilpotent_algebra(
    basis: &Arc<HallBasis>,
    p: u64,
    e: u32,
) -> Result<FiniteLieAlgebra> {
    let md = Modulus::new(p, e)?;
    let n = basis.len();
    let mut full: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let br = basis.basis_bracket(i, j);
            full[i * n + j] = br.iter().map(|(&k, c)| (k, c.clone())).collect();
        }
    }
    FiniteLieAlgebra::from_full_table(md, vec![e; n], full)
}

/// The rescaled hull of `L_c(X)`: same Hall basis, bracket constants carry
/// an explicit factor `p`, together with the inclusion of the unscaled
/// algebra as the sublattice spanned by `p^{w_i - 1} u_i`.
pub struct ScaledFreeAlgebra {
    d: u32,
    c: u32,
    basis: Arc<HallBasis>,
    /// The hull, with the rescaled (p-divisible) constants.
    pub algebra: FiniteLieAlgebra,
    /// `L_c(X)` itself at the same working exponent.
    pub free_algebra: FiniteLieAlgebra,
    /// `c < p`; above this the Lie side is still defined but the group
    /// translation is not.
    pub lazard_compatible: bool,
}

impl ScaledFreeAlgebra {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn class(&self) -> u32 {
        self.c
    }

    pub fn basis(&self) -> &Arc<HallBasis> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn modulus(&self) -> &Modulus {
        self.algebra.modulus()
    }

    /// Map unscaled coordinates of `(1/p^t) * v` into hull coordinates:
    /// coordinate `i` is multiplied by `p^{w_i - 1 - t}`. Requires the
    /// support of `v` to sit in weights above `t`.
    pub fn scale_into_hull(&self, v: &[BigUint], t: u32) -> Vec<BigUint> {
        let md = self.modulus();
        v.iter()
            .enumerate()
            .map(|(i, x)| {
                let w = self.basis.weight(i);
                if x.is_zero() {
                    BigUint::zero()
                } else {
                    assert!(w >= t + 1, "layer {t} element supported below weight {}", t + 1);
                    md.mul(x, &md.p_pow(w - 1 - t))
                }
            })
            .collect()
    }

    /// The inclusion `L_c(X)` into the hull, as a sublattice.
    pub fn inclusion_lattice(&self) -> Sublattice {
        let n = self.rank();
        let rows: Vec<Vec<BigUint>> = (0..n)
            .map(|i| {
                let mut r = vec![BigUint::zero(); n];
                r[i] = self.modulus().p_pow(self.basis.weight(i) - 1);
                r
            })
            .collect();
        Sublattice::span(&self.algebra, &rows)
    }

    /// Exact `log_p` of the index of `L_c(X)` in the hull: the sum of the
    /// scaling exponents.
    pub fn index_over_free_log(&self) -> u64 {
        (0..self.rank())
            .map(|i| (self.basis.weight(i) - 1) as u64)
            .sum()
    }

    /// Exact basis size against the closed-form bound
    /// `(d^{c+1} - d)/(d - 1)` (rank 1 when `d = 1`).
    pub fn rank_bound_report(&self) -> RankBoundReport {
        let exact = self.rank() as u64;
        let bound = rank_bound(self.d as u64, self.c);
        RankBoundReport {
            exact,
            bound,
            within: exact <= bound,
            index_log: self.index_over_free_log(),
            index_bound_log: (self.c as u64 - 1) * exact,
        }
    }
}

pub fn rank_bound(d: u64, c: u32) -> u64 {
    if d == 1 {
        1
    } else {
        (d.pow(c + 1) - d) / (d - 1)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RankBoundReport {
    pub exact: u64,
    pub bound: u64,
    pub within: bool,
    /// `log_p |hull : L_c(X)|`, exactly.
    pub index_log: u64,
    /// `(c-1) * rank`, the a-priori ceiling for the index.
    pub index_bound_log: u64,
}

/// Build the hull at the given working exponent. Classes at or above `p`
/// are allowed on the Lie side; `lazard_compatible` records whether the
/// group translation applies.
pub fn build_hat_algebra(d: u32, c: u32, p: u64, e: u32) -> Result<ScaledFreeAlgebra> {
    let basis = shared_hall_basis(d, c)?;
    if e < c {
        return Err(Error::Schema(format!(
            "working exponent {e} is below the class {c}; the deepest scaling is p^{}",
            c - 1
        )));
    }
    let md = Modulus::new(p, e)?;
    let n = basis.len();
    let free_algebra = free_nilpotent_algebra(&basis, p, e)?;
    let mut full: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let br = basis.basis_bracket(i, j);
            full[i * n + j] = br
                .iter()
                .map(|(&k, coeff)| (k, coeff * BigInt::from(p)))
                .collect();
        }
    }
    let algebra = FiniteLieAlgebra::from_full_table(md, vec![e; n], full)?;
    Ok(ScaledFreeAlgebra {
        d,
        c,
        basis,
        algebra,
        free_algebra,
        lazard_compatible: (c as u64) < p,
    })
}

/// The extension of an ideal of `L_c(X)` into the hull: the sum over `t` of
/// the rescaled layers `(1/p^t) [I, _t L_c(X)]`.
pub struct HatIdeal {
    /// `I` inside the unscaled free algebra.
    pub unscaled: Sublattice,
    /// The extended ideal inside the hull.
    pub lattice: Sublattice,
}

pub fn build_hat_ideal(
    hull: &ScaledFreeAlgebra,
    generators: &[Vec<BigUint>],
) -> Result<HatIdeal> {
    let free = &hull.free_algebra;
    let ideal = Sublattice::span(free, generators);
    ideal.require_ideal(free)?;

    let full = Sublattice::full(free);
    let mut layer = ideal.clone();
    let mut hat_rows: Vec<Vec<BigUint>> = Vec::new();
    for t in 0..hull.class() {
        for row in layer.howell().matrix().iter_rows() {
            if row.iter().all(|x| x.is_zero()) {
                continue;
            }
            hat_rows.push(hull.scale_into_hull(row, t));
        }
        if t + 1 < hull.class() {
            layer = layer.bracket_span(free, &full);
        }
    }
    let lattice = Sublattice::span(&hull.algebra, &hat_rows);

    // the extended ideal must satisfy [I-hat, hull] inside p * I-hat; a
    // failure here is an implementation bug, never bad input
    let p_ihat = lattice.p_scaled(&hull.algebra, 1);
    for row in lattice.howell().matrix().iter_rows() {
        for j in 0..hull.rank() {
            let br = hull
                .algebra
                .bracket_raw(row, hull.algebra.basis_element(j).coords());
            if !p_ihat.contains(br.coords()) {
                return Err(Error::HatLemmaViolation);
            }
        }
    }

    Ok(HatIdeal {
        unscaled: ideal,
        lattice,
    })
}

/// Quotient of the hull by an extended ideal, with predicates and the
/// cover witness `hull/pI-hat` for the omega-extension property.
pub struct HatQuotient {
    pub algebra: FiniteLieAlgebra,
    pub map: QuotientMap,
    pub witness: CoverWitness,
    pub is_powerful: bool,
    pub is_p_central: bool,
}

pub fn hat_quotient(hull: &ScaledFreeAlgebra, ideal: &HatIdeal) -> Result<HatQuotient> {
    let (q, map) = quotient(&hull.algebra, &ideal.lattice)?;
    let is_powerful = q.is_powerful();
    let is_p_central = q.is_p_central();

    // witness: C = hull / p*I-hat is p-central with Omega_1(C) = I-hat/p*I-hat
    // and C/Omega_1(C) isomorphic to the quotient
    let p_ihat = ideal.lattice.p_scaled(&hull.algebra, 1);
    let (cover, cover_map) = quotient(&hull.algebra, &p_ihat)?;
    let omega = cover.omega_1();
    let ihat_image = cover_map.project_lattice(&cover, &ideal.lattice);
    if ihat_image != omega {
        return Err(Error::Internal(
            "Omega_1 of the hat cover does not equal I-hat/p*I-hat".into(),
        ));
    }
    let omega1_log = omega.log_size(&cover);
    let (cq, cq_map) = quotient(&cover, &omega)?;
    let mut iso_rows = Vec::new();
    for a in 0..cq.dim() {
        let in_cover = cq_map.basis_lift(a);
        let in_hull = cover_map.lift(&in_cover);
        iso_rows.push(map.project(&in_hull));
    }
    let iso = ResidueMatrix::from_rows(q.modulus().clone(), q.dim(), iso_rows);
    let witness = CoverWitness {
        cover,
        quotient_by_omega1: cq,
        target: q.clone(),
        iso,
        omega1_log,
    };
    witness.verify()?;

    Ok(HatQuotient {
        algebra: q,
        map,
        witness,
        is_powerful,
        is_p_central,
    })
}

mod pipeline;
pub(crate) use pipeline::choose_exponent;
pub use pipeline::{structure_pipeline, structure_pipeline_at, StructureReport, StructureVerdicts};

#[cfg(test)]
mod tests;
