use super::present::{present_sublattice, verify_isomorphism};
use super::quotient::quotient;
use super::{FiniteLieAlgebra, Sublattice};
use crate::error::{Error, Result};
use crate::padic::{Modulus, ResidueMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

/// Presentation of a finite algebra as `M / I` for a free module `M` of
/// rank `n`, a relation lattice `I` inside `pM`, and a bilinear lift of the
/// bracket. The lift need not satisfy the Jacobi identity on `M`; it must
/// satisfy it modulo `I`, which is validated.
///
/// Relation generators and lift constants are kept as integers, so a
/// presentation can be re-read at any working depth.
pub struct FreePresentation {
    p: u64,
    rank: usize,
    relations: Vec<Vec<BigInt>>,
    lift: Vec<Vec<(usize, BigInt)>>,
}

impl FreePresentation {
    /// `lift_upper` lists the bilinear form on pairs `i < j`; the lower half
    /// is filled antisymmetrically.
    pub fn new(
        p: u64,
        rank: usize,
        relations: Vec<Vec<BigInt>>,
        lift_upper: &[((usize, usize), Vec<(usize, BigInt)>)],
    ) -> Result<Self> {
        for (gi, g) in relations.iter().enumerate() {
            if g.len() != rank {
                return Err(Error::Schema(format!(
                    "relation {gi} has wrong length"
                )));
            }
        }
        let mut lift: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rank * rank];
        for ((i, j), terms) in lift_upper {
            if *i >= *j || *j >= rank {
                return Err(Error::Schema(format!(
                    "lift pair ({i},{j}) out of range or not upper-triangular"
                )));
            }
            lift[i * rank + j] = terms.clone();
            lift[j * rank + i] = terms.iter().map(|(k, c)| (*k, -c)).collect();
        }
        Ok(FreePresentation {
            p,
            rank,
            relations,
            lift,
        })
    }

    /// Canonical presentation of an existing algebra: `M` free of the same
    /// rank, `I` spanned by `p^{e_i} u_i`, and the structure constants
    /// lifted as integers.
    pub fn from_algebra(alg: &FiniteLieAlgebra) -> FreePresentation {
        let n = alg.dim();
        let p = alg.modulus().p();
        let relations: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = BigInt::from(p).pow(alg.orders()[i]);
                r
            })
            .collect();
        let mut lift: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                lift[i * n + j] = alg
                    .structure_constants(i, j)
                    .iter()
                    .map(|(k, c)| (*k, BigInt::from(c.clone())))
                    .collect();
            }
        }
        FreePresentation {
            p,
            rank: n,
            relations,
            lift,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exponents at which the free module is materialized for computation.
    pub fn ambient_orders(&self, working_exponent: u32) -> Vec<u32> {
        vec![working_exponent; self.rank]
    }

    /// Working exponent: the exponent of `M/I` plus two, so that `pM/pI`
    /// and its torsion are represented faithfully.
    fn working_exponent(&self) -> Result<u32> {
        let mut e = self
            .relations
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| {
                let mut v = 0u32;
                let p = BigInt::from(self.p);
                let mut c = c.clone();
                while !c.is_zero() && (&c % &p).is_zero() {
                    c /= &p;
                    v += 1;
                }
                v
            })
            .max()
            .unwrap_or(1)
            .max(1)
            + 2;
        loop {
            let md = Modulus::new(self.p, e)?;
            let rel = self.relation_matrix(&md);
            let smith = crate::padic::smith_form(&rel);
            let v_star = smith.diag.iter().copied().max().unwrap_or(0);
            if v_star + 2 <= e {
                return Ok(v_star + 2);
            }
            e = v_star + 2;
        }
    }

    fn relation_matrix(&self, md: &Modulus) -> ResidueMatrix {
        let rows: Vec<Vec<BigUint>> = self
            .relations
            .iter()
            .map(|r| r.iter().map(|c| md.reduce_int(c)).collect())
            .collect();
        ResidueMatrix::from_rows(md.clone(), self.rank, rows)
    }

    /// The free module with the lifted bilinear form, materialized at the
    /// given exponent. Not necessarily a Lie algebra.
    fn materialize(&self, e: u32) -> Result<FiniteLieAlgebra> {
        let md = Modulus::new(self.p, e)?;
        FiniteLieAlgebra::from_full_table(md, vec![e; self.rank], self.lift.clone())
    }
}

/// A p-central algebra `C` together with a verified isomorphism
/// `C / Omega_1(C) -> target`; the witness that `target` has the
/// omega-extension property.
pub struct CoverWitness {
    pub cover: FiniteLieAlgebra,
    pub quotient_by_omega1: FiniteLieAlgebra,
    pub target: FiniteLieAlgebra,
    pub iso: ResidueMatrix,
    pub omega1_log: u64,
}

impl CoverWitness {
    pub fn verify(&self) -> Result<()> {
        if !self.cover.is_p_central() {
            return Err(Error::HypothesesNotMet("cover is not p-central".into()));
        }
        if self.cover.omega_1().log_size(&self.cover) != self.omega1_log {
            return Err(Error::HypothesesNotMet(
                "omega_1 bookkeeping is stale".into(),
            ));
        }
        verify_isomorphism(&self.quotient_by_omega1, &self.target, &self.iso)
    }
}

/// Everything the cover construction produces.
pub struct OmegaCoverResult {
    /// `L = M/I`.
    pub presented: FiniteLieAlgebra,
    /// Projection from the free module coordinates onto `presented`.
    pub presented_map: super::quotient::QuotientMap,
    /// `pL`, abstractly presented; the target of the witness.
    pub p_multiple: FiniteLieAlgebra,
    pub witness: CoverWitness,
    /// The cover `pM/pI` is also powerful (recorded, not required).
    pub cover_is_powerful: bool,
}

/// Build the cover `pM/pI` for a free presentation `L = M/I` with
/// `I` inside `pM`. The cover is p-central with `Omega_1(pM/pI) = I/pI`,
/// and its quotient by `Omega_1` is isomorphic to `pL`; both facts are
/// verified, not assumed.
pub fn omega_extension_cover(pres: &FreePresentation) -> Result<OmegaCoverResult> {
    let n = pres.rank;
    // relations must lie in pM
    for (gi, g) in pres.relations.iter().enumerate() {
        for c in g {
            if !(c % BigInt::from(pres.p)).is_zero() {
                return Err(Error::RelationNotInPM(gi));
            }
        }
    }
    let e_work = pres.working_exponent()?;
    let m_aux = pres.materialize(e_work)?;
    let md = m_aux.modulus().clone();

    // Jacobi of the lift must land inside I
    let i_lat = {
        let rows: Vec<Vec<BigUint>> = pres
            .relations
            .iter()
            .map(|r| r.iter().map(|c| md.reduce_int(c)).collect())
            .collect();
        Sublattice::span(&m_aux, &rows)
    };
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let bi = m_aux.basis_element(i);
                let bj = m_aux.basis_element(j);
                let bk = m_aux.basis_element(k);
                let t1 = m_aux.bracket_raw(bi.coords(), m_aux.bracket_raw(bj.coords(), bk.coords()).coords());
                let t2 = m_aux.bracket_raw(bk.coords(), m_aux.bracket_raw(bi.coords(), bj.coords()).coords());
                let t3 = m_aux.bracket_raw(bj.coords(), m_aux.bracket_raw(bk.coords(), bi.coords()).coords());
                let jac = m_aux.add(&m_aux.add(&t1, &t2), &t3);
                if !i_lat.contains(jac.coords()) {
                    return Err(Error::JacobiLiftFailure { i, j, k });
                }
            }
        }
    }

    // L = M/I; the ideal check here is exactly the well-definedness of the
    // induced bracket
    let (presented, l_map) = quotient(&m_aux, &i_lat)?;

    // pL inside L, abstractly presented
    let pl_lat = presented.p_multiple();
    let pl_pres = present_sublattice(&presented, &pl_lat)?;

    // the cover lives on the y-space pM (coordinates z = p*y), with the
    // bilinear form {py, py'} = p^2 {y, y'}, i.e. constants p*t
    let e_aux = e_work - 1;
    let md_y = md.with_exponent(e_aux);
    let mut y_table: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            y_table[i * n + j] = pres.lift[i * n + j]
                .iter()
                .map(|(k, c)| (*k, c * BigInt::from(pres.p)))
                .collect();
        }
    }
    let y_aux = FiniteLieAlgebra::from_full_table(md_y.clone(), vec![e_aux; n], y_table)?;
    // pI in y-coordinates: y(p*g) = g
    let pi_rows: Vec<Vec<BigUint>> = pres
        .relations
        .iter()
        .map(|g| g.iter().map(|c| md_y.reduce_int(c)).collect())
        .collect();
    let pi_lat = Sublattice::span(&y_aux, &pi_rows);
    let (cover, cover_map) = quotient(&y_aux, &pi_lat)?;
    if !cover.check_axioms().is_valid() {
        return Err(Error::Internal("cover violates the Lie axioms".into()));
    }

    // Omega_1(cover) must equal the image of I: y(g) = g/p for g in I,
    // dividing the canonical representative (divisible by p, checked above)
    let i_over_p_rows: Vec<Vec<BigUint>> = pres
        .relations
        .iter()
        .map(|g| {
            g.iter()
                .map(|c| {
                    let canon = md.reduce_int(c);
                    (canon / BigUint::from(pres.p)) % md_y.value()
                })
                .collect()
        })
        .collect();
    let omega = cover.omega_1();
    let i_image = Sublattice::span(
        &cover,
        &i_over_p_rows
            .iter()
            .map(|r| cover_map_project(&cover_map, &cover, r))
            .collect::<Vec<_>>(),
    );
    if i_image != omega {
        return Err(Error::Internal(
            "Omega_1 of the cover does not match I/pI".into(),
        ));
    }
    let omega1_log = omega.log_size(&cover);

    // quotient by Omega_1 and the isomorphism onto pL
    let (cq, cq_map) = quotient(&cover, &omega)?;
    let mut iso_rows: Vec<Vec<BigUint>> = Vec::new();
    for a in 0..cq.dim() {
        let in_cover = cq_map.basis_lift(a);
        let in_y = cover_map.lift(&in_cover);
        // back to M-coordinates: z = p * y
        let in_m: Vec<BigUint> = in_y.iter().map(|y| md.mul(y, &md.p_big())).collect();
        let in_l = l_map.project(&in_m);
        let as_pl = pl_pres.express(&in_l)?;
        iso_rows.push(as_pl.coords().to_vec());
    }
    let iso = ResidueMatrix::from_rows(
        pl_pres.algebra.modulus().clone(),
        pl_pres.algebra.dim(),
        iso_rows,
    );
    let witness = CoverWitness {
        quotient_by_omega1: cq,
        target: pl_pres.algebra.clone(),
        iso,
        omega1_log,
        cover: cover.clone(),
    };
    witness.verify()?;

    Ok(OmegaCoverResult {
        presented,
        presented_map: l_map,
        p_multiple: pl_pres.algebra,
        cover_is_powerful: cover.is_powerful(),
        witness,
    })
}

fn cover_map_project(
    map: &super::quotient::QuotientMap,
    cover: &FiniteLieAlgebra,
    y_coords: &[BigUint],
) -> Vec<BigUint> {
    cover
        .element_from_residues(map.project(y_coords))
        .into_coords()
}
