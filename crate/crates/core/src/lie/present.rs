use super::quotient::{quotient_unchecked, QuotientMap};
use super::{FiniteLieAlgebra, LieElement, Sublattice};
use crate::error::{Error, Result};
use crate::padic::{preimage_lattice, HowellForm, ResidueMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;

/// A sublattice closed under the bracket, re-presented as an abstract
/// algebra on its own canonical basis, with maps in both directions.
pub struct SubPresentation {
    pub algebra: FiniteLieAlgebra,
    rows: HowellForm,
    map: QuotientMap,
    basis_lifts: Vec<Vec<BigUint>>,
}

impl SubPresentation {
    /// Lift of abstract basis element `i` into parent coordinates.
    pub fn basis_lift(&self, i: usize) -> &[BigUint] {
        &self.basis_lifts[i]
    }

    pub fn basis_lifts(&self) -> &[Vec<BigUint>] {
        &self.basis_lifts
    }

    /// Express a parent-coordinate vector lying in the sublattice in the
    /// abstract coordinates.
    pub fn express(&self, parent_coords: &[BigUint]) -> Result<LieElement> {
        let alpha = self.rows.solve(parent_coords).ok_or_else(|| {
            Error::Internal("vector claimed to lie in sublattice does not".into())
        })?;
        Ok(self.algebra.element_from_residues(self.map.project(&alpha)))
    }

    /// Map an abstract element back into parent coordinates.
    pub fn lift(&self, x: &LieElement) -> Vec<BigUint> {
        let alpha = self.map.lift(x.coords());
        // alpha are coefficients over the Howell rows
        let mut out = vec![BigUint::zero(); self.rows.cols()];
        let md = self.algebra.modulus();
        for (i, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(self.rows.matrix().row(i)) {
                *o = md.add(o, &md.mul(a, r));
            }
        }
        out
    }
}

/// Present a bracket-closed sublattice as an abstract [`FiniteLieAlgebra`].
///
/// The abstract algebra is the quotient of the free module on the Howell
/// rows by the relation lattice of the rows, with the bracket transported
/// through solved witnesses.
pub fn present_sublattice(
    parent: &FiniteLieAlgebra,
    s: &Sublattice,
) -> Result<SubPresentation> {
    let md = parent.modulus().clone();
    let n = parent.dim();
    let rows_m = s.howell().matrix().clone();
    let k = rows_m.rows();

    // closure is a precondition; surface a clean error instead of garbage
    if !s.is_subalgebra(parent) {
        return Err(Error::HypothesesNotMet(
            "sublattice is not closed under the bracket".into(),
        ));
    }

    // relations among the rows: coefficients alpha with sum alpha_i r_i = 0
    // in the parent module
    let parent_relations = {
        let rel: Vec<Vec<BigUint>> = parent
            .orders()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e < md.exponent())
            .map(|(i, &e)| {
                let mut r = vec![BigUint::zero(); n];
                r[i] = md.p_pow(e);
                r
            })
            .collect();
        ResidueMatrix::from_rows(md.clone(), n, rel)
    };
    let kernel = preimage_lattice(&rows_m, &parent_relations);

    // bracket witnesses for the aux structure on the row space
    let mut full: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); k * k];
    for a in 0..k {
        for b in (a + 1)..k {
            let br = parent.bracket_raw(rows_m.row(a), rows_m.row(b));
            let w = s.howell().solve(br.coords()).ok_or_else(|| {
                Error::Internal("bracket of sublattice rows left the span".into())
            })?;
            let terms: Vec<(usize, BigInt)> = w
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, BigInt::from(c.clone())))
                .collect();
            full[a * k + b] = terms.clone();
            full[b * k + a] = terms.iter().map(|(i, c)| (*i, -c)).collect();
        }
    }
    let aux = FiniteLieAlgebra::from_full_table(md.clone(), vec![md.exponent(); k], full)?;
    let kernel_rows: Vec<Vec<BigUint>> =
        kernel.matrix().iter_rows().map(|r| r.to_vec()).collect();
    let kernel_lat = Sublattice::span(&aux, &kernel_rows);
    let (algebra, map) = quotient_unchecked(&aux, &kernel_lat)?;

    if algebra.log_size() != s.log_size(parent) {
        return Err(Error::Internal(
            "sublattice presentation size mismatch".into(),
        ));
    }
    if !algebra.check_axioms().is_valid() {
        return Err(Error::Internal(
            "sublattice presentation violates the Lie axioms".into(),
        ));
    }

    let basis_lifts: Vec<Vec<BigUint>> = (0..algebra.dim())
        .map(|a| rows_m.apply_row(&map.basis_lift(a)))
        .collect();

    Ok(SubPresentation {
        algebra,
        rows: s.howell().clone(),
        map,
        basis_lifts,
    })
}

/// Verify that the linear map sending basis element `i` of `a` to row `i`
/// of `map` (in `b`-coordinates) is a well-defined bijective bracket-
/// preserving homomorphism.
pub fn verify_isomorphism(
    a: &FiniteLieAlgebra,
    b: &FiniteLieAlgebra,
    map: &ResidueMatrix,
) -> Result<()> {
    if a.modulus().p() != b.modulus().p() {
        return Err(Error::ParentMismatch("different primes".into()));
    }
    if map.rows() != a.dim() || map.cols() != b.dim() {
        return Err(Error::ParentMismatch("map has wrong shape".into()));
    }
    let apply = |x: &[BigUint]| -> LieElement { b.element_from_residues(map.apply_row(x)) };

    // well-defined: the image of basis i is killed by p^{e_i}
    for i in 0..a.dim() {
        let img = apply(a.basis_element(i).coords());
        let killed = b.scalar_mul(&a.modulus().p_pow(a.orders()[i]), &img);
        if !killed.is_zero() {
            return Err(Error::HypothesesNotMet(format!(
                "map is not well-defined at basis {i}"
            )));
        }
    }
    // bracket-preserving on basis pairs (bilinearity covers the rest)
    for i in 0..a.dim() {
        for j in (i + 1)..a.dim() {
            let lhs = apply(
                a.bracket_raw(a.basis_element(i).coords(), a.basis_element(j).coords())
                    .coords(),
            );
            let rhs = b
                .bracket_raw(
                    apply(a.basis_element(i).coords()).coords(),
                    apply(a.basis_element(j).coords()).coords(),
                )
                .clone();
            if lhs != rhs {
                return Err(Error::HypothesesNotMet(format!(
                    "map does not preserve the bracket at ({i},{j})"
                )));
            }
        }
    }
    // bijective: sizes agree and the kernel is trivial
    if a.log_size() != b.log_size() {
        return Err(Error::HypothesesNotMet("sizes differ".into()));
    }
    let b_md = b.modulus();
    let b_relations = {
        let rel: Vec<Vec<BigUint>> = b
            .orders()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e < b_md.exponent())
            .map(|(i, &e)| {
                let mut r = vec![BigUint::zero(); b.dim()];
                r[i] = b_md.p_pow(e);
                r
            })
            .collect();
        ResidueMatrix::from_rows(b_md.clone(), b.dim(), rel)
    };
    let kernel = preimage_lattice(map, &b_relations);
    // the kernel must be exactly the source relation lattice
    let src_rel_log: u64 = a
        .orders()
        .iter()
        .map(|&e| (b_md.exponent().saturating_sub(e)) as u64)
        .sum();
    if kernel.log_span_size() != src_rel_log {
        return Err(Error::HypothesesNotMet(
            "map has a nontrivial kernel".into(),
        ));
    }
    for (i, &e) in a.orders().iter().enumerate() {
        if e < b_md.exponent() {
            let mut r = vec![BigUint::zero(); a.dim()];
            r[i] = b_md.p_pow(e);
            if !kernel.contains(&r) {
                return Err(Error::HypothesesNotMet(
                    "kernel does not contain the source relations".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Graded-order-profile and generator-count fingerprint. This is an
/// isomorphism *invariant*, not an isomorphism test: equal fingerprints do
/// not prove isomorphism, unequal ones disprove it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub log_size: u64,
    pub orders: Vec<u32>,
    pub class: usize,
    pub min_generators: u64,
    /// `log_p |gamma_i / gamma_{i+1}|` for each step of the series.
    pub graded_profile: Vec<u64>,
}

pub fn fingerprint(alg: &FiniteLieAlgebra) -> Result<Fingerprint> {
    let chain = alg.lower_central_series();
    if !chain.last().unwrap().is_zero(alg) {
        return Err(Error::NotNilpotent);
    }
    let graded_profile: Vec<u64> = chain
        .windows(2)
        .map(|w| w[0].log_size(alg) - w[1].log_size(alg))
        .collect();
    Ok(Fingerprint {
        log_size: alg.log_size(),
        orders: alg.orders().to_vec(),
        class: chain.len() - 1,
        min_generators: alg.min_generators(),
        graded_profile,
    })
}

/// All sublattices of the algebra module, by enumeration of candidate
/// triangular forms followed by canonicalization. Desk scale only.
pub fn enumerate_sublattices(
    alg: &FiniteLieAlgebra,
    cap_log: u64,
) -> Result<Vec<Sublattice>> {
    if alg.log_size() > cap_log {
        return Err(Error::TooLargeForExhaustive {
            log_order: alg.log_size(),
            cap: cap_log,
        });
    }
    let n = alg.dim();
    let p = alg.modulus().p();
    // candidate count: column j contributes sum_{v=0..e_j} p^{v*j}
    let mut estimate: u128 = 1;
    for (j, &e) in alg.orders().iter().enumerate() {
        let mut col: u128 = 0;
        for v in 0..=e {
            col = col.saturating_add((p as u128).saturating_pow(v * j as u32));
        }
        estimate = estimate.saturating_mul(col);
    }
    const WORK_CAP: u128 = 4_000_000;
    if estimate > WORK_CAP {
        return Err(Error::TooLargeForExhaustive {
            log_order: alg.log_size(),
            cap: cap_log,
        });
    }

    let mut seen: BTreeSet<Vec<BigUint>> = BTreeSet::new();
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    // enumerate diagonal valuations, then entries above each pivot
    let mut diag = vec![0u32; n];
    enumerate_diag(alg, 0, &mut diag, &pairs, &mut seen, &mut out);
    Ok(out)
}

fn enumerate_diag(
    alg: &FiniteLieAlgebra,
    col: usize,
    diag: &mut Vec<u32>,
    pairs: &[(usize, usize)],
    seen: &mut BTreeSet<Vec<BigUint>>,
    out: &mut Vec<Sublattice>,
) {
    let n = alg.dim();
    if col == n {
        let mut rows: Vec<Vec<BigUint>> = (0..n)
            .map(|i| {
                let mut r = vec![BigUint::zero(); n];
                r[i] = alg.modulus().p_pow(diag[i]);
                r
            })
            .collect();
        enumerate_entries(alg, pairs, 0, &mut rows, diag, seen, out);
        return;
    }
    for v in 0..=alg.orders()[col] {
        diag[col] = v;
        enumerate_diag(alg, col + 1, diag, pairs, seen, out);
    }
}

fn enumerate_entries(
    alg: &FiniteLieAlgebra,
    pairs: &[(usize, usize)],
    idx: usize,
    rows: &mut Vec<Vec<BigUint>>,
    diag: &[u32],
    seen: &mut BTreeSet<Vec<BigUint>>,
    out: &mut Vec<Sublattice>,
) {
    if idx == pairs.len() {
        let lat = Sublattice::span(alg, rows);
        let key: Vec<BigUint> = lat
            .howell()
            .matrix()
            .iter_rows()
            .flat_map(|r| r.iter().cloned())
            .collect();
        if seen.insert(key) {
            out.push(lat);
        }
        return;
    }
    let (i, j) = pairs[idx];
    let bound = alg.modulus().p_pow(diag[j]);
    let mut c = BigUint::zero();
    while c < bound {
        rows[i][j] = c.clone();
        enumerate_entries(alg, pairs, idx + 1, rows, diag, seen, out);
        c += 1u32;
    }
    rows[i][j] = BigUint::zero();
}

/// Exact sectional rank by exhaustive subalgebra enumeration.
pub fn rank_sectional_exact(alg: &FiniteLieAlgebra, cap_log: u64) -> Result<u64> {
    let lattices = enumerate_sublattices(alg, cap_log)?;
    let mut best = 0u64;
    for w in &lattices {
        if !w.is_subalgebra(alg) {
            continue;
        }
        best = best.max(sublattice_min_generators(alg, w));
    }
    Ok(best)
}

/// Minimal generator count of a bracket-closed sublattice, computed in
/// place: `dim_{F_p} W / (pW + [W, W])`.
pub fn sublattice_min_generators(alg: &FiniteLieAlgebra, w: &Sublattice) -> u64 {
    let frattini = w.p_scaled(alg, 1).sum(&w.bracket_span(alg, w));
    w.log_size(alg) - frattini.log_size(alg)
}

/// Sectional rank: exact below the enumeration cap, otherwise the a-priori
/// bound `d + d^2 + ... + d^{p-1}` tagged as a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankValue {
    Exact(u64),
    Bound(u64),
}

impl RankValue {
    pub fn value(&self) -> u64 {
        match self {
            RankValue::Exact(v) | RankValue::Bound(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RankValue::Exact(_))
    }
}

pub fn rank_sectional(alg: &FiniteLieAlgebra, cap_log: u64) -> RankValue {
    match rank_sectional_exact(alg, cap_log) {
        Ok(v) => RankValue::Exact(v),
        Err(_) => {
            let d = alg.min_generators();
            let p = alg.modulus().p();
            let mut bound = 0u64;
            let mut power = 1u64;
            for _ in 1..p {
                power = power.saturating_mul(d.max(1));
                bound = bound.saturating_add(power);
            }
            // a subgroup of order p^m never needs more than m generators
            RankValue::Bound(bound.min(alg.log_size()))
        }
    }
}
