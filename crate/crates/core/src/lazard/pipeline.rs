use super::{
    gp_power_subgroup, omega_1_group, subgroup_generated, LazardGroup, Subgroup,
    DEFAULT_EXHAUSTIVE_CAP_LOG,
};
use crate::error::{Error, Result};
use crate::hall::HallNode;
use crate::hat::{self, StructureReport};
use crate::lie::{
    quotient, rank_sectional, sublattice_min_generators, verify_isomorphism, FiniteLieAlgebra,
    LieElement, RankValue, Sublattice,
};
use crate::padic::{preimage_lattice, ResidueMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Group-side structure theorem: a normal subgroup `N` of bounded order
/// and an embedding of `G/N` into the powerful p-central quotient, with
/// multiplicativity verified on random pairs.
pub struct GroupStructureReport {
    pub lie: StructureReport,
    pub generators: Vec<LieElement>,
    pub n: Subgroup,
    pub quotient_group: LazardGroup,
    pub hat_group: LazardGroup,
    /// Quotient basis of `G/N` mapped into hat-quotient coordinates.
    pub embedding: ResidueMatrix,
    pub injective: bool,
    pub multiplicative_pairs_checked: usize,
    pub multiplicative: bool,
    /// `log_p |N|` against `(c-1) * r_hat`.
    pub n_log: u64,
    pub n_bound_log: u64,
}

impl GroupStructureReport {
    pub fn all_true(&self) -> bool {
        self.lie.verdicts.all()
            && self.injective
            && self.multiplicative
            && self.n_log <= self.n_bound_log
    }
}

/// Present `log G` as a quotient of the free algebra on a minimal
/// generating set, run the Lie pipeline, and transport everything back
/// through exp.
pub fn group_structure_pipeline(
    group: &LazardGroup,
    pair_samples: usize,
    seed: u64,
) -> Result<GroupStructureReport> {
    let alg = group.algebra();
    match pipeline_with_generators(group, &minimal_generators(alg), pair_samples, seed) {
        Ok(report) => Ok(report),
        Err(Error::PresentationFailure(_)) => {
            // retry with the full basis as the generating set
            let gens: Vec<LieElement> = (0..alg.dim()).map(|i| alg.basis_element(i)).collect();
            pipeline_with_generators(group, &gens, pair_samples, seed)
        }
        Err(e) => Err(e),
    }
}

/// Lift a basis of `L/(pL + [L,L])` to a minimal generating set.
fn minimal_generators(alg: &FiniteLieAlgebra) -> Vec<LieElement> {
    let frattini = alg.p_multiple().sum(&alg.derived());
    let d = alg.min_generators() as usize;
    let mut chosen: Vec<LieElement> = Vec::new();
    let mut span = frattini.clone();
    for i in 0..alg.dim() {
        if chosen.len() == d {
            break;
        }
        let cand = alg.basis_element(i);
        if span.contains(cand.coords()) {
            continue;
        }
        let mut rows = span.rows();
        rows.push(cand.coords().to_vec());
        span = Sublattice::span(alg, &rows);
        chosen.push(cand);
    }
    chosen
}

fn pipeline_with_generators(
    group: &LazardGroup,
    gens: &[LieElement],
    pair_samples: usize,
    seed: u64,
) -> Result<GroupStructureReport> {
    let alg = group.algebra();
    let p = alg.modulus().p();
    let c = group.class().max(1) as u32;
    let d = gens.len().max(1) as u32;

    // evaluate Hall monomials on the generators: the presentation map
    let basis = hat::shared_hall_basis(d, c)?;
    let mut images: Vec<LieElement> = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let img = match basis.node(i) {
            HallNode::Generator(g) => gens
                .get((g - 1) as usize)
                .cloned()
                .unwrap_or_else(|| alg.zero_element()),
            HallNode::Pair { left, right } => {
                alg.bracket(&images[left as usize], &images[right as usize])?
            }
        };
        images.push(img);
    }
    // surjectivity of the induced map
    let image_rows: Vec<Vec<BigUint>> = images.iter().map(|x| x.coords().to_vec()).collect();
    let image_span = Sublattice::span(alg, &image_rows);
    if !image_span.is_full(alg) {
        return Err(Error::PresentationFailure(
            "generator images do not span log(G)".into(),
        ));
    }

    // kernel of the presentation, in free-algebra coordinates, plus the
    // depth relations p^{E_L} L_c(X) lost to truncation
    let e_l = alg.modulus().exponent();
    let map_matrix = ResidueMatrix::from_rows(alg.modulus().clone(), alg.dim(), image_rows);
    let relations = {
        let rel: Vec<Vec<BigUint>> = alg
            .orders()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e < e_l)
            .map(|(i, &e)| {
                let mut r = vec![BigUint::zero(); alg.dim()];
                r[i] = alg.modulus().p_pow(e);
                r
            })
            .collect();
        ResidueMatrix::from_rows(alg.modulus().clone(), alg.dim(), rel)
    };
    let kernel = preimage_lattice(&map_matrix, &relations);
    let mut kernel_rows: Vec<Vec<BigUint>> =
        kernel.matrix().iter_rows().map(|r| r.to_vec()).collect();
    for i in 0..basis.len() {
        let mut r = vec![BigUint::zero(); basis.len()];
        r[i] = alg.modulus().p_pow(e_l);
        kernel_rows.push(r);
    }

    let lie = hat::structure_pipeline(d, c, p, &kernel_rows)?;

    // the presented quotient must be isomorphic to log(G): build the
    // explicit iso presented -> L through the generator images
    let iso_rows: Vec<Vec<BigUint>> = (0..lie.presented.dim())
        .map(|a| {
            let in_free = lie.presented_map.basis_lift(a);
            // evaluate sum of Hall coordinates against the images
            let mut acc = alg.zero_element();
            for (i, coeff) in in_free.iter().enumerate() {
                if !coeff.is_zero() {
                    acc = alg.add(&acc, &alg.scalar_mul(coeff, &images[i]));
                }
            }
            acc.into_coords()
        })
        .collect();
    let iso = ResidueMatrix::from_rows(alg.modulus().clone(), alg.dim(), iso_rows.clone());
    verify_isomorphism(&lie.presented, alg, &iso).map_err(|e| {
        Error::PresentationFailure(format!("presented copy does not match log(G): {e}"))
    })?;

    // N = exp(J), transported through the iso into G-coordinates
    let n_rows: Vec<Vec<BigUint>> = lie
        .kernel_j
        .rows()
        .iter()
        .map(|r| iso.apply_row(r))
        .collect();
    let n_lat = Sublattice::span(alg, &n_rows);
    let n = Subgroup::from_lattice(group, n_lat.clone())?;
    if !n.is_normal(group)? {
        return Err(Error::Internal("exp(J) is not normal".into()));
    }
    let n_log = n.log_order(group);
    if n_log != lie.j_log {
        return Err(Error::Internal("kernel size changed under transport".into()));
    }

    // G/N and the hat group
    let (qn_alg, qn_map) = quotient(alg, &n_lat)?;
    let quotient_group = LazardGroup::new(qn_alg)?;
    let hat_group = LazardGroup::new(lie.hat.algebra.clone())?;

    // embedding G/N -> hat quotient: lift to L, express in the presented
    // copy (inverse iso by solving), then apply the Lie embedding
    let inv_iso = invert_map(alg, &iso)?;
    let mut emb_rows: Vec<Vec<BigUint>> = Vec::new();
    for a in 0..quotient_group.algebra().dim() {
        let in_l = qn_map.basis_lift(a);
        let in_presented = inv_iso.apply_row(&in_l);
        emb_rows.push(lie.embedding.apply_row(&in_presented));
    }
    let embedding = ResidueMatrix::from_rows(
        hat_group.algebra().modulus().clone(),
        hat_group.algebra().dim(),
        emb_rows,
    );

    // injectivity: the kernel of the embedding on G/N is trivial
    let hat_relations = {
        let hat_alg = hat_group.algebra();
        let rel: Vec<Vec<BigUint>> = hat_alg
            .orders()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e < hat_alg.modulus().exponent())
            .map(|(i, &e)| {
                let mut r = vec![BigUint::zero(); hat_alg.dim()];
                r[i] = hat_alg.modulus().p_pow(e);
                r
            })
            .collect();
        ResidueMatrix::from_rows(
            hat_alg.modulus().clone(),
            hat_alg.dim(),
            rel,
        )
    };
    let emb_kernel = preimage_lattice(&embedding, &hat_relations);
    let qn_alg2 = quotient_group.algebra();
    let kernel_lat = Sublattice::span(
        qn_alg2,
        &emb_kernel
            .matrix()
            .iter_rows()
            .map(|r| r.to_vec())
            .collect::<Vec<_>>(),
    );
    let injective = kernel_lat.is_zero(qn_alg2);

    // multiplicativity on random pairs
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut multiplicative = true;
    for _ in 0..pair_samples {
        let x = random_element(&mut rng, quotient_group.algebra());
        let y = random_element(&mut rng, quotient_group.algebra());
        let lhs = embedding.apply_row(quotient_group.multiply(&x, &y)?.coords());
        let lhs = hat_group.algebra().element_from_residues(lhs);
        let fx = hat_group
            .algebra()
            .element_from_residues(embedding.apply_row(x.coords()));
        let fy = hat_group
            .algebra()
            .element_from_residues(embedding.apply_row(y.coords()));
        let rhs = hat_group.multiply(&fx, &fy)?;
        if lhs != rhs {
            multiplicative = false;
            break;
        }
    }

    let n_bound_log = (c as u64 - 1) * lie.hull.rank() as u64;
    Ok(GroupStructureReport {
        lie,
        generators: gens.to_vec(),
        n,
        quotient_group,
        hat_group,
        embedding,
        injective,
        multiplicative_pairs_checked: pair_samples,
        multiplicative,
        n_log,
        n_bound_log,
    })
}

fn random_element(rng: &mut ChaCha8Rng, alg: &FiniteLieAlgebra) -> LieElement {
    let coords: Vec<BigInt> = alg
        .orders()
        .iter()
        .map(|&e| {
            let bound = (alg.modulus().p() as i128).pow(e.min(8));
            BigInt::from(rng.gen_range(0..bound.max(1)))
        })
        .collect();
    alg.element(coords).expect("random element")
}

/// Invert a bijective linear map given by basis images, by solving each
/// target basis vector against the image rows.
fn invert_map(to: &FiniteLieAlgebra, map: &ResidueMatrix) -> Result<ResidueMatrix> {
    let md = to.modulus().clone();
    // rows of `map` plus the target relations span the target; solve each
    // unit vector and keep the coefficients on the map rows
    let mut rows: Vec<Vec<BigUint>> = (0..map.rows()).map(|i| map.row_vec(i)).collect();
    let k = rows.len();
    for (i, &e) in to.orders().iter().enumerate() {
        if e < md.exponent() {
            let mut r = vec![BigUint::zero(); to.dim()];
            r[i] = md.p_pow(e);
            rows.push(r);
        }
    }
    let m = ResidueMatrix::from_rows(md.clone(), to.dim(), rows);
    let (h, t) = crate::padic::howell_with_transform(&m);
    let mut inv_rows = Vec::new();
    for i in 0..to.dim() {
        let mut unit = vec![BigUint::zero(); to.dim()];
        unit[i] = BigUint::from(1u32);
        let alpha = h.solve(&unit).ok_or_else(|| {
            Error::Internal("map is not surjective; cannot invert".into())
        })?;
        // back through the transform to original-row coefficients, keep
        // only the map rows
        let over_rows = t.apply_row(&alpha);
        let coeffs: Vec<BigUint> = over_rows[..k].to_vec();
        inv_rows.push(coeffs);
    }
    let inv = ResidueMatrix::from_rows(md, k, inv_rows);
    // sanity: inv then map is the identity on the target basis elements
    for i in 0..to.dim() {
        let mut unit = vec![BigUint::zero(); to.dim()];
        unit[i] = BigUint::from(1u32);
        let round = map.apply_row(inv.row(i));
        let lhs = to.element_from_residues(round);
        let rhs = to.element_from_residues(unit);
        if lhs != rhs {
            return Err(Error::Internal("map inversion failed".into()));
        }
    }
    Ok(inv)
}

/// Exact `|G : G^p|` against the bound `p^{d + d^2 + ... + d^{p-1}}`, the
/// regularity consequence `|G : G^p| = |Omega_1(G)|`, and sectional rank
/// on both sides of the correspondence.
pub struct RankBoundCheck {
    pub index_log: u64,
    pub bound_log: u64,
    pub index_within_bound: bool,
    /// `|G : G^p| = |Omega_1(G)|`.
    pub regularity_identity: bool,
    pub lie_rank: RankValue,
    pub group_rank: Option<u64>,
    pub rank_within_bound: bool,
}

impl RankBoundCheck {
    pub fn all_true(&self) -> bool {
        self.index_within_bound && self.regularity_identity && self.rank_within_bound
    }
}

pub fn rank_bound_check(group: &LazardGroup, cap_log: u64) -> Result<RankBoundCheck> {
    let alg = group.algebra();
    let p = alg.modulus().p();
    let d = alg.min_generators();
    let gp = gp_power_subgroup(group, cap_log)?;
    let index_log = gp.index_log(group);
    let mut bound_log: u64 = 0;
    let mut power: u64 = 1;
    for _ in 1..p {
        power = power.saturating_mul(d.max(1));
        bound_log = bound_log.saturating_add(power);
    }
    let omega = omega_1_group(group, cap_log)?;
    let regularity_identity = omega.log_order(group) == index_log;

    let lie_rank = rank_sectional(alg, cap_log.min(DEFAULT_EXHAUSTIVE_CAP_LOG));
    let group_rank = group_sectional_rank(group, cap_log.min(DEFAULT_EXHAUSTIVE_CAP_LOG)).ok();
    let rank_value = match lie_rank {
        RankValue::Exact(v) => v,
        RankValue::Bound(v) => v,
    };
    Ok(RankBoundCheck {
        index_log,
        bound_log,
        index_within_bound: index_log <= bound_log,
        regularity_identity,
        lie_rank,
        rank_within_bound: rank_value <= bound_log,
        group_rank,
    })
}

/// Sectional rank on the group side: enumerate sublattices, keep those that
/// are genuinely subgroups (fixed-point of group closure), and take the
/// maximal Frattini quotient dimension computed with group operations.
pub fn group_sectional_rank(group: &LazardGroup, cap_log: u64) -> Result<u64> {
    let alg = group.algebra();
    let lattices = crate::lie::enumerate_sublattices(alg, cap_log)?;
    let mut best = 0u64;
    for lat in &lattices {
        if !lat.is_subalgebra(alg) {
            continue;
        }
        let rows: Vec<LieElement> = lat
            .rows()
            .into_iter()
            .map(|r| alg.element_from_residues(r))
            .collect();
        let closed = subgroup_generated(group, &rows)?;
        if closed.lattice != *lat {
            continue; // not product-closed: not a subgroup carrier
        }
        best = best.max(sublattice_min_generators(alg, lat));
    }
    Ok(best)
}
