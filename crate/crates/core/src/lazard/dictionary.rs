use super::{
    gamma_series_group, gp_power_subgroup, is_p_central_group, is_powerful_group,
    min_generators_group, omega_1_group, subgroup_generated, LazardGroup, Subgroup,
};
use crate::error::Result;
use crate::lie::{ideal_closure, quotient, subalgebra_generated, LieElement, Sublattice};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Executable form of the exp/log dictionary: each clause is decided by
/// computing both sides independently and comparing them exactly.
#[derive(Debug, Clone, Copy)]
pub struct CorrespondenceReport {
    /// (a) a carrier is a normal subgroup iff it is an ideal.
    pub normal_iff_ideal: bool,
    /// (a) the projection onto the quotient is multiplicative, so the group
    /// quotient is the exp of the algebra quotient.
    pub quotient_matches: bool,
    /// (b) `log(Omega_1(G)) = Omega_1(log G)`.
    pub omega_matches: bool,
    /// (b) `log(G^p) = p log(G)`.
    pub gp_matches: bool,
    /// (c) group class equals Lie class, series by series.
    pub class_matches: bool,
    /// (d) powerful group iff powerful algebra.
    pub powerful_matches: bool,
    /// (e) p-central group iff p-central algebra.
    pub p_central_matches: bool,
    /// (f) a set generates the group iff it generates the algebra, and the
    /// minimal generator counts agree.
    pub generation_matches: bool,
}

impl CorrespondenceReport {
    pub fn all(&self) -> bool {
        self.normal_iff_ideal
            && self.quotient_matches
            && self.omega_matches
            && self.gp_matches
            && self.class_matches
            && self.powerful_matches
            && self.p_central_matches
            && self.generation_matches
    }

    pub fn named(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("normal-iff-ideal", self.normal_iff_ideal),
            ("quotient-log", self.quotient_matches),
            ("omega1-log", self.omega_matches),
            ("power-subgroup-log", self.gp_matches),
            ("class-equality", self.class_matches),
            ("powerful-equivalence", self.powerful_matches),
            ("p-central-equivalence", self.p_central_matches),
            ("generation-equivalence", self.generation_matches),
        ]
    }
}

fn random_element(rng: &mut ChaCha8Rng, group: &LazardGroup) -> LieElement {
    let alg = group.algebra();
    let coords: Vec<BigInt> = alg
        .orders()
        .iter()
        .map(|&e| {
            let bound = alg.modulus().p().pow(e.min(8)) as i128;
            BigInt::from(rng.gen_range(0..bound.max(1)))
        })
        .collect();
    alg.element(coords).expect("random element")
}

pub fn correspondence_report(
    group: &LazardGroup,
    cap_log: u64,
    seed: u64,
) -> Result<CorrespondenceReport> {
    let alg = group.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // sample carriers: characteristic lattices plus closures of random sets
    let mut carriers: Vec<Sublattice> = vec![
        alg.omega_1(),
        alg.p_multiple(),
        alg.derived(),
        alg.center(),
        Sublattice::full(alg),
        Sublattice::zero(alg),
    ];
    for i in 0..alg.dim() {
        carriers.push(subalgebra_generated(alg, &[alg.basis_element(i)]));
    }
    for _ in 0..3 {
        let x = random_element(&mut rng, group);
        carriers.push(ideal_closure(alg, &[x]));
    }

    let mut normal_iff_ideal = true;
    let mut quotient_matches = true;
    for lat in &carriers {
        if !lat.is_subalgebra(alg) {
            continue; // not a subgroup carrier at all
        }
        let k = Subgroup::from_lattice(group, lat.clone())?;
        let normal = k.is_normal(group)?;
        let ideal = lat.is_ideal(alg);
        if normal != ideal {
            normal_iff_ideal = false;
            continue;
        }
        if !normal {
            continue;
        }
        // quotient comparison: the projection must be a group homomorphism
        // onto exp of the quotient algebra
        let (q_alg, map) = quotient(alg, lat)?;
        let q_group = LazardGroup::new(q_alg)?;
        let exhaustive = group.log_size() <= cap_log.min(4);
        let pairs: Vec<(LieElement, LieElement)> = if exhaustive {
            let elems = group.elements(cap_log)?;
            elems
                .iter()
                .flat_map(|x| elems.iter().map(move |y| (x.clone(), y.clone())))
                .collect()
        } else {
            (0..200)
                .map(|_| (random_element(&mut rng, group), random_element(&mut rng, group)))
                .collect()
        };
        for (x, y) in pairs {
            let lhs = map.project_element(q_group.algebra(), &group.multiply(&x, &y)?);
            let rhs = q_group.multiply(
                &map.project_element(q_group.algebra(), &x),
                &map.project_element(q_group.algebra(), &y),
            )?;
            if lhs != rhs {
                quotient_matches = false;
                break;
            }
        }
    }

    let omega_matches = omega_1_group(group, cap_log)?.lattice == alg.omega_1();
    let gp_matches = gp_power_subgroup(group, cap_log)?.lattice == alg.p_multiple();

    let group_chain = gamma_series_group(group)?;
    let lie_chain = alg.lower_central_series();
    let class_matches = group_chain.len() == lie_chain.len()
        && group_chain
            .iter()
            .zip(&lie_chain)
            .all(|(g, l)| &g.lattice == l);

    let powerful_matches = is_powerful_group(group, cap_log)? == alg.is_powerful();
    let p_central_matches = is_p_central_group(group, cap_log)? == alg.is_p_central();

    let mut generation_matches =
        min_generators_group(group, cap_log)? == alg.min_generators();
    for _ in 0..4 {
        let k = 1 + (rng.gen::<u8>() as usize % 3).min(alg.dim().max(1) - 1);
        let set: Vec<LieElement> = (0..=k).map(|_| random_element(&mut rng, group)).collect();
        let group_side = subgroup_generated(group, &set)?.lattice;
        let lie_side = subalgebra_generated(alg, &set);
        if group_side != lie_side {
            generation_matches = false;
        }
        // the "generates everything" readings agree as well
        if group_side.is_full(alg) != lie_side.is_full(alg) {
            generation_matches = false;
        }
    }

    Ok(CorrespondenceReport {
        normal_iff_ideal,
        quotient_matches,
        omega_matches,
        gp_matches,
        class_matches,
        powerful_matches,
        p_central_matches,
        generation_matches,
    })
}
