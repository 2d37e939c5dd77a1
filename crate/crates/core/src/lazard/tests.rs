use super::*;
use crate::padic::Modulus;

const CAP: u64 = DEFAULT_EXHAUSTIVE_CAP_LOG;

fn md(p: u64, e: u32) -> Modulus {
    Modulus::new(p, e).unwrap()
}

fn heisenberg(p: u64, e: u32) -> FiniteLieAlgebra {
    FiniteLieAlgebra::new(
        md(p, e),
        vec![e, e, e],
        &[((0, 1), vec![(2, BigInt::from(1))])],
    )
    .unwrap()
}

fn abelian(p: u64, orders: Vec<u32>) -> FiniteLieAlgebra {
    let e = orders.iter().copied().max().unwrap_or(1);
    FiniteLieAlgebra::abelian(md(p, e), orders).unwrap()
}

#[test]
fn exp_log_round_trip() {
    let h = heisenberg(5, 2);
    let g = exp_group(h.clone()).unwrap();
    // log is identically the algebra: same structure constants
    let back = log_algebra(&g);
    assert_eq!(back.orders(), h.orders());
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(back.structure_constants(i, j), h.structure_constants(i, j));
        }
    }
    assert_eq!(g.class(), 2);
}

#[test]
fn exp_requires_class_below_p() {
    // class 2 at p = 2 is rejected
    let h = heisenberg(2, 1);
    assert!(matches!(
        exp_group(h),
        Err(crate::error::Error::ClassTooHigh { .. })
    ));
}

#[test]
fn abelian_group_is_addition() {
    let g = exp_group(abelian(5, vec![2, 1])).unwrap();
    let alg = g.algebra();
    let x = alg.element(vec![BigInt::from(7), BigInt::from(2)]).unwrap();
    let y = alg.element(vec![BigInt::from(20), BigInt::from(4)]).unwrap();
    assert_eq!(g.multiply(&x, &y).unwrap(), alg.add(&x, &y));
}

#[test]
fn extraspecial_example() {
    // exp of the free class-2 image mod p: nonabelian of order p^3 and
    // exponent p
    let g = exp_group(heisenberg(5, 1)).unwrap();
    assert_eq!(g.log_size(), 3);
    let alg = g.algebra();
    let b1 = alg.basis_element(0);
    let b2 = alg.basis_element(1);
    assert_ne!(g.multiply(&b1, &b2).unwrap(), g.multiply(&b2, &b1).unwrap());
    // exponent p: every element has x^p = 1
    for x in g.elements(CAP).unwrap() {
        assert!(g.p_power(&x).unwrap().is_zero());
    }
}

#[test]
fn power_subgroup_examples() {
    // exponent-p group: G^p is trivial
    let g = exp_group(heisenberg(5, 1)).unwrap();
    let gp = gp_power_subgroup(&g, CAP).unwrap();
    assert_eq!(gp.log_order(&g), 0);

    // log(G^p) = p log(G) on a deeper instance
    let g = exp_group(heisenberg(5, 2)).unwrap();
    let gp = gp_power_subgroup(&g, CAP).unwrap();
    assert_eq!(gp.lattice, g.algebra().p_multiple());
}

#[test]
fn omega_group_examples() {
    let g = exp_group(abelian(5, vec![2, 1])).unwrap();
    let omega = omega_1_group(&g, CAP).unwrap();
    assert_eq!(omega.log_order(&g), 2); // order 25
    assert_eq!(omega.lattice, g.algebra().omega_1());
}

#[test]
fn subgroup_generated_matches_subalgebra() {
    let g = exp_group(heisenberg(5, 2)).unwrap();
    let alg = g.algebra();
    let s = vec![alg.basis_element(0), alg.basis_element(1)];
    let k = subgroup_generated(&g, &s).unwrap();
    assert!(k.lattice.is_full(alg));
    let line = subgroup_generated(&g, &[alg.basis_element(0)]).unwrap();
    assert_eq!(line.log_order(&g), 2);
    // <b1> is not normal in the Heisenberg group
    assert!(!line.is_normal(&g).unwrap());
}

#[test]
fn gamma_series_group_matches_lie() {
    for alg in [heisenberg(5, 1), heisenberg(7, 2), abelian(5, vec![2, 2])] {
        let g = exp_group(alg).unwrap();
        let chain = gamma_series_group(&g).unwrap();
        let lie_chain = g.algebra().lower_central_series();
        assert_eq!(chain.len(), lie_chain.len());
        for (a, b) in chain.iter().zip(&lie_chain) {
            assert_eq!(&a.lattice, b);
        }
    }
}

#[test]
fn dictionary_on_fixtures() {
    for (i, alg) in [
        heisenberg(5, 1),
        heisenberg(5, 2),
        abelian(5, vec![2, 1]),
        heisenberg(7, 1),
    ]
    .into_iter()
    .enumerate()
    {
        let g = exp_group(alg).unwrap();
        let report = correspondence_report(&g, CAP, 1000 + i as u64).unwrap();
        assert!(report.all(), "fixture {i}: {report:?}");
    }
}

#[test]
fn gp_report_examples() {
    // free class-2 on 2 generators, orders p^2
    let free2 = FiniteLieAlgebra::new(
        md(5, 2),
        vec![2, 2, 2],
        &[((0, 1), vec![(2, BigInt::from(1))])],
    )
    .unwrap();
    let g = exp_group(free2).unwrap();
    let report = gp_is_powerful_pcentral_omegaep(&g, CAP).unwrap();
    assert!(report.all_true());
    assert_eq!(report.presented_gp.log_size(), 3);

    // abelian: all three hold with a free-style cover
    let g = exp_group(abelian(7, vec![2, 2])).unwrap();
    assert!(gp_is_powerful_pcentral_omegaep(&g, CAP).unwrap().all_true());

    // exponent p: G^p trivial, everything vacuously true
    let g = exp_group(heisenberg(5, 1)).unwrap();
    let report = gp_is_powerful_pcentral_omegaep(&g, CAP).unwrap();
    assert!(report.all_true());
    assert_eq!(report.gp.log_order(&g), 0);
}

#[test]
fn one_parameter_sweep() {
    let g = exp_group(heisenberg(5, 2)).unwrap();
    let samples: Vec<_> = g.elements(CAP).unwrap().into_iter().take(500).collect();
    assert!(one_parameter_check(&g, &samples, 5).unwrap());
}

#[test]
fn extension_and_carlson_degenerate_a() {
    // A = Q: B = G^{p^2}
    let free2 = FiniteLieAlgebra::new(
        md(5, 2),
        vec![2, 2, 2],
        &[((0, 1), vec![(2, BigInt::from(1))])],
    )
    .unwrap();
    let g = exp_group(free2).unwrap();
    let alg = g.algebra().clone();
    // central element of order p: p * b3
    let z = alg.scalar_mul(&num_bigint::BigUint::from(5u32), &alg.basis_element(2));
    let ext = ExtensionSpec::new(g, z).unwrap();
    let a_gens: Vec<LieElement> = (0..3).map(|i| ext.group.algebra().basis_element(i)).collect();
    let report = carlson_subgroup(&ext, &a_gens, CAP).unwrap();
    assert!(report.all_true(), "degenerate A: index {} bound {}", report.index_log, report.index_bound_log);

    // A trivial: C is the kernel extension, B is trivial
    let report = carlson_subgroup(&ext, &[], CAP).unwrap();
    assert!(report.all_true());
    assert_eq!(report.b.log_order(&ext.group), 0);
}

#[test]
fn extension_kernel_must_be_cp() {
    let free2 = FiniteLieAlgebra::new(
        md(5, 2),
        vec![2, 2, 2],
        &[((0, 1), vec![(2, BigInt::from(1))])],
    )
    .unwrap();
    let g = exp_group(free2).unwrap();
    let z = g.algebra().basis_element(2); // order p^2, too big
    assert!(matches!(
        ExtensionSpec::new(g, z),
        Err(crate::error::Error::KernelNotCp { .. })
    ));
}

#[test]
fn group_structure_pipeline_fixtures() {
    // elementary abelian rank 2: N trivial
    let g = exp_group(abelian(5, vec![1, 1])).unwrap();
    let report = group_structure_pipeline(&g, 50, 7).unwrap();
    assert!(report.all_true());
    assert_eq!(report.n_log, 0);

    // Heisenberg mod p
    let g = exp_group(heisenberg(5, 1)).unwrap();
    let report = group_structure_pipeline(&g, 100, 11).unwrap();
    assert!(report.all_true(), "verdicts: {:?}", report.lie.verdicts);

    // free class-2 over Z/p^2
    let free2 = FiniteLieAlgebra::new(
        md(5, 2),
        vec![2, 2, 2],
        &[((0, 1), vec![(2, BigInt::from(1))])],
    )
    .unwrap();
    let g = exp_group(free2).unwrap();
    let report = group_structure_pipeline(&g, 100, 13).unwrap();
    assert!(report.all_true());
    assert!(report.injective && report.multiplicative);
}

#[test]
fn rank_bound_check_fixtures() {
    // elementary abelian rank 2 at p=5: |G:G^p| = 25, bound huge
    let g = exp_group(abelian(5, vec![1, 1])).unwrap();
    let r = rank_bound_check(&g, CAP).unwrap();
    assert_eq!(r.index_log, 2);
    assert!(r.all_true());

    // Heisenberg mod 5: |G:G^p| = 125 = |Omega_1|, rank 2 on both sides
    let g = exp_group(heisenberg(5, 1)).unwrap();
    let r = rank_bound_check(&g, CAP).unwrap();
    assert_eq!(r.index_log, 3);
    assert!(r.regularity_identity);
    assert!(r.all_true());
    assert_eq!(r.group_rank, Some(2));
    assert!(matches!(r.lie_rank, crate::lie::RankValue::Exact(2)));

    // free class-2 over p^2: regularity identity again
    let free2 = FiniteLieAlgebra::new(
        md(5, 2),
        vec![2, 2, 2],
        &[((0, 1), vec![(2, BigInt::from(1))])],
    )
    .unwrap();
    let g = exp_group(free2).unwrap();
    let r = rank_bound_check(&g, CAP).unwrap();
    assert!(r.regularity_identity);
    assert!(r.all_true());
}
