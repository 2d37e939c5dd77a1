use super::BchSeries;
use crate::error::Result;
use crate::hall::HallNode;
use crate::lie::{FiniteLieAlgebra, LieElement};
use num_bigint::BigInt;
use num_traits::Signed;

/// Group product `x * y = Z(x, y)` by evaluating the BCH series in the
/// algebra: each Hall monomial is an iterated bracket, its coefficient is
/// reduced into `Z/p^E`. Brackets that vanish in the algebra are skipped
/// before their coefficient is reduced, so only genuinely contributing
/// denominators can raise `DenominatorNotInvertible` (the signature of
/// class >= p misuse).
pub fn group_multiply(
    alg: &FiniteLieAlgebra,
    x: &LieElement,
    y: &LieElement,
    series: &BchSeries,
) -> Result<LieElement> {
    let basis = series.basis();
    // evaluate every basis monomial bottom-up; sharing makes this linear in
    // the basis size
    let mut evals: Vec<LieElement> = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let e = match basis.node(i) {
            HallNode::Generator(1) => x.clone(),
            HallNode::Generator(_) => y.clone(),
            HallNode::Pair { left, right } => alg.bracket(
                &evals[left as usize],
                &evals[right as usize],
            )?,
        };
        evals.push(e);
    }
    let mut acc = alg.zero_element();
    for (idx, coeff) in series.terms() {
        let ev = &evals[*idx];
        if ev.is_zero() {
            continue;
        }
        let reduced = alg.modulus().reduce_rational(coeff)?;
        acc = alg.add(&acc, &alg.scalar_mul(reduced.value(), ev));
    }
    Ok(acc)
}

/// Group inverse: `-x` (verified by the group-axiom suites, not assumed
/// beyond the series identities).
pub fn group_inverse(alg: &FiniteLieAlgebra, x: &LieElement) -> LieElement {
    alg.neg(x)
}

/// `x^k` by square-and-multiply under the BCH product.
pub fn group_power(
    alg: &FiniteLieAlgebra,
    x: &LieElement,
    k: &BigInt,
    series: &BchSeries,
) -> Result<LieElement> {
    if k.is_negative() {
        let inv = group_inverse(alg, x);
        return group_power(alg, &inv, &(-k), series);
    }
    let mut result = alg.zero_element();
    let mut base = x.clone();
    let bits = k.bits();
    for bit in 0..bits {
        if k.bit(bit) {
            result = group_multiply(alg, &result, &base, series)?;
        }
        if bit + 1 < bits {
            base = group_multiply(alg, &base, &base, series)?;
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::bch_series;
    use crate::padic::Modulus;

    fn heisenberg(p: u64, e: u32) -> FiniteLieAlgebra {
        FiniteLieAlgebra::new(
            Modulus::new(p, e).unwrap(),
            vec![e, e, e],
            &[((0, 1), vec![(2, BigInt::from(1))])],
        )
        .unwrap()
    }

    #[test]
    fn abelian_multiplication_is_addition() {
        let a = FiniteLieAlgebra::abelian(Modulus::new(5, 2).unwrap(), vec![2, 1]).unwrap();
        let s = bch_series(1).unwrap();
        let x = a.element(vec![BigInt::from(7), BigInt::from(3)]).unwrap();
        let y = a.element(vec![BigInt::from(21), BigInt::from(4)]).unwrap();
        assert_eq!(group_multiply(&a, &x, &y, &s).unwrap(), a.add(&x, &y));
    }

    #[test]
    fn heisenberg_example() {
        // b1 * b2 = b1 + b2 + (1/2)[b1,b2] = b1 + b2 + 3 b3 mod 5
        let h = heisenberg(5, 1);
        let s = bch_series(2).unwrap();
        let prod = group_multiply(&h, &h.basis_element(0), &h.basis_element(1), &s).unwrap();
        let expected = h
            .element(vec![BigInt::from(1), BigInt::from(1), BigInt::from(3)])
            .unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn identity_and_inverse() {
        let h = heisenberg(5, 2);
        let s = bch_series(2).unwrap();
        let x = h
            .element(vec![BigInt::from(7), BigInt::from(11), BigInt::from(3)])
            .unwrap();
        assert_eq!(
            group_multiply(&h, &x, &h.zero_element(), &s).unwrap(),
            x.clone()
        );
        let inv = group_inverse(&h, &x);
        assert!(group_multiply(&h, &x, &inv, &s).unwrap().is_zero());
        assert!(group_inverse(&h, &h.zero_element()).is_zero());
    }

    #[test]
    fn power_examples() {
        let h = heisenberg(5, 2);
        let s = bch_series(2).unwrap();
        let x = h
            .element(vec![BigInt::from(3), BigInt::from(4), BigInt::from(9)])
            .unwrap();
        assert!(group_power(&h, &x, &BigInt::from(0), &s).unwrap().is_zero());
        // x^p = p x on a sweep (BCH of x with itself collapses)
        for a in 0..5i64 {
            for b in 0..5i64 {
                let y = h
                    .element(vec![BigInt::from(a), BigInt::from(b), BigInt::from(a + b)])
                    .unwrap();
                let pow = group_power(&h, &y, &BigInt::from(5), &s).unwrap();
                let lin = h.scalar_mul(&num_bigint::BigUint::from(5u32), &y);
                assert_eq!(pow, lin);
            }
        }
        // negative powers invert
        let m3 = group_power(&h, &x, &BigInt::from(-3), &s).unwrap();
        let p3 = group_power(&h, &x, &BigInt::from(3), &s).unwrap();
        assert!(group_multiply(&h, &m3, &p3, &s).unwrap().is_zero());
    }

    #[test]
    fn denominator_misuse_is_reported() {
        // class 2 algebra at p = 2: the 1/2 coefficient multiplies a
        // nonvanishing bracket
        let h = heisenberg(2, 1);
        let s = bch_series(2).unwrap();
        let r = group_multiply(&h, &h.basis_element(0), &h.basis_element(1), &s);
        assert!(matches!(
            r,
            Err(crate::error::Error::DenominatorNotInvertible { .. })
        ));
    }
}
