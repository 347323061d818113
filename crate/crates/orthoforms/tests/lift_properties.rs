mod common;

use common::{d2_prime_block, fj_equal};
use orthoforms::jacobi::{prec_for_qmax, theta_block, JacobiExpansion, ThetaBlockSpec};
use orthoforms::laurent::ZERO_MONO;
use orthoforms::lifts::{borch, fj_log, fj_symmetry_check, grit, psi_from_block, psi_input, verify_theta_identity};
use orthoforms::Q;
use proptest::prelude::*;

fn hecke_matches_oracle(phi: &JacobiExpansion, m: i64) {
    assert_eq!(common::hecke_oracle_failures(phi, m), 0, "T({m})");
}

fn blocks() -> Vec<JacobiExpansion> {
    let p = prec_for_qmax(8);
    vec![
        theta_block(&ThetaBlockSpec::d_family(2).unwrap(), p).unwrap(),
        theta_block(&ThetaBlockSpec::a_family(2).unwrap(), p).unwrap(),
        psi_input(3, 8).unwrap(),
    ]
}

#[test]
fn hecke_agrees_with_double_coset_sum() {
    for phi in blocks() {
        for m in [2, 3] {
            hecke_matches_oracle(&phi, m);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hecke_oracle_on_combinations(a in -3i64..=3, b in -3i64..=3, m in 1i64..=4) {
        prop_assume!(a != 0 || b != 0);
        let p = prec_for_qmax(6);
        let x = psi_input(2, 6).unwrap();
        let y = psi_from_block(&d2_prime_block(), p).unwrap();
        let phi = x.scale(&Q::from(a)).add(&y.scale(&Q::from(b))).unwrap();
        hecke_matches_oracle(&phi, m);
        prop_assert!(phi.hecke(m).unwrap().periodicity_witness().unwrap().is_none());
    }

    #[test]
    fn fj_symmetry_of_additive_lifts(n in 1usize..=4, ximax in 1i64..=3, qmax in 1i64..=3) {
        let phi = theta_block(&ThetaBlockSpec::d_family(n).unwrap(), 24 * (ximax * qmax + 2)).unwrap();
        let g = grit(&phi, ximax, qmax).unwrap();
        if ximax == qmax {
            prop_assert!(fj_symmetry_check(&g));
        }
        prop_assert_eq!(g.weight.clone(), phi.weight.clone());
    }

    #[test]
    fn borch_weight_bookkeeping(m in 1usize..=8) {
        let psi = psi_input(m, 1).unwrap();
        let b = borch(&psi, 1, 1).unwrap();
        prop_assert_eq!(b.weight, Q::from(12 - m as i64));
    }
}

#[test]
fn borch_is_multiplicative() {
    let psi = psi_input(2, 4).unwrap();
    let b = borch(&psi, 3, 3).unwrap();
    let doubled = borch(&psi.scale(&Q::from(2)), 3, 3).unwrap();
    assert!(fj_equal(&doubled, &b.mul(&b).unwrap()));
    assert_eq!(doubled.weight, Q::from(20));

    let psi2 = psi_from_block(&d2_prime_block(), psi.prec()).unwrap();
    let b2 = borch(&psi2, 3, 3).unwrap();
    assert_eq!(b2.weight, Q::from(8));
    let sum = borch(&psi.add(&psi2).unwrap(), 3, 3).unwrap();
    assert!(fj_equal(&sum, &b.mul(&b2).unwrap()));
    assert_eq!(sum.weight, Q::from(18));
}

#[test]
fn exp_log_round_trip() {
    for m in 1..=4 {
        let psi = psi_input(m, 4).unwrap();
        let b = borch(&psi, 3, 3).unwrap();
        let logs = fj_log(&b).unwrap();
        assert_eq!(logs.len(), 2);
        for (j, l) in logs.iter().enumerate() {
            let s = psi.hecke(j as i64 + 1).unwrap().neg();
            let p = l.prec().min(s.prec());
            assert!(p >= 24, "D{m}: no overlap at ξ^{}", j + 1);
            assert_eq!(
                l.truncate(p).sorted_terms(),
                s.truncate(p).sorted_terms(),
                "D{m} ξ^{}",
                j + 1
            );
        }
    }
}

#[test]
fn theta_identities_and_symmetry() {
    let specs: Vec<ThetaBlockSpec> = (1..=4)
        .map(|m| ThetaBlockSpec::d_family(m).unwrap())
        .chain((1..=3).map(|n| ThetaBlockSpec::a_family(n).unwrap()))
        .collect();
    for spec in &specs {
        let r = verify_theta_identity(spec, 3, 3).unwrap();
        assert!(r.equal, "{}: {:?}", r.lattice, r.mismatches.first());
        assert_eq!(r.xi_order, Q::one());
        let th = theta_block(spec, prec_for_qmax(10)).unwrap();
        assert!(fj_symmetry_check(&grit(&th, 3, 3).unwrap()));
        let psi = psi_from_block(spec, prec_for_qmax(4)).unwrap();
        assert!(fj_symmetry_check(&borch(&psi, 3, 3).unwrap()));
    }
}

#[test]
fn psi_q0_terms() {
    for m in 1..=6usize {
        let psi = psi_input(m, 2).unwrap();
        let q0 = psi.poly(0).unwrap();
        assert_eq!(q0.coeff(&ZERO_MONO), Q::from(2 * (12 - m as i64)));
        assert_eq!(q0.len(), 2 * m + 1);
        for (l, c) in q0.iter() {
            if *l != ZERO_MONO {
                assert_eq!(c, &Q::one());
                assert_eq!(psi.norm(l), Q::one());
            }
        }
        assert_eq!(psi.q0_invariants().unwrap().c, Q::one());
        assert!(psi.orders().all(|(_, p)| p.iter().all(|(_, c)| c.is_integer())));
    }
    assert_eq!(psi_input(11, 1).unwrap().coeff(0, &ZERO_MONO), Q::from(2));
    assert_eq!(borch(&psi_input(9, 1).unwrap(), 1, 1).unwrap().weight, Q::from(3));
}

#[test]
fn periodicity_of_constructed_forms() {
    for phi in blocks() {
        assert!(phi.periodicity_witness().unwrap().is_none());
        for m in 2..=3 {
            assert!(phi.hecke(m).unwrap().periodicity_witness().unwrap().is_none());
        }
    }
    let th = theta_block(&ThetaBlockSpec::classical(&[4, 4, 3, 2, 1]), prec_for_qmax(6)).unwrap();
    assert!(th.periodicity_witness().unwrap().is_none());
}
