use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use proptest::prelude::*;
use std::sync::Arc;

use tr0::bass::{
    bezout_witness, commutator_witness_check, frobenius_invariance_check, linnell_admissible,
    minimal_exponent, permutation_condition, sl2_unipotent_conjugacy, trace_shadow,
    vanishing_certificate, VanishingVerdict,
};
use tr0::groupring::HH0Vector;
use tr0::groups::sl2::RatMatrix2;
use tr0::groups::{ClassId, Group};
use tr0::trzero::TRLimitElem;
use tr0::witt::TruncationSet;

const CATALOG: [&str; 15] = [
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "S3", "S4", "D4", "Q8",
];

fn catalog_group(ix: usize) -> Arc<Group> {
    Group::catalog(CATALOG[ix % CATALOG.len()]).unwrap()
}

/// smallest divisor-closed set containing 1..=exponent, as divisors of the
/// lcm; large enough for every invariance check the reports run
fn invariance_set(group: &Group) -> TruncationSet {
    let mut l = 1u64;
    for s in 2..=group.exponent() {
        l = l.lcm(&s);
    }
    TruncationSet::divisors_of(l).unwrap()
}

fn rank_from(group: &Arc<Group>, raw: &[(usize, i8)]) -> HH0Vector {
    let coeffs = raw
        .iter()
        .map(|&(c, v)| (ClassId((c % group.num_classes()) as u32), BigInt::from(v as i64)));
    HH0Vector::from_coeffs(Arc::clone(group), coeffs).unwrap()
}

proptest! {
    #[test]
    fn invariance_for_all_s_equals_permutation_condition(gix in 0usize..15,
            raw in prop::collection::vec((any::<usize>(), -3i8..=3), 0..4)) {
        let g = catalog_group(gix);
        let rank = rank_from(&g, &raw);
        let shadow = trace_shadow(&rank, &invariance_set(&g));
        let invariant = (1..=g.exponent())
            .all(|s| frobenius_invariance_check(&shadow, s).unwrap());
        prop_assert_eq!(invariant, permutation_condition(&rank, &g).holds());
    }

    #[test]
    fn identity_supported_shadows_are_invariant_and_certified(gix in 0usize..15, a0 in -9i64..=9) {
        let g = catalog_group(gix);
        let rank = HH0Vector::from_coeffs(
            Arc::clone(&g),
            [(g.identity_class(), BigInt::from(a0))],
        ).unwrap();
        let shadow = trace_shadow(&rank, &invariance_set(&g));
        for s in 1..=g.exponent() {
            prop_assert!(frobenius_invariance_check(&shadow, s).unwrap());
        }
        let cert = vanishing_certificate(&shadow).unwrap();
        prop_assert_eq!(cert.verdict, VanishingVerdict::AllHigherVanish);
    }

    #[test]
    fn injected_high_support_is_refuted(gix in 0usize..15, a0 in -3i64..=3,
            ti in any::<usize>(), ci in any::<usize>(), v in 1i64..=5, sign in any::<bool>()) {
        let g = catalog_group(gix);
        let set = invariance_set(&g);
        let high: Vec<u64> = set.elems().iter().copied().filter(|&t| t > 1).collect();
        let t = high[ti % high.len()];
        let c = ClassId((ci % g.num_classes()) as u32);
        let v = if sign { v } else { -v };
        let tampered = TRLimitElem::from_parts(
            Arc::clone(&g),
            set,
            [((1, g.identity_class()), BigInt::from(a0)), ((t, c), BigInt::from(v))],
            true,
        ).unwrap();
        let cert = vanishing_certificate(&tampered).unwrap();
        // some chain breaks; the injected key's own chain is among them,
        // though the reported counterexample may sit below it
        prop_assert!(matches!(cert.verdict, VanishingVerdict::Counterexample(_)));
        let own = cert
            .chains
            .iter()
            .find(|ch| ch.t == t && ch.class == c)
            .unwrap();
        prop_assert!(!own.closed);
        // the smallest prime of t already witnesses the invariance failure
        let p = (2..=t).find(|d| t % d == 0).unwrap();
        prop_assert!(!frobenius_invariance_check(&tampered, p).unwrap());
    }

    #[test]
    fn linnell_matches_element_level_brute_force(gix in 0usize..15) {
        let g = catalog_group(gix);
        let report = linnell_admissible(&g);
        let exponent = g.exponent();
        for e in 0..g.order() {
            let admissible_oracle = (1..=exponent).any(|m| {
                (1..=exponent).all(|s| {
                    let mut power = e;
                    for _ in 0..m {
                        power = g.pow_idx_u64(power, s);
                    }
                    g.class_of(power) == g.class_of(e)
                })
            });
            let verdict = report
                .verdicts
                .iter()
                .find(|v| v.class == g.class_of(e))
                .unwrap();
            prop_assert_eq!(admissible_oracle, verdict.admissible);
        }
        prop_assert_eq!(report.admissible_classes(), vec![g.identity_class()]);
    }

    #[test]
    fn idempotent_pipeline_is_invariant_iff_identity_supported(gix in 0usize..15,
            keep in any::<bool>(), e1 in any::<usize>(), e2 in any::<usize>(), v in -3i64..=3) {
        use tr0::groupring::{GRMatrix, GroupRingElem};
        let g = catalog_group(gix);
        let mut idem = GRMatrix::zero(Arc::clone(&g), 2).unwrap();
        if keep {
            idem.set(0, 0, GroupRingElem::one(Arc::clone(&g)));
        }
        let a = GroupRingElem::term(Arc::clone(&g), BigInt::from(v), e1 % g.order())
            .add(&GroupRingElem::term(Arc::clone(&g), BigInt::one(), e2 % g.order()))
            .unwrap();
        let u = GRMatrix::elementary(Arc::clone(&g), 2, 0, 1, &a).unwrap();
        let u_inv = GRMatrix::elementary(Arc::clone(&g), 2, 0, 1, &a.neg()).unwrap();
        let conj = u.mat_mul(&idem).unwrap().mat_mul(&u_inv).unwrap();
        let rank = conj.hattori_stallings_rank().unwrap();
        // generated idempotents have identity-class rank, hence invariance
        prop_assert!(rank.nonidentity_support().is_empty());
        let shadow = trace_shadow(&rank, &invariance_set(&g));
        for s in 1..=g.exponent() {
            prop_assert!(frobenius_invariance_check(&shadow, s).unwrap());
        }
    }

    #[test]
    fn bezout_witnesses_verify_and_normalize(m in 1u64..=20) {
        let w = bezout_witness(m);
        prop_assert!(w.verify());
        prop_assert_eq!(w.s.clone(), BigInt::from(2).pow(m as u32) - BigInt::one());
        let b = w.s_m_minus_one();
        prop_assert!(w.two_m_minus_one().gcd(&b).is_one());
        if m >= 2 {
            prop_assert!(w.k >= BigInt::zero() && w.k < b);
        }
    }

    #[test]
    fn minimal_exponent_kills_every_small_cycle(n in 0usize..12) {
        let m = minimal_exponent(n);
        for k in 1..=n as u64 {
            prop_assert!((m.clone() % BigInt::from(k)).is_zero());
        }
    }

    #[test]
    fn commutator_identity_on_squaring_conjugators(which in any::<usize>()) {
        // every 3-cycle in S3 is conjugate to its square by a transposition
        let g = Group::catalog("S3").unwrap();
        let cycles = ["[2,3,1]", "[3,1,2]"];
        let swaps = ["[1,3,2]", "[2,1,3]", "[3,2,1]"];
        let a = g.parse_elem(cycles[which % 2]).unwrap();
        let squared = g.pow_idx_u64(a, 2);
        let x = swaps
            .iter()
            .map(|s| g.parse_elem(s).unwrap())
            .find(|&x| g.mul_idx(g.mul_idx(x, a), g.inv_idx(x)) == squared)
            .unwrap();
        let check = commutator_witness_check(&g, a, x, g.identity(), 1);
        prop_assert!(check.pass());
    }

    #[test]
    fn sl2_witness_exists_exactly_for_squares(p in -30i64..=30, q in 1i64..=30) {
        prop_assume!(p != 0);
        let k = BigRational::new(BigInt::from(p), BigInt::from(q));
        let witness = sl2_unipotent_conjugacy(&k).unwrap();
        // independent criterion on the reduced fraction
        let is_square = |n: &BigInt| {
            if n.is_negative() {
                return false;
            }
            let r = n.sqrt();
            &(&r * &r) == n
        };
        let expect = k.is_positive() && is_square(k.numer()) && is_square(k.denom());
        prop_assert_eq!(witness.is_some(), expect);
        if let Some(h) = witness {
            let one = RatMatrix2::unipotent(&BigRational::one());
            let conj = h.mul(&one).mul(&h.inv().unwrap());
            prop_assert_eq!(conj, RatMatrix2::unipotent(&k));
        }
    }
}
