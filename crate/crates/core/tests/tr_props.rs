use num::bigint::BigInt;
use proptest::prelude::*;
use std::sync::Arc;

use tr0::groups::{ClassId, Group};
use tr0::trzero::{exactness_check, TRElem, TRLimitElem};
use tr0::witt::TruncationSet;

const CATALOG: [&str; 15] = [
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "S3", "S4", "D4", "Q8",
];

fn catalog_group(ix: usize) -> Arc<Group> {
    Group::catalog(CATALOG[ix % CATALOG.len()]).unwrap()
}

fn divisors(r: u64) -> Vec<u64> {
    (1..=r).filter(|d| r % d == 0).collect()
}

type Raw = Vec<(usize, usize, i8)>;

fn elem(group: &Arc<Group>, r: u64, raw: &Raw) -> TRElem {
    let divs = divisors(r);
    let coeffs = raw.iter().map(|&(ti, ci, v)| {
        let t = divs[ti % divs.len()];
        let c = ClassId((ci % group.num_classes()) as u32);
        ((t, c), BigInt::from(v as i64))
    });
    TRElem::from_coeffs(Arc::clone(group), r, coeffs).unwrap()
}

fn raw() -> impl Strategy<Value = Raw> {
    prop::collection::vec((any::<usize>(), any::<usize>(), -4i8..=4), 0..5)
}

proptest! {
    #[test]
    fn index_one_operators_are_identities(gix in 0usize..15, r in 1u64..25, a in raw()) {
        let g = catalog_group(gix);
        let x = elem(&g, r, &a);
        prop_assert_eq!(x.restriction(1).unwrap(), x.clone());
        prop_assert_eq!(x.frobenius(1).unwrap(), x.clone());
        prop_assert_eq!(x.verschiebung(1).unwrap(), x);
    }

    #[test]
    fn restrictions_compose(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), ti in any::<usize>(), a in raw()) {
        let g = catalog_group(gix);
        let x = elem(&g, r, &a);
        // s*t | r: draw t | r, then s | r/t
        let t = divisors(r)[ti % divisors(r).len()];
        let s = divisors(r / t)[si % divisors(r / t).len()];
        prop_assert_eq!(
            x.restriction(t).unwrap().restriction(s).unwrap(),
            x.restriction(s * t).unwrap()
        );
    }

    #[test]
    fn frobenii_compose(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), ti in any::<usize>(), a in raw()) {
        let g = catalog_group(gix);
        let x = elem(&g, r, &a);
        let t = divisors(r)[ti % divisors(r).len()];
        let s = divisors(r / t)[si % divisors(r / t).len()];
        prop_assert_eq!(
            x.frobenius(t).unwrap().frobenius(s).unwrap(),
            x.frobenius(s * t).unwrap()
        );
    }

    #[test]
    fn verschiebungs_compose(gix in 0usize..15, r in 1u64..25, s in 1u64..5, t in 1u64..5, a in raw()) {
        let g = catalog_group(gix);
        let x = elem(&g, r, &a);
        prop_assert_eq!(
            x.verschiebung(t).unwrap().verschiebung(s).unwrap(),
            x.verschiebung(s * t).unwrap()
        );
    }

    #[test]
    fn restriction_commutes_with_frobenius(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), ti in any::<usize>(), a in raw()) {
        let g = catalog_group(gix);
        let x = elem(&g, r, &a);
        let t = divisors(r)[ti % divisors(r).len()];
        let s = divisors(r / t)[si % divisors(r / t).len()];
        prop_assert_eq!(
            x.frobenius(t).unwrap().restriction(s).unwrap(),
            x.restriction(s).unwrap().frobenius(t).unwrap()
        );
    }

    #[test]
    fn restriction_commutes_with_verschiebung(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), ti in any::<usize>(), a in raw()) {
        let g = catalog_group(gix);
        let divs = divisors(r);
        let t = divs[ti % divs.len()];
        let s = divisors(r / t)[si % divisors(r / t).len()];
        // x lives at level r/t; both composites land at level r/s
        let x = elem(&g, r / t, &a);
        prop_assert_eq!(
            x.verschiebung(t).unwrap().restriction(s).unwrap(),
            x.restriction(s).unwrap().verschiebung(t).unwrap()
        );
    }

    #[test]
    fn frobenius_of_verschiebung_has_gcd_multiplicity(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), ti in any::<usize>(), a in raw()) {
        use num::Integer;
        let g = catalog_group(gix);
        let divs = divisors(r);
        let s = divs[si % divs.len()];
        let t = divs[ti % divs.len()];
        let d = s.gcd(&t);
        let x = elem(&g, r / t, &a);
        let lhs = x.verschiebung(t).unwrap().frobenius(s).unwrap();
        let rhs = x
            .frobenius(s / d)
            .unwrap()
            .verschiebung(t / d)
            .unwrap()
            .scale(&BigInt::from(d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn restriction_kills_verschiebung_when_st_exceeds(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), ti in any::<usize>(), a in raw()) {
        let g = catalog_group(gix);
        let divs = divisors(r);
        let s = divs[si % divs.len()];
        let t = divs[ti % divs.len()];
        prop_assume!(r % (s * t) != 0);
        let x = elem(&g, r / t, &a);
        prop_assert!(x.verschiebung(t).unwrap().restriction(s).unwrap().is_zero());
    }

    #[test]
    fn bracket_laws(gix in 0usize..15, r in 1u64..25, e in any::<usize>(), ti in any::<usize>()) {
        let g = catalog_group(gix);
        let e = e % g.order();
        let t = divisors(r)[ti % divisors(r).len()];
        let x = TRElem::bracket(&g, e, r).unwrap();
        prop_assert_eq!(x.restriction(t).unwrap(), TRElem::bracket(&g, e, r / t).unwrap());
        prop_assert_eq!(
            x.frobenius(t).unwrap(),
            TRElem::bracket(&g, g.pow_idx_u64(e, t), r / t).unwrap()
        );
    }

    #[test]
    fn shifted_unit_multiplications_compose(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), ti in any::<usize>(), a in raw()) {
        use num::Integer;
        let g = catalog_group(gix);
        let divs = divisors(r);
        let s = divs[si % divs.len()];
        let t = divs[ti % divs.len()];
        let l = s.lcm(&t);
        prop_assume!(r % l == 0);
        let x = elem(&g, r, &a);
        let composed = x.mult_by_v_one(t).unwrap().mult_by_v_one(s).unwrap();
        let direct = x.mult_by_v_one(l).unwrap().scale(&BigInt::from(s.gcd(&t)));
        prop_assert_eq!(composed, direct);
    }

    #[test]
    fn operators_are_additive(gix in 0usize..15, r in 1u64..25, si in any::<usize>(), a in raw(), b in raw()) {
        let g = catalog_group(gix);
        let s = divisors(r)[si % divisors(r).len()];
        let (x, y) = (elem(&g, r, &a), elem(&g, r, &b));
        let sum = x.add(&y).unwrap();
        prop_assert_eq!(
            sum.restriction(s).unwrap(),
            x.restriction(s).unwrap().add(&y.restriction(s).unwrap()).unwrap()
        );
        prop_assert_eq!(
            sum.frobenius(s).unwrap(),
            x.frobenius(s).unwrap().add(&y.frobenius(s).unwrap()).unwrap()
        );
        prop_assert_eq!(
            sum.verschiebung(s).unwrap(),
            x.verschiebung(s).unwrap().add(&y.verschiebung(s).unwrap()).unwrap()
        );
    }

    #[test]
    fn exactness_holds_for_catalog_levels(gix in 0usize..15, r in 1u64..25, pi in 0usize..3) {
        let g = catalog_group(gix);
        let primes: Vec<u64> = [2u64, 3, 5, 7, 11, 13, 17, 19, 23]
            .into_iter()
            .filter(|p| r % p == 0)
            .collect();
        prop_assume!(!primes.is_empty());
        let p = primes[pi % primes.len()];
        let report = exactness_check(&g, r, p).unwrap();
        prop_assert!(report.pass(), "{}", report.display(&g));
    }

    #[test]
    fn display_round_trips(gix in 0usize..15, r in 1u64..25, a in raw()) {
        let g = catalog_group(gix);
        let x = elem(&g, r, &a);
        prop_assert_eq!(TRElem::parse(&x.display(), &g).unwrap(), x);
    }

    #[test]
    fn limit_projection_commutes_with_frobenius(gix in 0usize..15, a in raw(), p in prop::sample::select(vec![2u64, 3, 5]), ri in any::<usize>()) {
        let g = catalog_group(gix);
        let big = 60u64;
        let set = TruncationSet::divisors_of(big).unwrap();
        let divs = divisors(big);
        let coeffs = a.iter().map(|&(ti, ci, v)| {
            let t = divs[ti % divs.len()];
            let c = ClassId((ci % g.num_classes()) as u32);
            ((t, c), BigInt::from(v as i64))
        });
        let series = TRLimitElem::from_parts(Arc::clone(&g), set, coeffs, true).unwrap();
        let quotient_levels = divisors(big / p);
        let r = quotient_levels[ri % quotient_levels.len()];
        let lhs = series.frobenius_prime(p).unwrap().project(r).unwrap();
        let rhs = series.project(r * p).unwrap().frobenius(p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
