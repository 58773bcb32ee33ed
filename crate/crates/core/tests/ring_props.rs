use num::bigint::BigInt;
use proptest::prelude::*;
use std::sync::Arc;

use tr0::groupring::{GRMatrix, GroupRingElem};
use tr0::groups::Group;

const CATALOG: [&str; 6] = ["C2", "C6", "S3", "S4", "D4", "Q8"];

fn catalog_group(ix: usize) -> Arc<Group> {
    Group::catalog(CATALOG[ix % CATALOG.len()]).unwrap()
}

type Raw = Vec<(usize, i8)>;

fn ring_elem(group: &Arc<Group>, raw: &Raw) -> GroupRingElem {
    let terms = raw
        .iter()
        .map(|&(e, v)| (e % group.order(), BigInt::from(v as i64)));
    GroupRingElem::from_terms(Arc::clone(group), terms)
}

fn raw() -> impl Strategy<Value = Raw> {
    prop::collection::vec((any::<usize>(), -4i8..=4), 0..5)
}

proptest! {
    #[test]
    fn multiplication_is_associative(gix in 0usize..6, a in raw(), b in raw(), c in raw()) {
        let g = catalog_group(gix);
        let (a, b, c) = (ring_elem(&g, &a), ring_elem(&g, &b), ring_elem(&g, &c));
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn multiplication_distributes(gix in 0usize..6, a in raw(), b in raw(), c in raw()) {
        let g = catalog_group(gix);
        let (a, b, c) = (ring_elem(&g, &a), ring_elem(&g, &b), ring_elem(&g, &c));
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn one_is_neutral(gix in 0usize..6, a in raw()) {
        let g = catalog_group(gix);
        let a = ring_elem(&g, &a);
        let one = GroupRingElem::one(Arc::clone(&g));
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn class_projection_kills_commutators(gix in 0usize..6, a in raw(), b in raw()) {
        let g = catalog_group(gix);
        let (a, b) = (ring_elem(&g, &a), ring_elem(&g, &b));
        let ab = a.mul(&b).unwrap().hh0_project();
        let ba = b.mul(&a).unwrap().hh0_project();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn class_projection_is_additive(gix in 0usize..6, a in raw(), b in raw()) {
        let g = catalog_group(gix);
        let (a, b) = (ring_elem(&g, &a), ring_elem(&g, &b));
        prop_assert_eq!(
            a.add(&b).unwrap().hh0_project(),
            a.hh0_project().add(&b.hh0_project()).unwrap()
        );
    }

    #[test]
    fn trace_is_cyclic_in_classes(gix in 0usize..6, n in 1usize..4,
                                  a in prop::collection::vec(raw(), 16),
                                  b in prop::collection::vec(raw(), 16)) {
        let g = catalog_group(gix);
        let mut ma = GRMatrix::zero(Arc::clone(&g), n).unwrap();
        let mut mb = GRMatrix::zero(Arc::clone(&g), n).unwrap();
        for i in 0..n {
            for j in 0..n {
                ma.set(i, j, ring_elem(&g, &a[i * n + j]));
                mb.set(i, j, ring_elem(&g, &b[i * n + j]));
            }
        }
        let ab = ma.mat_mul(&mb).unwrap().trace_to_hh0();
        let ba = mb.mat_mul(&ma).unwrap().trace_to_hh0();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn rank_is_conjugation_invariant(gix in 0usize..6, n in 2usize..4,
                                     diag in prop::collection::vec(any::<bool>(), 3),
                                     i in any::<usize>(), j in any::<usize>(),
                                     off in raw()) {
        let g = catalog_group(gix);
        // idempotent: 0/1 diagonal projector
        let mut e = GRMatrix::zero(Arc::clone(&g), n).unwrap();
        for (d, &keep) in diag.iter().take(n).enumerate() {
            if keep {
                e.set(d, d, GroupRingElem::one(Arc::clone(&g)));
            }
        }
        prop_assume!(e.is_idempotent().unwrap());
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let a = ring_elem(&g, &off);
        let u = GRMatrix::elementary(Arc::clone(&g), n, i, j, &a).unwrap();
        let u_inv = GRMatrix::elementary(Arc::clone(&g), n, i, j, &a.neg()).unwrap();
        let conj = u.mat_mul(&e).unwrap().mat_mul(&u_inv).unwrap();
        prop_assert!(conj.is_idempotent().unwrap());
        prop_assert_eq!(
            conj.hattori_stallings_rank().unwrap(),
            e.hattori_stallings_rank().unwrap()
        );
    }

    #[test]
    fn block_sums_add_ranks(gix in 0usize..6, keep_a in any::<bool>(), keep_b in any::<bool>()) {
        let g = catalog_group(gix);
        let block = |keep: bool| {
            let mut e = GRMatrix::zero(Arc::clone(&g), 2).unwrap();
            if keep {
                e.set(0, 0, GroupRingElem::one(Arc::clone(&g)));
            }
            e
        };
        let (ea, eb) = (block(keep_a), block(keep_b));
        let sum = ea.block_diag(&eb).unwrap();
        prop_assert_eq!(
            sum.hattori_stallings_rank().unwrap(),
            ea.hattori_stallings_rank().unwrap()
                .add(&eb.hattori_stallings_rank().unwrap()).unwrap()
        );
    }

    #[test]
    fn matrix_format_round_trips(gix in 0usize..6, n in 1usize..4,
                                 entries in prop::collection::vec(raw(), 9)) {
        let g = catalog_group(gix);
        let mut m = GRMatrix::zero(Arc::clone(&g), n).unwrap();
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, ring_elem(&g, &entries[i * n + j]));
            }
        }
        let text = m.format("spec.grp");
        let re = GRMatrix::parse(&text, Arc::clone(&g)).unwrap();
        prop_assert_eq!(re, m);
    }
}
