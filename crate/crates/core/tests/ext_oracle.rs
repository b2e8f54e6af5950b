//! Ext of F/2F against several targets, compared with N_v / 2 N_v.

use std::collections::BTreeMap;

use kgring_core::intlinalg::rat;
use kgring_core::module::{ext1, free_module};
use kgring_core::{is_exact, Arrow, GradedGroup, GroupPart, IntMatrix, KGModule, Localization, Parity};
use num_bigint::BigInt;
use num_integer::Integer;

fn z() -> Localization {
    Localization::integers()
}

/// Number of Z/2 summands of A / 2A.
fn mod_two_rank(part: &GroupPart) -> usize {
    part.rank + part.torsion.iter().filter(|d| d.is_even()).count()
}

fn elementary_two(n: usize) -> GroupPart {
    GroupPart::new(0, vec![BigInt::from(2); n])
}

fn free_mod_two(v: u8) -> KGModule {
    let f = free_module(&[2], z(), &[v]).unwrap();
    let two = f.module.identity_matrix().scale(&rat(2));
    f.module.quotient(&two).unwrap().module
}

fn witness() -> KGModule {
    let comps = vec![
        GradedGroup::free(z(), 1, 0),
        GradedGroup::free(z(), 1, 0),
        GradedGroup::zero(z()),
    ];
    let mut blocks = BTreeMap::new();
    blocks.insert((0, Arrow::A01, vec![1]), IntMatrix::from_ints(&[&[1]]));
    blocks.insert((0, Arrow::A10, vec![0]), IntMatrix::from_ints(&[&[2]]));
    KGModule::from_blocks(&[2], z(), comps, &blocks).unwrap()
}

#[test]
fn quotient_by_two_is_exact() {
    for v in 0..3u8 {
        let m = free_mod_two(v);
        assert!(is_exact(&m).unwrap().is_exact());
        assert!(m.orders().iter().all(|d| *d == BigInt::from(2)));
    }
}

#[test]
fn order_four_against_itself() {
    let m = free_mod_two(1);
    let e = ext1(&m, &m).unwrap();
    assert_eq!(e.even(), &elementary_two(2));
    assert!(e.odd().is_zero());
    assert_eq!(e.order(), Some(BigInt::from(4)));
}

#[test]
fn agrees_with_reduction_mod_two() {
    let f3 = free_module(&[2], z(), &[2]).unwrap().module;
    let targets = vec![
        witness(),
        free_mod_two(0),
        free_mod_two(2),
        f3.clone(),
        f3.suspend(),
        witness().suspend(),
    ];
    for v in 0..3u8 {
        let m = free_mod_two(v);
        for n in &targets {
            let e = ext1(&m, n).unwrap();
            let c = n.component(&[v]);
            for parity in [Parity::Even, Parity::Odd] {
                let got = e.part(parity);
                assert!(got.rank == 0, "{v} {parity}: {got}");
                assert!(got.torsion.iter().all(|d| *d == BigInt::from(2)));
                assert_eq!(got.torsion.len(), mod_two_rank(c.part(parity)), "{v} {parity}");
            }
        }
    }
}
