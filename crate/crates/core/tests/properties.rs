use kgring_core::divisible::{build_standard_module, decompose, hensel_root, CyclotomicModule, StandardTriple};
use kgring_core::intlinalg::{is_prime, GroupPart};
use kgring_core::module::{free_module, hom};
use kgring_core::ring::{rewrite_system, Poly};
use kgring_core::splitting::bezout;
use kgring_core::{is_exact, Arrow, GradedGroup, IntMatrix, KGModule, Localization};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

fn arrow() -> impl Strategy<Value = Arrow> {
    prop::sample::select(Arrow::ALL.to_vec())
}

/// A composable word starting at a random arrow.
fn word() -> impl Strategy<Value = Vec<Arrow>> {
    (arrow(), prop::collection::vec(0usize..2, 0..7)).prop_map(|(first, turns)| {
        let mut w = vec![first];
        for t in turns {
            let s = w.last().unwrap().source();
            let next: Vec<Arrow> = Arrow::ALL.into_iter().filter(|a| a.target() == s).collect();
            w.push(next[t % next.len()]);
        }
        w
    })
}

fn point(r: &Localization, free: usize, torsion: &[u64]) -> KGModule {
    let part = GroupPart::new(free, torsion.iter().map(|&d| BigInt::from(d)).collect());
    let comp = GradedGroup::new(r.clone(), part, GroupPart::default()).unwrap();
    KGModule::from_actions(&[], r.clone(), vec![comp], vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_idempotent(p in prop::sample::select(vec![2u64, 3, 5]), w in word()) {
        let sys = rewrite_system(p).unwrap();
        let f = sys.normal_form(&Poly::word(p, &w));
        prop_assert_eq!(sys.normal_form(&f), f.clone());
        for (m, _) in f.terms() {
            prop_assert!(!sys.is_reducible(m));
        }
    }

    #[test]
    fn multiplication_is_associative(p in prop::sample::select(vec![2u64, 3]), a in word(), b in word(), c in word()) {
        let sys = rewrite_system(p).unwrap();
        let (a, b, c) = (Poly::word(p, &a), Poly::word(p, &b), Poly::word(p, &c));
        let left = sys.multiply(&sys.multiply(&a, &b), &c);
        let right = sys.multiply(&a, &sys.multiply(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bezout_identity(a in 1i64..5000, b in 2i64..5000) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        prop_assume!(a.gcd(&b).is_one());
        let (m, n) = bezout(&a, &b).unwrap();
        prop_assert!((&m * &a + &n * &b).is_one());
        prop_assert!(&m * 2 > -b.clone() && &m * 2 <= b);
    }

    #[test]
    fn hensel_roots_are_primitive(p in 3u64..200, k in 1u32..5, pick in 0usize..8) {
        prop_assume!(is_prime(p));
        let qs: Vec<u64> = (2..p).filter(|&q| is_prime(q) && (p - 1) % q == 0).collect();
        let q = qs[pick % qs.len()];
        let u = hensel_root(p, q, k).unwrap();
        let modulus = BigInt::from(p).pow(k);
        prop_assert!(u.modpow(&BigInt::from(q), &modulus).is_one());
        prop_assert!(!(&u % BigInt::from(p)).is_one());
    }

    #[test]
    fn hensel_rejects_non_divisors(p in 3u64..200, q in 2u64..50) {
        prop_assume!(is_prime(p) && is_prime(q) && p != q && (p - 1) % q != 0);
        prop_assert!(hensel_root(p, q, 1).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn standard_modules_round_trip(
        p in prop::sample::select(vec![2u64, 3]),
        x in 0usize..3,
        y in 0usize..2,
        z in 0usize..2,
        tx in 0usize..2,
        ty in 0usize..2,
    ) {
        // torsion coprime to p carrying a root of the cyclotomic polynomial
        let (tors, root) = if p == 2 { (5u64, -1i64) } else { (7, 2) };
        let r = Localization::new(p).unwrap();
        let cyc = |free: usize, t: usize| {
            let free_part = CyclotomicModule::free(p, r.clone(), free).unwrap();
            let base = point(&r, free_part.base.dim(), &vec![tors; t]);
            let n = base.dim();
            let mut theta = IntMatrix::zeros(n, n);
            let d = free_part.base.dim();
            theta.set_block(0, 0, &free_part.theta);
            for i in d..n {
                theta.set(i, i, kgring_core::intlinalg::rat(root));
            }
            CyclotomicModule::new(p, base, theta).unwrap()
        };
        let t = StandardTriple::new(p, point(&r, x, &vec![tors; tx]), cyc(y, ty), cyc(z, 0)).unwrap();
        let m = build_standard_module(&t).unwrap();
        prop_assert!(m.validate().is_valid());
        prop_assert!(is_exact(&m).unwrap().is_exact());
        let back = decompose(&m, 0).unwrap();
        prop_assert_eq!(back.x.components(), t.x.components());
        prop_assert_eq!(back.y.base.components(), t.y.base.components());
        prop_assert_eq!(back.z.base.components(), t.z.base.components());
    }

    #[test]
    fn yoneda_on_quotients(
        p in prop::sample::select(vec![2u64, 3]),
        v in 0u8..3,
        w in 0u8..3,
        entries in prop::collection::vec(-3i64..4, 1..4),
        n in 2i64..5,
    ) {
        let z = Localization::integers();
        let f = free_module(&[p], z.clone(), &[w]).unwrap().module;
        let mut g = IntMatrix::zeros(f.dim(), entries.len());
        for (c, &e) in entries.iter().enumerate() {
            let row = (c * 7 + e.unsigned_abs() as usize) % f.dim();
            g.set(row, c, kgring_core::intlinalg::rat(e * n));
        }
        let q = f.quotient(&g).unwrap().module;
        let fv = free_module(&[p], z, &[v]).unwrap().module;
        prop_assert_eq!(&hom(&fv, &q).unwrap(), q.component(&[v]));
    }
}
