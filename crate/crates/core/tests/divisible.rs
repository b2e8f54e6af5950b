use kgring_core::divisible::{
    build_standard_module, central_idempotents, decompose, divisibility, full_decompose, hensel_root, reconstruct,
    CyclotomicModule, StandardTriple,
};
use kgring_core::intlinalg::GroupPart;
use kgring_core::{is_exact, GradedGroup, IntMatrix, KGModule, Localization};
use num_bigint::BigInt;

fn ring(primes: &[u64]) -> Localization {
    Localization::from_primes(primes.iter().copied()).unwrap()
}

fn point(r: &Localization, rank: usize) -> KGModule {
    KGModule::from_actions(&[], r.clone(), vec![GradedGroup::free(r.clone(), rank, 0)], vec![]).unwrap()
}

fn triple(p: u64) -> StandardTriple {
    let r = ring(&[p]);
    let y = CyclotomicModule::free(p, r.clone(), 1).unwrap();
    let z = CyclotomicModule::free(p, r.clone(), 2).unwrap();
    StandardTriple::new(p, point(&r, 1), y, z).unwrap()
}

#[test]
fn standard_modules_are_exact_and_divisible() {
    for p in [2u64, 3, 5] {
        let m = build_standard_module(&triple(p)).unwrap();
        assert!(m.validate().is_valid(), "{p}: {:?}", m.validate().failures);
        assert!(is_exact(&m).unwrap().is_exact(), "{p}");
        assert_eq!(divisibility(&m, 0).unwrap(), [true; 3]);
        central_idempotents(&m, 0).unwrap().verify().unwrap();
    }
}

#[test]
fn decompose_recovers_pieces() {
    for p in [2u64, 3, 5] {
        let m = build_standard_module(&triple(p)).unwrap();
        let t = decompose(&m, 0).unwrap();
        assert_eq!(t.x.dim(), 1);
        assert_eq!(t.y.base.dim(), (p - 1) as usize);
        assert_eq!(t.z.base.dim(), 2 * (p - 1) as usize);
        let d = full_decompose(&m, &[0]).unwrap();
        let r = reconstruct(&d).unwrap();
        assert!(r.iso.is_linear());
    }
}

#[test]
fn torsion_piece_over_integers() {
    let z = Localization::integers();
    let x = KGModule::from_actions(
        &[],
        z.clone(),
        vec![GradedGroup::new(
            z.clone(),
            GroupPart::new(0, vec![BigInt::from(3)]),
            GroupPart::default(),
        )
        .unwrap()],
        vec![],
    )
    .unwrap();
    let y = CyclotomicModule::new(2, x.clone(), IntMatrix::from_ints(&[&[-1]])).unwrap();
    let zero = CyclotomicModule::zero(2, &[], z).unwrap();
    let m = build_standard_module(&StandardTriple::new(2, x.clone(), y, zero).unwrap()).unwrap();
    assert!(is_exact(&m).unwrap().is_exact());
    let t = decompose(&m, 0).unwrap();
    assert_eq!(t.x.components(), x.components());
    assert!(t.z.base.is_zero());
}

#[test]
fn nine_pieces_over_six() {
    let r = ring(&[2, 3]);
    let inner = build_standard_module(
        &StandardTriple::new(
            3,
            point(&r, 1),
            CyclotomicModule::free(3, r.clone(), 1).unwrap(),
            CyclotomicModule::free(3, r.clone(), 1).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    let minus = inner.identity_matrix().scale(&kgring_core::intlinalg::rat(-1));
    let cyc = CyclotomicModule::new(2, inner.clone(), minus).unwrap();
    let m = build_standard_module(&StandardTriple::new(2, inner, cyc.clone(), cyc).unwrap()).unwrap();
    assert_eq!(m.primes(), &[2, 3]);
    assert!(m.validate().is_valid());
    assert!(is_exact(&m).unwrap().is_exact());
    let d = full_decompose(&m, &[0, 1]).unwrap();
    assert_eq!(d.nonzero().count(), 9);
    let rec = reconstruct(&d).unwrap();
    assert_eq!(rec.labels.len(), 9);
    assert!(rec.iso.is_linear());
}

#[test]
fn hensel_values() {
    assert_eq!(hensel_root(7, 3, 2).unwrap(), BigInt::from(30));
    for k in 1..5u32 {
        assert_eq!(hensel_root(5, 2, k).unwrap(), BigInt::from(5).pow(k) - 1);
    }
    assert!(hensel_root(5, 3, 1).is_err());
}

#[test]
fn norm_matrices_of_standard_modules() {
    use kgring_core::divisible::{standard_module_with_basis, Summand};
    use kgring_core::ring::presentation::{norm_s1, norm_s2, norm_t0, norm_t2};
    for p in [2u64, 3, 5] {
        let r = ring(&[p]);
        let t = StandardTriple::new(
            p,
            point(&r, 1),
            CyclotomicModule::free(p, r.clone(), 1).unwrap(),
            CyclotomicModule::free(p, r.clone(), 1).unwrap(),
        )
        .unwrap();
        let (m, basis) = standard_module_with_basis(&t).unwrap();
        let pm = kgring_core::intlinalg::rat(p as i64);
        // (norm, vertex, summand hit by p, summand killed)
        let cases = [
            (norm_t0(p), 0u8, Summand::X, Summand::Y),
            (norm_s1(p), 1, Summand::X, Summand::Z),
            (norm_t2(p), 2, Summand::Z, Summand::Y),
            (norm_s2(p), 2, Summand::Y, Summand::Z),
        ];
        for (f, v, keep, kill) in cases {
            let n = m.eval_poly(0, &f);
            let a = &basis[&(keep, v)];
            let b = &basis[&(kill, v)];
            assert_eq!(m.reduce(&(&n * a)), m.reduce(&a.scale(&pm)), "p={p} {keep}");
            assert!(m.is_zero_map(&(&n * b)), "p={p} {kill}");
        }
    }
}

#[test]
fn adic_scalars() {
    use kgring_core::divisible::adic_structure;
    let z = Localization::integers();
    for (d, root) in [(7, 2), (49, 30)] {
        let comp = GradedGroup::new(
            z.clone(),
            GroupPart::new(0, vec![BigInt::from(d)]),
            GroupPart::default(),
        )
        .unwrap();
        let comps = vec![comp, GradedGroup::zero(z.clone()), GradedGroup::zero(z.clone())];
        let m = KGModule::from_actions(&[7], z.clone(), comps, vec![vec![IntMatrix::zeros(1, 1); 6]]).unwrap();
        let a = adic_structure(&m, 3).unwrap();
        assert_eq!(a.root, BigInt::from(root));
        assert!(adic_structure(&m, 5).is_err());
    }
}

#[test]
fn divisibility_examples() {
    use kgring_core::divisible::is_uniquely_p_divisible;
    let z = Localization::integers();
    let cyclic = |d: u64, r: &Localization| {
        let g = if d == 0 {
            GradedGroup::free(r.clone(), 1, 0)
        } else {
            GradedGroup::new(
                r.clone(),
                GroupPart::new(0, vec![BigInt::from(d)]),
                GroupPart::default(),
            )
            .unwrap()
        };
        let comps = vec![g, GradedGroup::zero(r.clone()), GradedGroup::zero(r.clone())];
        KGModule::from_actions(&[3], r.clone(), comps, vec![vec![IntMatrix::zeros(1, 1); 6]]).unwrap()
    };
    assert!(is_uniquely_p_divisible(&cyclic(0, &ring(&[3])), 0, 0).unwrap());
    assert!(!is_uniquely_p_divisible(&cyclic(0, &z), 0, 0).unwrap());
    assert!(!is_uniquely_p_divisible(&cyclic(3, &z), 0, 0).unwrap());
    assert!(is_uniquely_p_divisible(&cyclic(5, &z), 0, 0).unwrap());
    assert!(central_idempotents(&cyclic(3, &z), 0).is_err());
}

#[test]
fn ex_kills_vertex_two() {
    for p in [2u64, 3] {
        let m = build_standard_module(&triple(p)).unwrap();
        let e = central_idempotents(&m, 0).unwrap();
        let two = m.digit_projector(0, 2);
        assert!(m.is_zero_map(&(e.ex.matrix() * &two)));
        let sum = &m.eval_poly(0, &kgring_core::ring::presentation::norm_t2(p))
            + &m.eval_poly(0, &kgring_core::ring::presentation::norm_s2(p));
        let expect = two.scale(&kgring_core::intlinalg::rat(p as i64));
        assert!(m.is_zero_map(&(&sum - &expect)));
    }
}

#[test]
fn zero_inputs() {
    let r = ring(&[2]);
    let zero = || CyclotomicModule::zero(2, &[], r.clone()).unwrap();
    let x = KGModule::zero(&[], r.clone()).unwrap();
    let m = build_standard_module(&StandardTriple::new(2, x, zero(), zero()).unwrap()).unwrap();
    assert!(m.is_zero());
    let d = full_decompose(&m, &[0]).unwrap();
    assert_eq!(d.pieces.len(), 3);
    assert_eq!(d.nonzero().count(), 0);
    assert!(reconstruct(&d).unwrap().module.is_zero());
}
