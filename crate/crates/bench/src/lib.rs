//! Inputs shared by the benchmarks.

use kgring_core::divisible::{build_standard_module, CyclotomicModule, StandardTriple};
use kgring_core::intlinalg::rat;
use kgring_core::splitting::random_extension;
use kgring_core::{Extension, GradedGroup, KGModule, Localization};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(r: &Localization, rank: usize) -> KGModule {
    KGModule::from_actions(&[], r.clone(), vec![GradedGroup::free(r.clone(), rank, 0)], vec![]).unwrap()
}

/// Standard module with rank-1 pieces for a single prime.
pub fn standard_module(p: u64) -> KGModule {
    let r = Localization::new(p).unwrap();
    let cyc = || CyclotomicModule::free(p, r.clone(), 1).unwrap();
    build_standard_module(&StandardTriple::new(p, point(&r, 1), cyc(), cyc()).unwrap()).unwrap()
}

/// Module over primes 2, 3 with all nine pieces of rank one.
pub fn nine_piece_module() -> KGModule {
    let r = Localization::new(6).unwrap();
    let cyc = || CyclotomicModule::free(3, r.clone(), 1).unwrap();
    let inner = build_standard_module(&StandardTriple::new(3, point(&r, 1), cyc(), cyc()).unwrap()).unwrap();
    let minus = || CyclotomicModule::new(2, inner.clone(), inner.identity_matrix().scale(&rat(-1))).unwrap();
    build_standard_module(&StandardTriple::new(2, inner.clone(), minus(), minus()).unwrap()).unwrap()
}

/// A sheared extension of small exact modules over primes 2, 3.
pub fn extension_over_six(seed: u64) -> Extension {
    let r = Localization::new(6).unwrap();
    let zero3 = || CyclotomicModule::zero(3, &[], r.clone()).unwrap();
    let zero2 = || CyclotomicModule::zero(2, &[3], r.clone()).unwrap();
    let inner = |x: usize, y: usize| {
        let t = StandardTriple::new(
            3,
            point(&r, x),
            CyclotomicModule::free(3, r.clone(), y).unwrap(),
            zero3(),
        );
        build_standard_module(&t.unwrap()).unwrap()
    };
    let outer = |m: KGModule| build_standard_module(&StandardTriple::new(2, m, zero2(), zero2()).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_extension(&outer(inner(1, 0)), &outer(inner(0, 1)), 3, &mut rng).unwrap()
}
