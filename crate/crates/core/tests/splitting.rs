use kgring_core::module::free_module;
use kgring_core::splitting::{bezout, random_extension, split_extension};
use kgring_core::Localization;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn bezout_two_three() {
    assert_eq!(
        bezout(&BigInt::from(4), &BigInt::from(9)).unwrap(),
        (BigInt::from(-2), BigInt::from(1))
    );
}

#[test]
fn split_free_over_six() {
    let z = Localization::integers();
    let q = free_module(&[2, 3], z.clone(), &[0, 1]).unwrap().module;
    let s = free_module(&[2, 3], z, &[2, 2]).unwrap().module;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = std::time::Instant::now();
    let sigma = random_extension(&s, &q, 3, &mut rng).unwrap();
    let sp = split_extension(&sigma).unwrap();
    println!("{:?} {:?} {:?}", sp.traces, sp.coefficients, t.elapsed());
}
