//! Regenerates the files in `fixtures/`.

use std::path::Path;

use kgring_cli::{ExtensionFile, ModuleFile};
use kgring_core::divisible::{build_standard_module, CyclotomicModule, StandardTriple};
use kgring_core::intlinalg::rat;
use kgring_core::module::free_module;
use kgring_core::splitting::random_extension;
use kgring_core::{GradedGroup, KGModule, Localization};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(r: &Localization, rank: usize) -> KGModule {
    KGModule::from_actions(&[], r.clone(), vec![GradedGroup::free(r.clone(), rank, 0)], vec![]).unwrap()
}

fn standard(p: u64, x: KGModule, y: CyclotomicModule, z: CyclotomicModule) -> KGModule {
    build_standard_module(&StandardTriple::new(p, x, y, z).unwrap()).unwrap()
}

fn write<T: serde::Serialize>(dir: &Path, name: &str, value: &T) {
    let text = serde_json::to_string_pretty(value).unwrap() + "\n";
    std::fs::write(dir.join(name), text).unwrap();
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    let r2 = Localization::new(2).unwrap();
    let cyc2 = || CyclotomicModule::free(2, r2.clone(), 1).unwrap();
    let std2 = standard(2, point(&r2, 1), cyc2(), cyc2());
    write(&dir, "standard_p2.json", &ModuleFile::from_module(&std2));

    let mut broken = ModuleFile::from_module(&std2);
    let block = broken.maps.get_mut("p=2:alpha10").unwrap().values_mut().next().unwrap();
    block[0][0] = "3".into();
    write(&dir, "corrupted_p2.json", &broken);

    write(
        &dir,
        "empty_p2.json",
        &ModuleFile::from_module(&KGModule::zero(&[2], Localization::integers()).unwrap()),
    );

    let z = Localization::integers();
    let f = free_module(&[2], z.clone(), &[1]).unwrap().module;
    write(&dir, "free_p2_v1.json", &ModuleFile::from_module(&f));
    let q = f.quotient(&f.identity_matrix().scale(&rat(2))).unwrap().module;
    write(&dir, "free_mod_two_p2.json", &ModuleFile::from_module(&q));

    let r6 = Localization::new(6).unwrap();
    let inner = standard(
        3,
        point(&r6, 1),
        CyclotomicModule::free(3, r6.clone(), 1).unwrap(),
        CyclotomicModule::free(3, r6.clone(), 1).unwrap(),
    );
    let minus = || CyclotomicModule::new(2, inner.clone(), inner.identity_matrix().scale(&rat(-1))).unwrap();
    let nine = standard(2, inner.clone(), minus(), minus());
    write(&dir, "nine_pieces_6.json", &ModuleFile::from_module(&nine));

    let small = |x: usize, y: usize| {
        let r3 = |n: usize| point(&r6, n);
        let inner = standard(
            3,
            r3(x),
            CyclotomicModule::free(3, r6.clone(), y).unwrap(),
            CyclotomicModule::zero(3, &[], r6.clone()).unwrap(),
        );
        standard(
            2,
            inner,
            CyclotomicModule::zero(2, &[3], r6.clone()).unwrap(),
            CyclotomicModule::zero(2, &[3], r6.clone()).unwrap(),
        )
    };
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let sigma = random_extension(&small(1, 0), &small(0, 1), 3, &mut rng).unwrap();
    write(&dir, "extension_6.json", &ExtensionFile::from_extension(&sigma));

    let f2 = free_module(&[2], z.clone(), &[0]).unwrap().module;
    let sigma = random_extension(&f2, &f2, 2, &mut rng).unwrap();
    write(&dir, "extension_p2.json", &ExtensionFile::from_extension(&sigma));
}
