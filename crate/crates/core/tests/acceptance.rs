use std::collections::BTreeMap;
use std::time::Instant;

use kgring_core::divisible::{
    build_standard_module, central_idempotents, divisibility, full_decompose, hensel_root, reconstruct,
    standard_module_with_basis, CyclotomicModule, StandardTriple, Summand,
};
use kgring_core::intlinalg::{rat, GroupPart};
use kgring_core::module::{ext1, free_module, hom, resolve};
use kgring_core::ring::presentation::{norm_s1, norm_s2, norm_t0, norm_t2};
use kgring_core::ring::{all_vertices, build_presentation, rewrite_system, verify_derived_relations, Poly};
use kgring_core::splitting::{bezout, random_extension, split_extension};
use kgring_core::{
    brute_force_exactness, is_exact, Arrow, GradedGroup, IntMatrix, KGModule, Localization, ModuleMap, Parity,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ring(primes: &[u64]) -> Localization {
    Localization::from_primes(primes.iter().copied()).unwrap()
}

fn point(r: &Localization, free: usize, torsion: &[u64]) -> KGModule {
    let part = GroupPart::new(free, torsion.iter().map(|&d| BigInt::from(d)).collect());
    let comp = GradedGroup::new(r.clone(), part, GroupPart::default()).unwrap();
    KGModule::from_actions(&[], r.clone(), vec![comp], vec![]).unwrap()
}

/// Rank-1 pieces for p = 3: `free` copies of Z[1/6][w] and `sevens` copies of Z/7 with w = 2.
fn cyclotomic_three(r: &Localization, free: usize, sevens: usize) -> CyclotomicModule {
    let base = point(r, 2 * free, &vec![7; sevens]);
    let n = base.dim();
    let mut theta = IntMatrix::zeros(n, n);
    for b in 0..free {
        let o = 2 * b;
        theta.set(o + 1, o, rat(1));
        theta.set(o, o + 1, rat(-1));
        theta.set(o + 1, o + 1, rat(-1));
    }
    for i in 0..sevens {
        theta.set(2 * free + i, 2 * free + i, rat(2));
    }
    CyclotomicModule::new(3, base, theta).unwrap()
}

fn minus_one(m: &KGModule) -> CyclotomicModule {
    CyclotomicModule::new(2, m.clone(), m.identity_matrix().scale(&rat(-1))).unwrap()
}

/// Multiplicities of the nine pieces, indexed by (summand for 2, summand for 3).
#[derive(Clone, Debug, Default)]
struct Shape {
    free: BTreeMap<(Summand, Summand), usize>,
    torsion: BTreeMap<(Summand, Summand), usize>,
}

impl Shape {
    fn nonzero(&self) -> usize {
        let mut n = 0;
        for a in Summand::ALL {
            for b in Summand::ALL {
                if self.free.get(&(a, b)).copied().unwrap_or(0) + self.torsion.get(&(a, b)).copied().unwrap_or(0) > 0 {
                    n += 1;
                }
            }
        }
        n
    }
}

/// Uniquely 6-divisible module over primes [2, 3] with the given pieces.
fn shaped_module(r: &Localization, shape: &Shape) -> KGModule {
    let inner = |outer: Summand| -> KGModule {
        let f = |s: Summand| shape.free.get(&(outer, s)).copied().unwrap_or(0);
        let t = |s: Summand| shape.torsion.get(&(outer, s)).copied().unwrap_or(0);
        let x = point(
            r,
            f(Summand::X),
            &[vec![5; t(Summand::X) / 2], vec![7; t(Summand::X) - t(Summand::X) / 2]].concat(),
        );
        let t = StandardTriple::new(
            3,
            x,
            cyclotomic_three(r, f(Summand::Y), t(Summand::Y)),
            cyclotomic_three(r, f(Summand::Z), t(Summand::Z)),
        )
        .unwrap();
        build_standard_module(&t).unwrap()
    };
    let (x, y, z) = (inner(Summand::X), inner(Summand::Y), inner(Summand::Z));
    let t = StandardTriple::new(2, x, minus_one(&y), minus_one(&z)).unwrap();
    build_standard_module(&t).unwrap()
}

/// Conjugate by random elementary shears between free coordinates of equal vertex and parity.
fn shear(m: &KGModule, rng: &mut ChaCha8Rng, count: usize) -> KGModule {
    let n = m.dim();
    let mut g = m.identity_matrix();
    let mut gi = m.identity_matrix();
    for _ in 0..count {
        let groups: Vec<Vec<usize>> = (0..m.vertex_count())
            .flat_map(|vi| [Parity::Even, Parity::Odd].into_iter().map(move |par| (vi, par)))
            .map(|(vi, par)| {
                m.parity_range(vi, par)
                    .filter(|&c| m.orders()[c].is_zero())
                    .collect::<Vec<_>>()
            })
            .filter(|cs| cs.len() >= 2)
            .collect();
        if groups.is_empty() {
            break;
        }
        let cs = &groups[rng.gen_range(0..groups.len())];
        let a = cs[rng.gen_range(0..cs.len())];
        let b = loop {
            let b = cs[rng.gen_range(0..cs.len())];
            if b != a {
                break b;
            }
        };
        let c = rng.gen_range(-3i64..=3);
        let mut e = IntMatrix::identity(n);
        e.set(a, b, rat(c));
        let mut ei = IntMatrix::identity(n);
        ei.set(a, b, rat(-c));
        g = &e * &g;
        gi = &gi * &ei;
    }
    let actions: Vec<Vec<IntMatrix>> = (0..m.k())
        .map(|j| Arrow::ALL.iter().map(|&a| &(&g * m.action(j, a)) * &gi).collect())
        .collect();
    KGModule::from_actions(m.primes(), m.ring().clone(), m.components().to_vec(), actions).unwrap()
}

fn ring_self_test() -> Outcome {
    let mut instances = 0;
    for p in [2u64, 3, 5, 7] {
        let checks = verify_derived_relations(p).map_err(err)?;
        let families: std::collections::BTreeSet<_> = checks.iter().map(|c| c.family).collect();
        ensure(families.len() == 12, || format!("p={p}: {} families", families.len()))?;
        if let Some(bad) = checks.iter().find(|c| !c.holds) {
            return Err(format!("p={p}: {} {} fails", bad.family, bad.instance));
        }
        instances += checks.len();
    }
    let mut pairs = 0;
    for p in [2u64, 3, 5] {
        pairs += rewrite_system(p).map_err(err)?.verify_confluence().map_err(err)?;
    }
    Ok(format!(
        "{instances} derived instances, {pairs} critical pairs resolved"
    ))
}

fn presentation_identities() -> Outcome {
    for p in [2u64, 3, 5] {
        let sys = rewrite_system(p).map_err(err)?;
        let pb = BigInt::from(p);
        for (word, arrow) in [
            ([Arrow::A01, Arrow::A10, Arrow::A01], Arrow::A01),
            ([Arrow::A10, Arrow::A01, Arrow::A10], Arrow::A10),
        ] {
            let lhs = sys.normal_form(&Poly::word(p, &word));
            let rhs = Poly::arrow(p, arrow).scale(&pb);
            ensure(lhs == rhs, || format!("p={p}: {lhs} != {rhs}"))?;
        }
    }
    Ok("a01 a10 a01 = p a01 and a10 a01 a10 = p a10 for p = 2, 3, 5".into())
}

fn standard_modules() -> Outcome {
    for p in [2u64, 3, 5] {
        let r = ring(&[p]);
        let cyc = || CyclotomicModule::free(p, r.clone(), 1).unwrap();
        let t = StandardTriple::new(p, point(&r, 1, &[]), cyc(), cyc()).map_err(err)?;
        let (m, basis) = standard_module_with_basis(&t).map_err(err)?;
        ensure(m.validate().is_valid(), || {
            format!("p={p}: invalid {:?}", m.validate().failures)
        })?;
        ensure(is_exact(&m).map_err(err)?.is_exact(), || format!("p={p}: not exact"))?;
        let pm = rat(p as i64);
        for (f, v, keep, kill, name) in [
            (norm_t0(p), 0u8, Summand::X, Summand::Y, "N(t0)"),
            (norm_s1(p), 1, Summand::X, Summand::Z, "N(s1)"),
            (norm_t2(p), 2, Summand::Z, Summand::Y, "N(t2)"),
            (norm_s2(p), 2, Summand::Y, Summand::Z, "N(s2)"),
        ] {
            let n = m.eval_poly(0, &f);
            let a = &basis[&(keep, v)];
            let b = &basis[&(kill, v)];
            ensure(m.reduce(&(&n * a)) == m.reduce(&a.scale(&pm)), || {
                format!("p={p}: {name} on {keep}")
            })?;
            ensure(m.is_zero_map(&(&n * b)), || format!("p={p}: {name} on {kill}"))?;
        }
    }
    Ok(
        "valid, exact, N(t0) = diag(p,0), N(s1) = diag(p,0), N(t2) = diag(0,p), N(s2) = diag(p,0) for p = 2, 3, 5"
            .into(),
    )
}

fn random_shape(rng: &mut ChaCha8Rng, all_nine: bool) -> Shape {
    let mut shape = Shape::default();
    for a in Summand::ALL {
        for b in Summand::ALL {
            let f = rng.gen_range(0..=1usize);
            let t = rng.gen_range(0..=1usize);
            let (f, t) = if all_nine && f + t == 0 { (1, 0) } else { (f, t) };
            shape.free.insert((a, b), f);
            shape.torsion.insert((a, b), t);
        }
    }
    shape
}

fn divisible_modules(rng: &mut ChaCha8Rng) -> Vec<(String, KGModule, usize)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        let r = ring(&[p]);
        let cyc = |n| CyclotomicModule::free(p, r.clone(), n).unwrap();
        let t = StandardTriple::new(p, point(&r, 2, &[]), cyc(1), cyc(2)).unwrap();
        out.push((format!("standard p={p}"), build_standard_module(&t).unwrap(), 3));
    }
    let z = Localization::integers();
    let x = point(&z, 0, &[3, 9]);
    let y = CyclotomicModule::new(2, point(&z, 0, &[5]), IntMatrix::from_ints(&[&[-1]])).unwrap();
    let t = StandardTriple::new(2, x, y, CyclotomicModule::zero(2, &[], z.clone()).unwrap()).unwrap();
    out.push(("odd torsion p=2".into(), build_standard_module(&t).unwrap(), 2));
    let r = ring(&[2, 3]);
    let mut nine = Shape::default();
    for a in Summand::ALL {
        for b in Summand::ALL {
            nine.free.insert((a, b), 1);
        }
    }
    out.push(("nine summands".into(), shaped_module(&r, &nine), 9));
    for i in 0..4 {
        let shape = random_shape(rng, i == 0);
        let m = shear(&shaped_module(&r, &shape), rng, 12);
        out.push((format!("random over Z[1/6] #{i}"), m, shape.nonzero()));
    }
    out
}

fn idempotent_suite(mods: &[(String, KGModule, usize)]) -> Outcome {
    let mut count = 0;
    for (name, m, _) in mods {
        for j in 0..m.k() {
            ensure(divisibility(m, j).map_err(err)? == [true; 3], || {
                format!("{name}: not divisible")
            })?;
            let t = central_idempotents(m, j).map_err(|e| format!("{name}: {e}"))?;
            t.verify().map_err(|e| format!("{name}: {e}"))?;
            for e in [&t.ex, &t.ey, &t.ez] {
                for i in 0..m.k() {
                    for a in Arrow::ALL {
                        ensure(e.commutes_with_arrow(i, a), || format!("{name}: {a} for prime {i}"))?;
                    }
                    ensure(e.commutes_with_idempotents(i), || format!("{name}: idempotents of {i}"))?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} idempotent triples on {} modules", mods.len()))
}

/// Exact modules over Z[1/6] with free underlying group and small component ranks.
fn small_free_module(r: &Localization, rng: &mut ChaCha8Rng, labels: usize) -> KGModule {
    let mut shape = Shape::default();
    for _ in 0..labels {
        let a = Summand::ALL[rng.gen_range(0..3)];
        let b = Summand::ALL[rng.gen_range(0..3)];
        *shape.free.entry((a, b)).or_insert(0) += 1;
    }
    shear(&shaped_module(r, &shape), rng, 4)
}

fn max_rank(m: &KGModule) -> usize {
    m.components()
        .iter()
        .map(|c| c.even().dim() + c.odd().dim())
        .max()
        .unwrap_or(0)
}

fn splitting_pipeline() -> Result<(String, (BigInt, BigInt)), String> {
    let r = ring(&[2, 3]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut coeffs = None;
    let n = 100;
    for i in 0..n {
        let q = small_free_module(&r, &mut rng, 1 + i % 2);
        let s = small_free_module(&r, &mut rng, 1);
        ensure(max_rank(&q) <= 6 && max_rank(&s) <= 6, || {
            format!("#{i}: component rank above 6")
        })?;
        let sigma = random_extension(&s, &q, 3, &mut rng).map_err(|e| format!("#{i}: {e}"))?;
        let sp = split_extension(&sigma).map_err(|e| format!("#{i}: {e}"))?;
        for (trace, p) in sp.traces.iter().zip([2i64, 3]) {
            let expect: Vec<BigInt> = [1, 1, p, p * p].iter().map(|&x| BigInt::from(x)).collect();
            ensure(trace == &expect, || format!("#{i}: trace {trace:?} for p={p}"))?;
        }
        let gamma = &sp.section;
        let bg = sigma.beta().compose(gamma).map_err(err)?;
        ensure(bg.agrees_with(&ModuleMap::identity(sigma.quotient())), || {
            format!("#{i}: beta gamma != 1")
        })?;
        ensure(gamma.is_linear(), || format!("#{i}: section not linear"))?;
        coeffs = Some(sp.coefficients.clone());
    }
    let c = coeffs.unwrap();
    Ok((format!("{n} extensions, traces 1 -> 1 -> p -> p^2, sections linear"), c))
}

fn bezout_instance(pipeline_coeffs: Option<&(BigInt, BigInt)>) -> Outcome {
    let (m, n) = bezout(&BigInt::from(4), &BigInt::from(9)).map_err(err)?;
    ensure(m == BigInt::from(-2) && n == BigInt::one(), || {
        format!("got ({m}, {n})")
    })?;
    ensure(&m * 4 + &n * 9 == BigInt::one(), || "4m + 9n != 1".into())?;
    let c = pipeline_coeffs.ok_or("splitting pipeline did not produce a section")?;
    ensure(c == &(m.clone(), n.clone()), || format!("pipeline used {c:?}"))?;
    Ok(format!("(m, n) = ({m}, {n}), combined sections verified"))
}

/// Every graded module with cyclic components of order at most 8 over the ring for 2,
/// filtered by evaluating the relations on scalars.
fn exactness_oracle() -> Outcome {
    let z = Localization::integers();
    let pres = build_presentation(2).map_err(err)?;
    let rels: Vec<Poly> = pres.relations().iter().map(|r| r.difference()).collect();
    let gcd = |a: u64, b: u64| num_integer::gcd(a, b);
    let (mut candidates, mut valid, mut exact) = (0usize, 0usize, 0usize);
    let mut cross = 0usize;
    for d0 in 1..=8u64 {
        for d1 in 1..=8u64 {
            for d2 in 1..=8u64 {
                let d = [d0, d1, d2];
                for par in 0..8u8 {
                    let e: Vec<u8> = (0..3).map(|i| (par >> i) & 1).collect();
                    if (0..3).any(|i| d[i] == 1 && e[i] == 1) {
                        continue;
                    }
                    // choices for each arrow: multiples of d_t / gcd
                    let choices: Vec<Vec<u64>> = Arrow::ALL
                        .iter()
                        .map(|&a| {
                            let (s, t) = (a.source() as usize, a.target() as usize);
                            let shift = (a.parity() == Parity::Odd) as u8;
                            if (e[s] + shift) % 2 != e[t] || d[s] == 1 || d[t] == 1 {
                                return vec![0];
                            }
                            let g = gcd(d[s], d[t]);
                            (0..g).map(|c| c * (d[t] / g)).collect()
                        })
                        .collect();
                    let total: usize = choices.iter().map(|c| c.len()).product();
                    for idx in 0..total {
                        let mut rest = idx;
                        let c: Vec<u64> = choices
                            .iter()
                            .map(|ch| {
                                let x = ch[rest % ch.len()];
                                rest /= ch.len();
                                x
                            })
                            .collect();
                        candidates += 1;
                        let holds = rels.iter().all(|f| scalar_relation(f, &c, &d));
                        let sampled = candidates % 97 == 0;
                        if !holds && !sampled {
                            continue;
                        }
                        let m = cyclic_module(&z, &d, &e, &c);
                        let lib_valid = m.validate().is_valid();
                        ensure(lib_valid == holds, || {
                            format!("orders {d:?}, parities {e:?}, arrows {c:?}: validity disagrees")
                        })?;
                        if !holds {
                            cross += 1;
                            continue;
                        }
                        valid += 1;
                        let fast = is_exact(&m).map_err(err)?.is_exact();
                        let slow = brute_force_exactness(&m, 8).map_err(err)?;
                        ensure(fast == slow, || {
                            format!("orders {d:?}, parities {e:?}, arrows {c:?}: rank {fast}, brute force {slow}")
                        })?;
                        exact += fast as usize;
                    }
                }
            }
        }
    }
    let w = witness();
    ensure(w.validate().is_valid(), || "witness invalid".into())?;
    ensure(!is_exact(&w).map_err(err)?.is_exact(), || {
        "witness reported exact".into()
    })?;
    Ok(format!(
        "{candidates} candidates, {valid} valid ({exact} exact), {cross} invalid cross-checked, witness non-exact"
    ))
}

fn scalar_relation(f: &Poly, c: &[u64], d: &[u64; 3]) -> bool {
    let mut target = None;
    let mut acc: i128 = 0;
    for (mono, coeff) in f.terms() {
        target = Some(mono.target() as usize);
        let mut x: i128 = coeff.try_into().unwrap();
        for &a in mono.word() {
            x *= c[Arrow::ALL.iter().position(|&b| b == a).unwrap()] as i128;
        }
        acc += x;
    }
    match target {
        None => true,
        Some(t) => acc.rem_euclid(d[t] as i128) == 0,
    }
}

fn cyclic_module(z: &Localization, d: &[u64; 3], e: &[u8], c: &[u64]) -> KGModule {
    let comps: Vec<GradedGroup> = (0..3)
        .map(|i| {
            if d[i] == 1 {
                return GradedGroup::zero(z.clone());
            }
            let part = GroupPart::new(0, vec![BigInt::from(d[i])]);
            let (even, odd) = if e[i] == 0 {
                (part, GroupPart::default())
            } else {
                (GroupPart::default(), part)
            };
            GradedGroup::new(z.clone(), even, odd).unwrap()
        })
        .collect();
    let mut blocks = BTreeMap::new();
    for (i, &a) in Arrow::ALL.iter().enumerate() {
        if c[i] != 0 {
            blocks.insert((0, a, vec![a.source()]), IntMatrix::from_ints(&[&[c[i] as i64]]));
        }
    }
    KGModule::from_blocks(&[2], z.clone(), comps, &blocks).unwrap()
}

fn witness() -> KGModule {
    let z = Localization::integers();
    let comps = vec![
        GradedGroup::free(z.clone(), 1, 0),
        GradedGroup::free(z.clone(), 1, 0),
        GradedGroup::zero(z.clone()),
    ];
    let mut blocks = BTreeMap::new();
    blocks.insert((0, Arrow::A01, vec![1]), IntMatrix::from_ints(&[&[1]]));
    blocks.insert((0, Arrow::A10, vec![0]), IntMatrix::from_ints(&[&[2]]));
    KGModule::from_blocks(&[2], z, comps, &blocks).unwrap()
}

/// Random quotients of free modules by a cyclic submodule, plus sums with the witness.
fn random_targets(primes: &[u64], r: &Localization, rng: &mut ChaCha8Rng, n: usize) -> Vec<KGModule> {
    let verts = all_vertices(primes.len());
    let mut out = Vec::new();
    while out.len() < n {
        let v = &verts[rng.gen_range(0..verts.len())];
        let f = free_module(primes, r.clone(), v).unwrap().module;
        let cols = rng.gen_range(1..=2);
        let mut g = IntMatrix::zeros(f.dim(), cols);
        for col in 0..cols {
            let c = rng.gen_range(0..f.dim());
            let scale = [0i64, 2, 3, 4, 5][rng.gen_range(0..5)];
            g.set(c, col, rat(scale));
            let c2 = rng.gen_range(0..f.dim());
            if f.vertex_of_coordinate(c2) == f.vertex_of_coordinate(c) && f.parities()[c2] == f.parities()[c] {
                g.set(c2, col, &g.get(c2, col).clone() + &rat(rng.gen_range(-2..=2)));
            }
        }
        let Ok(q) = f.quotient(&g) else { continue };
        let m = q.module;
        if primes == [2] && r.is_integers() && rng.gen_bool(0.3) {
            out.push(m.direct_sum(&witness()).unwrap());
        } else {
            out.push(m);
        }
    }
    out
}

fn ext_vanishing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe17);
    let z = Localization::integers();
    // kernel of a cover of F/2F: exact, free as an abelian group, not projective
    let f1 = free_module(&[2], z.clone(), &[1]).unwrap().module;
    let quot = f1.quotient(&f1.identity_matrix().scale(&rat(2))).map_err(err)?.module;
    let kernel = resolve(&quot).map_err(err)?.kernel;
    let r2 = ring(&[2]);
    let cyc = || CyclotomicModule::free(2, r2.clone(), 1).unwrap();
    let std2 = build_standard_module(&StandardTriple::new(2, point(&r2, 1, &[]), cyc(), cyc()).unwrap()).unwrap();
    let mut pairs = 0;
    for (q, primes, r) in [(&kernel, vec![2u64], z.clone()), (&std2, vec![2], r2.clone())] {
        ensure(is_exact(q).map_err(err)?.is_exact(), || "source not exact".into())?;
        ensure(q.orders().iter().all(|d| d.is_zero()), || "source has torsion".into())?;
        for t in random_targets(&primes, &r, &mut rng, 12) {
            let e = ext1(q, &t).map_err(err)?;
            ensure(e.is_zero(), || format!("Ext = {e} against\n{t}"))?;
            pairs += 1;
        }
    }
    let mut free_pairs = 0;
    for primes in [vec![2u64], vec![3]] {
        let targets = random_targets(&primes, &z, &mut rng, 3);
        for v in all_vertices(primes.len()) {
            let f = free_module(&primes, z.clone(), &v).map_err(err)?.module;
            for t in targets
                .iter()
                .chain(std::iter::once(&witness()).filter(|_| primes == [2]))
            {
                let e = ext1(&f, t).map_err(err)?;
                ensure(e.is_zero(), || format!("Ext(F({v:?}), N) = {e}"))?;
                free_pairs += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} random targets against free exact sources, {free_pairs} free-module pairs"
    ))
}

fn decomposition_round_trip(mods: &[(String, KGModule, usize)]) -> Outcome {
    let mut done = 0;
    for (name, m, expected) in mods.iter().filter(|(_, m, _)| m.primes() == [2, 3]) {
        let d = full_decompose(m, &[0, 1]).map_err(|e| format!("{name}: {e}"))?;
        let nonzero = d.nonzero().count();
        ensure(nonzero == *expected, || {
            format!("{name}: {nonzero} pieces, expected {expected}")
        })?;
        let rec = reconstruct(&d).map_err(|e| format!("{name}: {e}"))?;
        ensure(rec.iso.is_linear(), || format!("{name}: iso not linear"))?;
        ensure(
            rec.iso.is_injective().map_err(err)? && rec.iso.is_surjective().map_err(err)?,
            || format!("{name}: not bijective"),
        )?;
        done += 1;
    }
    ensure(done >= 2, || "too few modules".into())?;
    Ok(format!(
        "{done} modules over primes 2, 3 rebuilt with explicit isomorphisms, including 9 summands"
    ))
}

fn hensel() -> Outcome {
    let u = hensel_root(7, 3, 2).map_err(err)?;
    ensure(u == BigInt::from(30), || format!("got {u}"))?;
    let cube = 30u64.pow(3);
    ensure(cube % 49 == 1 && 30 % 7 != 1, || {
        "30 is not a primitive cube root mod 49".into()
    })?;
    for k in 1..=3 {
        ensure(hensel_root(7, 5, k).is_err(), || format!("q = 5, k = {k} did not fail"))?;
    }
    Ok("hensel_root(7,3,2) = 30, 30^3 = 27000 = 1 mod 49, q = 5 rejected".into())
}

fn yoneda() -> Outcome {
    let z = Localization::integers();
    let mut rng = ChaCha8Rng::seed_from_u64(0x70e);
    let mut checks = 0;
    for primes in [vec![2u64], vec![3], vec![2, 3]] {
        let mut targets = random_targets(&primes, &z, &mut rng, if primes.len() == 1 { 3 } else { 1 });
        if primes == [2] {
            targets.push(witness());
        }
        if primes == [2, 3] {
            let r = ring(&[2, 3]);
            let mut shape = Shape::default();
            shape.free.insert((Summand::Y, Summand::Z), 1);
            shape.torsion.insert((Summand::X, Summand::Y), 1);
            let m = shaped_module(&r, &shape);
            for v in all_vertices(2) {
                let f = free_module(&primes, r.clone(), &v).map_err(err)?.module;
                let h = hom(&f, &m).map_err(err)?;
                ensure(&h == m.component(&v), || {
                    format!("{primes:?} {v:?}: {h} vs {}", m.component(&v))
                })?;
                checks += 1;
            }
        }
        for n in &targets {
            for v in all_vertices(primes.len()) {
                let f = free_module(&primes, z.clone(), &v).map_err(err)?.module;
                let h = hom(&f, n).map_err(err)?;
                ensure(&h == n.component(&v), || {
                    format!("{primes:?} {v:?}: {h} vs {}", n.component(&v))
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (vertex, module) pairs for primes [2], [3], [2, 3]"))
}

fn report(id: usize, name: &str, start: Instant, outcome: &Outcome) -> bool {
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS {id:>2} {name}: {detail} ({secs:.1}s)");
            true
        }
        Err(e) => {
            println!("FAIL {id:>2} {name}: {e} ({secs:.1}s)");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1f);

    let t = Instant::now();
    ok &= report(1, "ring self-test", t, &ring_self_test());
    let t = Instant::now();
    ok &= report(2, "presentation identities", t, &presentation_identities());
    let t = Instant::now();
    ok &= report(3, "standard modules", t, &standard_modules());

    let t = Instant::now();
    let mods = divisible_modules(&mut rng);
    ok &= report(4, "central idempotents", t, &idempotent_suite(&mods));

    let t = Instant::now();
    let pipeline = splitting_pipeline();
    let coeffs = pipeline.as_ref().ok().map(|(_, c)| c.clone());
    ok &= report(5, "splitting pipeline", t, &pipeline.map(|(s, _)| s));
    let t = Instant::now();
    ok &= report(6, "Bezout combination", t, &bezout_instance(coeffs.as_ref()));

    let t = Instant::now();
    ok &= report(7, "exactness oracle", t, &exactness_oracle());
    let t = Instant::now();
    ok &= report(8, "Ext vanishing", t, &ext_vanishing());
    let t = Instant::now();
    ok &= report(9, "decomposition round trip", t, &decomposition_round_trip(&mods));
    let t = Instant::now();
    ok &= report(10, "Hensel lifting", t, &hensel());
    let t = Instant::now();
    ok &= report(11, "Yoneda", t, &yoneda());

    if !ok {
        std::process::exit(1);
    }
}
