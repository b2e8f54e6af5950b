//! Sections of extensions, upgraded one prime at a time.
//!
//! A section candidate is an even map γ: Q -> P with β γ = c·id. For prime
//! index j the upgrade runs three steps: keep the diagonal blocks for the
//! idempotents of j, average over the units t0 and s1, and intertwine the
//! blocks through the arrows. The defect scalar goes 1, p, p². Two primes with
//! coprime squares give a linear section by a Bézout combination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::intlinalg::{IntMatrix, Parity, Rational};
use crate::module::hom::{map_system, MapSystem};
use crate::module::{direct_sum_many, vertex_of, Extension, KGModule, ModuleMap};
use crate::ring::Arrow;

/// γ with β γ = c·id, linear over the listed prime indices.
#[derive(Clone, Debug)]
pub struct SectionCandidate {
    pub gamma: ModuleMap,
    /// Prime indices over which γ was verified linear.
    pub linear_over: Vec<usize>,
    pub defect: BigInt,
}

impl SectionCandidate {
    /// Build after checking the defect and every declared linearity.
    pub fn new(sigma: &Extension, gamma: ModuleMap, linear_over: Vec<usize>, defect: BigInt) -> Result<Self> {
        if gamma.source() != sigma.quotient() || gamma.target() != sigma.middle() {
            return Err(Error::Precondition("section has the wrong source or target".into()));
        }
        if gamma.parity() != Parity::Even {
            return Err(Error::Precondition("section must be even".into()));
        }
        let q = sigma.quotient();
        let bg = sigma.beta().matrix() * gamma.matrix();
        let c = Rational::from_integer(defect.clone());
        if !q.is_zero_map(&(&bg - &q.identity_matrix().scale(&c))) {
            return Err(Error::Verification(format!(
                "beta o gamma is not {defect} times the identity"
            )));
        }
        if !gamma.is_linear_over(&linear_over) {
            return Err(Error::Verification(format!(
                "section is not linear over prime indices {linear_over:?}"
            )));
        }
        Ok(Self {
            gamma,
            linear_over,
            defect,
        })
    }

    /// `a·self + b·other`, with defect `a c + b c'`.
    pub fn combine(&self, a: &BigInt, other: &SectionCandidate, b: &BigInt, sigma: &Extension) -> Result<Self> {
        let m = &self.gamma.matrix().scale(&Rational::from_integer(a.clone()))
            + &other.gamma.matrix().scale(&Rational::from_integer(b.clone()));
        let gamma = ModuleMap::new(
            self.gamma.source().clone(),
            self.gamma.target().clone(),
            Parity::Even,
            m,
        )?;
        let linear: Vec<usize> = self
            .linear_over
            .iter()
            .copied()
            .filter(|j| other.linear_over.contains(j))
            .collect();
        Self::new(sigma, gamma, linear, a * &self.defect + b * &other.defect)
    }
}

fn others(k: usize, j: usize) -> Vec<usize> {
    (0..k).filter(|&i| i != j).collect()
}

fn check_index(sigma: &Extension, j: usize) -> Result<u64> {
    let k = sigma.quotient().k();
    if j >= k {
        return Err(Error::PrimeIndex { index: j, count: k });
    }
    Ok(sigma.quotient().primes()[j])
}

/// Σ_i 1_i γ 1_i over the idempotents of prime index j.
pub fn diagonalize(sigma: &Extension, gamma: &SectionCandidate, j: usize) -> Result<SectionCandidate> {
    check_index(sigma, j)?;
    let k = sigma.quotient().k();
    if !gamma.defect.is_one() {
        return Err(Error::Precondition("diagonalize needs a section".into()));
    }
    let rest = others(k, j);
    if !gamma.gamma.is_linear_over(&rest) {
        return Err(Error::Precondition(
            "section is not linear over the other primes".into(),
        ));
    }
    let (q, p) = (sigma.quotient(), sigma.middle());
    let g = gamma.gamma.matrix();
    let mut m = IntMatrix::zeros(p.dim(), q.dim());
    for d in 0..3u8 {
        m = &m + &(&(&p.digit_projector(j, d) * g) * &q.digit_projector(j, d));
    }
    let map = ModuleMap::new(q.clone(), p.clone(), Parity::Even, m)?;
    if !map.commutes_with_idempotents(j) {
        return Err(Error::Verification(
            "diagonal part does not commute with the idempotents".into(),
        ));
    }
    SectionCandidate::new(sigma, map, rest, BigInt::one())
}

/// The units t0 = 1_0 - a02 a20 and s1 = 1_1 - a12 a21 of prime index j on a module.
fn units(m: &KGModule, j: usize) -> (IntMatrix, IntMatrix) {
    let t0 = &m.digit_projector(j, 0) - &(m.action(j, Arrow::A02) * m.action(j, Arrow::A20));
    let s1 = &m.digit_projector(j, 1) - &(m.action(j, Arrow::A12) * m.action(j, Arrow::A21));
    (m.reduce(&t0), m.reduce(&s1))
}

/// Powers x^0 .. x^p, with x^0 the projector onto digit `d`.
fn powers(m: &KGModule, x: &IntMatrix, j: usize, d: u8, p: u64) -> Vec<IntMatrix> {
    let mut out = vec![m.digit_projector(j, d)];
    for _ in 0..p {
        let next = m.reduce(&(out.last().unwrap() * x));
        out.push(next);
    }
    out
}

/// γ' = Σ t0^i γ0 t0^(p-i) + Σ s1^i γ1 s1^(p-i) + p γ2, with β γ' = p·id.
pub fn average(sigma: &Extension, gamma: &SectionCandidate, j: usize) -> Result<SectionCandidate> {
    let prime = check_index(sigma, j)?;
    if !gamma.gamma.commutes_with_idempotents(j) {
        return Err(Error::Precondition(
            "average needs a section diagonal for this prime".into(),
        ));
    }
    let (q, p) = (sigma.quotient(), sigma.middle());
    let g = gamma.gamma.matrix();
    let block = |d: u8| &(&p.digit_projector(j, d) * g) * &q.digit_projector(j, d);
    let (tp, sp) = units(p, j);
    let (tq, sq) = units(q, j);
    let (tp, sp) = (powers(p, &tp, j, 0, prime), powers(p, &sp, j, 1, prime));
    let (tq, sq) = (powers(q, &tq, j, 0, prime), powers(q, &sq, j, 1, prime));
    let (g0, g1, g2) = (block(0), block(1), block(2));
    let pe = prime as usize;
    let mut m = g2.scale(&Rational::from_integer(BigInt::from(prime)));
    for i in 1..=pe {
        m = &m + &(&(&tp[i] * &g0) * &tq[pe - i]);
        m = &m + &(&(&sp[i] * &g1) * &sq[pe - i]);
    }
    let map = ModuleMap::new(q.clone(), p.clone(), Parity::Even, m)?;
    let (t0p, s1p) = units(p, j);
    let (t0q, s1q) = units(q, j);
    let commutes = |a: &IntMatrix, b: &IntMatrix| p.is_zero_map(&(&(a * map.matrix()) - &(map.matrix() * b)));
    if !commutes(&t0p, &t0q) || !commutes(&s1p, &s1q) || !map.commutes_with_idempotents(j) {
        return Err(Error::Verification(
            "averaged section does not commute with t0 and s1".into(),
        ));
    }
    SectionCandidate::new(
        sigma,
        map,
        gamma.linear_over.clone(),
        &gamma.defect * BigInt::from(prime),
    )
}

/// γ''0 = p γ'0, γ''1 = a10 γ'0 a01 + (p - a10 a01) γ'1,
/// γ''2 = a20 γ'0 c(t0) a02 + a21 γ'1 c(s1) a12 with c(x) = Σ_{i<p-1} (p-i-1) x^i.
pub fn intertwine(sigma: &Extension, gamma: &SectionCandidate, j: usize) -> Result<SectionCandidate> {
    let prime = check_index(sigma, j)?;
    let (q, p) = (sigma.quotient(), sigma.middle());
    let g = gamma.gamma.matrix();
    let block = |d: u8| &(&p.digit_projector(j, d) * g) * &q.digit_projector(j, d);
    let (g0, g1) = (block(0), block(1));
    let pr = Rational::from_integer(BigInt::from(prime));
    let ap = |a: Arrow| p.action(j, a);
    let aq = |a: Arrow| q.action(j, a);
    let (tq, sq) = units(q, j);
    let (tq, sq) = (powers(q, &tq, j, 0, prime), powers(q, &sq, j, 1, prime));
    let weighted = |pw: &[IntMatrix]| {
        let mut c = IntMatrix::zeros(q.dim(), q.dim());
        for (i, x) in pw.iter().enumerate().take(prime as usize - 1) {
            c = &c + &x.scale(&Rational::from_integer(BigInt::from(prime - 1 - i as u64)));
        }
        c
    };
    let new0 = g0.scale(&pr);
    let new1 = &(&(ap(Arrow::A10) * &g0) * aq(Arrow::A01))
        + &(&(&p.digit_projector(j, 1).scale(&pr) - &(ap(Arrow::A10) * ap(Arrow::A01))) * &g1);
    let new2 = &(&(&(ap(Arrow::A20) * &g0) * &weighted(&tq)) * aq(Arrow::A02))
        + &(&(&(ap(Arrow::A21) * &g1) * &weighted(&sq)) * aq(Arrow::A12));
    let m = &(&new0 + &new1) + &new2;
    let map = ModuleMap::new(q.clone(), p.clone(), Parity::Even, m)?;
    let mut linear = gamma.linear_over.clone();
    linear.push(j);
    linear.sort_unstable();
    linear.dedup();
    SectionCandidate::new(sigma, map, linear, &gamma.defect * BigInt::from(prime))
}

/// The three steps in order.
pub fn upgrade_section(sigma: &Extension, gamma: &SectionCandidate, j: usize) -> Result<SectionCandidate> {
    Ok(upgrade_trace(sigma, gamma, j)?.pop().unwrap())
}

/// Candidates after each of the three steps.
pub fn upgrade_trace(sigma: &Extension, gamma: &SectionCandidate, j: usize) -> Result<Vec<SectionCandidate>> {
    let d = diagonalize(sigma, gamma, j)?;
    let a = average(sigma, &d, j)?;
    let i = intertwine(sigma, &a, j)?;
    Ok(vec![d, a, i])
}

/// A section linear over every prime except index j, by solving the linear system.
pub fn find_subring_section(sigma: &Extension, j: usize) -> Result<SectionCandidate> {
    check_index(sigma, j)?;
    let (q, p) = (sigma.quotient(), sigma.middle());
    let k = q.k();
    let rest = others(k, j);
    let allowed = |r: usize, c: usize| {
        if p.parities()[r] != q.parities()[c] {
            return false;
        }
        let (vr, vc) = (
            vertex_of(p.vertex_of_coordinate(r), k),
            vertex_of(q.vertex_of_coordinate(c), k),
        );
        rest.iter().all(|&i| vr[i] == vc[i])
    };
    let mut pairs = Vec::new();
    for &i in &rest {
        for a in Arrow::ALL {
            pairs.push((q.action(i, a).clone(), p.action(i, a).clone()));
        }
    }
    let MapSystem { vars, index, mut sys } = map_system(q, p, allowed, &pairs);
    let mut rhs = vec![Rational::zero(); sys.len()];
    let beta = sigma.beta().matrix();
    for r in 0..q.dim() {
        for c in 0..q.dim() {
            let coeffs: Vec<(usize, Rational)> = (0..p.dim())
                .filter(|&s| !beta.get(r, s).is_zero())
                .filter_map(|s| index.get(&(s, c)).map(|&v| (v, beta.get(r, s).clone())))
                .collect();
            let target = if r == c { Rational::one() } else { Rational::zero() };
            match sys.push(coeffs, q.orders()[r].clone()) {
                Some(_) => rhs.push(target),
                None => {
                    if !q.is_zero_vector(&one_hot(q.dim(), r, target)) {
                        return Err(Error::NoSection(format!("coordinate {r} of the quotient is not hit")));
                    }
                }
            }
        }
    }
    let x = sys
        .solve(&rhs, q.ring())
        .ok_or_else(|| Error::NoSection(format!("no section linear away from prime {}", q.primes()[j])))?;
    let mut m = IntMatrix::zeros(p.dim(), q.dim());
    for (i, &(r, c)) in vars.iter().enumerate() {
        if !x[i].is_zero() {
            m.set(r, c, x[i].clone());
        }
    }
    let map = ModuleMap::new(q.clone(), p.clone(), Parity::Even, m)?;
    SectionCandidate::new(sigma, map, rest, BigInt::one())
}

fn one_hot(n: usize, r: usize, x: Rational) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[r] = x;
    v
}

/// Coefficients (m, n) with m a + n b = 1 and m of least absolute value.
pub fn bezout(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
    let e = a.extended_gcd(b);
    if !e.gcd.is_one() {
        return Err(Error::Precondition(format!("{a} and {b} are not coprime")));
    }
    let (mut m, mut n) = (e.x, e.y);
    // shift m into (-b/2, b/2]
    let two = BigInt::from(2);
    let t: BigInt = (&m * &two + b).div_floor(&(b * &two));
    m -= &t * b;
    n += &t * a;
    debug_assert!((&m * a + &n * b).is_one());
    debug_assert!(m.abs() * &two <= b.abs());
    Ok((m, n))
}

/// Result of [`split_extension`] with the intermediate data.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub section: ModuleMap,
    /// The two prime indices used.
    pub primes: (usize, usize),
    pub coefficients: (BigInt, BigInt),
    /// Defect scalars of the three steps, per prime.
    pub traces: [Vec<BigInt>; 2],
}

/// A linear section of an extension of an exact module with free components, over at least two primes.
pub fn split_extension(sigma: &Extension) -> Result<Splitting> {
    let q = sigma.quotient();
    if q.k() < 2 {
        return Err(Error::TooFewPrimes(q.k()));
    }
    if !q.orders().iter().all(Zero::is_zero) {
        return Err(Error::NotFree("quotient has torsion".into()));
    }
    if !crate::exactness::is_exact(q)?.is_exact() {
        return Err(Error::NotExact("quotient of the extension".into()));
    }
    // primes are ascending, so indices 0 and 1 are the two smallest
    let mut upgraded = Vec::new();
    let mut traces: [Vec<BigInt>; 2] = [Vec::new(), Vec::new()];
    for (slot, j) in [0usize, 1].into_iter().enumerate() {
        let start = find_subring_section(sigma, j)?;
        let steps = upgrade_trace(sigma, &start, j)?;
        traces[slot] = std::iter::once(start.defect.clone())
            .chain(steps.iter().map(|s| s.defect.clone()))
            .collect();
        upgraded.push(steps.into_iter().last().unwrap());
    }
    let (a, b) = (&upgraded[0].defect, &upgraded[1].defect);
    let (m, n) = bezout(a, b)?;
    let combined = upgraded[0].combine(&m, &upgraded[1], &n, sigma)?;
    let all: Vec<usize> = (0..q.k()).collect();
    if !combined.defect.is_one() || !combined.gamma.is_linear_over(&all) {
        return Err(Error::Verification("combined section is not linear".into()));
    }
    Ok(Splitting {
        section: combined.gamma,
        primes: (0, 1),
        coefficients: (m, n),
        traces,
    })
}

/// `0 -> Q' -> Q' (+) Q -> Q -> 0` with the action on the middle conjugated by a random
/// shear `[[1, h], [0, 1]]`, h an even vertex-diagonal group map `Q -> Q'` with entries in [-bound, bound].
pub fn random_extension<R: Rng>(sub: &KGModule, quotient: &KGModule, bound: i64, rng: &mut R) -> Result<Extension> {
    let sum = direct_sum_many(&[sub, quotient])?;
    let inc0 = &sum.inclusions[0];
    let pr1 = &sum.projections[1];
    let mut h = IntMatrix::zeros(sub.dim(), quotient.dim());
    for r in 0..sub.dim() {
        for c in 0..quotient.dim() {
            if sub.vertex_of_coordinate(r) == quotient.vertex_of_coordinate(c)
                && sub.parities()[r] == quotient.parities()[c]
            {
                h.set(
                    r,
                    c,
                    Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))),
                );
            }
        }
    }
    let h = sub.reduce(&h);
    // shear S = 1 + inc0 h pr1, inverse 1 - inc0 h pr1
    let n = sum.module.dim();
    let nil = &(inc0 * &h) * pr1;
    let s = &IntMatrix::identity(n) + &nil;
    let s_inv = &IntMatrix::identity(n) - &nil;
    let actions: Vec<Vec<IntMatrix>> = sum
        .module
        .actions()
        .iter()
        .map(|l| l.iter().map(|a| &(&s * a) * &s_inv).collect())
        .collect();
    let middle = KGModule::from_actions(
        sum.module.primes(),
        sum.module.ring().clone(),
        sum.module.components().to_vec(),
        actions,
    )?;
    let iota = ModuleMap::new(sub.clone(), middle.clone(), Parity::Even, &s * inc0)?;
    let beta = ModuleMap::new(middle, quotient.clone(), Parity::Even, pr1 * &s_inv)?;
    Extension::new(iota, beta)
}
