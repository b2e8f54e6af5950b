//! Uniquely divisible modules: central idempotents, standard modules, decomposition.
//!
//! For a module on which the prime p of index j acts invertibly the maps
//! E_X = (N(t0) + N(s1))/p, E_Y = 1_0 - N(t0)/p + N(s2)/p and
//! E_Z = 1_1 - N(s1)/p + N(t2)/p are central orthogonal idempotents summing to
//! the identity. The pieces A_X = 1_0 E_X M, A_Y = 1_0 E_Y M and
//! A_Z = 1_1 E_Z M determine M: it is the standard module with
//! Q0 = A_X + A_Y, Q1 = A_X + A_Z, Q2 = A_Y + ΣA_Z.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{is_prime, relation_columns, GradedGroup, IntMatrix, Parity, Rational, Subquotient};
use crate::module::hom::{map_system, MapSystem};
use crate::module::{direct_sum_many, is_isomorphism, vertex_index, KGModule, ModuleMap, RawModule};
use crate::ring::presentation::{norm_s1, norm_s2, norm_t0, norm_t2};
use crate::ring::{all_vertices, Arrow, Vertex};

/// Which of the three idempotents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand {
    X,
    Y,
    Z,
}

impl Summand {
    pub const ALL: [Summand; 3] = [Summand::X, Summand::Y, Summand::Z];

    /// Vertex at which the piece is read off.
    pub fn digit(self) -> Vertex {
        match self {
            Summand::X | Summand::Y => 0,
            Summand::Z => 1,
        }
    }

    /// Vertices carrying a copy of the piece, the first being the one read off.
    pub fn copies(self) -> [Vertex; 2] {
        match self {
            Summand::X => [0, 1],
            Summand::Y => [0, 2],
            Summand::Z => [1, 2],
        }
    }

    pub fn has_theta(self) -> bool {
        self != Summand::X
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Summand::X => "X",
            Summand::Y => "Y",
            Summand::Z => "Z",
        })
    }
}

fn prime_at(m: &KGModule, j: usize) -> Result<u64> {
    m.primes()
        .get(j)
        .copied()
        .ok_or(Error::PrimeIndex { index: j, count: m.k() })
}

/// Whether multiplication by the prime of index j is invertible on the part of M at digit i.
pub fn is_uniquely_p_divisible(m: &KGModule, j: usize, i: Vertex) -> Result<bool> {
    let p = prime_at(m, j)?;
    Ok(m.is_uniquely_divisible_at(p, j, i))
}

/// Divisibility at digits 0, 1, 2.
pub fn divisibility(m: &KGModule, j: usize) -> Result<[bool; 3]> {
    Ok([
        is_uniquely_p_divisible(m, j, 0)?,
        is_uniquely_p_divisible(m, j, 1)?,
        is_uniquely_p_divisible(m, j, 2)?,
    ])
}

/// E_X, E_Y, E_Z for one prime index.
#[derive(Clone, Debug)]
pub struct IdempotentTriple {
    pub prime_index: usize,
    pub ex: ModuleMap,
    pub ey: ModuleMap,
    pub ez: ModuleMap,
}

impl IdempotentTriple {
    pub fn get(&self, s: Summand) -> &ModuleMap {
        match s {
            Summand::X => &self.ex,
            Summand::Y => &self.ey,
            Summand::Z => &self.ez,
        }
    }

    /// Idempotent, pairwise orthogonal, summing to 1, and commuting with every generator.
    pub fn verify(&self) -> Result<()> {
        let m = self.ex.source();
        let mats = [self.ex.matrix(), self.ey.matrix(), self.ez.matrix()];
        for (a, ea) in mats.iter().enumerate() {
            for (b, eb) in mats.iter().enumerate() {
                let prod = *ea * *eb;
                let expect = if a == b {
                    (*ea).clone()
                } else {
                    IntMatrix::zeros(m.dim(), m.dim())
                };
                if !m.is_zero_map(&(&prod - &expect)) {
                    return Err(Error::Verification(format!(
                        "E_{} E_{} is wrong",
                        Summand::ALL[a],
                        Summand::ALL[b]
                    )));
                }
            }
        }
        let sum = &(mats[0] + mats[1]) + mats[2];
        if !m.is_zero_map(&(&sum - &m.identity_matrix())) {
            return Err(Error::Verification("E_X + E_Y + E_Z is not the identity".into()));
        }
        for (s, e) in Summand::ALL.iter().zip([&self.ex, &self.ey, &self.ez]) {
            if !e.is_linear() {
                return Err(Error::Verification(format!("E_{s} is not central")));
            }
        }
        Ok(())
    }
}

/// The three idempotents; all three digits must be uniquely divisible.
pub fn central_idempotents(m: &KGModule, j: usize) -> Result<IdempotentTriple> {
    let p = prime_at(m, j)?;
    let div = divisibility(m, j)?;
    if div.iter().any(|d| !d) {
        return Err(Error::NotDivisible {
            prime: p,
            detail: format!("divisible at digits 0, 1, 2: {div:?}"),
        });
    }
    let inv = Rational::new(BigInt::one(), BigInt::from(p));
    let n = |f| m.eval_poly(j, &f).scale(&inv);
    let (nt0, ns1, ns2, nt2) = (n(norm_t0(p)), n(norm_s1(p)), n(norm_s2(p)), n(norm_t2(p)));
    let ex = &nt0 + &ns1;
    let ey = &(&m.digit_projector(j, 0) - &nt0) + &ns2;
    let ez = &(&m.digit_projector(j, 1) - &ns1) + &nt2;
    let map = |e: IntMatrix| ModuleMap::new(m.clone(), m.clone(), Parity::Even, m.reduce(&e));
    let t = IdempotentTriple {
        prime_index: j,
        ex: map(ex)?,
        ey: map(ey)?,
        ez: map(ez)?,
    };
    t.verify()?;
    Ok(t)
}

/// A module over the remaining primes with an even automorphism θ satisfying 1 + θ + ... + θ^(p-1) = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicModule {
    pub p: u64,
    pub base: KGModule,
    pub theta: IntMatrix,
}

impl CyclotomicModule {
    pub fn new(p: u64, base: KGModule, theta: IntMatrix) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let map = ModuleMap::new(base.clone(), base.clone(), Parity::Even, theta)?;
        if !map.is_linear() {
            return Err(Error::InvalidModule(
                "theta does not commute with the module structure".into(),
            ));
        }
        let theta = map.matrix().clone();
        let mut acc = IntMatrix::zeros(base.dim(), base.dim());
        let mut pw = base.identity_matrix();
        for _ in 0..p {
            acc = &acc + &pw;
            pw = base.reduce(&(&pw * &theta));
        }
        if !base.is_zero_map(&acc) {
            return Err(Error::InvalidModule(format!(
                "cyclotomic relation of order {p} fails for theta"
            )));
        }
        Ok(Self { p, base, theta })
    }

    pub fn zero(p: u64, primes: &[u64], ring: crate::intlinalg::Localization) -> Result<Self> {
        let base = KGModule::zero(primes, ring)?;
        Self::new(p, base, IntMatrix::zeros(0, 0))
    }

    /// `rank` copies of Z[1/m][θ] with θ acting by the companion matrix, over no further primes.
    pub fn free(p: u64, ring: crate::intlinalg::Localization, rank: usize) -> Result<Self> {
        let d = (p - 1) as usize;
        let comp = GradedGroup::free(ring.clone(), rank * d, 0);
        let base = KGModule::from_actions(&[], ring, vec![comp], vec![])?;
        let mut theta = IntMatrix::zeros(rank * d, rank * d);
        for b in 0..rank {
            let o = b * d;
            for i in 1..d {
                theta.set(o + i, o + i - 1, Rational::one());
            }
            for i in 0..d {
                theta.set(o + i, o + d - 1, -Rational::one());
            }
        }
        Self::new(p, base, theta)
    }
}

/// The data (A_X, A_Y, A_Z) of a standard module for the prime p.
#[derive(Clone, Debug)]
pub struct StandardTriple {
    pub p: u64,
    pub x: KGModule,
    pub y: CyclotomicModule,
    pub z: CyclotomicModule,
}

impl StandardTriple {
    pub fn new(p: u64, x: KGModule, y: CyclotomicModule, z: CyclotomicModule) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if y.p != p || z.p != p {
            return Err(Error::Precondition(
                "cyclotomic structures for a different prime".into(),
            ));
        }
        for other in [&y.base, &z.base] {
            if other.primes() != x.primes() || other.ring() != x.ring() {
                return Err(Error::Precondition("pieces over different rings".into()));
            }
        }
        if x.primes().contains(&p) {
            return Err(Error::Precondition(format!("pieces must not involve {p}")));
        }
        Ok(Self { p, x, y, z })
    }
}

/// Standard module with the coordinates of each piece copy.
struct StandardBuild {
    normalized: crate::module::Normalized,
    /// raw[summand][copy] = raw indices of the piece coordinates
    raw: BTreeMap<(Summand, usize), Vec<usize>>,
}

impl StandardBuild {
    /// New coordinates of the copy of a piece read off by the decomposition.
    fn anchor(&self, s: Summand) -> IntMatrix {
        let idx = &self.raw[&(s, 0)];
        let t = &self.normalized.to_new;
        let cols: Vec<Vec<Rational>> = idx.iter().map(|&g| t.column(g)).collect();
        IntMatrix::from_columns(t.rows(), &cols)
    }

    /// Block-diagonal endomorphism acting by `f[s]` on every copy of piece s.
    fn transport(&self, f: &BTreeMap<Summand, IntMatrix>) -> IntMatrix {
        let n = self.normalized.lift.rows();
        let mut raw = IntMatrix::zeros(n, n);
        for ((s, _), idx) in &self.raw {
            let Some(m) = f.get(s) else { continue };
            for (a, &ga) in idx.iter().enumerate() {
                for (b, &gb) in idx.iter().enumerate() {
                    let x = m.get(a, b);
                    if !x.is_zero() {
                        raw.set(ga, gb, x.clone());
                    }
                }
            }
        }
        let out = &(&self.normalized.to_new * &raw) * &self.normalized.lift;
        self.normalized.module.reduce(&out)
    }
}

fn standard_build(t: &StandardTriple) -> Result<StandardBuild> {
    let rest = t.x.primes().to_vec();
    let ring = t.x.ring().clone();
    let mut primes = rest.clone();
    primes.push(t.p);
    primes.sort_unstable();
    let jp = primes.iter().position(|&q| q == t.p).unwrap();
    let k = primes.len();
    let piece = |s: Summand| -> &KGModule {
        match s {
            Summand::X => &t.x,
            Summand::Y => &t.y.base,
            Summand::Z => &t.z.base,
        }
    };
    let slots = |d: Vertex| -> [Summand; 2] {
        match d {
            0 => [Summand::X, Summand::Y],
            1 => [Summand::X, Summand::Z],
            _ => [Summand::Y, Summand::Z],
        }
    };
    let copy_of = |s: Summand, d: Vertex| s.copies().iter().position(|&c| c == d).unwrap();
    let mut raw = RawModule::new(&primes, ring)?;
    // (summand, copy, piece coordinate) -> (vertex index, local index)
    let mut local: BTreeMap<(Summand, usize, usize), (usize, usize)> = BTreeMap::new();
    for u in all_vertices(k) {
        let d = u[jp];
        let mut w = u.clone();
        w.remove(jp);
        let (ui, wi) = (vertex_index(&u), vertex_index(&w));
        for s in slots(d) {
            let m = piece(s);
            let shift = if s == Summand::Z && d == 2 {
                Parity::Odd
            } else {
                Parity::Even
            };
            for c in m.range(wi) {
                let l = raw.push_generator(ui, m.parities()[c] + shift, m.orders()[c].clone());
                local.insert((s, copy_of(s, d), c), (ui, l));
            }
        }
    }
    raw.finish_layout();
    let mut table: BTreeMap<(Summand, usize), Vec<usize>> = BTreeMap::new();
    for s in Summand::ALL {
        for copy in 0..2 {
            let m = piece(s);
            let idx = (0..m.dim())
                .map(|c| {
                    let (ui, l) = local[&(s, copy, c)];
                    raw.global_index(ui, l)
                })
                .collect();
            table.insert((s, copy), idx);
        }
    }
    let n = raw.dim();
    let put = |g: &mut IntMatrix, s: Summand, from: usize, to: usize, m: &IntMatrix| {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let x = m.get(r, c);
                if !x.is_zero() {
                    g.set(table[&(s, to)][r], table[&(s, from)][c], x.clone());
                }
            }
        }
    };
    // arrows of the other primes act on every copy
    for (i_res, _) in primes.iter().enumerate().filter(|&(i, _)| i != jp) {
        let i_piece = if i_res < jp { i_res } else { i_res - 1 };
        for a in Arrow::ALL {
            let mut g = IntMatrix::zeros(n, n);
            for s in Summand::ALL {
                let act = piece(s).action(i_piece, a);
                for copy in 0..2 {
                    put(&mut g, s, copy, copy, act);
                }
            }
            raw.set_action(i_res, a, g);
        }
    }
    let id = |s: Summand| piece(s).identity_matrix();
    let pm = |s: Summand| id(s).scale(&Rational::from_integer(BigInt::from(t.p)));
    let one_minus = |c: &CyclotomicModule| &c.base.identity_matrix() - &c.theta;
    for a in Arrow::ALL {
        let mut g = IntMatrix::zeros(n, n);
        match a {
            Arrow::A01 => put(&mut g, Summand::X, 1, 0, &id(Summand::X)),
            Arrow::A10 => put(&mut g, Summand::X, 0, 1, &pm(Summand::X)),
            Arrow::A20 => put(&mut g, Summand::Y, 0, 1, &id(Summand::Y)),
            Arrow::A02 => put(&mut g, Summand::Y, 1, 0, &one_minus(&t.y)),
            Arrow::A21 => put(&mut g, Summand::Z, 0, 1, &id(Summand::Z)),
            Arrow::A12 => put(&mut g, Summand::Z, 1, 0, &one_minus(&t.z)),
        }
        raw.set_action(jp, a, g);
    }
    let normalized = raw.normalize()?;
    Ok(StandardBuild { normalized, raw: table })
}

/// The standard module of a triple.
pub fn build_standard_module(t: &StandardTriple) -> Result<KGModule> {
    Ok(standard_build(t)?.normalized.module)
}

/// The standard module with the image of each piece copy, keyed by summand and vertex digit.
pub fn standard_module_with_basis(t: &StandardTriple) -> Result<(KGModule, BTreeMap<(Summand, Vertex), IntMatrix>)> {
    let b = standard_build(t)?;
    let mut out = BTreeMap::new();
    for (&(s, copy), idx) in &b.raw {
        let tn = &b.normalized.to_new;
        let cols: Vec<Vec<Rational>> = idx.iter().map(|&g| tn.column(g)).collect();
        out.insert((s, s.copies()[copy]), IntMatrix::from_columns(tn.rows(), &cols));
    }
    Ok((b.normalized.module, out))
}

/// A piece A_I of a decomposition, a module over the primes outside the decomposed set.
#[derive(Clone, Debug)]
pub struct Piece {
    /// One summand per decomposed prime.
    pub index: Vec<Summand>,
    pub module: KGModule,
    /// θ for each decomposed prime whose summand is Y or Z.
    pub thetas: Vec<Option<IntMatrix>>,
    /// Lifts of the piece generators into the original module.
    pub embedding: IntMatrix,
}

impl Piece {
    pub fn label(&self) -> String {
        self.index.iter().map(|s| s.to_string()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }
}

/// All pieces of a module for a set of prime indices, with their coefficient rings.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub original: KGModule,
    /// Decomposed prime indices, ascending.
    pub selected: Vec<usize>,
    pub pieces: Vec<Piece>,
}

impl Decomposition {
    /// Coefficient ring of a piece: the base ring with the selected primes inverted and θ adjoined for Y and Z.
    pub fn ring_label(&self, piece: &Piece) -> String {
        let base = self.selected.iter().fold(self.original.ring().clone(), |r, &j| {
            r.with_prime(self.original.primes()[j])
        });
        let thetas: Vec<String> = self
            .selected
            .iter()
            .zip(&piece.index)
            .filter(|(_, s)| s.has_theta())
            .map(|(&j, _)| format!("theta_{}", self.original.primes()[j]))
            .collect();
        if thetas.is_empty() {
            base.to_string()
        } else {
            format!("{base}[{}]", thetas.join(", "))
        }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Piece> {
        self.pieces.iter().filter(|p| !p.is_zero())
    }
}

/// Pieces 1_{c(I)} (E_{I_1} ... E_{I_s}) M for all I in {X,Y,Z}^s.
pub fn full_decompose(m: &KGModule, selected: &[usize]) -> Result<Decomposition> {
    let mut sel = selected.to_vec();
    sel.sort_unstable();
    sel.dedup();
    if sel.iter().any(|&j| j >= m.k()) {
        return Err(Error::PrimeIndex {
            index: *sel.last().unwrap(),
            count: m.k(),
        });
    }
    let triples = sel
        .iter()
        .map(|&j| central_idempotents(m, j))
        .collect::<Result<Vec<_>>>()?;
    let mut indices: Vec<Vec<Summand>> = vec![Vec::new()];
    for _ in &sel {
        indices = indices
            .into_iter()
            .flat_map(|v| {
                Summand::ALL.into_iter().map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    let mut pieces = Vec::new();
    for index in indices {
        let mut proj = m.identity_matrix();
        let mut fixed = Vec::new();
        for ((&j, t), &s) in sel.iter().zip(&triples).zip(&index) {
            proj = &(&proj * &m.digit_projector(j, s.digit())) * t.get(s).matrix();
            fixed.push((j, s.digit()));
        }
        let proj = m.reduce(&proj);
        let (module, embedding, coords) = extract_piece(m, &fixed, &proj)?;
        let mut thetas = Vec::new();
        for (&j, &s) in sel.iter().zip(&index) {
            thetas.push(match s {
                Summand::X => None,
                Summand::Y | Summand::Z => {
                    let unit = unit_matrix(m, j, s);
                    Some(coords(&(&unit * &embedding))?)
                }
            });
        }
        pieces.push(Piece {
            index,
            module,
            thetas,
            embedding,
        });
    }
    Ok(Decomposition {
        original: m.clone(),
        selected: sel,
        pieces,
    })
}

/// t0 for Y, s1 for Z.
fn unit_matrix(m: &KGModule, j: usize, s: Summand) -> IntMatrix {
    let (d, a, b) = match s {
        Summand::Z => (1, Arrow::A12, Arrow::A21),
        _ => (0, Arrow::A02, Arrow::A20),
    };
    m.reduce(&(&m.digit_projector(j, d) - &(m.action(j, a) * m.action(j, b))))
}

type Coordinates = Box<dyn Fn(&IntMatrix) -> Result<IntMatrix>>;

/// Image of a projector restricted to fixed digits, as a module over the other primes.
fn extract_piece(
    m: &KGModule,
    fixed: &[(usize, Vertex)],
    proj: &IntMatrix,
) -> Result<(KGModule, IntMatrix, Coordinates)> {
    let k = m.k();
    let rest: Vec<usize> = (0..k).filter(|i| fixed.iter().all(|(j, _)| j != i)).collect();
    let primes: Vec<u64> = rest.iter().map(|&i| m.primes()[i]).collect();
    let ring = m.ring().clone();
    let mut comps = Vec::new();
    // per (w, parity): M coordinates and the subquotient
    let mut blocks: Vec<(Vec<usize>, Subquotient)> = Vec::new();
    for w in all_vertices(rest.len()) {
        let mut v = vec![0; k];
        for &(j, d) in fixed {
            v[j] = d;
        }
        for (pos, &i) in rest.iter().enumerate() {
            v[i] = w[pos];
        }
        let vi = vertex_index(&v);
        let mut parts = Vec::new();
        for parity in [Parity::Even, Parity::Odd] {
            let cs: Vec<usize> = m.parity_range(vi, parity).collect();
            let gens = proj.submatrix(&cs, &cs);
            let orders: Vec<BigInt> = cs.iter().map(|&c| m.orders()[c].clone()).collect();
            let rels = relation_columns(&orders);
            let sq = Subquotient::new(&gens.hstack(&rels)?, &rels, &ring)?;
            parts.push(sq.part().clone());
            blocks.push((cs, sq));
        }
        let odd = parts.pop().unwrap();
        let even = parts.pop().unwrap();
        comps.push(GradedGroup::new(ring.clone(), even, odd)?);
    }
    let dims: Vec<usize> = blocks.iter().map(|(_, sq)| sq.part().dim()).collect();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let n: usize = dims.iter().sum();
    let mut embedding = IntMatrix::zeros(m.dim(), n);
    for ((cs, sq), &o) in blocks.iter().zip(&offsets) {
        let b = sq.basis();
        for col in 0..b.cols() {
            for (i, &c) in cs.iter().enumerate() {
                let x = b.get(i, col);
                if !x.is_zero() {
                    embedding.set(c, o + col, x.clone());
                }
            }
        }
    }
    let block_of: Vec<Option<usize>> = {
        let mut t = vec![None; m.dim()];
        for (bi, (cs, _)) in blocks.iter().enumerate() {
            for &c in cs {
                t[c] = Some(bi);
            }
        }
        t
    };
    let blocks = std::rc::Rc::new(blocks);
    let coords: Coordinates = {
        let blocks = blocks.clone();
        let offsets = offsets.clone();
        let m = m.clone();
        Box::new(move |x: &IntMatrix| -> Result<IntMatrix> {
            let mut out = IntMatrix::zeros(n, x.cols());
            for col in 0..x.cols() {
                let y = m.reduce_vector(&x.column(col));
                let mut seen = vec![false; blocks.len()];
                for (c, v) in y.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let bi = block_of[c].ok_or_else(|| Error::Verification("vector leaves the piece".into()))?;
                    if seen[bi] {
                        continue;
                    }
                    seen[bi] = true;
                    let (cs, sq) = &blocks[bi];
                    let local: Vec<Rational> = cs.iter().map(|&c| y[c].clone()).collect();
                    let z = sq
                        .coordinates(&local)
                        .ok_or_else(|| Error::Verification("vector is not in the piece".into()))?;
                    for (i, v) in z.into_iter().enumerate() {
                        out.set(offsets[bi] + i, col, v);
                    }
                }
            }
            Ok(out)
        })
    };
    let mut actions = Vec::new();
    for &i in &rest {
        let mut list = Vec::new();
        for a in Arrow::ALL {
            list.push(coords(&(m.action(i, a) * &embedding))?);
        }
        actions.push(list);
    }
    let module = KGModule::from_actions(&primes, ring, comps, actions)?;
    Ok((module, embedding, coords))
}

/// (A_X, A_Y, A_Z) of a module for prime index j.
pub fn decompose(m: &KGModule, j: usize) -> Result<StandardTriple> {
    let p = prime_at(m, j)?;
    let d = full_decompose(m, &[j])?;
    let mut it = d.pieces.into_iter();
    let x = it.next().unwrap();
    let y = it.next().unwrap();
    let z = it.next().unwrap();
    let cyc = |piece: Piece| CyclotomicModule::new(p, piece.module, piece.thetas[0].clone().unwrap());
    StandardTriple::new(p, x.module, cyc(y)?, cyc(z)?)
}

/// A module rebuilt from its pieces, with an explicit isomorphism to the original.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub module: KGModule,
    /// `module -> original`.
    pub iso: ModuleMap,
    /// Nonzero pieces, in order of the direct sum.
    pub labels: Vec<String>,
}

/// Standard module of a single piece over all selected primes, and the coordinates of its anchor copy.
fn build_piece(d: &Decomposition, piece: &Piece) -> Result<(KGModule, IntMatrix)> {
    let mut module = piece.module.clone();
    let mut anchor = module.identity_matrix();
    let mut thetas: Vec<Option<IntMatrix>> = piece.thetas.clone();
    // add primes from the largest index down, so remaining thetas stay in order
    for pos in (0..d.selected.len()).rev() {
        let p = d.original.primes()[d.selected[pos]];
        let s = piece.index[pos];
        let ring = module.ring().clone();
        let primes = module.primes().to_vec();
        let zero = KGModule::zero(&primes, ring.clone())?;
        let zero_c = CyclotomicModule::new(p, zero.clone(), IntMatrix::zeros(0, 0))?;
        let t = match s {
            Summand::X => StandardTriple::new(p, module.clone(), zero_c.clone(), zero_c)?,
            Summand::Y => {
                let c = CyclotomicModule::new(p, module.clone(), thetas[pos].clone().unwrap())?;
                StandardTriple::new(p, zero, c, zero_c)?
            }
            Summand::Z => {
                let c = CyclotomicModule::new(p, module.clone(), thetas[pos].clone().unwrap())?;
                StandardTriple::new(p, zero, zero_c, c)?
            }
        };
        let b = standard_build(&t)?;
        anchor = &b.anchor(s) * &anchor;
        for th in thetas.iter_mut().take(pos) {
            if let Some(m) = th.as_ref() {
                let mut f = BTreeMap::new();
                f.insert(s, m.clone());
                *th = Some(b.transport(&f));
            }
        }
        module = b.normalized.module;
    }
    Ok((module, anchor))
}

/// Direct sum of the standard modules of all pieces, with the isomorphism to the original found by solving
/// for the linear map that restricts to each piece's embedding.
pub fn reconstruct(d: &Decomposition) -> Result<Reconstruction> {
    let m = &d.original;
    let mut built = Vec::new();
    let mut labels = Vec::new();
    for piece in d.nonzero() {
        built.push((build_piece(d, piece)?, piece));
        labels.push(piece.label());
    }
    if built.is_empty() {
        let zero = KGModule::zero(m.primes(), m.ring().clone())?;
        let iso = ModuleMap::new(zero.clone(), m.clone(), Parity::Even, IntMatrix::zeros(m.dim(), 0))?;
        if !m.is_zero_map(&m.identity_matrix()) {
            return Err(Error::NoIsomorphism("all pieces vanish but the module does not".into()));
        }
        return Ok(Reconstruction {
            module: zero,
            iso,
            labels,
        });
    }
    let mods: Vec<&KGModule> = built.iter().map(|((b, _), _)| b).collect();
    let sum = direct_sum_many(&mods)?;
    let q = &sum.module;
    let mut pairs = Vec::new();
    for j in 0..m.k() {
        for a in Arrow::ALL {
            pairs.push((q.action(j, a).clone(), m.action(j, a).clone()));
        }
    }
    let allowed = |r: usize, c: usize| {
        m.vertex_of_coordinate(r) == q.vertex_of_coordinate(c) && m.parities()[r] == q.parities()[c]
    };
    let MapSystem { vars, index, mut sys } = map_system(q, m, allowed, &pairs);
    let mut rhs = vec![Rational::zero(); sys.len()];
    for (i, ((_, anchor), piece)) in built.iter().enumerate() {
        let cols = &sum.inclusions[i] * anchor;
        for col in 0..cols.cols() {
            let v = cols.column(col);
            for r in 0..m.dim() {
                let coeffs: Vec<(usize, Rational)> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .filter_map(|(s, x)| index.get(&(r, s)).map(|&vi| (vi, x.clone())))
                    .collect();
                let target = piece.embedding.get(r, col).clone();
                match sys.push(coeffs, m.orders()[r].clone()) {
                    Some(_) => rhs.push(target),
                    None => {
                        let mut e = vec![Rational::zero(); m.dim()];
                        e[r] = target;
                        if !m.is_zero_vector(&e) {
                            return Err(Error::NoIsomorphism(format!(
                                "piece {} cannot be matched",
                                piece.label()
                            )));
                        }
                    }
                }
            }
        }
    }
    let x = sys
        .solve(&rhs, m.ring())
        .ok_or_else(|| Error::NoIsomorphism("no linear map matches the pieces".into()))?;
    let mut phi = IntMatrix::zeros(m.dim(), q.dim());
    for (i, &(r, c)) in vars.iter().enumerate() {
        if !x[i].is_zero() {
            phi.set(r, c, x[i].clone());
        }
    }
    let iso = ModuleMap::new(q.clone(), m.clone(), Parity::Even, phi)?;
    if !iso.is_linear() || !is_isomorphism(&iso)? {
        return Err(Error::NoIsomorphism("matched map is not bijective".into()));
    }
    Ok(Reconstruction {
        module: sum.module,
        iso,
        labels,
    })
}

/// A primitive q-th root of unity mod p^k, lifted from the root g^((p-1)/q) for the least generator g mod p.
pub fn hensel_root(p: u64, q: u64, k: u32) -> Result<BigInt> {
    for x in [p, q] {
        if !is_prime(x) {
            return Err(Error::NotPrime(x));
        }
    }
    if p == q {
        return Err(Error::Precondition("p and q must differ".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("exponent must be at least 1".into()));
    }
    if !(p - 1).is_multiple_of(q) {
        return Err(Error::NoRootOfUnity { p, q });
    }
    let pb = BigInt::from(p);
    let g = (2..p)
        .find(|&g| {
            prime_factors_of(p - 1)
                .iter()
                .all(|&f| mod_pow_u64(g, (p - 1) / f, p) != 1)
        })
        .unwrap_or(1);
    let mut u = BigInt::from(mod_pow_u64(g, (p - 1) / q, p));
    let qb = BigInt::from(q);
    let mut modulus = pb.clone();
    for _ in 1..k {
        modulus *= &pb;
        // Newton step for x^q - 1
        let f: BigInt = (u.modpow(&qb, &modulus) - BigInt::one()).mod_floor(&modulus);
        let df: BigInt = (&qb * u.modpow(&(&qb - BigInt::one()), &modulus)).mod_floor(&modulus);
        let inv = crate::intlinalg::mod_inverse(&df, &modulus).expect("derivative is a unit");
        u = (&u - f * inv).mod_floor(&modulus);
    }
    let modulus = pb.pow(k);
    if !u.modpow(&qb, &modulus).is_one() || (&u - 1u32).mod_floor(&pb).is_zero() {
        return Err(Error::Verification(format!(
            "{u} is not a primitive {q}-th root of unity mod {p}^{k}"
        )));
    }
    Ok(u)
}

fn prime_factors_of(n: u64) -> Vec<u64> {
    crate::intlinalg::prime_factors(n)
}

fn mod_pow_u64(b: u64, e: u64, m: u64) -> u64 {
    BigInt::from(b)
        .modpow(&BigInt::from(e), &BigInt::from(m))
        .to_u64()
        .unwrap()
}

/// A p-power torsion module with θ acting as a primitive q-th root of unity and 1/q acting invertibly.
#[derive(Clone, Debug)]
pub struct AdicStructure {
    pub module: KGModule,
    /// Least k with p^k M = 0.
    pub exponent: u32,
    pub root: BigInt,
    pub theta: IntMatrix,
    pub q_inverse: IntMatrix,
}

pub fn adic_structure(m: &KGModule, q: u64) -> Result<AdicStructure> {
    if m.k() != 1 {
        return Err(Error::Precondition("expected a module over a single prime".into()));
    }
    let p = m.primes()[0];
    let pb = BigInt::from(p);
    let mut exponent = 0u32;
    for d in m.orders() {
        if d.is_zero() {
            return Err(Error::Precondition("module has a free part".into()));
        }
        let mut x = d.clone();
        let mut e = 0;
        while (&x % &pb).is_zero() {
            x /= &pb;
            e += 1;
        }
        if !x.is_one() {
            return Err(Error::Precondition(format!("torsion order {d} is not a power of {p}")));
        }
        exponent = exponent.max(e);
    }
    let exponent = exponent.max(1);
    let root = hensel_root(p, q, exponent)?;
    let modulus = pb.pow(exponent);
    let qinv = crate::intlinalg::mod_inverse(&BigInt::from(q), &modulus).expect("q is a unit mod p^k");
    let theta = m.reduce(&m.identity_matrix().scale(&Rational::from_integer(root.clone())));
    let q_inverse = m.reduce(&m.identity_matrix().scale(&Rational::from_integer(qinv)));
    let as_map = |x: &IntMatrix| ModuleMap::new(m.clone(), m.clone(), Parity::Even, x.clone());
    let (t, qi) = (as_map(&theta)?, as_map(&q_inverse)?);
    if !t.is_linear() || !qi.is_linear() {
        return Err(Error::Verification(
            "scalars do not commute with the module structure".into(),
        ));
    }
    let mut pw = m.identity_matrix();
    for _ in 0..q {
        pw = m.reduce(&(&pw * &theta));
    }
    let q_times = q_inverse.scale(&Rational::from_integer(BigInt::from(q)));
    if !m.is_zero_map(&(&pw - &m.identity_matrix())) || !m.is_zero_map(&(&q_times - &m.identity_matrix())) {
        return Err(Error::Verification("adic scalars fail their relations".into()));
    }
    Ok(AdicStructure {
        module: m.clone(),
        exponent,
        root,
        theta,
        q_inverse,
    })
}
