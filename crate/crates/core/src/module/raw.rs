//! Modules given by generators and relations per vertex, and their normal form.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{arrow_index, reduce_rows, KGModule};
use crate::error::{Error, Result};
use crate::intlinalg::{GradedGroup, GroupPart, IntMatrix, Localization, Parity, Rational, Subquotient};
use crate::ring::{check_primes, Arrow};

/// Generators with parities per vertex, relation vectors, and actions on the generators.
#[derive(Clone, Debug)]
pub struct RawModule {
    primes: Vec<u64>,
    ring: Localization,
    gens: Vec<Vec<Parity>>,
    offsets: Vec<usize>,
    relations: Vec<Vec<Rational>>,
    pending: Vec<(usize, usize, BigInt)>,
    actions: Vec<Vec<IntMatrix>>,
}

/// A module in normal form with the coordinate change from its raw presentation.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub module: KGModule,
    /// New coordinates of each raw generator.
    pub to_new: IntMatrix,
    /// Raw lifts of the new generators.
    pub lift: IntMatrix,
}

impl RawModule {
    pub fn new(primes: &[u64], ring: Localization) -> Result<Self> {
        let sorted = check_primes(primes)?;
        if sorted != primes {
            return Err(Error::Precondition(format!("primes must be ascending, got {primes:?}")));
        }
        let nv = 3usize.pow(primes.len() as u32);
        Ok(Self {
            primes: primes.to_vec(),
            ring,
            gens: vec![Vec::new(); nv],
            offsets: Vec::new(),
            relations: Vec::new(),
            pending: Vec::new(),
            actions: Vec::new(),
        })
    }

    pub fn from_module(m: &KGModule) -> Result<Self> {
        let mut raw = Self::new(m.primes(), m.ring().clone())?;
        for vi in 0..m.vertex_count() {
            for c in m.range(vi) {
                raw.push_generator(vi, m.parities()[c], m.orders()[c].clone());
            }
        }
        raw.finish_layout();
        raw.actions = m.actions().to_vec();
        Ok(raw)
    }

    pub fn vertex_count(&self) -> usize {
        self.gens.len()
    }

    /// Add a generator at vertex index `vi` of the given order (0 for none); returns its local index.
    pub fn push_generator(&mut self, vi: usize, parity: Parity, order: BigInt) -> usize {
        assert!(self.offsets.is_empty(), "layout already fixed");
        let local = self.gens[vi].len();
        self.gens[vi].push(parity);
        if !order.is_zero() {
            self.pending.push((vi, local, order));
        }
        local
    }

    /// Fix the global layout; actions become zero matrices.
    pub fn finish_layout(&mut self) {
        let mut offsets = vec![0];
        for g in &self.gens {
            offsets.push(offsets.last().unwrap() + g.len());
        }
        self.offsets = offsets;
        let n = self.dim();
        for (vi, local, d) in std::mem::take(&mut self.pending) {
            let mut r = vec![Rational::zero(); n];
            r[self.offsets[vi] + local] = Rational::from_integer(d);
            self.relations.push(r);
        }
        self.actions = vec![vec![IntMatrix::zeros(n, n); 6]; self.primes.len()];
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().expect("layout fixed")
    }

    pub fn global_index(&self, vi: usize, local: usize) -> usize {
        self.offsets[vi] + local
    }

    pub fn set_action(&mut self, j: usize, a: Arrow, m: IntMatrix) {
        self.actions[j][arrow_index(a)] = m;
    }

    /// Add a relation; it is split into its homogeneous pieces.
    pub fn add_relation_vector(&mut self, r: &[Rational]) {
        assert_eq!(r.len(), self.dim());
        self.relations.push(r.to_vec());
    }

    /// Invariant-factor form of every component.
    pub fn normalize(&self) -> Result<Normalized> {
        let n = self.dim();
        let mut components = Vec::with_capacity(self.vertex_count());
        // per vertex: (raw indices, basis, coordinates) for even then odd
        let mut pieces: Vec<(Vec<usize>, IntMatrix, IntMatrix)> = Vec::new();
        for vi in 0..self.vertex_count() {
            let mut parts = Vec::with_capacity(2);
            for parity in [Parity::Even, Parity::Odd] {
                let idx: Vec<usize> = (0..self.gens[vi].len())
                    .filter(|&i| self.gens[vi][i] == parity)
                    .map(|i| self.offsets[vi] + i)
                    .collect();
                let rels: Vec<Vec<Rational>> = self
                    .relations
                    .iter()
                    .map(|r| idx.iter().map(|&i| r[i].clone()).collect::<Vec<_>>())
                    .filter(|r| r.iter().any(|x| !x.is_zero()))
                    .collect();
                let l = idx.len();
                let sq = Subquotient::new(&IntMatrix::identity(l), &IntMatrix::from_columns(l, &rels), &self.ring)?;
                let coords = sq
                    .coordinates_matrix(&IntMatrix::identity(l))
                    .expect("generators lie in the full lattice");
                parts.push(sq.part().clone());
                pieces.push((idx, sq.basis().clone(), coords));
            }
            let odd = parts.pop().unwrap();
            let even = parts.pop().unwrap();
            components.push(GradedGroup::new(self.ring.clone(), even, odd)?);
        }
        let n_new: usize = components.iter().map(GradedGroup::dim).sum();
        let mut to_new = IntMatrix::zeros(n_new, n);
        let mut lift = IntMatrix::zeros(n, n_new);
        let mut row = 0;
        for (idx, basis, coords) in &pieces {
            for k in 0..basis.cols() {
                for (i, &g) in idx.iter().enumerate() {
                    let b = basis.get(i, k);
                    if !b.is_zero() {
                        lift.set(g, row + k, b.clone());
                    }
                    let c = coords.get(k, i);
                    if !c.is_zero() {
                        to_new.set(row + k, g, c.clone());
                    }
                }
            }
            row += basis.cols();
        }
        let orders: Vec<BigInt> = components.iter().flat_map(GradedGroup::orders).collect();
        let actions = self
            .actions
            .iter()
            .map(|l| {
                l.iter()
                    .map(|a| reduce_rows(&orders, &(&(&to_new * a) * &lift)))
                    .collect()
            })
            .collect();
        let module = KGModule::from_actions(&self.primes, self.ring.clone(), components, actions)?;
        Ok(Normalized { module, to_new, lift })
    }
}

/// A direct sum with its inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: KGModule,
    pub inclusions: Vec<IntMatrix>,
    pub projections: Vec<IntMatrix>,
}

/// Direct sum of modules over the same primes and coefficients.
pub fn direct_sum_many(mods: &[&KGModule]) -> Result<DirectSum> {
    let first = mods
        .first()
        .ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
    for m in mods {
        if m.primes() != first.primes() {
            return Err(Error::PrimeMismatch {
                left: first.primes().to_vec(),
                right: m.primes().to_vec(),
            });
        }
        if m.ring() != first.ring() {
            return Err(Error::RingMismatch {
                left: first.ring().modulus(),
                right: m.ring().modulus(),
            });
        }
    }
    let nv = first.vertex_count();
    // summand s, coordinate c -> global index in the sum, vertex-major and parity sorted
    let mut components = Vec::with_capacity(nv);
    let mut index: Vec<Vec<usize>> = mods.iter().map(|m| vec![0; m.dim()]).collect();
    let mut next = 0;
    for vi in 0..nv {
        for parity in [Parity::Even, Parity::Odd] {
            // free generators of all summands first, then torsion
            for want_free in [true, false] {
                for (s, m) in mods.iter().enumerate() {
                    for c in m.parity_range(vi, parity) {
                        if m.orders()[c].is_zero() == want_free {
                            index[s][c] = next;
                            next += 1;
                        }
                    }
                }
            }
        }
        let part = |parity: Parity| {
            let rank = mods.iter().map(|m| m.components()[vi].part(parity).rank).sum();
            let torsion: Vec<BigInt> = mods
                .iter()
                .flat_map(|m| m.components()[vi].part(parity).torsion.clone())
                .collect();
            GroupPart::new(rank, torsion)
        };
        components.push((part(Parity::Even), part(Parity::Odd)));
    }
    let n = next;
    let mut actions = vec![vec![IntMatrix::zeros(n, n); 6]; first.k()];
    for (s, m) in mods.iter().enumerate() {
        for (j, list) in actions.iter_mut().enumerate() {
            for (ai, a) in Arrow::ALL.into_iter().enumerate() {
                let src = m.action(j, a);
                for r in 0..m.dim() {
                    for c in 0..m.dim() {
                        let x = src.get(r, c);
                        if !x.is_zero() {
                            list[ai].set(index[s][r], index[s][c], x.clone());
                        }
                    }
                }
            }
        }
    }
    // torsion invariants of a sum need not be a divisibility chain; normalize if so
    let chain_ok = components
        .iter()
        .all(|(e, o)| is_chain(&e.torsion) && is_chain(&o.torsion));
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for (s, m) in mods.iter().enumerate() {
        let mut inc = IntMatrix::zeros(n, m.dim());
        let mut proj = IntMatrix::zeros(m.dim(), n);
        for c in 0..m.dim() {
            inc.set(index[s][c], c, Rational::one());
            proj.set(c, index[s][c], Rational::one());
        }
        inclusions.push(inc);
        projections.push(proj);
    }
    if chain_ok {
        let comps = components
            .into_iter()
            .map(|(e, o)| GradedGroup::new(first.ring().clone(), e, o))
            .collect::<Result<Vec<_>>>()?;
        let module = KGModule::from_actions(first.primes(), first.ring().clone(), comps, actions)?;
        return Ok(DirectSum {
            module,
            inclusions,
            projections,
        });
    }
    let mut raw = RawModule::new(first.primes(), first.ring().clone())?;
    let mut orders = vec![BigInt::zero(); n];
    let mut parities = vec![Parity::Even; n];
    for (s, m) in mods.iter().enumerate() {
        for c in 0..m.dim() {
            orders[index[s][c]] = m.orders()[c].clone();
            parities[index[s][c]] = m.parities()[c];
        }
    }
    let mut vi_of = vec![0; n];
    for (s, m) in mods.iter().enumerate() {
        for c in 0..m.dim() {
            vi_of[index[s][c]] = m.vertex_of_coordinate(c);
        }
    }
    for g in 0..n {
        raw.push_generator(vi_of[g], parities[g], orders[g].clone());
    }
    raw.finish_layout();
    for (j, list) in actions.into_iter().enumerate() {
        for (a, m) in Arrow::ALL.into_iter().zip(list) {
            raw.set_action(j, a, m);
        }
    }
    let norm = raw.normalize()?;
    let inclusions = inclusions.iter().map(|i| &norm.to_new * i).collect();
    let projections = projections.iter().map(|p| p * &norm.lift).collect();
    Ok(DirectSum {
        module: norm.module,
        inclusions,
        projections,
    })
}

fn is_chain(t: &[BigInt]) -> bool {
    t.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}
