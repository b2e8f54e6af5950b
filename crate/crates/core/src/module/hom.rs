//! Groups of linear maps and an isomorphism search.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::map::ModuleMap;
use super::KGModule;
use crate::error::{Error, Result};
use crate::intlinalg::{CongruenceSystem, GradedGroup, GroupPart, IntMatrix, Parity, Rational, Subquotient};
use crate::ring::Arrow;

/// Even linear maps `source -> target` commuting with optional extra endomorphism pairs.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: KGModule,
    pub target: KGModule,
    /// (row, column) of each unknown entry.
    vars: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// Solution lattice, vars x k.
    pub lattice: IntMatrix,
    /// Maps that are zero because of torsion in the target, vars x k0.
    pub null: IntMatrix,
    quotient: Subquotient,
}

impl HomSpace {
    pub fn group(&self) -> &GroupPart {
        self.quotient.part()
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// Matrix with the given values of the unknowns.
    pub fn matrix_of(&self, x: &[Rational]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.dim(), self.source.dim());
        for (i, &(r, c)) in self.vars.iter().enumerate() {
            if !x[i].is_zero() {
                m.set(r, c, x[i].clone());
            }
        }
        self.target.reduce(&m)
    }

    /// Values of the unknowns read off a matrix; entries outside the unknowns are ignored.
    pub fn vars_of(&self, m: &IntMatrix) -> Vec<Rational> {
        self.vars.iter().map(|&(r, c)| m.get(r, c).clone()).collect()
    }

    pub fn var_index(&self, r: usize, c: usize) -> Option<usize> {
        self.index.get(&(r, c)).copied()
    }

    /// Matrices of the generators, in the order of [`HomSpace::group`].
    pub fn basis(&self) -> Vec<IntMatrix> {
        let b = self.quotient.basis();
        (0..b.cols()).map(|c| self.matrix_of(&b.column(c))).collect()
    }

    /// Coordinates of a linear map in the generators.
    pub fn coordinates(&self, m: &IntMatrix) -> Option<Vec<Rational>> {
        self.quotient.coordinates(&self.vars_of(m))
    }
}

/// The Hom group of even linear maps; `extra` pairs (A, B) add the condition B X = X A.
pub fn hom_space(source: &KGModule, target: &KGModule, extra: &[(IntMatrix, IntMatrix)]) -> Result<HomSpace> {
    if source.primes() != target.primes() {
        return Err(Error::PrimeMismatch {
            left: source.primes().to_vec(),
            right: target.primes().to_vec(),
        });
    }
    if source.ring() != target.ring() {
        return Err(Error::RingMismatch {
            left: source.ring().modulus(),
            right: target.ring().modulus(),
        });
    }
    let ring = source.ring();
    let mut pairs: Vec<(IntMatrix, IntMatrix)> = Vec::new();
    for j in 0..source.k() {
        for a in Arrow::ALL {
            pairs.push((source.action(j, a).clone(), target.action(j, a).clone()));
        }
    }
    pairs.extend(extra.iter().cloned());
    let same_vertex = |r: usize, c: usize| {
        target.vertex_of_coordinate(r) == source.vertex_of_coordinate(c) && target.parities()[r] == source.parities()[c]
    };
    let MapSystem { vars, index, sys } = map_system(source, target, same_vertex, &pairs);
    let lattice = sys.solution_lattice(ring);
    let null_cols: Vec<Vec<Rational>> = vars
        .iter()
        .enumerate()
        .filter(|(_, &(r, _))| !target.orders()[r].is_zero())
        .map(|(i, &(r, _))| {
            let mut e = vec![Rational::zero(); vars.len()];
            e[i] = Rational::from_integer(target.orders()[r].clone());
            e
        })
        .collect();
    let null = IntMatrix::from_columns(vars.len(), &null_cols);
    let quotient = Subquotient::new(&lattice.hstack(&null)?, &null, ring)?;
    Ok(HomSpace {
        source: source.clone(),
        target: target.clone(),
        vars,
        index,
        lattice,
        null,
        quotient,
    })
}

/// Unknown matrix entries with commutation and torsion constraints.
pub(crate) struct MapSystem {
    pub vars: Vec<(usize, usize)>,
    pub index: HashMap<(usize, usize), usize>,
    pub sys: CongruenceSystem,
}

/// Entries `(r, c)` with `allowed(r, c)` as unknowns; rows for `B X = X A` per pair and for torsion of the source.
pub(crate) fn map_system(
    source: &KGModule,
    target: &KGModule,
    allowed: impl Fn(usize, usize) -> bool,
    pairs: &[(IntMatrix, IntMatrix)],
) -> MapSystem {
    let (n_src, n_tgt) = (source.dim(), target.dim());
    let mut vars = Vec::new();
    for r in 0..n_tgt {
        for c in 0..n_src {
            if allowed(r, c) {
                vars.push((r, c));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // unknowns in row r, and in column c
    let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); n_tgt];
    let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); n_src];
    for &(r, c) in &vars {
        by_row[r].push(c);
        by_col[c].push(r);
    }
    let mut sys = CongruenceSystem::new(vars.len());
    for (a, b) in pairs {
        // (B X - X A)[r][c] = 0 in the target
        let mut rows: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for r in 0..n_tgt {
            for s in 0..n_tgt {
                let x = b.get(r, s);
                if x.is_zero() {
                    continue;
                }
                for &c in &by_row[s] {
                    rows.entry((r, c)).or_default().push((index[&(s, c)], x.clone()));
                }
            }
        }
        for t in 0..n_src {
            for c in 0..n_src {
                let x = a.get(t, c);
                if x.is_zero() {
                    continue;
                }
                for &r in &by_col[t] {
                    rows.entry((r, c)).or_default().push((index[&(r, t)], -x.clone()));
                }
            }
        }
        for ((r, _), coeffs) in rows {
            sys.push(merge(coeffs), target.orders()[r].clone());
        }
    }
    for (c, d) in source.orders().iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        for &r in &by_col[c] {
            sys.push(
                vec![(index[&(r, c)], Rational::from_integer(d.clone()))],
                target.orders()[r].clone(),
            );
        }
    }
    MapSystem { vars, index, sys }
}

fn merge(coeffs: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    let mut m: BTreeMap<usize, Rational> = BTreeMap::new();
    for (v, c) in coeffs {
        *m.entry(v).or_insert_with(Rational::zero) += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Even and odd linear maps as a graded group.
pub fn hom(source: &KGModule, target: &KGModule) -> Result<GradedGroup> {
    let even = hom_space(source, target, &[])?;
    let odd = hom_space(source, &target.suspend(), &[])?;
    GradedGroup::new(source.ring().clone(), even.group().clone(), odd.group().clone())
}

/// Whether an even map is a bijection of underlying groups.
pub fn is_isomorphism(map: &ModuleMap) -> Result<bool> {
    Ok(map.is_injective()? && map.is_surjective()?)
}

const ISO_TRIES: usize = 400;

/// Search the Hom group for an even linear isomorphism, also intertwining `extra` pairs.
pub fn find_isomorphism(source: &KGModule, target: &KGModule, extra: &[(IntMatrix, IntMatrix)]) -> Result<ModuleMap> {
    if source.components() != target.components() {
        return Err(Error::NoIsomorphism("components differ".into()));
    }
    let space = hom_space(source, target, extra)?;
    let basis = space.basis();
    let try_matrix = |m: IntMatrix| -> Result<Option<ModuleMap>> {
        let f = ModuleMap::new(source.clone(), target.clone(), Parity::Even, m)?;
        Ok(if is_isomorphism(&f)? { Some(f) } else { None })
    };
    if source.is_zero() {
        return try_matrix(IntMatrix::zeros(0, 0))?.ok_or_else(|| Error::NoIsomorphism("zero".into()));
    }
    for b in &basis {
        if let Some(f) = try_matrix(b.clone())? {
            return Ok(f);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for t in 0..ISO_TRIES {
        let bound = 2 + (t / 50) as i64;
        let mut m = IntMatrix::zeros(target.dim(), source.dim());
        for b in &basis {
            let c: i64 = rng.gen_range(-bound..=bound);
            if c != 0 {
                m = &m + &b.scale(&Rational::from_integer(BigInt::from(c)));
            }
        }
        if let Some(f) = try_matrix(m)? {
            return Ok(f);
        }
    }
    Err(Error::NoIsomorphism(format!(
        "no bijection among {ISO_TRIES} random combinations of {} generators",
        basis.len()
    )))
}
