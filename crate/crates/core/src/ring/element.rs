//! Elements of the tensor product ring over several primes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlinalg::Parity;
use crate::ring::poly::{Arrow, Monomial, Poly, Vertex};
use crate::ring::{rewrite_system, RewriteSystem};

/// One path per prime.
pub type TensorMonomial = Vec<Monomial>;

/// All vertices in {0,1,2}^k, lexicographically.
pub fn all_vertices(k: usize) -> Vec<Vec<Vertex>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..3u8).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// Validated list of distinct primes in ascending order.
pub fn check_primes(primes: &[u64]) -> Result<Vec<u64>> {
    for &p in primes {
        if !crate::intlinalg::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
    }
    let mut v = primes.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != primes.len() {
        return Err(Error::Precondition(format!("repeated prime in {primes:?}")));
    }
    Ok(v)
}

/// An integer combination of tensor monomials, kept in normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    primes: Vec<u64>,
    terms: BTreeMap<TensorMonomial, BigInt>,
}

impl RingElement {
    pub fn zero(primes: &[u64]) -> Result<Self> {
        Ok(Self {
            primes: check_primes(primes)?,
            terms: BTreeMap::new(),
        })
    }

    fn systems(&self) -> Result<Vec<Arc<RewriteSystem>>> {
        self.primes.iter().map(|&p| rewrite_system(p)).collect()
    }

    /// The unit, the sum of all vertex idempotents.
    pub fn one(primes: &[u64]) -> Result<Self> {
        let mut x = Self::zero(primes)?;
        for v in all_vertices(x.primes.len()) {
            x.add_term(v.iter().map(|&d| Monomial::idempotent(d)).collect(), BigInt::from(1));
        }
        Ok(x)
    }

    /// The idempotent of a vertex tuple.
    pub fn vertex_idempotent(primes: &[u64], v: &[Vertex]) -> Result<Self> {
        let mut x = Self::zero(primes)?;
        if v.len() != x.primes.len() || v.iter().any(|&d| d > 2) {
            return Err(Error::Dimension(format!("vertex {v:?} for {} primes", x.primes.len())));
        }
        x.add_term(v.iter().map(|&d| Monomial::idempotent(d)).collect(), BigInt::from(1));
        Ok(x)
    }

    /// `f` in factor j, tensored with the unit elsewhere.
    pub fn from_factor(primes: &[u64], j: usize, f: &Poly) -> Result<Self> {
        let mut x = Self::zero(primes)?;
        let k = x.primes.len();
        if j >= k {
            return Err(Error::PrimeIndex { index: j, count: k });
        }
        for rest in all_vertices(k - 1) {
            for (m, c) in f.terms() {
                let mut t: TensorMonomial = Vec::with_capacity(k);
                let mut it = rest.iter();
                for i in 0..k {
                    if i == j {
                        t.push(m.clone());
                    } else {
                        t.push(Monomial::idempotent(*it.next().unwrap()));
                    }
                }
                x.add_term(t, c.clone());
            }
        }
        x.normalize()
    }

    /// The arrow `a` of prime index j.
    pub fn arrow(primes: &[u64], j: usize, a: Arrow) -> Result<Self> {
        let p = *check_primes(primes)?.get(j).ok_or(Error::PrimeIndex {
            index: j,
            count: primes.len(),
        })?;
        Self::from_factor(primes, j, &Poly::arrow(p, a))
    }

    /// Pure tensor of one polynomial per prime.
    pub fn tensor(primes: &[u64], factors: &[Poly]) -> Result<Self> {
        let mut x = Self::zero(primes)?;
        if factors.len() != x.primes.len() {
            return Err(Error::Dimension("one factor per prime".into()));
        }
        let mut acc: Vec<(TensorMonomial, BigInt)> = vec![(Vec::new(), BigInt::from(1))];
        for f in factors {
            let mut next = Vec::new();
            for (t, c) in &acc {
                for (m, d) in f.terms() {
                    let mut t2 = t.clone();
                    t2.push(m.clone());
                    next.push((t2, c * d));
                }
            }
            acc = next;
        }
        for (t, c) in acc {
            x.add_term(t, c);
        }
        x.normalize()
    }

    fn add_term(&mut self, t: TensorMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Reduce every factor to normal form.
    pub fn normalize(mut self) -> Result<Self> {
        let systems = self.systems()?;
        for (j, sys) in systems.iter().enumerate() {
            let mut next: BTreeMap<TensorMonomial, BigInt> = BTreeMap::new();
            for (t, c) in std::mem::take(&mut self.terms) {
                let nf = sys.normal_form(&Poly::term(t[j].clone(), c));
                for (m, d) in nf.terms() {
                    let mut t2 = t.clone();
                    t2[j] = m.clone();
                    let e = next.entry(t2).or_default();
                    *e += d;
                }
            }
            next.retain(|_, v| !v.is_zero());
            self.terms = next;
        }
        Ok(self)
    }

    pub fn normal_form(&self) -> Result<Self> {
        self.clone().normalize()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.primes != other.primes {
            return Err(Error::PrimeMismatch {
                left: self.primes.clone(),
                right: other.primes.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut x = self.clone();
        for (t, c) in &other.terms {
            x.add_term(t.clone(), c.clone());
        }
        Ok(x)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut x = self.clone();
        if c.is_zero() {
            x.terms.clear();
        } else {
            for v in x.terms.values_mut() {
                *v *= c;
            }
        }
        x
    }

    /// Product with the sign-free tensor rule, reduced.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut x = Self {
            primes: self.primes.clone(),
            terms: BTreeMap::new(),
        };
        for (a, c) in &self.terms {
            'pair: for (b, d) in &other.terms {
                let mut t = Vec::with_capacity(a.len());
                for (ma, mb) in a.iter().zip(b) {
                    match ma.mul(mb) {
                        Some(m) => t.push(m),
                        None => continue 'pair,
                    }
                }
                x.add_term(t, c * d);
            }
        }
        x.normalize()
    }

    /// Total degree; fails on inhomogeneous elements. Zero counts as even.
    pub fn degree(&self) -> Result<Parity> {
        let mut deg: Option<Parity> = None;
        for t in self.terms.keys() {
            let d = t.iter().fold(Parity::Even, |acc, m| acc + m.parity());
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg.unwrap_or(Parity::Even))
    }

    /// Common source vertex of all terms.
    pub fn source(&self) -> Option<Vec<Vertex>> {
        self.common(|m| m.source())
    }

    /// Common target vertex of all terms.
    pub fn target(&self) -> Option<Vec<Vertex>> {
        self.common(|m| m.target())
    }

    fn common(&self, f: impl Fn(&Monomial) -> Vertex) -> Option<Vec<Vertex>> {
        let mut out: Option<Vec<Vertex>> = None;
        for t in self.terms.keys() {
            let v: Vec<Vertex> = t.iter().map(&f).collect();
            match &out {
                None => out = Some(v),
                Some(w) if *w != v => return None,
                _ => {}
            }
        }
        out
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(t, c)| {
                let ms: Vec<String> = t.iter().map(|m| m.to_string()).collect();
                format!("{c}*({})", ms.join(" | "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Basis of the tensor ring from vertex `source` to vertex `target`.
pub fn tensor_basis(primes: &[u64], target: &[Vertex], source: &[Vertex]) -> Result<Vec<TensorMonomial>> {
    let primes = check_primes(primes)?;
    let mut acc: Vec<TensorMonomial> = vec![Vec::new()];
    for (j, &p) in primes.iter().enumerate() {
        let sys = rewrite_system(p)?;
        let factor: Vec<Monomial> = sys
            .basis_from(source[j])
            .into_iter()
            .filter(|m| m.target() == target[j])
            .collect();
        acc = acc
            .into_iter()
            .flat_map(|t| {
                factor.iter().map(move |m| {
                    let mut t2 = t.clone();
                    t2.push(m.clone());
                    t2
                })
            })
            .collect();
    }
    Ok(acc)
}
