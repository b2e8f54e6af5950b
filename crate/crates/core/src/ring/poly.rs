//! Paths in the quiver of Köhler's ring and integer linear combinations of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::intlinalg::Parity;

/// Vertex of the single-prime quiver.
pub type Vertex = u8;

/// The arrow α_jk goes from vertex k to vertex j. Declaration order is the
/// tie-breaking order of the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    A01,
    A10,
    A02,
    A20,
    A12,
    A21,
}

impl Arrow {
    pub const ALL: [Arrow; 6] = [Arrow::A01, Arrow::A10, Arrow::A02, Arrow::A20, Arrow::A12, Arrow::A21];

    pub fn target(self) -> Vertex {
        match self {
            Arrow::A01 | Arrow::A02 => 0,
            Arrow::A10 | Arrow::A12 => 1,
            Arrow::A20 | Arrow::A21 => 2,
        }
    }

    pub fn source(self) -> Vertex {
        match self {
            Arrow::A10 | Arrow::A20 => 0,
            Arrow::A01 | Arrow::A21 => 1,
            Arrow::A02 | Arrow::A12 => 2,
        }
    }

    pub fn from_vertices(target: Vertex, source: Vertex) -> Option<Arrow> {
        Arrow::ALL
            .into_iter()
            .find(|a| a.target() == target && a.source() == source)
    }

    pub fn parity(self) -> Parity {
        match self {
            Arrow::A12 | Arrow::A21 => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// Weight in the monomial order; the arrows between 0 and 1 weigh p.
    pub fn weight(self, p: u64) -> u64 {
        match self {
            Arrow::A01 | Arrow::A10 => p,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Arrow::A01 => "alpha01",
            Arrow::A10 => "alpha10",
            Arrow::A02 => "alpha02",
            Arrow::A20 => "alpha20",
            Arrow::A12 => "alpha12",
            Arrow::A21 => "alpha21",
        }
    }

    pub fn from_name(s: &str) -> Option<Arrow> {
        Arrow::ALL.into_iter().find(|a| a.name() == s)
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}{}", self.target(), self.source())
    }
}

/// A path `word[0] * word[1] * ... * word[n-1]` from `source` to `target`.
/// The empty word is the idempotent at its vertex. The derived order is the
/// monomial order: weight first, then the word lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    weight: u64,
    word: Vec<Arrow>,
    target: Vertex,
    source: Vertex,
}

impl Monomial {
    pub fn idempotent(v: Vertex) -> Self {
        Monomial {
            weight: 0,
            word: Vec::new(),
            target: v,
            source: v,
        }
    }

    pub fn arrow(p: u64, a: Arrow) -> Self {
        Monomial {
            weight: a.weight(p),
            word: vec![a],
            target: a.target(),
            source: a.source(),
        }
    }

    /// Path from a word; `None` if consecutive arrows do not compose or the word is empty.
    pub fn from_word(p: u64, word: &[Arrow]) -> Option<Self> {
        let first = word.first()?;
        for w in word.windows(2) {
            if w[0].source() != w[1].target() {
                return None;
            }
        }
        Some(Monomial {
            weight: word.iter().map(|a| a.weight(p)).sum(),
            word: word.to_vec(),
            target: first.target(),
            source: word.last().unwrap().source(),
        })
    }

    pub fn word(&self) -> &[Arrow] {
        &self.word
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn target(&self) -> Vertex {
        self.target
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.word.iter().filter(|a| a.parity() == Parity::Odd).count())
    }

    /// `self * other`, or `None` when the paths do not meet.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        if self.source != other.target {
            return None;
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Some(Monomial {
            weight: self.weight + other.weight,
            word,
            target: self.target,
            source: other.source,
        })
    }

    /// Position of the first occurrence of `pat` as a subword.
    pub fn find(&self, pat: &[Arrow]) -> Option<usize> {
        if pat.is_empty() || pat.len() > self.word.len() {
            return None;
        }
        self.word.windows(pat.len()).position(|w| w == pat)
    }

    /// Subpath `word[start..end]`; a zero-length slice gives the idempotent at the cut.
    pub fn slice(&self, p: u64, start: usize, end: usize) -> Monomial {
        if start == end {
            let v = if start == 0 {
                self.target
            } else {
                self.word[start - 1].source()
            };
            return Monomial::idempotent(v);
        }
        Monomial::from_word(p, &self.word[start..end]).expect("subpath of a path")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1_{}", self.target);
        }
        let parts: Vec<String> = self.word.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Integer combination of paths for one prime; the last key is the leading term.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn idempotent(v: Vertex) -> Self {
        Self::monomial(Monomial::idempotent(v))
    }

    pub fn arrow(p: u64, a: Arrow) -> Self {
        Self::monomial(Monomial::arrow(p, a))
    }

    /// Product of arrows given as a word; the word must compose.
    pub fn word(p: u64, w: &[Arrow]) -> Self {
        Self::monomial(Monomial::from_word(p, w).expect("composable word"))
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn pop_leading(&mut self) -> Option<(Monomial, BigInt)> {
        self.terms.pop_last()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    /// Concatenation product, without reduction.
    pub fn mul(&self, other: &Poly) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(m) = a.mul(b) {
                    out.add_term(m, x * y);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: usize, unit: &Poly) -> Self {
        let mut acc = unit.clone();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `pre * self * post` for monomials.
    pub fn sandwich(&self, pre: &Monomial, post: &Monomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some(x) = pre.mul(m).and_then(|x| x.mul(post)) {
                out.add_term(x, c.clone());
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// N(e - x) = sum_{i=1}^{p} (-1)^{i+1} C(p, i) x^{i-1} for a loop x at vertex v.
pub fn norm_of_unit_minus(p: u64, v: Vertex, x: &Poly) -> Poly {
    let unit = Poly::idempotent(v);
    let mut out = Poly::zero();
    let mut power = unit.clone();
    for i in 1..=p {
        let mut c = binomial(p, i);
        if i % 2 == 0 {
            c = -c;
        }
        out = out.add(&power.scale(&c));
        if i < p {
            power = power.mul(x);
        }
    }
    out
}
