//! Linear rewriting over the integers for Köhler's ring.
//!
//! Rules replace a path by a smaller combination of paths. Completion adds
//! the differences of critical pairs until they all resolve; every rule has
//! leading coefficient 1, so reduction never divides.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::ring::poly::{Arrow, Monomial, Poly, Vertex};
use crate::ring::presentation::RingPresentation;

#[derive(Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: Poly,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// A completed rule set for one prime.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    p: u64,
    rules: Vec<Rule>,
    /// Rule indices by first arrow of the left side.
    by_first: BTreeMap<Arrow, Vec<usize>>,
    complete: bool,
}

/// A pair of overlapping rule applications.
#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub word: Monomial,
    /// Applies at offset 0.
    pub left: usize,
    pub right: usize,
    pub right_pos: usize,
}

/// Safety cap on completion rounds.
const MAX_RULES: usize = 400;

impl RewriteSystem {
    fn from_rules(p: u64, rules: Vec<Rule>) -> Self {
        let mut by_first: BTreeMap<Arrow, Vec<usize>> = BTreeMap::new();
        for (i, r) in rules.iter().enumerate() {
            by_first.entry(r.lhs.word()[0]).or_default().push(i);
        }
        Self {
            p,
            rules,
            by_first,
            complete: false,
        }
    }

    /// Complete the presentation into a confluent rule set and re-check every critical pair.
    pub fn complete(pres: &RingPresentation) -> Result<Self> {
        let p = pres.prime();
        let mut sys = Self::from_rules(p, Vec::new());
        let mut queue: VecDeque<Poly> = pres.relations().iter().map(|r| r.difference()).collect();
        let mut done_pairs: BTreeSet<(Monomial, Monomial, usize)> = BTreeSet::new();
        let mut deferred: Vec<Poly> = Vec::new();

        loop {
            let mut progress = false;
            while let Some(eq) = queue.pop_front() {
                let r = sys.normal_form(&eq);
                let Some((lead, c)) = r.leading() else { continue };
                if !c.abs().is_one() {
                    deferred.push(r);
                    continue;
                }
                if lead.is_empty() {
                    return Err(Error::Completion(format!("relation {r} collapses an idempotent")));
                }
                progress = true;
                let lead = lead.clone();
                let rhs = r.sub(&Poly::term(lead.clone(), c.clone())).scale(&-c.clone());
                // rules whose left side contains the new one go back to the queue
                let mut kept = Vec::new();
                for rule in std::mem::take(&mut sys.rules) {
                    if rule.lhs.find(lead.word()).is_some() {
                        queue.push_back(Poly::monomial(rule.lhs.clone()).sub(&rule.rhs));
                    } else {
                        kept.push(rule);
                    }
                }
                kept.push(Rule { lhs: lead, rhs });
                sys = Self::from_rules(p, kept);
                if sys.rules.len() > MAX_RULES {
                    return Err(Error::Completion(format!("more than {MAX_RULES} rules")));
                }
            }
            // critical pairs not yet examined
            for pair in sys.critical_pairs() {
                let key = (
                    sys.rules[pair.left].lhs.clone(),
                    sys.rules[pair.right].lhs.clone(),
                    pair.right_pos,
                );
                if !done_pairs.insert(key) {
                    continue;
                }
                let d = sys.pair_difference(&pair);
                if !d.is_zero() {
                    queue.push_back(d);
                }
            }
            if !queue.is_empty() {
                continue;
            }
            let retry: Vec<Poly> = deferred
                .drain(..)
                .map(|d| sys.normal_form(&d))
                .filter(|d| !d.is_zero())
                .collect();
            if retry.is_empty() {
                break;
            }
            if !progress {
                return Err(Error::Completion(format!("non-monic leading term in {}", retry[0])));
            }
            queue.extend(retry);
        }

        sys.interreduce();
        sys.rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        let mut sys = Self::from_rules(p, sys.rules);
        sys.verify_confluence()?;
        sys.complete = true;
        Ok(sys)
    }

    fn interreduce(&mut self) {
        for i in 0..self.rules.len() {
            let rhs = self.normal_form(&self.rules[i].rhs.clone());
            self.rules[i].rhs = rhs;
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// A rule applying to `m`, with its position.
    fn reducer(&self, m: &Monomial) -> Option<(usize, usize)> {
        let w = m.word();
        for (pos, a) in w.iter().enumerate() {
            if let Some(idx) = self.by_first.get(a) {
                for &i in idx {
                    let l = self.rules[i].lhs.word();
                    if w.len() - pos >= l.len() && &w[pos..pos + l.len()] == l {
                        return Some((i, pos));
                    }
                }
            }
        }
        None
    }

    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.reducer(m).is_some()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        let mut work = f.clone();
        let mut out = Poly::zero();
        while let Some((m, c)) = work.pop_leading() {
            match self.reducer(&m) {
                Some((i, pos)) => {
                    let rule = &self.rules[i];
                    let pre = m.slice(self.p, 0, pos);
                    let post = m.slice(self.p, pos + rule.lhs.len(), m.len());
                    for (rm, rc) in rule.rhs.sandwich(&pre, &post).terms() {
                        work.add_term(rm.clone(), &c * rc);
                    }
                }
                None => out.add_term(m, c),
            }
        }
        out
    }

    /// Reduced product.
    pub fn multiply(&self, a: &Poly, b: &Poly) -> Poly {
        self.normal_form(&a.mul(b))
    }

    /// All overlaps and inclusions between left sides.
    pub fn critical_pairs(&self) -> Vec<CriticalPair> {
        let mut out = Vec::new();
        for (i, ri) in self.rules.iter().enumerate() {
            let a = ri.lhs.word();
            for (j, rj) in self.rules.iter().enumerate() {
                let b = rj.lhs.word();
                // suffix of a equals prefix of b
                for k in 1..a.len().min(b.len()) {
                    if a[a.len() - k..] == b[..k] {
                        let mut w = a.to_vec();
                        w.extend_from_slice(&b[k..]);
                        if let Some(word) = Monomial::from_word(self.p, &w) {
                            out.push(CriticalPair {
                                word,
                                left: i,
                                right: j,
                                right_pos: a.len() - k,
                            });
                        }
                    }
                }
                if i != j {
                    if let Some(pos) = ri.lhs.find(b) {
                        out.push(CriticalPair {
                            word: ri.lhs.clone(),
                            left: i,
                            right: j,
                            right_pos: pos,
                        });
                    }
                }
            }
        }
        out
    }

    /// Difference of the two one-step reductions of a critical pair, reduced.
    fn pair_difference(&self, pair: &CriticalPair) -> Poly {
        let w = &pair.word;
        let l = &self.rules[pair.left];
        let r = &self.rules[pair.right];
        // left rule sits at position 0
        let post_l = w.slice(self.p, l.lhs.len(), w.len());
        let left = l.rhs.sandwich(&Monomial::idempotent(w.target()), &post_l);
        let pos = pair.right_pos;
        let pre_r = w.slice(self.p, 0, pos);
        let post_r = w.slice(self.p, pos + r.lhs.len(), w.len());
        let right = r.rhs.sandwich(&pre_r, &post_r);
        self.normal_form(&left.sub(&right))
    }

    /// Check that every critical pair resolves; returns the number checked.
    pub fn verify_confluence(&self) -> Result<usize> {
        let pairs = self.critical_pairs();
        for pair in &pairs {
            let d = self.pair_difference(pair);
            if !d.is_zero() {
                return Err(Error::Completion(format!(
                    "critical pair on {} ({} / {}) leaves {}",
                    pair.word, self.rules[pair.left], self.rules[pair.right], d
                )));
            }
        }
        Ok(pairs.len())
    }

    /// Irreducible paths grouped by (target, source).
    pub fn basis(&self) -> BTreeMap<(Vertex, Vertex), Vec<Monomial>> {
        let mut out: BTreeMap<(Vertex, Vertex), Vec<Monomial>> = BTreeMap::new();
        for v in 0..3u8 {
            for w in self.basis_from(v) {
                out.entry((w.target(), w.source())).or_default().push(w);
            }
        }
        for list in out.values_mut() {
            list.sort();
        }
        out
    }

    /// Irreducible paths starting at `v`, in increasing order.
    pub fn basis_from(&self, v: Vertex) -> Vec<Monomial> {
        let mut out = vec![Monomial::idempotent(v)];
        let mut frontier = vec![Monomial::idempotent(v)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for a in Arrow::ALL {
                    if a.source() != m.target() {
                        continue;
                    }
                    let x = Monomial::arrow(self.p, a).mul(m).unwrap();
                    if !self.is_reducible(&x) {
                        next.push(x);
                    }
                }
            }
            assert!(out.len() < 100_000, "ring is not finitely generated as a group");
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }

    /// Z-rank of the ring.
    pub fn rank(&self) -> usize {
        (0..3).map(|v| self.basis_from(v).len()).sum()
    }

    pub fn coefficient_of_one(&self, f: &Poly, v: Vertex) -> BigInt {
        self.normal_form(f).coefficient(&Monomial::idempotent(v))
    }
}

/// Whether `f` is zero in the ring.
pub fn reduces_to_zero(sys: &RewriteSystem, f: &Poly) -> bool {
    sys.normal_form(f).is_zero()
}
