//! Finitely generated Z/2-graded modules over the tensor ring.
//!
//! A module stores one [`GradedGroup`] per vertex in {0,1,2}^k and, for each
//! prime index and arrow, one global matrix acting on the concatenation of all
//! components. Within a component coordinates run even free, even torsion,
//! odd free, odd torsion. Arrows act on the left: the arrow a_jk of prime i
//! maps the component at v to the component at v with digit i changed from k
//! to j.

mod ext;
mod free;
pub(crate) mod hom;
mod map;
mod raw;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::group::{is_zero_in, matrix_is_zero_in, reduce_in};
use crate::intlinalg::{reduce_mod, GradedGroup, IntMatrix, Localization, Parity, Rational};
use crate::ring::{all_vertices, check_primes, Arrow, Poly, RingElement, TensorMonomial, Vertex};

pub use ext::{ext1, ext1_part, free_cover, resolve, FreeCover, Resolution};
pub use free::{free_module, FreeModule};
pub use hom::{find_isomorphism, hom, hom_space, is_isomorphism, HomSpace};
pub use map::{Extension, ModuleMap};
pub use raw::{direct_sum_many, DirectSum, Normalized, RawModule};

/// Index of an arrow in [`Arrow::ALL`].
pub fn arrow_index(a: Arrow) -> usize {
    Arrow::ALL.iter().position(|&b| b == a).unwrap()
}

/// Index of a vertex tuple in lexicographic order.
pub fn vertex_index(v: &[Vertex]) -> usize {
    v.iter().fold(0, |acc, &d| acc * 3 + d as usize)
}

/// Vertex tuple of an index.
pub fn vertex_of(mut idx: usize, k: usize) -> Vec<Vertex> {
    let mut v = vec![0; k];
    for i in (0..k).rev() {
        v[i] = (idx % 3) as Vertex;
        idx /= 3;
    }
    v
}

pub fn vertex_string(v: &[Vertex]) -> String {
    v.iter().map(|d| char::from(b'0' + d)).collect()
}

/// A Z/2-graded left module over the tensor ring of `primes`, with coefficients in Z[1/m].
#[derive(Clone, PartialEq, Eq)]
pub struct KGModule {
    primes: Vec<u64>,
    ring: Localization,
    components: Vec<GradedGroup>,
    offsets: Vec<usize>,
    orders: Vec<BigInt>,
    parities: Vec<Parity>,
    /// `actions[j][arrow_index(a)]`, global square matrices.
    actions: Vec<Vec<IntMatrix>>,
}

/// Relation checked by [`KGModule::validate`] that fails at a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: String,
    pub prime: u64,
    pub vertex: Vec<Vertex>,
}

impl fmt::Display for RelationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} {} at vertex {}",
            self.prime,
            self.relation,
            vertex_string(&self.vertex)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl KGModule {
    /// Module from global action matrices, one list of six per prime, indexed like [`Arrow::ALL`].
    /// Torsion rows are reduced; structural checks only (see [`KGModule::validate`]).
    pub fn from_actions(
        primes: &[u64],
        ring: Localization,
        components: Vec<GradedGroup>,
        actions: Vec<Vec<IntMatrix>>,
    ) -> Result<Self> {
        let sorted = check_primes(primes)?;
        if sorted != primes {
            return Err(Error::Precondition(format!("primes must be ascending, got {primes:?}")));
        }
        let k = primes.len();
        let nv = 3usize.pow(k as u32);
        if components.len() != nv {
            return Err(Error::Dimension(format!(
                "{} components for {nv} vertices",
                components.len()
            )));
        }
        if components.iter().any(|c| c.ring() != &ring) {
            return Err(Error::InvalidModule(
                "component over a different coefficient ring".into(),
            ));
        }
        let mut offsets = vec![0];
        for c in &components {
            offsets.push(offsets.last().unwrap() + c.dim());
        }
        let n = *offsets.last().unwrap();
        let mut orders = Vec::with_capacity(n);
        let mut parities = Vec::with_capacity(n);
        for c in &components {
            orders.extend(c.orders());
            parities.extend(c.parities());
        }
        if actions.len() != k || actions.iter().any(|a| a.len() != 6) {
            return Err(Error::Dimension("need six action matrices per prime".into()));
        }
        let mut reduced = Vec::with_capacity(k);
        for per_prime in actions {
            let mut list = Vec::with_capacity(6);
            for m in per_prime {
                if m.rows() != n || m.cols() != n {
                    return Err(Error::Dimension(format!(
                        "action is {}x{}, module has dimension {n}",
                        m.rows(),
                        m.cols()
                    )));
                }
                m.check_localized(&ring)?;
                list.push(reduce_rows(&orders, &m));
            }
            reduced.push(list);
        }
        Ok(Self {
            primes: primes.to_vec(),
            ring,
            components,
            offsets,
            orders,
            parities,
            actions: reduced,
        })
    }

    /// Module from blocks keyed by (prime index, arrow, source vertex); missing blocks are zero.
    pub fn from_blocks(
        primes: &[u64],
        ring: Localization,
        components: Vec<GradedGroup>,
        blocks: &BTreeMap<(usize, Arrow, Vec<Vertex>), IntMatrix>,
    ) -> Result<Self> {
        let k = primes.len();
        let mut offsets = vec![0];
        for c in &components {
            offsets.push(offsets.last().unwrap() + c.dim());
        }
        let n = *offsets.last().unwrap();
        let mut actions = vec![vec![IntMatrix::zeros(n, n); 6]; k];
        for ((j, a, v), m) in blocks {
            if *j >= k {
                return Err(Error::PrimeIndex { index: *j, count: k });
            }
            if v.len() != k || v.iter().any(|&d| d > 2) {
                return Err(Error::InvalidModule(format!("bad vertex {v:?}")));
            }
            if v[*j] != a.source() {
                return Err(Error::InvalidModule(format!(
                    "{a} of prime index {j} does not start at vertex {}",
                    vertex_string(v)
                )));
            }
            let mut w = v.clone();
            w[*j] = a.target();
            let (vi, wi) = (vertex_index(v), vertex_index(&w));
            if vi >= components.len() || wi >= components.len() {
                return Err(Error::Dimension("vertex outside module".into()));
            }
            let (rows, cols) = (components[wi].dim(), components[vi].dim());
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Dimension(format!(
                    "block {a} at {} is {}x{}, expected {rows}x{cols}",
                    vertex_string(v),
                    m.rows(),
                    m.cols()
                )));
            }
            actions[*j][arrow_index(*a)].set_block(offsets[wi], offsets[vi], m);
        }
        Self::from_actions(primes, ring, components, actions)
    }

    pub fn zero(primes: &[u64], ring: Localization) -> Result<Self> {
        let nv = 3usize.pow(primes.len() as u32);
        let comps = vec![GradedGroup::zero(ring.clone()); nv];
        let actions = vec![vec![IntMatrix::zeros(0, 0); 6]; primes.len()];
        Self::from_actions(primes, ring, comps, actions)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn k(&self) -> usize {
        self.primes.len()
    }

    pub fn ring(&self) -> &Localization {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn vertex_count(&self) -> usize {
        self.components.len()
    }

    pub fn vertices(&self) -> Vec<Vec<Vertex>> {
        all_vertices(self.k())
    }

    pub fn components(&self) -> &[GradedGroup] {
        &self.components
    }

    pub fn component(&self, v: &[Vertex]) -> &GradedGroup {
        &self.components[vertex_index(v)]
    }

    /// Global coordinate range of the component at vertex index `vi`.
    pub fn range(&self, vi: usize) -> Range<usize> {
        self.offsets[vi]..self.offsets[vi + 1]
    }

    /// Global coordinates of one parity at vertex index `vi`.
    pub fn parity_range(&self, vi: usize, parity: Parity) -> Range<usize> {
        let r = self.components[vi].range(parity);
        self.offsets[vi] + r.start..self.offsets[vi] + r.end
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// Vertex index of a global coordinate.
    pub fn vertex_of_coordinate(&self, c: usize) -> usize {
        match self.offsets.binary_search(&c) {
            Ok(mut i) => {
                while self.offsets[i + 1] == c {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        }
    }

    /// Digit of coordinate `c` for prime index j.
    pub fn digit(&self, c: usize, j: usize) -> Vertex {
        vertex_of(self.vertex_of_coordinate(c), self.k())[j]
    }

    /// Global coordinates whose vertex has digit `d` at prime index j.
    pub fn digit_coordinates(&self, j: usize, d: Vertex) -> Vec<usize> {
        let k = self.k();
        (0..self.vertex_count())
            .filter(|&vi| vertex_of(vi, k)[j] == d)
            .flat_map(|vi| self.range(vi))
            .collect()
    }

    pub fn action(&self, j: usize, a: Arrow) -> &IntMatrix {
        &self.actions[j][arrow_index(a)]
    }

    pub fn actions(&self) -> &[Vec<IntMatrix>] {
        &self.actions
    }

    /// Block of arrow `a` of prime index j starting at vertex `v`.
    pub fn block(&self, j: usize, a: Arrow, v: &[Vertex]) -> IntMatrix {
        let mut w = v.to_vec();
        w[j] = a.target();
        let (vi, wi) = (vertex_index(v), vertex_index(&w));
        let m = self.action(j, a);
        m.block(
            self.offsets[wi],
            self.offsets[vi],
            self.components[wi].dim(),
            self.components[vi].dim(),
        )
    }

    /// Nonzero blocks keyed by (prime index, arrow, source vertex).
    pub fn blocks(&self) -> BTreeMap<(usize, Arrow, Vec<Vertex>), IntMatrix> {
        let mut out = BTreeMap::new();
        for j in 0..self.k() {
            for a in Arrow::ALL {
                for v in self.vertices() {
                    if v[j] != a.source() {
                        continue;
                    }
                    let b = self.block(j, a, &v);
                    if !b.is_zero() {
                        out.insert((j, a, v), b);
                    }
                }
            }
        }
        out
    }

    /// Projection onto the components whose digit at prime index j is `d`.
    pub fn digit_projector(&self, j: usize, d: Vertex) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.dim(), self.dim());
        for c in self.digit_coordinates(j, d) {
            m.set(c, c, Rational::one());
        }
        m
    }

    pub fn vertex_projector(&self, vi: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.dim(), self.dim());
        for c in self.range(vi) {
            m.set(c, c, Rational::one());
        }
        m
    }

    /// Reduce torsion rows of a matrix with values in this module.
    pub fn reduce(&self, m: &IntMatrix) -> IntMatrix {
        reduce_rows(&self.orders, m)
    }

    pub fn reduce_vector(&self, x: &[Rational]) -> Vec<Rational> {
        reduce_in(&self.orders, x)
    }

    pub fn is_zero_vector(&self, x: &[Rational]) -> bool {
        is_zero_in(&self.orders, x)
    }

    /// Whether every column of `m` is zero in this module.
    pub fn is_zero_map(&self, m: &IntMatrix) -> bool {
        matrix_is_zero_in(&self.orders, m)
    }

    /// Columns `d e_c` for the torsion coordinates.
    pub fn relation_matrix(&self) -> IntMatrix {
        crate::intlinalg::relation_columns(&self.orders)
    }

    pub fn identity_matrix(&self) -> IntMatrix {
        IntMatrix::identity(self.dim())
    }

    /// Action of a polynomial in the arrows of prime index j.
    pub fn eval_poly(&self, j: usize, f: &Poly) -> IntMatrix {
        Evaluator::new(self, j).poly(f)
    }

    /// Action of a ring element.
    pub fn act(&self, x: &RingElement) -> Result<IntMatrix> {
        if x.primes() != self.primes.as_slice() {
            return Err(Error::PrimeMismatch {
                left: x.primes().to_vec(),
                right: self.primes.clone(),
            });
        }
        let n = self.dim();
        let mut out = IntMatrix::zeros(n, n);
        for (t, c) in x.terms() {
            let m = self.monomial_matrix(t);
            out = &out + &m.scale(&Rational::from_integer(c.clone()));
        }
        Ok(self.reduce(&out))
    }

    /// Matrix of a tensor monomial.
    pub fn monomial_matrix(&self, t: &TensorMonomial) -> IntMatrix {
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for c in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[c] = Rational::one();
            cols.push(self.apply_monomial(t, &e));
        }
        IntMatrix::from_columns(n, &cols)
    }

    /// Apply a tensor monomial to a vector.
    pub fn apply_monomial(&self, t: &TensorMonomial, x: &[Rational]) -> Vec<Rational> {
        let k = self.k();
        let source: Vec<Vertex> = t.iter().map(|m| m.source()).collect();
        let vi = vertex_index(&source);
        let mut y = vec![Rational::zero(); self.dim()];
        for c in self.range(vi) {
            y[c] = x[c].clone();
        }
        for (j, m) in t.iter().enumerate().take(k) {
            for a in m.word().iter().rev() {
                y = self.action(j, *a).mul_vec(&y);
            }
        }
        self.reduce_vector(&y)
    }

    /// Check all relations as matrix identities.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let k = self.k();
        let n = self.dim();
        let fail_at = |report: &mut ValidationReport, name: &str, p: u64, cols: &[usize]| {
            let mut seen = Vec::new();
            for &c in cols {
                let v = vertex_of(self.vertex_of_coordinate(c), k);
                if !seen.contains(&v) {
                    seen.push(v.clone());
                    report.failures.push(RelationFailure {
                        relation: name.to_string(),
                        prime: p,
                        vertex: v,
                    });
                }
            }
        };
        for j in 0..k {
            let p = self.primes[j];
            for a in Arrow::ALL {
                let m = self.action(j, a);
                // support and grading
                report.checked += 1;
                let mut bad = Vec::new();
                for c in 0..n {
                    let vc = vertex_of(self.vertex_of_coordinate(c), k);
                    for r in 0..n {
                        let x = m.get(r, c);
                        if x.is_zero() || is_zero_in(&self.orders[r..=r], std::slice::from_ref(x)) {
                            continue;
                        }
                        let vr = vertex_of(self.vertex_of_coordinate(r), k);
                        let mut expect = vc.clone();
                        expect[j] = a.target();
                        let ok =
                            vc[j] == a.source() && vr == expect && self.parities[r] == self.parities[c] + a.parity();
                        if !ok {
                            bad.push(c);
                            break;
                        }
                    }
                }
                fail_at(&mut report, &format!("{a} respects vertices and grading"), p, &bad);
                // well defined on torsion
                report.checked += 1;
                let rel = self.relation_matrix();
                let img = m * &rel;
                let bad: Vec<usize> = (0..rel.cols())
                    .filter(|&i| !self.is_zero_vector(&img.column(i)))
                    .map(|i| (0..n).find(|&r| !rel.get(r, i).is_zero()).unwrap())
                    .collect();
                fail_at(&mut report, &format!("{a} well defined on torsion"), p, &bad);
            }
            let pres = crate::ring::build_presentation(p).expect("module primes are prime");
            let mut ev = Evaluator::new(self, j);
            for r in pres.relations() {
                report.checked += 1;
                let d = self.reduce(&ev.poly(&r.difference()));
                let bad: Vec<usize> = (0..n).filter(|&c| !self.is_zero_vector(&d.column(c))).collect();
                fail_at(&mut report, &r.name, p, &bad);
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                for a in Arrow::ALL {
                    for b in Arrow::ALL {
                        report.checked += 1;
                        let (x, y) = (self.action(i, a), self.action(j, b));
                        let d = self.reduce(&(&(x * y) - &(y * x)));
                        let bad: Vec<usize> = (0..n).filter(|&c| !self.is_zero_vector(&d.column(c))).collect();
                        fail_at(
                            &mut report,
                            &format!("{a} (p={}) commutes with {b} (p={})", self.primes[i], self.primes[j]),
                            self.primes[i],
                            &bad,
                        );
                    }
                }
            }
        }
        report
    }

    pub fn check_valid(&self) -> Result<()> {
        let r = self.validate();
        match r.failures.first() {
            None => Ok(()),
            Some(f) => Err(Error::InvalidModule(f.to_string())),
        }
    }

    /// Coordinate permutation to the suspension: `perm[old] = new`.
    pub fn suspension_permutation(&self) -> Vec<usize> {
        let mut perm = vec![0; self.dim()];
        for vi in 0..self.vertex_count() {
            let off = self.offsets[vi];
            let c = &self.components[vi];
            let (e, o) = (c.even().dim(), c.odd().dim());
            for i in 0..e {
                perm[off + i] = off + o + i;
            }
            for i in 0..o {
                perm[off + e + i] = off + i;
            }
        }
        perm
    }

    /// Parity flip of every component.
    pub fn suspend(&self) -> KGModule {
        let perm = self.suspension_permutation();
        let components = self.components.iter().map(GradedGroup::suspend).collect();
        let actions = self
            .actions
            .iter()
            .map(|l| l.iter().map(|m| permute(m, &perm, &perm)).collect())
            .collect();
        Self::from_actions(&self.primes, self.ring.clone(), components, actions).expect("suspension of a module")
    }

    /// Module over the single prime `primes[j]`, components regrouped by digit j.
    pub fn restrict_to_prime(&self, j: usize) -> Result<KGModule> {
        if j >= self.k() {
            return Err(Error::PrimeIndex {
                index: j,
                count: self.k(),
            });
        }
        let mut raw = RawModule::new(&[self.primes[j]], self.ring.clone())?;
        let mut index = vec![0usize; self.dim()];
        for d in 0..3u8 {
            for c in self.digit_coordinates(j, d) {
                let local = raw.push_generator(d as usize, self.parities[c], self.orders[c].clone());
                index[c] = raw.global_index(d as usize, local);
            }
        }
        raw.finish_layout();
        for a in Arrow::ALL {
            let m = self.action(j, a);
            let mut g = IntMatrix::zeros(self.dim(), self.dim());
            for r in 0..self.dim() {
                for c in 0..self.dim() {
                    let x = m.get(r, c);
                    if !x.is_zero() {
                        g.set(index[r], index[c], x.clone());
                    }
                }
            }
            raw.set_action(0, a, g);
        }
        Ok(raw.normalize()?.module)
    }

    /// `self (+) other`.
    pub fn direct_sum(&self, other: &KGModule) -> Result<KGModule> {
        Ok(direct_sum_many(&[self, other])?.module)
    }

    /// Tensor product over Z[1/m] of modules over disjoint prime sets.
    pub fn external_tensor(&self, other: &KGModule) -> Result<KGModule> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            });
        }
        if self.primes.iter().any(|p| other.primes.contains(p)) {
            return Err(Error::Precondition("tensor factors must have disjoint primes".into()));
        }
        let mut primes: Vec<(u64, bool, usize)> = self
            .primes
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, true, i))
            .chain(other.primes.iter().enumerate().map(|(i, &p)| (p, false, i)))
            .collect();
        primes.sort();
        let plist: Vec<u64> = primes.iter().map(|x| x.0).collect();
        let k = plist.len();
        let mut raw = RawModule::new(&plist, self.ring.clone())?;
        let mut local: Vec<((usize, usize), usize, usize)> = Vec::new();
        for u in all_vertices(k) {
            let (mut v, mut w) = (Vec::new(), Vec::new());
            for (pos, (_, left, _)) in primes.iter().enumerate() {
                if *left {
                    v.push(u[pos]);
                } else {
                    w.push(u[pos]);
                }
            }
            let (vi, wi) = (vertex_index(&v), vertex_index(&w));
            let ui = vertex_index(&u);
            for a in self.range(vi) {
                for b in other.range(wi) {
                    let order = num_integer::Integer::gcd(&self.orders[a], &other.orders[b]);
                    let l = raw.push_generator(ui, self.parities[a] + other.parities[b], order);
                    local.push(((a, b), ui, l));
                }
            }
        }
        raw.finish_layout();
        let global: HashMap<(usize, usize), usize> = local
            .into_iter()
            .map(|(ab, ui, l)| (ab, raw.global_index(ui, l)))
            .collect();
        let n = raw.dim();
        for (pos, (_, left, idx)) in primes.iter().enumerate() {
            for arrow in Arrow::ALL {
                let mut g = IntMatrix::zeros(n, n);
                for (&(a, b), &col) in &global {
                    if *left {
                        let m = self.action(*idx, arrow);
                        for a2 in 0..self.dim() {
                            let x = m.get(a2, a);
                            if !x.is_zero() {
                                if let Some(&row) = global.get(&(a2, b)) {
                                    g.set(row, col, x.clone());
                                }
                            }
                        }
                    } else {
                        let m = other.action(*idx, arrow);
                        for b2 in 0..other.dim() {
                            let x = m.get(b2, b);
                            if !x.is_zero() {
                                if let Some(&row) = global.get(&(a, b2)) {
                                    g.set(row, col, x.clone());
                                }
                            }
                        }
                    }
                }
                raw.set_action(pos, arrow, g);
            }
        }
        Ok(raw.normalize()?.module)
    }

    /// Submodule generated by the columns of `gens`, as a group spanning set.
    pub fn submodule_closure(&self, gens: &IntMatrix) -> Result<IntMatrix> {
        if gens.rows() != self.dim() {
            return Err(Error::Dimension("submodule generators have wrong length".into()));
        }
        let rel = self.relation_matrix();
        let mut span: Vec<Vec<Rational>> = Vec::new();
        let mut frontier: Vec<Vec<Rational>> = gens.columns();
        let n = self.dim();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in frontier {
                let current = IntMatrix::from_columns(n, &span).hstack(&rel)?;
                if crate::intlinalg::solve(&current, &x, &self.ring).is_some() {
                    continue;
                }
                span.push(x.clone());
                for list in &self.actions {
                    for a in list {
                        let y = self.reduce_vector(&a.mul_vec(&x));
                        if !self.is_zero_vector(&y) {
                            next.push(y);
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(IntMatrix::from_columns(n, &span))
    }

    /// Quotient by the submodule generated by the columns of `sub`.
    /// Columns are split into homogeneous pieces per vertex and parity.
    pub fn quotient(&self, sub: &IntMatrix) -> Result<Normalized> {
        let closed = self.submodule_closure(&self.homogeneous_pieces(sub)?)?;
        let mut raw = RawModule::from_module(self)?;
        for c in 0..closed.cols() {
            raw.add_relation_vector(&closed.column(c));
        }
        raw.normalize()
    }

    /// Split each column into its vertex and parity components.
    pub fn homogeneous_pieces(&self, m: &IntMatrix) -> Result<IntMatrix> {
        if m.rows() != self.dim() {
            return Err(Error::Dimension("vectors have wrong length".into()));
        }
        let mut cols = Vec::new();
        for x in m.columns() {
            for vi in 0..self.vertex_count() {
                for parity in [Parity::Even, Parity::Odd] {
                    let r = self.parity_range(vi, parity);
                    if r.clone().all(|c| x[c].is_zero()) {
                        continue;
                    }
                    let mut y = vec![Rational::zero(); self.dim()];
                    for c in r {
                        y[c] = x[c].clone();
                    }
                    cols.push(y);
                }
            }
        }
        Ok(IntMatrix::from_columns(self.dim(), &cols))
    }

    /// Whether multiplication by p is invertible on every component with digit `i` at prime index j.
    pub fn is_uniquely_divisible_at(&self, p: u64, j: usize, i: Vertex) -> bool {
        let pb = BigInt::from(p);
        self.digit_coordinates(j, i).into_iter().all(|c| {
            let d = &self.orders[c];
            if d.is_zero() {
                self.ring.inverts_prime(p)
            } else {
                !(d % &pb).is_zero()
            }
        })
    }
}

impl fmt::Debug for KGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "module over primes {:?}, coefficients {}", self.primes, self.ring)?;
        for (vi, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                writeln!(
                    f,
                    "  {}: even {}, odd {}",
                    vertex_string(&vertex_of(vi, self.k())),
                    c.even(),
                    c.odd()
                )?;
            }
        }
        for ((j, a, v), m) in self.blocks() {
            writeln!(f, "  p={} {} at {}: {}", self.primes[j], a.name(), vertex_string(&v), m)?;
        }
        Ok(())
    }
}

/// Reduce row r of `m` modulo `orders[r]`.
pub(crate) fn reduce_rows(orders: &[BigInt], m: &IntMatrix) -> IntMatrix {
    if orders.iter().all(Zero::is_zero) {
        return m.clone();
    }
    let mut out = m.clone();
    for (r, d) in orders.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        for c in 0..m.cols() {
            let x = m.get(r, c);
            if !x.is_zero() {
                out.set(r, c, Rational::from_integer(reduce_mod(x, d)));
            }
        }
    }
    out
}

/// `out[rp[r]][cp[c]] = m[r][c]`.
pub(crate) fn permute(m: &IntMatrix, rp: &[usize], cp: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = m.get(r, c);
            if !x.is_zero() {
                out.set(rp[r], cp[c], x.clone());
            }
        }
    }
    out
}

/// Evaluates polynomials of one prime with memoized word products.
pub(crate) struct Evaluator<'a> {
    module: &'a KGModule,
    j: usize,
    cache: HashMap<Vec<Arrow>, IntMatrix>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(module: &'a KGModule, j: usize) -> Self {
        Self {
            module,
            j,
            cache: HashMap::new(),
        }
    }

    fn word(&mut self, w: &[Arrow]) -> IntMatrix {
        if w.len() == 1 {
            return self.module.action(self.j, w[0]).clone();
        }
        if let Some(m) = self.cache.get(w) {
            return m.clone();
        }
        let rest = self.word(&w[1..]);
        let m = self.module.reduce(&(self.module.action(self.j, w[0]) * &rest));
        self.cache.insert(w.to_vec(), m.clone());
        m
    }

    pub(crate) fn poly(&mut self, f: &Poly) -> IntMatrix {
        let n = self.module.dim();
        let mut out = IntMatrix::zeros(n, n);
        for (m, c) in f.terms() {
            let x = if m.is_empty() {
                self.module.digit_projector(self.j, m.source())
            } else {
                self.word(m.word())
            };
            out = &out + &x.scale(&Rational::from_integer(c.clone()));
        }
        self.module.reduce(&out)
    }
}
