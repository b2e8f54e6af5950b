//! Finitely generated abelian groups over Z[1/m] in invariant-factor form.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::echelon::ColumnEchelon;
use crate::intlinalg::localization::reduce_mod;
use crate::intlinalg::smith::smith_normal_form;
use crate::intlinalg::{IntMatrix, Localization, Rational};

/// Z/2-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn from_count(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn index(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Z[1/m]^rank + Z/d1 + ... + Z/dk with d1 | d2 | ... | dk, each di >= 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupPart {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupPart {
    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Self {
        Self { rank, torsion }
    }

    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Orders of the generators, 0 for free ones.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank];
        v.extend(self.torsion.iter().cloned());
        v
    }

    fn validate(&self, ring: &Localization) -> Result<()> {
        for d in &self.torsion {
            if d < &BigInt::from(2) {
                return Err(Error::InvalidGroup(format!("invariant factor {d} < 2")));
            }
            if !ring.coprime_to(d) {
                return Err(Error::InvalidGroup(format!(
                    "invariant factor {d} not coprime to {}",
                    ring.modulus()
                )));
            }
        }
        for w in self.torsion.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "R".to_string()
            } else {
                format!("R^{}", self.rank)
            });
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A Z/2-graded finitely generated Z[1/m]-module.
///
/// Coordinates are laid out as `[even free, even torsion, odd free, odd torsion]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedGroup {
    ring: Localization,
    even: GroupPart,
    odd: GroupPart,
}

impl GradedGroup {
    pub fn new(ring: Localization, even: GroupPart, odd: GroupPart) -> Result<Self> {
        even.validate(&ring)?;
        odd.validate(&ring)?;
        Ok(Self { ring, even, odd })
    }

    pub fn zero(ring: Localization) -> Self {
        Self {
            ring,
            even: GroupPart::default(),
            odd: GroupPart::default(),
        }
    }

    pub fn free(ring: Localization, even_rank: usize, odd_rank: usize) -> Self {
        Self {
            ring,
            even: GroupPart::free(even_rank),
            odd: GroupPart::free(odd_rank),
        }
    }

    pub fn ring(&self) -> &Localization {
        &self.ring
    }

    pub fn even(&self) -> &GroupPart {
        &self.even
    }

    pub fn odd(&self) -> &GroupPart {
        &self.odd
    }

    pub fn part(&self, parity: Parity) -> &GroupPart {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn dim(&self) -> usize {
        self.even.dim() + self.odd.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_free(&self) -> bool {
        self.even.torsion.is_empty() && self.odd.torsion.is_empty()
    }

    pub fn orders(&self) -> Vec<BigInt> {
        let mut v = self.even.orders();
        v.extend(self.odd.orders());
        v
    }

    pub fn parities(&self) -> Vec<Parity> {
        let mut v = vec![Parity::Even; self.even.dim()];
        v.extend(vec![Parity::Odd; self.odd.dim()]);
        v
    }

    /// Coordinate range of one parity.
    pub fn range(&self, parity: Parity) -> std::ops::Range<usize> {
        match parity {
            Parity::Even => 0..self.even.dim(),
            Parity::Odd => self.even.dim()..self.dim(),
        }
    }

    pub fn suspend(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            even: self.odd.clone(),
            odd: self.even.clone(),
        }
    }

    /// Permutation matrix carrying coordinates of `self` to those of `self.suspend()`.
    pub fn suspension_matrix(&self) -> IntMatrix {
        let (e, o) = (self.even.dim(), self.odd.dim());
        let mut m = IntMatrix::zeros(self.dim(), self.dim());
        for i in 0..o {
            m.set(i, e + i, Rational::one());
        }
        for i in 0..e {
            m.set(o + i, i, Rational::one());
        }
        m
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<BigInt> {
        if self.even.rank + self.odd.rank > 0 {
            return None;
        }
        Some(
            self.even
                .torsion
                .iter()
                .chain(&self.odd.torsion)
                .fold(BigInt::one(), |a, d| a * d),
        )
    }

    pub fn is_zero_vector(&self, x: &[Rational]) -> bool {
        is_zero_in(&self.orders(), x)
    }

    pub fn reduce_vector(&self, x: &[Rational]) -> Vec<Rational> {
        reduce_in(&self.orders(), x)
    }

    /// Columns d_i e_i for the torsion generators.
    pub fn relation_matrix(&self) -> IntMatrix {
        relation_columns(&self.orders())
    }

    pub fn direct_sum_part(a: &GroupPart, b: &GroupPart) -> Vec<BigInt> {
        let mut v = a.orders();
        v.extend(b.orders());
        v
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(even: {}, odd: {}) over {}", self.even, self.odd, self.ring)
    }
}

/// Whether x is zero in the group with the given generator orders.
pub fn is_zero_in(orders: &[BigInt], x: &[Rational]) -> bool {
    assert_eq!(orders.len(), x.len());
    orders.iter().zip(x).all(|(d, v)| {
        if v.is_zero() {
            true
        } else if d.is_zero() {
            false
        } else {
            (v.numer() % d).is_zero()
        }
    })
}

/// Canonical representative: torsion coordinates reduced into [0, d).
pub fn reduce_in(orders: &[BigInt], x: &[Rational]) -> Vec<Rational> {
    orders
        .iter()
        .zip(x)
        .map(|(d, v)| {
            if d.is_zero() {
                v.clone()
            } else {
                Rational::from_integer(reduce_mod(v, d))
            }
        })
        .collect()
}

pub fn relation_columns(orders: &[BigInt]) -> IntMatrix {
    let tors: Vec<usize> = (0..orders.len()).filter(|&i| !orders[i].is_zero()).collect();
    let mut m = IntMatrix::zeros(orders.len(), tors.len());
    for (j, &i) in tors.iter().enumerate() {
        m.set(i, j, Rational::from_integer(orders[i].clone()));
    }
    m
}

/// Whether every column of `m` is zero in the group with the given orders.
pub fn matrix_is_zero_in(orders: &[BigInt], m: &IntMatrix) -> bool {
    (0..m.cols()).all(|c| is_zero_in(orders, &m.column(c)))
}

/// First column of `m` that is nonzero in the group, if any.
pub fn first_nonzero_column(orders: &[BigInt], m: &IntMatrix) -> Option<usize> {
    (0..m.cols()).find(|&c| !is_zero_in(orders, &m.column(c)))
}

/// A quotient L / L0 of lattices in Z[1/m]^n, presented in invariant-factor form.
#[derive(Clone, Debug)]
pub struct Subquotient {
    part: GroupPart,
    /// n x k ambient lifts of the new generators.
    basis: IntMatrix,
    lattice: ColumnEchelon,
    /// k x s: L-basis coordinates to new coordinates.
    to_new: IntMatrix,
    orders: Vec<BigInt>,
}

impl Subquotient {
    /// Present `span(gens) / span(rels)`; `rels` must lie in the span of `gens`.
    pub fn new(gens: &IntMatrix, rels: &IntMatrix, ring: &Localization) -> Result<Self> {
        let n = gens.rows();
        if rels.rows() != n {
            return Err(Error::Dimension("relation vectors have wrong length".into()));
        }
        let lbasis = ColumnEchelon::new(gens, ring).image_matrix();
        let lattice = ColumnEchelon::new(&lbasis, ring);
        let s = lbasis.cols();
        // coordinates of relations in the L-basis, columns scaled integral
        let mut ycols = Vec::with_capacity(rels.cols());
        for c in 0..rels.cols() {
            let y = lattice.solve(&rels.column(c)).ok_or_else(|| {
                Error::InvalidGroup("relation lattice is not contained in the generated lattice".into())
            })?;
            let den = y.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let den = Rational::from_integer(den);
            ycols.push(y.into_iter().map(|x| x * &den).collect::<Vec<_>>());
        }
        let y = IntMatrix::from_columns(s, &ycols);
        let y = ColumnEchelon::new(&y, &Localization::integers()).image_matrix();
        let smith = smith_normal_form(&y)?;
        let diag = smith.diagonal();

        let mut free_idx = Vec::new();
        let mut tors_idx: Vec<(usize, BigInt)> = Vec::new();
        for i in 0..s {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                free_idx.push(i);
            } else {
                let core = ring.strip_units(&d);
                if !core.is_one() {
                    tors_idx.push((i, core));
                }
            }
        }
        let order: Vec<usize> = free_idx
            .iter()
            .copied()
            .chain(tors_idx.iter().map(|(i, _)| *i))
            .collect();
        let basis_full = &lbasis * &smith.u_inv;
        let all: Vec<usize> = (0..n).collect();
        let basis = basis_full.submatrix(&all, &order);
        let all_s: Vec<usize> = (0..s).collect();
        let to_new = smith.u.submatrix(&order, &all_s);
        let part = GroupPart::new(free_idx.len(), tors_idx.into_iter().map(|(_, d)| d).collect());
        let orders = part.orders();
        Ok(Self {
            part,
            basis,
            lattice,
            to_new,
            orders,
        })
    }

    pub fn part(&self) -> &GroupPart {
        &self.part
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of an ambient vector of L in the new generators, reduced.
    pub fn coordinates(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let y = self.lattice.solve(x)?;
        let z = self.to_new.mul_vec(&y);
        Some(reduce_in(&self.orders, &z))
    }

    /// Coordinates of every column of `m`.
    pub fn coordinates_matrix(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let cols: Option<Vec<_>> = (0..m.cols()).map(|c| self.coordinates(&m.column(c))).collect();
        Some(IntMatrix::from_columns(self.part.dim(), &cols?))
    }
}

/// Basis of the subgroup `{x : g x = 0 in the codomain}` of Z[1/m]^n, as columns.
/// Relations of the domain are not added.
pub fn kernel_lattice(g: &IntMatrix, codomain_orders: &[BigInt], ring: &Localization) -> Result<IntMatrix> {
    if g.rows() != codomain_orders.len() {
        return Err(Error::Dimension("map rows vs codomain".into()));
    }
    let n = g.cols();
    let rel = relation_columns(codomain_orders);
    let stacked = g.hstack(&rel)?;
    let k = ColumnEchelon::new(&stacked, ring).kernel_matrix();
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..k.cols()).collect();
    Ok(k.submatrix(&rows, &cols))
}

/// Outcome of comparing im(f) with ker(g).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactnessDefect {
    /// g(f(x)) != 0 for the given domain vector.
    CompositionNonzero(Vec<Rational>),
    /// An element of ker(g) outside im(f).
    KernelNotImage(Vec<Rational>),
}

/// Compare im(f) and ker(g) inside the middle group; groups given by generator orders.
pub fn image_kernel_defect(
    f: &IntMatrix,
    g: &IntMatrix,
    domain: &[BigInt],
    mid: &[BigInt],
    codomain: &[BigInt],
    ring: &Localization,
) -> Result<Option<ExactnessDefect>> {
    if f.cols() != domain.len() || f.rows() != mid.len() || g.cols() != mid.len() || g.rows() != codomain.len() {
        return Err(Error::Dimension(format!(
            "f: {}x{}, g: {}x{}, groups {}/{}/{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols(),
            domain.len(),
            mid.len(),
            codomain.len()
        )));
    }
    let gf = g.try_mul(f)?;
    if let Some(c) = first_nonzero_column(codomain, &gf) {
        let mut x = vec![Rational::zero(); domain.len()];
        x[c] = Rational::one();
        return Ok(Some(ExactnessDefect::CompositionNonzero(x)));
    }
    let ker = kernel_lattice(g, codomain, ring)?;
    let span = f.hstack(&relation_columns(mid))?;
    let ech = ColumnEchelon::new(&span, ring);
    for c in 0..ker.cols() {
        let x = ker.column(c);
        if ech.solve(&x).is_none() {
            return Ok(Some(ExactnessDefect::KernelNotImage(x)));
        }
    }
    Ok(None)
}

/// Whether im(f) = ker(g) as subgroups of the middle group.
pub fn image_equals_kernel(
    f: &IntMatrix,
    g: &IntMatrix,
    domain: &GradedGroup,
    mid: &GradedGroup,
    codomain: &GradedGroup,
) -> Result<bool> {
    if domain.ring() != mid.ring() || mid.ring() != codomain.ring() {
        return Err(Error::RingMismatch {
            left: domain.ring().modulus(),
            right: codomain.ring().modulus(),
        });
    }
    Ok(image_kernel_defect(f, g, &domain.orders(), &mid.orders(), &codomain.orders(), mid.ring())?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::rat;

    fn r(m: u64) -> Localization {
        Localization::new(m).unwrap()
    }

    #[test]
    fn graded_group_invariants() {
        let ok = GradedGroup::new(r(1), GroupPart::new(1, vec![2.into(), 4.into()]), GroupPart::default());
        assert!(ok.is_ok());
        let chain = GradedGroup::new(r(1), GroupPart::new(0, vec![2.into(), 3.into()]), GroupPart::default());
        assert!(chain.is_err());
        let coprime = GradedGroup::new(r(2), GroupPart::new(0, vec![4.into()]), GroupPart::default());
        assert!(coprime.is_err());
    }

    #[test]
    fn multiplication_by_p_exactness() {
        let p = 3;
        let f = IntMatrix::from_ints(&[&[p]]);
        let g = IntMatrix::zeros(1, 1);
        let loc = GradedGroup::free(r(p as u64), 1, 0);
        assert!(image_equals_kernel(&f, &g, &loc, &loc, &loc).unwrap());
        let zz = GradedGroup::free(r(1), 1, 0);
        assert!(!image_equals_kernel(&f, &g, &zz, &zz, &zz).unwrap());
        // f = 0, g = id
        let f0 = IntMatrix::zeros(1, 1);
        let id = IntMatrix::identity(1);
        assert!(image_equals_kernel(&f0, &id, &zz, &zz, &zz).unwrap());
    }

    #[test]
    fn exactness_with_torsion() {
        // Z --2--> Z --> Z/2 -> 0 is exact at the middle
        let zz = GradedGroup::free(r(1), 1, 0);
        let z2 = GradedGroup::new(r(1), GroupPart::new(0, vec![2.into()]), GroupPart::default()).unwrap();
        let f = IntMatrix::from_ints(&[&[2]]);
        let g = IntMatrix::from_ints(&[&[1]]);
        assert!(image_equals_kernel(&f, &g, &zz, &zz, &z2).unwrap());
        let f3 = IntMatrix::from_ints(&[&[4]]);
        assert!(!image_equals_kernel(&f3, &g, &zz, &zz, &z2).unwrap());
    }

    #[test]
    fn subquotient_presents_cokernel() {
        // Z^2 / <(2,4),(6,8)> = Z/2 + Z/4
        let gens = IntMatrix::identity(2);
        let rels = IntMatrix::from_ints(&[&[2, 6], &[4, 8]]);
        let q = Subquotient::new(&gens, &rels, &r(1)).unwrap();
        assert_eq!(q.part(), &GroupPart::new(0, vec![2.into(), 4.into()]));
        // over Z[1/2] everything dies
        let q2 = Subquotient::new(&gens, &rels, &r(2)).unwrap();
        assert!(q2.part().is_zero());
        // coordinates of a relation vanish
        let c = q.coordinates(&[rat(2), rat(4)]).unwrap();
        assert!(c.iter().all(Zero::is_zero));
    }

    #[test]
    fn subquotient_free_part_and_lifts() {
        // span{(1,0,0),(0,1,0)} / span{(0,3,0)} = Z + Z/3
        let gens = IntMatrix::from_ints(&[&[1, 0], &[0, 1], &[0, 0]]);
        let rels = IntMatrix::from_ints(&[&[0], &[3], &[0]]);
        let q = Subquotient::new(&gens, &rels, &r(1)).unwrap();
        assert_eq!(q.part(), &GroupPart::new(1, vec![3.into()]));
        let b = q.basis();
        for c in 0..b.cols() {
            let coords = q.coordinates(&b.column(c)).unwrap();
            for (i, x) in coords.iter().enumerate() {
                assert_eq!(x, &rat(if i == c { 1 } else { 0 }));
            }
        }
        assert!(q.coordinates(&[rat(0), rat(0), rat(1)]).is_none());
    }
}
