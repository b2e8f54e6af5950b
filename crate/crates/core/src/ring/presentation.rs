//! Generators and relations of Köhler's ring for a single prime.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intlinalg::{is_prime, Parity};
use crate::ring::poly::{norm_of_unit_minus, Arrow, Poly, Vertex};

/// A named identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub lhs: Poly,
    pub rhs: Poly,
}

impl Relation {
    pub fn new(name: impl Into<String>, lhs: Poly, rhs: Poly) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
        }
    }

    /// `lhs - rhs`.
    pub fn difference(&self) -> Poly {
        self.lhs.sub(&self.rhs)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.name, self.lhs, self.rhs)
    }
}

/// One generator of the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Idempotent(Vertex),
    Arrow(Arrow),
}

impl Generator {
    pub fn parity(&self) -> Parity {
        match self {
            Generator::Idempotent(_) => Parity::Even,
            Generator::Arrow(a) => a.parity(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Generator::Idempotent(v) => format!("1_{v}"),
            Generator::Arrow(a) => a.to_string(),
        }
    }
}

/// The presentation for a prime p. Idempotent relations are structural
/// (paths carry their endpoints), so `relations` holds the arrow relations.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    p: u64,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
}

/// The loops used to define t0, s1, t2, s2.
pub fn loop_x0(p: u64) -> Poly {
    Poly::word(p, &[Arrow::A02, Arrow::A20])
}

pub fn loop_y1(p: u64) -> Poly {
    Poly::word(p, &[Arrow::A12, Arrow::A21])
}

pub fn loop_x2(p: u64) -> Poly {
    Poly::word(p, &[Arrow::A20, Arrow::A02])
}

pub fn loop_y2(p: u64) -> Poly {
    Poly::word(p, &[Arrow::A21, Arrow::A12])
}

/// t0 = 1_0 - a02 a20.
pub fn t0(p: u64) -> Poly {
    Poly::idempotent(0).sub(&loop_x0(p))
}

/// s1 = 1_1 - a12 a21.
pub fn s1(p: u64) -> Poly {
    Poly::idempotent(1).sub(&loop_y1(p))
}

/// t2 = 1_2 - a20 a02.
pub fn t2(p: u64) -> Poly {
    Poly::idempotent(2).sub(&loop_x2(p))
}

/// s2 = 1_2 - a21 a12.
pub fn s2(p: u64) -> Poly {
    Poly::idempotent(2).sub(&loop_y2(p))
}

pub fn norm_t0(p: u64) -> Poly {
    norm_of_unit_minus(p, 0, &loop_x0(p))
}

pub fn norm_s1(p: u64) -> Poly {
    norm_of_unit_minus(p, 1, &loop_y1(p))
}

pub fn norm_t2(p: u64) -> Poly {
    norm_of_unit_minus(p, 2, &loop_x2(p))
}

pub fn norm_s2(p: u64) -> Poly {
    norm_of_unit_minus(p, 2, &loop_y2(p))
}

/// The two-step paths through three distinct vertices; all vanish.
pub const ZERO_PATHS: [[Arrow; 2]; 6] = [
    [Arrow::A01, Arrow::A12],
    [Arrow::A02, Arrow::A21],
    [Arrow::A10, Arrow::A02],
    [Arrow::A12, Arrow::A20],
    [Arrow::A20, Arrow::A01],
    [Arrow::A21, Arrow::A10],
];

pub fn build_presentation(p: u64) -> Result<RingPresentation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut generators: Vec<Generator> = (0..3).map(Generator::Idempotent).collect();
    generators.extend(Arrow::ALL.into_iter().map(Generator::Arrow));

    let mut relations = Vec::new();
    for w in ZERO_PATHS {
        relations.push(Relation::new(
            format!("{}{} = 0", w[0], w[1]),
            Poly::word(p, &w),
            Poly::zero(),
        ));
    }
    relations.push(Relation::new(
        "a01a10 = N(t0)",
        Poly::word(p, &[Arrow::A01, Arrow::A10]),
        norm_t0(p),
    ));
    relations.push(Relation::new(
        "a10a01 = N(s1)",
        Poly::word(p, &[Arrow::A10, Arrow::A01]),
        norm_s1(p),
    ));
    relations.push(Relation::new(
        "p*1_2 = N(t2) + N(s2)",
        Poly::idempotent(2).scale(&BigInt::from(p)),
        norm_t2(p).add(&norm_s2(p)),
    ));
    Ok(RingPresentation {
        p,
        generators,
        relations,
    })
}

impl RingPresentation {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Relations that hold structurally for vertex-typed paths.
    pub fn structural_relations(&self) -> Vec<&'static str> {
        vec!["1_j 1_k = delta_jk 1_j", "1_0 + 1_1 + 1_2 = 1", "1_j a_jk 1_k = a_jk"]
    }
}

/// A labelled family of identities that follow from the presentation.
#[derive(Clone, Debug)]
pub struct DerivedFamily {
    pub name: &'static str,
    pub instances: Vec<Relation>,
}

/// The twelve derived families; the two power families hold two instances each.
pub fn derived_relations(p: u64) -> Vec<DerivedFamily> {
    let w = |a: Arrow| Poly::arrow(p, a);
    let (a01, a10, a20, a21, a02, a12) = (
        w(Arrow::A01),
        w(Arrow::A10),
        w(Arrow::A20),
        w(Arrow::A21),
        w(Arrow::A02),
        w(Arrow::A12),
    );
    let pe = p as usize;
    let power = |name: &str, t: Poly, v: Vertex| {
        let e = Poly::idempotent(v);
        Relation::new(name, t.pow(pe, &e), e)
    };
    let one = |name: &'static str, r: Relation| DerivedFamily {
        name,
        instances: vec![r],
    };
    vec![
        DerivedFamily {
            name: "t_j^p = 1 (j = 0, 2)",
            instances: vec![power("t0^p = 1_0", t0(p), 0), power("t2^p = 1_2", t2(p), 2)],
        },
        DerivedFamily {
            name: "s_j^p = 1 (j = 1, 2)",
            instances: vec![power("s1^p = 1_1", s1(p), 1), power("s2^p = 1_2", s2(p), 2)],
        },
        one(
            "t0 a01 = a01",
            Relation::new("t0 a01 = a01", t0(p).mul(&a01), a01.clone()),
        ),
        one(
            "t2 a20 = a20 t0",
            Relation::new("t2 a20 = a20 t0", t2(p).mul(&a20), a20.mul(&t0(p))),
        ),
        one(
            "a10 t0 = a10",
            Relation::new("a10 t0 = a10", a10.mul(&t0(p)), a10.clone()),
        ),
        one(
            "s1 a10 = a10",
            Relation::new("s1 a10 = a10", s1(p).mul(&a10), a10.clone()),
        ),
        one(
            "s2 a21 = a21 s1",
            Relation::new("s2 a21 = a21 s1", s2(p).mul(&a21), a21.mul(&s1(p))),
        ),
        one(
            "a01 s1 = a01",
            Relation::new("a01 s1 = a01", a01.mul(&s1(p)), a01.clone()),
        ),
        one(
            "N(t0) a02 = 0",
            Relation::new("N(t0) a02 = 0", norm_t0(p).mul(&a02), Poly::zero()),
        ),
        one(
            "a20 N(t0) = 0",
            Relation::new("a20 N(t0) = 0", a20.mul(&norm_t0(p)), Poly::zero()),
        ),
        one(
            "N(s1) a12 = 0",
            Relation::new("N(s1) a12 = 0", norm_s1(p).mul(&a12), Poly::zero()),
        ),
        one(
            "a21 N(s1) = 0",
            Relation::new("a21 N(s1) = 0", a21.mul(&norm_s1(p)), Poly::zero()),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_generators_two_odd() {
        let pres = build_presentation(5).unwrap();
        assert_eq!(pres.generators().len(), 9);
        let odd = pres.generators().iter().filter(|g| g.parity() == Parity::Odd).count();
        assert_eq!(odd, 2);
        assert_eq!(build_presentation(4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn p2_norm_relation() {
        let pres = build_presentation(2).unwrap();
        let r = pres.relations().iter().find(|r| r.name == "a01a10 = N(t0)").unwrap();
        let expect = Poly::idempotent(0).scale(&2.into()).sub(&loop_x0(2));
        assert_eq!(r.rhs, expect);
    }

    #[test]
    fn p3_vertex_two_relation_degree() {
        let pres = build_presentation(3).unwrap();
        let r = pres.relations().last().unwrap();
        let max_len = r.rhs.terms().map(|(m, _)| m.len()).max().unwrap();
        assert_eq!(max_len, 4);
    }
}
