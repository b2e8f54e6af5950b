//! Exactness of the two triangles of each prime factor.
//!
//! For prime index j let M_i be the sum of the components whose digit j is i.
//! The module is exact when both cycles
//! M0 -a10-> M1 -a21-> M2 -a02-> M0 and M1 -a01-> M0 -a20-> M2 -a12-> M1
//! are exact at every node.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{image_kernel_defect, reduce_mod, ExactnessDefect, IntMatrix};
use crate::module::KGModule;
use crate::ring::{Arrow, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
}

impl Orientation {
    /// The three arrows in cycle order.
    pub fn arrows(self) -> [Arrow; 3] {
        match self {
            Orientation::Clockwise => [Arrow::A10, Arrow::A21, Arrow::A02],
            Orientation::Counterclockwise => [Arrow::A01, Arrow::A20, Arrow::A12],
        }
    }
}

/// Exactness at one node of one cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCheck {
    pub prime: u64,
    pub orientation: Orientation,
    pub node: Vertex,
    pub defect: Option<ExactnessDefect>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactnessReport {
    pub checks: Vec<NodeCheck>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.checks.iter().all(|c| c.defect.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &NodeCheck> {
        self.checks.iter().filter(|c| c.defect.is_some())
    }
}

/// Incoming and outgoing arrows at each node of a cycle.
fn nodes(o: Orientation) -> [(Arrow, Arrow); 3] {
    let [a, b, c] = o.arrows();
    [(a, b), (b, c), (c, a)]
}

/// Rank-based check of all six nodes per prime. Fails on invalid modules.
pub fn is_exact(m: &KGModule) -> Result<ExactnessReport> {
    m.check_valid()?;
    let mut report = ExactnessReport::default();
    for j in 0..m.k() {
        let coords: Vec<Vec<usize>> = (0..3).map(|d| m.digit_coordinates(j, d)).collect();
        let orders = |i: usize| -> Vec<BigInt> { coords[i].iter().map(|&c| m.orders()[c].clone()).collect() };
        for o in [Orientation::Clockwise, Orientation::Counterclockwise] {
            for (incoming, outgoing) in nodes(o) {
                let (s, mid, t) = (
                    incoming.source() as usize,
                    incoming.target() as usize,
                    outgoing.target() as usize,
                );
                let f = m.action(j, incoming).submatrix(&coords[mid], &coords[s]);
                let g = m.action(j, outgoing).submatrix(&coords[t], &coords[mid]);
                let defect = image_kernel_defect(&f, &g, &orders(s), &orders(mid), &orders(t), m.ring())?;
                report.checks.push(NodeCheck {
                    prime: m.primes()[j],
                    orientation: o,
                    node: mid as Vertex,
                    defect,
                });
            }
        }
    }
    Ok(report)
}

/// Exactness by listing elements; every regrouped component must be finite of order at most `bound`.
pub fn brute_force_exactness(m: &KGModule, bound: u64) -> Result<bool> {
    m.check_valid()?;
    for j in 0..m.k() {
        let coords: Vec<Vec<usize>> = (0..3).map(|d| m.digit_coordinates(j, d)).collect();
        let mut orders: Vec<Vec<u64>> = Vec::new();
        for cs in &coords {
            let mut total: u64 = 1;
            let mut list = Vec::new();
            for &c in cs {
                let d = &m.orders()[c];
                if d.is_zero() {
                    return Err(Error::BoundExceeded(bound));
                }
                let d = d.to_u64().ok_or(Error::BoundExceeded(bound))?;
                total = total
                    .checked_mul(d)
                    .filter(|&t| t <= bound)
                    .ok_or(Error::BoundExceeded(bound))?;
                list.push(d);
            }
            orders.push(list);
        }
        for o in [Orientation::Clockwise, Orientation::Counterclockwise] {
            for (incoming, outgoing) in nodes(o) {
                let (s, mid, t) = (
                    incoming.source() as usize,
                    incoming.target() as usize,
                    outgoing.target() as usize,
                );
                let f = residue_matrix(&m.action(j, incoming).submatrix(&coords[mid], &coords[s]), &orders[mid]);
                let g = residue_matrix(&m.action(j, outgoing).submatrix(&coords[t], &coords[mid]), &orders[t]);
                let image: HashSet<Vec<u64>> = elements(&orders[s]).map(|x| apply(&f, &x, &orders[mid])).collect();
                let kernel: HashSet<Vec<u64>> = elements(&orders[mid])
                    .filter(|y| apply(&g, y, &orders[t]).iter().all(|&z| z == 0))
                    .collect();
                if image != kernel {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn residue_matrix(m: &IntMatrix, row_orders: &[u64]) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|r| {
            let d = BigInt::from(row_orders[r]);
            m.row(r)
                .iter()
                .map(|x| reduce_mod(x, &d).to_u64().expect("reduced residue"))
                .collect()
        })
        .collect()
}

fn apply(m: &[Vec<u64>], x: &[u64], orders: &[u64]) -> Vec<u64> {
    m.iter()
        .zip(orders)
        .map(|(row, &d)| {
            row.iter()
                .zip(x)
                .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % d as u128) as u64
        })
        .collect()
}

/// All tuples with entries below the given orders.
fn elements(orders: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let total: u64 = orders.iter().product();
    (0..total).map(move |mut i| {
        orders
            .iter()
            .map(|&d| {
                let r = i % d;
                i /= d;
                r
            })
            .collect()
    })
}
