//! The cyclic free modules generated by a vertex idempotent.

use std::collections::HashMap;

use num_traits::Zero;

use super::{vertex_index, KGModule};
use crate::error::{Error, Result};
use crate::intlinalg::{GradedGroup, IntMatrix, Localization, Parity, Rational};
use crate::ring::{all_vertices, rewrite_system, tensor_basis, Arrow, Poly, TensorMonomial, Vertex};

/// The left ideal generated by the idempotent of a vertex, with its path basis.
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub module: KGModule,
    pub vertex: Vec<Vertex>,
    /// Coordinate of the generator.
    pub generator: usize,
    /// Path of each coordinate.
    pub basis: Vec<TensorMonomial>,
}

impl FreeModule {
    /// Matrix of the map sending the generator to `x`, a vector of `target` supported at the vertex.
    pub fn map_to(&self, target: &KGModule, x: &[Rational]) -> Result<IntMatrix> {
        if target.primes() != self.module.primes() {
            return Err(Error::PrimeMismatch {
                left: self.module.primes().to_vec(),
                right: target.primes().to_vec(),
            });
        }
        let vi = vertex_index(&self.vertex);
        let r = target.range(vi);
        if (0..target.dim()).any(|c| !r.contains(&c) && !x[c].is_zero()) {
            return Err(Error::Precondition(
                "image of the generator lies outside its vertex".into(),
            ));
        }
        let cols: Vec<Vec<Rational>> = self.basis.iter().map(|t| target.apply_monomial(t, x)).collect();
        Ok(IntMatrix::from_columns(target.dim(), &cols))
    }
}

pub fn free_module(primes: &[u64], ring: Localization, v: &[Vertex]) -> Result<FreeModule> {
    let k = primes.len();
    if v.len() != k || v.iter().any(|&d| d > 2) {
        return Err(Error::Dimension(format!("vertex {v:?} for {k} primes")));
    }
    let systems = primes.iter().map(|&p| rewrite_system(p)).collect::<Result<Vec<_>>>()?;
    let mut basis: Vec<TensorMonomial> = Vec::new();
    let mut components = Vec::new();
    for w in all_vertices(k) {
        let mut list = tensor_basis(primes, &w, v)?;
        let parity = |t: &TensorMonomial| t.iter().fold(Parity::Even, |acc, m| acc + m.parity());
        list.sort_by_key(|t| parity(t).index());
        let even = list.iter().filter(|t| parity(t) == Parity::Even).count();
        components.push(GradedGroup::free(ring.clone(), even, list.len() - even));
        basis.extend(list);
    }
    let index: HashMap<&TensorMonomial, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let n = basis.len();
    let mut actions = Vec::with_capacity(k);
    for (j, sys) in systems.iter().enumerate() {
        let p = primes[j];
        let mut list = Vec::with_capacity(6);
        for a in Arrow::ALL {
            let mut m = IntMatrix::zeros(n, n);
            for (c, t) in basis.iter().enumerate() {
                if t[j].target() != a.source() {
                    continue;
                }
                let prod = sys.normal_form(&Poly::arrow(p, a).mul(&Poly::monomial(t[j].clone())));
                for (mono, coeff) in prod.terms() {
                    let mut t2 = t.clone();
                    t2[j] = mono.clone();
                    let r = index[&t2];
                    let x = m.get(r, c) + Rational::from_integer(coeff.clone());
                    m.set(r, c, x);
                }
            }
            list.push(m);
        }
        actions.push(list);
    }
    let module = KGModule::from_actions(primes, ring, components, actions)?;
    let one: TensorMonomial = v.iter().map(|&d| crate::ring::Monomial::idempotent(d)).collect();
    let generator = index[&one];
    debug_assert!(!module.dim().is_zero());
    Ok(FreeModule {
        module,
        vertex: v.to_vec(),
        generator,
        basis,
    })
}
