//! Köhler's ring for one prime, its rewriting system, and tensor products over several primes.

pub mod element;
pub mod poly;
pub mod presentation;
pub mod rewrite;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use element::{all_vertices, check_primes, tensor_basis, RingElement, TensorMonomial};
pub use poly::{Arrow, Monomial, Poly, Vertex};
pub use presentation::{build_presentation, derived_relations, DerivedFamily, Relation, RingPresentation};
pub use rewrite::{CriticalPair, RewriteSystem, Rule};

use crate::error::Result;

static SYSTEMS: OnceLock<Mutex<BTreeMap<u64, Arc<RewriteSystem>>>> = OnceLock::new();

/// The completed rewriting system for p, computed once per process.
pub fn rewrite_system(p: u64) -> Result<Arc<RewriteSystem>> {
    let cache = SYSTEMS.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&p) {
        return Ok(s.clone());
    }
    let sys = Arc::new(RewriteSystem::complete(&build_presentation(p)?)?);
    cache.lock().unwrap().entry(p).or_insert(sys.clone());
    Ok(sys)
}

/// Pass/fail of one derived identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedCheck {
    pub family: &'static str,
    pub instance: String,
    pub holds: bool,
}

/// Reduce both sides of every derived identity.
pub fn verify_derived_relations(p: u64) -> Result<Vec<DerivedCheck>> {
    let sys = rewrite_system(p)?;
    let mut out = Vec::new();
    for fam in derived_relations(p) {
        for r in &fam.instances {
            out.push(DerivedCheck {
                family: fam.name,
                instance: r.name.clone(),
                holds: sys.normal_form(&r.difference()).is_zero(),
            });
        }
    }
    Ok(out)
}

/// Irreducible paths per (target, source) vertex pair, with the total rank.
pub fn ring_basis(p: u64) -> Result<BTreeMap<(Vertex, Vertex), Vec<Monomial>>> {
    Ok(rewrite_system(p)?.basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn nf(p: u64, f: &Poly) -> Poly {
        rewrite_system(p).unwrap().normal_form(f)
    }

    #[test]
    fn completion_is_confluent() {
        for p in [2, 3, 5, 7] {
            let sys = rewrite_system(p).unwrap();
            assert!(sys.is_complete());
            assert!(sys.verify_confluence().is_ok());
        }
    }

    #[test]
    fn ranks_per_vertex_pair() {
        for p in [2u64, 3, 5] {
            let b = ring_basis(p).unwrap();
            let r = |t: u8, s: u8| b.get(&(t, s)).map_or(0, Vec::len) as u64;
            assert_eq!(r(0, 1), 1);
            assert_eq!(b[&(0, 1)], vec![Monomial::arrow(p, Arrow::A01)]);
            assert_eq!(r(0, 0), p);
            assert_eq!(r(1, 1), p);
            assert_eq!(r(1, 0), 1);
        }
    }

    #[test]
    fn derived_relations_hold() {
        for p in [2, 3, 5, 7] {
            let checks = verify_derived_relations(p).unwrap();
            assert_eq!(checks.len(), 14);
            let families: std::collections::BTreeSet<_> = checks.iter().map(|c| c.family).collect();
            assert_eq!(families.len(), 12);
            assert!(checks.iter().all(|c| c.holds), "p = {p}: {checks:?}");
        }
    }

    #[test]
    fn presentation_relations_reduce_to_zero() {
        for p in [2, 3, 5] {
            let pres = build_presentation(p).unwrap();
            for r in pres.relations() {
                assert!(nf(p, &r.difference()).is_zero(), "{r}");
            }
        }
    }

    #[test]
    fn sample_rules() {
        let p = 3;
        assert!(nf(p, &Poly::word(p, &[Arrow::A02, Arrow::A21])).is_zero());
        let ab = nf(p, &Poly::word(p, &[Arrow::A01, Arrow::A10]));
        assert_eq!(ab, nf(p, &presentation::norm_t0(p)));
        let aba = nf(p, &Poly::word(p, &[Arrow::A01, Arrow::A10, Arrow::A01]));
        assert_eq!(aba, Poly::arrow(p, Arrow::A01).scale(&BigInt::from(p)));
    }

    #[test]
    fn tensor_unit_and_mixed_products() {
        let primes = [2, 3];
        let x = RingElement::arrow(&primes, 0, Arrow::A01).unwrap();
        let y = RingElement::arrow(&primes, 1, Arrow::A20).unwrap();
        let xy = x.multiply(&y).unwrap();
        let pure = RingElement::tensor(&primes, &[Poly::arrow(2, Arrow::A01), Poly::arrow(3, Arrow::A20)]).unwrap();
        assert_eq!(xy, pure);
        assert_eq!(y.multiply(&x).unwrap(), pure);
        let one = RingElement::one(&primes).unwrap();
        assert_eq!(one.multiply(&xy).unwrap(), xy);
        assert_eq!(xy.multiply(&one).unwrap(), xy);
        assert_eq!(
            RingElement::arrow(&primes, 0, Arrow::A12).unwrap().degree().unwrap(),
            crate::intlinalg::Parity::Odd
        );
        let e0 = RingElement::vertex_idempotent(&primes, &[0, 0]).unwrap();
        let e1 = RingElement::vertex_idempotent(&primes, &[1, 0]).unwrap();
        assert!(e0.multiply(&e1).unwrap().is_zero());
        assert!(RingElement::one(&[2, 4]).is_err());
    }
}
