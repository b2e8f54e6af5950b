use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient ring Z[1/m], identified by the set of inverted primes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Localization {
    primes: Vec<u64>,
}

impl Localization {
    /// Plain integers, m = 1.
    pub fn integers() -> Self {
        Self { primes: Vec::new() }
    }

    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            primes: prime_factors(m),
        })
    }

    pub fn from_primes<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        let mut out = Vec::new();
        for p in primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            out.push(p);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self { primes: out })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Product of the inverted primes (the square-free modulus).
    pub fn modulus(&self) -> u64 {
        self.primes.iter().product()
    }

    pub fn is_integers(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn inverts_prime(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn join(&self, other: &Localization) -> Localization {
        let mut primes = self.primes.clone();
        primes.extend_from_slice(&other.primes);
        primes.sort_unstable();
        primes.dedup();
        Localization { primes }
    }

    pub fn with_prime(&self, p: u64) -> Localization {
        self.join(&Localization { primes: vec![p] })
    }

    /// |n| with every inverted prime removed. Zero stays zero.
    pub fn strip_units(&self, n: &BigInt) -> BigInt {
        let mut n = n.abs();
        if n.is_zero() {
            return n;
        }
        for &p in &self.primes {
            let p = BigInt::from(p);
            loop {
                let (q, r) = n.div_rem(&p);
                if r.is_zero() {
                    n = q;
                } else {
                    break;
                }
            }
        }
        n
    }

    pub fn is_unit(&self, n: &BigInt) -> bool {
        self.strip_units(n).is_one()
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.is_unit(q.denom())
    }

    pub fn check(&self, q: &BigRational) -> Result<()> {
        if self.contains(q) {
            Ok(())
        } else {
            Err(Error::NotLocalized {
                entry: q.to_string(),
                modulus: self.modulus(),
            })
        }
    }

    /// Whether n is coprime to every inverted prime.
    pub fn coprime_to(&self, n: &BigInt) -> bool {
        self.primes.iter().all(|&p| !(n % BigInt::from(p)).is_zero())
    }
}

impl fmt::Display for Localization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primes.is_empty() {
            write!(f, "Z")
        } else {
            write!(f, "Z[1/{}]", self.modulus())
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in ascending order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Residue of a Z[1/m] element modulo d, where d is coprime to the denominator.
pub fn reduce_mod(q: &BigRational, d: &BigInt) -> BigInt {
    let num = q.numer().mod_floor(d);
    if q.denom().is_one() {
        return num;
    }
    let inv = mod_inverse(&q.denom().mod_floor(d), d).expect("denominator coprime to torsion order");
    (num * inv).mod_floor(d)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if m.is_one() {
        Some(BigInt::zero())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_inverted_primes() {
        let r = Localization::new(6).unwrap();
        assert_eq!(r.primes(), &[2, 3]);
        assert_eq!(r.strip_units(&BigInt::from(-72 * 5)), BigInt::from(5));
        assert!(r.is_unit(&BigInt::from(12)));
        assert!(!r.is_unit(&BigInt::from(10)));
        assert!(r.contains(&BigRational::new(7.into(), 18.into())));
        assert!(!r.contains(&BigRational::new(1.into(), 5.into())));
    }

    #[test]
    fn modular_reduction_uses_inverse_of_denominator() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(reduce_mod(&half, &BigInt::from(7)), BigInt::from(4));
        assert_eq!(
            reduce_mod(&BigRational::from_integer((-3).into()), &BigInt::from(5)),
            BigInt::from(2)
        );
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(7) && !is_prime(4) && !is_prime(1));
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }
}
