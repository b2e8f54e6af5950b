//! Homogeneous maps between modules and short exact sequences.

use num_traits::{One, Zero};

use super::{raw::direct_sum_many, KGModule};
use crate::error::{Error, Result};
use crate::intlinalg::{image_kernel_defect, relation_columns, IntMatrix, Parity, Rational};
use crate::ring::Arrow;

/// A group homomorphism of a fixed parity, stored as a matrix on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: KGModule,
    target: KGModule,
    parity: Parity,
    matrix: IntMatrix,
}

impl ModuleMap {
    /// Checks shape, coefficients, parity and compatibility with torsion; not linearity.
    pub fn new(source: KGModule, target: KGModule, parity: Parity, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Dimension(format!(
                "map is {}x{}, modules have dimensions {} and {}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch {
                left: source.ring().modulus(),
                right: target.ring().modulus(),
            });
        }
        matrix.check_localized(target.ring())?;
        let matrix = target.reduce(&matrix);
        for c in 0..matrix.cols() {
            for r in 0..matrix.rows() {
                if !matrix.get(r, c).is_zero() && target.parities()[r] != source.parities()[c] + parity {
                    return Err(Error::InvalidModule(format!("map entry ({r}, {c}) breaks the grading")));
                }
            }
        }
        let rel = &matrix * &source.relation_matrix();
        if !target.is_zero_map(&rel) {
            return Err(Error::InvalidModule(
                "map does not respect torsion of the source".into(),
            ));
        }
        Ok(Self {
            source,
            target,
            parity,
            matrix,
        })
    }

    pub fn identity(m: &KGModule) -> Self {
        Self::new(m.clone(), m.clone(), Parity::Even, m.identity_matrix()).expect("identity map")
    }

    pub fn zero(source: &KGModule, target: &KGModule, parity: Parity) -> Result<Self> {
        Self::new(
            source.clone(),
            target.clone(),
            parity,
            IntMatrix::zeros(target.dim(), source.dim()),
        )
    }

    pub fn source(&self) -> &KGModule {
        &self.source
    }

    pub fn target(&self) -> &KGModule {
        &self.target
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self o other`.
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.target != self.source {
            return Err(Error::Precondition(
                "composition of maps with mismatched modules".into(),
            ));
        }
        Self::new(
            other.source.clone(),
            self.target.clone(),
            self.parity + other.parity,
            self.matrix.try_mul(&other.matrix)?,
        )
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.same_shape(other)?;
        Self::new(
            self.source.clone(),
            self.target.clone(),
            self.parity,
            self.matrix.try_add(&other.matrix)?,
        )
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.same_shape(other)?;
        Self::new(
            self.source.clone(),
            self.target.clone(),
            self.parity,
            self.matrix.try_sub(&other.matrix)?,
        )
    }

    pub fn scale(&self, c: &Rational) -> Result<ModuleMap> {
        Self::new(
            self.source.clone(),
            self.target.clone(),
            self.parity,
            self.matrix.scale(c),
        )
    }

    fn same_shape(&self, other: &ModuleMap) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.parity != other.parity {
            return Err(Error::Precondition("maps between different modules".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.target.is_zero_map(&self.matrix)
    }

    /// Equal as maps of groups.
    pub fn agrees_with(&self, other: &ModuleMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.target.is_zero_map(&(&self.matrix - &other.matrix))
    }

    pub fn commutes_with_arrow(&self, j: usize, a: Arrow) -> bool {
        let lhs = self.target.action(j, a) * &self.matrix;
        let rhs = &self.matrix * self.source.action(j, a);
        self.target.is_zero_map(&(&lhs - &rhs))
    }

    pub fn commutes_with_idempotents(&self, j: usize) -> bool {
        (0..3u8).all(|d| {
            let lhs = &self.target.digit_projector(j, d) * &self.matrix;
            let rhs = &self.matrix * &self.source.digit_projector(j, d);
            self.target.is_zero_map(&(&lhs - &rhs))
        })
    }

    /// Linear over the factors with the given prime indices.
    pub fn is_linear_over(&self, indices: &[usize]) -> bool {
        indices
            .iter()
            .all(|&j| self.commutes_with_idempotents(j) && Arrow::ALL.iter().all(|&a| self.commutes_with_arrow(j, a)))
    }

    pub fn is_linear(&self) -> bool {
        let all: Vec<usize> = (0..self.source.k()).collect();
        self.source.primes() == self.target.primes() && self.is_linear_over(&all)
    }

    pub fn is_injective(&self) -> Result<bool> {
        // kernel of the map equals image of the zero map
        let zero = IntMatrix::zeros(self.source.dim(), 0);
        Ok(image_kernel_defect(
            &zero,
            &self.matrix,
            &[],
            self.source.orders(),
            self.target.orders(),
            self.source.ring(),
        )?
        .is_none())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let span = self.matrix.hstack(&relation_columns(self.target.orders()))?;
        let ech = crate::intlinalg::ColumnEchelon::new(&span, self.target.ring());
        Ok((0..self.target.dim()).all(|c| {
            let mut e = vec![Rational::zero(); self.target.dim()];
            e[c] = Rational::one();
            ech.solve(&e).is_some()
        }))
    }
}

/// A short exact sequence `0 -> Q' -> P -> Q -> 0` of even linear maps.
#[derive(Clone, Debug)]
pub struct Extension {
    iota: ModuleMap,
    beta: ModuleMap,
}

impl Extension {
    pub fn new(iota: ModuleMap, beta: ModuleMap) -> Result<Self> {
        if iota.target() != beta.source() {
            return Err(Error::Precondition("maps of an extension must be composable".into()));
        }
        if iota.parity() != Parity::Even || beta.parity() != Parity::Even {
            return Err(Error::Precondition("maps of an extension must be even".into()));
        }
        if !iota.is_linear() || !beta.is_linear() {
            return Err(Error::Precondition("maps of an extension must be linear".into()));
        }
        if !iota.is_injective()? {
            return Err(Error::Precondition("first map is not injective".into()));
        }
        if !beta.is_surjective()? {
            return Err(Error::Precondition("second map is not surjective".into()));
        }
        let mid = iota.target();
        if image_kernel_defect(
            iota.matrix(),
            beta.matrix(),
            iota.source().orders(),
            mid.orders(),
            beta.target().orders(),
            mid.ring(),
        )?
        .is_some()
        {
            return Err(Error::Precondition(
                "image of the first map is not the kernel of the second".into(),
            ));
        }
        Ok(Self { iota, beta })
    }

    /// `0 -> Q' -> Q' (+) Q -> Q -> 0`.
    pub fn split(sub: &KGModule, quotient: &KGModule) -> Result<Self> {
        let sum = direct_sum_many(&[sub, quotient])?;
        let iota = ModuleMap::new(sub.clone(), sum.module.clone(), Parity::Even, sum.inclusions[0].clone())?;
        let beta = ModuleMap::new(
            sum.module.clone(),
            quotient.clone(),
            Parity::Even,
            sum.projections[1].clone(),
        )?;
        Self::new(iota, beta)
    }

    pub fn iota(&self) -> &ModuleMap {
        &self.iota
    }

    pub fn beta(&self) -> &ModuleMap {
        &self.beta
    }

    pub fn sub(&self) -> &KGModule {
        self.iota.source()
    }

    pub fn middle(&self) -> &KGModule {
        self.iota.target()
    }

    pub fn quotient(&self) -> &KGModule {
        self.beta.target()
    }
}
