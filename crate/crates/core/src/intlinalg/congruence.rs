//! Systems of linear congruences over Z[1/m].

use num_bigint::BigInt;
use num_traits::Zero;

use crate::intlinalg::echelon::ColumnEchelon;
use crate::intlinalg::{IntMatrix, Localization, Rational};

/// Rows `sum_v c_v x_v = b (mod d)`; d = 0 means an exact equation.
#[derive(Clone, Debug)]
pub struct CongruenceSystem {
    vars: usize,
    rows: Vec<(Vec<(usize, Rational)>, BigInt)>,
}

impl CongruenceSystem {
    pub fn new(vars: usize) -> Self {
        Self { vars, rows: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Add a row; rows without coefficients are dropped.
    pub fn push(&mut self, coeffs: Vec<(usize, Rational)>, modulus: BigInt) -> Option<usize> {
        let coeffs: Vec<_> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if coeffs.is_empty() {
            return None;
        }
        self.rows.push((coeffs, modulus));
        Some(self.rows.len() - 1)
    }

    pub fn moduli(&self) -> impl Iterator<Item = &BigInt> {
        self.rows.iter().map(|(_, d)| d)
    }

    fn echelon(&self, ring: &Localization) -> ColumnEchelon {
        let mut columns: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.vars];
        let mut slack = Vec::new();
        for (i, (coeffs, d)) in self.rows.iter().enumerate() {
            for (v, c) in coeffs {
                columns[*v].push((i, c.clone()));
            }
            if !d.is_zero() {
                slack.push(vec![(i, Rational::from_integer(d.clone()))]);
            }
        }
        columns.extend(slack);
        ColumnEchelon::from_sparse_columns(self.rows.len(), &columns, ring)
    }

    /// Basis (as columns, vars x k) of the lattice of solutions of the homogeneous system.
    pub fn solution_lattice(&self, ring: &Localization) -> IntMatrix {
        let k = self.echelon(ring).kernel_matrix();
        let rows: Vec<usize> = (0..self.vars).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        k.submatrix(&rows, &cols)
    }

    /// Some solution for the right-hand side `rhs` (one entry per row).
    pub fn solve(&self, rhs: &[Rational], ring: &Localization) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows.len());
        let x = self.echelon(ring).solve(rhs)?;
        Some(x[..self.vars].to_vec())
    }

    /// Solution lattice together with a particular solution.
    pub fn solve_affine(&self, rhs: &[Rational], ring: &Localization) -> Option<(Vec<Rational>, IntMatrix)> {
        let ech = self.echelon(ring);
        let x = ech.solve(rhs)?;
        let k = ech.kernel_matrix();
        let rows: Vec<usize> = (0..self.vars).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        Some((x[..self.vars].to_vec(), k.submatrix(&rows, &cols)))
    }
}
