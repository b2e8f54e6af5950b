//! Smith normal form over the integers, with both unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{IntMatrix, Rational};

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, d1 | d2 | ...
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries, length min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).to_integer()).collect()
    }
}

struct Dense {
    rows: usize,
    cols: usize,
    a: Vec<Vec<BigInt>>,
}

impl Dense {
    fn identity(n: usize) -> Self {
        let a = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Dense { rows: n, cols: n, a }
    }

    fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.a[i][j].is_zero() {
                    m.set(i, j, Rational::from_integer(self.a[i][j].clone()));
                }
            }
        }
        m
    }

    // row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            if !self.a[j][c].is_zero() {
                let t = &self.a[j][c] * q;
                self.a[i][c] += t;
            }
        }
    }

    // col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            if !self.a[r][j].is_zero() {
                let t = &self.a[r][j] * q;
                self.a[r][i] += t;
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            self.a[r].swap(i, j);
        }
    }
}

/// Tracks A together with U, U^{-1} and V through elementary operations.
struct State {
    a: Dense,
    u: Dense,
    u_inv: Dense,
    v: Dense,
}

impl State {
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        self.a.add_row(i, j, q);
        self.u.add_row(i, j, q);
        // (E_ij(q))^{-1} = E_ij(-q) multiplied on the right of U^{-1}
        self.u_inv.add_col(j, i, &-q);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.a.swap(i, j);
            self.u.a.swap(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        for x in self.u.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        for r in 0..self.u_inv.rows {
            let x = std::mem::take(&mut self.u_inv.a[r][i]);
            self.u_inv.a[r][i] = -x;
        }
    }

    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        self.a.add_col(i, j, q);
        self.v.add_col(i, j, q);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap_cols(i, j);
            self.v.swap_cols(i, j);
        }
    }
}

/// Smith normal form of an integer matrix. Empty matrices are allowed.
pub fn smith_normal_form(a: &IntMatrix) -> Result<Smith> {
    if !a.is_integral() {
        return Err(Error::NotIntegral);
    }
    let (r, c) = (a.rows(), a.cols());
    let dense = Dense {
        rows: r,
        cols: c,
        a: (0..r)
            .map(|i| (0..c).map(|j| a.get(i, j).to_integer()).collect())
            .collect(),
    };
    let mut st = State {
        a: dense,
        u: Dense::identity(r),
        u_inv: Dense::identity(r),
        v: Dense::identity(c),
    };

    for t in 0..r.min(c) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &st.a.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < st.a.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        st.swap_rows(t, bi);
        st.swap_cols(t, bj);

        loop {
            let mut changed = false;
            for i in t + 1..r {
                if st.a.a[i][t].is_zero() {
                    continue;
                }
                let q = -st.a.a[i][t].div_floor(&st.a.a[t][t]);
                st.add_row(i, t, &q);
                if !st.a.a[i][t].is_zero() {
                    st.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..c {
                if st.a.a[t][j].is_zero() {
                    continue;
                }
                let q = -st.a.a[t][j].div_floor(&st.a.a[t][t]);
                st.add_col(j, t, &q);
                if !st.a.a[t][j].is_zero() {
                    st.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block
            let piv = st.a.a[t][t].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&st.a.a[i][j] % &piv).is_zero()));
            match bad {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.a.a[t][t].is_negative() {
            st.negate_row(t);
        }
    }

    Ok(Smith {
        u: st.u.to_matrix(),
        u_inv: st.u_inv.to_matrix(),
        d: st.a.to_matrix(),
        v: st.v.to_matrix(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a).unwrap();
        assert_eq!(&(&s.u * a) * &s.v, s.d, "U A V = D");
        assert!((&s.u * &s.u_inv).is_identity());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "chain {diag:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(1)]);
        let s = check(&IntMatrix::from_ints(&[&[0]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(0)]);
        let s = check(&IntMatrix::zeros(0, 3));
        assert!(s.diagonal().is_empty());
    }

    #[test]
    fn two_by_two() {
        // d1 = gcd = 2, d1 d2 = |det| = 8
        let s = check(&IntMatrix::from_ints(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn needs_divisibility_fix() {
        let s = check(&IntMatrix::from_ints(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rejects_fractions() {
        let mut a = IntMatrix::identity(1);
        a.set(0, 0, crate::intlinalg::rat_frac(1, 2));
        assert_eq!(smith_normal_form(&a).unwrap_err(), Error::NotIntegral);
    }

    proptest! {
        #[test]
        fn snf_postcondition(rows in 0usize..5, cols in 0usize..5, seed in proptest::collection::vec(-9i64..10, 25)) {
            let mut a = IntMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, crate::intlinalg::rat(seed[i * 5 + j]));
                }
            }
            check(&a);
        }
    }
}
