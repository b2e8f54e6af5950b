//! Sparse integer echelon forms.
//!
//! For a matrix A (r x n) over Z[1/m] the rows of A are first scaled by
//! units so that A becomes integral. The transpose is then row-reduced
//! together with an identity block, `U * A^T = H`, using only unimodular
//! integer operations. Nonzero rows of H span the column space of A, and the
//! transform rows belonging to zero rows of H form a saturated basis of the
//! kernel. Since U is unimodular over Z it is also unimodular over Z[1/m].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intlinalg::{IntMatrix, Localization, Rational};

/// Sparse integer vector, sorted by index, no explicit zeros.
type SparseVec = Vec<(usize, BigInt)>;

/// `a + q * b`, merged.
fn axpy(a: &SparseVec, q: &BigInt, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ia, va)), Some((ib, vb))) if ia == ib => {
                let v = va + q * vb;
                if !v.is_zero() {
                    out.push((*ia, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ia, va)), Some((ib, _))) if ia < ib => {
                out.push((*ia, va.clone()));
                i += 1;
            }
            (Some(_), Some((ib, vb))) | (None, Some((ib, vb))) => {
                out.push((*ib, q * vb));
                j += 1;
            }
            (Some((ia, va)), None) => {
                out.push((*ia, va.clone()));
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn negate(a: &mut SparseVec) {
    for (_, v) in a.iter_mut() {
        *v = -std::mem::take(v);
    }
}

/// Column echelon decomposition of a matrix over Z[1/m].
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    rows: usize,
    cols: usize,
    ring: Localization,
    /// Per-row scale making A integral: A_int = diag(scale) * A.
    scale: Vec<BigInt>,
    /// Nonzero echelon rows (indices < rows) with their pivot column.
    pivots: Vec<(usize, SparseVec)>,
    /// Transform rows matching `pivots` (indices < cols).
    pivot_transforms: Vec<SparseVec>,
    /// Transform rows spanning the kernel.
    kernel: Vec<SparseVec>,
}

impl ColumnEchelon {
    pub fn new(a: &IntMatrix, ring: &Localization) -> Self {
        let columns: Vec<Vec<(usize, Rational)>> = (0..a.cols())
            .map(|j| {
                (0..a.rows())
                    .filter(|&i| !a.get(i, j).is_zero())
                    .map(|i| (i, a.get(i, j).clone()))
                    .collect()
            })
            .collect();
        Self::from_sparse_columns(a.rows(), &columns, ring)
    }

    /// Same as [`ColumnEchelon::new`] for a matrix given by sparse columns `(row, value)`.
    pub fn from_sparse_columns(r: usize, columns: &[Vec<(usize, Rational)>], ring: &Localization) -> Self {
        let n = columns.len();
        let mut scale = vec![BigInt::one(); r];
        for col in columns {
            for (i, x) in col {
                if !x.denom().is_one() {
                    scale[*i] = scale[*i].lcm(x.denom());
                }
            }
        }
        // Work rows: entry indices < r are the A^T part, r.. the transform.
        let mut work: Vec<SparseVec> = columns
            .iter()
            .enumerate()
            .map(|(j, col)| {
                let mut v: SparseVec = col
                    .iter()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (*i, (x * Rational::from_integer(scale[*i].clone())).to_integer()))
                    .collect();
                v.sort_by_key(|(i, _)| *i);
                v.dedup_by(|b, a| {
                    if a.0 == b.0 {
                        a.1 += std::mem::take(&mut b.1);
                        true
                    } else {
                        false
                    }
                });
                v.retain(|(_, x)| !x.is_zero());
                v.push((r + j, BigInt::one()));
                v
            })
            .collect();

        let mut pivots = Vec::new();
        let mut pivot_transforms = Vec::new();
        let mut active: Vec<usize> = (0..n).collect();
        loop {
            // next pivot column: smallest leading index among active rows
            let Some(col) = active
                .iter()
                .filter_map(|&k| work[k].first().map(|(c, _)| *c))
                .filter(|&c| c < r)
                .min()
            else {
                break;
            };
            let mut hits: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&k| work[k].first().is_some_and(|(c, _)| *c == col))
                .collect();
            // Euclid across the rows that hit this column.
            loop {
                let (pi, _) = hits
                    .iter()
                    .enumerate()
                    .min_by(|(_, &x), (_, &y)| work[x][0].1.abs().cmp(&work[y][0].1.abs()))
                    .unwrap();
                let p = hits[pi];
                let pv = work[p][0].1.clone();
                let mut remaining = Vec::new();
                for &k in &hits {
                    if k == p {
                        continue;
                    }
                    let q = -work[k][0].1.div_floor(&pv);
                    let row = axpy(&work[k], &q, &work[p]);
                    work[k] = row;
                    if work[k].first().is_some_and(|(c, _)| *c == col) {
                        remaining.push(k);
                    }
                }
                if remaining.is_empty() {
                    if work[p][0].1.is_negative() {
                        negate(&mut work[p]);
                    }
                    active.retain(|&k| k != p);
                    pivots.push((col, p));
                    break;
                }
                remaining.push(p);
                hits = remaining;
            }
        }

        let split = |row: &SparseVec| -> (SparseVec, SparseVec) {
            let left = row.iter().filter(|(c, _)| *c < r).cloned().collect();
            let right = row
                .iter()
                .filter(|(c, _)| *c >= r)
                .map(|(c, v)| (c - r, v.clone()))
                .collect();
            (left, right)
        };
        let mut piv_rows = Vec::new();
        for &(col, k) in &pivots {
            let (h, t) = split(&work[k]);
            piv_rows.push((col, h));
            pivot_transforms.push(t);
        }
        let kernel = active.iter().map(|&k| split(&work[k]).1).collect();
        Self {
            rows: r,
            cols: n,
            ring: ring.clone(),
            scale,
            pivots: piv_rows,
            pivot_transforms,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Saturated kernel basis as columns (cols x k).
    pub fn kernel_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.cols, self.kernel.len());
        for (j, v) in self.kernel.iter().enumerate() {
            for (i, x) in v {
                m.set(*i, j, Rational::from_integer(x.clone()));
            }
        }
        m
    }

    /// Basis of the column space of A over Z[1/m] (rows x rank).
    pub fn image_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.pivots.len());
        for (j, (_, h)) in self.pivots.iter().enumerate() {
            for (i, x) in h {
                m.set(*i, j, Rational::new(x.clone(), self.scale[*i].clone()));
            }
        }
        m
    }

    /// Some x over Z[1/m] with A x = b, or None.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut residual: Vec<Rational> = b
            .iter()
            .zip(&self.scale)
            .map(|(x, s)| x * Rational::from_integer(s.clone()))
            .collect();
        let mut y = Vec::with_capacity(self.pivots.len());
        for (col, h) in &self.pivots {
            let lead = &h[0].1;
            let yi = &residual[*col] / Rational::from_integer(lead.clone());
            if !self.ring.contains(&yi) {
                return None;
            }
            if !yi.is_zero() {
                for (i, x) in h {
                    residual[*i] -= &yi * Rational::from_integer(x.clone());
                }
            }
            y.push(yi);
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (yi, t) in y.iter().zip(&self.pivot_transforms) {
            if yi.is_zero() {
                continue;
            }
            for (i, v) in t {
                x[*i] += yi * Rational::from_integer(v.clone());
            }
        }
        Some(x)
    }
}

/// Saturated kernel basis of A over Z[1/m], as columns.
pub fn kernel(a: &IntMatrix, ring: &Localization) -> IntMatrix {
    ColumnEchelon::new(a, ring).kernel_matrix()
}

/// Some x with A x = b over Z[1/m], or None when no solution exists.
pub fn solve(a: &IntMatrix, b: &[Rational], ring: &Localization) -> Option<Vec<Rational>> {
    ColumnEchelon::new(a, ring).solve(b)
}

/// Basis of the Z[1/m]-span of the columns of A.
pub fn image(a: &IntMatrix, ring: &Localization) -> IntMatrix {
    ColumnEchelon::new(a, ring).image_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::{rat, rat_frac};

    fn zz() -> Localization {
        Localization::integers()
    }

    #[test]
    fn kernel_of_row_vector() {
        let p = 5;
        let a = IntMatrix::from_ints(&[&[p, -1]]);
        let k = kernel(&a, &zz());
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        // generated by (1, p) up to sign
        assert!(v == vec![rat(1), rat(p)] || v == vec![rat(-1), rat(-p)]);
        assert!((&a * &k).is_zero());
    }

    #[test]
    fn kernel_of_identity_and_nonsingular() {
        assert_eq!(kernel(&IntMatrix::identity(3), &zz()).cols(), 0);
        let a = IntMatrix::from_ints(&[&[2, 4], &[6, 8]]);
        assert_eq!(kernel(&a, &zz()).cols(), 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // x + 2y... kernel of [2 4] is (2,-1), not (4,-2)
        let a = IntMatrix::from_ints(&[&[2, 4]]);
        let k = kernel(&a, &zz());
        let v = k.column(0);
        assert!(v == vec![rat(-2), rat(1)] || v == vec![rat(2), rat(-1)]);
    }

    #[test]
    fn solve_cases() {
        let a = IntMatrix::from_ints(&[&[2]]);
        assert_eq!(solve(&a, &[rat(4)], &zz()), Some(vec![rat(2)]));
        assert_eq!(solve(&a, &[rat(1)], &zz()), None);
        let r2 = Localization::new(2).unwrap();
        assert_eq!(solve(&a, &[rat(1)], &r2), Some(vec![rat_frac(1, 2)]));
    }

    #[test]
    fn solve_with_rational_matrix() {
        let r = Localization::new(6).unwrap();
        let mut a = IntMatrix::from_ints(&[&[1, 1], &[0, 3]]);
        a.set(0, 0, rat_frac(1, 2));
        let b = vec![rat(1), rat(1)];
        let x = solve(&a, &b, &r).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert_eq!(solve(&a, &b, &zz()), None);
    }

    #[test]
    fn image_spans_columns() {
        let a = IntMatrix::from_ints(&[&[2, 4, 6], &[0, 3, 3]]);
        let im = image(&a, &zz());
        assert_eq!(im.cols(), 2);
        for c in 0..3 {
            assert!(solve(&im, &a.column(c), &zz()).is_some());
        }
        for c in 0..im.cols() {
            assert!(solve(&a, &im.column(c), &zz()).is_some());
        }
    }
}
