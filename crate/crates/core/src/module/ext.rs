//! Free covers, their kernels, and the first Ext group.

use num_traits::{One, Zero};

use super::free::{free_module, FreeModule};
use super::hom::hom_space;
use super::raw::direct_sum_many;
use super::{arrow_index, permute, vertex_of, KGModule};
use crate::error::{Error, Result};
use crate::exactness::is_exact;
use crate::intlinalg::{
    kernel_lattice, relation_columns, ColumnEchelon, GradedGroup, GroupPart, IntMatrix, Parity, Rational, Subquotient,
};
use crate::ring::Arrow;

/// A surjection from a sum of suspended cyclic free modules.
#[derive(Clone, Debug)]
pub struct FreeCover {
    pub module: KGModule,
    /// `target.dim x module.dim`.
    pub map: IntMatrix,
    /// Coordinate of the target hit by each summand generator.
    pub generators: Vec<usize>,
    pub summands: Vec<FreeModule>,
    /// Parity shift of each summand.
    pub shifts: Vec<Parity>,
    pub inclusions: Vec<IntMatrix>,
    pub projections: Vec<IntMatrix>,
}

impl FreeCover {
    /// Map from the cover to `target` sending generator i to `values[i]`, for a target vertex match.
    pub fn map_with(&self, target: &KGModule, values: &[Vec<Rational>]) -> Result<IntMatrix> {
        let mut total = IntMatrix::zeros(target.dim(), self.module.dim());
        for (i, f) in self.summands.iter().enumerate() {
            let m = summand_matrix(f, self.shifts[i], target, &values[i])?;
            total = &total + &(&m * &self.projections[i]);
        }
        Ok(target.reduce(&total))
    }
}

fn summand_matrix(f: &FreeModule, shift: Parity, target: &KGModule, x: &[Rational]) -> Result<IntMatrix> {
    let m = f.map_to(target, x)?;
    Ok(match shift {
        Parity::Even => m,
        Parity::Odd => {
            let perm = f.module.suspension_permutation();
            let rows: Vec<usize> = (0..m.rows()).collect();
            permute(&m, &rows, &perm)
        }
    })
}

/// Cover by greedily chosen coordinate generators.
pub fn free_cover(m: &KGModule) -> Result<FreeCover> {
    let n = m.dim();
    let mut span = relation_columns(m.orders());
    let mut summands = Vec::new();
    let mut shifts = Vec::new();
    let mut generators = Vec::new();
    let mut maps = Vec::new();
    let mut modules = Vec::new();
    for c in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[c] = Rational::one();
        if ColumnEchelon::new(&span, m.ring()).solve(&e).is_some() {
            continue;
        }
        let v = vertex_of(m.vertex_of_coordinate(c), m.k());
        let f = free_module(m.primes(), m.ring().clone(), &v)?;
        let shift = m.parities()[c];
        let phi = summand_matrix(&f, shift, m, &e)?;
        span = span.hstack(&phi)?;
        let module = match shift {
            Parity::Even => f.module.clone(),
            Parity::Odd => f.module.suspend(),
        };
        modules.push(module);
        maps.push(phi);
        summands.push(f);
        shifts.push(shift);
        generators.push(c);
    }
    if summands.is_empty() {
        let zero = KGModule::zero(m.primes(), m.ring().clone())?;
        return Ok(FreeCover {
            module: zero,
            map: IntMatrix::zeros(n, 0),
            generators,
            summands,
            shifts,
            inclusions: Vec::new(),
            projections: Vec::new(),
        });
    }
    let refs: Vec<&KGModule> = modules.iter().collect();
    let sum = direct_sum_many(&refs)?;
    let mut map = IntMatrix::zeros(n, sum.module.dim());
    for (phi, proj) in maps.iter().zip(&sum.projections) {
        map = &map + &(phi * proj);
    }
    Ok(FreeCover {
        module: sum.module,
        map: m.reduce(&map),
        generators,
        summands,
        shifts,
        inclusions: sum.inclusions,
        projections: sum.projections,
    })
}

/// `0 -> K -> F -> M -> 0` with F a free cover.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub cover: FreeCover,
    pub kernel: KGModule,
    /// `cover.dim x kernel.dim`.
    pub inclusion: IntMatrix,
}

/// Free cover and its kernel; requires an exact module and checks that the kernel is exact.
pub fn resolve(m: &KGModule) -> Result<Resolution> {
    if !is_exact(m)?.is_exact() {
        return Err(Error::NotExact("Ext needs an exact first argument".into()));
    }
    let cover = free_cover(m)?;
    let f = &cover.module;
    let ring = m.ring();
    let mut comps = Vec::with_capacity(f.vertex_count());
    // per vertex and parity: (F coordinates, kernel basis)
    let mut pieces: Vec<(Vec<usize>, IntMatrix)> = Vec::new();
    for vi in 0..f.vertex_count() {
        let mut ranks = [0usize; 2];
        for parity in [Parity::Even, Parity::Odd] {
            let cols: Vec<usize> = f.parity_range(vi, parity).collect();
            let rows: Vec<usize> = (0..m.dim()).collect();
            let g = cover.map.submatrix(&rows, &cols);
            let k = kernel_lattice(&g, m.orders(), ring)?;
            ranks[parity.index()] = k.cols();
            pieces.push((cols, k));
        }
        comps.push(GradedGroup::free(ring.clone(), ranks[0], ranks[1]));
    }
    let nk: usize = pieces.iter().map(|(_, k)| k.cols()).sum();
    let mut inclusion = IntMatrix::zeros(f.dim(), nk);
    let mut col0 = Vec::with_capacity(pieces.len());
    let mut at = 0;
    for (cols, k) in &pieces {
        col0.push(at);
        for j in 0..k.cols() {
            for (i, &c) in cols.iter().enumerate() {
                let x = k.get(i, j);
                if !x.is_zero() {
                    inclusion.set(c, at + j, x.clone());
                }
            }
        }
        at += k.cols();
    }
    let echelons: Vec<ColumnEchelon> = pieces.iter().map(|(_, k)| ColumnEchelon::new(k, ring)).collect();
    let piece_of = |c: usize| -> usize {
        let vi = f.vertex_of_coordinate(c);
        2 * vi + f.parities()[c].index()
    };
    let mut actions = vec![vec![IntMatrix::zeros(nk, nk); 6]; m.k()];
    for (j, list) in actions.iter_mut().enumerate() {
        for a in Arrow::ALL {
            let img = f.action(j, a) * &inclusion;
            let out = &mut list[arrow_index(a)];
            for col in 0..nk {
                let y = img.column(col);
                let Some(c) = y.iter().position(|x| !x.is_zero()) else {
                    continue;
                };
                let pi = piece_of(c);
                let local: Vec<Rational> = pieces[pi].0.iter().map(|&i| y[i].clone()).collect();
                let z = echelons[pi]
                    .solve(&local)
                    .ok_or_else(|| Error::ResolutionDefect("kernel of the cover is not a submodule".into()))?;
                for (i, x) in z.into_iter().enumerate() {
                    if !x.is_zero() {
                        out.set(col0[pi] + i, col, x);
                    }
                }
            }
        }
    }
    let kernel = KGModule::from_actions(m.primes(), ring.clone(), comps, actions)?;
    if !is_exact(&kernel)?.is_exact() {
        return Err(Error::ResolutionDefect("kernel of the cover is not exact".into()));
    }
    Ok(Resolution {
        cover,
        kernel,
        inclusion,
    })
}

/// Even part of Ext^1 from a resolution of the first argument.
pub fn ext1_part(res: &Resolution, n: &KGModule) -> Result<GroupPart> {
    let space = hom_space(&res.kernel, n, &[])?;
    let cover = &res.cover;
    let mut restricted = Vec::new();
    for (i, f) in cover.summands.iter().enumerate() {
        let vi = super::vertex_index(&f.vertex);
        let parity = cover.shifts[i];
        for r in n.parity_range(vi, parity) {
            let mut e = vec![Rational::zero(); n.dim()];
            e[r] = Rational::one();
            let psi = &summand_matrix(f, parity, n, &e)? * &cover.projections[i];
            let x = &psi * &res.inclusion;
            restricted.push(space.vars_of(&x));
        }
    }
    let vars = space.var_count();
    let r = IntMatrix::from_columns(vars, &restricted);
    let rels = space.null.hstack(&r)?;
    let gens = space.lattice.hstack(&rels)?;
    Ok(Subquotient::new(&gens, &rels, n.ring())?.part().clone())
}

/// Ext^1 with both parities; the first argument must be exact.
pub fn ext1(m: &KGModule, n: &KGModule) -> Result<GradedGroup> {
    if m.primes() != n.primes() {
        return Err(Error::PrimeMismatch {
            left: m.primes().to_vec(),
            right: n.primes().to_vec(),
        });
    }
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch {
            left: m.ring().modulus(),
            right: n.ring().modulus(),
        });
    }
    let res = resolve(m)?;
    let even = ext1_part(&res, n)?;
    let odd = ext1_part(&res, &n.suspend())?;
    GradedGroup::new(m.ring().clone(), even, odd)
}
