//! O_Z-module computations via w-truncation.
//!
//! A submodule U of R^s that contains every vector with w-degree ≥ M splits
//! off the tail W of high w-degree terms, so the quotient R^s/U is presented
//! over O_Z = ℚ[z] on the finite basis {w^α e_c : |α| < M}. This converts
//! Nakayama-type minimal-generator selection, spanning tests, and generic
//! rank questions into module computations over the z-subring.

use crate::gb::{ColumnSpan, VecPoly};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use std::collections::HashMap;

/// w-exponent vectors with |α| < bound, sorted by (total degree, lex).
pub fn w_monomials_below(kappa: usize, bound: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    fn rec(kappa: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == kappa {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(kappa, left - e, cur, out);
            cur.pop();
        }
    }
    for d in 0..bound as u32 {
        let mut all: Vec<Vec<u32>> = Vec::new();
        rec(kappa, d, &mut Vec::new(), &mut all);
        let mut of_degree: Vec<Vec<u32>> = all
            .into_iter()
            .filter(|e| e.iter().sum::<u32>() == d)
            .collect();
        of_degree.sort();
        out.extend(of_degree);
    }
    out
}

/// Truncated O_Z-coordinates for R^amb relative to a w-degree bound.
#[derive(Clone, Debug)]
pub struct ZScope {
    pub ring: Ring,
    pub zring: Ring,
    pub amb: usize,
    pub bound: usize,
    pub wexps: Vec<Vec<u32>>,
    windex: HashMap<Vec<u32>, usize>,
}

impl ZScope {
    pub fn new(ring: &Ring, amb: usize, bound: usize) -> Self {
        let wexps = w_monomials_below(ring.nw(), bound);
        let windex = wexps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        ZScope {
            ring: ring.clone(),
            zring: ring.z_subring(),
            amb,
            bound,
            wexps,
            windex,
        }
    }

    /// Number of truncated coordinates: |{α : |α| < bound}| · amb.
    pub fn rank(&self) -> usize {
        self.wexps.len() * self.amb
    }

    /// Coordinate index of w^α e_c; candidate order is (deg α, α lex, c).
    pub fn coord(&self, alpha_idx: usize, comp: usize) -> usize {
        alpha_idx * self.amb + comp
    }

    pub fn coord_of_exp(&self, alpha: &[u32], comp: usize) -> Option<usize> {
        self.windex.get(alpha).map(|&i| self.coord(i, comp))
    }

    pub fn decode(&self, coord: usize) -> (&[u32], usize) {
        (&self.wexps[coord / self.amb], coord % self.amb)
    }

    /// Project a vector over R to truncated O_Z-coordinates, dropping all
    /// terms of w-degree ≥ bound (legitimate exactly when those terms lie in
    /// the module being presented).
    pub fn project<K: Scalar>(&self, v: &VecPoly<K>) -> VecPoly<K> {
        let nz = self.ring.nz();
        let n = self.ring.nvars();
        let mut out = VecPoly::zero(self.rank());
        for (c, p) in v.iter() {
            for (e, coef) in p.terms() {
                let walpha: Vec<u32> = e[nz..n].to_vec();
                let wdeg: u32 = walpha.iter().sum();
                if (wdeg as usize) >= self.bound {
                    continue;
                }
                let zexp: Vec<u32> = e[..nz].to_vec();
                let u = self
                    .coord_of_exp(&walpha, c)
                    .expect("w-exponent below bound must be indexed");
                out.add_to(u, Polynomial::monomial(zexp, coef.clone()));
            }
        }
        out
    }

    /// Truncated relation columns {proj(w^β g)} over all generators and
    /// |β| < bound.
    pub fn relation_cols<K: Scalar>(&self, gens: &[VecPoly<K>]) -> Vec<VecPoly<K>> {
        let nz = self.ring.nz();
        let n = self.ring.nvars();
        let mut out = Vec::new();
        for g in gens {
            for beta in &self.wexps {
                let mut e = vec![0u32; n];
                e[nz..].copy_from_slice(beta);
                let shifted = g.mul_monomial(&e, &K::one());
                let p = self.project(&shifted);
                if !p.is_zero() {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Greedy Nakayama basis at the origin: scan coordinates in candidate
    /// order and keep those whose class is not already spanned modulo the
    /// relations evaluated at z = 0.
    pub fn nakayama_keep<K: Scalar>(&self, relation_cols: &[VecPoly<K>]) -> Vec<usize> {
        let t = self.rank();
        let mut rows: Vec<Vec<K>> = Vec::new(); // reduced spanning rows
        let mut pivots: Vec<usize> = Vec::new();
        let insert = |mut v: Vec<K>, rows: &mut Vec<Vec<K>>, pivots: &mut Vec<usize>| -> bool {
            for (row, &p) in rows.iter().zip(pivots.iter()) {
                if !v[p].is_zero() {
                    let f = v[p].clone();
                    for (x, y) in v.iter_mut().zip(row.iter()) {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                let inv = K::one() / v[p].clone();
                for x in v.iter_mut() {
                    *x = x.clone() * inv.clone();
                }
                rows.push(v);
                pivots.push(p);
                true
            } else {
                false
            }
        };
        for col in relation_cols {
            let mut v = vec![K::zero(); t];
            for (i, p) in col.iter() {
                v[i] = p.constant_term();
            }
            insert(v, &mut rows, &mut pivots);
        }
        let mut keep = Vec::new();
        for u in 0..t {
            let mut v = vec![K::zero(); t];
            v[u] = K::one();
            if insert(v, &mut rows, &mut pivots) {
                keep.push(u);
            }
        }
        keep
    }

    /// Membership of `target` in the O_Z-span of `cols` (exact polynomial
    /// coefficients), via a Gröbner basis over the z-subring.
    pub fn z_span<K: Scalar>(&self, cols: &[VecPoly<K>], ord: MonomialOrder) -> ColumnSpan<K> {
        ColumnSpan::new(cols, self.rank(), self.zring.nvars(), ord)
    }
}

/// Fraction-free Bareiss rank of a matrix over ℚ[z] viewed over Frac(ℚ[z]).
pub fn frac_rank<K: Scalar>(rows: &[Vec<Polynomial<K>>], ord: MonomialOrder) -> usize {
    let nr = rows.len();
    if nr == 0 {
        return 0;
    }
    let nc = rows[0].len();
    let nvars = rows
        .iter()
        .flatten()
        .map(|p| p.nvars())
        .max()
        .unwrap_or(1);
    let mut a: Vec<Vec<Polynomial<K>>> = rows.to_vec();
    let mut prev = Polynomial::one(nvars);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..nc {
        // find pivot
        let piv = (row..nr).find(|&i| !a[i][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        a.swap(row, piv);
        for i in 0..nr {
            if i == row {
                continue;
            }
            // fraction-free update restricted to rows below; rows above are
            // already finished
            if i < row {
                continue;
            }
            for j in 0..nc {
                if j == col {
                    continue;
                }
                let num = &a[row][col] * &a[i][j];
                let sub = &a[i][col] * &a[row][j];
                let val = num - sub;
                a[i][j] = if prev.is_one() {
                    val
                } else {
                    val.div_exact(&prev, ord)
                };
            }
            a[i][col] = Polynomial::zero(nvars);
        }
        prev = a[row][col].clone();
        rank += 1;
        row += 1;
        if row == nr {
            break;
        }
    }
    rank
}

/// Solve A·x = b over Frac(ℚ[z]) by Gaussian elimination on rational
/// functions represented as (numerator, denominator) pairs. Returns the
/// solution as polynomial numerators with a common denominator.
pub struct FracSolution<K: Scalar> {
    pub numerators: Vec<Polynomial<K>>,
    pub denominator: Polynomial<K>,
}

pub fn frac_solve<K: Scalar>(
    cols: &[Vec<Polynomial<K>>],
    b: &[Polynomial<K>],
    _ord: MonomialOrder,
) -> Option<FracSolution<K>> {
    let ncols = cols.len();
    let nrows = b.len();
    let nvars = b
        .iter()
        .chain(cols.iter().flatten())
        .map(|p| p.nvars())
        .max()
        .unwrap_or(1);
    // augmented matrix rows over ℚ[z]; track a per-row denominator implicitly
    // by cross-multiplying during elimination (entries stay polynomial)
    let mut m: Vec<Vec<Polynomial<K>>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<Polynomial<K>> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut used = vec![false; nrows];
    for col in 0..ncols {
        let piv = (0..nrows).find(|&i| !used[i] && !m[i][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        used[piv] = true;
        pivot_rows.push((piv, col));
        let pc = m[piv][col].clone();
        for i in 0..nrows {
            if i == piv || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..=ncols {
                let val = &m[i][j] * &pc - &m[piv][j] * &f;
                m[i][j] = val;
            }
        }
    }
    // consistency: rows without pivot must have zero RHS
    for i in 0..nrows {
        if !used[i] && !m[i][ncols].is_zero() {
            return None;
        }
        if !used[i] && m[i][..ncols].iter().any(|p| !p.is_zero()) {
            // leftover row with nonzero coefficients but never used as pivot:
            // can only happen if its entries were eliminated; re-check RHS
            if !m[i][ncols].is_zero() {
                return None;
            }
        }
    }
    // back-substitute: each pivot row gives x_col = rhs / pivot (other
    // pivot columns eliminated by the full sweep above)
    let mut dens: Vec<Polynomial<K>> = Vec::new();
    for &(r, c) in &pivot_rows {
        // the row may still involve non-pivot columns; we require those to
        // be absent (full column set solved) — with free columns, set 0
        for j in 0..ncols {
            if j != c && !m[r][j].is_zero() && pivot_rows.iter().all(|&(_, pc)| pc != j) {
                // free variable with nonzero coefficient: set it to zero is
                // consistent, coefficient simply ignored
            }
        }
        dens.push(m[r][c].clone());
    }
    // common denominator: product of pivots (kept simple; exactness is what
    // matters, sizes stay small at desk scale)
    let mut denom = Polynomial::one(nvars);
    for d in &dens {
        denom = &denom * d;
    }
    let mut nums = vec![Polynomial::zero(nvars); ncols];
    for (k, &(r, c)) in pivot_rows.iter().enumerate() {
        // x_c = rhs_r / pivot_r ⇒ numerator = rhs_r · (denom / pivot_r)
        let mut cof = Polynomial::one(nvars);
        for (k2, d) in dens.iter().enumerate() {
            if k2 != k {
                cof = &cof * d;
            }
        }
        nums[c] = &m[r][ncols] * &cof;
    }
    // verify exactly: A·nums = denom·b
    for i in 0..nrows {
        let mut acc = Polynomial::zero(nvars);
        for (j, ccol) in cols.iter().enumerate() {
            acc = acc + &ccol[i] * &nums[j];
        }
        if acc != &b[i].clone() * &denom {
            return None;
        }
    }
    Some(FracSolution {
        numerators: nums,
        denominator: denom,
    })
}
