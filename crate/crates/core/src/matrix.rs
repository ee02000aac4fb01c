//! Matrices over the polynomial ring, stored column-wise.

use crate::gb::VecPoly;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat<K: Scalar> {
    nrows: usize,
    nvars: usize,
    cols: Vec<VecPoly<K>>,
}

impl<K: Scalar> PolyMat<K> {
    pub fn new(nrows: usize, nvars: usize, cols: Vec<VecPoly<K>>) -> Self {
        for c in &cols {
            assert_eq!(c.rank(), nrows, "column rank mismatch");
        }
        PolyMat {
            nrows,
            nvars,
            cols,
        }
    }

    pub fn zero(nrows: usize, ncols: usize, nvars: usize) -> Self {
        PolyMat {
            nrows,
            nvars,
            cols: vec![VecPoly::zero(nrows); ncols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let cols = (0..n).map(|j| VecPoly::unit(n, j, nvars)).collect();
        PolyMat {
            nrows: n,
            nvars,
            cols,
        }
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<Polynomial<K>>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut cols = vec![VecPoly::zero(nrows); ncols];
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols);
            for (j, p) in row.into_iter().enumerate() {
                if !p.is_zero() {
                    cols[j].add_to(i, p);
                }
            }
        }
        PolyMat {
            nrows,
            nvars,
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn col(&self, j: usize) -> &VecPoly<K> {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[VecPoly<K>] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial<K> {
        let p = self.cols[j].comp(i);
        if p.is_zero() {
            Polynomial::zero(self.nvars)
        } else {
            p
        }
    }

    pub fn set_entry(&mut self, i: usize, j: usize, p: Polynomial<K>) {
        self.cols[j].set(i, p);
    }

    pub fn push_col(&mut self, c: VecPoly<K>) {
        assert_eq!(c.rank(), self.nrows);
        self.cols.push(c);
    }

    pub fn transpose(&self) -> Self {
        let mut out = PolyMat::zero(self.ncols(), self.nrows, self.nvars);
        for j in 0..self.ncols() {
            for (i, p) in self.cols[j].iter() {
                out.cols[i].set(j, p.clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &VecPoly<K>) -> VecPoly<K> {
        assert_eq!(v.rank(), self.ncols());
        let mut out = VecPoly::zero(self.nrows);
        for (j, p) in v.iter() {
            out = out.add(&self.cols[j].mul_poly(p));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols(), rhs.nrows);
        let cols = rhs.cols.iter().map(|c| self.mul_vec(c)).collect();
        PolyMat {
            nrows: self.nrows,
            nvars: self.nvars,
            cols,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// Determinant by fraction-free Bareiss elimination (exact divisions).
    pub fn det(&self) -> Polynomial<K> {
        assert_eq!(self.nrows, self.ncols(), "determinant of non-square matrix");
        let n = self.nrows;
        if n == 0 {
            return Polynomial::one(self.nvars);
        }
        if n == 1 {
            return self.entry(0, 0);
        }
        if n == 2 {
            return &self.entry(0, 0) * &self.entry(1, 1)
                - &self.entry(0, 1) * &self.entry(1, 0);
        }
        let ord = crate::order::MonomialOrder::DegRevLex;
        let mut a: Vec<Vec<Polynomial<K>>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect();
        let mut prev = Polynomial::one(self.nvars);
        let mut sign = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = !sign;
                    }
                    None => return Polynomial::zero(self.nvars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = if prev.is_one() {
                        num
                    } else {
                        num.div_exact(&prev, ord)
                    };
                }
                a[i][k] = Polynomial::zero(self.nvars);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = PolyMat::zero(rows.len(), cols.len(), self.nvars);
        for (jj, &j) in cols.iter().enumerate() {
            for (ii, &i) in rows.iter().enumerate() {
                let p = self.entry(i, j);
                if !p.is_zero() {
                    out.cols[jj].set(ii, p);
                }
            }
        }
        out
    }

    /// All r×r minors.
    pub fn minors(&self, r: usize) -> Vec<Polynomial<K>> {
        assert!(r <= self.nrows.min(self.ncols()), "minor size out of range");
        if r == 0 {
            return vec![Polynomial::one(self.nvars)];
        }
        let row_sets = subsets_of_size(self.nrows, r);
        let col_sets = subsets_of_size(self.ncols(), r);
        let mut out = Vec::new();
        for rs in &row_sets {
            for cs in &col_sets {
                let d = self.submatrix(rs, cs).det();
                if !d.is_zero() {
                    out.push(d);
                }
            }
        }
        out
    }

    pub fn render(&self, ring: &Ring, ord: MonomialOrder) -> String {
        let mut s = String::new();
        for i in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols())
                .map(|j| self.entry(i, j).render(ring, ord))
                .collect();
            s.push_str(&format!("[{}]\n", row.join(", ")));
        }
        s
    }
}

pub fn subsets_of_size(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::Rat;

    #[test]
    fn det_two_by_two() {
        let r = Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap();
        let p = |s: &str| parse_poly::<Rat>(&r, s).unwrap();
        let m = PolyMat::from_rows(4, vec![vec![p("w1"), p("w2")], vec![p("0"), p("w1")]]);
        assert_eq!(m.det(), p("w1^2"));
    }

    #[test]
    fn matrix_product() {
        let r = Ring::new(&["z"], &["w"]).unwrap();
        let p = |s: &str| parse_poly::<Rat>(&r, s).unwrap();
        let a = PolyMat::from_rows(2, vec![vec![p("z"), p("w")]]);
        let b = PolyMat::from_rows(2, vec![vec![p("w")], vec![p("-z")]]);
        assert!(a.mul(&b).is_zero());
    }
}
