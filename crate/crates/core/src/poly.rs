//! Sparse multivariate polynomials with exact coefficients.

use crate::order::{exp_mul, Exponents, MonomialOrder};
use crate::ring::Ring;
use crate::scalar::Scalar;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial as a map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<K: Scalar> {
    nvars: usize,
    terms: BTreeMap<Exponents, K>,
}

impl<K: Scalar> Polynomial<K> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, K::one())
    }

    pub fn monomial(exps: Exponents, c: K) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> K {
        self.terms.get(e).cloned().unwrap_or_else(K::zero)
    }

    pub fn constant_term(&self) -> K {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    pub fn add_term(&mut self, e: Exponents, c: K) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Leading exponent with respect to `ord`.
    pub fn lead_exp(&self, ord: MonomialOrder) -> Option<&Exponents> {
        self.terms
            .keys()
            .max_by(|a, b| ord.cmp(a, b))
    }

    pub fn lead_term(&self, ord: MonomialOrder) -> Option<(&Exponents, &K)> {
        self.lead_exp(ord).map(|e| (e, &self.terms[e]))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut p = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            p.terms.insert(e.clone(), a.clone() * c.clone());
        }
        p
    }

    pub fn mul_monomial(&self, e: &[u32], c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut p = Self::zero(self.nvars);
        for (m, a) in &self.terms {
            p.terms.insert(exp_mul(m, e), a.clone() * c.clone());
        }
        p
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c.clone() * K::from_u32(e[i]).unwrap());
            }
        }
        p
    }

    /// Substitute 0 for every variable with index ≥ `n_keep`.
    pub fn restrict_to_first(&self, n_keep: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[n_keep..].iter().all(|&x| x == 0) {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    /// Reinterpret a polynomial that only uses the first `n` variables as an
    /// element of the n-variable subring. Panics if a later variable occurs.
    pub fn truncate_vars(&self, n: usize) -> Polynomial<K> {
        let mut p = Polynomial::zero(n);
        for (e, c) in &self.terms {
            assert!(
                e[n..].iter().all(|&x| x == 0),
                "polynomial not contained in subring"
            );
            p.terms.insert(e[..n].to_vec(), c.clone());
        }
        p
    }

    /// View an n-variable polynomial inside a larger ring (variables appended).
    pub fn extend_vars(&self, nvars: usize) -> Polynomial<K> {
        assert!(nvars >= self.nvars);
        let mut p = Polynomial::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(nvars, 0);
            p.terms.insert(e2, c.clone());
        }
        p
    }

    /// View a polynomial of a ring inside its extension by `k` fresh
    /// variables placed *in front*.
    pub fn shift_vars_front(&self, k: usize) -> Polynomial<K> {
        let mut p = Polynomial::zero(self.nvars + k);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; k];
            e2.extend_from_slice(e);
            p.terms.insert(e2, c.clone());
        }
        p
    }

    /// Drop the first `k` variables (each must have exponent 0 everywhere).
    pub fn unshift_vars_front(&self, k: usize) -> Polynomial<K> {
        let mut p = Polynomial::zero(self.nvars - k);
        for (e, c) in &self.terms {
            assert!(e[..k].iter().all(|&x| x == 0));
            p.terms.insert(e[k..].to_vec(), c.clone());
        }
        p
    }

    /// Total degree in the variables with index ≥ `from`.
    pub fn degree_in_tail(&self, from: usize) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e[from..].iter().map(|&x| x as u64).sum())
            .max()
    }

    /// Exact division; panics if `d` does not divide `self` exactly.
    /// Used by fraction-free elimination where divisibility is guaranteed.
    pub fn div_exact(&self, d: &Self, ord: MonomialOrder) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let (de, dc) = d.lead_term(ord).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        while !rem.is_zero() {
            let (re, rc) = rem
                .lead_term(ord)
                .map(|(e, c)| (e.clone(), c.clone()))
                .unwrap();
            let q = crate::order::exp_div(&re, &de).expect("inexact polynomial division");
            let qc = rc / dc.clone();
            quot.add_term(q.clone(), qc.clone());
            rem = rem - d.mul_monomial(&q, &qc);
        }
        quot
    }

    /// Canonical rendering: terms sorted descending by `ord`, explicit `*`
    /// and `^`, coefficients printed exactly.
    pub fn render(&self, ring: &Ring, ord: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut exps: Vec<&Exponents> = self.terms.keys().collect();
        exps.sort_by(|a, b| ord.cmp(b, a));
        let mut out = String::new();
        for (i, e) in exps.iter().enumerate() {
            let c = &self.terms[*e];
            let cs = format!("{c}");
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const_mono = e.iter().all(|&x| x == 0);
            if mag != "1" || is_const_mono {
                factors.push(mag);
            }
            for (v, &x) in e.iter().enumerate() {
                if x == 1 {
                    factors.push(ring.var_name(v).to_string());
                } else if x > 1 {
                    factors.push(format!("{}^{}", ring.var_name(v), x));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl<K: Scalar> Add for Polynomial<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        // the zero polynomial is arity-agnostic
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return rhs;
        }
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self;
        for (e, c) in rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl<K: Scalar> Sub for Polynomial<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<K: Scalar> Neg for Polynomial<K> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms {
            out.terms.insert(e, -c);
        }
        out
    }
}

impl<K: Scalar> Mul for Polynomial<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        (&self) * (&rhs)
    }
}

impl<K: Scalar> Mul for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn mul(self, rhs: &Polynomial<K>) -> Polynomial<K> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.nvars.max(rhs.nvars));
        }
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(exp_mul(e1, e2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<K: Scalar> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display without variable names; prefer `render` with a ring.
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*x^{e:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
