//! Symbolic Coleff–Herrera current expressions supported on {w = 0}.
//!
//! A term c·q·dx_S ∧ ∂̄(1/w_1^{β_1+1}) ∧ ⋯ stores its form label as a
//! bitmask and the residue exponents per w-variable; the canonical order of
//! factors is ascending dx indices followed by ascending ∂̄ factors. The
//! normalization constant (2πi)^κ is absorbed so that evaluation is exactly
//! the Taylor-coefficient functional.

use crate::forms::{label_indices, merge_sign, render_label, FormBasis, Label};
use crate::gb::VecPoly;
use crate::ideal::Ideal;
use crate::order::MonomialOrder;
use crate::parse::{parse_poly, ParseError};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One term: coefficient, form label, and ∂̄-exponents (None where the
/// factor ∂̄(1/w_k^{·}) is absent, Some(β) for ∂̄(1/w_k^{β+1})).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChTerm<K: Scalar> {
    pub coef: Polynomial<K>,
    pub label: Label,
    pub dbars: Vec<Option<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChExpr<K: Scalar> {
    pub ring: Ring,
    pub terms: Vec<ChTerm<K>>,
}

/// Sign relating the canonical factor order dw_1∧⋯∧dw_κ ∧ ∂̄⋯ to the
/// ∂̄(dw_1/w^{·}) ∧ ∂̄(dw_2/w^{·}) ⋯ convention: (−1)^{κ(κ+1)/2}.
pub fn grymta_sign<K: Scalar>(kappa: usize) -> K {
    if (kappa * (kappa + 1) / 2) % 2 == 0 {
        K::one()
    } else {
        -K::one()
    }
}

/// Form-valued polynomial data on Z: z-coefficients per label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZForm<K: Scalar> {
    pub ring: Ring,
    pub comps: BTreeMap<Label, Polynomial<K>>,
}

impl<K: Scalar> ZForm<K> {
    pub fn zero(ring: &Ring) -> Self {
        ZForm {
            ring: ring.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn add_to(&mut self, label: Label, p: Polynomial<K>) {
        if p.is_zero() {
            return;
        }
        let cur = self.comps.remove(&label);
        let s = match cur {
            Some(q) => q + p,
            None => p,
        };
        if !s.is_zero() {
            self.comps.insert(label, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// The single scalar component when no label is present.
    pub fn scalar(&self) -> Polynomial<K> {
        self.comps
            .get(&0)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.ring.nvars()))
    }

    pub fn component(&self, label: Label) -> Polynomial<K> {
        self.comps
            .get(&label)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.ring.nvars()))
    }

    pub fn render(&self, ord: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(l, p)| {
                if *l == 0 {
                    p.render(&self.ring, ord)
                } else {
                    format!("({}) * {}", p.render(&self.ring, ord), render_label(&self.ring, *l))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<K: Scalar> ChExpr<K> {
    pub fn zero(ring: &Ring) -> Self {
        ChExpr {
            ring: ring.clone(),
            terms: vec![],
        }
    }

    pub fn from_terms(ring: &Ring, terms: Vec<ChTerm<K>>) -> Self {
        ChExpr {
            ring: ring.clone(),
            terms,
        }
        .normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical form: w-powers of the coefficient are absorbed into the
    /// ∂̄-exponents (w_i^m ∂̄(1/w_i^{β+1}) is ∂̄(1/w_i^{β−m+1}) for m ≤ β and
    /// zero otherwise), zero terms are dropped, terms merged and sorted.
    pub fn normalize(&self) -> Self {
        let nz = self.ring.nz();
        let kappa = self.ring.nw();
        let n = self.ring.nvars();
        let mut bucket: BTreeMap<(Label, Vec<Option<u32>>), Polynomial<K>> = BTreeMap::new();
        for t in &self.terms {
            'term: for (e, c) in t.coef.terms() {
                let mut beta = t.dbars.clone();
                let mut rest = e.clone();
                for k in 0..kappa {
                    let m = e[nz + k];
                    if m == 0 {
                        continue;
                    }
                    match beta[k] {
                        None => {} // no ∂̄ factor in w_k: power stays in the coefficient
                        Some(b) => {
                            if m > b {
                                continue 'term; // annihilated
                            }
                            beta[k] = Some(b - m);
                            rest[nz + k] = 0;
                        }
                    }
                }
                let mono = Polynomial::monomial(rest, c.clone());
                let key = (t.label, beta);
                match bucket.remove(&key) {
                    None => {
                        bucket.insert(key, mono);
                    }
                    Some(acc) => {
                        let s = acc + mono;
                        if !s.is_zero() {
                            bucket.insert(key, s);
                        }
                    }
                }
            }
        }
        let terms = bucket
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((label, dbars), coef)| ChTerm { coef, label, dbars })
            .collect();
        let _ = n;
        ChExpr {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.clone());
        ChExpr {
            ring: self.ring.clone(),
            terms,
        }
        .normalize()
    }

    pub fn neg(&self) -> Self {
        ChExpr {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| ChTerm {
                    coef: -t.coef.clone(),
                    label: t.label,
                    dbars: t.dbars.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Multiply by a polynomial (degree-0 factor; no signs involved).
    pub fn mul_poly(&self, q: &Polynomial<K>) -> Self {
        ChExpr {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| ChTerm {
                    coef: &t.coef * q,
                    label: t.label,
                    dbars: t.dbars.clone(),
                })
                .collect(),
        }
        .normalize()
    }

    pub fn scale(&self, c: &K) -> Self {
        ChExpr {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| ChTerm {
                    coef: t.coef.scale(c),
                    label: t.label,
                    dbars: t.dbars.clone(),
                })
                .collect(),
        }
        .normalize()
    }

    /// Wedge q·dx_S ∧ (this expression) from the left.
    pub fn wedge_label_left(&self, s: Label, q: &Polynomial<K>) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            if let Some(sign) = merge_sign(s, t.label) {
                let mut coef = &t.coef * q;
                if sign < 0 {
                    coef = -coef;
                }
                terms.push(ChTerm {
                    coef,
                    label: s | t.label,
                    dbars: t.dbars.clone(),
                });
            }
        }
        ChExpr {
            ring: self.ring.clone(),
            terms,
        }
        .normalize()
    }

    /// φ ∧ (this expression) for a form given on a label basis.
    pub fn wedge_form_left(&self, form: &VecPoly<K>, basis: &FormBasis) -> Self {
        let mut acc = ChExpr::zero(&self.ring);
        for (c, p) in form.iter() {
            acc = acc.add(&self.wedge_label_left(basis.label(c), p));
        }
        acc
    }

    fn assert_full(&self) {
        for t in &self.terms {
            assert!(
                t.dbars.iter().all(|d| d.is_some()),
                "operation requires the full ∂̄-product in every term"
            );
        }
    }

    /// The Taylor-coefficient functional: for each term,
    /// c·q(z)·(1/β!)·(∂^β ψ/∂w^β)|_{w=0}, labels carried along.
    pub fn evaluate(&self, psi: &Polynomial<K>) -> ZForm<K> {
        self.assert_full();
        let nz = self.ring.nz();
        let kappa = self.ring.nw();
        let mut out = ZForm::zero(&self.ring);
        for t in &self.terms {
            let mut d = psi.clone();
            let mut fact = K::one();
            for k in 0..kappa {
                let b = t.dbars[k].unwrap() as u64;
                for _ in 0..b {
                    d = d.derivative(nz + k);
                }
                fact = fact * K::inv_factorial(b);
            }
            let restricted = d.restrict_to_first(nz);
            let val = (&t.coef * &restricted).scale(&fact);
            out.add_to(t.label, val);
        }
        out
    }

    /// Coefficient of ∂̄(dw/w^{α+1}) in the unique decomposition: multiply by
    /// w^α and read the full-dw-degree part.
    pub fn project(&self, alpha: &[u32]) -> ZForm<K> {
        let nz = self.ring.nz();
        let kappa = self.ring.nw();
        assert_eq!(alpha.len(), kappa);
        let shifted = self.mul_w(alpha);
        shifted.assert_full();
        let wmask: Label = (((1u64 << kappa) - 1) as u32) << nz;
        let sigma = grymta_sign::<K>(kappa);
        let mut out = ZForm::zero(&self.ring);
        for t in &shifted.terms {
            if t.label & wmask != wmask {
                continue;
            }
            if t.dbars.iter().any(|d| *d != Some(0)) {
                continue;
            }
            out.add_to(t.label & !wmask, t.coef.scale(&sigma));
        }
        out
    }

    /// Multiply by the monomial w^α.
    pub fn mul_w(&self, alpha: &[u32]) -> Self {
        let nz = self.ring.nz();
        let n = self.ring.nvars();
        let mut e = vec![0u32; n];
        e[nz..].copy_from_slice(alpha);
        self.mul_poly(&Polynomial::monomial(e, K::one()))
    }

    /// Rebuild an expression from its projections; inverse of `project` on
    /// canonical full-product expressions.
    pub fn from_projections(ring: &Ring, parts: &[(Vec<u32>, ZForm<K>)]) -> Self {
        let nz = ring.nz();
        let kappa = ring.nw();
        let wmask: Label = (((1u64 << kappa) - 1) as u32) << nz;
        let sigma = grymta_sign::<K>(kappa);
        let mut terms = Vec::new();
        for (alpha, zf) in parts {
            for (label, coef) in &zf.comps {
                terms.push(ChTerm {
                    coef: coef.scale(&sigma),
                    label: label | wmask,
                    dbars: alpha.iter().map(|&a| Some(a)).collect(),
                });
            }
        }
        ChExpr::from_terms(ring, terms)
    }

    /// Largest ∂̄-exponent that occurs, per w-variable.
    pub fn max_dbar_exponents(&self) -> Vec<u32> {
        let kappa = self.ring.nw();
        let mut m = vec![0u32; kappa];
        for t in &self.terms {
            for k in 0..kappa {
                if let Some(b) = t.dbars[k] {
                    m[k] = m[k].max(b);
                }
            }
        }
        m
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .filter_map(|t| t.coef.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn render(&self, ord: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            let coef = t.coef.render(&self.ring, ord);
            if coef != "1" {
                if t.coef.num_terms() > 1 || coef.starts_with('-') {
                    factors.push(format!("({coef})"));
                } else {
                    factors.push(coef);
                }
            }
            if t.label != 0 {
                factors.push(render_label(&self.ring, t.label));
            }
            let mut dpart = String::new();
            for (k, d) in t.dbars.iter().enumerate() {
                if let Some(b) = d {
                    if !dpart.is_empty() {
                        dpart.push('^');
                    }
                    let name = self.ring.wvar_names()[k].clone();
                    if *b == 0 {
                        let _ = write!(dpart, "dbar(1/{name})");
                    } else {
                        let _ = write!(dpart, "dbar(1/{name}^{})", b + 1);
                    }
                }
            }
            if !dpart.is_empty() {
                factors.push(dpart);
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            out.push_str(&factors.join(" * "));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// O_Z-span comparisons: canonical expressions are ℚ[z]-vectors over the
// finite symbol basis (label, β)
// ---------------------------------------------------------------------------

/// Coordinate chart for a family of canonical full-product expressions.
pub struct ChCoords {
    pub ring: Ring,
    index: BTreeMap<(Label, Vec<u32>), usize>,
}

impl ChCoords {
    pub fn build<K: Scalar>(ring: &Ring, exprs: &[&ChExpr<K>]) -> Self {
        let mut index = BTreeMap::new();
        for e in exprs {
            for t in &e.terms {
                let beta: Vec<u32> = t
                    .dbars
                    .iter()
                    .map(|d| d.expect("span comparison requires full products"))
                    .collect();
                let next = index.len();
                index.entry((t.label, beta)).or_insert(next);
            }
        }
        ChCoords {
            ring: ring.clone(),
            index,
        }
    }

    pub fn rank(&self) -> usize {
        self.index.len()
    }

    /// Coordinates over ℚ[z]; None when the expression uses a symbol
    /// outside this chart.
    pub fn vector<K: Scalar>(&self, e: &ChExpr<K>) -> Option<VecPoly<K>> {
        let nz = self.ring.nz();
        let mut v = VecPoly::zero(self.rank().max(1));
        for t in &e.terms {
            let beta: Vec<u32> = t.dbars.iter().map(|d| d.unwrap()).collect();
            let idx = *self.index.get(&(t.label, beta))?;
            v.add_to(idx, t.coef.truncate_vars(nz));
        }
        Some(v)
    }
}

/// Is `target` a combination of `set` with polynomial z-coefficients?
pub fn ch_span_contains<K: Scalar>(
    ring: &Ring,
    set: &[ChExpr<K>],
    target: &ChExpr<K>,
    ord: MonomialOrder,
) -> bool {
    if target.is_zero() {
        return true;
    }
    let mut all: Vec<&ChExpr<K>> = set.iter().collect();
    all.push(target);
    let coords = ChCoords::build(ring, &all);
    let cols: Vec<VecPoly<K>> = set
        .iter()
        .map(|e| coords.vector(e).unwrap())
        .collect();
    let t = coords.vector(target).unwrap();
    if cols.is_empty() {
        return t.is_zero();
    }
    let span = crate::gb::ColumnSpan::new(&cols, coords.rank(), ring.nz(), ord);
    span.contains(&t)
}

/// Module equality over O_Z with polynomial z-coefficients: two-way
/// containment, generator by generator.
pub fn ch_module_equal<K: Scalar>(
    ring: &Ring,
    a: &[ChExpr<K>],
    b: &[ChExpr<K>],
    ord: MonomialOrder,
) -> bool {
    a.iter().all(|e| ch_span_contains(ring, b, e, ord))
        && b.iter().all(|e| ch_span_contains(ring, a, e, ord))
}

/// Report of the annihilation checks J·e = 0, dJ ∧ e = 0, J^p ∧ e = 0.
#[derive(Clone, Debug)]
pub struct AnnihilationReport {
    pub passed: bool,
    pub witnesses: Vec<String>,
}

pub fn annihilation_test<K: Scalar>(
    e: &ChExpr<K>,
    j: &Ideal<K>,
    forms: &[VecPoly<K>],
    form_basis: Option<&FormBasis>,
    ord: MonomialOrder,
) -> AnnihilationReport {
    let ring = j.ring();
    let mut witnesses = Vec::new();
    for (gi, g) in j.gens().iter().enumerate() {
        let prod = e.mul_poly(g);
        if !prod.is_zero() {
            witnesses.push(format!(
                "generator {gi} does not annihilate: {}",
                prod.render(ord)
            ));
        }
    }
    for (gi, g) in j.gens().iter().enumerate() {
        let mut acc = ChExpr::zero(ring);
        for i in 0..ring.nvars() {
            let d = g.derivative(i);
            if d.is_zero() {
                continue;
            }
            acc = acc.add(&e.wedge_label_left(1 << i, &d));
        }
        if !acc.is_zero() {
            witnesses.push(format!(
                "d(generator {gi}) wedge does not vanish: {}",
                acc.render(ord)
            ));
        }
    }
    if let Some(basis) = form_basis {
        for (fi, f) in forms.iter().enumerate() {
            let prod = e.wedge_form_left(f, basis);
            if !prod.is_zero() {
                witnesses.push(format!(
                    "form generator {fi} wedge does not vanish: {}",
                    prod.render(ord)
                ));
            }
        }
    }
    AnnihilationReport {
        passed: witnesses.is_empty(),
        witnesses,
    }
}

// ---------------------------------------------------------------------------
// textual format: `q(z) * dz[1,2]^dw[1] * dbar(1/w1^2)^dbar(1/w2)`
// ---------------------------------------------------------------------------

/// Parse the canonical CH syntax. Factors may appear in any order inside a
/// term; signs are computed from the graded commutation rules, so the
/// written factor order matters exactly as it does on paper.
pub fn parse_ch<K: Scalar>(ring: &Ring, src: &str) -> Result<ChExpr<K>, ParseError> {
    let mut terms = Vec::new();
    for (sign, chunk) in split_terms(src) {
        let t = parse_term::<K>(ring, chunk, src)?;
        let t = if sign < 0 { neg_term(t) } else { t };
        terms.push(t);
    }
    Ok(ChExpr::from_terms(ring, terms))
}

fn neg_term<K: Scalar>(t: ChTerm<K>) -> ChTerm<K> {
    ChTerm {
        coef: -t.coef,
        label: t.label,
        dbars: t.dbars,
    }
}

/// Split at top-level + and −, respecting (), [] nesting.
fn split_terms(src: &str) -> Vec<(i32, &str)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign = 1i32;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                let chunk = src[start..i].trim();
                if !chunk.is_empty() {
                    out.push((sign, chunk));
                    sign = 1;
                }
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    let chunk = src[start..].trim();
    if !chunk.is_empty() {
        out.push((sign, chunk));
    }
    out
}

/// Split a term at top-level `*`, and at `^` when it acts as a wedge (i.e.
/// directly after a `]` or `)` closing a form or dbar factor; `^` after a
/// variable is a power and belongs to the polynomial coefficient).
fn split_factors(src: &str) -> Vec<&str> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut prev_close = false;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' | b'[' => {
                depth += 1;
                prev_close = false;
            }
            b')' | b']' => {
                depth -= 1;
                prev_close = true;
            }
            b'*' if depth == 0 => {
                out.push(src[start..i].trim());
                start = i + 1;
                prev_close = false;
            }
            b'^' if depth == 0 && prev_close => {
                out.push(src[start..i].trim());
                start = i + 1;
                prev_close = false;
            }
            c if c.is_ascii_whitespace() => {}
            _ => {
                prev_close = false;
            }
        }
    }
    out.push(src[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

fn parse_term<K: Scalar>(ring: &Ring, chunk: &str, full: &str) -> Result<ChTerm<K>, ParseError> {
    let n = ring.nvars();
    let kappa = ring.nw();
    let mut coef = Polynomial::<K>::one(n);
    let mut label: Label = 0;
    let mut dbars: Vec<Option<u32>> = vec![None; kappa];
    let mut sign = 1i32;
    let err = |msg: String| ParseError {
        pos: full.len().saturating_sub(chunk.len()),
        message: msg,
    };
    for f in split_factors(chunk) {
        if let Some(rest) = f.strip_prefix("dbar(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| err("dbar factor must end with )".into()))?;
            let body = inner
                .strip_prefix("1/")
                .ok_or_else(|| err("dbar factor must be 1/w^m".into()))?;
            let (name, exp) = match body.split_once('^') {
                Some((v, e)) => (
                    v,
                    e.parse::<u32>()
                        .map_err(|_| err("malformed dbar exponent".into()))?,
                ),
                None => (body, 1),
            };
            let vi = ring
                .var_index(name)
                .ok_or_else(|| err(format!("unknown variable `{name}` in dbar")))?;
            if vi < ring.nz() {
                return Err(err(format!("dbar factor must use a w-variable, got `{name}`")));
            }
            let k = vi - ring.nz();
            if dbars[k].is_some() {
                // repeated ∂̄ in the same variable annihilates the term
                coef = Polynomial::zero(n);
                continue;
            }
            if exp == 0 {
                return Err(err("dbar exponent must be positive".into()));
            }
            // the new factor passes the ∂̄ factors with larger w-index
            let passes = dbars[k + 1..].iter().filter(|d| d.is_some()).count();
            if passes % 2 == 1 {
                sign = -sign;
            }
            dbars[k] = Some(exp - 1);
        } else if f.starts_with("dz[") || f.starts_with("dw[") {
            let is_z = f.starts_with("dz[");
            let inner = f[3..]
                .strip_suffix(']')
                .ok_or_else(|| err("form factor must end with ]".into()))?;
            for part in inner.split(',') {
                let idx: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| err("malformed form index".into()))?;
                if idx == 0 {
                    return Err(err("form indices are 1-based".into()));
                }
                let vi = if is_z {
                    if idx > ring.nz() {
                        return Err(err(format!("dz index {idx} out of range")));
                    }
                    idx - 1
                } else {
                    if idx > kappa {
                        return Err(err(format!("dw index {idx} out of range")));
                    }
                    ring.w_index(idx - 1)
                };
                if label >> vi & 1 == 1 {
                    coef = Polynomial::zero(n);
                    continue;
                }
                // dx_vi moves left past every ∂̄ factor and the larger dx's
                let mut passes = dbars.iter().filter(|d| d.is_some()).count();
                passes += label_indices(label).iter().filter(|&&i| i > vi).count();
                if passes % 2 == 1 {
                    sign = -sign;
                }
                label |= 1 << vi;
            }
        } else {
            let p = parse_poly::<K>(ring, f)?;
            coef = &coef * &p;
        }
    }
    if sign < 0 {
        coef = -coef;
    }
    Ok(ChTerm { coef, label, dbars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::One;

    const ORD: MonomialOrder = MonomialOrder::DegRevLex;

    fn ring() -> Ring {
        Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap()
    }

    fn ch(r: &Ring, s: &str) -> ChExpr<Rat> {
        parse_ch(r, s).unwrap()
    }

    fn poly(r: &Ring, s: &str) -> Polynomial<Rat> {
        parse_poly(r, s).unwrap()
    }

    #[test]
    fn normalize_shift_and_annihilate() {
        let r = ring();
        let e = ch(&r, "w1 * dbar(1/w1^2)");
        assert_eq!(e, ch(&r, "dbar(1/w1)"));
        let e = ch(&r, "w1^2 * dbar(1/w1^2)");
        assert!(e.is_zero());
    }

    #[test]
    fn normalize_mixed_coefficient() {
        let r = ring();
        // (z1 w2 − z2 w1)·∂̄(1/w1²)∧∂̄(1/w2²)
        let e = ch(&r, "(z1*w2 - z2*w1) * dbar(1/w1^2)^dbar(1/w2^2)");
        let want = ch(&r, "z1 * dbar(1/w1^2)^dbar(1/w2) - z2 * dbar(1/w1)^dbar(1/w2^2)");
        assert_eq!(e, want);
    }

    #[test]
    fn normalize_idempotent() {
        let r = ring();
        let e = ch(&r, "(z1*w2 - z2*w1 + w1*w2) * dz[1] * dbar(1/w1^2)^dbar(1/w2^2)");
        assert_eq!(e.normalize(), e);
    }

    #[test]
    fn evaluate_examples() {
        let r = ring();
        // ∂̄(1/w1²)∧∂̄(1/w2), ψ = w1 + w1w2 + w2² → 1
        let e = ch(&r, "dbar(1/w1^2)^dbar(1/w2)");
        let psi = poly(&r, "w1 + w1*w2 + w2^2");
        assert_eq!(e.evaluate(&psi).scalar(), poly(&r, "1"));
        // delta at w = 0
        let e = ch(&r, "dbar(1/w1)^dbar(1/w2)");
        assert_eq!(e.evaluate(&poly(&r, "1")).scalar(), poly(&r, "1"));
        // (1/2!)·∂²(w1² z1)/∂w1² = z1
        let e = ch(&r, "dbar(1/w1^3)^dbar(1/w2)");
        assert_eq!(e.evaluate(&poly(&r, "w1^2*z1")).scalar(), poly(&r, "z1"));
    }

    #[test]
    fn evaluate_is_linear() {
        let r = ring();
        let e = ch(&r, "z1 * dz[1] * dbar(1/w1^2)^dbar(1/w2^3)");
        let f = poly(&r, "w1*w2^2 + z2*w1");
        let g = poly(&r, "w2^2 + z1^3");
        let a = Rat::new(3.into(), 2.into());
        let b = Rat::new((-1).into(), 5.into());
        let lhs = e.evaluate(&(f.scale(&a) + g.scale(&b)));
        let mut rhs = ZForm::zero(&r);
        for (l, p) in e.evaluate(&f).comps {
            rhs.add_to(l, p.scale(&a));
        }
        for (l, p) in e.evaluate(&g).comps {
            rhs.add_to(l, p.scale(&b));
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_adjoint_property() {
        // evaluate(normalize(w^m · e), ψ) = evaluate(e, w^m · ψ)
        let r = ring();
        let e = ch(&r, "(z1 + z2) * dbar(1/w1^3)^dbar(1/w2^2)");
        let psi = poly(&r, "w1^2*w2 + z1*w1 + 1");
        for m in [[1u32, 0], [0, 1], [2, 1]] {
            let shifted = e.mul_w(&m);
            let mut e2 = vec![0u32; 4];
            e2[2..].copy_from_slice(&m);
            let wpsi = &Polynomial::monomial(e2, Rat::one()) * &psi;
            assert_eq!(shifted.evaluate(&psi), e.evaluate(&wpsi));
        }
    }

    #[test]
    fn project_examples() {
        let r1 = Ring::new(&["z1"], &["w1", "w2"]).unwrap();
        // z1·∂̄(dw1/w1²)∧∂̄(dw2/w2)∧dz: written in paper order
        let e = ch(&r1, "z1 * dbar(1/w1^2)^dw[1]^dbar(1/w2)^dw[2]^dz[1]");
        let p = e.project(&[1, 0]);
        assert_eq!(p.component(1), parse_poly::<Rat>(&r1, "z1").unwrap());
        // α = (0,0) picks the δ-part
        let e = ch(&r1, "dbar(1/w1)^dw[1]^dbar(1/w2)^dw[2]^dz[1]");
        assert_eq!(
            e.project(&[0, 0]).component(1),
            parse_poly::<Rat>(&r1, "1").unwrap()
        );
        // α above every exponent gives zero
        assert!(e.project(&[3, 0]).is_zero());
    }

    #[test]
    fn grymta_roundtrip() {
        let r = ring();
        let e = ch(
            &r,
            "(z1^2 - z2) * dz[1]^dw[1,2] * dbar(1/w1^2)^dbar(1/w2) + z2 * dz[2]^dw[1,2] * dbar(1/w1)^dbar(1/w2^3)",
        );
        let mut parts = Vec::new();
        for a in crate::zmod::w_monomials_below(2, 4) {
            let p = e.project(&a);
            if !p.is_zero() {
                parts.push((a, p));
            }
        }
        let back = ChExpr::from_projections(&r, &parts);
        assert_eq!(back, e);
    }

    #[test]
    fn annihilation_example_71() {
        let r = ring();
        let j = Ideal::new(
            &r,
            vec![poly(&r, "w1^2"), poly(&r, "w2^2"), poly(&r, "w1*w2")],
        );
        // first Barlet generator: ∂̄(dw1/w1)∧∂̄(dw2/w2) with the dz-volume
        let good = ch(&r, "dz[1,2]^dw[1,2] * dbar(1/w1)^dbar(1/w2)");
        let rep = annihilation_test(&good, &j, &[], None, ORD);
        assert!(rep.passed, "{:?}", rep.witnesses);
        // w1·w2·∂̄(dw1/w1²)∧∂̄(dw2/w2²) ≠ 0: the candidate with double poles fails
        let bad = ch(&r, "dz[1,2]^dw[1,2] * dbar(1/w1^2)^dbar(1/w2^2)");
        let rep = annihilation_test(&bad, &j, &[], None, ORD);
        assert!(!rep.passed);
        // the zero expression passes vacuously
        let rep = annihilation_test(&ChExpr::zero(&r), &j, &[], None, ORD);
        assert!(rep.passed);
    }

    #[test]
    fn render_parse_roundtrip() {
        let r = ring();
        for s in [
            "dz[1,2]^dw[1,2] * dbar(1/w1)^dbar(1/w2)",
            "(z1 - 2*z2) * dz[1] * dbar(1/w1^2)^dbar(1/w2)",
            "z1 * dw[2] * dbar(1/w1^3)^dbar(1/w2) + dz[2]^dw[1] * dbar(1/w1)^dbar(1/w2^2)",
        ] {
            let e = ch(&r, s);
            let t = e.render(ORD);
            let back = ch(&r, &t);
            assert_eq!(e, back, "roundtrip failed: {s} → {t}");
        }
    }
}
