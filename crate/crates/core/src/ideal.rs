//! Ideals: Gröbner bases, normal forms with division certificates,
//! quotients, saturation, determinantal ideals, and codimension.

use crate::gb::{module_gb, normal_form_certified, ColumnSpan, VecPoly};
use crate::matrix::PolyMat;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use std::cell::RefCell;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealError {
    RingMismatch,
    ZeroIdeal(&'static str),
    OutOfRange(&'static str),
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealError::RingMismatch => write!(f, "ring mismatch"),
            IdealError::ZeroIdeal(ctx) => write!(f, "zero ideal not allowed: {ctx}"),
            IdealError::OutOfRange(ctx) => write!(f, "argument out of range: {ctx}"),
        }
    }
}

impl std::error::Error for IdealError {}

/// Ideal with its generators and a per-order cache of reduced Gröbner bases.
#[derive(Clone, Debug)]
pub struct Ideal<K: Scalar> {
    ring: Ring,
    gens: Vec<Polynomial<K>>,
    /// set when zero generators were silently dropped on construction
    pub dropped_zero_generators: bool,
    cache: RefCell<Vec<(MonomialOrder, Vec<Polynomial<K>>)>>,
}

impl<K: Scalar> Ideal<K> {
    pub fn new(ring: &Ring, gens: Vec<Polynomial<K>>) -> Self {
        let before = gens.len();
        let gens: Vec<Polynomial<K>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert_eq!(g.nvars(), ring.nvars(), "ring mismatch");
        }
        Ideal {
            ring: ring.clone(),
            dropped_zero_generators: gens.len() != before,
            gens,
            cache: RefCell::new(Vec::new()),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial<K>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Gröbner basis, leading coefficients 1, cached per order.
    pub fn groebner_basis(&self, ord: MonomialOrder) -> Vec<Polynomial<K>> {
        if let Some((_, gb)) = self
            .cache
            .borrow()
            .iter()
            .find(|(o, _)| *o == ord)
        {
            return gb.clone();
        }
        let vecs: Vec<VecPoly<K>> = self
            .gens
            .iter()
            .map(|g| VecPoly::from_entries(1, vec![(0, g.clone())]))
            .collect();
        let gb: Vec<Polynomial<K>> = module_gb(&vecs, ord)
            .into_iter()
            .map(|v| v.comp(0))
            .collect();
        self.cache.borrow_mut().push((ord, gb.clone()));
        gb
    }

    pub fn contains(&self, f: &Polynomial<K>, ord: MonomialOrder) -> bool {
        normal_form(f, &self.groebner_basis(ord), ord).is_zero()
    }

    /// I : g, computed from the syzygies of [g | gens].
    pub fn quotient_by_poly(&self, g: &Polynomial<K>, ord: MonomialOrder) -> Ideal<K> {
        assert!(!g.is_zero());
        let mut cols = vec![VecPoly::from_entries(1, vec![(0, g.clone())])];
        for f in &self.gens {
            cols.push(VecPoly::from_entries(1, vec![(0, f.clone())]));
        }
        let span = ColumnSpan::new(&cols, 1, self.ring.nvars(), ord);
        let quots: Vec<Polynomial<K>> = span
            .syzygies()
            .into_iter()
            .map(|s| s.comp(0))
            .filter(|p| !p.is_zero())
            .collect();
        Ideal::new(&self.ring, quots)
    }

    /// Intersection via the t-trick: eliminate t from t·I + (1−t)·J.
    pub fn intersect(&self, other: &Ideal<K>, ord: MonomialOrder) -> Ideal<K> {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let ext = self.ring.extend_front(&["__t"]);
        let n = ext.nvars();
        let t = Polynomial::<K>::var(n, 0);
        let one_minus_t = Polynomial::one(n) - t.clone();
        let mut gens: Vec<Polynomial<K>> = Vec::new();
        for f in &self.gens {
            gens.push(&t * &f.shift_vars_front(1));
        }
        for f in &other.gens {
            gens.push(&one_minus_t * &f.shift_vars_front(1));
        }
        let tmp = Ideal::new(&ext, gens);
        let gb = tmp.groebner_basis(MonomialOrder::Elim(1));
        let kept: Vec<Polynomial<K>> = gb
            .into_iter()
            .filter(|g| g.degree_in_head(1) == 0)
            .map(|g| g.unshift_vars_front(1))
            .collect();
        let _ = ord;
        Ideal::new(&self.ring, kept)
    }

    /// I : J = ∩_g (I : g).
    pub fn quotient(&self, other: &Ideal<K>, ord: MonomialOrder) -> Ideal<K> {
        assert!(!other.is_zero(), "quotient by zero ideal");
        let mut acc: Option<Ideal<K>> = None;
        for g in &other.gens {
            let q = self.quotient_by_poly(g, ord);
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q, ord),
            });
        }
        acc.unwrap()
    }

    /// Saturation I : J^∞ by iterated quotients.
    pub fn saturate(&self, other: &Ideal<K>, ord: MonomialOrder) -> Result<Ideal<K>, IdealError> {
        if other.is_zero() {
            return Err(IdealError::ZeroIdeal("saturation by zero ideal"));
        }
        let mut cur = self.clone();
        loop {
            let next = cur.quotient(other, ord);
            if cur.equals(&next, ord) {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Equality as ideals: two-way membership of generators.
    pub fn equals(&self, other: &Ideal<K>, ord: MonomialOrder) -> bool {
        other.gens.iter().all(|g| self.contains(g, ord))
            && self.gens.iter().all(|g| other.contains(g, ord))
    }

    pub fn contains_ideal(&self, other: &Ideal<K>, ord: MonomialOrder) -> bool {
        other.gens.iter().all(|g| self.contains(g, ord))
    }

    pub fn is_unit(&self, ord: MonomialOrder) -> bool {
        self.contains(&Polynomial::one(self.ring.nvars()), ord)
    }

    /// Codimension of the zero locus, read off from the leading-term ideal
    /// via maximal independent variable sets. The unit ideal returns N+1 as
    /// the "empty locus" sentinel; the zero ideal reports codimension 0 with
    /// a flag.
    pub fn codim(&self, ord: MonomialOrder) -> Codim {
        let n = self.ring.nvars();
        if self.is_zero() {
            return Codim {
                value: 0,
                zero_ideal: true,
            };
        }
        let gb = self.groebner_basis(ord);
        let leads: Vec<Vec<u32>> = gb
            .iter()
            .map(|g| g.lead_exp(ord).unwrap().clone())
            .collect();
        if leads.iter().any(|e| e.iter().all(|&x| x == 0)) {
            return Codim {
                value: n + 1,
                zero_ideal: false,
            };
        }
        // dim = size of the largest variable set containing no lead support
        let mut dim = 0usize;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if size <= dim {
                continue;
            }
            let independent = leads.iter().all(|e| {
                // support of e not contained in the candidate set
                e.iter()
                    .enumerate()
                    .any(|(i, &x)| x > 0 && (mask >> i) & 1 == 0)
            });
            if independent {
                dim = size;
            }
        }
        Codim {
            value: n - dim,
            zero_ideal: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Codim {
    pub value: usize,
    pub zero_ideal: bool,
}

/// Remainder of full multivariate division of `f` by the list `basis`.
pub fn normal_form<K: Scalar>(
    f: &Polynomial<K>,
    basis: &[Polynomial<K>],
    ord: MonomialOrder,
) -> Polynomial<K> {
    normal_form_with_quotients(f, basis, ord).0
}

/// Division with certificate: f = Σ q_i·basis_i + r exactly.
pub fn normal_form_with_quotients<K: Scalar>(
    f: &Polynomial<K>,
    basis: &[Polynomial<K>],
    ord: MonomialOrder,
) -> (Polynomial<K>, Vec<Polynomial<K>>) {
    let v = VecPoly::from_entries(1, vec![(0, f.clone())]);
    let gens: Vec<VecPoly<K>> = basis
        .iter()
        .map(|g| VecPoly::from_entries(1, vec![(0, g.clone())]))
        .collect();
    let (r, q) = normal_form_certified(&v, &gens, ord);
    (r.comp(0), q)
}

/// Ideal generated by the r×r minors of a matrix.
pub fn minors_ideal<K: Scalar>(
    ring: &Ring,
    a: &PolyMat<K>,
    r: usize,
) -> Result<Ideal<K>, IdealError> {
    if r > a.nrows().min(a.ncols()) {
        return Err(IdealError::OutOfRange("minor size exceeds matrix size"));
    }
    Ok(Ideal::new(ring, a.minors(r)))
}

impl<K: Scalar> Polynomial<K> {
    /// Total degree in the first `k` variables.
    pub fn degree_in_head(&self, k: usize) -> u64 {
        self.terms()
            .map(|(e, _)| e[..k].iter().map(|&x| x as u64).sum())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::Rat;
    use num_traits::One;

    fn ring2() -> Ring {
        // two plain variables, as in the hand-checked instances
        Ring::new(&["x", "y"], &[]).unwrap()
    }

    fn ringzw() -> Ring {
        Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal<Rat> {
        Ideal::new(
            r,
            gens.iter().map(|s| parse_poly(r, s).unwrap()).collect(),
        )
    }

    const ORD: MonomialOrder = MonomialOrder::DegRevLex;

    #[test]
    fn normal_form_examples() {
        let r = ring2();
        let i = ideal(&r, &["x^2 - y", "y^2"]);
        let gb = i.groebner_basis(ORD);
        let f = parse_poly::<Rat>(&r, "x^2 - y").unwrap();
        assert!(normal_form(&f, &gb, ORD).is_zero());
        // x^3 reduces to x*y: hand Buchberger on the two-variable instance
        let f = parse_poly::<Rat>(&r, "x^3").unwrap();
        assert_eq!(
            normal_form(&f, &gb, ORD),
            parse_poly::<Rat>(&r, "x*y").unwrap()
        );
    }

    #[test]
    fn monomial_gb_already_reduced() {
        let r = ringzw();
        let i = ideal(&r, &["w1^2", "w2^2", "w1*w2"]);
        let gb = i.groebner_basis(ORD);
        let expect: Vec<Polynomial<Rat>> = ["w1^2", "w1*w2", "w2^2"]
            .iter()
            .map(|s| parse_poly(&r, s).unwrap())
            .collect();
        let mut got = gb.clone();
        got.sort_by_key(|p| p.render(&r, ORD));
        let mut want = expect.clone();
        want.sort_by_key(|p| p.render(&r, ORD));
        assert_eq!(got, want);
        // idempotence: re-running returns an equal set
        let again = Ideal::new(&r, gb.clone()).groebner_basis(ORD);
        assert_eq!(gb.len(), again.len());
        for g in &again {
            assert!(gb.contains(g));
        }
    }

    #[test]
    fn lex_buchberger_two_vars() {
        let r = ring2();
        let i = ideal(&r, &["x^2 - y", "y^2"]);
        let gb = i.groebner_basis(MonomialOrder::Lex);
        // hand Buchberger: {x^2 - y, y^2}
        assert_eq!(gb.len(), 2);
        assert!(i.contains(&parse_poly::<Rat>(&r, "y^2").unwrap(), MonomialOrder::Lex));
    }

    #[test]
    fn saturation_examples() {
        let r = ring2();
        let i = ideal(&r, &["x*y"]);
        let j = ideal(&r, &["x"]);
        let s = i.saturate(&j, ORD).unwrap();
        assert!(s.equals(&ideal(&r, &["y"]), ORD));

        let rzw = ringzw();
        let i = ideal(&rzw, &["w1^2", "w1*w2", "w2^2"]);
        let j = ideal(&rzw, &["w1", "w2"]);
        let s = i.saturate(&j, ORD).unwrap();
        assert!(s.is_unit(ORD), "support is w = 0, saturation is the unit ideal");

        // identity case: I : <1>^inf = I
        let one = ideal(&rzw, &["1"]);
        let s = i.saturate(&one, ORD).unwrap();
        assert!(s.equals(&i, ORD));
    }

    #[test]
    fn saturation_idempotent() {
        let r = ring2();
        let i = ideal(&r, &["x^2*y", "x*y^2"]);
        let j = ideal(&r, &["x"]);
        let s1 = i.saturate(&j, ORD).unwrap();
        let s2 = s1.saturate(&j, ORD).unwrap();
        assert!(s1.equals(&s2, ORD));
    }

    #[test]
    fn codim_examples() {
        let r = ringzw();
        assert_eq!(ideal(&r, &["w1", "w2"]).codim(ORD).value, 2);
        assert_eq!(ideal(&r, &["w1^2", "w1*w2", "w2^2"]).codim(ORD).value, 2);
        assert_eq!(ideal(&r, &["1"]).codim(ORD).value, 5);
        let z = Ideal::<Rat>::new(&r, vec![]);
        let c = z.codim(ORD);
        assert_eq!(c.value, 0);
        assert!(c.zero_ideal);
    }

    #[test]
    fn minors_examples() {
        let r = ringzw();
        let p = |s: &str| parse_poly::<Rat>(&r, s).unwrap();
        let a = PolyMat::from_rows(4, vec![vec![p("w1"), p("w2")], vec![p("0"), p("w1")]]);
        let m2 = minors_ideal(&r, &a, 2).unwrap();
        assert!(m2.equals(&ideal(&r, &["w1^2"]), ORD));
        let m0 = minors_ideal(&r, &a, 0).unwrap();
        assert!(m0.is_unit(ORD));
        let row = PolyMat::from_rows(4, vec![vec![p("w1^2"), p("w1*w2"), p("w2^2")]]);
        let m1 = minors_ideal(&r, &row, 1).unwrap();
        assert!(m1.equals(&ideal(&r, &["w1^2", "w1*w2", "w2^2"]), ORD));
        assert!(minors_ideal(&r, &row, 2).is_err());
    }

    #[test]
    fn division_certificate() {
        let r = ringzw();
        let i = ideal(&r, &["w1^2", "w1*w2", "w2^2"]);
        let gb = i.groebner_basis(ORD);
        let f = parse_poly::<Rat>(&r, "z1*w1^2 + w2^3 + z2^2 + w1").unwrap();
        let (rem, q) = normal_form_with_quotients(&f, &gb, ORD);
        let mut acc = rem.clone();
        for (qi, gi) in q.iter().zip(gb.iter()) {
            acc = acc + qi * gi;
        }
        assert_eq!(acc, f);
    }

    #[test]
    fn membership_order_independent() {
        let r = ring2();
        let i = ideal(&r, &["x^2 - y", "y^2"]);
        for f in ["x^4", "x^2*y - y^2", "x^3 + x"] {
            let f = parse_poly::<Rat>(&r, f).unwrap();
            let m1 = i.contains(&f, MonomialOrder::DegRevLex);
            let m2 = i.contains(&f, MonomialOrder::Lex);
            assert_eq!(m1, m2);
        }
    }

    #[test]
    fn buchberger_criterion_holds() {
        // every S-polynomial of an emitted basis reduces to zero
        let r = ringzw();
        let i = ideal(&r, &["w1^2 + z1*w2", "w1*w2 - z2^2", "w2^3"]);
        let gb = i.groebner_basis(ORD);
        for a in 0..gb.len() {
            for b in (a + 1)..gb.len() {
                let la = gb[a].lead_exp(ORD).unwrap().clone();
                let lb = gb[b].lead_exp(ORD).unwrap().clone();
                let l = crate::order::exp_lcm(&la, &lb);
                let qa = crate::order::exp_div(&l, &la).unwrap();
                let qb = crate::order::exp_div(&l, &lb).unwrap();
                let ca = gb[a].lead_term(ORD).unwrap().1.clone();
                let cb = gb[b].lead_term(ORD).unwrap().1.clone();
                let s = gb[a].mul_monomial(&qa, &(Rat::one() / ca))
                    - gb[b].mul_monomial(&qb, &(Rat::one() / cb));
                assert!(normal_form(&s, &gb, ORD).is_zero());
            }
        }
    }
}
