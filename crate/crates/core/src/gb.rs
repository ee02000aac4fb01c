//! Gröbner machinery for submodules of free modules R^s.
//!
//! Everything runs through one construction: the columns of a matrix are
//! embedded as a_j ⊕ e_j in R^{s+c} and a reduced Gröbner basis is computed
//! for a block order in which the ambient block dominates. The basis then
//! simultaneously yields a Gröbner basis of the column span, generators of
//! the syzygy module, canonical normal forms, and division certificates
//! (every reduction is self-certifying because elements of the embedded
//! module carry their own coordinate vector).

use crate::order::{exp_coprime, exp_div, exp_divides, exp_lcm, Exponents, MonomialOrder};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Element of a free module R^rank, sparse in the components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecPoly<K: Scalar> {
    rank: usize,
    comps: BTreeMap<usize, Polynomial<K>>,
}

impl<K: Scalar> VecPoly<K> {
    pub fn zero(rank: usize) -> Self {
        VecPoly {
            rank,
            comps: BTreeMap::new(),
        }
    }

    pub fn unit(rank: usize, comp: usize, nvars: usize) -> Self {
        let mut v = Self::zero(rank);
        v.set(comp, Polynomial::one(nvars));
        v
    }

    pub fn from_entries(rank: usize, entries: Vec<(usize, Polynomial<K>)>) -> Self {
        let mut v = Self::zero(rank);
        for (i, p) in entries {
            v.add_to(i, p);
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comp(&self, i: usize) -> Polynomial<K> {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.nvars_hint()))
    }

    fn nvars_hint(&self) -> usize {
        self.comps
            .values()
            .next()
            .map(|p| p.nvars())
            .unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, p: Polynomial<K>) {
        assert!(i < self.rank);
        if p.is_zero() {
            self.comps.remove(&i);
        } else {
            self.comps.insert(i, p);
        }
    }

    pub fn add_to(&mut self, i: usize, p: Polynomial<K>) {
        assert!(i < self.rank);
        if p.is_zero() {
            return;
        }
        let cur = self.comps.remove(&i);
        let s = match cur {
            Some(q) => q + p,
            None => p,
        };
        if !s.is_zero() {
            self.comps.insert(i, s);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Polynomial<K>)> {
        self.comps.iter().map(|(i, p)| (*i, p))
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut v = Self::zero(self.rank);
        for (i, p) in &self.comps {
            v.set(*i, p.scale(c));
        }
        v
    }

    pub fn mul_poly(&self, f: &Polynomial<K>) -> Self {
        let mut v = Self::zero(self.rank);
        for (i, p) in &self.comps {
            v.set(*i, p * f);
        }
        v
    }

    pub fn mul_monomial(&self, e: &[u32], c: &K) -> Self {
        let mut v = Self::zero(self.rank);
        for (i, p) in &self.comps {
            v.set(*i, p.mul_monomial(e, c));
        }
        v
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.rank, rhs.rank);
        let mut v = self.clone();
        for (i, p) in &rhs.comps {
            v.add_to(*i, p.clone());
        }
        v
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.rank, rhs.rank);
        let mut v = self.clone();
        for (i, p) in &rhs.comps {
            v.add_to(*i, -p.clone());
        }
        v
    }

    pub fn neg(&self) -> Self {
        let mut v = Self::zero(self.rank);
        for (i, p) in &self.comps {
            v.set(*i, -p.clone());
        }
        v
    }

    /// Restrict to components `[lo, hi)`, reindexed to start at 0.
    pub fn slice(&self, lo: usize, hi: usize) -> VecPoly<K> {
        let mut v = VecPoly::zero(hi - lo);
        for (i, p) in &self.comps {
            if *i >= lo && *i < hi {
                v.set(*i - lo, p.clone());
            }
        }
        v
    }

    /// Embed into a larger free module with components shifted by `offset`.
    pub fn embed(&self, rank: usize, offset: usize) -> VecPoly<K> {
        let mut v = VecPoly::zero(rank);
        for (i, p) in &self.comps {
            v.set(*i + offset, p.clone());
        }
        v
    }

    pub fn max_total_degree(&self) -> Option<u64> {
        self.comps.values().filter_map(|p| p.total_degree()).max()
    }
}

/// Module monomial order: ambient block (components < split) dominates the
/// certificate block; within a block, term over position with the ring
/// order, ties by smaller component.
#[derive(Clone, Copy, Debug)]
pub struct ModOrder {
    pub ord: MonomialOrder,
    pub split: usize,
}

impl ModOrder {
    pub fn plain(ord: MonomialOrder) -> Self {
        ModOrder {
            ord,
            split: usize::MAX,
        }
    }

    fn block(&self, comp: usize) -> u8 {
        if comp < self.split {
            0
        } else {
            1
        }
    }

    pub fn cmp(&self, a: (usize, &[u32]), b: (usize, &[u32])) -> Ordering {
        match self.block(a.0).cmp(&self.block(b.0)) {
            Ordering::Less => Ordering::Greater, // block 0 dominates
            Ordering::Greater => Ordering::Less,
            Ordering::Equal => match self.ord.cmp(a.1, b.1) {
                Ordering::Equal => b.0.cmp(&a.0), // smaller component is larger
                o => o,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct LeadTerm<K> {
    pub comp: usize,
    pub exp: Exponents,
    pub coeff: K,
}

pub fn lead_term<K: Scalar>(v: &VecPoly<K>, mo: &ModOrder) -> Option<LeadTerm<K>> {
    let mut best: Option<(usize, &Exponents, &K)> = None;
    for (i, p) in v.iter() {
        for (e, c) in p.terms() {
            match &best {
                None => best = Some((i, e, c)),
                Some((bi, be, _)) => {
                    if mo.cmp((i, e), (*bi, be)) == Ordering::Greater {
                        best = Some((i, e, c));
                    }
                }
            }
        }
    }
    best.map(|(comp, exp, coeff)| LeadTerm {
        comp,
        exp: exp.clone(),
        coeff: coeff.clone(),
    })
}

/// Full reduction of `v` against `basis`: repeatedly cancels the largest
/// remaining term divisible by some basis lead. Returns the remainder.
fn reduce_full<K: Scalar>(
    v: &VecPoly<K>,
    basis: &[(VecPoly<K>, LeadTerm<K>)],
    mo: &ModOrder,
) -> VecPoly<K> {
    let mut rem = v.clone();
    'outer: loop {
        // find the mo-largest reducible term of rem
        let mut target: Option<(usize, Exponents, K, usize)> = None;
        for (i, p) in rem.iter() {
            for (e, c) in p.terms() {
                let reducer = basis
                    .iter()
                    .position(|(_, lt)| lt.comp == i && exp_divides(&lt.exp, e));
                if let Some(bi) = reducer {
                    let better = match &target {
                        None => true,
                        Some((ti, te, _, _)) => mo.cmp((i, e), (*ti, te)) == Ordering::Greater,
                    };
                    if better {
                        target = Some((i, e.clone(), c.clone(), bi));
                    }
                }
            }
        }
        match target {
            None => break 'outer,
            Some((_, e, c, bi)) => {
                let (g, lt) = &basis[bi];
                let q = exp_div(&e, &lt.exp).unwrap();
                let factor = c / lt.coeff.clone();
                rem = rem.sub(&g.mul_monomial(&q, &factor));
            }
        }
    }
    rem
}

fn spair<K: Scalar>(
    a: &VecPoly<K>,
    la: &LeadTerm<K>,
    b: &VecPoly<K>,
    lb: &LeadTerm<K>,
) -> VecPoly<K> {
    debug_assert_eq!(la.comp, lb.comp);
    let l = exp_lcm(&la.exp, &lb.exp);
    let qa = exp_div(&l, &la.exp).unwrap();
    let qb = exp_div(&l, &lb.exp).unwrap();
    let fa = K::one() / la.coeff.clone();
    let fb = K::one() / lb.coeff.clone();
    a.mul_monomial(&qa, &fa).sub(&b.mul_monomial(&qb, &fb))
}

fn single_component<K: Scalar>(v: &VecPoly<K>) -> Option<usize> {
    let mut it = v.iter();
    let first = it.next()?.0;
    if it.next().is_some() {
        None
    } else {
        Some(first)
    }
}

/// Buchberger with the chain criterion; the coprimality criterion is applied
/// only to pairs of elements supported in one common component, where it is
/// the classical polynomial case.
pub fn buchberger<K: Scalar>(gens: &[VecPoly<K>], mo: &ModOrder) -> Vec<VecPoly<K>> {
    let mut basis: Vec<(VecPoly<K>, LeadTerm<K>)> = Vec::new();
    for g in gens {
        if let Some(lt) = lead_term(g, mo) {
            basis.push((g.clone(), lt));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j));
        }
    }
    let mut idx = 0;
    while idx < pairs.len() {
        let (i, j) = pairs[idx];
        idx += 1;
        let (li, lj) = (basis[i].1.clone(), basis[j].1.clone());
        if li.comp != lj.comp {
            continue;
        }
        let coprime_ok = exp_coprime(&li.exp, &lj.exp)
            && single_component(&basis[i].0) == Some(li.comp)
            && single_component(&basis[j].0) == Some(li.comp);
        if coprime_ok {
            continue;
        }
        // chain criterion, well-founded form: lt_k divides lcm(i,j) and both
        // sub-lcms are proper divisors, so the (i,j) syzygy descends to
        // strictly smaller pairs
        let l = exp_lcm(&li.exp, &lj.exp);
        let chained = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let lk = &basis[k].1;
            lk.comp == li.comp
                && exp_divides(&lk.exp, &l)
                && exp_lcm(&li.exp, &lk.exp) != l
                && exp_lcm(&lj.exp, &lk.exp) != l
        });
        if chained {
            continue;
        }
        let s = spair(&basis[i].0, &li, &basis[j].0, &lj);
        let r = reduce_full(&s, &basis, mo);
        if let Some(lt) = lead_term(&r, mo) {
            let new = basis.len();
            basis.push((r, lt));
            for k in 0..new {
                pairs.push((k, new));
            }
        }
    }
    interreduce(basis.into_iter().map(|(g, _)| g).collect(), mo)
}

/// Inter-reduce to the reduced Gröbner basis: no term of any element is
/// divisible by the lead of another, leads monic, deterministic order.
fn interreduce<K: Scalar>(mut elems: Vec<VecPoly<K>>, mo: &ModOrder) -> Vec<VecPoly<K>> {
    loop {
        elems.retain(|g| !g.is_zero());
        // drop elements whose lead is divisible by another's lead
        let mut keep: Vec<VecPoly<K>> = Vec::new();
        'next: for (i, g) in elems.iter().enumerate() {
            let lg = lead_term(g, mo).unwrap();
            for (j, h) in elems.iter().enumerate() {
                if i == j {
                    continue;
                }
                let lh = lead_term(h, mo).unwrap();
                let strictly_smaller = lh.comp == lg.comp
                    && exp_divides(&lh.exp, &lg.exp)
                    && (lh.exp != lg.exp || j < i);
                if strictly_smaller {
                    continue 'next;
                }
            }
            keep.push(g.clone());
        }
        // fully reduce tails
        let with_leads: Vec<(VecPoly<K>, LeadTerm<K>)> = keep
            .iter()
            .map(|g| (g.clone(), lead_term(g, mo).unwrap()))
            .collect();
        let mut changed = false;
        let mut out: Vec<VecPoly<K>> = Vec::new();
        for (i, (g, _)) in with_leads.iter().enumerate() {
            let others: Vec<(VecPoly<K>, LeadTerm<K>)> = with_leads
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, x)| x.clone())
                .collect();
            let r = reduce_full(g, &others, mo);
            if r != *g {
                changed = true;
            }
            if !r.is_zero() {
                out.push(r);
            } else {
                changed = true;
            }
        }
        if !changed && out.len() == elems.len() {
            // normalize leads to 1 and sort for reproducibility
            let mut monic: Vec<VecPoly<K>> = out
                .into_iter()
                .map(|g| {
                    let lt = lead_term(&g, mo).unwrap();
                    g.scale(&(K::one() / lt.coeff))
                })
                .collect();
            monic.sort_by(|a, b| {
                let la = lead_term(a, mo).unwrap();
                let lb = lead_term(b, mo).unwrap();
                mo.cmp((la.comp, &la.exp), (lb.comp, &lb.exp))
            });
            return monic;
        }
        elems = out;
    }
}

/// Gröbner basis of the column span of a matrix together with certificates.
///
/// Internally works in R^{amb + ncols}; the first block carries the column,
/// the second its coordinates in the original generators.
pub struct ColumnSpan<K: Scalar> {
    amb: usize,
    ncols: usize,
    nvars: usize,
    mo: ModOrder,
    gb: Vec<(VecPoly<K>, LeadTerm<K>)>,
}

impl<K: Scalar> ColumnSpan<K> {
    pub fn new(cols: &[VecPoly<K>], amb: usize, nvars: usize, ord: MonomialOrder) -> Self {
        let ncols = cols.len();
        let mo = ModOrder { ord, split: amb };
        let embedded: Vec<VecPoly<K>> = cols
            .iter()
            .enumerate()
            .map(|(j, c)| {
                assert_eq!(c.rank(), amb, "column rank mismatch");
                let mut v = c.embed(amb + ncols, 0);
                v.add_to(amb + j, Polynomial::one(nvars));
                v
            })
            .collect();
        let gb = buchberger(&embedded, &mo)
            .into_iter()
            .map(|g| {
                let lt = lead_term(&g, &mo).unwrap();
                (g, lt)
            })
            .collect();
        ColumnSpan {
            amb,
            ncols,
            nvars,
            mo,
            gb,
        }
    }

    /// Normal form of `v` modulo the column span, together with a lift:
    /// v = nf + A·q exactly.
    pub fn reduce(&self, v: &VecPoly<K>) -> (VecPoly<K>, Vec<Polynomial<K>>) {
        assert_eq!(v.rank(), self.amb);
        let emb = v.embed(self.amb + self.ncols, 0);
        let r = reduce_full(&emb, &self.gb, &self.mo);
        let nf = r.slice(0, self.amb);
        let q: Vec<Polynomial<K>> = (0..self.ncols)
            .map(|j| -r.comp(self.amb + j))
            .collect();
        (nf, q)
    }

    pub fn normal_form(&self, v: &VecPoly<K>) -> VecPoly<K> {
        self.reduce(v).0
    }

    pub fn contains(&self, v: &VecPoly<K>) -> bool {
        self.normal_form(v).is_zero()
    }

    /// Express `v` in the original columns if it lies in their span.
    pub fn lift(&self, v: &VecPoly<K>) -> Option<Vec<Polynomial<K>>> {
        let (nf, q) = self.reduce(v);
        if nf.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Generators of the syzygy module of the columns.
    pub fn syzygies(&self) -> Vec<VecPoly<K>> {
        self.gb
            .iter()
            .filter(|(g, _)| g.slice(0, self.amb).is_zero())
            .map(|(g, _)| g.slice(self.amb, self.amb + self.ncols))
            .collect()
    }

    /// Reduced Gröbner basis of the column span itself.
    pub fn image_gb(&self) -> Vec<VecPoly<K>> {
        let raw: Vec<VecPoly<K>> = self
            .gb
            .iter()
            .filter(|(g, _)| !g.slice(0, self.amb).is_zero())
            .map(|(g, _)| g.slice(0, self.amb))
            .collect();
        interreduce(raw, &ModOrder::plain(self.mo.ord))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// Reduced Gröbner basis of a plain submodule of R^rank (no certificates).
pub fn module_gb<K: Scalar>(
    gens: &[VecPoly<K>],
    ord: MonomialOrder,
) -> Vec<VecPoly<K>> {
    buchberger(gens, &ModOrder::plain(ord))
}

/// Normal form against a fixed list (typically a Gröbner basis), with the
/// division certificate: returns (r, q) with v = Σ q_i g_i + r.
pub fn normal_form_certified<K: Scalar>(
    v: &VecPoly<K>,
    gens: &[VecPoly<K>],
    ord: MonomialOrder,
) -> (VecPoly<K>, Vec<Polynomial<K>>) {
    let rank = v.rank();
    let nvars = gens
        .iter()
        .flat_map(|g| g.iter().map(|(_, p)| p.nvars()))
        .next()
        .unwrap_or(0);
    let mo = ModOrder::plain(ord);
    let mut rem = v.clone();
    let mut q: Vec<Polynomial<K>> = vec![Polynomial::zero(nvars.max(1)); gens.len()];
    let leads: Vec<Option<LeadTerm<K>>> = gens.iter().map(|g| lead_term(g, &mo)).collect();
    loop {
        let mut target: Option<(usize, Exponents, K, usize)> = None;
        for (i, p) in rem.iter() {
            for (e, c) in p.terms() {
                let red = leads.iter().position(|lt| match lt {
                    Some(lt) => lt.comp == i && exp_divides(&lt.exp, e),
                    None => false,
                });
                if let Some(bi) = red {
                    let better = match &target {
                        None => true,
                        Some((ti, te, _, _)) => mo.cmp((i, e), (*ti, te)) == Ordering::Greater,
                    };
                    if better {
                        target = Some((i, e.clone(), c.clone(), bi));
                    }
                }
            }
        }
        match target {
            None => break,
            Some((_, e, c, bi)) => {
                let lt = leads[bi].as_ref().unwrap();
                let m = exp_div(&e, &lt.exp).unwrap();
                let factor = c / lt.coeff.clone();
                rem = rem.sub(&gens[bi].mul_monomial(&m, &factor));
                q[bi] = q[bi].clone() + Polynomial::monomial(m, factor);
            }
        }
    }
    debug_assert_eq!(rem.rank(), rank);
    (rem, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::Ring;
    use crate::Rat;

    fn vp(ring: &Ring, rank: usize, entries: &[(usize, &str)]) -> VecPoly<Rat> {
        VecPoly::from_entries(
            rank,
            entries
                .iter()
                .map(|(i, s)| (*i, parse_poly::<Rat>(ring, s).unwrap()))
                .collect(),
        )
    }

    #[test]
    fn koszul_syzygy() {
        let r = Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap();
        let cols = vec![vp(&r, 1, &[(0, "w1")]), vp(&r, 1, &[(0, "w2")])];
        let span = ColumnSpan::new(&cols, 1, 4, MonomialOrder::DegRevLex);
        let syz = span.syzygies();
        assert_eq!(syz.len(), 1);
        // the syzygy must satisfy w1*a + w2*b = 0 exactly
        let s = &syz[0];
        let w1 = parse_poly::<Rat>(&r, "w1").unwrap();
        let w2 = parse_poly::<Rat>(&r, "w2").unwrap();
        let combo = s.comp(0) * w1 + s.comp(1) * w2;
        assert!(combo.is_zero());
    }

    #[test]
    fn reduce_gives_certificate() {
        let r = Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap();
        let cols = vec![
            vp(&r, 1, &[(0, "w1^2")]),
            vp(&r, 1, &[(0, "w1*w2")]),
            vp(&r, 1, &[(0, "w2^2")]),
        ];
        let span = ColumnSpan::new(&cols, 1, 4, MonomialOrder::DegRevLex);
        let v = vp(&r, 1, &[(0, "z1*w1^2*w2 + w2^2 + z2")]);
        let (nf, q) = span.reduce(&v);
        // reconstruct: v = nf + Σ q_j col_j
        let mut acc = nf.clone();
        for (j, col) in cols.iter().enumerate() {
            acc = acc.add(&col.mul_poly(&q[j]));
        }
        assert_eq!(acc, v);
        assert_eq!(
            nf.comp(0).render(&r, MonomialOrder::DegRevLex),
            "z2"
        );
    }

    #[test]
    fn identity_has_no_syzygies() {
        let r = Ring::new(&["z1"], &["w1"]).unwrap();
        let cols = vec![vp(&r, 2, &[(0, "1")]), vp(&r, 2, &[(1, "1")])];
        let span = ColumnSpan::new(&cols, 2, 2, MonomialOrder::DegRevLex);
        assert!(span.syzygies().is_empty());
    }
}
