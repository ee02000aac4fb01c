//! Generators of the Barlet sheaf from the dual complex of a minimal free
//! resolution and a Koszul comparison lift, their conversion to form-valued
//! differential operators, and the complete Noetherian-operator family with
//! its verification harness.

use crate::currents::{ch_span_contains, grymta_sign, ChExpr, ChTerm, ZForm};
use crate::forms::{label_degree, merge_sign, FormBasis, Label};
use crate::gb::{module_gb, normal_form_certified, ColumnSpan, VecPoly};
use crate::homalg::{ext_module, free_resolution, minimalize_from, FreeResolution, HomalgError};
use crate::ideal::Ideal;
use crate::kaehler::{nullstellensatz_exponent, strong_forms, KaehlerError, StrongForms};
use crate::matrix::{subsets_of_size, PolyMat};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::sample::Sampler;
use crate::scalar::Scalar;
use crate::zmod::ZScope;
use std::fmt;

#[derive(Debug, Clone)]
pub enum BarletError {
    Kaehler(KaehlerError),
    Homalg(HomalgError),
    Internal(&'static str),
}

impl fmt::Display for BarletError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarletError::Kaehler(e) => write!(f, "{e}"),
            BarletError::Homalg(e) => write!(f, "{e}"),
            BarletError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for BarletError {}

impl From<KaehlerError> for BarletError {
    fn from(e: KaehlerError) -> Self {
        BarletError::Kaehler(e)
    }
}

impl From<HomalgError> for BarletError {
    fn from(e: HomalgError) -> Self {
        BarletError::Homalg(e)
    }
}

/// Chain map a: (F, g) → (E, f) from the direct sum of Koszul complexes of
/// (w_1^M, …, w_κ^M) to a resolution of Ω^p_X, with a₀ the identity.
#[derive(Clone, Debug)]
pub struct ChainMap<K: Scalar> {
    /// Koszul differentials g_1, …, g_κ
    pub g: Vec<PolyMat<K>>,
    /// comparison maps a_0, …, a_κ
    pub a: Vec<PolyMat<K>>,
}

/// Generators of ker f*_{κ+1} modulo im f*_κ, as row vectors over E_κ.
/// The list generates the quotient over O_Z at the origin (classes of the
/// form w^γ·ξ are pruned by Nakayama).
pub fn dual_kernel_generators<K: Scalar>(
    res: &FreeResolution<K>,
    kappa: usize,
    ord: MonomialOrder,
) -> Result<Vec<VecPoly<K>>, BarletError> {
    let ring = res.ring().clone();
    let n = ring.nvars();
    if res.length() < kappa {
        return Err(BarletError::Internal("resolution shorter than kappa"));
    }
    let ext = ext_module(res, kappa, ord);
    if ext.is_zero {
        return Ok(vec![]);
    }
    let kgens = &ext.gens;
    // bound M_E with w_k^{M_E}·(every class) = 0 in the quotient
    let rels = ext.module.relations();
    let rel_span = ColumnSpan::new(rels.cols(), kgens.len(), n, ord);
    let mut m_e = 1usize;
    'search: loop {
        assert!(m_e < 64, "no annihilating power of w found for Ext classes");
        for k in 0..ring.nw() {
            for i in 0..kgens.len() {
                let mut e = vec![0u32; n];
                e[ring.w_index(k)] = m_e as u32;
                let v = VecPoly::unit(kgens.len(), i, n).mul_monomial(&e, &K::one());
                if !rel_span.contains(&v) {
                    m_e += 1;
                    continue 'search;
                }
            }
        }
        break;
    }
    // truncated O_Z-presentation of the quotient and Nakayama at the origin
    let bound = ring.nw() * (m_e - 1) + 1;
    let scope = ZScope::new(&ring, kgens.len(), bound);
    let rel_gb = module_gb(rels.cols(), ord);
    let rel_cols = scope.relation_cols(&rel_gb);
    let keep = scope.nakayama_keep(&rel_cols);
    let mut out = Vec::new();
    for u in keep {
        let (alpha, comp) = scope.decode(u);
        let mut e = vec![0u32; n];
        e[ring.nz()..].copy_from_slice(alpha);
        out.push(kgens[comp].mul_monomial(&e, &K::one()));
    }
    Ok(out)
}

/// Solve the chain-map equations f_j·a_j = a_{j−1}·g_j against the Koszul
/// complex of (w_1^M, …, w_κ^M) tensored with E₀.
pub fn koszul_lift<K: Scalar>(
    res: &FreeResolution<K>,
    m: usize,
    ord: MonomialOrder,
) -> Result<ChainMap<K>, BarletError> {
    let ring = res.ring().clone();
    let n = ring.nvars();
    let kappa = ring.nw();
    let r0 = res.rank(0);
    if res.length() < kappa {
        return Err(BarletError::Internal("resolution shorter than kappa"));
    }
    // precondition: w_i^M·(each ambient generator) lies in im f₁
    let f1_span = ColumnSpan::new(res.map(1).cols(), r0, n, ord);
    for k in 0..kappa {
        let mut e = vec![0u32; n];
        e[ring.w_index(k)] = m as u32;
        for b in 0..r0 {
            let v = VecPoly::unit(r0, b, n).mul_monomial(&e, &K::one());
            if !f1_span.contains(&v) {
                return Err(BarletError::Internal(
                    "w^M does not annihilate the resolved module",
                ));
            }
        }
    }
    // Koszul differentials tensored with R^{r0}
    let mut g: Vec<PolyMat<K>> = Vec::new();
    for j in 1..=kappa {
        let src = subsets_of_size(kappa, j);
        let dst = subsets_of_size(kappa, j - 1);
        let dst_index = |t: &Vec<usize>| dst.iter().position(|x| x == t).unwrap();
        let mut cols = Vec::new();
        for t in &src {
            for b in 0..r0 {
                let mut col = VecPoly::zero(dst.len() * r0);
                for (pos, &i) in t.iter().enumerate() {
                    let mut t2 = t.clone();
                    t2.remove(pos);
                    let mut e = vec![0u32; n];
                    e[ring.w_index(i)] = m as u32;
                    let c = if pos % 2 == 0 { K::one() } else { -K::one() };
                    col.add_to(dst_index(&t2) * r0 + b, Polynomial::monomial(e, c));
                }
                cols.push(col);
            }
        }
        g.push(PolyMat::new(dst.len() * r0, n, cols));
    }
    // lift: a_0 = identity, f_j a_j = a_{j-1} g_j
    let mut a: Vec<PolyMat<K>> = vec![PolyMat::identity(r0, n)];
    for j in 1..=kappa {
        let fj = res.map(j);
        let span = ColumnSpan::new(fj.cols(), res.rank(j - 1), n, ord);
        let rhs = a[j - 1].mul(&g[j - 1]);
        let mut cols = Vec::new();
        for c in rhs.cols() {
            let q = span
                .lift(c)
                .ok_or(BarletError::Internal("Koszul chain-map lift failed"))?;
            cols.push(VecPoly::from_entries(
                fj.ncols(),
                q.into_iter().enumerate().collect(),
            ));
        }
        a.push(PolyMat::new(fj.ncols(), n, cols));
    }
    // exact verification of the chain-map equations
    for j in 1..=kappa {
        let lhs = res.map(j).mul(&a[j]);
        let rhs = a[j - 1].mul(&g[j - 1]);
        let diff = lhs.clone();
        for jj in 0..rhs.ncols() {
            let d = diff.col(jj).sub(rhs.col(jj));
            if !d.is_zero() {
                return Err(BarletError::Internal("chain-map equation violated"));
            }
        }
    }
    Ok(ChainMap { g, a })
}

/// Everything the Barlet/pairing layer derives from (J, p).
pub struct BarletData<K: Scalar> {
    pub ring: Ring,
    pub p: usize,
    pub kappa: usize,
    /// Nullstellensatz exponent of J
    pub m_nss: usize,
    /// operator order bound: w^α·μ = 0 for |α| ≥ m_op
    pub m_op: usize,
    pub strong: StrongForms<K>,
    pub resolution: FreeResolution<K>,
    pub dual_kernel: Vec<VecPoly<K>>,
    pub chain: ChainMap<K>,
    pub generators: Vec<ChExpr<K>>,
}

/// Barlet-sheaf generators: for each dual-kernel class ξ and each ambient
/// label h, the current ξ·a_κ(h·e) ∧ ∂̄(1/w^M)-product, normalized, closed
/// under multiplication by w-monomials, and pruned to a generating set over
/// polynomial z-coefficients.
pub fn barlet_generators<K: Scalar>(
    j: &Ideal<K>,
    p: usize,
    ord: MonomialOrder,
) -> Result<BarletData<K>, BarletError> {
    let ring = j.ring().clone();
    let n = ring.nvars();
    let kappa_ring = ring.nw();
    let m = nullstellensatz_exponent(j, ord)?;
    let strong = strong_forms(j, p, ord)?;
    let kappa = strong.kappa;
    if kappa != kappa_ring {
        return Err(BarletError::Internal(
            "ideal codimension does not match the number of w-variables",
        ));
    }
    let module = strong.forms.module();
    if module.is_zero_module(ord) {
        let res = free_resolution(&module, 1, ord);
        let chain = ChainMap {
            g: vec![],
            a: vec![],
        };
        return Ok(BarletData {
            ring,
            p,
            kappa,
            m_nss: m,
            m_op: m,
            strong,
            resolution: res,
            dual_kernel: vec![],
            chain,
            generators: vec![],
        });
    }
    let res0 = free_resolution(&module, n + 2, ord);
    if !res0.complete {
        return Err(BarletError::Homalg(HomalgError::IncompleteResolution));
    }
    let res = minimalize_from(&res0, 2);
    let xi = dual_kernel_generators(&res, kappa, ord)?;
    let chain = koszul_lift(&res, m, ord)?;
    let basis = &strong.forms.basis;
    let a_kappa = &chain.a[kappa];
    // base expressions
    let mut candidates: Vec<ChExpr<K>> = Vec::new();
    let full_mask: Label = (1u32 << n) - 1;
    for xi_row in &xi {
        let mut terms: Vec<ChTerm<K>> = Vec::new();
        for (b, &s) in basis.labels().iter().enumerate() {
            // column of a_κ for the top Koszul generator tensored with label b
            let col = a_kappa.col(b);
            let mut c = Polynomial::zero(n);
            for (i, xp) in xi_row.iter() {
                c = c + xp * &col.comp(i);
            }
            if c.is_zero() {
                continue;
            }
            let comp = full_mask & !s;
            let sign = merge_sign(s, comp).expect("complement labels are disjoint");
            let coef = if sign > 0 { c } else { -c };
            terms.push(ChTerm {
                coef,
                label: comp,
                dbars: vec![Some(m as u32 - 1); kappa],
            });
        }
        let e = ChExpr::from_terms(&ring, terms);
        if !e.is_zero() {
            candidates.push(e);
        }
    }
    // close under w-multiplication
    let mut closed: Vec<ChExpr<K>> = Vec::new();
    for e in &candidates {
        for gamma in w_box(kappa, m as u32) {
            let we = e.mul_w(&gamma);
            if !we.is_zero() {
                closed.push(we);
            }
        }
    }
    // sort by (total degree, textual order) and prune greedily
    closed.sort_by_key(|e| (e.total_degree(), e.render(ord)));
    closed.dedup();
    let mut kept: Vec<ChExpr<K>> = Vec::new();
    for e in &closed {
        if !ch_span_contains(&ring, &kept, e, ord) {
            kept.push(e.clone());
        }
    }
    // verify annihilation for every emitted generator
    let jp_cols = strong.forms.presentation.cols();
    for e in &kept {
        let rep = crate::currents::annihilation_test(e, j, jp_cols, Some(basis), ord);
        if !rep.passed {
            return Err(BarletError::Internal(
                "emitted Barlet generator fails annihilation",
            ));
        }
    }
    // operator order bound: smallest M' ≥ m with w^α·μ = 0 for |α| = M'
    let mut m_op = m;
    'mo: loop {
        assert!(m_op < 64, "operator order bound not found");
        for alpha in w_sphere(kappa, m_op as u32) {
            for e in &kept {
                if !e.mul_w(&alpha).is_zero() {
                    m_op += 1;
                    continue 'mo;
                }
            }
        }
        break;
    }
    Ok(BarletData {
        ring,
        p,
        kappa,
        m_nss: m,
        m_op,
        strong,
        resolution: res,
        dual_kernel: xi,
        chain,
        generators: kept,
    })
}

/// All γ with 0 ≤ γ_k < bound componentwise, graded-lex order.
fn w_box(kappa: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..kappa {
        let mut next = Vec::new();
        for v in &out {
            for e in 0..bound {
                let mut v2 = v.clone();
                v2.push(e);
                next.push(v2);
            }
        }
        out = next;
    }
    out.sort_by_key(|v| (v.iter().sum::<u32>(), v.clone()));
    out
}

/// All α with |α| = d.
fn w_sphere(kappa: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(kappa: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == kappa - 1 {
            let mut e = cur.clone();
            e.push(left);
            out.push(e);
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(kappa, left - x, cur, out);
            cur.pop();
        }
    }
    if kappa == 0 {
        return out;
    }
    rec(kappa, d, &mut Vec::new(), &mut out);
    out
}

/// Polynomial-coefficient differential operator acting on p-forms: each
/// term reads one component of the form, differentiates in w, restricts to
/// w = 0, and lands in the dz-volume line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffTerm<K: Scalar> {
    pub coef: Polynomial<K>,
    /// the p-label of the form component this term reads
    pub selector: Label,
    /// derivative orders per w-variable
    pub deriv: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator<K: Scalar> {
    pub ring: Ring,
    pub p: usize,
    pub terms: Vec<DiffTerm<K>>,
}

impl<K: Scalar> DiffOperator<K> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Apply to a p-form and return the z-polynomial coefficient of the
    /// dz-volume form.
    pub fn apply(&self, phi: &VecPoly<K>, basis: &FormBasis) -> Polynomial<K> {
        let nz = self.ring.nz();
        let mut acc = Polynomial::zero(self.ring.nvars());
        for t in &self.terms {
            let comp = phi.comp(basis.index_of(t.selector));
            if comp.is_zero() {
                continue;
            }
            let mut d = comp;
            let mut fact = K::one();
            for (k, &g) in t.deriv.iter().enumerate() {
                for _ in 0..g {
                    d = d.derivative(nz + k);
                }
                fact = fact * K::inv_factorial(g as u64);
            }
            let restricted = d.restrict_to_first(nz);
            acc = acc + (&t.coef * &restricted).scale(&fact);
        }
        acc
    }

    /// Render in wedge/contraction style: the wedge part is the complement
    /// of the selector's dz-part, the contractions are the selector's
    /// dw-part.
    pub fn render(&self, ord: MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let ring = &self.ring;
        let nz = ring.nz();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut fs: Vec<String> = Vec::new();
                let c = t.coef.render(ring, ord);
                if c != "1" {
                    if t.coef.num_terms() > 1 || c.starts_with('-') {
                        fs.push(format!("({c})"));
                    } else {
                        fs.push(c);
                    }
                }
                let wedge: Vec<String> = (0..nz)
                    .filter(|i| t.selector >> i & 1 == 0)
                    .map(|i| (i + 1).to_string())
                    .collect();
                if !wedge.is_empty() {
                    fs.push(format!("dz[{}]", wedge.join(",")));
                }
                let contr: Vec<String> = (nz..ring.nvars())
                    .filter(|i| t.selector >> i & 1 == 1)
                    .map(|i| format!("iota(dw[{}])", i - nz + 1))
                    .collect();
                fs.extend(contr);
                for (k, &g) in t.deriv.iter().enumerate() {
                    if g > 0 {
                        let name = &ring.wvar_names()[k];
                        if g == 1 {
                            fs.push(format!("d/d{name}"));
                        } else {
                            fs.push(format!("(1/{}!)*d^{g}/d{name}^{g}", g));
                        }
                    }
                }
                if fs.is_empty() {
                    fs.push("restrict".into());
                }
                fs.join(" * ")
            })
            .collect();
        parts.join(" + ")
    }
}

/// Operator L_{·,α} induced by a current: φ ↦ π_*(w^α φ ∧ μ) in the fixed
/// normalization (equals `project(φ∧μ, α)` exactly).
pub fn operator_from_current<K: Scalar>(
    ring: &Ring,
    p: usize,
    mu: &ChExpr<K>,
    alpha: &[u32],
) -> DiffOperator<K> {
    let n = ring.nvars();
    let kappa = ring.nw();
    let full_mask: Label = (1u32 << n) - 1;
    let sigma = grymta_sign::<K>(kappa);
    let mut terms = Vec::new();
    for t in &mu.terms {
        if label_degree(t.label) != n - p {
            continue;
        }
        let selector = full_mask & !t.label;
        let mut deriv = Vec::with_capacity(kappa);
        let mut ok = true;
        for (k, d) in t.dbars.iter().enumerate() {
            let b = d.expect("operator construction requires full products");
            if b < alpha[k] {
                ok = false;
                break;
            }
            deriv.push(b - alpha[k]);
        }
        if !ok {
            continue;
        }
        let sign = merge_sign(selector, t.label).expect("complement labels");
        let mut coef = t.coef.scale(&sigma);
        if sign < 0 {
            coef = -coef;
        }
        if coef.is_zero() {
            continue;
        }
        terms.push(DiffTerm {
            coef,
            selector,
            deriv,
        });
    }
    // merge terms with identical selector and derivative
    terms.sort_by_key(|t| (t.selector, t.deriv.clone()));
    let mut merged: Vec<DiffTerm<K>> = Vec::new();
    for t in terms {
        if let Some(last) = merged.last_mut() {
            if last.selector == t.selector && last.deriv == t.deriv {
                last.coef = last.coef.clone() + t.coef;
                continue;
            }
        }
        merged.push(t);
    }
    merged.retain(|t| !t.coef.is_zero());
    DiffOperator {
        ring: ring.clone(),
        p,
        terms: merged,
    }
}

/// to_diff_operators: the α = 0 dictionary applied to each generator.
pub fn to_diff_operators<K: Scalar>(
    ring: &Ring,
    p: usize,
    gens: &[ChExpr<K>],
) -> Vec<DiffOperator<K>> {
    let kappa = ring.nw();
    gens.iter()
        .map(|mu| operator_from_current(ring, p, mu, &vec![0; kappa]))
        .collect()
}

/// One labelled Noetherian operator L_{j,α}.
#[derive(Clone, Debug)]
pub struct NoetherianOperator<K: Scalar> {
    pub gen_index: usize,
    pub alpha: Vec<u32>,
    pub op: DiffOperator<K>,
}

/// The complete family {L_{j,α} : j over generators, |α| < m_op}.
pub fn noetherian_operators<K: Scalar>(data: &BarletData<K>) -> Vec<NoetherianOperator<K>> {
    let mut out = Vec::new();
    for alpha in crate::zmod::w_monomials_below(data.kappa, data.m_op) {
        for (gi, mu) in data.generators.iter().enumerate() {
            out.push(NoetherianOperator {
                gen_index: gi,
                alpha: alpha.clone(),
                op: operator_from_current(&data.ring, data.p, mu, &alpha),
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CompletenessReport {
    pub trials_members: usize,
    pub trials_nonmembers: usize,
    /// (trial index, operator index) pairs where a member was not annihilated
    pub member_failures: Vec<(usize, usize)>,
    /// trial indices where no operator detected a certified non-member
    pub nonmember_failures: Vec<usize>,
}

impl CompletenessReport {
    pub fn passed(&self) -> bool {
        self.member_failures.is_empty() && self.nonmember_failures.is_empty()
    }
}

/// (a) seeded random members of J^p are annihilated by every operator;
/// (b) seeded random certified non-members are detected by at least one.
pub fn completeness_check<K: Scalar>(
    data: &BarletData<K>,
    ops: &[NoetherianOperator<K>],
    member_trials: usize,
    nonmember_trials: usize,
    seed: u64,
    ord: MonomialOrder,
) -> CompletenessReport {
    let ring = &data.ring;
    let basis = &data.strong.forms.basis;
    let gens = data.strong.forms.presentation.cols();
    let gb = module_gb(gens, ord);
    let mut sampler = Sampler::new(seed);
    let mut member_failures = Vec::new();
    let mut nonmember_failures = Vec::new();
    for trial in 0..member_trials {
        let phi = sampler.combination(ring, gens, 3);
        for (oi, op) in ops.iter().enumerate() {
            if !op.op.apply(&phi, basis).is_zero() {
                member_failures.push((trial, oi));
            }
        }
    }
    for trial in 0..nonmember_trials {
        // draw until the normal form certifies non-membership
        let mut phi = sampler.form(ring, basis, 2, 2);
        let mut guard = 0;
        while normal_form_certified(&phi, &gb, ord).0.is_zero() {
            phi = sampler.form(ring, basis, 2, 2);
            guard += 1;
            assert!(guard < 1000, "could not sample a non-member");
        }
        let detected = ops.iter().any(|op| !op.op.apply(&phi, basis).is_zero());
        if !detected {
            nonmember_failures.push(trial);
        }
    }
    CompletenessReport {
        trials_members: member_trials,
        trials_nonmembers: nonmember_trials,
        member_failures,
        nonmember_failures,
    }
}

/// φ ∧ μ as a current, for cross-checks between the operator dictionary and
/// the residue calculus.
pub fn wedge_form_with_current<K: Scalar>(
    phi: &VecPoly<K>,
    basis: &FormBasis,
    mu: &ChExpr<K>,
) -> ChExpr<K> {
    mu.wedge_form_left(phi, basis)
}

/// Convenience: ZForm of project(φ∧μ, α) reduced to its dz-volume
/// coefficient.
pub fn pairing_value<K: Scalar>(
    ring: &Ring,
    phi: &VecPoly<K>,
    basis: &FormBasis,
    mu: &ChExpr<K>,
    alpha: &[u32],
) -> Polynomial<K> {
    let prod = mu.wedge_form_left(phi, basis);
    let zf: ZForm<K> = prod.project(alpha);
    let zfull: Label = (1u32 << ring.nz()) - 1;
    zf.component(zfull)
}
