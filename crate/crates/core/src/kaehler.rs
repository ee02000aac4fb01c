//! Kähler differential modules Ω^p of the subspace cut out by J, their
//! torsion-free quotients (strongly holomorphic forms), and O_Z-module
//! structure when the reduction is the coordinate plane Z = {w = 0}.

use crate::forms::{insert_sign, FormBasis, Label};
use crate::gb::{module_gb, VecPoly};
use crate::homalg::{
    cm_test, equidim_hull, free_resolution, minimalize, purity_test, HomalgError,
    PresentedModule, PurityCertificate,
};
use crate::ideal::Ideal;
use crate::matrix::PolyMat;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::zmod::{frac_rank, ZScope};
use std::fmt;

#[derive(Debug, Clone)]
pub enum KaehlerError {
    DegreeOutOfRange { p: usize, nvars: usize },
    NotPureDimensional,
    ReductionNotW(&'static str),
    Homalg(HomalgError),
}

impl fmt::Display for KaehlerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KaehlerError::DegreeOutOfRange { p, nvars } => {
                write!(f, "form degree {p} out of range 0..={nvars}")
            }
            KaehlerError::NotPureDimensional => write!(f, "pure dimension required"),
            KaehlerError::ReductionNotW(ctx) => {
                write!(f, "zero set of the ideal must be w = 0: {ctx}")
            }
            KaehlerError::Homalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for KaehlerError {}

impl From<HomalgError> for KaehlerError {
    fn from(e: HomalgError) -> Self {
        KaehlerError::Homalg(e)
    }
}

/// Presentation of a module of p-forms on the labeled free module with
/// basis dz_I ∧ dw_K.
#[derive(Clone, Debug)]
pub struct FormModulePresentation<K: Scalar> {
    pub ring: Ring,
    pub p: usize,
    pub basis: FormBasis,
    pub presentation: PolyMat<K>,
}

impl<K: Scalar> FormModulePresentation<K> {
    pub fn module(&self) -> PresentedModule<K> {
        PresentedModule::new(&self.ring, self.basis.len(), self.presentation.clone())
    }
}

/// d g as a vector over the 1-form labels.
pub fn exterior_derivative<K: Scalar>(ring: &Ring, g: &Polynomial<K>) -> VecPoly<K> {
    let n = ring.nvars();
    let basis = FormBasis::new(n, 1);
    let mut v = VecPoly::zero(basis.len());
    for i in 0..n {
        let d = g.derivative(i);
        if !d.is_zero() {
            v.add_to(basis.index_of(1 << i), d);
        }
    }
    v
}

/// dg ∧ dx_S expanded on the (deg S + 1)-labels.
fn dg_wedge<K: Scalar>(
    ring: &Ring,
    g: &Polynomial<K>,
    s: Label,
    target: &FormBasis,
) -> VecPoly<K> {
    let n = ring.nvars();
    let mut v = VecPoly::zero(target.len());
    for i in 0..n {
        let d = g.derivative(i);
        if d.is_zero() {
            continue;
        }
        if let Some(sign) = insert_sign(i, s) {
            let lab = s | (1 << i);
            let coef = if sign > 0 { d } else { -d };
            v.add_to(target.index_of(lab), coef);
        }
    }
    v
}

/// Ĵ^p = J·Ω^p + dJ ∧ Ω^{p−1}, presented by explicit columns.
pub fn jhat_presentation<K: Scalar>(
    j: &Ideal<K>,
    p: usize,
) -> Result<FormModulePresentation<K>, KaehlerError> {
    let ring = j.ring().clone();
    let n = ring.nvars();
    if p > n {
        return Err(KaehlerError::DegreeOutOfRange { p, nvars: n });
    }
    let basis = FormBasis::new(n, p);
    let mut cols: Vec<VecPoly<K>> = Vec::new();
    // g · dz_I ∧ dw_K for each generator and each p-label
    for g in j.gens() {
        for li in 0..basis.len() {
            let mut v = VecPoly::zero(basis.len());
            v.add_to(li, g.clone());
            cols.push(v);
        }
    }
    // dg ∧ (p−1)-labels
    if p >= 1 {
        let lower = FormBasis::new(n, p - 1);
        for g in j.gens() {
            for li in 0..lower.len() {
                let v = dg_wedge(&ring, g, lower.label(li), &basis);
                if !v.is_zero() {
                    cols.push(v);
                }
            }
        }
    }
    let presentation = PolyMat::new(basis.len(), n, cols);
    Ok(FormModulePresentation {
        ring,
        p,
        basis,
        presentation,
    })
}

/// Ω^p_{Kähler} = Ω^p_D / Ĵ^p: the same matrix read as a quotient
/// presentation.
pub fn kaehler_module<K: Scalar>(
    j: &Ideal<K>,
    p: usize,
) -> Result<FormModulePresentation<K>, KaehlerError> {
    jhat_presentation(j, p)
}

#[derive(Clone, Debug)]
pub struct StrongForms<K: Scalar> {
    /// Ω^p_X = Ω^p_D / J^p with J^p = Ĵ^p + torsion lifts
    pub forms: FormModulePresentation<K>,
    /// generators of J^p / Ĵ^p
    pub torsion_gens: Vec<VecPoly<K>>,
    pub purity: PurityCertificate,
    pub kappa: usize,
}

/// Strongly holomorphic p-forms: the Kähler module modulo its torsion
/// submodule, computed through the equidimensional hull.
pub fn strong_forms<K: Scalar>(
    j: &Ideal<K>,
    p: usize,
    ord: MonomialOrder,
) -> Result<StrongForms<K>, KaehlerError> {
    let kappa = j.codim(ord).value;
    let ox = PresentedModule::quotient_ring(j);
    let res = minimalize(&free_resolution(&ox, j.ring().nvars() + 2, ord));
    let purity = purity_test(&res, kappa, ord)?;
    if !purity.pure {
        return Err(KaehlerError::NotPureDimensional);
    }
    let kae = kaehler_module(j, p)?;
    let hull = equidim_hull(&kae.module(), kappa, ord)?;
    let mut cols = kae.presentation.cols().to_vec();
    cols.extend(hull.torsion_gens.iter().cloned());
    let presentation = PolyMat::new(kae.basis.len(), j.ring().nvars(), cols);
    Ok(StrongForms {
        forms: FormModulePresentation {
            ring: kae.ring,
            p,
            basis: kae.basis,
            presentation,
        },
        torsion_gens: hull.torsion_gens,
        purity,
        kappa,
    })
}

/// Least M with every degree-M monomial in w contained in J. Requires the
/// radical of J to be ⟨w⟩, checked by finding a power of each w_i in J.
pub fn nullstellensatz_exponent<K: Scalar>(
    j: &Ideal<K>,
    ord: MonomialOrder,
) -> Result<usize, KaehlerError> {
    let ring = j.ring();
    let n = ring.nvars();
    let kappa = ring.nw();
    if kappa == 0 {
        return Err(KaehlerError::ReductionNotW("ring has no w-variables"));
    }
    let cap = 64usize;
    for k in 0..kappa {
        let wi = Polynomial::<K>::var(n, ring.w_index(k));
        let mut pow = wi.clone();
        let mut ok = false;
        for _ in 0..cap {
            if j.contains(&pow, ord) {
                ok = true;
                break;
            }
            pow = &pow * &wi;
        }
        if !ok {
            return Err(KaehlerError::ReductionNotW(
                "some w-variable has no power in the ideal",
            ));
        }
    }
    let mut m = 1usize;
    loop {
        let all_in = w_monomials_of_degree(ring, m)
            .into_iter()
            .all(|mono| j.contains(&mono, ord));
        if all_in {
            return Ok(m);
        }
        m += 1;
        assert!(m <= cap * kappa, "nullstellensatz exponent out of bounds");
    }
}

fn w_monomials_of_degree<K: Scalar>(ring: &Ring, d: usize) -> Vec<Polynomial<K>> {
    let kappa = ring.nw();
    let n = ring.nvars();
    let mut out = Vec::new();
    let mut exps: Vec<Vec<u32>> = Vec::new();
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
    rec(kappa, d as u32, &mut Vec::new(), &mut exps);
    for we in exps {
        let mut e = vec![0u32; n];
        e[ring.nz()..].copy_from_slice(&we);
        out.push(Polynomial::monomial(e, K::one()));
    }
    out
}

/// One generator of the O_Z-spanning set: w^α · dx_label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OzGenerator {
    pub alpha: Vec<u32>,
    pub label: Label,
}

impl OzGenerator {
    pub fn as_vector<K: Scalar>(&self, ring: &Ring, basis: &FormBasis) -> VecPoly<K> {
        let n = ring.nvars();
        let mut e = vec![0u32; n];
        e[ring.nz()..].copy_from_slice(&self.alpha);
        let mut v = VecPoly::zero(basis.len());
        v.add_to(basis.index_of(self.label), Polynomial::monomial(e, K::one()));
        v
    }
}

#[derive(Clone, Debug)]
pub struct OzGeneratingSet<K: Scalar> {
    pub p: usize,
    pub exponent_bound: usize,
    /// minimal generating set at the origin, in candidate order
    pub generators: Vec<OzGenerator>,
    /// true when the O_Z-relation module among the generators vanishes
    pub free: bool,
    pub nu: usize,
    /// maximal subset of `generators` that stays independent over the
    /// fraction field Frac(ℚ[z]); equals `generators` when free
    pub generic_basis: Vec<OzGenerator>,
    pub scope: ZScope,
    /// truncated relation columns of J^p in the scope coordinates
    pub relation_cols: Vec<VecPoly<K>>,
    pub basis: FormBasis,
}

/// Reduce the spanning set {w^α dz^β ∧ dw^γ : |α| < M} of Ω^p_X to a minimal
/// O_Z-generating set at the origin; check freeness via the generic rank of
/// the relation module.
pub fn oz_generators<K: Scalar>(
    j: &Ideal<K>,
    p: usize,
    ord: MonomialOrder,
) -> Result<OzGeneratingSet<K>, KaehlerError> {
    let ring = j.ring().clone();
    let m = nullstellensatz_exponent(j, ord)?;
    let strong = strong_forms(j, p, ord)?;
    let basis = strong.forms.basis.clone();
    let scope = ZScope::new(&ring, basis.len(), m);
    // Gröbner basis of J^p as a module, then truncated O_Z-relations
    let jp_gb = module_gb(strong.forms.presentation.cols(), ord);
    let relation_cols = scope.relation_cols(&jp_gb);
    let keep = scope.nakayama_keep(&relation_cols);
    let generators: Vec<OzGenerator> = keep
        .iter()
        .map(|&u| {
            let (alpha, comp) = scope.decode(u);
            OzGenerator {
                alpha: alpha.to_vec(),
                label: basis.label(comp),
            }
        })
        .collect();
    // relation module of the kept generators: syzygies over ℚ[z] of
    // [B | P] restricted to the B block; free iff no nonzero projection
    let b_cols: Vec<VecPoly<K>> = keep
        .iter()
        .map(|&u| VecPoly::unit(scope.rank(), u, scope.zring.nvars()))
        .collect();
    let mut block = b_cols.clone();
    block.extend(relation_cols.iter().cloned());
    let span = scope.z_span(&block, ord);
    let free = span
        .syzygies()
        .iter()
        .all(|s| s.slice(0, b_cols.len()).is_zero());
    // generically independent subset over Frac(ℚ[z])
    let generic_basis = if free {
        generators.clone()
    } else {
        generic_subset(&scope, &relation_cols, &keep, ord)
            .iter()
            .map(|&u| {
                let (alpha, comp) = scope.decode(u);
                OzGenerator {
                    alpha: alpha.to_vec(),
                    label: basis.label(comp),
                }
            })
            .collect()
    };
    let nu = generators.len();
    Ok(OzGeneratingSet {
        p,
        exponent_bound: m,
        generators,
        free,
        nu,
        generic_basis,
        scope,
        relation_cols,
        basis,
    })
}

/// Greedy maximal subset of the kept coordinates whose classes stay
/// independent over Frac(ℚ[z]) modulo the relation columns.
fn generic_subset<K: Scalar>(
    scope: &ZScope,
    relation_cols: &[VecPoly<K>],
    keep: &[usize],
    ord: MonomialOrder,
) -> Vec<usize> {
    let t = scope.rank();
    let to_row = |v: &VecPoly<K>| -> Vec<Polynomial<K>> {
        (0..t).map(|i| v.comp_or_zero(i, scope.zring.nvars())).collect()
    };
    let base_rows: Vec<Vec<Polynomial<K>>> = relation_cols.iter().map(to_row).collect();
    let base_rank = frac_rank(&base_rows, ord);
    let mut rows = base_rows;
    let mut rank = base_rank;
    let mut chosen = Vec::new();
    for &u in keep {
        let mut row = vec![Polynomial::zero(scope.zring.nvars()); t];
        row[u] = Polynomial::one(scope.zring.nvars());
        let mut cand = rows.clone();
        cand.push(row.clone());
        let r = frac_rank(&cand, ord);
        if r > rank {
            rows = cand;
            rank = r;
            chosen.push(u);
        }
    }
    chosen
}

/// Membership of a form vector in the O_Z-span of the given form vectors
/// plus J^p, in the truncated coordinates.
pub fn in_oz_span<K: Scalar>(
    set: &OzGeneratingSet<K>,
    span_forms: &[VecPoly<K>],
    target: &VecPoly<K>,
    jp_gb: &[VecPoly<K>],
    ord: MonomialOrder,
) -> bool {
    // reduce modulo J^p over R first so the truncation applies
    let (nf, _) = crate::gb::normal_form_certified(target, jp_gb, ord);
    let v = set.scope.project(&nf);
    let mut cols: Vec<VecPoly<K>> = span_forms
        .iter()
        .map(|g| {
            let (gnf, _) = crate::gb::normal_form_certified(g, jp_gb, ord);
            set.scope.project(&gnf)
        })
        .collect();
    cols.extend(set.relation_cols.iter().cloned());
    let span = set.scope.z_span(&cols, ord);
    span.contains(&v)
}

/// Two-way O_Z-module equality of two generating sets modulo J^p.
pub fn oz_module_equal<K: Scalar>(
    set: &OzGeneratingSet<K>,
    a: &[VecPoly<K>],
    b: &[VecPoly<K>],
    jp_gb: &[VecPoly<K>],
    ord: MonomialOrder,
) -> bool {
    a.iter().all(|v| in_oz_span(set, b, v, jp_gb, ord))
        && b.iter().all(|v| in_oz_span(set, a, v, jp_gb, ord))
}

/// Purity of R/J (the standing hypothesis for strong forms): convenience
/// wrapper used by callers that need the verdict separately.
pub fn ideal_is_pure<K: Scalar>(j: &Ideal<K>, ord: MonomialOrder) -> Result<bool, KaehlerError> {
    let kappa = j.codim(ord).value;
    let ox = PresentedModule::quotient_ring(j);
    let res = minimalize(&free_resolution(&ox, j.ring().nvars() + 2, ord));
    Ok(purity_test(&res, kappa, ord)?.pure)
}

/// Cohen–Macaulay verdict for Ω^p_X.
pub fn strong_forms_cm<K: Scalar>(
    j: &Ideal<K>,
    p: usize,
    ord: MonomialOrder,
) -> Result<crate::homalg::CmCertificate, KaehlerError> {
    let strong = strong_forms(j, p, ord)?;
    Ok(cm_test(&strong.forms.module(), ord)?)
}

impl<K: Scalar> VecPoly<K> {
    fn comp_or_zero(&self, i: usize, nvars: usize) -> Polynomial<K> {
        let p = self.comp(i);
        if p.is_zero() {
            Polynomial::zero(nvars)
        } else {
            p
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::Rat;

    const ORD: MonomialOrder = MonomialOrder::DegRevLex;

    fn ring71() -> Ring {
        Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal<Rat> {
        Ideal::new(r, gens.iter().map(|s| parse_poly(r, s).unwrap()).collect())
    }

    fn j71(r: &Ring) -> Ideal<Rat> {
        ideal(r, &["w1^2", "w2^2", "w1*w2"])
    }

    #[test]
    fn jhat_zero_degree_is_the_ideal() {
        let r = ring71();
        let j = j71(&r);
        let jh = jhat_presentation(&j, 0).unwrap();
        assert_eq!(jh.basis.len(), 1);
        assert_eq!(jh.presentation.ncols(), 3);
    }

    #[test]
    fn jhat_example_two_vars() {
        // J = <z·w> in two variables: columns {zw·dz, zw·dw, z·dw + w·dz}
        let r = Ring::new(&["z"], &["w"]).unwrap();
        let j = ideal(&r, &["z*w"]);
        let jh = jhat_presentation(&j, 1).unwrap();
        assert_eq!(jh.presentation.ncols(), 3);
        let p = |s: &str| parse_poly::<Rat>(&r, s).unwrap();
        // the derivative column is w·dz + z·dw
        let want_dz = p("w");
        let want_dw = p("z");
        let found = jh
            .presentation
            .cols()
            .iter()
            .any(|c| c.comp(0) == want_dz && c.comp(1) == want_dw);
        assert!(found, "dJ column missing");
    }

    #[test]
    fn jhat_degree_one_example_71() {
        let r = ring71();
        let j = j71(&r);
        let jh = jhat_presentation(&j, 1).unwrap();
        // 3 generators × 4 labels + 3 derivative columns
        assert_eq!(jh.presentation.ncols(), 15);
        // dJ contains w1·dw1, w2·dw2 and d(w1w2) = w2·dw1 + w1·dw2
        let basis = &jh.basis;
        let dw1 = basis.index_of(1 << 2);
        let dw2 = basis.index_of(1 << 3);
        let p = |s: &str| parse_poly::<Rat>(&r, s).unwrap();
        let has = |f: &dyn Fn(&VecPoly<Rat>) -> bool| jh.presentation.cols().iter().any(f);
        assert!(has(&|c| c.comp(dw1) == p("2*w1") && c.comp(dw2).is_zero()));
        assert!(has(&|c| c.comp(dw2) == p("2*w2") && c.comp(dw1).is_zero()));
        assert!(has(&|c| c.comp(dw1) == p("w2") && c.comp(dw2) == p("w1")));
    }

    #[test]
    fn example_32_torsion() {
        // J = <z·w>: torsion of Ω¹_Kähler is generated by {z dw, w dz}
        let r = Ring::new(&["z"], &["w"]).unwrap();
        let j = ideal(&r, &["z*w"]);
        let s = strong_forms(&j, 1, ORD).unwrap();
        assert_eq!(s.kappa, 1);
        let p = |t: &str| parse_poly::<Rat>(&r, t).unwrap();
        // expected torsion generators: w·dz (comp 0) and z·dw (comp 1)
        let mut expected = vec![
            VecPoly::from_entries(2, vec![(0, p("w"))]),
            VecPoly::from_entries(2, vec![(1, p("z"))]),
        ];
        // two-way span equality modulo Ĵ¹
        let jh = jhat_presentation(&j, 1).unwrap();
        let mut with_torsion = jh.presentation.cols().to_vec();
        with_torsion.extend(s.torsion_gens.clone());
        let span_computed =
            crate::gb::ColumnSpan::new(&with_torsion, 2, 2, ORD);
        for e in &expected {
            assert!(span_computed.contains(e), "expected torsion not covered");
        }
        let mut with_expected = jh.presentation.cols().to_vec();
        with_expected.append(&mut expected);
        let span_expected = crate::gb::ColumnSpan::new(&with_expected, 2, 2, ORD);
        for t in &s.torsion_gens {
            assert!(span_expected.contains(t), "computed torsion too large");
        }
        assert!(!s.torsion_gens.is_empty());
    }

    #[test]
    fn example_71_torsion_free() {
        let r = ring71();
        let j = j71(&r);
        let s = strong_forms(&j, 1, ORD).unwrap();
        assert!(s.torsion_gens.is_empty(), "Ω¹ of the monomial example is torsion-free");
    }

    #[test]
    fn nullstellensatz_exponents() {
        let r = ring71();
        assert_eq!(nullstellensatz_exponent(&j71(&r), ORD).unwrap(), 2);
        assert_eq!(
            nullstellensatz_exponent(&ideal(&r, &["w1", "w2"]), ORD).unwrap(),
            1
        );
        assert_eq!(
            nullstellensatz_exponent(&ideal(&r, &["w1^3", "w2"]), ORD).unwrap(),
            3
        );
        assert!(nullstellensatz_exponent(&ideal(&r, &["w1"]), ORD).is_err());
    }

    #[test]
    fn oz_generators_example_71_degree_0() {
        let r = ring71();
        let set = oz_generators(&j71(&r), 0, ORD).unwrap();
        assert_eq!(set.nu, 3);
        assert!(set.free);
        let alphas: Vec<Vec<u32>> = set.generators.iter().map(|g| g.alpha.clone()).collect();
        assert_eq!(alphas, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn oz_generators_example_71_degree_1() {
        let r = ring71();
        let set = oz_generators(&j71(&r), 1, ORD).unwrap();
        assert_eq!(set.nu, 9, "paper display has 9 generators: {:?}", set.generators);
        assert!(set.free);
    }

    #[test]
    fn oz_generators_example_71_degree_2() {
        let r = ring71();
        let set = oz_generators(&j71(&r), 2, ORD).unwrap();
        assert_eq!(set.nu, 10);
        assert!(set.free);
    }

    #[test]
    fn oz_generators_example_72_degree_0() {
        let r = ring71();
        let j = ideal(&r, &["w1^2", "w2^2", "w1*w2", "z1*w2 - z2*w1"]);
        let set = oz_generators(&j, 0, ORD).unwrap();
        assert_eq!(set.nu, 3);
        assert!(!set.free, "the relation z1·w2 − z2·w1 rules out freeness");
        assert_eq!(set.generic_basis.len(), 2);
    }

    #[test]
    fn spanning_property_example_71() {
        let r = ring71();
        let j = j71(&r);
        let set = oz_generators(&j, 1, ORD).unwrap();
        let strong = strong_forms(&j, 1, ORD).unwrap();
        let jp_gb = module_gb(strong.forms.presentation.cols(), ORD);
        // every candidate w^α·label reduces to an O_Z-combination of the kept set
        for (ai, alpha) in set.scope.wexps.clone().iter().enumerate() {
            for li in 0..set.basis.len() {
                let _ = ai;
                let g = OzGenerator {
                    alpha: alpha.clone(),
                    label: set.basis.label(li),
                };
                let v = g.as_vector::<Rat>(&r, &set.basis);
                let span: Vec<_> = set
                    .generators
                    .iter()
                    .map(|b| b.as_vector::<Rat>(&r, &set.basis))
                    .collect();
                assert!(
                    in_oz_span(&set, &span, &v, &jp_gb, ORD),
                    "candidate not spanned"
                );
            }
        }
    }
}
