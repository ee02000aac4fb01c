//! The duality pairing matrix T̃ between the O_Z-basis of Ω^p_X and the
//! Barlet generators, its generic injectivity over Frac(ℚ[z]), the
//! matrix-level membership duality, and the aggregated duality report.

use crate::barlet::{
    barlet_generators, completeness_check, noetherian_operators, BarletData, BarletError,
    CompletenessReport, NoetherianOperator,
};
use crate::gb::{module_gb, normal_form_certified, VecPoly};
use crate::homalg::{cm_test, ext_module, rank_loci_from, CmCertificate};
use crate::ideal::Ideal;
use crate::kaehler::{oz_generators, OzGenerator, OzGeneratingSet};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::zmod::{frac_rank, frac_solve, w_monomials_below};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub enum PairingError {
    Barlet(String),
    MissingPrerequisite(&'static str),
}

impl fmt::Display for PairingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairingError::Barlet(e) => write!(f, "{e}"),
            PairingError::MissingPrerequisite(m) => write!(f, "missing prerequisite: {m}"),
        }
    }
}

impl std::error::Error for PairingError {}

impl From<BarletError> for PairingError {
    fn from(e: BarletError) -> Self {
        PairingError::Barlet(e.to_string())
    }
}

/// Rows indexed by (α, j) with |α| < M; columns by the O_Z-basis forms; the
/// dz-volume label is factored out of every entry.
pub struct PairingMatrix<K: Scalar> {
    pub ring: Ring,
    pub row_index: Vec<(Vec<u32>, usize)>,
    /// the basis forms used for the columns (generically free subset)
    pub columns: Vec<OzGenerator>,
    /// entries as z-polynomials, row-major
    pub entries: Vec<Vec<Polynomial<K>>>,
    pub num_generators: usize,
    pub m_tilde: usize,
}

impl<K: Scalar> PairingMatrix<K> {
    pub fn nrows(&self) -> usize {
        self.row_index.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// T̃ · h for a coordinate vector over ℚ[z].
    pub fn apply(&self, h: &[Polynomial<K>]) -> Vec<Polynomial<K>> {
        assert_eq!(h.len(), self.ncols());
        self.entries
            .iter()
            .map(|row| {
                let mut acc = Polynomial::zero(self.ring.nvars());
                for (e, hk) in row.iter().zip(h) {
                    acc = acc + e * hk;
                }
                acc
            })
            .collect()
    }
}

/// Assemble T̃ from the Barlet data and the O_Z-generating set. When the
/// origin-minimal generating set is not free, the generically independent
/// subset is used for the columns, matching the construction on the
/// regular locus.
pub fn t_matrix<K: Scalar>(
    data: &BarletData<K>,
    oz: &OzGeneratingSet<K>,
) -> Result<PairingMatrix<K>, PairingError> {
    if oz.generic_basis.is_empty() {
        return Err(PairingError::MissingPrerequisite("empty O_Z-basis"));
    }
    let ring = data.ring.clone();
    let basis = &data.strong.forms.basis;
    let mut row_index = Vec::new();
    let mut entries = Vec::new();
    let alphas = w_monomials_below(data.kappa, data.m_op);
    for alpha in &alphas {
        for (j, mu) in data.generators.iter().enumerate() {
            row_index.push((alpha.clone(), j));
            let mut row = Vec::new();
            for b in &oz.generic_basis {
                let phi = b.as_vector::<K>(&ring, basis);
                let val = crate::barlet::pairing_value(&ring, &phi, basis, mu, alpha);
                row.push(val);
            }
            entries.push(row);
        }
    }
    Ok(PairingMatrix {
        ring,
        row_index,
        columns: oz.generic_basis.clone(),
        entries,
        num_generators: data.generators.len(),
        m_tilde: alphas.len(),
    })
}

#[derive(Clone, Debug)]
pub struct InjectivityVerdict {
    pub rank: usize,
    pub injective: bool,
}

/// Rank over Frac(ℚ[z]) by fraction-free elimination; injective iff the
/// rank equals the number of columns.
pub fn generic_injectivity<K: Scalar>(
    t: &PairingMatrix<K>,
    ord: MonomialOrder,
) -> InjectivityVerdict {
    let nz = t.ring.nz();
    let rows: Vec<Vec<Polynomial<K>>> = t
        .entries
        .iter()
        .map(|r| r.iter().map(|p| p.truncate_vars(nz)).collect())
        .collect();
    let rank = frac_rank(&rows, ord);
    InjectivityVerdict {
        rank,
        injective: rank == t.ncols(),
    }
}

/// Coordinates of a p-form in the column basis over Frac(ℚ[z]), modulo J^p:
/// returns (numerators, denominator) with denominator·φ ≡ Σ numᵏ·bᵏ.
pub fn b_coordinates<K: Scalar>(
    data: &BarletData<K>,
    oz: &OzGeneratingSet<K>,
    phi: &VecPoly<K>,
    ord: MonomialOrder,
) -> Option<(Vec<Polynomial<K>>, Polynomial<K>)> {
    let jp_gb = module_gb(data.strong.forms.presentation.cols(), ord);
    let (nf, _) = normal_form_certified(phi, &jp_gb, ord);
    let target = oz.scope.project(&nf);
    let nzv = oz.scope.zring.nvars();
    let rank = oz.scope.rank();
    let bcols: Vec<VecPoly<K>> = oz
        .generic_basis
        .iter()
        .map(|g| oz.scope.project(&g.as_vector::<K>(&data.ring, &oz.basis)))
        .collect();
    let mut cols: Vec<Vec<Polynomial<K>>> = Vec::new();
    for c in bcols.iter().chain(oz.relation_cols.iter()) {
        cols.push(
            (0..rank)
                .map(|i| {
                    let p = c.comp(i);
                    if p.is_zero() {
                        Polynomial::zero(nzv)
                    } else {
                        p
                    }
                })
                .collect(),
        );
    }
    let b: Vec<Polynomial<K>> = (0..rank)
        .map(|i| {
            let p = target.comp(i);
            if p.is_zero() {
                Polynomial::zero(nzv)
            } else {
                p
            }
        })
        .collect();
    let sol = frac_solve(&cols, &b, ord)?;
    Some((
        sol.numerators[..oz.generic_basis.len()].to_vec(),
        sol.denominator,
    ))
}

/// The matrix-level membership duality for one form: T̃·coords = 0 ⟺
/// φ ∈ J^p. Returns (t_vanishes, is_member).
pub fn membership_duality<K: Scalar>(
    data: &BarletData<K>,
    oz: &OzGeneratingSet<K>,
    t: &PairingMatrix<K>,
    phi: &VecPoly<K>,
    ord: MonomialOrder,
) -> (bool, bool) {
    let jp_gb = module_gb(data.strong.forms.presentation.cols(), ord);
    let member = normal_form_certified(phi, &jp_gb, ord).0.is_zero();
    let coords = b_coordinates(data, oz, phi, ord);
    let t_vanishes = match coords {
        Some((h, _den)) => {
            let h_full: Vec<Polynomial<K>> = h
                .iter()
                .map(|p| p.extend_vars(data.ring.nvars()))
                .collect();
            t.apply(&h_full).iter().all(|v| v.is_zero())
        }
        None => false,
    };
    (t_vanishes, member)
}

/// Aggregated invariants: purity, CM, Betti numbers, Ext vanishing, Barlet
/// generators, Noetherian completeness, and T̃ injectivity, with the
/// three-way consistency cross-check.
pub struct DualityReport<K: Scalar> {
    pub p: usize,
    pub kappa: usize,
    pub m_nss: usize,
    pub m_op: usize,
    pub pure: bool,
    pub cm: CmCertificate,
    pub betti: Vec<usize>,
    /// (k, Ext^k vanishes) for k = κ+1 … resolution length
    pub ext_vanishing: Vec<(usize, bool)>,
    pub ext_all_vanish: bool,
    /// third route: all rank loci beyond κ are empty
    pub loci_empty_beyond_kappa: bool,
    pub consistent: bool,
    pub ba_count: usize,
    pub ba_rendered: Vec<String>,
    pub nu: usize,
    pub oz_free: bool,
    pub operators: Vec<NoetherianOperator<K>>,
    pub completeness: CompletenessReport,
    pub t_rank: usize,
    pub t_rows: usize,
    pub t_cols: usize,
    pub injective: bool,
    pub data: BarletData<K>,
    pub oz: OzGeneratingSet<K>,
    pub t: PairingMatrix<K>,
}

pub fn duality_report<K: Scalar>(
    j: &Ideal<K>,
    p: usize,
    trials: usize,
    seed: u64,
    ord: MonomialOrder,
) -> Result<DualityReport<K>, PairingError> {
    let data = barlet_generators(j, p, ord)?;
    let oz = oz_generators(j, p, ord).map_err(|e| PairingError::Barlet(e.to_string()))?;
    let module = data.strong.forms.module();
    let cm = cm_test(&module, ord).map_err(|e| PairingError::Barlet(e.to_string()))?;
    let res = &data.resolution;
    let betti = res.ranks();
    let mut ext_vanishing = Vec::new();
    let mut ext_all = true;
    for k in (data.kappa + 1)..=res.length() {
        let e = ext_module(res, k, ord);
        ext_vanishing.push((k, e.is_zero));
        ext_all &= e.is_zero;
    }
    let loci = rank_loci_from(res, data.kappa + 1, ord)
        .map_err(|e| PairingError::Barlet(e.to_string()))?;
    let n = j.ring().nvars();
    let loci_empty = loci.loci.iter().all(|e| e.codim.value == n + 1);
    let consistent = (cm.cohen_macaulay == ext_all) && (ext_all == loci_empty);
    let ops = noetherian_operators(&data);
    let completeness = completeness_check(&data, &ops, trials, trials.div_ceil(4), seed, ord);
    let t = t_matrix(&data, &oz)?;
    let verdict = generic_injectivity(&t, ord);
    Ok(DualityReport {
        p,
        kappa: data.kappa,
        m_nss: data.m_nss,
        m_op: data.m_op,
        pure: data.strong.purity.pure,
        cm,
        betti,
        ext_vanishing,
        ext_all_vanish: ext_all,
        loci_empty_beyond_kappa: loci_empty,
        consistent,
        ba_count: data.generators.len(),
        ba_rendered: data.generators.iter().map(|e| e.render(ord)).collect(),
        nu: oz.nu,
        oz_free: oz.free,
        operators: ops,
        completeness,
        t_rank: verdict.rank,
        t_rows: t.nrows(),
        t_cols: t.ncols(),
        injective: verdict.injective,
        data,
        oz,
        t,
    })
}

impl<K: Scalar> DualityReport<K> {
    /// Flat key → value view consumed by the CLI serializers.
    pub fn tree(&self, ord: MonomialOrder) -> BTreeMap<String, String> {
        let mut t = BTreeMap::new();
        t.insert("p".into(), self.p.to_string());
        t.insert("kappa".into(), self.kappa.to_string());
        t.insert("nullstellensatz.m".into(), self.m_nss.to_string());
        t.insert("operators.order_bound".into(), self.m_op.to_string());
        t.insert("pure".into(), self.pure.to_string());
        t.insert("cm".into(), self.cm.cohen_macaulay.to_string());
        t.insert(
            "resolution.length".into(),
            self.cm.resolution_length.to_string(),
        );
        t.insert(
            "resolution.betti".into(),
            format!(
                "[{}]",
                self.betti
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        );
        for (k, v) in &self.ext_vanishing {
            t.insert(format!("ext.vanishes.{k}"), v.to_string());
        }
        t.insert("ext.all_vanish".into(), self.ext_all_vanish.to_string());
        t.insert(
            "loci.empty_beyond_kappa".into(),
            self.loci_empty_beyond_kappa.to_string(),
        );
        t.insert("consistent".into(), self.consistent.to_string());
        t.insert("ba.count".into(), self.ba_count.to_string());
        for (i, s) in self.ba_rendered.iter().enumerate() {
            t.insert(format!("ba.gen.{i}"), s.clone());
        }
        t.insert("oz.nu".into(), self.nu.to_string());
        t.insert("oz.free".into(), self.oz_free.to_string());
        t.insert("noetherian.count".into(), self.operators.len().to_string());
        for (i, o) in self.operators.iter().enumerate() {
            let alpha = o
                .alpha
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",");
            t.insert(
                format!("noetherian.op.{i}"),
                format!("j={} alpha=({alpha}): {}", o.gen_index, o.op.render(ord)),
            );
        }
        t.insert(
            "noetherian.complete".into(),
            self.completeness.passed().to_string(),
        );
        t.insert(
            "noetherian.trials.members".into(),
            self.completeness.trials_members.to_string(),
        );
        t.insert(
            "noetherian.trials.nonmembers".into(),
            self.completeness.trials_nonmembers.to_string(),
        );
        t.insert("pairing.rows".into(), self.t_rows.to_string());
        t.insert("pairing.cols".into(), self.t_cols.to_string());
        t.insert("pairing.rank".into(), self.t_rank.to_string());
        t.insert("pairing.injective".into(), self.injective.to_string());
        t.insert(
            "torsion.count".into(),
            self.data.strong.torsion_gens.len().to_string(),
        );
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::sample::Sampler;
    use crate::Rat;

    const ORD: MonomialOrder = MonomialOrder::DegRevLex;

    fn ring() -> Ring {
        Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal<Rat> {
        Ideal::new(r, gens.iter().map(|s| parse_poly(r, s).unwrap()).collect())
    }

    #[test]
    fn t_matrix_example_71_degree_0() {
        let r = ring();
        let j = ideal(&r, &["w1^2", "w2^2", "w1*w2"]);
        let data = barlet_generators(&j, 0, ORD).unwrap();
        let oz = oz_generators(&j, 0, ORD).unwrap();
        let t = t_matrix(&data, &oz).unwrap();
        assert_eq!(t.nrows(), data.generators.len() * t.m_tilde);
        assert_eq!(t.ncols(), 3);
        let v = generic_injectivity(&t, ORD);
        assert_eq!(v.rank, 3);
        assert!(v.injective);
        // the (α = 0, some generator, b = 1) entry is a nonzero constant
        let has_unit_entry = t
            .entries
            .iter()
            .zip(&t.row_index)
            .filter(|(_, (a, _))| a.iter().all(|&x| x == 0))
            .any(|(row, _)| row[0].is_constant() && !row[0].is_zero());
        assert!(has_unit_entry);
    }

    #[test]
    fn t_matrix_reduced_case_is_one_by_one() {
        let r = ring();
        let j = ideal(&r, &["w1", "w2"]);
        let data = barlet_generators(&j, 0, ORD).unwrap();
        let oz = oz_generators(&j, 0, ORD).unwrap();
        let t = t_matrix(&data, &oz).unwrap();
        assert_eq!((t.nrows(), t.ncols()), (1, 1));
        assert!(!t.entries[0][0].is_zero());
        assert!(generic_injectivity(&t, ORD).injective);
    }

    #[test]
    fn t_matrix_example_72_degree_0() {
        let r = ring();
        let j = ideal(&r, &["w1^2", "w2^2", "w1*w2", "z1*w2 - z2*w1"]);
        let data = barlet_generators(&j, 0, ORD).unwrap();
        let oz = oz_generators(&j, 0, ORD).unwrap();
        assert!(!oz.free);
        let t = t_matrix(&data, &oz).unwrap();
        assert_eq!(t.ncols(), 2, "generic basis on the regular locus");
        let v = generic_injectivity(&t, ORD);
        assert!(v.injective, "rank {} of {}", v.rank, t.ncols());
    }

    #[test]
    fn zero_matrix_not_injective() {
        let r = ring();
        let t = PairingMatrix::<Rat> {
            ring: r.clone(),
            row_index: vec![(vec![0, 0], 0)],
            columns: vec![],
            entries: vec![vec![Polynomial::zero(4), Polynomial::zero(4)]],
            num_generators: 1,
            m_tilde: 1,
        };
        // rank 0 < 2 claimed columns
        let rows: Vec<Vec<Polynomial<Rat>>> = t.entries.clone();
        assert_eq!(frac_rank(&rows, ORD), 0);
    }

    #[test]
    fn membership_duality_example_71() {
        let r = ring();
        let j = ideal(&r, &["w1^2", "w2^2", "w1*w2"]);
        let data = barlet_generators(&j, 0, ORD).unwrap();
        let oz = oz_generators(&j, 0, ORD).unwrap();
        let t = t_matrix(&data, &oz).unwrap();
        let mut sampler = Sampler::new(0);
        let basis = &data.strong.forms.basis;
        for _ in 0..25 {
            let phi = sampler.form::<Rat>(&r, basis, 3, 3);
            let (tz, member) = membership_duality(&data, &oz, &t, &phi, ORD);
            assert_eq!(tz, member);
        }
        // and for certified members
        let gens = data.strong.forms.presentation.cols();
        for _ in 0..10 {
            let phi = sampler.combination::<Rat>(&r, gens, 2);
            let (tz, member) = membership_duality(&data, &oz, &t, &phi, ORD);
            assert!(member);
            assert!(tz);
        }
    }

    #[test]
    fn duality_report_example_71() {
        let r = ring();
        let j = ideal(&r, &["w1^2", "w2^2", "w1*w2"]);
        let rep = duality_report(&j, 0, 20, 0, ORD).unwrap();
        assert!(rep.pure);
        assert!(rep.cm.cohen_macaulay);
        assert!(rep.ext_all_vanish);
        assert!(rep.consistent);
        assert_eq!(rep.ba_count, 3);
        assert!(rep.completeness.passed());
        assert!(rep.injective);
        assert_eq!(rep.nu, 3);
    }
}
