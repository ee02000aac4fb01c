//! Free resolutions of presented modules, minimalization, rank-drop loci,
//! purity and Cohen–Macaulay diagnostics, Ext modules, and the
//! equidimensional hull (torsion removal).

use crate::gb::{ColumnSpan, VecPoly};
use crate::ideal::{Codim, Ideal};
use crate::matrix::PolyMat;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomalgError {
    IncompleteResolution,
    CodimMismatch { expected: usize, found: usize },
    ZeroModule(&'static str),
    LiftFailed(&'static str),
}

impl fmt::Display for HomalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomalgError::IncompleteResolution => write!(f, "resolution is incomplete"),
            HomalgError::CodimMismatch { expected, found } => {
                write!(f, "codimension mismatch: expected {expected}, found {found}")
            }
            HomalgError::ZeroModule(ctx) => write!(f, "zero module: {ctx}"),
            HomalgError::LiftFailed(ctx) => write!(f, "internal lifting failure: {ctx}"),
        }
    }
}

impl std::error::Error for HomalgError {}

/// Cokernel of an explicit matrix between free modules.
#[derive(Clone, Debug)]
pub struct PresentedModule<K: Scalar> {
    ring: Ring,
    rank: usize,
    relations: PolyMat<K>,
}

impl<K: Scalar> PresentedModule<K> {
    pub fn new(ring: &Ring, rank: usize, relations: PolyMat<K>) -> Self {
        assert_eq!(relations.nrows(), rank, "presentation rows must match rank");
        let cols: Vec<VecPoly<K>> = relations
            .cols()
            .iter()
            .filter(|c| !c.is_zero())
            .cloned()
            .collect();
        PresentedModule {
            ring: ring.clone(),
            rank,
            relations: PolyMat::new(rank, ring.nvars(), cols),
        }
    }

    /// R/I as a presented module.
    pub fn quotient_ring(ideal: &Ideal<K>) -> Self {
        let ring = ideal.ring().clone();
        let cols: Vec<VecPoly<K>> = ideal
            .gens()
            .iter()
            .map(|g| VecPoly::from_entries(1, vec![(0, g.clone())]))
            .collect();
        let n = ring.nvars();
        PresentedModule {
            ring,
            rank: 1,
            relations: PolyMat::new(1, n, cols),
        }
    }

    /// Free module of the given rank.
    pub fn free(ring: &Ring, rank: usize) -> Self {
        PresentedModule {
            ring: ring.clone(),
            rank,
            relations: PolyMat::zero(rank, 0, ring.nvars()),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &PolyMat<K> {
        &self.relations
    }

    pub fn relation_span(&self, ord: MonomialOrder) -> ColumnSpan<K> {
        ColumnSpan::new(self.relations.cols(), self.rank, self.ring.nvars(), ord)
    }

    /// The module is zero iff every generator lies in the relation span.
    pub fn is_zero_module(&self, ord: MonomialOrder) -> bool {
        if self.rank == 0 {
            return true;
        }
        let span = self.relation_span(ord);
        (0..self.rank).all(|i| span.contains(&VecPoly::unit(self.rank, i, self.ring.nvars())))
    }

    /// Annihilator ideal: all r with r·F₀ ⊆ im(relations).
    pub fn annihilator(&self, ord: MonomialOrder) -> Ideal<K> {
        let n = self.ring.nvars();
        if self.rank == 0 {
            return Ideal::new(&self.ring, vec![Polynomial::one(n)]);
        }
        let mut acc: Option<Ideal<K>> = None;
        for i in 0..self.rank {
            // {r : r·e_i ∈ im A} from syzygies of [e_i | A]
            let mut cols = vec![VecPoly::unit(self.rank, i, n)];
            cols.extend_from_slice(self.relations.cols());
            let span = ColumnSpan::new(&cols, self.rank, n, ord);
            let q: Vec<Polynomial<K>> = span
                .syzygies()
                .into_iter()
                .map(|s| s.comp(0))
                .filter(|p| !p.is_zero())
                .collect();
            let qi = Ideal::new(&self.ring, q);
            acc = Some(match acc {
                None => qi,
                Some(a) => a.intersect(&qi, ord),
            });
        }
        acc.unwrap()
    }

    /// Codimension of the support.
    pub fn support_codim(&self, ord: MonomialOrder) -> Codim {
        self.annihilator(ord).codim(ord)
    }
}

/// Chain of matrices f₁, …, f_L with f_j·f_{j+1} = 0 exactly.
#[derive(Clone, Debug)]
pub struct FreeResolution<K: Scalar> {
    ring: Ring,
    rank0: usize,
    maps: Vec<PolyMat<K>>,
    pub complete: bool,
    pub minimal: bool,
}

impl<K: Scalar> FreeResolution<K> {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Ranks r₀, …, r_L.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![self.rank0];
        r.extend(self.maps.iter().map(|m| m.ncols()));
        r
    }

    /// f_j for j = 1..=L.
    pub fn map(&self, j: usize) -> &PolyMat<K> {
        &self.maps[j - 1]
    }

    pub fn maps(&self) -> &[PolyMat<K>] {
        &self.maps
    }

    pub fn rank(&self, j: usize) -> usize {
        if j == 0 {
            self.rank0
        } else {
            self.maps[j - 1].ncols()
        }
    }

    /// Exactness certificate: consecutive maps compose to zero and at each
    /// inner spot every syzygy of f_j lies in the image of f_{j+1}.
    pub fn verify_exactness(&self, ord: MonomialOrder) -> bool {
        for j in 1..self.length() {
            if !self.map(j).mul(self.map(j + 1)).is_zero() {
                return false;
            }
        }
        for j in 1..self.length() {
            let span_j = ColumnSpan::new(
                self.map(j).cols(),
                self.rank(j - 1),
                self.ring.nvars(),
                ord,
            );
            let next = ColumnSpan::new(
                self.map(j + 1).cols(),
                self.rank(j),
                self.ring.nvars(),
                ord,
            );
            for s in span_j.syzygies() {
                if !next.contains(&s) {
                    return false;
                }
            }
        }
        true
    }
}

/// Iterated syzygies until the kernel vanishes or `max_len` is reached.
pub fn free_resolution<K: Scalar>(
    m: &PresentedModule<K>,
    max_len: usize,
    ord: MonomialOrder,
) -> FreeResolution<K> {
    assert!(max_len >= 1, "max_len must be at least 1");
    let ring = m.ring().clone();
    let n = ring.nvars();
    let mut maps: Vec<PolyMat<K>> = Vec::new();
    let mut complete = true;
    if m.relations.ncols() > 0 {
        maps.push(m.relations.clone());
        loop {
            let last = maps.last().unwrap();
            let span = ColumnSpan::new(last.cols(), last.nrows(), n, ord);
            let syz = span.syzygies();
            if syz.is_empty() {
                break;
            }
            if maps.len() >= max_len {
                complete = false;
                break;
            }
            let ncols = last.ncols();
            maps.push(PolyMat::new(ncols, n, syz));
        }
    }
    let minimal = is_minimal(&maps);
    FreeResolution {
        ring,
        rank0: m.rank,
        maps,
        complete,
        minimal,
    }
}

fn is_minimal<K: Scalar>(maps: &[PolyMat<K>]) -> bool {
    maps.iter().all(|m| {
        (0..m.nrows())
            .all(|i| (0..m.ncols()).all(|j| m.entry(i, j).constant_term().is_zero()))
    })
}

/// Remove trivial summands: every nonzero *constant* entry is eliminated by
/// row and column operations, and the corresponding pair of basis elements
/// is dropped. (For graded presentations this reaches the minimal
/// resolution at the origin; leftover entries with nonzero constant term
/// would leave the `minimal` flag false.)
pub fn minimalize<K: Scalar>(res: &FreeResolution<K>) -> FreeResolution<K> {
    minimalize_from(res, 1)
}

/// Minimalize only at spots ≥ `first_spot` (spot j reduces f_j);
/// `first_spot = 2` keeps F₀ untouched.
pub fn minimalize_from<K: Scalar>(
    res: &FreeResolution<K>,
    first_spot: usize,
) -> FreeResolution<K> {
    let mut maps = res.maps.clone();
    let mut rank0 = res.rank0;
    let n = res.ring.nvars();
    'scan: loop {
        for jj in (first_spot - 1)..maps.len() {
            let m = &maps[jj];
            for c in 0..m.ncols() {
                for r in 0..m.nrows() {
                    let e = m.entry(r, c);
                    if !e.is_zero() && e.is_constant() {
                        eliminate(&mut maps, &mut rank0, jj, r, c, n);
                        continue 'scan;
                    }
                }
            }
        }
        break;
    }
    while let Some(last) = maps.last() {
        if last.ncols() == 0 {
            maps.pop();
        } else {
            break;
        }
    }
    let minimal = is_minimal(&maps);
    FreeResolution {
        ring: res.ring.clone(),
        rank0,
        maps,
        complete: res.complete,
        minimal,
    }
}

/// Eliminate the constant entry at (r, c) of f_{jj+1}, propagating basis
/// changes to the neighbouring maps, then delete the trivial summand.
fn eliminate<K: Scalar>(
    maps: &mut [PolyMat<K>],
    rank0: &mut usize,
    jj: usize,
    r: usize,
    c: usize,
    nvars: usize,
) {
    let u = maps[jj].entry(r, c).constant_term();
    let uinv = K::one() / u;
    // column operations on f_j clearing row r; companion row ops on f_{j+1}
    for c2 in 0..maps[jj].ncols() {
        if c2 == c {
            continue;
        }
        let v = maps[jj].entry(r, c2);
        if v.is_zero() {
            continue;
        }
        let lam = v.scale(&uinv);
        let delta = maps[jj].col(c).mul_poly(&lam).neg();
        let newcol = maps[jj].col(c2).add(&delta);
        replace_col(&mut maps[jj], c2, newcol);
        if jj + 1 < maps.len() {
            let next = &mut maps[jj + 1];
            for k in 0..next.ncols() {
                let add = next.entry(c2, k) * lam.clone();
                let cur = next.entry(c, k);
                next.set_entry(c, k, cur + add);
            }
        }
    }
    // row operations on f_j clearing column c; companion column ops on f_{j-1}
    for r2 in 0..maps[jj].nrows() {
        if r2 == r {
            continue;
        }
        let v = maps[jj].entry(r2, c);
        if v.is_zero() {
            continue;
        }
        let lam = v.scale(&uinv);
        for k in 0..maps[jj].ncols() {
            let sub = maps[jj].entry(r, k) * lam.clone();
            let cur = maps[jj].entry(r2, k);
            maps[jj].set_entry(r2, k, cur - sub);
        }
        if jj > 0 {
            let prev = &mut maps[jj - 1];
            let add = prev.col(r2).mul_poly(&lam);
            let newcol = prev.col(r).add(&add);
            replace_col(prev, r, newcol);
        }
    }
    maps[jj] = delete_row_col(&maps[jj], Some(r), Some(c), nvars);
    if jj > 0 {
        maps[jj - 1] = delete_row_col(&maps[jj - 1], None, Some(r), nvars);
    } else {
        *rank0 -= 1;
    }
    if jj + 1 < maps.len() {
        maps[jj + 1] = delete_row_col(&maps[jj + 1], Some(c), None, nvars);
    }
}

fn replace_col<K: Scalar>(m: &mut PolyMat<K>, j: usize, col: VecPoly<K>) {
    for i in 0..m.nrows() {
        m.set_entry(i, j, col.comp(i));
    }
}

fn delete_row_col<K: Scalar>(
    m: &PolyMat<K>,
    row: Option<usize>,
    col: Option<usize>,
    nvars: usize,
) -> PolyMat<K> {
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| Some(i) != row).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| Some(j) != col).collect();
    let mut out = PolyMat::zero(rows.len(), cols.len(), nvars);
    for (jj, &j) in cols.iter().enumerate() {
        for (ii, &i) in rows.iter().enumerate() {
            let e = m.entry(i, j);
            if !e.is_zero() {
                out.set_entry(ii, jj, e);
            }
        }
    }
    out
}

/// Rank-drop loci Z_j with their codimensions.
#[derive(Clone, Debug)]
pub struct SingularityLoci<K: Scalar> {
    pub loci: Vec<LocusEntry<K>>,
}

#[derive(Clone, Debug)]
pub struct LocusEntry<K: Scalar> {
    pub j: usize,
    pub expected_rank: usize,
    pub ideal: Ideal<K>,
    pub codim: Codim,
}

/// For each j, the ideal of ρ_j×ρ_j minors of f_j, where ρ_j is the generic
/// rank from the alternating-sum bookkeeping of the exact sequence.
pub fn rank_loci<K: Scalar>(
    res: &FreeResolution<K>,
    ord: MonomialOrder,
) -> Result<SingularityLoci<K>, HomalgError> {
    rank_loci_from(res, 1, ord)
}

/// Rank loci for spots j ≥ `from` only; purity needs just j ≥ κ + 1 and
/// the late minors are far cheaper than the early ones.
pub fn rank_loci_from<K: Scalar>(
    res: &FreeResolution<K>,
    from: usize,
    ord: MonomialOrder,
) -> Result<SingularityLoci<K>, HomalgError> {
    if !res.complete {
        return Err(HomalgError::IncompleteResolution);
    }
    let l = res.length();
    let ranks = res.ranks();
    let mut expected = vec![0usize; l + 2];
    for j in (1..=l).rev() {
        expected[j] = ranks[j] - expected[j + 1];
    }
    let mut loci = Vec::new();
    for j in from.max(1)..=l {
        let rho = expected[j];
        let minors = res.map(j).minors(rho);
        let ideal = Ideal::new(&res.ring, minors);
        let codim = ideal.codim(ord);
        loci.push(LocusEntry {
            j,
            expected_rank: rho,
            ideal,
            codim,
        });
    }
    Ok(SingularityLoci { loci })
}

#[derive(Clone, Debug)]
pub struct PurityCertificate {
    pub pure: bool,
    pub kappa: usize,
    /// (j, codim Z_j) for each resolution spot
    pub entries: Vec<(usize, usize)>,
}

/// Purity: codim Z_j ≥ j + 1 for all j ≥ κ + 1. Only those loci enter the
/// verdict, so only they are computed; the certificate lists them.
pub fn purity_test<K: Scalar>(
    res: &FreeResolution<K>,
    kappa: usize,
    ord: MonomialOrder,
) -> Result<PurityCertificate, HomalgError> {
    if !res.complete {
        return Err(HomalgError::IncompleteResolution);
    }
    let loci = rank_loci_from(res, kappa + 1, ord)?;
    let mut entries = Vec::new();
    let mut pure = true;
    for e in &loci.loci {
        entries.push((e.j, e.codim.value));
        if e.codim.value < e.j + 1 {
            pure = false;
        }
    }
    Ok(PurityCertificate {
        pure,
        kappa,
        entries,
    })
}

#[derive(Clone, Debug)]
pub struct CmCertificate {
    pub cohen_macaulay: bool,
    pub resolution_length: usize,
    pub kappa: usize,
}

/// Cohen–Macaulay iff the minimal resolution length equals the support
/// codimension.
pub fn cm_test<K: Scalar>(
    m: &PresentedModule<K>,
    ord: MonomialOrder,
) -> Result<CmCertificate, HomalgError> {
    if m.is_zero_module(ord) {
        return Err(HomalgError::ZeroModule("cm_test"));
    }
    let kappa = m.support_codim(ord).value;
    let res = free_resolution(m, m.ring().nvars() + 2, ord);
    let min = minimalize(&res);
    Ok(CmCertificate {
        cohen_macaulay: min.length() == kappa,
        resolution_length: min.length(),
        kappa,
    })
}

/// Ext^k(M, R): generators of ker f*_{k+1}, relations from im f*_k plus the
/// kernel's own syzygies.
#[derive(Clone, Debug)]
pub struct ExtModule<K: Scalar> {
    pub k: usize,
    /// kernel generators as vectors in F*_k = R^{r_k}
    pub gens: Vec<VecPoly<K>>,
    pub module: PresentedModule<K>,
    pub is_zero: bool,
}

pub fn ext_module<K: Scalar>(
    res: &FreeResolution<K>,
    k: usize,
    ord: MonomialOrder,
) -> ExtModule<K> {
    let ring = res.ring.clone();
    let n = ring.nvars();
    let l = res.length();
    if k > l {
        return ExtModule {
            k,
            gens: vec![],
            module: PresentedModule::free(&ring, 0),
            is_zero: true,
        };
    }
    let rk = res.rank(k);
    let gens: Vec<VecPoly<K>> = if k == l {
        (0..rk).map(|i| VecPoly::unit(rk, i, n)).collect()
    } else {
        let t = res.map(k + 1).transpose();
        let span = ColumnSpan::new(t.cols(), t.nrows(), n, ord);
        span.syzygies()
    };
    if gens.is_empty() {
        return ExtModule {
            k,
            gens: vec![],
            module: PresentedModule::free(&ring, 0),
            is_zero: true,
        };
    }
    let gen_span = ColumnSpan::new(&gens, rk, n, ord);
    let mut rel_cols: Vec<VecPoly<K>> = Vec::new();
    if k >= 1 {
        let fk_star = res.map(k).transpose();
        for c in fk_star.cols() {
            let q = gen_span
                .lift(c)
                .expect("image of the dual map must lie in the kernel of the next");
            rel_cols.push(VecPoly::from_entries(
                gens.len(),
                q.into_iter().enumerate().collect(),
            ));
        }
    }
    rel_cols.extend(gen_span.syzygies());
    let module = PresentedModule::new(&ring, gens.len(), PolyMat::new(gens.len(), n, rel_cols));
    let is_zero = module.is_zero_module(ord);
    ExtModule {
        k,
        gens,
        module,
        is_zero,
    }
}

/// Ext^k(M, R) for k in an inclusive range.
pub fn ext_modules<K: Scalar>(
    m: &PresentedModule<K>,
    lo: usize,
    hi: usize,
    ord: MonomialOrder,
) -> Vec<ExtModule<K>> {
    let res = free_resolution(m, m.ring().nvars() + 2, ord);
    let min = minimalize_from(&res, 2);
    (lo..=hi).map(|k| ext_module(&min, k, ord)).collect()
}

#[derive(Clone, Debug)]
pub struct HullResult<K: Scalar> {
    /// M / torsion, presented on the same ambient generators as M.
    pub hull: PresentedModule<K>,
    /// generators of the torsion submodule, as vectors in F₀
    pub torsion_gens: Vec<VecPoly<K>>,
}

/// Equidimensional hull: quotient by the submodule of sections supported in
/// codimension > κ. The torsion is the kernel of the biduality map
/// M → Ext^κ(Ext^κ(M, R), R), realized by lifting a resolution of
/// Ext^κ(M, R) against the dual complex and transposing the top map.
pub fn equidim_hull<K: Scalar>(
    m: &PresentedModule<K>,
    kappa: usize,
    ord: MonomialOrder,
) -> Result<HullResult<K>, HomalgError> {
    let ring = m.ring().clone();
    let n = ring.nvars();
    if m.is_zero_module(ord) {
        return Ok(HullResult {
            hull: m.clone(),
            torsion_gens: vec![],
        });
    }
    let support = m.support_codim(ord);
    if support.value > kappa {
        // the whole module lives in codim > κ
        let torsion_gens: Vec<VecPoly<K>> =
            (0..m.rank).map(|i| VecPoly::unit(m.rank, i, n)).collect();
        let mut cols = m.relations.cols().to_vec();
        cols.extend(torsion_gens.clone());
        let hull = PresentedModule::new(&ring, m.rank, PolyMat::new(m.rank, n, cols));
        return Ok(HullResult { hull, torsion_gens });
    }
    if support.value < kappa {
        return Err(HomalgError::CodimMismatch {
            expected: kappa,
            found: support.value,
        });
    }
    let res0 = free_resolution(m, n + 2, ord);
    if !res0.complete {
        return Err(HomalgError::IncompleteResolution);
    }
    let res = minimalize_from(&res0, 2);
    let ext = ext_module(&res, kappa, ord);
    if ext.is_zero {
        return Err(HomalgError::LiftFailed(
            "Ext^kappa vanished for a module of support codimension kappa",
        ));
    }
    let g_res = free_resolution(&ext.module, kappa + n + 2, ord);
    if g_res.length() < kappa {
        return Err(HomalgError::LiftFailed(
            "resolution of the Ext module is shorter than kappa",
        ));
    }
    // chain lift ρ_j: G_j → F*_{κ-j}, ρ₀ = kernel generators
    let mut rho = PolyMat::new(res.rank(kappa), n, ext.gens.clone());
    for j in 1..=kappa {
        // solve f*_{κ-j+1}·ρ_j = ρ_{j-1}·g_j column by column
        let fstar = res.map(kappa - j + 1).transpose();
        let span = ColumnSpan::new(fstar.cols(), fstar.nrows(), n, ord);
        let rhs = fstar_rhs(&rho, g_res.map(j));
        let mut cols = Vec::new();
        for c in rhs.cols() {
            let q = span
                .lift(c)
                .ok_or(HomalgError::LiftFailed("chain-map lift not solvable"))?;
            cols.push(VecPoly::from_entries(
                fstar.ncols(),
                q.into_iter().enumerate().collect(),
            ));
        }
        rho = PolyMat::new(fstar.ncols(), n, cols);
    }
    // θ: F₀ → G*_κ; torsion = θ⁻¹(im g*_κ) modulo im f₁
    let theta = rho.transpose();
    debug_assert_eq!(theta.ncols(), m.rank);
    let gk_star = g_res.map(kappa).transpose();
    let mut block: Vec<VecPoly<K>> = theta.cols().to_vec();
    block.extend(gk_star.cols().iter().cloned());
    let span = ColumnSpan::new(&block, theta.nrows(), n, ord);
    let rel_span = m.relation_span(ord);
    let mut torsion_gens: Vec<VecPoly<K>> = Vec::new();
    for s in span.syzygies() {
        let cand = s.slice(0, m.rank);
        if cand.is_zero() || rel_span.contains(&cand) {
            continue;
        }
        torsion_gens.push(cand);
    }
    torsion_gens.sort_by_key(render_vec);
    let mut kept: Vec<VecPoly<K>> = Vec::new();
    for t in &torsion_gens {
        let mut cols = m.relations.cols().to_vec();
        cols.extend(kept.iter().cloned());
        let span = ColumnSpan::new(&cols, m.rank, n, ord);
        if !span.contains(t) {
            kept.push(t.clone());
        }
    }
    let mut cols = m.relations.cols().to_vec();
    cols.extend(kept.clone());
    let hull = PresentedModule::new(&ring, m.rank, PolyMat::new(m.rank, n, cols));
    Ok(HullResult {
        hull,
        torsion_gens: kept,
    })
}

fn fstar_rhs<K: Scalar>(rho: &PolyMat<K>, g: &PolyMat<K>) -> PolyMat<K> {
    rho.mul(g)
}

fn render_vec<K: Scalar>(v: &VecPoly<K>) -> String {
    let deg = v.max_total_degree().unwrap_or(0);
    let body: Vec<String> = v.iter().map(|(i, p)| format!("{i}:{p}")).collect();
    format!("{deg:04}|{}", body.join(";"))
}
