//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime. Run with `cargo test --test acceptance -- --nocapture`.

use nilform::barlet::{barlet_generators, completeness_check, noetherian_operators};
use nilform::currents::{ch_module_equal, parse_ch, ChExpr};
use nilform::forms::label_from_indices;
use nilform::gb::{module_gb, normal_form_certified, VecPoly};
use nilform::homalg::{
    cm_test, ext_module, free_resolution, minimalize, minimalize_from, rank_loci_from,
    PresentedModule,
};
use nilform::ideal::Ideal;
use nilform::kaehler::{in_oz_span, oz_generators, strong_forms, OzGenerator};
use nilform::pairing::{generic_injectivity, membership_duality, t_matrix};
use nilform::parse::parse_poly;
use nilform::poly::Polynomial;
use nilform::sample::Sampler;
use nilform::scalar::Scalar;
use nilform::{MonomialOrder, Poly, Rat, Ring, Vector, DEFAULT_ORDER};
use std::time::Instant;

const ORD: MonomialOrder = DEFAULT_ORDER;

fn ring4() -> Ring {
    Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap()
}

fn ideal(r: &Ring, gens: &[&str]) -> Ideal<Rat> {
    Ideal::new(r, gens.iter().map(|s| parse_poly(r, s).unwrap()).collect())
}

fn j71(r: &Ring) -> Ideal<Rat> {
    ideal(r, &["w1^2", "w2^2", "w1*w2"])
}

fn j72(r: &Ring) -> Ideal<Rat> {
    ideal(r, &["w1^2", "w2^2", "w1*w2", "z1*w2 - z2*w1"])
}

fn pass(criterion: &str, what: &str, t0: Instant) {
    println!(
        "acceptance {criterion}: PASS ({what}) in {:.2}s",
        t0.elapsed().as_secs_f64()
    );
}

/// Monomial-example structure: O_X basis {1, w1, w2}, free of rank 3, and
/// the degree-1 generators module-equal to the displayed list.
#[test]
fn criterion_1_structure_of_the_monomial_example() {
    let t0 = Instant::now();
    let r = ring4();
    let j = j71(&r);

    let set0 = oz_generators(&j, 0, ORD).unwrap();
    assert!(set0.free);
    assert_eq!(set0.nu, 3);
    let expect = [
        (vec![0u32, 0], 0u32),
        (vec![0, 1], 0),
        (vec![1, 0], 0),
    ];
    let got: Vec<(Vec<u32>, u32)> = set0
        .generators
        .iter()
        .map(|g| (g.alpha.clone(), g.label))
        .collect();
    assert_eq!(got, expect, "O_X basis must be exactly {{1, w2, w1}}");

    // degree-1 generators against the displayed list
    let set1 = oz_generators(&j, 1, ORD).unwrap();
    assert!(set1.free);
    assert_eq!(set1.nu, 9);
    let strong = strong_forms(&j, 1, ORD).unwrap();
    let jp_gb = module_gb(strong.forms.presentation.cols(), ORD);
    let basis = &set1.basis;
    let mine: Vec<Vector> = set1
        .generators
        .iter()
        .map(|g| g.as_vector::<Rat>(&r, basis))
        .collect();
    // display: dz_i·{1, w1, w2} plus {dw1, dw2, w1·dw2 − w2·dw1}
    let p = |s: &str| parse_poly::<Rat>(&r, s).unwrap();
    let lab = |idx: &[usize]| basis.index_of(label_from_indices(idx));
    let mut display: Vec<Vector> = Vec::new();
    for zi in 0..2 {
        for m in ["1", "w1", "w2"] {
            display.push(Vector::from_entries(4, vec![(lab(&[zi]), p(m))]));
        }
    }
    display.push(Vector::from_entries(4, vec![(lab(&[2]), p("1"))]));
    display.push(Vector::from_entries(4, vec![(lab(&[3]), p("1"))]));
    display.push(Vector::from_entries(
        4,
        vec![(lab(&[3]), p("w1")), (lab(&[2]), p("-w2"))],
    ));
    assert!(
        nilform::kaehler::oz_module_equal(&set1, &mine, &display, &jp_gb, ORD),
        "computed degree-1 generators must match the displayed module"
    );
    assert!(t0.elapsed().as_secs() < 10, "runtime budget 10 s exceeded");
    pass("1", "monomial-example structure, nu = 3 and 9", t0);
}

/// Monomial-example Barlet generators: module-equal to the three-element
/// displayed set.
#[test]
fn criterion_2_barlet_generators_of_the_monomial_example() {
    let t0 = Instant::now();
    let r = ring4();
    let data = barlet_generators(&j71(&r), 0, ORD).unwrap();
    let paper: Vec<ChExpr<Rat>> = [
        "dz[1,2]^dw[1,2] * dbar(1/w1)^dbar(1/w2)",
        "dz[1,2]^dw[1,2] * dbar(1/w1^2)^dbar(1/w2)",
        "dz[1,2]^dw[1,2] * dbar(1/w1)^dbar(1/w2^2)",
    ]
    .iter()
    .map(|s| parse_ch(&r, s).unwrap())
    .collect();
    assert!(ch_module_equal(&r, &data.generators, &paper, ORD));
    assert!(t0.elapsed().as_secs() < 30, "runtime budget 30 s exceeded");
    pass("2", "three generators, module-equal", t0);
}

/// Second example: the degree-2, degree-1, and degree-0 Barlet modules
/// match the displayed lists of 2, 5, and 4 generators.
#[test]
fn criterion_3_barlet_generators_of_the_second_example() {
    let t0 = Instant::now();
    let r = ring4();
    let j = j72(&r);

    let ba2: Vec<ChExpr<Rat>> = [
        "dbar(1/w1)^dbar(1/w2)^dz[1,2]^dw[1,2]",
        "z1 * dbar(1/w1^2)^dbar(1/w2)^dz[1,2]^dw[1,2] + z2 * dbar(1/w1)^dbar(1/w2^2)^dz[1,2]^dw[1,2]",
    ]
    .iter()
    .map(|s| parse_ch(&r, s).unwrap())
    .collect();
    let data = barlet_generators(&j, 0, ORD).unwrap();
    assert!(ch_module_equal(&r, &data.generators, &ba2, ORD), "degree 2");

    let ba1: Vec<ChExpr<Rat>> = [
        "dz[1]^dw[1,2] * dbar(1/w2)^dbar(1/w1)",
        "dz[2]^dw[1,2] * dbar(1/w2)^dbar(1/w1)",
        "(z2*w1 + z1*w2) * dz[2]^dw[1,2] * dbar(1/w2^2)^dbar(1/w1^2) + w1*w2 * dz[1,2]^dw[2] * dbar(1/w2^2)^dbar(1/w1^2)",
        "(z2*w1 + z1*w2) * dz[1]^dw[1,2] * dbar(1/w2^2)^dbar(1/w1^2) + w1*w2 * dz[1,2]^dw[1] * dbar(1/w2^2)^dbar(1/w1^2)",
        "z2 * dz[1,2]^dw[1] * dbar(1/w2)^dbar(1/w1) - z1 * dz[1,2]^dw[2] * dbar(1/w2)^dbar(1/w1)",
    ]
    .iter()
    .map(|s| parse_ch(&r, s).unwrap())
    .collect();
    let data = barlet_generators(&j, 1, ORD).unwrap();
    assert!(ch_module_equal(&r, &data.generators, &ba1, ORD), "degree 1");

    let ba0: Vec<ChExpr<Rat>> = [
        "dw[1,2] * dbar(1/w2)^dbar(1/w1)",
        "(z2*w1 + z1*w2) * dw[1,2] * dbar(1/w2^2)^dbar(1/w1^2) + w1*w2 * dz[2]^dw[1] * dbar(1/w2^2)^dbar(1/w1^2) - w1*w2 * dz[1]^dw[2] * dbar(1/w2^2)^dbar(1/w1^2)",
        "z1 * dz[1]^dw[2] * dbar(1/w2)^dbar(1/w1) - z2 * dz[1]^dw[1] * dbar(1/w2)^dbar(1/w1)",
        "z1 * dz[2]^dw[2] * dbar(1/w2)^dbar(1/w1) - z2 * dz[2]^dw[1] * dbar(1/w2)^dbar(1/w1)",
    ]
    .iter()
    .map(|s| parse_ch(&r, s).unwrap())
    .collect();
    let data = barlet_generators(&j, 2, ORD).unwrap();
    assert!(ch_module_equal(&r, &data.generators, &ba0, ORD), "degree 0");

    assert!(t0.elapsed().as_secs() < 120, "runtime budget 2 min exceeded");
    pass("3", "2/5/4 generators, module-equal", t0);
}

/// Torsion of the degree-1 Kähler module for J = <z·w>: generated by
/// {z dw, w dz} exactly.
#[test]
fn criterion_4_torsion_of_the_axes_example() {
    let t0 = Instant::now();
    let r = Ring::new(&["z"], &["w"]).unwrap();
    let j = ideal(&r, &["z*w"]);
    let s = strong_forms(&j, 1, ORD).unwrap();
    let p = |t: &str| parse_poly::<Rat>(&r, t).unwrap();
    let expected = vec![
        Vector::from_entries(2, vec![(0, p("w"))]),
        Vector::from_entries(2, vec![(1, p("z"))]),
    ];
    // two-way span equality modulo the degree-1 relations
    let jh = nilform::kaehler::jhat_presentation(&j, 1).unwrap();
    let mut a = jh.presentation.cols().to_vec();
    a.extend(s.torsion_gens.clone());
    let span_a = nilform::gb::ColumnSpan::new(&a, 2, 2, ORD);
    for e in &expected {
        assert!(span_a.contains(e));
    }
    let mut b = jh.presentation.cols().to_vec();
    b.extend(expected.clone());
    let span_b = nilform::gb::ColumnSpan::new(&b, 2, 2, ORD);
    for t in &s.torsion_gens {
        assert!(span_b.contains(t));
    }
    assert!(!s.torsion_gens.is_empty());
    pass("4", "torsion {z dw, w dz}", t0);
}

fn three_routes(m: &PresentedModule<Rat>) -> (bool, bool, bool) {
    let cm = cm_test(m, ORD).unwrap();
    let kappa = cm.kappa;
    let res = minimalize(&free_resolution(m, m.ring().nvars() + 2, ORD));
    let mut ext_all = true;
    for k in (kappa + 1)..=res.length() {
        ext_all &= ext_module(&res, k, ORD).is_zero;
    }
    let loci = rank_loci_from(&res, kappa + 1, ORD).unwrap();
    let n = m.ring().nvars();
    let loci_empty = loci.loci.iter().all(|e| e.codim.value == n + 1);
    (cm.cohen_macaulay, ext_all, loci_empty)
}

/// Cohen–Macaulayness, Ext vanishing, and rank-locus emptiness agree on the
/// worked examples and on five seeded monomial ideals.
#[test]
fn criterion_5_cm_ext_consistency() {
    let t0 = Instant::now();
    let r = ring4();
    for j in [j71(&r), j72(&r)] {
        let strong = strong_forms(&j, 0, ORD).unwrap();
        let (a, b, c) = three_routes(&strong.forms.module());
        assert!(a == b && b == c, "routes disagree on a worked example");
    }
    let mut sampler = Sampler::new(0);
    let mut found = 0;
    while found < 5 {
        let k = 2 + (found % 3);
        let mut gens: Vec<Poly> = Vec::new();
        for _ in 0..k {
            let mut e = sampler.monomial(4, 3);
            if e.iter().all(|&x| x == 0) {
                e[0] = 1;
            }
            gens.push(Polynomial::monomial(e, Rat::from_int(1)));
        }
        let j = Ideal::new(&r, gens);
        if j.is_zero() || j.is_unit(ORD) {
            continue;
        }
        let m = PresentedModule::quotient_ring(&j);
        let (a, b, c) = three_routes(&m);
        assert!(
            a == b && b == c,
            "routes disagree on seeded monomial ideal #{found}: {a} {b} {c}"
        );
        found += 1;
    }
    pass("5", "three routes agree on 2 + 5 instances", t0);
}

/// Noetherian completeness: 200 seeded members of J^p are annihilated by
/// every operator and 50 certified non-members are each detected.
#[test]
fn criterion_6_noetherian_completeness() {
    let t0 = Instant::now();
    let r = ring4();
    for (name, j) in [("first", j71(&r)), ("second", j72(&r))] {
        for p in 0..=2 {
            let data = barlet_generators(&j, p, ORD).unwrap();
            let ops = noetherian_operators(&data);
            let rep = completeness_check(&data, &ops, 200, 50, 0, ORD);
            assert!(
                rep.passed(),
                "{name} example p={p}: {} member failures, {} non-member failures",
                rep.member_failures.len(),
                rep.nonmember_failures.len()
            );
        }
    }
    assert!(t0.elapsed().as_secs() < 300, "runtime budget 5 min exceeded");
    pass("6", "6 configurations x (200 + 50) trials, zero failures", t0);
}

/// Independent oracle for residue evaluation: coefficient extraction by
/// monomial filtering (no derivatives, no factorials).
fn taylor_oracle(ring: &Ring, psi: &Poly, beta: &[u32]) -> Poly {
    let nz = ring.nz();
    let mut out = Poly::zero(ring.nvars());
    for (e, c) in psi.terms() {
        if e[nz..] == *beta {
            let mut ze = e.clone();
            for x in ze[nz..].iter_mut() {
                *x = 0;
            }
            out.add_term(ze, c.clone());
        }
    }
    out
}

/// 500 seeded random polynomials of degree ≤ 4: evaluation agrees exactly
/// with direct Taylor-coefficient extraction.
#[test]
fn criterion_7_residue_evaluation_oracle() {
    let t0 = Instant::now();
    let r = ring4();
    let mut sampler = Sampler::new(0);
    for _ in 0..500 {
        let psi: Poly = sampler.poly(&r, 4, 5);
        let beta = vec![
            sampler.monomial(1, 3)[0],
            sampler.monomial(1, 3)[0],
        ];
        let e: ChExpr<Rat> = ChExpr::from_terms(
            &r,
            vec![nilform::currents::ChTerm {
                coef: Poly::one(4),
                label: 0,
                dbars: beta.iter().map(|&b| Some(b)).collect(),
            }],
        );
        let via_eval = e.evaluate(&psi).scalar();
        let via_oracle = taylor_oracle(&r, &psi, &beta);
        assert_eq!(via_eval, via_oracle);
    }
    pass("7", "500 trials, exact agreement", t0);
}

/// T̃ has full column rank for both examples at p = 0, and the matrix-level
/// membership duality holds on 50 seeded forms per example.
#[test]
fn criterion_8_pairing_injectivity_and_duality() {
    let t0 = Instant::now();
    let r = ring4();
    for (name, j) in [("first", j71(&r)), ("second", j72(&r))] {
        let data = barlet_generators(&j, 0, ORD).unwrap();
        let oz = oz_generators(&j, 0, ORD).unwrap();
        let t = t_matrix(&data, &oz).unwrap();
        let v = generic_injectivity(&t, ORD);
        assert!(
            v.injective,
            "{name}: rank {} < {} columns",
            v.rank,
            t.ncols()
        );
        let mut sampler = Sampler::new(0);
        let basis = &data.strong.forms.basis;
        let gens = data.strong.forms.presentation.cols();
        for trial in 0..50 {
            // alternate free draws with certified members
            let phi = if trial % 3 == 2 {
                sampler.combination::<Rat>(&r, gens, 2)
            } else {
                sampler.form::<Rat>(&r, basis, 3, 3)
            };
            let (tz, member) = membership_duality(&data, &oz, &t, &phi, ORD);
            assert_eq!(tz, member, "{name}: duality failed on trial {trial}");
        }
    }
    pass("8", "full column rank and 50-form duality on both examples", t0);
}

/// Property bundle: division certificates, the Buchberger criterion,
/// chain-map identities, the residue-decomposition round-trip, and the
/// saturation/hull idempotences.
#[test]
fn criterion_9_property_suites() {
    let t0 = Instant::now();
    let r = ring4();
    let mut sampler = Sampler::new(0);

    // division certificates: f = Σ q·g + r exactly, on random instances
    for _ in 0..10 {
        let gens: Vec<Poly> = (0..3).map(|_| sampler.poly(&r, 3, 3)).collect();
        let i = Ideal::new(&r, gens);
        if i.is_zero() {
            continue;
        }
        let gb = i.groebner_basis(ORD);
        let f: Poly = sampler.poly(&r, 4, 4);
        let (rem, q) = nilform::ideal::normal_form_with_quotients(&f, &gb, ORD);
        let mut acc = rem.clone();
        for (qi, gi) in q.iter().zip(gb.iter()) {
            acc = acc + qi * gi;
        }
        assert_eq!(acc, f, "division certificate violated");
    }

    // Buchberger criterion: all S-polynomials of an emitted basis reduce to 0
    for seed in [1u64, 2, 3] {
        let mut s = Sampler::new(seed);
        let gens: Vec<Poly> = (0..3).map(|_| s.poly(&r, 2, 3)).collect();
        let i = Ideal::new(&r, gens);
        if i.is_zero() {
            continue;
        }
        let gb = i.groebner_basis(ORD);
        for a in 0..gb.len() {
            for b in (a + 1)..gb.len() {
                let la = gb[a].lead_exp(ORD).unwrap().clone();
                let lb = gb[b].lead_exp(ORD).unwrap().clone();
                let l = nilform::order::exp_lcm(&la, &lb);
                let qa = nilform::order::exp_div(&l, &la).unwrap();
                let qb = nilform::order::exp_div(&l, &lb).unwrap();
                let ca = gb[a].lead_term(ORD).unwrap().1.clone();
                let cb = gb[b].lead_term(ORD).unwrap().1.clone();
                let spoly = gb[a].mul_monomial(&qa, &(Rat::from_int(1) / ca))
                    - gb[b].mul_monomial(&qb, &(Rat::from_int(1) / cb));
                assert!(nilform::ideal::normal_form(&spoly, &gb, ORD).is_zero());
            }
        }
    }

    // chain-map identities f_j·a_j = a_{j−1}·g_j for both examples
    for j in [j71(&r), j72(&r)] {
        let strong = strong_forms(&j, 0, ORD).unwrap();
        let res = minimalize_from(
            &free_resolution(&strong.forms.module(), 6, ORD),
            2,
        );
        let chain = nilform::barlet::koszul_lift(&res, 2, ORD).unwrap();
        for jj in 1..=2usize {
            let lhs = res.map(jj).mul(&chain.a[jj]);
            let rhs = chain.a[jj - 1].mul(&chain.g[jj - 1]);
            for c in 0..rhs.ncols() {
                assert!(lhs.col(c).sub(rhs.col(c)).is_zero());
            }
        }
    }

    // residue-decomposition round-trip on seeded expressions
    for _ in 0..5 {
        let mut terms = Vec::new();
        for _ in 0..3 {
            let zpoly: Poly = sampler.poly(&r.z_subring(), 2, 2);
            terms.push(nilform::currents::ChTerm {
                coef: zpoly.extend_vars(4),
                label: label_from_indices(&[0, 2, 3]),
                dbars: vec![
                    Some(sampler.monomial(1, 2)[0]),
                    Some(sampler.monomial(1, 2)[0]),
                ],
            });
        }
        let e: ChExpr<Rat> = ChExpr::from_terms(&r, terms);
        let bound = e.max_dbar_exponents().iter().sum::<u32>() as usize + 1;
        let mut parts = Vec::new();
        for a in nilform::zmod::w_monomials_below(2, bound) {
            let p = e.project(&a);
            if !p.is_zero() {
                parts.push((a, p));
            }
        }
        assert_eq!(ChExpr::from_projections(&r, &parts), e);
    }

    // saturation idempotence on seeded ideals
    for seed in [5u64, 6, 7] {
        let mut s = Sampler::new(seed);
        let gens: Vec<Poly> = (0..2).map(|_| s.poly(&r, 2, 2)).collect();
        let i = Ideal::new(&r, gens);
        let by = ideal(&r, &["w1", "w2"]);
        if i.is_zero() {
            continue;
        }
        let s1 = i.saturate(&by, ORD).unwrap();
        let s2 = s1.saturate(&by, ORD).unwrap();
        assert!(s1.equals(&s2, ORD));
    }

    // hull idempotence on the torsion-carrying example
    {
        let r2 = Ring::new(&["z"], &["w"]).unwrap();
        let j = ideal(&r2, &["z*w"]);
        let kae = nilform::kaehler::kaehler_module(&j, 1).unwrap();
        let h1 = nilform::homalg::equidim_hull(&kae.module(), 1, ORD).unwrap();
        let h2 = nilform::homalg::equidim_hull(&h1.hull, 1, ORD).unwrap();
        assert!(!h1.torsion_gens.is_empty());
        assert!(h2.torsion_gens.is_empty());
    }

    // O_Z generators: the spanning property for the monomial example at p=0
    {
        let j = j71(&r);
        let set = oz_generators(&j, 0, ORD).unwrap();
        let strong = strong_forms(&j, 0, ORD).unwrap();
        let jp_gb = module_gb(strong.forms.presentation.cols(), ORD);
        let span: Vec<Vector> = set
            .generators
            .iter()
            .map(|g| g.as_vector::<Rat>(&r, &set.basis))
            .collect();
        for alpha in nilform::zmod::w_monomials_below(2, set.exponent_bound) {
            let g = OzGenerator {
                alpha,
                label: 0,
            };
            let v = g.as_vector::<Rat>(&r, &set.basis);
            assert!(in_oz_span(&set, &span, &v, &jp_gb, ORD));
        }
    }

    // the certificate identity of normal forms at module level
    {
        let gens: Vec<Vector> = (0..3)
            .map(|_| sampler.form::<Rat>(&r, &nilform::forms::FormBasis::new(4, 1), 2, 2))
            .collect();
        let gb = module_gb(&gens, ORD);
        let v = sampler.form::<Rat>(&r, &nilform::forms::FormBasis::new(4, 1), 3, 3);
        let (rem, q) = normal_form_certified(&v, &gb, ORD);
        let mut acc = rem;
        for (qi, gi) in q.iter().zip(gb.iter()) {
            acc = acc.add(&gi.mul_poly(qi));
        }
        assert_eq!(acc, v);
    }

    pass("9", "property bundle", t0);
}

/// Syzygy exactness on seeded matrices: A · syz(A) = 0 identically.
#[test]
fn syzygy_exactness_property() {
    let r = ring4();
    let mut sampler = Sampler::new(42);
    for _ in 0..5 {
        let cols: Vec<VecPoly<Rat>> = (0..3)
            .map(|_| {
                let mut v = VecPoly::zero(2);
                v.add_to(0, sampler.poly(&r, 2, 2));
                v.add_to(1, sampler.poly(&r, 2, 2));
                v
            })
            .collect();
        let span = nilform::gb::ColumnSpan::new(&cols, 2, 4, ORD);
        for s in span.syzygies() {
            let mut acc = VecPoly::zero(2);
            for (i, c) in cols.iter().enumerate() {
                acc = acc.add(&c.mul_poly(&s.comp(i)));
            }
            assert!(acc.is_zero(), "syzygy does not annihilate the columns");
        }
    }
}
