//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//! All comparisons are exact (tolerance zero); the stated wall-clock budgets
//! are asserted where given.

use dixmier_core::catalog;
use dixmier_core::coadjoint::{
    coad, exp_ad, lattice_bound, lattice_containment, orbit_kernel_compare,
};
use dixmier_core::corpus::{acceptance_corpus, random_form, random_lattice_vector};
use dixmier_core::dixmier::{
    control_check_kernel, ideal_generated_truncated, induce_rank1, kernel_truncated,
    perp_partials_in_image, rank1_brute_y, reduce_to_bottom, AdaptedBasis, InducedModuleOracle,
    RhoMap,
};
use dixmier_core::forms::{
    irreducible_polarisation, is_metabelian, is_polarisation, is_special, reducing_quadruple,
    stabilizer, vergne_polarisation, LinearForm,
};
use dixmier_core::linalg::{unit, vec_scale, Subspace, Vector};
use dixmier_core::pbw::{monomials_up_to, PbwElement};
use dixmier_core::scalars::{p_power, rat, rint, Rat};
use dixmier_core::weyl::Poly;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

const SEED: u64 = 1789;

fn finish(name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("[acceptance] {name}: PASS");
    } else {
        println!("[acceptance] {name}: FAIL");
        for f in &failures {
            println!("  {f}");
        }
        panic!("{name} failed with {} issue(s)", failures.len());
    }
}

fn lf(entries: &[i64], p: u64) -> LinearForm {
    LinearForm::integral(entries.iter().map(|&e| rint(e)).collect(), p).unwrap()
}

fn v(entries: &[i64]) -> Vector {
    entries.iter().map(|&e| rint(e)).collect()
}

/// C1: [ρ(e_i), ρ(e_j)] = ρ([e_i, e_j]) exactly over ≥ 50 (algebra, form)
/// pairs; expected under 10 s.
#[test]
fn c01_homomorphism_suite() {
    let start = Instant::now();
    let corpus = acceptance_corpus(3, SEED, 50);
    assert!(corpus.len() >= 50);
    let mut failures = Vec::new();
    for entry in &corpus {
        let b = match irreducible_polarisation(&entry.algebra, &entry.form) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("{}: polarisation failed: {e}", entry.label));
                continue;
            }
        };
        // RhoMap::new verifies the commutator identity on every basis pair.
        if let Err(e) = RhoMap::new(&entry.algebra, &entry.form, &b) {
            failures.push(format!("{}: {e}", entry.label));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 10.0 {
        failures.push(format!("runtime {elapsed:?} exceeded 10 s"));
    }
    finish("C1 homomorphism-suite", failures);
}

/// C2: apply(ρ(u), m) = brute-force module action for every corpus algebra,
/// basis vector u and monomial |m| ≤ 5; expected under 30 s.
#[test]
fn c02_oracle_equivalence() {
    let start = Instant::now();
    let corpus = acceptance_corpus(3, SEED, 50);
    let mut failures = Vec::new();
    for entry in &corpus {
        let g = &entry.algebra;
        let l = &entry.form;
        let b = irreducible_polarisation(g, l).unwrap();
        let rm = RhoMap::new(g, l, &b).unwrap();
        let ab = AdaptedBasis::new(g, l, &b).unwrap();
        let oracle = InducedModuleOracle::new(g, l, &ab).unwrap();
        'entry: for m in monomials_up_to(ab.rank(), 5) {
            for i in 0..g.dim() {
                let f = Poly::monomial(ab.rank(), m.clone(), Rat::one());
                let via_rho = rm.images[i].apply(&f);
                let via_module = oracle.act(&unit(g.dim(), i), &m).unwrap();
                if via_rho != via_module {
                    failures.push(format!(
                        "{}: mismatch at basis {} monomial {m:?}",
                        entry.label,
                        g.name(i)
                    ));
                    break 'entry;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 30.0 {
        failures.push(format!("runtime {elapsed:?} exceeded 30 s"));
    }
    finish("C2 oracle-equivalence", failures);
}

/// C3: for H3 with λ(z) = β ∈ {1, 2, 1/1, −3}, the truncated kernel equals
/// the two-sided span of z − β for D ≤ 3.
#[test]
fn c03_heisenberg_annihilator() {
    let mut failures = Vec::new();
    let g = catalog::heisenberg3(3);
    let betas: Vec<Rat> = vec![rint(1), rint(2), rat(1, 1), rint(-3)];
    for beta in &betas {
        let coords = vec![rint(0), rint(0), beta.clone()];
        let l = LinearForm::integral(coords, 3).unwrap();
        let b = irreducible_polarisation(&g, &l).unwrap();
        for degree in 1..=3u32 {
            let ker = kernel_truncated(&g, &l, &b, degree)
                .unwrap()
                .to_standard(&g)
                .unwrap();
            let mut gen = PbwElement::zero();
            gen.add_term(vec![0, 0, 1], Rat::one());
            gen.add_term(vec![0, 0, 0], -beta.clone());
            let ideal = ideal_generated_truncated(&g, &[gen], degree).unwrap();
            if ker != ideal {
                failures.push(format!(
                    "beta = {beta}, degree {degree}: kernel rank {} vs ideal rank {}",
                    ker.rank(),
                    ideal.rank()
                ));
            }
        }
    }
    finish("C3 heisenberg-annihilator", failures);
}

/// C4: every Vergne polarisation over the corpus passes the polarisation
/// check and contains g^λ, Z(g), and the through-ideal when supplied.
#[test]
fn c04_polarisation_invariants() {
    let mut failures = Vec::new();
    for entry in acceptance_corpus(3, SEED, 50) {
        let g = &entry.algebra;
        let l = &entry.form;
        let b = match vergne_polarisation(g, l, None) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("{}: {e}", entry.label));
                continue;
            }
        };
        if is_polarisation(g, l, &b.subspace).is_err() {
            failures.push(format!("{}: vergne output fails the check", entry.label));
        }
        if !b.subspace.contains(&stabilizer(g, l)) {
            failures.push(format!("{}: stabiliser not contained", entry.label));
        }
        if !b.subspace.contains(&g.centre()) {
            failures.push(format!("{}: centre not contained", entry.label));
        }
        // Through-ideal variant: the centre is always an isotropic ideal.
        let centre = g.centre();
        match vergne_polarisation(g, l, Some(&centre)) {
            Ok(bt) => {
                if !bt.subspace.contains(&centre) {
                    failures.push(format!("{}: through-ideal not contained", entry.label));
                }
                if is_polarisation(g, l, &bt.subspace).is_err() {
                    failures.push(format!("{}: through variant fails check", entry.label));
                }
            }
            Err(e) => failures.push(format!("{}: through variant: {e}", entry.label)),
        }
    }
    // Named through-ideal fixtures.
    let g = catalog::filiform4(3);
    let l = lf(&[0, 0, 0, 1], 3);
    let a = Subspace::span(4, vec![v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]);
    let b = vergne_polarisation(&g, &l, Some(&a)).unwrap();
    if b.subspace
        != Subspace::span(
            4,
            vec![v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])],
        )
    {
        failures.push("f4 through-ideal fixture mismatch".into());
    }
    finish("C4 polarisation-invariants", failures);
}

/// C5: after deforming each corpus algebra to powerful level, every ρ(e_i)
/// lies in the integral Weyl form.
#[test]
fn c05_powerful_integrality() {
    let mut failures = Vec::new();
    for entry in acceptance_corpus(3, SEED, 50) {
        let level = entry.algebra.powerful_level();
        let g = entry.algebra.deform(level);
        if !g.is_powerful() {
            failures.push(format!("{}: deformation is not powerful", entry.label));
            continue;
        }
        let l = &entry.form;
        let b = irreducible_polarisation(&g, l).unwrap();
        let rm = match RhoMap::new(&g, l, &b) {
            Ok(rm) => rm,
            Err(e) => {
                failures.push(format!("{}: {e}", entry.label));
                continue;
            }
        };
        if !rm.adapted.unimodular {
            failures.push(format!("{}: adapted basis is not unimodular", entry.label));
            continue;
        }
        for (i, img) in rm.images.iter().enumerate() {
            if !img.min_vp(g.prime()).at_least(0) {
                failures.push(format!(
                    "{}: rho({}) = {} has negative valuation",
                    entry.label,
                    g.name(i),
                    img
                ));
            }
        }
    }
    finish("C5 powerful-integrality", failures);
}

/// C6: two distinct Vergne polarisations (through different ideals) give the
/// same truncated kernels at D ≤ 3, for H5 and F4.
#[test]
fn c06_polarisation_independence() {
    let mut failures = Vec::new();
    let cases: Vec<(&str, dixmier_core::lie::LieAlgebra, LinearForm, Subspace)> = vec![
        (
            "h5",
            catalog::heisenberg5(3),
            lf(&[0, 0, 0, 0, 1], 3),
            Subspace::span(5, vec![v(&[1, 0, 0, 0, 0]), v(&[0, 0, 0, 0, 1])]),
        ),
        (
            "f4",
            catalog::filiform4(3),
            lf(&[0, 0, 1, 0], 3),
            Subspace::span(
                4,
                vec![v(&[1, 0, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])],
            ),
        ),
    ];
    for (name, g, l, through) in cases {
        let b1 = vergne_polarisation(&g, &l, None).unwrap();
        let b2 = vergne_polarisation(&g, &l, Some(&through)).unwrap();
        if b1.subspace == b2.subspace {
            failures.push(format!("{name}: polarisations coincide, fixture is broken"));
            continue;
        }
        for degree in 1..=3u32 {
            let k1 = kernel_truncated(&g, &l, &b1, degree)
                .unwrap()
                .to_standard(&g)
                .unwrap();
            let k2 = kernel_truncated(&g, &l, &b2, degree)
                .unwrap()
                .to_standard(&g)
                .unwrap();
            if k1 != k2 {
                failures.push(format!("{name}: kernels differ at degree {degree}"));
            }
        }
    }
    finish("C6 polarisation-independence", failures);
}

/// C7: same-orbit forms share truncated kernels at D ≤ 3 over ≥ 20 sampled
/// (λ, u); the cross-orbit Heisenberg pair differs at D = 1.
#[test]
fn c07_orbit_invariance() {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED);
    let pool = ["h3", "f4", "h5", "h3a2"];
    let mut sampled = 0;
    while sampled < 20 {
        let entry = catalog::by_name(pool[sampled % pool.len()], 3).unwrap();
        let g = &entry.algebra;
        let l = random_form(g, &mut rng);
        let u = random_lattice_vector(g, &mut rng);
        let sigma = exp_ad(g, &u).unwrap();
        let mu = coad(&sigma, &l);
        if !mu.is_integral() {
            continue;
        }
        sampled += 1;
        match orbit_kernel_compare(g, &l, &mu, 3) {
            Ok(report) => {
                if !report.equal {
                    failures.push(format!(
                        "{}: twisted kernel differs (lambda {l}, u {:?})",
                        entry.name, u
                    ));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", entry.name)),
        }
    }
    // Cross-orbit pair splits at degree 1.
    let g = catalog::heisenberg3(3);
    let report = orbit_kernel_compare(&g, &lf(&[0, 0, 1], 3), &lf(&[0, 0, 2], 3), 1).unwrap();
    if report.equal {
        failures.push("h3 central characters 1 and 2 compare equal".into());
    }
    finish("C7 orbit-invariance", failures);
}

/// C8: control check passes on the H3 and H5 kernels with their reducing
/// quadruples for D ≤ 3.
#[test]
fn c08_control() {
    let mut failures = Vec::new();
    for name in ["h3", "h5"] {
        let entry = catalog::by_name(name, 3).unwrap();
        let g = &entry.algebra;
        let l = &entry.lambda;
        let b = irreducible_polarisation(g, l).unwrap();
        let q = reducing_quadruple(g, l).unwrap();
        for degree in 1..=3u32 {
            let ker = kernel_truncated(g, l, &b, degree).unwrap();
            match control_check_kernel(g, &ker, &q) {
                Ok(report) if report.controlled => {}
                Ok(_) => failures.push(format!("{name}: not controlled at degree {degree}")),
                Err(e) => failures.push(format!("{name}: {e}")),
            }
        }
    }
    finish("C8 control", failures);
}

/// C9: for random u ∈ p^{−N}L (N ≤ 2, p ∈ {2, 3, 5}), containment holds at
/// n₀ = cN + vp(c!); and one corpus instance witnesses failure at n₀ − 1.
#[test]
fn c09_lattice_bound() {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED);
    for p in [2u64, 3, 5] {
        for name in ["h3", "f4", "h5", "h3a2"] {
            let entry = catalog::by_name(name, p).unwrap();
            let g = &entry.algebra;
            let c = g.nilpotency_class() as u32;
            for n_scale in 0..=2u32 {
                for _ in 0..3 {
                    let base = random_lattice_vector(g, &mut rng);
                    let scale = p_power(p, -(n_scale as i64));
                    let u = vec_scale(&base, &scale);
                    let sigma = exp_ad(g, &u).unwrap();
                    let n0 = lattice_bound(n_scale, c, p);
                    if !lattice_containment(&sigma, n0, p) {
                        failures.push(format!(
                            "{name} at p={p}, N={n_scale}: bound {n0} violated for u = {u:?}"
                        ));
                    }
                }
            }
        }
    }
    // Strictness witness: F4 at p = 2 with u = e1 has entry 1/2, so n₀ − 1
    // fails while n₀ = vp(3!) = 1 holds.
    let f4 = catalog::filiform4(2);
    let sigma = exp_ad(&f4, &unit(4, 0)).unwrap();
    let n0 = lattice_bound(0, f4.nilpotency_class() as u32, 2);
    if n0 != 1 {
        failures.push(format!("strictness fixture: expected bound 1, got {n0}"));
    }
    if !lattice_containment(&sigma, n0, 2) {
        failures.push("strictness fixture: bound itself fails".into());
    }
    if lattice_containment(&sigma, n0 - 1, 2) {
        failures.push("strictness fixture: bound − 1 unexpectedly holds".into());
    }
    finish("C9 lattice-bound", failures);
}

/// C10: stabiliser twisting commutes with coadjoint twists corpus-wide, and
/// every sampled form on a metabelian corpus member is special.
#[test]
fn c10_twist_and_special() {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED);
    for entry in acceptance_corpus(3, SEED, 50) {
        let g = &entry.algebra;
        let u = random_lattice_vector(g, &mut rng);
        let sigma = exp_ad(g, &u).unwrap();
        if !dixmier_core::coadjoint::twist_stabilizer_check(g, &sigma, &entry.form) {
            failures.push(format!("{}: twist check failed", entry.label));
        }
        if is_metabelian(g) {
            for _ in 0..2 {
                let l = random_form(g, &mut rng);
                if !is_special(g, &l).special {
                    failures.push(format!("{}: metabelian but form not special", entry.label));
                }
            }
        }
    }
    finish("C10 twist-and-special", failures);
}

/// C11: rank-1 induction operators match straightening on t^n, n ≤ 6,
/// across randomised scalars including the degenerate α = 0 case.
#[test]
fn c11_rank1_induction() {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut cases: Vec<(Rat, Rat, Rat)> = vec![
        (rint(0), rint(1), rint(1)),
        (rint(2), rint(3), rat(1, 3)),
        (rint(7), rint(1), rint(0)),
        (rint(1), rint(0), rint(5)),
    ];
    for _ in 0..20 {
        cases.push((
            rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
            rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
            rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
        ));
    }
    for (beta_y, beta_z, alpha) in cases {
        match induce_rank1(&beta_y, &beta_z, &alpha, 6) {
            Ok(ops) => {
                for n in 0..=6u32 {
                    let tn = Poly::monomial(1, vec![n], Rat::one());
                    if ops.op_y.apply(&tn) != rank1_brute_y(&beta_y, &beta_z, &alpha, n) {
                        failures.push(format!(
                            "operator disagrees at n={n} for ({beta_y}, {beta_z}, {alpha})"
                        ));
                    }
                    if ops.op_x.apply(&tn) != Poly::monomial(1, vec![n + 1], Rat::one()) {
                        failures.push("x operator is not multiplication by t".into());
                    }
                    if ops.op_z.apply(&tn) != tn.scale(&beta_z) {
                        failures.push("z operator is not the scalar".into());
                    }
                }
            }
            Err(e) => failures.push(format!("({beta_y}, {beta_z}, {alpha}): {e}")),
        }
    }
    finish("C11 rank1-induction", failures);
}

/// C12: bottom reduction terminates with a nonzero constant on 100 random
/// nonzero polynomials of degree ≤ 8, in under a second.
#[test]
fn c12_reduction_surrogate() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut produced = 0;
    while produced < 100 {
        let mut f = Poly::zero(1);
        for e in 0..=8u32 {
            if rng.gen_bool(0.45) {
                let c = rng.gen_range(-9..=9i64);
                if c != 0 {
                    f.add_term(vec![e], rat(c, rng.gen_range(1..=3)));
                }
            }
        }
        if f.is_zero() {
            continue;
        }
        produced += 1;
        match reduce_to_bottom(&f) {
            Ok(out) => {
                if out.constant.is_zero() {
                    failures.push(format!("zero constant from {f}"));
                }
            }
            Err(e) => failures.push(format!("{f}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("runtime {elapsed:?} exceeded 1 s"));
    }
    finish("C12 reduction-surrogate", failures);
}

/// C13: ∂-extraction succeeds for the three named (algebra, ideal) pairs at
/// D ≤ 2.
#[test]
fn c13_perp_extraction() {
    let mut failures = Vec::new();
    let cases: Vec<(&str, dixmier_core::lie::LieAlgebra, LinearForm, Subspace)> = vec![
        (
            "h3",
            catalog::heisenberg3(3),
            lf(&[0, 0, 1], 3),
            Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]),
        ),
        (
            "h5",
            catalog::heisenberg5(3),
            lf(&[0, 0, 0, 0, 1], 3),
            Subspace::span(
                5,
                vec![
                    v(&[0, 1, 0, 0, 0]),
                    v(&[0, 0, 0, 1, 0]),
                    v(&[0, 0, 0, 0, 1]),
                ],
            ),
        ),
        (
            "f4",
            catalog::filiform4(3),
            lf(&[0, 0, 0, 1], 3),
            Subspace::span(
                4,
                vec![v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])],
            ),
        ),
    ];
    for (name, g, l, a) in cases {
        let b = irreducible_polarisation(&g, &l).unwrap();
        for degree in 1..=2u32 {
            match perp_partials_in_image(&g, &l, &a, &b.subspace, degree) {
                Ok(true) => {}
                Ok(false) => failures.push(format!("{name}: extraction failed at degree {degree}")),
                Err(e) => failures.push(format!("{name}: {e}")),
            }
        }
    }
    finish("C13 perp-extraction", failures);
}
