//! Slow cross-seed and cross-prime audit, excluded from the default run:
//! `cargo test -p dixmier-core --test deep_audit -- --ignored`.

use dixmier_core::catalog;
use dixmier_core::corpus::acceptance_corpus;
use dixmier_core::dixmier::{AdaptedBasis, InducedModuleOracle, RhoMap};
use dixmier_core::forms::irreducible_polarisation;
use dixmier_core::linalg::unit;
use dixmier_core::pbw::monomials_up_to;
use dixmier_core::scalars::Rat;
use dixmier_core::weyl::Poly;
use num_traits::One;

#[test]
#[ignore]
fn seed_and_prime_robustness() {
    // Homomorphism + integrality across several seeds at p = 3.
    for seed in [2u64, 3, 4, 5, 99, 123456] {
        for entry in acceptance_corpus(3, seed, 50) {
            let level = entry.algebra.powerful_level();
            let g = entry.algebra.deform(level);
            let b = irreducible_polarisation(&g, &entry.form)
                .unwrap_or_else(|e| panic!("{} (seed {seed}): {e}", entry.label));
            let rm = RhoMap::new(&g, &entry.form, &b)
                .unwrap_or_else(|e| panic!("{} (seed {seed}): {e}", entry.label));
            assert!(
                rm.adapted.unimodular,
                "{} (seed {seed}): not unimodular",
                entry.label
            );
            for img in &rm.images {
                assert!(
                    img.min_vp(g.prime()).at_least(0),
                    "{} (seed {seed}): fractional image",
                    entry.label
                );
            }
        }
        println!("seed {seed}: ok");
    }
    // Homomorphism + oracle at p = 2 and p = 5 over corpora built there.
    for p in [2u64, 5] {
        for entry in acceptance_corpus(p, 7, 30) {
            let b = irreducible_polarisation(&entry.algebra, &entry.form)
                .unwrap_or_else(|e| panic!("{} (p={p}): {e}", entry.label));
            let rm = RhoMap::new(&entry.algebra, &entry.form, &b)
                .unwrap_or_else(|e| panic!("{} (p={p}): {e}", entry.label));
            let ab = AdaptedBasis::new(&entry.algebra, &entry.form, &b).unwrap();
            let oracle = InducedModuleOracle::new(&entry.algebra, &entry.form, &ab).unwrap();
            for m in monomials_up_to(ab.rank(), 3) {
                for i in 0..entry.algebra.dim() {
                    let f = Poly::monomial(ab.rank(), m.clone(), Rat::one());
                    assert_eq!(
                        rm.images[i].apply(&f),
                        oracle.act(&unit(entry.algebra.dim(), i), &m).unwrap(),
                        "{} (p={p})",
                        entry.label
                    );
                }
            }
        }
        println!("p {p}: ok");
    }
    // Degree-4 kernel on H5 stays consistent with degree 3.
    let entry = catalog::by_name("h5", 3).unwrap();
    let b = irreducible_polarisation(&entry.algebra, &entry.lambda).unwrap();
    let k4 = dixmier_core::dixmier::kernel_truncated(&entry.algebra, &entry.lambda, &b, 4)
        .unwrap()
        .to_standard(&entry.algebra)
        .unwrap();
    let k3 = dixmier_core::dixmier::kernel_truncated(&entry.algebra, &entry.lambda, &b, 3)
        .unwrap()
        .to_standard(&entry.algebra)
        .unwrap();
    assert_eq!(k4.restrict_degree(3).unwrap(), k3);
    println!("h5 degree-4 filtration: ok");
}
