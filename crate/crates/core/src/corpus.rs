//! Randomised test corpus: catalog algebras with random integral forms, plus
//! random central extensions up to dimension 6.
//!
//! Extensions add a central vector e_{d+1} and perturb brackets by an
//! antisymmetric cocycle ω supported away from the derived subalgebra, which
//! keeps the Jacobi identity for free; every generated presentation is
//! validated anyway.

use crate::catalog;
use crate::forms::LinearForm;
use crate::lie::LieAlgebra;
use crate::linalg::{zeros, Vector};
use crate::scalars::rint;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Clone)]
pub struct CorpusEntry {
    pub label: String,
    pub algebra: LieAlgebra,
    pub form: LinearForm,
}

/// Random integral form with small coordinates, nonzero unless dim = 0.
/// Entries stay p-units or zero so forms interact cleanly with the lattice.
pub fn random_form(g: &LieAlgebra, rng: &mut StdRng) -> LinearForm {
    loop {
        let coords: Vector = (0..g.dim())
            .map(|_| loop {
                let c = rng.gen_range(-2..=2i64);
                if c == 0 || c.unsigned_abs() % g.prime() != 0 {
                    return rint(c);
                }
            })
            .collect();
        if !coords.iter().all(|c| c.is_zero()) {
            return LinearForm::integral(coords, g.prime()).expect("small integers are integral");
        }
    }
}

/// Central extension by a cocycle vanishing on the span-support of [g, g];
/// the result is validated on construction.
pub fn random_central_extension(g: &LieAlgebra, rng: &mut StdRng) -> LieAlgebra {
    let d = g.dim();
    // Coordinates appearing in some bracket value; the cocycle must vanish
    // against them so the Jacobi sums stay zero.
    let blocked: Vec<bool> = (0..d)
        .map(|k| (0..d).any(|i| (0..d).any(|j| !g.basis_bracket(i, j)[k].is_zero())))
        .collect();
    let nd = d + 1;
    let mut names: Vec<String> = g.names().to_vec();
    names.push(format!("z{nd}"));
    let mut brackets = vec![vec![zeros(nd); nd]; nd];
    for i in 0..d {
        for j in 0..d {
            let mut v = g.basis_bracket(i, j).clone();
            v.push(rint(0));
            brackets[i][j] = v;
        }
    }
    // Disjoint-pair cocycle with p-unit values: a Heisenberg-style pattern
    // on the free coordinates keeps the induced pairing lattice unimodular.
    let mut free: Vec<usize> = (0..d).filter(|&i| !blocked[i]).collect();
    for k in (1..free.len()).rev() {
        free.swap(k, rng.gen_range(0..=k));
    }
    let mut assigned = false;
    for pair in free.chunks(2) {
        let [i, j] = pair else { break };
        if assigned && rng.gen_bool(0.3) {
            continue;
        }
        let w = loop {
            let w = rng.gen_range(-2..=2i64);
            if w != 0 && w.unsigned_abs() % g.prime() != 0 {
                break w;
            }
        };
        let (a, b) = (*i.min(j), *j.max(i));
        brackets[a][b][d] = rint(w);
        brackets[b][a][d] = rint(-w);
        assigned = true;
    }
    LieAlgebra::new(g.prime(), names, brackets).expect("cocycle extension is valid")
}

/// The acceptance corpus: at least `minimum` (algebra, form) pairs drawn from
/// the catalog, random forms on catalog members, and random central
/// extensions up to dimension 6. Deterministic in the seed.
pub fn acceptance_corpus(prime: u64, seed: u64, minimum: usize) -> Vec<CorpusEntry> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for entry in catalog::catalog(prime) {
        entries.push(CorpusEntry {
            label: entry.name.to_string(),
            algebra: entry.algebra.clone(),
            form: entry.lambda.clone(),
        });
        entries.push(CorpusEntry {
            label: format!("{}+form", entry.name),
            algebra: entry.algebra.clone(),
            form: random_form(&entry.algebra, &mut rng),
        });
    }
    let bases: Vec<(&str, LieAlgebra)> = vec![
        ("ab2", catalog::abelian(2, prime)),
        ("ab3", catalog::abelian(3, prime)),
        ("ab4", catalog::abelian(4, prime)),
        ("h3", catalog::heisenberg3(prime)),
        ("f4", catalog::filiform4(prime)),
        ("h5", catalog::heisenberg5(prime)),
        ("h3a2", catalog::h3_abelian2(prime)),
    ];
    let mut round = 0usize;
    while entries.len() < minimum {
        for (name, base) in &bases {
            if entries.len() >= minimum {
                break;
            }
            let mut g = base.clone();
            let extensions = rng.gen_range(1..=2usize);
            for _ in 0..extensions {
                if g.dim() >= 6 {
                    break;
                }
                g = random_central_extension(&g, &mut rng);
            }
            let form = random_form(&g, &mut rng);
            entries.push(CorpusEntry {
                label: format!("ext({name};{round})"),
                algebra: g,
                form,
            });
        }
        round += 1;
    }
    entries
}

/// Deterministic stream of random integral forms for a given seed; the
/// front end uses this so its seeded runs match the library corpus.
pub struct FormSampler(StdRng);

impl FormSampler {
    pub fn new(seed: u64) -> Self {
        FormSampler(StdRng::seed_from_u64(seed))
    }

    pub fn form(&mut self, g: &LieAlgebra) -> LinearForm {
        random_form(g, &mut self.0)
    }
}

/// A nonzero integral vector of the lattice with small coordinates.
pub fn random_lattice_vector(g: &LieAlgebra, rng: &mut StdRng) -> Vector {
    loop {
        let v: Vector = (0..g.dim()).map(|_| rint(rng.gen_range(-2..=2))).collect();
        if !v.iter().all(|c| c.is_zero()) {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_large_enough() {
        let a = acceptance_corpus(3, 7, 50);
        let b = acceptance_corpus(3, 7, 50);
        assert!(a.len() >= 50);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.algebra, y.algebra);
            assert_eq!(x.form, y.form);
        }
        for e in &a {
            assert!(e.algebra.dim() <= 7);
            assert!(e.form.is_integral());
        }
    }

    #[test]
    fn extensions_are_nilpotent_and_bigger() {
        let mut rng = StdRng::seed_from_u64(1);
        let g = catalog::heisenberg3(3);
        let e = random_central_extension(&g, &mut rng);
        assert_eq!(e.dim(), 4);
        assert!(e.nilpotency_class() >= 2);
        let c = e.centre();
        assert!(c.contains_vec(&crate::linalg::unit(4, 3)));
    }
}
