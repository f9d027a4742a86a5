//! The adjoint-group action exp(ad u), coadjoint twists of linear forms,
//! lattice-scaling bounds, deformation-level valuations, and orbit-level
//! comparisons of truncated annihilator kernels.

use crate::dixmier::kernel_truncated;
use crate::forms::{irreducible_polarisation, stabilizer, LinearForm};
use crate::lie::LieAlgebra;
use crate::linalg::{unit, Mat, Subspace, Vector};
use crate::pbw::PbwElement;
use crate::scalars::{factorial, vp, vp_factorial, Rat, Valuation};
use crate::{Error, Result};

/// A Lie automorphism σ = exp(ad_left u) with its generator; exp uses the
/// standard left adjoint action ad(u)(w) = [u, w].
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub matrix: Mat,
    pub inverse: Mat,
    pub generator: Vector,
}

impl Automorphism {
    pub fn apply(&self, v: &[Rat]) -> Vector {
        self.matrix.apply(v)
    }

    pub fn apply_inverse(&self, v: &[Rat]) -> Vector {
        self.inverse.apply(v)
    }

    /// Image of a subspace under σ.
    pub fn map_subspace(&self, s: &Subspace) -> Subspace {
        Subspace::span(
            s.ambient_dim(),
            s.basis().iter().map(|r| self.apply(r)).collect(),
        )
    }
}

fn exp_of_nilpotent(m: &Mat) -> Mat {
    let n = m.nrows;
    let mut acc = Mat::identity(n);
    let mut power = Mat::identity(n);
    let mut k = 0u32;
    loop {
        power = power.mul(m);
        k += 1;
        if power.is_zero() {
            return acc;
        }
        let coeff = Rat::from_integer(1.into()) / Rat::from_integer(factorial(k));
        acc = acc.add(&power.scale(&coeff));
        assert!(k as usize <= n, "ad(u) must be nilpotent");
    }
}

/// exp(ad u) = Σ_{k} (1/k!)·ad_left(u)^k, a finite sum by nilpotency.
/// Bracket preservation σ([v, w]) = [σv, σw] is checked on all basis pairs.
pub fn exp_ad(g: &LieAlgebra, u: &[Rat]) -> Result<Automorphism> {
    let ad = g.ad_left(u);
    let matrix = exp_of_nilpotent(&ad);
    let neg: Vector = u.iter().map(|c| -c).collect();
    let inverse = exp_of_nilpotent(&g.ad_left(&neg));
    let d = g.dim();
    for i in 0..d {
        for j in i + 1..d {
            let lhs = matrix.apply(g.basis_bracket(i, j));
            let rhs = g.bracket(&matrix.apply(&unit(d, i)), &matrix.apply(&unit(d, j)))?;
            if lhs != rhs {
                return Err(Error::Internal(
                    "exp(ad u) failed bracket preservation".into(),
                ));
            }
        }
    }
    let prod = matrix.mul(&inverse);
    if prod != Mat::identity(d) {
        return Err(Error::Internal(
            "exp(ad u)·exp(ad −u) is not the identity".into(),
        ));
    }
    Ok(Automorphism {
        matrix,
        inverse,
        generator: u.to_vec(),
    })
}

/// Coadjoint twist (σ·λ)(v) = λ(σ^{−1} v). The result can leave the dual
/// lattice; callers inspect `is_integral` on the result.
pub fn coad(sigma: &Automorphism, lambda: &LinearForm) -> LinearForm {
    let d = lambda.dim();
    let coords: Vector = (0..d)
        .map(|j| lambda.eval(&sigma.apply_inverse(&unit(d, j))))
        .collect();
    LinearForm::new_unchecked(coords, lambda.prime())
}

/// Checks g^{σ·λ} = σ(g^λ) as subspaces.
pub fn twist_stabilizer_check(g: &LieAlgebra, sigma: &Automorphism, lambda: &LinearForm) -> bool {
    let twisted = stabilizer(g, &coad(sigma, lambda));
    let mapped = sigma.map_subspace(&stabilizer(g, lambda));
    twisted == mapped
}

/// n₀ = c·N + vp(c!): at any level n ≥ n₀, p^n L ⊆ σL and p^n σL ⊆ L for
/// σ = exp(ad u), u ∈ p^{−N} L.
pub fn lattice_bound(n_scale: u32, class: u32, p: u64) -> u64 {
    class as u64 * n_scale as u64 + vp_factorial(class as u64, p)
}

/// True iff every entry of p^n·σ and p^n·σ^{−1} is p-integral.
pub fn lattice_containment(sigma: &Automorphism, n: u64, p: u64) -> bool {
    let bound = -(n as i64);
    sigma.matrix.min_vp(p).at_least(bound) && sigma.inverse.min_vp(p).at_least(bound)
}

/// Smallest N ≤ n_max with u ∈ p^{−N} L, when one exists.
pub fn scale_exponent(u: &[Rat], p: u64, n_max: u32) -> Option<u32> {
    (0..=n_max).find(|&n| u.iter().all(|c| vp(c, p).at_least(-(n as i64))))
}

/// w_n(Σ λ_α·e^α) = min_α (vp(λ_α) − n·|α|); the element lies in the level-n
/// integral lattice iff this is ≥ 0.
pub fn deformation_valuation(elem: &PbwElement, n: u32, p: u64) -> Valuation {
    elem.terms
        .iter()
        .map(|(exps, c)| {
            let deg: u32 = exps.iter().sum();
            match vp(c, p) {
                Valuation::Finite(v) => Valuation::Finite(v - (n as i64) * deg as i64),
                Valuation::Infinite => Valuation::Infinite,
            }
        })
        .min()
        .unwrap_or(Valuation::Infinite)
}

pub fn level_integral(elem: &PbwElement, n: u32, p: u64) -> bool {
    deformation_valuation(elem, n, p).at_least(0)
}

/// Largest level n ≥ 0 at which the element is level-n integral. Level-n
/// integrality is antitone in n, so the set of integral levels is an initial
/// segment; `None` when it is empty.
pub fn max_integral_level(elem: &PbwElement, p: u64) -> Option<u32> {
    if !level_integral(elem, 0, p) {
        return None;
    }
    let cap = elem
        .terms
        .iter()
        .filter(|(exps, _)| exps.iter().sum::<u32>() > 0)
        .map(|(exps, c)| {
            let deg: i64 = exps.iter().sum::<u32>() as i64;
            match vp(c, p) {
                Valuation::Finite(v) => v / deg,
                Valuation::Infinite => i64::MAX,
            }
        })
        .min();
    match cap {
        None => Some(u32::MAX), // constants are integral at every level
        Some(v) if v < 0 => None,
        Some(v) => Some(v.min(u32::MAX as i64) as u32),
    }
}

/// Per-generator deformation data attached to a kernel comparison.
#[derive(Clone, Debug)]
pub struct GeneratorLevel {
    pub element: PbwElement,
    pub valuation_at_zero: Valuation,
    pub max_integral_level: Option<u32>,
}

/// Verdict of an orbit-level comparison of truncated kernels, plus the
/// deformation report for the left kernel's generators.
#[derive(Clone, Debug)]
pub struct OrbitCompare {
    pub equal: bool,
    pub dim_left: usize,
    pub dim_right: usize,
    pub degree: u32,
    pub generators: Vec<GeneratorLevel>,
}

/// Compare the truncated kernels of two integral forms as subspaces of
/// U(g)_{≤D} in the distinguished PBW coordinates.
pub fn orbit_kernel_compare(
    g: &LieAlgebra,
    lambda: &LinearForm,
    mu: &LinearForm,
    degree: u32,
) -> Result<OrbitCompare> {
    if !lambda.is_integral() || !mu.is_integral() {
        return Err(Error::pre("kernel comparison needs integral forms"));
    }
    let b1 = irreducible_polarisation(g, lambda)?;
    let b2 = irreducible_polarisation(g, mu)?;
    let k1 = kernel_truncated(g, lambda, &b1, degree)?.to_standard(g)?;
    let k2 = kernel_truncated(g, mu, &b2, degree)?.to_standard(g)?;
    let p = g.prime();
    let generators = k1
        .elements()
        .into_iter()
        .map(|e| GeneratorLevel {
            valuation_at_zero: deformation_valuation(&e, 0, p),
            max_integral_level: max_integral_level(&e, p),
            element: e,
        })
        .collect();
    Ok(OrbitCompare {
        equal: k1 == k2,
        dim_left: k1.rank(),
        dim_right: k2.rank(),
        degree,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalars::{rat, rint};

    fn v(entries: &[i64]) -> Vector {
        entries.iter().map(|&e| rint(e)).collect()
    }

    fn lf(entries: &[i64], p: u64) -> LinearForm {
        LinearForm::integral(v(entries), p).unwrap()
    }

    #[test]
    fn exp_ad_examples() {
        let g = catalog::heisenberg3(3);
        let sigma = exp_ad(&g, &v(&[0, 0, 0])).unwrap();
        assert_eq!(sigma.matrix, Mat::identity(3));

        let sigma = exp_ad(&g, &v(&[1, 0, 0])).unwrap();
        assert_eq!(sigma.apply(&v(&[0, 1, 0])), v(&[0, 1, 1]));
        assert_eq!(sigma.apply(&v(&[1, 0, 0])), v(&[1, 0, 0]));
        assert_eq!(sigma.apply(&v(&[0, 0, 1])), v(&[0, 0, 1]));

        let g = catalog::filiform4(3);
        let sigma = exp_ad(&g, &v(&[1, 0, 0, 0])).unwrap();
        let expected: Vector = vec![rint(0), rint(1), rint(1), rat(1, 2)];
        assert_eq!(sigma.apply(&v(&[0, 1, 0, 0])), expected);
    }

    #[test]
    fn coad_examples() {
        let g = catalog::heisenberg3(3);
        let l = lf(&[0, 0, 1], 3);
        let id = exp_ad(&g, &v(&[0, 0, 0])).unwrap();
        assert_eq!(coad(&id, &l), LinearForm::new_unchecked(v(&[0, 0, 1]), 3));

        let sigma = exp_ad(&g, &v(&[1, 0, 0])).unwrap();
        let twisted = coad(&sigma, &l);
        assert_eq!(twisted.coords(), &v(&[0, -1, 1]));
        // Inverse consistency.
        let inv = exp_ad(&g, &v(&[-1, 0, 0])).unwrap();
        assert_eq!(coad(&inv, &twisted).coords(), l.coords());
    }

    #[test]
    fn twist_checks() {
        let g = catalog::heisenberg3(3);
        let l = lf(&[0, 0, 1], 3);
        let sigma = exp_ad(&g, &v(&[1, 0, 0])).unwrap();
        assert!(twist_stabilizer_check(&g, &sigma, &l));

        let g = catalog::filiform4(3);
        let l = lf(&[0, 0, 0, 1], 3);
        let sigma = exp_ad(&g, &v(&[0, 1, 0, 0])).unwrap();
        assert!(twist_stabilizer_check(&g, &sigma, &l));
    }

    #[test]
    fn bounds() {
        assert_eq!(lattice_bound(1, 2, 2), 3);
        assert_eq!(lattice_bound(1, 2, 5), 2);
        assert_eq!(lattice_bound(0, 1, 3), 0);
    }

    #[test]
    fn containment() {
        let g = catalog::heisenberg3(3);
        // u = (1/3)e1 at p = 3: entries of σ have vp ≥ −1.
        let u: Vector = vec![rat(1, 3), rint(0), rint(0)];
        let sigma = exp_ad(&g, &u).unwrap();
        let n0 = lattice_bound(1, 2, 3);
        assert!(lattice_containment(&sigma, n0, 3));
        // u = (1/9)e1 at n = 0 fails.
        let u: Vector = vec![rat(1, 9), rint(0), rint(0)];
        let sigma = exp_ad(&g, &u).unwrap();
        assert!(!lattice_containment(&sigma, 0, 3));
    }

    #[test]
    fn scale_exponents() {
        assert_eq!(scale_exponent(&v(&[1, 2, 3]), 3, 2), Some(0));
        let u: Vector = vec![rat(1, 9), rint(0), rint(0)];
        assert_eq!(scale_exponent(&u, 3, 2), Some(2));
        assert_eq!(scale_exponent(&u, 3, 1), None);
    }

    #[test]
    fn deformation_valuations() {
        let one = PbwElement::unit(2);
        assert_eq!(deformation_valuation(&one, 5, 3), Valuation::Finite(0));
        let e1e2 = PbwElement::monomial(vec![1, 1], rint(1));
        assert_eq!(deformation_valuation(&e1e2, 1, 3), Valuation::Finite(-2));
        let scaled = PbwElement::monomial(vec![1, 1], rint(9));
        assert_eq!(deformation_valuation(&scaled, 1, 3), Valuation::Finite(0));
        assert!(level_integral(&scaled, 1, 3));
        assert!(!level_integral(&e1e2, 1, 3));
        assert_eq!(max_integral_level(&scaled, 3), Some(1));
        assert_eq!(max_integral_level(&e1e2, 3), Some(0));
    }

    #[test]
    fn orbit_compare_h3() {
        let g = catalog::heisenberg3(3);
        let l = lf(&[0, 0, 1], 3);
        let sigma = exp_ad(&g, &v(&[1, 0, 0])).unwrap();
        let mu = coad(&sigma, &l);
        assert!(mu.is_integral());
        let report = orbit_kernel_compare(&g, &l, &mu, 3).unwrap();
        assert!(report.equal);

        // Different central characters split at degree 1 already.
        let mu2 = lf(&[0, 0, 2], 3);
        let report = orbit_kernel_compare(&g, &l, &mu2, 1).unwrap();
        assert!(!report.equal);

        let report = orbit_kernel_compare(&g, &l, &l, 2).unwrap();
        assert!(report.equal);
    }
}
