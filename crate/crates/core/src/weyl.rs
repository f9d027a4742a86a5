//! Exact normal-ordered arithmetic in the Weyl algebra A_r(ℚ) and its action
//! on polynomials.
//!
//! Elements are stored in the canonical normal order with every x to the left
//! of every ∂, so equality of term maps is equality of operators. The single
//! reordering rule is ∂_i^b x_i^g = Σ_k C(b,k)·C(g,k)·k!·x_i^{g−k}·∂_i^{b−k};
//! distinct indices commute.

use crate::scalars::{binomial, factorial, vp, Rat, Valuation};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse polynomial in ℚ[u_1..u_r], exponent-keyed; no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub rank: usize,
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(rank: usize) -> Self {
        Poly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(rank: usize, exps: Vec<u32>, coeff: Rat) -> Self {
        assert_eq!(exps.len(), rank, "exponent length mismatch");
        let mut p = Poly::zero(rank);
        p.add_term(exps, coeff);
        p
    }

    pub fn constant(rank: usize, c: Rat) -> Self {
        Poly::monomial(rank, vec![0; rank], c)
    }

    pub fn one(rank: usize) -> Self {
        Poly::constant(rank, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.rank);
        }
        Poly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.rank])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()));
        let rendered: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let mut parts = vec![format!("({c})")];
                for (i, &k) in e.iter().enumerate() {
                    if k == 1 {
                        parts.push(format!("u{}", i + 1));
                    } else if k > 1 {
                        parts.push(format!("u{}^{}", i + 1, k));
                    }
                }
                parts.join("*")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Element of A_r in normal order: a sparse sum of coeff·x^α·∂^β keyed by
/// (α, β). No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub rank: usize,
    pub terms: BTreeMap<(Vec<u32>, Vec<u32>), Rat>,
}

impl WeylElement {
    pub fn zero(rank: usize) -> Self {
        WeylElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(rank: usize, c: Rat) -> Self {
        let mut w = WeylElement::zero(rank);
        w.add_term(vec![0; rank], vec![0; rank], c);
        w
    }

    pub fn one(rank: usize) -> Self {
        WeylElement::scalar(rank, Rat::one())
    }

    /// The multiplication operator x_i.
    pub fn x(rank: usize, i: usize) -> Self {
        let mut a = vec![0; rank];
        a[i] = 1;
        let mut w = WeylElement::zero(rank);
        w.add_term(a, vec![0; rank], Rat::one());
        w
    }

    /// The derivation ∂_i.
    pub fn d(rank: usize, i: usize) -> Self {
        let mut b = vec![0; rank];
        b[i] = 1;
        let mut w = WeylElement::zero(rank);
        w.add_term(vec![0; rank], b, Rat::one());
        w
    }

    /// The normal-ordered monomial coeff·x^α·∂^β.
    pub fn monomial(rank: usize, xexp: Vec<u32>, dexp: Vec<u32>, coeff: Rat) -> Self {
        assert_eq!(xexp.len(), rank);
        assert_eq!(dexp.len(), rank);
        let mut w = WeylElement::zero(rank);
        w.add_term(xexp, dexp, coeff);
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, xexp: Vec<u32>, dexp: Vec<u32>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let key = (xexp, dexp);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> WeylElement {
        if c.is_zero() {
            return WeylElement::zero(self.rank);
        }
        WeylElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Normal-ordered product. Reordering the middle block ∂^b·x^g expands as
    /// a product over indices of Σ_k C(b_i,k)·C(g_i,k)·k!·x^{g_i−k}∂^{b_i−k}.
    pub fn mul(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let r = self.rank;
        let mut out = WeylElement::zero(r);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                // (x^a1 ∂^b1)(x^a2 ∂^b2): walk the indices, accumulating the
                // k-sum per index as a running list of partial terms.
                let mut partial: Vec<(Vec<u32>, Vec<u32>, Rat)> =
                    vec![(Vec::with_capacity(r), Vec::with_capacity(r), c1 * c2)];
                for i in 0..r {
                    let b = b1[i];
                    let g = a2[i];
                    let kmax = b.min(g);
                    let mut next = Vec::with_capacity(partial.len() * (kmax as usize + 1));
                    for (xacc, dacc, coeff) in partial {
                        for k in 0..=kmax {
                            let factor = binomial(b, k) * binomial(g, k) * factorial(k);
                            let mut x2 = xacc.clone();
                            x2.push(a1[i] + g - k);
                            let mut d2 = dacc.clone();
                            d2.push(b - k + b2[i]);
                            next.push((x2, d2, &coeff * Rat::from_integer(factor)));
                        }
                    }
                    partial = next;
                }
                for (xe, de, c) in partial {
                    out.add_term(xe, de, c);
                }
            }
        }
        out
    }

    /// AB − BA.
    pub fn commutator(&self, other: &WeylElement) -> WeylElement {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, n: u32) -> WeylElement {
        let mut acc = WeylElement::one(self.rank);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Apply to a polynomial: x_i multiplies by u_i, ∂_i differentiates.
    pub fn apply(&self, f: &Poly) -> Poly {
        assert_eq!(self.rank, f.rank, "rank mismatch");
        let mut out = Poly::zero(f.rank);
        for ((a, b), c) in &self.terms {
            for (m, fc) in &f.terms {
                // ∂^b on u^m: falling factorials, zero if any b_i > m_i.
                let mut coeff = c * fc;
                let mut exps = Vec::with_capacity(f.rank);
                let mut dead = false;
                for i in 0..f.rank {
                    if b[i] > m[i] {
                        dead = true;
                        break;
                    }
                    let mut fall = Rat::one();
                    for t in 0..b[i] {
                        fall *= Rat::from_integer((m[i] - t).into());
                    }
                    coeff *= fall;
                    exps.push(m[i] - b[i] + a[i]);
                }
                if !dead {
                    out.add_term(exps, coeff);
                }
            }
        }
        out
    }

    /// Minimum p-adic valuation over coefficients; the element lies in the
    /// integral form A_r(ℤ_(p)) iff this is ≥ 0. +∞ for zero.
    pub fn min_vp(&self, p: u64) -> Valuation {
        self.terms
            .values()
            .map(|c| vp(c, p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Total degree (x and ∂ combined) of the largest term.
    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|(a, b)| a.iter().sum::<u32>() + b.iter().sum::<u32>())
            .max()
    }

    /// True iff no term involves an x variable.
    pub fn is_pure_d(&self) -> bool {
        self.terms.keys().all(|(a, _)| a.iter().all(|&e| e == 0))
    }
}

impl fmt::Display for WeylElement {
    /// Terms sorted by total degree then lexicographically, e.g.
    /// `(-1)*d1 + (1/2)*x2*d1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&(Vec<u32>, Vec<u32>), &Rat)> = self.terms.iter().collect();
        terms.sort_by_key(|((a, b), _)| {
            (
                a.iter().sum::<u32>() + b.iter().sum::<u32>(),
                a.clone(),
                b.clone(),
            )
        });
        let rendered: Vec<String> = terms
            .into_iter()
            .map(|((a, b), c)| {
                let mut parts = vec![format!("({c})")];
                for (i, &k) in a.iter().enumerate() {
                    if k == 1 {
                        parts.push(format!("x{}", i + 1));
                    } else if k > 1 {
                        parts.push(format!("x{}^{}", i + 1, k));
                    }
                }
                for (i, &k) in b.iter().enumerate() {
                    if k == 1 {
                        parts.push(format!("d{}", i + 1));
                    } else if k > 1 {
                        parts.push(format!("d{}^{}", i + 1, k));
                    }
                }
                parts.join("*")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Apply the divided derivative (1/n!)·∂_i^n; integer polynomials map to
/// integer polynomials since the coefficients are binomials.
pub fn divided_derivative_apply(i: usize, n: u32, f: &Poly) -> Poly {
    let mut out = Poly::zero(f.rank);
    for (m, c) in &f.terms {
        if m[i] < n {
            continue;
        }
        let coeff = c * Rat::from_integer(binomial(m[i], n));
        let mut exps = m.clone();
        exps[i] -= n;
        out.add_term(exps, coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rint};

    fn x() -> WeylElement {
        WeylElement::x(1, 0)
    }

    fn d() -> WeylElement {
        WeylElement::d(1, 0)
    }

    #[test]
    fn reordering_rule() {
        // ∂·x = x∂ + 1
        let dx = d().mul(&x());
        let mut expected = WeylElement::monomial(1, vec![1], vec![1], rint(1));
        expected.add_term(vec![0], vec![0], rint(1));
        assert_eq!(dx, expected);
        // x·∂ is already normal.
        assert_eq!(
            x().mul(&d()),
            WeylElement::monomial(1, vec![1], vec![1], rint(1))
        );
        // ∂²·x² = x²∂² + 4x∂ + 2
        let lhs = d().pow(2).mul(&x().pow(2));
        let mut expected = WeylElement::monomial(1, vec![2], vec![2], rint(1));
        expected.add_term(vec![1], vec![1], rint(4));
        expected.add_term(vec![0], vec![0], rint(2));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn reordering_matches_action_on_polynomials() {
        // Verify ∂²x² against the matrix of the operator on degree ≤ 4 polys.
        let op = d().pow(2).mul(&x().pow(2));
        for n in 0..=4u32 {
            let f = Poly::monomial(1, vec![n], rint(1));
            let via_op = op.apply(&f);
            let via_steps = d().apply(&d().apply(&x().apply(&x().apply(&f))));
            assert_eq!(via_op, via_steps);
        }
    }

    #[test]
    fn commutators() {
        // [x, ∂] = −1
        assert_eq!(x().commutator(&d()), WeylElement::scalar(1, rint(-1)));
        // distinct indices commute
        let x1 = WeylElement::x(2, 0);
        let x2 = WeylElement::x(2, 1);
        let d2 = WeylElement::d(2, 1);
        assert!(x1.commutator(&x2).is_zero());
        assert!(x1.commutator(&d2).is_zero());
        // [x, ½∂²] = −∂
        let half_dd = d().pow(2).scale(&rat(1, 2));
        assert_eq!(x().commutator(&half_dd), d().scale(&rint(-1)));
    }

    #[test]
    fn apply_examples() {
        let u3 = Poly::monomial(1, vec![3], rint(1));
        assert_eq!(d().apply(&u3), Poly::monomial(1, vec![2], rint(3)));
        let xd = x().mul(&d());
        for k in 0..5u32 {
            let uk = Poly::monomial(1, vec![k], rint(1));
            assert_eq!(xd.apply(&uk), uk.scale(&rint(k as i64)));
        }
        // x∂ − ∂x acts as −1.
        let c = xd.sub(&d().mul(&x()));
        let f = Poly::monomial(1, vec![2], rint(3));
        assert_eq!(c.apply(&f), f.scale(&rint(-1)));
    }

    #[test]
    fn min_vp_examples() {
        let half_dd = d().pow(2).scale(&rat(1, 2));
        assert_eq!(half_dd.min_vp(2), Valuation::Finite(-1));
        let e = x().add(&d().scale(&rint(3)));
        assert_eq!(e.min_vp(3), Valuation::Finite(0));
        assert_eq!(WeylElement::zero(1).min_vp(5), Valuation::Infinite);
    }

    #[test]
    fn divided_derivatives() {
        let u5 = Poly::monomial(1, vec![5], rint(1));
        assert_eq!(
            divided_derivative_apply(0, 2, &u5),
            Poly::monomial(1, vec![3], rint(10))
        );
        assert_eq!(divided_derivative_apply(0, 0, &u5), u5);
        let u2 = Poly::monomial(1, vec![2], rint(1));
        assert!(divided_derivative_apply(0, 3, &u2).is_zero());
    }

    #[test]
    fn display_format() {
        let mut e = WeylElement::d(2, 0).scale(&rint(-1));
        e.add_term(vec![0, 1], vec![2, 0], rat(1, 2));
        assert_eq!(e.to_string(), "(-1)*d1 + (1/2)*x2*d1^2");
        assert_eq!(WeylElement::zero(1).to_string(), "0");
    }

    #[test]
    #[should_panic(expected = "rank mismatch")]
    fn rank_mismatch_panics() {
        let _ = WeylElement::x(1, 0).mul(&WeylElement::x(2, 0));
    }
}
