//! PBW monomials of the enveloping algebra at a degree truncation, and the
//! straightening machinery that rewrites arbitrary words of Lie algebra
//! elements into normal-ordered monomials.
//!
//! Straightening works on explicit words: the first adjacent inversion is
//! swapped at the cost of a bracket term of strictly smaller length, so the
//! worklist terminates on (length, inversion count).

use crate::lie::LieAlgebra;
use crate::linalg::{coords_in_basis, Vector};
use crate::scalars::Rat;
use crate::{Error, Result};
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Order on exponent vectors: total degree first, then reverse-lexicographic,
/// so within a degree the monomial in the earliest basis vector comes first.
pub fn pbw_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

/// All exponent vectors of total degree ≤ max_deg, in `pbw_cmp` order,
/// starting with the empty monomial.
pub fn monomials_up_to(dim: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; dim];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for e in 0..=remaining {
            current[pos] = e;
            rec(out, current, pos + 1, remaining - e);
        }
        current[pos] = 0;
    }
    rec(&mut out, &mut current, 0, max_deg);
    out.sort_by(|a, b| pbw_cmp(a, b));
    out
}

/// Element of U(g)_{≤D} in PBW coordinates over an implicit ordered basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PbwElement {
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl PbwElement {
    pub fn zero() -> Self {
        PbwElement::default()
    }

    pub fn unit(dim: usize) -> Self {
        let mut e = PbwElement::zero();
        e.add_term(vec![0; dim], Rat::from_integer(1.into()));
        e
    }

    pub fn monomial(exps: Vec<u32>, coeff: Rat) -> Self {
        let mut e = PbwElement::zero();
        e.add_term(exps, coeff);
        e
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

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> PbwElement {
        if c.is_zero() {
            return PbwElement::zero();
        }
        PbwElement {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Render against basis names, e.g. `(1)*e3 + (-1)*1`.
    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| pbw_cmp(a, b));
        let rendered: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let mut parts = vec![format!("({c})")];
                for (i, &k) in e.iter().enumerate() {
                    if k == 1 {
                        parts.push(names[i].clone());
                    } else if k > 1 {
                        parts.push(format!("{}^{}", names[i], k));
                    }
                }
                if parts.len() == 1 {
                    parts.push("1".to_string());
                }
                parts.join("*")
            })
            .collect();
        rendered.join(" + ")
    }
}

/// Structure constants re-expressed over an ordered basis, the context a
/// straightening run works in.
pub struct StraightenCtx {
    pub dim: usize,
    /// sc[i][j] = coordinates of [w_i, w_j] in the ordered basis.
    sc: Vec<Vec<Vector>>,
}

impl StraightenCtx {
    /// Context over the distinguished basis of g.
    pub fn standard(g: &LieAlgebra) -> Self {
        let d = g.dim();
        let sc = (0..d)
            .map(|i| (0..d).map(|j| g.basis_bracket(i, j).clone()).collect())
            .collect();
        StraightenCtx { dim: d, sc }
    }

    /// Context over an arbitrary ordered ℚ-basis of g (given in ambient
    /// coordinates).
    pub fn for_basis(g: &LieAlgebra, basis: &[Vector]) -> Result<Self> {
        let d = g.dim();
        if basis.len() != d {
            return Err(Error::Internal("ordered basis has wrong size".into()));
        }
        let mut sc = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let br = g.bracket(&basis[i], &basis[j])?;
                sc[i][j] = coords_in_basis(basis, &br)?;
            }
        }
        Ok(StraightenCtx { dim: d, sc })
    }
}

/// Straighten a linear combination of words (sequences of ordered-basis
/// indices) into PBW normal form.
pub fn straighten(ctx: &StraightenCtx, words: Vec<(Rat, Vec<usize>)>) -> PbwElement {
    let mut out = PbwElement::zero();
    let mut work = words;
    while let Some((coeff, word)) = work.pop() {
        if coeff.is_zero() {
            continue;
        }
        let inversion = word.windows(2).position(|w| w[0] > w[1]);
        match inversion {
            None => {
                let mut exps = vec![0u32; ctx.dim];
                for &i in &word {
                    exps[i] += 1;
                }
                out.add_term(exps, coeff);
            }
            Some(pos) => {
                let (a, b) = (word[pos], word[pos + 1]);
                let mut swapped = word.clone();
                swapped.swap(pos, pos + 1);
                work.push((coeff.clone(), swapped));
                for (m, c) in ctx.sc[a][b].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut shorter = Vec::with_capacity(word.len() - 1);
                    shorter.extend_from_slice(&word[..pos]);
                    shorter.push(m);
                    shorter.extend_from_slice(&word[pos + 2..]);
                    work.push((&coeff * c, shorter));
                }
            }
        }
    }
    out
}

/// Word of ordered-basis indices for a monomial exponent vector.
pub fn word_of(exps: &[u32]) -> Vec<usize> {
    let mut w = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            w.push(i);
        }
    }
    w
}

/// Rewrite elements given over the ordered basis `from` (vectors in ambient
/// coordinates) into PBW coordinates over the ordered basis underlying
/// `to_ctx`, whose vectors are `to_basis`.
pub fn change_basis(
    elems: &[PbwElement],
    from: &[Vector],
    to_basis: &[Vector],
    to_ctx: &StraightenCtx,
) -> Result<Vec<PbwElement>> {
    // Coordinates of each `from` vector over the target basis.
    let mut coords = Vec::with_capacity(from.len());
    for v in from {
        coords.push(coords_in_basis(to_basis, v)?);
    }
    let mut out = Vec::with_capacity(elems.len());
    for elem in elems {
        let mut words: Vec<(Rat, Vec<usize>)> = Vec::new();
        for (exps, c) in &elem.terms {
            // Expand the word multilinearly: each original factor w_k becomes
            // Σ coords[k][m]·v_m.
            let mut partial: Vec<(Rat, Vec<usize>)> = vec![(c.clone(), Vec::new())];
            for &k in &word_of(exps) {
                let mut next = Vec::new();
                for (pc, pw) in &partial {
                    for (m, cm) in coords[k].iter().enumerate() {
                        if cm.is_zero() {
                            continue;
                        }
                        let mut w2 = pw.clone();
                        w2.push(m);
                        next.push((pc * cm, w2));
                    }
                }
                partial = next;
            }
            words.extend(partial);
        }
        out.push(straighten(to_ctx, words));
    }
    Ok(out)
}

/// An echelonised subspace of U(g)_{≤D} in PBW-monomial coordinates over a
/// fixed ordered basis; equality of subspaces is equality of echelon rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwSubspace {
    pub dim: usize,
    pub degree: u32,
    pub monomials: Vec<Vec<u32>>,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl PbwSubspace {
    pub fn from_elements(dim: usize, degree: u32, elems: &[PbwElement]) -> Result<Self> {
        let monomials = monomials_up_to(dim, degree);
        let index: BTreeMap<&Vec<u32>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::with_capacity(elems.len());
        for e in elems {
            let mut row = crate::linalg::zeros(monomials.len());
            for (m, c) in &e.terms {
                let Some(&i) = index.get(m) else {
                    return Err(Error::Internal(format!(
                        "monomial of degree {} exceeds truncation {}",
                        m.iter().sum::<u32>(),
                        degree
                    )));
                };
                row[i] = c.clone();
            }
            rows.push(row);
        }
        let pivots = crate::linalg::rref(&mut rows);
        Ok(PbwSubspace {
            dim,
            degree,
            monomials,
            rows,
            pivots,
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn contains(&self, e: &PbwElement) -> bool {
        let mut row = crate::linalg::zeros(self.monomials.len());
        let index: BTreeMap<&Vec<u32>, usize> = self
            .monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        for (m, c) in &e.terms {
            match index.get(m) {
                Some(&i) => row[i] = c.clone(),
                None => return false,
            }
        }
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !row[p].is_zero() {
                let c = row[p].clone();
                crate::linalg::vec_axpy(&mut row, &c, r);
            }
        }
        crate::linalg::vec_is_zero(&row)
    }

    /// Echelon rows as elements.
    pub fn elements(&self) -> Vec<PbwElement> {
        self.rows
            .iter()
            .map(|row| {
                let mut e = PbwElement::zero();
                for (i, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        e.add_term(self.monomials[i].clone(), c.clone());
                    }
                }
                e
            })
            .collect()
    }

    /// Intersection with U(g)_{≤d}: the subspace of elements supported on
    /// monomials of degree ≤ d, re-indexed at truncation d.
    pub fn restrict_degree(&self, d: u32) -> Result<PbwSubspace> {
        use crate::linalg::Subspace;
        let n = self.monomials.len();
        let span = Subspace::span(n, self.rows.clone());
        let low_units: Vec<Vector> = self
            .monomials
            .iter()
            .enumerate()
            .filter(|(_, m)| m.iter().sum::<u32>() <= d)
            .map(|(i, _)| crate::linalg::unit(n, i))
            .collect();
        let low = Subspace::span(n, low_units);
        let cap = span.intersect(&low);
        let elems: Vec<PbwElement> = cap
            .basis()
            .iter()
            .map(|row| {
                let mut e = PbwElement::zero();
                for (i, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        e.add_term(self.monomials[i].clone(), c.clone());
                    }
                }
                e
            })
            .collect();
        PbwSubspace::from_elements(self.dim, d, &elems)
    }
}

impl fmt::Display for PbwSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "subspace of rank {} at degree {}",
            self.rank(),
            self.degree
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalars::rint;

    #[test]
    fn monomial_order() {
        let ms = monomials_up_to(2, 2);
        assert_eq!(
            ms,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn straighten_h3() {
        // e2·e1 = e1·e2 − e3 in U(H3).
        let g = catalog::heisenberg3(3);
        let ctx = StraightenCtx::standard(&g);
        let out = straighten(&ctx, vec![(rint(1), vec![1, 0])]);
        let mut expected = PbwElement::zero();
        expected.add_term(vec![1, 1, 0], rint(1));
        expected.add_term(vec![0, 0, 1], rint(-1));
        assert_eq!(out, expected);
    }

    #[test]
    fn straighten_is_multiplicative_on_sorted_words() {
        let g = catalog::filiform4(3);
        let ctx = StraightenCtx::standard(&g);
        // e3·e1·e2: two inversions, bracket terms cascade.
        let out = straighten(&ctx, vec![(rint(1), vec![2, 0, 1])]);
        // Compare against manual expansion: e3 e1 = e1 e3 + [e3,e1]
        // = e1 e3 − e4, so e3 e1 e2 = e1 e3 e2 − e4 e2 = e1 e2 e3 − e4 e2
        // (e3 commutes with e2) = e1 e2 e3 − e2 e4.
        let mut expected = PbwElement::zero();
        expected.add_term(vec![1, 1, 1, 0], rint(1));
        expected.add_term(vec![0, 1, 0, 1], rint(-1));
        assert_eq!(out, expected);
    }

    #[test]
    fn change_basis_round_trip() {
        let g = catalog::heisenberg3(3);
        let std_basis: Vec<Vector> = (0..3).map(|i| crate::linalg::unit(3, i)).collect();
        // Nonstandard ordered basis: (e2, e1, e3).
        let alt: Vec<Vector> = vec![
            crate::linalg::unit(3, 1),
            crate::linalg::unit(3, 0),
            crate::linalg::unit(3, 2),
        ];
        let alt_ctx = StraightenCtx::for_basis(&g, &alt).unwrap();
        let std_ctx = StraightenCtx::standard(&g);
        let e = PbwElement::monomial(vec![1, 1, 0], rint(1)); // e1 e2
        let over_alt = change_basis(&[e.clone()], &std_basis, &alt, &alt_ctx).unwrap();
        let back = change_basis(&over_alt, &alt, &std_basis, &std_ctx).unwrap();
        assert_eq!(back[0], e);
    }

    #[test]
    fn subspace_membership() {
        let s =
            PbwSubspace::from_elements(2, 1, &[PbwElement::monomial(vec![1, 0], rint(1))]).unwrap();
        assert_eq!(s.rank(), 1);
        assert!(s.contains(&PbwElement::monomial(vec![1, 0], rint(5))));
        assert!(!s.contains(&PbwElement::monomial(vec![0, 1], rint(1))));
        assert!(s.contains(&PbwElement::zero()));
    }
}
