//! Nilpotent Lie algebra presentations over ℚ with a distinguished basis.
//!
//! The distinguished basis doubles as a ℤ_(p)-lattice basis: validation
//! requires all structure constants to be p-integral, so the span
//! L = ⊕ ℤ_(p)·e_i is closed under the bracket.

use crate::linalg::{
    coords_in_basis, lattice_pivot_columns, null_space, unit, vec_is_zero, zeros, Mat, Subspace,
    Vector,
};
use crate::scalars::{is_prime, p_power, vp, Rat, Valuation};
use crate::{Error, Result};
use num_traits::Zero;
use std::fmt;

/// One violated presentation invariant, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ZeroDimension,
    NotPrime(u64),
    BadShape(String),
    /// c[i][j] ≠ −c[j][i] (or c[i][i] ≠ 0); indices are 0-based.
    Antisymmetry(usize, usize),
    /// Jacobi identity fails on the basis triple (i, j, k).
    Jacobi(usize, usize, usize),
    /// Lower central series stabilises at a nonzero term.
    NotNilpotent,
    /// vp(c[i][j][k]) < 0.
    NonIntegralConstant(usize, usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension => write!(f, "dimension must be at least 1"),
            Violation::NotPrime(p) => write!(f, "{p} is not prime"),
            Violation::BadShape(msg) => write!(f, "malformed structure constants: {msg}"),
            Violation::Antisymmetry(i, j) => {
                write!(f, "antisymmetry fails at pair ({}, {})", i + 1, j + 1)
            }
            Violation::Jacobi(i, j, k) => {
                write!(
                    f,
                    "Jacobi identity fails at ({}, {}, {})",
                    i + 1,
                    j + 1,
                    k + 1
                )
            }
            Violation::NotNilpotent => write!(f, "lower central series does not reach 0"),
            Violation::NonIntegralConstant(i, j, k) => write!(
                f,
                "structure constant c[{}][{}][{}] is not p-integral",
                i + 1,
                j + 1,
                k + 1
            ),
        }
    }
}

/// Pass/fail diagnostics for every presentation invariant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "all checks pass");
        }
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Ascending chain of ideals 0 = a_0 ⊂ a_1 ⊂ ... ⊂ a_d = g with
/// dim a_j = j and [a_j, g] ⊆ a_{j−1}.
#[derive(Clone, Debug)]
pub struct IdealFlag {
    pub subspaces: Vec<Subspace>,
}

impl IdealFlag {
    /// Re-checks the defining property, returning the first offending index.
    pub fn verify(&self, g: &LieAlgebra) -> std::result::Result<(), usize> {
        for (j, a) in self.subspaces.iter().enumerate() {
            if a.dim() != j {
                return Err(j);
            }
            if j == 0 {
                continue;
            }
            let below = &self.subspaces[j - 1];
            for row in a.basis() {
                for i in 0..g.dim() {
                    let br = g.bracket_with_basis(row, i);
                    if !below.contains_vec(&br) {
                        return Err(j);
                    }
                }
            }
        }
        Ok(())
    }
}

/// A nilpotent Lie algebra over ℚ presented by structure constants, together
/// with the prime p fixing the lattice L = ⊕ ℤ_(p) e_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    prime: u64,
    names: Vec<String>,
    /// brackets[i][j] = [e_i, e_j] as a coordinate vector.
    brackets: Vec<Vec<Vector>>,
}

impl LieAlgebra {
    /// Validates and constructs; rejects any presentation violating the
    /// antisymmetry, Jacobi, nilpotency or lattice-closure invariants.
    pub fn new(prime: u64, names: Vec<String>, brackets: Vec<Vec<Vector>>) -> Result<Self> {
        let report = Self::validation_report(prime, &names, &brackets);
        if !report.ok() {
            return Err(Error::Validation(report));
        }
        Ok(LieAlgebra {
            dim: names.len(),
            prime,
            names,
            brackets,
        })
    }

    /// Full diagnostic sweep over a raw presentation.
    pub fn validation_report(
        prime: u64,
        names: &[String],
        brackets: &[Vec<Vector>],
    ) -> ValidationReport {
        let mut violations = Vec::new();
        let d = names.len();
        if d == 0 {
            violations.push(Violation::ZeroDimension);
        }
        if !is_prime(prime) {
            violations.push(Violation::NotPrime(prime));
        }
        if brackets.len() != d || brackets.iter().any(|row| row.len() != d) {
            violations.push(Violation::BadShape(format!(
                "expected a {d}x{d} table of bracket vectors"
            )));
            return ValidationReport { violations };
        }
        for i in 0..d {
            for j in 0..d {
                if brackets[i][j].len() != d {
                    violations.push(Violation::BadShape(format!(
                        "bracket [{}, {}] has wrong length",
                        i + 1,
                        j + 1
                    )));
                    return ValidationReport { violations };
                }
            }
        }
        for i in 0..d {
            for j in i..d {
                let neg: Vector = brackets[j][i].iter().map(|c| -c).collect();
                if brackets[i][j] != neg {
                    violations.push(Violation::Antisymmetry(i, j));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for (k, c) in brackets[i][j].iter().enumerate() {
                    if !vp(c, prime).at_least(0) {
                        violations.push(Violation::NonIntegralConstant(i, j, k));
                    }
                }
            }
        }
        // Jacobi only makes sense on antisymmetric tables.
        if violations
            .iter()
            .all(|v| !matches!(v, Violation::Antisymmetry(..)))
        {
            let bracket_vec = |u: &Vector, k: usize| -> Vector {
                let mut out = zeros(d);
                for (m, c) in u.iter().enumerate() {
                    if !c.is_zero() {
                        for (o, b) in out.iter_mut().zip(&brackets[m][k]) {
                            *o += c * b;
                        }
                    }
                }
                out
            };
            'jacobi: for i in 0..d {
                for j in i + 1..d {
                    for k in j + 1..d {
                        let mut total = bracket_vec(&brackets[i][j], k);
                        for (t, c) in total.iter_mut().zip(bracket_vec(&brackets[j][k], i)) {
                            *t += c;
                        }
                        for (t, c) in total.iter_mut().zip(bracket_vec(&brackets[k][i], j)) {
                            *t += c;
                        }
                        if !vec_is_zero(&total) {
                            violations.push(Violation::Jacobi(i, j, k));
                            break 'jacobi;
                        }
                    }
                }
            }
            // Nilpotency via the lower central series; a nilpotent algebra of
            // dimension d has class at most d.
            let mut current: Vec<Vector> = (0..d).map(|i| unit(d, i)).collect();
            let mut reached_zero = false;
            for _ in 0..=d {
                let mut next = Vec::new();
                for i in 0..d {
                    for b in &current {
                        next.push(bracket_vec(b, i));
                    }
                }
                let next_span = Subspace::span(d, next);
                if next_span.is_zero() {
                    reached_zero = true;
                    break;
                }
                current = next_span.basis().to_vec();
            }
            if !reached_zero {
                violations.push(Violation::NotNilpotent);
            }
        }
        ValidationReport { violations }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// [e_i, e_j] as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &Vector {
        &self.brackets[i][j]
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, u: &[Rat], v: &[Rat]) -> Result<Vector> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: if u.len() != self.dim {
                    u.len()
                } else {
                    v.len()
                },
            });
        }
        let mut out = zeros(self.dim);
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                for (o, s) in out.iter_mut().zip(&self.brackets[i][j]) {
                    if !s.is_zero() {
                        *o += &c * s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// [u, e_i] without the dimension check (internal hot path).
    pub(crate) fn bracket_with_basis(&self, u: &[Rat], i: usize) -> Vector {
        let mut out = zeros(self.dim);
        for (m, c) in u.iter().enumerate() {
            if !c.is_zero() {
                for (o, b) in out.iter_mut().zip(&self.brackets[m][i]) {
                    if !b.is_zero() {
                        *o += c * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix of w ↦ [w, u] in the distinguished basis.
    pub fn ad_right(&self, u: &[Rat]) -> Mat {
        let mut m = Mat::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self
                .bracket(&unit(self.dim, j), u)
                .expect("basis vector has the right length");
            for i in 0..self.dim {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    /// Matrix of w ↦ [u, w]; equals −ad_right(u).
    pub fn ad_left(&self, u: &[Rat]) -> Mat {
        self.ad_right(u).scale(&-Rat::from_integer(1.into()))
    }

    /// Z_1 ⊆ Z_2 ⊆ ..., ending with the full algebra.
    pub fn upper_central_series(&self) -> Vec<Subspace> {
        let d = self.dim;
        let mut series = Vec::new();
        let mut prev = Subspace::zero(d);
        loop {
            // u ∈ Z_{i} iff residue_{Z_{i−1}}([u, e_j]) = 0 for all j.
            let mut rows = Vec::new();
            for j in 0..d {
                let images: Vec<Vector> = (0..d)
                    .map(|b| prev.residue(&self.bracket_with_basis(&unit(d, b), j)))
                    .collect();
                for coord in 0..d {
                    rows.push(images.iter().map(|im| im[coord].clone()).collect());
                }
            }
            let next = Subspace::span(d, null_space(&Mat::from_rows(rows)));
            let full = next.is_full();
            series.push(next.clone());
            if full {
                return series;
            }
            assert!(
                next.dim() > prev.dim(),
                "upper central series must strictly grow on validated algebras"
            );
            prev = next;
        }
    }

    /// C^1 = g ⊇ C^2 = [g,g] ⊇ ..., listing the nonzero terms.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let d = self.dim;
        let mut series = vec![Subspace::full(d)];
        loop {
            let current = series.last().unwrap();
            let mut next = Vec::new();
            for i in 0..d {
                for b in current.basis() {
                    next.push(self.bracket_with_basis(b, i));
                }
            }
            let next = Subspace::span(d, next);
            if next.is_zero() {
                return series;
            }
            series.push(next);
        }
    }

    /// Nilpotency class: the length of the lower central series.
    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().len()
    }

    pub fn centre(&self) -> Subspace {
        self.upper_central_series()[0].clone()
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        let lcs = self.lower_central_series();
        if lcs.len() > 1 {
            lcs[1].clone()
        } else {
            Subspace::zero(self.dim)
        }
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let rows = s.basis();
        for (i, a) in rows.iter().enumerate() {
            for b in rows.iter().skip(i + 1) {
                let br = self.bracket(a, b).expect("subspace vectors sized");
                if !s.contains_vec(&br) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        for a in s.basis() {
            for i in 0..self.dim {
                if !s.contains_vec(&self.bracket_with_basis(a, i)) {
                    return false;
                }
            }
        }
        true
    }

    /// Least ideal containing S: iterate V ← V + [g, V] to stabilisation.
    pub fn ideal_closure(&self, s: &Subspace) -> Subspace {
        let mut current = s.clone();
        loop {
            let mut vectors = current.basis().to_vec();
            for b in current.basis() {
                for i in 0..self.dim {
                    vectors.push(self.bracket_with_basis(b, i));
                }
            }
            let next = Subspace::span(self.dim, vectors);
            if next.dim() == current.dim() {
                return next;
            }
            current = next;
        }
    }

    /// True iff every structure constant has vp ≥ 1, i.e. [L, L] ⊆ pL.
    pub fn is_powerful(&self) -> bool {
        self.brackets
            .iter()
            .flatten()
            .flatten()
            .all(|c| vp(c, self.prime).at_least(1))
    }

    /// Level-n deformation: rebase on e_i' = p^n e_i, which multiplies every
    /// structure constant by p^n. deform(deform(g, m), n) = deform(g, m + n).
    pub fn deform(&self, n: u32) -> LieAlgebra {
        let scale = p_power(self.prime, n as i64);
        let brackets = self
            .brackets
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(|c| c * &scale).collect())
                    .collect()
            })
            .collect();
        LieAlgebra {
            dim: self.dim,
            prime: self.prime,
            names: self.names.clone(),
            brackets,
        }
    }

    /// Smallest n with deform(g, n) powerful.
    pub fn powerful_level(&self) -> u32 {
        let min = self
            .brackets
            .iter()
            .flatten()
            .flatten()
            .map(|c| vp(c, self.prime))
            .min()
            .unwrap_or(Valuation::Infinite);
        match min {
            Valuation::Infinite => 0,
            Valuation::Finite(v) if v >= 1 => 0,
            Valuation::Finite(v) => (1 - v) as u32,
        }
    }

    /// Central flag through the ideal `through` (when supplied): a complete
    /// chain of ideals with [a_j, g] ⊆ a_{j−1}, a_{dim a} = a.
    ///
    /// The chain interleaves a ∩ Z_i below the ideal and preimages of
    /// Z_i(g/a) above it; jumps are refined one dimension at a time, scanning
    /// candidate basis vectors from the highest index down, then echelon rows.
    pub fn central_flag(&self, through: Option<&Subspace>) -> Result<IdealFlag> {
        let d = self.dim;
        let a = match through {
            Some(s) => {
                if !self.is_ideal(s) {
                    return Err(Error::pre("`through` subspace is not an ideal"));
                }
                s.clone()
            }
            None => Subspace::zero(d),
        };
        let mut coarse: Vec<Subspace> = vec![Subspace::zero(d)];
        for z in self.upper_central_series() {
            let w = a.intersect(&z);
            if w.dim() > coarse.last().unwrap().dim() {
                coarse.push(w);
            }
        }
        if coarse.last().unwrap().dim() < a.dim() {
            coarse.push(a.clone());
        }
        if !a.is_full() {
            if a.is_zero() {
                for z in self.upper_central_series() {
                    if z.dim() > coarse.last().unwrap().dim() {
                        coarse.push(z);
                    }
                }
            } else {
                let (q, _proj) = self.quotient(&a)?;
                let lift_rows = a.lattice_basis(self.prime);
                let pivots = lattice_pivot_columns(&lift_rows);
                let complement: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
                for z in q.upper_central_series() {
                    // Preimage: a + lifts of the quotient basis.
                    let mut vectors = a.basis().to_vec();
                    for row in z.basis() {
                        let mut lift = zeros(d);
                        for (pos, &col) in complement.iter().enumerate() {
                            lift[col] = row[pos].clone();
                        }
                        vectors.push(lift);
                    }
                    let pre = Subspace::span(d, vectors);
                    if pre.dim() > coarse.last().unwrap().dim() {
                        coarse.push(pre);
                    }
                }
            }
        }
        // Refine every jump one dimension at a time.
        let mut flag = vec![Subspace::zero(d)];
        for pair in coarse.windows(2) {
            let (low, high) = (&pair[0], &pair[1]);
            let mut current = low.clone();
            let mut candidates: Vec<Vector> = (0..d).rev().map(|i| unit(d, i)).collect();
            candidates.extend(high.lattice_basis(self.prime).into_iter().rev());
            while current.dim() < high.dim() {
                let next = candidates
                    .iter()
                    .find(|v| high.contains_vec(v) && !current.contains_vec(v))
                    .cloned()
                    .ok_or_else(|| Error::Internal("flag refinement stalled".into()))?;
                current = current.add_vector(next);
                flag.push(current.clone());
            }
        }
        let flag = IdealFlag { subspaces: flag };
        flag.verify(self)
            .map_err(|j| Error::Internal(format!("central flag fails at index {j}")))?;
        Ok(flag)
    }

    /// Quotient by an ideal. The ideal basis is first saturated to a
    /// ℤ_(p)-basis of a ∩ L, so the quotient lattice is again free on the
    /// complementary distinguished vectors. Returns the quotient together
    /// with the projection matrix (quotient coords × ambient coords).
    pub fn quotient(&self, a: &Subspace) -> Result<(LieAlgebra, Mat)> {
        if !self.is_ideal(a) {
            return Err(Error::pre("quotient requires an ideal"));
        }
        let d = self.dim;
        let sat = a.lattice_basis(self.prime);
        let pivots = lattice_pivot_columns(&sat);
        let complement: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
        let qd = complement.len();
        let reduce = |v: &[Rat]| -> Vector {
            let mut r = v.to_vec();
            for (row, &p) in sat.iter().zip(&pivots) {
                if !r[p].is_zero() {
                    let c = r[p].clone();
                    for (x, y) in r.iter_mut().zip(row) {
                        *x -= &c * y;
                    }
                }
            }
            complement.iter().map(|&i| r[i].clone()).collect()
        };
        let mut proj = Mat::zero(qd, d);
        for col in 0..d {
            let image = reduce(&unit(d, col));
            for (rowi, val) in image.into_iter().enumerate() {
                proj[(rowi, col)] = val;
            }
        }
        let names: Vec<String> = complement.iter().map(|&i| self.names[i].clone()).collect();
        let mut brackets = vec![vec![zeros(qd); qd]; qd];
        for (bi, &i) in complement.iter().enumerate() {
            for (bj, &j) in complement.iter().enumerate() {
                brackets[bi][bj] = reduce(&self.brackets[i][j]);
            }
        }
        let q = LieAlgebra::new(self.prime, names, brackets)?;
        Ok((q, proj))
    }

    /// Extract a subalgebra as a standalone algebra on the saturated basis of
    /// `s`; returns it with the basis rows (new coordinates → ambient).
    pub fn subalgebra(&self, s: &Subspace) -> Result<(LieAlgebra, Vec<Vector>)> {
        if !self.is_subalgebra(s) {
            return Err(Error::pre("subspace is not closed under the bracket"));
        }
        let rows = s.lattice_basis(self.prime);
        let k = rows.len();
        let names: Vec<String> = rows
            .iter()
            .enumerate()
            .map(
                |(i, row)| match (0..self.dim).find(|&j| *row == unit(self.dim, j)) {
                    Some(j) => self.names[j].clone(),
                    None => format!("w{}", i + 1),
                },
            )
            .collect();
        let mut brackets = vec![vec![zeros(k); k]; k];
        for i in 0..k {
            for j in 0..k {
                let br = self.bracket(&rows[i], &rows[j])?;
                brackets[i][j] = coords_in_basis(&rows, &br)?;
            }
        }
        let sub = LieAlgebra::new(self.prime, names, brackets)?;
        Ok((sub, rows))
    }

    /// Direct sum of two presentations over the same prime.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        assert_eq!(self.prime, other.prime, "direct sum needs matching primes");
        let d1 = self.dim;
        let d = d1 + other.dim;
        let mut names = self.names.clone();
        for n in &other.names {
            let mut candidate = n.clone();
            while names.contains(&candidate) {
                candidate.push('\'');
            }
            names.push(candidate);
        }
        let mut brackets = vec![vec![zeros(d); d]; d];
        for i in 0..d1 {
            for j in 0..d1 {
                let mut v = self.brackets[i][j].clone();
                v.extend(zeros(other.dim));
                brackets[i][j] = v;
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                let mut v = zeros(d1);
                v.extend(other.brackets[i][j].clone());
                brackets[d1 + i][d1 + j] = v;
            }
        }
        LieAlgebra::new(self.prime, names, brackets).expect("direct sum of valid algebras")
    }

    /// Pretty-print a coordinate vector against the basis names.
    pub fn format_element(&self, v: &[Rat]) -> String {
        let mut parts = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(format!("({})*{}", c, self.names[i]));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Build the bracket table from a sparse list of pairs (i, j, vector), i < j;
/// the antisymmetric completion is automatic.
pub fn bracket_table(dim: usize, entries: &[(usize, usize, Vector)]) -> Vec<Vec<Vector>> {
    let mut table = vec![vec![zeros(dim); dim]; dim];
    for (i, j, v) in entries {
        table[*i][*j] = v.clone();
        table[*j][*i] = v.iter().map(|c| -c).collect();
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalars::{rat, rint};

    fn v(entries: &[i64]) -> Vector {
        entries.iter().map(|&e| rint(e)).collect()
    }

    fn h3() -> LieAlgebra {
        catalog::heisenberg3(3)
    }

    fn f4() -> LieAlgebra {
        catalog::filiform4(3)
    }

    #[test]
    fn validate_h3() {
        let g = h3();
        assert_eq!(g.dim(), 3);
    }

    #[test]
    fn validate_antisymmetry_failure() {
        let dim = 3;
        let mut table = vec![vec![zeros(dim); dim]; dim];
        table[0][1] = v(&[0, 0, 1]);
        // missing the c[2][1] completion
        let report =
            LieAlgebra::validation_report(3, &["e1".into(), "e2".into(), "e3".into()], &table);
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::Antisymmetry(0, 1))));
    }

    #[test]
    fn validate_non_nilpotent() {
        // [e1, e2] = e2 is solvable but not nilpotent.
        let table = bracket_table(2, &[(0, 1, v(&[0, 1]))]);
        let report = LieAlgebra::validation_report(3, &["e1".into(), "e2".into()], &table);
        assert!(report.violations.contains(&Violation::NotNilpotent));
    }

    #[test]
    fn validate_lattice_closure() {
        let table = bracket_table(3, &[(0, 1, vec![rint(0), rint(0), rat(1, 3)])]);
        let report =
            LieAlgebra::validation_report(3, &["e1".into(), "e2".into(), "e3".into()], &table);
        assert!(report
            .violations
            .iter()
            .any(|x| matches!(x, Violation::NonIntegralConstant(..))));
    }

    #[test]
    fn bracket_bilinear() {
        let g = f4();
        // [e1, e2 + e3] = e3 + e4
        let u = v(&[1, 0, 0, 0]);
        let w = v(&[0, 1, 1, 0]);
        assert_eq!(g.bracket(&u, &w).unwrap(), v(&[0, 0, 1, 1]));
        assert!(vec_is_zero(&g.bracket(&u, &u).unwrap()));
    }

    #[test]
    fn ad_right_signs() {
        let g = h3();
        let m = g.ad_right(&v(&[1, 0, 0]));
        // e2 ↦ [e2, e1] = −e3
        assert_eq!(m.apply(&v(&[0, 1, 0])), v(&[0, 0, -1]));
        assert!(g.ad_right(&v(&[0, 0, 0])).is_zero());
        // F4: ad_right(e1)^2 maps e2 to e4.
        let g = f4();
        let m = g.ad_right(&v(&[1, 0, 0, 0]));
        let sq = m.mul(&m);
        assert_eq!(sq.apply(&v(&[0, 1, 0, 0])), v(&[0, 0, 0, 1]));
    }

    #[test]
    fn central_series() {
        let g = h3();
        let ucs = g.upper_central_series();
        assert_eq!(ucs.len(), 2);
        assert_eq!(ucs[0], Subspace::span(3, vec![v(&[0, 0, 1])]));
        assert!(ucs[1].is_full());
        assert_eq!(g.nilpotency_class(), 2);

        let g = f4();
        let ucs = g.upper_central_series();
        assert_eq!(ucs[0], Subspace::span(4, vec![v(&[0, 0, 0, 1])]));
        assert_eq!(
            ucs[1],
            Subspace::span(4, vec![v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])])
        );
        assert_eq!(g.nilpotency_class(), 3);

        let ab = catalog::abelian(2, 3);
        assert_eq!(ab.nilpotency_class(), 1);
        assert!(ab.upper_central_series()[0].is_full());
    }

    #[test]
    fn flags() {
        let g = h3();
        let flag = g.central_flag(None).unwrap();
        assert_eq!(flag.subspaces[1], Subspace::span(3, vec![v(&[0, 0, 1])]));
        assert_eq!(
            flag.subspaces[2],
            Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])])
        );
        assert!(flag.verify(&g).is_ok());

        let g = f4();
        let through = Subspace::span(4, vec![v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]);
        let flag = g.central_flag(Some(&through)).unwrap();
        assert_eq!(flag.subspaces[1], Subspace::span(4, vec![v(&[0, 0, 0, 1])]));
        assert_eq!(flag.subspaces[2], through);
        assert_eq!(
            flag.subspaces[3],
            Subspace::span(
                4,
                vec![v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]
            )
        );
    }

    #[test]
    fn flag_through_non_ideal_rejected() {
        let g = h3();
        let s = Subspace::span(3, vec![v(&[1, 0, 0])]);
        assert!(g.central_flag(Some(&s)).is_err());
    }

    #[test]
    fn quotients() {
        let g = h3();
        let a = Subspace::span(3, vec![v(&[0, 0, 1])]);
        let (q, proj) = g.quotient(&a).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.derived_subalgebra().is_zero());
        assert_eq!(proj.apply(&v(&[1, 2, 5])), v(&[1, 2]));

        // F4 / span{e4} is the Heisenberg algebra.
        let g = f4();
        let (q, _) = g
            .quotient(&Subspace::span(4, vec![v(&[0, 0, 0, 1])]))
            .unwrap();
        assert_eq!(q.dim(), 3);
        assert_eq!(q.basis_bracket(0, 1), &v(&[0, 0, 1]));

        // g / 0 = g.
        let (q, _) = g.quotient(&Subspace::zero(4)).unwrap();
        assert_eq!(q, g);
    }

    #[test]
    fn ideal_closure_steps() {
        let g = h3();
        let s = Subspace::span(3, vec![v(&[1, 0, 0])]);
        let c = g.ideal_closure(&s);
        assert_eq!(c, Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 0, 1])]));
        assert_eq!(g.ideal_closure(&c), c);

        let g = f4();
        let s = Subspace::span(4, vec![v(&[0, 1, 0, 0])]);
        assert_eq!(
            g.ideal_closure(&s),
            Subspace::span(
                4,
                vec![v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]
            )
        );
    }

    #[test]
    fn powerful_and_deform() {
        let g = h3();
        assert!(!g.is_powerful());
        assert!(catalog::abelian(2, 3).is_powerful());
        let d = g.deform(1);
        assert!(d.is_powerful());
        assert_eq!(d.basis_bracket(0, 1), &v(&[0, 0, 3]));
        assert_eq!(g.deform(0), g);
        assert_eq!(g.deform(1).deform(2), g.deform(3));
        assert_eq!(g.powerful_level(), 1);
    }

    #[test]
    fn subalgebra_extraction() {
        let g = catalog::heisenberg5(3);
        let s = Subspace::span(
            5,
            vec![
                v(&[0, 1, 0, 0, 0]),
                v(&[0, 0, 1, 0, 0]),
                v(&[0, 0, 0, 1, 0]),
                v(&[0, 0, 0, 0, 1]),
            ],
        );
        let (sub, rows) = g.subalgebra(&s).unwrap();
        assert_eq!(sub.dim(), 4);
        assert_eq!(rows.len(), 4);
        // [e3, e4] = e5 survives in the subalgebra coordinates.
        assert_eq!(sub.basis_bracket(1, 2), &v(&[0, 0, 0, 1]));
    }
}
