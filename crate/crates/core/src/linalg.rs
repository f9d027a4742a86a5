//! Exact linear algebra over ℚ: reduced row echelon forms, null spaces,
//! subspaces with canonical bases, and p-saturated lattice bases.

use crate::scalars::{p_power, vp, Rat, Valuation};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;

pub type Vector = Vec<Rat>;

pub fn zeros(n: usize) -> Vector {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn vec_is_zero(v: &[Rat]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], c: &Rat) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_neg(a: &[Rat]) -> Vector {
    a.iter().map(|x| -x).collect()
}

/// a ← a − c·b in place.
pub fn vec_axpy(a: &mut [Rat], c: &Rat, b: &[Rat]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= c * y;
    }
}

pub fn format_vector(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Dense matrix, row-major, column-vector convention: `apply` computes M·v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![Rat::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        Mat { nrows, ncols, data }
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_cols(cols: &[Vector]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |c| c.len());
        let mut m = Mat::zero(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "ragged columns");
            for i in 0..nrows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.ncols..(i + 1) * self.ncols].to_vec()
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.nrows).map(|i| self.row(i)).collect()
    }

    pub fn apply(&self, v: &[Rat]) -> Vector {
        assert_eq!(v.len(), self.ncols, "matrix/vector size mismatch");
        (0..self.nrows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.ncols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols, other.nrows, "matrix product size mismatch");
        let mut out = Mat::zero(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Inverse via Gauss-Jordan; `None` for singular input.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.nrows, self.ncols, "inverse of non-square matrix");
        let n = self.nrows;
        let mut aug: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend(unit(n, i));
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let rows: Vec<Vector> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Mat::from_rows(rows))
    }

    /// Determinant by fraction-free-ish Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut rows = self.rows();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !rows[i][col].is_zero());
            let Some(p) = pivot else {
                return Rat::zero();
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            det *= rows[col][col].clone();
            let inv = rows[col][col].clone();
            for i in col + 1..n {
                if rows[i][col].is_zero() {
                    continue;
                }
                let factor = &rows[i][col] / &inv;
                let pivot_row = rows[col].clone();
                vec_axpy(&mut rows[i], &factor, &pivot_row);
            }
        }
        det
    }

    /// Minimum p-adic valuation over all entries (+∞ for the zero matrix).
    pub fn min_vp(&self, p: u64) -> Valuation {
        self.data
            .iter()
            .map(|c| vp(c, p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.ncols + j]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows {
            writeln!(f, "{}", format_vector(&self.row(i)))?;
        }
        Ok(())
    }
}

/// In-place reduced row echelon form. Drops zero rows, returns pivot columns.
/// The result is the canonical basis of the row space.
pub fn rref(rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = rows[rank][col].clone();
        for c in rows[rank].iter_mut() {
            *c /= &inv;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                vec_axpy(row, &factor, &pivot);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// Canonical basis of { x : M·x = 0 }.
pub fn null_space(m: &Mat) -> Vec<Vector> {
    let mut rows = m.rows();
    let pivots = rref(&mut rows);
    let n = m.ncols;
    let mut basis = Vec::new();
    let pivot_set: Vec<usize> = pivots.clone();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut x = zeros(n);
        x[free] = Rat::one();
        for (i, &p) in pivot_set.iter().enumerate() {
            x[p] = -rows[i][free].clone();
        }
        basis.push(x);
    }
    basis
}

/// Subspace of ℚ^d stored as the reduced echelon basis of its row space.
/// Two subspaces are equal iff their echelon rows coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, (0..ambient).map(|i| unit(ambient, i)).collect())
    }

    pub fn span(ambient: usize, vectors: Vec<Vector>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
        }
        let mut rows = vectors;
        let pivots = rref(&mut rows);
        Subspace {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn line(v: Vector) -> Self {
        let n = v.len();
        Subspace::span(n, vec![v])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of v after reduction by the echelon basis; zero iff v lies
    /// in the subspace.
    pub fn residue(&self, v: &[Rat]) -> Vector {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let c = r[p].clone();
                vec_axpy(&mut r, &c, row);
            }
        }
        r
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        vec_is_zero(&self.residue(v))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vec(r))
    }

    /// Coefficients of v over the echelon basis, when v lies in the span.
    pub fn coords(&self, v: &[Rat]) -> Option<Vector> {
        if !self.contains_vec(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vectors = self.rows.clone();
        vectors.extend(other.rows.clone());
        Subspace::span(self.ambient, vectors)
    }

    pub fn add_vector(&self, v: Vector) -> Subspace {
        let mut vectors = self.rows.clone();
        vectors.push(v);
        Subspace::span(self.ambient, vectors)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // x = Σ c_i a_i lies in `other` iff Σ c_i residue_other(a_i) = 0.
        let residues: Vec<Vector> = self.rows.iter().map(|r| other.residue(r)).collect();
        if residues.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let m = Mat::from_cols(&residues);
        let coeffs = null_space(&m);
        let vectors = coeffs
            .into_iter()
            .map(|c| {
                let mut x = zeros(self.ambient);
                for (ci, row) in c.iter().zip(&self.rows) {
                    if !ci.is_zero() {
                        for (xj, rj) in x.iter_mut().zip(row) {
                            *xj += ci * rj;
                        }
                    }
                }
                x
            })
            .collect();
        Subspace::span(self.ambient, vectors)
    }

    /// Basis of the ℤ_(p)-saturation: integral rows with unit pivots whose
    /// ℤ_(p)-span is (ℚ-span of self) ∩ ℤ_(p)^d. Pivot entries are exactly 1,
    /// pivot columns are cleared, rows sorted by pivot column.
    pub fn lattice_basis(&self, p: u64) -> Vec<Vector> {
        lattice_basis_of(&self.rows, p)
    }

    /// Pivot columns of `lattice_basis`.
    pub fn lattice_pivots(&self, p: u64) -> Vec<usize> {
        let rows = self.lattice_basis(p);
        lattice_pivot_columns(&rows)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.rows.iter().map(|r| format_vector(r)).collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}

fn make_primitive(row: &mut Vector, p: u64) {
    let min = row
        .iter()
        .filter_map(|c| vp(c, p).finite())
        .min()
        .expect("nonzero row");
    if min != 0 {
        let scale = p_power(p, -min);
        for c in row.iter_mut() {
            *c *= &scale;
        }
    }
}

/// Saturated ℤ_(p)-basis of the ℚ-span of `rows` intersected with ℤ_(p)^d.
pub fn lattice_basis_of(rows: &[Vector], p: u64) -> Vec<Vector> {
    let mut work: Vec<Vector> = rows.iter().filter(|r| !vec_is_zero(r)).cloned().collect();
    for r in work.iter_mut() {
        make_primitive(r, p);
    }
    let mut done: Vec<(usize, Vector)> = Vec::new();
    while !work.is_empty() {
        // A primitive row always has a unit entry; pick the lowest unit
        // column over all rows, then the first row realising it.
        let mut best: Option<(usize, usize)> = None;
        for (idx, row) in work.iter().enumerate() {
            for (col, c) in row.iter().enumerate() {
                if vp(c, p) == Valuation::Finite(0) {
                    if best.map_or(true, |(bc, _)| col < bc) {
                        best = Some((col, idx));
                    }
                    break;
                }
            }
        }
        let (col, idx) = best.expect("primitive rows have unit entries");
        let mut pivot = work.remove(idx);
        let inv = pivot[col].clone();
        for c in pivot.iter_mut() {
            *c /= &inv;
        }
        let mut next = Vec::new();
        for mut row in work {
            if !row[col].is_zero() {
                let c = row[col].clone();
                vec_axpy(&mut row, &c, &pivot);
            }
            if !vec_is_zero(&row) {
                make_primitive(&mut row, p);
                next.push(row);
            }
        }
        work = next;
        for (_, row) in done.iter_mut() {
            if !row[col].is_zero() {
                let c = row[col].clone();
                vec_axpy(row, &c, &pivot);
            }
        }
        done.push((col, pivot));
    }
    done.sort_by_key(|(col, _)| *col);
    done.into_iter().map(|(_, row)| row).collect()
}

/// Pivot columns of a saturated basis as produced by `lattice_basis_of`.
pub fn lattice_pivot_columns(rows: &[Vector]) -> Vec<usize> {
    // Each row has a distinguished column where it is 1 and all other rows
    // vanish; recover it as the first unit-valuation column that the other
    // rows miss.
    let mut pivots = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let col = row
            .iter()
            .enumerate()
            .position(|(j, c)| {
                c.is_one()
                    && rows
                        .iter()
                        .enumerate()
                        .all(|(k, other)| k == i || other[j].is_zero())
            })
            .expect("saturated basis row has a pivot column");
        pivots.push(col);
    }
    pivots
}

/// Solve M·x = v exactly; `None` when inconsistent. Free variables are 0.
pub fn solve(m: &Mat, v: &[Rat]) -> Option<Vector> {
    assert_eq!(v.len(), m.nrows);
    let mut aug: Vec<Vector> = (0..m.nrows)
        .map(|i| {
            let mut r = m.row(i);
            r.push(v[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    let n = m.ncols;
    if pivots.contains(&n) {
        return None;
    }
    let mut x = zeros(n);
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Coordinates of v in the basis given by `basis` (columns), or an error.
pub fn coords_in_basis(basis: &[Vector], v: &[Rat]) -> Result<Vector> {
    let m = Mat::from_cols(basis);
    solve(&m, v).ok_or_else(|| Error::Internal("vector outside spanning set".into()))
}

/// Solve M·x = v with full pivoting on minimal p-adic valuation. Over the
/// local ring ℤ_(p) this is Smith-style elimination, so the particular
/// solution (free variables zero) is p-integral whenever any p-integral
/// solution exists.
pub fn solve_p_adic(m: &Mat, v: &[Rat], p: u64) -> Option<Vector> {
    assert_eq!(v.len(), m.nrows);
    let (nr, nc) = (m.nrows, m.ncols);
    let mut a: Vec<Vector> = (0..nr)
        .map(|i| {
            let mut r = m.row(i);
            r.push(v[i].clone());
            r
        })
        .collect();
    let mut col_order: Vec<usize> = (0..nc).collect();
    let mut rank = 0usize;
    while rank < nr && rank < nc {
        // Minimal-valuation pivot over the active block.
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in rank..nr {
            for jpos in rank..nc {
                let entry = &a[i][jpos];
                if entry.is_zero() {
                    continue;
                }
                let val = vp(entry, p);
                if best.as_ref().map_or(true, |(bv, _, _)| val < *bv) {
                    best = Some((val, i, jpos));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(rank, pi);
        if pj != rank {
            for row in a.iter_mut() {
                row.swap(rank, pj);
            }
            col_order.swap(rank, pj);
        }
        let inv = a[rank][rank].clone();
        for c in a[rank].iter_mut() {
            *c /= &inv;
        }
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && !row[rank].is_zero() {
                let f = row[rank].clone();
                vec_axpy(row, &f, &pivot);
            }
        }
        rank += 1;
    }
    // Consistency: remaining rows must have zero right-hand side.
    for row in a.iter().skip(rank) {
        if !row[nc].is_zero() {
            return None;
        }
    }
    let mut x = zeros(nc);
    for (i, row) in a.iter().take(rank).enumerate() {
        x[col_order[i]] = row[nc].clone();
    }
    Some(x)
}
