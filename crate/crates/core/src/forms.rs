//! Linear forms, the associated bilinear form B_λ(u, v) = λ([u, v]),
//! polarisations, reducing quadruples, and the special/metabelian predicates.

use crate::lie::LieAlgebra;
use crate::linalg::{null_space, unit, vec_is_zero, Mat, Subspace, Vector};
use crate::scalars::{is_integral, Rat};
use crate::{Error, Result};
use num_traits::Zero;
use std::fmt;

/// A linear form on g, as the row vector (λ(e_1), ..., λ(e_d)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coords: Vector,
    prime: u64,
}

impl LinearForm {
    /// A form with λ(L) ⊆ ℤ_(p); rejects non-integral coordinates.
    pub fn integral(coords: Vector, prime: u64) -> Result<Self> {
        let form = LinearForm::new_unchecked(coords, prime);
        if !form.is_integral() {
            return Err(Error::pre("linear form is not integral on the lattice"));
        }
        Ok(form)
    }

    /// A form without the integrality check; coadjoint twists can leave the
    /// dual lattice, which callers report rather than reject.
    pub fn new_unchecked(coords: Vector, prime: u64) -> Self {
        LinearForm { coords, prime }
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.coords)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| is_integral(c, self.prime))
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        assert_eq!(v.len(), self.coords.len(), "form/vector size mismatch");
        let mut acc = Rat::zero();
        for (c, x) in self.coords.iter().zip(v) {
            if !c.is_zero() && !x.is_zero() {
                acc += c * x;
            }
        }
        acc
    }

    /// λ([u, v]).
    pub fn eval_bracket(&self, g: &LieAlgebra, u: &[Rat], v: &[Rat]) -> Result<Rat> {
        Ok(self.eval(&g.bracket(u, v)?))
    }

    /// Restriction to a subalgebra given by its basis rows: coordinates of
    /// λ on that basis.
    pub fn restrict(&self, rows: &[Vector]) -> LinearForm {
        LinearForm::new_unchecked(rows.iter().map(|r| self.eval(r)).collect(), self.prime)
    }

    /// True iff λ([g, g]) = 0.
    pub fn is_character(&self, g: &LieAlgebra) -> bool {
        let derived = g.derived_subalgebra();
        derived.basis().iter().all(|v| self.eval(v).is_zero())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Antisymmetric Gram matrix M[i][j] = λ([e_i, e_j]).
pub fn gram(g: &LieAlgebra, lambda: &LinearForm) -> Mat {
    let d = g.dim();
    let mut m = Mat::zero(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = lambda.eval(g.basis_bracket(i, j));
        }
    }
    m
}

/// Stabiliser g^λ = { u : λ([u, g]) = 0 }, the radical of the Gram form.
pub fn stabilizer(g: &LieAlgebra, lambda: &LinearForm) -> Subspace {
    Subspace::span(g.dim(), null_space(&gram(g, lambda)))
}

/// a^⊥ = { u ∈ g : λ([u, a]) = 0 }.
pub fn a_perp(g: &LieAlgebra, lambda: &LinearForm, a: &Subspace) -> Subspace {
    let d = g.dim();
    if a.is_zero() {
        return Subspace::full(d);
    }
    let mut rows = Vec::new();
    for w in a.basis() {
        rows.push(
            (0..d)
                .map(|j| {
                    lambda.eval(
                        &g.bracket(&unit(d, j), w)
                            .expect("basis vectors are correctly sized"),
                    )
                })
                .collect(),
        );
    }
    Subspace::span(d, null_space(&Mat::from_rows(rows)))
}

/// A polarisation of g at λ: an isotropic subalgebra of dimension
/// ½(dim g + dim g^λ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarisation {
    pub subspace: Subspace,
    pub codim: usize,
}

/// The first clause of the polarisation definition that fails, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolarisationFailure {
    /// Basis pair (by index into the echelon basis) whose bracket escapes.
    NotSubalgebra(usize, usize),
    /// Basis pair with λ([b_i, b_j]) ≠ 0.
    NotIsotropic(usize, usize),
    WrongDimension {
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for PolarisationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolarisationFailure::NotSubalgebra(i, j) => {
                write!(
                    f,
                    "not a subalgebra: bracket of basis rows {i} and {j} escapes"
                )
            }
            PolarisationFailure::NotIsotropic(i, j) => {
                write!(f, "not isotropic: lambda([b_{i}, b_{j}]) is nonzero")
            }
            PolarisationFailure::WrongDimension { expected, got } => {
                write!(f, "dimension {got}, expected {expected}")
            }
        }
    }
}

/// Checks the three polarisation clauses in order, reporting the first
/// failure: subalgebra, isotropy, and the dimension ½(dim g + dim g^λ).
pub fn is_polarisation(
    g: &LieAlgebra,
    lambda: &LinearForm,
    b: &Subspace,
) -> std::result::Result<Polarisation, PolarisationFailure> {
    let rows = b.basis();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let br = g.bracket(&rows[i], &rows[j]).expect("sized vectors");
            if !b.contains_vec(&br) {
                return Err(PolarisationFailure::NotSubalgebra(i, j));
            }
        }
    }
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let br = g.bracket(&rows[i], &rows[j]).expect("sized vectors");
            if !lambda.eval(&br).is_zero() {
                return Err(PolarisationFailure::NotIsotropic(i, j));
            }
        }
    }
    let stab = stabilizer(g, lambda);
    let doubled = g.dim() + stab.dim();
    debug_assert_eq!(doubled % 2, 0, "dim g + dim g^lambda is always even");
    let expected = doubled / 2;
    if b.dim() != expected {
        return Err(PolarisationFailure::WrongDimension {
            expected,
            got: b.dim(),
        });
    }
    Ok(Polarisation {
        subspace: b.clone(),
        codim: g.dim() - b.dim(),
    })
}

/// Stabiliser of λ restricted to the subspace spanned by `rows`, inside that
/// subspace: { u ∈ h : λ([u, h]) = 0 }.
fn inner_stabilizer(g: &LieAlgebra, lambda: &LinearForm, rows: &[Vector]) -> Vec<Vector> {
    let k = rows.len();
    if k == 0 {
        return Vec::new();
    }
    let mut m = Mat::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = lambda.eval(&g.bracket(&rows[i], &rows[j]).expect("sized"));
        }
    }
    null_space(&m)
        .into_iter()
        .map(|c| {
            let mut v = crate::linalg::zeros(g.dim());
            for (ci, row) in c.iter().zip(rows) {
                if !ci.is_zero() {
                    for (x, y) in v.iter_mut().zip(row) {
                        *x += ci * y;
                    }
                }
            }
            v
        })
        .collect()
}

/// Vergne's construction: b = Σ_i h_i^{λ_i} over a central flag h_0 ⊂ ... ⊂ h_d,
/// optionally routed through an ideal a with λ([a, a]) = 0 (then a ⊆ b).
pub fn vergne_polarisation(
    g: &LieAlgebra,
    lambda: &LinearForm,
    through: Option<&Subspace>,
) -> Result<Polarisation> {
    if let Some(a) = through {
        let rows = a.basis();
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                let val = lambda.eval_bracket(g, &rows[i], &rows[j])?;
                if !val.is_zero() {
                    return Err(Error::pre(format!(
                        "lambda does not vanish on [a, a]: witness pair ({}, {})",
                        g.format_element(&rows[i]),
                        g.format_element(&rows[j])
                    )));
                }
            }
        }
    }
    let flag = g.central_flag(through)?;
    let mut vectors = Vec::new();
    for h in &flag.subspaces {
        vectors.extend(inner_stabilizer(g, lambda, h.basis()));
    }
    let b = Subspace::span(g.dim(), vectors);
    is_polarisation(g, lambda, &b)
        .map_err(|e| Error::Internal(format!("Vergne sum is not a polarisation: {e}")))
}

/// A reducing quadruple (x, y, z, g'): z spans the centre, y is central in
/// the codimension-1 ideal g' = ker ad(y), x completes g', and [x, y] = αz.
#[derive(Clone, Debug)]
pub struct ReducingQuadruple {
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    pub gprime: Subspace,
    pub alpha: Rat,
}

impl ReducingQuadruple {
    /// Re-checks every defining invariant against g.
    pub fn verify(&self, g: &LieAlgebra) -> Result<()> {
        let centre = g.centre();
        if !centre.contains_vec(&self.z) || vec_is_zero(&self.z) {
            return Err(Error::Internal("z is not a nonzero central element".into()));
        }
        if !self.gprime.contains_vec(&self.y) || !self.gprime.contains_vec(&self.z) {
            return Err(Error::Internal("y, z must lie in g'".into()));
        }
        if self.gprime.contains_vec(&self.x) {
            return Err(Error::Internal("x must lie outside g'".into()));
        }
        if self.gprime.dim() + 1 != g.dim() || !g.is_ideal(&self.gprime) {
            return Err(Error::Internal("g' is not a codimension-1 ideal".into()));
        }
        for w in self.gprime.basis() {
            if !vec_is_zero(&g.bracket(&self.y, w)?) {
                return Err(Error::Internal("y is not central in g'".into()));
            }
        }
        let br = g.bracket(&self.x, &self.y)?;
        let scaled: Vector = self.z.iter().map(|c| c * &self.alpha).collect();
        if br != scaled || self.alpha.is_zero() {
            return Err(Error::Internal("[x, y] != alpha z".into()));
        }
        Ok(())
    }
}

/// Deterministic reducing quadruple. Requires dim g > 1 and that λ kills no
/// nonzero ideal (checked via `max_ideal_in_kernel`); then the centre is a
/// line Kz with λ(z) ≠ 0, and the first basis pair (x, y) = (e_i, e_j) with
/// [y, g] ⊆ Kz, y non-central and [x, y] ≠ 0 is chosen.
pub fn reducing_quadruple(g: &LieAlgebra, lambda: &LinearForm) -> Result<ReducingQuadruple> {
    let d = g.dim();
    if d <= 1 {
        return Err(Error::pre("reducing quadruple needs dim g > 1"));
    }
    if !max_ideal_in_kernel(g, lambda).is_zero() {
        return Err(Error::pre(
            "hypothesis violated: lambda kills a nonzero ideal",
        ));
    }
    let centre = g.centre();
    if centre.dim() != 1 {
        return Err(Error::pre(format!(
            "hypothesis violated: centre has dimension {}",
            centre.dim()
        )));
    }
    let z = centre.basis()[0].clone();
    if lambda.eval(&z).is_zero() {
        return Err(Error::pre("hypothesis violated: lambda(z) = 0"));
    }
    // Y = { u : [u, g] ⊆ Kz }; any y ∈ Y outside the centre has rank-1 ad.
    let in_y =
        |u: &Vector| -> bool { (0..d).all(|i| centre.contains_vec(&g.bracket_with_basis(u, i))) };
    let mut found: Option<(Vector, Vector)> = None;
    'outer: for i in 0..d {
        let x = unit(d, i);
        for j in 0..d {
            if i == j {
                continue;
            }
            let y = unit(d, j);
            if !in_y(&y) || centre.contains_vec(&y) {
                continue;
            }
            if !vec_is_zero(&g.bracket(&x, &y)?) {
                found = Some((x, y));
                break 'outer;
            }
        }
    }
    let (x, y) = match found {
        Some(pair) => pair,
        None => {
            // General fallback: first echelon row of Y outside the centre,
            // then the first basis vector pairing nontrivially with it.
            let mut rows = Vec::new();
            for j in 0..d {
                let images: Vec<Vector> = (0..d)
                    .map(|b| centre.residue(&g.bracket_with_basis(&unit(d, b), j)))
                    .collect();
                for coord in 0..d {
                    rows.push(images.iter().map(|im| im[coord].clone()).collect());
                }
            }
            let y_space = Subspace::span(d, null_space(&Mat::from_rows(rows)));
            let y = y_space
                .basis()
                .iter()
                .find(|v| !centre.contains_vec(v))
                .cloned()
                .ok_or_else(|| Error::pre("hypothesis violated: no reducing y exists"))?;
            let x = (0..d)
                .map(|i| unit(d, i))
                .find(|x| !vec_is_zero(&g.bracket(x, &y).expect("sized")))
                .ok_or_else(|| Error::Internal("non-central y with [g, y] = 0".into()))?;
            (x, y)
        }
    };
    let gprime = Subspace::span(d, null_space(&g.ad_right(&y)));
    let br = g.bracket(&x, &y)?;
    let alpha = {
        let pivot = z.iter().position(|c| !c.is_zero()).expect("z is nonzero");
        &br[pivot] / &z[pivot]
    };
    let q = ReducingQuadruple {
        x,
        y,
        z,
        gprime,
        alpha,
    };
    q.verify(g)?;
    Ok(q)
}

/// Output of `shrink_polarisation`. `t_proper` records whether the enclosing
/// subalgebra t is proper; it always is when λ kills no nonzero ideal.
#[derive(Clone, Debug)]
pub struct ShrunkPolarisation {
    pub b_prime: Polarisation,
    pub t: Subspace,
    pub t_proper: bool,
}

/// Replace a polarisation b by one inside g': if b ⊆ g' nothing moves,
/// otherwise b' = (b ∩ g') ⊕ Ky and t = b ⊕ Ky.
pub fn shrink_polarisation(
    g: &LieAlgebra,
    lambda: &LinearForm,
    b: &Polarisation,
    q: &ReducingQuadruple,
) -> Result<ShrunkPolarisation> {
    if g.dim() <= 3 {
        return Err(Error::pre("shrink_polarisation needs dim g > 3"));
    }
    q.verify(g)?;
    if lambda.eval(&q.z).is_zero() {
        return Err(Error::pre("hypothesis violated: lambda(z) = 0"));
    }
    is_polarisation(g, lambda, &b.subspace)
        .map_err(|e| Error::pre(format!("b is not a polarisation: {e}")))?;
    if q.gprime.contains(&b.subspace) {
        return Ok(ShrunkPolarisation {
            b_prime: b.clone(),
            t: q.gprime.clone(),
            t_proper: true,
        });
    }
    let b_cap = b.subspace.intersect(&q.gprime);
    let b_prime_space = b_cap.add_vector(q.y.clone());
    let b_prime = is_polarisation(g, lambda, &b_prime_space)
        .map_err(|e| Error::Internal(format!("shrunk subspace is not a polarisation: {e}")))?;
    let t = b.subspace.add_vector(q.y.clone());
    let t_proper = t.dim() < g.dim();
    Ok(ShrunkPolarisation {
        b_prime,
        t,
        t_proper,
    })
}

/// Largest ideal t with λ(t) = 0: iterate V ← { v ∈ V : [v, g] ⊆ V } from
/// V = ker λ until stable.
pub fn max_ideal_in_kernel(g: &LieAlgebra, lambda: &LinearForm) -> Subspace {
    let d = g.dim();
    let kernel = Subspace::span(
        d,
        null_space(&Mat::from_rows(vec![lambda.coords().clone()])),
    );
    let mut current = kernel;
    loop {
        // v ∈ next iff v ∈ current and [v, e_j] ∈ current for all j.
        let mut rows: Vec<Vector> = Vec::new();
        for coord_fn in std::iter::once(None).chain((0..d).map(Some)) {
            let images: Vec<Vector> = (0..d)
                .map(|b| {
                    let v = unit(d, b);
                    match coord_fn {
                        None => current.residue(&v),
                        Some(j) => current.residue(&g.bracket_with_basis(&v, j)),
                    }
                })
                .collect();
            for coord in 0..d {
                rows.push(images.iter().map(|im| im[coord].clone()).collect());
            }
        }
        let next = Subspace::span(d, null_space(&Mat::from_rows(rows)));
        if next.dim() == current.dim() {
            return next;
        }
        current = next;
    }
}

/// Dixmier's induction pipeline: quotient out the maximal killed ideal,
/// short-circuit characters to b = g, otherwise pass to the codimension-1
/// ideal of a reducing quadruple and pull the recursive polarisation back.
pub fn irreducible_polarisation(g: &LieAlgebra, lambda: &LinearForm) -> Result<Polarisation> {
    let d = g.dim();
    if lambda.is_character(g) {
        let full = Subspace::full(d);
        return is_polarisation(g, lambda, &full)
            .map_err(|e| Error::Internal(format!("character case failed: {e}")));
    }
    let t = max_ideal_in_kernel(g, lambda);
    if !t.is_zero() {
        let (g1, _proj) = g.quotient(&t)?;
        let sat = t.lattice_basis(g.prime());
        let pivots = crate::linalg::lattice_pivot_columns(&sat);
        let complement: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
        let lambda1 = LinearForm::new_unchecked(
            complement
                .iter()
                .map(|&i| lambda.eval(&unit(d, i)))
                .collect(),
            g.prime(),
        );
        let b1 = irreducible_polarisation(&g1, &lambda1)?;
        let mut vectors = t.basis().to_vec();
        for row in b1.subspace.basis() {
            let mut lift = crate::linalg::zeros(d);
            for (pos, &col) in complement.iter().enumerate() {
                lift[col] = row[pos].clone();
            }
            vectors.push(lift);
        }
        let b = Subspace::span(d, vectors);
        return is_polarisation(g, lambda, &b)
            .map_err(|e| Error::Internal(format!("pullback is not a polarisation: {e}")));
    }
    let q = reducing_quadruple(g, lambda)?;
    let (gp, rows) = g.subalgebra(&q.gprime)?;
    let mu = lambda.restrict(&rows);
    let bp = irreducible_polarisation(&gp, &mu)?;
    let vectors: Vec<Vector> = bp
        .subspace
        .basis()
        .iter()
        .map(|c| {
            let mut v = crate::linalg::zeros(d);
            for (ci, row) in c.iter().zip(&rows) {
                if !ci.is_zero() {
                    for (x, y) in v.iter_mut().zip(row) {
                        *x += ci * y;
                    }
                }
            }
            v
        })
        .collect();
    let b = Subspace::span(d, vectors);
    is_polarisation(g, lambda, &b)
        .map_err(|e| Error::Internal(format!("induced polarisation check failed: {e}")))
}

/// Result of the special-form test, with the generated ideal and a witness
/// pair when λ([a, a]) ≠ 0.
#[derive(Clone, Debug)]
pub struct SpecialCheck {
    pub special: bool,
    pub ideal: Subspace,
    pub witness: Option<(Vector, Vector)>,
}

/// λ is special when the ideal generated by g^λ is λ-isotropic.
pub fn is_special(g: &LieAlgebra, lambda: &LinearForm) -> SpecialCheck {
    let a = g.ideal_closure(&stabilizer(g, lambda));
    let rows = a.basis();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let br = g.bracket(&rows[i], &rows[j]).expect("sized");
            if !lambda.eval(&br).is_zero() {
                return SpecialCheck {
                    special: false,
                    ideal: a.clone(),
                    witness: Some((rows[i].clone(), rows[j].clone())),
                };
            }
        }
    }
    SpecialCheck {
        special: true,
        ideal: a,
        witness: None,
    }
}

/// True iff [[g, g], [g, g]] = 0.
pub fn is_metabelian(g: &LieAlgebra) -> bool {
    let derived = g.derived_subalgebra();
    let rows = derived.basis();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if !vec_is_zero(&g.bracket(&rows[i], &rows[j]).expect("sized")) {
                return false;
            }
        }
    }
    true
}
