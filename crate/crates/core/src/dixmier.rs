//! The differential-operator realisation of induced modules for nilpotent
//! Lie algebras, and everything computed from it: adapted bases, the map
//! ρ: U(g) → A_r, the brute-force module oracle, degree-truncated annihilator
//! kernels, control checks, perpendicular extraction and rank-1 induction.

use crate::forms::{is_polarisation, LinearForm, Polarisation, ReducingQuadruple};
use crate::lie::LieAlgebra;
use crate::linalg::{coords_in_basis, null_space, unit, vec_is_zero, Mat, Subspace, Vector};
use crate::pbw::{
    change_basis, monomials_up_to, straighten, word_of, PbwElement, PbwSubspace, StraightenCtx,
};
use crate::scalars::{factorial, Rat};
use crate::weyl::{divided_derivative_apply, Poly, WeylElement};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A complement basis u_1..u_r of g modulo a polarisation b with
/// [u_i, g] ⊆ b ⊕ span{u_{i+1}, ..., u_r}, plus the saturated basis of b.
///
/// The ordered basis (u_1, ..., u_r, b_1, ..., b_{d−r}) underlies every PBW
/// coordinate computed from this structure.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub polarisation: Subspace,
    pub complement: Vec<Vector>,
    pub b_rows: Vec<Vector>,
    /// Whether (complement, b_rows) is a ℤ_(p)-basis of the lattice; always
    /// true on the bundled algebras, required for integrality statements.
    pub unimodular: bool,
    /// Whether λ([u_i, u_j]) = 0 holds for the whole complement family.
    pub isotropic: bool,
    basis_matrix_inv: Mat,
}

impl AdaptedBasis {
    /// Complement vectors are picked inside central-flag members, one per
    /// jump of dim((b + a_j)/b), scanning jumps from the top; within a jump,
    /// standard basis vectors are tried first (ascending), then echelon
    /// rows, preferring candidates that keep the family extendable to a
    /// lattice basis. The family is then corrected inside b to make the
    /// complement λ-isotropic, which the operator formula needs whenever
    /// two complement directions pair under B_λ.
    pub fn new(g: &LieAlgebra, lambda: &LinearForm, b: &Polarisation) -> Result<Self> {
        is_polarisation(g, lambda, &b.subspace)
            .map_err(|e| Error::pre(format!("adapted basis needs a polarisation: {e}")))?;
        let d = g.dim();
        let p = g.prime();
        let flag = g.central_flag(None)?;
        let b_rows = b.subspace.lattice_basis(p);
        let mut complement: Vec<Vector> = Vec::new();
        let mut prev_dims: Vec<usize> = flag
            .subspaces
            .iter()
            .map(|a| b.subspace.sum(a).dim())
            .collect();
        prev_dims.insert(0, b.subspace.dim());
        for j in (1..flag.subspaces.len()).rev() {
            if prev_dims[j + 1] <= prev_dims[j] {
                continue;
            }
            let below = b.subspace.sum(&flag.subspaces[j - 1]);
            let already = Subspace::span(
                d,
                below
                    .basis()
                    .iter()
                    .cloned()
                    .chain(complement.iter().cloned())
                    .collect(),
            );
            let mut candidates: Vec<Vector> = (0..d).map(|i| unit(d, i)).collect();
            candidates.extend(flag.subspaces[j].lattice_basis(p));
            let admissible = |v: &Vector| -> bool {
                flag.subspaces[j].contains_vec(v) && !already.contains_vec(v)
            };
            // Prefer candidates whose residue against the accumulated
            // lattice family is primitive, so the family stays part of a
            // ℤ_(p)-basis of L.
            let mut family = b_rows.clone();
            family.extend(complement.iter().cloned());
            let lattice = crate::linalg::lattice_basis_of(&family, p);
            let pivots = crate::linalg::lattice_pivot_columns(&lattice);
            let unit_growth = |v: &Vector| -> bool {
                let mut res = v.clone();
                for (row, &piv) in lattice.iter().zip(&pivots) {
                    if !res[piv].is_zero() {
                        let c = res[piv].clone();
                        crate::linalg::vec_axpy(&mut res, &c, row);
                    }
                }
                res.iter()
                    .any(|c| crate::scalars::vp(c, p) == crate::scalars::Valuation::Finite(0))
            };
            let pick = candidates
                .iter()
                .find(|v| admissible(v) && unit_growth(v))
                .or_else(|| candidates.iter().find(|v| admissible(v)))
                .cloned()
                .ok_or_else(|| Error::Internal("no complement vector at flag jump".into()))?;
            complement.push(pick);
        }
        let r = d - b.subspace.dim();
        if complement.len() != r {
            return Err(Error::Internal("complement has wrong size".into()));
        }
        let corrected = isotropic_correction(g, lambda, &b_rows, &complement)?;
        let candidate_families = [corrected, Some(complement.clone())];
        let mut last_err: Option<Error> = None;
        for family in candidate_families.into_iter().flatten() {
            match Self::assemble(g, lambda, &b.subspace, &b_rows, family) {
                Ok(ab) => return Ok(ab),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::Internal("no adapted basis found".into())))
    }

    fn assemble(
        g: &LieAlgebra,
        lambda: &LinearForm,
        b_space: &Subspace,
        b_rows: &[Vector],
        complement: Vec<Vector>,
    ) -> Result<Self> {
        let p = g.prime();
        let mut cols = complement.clone();
        cols.extend(b_rows.iter().cloned());
        let basis_matrix = Mat::from_cols(&cols);
        let basis_matrix_inv = basis_matrix
            .inverse()
            .ok_or_else(|| Error::Internal("adapted family is not a basis".into()))?;
        let unimodular =
            crate::scalars::vp(&basis_matrix.det(), p) == crate::scalars::Valuation::Finite(0);
        let mut isotropic = true;
        'outer: for (i, u) in complement.iter().enumerate() {
            for w in complement.iter().skip(i + 1) {
                if !lambda.eval(&g.bracket(u, w)?).is_zero() {
                    isotropic = false;
                    break 'outer;
                }
            }
        }
        let ab = AdaptedBasis {
            polarisation: b_space.clone(),
            complement,
            b_rows: b_rows.to_vec(),
            unimodular,
            isotropic,
            basis_matrix_inv,
        };
        ab.verify(g)?;
        Ok(ab)
    }

    pub fn rank(&self) -> usize {
        self.complement.len()
    }

    /// The ordered basis (complement, then b rows) in ambient coordinates.
    pub fn ordered_basis(&self) -> Vec<Vector> {
        let mut out = self.complement.clone();
        out.extend(self.b_rows.iter().cloned());
        out
    }

    /// Coordinates of v over the ordered basis; the first r entries are the
    /// complement coefficients α_{i,v}, the rest the b-coefficients.
    pub fn coords(&self, v: &[Rat]) -> Vector {
        self.basis_matrix_inv.apply(v)
    }

    /// Re-checks the adapted property [u_i, g] ⊆ b ⊕ span{u_{i+1}, ...}.
    pub fn verify(&self, g: &LieAlgebra) -> Result<()> {
        let d = g.dim();
        for i in 0..self.complement.len() {
            let mut allowed = self.b_rows.clone();
            allowed.extend(self.complement[i + 1..].iter().cloned());
            let space = Subspace::span(d, allowed);
            for m in 0..d {
                let br = g.bracket(&self.complement[i], &unit(d, m))?;
                if !space.contains_vec(&br) {
                    return Err(Error::Internal(format!(
                        "adapted certificate fails at u_{}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Correct a complement family inside b so that λ([u_i, u_j]) = 0 for all
/// pairs. Since b is maximal isotropic, the pairing b × W → ℚ is onto W*,
/// so a Lagrangian complement of this shape always exists; the correction
/// changes neither the complement coordinates nor the basis determinant.
/// Returns `None` when the family is already isotropic.
fn isotropic_correction(
    g: &LieAlgebra,
    lambda: &LinearForm,
    b_rows: &[Vector],
    complement: &[Vector],
) -> Result<Option<Vec<Vector>>> {
    let r = complement.len();
    let mut pairing = Mat::zero(r, r);
    let mut any = false;
    for i in 0..r {
        for j in 0..r {
            let v = lambda.eval(&g.bracket(&complement[i], &complement[j])?);
            if !v.is_zero() {
                any = true;
            }
            pairing[(i, j)] = v;
        }
    }
    if !any {
        return Ok(None);
    }
    let k = b_rows.len();
    let mut m = Mat::zero(r, k);
    for i in 0..r {
        for col in 0..k {
            m[(i, col)] = lambda.eval(&g.bracket(&complement[i], &b_rows[col])?);
        }
    }
    let half = crate::scalars::rat(1, 2);
    let mut corrected = Vec::with_capacity(r);
    for j in 0..r {
        let target: Vector = (0..r).map(|i| -(&half * &pairing[(i, j)])).collect();
        let x = crate::linalg::solve_p_adic(&m, &target, g.prime())
            .ok_or_else(|| Error::Internal("isotropic correction system unsolvable".into()))?;
        let mut u = complement[j].clone();
        for (coef, row) in x.iter().zip(b_rows) {
            if !coef.is_zero() {
                for (a, bb) in u.iter_mut().zip(row) {
                    *a += coef * bb;
                }
            }
        }
        corrected.push(u);
    }
    for i in 0..r {
        for j in 0..r {
            if !lambda
                .eval(&g.bracket(&corrected[i], &corrected[j])?)
                .is_zero()
            {
                return Err(Error::Internal("correction failed to isotropise".into()));
            }
        }
    }
    Ok(Some(corrected))
}

/// μ(u) = λ(v_u) + Σ α_{i,u}·x_i, where u = v_u + Σ α_{i,u} u_i with v_u in
/// the polarisation.
pub fn mu(ab: &AdaptedBasis, lambda: &LinearForm, u: &[Rat]) -> WeylElement {
    let r = ab.rank();
    let coords = ab.coords(u);
    let mut constant = Rat::zero();
    for (beta, row) in coords[r..].iter().zip(&ab.b_rows) {
        if !beta.is_zero() {
            constant += beta * lambda.eval(row);
        }
    }
    let mut out = WeylElement::scalar(r, constant);
    for (i, alpha) in coords[..r].iter().enumerate() {
        if !alpha.is_zero() {
            out = out.add(&WeylElement::x(r, i).scale(alpha));
        }
    }
    out
}

/// ρ(u) = Σ_α (1/α!)·μ(ad(u_r)^{α_r} ··· ad(u_1)^{α_1}(u))·∂^α with the
/// convention ad(x)(y) = [y, x]; the sum is finite by nilpotency.
pub fn rho(
    g: &LieAlgebra,
    ab: &AdaptedBasis,
    lambda: &LinearForm,
    u: &[Rat],
) -> Result<WeylElement> {
    let r = ab.rank();
    let mut out = WeylElement::zero(r);
    let mut exps = vec![0u32; r];
    rho_rec(g, ab, lambda, u.to_vec(), 0, &mut exps, &mut out)?;
    Ok(out)
}

fn rho_rec(
    g: &LieAlgebra,
    ab: &AdaptedBasis,
    lambda: &LinearForm,
    v: Vector,
    level: usize,
    exps: &mut Vec<u32>,
    out: &mut WeylElement,
) -> Result<()> {
    if vec_is_zero(&v) {
        return Ok(());
    }
    let r = ab.rank();
    if level == r {
        let mut coeff = Rat::one();
        for &e in exps.iter() {
            coeff /= Rat::from_integer(factorial(e));
        }
        let dmono = WeylElement::monomial(r, vec![0; r], exps.clone(), coeff);
        *out = out.add(&mu(ab, lambda, &v).mul(&dmono));
        return Ok(());
    }
    let mut w = v;
    let mut k = 0u32;
    loop {
        exps[level] = k;
        rho_rec(g, ab, lambda, w.clone(), level + 1, exps, out)?;
        // ad(u_{level+1})(w) = [w, u_{level+1}]
        w = g.bracket(&w, &ab.complement[level])?;
        if vec_is_zero(&w) {
            break;
        }
        k += 1;
    }
    exps[level] = 0;
    Ok(())
}

/// ρ on the whole basis, with the homomorphism certificate
/// [ρ(e_i), ρ(e_j)] = ρ([e_i, e_j]) checked on construction.
pub struct RhoMap {
    pub adapted: AdaptedBasis,
    pub lambda: LinearForm,
    /// Images of the distinguished basis e_1..e_d.
    pub images: Vec<WeylElement>,
    /// Images of the ordered basis (complement, then b rows).
    pub ordered_images: Vec<WeylElement>,
}

impl RhoMap {
    pub fn new(g: &LieAlgebra, lambda: &LinearForm, b: &Polarisation) -> Result<Self> {
        let ab = AdaptedBasis::new(g, lambda, b)?;
        let d = g.dim();
        let images: Vec<WeylElement> = (0..d)
            .map(|i| rho(g, &ab, lambda, &unit(d, i)))
            .collect::<Result<_>>()?;
        for i in 0..d {
            for j in i + 1..d {
                let lhs = images[i].commutator(&images[j]);
                let mut rhs = WeylElement::zero(ab.rank());
                for (k, c) in g.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        rhs = rhs.add(&images[k].scale(c));
                    }
                }
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "homomorphism certificate fails on basis pair ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let ordered_images: Vec<WeylElement> = ab
            .ordered_basis()
            .iter()
            .map(|w| {
                let mut acc = WeylElement::zero(ab.rank());
                for (m, c) in w.iter().enumerate() {
                    if !c.is_zero() {
                        acc = acc.add(&images[m].scale(c));
                    }
                }
                acc
            })
            .collect();
        Ok(RhoMap {
            adapted: ab,
            lambda: lambda.clone(),
            images,
            ordered_images,
        })
    }

    /// Multiplicative extension of ρ to a PBW element over the ordered basis.
    pub fn rho_element(&self, elem: &PbwElement) -> WeylElement {
        let mut cache: BTreeMap<Vec<u32>, WeylElement> = BTreeMap::new();
        let mut out = WeylElement::zero(self.adapted.rank());
        for (exps, c) in &elem.terms {
            let img = self.monomial_image(exps, &mut cache);
            out = out.add(&img.scale(c));
        }
        out
    }

    fn monomial_image(
        &self,
        exps: &[u32],
        cache: &mut BTreeMap<Vec<u32>, WeylElement>,
    ) -> WeylElement {
        if exps.iter().all(|&e| e == 0) {
            return WeylElement::one(self.adapted.rank());
        }
        if let Some(hit) = cache.get(exps) {
            return hit.clone();
        }
        let last = exps.iter().rposition(|&e| e > 0).expect("nonzero exps");
        let mut prefix = exps.to_vec();
        prefix[last] -= 1;
        let img = self
            .monomial_image(&prefix, cache)
            .mul(&self.ordered_images[last]);
        cache.insert(exps.to_vec(), img.clone());
        img
    }
}

/// Names of the ordered basis underlying a rho map / kernel, for display.
pub fn ordered_basis_names(g: &LieAlgebra, basis: &[Vector]) -> Vec<String> {
    basis
        .iter()
        .enumerate()
        .map(
            |(i, v)| match (0..g.dim()).find(|&j| *v == unit(g.dim(), j)) {
                Some(j) => g.name(j).to_string(),
                None => format!("w{}", i + 1),
            },
        )
        .collect()
}

/// Independent induced-module oracle: computes u·(u^m ⊗ v) by word
/// straightening in U(g) followed by reduction of polarisation factors
/// through λ. Shares nothing with the explicit formula behind [`rho`].
pub struct InducedModuleOracle {
    ctx: StraightenCtx,
    basis: Vec<Vector>,
    scalars: Vec<Rat>,
    r: usize,
}

impl InducedModuleOracle {
    pub fn new(g: &LieAlgebra, lambda: &LinearForm, ab: &AdaptedBasis) -> Result<Self> {
        let basis = ab.ordered_basis();
        let ctx = StraightenCtx::for_basis(g, &basis)?;
        let scalars = ab.b_rows.iter().map(|row| lambda.eval(row)).collect();
        Ok(InducedModuleOracle {
            ctx,
            basis,
            scalars,
            r: ab.rank(),
        })
    }

    /// u acting on the monomial u_1^{m_1}···u_r^{m_r} ⊗ v_λ.
    pub fn act(&self, u: &[Rat], m: &[u32]) -> Result<Poly> {
        assert_eq!(m.len(), self.r, "monomial rank mismatch");
        let coords = coords_in_basis(&self.basis, u)?;
        let mut mono_word = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                mono_word.push(i);
            }
        }
        let mut words = Vec::new();
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut word = Vec::with_capacity(mono_word.len() + 1);
            word.push(k);
            word.extend_from_slice(&mono_word);
            words.push((c.clone(), word));
        }
        let normal = straighten(&self.ctx, words);
        let mut out = Poly::zero(self.r);
        for (exps, c) in &normal.terms {
            let mut coeff = c.clone();
            for (t, &e) in exps[self.r..].iter().enumerate() {
                for _ in 0..e {
                    coeff *= &self.scalars[t];
                }
            }
            out.add_term(exps[..self.r].to_vec(), coeff);
        }
        Ok(out)
    }
}

/// One-shot convenience wrapper around [`InducedModuleOracle`].
pub fn brute_force_action(
    g: &LieAlgebra,
    lambda: &LinearForm,
    ab: &AdaptedBasis,
    u: &[Rat],
    m: &[u32],
) -> Result<Poly> {
    InducedModuleOracle::new(g, lambda, ab)?.act(u, m)
}

/// Echelonised basis of ker ρ ∩ U(g)_{≤D} in PBW coordinates over the
/// adapted ordered basis.
#[derive(Clone, Debug)]
pub struct TruncatedKernel {
    pub degree: u32,
    pub ordered_basis: Vec<Vector>,
    pub rank: usize,
    pub monomials: Vec<Vec<u32>>,
    pub basis: Vec<Vector>,
}

impl TruncatedKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Kernel generators, sign-normalised so the leading (highest-order)
    /// term is positive.
    pub fn elements(&self) -> Vec<PbwElement> {
        self.basis
            .iter()
            .map(|row| {
                let mut e = PbwElement::zero();
                for (i, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        e.add_term(self.monomials[i].clone(), c.clone());
                    }
                }
                let lead = e
                    .terms
                    .iter()
                    .max_by(|(a, _), (b, _)| crate::pbw::pbw_cmp(a, b))
                    .map(|(_, c)| c.clone());
                match lead {
                    Some(c) if c < Rat::zero() => e.scale(&-Rat::one()),
                    _ => e,
                }
            })
            .collect()
    }

    /// The same subspace in PBW coordinates over the distinguished basis of
    /// g, the common frame for comparing kernels across polarisations.
    pub fn to_standard(&self, g: &LieAlgebra) -> Result<PbwSubspace> {
        let d = g.dim();
        let std_basis: Vec<Vector> = (0..d).map(|i| unit(d, i)).collect();
        let ctx = StraightenCtx::standard(g);
        let converted = change_basis(&self.elements(), &self.ordered_basis, &std_basis, &ctx)?;
        PbwSubspace::from_elements(d, self.degree, &converted)
    }
}

/// Exact null space of ρ on the PBW monomial basis of U(g)_{≤D}.
pub fn kernel_truncated(
    g: &LieAlgebra,
    lambda: &LinearForm,
    b: &Polarisation,
    degree: u32,
) -> Result<TruncatedKernel> {
    if degree < 1 {
        return Err(Error::pre("truncation degree must be at least 1"));
    }
    let rm = RhoMap::new(g, lambda, b)?;
    let monos = monomials_up_to(g.dim(), degree);
    let mut cache: BTreeMap<Vec<u32>, WeylElement> = BTreeMap::new();
    let images: Vec<WeylElement> = monos
        .iter()
        .map(|m| rm.monomial_image(m, &mut cache))
        .collect();
    let mut keys: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for img in &images {
        for k in img.terms.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys.sort();
    let mut matrix = Mat::zero(keys.len(), monos.len());
    for (col, img) in images.iter().enumerate() {
        for (row, key) in keys.iter().enumerate() {
            if let Some(c) = img.terms.get(key) {
                matrix[(row, col)] = c.clone();
            }
        }
    }
    let mut rows = null_space(&matrix);
    crate::linalg::rref(&mut rows);
    Ok(TruncatedKernel {
        degree,
        ordered_basis: rm.adapted.ordered_basis(),
        rank: rm.adapted.rank(),
        monomials: monos,
        basis: rows,
    })
}

/// Two-sided span at truncation: all straightened products m·gen·m' of
/// compatible degrees, echelonised over the distinguished PBW basis.
pub fn ideal_generated_truncated(
    g: &LieAlgebra,
    gens: &[PbwElement],
    degree: u32,
) -> Result<PbwSubspace> {
    let d = g.dim();
    let ctx = StraightenCtx::standard(g);
    let monos = monomials_up_to(d, degree);
    let mut products = Vec::new();
    for gen in gens {
        if gen.is_zero() {
            continue;
        }
        let dg = gen.degree().unwrap_or(0);
        if dg > degree {
            return Err(Error::pre("generator degree exceeds the truncation"));
        }
        for left in monos
            .iter()
            .filter(|m| m.iter().sum::<u32>() + dg <= degree)
        {
            let lsum: u32 = left.iter().sum();
            for right in monos
                .iter()
                .filter(|m| m.iter().sum::<u32>() + lsum + dg <= degree)
            {
                let mut words = Vec::new();
                for (exps, c) in &gen.terms {
                    let mut word = word_of(left);
                    word.extend(word_of(exps));
                    word.extend(word_of(right));
                    words.push((c.clone(), word));
                }
                products.push(straighten(&ctx, words));
            }
        }
    }
    PbwSubspace::from_elements(d, degree, &products)
}

/// Witness of a failed control check: the U(g')-coefficient of x^{x_power}
/// in some kernel element that falls outside the kernel.
#[derive(Clone, Debug)]
pub struct ControlReport {
    pub controlled: bool,
    pub x_power: Option<u32>,
    pub witness: Option<PbwElement>,
    /// Names of the (x, g'-basis) frame the witness is written in.
    pub frame_names: Vec<String>,
}

/// Writes each element as Σ_i x^i·c_i with c_i ∈ U(g')_{≤D−i} and checks
/// every coefficient against the spanned subspace. Elements are given over
/// `elements_basis`; the reducing quadruple supplies x and g'.
pub fn control_check(
    g: &LieAlgebra,
    elements: &[PbwElement],
    elements_basis: &[Vector],
    degree: u32,
    q: &ReducingQuadruple,
) -> Result<ControlReport> {
    let d = g.dim();
    let mut frame = vec![q.x.clone()];
    frame.extend(q.gprime.lattice_basis(g.prime()));
    if frame.len() != d {
        return Err(Error::Internal("control frame is not a basis".into()));
    }
    let ctx = StraightenCtx::for_basis(g, &frame)?;
    let converted = change_basis(elements, elements_basis, &frame, &ctx)?;
    let space = PbwSubspace::from_elements(d, degree, &converted)?;
    let frame_names = ordered_basis_names(g, &frame);
    for elem in &converted {
        let mut by_power: BTreeMap<u32, PbwElement> = BTreeMap::new();
        for (exps, c) in &elem.terms {
            let i = exps[0];
            let mut rest = exps.clone();
            rest[0] = 0;
            by_power.entry(i).or_default().add_term(rest, c.clone());
        }
        for (i, coeff) in by_power {
            if !space.contains(&coeff) {
                return Ok(ControlReport {
                    controlled: false,
                    x_power: Some(i),
                    witness: Some(coeff),
                    frame_names,
                });
            }
        }
    }
    Ok(ControlReport {
        controlled: true,
        x_power: None,
        witness: None,
        frame_names,
    })
}

/// Control check against a computed truncated kernel.
pub fn control_check_kernel(
    g: &LieAlgebra,
    ker: &TruncatedKernel,
    q: &ReducingQuadruple,
) -> Result<ControlReport> {
    control_check(g, &ker.elements(), &ker.ordered_basis, ker.degree, q)
}

/// The iterative basis construction behind perpendicular extraction: pairs
/// (u_i, y_i) with λ([y_i, u_i]) ≠ 0 and λ([y_i, u_j]) = 0 for j > i.
#[derive(Clone, Debug)]
pub struct PerpBasis {
    pub s: usize,
    pub us: Vec<Vector>,
    pub ys: Vec<Vector>,
    /// Central-series levels m_i with y_i ∈ a ∩ Z_{m_i}.
    pub levels: Vec<usize>,
}

/// Builds the perpendicular basis for an abelian ideal a contained in the
/// polarisation b, walking up the upper central series.
pub fn perp_basis(
    g: &LieAlgebra,
    lambda: &LinearForm,
    a: &Subspace,
    b: &Subspace,
) -> Result<PerpBasis> {
    if !g.is_ideal(a) {
        return Err(Error::pre("perp basis needs an ideal"));
    }
    if !b.contains(a) {
        return Err(Error::pre("ideal must be contained in the polarisation"));
    }
    for (i, x) in a.basis().iter().enumerate() {
        for y in a.basis().iter().skip(i + 1) {
            if !lambda.eval_bracket(g, x, y)?.is_zero() {
                return Err(Error::pre("lambda does not vanish on [a, a]"));
            }
        }
    }
    let d = g.dim();
    let aperp = crate::forms::a_perp(g, lambda, a);
    let s = d - aperp.dim();
    let mut v_rows: Vec<Vector> = (0..d)
        .filter(|i| !aperp.pivots().contains(i))
        .map(|i| unit(d, i))
        .collect();
    let ucs = g.upper_central_series();
    let mut us = Vec::new();
    let mut ys = Vec::new();
    let mut levels = Vec::new();
    let mut min_level = 0usize;
    for _ in 0..s {
        let mut found: Option<(usize, Vector)> = None;
        'levels: for (mi, z) in ucs.iter().enumerate().skip(min_level) {
            let w = a.intersect(z);
            for y in w.lattice_basis(g.prime()) {
                if v_rows
                    .iter()
                    .any(|v| !lambda.eval_bracket(g, &y, v).expect("sized").is_zero())
                {
                    found = Some((mi, y));
                    break 'levels;
                }
            }
        }
        let (mi, y) = found.ok_or_else(|| {
            Error::Internal("perp construction exhausted the central series".into())
        })?;
        min_level = mi;
        let ui_pos = v_rows
            .iter()
            .position(|v| !lambda.eval_bracket(g, &y, v).expect("sized").is_zero())
            .expect("witness row exists");
        let u = v_rows.remove(ui_pos);
        let pivot_val = lambda.eval_bracket(g, &y, &u)?;
        v_rows = v_rows
            .into_iter()
            .map(|v| {
                let c = lambda.eval_bracket(g, &y, &v).expect("sized") / pivot_val.clone();
                crate::linalg::vec_sub(&v, &crate::linalg::vec_scale(&u, &c))
            })
            .collect();
        us.push(u);
        ys.push(y);
        levels.push(mi + 1);
    }
    // Certificates: diagonal nonzero, strictly upper triangle vanishing.
    for i in 0..s {
        if lambda.eval_bracket(g, &ys[i], &us[i])?.is_zero() {
            return Err(Error::Internal(
                "perp certificate: diagonal vanished".into(),
            ));
        }
        for j in i + 1..s {
            if !lambda.eval_bracket(g, &ys[i], &us[j])?.is_zero() {
                return Err(Error::Internal(
                    "perp certificate: upper triangle nonzero".into(),
                ));
            }
        }
    }
    Ok(PerpBasis { s, us, ys, levels })
}

/// ρ of an element of the ideal a, in the perp-basis coordinates: a pure
/// ∂-polynomial Σ_α (1/α!)·λ(ad(u_s)^{α_s}···ad(u_1)^{α_1}(v))·∂^α.
fn rho_ideal(g: &LieAlgebra, lambda: &LinearForm, us: &[Vector], v: &[Rat]) -> Result<WeylElement> {
    let s = us.len();
    let mut out = WeylElement::zero(s);
    let mut exps = vec![0u32; s];
    fn rec(
        g: &LieAlgebra,
        lambda: &LinearForm,
        us: &[Vector],
        v: Vector,
        level: usize,
        exps: &mut Vec<u32>,
        out: &mut WeylElement,
    ) -> Result<()> {
        if vec_is_zero(&v) {
            return Ok(());
        }
        if level == us.len() {
            let mut coeff = lambda.eval(&v);
            if coeff.is_zero() {
                return Ok(());
            }
            for &e in exps.iter() {
                coeff /= Rat::from_integer(factorial(e));
            }
            out.add_term(vec![0; us.len()], exps.clone(), coeff);
            return Ok(());
        }
        let mut w = v;
        let mut k = 0u32;
        loop {
            exps[level] = k;
            rec(g, lambda, us, w.clone(), level + 1, exps, out)?;
            w = g.bracket(&w, &us[level])?;
            if vec_is_zero(&w) {
                break;
            }
            k += 1;
        }
        exps[level] = 0;
        Ok(())
    }
    rec(g, lambda, us, v.to_vec(), 0, &mut exps, &mut out)?;
    Ok(out)
}

/// True iff every ∂_i (in the perp-basis coordinates) lies in the span of
/// {ρ(m) : m a PBW monomial in a of degree ≤ D}.
pub fn perp_partials_in_image(
    g: &LieAlgebra,
    lambda: &LinearForm,
    a: &Subspace,
    b: &Subspace,
    degree: u32,
) -> Result<bool> {
    let pb = perp_basis(g, lambda, a, b)?;
    if pb.s == 0 {
        return Ok(true);
    }
    let a_rows = a.lattice_basis(g.prime());
    let row_images: Vec<WeylElement> = a_rows
        .iter()
        .map(|row| rho_ideal(g, lambda, &pb.us, row))
        .collect::<Result<_>>()?;
    let monos = monomials_up_to(a_rows.len(), degree);
    let mut images = Vec::new();
    for m in &monos {
        let mut acc = WeylElement::one(pb.s);
        for (t, &e) in m.iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul(&row_images[t]);
            }
        }
        images.push(acc);
    }
    let mut keys: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for img in &images {
        for k in img.terms.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    for i in 0..pb.s {
        let mut dk = vec![0u32; pb.s];
        dk[i] = 1;
        let key = (vec![0u32; pb.s], dk);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort();
    let coords = |w: &WeylElement| -> Vector {
        keys.iter()
            .map(|k| w.terms.get(k).cloned().unwrap_or_else(Rat::zero))
            .collect()
    };
    let span = Subspace::span(keys.len(), images.iter().map(coords).collect());
    for i in 0..pb.s {
        if !span.contains_vec(&coords(&WeylElement::d(pb.s, i))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The rank-1 induced operators: x acts by t, y by αβ_z·d/dt + β_y, z by β_z.
#[derive(Clone, Debug)]
pub struct Rank1Ops {
    pub op_x: WeylElement,
    pub op_y: WeylElement,
    pub op_z: WeylElement,
}

/// y·t^n computed by straightening alone: y·t^n = t·(y·t^{n−1}) + αβ_z·t^{n−1},
/// starting from y·1 = β_y. The independent route for rank-1 induction.
pub fn rank1_brute_y(beta_y: &Rat, beta_z: &Rat, alpha: &Rat, n: u32) -> Poly {
    let mut current = Poly::constant(1, beta_y.clone());
    let step = alpha * beta_z;
    for k in 1..=n {
        let mut shifted = Poly::zero(1);
        for (e, c) in &current.terms {
            shifted.add_term(vec![e[0] + 1], c.clone());
        }
        shifted.add_term(vec![k - 1], step.clone());
        current = shifted;
    }
    current
}

/// Rank-1 induction operators, verified against the straightening recursion
/// on t^n for n ≤ degree.
pub fn induce_rank1(beta_y: &Rat, beta_z: &Rat, alpha: &Rat, degree: u32) -> Result<Rank1Ops> {
    let op_x = WeylElement::x(1, 0);
    let mut op_y = WeylElement::d(1, 0).scale(&(alpha * beta_z));
    op_y = op_y.add(&WeylElement::scalar(1, beta_y.clone()));
    let op_z = WeylElement::scalar(1, beta_z.clone());
    for n in 0..=degree {
        let tn = Poly::monomial(1, vec![n], Rat::one());
        if op_y.apply(&tn) != rank1_brute_y(beta_y, beta_z, alpha, n) {
            return Err(Error::Internal(
                "rank-1 operator disagrees with straightening".into(),
            ));
        }
    }
    Ok(Rank1Ops { op_x, op_y, op_z })
}

/// Outcome of the bottom-reduction: the surviving constant and the number of
/// truncation steps used.
#[derive(Clone, Debug)]
pub struct ReduceOutcome {
    pub constant: Rat,
    pub steps: u32,
}

/// Reduce a nonzero rank-1 polynomial to a nonzero constant: first shift by
/// a divided derivative so the constant term is nonzero, then iterate
/// r ← r − t^i·∂^[i](r), which kills the degree-i term at step i.
pub fn reduce_to_bottom(f: &Poly) -> Result<ReduceOutcome> {
    assert_eq!(f.rank, 1, "bottom reduction is a rank-1 procedure");
    if f.is_zero() {
        return Err(Error::pre("cannot reduce the zero vector"));
    }
    let min_deg = f.terms.keys().map(|e| e[0]).min().expect("nonzero");
    let mut r = divided_derivative_apply(0, min_deg, f);
    debug_assert!(!r.constant_term().is_zero());
    let mut steps = 0u32;
    let top = r.degree().unwrap_or(0);
    for i in 1..=top {
        if r.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut shifted = Poly::zero(1);
        for (e, c) in divided_derivative_apply(0, i, &r).terms {
            shifted.add_term(vec![e[0] + i], c);
        }
        r = r.sub(&shifted);
        steps += 1;
    }
    if r.degree().unwrap_or(0) != 0 {
        return Err(Error::Internal(
            "bottom reduction failed to terminate".into(),
        ));
    }
    let constant = r.constant_term();
    if constant.is_zero() {
        return Err(Error::Internal("bottom reduction lost the constant".into()));
    }
    Ok(ReduceOutcome { constant, steps })
}
