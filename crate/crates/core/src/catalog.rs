//! Bundled test algebras: abelian up to dimension 3, the Heisenberg algebras
//! H3 and H5, the filiform algebra F4, and H3 × abelian².

use crate::forms::LinearForm;
use crate::lie::{bracket_table, LieAlgebra};
use crate::linalg::{zeros, Vector};
use crate::scalars::rint;

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

fn e(dim: usize, i: usize) -> Vector {
    let mut v = zeros(dim);
    v[i] = rint(1);
    v
}

/// Abelian algebra of the given dimension.
pub fn abelian(dim: usize, p: u64) -> LieAlgebra {
    LieAlgebra::new(p, names(dim), bracket_table(dim, &[])).expect("abelian is valid")
}

/// H3: [e1, e2] = e3.
pub fn heisenberg3(p: u64) -> LieAlgebra {
    LieAlgebra::new(p, names(3), bracket_table(3, &[(0, 1, e(3, 2))])).expect("H3 is valid")
}

/// H5: [e1, e2] = [e3, e4] = e5.
pub fn heisenberg5(p: u64) -> LieAlgebra {
    LieAlgebra::new(
        p,
        names(5),
        bracket_table(5, &[(0, 1, e(5, 4)), (2, 3, e(5, 4))]),
    )
    .expect("H5 is valid")
}

/// F4: [e1, e2] = e3, [e1, e3] = e4 (filiform of class 3).
pub fn filiform4(p: u64) -> LieAlgebra {
    LieAlgebra::new(
        p,
        names(4),
        bracket_table(4, &[(0, 1, e(4, 2)), (0, 2, e(4, 3))]),
    )
    .expect("F4 is valid")
}

/// H3 × abelian²: [e1, e2] = e3 with e4, e5 central.
pub fn h3_abelian2(p: u64) -> LieAlgebra {
    heisenberg3(p).direct_sum(&abelian(2, p))
}

/// A bundled algebra together with a default integral linear form.
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub algebra: LieAlgebra,
    pub lambda: LinearForm,
}

fn dual(dim: usize, nonzero: &[usize], p: u64) -> LinearForm {
    let mut v = zeros(dim);
    for &i in nonzero {
        v[i] = rint(1);
    }
    LinearForm::integral(v, p).expect("unit coordinates are integral")
}

/// All bundled algebras at the given prime, each with its default form.
pub fn catalog(p: u64) -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "ab1",
            description: "abelian, dim 1",
            algebra: abelian(1, p),
            lambda: dual(1, &[0], p),
        },
        CatalogEntry {
            name: "ab2",
            description: "abelian, dim 2",
            algebra: abelian(2, p),
            lambda: dual(2, &[1], p),
        },
        CatalogEntry {
            name: "ab3",
            description: "abelian, dim 3",
            algebra: abelian(3, p),
            lambda: dual(3, &[2], p),
        },
        CatalogEntry {
            name: "h3",
            description: "Heisenberg, dim 3: [e1,e2]=e3",
            algebra: heisenberg3(p),
            lambda: dual(3, &[2], p),
        },
        CatalogEntry {
            name: "h5",
            description: "Heisenberg, dim 5: [e1,e2]=[e3,e4]=e5",
            algebra: heisenberg5(p),
            lambda: dual(5, &[4], p),
        },
        CatalogEntry {
            name: "f4",
            description: "filiform, dim 4: [e1,e2]=e3, [e1,e3]=e4",
            algebra: filiform4(p),
            lambda: dual(4, &[3], p),
        },
        CatalogEntry {
            name: "h3a2",
            description: "H3 x abelian^2, dim 5",
            algebra: h3_abelian2(p),
            lambda: dual(5, &[2], p),
        },
    ]
}

pub fn by_name(name: &str, p: u64) -> Option<CatalogEntry> {
    catalog(p).into_iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_validate() {
        for entry in catalog(3) {
            assert!(entry.algebra.dim() >= 1, "{} is empty", entry.name);
            assert!(entry.lambda.is_integral());
        }
    }

    #[test]
    fn h3a2_shape() {
        let g = h3_abelian2(5);
        assert_eq!(g.dim(), 5);
        assert_eq!(g.nilpotency_class(), 2);
        assert_eq!(g.centre().dim(), 3);
    }
}
