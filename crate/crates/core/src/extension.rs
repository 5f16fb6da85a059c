//! Central extensions `A_θ = A ⊕ V` with `[x+v, y+w] = xy + θ(x, y)`.

use serde::Serialize;

use crate::algebra::Algebra;
use crate::cohomology::{check_cocycle, cocycles_annihilator, BilinearForm, CohomologySpace};
use crate::error::{Error, Result};
use crate::identity::VarietySpec;
use crate::linalg::{self, Subspace};

#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub extended: Algebra,
    pub cocycles: Vec<BilinearForm>,
    pub base: Algebra,
    pub annihilator_dim: usize,
    pub non_split: bool,
    pub in_t1: bool,
}

/// Flags reported alongside an extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionFlags {
    pub annihilator_dim: usize,
    #[serde(rename = "in_T1")]
    pub in_t1: bool,
    pub non_split: bool,
}

impl ExtensionResult {
    pub fn flags(&self) -> ExtensionFlags {
        ExtensionFlags {
            annihilator_dim: self.annihilator_dim,
            in_t1: self.in_t1,
            non_split: self.non_split,
        }
    }
}

/// Adjoins `f_1..f_s` without checking that the `θ_k` are cocycles.
/// Basis order is `e_1..e_n, f_1..f_s`.
pub fn adjoin(a: &Algebra, thetas: &[BilinearForm]) -> Result<Algebra> {
    let n = a.dim();
    let s = thetas.len();
    let f = a.field();
    if let Some(t) = thetas.iter().find(|t| t.dim() != n) {
        return Err(Error::DimMismatch {
            expected: n,
            got: t.dim(),
        });
    }
    let mut ext = Algebra::zero(n + s, f)?;
    for i in 0..n {
        for j in 0..n {
            let mut v = a.basis_product(i, j).clone();
            v.extend(thetas.iter().map(|t| t.coeff(i, j).clone()));
            ext.set_product(i, j, v);
        }
    }
    if let Some(labels) = a.labels() {
        let mut l = labels.to_vec();
        l.extend((1..=s).map(|k| format!("f{k}")));
        ext = ext.with_labels(l)?;
    }
    Ok(ext)
}

/// `Ann(A) ∩ ⋂ Ann(θ_k)`.
pub fn joint_annihilator(a: &Algebra, thetas: &[BilinearForm]) -> Result<Subspace> {
    Ok(a.annihilator().intersect(&cocycles_annihilator(a, thetas)?))
}

/// Builds `A_θ` for cocycles of `h`'s variety, with splitness and T₁ flags.
pub fn central_extension(h: &CohomologySpace, thetas: &[BilinearForm]) -> Result<ExtensionResult> {
    let a = h.algebra();
    if thetas.is_empty() {
        return Err(Error::InvalidDim(0));
    }
    for t in thetas {
        check_cocycle(a, h.variety(), t)?;
    }
    let extended = adjoin(a, thetas)?;
    let joint = joint_annihilator(a, thetas)?;
    Ok(ExtensionResult {
        annihilator_dim: joint.dim() + thetas.len(),
        non_split: is_non_split(h, thetas)?,
        in_t1: joint.is_zero(),
        extended,
        cocycles: thetas.to_vec(),
        base: a.clone(),
    })
}

/// Convenience wrapper computing the cohomology first.
pub fn central_extension_in(a: &Algebra, v: &VarietySpec, thetas: &[BilinearForm]) -> Result<ExtensionResult> {
    let h = crate::cohomology::second_cohomology(a, v)?;
    central_extension(&h, thetas)
}

/// Whether the classes `[θ_1], …, [θ_s]` are linearly independent in `H²`.
pub fn is_non_split(h: &CohomologySpace, thetas: &[BilinearForm]) -> Result<bool> {
    let coords = thetas
        .iter()
        .map(|t| h.reduce_class(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(&coords, h.dim_h()) == thetas.len())
}

/// `Ann(A) ∩ Ann(θ) = 0`.
pub fn in_t1(h: &CohomologySpace, theta: &BilinearForm) -> Result<bool> {
    check_cocycle(h.algebra(), h.variety(), theta)?;
    Ok(joint_annihilator(h.algebra(), std::slice::from_ref(theta))?.is_zero())
}
