//! Finite-dimensional algebras given by structure constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identity::{IdentitySchema, VarietySpec};
use crate::linalg::{self, Subspace, Vector};
use crate::par::Exec;
use crate::scalar::{FieldSpec, Scalar};

/// `e_i · e_j = Σ_k sc[i][j][k] e_k`, indices 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    dim: usize,
    field: FieldSpec,
    sc: Vec<Vec<Vector>>,
    labels: Option<Vec<String>>,
}

impl Algebra {
    pub fn zero(dim: usize, field: FieldSpec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDim(dim));
        }
        Ok(Self {
            dim,
            field,
            sc: vec![vec![linalg::zero_vector(&field, dim); dim]; dim],
            labels: None,
        })
    }

    /// Builds an algebra from its structure-constant tensor.
    pub fn from_structure_constants(field: FieldSpec, sc: Vec<Vec<Vector>>) -> Result<Self> {
        let dim = sc.len();
        if dim == 0 {
            return Err(Error::InvalidDim(0));
        }
        for row in &sc {
            if row.len() != dim || row.iter().any(|v| v.len() != dim) {
                return Err(Error::MalformedAlgebra("structure constants must be dim×dim×dim".into()));
            }
            if row.iter().flatten().any(|s| !field.contains(s)) {
                return Err(Error::MalformedAlgebra(format!("entry outside {field}")));
            }
        }
        Ok(Self {
            dim,
            field,
            sc,
            labels: None,
        })
    }

    /// The null-filiform associative algebra μ₀ⁿ: `e_i e_j = e_{i+j}`, with
    /// `e_m = 0` for `m > n`.
    pub fn null_filiform(n: usize, field: FieldSpec) -> Result<Self> {
        let mut a = Self::zero(n, field)?;
        for i in 0..n {
            for j in 0..n {
                // 1-based: e_{i+1} e_{j+1} = e_{i+j+2}
                if i + j + 1 < n {
                    a.sc[i][j][i + j + 1] = field.one();
                }
            }
        }
        Ok(a)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Product of basis vectors `e_i · e_j` (0-based).
    pub fn basis_product(&self, i: usize, j: usize) -> &Vector {
        &self.sc[i][j]
    }

    pub fn set_product(&mut self, i: usize, j: usize, value: Vector) {
        assert_eq!(value.len(), self.dim);
        self.sc[i][j] = value;
    }

    pub fn structure_constants(&self) -> &[Vec<Vector>] {
        &self.sc
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(&self.field, self.dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                let c = xi * yj;
                linalg::add_scaled(&mut out, &c, &self.sc[i][j]);
            }
        }
        out
    }

    /// Matrix of `x ↦ e_i x` (or `x ↦ x e_i`), rows indexed by output coordinate.
    fn operator_rows(&self, left: bool, i: usize) -> Vec<Vector> {
        (0..self.dim)
            .map(|k| {
                (0..self.dim)
                    .map(|j| {
                        let p = if left { &self.sc[i][j] } else { &self.sc[j][i] };
                        p[k].clone()
                    })
                    .collect()
            })
            .collect()
    }

    /// `Ann(A) = {x : xA + Ax = 0}`.
    pub fn annihilator(&self) -> Subspace {
        // x ∈ Ann iff Σ_i x_i (e_i e_j) = 0 and Σ_i x_i (e_j e_i) = 0 for all j.
        let mut rows = Vec::new();
        for j in 0..self.dim {
            rows.extend(self.operator_rows(false, j));
            rows.extend(self.operator_rows(true, j));
        }
        Subspace::kernel(self.field, self.dim, &rows)
    }

    fn subspace_product(&self, a: &Subspace, b: &Subspace) -> Vec<Vector> {
        let mut out = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                out.push(self.mul_unchecked(x, y));
            }
        }
        out
    }

    /// `(dim A¹, dim A², …)` with `A^{i+1} = Σ_{k=1}^{i} A^k A^{i+1-k}`,
    /// stopping at the first repeated dimension.
    pub fn power_dims(&self) -> Vec<usize> {
        let mut powers = vec![Subspace::full(self.field, self.dim)];
        let mut dims = vec![self.dim];
        loop {
            let i = powers.len();
            let mut gens = Vec::new();
            for k in 1..=i {
                gens.extend(self.subspace_product(&powers[k - 1], &powers[i - k]));
            }
            let next = Subspace::span(self.field, self.dim, &gens);
            let d = next.dim();
            dims.push(d);
            if d == 0 || d == dims[dims.len() - 2] {
                return dims;
            }
            powers.push(next);
        }
    }

    pub fn is_null_filiform(&self) -> bool {
        let expected: Vec<usize> = (0..=self.dim).rev().collect();
        self.power_dims() == expected
    }

    pub fn opposite(&self) -> Algebra {
        let sc = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.sc[j][i].clone()).collect())
            .collect();
        Algebra {
            dim: self.dim,
            field: self.field,
            sc,
            labels: self.labels.clone(),
        }
    }

    /// Value of `Σ c_j p_j` at the given vectors.
    pub fn evaluate_identity(&self, id: &IdentitySchema, args: &[Vector]) -> Result<Vector> {
        if args.len() < id.variables().len() {
            return Err(Error::DimMismatch {
                expected: id.variables().len(),
                got: args.len(),
            });
        }
        for a in args {
            self.check_len(a)?;
        }
        let mut acc = linalg::zero_vector(&self.field, self.dim);
        for m in id.monomials() {
            let v = m.tree.eval(args, &mut |x: &Vector, y: &Vector| self.mul_unchecked(x, y));
            linalg::add_scaled(&mut acc, &self.field.from_i64(m.coeff), &v);
        }
        Ok(acc)
    }

    /// Checks every multilinear identity of `variety` on all basis tuples.
    pub fn satisfies_variety(&self, variety: &VarietySpec) -> Result<bool> {
        self.satisfies_variety_with(variety, Exec::default())
    }

    pub fn satisfies_variety_with(&self, variety: &VarietySpec, exec: Exec) -> Result<bool> {
        variety.check_characteristic(self.field.characteristic())?;
        let basis: Vec<Vector> = (0..self.dim)
            .map(|i| linalg::unit_vector(&self.field, self.dim, i))
            .collect();
        for id in &variety.multilinear_identities {
            let k = id.variables().len();
            let total = self.dim.pow(k as u32);
            let ok = exec.all_range(total, |t| {
                let args: Vec<Vector> = tuple_indices(t, k, self.dim)
                    .into_iter()
                    .map(|i| basis[i].clone())
                    .collect();
                linalg::is_zero_vector(&self.evaluate_identity(id, &args).expect("shapes match"))
            });
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> AlgebraJson {
        let products = (0..self.dim)
            .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let out: Vec<TermJson> = self.sc[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| TermJson {
                        c: c.to_string(),
                        k: k + 1,
                    })
                    .collect();
                (!out.is_empty()).then_some(ProductJson {
                    i: i + 1,
                    j: j + 1,
                    out,
                })
            })
            .collect();
        AlgebraJson {
            dim: self.dim,
            field: self.field,
            labels: self.labels.clone(),
            products,
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let mut a = Self::zero(j.dim, j.field)?;
        let bad = |msg: String| Error::MalformedAlgebra(msg);
        let in_range = |x: usize| (1..=j.dim).contains(&x);
        let mut seen = std::collections::BTreeSet::new();
        for p in &j.products {
            if !in_range(p.i) || !in_range(p.j) {
                return Err(bad(format!("product index ({}, {}) out of range", p.i, p.j)));
            }
            if !seen.insert((p.i, p.j)) {
                return Err(bad(format!("duplicate product ({}, {})", p.i, p.j)));
            }
            let mut v = linalg::zero_vector(&j.field, j.dim);
            for t in &p.out {
                if !in_range(t.k) {
                    return Err(bad(format!("output index {} out of range", t.k)));
                }
                v[t.k - 1] += &j.field.parse_scalar(&t.c)?;
            }
            a.sc[p.i - 1][p.j - 1] = v;
        }
        if let Some(l) = &j.labels {
            a = a.with_labels(l.clone())?;
        }
        Ok(a)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: AlgebraJson =
            serde_json::from_str(s).map_err(|e| Error::MalformedAlgebra(e.to_string()))?;
        Self::from_json(&j)
    }
}

/// Decodes `t` as a `k`-digit base-`n` tuple, most significant digit first.
pub(crate) fn tuple_indices(mut t: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = t % n;
        t /= n;
    }
    out
}

/// Wire format for algebras; keys are emitted in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub products: Vec<ProductJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductJson {
    pub i: usize,
    pub j: usize,
    pub out: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub k: usize,
}
