//! Cocycles, coboundaries and the second cohomology `H²_V(A, F) = Z²/B²`
//! of an algebra with respect to a variety, with trivial one-dimensional
//! coefficients.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{tuple_indices, Algebra};
use crate::error::{Error, Result};
use crate::identity::{canonical_variety_name, IdentitySchema, VarietySpec};
use crate::linalg::{self, EchelonBuilder, SparseRow, Subspace, Vector};
use crate::nullfiliform::{delta, format_form_expr, nabla};
use crate::par::Exec;
use crate::scalar::{FieldSpec, Scalar};

/// `θ = Σ c_{i,j} Δ_{i,j}` stored as the matrix `c` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    field: FieldSpec,
    matrix: Vec<Vector>,
}

impl BilinearForm {
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        Self {
            field,
            matrix: vec![linalg::zero_vector(&field, dim); dim],
        }
    }

    pub fn from_matrix(field: FieldSpec, matrix: Vec<Vector>) -> Result<Self> {
        let n = matrix.len();
        if let Some(bad) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        if matrix.iter().flatten().any(|s| !field.contains(s)) {
            return Err(Error::FieldMismatch(field.to_string(), "matrix entry".into()));
        }
        Ok(Self { field, matrix })
    }

    /// Inverse of [`BilinearForm::to_vec`].
    pub fn from_vec(field: FieldSpec, dim: usize, v: &[Scalar]) -> Self {
        assert_eq!(v.len(), dim * dim);
        Self {
            field,
            matrix: v.chunks(dim).map(<[Scalar]>::to_vec).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vector] {
        &self.matrix
    }

    /// Coefficient of `Δ_{i,j}`, 0-based.
    pub fn coeff(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[i][j]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: Scalar) {
        self.matrix[i][j] = c;
    }

    /// Row-major coordinates in the basis `Δ_{1,1}, Δ_{1,2}, …, Δ_{n,n}`.
    pub fn to_vec(&self) -> Vector {
        self.matrix.iter().flatten().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| linalg::is_zero_vector(r))
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (i, xi) in x.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                let c = &self.matrix[i][j];
                if !c.is_zero() {
                    acc += &(&(xi * yj) * c);
                }
            }
        }
        acc
    }

    pub fn add(&self, other: &BilinearForm) -> BilinearForm {
        self.add_scaled(&self.field.one(), other)
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: &Scalar, other: &BilinearForm) -> BilinearForm {
        let mut out = self.clone();
        for (r, o) in out.matrix.iter_mut().zip(&other.matrix) {
            linalg::add_scaled(r, c, o);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> BilinearForm {
        BilinearForm::zero(self.field, self.dim()).add_scaled(c, self)
    }

    /// `θ ∘ τ`, i.e. `(x, y) ↦ θ(y, x)`.
    pub fn flip(&self) -> BilinearForm {
        BilinearForm {
            field: self.field,
            matrix: linalg::transpose(&self.matrix),
        }
    }

    /// Row-major scalar literals.
    pub fn to_literals(&self) -> Vec<Vec<String>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(Scalar::to_string).collect())
            .collect()
    }

    pub fn from_literals(field: FieldSpec, rows: &[Vec<String>]) -> Result<Self> {
        let matrix = rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vector>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_matrix(field, matrix)
    }
}

/// `Σ c_{i,j} Δ_{i,j}` in the `delta_i_j` expression syntax, zero terms omitted.
impl fmt::Display for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Scalar, String)> = self
            .matrix
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, c)| (c.clone(), format!("delta_{}_{}", i + 1, j + 1)))
            })
            .collect();
        f.write_str(&format_form_expr(&terms))
    }
}

fn check_algebra_in_variety(a: &Algebra, v: &VarietySpec, exec: Exec) -> Result<()> {
    if !a.satisfies_variety_with(v, exec)? {
        return Err(Error::NotInVariety(v.name.clone()));
    }
    Ok(())
}

fn basis_vectors(a: &Algebra) -> Vec<Vector> {
    (0..a.dim())
        .map(|i| linalg::unit_vector(&a.field(), a.dim(), i))
        .collect()
}

/// The linear condition `Σ c_j θ(p¹_j, p²_j) = 0` at one basis tuple, as a
/// dense row over the unknowns `c_{1,1}, …, c_{n,n}`.
fn equation_row(a: &Algebra, id: &IdentitySchema, args: &[Vector]) -> Vector {
    let n = a.dim();
    let f = a.field();
    let mut row = linalg::zero_vector(&f, n * n);
    let mut mul = |x: &Vector, y: &Vector| a.mul_unchecked(x, y);
    for m in id.monomials() {
        let (l, r) = m.tree.factors().expect("monomials have degree >= 2");
        let u = l.eval(args, &mut mul);
        let v = r.eval(args, &mut mul);
        let c = f.from_i64(m.coeff);
        for (i, ui) in u.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
            let cu = &c * ui;
            for (j, vj) in v.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                row[i * n + j] += &(&cu * vj);
            }
        }
    }
    row
}

/// All cocycle equations for `(A, V)`, normalized and deduplicated.
pub fn cocycle_equations(a: &Algebra, v: &VarietySpec, exec: Exec) -> Result<Vec<SparseRow>> {
    v.check_characteristic(a.field().characteristic())?;
    let n = a.dim();
    let basis = basis_vectors(a);
    let mut seen: HashSet<SparseRow> = HashSet::new();
    let mut out = Vec::new();
    for id in &v.multilinear_identities {
        let k = id.variables().len();
        let rows = exec.map_range(n.pow(k as u32), |t| {
            let args: Vec<Vector> = tuple_indices(t, k, n)
                .into_iter()
                .map(|i| basis[i].clone())
                .collect();
            let mut row = linalg::sparse_from_dense(&equation_row(a, id, &args));
            linalg::normalize_sparse(&mut row);
            row
        });
        for r in rows {
            if !r.is_empty() && seen.insert(r.clone()) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

fn forms_from_subspace(s: &Subspace, dim: usize) -> Vec<BilinearForm> {
    s.basis()
        .iter()
        .map(|v| BilinearForm::from_vec(s.field(), dim, v))
        .collect()
}

fn span_of_forms(field: FieldSpec, dim: usize, forms: &[BilinearForm]) -> Subspace {
    let vs: Vec<Vector> = forms.iter().map(BilinearForm::to_vec).collect();
    Subspace::span(field, dim * dim, &vs)
}

/// `Z²_V(A, F)` as a subspace of the `n²`-dimensional space of forms.
pub fn cocycle_subspace(a: &Algebra, v: &VarietySpec, exec: Exec) -> Result<Subspace> {
    let eqs = cocycle_equations(a, v, exec)?;
    check_algebra_in_variety(a, v, exec)?;
    let n = a.dim();
    let mut ech = EchelonBuilder::new(a.field(), n * n);
    for r in eqs {
        ech.insert(r);
    }
    Ok(Subspace::span(a.field(), n * n, &ech.kernel()))
}

/// Canonical (reduced echelon) basis of `Z²_V(A, F)`.
pub fn cocycle_space(a: &Algebra, v: &VarietySpec) -> Result<Vec<BilinearForm>> {
    Ok(forms_from_subspace(&cocycle_subspace(a, v, Exec::default())?, a.dim()))
}

/// `δf` for `f = e_k^*`, i.e. `(x, y) ↦ k-th coordinate of xy`.
pub fn coboundary_of_functional(a: &Algebra, f: &[Scalar]) -> BilinearForm {
    let n = a.dim();
    let mut th = BilinearForm::zero(a.field(), n);
    for i in 0..n {
        for j in 0..n {
            let p = a.basis_product(i, j);
            let mut acc = a.field().zero();
            for (pk, fk) in p.iter().zip(f) {
                if !pk.is_zero() && !fk.is_zero() {
                    acc += &(pk * fk);
                }
            }
            th.matrix[i][j] = acc;
        }
    }
    th
}

pub fn coboundary_subspace(a: &Algebra) -> Subspace {
    let n = a.dim();
    let gens: Vec<Vector> = (0..n)
        .map(|k| {
            coboundary_of_functional(a, &linalg::unit_vector(&a.field(), n, k)).to_vec()
        })
        .collect();
    Subspace::span(a.field(), n * n, &gens)
}

/// Canonical basis of `B²(A, F) = {δf}`.
pub fn coboundary_space(a: &Algebra) -> Vec<BilinearForm> {
    forms_from_subspace(&coboundary_subspace(a), a.dim())
}

/// Checks every cocycle equation; the error names the first violated one.
pub fn check_cocycle(a: &Algebra, v: &VarietySpec, theta: &BilinearForm) -> Result<()> {
    v.check_characteristic(a.field().characteristic())?;
    if theta.dim() != a.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            got: theta.dim(),
        });
    }
    let n = a.dim();
    let basis = basis_vectors(a);
    let flat = theta.to_vec();
    for id in &v.multilinear_identities {
        let k = id.variables().len();
        for t in 0..n.pow(k as u32) {
            let idx = tuple_indices(t, k, n);
            let args: Vec<Vector> = idx.iter().map(|&i| basis[i].clone()).collect();
            let row = equation_row(a, id, &args);
            let mut val = a.field().zero();
            for (r, c) in row.iter().zip(&flat) {
                if !r.is_zero() && !c.is_zero() {
                    val += &(r * c);
                }
            }
            if !val.is_zero() {
                let at: Vec<String> = id
                    .variables()
                    .iter()
                    .zip(&idx)
                    .map(|(name, i)| format!("{name}=e{}", i + 1))
                    .collect();
                return Err(Error::NotACocycle(format!(
                    "`{id}` evaluates to {val} at {}",
                    at.join(", ")
                )));
            }
        }
    }
    Ok(())
}

pub fn is_cocycle(a: &Algebra, v: &VarietySpec, theta: &BilinearForm) -> Result<bool> {
    match check_cocycle(a, v, theta) {
        Ok(()) => Ok(true),
        Err(Error::NotACocycle(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `Ann(θ) = {x : θ(x, A) + θ(A, x) = 0}`.
pub fn cocycle_annihilator(a: &Algebra, theta: &BilinearForm) -> Result<Subspace> {
    cocycles_annihilator(a, std::slice::from_ref(theta))
}

/// `⋂ Ann(θ_i)`.
pub fn cocycles_annihilator(a: &Algebra, thetas: &[BilinearForm]) -> Result<Subspace> {
    let n = a.dim();
    let mut rows = Vec::new();
    for th in thetas {
        if th.dim() != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: th.dim(),
            });
        }
        for j in 0..n {
            rows.push((0..n).map(|i| th.matrix[i][j].clone()).collect());
            rows.push(th.matrix[j].clone());
        }
    }
    Ok(Subspace::kernel(a.field(), n, &rows))
}

/// Coordinates in `H_reps` of any cocycle, via a left inverse of the
/// matrix `[H_reps | B_basis]` restricted to independent rows.
#[derive(Debug, Clone)]
struct Reducer {
    columns: Vec<Vector>,
    rows: Vec<usize>,
    inverse: Vec<Vector>,
}

impl Reducer {
    fn new(field: FieldSpec, columns: Vec<Vector>) -> Self {
        let mut t = columns.clone();
        let len = columns.first().map_or(0, Vec::len);
        let rows = linalg::rref(&mut t, len);
        let square: Vec<Vector> = rows
            .iter()
            .map(|&r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        let inverse = if square.is_empty() {
            Vec::new()
        } else {
            linalg::inverse(&field, &square).expect("columns are independent")
        };
        Self {
            columns,
            rows,
            inverse,
        }
    }

    fn solve(&self, field: &FieldSpec, target: &[Scalar]) -> Option<Vector> {
        let picked: Vector = self.rows.iter().map(|&r| target[r].clone()).collect();
        let x = linalg::mat_vec(field, &self.inverse, &picked);
        let back = linalg::linear_combination(field, target.len(), &x, &self.columns);
        (back == target).then_some(x)
    }
}

/// `H²_V(A, F)` with a chosen basis of class representatives.
#[derive(Debug, Clone)]
pub struct CohomologySpace {
    algebra: Algebra,
    variety: VarietySpec,
    z: Subspace,
    b: Subspace,
    z_basis: Vec<BilinearForm>,
    b_basis: Vec<BilinearForm>,
    h_reps: Vec<BilinearForm>,
    h_labels: Vec<String>,
    reducer: Reducer,
}

impl CohomologySpace {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim_z(&self) -> usize {
        self.z_basis.len()
    }

    pub fn dim_b(&self) -> usize {
        self.b_basis.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h_reps.len()
    }

    pub fn z_subspace(&self) -> &Subspace {
        &self.z
    }

    pub fn b_subspace(&self) -> &Subspace {
        &self.b
    }

    pub fn z_basis(&self) -> &[BilinearForm] {
        &self.z_basis
    }

    pub fn b_basis(&self) -> &[BilinearForm] {
        &self.b_basis
    }

    pub fn h_reps(&self) -> &[BilinearForm] {
        &self.h_reps
    }

    /// Names of the representatives (`D2,1`, `N3`, … for μ₀ⁿ, otherwise the
    /// form itself).
    pub fn h_labels(&self) -> &[String] {
        &self.h_labels
    }

    /// Unique `λ` with `θ − Σ λ_k H_reps[k] ∈ B²`.
    pub fn reduce_class(&self, theta: &BilinearForm) -> Result<Vector> {
        let f = self.field();
        if theta.dim() != self.algebra.dim() {
            return Err(Error::DimMismatch {
                expected: self.algebra.dim(),
                got: theta.dim(),
            });
        }
        let x = self
            .reducer
            .solve(&f, &theta.to_vec())
            .ok_or_else(|| Error::NotACocycle(format!("{theta} is not in Z²_{}", self.variety.name)))?;
        Ok(x[..self.dim_h()].to_vec())
    }

    /// The representative cocycle `Σ λ_k H_reps[k]`.
    pub fn representative(&self, coords: &[Scalar]) -> BilinearForm {
        let n = self.algebra.dim();
        let mut out = BilinearForm::zero(self.field(), n);
        for (c, h) in coords.iter().zip(&self.h_reps) {
            out = out.add_scaled(c, h);
        }
        out
    }

    pub fn to_json(&self) -> CohomologyJson {
        let lits = |v: &[BilinearForm]| v.iter().map(BilinearForm::to_literals).collect();
        CohomologyJson {
            b_basis: lits(&self.b_basis),
            dim_b: self.dim_b(),
            dim_h: self.dim_h(),
            dim_z: self.dim_z(),
            field: self.field(),
            h_labels: self.h_labels.clone(),
            h_reps: lits(&self.h_reps),
            variety: self.variety.name.clone(),
            z_basis: lits(&self.z_basis),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyJson {
    #[serde(rename = "B_basis")]
    pub b_basis: Vec<Vec<Vec<String>>>,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    #[serde(rename = "dimH")]
    pub dim_h: usize,
    #[serde(rename = "dimZ")]
    pub dim_z: usize,
    pub field: FieldSpec,
    #[serde(rename = "H_labels")]
    pub h_labels: Vec<String>,
    #[serde(rename = "H_reps")]
    pub h_reps: Vec<Vec<Vec<String>>>,
    pub variety: String,
    #[serde(rename = "Z_basis")]
    pub z_basis: Vec<Vec<Vec<String>>>,
}

/// Preferred class representatives for μ₀ⁿ, by variety.
fn preferred_reps(n: usize, field: FieldSpec, variety: &str) -> Option<Vec<(String, BilinearForm)>> {
    let d = |i, j| (format!("delta_{i}_{j}"), delta(i, j, n, field).expect("indices in range"));
    let top = (format!("nabla_{n}"), nabla(n, n, field).expect("index in range"));
    let mut reps = match canonical_variety_name(variety)? {
        "left_commutative" | "left_symmetric" => (2..=n).map(|i| d(i, 1)).collect(),
        "right_commutative" => (2..=n).map(|i| d(1, i)).collect(),
        "bicommutative" | "assosymmetric" | "novikov" if n >= 2 => vec![d(2, 1)],
        "bicommutative" | "assosymmetric" | "novikov" => Vec::new(),
        _ => Vec::new(),
    };
    reps.push(top);
    Some(reps)
}

pub fn second_cohomology(a: &Algebra, v: &VarietySpec) -> Result<CohomologySpace> {
    second_cohomology_with(a, v, Exec::default())
}

pub fn second_cohomology_with(a: &Algebra, v: &VarietySpec, exec: Exec) -> Result<CohomologySpace> {
    let n = a.dim();
    let f = a.field();
    let z = cocycle_subspace(a, v, exec)?;
    let b = coboundary_subspace(a);
    debug_assert!(z.contains_subspace(&b));
    let z_basis = forms_from_subspace(&z, n);
    let b_basis = forms_from_subspace(&b, n);
    let dim_h = z.dim() - b.dim();

    let is_mu0 = Algebra::null_filiform(n, f)
        .map(|m| m.structure_constants() == a.structure_constants())
        .unwrap_or(false);
    let preferred = is_mu0
        .then(|| preferred_reps(n, f, &v.name))
        .flatten()
        .filter(|reps| {
            reps.len() == dim_h
                && reps.iter().all(|(_, r)| z.contains(&r.to_vec()))
                && b.sum(&span_of_forms(f, n, &reps.iter().map(|r| r.1.clone()).collect::<Vec<_>>()))
                    .dim()
                    == z.dim()
        });

    let (h_labels, h_reps): (Vec<String>, Vec<BilinearForm>) = match preferred {
        Some(reps) => reps.into_iter().unzip(),
        None => {
            // Complete B to Z with echelon basis vectors of Z.
            let mut acc = b.clone();
            let mut reps = Vec::new();
            for zb in &z_basis {
                let grown = acc.sum(&Subspace::span(f, n * n, &[zb.to_vec()]));
                if grown.dim() > acc.dim() {
                    acc = grown;
                    reps.push(zb.clone());
                }
            }
            (reps.iter().map(BilinearForm::to_string).collect(), reps)
        }
    };

    let mut columns: Vec<Vector> = h_reps.iter().map(BilinearForm::to_vec).collect();
    columns.extend(b.basis().iter().cloned());
    let reducer = Reducer::new(f, columns);
    Ok(CohomologySpace {
        algebra: a.clone(),
        variety: v.clone(),
        z,
        b,
        z_basis,
        b_basis,
        h_reps,
        h_labels,
        reducer,
    })
}
