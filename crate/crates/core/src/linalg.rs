//! Exact linear algebra over a [`FieldSpec`]: row reduction, kernels and
//! canonical subspaces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: &FieldSpec, len: usize) -> Vector {
    vec![field.zero(); len]
}

pub fn unit_vector(field: &FieldSpec, len: usize, index: usize) -> Vector {
    let mut v = zero_vector(field, len);
    v[index] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_scaled(target: &mut [Scalar], coeff: &Scalar, v: &[Scalar]) {
    if coeff.is_zero() {
        return;
    }
    for (t, x) in target.iter_mut().zip(v) {
        if !x.is_zero() {
            *t += &(coeff * x);
        }
    }
}

pub fn linear_combination(field: &FieldSpec, len: usize, coeffs: &[Scalar], vs: &[Vector]) -> Vector {
    let mut out = zero_vector(field, len);
    for (c, v) in coeffs.iter().zip(vs) {
        add_scaled(&mut out, c, v);
    }
    out
}

/// Reduces `rows` in place to reduced row echelon form (pivots equal to 1,
/// zero rows dropped) and returns the pivot columns.
pub fn rref(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let c = -&row[col];
                add_scaled(row, &c, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Kernel basis of the system `rows · x = 0`: each free variable set to 1 in
/// turn, the others to 0.
pub fn nullspace(field: &FieldSpec, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = zero_vector(field, ncols);
            v[free] = field.one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect()
}

/// Solves `Σ x_k columns[k] = target`; `None` when inconsistent. When the
/// columns are dependent the free coordinates are set to zero.
pub fn solve(field: &FieldSpec, columns: &[Vector], target: &[Scalar]) -> Option<Vector> {
    let k = columns.len();
    let len = target.len();
    let mut rows: Vec<Vector> = (0..len)
        .map(|i| {
            let mut r: Vector = columns.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = zero_vector(field, k);
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    Some(x)
}

pub fn mat_mul(field: &FieldSpec, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = field.zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &(&row[k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(field: &FieldSpec, a: &[Vector], v: &[Scalar]) -> Vector {
    a.iter()
        .map(|row| {
            let mut acc = field.zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x * y);
                }
            }
            acc
        })
        .collect()
}

pub fn transpose(a: &[Vector]) -> Vec<Vector> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity(field: &FieldSpec, n: usize) -> Vec<Vector> {
    (0..n).map(|i| unit_vector(field, n, i)).collect()
}

pub fn inverse(field: &FieldSpec, a: &[Vector]) -> Result<Vec<Vector>> {
    let n = a.len();
    let mut aug: Vec<Vector> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vector(field, n, i));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::NotInvertible);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Sparse row with strictly increasing column indices and nonzero entries.
pub type SparseRow = Vec<(usize, Scalar)>;

pub fn sparse_from_dense(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Scales a sparse row so its leading entry is 1.
pub fn normalize_sparse(row: &mut SparseRow) {
    if let Some((_, lead)) = row.first() {
        if !lead.is_one() {
            let inv = lead.inv().expect("entries are nonzero");
            for (_, x) in row.iter_mut() {
                *x *= &inv;
            }
        }
    }
}

fn sparse_axpy(row: &SparseRow, coeff: &Scalar, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = other.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, coeff * &other[j].1));
            j += 1;
        } else {
            let v = &row[i].1 + &(coeff * &other[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form over sparse rows; suited to large, highly
/// redundant homogeneous systems.
#[derive(Debug, Clone)]
pub struct EchelonBuilder {
    field: FieldSpec,
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl EchelonBuilder {
    pub fn new(field: FieldSpec, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored pivots; returns whether it was
    /// independent (and therefore stored).
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        while let Some((lead, c)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = sparse_axpy(&row, &-c, p),
                None => {
                    normalize_sparse(&mut row);
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }

    pub fn dense_rows(&self) -> Vec<Vector> {
        self.pivots
            .values()
            .map(|r| {
                let mut v = zero_vector(&self.field, self.ncols);
                for (i, x) in r {
                    v[*i] = x.clone();
                }
                v
            })
            .collect()
    }

    pub fn kernel(&self) -> Vec<Vector> {
        nullspace(&self.field, &self.dense_rows(), self.ncols)
    }
}

/// A linear subspace stored by its reduced row echelon basis, so equal
/// subspaces have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn span(field: FieldSpec, ambient_dim: usize, vectors: &[Vector]) -> Self {
        let mut basis = vectors.to_vec();
        rref(&mut basis, ambient_dim);
        Self {
            field,
            ambient_dim,
            basis,
        }
    }

    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Self {
            field,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Self {
            field,
            ambient_dim,
            basis: identity(&field, ambient_dim),
        }
    }

    /// Solution space of the homogeneous system `rows · x = 0`.
    pub fn kernel(field: FieldSpec, ambient_dim: usize, rows: &[Vector]) -> Self {
        let k = nullspace(&field, rows, ambient_dim);
        Self::span(field, ambient_dim, &k)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows, self.ambient_dim) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Equations cutting out this subspace: a basis of its orthogonal
    /// complement under the standard pairing.
    pub fn equations(&self) -> Vec<Vector> {
        nullspace(&self.field, &self.basis, self.ambient_dim)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let mut eqs = self.equations();
        eqs.extend(other.equations());
        Subspace::kernel(self.field, self.ambient_dim, &eqs)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient_dim, &vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vector {
        let f = FieldSpec::rationals();
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn rref_and_nullspace() {
        let f = FieldSpec::rationals();
        let rows = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[1, 0, 1])];
        let mut m = rows.clone();
        let piv = rref(&mut m, 3);
        assert_eq!(piv, vec![0, 1]);
        let k = nullspace(&f, &rows, 3);
        assert_eq!(k.len(), 1);
        for r in &rows {
            let dot = r.iter().zip(&k[0]).fold(f.zero(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn echelon_builder_matches_dense_rank() {
        let f = FieldSpec::prime(5).unwrap();
        let rows: Vec<Vector> = [[1, 2, 0, 4], [2, 4, 0, 3], [0, 0, 1, 1], [1, 2, 1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        let mut b = EchelonBuilder::new(f, 4);
        for r in &rows {
            b.insert(sparse_from_dense(r));
        }
        assert_eq!(b.rank(), rank(&rows, 4));
        assert_eq!(
            Subspace::span(f, 4, &b.kernel()),
            Subspace::kernel(f, 4, &rows)
        );
    }

    #[test]
    fn subspace_equality_is_representation_equality() {
        let f = FieldSpec::rationals();
        let a = Subspace::span(f, 3, &[q(&[1, 1, 0]), q(&[0, 1, 1])]);
        let b = Subspace::span(f, 3, &[q(&[1, 2, 1]), q(&[1, 0, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), b.basis());
        let c = Subspace::span(f, 3, &[q(&[1, 0, 0]), q(&[0, 0, 1])]);
        let i = a.intersect(&c);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&q(&[1, 0, -1])));
        assert_eq!(a.sum(&c).dim(), 3);
    }

    #[test]
    fn solve_and_inverse() {
        let f = FieldSpec::rationals();
        let cols = vec![q(&[1, 0, 1]), q(&[0, 1, 1])];
        assert_eq!(solve(&f, &cols, &q(&[2, 3, 5])), Some(q(&[2, 3])));
        assert_eq!(solve(&f, &cols, &q(&[2, 3, 4])), None);
        let m = vec![q(&[2, 1]), q(&[1, 1])];
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(&f, 2));
        assert_eq!(inverse(&f, &[q(&[1, 2]), q(&[2, 4])]), Err(Error::NotInvertible));
    }
}
