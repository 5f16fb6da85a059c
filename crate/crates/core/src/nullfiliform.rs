//! Named forms `∇_j`, `Δ_{i,j}` and the automorphism group of μ₀ⁿ.
//!
//! An automorphism is determined by `φ(e_1) = Σ a_k e_k` with `a_1 ≠ 0`,
//! since `φ(e_j) = φ(e_1)^j`. Its action on forms is `φ·θ = θ(φ−, φ−)`,
//! i.e. `Mᵀ c M`; with this convention `(φψ)·θ = ψ·(φ·θ)`.

use rand::Rng;

use crate::algebra::Algebra;
use crate::cohomology::{BilinearForm, CohomologySpace};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::scalar::{random_nonzero, random_scalar, FieldSpec, Scalar};

fn check_index(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        return Err(Error::IndexOutOfRange { index, bound: n });
    }
    Ok(())
}

/// `Δ_{i,j}` (1-based) on an `n`-dimensional algebra.
pub fn delta(i: usize, j: usize, n: usize, field: FieldSpec) -> Result<BilinearForm> {
    check_index(i, n)?;
    check_index(j, n)?;
    let mut th = BilinearForm::zero(field, n);
    th.set_coeff(i - 1, j - 1, field.one());
    Ok(th)
}

/// `∇_j = Σ_{k=1}^{j} Δ_{k,j+1−k}`.
pub fn nabla(j: usize, n: usize, field: FieldSpec) -> Result<BilinearForm> {
    check_index(j, n)?;
    let mut th = BilinearForm::zero(field, n);
    for k in 1..=j {
        th.set_coeff(k - 1, j - k, field.one());
    }
    Ok(th)
}

/// Multiplies two truncated "power series" `Σ a_k e_k` in μ₀ⁿ.
fn convolve(field: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vector {
    let n = a.len();
    let mut out = linalg::zero_vector(field, n);
    for (i, ai) in a.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
        for (j, bj) in b.iter().enumerate().take(n.saturating_sub(i + 1)) {
            if !bj.is_zero() {
                out[i + j + 1] += &(ai * bj);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    field: FieldSpec,
    first_col: Vector,
    /// `matrix[i][j]` is the `e_i`-coordinate of `φ(e_j)`.
    matrix: Vec<Vector>,
}

impl Automorphism {
    pub fn from_column(n: usize, field: FieldSpec, col: &[Scalar]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDim(0));
        }
        if col.len() != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: col.len(),
            });
        }
        if col.iter().any(|s| !field.contains(s)) {
            return Err(Error::FieldMismatch(field.to_string(), "column entry".into()));
        }
        if col[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut cols = vec![col.to_vec()];
        for _ in 1..n {
            let next = convolve(&field, cols.last().unwrap(), col);
            cols.push(next);
        }
        Ok(Self {
            field,
            first_col: col.to_vec(),
            matrix: linalg::transpose(&cols),
        })
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        Self::from_column(n, field, &linalg::unit_vector(&field, n, 0)).expect("valid column")
    }

    /// Uniform over the group for finite fields; small entries over ℚ.
    pub fn random<R: Rng + ?Sized>(n: usize, field: FieldSpec, rng: &mut R) -> Self {
        let mut col = vec![random_nonzero(&field, rng, 5)];
        col.extend((1..n).map(|_| random_scalar(&field, rng, 5)));
        Self::from_column(n, field, &col).expect("nonzero leading entry")
    }

    pub fn n(&self) -> usize {
        self.first_col.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn first_col(&self) -> &[Scalar] {
        &self.first_col
    }

    pub fn matrix(&self) -> &[Vector] {
        &self.matrix
    }

    /// `φ_{1,1}`.
    pub fn leading(&self) -> &Scalar {
        &self.first_col[0]
    }

    /// `φ ∘ ψ`, again an automorphism of μ₀ⁿ.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let m = linalg::mat_mul(&self.field, &self.matrix, &other.matrix);
        let col: Vector = m.iter().map(|r| r[0].clone()).collect();
        Automorphism {
            field: self.field,
            first_col: col,
            matrix: m,
        }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        linalg::mat_vec(&self.field, &self.matrix, x)
    }
}

/// Whether `m` (columns = images of basis vectors) is an invertible
/// multiplicative map of `a`.
pub fn is_automorphism(a: &Algebra, m: &[Vector]) -> bool {
    let n = a.dim();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return false;
    }
    if linalg::rank(m, n) != n {
        return false;
    }
    let f = a.field();
    let cols = linalg::transpose(m);
    (0..n).all(|i| {
        (0..n).all(|j| {
            let lhs = linalg::mat_vec(&f, m, a.basis_product(i, j));
            lhs == a.mul_unchecked(&cols[i], &cols[j])
        })
    })
}

/// `φ·θ = Mᵀ c M`.
pub fn act_on_cocycle(phi: &Automorphism, theta: &BilinearForm) -> Result<BilinearForm> {
    act_with_matrix(phi.field, &phi.matrix, theta)
}

pub(crate) fn act_with_matrix(field: FieldSpec, m: &[Vector], theta: &BilinearForm) -> Result<BilinearForm> {
    if theta.dim() != m.len() {
        return Err(Error::DimMismatch {
            expected: m.len(),
            got: theta.dim(),
        });
    }
    let cm = linalg::mat_mul(&field, theta.matrix(), m);
    let out = linalg::mat_mul(&field, &linalg::transpose(m), &cm);
    BilinearForm::from_matrix(field, out)
}

/// Class coordinates of `φ·Σ λ_k H_reps[k]`.
pub fn act_on_class(h: &CohomologySpace, phi: &Automorphism, coords: &[Scalar]) -> Result<Vector> {
    if coords.len() != h.dim_h() {
        return Err(Error::DimMismatch {
            expected: h.dim_h(),
            got: coords.len(),
        });
    }
    let rep = h.representative(coords);
    h.reduce_class(&act_on_cocycle(phi, &rep)?)
}

/// The `d × d` matrix of the induced action on `H²` (column `k` is the image
/// of the `k`-th basis class).
pub fn class_action_matrix(h: &CohomologySpace, phi: &Automorphism) -> Result<Vec<Vector>> {
    let cols = h
        .h_reps()
        .iter()
        .map(|r| h.reduce_class(&act_on_cocycle(phi, r)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::transpose(&cols))
}

/// Renders `Σ c·name` as e.g. `nabla_3 + 2*delta_3_1` or `nabla_3 - delta_2_1`.
pub fn format_form_expr(terms: &[(Scalar, String)]) -> String {
    let mut out = String::new();
    for (c, name) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let (neg, mag) = if c.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses `nabla_j`, `delta_i_j` combinations such as
/// `nabla_n + 3*delta_2_1 - 1/2*delta_n_1`; `n` stands for the dimension.
pub fn parse_form_expr(expr: &str, n: usize, field: FieldSpec) -> Result<BilinearForm> {
    let chars: Vec<(usize, char)> = expr.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let syntax = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
    let end = expr.len();
    let mut at = 0;
    let mut total = BilinearForm::zero(field, n);
    if chars.len() == 1 && chars[0].1 == '0' {
        return Ok(total);
    }
    let mut first = true;
    while at < chars.len() || first {
        let mut sign = field.one();
        match chars.get(at).map(|c| c.1) {
            Some('+') if !first => at += 1,
            Some('-') => {
                sign = -sign;
                at += 1;
            }
            None => return Err(syntax(end, "expected a term")),
            _ if first => {}
            Some(_) => return Err(syntax(chars[at].0, "expected '+' or '-'")),
        }
        first = false;
        let pos = |i: usize| chars.get(i).map_or(end, |c| c.0);
        let start = at;
        while at < chars.len() && !matches!(chars[at].1, '+' | '-') {
            at += 1;
        }
        let term: String = chars[start..at].iter().map(|c| c.1).collect();
        if term.is_empty() {
            return Err(syntax(pos(start), "expected a term"));
        }
        let (coef, name, name_pos) = match term.split_once('*') {
            Some((c, nm)) => {
                let c = field
                    .parse_scalar(c)
                    .map_err(|_| syntax(pos(start), "invalid coefficient"))?;
                (c, nm.to_string(), pos(start + term.find('*').unwrap() + 1))
            }
            None => (field.one(), term.clone(), pos(start)),
        };
        let index = |s: &str| -> Result<usize> {
            if s == "n" {
                Ok(n)
            } else {
                s.parse().map_err(|_| syntax(name_pos, "invalid index"))
            }
        };
        let form = if let Some(j) = name.strip_prefix("nabla_") {
            nabla(index(j)?, n, field)?
        } else if let Some(rest) = name.strip_prefix("delta_") {
            let (i, j) = rest
                .split_once('_')
                .ok_or_else(|| syntax(name_pos, "expected delta_i_j"))?;
            delta(index(i)?, index(j)?, n, field)?
        } else {
            return Err(syntax(name_pos, "expected nabla_j or delta_i_j"));
        };
        total = total.add_scaled(&(&sign * &coef), &form);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::second_cohomology;
    use crate::identity::builtin_variety;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn ints(f: FieldSpec, v: &[i64]) -> Vector {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn named_forms() {
        let n2 = nabla(2, 3, q()).unwrap();
        let expect = delta(1, 2, 3, q()).unwrap().add(&delta(2, 1, 3, q()).unwrap());
        assert_eq!(n2, expect);
        assert_eq!(nabla(1, 4, q()).unwrap(), delta(1, 1, 4, q()).unwrap());
        let d = delta(2, 1, 3, q()).unwrap();
        assert!(d.coeff(1, 0).is_one());
        assert_eq!(d.to_vec().iter().filter(|s| !s.is_zero()).count(), 1);
        assert!(matches!(delta(0, 1, 3, q()), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(nabla(4, 3, q()), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn from_column_examples() {
        let f = q();
        assert_eq!(
            Automorphism::from_column(2, f, &ints(f, &[1, 0])).unwrap().matrix(),
            linalg::identity(&f, 2).as_slice()
        );
        let phi = Automorphism::from_column(2, f, &ints(f, &[3, 5])).unwrap();
        assert_eq!(phi.matrix(), [ints(f, &[3, 0]), ints(f, &[5, 9])].as_slice());
        let phi = Automorphism::from_column(3, f, &ints(f, &[1, 1, 0])).unwrap();
        let cols = linalg::transpose(phi.matrix());
        assert_eq!(cols, vec![ints(f, &[1, 1, 0]), ints(f, &[0, 1, 2]), ints(f, &[0, 0, 1])]);
        assert!(matches!(
            Automorphism::from_column(2, f, &ints(f, &[0, 1])),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn swap_is_not_an_automorphism() {
        let f = q();
        let a = Algebra::null_filiform(2, f).unwrap();
        assert!(!is_automorphism(&a, &[ints(f, &[0, 1]), ints(f, &[1, 0])]));
        assert!(is_automorphism(&a, &linalg::identity(&f, 2)));
    }

    #[test]
    fn random_automorphisms_are_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [q(), FieldSpec::prime(7).unwrap()] {
            for n in 1..=6 {
                let a = Algebra::null_filiform(n, f).unwrap();
                for _ in 0..100 {
                    let phi = Automorphism::random(n, f, &mut rng);
                    assert!(is_automorphism(&a, phi.matrix()));
                    for i in 0..n {
                        assert_eq!(phi.matrix()[i][i], phi.leading().pow(i as u64 + 1));
                        for j in i + 1..n {
                            assert!(phi.matrix()[i][j].is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_action_scales_deltas() {
        let f = q();
        let n = 5;
        let lambda = f.from_i64(3);
        let mut col = linalg::zero_vector(&f, n);
        col[0] = lambda.clone();
        let phi = Automorphism::from_column(n, f, &col).unwrap();
        for i in 1..=n {
            let d = delta(i, 1, n, f).unwrap();
            assert_eq!(act_on_cocycle(&phi, &d).unwrap(), d.scale(&lambda.pow(i as u64 + 1)));
        }
    }

    #[test]
    fn nabla_action_matches_alpha_formula() {
        let f = q();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=6 {
            for _ in 0..20 {
                let phi = Automorphism::random(n, f, &mut rng);
                let m = phi.matrix();
                // α_{1,j} = Σ_{k=1}^{n+1−j} φ_{k,1} φ_{n+1−k,j}, 1-based.
                let mut expect = BilinearForm::zero(f, n);
                for j in 1..=n {
                    let mut alpha = f.zero();
                    for k in 1..=n + 1 - j {
                        alpha += &(&m[k - 1][0] * &m[n - k][j - 1]);
                    }
                    expect = expect.add_scaled(&alpha, &nabla(j, n, f).unwrap());
                }
                assert_eq!(act_on_cocycle(&phi, &nabla(n, n, f).unwrap()).unwrap(), expect);
            }
        }
    }

    #[test]
    fn class_action_examples() {
        let f = q();
        let lc = builtin_variety("lc").unwrap();
        let n = 4;
        let h = second_cohomology(&Algebra::null_filiform(n, f).unwrap(), &lc).unwrap();
        let id = Automorphism::identity(n, f);
        let v = ints(f, &[1, -2, 5, 7]);
        assert_eq!(act_on_class(&h, &id, &v).unwrap(), v);

        // Oracle: direct Mᵀ c M on the representative, then reduce.
        let phi = Automorphism::from_column(n, f, &ints(f, &[1, 1, 0, 0])).unwrap();
        let rep = nabla(4, 4, f).unwrap().add(&delta(3, 1, 4, f).unwrap());
        let m = phi.matrix();
        let direct = linalg::mat_mul(&f, &linalg::transpose(m), &linalg::mat_mul(&f, rep.matrix(), m));
        let direct = h.reduce_class(&BilinearForm::from_matrix(f, direct).unwrap()).unwrap();
        let coords = h.reduce_class(&rep).unwrap();
        assert_eq!(coords, ints(f, &[0, 1, 0, 1]));
        assert_eq!(act_on_class(&h, &phi, &coords).unwrap(), direct);
    }

    #[test]
    fn action_preserves_cocycles_and_coboundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in crate::identity::CATALOG {
            let v = builtin_variety(name).unwrap();
            for f in [q(), FieldSpec::prime(7).unwrap()] {
                if v.check_characteristic(f.characteristic()).is_err() {
                    continue;
                }
                for n in 2..=4 {
                    let a = Algebra::null_filiform(n, f).unwrap();
                    let h = second_cohomology(&a, &v).unwrap();
                    for _ in 0..5 {
                        let phi = Automorphism::random(n, f, &mut rng);
                        for z in h.z_basis() {
                            let img = act_on_cocycle(&phi, z).unwrap();
                            assert!(h.z_subspace().contains(&img.to_vec()), "{name} n={n}");
                        }
                        for b in h.b_basis() {
                            let img = act_on_cocycle(&phi, b).unwrap();
                            assert!(h.b_subspace().contains(&img.to_vec()), "{name} n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_dependence() {
        // φ_{i,j} − j·a_1^{j−1}·a_{i−j+1} does not depend on a_{i−j+1}.
        let f = q();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 6;
        for _ in 0..20 {
            let base = Automorphism::random(n, f, &mut rng);
            for i in 1..=n {
                for j in 2..=i {
                    let k = i - j + 1;
                    if k < 2 {
                        continue;
                    }
                    let mut col = base.first_col().to_vec();
                    col[k - 1] += &f.from_i64(4);
                    let other = Automorphism::from_column(n, f, &col).unwrap();
                    let coef = &f.from_i64(j as i64) * &base.leading().pow(j as u64 - 1);
                    let r1 = &base.matrix()[i - 1][j - 1] - &(&coef * &base.first_col()[k - 1]);
                    let r2 = &other.matrix()[i - 1][j - 1] - &(&coef * &col[k - 1]);
                    assert_eq!(r1, r2, "i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn form_expressions() {
        let f = q();
        let th = parse_form_expr("nabla_n + 3*delta_2_1", 4, f).unwrap();
        let expect = nabla(4, 4, f).unwrap().add_scaled(&f.from_i64(3), &delta(2, 1, 4, f).unwrap());
        assert_eq!(th, expect);
        let th = parse_form_expr("-delta_n_1 - 1/2 * nabla_2", 3, f).unwrap();
        let expect = delta(3, 1, 3, f)
            .unwrap()
            .scale(&f.from_i64(-1))
            .add_scaled(&f.from_ratio(-1, 2).unwrap(), &nabla(2, 3, f).unwrap());
        assert_eq!(th, expect);
        assert!(parse_form_expr("0", 3, f).unwrap().is_zero());
        assert!(matches!(parse_form_expr("nabla_3 +", 3, f), Err(Error::Syntax { .. })));
        assert!(matches!(parse_form_expr("nabla3", 3, f), Err(Error::Syntax { .. })));
        assert!(matches!(parse_form_expr("delta_4_1", 3, f), Err(Error::IndexOutOfRange { .. })));
        let terms = vec![
            (f.one(), "nabla_3".to_string()),
            (f.from_i64(-1), "delta_2_1".to_string()),
            (f.from_i64(2), "delta_3_1".to_string()),
        ];
        let text = format_form_expr(&terms);
        assert_eq!(text, "nabla_3 - delta_2_1 + 2*delta_3_1");
        assert_eq!(
            parse_form_expr(&text, 3, f).unwrap(),
            nabla(3, 3, f)
                .unwrap()
                .add_scaled(&f.from_i64(-1), &delta(2, 1, 3, f).unwrap())
                .add_scaled(&f.from_i64(2), &delta(3, 1, 3, f).unwrap())
        );
    }

    proptest! {
        #[test]
        fn composition_and_action_order(
            n in 1usize..=6,
            a in proptest::collection::vec(0u64..7, 6),
            b in proptest::collection::vec(0u64..7, 6),
            c in proptest::collection::vec(-3i64..4, 36),
            rational in any::<bool>(),
        ) {
            let f = if rational { q() } else { FieldSpec::prime(7).unwrap() };
            let mk = |v: &[u64]| {
                let mut col: Vector = v[..n].iter().map(|&x| f.from_u64(x)).collect();
                if col[0].is_zero() { col[0] = f.one(); }
                Automorphism::from_column(n, f, &col).unwrap()
            };
            let (phi, psi) = (mk(&a), mk(&b));
            let alg = Algebra::null_filiform(n, f).unwrap();
            let comp = phi.compose(&psi);
            prop_assert!(is_automorphism(&alg, comp.matrix()));
            let rebuilt = Automorphism::from_column(n, f, comp.first_col()).unwrap();
            prop_assert_eq!(rebuilt.matrix(), comp.matrix());
            let theta = BilinearForm::from_vec(f, n, &c[..n * n].iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>());
            let lhs = act_on_cocycle(&comp, &theta).unwrap();
            let rhs = act_on_cocycle(&psi, &act_on_cocycle(&phi, &theta).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
