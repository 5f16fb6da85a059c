//! Named orbit representatives for μ₀ⁿ in the left commutative and
//! bicommutative varieties, and the multiplication table of the resulting
//! one-dimensional central extensions.

use crate::algebra::Algebra;
use crate::cohomology::{second_cohomology, BilinearForm};
use crate::error::{Error, Result};
use crate::extension::{central_extension, ExtensionResult};
use crate::identity::{builtin_variety, canonical_variety_name};
use crate::linalg::{self, Vector};
use crate::nullfiliform::{delta, format_form_expr, nabla};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperRep {
    pub label: String,
    pub form: BilinearForm,
    pub note: Option<String>,
    /// Gives a non-split extension with 2-dimensional annihilator (outside T₁).
    pub two_dim_annihilator: bool,
}

/// `{0, 1, −1, 2}` over ℚ, every element over `F_p`.
pub fn default_mu_sample(field: FieldSpec) -> Vec<Scalar> {
    if field.is_finite() {
        field.elements().collect()
    } else {
        [0, 1, -1, 2].iter().map(|&m| field.from_i64(m)).collect()
    }
}

fn nonzero_sample(sample: &[Scalar]) -> Vec<Scalar> {
    sample.iter().filter(|m| !m.is_zero()).cloned().collect()
}

fn lc_or_bc(variety: &str) -> Result<&'static str> {
    match canonical_variety_name(variety) {
        Some(v @ ("left_commutative" | "bicommutative")) => Ok(v),
        _ => Err(Error::UnsupportedVariety(variety.to_string())),
    }
}

struct Builder {
    n: usize,
    field: FieldSpec,
    out: Vec<PaperRep>,
}

impl Builder {
    fn push(&mut self, terms: &[(Scalar, usize)], note: Option<String>, two_dim: bool) {
        let (n, f) = (self.n, self.field);
        let mut form = BilinearForm::zero(f, n);
        let mut named = Vec::new();
        for (c, i) in terms {
            // index 0 encodes ∇ₙ, otherwise Δ_{i,1}
            let (g, name) = if *i == 0 {
                (nabla(n, n, f).unwrap(), format!("nabla_{n}"))
            } else {
                (delta(*i, 1, n, f).unwrap(), format!("delta_{i}_1"))
            };
            form = form.add_scaled(c, &g);
            named.push((c.clone(), name));
        }
        self.out.push(PaperRep {
            label: format_form_expr(&named),
            form,
            note,
            two_dim_annihilator: two_dim,
        });
    }
}

fn trivial_note(n: usize) -> Option<String> {
    Some(format!("trivial extension mu0^{}", n + 1))
}

/// Representatives of the one-dimensional non-split extensions (lines in
/// T₁), followed by the flagged `Δ_{k,1}` cases with 2-dimensional
/// annihilator.
pub fn paper_representatives(
    variety: &str,
    n: usize,
    field: FieldSpec,
    mu_sample: Option<&[Scalar]>,
) -> Result<Vec<PaperRep>> {
    let v = lc_or_bc(variety)?;
    if n < 2 {
        return Err(Error::InvalidDim(n));
    }
    let sample = mu_sample.map_or_else(|| default_mu_sample(field), <[Scalar]>::to_vec);
    let one = field.one();
    let mut b = Builder { n, field, out: Vec::new() };
    if v == "left_commutative" || n == 2 {
        b.push(&[(one.clone(), n)], None, false);
        for mu in &sample {
            let note = mu.is_zero().then(|| trivial_note(n)).flatten();
            b.push(&[(one.clone(), 0), (mu.clone(), n)], note, false);
        }
    }
    if v == "left_commutative" {
        for i in 2..n {
            b.push(&[(one.clone(), 0), (one.clone(), i)], None, false);
        }
        for k in 2..n {
            b.push(&[(one.clone(), k)], None, true);
        }
    } else if n > 2 {
        b.push(&[(one.clone(), 0)], trivial_note(n), false);
        b.push(&[(one.clone(), 0), (one.clone(), 2)], None, false);
        b.push(&[(one.clone(), 2)], None, true);
    }
    Ok(b.out)
}

/// Representatives of the orbits on all of `H²` (including 0 and the
/// families indexed by `F*/R(i, n)`, sampled by `mu_sample`).
pub fn paper_h2_representatives(
    variety: &str,
    n: usize,
    field: FieldSpec,
    mu_sample: Option<&[Scalar]>,
) -> Result<Vec<PaperRep>> {
    let v = lc_or_bc(variety)?;
    if n < 2 {
        return Err(Error::InvalidDim(n));
    }
    let sample = mu_sample.map_or_else(|| default_mu_sample(field), <[Scalar]>::to_vec);
    let one = field.one();
    let mut b = Builder { n, field, out: Vec::new() };
    b.push(&[], None, false);
    let top = if v == "left_commutative" { n } else { 2 };
    for i in 2..=top {
        b.push(&[(one.clone(), i)], None, false);
    }
    if v == "left_commutative" || n == 2 {
        for mu in &sample {
            b.push(&[(one.clone(), 0), (mu.clone(), n)], None, false);
        }
    } else {
        b.push(&[(one.clone(), 0)], None, false);
    }
    let mids = match (v, n) {
        ("left_commutative", _) => 2..n,
        (_, 2) => 0..0,
        _ => 2..3,
    };
    for i in mids {
        for mu in nonzero_sample(&sample) {
            b.push(&[(one.clone(), 0), (mu, i)], None, false);
        }
    }
    Ok(b.out)
}

/// One verified row of the table.
#[derive(Debug, Clone)]
pub struct Table1Row {
    pub label: String,
    pub varieties: Vec<String>,
    pub extension: ExtensionResult,
}

enum RowKind {
    TopDelta,
    Delta(usize),
    NablaDelta(usize),
    NablaMu(Scalar),
}

/// The table's products on `e_1..e_{n+1}`, written out directly.
fn expected_products(kind: &RowKind, n: usize, field: FieldSpec) -> Vec<Vec<Vector>> {
    let d = n + 1;
    let mut sc = vec![vec![linalg::zero_vector(&field, d); d]; d];
    let mut put = |i: usize, j: usize, k: usize, c: Scalar| sc[i - 1][j - 1][k - 1] += &c;
    let one = field.one();
    for i in 1..=n {
        for j in 1..=n {
            let s = i + j;
            let keep = match kind {
                RowKind::TopDelta => s <= n,
                RowKind::Delta(k) => s <= n && (i, j) != (*k, 1),
                RowKind::NablaDelta(k) => s <= n + 1 && (i, j) != (*k, 1),
                RowKind::NablaMu(_) => s <= n + 1 && i != n,
            };
            if keep {
                put(i, j, s, one.clone());
            }
        }
    }
    match kind {
        RowKind::TopDelta => put(n, 1, n + 1, one),
        RowKind::Delta(k) | RowKind::NablaDelta(k) => {
            put(*k, 1, k + 1, one.clone());
            put(*k, 1, n + 1, one);
        }
        RowKind::NablaMu(mu) => put(n, 1, n + 1, &one + mu),
    }
    sc
}

fn compare(label: &str, got: &Algebra, expect: &[Vec<Vector>]) -> Result<()> {
    let d = expect.len();
    if got.dim() != d {
        return Err(Error::TableMismatch {
            row: label.to_string(),
            detail: format!("dimension {} instead of {d}", got.dim()),
        });
    }
    let show = |v: &Vector| {
        let terms: Vec<(Scalar, String)> = v
            .iter()
            .enumerate()
            .map(|(k, c)| (c.clone(), format!("e{}", k + 1)))
            .collect();
        format_form_expr(&terms)
    };
    for i in 0..d {
        for j in 0..d {
            let (g, e) = (got.basis_product(i, j), &expect[i][j]);
            if g != e {
                return Err(Error::TableMismatch {
                    row: label.to_string(),
                    detail: format!("e{}e{} = {}, table has {}", i + 1, j + 1, show(g), show(e)),
                });
            }
        }
    }
    Ok(())
}

fn check_flags(label: &str, ext: &ExtensionResult, two_dim: bool) -> Result<()> {
    let (ann, t1) = if two_dim { (2, false) } else { (1, true) };
    let ok = ext.non_split
        && ext.in_t1 == t1
        && ext.annihilator_dim == ann
        && ext.extended.annihilator().dim() == ann;
    if ok {
        Ok(())
    } else {
        Err(Error::TableMismatch {
            row: label.to_string(),
            detail: format!(
                "flags non_split={} in_T1={} annihilator_dim={}",
                ext.non_split, ext.in_t1, ext.annihilator_dim
            ),
        })
    }
}

/// Builds every row as a left commutative central extension of μ₀ⁿ and
/// checks products, variety membership (also bicommutative where the
/// cocycle is bicommutative) and splitness/annihilator flags. Stops at the
/// first mismatch.
pub fn build_table1(n: usize, field: FieldSpec, mu_sample: Option<&[Scalar]>) -> Result<Vec<Table1Row>> {
    table1_rows(n, field, mu_sample)?.into_iter().map(|(_, r)| r).collect()
}

/// Like [`build_table1`], but with an outcome per row.
pub fn table1_rows(
    n: usize,
    field: FieldSpec,
    mu_sample: Option<&[Scalar]>,
) -> Result<Vec<(String, Result<Table1Row>)>> {
    if n < 2 {
        return Err(Error::InvalidDim(n));
    }
    let a = Algebra::null_filiform(n, field)?;
    let lc = builtin_variety("left_commutative")?;
    let bc = builtin_variety("bicommutative")?;
    let h = second_cohomology(&a, &lc)?;
    let bc_space = crate::cohomology::cocycle_subspace(&a, &bc, crate::par::Exec::default())?;
    let sample = mu_sample.map_or_else(|| default_mu_sample(field), <[Scalar]>::to_vec);

    let mut rows: Vec<(RowKind, BilinearForm, bool)> = Vec::new();
    rows.push((RowKind::TopDelta, delta(n, 1, n, field)?, false));
    for k in 2..n {
        rows.push((RowKind::Delta(k), delta(k, 1, n, field)?, true));
    }
    for k in 2..n {
        let th = nabla(n, n, field)?.add(&delta(k, 1, n, field)?);
        rows.push((RowKind::NablaDelta(k), th, false));
    }
    for mu in sample {
        let th = nabla(n, n, field)?.add_scaled(&mu, &delta(n, 1, n, field)?);
        rows.push((RowKind::NablaMu(mu), th, false));
    }

    let verify = |kind: &RowKind, theta: &BilinearForm, two_dim: bool, label: &str| -> Result<Table1Row> {
        let ext = central_extension(&h, std::slice::from_ref(theta))?;
        compare(label, &ext.extended, &expected_products(kind, n, field))?;
        check_flags(label, &ext, two_dim)?;
        let mut varieties = Vec::new();
        for (v, must) in [(&lc, true), (&bc, bc_space.contains(&theta.to_vec()))] {
            let sat = ext.extended.satisfies_variety(v)?;
            if sat != must {
                return Err(Error::TableMismatch {
                    row: label.to_string(),
                    detail: format!("{} membership of the extension is {sat}, expected {must}", v.name),
                });
            }
            if sat {
                varieties.push(v.name.clone());
            }
        }
        Ok(Table1Row {
            label: label.to_string(),
            varieties,
            extension: ext,
        })
    };
    Ok(rows
        .iter()
        .map(|(kind, theta, two_dim)| {
            let label = theta_label(kind, n);
            let r = verify(kind, theta, *two_dim, &label);
            (label, r)
        })
        .collect())
}

fn theta_label(kind: &RowKind, n: usize) -> String {
    match kind {
        RowKind::TopDelta => format!("delta_{n}_1"),
        RowKind::Delta(k) => format!("delta_{k}_1"),
        RowKind::NablaDelta(k) => format!("nabla_{n} + delta_{k}_1"),
        RowKind::NablaMu(mu) => {
            let f = mu.field();
            format_form_expr(&[(f.one(), format!("nabla_{n}")), (mu.clone(), format!("delta_{n}_1"))])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::check_cocycle;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn labels(reps: &[PaperRep]) -> Vec<&str> {
        reps.iter().map(|r| r.label.as_str()).collect()
    }

    #[test]
    fn bicommutative_representatives() {
        let reps = paper_representatives("bc", 4, q(), None).unwrap();
        assert_eq!(labels(&reps), ["nabla_4", "nabla_4 + delta_2_1", "delta_2_1"]);
        assert!(reps[2].two_dim_annihilator && !reps[0].two_dim_annihilator);
        let reps = paper_representatives("bc", 2, q(), None).unwrap();
        assert_eq!(
            labels(&reps),
            ["delta_2_1", "nabla_2", "nabla_2 + delta_2_1", "nabla_2 - delta_2_1", "nabla_2 + 2*delta_2_1"]
        );
    }

    #[test]
    fn left_commutative_representatives() {
        let reps = paper_representatives("lc", 3, q(), Some(&[q().zero()])).unwrap();
        assert_eq!(labels(&reps), ["delta_3_1", "nabla_3", "nabla_3 + delta_2_1", "delta_2_1"]);
        assert_eq!(reps[1].note.as_deref(), Some("trivial extension mu0^4"));
        let reps = paper_representatives("lc", 2, q(), None).unwrap();
        assert_eq!(reps.len(), 5);
        assert!(reps.iter().all(|r| !r.two_dim_annihilator));
        assert!(matches!(
            paper_representatives("jordan", 3, q(), None),
            Err(Error::UnsupportedVariety(_))
        ));
    }

    #[test]
    fn representatives_are_cocycles() {
        for f in [q(), FieldSpec::prime(5).unwrap()] {
            for name in ["lc", "bc"] {
                let v = builtin_variety(name).unwrap();
                for n in 2..=5 {
                    let a = Algebra::null_filiform(n, f).unwrap();
                    let reps = paper_representatives(name, n, f, None).unwrap();
                    let h2 = paper_h2_representatives(name, n, f, None).unwrap();
                    for r in reps.iter().chain(&h2) {
                        check_cocycle(&a, &v, &r.form).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn h2_representatives() {
        let reps = paper_h2_representatives("bc", 3, q(), Some(&[q().zero(), q().one()])).unwrap();
        assert_eq!(labels(&reps), ["0", "delta_2_1", "nabla_3", "nabla_3 + delta_2_1"]);
        let reps = paper_h2_representatives("bc", 2, q(), Some(&[q().one()])).unwrap();
        assert_eq!(labels(&reps), ["0", "delta_2_1", "nabla_2 + delta_2_1"]);
        let reps = paper_h2_representatives("lc", 3, q(), Some(&[q().from_i64(2)])).unwrap();
        assert_eq!(
            labels(&reps),
            ["0", "delta_2_1", "delta_3_1", "nabla_3 + 2*delta_3_1", "nabla_3 + 2*delta_2_1"]
        );
    }

    #[test]
    fn table_rows() {
        let f = q();
        let rows = build_table1(3, f, None).unwrap();
        // Δ_{3,1}, Δ_{2,1}, ∇₃+Δ_{2,1}, four μ values
        assert_eq!(rows.len(), 7);
        let top = &rows[0].extension.extended;
        assert!(top.basis_product(2, 0)[3].is_one());
        let trivial = rows.iter().find(|r| r.label == "nabla_3").unwrap();
        assert!(trivial.extension.extended.is_null_filiform());
        assert!(trivial.varieties.contains(&"bicommutative".to_string()));
        let rows4 = build_table1(4, f, Some(&[])).unwrap();
        let r = rows4.iter().find(|r| r.label == "nabla_4 + delta_2_1").unwrap();
        let p = r.extension.extended.basis_product(1, 0);
        assert!(p[2].is_one() && p[4].is_one());
        assert!(r.varieties.contains(&"bicommutative".to_string()));
        let r = rows4.iter().find(|r| r.label == "nabla_4 + delta_3_1").unwrap();
        assert_eq!(r.varieties, ["left_commutative"]);
    }

    #[test]
    fn mismatch_names_product() {
        let f = q();
        let a = Algebra::null_filiform(3, f).unwrap();
        let err = compare("x", &a, &expected_products(&RowKind::TopDelta, 2, f)).unwrap_err();
        assert!(matches!(err, Error::TableMismatch { .. }));
        let ext = crate::extension::adjoin(&Algebra::null_filiform(3, f).unwrap(), &[nabla(3, 3, f).unwrap()]).unwrap();
        let err = compare("delta_3_1", &ext, &expected_products(&RowKind::TopDelta, 3, f)).unwrap_err();
        assert!(err.to_string().contains("e1e3"), "{err}");
    }
}
