//! Batch run of the checkable claims about μ₀ⁿ for `n = 2..=n_max`,
//! assembled into a deterministic pass/fail matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::cohomology::{
    cocycle_space, coboundary_subspace, is_cocycle, second_cohomology_with, BilinearForm, CohomologySpace,
};
use crate::error::{Error, Result};
use crate::extension::{adjoin, central_extension};
use crate::identity::{builtin_variety, CATALOG};
use crate::linalg::Subspace;
use crate::nullfiliform::{act_on_cocycle, delta, nabla, Automorphism};
use crate::orbits::{
    orbits_on_h2, orbits_on_t1, roots_of_unity_subgroup, OrbitOptions, DEFAULT_BUDGET,
};
use crate::par::Exec;
use crate::scalar::{random_scalar, FieldSpec};
use crate::table1::{build_table1, paper_representatives};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproduceConfig {
    pub budget: u128,
    pub n_max: usize,
    pub orbit_primes: Vec<u64>,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            n_max: 6,
            orbit_primes: vec![3, 5, 7],
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub detail: String,
    pub n: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub claim: String,
    pub n: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproduceReport {
    pub all_pass: bool,
    pub claims: Vec<ClaimResult>,
    pub config: ReproduceConfig,
    pub failed: usize,
    pub passed: usize,
    pub skipped: Vec<Skipped>,
}

type Outcome = std::result::Result<String, String>;

struct Collector {
    n: usize,
    claims: Vec<ClaimResult>,
    skipped: Vec<Skipped>,
}

impl Collector {
    fn record(&mut self, claim: &str, outcome: Outcome) {
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.claims.push(ClaimResult {
            claim: claim.to_string(),
            detail,
            n: self.n,
            pass,
        });
    }

    fn skip(&mut self, claim: &str, reason: String) {
        self.skipped.push(Skipped {
            claim: claim.to_string(),
            n: self.n,
            reason,
        });
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn span(f: FieldSpec, n: usize, forms: &[BilinearForm]) -> Subspace {
    let vs: Vec<_> = forms.iter().map(BilinearForm::to_vec).collect();
    Subspace::span(f, n * n, &vs)
}

fn nablas(n: usize, upto: usize, f: FieldSpec) -> Vec<BilinearForm> {
    (1..=upto).map(|j| nabla(j, n, f).expect("in range")).collect()
}

fn cohomology(a: &Algebra, name: &str, exec: Exec) -> std::result::Result<CohomologySpace, String> {
    second_cohomology_with(a, &builtin_variety(name).map_err(err)?, exec).map_err(err)
}

fn claims_for(n: usize, cfg: &ReproduceConfig) -> (Vec<ClaimResult>, Vec<Skipped>) {
    let q = FieldSpec::rationals();
    let exec = cfg.exec;
    let a = Algebra::null_filiform(n, q).expect("n >= 2");
    let mut c = Collector {
        n,
        claims: Vec::new(),
        skipped: Vec::new(),
    };
    let all_nablas = span(q, n, &nablas(n, n, q));

    c.record("associative: Z = span(nabla_j), dim B = n-1, H = <[nabla_n]>", (|| {
        let h = cohomology(&a, "associative", exec)?;
        check(*h.z_subspace() == all_nablas, || "Z differs from span(nabla_j)".into())?;
        check(*h.b_subspace() == span(q, n, &nablas(n, n - 1, q)), || "B differs".into())?;
        check(h.h_labels() == [format!("nabla_{n}")], || format!("H reps {:?}", h.h_labels()))?;
        Ok(format!("dimZ={} dimB={} dimH={}", h.dim_z(), h.dim_b(), h.dim_h()))
    })());

    c.record("left commutative: dim Z = 2n-1, dim H = n, basis delta_i_1 + nabla_n", (|| {
        let h = cohomology(&a, "left_commutative", exec)?;
        check(h.dim_z() == 2 * n - 1 && h.dim_h() == n, || format!("dimZ={} dimH={}", h.dim_z(), h.dim_h()))?;
        let mut expect: Vec<String> = (2..=n).map(|i| format!("delta_{i}_1")).collect();
        expect.push(format!("nabla_{n}"));
        check(h.h_labels() == expect.as_slice(), || format!("H reps {:?}", h.h_labels()))?;
        Ok(format!("dimZ={} dimH={}", h.dim_z(), h.dim_h()))
    })());

    c.record("bicommutative: dim Z = n+1, dim H = 2, basis delta_2_1 + nabla_n", (|| {
        let h = cohomology(&a, "bicommutative", exec)?;
        let mut gens = nablas(n, n, q);
        gens.push(delta(2, 1, n, q).map_err(err)?);
        check(*h.z_subspace() == span(q, n, &gens), || "Z differs from span(nabla_j, delta_2_1)".into())?;
        check(h.dim_h() == 2, || format!("dimH={}", h.dim_h()))?;
        check(h.h_labels() == ["delta_2_1".to_string(), format!("nabla_{n}")], || format!("H reps {:?}", h.h_labels()))?;
        Ok(format!("dimZ={} dimH={}", h.dim_z(), h.dim_h()))
    })());

    for (name, label) in [("left_alternative", "left alternative"), ("jordan", "Jordan")] {
        c.record(&format!("{label}: Z = span(nabla_j), dim H = 1"), (|| {
            let h = cohomology(&a, name, exec)?;
            check(*h.z_subspace() == all_nablas && h.dim_h() == 1, || format!("dimZ={} dimH={}", h.dim_z(), h.dim_h()))?;
            Ok(format!("dimZ={}", h.dim_z()))
        })());
    }

    c.record("alternative: Z inside left alternative Z, dim H = 1", (|| {
        let alt = cohomology(&a, "alternative", exec)?;
        let la = cohomology(&a, "left_alternative", exec)?;
        check(la.z_subspace().contains_subspace(alt.z_subspace()) && alt.dim_h() == 1, || "inclusion or dimension fails".into())?;
        Ok(format!("dimZ={}", alt.dim_z()))
    })());

    for (x, y) in [
        ("assosymmetric", "bicommutative"),
        ("novikov", "bicommutative"),
        ("left_symmetric", "left_commutative"),
    ] {
        c.record(&format!("Z_{x} = Z_{y}"), (|| {
            let zx = cocycle_space(&a, &builtin_variety(x).map_err(err)?).map_err(err)?;
            let zy = cocycle_space(&a, &builtin_variety(y).map_err(err)?).map_err(err)?;
            check(zx == zy, || "echelon bases differ".into())?;
            Ok(format!("dim {}", zx.len()))
        })());
    }

    c.record("coboundaries are cocycles for every catalog variety", (|| {
        let b = coboundary_subspace(&a);
        for name in CATALOG {
            let h = cohomology(&a, name, exec)?;
            check(h.z_subspace().contains_subspace(&b), || format!("B not inside Z_{name}"))?;
        }
        Ok(format!("{} varieties", CATALOG.len()))
    })());

    c.record("left commutative cocycles satisfy c_ij = c_1,i+j-1 (j >= 2)", (|| {
        let h = cohomology(&a, "left_commutative", exec)?;
        for th in h.z_basis() {
            for i in 0..n {
                for j in 1..n {
                    let ok = if i + j < n {
                        th.coeff(i, j) == th.coeff(0, i + j)
                    } else {
                        th.coeff(i, j).is_zero()
                    };
                    check(ok, || format!("fails at ({}, {}) for {th}", i + 1, j + 1))?;
                }
            }
        }
        Ok(format!("{} basis cocycles", h.dim_z()))
    })());

    c.record("extension by nabla_n is null-filiform of dimension n+1", (|| {
        let h = cohomology(&a, "associative", exec)?;
        let e = central_extension(&h, &[nabla(n, n, q).map_err(err)?]).map_err(err)?;
        let dims: Vec<usize> = (0..=n + 1).rev().collect();
        check(e.extended.is_null_filiform() && e.extended.power_dims() == dims, || "not null-filiform".into())?;
        Ok(format!("power dims {:?}", e.extended.power_dims()))
    })());

    c.record("[phi.nabla_n] = phi_11^(n+1) [nabla_n] in H_LC (randomized)", (|| {
        let h = cohomology(&a, "left_commutative", exec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 8));
        let top = nabla(n, n, q).map_err(err)?;
        let base = h.reduce_class(&top).map_err(err)?;
        let trials = 20;
        for _ in 0..trials {
            let phi = Automorphism::random(n, q, &mut rng);
            let got = h.reduce_class(&act_on_cocycle(&phi, &top).map_err(err)?).map_err(err)?;
            let s = phi.leading().pow(n as u64 + 1);
            let expect: Vec<_> = base.iter().map(|x| x * &s).collect();
            check(got == expect, || format!("fails for first column {:?}", phi.first_col()))?;
        }
        Ok(format!("{trials} automorphisms"))
    })());

    c.record("A_theta in V iff theta in Z_V (randomized, all catalog varieties)", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 16));
        let mut counts = (0, 0);
        for name in CATALOG {
            let v = builtin_variety(name).map_err(err)?;
            let h = second_cohomology_with(&a, &v, exec).map_err(err)?;
            for _ in 0..10 {
                let mut th = BilinearForm::zero(q, n);
                for z in h.z_basis() {
                    th = th.add_scaled(&random_scalar(&q, &mut rng, 3), z);
                }
                if rng.random_bool(0.5) {
                    let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
                    let bumped = th.coeff(i, j) + &random_scalar(&q, &mut rng, 3);
                    th.set_coeff(i, j, bumped);
                }
                let z = is_cocycle(&a, &v, &th).map_err(err)?;
                let member = adjoin(&a, std::slice::from_ref(&th)).map_err(err)?.satisfies_variety(&v).map_err(err)?;
                check(z == member, || format!("{name}: cocycle={z} member={member} for {th}"))?;
                if z {
                    counts.0 += 1;
                } else {
                    counts.1 += 1;
                }
            }
        }
        Ok(format!("{} cocycles, {} non-cocycles", counts.0, counts.1))
    })());

    c.record("Table 1 rows: products, varieties and flags", (|| {
        let rows = build_table1(n, q, None).map_err(err)?;
        Ok(format!("{} rows", rows.len()))
    })());

    for &p in &cfg.orbit_primes {
        let f = match FieldSpec::prime(p) {
            Ok(f) => f,
            Err(e) => {
                c.record(&format!("orbits over F{p}"), Err(err(e)));
                continue;
            }
        };
        let opts = OrbitOptions {
            budget: cfg.budget,
            exec,
            mu_sample: None,
        };
        for name in ["left_commutative", "bicommutative"] {
            let claim = format!("{name} T1 orbits over F{p}: paper lines in distinct orbits");
            let v = builtin_variety(name).expect("catalog");
            match orbits_on_t1(n, &v, f, &opts) {
                Err(Error::BudgetExceeded { needed, budget }) => {
                    c.skip(&claim, format!("needs {needed} > budget {budget}"));
                }
                Err(e) => c.record(&claim, Err(err(e))),
                Ok(r) => c.record(&claim, (|| {
                    check(r.closure_verified && r.sizes_partition_domain(), || "partition check failed".into())?;
                    let reps = paper_representatives(name, n, f, None).map_err(err)?;
                    let mut ids = std::collections::BTreeSet::new();
                    for rep in reps.iter().filter(|r| !r.two_dim_annihilator) {
                        let id = r.matched_paper_labels.get(&rep.label).ok_or_else(|| format!("{} outside T1", rep.label))?;
                        check(ids.insert(*id), || format!("{} shares an orbit", rep.label))?;
                    }
                    Ok(format!("{} lines, {} orbits", r.domain_size, r.orbits.len()))
                })()),
            }
        }

        if n >= 3 {
            let claim = format!("left_commutative H2 over F{p}: same orbit iff mu'/mu in R(i,n)");
            let lc = builtin_variety("left_commutative").expect("catalog");
            match orbits_on_h2(n, &lc, f, &opts) {
                Err(Error::BudgetExceeded { needed, budget }) => {
                    c.skip(&claim, format!("needs {needed} > budget {budget}"));
                }
                Err(e) => c.record(&claim, Err(err(e))),
                Ok(r) => c.record(&claim, (|| {
                    let a = Algebra::null_filiform(n, f).map_err(err)?;
                    let h = second_cohomology_with(&a, &lc, exec).map_err(err)?;
                    for i in 2..n {
                        let roots = roots_of_unity_subgroup(i, n, f).map_err(err)?;
                        let class = |mu: u64| -> std::result::Result<Vec<u64>, String> {
                            let th = nabla(n, n, f).map_err(err)?.add_scaled(&f.from_u64(mu), &delta(i, 1, n, f).map_err(err)?);
                            Ok(h.reduce_class(&th).map_err(err)?.iter().filter_map(|s| s.residue()).collect())
                        };
                        for mu in 1..p {
                            for nu in 1..p {
                                let same = r.same_orbit(&class(mu)?, &class(nu)?).ok_or("class outside H2")?;
                                check(same == roots.same_coset(mu, nu), || format!("i={i} mu={mu} mu'={nu}"))?;
                            }
                        }
                    }
                    Ok(format!("{} orbits on {} classes", r.orbits.len(), r.domain_size))
                })()),
            }
        }
    }
    (c.claims, c.skipped)
}

pub fn reproduce(cfg: &ReproduceConfig) -> Result<ReproduceReport> {
    if cfg.n_max < 2 {
        return Err(Error::InvalidDim(cfg.n_max));
    }
    for &p in &cfg.orbit_primes {
        FieldSpec::prime(p)?;
    }
    let per_n = cfg.exec.map_range(cfg.n_max - 1, |k| claims_for(k + 2, cfg));
    let mut claims = Vec::new();
    let mut skipped = Vec::new();
    for (c, s) in per_n {
        claims.extend(c);
        skipped.extend(s);
    }
    let passed = claims.iter().filter(|c| c.pass).count();
    let failed = claims.len() - passed;
    Ok(ReproduceReport {
        all_pass: failed == 0,
        claims,
        config: cfg.clone(),
        failed,
        passed,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_run() {
        let cfg = ReproduceConfig {
            n_max: 2,
            orbit_primes: vec![3],
            ..ReproduceConfig::default()
        };
        let r = reproduce(&cfg).unwrap();
        assert!(r.claims.len() >= 10, "{}", r.claims.len());
        assert!(r.all_pass, "{:#?}", r.claims.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        assert_eq!(r, reproduce(&cfg).unwrap());
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = ReproduceConfig {
            n_max: 1,
            ..ReproduceConfig::default()
        };
        assert!(reproduce(&cfg).is_err());
        let cfg = ReproduceConfig {
            orbit_primes: vec![4],
            ..ReproduceConfig::default()
        };
        assert!(matches!(reproduce(&cfg), Err(Error::CompositeModulus(4))));
    }
}
