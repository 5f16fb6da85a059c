//! Orbits of `Aut(μ₀ⁿ)` on `H²` and on the T₁ part of the Grassmannian of
//! lines in `H²`, by exhaustive enumeration over prime fields.
//!
//! Points of `H² ≅ F_p^d` are encoded as integers `Σ c_k p^{d−1−k}`, so the
//! numerically smallest member of an orbit is also its lexicographically
//! smallest coordinate vector.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::cohomology::{second_cohomology_with, CohomologySpace};
use crate::error::{Error, Result};
use crate::extension::joint_annihilator;
use crate::identity::VarietySpec;
use crate::linalg::Vector;
use crate::nullfiliform::{class_action_matrix, Automorphism};
use crate::par::Exec;
use crate::scalar::{mod_inv, mod_pow, FieldSpec, Scalar};
use crate::table1::{paper_h2_representatives, paper_representatives};

/// Default cap on `|Aut| · |domain|` (and on `|Aut|` alone).
pub const DEFAULT_BUDGET: u128 = 100_000_000;

pub const EXTRA_LABEL: &str = "extra (field-dependent)";

fn prime_of(field: FieldSpec) -> Result<u64> {
    field.order().ok_or(Error::InfiniteField)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `R(i, n)`: the `(i+1)`-st powers of the `(n+1)`-st roots of unity in `F_p*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSubgroup {
    pub i: usize,
    pub n: usize,
    pub p: u64,
    elements: Vec<u64>,
}

impl RootSubgroup {
    /// Sorted residues.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `|F_p* / R(i, n)|`.
    pub fn index(&self) -> u64 {
        (self.p - 1) / self.elements.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.p)).is_ok()
    }

    /// Whether `a` and `b` lie in the same coset, i.e. `b/a ∈ R(i, n)`.
    pub fn same_coset(&self, a: u64, b: u64) -> bool {
        match mod_inv(a % self.p, self.p) {
            Some(inv) if b % self.p != 0 => self.contains(b % self.p * inv % self.p),
            _ => false,
        }
    }

    pub fn is_subgroup(&self) -> bool {
        let p = self.p;
        self.contains(1)
            && self.elements.iter().all(|&a| {
                mod_inv(a, p).is_some_and(|inv| self.contains(inv))
                    && self.elements.iter().all(|&b| self.contains(a * b % p))
            })
    }
}

pub fn roots_of_unity_subgroup(i: usize, n: usize, field: FieldSpec) -> Result<RootSubgroup> {
    let p = prime_of(field)?;
    let mut elements: Vec<u64> = (1..p)
        .filter(|&x| mod_pow(x, n as u64 + 1, p) == 1)
        .map(|x| mod_pow(x, i as u64 + 1, p))
        .collect();
    elements.sort_unstable();
    elements.dedup();
    Ok(RootSubgroup { i, n, p, elements })
}

/// Sizes of the nonempty fibers of `a ↦ a^e` on `F_p*`, sorted.
pub fn power_map_fiber_sizes(e: u64, p: u64) -> Vec<usize> {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for a in 1..p {
        *counts.entry(mod_pow(a, e, p)).or_default() += 1;
    }
    let mut sizes: Vec<usize> = counts.into_values().collect();
    sizes.sort_unstable();
    sizes
}

/// Expected fiber size of `a ↦ a^e` on `F_p*`.
pub fn power_map_fiber_size(e: u64, p: u64) -> usize {
    gcd(e, p - 1) as usize
}

/// `(p − 1)·p^{n−1}`.
pub fn automorphism_count(n: usize, p: u64) -> u128 {
    (p as u128 - 1) * (p as u128).pow(n as u32 - 1)
}

fn column_of(index: usize, n: usize, p: u64) -> Vec<u64> {
    let tail = (p as usize).pow(n as u32 - 1);
    let mut col = vec![0; n];
    col[0] = 1 + (index / tail) as u64;
    let mut rest = index % tail;
    for k in (1..n).rev() {
        col[k] = (rest % p as usize) as u64;
        rest /= p as usize;
    }
    col
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Every automorphism of μ₀ⁿ over `F_p`, each exactly once, ordered by
/// `(φ_{1,1}, φ_{2,1}, …, φ_{n,1})`.
pub fn enumerate_automorphisms(n: usize, field: FieldSpec, budget: u128) -> Result<Vec<Automorphism>> {
    enumerate_automorphisms_with(n, field, budget, Exec::default())
}

pub fn enumerate_automorphisms_with(
    n: usize,
    field: FieldSpec,
    budget: u128,
    exec: Exec,
) -> Result<Vec<Automorphism>> {
    let p = prime_of(field)?;
    if n == 0 {
        return Err(Error::InvalidDim(0));
    }
    let count = automorphism_count(n, p);
    check_budget(count, budget)?;
    Ok(exec.map_range(count as usize, |idx| {
        let col: Vector = column_of(idx, n, p).into_iter().map(|c| field.from_u64(c)).collect();
        Automorphism::from_column(n, field, &col).expect("leading entry is nonzero")
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Domain {
    H2,
    T1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub labels: Vec<String>,
    pub members: Vec<Vec<u64>>,
    pub representative: Vec<u64>,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub closure_verified: bool,
    pub domain: Domain,
    pub domain_size: usize,
    pub field: FieldSpec,
    pub h_labels: Vec<String>,
    pub matched_paper_labels: BTreeMap<String, usize>,
    pub n: usize,
    pub num_automorphisms: usize,
    pub orbits: Vec<Orbit>,
    pub paper_labels_outside_domain: Vec<String>,
    pub variety: String,
    #[serde(skip)]
    assignment: Vec<u32>,
    #[serde(skip)]
    p: u64,
}

impl OrbitReport {
    /// Orbit containing the class (normalized first for lines).
    pub fn orbit_index(&self, coords: &[u64]) -> Option<usize> {
        let mut x: Vec<u64> = coords.iter().map(|c| c % self.p).collect();
        if self.domain == Domain::T1 && !normalize(&mut x, self.p) {
            return None;
        }
        let id = *self.assignment.get(encode(&x, self.p))?;
        (id != u32::MAX).then_some(id as usize)
    }

    pub fn same_orbit(&self, a: &[u64], b: &[u64]) -> Option<bool> {
        Some(self.orbit_index(a)? == self.orbit_index(b)?)
    }

    pub fn sizes_partition_domain(&self) -> bool {
        self.orbits.iter().map(|o| o.size).sum::<usize>() == self.domain_size
            && self.orbits.iter().all(|o| o.size == o.members.len())
    }

    /// Stable JSON (sorted keys); member lists only on request.
    pub fn to_json(&self, include_members: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !include_members {
            if let Some(orbits) = v.get_mut("orbits").and_then(|o| o.as_array_mut()) {
                for o in orbits {
                    o.as_object_mut().unwrap().remove("members");
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct OrbitOptions {
    pub budget: u128,
    pub exec: Exec,
    /// μ values for the named families; defaults to all of `F_p`.
    pub mu_sample: Option<Vec<Scalar>>,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
            mu_sample: None,
        }
    }
}

fn encode(x: &[u64], p: u64) -> usize {
    x.iter().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn decode(mut idx: usize, p: u64, out: &mut [u64]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % p as usize) as u64;
        idx /= p as usize;
    }
}

/// Scales so the first nonzero coordinate is 1; false for the zero vector.
fn normalize(x: &mut [u64], p: u64) -> bool {
    let Some(&lead) = x.iter().find(|&&c| c != 0) else {
        return false;
    };
    let inv = mod_inv(lead, p).expect("p is prime");
    for c in x.iter_mut() {
        *c = *c * inv % p;
    }
    true
}

struct ClassActions {
    p: u64,
    d: usize,
    /// Row-major `d × d` matrices, one per automorphism.
    mats: Vec<Vec<u64>>,
}

impl ClassActions {
    fn new(h: &CohomologySpace, auts: &[Automorphism], exec: Exec) -> Result<Self> {
        let p = prime_of(h.field())?;
        let mats = exec
            .map_slice(auts, |phi| {
                class_action_matrix(h, phi).map(|m| {
                    m.iter()
                        .flatten()
                        .map(|s| s.residue().expect("finite field"))
                        .collect()
                })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p, d: h.dim_h(), mats })
    }

    fn apply(&self, g: usize, x: &[u64], out: &mut [u64]) {
        let m = &self.mats[g];
        for (r, slot) in out.iter_mut().enumerate() {
            let row = &m[r * self.d..(r + 1) * self.d];
            *slot = row.iter().zip(x).fold(0, |acc, (a, b)| (acc + a * b) % self.p);
        }
    }

    fn image(&self, g: usize, idx: usize, lines: bool) -> usize {
        let mut x = vec![0; self.d];
        let mut y = vec![0; self.d];
        decode(idx, self.p, &mut x);
        self.apply(g, &x, &mut y);
        if lines {
            normalize(&mut y, self.p);
        }
        encode(&y, self.p)
    }
}

#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    /// The smaller root survives, so roots are component minima.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    fn absorb(mut self, mut other: UnionFind) -> UnionFind {
        for x in 0..self.parent.len() as u32 {
            let r = other.find(x);
            if r != x {
                self.union(x, r);
            }
        }
        self
    }
}

/// Orbit roots (positions in `domain`) plus whether the domain is stable
/// and every orbit is closed under every automorphism.
fn partition(
    domain: &[usize],
    pos: &[u32],
    n_auts: usize,
    image: &(dyn Fn(usize, usize) -> usize + Sync),
    exec: Exec,
) -> (Vec<u32>, bool) {
    let len = domain.len();
    let (mut uf, stable) = exec.fold_range(
        n_auts,
        || (UnionFind::new(len), true),
        |(mut uf, mut ok), g| {
            for (x, &pt) in domain.iter().enumerate() {
                let py = pos[image(g, pt)];
                if py == u32::MAX {
                    ok = false;
                } else {
                    uf.union(x as u32, py);
                }
            }
            (uf, ok)
        },
        |(a, oka), (b, okb)| (a.absorb(b), oka && okb),
    );
    let roots: Vec<u32> = (0..len as u32).map(|x| uf.find(x)).collect();
    let closed = stable
        && exec.all_range(n_auts, |g| {
            domain.iter().enumerate().all(|(x, &pt)| {
                let py = pos[image(g, pt)];
                py != u32::MAX && roots[py as usize] == roots[x]
            })
        });
    (roots, closed)
}

fn residues(v: &[Scalar]) -> Vec<u64> {
    v.iter().map(|s| s.residue().expect("finite field")).collect()
}

/// Orbits of `Aut(μ₀ⁿ)` on all of `H²_V(μ₀ⁿ, F_p)`.
pub fn orbits_on_h2(n: usize, variety: &VarietySpec, field: FieldSpec, opts: &OrbitOptions) -> Result<OrbitReport> {
    classify(n, variety, field, opts, Domain::H2)
}

/// Orbits of `Aut(μ₀ⁿ)` on the lines `⟨[θ]⟩` with `Ann(μ₀ⁿ) ∩ Ann(θ) = 0`.
pub fn orbits_on_t1(n: usize, variety: &VarietySpec, field: FieldSpec, opts: &OrbitOptions) -> Result<OrbitReport> {
    classify(n, variety, field, opts, Domain::T1)
}

fn classify(n: usize, variety: &VarietySpec, field: FieldSpec, opts: &OrbitOptions, which: Domain) -> Result<OrbitReport> {
    let p = prime_of(field)?;
    let exec = opts.exec;
    let a = Algebra::null_filiform(n, field)?;
    let h = second_cohomology_with(&a, variety, exec)?;
    let d = h.dim_h();
    let points = (p as u128).pow(d as u32);
    check_budget(automorphism_count(n, p) * points, opts.budget)?;
    let auts = enumerate_automorphisms_with(n, field, opts.budget, exec)?;
    let actions = ClassActions::new(&h, &auts, exec)?;
    let lines = which == Domain::T1;

    let total = points as usize;
    let keep = exec.map_range(total, |idx| {
        if !lines {
            return true;
        }
        let mut x = vec![0; d];
        decode(idx, p, &mut x);
        if x.iter().find(|&&c| c != 0) != Some(&1) {
            return false;
        }
        let coords: Vec<Scalar> = x.iter().map(|&c| field.from_u64(c)).collect();
        let rep = h.representative(&coords);
        joint_annihilator(&a, &[rep]).expect("shapes match").is_zero()
    });
    let domain: Vec<usize> = (0..total).filter(|&i| keep[i]).collect();
    let mut pos = vec![u32::MAX; total];
    for (k, &pt) in domain.iter().enumerate() {
        pos[pt] = k as u32;
    }
    let image = |g: usize, idx: usize| actions.image(g, idx, lines);
    let (roots, closed) = partition(&domain, &pos, auts.len(), &image, exec);

    let mut orbit_of_root: BTreeMap<u32, usize> = BTreeMap::new();
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut assignment = vec![u32::MAX; total];
    for (k, &pt) in domain.iter().enumerate() {
        let next = orbits.len();
        let id = *orbit_of_root.entry(roots[k]).or_insert(next);
        if id == next {
            let mut rep = vec![0; d];
            decode(pt, p, &mut rep);
            orbits.push(Orbit {
                labels: Vec::new(),
                members: Vec::new(),
                representative: rep,
                size: 0,
            });
        }
        let mut x = vec![0; d];
        decode(pt, p, &mut x);
        orbits[id].members.push(x);
        orbits[id].size += 1;
        assignment[pt] = id as u32;
    }

    let mut report = OrbitReport {
        closure_verified: closed,
        domain: which,
        domain_size: domain.len(),
        field,
        h_labels: h.h_labels().to_vec(),
        matched_paper_labels: BTreeMap::new(),
        n,
        num_automorphisms: auts.len(),
        orbits,
        paper_labels_outside_domain: Vec::new(),
        variety: variety.name.clone(),
        assignment,
        p,
    };

    let mu = opts.mu_sample.as_deref();
    let reps = match which {
        Domain::H2 => paper_h2_representatives(&variety.name, n, field, mu),
        Domain::T1 => paper_representatives(&variety.name, n, field, mu),
    };
    if let Ok(reps) = reps {
        for r in reps {
            let coords = residues(&h.reduce_class(&r.form)?);
            match report.orbit_index(&coords) {
                Some(id) => {
                    report.orbits[id].labels.push(r.label.clone());
                    report.matched_paper_labels.insert(r.label, id);
                }
                None => report.paper_labels_outside_domain.push(r.label),
            }
        }
        for o in &mut report.orbits {
            if o.labels.is_empty() {
                o.labels.push(EXTRA_LABEL.to_string());
            }
        }
    }
    Ok(report)
}

/// Exhaustive search for an isomorphism `a → b` over a prime field; the
/// result's columns are the images of the basis of `a`.
pub fn find_isomorphism(a: &Algebra, b: &Algebra, budget: u128, exec: Exec) -> Result<Option<Vec<Vector>>> {
    let field = a.field();
    let p = prime_of(field)?;
    if b.field() != field {
        return Err(Error::FieldMismatch(field.to_string(), b.field().to_string()));
    }
    let d = a.dim();
    if b.dim() != d {
        return Ok(None);
    }
    let total = (p as u128).pow((d * d) as u32);
    check_budget(total, budget)?;
    let table = |alg: &Algebra| -> Vec<u64> {
        let mut t = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                for (k, c) in alg.basis_product(i, j).iter().enumerate() {
                    t[(i * d + j) * d + k] = c.residue().expect("finite field");
                }
            }
        }
        t
    };
    let (ta, tb) = (table(a), table(b));
    // Split by the first column so each task scans p^{d(d-1)} matrices.
    let per_task = (p as usize).pow((d * (d - 1)) as u32);
    let tasks = (p as usize).pow(d as u32);
    let found = exec.map_range(tasks, |t| {
        let mut m = vec![0u64; d * d]; // column-major: m[c*d + r]
        for local in 0..per_task {
            decode(t * per_task + local, p, &mut m);
            if is_hom(&m, &ta, &tb, d, p) && invertible(&m, d, p) {
                return Some(m);
            }
        }
        None
    });
    Ok(found.into_iter().flatten().next().map(|m| {
        (0..d)
            .map(|r| (0..d).map(|c| field.from_u64(m[c * d + r])).collect())
            .collect()
    }))
}

fn is_hom(m: &[u64], ta: &[u64], tb: &[u64], d: usize, p: u64) -> bool {
    let col = |c: usize| &m[c * d..(c + 1) * d];
    for i in 0..d {
        for j in 0..d {
            let (x, y) = (col(i), col(j));
            for r in 0..d {
                let mut lhs = 0;
                for k in 0..d {
                    lhs = (lhs + ta[(i * d + j) * d + k] * col(k)[r]) % p;
                }
                let mut rhs = 0;
                for s in 0..d {
                    if x[s] == 0 {
                        continue;
                    }
                    for t in 0..d {
                        rhs = (rhs + x[s] * y[t] % p * tb[(s * d + t) * d + r]) % p;
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

fn invertible(m: &[u64], d: usize, p: u64) -> bool {
    let mut a = m.to_vec();
    let mut row = 0;
    for c in 0..d {
        let Some(piv) = (row..d).find(|&r| a[c * d + r] != 0) else {
            return false;
        };
        for k in 0..d {
            a.swap(k * d + row, k * d + piv);
        }
        let inv = mod_inv(a[c * d + row], p).expect("p is prime");
        for r in 0..d {
            if r != row && a[c * d + r] != 0 {
                let f = a[c * d + r] * inv % p;
                for k in 0..d {
                    a[k * d + r] = (a[k * d + r] + (p - f) * a[k * d + row]) % p;
                }
            }
        }
        row += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::builtin_variety;
    use crate::nullfiliform::is_automorphism;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn root_subgroups() {
        let r = roots_of_unity_subgroup(2, 4, fp(5)).unwrap();
        assert_eq!(r.elements(), [1]);
        assert_eq!(r.index(), 4);
        // 4th roots of unity in F_13 are {1, 5, 8, 12}; cubes {1, 8, 5, 12}.
        let r = roots_of_unity_subgroup(2, 3, fp(13)).unwrap();
        assert_eq!(r.elements(), [1, 5, 8, 12]);
        assert!(r.is_subgroup());
        assert_eq!(r.index(), 3);
        for n in 1..6 {
            assert_eq!(roots_of_unity_subgroup(n, n, fp(7)).unwrap().elements(), [1]);
        }
        assert!(matches!(
            roots_of_unity_subgroup(2, 3, FieldSpec::rationals()),
            Err(Error::InfiniteField)
        ));
    }

    #[test]
    fn automorphism_enumeration() {
        assert_eq!(enumerate_automorphisms(2, fp(3), DEFAULT_BUDGET).unwrap().len(), 6);
        let auts = enumerate_automorphisms(3, fp(5), DEFAULT_BUDGET).unwrap();
        assert_eq!(auts.len(), 100);
        let distinct: std::collections::HashSet<_> = auts.iter().map(|a| a.first_col().to_vec()).collect();
        assert_eq!(distinct.len(), 100);
        let a = Algebra::null_filiform(3, fp(5)).unwrap();
        assert!(auts.iter().all(|phi| is_automorphism(&a, phi.matrix())));
        assert!(matches!(
            enumerate_automorphisms(3, fp(5), 99),
            Err(Error::BudgetExceeded { needed: 100, budget: 99 })
        ));
    }

    #[test]
    fn encoding_orders_lexicographically() {
        let p = 5;
        let mut prev: Option<Vec<u64>> = None;
        for idx in 0..125 {
            let mut x = vec![0; 3];
            decode(idx, p, &mut x);
            assert_eq!(encode(&x, p), idx);
            if let Some(q) = prev {
                assert!(q < x);
            }
            prev = Some(x);
        }
    }

    #[test]
    fn bicommutative_n2_over_f5() {
        let bc = builtin_variety("bc").unwrap();
        let r = orbits_on_h2(2, &bc, fp(5), &OrbitOptions::default()).unwrap();
        assert!(r.closure_verified && r.sizes_partition_domain());
        assert_eq!(r.domain_size, 25);
        assert_eq!(r.orbits[0].members, vec![vec![0, 0]]);
        assert_eq!(r.orbits[0].labels, ["0"]);
        for label in ["delta_2_1", "nabla_2", "nabla_2 + delta_2_1"] {
            assert!(r.matched_paper_labels.contains_key(label), "{label}");
        }
    }

    #[test]
    fn orbit_sizes_partition() {
        let lc = builtin_variety("lc").unwrap();
        let r = orbits_on_h2(3, &lc, fp(5), &OrbitOptions::default()).unwrap();
        assert_eq!(r.orbits.iter().map(|o| o.size).sum::<usize>(), 125);
        assert!(r.closure_verified);
        let t = orbits_on_t1(2, &lc, fp(3), &OrbitOptions::default()).unwrap();
        assert!(t.closure_verified && t.sizes_partition_domain());
    }

    #[test]
    fn strategies_agree() {
        let lc = builtin_variety("lc").unwrap();
        let seq = OrbitOptions {
            exec: Exec::Sequential,
            ..OrbitOptions::default()
        };
        let a = orbits_on_t1(3, &lc, fp(5), &seq).unwrap();
        let b = orbits_on_t1(3, &lc, fp(5), &OrbitOptions::default()).unwrap();
        assert_eq!(a.to_json(true), b.to_json(true));
    }

    #[test]
    fn t1_excludes_two_dim_annihilator_lines() {
        let bc = builtin_variety("bc").unwrap();
        let r = orbits_on_t1(3, &bc, fp(5), &OrbitOptions::default()).unwrap();
        assert!(r.matched_paper_labels.contains_key("nabla_3"));
        assert!(r.matched_paper_labels.contains_key("nabla_3 + delta_2_1"));
        assert_eq!(r.paper_labels_outside_domain, ["delta_2_1"]);
    }

    #[test]
    fn budget_guard() {
        let lc = builtin_variety("lc").unwrap();
        let opts = OrbitOptions {
            budget: 10,
            ..OrbitOptions::default()
        };
        assert!(matches!(
            orbits_on_h2(3, &lc, fp(3), &opts),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            orbits_on_h2(3, &lc, FieldSpec::rationals(), &OrbitOptions::default()),
            Err(Error::InfiniteField)
        ));
    }

    #[test]
    fn fiber_sizes() {
        for p in [3u64, 5, 7, 11, 13] {
            for e in 1..8 {
                let sizes = power_map_fiber_sizes(e, p);
                assert!(sizes.iter().all(|&s| s == power_map_fiber_size(e, p)), "e={e} p={p}");
            }
        }
    }

    #[test]
    fn isomorphism_search() {
        let f = fp(3);
        let a = Algebra::null_filiform(2, f).unwrap();
        let mut b = Algebra::zero(2, f).unwrap();
        b.set_product(1, 1, vec![f.from_u64(2), f.zero()]);
        let iso = find_isomorphism(&a, &b, DEFAULT_BUDGET, Exec::default()).unwrap().unwrap();
        // φ(e_1)φ(e_1) = φ(e_2).
        let cols = crate::linalg::transpose(&iso);
        assert_eq!(b.multiply(&cols[0], &cols[0]).unwrap(), cols[1]);
        let z = Algebra::zero(2, f).unwrap();
        assert!(find_isomorphism(&a, &z, DEFAULT_BUDGET, Exec::default()).unwrap().is_none());
    }
}
