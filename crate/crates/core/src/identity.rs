//! Nonassociative polynomial identities: a small text DSL, signed binary-tree
//! monomials, multilinearization by polarization, and the built-in catalog
//! of varieties.
//!
//! Grammar (products must be fully parenthesized, `*` has no associativity):
//!
//! ```text
//! identity := side ('=' side)+
//! side     := '0' | ['+'|'-'] term (('+'|'-') term)*
//! term     := [INT ['*']] monomial
//! monomial := factor ['*' factor]
//! factor   := IDENT | '(' monomial ')'
//! ```
//!
//! `a = b` means `a - b = 0`; a chain `a = b = c` yields `a - b = 0` and
//! `a - c = 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Binary product tree; leaves index into the owning schema's variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Var(usize),
    Mul(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn mul(l: Tree, r: Tree) -> Tree {
        Tree::Mul(Box::new(l), Box::new(r))
    }

    pub fn degree(&self) -> usize {
        match self {
            Tree::Var(_) => 1,
            Tree::Mul(l, r) => l.degree() + r.degree(),
        }
    }

    /// Variable indices in left-to-right leaf order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Var(v) => out.push(*v),
            Tree::Mul(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// The two factors of a product, `None` for a leaf.
    pub fn factors(&self) -> Option<(&Tree, &Tree)> {
        match self {
            Tree::Var(_) => None,
            Tree::Mul(l, r) => Some((l, r)),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(usize) -> usize) -> Tree {
        match self {
            Tree::Var(v) => Tree::Var(f(*v)),
            Tree::Mul(l, r) => Tree::mul(l.map_vars(f), r.map_vars(f)),
        }
    }

    /// Evaluates the tree with the given leaf values and product.
    pub fn eval<T: Clone>(&self, leaves: &[T], mul: &mut impl FnMut(&T, &T) -> T) -> T {
        match self {
            Tree::Var(v) => leaves[*v].clone(),
            Tree::Mul(l, r) => {
                let a = l.eval(leaves, mul);
                let b = r.eval(leaves, mul);
                mul(&a, &b)
            }
        }
    }

    fn write(&self, names: &[String], top: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Var(v) => write!(f, "{}", names[*v]),
            Tree::Mul(l, r) => {
                if !top {
                    write!(f, "(")?;
                }
                l.write(names, false, f)?;
                write!(f, "*")?;
                r.write(names, false, f)?;
                if !top {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: i64,
    pub tree: Tree,
}

/// `Σ coeff_j · p_j = 0` over the listed variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdentitySchema {
    variables: Vec<String>,
    monomials: Vec<Monomial>,
}

impl IdentitySchema {
    /// Combines like monomials, drops zero terms and renumbers variables by
    /// first appearance.
    pub fn new(names: &[String], terms: Vec<Monomial>) -> Result<Self> {
        let mut combined: Vec<Monomial> = Vec::new();
        for t in terms {
            match combined.iter_mut().find(|m| m.tree == t.tree) {
                Some(m) => m.coeff += t.coeff,
                None => combined.push(t),
            }
        }
        combined.retain(|m| m.coeff != 0);
        if combined.is_empty() {
            return Err(Error::TrivialIdentity);
        }
        let mut order: Vec<usize> = Vec::new();
        for m in &combined {
            for v in m.tree.leaves() {
                if !order.contains(&v) {
                    order.push(v);
                }
            }
        }
        let monomials = combined
            .into_iter()
            .map(|m| Monomial {
                coeff: m.coeff,
                tree: m
                    .tree
                    .map_vars(&mut |v| order.iter().position(|&o| o == v).unwrap()),
            })
            .collect();
        let variables = order.iter().map(|&v| names[v].clone()).collect();
        Ok(Self {
            variables,
            monomials,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.tree.degree()).max().unwrap_or(0)
    }

    /// Occurrences of each variable in a monomial.
    fn multidegree(&self, tree: &Tree) -> Vec<usize> {
        let mut d = vec![0; self.variables.len()];
        for v in tree.leaves() {
            d[v] += 1;
        }
        d
    }

    pub fn is_multilinear(&self) -> bool {
        self.monomials
            .iter()
            .all(|m| self.multidegree(&m.tree).iter().all(|&c| c == 1))
    }
}

impl fmt::Display for IdentitySchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.monomials.iter().enumerate() {
            let c = m.coeff;
            match (i, c < 0) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            m.tree.write(&self.variables, true, f)?;
        }
        write!(f, " = 0")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    Eq,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let single = match c {
            '*' => Some(Tok::Star),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            let v = s.parse().map_err(|_| Error::Syntax {
                pos,
                msg: format!("integer `{s}` out of range"),
            })?;
            out.push((pos, Tok::Int(v)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'')
            {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|c| c.1).collect())));
        } else {
            return Err(Error::Syntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    names: Vec<String>,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn var(&mut self, name: String) -> Tree {
        let idx = match self.names.iter().position(|n| *n == name) {
            Some(i) => i,
            None => {
                self.names.push(name);
                self.names.len() - 1
            }
        };
        Tree::Var(idx)
    }

    fn factor(&mut self) -> Result<Tree> {
        match self.bump() {
            Some(Tok::Ident(name)) => Ok(self.var(name)),
            Some(Tok::LParen) => {
                let m = self.monomial()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(m),
                    _ => {
                        self.at -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            _ => {
                self.at -= 1;
                self.err("expected a variable or `(`")
            }
        }
    }

    fn monomial(&mut self) -> Result<Tree> {
        let l = self.factor()?;
        if self.peek() != Some(&Tok::Star) {
            return Ok(l);
        }
        self.bump();
        let r = self.factor()?;
        if self.peek() == Some(&Tok::Star) {
            return self.err("nested products must be parenthesized");
        }
        Ok(Tree::mul(l, r))
    }

    fn term(&mut self, sign: i64, out: &mut Vec<Monomial>) -> Result<()> {
        let start = self.pos();
        let mut coeff = sign;
        if let Some(Tok::Int(c)) = self.peek().cloned() {
            self.bump();
            coeff *= c;
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {}
                _ if c == 0 => return Ok(()),
                _ => return self.err("constant terms are not allowed"),
            }
        }
        let tree = self.monomial()?;
        if tree.degree() < 2 {
            let stop = self.pos().min(self.text.len());
            return Err(Error::Degree(self.text[start..stop].trim().to_string()));
        }
        out.push(Monomial { coeff, tree });
        Ok(())
    }

    fn side(&mut self) -> Result<Vec<Monomial>> {
        let mut out = Vec::new();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                sign = -1;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        self.term(sign, &mut out)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    self.term(1, &mut out)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    self.term(-1, &mut out)?;
                }
                _ => return Ok(out),
            }
        }
    }
}

/// Parses an identity (or chain of equalities) into one schema per
/// equation.
pub fn parse_identities(text: &str) -> Result<Vec<IdentitySchema>> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        names: Vec::new(),
        text,
    };
    let mut sides = vec![p.side()?];
    while p.peek() == Some(&Tok::Eq) {
        p.bump();
        sides.push(p.side()?);
    }
    if p.at < p.toks.len() {
        return p.err("unexpected token");
    }
    if sides.len() < 2 {
        return p.err("expected `=`");
    }
    let first = &sides[0];
    sides[1..]
        .iter()
        .map(|rhs| {
            let mut terms = first.clone();
            terms.extend(rhs.iter().map(|m| Monomial {
                coeff: -m.coeff,
                tree: m.tree.clone(),
            }));
            IdentitySchema::new(&p.names, terms)
        })
        .collect()
}

/// Parses a single two-sided identity.
pub fn parse_identity(text: &str) -> Result<IdentitySchema> {
    let mut ids = parse_identities(text)?;
    if ids.len() != 1 {
        return Err(Error::Syntax {
            pos: 0,
            msg: format!("expected one equation, found a chain of {}", ids.len()),
        });
    }
    Ok(ids.pop().unwrap())
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn fresh_names(base: &str, count: usize, taken: &BTreeSet<String>) -> Vec<String> {
    let mut sep = String::new();
    loop {
        let names: Vec<String> = (1..=count).map(|k| format!("{base}{sep}{k}")).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
        sep.push('_');
    }
}

/// Full polarization: splits the identity into multihomogeneous components,
/// replaces each variable of multiplicity `m` by `m` fresh variables and keeps
/// the component in which every fresh variable occurs exactly once.
pub fn multilinearize(id: &IdentitySchema) -> Vec<IdentitySchema> {
    let mut components: BTreeMap<Vec<usize>, Vec<Monomial>> = BTreeMap::new();
    let mut order: Vec<Vec<usize>> = Vec::new();
    for m in &id.monomials {
        let d = id.multidegree(&m.tree);
        if !components.contains_key(&d) {
            order.push(d.clone());
        }
        components.entry(d).or_default().push(m.clone());
    }
    let taken: BTreeSet<String> = id.variables.iter().cloned().collect();
    let mut out = Vec::new();
    for degs in order {
        let terms = &components[&degs];
        // New variable table: variable v becomes names[slots[v]..slots[v]+degs[v]].
        let mut names: Vec<String> = Vec::new();
        let mut slots = Vec::with_capacity(degs.len());
        for (v, &m) in degs.iter().enumerate() {
            slots.push(names.len());
            if m == 1 {
                names.push(id.variables[v].clone());
            } else if m > 1 {
                names.extend(fresh_names(&id.variables[v], m, &taken));
            }
        }
        let perms: Vec<Vec<Vec<usize>>> = degs.iter().map(|&m| permutations(m)).collect();
        let mut new_terms = Vec::new();
        for t in terms {
            // Iterate over the product of per-variable permutations.
            let mut choice = vec![0usize; degs.len()];
            loop {
                let mut seen = vec![0usize; degs.len()];
                let tree = t.tree.map_vars(&mut |v| {
                    let k = seen[v];
                    seen[v] += 1;
                    slots[v] + perms[v][choice[v]][k]
                });
                new_terms.push(Monomial {
                    coeff: t.coeff,
                    tree,
                });
                let mut idx = 0;
                loop {
                    if idx == degs.len() {
                        break;
                    }
                    choice[idx] += 1;
                    if choice[idx] < perms[idx].len() {
                        break;
                    }
                    choice[idx] = 0;
                    idx += 1;
                }
                if idx == degs.len() {
                    break;
                }
            }
        }
        if let Ok(s) = IdentitySchema::new(&names, new_terms) {
            out.push(s);
        }
    }
    out
}

/// A variety: its defining identities, their multilinearizations and the
/// characteristics it refuses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    pub name: String,
    pub identities: Vec<IdentitySchema>,
    pub multilinear_identities: Vec<IdentitySchema>,
    pub min_char_exclusions: BTreeSet<u64>,
}

impl VarietySpec {
    pub fn from_identities(
        name: &str,
        identities: Vec<IdentitySchema>,
        exclusions: impl IntoIterator<Item = u64>,
    ) -> Self {
        let multilinear_identities = identities.iter().flat_map(multilinearize).collect();
        Self {
            name: name.to_string(),
            identities,
            multilinear_identities,
            min_char_exclusions: exclusions.into_iter().collect(),
        }
    }

    pub fn parse(name: &str, texts: &[&str], exclusions: &[u64]) -> Result<Self> {
        let mut ids = Vec::new();
        for t in texts {
            ids.extend(parse_identities(t)?);
        }
        Ok(Self::from_identities(name, ids, exclusions.iter().copied()))
    }

    /// Multilinear identities are valid in every characteristic; any other
    /// identity needs `char = 0` or `char > degree`, and excluded primes are
    /// always refused.
    pub fn check_characteristic(&self, char: u64) -> Result<()> {
        if char == 0 {
            return Ok(());
        }
        let too_small = self.min_char_exclusions.contains(&char)
            || self
                .identities
                .iter()
                .any(|id| !id.is_multilinear() && (char as usize) <= id.degree());
        if too_small {
            return Err(Error::CharTooSmall {
                variety: self.name.clone(),
                char,
            });
        }
        Ok(())
    }
}

pub const CATALOG: [&str; 10] = [
    "associative",
    "left_alternative",
    "alternative",
    "jordan",
    "left_commutative",
    "right_commutative",
    "bicommutative",
    "assosymmetric",
    "novikov",
    "left_symmetric",
];

const ASSOC: &str = "(x*y)*z = x*(y*z)";
const LEFT_ALT: &str = "x*(x*y) = (x*x)*y";
const RIGHT_ALT: &str = "(x*y)*y = x*(y*y)";
const COMM: &str = "x*y = y*x";
const JORDAN: &str = "(x*x)*(y*x) = ((x*x)*y)*x";
const LEFT_COMM: &str = "x*(y*z) = y*(x*z)";
const RIGHT_COMM: &str = "(x*y)*z = (x*z)*y";
const ASSOSYM: &str = "(x*y)*z - x*(y*z) = (y*x)*z - y*(x*z) = (x*z)*y - x*(z*y)";
const LEFT_SYM: &str = "(x*y)*z - x*(y*z) = (y*x)*z - y*(x*z)";

pub fn canonical_variety_name(name: &str) -> Option<&'static str> {
    let n = name.trim().to_ascii_lowercase().replace('-', "_");
    let canon = match n.as_str() {
        "as" | "assoc" => "associative",
        "la" | "al" => "left_alternative",
        "alt" => "alternative",
        "j" => "jordan",
        "lc" => "left_commutative",
        "rc" => "right_commutative",
        "bc" => "bicommutative",
        "asym" => "assosymmetric",
        "nov" => "novikov",
        "ls" | "lsym" => "left_symmetric",
        other => CATALOG.iter().copied().find(|c| *c == other)?,
    };
    Some(canon)
}

/// Catalog lookup; short aliases such as `lc`, `bc`, `as` are accepted.
pub fn builtin_variety(name: &str) -> Result<VarietySpec> {
    let canon = canonical_variety_name(name).ok_or_else(|| Error::UnknownVariety(name.to_string()))?;
    let (texts, excl): (&[&str], &[u64]) = match canon {
        "associative" => (&[ASSOC], &[]),
        "left_alternative" => (&[LEFT_ALT], &[2]),
        "alternative" => (&[LEFT_ALT, RIGHT_ALT], &[2]),
        "jordan" => (&[COMM, JORDAN], &[2, 3]),
        "left_commutative" => (&[LEFT_COMM], &[]),
        "right_commutative" => (&[RIGHT_COMM], &[]),
        "bicommutative" => (&[LEFT_COMM, RIGHT_COMM], &[]),
        "assosymmetric" => (&[ASSOSYM], &[]),
        "novikov" => (&[RIGHT_COMM, LEFT_SYM], &[]),
        "left_symmetric" => (&[LEFT_SYM], &[]),
        _ => unreachable!(),
    };
    VarietySpec::parse(canon, texts, excl)
}
