use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use cext_core::cohomology::{second_cohomology, BilinearForm};
use cext_core::extension::central_extension;
use cext_core::identity::{builtin_variety, CATALOG};
use cext_core::nullfiliform::{act_on_cocycle, parse_form_expr, Automorphism};
use cext_core::orbits::{orbits_on_h2, orbits_on_t1, OrbitOptions, DEFAULT_BUDGET};
use cext_core::reproduce::{reproduce, ReproduceConfig};
use cext_core::table1::table1_rows;
use cext_core::{Algebra, FieldSpec, Scalar, VarietySpec};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cext", version, about = "Central extensions of null-filiform algebras")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the variety catalog with raw and multilinearized identities.
    Identities {
        /// Optional `list` keyword.
        #[arg(value_parser = ["list"])]
        action: Option<String>,
        #[arg(long)]
        variety: Option<String>,
    },
    /// Z², B² and H² of an algebra for a variety.
    Cohomology {
        /// JSON algebra file or `mu0:<n>`.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        variety: String,
        #[arg(long)]
        field: Option<FieldSpec>,
    },
    /// Central extension by one or more cocycles.
    Extend {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        variety: String,
        #[arg(long)]
        field: Option<FieldSpec>,
        /// JSON matrix (inline or file), `named:<form>` or `expr:<expression>`.
        #[arg(long, required = true)]
        cocycle: Vec<String>,
    },
    /// Automorphism of μ₀ⁿ with the given first column.
    Aut {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        /// Comma-separated c1,…,cn.
        #[arg(long)]
        col: String,
    },
    /// Action φ·θ of an automorphism on a cocycle, with H²-coordinates.
    Act {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        col: String,
        #[arg(long, default_value = "left_commutative")]
        variety: String,
    },
    /// Aut(μ₀ⁿ)-orbits on T₁ (or on H² with --grassmann) over F_p.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        variety: String,
        #[arg(long)]
        field: FieldSpec,
        /// Orbits on points of H² instead of T₁ lines.
        #[arg(long)]
        grassmann: bool,
        #[arg(long, env = "CEXT_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Include orbit members in the report.
        #[arg(long)]
        members: bool,
    },
    /// Rebuild the extension table for μ₀ⁿ and check every row.
    VerifyTable1 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Re-check every claim for n = 2..n_max.
    Reproduce {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7])]
        primes: Vec<u64>,
        #[arg(long, env = "CEXT_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((value, ok)) => {
            if let Err(e) = emit(cli.output.as_deref(), &value) {
                eprintln!("error: {e:#}");
                return ExitCode::FAILURE;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(path: Option<&Path>, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// serde_json's map is ordered by key, so going through `Value` gives stable output.
fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn run(cmd: Cmd) -> Result<(Value, bool)> {
    match cmd {
        Cmd::Identities { variety, .. } => {
            let names: Vec<&str> = match &variety {
                Some(v) => vec![v.as_str()],
                None => CATALOG.to_vec(),
            };
            let list = names
                .into_iter()
                .map(|name| {
                    let v = builtin_variety(name)?;
                    Ok(json!({
                        "name": v.name,
                        "identities": v.identities.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "multilinear": v.multilinear_identities.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "char_exclusions": v.min_char_exclusions,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((Value::Array(list), true))
        }
        Cmd::Cohomology { algebra, variety, field } => {
            let a = load_algebra(&algebra, field)?;
            let v = builtin_variety(&variety)?;
            let h = second_cohomology(&a, &v)?;
            Ok((to_value(&h.to_json())?, true))
        }
        Cmd::Extend {
            algebra,
            variety,
            field,
            cocycle,
        } => {
            let a = load_algebra(&algebra, field)?;
            let v = builtin_variety(&variety)?;
            let h = second_cohomology(&a, &v)?;
            let thetas = cocycle
                .iter()
                .map(|c| parse_cocycle(c, a.dim(), a.field()))
                .collect::<Result<Vec<_>>>()?;
            let ext = central_extension(&h, &thetas)?;
            let mut out = to_value(&ext.flags())?;
            out["algebra"] = to_value(&ext.extended.to_json())?;
            out["cocycles"] = thetas.iter().map(|t| Value::String(t.to_string())).collect();
            out["variety"] = Value::String(v.name);
            Ok((out, true))
        }
        Cmd::Aut { n, field, col } => {
            let phi = Automorphism::from_column(n, field, &parse_column(&col, field)?)?;
            Ok((automorphism_json(&phi), true))
        }
        Cmd::Act {
            n,
            field,
            cocycle,
            col,
            variety,
        } => {
            let phi = Automorphism::from_column(n, field, &parse_column(&col, field)?)?;
            let theta = parse_cocycle(&cocycle, n, field)?;
            let image = act_on_cocycle(&phi, &theta)?;
            let v = builtin_variety(&variety)?;
            let h = second_cohomology(&Algebra::null_filiform(n, field)?, &v)?;
            let coords = h.reduce_class(&image)?;
            Ok((
                json!({
                    "automorphism": automorphism_json(&phi),
                    "cocycle": theta.to_string(),
                    "image": image.to_string(),
                    "image_matrix": image.to_literals(),
                    "H_coords": literals(&coords),
                    "H_labels": h.h_labels(),
                    "variety": v.name,
                }),
                true,
            ))
        }
        Cmd::Classify {
            n,
            variety,
            field,
            grassmann,
            budget,
            members,
        } => {
            let v = classify_variety(&variety)?;
            let opts = OrbitOptions {
                budget,
                ..OrbitOptions::default()
            };
            let report = if grassmann {
                orbits_on_h2(n, &v, field, &opts)?
            } else {
                orbits_on_t1(n, &v, field, &opts)?
            };
            Ok((report.to_json(members), true))
        }
        Cmd::VerifyTable1 { n, field } => {
            let rows = table1_rows(n, field, None)?;
            let mut all = true;
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(label, r)| match r {
                    Ok(row) => json!({
                        "label": label,
                        "pass": true,
                        "varieties": row.varieties,
                        "flags": row.extension.flags(),
                    }),
                    Err(e) => {
                        all = false;
                        json!({ "label": label, "pass": false, "detail": e.to_string() })
                    }
                })
                .collect();
            Ok((json!({ "all_pass": all, "field": field.to_string(), "n": n, "rows": rows }), all))
        }
        Cmd::Reproduce {
            n_max,
            seed,
            primes,
            budget,
        } => {
            let cfg = ReproduceConfig {
                budget,
                n_max,
                orbit_primes: primes,
                seed,
                ..ReproduceConfig::default()
            };
            let report = reproduce(&cfg)?;
            let ok = report.all_pass;
            Ok((to_value(&report)?, ok))
        }
    }
}

fn classify_variety(name: &str) -> Result<VarietySpec> {
    let v = builtin_variety(name)?;
    match v.name.as_str() {
        "left_commutative" | "bicommutative" => Ok(v),
        other => bail!("classify supports lc and bc, not {other}"),
    }
}

fn load_algebra(spec: &str, field: Option<FieldSpec>) -> Result<Algebra> {
    if let Some(n) = spec.strip_prefix("mu0:") {
        let n: usize = n.trim().parse().with_context(|| format!("bad dimension in {spec:?}"))?;
        return Ok(Algebra::null_filiform(n, field.unwrap_or_else(FieldSpec::rationals))?);
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading algebra file {spec}"))?;
    let a = Algebra::from_json_str(&text).with_context(|| format!("parsing algebra file {spec}"))?;
    if let Some(f) = field {
        if f != a.field() {
            bail!("--field {f} disagrees with the algebra's field {}", a.field());
        }
    }
    Ok(a)
}

fn parse_column(col: &str, field: FieldSpec) -> Result<Vec<Scalar>> {
    col.split(',')
        .map(|s| field.parse_scalar(s.trim()).map_err(|e| anyhow!("column entry {s:?}: {e}")))
        .collect()
}

/// Accepts `named:<form>`, `expr:<expression>`, an inline JSON matrix of
/// scalar literals, or a file holding one (optionally as `{"matrix": …}`).
fn parse_cocycle(spec: &str, n: usize, field: FieldSpec) -> Result<BilinearForm> {
    if let Some(e) = spec.strip_prefix("named:").or_else(|| spec.strip_prefix("expr:")) {
        return Ok(parse_form_expr(e, n, field)?);
    }
    let text = if spec.trim_start().starts_with(['[', '{']) {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).with_context(|| format!("reading cocycle file {spec}"))?
    };
    let v: Value = serde_json::from_str(&text).context("cocycle JSON")?;
    let m = v.get("matrix").unwrap_or(&v);
    let rows: Vec<Vec<Value>> = serde_json::from_value(m.clone()).context("cocycle must be a matrix")?;
    let rows: Vec<Vec<String>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s),
                    Value::Number(k) => Ok(k.to_string()),
                    other => bail!("bad scalar literal {other}"),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let theta = BilinearForm::from_literals(field, &rows)?;
    if theta.dim() != n {
        bail!("cocycle is {}x{}, algebra has dimension {n}", theta.dim(), theta.dim());
    }
    Ok(theta)
}

fn literals(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn automorphism_json(phi: &Automorphism) -> Value {
    json!({
        "field": phi.field().to_string(),
        "first_col": literals(phi.first_col()),
        "matrix": phi.matrix().iter().map(|r| literals(r)).collect::<Vec<_>>(),
        "n": phi.n(),
    })
}
