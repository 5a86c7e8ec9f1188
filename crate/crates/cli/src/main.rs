use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use nchilb_core::cells::{self, CensusOptions, DEFAULT_BUDGET};
use nchilb_core::json::{
    algebra_from_json, canonical_form_from_json, canonical_form_to_json, chart_family_from_json, ideal_from_json,
    ideal_to_json, point_from_json, point_to_json, poly_from_json, poly_to_json, projective_point_to_json, sorted,
    vector_to_json, word_to_json,
};
use nchilb_core::orbits::{self, normal_form};
use nchilb_core::points::{veronese_bound, ChartIndex, PointData};
use nchilb_core::tangent;
use nchilb_core::Error;

/// Hilbert schemes of points on associative algebras: exact computations
/// with JSON input and output.
#[derive(Parser, Debug)]
#[command(name = "nchilb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the relations and cyclicity of a point.
    Check {
        #[arg(long)]
        point: PathBuf,
    },
    /// Canonical form of a point's orbit.
    Canon {
        #[arg(long)]
        point: PathBuf,
    },
    /// Whether two points lie in the same orbit.
    OrbitEq {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Left ideal of a point or canonical form.
    Ideal {
        #[arg(long)]
        point: PathBuf,
    },
    /// Canonical form reconstructed from ideal data.
    FromIdeal {
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Normal form of a polynomial modulo an ideal.
    NormalForm {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
    /// Cells of the free algebra and their count polynomial.
    Cells {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Count polynomial of the free algebra.
    Count {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Exhaustive census of points over F_q.
    Census {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        shards: usize,
        #[arg(long)]
        budget: Option<u128>,
        /// Also count distinct canonical forms.
        #[arg(long)]
        forms: bool,
    },
    /// Compare census counts with the count polynomial at several primes.
    Fit {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u32>,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Projective coordinates from determinant sections.
    Embed {
        #[arg(long)]
        point: PathBuf,
        /// JSON list of charts; defaults to the word family.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Longest word used by the default family.
        #[arg(long, default_value_t = 1)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Tangent space dimensions at a point.
    Tangent {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Reduce a rational point modulo a prime.
    ReduceModP {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        p: u32,
    },
    /// Sufficient Veronese degree for generator degrees d_1, ..., d_k.
    Veronese {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u64>,
    },
    /// Check that a quotient algebra's points embed into the source's.
    EmbedCheck {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        quotient: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        budget: Option<u128>,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(Value, Vec<String>), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::Domain(Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| {
        Failure::Domain(Error::Parse {
            path: format!("{}:{}:{}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })
    })?;
    // accept our own output envelope
    match (v.get("status").and_then(Value::as_str), v.get("payload")) {
        (Some("ok"), Some(payload)) => Ok(payload.clone()),
        _ => Ok(v),
    }
}

/// Prefixes parse paths with the file they came from.
fn in_file<T>(path: &Path, r: nchilb_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { path: p, message } => Error::Parse {
            path: format!("{}#{p}", path.display()),
            message,
        }
        .into(),
        other => other.into(),
    })
}

/// A point, or an object holding one under "point" (reduce-mod-p output)
/// or "canonical_point" (a canonical form).
fn load_point(path: &Path) -> Result<PointData, Failure> {
    let v = read_json(path)?;
    for key in ["point", "canonical_point"] {
        if let (Some(inner), None) = (v.get(key), v.get("matrices")) {
            return in_file(path, point_from_json(inner, &format!("/{key}")));
        }
    }
    in_file(path, point_from_json(&v, ""))
}

fn budget(flag: Option<u128>) -> Result<u128, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("CENSUS_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("CENSUS_BUDGET is not a non-negative integer: \"{s}\""))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn polynomial_json(p: &cells::CountPolynomial) -> Value {
    Value::Object(p.coefficients.iter().map(|(e, c)| (e.to_string(), json!(c))).collect())
}

fn run(cmd: Command) -> Outcome {
    let mut diagnostics = Vec::new();
    let payload = match cmd {
        Command::Check { point } => {
            let p = load_point(&point)?;
            let kb = p.krylov_basis();
            json!({
                "relations_hold": p.check_relations(),
                "is_cyclic": kb.words.len() == p.n(),
                "valid": p.is_valid(),
                "krylov_words": kb.words.iter().map(word_to_json).collect::<Vec<_>>(),
            })
        }
        Command::Canon { point } => canonical_form_to_json(&orbits::canonicalize(&load_point(&point)?)?),
        Command::OrbitEq { point, other } => {
            let (p, q) = (load_point(&point)?, load_point(&other)?);
            json!({"equal": orbits::orbit_equal(&p, &q)?})
        }
        Command::Ideal { point } => {
            let v = read_json(&point)?;
            let form = if v.get("canonical_point").is_some() {
                in_file(&point, canonical_form_from_json(&v, ""))?
            } else {
                orbits::canonicalize(&in_file(&point, point_from_json(&v, ""))?)?
            };
            ideal_to_json(&form.extract_ideal())
        }
        Command::FromIdeal { ideal } => {
            let i = in_file(&ideal, ideal_from_json(&read_json(&ideal)?, ""))?;
            canonical_form_to_json(&orbits::CanonicalForm::from_ideal(&i)?)
        }
        Command::NormalForm { ideal, poly } => {
            let i = in_file(&ideal, ideal_from_json(&read_json(&ideal)?, ""))?;
            let f = in_file(&poly, poly_from_json(i.algebra().field(), &read_json(&poly)?, ""))?;
            let nf = normal_form(&f, &i)?;
            let coords: Vec<_> = i.basis_words().iter().map(|w| nf.coefficient(w)).collect();
            json!({"normal_form": poly_to_json(&nf), "coordinates": vector_to_json(&coords)})
        }
        Command::Cells { m, n } => {
            check_mn(m, n)?;
            let cells: Vec<Value> = cells::enumerate_cells(m, n)
                .iter()
                .map(|c| {
                    json!({
                        "basis_words": c.basis_words.iter().map(word_to_json).collect::<Vec<_>>(),
                        "dimension": c.dimension,
                    })
                })
                .collect();
            json!({"cells": cells, "polynomial": polynomial_json(&cells::count_polynomial(m, n))})
        }
        Command::Count { m, n } => {
            check_mn(m, n)?;
            json!({"polynomial": polynomial_json(&cells::count_polynomial(m, n))})
        }
        Command::Census {
            algebra,
            n,
            q,
            shards,
            budget: b,
            forms,
        } => {
            let a = in_file(&algebra, algebra_from_json(&read_json(&algebra)?, ""))?;
            let opts = CensusOptions {
                shards,
                budget: budget(b)?,
                distinct_forms: forms,
            };
            let report = cells::census(&a, n, q, &opts)?;
            if forms && report.distinct_forms != Some(report.orbit_count) {
                diagnostics.push("distinct canonical forms differ from the orbit count".to_string());
            }
            serde_json::to_value(&report).expect("reports serialize")
        }
        Command::Fit { m, n, primes, budget: b } => {
            check_mn(m, n)?;
            let opts = CensusOptions {
                budget: budget(b)?,
                ..Default::default()
            };
            let r = cells::polynomial_fit_check(m, n, &primes, &opts)?;
            json!({
                "fits": r.fits,
                "polynomial": polynomial_json(&cells::count_polynomial(m, n)),
                "samples": r.samples.iter().map(|(q, got, want)| json!({
                    "q": q, "census": got, "polynomial_value": want.to_string(),
                })).collect::<Vec<_>>(),
            })
        }
        Command::Embed {
            point,
            family,
            max_len,
            power,
        } => {
            let p = load_point(&point)?;
            let family = match family {
                Some(f) => in_file(&f, chart_family_from_json(p.field(), &read_json(&f)?, ""))?,
                None => ChartIndex::word_family(p.field(), p.m(), p.n(), max_len),
            };
            let coords = p.embedding_coordinates(&family, power)?;
            json!({"coordinates": projective_point_to_json(&coords), "family_size": family.len(), "power": power})
        }
        Command::Tangent { point, max_degree } => {
            let p = load_point(&point)?;
            let cap = max_degree.unwrap_or_else(|| tangent::default_max_degree(p.n()));
            let r = tangent::tangent_dim_with(&p, cap)?;
            if let tangent::HomStatus::Unstable { max_degree } = r.status {
                diagnostics.push(format!("Hom(I, M) did not stabilize up to degree {max_degree}"));
            }
            serde_json::to_value(&r).expect("reports serialize")
        }
        Command::ReduceModP { point, p } => {
            let r = load_point(&point)?.reduce_mod_p(p)?;
            if !r.is_cyclic {
                diagnostics.push(format!("y is not cyclic modulo {p}"));
            }
            json!({"point": point_to_json(&r.point), "is_cyclic": r.is_cyclic})
        }
        Command::Veronese { degrees } => json!({"bound": veronese_bound(&degrees)?}),
        Command::EmbedCheck {
            source,
            quotient,
            n,
            q,
            budget: b,
        } => {
            let a = in_file(&source, algebra_from_json(&read_json(&source)?, ""))?;
            let bq = in_file(&quotient, algebra_from_json(&read_json(&quotient)?, ""))?;
            let opts = CensusOptions {
                budget: budget(b)?,
                ..Default::default()
            };
            serde_json::to_value(&cells::check_closed_embedding(&a, &bq, n, q, &opts)?).expect("reports serialize")
        }
    };
    Ok((payload, diagnostics))
}

fn check_mn(m: usize, n: usize) -> Result<(), Failure> {
    if m == 0 || n == 0 {
        return Err(Failure::Usage("--m and --n must be positive".into()));
    }
    Ok(())
}

fn emit(status: &str, payload: Value, diagnostics: Vec<String>) {
    let out = sorted(json!({"status": status, "payload": payload, "diagnostics": diagnostics}));
    let text = serde_json::to_string_pretty(&out).expect("JSON values serialize");
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit("error", Value::Null, vec![e.render().to_string().trim_end().to_string()]);
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok((payload, diagnostics)) => {
            emit("ok", payload, diagnostics);
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            emit("error", Value::Null, vec![e.to_string()]);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            emit("error", Value::Null, vec![msg]);
            ExitCode::from(2)
        }
    }
}
