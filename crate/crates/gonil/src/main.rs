//! Command-line surface for the geodesic orbit toolkit.
//!
//! Exit codes: 0 = pass/ok, 1 = mathematical property failure or
//! counterexample found, 2 = input error. Reports go to stdout as JSON
//! unless `--out` is given.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gonil::bilinear::{BilinearForm, SignConvention};
use gonil::canon;
use gonil::geodesic;
use gonil::linalg::{parse_rat, Matrix, Rat, Subspace};
use gonil::report::{self, ReportEnvelope};
use gonil::search;
use gonil::spacefile::{self, ParsedSpace};
use gonil::structure;

#[derive(Parser)]
#[command(
    name = "gonil",
    version,
    about = "Geodesic orbit toolkit for Lorentz nilmanifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the Jacobi identity and report the nilpotency structure
    CheckAlgebra {
        space: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signature of the metric on m, with the Lorentz test
    Signature {
        space: PathBuf,
        /// mostly-plus (one minus) or mostly-minus (one plus)
        #[arg(long)]
        signature_convention: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Naturally-reductive test; exit 1 with a witness triple on failure
    Natred {
        space: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether ξ (g-coordinates, comma-separated rationals) is a
    /// geodesic vector and report its constant
    GeodesicVector {
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for (α, k) making ξ + α a geodesic vector; exit 1 when the
    /// system is exactly infeasible
    SolveAlpha {
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Layered geodesic orbit certification; exit 1 on a counterexample
    GoCheck {
        space: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also try every primitive integer direction up to this height
        #[arg(long)]
        grid: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical form of a skew operator: either ad(x) restricted to a
    /// subspace of a space file, or an explicit matrix/gram pair
    Canonical {
        space: Option<PathBuf>,
        /// direction x in g coordinates (with a space file)
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// subspace to restrict to: currently `derived` ([n,n])
        #[arg(long, default_value = "derived")]
        subspace: String,
        /// explicit operator as a JSON array of rows, or @file
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        /// explicit gram as a JSON array of rows, or @file
        #[arg(long, allow_hyphen_values = true)]
        gram: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structure verifier, nondegenerate-commutator case
    VerifyThm41 {
        space: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structure verifier, degenerate-commutator case
    VerifyThm42 {
        space: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid search over candidate families for a 4-step geodesic orbit lead
    Search {
        /// filiform | canonical-pair | free-nilpotent
        #[arg(long)]
        family: String,
        /// inclusive dimension range, e.g. 4..5
        #[arg(long)]
        dims: String,
        /// comma-separated rational grid values (default -2,-1,0,1,2)
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value = "skew-derivations")]
        h_strategy: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// certify every class, not only class 4 (theorem cross-check)
        #[arg(long)]
        all_classes: bool,
        /// JSONL output path; summary goes to <out>.summary.json
        #[arg(long)]
        out: PathBuf,
        /// continue from the checkpoint next to <out>
        #[arg(long)]
        resume: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(envelope: &ReportEnvelope, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(&envelope.to_value()).expect("serializable");
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", p.display())),
    }
}

fn load_space(path: &Path) -> Result<ParsedSpace, String> {
    spacefile::parse_space_file(path).map_err(|e| e.to_string())
}

fn parse_vector(s: &str, dim: usize) -> Result<Vec<Rat>, String> {
    let entries: Result<Vec<Rat>, _> = s.split(',').map(|t| parse_rat(t.trim())).collect();
    let v = entries.map_err(|e| format!("direction entry: {e}"))?;
    if v.len() != dim {
        return Err(format!("direction has {} entries, expected {dim}", v.len()));
    }
    Ok(v)
}

fn matrix_arg(arg: &str) -> Result<Matrix, String> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?
    } else {
        arg.to_string()
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("matrix JSON: {e}"))?;
    let rows_v = v.as_array().ok_or("matrix must be an array of rows")?;
    let mut rows = Vec::new();
    for (i, row) in rows_v.iter().enumerate() {
        let row_v = row
            .as_array()
            .ok_or_else(|| format!("matrix row {i} must be an array"))?;
        let mut out = Vec::new();
        for (j, e) in row_v.iter().enumerate() {
            let r = match e {
                Value::String(s) => parse_rat(s).map_err(|err| format!("entry ({i},{j}): {err}")),
                Value::Number(n) => n
                    .as_i64()
                    .map(gonil::linalg::rint)
                    .ok_or_else(|| format!("entry ({i},{j}): floats forbidden; write 1/2")),
                _ => Err(format!("entry ({i},{j}): expected a rational string")),
            }?;
            out.push(r);
        }
        rows.push(out);
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err("matrix rows have unequal lengths".into());
    }
    Ok(Matrix::from_rows(cols, rows))
}

/// Validates the algebra before running solver commands: their
/// preconditions assume a genuine Lie algebra.
fn require_valid_algebra(parsed: &ParsedSpace) -> Result<(), String> {
    parsed.space.algebra().validate().map_err(|f| {
        format!(
            "algebra fails the Jacobi identity on basis triple {:?}",
            f.triple
        )
    })
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::CheckAlgebra { space, out } => {
            let parsed = load_space(&space)?;
            let body;
            let code;
            match parsed.space.algebra().validate() {
                Ok(()) => {
                    let series = parsed.space.algebra().lower_central_series();
                    body = json!({
                        "jacobi": "ok",
                        "dims": series.dims,
                        "class": series.class.step(),
                        "nilpotent": series.class.step().is_some(),
                    });
                    code = ExitCode::SUCCESS;
                }
                Err(f) => {
                    body = json!({
                        "jacobi": "failed",
                        "triple": [f.triple.0, f.triple.1, f.triple.2],
                        "residual": report::vec_json(&f.residual),
                    });
                    code = ExitCode::from(1);
                }
            }
            emit(
                &ReportEnvelope {
                    command: "check-algebra".into(),
                    input_digest: Some(parsed.digest.clone()),
                    seed: None,
                    body,
                },
                out.as_deref(),
            )?;
            Ok(code)
        }
        Command::Signature {
            space,
            signature_convention,
            out,
        } => {
            let parsed = load_space(&space)?;
            let convention = match signature_convention.as_deref() {
                None => parsed.convention,
                Some("mostly-plus") => SignConvention::MostlyPlus,
                Some("mostly-minus") => SignConvention::MostlyMinus,
                Some(other) => return Err(format!("unknown convention `{other}`")),
            };
            let sig = parsed.space.metric().signature();
            let body = json!({
                "signature": report::signature_json(&sig),
                "lorentz": parsed.space.metric().is_lorentz_with(convention),
                "convention": match convention {
                    SignConvention::MostlyPlus => "mostly-plus",
                    SignConvention::MostlyMinus => "mostly-minus",
                },
            });
            emit(
                &ReportEnvelope {
                    command: "signature".into(),
                    input_digest: Some(parsed.digest),
                    seed: None,
                    body,
                },
                out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Natred { space, out } => {
            let parsed = load_space(&space)?;
            require_valid_algebra(&parsed)?;
            let r = parsed.space.is_naturally_reductive();
            let code = if r.naturally_reductive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            emit(
                &ReportEnvelope {
                    command: "natred".into(),
                    input_digest: Some(parsed.digest),
                    seed: None,
                    body: report::natred_json(&r),
                },
                out.as_deref(),
            )?;
            Ok(code)
        }
        Command::GeodesicVector { space, xi, out } => {
            let parsed = load_space(&space)?;
            require_valid_algebra(&parsed)?;
            let v = parse_vector(&xi, parsed.space.dim_g())?;
            let k = geodesic::geodesic_vector_k(&parsed.space, &v).map_err(|e| e.to_string())?;
            let body = match &k {
                Some(k) => json!({ "geodesic_vector": true, "k": report::rat_json(k) }),
                None => json!({ "geodesic_vector": false }),
            };
            emit(
                &ReportEnvelope {
                    command: "geodesic-vector".into(),
                    input_digest: Some(parsed.digest),
                    seed: None,
                    body,
                },
                out.as_deref(),
            )?;
            Ok(if k.is_some() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::SolveAlpha { space, xi, out } => {
            let parsed = load_space(&space)?;
            require_valid_algebra(&parsed)?;
            let v = parse_vector(&xi, parsed.space.dim_g())?;
            let outcome = geodesic::solve_alpha(&parsed.space, &v).map_err(|e| e.to_string())?;
            let (body, code) = match &outcome {
                geodesic::SolveOutcome::Feasible(sol) => {
                    (report::solution_json(sol), ExitCode::SUCCESS)
                }
                geodesic::SolveOutcome::Infeasible => (
                    json!({ "feasible": false, "xi": report::vec_json(&v) }),
                    ExitCode::from(1),
                ),
            };
            emit(
                &ReportEnvelope {
                    command: "solve-alpha".into(),
                    input_digest: Some(parsed.digest),
                    seed: None,
                    body,
                },
                out.as_deref(),
            )?;
            Ok(code)
        }
        Command::GoCheck {
            space,
            samples,
            seed,
            grid,
            out,
        } => {
            let parsed = load_space(&space)?;
            require_valid_algebra(&parsed)?;
            if parsed.space.metric().is_degenerate() {
                return Err(
                    "metric on m is degenerate; certification needs a nondegenerate metric".into(),
                );
            }
            let verdict = geodesic::go_certify(&parsed.space, samples, seed, grid);
            let code = if verdict.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            emit(
                &ReportEnvelope {
                    command: "go-check".into(),
                    input_digest: Some(parsed.digest),
                    seed: Some(seed),
                    body: report::go_verdict_json(&verdict),
                },
                out.as_deref(),
            )?;
            Ok(code)
        }
        Command::Canonical {
            space,
            x,
            subspace,
            matrix,
            gram,
            out,
        } => {
            let (b, g, digest) = match (&matrix, &gram) {
                (Some(mb), Some(mg)) => {
                    let b = matrix_arg(mb)?;
                    let g = matrix_arg(mg)?;
                    (b, g, None)
                }
                (None, None) => {
                    let path = space.ok_or("a space file or --matrix/--gram is required")?;
                    let parsed = load_space(&path)?;
                    require_valid_algebra(&parsed)?;
                    let xs = x.ok_or("--x is required with a space file")?;
                    let xv = parse_vector(&xs, parsed.space.dim_g())?;
                    if subspace != "derived" {
                        return Err(format!(
                            "unknown subspace `{subspace}` (supported: derived)"
                        ));
                    }
                    // ad(x) on [n,n] of the m part, in m coordinates
                    let dm = parsed.space.dim_m();
                    let mut sub = gonil::lie::LieAlgebra::new(dm);
                    for i in 0..dm {
                        for j in i + 1..dm {
                            let br = parsed
                                .space
                                .algebra()
                                .bracket(&parsed.space.m_basis()[i], &parsed.space.m_basis()[j]);
                            if !parsed.space.m_span().contains(&br) {
                                return Err("m is not closed under the bracket".into());
                            }
                            let coords = parsed.space.m_coefficients(&br);
                            let coeffs: Vec<(usize, Rat)> = coords
                                .into_iter()
                                .enumerate()
                                .filter(|(_, c)| !num_traits::Zero::is_zero(c))
                                .collect();
                            sub.set_bracket(i, j, coeffs).map_err(|e| e.to_string())?;
                        }
                    }
                    let derived: Subspace = sub.derived_subalgebra();
                    if derived.is_zero() {
                        return Err("derived subalgebra is zero; nothing to restrict to".into());
                    }
                    let xm = parsed.space.m_coefficients(&xv);
                    let b = sub
                        .ad_restricted(&xm, &derived)
                        .map_err(|e| e.to_string())?;
                    let g = parsed
                        .space
                        .metric()
                        .restrict(&derived)
                        .map_err(|e| e.to_string())?
                        .gram()
                        .clone();
                    (b, g, Some(parsed.digest))
                }
                _ => return Err("--matrix and --gram must be given together".into()),
            };
            let form = BilinearForm::new(g).map_err(|e| e.to_string())?;
            if !canon::check_skew(&b, &form).map_err(|e| e.to_string())? {
                let envelope = ReportEnvelope {
                    command: "canonical".into(),
                    input_digest: digest,
                    seed: None,
                    body: json!({ "skew": false }),
                };
                emit(&envelope, out.as_deref())?;
                return Ok(ExitCode::from(1));
            }
            let body = match canon::classify(&b, &form) {
                Ok(canon::OperatorKind::Zero) => json!({ "skew": true, "kind": "zero" }),
                Ok(canon::OperatorKind::Semisimple { mu, c_block_dim }) => json!({
                    "skew": true,
                    "kind": "semisimple",
                    "mu": report::rat_json(&mu),
                    "c_block_dim": c_block_dim,
                }),
                Ok(canon::OperatorKind::NonSemisimple { c_block_dim }) => {
                    let mut body = json!({
                        "skew": true,
                        "kind": "non_semisimple",
                        "c_block_dim": c_block_dim,
                    });
                    if let Ok(cf) = canon::nilpotent_witness_basis(&b, &form) {
                        body["witness"] = report::matrix_json(&cf.witness);
                        body["canonical_matrix"] = report::matrix_json(&cf.canonical_matrix);
                        body["canonical_gram"] = report::matrix_json(&cf.canonical_gram);
                        body["triple_scale"] = cf
                            .triple_scale
                            .as_ref()
                            .map(report::rat_json)
                            .unwrap_or(Value::Null);
                        body["complement_diag"] = cf
                            .complement_diag
                            .as_ref()
                            .map(|d| report::vec_json(d))
                            .unwrap_or(Value::Null);
                    }
                    body
                }
                Err(canon::CanonError::UndecidedExact {
                    min_poly,
                    mu_estimate,
                }) => json!({
                    "skew": true,
                    "kind": "semisimple_undecided_exact",
                    "min_poly": report::vec_json(&min_poly),
                    "mu_estimate_float": format!("{mu_estimate:.9}"),
                    "note": "eigenvalue pair is irrational; estimate is not exact",
                }),
                Err(e) => return Err(e.to_string()),
            };
            emit(
                &ReportEnvelope {
                    command: "canonical".into(),
                    input_digest: digest,
                    seed: None,
                    body,
                },
                out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyThm41 { space, out } => {
            let parsed = load_space(&space)?;
            require_valid_algebra(&parsed)?;
            match structure::verify_nondegenerate(&parsed.space) {
                Err(e) => Err(e.to_string()),
                Ok(rep) => {
                    let code = if rep.pass() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    };
                    emit(
                        &ReportEnvelope {
                            command: "verify-thm41".into(),
                            input_digest: Some(parsed.digest),
                            seed: None,
                            body: report::nondegenerate_report_json(&rep),
                        },
                        out.as_deref(),
                    )?;
                    Ok(code)
                }
            }
        }
        Command::VerifyThm42 { space, out } => {
            let parsed = load_space(&space)?;
            require_valid_algebra(&parsed)?;
            match structure::verify_degenerate(&parsed.space) {
                Err(e) => Err(e.to_string()),
                Ok(rep) => {
                    let code = if rep.pass() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    };
                    emit(
                        &ReportEnvelope {
                            command: "verify-thm42".into(),
                            input_digest: Some(parsed.digest),
                            seed: None,
                            body: report::degenerate_report_json(&rep),
                        },
                        out.as_deref(),
                    )?;
                    Ok(code)
                }
            }
        }
        Command::Search {
            family,
            dims,
            grid,
            h_strategy,
            jobs,
            samples,
            seed,
            all_classes,
            out,
            resume,
        } => {
            let family = search::Family::parse(&family)
                .ok_or_else(|| format!("unknown family `{family}`"))?;
            let strategy = search::HStrategy::parse(&h_strategy)
                .ok_or_else(|| format!("unknown h-strategy `{h_strategy}`"))?;
            let (lo, hi) = dims
                .split_once("..")
                .ok_or("dims must be an inclusive range like 4..5")?;
            let lo: usize = lo.trim().parse().map_err(|_| "bad dims lower bound")?;
            let hi: usize = hi.trim().parse().map_err(|_| "bad dims upper bound")?;
            let grid_values = match grid {
                None => search::default_grid(),
                Some(g) => search::parse_grid(&g)?,
            };
            let specs = search::generate_candidates(family, lo..=hi, &grid_values, strategy);
            let params = search::GoParams {
                samples,
                seed,
                grid_depth: None,
                all_classes,
            };
            let checkpoint = out.with_extension("checkpoint");
            let existing = if resume {
                std::fs::read_to_string(&out).ok()
            } else {
                None
            };
            let mut file = std::fs::OpenOptions::new()
                .create(true)
                .append(resume)
                .write(true)
                .truncate(!resume)
                .open(&out)
                .map_err(|e| format!("cannot open {}: {e}", out.display()))?;
            let summary = search::scan(
                &specs,
                &params,
                jobs,
                &mut file,
                Some(checkpoint.as_path()),
                resume,
                existing.as_deref(),
            )
            .map_err(|e| format!("scan io: {e}"))?;
            let summary_json = summary.to_json();
            let summary_path = out.with_extension("summary.json");
            std::fs::write(
                &summary_path,
                serde_json::to_string_pretty(&summary_json).unwrap(),
            )
            .map_err(|e| format!("cannot write {}: {e}", summary_path.display()))?;
            println!("{}", serde_json::to_string_pretty(&summary_json).unwrap());
            if summary.contradictions.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "THEOREM_CONTRADICTION flagged on spec indices {:?}: investigate sampling \
                     artifacts or a genuine inconsistency",
                    summary.contradictions
                );
                Ok(ExitCode::from(1))
            }
        }
    }
}
