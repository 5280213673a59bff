//! `kt`: batch front end over kt-core. Every command prints one JSON report
//! on stdout. Exit codes: 0 verdict computed, 1 input error, 2 budget or
//! unsupported.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use ktcore::clifford::{self, Idempotents};
use ktcore::error::{Error, Result};
use ktcore::field::{Elem, Field};
use ktcore::hypcert::{self, HypCertificate};
use ktcore::invariants;
use ktcore::isotropy::{self, Budget, Search};
use ktcore::quadform::QuadraticSpace;
use ktcore::quat::{self, SkewHermitianSpace};
use ktcore::similitudes;
use ktcore::splitting;

#[derive(Parser, Debug)]
#[command(name = "kt", version, about = "Quadratic forms, multipliers and hyperbolicity certificates")]
struct Cli {
    /// Echoed in every report; all pipelines are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Candidate vectors tried by isotropy searches.
    #[arg(long, global = true)]
    height_budget: Option<u64>,
    /// Worker threads for the corpus runner.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Add wall-clock timings to the report (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Discriminant, Clifford invariant and diagonal form.
    Invariants {
        #[arg(long)]
        form: String,
    },
    /// E7 / E8 / neither.
    Classify {
        #[arg(long)]
        form: String,
    },
    /// Witt index, hyperbolic pairs and anisotropic kernel.
    Witt {
        #[arg(long)]
        form: String,
    },
    /// Isotropy decision with a witness vector.
    Isotropic {
        #[arg(long)]
        form: String,
    },
    /// Hyperbolicity over K(√d) with block witnesses.
    HyperbolicOver {
        #[arg(long)]
        form: String,
        /// Radicand d (characteristic ≠ 2) or c in x² + x + c (characteristic 2).
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Characteristic 2 only: use the inseparable K(√d) instead.
        #[arg(long)]
        insep: bool,
    },
    /// Whether γ is a multiplier of q.
    Gq {
        #[arg(long)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Hyperbolicity certificate for γ.
    HypCert {
        #[arg(long)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Re-check a certificate from scratch.
    VerifyCert {
        #[arg(long)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long)]
        cert: String,
        /// Reject biquadratic entries.
        #[arg(long)]
        quadratic_only: bool,
    },
    /// Split a 12-dimensional form over the Laurent view along a multiplier.
    E8Split {
        #[arg(long)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
    },
    /// Extension classes K(h(v,v)) over vectors of bounded height.
    SnGens {
        #[arg(long)]
        herm: String,
        #[arg(long, default_value_t = 1)]
        height: i64,
        #[arg(long, default_value_t = 2)]
        support: usize,
    },
    /// The isometry τ_{v,r} and its spinor norm.
    Tau {
        #[arg(long)]
        herm: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        r: String,
    },
    /// Compare q and h over the quadratic extensions K(√d).
    TrialityCheck {
        #[arg(long)]
        form: String,
        #[arg(long)]
        herm: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-1,2,-2,7,-7,-14")]
        ds: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        gammas: String,
        #[arg(long, default_value_t = 2)]
        height: i64,
        #[arg(long, default_value_t = 3)]
        support: usize,
    },
    /// Clifford algebra computations.
    Clifford {
        #[command(subcommand)]
        op: CliffordOp,
    },
    /// Run every case in $KT_CORPUS_DIR (or --dir).
    Corpus {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CliffordOp {
    /// Center of the even Clifford algebra and its idempotents.
    Center {
        #[arg(long)]
        form: String,
    },
}

/// Inline JSON when it starts with `{` or `[`, otherwise a file path.
fn load_json(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

fn load_form(arg: &str) -> Result<QuadraticSpace> {
    QuadraticSpace::from_json(&load_json(arg)?)
}

fn vec_json(k: &Field, v: &[Elem]) -> Value {
    json!(v.iter().map(|x| k.format(x)).collect::<Vec<_>>())
}

fn parse_list(k: &Field, s: &str) -> Result<Vec<Elem>> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| k.parse(x)).collect()
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(h) = cli.height_budget {
        b.candidates = h;
    }
    b
}

fn execute(cli: &Cli) -> Result<Value> {
    let out = match &cli.cmd {
        Cmd::Invariants { form } => {
            let q = load_form(form)?;
            let k = &q.field;
            let mut m = json!({"dim": q.dim(), "field": k.descriptor_json()});
            if k.characteristic() != 2 {
                m["diagonal"] = vec_json(k, &q.diagonal_form()?);
            }
            if q.dim() % 2 == 0 {
                m["discriminant"] = invariants::discriminant(&q)?.to_json(k);
                if k.characteristic() != 2 {
                    let (class, index) = invariants::clifford_invariant(&q)?;
                    m["clifford"] = json!({"class": class.to_json(), "index": index});
                }
            }
            m
        }
        Cmd::Classify { form } => invariants::classify_type(&load_form(form)?)?.to_json(),
        Cmd::Witt { form } => {
            let q = load_form(form)?;
            let k = &q.field;
            let wd = isotropy::witt_decompose_with(&q, &budget(cli))?;
            json!({
                "witt_index": wd.witt_index,
                "hyperbolic": wd.is_hyperbolic(),
                "pairs": wd.pairs.iter().map(|(e, f)| json!({"e": vec_json(k, e), "f": vec_json(k, f)})).collect::<Vec<_>>(),
                "kernel": wd.kernel.to_json(),
                "kernel_anisotropic": wd.kernel_anisotropic,
            })
        }
        Cmd::Isotropic { form } => {
            let q = load_form(form)?;
            match isotropy::search(&q, &budget(cli))? {
                Search::Found(v) => json!({"isotropic": true, "witness": vec_json(&q.field, &v)}),
                Search::Anisotropic => json!({"isotropic": false}),
                Search::Unknown => return Err(Error::Budget("isotropy search inconclusive".into())),
            }
        }
        Cmd::HyperbolicOver { form, d, insep } => {
            let q = load_form(form)?;
            let k = &q.field;
            let d = k.parse(d)?;
            if *insep && k.characteristic() != 2 {
                return Err(Error::Precondition("--insep needs characteristic 2".into()));
            }
            let e = if k.characteristic() == 2 {
                Field::quad_ext(k.clone(), if *insep { k.zero() } else { k.one() }, d)?
            } else {
                Field::sqrt_ext(k.clone(), &d)?
            };
            let s = splitting::hyperbolic_over_quadratic(&q, &e)?;
            let mut m = s.to_json();
            m["verified"] = json!(splitting::verify_splitting(&q, &s)?);
            m
        }
        Cmd::Gq { form, gamma } => {
            let q = load_form(form)?;
            let g = q.field.parse(gamma)?;
            json!({"member": similitudes::gq_membership(&q, &g)?})
        }
        Cmd::HypCert { form, gamma } => {
            let q = load_form(form)?;
            let g = q.field.parse(gamma)?;
            hypcert::hyp_certificate(&q, &g)?.to_json()
        }
        Cmd::VerifyCert { form, gamma, cert, quadratic_only } => {
            let q = load_form(form)?;
            let g = q.field.parse(gamma)?;
            let c = HypCertificate::from_json(&q.field, &load_json(cert)?)?;
            let v = hypcert::verify_certificate(&q, &g, &c, *quadratic_only);
            json!({"accept": v.accepted, "reasons": v.reasons})
        }
        Cmd::E8Split { form, gamma, d } => {
            let q = load_form(form)?;
            let k = &q.field;
            let g = k.parse(gamma)?;
            let d = d.as_deref().map(|s| k.parse(s)).transpose()?;
            similitudes::e8_decompose(&q, &g, d.as_ref())?.to_json(k)
        }
        Cmd::SnGens { herm, height, support } => {
            let h = SkewHermitianSpace::from_json(&load_json(herm)?)?;
            let k = h.d.field.clone();
            let r = quat::sn_generators(&h, *height, *support)?;
            let classes: Vec<Value> = r
                .classes
                .iter()
                .map(|c| {
                    let he = h.base_change(&c.witness.field).expect("base change of a validated space");
                    json!({
                        "d": k.format(&c.d),
                        "v": h.format_vector(&c.v),
                        "h(v,v)": h.d.format(&c.nu),
                        "sample_norms": vec_json(&k, &c.sample_norms),
                        "D_split": c.d_split,
                        "witness": {
                            "lambda": h.d.format(&c.witness.lambda),
                            "w": he.format_vector(&c.witness.w),
                        },
                    })
                })
                .collect();
            let mut m = json!({"classes": classes, "examined": r.examined});
            if let Some(v) = &r.isotropic {
                m["isotropic"] = h.format_vector(v);
                m["note"] = json!("h isotropic; Sn = K^×");
            }
            m
        }
        Cmd::Tau { herm, v, r } => {
            let h = SkewHermitianSpace::from_json(&load_json(herm)?)?;
            let v = h.parse_vector(&load_json(v)?)?;
            let r = h.d.parse(&load_json(r)?)?;
            let t = quat::tau_transform(&h, &v, &r)?;
            let k = &h.d.field;
            json!({
                "columns": t.columns.iter().map(|c| h.format_vector(c)).collect::<Vec<_>>(),
                "theta": h.d.format(&t.theta),
                "u": h.d.format(&t.u),
                "spinor_norm": k.format(&t.spinor_norm),
                "spinor_class": k.format(&t.spinor_class),
            })
        }
        Cmd::TrialityCheck { form, herm, ds, gammas, height, support } => {
            let q = load_form(form)?;
            let h = SkewHermitianSpace::from_json(&load_json(herm)?)?;
            let k = &q.field;
            let r = quat::triality_consistency(&q, &h, &parse_list(k, ds)?, &parse_list(k, gammas)?, *height, *support)?;
            let mut m = r.to_json(k);
            m["consistent"] = json!(r.hard_violations.is_empty());
            m
        }
        Cmd::Clifford { op: CliffordOp::Center { form } } => {
            let q = load_form(form)?;
            let k = &q.field;
            let n = q.dim();
            let data = clifford::center_data(&q)?;
            let mut m = json!({
                "generator": data.generator.to_json(k, n),
                "relation": k.format(&data.relation),
                "center_basis": data.basis.iter().map(|b| b.to_json(k, n)).collect::<Vec<_>>(),
                "solved": data.solved,
                "discriminant": invariants::discriminant(&q)?.to_json(k),
            });
            match clifford::central_idempotents(&q)? {
                Idempotents::Split { pair } => {
                    m["center"] = json!("split");
                    m["idempotents"] = json!([pair.0.to_json(k, n), pair.1.to_json(k, n)]);
                }
                Idempotents::FieldCenter { class } => {
                    m["center"] = json!("field");
                    m["class"] = json!(k.format(&class));
                }
            }
            m
        }
        Cmd::Corpus { dir } => run_corpus(cli, dir.as_deref())?,
    };
    Ok(out)
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Invariants { .. } => "invariants",
        Cmd::Classify { .. } => "classify",
        Cmd::Witt { .. } => "witt",
        Cmd::Isotropic { .. } => "isotropic",
        Cmd::HyperbolicOver { .. } => "hyperbolic-over",
        Cmd::Gq { .. } => "gq",
        Cmd::HypCert { .. } => "hyp-cert",
        Cmd::VerifyCert { .. } => "verify-cert",
        Cmd::E8Split { .. } => "e8-split",
        Cmd::SnGens { .. } => "sn-gens",
        Cmd::Tau { .. } => "tau",
        Cmd::TrialityCheck { .. } => "triality-check",
        Cmd::Clifford { .. } => "clifford",
        Cmd::Corpus { .. } => "corpus",
    }
}

/// Report object and exit code for one parsed invocation.
fn report(cli: &Cli) -> (Value, u8) {
    let start = Instant::now();
    let mut m = Map::new();
    m.insert("command".into(), json!(command_name(&cli.cmd)));
    m.insert("seed".into(), json!(cli.seed));
    let code = match execute(cli) {
        Ok(Value::Object(body)) => {
            m.extend(body);
            0
        }
        Ok(other) => {
            m.insert("result".into(), other);
            0
        }
        Err(e) => {
            m.insert("error".into(), json!({"kind": e.kind(), "message": e.to_string()}));
            e.exit_code() as u8
        }
    };
    if cli.timings {
        m.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    }
    (Value::Object(m), code)
}

/// Case files are `{"args": [...], "expect": {...}, "exit": n}`; a case passes
/// when the exit code matches and every key of "expect" equals the report's.
fn run_case(path: &Path) -> Value {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let case = match std::fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|s| {
        serde_json::from_str::<Value>(&s).map_err(|e| e.to_string())
    }) {
        Ok(v) => v,
        Err(e) => return json!({"case": name, "pass": false, "reason": e}),
    };
    let args: Vec<String> = case["args"]
        .as_array()
        .map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect())
        .unwrap_or_default();
    let argv = std::iter::once("kt".to_string()).chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => return json!({"case": name, "pass": false, "reason": e.to_string()}),
    };
    let (rep, code) = report(&cli);
    let want_code = case.get("exit").and_then(Value::as_u64).unwrap_or(0);
    let mut mismatches = Vec::new();
    if u64::from(code) != want_code {
        mismatches.push(format!("exit {code}, expected {want_code}"));
    }
    if let Some(Value::Object(exp)) = case.get("expect") {
        for (key, want) in exp {
            if rep.get(key) != Some(want) {
                mismatches.push(format!("{key}: got {}", rep.get(key).unwrap_or(&Value::Null)));
            }
        }
    }
    json!({"case": name, "pass": mismatches.is_empty(), "mismatches": mismatches})
}

fn run_corpus(cli: &Cli, dir: Option<&Path>) -> Result<Value> {
    let dir = match dir {
        Some(d) => d.to_path_buf(),
        None => std::env::var_os("KT_CORPUS_DIR")
            .map(PathBuf::from)
            .ok_or_else(|| Error::Parse("set KT_CORPUS_DIR or pass --dir".into()))?,
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let jobs = cli.jobs.max(1);
    let mut results = vec![Value::Null; files.len()];
    std::thread::scope(|s| {
        let chunks: Vec<_> = results.chunks_mut(files.len().div_ceil(jobs).max(1)).zip(files.chunks(files.len().div_ceil(jobs).max(1))).collect();
        for (out, paths) in chunks {
            s.spawn(move || {
                for (slot, p) in out.iter_mut().zip(paths) {
                    *slot = run_case(p);
                }
            });
        }
    });
    let failed = results.iter().filter(|r| r["pass"] != json!(true)).count();
    Ok(json!({"cases": results, "total": files.len(), "failed": failed}))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (rep, mut code) = report(&cli);
    if matches!(cli.cmd, Cmd::Corpus { .. }) && code == 0 && rep["failed"] != json!(0) {
        code = 1;
    }
    // a closed pipe is not an error worth a panic
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&rep).expect("reports are valid JSON"));
    ExitCode::from(code)
}
