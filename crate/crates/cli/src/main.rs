//! Batch front-end: reads a JSON job spec, runs one computation, writes a
//! JSON result with the schema version and seeds echoed. Exit codes: 0 on
//! success, 1 with a structured error object on a module error, 2 on a
//! schema violation.

use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use equicount::group::DEFAULT_MAX_GROUP_ORDER;
use equicount::index;
use equicount::json::{
    caps_from_json, classes_from_json, contribution_to_json, isotropy_to_json, kclass_to_json,
    pairing_from_json, sublattice_to_json, to_dyadic, IndexPayload, PayloadError, SigmaPayload,
    TaubesPayload, TorusPayload, VerifyPayload,
};
use equicount::oracle::{verify_sigma, OracleError, ZeroReport};
use equicount::sigma::{cover_contribution, torus_table_threads};
use equicount::taubes::{expand_invariant_product, gr_coefficient, torus_weight_series, GrStyle};

const SCHEMA_VERSION: &str = "1";

struct Options {
    input: Option<String>,
    output: Option<String>,
    seed: Option<u64>,
    threads: usize,
    print_schema: bool,
}

fn usage() -> &'static str {
    "usage: equicount --input JOB.json [--output OUT.json] [--seed N] [--threads N] | --schema\n\
     The job file is {\"command\": <name>, \"payload\": {...}, \"output_path\": optional}.\n\
     Commands: sigma, contribution, torus, covers, index, taubes, verify.\n\
     EQUICOUNT_MAX_GROUP_ORDER overrides the default group-order bound of 64."
}

fn parse_args() -> Result<Options, String> {
    let mut opts = Options {
        input: None,
        output: None,
        seed: None,
        threads: 1,
        print_schema: false,
    };
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        match a.as_str() {
            "--input" => opts.input = Some(args.next().ok_or("--input needs a file")?),
            "--output" => opts.output = Some(args.next().ok_or("--output needs a file")?),
            "--seed" => {
                let v = args.next().ok_or("--seed needs a number")?;
                opts.seed = Some(v.parse().map_err(|_| format!("bad seed '{v}'"))?);
            }
            "--threads" => {
                let v = args.next().ok_or("--threads needs a number")?;
                opts.threads = v
                    .parse::<usize>()
                    .map_err(|_| format!("bad thread count '{v}'"))?
                    .max(1);
            }
            "--schema" => opts.print_schema = true,
            "--help" | "-h" => {
                println!("{}", usage());
                std::process::exit(0);
            }
            other => return Err(format!("unknown argument '{other}'")),
        }
    }
    Ok(opts)
}

/// Structured failure: exit code plus the error object.
struct Failure {
    exit: u8,
    code: &'static str,
    message: String,
    path: String,
}

impl Failure {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Failure {
        Failure {
            exit: 2,
            code: "schema",
            message: message.into(),
            path: path.into(),
        }
    }

    fn module(code: &'static str, path: impl Into<String>, message: impl Into<String>) -> Failure {
        Failure {
            exit: 1,
            code,
            message: message.into(),
            path: path.into(),
        }
    }
}

impl From<PayloadError> for Failure {
    fn from(e: PayloadError) -> Failure {
        match e {
            PayloadError::Invalid { path, message } => Failure::schema(path, message),
            PayloadError::Group(g) => Failure::module("group", "payload.group", g.to_string()),
            PayloadError::Rep(r) => Failure::module("rep", "payload.table", r.to_string()),
            PayloadError::Sigma(s) => Failure::module("sigma", "payload", s.to_string()),
        }
    }
}

fn group_bound() -> usize {
    std::env::var("EQUICOUNT_MAX_GROUP_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}

fn schema_text() -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "job": {"command": "sigma|contribution|torus|covers|index|taubes|verify",
                "payload": "command-specific object", "output_path": "optional file"},
        "group": {"mul_table": "[[..],..] square table of element indices",
                  "abelian": "[d1, d2, ...] direct product of cyclic groups"},
        "character_value": "integer | {re_num,re_den,im_num,im_den} | [{root_of_unity:{order,power},coeff:{num,den}}...]",
        "commands": {
            "sigma": {"group": "group", "table": "optional rows of character values",
                       "flags": [{"irrep": "usize", "complex_isotopic": "bool"}]},
            "contribution": "same as sigma",
            "covers": "same as sigma (the group is the deck group of the cover)",
            "torus": {"sigma_rho0": "+1|-1", "flags": "[b1,b2,b3]", "max_index": "int >= 1"},
            "index": {"free_smooth": {"group": "group", "g": "int>=1", "n": "int", "c1": "int"},
                       "curve": {"group": "group", "h0_tstar_ck": {"coeffs": {"idx": "int"}},
                                  "h0_tc": "KClass", "h0_k": "KClass", "n": "int",
                                  "orbits": [{"stabilizer": "[elem indices]", "c1_integral": "int"}]}},
            "taubes": {"gr form": {"classes": [{"genus": "int", "beta_id": "str", "homology": "[int]",
                                                  "c1": "int", "n": "int"}],
                                    "pairing": "[[int]] symmetric", "A": "[int]",
                                    "convention": "geometric|binomial",
                                    "caps": {"per_class": "[u32]", "total": "u32"}},
                        "weight form": {"weight_series": {"a": "int", "b": "int", "c": "int",
                                                            "p": "geometric|binomial", "cap": "u32"}}},
            "verify": {"m": "u32", "w_domain": "u32", "w_target": "u32",
                        "reference": "conjugation|scalar|{scalar:[re,im]}",
                        "max_degree": "u32 (4)", "cutoff": "f64 (1.0)", "outer": "f64 (2.0)",
                        "min_box": "f64 (2^-30)", "quadrature_points": "u32 (8)", "seeds": "[u64]"}
        }
    })
}

fn dyadic_json(x: f64) -> Value {
    let d = to_dyadic(x);
    json!({"mantissa": d.mantissa, "exponent": d.exponent})
}

fn report_json(r: &ZeroReport) -> Value {
    json!({
        "seed": r.seed,
        "outer_winding": r.outer_winding,
        "residual_winding": r.residual_winding,
        "sigma_hat": isotropy_to_json(&r.sigma_hat),
        "zeros": r.zeros.iter().map(|z| json!({
            "center": [dyadic_json(z.enclosure.cx), dyadic_json(z.enclosure.cy)],
            "half": dyadic_json(z.enclosure.half),
            "local_degree": z.local_degree,
            "isotropy": r.lattice.subgroup(z.isotropy_index).elements(),
        })).collect::<Vec<_>>(),
    })
}

fn oracle_failure(e: OracleError) -> Failure {
    let code = match &e {
        OracleError::Mismatch { .. } => "mismatch",
        OracleError::Inconclusive { .. } => "inconclusive",
        OracleError::OuterBoundaryZero => "outer_boundary",
        OracleError::OrbitAsymmetry { .. } => "orbit_asymmetry",
        _ => "oracle",
    };
    Failure::module(code, "payload", e.to_string())
}

fn run_command(
    command: &str,
    payload: Value,
    opts: &Options,
) -> Result<(Value, Option<Vec<u64>>), Failure> {
    let bound = group_bound();
    match command {
        "sigma" | "contribution" | "covers" => {
            let p: SigmaPayload = serde_json::from_value(payload)
                .map_err(|e| Failure::schema("payload", e.to_string()))?;
            let (ctx, flags) = p.context_and_flags(bound)?;
            let sigma = ctx
                .sigma_f(&flags)
                .map_err(|e| Failure::module("sigma", "payload.flags", e.to_string()))?;
            let mut out = json!({
                "sigma": isotropy_to_json(&sigma),
                "coerced_flags": flags.coerced_indices(),
            });
            if command != "sigma" {
                let c = cover_contribution(&ctx, &flags)
                    .map_err(|e| Failure::module("sigma", "payload", e.to_string()))?;
                out["contribution"] = serde_json::to_value(contribution_to_json(&c)).unwrap();
            }
            Ok((out, None))
        }
        "torus" => {
            let p: TorusPayload = serde_json::from_value(payload)
                .map_err(|e| Failure::schema("payload", e.to_string()))?;
            let case = p.case()?;
            let table = torus_table_threads(&case, p.max_index, opts.threads)
                .map_err(|e| Failure::module("sigma", "payload", e.to_string()))?;
            let rows: Vec<Value> = table
                .iter()
                .map(|(k, c)| {
                    json!({
                        "sublattice": sublattice_to_json(k),
                        "contribution": contribution_to_json(c),
                    })
                })
                .collect();
            Ok((json!({ "table": rows }), None))
        }
        "index" => {
            let p: IndexPayload = serde_json::from_value(payload)
                .map_err(|e| Failure::schema("payload", e.to_string()))?;
            let (table, class) = match &p {
                IndexPayload::FreeSmooth { free_smooth } => {
                    let g = free_smooth.group.build(bound)?;
                    let table = equicount::json::character_table_from_json(
                        g,
                        free_smooth.table.as_deref(),
                    )?;
                    let k = index::index_free_smooth(
                        free_smooth.g,
                        free_smooth.n,
                        free_smooth.c1,
                        &table,
                    )
                    .map_err(|e| Failure::module("index", "payload.free_smooth", e.to_string()))?;
                    (table, k)
                }
                IndexPayload::Curve { curve } => {
                    let g = curve.group.build(bound)?;
                    let table =
                        equicount::json::character_table_from_json(g, curve.table.as_deref())?;
                    let data = curve.to_curve_data(&table)?;
                    let k = index::index_class(&data, &table)
                        .map_err(|e| Failure::module("index", "payload.curve", e.to_string()))?;
                    (table, k)
                }
            };
            let dim = index::invariant_dim(&class, &table)
                .map_err(|e| Failure::module("index", "payload", e.to_string()))?;
            Ok((
                json!({
                    "index": serde_json::to_value(kclass_to_json(&class)).unwrap(),
                    "invariant_dim": dim,
                    "complex_dim": class.dim(&table),
                }),
                None,
            ))
        }
        "taubes" => {
            let p: TaubesPayload = serde_json::from_value(payload)
                .map_err(|e| Failure::schema("payload", e.to_string()))?;
            match p {
                TaubesPayload::Gr {
                    classes,
                    pairing,
                    a,
                    convention,
                    caps,
                } => {
                    let classes = classes_from_json(&classes);
                    let pairing = pairing_from_json(&pairing)?;
                    let caps = caps_from_json(&caps);
                    if caps.per_class.len() != classes.len() {
                        return Err(Failure::schema(
                            "payload.caps.per_class",
                            "need one cap per class",
                        ));
                    }
                    let style: GrStyle = convention.into();
                    let g = gr_coefficient(&classes, &a, &pairing, style, &caps)
                        .map_err(|e| Failure::module("taubes", "payload", e.to_string()))?;
                    let g64 = i64::try_from(g).map_err(|_| {
                        Failure::module("taubes", "payload", "coefficient exceeds i64")
                    })?;
                    let series = expand_invariant_product(&classes, style, &caps);
                    Ok((
                        json!({
                            "coefficient": g64,
                            "series": series.to_string(),
                        }),
                        None,
                    ))
                }
                TaubesPayload::WeightSeries { weight_series: w } => {
                    let coeffs = torus_weight_series(w.a, w.b, w.c, w.p.into(), w.cap);
                    let as64: Result<Vec<i64>, _> =
                        coeffs.iter().map(|&c| i64::try_from(c)).collect();
                    let as64 = as64.map_err(|_| {
                        Failure::module(
                            "taubes",
                            "payload.weight_series",
                            "coefficient exceeds i64",
                        )
                    })?;
                    Ok((json!({ "coefficients": as64 }), None))
                }
            }
        }
        "verify" => {
            let p: VerifyPayload = serde_json::from_value(payload)
                .map_err(|e| Failure::schema("payload", e.to_string()))?;
            let fallback: Vec<u64> = opts.seed.map(|s| vec![s]).unwrap_or_default();
            let case = p.to_case(&fallback)?;
            let seeds = case.seeds.clone();
            let out = verify_sigma(&case).map_err(oracle_failure)?;
            Ok((
                json!({
                    "match": true,
                    "sigma": isotropy_to_json(&out.sigma_predicted),
                    "reports": out.reports.iter().map(report_json).collect::<Vec<_>>(),
                }),
                Some(seeds),
            ))
        }
        other => Err(Failure::schema(
            "command",
            format!("unknown command '{other}'"),
        )),
    }
}

fn run() -> Result<(), Failure> {
    let opts = parse_args().map_err(|m| Failure::schema("argv", m))?;
    if opts.print_schema {
        println!("{}", serde_json::to_string_pretty(&schema_text()).unwrap());
        return Ok(());
    }
    let input = opts
        .input
        .as_ref()
        .ok_or_else(|| Failure::schema("argv", format!("--input is required\n{}", usage())))?;
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure::schema("argv.input", format!("cannot read '{input}': {e}")))?;
    let job: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::schema("job", format!("invalid JSON: {e}")))?;
    let command = job
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::schema("job.command", "missing or non-string"))?
        .to_string();
    let payload = job.get("payload").cloned().unwrap_or(Value::Null);
    let job_output = job
        .get("output_path")
        .and_then(Value::as_str)
        .map(str::to_string);

    let (result, seeds) = run_command(&command, payload, &opts)?;

    let mut envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": result,
        "generated_unix_ms": SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0),
    });
    if let Some(seeds) = seeds {
        envelope["seeds"] = json!(seeds);
    }
    let body = serde_json::to_string_pretty(&envelope).unwrap();

    let target = opts.output.clone().or(job_output);
    match target {
        Some(path) => std::fs::write(&path, body.as_bytes())
            .map_err(|e| Failure::schema("argv.output", format!("cannot write '{path}': {e}")))?,
        None => println!("{body}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let obj = json!({
                "error": { "code": f.code, "message": f.message, "path": f.path }
            });
            eprintln!("{}", serde_json::to_string_pretty(&obj).unwrap());
            ExitCode::from(f.exit)
        }
    }
}
