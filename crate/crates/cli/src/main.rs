use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use wilson_knot::catalog::{evaluate, prime_consistency_check};
use wilson_knot::kz::{phase, spectrum_distance, unitarity_defect, DEFAULT_TOL};
use wilson_knot::rewrite::normalize_with_stats;
use wilson_knot::{
    apply_reidemeister, braid_closure, build_system, conformal_weight, encode, jones,
    kauffman_bracket, load_table, monodromy, parse_braid, parse_pd_with_unknots, r_matrix,
    reidemeister_sites, sites_of_kind, skein_coefficients, Diagram, EncodeOptions, MonodromyMatrix,
    SearchConfig, Singularity,
};

#[derive(Parser)]
#[command(
    name = "wilson-knot",
    version,
    about = "Wilson-loop word invariants of knot diagrams"
)]
struct Cli {
    /// also print a readable summary on stderr
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize the encoded word and report the power index
    Invariant {
        #[command(flatten)]
        input: DiagramInput,
        #[command(flatten)]
        encoding: EncodingArgs,
        /// include every rewrite step
        #[arg(long)]
        trace: bool,
        /// let quasi-commutation ignore stamp order
        #[arg(long)]
        unguarded: bool,
    },
    /// Jones polynomial and Kauffman bracket
    Jones {
        #[command(flatten)]
        input: DiagramInput,
    },
    /// Monodromy of the four-point KZ connection
    Kz {
        #[arg(long = "N", short = 'N')]
        n: i64,
        #[arg(long, short = 'k')]
        k: i64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Classification table
    Table {
        #[arg(long)]
        m: Option<i64>,
        /// look an entry up by name, e.g. "3_1*4_1"
        #[arg(long)]
        name: Option<String>,
        /// report the prime consistency check
        #[arg(long)]
        check: bool,
    },
    /// List or apply Reidemeister moves
    Rmoves {
        #[command(flatten)]
        input: DiagramInput,
        /// move type to apply
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        apply: Option<u8>,
        /// index among the sites of that move type
        #[arg(long, default_value_t = 0)]
        site: usize,
    },
    /// Wilson word of a diagram
    Encode {
        #[command(flatten)]
        input: DiagramInput,
        #[command(flatten)]
        encoding: EncodingArgs,
    },
}

#[derive(Args)]
struct DiagramInput {
    /// file holding a PD code ("-" reads stdin)
    #[arg(long, conflicts_with_all = ["pd_text", "braid"])]
    pd: Option<PathBuf>,
    /// PD code given inline
    #[arg(long, conflicts_with = "braid")]
    pd_text: Option<String>,
    /// braid word such as "1 -2 1"
    #[arg(long, allow_hyphen_values = true)]
    braid: Option<String>,
    /// strand count of the braid (defaults to one more than the largest generator)
    #[arg(long)]
    strands: Option<usize>,
    /// free unknotted components added to a PD code
    #[arg(long, default_value_t = 0)]
    unknots: usize,
}

#[derive(Args)]
struct EncodingArgs {
    /// component order, 1-based, comma separated
    #[arg(long, value_delimiter = ',')]
    ordering: Option<Vec<usize>>,
    /// starting arc per component with crossings, 1-based, comma separated
    #[arg(long, value_delimiter = ',')]
    basepoints: Option<Vec<usize>>,
}

struct Failure {
    exit: u8,
    code: String,
    detail: String,
}

impl Failure {
    fn input(code: &str, detail: impl ToString) -> Failure {
        Failure {
            exit: 1,
            code: code.into(),
            detail: detail.to_string(),
        }
    }

    fn limit(code: &str, detail: impl ToString) -> Failure {
        Failure {
            exit: 2,
            code: code.into(),
            detail: detail.to_string(),
        }
    }
}

macro_rules! input_err {
    ($e:ty) => {
        |err: $e| Failure::input(err.code(), &err)
    };
}

fn read_diagram(input: &DiagramInput) -> Result<Diagram, Failure> {
    if let Some(word) = &input.braid {
        let strands = match input.strands {
            Some(s) => s,
            None => {
                let max = word
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter_map(|t| t.parse::<i64>().ok())
                    .map(|g| g.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(1);
                max + 1
            }
        };
        let b = parse_braid(word, strands).map_err(input_err!(wilson_knot::DiagramError))?;
        return Ok(braid_closure(&b));
    }
    let text = match (&input.pd, &input.pd_text) {
        (Some(path), _) if path.as_os_str() == "-" => {
            std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::input("io_error", e))?
        }
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| Failure::input("io_error", format!("{}: {e}", path.display())))?,
        (None, Some(t)) => t.clone(),
        (None, None) => {
            return Err(Failure::input(
                "missing_input",
                "give --pd, --pd-text or --braid",
            ))
        }
    };
    parse_pd_with_unknots(&text, input.unknots).map_err(input_err!(wilson_knot::DiagramError))
}

fn encode_options(d: &Diagram, args: &EncodingArgs) -> Result<EncodeOptions, Failure> {
    let one_based = |v: &Vec<usize>, code: &str, what: &str| -> Result<Vec<usize>, Failure> {
        v.iter()
            .map(|&x| {
                x.checked_sub(1)
                    .ok_or_else(|| Failure::input(code, format!("{what} are 1-based")))
            })
            .collect()
    };
    let ordering = args
        .ordering
        .as_ref()
        .map(|o| one_based(o, "invalid_ordering", "components"))
        .transpose()?;
    let basepoints = args
        .basepoints
        .as_ref()
        .map(|b| one_based(b, "invalid_basepoint", "arcs"))
        .transpose()?;
    if let Some(o) = &ordering {
        if o.len() != d.component_count() {
            return Err(Failure::input(
                "invalid_ordering",
                format!("{} entries for {} components", o.len(), d.component_count()),
            ));
        }
    }
    Ok(EncodeOptions {
        ordering,
        basepoints,
    })
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn rational<T: ToString>(m: &[[T; 2]; 2]) -> Value {
    json!(m
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// row-major, each entry as `[re, im]`
fn matrix(m: &MonodromyMatrix) -> Value {
    json!([
        complex(m[(0, 0)]),
        complex(m[(0, 1)]),
        complex(m[(1, 0)]),
        complex(m[(1, 1)])
    ])
}

fn run(cli: &Cli) -> Result<(Value, String), Failure> {
    match &cli.command {
        Command::Invariant {
            input,
            encoding,
            trace,
            unguarded,
        } => {
            let d = read_diagram(input)?;
            let opts = encode_options(&d, encoding)?;
            let w = encode(&d, &opts).map_err(input_err!(wilson_knot::EncodeError))?;
            let mut cfg = SearchConfig::from_env();
            cfg.guarded = !unguarded;
            let out = normalize_with_stats(&w, &cfg).map_err(|e| match e {
                wilson_knot::RewriteError::NonWilsonInput(_) => Failure::input(e.code(), &e),
                _ => Failure::limit(e.code(), &e),
            })?;
            let nf = &out.normal_form;
            let mut v = json!({
                "e": nf.e,
                "m": -nf.e,
                "loops": nf.loops.len(),
                "loop_labels": nf.loops,
                "steps": out.log.steps.len(),
                "states": out.states,
                "word": w.to_string(),
                "normal_form": out.output.to_string(),
            });
            if *trace {
                v["trace"] = serde_json::to_value(&out.log.steps).expect("steps serialize");
            }
            let human = format!(
                "{w}\n  => {}\n  e = {}, m = {}, {} states",
                out.output, nf.e, -nf.e, out.states
            );
            Ok((v, human))
        }
        Command::Jones { input } => {
            let d = read_diagram(input)?;
            let v_poly = jones(&d).map_err(input_err!(wilson_knot::JonesError))?;
            let bracket = kauffman_bracket(&d).map_err(input_err!(wilson_knot::JonesError))?;
            let human = format!("V(t) = {v_poly}\n<D> = {bracket}");
            Ok((
                json!({
                    "jones": v_poly,
                    "jones_text": v_poly.to_string(),
                    "bracket": bracket,
                    "writhe": d.writhe(),
                    "crossings": d.crossing_count(),
                    "components": d.component_count(),
                }),
                human,
            ))
        }
        Command::Kz { n, k, tol } => {
            let sys = build_system(*n, *k).map_err(input_err!(wilson_knot::KzError))?;
            let kz_fail = |e: wilson_knot::KzError| match e {
                wilson_knot::KzError::StepUnderflow { .. } => Failure::limit(e.code(), &e),
                _ => Failure::input(e.code(), &e),
            };
            let m0 = monodromy(&sys, Singularity::Zero, *tol).map_err(kz_fail)?;
            let m1 = monodromy(&sys, Singularity::One, *tol).map_err(kz_fail)?;
            let exact0 = sys.p_eigenvalues().map(phase);
            let exact1 = sys.q_eigenvalues().map(phase);
            let coupling = r_matrix(*n, *k).map_err(input_err!(wilson_knot::KzError))?;
            let residual = skein_coefficients(&m0.matrix).residual;
            let v = json!({
                "N": n,
                "k": k,
                "tol": tol,
                "P": rational(&sys.p),
                "Q": rational(&sys.q),
                "eigP": sys.p_eigenvalues().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "eigQ": sys.q_eigenvalues().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "monodromy0": {
                    "matrix": matrix(&m0.matrix),
                    "eig": m0.eigenvalues.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                    "eig_error": spectrum_distance(&m0.eigenvalues, &exact0),
                },
                "monodromy1": {
                    "matrix": matrix(&m1.matrix),
                    "eig": m1.eigenvalues.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                    "eig_error": spectrum_distance(&m1.eigenvalues, &exact1),
                },
                "residual": residual,
                "conformal_weight": conformal_weight(*n, *k).map_err(input_err!(wilson_knot::KzError))?.to_string(),
                "t_hat_eigenvalues": coupling.t_eigenvalues,
                "r_unitarity_defect": unitarity_defect(&coupling.r),
            });
            let human = format!(
                "N={n} k={k}\n  eig P = {:?}\n  monodromy around 0: {:?}\n  Cayley-Hamilton residual {residual:e}",
                sys.p_eigenvalues().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                m0.eigenvalues
            );
            Ok((v, human))
        }
        Command::Table { m, name, check } => {
            let table = load_table();
            if *check {
                let report = prime_consistency_check(&table);
                let human = format!("{} violations", report.violations);
                return Ok((
                    serde_json::to_value(report).expect("report serializes"),
                    human,
                ));
            }
            if let Some(m) = m {
                let e = table
                    .lookup_by_m(*m)
                    .ok_or_else(|| Failure::input("not_found", format!("no entry with m = {m}")))?;
                return Ok((
                    serde_json::to_value(e).expect("entry serializes"),
                    format!("{} : m = {}", e.name, e.m),
                ));
            }
            if let Some(name) = name {
                if let Some(e) = table.lookup_by_name(name) {
                    return Ok((
                        serde_json::to_value(e).expect("entry serializes"),
                        format!("{} : m = {}", e.name, e.m),
                    ));
                }
                let s = evaluate(name).map_err(input_err!(wilson_knot::CatalogError))?;
                return Ok((
                    json!({"name": s.name, "crossings": s.crossings, "alternating": s.alternating, "m": null}),
                    format!("{} is not in the table", s.name),
                ));
            }
            let human = table
                .entries
                .iter()
                .map(|e| format!("{:>3}  {}", e.m, e.name))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((
                serde_json::to_value(&table).expect("table serializes"),
                human,
            ))
        }
        Command::Rmoves { input, apply, site } => {
            let d = read_diagram(input)?;
            let Some(kind) = apply else {
                let sites = reidemeister_sites(&d);
                let human = format!("{} sites", sites.len());
                return Ok((json!({ "sites": sites }), human));
            };
            let sites = sites_of_kind(&d, *kind);
            let mv = sites.get(*site).ok_or_else(|| {
                Failure::input(
                    "invalid_site",
                    format!("{} sites of type {kind}, asked for {site}", sites.len()),
                )
            })?;
            let out = apply_reidemeister(&d, mv).map_err(input_err!(wilson_knot::MoveError))?;
            let human = out.to_pd_string();
            Ok((
                json!({ "move": mv, "diagram": out.to_json(), "pd": out.to_pd_string() }),
                human,
            ))
        }
        Command::Encode { input, encoding } => {
            let d = read_diagram(input)?;
            let opts = encode_options(&d, encoding)?;
            let w = encode(&d, &opts).map_err(input_err!(wilson_knot::EncodeError))?;
            let mut v = serde_json::to_value(w.to_json()).expect("word serializes");
            v["text"] = json!(w.to_string());
            Ok((v, w.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, human)) => {
            // a closed downstream pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{value}");
            if cli.human {
                eprintln!("{human}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": f.code, "detail": f.detail }));
            ExitCode::from(f.exit)
        }
    }
}
