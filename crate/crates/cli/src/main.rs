//! Command-line front end: parses the text formats, runs the library, and
//! prints one deterministic JSON document per invocation on stdout.
//! Wall-clock time goes to stderr so identical inputs give byte-identical
//! stdout. Exit codes: 0 success, 1 domain error (JSON with the error
//! name), 2 usage error.

use clap::{Parser, Subcommand, ValueEnum};
use pivotlab::boundary::{sum_reconstruct, BoundariedChainGroup};
use pivotlab::chaingroup::{self, ChainGroup, MatrixRepresentation};
use pivotlab::containment;
use pivotlab::deltamatroid::DeltaMatroid;
use pivotlab::error::Error as LibError;
use pivotlab::fmatrix::{self, LabeledMatrix};
use pivotlab::linking::{self, LinkingMode};
use pivotlab::subset::Subset;
use pivotlab::tuttebridge;
use pivotlab::widths;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "pivotlab", version, about = "Pivots, Schur complements, chain-groups, and width parameters over small finite fields")]
struct Cli {
    /// Pretty-print the JSON output (whitespace only; same data).
    #[arg(long, global = true)]
    pretty: bool,
    /// Override every size cap of the invoked command.
    #[arg(long, global = true, value_name = "N")]
    max_n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Brute,
    Inductive,
}

#[derive(Subcommand)]
enum Command {
    /// Exact rank-width of a matrix with a witness decomposition.
    Rankwidth { file: String },
    /// Principal pivot transform M*Y (sign-folded for symmetric matrices).
    Pivot {
        file: String,
        /// Comma-separated labels of the pivot block.
        #[arg(long, value_name = "LABELS")]
        block: String,
    },
    /// Schur complement (M/A) with A = M[block].
    Schur {
        file: String,
        #[arg(long, value_name = "LABELS")]
        block: String,
    },
    /// Dimensions, isotropy, an eulerian witness, and the branch-width of a
    /// chain-group (or of the standard representation of a matrix file).
    ChaingroupInfo { file: String },
    /// The linking optimum between two disjoint label sets, with witnesses.
    Linking {
        file: String,
        #[arg(long, value_name = "LABELS", default_value = "")]
        x: String,
        #[arg(long, value_name = "LABELS", default_value = "")]
        y: String,
        #[arg(long, value_enum, default_value = "brute")]
        mode: ModeArg,
    },
    /// Feasible sets of the delta-matroid of a matrix.
    Deltamatroid { file: String },
    /// Matroid of a Tutte chain-group: rank, circuits, branch-width.
    Matroid { file: String },
    /// Whether the first matrix is a pivot-minor of the second.
    Contain { guest: String, host: String },
    /// Pairwise pivot-minor containment over a list of matrix files.
    WqoScan { files: Vec<String> },
    /// Decompose a chain-group along a split and rebuild it from the
    /// connection type; reports whether the round trip is exact.
    SumRoundtrip {
        file: String,
        #[arg(long, value_name = "LABELS")]
        split: String,
    },
}

fn main() {
    let started = Instant::now();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(value) => {
            print_json(&value, cli.pretty);
            0
        }
        Err(err) => {
            let value = json!({"error": {"name": err.name(), "message": err.to_string()}});
            print_json(&value, cli.pretty);
            1
        }
    };
    eprintln!("wall_time_ms {}", started.elapsed().as_millis());
    std::process::exit(code);
}

fn print_json(value: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    };
    println!("{text}");
}

struct Input {
    path: String,
    sha256: String,
    text: String,
}

fn read_input(path: &str) -> Result<Input, LibError> {
    let bytes = std::fs::read(path).map_err(|e| LibError::ParseError {
        line: 0,
        reason: format!("cannot read `{path}`: {e}"),
    })?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let sha256 = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    let text = String::from_utf8(bytes).map_err(|_| LibError::ParseError {
        line: 0,
        reason: format!("`{path}` is not UTF-8"),
    })?;
    Ok(Input {
        path: path.to_string(),
        sha256,
        text,
    })
}

fn inputs_json(inputs: &[&Input]) -> Value {
    Value::Array(
        inputs
            .iter()
            .map(|i| json!({"path": i.path, "sha256": i.sha256}))
            .collect(),
    )
}

fn effective_cap(cli: &Cli, default: usize) -> usize {
    if let Some(n) = cli.max_n {
        return n;
    }
    if let Ok(v) = std::env::var("PIVOTLAB_MAX_N") {
        if let Ok(n) = v.parse() {
            return n;
        }
    }
    default
}

fn parse_labels(m: &fmatrix::GroundSet, arg: &str) -> Result<Subset, LibError> {
    let labels: Vec<&str> = arg
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    m.subset_from_labels(&labels)
}

/// A chain-group file parses directly; a matrix file is interpreted through
/// its standard special representation.
fn load_chain_group(text: &str) -> Result<ChainGroup, LibError> {
    let is_chain_file = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("form"));
    if is_chain_file {
        chaingroup::parse_chain_group(text)
    } else {
        let m = fmatrix::parse_matrix(text)?;
        Ok(MatrixRepresentation::standard(m).chain_group())
    }
}

fn matrix_json(m: &LabeledMatrix) -> Value {
    let rows: Vec<Vec<u16>> = (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.get(i, j).index()).collect())
        .collect();
    json!({
        "field": m.field().order(),
        "kind": m.kind().as_str(),
        "elements": m.ground().labels(),
        "rows": rows,
        "text": fmatrix::format_matrix(m),
    })
}

fn labels_json(ground: &fmatrix::GroundSet, s: Subset) -> Value {
    Value::Array(
        ground
            .labels_from_subset(s)
            .into_iter()
            .map(|l| Value::String(l.to_string()))
            .collect(),
    )
}

fn run(cli: &Cli) -> Result<Value, LibError> {
    match &cli.command {
        Command::Rankwidth { file } => {
            let input = read_input(file)?;
            let m = fmatrix::parse_matrix(&input.text)?;
            let cap = effective_cap(cli, 12);
            let report = widths::rank_width_with_cap(&m, cap)?;
            Ok(json!({
                "command": "rankwidth",
                "inputs": inputs_json(&[&input]),
                "params": {"max_n": cap},
                "result": {
                    "rank_width": report.width,
                    "tree": report.tree,
                    "edges": report.per_edge,
                },
            }))
        }
        Command::Pivot { file, block } => {
            let input = read_input(file)?;
            let m = fmatrix::parse_matrix(&input.text)?;
            let y = parse_labels(m.ground(), block)?;
            let piv = m.pivot(y)?;
            Ok(json!({
                "command": "pivot",
                "inputs": inputs_json(&[&input]),
                "params": {"block": labels_json(m.ground(), y)},
                "result": matrix_json(&piv),
            }))
        }
        Command::Schur { file, block } => {
            let input = read_input(file)?;
            let m = fmatrix::parse_matrix(&input.text)?;
            let y = parse_labels(m.ground(), block)?;
            let s = m.schur(y)?;
            Ok(json!({
                "command": "schur",
                "inputs": inputs_json(&[&input]),
                "params": {"block": labels_json(m.ground(), y)},
                "result": matrix_json(&s),
            }))
        }
        Command::ChaingroupInfo { file } => {
            let input = read_input(file)?;
            let n = load_chain_group(&input.text)?;
            let cap = effective_cap(cli, 12);
            let isotropic = n.is_isotropic();
            let eulerian = if isotropic && n.ground().len() <= cap {
                let e = n.special_eulerian()?;
                let values: Vec<String> = (0..n.ground().len())
                    .map(|v| {
                        let (t, b) = e.get(v);
                        format!("{t},{b}")
                    })
                    .collect();
                Value::Array(values.into_iter().map(Value::String).collect())
            } else {
                Value::Null
            };
            let bw = if n.ground().len() <= cap {
                let report = widths::branch_width_with_cap(&n, cap)?;
                json!({"width": report.width, "tree": report.tree})
            } else {
                Value::Null
            };
            Ok(json!({
                "command": "chaingroup-info",
                "inputs": inputs_json(&[&input]),
                "params": {"max_n": cap},
                "result": {
                    "elements": n.ground().labels(),
                    "field": n.field().order(),
                    "form": n.form().as_str(),
                    "dim": n.dim(),
                    "is_isotropic": isotropic,
                    "is_lagrangian": n.is_lagrangian(),
                    "special_eulerian": eulerian,
                    "branch_width": bw,
                },
            }))
        }
        Command::Linking { file, x, y, mode } => {
            let input = read_input(file)?;
            let n = load_chain_group(&input.text)?;
            let xm = parse_labels(n.ground(), x)?;
            let ym = parse_labels(n.ground(), y)?;
            if xm & ym != 0 {
                return Err(LibError::PreconditionFailed {
                    reason: "x and y must be disjoint".to_string(),
                });
            }
            let cap = effective_cap(cli, 16);
            let lm = match mode {
                ModeArg::Brute => LinkingMode::BruteForce,
                ModeArg::Inductive => LinkingMode::Inductive,
            };
            let res = linking::linking_with_mode_and_cap(&n, xm, ym, lm, cap)?;
            Ok(json!({
                "command": "linking",
                "inputs": inputs_json(&[&input]),
                "params": {
                    "x": labels_json(n.ground(), xm),
                    "y": labels_json(n.ground(), ym),
                    "mode": if *mode == ModeArg::Brute { "brute" } else { "inductive" },
                    "max_gap": cap,
                },
                "result": {
                    "value": res.value,
                    "min_witness": labels_json(n.ground(), res.min_witness),
                    "max_witness": {
                        "delete": labels_json(n.ground(), res.max_witness.0),
                        "contract": labels_json(n.ground(), res.max_witness.1),
                    },
                },
            }))
        }
        Command::Deltamatroid { file } => {
            let input = read_input(file)?;
            let m = fmatrix::parse_matrix(&input.text)?;
            let cap = effective_cap(cli, 20);
            let d = DeltaMatroid::from_matrix_with_cap(&m, cap)?;
            let feasible: Vec<Value> = d
                .feasible()
                .iter()
                .map(|&s| labels_json(d.ground(), s))
                .collect();
            Ok(json!({
                "command": "deltamatroid",
                "inputs": inputs_json(&[&input]),
                "params": {"max_n": cap},
                "result": {
                    "elements": d.ground().labels(),
                    "feasible": feasible,
                    "even": d.is_even(),
                    "sea": true,
                },
            }))
        }
        Command::Matroid { file } => {
            let input = read_input(file)?;
            let n = tuttebridge::parse_tutte(&input.text)?;
            let cap = effective_cap(cli, 16);
            let m = tuttebridge::matroid_from_with_cap(&n, cap)?;
            let circuits: Vec<Value> = m
                .circuits()
                .iter()
                .map(|&c| labels_json(m.ground(), c))
                .collect();
            let supports: Vec<Value> = n
                .minimal_supports()?
                .iter()
                .map(|&c| labels_json(n.ground(), c))
                .collect();
            let bw_cap = cap.min(12);
            let bw = if n.ground().len() <= bw_cap {
                let report = m.branch_width_with_cap(bw_cap)?;
                json!({"width": report.width, "tree": report.tree})
            } else {
                Value::Null
            };
            Ok(json!({
                "command": "matroid",
                "inputs": inputs_json(&[&input]),
                "params": {"max_n": cap},
                "result": {
                    "elements": m.ground().labels(),
                    "rank": m.full_rank(),
                    "circuits": circuits,
                    "minimal_supports": supports,
                    "branch_width": bw,
                },
            }))
        }
        Command::Contain { guest, host } => {
            let gi = read_input(guest)?;
            let hi = read_input(host)?;
            let g = fmatrix::parse_matrix(&gi.text)?;
            let h = fmatrix::parse_matrix(&hi.text)?;
            let cap = effective_cap(cli, 8);
            let w = containment::pivot_minor_contained_with_cap(&g, &h, cap)?;
            let result = match w {
                Some(w) => json!({
                    "contained": true,
                    "witness": w,
                }),
                None => json!({"contained": false}),
            };
            Ok(json!({
                "command": "contain",
                "inputs": inputs_json(&[&gi, &hi]),
                "params": {"max_n": cap},
                "result": result,
            }))
        }
        Command::WqoScan { files } => {
            if files.is_empty() {
                return Err(LibError::ParseError {
                    line: 0,
                    reason: "wqo-scan needs at least one matrix file".to_string(),
                });
            }
            let inputs: Vec<Input> = files
                .iter()
                .map(|f| read_input(f))
                .collect::<Result<_, _>>()?;
            let matrices: Vec<LabeledMatrix> = inputs
                .iter()
                .map(|i| fmatrix::parse_matrix(&i.text))
                .collect::<Result<_, _>>()?;
            let cap = effective_cap(cli, 8);
            let report = containment::quasi_order_report_with_caps(&matrices, cap, 200)?;
            let refs: Vec<&Input> = inputs.iter().collect();
            Ok(json!({
                "command": "wqo-scan",
                "inputs": inputs_json(&refs),
                "params": {"max_n": cap},
                "result": report,
            }))
        }
        Command::SumRoundtrip { file, split } => {
            let input = read_input(file)?;
            let n = load_chain_group(&input.text)?;
            let v1 = parse_labels(n.ground(), split)?;
            let p = BoundariedChainGroup::new(n, None)?;
            let (p1, p2, ct) = p.sum_decompose(v1)?;
            let rebuilt = sum_reconstruct(&p1, &p2, &ct)?;
            let ok = rebuilt.with_ground_order(p.ground())? == p;
            Ok(json!({
                "command": "sum-roundtrip",
                "inputs": inputs_json(&[&input]),
                "params": {"split": labels_json(p.ground(), v1)},
                "result": {
                    "boundary_sizes": [p1.boundary().len(), p2.boundary().len()],
                    "c0_dim": ct.c0_dim(),
                    "cosets": ct.coset_count(),
                    "cosets_are_cosets_of_c0": ct.cosets_are_cosets_of_c0(),
                    "roundtrip_ok": ok,
                },
            }))
        }
    }
}
