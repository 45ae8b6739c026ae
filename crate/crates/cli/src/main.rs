//! `multisym`: file-based front end to the power-sum embedding library.
//!
//! Exit status is 0 on success, 2 for usage and domain errors (including
//! malformed input), 1 when a file cannot be read or written.

mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multisym::calculus::DEFAULT_RANK_TOL;
use multisym::decompose::{eval_g_values, FIT_SYMMETRY_TOL};
use multisym::geometry2x2::{fiber_cardinality_scan, ScanGrid};
use multisym::probes::{geometric_params, DEFAULT_T_START, DEFAULT_T_STEPS};
use multisym::separation::optimal_matching;
use multisym::{
    builtin_example, check_symmetry, classify_rank, embed, enumerate_generators, evaluate_separating, fiber, fit_g,
    image_membership, invert_d1, jacobian, orbit_equal, quotient_distance, separating_polynomial, Configuration, Error,
    ExponentVector, FiberQuery, FittedDecomposition, GeneratorBasis,
};
use serde_json::{json, Value};

use output::{Field, Table};

#[derive(Parser)]
#[command(
    name = "multisym",
    version,
    about = "Power-sum embeddings of unordered point configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input file; stdin when omitted.
    #[arg(long = "in", global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Tolerance for rank, orbit-eq and check-sym.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,

    /// Round printed numbers to this many significant digits.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=17))]
    digits: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Series {
    Ratio,
    LogLog,
}

#[derive(Subcommand)]
enum Command {
    /// List the generator exponents in canonical order.
    Basis {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        include_constant: bool,
    },
    /// Power-sum embedding of a configuration.
    Embed,
    /// Analytic Jacobian, columns point-major.
    Jacobian,
    /// Singular values and rank of the Jacobian.
    Rank,
    /// Whether two configurations are equal up to permutation (within --tol).
    OrbitEq {
        #[arg(long, value_name = "PATH")]
        other: PathBuf,
    },
    /// Quotient distance and an optimal matching.
    Qdist {
        #[arg(long, value_name = "PATH")]
        other: PathBuf,
    },
    /// Symmetric polynomial separating two orbits.
    Separate {
        #[arg(long, value_name = "PATH")]
        other: PathBuf,
    },
    /// Tabulate g from a labelled dataset.
    FitG {
        #[arg(short)]
        d: usize,
    },
    /// Evaluate a tabulated g at a configuration (--in) or embedding (--z).
    EvalG {
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        z: Option<Vec<f64>>,
    },
    /// Recover a scalar multiset from its power sums.
    Invert1d {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        z: Option<Vec<f64>>,
    },
    /// Fiber of the two-points-in-the-plane embedding over (z1, z2, z3, z4).
    Fiber {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        z: Vec<f64>,
    },
    /// Fiber cardinality on a uniform grid in (z1, z2, z3, z4).
    FiberScan {
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        hi: f64,
        #[arg(long, default_value_t = 9)]
        steps: usize,
    },
    /// Regularity diagnostics for a builtin example.
    Probe {
        #[arg(long)]
        example: String,
        #[arg(long, default_value_t = DEFAULT_T_START)]
        t_start: f64,
        #[arg(long, default_value_t = DEFAULT_T_STEPS)]
        t_steps: usize,
        #[arg(long, value_enum, default_value_t = Series::Ratio)]
        series: Series,
    },
    /// Group a labelled dataset by orbit and report inconsistent values.
    CheckSym {
        #[arg(short)]
        d: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Basis { .. } => "basis",
            Command::Embed => "embed",
            Command::Jacobian => "jacobian",
            Command::Rank => "rank",
            Command::OrbitEq { .. } => "orbit-eq",
            Command::Qdist { .. } => "qdist",
            Command::Separate { .. } => "separate",
            Command::FitG { .. } => "fit-g",
            Command::EvalG { .. } => "eval-g",
            Command::Invert1d { .. } => "invert1d",
            Command::Fiber { .. } => "fiber",
            Command::FiberScan { .. } => "fiber-scan",
            Command::Probe { .. } => "probe",
            Command::CheckSym { .. } => "check-sym",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::FiberScan { .. } | Command::Probe { .. } => Format::Csv,
            _ => Format::Json,
        }
    }

    fn reads_input(&self) -> bool {
        !matches!(
            self,
            Command::Basis { .. } | Command::Fiber { .. } | Command::FiberScan { .. } | Command::Probe { .. }
        )
    }

    fn default_tol(&self) -> Option<f64> {
        match self {
            Command::Rank => Some(DEFAULT_RANK_TOL),
            Command::OrbitEq { .. } => Some(0.0),
            Command::CheckSym { .. } => Some(FIT_SYMMETRY_TOL),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SymmetryViolation(report) => {
                let detail = serde_json::to_value(&*report).expect("report serializes");
                Failure::Domain(format!(
                    "dataset violates permutation symmetry on {} orbit(s): {}",
                    report.violations.len(),
                    output::json(&violations_json(&detail), None).trim_end()
                ))
            }
            other => Failure::Domain(other.to_string()),
        }
    }
}

enum Rendered {
    Json(Value),
    Csv(Table),
}

fn label(s: &ExponentVector) -> String {
    let parts: Vec<String> = s.entries().iter().map(u32::to_string).collect();
    format!("s{}", parts.join("_"))
}

fn basis_json(basis: &GeneratorBasis) -> Value {
    basis.to_json()
}

fn nums(xs: &[f64]) -> Vec<Field> {
    xs.iter().map(|&x| Field::Num(x)).collect()
}

fn config_table(points: &[f64], d: usize) -> Table {
    let mut t = Table::new((1..=d).map(|a| format!("x{a}")));
    for p in points.chunks(d) {
        t.push(nums(p));
    }
    t
}

/// Records become 1-based data-row numbers.
fn violations_json(report: &Value) -> Value {
    let mut report = report.clone();
    if let Some(vs) = report.get_mut("violations").and_then(Value::as_array_mut) {
        for v in vs {
            let Some(obj) = v.as_object_mut() else { continue };
            let rows: Vec<u64> = obj
                .remove("records")
                .and_then(|r| serde_json::from_value::<Vec<u64>>(r).ok())
                .unwrap_or_default()
                .into_iter()
                .map(|r| r + 1)
                .collect();
            let min = obj.remove("min");
            let max = obj.remove("max");
            obj.insert("rows".into(), json!(rows));
            obj.insert("min".into(), min.unwrap_or(Value::Null));
            obj.insert("max".into(), max.unwrap_or(Value::Null));
        }
    }
    report
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let name = cli.command.name();
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    if cli.input.is_some() && !cli.command.reads_input() {
        return Err(Failure::Usage(format!("{name} does not read --in")));
    }
    let tol = match (cli.tol, cli.command.default_tol()) {
        (Some(_), None) => return Err(Failure::Usage(format!("{name} does not take --tol"))),
        (given, default) => given.or(default),
    };
    let input = cli.input.as_deref();

    let rendered = match &cli.command {
        Command::Basis { d, n, include_constant } => {
            let basis = enumerate_generators(*d, *n, *include_constant)?;
            match format {
                Format::Json => Rendered::Json(basis_json(&basis)),
                Format::Csv => {
                    let mut t = Table::new((1..=*d).map(|a| format!("s{a}")));
                    for s in basis.exponents() {
                        t.push(s.entries().iter().map(|&e| Field::from(e as usize)).collect());
                    }
                    Rendered::Csv(t)
                }
            }
        }
        Command::Embed => {
            let config = input::configuration_file(input)?;
            let basis = enumerate_generators(config.d(), config.n(), false)?;
            let e = embed(&basis, &config)?;
            match format {
                Format::Json => Rendered::Json(json!({ "basis": basis_json(&basis), "values": e.values() })),
                Format::Csv => {
                    let mut t = Table::new(basis.exponents().iter().map(label));
                    t.push(nums(e.values()));
                    Rendered::Csv(t)
                }
            }
        }
        Command::Jacobian => {
            let config = input::configuration_file(input)?;
            let basis = enumerate_generators(config.d(), config.n(), false)?;
            let j = jacobian(&basis, &config)?;
            let rows = j.to_rows();
            match format {
                Format::Json => Rendered::Json(json!({ "basis": basis_json(&basis), "matrix": rows })),
                Format::Csv => {
                    let columns = (1..=config.n()).flat_map(|i| (1..=config.d()).map(move |a| format!("p{i}_x{a}")));
                    let mut t = Table::new(std::iter::once("generator".to_string()).chain(columns));
                    for (s, row) in basis.exponents().iter().zip(&rows) {
                        let mut cells = vec![Field::from(label(s))];
                        cells.extend(nums(row));
                        t.push(cells);
                    }
                    Rendered::Csv(t)
                }
            }
        }
        Command::Rank => {
            let config = input::configuration_file(input)?;
            let basis = enumerate_generators(config.d(), config.n(), false)?;
            let report = classify_rank(&basis, &config, tol.expect("rank has a default tolerance"))?;
            match format {
                Format::Json => Rendered::Json(serde_json::to_value(&report).expect("report serializes")),
                Format::Csv => {
                    let mut t = Table::new([
                        "sigma_min",
                        "rank",
                        "full_column_rank",
                        "i1",
                        "i2",
                        "numerically_singular",
                    ]);
                    let (i1, i2) = report.coincident_pair.map_or((String::new(), String::new()), |(a, b)| {
                        ((a + 1).to_string(), (b + 1).to_string())
                    });
                    t.push(vec![
                        report.smallest_singular_value.into(),
                        report.rank.into(),
                        report.full_column_rank.into(),
                        i1.into(),
                        i2.into(),
                        report.numerically_singular.into(),
                    ]);
                    Rendered::Csv(t)
                }
            }
        }
        Command::OrbitEq { other } => {
            let (x, y) = pair(input, other)?;
            let eps = tol.expect("orbit-eq has a default tolerance");
            let equal = orbit_equal(&x, &y, eps)?;
            match format {
                Format::Json => Rendered::Json(json!({ "orbit_equal": equal, "eps": eps })),
                Format::Csv => {
                    let mut t = Table::new(["orbit_equal", "eps"]);
                    t.push(vec![equal.into(), eps.into()]);
                    Rendered::Csv(t)
                }
            }
        }
        Command::Qdist { other } => {
            let (x, y) = pair(input, other)?;
            let distance = quotient_distance(&x, &y)?;
            let matching: Vec<usize> = optimal_matching(&x, &y)?.into_iter().map(|k| k + 1).collect();
            match format {
                Format::Json => Rendered::Json(json!({ "distance": distance, "matching": matching })),
                Format::Csv => {
                    let mut t = Table::new(["point", "matched", "distance"]);
                    for (i, &k) in matching.iter().enumerate() {
                        t.push(vec![(i + 1).into(), k.into(), distance.into()]);
                    }
                    Rendered::Csv(t)
                }
            }
        }
        Command::Separate { other } => {
            let (x, y) = pair(input, other)?;
            let p = separating_polynomial(&x, &y)?;
            let (px, py) = (evaluate_separating(&p, &x)?, evaluate_separating(&p, &y)?);
            match format {
                Format::Json => Rendered::Json(json!({
                    "degree": p.degree(),
                    "p_x": px,
                    "p_y": py,
                    "polynomial": serde_json::to_value(&p).expect("polynomial serializes"),
                })),
                Format::Csv => {
                    let header = (1..=p.d())
                        .map(|a| format!("s{a}"))
                        .chain(std::iter::once("coeff".into()));
                    let mut t = Table::new(header);
                    for (s, c) in p.terms() {
                        let mut cells: Vec<Field> = s.entries().iter().map(|&e| Field::from(e as usize)).collect();
                        cells.push((*c).into());
                        t.push(cells);
                    }
                    Rendered::Csv(t)
                }
            }
        }
        Command::FitG { d } => {
            if format == Format::Csv {
                return Err(Failure::Usage("fit-g writes a JSON model only".into()));
            }
            let text = input::read_text(input)?;
            let ds = input::dataset(&text, &input::source_name(input), *d)?;
            Rendered::Json(fit_g(&ds)?.to_json())
        }
        Command::EvalG { model, z } => {
            let fit = FittedDecomposition::from_json(&input::json_file(model)?)?;
            let values = match (z, input) {
                (Some(_), Some(_)) => return Err(Failure::Usage("eval-g takes either --z or --in, not both".into())),
                (Some(z), None) => z.clone(),
                (None, _) => {
                    let config = input::configuration_file(input)?;
                    embed(fit.basis(), &config)?.into_values()
                }
            };
            let g = eval_g_values(&fit, &values)?;
            match format {
                Format::Json => Rendered::Json(json!({ "g": g })),
                Format::Csv => {
                    let mut t = Table::new(["g"]);
                    t.push(vec![g.into()]);
                    Rendered::Csv(t)
                }
            }
        }
        Command::Invert1d { z } => {
            let values = match (z, input) {
                (Some(_), Some(_)) => return Err(Failure::Usage("invert1d takes either --z or --in, not both".into())),
                (Some(z), None) => z.clone(),
                (None, _) => {
                    let source = input::source_name(input);
                    let (listed, mut values) = input::embedding_values(&input::read_text(input)?, &source)?;
                    if let Some(mut listed) = listed {
                        if listed.first().is_some_and(|s| s.iter().all(|&e| e == 0)) && listed.len() == values.len() {
                            listed.remove(0);
                            values.remove(0);
                        }
                        let basis = enumerate_generators(1, values.len(), false).map_err(|_| {
                            Failure::Domain(format!("{source}: invert1d needs a non-empty d = 1 embedding"))
                        })?;
                        input::check_basis(&basis, &listed, &source)?;
                    }
                    values
                }
            };
            let points = invert_d1(&values)?;
            match format {
                Format::Json => Rendered::Json(json!({ "points": points })),
                Format::Csv => Rendered::Csv(config_table(&points, 1)),
            }
        }
        Command::Fiber { z } => {
            let q = FiberQuery::from_slice(z)?;
            let f = fiber(&q);
            match format {
                Format::Json => {
                    let witnesses: Vec<Value> = f
                        .witnesses
                        .iter()
                        .map(|c| serde_json::to_value(c).expect("configuration serializes")["points"].clone())
                        .collect();
                    Rendered::Json(json!({
                        "z": z,
                        "in_image": image_membership(&q),
                        "case": f.case.as_str(),
                        "w": f.w_values,
                        "witnesses": witnesses,
                        "near_boundary": f.near_boundary,
                    }))
                }
                Format::Csv => {
                    let mut t = Table::new(["z1", "z2", "z3", "z4", "case", "w_count", "w", "near_boundary"]);
                    let w: Vec<String> = f.w_values.iter().map(|&w| output::number(w, cli.digits)).collect();
                    let mut cells = nums(z);
                    cells.extend([
                        f.case.as_str().into(),
                        f.w_values.len().into(),
                        w.join(";").into(),
                        f.near_boundary.into(),
                    ]);
                    t.push(cells);
                    Rendered::Csv(t)
                }
            }
        }
        Command::FiberScan { lo, hi, steps } => {
            let rows = fiber_cardinality_scan(&ScanGrid {
                lo: *lo,
                hi: *hi,
                steps: *steps,
            })?;
            match format {
                Format::Json => Rendered::Json(Value::Array(
                    rows.iter()
                        .map(|r| json!({ "z": r.z, "case": r.case.as_str(), "w_count": r.w_count }))
                        .collect(),
                )),
                Format::Csv => {
                    let mut t = Table::new(["z1", "z2", "z3", "z4", "case", "w_count"]);
                    for r in &rows {
                        let mut cells = nums(&r.z);
                        cells.extend([r.case.as_str().into(), r.w_count.into()]);
                        t.push(cells);
                    }
                    Rendered::Csv(t)
                }
            }
        }
        Command::Probe {
            example,
            t_start,
            t_steps,
            series,
        } => {
            let ex = builtin_example(example)?;
            let params = geometric_params(*t_start, *t_steps)?;
            let report = ex.run(&params)?;
            match format {
                Format::Json => Rendered::Json(json!({
                    "example": ex.id,
                    "summary": ex.summary,
                    "expected_exponent": ex.expected_exponent,
                    "exponent": report.exponent,
                    "ratios": report.ratios.samples.iter().map(|s| json!({ "t": s.t, "ratio": s.ratio })).collect::<Vec<_>>(),
                    "flagged": report.ratios.flagged,
                    "log_log": report.log_log.iter()
                        .map(|p| json!({ "t": p.t, "log_dz": p.log_dz, "log_df": p.log_df }))
                        .collect::<Vec<_>>(),
                })),
                Format::Csv => match series {
                    Series::Ratio => {
                        let mut t = Table::new(["t", "ratio"]);
                        for s in &report.ratios.samples {
                            t.push(vec![s.t.into(), s.ratio.into()]);
                        }
                        Rendered::Csv(t)
                    }
                    Series::LogLog => {
                        let mut t = Table::new(["t", "log_dz", "log_df"]);
                        for p in &report.log_log {
                            t.push(vec![p.t.into(), p.log_dz.into(), p.log_df.into()]);
                        }
                        Rendered::Csv(t)
                    }
                },
            }
        }
        Command::CheckSym { d } => {
            let text = input::read_text(input)?;
            let ds = input::dataset(&text, &input::source_name(input), *d)?;
            let report = check_symmetry(&ds, tol.expect("check-sym has a default tolerance"))?;
            match format {
                Format::Json => {
                    let detail = violations_json(&serde_json::to_value(&report).expect("report serializes"));
                    let mut out = serde_json::Map::new();
                    out.insert("consistent".into(), json!(report.is_consistent()));
                    if let Value::Object(map) = detail {
                        out.extend(map);
                    }
                    Rendered::Json(Value::Object(out))
                }
                Format::Csv => {
                    let mut t = Table::new(["orbit", "rows", "min", "max"]);
                    for (k, v) in report.violations.iter().enumerate() {
                        let rows: Vec<String> = v.records.iter().map(|r| (r + 1).to_string()).collect();
                        t.push(vec![(k + 1).into(), rows.join(";").into(), v.min.into(), v.max.into()]);
                    }
                    Rendered::Csv(t)
                }
            }
        }
    };

    Ok(match rendered {
        Rendered::Json(v) => output::json(&v, cli.digits),
        Rendered::Csv(t) => t.render(cli.digits),
    })
}

fn pair(input: Option<&Path>, other: &Path) -> Result<(Configuration, Configuration), Failure> {
    let x = input::configuration_file(input)?;
    let y = input::configuration_file(Some(other))?;
    Ok((x, y))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    use std::io::Write;
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::Io(format!("cannot write stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli).and_then(|text| emit(&text, cli.out.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg) | Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
