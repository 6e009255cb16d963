use crate::{Cli, Command, Format, Method, PointScheme};
use serde_json::{json, Map, Value};
use squeezed_qfi::analysis::{advantage_curve, linspace, loss_threshold, optimal_ratio_search, scan_loss};
use squeezed_qfi::qfi::{hl, qfi_closed, qfi_general_with, snl, total_photon_number_with};
use squeezed_qfi::table::{format_number, json_number};
use squeezed_qfi::{Config, Error, InputFamily, Scheme, SweepTable};
use std::fmt;
use std::fs::OpenOptions;
use std::io::Write;

const MATCHING_RULE: &str = "|alpha|^2 = sinh^2(r)";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Degenerate(String),
    NoCrossing(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::NoCrossing(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Degenerate(m) | CliError::NoCrossing(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularDerivative { .. } => {
                CliError::Degenerate(format!("{e} (rerun with --method closed)"))
            }
            Error::DegenerateDenominator { .. } | Error::NotSymplectic { .. } => {
                CliError::Degenerate(format!("{e}; try --method general for the matrix formula"))
            }
            Error::NoCrossing { .. } => CliError::NoCrossing(e.to_string()),
            Error::NoClosedForm(_) => CliError::Usage(format!("{e}; use --method general")),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<()> {
    if cli.seedless {
        return Err(CliError::Usage("--seedless is reserved: no computation here uses randomness".into()));
    }
    let text = match &cli.command {
        Command::Qfi { r, g, alpha, delta, phi, loss, scheme, method } => {
            cmd_qfi(cli.format.unwrap_or(Format::Plain), *r, *g, *alpha, *delta, *phi, *loss, *scheme, *method)?
        }
        Command::Scan { r, g, l_min, l_max, steps, scheme, compare } => {
            render_table(&cmd_scan(*r, *g, *l_min, *l_max, *steps, parse_scheme(scheme)?, *compare)?, cli.format.unwrap_or(Format::Csv))
        }
        Command::Threshold { r, g, scheme } => cmd_threshold(cli.format.unwrap_or(Format::Plain), *r, *g, parse_scheme(scheme)?)?,
        Command::Advantage { r, g, l_min, l_max, steps } => {
            render_table(&cmd_advantage(*r, *g, *l_min, *l_max, *steps)?, cli.format.unwrap_or(Format::Csv))
        }
        Command::Optimize { g, n_in, grid } => {
            let n_in = n_in.unwrap_or_else(|| 2.0 * 2f64.sinh().powi(2));
            cmd_optimize(cli.format.unwrap_or(Format::Plain), *g, n_in, *grid)?
        }
    };
    emit(cli, &text)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut opts = OpenOptions::new();
            opts.write(true);
            if cli.force {
                opts.create(true).truncate(true);
            } else {
                opts.create_new(true);
            }
            let mut file = opts.open(path).map_err(|e| match e.kind() {
                std::io::ErrorKind::AlreadyExists => {
                    CliError::Usage(format!("{} exists; pass --force to overwrite", path.display()))
                }
                _ => CliError::Io(format!("cannot open {}: {e}", path.display())),
            })?;
            file.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn parse_scheme(s: &str) -> Result<Scheme> {
    s.parse::<Scheme>().map_err(|e| CliError::Usage(e.to_string()))
}

fn version_meta(table: SweepTable, command: &str) -> SweepTable {
    table.with_meta("tool", format!("squeezed-qfi {}", env!("CARGO_PKG_VERSION"))).with_meta("command", command)
}

fn render_table(table: &SweepTable, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&table.to_json()).expect("table serializes")),
        Format::Plain => {
            let mut out = String::new();
            for (k, v) in table.metadata() {
                out.push_str(&format!("# {k}={v}\n"));
            }
            let cells: Vec<Vec<String>> = std::iter::once(table.header().to_vec())
                .chain(table.rows().iter().map(|r| r.iter().map(|&x| format_number(x)).collect()))
                .collect();
            let widths: Vec<usize> =
                (0..table.header().len()).map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
            for row in &cells {
                let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
    }
}

fn render_record(fields: &[(&str, Value)], format: Format) -> String {
    match format {
        Format::Json => {
            let map: Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            format!("{}\n", Value::Object(map))
        }
        Format::Plain => {
            let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={}", plain_value(v))).collect();
            format!("{}\n", parts.join(" "))
        }
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<String> = fields.iter().map(|(_, v)| plain_value(v)).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
    }
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.as_f64().map(format_number).unwrap_or_else(|| n.to_string()),
        other => other.to_string(),
    }
}

fn num(x: f64) -> Value {
    json_number(x)
}

fn check_range(l_min: f64, l_max: f64, steps: usize, upper: f64) -> Result<()> {
    let ok = l_min.is_finite() && l_max.is_finite() && l_min >= 0.0 && l_max <= upper && l_min <= l_max && steps >= 1;
    if !ok {
        return Err(CliError::Usage(format!(
            "bad loss range: need 0 <= l-min <= l-max <= {upper} and steps >= 1 (got {l_min}, {l_max}, {steps})"
        )));
    }
    if steps == 1 && l_min != l_max {
        return Err(CliError::Usage("a single step needs l-min = l-max".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_qfi(format: Format, r: f64, g: f64, alpha: Option<f64>, delta: f64, phi: f64, loss: f64, scheme: PointScheme, method: Method) -> Result<String> {
    let (family, alpha_mag) = match scheme {
        PointScheme::SvacPair => {
            if alpha.is_some_and(|a| a != 0.0) {
                return Err(CliError::Usage("svac-pair has no displacement; use --scheme dsv-pair with --alpha".into()));
            }
            (InputFamily::DsvPair, 0.0)
        }
        PointScheme::DsvPair => (InputFamily::DsvPair, alpha.unwrap_or(0.0)),
        PointScheme::CoherentSqueezed => (InputFamily::CoherentSqueezed, alpha.unwrap_or(r.sinh())),
    };
    let config = Config::new(alpha_mag, delta, r, g, phi, loss)?;
    let n = total_photon_number_with(&config, family);
    let scheme_tag = match scheme {
        PointScheme::SvacPair => "svac-pair",
        PointScheme::DsvPair => "dsv-pair",
        PointScheme::CoherentSqueezed => "coherent-squeezed",
    };
    let mut fields = vec![
        ("scheme", json!(scheme_tag)),
        ("method", json!(match method { Method::General => "general", Method::Closed => "closed" })),
        ("r", num(r)),
        ("g", num(g)),
        ("alpha", num(alpha_mag)),
        ("delta", num(delta)),
        ("phi", num(phi)),
        ("loss", num(loss)),
    ];
    let value = match method {
        Method::General => {
            let q = qfi_general_with(&config, family)?;
            fields.push(("covariance_term", num(q.covariance_term)));
            fields.push(("mean_term", num(q.mean_term)));
            q.value
        }
        Method::Closed => qfi_closed(&config, family)?,
    };
    let ratio = if n > 0.0 { value / hl(n) } else { 0.0 };
    fields.extend([("qfi", num(value)), ("n", num(n)), ("snl", num(snl(n))), ("hl", num(hl(n))), ("qfi_over_hl", num(ratio))]);
    Ok(render_record(&fields, format))
}

fn cmd_scan(r: f64, g: f64, l_min: f64, l_max: f64, steps: usize, scheme: Scheme, compare: bool) -> Result<SweepTable> {
    check_range(l_min, l_max, steps, 1.0)?;
    let grid = linspace(l_min, l_max, steps);
    let mut table = version_meta(scan_loss(r, g, &grid, scheme)?, "scan")
        .with_meta("l_min", l_min)
        .with_meta("l_max", l_max)
        .with_meta("steps", steps);
    if compare {
        if l_max >= 1.0 {
            return Err(CliError::Usage("--compare needs l-max < 1 (the advantage is undefined at complete loss)".into()));
        }
        let curve = advantage_curve(r, g, &grid)?;
        let a_q: Vec<f64> = curve.points.iter().map(|p| p.1).collect();
        table.push_column("a_q", &a_q).map_err(|e| CliError::Degenerate(e.to_string()))?;
        table.set_meta("matching", MATCHING_RULE);
    }
    Ok(table)
}

fn cmd_threshold(format: Format, r: f64, g: f64, scheme: Scheme) -> Result<String> {
    let t = loss_threshold(r, g, scheme)?;
    let n = scheme.photons(r, g)?;
    let fields = [
        ("scheme", json!(scheme.tag())),
        ("r", num(r)),
        ("g", num(g)),
        ("l_star", json!(format!("{:.10}", t.l_star))),
        ("bracket_width", num(t.bracket_width)),
        ("evaluations", json!(t.evaluations)),
        ("snl", num(snl(n))),
    ];
    Ok(render_record(&fields, format))
}

fn cmd_advantage(r: f64, g: f64, l_min: f64, l_max: f64, steps: usize) -> Result<SweepTable> {
    if l_max >= 1.0 {
        return Err(CliError::Usage("l-max must be below 1 (the advantage is undefined at complete loss)".into()));
    }
    check_range(l_min, l_max, steps, 1.0)?;
    let grid = linspace(l_min, l_max, steps);
    let curve = advantage_curve(r, g, &grid)?;
    let mut table = version_meta(SweepTable::new(["L", "a_q"]), "advantage")
        .with_meta("r", r)
        .with_meta("g", g)
        .with_meta("alpha", r.sinh())
        .with_meta("matching", MATCHING_RULE)
        .with_meta("l_min", l_min)
        .with_meta("l_max", l_max)
        .with_meta("steps", steps);
    for (l, a) in curve.points {
        table.push_row(vec![l, a]).map_err(|e| CliError::Degenerate(e.to_string()))?;
    }
    Ok(table)
}

fn cmd_optimize(format: Format, g: f64, n_in: f64, grid: usize) -> Result<String> {
    let search = optimal_ratio_search(g, n_in, grid)?;
    let mut table = version_meta(SweepTable::new(["k", "qfi", "n", "qfi_over_n2"]), "optimize")
        .with_meta("g", g)
        .with_meta("n_in", n_in)
        .with_meta("grid", grid)
        .with_meta("delta", 0);
    for p in &search.points {
        table
            .push_row(vec![p.k, p.qfi, p.photons, p.figure_of_merit])
            .map_err(|e| CliError::Degenerate(e.to_string()))?;
    }
    let best = search.points.iter().find(|p| p.k == search.k_star).expect("argmax is a grid point");
    table.set_meta("k_star", format_number(search.k_star));
    Ok(match format {
        Format::Json => {
            let mut v = table.to_json();
            v["k_star"] = num(search.k_star);
            v["qfi_over_n2_at_k_star"] = num(best.figure_of_merit);
            format!("{}\n", serde_json::to_string_pretty(&v).expect("table serializes"))
        }
        Format::Csv => table.to_csv(),
        Format::Plain => format!(
            "{}argmax k_star={} qfi_over_n2={}\n",
            render_table(&table, Format::Plain),
            format_number(search.k_star),
            format_number(best.figure_of_merit)
        ),
    })
}
