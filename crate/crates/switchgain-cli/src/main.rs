//! Command-line surface: single evaluations, grid sweeps, protocol reports,
//! and closed-form versus enumeration verification.

use std::fs;
use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use switchgain::bb84::{crossover_scan, protocol_report};
use switchgain::channel::{pauli_matrix, ChannelSpec, PauliChannel};
use switchgain::depol::{capacity_depol, capacity_depol_switch, depol_branches, pn_depol, switch_choi_depol};
use switchgain::linalg::{CMatrix, Complex};
use switchgain::oracle::{effective_switch, pn_exact, ControlState, PermutationSet, DEFAULT_CAP};
use switchgain::pauli::{gain_report, pn_pauli, pn_zero_classify, switch_choi, PnZeroClass};
use switchgain::Error;

#[derive(Parser)]
#[command(
    name = "switchgain",
    version,
    about = "Capacity gains from superposing the application order of noisy channels"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Probability of the order-revealing control outcome for n channel copies
    Pn {
        /// Channel description: inline JSON or a path to a JSON file
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Enumeration budget for the exact method (index tuples x orders^2)
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Capacities of the composite and the switched channel, with both gains, as JSON
    Gain {
        /// Channel description: pauli, depolarizing, kraus, or bb84 (inline JSON or file path)
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Deterministic grid sweeps emitted as CSV or JSON
    #[command(after_help = "\
CSV columns per grid:
  pauli: n,p0,p1,p2,p3,pn,witness_class,delta_c,delta_i
  depol: d,n,p,pn,lambda1,lambda2,capacity_composite,capacity_switch,delta_c
  bb84:  q,composite_upper_bound,switch_coherent_info,advantage
Floats carry 12 significant digits; identical configuration and seed give
byte-identical output.")]
    Sweep {
        #[arg(long, value_enum)]
        grid: GridKind,
        /// Lattice step for the grid parameter (bb84 requires step <= 0.01)
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Copy counts, comma separated
        #[arg(long, value_delimiter = ',', default_value = "2")]
        n: Vec<u32>,
        /// Qudit dimensions for the depol grid, comma separated
        #[arg(long, value_delimiter = ',', default_value = "2")]
        d: Vec<usize>,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Echoed in the header; sweeps themselves are deterministic
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-check the closed forms against the brute-force enumeration
    Verify {
        /// Channel description; omit to draw a random Pauli channel from --seed
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Private-communication protocol: single report or advantage window
    Bb84 {
        /// Error rate for a single protocol report
        #[arg(long)]
        q: Option<f64>,
        /// Grid step for the crossover scan (at most 0.01)
        #[arg(long)]
        step: Option<f64>,
        /// Write the full scan table here (scan mode only)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Closed,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridKind {
    Pauli,
    Depol,
    Bb84,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(if matches!(e, Error::CapExceeded { .. }) { 4 } else { 2 });
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Pn { spec, n, method, cap } => run_pn(&spec, n, method, cap),
        Cmd::Gain { spec, n } => run_gain(&spec, n),
        Cmd::Sweep { grid, step, n, d, out, format, seed } => {
            run_sweep(grid, step, &n, &d, out, format, seed)
        }
        Cmd::Verify { spec, n, tolerance, cap, seed } => run_verify(spec, seed, n, tolerance, cap),
        Cmd::Bb84 { q, step, out, format } => run_bb84(q, step, out, format),
    }
}

/// Inline JSON (starts with a brace) or the contents of the named file.
fn spec_text(arg: &str) -> Result<String, Error> {
    let t = arg.trim();
    if t.starts_with('{') {
        Ok(t.to_string())
    } else {
        fs::read_to_string(t).map_err(|e| Error::Spec(format!("reading {t}: {e}")))
    }
}

fn kind_name(spec: &ChannelSpec) -> &'static str {
    match spec {
        ChannelSpec::Pauli { .. } => "pauli",
        ChannelSpec::Depolarizing { .. } => "depolarizing",
        ChannelSpec::Kraus { .. } => "kraus",
    }
}

fn class_name(class: PnZeroClass) -> &'static str {
    match class {
        PnZeroClass::EvenCommuting => "even_commuting",
        PnZeroClass::OddAtMostTwoKraus => "odd_two_kraus",
        PnZeroClass::Nonzero => "nonzero",
    }
}

fn oracle_pn(spec: &ChannelSpec, n: u32, cap: u64) -> Result<f64, Error> {
    let kraus = spec.to_kraus()?;
    let channels = vec![kraus; n as usize];
    let perms = PermutationSet::forward_backward(n as usize);
    let control = ControlState::uniform(perms.m());
    pn_exact(&channels, &perms, &control, cap)
}

fn run_pn(spec_arg: &str, n: u32, method: Method, cap: u64) -> Result<i32, Error> {
    let spec = ChannelSpec::from_json(&spec_text(spec_arg)?)?;
    let pn = match method {
        Method::Exact => oracle_pn(&spec, n, cap)?,
        Method::Closed => match &spec {
            ChannelSpec::Pauli { p } => pn_pauli(&PauliChannel::new(*p)?, n)?,
            ChannelSpec::Depolarizing { d, p } => pn_depol(*d, *p, n)?,
            ChannelSpec::Kraus { .. } => {
                return Err(Error::Spec(
                    "no closed form for a raw Kraus set; use --method exact".into(),
                ))
            }
        },
    };
    let method = if method == Method::Closed { "closed" } else { "exact" };
    println!(
        "{}",
        json!({ "kind": kind_name(&spec), "n": n, "method": method, "pn": pn })
    );
    Ok(0)
}

fn run_gain(spec_arg: &str, n: u32) -> Result<i32, Error> {
    let text = spec_text(spec_arg)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Spec(e.to_string()))?;
    if v.get("kind").and_then(Value::as_str) == Some("bb84") {
        let q = v
            .get("q")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Spec("bb84 spec needs a numeric q".into()))?;
        let rep = protocol_report(q)?;
        println!("{}", serde_json::to_string(&rep).expect("report serializes"));
        return Ok(0);
    }
    let spec: ChannelSpec = serde_json::from_value(v).map_err(|e| Error::Spec(e.to_string()))?;
    match &spec {
        ChannelSpec::Pauli { p } => {
            let rep = gain_report(&PauliChannel::new(*p)?, n)?;
            println!("{}", serde_json::to_string(&rep).expect("report serializes"));
        }
        ChannelSpec::Depolarizing { d, p } => {
            let br = depol_branches(*d, *p, n)?;
            let cap_c = capacity_depol(*d, *p, n)?;
            let cap_s = capacity_depol_switch(&br);
            println!(
                "{}",
                json!({
                    "kind": "depolarizing", "d": d, "p": p, "n": n,
                    "pn": br.pn, "lambda1": br.lambda1, "lambda2": br.lambda2,
                    "capacity_composite": cap_c, "capacity_switch": cap_s,
                    "delta_c": cap_s - cap_c,
                })
            );
        }
        ChannelSpec::Kraus { .. } => {
            return Err(Error::Spec(
                "gain reports cover pauli, depolarizing, and bb84 specs".into(),
            ))
        }
    }
    Ok(0)
}

/// One sweep cell; floats render with 12 significant digits in CSV.
enum Cell {
    F(f64),
    OptF(Option<f64>),
    U(u64),
    S(&'static str),
    B(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.11e}"),
            Cell::OptF(Some(x)) => format!("{x:.11e}"),
            Cell::OptF(None) => String::new(),
            Cell::U(x) => x.to_string(),
            Cell::S(s) => (*s).to_string(),
            Cell::B(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => json!(x),
            Cell::OptF(x) => json!(x),
            Cell::U(x) => json!(x),
            Cell::S(s) => json!(s),
            Cell::B(b) => json!(b),
        }
    }
}

fn lattice_steps(step: f64, max_step: f64) -> Result<usize, Error> {
    if !(step > 0.0 && step <= max_step && step.is_finite()) {
        return Err(Error::Domain(format!("grid step {step}")));
    }
    Ok((1.0 / step).round() as usize)
}

fn sweep_pauli(step: f64, ns: &[u32]) -> Result<(Vec<&'static str>, Vec<Vec<Cell>>), Error> {
    let steps = lattice_steps(step, 0.5)?;
    let s = steps as f64;
    let mut tasks = Vec::new();
    for &n in ns {
        for i in 0..=steps {
            for j in 0..=steps - i {
                for k in 0..=steps - i - j {
                    let l = steps - i - j - k;
                    tasks.push((
                        [i as f64 / s, j as f64 / s, k as f64 / s, l as f64 / s],
                        n,
                    ));
                }
            }
        }
    }
    let rows = tasks
        .par_iter()
        .map(|&(p, n)| {
            let ch = PauliChannel::new(p)?;
            let rep = gain_report(&ch, n)?;
            Ok(vec![
                Cell::U(n as u64),
                Cell::F(p[0]),
                Cell::F(p[1]),
                Cell::F(p[2]),
                Cell::F(p[3]),
                Cell::F(rep.pn),
                Cell::S(class_name(pn_zero_classify(&ch, n))),
                Cell::F(rep.delta_c),
                Cell::F(rep.delta_i),
            ])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((
        vec!["n", "p0", "p1", "p2", "p3", "pn", "witness_class", "delta_c", "delta_i"],
        rows,
    ))
}

fn sweep_depol(
    step: f64,
    ns: &[u32],
    ds: &[usize],
) -> Result<(Vec<&'static str>, Vec<Vec<Cell>>), Error> {
    let steps = lattice_steps(step, 1.0)?;
    let mut tasks = Vec::new();
    for &d in ds {
        for &n in ns {
            for i in 0..=steps {
                tasks.push((d, n, (i as f64 * step).min(1.0)));
            }
        }
    }
    let rows = tasks
        .par_iter()
        .map(|&(d, n, p)| {
            let br = depol_branches(d, p, n)?;
            let cap_c = capacity_depol(d, p, n)?;
            let cap_s = capacity_depol_switch(&br);
            Ok(vec![
                Cell::U(d as u64),
                Cell::U(n as u64),
                Cell::F(p),
                Cell::F(br.pn),
                Cell::F(br.lambda1),
                Cell::OptF(br.lambda2),
                Cell::F(cap_c),
                Cell::F(cap_s),
                Cell::F(cap_s - cap_c),
            ])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((
        vec!["d", "n", "p", "pn", "lambda1", "lambda2", "capacity_composite", "capacity_switch", "delta_c"],
        rows,
    ))
}

fn sweep_bb84(step: f64) -> Result<(Vec<&'static str>, Vec<Vec<Cell>>, (f64, f64)), Error> {
    let (table, window) = crossover_scan(step)?;
    let rows = table
        .iter()
        .map(|r| {
            vec![
                Cell::F(r.q),
                Cell::F(r.composite_upper_bound),
                Cell::F(r.switch_coherent_info),
                Cell::B(r.advantage),
            ]
        })
        .collect();
    Ok((
        vec!["q", "composite_upper_bound", "switch_coherent_info", "advantage"],
        rows,
        window,
    ))
}

fn render(
    format: Format,
    columns: &[&str],
    rows: &[Vec<Cell>],
    config: &str,
    window: Option<(f64, f64)>,
) -> String {
    match format {
        Format::Csv => {
            let mut s = format!("# switchgain {} {config}\n", env!("CARGO_PKG_VERSION"));
            if let Some((lo, hi)) = window {
                s += &format!("# advantage_window {lo:.11e} {hi:.11e}\n");
            }
            s += &columns.join(",");
            s.push('\n');
            for row in rows {
                s += &row.iter().map(Cell::csv).collect::<Vec<_>>().join(",");
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (col, cell) in columns.iter().zip(row) {
                        obj.insert((*col).to_string(), cell.json());
                    }
                    Value::Object(obj)
                })
                .collect();
            let mut top = json!({
                "tool": { "name": "switchgain", "version": env!("CARGO_PKG_VERSION") },
                "config": config,
                "rows": rows_json,
            });
            if let Some((lo, hi)) = window {
                top["advantage_window"] = json!([lo, hi]);
            }
            let mut s = serde_json::to_string_pretty(&top).expect("sweep serializes");
            s.push('\n');
            s
        }
    }
}

fn write_or_print(out: Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| Error::Spec(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_sweep(
    grid: GridKind,
    step: f64,
    ns: &[u32],
    ds: &[usize],
    out: Option<PathBuf>,
    format: Format,
    seed: u64,
) -> Result<i32, Error> {
    let list = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let (columns, rows, window, config) = match grid {
        GridKind::Pauli => {
            let (c, r) = sweep_pauli(step, ns)?;
            let ns64: Vec<u64> = ns.iter().map(|&n| n as u64).collect();
            (c, r, None, format!("sweep grid=pauli step={step} n={} seed={seed}", list(&ns64)))
        }
        GridKind::Depol => {
            let (c, r) = sweep_depol(step, ns, ds)?;
            let ns64: Vec<u64> = ns.iter().map(|&n| n as u64).collect();
            let ds64: Vec<u64> = ds.iter().map(|&d| d as u64).collect();
            (
                c,
                r,
                None,
                format!(
                    "sweep grid=depol step={step} n={} d={} seed={seed}",
                    list(&ns64),
                    list(&ds64)
                ),
            )
        }
        GridKind::Bb84 => {
            let (c, r, w) = sweep_bb84(step)?;
            (c, r, Some(w), format!("sweep grid=bb84 step={step} seed={seed}"))
        }
    };
    write_or_print(out, &render(format, &columns, &rows, &config, window))?;
    Ok(0)
}

/// Pauli weights of a qubit channel read off its Choi matrix.
fn bell_weights(choi: &CMatrix) -> [f64; 4] {
    let mut w = [0.0f64; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let sig = pauli_matrix(i);
        let mut acc = Complex::ZERO;
        for b in 0..2 {
            for a in 0..2 {
                for bp in 0..2 {
                    for ap in 0..2 {
                        acc += sig.get(b, a).conj()
                            * choi.get(b * 2 + a, bp * 2 + ap)
                            * sig.get(bp, ap);
                    }
                }
            }
        }
        *wi = acc.re / 4.0;
    }
    w
}

fn random_pauli_spec(seed: u64) -> ChannelSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = [0.0f64; 4];
    for x in v.iter_mut() {
        *x = -(1.0 - rng.gen::<f64>()).ln();
    }
    let s: f64 = v.iter().sum();
    ChannelSpec::Pauli { p: v.map(|x| x / s) }
}

fn run_verify(
    spec_arg: Option<String>,
    seed: Option<u64>,
    n: u32,
    tolerance: f64,
    cap: u64,
) -> Result<i32, Error> {
    let spec = match (&spec_arg, seed) {
        (Some(_), Some(_)) => {
            return Err(Error::Spec("pass either --spec or --seed, not both".into()))
        }
        (Some(arg), None) => ChannelSpec::from_json(&spec_text(arg)?)?,
        (None, seed) => random_pauli_spec(seed.unwrap_or(0)),
    };
    let (closed_choi, closed_pn) = match &spec {
        ChannelSpec::Pauli { p } => {
            let ch = PauliChannel::new(*p)?;
            (switch_choi(&ch, n)?, pn_pauli(&ch, n)?)
        }
        ChannelSpec::Depolarizing { d, p } => (switch_choi_depol(*d, *p, n)?, pn_depol(*d, *p, n)?),
        // a qubit Kraus set is checked against the closed form of its
        // Pauli-basis weights; anything genuinely non-Pauli fails loudly
        ChannelSpec::Kraus { dim_in: 2, dim_out: 2, .. } => {
            let ch = PauliChannel::new(bell_weights(&spec.to_kraus()?.choi()))?;
            (switch_choi(&ch, n)?, pn_pauli(&ch, n)?)
        }
        ChannelSpec::Kraus { .. } => {
            return Err(Error::Spec(
                "closed forms cover qubit Kraus sets, pauli, and depolarizing specs".into(),
            ))
        }
    };
    let kraus = spec.to_kraus()?;
    let channels = vec![kraus; n as usize];
    let perms = PermutationSet::forward_backward(n as usize);
    let control = ControlState::uniform(perms.m());
    let out = effective_switch(&channels, &perms, &control, cap)?;
    let exact = pn_exact(&channels, &perms, &control, cap)?;
    let choi_distance = closed_choi.frobenius_distance(&out.choi)?;
    let pn_difference = (closed_pn - exact).abs();
    let pass = choi_distance <= tolerance && pn_difference <= tolerance;
    println!(
        "{}",
        json!({
            "kind": kind_name(&spec), "n": n, "tolerance": tolerance,
            "choi_distance": choi_distance, "pn_difference": pn_difference,
            "pass": pass,
        })
    );
    Ok(if pass { 0 } else { 3 })
}

fn run_bb84(
    q: Option<f64>,
    step: Option<f64>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<i32, Error> {
    match (q, step) {
        (Some(q), None) => {
            let rep = protocol_report(q)?;
            println!("{}", serde_json::to_string(&rep).expect("report serializes"));
            Ok(0)
        }
        (None, Some(step)) => {
            let (columns, rows, window) = sweep_bb84(step)?;
            if out.is_some() {
                let config = format!("bb84 step={step}");
                write_or_print(out, &render(format, &columns, &rows, &config, Some(window)))?;
            }
            println!(
                "{}",
                json!({ "window": [window.0, window.1], "rows": rows.len() })
            );
            Ok(0)
        }
        _ => Err(Error::Spec("pass exactly one of --q or --step".into())),
    }
}
