//! Command-line front end.
//!
//! Every command prints one JSON document
//! `{"command", "inputs", "result", "diagnostics"}` (or a one-row CSV with
//! `--format csv`). Complex numbers appear as `[re, im]` in JSON and as
//! `<name>_re,<name>_im` column pairs in CSV. Failures print
//! `{"error": {"kind", "message", "context"}}` on stderr.
//!
//! Exit codes: 0 on success, 1 on a computation error or failed check, 2
//! on a usage error.

mod verify;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::algebraic_bethe::{
    bethe_state_of, eigencheck, explicit_norm, solve_bethe_at, BetheRoots, Seed,
};
use crate::determinants::{
    gaudin_norm, izergin, izergin_hom, slavnov_hom, slavnov_restricted, GaudinInput,
    QuantumRapidities, SlavnovInput,
};
use crate::error::Error;
use crate::gauge_map::{
    make_bps_geometry, make_geometry, oracle_contraction, parse_trace, structure_constant,
    word_to_basis, Role, Side,
};
use crate::numerics::{Complex, ETA, Z0};
use crate::vertex_model::{brute_dwpf, brute_restricted, VertexWeights};

pub use verify::{run_suite, Check, Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "tree3pt",
    version,
    about = "Tree-level SU(2) structure constants and their oracles"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Re-run the inputs recorded in an earlier JSON output and compare.
    #[arg(long, global = true)]
    check: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Point {
    /// Crossing parameter, written a+bi.
    #[arg(long, default_value = "0.0+1.0i", allow_hyphen_values = true)]
    eta: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Domain-wall partition function.
    Dwpf {
        #[arg(long = "N")]
        n: usize,
        /// Comma-separated auxiliary rapidities.
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// One quantum rapidity (homogeneous) or N of them.
        #[arg(long, default_value = "0.0+0.5i", allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        point: Point,
    },
    /// Restricted scalar product S[L, N1, N2].
    Slavnov {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "N1")]
        n1: usize,
        #[arg(long = "N2")]
        n2: usize,
        /// Explicit u rapidities.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "modes")]
        u: Option<String>,
        /// Mode numbers for solving u on the homogeneous chain.
        #[arg(long, allow_hyphen_values = true)]
        modes: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        v: String,
        /// One quantum rapidity (homogeneous) or L of them.
        #[arg(long, default_value = "0.0+0.5i", allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        point: Point,
    },
    /// Squared norm of a Bethe state.
    Gaudin {
        #[arg(long = "L")]
        l: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "modes")]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        modes: Option<String>,
        #[arg(long, default_value = "0.0+0.5i", allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        point: Point,
    },
    /// Solve the Bethe equations.
    Bethe {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "guesses")]
        modes: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        guesses: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value = "0.0+0.5i", allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        point: Point,
    },
    /// Structure constant of three operators.
    Sc {
        /// L1,L2,L3
        #[arg(long = "L")]
        l: String,
        /// N1,N2,N3
        #[arg(long = "N")]
        n: String,
        #[arg(long = "modes-1", allow_hyphen_values = true, default_value = "")]
        modes_1: String,
        #[arg(long = "modes-2", allow_hyphen_values = true, default_value = "")]
        modes_2: String,
        #[arg(long = "modes-3", allow_hyphen_values = true, default_value = "")]
        modes_3: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Skip the explicit-contraction cross-check.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Run oracle suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest N for the domain-wall checks.
        #[arg(long = "max-N", default_value_t = 4)]
        max_n: usize,
        /// Largest L for the scalar-product checks.
        #[arg(long = "max-L", default_value_t = 6)]
        max_l: usize,
        /// L1,L2,L3,N1,N2,N3 for the structure-constant suite.
        #[arg(long, default_value = "6,6,4,3,1,2")]
        geometry: String,
        /// Random draws (or root choices) per check.
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Spin basis state of a trace word.
    Map {
        /// Word such as Tr(ZZXZ).
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        role: RoleArg,
        #[arg(long, value_enum, default_value_t = SideArg::Initial)]
        side: SideArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoleArg {
    #[value(name = "O1", alias = "o1")]
    O1,
    #[value(name = "O2", alias = "o2")]
    O2,
    #[value(name = "O3", alias = "o3")]
    O3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Initial,
    Final,
}

/// A failure on the way to an output document.
enum Failure {
    Usage(String),
    Compute(Error, String),
    Checks(Value),
}

type Outcome = std::result::Result<(Value, Value), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `a+bi` or `a-bi` with a decimal point in both parts.
pub fn parse_complex(text: &str) -> std::result::Result<Complex, String> {
    let s = text.trim();
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| format!("complex literal '{s}' must end in 'i'"))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(|| format!("complex literal '{s}' needs the form a+bi"))?;
    let (re, im) = body.split_at(split);
    for part in [re, &im[1..]] {
        if !part.contains('.') {
            return Err(format!(
                "complex literal '{s}': '{part}' needs a decimal point"
            ));
        }
    }
    let re: f64 = re.parse().map_err(|_| format!("bad real part in '{s}'"))?;
    let im: f64 = im
        .parse()
        .map_err(|_| format!("bad imaginary part in '{s}'"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("complex literal '{s}' is not finite"));
    }
    Ok(Complex::new(re, im))
}

fn parse_complex_list(text: &str) -> std::result::Result<Vec<Complex>, Failure> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|t| parse_complex(t).map_err(Failure::Usage))
        .collect()
}

fn parse_int_list<T: std::str::FromStr>(
    text: &str,
    what: &str,
) -> std::result::Result<Vec<T>, Failure> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| usage(format!("bad {what} '{t}'")))
        })
        .collect()
}

fn cj(z: Complex) -> Value {
    json!([z.re, z.im])
}

fn cjs(zs: &[Complex]) -> Value {
    Value::Array(zs.iter().map(|&z| cj(z)).collect())
}

fn compute<T>(r: crate::Result<T>, context: &str) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure::Compute(e, context.to_string()))
}

fn roots_json(r: &BetheRoots) -> Value {
    json!({
        "L": r.l(),
        "roots": cjs(r.roots()),
        "residual": r.residual(),
        "mode_numbers": r.mode_numbers(),
        "verified": r.is_verified(),
    })
}

fn one_or_many(text: &str, count: usize) -> std::result::Result<QuantumRapidities, Failure> {
    let z = parse_complex_list(text)?;
    match z.len() {
        1 => Ok(QuantumRapidities::Homogeneous(z[0])),
        k if k == count => Ok(QuantumRapidities::Inhomogeneous(z)),
        k => Err(usage(format!(
            "expected 1 or {count} quantum rapidities, got {k}"
        ))),
    }
}

fn solve_or_take(
    l: usize,
    u: &Option<String>,
    modes: &Option<String>,
    n: Option<usize>,
    z: Complex,
    eta: Complex,
) -> std::result::Result<Vec<Complex>, Failure> {
    match (u, modes) {
        (Some(u), _) => parse_complex_list(u),
        (None, Some(m)) => {
            let modes: Vec<i64> = parse_int_list(m, "mode number")?;
            let k = n.unwrap_or(modes.len());
            let r = compute(
                solve_bethe_at(l, k, &Seed::Modes(modes), 1e-10, z, eta),
                "bethe",
            )?;
            Ok(r.roots().to_vec())
        }
        (None, None) => match n {
            Some(0) => Ok(vec![]),
            _ => Err(usage("give either --u or --modes")),
        },
    }
}

fn triple(text: &str, what: &str) -> std::result::Result<[usize; 3], Failure> {
    let v: Vec<usize> = parse_int_list(text, what)?;
    v.try_into()
        .map_err(|_| usage(format!("{what} needs three comma-separated values")))
}

fn execute(cli: &Cli, command: &Command) -> Outcome {
    match command {
        Command::Dwpf { n, w, z, point } => {
            let eta = parse_complex(&point.eta).map_err(Failure::Usage)?;
            let w = parse_complex_list(w)?;
            if w.len() != *n {
                return Err(usage(format!("--N {n} but {} w rapidities", w.len())));
            }
            let wt = compute(VertexWeights::new(eta), "dwpf")?;
            let (value, method, lattice) = match one_or_many(z, *n)? {
                QuantumRapidities::Homogeneous(z0) => {
                    let lat = if *n <= 12 {
                        Some(compute(brute_dwpf(&w, &vec![z0; *n], &wt), "dwpf")?)
                    } else {
                        None
                    };
                    (
                        compute(izergin_hom(&w, z0, eta), "dwpf")?,
                        "izergin_hom",
                        lat,
                    )
                }
                QuantumRapidities::Inhomogeneous(zs) => {
                    let lat = if *n <= 12 {
                        Some(compute(brute_dwpf(&w, &zs, &wt), "dwpf")?)
                    } else {
                        None
                    };
                    (compute(izergin(&w, &zs, eta), "dwpf")?, "izergin", lat)
                }
            };
            Ok((
                json!({ "value": cj(value) }),
                json!({ "method": method, "lattice": lattice.map(cj) }),
            ))
        }
        Command::Slavnov {
            l,
            n1,
            n2,
            u,
            modes,
            v,
            z,
            point,
        } => {
            let eta = parse_complex(&point.eta).map_err(Failure::Usage)?;
            let zq = one_or_many(z, *l)?;
            let z_hom = match &zq {
                QuantumRapidities::Homogeneous(z0) => *z0,
                QuantumRapidities::Inhomogeneous(_) => Z0,
            };
            if modes.is_some() && matches!(zq, QuantumRapidities::Inhomogeneous(_)) {
                return Err(usage(
                    "--modes solves on a homogeneous chain; pass --u with inhomogeneous --z",
                ));
            }
            let u = solve_or_take(*l, u, modes, Some(*n1), z_hom, eta)?;
            let v = parse_complex_list(v)?;
            let input = SlavnovInput {
                l: *l,
                n1: *n1,
                n2: *n2,
                u: u.clone(),
                v: v.clone(),
                z: zq.clone(),
                eta,
            };
            let wt = compute(VertexWeights::new(eta), "slavnov")?;
            let z_list = match &zq {
                QuantumRapidities::Homogeneous(z0) => vec![*z0; *l],
                QuantumRapidities::Inhomogeneous(zs) => zs.clone(),
            };
            let (value, method) = match zq {
                QuantumRapidities::Homogeneous(_) => {
                    (compute(slavnov_hom(&input), "slavnov")?, "slavnov_hom")
                }
                QuantumRapidities::Inhomogeneous(_) => (
                    compute(slavnov_restricted(&input), "slavnov")?,
                    "slavnov_restricted",
                ),
            };
            let lattice = if *l <= 14 {
                Some(cj(compute(
                    brute_restricted(*l, *n1, *n2, &u, &v, &z_list, &wt),
                    "slavnov",
                )?))
            } else {
                None
            };
            Ok((
                json!({ "value": cj(value), "u": cjs(&u) }),
                json!({ "method": method, "lattice": lattice }),
            ))
        }
        Command::Gaudin {
            l,
            u,
            modes,
            z,
            point,
        } => {
            let eta = parse_complex(&point.eta).map_err(Failure::Usage)?;
            let z = parse_complex(z).map_err(Failure::Usage)?;
            let u = solve_or_take(*l, u, modes, None, z, eta)?;
            let value = compute(
                gaudin_norm(&GaudinInput {
                    l: *l,
                    u: u.clone(),
                    z,
                    eta,
                }),
                "gaudin",
            )?;
            let explicit = if *l <= 8 {
                let wt = compute(VertexWeights::new(eta), "gaudin")?;
                Some(cj(compute(explicit_norm(&u, &vec![z; *l], &wt), "gaudin")?))
            } else {
                None
            };
            Ok((
                json!({ "value": cj(value), "u": cjs(&u) }),
                json!({ "explicit_norm": explicit }),
            ))
        }
        Command::Bethe {
            l,
            n,
            modes,
            guesses,
            tol,
            z,
            point,
        } => {
            let eta = parse_complex(&point.eta).map_err(Failure::Usage)?;
            let z = parse_complex(z).map_err(Failure::Usage)?;
            let seed = match (modes, guesses) {
                (Some(m), _) => Seed::Modes(parse_int_list(m, "mode number")?),
                (None, Some(g)) => Seed::Guesses(parse_complex_list(g)?),
                (None, None) => return Err(usage("give either --modes or --guesses")),
            };
            let roots = compute(solve_bethe_at(*l, *n, &seed, *tol, z, eta), "bethe")?;
            let mut eig = Value::Null;
            if *l <= 16 {
                let wt = compute(VertexWeights::new(eta), "bethe")?;
                let state = compute(bethe_state_of(&roots), "bethe")?;
                let mut worst: f64 = 0.0;
                for x in [
                    Complex::new(0.37, 0.81),
                    Complex::new(-1.3, 0.2),
                    Complex::new(2.1, -0.6),
                ] {
                    worst = worst.max(compute(eigencheck(&state, x, &wt), "bethe")?.1);
                }
                eig = json!(worst);
            }
            Ok((
                json!({
                    "roots": cjs(roots.roots()),
                    "residual": roots.residual(),
                    "mode_numbers": roots.mode_numbers(),
                }),
                json!({ "eigencheck_residual": eig, "verified": roots.is_verified() }),
            ))
        }
        Command::Sc {
            l,
            n,
            modes_1,
            modes_2,
            modes_3,
            tol,
            no_oracle,
        } => {
            let [l1, l2, l3] = triple(l, "--L")?;
            let [n1, n2, n3] = triple(n, "--N")?;
            let g = if n1 == 0 && n2 == 0 && n3 == 0 {
                compute(make_bps_geometry(l1, l2, l3), "sc")?
            } else {
                compute(make_geometry(l1, l2, l3, n1, n2, n3), "sc")?
            };
            let mut sets = Vec::with_capacity(3);
            for (len, k, m) in [(l1, n1, modes_1), (l2, n2, modes_2), (l3, n3, modes_3)] {
                let modes: Vec<i64> = parse_int_list(m, "mode number")?;
                if modes.len() != k {
                    return Err(usage(format!(
                        "{k} magnons need {k} mode numbers, got {}",
                        modes.len()
                    )));
                }
                let r = if k == 0 {
                    compute(BetheRoots::at_default(len, vec![]), "sc")?
                } else {
                    compute(
                        solve_bethe_at(len, k, &Seed::Modes(modes), *tol, Z0, ETA),
                        "sc",
                    )?
                };
                sets.push(r);
            }
            let r = compute(structure_constant(&g, &sets[0], &sets[1], &sets[2]), "sc")?;
            let mut diag = Map::new();
            diag.insert("geometry".into(), json!(g));
            diag.insert("branch".into(), json!("principal"));
            diag.insert("radicand".into(), cj(r.radicand));
            diag.insert(
                "roots".into(),
                Value::Array(sets.iter().map(roots_json).collect()),
            );
            if !no_oracle && g.l1 <= crate::gauge_map::MAX_ORACLE_SITES {
                let o = compute(oracle_contraction(&g, &sets[0], &sets[1], &sets[2]), "sc")?;
                diag.insert("oracle".into(), cj(o));
                diag.insert(
                    "ratio".into(),
                    if o.norm() > 0.0 {
                        cj(r.c / o)
                    } else {
                        Value::Null
                    },
                );
            }
            Ok((
                json!({
                    "c": cj(r.c),
                    "N123": cj(r.n123),
                    "Z": cj(r.dwpf),
                    "S": cj(r.slavnov),
                    "norms": cjs(&r.norms),
                    "branch": "principal",
                    "residuals": sets.iter().map(|s| s.residual()).collect::<Vec<_>>(),
                }),
                Value::Object(diag),
            ))
        }
        Command::Verify {
            suite,
            max_n,
            max_l,
            geometry,
            trials,
        } => {
            let geo: Vec<usize> = parse_int_list(geometry, "geometry entry")?;
            let geo: [usize; 6] = geo
                .try_into()
                .map_err(|_| usage("--geometry needs L1,L2,L3,N1,N2,N3"))?;
            let opts = VerifyOptions {
                max_n: *max_n,
                max_l: *max_l,
                geometry: geo,
                trials: *trials,
                seed: cli.seed,
            };
            let checks = run_suite(*suite, &opts);
            let passed = checks.iter().all(|c| c.passed);
            let result = json!({ "passed": passed, "checks": checks });
            if passed {
                Ok((result, json!({ "seed": cli.seed })))
            } else {
                Err(Failure::Checks(result))
            }
        }
        Command::Map { word, role, side } => {
            let w = compute(parse_trace(word), "map")?;
            let role = match role {
                RoleArg::O1 => Role::O1,
                RoleArg::O2 => Role::O2,
                RoleArg::O3 => Role::O3,
            };
            let side = match side {
                SideArg::Initial => Side::Initial,
                SideArg::Final => Side::Final,
            };
            let b = compute(word_to_basis(&w, role, side), "map")?;
            let bits: String = (0..b.l())
                .map(|j| if b.mask() >> j & 1 == 1 { 'v' } else { '^' })
                .collect();
            Ok((
                json!({ "L": b.l(), "mask": b.mask(), "magnons": b.magnons(), "net_spin": b.net_spin(), "arrows": bits }),
                json!({ "word": w.to_string() }),
            ))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Dwpf { .. } => "dwpf",
        Command::Slavnov { .. } => "slavnov",
        Command::Gaudin { .. } => "gaudin",
        Command::Bethe { .. } => "bethe",
        Command::Sc { .. } => "sc",
        Command::Verify { .. } => "verify",
        Command::Map { .. } => "map",
    }
}

fn flatten(prefix: &str, v: &Value, cols: &mut Vec<(String, String)>) {
    let key = |s: &str| {
        if prefix.is_empty() {
            s.to_string()
        } else {
            format!("{prefix}.{s}")
        }
    };
    match v {
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            cols.push((format!("{prefix}_re"), a[0].to_string()));
            cols.push((format!("{prefix}_im"), a[1].to_string()));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, cols);
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, cols);
            }
        }
        Value::String(s) => cols.push((prefix.to_string(), csv_field(s))),
        Value::Null => cols.push((prefix.to_string(), String::new())),
        other => cols.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(format: Format, doc: &Value) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(doc).expect("valid JSON")
        ),
        Format::Csv => {
            let mut cols = Vec::new();
            flatten("", &doc["result"], &mut cols);
            let header: Vec<&str> = cols.iter().map(|c| c.0.as_str()).collect();
            let row: Vec<&str> = cols.iter().map(|c| c.1.as_str()).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let tmp = temp_path(path);
            std::fs::write(&tmp, text)?;
            std::fs::rename(&tmp, path)
        }
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}

fn error_doc(kind: &str, message: &str, context: Value) -> String {
    json!({ "error": { "kind": kind, "message": message, "context": context } }).to_string()
}

fn error_context(e: &Error, command: &str) -> Value {
    match e {
        Error::NoConvergence {
            best,
            residual,
            iterations,
        } => json!({
            "command": command, "best": cjs(best), "residual": residual, "iterations": iterations
        }),
        Error::ParseError { offset, .. } => json!({ "command": command, "offset": offset }),
        _ => json!({ "command": command }),
    }
}

/// Re-runs the recorded argv of an earlier output and compares results.
fn run_check(path: &Path) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!(
                "{}",
                error_doc(
                    "Usage",
                    &format!("cannot read {}: {e}", path.display()),
                    Value::Null
                )
            );
            return 2;
        }
    };
    let old: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!(
                "{}",
                error_doc(
                    "Usage",
                    &format!("{} is not JSON: {e}", path.display()),
                    Value::Null
                )
            );
            return 2;
        }
    };
    let argv: Option<Vec<String>> = old["inputs"]["argv"]
        .as_array()
        .and_then(|a| a.iter().map(|x| x.as_str().map(String::from)).collect());
    let Some(argv) = argv else {
        eprintln!(
            "{}",
            error_doc("Usage", "no inputs.argv in the checked file", Value::Null)
        );
        return 2;
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", error_doc("Usage", &e.to_string(), Value::Null));
            return 2;
        }
    };
    let Some(command) = &cli.command else {
        eprintln!(
            "{}",
            error_doc(
                "Usage",
                "the checked file records no subcommand",
                Value::Null
            )
        );
        return 2;
    };
    let fresh = match execute(&cli, command) {
        Ok((result, _)) | Err(Failure::Checks(result)) => result,
        Err(Failure::Usage(m)) => {
            eprintln!("{}", error_doc("Usage", &m, Value::Null));
            return 2;
        }
        Err(Failure::Compute(e, ctx)) => {
            eprintln!(
                "{}",
                error_doc(e.kind(), &e.to_string(), error_context(&e, &ctx))
            );
            return 1;
        }
    };
    let same = fresh == old["result"];
    println!(
        "{}",
        json!({ "check": path.display().to_string(), "identical": same })
    );
    if same {
        0
    } else {
        1
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    if let Some(path) = &cli.check {
        return run_check(path);
    }
    let Some(command) = &cli.command else {
        eprintln!(
            "{}",
            error_doc("Usage", "a subcommand is required; see --help", Value::Null)
        );
        return 2;
    };
    let name = command_name(command);
    let inputs = json!({ "argv": argv });
    let (result, diagnostics, code) = match execute(&cli, command) {
        Ok((r, d)) => (r, d, 0),
        Err(Failure::Checks(r)) => (r, json!({ "seed": cli.seed }), 1),
        Err(Failure::Usage(m)) => {
            eprintln!("{}", error_doc("Usage", &m, json!({ "command": name })));
            return 2;
        }
        Err(Failure::Compute(e, ctx)) => {
            eprintln!(
                "{}",
                error_doc(e.kind(), &e.to_string(), error_context(&e, &ctx))
            );
            return 1;
        }
    };
    let doc =
        json!({ "command": name, "inputs": inputs, "result": result, "diagnostics": diagnostics });
    if let Err(e) = write_output(&cli.out, &render(cli.format, &doc)) {
        eprintln!(
            "{}",
            error_doc("Io", &e.to_string(), json!({ "command": name }))
        );
        return 1;
    }
    code
}
