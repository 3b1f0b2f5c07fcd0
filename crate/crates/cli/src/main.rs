mod config;

use clap::{Args, Parser, Subcommand};
use config::{ConfigError, Loaded, Overrides};
use cyclosyn_core::cyclosyn::{chern_cocycle, integer_unit_lift};
use cyclosyn_core::exactalg::arith::parse_rational;
use cyclosyn_core::exactalg::{ComponentElement, Poly, RElement, RingRef, Var};
use cyclosyn_core::polylog::{canonical_unit_lift, li1_class, RootOfUnity};
use cyclosyn_core::qwitt::{cyclotomic_norm, QWittElement};
use cyclosyn_core::report::{poly_json, relement_json};
use cyclosyn_core::verify;
use cyclosyn_core::witt::{dwork_witness, ghost, GhostTuple, WittVector};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cyclosyn", version, about = "Exact q-Witt, Habiro and cyclosyntomic computations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration (f, N, label, levels, divisors, roots, suites, jobs, seed, samples).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Suites to run, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    suite: Option<Vec<String>>,
    /// Levels m, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    m: Option<Vec<u64>>,
    /// Divisors d, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    d: Option<Vec<u64>>,
    /// Root of unity as order[:exponent].
    #[arg(long, global = true, value_parser = parse_zeta)]
    zeta: Option<(u64, u64)>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Invert 2 in the ring, which allows zeta = -1.
    #[arg(long, global = true)]
    adjoin_half: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print one JSON report per suite.
    VerifyAll {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Compare the Chern class with +Li_1 (negative control).
        #[arg(long, hide = true)]
        inject_li1_sign_fault: bool,
    },
    /// First Chern class of 1 - zeta (canonical lift) or of an integer unit.
    Chern {
        /// Integer unit of R, instead of 1 - zeta.
        #[arg(long, allow_hyphen_values = true)]
        unit: Option<i64>,
    },
    /// First q-polylogarithm class of zeta.
    Li1,
    /// Cyclotomic norm of a global polynomial from level m to level --to.
    Norm {
        /// Coefficients in q, lowest first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        to: u64,
    },
    /// Ghost map of a Witt vector.
    Ghost {
        /// Witt coordinates in increasing divisor order.
        #[arg(long, allow_hyphen_values = true)]
        witt: String,
    },
    /// Dwork criterion for a ghost tuple.
    Dwork {
        /// Ghost coordinates in increasing divisor order.
        #[arg(long, allow_hyphen_values = true)]
        ghost: String,
    },
}

fn parse_zeta(s: &str) -> Result<(u64, u64), String> {
    let (g, a) = match s.split_once(':') {
        Some((g, a)) => (g, a),
        None => (s, "1"),
    };
    let g: u64 = g.trim().parse().map_err(|_| format!("bad order `{g}`"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad exponent `{a}`"))?;
    if g == 0 {
        return Err("order must be positive".into());
    }
    Ok((g, a))
}

enum Failure {
    Config(ConfigError),
    Compute(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<cyclosyn_core::Error> for Failure {
    fn from(e: cyclosyn_core::Error) -> Self {
        match e {
            cyclosyn_core::Error::InvalidArgument(m) => Failure::Config(ConfigError::flag("argument", m)),
            other => Failure::Compute(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let c = &cli.common;
    let loaded = c.config.as_deref().map(Loaded::read).transpose()?;
    let mut o = Overrides {
        suites: c.suite.clone(),
        levels: c.m.clone(),
        divisors: c.d.clone(),
        zeta: c.zeta,
        jobs: c.jobs,
        adjoin_half: c.adjoin_half,
        ..Default::default()
    };
    match &cli.command {
        Command::VerifyAll { seed, samples, inject_li1_sign_fault } => {
            o.seed = *seed;
            o.samples = *samples;
            o.li1_sign_fault = *inject_li1_sign_fault;
            verify_all(loaded.as_ref(), &o, c.json.as_ref())
        }
        cmd => {
            let ring = config::command_ring(loaded.as_ref(), &o)?;
            let (text, value) = single(cmd, &ring, c)?;
            println!("{text}");
            let line = serde_json::to_string(&value).expect("json");
            println!("{line}");
            if let Some(path) = &c.json {
                write_file(path, &format!("{line}\n"))?;
            }
            Ok(true)
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Config(ConfigError::flag("--json", format!("cannot write {}: {e}", path.display()))))
}

fn verify_all(loaded: Option<&Loaded>, o: &Overrides, json_path: Option<&PathBuf>) -> Result<bool, Failure> {
    let run = config::resolve(loaded, o)?;
    let mut out = String::new();
    let mut all = true;
    let stdout = std::io::stdout();
    for name in &run.suites {
        let report = verify::run_suite(name, &run.cfg).expect("suite names are validated");
        all &= report.passed();
        eprintln!(
            "{:<24} {} ({} ms){}",
            report.suite,
            if report.passed() { "PASS" } else { "FAIL" },
            report.millis,
            report
                .witness
                .as_ref()
                .and_then(|w| w.detail.as_ref())
                .map(|d| format!(" {d}"))
                .unwrap_or_default()
        );
        let line = report.to_json();
        if json_path.is_none() {
            let mut h = stdout.lock();
            let _ = writeln!(h, "{line}");
        }
        out.push_str(&line);
        out.push('\n');
    }
    if let Some(path) = json_path {
        write_file(path, &out)?;
    }
    Ok(all)
}

fn one(list: &Option<Vec<u64>>, flag: &str) -> Result<u64, Failure> {
    match list.as_deref() {
        Some([v]) if *v > 0 => Ok(*v),
        _ => Err(ConfigError::flag(flag, "expected a single positive value").into()),
    }
}

fn root(ring: &RingRef, c: &Common) -> Result<RootOfUnity, Failure> {
    let (g, a) = c.zeta.ok_or_else(|| ConfigError::flag("--zeta", "required"))?;
    Ok(RootOfUnity::new(ring, g, a)?)
}

/// An element of R: a rational, or coordinates in x joined by ':'.
fn parse_element(ring: &RingRef, s: &str, flag: &str) -> Result<RElement, Failure> {
    let coords: Option<Vec<_>> = s.split(':').map(parse_rational).collect();
    let coords = coords.ok_or_else(|| ConfigError::flag(flag, format!("cannot parse `{s}`")))?;
    if coords.len() > ring.degree() {
        return Err(ConfigError::flag(flag, format!("`{s}` has more than {} coordinates", ring.degree())).into());
    }
    Ok(RElement::new(ring, Poly::new(Var::X, coords)))
}

fn parse_list(ring: &RingRef, s: &str, flag: &str) -> Result<Vec<RElement>, Failure> {
    s.split(',').map(|t| parse_element(ring, t.trim(), flag)).collect()
}

fn scalar_json(x: &RElement) -> Value {
    match relement_json(x) {
        Value::Array(mut v) if v.len() == 1 => v.pop().unwrap(),
        other => other,
    }
}

fn components_json<'a>(it: impl Iterator<Item = (&'a u64, &'a ComponentElement)>) -> Value {
    let m: Map<String, Value> = it.map(|(e, c)| (e.to_string(), poly_json(c.value()))).collect();
    Value::Object(m)
}

fn tuple_json(coords: &BTreeMap<u64, RElement>) -> Value {
    Value::Object(coords.iter().map(|(e, x)| (e.to_string(), scalar_json(x))).collect())
}

fn single(cmd: &Command, ring: &RingRef, c: &Common) -> Result<(String, Value), Failure> {
    let base = json!({ "ring": ring.label() });
    let mut obj = base.as_object().cloned().expect("object");
    let text = match cmd {
        Command::Ghost { witt } => {
            let m = one(&c.m, "--m")?;
            let w = WittVector::new(ring, m, parse_list(ring, witt, "--witt")?)?;
            let g = ghost(&w);
            obj.insert("command".into(), json!("ghost"));
            obj.insert("m".into(), json!(m));
            obj.insert("ghost".into(), tuple_json(g.coords()));
            g.render()
        }
        Command::Dwork { ghost } => {
            let m = one(&c.m, "--m")?;
            let g = GhostTuple::new(ring, m, parse_list(ring, ghost, "--ghost")?)?;
            let w = dwork_witness(&g)?;
            obj.insert("command".into(), json!("dwork"));
            obj.insert("m".into(), json!(m));
            obj.insert("member".into(), json!(w.is_none()));
            if let Some(w) = &w {
                obj.insert("witness".into(), json!({ "e": w.e, "p": w.p }));
            }
            w.is_none().to_string()
        }
        Command::Norm { poly, to } => {
            let m = one(&c.m, "--m")?;
            if *to == 0 || to % m != 0 {
                return Err(ConfigError::flag("--to", format!("{m} does not divide {to}")).into());
            }
            let p = Poly::new(Var::Q, parse_list(ring, poly, "--poly")?);
            let n = cyclotomic_norm(&QWittElement::from_polynomial(ring, m, &p), *to);
            obj.insert("command".into(), json!("norm"));
            obj.insert("m".into(), json!(m));
            obj.insert("to".into(), json!(to));
            obj.insert("components".into(), components_json(n.components().iter()));
            n.render()
        }
        Command::Li1 => {
            let m = one(&c.m, "--m")?;
            let d = one(&c.d, "--d")?;
            let z = root(ring, c)?;
            let li = li1_class(&z, d, m)?;
            obj.insert("command".into(), json!("li1"));
            obj.insert("m".into(), json!(m));
            obj.insert("d".into(), json!(d));
            obj.insert("zeta".into(), json!(format!("{}:{}", z.order(), z.exponent())));
            obj.insert("components".into(), components_json(li.components().iter()));
            li.render()
        }
        Command::Chern { unit } => {
            let m = one(&c.m, "--m")?;
            let d = one(&c.d, "--d")?;
            let (u, lift, label) = match unit {
                Some(k) => (RElement::from_int(ring, *k), integer_unit_lift(ring, *k, m)?, k.to_string()),
                None => {
                    let z = root(ring, c)?;
                    let label = format!("1-zeta{}^{}", z.order(), z.exponent());
                    (z.one_minus(), canonical_unit_lift(&z, m)?, label)
                }
            };
            let class = chern_cocycle(&u, m, d, &lift)?;
            obj.insert("command".into(), json!("chern"));
            obj.insert("m".into(), json!(m));
            obj.insert("d".into(), json!(d));
            obj.insert("unit".into(), json!(label));
            obj.insert("components".into(), components_json(class.value.components().iter()));
            class.value.render()
        }
        Command::VerifyAll { .. } => unreachable!("handled by verify_all"),
    };
    Ok((text, Value::Object(obj)))
}
