//! Run configuration: TOML file, command-line overrides, validation.

use cyclosyn_core::exactalg::arith::gcd;
use cyclosyn_core::exactalg::{NumberRing, RingRef, RingSpec};
use cyclosyn_core::polylog::RootOfUnity;
use cyclosyn_core::verify::{SuiteConfig, SUITES};
use serde::Deserialize;
use std::fmt;
use std::path::Path;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub f: Option<Vec<i64>>,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub label: Option<String>,
    pub levels: Option<Vec<u64>>,
    pub divisors: Option<Vec<u64>>,
    pub roots: Option<Vec<(u64, u64)>>,
    pub suites: Option<Vec<String>>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error")?;
        if let Some(l) = self.line {
            write!(f, " at line {l}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " in `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl ConfigError {
    pub fn flag(flag: &str, message: impl Into<String>) -> Self {
        ConfigError { line: None, field: Some(flag.into()), message: message.into() }
    }
}

/// Parsed file plus its text, for locating fields.
pub struct Loaded {
    pub file: FileConfig,
    text: String,
}

impl Loaded {
    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        match toml::from_str::<FileConfig>(text) {
            Ok(file) => Ok(Loaded { file, text: text.to_string() }),
            Err(e) => {
                let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
                Err(ConfigError { line, field: None, message: e.message().to_string() })
            }
        }
    }

    fn error(&self, field: &str, message: impl Into<String>) -> ConfigError {
        let line = self
            .text
            .lines()
            .position(|l| {
                let l = l.trim_start();
                l.strip_prefix(field).is_some_and(|rest| rest.trim_start().starts_with('='))
            })
            .map(|i| i + 1);
        ConfigError { line, field: Some(field.into()), message: message.into() }
    }
}

/// Values given on the command line. They take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub suites: Option<Vec<String>>,
    pub levels: Option<Vec<u64>>,
    pub divisors: Option<Vec<u64>>,
    pub zeta: Option<(u64, u64)>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub adjoin_half: bool,
    pub li1_sign_fault: bool,
}

pub struct Run {
    pub suites: Vec<String>,
    pub cfg: SuiteConfig,
}

/// Picks a value from the flags or the file and remembers where it came from.
fn pick<T: Clone>(flag: &Option<T>, file: Option<&Option<T>>, flag_name: &str, field: &str) -> Option<(T, Source)> {
    if let Some(v) = flag {
        return Some((v.clone(), Source::Flag(flag_name.to_string())));
    }
    file.and_then(|f| f.clone()).map(|v| (v, Source::Field(field.to_string())))
}

#[derive(Clone, Debug)]
enum Source {
    Flag(String),
    Field(String),
}

fn err(loaded: Option<&Loaded>, src: &Source, message: impl Into<String>) -> ConfigError {
    match (src, loaded) {
        (Source::Field(f), Some(l)) => l.error(f, message),
        (Source::Field(f), None) | (Source::Flag(f), _) => ConfigError::flag(f, message),
    }
}

/// Ring for single computations: the file's ring, else ℤ[ζ_g][1/g] for the
/// given --zeta order, else ℤ.
pub fn command_ring(loaded: Option<&Loaded>, o: &Overrides) -> Result<RingRef, ConfigError> {
    let spec = match ring_spec(loaded)? {
        Some(s) => s,
        None => match o.zeta {
            Some((g, _)) if g > 0 => RingSpec::of(&NumberRing::cyclotomic(g)),
            _ => RingSpec::of(&NumberRing::integers()),
        },
    };
    let spec = if o.adjoin_half { spec.adjoin_half() } else { spec };
    build_ring(loaded, &spec)
}

fn ring_spec(loaded: Option<&Loaded>) -> Result<Option<RingSpec>, ConfigError> {
    let Some(l) = loaded else { return Ok(None) };
    match (&l.file.f, l.file.n) {
        (None, None) => {
            if l.file.label.is_some() {
                return Err(l.error("label", "label given without f and N"));
            }
            Ok(None)
        }
        (Some(f), Some(n)) => Ok(Some(RingSpec { f: f.clone(), n, label: l.file.label.clone() })),
        (Some(_), None) => Err(l.error("f", "f given without N")),
        (None, Some(_)) => Err(l.error("N", "N given without f")),
    }
}

fn build_ring(loaded: Option<&Loaded>, spec: &RingSpec) -> Result<RingRef, ConfigError> {
    spec.build().map_err(|e| match loaded {
        Some(l) if l.file.f.is_some() => l.error("f", e.to_string()),
        _ => ConfigError::flag("ring", e.to_string()),
    })
}

fn with_half(ring: &RingRef) -> RingRef {
    RingSpec::of(ring).adjoin_half().build().expect("adjoining 1/2 keeps the ring valid")
}

/// Primitive N-th root of unity of the ring, when it has one.
fn default_roots(ring: &RingRef) -> Vec<RootOfUnity> {
    let n = ring.inverted();
    if n <= 1 {
        return vec![];
    }
    RootOfUnity::new(ring, n, 1).map(|z| vec![z]).unwrap_or_default()
}

pub fn resolve(loaded: Option<&Loaded>, o: &Overrides) -> Result<Run, ConfigError> {
    let file = loaded.map(|l| &l.file);
    let mut cfg = SuiteConfig::default();

    let explicit_roots = match o.zeta {
        Some((g, a)) => Some((vec![(g, a)], Source::Flag("--zeta".into()))),
        None => file.and_then(|f| f.roots.clone()).map(|r| (r, Source::Field("roots".into()))),
    };

    let spec = match ring_spec(loaded)? {
        Some(s) => Some(s),
        None => o.zeta.map(|(g, _)| RingSpec::of(&NumberRing::cyclotomic(g.max(1)))),
    };
    if let Some(spec) = spec {
        let spec = if o.adjoin_half { spec.adjoin_half() } else { spec };
        let ring = build_ring(loaded, &spec)?;
        cfg.rings = vec![ring.clone()];
        cfg.roots = default_roots(&ring);
        cfg.ring = ring;
    } else if o.adjoin_half {
        cfg.rings = cfg.rings.iter().map(with_half).collect();
        cfg.ring = with_half(&cfg.ring);
        cfg.roots = cfg
            .roots
            .iter()
            .map(|z| RootOfUnity::new(&with_half(z.ring()), z.order(), z.exponent()).expect("root survives"))
            .collect();
    }

    if let Some((roots, src)) = explicit_roots {
        let ring = cfg.ring.clone();
        let n = ring.inverted();
        let mut out = vec![];
        for (g, a) in roots {
            if g == 0 || n % g != 0 {
                let hint = if g == 2 && !o.adjoin_half { " (use --adjoin-half for zeta = -1)" } else { "" };
                return Err(err(loaded, &src, format!("root order {g} does not divide N = {n}{hint}")));
            }
            let z = RootOfUnity::new(&ring, g, a).map_err(|e| err(loaded, &src, e.to_string()))?;
            out.push(z);
        }
        cfg.roots = out;
    }

    let mut all_n = vec![cfg.ring.inverted()];
    all_n.extend(cfg.roots.iter().map(|z| z.ring().inverted()));

    if let Some((levels, src)) = pick(&o.levels, file.map(|f| &f.levels), "--m", "levels") {
        for &m in &levels {
            if m == 0 {
                return Err(err(loaded, &src, "levels must be positive"));
            }
            if let Some(n) = all_n.iter().find(|&&n| gcd(m, n) != 1) {
                return Err(err(loaded, &src, format!("level {m} shares a factor with N = {n}")));
            }
        }
        cfg.levels = Some(levels);
    }
    if let Some((ds, src)) = pick(&o.divisors, file.map(|f| &f.divisors), "--d", "divisors") {
        if ds.contains(&0) {
            return Err(err(loaded, &src, "divisors must be positive"));
        }
        cfg.divisors = Some(ds);
    }
    let suites = match pick(&o.suites, file.map(|f| &f.suites), "--suite", "suites") {
        Some((names, src)) => {
            if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
                return Err(err(loaded, &src, format!("unknown suite `{bad}`; known: {}", SUITES.join(", "))));
            }
            names
        }
        None => SUITES.iter().map(|s| s.to_string()).collect(),
    };
    if let Some((jobs, src)) = pick(&o.jobs, file.map(|f| &f.jobs), "--jobs", "jobs") {
        if jobs == 0 {
            return Err(err(loaded, &src, "jobs must be at least 1"));
        }
        cfg.jobs = jobs;
    }
    if let Some((seed, _)) = pick(&o.seed, file.map(|f| &f.seed), "--seed", "seed") {
        cfg.seed = seed;
    }
    if let Some((samples, _)) = pick(&o.samples, file.map(|f| &f.samples), "--samples", "samples") {
        cfg.samples = Some(samples);
    }
    cfg.li1_sign_fault = o.li1_sign_fault;
    Ok(Run { suites, cfg })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_a_line() {
        let e = Loaded::parse("f = [1, 1, 1, 1, 1]\nN = 5\nlevels = [2, \"x\"]\n").err().unwrap();
        assert_eq!(e.line, Some(3));
        let e = Loaded::parse("f = [1, 1]\nN = 2\nlevelz = [3]\n").err().unwrap();
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn level_sharing_a_factor_with_n_is_rejected() {
        let l = Loaded::parse("f = [1, 1, 1, 1, 1]\nN = 5\nlabel = \"Z5\"\nlevels = [2, 10]\n").unwrap();
        let e = resolve(Some(&l), &Overrides::default()).err().unwrap();
        assert_eq!(e.line, Some(4));
        assert_eq!(e.field.as_deref(), Some("levels"));
        let e = resolve(None, &Overrides { levels: Some(vec![7]), ..Default::default() }).err().unwrap();
        assert_eq!(e.field.as_deref(), Some("--m"));
    }

    #[test]
    fn minus_one_needs_a_half() {
        let o = Overrides { zeta: Some((2, 1)), ..Default::default() };
        let l = Loaded::parse("f = [1, 1, 1, 1, 1]\nN = 5\n").unwrap();
        assert!(resolve(Some(&l), &o).is_err());
        let run = resolve(Some(&l), &Overrides { adjoin_half: true, ..o }).unwrap();
        assert_eq!(run.cfg.ring.inverted(), 10);
        assert_eq!(run.cfg.roots[0].order(), 2);
    }

    #[test]
    fn defaults_match_the_library() {
        let run = resolve(None, &Overrides::default()).unwrap();
        assert_eq!(run.suites.len(), SUITES.len());
        assert_eq!(run.cfg.ring.label(), SuiteConfig::default().ring.label());
    }
}
