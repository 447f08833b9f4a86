//! Experiment configuration: INI-style `key = value` lines under `[section]`
//! headers. Keys before the first header belong to the top level.
//!
//! Every key has a default, so a file may be as short as `kind = envelope`.
//! Unknown sections, unknown keys, repeated keys and out-of-range values are
//! all rejected. The README lists every key with its default and range.

use std::collections::BTreeMap;
use std::str::FromStr;

use ini::{Ini, ParseOption};
use innergrowth::functions::{Atom, CantorComponent, CirclePoint, SingularMeasure};
use innergrowth::spectra::ModulusOfContinuity;
use innergrowth::weights::LambdaSequence;
use innergrowth::Complex64;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Envelope,
    Cyclic,
    Weights,
    Embedding,
    Pipeline,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Envelope => "envelope",
            Kind::Cyclic => "cyclic",
            Kind::Weights => "weights",
            Kind::Embedding => "embedding",
            Kind::Pipeline => "pipeline",
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "envelope" => Kind::Envelope,
            "cyclic" => Kind::Cyclic,
            "weights" => Kind::Weights,
            "embedding" => Kind::Embedding,
            "pipeline" => Kind::Pipeline,
            _ => return Err(format!("unknown kind {s:?} (expected envelope, cyclic, weights, embedding or pipeline)")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFamily {
    /// `(2W)^{-1/2}` from the moment weight of the configured λ.
    MomentDecay,
    ExponentialPoisson { m: f64 },
    PowerLog { a: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaConfig {
    pub sequence: LambdaSequence,
    pub n_max: usize,
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub name: String,
    pub seed: u64,
    pub measure: SingularMeasure,
    pub weight: WeightFamily,
    pub lambda: LambdaConfig,
    pub radii: usize,
    pub angles: usize,
    pub cyclic_n_list: Vec<usize>,
    pub cyclic_points: Vec<Complex64>,
    pub cyclic_tolerance: f64,
    pub n_check: usize,
    pub unit_levels: usize,
    pub omega: ModulusOfContinuity,
    pub embedding_levels: u32,
    pub embedding_n_max: usize,
    pub polynomials: usize,
    pub degree: usize,
    pub parseval_polynomials: usize,
    pub parseval_degree: usize,
    pub parseval_radii: Vec<f64>,
    pub pipeline_n_list: Vec<usize>,
    pub k: usize,
    pub kernel_points: Vec<Complex64>,
    pub fraction: f64,
    pub norm_constant: f64,
    /// Resolved value of every key, defaults included, as `section.key`.
    pub echo: BTreeMap<String, String>,
}

/// `(section, key)` pairs accepted in a config file; the empty section is the
/// top level.
pub const KEYS: &[(&str, &str)] = &[
    ("", "kind"),
    ("", "name"),
    ("", "seed"),
    ("measure", "atoms"),
    ("measure", "cantor"),
    ("weight", "family"),
    ("weight", "m"),
    ("weight", "a"),
    ("lambda", "family"),
    ("lambda", "a"),
    ("lambda", "n_max"),
    ("lambda", "levels"),
    ("grid", "radii"),
    ("grid", "angles"),
    ("cyclic", "n_list"),
    ("cyclic", "points"),
    ("cyclic", "tolerance"),
    ("weights", "n_check"),
    ("weights", "unit_levels"),
    ("embedding", "omega"),
    ("embedding", "p"),
    ("embedding", "levels"),
    ("embedding", "n_max"),
    ("embedding", "polynomials"),
    ("embedding", "degree"),
    ("embedding", "parseval_polynomials"),
    ("embedding", "parseval_degree"),
    ("embedding", "parseval_radii"),
    ("pipeline", "n_list"),
    ("pipeline", "k"),
    ("pipeline", "kernel_points"),
    ("pipeline", "fraction"),
    ("pipeline", "norm_constant"),
];

fn full_key(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

fn err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Raw `section.key → value` map with structural checks applied.
fn read_raw(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let opts = ParseOption { enabled_quote: false, enabled_escape: false, ..ParseOption::default() };
    let ini = Ini::load_from_str_opt(text, opts).map_err(|e| err(format!("line {}: {}", e.line + 1, e.msg)))?;
    let mut raw = BTreeMap::new();
    for (section, props) in ini.iter() {
        let section = section.unwrap_or("");
        if !section.is_empty() && !KEYS.iter().any(|(s, _)| *s == section) {
            return Err(err(format!("unknown section [{section}]")));
        }
        for (key, value) in props.iter() {
            if !KEYS.contains(&(section, key)) {
                return Err(err(format!("unknown key {:?}", full_key(section, key))));
            }
            if raw.insert(full_key(section, key), value.trim().to_string()).is_some() {
                return Err(err(format!("key {:?} given twice", full_key(section, key))));
            }
        }
    }
    Ok(raw)
}

struct Reader {
    raw: BTreeMap<String, String>,
    echo: BTreeMap<String, String>,
}

impl Reader {
    fn text(&mut self, key: &str, default: &str) -> String {
        let v = self.raw.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.echo.insert(key.to_string(), v.clone());
        v
    }

    fn parsed<T: FromStr>(&mut self, key: &str, default: &str) -> Result<T, CliError> {
        let v = self.text(key, default);
        v.parse().map_err(|_| err(format!("{key} = {v:?} is not a valid value")))
    }

    fn int(&mut self, key: &str, default: usize, lo: usize, hi: usize) -> Result<usize, CliError> {
        let v: usize = self.parsed(key, &default.to_string())?;
        if !(lo..=hi).contains(&v) {
            return Err(err(format!("{key} = {v} is outside {lo}..={hi}")));
        }
        Ok(v)
    }

    /// Finite float in the open/closed range described by `check`.
    fn float(&mut self, key: &str, default: f64, range: &str, check: impl Fn(f64) -> bool) -> Result<f64, CliError> {
        let v: f64 = self.parsed(key, &default.to_string())?;
        if !v.is_finite() || !check(v) {
            return Err(err(format!("{key} = {v} is outside {range}")));
        }
        Ok(v)
    }

    fn list<T>(&mut self, key: &str, default: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
        let v = self.text(key, default);
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(',')
            .map(|s| item(s.trim()).ok_or_else(|| err(format!("{key}: cannot read item {:?}", s.trim()))))
            .collect()
    }
}

/// `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().ok()?,
    };
    Some(Complex64::new(re.parse().ok()?, im))
}

fn parse_fields<const N: usize>(s: &str) -> Option<[f64; N]> {
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    parts.try_into().ok()
}

pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
    let raw = read_raw(text)?;
    if !raw.contains_key("kind") {
        return Err(err("missing required key \"kind\""));
    }
    let mut r = Reader { raw, echo: BTreeMap::new() };

    let kind: Kind = {
        let v = r.text("kind", "");
        v.parse().map_err(err)?
    };
    let name = r.text("name", kind.as_str());
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(err(format!("name = {name:?} must be non-empty and use only letters, digits, '_' and '-'")));
    }
    let seed: u64 = r.parsed("seed", "0")?;

    let atoms = r.list("measure.atoms", "0:1", |s| {
        let [angle, mass] = parse_fields::<2>(s)?;
        Some(Atom { position: CirclePoint::new(angle), mass })
    })?;
    let cantor = r.list("measure.cantor", "", |s| {
        let [center, width, depth, mass] = parse_fields::<4>(s)?;
        (depth.fract() == 0.0 && depth >= 0.0).then(|| CantorComponent {
            center: CirclePoint::new(center),
            arc_width: width,
            depth: depth as u32,
            total_mass: mass,
        })
    })?;
    let measure = SingularMeasure::new(atoms, cantor).map_err(|e| err(format!("measure: {e}")))?;

    let family = r.text("weight.family", "moment-decay");
    let m = r.float("weight.m", 1.0, "(0, ∞)", |v| v > 0.0)?;
    let a = r.float("weight.a", 1.0, "(0, ∞)", |v| v > 0.0)?;
    let weight = match family.as_str() {
        "moment-decay" => WeightFamily::MomentDecay,
        "exponential-poisson" => WeightFamily::ExponentialPoisson { m },
        "power-log" => WeightFamily::PowerLog { a },
        other => return Err(err(format!("weight.family = {other:?} (expected moment-decay, exponential-poisson or power-log)"))),
    };

    let lambda_family = r.text("lambda.family", "power");
    let lambda_a = r.float("lambda.a", 1.0, "(0, 16]", |v| v > 0.0 && v <= 16.0)?;
    let sequence = match lambda_family.as_str() {
        "power" => LambdaSequence::Power { a: lambda_a },
        "logarithmic" => LambdaSequence::Logarithmic,
        other => return Err(err(format!("lambda.family = {other:?} (expected power or logarithmic)"))),
    };
    let lambda = LambdaConfig {
        sequence,
        n_max: r.int("lambda.n_max", innergrowth::weights::DEFAULT_N_MAX, 4, 100_000)?,
        levels: r.int("lambda.levels", innergrowth::model::DEFAULT_MULTIPLIER_LEVELS, 1, innergrowth::weights::MAX_LEVELS)?,
    };

    let radii = r.int("grid.radii", 64, 1, 4096)?;
    let default_angles = if kind == Kind::Envelope { 8192 } else { 1024 };
    let angles = r.int("grid.angles", default_angles, 8, 65_536)?;

    let n_item = |s: &str| s.parse::<usize>().ok().filter(|&n| (2..=100_000).contains(&n));
    let cyclic_n_list = r.list("cyclic.n_list", "2, 4, 8, 16, 32", n_item)?;
    let cyclic_points = r.list("cyclic.points", "0, 0.5, 0.9, 0.5i", |s| parse_complex(s).filter(|z| z.norm() < 1.0))?;
    let cyclic_tolerance = r.float("cyclic.tolerance", 0.05, "(0, 1]", |v| v > 0.0 && v <= 1.0)?;

    let n_check = r.int("weights.n_check", 50, 0, 100_000)?;
    if n_check + 2 > lambda.n_max {
        return Err(err(format!("weights.n_check = {n_check} exceeds lambda.n_max − 2 = {}", lambda.n_max - 2)));
    }
    let unit_levels = r.int("weights.unit_levels", 40, 1, innergrowth::weights::MAX_LEVELS)?;

    let omega_family = r.text("embedding.omega", "hoelder");
    let p = r.float("embedding.p", 0.5, "(0, 1)", |v| v > 0.0 && v < 1.0)?;
    let omega = match omega_family.as_str() {
        "hoelder" => ModulusOfContinuity::Hoelder { a: p },
        "log-inverse" => ModulusOfContinuity::LogInverse { p },
        other => return Err(err(format!("embedding.omega = {other:?} (expected hoelder or log-inverse)"))),
    };
    omega.validate().map_err(|e| err(format!("embedding: {e}")))?;
    let embedding_levels = r.int("embedding.levels", 20, 0, 60)? as u32;
    let embedding_n_max = r.int("embedding.n_max", 200, 1, 100_000)?;
    let polynomials = r.int("embedding.polynomials", 100, 0, 100_000)?;
    let degree = r.int("embedding.degree", 50, 0, 2000)?;
    if degree > embedding_n_max {
        return Err(err(format!("embedding.degree = {degree} exceeds embedding.n_max = {embedding_n_max}")));
    }
    let parseval_polynomials = r.int("embedding.parseval_polynomials", 50, 0, 100_000)?;
    let parseval_degree = r.int("embedding.parseval_degree", 64, 0, 4096)?;
    let parseval_radii = r.list("embedding.parseval_radii", "0.1, 0.5, 0.9, 0.99", |s| {
        s.parse::<f64>().ok().filter(|v| *v > 0.0 && *v < 1.0)
    })?;

    let pipeline_n_list = r.list("pipeline.n_list", "2, 4, 8, 16, 32", n_item)?;
    let k = r.int("pipeline.k", innergrowth::model::DEFAULT_PIPELINE_K, 1, 65_536)?;
    let kernel_points = r.list("pipeline.kernel_points", "0", |s| parse_complex(s).filter(|z| z.norm() < 1.0))?;
    let fraction = r.float("pipeline.fraction", 0.9, "(0, 1]", |v| v > 0.0 && v <= 1.0)?;
    let norm_constant = r.float("pipeline.norm_constant", 0.5, "(0, ∞)", |v| v > 0.0)?;

    if kind == Kind::Cyclic && cyclic_n_list.is_empty() {
        return Err(err("cyclic.n_list must not be empty"));
    }
    if kind == Kind::Pipeline && (pipeline_n_list.is_empty() || kernel_points.is_empty()) {
        return Err(err("pipeline.n_list and pipeline.kernel_points must not be empty"));
    }

    Ok(ExperimentConfig {
        kind,
        name,
        seed,
        measure,
        weight,
        lambda,
        radii,
        angles,
        cyclic_n_list,
        cyclic_points,
        cyclic_tolerance,
        n_check,
        unit_levels,
        omega,
        embedding_levels,
        embedding_n_max,
        polynomials,
        degree,
        parseval_polynomials,
        parseval_degree,
        parseval_radii,
        pipeline_n_list,
        k,
        kernel_points,
        fraction,
        norm_constant,
        echo: r.echo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = parse("kind = envelope\n").unwrap();
        assert_eq!(cfg.kind, Kind::Envelope);
        assert_eq!(cfg.angles, 8192);
        assert_eq!(cfg.radii, 64);
        assert_eq!(cfg.measure.total_mass(), 1.0);
        assert_eq!(cfg.echo.len(), KEYS.len());
    }

    #[test]
    fn sections_and_comments() {
        let text = "# experiment\nkind = pipeline\nseed = 7\n\n[pipeline]\nk = 512\nkernel_points = 0, 0.3+0.2i\n; note\n[grid]\nradii = 8\n";
        let cfg = parse(text).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.k, 512);
        assert_eq!(cfg.kernel_points, vec![Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.2)]);
        assert_eq!(cfg.radii, 8);
        assert_eq!(cfg.echo["pipeline.k"], "512");
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(matches!(parse("kind = envelope\nbogus = 1\n"), Err(CliError::Config(_))));
        assert!(matches!(parse("kind = envelope\n[grid]\nradius = 3\n"), Err(CliError::Config(_))));
        assert!(matches!(parse("kind = envelope\n[nope]\nx = 1\n"), Err(CliError::Config(_))));
        assert!(matches!(parse("kind = envelope\n[grid]\nradii = 3\nradii = 4\n"), Err(CliError::Config(_))));
        assert!(matches!(parse("[grid]\nradii = 3\n"), Err(CliError::Config(_))));
        assert!(matches!(parse("kind = nonsense\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn rejects_out_of_range_values() {
        for bad in [
            "[grid]\nradii = 0",
            "[grid]\nangles = 4",
            "[weight]\nm = -1",
            "[weight]\nfamily = other",
            "[embedding]\np = 1.5",
            "[embedding]\nomega = log-inverse\np = 0.9",
            "[pipeline]\nfraction = 0",
            "[pipeline]\nkernel_points = 1.0",
            "[cyclic]\nn_list = 1, 2",
            "[measure]\natoms = 0:-1",
            "[lambda]\nn_max = 40\n[weights]\nn_check = 39",
            "seed = -3",
        ] {
            let text = format!("kind = cyclic\n{bad}\n");
            assert!(parse(&text).is_err(), "{bad}");
        }
    }

    #[test]
    fn every_key_round_trips_through_echo() {
        let mut text = String::from("kind = weights\n");
        let mut last = "";
        let values: BTreeMap<&str, &str> = [
            ("name", "run-1"),
            ("seed", "3"),
            ("measure.atoms", "0:0.5, 1:0.25"),
            ("measure.cantor", "2:0.5:4:0.1"),
            ("weight.family", "power-log"),
            ("weight.m", "2"),
            ("weight.a", "0.5"),
            ("lambda.family", "logarithmic"),
            ("lambda.a", "2"),
            ("lambda.n_max", "100"),
            ("lambda.levels", "20"),
            ("grid.radii", "10"),
            ("grid.angles", "256"),
            ("cyclic.n_list", "2, 3"),
            ("cyclic.points", "0.1i"),
            ("cyclic.tolerance", "0.5"),
            ("weights.n_check", "10"),
            ("weights.unit_levels", "12"),
            ("embedding.omega", "log-inverse"),
            ("embedding.p", "0.25"),
            ("embedding.levels", "4"),
            ("embedding.n_max", "60"),
            ("embedding.polynomials", "3"),
            ("embedding.degree", "10"),
            ("embedding.parseval_polynomials", "2"),
            ("embedding.parseval_degree", "8"),
            ("embedding.parseval_radii", "0.5"),
            ("pipeline.n_list", "2"),
            ("pipeline.k", "64"),
            ("pipeline.kernel_points", "0.1-0.2i"),
            ("pipeline.fraction", "0.5"),
            ("pipeline.norm_constant", "1"),
        ]
        .into_iter()
        .collect();
        assert_eq!(values.len() + 1, KEYS.len());
        for (section, key) in KEYS.iter().filter(|(s, k)| !(s.is_empty() && *k == "kind")) {
            if *section != last && !section.is_empty() {
                text.push_str(&format!("[{section}]\n"));
                last = section;
            }
            text.push_str(&format!("{key} = {}\n", values[full_key(section, key).as_str()]));
        }
        let cfg = parse(&text).unwrap();
        for (k, v) in values {
            assert_eq!(cfg.echo[k], v, "{k}");
        }
        assert_eq!(cfg.name, "run-1");
        assert_eq!(cfg.lambda.sequence, LambdaSequence::Logarithmic);
        assert_eq!(cfg.cyclic_points, vec![Complex64::new(0.0, 0.1)]);
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("0.5i"), Some(Complex64::new(0.0, 0.5)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3-2e-1i"), Some(Complex64::new(1e-3, -0.2)));
        assert_eq!(parse_complex("0.25"), Some(Complex64::new(0.25, 0.0)));
        assert_eq!(parse_complex("x"), None);
    }
}
