//! Command-line front end: config merging, subcommands and output rendering.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cg_action::act;
use crate::checks::{run_suite, CheckOutcome, SuiteOptions};
use crate::error::{Error, Result};
use crate::metaplectic::MetaplecticStructure;
use crate::numeric::{random_character, specialize, trial_rng, Su3Values};
use crate::ring::serialize::{ratfunc_latex, ratfunc_to_json};
use crate::ring::{LatticeVector, RatFunc};
use crate::root_datum::{Marker, RelativeRootDatum, WeylElem};
use crate::whittaker::{c_w, n_poly, whittaker_normalized};

pub const WORKERS_ENV: &str = "METAWHIT_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "metawhit", version, about = "Metaplectic Whittaker functions, c-functions and the Chinta-Gunnells action")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Describe,
    Cfun,
    Act,
    Whittaker,
    Npoly,
    Check,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// n, Q, n_alpha, epsilon, a basis of Lambda and the coset group
    Describe(Flags),
    /// c_w for --word (default: longest element)
    Cfun(Flags),
    /// w acting on x^lambda
    Act(Flags),
    /// normalized Whittaker value at pi^lambda
    Whittaker(Flags),
    /// the p-part N(chi, lambda)
    Npoly(Flags),
    /// run the invariant suite
    Check(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Describe(f) => (CommandKind::Describe, f),
            Command::Cfun(f) => (CommandKind::Cfun, f),
            Command::Act(f) => (CommandKind::Act, f),
            Command::Whittaker(f) => (CommandKind::Whittaker, f),
            Command::Npoly(f) => (CommandKind::Npoly, f),
            Command::Check(f) => (CommandKind::Check, f),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Latex,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// JSON config file; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// root system, e.g. A2 or A1xA1
    #[arg(long = "type")]
    pub type_spec: Option<String>,
    #[arg(long)]
    pub n: Option<i64>,
    /// one value (scales the basic form) or one per simple root
    #[arg(long = "Q", value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<i64>>,
    /// e.g. SL2,SU3:2
    #[arg(long, value_delimiter = ',')]
    pub markers: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Option<Vec<i64>>,
    /// e.g. s1,s2 (applied right to left) or e
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// add evaluations at seeded random characters
    #[arg(long)]
    pub numeric: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// sup-norm radius of the lambda boxes swept by `check`
    #[arg(long)]
    pub radius: Option<i64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Everything a run needs. Also the schema of the --config file.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(rename = "type")]
    pub type_spec: Option<String>,
    pub n: Option<i64>,
    #[serde(rename = "Q")]
    pub q: Option<Vec<i64>>,
    pub markers: Option<Vec<Marker>>,
    pub lambda: Option<Vec<i64>>,
    pub word: Option<String>,
    pub format: Option<Format>,
    pub numeric: Option<bool>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub radius: Option<i64>,
    pub output: Option<PathBuf>,
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidField { field: field.into(), reason: reason.into() }
}

impl JobConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| invalid("config", e.to_string()))
    }

    /// Reads --config if given, then lets every explicit flag win.
    pub fn from_flags(f: &Flags) -> Result<Self> {
        let mut c = match &f.config {
            Some(p) => JobConfig::from_file(p)?,
            None => JobConfig::default(),
        };
        if let Some(v) = &f.type_spec {
            c.type_spec = Some(v.clone());
        }
        if f.n.is_some() {
            c.n = f.n;
        }
        if let Some(v) = &f.q {
            c.q = Some(v.clone());
        }
        if let Some(v) = &f.markers {
            c.markers = Some(v.iter().map(|s| Marker::parse(s)).collect::<Result<_>>()?);
        }
        if let Some(v) = &f.lambda {
            c.lambda = Some(v.clone());
        }
        if let Some(v) = &f.word {
            c.word = Some(v.clone());
        }
        if f.format.is_some() {
            c.format = f.format;
        }
        if f.numeric {
            c.numeric = Some(true);
        }
        if f.seed.is_some() {
            c.seed = f.seed;
        }
        if f.trials.is_some() {
            c.trials = f.trials;
        }
        if f.radius.is_some() {
            c.radius = f.radius;
        }
        if let Some(v) = &f.output {
            c.output = Some(v.clone());
        }
        Ok(c)
    }

    pub fn structure(&self) -> Result<MetaplecticStructure> {
        let t = self.type_spec.as_deref().ok_or_else(|| invalid("type", "missing"))?;
        let d = RelativeRootDatum::build(t, self.markers.clone())?;
        let q = self.q.clone().unwrap_or_else(|| vec![1]);
        MetaplecticStructure::new(Arc::new(d), self.n.unwrap_or(1), &q)
    }

    pub fn lambda_vec(&self, rank: usize) -> Result<LatticeVector> {
        let l = self.lambda.clone().ok_or_else(|| invalid("lambda", "missing"))?;
        if l.len() != rank {
            return Err(invalid("lambda", format!("expected {rank} entries, got {}", l.len())));
        }
        Ok(LatticeVector(l))
    }

    /// Parsed --word; `None` when absent.
    pub fn weyl_word(&self, d: &RelativeRootDatum) -> Result<Option<WeylElem>> {
        let Some(w) = &self.word else { return Ok(None) };
        Ok(Some(d.from_word(&parse_word(w)?)?))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

/// "s1,s2" or "1,2" to zero-based indices; "e" or "" is the identity.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let t = t.strip_prefix('s').unwrap_or(t);
            match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(invalid("word", format!("bad letter `{t}`"))),
            }
        })
        .collect()
}

/// Rendered output plus whether a required invariant failed.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub text: String,
    pub invariant_failure: bool,
}

pub fn run(kind: CommandKind, cfg: &JobConfig) -> Result<RunOutput> {
    let m = cfg.structure()?;
    let fmt = cfg.format();
    let mut failure = false;
    let (json, latex) = match kind {
        CommandKind::Describe => describe(&m),
        CommandKind::Cfun => {
            let w = cfg.weyl_word(m.datum())?.unwrap_or_else(|| m.datum().longest().clone());
            let f = c_w(&m, &w)?;
            let mut j = json!({ "word": w.word_label(), "value": ratfunc_to_json(&f) });
            add_numeric(&mut j, cfg, &m, &f)?;
            (j, format!("c_{{{}}} = {}", latex_word(&w), ratfunc_latex(&f)))
        }
        CommandKind::Act => {
            let w = cfg.weyl_word(m.datum())?.ok_or_else(|| invalid("word", "missing"))?;
            let lam = cfg.lambda_vec(m.rank())?;
            let f = act(&m, &w, &RatFunc::x(lam.clone()))?;
            let mut j = json!({ "word": w.word_label(), "lambda": lam, "value": ratfunc_to_json(&f) });
            add_numeric(&mut j, cfg, &m, &f)?;
            (j, format!("{} \\circ x^{{{lam}}} = {}", latex_word(&w), ratfunc_latex(&f)))
        }
        CommandKind::Whittaker => {
            let lam = cfg.lambda_vec(m.rank())?;
            let res = whittaker_normalized(&m, &lam)?;
            let terms: Vec<Value> = res
                .terms
                .iter()
                .map(|t| json!({ "w": t.w.word_label(), "value": ratfunc_to_json(&t.value) }))
                .collect();
            let mut j = json!({ "lambda": lam, "dominant": m.datum().is_dominant(&lam), "value": ratfunc_to_json(&res.value), "terms": terms });
            add_numeric(&mut j, cfg, &m, &res.value)?;
            (j, format!("\\delta^{{-1/2}}W(\\pi^{{{lam}}}) = {}", ratfunc_latex(&res.value)))
        }
        CommandKind::Npoly => {
            let lam = cfg.lambda_vec(m.rank())?;
            let f = n_poly(&m, &lam)?;
            let mut j = json!({ "lambda": lam, "value": ratfunc_to_json(&f) });
            add_numeric(&mut j, cfg, &m, &f)?;
            (j, format!("N(\\chi, {lam}) = {}", ratfunc_latex(&f)))
        }
        CommandKind::Check => {
            let opts = SuiteOptions {
                radius: cfg.radius.unwrap_or(2),
                numeric: cfg.numeric.unwrap_or(false),
                seed: cfg.seed.unwrap_or(0),
                trials: cfg.trials.unwrap_or(100),
            };
            if opts.radius < 0 {
                return Err(invalid("radius", "must be non-negative"));
            }
            let outcomes = run_suite(&m, &opts)?;
            failure = outcomes.iter().any(|o| o.required && !o.passed);
            let latex = check_table(&outcomes);
            (json!({ "options": opts, "checks": outcomes, "passed": !failure }), latex)
        }
    };
    let header = json!({ "type": m.datum().name(), "n": m.n(), "Q": m.q_values(), "markers": m.datum().markers() });
    let text = match fmt {
        Format::Json => {
            let mut j = json!({ "config": header, "command": kind });
            j["result"] = json;
            serde_json::to_string_pretty(&j).expect("serializable") + "\n"
        }
        Format::Latex => latex + "\n",
    };
    Ok(RunOutput { text, invariant_failure: failure })
}

fn latex_word(w: &WeylElem) -> String {
    if w.is_identity() {
        return "e".into();
    }
    w.word.iter().map(|i| format!("s_{{{}}}", i + 1)).collect::<Vec<_>>().join("")
}

fn describe(m: &MetaplecticStructure) -> (Value, String) {
    let d = m.datum();
    let cs = m.cosets();
    let roots: Vec<Value> = d
        .positive_coroots()
        .iter()
        .map(|b| json!({ "coroot": b, "Q": m.q_form(b), "n_alpha": m.n_alpha(b), "eps": m.epsilon(b) }))
        .collect();
    let j = json!({
        "rank": m.rank(),
        "cartan": d.cartan(),
        "B": m.b_matrix(),
        "weyl_order": d.weyl().order(),
        "positive_coroots": roots,
        "lattice_basis": cs.basis,
        "gamma_order": cs.order(),
        "gamma_reps": cs.reps,
    });
    let mut out = vec![format!("n = {},\\quad Q = {:?}", m.n(), m.q_values())];
    for b in d.positive_coroots() {
        out.push(format!("n_{{{}}} = {},\\quad \\epsilon_{{{}}} = {}", combo(b), m.n_alpha(b), combo(b), m.epsilon(b)));
    }
    let basis: Vec<String> = cs.basis.iter().map(combo).collect();
    out.push(format!("\\Lambda = \\mathbb{{Z}}\\langle {} \\rangle", basis.join(", ")));
    out.push(format!("|\\Gamma| = {}", cs.order()));
    (j, out.join("\\\\\n"))
}

/// Σ c_i α_i in LaTeX.
fn combo(v: &LatticeVector) -> String {
    let mut s = String::new();
    for (i, &c) in v.coords().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let coef = match c {
            1 => String::new(),
            -1 => "-".into(),
            _ => c.to_string(),
        };
        if !s.is_empty() && c > 0 {
            s.push('+');
        }
        s.push_str(&format!("{coef}\\alpha_{{{}}}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn check_table(outcomes: &[CheckOutcome]) -> String {
    let mut rows = vec!["\\begin{tabular}{lrrl}".to_string(), "check & cases & max dev & status \\\\ \\hline".into()];
    for o in outcomes {
        let status = match (o.passed, o.required) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "fails (observed)",
        };
        rows.push(format!("{} & {} & {:.3e} & {} \\\\", o.name.replace('_', "\\_"), o.cases, o.max_deviation, status));
    }
    rows.push("\\end{tabular}".into());
    rows.join("\n")
}

/// Values at `trials` seeded random characters (default 1).
fn add_numeric(j: &mut Value, cfg: &JobConfig, m: &MetaplecticStructure, f: &RatFunc) -> Result<()> {
    if !cfg.numeric.unwrap_or(false) {
        return Ok(());
    }
    let seed = cfg.seed.unwrap_or(0);
    let mut samples = Vec::new();
    for k in 0..cfg.trials.unwrap_or(1) {
        let mut rng = trial_rng(seed, k as u64);
        let (spec, v) = loop {
            let spec = random_character(m, &mut rng, Su3Values::Model)?;
            match specialize(f, &spec) {
                Ok(v) => break (spec, v),
                Err(Error::Resample(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        let x: Vec<[f64; 2]> = spec.x_assign.iter().map(|z| [z.re, z.im]).collect();
        samples.push(json!({ "q": spec.q_val, "x": x, "value": [v.re, v.im] }));
    }
    j["numeric"] = Value::Array(samples);
    Ok(())
}

/// Sizes the global rayon pool from the worker env var, if set.
pub fn init_workers() -> Result<()> {
    let Ok(v) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let k: usize = v.trim().parse().ok().filter(|&k| k > 0).ok_or_else(|| invalid(WORKERS_ENV, format!("`{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| invalid(WORKERS_ENV, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        assert_eq!(parse_word("s1,s2").unwrap(), vec![0, 1]);
        assert_eq!(parse_word("2,1").unwrap(), vec![1, 0]);
        assert!(parse_word("e").unwrap().is_empty());
        assert!(parse_word("s0").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("metawhit-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("c.json");
        std::fs::write(&p, r#"{"type":"A2","n":2,"Q":[1,1],"lambda":[1,0]}"#).unwrap();
        let f = Flags { config: Some(p), n: Some(3), ..Default::default() };
        let c = JobConfig::from_flags(&f).unwrap();
        assert_eq!(c.n, Some(3));
        assert_eq!(c.type_spec.as_deref(), Some("A2"));
        assert_eq!(c.lambda, Some(vec![1, 0]));
    }

    #[test]
    fn unknown_config_field_is_named() {
        let dir = std::env::temp_dir().join(format!("metawhit-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("c.json");
        std::fs::write(&p, r#"{"type":"A2","bogus":1}"#).unwrap();
        let err = JobConfig::from_file(&p).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
    }
}
