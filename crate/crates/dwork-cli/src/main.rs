use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use dwork::chars::{self, CharClass};
use dwork::counting::{self, DworkInstance};
use dwork::group::{GroupElement, Perm};
use dwork::zeta::{self, ZetaMode};
use dwork::{reptheory, suite, Error, Parallelism};

const COST_CAP_ENV: &str = "DWORK_COST_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "dwork",
    version,
    about = "Zeta factors of Dwork hypersurfaces over finite fields"
)]
struct Cli {
    /// TOML file with run settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (1 runs sequentially).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cap on elementary operations per enumeration.
    #[arg(long, global = true)]
    cost_cap: Option<u64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predicted factorization table.
    Predict(Instance),
    /// Representation-theoretic self-checks.
    VerifyRep(Instance),
    /// Point counts and twisted fixed-point counts.
    Count(Instance),
    /// Extract and certify zeta factors.
    Zeta(Instance),
    /// Run a named check suite.
    Check(Instance),
}

#[derive(Args, Debug, Default)]
struct Instance {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<i64>,
    /// Extension degree `R` or inclusive range `A..B`.
    #[arg(long)]
    r: Option<String>,
    /// Twist exponents `t1,...,tn`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    twist: Option<Vec<i64>>,
    /// Permutation in 1-based cycle notation, e.g. `1 2,3 4`.
    #[arg(long)]
    sigma: Option<String>,
    /// Character class `a1,...,an`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    orbit: Option<Vec<i64>>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    suite: Option<String>,
    /// Restrict `check` to these criteria.
    #[arg(long, value_delimiter = ',')]
    criterion: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Predict,
    Extract,
    Check,
}

impl From<ModeArg> for ZetaMode {
    fn from(m: ModeArg) -> ZetaMode {
        match m {
            ModeArg::Predict => ZetaMode::Predict,
            ModeArg::Extract => ZetaMode::Extract,
            ModeArg::Check => ZetaMode::Check,
        }
    }
}

/// Resolved settings, echoed into every output.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RunConfig {
    command: Option<String>,
    n: Option<u32>,
    q: Option<u32>,
    psi: Option<i64>,
    r: Option<String>,
    twist: Option<Vec<i64>>,
    sigma: Option<String>,
    orbit: Option<Vec<i64>>,
    mode: Option<ModeArg>,
    format: Option<Format>,
    threads: Option<usize>,
    cost_cap: Option<u64>,
    output: Option<PathBuf>,
    suite: Option<String>,
    criterion: Option<Vec<u32>>,
}

fn overlay<T>(flag: Option<T>, file: &mut Option<T>) {
    if flag.is_some() {
        *file = flag;
    }
}

impl RunConfig {
    fn resolve(cli: Cli) -> Result<RunConfig, Error> {
        let mut cfg = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
                })?;
                toml::from_str::<RunConfig>(&text)
                    .map_err(|e| Error::InvalidInput(format!("config: {e}")))?
            }
            None => RunConfig::default(),
        };
        if let Ok(v) = std::env::var(COST_CAP_ENV) {
            let cap = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{COST_CAP_ENV} must be an integer")))?;
            cfg.cost_cap = Some(cap);
        }
        overlay(cli.threads, &mut cfg.threads);
        overlay(cli.format, &mut cfg.format);
        overlay(cli.output, &mut cfg.output);
        overlay(cli.cost_cap, &mut cfg.cost_cap);
        if let Some(cmd) = cli.command {
            let (name, inst) = match cmd {
                Command::Predict(i) => ("predict", i),
                Command::VerifyRep(i) => ("verify-rep", i),
                Command::Count(i) => ("count", i),
                Command::Zeta(i) => ("zeta", i),
                Command::Check(i) => ("check", i),
            };
            cfg.command = Some(name.to_string());
            overlay(inst.n, &mut cfg.n);
            overlay(inst.q, &mut cfg.q);
            overlay(inst.psi, &mut cfg.psi);
            overlay(inst.r, &mut cfg.r);
            overlay(inst.twist, &mut cfg.twist);
            overlay(inst.sigma, &mut cfg.sigma);
            overlay(inst.orbit, &mut cfg.orbit);
            overlay(inst.mode, &mut cfg.mode);
            overlay(inst.suite, &mut cfg.suite);
            overlay(inst.criterion, &mut cfg.criterion);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Error> {
        let cmd = self
            .command
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("no command given".into()))?;
        let need = |v: Option<u32>, name: &str| {
            v.map(|_| ())
                .ok_or_else(|| Error::InvalidInput(format!("--{name} is required")))
        };
        match cmd {
            "predict" | "verify-rep" => need(self.n, "n")?,
            "count" | "zeta" => {
                need(self.n, "n")?;
                need(self.q, "q")?;
                self.psi
                    .ok_or_else(|| Error::InvalidInput("--psi is required".into()))?;
            }
            "check" => {
                if self.suite.as_deref().unwrap_or("acceptance") != "acceptance" {
                    return Err(Error::InvalidInput("the only suite is `acceptance`".into()));
                }
            }
            other => return Err(Error::InvalidInput(format!("unknown command {other}"))),
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidInput("--threads must be positive".into()));
        }
        if self.cost_cap == Some(0) {
            return Err(Error::InvalidInput("cost cap must be positive".into()));
        }
        self.r_range()?;
        Ok(())
    }

    fn r_range(&self) -> Result<Vec<u32>, Error> {
        let bad = || Error::InvalidInput(format!("bad r {:?}; use R or A..B", self.r));
        let Some(text) = self.r.as_deref() else {
            return Ok(vec![1]);
        };
        let (lo, hi) = match text.split_once("..") {
            Some((a, b)) => (
                a.trim().parse().map_err(|_| bad())?,
                b.trim_start_matches('=')
                    .trim()
                    .parse()
                    .map_err(|_| bad())?,
            ),
            None => {
                let r = text.trim().parse().map_err(|_| bad())?;
                (r, r)
            }
        };
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    fn parallelism(&self) -> Parallelism {
        if self.threads == Some(1) {
            Parallelism::Sequential
        } else {
            Parallelism::Parallel
        }
    }

    fn instance(&self) -> Result<DworkInstance, Error> {
        DworkInstance::new(
            self.n.unwrap_or(0),
            self.q.unwrap_or(0),
            self.psi.unwrap_or(0),
        )
    }

    fn orbit(&self) -> Result<Option<CharClass>, Error> {
        self.orbit
            .as_ref()
            .map(|v| CharClass::new(self.n.unwrap_or(0), v))
            .transpose()
    }
}

/// A finished run: rendered text and whether every check passed.
struct Outcome {
    json: serde_json::Value,
    csv: String,
    md: String,
    passed: bool,
}

#[derive(Serialize)]
struct CountRow {
    r: u32,
    count: u64,
}

fn count_rows(cfg: &RunConfig) -> Result<Outcome, Error> {
    let inst = cfg.instance()?;
    let n = inst.n();
    let mode = cfg.parallelism();
    let element = match (&cfg.twist, &cfg.sigma) {
        (None, None) => None,
        (t, s) => {
            let sigma = match s {
                Some(text) => Perm::from_cycles(n as usize, text)?,
                None => Perm::identity(n as usize),
            };
            let twist = t.clone().unwrap_or_else(|| vec![0; n as usize]);
            Some(GroupElement::new(n, &twist, sigma)?)
        }
    };
    let mut rows = Vec::new();
    for r in cfg.r_range()? {
        let count = match &element {
            None => counting::count_points(&inst, r, mode)?,
            Some(g) if g.in_a() => counting::fixed_count_a(&inst, g.twist(), r, mode)?,
            Some(g) => counting::fixed_count_general(&inst, g, r, mode)?,
        };
        rows.push(CountRow { r, count });
    }
    let element_text = element.as_ref().map(|g| g.to_string());
    let mut csv = String::from("r,count\n");
    let mut md = String::from("| r | count |\n|---|-------|\n");
    for row in &rows {
        csv.push_str(&format!("{},{}\n", row.r, row.count));
        md.push_str(&format!("| {} | {} |\n", row.r, row.count));
    }
    Ok(Outcome {
        json: serde_json::json!({ "instance": inst.params(), "element": element_text, "counts": rows }),
        csv,
        md,
        passed: true,
    })
}

fn verify_rep(cfg: &RunConfig) -> Result<Outcome, Error> {
    let orbit = cfg.orbit()?;
    let checks = reptheory::verify_rep(cfg.n.unwrap_or(0), orbit.as_ref())?;
    let mut csv = String::from("check,passed,witnesses\n");
    let rows: Vec<[String; 3]> = checks
        .iter()
        .map(|c| {
            csv.push_str(&format!(
                "{},{},\"{}\"\n",
                c.name,
                c.passed,
                c.witnesses.join("; ").replace('"', "'")
            ));
            [
                c.name.clone(),
                if c.passed {
                    "pass".into()
                } else {
                    "FAIL".into()
                },
                c.witnesses.join("; "),
            ]
        })
        .collect();
    Ok(Outcome {
        json: serde_json::to_value(&checks).expect("checks serialize"),
        csv,
        md: chars::markdown_table(&["check", "result", "witnesses"], &rows),
        passed: checks.iter().all(|c| c.passed),
    })
}

fn run_check(cfg: &RunConfig) -> Result<Outcome, Error> {
    let mode = cfg.parallelism();
    let ids: Vec<u32> = cfg
        .criterion
        .clone()
        .unwrap_or_else(|| (1..=suite::criterion_count()).collect());
    let mut outcomes = Vec::new();
    for id in ids {
        outcomes.push(
            suite::run_criterion(id, mode)
                .ok_or_else(|| Error::InvalidInput(format!("no criterion {id}")))?,
        );
    }
    let mut csv = String::from("criterion,name,passed,detail\n");
    let mut md = String::new();
    for o in &outcomes {
        csv.push_str(&format!(
            "{},\"{}\",{},\"{}\"\n",
            o.id,
            o.name,
            o.passed,
            o.detail.replace('"', "'")
        ));
        md.push_str(&o.line());
        md.push('\n');
    }
    Ok(Outcome {
        json: serde_json::to_value(&outcomes).expect("outcomes serialize"),
        csv,
        md,
        passed: outcomes.iter().all(|o| o.passed),
    })
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome, Error> {
    match cfg.command.as_deref() {
        Some("predict") => {
            let report = chars::predict_report(cfg.n.unwrap_or(0))?;
            Ok(Outcome {
                json: serde_json::to_value(&report).expect("report serializes"),
                csv: report.to_csv(),
                md: report.to_markdown(),
                passed: report.total_dimension == report.expected_dimension,
            })
        }
        Some("verify-rep") => verify_rep(cfg),
        Some("count") => count_rows(cfg),
        Some("zeta") => {
            let inst = cfg.instance()?;
            let orbit = cfg.orbit()?;
            let mode = cfg.mode.map(ZetaMode::from).unwrap_or(ZetaMode::Extract);
            let report = zeta::zeta_report(&inst, mode, orbit.as_ref(), cfg.parallelism())?;
            Ok(Outcome {
                json: serde_json::to_value(&report).expect("report serializes"),
                csv: report.to_csv(),
                md: report.to_markdown(),
                passed: report.passed(),
            })
        }
        Some("check") => run_check(cfg),
        _ => Err(Error::InvalidInput("no command given".into())),
    }
}

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::CheckFailed(_) => ("check_failed", 2),
        Error::CostCap { .. } => ("cost_cap", 3),
        Error::InvalidInput(_) => ("invalid_input", 4),
    }
}

fn emit(cfg: Option<&RunConfig>, text: String) -> Result<(), Error> {
    match cfg.and_then(|c| c.output.as_ref()) {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(cfg: &RunConfig, out: &Outcome) -> String {
    let echo = serde_json::to_string(cfg).expect("config serializes");
    match cfg.format() {
        Format::Json => {
            let body =
                serde_json::json!({ "config": cfg, "result": out.json, "passed": out.passed });
            serde_json::to_string_pretty(&body).expect("json") + "\n"
        }
        Format::Csv => format!("# config: {echo}\n{}", out.csv),
        Format::Md => format!("<!-- config: {echo} -->\n{}", out.md),
    }
}

fn fail(cfg: Option<&RunConfig>, e: &Error) -> ExitCode {
    let (kind, code) = error_kind(e);
    let body =
        serde_json::json!({ "config": cfg, "error": { "kind": kind, "message": e.to_string() } });
    let text = serde_json::to_string_pretty(&body).expect("json") + "\n";
    if emit(cfg, text.clone()).is_err() {
        eprint!("{text}");
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(4);
        }
    };
    let cfg = match RunConfig::resolve(cli) {
        Ok(c) => c,
        Err(e) => return fail(None, &e),
    };
    if let Some(cap) = cfg.cost_cap {
        dwork::limits::set_op_cap(cap);
    }
    if let Some(t) = cfg.threads {
        if let Err(e) = dwork::par::configure_threads(t) {
            return fail(Some(&cfg), &Error::InvalidInput(e));
        }
    }
    match dispatch(&cfg) {
        Ok(out) => {
            let text = render(&cfg, &out);
            if let Err(e) = emit(Some(&cfg), text) {
                return fail(None, &e);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => fail(Some(&cfg), &e),
    }
}
