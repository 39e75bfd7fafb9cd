//! Argument parsing and the subcommands of the `fresco-lab` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fresco_core::fresco::{jordan_holder, kernel_realize, realized_generator};
use fresco_core::module::SubModule;
use fresco_core::ops::ABOperator;
use fresco_core::poles::{predict_pole, predicted_profile, xi_ladder};
use fresco_core::rational::{fmt_q, parse_q};
use fresco_core::{Ambient, ExponentClass, FrescoError, Result};
use serde_json::{json, Value};

use crate::io::{load_module, load_operator};
use crate::registry::reproduce_theme;
use crate::suite::{run_suite_with, ExecMode, SuiteConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "fresco-lab", version, about = "Exact Bernstein data of geometric (a,b)-modules")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Truncation degree of the computation.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Degrees below the truncation a result must stabilize at.
    #[arg(long, global = true)]
    pub guard: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal and characteristic Bernstein polynomials.
    Bernstein { module: PathBuf },
    /// Higher Bernstein polynomials, all levels unless one is given.
    HigherBernstein {
        module: PathBuf,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Ranks and Bernstein polynomials of the semi-simple layers.
    Filtration { module: PathBuf },
    /// Closure under b⁻¹a.
    Saturate {
        module: PathBuf,
        /// Also write the saturation as a module file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Division on the right by a - λb.
    Divide {
        operator: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Solutions of P x = 0 in the expansion space.
    SolveKernel {
        operator: PathBuf,
        /// Exponent classes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<String>,
        #[arg(long, default_value_t = 1)]
        log_bound: usize,
        #[arg(long, default_value_t = 1)]
        value_dim: usize,
    },
    /// A Jordan–Hölder sequence and the Bernstein polynomial it predicts.
    JordanHolder { module: PathBuf },
    /// Predicted pole orders and locations per exponent class.
    PredictPoles {
        module: PathBuf,
        /// Restrict to one class.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Runs the randomized property suite.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
        /// Property names, comma separated.
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
        /// A JSON suite configuration; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Recomputes the worked rank-two theme example.
    ReproduceTheme,
}

/// What a subcommand produced; `passed` is false when a check found a disagreement.
#[derive(Debug)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, passed: true }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => serde_json::to_string_pretty(&self.json).expect("json values serialize"),
            ReportFormat::Text => self.text.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

impl Cli {
    fn module(&self, path: &std::path::Path) -> Result<SubModule> {
        load_module(path, self.trunc, self.guard)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Bernstein { module } => {
            let m = cli.module(module)?;
            let b = m.bernstein()?;
            let rank = m.b_rank()?;
            let json = json!({
                "rank": rank,
                "simple_pole": m.is_simple_pole(),
                "minimal": to_json(&b.minimal.report()),
                "characteristic": to_json(&b.characteristic.report()),
            });
            let text = format!("rank {rank}\nminimal {}\ncharacteristic {}\n", b.minimal, b.characteristic);
            Ok(Outcome::ok(json, text))
        }
        Command::HigherBernstein { module, level } => {
            let m = cli.module(module)?;
            let levels: Vec<(usize, _)> = match level {
                Some(j) => vec![(*j, m.higher_bernstein(*j)?)],
                None => m.higher_bernsteins()?.into_iter().enumerate().map(|(i, p)| (i + 1, p)).collect(),
            };
            let mut text = String::new();
            for (j, p) in &levels {
                let _ = writeln!(text, "B^{j} = {p}");
            }
            let json = json!({
                "nilpotent_order": m.nilpotent_order(),
                "levels": levels.iter().map(|(j, p)| json!({"level": j, "polynomial": to_json(&p.report())})).collect::<Vec<_>>(),
            });
            Ok(Outcome::ok(json, text))
        }
        Command::Filtration { module } => {
            let m = cli.module(module)?;
            let layers = m.semisimple_filtration()?;
            let hb = m.higher_bernsteins()?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (i, (s, p)) in layers.iter().skip(1).zip(&hb).enumerate() {
                let rank = s.b_rank()?;
                let _ = writeln!(text, "S_{}: rank {rank}, B^{} = {p}", i + 1, i + 1);
                rows.push(json!({"level": i + 1, "rank": rank, "bernstein": to_json(&p.report())}));
            }
            Ok(Outcome::ok(json!({"nilpotent_order": m.nilpotent_order(), "layers": rows}), text))
        }
        Command::Saturate { module, output } => {
            let m = cli.module(module)?;
            let s = m.saturate()?;
            let file = s.to_file();
            if let Some(out) = output {
                let body = serde_json::to_string_pretty(&file).expect("module files serialize");
                std::fs::write(out, body).map_err(|e| FrescoError::Parse(format!("{}: {e}", out.display())))?;
            }
            let (rank, codim) = (s.b_rank()?, s.codim(&m)?);
            let json = json!({"rank": rank, "codim": codim, "simple_pole": s.is_simple_pole(), "module": to_json(&file)});
            let mut text = format!("rank {rank}, codimension of the original {codim}\n");
            for x in s.basis() {
                let _ = writeln!(text, "  {x}");
            }
            Ok(Outcome::ok(json, text))
        }
        Command::Divide { operator, lambda } => {
            let (p, _) = load_operator(operator, cli.trunc)?;
            let lambda = parse_q(lambda)?;
            let (quot, rem) = p.divide_linear(&lambda);
            let back = quot.compose(&ABOperator::linear(&lambda, p.trunc_order())).add(&ABOperator::from_series(rem.clone()));
            let round_trip = back.same_as(&p);
            let rem_s: Vec<String> = rem.coeffs().iter().map(fmt_q).collect();
            let json = json!({"quotient": to_json(&quot.to_file()), "remainder": rem_s, "round_trip": round_trip});
            let text = format!("quotient {quot}\nremainder {}\nround trip {round_trip}\n", ABOperator::from_series(rem));
            Ok(Outcome { json, text, passed: round_trip })
        }
        Command::SolveKernel { operator, alpha, log_bound, value_dim } => {
            let (p, _) = load_operator(operator, cli.trunc)?;
            let classes = alpha.iter().map(|a| ExponentClass::new(parse_q(a)?)).collect::<Result<Vec<_>>>()?;
            let amb = Ambient::new(classes, *log_bound, *value_dim);
            let trunc = cli.trunc.unwrap_or(40).min(p.validity());
            let sols = kernel_realize(&p, &amb, trunc)?;
            let gen = realized_generator(&sols).and_then(|g| sols.iter().position(|s| std::ptr::eq(s, g)));
            let mut text = format!("{} solutions to order {trunc}\n", sols.len());
            for (i, s) in sols.iter().enumerate() {
                let mark = if Some(i) == gen { "*" } else { " " };
                let _ = writeln!(text, "{mark} {s}");
            }
            let json = json!({
                "truncation": trunc,
                "solutions": sols.iter().map(|s| to_json(&s.to_file())).collect::<Vec<_>>(),
                "generator": gen,
            });
            Ok(Outcome::ok(json, text))
        }
        Command::JordanHolder { module } => {
            let m = cli.module(module)?;
            let jh = jordan_holder(&m)?;
            let predicted = jh.shifted_bernstein();
            let actual = m.bernstein()?.characteristic;
            let agree = predicted == actual;
            let mut text = String::new();
            for (i, (l, r)) in jh.quotient_exponents.iter().zip(&jh.co_ranks).enumerate() {
                let _ = writeln!(text, "F_{}: quotient E_{}, co-rank {r}", i + 1, fmt_q(l));
            }
            let _ = writeln!(text, "shifted product {predicted}, Bernstein {actual}");
            let json = json!({
                "sequence": to_json(&jh.report()),
                "shifted_product": to_json(&predicted.report()),
                "bernstein": to_json(&actual.report()),
                "agree": agree,
            });
            Ok(Outcome { json, text, passed: agree })
        }
        Command::PredictPoles { module, alpha } => {
            let m = cli.module(module)?;
            let classes = match alpha {
                Some(a) => vec![ExponentClass::new(parse_q(a)?)?],
                None => m.classes(),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            for cls in classes {
                let pred = predict_pole(&m, &cls)?;
                let ladder = xi_ladder(&m, &cls)?;
                let loc = pred.location.as_ref().map(fmt_q);
                let _ = writeln!(text, "class {cls}: order {} at {}", pred.order, loc.as_deref().unwrap_or("none"));
                for step in &ladder {
                    let _ = writeln!(text, "  xi_{} = {} (levels {:?})", step.s, fmt_q(&step.xi), step.levels);
                }
                rows.push(json!({"alpha": fmt_q(cls.alpha()), "order": pred.order, "location": loc, "ladder": to_json(&ladder)}));
            }
            let profile = predicted_profile(&m)?.report();
            Ok(Outcome::ok(json!({"classes": rows, "profile": to_json(&profile)}), text))
        }
        Command::Check { seed, cases, props, config, sequential } => {
            let mut cfg: SuiteConfig = match config {
                Some(p) => crate::io::read_json(p)?,
                None => SuiteConfig::default(),
            };
            cfg.seed = *seed;
            if let Some(c) = cases {
                cfg.cases = *c;
            }
            if !props.is_empty() {
                cfg.properties = props.clone();
            }
            if let Some(t) = cli.trunc {
                cfg.cert_degree = t;
            }
            cfg.guard = cli.guard.unwrap_or(cfg.guard);
            let mode = if *sequential { ExecMode::Sequential } else { ExecMode::Parallel };
            let rep = run_suite_with(&cfg, mode)?;
            Ok(Outcome { json: to_json(&rep), text: rep.render_text(), passed: rep.all_passed() })
        }
        Command::ReproduceTheme => {
            let cert = cli.trunc.unwrap_or(40);
            match reproduce_theme(cert) {
                Ok(rep) => Ok(Outcome::ok(to_json(&rep), rep.render_text())),
                Err(FrescoError::RegistryMismatch(diff)) => Ok(Outcome {
                    json: json!({"mismatch": diff}),
                    text: format!("registry mismatch\n{diff}"),
                    passed: false,
                }),
                Err(e) => Err(e),
            }
        }
    }
}

