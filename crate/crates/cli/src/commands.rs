//! Subcommands and their exit codes.

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pforms_core::cartier::{cartier, cartier_rational, class_representative, gamma0, same_class};
use pforms_core::operators::{
    is_p_closed, phi, split_complete_restricted, split_rational_irrational,
};
use pforms_core::poincare::{exactness_oracle, integrate, integrate_rational, OracleConfig};
use pforms_core::{Error, PolyForm, Prime, RatForm, Ring};

use crate::audit::run_audit;
use crate::document::FormDocument;
use crate::parse::{parse_form, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pforms", version, about = "Differential forms over F_p")]
pub struct Cli {
    /// The characteristic.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Number of variables.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Print JSON documents instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Trials per claim for `check`.
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: usize,
    /// Per-variable exponent cap.
    #[arg(long = "max-degree", global = true, default_value_t = pforms_core::poly::DEFAULT_MAX_DEGREE)]
    pub max_degree: u32,
    #[command(subcommand)]
    pub command: Command,
}

/// Form arguments are text, a JSON document (starting with `{`), or `-`
/// for standard input.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exterior derivative.
    D { form: String },
    /// Wedge product.
    Wedge { a: String, b: String },
    /// Whether d(form) = 0.
    Closed { form: String },
    /// Whether the form is p-closed, i.e. exact.
    Pclosed { form: String },
    /// A potential of a p-closed form.
    Integrate { form: String },
    /// Rational and irrational parts of a closed form, one per line.
    SplitRi { form: String },
    /// Completely integrable and restricted parts, one per line.
    SplitCt { form: String },
    /// Apply d_I^(p-1) to every coefficient.
    Phi { form: String },
    /// The Cartier operator on a closed form.
    Cartier { form: String },
    /// The inverse Cartier map on representatives.
    Gamma0 { form: String },
    /// The irrational representative of the class of a closed form.
    Class { form: String },
    /// Whether two closed forms differ by an exact form.
    SameClass { a: String, b: String },
    /// Search for a potential by linear algebra.
    Oracle {
        form: String,
        /// Extra degree allowed in the potential (default p).
        #[arg(long)]
        margin: Option<u32>,
        #[arg(long, default_value_t = 200_000)]
        max_unknowns: usize,
    },
    /// Audit the claims and print a report.
    Check,
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Math(#[from] Error),
    #[error("{0}")]
    Regression(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Parse(_) => EXIT_USAGE,
            Failure::Math(Error::InternalResidual(_)) => EXIT_INTERNAL,
            Failure::Math(_) | Failure::Regression(_) => EXIT_PRECONDITION,
        }
    }
}

struct Context<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Context<'_> {
    fn read(&mut self, arg: &str) -> Result<String, Failure> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        if self.stdin_used {
            return Err(Failure::Usage(
                "standard input can be read only once".into(),
            ));
        }
        self.stdin_used = true;
        let mut text = String::new();
        self.stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        Ok(text)
    }

    /// The ring named by the flags, or by the first JSON document when the
    /// flags are absent.
    fn ring_for(&self, texts: &[&str]) -> Result<Ring, Failure> {
        let doc = texts
            .iter()
            .find(|t| t.trim_start().starts_with('{'))
            .map(|t| FormDocument::from_json(t))
            .transpose()?;
        let p = match (self.cli.p, &doc) {
            (Some(p), _) => p,
            (None, Some(d)) => d.p as u64,
            (None, None) => return Err(Failure::Usage("--p is required".into())),
        };
        let n = match (self.cli.n, &doc) {
            (Some(n), _) => n,
            (None, Some(d)) => d.n,
            (None, None) => return Err(Failure::Usage("--n is required".into())),
        };
        if n == 0 {
            return Err(Failure::Usage("--n must be at least 1".into()));
        }
        let prime = Prime::new(p).map_err(|_| ParseError::PrimeOutOfRange(p))?;
        Ok(Ring::new(prime, n).with_max_degree(self.cli.max_degree))
    }

    fn forms<const K: usize>(&mut self, args: [&str; K]) -> Result<(Ring, [RatForm; K]), Failure> {
        let mut texts = Vec::with_capacity(K);
        for a in args {
            texts.push(self.read(a)?);
        }
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let ring = self.ring_for(&refs)?;
        let mut forms = Vec::with_capacity(K);
        for t in &texts {
            forms.push(read_form(t, ring)?);
        }
        Ok((ring, forms.try_into().expect("K forms")))
    }

    fn form(&mut self, arg: &str) -> Result<RatForm, Failure> {
        let (_, [w]) = self.forms([arg])?;
        Ok(w)
    }
}

pub fn read_form(text: &str, ring: Ring) -> Result<RatForm, ParseError> {
    if text.trim_start().starts_with('{') {
        FormDocument::from_json(text)?.to_form(ring)
    } else {
        parse_form(text, ring)
    }
}

/// A bare `0` parses as a 0-form; let it stand for zero in any degree.
fn align_zero(form: RatForm, degree: usize) -> RatForm {
    if form.is_zero() && form.degree() == 0 {
        RatForm::zero(form.ring(), degree)
    } else {
        form
    }
}

struct Printer {
    json: bool,
}

impl Printer {
    fn form(&self, w: &RatForm) -> String {
        if self.json {
            FormDocument::from_form(w).to_json()
        } else {
            w.to_string()
        }
    }

    fn value(&self, w: &RatForm) -> Value {
        serde_json::to_value(FormDocument::from_form(w)).expect("documents serialize")
    }

    fn pair(&self, names: [&str; 2], a: &RatForm, b: &RatForm) -> String {
        if self.json {
            json!({ names[0]: self.value(a), names[1]: self.value(b) }).to_string()
        } else {
            format!("{a}\n{b}")
        }
    }

    fn boolean(&self, b: bool) -> String {
        b.to_string()
    }
}

fn poly(w: &RatForm) -> Result<PolyForm, Failure> {
    Ok(w.require_polynomial()?)
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut ctx = Context {
        cli,
        stdin,
        stdin_used: false,
    };
    let out = Printer { json: cli.json };
    let text = match &cli.command {
        Command::D { form } => out.form(&ctx.form(form)?.exterior_derivative()),
        Command::Wedge { a, b } => {
            let (_, [a, b]) = ctx.forms([a, b])?;
            out.form(&a.wedge(&b)?)
        }
        Command::Closed { form } => out.boolean(ctx.form(form)?.is_closed()),
        Command::Pclosed { form } => out.boolean(is_p_closed(&ctx.form(form)?)),
        Command::Integrate { form } => {
            let w = ctx.form(form)?;
            let eta = match w.to_polynomial() {
                Some(pw) => integrate(&pw)?.to_rational(),
                None => integrate_rational(&w)?,
            };
            out.form(&eta)
        }
        Command::SplitRi { form } => {
            let s = split_rational_irrational(&ctx.form(form)?)?;
            out.pair(["rational", "irrational"], &s.rational, &s.irrational)
        }
        Command::SplitCt { form } => {
            let s = split_complete_restricted(&poly(&ctx.form(form)?)?)?;
            out.pair(
                ["complete", "restricted"],
                &s.complete.to_rational(),
                &s.restricted.to_rational(),
            )
        }
        Command::Phi { form } => out.form(&phi(&ctx.form(form)?)),
        Command::Cartier { form } => {
            let w = ctx.form(form)?;
            let c = match w.to_polynomial() {
                Some(pw) => cartier(&pw)?.to_rational(),
                None => cartier_rational(&w)?,
            };
            out.form(&c)
        }
        Command::Gamma0 { form } => out.form(&gamma0(&ctx.form(form)?)?),
        Command::Class { form } => {
            let witness = class_representative(&ctx.form(form)?)?;
            if cli.json {
                json!({
                    "representative": out.value(&witness.representative),
                    "exact_difference_check": witness.exact_difference_check,
                })
                .to_string()
            } else {
                out.form(&witness.representative)
            }
        }
        Command::SameClass { a, b } => {
            let (_, [a, b]) = ctx.forms([a, b])?;
            let (da, db) = (a.degree(), b.degree());
            let (a, b) = (align_zero(a, db), align_zero(b, da));
            out.boolean(same_class(&a, &b)?)
        }
        Command::Oracle {
            form,
            margin,
            max_unknowns,
        } => {
            let w = poly(&ctx.form(form)?)?;
            let config = OracleConfig {
                margin: *margin,
                max_unknowns: *max_unknowns,
            };
            match exactness_oracle(&w, &config)? {
                Some(eta) => out.form(&eta.to_rational()),
                None if cli.json => "null".to_string(),
                None => "none".to_string(),
            }
        }
        Command::Check => {
            let report = run_audit(cli.seed, cli.trials);
            let text = if cli.json {
                report.to_json()
            } else {
                report.to_text().trim_end().to_string()
            };
            let regressions = report.regressions();
            if !regressions.is_empty() {
                let ids: Vec<&str> = regressions.iter().map(|c| c.id).collect();
                return Err(Failure::Regression(format!(
                    "{text}\nverified claims failed: {}",
                    ids.join(", ")
                )));
            }
            text
        }
    };
    Ok(text)
}

/// Runs the command line `args` (including the program name).
pub fn run_command<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), rendered)
            } else {
                (rendered, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    match execute(&cli, stdin) {
        Ok(mut stdout) => {
            stdout.push('\n');
            Outcome {
                code: EXIT_OK,
                stdout,
                stderr: String::new(),
            }
        }
        Err(Failure::Regression(report)) => Outcome {
            code: EXIT_PRECONDITION,
            stdout: format!("{report}\n"),
            stderr: "error: a verified claim failed\n".into(),
        },
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
