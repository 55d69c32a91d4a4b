//! Command-line front end for `knotgrp`.
//!
//! [`run`] does all the work and returns the exit code together with the text
//! destined for standard output and standard error, so the binary is a thin
//! wrapper and tests can drive the CLI in-process.

use std::fmt::Write as _;
use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use knotgrp::geometry::{verify_retraction, RetractionParams, RetractionReport};
use knotgrp::tietze::describe_script;
use knotgrp::torus::{torus_alphabet, TorusNormalForm};
use knotgrp::{
    abelianization, auto_simplify, builtin_diagram, builtin_table, hom_count, invariant_profile,
    order_in_free_product, parse_diagram, parse_word, torus_normal_form,
    wirtinger_presentation, words_equal_in_torus_group, AbelianInvariants, Error, FactorOrders,
    Presentation, TorusParams, Word, DEFAULT_MAX_EVALS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Kv,
}

#[derive(Debug, Parser)]
#[command(name = "knotgrp", version, about = "Knot groups: presentations, normal forms, invariants")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// Budget for homomorphism enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EVALS)]
    pub max_evals: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the presentation <a, b | a^m = b^n>.
    Torus {
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Wirtinger presentation of a diagram file or `builtin:NAME`.
    Wirtinger { diagram: String },
    /// Simplify a presentation file and print the Tietze script used.
    Simplify { file: String },
    /// Abelian invariants of a presentation file.
    Abelian { file: String },
    /// Count homomorphisms into a built-in finite group.
    Homcount {
        file: String,
        #[arg(long)]
        target: String,
    },
    /// Abelian invariants and hom counts for a comma-separated target list.
    Profile {
        file: String,
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
    },
    /// Normal form of a word in G(m,n).
    Nf {
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        word: String,
    },
    /// Decide whether two words are equal in G(m,n).
    Eq {
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        u: String,
        v: String,
    },
    /// Order of a word in Z/m * Z/n.
    Fporder {
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        word: String,
    },
    /// Check the explicit sector retraction on a sample grid.
    Retraction {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        grid: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Failure inside a subcommand, already rendered with its context.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn from_error(context: &str, e: impl Into<Error>) -> Self {
        let e = e.into();
        Failure {
            code: if e.is_resource() { EXIT_BUDGET } else { EXIT_INPUT },
            message: format!("{context}: {e}"),
        }
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(e.to_string())
                }
                _ => Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: e.to_string(),
                },
            };
        }
    };
    match execute(&cli) {
        Ok(out) => Outcome::ok(out),
        Err(f) => Outcome::fail(f.code, f.message),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read `{path}`: {e}")))
}

fn load_presentation(path: &str) -> Result<Presentation, Failure> {
    let text = read_file(path)?;
    Presentation::parse(&text).map_err(|e| Failure::from_error(&format!("in `{path}`"), e))
}

fn torus_params(m: i64, n: i64) -> Result<TorusParams, Failure> {
    TorusParams::new(m, n).map_err(|e| Failure::from_error(&format!("torus {m} {n}"), e))
}

fn torus_word(text: &str) -> Result<Word, Failure> {
    parse_word(text, &torus_alphabet()).map_err(|e| Failure::from_error(&format!("word `{text}`"), e))
}

fn presentation_kv(p: &Presentation) -> String {
    let gens: Vec<&str> = p.alphabet().iter().map(|g| g.name.as_str()).collect();
    let mut out = format!("gens\t{}\n", gens.join(" "));
    for r in p.relators() {
        let _ = writeln!(out, "rel\t{}", r.display(p.alphabet()));
    }
    out
}

fn show_presentation(p: &Presentation, format: Format) -> String {
    match format {
        Format::Human => p.to_text(),
        Format::Kv => presentation_kv(p),
    }
}

fn show_abelian(ab: &AbelianInvariants, format: Format) -> String {
    match format {
        Format::Human => format!("abelian: {ab}\n"),
        Format::Kv => {
            let torsion: Vec<String> = ab.torsion_factors.iter().map(|d| d.to_string()).collect();
            format!(
                "abelian\t{ab}\nfree_rank\t{}\ntorsion\t{}\n",
                ab.free_rank,
                torsion.join(",")
            )
        }
    }
}

fn show_normal_form(nf: &TorusNormalForm, format: Format) -> String {
    match format {
        Format::Human => format!("{nf}\n"),
        Format::Kv => {
            let syllables: Vec<String> = nf
                .syllables
                .iter()
                .map(|&(l, e)| format!("{}^{e}", if l == knotgrp::torus::Letter::A { "a" } else { "b" }))
                .collect();
            format!("central\t{}\nsyllables\t{}\n", nf.central, syllables.join(" "))
        }
    }
}

fn show_report(r: &RetractionReport, format: Format) -> String {
    match format {
        Format::Human => r.to_string(),
        Format::Kv => format!(
            "lambda\t{}\ngrid\t{}\nsamples\t{}\nmax_target_distance\t{:e}\nmax_fixed_point_error\t{:e}\n\
             spurious_fixed_points\t{}\nmax_idempotence_error\t{:e}\nmax_continuity_ratio\t{}\n\
             on_target\t{}\nfixed_segments\t{}\nidempotent\t{}\ncontinuity\t{}\npassed\t{}\n",
            r.lambda,
            r.grid,
            r.samples,
            r.max_target_distance,
            r.max_fixed_point_error,
            r.spurious_fixed_points,
            r.max_idempotence_error,
            r.max_continuity_ratio,
            r.on_target(),
            r.fixes_segments(),
            r.idempotent(),
            r.continuous(),
            r.passed()
        ),
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Torus { m, n } => {
            let p = Presentation::torus(*m, *n)
                .map_err(|e| Failure::from_error(&format!("torus {m} {n}"), e))?;
            Ok(show_presentation(&p, format))
        }
        Command::Wirtinger { diagram } => {
            let d = match diagram.strip_prefix("builtin:") {
                Some(name) => builtin_diagram(name),
                None => parse_diagram(&read_file(diagram)?),
            }
            .map_err(|e| Failure::from_error(&format!("diagram `{diagram}`"), e))?;
            Ok(show_presentation(&wirtinger_presentation(&d), format))
        }
        Command::Simplify { file } => {
            let p = load_presentation(file)?;
            let (q, script) = auto_simplify(&p);
            let lines = describe_script(&p, &script)
                .map_err(|e| Failure::from_error(&format!("in `{file}`"), e))?;
            let mut out = show_presentation(&q, format);
            for (i, line) in lines.iter().enumerate() {
                let _ = match format {
                    Format::Human => {
                        if i == 0 {
                            out.push_str("# script\n");
                        }
                        writeln!(out, "# {}. {line}", i + 1)
                    }
                    Format::Kv => writeln!(out, "step\t{line}"),
                };
            }
            Ok(out)
        }
        Command::Abelian { file } => {
            let p = load_presentation(file)?;
            Ok(show_abelian(&abelianization(&p), format))
        }
        Command::Homcount { file, target } => {
            let p = load_presentation(file)?;
            let table = builtin_table(target)
                .map_err(|e| Failure::from_error(&format!("target `{target}`"), e))?;
            let count = hom_count(&p, &table, cli.max_evals)
                .map_err(|e| Failure::from_error(&format!("homcount `{file}` into {target}"), e))?;
            Ok(match format {
                Format::Human => format!("hom {target}: {count}\n"),
                Format::Kv => format!("hom.{target}\t{count}\n"),
            })
        }
        Command::Profile { file, targets } => {
            let p = load_presentation(file)?;
            let names: Vec<&str> = targets.iter().map(String::as_str).collect();
            let profile = invariant_profile(&p, &names, cli.max_evals)
                .map_err(|e| Failure::from_error(&format!("profile `{file}`"), e))?;
            Ok(match format {
                Format::Human => profile.to_human(),
                Format::Kv => profile.to_kv(),
            })
        }
        Command::Nf { m, n, word } => {
            let params = torus_params(*m, *n)?;
            let w = torus_word(word)?;
            let nf = torus_normal_form(&params, &w)
                .map_err(|e| Failure::from_error(&format!("word `{word}`"), e))?;
            Ok(show_normal_form(&nf, format))
        }
        Command::Eq { m, n, u, v } => {
            let params = torus_params(*m, *n)?;
            let (wu, wv) = (torus_word(u)?, torus_word(v)?);
            let equal = words_equal_in_torus_group(&params, &wu, &wv)
                .map_err(|e| Failure::from_error(&format!("words `{u}`, `{v}`"), e))?;
            Ok(match format {
                Format::Human => format!("{}\n", if equal { "equal" } else { "not equal" }),
                Format::Kv => format!("equal\t{equal}\n"),
            })
        }
        Command::Fporder { m, n, word } => {
            let orders = FactorOrders::new(*m, *n)
                .map_err(|e| Failure::from_error(&format!("fporder {m} {n}"), e))?;
            let w = torus_word(word)?;
            let order = order_in_free_product(orders, &w)
                .map_err(|e| Failure::from_error(&format!("word `{word}`"), e))?;
            Ok(match format {
                Format::Human => format!("{order}\n"),
                Format::Kv => format!("order\t{order}\n"),
            })
        }
        Command::Retraction { lambda, grid } => {
            let params = RetractionParams::new(*lambda)
                .map_err(|e| Failure::from_error(&format!("--lambda {lambda}"), e))?;
            let report = verify_retraction(&params, *grid)
                .map_err(|e| Failure::from_error(&format!("--grid {grid}"), e))?;
            Ok(show_report(&report, format))
        }
    }
}
