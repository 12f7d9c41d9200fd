//! Command-line front end. The binary only forwards to [`run`].
//!
//! Exit status: 0 on success, 1 on domain errors (a JSON object
//! `{"error": kind, "message": text}` goes to stderr), 2 on usage errors.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::automaton::{compile, compile_with_pi};
use crate::braket::{omega_model_eval, relative_completeness_check};
use crate::bridge::{cfg_to_expr, expr_to_cfg};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};
use crate::gen;
use crate::grammar::Grammar;
use crate::normal::{first_normal_form, nf_combine, project_centralizer, reduced_normal_form, CombineOp, NormalForm};
use crate::tensor::{
    centralizer_check_bounded, check_wrapped, enumerate_nf_image, equal_bounded, image_contains, stack_recognize,
    ImageOptions, RecognizerConfig,
};
use crate::word::{nf_reduce, parse_word, Nf, Syntax};

#[derive(Parser, Debug)]
#[command(name = "tensor-kleene", version, about = "Bracket expressions, normal forms and context-free conversions")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Number of bracket pairs p0..p(m-1), q0..q(m-1).
    #[arg(long, global = true, default_value_t = 2)]
    pub m: u8,
    /// Source-length bound for enumeration and bounded checks.
    #[arg(long, global = true, default_value_t = 10)]
    pub bound: u32,
    /// Index range {0..T-1} for the bra-ket model.
    #[arg(long, global = true, default_value_t = 24)]
    pub trunc: usize,
    /// Emit JSON instead of plain lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Read `b p d q` as `p0 p1 q0 q1` (m = 2 only).
    #[arg(long, global = true)]
    pub aliases: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form of each word (arguments, or one per stdin line).
    Nf { words: Vec<String> },
    /// Normal forms reachable from sources of weight at most --bound.
    Enum { expr: String },
    /// Bounded equality of two expressions.
    Eq { left: String, right: String },
    /// Is a letter word in the language? Uses the stack recognizer for `p0 r q0`,
    /// bounded enumeration otherwise.
    Member { expr: String, word: String },
    /// Bounded test that every reachable normal form is bracket-free.
    Centralizer { expr: String },
    /// Split automaton of an expression.
    Compile { expr: String },
    /// First normal form `S (NV)* N (UN)* F`.
    Nf1 { expr: String },
    /// Reduced normal form `S N F` for centralizer elements.
    NfReduced { expr: String },
    /// Second normal form `S N (WN)* F`; `q0 p0` in the input becomes a π edge.
    Nf2 { expr: String },
    /// Combine first normal forms of one or two expressions.
    Combine {
        #[arg(long)]
        op: String,
        left: String,
        right: Option<String>,
    },
    /// Relation denoted by a bracket expression in the index model.
    Braket { expr: String },
    /// Relative completeness check of `φ(x)`; without `φ`, runs random samples.
    Relcomp {
        phi: Option<String>,
        #[arg(long, default_value = "x")]
        slot: char,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Expression `p0 r q0` for a grammar file (`-` for stdin).
    Cfg2expr { grammar: String },
    /// Grammar for an expression `p0 r q0`.
    Expr2cfg { expr: String },
    /// CYK membership of a word in a grammar file.
    Cyk { grammar: String, word: String },
    /// Words of a grammar file up to length --bound.
    Cfgenum { grammar: String },
}

/// Parse arguments and run. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.kind(), "message": e.to_string() }));
            1
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
    }
}

fn emit_lines(out: &mut dyn Write, json: bool, lines: &[String]) -> Result<()> {
    if json {
        writeln!(out, "{}", Value::from(lines.to_vec())).map_err(io)
    } else {
        lines.iter().try_for_each(|l| writeln!(out, "{l}")).map_err(io)
    }
}

fn emit_bool(out: &mut dyn Write, json: bool, key: &str, b: bool) -> Result<()> {
    if json {
        writeln!(out, "{}", json!({ key: b })).map_err(io)
    } else {
        writeln!(out, "{b}").map_err(io)
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable")).map_err(io)
}

fn spaced(w: &str) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.chars().map(String::from).collect::<Vec<_>>().join(" ")
    }
}

fn first_nf(e: &Expr) -> Result<NormalForm> {
    first_normal_form(&compile(e))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let g = &cli.global;
    let syn = Syntax { m: g.m, aliases: g.aliases };
    let expr = |s: &str| parse_expr(s, syn);
    match &cli.command {
        Command::Nf { words } => {
            let inputs: Vec<String> = if words.is_empty() {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(io)?;
                s.lines().filter(|l| !l.trim().is_empty()).map(String::from).collect()
            } else {
                words.clone()
            };
            let lines = inputs
                .iter()
                .map(|w| Ok(nf_reduce(&parse_word(w, syn)?).to_string()))
                .collect::<Result<Vec<_>>>()?;
            emit_lines(out, g.json, &lines)
        }
        Command::Enum { expr: e } => emit_lines(out, g.json, &enumerate_nf_image(&expr(e)?, g.bound)?.sorted_lines()),
        Command::Eq { left, right } => {
            let v = equal_bounded(&expr(left)?, &expr(right)?, g.bound)?;
            if g.json {
                emit_json(out, &json!({ "equal": v.is_equal(), "verdict": v.to_string() }))
            } else {
                writeln!(out, "{v}").map_err(io)
            }
        }
        Command::Member { expr: e, word } => {
            let e = expr(e)?;
            let w: String = word.chars().filter(|c| !c.is_whitespace()).collect();
            let w = if w == "1" { String::new() } else { w };
            let b = if check_wrapped(&e).is_ok() {
                stack_recognize(&e, &w, RecognizerConfig::default())?
            } else {
                image_contains(&e, &Nf::from_letters(&w), g.bound, &ImageOptions::new(g.bound))?
            };
            emit_bool(out, g.json, "member", b)
        }
        Command::Centralizer { expr: e } => emit_bool(out, g.json, "centralizer", centralizer_check_bounded(&expr(e)?, g.bound)?),
        Command::Compile { expr: e } => emit_json(out, &compile(&expr(e)?).to_json()),
        Command::Nf1 { expr: e } => emit_json(out, &first_nf(&expr(e)?)?.to_json()),
        Command::NfReduced { expr: e } => emit_json(out, &reduced_normal_form(&compile(&expr(e)?), g.bound)?.to_json()),
        Command::Nf2 { expr: e } => emit_json(out, &project_centralizer(&compile_with_pi(&expr(e)?))?.to_json()),
        Command::Combine { op, left, right } => {
            let op: CombineOp = op.parse()?;
            let l = first_nf(&expr(left)?)?;
            let r = right.as_deref().map(|s| first_nf(&expr(s)?)).transpose()?;
            emit_json(out, &nf_combine(op, &l, r.as_ref())?.to_json())
        }
        Command::Braket { expr: e } => {
            let r = omega_model_eval(&expr(e)?, g.m, g.trunc)?;
            if g.json {
                let pairs: Vec<Value> = r.pairs.iter().map(|&(a, b)| json!([a, b])).collect();
                emit_json(out, &Value::from(pairs))
            } else {
                write!(out, "{r}").map_err(io)
            }
        }
        Command::Relcomp { phi, slot, samples } => {
            let phis: Vec<Expr> = match phi {
                Some(p) => vec![expr(p)?],
                None => {
                    let mut rng = gen::rng(g.seed);
                    (0..*samples).map(|_| gen::slot_expr(&mut rng, 6)).collect()
                }
            };
            let mut rows = Vec::new();
            for p in &phis {
                let v = relative_completeness_check(p, *slot, g.m, g.bound)?;
                rows.push((p.to_string(), v));
            }
            if g.json {
                let items: Vec<Value> = rows
                    .iter()
                    .map(|(p, v)| json!({ "phi": p, "verdict": v.verdict.to_string(), "centralizer": v.centralizer, "holds": v.holds() }))
                    .collect();
                emit_json(out, &Value::from(items))
            } else {
                for (p, v) in &rows {
                    writeln!(out, "{}\tcentralizer={}\t{}", v.verdict, v.centralizer, p).map_err(io)?;
                }
                Ok(())
            }
        }
        Command::Cfg2expr { grammar } => {
            let e = cfg_to_expr(&Grammar::parse(&read_source(grammar)?)?)?;
            writeln!(out, "{e}").map_err(io)
        }
        Command::Expr2cfg { expr: e } => write!(out, "{}", expr_to_cfg(&expr(e)?)?).map_err(io),
        Command::Cyk { grammar, word } => {
            let gr = Grammar::parse(&read_source(grammar)?)?;
            let w: String = word.chars().filter(|c| !c.is_whitespace()).collect();
            let w = if w == "1" { String::new() } else { w };
            emit_bool(out, g.json, "member", gr.cyk(&w))
        }
        Command::Cfgenum { grammar } => {
            let gr = Grammar::parse(&read_source(grammar)?)?;
            let mut lines: Vec<String> = gr.enumerate(g.bound as usize)?.iter().map(|w| spaced(w)).collect();
            lines.sort();
            emit_lines(out, g.json, &lines)
        }
    }
}
