//! Command-line front end.
//!
//! Verdicts are reported through the exit status: 0 when the judgement holds
//! or the certificate is accepted, 1 when it does not, 2 for usage and input
//! errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::equiv::{EquivSchemata, MatchMode, Prover, DEFAULT_MAX_PAIRS};
use crate::lts::{bisimilar, explore, DEFAULT_MAX_STATES};
use crate::proofcert::{
    check_circular, check_fragment, check_wellfounded, deserialize, parse_hypotheses, render_cert,
    serialize, InstanceCheck, ProofCert,
};
use crate::ruleset::{
    extract_circular_proof, extract_wf_proof, gfp, lfp, parse_rulesystem, Judgement, RuleSystem,
};
use crate::syntax::{parse, render, ProcessExpr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "coind",
    version,
    about = "Inductive and coinductive proofs over rule systems and processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a process expression and print its syntax tree and free variables.
    Parse { expr: String },
    /// Search for a circular proof of P == Q.
    Prove {
        p: String,
        q: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Relaxed)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_MAX_PAIRS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_pairs: u64,
        /// Write the certificate to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check a certificate file.
    CheckCert {
        file: PathBuf,
        /// Check as a proof fragment over the hypotheses listed in this file.
        #[arg(long)]
        fragment: Option<PathBuf>,
        /// Validate rule instances against this rule file instead of the process rules.
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Relaxed)]
        mode: ModeArg,
    },
    /// Decide strong bisimilarity of P and Q on their transition system.
    Bisim {
        p: String,
        q: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_states: u64,
    },
    /// Compute the inductively or coinductively valid judgements of a rule file.
    Fixpoint {
        file: PathBuf,
        #[arg(long, value_enum)]
        semantics: Semantics,
        /// Extract a proof of this judgement.
        #[arg(long)]
        prove: Option<String>,
        /// Write the extracted proof to this file.
        #[arg(long, requires = "prove")]
        emit: Option<PathBuf>,
    },
    /// Pretty-print a certificate file.
    RenderCert { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Literal,
    Relaxed,
}

impl From<ModeArg> for MatchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Literal => MatchMode::Literal,
            ModeArg::Relaxed => MatchMode::Relaxed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    Lfp,
    Gfp,
}

/// Runs one command line (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return status;
        }
    };
    match execute(cli.command, out) {
        Ok(status) => status,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

type Outcome = Result<i32, String>;

fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Parse { expr } => cmd_parse(&expr, out),
        Command::Prove {
            p,
            q,
            mode,
            max_pairs,
            emit,
        } => cmd_prove(
            &p,
            &q,
            mode.into(),
            max_pairs as usize,
            emit.as_deref(),
            out,
        ),
        Command::CheckCert {
            file,
            fragment,
            rules,
            mode,
        } => cmd_check(
            &file,
            fragment.as_deref(),
            rules.as_deref(),
            mode.into(),
            out,
        ),
        Command::Bisim { p, q, max_states } => cmd_bisim(&p, &q, max_states as usize, out),
        Command::Fixpoint {
            file,
            semantics,
            prove,
            emit,
        } => cmd_fixpoint(&file, semantics, prove.as_deref(), emit.as_deref(), out),
        Command::RenderCert { file } => {
            let cert = read_cert(&file)?;
            say(out, render_cert(&cert).trim_end())?;
            Ok(EXIT_OK)
        }
    }
}

fn say(out: &mut dyn Write, line: impl AsRef<str>) -> Result<(), String> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_cert(path: &Path, cert: &ProofCert) -> Result<(), String> {
    fs::write(path, serialize(cert)).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_cert(path: &Path) -> Result<ProofCert, String> {
    deserialize(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_rules(path: &Path) -> Result<RuleSystem, String> {
    parse_rulesystem(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn process(text: &str) -> Result<ProcessExpr, String> {
    let e = parse(text).map_err(|e| format!("`{text}`: {e}"))?;
    if !e.is_process() {
        let free: Vec<String> = e.free_vars().iter().map(ToString::to_string).collect();
        return Err(format!(
            "`{text}` is not closed (free: {})",
            free.join(", ")
        ));
    }
    Ok(e)
}

fn cmd_parse(text: &str, out: &mut dyn Write) -> Outcome {
    let e = parse(text).map_err(|e| e.to_string())?;
    let free: Vec<String> = e.free_vars().iter().map(ToString::to_string).collect();
    say(out, format!("ast: {}", e.ast_string()))?;
    say(out, format!("canonical: {}", render(&e)))?;
    say(out, format!("free variables: {{{}}}", free.join(", ")))?;
    say(
        out,
        format!("process: {}", if free.is_empty() { "yes" } else { "no" }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_prove(
    p: &str,
    q: &str,
    mode: MatchMode,
    max_pairs: usize,
    emit: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let (p, q) = (process(p)?, process(q)?);
    let found = Prover::new(mode)
        .with_max_pairs(max_pairs)
        .prove(&p, &q)
        .map_err(|e| e.to_string())?;
    let judgement = format!("{} == {}", render(&p), render(&q));
    match found {
        Some(cert) => {
            say(out, format!("proved ({mode} act): {judgement}"))?;
            say(out, render_cert(&cert).trim_end())?;
            if let Some(path) = emit {
                write_cert(path, &cert)?;
                say(out, format!("certificate written to {}", path.display()))?;
            }
            Ok(EXIT_OK)
        }
        None => {
            say(out, format!("not provable ({mode} act): {judgement}"))?;
            Ok(EXIT_FALSE)
        }
    }
}

fn cmd_check(
    file: &Path,
    fragment: Option<&Path>,
    rules: Option<&Path>,
    mode: MatchMode,
    out: &mut dyn Write,
) -> Outcome {
    let cert = read_cert(file)?;
    let checker: Box<dyn InstanceCheck> = match rules {
        Some(path) => Box::new(read_rules(path)?),
        None => Box::new(EquivSchemata::new(mode)),
    };
    let checker = checker.as_ref();
    let (verdict, what) = match fragment {
        Some(path) => {
            let hyps =
                parse_hypotheses(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            (check_fragment(&cert, &hyps, &checker), "proof fragment")
        }
        None if check_wellfounded(&cert, &checker).is_ok() => (Ok(()), "well-founded proof"),
        None => (check_circular(&cert, &checker), "circular proof"),
    };
    match verdict {
        Ok(()) => {
            say(out, format!("accepted: {what} of {}", cert.judgement))?;
            Ok(EXIT_OK)
        }
        Err(rejection) => {
            say(out, format!("rejected: {rejection}"))?;
            Ok(EXIT_FALSE)
        }
    }
}

fn cmd_bisim(p: &str, q: &str, max_states: usize, out: &mut dyn Write) -> Outcome {
    let (p, q) = (process(p)?, process(q)?);
    let states = explore(&[p.clone(), q.clone()], max_states)
        .map_err(|e| e.to_string())?
        .len();
    let verdict = bisimilar(&p, &q, max_states).map_err(|e| e.to_string())?;
    let word = if verdict {
        "bisimilar"
    } else {
        "not bisimilar"
    };
    say(
        out,
        format!("{word}: {} ~ {} ({states} states)", render(&p), render(&q)),
    )?;
    Ok(if verdict { EXIT_OK } else { EXIT_FALSE })
}

fn cmd_fixpoint(
    file: &Path,
    semantics: Semantics,
    prove: Option<&str>,
    emit: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let rs = read_rules(file)?;
    let (label, valid) = match semantics {
        Semantics::Lfp => ("lfp", lfp(&rs)),
        Semantics::Gfp => ("gfp", gfp(&rs)),
    };
    let members: Vec<&str> = valid.iter().map(Judgement::as_str).collect();
    say(out, format!("{label}: {{{}}}", members.join(", ")))?;
    let Some(id) = prove else {
        return Ok(EXIT_OK);
    };
    let j = Judgement::new(id);
    if !rs.contains(&j) {
        return Err(format!("unknown judgement id `{id}`"));
    }
    let cert = match semantics {
        Semantics::Lfp => extract_wf_proof(&rs, &j),
        Semantics::Gfp => extract_circular_proof(&rs, &j),
    };
    let adjective = match semantics {
        Semantics::Lfp => "inductively",
        Semantics::Gfp => "coinductively",
    };
    match cert {
        Some(cert) => {
            say(out, format!("{id} is {adjective} valid"))?;
            say(out, render_cert(&cert).trim_end())?;
            if let Some(path) = emit {
                write_cert(path, &cert)?;
                say(out, format!("certificate written to {}", path.display()))?;
            }
            Ok(EXIT_OK)
        }
        None => {
            say(out, format!("{id} is not {adjective} valid"))?;
            Ok(EXIT_FALSE)
        }
    }
}
