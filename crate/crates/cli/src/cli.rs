//! Argument parsing and process-level behavior: exit codes, output, timing.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::run::{run, Command, Overrides, RunError};
use crate::workspace::{load_workspace, BoundSpec};

/// Exit code for usage, parse and validation errors.
pub const USAGE_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "minmodel", version, about = "Bounded checks for model structures on finite presheaves")]
pub struct Cli {
    /// Workspace file.
    pub workspace: PathBuf,
    #[command(subcommand)]
    pub command: Cmd,
    /// Attachment budget for each factorization.
    #[arg(long, global = true)]
    pub fuel: Option<usize>,
    /// Universe bound: `N` for every object, or `OBJ:N ...`.
    #[arg(long, global = true, value_parser = parse_bound)]
    pub bound: Option<BoundSpec>,
    /// Recompute homotopies with a second cylinder and compare.
    #[arg(long, global = true)]
    pub cross_check: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Record wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

fn parse_bound(s: &str) -> Result<BoundSpec, String> {
    BoundSpec::parse(s).ok_or_else(|| format!("expected `N` or `OBJ:N ...`, got `{s}`"))
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Load and validate the workspace.
    Validate,
    /// Factor a map as a cell map followed by an injective map.
    Factor { map: String, set: String },
    /// The canonical cylinder over a map.
    Cylinder { map: String, set: String },
    /// Decide homotopy: `F0 F1 [rel I] SET`.
    Homotopic {
        #[arg(num_args = 3..=5, value_name = "F0 F1 [rel I] SET")]
        args: Vec<String>,
    },
    /// Every class membership of one map.
    Classify { map: String, set: String },
    CheckAppropriate { set: String },
    CheckMain { set: String },
    CheckProperness { set: String },
    VerifyAxioms { set: String },
    /// List the weak equivalences of the bounded universe.
    EnumerateWe { set: String },
}

impl Cmd {
    pub fn into_command(self) -> Result<Command, RunError> {
        Ok(match self {
            Cmd::Validate => Command::Validate,
            Cmd::Factor { map, set } => Command::Factor { map, set },
            Cmd::Cylinder { map, set } => Command::Cylinder { map, set },
            Cmd::Homotopic { args } => {
                let mut words = vec!["homotopic".to_string()];
                words.extend(args);
                Command::parse(&words)?
            }
            Cmd::Classify { map, set } => Command::Classify { map, set },
            Cmd::CheckAppropriate { set } => Command::CheckAppropriate { set },
            Cmd::CheckMain { set } => Command::CheckMain { set },
            Cmd::CheckProperness { set } => Command::CheckProperness { set },
            Cmd::VerifyAxioms { set } => Command::VerifyAxioms { set },
            Cmd::EnumerateWe { set } => Command::EnumerateWe { set },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Invocation {
    fn usage(stderr: String) -> Self {
        Invocation { code: USAGE_ERROR, stdout: String::new(), stderr }
    }
}

/// Writes via a temporary sibling and a rename.
fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    std::fs::rename(&tmp, path)
}

/// Runs the program on `args` (including the program name) without touching the process.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => USAGE_ERROR,
            };
            return Invocation { code, stdout: String::new(), stderr: e.render().to_string() };
        }
    };
    let started = Instant::now();
    let ws = match load_workspace(&cli.workspace) {
        Ok(ws) => ws,
        Err(e) => return Invocation::usage(format!("error: {e}\n")),
    };
    let command = match cli.command.into_command() {
        Ok(c) => c,
        Err(e) => return Invocation::usage(format!("error: {e}\n")),
    };
    let overrides = Overrides { fuel: cli.fuel, bound: cli.bound, cross_check: cli.cross_check.then_some(true) };
    let mut report = match run(&command, &ws, &overrides) {
        Ok(r) => r,
        Err(e) => return Invocation::usage(format!("error: {e}\n")),
    };
    if cli.timing {
        report.timing_ms = Some(started.elapsed().as_millis() as u64);
    }
    let json = report.to_json();
    let code = report.exit_code();
    match cli.output {
        Some(path) => match write_atomically(&path, &json) {
            Ok(()) => Invocation { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Invocation::usage(format!("error: cannot write {}: {e}\n", path.display())),
        },
        None => Invocation { code, stdout: json, stderr: String::new() },
    }
}
