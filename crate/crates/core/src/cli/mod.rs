//! The `skiql` command line.
//!
//! Exit codes: 0 on success, 1 when a file cannot be read, written or
//! loaded (or the server cannot bind), 2 for invalid queries and usage
//! errors.

mod repl;

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::engine::{complete_schema, run_query, Options, QueryError};
use crate::io::{extract_schema, load_schema, read_samples_dir, save_schema, ExtractionConfig, LoadError};
use crate::model::USchemaModel;
use crate::render::{render, Format};
use crate::service::{self, Registry};

pub use repl::Repl;

#[derive(Debug, Parser)]
#[command(name = "skiql", version, about = "Query logical schemas of NoSQL and relational databases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one query against a schema document.
    Query {
        schema: PathBuf,
        query: String,
        /// table, dot or graphjson
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep all simple paths for `>>` targets, not only the shortest.
        #[arg(long)]
        all_paths: bool,
    },
    /// Read queries from standard input, one per line.
    Repl {
        schema: PathBuf,
        /// Append evaluated queries to this file.
        #[arg(long)]
        history: Option<PathBuf>,
    },
    /// Build a schema document from sample records, one `*.jsonl` file per collection.
    Extract {
        samples: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Model name (overrides the configuration).
        #[arg(long)]
        name: Option<String>,
    },
    /// Check a schema document.
    Validate { schema: PathBuf },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value = service::DEFAULT_LISTEN)]
        listen: String,
        /// Directory of `*.uschema.json` documents to load and save.
        #[arg(long, env = "SKIQL_SCHEMAS_DIR")]
        schemas: Option<PathBuf>,
        /// Directory of console files served at `/`.
        #[arg(long)]
        console: Option<PathBuf>,
    },
    /// Draw or list a whole schema.
    Render {
        schema: PathBuf,
        /// One union type per schema type.
        #[arg(long)]
        union: bool,
        #[arg(long, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command, with the exit code it maps to.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Query(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Query(_) => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("error: {}: {e}", path.display())))
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("error: {}: {e}", path.display())))
}

pub fn load_model(path: &Path) -> Result<USchemaModel, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("error: {}: {e}", path.display()))?;
    load_schema(&text).map_err(|e| match e {
        LoadError::Validation(vs) => {
            let mut s = format!("error: {}: invalid schema", path.display());
            for v in vs {
                s.push_str(&format!("\n  {v}"));
            }
            s
        }
        other => format!("error: {}: {other}", path.display()),
    })
}

/// Evaluates `text` and renders it, or describes the failure the way the
/// command line prints it.
pub fn evaluate(model: &USchemaModel, text: &str, format: Format, options: Options) -> Result<String, String> {
    match run_query(model, text, options) {
        Ok(result) => Ok(render(&result, format)),
        Err(QueryError::Syntax(e)) => Err(e.annotate(text)),
        Err(QueryError::Engine(e)) => Err(format!("error: {e}")),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => write_out(p, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("error: {e}"))),
    }
}

/// Runs the command line with explicit streams. Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Query {
            schema,
            query,
            format,
            out,
            all_paths,
        } => {
            let model = load_model(&schema).map_err(CliError::Io)?;
            let text = evaluate(&model, &query, format, Options { all_paths }).map_err(CliError::Query)?;
            emit(out.as_deref(), &text, stdout)
        }
        Command::Repl { schema, history } => {
            let model = load_model(&schema).map_err(CliError::Io)?;
            let mut repl = Repl::new(model);
            if let Some(h) = history {
                repl = repl.with_history(h);
            }
            repl.run(stdin, stdout)
                .map_err(|e| CliError::Io(format!("error: {e}")))
        }
        Command::Extract {
            samples,
            config,
            out,
            name,
        } => {
            let mut cfg: ExtractionConfig = match config {
                Some(p) => serde_json::from_str(&read(&p)?)
                    .map_err(|e| CliError::Io(format!("error: {}: {e}", p.display())))?,
                None => ExtractionConfig::default(),
            };
            if let Some(n) = name {
                cfg.model_name = n;
            }
            let records = read_samples_dir(&samples).map_err(|e| CliError::Io(format!("error: {e}")))?;
            let model = extract_schema(&records, &cfg).map_err(|e| CliError::Io(format!("error: {e}")))?;
            write_out(&out, &save_schema(&model))?;
            let _ = writeln!(
                stdout,
                "{}: {} entity types, {} variations",
                out.display(),
                model.entity_types.len(),
                model.entity_types.iter().map(|e| e.variations.len()).sum::<usize>()
            );
            Ok(())
        }
        Command::Validate { schema } => {
            let model = load_model(&schema).map_err(CliError::Io)?;
            let _ = writeln!(
                stdout,
                "{}: valid {} schema `{}` with {} entity types and {} relationship types",
                schema.display(),
                model.kind,
                model.name,
                model.entity_types.len(),
                model.relationship_types.len()
            );
            Ok(())
        }
        Command::Serve {
            listen,
            schemas,
            console,
        } => serve(&listen, schemas.as_deref(), console.as_deref(), stdout),
        Command::Render {
            schema,
            union,
            format,
            out,
        } => {
            let model = load_model(&schema).map_err(CliError::Io)?;
            let result = complete_schema(&model, union).map_err(|e| CliError::Query(format!("error: {e}")))?;
            emit(out.as_deref(), &render(&result, format), stdout)
        }
    }
}

fn serve(listen: &str, schemas: Option<&Path>, console: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let registry = match schemas {
        Some(dir) => Registry::with_dir(dir).map_err(|e| CliError::Io(format!("error: {e}")))?,
        None => Registry::new(),
    };
    let app = service::router(Arc::new(registry), console);
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(format!("error: {e}")))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(listen)
            .await
            .map_err(|e| CliError::Io(format!("error: cannot listen on {listen}: {e}")))?;
        let addr = listener
            .local_addr()
            .map_err(|e| CliError::Io(format!("error: {e}")))?;
        let _ = writeln!(stdout, "listening on http://{addr}");
        let _ = stdout.flush();
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        service::serve(listener, app, shutdown)
            .await
            .map_err(|e| CliError::Io(format!("error: {e}")))
    })
}

/// Entry point of the `skiql` binary.
pub fn main() -> i32 {
    let stdin = io::stdin();
    run(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}
