use std::fs::OpenOptions;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use crate::engine::Options;
use crate::model::USchemaModel;
use crate::render::Format;
use crate::syntax::{parse_query, unparse};

const HELP: &str = "\
queries are evaluated against the loaded schema, one per line
  :table  :dot  :json   choose the output format
  :union on|off         evaluate every query as UNION
  :paths on|off         keep all simple paths for >> targets
  :help                 this text
  :quit                 leave
";

/// Interactive loop over any line source and sink.
pub struct Repl {
    model: USchemaModel,
    format: Format,
    union: bool,
    options: Options,
    history: Option<PathBuf>,
}

impl Repl {
    pub fn new(model: USchemaModel) -> Repl {
        Repl {
            model,
            format: Format::Table,
            union: false,
            options: Options::default(),
            history: None,
        }
    }

    pub fn with_history(mut self, path: PathBuf) -> Repl {
        self.history = Some(path);
        self
    }

    fn remember(&self, line: &str) -> io::Result<()> {
        if let Some(path) = &self.history {
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            writeln!(f, "{line}")?;
        }
        Ok(())
    }

    fn toggle(arg: Option<&str>) -> Option<bool> {
        match arg {
            Some("on") => Some(true),
            Some("off") => Some(false),
            _ => None,
        }
    }

    /// Handles one input line. Returns false once the user quits.
    pub fn step(&mut self, line: &str, out: &mut dyn Write) -> io::Result<bool> {
        let line = line.trim();
        if line.is_empty() {
            return Ok(true);
        }
        if let Some(cmd) = line.strip_prefix(':') {
            let mut parts = cmd.split_whitespace();
            match (parts.next(), parts.next()) {
                (Some("quit" | "q" | "exit"), _) => return Ok(false),
                (Some("table"), _) => self.format = Format::Table,
                (Some("dot"), _) => self.format = Format::Dot,
                (Some("json"), _) => self.format = Format::GraphJson,
                (Some("help"), _) => out.write_all(HELP.as_bytes())?,
                (Some("union"), arg) => match Self::toggle(arg) {
                    Some(on) => self.union = on,
                    None => writeln!(out, "usage: :union on|off")?,
                },
                (Some("paths"), arg) => match Self::toggle(arg) {
                    Some(on) => self.options.all_paths = on,
                    None => writeln!(out, "usage: :paths on|off")?,
                },
                _ => writeln!(out, "unknown command `{line}`, try :help")?,
            }
            return Ok(true);
        }
        self.remember(line)?;
        let text = if self.union {
            match parse_query(line) {
                Ok(mut q) => {
                    q.set_union(true);
                    unparse(&q)
                }
                Err(_) => line.to_string(),
            }
        } else {
            line.to_string()
        };
        match super::evaluate(&self.model, &text, self.format, self.options) {
            Ok(s) => out.write_all(s.as_bytes())?,
            Err(e) => writeln!(out, "{e}")?,
        }
        Ok(true)
    }

    pub fn run(&mut self, input: &mut dyn BufRead, out: &mut dyn Write) -> io::Result<()> {
        let mut line = String::new();
        loop {
            write!(out, "skiql> ")?;
            out.flush()?;
            line.clear();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                return Ok(());
            }
            if !self.step(&line, out)? {
                return Ok(());
            }
        }
    }
}
