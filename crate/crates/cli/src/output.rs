use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::settings::RunConfig;
use crate::CliError;

/// Text of one output file: `#` metadata lines then the body.
pub struct Document {
    text: String,
}

impl Document {
    pub fn new(cfg: &RunConfig) -> Self {
        let mut text = String::new();
        for (k, v) in cfg.metadata() {
            let _ = writeln!(text, "# {k} = {v}");
        }
        Self { text }
    }

    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "# {key} = {value}");
    }

    pub fn line(&mut self, fields: impl IntoIterator<Item = impl AsRef<str>>) {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(f.as_ref());
            first = false;
        }
        self.text.push('\n');
    }

    pub fn raw(&mut self, s: &str) {
        self.text.push_str(s);
    }

    /// Writes to `path`, or to stdout when there is none.
    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => {
                std::fs::write(p, &self.text).map_err(|e| CliError::Io(p.display().to_string(), e))
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::Io("stdout".into(), e))
            }
        }
    }
}

/// Shortest round-trip scientific notation.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:e}")
    }
}
