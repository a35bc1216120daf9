use amenity::Error;
use serde_json::{json, Value};

use super::args::Format;

pub struct Report {
    pub command: String,
    pub algebra_hash: String,
    pub degree_bound: Option<usize>,
    pub result: Value,
    pub table: String,
    /// Nonzero when a check ran but the object did not verify.
    pub exit: u8,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table.clone(),
            Format::Json => {
                let v = json!({
                    "tool": "amenity",
                    "version": amenity::VERSION,
                    "command": self.command,
                    "algebra_hash": self.algebra_hash,
                    "degree_bound": self.degree_bound,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }
}

pub enum Failure {
    Input(String),
    Library(Error),
    Internal(String),
}

impl Failure {
    pub fn input(msg: String) -> Self {
        Failure::Input(msg)
    }

    pub fn library(e: Error) -> Self {
        Failure::Library(e)
    }

    pub fn internal(msg: String) -> Self {
        Failure::Internal(msg)
    }

    /// 2 for bad input, 3 when the coordinate window is too small, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Library(e) if e.is_truncation() => 3,
            Failure::Library(_) => 2,
            Failure::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m.clone(),
            Failure::Library(e) if e.is_truncation() => format!("{e}; rerun with a larger --degree-bound"),
            Failure::Library(e) => e.to_string(),
        }
    }
}
