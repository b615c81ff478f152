use clap::ValueEnum;
use quadclass::classgroup::ClassGroupConfig;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Table,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub enumeration_bound: u64,
    pub bsgs_truncation: u64,
    pub parallelism: usize,
    pub output_format: Format,
    pub output_path: Option<std::path::PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.enumeration_bound == 0 || self.bsgs_truncation == 0 || self.parallelism == 0 {
            return Err("bounds and --jobs must be positive".to_string());
        }
        Ok(())
    }

    pub fn class_group(&self) -> ClassGroupConfig {
        ClassGroupConfig {
            enumeration_bound: self.enumeration_bound,
            bsgs_truncation: self.bsgs_truncation,
            ..ClassGroupConfig::default()
        }
    }

    /// Settings that affect results. Parallelism is left out so output does
    /// not depend on it.
    pub fn header(&self) -> Value {
        json!({
            "enumeration_bound": self.enumeration_bound,
            "bsgs_truncation": self.bsgs_truncation,
            "format": self.output_format.name(),
        })
    }
}
