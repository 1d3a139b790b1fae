use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: Value,
}

/// What one invocation computed.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    #[serde(rename = "inputsDigest")]
    pub inputs_digest: String,
    /// The yes/no question the subcommand answers, if it answers one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<bool>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn exit_code(&self) -> u8 {
        match self.criterion {
            Some(false) => 2,
            _ => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut out = format!("subcommand\t{}\ninputsDigest\t{}\n", self.subcommand, self.inputs_digest);
                if let Some(c) = self.criterion {
                    out.push_str(&format!("criterion\t{c}\n"));
                }
                for v in &self.verdicts {
                    out.push_str(&format!("verdict\t{}\t{}\n", v.name, tsv_cell(&v.value)));
                }
                for n in &self.notes {
                    out.push_str(&format!("note\t{}\n", escape(n)));
                }
                out
            }
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => escape(s),
        other => other.to_string(),
    }
}

/// Accumulates the canonical inputs of a run and the report under construction.
pub struct Builder {
    subcommand: String,
    hasher: Sha256,
    criterion: Option<bool>,
    verdicts: Vec<Verdict>,
    notes: Vec<String>,
}

impl Builder {
    pub fn new(subcommand: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(subcommand.as_bytes());
        hasher.update(b"\n");
        Builder { subcommand: subcommand.into(), hasher, criterion: None, verdicts: Vec::new(), notes: Vec::new() }
    }

    /// Records one input; file inputs should pass their contents.
    pub fn input(&mut self, key: &str, value: impl AsRef<[u8]>) {
        let value = value.as_ref();
        self.hasher.update(key.as_bytes());
        self.hasher.update(b"=");
        self.hasher.update((value.len() as u64).to_le_bytes());
        self.hasher.update(value);
        self.hasher.update(b"\n");
    }

    pub fn verdict(&mut self, name: impl Into<String>, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("verdict serializes");
        self.verdicts.push(Verdict { name: name.into(), value });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }

    /// Combines with any earlier criterion: the run holds only if all of them do.
    pub fn criterion(&mut self, holds: bool) {
        self.criterion = Some(self.criterion.unwrap_or(true) && holds);
    }

    pub fn finish(self) -> RunReport {
        RunReport {
            subcommand: self.subcommand,
            inputs_digest: hex::encode(self.hasher.finalize()),
            criterion: self.criterion,
            verdicts: self.verdicts,
            notes: self.notes,
        }
    }
}
