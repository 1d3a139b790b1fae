use std::fs;

use num_bigint::BigInt;
use num_rational::BigRational;
use subspace_core::exactnum::parse_rational;
use subspace_core::surface::{IntersectionMatrix, WeightVector};
use subspace_core::words::{Alphabet, Word};
use subspace_core::{Error, Result};

use crate::report::Builder;

pub fn rational(s: &str) -> Result<BigRational> {
    parse_rational(s)
}

pub fn rationals(items: &[String]) -> Result<Vec<BigRational>> {
    items.iter().map(|s| parse_rational(s)).collect()
}

/// Reads `arg` as a file unless it already looks like inline JSON.
pub fn json_text(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    }
}

/// `{"matrix": …}` from a file or inline text; a bare array of rows is accepted too.
pub fn matrix(arg: &str, b: &mut Builder) -> Result<IntersectionMatrix> {
    let text = json_text(arg)?;
    b.input("matrix", &text);
    if text.trim_start().starts_with('[') {
        IntersectionMatrix::from_json(&format!("{{\"matrix\": {text}}}"))
    } else {
        IntersectionMatrix::from_json(&text)
    }
}

pub fn weights(arg: &str, b: &mut Builder) -> Result<WeightVector> {
    b.input("weights", arg);
    arg.parse()
}

pub fn scaled(w: &WeightVector, t: u64) -> Result<WeightVector> {
    if t == 0 {
        return Err(Error::PreconditionFailed("scale must be positive".into()));
    }
    Ok(w.scaled(t))
}

/// Digit list: one character per digit, or comma-separated values for larger bases.
pub fn digits(s: &str) -> Result<Vec<u32>> {
    if s.contains(',') {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("digit {t:?}"))))
            .collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(36).ok_or_else(|| Error::Parse(format!("digit {c:?}"))))
            .collect()
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct WordArgs {
    /// The word, one letter per character.
    #[arg(long, group = "source")]
    pub word: Option<String>,
    /// The word as comma-separated letters.
    #[arg(long, group = "source", value_delimiter = ',')]
    pub letters: Option<Vec<String>>,
    /// Prefix of the Thue-Morse sequence of this length.
    #[arg(long, group = "source")]
    pub thue_morse: Option<usize>,
    /// Ordered alphabet (comma-separated); defaults to the letters that occur.
    #[arg(long, value_delimiter = ',')]
    pub alphabet: Option<Vec<String>>,
    /// Concatenate this many copies.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
}

impl WordArgs {
    pub fn resolve(&self, b: &mut Builder) -> Result<Word> {
        let base = if let Some(n) = self.thue_morse {
            b.input("thue-morse", n.to_string());
            subspace_core::automata::thue_morse_direct(n)
        } else {
            let letters: Vec<String> = match (&self.word, &self.letters) {
                (Some(w), _) => w.chars().map(String::from).collect(),
                (None, Some(l)) => l.clone(),
                (None, None) => return Err(Error::PreconditionFailed("one of --word, --letters, --thue-morse".into())),
            };
            b.input("letters", letters.join("\u{1f}"));
            match &self.alphabet {
                Some(a) => {
                    b.input("alphabet", a.join("\u{1f}"));
                    let alphabet = Alphabet::new(a.iter().cloned())?;
                    let symbols = letters
                        .iter()
                        .map(|l| alphabet.index_of(l).ok_or_else(|| Error::UnknownSymbol(l.clone())))
                        .collect::<Result<Vec<_>>>()?;
                    Word::new(alphabet, symbols)?
                }
                None => Word::from_letters(&letters),
            }
        };
        if self.repeat == 1 {
            return Ok(base);
        }
        b.input("repeat", self.repeat.to_string());
        let symbols = base.symbols().repeat(self.repeat);
        Word::new(base.alphabet().clone(), symbols)
    }
}

pub fn integer_vectors(text: &str) -> Result<Vec<Vec<Vec<i64>>>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn bigints(items: &[String]) -> Result<Vec<BigInt>> {
    items
        .iter()
        .map(|s| s.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
        .collect()
}
