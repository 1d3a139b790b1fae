//! Finite words, subword complexity, and disjoint repetitions.
//!
//! Positions reported in [`Repetition`] are 1-based: the first letter of a
//! word is `u_1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest word the cubic oracle accepts.
pub const ORACLE_MAX_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("empty".into()));
        }
        let mut seen = BTreeSet::new();
        for l in &letters {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {l:?}")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// `{0, 1, …, base-1}` with letters spelled in decimal.
    pub fn digits(base: u32) -> Self {
        Alphabet {
            letters: (0..base).map(|d| d.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, index: u32) -> &str {
        &self.letters[index as usize]
    }

    pub fn index_of(&self, letter: &str) -> Option<u32> {
        self.letters.iter().position(|l| l == letter).map(|i| i as u32)
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    fn single_chars(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }
}

/// A finite sequence of letters; symbols are stored as alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(Error::UnknownSymbol(bad.to_string()));
        }
        Ok(Word { alphabet, symbols })
    }

    /// Word over the sorted set of characters occurring in `s`.
    pub fn from_chars(s: &str) -> Self {
        let set: BTreeSet<char> = s.chars().collect();
        let letters: Vec<String> = if set.is_empty() {
            vec!["0".into()]
        } else {
            set.into_iter().map(String::from).collect()
        };
        let alphabet = Alphabet { letters };
        let symbols = s
            .chars()
            .map(|c| alphabet.index_of(&c.to_string()).unwrap())
            .collect();
        Word { alphabet, symbols }
    }

    /// Word whose characters must come from `alphabet`.
    pub fn parse_over(alphabet: Alphabet, s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| {
                alphabet
                    .index_of(&c.to_string())
                    .ok_or_else(|| Error::UnknownSymbol(c.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet, symbols })
    }

    /// Word from a list of letters; the alphabet is their sorted distinct set.
    pub fn from_letters<S: AsRef<str>>(letters: &[S]) -> Self {
        let set: BTreeSet<&str> = letters.iter().map(AsRef::as_ref).collect();
        let alphabet = Alphabet {
            letters: if set.is_empty() {
                vec!["0".into()]
            } else {
                set.into_iter().map(String::from).collect()
            },
        };
        let symbols = letters
            .iter()
            .map(|l| alphabet.index_of(l.as_ref()).unwrap())
            .collect();
        Word { alphabet, symbols }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn letters(&self) -> Vec<&str> {
        self.symbols.iter().map(|&s| self.alphabet.letter(s)).collect()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            symbols: self.symbols[..len.min(self.len())].to_vec(),
        }
    }

    /// 1-based factor `u_start … u_{start+len-1}`.
    pub fn factor(&self, start: usize, len: usize) -> &[u32] {
        &self.symbols[start - 1..start - 1 + len]
    }

    /// JSON array of letters, for alphabets whose letters are not single characters.
    pub fn to_json_letters(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.letters()
                .into_iter()
                .map(|l| serde_json::Value::String(l.to_string()))
                .collect(),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.single_chars() {
            for l in self.letters() {
                f.write_str(l)?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.to_json_letters())
        }
    }
}

/// Two disjoint equal factors `u_k…u_{k+len-1} = u_n…u_{n+len-1}` with
/// `k + len ≤ n`. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repetition {
    pub k: usize,
    pub n: usize,
    pub len: usize,
}

impl Repetition {
    /// Checks disjointness, containment in the first `total` letters, and equality.
    pub fn is_valid_in(&self, w: &Word, total: usize) -> bool {
        self.len >= 1
            && self.k >= 1
            && self.k + self.len <= self.n
            && self.n + self.len - 1 <= total.min(w.len())
            && w.factor(self.k, self.len) == w.factor(self.n, self.len)
    }
}

/// `ρ(n)`: number of distinct length-`n` factors; 0 when `n` exceeds the length.
pub fn complexity(w: &Word, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    if n > w.len() {
        return 0;
    }
    w.symbols.windows(n).collect::<BTreeSet<_>>().len()
}

/// Earliest `(k, n)` (1-based) carrying a disjoint repetition of length exactly `len`.
fn repetition_of_len(s: &[u32], len: usize) -> Option<(usize, usize)> {
    if len == 0 || 2 * len > s.len() {
        return None;
    }
    // The minimal k is always a first occurrence: any later occurrence k' with
    // a partner n ≥ k' + len lets the first occurrence use the same partner.
    let mut first: HashMap<&[u32], usize> = HashMap::new();
    let mut best: Option<(usize, usize)> = None;
    for (pos, f) in s.windows(len).enumerate() {
        let k = *first.entry(f).or_insert(pos);
        if k + len <= pos {
            match best {
                Some((bk, _)) if bk <= k => {}
                _ => best = Some((k, pos)),
            }
        }
    }
    best.map(|(k, n)| (k + 1, n + 1))
}

/// Longest disjoint repetition with length at least `min_len`
/// (ties broken by smallest `k`, then smallest `n`).
pub fn find_disjoint_repetition(w: &Word, min_len: usize) -> Option<Repetition> {
    let min_len = min_len.max(1);
    let s = w.symbols();
    // existence is monotone in the length: truncating both copies keeps them disjoint
    if repetition_of_len(s, min_len).is_none() {
        return None;
    }
    let (mut lo, mut hi) = (min_len, s.len() / 2);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if repetition_of_len(s, mid).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    repetition_of_len(s, lo).map(|(k, n)| Repetition { k, n, len: lo })
}

/// Exhaustive cubic search; the reference for [`find_disjoint_repetition`].
pub fn brute_force_repetition_oracle(w: &Word, min_len: usize) -> Result<Option<Repetition>> {
    let total = w.len();
    if total > ORACLE_MAX_LEN {
        return Err(Error::InputTooLarge { len: total, bound: ORACLE_MAX_LEN });
    }
    let s = w.symbols();
    for len in (min_len.max(1)..=total / 2).rev() {
        for k in 0..total {
            for n in k + len..=total.saturating_sub(len) {
                if (0..len).all(|j| s[k + j] == s[n + j]) {
                    return Ok(Some(Repetition { k: k + 1, n: n + 1, len }));
                }
            }
        }
    }
    Ok(None)
}

/// `⌈(κ+1)n⌉`.
pub fn lemma_prefix_len(n: usize, kappa: &BigRational) -> usize {
    let v = (kappa + BigRational::from_integer(BigInt::from(1))) * BigRational::from_integer(BigInt::from(n));
    v.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// The constant `ε = 1/(6(κ+1))` guaranteed relative to the prefix length.
pub fn lemma_epsilon(kappa: &BigRational) -> BigRational {
    (BigRational::from_integer(BigInt::from(6)) * (kappa + BigRational::from_integer(BigInt::from(1)))).recip()
}

/// Constructs a long repetition from low complexity.
///
/// With `ρ(n) < κn` and `N = ⌈(κ+1)n⌉`, the prefix of length `N` holds more
/// length-`n` windows than distinct factors, so two windows coincide. Equal
/// disjoint windows are returned directly; overlapping ones at distance `d`
/// force period `d`, so the word starts with `A^k` (`|A| = d`,
/// `k = ⌊n/d⌋ + 1`) and two copies of `A^{⌊k/2⌋}` sit side by side.
pub fn repetition_from_low_complexity(w: &Word, n: usize, kappa: &BigRational) -> Result<Repetition> {
    if n == 0 {
        return Err(Error::PreconditionFailed("n must be positive".into()));
    }
    if *kappa <= BigRational::zero() {
        return Err(Error::PreconditionFailed("kappa must be positive".into()));
    }
    let total = lemma_prefix_len(n, kappa);
    if w.len() < total {
        return Err(Error::PreconditionFailed(format!(
            "word length {} is below ceil((kappa+1)n) = {total}",
            w.len()
        )));
    }
    let rho = complexity(w, n);
    let kn = kappa * BigRational::from_integer(BigInt::from(n));
    if BigRational::from_integer(BigInt::from(rho)) >= kn {
        return Err(Error::PreconditionFailed(format!("complexity {rho} is not below kappa*n = {kn}")));
    }

    let s = &w.symbols()[..total];
    let mut first: HashMap<&[u32], usize> = HashMap::new();
    let (i, j) = s
        .windows(n)
        .enumerate()
        .find_map(|(pos, f)| match first.get(f) {
            Some(&i) => Some((i, pos)),
            None => {
                first.insert(f, pos);
                None
            }
        })
        .expect("pigeonhole: more windows than distinct factors");

    let rep = if j >= i + n {
        Repetition { k: i + 1, n: j + 1, len: n }
    } else {
        let d = j - i;
        let k = n / d + 1;
        let half = k / 2;
        Repetition { k: i + 1, n: i + 1 + half * d, len: half * d }
    };
    debug_assert!(rep.is_valid_in(w, total));
    Ok(rep)
}
