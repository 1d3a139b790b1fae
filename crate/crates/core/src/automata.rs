//! Finite automata with output and the automatic sequences they generate.
//!
//! The term of index `n` is the output after feeding the base-`k` digits of
//! `n` least-significant first. `0` is fed as the single digit `0`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{complexity, Alphabet, Word};

pub const FIGURE1_JSON: &str = include_str!("../data/figure1.json");
pub const THUE_MORSE_JSON: &str = include_str!("../data/thue_morse.json");

/// On-disk shape of a machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonSpec {
    pub base: u32,
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: BTreeMap<String, Vec<String>>,
    pub output: BTreeMap<String, String>,
}

/// A validated machine: total transition table and total output map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAutomaton {
    base: u32,
    states: Vec<String>,
    initial: usize,
    transitions: Vec<Vec<usize>>,
    output_alphabet: Alphabet,
    output: Vec<u32>,
}

impl TryFrom<AutomatonSpec> for FiniteAutomaton {
    type Error = Error;

    fn try_from(spec: AutomatonSpec) -> Result<Self> {
        let bad = |m: String| Error::InvalidAutomaton(m);
        if spec.base < 2 {
            return Err(bad(format!("base {} < 2", spec.base)));
        }
        if spec.states.is_empty() {
            return Err(bad("no states".into()));
        }
        let index: BTreeMap<&str, usize> = spec.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != spec.states.len() {
            return Err(bad("duplicate state names".into()));
        }
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| bad(format!("unknown state {name:?}")));
        let initial = lookup(&spec.initial)?;

        for key in spec.transitions.keys().chain(spec.output.keys()) {
            lookup(key)?;
        }
        let mut transitions = Vec::with_capacity(spec.states.len());
        let mut output_names = Vec::with_capacity(spec.states.len());
        for state in &spec.states {
            let row = spec
                .transitions
                .get(state)
                .ok_or_else(|| bad(format!("no transitions for state {state:?}")))?;
            if row.len() != spec.base as usize {
                return Err(bad(format!(
                    "state {state:?} has {} transitions, expected {}",
                    row.len(),
                    spec.base
                )));
            }
            transitions.push(row.iter().map(|t| lookup(t)).collect::<Result<Vec<_>>>()?);
            output_names.push(
                spec.output
                    .get(state)
                    .ok_or_else(|| bad(format!("no output for state {state:?}")))?
                    .clone(),
            );
        }
        let letters: BTreeSet<&String> = output_names.iter().collect();
        let output_alphabet = Alphabet::new(letters.into_iter().cloned())?;
        let output = output_names
            .iter()
            .map(|l| output_alphabet.index_of(l).unwrap())
            .collect();
        Ok(FiniteAutomaton {
            base: spec.base,
            states: spec.states,
            initial,
            transitions,
            output_alphabet,
            output,
        })
    }
}

impl FiniteAutomaton {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: AutomatonSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.try_into()
    }

    /// The three-state machine over `{0,1}` with outputs `X, Y ↦ b`, `Z ↦ a`.
    pub fn figure1() -> Self {
        Self::from_json(FIGURE1_JSON).expect("bundled machine is valid")
    }

    /// Two states tracking the parity of the binary digit sum.
    pub fn thue_morse() -> Self {
        Self::from_json(THUE_MORSE_JSON).expect("bundled machine is valid")
    }

    /// A single-state machine that always outputs `letter`.
    pub fn constant(base: u32, letter: &str) -> Self {
        let spec = AutomatonSpec {
            base,
            states: vec!["S".into()],
            initial: "S".into(),
            transitions: BTreeMap::from([("S".into(), vec!["S".into(); base as usize])]),
            output: BTreeMap::from([("S".into(), letter.into())]),
        };
        spec.try_into().expect("constant machine is valid")
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    fn final_state(&self, digits: &[u32]) -> Result<usize> {
        digits.iter().try_fold(self.initial, |state, &d| {
            if d >= self.base {
                Err(Error::InvalidDigit { digit: d, base: self.base })
            } else {
                Ok(self.transitions[state][d as usize])
            }
        })
    }

    /// Output letter after reading `digits` from the initial state.
    pub fn run(&self, digits: &[u32]) -> Result<&str> {
        let s = self.final_state(digits)?;
        Ok(self.output_alphabet.letter(self.output[s]))
    }

    fn term_index(&self, n: u64) -> u32 {
        let mut state = self.initial;
        let mut m = n;
        loop {
            state = self.transitions[state][(m % self.base as u64) as usize];
            m /= self.base as u64;
            if m == 0 {
                break;
            }
        }
        self.output[state]
    }

    /// Term `n` of the automatic sequence.
    pub fn automatic_term(&self, n: u64) -> &str {
        self.output_alphabet.letter(self.term_index(n))
    }

    /// First `len` terms as a word over the output alphabet.
    pub fn automatic_prefix(&self, len: usize) -> Word {
        let symbols = (0..len as u64).map(|n| self.term_index(n)).collect();
        Word::new(self.output_alphabet.clone(), symbols).expect("outputs lie in the output alphabet")
    }
}

/// Base-`k` digits of `n`, least significant first; `0` gives `[0]`.
pub fn digits_lsb_first(mut n: u64, base: u32) -> Vec<u32> {
    let mut out = Vec::new();
    loop {
        out.push((n % base as u64) as u32);
        n /= base as u64;
        if n == 0 {
            return out;
        }
    }
}

/// Thue–Morse prefix from the digit-sum parity formula.
pub fn thue_morse_direct(len: usize) -> Word {
    let symbols = (0..len as u64).map(|n| n.count_ones() % 2).collect();
    Word::new(Alphabet::digits(2), symbols).expect("binary symbols")
}

/// `max_{1≤n≤nmax} ρ(n)/n` on the first `len` terms.
pub fn measured_complexity_slope(m: &FiniteAutomaton, len: usize, nmax: usize) -> Result<BigRational> {
    if nmax == 0 || 2 * nmax > len {
        return Err(Error::PreconditionFailed(format!("need 1 <= nmax <= N/2 (N={len}, nmax={nmax})")));
    }
    let w = m.automatic_prefix(len);
    Ok((1..=nmax)
        .map(|n| BigRational::new(BigInt::from(complexity(&w, n)), BigInt::from(n)))
        .fold(BigRational::zero(), |acc, v| acc.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn figure1_worked_example() {
        let m = FiniteAutomaton::figure1();
        assert_eq!(m.run(&[0, 0, 1, 0, 0]).unwrap(), "b");
        assert_eq!(m.run(&[]).unwrap(), "b");
        assert_eq!(m.run(&[0]).unwrap(), "b");
        let terms: Vec<&str> = (0..5).map(|n| m.automatic_term(n)).collect();
        assert_eq!(terms, ["b", "a", "b", "a", "a"]);
        assert_eq!(m.automatic_prefix(5).to_string(), "babaa");
        assert_eq!(m.run(&[2]), Err(Error::InvalidDigit { digit: 2, base: 2 }));
    }

    #[test]
    fn term_zero_is_a_single_zero_digit() {
        let m = FiniteAutomaton::figure1();
        assert_eq!(digits_lsb_first(0, 2), vec![0]);
        assert_eq!(digits_lsb_first(4, 2), vec![0, 0, 1]);
        assert_eq!(m.automatic_term(0), m.run(&[0]).unwrap());
    }

    #[test]
    fn thue_morse_both_routes() {
        let m = FiniteAutomaton::thue_morse();
        assert_eq!(m.automatic_prefix(8).to_string(), "01101001");
        assert_eq!(thue_morse_direct(8).to_string(), "01101001");
        assert_eq!(thue_morse_direct(1).to_string(), "0");
        assert_eq!(m.automatic_prefix(4096).symbols(), thue_morse_direct(4096).symbols());
    }

    #[test]
    fn constant_machine() {
        let m = FiniteAutomaton::constant(3, "z");
        assert_eq!(m.automatic_prefix(7).to_string(), "zzzzzzz");
        assert!(measured_complexity_slope(&m, 64, 16).unwrap() <= r(1, 1));
    }

    #[test]
    fn slopes() {
        let tm = measured_complexity_slope(&FiniteAutomaton::thue_morse(), 4096, 32).unwrap();
        assert!(tm <= r(4, 1), "{tm}");
        let fig = measured_complexity_slope(&FiniteAutomaton::figure1(), 4096, 32).unwrap();
        assert_eq!(fig, FIGURE1_SLOPE_4096_32.parse::<BigRational>().unwrap());
        assert!(measured_complexity_slope(&FiniteAutomaton::figure1(), 10, 6).is_err());
    }

    /// Regression value recorded from the first run.
    const FIGURE1_SLOPE_4096_32: &str = "423/32";

    #[test]
    fn rejects_partial_tables() {
        let partial = r#"{"base":2,"states":["A"],"initial":"A","transitions":{"A":["A"]},"output":{"A":"x"}}"#;
        assert!(matches!(FiniteAutomaton::from_json(partial), Err(Error::InvalidAutomaton(_))));
        let no_output = r#"{"base":2,"states":["A"],"initial":"A","transitions":{"A":["A","A"]},"output":{}}"#;
        assert!(matches!(FiniteAutomaton::from_json(no_output), Err(Error::InvalidAutomaton(_))));
        let dangling = r#"{"base":2,"states":["A"],"initial":"A","transitions":{"A":["A","B"]},"output":{"A":"x"}}"#;
        assert!(matches!(FiniteAutomaton::from_json(dangling), Err(Error::InvalidAutomaton(_))));
    }
}

#[cfg(test)]
mod slope_regression {
    use super::*;

    // Prefix complexity can only grow with the prefix; once every factor of
    // length <= nmax has appeared, the slope is frozen.
    #[test]
    fn slope_grows_then_freezes() {
        for m in [FiniteAutomaton::figure1(), FiniteAutomaton::thue_morse()] {
            let slopes: Vec<BigRational> = [512, 1024, 2048, 4096, 8192, 16384]
                .iter()
                .map(|&len| measured_complexity_slope(&m, len, 32).unwrap())
                .collect();
            assert!(slopes.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(slopes[3], slopes[5]);
        }
    }
}
