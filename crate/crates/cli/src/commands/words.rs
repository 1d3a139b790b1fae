use serde_json::json;
use subspace_core::automata::{measured_complexity_slope, thue_morse_direct, FiniteAutomaton};
use subspace_core::words::{
    brute_force_repetition_oracle, complexity, find_disjoint_repetition, lemma_epsilon, lemma_prefix_len,
    repetition_from_low_complexity, Repetition,
};
use subspace_core::{Error, Result};

use crate::parse::{self, WordArgs};
use crate::report::Builder;

#[derive(Debug, clap::Args)]
pub struct ComplexityArgs {
    #[command(flatten)]
    pub word: WordArgs,
    /// Factor lengths (comma-separated).
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<usize>,
}

pub fn complexity_cmd(args: &ComplexityArgs, b: &mut Builder) -> Result<()> {
    let w = args.word.resolve(b)?;
    b.input("n", format!("{:?}", args.n));
    b.verdict("length", w.len());
    for &n in &args.n {
        b.verdict(format!("complexity(n={n})"), complexity(&w, n));
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct RepetitionArgs {
    #[command(flatten)]
    pub word: WordArgs,
    /// Minimum common length.
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    /// Use the brute-force search instead of the suffix-based one.
    #[arg(long)]
    pub oracle: bool,
    /// Run the complexity lemma with this constant (needs --n).
    #[arg(long, requires = "n")]
    pub kappa: Option<String>,
    #[arg(long, requires = "kappa")]
    pub n: Option<usize>,
}

/// 0-based offsets, as in all JSON output.
fn offsets(r: &Repetition) -> serde_json::Value {
    json!({ "indexBase": 0, "k": r.k - 1, "n": r.n - 1, "len": r.len })
}

pub fn repetition_cmd(args: &RepetitionArgs, b: &mut Builder) -> Result<()> {
    let w = args.word.resolve(b)?;
    if let (Some(kappa), Some(n)) = (&args.kappa, args.n) {
        b.input("kappa", kappa);
        b.input("n", n.to_string());
        let kappa = parse::rational(kappa)?;
        let rep = repetition_from_low_complexity(&w, n, &kappa)?;
        b.verdict("prefixLength", lemma_prefix_len(n, &kappa));
        b.verdict("epsilon", lemma_epsilon(&kappa).to_string());
        b.verdict("repetition", offsets(&rep));
        b.criterion(true);
        return Ok(());
    }
    b.input("min-len", args.min_len.to_string());
    let rep = if args.oracle {
        b.input("oracle", "1");
        brute_force_repetition_oracle(&w, args.min_len)?
    } else {
        find_disjoint_repetition(&w, args.min_len)
    };
    b.verdict("repetition", rep.as_ref().map(offsets));
    b.criterion(rep.is_some());
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct AutomatonArgs {
    /// Machine file, or one of: figure1, thue-morse, constant:<letter>[:<base>].
    #[arg(long, default_value = "figure1")]
    pub machine: String,
    /// Digits to feed, least significant first.
    #[arg(long)]
    pub word: Option<String>,
    /// Terms u_n of the automatic sequence (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub term: Vec<u64>,
    /// First N terms as a word.
    #[arg(long)]
    pub prefix: Option<usize>,
    /// Prefix length for the complexity slope max_n ρ(n)/n.
    #[arg(long)]
    pub slope_len: Option<usize>,
    #[arg(long, default_value_t = 32)]
    pub nmax: usize,
    /// Thue-Morse prefix computed from binary digit sums.
    #[arg(long)]
    pub thue_morse_direct: Option<usize>,
}

fn machine(spec: &str, b: &mut Builder) -> Result<FiniteAutomaton> {
    match spec {
        "figure1" => {
            b.input("machine", spec);
            Ok(FiniteAutomaton::figure1())
        }
        "thue-morse" => {
            b.input("machine", spec);
            Ok(FiniteAutomaton::thue_morse())
        }
        s if s.starts_with("constant:") => {
            b.input("machine", spec);
            let mut parts = s["constant:".len()..].split(':');
            let letter = parts.next().filter(|l| !l.is_empty()).ok_or_else(|| Error::Parse(spec.into()))?;
            let base = match parts.next() {
                Some(t) => t.parse().map_err(|_| Error::Parse(spec.into()))?,
                None => 2,
            };
            Ok(FiniteAutomaton::constant(base, letter))
        }
        path => {
            let text = parse::json_text(path)?;
            b.input("machine", &text);
            FiniteAutomaton::from_json(&text)
        }
    }
}

pub fn automaton_cmd(args: &AutomatonArgs, b: &mut Builder) -> Result<()> {
    let m = machine(&args.machine, b)?;
    let mut any = false;
    if let Some(word) = &args.word {
        b.input("word", word);
        let digits = parse::digits(word)?;
        b.verdict("output", m.run(&digits)?);
        any = true;
    }
    if !args.term.is_empty() {
        b.input("term", format!("{:?}", args.term));
        for &n in &args.term {
            b.verdict(format!("term({n})"), m.automatic_term(n));
        }
        any = true;
    }
    if let Some(n) = args.prefix {
        b.input("prefix", n.to_string());
        b.verdict("prefix", m.automatic_prefix(n).to_string());
        any = true;
    }
    if let Some(n) = args.slope_len {
        b.input("slope", format!("{n},{}", args.nmax));
        b.verdict("slope", measured_complexity_slope(&m, n, args.nmax)?.to_string());
        any = true;
    }
    if let Some(n) = args.thue_morse_direct {
        b.input("thue-morse-direct", n.to_string());
        b.verdict("thueMorseDirect", thue_morse_direct(n).to_string());
        any = true;
    }
    if !any {
        b.verdict("states", m.num_states());
        b.verdict("base", m.base());
    }
    Ok(())
}
