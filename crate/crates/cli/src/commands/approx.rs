use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::json;
use subspace_core::exactnum::{
    height_rational, height_vector_with_bound, is_s_integer, norm_at, product_formula_check_with_bound, valuation,
    Place, PlaceSet, Prime,
};
use subspace_core::transcendence::{
    abl_pipeline, approximation_gap, default_places, detect_common_plane, digits_of_rational, extract_abcb,
    periodic_value, subspace_product, AbcbPattern, SubspaceDatum,
};
use subspace_core::words::{Alphabet, Word};
use subspace_core::{Error, Result};

use crate::parse;
use crate::report::Builder;

const NOT_UNIQUE: &str = "rank <= 1: the plane is not unique";

#[derive(Debug, clap::Args)]
pub struct AblArgs {
    /// Target rational in (0, 1).
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    /// Prefix lengths N for the full pipeline (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub prefix_lens: Vec<usize>,
    /// Minimum |B| as a fraction of the prefix length.
    #[arg(long, default_value = "1/4")]
    pub eps: String,
    /// Print this many digits of alpha.
    #[arg(long)]
    pub digits: Option<usize>,
    /// Find an ABCB prefix in this digit word.
    #[arg(long)]
    pub extract: Option<String>,
    /// A pattern "A|B|C" (C may be omitted).
    #[arg(long)]
    pub pattern: Option<String>,
    /// Finite places of S for the subspace product (comma-separated primes).
    #[arg(long, value_delimiter = ',')]
    pub places: Option<Vec<u64>>,
    /// Integer vectors "x1,x2,x3;…" to test for a common plane.
    #[arg(long)]
    pub triples: Option<String>,
}

fn pattern(s: &str, base: u32) -> Result<AbcbPattern> {
    let parts: Vec<&str> = s.split('|').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(Error::Parse(format!("pattern {s:?}: expected A|B|C")));
    }
    let field = |t: &str| -> Result<Vec<u32>> {
        let d = parse::digits(t)?;
        match d.iter().find(|&&x| x >= base) {
            Some(&digit) => Err(Error::InvalidDigit { digit, base }),
            None => Ok(d),
        }
    };
    AbcbPattern::new(field(parts[0])?, field(parts[1])?, field(parts.get(2).copied().unwrap_or(""))?)
}

fn pattern_json(p: &AbcbPattern) -> serde_json::Value {
    let s = |d: &[u32]| d.iter().map(u32::to_string).collect::<String>();
    json!({ "A": s(&p.a), "B": s(&p.b), "C": s(&p.c), "r": p.r(), "s": p.s() })
}

fn triples(s: &str) -> Result<Vec<SubspaceDatum>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let items: Vec<String> = t.split(',').map(str::to_string).collect();
            let x = parse::bigints(&items)?;
            let x: [BigInt; 3] = x
                .try_into()
                .map_err(|v: Vec<BigInt>| Error::DimensionMismatch { expected: 3, got: v.len() })?;
            Ok(SubspaceDatum {
                prefix_len: 0,
                r: 0,
                s: 0,
                len_b: 0,
                height_bound: BigRational::one(),
                x,
                product_value: BigRational::one(),
                linear_form: BigRational::one(),
                m_zero_convention: false,
            })
        })
        .collect()
}

pub fn abl_cmd(args: &AblArgs, b: &mut Builder) -> Result<()> {
    b.input("base", args.base.to_string());
    b.input("eps", &args.eps);
    let eps = parse::rational(&args.eps)?;
    let alpha = match &args.alpha {
        Some(a) => {
            b.input("alpha", a);
            Some(parse::rational(a)?)
        }
        None => None,
    };
    let need_alpha = || Error::PreconditionFailed("--alpha is required".into());
    let mut any = false;

    if let Some(n) = args.digits {
        b.input("digits", n.to_string());
        let a = alpha.as_ref().ok_or_else(need_alpha)?;
        b.verdict("digits", digits_of_rational(a, args.base, n)?.to_string());
        any = true;
    }
    if let Some(w) = &args.extract {
        b.input("extract", w);
        let word = Word::parse_over(Alphabet::digits(args.base), w)?;
        let p = extract_abcb(&word, &eps)?;
        b.verdict("pattern", p.as_ref().map(pattern_json));
        b.criterion(p.is_some());
        any = true;
    }
    if let Some(s) = &args.pattern {
        b.input("pattern", s);
        let p = pattern(s, args.base)?;
        let (xi, m) = periodic_value(&p, args.base)?;
        b.verdict("pattern", pattern_json(&p));
        b.verdict("xi", xi.to_string());
        b.verdict("M", m.to_string());
        if let Some(a) = &alpha {
            let gap = approximation_gap(a, &p, args.base)?;
            b.criterion(gap.holds);
            b.verdict("gap", &gap);
            let places = match &args.places {
                Some(ps) => {
                    b.input("places", format!("{ps:?}"));
                    PlaceSet::from_primes(ps)?
                }
                None => default_places(args.base),
            };
            let datum = subspace_product(a, &p, args.base, &places, p.agreement_len())?;
            if datum.m_zero_convention {
                b.note("M=0 convention: finite-place factors of M taken as 1");
            }
            b.verdict("places", places.to_string());
            b.verdict("datum", &datum);
        }
        any = true;
    }
    if let Some(t) = &args.triples {
        b.input("triples", t);
        let plane = detect_common_plane(&triples(t)?)?;
        if plane.as_ref().is_some_and(|p| p.rank < 2) {
            b.note(NOT_UNIQUE);
        }
        b.criterion(plane.is_some());
        b.verdict("plane", plane);
        any = true;
    }
    if !args.prefix_lens.is_empty() || !any {
        let a = alpha.as_ref().ok_or_else(need_alpha)?;
        let lens = if args.prefix_lens.is_empty() { vec![40, 60, 80] } else { args.prefix_lens.clone() };
        b.input("prefix-lens", format!("{lens:?}"));
        let report = abl_pipeline(a, args.base, &lens, &eps)?;
        if report.rows.iter().any(|r| r.datum.m_zero_convention) {
            b.note("M=0 convention: finite-place factors of M taken as 1");
        }
        if report.plane.as_ref().is_some_and(|p| p.rank < 2) {
            b.note(NOT_UNIQUE);
        }
        b.criterion(report.plane.is_some());
        b.verdict("rows", &report.rows);
        b.verdict("plane", &report.plane);
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct HeightsArgs {
    /// A rational number.
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<String>,
    /// Primes at which to take the valuation (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub prime: Vec<u64>,
    /// Places at which to take the absolute value: primes or "inf".
    #[arg(long, value_delimiter = ',')]
    pub place: Vec<String>,
    /// Place set S for the S-integer test: primes, with "inf" implied.
    #[arg(long, value_delimiter = ',')]
    pub s_integer: Option<Vec<String>>,
    /// A projective vector (comma-separated rationals).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub vector: Option<Vec<String>>,
}

pub fn heights_cmd(args: &HeightsArgs, bound: u64, b: &mut Builder) -> Result<()> {
    b.input("factor-bound", bound.to_string());
    if let Some(v) = &args.value {
        b.input("value", v);
        let x = parse::rational(v)?;
        b.verdict("value", x.to_string());
        b.verdict("height", height_rational(&x).to_string());
        if x != BigRational::from_integer(0.into()) {
            b.verdict("productFormula", product_formula_check_with_bound(&x, bound)?.to_string());
        }
        if !args.prime.is_empty() {
            b.input("prime", format!("{:?}", args.prime));
        }
        for &p in &args.prime {
            b.verdict(format!("valuation({p})"), valuation(&x, Prime::new(p)?)?);
        }
        if !args.place.is_empty() {
            b.input("place", args.place.join(","));
        }
        for pl in &args.place {
            let place: Place = pl.parse()?;
            b.verdict(format!("norm({place})"), norm_at(&x, place).to_string());
        }
        if let Some(s) = &args.s_integer {
            b.input("s-integer", s.join(","));
            let places = PlaceSet::new(s.iter().map(|t| t.parse::<Place>()).collect::<Result<Vec<_>>>()?);
            let holds = is_s_integer(&x, &places);
            b.verdict(format!("sInteger({places})"), holds);
            b.criterion(holds);
        }
    } else if !args.prime.is_empty() || !args.place.is_empty() || args.s_integer.is_some() {
        return Err(Error::PreconditionFailed("--value is required".into()));
    }
    if let Some(v) = &args.vector {
        b.input("vector", v.join(","));
        let x = parse::rationals(v)?;
        b.verdict("vectorHeight", height_vector_with_bound(&x, bound)?.to_string());
    }
    if args.value.is_none() && args.vector.is_none() {
        return Err(Error::PreconditionFailed("give --value or --vector".into()));
    }
    Ok(())
}
