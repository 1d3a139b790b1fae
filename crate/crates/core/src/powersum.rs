//! Power sums `u(n) = b_1 a_1^n + … + b_m a_m^n` with positive rational roots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factorize, parse_rational, valuation, Prime, DEFAULT_FACTOR_BOUND};
use crate::linalg::integer_rank;

pub const DEFAULT_STEP_LIMIT: usize = 200;

/// Canonical power sum: distinct positive roots in decreasing order, nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "PowerSumJson", into = "PowerSumJson")]
pub struct PowerSum {
    terms: Vec<(BigRational, BigRational)>,
}

impl PowerSum {
    pub fn zero() -> Self {
        PowerSum { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, BigRational::one())
    }

    /// `c · a^n`; `a` must be positive.
    pub fn monomial(c: BigRational, a: BigRational) -> Self {
        Self::canonicalize(vec![(c, a)]).expect("positive root")
    }

    /// Merges equal roots, drops zero coefficients, sorts roots descending.
    pub fn canonicalize(terms: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let mut acc: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for (c, a) in terms {
            if !a.is_positive() {
                return Err(Error::NonpositiveRoot(a.to_string()));
            }
            *acc.entry(a).or_insert_with(BigRational::zero) += c;
        }
        Ok(Self::from_map(acc))
    }

    fn from_map(acc: BTreeMap<BigRational, BigRational>) -> Self {
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).map(|(a, c)| (c, a)).collect();
        PowerSum { terms }
    }

    /// `(coefficient, root)` pairs, largest root first.
    pub fn terms(&self) -> &[(BigRational, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = &BigRational> {
        self.terms.iter().map(|(_, a)| a)
    }

    pub fn eval(&self, n: i64) -> BigRational {
        let e = i32::try_from(n).expect("exponent fits in i32");
        self.terms.iter().map(|(c, a)| c * num_traits::Pow::pow(a, e)).sum()
    }

    pub fn pow(&self, q: u32) -> PowerSum {
        let mut out = PowerSum::one();
        for _ in 0..q {
            out = &out * self;
        }
        out
    }

    /// `n ↦ u(Qn + R)`.
    pub fn progression(&self, big_q: u32, big_r: i64) -> PowerSum {
        let r = i32::try_from(big_r).expect("offset fits in i32");
        let terms = self
            .terms
            .iter()
            .map(|(c, a)| (c * num_traits::Pow::pow(a, r), num_traits::pow(a.clone(), big_q as usize)))
            .collect();
        PowerSum::canonicalize(terms).expect("powers of positive roots are positive")
    }

    /// `u(n) · a^{−(n+r)}`.
    /// `c a^n · self`, for `c ≠ 0` and `a > 0`.
    fn scaled_by(&self, c: &BigRational, a: &BigRational) -> PowerSum {
        PowerSum { terms: self.terms.iter().map(|(ci, ai)| (ci * c, ai * a)).collect() }
    }

    fn divide_by_power(&self, a: &BigRational, r: i64) -> PowerSum {
        let ar = num_traits::Pow::pow(a, i32::try_from(r).expect("small r"));
        let terms = self.terms.iter().map(|(c, b)| (c / &ar, b / a)).collect();
        PowerSum::canonicalize(terms).expect("positive roots")
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, a)| format!("{c}*({a})^n")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Inline form `coeff:root,coeff:root,…`; an empty string or `0` is the zero sum.
impl std::str::FromStr for PowerSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(PowerSum::zero());
        }
        let terms = s
            .split(',')
            .map(|t| {
                let (c, a) = t
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("term {t:?} is not coeff:root")))?;
                Ok((parse_rational(c)?, parse_rational(a)?))
            })
            .collect::<Result<Vec<_>>>()?;
        PowerSum::canonicalize(terms)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    fn parse(&self) -> Result<BigRational> {
        match self {
            RatRepr::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            RatRepr::Str(s) => parse_rational(s),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: RatRepr,
    root: RatRepr,
}

#[derive(Serialize, Deserialize)]
struct PowerSumJson {
    terms: Vec<TermJson>,
}

impl TryFrom<PowerSumJson> for PowerSum {
    type Error = Error;

    fn try_from(j: PowerSumJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.coeff.parse()?, t.root.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        PowerSum::canonicalize(terms)
    }
}

impl From<PowerSum> for PowerSumJson {
    fn from(u: PowerSum) -> Self {
        let terms = u
            .terms
            .into_iter()
            .map(|(c, a)| TermJson { coeff: RatRepr::Str(c.to_string()), root: RatRepr::Str(a.to_string()) })
            .collect();
        PowerSumJson { terms }
    }
}

impl Add<&PowerSum> for &PowerSum {
    type Output = PowerSum;
    fn add(self, rhs: &PowerSum) -> PowerSum {
        let mut acc: BTreeMap<BigRational, BigRational> = self.terms.iter().map(|(c, a)| (a.clone(), c.clone())).collect();
        for (c, a) in &rhs.terms {
            *acc.entry(a.clone()).or_insert_with(BigRational::zero) += c;
        }
        PowerSum::from_map(acc)
    }
}

impl Neg for &PowerSum {
    type Output = PowerSum;
    fn neg(self) -> PowerSum {
        PowerSum { terms: self.terms.iter().map(|(c, a)| (-c, a.clone())).collect() }
    }
}

impl Sub<&PowerSum> for &PowerSum {
    type Output = PowerSum;
    fn sub(self, rhs: &PowerSum) -> PowerSum {
        self + &(-rhs)
    }
}

impl Mul<&PowerSum> for &PowerSum {
    type Output = PowerSum;
    fn mul(self, rhs: &PowerSum) -> PowerSum {
        let mut acc: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for (c1, a1) in &self.terms {
            for (c2, a2) in &rhs.terms {
                *acc.entry(a1 * a2).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        PowerSum::from_map(acc)
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for PowerSum {
            type Output = PowerSum;
            fn $m(self, rhs: PowerSum) -> PowerSum {
                (&self).$m(&rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for PowerSum {
    type Output = PowerSum;
    fn neg(self) -> PowerSum {
        -&self
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn int_nth_root_exact(n: &BigInt, q: u32) -> Option<BigInt> {
    if n.is_negative() {
        if q % 2 == 0 {
            return None;
        }
        return int_nth_root_exact(&-n, q).map(|r| -r);
    }
    let r = n.nth_root(q);
    (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
}

/// Real rational `q`-th root of `x`, if any.
pub fn rational_nth_root(x: &BigRational, q: u32) -> Option<BigRational> {
    let n = int_nth_root_exact(x.numer(), q)?;
    let d = int_nth_root_exact(x.denom(), q)?;
    Some(BigRational::new(n, d))
}

pub fn qth_root(u: &PowerSum, q: u32) -> Result<Option<PowerSum>> {
    qth_root_with_limit(u, q, DEFAULT_STEP_LIMIT)
}

/// Greedy peeling: the largest root of `v` is forced by the largest root of `u`;
/// each further term of `v` is forced by the largest uncancelled term of `u − v^q`.
///
/// For even `q` the result has positive leading coefficient. For odd `q` the
/// leading coefficient is the real root of `u`'s, which may be negative.
pub fn qth_root_with_limit(u: &PowerSum, q: u32, step_limit: usize) -> Result<Option<PowerSum>> {
    if q < 2 {
        return Err(Error::PreconditionFailed(format!("q = {q} < 2")));
    }
    let Some(((c0, a0), (_, a_min))) = u.terms.first().zip(u.terms.last()) else {
        return Err(Error::ZeroInput);
    };
    let alpha0 = rational_nth_root(a0, q)
        .ok_or_else(|| Error::IrrationalObstruction(format!("root {a0} has no rational {q}-th root")))?;
    let gamma0 = rational_nth_root(c0, q)
        .ok_or_else(|| Error::IrrationalObstruction(format!("coefficient {c0} has no rational {q}-th root")))?;

    // the smallest term of v^q cannot cancel, so it must be a q-th power too
    let c_min = &u.terms.last().expect("nonempty").0;
    if rational_nth_root(a_min, q).is_none() || rational_nth_root(c_min, q).is_none() {
        return Ok(None);
    }

    let qq = BigRational::from_integer(BigInt::from(q));
    let alpha0_pow = num_traits::pow(alpha0.clone(), q as usize - 1);
    let denom = &qq * num_traits::pow(gamma0.clone(), q as usize - 1);

    let bounds = ExponentBox::of(u);

    // powers[j] = v^j for j < q, kept up to date as terms are added
    let first = PowerSum::monomial(gamma0.clone(), alpha0.clone());
    let mut powers: Vec<PowerSum> = (0..q).map(|j| first.pow(j)).collect();
    let mut residual = u - &first.pow(q);
    let mut v_terms = vec![(gamma0, alpha0)];
    for _ in 0..step_limit {
        let Some((c, a)) = residual.terms.first() else {
            return Ok(Some(PowerSum { terms: v_terms }));
        };
        let alpha = a / &alpha0_pow;
        let last = &v_terms.last().expect("nonempty").1;
        if alpha >= *last
            || num_traits::pow(alpha.clone(), q as usize) < *a_min
            || !bounds.as_ref().is_none_or(|b| b.admits(&alpha, q))
        {
            return Ok(None);
        }
        let gamma = c / &denom;
        // (v + t)^j = Σ_k C(j,k) v^{j-k} t^k with t = γ α^n
        let t_pow: Vec<(BigRational, BigRational)> = (0..=q as usize)
            .map(|k| (num_traits::pow(gamma.clone(), k), num_traits::pow(alpha.clone(), k)))
            .collect();
        let expand = |j: usize, from: usize| -> PowerSum {
            (from..=j).fold(PowerSum::zero(), |acc, k| {
                let coeff = &t_pow[k].0 * BigRational::from_integer(binomial(j, k));
                acc + powers[j - k].scaled_by(&coeff, &t_pow[k].1)
            })
        };
        residual = &residual - &expand(q as usize, 1);
        powers = (0..q as usize).map(|j| expand(j, 0)).collect();
        v_terms.push((gamma, alpha));
    }
    Err(Error::StepLimit(step_limit))
}

/// Per-prime exponent ranges over the roots of `u`. Reading roots as monomials
/// in one variable per prime, Newton polytopes multiply, so every root `α` of a
/// `q`-th root of `u` has `q·v_p(α)` inside these ranges and no other primes.
struct ExponentBox(Vec<(Prime, i64, i64)>);

impl ExponentBox {
    /// `None` when some root cannot be factored within the default bound.
    fn of(u: &PowerSum) -> Option<Self> {
        let maps = u
            .terms
            .iter()
            .map(|(_, a)| exponent_map(a, DEFAULT_FACTOR_BOUND).ok())
            .collect::<Option<Vec<_>>>()?;
        let primes: BTreeSet<u64> = maps.iter().flat_map(|m| m.keys().copied()).collect();
        let ranges = primes
            .into_iter()
            .map(|p| {
                let es: Vec<i64> = maps.iter().map(|m| m.get(&p).copied().unwrap_or(0)).collect();
                let (lo, hi) = (*es.iter().min().expect("nonempty"), *es.iter().max().expect("nonempty"));
                (Prime::new(p).expect("factor is prime"), lo, hi)
            })
            .collect();
        Some(ExponentBox(ranges))
    }

    fn admits(&self, alpha: &BigRational, q: u32) -> bool {
        let mut rest = alpha.clone();
        for &(p, lo, hi) in &self.0 {
            let e = valuation(alpha, p).expect("roots are nonzero");
            if !(lo..=hi).contains(&(e * i64::from(q))) {
                return false;
            }
            let pe = num_traits::pow(BigRational::from_integer(BigInt::from(p.get())), e.unsigned_abs() as usize);
            if e >= 0 {
                rest /= pe;
            } else {
                rest *= pe;
            }
        }
        rest.is_one()
    }
}

/// `u(n) = a^{n+r} v(n)^q` with `0 ≤ r < q`, trying `a = 1` and then each root of `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PurePowerForm {
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub a: BigRational,
    pub r: u32,
    pub v: PowerSum,
}

pub fn pure_power_form(u: &PowerSum, q: u32) -> Result<Option<PurePowerForm>> {
    if u.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut candidates = vec![BigRational::one()];
    candidates.extend(u.roots().filter(|a| !a.is_one()).cloned());
    for a in candidates {
        for r in 0..q {
            let w = u.divide_by_power(&a, r as i64);
            match qth_root(&w, q) {
                Ok(Some(v)) => return Ok(Some(PurePowerForm { a, r, v })),
                Ok(None) | Err(Error::IrrationalObstruction(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}

/// `u(Qn + R) = w(n)^q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PisotDecomposition {
    #[serde(rename = "Q")]
    pub big_q: u32,
    #[serde(rename = "R")]
    pub big_r: u32,
    pub w: PowerSum,
}

pub fn pisot_decompose(u: &PowerSum, q: u32) -> Result<Option<PisotDecomposition>> {
    pisot_decompose_over(u, q, &[q, 2 * q])
}

/// Tries each `Q` in order and every `R ∈ [0, Q)`; the first exact root wins.
pub fn pisot_decompose_over(u: &PowerSum, q: u32, qs: &[u32]) -> Result<Option<PisotDecomposition>> {
    if u.is_zero() {
        return Err(Error::ZeroInput);
    }
    for &big_q in qs {
        for big_r in 0..big_q {
            let p = u.progression(big_q, big_r as i64);
            match qth_root(&p, q) {
                Ok(Some(w)) => return Ok(Some(PisotDecomposition { big_q, big_r, w })),
                Ok(None) | Err(Error::IrrationalObstruction(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}

fn exponent_map(x: &BigRational, bound: u64) -> Result<BTreeMap<u64, i64>> {
    let mut out = BTreeMap::new();
    for (part, sign) in [(x.numer(), 1i64), (x.denom(), -1i64)] {
        let mag: BigUint = part.magnitude().clone();
        for (p, e) in factorize(&mag, bound)? {
            *out.entry(p).or_insert(0) += sign * e as i64;
        }
    }
    Ok(out)
}

pub fn roots_multiplicatively_independent(roots: &[BigRational]) -> Result<bool> {
    roots_multiplicatively_independent_with_bound(roots, DEFAULT_FACTOR_BOUND)
}

/// Rank of the exponent matrix over the primes involved equals the number of roots.
pub fn roots_multiplicatively_independent_with_bound(roots: &[BigRational], bound: u64) -> Result<bool> {
    if let Some(a) = roots.iter().find(|a| !a.is_positive()) {
        return Err(Error::NonpositiveRoot(a.to_string()));
    }
    let maps = roots.iter().map(|a| exponent_map(a, bound)).collect::<Result<Vec<_>>>()?;
    let primes: Vec<u64> = {
        let mut ps: Vec<u64> = maps.iter().flat_map(|m| m.keys().copied()).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    };
    let matrix: Vec<Vec<BigInt>> = maps
        .iter()
        .map(|m| primes.iter().map(|p| BigInt::from(*m.get(p).unwrap_or(&0))).collect())
        .collect();
    Ok(integer_rank(&matrix) == roots.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertVerdict {
    pub candidate: bool,
    pub reason: String,
}

pub fn is_universal_hilbert_candidate(u: &PowerSum) -> Result<HilbertVerdict> {
    is_universal_hilbert_candidate_with_bound(u, DEFAULT_FACTOR_BOUND)
}

pub fn is_universal_hilbert_candidate_with_bound(u: &PowerSum, bound: u64) -> Result<HilbertVerdict> {
    if u.len() < 2 {
        return Ok(HilbertVerdict { candidate: false, reason: format!("m = {} < 2", u.len()) });
    }
    let roots: Vec<BigRational> = u.roots().cloned().collect();
    if roots_multiplicatively_independent_with_bound(&roots, bound)? {
        Ok(HilbertVerdict { candidate: true, reason: "roots multiplicatively independent".into() })
    } else {
        Ok(HilbertVerdict { candidate: false, reason: "roots multiplicatively dependent".into() })
    }
}

/// `re + im·i` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn norm_squared(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi`, with `i` alone meaning `1i` and rationals as `p/q`.
impl std::str::FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("gaussian rational {s:?}"));
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&t)?));
        };
        // split at the last sign that is not the leading one
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            x => parse_rational(x.strip_prefix('+').unwrap_or(x)).map_err(|_| bad())?,
        };
        let re = if re.is_empty() { BigRational::zero() } else { parse_rational(re).map_err(|_| bad())? };
        Ok(Self::new(re, im))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominantRoot {
    pub dominant: bool,
    /// The unique extremal root, when there is one.
    pub witness: Option<GaussianRational>,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub extremal_norm_squared: BigRational,
}

/// Whether a unique root attains the largest (upper) or smallest (lower) modulus.
pub fn has_dominant_root(roots: &[GaussianRational], direction: Direction) -> Result<DominantRoot> {
    if roots.is_empty() {
        return Err(Error::ZeroInput);
    }
    if roots.iter().any(|r| r.re.is_zero() && r.im.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let norms: Vec<BigRational> = roots.iter().map(GaussianRational::norm_squared).collect();
    let best = match direction {
        Direction::Upper => norms.iter().max(),
        Direction::Lower => norms.iter().min(),
    }
    .expect("nonempty")
    .clone();
    let hits: Vec<usize> = (0..roots.len()).filter(|&i| norms[i] == best).collect();
    let dominant = hits.len() == 1;
    Ok(DominantRoot {
        dominant,
        witness: dominant.then(|| roots[hits[0]].clone()),
        extremal_norm_squared: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn ps(s: &str) -> PowerSum {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms() {
        let u = PowerSum::canonicalize(vec![(int(2), int(3)), (int(1), int(3)), (int(0), int(5))]).unwrap();
        assert_eq!(u.terms(), &[(int(3), int(3))]);
        assert!(PowerSum::canonicalize(vec![]).unwrap().is_zero());
        let u = PowerSum::canonicalize(vec![(int(1), int(2)), (int(1), int(4))]).unwrap();
        assert_eq!(u.terms(), &[(int(1), int(4)), (int(1), int(2))]);
        assert!(matches!(
            PowerSum::canonicalize(vec![(int(1), int(-2))]),
            Err(Error::NonpositiveRoot(_))
        ));
    }

    #[test]
    fn evaluation() {
        assert_eq!(ps("1:4,2:2,1:1").eval(3), int(81));
        assert_eq!(PowerSum::zero().eval(7), int(0));
        assert_eq!(ps("1:2").eval(-2), rat(1, 4));
    }

    #[test]
    fn ring_operations() {
        assert_eq!(ps("1:2,1:1").pow(2), ps("1:4,2:2,1:1"));
        assert!((&ps("1:2,1:1") * &PowerSum::zero()).is_zero());
        assert_eq!(ps("3:5,1:2").pow(0), PowerSum::one());
        assert_eq!(&ps("1:2") - &ps("1:2"), PowerSum::zero());
    }

    #[test]
    fn progressions() {
        assert_eq!(ps("1:2").progression(2, 0), ps("1:4"));
        assert_eq!(ps("1:2,1:3").progression(2, 1), ps("2:4,3:9"));
        let u = ps("5/3:7,-1:2");
        assert_eq!(u.progression(1, 0), u);
    }

    #[test]
    fn roots() {
        assert_eq!(qth_root(&ps("1:4,2:2,1:1"), 2).unwrap(), Some(ps("1:2,1:1")));
        assert_eq!(qth_root(&ps("1:4"), 2).unwrap(), Some(ps("1:2")));
        assert!(matches!(qth_root(&ps("1:2"), 2), Err(Error::IrrationalObstruction(_))));
        assert_eq!(qth_root(&ps("1:4,1:1"), 2).unwrap(), None);
        assert_eq!(qth_root(&PowerSum::zero(), 2), Err(Error::ZeroInput));
        // odd q keeps the sign of the real root
        let v = ps("-2:3,1:1");
        assert_eq!(qth_root(&v.pow(3), 3).unwrap(), Some(v));
    }

    #[test]
    fn pisot() {
        let d = pisot_decompose(&ps("1:2"), 2).unwrap().unwrap();
        assert_eq!((d.big_q, d.big_r, d.w), (2, 0, ps("1:2")));
        let d = pisot_decompose(&ps("1:4,2:2,1:1"), 2).unwrap().unwrap();
        assert_eq!((d.big_q, d.big_r, d.w), (2, 0, ps("1:4,1:1")));
        assert_eq!(pisot_decompose(&ps("1:2,1:3"), 2).unwrap(), None);
    }

    #[test]
    fn pure_power() {
        // 2^n · (3^n + 1)^2 = 18^n + 2·6^n + 2^n
        let u = ps("1:18,2:6,1:2");
        let f = pure_power_form(&u, 2).unwrap().unwrap();
        // the largest root is tried first: 18^n · (1 + 3^{−n})^2
        assert_eq!((f.a.clone(), f.r), (int(18), 0));
        assert_eq!(f.v, ps("1:1,1:1/3"));
        let back = &PowerSum::monomial(int(1), f.a) * &f.v.pow(2);
        assert_eq!(back, u);
    }

    #[test]
    fn independence() {
        let r = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert!(roots_multiplicatively_independent(&r(&[2, 3])).unwrap());
        assert!(!roots_multiplicatively_independent(&r(&[2, 4])).unwrap());
        assert!(roots_multiplicatively_independent(&r(&[6, 10, 15])).unwrap());
        assert!(!roots_multiplicatively_independent(&[rat(2, 3), rat(3, 2)]).unwrap());
        assert!(!roots_multiplicatively_independent(&r(&[1, 5])).unwrap());
    }

    #[test]
    fn hilbert() {
        assert!(is_universal_hilbert_candidate(&ps("1:2,1:3")).unwrap().candidate);
        assert!(!is_universal_hilbert_candidate(&ps("1:2,1:4")).unwrap().candidate);
        assert!(!is_universal_hilbert_candidate(&ps("1:5")).unwrap().candidate);
    }

    #[test]
    fn dominance() {
        let g = |s: &str| s.parse::<GaussianRational>().unwrap();
        let four = [g("8+i"), g("8-i"), g("2+i"), g("2-i")];
        assert!(!has_dominant_root(&four, Direction::Upper).unwrap().dominant);
        assert!(!has_dominant_root(&four, Direction::Lower).unwrap().dominant);
        let d = has_dominant_root(&[g("3"), g("2"), g("1")], Direction::Upper).unwrap();
        assert_eq!(d.witness, Some(g("3")));
        let d = has_dominant_root(&[g("2+i"), g("1")], Direction::Lower).unwrap();
        assert_eq!(d.witness, Some(g("1")));
        assert_eq!(g("2+i").norm_squared(), int(5));
    }

    #[test]
    fn gaussian_parsing() {
        let g = |s: &str| s.parse::<GaussianRational>().unwrap();
        assert_eq!(g("8-i"), GaussianRational::new(int(8), int(-1)));
        assert_eq!(g("-i"), GaussianRational::new(int(0), int(-1)));
        assert_eq!(g("1/2+3/4i"), GaussianRational::new(rat(1, 2), rat(3, 4)));
        assert_eq!(g("-5"), GaussianRational::real(int(-5)));
        assert_eq!(g("2i").to_string(), "0+2i");
    }

    #[test]
    fn json_round_trip() {
        let u = ps("1/2:3,-7:1/5");
        let j = serde_json::to_string(&u).unwrap();
        assert_eq!(serde_json::from_str::<PowerSum>(&j).unwrap(), u);
        let v: PowerSum = serde_json::from_str(r#"{"terms":[{"coeff":1,"root":"4"},{"coeff":"2","root":2}]}"#).unwrap();
        assert_eq!(v, ps("1:4,2:2"));
    }
}
