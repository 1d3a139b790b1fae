//! Periodic approximants read off a digit prefix, and the product of linear
//! forms they feed.
//!
//! A prefix `ABCB` of the base-`b` expansion of `α` yields the rational `ξ`
//! with expansion `A(BC)^∞`, i.e. `ξ = M / (b^r (b^s − 1))` with `r = |A|`,
//! `s = |BC|`. The integer vector `x = (b^{r+s}, b^r, M)` makes the linear form
//! `α x_1 − α x_2 − x_3 = b^r (b^s − 1)(α − ξ)` small. Collecting such vectors
//! for several prefix lengths and finding the plane they span recovers `α`
//! when it is rational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{norm_at, Place, PlaceSet, Prime};
use crate::linalg;
use crate::words::{Alphabet, Word};

/// First `len` base-`b` digits of `ξ ∈ (0,1)`; terminating expansions continue with zeros.
pub fn digits_of_rational(xi: &BigRational, base: u32, len: usize) -> Result<Word> {
    if base < 2 {
        return Err(Error::OutOfRange(format!("base {base} < 2")));
    }
    if !(xi.is_positive() && *xi < BigRational::one()) {
        return Err(Error::OutOfRange(format!("{xi} is not in (0,1)")));
    }
    let b = BigInt::from(base);
    let mut num = xi.numer().clone();
    let den = xi.denom();
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        num *= &b;
        let (d, rem) = num.div_rem(den);
        digits.push(d.to_u32().expect("digit below base"));
        num = rem;
    }
    Word::new(Alphabet::digits(base), digits)
}

/// A prefix `A B C B` of a digit word; `C` and `A` may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbcbPattern {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

impl AbcbPattern {
    pub fn new(a: Vec<u32>, b: Vec<u32>, c: Vec<u32>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::PreconditionFailed("B must be nonempty".into()));
        }
        Ok(AbcbPattern { a, b, c })
    }

    /// `|A|`.
    pub fn r(&self) -> usize {
        self.a.len()
    }

    /// `|BC|`, the period.
    pub fn s(&self) -> usize {
        self.b.len() + self.c.len()
    }

    pub fn len_b(&self) -> usize {
        self.b.len()
    }

    /// `|ABCB| = r + s + |B|`: the number of leading digits `ξ` shares with the word.
    pub fn agreement_len(&self) -> usize {
        self.r() + self.s() + self.len_b()
    }

    /// The digits `A B C B`.
    pub fn expanded(&self) -> Vec<u32> {
        [&self.a[..], &self.b, &self.c, &self.b].concat()
    }
}

fn digit_values(w: &Word) -> Result<Vec<u32>> {
    w.letters()
        .into_iter()
        .map(|l| l.parse::<u32>().map_err(|_| Error::UnknownSymbol(l.to_string())))
        .collect()
}

/// `z[j]` = length of the longest common prefix of `s` and `s[j..]`.
fn z_function(s: &[u32]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// Finds an `ABCB` prefix of the digit word with `|B| ≥ εN`, `N = |w|`.
///
/// Prefers the longest `B`, then the shortest `A`, then the shortest `C`.
pub fn extract_abcb(w: &Word, eps: &BigRational) -> Result<Option<AbcbPattern>> {
    let s = digit_values(w)?;
    let n = s.len();
    let min_b = (eps * BigRational::from_integer(BigInt::from(n)))
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(1);
    if 2 * min_b > n {
        return Ok(None);
    }
    let zs: Vec<Vec<usize>> = (0..n).map(|r| z_function(&s[r..])).collect();
    for len_b in (min_b..=n / 2).rev() {
        for r in 0..=n - 2 * len_b {
            let z = &zs[r];
            for len_c in 0..=n - r - 2 * len_b {
                if z[len_b + len_c] >= len_b {
                    return Ok(Some(AbcbPattern {
                        a: s[..r].to_vec(),
                        b: s[r..r + len_b].to_vec(),
                        c: s[r + len_b..r + len_b + len_c].to_vec(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn digits_to_int(digits: &[u32], base: &BigInt) -> BigInt {
    digits.iter().fold(BigInt::zero(), |acc, &d| acc * base + BigInt::from(d))
}

/// `(ξ, M)` with `ξ = 0.A(BC)(BC)… = M / (b^r (b^s − 1))`.
pub fn periodic_value(p: &AbcbPattern, base: u32) -> Result<(BigRational, BigInt)> {
    if let Some(&d) = p.expanded().iter().find(|&&d| d >= base) {
        return Err(Error::InvalidDigit { digit: d, base });
    }
    if p.b.iter().chain(&p.c).all(|&d| d == base - 1) {
        return Err(Error::DegeneratePattern);
    }
    let b = BigInt::from(base);
    let bs_minus_1: BigInt = num_traits::pow(b.clone(), p.s()) - 1;
    let a_val = digits_to_int(&p.a, &b);
    let period: Vec<u32> = [&p.b[..], &p.c].concat();
    let m: BigInt = a_val * &bs_minus_1 + digits_to_int(&period, &b);
    let xi = BigRational::new(m.clone(), num_traits::pow(b, p.r()) * bs_minus_1);
    Ok((xi, m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproximationGap {
    /// `|α − ξ|`.
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub gap: BigRational,
    /// `b^{−(r+s+|B|)}`.
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub bound: BigRational,
    pub holds: bool,
}

fn check_prefix(alpha: &BigRational, p: &AbcbPattern, base: u32) -> Result<()> {
    let expect = p.expanded();
    let got = digits_of_rational(alpha, base, expect.len())?;
    if got.symbols() != expect.as_slice() {
        return Err(Error::PatternMismatch);
    }
    Ok(())
}

pub fn approximation_gap(alpha: &BigRational, p: &AbcbPattern, base: u32) -> Result<ApproximationGap> {
    check_prefix(alpha, p, base)?;
    let (xi, _) = periodic_value(p, base)?;
    let gap = (alpha - &xi).abs();
    let bound = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(base), p.agreement_len()));
    let holds = gap <= bound;
    Ok(ApproximationGap { gap, bound, holds })
}

/// Inputs and value of the product `∏_{p∈S} ∏_i |L_{i,p}(x)|_p` at one prefix length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceDatum {
    pub prefix_len: usize,
    pub r: usize,
    pub s: usize,
    pub len_b: usize,
    /// `(b^{r+s}, b^r, M)`.
    #[serde(serialize_with = "crate::exactnum::as_string::vec")]
    pub x: [BigInt; 3],
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub product_value: BigRational,
    /// `‖x‖ = b^{r+s}`.
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub height_bound: BigRational,
    /// `|α x_1 − α x_2 − x_3|`, the archimedean factor.
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub linear_form: BigRational,
    /// Set when `M = 0` and the finite-place factors of `x_3` were taken as 1.
    pub m_zero_convention: bool,
}

/// `{∞} ∪ {p | base}`.
pub fn default_places(base: u32) -> PlaceSet {
    let mut ps = Vec::new();
    let mut m = base;
    let mut d = 2;
    while m > 1 {
        if m % d == 0 {
            ps.push(Place::Finite(Prime::new(d as u64).expect("smallest divisor is prime")));
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    PlaceSet::new(ps)
}

/// Evaluates the double product for `x = (b^{r+s}, b^r, M)` with
/// `L_{3,∞}(x) = α x_1 − α x_2 − x_3` and coordinate forms elsewhere.
pub fn subspace_product(
    alpha: &BigRational,
    p: &AbcbPattern,
    base: u32,
    places: &PlaceSet,
    prefix_len: usize,
) -> Result<SubspaceDatum> {
    let needed = default_places(base);
    if needed.finite_primes().any(|q| !places.contains_prime(q)) {
        return Err(Error::BadPlaceSet(base));
    }
    let (_, m) = periodic_value(p, base)?;
    let b = BigInt::from(base);
    let x1 = num_traits::pow(b.clone(), p.r() + p.s());
    let x2 = num_traits::pow(b, p.r());
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let linear_form = (alpha * q(&x1) - alpha * q(&x2) - q(&m)).abs();
    let m_zero = m.is_zero();

    let mut product = BigRational::one();
    for place in places.iter() {
        match place {
            Place::Infinite => {
                product *= q(&x1) * q(&x2) * &linear_form;
            }
            Place::Finite(_) => {
                product *= norm_at(&q(&x1), *place) * norm_at(&q(&x2), *place);
                if !m_zero {
                    product *= norm_at(&q(&m), *place);
                }
            }
        }
    }
    Ok(SubspaceDatum {
        prefix_len,
        r: p.r(),
        s: p.s(),
        len_b: p.len_b(),
        height_bound: q(&x1),
        x: [x1, x2, m],
        product_value: product,
        linear_form,
        m_zero_convention: m_zero,
    })
}

/// `μ x_1 + λ x_2 + ν x_3 = 0` for every vector, i.e. `λ b^r + μ b^{r+s} + ν M = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plane {
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub lambda: BigRational,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub mu: BigRational,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub nu: BigRational,
    /// `−μ/ν` when `ν ≠ 0`.
    #[serde(serialize_with = "crate::exactnum::as_string::option")]
    pub alpha_hat: Option<BigRational>,
    pub rank: usize,
}

/// Plane through the origin containing every `x`, if the vectors have rank ≤ 2.
pub fn detect_common_plane(data: &[SubspaceDatum]) -> Result<Option<Plane>> {
    if data.len() < 3 {
        return Err(Error::PreconditionFailed(format!("need at least 3 data points, got {}", data.len())));
    }
    let rows: Vec<linalg::Vector> = data
        .iter()
        .map(|d| d.x.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let rank = linalg::rank(&rows);
    if rank == 3 {
        return Ok(None);
    }
    let kernel = linalg::nullspace(&rows, 3);
    // with a 2-dimensional kernel, prefer a plane with ν ≠ 0
    let mut v = kernel
        .iter()
        .rev()
        .find(|k| !k[2].is_zero())
        .unwrap_or(&kernel[0])
        .clone();
    let scale = if !v[2].is_zero() {
        v[2].clone()
    } else {
        v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(BigRational::one)
    };
    for c in v.iter_mut() {
        *c /= &scale;
    }
    let (mu, lambda, nu) = (v[0].clone(), v[1].clone(), v[2].clone());
    let alpha_hat = (!nu.is_zero()).then(|| -&mu / &nu);
    Ok(Some(Plane { lambda, mu, nu, alpha_hat, rank }))
}

/// One row of the approximation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AblRow {
    pub pattern: AbcbPattern,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub xi: BigRational,
    pub gap: ApproximationGap,
    pub datum: SubspaceDatum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AblReport {
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub alpha: BigRational,
    pub base: u32,
    pub rows: Vec<AblRow>,
    pub plane: Option<Plane>,
}

/// Runs extraction, approximation, and the product for each prefix length,
/// then looks for a common plane. Prefix lengths without a pattern are skipped.
pub fn abl_pipeline(alpha: &BigRational, base: u32, prefix_lens: &[usize], eps: &BigRational) -> Result<AblReport> {
    let places = default_places(base);
    let mut rows = Vec::new();
    for &len in prefix_lens {
        let w = digits_of_rational(alpha, base, len)?;
        let Some(pattern) = extract_abcb(&w, eps)? else {
            continue;
        };
        let (xi, _) = periodic_value(&pattern, base)?;
        let gap = approximation_gap(alpha, &pattern, base)?;
        let datum = subspace_product(alpha, &pattern, base, &places, len)?;
        rows.push(AblRow { pattern, xi, gap, datum });
    }
    let plane = if rows.len() >= 3 {
        let data: Vec<SubspaceDatum> = rows.iter().map(|r| r.datum.clone()).collect();
        detect_common_plane(&data)?
    } else {
        None
    };
    Ok(AblReport { alpha: alpha.clone(), base, rows, plane })
}
