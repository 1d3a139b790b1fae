//! Exact rationals, p-adic valuations and norms, heights, and S-integrality.
//!
//! Everything here returns exact values. Norms at a finite place are powers of
//! the prime as rationals; the archimedean norm is the ordinary absolute value.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Default trial-division bound; cofactors below its square are certified prime.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s:?}: zero denominator")));
        }
        Ok(Rational::new(n, d))
    } else {
        BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A rational prime, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p.to_string()))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// An absolute value on Q: one per prime, plus the ordinary one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(Prime),
    Infinite,
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        Prime::new(p).map(Place::Finite)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{}", p.0),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinite),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("place {s:?}")))?;
                Place::finite(p)
            }
        }
    }
}

/// Finite set of places, always containing the infinite place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSet {
    places: BTreeSet<Place>,
}

impl PlaceSet {
    pub fn new(places: impl IntoIterator<Item = Place>) -> Self {
        let mut places: BTreeSet<Place> = places.into_iter().collect();
        places.insert(Place::Infinite);
        PlaceSet { places }
    }

    /// `{inf} ∪ {p_1, …}`.
    pub fn from_primes(primes: &[u64]) -> Result<Self> {
        let ps = primes
            .iter()
            .map(|&p| Place::finite(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ps))
    }

    pub fn contains(&self, place: &Place) -> bool {
        self.places.contains(place)
    }

    pub fn contains_prime(&self, p: u64) -> bool {
        self.places.iter().any(|pl| matches!(pl, Place::Finite(q) if q.0 == p))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.places.iter()
    }

    pub fn finite_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.places.iter().filter_map(|pl| match pl {
            Place::Finite(p) => Some(p.0),
            Place::Infinite => None,
        })
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.places.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Trial-division factorization of `n ≥ 1` into `(prime, exponent)` pairs.
///
/// Fails with [`Error::FactorizationBound`] when a cofactor remains that is
/// too large to be certified prime by division up to `bound`.
pub fn factorize(n: &BigUint, bound: u64) -> Result<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut rest = n.clone();
    let mut d: u64 = 2;
    while d <= bound {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if !rest.is_one() {
        let d = BigUint::from(d);
        if &d * &d > rest {
            let p = rest
                .to_u64()
                .ok_or_else(|| Error::FactorizationBound(n.to_string()))?;
            out.push((p, 1));
        } else {
            return Err(Error::FactorizationBound(n.to_string()));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Primes dividing the numerator or denominator of `a`.
pub fn support_primes(a: &Rational, bound: u64) -> Result<Vec<u64>> {
    let mut ps: BTreeSet<u64> = BTreeSet::new();
    for part in [a.numer(), a.denom()] {
        let m = part.magnitude();
        if !m.is_zero() {
            ps.extend(factorize(m, bound)?.into_iter().map(|(p, _)| p));
        }
    }
    Ok(ps.into_iter().collect())
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(a)`: the exponent of `p` in `a = p^v · (unit at p)`.
pub fn valuation(a: &Rational, p: Prime) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(int_valuation(a.numer(), p.0) - int_valuation(a.denom(), p.0))
}

fn prime_power(p: u64, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// `|a|_place`, exact.
pub fn norm_at(a: &Rational, place: Place) -> Rational {
    if a.is_zero() {
        return Rational::zero();
    }
    match place {
        Place::Infinite => a.abs(),
        Place::Finite(p) => prime_power(p.0, -int_valuation(a.numer(), p.0) + int_valuation(a.denom(), p.0)),
    }
}

/// `H(y/x) = max{|x|, |y|}` for the reduced fraction.
pub fn height_rational(xi: &Rational) -> BigInt {
    let n = xi.numer().abs();
    let d = xi.denom().abs();
    n.max(d)
}

/// `H(x) = ∏_p ‖x‖_p` over the infinite place and every prime dividing a
/// numerator or denominator (other places contribute 1).
pub fn height_vector(x: &[Rational]) -> Result<Rational> {
    height_vector_with_bound(x, DEFAULT_FACTOR_BOUND)
}

pub fn height_vector_with_bound(x: &[Rational], bound: u64) -> Result<Rational> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    for xi in x.iter().filter(|v| !v.is_zero()) {
        primes.extend(support_primes(xi, bound)?);
    }
    let sup = |place: Place| {
        x.iter()
            .map(|xi| norm_at(xi, place))
            .max()
            .unwrap_or_else(Rational::zero)
    };
    let mut h = sup(Place::Infinite);
    for p in primes {
        h *= sup(Place::Finite(Prime(p)));
    }
    Ok(h)
}

/// True iff every prime dividing the reduced denominator lies in `s`.
pub fn is_s_integer(xi: &Rational, s: &PlaceSet) -> bool {
    let mut d = xi.denom().magnitude().clone();
    for p in s.finite_primes() {
        let p = BigUint::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    d.is_one()
}

/// True iff both numerator and denominator involve only primes of `s`.
pub fn is_s_unit(xi: &Rational, s: &PlaceSet) -> bool {
    !xi.is_zero() && is_s_integer(xi, s) && is_s_integer(&xi.recip(), s)
}

/// `∏_p |a|_p` over `{∞} ∪ supp(a)`; equals 1 for every nonzero rational.
pub fn product_formula_check(a: &Rational) -> Result<Rational> {
    product_formula_check_with_bound(a, DEFAULT_FACTOR_BOUND)
}

pub fn product_formula_check_with_bound(a: &Rational, bound: u64) -> Result<Rational> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut prod = norm_at(a, Place::Infinite);
    for p in support_primes(a, bound)? {
        prod *= norm_at(a, Place::Finite(Prime(p)));
    }
    Ok(prod)
}

/// `(∏_p max{1,|ξ|_p}, (∏_p min{1,|ξ|_p})^{-1})`; the second is `None` for ξ = 0.
pub fn height_products(xi: &Rational) -> Result<(Rational, Option<Rational>)> {
    let one = Rational::one();
    let mut places = vec![Place::Infinite];
    if !xi.is_zero() {
        places.extend(
            support_primes(xi, DEFAULT_FACTOR_BOUND)?
                .into_iter()
                .map(|p| Place::Finite(Prime(p))),
        );
    }
    let mut max_prod = one.clone();
    let mut min_prod = one.clone();
    for pl in places {
        let v = norm_at(xi, pl);
        max_prod *= v.clone().max(one.clone());
        min_prod *= v.min(one.clone());
    }
    let inv = if min_prod.is_zero() { None } else { Some(min_prod.recip()) };
    Ok((max_prod, inv))
}

/// Serializers writing exact numbers through `Display` ("p/q", integers in decimal).
pub mod as_string {
    use std::fmt::Display;

    use serde::ser::{SerializeSeq, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn seq<'a, T: Display + 'a, I, S>(items: I, s: S) -> Result<S::Ok, S::Error>
    where
        I: IntoIterator<Item = &'a T>,
        S: Serializer,
    {
        let items: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
        let mut seq = s.serialize_seq(Some(items.len()))?;
        for x in &items {
            seq.serialize_element(x)?;
        }
        seq.end()
    }

    pub fn option<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }

    pub fn vec<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        seq(v, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&int(12), p(2)), Ok(2));
        assert_eq!(valuation(&rat(1, 3), p(3)), Ok(-1));
        assert_eq!(valuation(&int(2006), p(59)), Ok(1));
        assert_eq!(valuation(&int(0), p(5)), Err(Error::ZeroInput));
    }

    #[test]
    fn norms() {
        assert_eq!(norm_at(&int(3), Place::finite(3).unwrap()), rat(1, 3));
        assert_eq!(norm_at(&int(2006), Place::Infinite), int(2006));
        assert_eq!(norm_at(&int(0), Place::finite(5).unwrap()), int(0));
        assert_eq!(norm_at(&rat(-7, 4), Place::finite(2).unwrap()), int(4));
    }

    #[test]
    fn heights() {
        assert_eq!(height_rational(&rat(3, 2)), BigInt::from(3));
        assert_eq!(height_rational(&int(0)), BigInt::from(1));
        assert_eq!(height_rational(&rat(122, 990)), BigInt::from(495));
        assert_eq!(height_vector(&[int(4), int(6), int(10)]), Ok(int(5)));
        assert_eq!(height_vector(&[int(7)]), Ok(int(1)));
        assert_eq!(height_vector(&[int(1), rat(61, 495)]), Ok(int(495)));
        assert_eq!(height_vector(&[int(0), int(0)]), Err(Error::ZeroVector));
    }

    #[test]
    fn s_integers() {
        let s = PlaceSet::from_primes(&[2, 5]).unwrap();
        assert!(is_s_integer(&rat(1, 10), &s));
        assert!(!is_s_integer(&rat(1, 3), &s));
        assert!(is_s_integer(&int(7), &s));
        assert!(is_s_unit(&rat(4, 5), &s));
        assert!(!is_s_unit(&rat(3, 5), &s));
        assert!(s.contains(&Place::Infinite));
    }

    #[test]
    fn product_formula() {
        for a in [int(12), rat(-61, 495), int(1)] {
            assert_eq!(product_formula_check(&a), Ok(int(1)));
        }
        assert_eq!(product_formula_check(&int(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn places_parse_and_print() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinite);
        assert_eq!("7".parse::<Place>().unwrap().to_string(), "7");
        assert!("9".parse::<Place>().is_err());
        assert_eq!(PlaceSet::from_primes(&[5, 2]).unwrap().to_string(), "{2,5,inf}");
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-12").unwrap(), int(-12));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(rat(-61, 495).to_string(), "-61/495");
    }

    #[test]
    fn factorization_bound() {
        let big = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        assert!(matches!(factorize(&big, 1000), Err(Error::FactorizationBound(_))));
        assert_eq!(factorize(&BigUint::from(2006u32), 1000).unwrap(), vec![(2, 1), (17, 1), (59, 1)]);
        // a prime cofactor below bound^2 is certified
        assert_eq!(factorize(&BigUint::from(2 * 1_000_003u64), 2000).unwrap(), vec![(2, 1), (1_000_003, 1)]);
    }
}
