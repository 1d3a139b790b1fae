//! Numerical criteria on the intersection matrix of boundary divisors of a
//! surface, the weight solver behind them, common bases of two filtrations,
//! and Riemann–Roch budgets for curves.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::parse_rational;
use crate::linalg::{self, Echelon, Vector};

pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Denominator cap applied between fixed-point iterations.
pub const DENOMINATOR_CAP: u64 = 1_000_000_000_000;

/// Symmetric matrix of pairings `C_i · C_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    entries: Vec<Vec<BigRational>>,
    ample: bool,
}

impl IntersectionMatrix {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::ZeroInput);
        }
        for row in &entries {
            if row.len() != r {
                return Err(Error::DimensionMismatch { expected: r, got: row.len() });
            }
        }
        for i in 0..r {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Parse(format!("matrix not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(IntersectionMatrix { entries, ample: true })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// `r × r` matrix with `diag` on the diagonal and `off` elsewhere.
    pub fn uniform(r: usize, diag: i64, off: i64) -> Self {
        let rows: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| if i == j { diag } else { off }).collect()).collect();
        Self::from_integers(&rows).expect("square symmetric")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let entries = j
            .matrix
            .iter()
            .map(|row| row.iter().map(parse_entry).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::new(entries)?;
        if let Some(r) = j.r {
            if r != m.r() {
                return Err(Error::DimensionMismatch { expected: r, got: m.r() });
            }
        }
        m.ample = j.ample.unwrap_or(true);
        Ok(m)
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// Whether the caller asserted ampleness of the boundary.
    pub fn ample(&self) -> bool {
        self.ample
    }

    fn check_weights(&self, a: &[BigRational]) -> Result<()> {
        if a.len() != self.r() {
            return Err(Error::DimensionMismatch { expected: self.r(), got: a.len() });
        }
        Ok(())
    }

    /// `L_i(x) = Σ_j μ_ij x_j`, 0-based.
    fn linear(&self, x: &[BigRational], i: usize) -> BigRational {
        self.entries[i].iter().zip(x).map(|(m, v)| m * v).sum()
    }

    fn quadratic(&self, x: &[BigRational]) -> BigRational {
        (0..self.r()).map(|i| &x[i] * self.linear(x, i)).sum()
    }
}

#[derive(Deserialize)]
struct MatrixJson {
    r: Option<usize>,
    matrix: Vec<Vec<serde_json::Value>>,
    ample: Option<bool>,
}

fn parse_entry(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("matrix entry {other}"))),
    }
}

/// Positive integer weights `a_1, …, a_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightVector(#[serde(serialize_with = "crate::exactnum::as_string::vec")] Vec<BigInt>);

impl WeightVector {
    pub fn new(a: Vec<BigInt>) -> Result<Self> {
        if let Some(i) = a.iter().position(|x| !x.is_positive()) {
            return Err(Error::PreconditionFailed(format!("weight a_{} = {} is not positive", i + 1, a[i])));
        }
        if a.is_empty() {
            return Err(Error::ZeroInput);
        }
        Ok(WeightVector(a))
    }

    pub fn from_u64(a: &[u64]) -> Result<Self> {
        Self::new(a.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn ones(r: usize) -> Self {
        WeightVector(vec![BigInt::one(); r])
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, t: u64) -> Self {
        WeightVector(self.0.iter().map(|x| x * t).collect())
    }

    fn as_rationals(&self) -> Vec<BigRational> {
        self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(BigInt::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let a = s
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("weight {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(a)
    }
}

/// `xᵀ M x` for an arbitrary rational vector.
pub fn quadratic_form(m: &IntersectionMatrix, x: &[BigRational]) -> Result<BigRational> {
    m.check_weights(x)?;
    Ok(m.quadratic(x))
}

/// `(M x)_i`, with `i` 1-based.
pub fn linear_form(m: &IntersectionMatrix, x: &[BigRational], i: usize) -> Result<BigRational> {
    m.check_weights(x)?;
    if i == 0 || i > m.r() {
        return Err(Error::IndexOutOfRange { index: i, len: m.r() });
    }
    Ok(m.linear(x, i - 1))
}

/// `D² = aᵀ M a`.
pub fn d_squared(m: &IntersectionMatrix, a: &WeightVector) -> Result<BigRational> {
    let x = a.as_rationals();
    m.check_weights(&x)?;
    Ok(m.quadratic(&x))
}

/// `D · C_i = (M a)_i`, with `i` 1-based.
pub fn d_dot(m: &IntersectionMatrix, a: &WeightVector, i: usize) -> Result<BigRational> {
    let x = a.as_rationals();
    m.check_weights(&x)?;
    if i == 0 || i > m.r() {
        return Err(Error::IndexOutOfRange { index: i, len: m.r() });
    }
    Ok(m.linear(&x, i - 1))
}

/// `p + q √d` with `d` a positive integer free of small square factors; `d = 1` only when `q = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticScalar {
    p: BigRational,
    q: BigRational,
    d: BigInt,
}

const SQUARE_SCAN: u64 = 1_000_000;

/// `(s, d)` with `n = s² d`, after removing square factors `k²` for `k ≤ SQUARE_SCAN` and a square cofactor.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut d = n.clone();
    let mut k = 2u64;
    while k <= SQUARE_SCAN {
        let kk = BigInt::from(k * k);
        if kk > d {
            break;
        }
        while d.is_multiple_of(&kk) {
            d /= &kk;
            s *= k;
        }
        k += 1;
    }
    let root = d.sqrt();
    if &root * &root == d {
        s *= root;
        d = BigInt::one();
    }
    (s, d)
}

impl QuadraticScalar {
    pub fn rational(p: BigRational) -> Self {
        QuadraticScalar { p, q: BigRational::zero(), d: BigInt::one() }
    }

    /// `p + q √x` for a nonnegative rational `x`.
    pub fn with_sqrt(p: BigRational, q: BigRational, x: &BigRational) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::PreconditionFailed(format!("square root of negative {x}")));
        }
        // √(n/m) = √(n m) / m
        let (s, d) = split_square(&(x.numer() * x.denom()));
        let coef = q * BigRational::new(s, x.denom().clone());
        Ok(Self::normalized(p, coef, d))
    }

    fn normalized(p: BigRational, q: BigRational, d: BigInt) -> Self {
        if q.is_zero() || d.is_zero() {
            return Self::rational(p);
        }
        if d.is_one() {
            return Self::rational(p + q);
        }
        QuadraticScalar { p, q, d }
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.p)
    }

    /// Exact sign, by squaring when `p` and `q` disagree.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        if sq == Ordering::Equal || sp == sq {
            return if sp == Ordering::Equal { sq } else { sp };
        }
        if sp == Ordering::Equal {
            return sq;
        }
        let p2 = &self.p * &self.p;
        let q2d = &self.q * &self.q * BigRational::from_integer(self.d.clone());
        match p2.cmp(&q2d) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        f(&self.p) + f(&self.q) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    fn common_radicand(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "quadratic scalars from different fields");
                self.d.clone()
            }
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.signum() == Ordering::Equal {
            return Err(Error::DivisionByZero("quadratic scalar"));
        }
        // 1/(p + q√d) = (p − q√d)/(p² − q²d)
        let n = &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(self.d.clone());
        Ok(Self::normalized(&self.p / &n, -&self.q / &n, self.d.clone()))
    }
}

impl From<BigRational> for QuadraticScalar {
    fn from(p: BigRational) -> Self {
        Self::rational(p)
    }
}

impl PartialOrd for QuadraticScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Add<&QuadraticScalar> for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn add(self, rhs: &QuadraticScalar) -> QuadraticScalar {
        let d = self.common_radicand(rhs);
        QuadraticScalar::normalized(&self.p + &rhs.p, &self.q + &rhs.q, d)
    }
}

impl Neg for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn neg(self) -> QuadraticScalar {
        QuadraticScalar { p: -&self.p, q: -&self.q, d: self.d.clone() }
    }
}

impl Sub<&QuadraticScalar> for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn sub(self, rhs: &QuadraticScalar) -> QuadraticScalar {
        self + &(-rhs)
    }
}

impl Mul<&QuadraticScalar> for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn mul(self, rhs: &QuadraticScalar) -> QuadraticScalar {
        let d = self.common_radicand(rhs);
        let dr = BigRational::from_integer(d.clone());
        let p = &self.p * &rhs.p + &self.q * &rhs.q * dr;
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        QuadraticScalar::normalized(p, q, d)
    }
}

impl Mul<&BigRational> for &QuadraticScalar {
    type Output = QuadraticScalar;
    fn mul(self, rhs: &BigRational) -> QuadraticScalar {
        QuadraticScalar::normalized(&self.p * rhs, &self.q * rhs, self.d.clone())
    }
}

/// `p + q*sqrt(d)`, or just `p` when rational.
impl fmt::Display for QuadraticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.d)
        }
    }
}

impl Serialize for QuadraticScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadraticScalar", 2)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}

/// The three numbers `D²`, `D·C`, `C²` that every per-index criterion depends on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pairings {
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub d2: BigRational,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub dc: BigRational,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub c2: BigRational,
}

impl Pairings {
    pub fn new(d2: BigRational, dc: BigRational, c2: BigRational) -> Self {
        Pairings { d2, dc, c2 }
    }

    /// Pairings of `D = Σ a_j C_j` with `C_i` (1-based).
    pub fn at(m: &IntersectionMatrix, a: &WeightVector, i: usize) -> Result<Self> {
        let dc = d_dot(m, a, i)?;
        Ok(Pairings { d2: d_squared(m, a)?, dc, c2: m.entry(i - 1, i - 1).clone() })
    }

    /// `(D·C)² − D² C²`.
    pub fn discriminant(&self) -> BigRational {
        &self.dc * &self.dc - &self.d2 * &self.c2
    }

    /// `β = D² / (D·C)`.
    pub fn beta(&self) -> Result<BigRational> {
        if self.dc.is_zero() {
            return Err(Error::DivisionByZero("D.C"));
        }
        Ok(&self.d2 / &self.dc)
    }

    /// `(γ, γ′)`, the roots of `D² − 2(D·C)T + C² T²` in increasing order.
    pub fn gamma_pair(&self) -> Result<(QuadraticScalar, QuadraticScalar)> {
        if !self.c2.is_positive() {
            return Err(Error::DegenerateSelfIntersection(self.c2.to_string()));
        }
        let disc = self.discriminant();
        if disc.is_negative() {
            return Err(Error::HodgeViolation(format!("discriminant {disc} < 0")));
        }
        let inv = self.c2.recip();
        let alpha = &self.dc * &inv;
        Ok((
            QuadraticScalar::with_sqrt(alpha.clone(), -&inv, &disc)?,
            QuadraticScalar::with_sqrt(alpha, inv, &disc)?,
        ))
    }

    pub fn gamma(&self) -> Result<QuadraticScalar> {
        Ok(self.gamma_pair()?.0)
    }

    /// `F(θ) = θ (1 − θ D·C/D² + θ² C²/(3 D²))`.
    pub fn f_theta(&self, theta: &QuadraticScalar) -> Result<QuadraticScalar> {
        if self.d2.is_zero() {
            return Err(Error::DivisionByZero("D^2"));
        }
        let inv = self.d2.recip();
        let lin = -(&self.dc * &inv);
        let quad = &self.c2 * &inv / BigRational::from_integer(3.into());
        let t2 = theta * theta;
        let inner = &(&QuadraticScalar::rational(BigRational::one()) + &(theta * &lin)) + &(&t2 * &quad);
        Ok(theta * &inner)
    }

    /// `D²/(D·C) · (1 + D² C² / (6 (D·C)²))`.
    pub fn autissier_lhs(&self) -> Result<BigRational> {
        let beta = self.beta()?;
        Ok(&beta * (BigRational::one() + self.tau()?))
    }

    /// `D² C² / (6 (D·C)²)`.
    pub fn tau(&self) -> Result<BigRational> {
        if self.dc.is_zero() {
            return Err(Error::DivisionByZero("D.C"));
        }
        Ok(&self.d2 * &self.c2 / (BigRational::from_integer(6.into()) * &self.dc * &self.dc))
    }
}

/// γ_i for `D = Σ a_j C_j` (1-based `i`).
pub fn gamma_small(m: &IntersectionMatrix, a: &WeightVector, i: usize) -> Result<QuadraticScalar> {
    Pairings::at(m, a, i)?.gamma()
}

pub fn f_theta(m: &IntersectionMatrix, a: &WeightVector, i: usize, theta: &QuadraticScalar) -> Result<QuadraticScalar> {
    Pairings::at(m, a, i)?.f_theta(theta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CzIndex {
    pub index: usize,
    pub gamma: QuadraticScalar,
    pub f_gamma: QuadraticScalar,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub a: BigInt,
    pub holds: bool,
}

/// `F(γ_i) > a_i` for every `i`.
pub fn cz_check(m: &IntersectionMatrix, a: &WeightVector) -> Result<Vec<CzIndex>> {
    (1..=m.r())
        .map(|i| {
            let p = Pairings::at(m, a, i)?;
            let gamma = p.gamma()?;
            let f_gamma = p.f_theta(&gamma)?;
            let ai = a.values()[i - 1].clone();
            let holds = f_gamma > QuadraticScalar::rational(BigRational::from_integer(ai.clone()));
            Ok(CzIndex { index: i, gamma, f_gamma, a: ai, holds })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutissierIndex {
    pub index: usize,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub lhs: BigRational,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub rhs: BigRational,
    pub holds: bool,
}

/// `D²/(D·C_i) (1 + D² C_i²/(6 (D·C_i)²)) > 4 a_i` for every `i`.
pub fn autissier_check(m: &IntersectionMatrix, a: &WeightVector) -> Result<Vec<AutissierIndex>> {
    (1..=m.r())
        .map(|i| {
            let p = Pairings::at(m, a, i)?;
            if !p.dc.is_positive() {
                return Err(Error::NonpositivePairing(i));
            }
            let lhs = p.autissier_lhs()?;
            let rhs = BigRational::from_integer(&a.values()[i - 1] * 4);
            Ok(AutissierIndex { index: i, holds: lhs > rhs, lhs, rhs })
        })
        .collect()
}

/// Best rational approximation with denominator at most `cap` (continued fractions).
pub fn limit_denominator(x: &BigRational, cap: &BigInt) -> BigRational {
    if x.denom() <= cap {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > cap {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = &n - &a * &d;
        (n, d) = (d, r);
        if d.is_zero() {
            break;
        }
    }
    // compare the last convergent with the best semiconvergent
    let k = (cap - &q0).div_floor(&q1);
    let b1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = BigRational::new(p1, q1);
    if (&b2 - x).abs() <= (&b1 - x).abs() {
        b2
    } else {
        b1
    }
}

/// `max_i |r x_i L_i(x) / Q(x) − 1|`.
fn balance_deviation(m: &IntersectionMatrix, x: &[BigRational]) -> BigRational {
    let r = BigRational::from_integer(BigInt::from(m.r()));
    let q = m.quadratic(x);
    (0..m.r())
        .map(|i| (&r * &x[i] * m.linear(x, i) / &q - BigRational::one()).abs())
        .max()
        .expect("r >= 1")
}

/// `(1 − ε) Q(a) < r a_i L_i(a) < (1 + ε) Q(a)` for every `i`.
pub fn balanced_within(m: &IntersectionMatrix, a: &WeightVector, eps: &BigRational) -> Result<bool> {
    let x = a.as_rationals();
    m.check_weights(&x)?;
    let q = m.quadratic(&x);
    let r = BigRational::from_integer(BigInt::from(m.r()));
    let lo = (BigRational::one() - eps) * &q;
    let hi = (BigRational::one() + eps) * &q;
    Ok((0..m.r()).all(|i| {
        let v = &r * &x[i] * m.linear(&x, i);
        lo < v && v < hi
    }))
}

fn check_positive(m: &IntersectionMatrix) -> Result<()> {
    for i in 0..m.r() {
        for j in 0..m.r() {
            if !m.entry(i, j).is_positive() {
                return Err(Error::PositivityViolation(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointWeights {
    pub weights: WeightVector,
    pub iterations: usize,
    /// Balance deviation of the rational point before integerization.
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub deviation: BigRational,
}

/// Integer weights balanced to within `ε`, found by damped iteration of
/// `x ↦ (L_i(x)^{-1})_i / Σ_j L_j(x)^{-1}` from the barycenter.
pub fn fixed_point_weights(m: &IntersectionMatrix, eps: &BigRational, max_iter: usize) -> Result<FixedPointWeights> {
    check_positive(m)?;
    if !(eps.is_positive() && *eps < BigRational::one()) {
        return Err(Error::PreconditionFailed(format!("eps = {eps} not in (0,1)")));
    }
    let r = m.r();
    let cap = BigInt::from(DENOMINATOR_CAP);
    let half = BigRational::new(1.into(), 2.into());
    let target = eps * &half;
    let mut x = vec![BigRational::new(1.into(), BigInt::from(r)); r];
    let mut iterations = 0;
    let mut deviation = balance_deviation(m, &x);
    while deviation >= target {
        if iterations == max_iter {
            return Err(Error::NoConvergence(max_iter));
        }
        let inv: Vec<BigRational> = (0..r).map(|i| m.linear(&x, i).recip()).collect();
        let total: BigRational = inv.iter().sum();
        x = x
            .iter()
            .zip(&inv)
            .map(|(xi, li)| limit_denominator(&((xi + li / &total) * &half), &cap))
            .collect();
        iterations += 1;
        deviation = balance_deviation(m, &x);
    }
    let weights = integerize(m, &x, eps)?;
    Ok(FixedPointWeights { weights, iterations, deviation })
}

/// Small integer weights proportional to `x` that stay balanced; clearing all
/// denominators is the fallback and always works by homogeneity.
fn integerize(m: &IntersectionMatrix, x: &[BigRational], eps: &BigRational) -> Result<WeightVector> {
    let xmax = x.iter().max().expect("r >= 1");
    let mut k = BigInt::one();
    while k <= BigInt::from(DENOMINATOR_CAP) {
        let a: Vec<BigInt> = x
            .iter()
            .map(|xi| (BigRational::from_integer(k.clone()) * xi / xmax).round().to_integer().max(BigInt::one()))
            .collect();
        let w = primitive(a);
        if balanced_within(m, &w, eps)? {
            return Ok(w);
        }
        k *= 10;
    }
    let l = x.iter().fold(BigInt::one(), |acc, xi| acc.lcm(xi.denom()));
    let a: Vec<BigInt> = x.iter().map(|xi| (xi * BigRational::from_integer(l.clone())).to_integer()).collect();
    let w = primitive(a);
    if balanced_within(m, &w, eps)? {
        Ok(w)
    } else {
        Err(Error::NoConvergence(0))
    }
}

fn primitive(a: Vec<BigInt>) -> WeightVector {
    let g = a.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    WeightVector(a.into_iter().map(|v| v / &g).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevinCertificate {
    pub weights: WeightVector,
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub epsilon: BigRational,
    /// `min_i D² C_i² / (6 (D·C_i)²)` at the returned weights.
    #[serde(serialize_with = "crate::exactnum::as_string::serialize")]
    pub tau: BigRational,
    pub checks: Vec<AutissierIndex>,
    pub attempts: usize,
}

fn min_tau(m: &IntersectionMatrix, a: &WeightVector) -> Result<BigRational> {
    (1..=m.r())
        .map(|i| Pairings::at(m, a, i)?.tau())
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().min().expect("r >= 1"))
}

/// Screens the matrix, then searches for weights passing the Autissier test on every index.
pub fn levin_check(m: &IntersectionMatrix, max_iter: usize) -> Result<LevinCertificate> {
    if m.r() < 4 {
        return Err(Error::ScreenFailed(format!("r = {} < 4", m.r())));
    }
    for i in 0..m.r() {
        for j in 0..m.r() {
            if !m.entry(i, j).is_positive() {
                return Err(Error::ScreenFailed(format!(
                    "C_{}.C_{} = {} is not positive",
                    i + 1,
                    j + 1,
                    m.entry(i, j)
                )));
            }
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut eps = min_tau(m, &WeightVector::ones(m.r()))?.min(half.clone());
    for attempt in 1..=64 {
        let fp = fixed_point_weights(m, &eps, max_iter)?;
        let checks = autissier_check(m, &fp.weights)?;
        if checks.iter().all(|c| c.holds) {
            let tau = min_tau(m, &fp.weights)?;
            return Ok(LevinCertificate { weights: fp.weights, epsilon: eps, tau, checks, attempts: attempt });
        }
        eps = &eps * &half;
    }
    Err(Error::NoConvergence(max_iter))
}

/// Decreasing chain `W_0 ⊇ W_1 ⊇ …` in `Q^d`, each member given by spanning vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    dim: usize,
    chain: Vec<Vec<Vector>>,
}

impl Filtration {
    pub fn new(dim: usize, chain: Vec<Vec<Vector>>) -> Result<Self> {
        for v in chain.iter().flatten() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
        }
        let chain: Vec<Vec<Vector>> = chain.iter().map(|s| linalg::basis_of(s)).collect();
        match chain.first() {
            Some(w0) if w0.len() == dim => {}
            _ => return Err(Error::NotNested(0)),
        }
        for (i, pair) in chain.windows(2).enumerate() {
            if !linalg::is_subspace(&pair[1], &pair[0]) {
                return Err(Error::NotNested(i + 1));
            }
        }
        Ok(Filtration { dim, chain })
    }

    /// The full space followed by the given members, from integer vectors.
    pub fn from_integers(dim: usize, members: &[Vec<Vec<i64>>]) -> Result<Self> {
        let conv = |vs: &Vec<Vec<i64>>| -> Vec<Vector> {
            vs.iter().map(|v| v.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
        };
        let mut chain = vec![(0..dim).map(|i| linalg::unit_vector(dim, i)).collect()];
        chain.extend(members.iter().map(conv));
        Self::new(dim, chain)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Bases of the members.
    pub fn members(&self) -> &[Vec<Vector>] {
        &self.chain
    }
}

/// A basis of `Q^d` containing a basis of every member of both filtrations.
pub fn common_filtration_basis(f1: &Filtration, f2: &Filtration) -> Result<Vec<Vector>> {
    if f1.dim != f2.dim {
        return Err(Error::DimensionMismatch { expected: f1.dim, got: f2.dim });
    }
    let w = f1.chain[0].clone();
    Ok(adapted_basis(&w, &f1.chain, &f2.chain, f1.dim))
}

/// Induction on `dim W`. `f` and `g` are chains of subspaces of `W` (bases).
fn adapted_basis(w: &[Vector], f: &[Vec<Vector>], g: &[Vec<Vector>], dim: usize) -> Vec<Vector> {
    let k = w.len();
    if k == 0 {
        return Vec::new();
    }
    let Some(first) = f.iter().position(|s| s.len() < k) else {
        if g.iter().any(|s| s.len() < k) {
            return adapted_basis(w, g, f, dim);
        }
        return w.to_vec();
    };
    // refine so that W_1 is a hyperplane H
    let mut h = f[first].clone();
    let mut h_ech = Echelon::of(&h);
    for v in w {
        if h.len() + 1 == k {
            break;
        }
        if h_ech.insert(v) {
            h.push(v.clone());
        }
    }
    let mut f_h = vec![h.clone()];
    f_h.extend(f[first..].iter().cloned());
    let g_h: Vec<Vec<Vector>> = g.iter().map(|s| linalg::intersect(s, &h, dim)).collect();
    let mut basis = adapted_basis(&h, &f_h, &g_h, dim);

    // the last member of g not inside H; the indices where this happens form an initial run
    let pick_from = g
        .iter()
        .rev()
        .find(|s| !s.iter().all(|v| h_ech.contains(v)))
        .map(|s| s.as_slice())
        .unwrap_or(w);
    let w_d = pick_from
        .iter()
        .find(|v| !h_ech.contains(v))
        .expect("member not inside H has a vector outside H")
        .clone();
    basis.push(w_d);
    basis
}

/// Every member of both chains is spanned by the basis vectors it contains, and the basis is a basis.
pub fn filtration_certificate(basis: &[Vector], f1: &Filtration, f2: &Filtration) -> bool {
    if basis.len() != f1.dim || linalg::rank(basis) != f1.dim {
        return false;
    }
    f1.chain.iter().chain(&f2.chain).all(|s| {
        let e = Echelon::of(s);
        let inside = basis.iter().filter(|v| e.contains(v)).count();
        inside == s.len()
    })
}

/// `ℓ = nr − g + 1` and `A = ℓ(ℓ − 2n − 1)/2` for a curve with `r` points at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveBudget {
    pub r: u64,
    pub g: u64,
    pub n: u64,
    pub ell: i128,
    pub a: i128,
    /// Least `n` in the Riemann–Roch range with `A > 0`.
    pub min_positive_n: Option<u64>,
}

fn budget_values(r: u64, g: u64, n: u64) -> (i128, i128) {
    let ell = n as i128 * r as i128 - g as i128 + 1;
    let a = ell * (ell - 2 * n as i128 - 1) / 2;
    (ell, a)
}

pub fn curve_budget(r: u64, g: u64, n: u64) -> Result<CurveBudget> {
    if r == 0 || (n as i128) * (r as i128) <= 2 * g as i128 - 2 {
        return Err(Error::OutOfRiemannRochRange { r, g, n });
    }
    let (ell, a) = budget_values(r, g, n);
    Ok(CurveBudget { r, g, n, ell, a, min_positive_n: min_positive_n(r, g) })
}

/// `ℓ − 2n − 1 = n(r − 2) − g`, so `A > 0` iff `n > g/(r − 2)`; none when `r ≤ 2`.
pub fn min_positive_n(r: u64, g: u64) -> Option<u64> {
    if r <= 2 {
        return None;
    }
    let from_sign = g / (r - 2) + 1;
    let from_range = if g == 0 { 1 } else { (2 * g - 2) / r + 1 };
    Some(from_sign.max(from_range).max(1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaBound {
    /// `(θ D²/2 − θ² D·C/2 + θ³ C²/6) n³`.
    pub leading: QuadraticScalar,
    pub f_theta: QuadraticScalar,
    /// The `O(n²)` correction is not evaluated.
    pub tag: &'static str,
}

pub fn etheta_lower_bound(p: &Pairings, n: u64, theta: &QuadraticScalar) -> Result<ThetaBound> {
    let (_, gamma_prime) = p.gamma_pair()?;
    if theta.signum() == Ordering::Less || *theta > gamma_prime {
        return Err(Error::ThetaOutOfRange(theta.to_string()));
    }
    let half = BigRational::new(1.into(), 2.into());
    let sixth = BigRational::new(1.into(), 6.into());
    let t2 = theta * theta;
    let t3 = &t2 * theta;
    let coeff = &(&(theta * &(&p.d2 * &half)) - &(&t2 * &(&p.dc * &half))) + &(&t3 * &(&p.c2 * &sixth));
    let n3 = BigRational::from_integer(BigInt::from(n).pow(3));
    Ok(ThetaBound { leading: &coeff * &n3, f_theta: p.f_theta(theta)?, tag: "asymptotic" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn q(x: BigRational) -> QuadraticScalar {
        QuadraticScalar::rational(x)
    }

    #[test]
    fn pairings() {
        let ones = IntersectionMatrix::uniform(4, 1, 1);
        let a = WeightVector::ones(4);
        assert_eq!(d_squared(&ones, &a).unwrap(), int(16));
        assert_eq!(d_dot(&ones, &a, 3).unwrap(), int(4));
        let m = IntersectionMatrix::from_integers(&[vec![5, 2], vec![2, 7]]).unwrap();
        let e2 = [int(0), int(1)];
        assert_eq!(linear_form(&m, &e2, 1).unwrap(), int(2));
        assert_eq!(quadratic_form(&m, &[int(1), int(0)]).unwrap(), int(5));
        assert!(WeightVector::from_u64(&[1, 0]).is_err());
        let zero = IntersectionMatrix::uniform(3, 0, 0);
        assert_eq!(d_squared(&zero, &WeightVector::ones(3)).unwrap(), int(0));
        assert_eq!(d_dot(&zero, &WeightVector::ones(3), 2).unwrap(), int(0));
        assert_eq!(d_dot(&m, &WeightVector::ones(2), 3), Err(Error::IndexOutOfRange { index: 3, len: 2 }));
        assert_eq!(
            d_squared(&m, &WeightVector::ones(3)),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn quadratic_scalars() {
        let s2 = QuadraticScalar::with_sqrt(int(0), int(1), &int(2)).unwrap();
        assert_eq!(s2.radicand(), &BigInt::from(2));
        assert_eq!((&s2 * &s2).as_rational(), Some(&int(2)));
        let x = QuadraticScalar::with_sqrt(int(3), int(-2), &int(2)).unwrap();
        assert_eq!(x.signum(), Ordering::Greater); // 3 > 2√2
        let y = QuadraticScalar::with_sqrt(int(1), int(-1), &int(2)).unwrap();
        assert_eq!(y.signum(), Ordering::Less);
        let sq = QuadraticScalar::with_sqrt(int(1), int(1), &rat(9, 4)).unwrap();
        assert_eq!(sq.as_rational(), Some(&rat(5, 2)));
        let z = QuadraticScalar::with_sqrt(int(0), int(1), &int(12)).unwrap();
        assert_eq!(z.to_string(), "0 + 2*sqrt(3)");
        assert_eq!((&x * &x.recip().unwrap()).as_rational(), Some(&int(1)));
    }

    #[test]
    fn gammas() {
        let p = Pairings::new(int(3), int(2), int(1));
        assert_eq!(p.gamma().unwrap(), q(int(1)));
        assert_eq!(p.gamma_pair().unwrap().1, q(int(3)));
        let p = Pairings::new(int(1), int(1), int(1));
        assert_eq!(p.gamma_pair().unwrap(), (q(int(1)), q(int(1))));
        let p = Pairings::new(int(3), int(1), int(1));
        assert!(matches!(p.gamma(), Err(Error::HodgeViolation(_))));
        let p = Pairings::new(int(3), int(1), int(0));
        assert!(matches!(p.gamma(), Err(Error::DegenerateSelfIntersection(_))));
    }

    #[test]
    fn f_values() {
        let p = Pairings::new(int(3), int(2), int(1));
        assert_eq!(p.f_theta(&q(int(0))).unwrap(), q(int(0)));
        assert_eq!(p.f_theta(&p.gamma().unwrap()).unwrap(), q(rat(4, 9)));
        let beta = p.beta().unwrap();
        let expected = rat(1, 4) * &beta * (int(1) + rat(1, 6) * &p.d2 * &p.c2 / (&p.dc * &p.dc));
        assert_eq!(p.f_theta(&q(beta / int(2))).unwrap(), q(expected));
        assert_eq!(Pairings::new(int(0), int(1), int(1)).f_theta(&q(int(1))), Err(Error::DivisionByZero("D^2")));
    }

    #[test]
    fn cz_examples() {
        let ones = IntersectionMatrix::uniform(4, 1, 1);
        let c = cz_check(&ones, &WeightVector::ones(4)).unwrap();
        assert!(c.iter().all(|x| x.holds && x.gamma == q(int(4)) && x.f_gamma == q(rat(4, 3))));
        let one = IntersectionMatrix::uniform(1, 1, 0);
        let c = cz_check(&one, &WeightVector::ones(1)).unwrap();
        assert_eq!(c[0].f_gamma, q(rat(1, 3)));
        assert!(!c[0].holds);
    }

    #[test]
    fn autissier_examples() {
        let c = autissier_check(&IntersectionMatrix::uniform(4, 1, 1), &WeightVector::ones(4)).unwrap();
        assert!(c.iter().all(|x| x.holds && x.lhs == rat(14, 3)));
        let c = autissier_check(&IntersectionMatrix::uniform(3, 1, 1), &WeightVector::ones(3)).unwrap();
        assert!(c.iter().all(|x| !x.holds && x.lhs == rat(7, 2)));
        let zero = IntersectionMatrix::uniform(4, 0, 0);
        assert_eq!(autissier_check(&zero, &WeightVector::ones(4)), Err(Error::NonpositivePairing(1)));
    }

    #[test]
    fn continued_fractions() {
        let cap = BigInt::from(100);
        assert_eq!(limit_denominator(&rat(314159, 100000), &cap), rat(311, 99));
        assert_eq!(limit_denominator(&rat(1, 3), &cap), rat(1, 3));
        assert_eq!(limit_denominator(&rat(-314159, 100000), &cap), rat(-311, 99));
    }

    #[test]
    fn weights() {
        let fp = fixed_point_weights(&IntersectionMatrix::uniform(5, 1, 1), &rat(1, 10), 100).unwrap();
        assert_eq!(fp.weights, WeightVector::ones(5));
        assert_eq!(fp.iterations, 0);
        let m = IntersectionMatrix::from_integers(&[vec![1, 2], vec![2, 1]]).unwrap();
        let fp = fixed_point_weights(&m, &rat(1, 10), 100).unwrap();
        assert!(balanced_within(&m, &fp.weights, &rat(1, 10)).unwrap());
        let m = IntersectionMatrix::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(fixed_point_weights(&m, &rat(1, 10), 100), Err(Error::PositivityViolation(1, 2)));
        let m = IntersectionMatrix::from_integers(&[vec![9, 1, 3], vec![1, 2, 5], vec![3, 5, 1]]).unwrap();
        let fp = fixed_point_weights(&m, &rat(1, 100), 1000).unwrap();
        assert!(balanced_within(&m, &fp.weights, &rat(1, 100)).unwrap());
    }

    #[test]
    fn levin() {
        let cert = levin_check(&IntersectionMatrix::uniform(4, 1, 1), 1000).unwrap();
        assert_eq!(cert.weights, WeightVector::ones(4));
        assert!(cert.checks.iter().all(|c| c.lhs == rat(14, 3)));
        let p1p1 = IntersectionMatrix::from_integers(&[
            vec![0, 1, 0, 1],
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 1],
            vec![1, 0, 1, 0],
        ])
        .unwrap();
        assert!(matches!(levin_check(&p1p1, 1000), Err(Error::ScreenFailed(_))));
        assert!(matches!(levin_check(&IntersectionMatrix::uniform(3, 1, 1), 1000), Err(Error::ScreenFailed(_))));
        let m = IntersectionMatrix::from_integers(&[
            vec![1, 10, 2, 3, 7],
            vec![10, 4, 1, 1, 9],
            vec![2, 1, 8, 5, 2],
            vec![3, 1, 5, 2, 6],
            vec![7, 9, 2, 6, 10],
        ])
        .unwrap();
        let cert = levin_check(&m, 10_000).unwrap();
        assert!(autissier_check(&m, &cert.weights).unwrap().iter().all(|c| c.holds));
    }

    fn vecs(vs: &[&[i64]]) -> Vec<Vec<i64>> {
        vs.iter().map(|v| v.to_vec()).collect()
    }

    #[test]
    fn filtrations() {
        let trivial = Filtration::from_integers(2, &[vec![]]).unwrap();
        let b = common_filtration_basis(&trivial, &trivial).unwrap();
        assert!(filtration_certificate(&b, &trivial, &trivial));

        let f1 = Filtration::from_integers(2, &[vecs(&[&[1, 0]])]).unwrap();
        let f2 = Filtration::from_integers(2, &[vecs(&[&[1, 1]])]).unwrap();
        let b = common_filtration_basis(&f1, &f2).unwrap();
        assert!(filtration_certificate(&b, &f1, &f2));
        let as_int = |v: &Vector| v.iter().map(|x| x.to_integer()).collect::<Vec<BigInt>>();
        let got: Vec<Vec<BigInt>> = b.iter().map(as_int).collect();
        let e = |xs: [i64; 2]| xs.map(BigInt::from).to_vec();
        assert_eq!(got, vec![e([1, 0]), e([1, 1])]);

        let f1 = Filtration::from_integers(3, &[vecs(&[&[1, 0, 0], &[0, 1, 0]]), vecs(&[&[1, 0, 0]])]).unwrap();
        let f2 = Filtration::from_integers(3, &[vecs(&[&[0, 1, 1], &[1, 1, 0]]), vecs(&[&[1, 2, 1]])]).unwrap();
        let b = common_filtration_basis(&f1, &f2).unwrap();
        assert!(filtration_certificate(&b, &f1, &f2));

        let bad = Filtration::from_integers(2, &[vecs(&[&[1, 0]]), vecs(&[&[0, 1]])]);
        assert_eq!(bad, Err(Error::NotNested(2)));
    }

    #[test]
    fn budgets() {
        let b = curve_budget(3, 0, 1).unwrap();
        assert_eq!((b.ell, b.a), (4, 2));
        for n in 1..20 {
            let b = curve_budget(2, 0, n).unwrap();
            assert_eq!((b.ell, b.a), (2 * n as i128 + 1, 0));
            assert_eq!(b.min_positive_n, None);
        }
        let b = curve_budget(3, 1, 1).unwrap();
        assert_eq!((b.ell, b.a, b.min_positive_n), (3, 0, Some(2)));
        assert_eq!(curve_budget(3, 1, 2).unwrap().a, 3);
        assert_eq!(curve_budget(1, 3, 4), Err(Error::OutOfRiemannRochRange { r: 1, g: 3, n: 4 }));
    }

    #[test]
    fn theta_bound() {
        let p = Pairings::new(int(3), int(2), int(1));
        let t = etheta_lower_bound(&p, 1, &q(int(1))).unwrap();
        assert_eq!(t.leading, q(rat(2, 3)));
        assert_eq!(t.tag, "asymptotic");
        assert_eq!(etheta_lower_bound(&p, 5, &q(int(0))).unwrap().leading, q(int(0)));
        assert!(matches!(etheta_lower_bound(&p, 1, &q(int(4))), Err(Error::ThetaOutOfRange(_))));
        let gamma = p.gamma().unwrap();
        let beta_half = q(p.beta().unwrap() / int(2));
        assert!(p.f_theta(&gamma).unwrap() >= p.f_theta(&beta_half).unwrap());
    }
}
