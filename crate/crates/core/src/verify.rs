//! Reproduction suite: each check pairs a module operation with an
//! independent computation of the same quantity.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::{thue_morse_direct, FiniteAutomaton};
use crate::error::Result;
use crate::exactnum::{height_products, height_rational, height_vector, product_formula_check};
use crate::linalg::{self, Vector};
use crate::powersum::{
    has_dominant_root, is_universal_hilbert_candidate, pisot_decompose, qth_root, Direction, GaussianRational,
    PowerSum,
};
use crate::surface::{
    self, autissier_check, common_filtration_basis, curve_budget, filtration_certificate, levin_check, Filtration,
    IntersectionMatrix, Pairings, QuadraticScalar, WeightVector,
};
use crate::transcendence::abl_pipeline;
use crate::words::{complexity, lemma_epsilon, lemma_prefix_len, repetition_from_low_complexity, Alphabet, Word};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks_passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2}: {} ({} ms, limit {} ms) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

type Check = fn(&mut ChaCha8Rng) -> std::result::Result<String, String>;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub limit: Duration,
    check: Check,
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, secs: u64, check: Check| Criterion { id, title, limit: Duration::from_secs(secs), check };
    vec![
        c(1, "three-state automaton anchors", 1, figure1),
        c(2, "Thue-Morse by formula and by automaton", 5, thue_morse),
        c(3, "repetitions from low complexity", 30, repetition_lemma),
        c(4, "product formula and heights", 10, heights),
        c(5, "periodic approximants and the common plane", 30, abl),
        c(6, "power sums", 60, power_sums),
        c(7, "surface criteria anchors", 1, surface_anchors),
        c(8, "weight solver on random matrices", 300, levin_property),
        c(9, "common bases of filtrations", 60, filtrations),
        c(10, "curve budgets", 1, budgets),
        c(11, "F(gamma) >= F(beta/2)", 30, gamma_optimal),
    ]
}

impl Criterion {
    pub fn run(&self, seed: u64) -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(self.id));
        let start = Instant::now();
        let res = (self.check)(&mut rng);
        let elapsed = start.elapsed();
        let checks_passed = res.is_ok();
        let mut detail = res.unwrap_or_else(|e| e);
        let in_time = elapsed <= self.limit;
        if !in_time {
            detail.push_str(" [over time limit]");
        }
        Outcome {
            id: self.id,
            title: self.title,
            passed: checks_passed && in_time,
            checks_passed,
            detail,
            elapsed_ms: elapsed.as_millis(),
            limit_ms: self.limit.as_millis(),
        }
    }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    criteria().iter().map(|c| c.run(seed)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok_or<T>(r: Result<T>, ctx: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{ctx}: {e}"))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn figure1(_: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let m = FiniteAutomaton::figure1();
    let out = ok_or(m.run(&[0, 0, 1, 0, 0]), "run")?;
    ensure(out == "b", || format!("word 00100 gave {out}"))?;
    let terms: Vec<&str> = (0..5).map(|n| m.automatic_term(n)).collect();
    ensure(terms == ["b", "a", "b", "a", "a"], || format!("terms {terms:?}"))?;
    Ok("00100 -> b; terms b,a,b,a,a".into())
}

fn thue_morse(_: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let n = 1 << 16;
    let machine = FiniteAutomaton::thue_morse().automatic_prefix(n);
    let direct = thue_morse_direct(n);
    ensure(direct.prefix(8).to_string() == "01101001", || "first 8 terms".into())?;
    ensure(machine.prefix(8).to_string() == "01101001", || "first 8 machine terms".into())?;
    // a third route: t(2n) = t(n), t(2n+1) = 1 − t(n)
    let mut t = vec![0u32; n];
    for i in 1..n {
        t[i] = if i % 2 == 0 { t[i / 2] } else { 1 - t[i / 2] };
    }
    ensure(machine.symbols() == direct.symbols() && direct.symbols() == t.as_slice(), || {
        "routes disagree".into()
    })?;
    Ok(format!("agreement on {n} terms"))
}

/// `A P P P …` truncated to `len`, over an alphabet of `k` letters.
fn eventually_periodic(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let k = rng.gen_range(2..=4u32);
    let pre: Vec<u32> = (0..rng.gen_range(0..=5)).map(|_| rng.gen_range(0..k)).collect();
    let per: Vec<u32> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..k)).collect();
    let symbols: Vec<u32> = pre.iter().chain(per.iter().cycle()).take(len).copied().collect();
    Word::new(Alphabet::digits(k), symbols).expect("symbols below k")
}

fn repetition_lemma(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let cases = 500;
    for case in 0..cases {
        let w = eventually_periodic(rng, 256);
        let n = rng.gen_range(1..=24usize);
        let rho = complexity(&w, n) as i64;
        // κ just above ρ(n)/n, with a random slack in (0, 3]
        let kappa = BigRational::new((rho * 4 + rng.gen_range(1..=12)).into(), (4 * n as i64).into());
        let total = lemma_prefix_len(n, &kappa);
        let rep = ok_or(repetition_from_low_complexity(&w, n, &kappa), &format!("case {case}"))?;
        let s = w.symbols();
        let (k, m, l) = (rep.k, rep.n, rep.len);
        let inside = k >= 1 && k + l <= m && m + l - 1 <= total;
        ensure(inside && s[k - 1..k - 1 + l] == s[m - 1..m - 1 + l], || {
            format!("case {case}: invalid repetition {rep:?} in prefix {total}")
        })?;
        ensure(3 * l >= n, || format!("case {case}: length {l} < n/3 with n = {n}"))?;
        let eps_n = lemma_epsilon(&kappa) * int(total as i64);
        ensure(int(l as i64) >= eps_n, || format!("case {case}: length {l} < eps*N"))?;
    }
    Ok(format!("{cases} words, zero failures"))
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound);
    rat(n, d)
}

fn random_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    loop {
        let x = random_rational(rng, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

fn heights(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    for _ in 0..1000 {
        let a = random_nonzero(rng, 1_000_000);
        let p = ok_or(product_formula_check(&a), "product formula")?;
        ensure(p.is_one(), || format!("product formula gives {p} at {a}"))?;
    }
    for _ in 0..1000 {
        let x = random_rational(rng, 1_000_000);
        let h = height_rational(&x);
        let direct = x.numer().abs().max(x.denom().clone());
        let (max_prod, inv_min) = ok_or(height_products(&x), "height products")?;
        let hq = BigRational::from_integer(h.clone());
        ensure(h == direct && max_prod == hq, || format!("height of {x}"))?;
        if let Some(inv) = inv_min {
            ensure(inv == hq, || format!("min-product form at {x}"))?;
        }
    }
    for _ in 0..500 {
        let len = rng.gen_range(2..=4);
        let x: Vec<BigRational> = (0..len).map(|_| random_rational(rng, 1000)).collect();
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        let c = random_nonzero(rng, 1000);
        let cx: Vec<BigRational> = x.iter().map(|v| v * &c).collect();
        let (h1, h2) = (ok_or(height_vector(&x), "H(x)")?, ok_or(height_vector(&cx), "H(cx)")?);
        ensure(h1 == h2, || format!("H(cx) = {h2} != H(x) = {h1}"))?;
        ensure(h1 == projective_height(&x), || "vector height against gcd route".into())?;
    }
    Ok("1000 product formulas, 1000 heights, 500 vectors".into())
}

/// `max |n_i|` over the primitive integer representative.
fn projective_height(x: &[BigRational]) -> BigRational {
    use num_integer::Integer;
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    BigRational::from_integer(ints.iter().map(|v| (v / &g).abs()).max().expect("nonempty"))
}

fn abl(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let eps = rat(1, 8);
    let mut done = 0;
    while done < 100 {
        let pre: Vec<u32> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..10)).collect();
        let per: Vec<u32> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..10)).collect();
        if per.iter().all(|&d| d == 9) || pre.iter().chain(&per).all(|&d| d == 0) {
            continue;
        }
        // α = (int(A)(10^p − 1) + int(P)) / (10^r (10^p − 1)), computed directly
        let val = |ds: &[u32]| ds.iter().fold(BigInt::zero(), |acc, &d| acc * 10 + d);
        let bp: BigInt = num_traits::pow(BigInt::from(10), per.len()) - 1;
        let alpha = BigRational::new(
            val(&pre) * &bp + val(&per),
            num_traits::pow(BigInt::from(10), pre.len()) * &bp,
        );
        let report = ok_or(abl_pipeline(&alpha, 10, &[40, 60, 80], &eps), "pipeline")?;
        ensure(report.rows.len() == 3, || format!("alpha = {alpha}: only {} patterns", report.rows.len()))?;
        for row in &report.rows {
            ensure(row.datum.product_value.is_zero(), || format!("alpha = {alpha}: nonzero product"))?;
        }
        let rows: Vec<Vector> = report
            .rows
            .iter()
            .map(|r| r.datum.x.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        ensure(linalg::rank(&rows) <= 2, || format!("alpha = {alpha}: rank 3"))?;
        let plane = report.plane.ok_or_else(|| format!("alpha = {alpha}: no plane"))?;
        ensure((&plane.mu + &plane.nu * &alpha).is_zero(), || {
            format!("alpha = {alpha}: mu + nu*alpha = {}", &plane.mu + &plane.nu * &alpha)
        })?;
        for x in &rows {
            let dot = &plane.mu * &x[0] + &plane.lambda * &x[1] + &plane.nu * &x[2];
            ensure(dot.is_zero(), || format!("alpha = {alpha}: vector off the plane"))?;
        }
        done += 1;
    }
    Ok("100 rationals, planes recover alpha".into())
}

fn random_power_sum(rng: &mut ChaCha8Rng, max_terms: usize) -> PowerSum {
    loop {
        let terms: Vec<(BigRational, BigRational)> = (0..rng.gen_range(1..=max_terms))
            .map(|_| {
                let c = random_nonzero(rng, 9);
                let a = rat(rng.gen_range(1..=12), rng.gen_range(1..=4));
                (c, a)
            })
            .collect();
        let v = PowerSum::canonicalize(terms).expect("positive roots");
        if !v.is_zero() {
            return v;
        }
    }
}

fn power_sums(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    for case in 0..300 {
        let v = random_power_sum(rng, 4);
        let q = rng.gen_range(2..=3u32);
        let u = v.pow(q);
        let w = ok_or(qth_root(&u, q), &format!("case {case}"))?.ok_or_else(|| format!("case {case}: no root of ({v})^{q}"))?;
        ensure(w == v || (q % 2 == 0 && w == -v.clone()), || format!("case {case}: root {w} of ({v})^{q}"))?;
        // independent check at sample points
        for n in -3..=3 {
            ensure(num_traits::pow(w.eval(n), q as usize) == u.eval(n), || format!("case {case}: value at {n}"))?;
        }
    }
    let two: PowerSum = "1:2".parse().expect("literal");
    let d = ok_or(pisot_decompose(&two, 2), "pisot")?.ok_or("pisot decomposition of 2^n missing")?;
    ensure(d.big_q == 2 && d.big_r == 0 && d.w == two, || format!("pisot gave {d:?}"))?;
    let uhs = |s: &str| is_universal_hilbert_candidate(&s.parse().expect("literal")).map(|v| v.candidate);
    ensure(ok_or(uhs("1:2,1:3"), "uhs")?, || "2^n + 3^n not a candidate".into())?;
    ensure(!ok_or(uhs("1:2,1:4"), "uhs")?, || "2^n + 4^n a candidate".into())?;
    let roots: Vec<GaussianRational> =
        ["8+i", "8-i", "2+i", "2-i"].iter().map(|s| s.parse().expect("literal")).collect();
    let dom = ok_or(has_dominant_root(&roots, Direction::Upper), "dominance")?;
    ensure(!dom.dominant && dom.extremal_norm_squared == int(65), || "upper dominance of 8±i, 2±i".into())?;
    Ok("300 roots recovered; pisot, Hilbert and dominance anchors".into())
}

fn surface_anchors(_: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let c4 = ok_or(autissier_check(&IntersectionMatrix::uniform(4, 1, 1), &WeightVector::ones(4)), "r=4")?;
    ensure(c4.iter().all(|c| c.lhs == rat(14, 3) && c.holds), || "r = 4 Autissier".into())?;
    let c3 = ok_or(autissier_check(&IntersectionMatrix::uniform(3, 1, 1), &WeightVector::ones(3)), "r=3")?;
    ensure(c3.iter().all(|c| c.lhs == rat(7, 2) && !c.holds), || "r = 3 Autissier".into())?;
    let p = Pairings::new(int(3), int(2), int(1));
    let gamma = ok_or(p.gamma(), "gamma")?;
    ensure(gamma == QuadraticScalar::rational(int(1)), || format!("gamma = {gamma}"))?;
    let f = ok_or(p.f_theta(&gamma), "F")?;
    ensure(f == QuadraticScalar::rational(rat(4, 9)), || format!("F(gamma) = {f}"))?;
    let p1p1 = IntersectionMatrix::from_integers(&[
        vec![0, 1, 0, 1],
        vec![1, 0, 1, 0],
        vec![0, 1, 0, 1],
        vec![1, 0, 1, 0],
    ])
    .expect("symmetric");
    ensure(matches!(levin_check(&p1p1, 100), Err(crate::Error::ScreenFailed(_))), || {
        "P1xP1 matrix passed the screen".into()
    })?;
    Ok("14/3 > 4, 7/2 < 4, gamma = 1, F = 4/9, screen rejects".into())
}

pub fn random_positive_matrix(rng: &mut ChaCha8Rng, r: usize, max: i64) -> IntersectionMatrix {
    let mut rows = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in i..r {
            let v = rng.gen_range(1..=max);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    IntersectionMatrix::from_integers(&rows).expect("symmetric")
}

/// Recomputes `D²/(D·C_i) (1 + D² C_i² / (6 (D·C_i)²)) > 4 a_i` from the raw entries.
pub fn independent_autissier(m: &IntersectionMatrix, a: &WeightVector) -> bool {
    let r = m.r();
    let a: Vec<BigRational> = a.values().iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut d2 = BigRational::zero();
    for i in 0..r {
        for j in 0..r {
            d2 += &a[i] * &a[j] * m.entry(i, j);
        }
    }
    (0..r).all(|i| {
        let dc: BigRational = (0..r).map(|j| &a[j] * m.entry(i, j)).sum();
        let c2 = m.entry(i, i);
        // multiply through by 6 (D·C)^3 > 0
        let lhs = &d2 * (int(6) * &dc * &dc + &d2 * c2);
        let rhs = int(24) * &a[i] * &dc * &dc * &dc;
        dc.is_positive() && lhs > rhs
    })
}

fn levin_property(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let mut max_attempts = 0;
    for case in 0..200 {
        let r = rng.gen_range(4..=6usize);
        let m = random_positive_matrix(rng, r, 10);
        let cert = ok_or(levin_check(&m, surface::DEFAULT_MAX_ITER), &format!("case {case}"))?;
        ensure(independent_autissier(&m, &cert.weights), || {
            format!("case {case}: weights {} fail the independent check", cert.weights)
        })?;
        max_attempts = max_attempts.max(cert.attempts);
    }
    Ok(format!("200 matrices certified (at most {max_attempts} epsilon rounds)"))
}

fn random_basis(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vector> {
    loop {
        let b: Vec<Vector> = (0..d).map(|_| (0..d).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
        if linalg::rank(&b) == d {
            return b;
        }
    }
}

pub fn random_filtration(rng: &mut ChaCha8Rng, d: usize) -> Filtration {
    let basis = random_basis(rng, d);
    let steps = rng.gen_range(1..=d + 1);
    let mut dims: Vec<usize> = (0..steps).map(|_| rng.gen_range(0..=d)).collect();
    dims.push(d);
    dims.sort_unstable_by(|a, b| b.cmp(a));
    let chain = dims.iter().map(|&k| basis[..k].to_vec()).collect();
    Filtration::new(d, chain).expect("nested by construction")
}

/// Union over `(i, j)` of complements of `(W_{i+1} ∩ W'_j) + (W_i ∩ W'_{j+1})` in `W_i ∩ W'_j`.
pub fn echelon_oracle(f1: &Filtration, f2: &Filtration) -> Vec<Vector> {
    let d = f1.dim();
    let mut a: Vec<Vec<Vector>> = f1.members().to_vec();
    let mut b: Vec<Vec<Vector>> = f2.members().to_vec();
    a.push(Vec::new());
    b.push(Vec::new());
    let mut out: Vec<Vector> = Vec::new();
    for i in 0..a.len() - 1 {
        for j in 0..b.len() - 1 {
            let s = linalg::intersect(&a[i], &b[j], d);
            let mut t = linalg::intersect(&a[i + 1], &b[j], d);
            t.extend(linalg::intersect(&a[i], &b[j + 1], d));
            let t = linalg::basis_of(&t);
            let ext = linalg::extend_basis(&t, &s);
            out.extend(ext.into_iter().skip(t.len()));
        }
    }
    out
}

fn filtrations(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    for case in 0..200 {
        let d = rng.gen_range(1..=8usize);
        let (f1, f2) = (random_filtration(rng, d), random_filtration(rng, d));
        let basis = ok_or(common_filtration_basis(&f1, &f2), &format!("case {case}"))?;
        let oracle = echelon_oracle(&f1, &f2);
        let ours = filtration_certificate(&basis, &f1, &f2);
        let theirs = filtration_certificate(&oracle, &f1, &f2);
        ensure(ours, || format!("case {case} (d = {d}): certificate failed"))?;
        ensure(ours == theirs, || format!("case {case}: oracle feasibility differs"))?;
    }
    Ok("200 pairs certified, oracle agrees".into())
}

fn budgets(_: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let mut report = Vec::new();
    for r in 2..=5u64 {
        for g in 0..=2u64 {
            // brute force over the Riemann–Roch range
            let first_positive = (1..=1000u64)
                .filter(|&n| n * r + 2 > 2 * g)
                .find(|&n| ok_or(curve_budget(r, g, n), "budget").map(|b| b.a > 0).unwrap_or(false));
            let reported = surface::min_positive_n(r, g);
            ensure(first_positive == reported, || format!("r={r} g={g}: {first_positive:?} vs {reported:?}"))?;
            ensure((r == 2) == reported.is_none(), || format!("r={r} g={g}: boundary"))?;
            if let Some(n) = reported {
                report.push(format!("r={r},g={g}:n={n}"));
            }
        }
    }
    Ok(format!("r = 2 never positive; {}", report.join(" ")))
}

fn gamma_optimal(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let mut done = 0;
    while done < 500 {
        let c2 = rat(rng.gen_range(1..=20), rng.gen_range(1..=3));
        let d2 = rat(rng.gen_range(1..=60), rng.gen_range(1..=3));
        let dc = rat(rng.gen_range(1..=80), rng.gen_range(1..=3));
        let p = Pairings::new(d2, dc, c2);
        if !p.discriminant().is_positive() {
            continue;
        }
        let gamma = ok_or(p.gamma(), "gamma")?;
        let beta_half = QuadraticScalar::rational(ok_or(p.beta(), "beta")? / int(2));
        let (fg, fb) = (ok_or(p.f_theta(&gamma), "F")?, ok_or(p.f_theta(&beta_half), "F")?);
        ensure(fg >= fb, || format!("F(gamma) = {fg} < F(beta/2) = {fb} at {p:?}"))?;
        done += 1;
    }
    Ok("500 instances".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_on_small_pair() {
        let f1 = Filtration::from_integers(2, &[vec![vec![1, 0]]]).unwrap();
        let f2 = Filtration::from_integers(2, &[vec![vec![1, 1]]]).unwrap();
        let b = echelon_oracle(&f1, &f2);
        assert!(filtration_certificate(&b, &f1, &f2));
    }

    #[test]
    fn independent_checker_agrees_on_anchors() {
        assert!(independent_autissier(&IntersectionMatrix::uniform(4, 1, 1), &WeightVector::ones(4)));
        assert!(!independent_autissier(&IntersectionMatrix::uniform(3, 1, 1), &WeightVector::ones(3)));
    }

    #[test]
    fn quick_criteria() {
        for c in criteria().iter().filter(|c| [1, 7, 10].contains(&c.id)) {
            let o = c.run(DEFAULT_SEED);
            assert!(o.checks_passed, "{}", o.line());
        }
    }
}
