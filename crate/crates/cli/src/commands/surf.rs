use num_rational::BigRational;
use serde_json::json;
use subspace_core::surface::{
    autissier_check, common_filtration_basis, curve_budget, cz_check, d_dot, d_squared, etheta_lower_bound,
    filtration_certificate, fixed_point_weights, levin_check, linear_form, min_positive_n, quadratic_form,
    balanced_within, Filtration, Pairings, QuadraticScalar,
};
use subspace_core::verify::random_filtration;
use subspace_core::{Error, Result};

use crate::parse;
use crate::report::Builder;

#[derive(Debug, clap::Args)]
pub struct CzArgs {
    /// Intersection matrix: a JSON file or inline JSON.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Positive integer weights "a_1,…,a_r".
    #[arg(long)]
    pub weights: Option<String>,
    /// Arbitrary rational vector: report Q(x) and each L_i(x) instead.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub vector: Option<Vec<String>>,
    /// Direct pairings "D2,DC,C2" for a single index.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pairings: Option<Vec<String>>,
    /// Evaluate F at this point: a rational, "gamma" or "beta/2".
    #[arg(long)]
    pub theta: Option<String>,
    /// Order n for the leading term of the E_theta lower bound.
    #[arg(long)]
    pub n: Option<u64>,
}

fn theta(spec: &str, p: &Pairings) -> Result<QuadraticScalar> {
    match spec {
        "gamma" => p.gamma(),
        "beta/2" => Ok(QuadraticScalar::rational(p.beta()? / BigRational::from_integer(2.into()))),
        s => Ok(QuadraticScalar::rational(parse::rational(s)?)),
    }
}

fn pairings_report(p: &Pairings, args: &CzArgs, b: &mut Builder) -> Result<()> {
    let gamma = p.gamma()?;
    b.verdict("gamma", &gamma);
    b.verdict("F(gamma)", p.f_theta(&gamma)?);
    if let Some(t) = &args.theta {
        b.input("theta", t);
        let th = theta(t, p)?;
        b.verdict(format!("F({t})"), p.f_theta(&th)?);
        if let Some(n) = args.n {
            b.input("n", n.to_string());
            let bound = etheta_lower_bound(p, n, &th)?;
            b.note(format!("E_theta lower bound is {}: O(n^2) correction not evaluated", bound.tag));
            b.verdict("ethetaLeading", &bound.leading);
        }
    }
    Ok(())
}

pub fn cz_cmd(args: &CzArgs, b: &mut Builder) -> Result<()> {
    if let Some(ps) = &args.pairings {
        b.input("pairings", ps.join(","));
        let v = parse::rationals(ps)?;
        let [d2, dc, c2]: [BigRational; 3] =
            v.try_into().map_err(|v: Vec<_>| Error::DimensionMismatch { expected: 3, got: v.len() })?;
        return pairings_report(&Pairings::new(d2, dc, c2), args, b);
    }
    let m = parse::matrix(args.matrix.as_deref().ok_or_else(|| missing("--matrix"))?, b)?;
    if let Some(v) = &args.vector {
        b.input("vector", v.join(","));
        let x = parse::rationals(v)?;
        b.verdict("D^2", quadratic_form(&m, &x)?.to_string());
        for i in 1..=m.r() {
            b.verdict(format!("D.C_{i}"), linear_form(&m, &x, i)?.to_string());
        }
        return Ok(());
    }
    let a = parse::weights(args.weights.as_deref().ok_or_else(|| missing("--weights"))?, b)?;
    if args.theta.is_some() {
        return Err(Error::PreconditionFailed("--theta needs --pairings".into()));
    }
    b.verdict("D^2", d_squared(&m, &a)?.to_string());
    for i in 1..=m.r() {
        b.verdict(format!("D.C_{i}"), d_dot(&m, &a, i)?.to_string());
    }
    let checks = cz_check(&m, &a)?;
    b.criterion(checks.iter().all(|c| c.holds));
    b.verdict("indices", &checks);
    if !m.ample() {
        b.note("matrix not asserted ample");
    }
    Ok(())
}

fn missing(flag: &str) -> Error {
    Error::PreconditionFailed(format!("{flag} is required"))
}

#[derive(Debug, clap::Args)]
pub struct AutArgs {
    #[arg(long)]
    pub matrix: String,
    #[arg(long)]
    pub weights: String,
    /// Multiply the weights by this positive integer first.
    #[arg(long)]
    pub scale: Option<u64>,
}

pub fn aut_cmd(args: &AutArgs, b: &mut Builder) -> Result<()> {
    let m = parse::matrix(&args.matrix, b)?;
    let mut a = parse::weights(&args.weights, b)?;
    if let Some(t) = args.scale {
        b.input("scale", t.to_string());
        a = parse::scaled(&a, t)?;
        b.verdict("weights", a.to_string());
    }
    let checks = autissier_check(&m, &a)?;
    b.criterion(checks.iter().all(|c| c.holds));
    b.verdict("indices", &checks);
    if !m.ample() {
        b.note("matrix not asserted ample");
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct LevinArgs {
    #[arg(long)]
    pub matrix: String,
}

pub fn levin_cmd(args: &LevinArgs, max_iter: usize, b: &mut Builder) -> Result<()> {
    let m = parse::matrix(&args.matrix, b)?;
    b.input("max-iter", max_iter.to_string());
    match levin_check(&m, max_iter) {
        Ok(cert) => {
            b.criterion(true);
            b.verdict("certificate", &cert);
        }
        Err(e @ (Error::ScreenFailed(_) | Error::NoConvergence(_))) => {
            b.criterion(false);
            b.verdict("certificate", None::<()>);
            b.note(e.to_string());
        }
        Err(e) => return Err(e),
    }
    b.note("ampleness of the boundary is asserted by the caller");
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub matrix: String,
    #[arg(long, default_value = "1/10")]
    pub eps: String,
}

pub fn weights_cmd(args: &WeightsArgs, max_iter: usize, b: &mut Builder) -> Result<()> {
    let m = parse::matrix(&args.matrix, b)?;
    b.input("eps", &args.eps);
    b.input("max-iter", max_iter.to_string());
    let eps = parse::rational(&args.eps)?;
    let fp = fixed_point_weights(&m, &eps, max_iter)?;
    let balanced = balanced_within(&m, &fp.weights, &eps)?;
    b.criterion(balanced);
    b.verdict("weights", fp.weights.to_string());
    b.verdict("iterations", fp.iterations);
    b.verdict("deviation", fp.deviation.to_string());
    b.verdict("balanced", balanced);
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct FiltrationArgs {
    /// Ambient dimension d.
    #[arg(long)]
    pub dim: usize,
    /// Members below the full space, as JSON [[vector, …], …] (file or inline).
    #[arg(long, requires = "f2")]
    pub f1: Option<String>,
    #[arg(long, requires = "f1")]
    pub f2: Option<String>,
    /// Use random chains drawn from --seed instead.
    #[arg(long, conflicts_with_all = ["f1", "f2"])]
    pub random: bool,
}

fn vectors_json(vs: &[Vec<BigRational>]) -> serde_json::Value {
    json!(vs.iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn filtration_cmd(args: &FiltrationArgs, seed: u64, b: &mut Builder) -> Result<()> {
    b.input("dim", args.dim.to_string());
    let (f1, f2) = match (&args.f1, &args.f2, args.random) {
        (Some(a), Some(c), false) => {
            let (ta, tc) = (parse::json_text(a)?, parse::json_text(c)?);
            b.input("f1", &ta);
            b.input("f2", &tc);
            (
                Filtration::from_integers(args.dim, &parse::integer_vectors(&ta)?)?,
                Filtration::from_integers(args.dim, &parse::integer_vectors(&tc)?)?,
            )
        }
        (None, None, true) => {
            b.input("seed", seed.to_string());
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let f1 = random_filtration(&mut rng, args.dim);
            let f2 = random_filtration(&mut rng, args.dim);
            b.verdict("f1", f1.members().iter().map(|s| vectors_json(s)).collect::<Vec<_>>());
            b.verdict("f2", f2.members().iter().map(|s| vectors_json(s)).collect::<Vec<_>>());
            (f1, f2)
        }
        _ => return Err(Error::PreconditionFailed("give --f1 and --f2, or --random".into())),
    };
    let basis = common_filtration_basis(&f1, &f2)?;
    let ok = filtration_certificate(&basis, &f1, &f2);
    b.criterion(ok);
    b.verdict("basis", vectors_json(&basis));
    b.verdict("certificate", ok);
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct BudgetArgs {
    /// Number of points at infinity.
    #[arg(long)]
    pub r: u64,
    /// Genus.
    #[arg(long)]
    pub g: u64,
    /// Divisor multiple; omitted means report only the least n with A > 0.
    #[arg(long)]
    pub n: Option<u64>,
}

pub fn budget_cmd(args: &BudgetArgs, b: &mut Builder) -> Result<()> {
    b.input("r", args.r.to_string());
    b.input("g", args.g.to_string());
    match args.n {
        Some(n) => {
            b.input("n", n.to_string());
            let c = curve_budget(args.r, args.g, n)?;
            b.criterion(c.a > 0);
            b.verdict("ell", c.ell.to_string());
            b.verdict("A", c.a.to_string());
            b.verdict("minPositiveN", c.min_positive_n);
        }
        None => {
            let n = min_positive_n(args.r, args.g);
            b.criterion(n.is_some());
            b.verdict("minPositiveN", n);
        }
    }
    Ok(())
}
