use subspace_core::powersum::{
    has_dominant_root, is_universal_hilbert_candidate_with_bound, pisot_decompose_over, pure_power_form,
    qth_root_with_limit, roots_multiplicatively_independent_with_bound, Direction, GaussianRational, PowerSum,
    DEFAULT_STEP_LIMIT,
};
use subspace_core::{Error, Result};

use crate::parse;
use crate::report::Builder;

fn power_sum(key: &str, s: &str, b: &mut Builder) -> Result<PowerSum> {
    b.input(key, s);
    s.parse()
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Power sum as "coeff:root,…", e.g. "1:4,2:2,1:1".
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    /// Add this power sum.
    #[arg(long, allow_hyphen_values = true)]
    pub plus: Option<String>,
    /// Multiply by this power sum.
    #[arg(long, allow_hyphen_values = true)]
    pub times: Option<String>,
    /// Raise to this power.
    #[arg(long)]
    pub pow: Option<u32>,
    /// Restrict to the progression n -> Qn + R, given as "Q,R".
    #[arg(long, allow_hyphen_values = true)]
    pub progression: Option<String>,
    /// Points at which to evaluate (comma-separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub n: Vec<i64>,
}

pub fn eval_cmd(args: &EvalArgs, b: &mut Builder) -> Result<()> {
    let mut u = power_sum("u", &args.u, b)?;
    if let Some(v) = &args.plus {
        u = u + power_sum("plus", v, b)?;
    }
    if let Some(v) = &args.times {
        u = u * power_sum("times", v, b)?;
    }
    if let Some(q) = args.pow {
        b.input("pow", q.to_string());
        u = u.pow(q);
    }
    if let Some(p) = &args.progression {
        b.input("progression", p);
        let (q, r) = p.split_once(',').ok_or_else(|| Error::Parse(format!("progression {p:?}: expected Q,R")))?;
        let q: u32 = q.trim().parse().map_err(|_| Error::Parse(format!("Q in {p:?}")))?;
        let r: i64 = r.trim().parse().map_err(|_| Error::Parse(format!("R in {p:?}")))?;
        if q == 0 {
            return Err(Error::PreconditionFailed("Q must be positive".into()));
        }
        u = u.progression(q, r);
    }
    b.verdict("powerSum", u.to_string());
    b.verdict("terms", &u);
    if !args.n.is_empty() {
        b.input("n", format!("{:?}", args.n));
    }
    for &n in &args.n {
        b.verdict(format!("u({n})"), u.eval(n).to_string());
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct RootArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
    pub step_limit: usize,
    /// Also search for u = a^(n+r) w^q.
    #[arg(long)]
    pub pure: bool,
}

pub fn root_cmd(args: &RootArgs, b: &mut Builder) -> Result<()> {
    let u = power_sum("u", &args.u, b)?;
    b.input("q", args.q.to_string());
    b.input("step-limit", args.step_limit.to_string());
    let w = qth_root_with_limit(&u, args.q, args.step_limit)?;
    b.verdict("root", w.as_ref().map(ToString::to_string));
    b.criterion(w.is_some());
    if args.pure {
        b.input("pure", "1");
        let form = pure_power_form(&u, args.q)?;
        b.verdict(
            "purePowerForm",
            form.map(|f| serde_json::json!({ "a": f.a.to_string(), "r": f.r, "v": f.v.to_string() })),
        );
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct PisotArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    #[arg(long)]
    pub q: u32,
    /// Moduli Q to try, in order (default q, 2q).
    #[arg(long, value_delimiter = ',')]
    pub qs: Vec<u32>,
}

pub fn pisot_cmd(args: &PisotArgs, b: &mut Builder) -> Result<()> {
    let u = power_sum("u", &args.u, b)?;
    b.input("q", args.q.to_string());
    let qs = if args.qs.is_empty() { vec![args.q, 2 * args.q] } else { args.qs.clone() };
    b.input("qs", format!("{qs:?}"));
    let d = pisot_decompose_over(&u, args.q, &qs)?;
    b.verdict(
        "decomposition",
        d.as_ref().map(|d| serde_json::json!({ "Q": d.big_q, "R": d.big_r, "w": d.w.to_string() })),
    );
    b.criterion(d.is_some());
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct UhsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Test these positive rationals for multiplicative independence instead.
    #[arg(long, value_delimiter = ',')]
    pub roots: Option<Vec<String>>,
}

pub fn uhs_cmd(args: &UhsArgs, bound: u64, b: &mut Builder) -> Result<()> {
    b.input("factor-bound", bound.to_string());
    match (&args.u, &args.roots) {
        (Some(u), None) => {
            let u = power_sum("u", u, b)?;
            let v = is_universal_hilbert_candidate_with_bound(&u, bound)?;
            b.verdict("candidate", v.candidate);
            b.verdict("reason", &v.reason);
            b.criterion(v.candidate);
        }
        (None, Some(roots)) => {
            b.input("roots", roots.join(","));
            let roots = parse::rationals(roots)?;
            let ind = roots_multiplicatively_independent_with_bound(&roots, bound)?;
            b.verdict("independent", ind);
            b.criterion(ind);
        }
        _ => return Err(Error::PreconditionFailed("give exactly one of --u, --roots".into())),
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum DirectionArg {
    Upper,
    Lower,
}

#[derive(Debug, clap::Args)]
pub struct DominantArgs {
    /// Gaussian rationals such as 8+i, 2-i, 3 (comma-separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub roots: Vec<String>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Upper)]
    pub direction: DirectionArg,
}

pub fn dominant_cmd(args: &DominantArgs, b: &mut Builder) -> Result<()> {
    b.input("roots", args.roots.join(","));
    let direction = match args.direction {
        DirectionArg::Upper => Direction::Upper,
        DirectionArg::Lower => Direction::Lower,
    };
    b.input("direction", format!("{direction:?}"));
    let roots = args.roots.iter().map(|s| s.parse::<GaussianRational>()).collect::<Result<Vec<_>>>()?;
    let d = has_dominant_root(&roots, direction)?;
    b.verdict("dominant", d.dominant);
    b.verdict("witness", d.witness.as_ref().map(ToString::to_string));
    b.verdict("extremalNormSquared", d.extremal_norm_squared.to_string());
    b.criterion(d.dominant);
    Ok(())
}
