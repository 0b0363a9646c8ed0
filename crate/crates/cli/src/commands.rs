//! One function per subcommand. Each renders its result to a string so the
//! binary only has to print and pick an exit status.

use anyhow::Result;
use dimers::asymptotics::ratios::{exact_ratio_path, float_ratio_path};
use dimers::asymptotics::{
    entropy_bounds, entropy_with, ratio_fixed_point, EntropyEstimate, RatioState,
};
use dimers::hp::{self, Hp};
use dimers::oracle::count_by_boundary_with;
use dimers::recursion::{self, iterate_capped};
use dimers::{graphs, BoundaryCountVector, Family, StageRecord};
use serde::Serialize;

use crate::args::{BuildArgs, CountArgs, EntropyArgs, Format, RatiosArgs, RecurseArgs, VerifyArgs};
use crate::verify::{run_verify, VerifyConfig};

/// Rendered stdout plus whether every requested check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub success: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            success: true,
        }
    }
}

/// Pretty JSON with a trailing newline. Field order follows the struct.
pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(doc)? + "\n")
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn build(args: &BuildArgs) -> Result<Outcome> {
    let g = graphs::build_capped(args.family, args.n, args.build_cap)?;
    let out = match args.output.format {
        Format::Text => g.to_edge_list(),
        Format::Json => to_json(&g.to_document())?,
        Format::Csv => to_csv(
            &["u", "v"],
            g.edges
                .iter()
                .map(|&(a, b)| vec![g.vertices[a].to_string(), g.vertices[b].to_string()]),
        )?,
    };
    Ok(Outcome::ok(out))
}

#[derive(Debug, Serialize)]
struct CountDoc {
    family: Family,
    n: u32,
    counts: BoundaryCountVector,
    m: String,
    steps: u64,
    recursion_agrees: bool,
}

pub fn count(args: &CountArgs) -> Result<Outcome> {
    let g = graphs::build(args.family, args.n)?;
    let c = count_by_boundary_with(&g, &args.oracle.budget(), args.oracle.parallel)?;
    eprintln!("counted in {:.3}s", c.elapsed.as_secs_f64());
    let expected = recursion::iterate(args.family, args.n)?
        .pop()
        .expect("stage n");
    let doc = CountDoc {
        family: args.family,
        n: args.n,
        m: c.counts.total().to_string(),
        recursion_agrees: c.counts == expected.counts,
        counts: c.counts,
        steps: c.steps,
    };
    let v = &doc.counts;
    let out = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(
            &["family", "n", "x", "y", "z", "w", "m", "steps", "recursion_agrees"],
            [vec![
                doc.family.to_string(),
                doc.n.to_string(),
                v.x.to_string(),
                v.y.to_string(),
                v.z.to_string(),
                v.w.to_string(),
                doc.m.clone(),
                doc.steps.to_string(),
                doc.recursion_agrees.to_string(),
            ]],
        )?,
        Format::Text => format!(
            "family = {}\nn = {}\nx = {}\ny = {}\nz = {}\nw = {}\nm = {}\nsteps = {}\nrecursion = {}\n",
            doc.family,
            doc.n,
            v.x,
            v.y,
            v.z,
            v.w,
            doc.m,
            doc.steps,
            if doc.recursion_agrees { "agrees" } else { "DISAGREES" }
        ),
    };
    Ok(Outcome {
        stdout: out,
        success: doc.recursion_agrees,
    })
}

#[derive(Debug, Serialize)]
struct RecurseDoc {
    family: Family,
    stages: Vec<StageRecord>,
}

pub fn recurse(args: &RecurseArgs) -> Result<Outcome> {
    let doc = RecurseDoc {
        family: args.family,
        stages: iterate_capped(args.family, args.n, args.exact_cap)?,
    };
    let out = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(
            &["n", "x", "y", "z", "w", "s", "r", "t", "p", "m"],
            doc.stages.iter().map(|r| {
                let (v, a) = (&r.counts, &r.aggregates);
                [&v.x, &v.y, &v.z, &v.w, &a.s, &a.r, &a.t, &a.p, &r.m]
                    .iter()
                    .map(|x| x.to_string())
                    .fold(vec![r.n.to_string()], |mut row, x| {
                        row.push(x);
                        row
                    })
            }),
        )?,
        Format::Text => doc
            .stages
            .iter()
            .map(|r| {
                let v = &r.counts;
                format!(
                    "n = {}: x = {}, y = {}, z = {}, w = {}, m = {}\n",
                    r.n, v.x, v.y, v.z, v.w, r.m
                )
            })
            .collect(),
    };
    Ok(Outcome::ok(out))
}

#[derive(Debug, Serialize)]
struct RatioRow {
    n: u32,
    alpha: String,
    beta: String,
    gamma: String,
    epsilon: String,
}

#[derive(Debug, Serialize)]
struct LimitDoc {
    value: String,
    /// Certified: the true limit is within `10^-radius_digits` of `value`.
    radius_digits: u32,
    stage: u32,
    precision_bits: usize,
}

#[derive(Debug, Serialize)]
struct RatiosDoc {
    family: Family,
    path: &'static str,
    digits: u32,
    precision_bits: usize,
    stages: Vec<RatioRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<LimitDoc>,
}

fn ratio_row(s: &RatioState, digits: u32) -> RatioRow {
    let [alpha, beta, gamma] = s.rounded(digits);
    RatioRow {
        n: s.n,
        alpha,
        beta,
        gamma,
        epsilon: hp::format_rounded(&s.epsilon, digits),
    }
}

pub fn ratios(args: &RatiosArgs) -> Result<Outcome> {
    if args.n > args.exact_cap {
        return Err(recursion::RecursionError::ResourceLimit {
            stage: args.n,
            cap: args.exact_cap,
        }
        .into());
    }
    // Enough bits that rounding never reaches the printed digits.
    let bits = args
        .precision
        .precision_bits
        .max((f64::from(args.digits) * 3.33) as usize + 64);
    let path = if args.float {
        float_ratio_path(args.family, args.n, bits)?
    } else {
        exact_ratio_path(args.family, args.n, bits)?
    };
    let limit = if args.limit {
        let fp = ratio_fixed_point(args.family, args.digits)?;
        let cap = Hp::new(fp.precision_bits).decimal_digits() as u32;
        Some(LimitDoc {
            value: hp::format_rounded(&fp.value, args.digits),
            radius_digits: hp::digits_below(&fp.radius, cap),
            stage: fp.stage,
            precision_bits: fp.precision_bits,
        })
    } else {
        None
    };
    let doc = RatiosDoc {
        family: args.family,
        path: if args.float { "float" } else { "exact" },
        digits: args.digits,
        precision_bits: Hp::new(bits).bits(),
        stages: path.iter().map(|s| ratio_row(s, args.digits)).collect(),
        limit,
    };
    let out = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(
            &["n", "alpha", "beta", "gamma", "epsilon"],
            doc.stages.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.alpha.clone(),
                    r.beta.clone(),
                    r.gamma.clone(),
                    r.epsilon.clone(),
                ]
            }),
        )?,
        Format::Text => {
            let mut s: String = doc
                .stages
                .iter()
                .map(|r| {
                    format!(
                        "n = {}: alpha = {}, beta = {}, gamma = {}\n",
                        r.n, r.alpha, r.beta, r.gamma
                    )
                })
                .collect();
            if let Some(l) = &doc.limit {
                s += &format!(
                    "limit = {} (within 1e-{} from stage {})\n",
                    l.value, l.radius_digits, l.stage
                );
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

#[derive(Debug, Serialize)]
struct EntropyDoc {
    family: Family,
    digits: u32,
    k: u32,
    mu_per_vertex: String,
    mu_per_edge: String,
    lower: String,
    upper: String,
    agreed_digits: u32,
    precision_bits: usize,
}

pub fn entropy(args: &EntropyArgs) -> Result<Outcome> {
    let bits = args.precision.precision_bits;
    let est: EntropyEstimate = match args.k {
        None => entropy_with(args.family, args.digits, bits, args.exact_cap)?,
        Some(k) => {
            if k > args.exact_cap {
                return Err(recursion::RecursionError::ResourceLimit {
                    stage: k,
                    cap: args.exact_cap,
                }
                .into());
            }
            let b = entropy_bounds(args.family, k, bits)?;
            let digits = args.digits.min(b.agreed_digits);
            EntropyEstimate::from_bounds(b, digits)
        }
    };
    // Outward-rounded bounds, a few places past the certified digits.
    let shown = est.digits + 4;
    let doc = EntropyDoc {
        family: est.family,
        digits: est.digits,
        k: est.k(),
        mu_per_vertex: est.mu_per_vertex_digits(),
        mu_per_edge: est.mu_per_edge_digits(),
        lower: hp::format_truncated(&est.bounds.lower, shown),
        upper: hp::format_ceil(&est.bounds.upper, shown),
        agreed_digits: est.bounds.agreed_digits,
        precision_bits: est.bounds.precision_bits,
    };
    let out = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(
            &["family", "digits", "k", "mu_per_vertex", "mu_per_edge", "lower", "upper", "agreed_digits", "precision_bits"],
            [vec![
                doc.family.to_string(),
                doc.digits.to_string(),
                doc.k.to_string(),
                doc.mu_per_vertex.clone(),
                doc.mu_per_edge.clone(),
                doc.lower.clone(),
                doc.upper.clone(),
                doc.agreed_digits.to_string(),
                doc.precision_bits.to_string(),
            ]],
        )?,
        Format::Text => format!(
            "{}\nfamily = {}\nk = {}\ndigits = {}\nmu_per_edge = {}\nlower = {}\nupper = {}\nagreed_digits = {}\nprecision_bits = {}\n",
            doc.mu_per_vertex,
            doc.family,
            doc.k,
            doc.digits,
            doc.mu_per_edge,
            doc.lower,
            doc.upper,
            doc.agreed_digits,
            doc.precision_bits
        ),
    };
    Ok(Outcome::ok(out))
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let cfg = VerifyConfig {
        families: args
            .family
            .map_or_else(|| Family::ALL.to_vec(), |f| vec![f]),
        strict: args.strict,
        budget: args.oracle.budget(),
        parallel: args.oracle.parallel,
        ..VerifyConfig::default()
    };
    let report = run_verify(&cfg);
    let out = match args.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => to_csv(
            &["name", "reference", "expected", "actual", "pass"],
            report.rows.iter().map(|r| {
                vec![
                    r.name.clone(),
                    r.reference.clone(),
                    r.expected.clone(),
                    r.actual.clone(),
                    r.pass.to_string(),
                ]
            }),
        )?,
        Format::Text => report.to_string(),
    };
    Ok(Outcome {
        stdout: out,
        success: report.pass,
    })
}
