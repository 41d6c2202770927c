use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use graphvar::algebra::{BilinearSpace, Field, StandardForm};
use graphvar::count::{count_points, CountRequest, DEFAULT_WORK_CAP};
use graphvar::graph::Graph;
use graphvar::sampling::{sample_regular_point, SamplerConfig};
use graphvar::splitting::{color_classes, split_matchings, split_tree, VertexWeighting};
use graphvar::variety::{
    canonical_degrees, projective_smoothness_predicate, VarietyContext, VertexAssignment,
};
use graphvar::Error;

/// Graph varieties of bilinear forms: smoothness, sampling, point counts
/// and matching splittings.
///
/// Data goes to --out as JSON (or to stdout when --out is absent); a short
/// summary is printed to stdout. Failures print {"error": {...}} on stderr
/// and exit nonzero.
#[derive(Parser, Debug)]
#[command(name = "graphvar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Edge-list file: one "u v" pair per line, "#" comments, a lone
    /// integer declares a vertex.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,

    /// Q or Fp:p.
    #[arg(long, global = true, default_value = "Q")]
    field: String,

    /// symplectic, symmetric or hyperbolic.
    #[arg(long, global = true, default_value = "symplectic")]
    form: String,

    /// Dimension n of the bilinear space.
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// JSON array of Gram matrix rows; overrides the standard form of --dim.
    #[arg(long, global = true)]
    gram: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Work cap for point counting.
    #[arg(long, global = true)]
    cap: Option<u64>,

    /// Point file ({"field", "vectors"}) for check and certify.
    #[arg(long, global = true)]
    point: Option<PathBuf>,

    /// Weighting file ({"colors", "weights"}) for verify-split.
    #[arg(long, global = true)]
    weighting: Option<PathBuf>,

    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Graph invariants, dimension hypotheses and projective verdict.
    Analyze,
    /// Sample a point of the regular part along a degeneracy order.
    Sample,
    /// Membership, Jacobian rank and regular-part test of a point.
    Check,
    /// Left-kernel certificate of a singular point.
    Certify,
    /// Split the graph into matchings with at most p4(D) colors.
    Split,
    /// Split a forest into matchings with D colors.
    SplitTree,
    /// Verify a vertex weighting.
    VerifySplit,
    /// Exact point count over a prime field.
    Count,
    /// The bilinear edge equations.
    Equations,
}

struct Output {
    data: Value,
    summary: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit_error("Usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    match run(&cli).and_then(|out| deliver(&cli, out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            emit_error(e.kind(), &e.to_string());
            ExitCode::FAILURE
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    let body = json!({ "error": { "kind": kind, "message": message.trim() } });
    eprintln!("{body}");
}

fn deliver(cli: &Cli, out: Output) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(&out.data).expect("JSON values serialize") + "\n";
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| io_error(path, e))?;
            println!("{}", out.summary);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn read_json(path: &Path) -> Result<Value, Error> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, Error> {
    value
        .as_ref()
        .ok_or_else(|| Error::PreconditionViolated(format!("--{flag} is required")))
}

fn load_graph(cli: &Cli) -> Result<Graph, Error> {
    Graph::parse_edge_list(&read(required(&cli.graph, "graph")?)?)
}

fn load_space(cli: &Cli) -> Result<BilinearSpace, Error> {
    let field: Field = cli.field.parse()?;
    let form: StandardForm = cli.form.parse()?;
    match (&cli.gram, cli.dim) {
        (Some(path), dim) => {
            let space = BilinearSpace::from_gram_json(&read(path)?, field, form.kind())?;
            if let Some(n) = dim.filter(|&n| n != space.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: space.dim(),
                });
            }
            Ok(space)
        }
        (None, Some(n)) => BilinearSpace::standard(form, n, field),
        (None, None) => Err(Error::PreconditionViolated(
            "--dim or --gram is required".into(),
        )),
    }
}

fn load_context(cli: &Cli) -> Result<VarietyContext, Error> {
    let space = load_space(cli)?;
    Ok(VarietyContext::new(load_graph(cli)?, space))
}

fn load_point(cli: &Cli, ctx: &VarietyContext) -> Result<VertexAssignment, Error> {
    VertexAssignment::from_json(&read_json(required(&cli.point, "point")?)?, ctx)
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match cli.command {
        Command::Analyze => analyze(cli),
        Command::Sample => sample(cli),
        Command::Check => check(cli),
        Command::Certify => certify(cli),
        Command::Split => {
            let g = load_graph(cli)?;
            split_output(&g, split_matchings(&g)?)
        }
        Command::SplitTree => {
            let g = load_graph(cli)?;
            split_output(&g, split_tree(&g)?)
        }
        Command::VerifySplit => verify_split(cli),
        Command::Count => count(cli),
        Command::Equations => equations(cli),
    }
}

fn analyze(cli: &Cli) -> Result<Output, Error> {
    let g = load_graph(cli)?;
    let (og, d) = g.degeneracy_order();
    let big_d = g.max_degree();
    let mut data = json!({
        "vertices": g.order().to_string(),
        "edges": g.size().to_string(),
        "max_degree": big_d.to_string(),
        "degeneracy": d.to_string(),
        "degeneracy_order": og.order(),
        "is_forest": g.is_forest(),
    });
    let mut summary = format!(
        "|V|={} |E|={} D={big_d} d={d} forest={}",
        g.order(),
        g.size(),
        g.is_forest()
    );
    if cli.dim.is_some() || cli.gram.is_some() {
        let space = load_space(cli)?;
        let n = space.dim();
        let ctx = VarietyContext::new(g.clone(), space);
        let degrees = g.is_forest().then(|| canonical_degrees(&g, n));
        let verdict = projective_smoothness_predicate(&g, n, ctx.space().kind());
        let extra = json!({
            "field": ctx.field().to_string(),
            "form": ctx.space().kind().to_string(),
            "dim": n.to_string(),
            "expected_dimension": ctx.expected_dimension().to_string(),
            "canonical_degrees": degrees.as_ref().map(|c| strings(&c.0)),
            "anti_ample": degrees.as_ref().map(|c| c.is_anti_ample()),
            "hypotheses": {
                "n_ge_2d": n >= 2 * d,
                "n_ge_d_plus_D_minus_1": n + 1 >= d + big_d,
                "n_gt_d_plus_D_minus_1": n + 1 > d + big_d,
                "n_gt_D": n > big_d,
            },
            "projective": verdict,
        });
        data.as_object_mut()
            .expect("object")
            .extend(extra.as_object().expect("object").clone());
        summary += &format!(
            " n={n} expected_dimension={} projective={}",
            ctx.expected_dimension(),
            serde_json::to_value(verdict.verdict)
                .expect("enum serializes")
                .as_str()
                .unwrap_or("?")
        );
    }
    Ok(Output { data, summary })
}

fn sample(cli: &Cli) -> Result<Output, Error> {
    let ctx = load_context(cli)?;
    let (og, _) = ctx.graph().degeneracy_order();
    let w = sample_regular_point(&og, ctx.space(), &SamplerConfig::with_seed(cli.seed))?;
    Ok(Output {
        summary: format!(
            "sampled a regular point on {} vertices (seed {})",
            w.len(),
            cli.seed
        ),
        data: w.to_json(),
    })
}

fn check(cli: &Cli) -> Result<Output, Error> {
    let ctx = load_context(cli)?;
    let w = load_point(cli, &ctx)?;
    let member = ctx.is_member(&w)?;
    let rank = ctx.jacobian(&w)?.rank();
    let (og, _) = ctx.graph().degeneracy_order();
    let regular = ctx.regular_part_test(&og, &w)?;
    let smooth = member.then_some(rank == ctx.graph().size());
    let data = json!({
        "member": member,
        "residuals": strings(ctx.residuals(&w)?.iter().map(|x| x.to_decimal())),
        "jacobian_rank": rank.to_string(),
        "edges": ctx.graph().size().to_string(),
        "smooth": smooth,
        "regular_part": regular,
        "expected_dimension": ctx.expected_dimension().to_string(),
    });
    Ok(Output {
        summary: format!(
            "member={member} rank={rank}/{} regular_part={regular}",
            ctx.graph().size()
        ),
        data,
    })
}

fn certify(cli: &Cli) -> Result<Output, Error> {
    let ctx = load_context(cli)?;
    let w = load_point(cli, &ctx)?;
    let cert = ctx.singular_certificate(&w)?;
    let data = match &cert {
        Some(c) => {
            json!({ "singular": true, "certificate": c.to_json(), "verified": c.verify(&ctx, &w) })
        }
        None => json!({ "singular": false, "certificate": null }),
    };
    Ok(Output {
        summary: if cert.is_some() {
            "singular point; certificate written".into()
        } else {
            "smooth point; Jacobian has full row rank".into()
        },
        data,
    })
}

fn split_output(g: &Graph, vw: VertexWeighting) -> Result<Output, Error> {
    let report = color_classes(g, &vw)?;
    Ok(Output {
        summary: format!("{} colors, valid={}", vw.color_count(), report.valid),
        data: vw.to_json(),
    })
}

fn verify_split(cli: &Cli) -> Result<Output, Error> {
    let g = load_graph(cli)?;
    let vw = VertexWeighting::from_json(&read_json(required(&cli.weighting, "weighting")?)?)?;
    let report = color_classes(&g, &vw)?;
    Ok(Output {
        summary: format!(
            "valid={} strict={} colors={}",
            report.valid, report.all_strict, report.color_count
        ),
        data: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn count(cli: &Cli) -> Result<Output, Error> {
    let ctx = load_context(cli)?;
    let report = count_points(&CountRequest {
        graph: ctx.graph(),
        space: ctx.space(),
        cap: cli.cap.unwrap_or(DEFAULT_WORK_CAP),
    })?;
    Ok(Output {
        summary: format!(
            "|X(F_{})| = {} (ratio to q^{} = {})",
            report.q, report.count, report.expected_dimension, report.ratio
        ),
        data: report.to_json(),
    })
}

fn equations(cli: &Cli) -> Result<Output, Error> {
    let ctx = load_context(cli)?;
    let eqs: Vec<Value> = ctx.equations().iter().map(|e| e.to_json()).collect();
    Ok(Output {
        summary: format!(
            "{} equations in {} variables",
            eqs.len(),
            ctx.graph().order() * ctx.dim()
        ),
        data: json!({
            "field": ctx.field().to_string(),
            "dim": ctx.dim().to_string(),
            "variables": (ctx.graph().order() * ctx.dim()).to_string(),
            "expected_dimension": ctx.expected_dimension().to_string(),
            "equations": eqs,
        }),
    })
}
