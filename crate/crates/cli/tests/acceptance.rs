//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use graphvar::algebra::{BilinearSpace, Field, Scalar, StandardForm};
use graphvar::count::{count_points, edge_count_closed_form, CountRequest, DEFAULT_WORK_CAP};
use graphvar::graph::{Edge, Graph};
use graphvar::sampling::{cycle_singular_point, sample_regular_point, zero_point, SamplerConfig};
use graphvar::splitting::{brute_min_colors, color_classes, p4, split_matchings, split_tree};
use graphvar::variety::{canonical_degrees, VarietyContext, VertexAssignment};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit_s: u64) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < Duration::from_secs(limit_s), || {
        format!("took {t:?}, limit {limit_s} s")
    })?;
    Ok(t)
}

fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let edges: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

fn random_connected(n: usize, d: usize, extra: usize, rng: &mut impl Rng) -> Graph {
    let mut deg = vec![0usize; n];
    let mut edges: Vec<Edge> = Vec::new();
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| deg[u] < d).collect();
        let u = open[rng.gen_range(0..open.len())];
        edges.push((u, v));
        deg[u] += 1;
        deg[v] += 1;
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let e = (a.min(b), a.max(b));
        if a != b && deg[a] < d && deg[b] < d && !edges.contains(&e) {
            edges.push(e);
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    Graph::new(n, edges).unwrap()
}

fn random_forest(n: usize, rng: &mut impl Rng) -> Graph {
    let edges: Vec<Edge> = (1..n)
        .filter_map(|v| rng.gen_bool(0.9).then(|| (rng.gen_range(0..v), v)))
        .collect();
    Graph::new(n, edges).unwrap()
}

fn random_form(rng: &mut impl Rng, n: usize) -> StandardForm {
    match rng.gen_range(0..3) {
        0 if n.is_multiple_of(2) => StandardForm::Symplectic,
        2 if n.is_multiple_of(2) => StandardForm::Hyperbolic,
        _ => StandardForm::Symmetric,
    }
}

fn jacobian_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut points = 0;
    while points < 200 {
        let g = random_graph(rng.gen_range(1..=8), 0.35, &mut rng);
        let (og, d) = g.degeneracy_order();
        let n = rng.gen_range((2 * d).max(1)..=6.max(2 * d));
        if n > 6 {
            continue;
        }
        let field = if rng.gen_bool(0.5) {
            Field::Rational
        } else {
            Field::Prime(101)
        };
        let space = BilinearSpace::standard(random_form(&mut rng, n), n, field).unwrap();
        let w = sample_regular_point(&og, &space, &SamplerConfig::with_seed(rng.gen()))
            .map_err(|e| format!("sampling failed: {e}"))?;
        let ctx = VarietyContext::new(g.clone(), space.clone());
        ensure(ctx.is_member(&w).unwrap(), || {
            "sampled point not a member".into()
        })?;
        let e = VertexAssignment::new(
            field,
            (0..g.order())
                .map(|_| {
                    (0..n)
                        .map(|_| field.from_i64(rng.gen_range(-5..=5)))
                        .collect()
                })
                .collect(),
        );
        let moved = ctx.residuals(&w.add(&e)).unwrap();
        let linear = ctx.jacobian(&w).unwrap().mul_vec(&e.flatten());
        for (k, &(u, v)) in g.edges().iter().enumerate() {
            let quadratic = space.pair(e.vector(u), e.vector(v)).unwrap();
            ensure(&moved[k] - &linear[k] == quadratic, || {
                format!("edge {:?} of {:?}", (u, v), g.edges())
            })?;
        }
        points += 1;
    }
    let t = within(start, 10)?;
    Ok(format!("{points} points, {t:.2?}"))
}

fn regular_part_smoothness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut points = 0;
    for trial in 0u64..120 {
        let g = random_graph(rng.gen_range(1..=8), 0.4, &mut rng);
        let (og, d) = g.degeneracy_order();
        let mut n = (2 * d).max(d + g.max_degree()).max(1);
        let form = random_form(&mut rng, n);
        if form != StandardForm::Symmetric && n % 2 == 1 {
            n += 1;
        }
        let field = if trial % 2 == 0 {
            Field::Rational
        } else {
            Field::Prime(10007)
        };
        let space = BilinearSpace::standard(form, n, field).unwrap();
        let w = sample_regular_point(&og, &space, &SamplerConfig::with_seed(trial))
            .map_err(|e| format!("trial {trial}: {e}"))?;
        let ctx = VarietyContext::new(g.clone(), space);
        let ok = ctx.is_member(&w).unwrap()
            && ctx.regular_part_test(&og, &w).unwrap()
            && ctx.jacobian(&w).unwrap().rank() == g.size();
        ensure(ok, || format!("trial {trial} failed on {:?}", g.edges()))?;
        points += 1;
    }
    Ok(format!("{points} sampled points, 0 failures"))
}

fn singular_cycles() -> Outcome {
    let mut cases = 0;
    let mut check = |k: usize, space: BilinearSpace| -> Result<(), String> {
        let (g, w, built) = cycle_singular_point(k, &space).map_err(|e| format!("C{k}: {e}"))?;
        let ctx = VarietyContext::new(g.clone(), space);
        let found = ctx.singular_certificate(&w).unwrap();
        let ok = ctx.is_member(&w).unwrap()
            && ctx.jacobian(&w).unwrap().rank() < g.size()
            && built.verify(&ctx, &w)
            && found.is_some_and(|c| c.verify(&ctx, &w));
        cases += 1;
        ensure(ok, || format!("C{k} failed"))
    };
    for k in 3..=6 {
        for n in [4, 6] {
            check(
                k,
                BilinearSpace::standard(StandardForm::Symplectic, n, Field::Rational).unwrap(),
            )?;
        }
    }
    for k in [4, 6] {
        for n in [2, 4] {
            check(
                k,
                BilinearSpace::standard(StandardForm::Hyperbolic, n, Field::Rational).unwrap(),
            )?;
        }
    }
    Ok(format!("{cases} cycle constructions certified"))
}

fn zero_point_singular() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut graphs = 0;
    for _ in 0..60 {
        let g = random_graph(rng.gen_range(2..=7), 0.5, &mut rng);
        if g.size() == 0 {
            continue;
        }
        let n = rng.gen_range(1..=4);
        let space = BilinearSpace::standard(random_form(&mut rng, n), n, Field::Rational).unwrap();
        let ctx = VarietyContext::new(g.clone(), space.clone());
        let z = zero_point(&g, &space);
        let ok = !ctx.is_smooth_point(&z).unwrap()
            && ctx
                .singular_certificate(&z)
                .unwrap()
                .is_some_and(|c| c.verify(&ctx, &z));
        ensure(ok, || format!("zero point smooth on {:?}", g.edges()))?;
        graphs += 1;
    }
    Ok(format!("{graphs} graphs"))
}

fn naive_count(g: &Graph, space: &BilinearSpace, q: u64) -> u64 {
    let n = space.dim();
    let gram: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match space.gram().get(i, j) {
                    Scalar::Residue { value, .. } => *value,
                    Scalar::Rational(_) => unreachable!(),
                })
                .collect()
        })
        .collect();
    let coords = n * g.order();
    let mut x = vec![0u64; coords];
    let mut total = 0;
    loop {
        total += u64::from(g.edges().iter().all(|&(u, v)| {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s = (s + x[u * n + i] * gram[i][j] % q * x[v * n + j]) % q;
                }
            }
            s == 0
        }));
        let mut k = 0;
        loop {
            if k == coords {
                return total;
            }
            x[k] += 1;
            if x[k] < q {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

fn point_counts() -> Outcome {
    let start = Instant::now();
    let count = |g: &Graph, space: &BilinearSpace| {
        count_points(&CountRequest {
            graph: g,
            space,
            cap: DEFAULT_WORK_CAP,
        })
        .map(|r| r.count)
    };
    for n in 1..=3u32 {
        for q in [2u64, 3, 5] {
            let space =
                BilinearSpace::standard(StandardForm::Symmetric, n as usize, Field::Prime(q))
                    .unwrap();
            let got = count(&Graph::path(2), &space).unwrap();
            ensure(got == edge_count_closed_form(n, q), || {
                format!("edge n={n} q={q}: {got}")
            })?;
        }
    }
    let graphs = [
        Graph::empty(2),
        Graph::path(2),
        Graph::path(3),
        Graph::complete(3),
        Graph::star(3),
        Graph::cycle(4).unwrap(),
        Graph::complete(4),
        Graph::path(4),
    ];
    let mut naive = 0;
    for g in &graphs {
        for (form, n) in [
            (StandardForm::Symmetric, 1),
            (StandardForm::Symmetric, 2),
            (StandardForm::Hyperbolic, 2),
            (StandardForm::Symplectic, 2),
            (StandardForm::Symmetric, 3),
            (StandardForm::Symplectic, 4),
        ] {
            for q in [2u64, 3, 5, 7] {
                if (q as f64).powi((n * g.order()) as i32) > 1e6 {
                    continue;
                }
                let Ok(space) = BilinearSpace::standard(form, n, Field::Prime(q)) else {
                    continue;
                };
                let got = count(g, &space).unwrap();
                let want = naive_count(g, &space, q);
                ensure(got == BigUint::from(want), || {
                    format!("{:?} {form:?} n={n} q={q}: {got} vs {want}", g.edges())
                })?;
                naive += 1;
            }
        }
    }
    let space = BilinearSpace::standard(StandardForm::Symmetric, 2, Field::Prime(3)).unwrap();
    for a in &graphs {
        for b in &graphs[..5] {
            let joint = count(&a.disjoint_union(b), &space).unwrap();
            ensure(
                joint == count(a, &space).unwrap() * count(b, &space).unwrap(),
                || format!("not multiplicative: {:?} + {:?}", a.edges(), b.edges()),
            )?;
        }
    }
    let t = within(start, 60)?;
    Ok(format!(
        "9 closed forms, {naive} naive enumerations, 40 unions, {t:.2?}"
    ))
}

fn bounded_degree_splittings() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0usize;
    for trial in 0..60 {
        let d = 2 + trial % 3;
        let n = rng.gen_range(d + 1..=40);
        let g = random_connected(n, d, rng.gen_range(0..3 * n), &mut rng);
        let vw = split_matchings(&g).map_err(|e| format!("trial {trial}: {e}"))?;
        let report = color_classes(&g, &vw).unwrap();
        let budget = p4(g.max_degree() as u64);
        ensure(report.valid && vw.color_count() as i64 <= budget, || {
            format!(
                "trial {trial}: valid={} colors={} budget={budget}",
                report.valid,
                vw.color_count()
            )
        })?;
        worst = worst.max(vw.color_count());
    }
    ensure(p4(2) == 17 && p4(3) == 71 && p4(4) == 199, || {
        "p4 formula values".into()
    })?;
    let t = within(start, 30)?;
    Ok(format!("60 graphs, D ≤ 4, max {worst} colors, {t:.2?}"))
}

fn tree_splittings() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..60 {
        let t = random_forest(rng.gen_range(2..=200), &mut rng);
        let vw = split_tree(&t).map_err(|e| format!("trial {trial}: {e}"))?;
        let ok = color_classes(&t, &vw).unwrap().valid && vw.color_count() <= t.max_degree();
        ensure(ok, || format!("trial {trial}"))?;
    }
    for leaves in 1..=10 {
        let vw = split_tree(&Graph::star(leaves)).unwrap();
        ensure(vw.color_count() == leaves, || {
            format!("star with {leaves} leaves")
        })?;
    }
    Ok("60 random forests, 10 stars".into())
}

fn brute_force_minimum() -> Outcome {
    let start = Instant::now();
    let cases = [
        (Graph::path(2), 1, 3),
        (Graph::path(3), 2, 3),
        (Graph::complete(3), 3, 4),
    ];
    for (g, want, w) in &cases {
        let got = brute_min_colors(g, 3, *w).map_err(|e| e.to_string())?;
        // every class is a matching, so at least D colors are needed
        ensure(got == Some(*want) && *want >= g.max_degree(), || {
            format!("{:?}: {got:?}", g.edges())
        })?;
    }
    let t = within(start, 120)?;
    Ok(format!("edge 1, path 2, triangle 3, {t:.2?}"))
}

fn canonical_degree_predicate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..50 {
        let f = random_forest(rng.gen_range(1..=30), &mut rng);
        let n = rng.gen_range(1..=8);
        let anti = canonical_degrees(&f, n).is_anti_ample();
        ensure(anti == (n > f.max_degree()), || {
            format!("trial {trial}: n={n} D={}", f.max_degree())
        })?;
    }
    Ok("50 forests".into())
}

fn determinism() -> Outcome {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let scratch = tempfile::tempdir().map_err(|e| e.to_string())?;
    let commands: &[&[&str]] = &[
        &[
            "analyze",
            "--graph",
            "k23.txt",
            "--dim",
            "5",
            "--form",
            "symmetric",
        ],
        &[
            "sample",
            "--graph",
            "k23.txt",
            "--dim",
            "5",
            "--form",
            "symmetric",
            "--seed",
            "3",
        ],
        &[
            "sample", "--graph", "c4.txt", "--dim", "4", "--field", "Fp:101", "--seed", "9",
        ],
        &[
            "check",
            "--graph",
            "c4.txt",
            "--dim",
            "4",
            "--point",
            "c4_equal.json",
        ],
        &[
            "certify",
            "--graph",
            "c4.txt",
            "--dim",
            "4",
            "--point",
            "c4_equal.json",
        ],
        &["split", "--graph", "k23.txt"],
        &["split-tree", "--graph", "path5.txt"],
        &[
            "verify-split",
            "--graph",
            "triangle.txt",
            "--weighting",
            "triangle_weighting.json",
        ],
        &[
            "count",
            "--graph",
            "c4.txt",
            "--dim",
            "2",
            "--form",
            "hyperbolic",
            "--field",
            "Fp:3",
        ],
        &["equations", "--graph", "triangle.txt", "--dim", "2"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let mut runs = Vec::new();
        for rep in 0..2 {
            let out_path = scratch.path().join(format!("{i}-{rep}.json"));
            let out = Command::new(env!("CARGO_BIN_EXE_graphvar"))
                .args(*args)
                .arg("--out")
                .arg(&out_path)
                .current_dir(&golden)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success(), || format!("{args:?} failed"))?;
            runs.push((
                out.stdout,
                std::fs::read(&out_path).map_err(|e| e.to_string())?,
            ));
        }
        ensure(runs[0] == runs[1], || {
            format!("{args:?} differs between runs")
        })?;
    }
    Ok(format!(
        "{} commands × 2 runs byte-identical",
        commands.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("jacobian exactness", jacobian_exactness),
        ("regular-part smoothness", regular_part_smoothness),
        ("singular cycle constructions", singular_cycles),
        ("zero point singular", zero_point_singular),
        ("point-count oracles", point_counts),
        (
            "matching splitting with p4(D) colors",
            bounded_degree_splittings,
        ),
        ("tree splitting with D colors", tree_splittings),
        ("brute-force minimality", brute_force_minimum),
        (
            "canonical degrees anti-ample iff n > D",
            canonical_degree_predicate,
        ),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
