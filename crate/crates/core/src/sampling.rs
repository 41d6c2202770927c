//! Constructive points of `X(G, W)`: random points of the regular locus of
//! an ordered graph, the explicit singular points on cycles, and zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BilinearSpace, Field, FormKind, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::graph::{Graph, OrderedGraph, Vertex};
use crate::variety::{SingularityCertificate, VarietyContext, VertexAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Coefficients over ℚ are drawn from `[-bound, bound]`.
    pub bound: i64,
    pub max_retries: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            bound: 10,
            max_retries: 64,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..Default::default()
        }
    }
}

/// Draws a point whose older-neighbor vectors are independent at every
/// vertex.
///
/// Vertices are filled from the largest to the smallest. The vector of `v`
/// is drawn from the orthogonal complement of its (already assigned) older
/// neighbors, and redrawn while it is zero or falls into the span of the
/// assigned older neighbors of some younger neighbor of `v`.
pub fn sample_regular_point(
    og: &OrderedGraph,
    ws: &BilinearSpace,
    cfg: &SamplerConfig,
) -> Result<VertexAssignment> {
    if cfg.bound < 1 || cfg.max_retries < 1 {
        return Err(Error::PreconditionViolated(
            "sampler needs bound >= 1 and max_retries >= 1".into(),
        ));
    }
    let n = ws.dim();
    let d = og.degeneracy();
    if n < 2 * d {
        return Err(Error::PreconditionViolated(format!(
            "dimension {n} < 2·{d} (twice the degeneracy of the order)"
        )));
    }
    let field = ws.field();
    let g = og.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut vectors: Vec<Option<Vec<Scalar>>> = vec![None; g.order()];

    for &v in og.order().iter().rev() {
        let older = og.older_neighbors(v);
        let rows: Vec<Vec<Scalar>> = older
            .iter()
            .map(|&u| ws.gram().mul_vec(assigned(&vectors, u)))
            .collect();
        let basis = if rows.is_empty() {
            Matrix::identity(field, n).to_rows()
        } else {
            Matrix::from_rows(field, rows)?.kernel_basis()
        };

        // spans that w(v) must avoid, one per younger neighbor
        let avoid: Vec<Vec<Vec<Scalar>>> = og
            .younger_neighbors(v)
            .into_iter()
            .map(|x| {
                og.older_neighbors(x)
                    .into_iter()
                    .filter_map(|u| vectors[u].clone())
                    .collect()
            })
            .collect();
        if let Field::Prime(p) = field {
            let constraints = avoid.len() as u64 + 1;
            if p <= constraints {
                return Err(Error::PreconditionViolated(format!(
                    "p = {p} too small for {constraints} independence constraints at vertex {v}"
                )));
            }
        }

        let mut chosen = None;
        for _ in 0..cfg.max_retries {
            let x = draw(&basis, field, n, cfg.bound, &mut rng);
            if acceptable(&x, &avoid, field)? {
                chosen = Some(x);
                break;
            }
        }
        match chosen {
            Some(x) => vectors[v] = Some(x),
            None => {
                return Err(Error::RetriesExhausted {
                    vertex: v,
                    retries: cfg.max_retries,
                })
            }
        }
    }
    Ok(VertexAssignment::new(
        field,
        vectors
            .into_iter()
            .map(|x| x.expect("every vertex visited"))
            .collect(),
    ))
}

fn assigned(vectors: &[Option<Vec<Scalar>>], u: Vertex) -> &[Scalar] {
    vectors[u]
        .as_deref()
        .expect("older neighbors are assigned first")
}

fn draw(
    basis: &[Vec<Scalar>],
    field: Field,
    n: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> Vec<Scalar> {
    let mut x = vec![field.zero(); n];
    for b in basis {
        let c = match field {
            Field::Rational => field.from_i64(rng.gen_range(-bound..=bound)),
            Field::Prime(p) => field.residue(rng.gen_range(0..p)),
        };
        if c.is_zero() {
            continue;
        }
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi = &*xi + &(&c * bi);
        }
    }
    x
}

fn acceptable(x: &[Scalar], avoid: &[Vec<Vec<Scalar>>], field: Field) -> Result<bool> {
    if x.iter().all(Scalar::is_zero) {
        return Ok(false);
    }
    for span in avoid {
        let mut rows = span.clone();
        rows.push(x.to_vec());
        if Matrix::from_rows(field, rows)?.rank() != span.len() + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The all-zero point, which lies on every graph variety.
pub fn zero_point(g: &Graph, ws: &BilinearSpace) -> VertexAssignment {
    VertexAssignment::zero(ws.field(), g.order(), ws.dim())
}

/// The cycle `C_k` with every vertex carrying the same nonzero
/// self-orthogonal vector, and a certificate that the point is singular.
///
/// For alternating forms the certificate weighs every edge 1 along the
/// cyclic direction `0 → 1 → … → k−1 → 0`, so the closing edge `(0, k−1)`
/// gets −1 in `(lo, hi)` orientation. For symmetric forms (even `k` only)
/// the weights alternate ±1 around the cycle.
pub fn cycle_singular_point(
    k: usize,
    ws: &BilinearSpace,
) -> Result<(Graph, VertexAssignment, SingularityCertificate)> {
    let field = ws.field();
    let n = ws.dim();
    let g = Graph::cycle(k)?;
    let (vector, alternate) = match ws.kind() {
        FormKind::Symplectic => {
            if n < 4 {
                return Err(Error::UnsupportedCombination(format!(
                    "symplectic cycle points need dimension >= 4, got {n}"
                )));
            }
            let mut e1 = vec![field.zero(); n];
            e1[0] = field.one();
            (e1, false)
        }
        FormKind::Symmetric => {
            if k % 2 == 1 {
                return Err(Error::UnsupportedCombination(format!(
                    "odd cycle C_{k} with a symmetric form"
                )));
            }
            let iso = isotropic_vector(ws).ok_or_else(|| {
                Error::UnsupportedCombination("no isotropic vector found in the space".into())
            })?;
            (iso, true)
        }
    };
    let weights = (0..k)
        .map(|i| {
            let j = (i + 1) % k;
            let sign = if alternate {
                if i % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else if i < j {
                1
            } else {
                -1
            };
            ((i.min(j), i.max(j)), field.from_i64(sign))
        })
        .collect();
    let cert = SingularityCertificate::new(weights)?;
    let w = VertexAssignment::constant(field, k, vector);
    let ctx = VarietyContext::new(g.clone(), ws.clone());
    debug_assert!(ctx.is_member(&w).unwrap_or(false));
    debug_assert!(cert.verify(&ctx, &w));
    Ok((g, w, cert))
}

/// Looks for `⟨x, x⟩ = 0` among `e_i` and `e_i ± e_j`.
fn isotropic_vector(ws: &BilinearSpace) -> Option<Vec<Scalar>> {
    let field = ws.field();
    let n = ws.dim();
    let unit = |i: usize| {
        let mut x = vec![field.zero(); n];
        x[i] = field.one();
        x
    };
    let is_iso = |x: &Vec<Scalar>| ws.pair(x, x).map(|s| s.is_zero()).unwrap_or(false);
    if let Some(x) = (0..n).map(unit).find(is_iso) {
        return Some(x);
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1] {
                let mut x = unit(i);
                x[j] = field.from_i64(s);
                if is_iso(&x) {
                    return Some(x);
                }
            }
        }
    }
    None
}
