//! Exact point counts of `X(G, W)` over prime fields.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde_json::{json, Value};

use crate::algebra::{BilinearSpace, Field, Matrix, Scalar, StandardForm};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub const DEFAULT_WORK_CAP: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct CountRequest<'a> {
    pub graph: &'a Graph,
    pub space: &'a BilinearSpace,
    /// Largest admissible number of enumerated leaves.
    pub cap: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub count: BigUint,
    pub q: u64,
    pub expected_dimension: i64,
    /// `count / q^expected_dimension`.
    pub ratio: BigRational,
}

impl CountReport {
    pub fn to_json(&self) -> Value {
        json!({
            "count": self.count.to_string(),
            "q": self.q.to_string(),
            "expected_dimension": self.expected_dimension.to_string(),
            "ratio": self.ratio.to_string(),
        })
    }
}

/// Counts `|X(G, W)(F_q)|` exactly.
///
/// Vertices are assigned from the top of a degeneracy order down, so each
/// vertex sees at most `d` assigned neighbors and its admissible vectors
/// form the kernel of a small linear system. Kernels are enumerated only
/// for vertices that later vertices depend on; the remaining vertices
/// contribute a factor `q^dim(kernel)`.
pub fn count_points(req: &CountRequest<'_>) -> Result<CountReport> {
    let Field::Prime(q) = req.space.field() else {
        return Err(Error::PreconditionViolated(
            "point counts need a prime field".into(),
        ));
    };
    if req.cap < 1 {
        return Err(Error::PreconditionViolated("work cap must be >= 1".into()));
    }
    let g = req.graph;
    let n = req.space.dim();
    let (og, _) = g.degeneracy_order();
    let sequence: Vec<Vertex> = og.order().iter().rev().copied().collect();
    let enumerate: Vec<bool> = sequence
        .iter()
        .map(|&v| !og.younger_neighbors(v).is_empty())
        .collect();

    let per_vertex = BigUint::from(q).pow(n as u32);
    let estimate = enumerate
        .iter()
        .filter(|&&e| e)
        .fold(BigUint::one(), |acc, _| acc * &per_vertex);
    if estimate > BigUint::from(req.cap) {
        return Err(Error::WorkCapExceeded {
            estimate: estimate.to_string(),
            cap: req.cap,
        });
    }

    let mut counter = Counter {
        graph: g,
        space: req.space,
        q,
        sequence,
        enumerate,
        vectors: vec![None; g.order()],
    };
    let count = counter.count_from(0);

    let d = (g.order() * n) as i64 - g.size() as i64;
    let scale = BigInt::from(q).pow(d.unsigned_abs() as u32);
    let count_int = BigInt::from(count.clone());
    let ratio = if d >= 0 {
        BigRational::new(count_int, scale)
    } else {
        BigRational::from_integer(count_int * scale)
    };
    Ok(CountReport {
        count,
        q,
        expected_dimension: d,
        ratio,
    })
}

struct Counter<'a> {
    graph: &'a Graph,
    space: &'a BilinearSpace,
    q: u64,
    sequence: Vec<Vertex>,
    enumerate: Vec<bool>,
    vectors: Vec<Option<Vec<Scalar>>>,
}

impl Counter<'_> {
    fn count_from(&mut self, step: usize) -> BigUint {
        if step == self.sequence.len() {
            return BigUint::one();
        }
        let v = self.sequence[step];
        let field = self.space.field();
        let n = self.space.dim();
        let rows: Vec<Vec<Scalar>> = self
            .graph
            .neighbors(v)
            .iter()
            .filter_map(|&u| self.vectors[u].as_ref())
            .map(|x| self.space.gram().mul_vec(x))
            .collect();
        let basis = if rows.is_empty() {
            Matrix::identity(field, n).to_rows()
        } else {
            Matrix::from_rows(field, rows)
                .expect("rows share the field")
                .kernel_basis()
        };

        if !self.enumerate[step] {
            let here = BigUint::from(self.q).pow(basis.len() as u32);
            return here * self.count_from(step + 1);
        }

        let mut total = BigUint::zero();
        let mut coeffs = vec![0u64; basis.len()];
        loop {
            let mut x = vec![field.zero(); n];
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c == 0 {
                    continue;
                }
                let c = field.residue(*c);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi = &*xi + &(&c * bi);
                }
            }
            self.vectors[v] = Some(x);
            total += self.count_from(step + 1);
            if !odometer(&mut coeffs, self.q) {
                break;
            }
        }
        self.vectors[v] = None;
        total
    }
}

/// Advances a base-`q` counter; false once it wraps around.
fn odometer(digits: &mut [u64], q: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// `q^(2n−1) + q^n − q^(n−1)`: points of the single-edge variety, split as
/// `u = 0` (any `v`) plus `u ≠ 0` (`v` in a hyperplane).
pub fn edge_count_closed_form(n: u32, q: u64) -> BigUint {
    assert!(n >= 1, "closed form needs n >= 1");
    let q = BigUint::from(q);
    q.clone().pow(2 * n - 1) + q.clone().pow(n) - q.pow(n - 1)
}

/// Counts over each prime in `qs` with the standard form of the given type,
/// returning reports sorted by `q`.
pub fn dimension_probe(
    g: &Graph,
    n: usize,
    form: StandardForm,
    qs: &[u64],
    cap: u64,
) -> Result<Vec<CountReport>> {
    let mut qs = qs.to_vec();
    qs.sort_unstable();
    qs.dedup();
    qs.into_iter()
        .map(|q| {
            let space = BilinearSpace::standard(form, n, Field::prime(q)?)?;
            count_points(&CountRequest {
                graph: g,
                space: &space,
                cap,
            })
        })
        .collect()
}
