//! The graph variety `X(G, W)`: one bilinear equation `⟨w(u), w(v)⟩ = 0`
//! per edge, its Jacobian, rank-based smoothness tests and singularity
//! certificates.
//!
//! Edges are always oriented `(lo, hi)` with `lo < hi`, rows of the
//! Jacobian follow [`Graph::edges`], and columns are grouped by vertex then
//! coordinate, so vertex `v` owns columns `v*n .. (v+1)*n`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::algebra::form::parse_json_scalar;
use crate::algebra::{BilinearSpace, Field, FormKind, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, OrderedGraph, Vertex};

/// The pair `(G, W)` defining `X(G, W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyContext {
    graph: Graph,
    space: BilinearSpace,
}

/// A point `w: V → W`, stored as one coordinate vector per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexAssignment {
    field: Field,
    vectors: Vec<Vec<Scalar>>,
}

impl VertexAssignment {
    pub fn new(field: Field, vectors: Vec<Vec<Scalar>>) -> Self {
        VertexAssignment { field, vectors }
    }

    pub fn zero(field: Field, vertices: usize, dim: usize) -> Self {
        VertexAssignment {
            field,
            vectors: vec![vec![field.zero(); dim]; vertices],
        }
    }

    /// Every vertex gets a copy of `v`.
    pub fn constant(field: Field, vertices: usize, v: Vec<Scalar>) -> Self {
        VertexAssignment {
            field,
            vectors: vec![v; vertices],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn vector(&self, v: Vertex) -> &[Scalar] {
        &self.vectors[v]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinates flattened in Jacobian column order.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.vectors.iter().flatten().cloned().collect()
    }

    /// Coordinate-wise sum.
    pub fn add(&self, other: &VertexAssignment) -> VertexAssignment {
        let vectors = self
            .vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        VertexAssignment::new(self.field, vectors)
    }

    pub fn all_nonzero(&self) -> bool {
        self.vectors.iter().all(|v| v.iter().any(|x| !x.is_zero()))
    }

    pub fn to_json(&self) -> Value {
        let mut vectors = Map::new();
        for (v, vec) in self.vectors.iter().enumerate() {
            let coords: Vec<Value> = vec.iter().map(|x| Value::String(x.to_decimal())).collect();
            vectors.insert(v.to_string(), Value::Array(coords));
        }
        json!({ "field": self.field.to_string(), "vectors": vectors })
    }

    /// Reads `{"field": "Q"|"Fp:p", "vectors": {vertexId: [scalars]}}`;
    /// every vertex of the context must be present.
    pub fn from_json(value: &Value, ctx: &VarietyContext) -> Result<Self> {
        let field: Field = value
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("assignment needs a \"field\" string".into()))?
            .parse()?;
        if field != ctx.field() {
            return Err(Error::FieldMismatch {
                expected: ctx.field().to_string(),
                found: field.to_string(),
            });
        }
        let map = value
            .get("vectors")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("assignment needs a \"vectors\" object".into()))?;
        let mut vectors = vec![None; ctx.graph.order()];
        for (key, coords) in map {
            let v: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex id {key:?}")))?;
            if v >= vectors.len() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: vectors.len(),
                });
            }
            let coords = coords
                .as_array()
                .ok_or_else(|| Error::Parse(format!("vector of vertex {v} must be an array")))?
                .iter()
                .map(|x| parse_json_scalar(field, x))
                .collect::<Result<Vec<_>>>()?;
            vectors[v] = Some(coords);
        }
        let vectors = vectors
            .into_iter()
            .enumerate()
            .map(|(v, x)| x.ok_or_else(|| Error::Parse(format!("no vector for vertex {v}"))))
            .collect::<Result<Vec<_>>>()?;
        let w = VertexAssignment::new(field, vectors);
        ctx.check_assignment(&w)?;
        Ok(w)
    }
}

/// One edge equation `Σ coefficient · x[a] · x[b]` over global coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearEquation {
    pub edge: Edge,
    /// `(a, b, coefficient)` with `a` a coordinate of the low endpoint and
    /// `b` one of the high endpoint.
    pub terms: Vec<(usize, usize, Scalar)>,
}

impl BilinearEquation {
    pub fn to_json(&self) -> Value {
        json!({
            "edge": [self.edge.0, self.edge.1],
            "terms": self.terms.iter().map(|(a, b, c)| json!({
                "coords": [a, b],
                "coefficient": c.to_decimal(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// A nonzero edge weighting `λ` with `λᵀ · J = 0`, reported against the
/// `(lo, hi)` orientation of each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityCertificate {
    weights: Vec<(Edge, Scalar)>,
}

impl SingularityCertificate {
    /// Weights must be listed against `(lo, hi)` edges.
    pub fn new(weights: Vec<(Edge, Scalar)>) -> Result<Self> {
        if weights.iter().all(|(_, x)| x.is_zero()) {
            return Err(Error::PreconditionViolated(
                "a certificate needs a nonzero weight".into(),
            ));
        }
        if let Some(((u, v), _)) = weights.iter().find(|((u, v), _)| u >= v) {
            return Err(Error::PreconditionViolated(format!(
                "edge ({u}, {v}) is not oriented low to high"
            )));
        }
        Ok(SingularityCertificate { weights })
    }

    pub fn weights(&self) -> &[(Edge, Scalar)] {
        &self.weights
    }

    pub fn weight(&self, e: Edge) -> Option<&Scalar> {
        self.weights.iter().find(|(f, _)| *f == e).map(|(_, x)| x)
    }

    /// Re-checks stationarity by substitution, without forming the
    /// Jacobian: at every vertex `v`,
    /// `Σ_{(v,u)} λ·(gram·w(u)) + Σ_{(u,v)} λ·(±gram·w(u)) = 0`, the sign being
    /// `+` for symmetric and `−` for alternating forms.
    pub fn verify(&self, ctx: &VarietyContext, w: &VertexAssignment) -> bool {
        let n = ctx.space.dim();
        let field = ctx.field();
        if self.weights.iter().all(|(_, x)| x.is_zero()) {
            return false;
        }
        let sign = match ctx.space.kind() {
            FormKind::Symmetric => field.one(),
            FormKind::Symplectic => field.from_i64(-1),
        };
        let gram = ctx.space.gram();
        let mut sums = vec![vec![field.zero(); n]; ctx.graph.order()];
        for ((lo, hi), lambda) in &self.weights {
            if !ctx.graph.has_edge(*lo, *hi) {
                return false;
            }
            let at_lo = gram.mul_vec(w.vector(*hi));
            let at_hi = gram.mul_vec(w.vector(*lo));
            for i in 0..n {
                sums[*lo][i] = &sums[*lo][i] + &(lambda * &at_lo[i]);
                sums[*hi][i] = &sums[*hi][i] + &(&(lambda * &sign) * &at_hi[i]);
            }
        }
        sums.iter().flatten().all(Scalar::is_zero)
    }

    /// Reinterprets a certificate of an induced copy of a subgraph inside
    /// a larger graph: `vertex_map[i]` is the image of subgraph vertex
    /// `i`. Edges outside the image implicitly get weight zero.
    pub fn extend_by_zero(&self, vertex_map: &[Vertex]) -> Result<SingularityCertificate> {
        let weights = self
            .weights
            .iter()
            .map(|((u, v), x)| {
                let (a, b) = (vertex_map[*u], vertex_map[*v]);
                ((a.min(b), a.max(b)), x.clone())
            })
            .collect();
        SingularityCertificate::new(weights)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weights": self.weights.iter().map(|((u, v), x)| json!({
                "edge": [u, v],
                "weight": x.to_decimal(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Per-vertex twist `−n + |N(v)|` of the canonical bundle of the projective
/// variety of a forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalDegrees(pub Vec<i64>);

impl CanonicalDegrees {
    /// All twists negative, i.e. the anti-canonical bundle is ample.
    pub fn is_anti_ample(&self) -> bool {
        self.0.iter().all(|&d| d < 0)
    }
}

pub fn canonical_degrees(g: &Graph, n: usize) -> CanonicalDegrees {
    CanonicalDegrees(
        (0..g.order())
            .map(|v| g.degree(v) as i64 - n as i64)
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Smooth,
    Singular,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectiveVerdict {
    pub verdict: Smoothness,
    /// `n ≥ d + D − 1`, the dimension bound under which the verdict is a
    /// theorem rather than a heuristic.
    pub hypothesis_holds: bool,
}

/// Smoothness of the projective graph variety from combinatorics alone.
///
/// Forests are smooth. For alternating forms with `n ≥ 4` every cycle
/// produces singular points. For symmetric forms only even cycles are
/// known to do so; graphs whose cycles are all odd are left `Unknown`.
pub fn projective_smoothness_predicate(g: &Graph, n: usize, kind: FormKind) -> ProjectiveVerdict {
    let (_, d) = g.degeneracy_order();
    let hypothesis_holds = n + 1 >= d + g.max_degree();
    let verdict = if g.is_forest() {
        Smoothness::Smooth
    } else {
        match kind {
            FormKind::Symplectic if n >= 4 => Smoothness::Singular,
            FormKind::Symplectic => Smoothness::Unknown,
            FormKind::Symmetric if g.has_even_cycle() => Smoothness::Singular,
            FormKind::Symmetric => Smoothness::Unknown,
        }
    };
    ProjectiveVerdict {
        verdict,
        hypothesis_holds,
    }
}

impl VarietyContext {
    pub fn new(graph: Graph, space: BilinearSpace) -> Self {
        VarietyContext { graph, space }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `|V|·n − |E|`; may be negative.
    pub fn expected_dimension(&self) -> i64 {
        (self.graph.order() * self.dim()) as i64 - self.graph.size() as i64
    }

    pub fn check_assignment(&self, w: &VertexAssignment) -> Result<()> {
        if w.len() != self.graph.order() {
            return Err(Error::DimensionMismatch {
                expected: self.graph.order(),
                found: w.len(),
            });
        }
        if w.field() != self.field() {
            return Err(Error::FieldMismatch {
                expected: self.field().to_string(),
                found: w.field().to_string(),
            });
        }
        w.vectors()
            .iter()
            .try_for_each(|x| self.space.check_vector(x))
    }

    /// The edge equations in edge order, as sparse coefficient tables.
    pub fn equations(&self) -> Vec<BilinearEquation> {
        let n = self.dim();
        let gram = self.space.gram();
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                let mut terms = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let c = gram.get(i, j);
                        if !c.is_zero() {
                            terms.push((u * n + i, v * n + j, c.clone()));
                        }
                    }
                }
                BilinearEquation {
                    edge: (u, v),
                    terms,
                }
            })
            .collect()
    }

    /// `⟨w(lo), w(hi)⟩` for every edge.
    pub fn residuals(&self, w: &VertexAssignment) -> Result<Vec<Scalar>> {
        self.check_assignment(w)?;
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| self.space.pair(w.vector(u), w.vector(v)))
            .collect()
    }

    pub fn is_member(&self, w: &VertexAssignment) -> Result<bool> {
        Ok(self.residuals(w)?.iter().all(Scalar::is_zero))
    }

    /// `|E| × |V|·n` matrix of first derivatives. The row of `(u, v)` holds
    /// `(gram·w(v))ᵀ` in the block of `u` and `w(u)ᵀ·gram` in the block of `v`.
    pub fn jacobian(&self, w: &VertexAssignment) -> Result<Matrix> {
        self.check_assignment(w)?;
        let n = self.dim();
        let gram = self.space.gram();
        let mut jac = Matrix::zeros(self.field(), self.graph.size(), self.graph.order() * n);
        for (row, &(u, v)) in self.graph.edges().iter().enumerate() {
            let du = gram.mul_vec(w.vector(v));
            let dv = gram.vec_mul(w.vector(u));
            for i in 0..n {
                jac.set(row, u * n + i, du[i].clone());
                jac.set(row, v * n + i, dv[i].clone());
            }
        }
        Ok(jac)
    }

    /// Whether the edge equations have linearly independent differentials
    /// at `w`, i.e. `rank J = |E|`. This is smoothness of `X(G, W)` at `w`
    /// once the variety has its expected dimension (`n ≥ d + D − 1`).
    pub fn is_smooth_point(&self, w: &VertexAssignment) -> Result<bool> {
        if !self.is_member(w)? {
            return Err(Error::NotOnVariety);
        }
        Ok(self.jacobian(w)?.rank() == self.graph.size())
    }

    /// A nonzero left-kernel vector of the Jacobian, scaled so its first
    /// nonzero weight is 1; `None` when the rows are independent.
    pub fn singular_certificate(
        &self,
        w: &VertexAssignment,
    ) -> Result<Option<SingularityCertificate>> {
        if !self.is_member(w)? {
            return Err(Error::NotOnVariety);
        }
        let Some(mut lambda) = self.jacobian(w)?.left_kernel_basis().into_iter().next() else {
            return Ok(None);
        };
        let lead = lambda
            .iter()
            .find(|x| !x.is_zero())
            .expect("kernel basis vectors are nonzero")
            .inv();
        for x in &mut lambda {
            *x = &*x * &lead;
        }
        let weights = self.graph.edges().iter().copied().zip(lambda).collect();
        let cert = SingularityCertificate::new(weights)?;
        debug_assert!(cert.verify(self, w));
        Ok(Some(cert))
    }

    /// For every vertex `v`, the vectors at its older neighbors are
    /// linearly independent.
    pub fn regular_part_test(&self, order: &OrderedGraph, w: &VertexAssignment) -> Result<bool> {
        self.check_assignment(w)?;
        for v in 0..self.graph.order() {
            let older = order.older_neighbors(v);
            if older.is_empty() {
                continue;
            }
            let rows = older.iter().map(|&u| w.vector(u).to_vec()).collect();
            if Matrix::from_rows(self.field(), rows)?.rank() != older.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
