//! Splitting a graph into matchings through vertex weightings.
//!
//! A weighting `w: V → Z^M` gives each edge the weight `w(u) + w(v)`; the
//! edge joins class `E_i` when coordinate `i` is its maximum. A weighting
//! is *valid* when every edge has a unique maximal coordinate and every
//! class is a matching.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

/// Largest search space `brute_min_colors` accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWeighting {
    colors: Vec<String>,
    weights: Vec<Vec<BigInt>>,
}

impl VertexWeighting {
    pub fn new(colors: Vec<String>, weights: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|w| w.len() != colors.len()) {
            return Err(Error::DimensionMismatch {
                expected: colors.len(),
                found: bad.len(),
            });
        }
        Ok(VertexWeighting { colors, weights })
    }

    pub fn from_i64(colors: &[&str], weights: &[&[i64]]) -> Result<Self> {
        VertexWeighting::new(
            colors.iter().map(|c| c.to_string()).collect(),
            weights
                .iter()
                .map(|w| w.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn weights(&self) -> &[Vec<BigInt>] {
        &self.weights
    }

    pub fn weight(&self, v: Vertex) -> &[BigInt] {
        &self.weights[v]
    }

    /// Adds `c` to every coordinate of `v`'s weight.
    pub fn shift_vertex(&mut self, v: Vertex, c: &BigInt) {
        for x in &mut self.weights[v] {
            *x += c;
        }
    }

    pub fn to_json(&self) -> Value {
        let mut weights = Map::new();
        for (v, w) in self.weights.iter().enumerate() {
            weights.insert(
                v.to_string(),
                Value::Array(w.iter().map(|x| Value::String(x.to_string())).collect()),
            );
        }
        json!({ "colors": self.colors, "weights": weights })
    }

    /// Reads `{"colors": [names], "weights": {vertexId: [ints]}}`. Vertex
    /// ids must be `0..k` for some `k`; entries may be JSON integers or
    /// decimal strings.
    pub fn from_json(value: &Value) -> Result<Self> {
        let colors = value
            .get("colors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("weighting needs a \"colors\" array".into()))?
            .iter()
            .map(|c| {
                c.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse("color names must be strings".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let map = value
            .get("weights")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("weighting needs a \"weights\" object".into()))?;
        let mut weights: Vec<Option<Vec<BigInt>>> = vec![None; map.len()];
        for (key, w) in map {
            let v: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex id {key:?}")))?;
            if v >= weights.len() {
                return Err(Error::MissingVertexWeight(weights.len()));
            }
            let w = w
                .as_array()
                .ok_or_else(|| Error::Parse(format!("weight of vertex {v} must be an array")))?
                .iter()
                .map(parse_int)
                .collect::<Result<Vec<_>>>()?;
            weights[v] = Some(w);
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(v, w)| w.ok_or(Error::MissingVertexWeight(v)))
            .collect::<Result<Vec<_>>>()?;
        VertexWeighting::new(colors, weights)
    }
}

fn parse_int(x: &Value) -> Result<BigInt> {
    let text = match x {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::Parse(format!("expected an integer, got {other}"))),
    };
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {text:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeVerdict {
    pub edge: Edge,
    /// Indices of all colors attaining the maximum.
    pub argmax: Vec<usize>,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub colors: Vec<String>,
    pub edges: Vec<EdgeVerdict>,
    /// `classes[i]` lists the edges with color `i` among their maxima;
    /// tied edges appear in several classes.
    pub classes: Vec<Vec<Edge>>,
    pub class_is_matching: Vec<bool>,
    pub all_strict: bool,
    pub valid: bool,
    pub color_count: usize,
}

/// Computes the color classes of a weighting and checks them.
pub fn color_classes(g: &Graph, vw: &VertexWeighting) -> Result<SplittingReport> {
    if vw.weights.len() < g.order() {
        return Err(Error::MissingVertexWeight(vw.weights.len()));
    }
    let m = vw.color_count();
    let mut classes = vec![Vec::new(); m];
    let edges: Vec<EdgeVerdict> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let sums: Vec<BigInt> = (0..m)
                .map(|i| &vw.weights[u][i] + &vw.weights[v][i])
                .collect();
            let argmax: Vec<usize> = match sums.iter().max() {
                Some(top) => (0..m).filter(|&i| &sums[i] == top).collect(),
                None => Vec::new(),
            };
            for &i in &argmax {
                classes[i].push((u, v));
            }
            EdgeVerdict {
                edge: (u, v),
                strict: argmax.len() == 1,
                argmax,
            }
        })
        .collect();
    let class_is_matching: Vec<bool> = classes.iter().map(|c| is_matching(c)).collect();
    let all_strict = edges.iter().all(|e| e.strict);
    let valid = all_strict && class_is_matching.iter().all(|&b| b);
    Ok(SplittingReport {
        colors: vw.colors.clone(),
        edges,
        classes,
        class_is_matching,
        all_strict,
        valid,
        color_count: m,
    })
}

fn is_matching(edges: &[Edge]) -> bool {
    let mut seen = BTreeSet::new();
    edges.iter().all(|&(u, v)| seen.insert(u) && seen.insert(v))
}

/// `D²(D+1)²/2 − 1`.
pub fn p4(d: u64) -> i64 {
    let d = d as i64;
    d * d * (d + 1) * (d + 1) / 2 - 1
}

/// Palette size used for graphs of maximum degree at most `bound >= 1`.
fn palette_size(bound: usize) -> usize {
    p4(bound as u64) as usize
}

/// Where the top-level construction put each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitLayout {
    /// BFS root of each component, in component order.
    pub roots: Vec<Vertex>,
    /// Distance of each vertex from the root of its component.
    pub level_of: Vec<usize>,
    /// Colors `0..base_colors` weight edges inside levels; the rest are the
    /// colors added for edges between consecutive levels.
    pub base_colors: usize,
}

/// A weighting with at most `p4(D)` colors splitting `g` into matchings,
/// `D` being the maximum degree.
pub fn split_matchings(g: &Graph) -> Result<VertexWeighting> {
    split_matchings_with_layout(g).map(|(w, _)| w)
}

/// [`split_matchings`] together with its top-level layering.
///
/// Each component is layered by distance from a root. Every level induces
/// a graph of maximum degree `< D` and is weighted recursively over a
/// shared base palette; levels are then shifted so each dominates the sum
/// of the two below it by at least 10. Edges between levels `i` and `i+1`
/// take colors from `2D` fresh blocks `A[i mod 2][k]` of `D²` colors each,
/// `k` being a proper numbering of the upper endpoint inside its level.
/// The chosen color gets weight `max w(v) + max w(V_i) + 5` at the upper
/// endpoint `v` and 5 at the lower endpoint.
pub fn split_matchings_with_layout(g: &Graph) -> Result<(VertexWeighting, SplitLayout)> {
    let d = g.max_degree();
    let mut roots = Vec::new();
    let mut level_of = vec![0; g.order()];
    if d == 0 {
        let w = VertexWeighting::new(Vec::new(), vec![Vec::new(); g.order()])?;
        roots.extend(g.components().iter().map(|c| c[0]));
        return Ok((
            w,
            SplitLayout {
                roots,
                level_of,
                base_colors: 0,
            },
        ));
    }
    let weights = weigh_bounded(g, d, Some((&mut roots, &mut level_of)))?;
    let layout = SplitLayout {
        roots,
        level_of,
        base_colors: if d == 1 { 1 } else { palette_size(d - 1) },
    };
    Ok((VertexWeighting::new(palette_names(d), weights)?, layout))
}

fn palette_names(bound: usize) -> Vec<String> {
    if bound <= 1 {
        return vec!["B".to_string()];
    }
    let mut names = palette_names(bound - 1);
    for parity in 1..=2 {
        for k in 1..=bound {
            for j in 1..=bound * bound {
                names.push(format!("A{bound}.{parity}.{k}.{j}"));
            }
        }
    }
    names
}

type Trace<'a> = Option<(&'a mut Vec<Vertex>, &'a mut Vec<usize>)>;

/// Weights over the palette for `bound`; requires `max_degree <= bound`.
fn weigh_bounded(g: &Graph, bound: usize, mut trace: Trace<'_>) -> Result<Vec<Vec<BigInt>>> {
    debug_assert!(g.max_degree() <= bound);
    if bound <= 1 {
        return Ok(vec![vec![BigInt::zero()]; g.order()]);
    }
    let size = palette_size(bound);
    let mut weights = vec![vec![BigInt::zero(); size]; g.order()];
    for comp in g.components() {
        let sub = g.induced_subgraph(&comp)?;
        let (local, root, levels) = match weigh_component(&sub, bound, 0) {
            Err(Error::InternalConflict(_)) if sub.order() > 1 => {
                weigh_component(&sub, bound, restart_root(&sub))?
            }
            other => other?,
        };
        for (i, &v) in comp.iter().enumerate() {
            weights[v] = local[i].clone();
        }
        if let Some((roots, level_of)) = trace.as_mut() {
            roots.push(comp[root]);
            for (i, &v) in comp.iter().enumerate() {
                level_of[v] = levels[i];
            }
        }
    }
    Ok(weights)
}

/// Root for the single retry after the cross-edge coloring runs out of
/// colors: a vertex of maximum degree, so that the most constrained
/// neighborhood sits in level 1.
fn restart_root(g: &Graph) -> Vertex {
    (0..g.order())
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .expect("nonempty component")
}

/// Weighting of one connected graph from `root`; returns local weights,
/// the root and each vertex's level.
fn weigh_component(
    g: &Graph,
    bound: usize,
    root: Vertex,
) -> Result<(Vec<Vec<BigInt>>, Vertex, Vec<usize>)> {
    let n = g.order();
    let layering = g.bfs_layers(root)?;
    let levels = &layering.levels;
    let base_len = if bound == 2 {
        1
    } else {
        palette_size(bound - 1)
    };
    let block = bound * bound;
    let mut weights = vec![vec![BigInt::zero(); palette_size(bound)]; n];

    // Recursive weighting of each level on the base palette, then
    // per-level shifts so that min(level i) >= max(i-1) + max(i-2) + 10.
    let mut level_max: Vec<BigInt> = Vec::with_capacity(levels.len());
    let mut numbering = vec![0usize; n];
    for (i, level) in levels.iter().enumerate() {
        let inner = g.induced_subgraph(level)?;
        let base = weigh_bounded(&inner, bound - 1, None)?;
        let lo = base.iter().flatten().min().cloned().unwrap_or_default();
        let hi = base.iter().flatten().max().cloned().unwrap_or_default();
        let below = |k: usize| -> BigInt {
            if i >= k {
                level_max[i - k].clone()
            } else {
                BigInt::zero()
            }
        };
        let shift = below(1) + below(2) + 10 - &lo;
        for (j, &v) in level.iter().enumerate() {
            for (c, x) in base[j].iter().enumerate() {
                weights[v][c] = x + &shift;
            }
        }
        level_max.push(hi + &shift);
        for (j, k) in inner
            .proper_vertex_numbering(bound)?
            .into_iter()
            .enumerate()
        {
            numbering[level[j]] = k;
        }
    }

    // A color for every edge between consecutive levels.
    let level_of = |v: Vertex| layering.level_of(v);
    let mut color_of: Vec<Option<usize>> = vec![None; g.size()];
    for i in 0..levels.len().saturating_sub(1) {
        let mut cross: Vec<(Vertex, Vertex)> = levels[i]
            .iter()
            .flat_map(|&u| {
                g.neighbors(u)
                    .iter()
                    .filter(|&&v| level_of(v) == i + 1)
                    .map(move |&v| (u, v))
            })
            .collect();
        cross.sort_by_key(|&(u, v)| (v, u));
        let mut done: Vec<(Vertex, Vertex, usize)> = Vec::new();
        for &(u, v) in &cross {
            let k = numbering[v];
            let start = base_len + ((i % 2) * bound + (k - 1)) * block;
            // A tie at edge {a, b} arises when an up-edge of a and a
            // down-edge of b share a color, so two cross edges conflict if
            // the lower end of either is adjacent to the upper end of the
            // other.
            let taken: BTreeSet<usize> = done
                .iter()
                .filter(|&&(a, b, _)| g.has_edge(a, v) || g.has_edge(u, b))
                .map(|&(_, _, c)| c)
                .filter(|c| (start..start + block).contains(c))
                .collect();
            let c = (start..start + block)
                .find(|c| !taken.contains(c))
                .ok_or_else(|| {
                    Error::InternalConflict(format!(
                        "edge ({u}, {v}) between levels {i} and {}: all {block} colors of block {k} taken",
                        i + 1
                    ))
                })?;
            done.push((u, v, c));
            color_of[g.edge_index(u, v).expect("cross edge exists")] = Some(c);
        }
    }

    // Realize the chosen colors.
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        let Some(c) = color_of[idx] else { continue };
        let (u, v) = if level_of(a) < level_of(b) {
            (a, b)
        } else {
            (b, a)
        };
        let top = weights[v][..base_len]
            .iter()
            .max()
            .cloned()
            .unwrap_or_default();
        weights[v][c] = top + &level_max[level_of(u)] + 5;
        weights[u][c] = BigInt::from(5);
    }
    let levels_by_vertex = (0..n).map(level_of).collect();
    Ok((weights, root, levels_by_vertex))
}

/// A weighting of a forest with `D` colors.
///
/// Vertices are added in BFS order, so each new vertex is a leaf of the
/// tree built so far. Its edge to the parent takes the first color unused
/// at the parent, and the leaf carries just enough weight on that color to
/// make it the unique maximum.
pub fn split_tree(t: &Graph) -> Result<VertexWeighting> {
    if !t.is_forest() {
        return Err(Error::NotAForest);
    }
    let d = t.max_degree();
    let colors: Vec<String> = (1..=d).map(|i| format!("c{i}")).collect();
    let mut weights = vec![vec![BigInt::zero(); d]; t.order()];
    let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); t.order()];
    for comp in t.components() {
        let root = comp[0];
        let mut seen = BTreeSet::from([root]);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(p) = queue.pop_front() {
            for &leaf in t.neighbors(p) {
                if !seen.insert(leaf) {
                    continue;
                }
                let c = (0..d)
                    .find(|c| !used[p].contains(c))
                    .expect("a parent has at most D-1 other colored edges");
                used[p].insert(c);
                used[leaf].insert(c);
                let top = weights[p].iter().max().cloned().unwrap_or_default();
                weights[leaf][c] = top - &weights[p][c] + 1;
                queue.push_back(leaf);
            }
        }
    }
    VertexWeighting::new(colors, weights)
}

/// Least number of colors `M <= max_colors` for which some weighting with
/// entries in `0..=max_weight` is valid; `None` if none is found. Edgeless
/// graphs need 0 colors.
pub fn brute_min_colors(g: &Graph, max_colors: usize, max_weight: u64) -> Result<Option<usize>> {
    if g.size() == 0 {
        return Ok(Some(0));
    }
    let base = max_weight as f64 + 1.0;
    let total: f64 = (1..=max_colors)
        .map(|m| base.powi((m * g.order()) as i32))
        .sum();
    if total > BRUTE_FORCE_LIMIT as f64 {
        return Err(Error::SearchSpaceTooLarge {
            size: format!("{total:.0}"),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    for m in 1..=max_colors {
        let mut digits = vec![0u64; m * g.order()];
        loop {
            if strict_matching_split(g, m, &digits) {
                return Ok(Some(m));
            }
            if !advance(&mut digits, max_weight) {
                break;
            }
        }
    }
    Ok(None)
}

fn advance(digits: &mut [u64], max: u64) -> bool {
    for d in digits.iter_mut() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// `w[v*m + i]` is the weight of color `i` at `v`.
fn strict_matching_split(g: &Graph, m: usize, w: &[u64]) -> bool {
    let mut owner = vec![usize::MAX; g.order() * m];
    for &(u, v) in g.edges() {
        let mut best = 0;
        let mut tied = false;
        for i in 1..m {
            let s = w[u * m + i] + w[v * m + i];
            let b = w[u * m + best] + w[v * m + best];
            if s > b {
                best = i;
                tied = false;
            } else if s == b {
                tied = true;
            }
        }
        if tied {
            return false;
        }
        for x in [u, v] {
            if owner[x * m + best] != usize::MAX {
                return false;
            }
            owner[x * m + best] = 1;
        }
    }
    true
}

/// Largest absolute weight, for diagnostics.
pub fn max_abs_weight(vw: &VertexWeighting) -> Option<u64> {
    vw.weights
        .iter()
        .flatten()
        .map(|x| x.magnitude().to_u64().unwrap_or(u64::MAX))
        .max()
}
