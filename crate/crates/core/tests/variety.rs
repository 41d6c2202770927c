use graphvar::algebra::{BilinearSpace, Field, StandardForm};
use graphvar::graph::{Edge, Graph};
use graphvar::sampling::{sample_regular_point, zero_point, SamplerConfig};
use graphvar::variety::{VarietyContext, VertexAssignment};
use proptest::prelude::*;

fn graph_strategy(max_order: usize) -> impl Strategy<Value = Graph> {
    (1usize..=max_order).prop_flat_map(|n| {
        let pairs: Vec<Edge> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |edges| Graph::new(n, edges).unwrap())
    })
}

fn assignment(field: Field, vectors: &[Vec<i64>]) -> VertexAssignment {
    VertexAssignment::new(
        field,
        vectors
            .iter()
            .map(|v| v.iter().map(|&x| field.from_i64(x)).collect())
            .collect(),
    )
}

fn space_strategy() -> impl Strategy<Value = BilinearSpace> {
    (
        prop_oneof![Just(Field::Rational), Just(Field::Prime(101))],
        0usize..3,
        1usize..=3,
    )
        .prop_map(|(field, form, half)| match form {
            0 => BilinearSpace::standard(StandardForm::Symplectic, 2 * half, field).unwrap(),
            1 => BilinearSpace::standard(StandardForm::Symmetric, half + 1, field).unwrap(),
            _ => BilinearSpace::standard(StandardForm::Hyperbolic, 2 * half, field).unwrap(),
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `q(w + e) = q(w) + J(w)·e + q(e)` for the bilinear edge map `q`.
    #[test]
    fn jacobian_is_exact_first_order_term(
        g in graph_strategy(6),
        space in space_strategy(),
        seed in any::<u64>(),
        e in proptest::collection::vec(-4i64..4, 36),
    ) {
        let ctx = VarietyContext::new(g.clone(), space.clone());
        let n = space.dim();
        let (og, d) = g.degeneracy_order();
        prop_assume!(n >= 2 * d);
        let w = sample_regular_point(&og, &space, &SamplerConfig::with_seed(seed)).unwrap();
        let e: Vec<Vec<i64>> = (0..g.order()).map(|v| e[v * n..(v + 1) * n].to_vec()).collect();
        let e = assignment(space.field(), &e);
        let moved = ctx.residuals(&w.add(&e)).unwrap();
        let linear = ctx.jacobian(&w).unwrap().mul_vec(&e.flatten());
        for (k, &(u, v)) in g.edges().iter().enumerate() {
            let quadratic = space.pair(e.vector(u), e.vector(v)).unwrap();
            prop_assert_eq!(&moved[k] - &linear[k], quadratic);
        }
    }

    /// Relabelling vertices changes neither membership nor Jacobian rank.
    #[test]
    fn permutation_invariance(
        g in graph_strategy(6),
        space in space_strategy(),
        seed in any::<u64>(),
        perm_seed in any::<u64>(),
    ) {
        let (og, d) = g.degeneracy_order();
        prop_assume!(space.dim() >= 2 * d);
        let w = sample_regular_point(&og, &space, &SamplerConfig::with_seed(seed)).unwrap();
        let mut perm: Vec<usize> = (0..g.order()).collect();
        let mut s = perm_seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = Graph::new(g.order(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap();
        let mut vectors = vec![Vec::new(); g.order()];
        for v in 0..g.order() {
            vectors[perm[v]] = w.vector(v).to_vec();
        }
        let pw = VertexAssignment::new(space.field(), vectors);
        let a = VarietyContext::new(g, space.clone());
        let b = VarietyContext::new(h, space);
        prop_assert_eq!(a.is_member(&w).unwrap(), b.is_member(&pw).unwrap());
        prop_assert_eq!(a.jacobian(&w).unwrap().rank(), b.jacobian(&pw).unwrap().rank());
    }

    /// A certificate for a subgraph, padded with zeros, still certifies the
    /// same vectors on the larger graph.
    #[test]
    fn certificates_extend_to_supergraphs(extra in graph_strategy(7), n in 2usize..=3) {
        let space = BilinearSpace::standard(StandardForm::Symplectic, 2 * n, Field::Rational).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        let g = c4.disjoint_union(&extra);
        let mut edges = g.edges().to_vec();
        edges.extend((0..4).flat_map(|v| (4..g.order()).map(move |u| (v, u))).take(3));
        let g = Graph::new(g.order(), edges).unwrap();
        let e1: Vec<i64> = (0..2 * n).map(|i| i64::from(i == 0)).collect();
        let w = assignment(Field::Rational, &vec![e1; g.order()]);
        let small = VarietyContext::new(c4, space.clone());
        let big = VarietyContext::new(g, space);
        let sub_point = VertexAssignment::new(Field::Rational, w.vectors()[..4].to_vec());
        let cert = small.singular_certificate(&sub_point).unwrap().unwrap();
        let map: Vec<usize> = (0..4).collect();
        prop_assert!(cert.extend_by_zero(&map).unwrap().verify(&big, &w));
    }

    #[test]
    fn zero_point_is_singular(g in graph_strategy(6), space in space_strategy()) {
        prop_assume!(g.size() > 0);
        let ctx = VarietyContext::new(g.clone(), space.clone());
        let z = zero_point(&g, &space);
        let cert = ctx.singular_certificate(&z).unwrap().unwrap();
        prop_assert!(cert.verify(&ctx, &z));
        prop_assert!(!ctx.is_smooth_point(&z).unwrap());
    }
}
