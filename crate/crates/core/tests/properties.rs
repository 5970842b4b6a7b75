//! Randomized invariants across the core modules.

use alterfold_core::builtin_category;
use alterfold_core::census::census;
use alterfold_core::center::center_simples;
use alterfold_core::fs::{indicator, indicator_direct};
use alterfold_core::linalg::{re, C64};
use alterfold_core::morphism::{cap, cap_right, cup, cup_right, Morphism};
use alterfold_core::state_sum::{tv_invariant, StateSumConfig};
use alterfold_core::surgery::{rt_plumbing, PlumbingGraph};
use alterfold_core::triangulation::{all_perms, MoveKind};
use alterfold_core::tube::{TubeAlgebra, TubeElement};
use alterfold_core::FusionCategory;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn category(n: usize) -> FusionCategory {
    match n % 5 {
        0 => builtin_category("fibonacci", &[]),
        1 => builtin_category("ising", &[]),
        2 => builtin_category("su2_level", &[2]),
        3 => builtin_category("vec_zn", &[3, 1]),
        _ => builtin_category("su2_level", &[3]),
    }
    .unwrap()
}

fn random_morphism(cat: &FusionCategory, dom: &[usize], cod: &[usize], rng: &mut ChaCha8Rng) -> Morphism {
    let mut m = Morphism::zero(cat, dom, cod);
    for b in m.blocks.iter_mut() {
        for x in b.iter_mut() {
            *x = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    m
}

fn random_word(rank: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..rank)).collect()
}

fn closed_census(n: usize) -> &'static str {
    ["s3_2tet", "s3_3tet", "rp3_2tet", "lens_3_1", "s2xs1"][n % 5]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_is_cyclic(c in 0usize..5, seed in any::<u64>(), la in 1usize..4, lb in 1usize..4) {
        let cat = category(c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_word(cat.rank(), la, &mut rng);
        let b = random_word(cat.rank(), lb, &mut rng);
        let f = random_morphism(&cat, &a, &b, &mut rng);
        let g = random_morphism(&cat, &b, &a, &mut rng);
        let lhs = g.compose(&f).unwrap().trace(&cat).unwrap();
        let rhs = f.compose(&g).unwrap().trace(&cat).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn tensor_is_associative(c in 0usize..5, seed in any::<u64>()) {
        let cat = category(c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words: Vec<Vec<usize>> = (0..6).map(|_| {
            let l = rng.gen_range(0..3);
            random_word(cat.rank(), l, &mut rng)
        }).collect();
        let f = random_morphism(&cat, &words[0], &words[1], &mut rng);
        let g = random_morphism(&cat, &words[2], &words[3], &mut rng);
        let h = random_morphism(&cat, &words[4], &words[5], &mut rng);
        let left = f.tensor(&cat, &g).tensor(&cat, &h);
        let right = f.tensor(&cat, &g.tensor(&cat, &h));
        prop_assert_eq!(&left.domain, &right.domain);
        prop_assert_eq!(&left.codomain, &right.codomain);
        // Float products associate only up to rounding.
        prop_assert!(left.distance(&right) < 1e-12 * (1.0 + left.max_abs()));
    }

    #[test]
    fn zig_zag_identities(c in 0usize..5, x in 0usize..4) {
        let cat = category(c);
        let a = x % cat.rank();
        let d = cat.dual(a);
        let id_a = Morphism::identity(&cat, &[a]);
        let z1 = cup(&cat, a).tensor(&cat, &id_a);
        let z1 = id_a.tensor(&cat, &cap(&cat, a)).compose(&z1).unwrap();
        prop_assert!(z1.distance(&id_a) < 1e-12);
        let id_d = Morphism::identity(&cat, &[d]);
        let z2 = id_d.tensor(&cat, &cup(&cat, a));
        let z2 = cap(&cat, a).tensor(&cat, &id_d).compose(&z2).unwrap();
        prop_assert!(z2.distance(&id_d) < 1e-12);
        let z3 = cup_right(&cat, a).tensor(&cat, &id_d);
        let z3 = id_d.tensor(&cat, &cap_right(&cat, a)).compose(&z3).unwrap();
        prop_assert!(z3.distance(&id_d) < 1e-12);
    }

    #[test]
    fn pachner_moves_keep_closed_manifold_structure(n in 0usize..5, seed in any::<u64>()) {
        let tri = census(closed_census(n)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved = tri.random_moves(&mut rng, 6, 7);
        let sk = moved.skeleton();
        let chi = sk.num_vertices as i64 - sk.num_edges as i64 + sk.num_faces as i64 - moved.num_tets() as i64;
        prop_assert_eq!(chi, 0);
        prop_assert!(moved.classify_vertices().inner.iter().all(|&b| b));
        for (kind, target) in moved.applicable_moves(8) {
            if kind == MoveKind::TwoThree {
                let next = moved.pachner_23(target).unwrap();
                let s2 = next.skeleton();
                prop_assert_eq!(s2.num_faces, sk.num_faces + 2);
                prop_assert_eq!(s2.num_edges, sk.num_edges + 1);
                prop_assert_eq!(s2.num_vertices, sk.num_vertices);
                prop_assert_eq!(next.num_tets(), moved.num_tets() + 1);
                break;
            }
        }
    }

    #[test]
    fn tv_is_pachner_and_relabel_invariant(n in 0usize..5, seed in any::<u64>()) {
        let cat = builtin_category("fibonacci", &[]).unwrap();
        let cfg = StateSumConfig::default();
        let tri = census(closed_census(n)).unwrap();
        let base = tv_invariant(&cat, &tri, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved = tri.random_moves(&mut rng, 4, 6);
        prop_assert!((tv_invariant(&cat, &moved, &cfg).unwrap() - base).norm() < 1e-8);
        let mut order: Vec<usize> = (0..moved.num_tets()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let relabeled = moved.relabel_tets(&order).unwrap();
        prop_assert!((tv_invariant(&cat, &relabeled, &cfg).unwrap() - base).norm() < 1e-8);
        let perms: Vec<[usize; 4]> = all_perms().into_iter().filter(|p| {
            let inv = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            inv % 2 == 0
        }).collect();
        let sigma = perms[rng.gen_range(0..perms.len())];
        let t = rng.gen_range(0..moved.num_tets());
        let permuted = moved.relabel_vertices(t, sigma).unwrap();
        prop_assert!((tv_invariant(&cat, &permuted, &cfg).unwrap() - base).norm() < 1e-8);
    }

    #[test]
    fn tv_is_multiplicative_and_zeta_free(a in 0usize..5, b in 0usize..5, z in 0usize..3) {
        let cat = builtin_category("vec_zn", &[3, 1]).unwrap();
        let zeta = [re(1.0), re(2.0), C64::new(-1.0, 1.0)][z];
        let cfg = StateSumConfig { zeta, workers: 1 };
        let ta = census(closed_census(a)).unwrap();
        let tb = census(closed_census(b)).unwrap();
        let va = tv_invariant(&cat, &ta, &StateSumConfig::default()).unwrap();
        let vb = tv_invariant(&cat, &tb, &StateSumConfig::default()).unwrap();
        let both = tv_invariant(&cat, &ta.disjoint_union(&tb), &cfg).unwrap();
        prop_assert!((both - va * vb).norm() < 1e-10);
        prop_assert!((tv_invariant(&cat, &ta, &cfg).unwrap() - va).norm() < 1e-10);
    }

    #[test]
    fn tube_product_is_associative(seed in any::<u64>()) {
        let cat = builtin_category("vec_zn", &[3, 1]).unwrap();
        let alg = TubeAlgebra::new(&cat).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rand_el = || TubeElement {
            coeffs: (0..alg.dim()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        };
        let (x, y, z) = (rand_el(), rand_el(), rand_el());
        let l = alg.multiply(&alg.multiply(&x, &y).unwrap(), &z).unwrap();
        let r = alg.multiply(&x, &alg.multiply(&y, &z).unwrap()).unwrap();
        prop_assert!(l.distance(&r) < 1e-9);
    }

    #[test]
    fn rt_mirror_and_blow_up(c in 0usize..5, framings in prop::collection::vec(-4i64..=4, 1..4), v in 0usize..3, eps in prop::bool::ANY) {
        let cat = category(c);
        let md = center_simples(&cat).unwrap().modular_data().unwrap();
        let g = PlumbingGraph::chain(&framings);
        let z = rt_plumbing(&md, &g).unwrap();
        prop_assert!((rt_plumbing(&md, &g.mirror()).unwrap() - z.conj()).norm() < 1e-8);
        // Blow-up: a leaf framed ε on vertex v, with v's framing shifted by ε.
        let eps = if eps { 1 } else { -1 };
        let v = v % framings.len();
        let mut f2 = framings.clone();
        f2[v] += eps;
        f2.push(eps);
        let mut edges: Vec<(usize, usize)> = (1..framings.len()).map(|i| (i - 1, i)).collect();
        edges.push((v, framings.len()));
        let blown = PlumbingGraph::new(f2, edges).unwrap();
        prop_assert!((rt_plumbing(&md, &blown).unwrap() - z).norm() < 1e-7);
    }

    #[test]
    fn indicator_duality(a in 0usize..4, v in 0usize..2, m in -3i64..=3, l in -3i64..=3) {
        let cat = builtin_category("fibonacci", &[]).unwrap();
        let c = center_simples(&cat).unwrap();
        let dual = [cat.dual(v)];
        let lhs = indicator(&c, a, &[v], m, l).unwrap();
        prop_assert!((lhs - indicator(&c, a, &dual, -m, -l).unwrap()).norm() < 1e-8);
        if m.abs() + 2 * l.abs() <= 5 {
            let direct = indicator_direct(&c, a, &dual, -m, -l).unwrap();
            prop_assert!((lhs - direct).norm() < 1e-8);
        }
    }
}
