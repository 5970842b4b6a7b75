//! Turaev–Viro state sums over admissible edge colorings.
//!
//! Each tetrahedron contributes the evaluation of its dual tetrahedral network,
//! `d_{x03} F^{x01 x12 x23}_{x03}[x02, x13]` for positively oriented tetrahedra
//! and the inverse F-matrix entry for negatively oriented ones.  Every face
//! class divides by the theta-network evaluation pairing the two face vertices
//! that meet across it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fusion::FusionCategory;
use crate::linalg::{re, C64};
use crate::morphism::{compose_all, strand_cap, strand_cup, Morphism, Strand};
use crate::triangulation::{edge_index, face_vertices, Triangulation};

/// An assignment of simples to edge classes, plus a multiplicity label per
/// face class (always 0 for multiplicity-free categories).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
}

impl Coloring {
    /// A multiplicity-free coloring from edge colors alone.
    pub fn from_edges(tri: &Triangulation, edges: Vec<usize>) -> Coloring {
        Coloring { edges, faces: vec![0; tri.skeleton().num_faces] }
    }
}

/// Parameters of a state-sum evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateSumConfig {
    /// Gauge parameter; cancels for closed manifolds.
    pub zeta: C64,
    /// Worker count used by parallel drivers (the core evaluator is sequential).
    pub workers: usize,
}

impl Default for StateSumConfig {
    fn default() -> Self {
        StateSumConfig { zeta: re(1.0), workers: 1 }
    }
}

/// Local color of edge `(a, b)` of tetrahedron `t` (oriented from the lower local vertex).
fn local_color(cat: &FusionCategory, tri: &Triangulation, t: usize, a: usize, b: usize, edges: &[usize]) -> usize {
    let e = edge_index(a, b);
    let c = edges[tri.skeleton().edge_of[t][e]];
    if tri.skeleton().edge_sign[t][e] > 0 {
        c
    } else {
        cat.dual(c)
    }
}

/// Strand carrying local edge `(a, b)` of tetrahedron `t`; `forward` selects the
/// object `x_ab` rather than its dual.
fn letter(tri: &Triangulation, t: usize, a: usize, b: usize, forward: bool, edges: &[usize]) -> Strand {
    let (lo, hi, fwd) = if a < b { (a, b, forward) } else { (b, a, !forward) };
    let e = edge_index(lo, hi);
    let c = edges[tri.skeleton().edge_of[t][e]];
    let agrees = tri.skeleton().edge_sign[t][e] > 0;
    Strand { color: c, up: fwd == agrees }
}

/// Whether the face `(i, j, l)` of tetrahedron `t` carries a splitting vertex.
fn is_split_face(sigma: i8, f: usize) -> bool {
    (sigma > 0) == (f == 1 || f == 3)
}

/// Letters of the face vector of `(t, f)` as `(lower, upper, forward)` local edges.
fn face_letters(sigma: i8, f: usize) -> [(usize, usize, bool); 3] {
    let [i, j, l] = face_vertices(f);
    if is_split_face(sigma, f) {
        [(i, j, true), (j, l, true), (i, l, false)]
    } else {
        [(i, l, true), (j, l, false), (i, j, false)]
    }
}

/// The face vertex of `(t, f)` bent into a morphism `[] → word`.
fn face_vector(cat: &FusionCategory, tri: &Triangulation, t: usize, f: usize, sigma: i8, edges: &[usize]) -> Morphism {
    let [i, j, l] = face_vertices(f);
    let xij = local_color(cat, tri, t, i, j, edges);
    let xjl = local_color(cat, tri, t, j, l, edges);
    let xil = local_color(cat, tri, t, i, l, edges);
    if is_split_face(sigma, f) {
        let cup = strand_cup(cat, letter(tri, t, i, l, true, edges));
        let s = Morphism::split(cat, xij, xjl, xil, 0).whisker(cat, &[], &[cat.dual(xil)]);
        compose_all(&[s, cup]).expect("face vector types")
    } else {
        let outer = strand_cup(cat, letter(tri, t, i, j, true, edges));
        let inner = strand_cup(cat, letter(tri, t, j, l, true, edges)).whisker(cat, &[xij], &[cat.dual(xij)]);
        let fuse = Morphism::fuse(cat, xij, xjl, xil, 0).whisker(cat, &[], &[cat.dual(xjl), cat.dual(xij)]);
        compose_all(&[fuse, inner, outer]).expect("face vector types")
    }
}

/// Moves the first letter of `u: [] → [a, b, c]` to the end.
fn rotate(cat: &FusionCategory, u: &Morphism, first: Strand) -> Morphism {
    let back = first.flip();
    let rest: Vec<usize> = u.codomain[1..].to_vec();
    let a = first.object(cat);
    let cup = strand_cup(cat, back);
    let mid = u.whisker(cat, &[back.object(cat)], &[a]);
    let mut right = rest.clone();
    right.push(a);
    let cap = strand_cap(cat, back).whisker(cat, &[], &right);
    compose_all(&[cap, mid, cup]).expect("rotation types")
}

/// Theta-network pairing of the two face vertices meeting across face class `face`.
fn theta(cat: &FusionCategory, tri: &Triangulation, face: usize, edges: &[usize]) -> C64 {
    let (t1, f1) = tri.skeleton().face_rep[face];
    let g = tri.gluing(t1, f1);
    let o = tri.orientation();
    theta_between(cat, tri, (t1, f1, o[t1]), (g.tet, g.face, o[g.tet]), g.perm, edges)
}

/// Pairing of face `(t, f)` with the same face of a mirror copy of `t`.
fn self_theta(cat: &FusionCategory, tri: &Triangulation, t: usize, f: usize, edges: &[usize]) -> C64 {
    let s = tri.orientation()[t];
    theta_between(cat, tri, (t, f, s), (t, f, -s), [0, 1, 2, 3], edges)
}

/// Theta pairing of the face vertex of `(t1, f1)` with that of `(t2, f2)`, the
/// faces being identified by `perm`; orientations are passed explicitly.
fn theta_between(
    cat: &FusionCategory,
    tri: &Triangulation,
    (t1, f1, s1): (usize, usize, i8),
    (t2, f2, s2): (usize, usize, i8),
    perm: [usize; 4],
    edges: &[usize],
) -> C64 {
    let l1 = face_letters(s1, f1);
    let l2 = face_letters(s2, f2);
    // Letters of the first vector carried into the second tetrahedron, then reversed and flipped.
    let normalize = |a: usize, b: usize, fwd: bool| if a < b { (a, b, fwd) } else { (b, a, !fwd) };
    let target: Vec<(usize, usize, bool)> = l1
        .iter()
        .rev()
        .map(|&(a, b, fwd)| normalize(perm[a], perm[b], !fwd))
        .collect();
    let shift = (0..3)
        .find(|&r| (0..3).all(|k| l2[(k + r) % 3] == target[k]))
        .expect("glued faces carry opposite cyclic orders");
    let u1 = face_vector(cat, tri, t1, f1, s1, edges);
    let mut u2 = face_vector(cat, tri, t2, f2, s2, edges);
    for k in 0..shift {
        let (a, b, fwd) = l2[k];
        u2 = rotate(cat, &u2, letter(tri, t2, a, b, fwd, edges));
    }
    let s1: Vec<Strand> = l1.iter().map(|&(a, b, fwd)| letter(tri, t1, a, b, fwd, edges)).collect();
    let w1: Vec<usize> = s1.iter().map(|s| s.object(cat)).collect();
    let w2 = u2.codomain.clone();
    let pair = u2.tensor(cat, &u1);
    let c0 = strand_cap(cat, s1[0].flip()).whisker(cat, &w2[..2], &w1[1..]);
    let c1 = strand_cap(cat, s1[1].flip()).whisker(cat, &w2[..1], &w1[2..]);
    let c2 = strand_cap(cat, s1[2].flip());
    compose_all(&[c2, c1, c0, pair]).expect("theta types").scalar_value()
}

/// Whether every face of the triangulation is admissible under `edges`.
fn face_admissible(cat: &FusionCategory, tri: &Triangulation, face: usize, edges: &[usize]) -> bool {
    let (t, f) = tri.skeleton().face_rep[face];
    let [i, j, l] = face_vertices(f);
    let xij = local_color(cat, tri, t, i, j, edges);
    let xjl = local_color(cat, tri, t, j, l, edges);
    let xil = local_color(cat, tri, t, i, l, edges);
    cat.n(xij, xjl, xil) > 0
}

/// Unnormalized tetrahedral network value `Tet_t`.
fn tet_value(cat: &FusionCategory, tri: &Triangulation, t: usize, edges: &[usize]) -> C64 {
    let x = |a, b| local_color(cat, tri, t, a, b, edges);
    let (x01, x12, x23, x03, x02, x13) = (x(0, 1), x(1, 2), x(2, 3), x(0, 3), x(0, 2), x(1, 3));
    let coef = if tri.orientation()[t] > 0 {
        cat.f_mf(x01, x12, x23, x03, x02, x13)
    } else {
        cat.f_inv_mf(x01, x12, x23, x03, x13, x02)
    };
    cat.qdim(x03) * coef
}

fn require_multiplicity_free(cat: &FusionCategory) -> Result<()> {
    if cat.is_multiplicity_free() {
        Ok(())
    } else {
        Err(Error::Unsupported("state sums need a multiplicity-free category".into()))
    }
}

/// Number of edge colorings making every face admissible.
pub fn count_admissible(cat: &FusionCategory, tri: &Triangulation) -> u64 {
    let plan = Plan::new(cat, tri);
    let mut count = 0u64;
    let mut colors = vec![0usize; tri.skeleton().num_edges];
    plan.walk(cat, tri, 0, &mut colors, &mut |_| count += 1);
    count
}

/// Normalized weight of tetrahedron `t`: `Tet_t` divided, for each face, by the
/// square root of the pairing of that face with its mirror image.
///
/// When every simple has trivial Frobenius-Schur data this is the symmetric
/// 6j-symbol: it is invariant under relabeling the tetrahedron's vertices and
/// its products reproduce the state sum.  Otherwise the square roots leave
/// phase ambiguities, and [`tv_invariant`] uses the exact face pairings.
pub fn tet_weight(cat: &FusionCategory, tri: &Triangulation, t: usize, coloring: &Coloring) -> Result<C64> {
    require_multiplicity_free(cat)?;
    let sk = tri.skeleton();
    if t >= tri.num_tets() || coloring.edges.len() != sk.num_edges || coloring.edges.iter().any(|&c| c >= cat.rank()) {
        return Err(Error::Index("tetrahedron or coloring out of range".into()));
    }
    if coloring.faces.iter().any(|&m| m != 0) {
        return Err(Error::Inadmissible);
    }
    for face in 0..sk.num_faces {
        if !face_admissible(cat, tri, face, &coloring.edges) {
            return Err(Error::Inadmissible);
        }
    }
    let mut w = tet_value(cat, tri, t, &coloring.edges);
    for f in 0..4 {
        w /= self_theta(cat, tri, t, f, &coloring.edges).sqrt();
    }
    Ok(w)
}

/// Search order and incidence bookkeeping for the coloring enumeration.
struct Plan {
    order: Vec<usize>,
    /// Faces whose last edge is assigned at each depth.
    faces_at: Vec<Vec<usize>>,
    /// Tetrahedra whose last edge is assigned at each depth.
    tets_at: Vec<Vec<usize>>,
}

impl Plan {
    fn new(_cat: &FusionCategory, tri: &Triangulation) -> Plan {
        let sk = tri.skeleton();
        let ne = sk.num_edges;
        let face_edges: Vec<[usize; 3]> = (0..sk.num_faces)
            .map(|face| {
                let (t, f) = sk.face_rep[face];
                let [i, j, l] = face_vertices(f);
                [sk.edge_of[t][edge_index(i, j)], sk.edge_of[t][edge_index(j, l)], sk.edge_of[t][edge_index(i, l)]]
            })
            .collect();
        let tet_edges: Vec<[usize; 6]> = (0..tri.num_tets()).map(|t| sk.edge_of[t]).collect();
        let mut assigned = vec![false; ne];
        let mut order = Vec::with_capacity(ne);
        for _ in 0..ne {
            // Prefer edges completing the most faces, then touching the most partially assigned faces.
            let best = (0..ne)
                .filter(|&e| !assigned[e])
                .max_by_key(|&e| {
                    let mut complete = 0usize;
                    let mut touch = 0usize;
                    for fe in &face_edges {
                        if fe.contains(&e) {
                            let others = fe.iter().filter(|&&x| x != e && !assigned[x]).count();
                            if others == 0 {
                                complete += 1;
                            }
                            if fe.iter().any(|&x| assigned[x]) {
                                touch += 1;
                            }
                        }
                    }
                    (complete, touch, sk.edge_degree[e], usize::MAX - e)
                })
                .expect("unassigned edge");
            assigned[best] = true;
            order.push(best);
        }
        let depth_of: Vec<usize> = {
            let mut d = vec![0; ne];
            for (k, &e) in order.iter().enumerate() {
                d[e] = k;
            }
            d
        };
        let mut faces_at = vec![Vec::new(); ne];
        for (face, fe) in face_edges.iter().enumerate() {
            let d = fe.iter().map(|&e| depth_of[e]).max().expect("three edges");
            faces_at[d].push(face);
        }
        let mut tets_at = vec![Vec::new(); ne];
        for (t, te) in tet_edges.iter().enumerate() {
            let d = te.iter().map(|&e| depth_of[e]).max().expect("six edges");
            tets_at[d].push(t);
        }
        Plan { order, faces_at, tets_at }
    }

    /// Visits every admissible completion of `colors` from `depth` on.
    fn walk(&self, cat: &FusionCategory, tri: &Triangulation, depth: usize, colors: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if depth == self.order.len() {
            visit(colors);
            return;
        }
        let e = self.order[depth];
        for c in 0..cat.rank() {
            colors[e] = c;
            if self.faces_at[depth].iter().all(|&f| face_admissible(cat, tri, f, colors)) {
                self.walk(cat, tri, depth + 1, colors, visit);
            }
        }
    }
}

/// A prepared state sum whose top-level branches can be evaluated independently.
pub struct StateSum<'a> {
    cat: &'a FusionCategory,
    tri: &'a Triangulation,
    plan: Plan,
    /// `1/Θ` per face class, indexed by the colors of its three edge classes.
    inv_theta: Vec<Vec<C64>>,
    face_edges: Vec<[usize; 3]>,
    prefactor: C64,
}

impl<'a> StateSum<'a> {
    /// Prepares the enumeration and precomputes every face pairing.
    pub fn new(cat: &'a FusionCategory, tri: &'a Triangulation, cfg: &StateSumConfig) -> Result<Self> {
        require_multiplicity_free(cat)?;
        if cfg.zeta == re(0.0) {
            return Err(Error::InvalidParams("zeta must be nonzero".into()));
        }
        let sk = tri.skeleton();
        let r = cat.rank();
        let plan = Plan::new(cat, tri);
        let mut face_edges = Vec::with_capacity(sk.num_faces);
        let mut inv_theta = Vec::with_capacity(sk.num_faces);
        let mut scratch = vec![0usize; sk.num_edges];
        for face in 0..sk.num_faces {
            let (t, f) = sk.face_rep[face];
            let [i, j, l] = face_vertices(f);
            let fe = [sk.edge_of[t][edge_index(i, j)], sk.edge_of[t][edge_index(j, l)], sk.edge_of[t][edge_index(i, l)]];
            let mut table = vec![re(0.0); r * r * r];
            for c0 in 0..r {
                for c1 in 0..r {
                    for c2 in 0..r {
                        scratch[fe[0]] = c0;
                        scratch[fe[1]] = c1;
                        scratch[fe[2]] = c2;
                        // An edge class may occur twice on a face; skip contradictory triples.
                        if scratch[fe[0]] != c0 || scratch[fe[1]] != c1 || scratch[fe[2]] != c2 {
                            continue;
                        }
                        if face_admissible(cat, tri, face, &scratch) {
                            table[(c0 * r + c1) * r + c2] = re(1.0) / theta(cat, tri, face, &scratch);
                        }
                    }
                }
            }
            face_edges.push(fe);
            inv_theta.push(table);
        }
        let cls = tri.classify_vertices();
        let inner = cls.num_inner() as i32;
        let chi = inner - sk.num_edges as i32 + sk.num_faces as i32 - tri.num_tets() as i32;
        let prefactor = cat.mu().powi(-inner) * cfg.zeta.powi(-chi);
        Ok(StateSum { cat, tri, plan, inv_theta, face_edges, prefactor })
    }

    /// Number of top-level branches (colors of the first edge in search order).
    pub fn num_branches(&self) -> usize {
        if self.plan.order.is_empty() {
            1
        } else {
            self.cat.rank()
        }
    }

    /// Sum of all summands whose first searched edge has color `branch`, without the prefactor.
    pub fn branch(&self, branch: usize) -> C64 {
        let mut colors = vec![0usize; self.tri.skeleton().num_edges];
        if self.plan.order.is_empty() {
            return self.extend(0, &mut colors, re(1.0));
        }
        let e = self.plan.order[0];
        colors[e] = branch;
        match self.step(0, &colors) {
            Some(w) => self.extend(1, &mut colors, w * self.cat.qdim(branch)),
            None => re(0.0),
        }
    }

    /// Global factor `μ^{-|V_inner|} ζ^{-χ}`.
    pub fn prefactor(&self) -> C64 {
        self.prefactor
    }

    /// Sequential evaluation over all branches in order.
    pub fn evaluate(&self) -> C64 {
        let mut total = re(0.0);
        for b in 0..self.num_branches() {
            total += self.branch(b);
        }
        total * self.prefactor
    }

    /// Weight picked up when completing depth `depth`, or `None` if a face becomes inadmissible.
    fn step(&self, depth: usize, colors: &[usize]) -> Option<C64> {
        let r = self.cat.rank();
        let mut w = re(1.0);
        for &face in &self.plan.faces_at[depth] {
            let fe = self.face_edges[face];
            let it = self.inv_theta[face][(colors[fe[0]] * r + colors[fe[1]]) * r + colors[fe[2]]];
            if it == re(0.0) {
                return None;
            }
            w *= it;
        }
        for &t in &self.plan.tets_at[depth] {
            w *= tet_value(self.cat, self.tri, t, colors);
        }
        Some(w)
    }

    fn extend(&self, depth: usize, colors: &mut Vec<usize>, acc: C64) -> C64 {
        if depth == self.plan.order.len() {
            return acc;
        }
        let e = self.plan.order[depth];
        let mut total = re(0.0);
        for c in 0..self.cat.rank() {
            colors[e] = c;
            if let Some(w) = self.step(depth, colors) {
                total += self.extend(depth + 1, colors, acc * w * self.cat.qdim(c));
            }
        }
        total
    }
}

/// The Turaev–Viro invariant `μ^{-|V_inner|} Σ_c Π_e d_{c(e)} Π_t Tet_t / Π_f Θ_f`.
pub fn tv_invariant(cat: &FusionCategory, tri: &Triangulation, cfg: &StateSumConfig) -> Result<C64> {
    Ok(StateSum::new(cat, tri, cfg)?.evaluate())
}

/// Value of the theta pairing of face class `face` under a coloring (exposed for diagnostics).
pub fn face_theta(cat: &FusionCategory, tri: &Triangulation, face: usize, coloring: &Coloring) -> Result<C64> {
    require_multiplicity_free(cat)?;
    if face >= tri.skeleton().num_faces {
        return Err(Error::Index("face class out of range".into()));
    }
    if !face_admissible(cat, tri, face, &coloring.edges) {
        return Err(Error::Inadmissible);
    }
    Ok(theta(cat, tri, face, &coloring.edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin_category;
    use crate::census::census;
    use crate::fusion::CategoryData;
    use crate::triangulation::{all_perms, sort_sign, EDGES};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tv(cat: &FusionCategory, tri: &Triangulation) -> C64 {
        tv_invariant(cat, tri, &StateSumConfig::default()).unwrap()
    }

    fn builtins() -> Vec<(&'static str, FusionCategory)> {
        let list: [(&str, &[i64]); 9] = [
            ("trivial", &[]),
            ("vec_zn", &[2, 0]),
            ("vec_zn", &[2, 1]),
            ("vec_zn", &[3, 1]),
            ("vec_zn", &[4, 3]),
            ("fibonacci", &[]),
            ("ising", &[]),
            ("su2_level", &[2]),
            ("su2_level", &[3]),
        ];
        list.iter().map(|(n, p)| (*n, builtin_category(n, p).unwrap())).collect()
    }

    /// Admissible colorings counted by brute force over every face of every tetrahedron.
    fn brute_force_count(cat: &FusionCategory, tri: &Triangulation) -> u64 {
        let ne = tri.skeleton().num_edges;
        let r = cat.rank();
        let mut count = 0;
        for code in 0..r.pow(ne as u32) {
            let colors: Vec<usize> = (0..ne).map(|e| (code / r.pow(e as u32)) % r).collect();
            let ok = (0..tri.num_tets()).all(|t| {
                (0..4).all(|f| {
                    let v: Vec<usize> = (0..4).filter(|&x| x != f).collect();
                    let col = |a: usize, b: usize| {
                        let e = EDGES.iter().position(|&p| p == (a, b)).unwrap();
                        let c = colors[tri.skeleton().edge_of[t][e]];
                        if tri.skeleton().edge_sign[t][e] > 0 { c } else { cat.dual(c) }
                    };
                    cat.n(col(v[0], v[1]), col(v[1], v[2]), col(v[0], v[2])) > 0
                })
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn trivial_category_gives_one() {
        let cat = builtin_category("trivial", &[]).unwrap();
        for name in crate::census::CENSUS_NAMES {
            let tri = census(name).unwrap();
            assert!((tv(&cat, &tri) - re(1.0)).norm() < 1e-14, "{name}");
            assert_eq!(count_admissible(&cat, &tri), 1);
        }
    }

    #[test]
    fn admissible_counts_match_brute_force() {
        for (name, cat) in builtins() {
            for m in ["s3_2tet", "rp3_2tet", "lens_3_1", "s2xs1"] {
                let tri = census(m).unwrap();
                assert_eq!(count_admissible(&cat, &tri), brute_force_count(&cat, &tri), "{name} {m}");
            }
        }
        let fib = builtin_category("fibonacci", &[]).unwrap();
        let s3 = census("s3_2tet").unwrap();
        assert_eq!(s3.skeleton().num_edges, 3);
        assert_eq!(count_admissible(&fib, &s3), brute_force_count(&fib, &s3));
    }

    #[test]
    fn fibonacci_sphere_is_inverse_global_dimension() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mu = 1.0 + phi * phi;
        let fib = builtin_category("fibonacci", &[]).unwrap();
        for m in ["s3_2tet", "s3_3tet"] {
            let z = tv(&fib, &census(m).unwrap());
            assert!((z - re(1.0 / mu)).norm() < 1e-9, "{m}: {z}");
        }
        assert!((1.0 / mu - 0.2763932023).abs() < 1e-10);
    }

    /// Untwisted Z/2 gauge theory: |Hom(π₁, Z/2)| / 2.
    #[test]
    fn z2_gauge_theory_counts_homomorphisms() {
        let cat = builtin_category("vec_zn", &[2, 0]).unwrap();
        for (m, homs) in [("s3_2tet", 1.0), ("s3_3tet", 1.0), ("rp3_2tet", 2.0), ("lens_3_1", 1.0), ("lens_4_1", 2.0), ("s2xs1", 2.0), ("t3", 8.0)] {
            let z = tv(&cat, &census(m).unwrap());
            assert!((z - re(homs / 2.0)).norm() < 1e-12, "{m}: {z}");
        }
    }

    #[test]
    fn sphere_times_circle_is_one() {
        for (name, cat) in builtins() {
            let z = tv(&cat, &census("s2xs1").unwrap());
            assert!((z - re(1.0)).norm() < 1e-8, "{name}: {z}");
        }
    }

    /// Rank of the center from the Drinfeld double count for Z/n and from the
    /// product decomposition for modular categories.
    #[test]
    fn three_torus_counts_center_simples() {
        let cases: [(&str, &[i64], f64); 3] = [("fibonacci", &[], 4.0), ("vec_zn", &[2, 0], 4.0), ("su2_level", &[2], 9.0)];
        let t3 = census("t3").unwrap();
        for (n, p, want) in cases {
            let cat = builtin_category(n, p).unwrap();
            let z = tv(&cat, &t3);
            assert!((z - re(want)).norm() < 1e-8, "{n}: {z}");
        }
    }

    /// `μ⁻¹ Σ_{ij} |S̃_{ij}|²` with `S̃` built from R-symbols of Fibonacci.
    #[test]
    fn ideal_triangulations_match_surgery_oracles() {
        let fib = builtin_category("fibonacci", &[]).unwrap();
        let theta_tau = {
            // θ_τ from R: θ_τ d_τ = Σ_c d_c R^{ττ}_c.
            let d = fib.qdim(1);
            (fib.r(1, 1, 0, 0, 0).unwrap() + d * fib.r(1, 1, 1, 0, 0).unwrap()) / d
        };
        let theta = [re(1.0), theta_tau];
        let d = [re(1.0), fib.qdim(1)];
        let mut s = [[re(0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    if fib.n(i, j, k) > 0 {
                        s[i][j] += (theta[k] / (theta[i] * theta[j])).conj() * d[k];
                    }
                }
            }
        }
        let mu = fib.mu().re;
        let oracle: f64 = s.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>() / mu;
        assert!((oracle - 2.0).abs() < 1e-9);
        let z = tv(&fib, &census("hopf_complement_ideal").unwrap());
        assert!((z - re(oracle)).norm() < 1e-6, "{z}");
        let su2 = builtin_category("su2_level", &[2]).unwrap();
        let z = tv(&su2, &census("solid_torus_ideal").unwrap());
        assert!((z - re(1.0)).norm() < 1e-7, "{z}");
        for (name, cat) in builtins() {
            let z = tv(&cat, &census("solid_torus_ideal").unwrap());
            assert!((z - re(1.0)).norm() < 1e-7, "{name}: {z}");
        }
    }

    #[test]
    fn pachner_moves_preserve_the_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, cat) in builtins() {
            for m in ["s3_2tet", "rp3_2tet", "lens_3_1", "lens_4_1", "s2xs1"] {
                let tri = census(m).unwrap();
                let z0 = tv(&cat, &tri);
                let moved = tri.random_moves(&mut rng, 10, 6);
                let z1 = tv(&cat, &moved);
                assert!((z0 - z1).norm() < 1e-8, "{name} {m}: {z0} vs {z1}");
            }
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        for (name, cat) in builtins() {
            let a = census("rp3_2tet").unwrap();
            let b = census("lens_3_1").unwrap();
            let z = tv(&cat, &a.disjoint_union(&b));
            assert!((z - tv(&cat, &a) * tv(&cat, &b)).norm() < 1e-10, "{name}");
        }
    }

    #[test]
    fn zeta_cancels_on_closed_manifolds() {
        let fib = builtin_category("fibonacci", &[]).unwrap();
        let tri = census("lens_3_1").unwrap();
        let base = tv(&fib, &tri);
        for zeta in [re(2.0), re(-1.0) + C64::i()] {
            let z = tv_invariant(&fib, &tri, &StateSumConfig { zeta, workers: 1 }).unwrap();
            assert!((z - base).norm() < 1e-10);
        }
        let bad = StateSumConfig { zeta: re(0.0), workers: 1 };
        assert!(tv_invariant(&fib, &tri, &bad).is_err());
    }

    #[test]
    fn relabelings_preserve_the_invariant() {
        for (name, cat) in builtins() {
            let tri = census("s3_3tet").unwrap();
            let z = tv(&cat, &tri);
            let r = tri.relabel_tets(&[1, 2, 0]).unwrap();
            assert!((tv(&cat, &r) - z).norm() < 1e-10, "{name}");
            for p in all_perms().into_iter().filter(|p| sort_sign(p) > 0) {
                let r = tri.relabel_vertices(1, p).unwrap();
                assert!((tv(&cat, &r) - z).norm() < 1e-10, "{name} {p:?}");
            }
        }
    }

    #[test]
    fn unit_coloring_has_unit_weight() {
        for (_, cat) in builtins() {
            let tri = census("s3_2tet").unwrap();
            let c = Coloring::from_edges(&tri, vec![0; tri.skeleton().num_edges]);
            for t in 0..tri.num_tets() {
                assert!((tet_weight(&cat, &tri, t, &c).unwrap() - re(1.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn inadmissible_colorings_are_rejected() {
        let fib = builtin_category("fibonacci", &[]).unwrap();
        let tri = census("s3_2tet").unwrap();
        // One τ edge surrounded by unit edges violates some face.
        let ne = tri.skeleton().num_edges;
        let bad = (0..ne).find_map(|e| {
            let mut c = vec![0; ne];
            c[e] = 1;
            let col = Coloring::from_edges(&tri, c);
            tet_weight(&fib, &tri, 0, &col).err()
        });
        assert_eq!(bad, Some(Error::Inadmissible));
    }

    #[test]
    fn multiplicity_is_unsupported() {
        let mut data = CategoryData::new(2);
        data.labels = vec!["1".into(), "x".into()];
        data.dual = vec![0, 1];
        data.set_fusion(0, 0, 0, 1);
        data.set_fusion(0, 1, 1, 1);
        data.set_fusion(1, 0, 1, 1);
        data.set_fusion(1, 1, 0, 1);
        data.set_fusion(1, 1, 1, 2);
        let d = 1.0 + 2f64.sqrt();
        let key = crate::fusion::FKey { a: 1, b: 1, c: 1, d: 1, e: 0, alpha: 0, beta: 0, f: 0, gamma: 0, delta: 0 };
        data.f_symbols.insert(key, re(1.0 / d));
        let cat = FusionCategory::new(data).unwrap();
        let tri = census("s3_2tet").unwrap();
        assert!(matches!(tv_invariant(&cat, &tri, &StateSumConfig::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn branches_sum_to_the_total() {
        let cat = builtin_category("su2_level", &[3]).unwrap();
        let tri = census("t3").unwrap();
        let ss = StateSum::new(&cat, &tri, &StateSumConfig::default()).unwrap();
        let total: C64 = (0..ss.num_branches()).map(|b| ss.branch(b)).fold(re(0.0), |a, b| a + b) * ss.prefactor();
        assert_eq!(total, ss.evaluate());
    }

    /// Transports an edge coloring across a vertex relabeling of tetrahedron `t`.
    fn transport(old: &Triangulation, new: &Triangulation, t: usize, p: [usize; 4], colors: &[usize]) -> Vec<usize> {
        let mut out = vec![usize::MAX; colors.len()];
        for u in 0..old.num_tets() {
            for (e, &(a, b)) in EDGES.iter().enumerate() {
                let ne = if u == t { crate::triangulation::edge_index(p[a], p[b]) } else { e };
                out[new.skeleton().edge_of[u][ne]] = colors[old.skeleton().edge_of[u][e]];
            }
        }
        out
    }

    #[test]
    fn tet_weight_has_tetrahedral_symmetry() {
        let mut checked = 0;
        for (name, cat) in unimodal() {
            let tri = census("s3_3tet").unwrap();
            let ne = tri.skeleton().num_edges;
            let r = cat.rank();
            for code in 0..r.pow(ne as u32) {
                let colors: Vec<usize> = (0..ne).map(|e| (code / r.pow(e as u32)) % r).collect();
                let c = Coloring::from_edges(&tri, colors.clone());
                let Ok(w) = tet_weight(&cat, &tri, 1, &c) else { continue };
                for p in all_perms().into_iter().filter(|p| sort_sign(p) > 0) {
                    let moved = tri.relabel_vertices(1, p).unwrap();
                    let c2 = Coloring::from_edges(&moved, transport(&tri, &moved, 1, p, &colors));
                    let w2 = tet_weight(&cat, &moved, 1, &c2).unwrap();
                    assert!((w - w2).norm() < 1e-10, "{name} {colors:?} {p:?}: {w} vs {w2}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    /// Categories whose Frobenius-Schur data are trivial, where the mirror
    /// normalization is both symmetric and exact.
    fn unimodal() -> Vec<(&'static str, FusionCategory)> {
        builtins().into_iter().filter(|(n, c)| matches!(*n, "trivial" | "fibonacci" | "ising") || (*n == "vec_zn" && c.rank() == 2 && c.fs_sign(1).re > 0.0)).collect()
    }

    #[test]
    fn normalized_weights_compose_to_the_state_sum() {
        for (name, cat) in unimodal() {
            for m in ["s3_2tet", "rp3_2tet", "lens_3_1", "s2xs1"] {
                let tri = census(m).unwrap();
                let ne = tri.skeleton().num_edges;
                let r = cat.rank();
                let mut total = re(0.0);
                for code in 0..r.pow(ne as u32) {
                    let colors: Vec<usize> = (0..ne).map(|e| (code / r.pow(e as u32)) % r).collect();
                    let c = Coloring::from_edges(&tri, colors.clone());
                    let ws: Result<Vec<C64>> = (0..tri.num_tets()).map(|t| tet_weight(&cat, &tri, t, &c)).collect();
                    let Ok(ws) = ws else { continue };
                    let dims: C64 = colors.iter().map(|&x| cat.qdim(x)).product();
                    total += dims * ws.iter().product::<C64>();
                }
                total *= cat.mu().powi(-(tri.classify_vertices().num_inner() as i32));
                assert!((total - tv(&cat, &tri)).norm() < 1e-10, "{name} {m}");
            }
        }
    }
}
