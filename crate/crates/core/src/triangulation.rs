//! Closed (pseudo-)3-manifold triangulations given by tetrahedron face gluings.
//!
//! Tetrahedra have local vertices `0..4`; face `i` is opposite vertex `i`.
//! A gluing of `(t, f)` to `(t', f')` carries a permutation `perm` of local
//! vertex labels with `perm[f] = f'`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Local edges of a tetrahedron as vertex pairs, in canonical order.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index into [`EDGES`] of the unordered pair `{i, j}`.
pub fn edge_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    EDGES.iter().position(|&e| e == (a, b)).expect("distinct vertices")
}

/// Target of one face gluing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub perm: [usize; 4],
}

/// One input gluing line: `(t, f)` glued to `(t', f')` via `perm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlueSpec {
    pub tet: usize,
    pub face: usize,
    pub target: Gluing,
}

fn invert(p: &[usize; 4]) -> [usize; 4] {
    let mut q = [0; 4];
    for i in 0..4 {
        q[p[i]] = i;
    }
    q
}

fn is_perm(p: &[usize; 4]) -> bool {
    let mut seen = [false; 4];
    for &x in p {
        if x >= 4 || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Sign of a permutation of a short list of distinct integers relative to sorted order.
pub fn sort_sign(xs: &[usize]) -> i8 {
    let mut s = 1i8;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] > xs[j] {
                s = -s;
            }
        }
    }
    s
}

/// The three vertices of face `f` in increasing order.
pub fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for v in 0..4 {
        if v != f {
            out[n] = v;
            n += 1;
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
    parity: Vec<i8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), parity: vec![1; n] }
    }

    /// Root and parity of `x` relative to its root.
    fn find(&mut self, x: usize) -> (usize, i8) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // Compress, accumulating parities from the top down.
        for &node in path.iter().rev() {
            let p = self.parent[node];
            if p != root {
                self.parity[node] *= self.parity[p];
            }
            self.parent[node] = root;
        }
        (root, if x == root { 1 } else { self.parity[x] })
    }

    /// Joins `a` and `b` so that `parity(a) * parity(b) = rel`; returns false on conflict.
    fn union(&mut self, a: usize, b: usize, rel: i8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa * pb == rel;
        }
        let (lo, hi, plo, phi) = if ra < rb { (ra, rb, pa, pb) } else { (rb, ra, pb, pa) };
        self.parent[hi] = lo;
        self.parity[hi] = plo * phi * rel;
        true
    }
}

/// Derived cell structure of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_faces: usize,
    /// Vertex class of each tetrahedron corner.
    pub vertex_of: Vec<[usize; 4]>,
    /// Edge class of each local edge (indexed as [`EDGES`]).
    pub edge_of: Vec<[usize; 6]>,
    /// `+1` when local `i → j` (`i < j`) agrees with the canonical class orientation.
    pub edge_sign: Vec<[i8; 6]>,
    /// Face class of each `(tet, face)`.
    pub face_of: Vec<[usize; 4]>,
    /// Lowest `(tet, face)` in each face class; the partner is reached through the gluing.
    pub face_rep: Vec<(usize, usize)>,
    /// Lowest `(tet, local edge)` in each edge class.
    pub edge_rep: Vec<(usize, usize)>,
    /// Number of tetrahedron edges in each edge class (the edge degree).
    pub edge_degree: Vec<usize>,
}

/// Per-vertex-class link data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClassification {
    /// Euler characteristic of each vertex link.
    pub link_euler: Vec<i64>,
    /// `true` when the link is a 2-sphere.
    pub inner: Vec<bool>,
}

impl VertexClassification {
    pub fn num_inner(&self) -> usize {
        self.inner.iter().filter(|&&x| x).count()
    }

    pub fn num_singular(&self) -> usize {
        self.inner.len() - self.num_inner()
    }
}

/// An oriented closed triangulation with its skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    skeleton: Skeleton,
    orientation: Vec<i8>,
}

impl Triangulation {
    /// Builds and validates a triangulation from gluing lines; each unordered
    /// pair may be given once or in both directions.
    pub fn new(num_tets: usize, specs: &[GlueSpec]) -> Result<Self> {
        let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; num_tets];
        let set = |t: usize, f: usize, g: Gluing, table: &mut Vec<[Option<Gluing>; 4]>| -> Result<()> {
            match table[t][f] {
                Some(old) if old != g => Err(Error::NonInvolutive(format!("face ({t}, {f}) glued twice inconsistently"))),
                _ => {
                    table[t][f] = Some(g);
                    Ok(())
                }
            }
        };
        for s in specs {
            let g = s.target;
            if s.tet >= num_tets || g.tet >= num_tets || s.face >= 4 || g.face >= 4 {
                return Err(Error::Index(format!("gluing {s:?} out of range")));
            }
            if !is_perm(&g.perm) {
                return Err(Error::NonInvolutive(format!("not a permutation: {:?}", g.perm)));
            }
            if g.perm[s.face] != g.face {
                return Err(Error::NonInvolutive(format!("perm does not carry face {} to {}", s.face, g.face)));
            }
            if s.tet == g.tet && s.face == g.face {
                return Err(Error::NonInvolutive(format!("face ({}, {}) glued to itself", s.tet, s.face)));
            }
            set(s.tet, s.face, g, &mut table)?;
            set(g.tet, g.face, Gluing { tet: s.tet, face: s.face, perm: invert(&g.perm) }, &mut table)?;
        }
        let mut gluings = Vec::with_capacity(num_tets);
        for (t, row) in table.iter().enumerate() {
            let mut out = [Gluing { tet: 0, face: 0, perm: [0, 1, 2, 3] }; 4];
            for f in 0..4 {
                out[f] = row[f].ok_or(Error::UngluedFace { tet: t, face: f })?;
            }
            gluings.push(out);
        }
        Self::from_table(gluings)
    }

    fn from_table(gluings: Vec<[Gluing; 4]>) -> Result<Self> {
        let skeleton = build_skeleton(&gluings)?;
        let orientation = orient(&gluings).ok_or(Error::NonOrientable)?;
        Ok(Triangulation { gluings, skeleton, orientation })
    }

    pub fn num_tets(&self) -> usize {
        self.gluings.len()
    }

    /// Gluing of face `f` of tetrahedron `t`.
    pub fn gluing(&self, t: usize, f: usize) -> Gluing {
        self.gluings[t][f]
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    /// Orientation sign of each tetrahedron relative to its local vertex order.
    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }

    /// Gluing lines in ascending `(t, f)` order, each unordered pair once.
    pub fn specs(&self) -> Vec<GlueSpec> {
        let mut out = Vec::new();
        for t in 0..self.num_tets() {
            for f in 0..4 {
                let g = self.gluings[t][f];
                if (t, f) < (g.tet, g.face) {
                    out.push(GlueSpec { tet: t, face: f, target: g });
                }
            }
        }
        out
    }

    /// `|V| - |E| + |F| - |T|` over all vertex classes.
    pub fn euler_characteristic(&self) -> i64 {
        let s = &self.skeleton;
        s.num_vertices as i64 - s.num_edges as i64 + s.num_faces as i64 - self.num_tets() as i64
    }

    /// Link Euler characteristics and inner/singular flags of the vertex classes.
    pub fn classify_vertices(&self) -> VertexClassification {
        let n = self.num_tets();
        // Edge ends (t, v, w) with v the vertex and w the other endpoint.
        let idx = |t: usize, v: usize, w: usize| (t * 4 + v) * 4 + w;
        let mut uf = UnionFind::new(n * 16);
        for t in 0..n {
            for f in 0..4 {
                let g = self.gluings[t][f];
                for v in 0..4 {
                    for w in 0..4 {
                        if v != w && v != f && w != f {
                            uf.union(idx(t, v, w), idx(g.tet, g.perm[v], g.perm[w]), 1);
                        }
                    }
                }
            }
        }
        let nv = self.skeleton.num_vertices;
        let mut corners = vec![0i64; nv];
        let mut ends: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nv];
        for t in 0..n {
            for v in 0..4 {
                let c = self.skeleton.vertex_of[t][v];
                corners[c] += 1;
                for w in 0..4 {
                    if w != v {
                        ends[c].insert(uf.find(idx(t, v, w)).0);
                    }
                }
            }
        }
        let link_euler: Vec<i64> = (0..nv).map(|c| ends[c].len() as i64 - 3 * corners[c] / 2 + corners[c]).collect();
        let inner = link_euler.iter().map(|&x| x == 2).collect();
        VertexClassification { link_euler, inner }
    }

    /// Disjoint union of two triangulations (tetrahedra of `other` renumbered after `self`).
    pub fn disjoint_union(&self, other: &Triangulation) -> Triangulation {
        let off = self.num_tets();
        let mut table = self.gluings.clone();
        for row in &other.gluings {
            let mut r = *row;
            for g in r.iter_mut() {
                g.tet += off;
            }
            table.push(r);
        }
        Self::from_table(table).expect("disjoint union of valid triangulations")
    }

    /// Renumbers tetrahedra: tetrahedron `t` becomes `order[t]`.
    pub fn relabel_tets(&self, order: &[usize]) -> Result<Triangulation> {
        let n = self.num_tets();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if order.len() != n || sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidParams("relabeling is not a permutation".into()));
        }
        let mut table = vec![[Gluing { tet: 0, face: 0, perm: [0, 1, 2, 3] }; 4]; n];
        for t in 0..n {
            for f in 0..4 {
                let mut g = self.gluings[t][f];
                g.tet = order[g.tet];
                table[order[t]][f] = g;
            }
        }
        Self::from_table(table)
    }

    /// Relabels the local vertices of tetrahedron `t` by `sigma` (old local `v` becomes `sigma[v]`).
    pub fn relabel_vertices(&self, t: usize, sigma: [usize; 4]) -> Result<Triangulation> {
        if !is_perm(&sigma) || t >= self.num_tets() {
            return Err(Error::InvalidParams("bad vertex relabeling".into()));
        }
        let sinv = invert(&sigma);
        let n = self.num_tets();
        let mut table = self.gluings.clone();
        // Faces of t move to new positions; perms leaving t gain sigma⁻¹ on the right.
        let mut new_row = [Gluing { tet: 0, face: 0, perm: [0, 1, 2, 3] }; 4];
        for f in 0..4 {
            let g = self.gluings[t][f];
            let mut perm = [0; 4];
            for v in 0..4 {
                perm[v] = g.perm[sinv[v]];
            }
            new_row[sigma[f]] = Gluing { tet: g.tet, face: g.face, perm };
        }
        table[t] = new_row;
        // Perms arriving at t gain sigma on the left.
        for u in 0..n {
            for f in 0..4 {
                let g = table[u][f];
                if g.tet == t {
                    let mut perm = [0; 4];
                    for v in 0..4 {
                        perm[v] = sigma[g.perm[v]];
                    }
                    table[u][f] = Gluing { tet: t, face: sigma[g.face], perm };
                }
            }
        }
        // Self-gluings of t were rewritten twice; recompute them from the original.
        for f in 0..4 {
            let g = self.gluings[t][f];
            if g.tet == t {
                let mut perm = [0; 4];
                for v in 0..4 {
                    perm[v] = sigma[g.perm[sinv[v]]];
                }
                table[t][sigma[f]] = Gluing { tet: t, face: sigma[g.face], perm };
            }
        }
        Self::from_table(table)
    }

    /// Whether the two triangulations are combinatorially isomorphic.
    pub fn is_isomorphic(&self, other: &Triangulation) -> bool {
        let n = self.num_tets();
        if n != other.num_tets() {
            return false;
        }
        if n == 0 {
            return true;
        }
        for start in 0..n {
            for p in all_perms() {
                if self.try_isomorphism(other, start, p) {
                    return true;
                }
            }
        }
        false
    }

    fn try_isomorphism(&self, other: &Triangulation, start: usize, p: [usize; 4]) -> bool {
        let n = self.num_tets();
        let mut map: Vec<Option<(usize, [usize; 4])>> = vec![None; n];
        let mut used = vec![false; n];
        // Isomorphisms are only tried from tetrahedron 0's component; other
        // components are matched greedily in order.
        let mut roots: Vec<(usize, usize, [usize; 4])> = vec![(0, start, p)];
        let mut next_root = 0;
        loop {
            let (s, t, q) = match roots.pop() {
                Some(x) => x,
                None => {
                    while next_root < n && map[next_root].is_some() {
                        next_root += 1;
                    }
                    if next_root == n {
                        return true;
                    }
                    // Try every free target for the next component.
                    for t in 0..n {
                        if used[t] {
                            continue;
                        }
                        for q in all_perms() {
                            let mut m2 = map.clone();
                            let mut u2 = used.clone();
                            if self.extend(other, &mut m2, &mut u2, next_root, t, q) {
                                map = m2;
                                used = u2;
                                break;
                            }
                        }
                        if map[next_root].is_some() {
                            break;
                        }
                    }
                    if map[next_root].is_none() {
                        return false;
                    }
                    continue;
                }
            };
            if !self.extend(other, &mut map, &mut used, s, t, q) {
                return false;
            }
        }
    }

    fn extend(&self, other: &Triangulation, map: &mut [Option<(usize, [usize; 4])>], used: &mut [bool], s: usize, t: usize, p: [usize; 4]) -> bool {
        let mut queue = VecDeque::new();
        match map[s] {
            Some(existing) => return existing == (t, p),
            None => {
                if used[t] {
                    return false;
                }
                map[s] = Some((t, p));
                used[t] = true;
                queue.push_back(s);
            }
        }
        while let Some(a) = queue.pop_front() {
            let (b, pa) = map[a].expect("mapped");
            for f in 0..4 {
                let ga = self.gluings[a][f];
                let gb = other.gluings[b][pa[f]];
                // Corner v of a ↦ pa[v] in b; across the face: ga.perm[v] ↦ gb.perm[pa[v]].
                let mut q = [0; 4];
                for v in 0..4 {
                    q[ga.perm[v]] = gb.perm[pa[v]];
                }
                match map[ga.tet] {
                    Some(existing) => {
                        if existing != (gb.tet, q) {
                            return false;
                        }
                    }
                    None => {
                        if used[gb.tet] {
                            return false;
                        }
                        map[ga.tet] = Some((gb.tet, q));
                        used[gb.tet] = true;
                        queue.push_back(ga.tet);
                    }
                }
            }
        }
        true
    }
}

/// All 24 permutations of `0..4` in lexicographic order.
pub fn all_perms() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if is_perm(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn build_skeleton(gluings: &[[Gluing; 4]]) -> Result<Skeleton> {
    let n = gluings.len();
    // Vertices.
    let mut uv = UnionFind::new(n * 4);
    for t in 0..n {
        for f in 0..4 {
            let g = gluings[t][f];
            if gluings[g.tet][g.face].tet != t || gluings[g.tet][g.face].face != f || gluings[g.tet][g.face].perm != invert(&g.perm) {
                return Err(Error::NonInvolutive(format!("gluing of ({t}, {f}) is not mutually inverse")));
            }
            for v in 0..4 {
                if v != f {
                    uv.union(t * 4 + v, g.tet * 4 + g.perm[v], 1);
                }
            }
        }
    }
    let mut vmap = BTreeMap::new();
    let mut vertex_of = vec![[0usize; 4]; n];
    for t in 0..n {
        for v in 0..4 {
            let root = uv.find(t * 4 + v).0;
            let next = vmap.len();
            vertex_of[t][v] = *vmap.entry(root).or_insert(next);
        }
    }
    // Edges, tracking orientation parity.
    let mut ue = UnionFind::new(n * 6);
    for t in 0..n {
        for f in 0..4 {
            let g = gluings[t][f];
            for (ei, &(i, j)) in EDGES.iter().enumerate() {
                if i == f || j == f {
                    continue;
                }
                let (pi, pj) = (g.perm[i], g.perm[j]);
                let ej = edge_index(pi, pj);
                let rel = if pi < pj { 1 } else { -1 };
                if !ue.union(t * 6 + ei, g.tet * 6 + ej, rel) {
                    return Err(Error::NonInvolutive(format!("edge of tetrahedron {t} identified with its reverse")));
                }
            }
        }
    }
    let mut emap = BTreeMap::new();
    let mut edge_of = vec![[0usize; 6]; n];
    let mut edge_sign = vec![[1i8; 6]; n];
    let mut edge_rep = Vec::new();
    let mut edge_degree = Vec::new();
    for t in 0..n {
        for e in 0..6 {
            let (root, par) = ue.find(t * 6 + e);
            let next = emap.len();
            let entry = emap.entry(root).or_insert_with(|| {
                edge_rep.push((t, e));
                edge_degree.push(0);
                (next, par)
            });
            edge_of[t][e] = entry.0;
            // The first member seen is the lowest (tet, edge): it defines the orientation.
            edge_sign[t][e] = par * entry.1;
            edge_degree[entry.0] += 1;
        }
    }
    // Faces.
    let mut face_of = vec![[usize::MAX; 4]; n];
    let mut face_rep = Vec::new();
    for t in 0..n {
        for f in 0..4 {
            if face_of[t][f] == usize::MAX {
                let id = face_rep.len();
                face_rep.push((t, f));
                face_of[t][f] = id;
                let g = gluings[t][f];
                face_of[g.tet][g.face] = id;
            }
        }
    }
    Ok(Skeleton {
        num_vertices: vmap.len(),
        num_edges: emap.len(),
        num_faces: face_rep.len(),
        vertex_of,
        edge_of,
        edge_sign,
        face_of,
        face_rep,
        edge_rep,
        edge_degree,
    })
}

/// Sign relating the induced orientations of glued faces: a gluing is
/// orientation-compatible iff `σ_{t'} = -σ_t · glue_sign`.
pub fn glue_sign(f: usize, g: &Gluing) -> i8 {
    let fv = face_vertices(f);
    let img = [g.perm[fv[0]], g.perm[fv[1]], g.perm[fv[2]]];
    let parity = if (f + g.face).is_multiple_of(2) { 1 } else { -1 };
    sort_sign(&img) * parity
}

fn orient(gluings: &[[Gluing; 4]]) -> Option<Vec<i8>> {
    let n = gluings.len();
    let mut sigma = vec![0i8; n];
    for start in 0..n {
        if sigma[start] != 0 {
            continue;
        }
        sigma[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for f in 0..4 {
                let g = gluings[t][f];
                let want = -sigma[t] * glue_sign(f, &g);
                if sigma[g.tet] == 0 {
                    sigma[g.tet] = want;
                    queue.push_back(g.tet);
                } else if sigma[g.tet] != want {
                    return None;
                }
            }
        }
    }
    Some(sigma)
}

/// A tetrahedron of a move, given by abstract vertex labels.
type LabeledTet = [usize; 4];

/// Replaces the tetrahedra `removed` (whose local vertices carry the labels
/// `old_labels`) by `new_tets`, reattaching every external face.
fn rebuild(tri: &Triangulation, removed: &[usize], old_labels: &[LabeledTet], new_tets: &[LabeledTet]) -> Result<Triangulation> {
    let n = tri.num_tets();
    let keep: Vec<usize> = (0..n).filter(|t| !removed.contains(t)).collect();
    let mut new_index = vec![usize::MAX; n];
    for (i, &t) in keep.iter().enumerate() {
        new_index[t] = i;
    }
    let base = keep.len();
    let total = base + new_tets.len();
    let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; total];
    // Surviving gluings between kept tetrahedra.
    for &t in &keep {
        for f in 0..4 {
            let g = tri.gluings[t][f];
            if new_index[g.tet] != usize::MAX {
                table[new_index[t]][f] = Some(Gluing { tet: new_index[g.tet], face: g.face, perm: g.perm });
            }
        }
    }
    let pos = |labels: &LabeledTet, l: usize| labels.iter().position(|&x| x == l);
    // Where each old face of a removed tetrahedron now lives: (new tet, face, map old local → new local).
    let mut old_face_home: BTreeMap<(usize, usize), (usize, usize, [usize; 4])> = BTreeMap::new();
    for (ni, nt) in new_tets.iter().enumerate() {
        for f in 0..4 {
            let face_labels: Vec<usize> = (0..4).filter(|&v| v != f).map(|v| nt[v]).collect();
            // Internal gluing to another new tetrahedron?
            let mut internal = None;
            for (mj, mt) in new_tets.iter().enumerate() {
                if mj == ni {
                    continue;
                }
                if face_labels.iter().all(|l| mt.contains(l)) {
                    let g_face = (0..4).find(|&v| !face_labels.contains(&mt[v])).expect("fourth vertex");
                    let mut perm = [0; 4];
                    for v in 0..4 {
                        perm[v] = if v == f { g_face } else { pos(mt, nt[v]).expect("shared label") };
                    }
                    internal = Some(Gluing { tet: base + mj, face: g_face, perm });
                }
            }
            if let Some(g) = internal {
                table[base + ni][f] = Some(g);
                continue;
            }
            let (ri, ol) = old_labels
                .iter()
                .enumerate()
                .find(|(_, ol)| face_labels.iter().all(|l| ol.contains(l)))
                .ok_or_else(|| Error::InapplicableMove("external face without an old home".into()))?;
            let old_t = removed[ri];
            let old_f = (0..4).find(|&v| !face_labels.contains(&ol[v])).expect("fourth vertex");
            let mut old_to_new = [0; 4];
            for v in 0..4 {
                old_to_new[v] = if v == old_f { f } else { pos(nt, ol[v]).expect("face label") };
            }
            old_face_home.insert((old_t, old_f), (base + ni, f, old_to_new));
        }
    }
    for (&(old_t, old_f), &(nt, nf, old_to_new)) in &old_face_home {
        let g = tri.gluings[old_t][old_f];
        let new_to_old = invert(&old_to_new);
        let target = if new_index[g.tet] != usize::MAX {
            let mut perm = [0; 4];
            for v in 0..4 {
                perm[v] = g.perm[new_to_old[v]];
            }
            Gluing { tet: new_index[g.tet], face: g.face, perm }
        } else {
            let &(tt, tf, t_old_to_new) = old_face_home
                .get(&(g.tet, g.face))
                .ok_or_else(|| Error::InapplicableMove("glued face lost in the move".into()))?;
            let mut perm = [0; 4];
            for v in 0..4 {
                perm[v] = t_old_to_new[g.perm[new_to_old[v]]];
            }
            Gluing { tet: tt, face: tf, perm }
        };
        table[nt][nf] = Some(target);
        if new_index[g.tet] != usize::MAX {
            let back = Gluing { tet: nt, face: nf, perm: invert(&target.perm) };
            table[target.tet][target.face] = Some(back);
        }
    }
    let mut gluings = Vec::with_capacity(total);
    for (t, row) in table.iter().enumerate() {
        let mut out = [Gluing { tet: 0, face: 0, perm: [0, 1, 2, 3] }; 4];
        for f in 0..4 {
            out[f] = row[f].ok_or(Error::UngluedFace { tet: t, face: f })?;
        }
        gluings.push(out);
    }
    let mut result = Triangulation::from_table(gluings)?;
    // Keep the orientation of the old triangulation: compare one new tetrahedron
    // against the old tetrahedron it shares an external face with.
    let (&(old_t, old_f), &(nt, nf, old_to_new)) = old_face_home.iter().next().expect("moves have external faces");
    let fv = face_vertices(old_f);
    let img = [old_to_new[fv[0]], old_to_new[fv[1]], old_to_new[fv[2]]];
    let parity = if (old_f + nf) % 2 == 0 { 1 } else { -1 };
    let want = tri.orientation[old_t] * sort_sign(&img) * parity;
    if result.orientation[nt] != want {
        for s in result.orientation.iter_mut() {
            *s = -*s;
        }
    }
    Ok(result)
}

impl Triangulation {
    /// 2-3 move across the face class `face`.
    pub fn pachner_23(&self, face: usize) -> Result<Triangulation> {
        if face >= self.skeleton.num_faces {
            return Err(Error::InapplicableMove(format!("no face class {face}")));
        }
        let (t1, f1) = self.skeleton.face_rep[face];
        let g = self.gluings[t1][f1];
        if g.tet == t1 {
            return Err(Error::InapplicableMove("2-3 needs two distinct tetrahedra".into()));
        }
        // Labels: 0 = apex of t1, 1 = apex of t2, 2..5 = face vertices.
        let fv = face_vertices(f1);
        let mut l1 = [0; 4];
        let mut l2 = [0; 4];
        l1[f1] = 0;
        l2[g.face] = 1;
        for (i, &v) in fv.iter().enumerate() {
            l1[v] = 2 + i;
            l2[g.perm[v]] = 2 + i;
        }
        let new_tets = [[0, 1, 3, 4], [0, 1, 2, 4], [0, 1, 2, 3]];
        rebuild(self, &[t1, g.tet], &[l1, l2], &new_tets)
    }

    /// 3-2 move removing the edge class `edge` of degree three.
    pub fn pachner_32(&self, edge: usize) -> Result<Triangulation> {
        if edge >= self.skeleton.num_edges {
            return Err(Error::InapplicableMove(format!("no edge class {edge}")));
        }
        if self.skeleton.edge_degree[edge] != 3 {
            return Err(Error::InapplicableMove(format!("edge {edge} has degree {}", self.skeleton.edge_degree[edge])));
        }
        let (t0, e0) = self.skeleton.edge_rep[edge];
        let (x, y) = EDGES[e0];
        let others: Vec<usize> = (0..4).filter(|&v| v != x && v != y).collect();
        // Walk around the edge: labels 0 = x end, 1 = y end, 2.. = equatorial vertices.
        let mut tets = Vec::new();
        let mut labels = Vec::new();
        let (mut t, mut a, mut b, mut u, mut w) = (t0, x, y, others[0], others[1]);
        let mut first = [0usize; 4];
        first[a] = 0;
        first[b] = 1;
        first[w] = 2;
        first[u] = 3;
        let mut cur = first;
        for step in 0..3 {
            tets.push(t);
            labels.push(cur);
            // Cross the face opposite w (contains a, b, u).
            let g = self.gluings[t][w];
            let (na, nb, nw) = (g.perm[a], g.perm[b], g.perm[u]);
            let nu = g.face;
            let mut nxt = [0usize; 4];
            nxt[na] = cur[a];
            nxt[nb] = cur[b];
            nxt[nw] = cur[u];
            nxt[nu] = match step {
                0 => 4,
                1 => 2,
                _ => {
                    if g.tet != t0 {
                        return Err(Error::InapplicableMove("edge link is not a 3-cycle".into()));
                    }
                    first[nu]
                }
            };
            if step == 2 && nxt != first {
                return Err(Error::InapplicableMove("edge link does not close up".into()));
            }
            t = g.tet;
            a = na;
            b = nb;
            w = nw;
            u = nu;
            cur = nxt;
        }
        let distinct: BTreeSet<usize> = tets.iter().copied().collect();
        if distinct.len() != 3 {
            return Err(Error::InapplicableMove("3-2 needs three distinct tetrahedra".into()));
        }
        // Equatorial labels are 2, 3, 4.
        let new_tets = [[0, 2, 3, 4], [1, 2, 3, 4]];
        rebuild(self, &tets, &labels, &new_tets)
    }

    /// 1-4 move subdividing tetrahedron `t` at a new interior vertex.
    pub fn pachner_14(&self, t: usize) -> Result<Triangulation> {
        if t >= self.num_tets() {
            return Err(Error::InapplicableMove(format!("no tetrahedron {t}")));
        }
        let new_tets = [[4, 1, 2, 3], [0, 4, 2, 3], [0, 1, 4, 3], [0, 1, 2, 4]];
        rebuild(self, &[t], &[[0, 1, 2, 3]], &new_tets)
    }

    /// 4-1 move removing the vertex class `vertex` whose link is a tetrahedron boundary.
    pub fn pachner_41(&self, vertex: usize) -> Result<Triangulation> {
        let s = &self.skeleton;
        if vertex >= s.num_vertices {
            return Err(Error::InapplicableMove(format!("no vertex class {vertex}")));
        }
        let mut corners = Vec::new();
        for t in 0..self.num_tets() {
            for v in 0..4 {
                if s.vertex_of[t][v] == vertex {
                    corners.push((t, v));
                }
            }
        }
        let tets: BTreeSet<usize> = corners.iter().map(|c| c.0).collect();
        if corners.len() != 4 || tets.len() != 4 {
            return Err(Error::InapplicableMove("vertex is not in exactly four distinct tetrahedra".into()));
        }
        let cls = self.classify_vertices();
        if cls.link_euler[vertex] != 2 {
            return Err(Error::InapplicableMove("vertex link is not a sphere".into()));
        }
        // Outer vertices are labeled by the edge class joining them to the vertex.
        let mut edge_classes = BTreeSet::new();
        let mut removed = Vec::new();
        let mut labels = Vec::new();
        for &(t, v) in &corners {
            let mut l = [0usize; 4];
            l[v] = usize::MAX;
            for w in 0..4 {
                if w != v {
                    let e = s.edge_of[t][edge_index(v, w)];
                    l[w] = e;
                    edge_classes.insert(e);
                }
            }
            removed.push(t);
            labels.push(l);
        }
        if edge_classes.len() != 4 {
            return Err(Error::InapplicableMove("vertex star is not an embedded ball".into()));
        }
        // Internal faces (containing the vertex) must be glued among the four tetrahedra.
        for &(t, v) in &corners {
            for f in 0..4 {
                if f != v && !tets.contains(&self.gluings[t][f].tet) {
                    return Err(Error::InapplicableMove("vertex star is not closed".into()));
                }
            }
        }
        let e: Vec<usize> = edge_classes.into_iter().collect();
        let new_tet = [e[0], e[1], e[2], e[3]];
        rebuild(self, &removed, &labels, &[new_tet])
    }
}

/// The four bistellar move kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    TwoThree,
    ThreeTwo,
    OneFour,
    FourOne,
}

impl Triangulation {
    /// All `(kind, target)` moves applicable to this triangulation; growing
    /// moves are omitted once the tetrahedron count reaches `max_tets`.
    pub fn applicable_moves(&self, max_tets: usize) -> Vec<(MoveKind, usize)> {
        let s = &self.skeleton;
        let mut out = Vec::new();
        let grow = self.num_tets() < max_tets;
        for face in 0..s.num_faces {
            if grow && self.pachner_23(face).is_ok() {
                out.push((MoveKind::TwoThree, face));
            }
        }
        for edge in 0..s.num_edges {
            if s.edge_degree[edge] == 3 && self.pachner_32(edge).is_ok() {
                out.push((MoveKind::ThreeTwo, edge));
            }
        }
        if grow {
            for t in 0..self.num_tets() {
                out.push((MoveKind::OneFour, t));
            }
        }
        for v in 0..s.num_vertices {
            if self.pachner_41(v).is_ok() {
                out.push((MoveKind::FourOne, v));
            }
        }
        out
    }

    /// Applies one move.
    pub fn apply_move(&self, kind: MoveKind, target: usize) -> Result<Triangulation> {
        match kind {
            MoveKind::TwoThree => self.pachner_23(target),
            MoveKind::ThreeTwo => self.pachner_32(target),
            MoveKind::OneFour => self.pachner_14(target),
            MoveKind::FourOne => self.pachner_41(target),
        }
    }

    /// Applies `steps` uniformly random applicable moves, first choosing a move
    /// kind uniformly among those available.
    pub fn random_moves<R: rand::Rng>(&self, rng: &mut R, steps: usize, max_tets: usize) -> Triangulation {
        let mut cur = self.clone();
        for _ in 0..steps {
            let moves = cur.applicable_moves(max_tets);
            let mut kinds: Vec<MoveKind> = moves.iter().map(|m| m.0).collect();
            kinds.dedup();
            let kinds: Vec<MoveKind> = [MoveKind::TwoThree, MoveKind::ThreeTwo, MoveKind::OneFour, MoveKind::FourOne]
                .into_iter()
                .filter(|k| kinds.contains(k))
                .collect();
            if kinds.is_empty() {
                break;
            }
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let of_kind: Vec<usize> = moves.iter().filter(|m| m.0 == kind).map(|m| m.1).collect();
            let target = of_kind[rng.gen_range(0..of_kind.len())];
            cur = cur.apply_move(kind, target).expect("listed moves apply");
        }
        cur
    }
}
