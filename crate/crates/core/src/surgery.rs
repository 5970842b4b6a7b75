//! Surgery invariants of plumbed 3-manifolds from center modular data.
//!
//! A plumbing forest of framed unknots, each edge a Hopf clasp, is evaluated as
//! `μ^{−|L|−1} Σ_a Π_v d_{a_v}^{2−deg v} θ_{a_v}^{f_v} Π_{(u,v)} S̃_{a_u a_v}`,
//! where `μ² = Σ_A d_A²`. The sum over colorings is contracted along the trees.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;


use crate::census::census;
use crate::center::ModularData;
use crate::error::{Error, Result};
use crate::fusion::FusionCategory;
use crate::linalg::{re, C64};
use crate::state_sum::{tv_invariant, StateSumConfig};

/// A forest of framed unknots clasped along its edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlumbingGraph {
    framings: Vec<i64>,
    edges: Vec<(usize, usize)>,
}

impl PlumbingGraph {
    /// The empty graph, surgery on which leaves `S³`.
    pub fn empty() -> PlumbingGraph {
        PlumbingGraph::default()
    }

    /// Validates that the edges form a forest on the given vertices.
    pub fn new(framings: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<PlumbingGraph> {
        let n = framings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::Index(format!("edge ({u}, {v}) on {n} vertices")));
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(Error::InvalidParams(format!("edge ({u}, {v}) closes a cycle")));
            }
            parent[a] = b;
        }
        Ok(PlumbingGraph { framings, edges })
    }

    /// A linear chain with the given framings.
    pub fn chain(framings: &[i64]) -> PlumbingGraph {
        let edges = (1..framings.len()).map(|v| (v - 1, v)).collect();
        PlumbingGraph { framings: framings.to_vec(), edges }
    }

    pub fn framings(&self) -> &[i64] {
        &self.framings
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.framings.len()
    }

    /// The same graph with every framing negated (orientation reversal).
    pub fn mirror(&self) -> PlumbingGraph {
        PlumbingGraph { framings: self.framings.iter().map(|f| -f).collect(), edges: self.edges.clone() }
    }

    /// Disjoint union, presenting the connected sum.
    pub fn disjoint_union(&self, other: &PlumbingGraph) -> PlumbingGraph {
        let n = self.framings.len();
        let mut framings = self.framings.clone();
        framings.extend_from_slice(&other.framings);
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + n, v + n)));
        PlumbingGraph { framings, edges }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.framings.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }
}

fn int_pow(z: C64, e: i64) -> C64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        (re(1.0) / z).powu((-e) as u32)
    }
}

/// Surgery invariant of the plumbed manifold, normalized so that `S³` gives `μ⁻¹`.
pub fn rt_plumbing(md: &ModularData, g: &PlumbingGraph) -> Result<C64> {
    md.check(1e-7)?;
    let n = md.rank_z;
    let mu = md.mu_z.sqrt();
    let adj = g.adjacency();
    let nv = g.num_vertices();
    let weight = |v: usize, a: usize| -> C64 {
        let deg = adj[v].len() as i64;
        int_pow(md.dims[a], 2 - deg) * int_pow(md.twists[a], g.framings[v])
    };
    let mut seen = vec![false; nv];
    let mut total = re(1.0);
    for root in 0..nv {
        if seen[root] {
            continue;
        }
        // Depth-first order of this tree, children processed before parents.
        let mut order = Vec::new();
        let mut parent = vec![usize::MAX; nv];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut message: Vec<Vec<C64>> = vec![Vec::new(); nv];
        for &v in order.iter().rev() {
            let mut m: Vec<C64> = (0..n).map(|a| weight(v, a)).collect();
            for &w in &adj[v] {
                if parent[w] == v {
                    for (a, ma) in m.iter_mut().enumerate() {
                        let s: C64 = (0..n).map(|b| md.s_tilde[(a, b)] * message[w][b]).sum();
                        *ma *= s;
                    }
                }
            }
            message[v] = m;
        }
        total *= message[root].iter().sum::<C64>();
    }
    Ok(total * int_pow(mu, -(nv as i64) - 1))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Linear plumbing of `L(p, q)` from the continued fraction
/// `p/q = a₁ − 1/(a₂ − 1/(…))` with every `a_i ≥ 2`.
pub fn lens_space_plumbing(p: i64, q: i64) -> Result<PlumbingGraph> {
    if (p, q) == (1, 0) {
        return Ok(PlumbingGraph::empty());
    }
    if p < 1 || q <= 0 || q >= p || gcd(p, q) != 1 {
        return Err(Error::InvalidParams(format!("lens space needs coprime 0 < q < p, got ({p}, {q})")));
    }
    let (mut num, mut den) = (p, q);
    let mut framings = Vec::new();
    while den != 0 {
        let a = (num + den - 1) / den;
        framings.push(a);
        let rem = a * den - num;
        num = den;
        den = rem;
    }
    Ok(PlumbingGraph::chain(&framings))
}

/// Plumbing presentation registered for a census manifold.
pub fn census_plumbing(name: &str) -> Result<PlumbingGraph> {
    match name {
        "s3_2tet" | "s3_3tet" => Ok(PlumbingGraph::empty()),
        "rp3_2tet" => lens_space_plumbing(2, 1),
        "lens_3_1" => lens_space_plumbing(3, 1),
        "lens_4_1" => lens_space_plumbing(4, 3),
        "s2xs1" => Ok(PlumbingGraph::chain(&[0])),
        _ => Err(Error::UnknownName(format!("no plumbing registered for {name}"))),
    }
}

/// One manifold of a [`TvRtReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct TvRtEntry {
    pub name: String,
    pub tv: C64,
    pub rt: C64,
    pub defect: f64,
}

/// Comparison of state-sum and surgery invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct TvRtReport {
    pub entries: Vec<TvRtEntry>,
    pub pass: bool,
}

/// Compares the state sum on census triangulations with the surgery invariant
/// of their registered plumbings; passes iff every defect is below `1e-7`.
pub fn verify_tv_rt(cat: &FusionCategory, md: &ModularData, names: &[&str], cfg: &StateSumConfig) -> Result<TvRtReport> {
    let mut entries = Vec::new();
    for &name in names {
        let g = census_plumbing(name)?;
        let tri = census(name)?;
        let tv = tv_invariant(cat, &tri, cfg)?;
        let rt = rt_plumbing(md, &g)?;
        entries.push(TvRtEntry { name: name.to_string(), tv, rt, defect: (tv - rt).norm() });
    }
    let pass = entries.iter().all(|e| e.defect < 1e-7);
    Ok(TvRtReport { entries, pass })
}
