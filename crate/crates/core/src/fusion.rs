//! Spherical fusion category data: fusion rules, F-symbols, dimensions and
//! optional R-symbols, together with consistency verification.
//!
//! F-symbols follow the splitting-space convention
//! `(s^{ab}_{e,α} ⊗ id_c) ∘ s^{ec}_{d,β} = Σ F^{abc}_d[(e,α,β),(f,γ,δ)] (id_a ⊗ s^{bc}_{f,γ}) ∘ s^{af}_{d,δ}`
//! where `s^{ab}_{e,α}: X_e → X_a ⊗ X_b` are splitting vertices and the
//! matching fusion vertices `f^{ab}_{e,α}` satisfy `f ∘ s = id`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{inverse, re, Mat, C64};

/// Default comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Index of an F-symbol entry `F^{abc}_d[(e,α,β),(f,γ,δ)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FKey {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
    pub alpha: usize,
    pub beta: usize,
    pub f: usize,
    pub gamma: usize,
    pub delta: usize,
}

/// Index of an R-symbol entry `R^{ab}_c[μ,ν]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RKey {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub mu: usize,
    pub nu: usize,
}

/// Raw declarations from which a [`FusionCategory`] is assembled.
#[derive(Clone, Debug, Default)]
pub struct CategoryData {
    pub rank: usize,
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    /// Flattened `N[i][j][k]` at `(i * rank + j) * rank + k`.
    pub fusion: Vec<u32>,
    pub f_symbols: BTreeMap<FKey, C64>,
    pub qdim: Option<Vec<C64>>,
    pub r_symbols: Option<BTreeMap<RKey, C64>>,
    pub tol: Option<f64>,
}

impl CategoryData {
    /// Empty declarations for `rank` simples with default labels and no fusion.
    pub fn new(rank: usize) -> Self {
        CategoryData {
            rank,
            labels: (0..rank).map(|i| format!("{i}")).collect(),
            dual: (0..rank).collect(),
            fusion: vec![0; rank * rank * rank],
            ..Default::default()
        }
    }

    /// Sets the multiplicity of `X_k` in `X_i ⊗ X_j`.
    pub fn set_fusion(&mut self, i: usize, j: usize, k: usize, m: u32) {
        let r = self.rank;
        self.fusion[(i * r + j) * r + k] = m;
    }

    /// Multiplicity of `X_k` in `X_i ⊗ X_j`.
    pub fn fusion_at(&self, i: usize, j: usize, k: usize) -> u32 {
        let r = self.rank;
        self.fusion[(i * r + j) * r + k]
    }
}

/// One F-matrix `F^{abc}_d` with its row and column labels.
#[derive(Clone, Debug)]
pub struct FBlock {
    /// Row labels `(e, α, β)`.
    pub rows: Vec<(usize, usize, usize)>,
    /// Column labels `(f, γ, δ)`.
    pub cols: Vec<(usize, usize, usize)>,
    pub mat: Mat,
    /// Inverse matrix, `None` when the block is singular or not square.
    pub inv: Option<Mat>,
}

impl FBlock {
    pub fn row_index(&self, e: usize, alpha: usize, beta: usize) -> Option<usize> {
        self.rows.iter().position(|&x| x == (e, alpha, beta))
    }

    pub fn col_index(&self, f: usize, gamma: usize, delta: usize) -> Option<usize> {
        self.cols.iter().position(|&x| x == (f, gamma, delta))
    }
}

/// A spherical fusion category given by its skeletal data.
#[derive(Clone, Debug)]
pub struct FusionCategory {
    rank: usize,
    labels: Vec<String>,
    dual: Vec<usize>,
    fusion: Vec<u32>,
    f_symbols: BTreeMap<FKey, C64>,
    qdim: Vec<C64>,
    global_dim: C64,
    r_symbols: Option<BTreeMap<RKey, C64>>,
    tol: f64,
    blocks: Vec<Option<FBlock>>,
}

/// Equality of the declared data; the derived F-blocks follow from it.
impl PartialEq for FusionCategory {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.labels == other.labels
            && self.dual == other.dual
            && self.fusion == other.fusion
            && self.f_symbols == other.f_symbols
            && self.qdim == other.qdim
            && self.global_dim == other.global_dim
            && self.r_symbols == other.r_symbols
            && self.tol == other.tol
    }
}

/// Outcome of [`FusionCategory::verify`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub pentagon_residual: f64,
    pub unit_duality_ok: bool,
    pub dim_defect: f64,
    pub f_invertible: bool,
    pub hexagon_residual: Option<f64>,
    pub pass: bool,
}

impl FusionCategory {
    /// Assembles a category from declarations, completing unit-leg F-symbols,
    /// deriving dimensions when absent and checking unit and duality rules.
    pub fn new(data: CategoryData) -> Result<Self> {
        let r = data.rank;
        if r == 0 {
            return Err(Error::InvalidParams("rank must be positive".into()));
        }
        if data.labels.len() != r || data.dual.len() != r || data.fusion.len() != r * r * r {
            return Err(Error::Inconsistent("field lengths do not match rank".into()));
        }
        for (i, &d) in data.dual.iter().enumerate() {
            if d >= r {
                return Err(Error::Index(format!("dual({i}) = {d}")));
            }
            if data.dual[d] != i {
                return Err(Error::Inconsistent(format!("dual is not an involution at {i}")));
            }
        }
        if data.dual[0] != 0 {
            return Err(Error::Inconsistent("dual(0) must be 0".into()));
        }
        for i in 0..r {
            for j in 0..r {
                let want = u32::from(i == j);
                if data.fusion_at(0, i, j) != want || data.fusion_at(i, 0, j) != want {
                    return Err(Error::Inconsistent(format!(
                        "unit constraint violated: N[0][{i}][{j}] or N[{i}][0][{j}]"
                    )));
                }
                if data.fusion_at(i, j, 0) != u32::from(j == data.dual[i]) {
                    return Err(Error::Inconsistent(format!(
                        "duality constraint violated: N[{i}][{j}][0]"
                    )));
                }
            }
        }
        let mut f_symbols = data.f_symbols;
        for key in f_symbols.keys() {
            let ks = [key.a, key.b, key.c, key.d, key.e, key.f];
            if ks.iter().any(|&x| x >= r) {
                return Err(Error::Index(format!("F-symbol label out of range: {key:?}")));
            }
        }
        let mut cat = FusionCategory {
            rank: r,
            labels: data.labels,
            dual: data.dual,
            fusion: data.fusion,
            f_symbols: BTreeMap::new(),
            qdim: Vec::new(),
            global_dim: re(0.0),
            r_symbols: data.r_symbols,
            tol: data.tol.unwrap_or(DEFAULT_TOL),
            blocks: Vec::new(),
        };
        // Unit-leg entries default to the canonical identification.
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    if a != 0 && b != 0 && c != 0 {
                        continue;
                    }
                    for d in 0..r {
                        for (e, alpha, beta) in cat.left_labels(a, b, c, d) {
                            for (f, gamma, delta) in cat.right_labels(a, b, c, d) {
                                let value = if a == 0 {
                                    beta == gamma
                                } else if b == 0 {
                                    beta == delta
                                } else {
                                    alpha == delta
                                };
                                let key = FKey { a, b, c, d, e, alpha, beta, f, gamma, delta };
                                if value {
                                    f_symbols.entry(key).or_insert(re(1.0));
                                }
                            }
                        }
                    }
                }
            }
        }
        for key in f_symbols.keys() {
            let ok = key.alpha < cat.n(key.a, key.b, key.e)
                && key.beta < cat.n(key.e, key.c, key.d)
                && key.gamma < cat.n(key.b, key.c, key.f)
                && key.delta < cat.n(key.a, key.f, key.d);
            if !ok {
                return Err(Error::Inconsistent(format!("F-symbol on a forbidden channel: {key:?}")));
            }
        }
        cat.f_symbols = f_symbols;
        cat.blocks = cat.build_blocks();
        cat.qdim = match data.qdim {
            Some(q) => {
                if q.len() != r {
                    return Err(Error::Inconsistent("qdim length does not match rank".into()));
                }
                q
            }
            None => (0..r)
                .map(|a| {
                    let f1 = cat.f_first(a);
                    if f1.norm() == 0.0 {
                        Err(Error::Inconsistent(format!("F^{{a a* a}}_a[0,0] vanishes for {a}")))
                    } else {
                        Ok(re(1.0 / f1.norm()))
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        };
        cat.global_dim = cat.qdim.iter().map(|d| d * d).sum();
        Ok(cat)
    }

    fn build_blocks(&self) -> Vec<Option<FBlock>> {
        let r = self.rank;
        let mut blocks = Vec::with_capacity(r * r * r * r);
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        let rows = self.left_labels(a, b, c, d);
                        let cols = self.right_labels(a, b, c, d);
                        if rows.is_empty() && cols.is_empty() {
                            blocks.push(None);
                            continue;
                        }
                        let mut mat = Mat::zeros(rows.len(), cols.len());
                        for (i, &(e, alpha, beta)) in rows.iter().enumerate() {
                            for (j, &(f, gamma, delta)) in cols.iter().enumerate() {
                                let key = FKey { a, b, c, d, e, alpha, beta, f, gamma, delta };
                                if let Some(v) = self.f_symbols.get(&key) {
                                    mat[(i, j)] = *v;
                                }
                            }
                        }
                        let inv = if rows.len() == cols.len() {
                            inverse(&mat)
                        } else {
                            None
                        };
                        blocks.push(Some(FBlock { rows, cols, mat, inv }));
                    }
                }
            }
        }
        blocks
    }

    /// Labels `(e, α, β)` of the left-nested basis of `hom(d, (a⊗b)⊗c)`.
    pub fn left_labels(&self, a: usize, b: usize, c: usize, d: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for e in 0..self.rank {
            for alpha in 0..self.n(a, b, e) {
                for beta in 0..self.n(e, c, d) {
                    out.push((e, alpha, beta));
                }
            }
        }
        out
    }

    /// Labels `(f, γ, δ)` of the right-nested basis of `hom(d, a⊗(b⊗c))`.
    pub fn right_labels(&self, a: usize, b: usize, c: usize, d: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for f in 0..self.rank {
            for gamma in 0..self.n(b, c, f) {
                for delta in 0..self.n(a, f, d) {
                    out.push((f, gamma, delta));
                }
            }
        }
        out
    }

    /// Number of simple objects.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Index of the dual simple.
    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    /// Fusion multiplicity `N_{ij}^k`.
    pub fn n(&self, i: usize, j: usize, k: usize) -> usize {
        let r = self.rank;
        self.fusion[(i * r + j) * r + k] as usize
    }

    /// Flattened fusion table.
    pub fn fusion_table(&self) -> &[u32] {
        &self.fusion
    }

    /// Quantum dimension `d_i`.
    pub fn qdim(&self, i: usize) -> C64 {
        self.qdim[i]
    }

    pub fn qdims(&self) -> &[C64] {
        &self.qdim
    }

    /// Global dimension `μ = Σ d_i²`.
    pub fn mu(&self) -> C64 {
        self.global_dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Returns a copy with a different comparison tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// All stored F-symbol entries, including completed unit-leg entries.
    pub fn f_symbols(&self) -> &BTreeMap<FKey, C64> {
        &self.f_symbols
    }

    pub fn r_symbols(&self) -> Option<&BTreeMap<RKey, C64>> {
        self.r_symbols.as_ref()
    }

    /// Whether every fusion multiplicity is at most one.
    pub fn is_multiplicity_free(&self) -> bool {
        self.fusion.iter().all(|&m| m <= 1)
    }

    /// The F-matrix `F^{abc}_d`, if any channel exists.
    pub fn f_block(&self, a: usize, b: usize, c: usize, d: usize) -> Option<&FBlock> {
        let r = self.rank;
        self.blocks[((a * r + b) * r + c) * r + d].as_ref()
    }

    /// A single F-symbol entry, zero when the labels are not admissible.
    pub fn f(&self, key: &FKey) -> C64 {
        self.f_block(key.a, key.b, key.c, key.d)
            .and_then(|blk| {
                let i = blk.row_index(key.e, key.alpha, key.beta)?;
                let j = blk.col_index(key.f, key.gamma, key.delta)?;
                Some(blk.mat[(i, j)])
            })
            .unwrap_or(re(0.0))
    }

    /// A single entry of the inverse F-matrix, `(F^{abc}_d)^{-1}[(f,γ,δ),(e,α,β)]`.
    pub fn f_inv(&self, key: &FKey) -> C64 {
        self.f_block(key.a, key.b, key.c, key.d)
            .and_then(|blk| {
                let i = blk.row_index(key.e, key.alpha, key.beta)?;
                let j = blk.col_index(key.f, key.gamma, key.delta)?;
                Some(blk.inv.as_ref()?[(j, i)])
            })
            .unwrap_or(re(0.0))
    }

    /// Multiplicity-free shorthand `F^{abc}_d[e,f]`.
    pub fn f_mf(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> C64 {
        self.f(&FKey { a, b, c, d, e, alpha: 0, beta: 0, f, gamma: 0, delta: 0 })
    }

    /// Multiplicity-free shorthand `(F^{abc}_d)^{-1}[f,e]`.
    pub fn f_inv_mf(&self, a: usize, b: usize, c: usize, d: usize, f: usize, e: usize) -> C64 {
        self.f_inv(&FKey { a, b, c, d, e, alpha: 0, beta: 0, f, gamma: 0, delta: 0 })
    }

    /// `F^{a a* a}_a[0,0]`, the coefficient fixing the cup/cap normalization.
    pub fn f_first(&self, a: usize) -> C64 {
        let ad = self.dual[a];
        self.f_mf(a, ad, a, a, 0, 0)
    }

    /// Frobenius-Schur sign `d_a F^{a a* a}_a[0,0]` (±1 for self-dual simples).
    pub fn fs_sign(&self, a: usize) -> C64 {
        self.qdim[a] * self.f_first(a)
    }

    /// R-symbol `R^{ab}_c[μ,ν]`, if R data is present.
    pub fn r(&self, a: usize, b: usize, c: usize, mu: usize, nu: usize) -> Option<C64> {
        let rs = self.r_symbols.as_ref()?;
        Some(rs.get(&RKey { a, b, c, mu, nu }).copied().unwrap_or(re(0.0)))
    }

    /// Copy of this category with one F-symbol replaced (used to probe verification).
    pub fn with_f_symbol(&self, key: FKey, value: C64) -> Result<Self> {
        let mut data = self.to_data();
        data.f_symbols.insert(key, value);
        FusionCategory::new(data)
    }

    /// The declarations that reproduce this category.
    pub fn to_data(&self) -> CategoryData {
        CategoryData {
            rank: self.rank,
            labels: self.labels.clone(),
            dual: self.dual.clone(),
            fusion: self.fusion.clone(),
            f_symbols: self.f_symbols.clone(),
            qdim: Some(self.qdim.clone()),
            r_symbols: self.r_symbols.clone(),
            tol: Some(self.tol),
        }
    }

    /// Maximum absolute pentagon defect over all instances.
    pub fn pentagon_residual(&self) -> f64 {
        let r = self.rank;
        let mut worst = 0.0f64;
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        for y in 0..r {
                            worst = worst.max(self.pentagon_at(a, b, c, d, y));
                        }
                    }
                }
            }
        }
        worst
    }

    fn pentagon_at(&self, a: usize, b: usize, c: usize, d: usize, y: usize) -> f64 {
        let r = self.rank;
        let fget = |a, b, c, d, e, alpha, beta, f, gamma, delta| {
            self.f(&FKey { a, b, c, d, e, alpha, beta, f, gamma, delta })
        };
        let mut worst = 0.0f64;
        // Left tree ((ab)c)d → y: w ∈ ab (ι), x ∈ wc (κ), y ∈ xd (λ).
        for w in 0..r {
            for iota in 0..self.n(a, b, w) {
                for x in 0..r {
                    for kappa in 0..self.n(w, c, x) {
                        for lambda in 0..self.n(x, d, y) {
                            // Right tree a(b(cd)) → y: z ∈ cd (μ), v ∈ bz (ρ), y ∈ av (σ).
                            for z in 0..r {
                                for mu in 0..self.n(c, d, z) {
                                    for v in 0..r {
                                        for rho in 0..self.n(b, z, v) {
                                            for sigma in 0..self.n(a, v, y) {
                                                let mut lhs = re(0.0);
                                                for nu in 0..self.n(w, z, y) {
                                                    lhs += fget(w, c, d, y, x, kappa, lambda, z, mu, nu)
                                                        * fget(a, b, z, y, w, iota, nu, v, rho, sigma);
                                                }
                                                let mut rhs = re(0.0);
                                                for u in 0..r {
                                                    for tau in 0..self.n(b, c, u) {
                                                        for pi in 0..self.n(a, u, x) {
                                                            let f1 = fget(a, b, c, x, w, iota, kappa, u, tau, pi);
                                                            if f1 == re(0.0) {
                                                                continue;
                                                            }
                                                            for omega in 0..self.n(u, d, v) {
                                                                rhs += f1
                                                                    * fget(a, u, d, y, x, pi, lambda, v, omega, sigma)
                                                                    * fget(b, c, d, v, u, tau, omega, z, mu, rho);
                                                            }
                                                        }
                                                    }
                                                }
                                                worst = worst.max((lhs - rhs).norm());
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Maximum hexagon defect (both hexagons) for multiplicity-free braided data.
    pub fn hexagon_residual(&self) -> Option<f64> {
        self.r_symbols.as_ref()?;
        if !self.is_multiplicity_free() {
            return None;
        }
        let r = self.rank;
        let rr = |a, b, c| self.r(a, b, c, 0, 0).unwrap_or(re(0.0));
        let mut worst = 0.0f64;
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        for e in 0..r {
                            for g in 0..r {
                                if self.n(c, a, e) == 0 || self.n(e, b, d) == 0 {
                                    continue;
                                }
                                if self.n(c, b, g) == 0 || self.n(a, g, d) == 0 {
                                    continue;
                                }
                                let lhs1 = rr(c, a, e) * self.f_mf(a, c, b, d, e, g) * rr(c, b, g);
                                let lhs2 = self.f_mf(a, c, b, d, e, g) / (rr(a, c, e) * rr(b, c, g));
                                let mut rhs1 = re(0.0);
                                let mut rhs2 = re(0.0);
                                for f in 0..r {
                                    if self.n(a, b, f) == 0 || self.n(f, c, d) == 0 {
                                        continue;
                                    }
                                    let l = self.f_mf(c, a, b, d, e, f);
                                    let rgt = self.f_mf(a, b, c, d, f, g);
                                    rhs1 += l * rr(c, f, d) * rgt;
                                    rhs2 += l * rgt / rr(f, c, d);
                                }
                                worst = worst.max((lhs1 - rhs1).norm()).max((lhs2 - rhs2).norm());
                            }
                        }
                    }
                }
            }
        }
        Some(worst)
    }

    /// Whether unit, duality and dimension-level sphericality constraints hold.
    pub fn unit_duality_ok(&self) -> bool {
        let r = self.rank;
        if self.dual[0] != 0 {
            return false;
        }
        for i in 0..r {
            if self.dual[self.dual[i]] != i || (self.qdim[i] - self.qdim[self.dual[i]]).norm() > 0.0 {
                return false;
            }
            for j in 0..r {
                if self.n(0, i, j) != usize::from(i == j) || self.n(i, j, 0) != usize::from(j == self.dual[i]) {
                    return false;
                }
            }
        }
        true
    }

    /// Runs every consistency check and reports the defects.
    pub fn verify(&self) -> VerificationReport {
        let pentagon_residual = self.pentagon_residual();
        let unit_duality_ok = self.unit_duality_ok();
        let dim_sum: C64 = self.qdim.iter().map(|d| d * d).sum();
        let dim_defect = (dim_sum - self.global_dim).norm();
        let f_invertible = self.blocks.iter().flatten().all(|b| b.inv.is_some());
        let hexagon_residual = self.hexagon_residual();
        let tol = self.tol;
        let pass = pentagon_residual < tol
            && unit_duality_ok
            && dim_defect < tol
            && f_invertible
            && hexagon_residual.is_none_or(|h| h < tol);
        VerificationReport { pentagon_residual, unit_duality_ok, dim_defect, f_invertible, hexagon_residual, pass }
    }
}

/// Free-function form of [`FusionCategory::verify`].
pub fn verify_category(cat: &FusionCategory) -> VerificationReport {
    cat.verify()
}
