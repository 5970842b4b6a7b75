//! The tube algebra `⊕_{i,g,j} hom(X_i ⊗ X_g, X_g ⊗ X_j)`.
//!
//! A basis label `(i, g, j, k, α, β)` stands for `s^{gj}_{k,β} ∘ f^{ig}_{k,α}`.
//! The product of `x ∈ (i, g, j)` and `y ∈ (j, h, l)` stacks the two tubes and
//! fuses the two winding strands:
//! `x·y = Σ_{p,γ} (f^{gh}_{p,γ} ⊗ id_l)(id_g ⊗ y)(x ⊗ id_h)(id_i ⊗ s^{gh}_{p,γ})`.

use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::error::{Error, Result};
use crate::fusion::FusionCategory;
use crate::linalg::{re, Mat, C64};
use crate::morphism::{compose_all, Morphism};

/// One canonical tube basis vector `s^{gj}_{k,β} ∘ f^{ig}_{k,α}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TubeLabel {
    pub i: usize,
    pub g: usize,
    pub j: usize,
    pub k: usize,
    pub alpha: usize,
    pub beta: usize,
}

/// The ordered canonical basis of the tube algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeBasis {
    labels: Vec<TubeLabel>,
}

impl TubeBasis {
    /// Enumerates labels in lexicographic order of `(i, g, j, k, α, β)`.
    pub fn new(cat: &FusionCategory) -> TubeBasis {
        let r = cat.rank();
        let mut labels = Vec::new();
        for i in 0..r {
            for g in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        for alpha in 0..cat.n(i, g, k) {
                            for beta in 0..cat.n(g, j, k) {
                                labels.push(TubeLabel { i, g, j, k, alpha, beta });
                            }
                        }
                    }
                }
            }
        }
        TubeBasis { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[TubeLabel] {
        &self.labels
    }

    pub fn label(&self, n: usize) -> TubeLabel {
        self.labels[n]
    }

    /// Position of a label, if present.
    pub fn index(&self, l: &TubeLabel) -> Option<usize> {
        self.labels.binary_search(l).ok()
    }

    /// Positions of all labels of the sector `(i, g, j)`.
    pub fn sector(&self, i: usize, g: usize, j: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&n| {
            let l = self.labels[n];
            l.i == i && l.g == g && l.j == j
        }).collect()
    }
}

/// Canonical basis of a category's tube algebra.
pub fn tube_basis(cat: &FusionCategory) -> TubeBasis {
    TubeBasis::new(cat)
}

/// A coefficient vector over a [`TubeBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct TubeElement {
    pub coeffs: Vec<C64>,
}

impl TubeElement {
    pub fn zero(n: usize) -> TubeElement {
        TubeElement { coeffs: vec![re(0.0); n] }
    }

    /// The `n`-th basis vector of a basis of size `len`.
    pub fn basis_vector(len: usize, n: usize) -> TubeElement {
        let mut e = TubeElement::zero(len);
        e.coeffs[n] = re(1.0);
        e
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TubeElement) -> TubeElement {
        TubeElement { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &TubeElement) -> TubeElement {
        TubeElement { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: C64) -> TubeElement {
        TubeElement { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &TubeElement) -> f64 {
        self.sub(other).max_abs()
    }

    /// The coefficients as a column vector.
    pub fn to_column(&self) -> Mat {
        Mat::from_column_slice(self.coeffs.len(), 1, &self.coeffs)
    }

    /// An element from a column vector.
    pub fn from_column(m: &Mat) -> TubeElement {
        TubeElement { coeffs: m.iter().copied().collect() }
    }
}

/// The tube algebra with precomputed structure constants.
#[derive(Clone, Debug)]
pub struct TubeAlgebra {
    cat: FusionCategory,
    basis: TubeBasis,
    /// `table[a * n + b]` lists the nonzero coefficients of `t_a · t_b`.
    table: Vec<Vec<(usize, C64)>>,
}

impl TubeAlgebra {
    /// Builds the algebra by composing basis tubes in the morphism calculus.
    pub fn new(cat: &FusionCategory) -> Result<TubeAlgebra> {
        let basis = TubeBasis::new(cat);
        let n = basis.len();
        let r = cat.rank();
        let mut table = vec![Vec::new(); n * n];
        let morphs: Vec<Morphism> = basis.labels().iter().map(|l| label_morphism(cat, l)).collect();
        let tol = 1e-14;
        for (a, la) in basis.labels().iter().enumerate() {
            for (b, lb) in basis.labels().iter().enumerate() {
                if la.j != lb.i {
                    continue;
                }
                let (i, g, h, l) = (la.i, la.g, lb.g, lb.j);
                let x = morphs[a].whisker(cat, &[], &[h]);
                let y = morphs[b].whisker(cat, &[g], &[]);
                let mut acc: Vec<(usize, C64)> = Vec::new();
                for p in 0..r {
                    for gamma in 0..cat.n(g, h, p) {
                        let s = Morphism::split(cat, g, h, p, gamma).whisker(cat, &[i], &[]);
                        let f = Morphism::fuse(cat, g, h, p, gamma).whisker(cat, &[], &[l]);
                        let prod = compose_all(&[f, y.clone(), x.clone(), s])?;
                        for (c, v) in read_sector(cat, &basis, &prod, i, p, l) {
                            if v.norm() > tol {
                                acc.push((c, v));
                            }
                        }
                    }
                }
                acc.sort_by_key(|&(c, _)| c);
                table[a * n + b] = acc;
            }
        }
        Ok(TubeAlgebra { cat: cat.clone(), basis, table })
    }

    pub fn category(&self) -> &FusionCategory {
        &self.cat
    }

    pub fn basis(&self) -> &TubeBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Nonzero structure constants of `t_a · t_b`.
    pub fn structure_constants(&self, a: usize, b: usize) -> &[(usize, C64)] {
        &self.table[a * self.dim() + b]
    }

    pub fn zero(&self) -> TubeElement {
        TubeElement::zero(self.dim())
    }

    /// The basis vector for `label`.
    pub fn element(&self, label: &TubeLabel) -> Result<TubeElement> {
        let n = self.basis.index(label).ok_or_else(|| Error::Index(format!("no tube label {label:?}")))?;
        Ok(TubeElement::basis_vector(self.dim(), n))
    }

    fn check(&self, x: &TubeElement) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Mismatch(format!("tube element of length {} for a basis of size {}", x.len(), self.dim())));
        }
        Ok(())
    }

    /// The product `x · y`.
    pub fn multiply(&self, x: &TubeElement, y: &TubeElement) -> Result<TubeElement> {
        self.check(x)?;
        self.check(y)?;
        let n = self.dim();
        let mut out = TubeElement::zero(n);
        for (a, xa) in x.coeffs.iter().enumerate() {
            if xa.norm() == 0.0 {
                continue;
            }
            for (b, yb) in y.coeffs.iter().enumerate() {
                if yb.norm() == 0.0 {
                    continue;
                }
                let w = xa * yb;
                for &(c, v) in &self.table[a * n + b] {
                    out.coeffs[c] += w * v;
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `y ↦ x · y`.
    pub fn left_matrix(&self, x: &TubeElement) -> Result<Mat> {
        self.check(x)?;
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for (a, xa) in x.coeffs.iter().enumerate() {
            if xa.norm() == 0.0 {
                continue;
            }
            for b in 0..n {
                for &(c, v) in &self.table[a * n + b] {
                    m[(c, b)] += xa * v;
                }
            }
        }
        Ok(m)
    }

    /// Matrix of `y ↦ y · x`.
    pub fn right_matrix(&self, x: &TubeElement) -> Result<Mat> {
        self.check(x)?;
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for (b, xb) in x.coeffs.iter().enumerate() {
            if xb.norm() == 0.0 {
                continue;
            }
            for a in 0..n {
                for &(c, v) in &self.table[a * n + b] {
                    m[(c, a)] += xb * v;
                }
            }
        }
        Ok(m)
    }

    /// The unit of the corner `i`, the identity tube on `X_i`.
    pub fn corner_unit(&self, i: usize) -> TubeElement {
        let l = TubeLabel { i, g: 0, j: i, k: i, alpha: 0, beta: 0 };
        let n = self.basis.index(&l).expect("identity tube label");
        TubeElement::basis_vector(self.dim(), n)
    }

    /// The unit `Σ_i t(i, 0, i, i)`.
    pub fn identity(&self) -> TubeElement {
        let mut e = self.zero();
        for i in 0..self.cat.rank() {
            e = e.add(&self.corner_unit(i));
        }
        e
    }

    /// The trace `μ Σ_i d_i² x(i, 0, i, i)`.
    ///
    /// This is the closure of the tube with the through-strand colored by
    /// `Σ_i d_i X_i`, so a minimal central idempotent has trace `d(X)²` for its
    /// center object `X`. It is cyclic on each corner `e_i · Tube · e_i`; across
    /// corners `d_j trace(x·y) = d_i trace(y·x)` for `x ∈ (i,·,j)`, `y ∈ (j,·,i)`.
    pub fn trace(&self, x: &TubeElement) -> Result<C64> {
        self.check(x)?;
        let mut t = re(0.0);
        for i in 0..self.cat.rank() {
            let l = TubeLabel { i, g: 0, j: i, k: i, alpha: 0, beta: 0 };
            let n = self.basis.index(&l).expect("identity tube label");
            let d = self.cat.qdim(i);
            t += d * d * x.coeffs[n];
        }
        Ok(self.cat.mu() * t)
    }

    /// Gram matrix `G[a][b] = trace(t_a · t_b)`.
    pub fn gram_matrix(&self) -> Mat {
        let n = self.dim();
        let mut w = vec![re(0.0); n];
        for i in 0..self.cat.rank() {
            let l = TubeLabel { i, g: 0, j: i, k: i, alpha: 0, beta: 0 };
            let d = self.cat.qdim(i);
            w[self.basis.index(&l).expect("identity tube label")] = self.cat.mu() * d * d;
        }
        Mat::from_fn(n, n, |a, b| self.table[a * n + b].iter().map(|&(c, v)| w[c] * v).sum())
    }

    /// The morphism `X_i ⊗ X_g → X_g ⊗ X_j` of the `(i, g, j)` component of `x`.
    pub fn to_morphism(&self, x: &TubeElement, i: usize, g: usize, j: usize) -> Morphism {
        let mut m = Morphism::zero(&self.cat, &[i, g], &[g, j]);
        for (n, l) in self.basis.labels().iter().enumerate() {
            if l.i == i && l.g == g && l.j == j {
                m.blocks[l.k][(l.beta, l.alpha)] += x.coeffs[n];
            }
        }
        m
    }

    /// Re-expands a morphism `X_i ⊗ X_g → X_g ⊗ X_j` in the tube basis.
    pub fn from_morphism(&self, m: &Morphism) -> Result<TubeElement> {
        if m.domain.len() != 2 || m.codomain.len() != 2 || m.domain[1] != m.codomain[0] {
            return Err(Error::Mismatch(format!("{:?} → {:?} is not a tube morphism", m.domain, m.codomain)));
        }
        let mut e = self.zero();
        for (n, v) in read_sector(&self.cat, &self.basis, m, m.domain[0], m.domain[1], m.codomain[1]) {
            e.coeffs[n] = v;
        }
        Ok(e)
    }
}

/// `s^{gj}_{k,β} ∘ f^{ig}_{k,α}` as a morphism.
fn label_morphism(cat: &FusionCategory, l: &TubeLabel) -> Morphism {
    Morphism::basis_element(cat, &[l.i, l.g], &[l.g, l.j], l.k, l.beta, l.alpha)
}

/// Coefficients of a morphism `[i, g] → [g, j]` on the basis of sector `(i, g, j)`.
fn read_sector(cat: &FusionCategory, basis: &TubeBasis, m: &Morphism, i: usize, g: usize, j: usize) -> Vec<(usize, C64)> {
    let mut out = Vec::new();
    for k in 0..cat.rank() {
        for alpha in 0..cat.n(i, g, k) {
            for beta in 0..cat.n(g, j, k) {
                let l = TubeLabel { i, g, j, k, alpha, beta };
                let n = basis.index(&l).expect("sector label");
                out.push((n, m.blocks[k][(beta, alpha)]));
            }
        }
    }
    out
}

/// `x · y` in `alg`.
pub fn tube_multiply(alg: &TubeAlgebra, x: &TubeElement, y: &TubeElement) -> Result<TubeElement> {
    alg.multiply(x, y)
}

/// The trace functional of `alg`.
pub fn tube_trace(alg: &TubeAlgebra, x: &TubeElement) -> Result<C64> {
    alg.trace(x)
}
