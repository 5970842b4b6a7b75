//! Coordinate-level planar graphical calculus.
//!
//! A morphism `w1 → w2` between tensor words of simples is stored blockwise:
//! for every simple `k` a matrix whose rows index the left-nested splitting
//! trees `k → w2` and whose columns index the left-nested trees `k → w1`.
//! The morphism is `Σ_k Σ_{r,c} M_k[r,c] S_r ∘ F_c` where `S_r: X_k → w2` are
//! splitting trees and `F_c: w1 → X_k` the dual fusion trees (`F_c ∘ S_r = δ`).

use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::error::{Error, Result};
use crate::fusion::{FKey, FusionCategory};
use crate::linalg::{max_abs, re, Mat, C64};

/// A tensor word of simple indices; the empty word is the tensor unit.
pub type Word = Vec<usize>;

/// A left-nested fusion tree: `(y_i, α_i)` for the letters after the first,
/// where `y_i` is the running total and `α_i` the vertex multiplicity index.
pub type Path = Vec<(usize, usize)>;

/// Left-nested trees of `w` grouped by root channel, each list sorted.
pub fn paths_by_channel(cat: &FusionCategory, w: &[usize]) -> Vec<Vec<Path>> {
    let r = cat.rank();
    let mut out = vec![Vec::new(); r];
    if w.is_empty() {
        out[0].push(Vec::new());
        return out;
    }
    let mut states: Vec<(usize, Path)> = vec![(w[0], Vec::new())];
    for &x in &w[1..] {
        let mut next = Vec::new();
        for (root, path) in &states {
            for y in 0..r {
                for alpha in 0..cat.n(*root, x, y) {
                    let mut p = path.clone();
                    p.push((y, alpha));
                    next.push((y, p));
                }
            }
        }
        states = next;
    }
    for (root, path) in states {
        out[root].push(path);
    }
    out
}

/// Root channel of a path over the nonempty word `w`.
fn root_of(w: &[usize], p: &Path) -> usize {
    p.last().map_or(w[0], |&(y, _)| y)
}

/// Dimension of `hom(a, b)`.
pub fn hom_dim(cat: &FusionCategory, a: &[usize], b: &[usize]) -> Result<usize> {
    check_word(cat, a)?;
    check_word(cat, b)?;
    let pa = paths_by_channel(cat, a);
    let pb = paths_by_channel(cat, b);
    Ok(pa.iter().zip(pb.iter()).map(|(x, y)| x.len() * y.len()).sum())
}

fn check_word(cat: &FusionCategory, w: &[usize]) -> Result<()> {
    match w.iter().find(|&&x| x >= cat.rank()) {
        Some(x) => Err(Error::Index(format!("letter {x} out of range"))),
        None => Ok(()),
    }
}

/// Label of a product-basis vector `(S_{r1} ⊗ S_{r2}) ∘ s^{k1 k2}_{k,α}`.
type ProductLabel = (usize, usize, usize, usize, usize);

fn product_labels(cat: &FusionCategory, pw: &[Vec<Path>], pv: &[Vec<Path>], k: usize) -> Vec<ProductLabel> {
    let r = cat.rank();
    let mut out = Vec::new();
    for k1 in 0..r {
        for i1 in 0..pw[k1].len() {
            for k2 in 0..r {
                for i2 in 0..pv[k2].len() {
                    for alpha in 0..cat.n(k1, k2, k) {
                        out.push((k1, i1, k2, i2, alpha));
                    }
                }
            }
        }
    }
    out
}

fn index_of(list: &[Path], p: &Path) -> usize {
    list.binary_search(p).expect("path present in its own basis")
}

/// Change of basis from product trees of `w ⊗ v` to left-nested trees of `w·v`.
///
/// With `dual = false` returns, per channel `k`, the matrix `U` with
/// `(S_{r1} ⊗ S_{r2}) s^{k1k2}_{k,α} = Σ_r U[r, P] S_r`.  With `dual = true`
/// returns `D` with `f^{k1k2}_{k,α} (F_{c1} ⊗ F_{c2}) = Σ_c D[P, c] F_c`.
fn product_change(cat: &FusionCategory, w: &[usize], v: &[usize], dual: bool) -> Vec<Mat> {
    let r = cat.rank();
    let pw = paths_by_channel(cat, w);
    let pv = paths_by_channel(cat, v);
    let wv: Word = w.iter().chain(v.iter()).copied().collect();
    let pwv = paths_by_channel(cat, &wv);
    let mut out = Vec::with_capacity(r);
    if w.is_empty() || v.is_empty() || v.len() == 1 {
        for k in 0..r {
            let labels = product_labels(cat, &pw, &pv, k);
            let n = pwv[k].len();
            let mut m = if dual { Mat::zeros(labels.len(), n) } else { Mat::zeros(n, labels.len()) };
            for (col, &(k1, i1, k2, i2, alpha)) in labels.iter().enumerate() {
                let row = if w.is_empty() {
                    i2
                } else if v.is_empty() {
                    i1
                } else {
                    let _ = k2;
                    let mut p = pw[k1][i1].clone();
                    p.push((k, alpha));
                    index_of(&pwv[k], &p)
                };
                if dual {
                    m[(col, row)] = re(1.0);
                } else {
                    m[(row, col)] = re(1.0);
                }
            }
            out.push(m);
        }
        return out;
    }
    let vp = &v[..v.len() - 1];
    let x = v[v.len() - 1];
    let prev = product_change(cat, w, vp, dual);
    let pvp = paths_by_channel(cat, vp);
    let wvp: Word = w.iter().chain(vp.iter()).copied().collect();
    let pwvp = paths_by_channel(cat, &wvp);
    for k in 0..r {
        let labels = product_labels(cat, &pw, &pv, k);
        let n = pwv[k].len();
        let mut m = if dual { Mat::zeros(labels.len(), n) } else { Mat::zeros(n, labels.len()) };
        for (col, &(k1, i1, k2, i2, alpha)) in labels.iter().enumerate() {
            let r2 = &pv[k2][i2];
            let (last, r2p) = r2.split_last().expect("v has at least two letters");
            let beta = last.1;
            let r2p: Path = r2p.to_vec();
            let y = root_of(vp, &r2p);
            let i2p = index_of(&pvp[y], &r2p);
            for e in 0..r {
                let prev_labels = product_labels(cat, &pw, &pvp, e);
                for gamma in 0..cat.n(k1, y, e) {
                    for delta in 0..cat.n(e, x, k) {
                        let key = FKey { a: k1, b: y, c: x, d: k, e, alpha: gamma, beta: delta, f: k2, gamma: beta, delta: alpha };
                        let coeff = if dual { cat.f(&key) } else { cat.f_inv(&key) };
                        if coeff == re(0.0) {
                            continue;
                        }
                        let pcol = prev_labels
                            .iter()
                            .position(|&l| l == (k1, i1, y, i2p, gamma))
                            .expect("product label present");
                        for (pr, rp) in pwvp[e].iter().enumerate() {
                            let u = if dual { prev[e][(pcol, pr)] } else { prev[e][(pr, pcol)] };
                            if u == re(0.0) {
                                continue;
                            }
                            let mut p = rp.clone();
                            p.push((k, delta));
                            let row = index_of(&pwv[k], &p);
                            if dual {
                                m[(col, row)] += coeff * u;
                            } else {
                                m[(row, col)] += coeff * u;
                            }
                        }
                    }
                }
            }
        }
        out.push(m);
    }
    out
}

/// A morphism between tensor words, stored blockwise by fusion channel.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub domain: Word,
    pub codomain: Word,
    /// `blocks[k]` has one row per tree `k → codomain` and one column per tree `k → domain`.
    pub blocks: Vec<Mat>,
}

impl Morphism {
    /// The zero morphism `domain → codomain`.
    pub fn zero(cat: &FusionCategory, domain: &[usize], codomain: &[usize]) -> Morphism {
        let pd = paths_by_channel(cat, domain);
        let pc = paths_by_channel(cat, codomain);
        let blocks = (0..cat.rank()).map(|k| Mat::zeros(pc[k].len(), pd[k].len())).collect();
        Morphism { domain: domain.to_vec(), codomain: codomain.to_vec(), blocks }
    }

    /// The identity on `w`.
    pub fn identity(cat: &FusionCategory, w: &[usize]) -> Morphism {
        let pw = paths_by_channel(cat, w);
        let blocks = pw.iter().map(|p| Mat::identity(p.len(), p.len())).collect();
        Morphism { domain: w.to_vec(), codomain: w.to_vec(), blocks }
    }

    /// The morphism `S_row ∘ F_col` through channel `k`.
    pub fn basis_element(cat: &FusionCategory, domain: &[usize], codomain: &[usize], k: usize, row: usize, col: usize) -> Morphism {
        let mut m = Morphism::zero(cat, domain, codomain);
        m.blocks[k][(row, col)] = re(1.0);
        m
    }

    /// A scalar multiple of the identity of the empty word.
    pub fn scalar(cat: &FusionCategory, value: C64) -> Morphism {
        let mut m = Morphism::identity(cat, &[]);
        m.blocks[0][(0, 0)] = value;
        m
    }

    /// The splitting vertex `s^{ab}_{k,α}: X_k → X_a ⊗ X_b`.
    pub fn split(cat: &FusionCategory, a: usize, b: usize, k: usize, alpha: usize) -> Morphism {
        let mut m = Morphism::zero(cat, &[k], &[a, b]);
        let rows = paths_by_channel(cat, &[a, b]);
        let row = index_of(&rows[k], &vec![(k, alpha)]);
        m.blocks[k][(row, 0)] = re(1.0);
        m
    }

    /// The fusion vertex `f^{ab}_{k,α}: X_a ⊗ X_b → X_k`.
    pub fn fuse(cat: &FusionCategory, a: usize, b: usize, k: usize, alpha: usize) -> Morphism {
        let mut m = Morphism::zero(cat, &[a, b], &[k]);
        let cols = paths_by_channel(cat, &[a, b]);
        let col = index_of(&cols[k], &vec![(k, alpha)]);
        m.blocks[k][(0, col)] = re(1.0);
        m
    }

    /// Value of an endomorphism of the empty word.
    pub fn scalar_value(&self) -> C64 {
        self.blocks[0][(0, 0)]
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Morphism) -> Result<Morphism> {
        if g.codomain != self.domain {
            return Err(Error::Mismatch(format!(
                "compose: {:?} → {:?} after {:?} → {:?}",
                self.domain, self.codomain, g.domain, g.codomain
            )));
        }
        let blocks = self.blocks.iter().zip(g.blocks.iter()).map(|(a, b)| a * b).collect();
        Ok(Morphism { domain: g.domain.clone(), codomain: self.codomain.clone(), blocks })
    }

    /// `self ⊗ g` in the left-nested basis of the concatenated words.
    pub fn tensor(&self, cat: &FusionCategory, g: &Morphism) -> Morphism {
        let r = cat.rank();
        if g.domain.is_empty() && g.codomain.is_empty() {
            return self.scale(g.scalar_value());
        }
        if self.domain.is_empty() && self.codomain.is_empty() {
            return g.scale(self.scalar_value());
        }
        let u = product_change(cat, &self.codomain, &g.codomain, false);
        let d = product_change(cat, &self.domain, &g.domain, true);
        let pwc = paths_by_channel(cat, &self.codomain);
        let pvc = paths_by_channel(cat, &g.codomain);
        let pwd = paths_by_channel(cat, &self.domain);
        let pvd = paths_by_channel(cat, &g.domain);
        let mut blocks = Vec::with_capacity(r);
        for k in 0..r {
            let lc = product_labels(cat, &pwc, &pvc, k);
            let ld = product_labels(cat, &pwd, &pvd, k);
            let mut b = Mat::zeros(lc.len(), ld.len());
            for (i, &(k1, r1, k2, r2, alpha)) in lc.iter().enumerate() {
                for (j, &(k1d, c1, k2d, c2, alphad)) in ld.iter().enumerate() {
                    if k1 != k1d || k2 != k2d || alpha != alphad {
                        continue;
                    }
                    b[(i, j)] = self.blocks[k1][(r1, c1)] * g.blocks[k2][(r2, c2)];
                }
            }
            blocks.push(&u[k] * b * &d[k]);
        }
        let domain = self.domain.iter().chain(g.domain.iter()).copied().collect();
        let codomain = self.codomain.iter().chain(g.codomain.iter()).copied().collect();
        Morphism { domain, codomain, blocks }
    }

    /// `id_left ⊗ self ⊗ id_right`.
    pub fn whisker(&self, cat: &FusionCategory, left: &[usize], right: &[usize]) -> Morphism {
        let mut m = self.clone();
        if !left.is_empty() {
            m = Morphism::identity(cat, left).tensor(cat, &m);
        }
        if !right.is_empty() {
            m = m.tensor(cat, &Morphism::identity(cat, right));
        }
        m
    }

    /// Spherical trace `Σ_k d_k tr(M_k)`.
    pub fn trace(&self, cat: &FusionCategory) -> Result<C64> {
        if self.domain != self.codomain {
            return Err(Error::NotEndomorphism);
        }
        Ok(self.blocks.iter().enumerate().map(|(k, m)| cat.qdim(k) * m.trace()).sum())
    }

    pub fn scale(&self, s: C64) -> Morphism {
        Morphism { domain: self.domain.clone(), codomain: self.codomain.clone(), blocks: self.blocks.iter().map(|m| m * s).collect() }
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_same_type(other)?;
        let blocks = self.blocks.iter().zip(other.blocks.iter()).map(|(a, b)| a + b).collect();
        Ok(Morphism { domain: self.domain.clone(), codomain: self.codomain.clone(), blocks })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.scale(re(-1.0)))
    }

    fn check_same_type(&self, other: &Morphism) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Mismatch("morphisms of different types".into()));
        }
        Ok(())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |a, m| a.max(max_abs(m)))
    }

    /// Largest coefficient difference, infinite for different types.
    pub fn distance(&self, other: &Morphism) -> f64 {
        match self.sub(other) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Composes a chain `fs[0] ∘ fs[1] ∘ …` (rightmost applied first).
pub fn compose_all(fs: &[Morphism]) -> Result<Morphism> {
    let mut it = fs.iter().rev();
    let mut acc = it.next().ok_or_else(|| Error::Mismatch("empty chain".into()))?.clone();
    for f in it {
        acc = f.compose(&acc)?;
    }
    Ok(acc)
}

/// Coevaluation `X_a ⊗ X_a*` cup: `[] → [a, a*]`.
pub fn cup(cat: &FusionCategory, a: usize) -> Morphism {
    let mut m = Morphism::zero(cat, &[], &[a, cat.dual(a)]);
    m.blocks[0][(0, 0)] = re(1.0);
    m
}

/// Evaluation cap: `[a*, a] → []`.
pub fn cap(cat: &FusionCategory, a: usize) -> Morphism {
    let mut m = Morphism::zero(cat, &[cat.dual(a), a], &[]);
    m.blocks[0][(0, 0)] = re(1.0) / cat.f_first(a);
    m
}

/// Right (pivotal) coevaluation: `[] → [a*, a]`.
pub fn cup_right(cat: &FusionCategory, a: usize) -> Morphism {
    let mut m = Morphism::zero(cat, &[], &[cat.dual(a), a]);
    m.blocks[0][(0, 0)] = cat.qdim(a) * cat.f_first(a);
    m
}

/// Right (pivotal) evaluation: `[a, a*] → []`.
pub fn cap_right(cat: &FusionCategory, a: usize) -> Morphism {
    let mut m = Morphism::zero(cat, &[a, cat.dual(a)], &[]);
    m.blocks[0][(0, 0)] = cat.qdim(a);
    m
}

/// An oriented strand of color `color`; downward strands carry `X_color*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Strand {
    pub color: usize,
    pub up: bool,
}

impl Strand {
    pub fn up(color: usize) -> Strand {
        Strand { color, up: true }
    }

    pub fn down(color: usize) -> Strand {
        Strand { color, up: false }
    }

    /// The same strand traversed in the opposite direction.
    pub fn flip(self) -> Strand {
        Strand { color: self.color, up: !self.up }
    }

    /// The simple object carried by the strand.
    pub fn object(self, cat: &FusionCategory) -> usize {
        if self.up {
            self.color
        } else {
            cat.dual(self.color)
        }
    }
}

/// Objects of a strand word.
pub fn strand_word(cat: &FusionCategory, s: &[Strand]) -> Word {
    s.iter().map(|x| x.object(cat)).collect()
}

/// Cup creating `[first, first.flip()]`.
pub fn strand_cup(cat: &FusionCategory, first: Strand) -> Morphism {
    if first.up {
        cup(cat, first.color)
    } else {
        cup_right(cat, first.color)
    }
}

/// Cap closing `[first, first.flip()]`.
pub fn strand_cap(cat: &FusionCategory, first: Strand) -> Morphism {
    if first.up {
        cap_right(cat, first.color)
    } else {
        cap(cat, first.color)
    }
}

/// Dual bases of `hom(w, X_k)` and `hom(X_k, w)` with `Tr(φ_j ∘ φ'_l) = δ_{jl}`.
pub fn dual_bases(cat: &FusionCategory, w: &[usize], k: usize) -> (Vec<Morphism>, Vec<Morphism>) {
    let pw = paths_by_channel(cat, w);
    let n = pw[k].len();
    let dk = cat.qdim(k);
    let phi = (0..n).map(|j| Morphism::basis_element(cat, w, &[k], k, 0, j)).collect();
    let phi_dual = (0..n).map(|j| Morphism::basis_element(cat, &[k], w, k, j, 0).scale(re(1.0) / dk)).collect();
    (phi, phi_dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin_category;
    use crate::linalg::random_mat;
    use rand::SeedableRng;

    fn fib() -> FusionCategory {
        builtin_category("fibonacci", &[]).unwrap()
    }

    fn random_morphism(cat: &FusionCategory, rng: &mut impl rand::Rng, dom: &[usize], cod: &[usize]) -> Morphism {
        let mut m = Morphism::zero(cat, dom, cod);
        for b in m.blocks.iter_mut() {
            *b = random_mat(rng, b.nrows(), b.ncols());
        }
        m
    }

    /// Brute-force hom dimension by enumerating all channel sequences.
    fn brute_hom_dim(cat: &FusionCategory, a: &[usize], b: &[usize]) -> usize {
        fn count(cat: &FusionCategory, w: &[usize], k: usize) -> usize {
            match w.len() {
                0 => usize::from(k == 0),
                1 => usize::from(w[0] == k),
                _ => {
                    let (last, rest) = w.split_last().unwrap();
                    (0..cat.rank()).map(|y| count(cat, rest, y) * cat.n(y, *last, k)).sum()
                }
            }
        }
        (0..cat.rank()).map(|k| count(cat, a, k) * count(cat, b, k)).sum()
    }

    #[test]
    fn hom_dims() {
        let cat = fib();
        assert_eq!(hom_dim(&cat, &[1, 1], &[1, 1]).unwrap(), 2);
        assert_eq!(hom_dim(&cat, &[], &[]).unwrap(), 1);
        let z2 = builtin_category("vec_zn", &[2, 0]).unwrap();
        assert_eq!(hom_dim(&z2, &[1], &[0]).unwrap(), 0);
        for w in [vec![1, 1, 1], vec![1, 0, 1, 1], vec![1, 1, 1, 1, 1]] {
            assert_eq!(hom_dim(&cat, &w, &w).unwrap(), brute_hom_dim(&cat, &w, &w));
        }
        assert!(hom_dim(&cat, &[5], &[]).is_err());
    }

    #[test]
    fn loop_value_is_quantum_dimension() {
        let cat = fib();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let v = cap(&cat, 1).compose(&cup(&cat, 1)).unwrap().scalar_value();
        assert!((v - re(phi)).norm() < 1e-12);
        let unit = cap(&cat, 0).compose(&cup(&cat, 0)).unwrap().scalar_value();
        assert_eq!(unit, re(1.0));
    }

    #[test]
    fn zigzags_for_all_builtins() {
        let cats = [
            builtin_category("fibonacci", &[]).unwrap(),
            builtin_category("ising", &[]).unwrap(),
            builtin_category("su2_level", &[3]).unwrap(),
            builtin_category("vec_zn", &[3, 1]).unwrap(),
            builtin_category("vec_zn", &[2, 1]).unwrap(),
            builtin_category("vec_zn", &[4, 3]).unwrap(),
        ];
        for cat in &cats {
            for a in 0..cat.rank() {
                let ad = cat.dual(a);
                let id_a = Morphism::identity(cat, &[a]);
                let id_ad = Morphism::identity(cat, &[ad]);
                // (id_a ⊗ ev_a)(coev_a ⊗ id_a) = id_a
                let z1 = cap(cat, a).whisker(cat, &[a], &[]).compose(&cup(cat, a).whisker(cat, &[], &[a])).unwrap();
                assert!(z1.distance(&id_a) < 1e-12);
                // (ev_a ⊗ id_a*)(id_a* ⊗ coev_a) = id_a*
                let z2 = cap(cat, a).whisker(cat, &[], &[ad]).compose(&cup(cat, a).whisker(cat, &[ad], &[])).unwrap();
                assert!(z2.distance(&id_ad) < 1e-12);
                // (ev'_a ⊗ id_a)(id_a ⊗ coev'_a) = id_a
                let z3 = cap_right(cat, a).whisker(cat, &[], &[a]).compose(&cup_right(cat, a).whisker(cat, &[a], &[])).unwrap();
                assert!(z3.distance(&id_a) < 1e-12, "{a}: {}", z3.distance(&id_a));
                // (id_a* ⊗ ev'_a)(coev'_a ⊗ id_a*) = id_a*
                let z4 = cap_right(cat, a).whisker(cat, &[ad], &[]).compose(&cup_right(cat, a).whisker(cat, &[], &[ad])).unwrap();
                assert!(z4.distance(&id_ad) < 1e-12);
                // Both closures of id_a give d_a.
                let left = cap(cat, a).compose(&cup_right(cat, a)).unwrap().scalar_value();
                let right = cap_right(cat, a).compose(&cup(cat, a)).unwrap().scalar_value();
                assert!((left - cat.qdim(a)).norm() < 1e-12);
                assert!((right - cat.qdim(a)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_of_identities() {
        let cat = fib();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let t = Morphism::identity(&cat, &[1, 1]).trace(&cat).unwrap();
        assert!((t - re(phi * phi)).norm() < 1e-12);
        assert_eq!(Morphism::identity(&cat, &[]).trace(&cat).unwrap(), re(1.0));
        let f = Morphism::zero(&cat, &[1], &[1, 1]);
        assert_eq!(f.trace(&cat), Err(Error::NotEndomorphism));
    }

    #[test]
    fn tensor_identities_and_dimensions() {
        let cat = fib();
        let t = Morphism::identity(&cat, &[1]).tensor(&cat, &Morphism::identity(&cat, &[1, 1]));
        assert!(t.distance(&Morphism::identity(&cat, &[1, 1, 1])) < 1e-12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let f = random_morphism(&cat, &mut rng, &[1, 1], &[1]);
        let g = random_morphism(&cat, &mut rng, &[1], &[1, 1]);
        let fg = f.tensor(&cat, &g);
        let want = hom_dim(&cat, &[1, 1, 1], &[1, 1, 1]).unwrap();
        let got: usize = fg.blocks.iter().map(|b| b.nrows() * b.ncols()).sum();
        assert_eq!(got, want);
        let zero = Morphism::zero(&cat, &[1], &[1, 1]);
        assert!(f.compose(&zero).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn tensor_is_associative_and_interchanges() {
        let cat = builtin_category("su2_level", &[3]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let f = random_morphism(&cat, &mut rng, &[1, 2], &[3]);
        let g = random_morphism(&cat, &mut rng, &[1], &[2, 1]);
        let h = random_morphism(&cat, &mut rng, &[3, 1], &[2]);
        let a = f.tensor(&cat, &g).tensor(&cat, &h);
        let b = f.tensor(&cat, &g.tensor(&cat, &h));
        assert!(a.distance(&b) < 1e-10);
        // (f ⊗ id)(id ⊗ g) = (id ⊗ g)(f ⊗ id) = f ⊗ g
        let lhs = f.whisker(&cat, &[], &g.codomain).compose(&g.whisker(&cat, &f.domain, &[])).unwrap();
        let rhs = g.whisker(&cat, &f.codomain, &[]).compose(&f.whisker(&cat, &[], &g.domain)).unwrap();
        assert!(lhs.distance(&f.tensor(&cat, &g)) < 1e-10);
        assert!(rhs.distance(&f.tensor(&cat, &g)) < 1e-10);
    }

    #[test]
    fn trace_cyclic_and_spherical() {
        let cat = builtin_category("su2_level", &[2]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let f = random_morphism(&cat, &mut rng, &[1, 1], &[1, 2, 1]);
        let g = random_morphism(&cat, &mut rng, &[1, 2, 1], &[1, 1]);
        let t1 = f.compose(&g).unwrap().trace(&cat).unwrap();
        let t2 = g.compose(&f).unwrap().trace(&cat).unwrap();
        assert!((t1 - t2).norm() < 1e-10);
        // Left and right closures of an endomorphism of a single strand pair.
        for a in 0..cat.rank() {
            let ad = cat.dual(a);
            let e = random_morphism(&cat, &mut rng, &[a], &[a]);
            let right = cap_right(&cat, a).compose(&e.whisker(&cat, &[], &[ad])).unwrap().compose(&cup(&cat, a)).unwrap().scalar_value();
            let left = cap(&cat, a).compose(&e.whisker(&cat, &[ad], &[])).unwrap().compose(&cup_right(&cat, a)).unwrap().scalar_value();
            assert!((left - right).norm() < 1e-10);
            assert!((right - e.trace(&cat).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn unit_decomposition_and_dual_bases() {
        let cat = fib();
        let w = [1, 1, 1];
        let mut acc = Morphism::zero(&cat, &w, &w);
        for k in 0..cat.rank() {
            let (phi, phid) = dual_bases(&cat, &w, k);
            for j in 0..phi.len() {
                for l in 0..phi.len() {
                    let t = phi[j].compose(&phid[l]).unwrap().trace(&cat).unwrap();
                    let want = if j == l { 1.0 } else { 0.0 };
                    assert!((t - re(want)).norm() < 1e-12);
                }
                acc = acc.add(&phid[j].compose(&phi[j]).unwrap().scale(cat.qdim(k))).unwrap();
            }
        }
        assert!(acc.distance(&Morphism::identity(&cat, &w)) < 1e-10);
        let (p, pd) = dual_bases(&cat, &[1, 1], 0);
        assert_eq!(p.len(), 1);
        assert!((p[0].compose(&pd[0]).unwrap().trace(&cat).unwrap() - re(1.0)).norm() < 1e-12);
        let (p0, pd0) = dual_bases(&cat, &[0], 0);
        assert_eq!(p0.len(), 1);
        assert!((p0[0].compose(&pd0[0]).unwrap().trace(&cat).unwrap() - re(1.0)).norm() < 1e-12);
    }

    #[test]
    fn strand_cups_match_plain_ones() {
        let cat = builtin_category("su2_level", &[1]).unwrap();
        // Closing an up-down pair and a down-up pair both give d.
        for s in [Strand::up(1), Strand::down(1)] {
            let v = strand_cap(&cat, s).compose(&strand_cup(&cat, s)).unwrap().scalar_value();
            assert!((v - cat.qdim(1)).norm() < 1e-12);
        }
    }
}
