//! Simple objects of the Drinfeld center from the tube algebra.
//!
//! Minimal central idempotents of the tube algebra are found by diagonalizing
//! the action of a random central element on the center of the algebra. Each
//! idempotent `P_A` yields a left module `⊕_i e_i · Tube · q` for a minimal
//! idempotent `q ≤ P_A`, whose dimension at corner `i` is the multiplicity of
//! `X_i` in the underlying object. The half-braiding is recovered from the
//! module action through the pairing that closes a tube against its partner
//! in the dual sector.

use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fusion::FusionCategory;
use crate::linalg::{column_space, eigenvalues, inverse, least_singular_vector, nullspace, random_c64, rank, re, Mat, C64};
use crate::morphism::{compose_all, cap_right, cup, Morphism};
use crate::tube::{TubeAlgebra, TubeElement, TubeLabel};

/// Seed of the random central element used for the decomposition.
const CENTER_SEED: u64 = 0x7475_6265;
/// Smallest accepted separation between eigenvalues of the random central element.
const EIGEN_GAP: f64 = 1e-6;

/// The half-braiding `e_X(X_g)` split along the simple summands of `X`.
///
/// `components[s][t]` is the component `X_{slot s} ⊗ X_g → X_g ⊗ X_{slot t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfBraiding {
    pub g: usize,
    pub components: Vec<Vec<Morphism>>,
}

/// A simple object of the Drinfeld center.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterObject {
    pub index: usize,
    /// The minimal central idempotent of the tube algebra.
    pub idempotent: TubeElement,
    pub qdim: C64,
    /// Ribbon twist `θ_A`; the Dehn twist tube acts on the block by `θ_A⁻¹`.
    pub twist: C64,
    /// `multiplicities[i]` is the multiplicity of `X_i` in the underlying object.
    pub multiplicities: Vec<usize>,
    /// Simple type of each summand of the underlying object, ascending.
    pub slots: Vec<usize>,
    /// `half_braidings[g]` for every simple `g`.
    pub half_braidings: Vec<HalfBraiding>,
}

impl CenterObject {
    /// The half-braiding with the simple `g`.
    pub fn half_braiding(&self, g: usize) -> &HalfBraiding {
        &self.half_braidings[g]
    }
}

/// `e_X(X_g)` for a center simple.
pub fn half_braiding(ctr: &CenterObject, g: usize) -> &HalfBraiding {
    ctr.half_braiding(g)
}

/// The decomposition of the tube algebra into center simples.
#[derive(Clone, Debug)]
pub struct Center {
    alg: TubeAlgebra,
    objects: Vec<CenterObject>,
}

/// Decomposes the tube algebra of `cat` into minimal central idempotents.
pub fn center_simples(cat: &FusionCategory) -> Result<Center> {
    Center::new(cat)
}

impl Center {
    pub fn new(cat: &FusionCategory) -> Result<Center> {
        let alg = TubeAlgebra::new(cat)?;
        let idempotents = central_idempotents(&alg)?;
        let dehn = dehn_element(&alg);
        let mut objects = Vec::with_capacity(idempotents.len());
        for p in idempotents {
            objects.push(build_object(&alg, p, &dehn)?);
        }
        let unit = unit_projector(&alg);
        let unit_pos = objects
            .iter()
            .position(|o| o.idempotent.distance(&unit) < 1e-6)
            .ok_or_else(|| Error::Decomposition("no block contains the unit projector".into()))?;
        let first = objects.remove(unit_pos);
        objects.sort_by_key(sort_key);
        objects.insert(0, first);
        for (n, o) in objects.iter_mut().enumerate() {
            o.index = n;
        }
        Ok(Center { alg, objects })
    }

    pub fn algebra(&self) -> &TubeAlgebra {
        &self.alg
    }

    pub fn category(&self) -> &FusionCategory {
        self.alg.category()
    }

    pub fn objects(&self) -> &[CenterObject] {
        &self.objects
    }

    pub fn rank(&self) -> usize {
        self.objects.len()
    }

    /// Ribbon twist `θ_A = Tr(c_{A,A}) / d_A` computed from the half-braiding.
    pub fn ribbon_twist(&self, a: usize) -> Result<C64> {
        let cat = self.category();
        let o = &self.objects[a];
        let mut t = re(0.0);
        for (s, &i) in o.slots.iter().enumerate() {
            t += o.half_braidings[i].components[s][s].trace(cat)?;
        }
        Ok(t / o.qdim)
    }

    /// Monodromy `M_{AB} = Tr(c_{B,A} ∘ c_{A,B})`.
    pub fn monodromy(&self) -> Result<Mat> {
        let cat = self.category();
        let n = self.rank();
        let mut m = Mat::zeros(n, n);
        for (a, oa) in self.objects.iter().enumerate() {
            for (b, ob) in self.objects.iter().enumerate() {
                let mut acc = re(0.0);
                for (s, &i) in oa.slots.iter().enumerate() {
                    for (t, &j) in ob.slots.iter().enumerate() {
                        let ab = &oa.half_braidings[j].components[s][s];
                        let ba = &ob.half_braidings[i].components[t][t];
                        acc += ba.compose(ab)?.trace(cat)?;
                    }
                }
                m[(a, b)] = acc;
            }
        }
        Ok(m)
    }

    /// Largest residual of `e(g₁ ⊗ g₂) = (id ⊗ e(g₂))(e(g₁) ⊗ id)` over all
    /// pairs of simples, together with `e(𝟙) = id`.
    pub fn half_braiding_residual(&self, a: usize) -> Result<f64> {
        let cat = self.category();
        let o = &self.objects[a];
        let r = cat.rank();
        let ns = o.slots.len();
        let mut worst = 0.0f64;
        for s in 0..ns {
            for t in 0..ns {
                let e0 = &o.half_braidings[0].components[s][t];
                let want = if s == t { Morphism::basis_element(cat, &[o.slots[s], 0], &[0, o.slots[t]], o.slots[s], 0, 0) } else { Morphism::zero(cat, &[o.slots[s], 0], &[0, o.slots[t]]) };
                worst = worst.max(e0.distance(&want));
            }
        }
        for g1 in 0..r {
            for g2 in 0..r {
                for s in 0..ns {
                    for t in 0..ns {
                        let (x, y) = (o.slots[s], o.slots[t]);
                        let mut lhs = Morphism::zero(cat, &[x, g1, g2], &[g1, g2, y]);
                        for p in 0..r {
                            for gamma in 0..cat.n(g1, g2, p) {
                                let split = Morphism::split(cat, g1, g2, p, gamma).whisker(cat, &[], &[y]);
                                let fuse = Morphism::fuse(cat, g1, g2, p, gamma).whisker(cat, &[x], &[]);
                                let term = compose_all(&[split, o.half_braidings[p].components[s][t].clone(), fuse])?;
                                lhs = lhs.add(&term)?;
                            }
                        }
                        let mut rhs = Morphism::zero(cat, &[x, g1, g2], &[g1, g2, y]);
                        for (u, &z) in o.slots.iter().enumerate() {
                            let first = o.half_braidings[g1].components[s][u].whisker(cat, &[], &[g2]);
                            let second = o.half_braidings[g2].components[u][t].whisker(cat, &[g1], &[]);
                            debug_assert_eq!(first.codomain, vec![g1, z, g2]);
                            rhs = rhs.add(&second.compose(&first)?)?;
                        }
                        worst = worst.max(lhs.distance(&rhs));
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Modular data of the center: dimensions, Dehn twists and
    /// `S̃_{AB} = M_{A*,B}`, the Hopf link with one component reversed.
    pub fn modular_data(&self) -> Result<ModularData> {
        let m = self.monodromy()?;
        let n = self.rank();
        let mu = self.category().mu();
        let conj = charge_conjugation(&(&m * &m), mu * mu)?;
        let s_tilde = Mat::from_fn(n, n, |a, b| m[(conj[a], b)]);
        let md = ModularData {
            rank_z: n,
            s_tilde,
            twists: self.objects.iter().map(|o| o.twist).collect(),
            dims: self.objects.iter().map(|o| o.qdim).collect(),
            mu_z: self.objects.iter().map(|o| o.qdim * o.qdim).sum(),
        };
        md.check(self.category().tol().max(1e-7))?;
        Ok(md)
    }

    /// Deviation of the Ω-ringed identity tube on `X_i` from `μ δ_{i,0}` times
    /// the unit projector.
    ///
    /// A ring of color `X_g` around a tube of type `Z` acts on its block by
    /// `Σ_W N_{W,g} S̃_{W,Z} / (μ d_Z)`, where `N_{W,g}` is the multiplicity of
    /// `X_g` in the underlying object of `W`.
    pub fn verify_killing(&self, i: usize) -> Result<f64> {
        let cat = self.category();
        if i >= cat.rank() {
            return Err(Error::Index(format!("simple {i} out of range")));
        }
        let md = self.modular_data()?;
        let mu = cat.mu();
        let mut ring = self.alg.zero();
        for g in 0..cat.rank() {
            for (z, oz) in self.objects.iter().enumerate() {
                let mut c = re(0.0);
                for (w, ow) in self.objects.iter().enumerate() {
                    c += re(ow.multiplicities[g] as f64) * md.s_tilde[(w, z)];
                }
                ring = ring.add(&oz.idempotent.scale(cat.qdim(g) * c / (mu * oz.qdim)));
            }
        }
        let ringed = self.alg.multiply(&ring, &self.alg.corner_unit(i))?;
        let want = if i == 0 { self.objects[0].idempotent.scale(mu) } else { self.alg.zero() };
        Ok(ringed.distance(&want))
    }
}

/// Permutation `A ↦ A*` read off a matrix proportional to the charge conjugation.
fn charge_conjugation(m2: &Mat, scale: C64) -> Result<Vec<usize>> {
    let n = m2.nrows();
    let mut out = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = m2[(a, b)] / scale;
            if (v - re(1.0)).norm() < 1e-6 {
                if out[a] != usize::MAX {
                    return Err(Error::InvalidModularData("charge conjugation is not a permutation".into()));
                }
                out[a] = b;
            } else if v.norm() > 1e-6 {
                return Err(Error::InvalidModularData(format!("S̃² entry ({a},{b}) = {v} is not 0 or μ²")));
            }
        }
    }
    if out.contains(&usize::MAX) {
        return Err(Error::InvalidModularData("charge conjugation is not a permutation".into()));
    }
    Ok(out)
}

/// `P_𝟙 = μ⁻¹ Σ_g d_g t(0, g, 0, g)`.
fn unit_projector(alg: &TubeAlgebra) -> TubeElement {
    let cat = alg.category();
    let mut p = alg.zero();
    for g in 0..cat.rank() {
        let l = TubeLabel { i: 0, g, j: 0, k: g, alpha: 0, beta: 0 };
        let n = alg.basis().index(&l).expect("unit sector label");
        p.coeffs[n] = cat.qdim(g) / cat.mu();
    }
    p
}

/// The tube with the strand wound once around the annulus, `Σ_i id_{X_i ⊗ X_i}`.
fn dehn_element(alg: &TubeAlgebra) -> TubeElement {
    let mut d = alg.zero();
    for (n, l) in alg.basis().labels().iter().enumerate() {
        if l.i == l.g && l.g == l.j && l.alpha == l.beta {
            d.coeffs[n] = re(1.0);
        }
    }
    d
}

/// Minimal central idempotents, in the order of the eigenvalues found.
fn central_idempotents(alg: &TubeAlgebra) -> Result<Vec<TubeElement>> {
    let n = alg.dim();
    let tol = 1e-9;
    // Commutators with every basis vector, stacked.
    let mut comm = Mat::zeros(n * n, n);
    for b in 0..n {
        let e = TubeElement::basis_vector(n, b);
        let d = alg.left_matrix(&e)? - alg.right_matrix(&e)?;
        comm.view_mut((b * n, 0), (n, n)).copy_from(&d);
    }
    let z = nullspace(&comm, tol);
    let r = z.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(CENTER_SEED);
    let c = Mat::from_fn(r, 1, |_, _| random_c64(&mut rng));
    let zel = TubeElement::from_column(&(&z * c));
    let lz = alg.left_matrix(&zel)?;
    let reg = z.adjoint() * &lz * &z;
    let ev = eigenvalues(&reg).ok_or_else(|| Error::Decomposition("Schur iteration did not converge".into()))?;
    for a in 0..r {
        for b in a + 1..r {
            let gap = (ev[a] - ev[b]).norm();
            if gap < EIGEN_GAP {
                return Err(Error::Decomposition(format!("eigenvalue gap {gap:e} below {EIGEN_GAP:e}")));
            }
        }
    }
    let mut out = Vec::with_capacity(r);
    for lambda in ev {
        let shifted = &reg - Mat::identity(r, r) * lambda;
        let w = least_singular_vector(&shifted);
        let e = TubeElement::from_column(&(&z * w));
        let ee = alg.multiply(&e, &e)?;
        let num: C64 = e.coeffs.iter().zip(&ee.coeffs).map(|(x, y)| x.conj() * y).sum();
        let den: C64 = e.coeffs.iter().map(|x| x.conj() * x).sum();
        let s = num / den;
        if s.norm() < 1e-12 {
            return Err(Error::Decomposition("nilpotent central element".into()));
        }
        let p = e.scale(re(1.0) / s);
        let res = alg.multiply(&p, &p)?.distance(&p);
        if res > 1e-7 {
            return Err(Error::Decomposition(format!("idempotent residual {res:e}")));
        }
        out.push(p);
    }
    Ok(out)
}

/// Basis positions of the corner `e_i · Tube · e_i`.
fn corner(alg: &TubeAlgebra, i: usize) -> Vec<usize> {
    (0..alg.dim()).filter(|&n| {
        let l = alg.basis().label(n);
        l.i == i && l.j == i
    }).collect()
}

fn select_columns(m: &Mat, cols: &[usize]) -> Mat {
    Mat::from_fn(m.nrows(), cols.len(), |r, c| m[(r, cols[c])])
}

/// A minimal idempotent below `u = P_A e_j` in the matrix block `u · Tube · u`
/// of size `mult`.
fn minimal_idempotent(alg: &TubeAlgebra, u: &TubeElement, mult: usize) -> Result<TubeElement> {
    if mult == 1 {
        return Ok(u.clone());
    }
    let lu = alg.left_matrix(u)?;
    let ru = alg.right_matrix(u)?;
    let block = column_space(&(&lu * &ru), 1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(CENTER_SEED ^ 1);
    let c = Mat::from_fn(block.ncols(), 1, |_, _| random_c64(&mut rng));
    let x = TubeElement::from_column(&(&block * c));
    let reg = block.adjoint() * alg.left_matrix(&x)? * &block;
    let ev = eigenvalues(&reg).ok_or_else(|| Error::Decomposition("Schur iteration did not converge".into()))?;
    // Each eigenvalue of x ∈ M_mult appears mult times in its left action.
    let mut distinct: Vec<C64> = Vec::new();
    for l in ev {
        if distinct.iter().all(|d| (d - l).norm() > 1e-5) {
            distinct.push(l);
        }
    }
    if distinct.len() != mult {
        return Err(Error::Decomposition(format!("{} distinct eigenvalues in a block of size {mult}", distinct.len())));
    }
    let mut q = u.clone();
    for &l in &distinct[1..] {
        let shifted = x.sub(&u.scale(l)).scale(re(1.0) / (distinct[0] - l));
        q = alg.multiply(&q, &shifted)?;
    }
    Ok(q)
}

fn build_object(alg: &TubeAlgebra, p: TubeElement, dehn: &TubeElement) -> Result<CenterObject> {
    let cat = alg.category();
    let r = cat.rank();
    let lp = alg.left_matrix(&p)?;
    let mut multiplicities = vec![0usize; r];
    for (i, m) in multiplicities.iter_mut().enumerate() {
        let rk = rank(&select_columns(&lp, &corner(alg, i)), 1e-8);
        let root = Float::round(Float::sqrt(rk as f64)) as usize;
        if root * root != rk {
            return Err(Error::Decomposition(format!("corner {i} of a block has dimension {rk}, not a square")));
        }
        *m = root;
    }
    let tr = alg.trace(&p)?;
    let guess: C64 = (0..r).map(|i| re(multiplicities[i] as f64) * cat.qdim(i)).sum();
    let mut qdim = tr.sqrt();
    if (qdim * guess.conj()).re < 0.0 {
        qdim = -qdim;
    }

    let dp = alg.multiply(dehn, &p)?;
    let den: C64 = p.coeffs.iter().map(|x| x.conj() * x).sum();
    let dehn_value: C64 = p.coeffs.iter().zip(&dp.coeffs).map(|(x, y)| x.conj() * y).sum::<C64>() / den;
    let res = dp.distance(&p.scale(dehn_value));
    if res > 1e-7 {
        return Err(Error::Decomposition(format!("Dehn twist acts non-scalarly on a block (residual {res:e})")));
    }

    // Module e_i · Tube · q.
    let j0 = (0..r)
        .filter(|&i| multiplicities[i] > 0)
        .min_by_key(|&i| multiplicities[i])
        .ok_or_else(|| Error::Decomposition("empty block".into()))?;
    let u = alg.multiply(&p, &alg.corner_unit(j0))?;
    let q = minimal_idempotent(alg, &u, multiplicities[j0])?;
    let rq = alg.right_matrix(&q)?;
    let mut bases: Vec<Mat> = Vec::with_capacity(r);
    for i in 0..r {
        let cols: Vec<usize> = (0..alg.dim()).filter(|&n| alg.basis().label(n).i == i).collect();
        let b = column_space(&select_columns(&rq, &cols), 1e-8);
        if b.ncols() != multiplicities[i] {
            return Err(Error::Decomposition(format!("module corner {i} has dimension {} instead of {}", b.ncols(), multiplicities[i])));
        }
        bases.push(b);
    }
    let mut slots = Vec::new();
    let mut slot_of = vec![Vec::new(); r];
    for i in 0..r {
        for _ in 0..multiplicities[i] {
            slot_of[i].push(slots.len());
            slots.push(i);
        }
    }
    let ns = slots.len();

    let mut half_braidings: Vec<HalfBraiding> = (0..r)
        .map(|g| HalfBraiding {
            g,
            components: (0..ns).map(|s| (0..ns).map(|t| Morphism::zero(cat, &[slots[s], g], &[g, slots[t]])).collect()).collect(),
        })
        .collect();
    for g in 0..r {
        let gd = cat.dual(g);
        for i in 0..r {
            for j in 0..r {
                if multiplicities[i] == 0 || multiplicities[j] == 0 {
                    continue;
                }
                let sec = alg.basis().sector(i, g, j);
                let dual_sec = alg.basis().sector(j, gd, i);
                if sec.is_empty() {
                    continue;
                }
                let pairing = Mat::from_fn(sec.len(), dual_sec.len(), |a, b| {
                    pair_tubes(alg, sec[a], dual_sec[b])
                });
                let pinv = inverse(&pairing).ok_or_else(|| Error::Decomposition("degenerate tube pairing".into()))?;
                // rho[a] = action of t_{sec[a]} from M_j to M_i.
                let rho: Vec<Mat> = sec
                    .iter()
                    .map(|&b| {
                        let lb = alg.left_matrix(&TubeElement::basis_vector(alg.dim(), b)).expect("basis element");
                        bases[i].adjoint() * lb * &bases[j]
                    })
                    .collect();
                for (mj, &s) in slot_of[j].iter().enumerate() {
                    for (mi, &t) in slot_of[i].iter().enumerate() {
                        let mut comp = Morphism::zero(cat, &[j, gd], &[gd, i]);
                        for (bp, &lab) in dual_sec.iter().enumerate() {
                            let coef: C64 = (0..sec.len()).map(|a| pinv[(bp, a)] * rho[a][(mi, mj)]).sum();
                            let l = alg.basis().label(lab);
                            comp.blocks[l.k][(l.beta, l.alpha)] += coef;
                        }
                        half_braidings[gd].components[s][t] = comp;
                    }
                }
            }
        }
    }
    Ok(CenterObject { index: 0, idempotent: p, qdim, twist: re(1.0) / dehn_value, multiplicities, slots, half_braidings })
}

/// `(ev'_g ⊗ id_i)(id_g ⊗ t_b')(t_b ⊗ id_{g*})(id_i ⊗ coev_g)` as a scalar,
/// for `b ∈ (i, g, j)` and `b' ∈ (j, g*, i)`.
fn pair_tubes(alg: &TubeAlgebra, b: usize, bp: usize) -> C64 {
    let cat = alg.category();
    let lb = alg.basis().label(b);
    let lbp = alg.basis().label(bp);
    let (i, g) = (lb.i, lb.g);
    let gd = cat.dual(g);
    let tb = Morphism::basis_element(cat, &[lb.i, lb.g], &[lb.g, lb.j], lb.k, lb.beta, lb.alpha);
    let tbp = Morphism::basis_element(cat, &[lbp.i, lbp.g], &[lbp.g, lbp.j], lbp.k, lbp.beta, lbp.alpha);
    let chain = [
        cap_right(cat, g).whisker(cat, &[], &[i]),
        tbp.whisker(cat, &[g], &[]),
        tb.whisker(cat, &[], &[gd]),
        cup(cat, g).whisker(cat, &[i], &[]),
    ];
    let m = compose_all(&chain).expect("tube pairing types");
    m.blocks[i][(0, 0)]
}

/// Deterministic ordering of the non-unit center simples.
fn sort_key(o: &CenterObject) -> (i64, Vec<usize>, i64, Vec<(i64, i64)>) {
    let q = |x: f64| Float::round(x * 1e6) as i64;
    let mut arg = o.twist.arg();
    if arg < -1e-9 {
        arg += 2.0 * core::f64::consts::PI;
    }
    let coeffs = o.idempotent.coeffs.iter().map(|c| (q(c.re), q(c.im))).collect();
    (q(o.qdim.re), o.multiplicities.clone(), q(arg), coeffs)
}

/// Modular data of a Drinfeld center.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularData {
    pub rank_z: usize,
    /// Unnormalized S-matrix with `s_tilde[0][0] = 1`.
    pub s_tilde: Mat,
    pub twists: Vec<C64>,
    pub dims: Vec<C64>,
    /// `Σ_A d_A²`.
    pub mu_z: C64,
}

impl ModularData {
    /// Checks symmetry, `S̃·conj(S̃) = mu_z·I`, `S̃·S̃ = mu_z·C` for a
    /// permutation `C`, and `mu_z = Σ d²`.
    pub fn check(&self, tol: f64) -> Result<()> {
        let n = self.rank_z;
        if self.s_tilde.shape() != (n, n) || self.twists.len() != n || self.dims.len() != n {
            return Err(Error::InvalidModularData("inconsistent sizes".into()));
        }
        let sum: C64 = self.dims.iter().map(|d| d * d).sum();
        if (sum - self.mu_z).norm() > tol * self.mu_z.norm().max(1.0) {
            return Err(Error::InvalidModularData(format!("Σ d² = {sum} but mu_z = {}", self.mu_z)));
        }
        let asym = crate::linalg::max_diff(&self.s_tilde, &self.s_tilde.transpose());
        if asym > tol {
            return Err(Error::InvalidModularData(format!("S̃ asymmetric by {asym:e}")));
        }
        let c = self.charge_conjugation()?;
        let unitary = &self.s_tilde * self.s_tilde.conjugate();
        let d = crate::linalg::max_diff(&unitary, &(Mat::identity(n, n) * self.mu_z));
        if d > tol * self.mu_z.norm().max(1.0) {
            return Err(Error::InvalidModularData(format!("S̃·conj(S̃) deviates from mu_z·I by {d:e}")));
        }
        let square = &self.s_tilde * &self.s_tilde;
        let want = Mat::from_fn(n, n, |a, b| if c[a] == b { self.mu_z } else { re(0.0) });
        let d = crate::linalg::max_diff(&square, &want);
        if d > tol * self.mu_z.norm().max(1.0) {
            return Err(Error::InvalidModularData(format!("S̃² deviates from mu_z·C by {d:e}")));
        }
        Ok(())
    }

    /// The duality permutation `A ↦ A*` from `S̃² = mu_z·C`.
    pub fn charge_conjugation(&self) -> Result<Vec<usize>> {
        charge_conjugation(&(&self.s_tilde * &self.s_tilde), self.mu_z)
    }

    /// Verlinde coefficients `N_{AB}^C = Σ_D S̃_{AD} S̃_{BD} conj(S̃_{CD}) / (mu_z S̃_{0D})`,
    /// indexed `[a][b][c]`.
    pub fn verlinde(&self) -> Vec<Vec<Vec<C64>>> {
        let n = self.rank_z;
        let s = &self.s_tilde;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .map(|c| (0..n).map(|d| s[(a, d)] * s[(b, d)] * s[(c, d)].conj() / (self.mu_z * s[(0, d)])).sum())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Largest distance of a Verlinde coefficient from a nonnegative integer.
    pub fn verlinde_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in self.verlinde() {
            for col in row {
                for v in col {
                    let k = Float::max(Float::round(v.re), 0.0);
                    worst = worst.max((v - re(k)).norm());
                }
            }
        }
        worst
    }

    /// `S = S̃ / sqrt(mu_z)` and `T = diag(θ)`.
    pub fn normalized(&self) -> (Mat, Mat) {
        let n = self.rank_z;
        let s = &self.s_tilde / self.mu_z.sqrt();
        let t = Mat::from_fn(n, n, |a, b| if a == b { self.twists[a] } else { re(0.0) });
        (s, t)
    }

    /// Max entry of `(ST)³ − S²`.
    pub fn modular_relation_defect(&self) -> f64 {
        let (s, t) = self.normalized();
        let st = &s * &t;
        crate::linalg::max_diff(&(&st * &st * &st), &(&s * &s))
    }

    /// Gauss sum `Σ_A d_A² θ_A`.
    pub fn gauss_sum(&self) -> C64 {
        self.dims.iter().zip(&self.twists).map(|(d, t)| d * d * t).sum()
    }
}

/// Modular data of the center of `cat`.
pub fn modular_data(cat: &FusionCategory) -> Result<ModularData> {
    center_simples(cat)?.modular_data()
}

/// Killing defect for the simple `i` of `cat`.
pub fn verify_killing(cat: &FusionCategory, i: usize) -> Result<f64> {
    center_simples(cat)?.verify_killing(i)
}

/// A simultaneous permutation `π` with `s[π(a)][π(b)] ≈ s_ref[a][b]` and
/// `t[π(a)] ≈ t_ref[a]`, if one exists.
pub fn match_modular_data(s: &Mat, t: &[C64], s_ref: &Mat, t_ref: &[C64], tol: f64) -> Option<Vec<usize>> {
    let n = t.len();
    if s.shape() != (n, n) || s_ref.shape() != (n, n) || t_ref.len() != n {
        return None;
    }
    fn extend(s: &Mat, t: &[C64], s_ref: &Mat, t_ref: &[C64], tol: f64, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let a = perm.len();
        if a == t.len() {
            return true;
        }
        for cand in 0..t.len() {
            if used[cand] || (t[cand] - t_ref[a]).norm() > tol || (s[(cand, cand)] - s_ref[(a, a)]).norm() > tol {
                continue;
            }
            if (0..a).any(|b| (s[(cand, perm[b])] - s_ref[(a, b)]).norm() > tol) {
                continue;
            }
            perm.push(cand);
            used[cand] = true;
            if extend(s, t, s_ref, t_ref, tol, perm, used) {
                return true;
            }
            perm.pop();
            used[cand] = false;
        }
        false
    }
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if extend(s, t, s_ref, t_ref, tol, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{all_builtins, builtin_category};
    use crate::linalg::max_diff;

    fn fib() -> FusionCategory {
        builtin_category("fibonacci", &[]).unwrap()
    }

    #[test]
    fn trivial_center() {
        let cat = builtin_category("trivial", &[]).unwrap();
        let c = center_simples(&cat).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.objects()[0].qdim, re(1.0));
        let md = c.modular_data().unwrap();
        assert_eq!(md.s_tilde, Mat::from_element(1, 1, re(1.0)));
        assert_eq!(md.twists, vec![re(1.0)]);
        assert_eq!(md.mu_z, re(1.0));
        assert_eq!(c.verify_killing(0).unwrap(), 0.0);
        let e = &c.objects()[0].half_braiding(0).components[0][0];
        assert_eq!(*e, Morphism::basis_element(&cat, &[0, 0], &[0, 0], 0, 0, 0));
    }

    #[test]
    fn idempotents_decompose_the_identity() {
        for (name, cat) in all_builtins() {
            let c = center_simples(&cat).unwrap();
            let alg = c.algebra();
            let mut sum = alg.zero();
            let mut d2 = re(0.0);
            for a in c.objects() {
                sum = sum.add(&a.idempotent);
                d2 += a.qdim * a.qdim;
                for b in c.objects() {
                    let prod = alg.multiply(&a.idempotent, &b.idempotent).unwrap();
                    let want = if a.index == b.index { a.idempotent.clone() } else { alg.zero() };
                    assert!(prod.distance(&want) < 1e-8, "{name}");
                }
                for n in 0..alg.dim() {
                    let t = TubeElement::basis_vector(alg.dim(), n);
                    let l = alg.multiply(&t, &a.idempotent).unwrap();
                    let r = alg.multiply(&a.idempotent, &t).unwrap();
                    assert!(l.distance(&r) < 1e-8, "{name}: not central");
                }
                let from_mult: C64 = (0..cat.rank()).map(|i| re(a.multiplicities[i] as f64) * cat.qdim(i)).sum();
                assert!((a.qdim - from_mult).norm() < 1e-8, "{name}: qdim {} vs {}", a.qdim, from_mult);
            }
            assert!(sum.distance(&alg.identity()) < 1e-8, "{name}");
            let mu = cat.mu();
            assert!((d2 - mu * mu).norm() < 1e-8, "{name}");
            assert!(c.objects()[0].idempotent.distance(&unit_projector(alg)) < 1e-12, "{name}");
        }
    }

    #[test]
    fn half_braidings_compose_and_twists_agree() {
        for (name, cat) in all_builtins() {
            let c = center_simples(&cat).unwrap();
            for o in c.objects() {
                let res = c.half_braiding_residual(o.index).unwrap();
                assert!(res < 1e-8, "{name} object {}: {res:e}", o.index);
                let rib = c.ribbon_twist(o.index).unwrap();
                assert!((rib - o.twist).norm() < 1e-8, "{name}: ribbon {rib} vs Dehn {}", o.twist);
                assert!((o.twist.norm() - 1.0).abs() < 1e-8, "{name}");
            }
        }
    }

    #[test]
    fn unit_has_trivial_half_braiding() {
        let cat = fib();
        let c = center_simples(&cat).unwrap();
        let unit = &c.objects()[0];
        assert_eq!(unit.slots, vec![0]);
        for g in 0..cat.rank() {
            let e = &unit.half_braiding(g).components[0][0];
            assert!(e.distance(&Morphism::basis_element(&cat, &[0, g], &[g, 0], g, 0, 0)) < 1e-12);
        }
    }

    /// Toric code data: simples `(a, χ)`, `θ = χ(a)`, `S̃ = χ(b) ψ(a)`.
    fn toric_code() -> (Mat, Vec<C64>) {
        let chi = |c: usize, g: usize| if (c * g).is_multiple_of(2) { 1.0 } else { -1.0 };
        let objs = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let s = Mat::from_fn(4, 4, |x, y| {
            let ((a, c), (b, d)) = (objs[x], objs[y]);
            re(chi(c, b) * chi(d, a))
        });
        let t = objs.iter().map(|&(a, c)| re(chi(c, a))).collect();
        (s, t)
    }

    #[test]
    fn vec_z2_center_is_the_toric_code() {
        let cat = builtin_category("vec_zn", &[2, 0]).unwrap();
        let c = center_simples(&cat).unwrap();
        assert_eq!(c.rank(), 4);
        let md = c.modular_data().unwrap();
        for d in &md.dims {
            assert!((d - re(1.0)).norm() < 1e-12);
        }
        assert!((md.mu_z - re(4.0)).norm() < 1e-12);
        let (s, t) = toric_code();
        assert!(match_modular_data(&md.s_tilde, &md.twists, &s, &t, 1e-8).is_some());
        // Half-braidings are characters of Z/2 on a single summand.
        for o in c.objects() {
            assert_eq!(o.slots.len(), 1);
            let a = o.slots[0];
            let mut chi = [re(0.0); 2];
            for g in 0..2 {
                let e = &o.half_braiding(g).components[0][0];
                chi[g] = e.blocks[(a + g) % 2][(0, 0)];
                assert!((chi[g].norm() - 1.0).abs() < 1e-12 && chi[g].im.abs() < 1e-12);
            }
            assert!((chi[0] - re(1.0)).norm() < 1e-12);
            assert!((o.twist - chi[a]).norm() < 1e-12);
        }
    }

    /// `θ_a = Σ_c (d_c / d_a) R^{aa}_c` and `S̃_{ab} = Σ_c N_{a*b}^c θ_c d_c / (θ_a θ_b)`
    /// computed from the R-symbols of a braided multiplicity-free category.
    fn braided_modular_data(cat: &FusionCategory) -> (Mat, Vec<C64>) {
        let r = cat.rank();
        let theta: Vec<C64> = (0..r)
            .map(|a| (0..r).filter(|&c| cat.n(a, a, c) > 0).map(|c| cat.qdim(c) / cat.qdim(a) * cat.r(a, a, c, 0, 0).unwrap()).sum())
            .collect();
        let s = Mat::from_fn(r, r, |a, b| {
            (0..r).map(|c| re(cat.n(cat.dual(a), b, c) as f64) * theta[c] * cat.qdim(c)).sum::<C64>() / (theta[a] * theta[b])
        });
        (s, theta)
    }

    #[test]
    fn fibonacci_center_is_fib_times_reverse() {
        let cat = fib();
        let c = center_simples(&cat).unwrap();
        let md = c.modular_data().unwrap();
        assert_eq!(md.rank_z, 4);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut dims: Vec<f64> = md.dims.iter().map(|d| d.re).collect();
        dims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (d, w) in dims.iter().zip([1.0, phi, phi, phi * phi]) {
            assert!((d - w).abs() < 1e-9);
        }
        let (s, t) = braided_modular_data(&cat);
        assert!((s[(1, 1)] - re(-1.0)).norm() < 1e-12 && (s[(0, 1)] - re(phi)).norm() < 1e-12);
        let tau = t[1];
        assert!((tau - crate::linalg::cis(4.0 * core::f64::consts::PI / 5.0)).norm() < 1e-12 || (tau - crate::linalg::cis(-4.0 * core::f64::consts::PI / 5.0)).norm() < 1e-12);
        let sz = s.kronecker(&s.conjugate());
        let tz: Vec<C64> = (0..4).map(|x| t[x / 2] * t[x % 2].conj()).collect();
        assert!(match_modular_data(&md.s_tilde, &md.twists, &sz, &tz, 1e-7).is_some());
        assert!((md.mu_z - cat.mu() * cat.mu()).norm() < 1e-7);
    }

    #[test]
    fn modular_relations_for_every_builtin() {
        for (name, cat) in all_builtins() {
            let md = modular_data(&cat).unwrap();
            md.check(1e-7).unwrap();
            assert!((md.s_tilde[(0, 0)] - re(1.0)).norm() < 1e-12, "{name}");
            let mu = cat.mu();
            let conj = md.charge_conjugation().unwrap();
            let c = Mat::from_fn(md.rank_z, md.rank_z, |a, b| if conj[a] == b { re(1.0) } else { re(0.0) });
            assert!(max_diff(&(&md.s_tilde * &md.s_tilde), &(c * mu * mu)) < 1e-7, "{name}");
            let id = Mat::identity(md.rank_z, md.rank_z);
            assert!(max_diff(&(&md.s_tilde * md.s_tilde.conjugate()), &(id * mu * mu)) < 1e-7, "{name}");
            assert!(md.modular_relation_defect() < 1e-7, "{name}");
            assert!(md.verlinde_defect() < 1e-6, "{name}");
            assert!((md.gauss_sum() - mu).norm() < 1e-7, "{name}: Gauss sum {}", md.gauss_sum());
            assert!(md.s_tilde.clone().lu().determinant().norm() > 1e-6, "{name}");
        }
    }

    #[test]
    fn killing_property() {
        for (name, cat) in all_builtins() {
            let c = center_simples(&cat).unwrap();
            for i in 0..cat.rank() {
                let d = c.verify_killing(i).unwrap();
                assert!(d < 1e-9, "{name} simple {i}: {d:e}");
            }
            assert!(c.verify_killing(cat.rank()).is_err());
        }
    }

    #[test]
    fn ordering_is_deterministic() {
        let a = modular_data(&fib()).unwrap();
        let b = modular_data(&fib()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn permutation_matching() {
        let (s, t) = toric_code();
        let perm = [2usize, 0, 3, 1];
        let sp = Mat::from_fn(4, 4, |a, b| s[(perm[a], perm[b])]);
        let tp: Vec<C64> = perm.iter().map(|&a| t[a]).collect();
        let found = match_modular_data(&s, &t, &sp, &tp, 1e-12).unwrap();
        for a in 0..4 {
            assert_eq!(t[found[a]], tp[a]);
            for b in 0..4 {
                assert_eq!(s[(found[a], found[b])], sp[(a, b)]);
            }
        }
        let mut bad = tp.clone();
        bad[0] = re(-1.0);
        bad[1] = re(-1.0);
        assert!(match_modular_data(&s, &t, &sp, &bad, 1e-12).is_none());
    }
}
