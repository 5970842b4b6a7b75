//! Generalized Frobenius–Schur indicators of center simples.
//!
//! For a center simple `(X, e_X)`, an object `V` and `(m, ℓ) ∈ ℤ²`, the map
//! `E^{(m,ℓ)}` on `hom(X, V^m)` sends `f` to
//! `J_{m,ℓ} ∘ (id ⊗ f ⊗ id) ∘ (e_X(V^{−ℓ}) ⊗ id) ∘ (id ⊗ coev)`, and the
//! indicator `ν_{(m,ℓ)}^{(X,e_X)}(V)` is its trace.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::center::{Center, ModularData};
use crate::error::{Error, Result};
use crate::fusion::FusionCategory;
use crate::linalg::{re, C64};
use crate::morphism::{paths_by_channel, strand_cap, strand_cup, strand_word, Morphism, Strand, Word};

/// One indicator evaluation request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorQuery {
    /// Index of the center simple.
    pub center_object: usize,
    /// The object `V` as a tensor word of simples.
    pub object: Word,
    pub m: i64,
    pub l: i64,
}

/// Strands of `V^n`: `n` copies of `V` upward, or `|n|` copies of `V*` for `n < 0`.
fn power_strands(v: &[usize], n: i64) -> Vec<Strand> {
    let mut out = Vec::new();
    for _ in 0..n.unsigned_abs() {
        if n > 0 {
            out.extend(v.iter().map(|&x| Strand::up(x)));
        } else {
            out.extend(v.iter().rev().map(|&x| Strand::down(x)));
        }
    }
    out
}

fn reverse_flip(s: &[Strand]) -> Vec<Strand> {
    s.iter().rev().map(|x| x.flip()).collect()
}

/// `[] → A ⊗ A*` as nested cups, for the strand list `A`.
fn nested_cup(cat: &FusionCategory, a: &[Strand]) -> Morphism {
    let mut m = Morphism::identity(cat, &[]);
    for k in 0..a.len() {
        let left = strand_word(cat, &a[..k]);
        let right = strand_word(cat, &reverse_flip(&a[..k]));
        let cup = strand_cup(cat, a[k]).whisker(cat, &left, &right);
        m = cup.compose(&m).expect("nested cup types");
    }
    m
}

/// `prefix ⊗ A ⊗ A* ⊗ suffix → prefix ⊗ suffix` as nested caps.
fn nested_cap(cat: &FusionCategory, prefix: &[usize], a: &[Strand], suffix: &[usize]) -> Morphism {
    let mut word: Word = prefix.to_vec();
    word.extend(strand_word(cat, a));
    word.extend(strand_word(cat, &reverse_flip(a)));
    word.extend_from_slice(suffix);
    let mut m = Morphism::identity(cat, &word);
    for k in (0..a.len()).rev() {
        let mut left = prefix.to_vec();
        left.extend(strand_word(cat, &a[..k]));
        let mut right = strand_word(cat, &reverse_flip(&a[..k]));
        right.extend_from_slice(suffix);
        let cap = strand_cap(cat, a[k]).whisker(cat, &left, &right);
        m = cap.compose(&m).expect("nested cap types");
    }
    m
}

/// Components `e_X(W)[s → t]: X_s ⊗ W → W ⊗ X_t` of the half-braiding with a word.
fn word_half_braiding(center: &Center, a: usize, w: &[usize]) -> Result<Vec<Vec<Morphism>>> {
    let cat = center.category();
    let o = &center.objects()[a];
    let ns = o.slots.len();
    let mut cur: Vec<Vec<Morphism>> = (0..ns)
        .map(|s| (0..ns).map(|t| {
            if s == t { Morphism::identity(cat, &[o.slots[s]]) } else { Morphism::zero(cat, &[o.slots[s]], &[o.slots[t]]) }
        }).collect())
        .collect();
    // cur[s][t]: X_s ⊗ w[..k] → w[..k] ⊗ X_t
    for (k, &g) in w.iter().enumerate() {
        let mut next = Vec::with_capacity(ns);
        for s in 0..ns {
            let mut row = Vec::with_capacity(ns);
            for t in 0..ns {
                let mut dom = vec![o.slots[s]];
                dom.extend_from_slice(&w[..=k]);
                let mut cod = w[..=k].to_vec();
                cod.push(o.slots[t]);
                let mut acc = Morphism::zero(cat, &dom, &cod);
                for u in 0..ns {
                    let first = cur[s][u].whisker(cat, &[], &[g]);
                    let second = o.half_braidings[g].components[u][t].whisker(cat, &w[..k], &[]);
                    acc = acc.add(&second.compose(&first)?)?;
                }
                row.push(acc);
            }
            next.push(row);
        }
        cur = next;
    }
    Ok(cur)
}

fn check_query(center: &Center, a: usize, v: &[usize]) -> Result<()> {
    if a >= center.rank() {
        return Err(Error::Index(format!("center simple {a} out of range")));
    }
    let r = center.category().rank();
    if let Some(&x) = v.iter().find(|&&x| x >= r) {
        return Err(Error::Index(format!("simple {x} out of range")));
    }
    Ok(())
}

/// `ν_{(m,ℓ)}^{A}(V)` evaluated literally as the trace of `E^{(m,ℓ)}`.
pub fn indicator_direct(center: &Center, a: usize, v: &[usize], m: i64, l: i64) -> Result<C64> {
    check_query(center, a, v)?;
    let cat = center.category();
    let o = &center.objects()[a];
    let wm = strand_word(cat, &power_strands(v, m));
    let a_strands = power_strands(v, -l);
    let a_word = strand_word(cat, &a_strands);
    let b_word = strand_word(cat, &reverse_flip(&a_strands));
    let braid = word_half_braiding(center, a, &a_word)?;
    let cup = nested_cup(cat, &a_strands);
    // J: either close the leading V^{−ℓ} ⊗ V^ℓ or the trailing one.
    let j = if m * l >= 0 {
        nested_cap(cat, &[], &a_strands, &wm)
    } else {
        nested_cap(cat, &wm, &a_strands, &[])
    };
    let mut total = re(0.0);
    for (s, &i) in o.slots.iter().enumerate() {
        let rows = paths_by_channel(cat, &wm)[i].len();
        if rows == 0 {
            continue;
        }
        let lead = cup.whisker(cat, &[i], &[]);
        let braided = braid[s][s].whisker(cat, &[], &b_word).compose(&lead)?;
        for r in 0..rows {
            let f = Morphism::basis_element(cat, &[i], &wm, i, r, 0);
            let placed = f.whisker(cat, &a_word, &b_word);
            let mut full = placed.compose(&braided)?;
            if full.codomain != j.domain {
                // V^{−ℓ} ⊗ V^m ⊗ V^ℓ and the regrouped word agree letter by letter.
                return Err(Error::Mismatch("J domain differs from V^{-l} V^m V^l".into()));
            }
            full = j.compose(&full)?;
            total += full.blocks[i][(r, 0)];
        }
    }
    Ok(total)
}

/// `ν_{(m,ℓ)}^{A}(V)`, reducing `ℓ = −q m + r` with `0 ≤ r < m` to
/// `θ_A^q ν_{(m,r)}^{A}(V)`, and `m < 0` to `ν_{(−m,−ℓ)}^{A}(V*)`.
pub fn indicator(center: &Center, a: usize, v: &[usize], m: i64, l: i64) -> Result<C64> {
    check_query(center, a, v)?;
    if m == 0 {
        return indicator_direct(center, a, v, 0, l);
    }
    if m < 0 {
        let cat = center.category();
        let dual: Word = v.iter().rev().map(|&x| cat.dual(x)).collect();
        return indicator(center, a, &dual, -m, -l);
    }
    let r = l.rem_euclid(m);
    let q = (r - l) / m;
    let theta = center.objects()[a].twist;
    let tq = if q >= 0 { theta.powu(q as u32) } else { (re(1.0) / theta).powu((-q) as u32) };
    Ok(tq * indicator_direct(center, a, v, m, r)?)
}

/// Evaluates a query with [`indicator`].
pub fn evaluate(center: &Center, q: &IndicatorQuery) -> Result<C64> {
    indicator(center, q.center_object, &q.object, q.m, q.l)
}

/// Maximal defects of the `SL₂(ℤ)` equivariance relations.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceReport {
    /// `|ν_{(m,m+ℓ)}^{A}(V) − θ_A⁻¹ ν_{(m,ℓ)}^{A}(V)|`, evaluated without reduction.
    pub t_defect: f64,
    /// `|ν_{(ℓ,−m)}^{A}(V) − μ⁻¹ Σ_B S̃_{B,A*} ν_{(m,ℓ)}^{B}(V)|`.
    pub s_defect: f64,
    /// `|ν_{(m,ℓ)}^{A}(V) − ν_{(−m,−ℓ)}^{A}(V*)|`, evaluated without reduction.
    pub duality_defect: f64,
    /// Defect of the composed action along words of length at most 4 in `𝔰, 𝔱`.
    pub word_defect: f64,
    pub checked: usize,
    pub pass: bool,
}

/// Checks `𝔱`- and `𝔰`-equivariance for all center simples, all simple `V`
/// and all `(m, ℓ)` in the given ranges; passes iff every defect is below `1e-7`.
pub fn equivariance_check(center: &Center, md: &ModularData, m_range: (i64, i64), l_range: (i64, i64)) -> Result<EquivarianceReport> {
    let cat = center.category();
    let nz = center.rank();
    let mu = cat.mu();
    let conj = md.charge_conjugation()?;
    let mut cache: BTreeMap<(usize, usize, i64, i64), C64> = BTreeMap::new();
    let mut nu = |a: usize, v: usize, m: i64, l: i64| -> Result<C64> {
        if let Some(&x) = cache.get(&(a, v, m, l)) {
            return Ok(x);
        }
        let x = indicator(center, a, &[v], m, l)?;
        cache.insert((a, v, m, l), x);
        Ok(x)
    };
    let (mut t_defect, mut s_defect, mut duality_defect) = (0.0f64, 0.0f64, 0.0f64);
    let mut checked = 0;
    for v in 0..cat.rank() {
        for m in m_range.0..=m_range.1 {
            for l in l_range.0..=l_range.1 {
                for a in 0..nz {
                    let theta = center.objects()[a].twist;
                    if m.abs() <= 2 && l.abs() <= 1 && (m + l).abs() <= 2 {
                        let lhs = indicator_direct(center, a, &[v], m, m + l)?;
                        let rhs = indicator_direct(center, a, &[v], m, l)? / theta;
                        t_defect = t_defect.max((lhs - rhs).norm());
                        let dual = indicator_direct(center, a, &[cat.dual(v)], -m, -l)?;
                        duality_defect = duality_defect.max((indicator_direct(center, a, &[v], m, l)? - dual).norm());
                    } else {
                        let lhs = nu(a, v, m, m + l)?;
                        let rhs = nu(a, v, m, l)? / theta;
                        t_defect = t_defect.max((lhs - rhs).norm());
                    }
                    let lhs = nu(a, v, l, -m)?;
                    let mut rhs = re(0.0);
                    for b in 0..nz {
                        rhs += md.s_tilde[(b, conj[a])] * nu(b, v, m, l)?;
                    }
                    s_defect = s_defect.max((lhs - rhs / mu).norm());
                    checked += 1;
                }
            }
        }
    }
    let word_defect = sl2_word_defect(center, md, m_range, l_range, 4)?;
    let pass = t_defect < 1e-7 && s_defect < 1e-7 && duality_defect < 1e-7 && word_defect < 1e-7;
    Ok(EquivarianceReport { t_defect, s_defect, duality_defect, word_defect, checked, pass })
}

/// Largest coordinate reached by a word before it is skipped.
const WORD_BOUND: i64 = 4;

/// Compares `ν_{(m,ℓ)w}` with the composed center action `ρ(w)` applied to
/// `ν_{(m,ℓ)}` for all words `w` of length `1..=max_len` and starts
/// `(m, ℓ) ∈ [−1, 1]²` inside the given ranges.
pub fn sl2_word_defect(center: &Center, md: &ModularData, m_range: (i64, i64), l_range: (i64, i64), max_len: usize) -> Result<f64> {
    let cat = center.category();
    let nz = center.rank();
    let mu = cat.mu();
    let conj = md.charge_conjugation()?;
    let mut worst = 0.0f64;
    for v in 0..cat.rank() {
        let mut cache: BTreeMap<(i64, i64), Vec<C64>> = BTreeMap::new();
        let mut vector = |m: i64, l: i64| -> Result<Vec<C64>> {
            if let Some(x) = cache.get(&(m, l)) {
                return Ok(x.clone());
            }
            let x = (0..nz).map(|a| indicator(center, a, &[v], m, l)).collect::<Result<Vec<_>>>()?;
            cache.insert((m, l), x.clone());
            Ok(x)
        };
        for m0 in m_range.0.max(-1)..=m_range.1.min(1) {
            for l0 in l_range.0.max(-1)..=l_range.1.min(1) {
                let start = vector(m0, l0)?;
                // Depth-first over words; each stack entry carries its point and transported vector.
                let mut stack = vec![((m0, l0), start, 0usize)];
                while let Some(((m, l), vec_here, depth)) = stack.pop() {
                    if depth > 0 {
                        let direct = vector(m, l)?;
                        for a in 0..nz {
                            worst = worst.max((direct[a] - vec_here[a]).norm());
                        }
                    }
                    if depth == max_len {
                        continue;
                    }
                    let t_point = (m, m + l);
                    if t_point.0.abs().max(t_point.1.abs()) <= WORD_BOUND {
                        let moved = (0..nz).map(|a| vec_here[a] / center.objects()[a].twist).collect();
                        stack.push((t_point, moved, depth + 1));
                    }
                    let s_point = (l, -m);
                    let moved = (0..nz)
                        .map(|a| (0..nz).fold(re(0.0), |acc, b| acc + md.s_tilde[(b, conj[a])] * vec_here[b]) / mu)
                        .collect();
                    stack.push((s_point, moved, depth + 1));
                }
            }
        }
    }
    Ok(worst)
}
