//! Built-in example categories.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fusion::{CategoryData, FKey, FusionCategory, RKey};
use crate::linalg::{cis, re, C64};

/// Names accepted by [`builtin_category`].
pub const BUILTIN_NAMES: [&str; 5] = ["trivial", "vec_zn", "fibonacci", "ising", "su2_level"];

/// Constructs a named built-in category.
///
/// * `trivial`: the unit category.
/// * `vec_zn` with params `[n, p]`: `Z/n`-graded vector spaces twisted by the
///   3-cocycle `ω(a,b,c) = exp(2πi p a (b + c - [b+c mod n]) / n²)`.
/// * `fibonacci`, `ising`: with R-symbols.
/// * `su2_level` with params `[k]`: the `k+1` integrable spins at
///   `q = exp(iπ/(k+2))` with quantum 6j F-symbols.
pub fn builtin_category(name: &str, params: &[i64]) -> Result<FusionCategory> {
    match name {
        "trivial" => {
            expect_params(name, params, 0)?;
            trivial()
        }
        "vec_zn" => {
            expect_params(name, params, 2)?;
            if params[0] < 1 {
                return Err(Error::InvalidParams(format!("vec_zn needs n >= 1, got {}", params[0])));
            }
            vec_zn(params[0] as usize, params[1])
        }
        "fibonacci" => {
            expect_params(name, params, 0)?;
            fibonacci()
        }
        "ising" => {
            expect_params(name, params, 0)?;
            ising()
        }
        "su2_level" => {
            expect_params(name, params, 1)?;
            if params[0] < 1 {
                return Err(Error::InvalidParams(format!("su2_level needs k >= 1, got {}", params[0])));
            }
            su2_level(params[0] as usize)
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Every built-in category with its canonical reference name
/// (`trivial`, `vec_z{n}:{p}`, `fibonacci`, `ising`, `su2_{k}`).
pub fn all_builtins() -> Vec<(String, FusionCategory)> {
    let mut out = Vec::new();
    out.push(("trivial".into(), builtin_category("trivial", &[]).expect("built-in")));
    for n in 2..=4 {
        for p in 0..n {
            out.push((format!("vec_z{n}:{p}"), builtin_category("vec_zn", &[n, p]).expect("built-in")));
        }
    }
    out.push(("fibonacci".into(), builtin_category("fibonacci", &[]).expect("built-in")));
    out.push(("ising".into(), builtin_category("ising", &[]).expect("built-in")));
    for k in 1..=3 {
        out.push((format!("su2_{k}"), builtin_category("su2_level", &[k]).expect("built-in")));
    }
    out
}

fn expect_params(name: &str, params: &[i64], n: usize) -> Result<()> {
    if params.len() == n {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} takes {n} parameters, got {}", params.len())))
    }
}

/// Fills every admissible multiplicity-free F-symbol from a closure.
fn fill_mf_f(data: &mut CategoryData, f: impl Fn(usize, usize, usize, usize, usize, usize) -> C64) {
    let r = data.rank;
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                for d in 0..r {
                    for e in 0..r {
                        if data.fusion_at(a, b, e) == 0 || data.fusion_at(e, c, d) == 0 {
                            continue;
                        }
                        for g in 0..r {
                            if data.fusion_at(b, c, g) == 0 || data.fusion_at(a, g, d) == 0 {
                                continue;
                            }
                            let v = f(a, b, c, d, e, g);
                            let key = FKey { a, b, c, d, e, alpha: 0, beta: 0, f: g, gamma: 0, delta: 0 };
                            data.f_symbols.insert(key, v);
                        }
                    }
                }
            }
        }
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn trivial() -> Result<FusionCategory> {
    let mut data = CategoryData::new(1);
    data.labels = labels(&["1"]);
    data.set_fusion(0, 0, 0, 1);
    FusionCategory::new(data)
}

fn vec_zn(n: usize, p: i64) -> Result<FusionCategory> {
    let mut data = CategoryData::new(n);
    data.dual = (0..n).map(|a| (n - a) % n).collect();
    for a in 0..n {
        for b in 0..n {
            data.set_fusion(a, b, (a + b) % n, 1);
        }
    }
    let nn = n as f64;
    let pp = p.rem_euclid(n as i64) as f64;
    fill_mf_f(&mut data, |a, b, c, _, _, _| {
        let carry = (b + c - (b + c) % n) as f64;
        cis(2.0 * PI * pp * (a as f64) * carry / (nn * nn))
    });
    data.qdim = Some((0..n).map(|_| re(1.0)).collect());
    FusionCategory::new(data)
}

fn fibonacci() -> Result<FusionCategory> {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut data = CategoryData::new(2);
    data.labels = labels(&["1", "tau"]);
    data.set_fusion(0, 0, 0, 1);
    data.set_fusion(0, 1, 1, 1);
    data.set_fusion(1, 0, 1, 1);
    data.set_fusion(1, 1, 0, 1);
    data.set_fusion(1, 1, 1, 1);
    fill_mf_f(&mut data, |a, b, c, d, e, f| {
        if (a, b, c, d) == (1, 1, 1, 1) {
            match (e, f) {
                (0, 0) => re(1.0 / phi),
                (1, 1) => re(-1.0 / phi),
                _ => re(1.0 / phi.sqrt()),
            }
        } else {
            re(1.0)
        }
    });
    data.qdim = Some(alloc::vec![re(1.0), re(phi)]);
    let mut r = BTreeMap::new();
    let mut put = |a, b, c, v| {
        r.insert(RKey { a, b, c, mu: 0, nu: 0 }, v);
    };
    put(0, 0, 0, re(1.0));
    put(0, 1, 1, re(1.0));
    put(1, 0, 1, re(1.0));
    put(1, 1, 0, cis(-4.0 * PI / 5.0));
    put(1, 1, 1, cis(3.0 * PI / 5.0));
    data.r_symbols = Some(r);
    FusionCategory::new(data)
}

fn ising() -> Result<FusionCategory> {
    let s2 = 2.0f64.sqrt();
    let mut data = CategoryData::new(3);
    data.labels = labels(&["1", "sigma", "psi"]);
    let rules = [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 0, 1), (2, 0, 2), (1, 1, 0), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 2, 0)];
    for (a, b, c) in rules {
        data.set_fusion(a, b, c, 1);
    }
    fill_mf_f(&mut data, |a, b, c, d, e, f| match (a, b, c, d) {
        (1, 1, 1, 1) => {
            if e == 2 && f == 2 {
                re(-1.0 / s2)
            } else {
                re(1.0 / s2)
            }
        }
        (1, 2, 1, 2) | (2, 1, 2, 1) => re(-1.0),
        _ => re(1.0),
    });
    data.qdim = Some(alloc::vec![re(1.0), re(s2), re(1.0)]);
    let mut r = BTreeMap::new();
    let mut put = |a, b, c, v| {
        r.insert(RKey { a, b, c, mu: 0, nu: 0 }, v);
    };
    for x in 0..3 {
        put(0, x, x, re(1.0));
        if x != 0 {
            put(x, 0, x, re(1.0));
        }
    }
    put(1, 1, 0, cis(-PI / 8.0));
    put(1, 1, 2, cis(3.0 * PI / 8.0));
    put(1, 2, 1, C64::new(0.0, -1.0));
    put(2, 1, 1, C64::new(0.0, -1.0));
    put(2, 2, 0, re(-1.0));
    data.r_symbols = Some(r);
    FusionCategory::new(data)
}

/// Quantum integer `[n]` at `q = exp(iπ/(k+2))`.
fn qint(n: i64, k: usize) -> f64 {
    let x = PI / (k as f64 + 2.0);
    libm_sin(n as f64 * x) / libm_sin(x)
}

fn libm_sin(x: f64) -> f64 {
    num_traits::Float::sin(x)
}

fn qfact(n: i64, k: usize) -> f64 {
    (1..=n).map(|m| qint(m, k)).product()
}

/// Admissibility of doubled spins `(a, b, c)` at level `k`.
fn su2_admissible(a: usize, b: usize, c: usize, k: usize) -> bool {
    let (a, b, c) = (a as i64, b as i64, c as i64);
    c <= a + b && a <= b + c && b <= a + c && (a + b + c) % 2 == 0 && a + b + c <= 2 * k as i64
}

fn triangle_coeff(a: i64, b: i64, c: i64, k: usize) -> f64 {
    let num = qfact((a + b - c) / 2, k) * qfact((a - b + c) / 2, k) * qfact((-a + b + c) / 2, k);
    num_traits::Float::sqrt(num / qfact((a + b + c) / 2 + 1, k))
}

/// Quantum Racah 6j symbol `{j1 j2 j3; j4 j5 j6}` in doubled spins.
fn q6j(j: [usize; 6], k: usize) -> f64 {
    let [j1, j2, j3, j4, j5, j6] = j.map(|x| x as i64);
    let tri = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    let pref: f64 = tri.iter().map(|&(a, b, c)| triangle_coeff(a, b, c, k)).product();
    let alphas: Vec<i64> = tri.iter().map(|&(a, b, c)| (a + b + c) / 2).collect();
    let betas = [(j1 + j2 + j4 + j5) / 2, (j2 + j3 + j5 + j6) / 2, (j3 + j1 + j6 + j4) / 2];
    let zmin = *alphas.iter().max().unwrap();
    let zmax = *betas.iter().min().unwrap();
    let mut sum = 0.0;
    for z in zmin..=zmax {
        let mut den = 1.0;
        for &al in &alphas {
            den *= qfact(z - al, k);
        }
        for &be in &betas {
            den *= qfact(be - z, k);
        }
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * qfact(z + 1, k) / den;
    }
    pref * sum
}

fn su2_level(k: usize) -> Result<FusionCategory> {
    let r = k + 1;
    let mut data = CategoryData::new(r);
    data.labels = (0..r)
        .map(|i| if i % 2 == 0 { format!("{}", i / 2) } else { format!("{i}/2") })
        .collect();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                if su2_admissible(a, b, c, k) {
                    data.set_fusion(a, b, c, 1);
                }
            }
        }
    }
    fill_mf_f(&mut data, |a, b, c, d, e, f| {
        let sign = if ((a + b + c + d) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let norm = num_traits::Float::sqrt(qint(e as i64 + 1, k) * qint(f as i64 + 1, k));
        re(sign * norm * q6j([a, b, e, c, d, f], k))
    });
    data.qdim = Some((0..r).map(|i| re(qint(i as i64 + 1, k))).collect());
    FusionCategory::new(data)
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn every_builtin_verifies() {
        for (name, cat) in all_builtins() {
            let rep = cat.verify();
            assert!(rep.pass, "{name}: {rep:?}");
            assert!(rep.pentagon_residual < 1e-9, "{name}");
        }
    }

    #[test]
    fn braided_builtins_satisfy_hexagons() {
        for name in ["fibonacci", "ising"] {
            let cat = builtin_category(name, &[]).unwrap();
            let h = cat.hexagon_residual().unwrap();
            assert!(h < 1e-12, "{name}: {h}");
        }
    }

    #[test]
    fn trivial_residuals_exactly_zero() {
        let rep = builtin_category("trivial", &[]).unwrap().verify();
        assert_eq!(rep.pentagon_residual, 0.0);
        assert_eq!(rep.dim_defect, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn su2_level_two_dimensions() {
        let cat = builtin_category("su2_level", &[2]).unwrap();
        let s = 2.0f64.sqrt();
        for (i, want) in [1.0, s, 1.0].iter().enumerate() {
            // Oracle: d_i = sin((i+1)π/4) / sin(π/4).
            let oracle = ((i as f64 + 1.0) * PI / 4.0).sin() / (PI / 4.0).sin();
            assert!((cat.qdim(i).re - oracle).abs() < 1e-12);
            assert!((cat.qdim(i).re - want).abs() < 1e-12);
        }
        assert!((cat.mu() - re(4.0)).norm() < 1e-12);
    }

    #[test]
    fn fibonacci_f_matrix_solves_pentagon_scan() {
        // Independent oracle: scan the orthogonal involutions [[x, y], [y, -x]] with
        // y = sqrt(1 - x^2) for F^{τττ}_τ and keep the pentagon minimizer.
        let base = builtin_category("fibonacci", &[]).unwrap();
        let with_x = |x: f64| {
            let y = (1.0 - x * x).sqrt();
            let mut cat = base.clone();
            for (e, f, v) in [(0, 0, x), (0, 1, y), (1, 0, y), (1, 1, -x)] {
                let key = FKey { a: 1, b: 1, c: 1, d: 1, e, alpha: 0, beta: 0, f, gamma: 0, delta: 0 };
                cat = cat.with_f_symbol(key, re(v)).unwrap();
            }
            cat.pentagon_residual()
        };
        let (mut best, mut best_x) = (f64::INFINITY, 0.0);
        for n in 1..2000 {
            let x = n as f64 / 2000.0;
            let r = with_x(x);
            if r < best {
                best = r;
                best_x = x;
            }
        }
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((best_x - 1.0 / phi).abs() < 1e-3, "minimizer {best_x}");
        assert!(with_x(1.0 / phi) < 1e-12);
        assert!(base.pentagon_residual() < 1e-12);
    }

    #[test]
    fn fibonacci_global_dimension() {
        let cat = builtin_category("fibonacci", &[]).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((cat.mu().re - (1.0 + phi * phi)).abs() < 1e-12);
        assert!((cat.mu().re - 3.618_033_988_7).abs() < 1e-9);
    }

    #[test]
    fn vec_z2_trivial_cocycle_is_all_ones() {
        let cat = builtin_category("vec_zn", &[2, 0]).unwrap();
        assert_eq!(cat.rank(), 2);
        assert!(cat.f_symbols().values().all(|v| *v == re(1.0)));
        assert_eq!(cat.mu(), re(2.0));
    }

    #[test]
    fn perturbed_fibonacci_fails_pentagon() {
        let cat = builtin_category("fibonacci", &[]).unwrap();
        let key = FKey { a: 1, b: 1, c: 1, d: 1, e: 0, alpha: 0, beta: 0, f: 0, gamma: 0, delta: 0 };
        let bad = cat.with_f_symbol(key, cat.f(&key) + 0.01).unwrap();
        let rep = bad.verify();
        assert!(!rep.pass);
        assert!(rep.pentagon_residual > 1e-3);
    }

    #[test]
    fn fs_signs_of_half_integer_spins() {
        let cat = builtin_category("su2_level", &[3]).unwrap();
        for i in 0..4 {
            let want = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert!((cat.fs_sign(i) - re(want)).norm() < 1e-12, "spin {i}/2");
        }
        let z2 = builtin_category("vec_zn", &[2, 1]).unwrap();
        assert!((z2.fs_sign(1) - re(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn unknown_and_invalid() {
        assert!(matches!(builtin_category("nope", &[]), Err(Error::UnknownName(_))));
        assert!(matches!(builtin_category("su2_level", &[0]), Err(Error::InvalidParams(_))));
    }
}
