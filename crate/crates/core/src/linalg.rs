//! Small dense complex linear algebra helpers on top of nalgebra.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

/// Complex scalar used throughout the library.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type Mat = DMatrix<C64>;

/// Shorthand for a real complex number.
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Complex number `exp(i * theta)`.
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Largest entry modulus, 0 for empty matrices.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`.
pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Orthonormal basis (as columns) of the null space of `m`.
///
/// The row space is found with [`column_space`] and completed to an
/// orthonormal basis of the domain with standard basis vectors.
pub fn nullspace(m: &Mat, tol: f64) -> Mat {
    let cols = m.ncols();
    if cols == 0 {
        return Mat::zeros(0, 0);
    }
    let row_space = column_space(&m.adjoint(), tol);
    let mut basis: Vec<DVector<C64>> = row_space.column_iter().map(|c| c.into_owned()).collect();
    let r = basis.len();
    for e in 0..cols {
        if basis.len() == cols {
            break;
        }
        let mut v = DVector::<C64>::zeros(cols);
        v[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in &basis {
                let p = q.dotc(&v);
                v -= q * p;
            }
        }
        let n = v.norm();
        if n > 0.5 {
            basis.push(v / C64::new(n, 0.0));
        }
    }
    let mut out = Mat::zeros(cols, basis.len() - r);
    for (c, v) in basis[r..].iter().enumerate() {
        out.set_column(c, v);
    }
    out
}

/// Unit right singular vector of `m` for its smallest singular value.
pub fn least_singular_vector(m: &Mat) -> Mat {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = Mat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut best = 0;
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] < svd.singular_values[best] {
            best = i;
        }
    }
    Mat::from_fn(cols, 1, |r, _| v_t[(best, r)].conj())
}

/// Numerical rank of `m`, as the size of its [`column_space`].
pub fn rank(m: &Mat, tol: f64) -> usize {
    column_space(m, tol).ncols()
}

/// Orthonormal basis (as columns) of the column space of `m`.
///
/// Pivoted Gram–Schmidt with reorthogonalization; a residual column counts as
/// zero once its norm drops below `tol * max(1, largest column norm)`.
pub fn column_space(m: &Mat, tol: f64) -> Mat {
    let rows = m.nrows();
    let mut residual: Vec<DVector<C64>> = m.column_iter().map(|c| c.into_owned()).collect();
    let scale = residual.iter().fold(0.0f64, |a, c| a.max(c.norm())).max(1.0);
    let cutoff = tol * scale;
    let mut basis: Vec<DVector<C64>> = Vec::new();
    loop {
        let mut best = None;
        let mut best_norm = cutoff;
        for (i, c) in residual.iter().enumerate() {
            let n = c.norm();
            if n > best_norm {
                best_norm = n;
                best = Some(i);
            }
        }
        let Some(i) = best else { break };
        let mut q = residual.swap_remove(i);
        for b in &basis {
            let p = b.dotc(&q);
            q -= b * p;
        }
        let n = q.norm();
        if n <= cutoff {
            continue;
        }
        let q = q / C64::new(n, 0.0);
        for c in residual.iter_mut() {
            let p = q.dotc(c);
            *c -= &q * p;
        }
        basis.push(q);
        if basis.len() == rows {
            break;
        }
    }
    let mut out = Mat::zeros(rows, basis.len());
    for (c, v) in basis.iter().enumerate() {
        out.set_column(c, v);
    }
    out
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &Mat) -> Option<Mat> {
    if m.nrows() == 0 {
        return Some(Mat::zeros(0, 0));
    }
    m.clone().lu().try_inverse()
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues(m: &Mat) -> Option<Vec<C64>> {
    if m.nrows() == 0 {
        return Some(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-14, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Random complex number with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random complex matrix with entries from [`random_c64`].
pub fn random_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| random_c64(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let m = Mat::from_row_slice(2, 3, &[re(1.0), re(2.0), re(3.0), re(2.0), re(4.0), re(6.0)]);
        let k = nullspace(&m, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&m * &k)) < 1e-12);
        assert_eq!(rank(&m, 1e-12), 1);
        assert_eq!(column_space(&m, 1e-12).ncols(), 1);
    }

    #[test]
    fn schur_eigenvalues_of_complex_matrix() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = random_mat(&mut rng, 4, 4);
        let pinv = inverse(&p).unwrap();
        let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![
            re(1.0),
            C64::new(0.0, 2.0),
            re(-3.0),
            C64::new(1.0, 1.0)
        ]));
        let m = &p * d * pinv;
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        let want = [re(-3.0), C64::new(0.0, 2.0), re(1.0), C64::new(1.0, 1.0)];
        for (a, b) in ev.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }
}
