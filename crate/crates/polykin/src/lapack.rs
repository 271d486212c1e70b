//! Thin safe wrappers over the system LAPACK routines used by the crate:
//! symmetric and general eigen-decompositions plus the tridiagonal solver
//! behind the Golub-Welsch quadrature construction.

use ndarray::prelude::*;
use num_complex::Complex64;

use crate::error::{Error, Result};

unsafe extern "C" {
    fn dsyevd_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn zgeev_(
        jobvl: *const u8,
        jobvr: *const u8,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const i32,
        vr: *mut Complex64,
        ldvr: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
    fn dstev_(
        jobz: *const u8,
        n: *const i32,
        d: *mut f64,
        e: *mut f64,
        z: *mut f64,
        ldz: *const i32,
        work: *mut f64,
        info: *mut i32,
    );
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// real symmetric matrix.
pub fn sym_eig(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Usage("sym_eig requires a square matrix".into()));
    }
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    // Column-major layout; symmetric input makes the transpose immaterial.
    let mut buf: Vec<f64> = a.t().iter().cloned().collect();
    let mut w = vec![0.0f64; n];
    let ni = n as i32;
    let lwork = (1 + 6 * n + 2 * n * n) as i32;
    let liwork = (3 + 5 * n) as i32;
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let mut info = 0i32;
    unsafe {
        dsyevd_(
            b"V".as_ptr(),
            b"L".as_ptr(),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Numeric(format!("dsyevd failed with info = {info}")));
    }
    // buf is column-major: column j = eigenvector j.
    let vecs = Array2::from_shape_vec((n, n), buf)
        .map_err(|e| Error::Numeric(e.to_string()))?
        .t()
        .to_owned();
    Ok((Array1::from_vec(w), vecs))
}

/// Eigenvalues only of a real symmetric matrix, ascending.
pub fn sym_eigvals(a: &Array2<f64>) -> Result<Array1<f64>> {
    Ok(sym_eig(a)?.0)
}

/// Eigenvalues of a general complex matrix.
pub fn complex_eigvals(a: &Array2<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Usage("complex_eigvals requires a square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut buf: Vec<Complex64> = a.t().iter().cloned().collect();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let ni = n as i32;
    let lwork = (4 * n.max(1)) as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;
    unsafe {
        zgeev_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &ni,
            std::ptr::null_mut(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Numeric(format!("zgeev failed with info = {info}")));
    }
    Ok(w)
}

/// Eigen-decomposition of a symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e`. Returns (eigenvalues ascending, first row of the
/// orthonormal eigenvector matrix), which is what Golub-Welsch needs.
pub fn tridiag_eig_first_row(d: &[f64], e: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if e.len() + 1 != n {
        return Err(Error::Usage("tridiag: off-diagonal must have length n-1".into()));
    }
    let mut dd = d.to_vec();
    let mut ee = e.to_vec();
    ee.push(0.0);
    let ni = n as i32;
    let mut z = vec![0.0f64; n * n];
    let mut work = vec![0.0f64; (2 * n).max(1)];
    let mut info = 0i32;
    unsafe {
        dstev_(
            b"V".as_ptr(),
            &ni,
            dd.as_mut_ptr(),
            ee.as_mut_ptr(),
            z.as_mut_ptr(),
            &ni,
            work.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Numeric(format!("dstev failed with info = {info}")));
    }
    // z column-major: first row entries are z[j * n].
    let first_row: Vec<f64> = (0..n).map(|j| z[j * n]).collect();
    Ok((dd, first_row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sym_eig_2x2() {
        let a = array![[2.0, 1.0], [1.0, 3.0]];
        let (w, v) = sym_eig(&a).unwrap();
        let s5 = 5.0f64.sqrt();
        assert_relative_eq!(w[0], (5.0 - s5) / 2.0, max_relative = 1e-13);
        assert_relative_eq!(w[1], (5.0 + s5) / 2.0, max_relative = 1e-13);
        // A v = w v for each column
        for j in 0..2 {
            let col = v.column(j);
            let av = a.dot(&col);
            for i in 0..2 {
                assert_relative_eq!(av[i], w[j] * col[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn complex_eig_rotation() {
        let a = array![
            [Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
        ];
        let mut w = complex_eigvals(&a).unwrap();
        w.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert_relative_eq!(w[0].im, -2.0f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(w[1].im, 2.0f64.sqrt(), max_relative = 1e-13);
        assert!(w[0].re.abs() < 1e-13 && w[1].re.abs() < 1e-13);
    }

    #[test]
    fn tridiag_small() {
        // Jacobi matrix of Gauss-Legendre n=2: nodes +-1/sqrt(3), weights 1 each
        let d = [0.0, 0.0];
        let e = [1.0 / 3.0f64.sqrt()];
        let (nodes, first) = tridiag_eig_first_row(&d, &e).unwrap();
        assert_relative_eq!(nodes[1], 1.0 / 3.0f64.sqrt(), max_relative = 1e-13);
        // weight_j = mu0 * first_row_j^2 with mu0 = 2
        assert_relative_eq!(2.0 * first[0] * first[0], 1.0, max_relative = 1e-13);
    }
}
