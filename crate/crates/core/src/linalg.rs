//! Small dense linear-algebra helpers on complex matrices.

use nalgebra::{DMatrix, DVector};

use crate::C64;

/// Relative singular-value threshold separating rank from noise.
pub const RANK_TOL: f64 = 1e-10;

/// A singular value decomposition `A = U diag(s) V^H` with `s` sorted descending
/// and square unitary factors (`U` is rows x rows, `V` is cols x cols).
pub struct FullSvd {
    pub u: DMatrix<C64>,
    pub s: Vec<f64>,
    pub v: DMatrix<C64>,
}

/// Full SVD: thin factors from nalgebra, completed to unitary matrices.
pub fn full_svd(a: &DMatrix<C64>) -> FullSvd {
    let (r, c) = a.shape();
    let k = r.min(c);
    if k == 0 {
        return FullSvd {
            u: DMatrix::identity(r, r),
            s: Vec::new(),
            v: DMatrix::identity(c, c),
        };
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let u_thin = DMatrix::from_fn(r, k, |i, j| u[(i, order[j])]);
    let v_thin = DMatrix::from_fn(c, k, |i, j| v_t[(order[j], i)].conj());
    FullSvd {
        u: complete_unitary(&u_thin, r),
        s: order.iter().map(|&i| svd.singular_values[i]).collect(),
        v: complete_unitary(&v_thin, c),
    }
}

/// Extends orthonormal columns to a full unitary basis via Gram-Schmidt on
/// the standard basis.
fn complete_unitary(cols: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let mut basis: Vec<DVector<C64>> = (0..cols.ncols())
        .map(|j| cols.column(j).into_owned())
        .collect();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = DVector::<C64>::zeros(n);
        v[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let nv = v.norm();
        if nv > 1e-8 {
            basis.push(v / C64::new(nv, 0.0));
        }
    }
    DMatrix::from_columns(&basis)
}

/// Numerical rank with threshold `RANK_TOL * sigma_max`.
pub fn rank(a: &DMatrix<C64>) -> usize {
    rank_of(&full_svd(a).s)
}

pub(crate) fn rank_of(s: &[f64]) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > RANK_TOL * smax).count()
}

/// Orthonormal basis of the null space (as columns) and the rank.
pub fn null_space(a: &DMatrix<C64>) -> (Vec<DVector<C64>>, usize) {
    let svd = full_svd(a);
    let r = rank_of(&svd.s);
    let basis = (r..a.ncols())
        .map(|j| svd.v.column(j).into_owned())
        .collect();
    (basis, r)
}

/// 2-norm condition number; infinite for singular or empty-rank matrices.
pub fn cond(a: &DMatrix<C64>) -> f64 {
    if a.nrows() == 0 && a.ncols() == 0 {
        return 1.0;
    }
    let s = a.clone().singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn frobenius(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn conj(a: &DMatrix<C64>) -> DMatrix<C64> {
    a.map(|x| x.conj())
}

/// LU inverse, or `None` when the factorization reports singularity.
pub fn inverse(a: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    if a.nrows() == 0 {
        return Some(a.clone());
    }
    a.clone().lu().try_inverse()
}

/// Minimum-norm least-squares solution and the residual `|A x - b|`.
pub fn least_squares(a: &DMatrix<C64>, b: &DVector<C64>) -> (DVector<C64>, f64) {
    let svd = full_svd(a);
    let r = rank_of(&svd.s);
    let mut x = DVector::<C64>::zeros(a.ncols());
    for k in 0..r {
        let coef = svd.u.column(k).dotc(b) / C64::new(svd.s[k], 0.0);
        x += svd.v.column(k) * coef;
    }
    let resid = (a * &x - b).norm();
    (x, resid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, vals: &[f64]) -> DMatrix<C64> {
        DMatrix::from_row_iterator(rows, cols, vals.iter().map(|&v| C64::new(v, 0.0)))
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        for a in [
            m(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.5]),
            m(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.5]),
        ] {
            let svd = full_svd(&a);
            let (r, c) = a.shape();
            let mut s = DMatrix::<C64>::zeros(r, c);
            for (k, &x) in svd.s.iter().enumerate() {
                s[(k, k)] = C64::new(x, 0.0);
            }
            let back = &svd.u * s * svd.v.adjoint();
            assert!(frobenius(&(back - &a)) < 1e-12);
            assert!(frobenius(&(svd.u.adjoint() * &svd.u - DMatrix::identity(r, r))) < 1e-12);
            assert!(frobenius(&(svd.v.adjoint() * &svd.v - DMatrix::identity(c, c))) < 1e-12);
            assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn null_space_of_shift() {
        let a = m(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let (ker, r) = null_space(&a);
        assert_eq!(r, 1);
        assert_eq!(ker.len(), 1);
        assert!(ker[0][0].norm() < 1e-14 && (ker[0][1].norm() - 1.0).abs() < 1e-14);
        let (ker, r) = null_space(&DMatrix::zeros(3, 3));
        assert_eq!((ker.len(), r), (3, 0));
    }

    #[test]
    fn least_squares_exact_system() {
        let a = m(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(3.0, 0.0),
        ]);
        let (x, resid) = least_squares(&a, &b);
        assert!(resid < 1e-13);
        assert!((x[0] - C64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn condition_numbers() {
        assert!((cond(&m(2, 2, &[2.0, 0.0, 0.0, 0.5])) - 4.0).abs() < 1e-12);
        assert!(cond(&m(2, 2, &[1.0, 1.0, 1.0, 1.0])) > 1e15);
    }
}
