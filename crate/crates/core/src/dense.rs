//! Dense materialization, used as a brute-force oracle for the sparse code.

use nalgebra::DMatrix;

use crate::element::{AlgebraElement, Complex64};
use crate::error::{Error, Result};
use crate::signature::{MatrixUnitIndex, Signature};

pub type DenseMatrix = DMatrix<Complex64>;

/// Largest total dimension that will be materialized densely.
pub const DENSE_GUARD: usize = 4096;

pub(crate) fn check_guard(dim: usize) -> Result<()> {
    if dim > DENSE_GUARD {
        return Err(Error::DimensionGuard {
            dim,
            limit: DENSE_GUARD,
        });
    }
    Ok(())
}

/// Kronecker product `A ⊠ B` with `(A⊠B)_{m(i−1)+i', m(j−1)+j'} = A_{ij} B_{i'j'}`,
/// `m = dim B`.
pub fn kron_box(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DenseMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Dense image of `x`, with `dense(E_{j_1k_1}⊗…⊗E_{j_nk_n}) = E_{j_1k_1} ⊠ … ⊠ E_{j_nk_n}`.
pub fn to_dense(x: &AlgebraElement) -> Result<DenseMatrix> {
    let sig = x.signature();
    let dim = sig.total_dim();
    check_guard(dim)?;
    let mut m = DenseMatrix::zeros(dim, dim);
    for (idx, c) in x.terms() {
        m[(sig.flatten(idx.rows()), sig.flatten(idx.cols()))] += c;
    }
    Ok(m)
}

/// Inverse of [`to_dense`]: expands a `∏a_i`-square matrix in matrix units.
pub fn from_dense(sig: Signature, m: &DenseMatrix) -> Result<AlgebraElement> {
    let dim = sig.total_dim();
    if m.shape() != (dim, dim) {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{}, signature {sig} needs {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    let unflatten = |mut flat: usize| -> Vec<usize> {
        let mut out = vec![0; sig.level()];
        for (slot, &d) in sig.dims().iter().enumerate().rev() {
            out[slot] = flat % d;
            flat /= d;
        }
        out
    };
    let mut terms = Vec::new();
    for r in 0..dim {
        for c in 0..dim {
            if m[(r, c)] != Complex64::default() {
                terms.push((
                    MatrixUnitIndex::zero_based(unflatten(r), unflatten(c)),
                    m[(r, c)],
                ));
            }
        }
    }
    Ok(AlgebraElement::from_valid_terms(sig, terms))
}

/// Permutation `P` with `dense(φ_{a,b}(x)) = P · dense(x) · Pᵀ`.
///
/// A dense index over `a·b` is the lexicographic index of the interleaved
/// tuple `(j'_1, j''_1, …, j'_n, j''_n)`; `P` re-sorts it into
/// `(j'_1,…,j'_n, j''_1,…,j''_n)`.
pub fn block_permutation(a: &Signature, b: &Signature) -> Result<DenseMatrix> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch {
            left: a.level(),
            right: b.level(),
        });
    }
    let n = a.level();
    let ab = Signature::product(a, b)?;
    let dim = ab.total_dim();
    check_guard(dim)?;
    let blocked = a.concat(b);
    let mut p = DenseMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; 2 * n];
    for src in 0..dim {
        // digits of src in the interleaved radix (a_1, b_1, …, a_n, b_n)
        let mut rest = src;
        for i in (0..n).rev() {
            digits[n + i] = rest % b.dims()[i];
            rest /= b.dims()[i];
            digits[i] = rest % a.dims()[i];
            rest /= a.dims()[i];
        }
        p[(blocked.flatten(&digits), src)] = Complex64::new(1.0, 0.0);
    }
    Ok(p)
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix (the strictly lower triangle is ignored).
pub(crate) fn hermitian_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coproduct::coproduct;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn diag(v: &[f64]) -> DenseMatrix {
        DenseMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            v.len(),
            v.iter().map(|&x| c(x)),
        ))
    }

    fn sig(d: &[usize]) -> Signature {
        Signature::new(d.to_vec()).unwrap()
    }

    #[test]
    fn worked_box_product() {
        assert_eq!(
            kron_box(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])),
            diag(&[0.0, 1.0, 0.0, 0.0])
        );
        assert_eq!(
            kron_box(&diag(&[0.0, 1.0]), &diag(&[1.0, 0.0])),
            diag(&[0.0, 0.0, 1.0, 0.0])
        );
        assert_eq!(
            kron_box(&DenseMatrix::identity(2, 2), &DenseMatrix::identity(3, 3)),
            DenseMatrix::identity(6, 6)
        );
    }

    #[test]
    fn box_product_index_rule() {
        let a = DenseMatrix::from_fn(2, 2, |i, j| Complex64::new(i as f64 + 1.0, j as f64));
        let b = DenseMatrix::from_fn(3, 3, |i, j| Complex64::new(j as f64, 2.0 * i as f64 - 1.0));
        let k = kron_box(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..3 {
                    for q in 0..3 {
                        assert_eq!(k[(3 * i + p, 3 * j + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn unit_materialization() {
        let x =
            AlgebraElement::matrix_unit(sig(&[4]), MatrixUnitIndex::one_based(&[2], &[2]).unwrap())
                .unwrap();
        assert_eq!(to_dense(&x).unwrap(), diag(&[0.0, 1.0, 0.0, 0.0]));

        let x = AlgebraElement::matrix_unit(
            sig(&[2, 2]),
            MatrixUnitIndex::one_based(&[1, 2], &[2, 1]).unwrap(),
        )
        .unwrap();
        let d = to_dense(&x).unwrap();
        // E_12 ⊠ E_21 has its single 1 at (1-based) row 2, column 3.
        for r in 0..4 {
            for col in 0..4 {
                let want = if (r, col) == (1, 2) { 1.0 } else { 0.0 };
                assert_eq!(d[(r, col)], c(want));
            }
        }

        let x = AlgebraElement::matrix_unit(
            sig(&[2, 2]),
            MatrixUnitIndex::one_based(&[1, 1], &[1, 1]).unwrap(),
        )
        .unwrap();
        assert_eq!(to_dense(&x).unwrap(), diag(&[1.0, 0.0, 0.0, 0.0]));

        assert_eq!(
            to_dense(&AlgebraElement::identity(sig(&[2, 3]))).unwrap(),
            DenseMatrix::identity(6, 6)
        );
    }

    #[test]
    fn guard_is_enforced() {
        let x = AlgebraElement::zero(sig(&[65, 65]));
        assert!(matches!(to_dense(&x), Err(Error::DimensionGuard { .. })));
    }

    #[test]
    fn from_dense_inverts_to_dense() {
        let s = sig(&[2, 3]);
        let m = DenseMatrix::from_fn(6, 6, |i, j| Complex64::new((i * 7 + j) as f64, i as f64));
        let x = from_dense(s, &m).unwrap();
        assert_eq!(to_dense(&x).unwrap(), m);
    }

    #[test]
    fn level_one_permutation_is_identity() {
        let p = block_permutation(&sig(&[2]), &sig(&[3])).unwrap();
        assert_eq!(p, DenseMatrix::identity(6, 6));
        assert!(block_permutation(&sig(&[2]), &sig(&[3, 2])).is_err());
    }

    #[test]
    fn two_by_two_permutation_swaps_middle_slots() {
        let a = sig(&[2, 2]);
        let p = block_permutation(&a, &a).unwrap();
        // swap of tensor slots 2 and 3 in (2,2,2,2): (x1,x2,x3,x4) -> (x1,x3,x2,x4)
        for i in 0..16 {
            let (x1, x2, x3, x4) = (i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1);
            let j = x1 << 3 | x3 << 2 | x2 << 1 | x4;
            assert_eq!(p[(j, i)], c(1.0));
        }
        assert_eq!(&p * &p, DenseMatrix::identity(16, 16));
        assert_eq!(&p * p.transpose(), DenseMatrix::identity(16, 16));
    }

    #[test]
    fn permutation_conjugates_dense_coproduct() {
        let a = sig(&[2, 2]);
        let b = sig(&[2, 2]);
        let ab = Signature::product(&a, &b).unwrap();
        let m = DenseMatrix::from_fn(16, 16, |i, j| {
            Complex64::new(((i * 31 + j * 17) % 11) as f64, ((i + 3 * j) % 5) as f64)
        });
        let x = from_dense(ab, &m).unwrap();
        let p = block_permutation(&a, &b).unwrap();
        let lhs = to_dense(&coproduct(&x, &a, &b).unwrap()).unwrap();
        let rhs = &p * &m * p.transpose();
        assert!(max_abs_diff(&lhs, &rhs) <= 1e-12);
    }
}
