//! Seeded random test data: densities, product states and sparse elements.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::DenseMatrix;
use crate::element::{AlgebraElement, Complex64};
use crate::error::Result;
use crate::signature::{MatrixUnitIndex, Signature};
use crate::states::{DensityFactor, ProductState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// `G G† / tr(G G†)` for a complex Gaussian `dim × dim` matrix `G`.
pub fn random_density_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityFactor> {
    let g = DenseMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let mut rho = &g * g.adjoint();
    let tr = rho.trace();
    rho /= tr;
    // exact hermiticity; the product is Hermitian only up to rounding
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DensityFactor::new(rho)
}

pub fn random_product_state<R: Rng + ?Sized>(sig: &Signature, rng: &mut R) -> Result<ProductState> {
    ProductState::new(
        sig.dims()
            .iter()
            .map(|&d| random_density_with(d, rng))
            .collect::<Result<_>>()?,
    )
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseMatrix {
    let g = DenseMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    g.qr().q()
}

pub fn random_unit_index<R: Rng + ?Sized>(sig: &Signature, rng: &mut R) -> MatrixUnitIndex {
    let rows = sig.dims().iter().map(|&d| rng.random_range(0..d)).collect();
    let cols = sig.dims().iter().map(|&d| rng.random_range(0..d)).collect();
    MatrixUnitIndex::zero_based(rows, cols)
}

/// Sum of `terms` random units with Gaussian complex coefficients.
pub fn random_element<R: Rng + ?Sized>(
    sig: &Signature,
    terms: usize,
    rng: &mut R,
) -> AlgebraElement {
    let mut parts = Vec::with_capacity(terms);
    for _ in 0..terms {
        let idx = random_unit_index(sig, rng);
        parts.push((idx, gaussian(rng)));
    }
    AlgebraElement::from_valid_terms(sig.clone(), parts)
}

/// Random element expanded from a dense Gaussian matrix of a single factor.
pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseMatrix {
    DenseMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}
