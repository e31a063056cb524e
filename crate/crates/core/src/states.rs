//! Product states `ω_T` on finite stages and the tensor product `⊗_φ`.
//!
//! The evaluation convention is `ω_T(E_{j_1k_1}⊗…⊗E_{j_nk_n}) = ∏ T^{(i)}_{k_i j_i}`
//! (note the transpose), which makes `ω_T(x) = tr(D · dense(x))` with the
//! level density `D = T^{(1)} ⊠ … ⊠ T^{(n)}`, not its transpose.

use crate::coproduct::coproduct;
use crate::dense::{check_guard, hermitian_eigenvalues, kron_box, DenseMatrix};
use crate::element::{AlgebraElement, Complex64};
use crate::error::{Error, Result};
use crate::signature::{MatrixUnitIndex, Signature};

/// Validation tolerance for density factors.
pub const DENSITY_TOL: f64 = 1e-10;

/// A positive semidefinite matrix of trace one, `dim ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityFactor {
    matrix: DenseMatrix,
}

impl DensityFactor {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        density_validate(&matrix)?;
        Ok(Self { matrix })
    }

    /// `diag(p_1,…,p_k)`.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(DenseMatrix::from_diagonal(
            &nalgebra::DVector::from_iterator(p.len(), p.iter().map(|&v| Complex64::new(v, 0.0))),
        ))
    }

    /// Skips validation; only for results of operations that preserve it.
    pub(crate) fn from_valid(matrix: DenseMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    /// `T ⊠ R`.
    pub fn boxtimes(&self, other: &Self) -> Self {
        Self::from_valid(kron_box(&self.matrix, &other.matrix))
    }
}

/// Checks squareness, `dim ≥ 2`, hermiticity, unit trace and positivity,
/// all within [`DENSITY_TOL`].
pub fn density_validate(m: &DenseMatrix) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidDensity(format!(
            "matrix is not square: {}x{}",
            n,
            m.ncols()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidDensity(format!("dimension {n} is below 2")));
    }
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > DENSITY_TOL {
                return Err(Error::InvalidDensity(format!(
                    "not Hermitian at ({}, {}): deviation {d:e}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("trace is {tr}, not 1")));
    }
    let min = hermitian_eigenvalues(m)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min < -DENSITY_TOL {
        return Err(Error::InvalidDensity(format!(
            "not positive semidefinite: eigenvalue {min:e}"
        )));
    }
    Ok(())
}

/// A state on some `A_n(a)` that can be evaluated unit by unit.
pub trait StateFunctional {
    fn signature(&self) -> &Signature;

    /// Value on one (valid) matrix unit.
    fn eval_unit(&self, idx: &MatrixUnitIndex) -> Complex64;

    fn eval(&self, x: &AlgebraElement) -> Result<Complex64> {
        if x.signature() != self.signature() {
            return Err(Error::SignatureMismatch {
                left: self.signature().clone(),
                right: x.signature().clone(),
            });
        }
        Ok(x.terms().map(|(idx, c)| c * self.eval_unit(idx)).sum())
    }
}

impl<S: StateFunctional + ?Sized> StateFunctional for &S {
    fn signature(&self) -> &Signature {
        (**self).signature()
    }

    fn eval_unit(&self, idx: &MatrixUnitIndex) -> Complex64 {
        (**self).eval_unit(idx)
    }
}

/// Level-`n` data `(T^{(1)},…,T^{(n)})` of a product state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    sig: Signature,
    factors: Vec<DensityFactor>,
}

impl ProductState {
    pub fn new(factors: Vec<DensityFactor>) -> Result<Self> {
        let sig = Signature::new(factors.iter().map(DensityFactor::dim).collect())?;
        Ok(Self { sig, factors })
    }

    pub fn factors(&self) -> &[DensityFactor] {
        &self.factors
    }

    pub fn level(&self) -> usize {
        self.factors.len()
    }

    pub fn signature_ref(&self) -> &Signature {
        &self.sig
    }

    /// `ω_T(x)`.
    pub fn evaluate(&self, x: &AlgebraElement) -> Result<Complex64> {
        self.eval(x)
    }
}

impl StateFunctional for ProductState {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn eval_unit(&self, idx: &MatrixUnitIndex) -> Complex64 {
        self.factors
            .iter()
            .zip(idx.rows().iter().zip(idx.cols()))
            .map(|(t, (&j, &k))| t.matrix[(k, j)])
            .product()
    }
}

/// `ρ_1 ⊗_φ ρ_2 = (ρ_1 ⊗ ρ_2) ∘ φ_{a,b}`, a state over `a·b`.
#[derive(Debug, Clone)]
pub struct TensorPhiState<A, B> {
    left: A,
    right: B,
    sig: Signature,
}

impl<A: StateFunctional, B: StateFunctional> TensorPhiState<A, B> {
    pub fn new(left: A, right: B) -> Result<Self> {
        let sig = Signature::product(left.signature(), right.signature())?;
        Ok(Self { left, right, sig })
    }

    pub fn left(&self) -> &A {
        &self.left
    }

    pub fn right(&self) -> &B {
        &self.right
    }
}

/// `(ρ_1 ⊗ ρ_2)(y)` for `y` over the concatenated signature `(a, b)`.
fn eval_blockwise<A, B>(left: &A, right: &B, y: &AlgebraElement) -> Complex64
where
    A: StateFunctional + ?Sized,
    B: StateFunctional + ?Sized,
{
    let n = left.signature().level();
    let m = y.signature().level();
    y.terms()
        .map(|(idx, c)| c * left.eval_unit(&idx.slice(0, n)) * right.eval_unit(&idx.slice(n, m)))
        .sum()
}

impl<A: StateFunctional, B: StateFunctional> StateFunctional for TensorPhiState<A, B> {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn eval_unit(&self, idx: &MatrixUnitIndex) -> Complex64 {
        let x = AlgebraElement::from_valid_terms(
            self.sig.clone(),
            [(idx.clone(), Complex64::new(1.0, 0.0))],
        );
        self.eval(&x).expect("unit over own signature")
    }

    fn eval(&self, x: &AlgebraElement) -> Result<Complex64> {
        let y = coproduct(x, self.left.signature(), self.right.signature())?;
        Ok(eval_blockwise(&self.left, &self.right, &y))
    }
}

/// `(ω_S ⊗_φ ω_R)(x)`, computed by applying `φ` and evaluating blockwise.
pub fn state_tensor_phi_eval(
    s: &ProductState,
    r: &ProductState,
    x: &AlgebraElement,
) -> Result<Complex64> {
    let ab = Signature::product(s.signature(), r.signature())?;
    if x.signature() != &ab {
        return Err(Error::SignatureMismatch {
            left: ab,
            right: x.signature().clone(),
        });
    }
    let y = coproduct(x, s.signature(), r.signature())?;
    Ok(eval_blockwise(s, r, &y))
}

/// Componentwise `T ⊠ R = (T^{(1)}⊠R^{(1)},…,T^{(n)}⊠R^{(n)})`.
pub fn state_boxtimes(s: &ProductState, r: &ProductState) -> Result<ProductState> {
    if s.level() != r.level() {
        return Err(Error::LevelMismatch {
            left: s.level(),
            right: r.level(),
        });
    }
    ProductState::new(
        s.factors
            .iter()
            .zip(&r.factors)
            .map(|(t, u)| t.boxtimes(u))
            .collect(),
    )
}

/// Level density `D = T^{(1)} ⊠ … ⊠ T^{(n)}`, the unique `D` with
/// `ω(x) = tr(D · dense(x))`.
pub fn state_density_level(s: &ProductState) -> Result<DenseMatrix> {
    check_guard(s.sig.total_dim())?;
    let mut d = DenseMatrix::identity(1, 1);
    for t in &s.factors {
        d = kron_box(&d, &t.matrix);
    }
    Ok(d)
}

/// Trace-norm distance `‖D_1 − D_2‖_1` of the level densities.
pub fn state_trace_distance(s1: &ProductState, s2: &ProductState) -> Result<f64> {
    if s1.sig != s2.sig {
        return Err(Error::SignatureMismatch {
            left: s1.sig.clone(),
            right: s2.sig.clone(),
        });
    }
    let diff = state_density_level(s1)? - state_density_level(s2)?;
    Ok(hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum())
}

/// Random density `G G† / tr(G G†)` with `G` complex Gaussian; deterministic per seed.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityFactor> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    crate::sample::random_density_with(dim, &mut rng)
}
