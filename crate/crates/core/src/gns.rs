//! Finite-level GNS representations of product states.
//!
//! A density `T = Σ λ_i v_i v_i†` of rank `r` is purified on `C^d ⊗ C^r` with
//! cyclic vector `Ω = Σ √λ_i v_i ⊗ e_i` and representation `x ↦ x ⊗ I_r`, so
//! `⟨Ω, (x⊗I)Ω⟩ = tr(T x)`. A product state is realized as the tensor product
//! of its factor purifications. Images of matrix units are then 0/1 partial
//! permutations, which [`SparseOp`] stores exactly.

use nalgebra::{DMatrix, DVector};

use crate::coproduct::split_unit;
use crate::dense::{check_guard, DenseMatrix, DENSE_GUARD};
use crate::element::{AlgebraElement, Complex64};
use crate::error::{Error, Result};
use crate::signature::{MatrixUnitIndex, Signature};
use crate::states::{state_boxtimes, DensityFactor, ProductState, StateFunctional};

pub type Vector = DVector<Complex64>;

/// Eigenvalue cutoff used for the purification rank.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Singular-value cutoff for the commutant solve.
pub const COMMUTANT_CUTOFF: f64 = 1e-8;
/// Allowed disagreement of the two Gram matrices in [`cyclic_intertwiner`].
pub const GRAM_TOL: f64 = 1e-8;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square operator stored as `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOp {
    pub fn new(dim: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        Self { dim, entries }
    }

    /// Keeps entries with modulus above `eps`.
    pub fn from_dense(m: &DenseMatrix, eps: f64) -> Self {
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                if m[(r, c)].norm() > eps {
                    entries.push((r, c, m[(r, c)]));
                }
            }
        }
        Self {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for &(r, c, val) in &self.entries {
            out[r] += val * v[c];
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// `self ⊠ other`.
    pub fn kron(&self, other: &SparseOp) -> SparseOp {
        let m = other.dim;
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for &(r, c, v) in &self.entries {
            for &(p, q, w) in &other.entries {
                entries.push((r * m + p, c * m + q, v * w));
            }
        }
        SparseOp {
            dim: self.dim * m,
            entries,
        }
    }

    /// `U · self · U†` as a dense matrix; `U` may be rectangular.
    pub fn conjugated_by(&self, u: &DenseMatrix) -> DenseMatrix {
        let n = u.nrows();
        let mut out = DenseMatrix::zeros(n, n);
        for &(r, c, v) in &self.entries {
            let ur = u.column(r);
            let uc = u.column(c);
            for j in 0..n {
                let w = v * uc[j].conj();
                if w != Complex64::default() {
                    for i in 0..n {
                        out[(i, j)] += ur[i] * w;
                    }
                }
            }
        }
        out
    }
}

fn vec_kron(a: &Vector, b: &Vector) -> Vector {
    let m = b.len();
    Vector::from_fn(a.len() * m, |i, _| a[i / m] * b[i % m])
}

/// A `*`-representation of `A_n(a)` on a finite-dimensional space.
pub trait Representation {
    fn signature(&self) -> &Signature;

    fn space_dim(&self) -> usize;

    /// Image of one valid matrix unit.
    fn unit_image(&self, idx: &MatrixUnitIndex) -> SparseOp;

    fn image(&self, x: &AlgebraElement) -> Result<DenseMatrix> {
        check_sig(self.signature(), x)?;
        let mut m = DenseMatrix::zeros(self.space_dim(), self.space_dim());
        for (idx, c) in x.terms() {
            for &(r, col, v) in self.unit_image(idx).entries() {
                m[(r, col)] += c * v;
            }
        }
        Ok(m)
    }
}

/// A representation together with a distinguished cyclic vector.
pub trait CyclicRepresentation: Representation {
    fn cyclic(&self) -> &Vector;

    /// The GNS map `Λ(x) = π(x) Ω`.
    fn lambda(&self, x: &AlgebraElement) -> Result<Vector> {
        check_sig(self.signature(), x)?;
        let mut out = Vector::zeros(self.space_dim());
        for (idx, c) in x.terms() {
            out += self.unit_image(idx).apply(self.cyclic()) * *c;
        }
        Ok(out)
    }

    /// `⟨Ω, π(x) Ω⟩`.
    fn expectation(&self, x: &AlgebraElement) -> Result<Complex64> {
        Ok(self.cyclic().dotc(&self.lambda(x)?))
    }
}

fn check_sig(sig: &Signature, x: &AlgebraElement) -> Result<()> {
    if x.signature() != sig {
        return Err(Error::SignatureMismatch {
            left: sig.clone(),
            right: x.signature().clone(),
        });
    }
    Ok(())
}

/// Purification data of a single density factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGns {
    dim: usize,
    rank: usize,
    weights: Vec<f64>,
    cyclic: Vector,
}

impl FactorGns {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Retained eigenvalues, in purification order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn space_dim(&self) -> usize {
        self.dim * self.rank
    }

    pub fn cyclic(&self) -> &Vector {
        &self.cyclic
    }
}

/// Purifies `T`. Diagonal inputs use the standard basis, so their GNS data
/// are exact.
pub fn gns_factor(t: &DensityFactor, cutoff: f64) -> Result<FactorGns> {
    let m = t.matrix();
    let d = t.dim();
    let is_diagonal = (0..d).all(|i| (0..d).all(|j| i == j || m[(i, j)] == Complex64::default()));

    let mut pairs: Vec<(f64, Vector)> = if is_diagonal {
        (0..d)
            .map(|i| {
                let mut v = Vector::zeros(d);
                v[i] = ONE;
                (m[(i, i)].re, v)
            })
            .collect()
    } else {
        let eig = m.clone().symmetric_eigen();
        let mut pairs: Vec<_> = (0..d)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs
    };
    pairs.retain(|(l, _)| *l > cutoff);
    let rank = pairs.len();
    if rank == 0 {
        return Err(Error::Consistency(
            "density has no eigenvalue above the cutoff".into(),
        ));
    }
    let mut cyclic = Vector::zeros(d * rank);
    for (i, (l, v)) in pairs.iter().enumerate() {
        let s = l.sqrt();
        for p in 0..d {
            cyclic[p * rank + i] += v[p] * s;
        }
    }
    Ok(FactorGns {
        dim: d,
        rank,
        weights: pairs.iter().map(|(l, _)| *l).collect(),
        cyclic,
    })
}

/// Finite-level GNS triplet `(H, π, Ω)` of a product state.
#[derive(Debug, Clone)]
pub struct GnsTriplet {
    source: ProductState,
    factors: Vec<FactorGns>,
    space_dim: usize,
    cyclic: Vector,
}

impl GnsTriplet {
    /// Tensor product of the factor purifications of `s`.
    pub fn build(s: &ProductState, cutoff: f64) -> Result<Self> {
        let factors = s
            .factors()
            .iter()
            .map(|t| gns_factor(t, cutoff))
            .collect::<Result<Vec<_>>>()?;
        let space_dim = factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.space_dim()))
            .unwrap_or(usize::MAX);
        check_guard(space_dim)?;
        let cyclic = factors.iter().fold(Vector::from_element(1, ONE), |acc, f| {
            vec_kron(&acc, &f.cyclic)
        });
        Ok(Self {
            source: s.clone(),
            factors,
            space_dim,
            cyclic,
        })
    }

    pub fn source_state(&self) -> &ProductState {
        &self.source
    }

    pub fn factors(&self) -> &[FactorGns] {
        &self.factors
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.factors.iter().map(FactorGns::rank).collect()
    }

    /// Largest `|⟨Ω, π(E_u)Ω⟩ − ω(E_u)|` over all matrix units.
    pub fn expectation_error(&self) -> f64 {
        self.signature()
            .units()
            .map(|u| {
                let img = self.unit_image(&u);
                let got: Complex64 = img
                    .entries()
                    .iter()
                    .map(|&(r, c, v)| self.cyclic[r].conj() * v * self.cyclic[c])
                    .sum();
                (got - self.source.eval_unit(&u)).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl Representation for GnsTriplet {
    fn signature(&self) -> &Signature {
        self.source.signature()
    }

    fn space_dim(&self) -> usize {
        self.space_dim
    }

    fn unit_image(&self, idx: &MatrixUnitIndex) -> SparseOp {
        // basis of H is lexicographic in (p_1, s_1, …, p_n, s_n); E_u sends
        // (k_i, s_i) to (j_i, s_i) and fixes every s_i
        let ranks = self.ranks();
        let extras: usize = ranks.iter().product();
        let mut entries = Vec::with_capacity(extras);
        let mut s = vec![0usize; ranks.len()];
        for _ in 0..extras {
            let (mut row, mut col) = (0, 0);
            for (i, f) in self.factors.iter().enumerate() {
                row = (row * f.dim + idx.rows()[i]) * f.rank + s[i];
                col = (col * f.dim + idx.cols()[i]) * f.rank + s[i];
            }
            entries.push((row, col, ONE));
            for i in (0..s.len()).rev() {
                s[i] += 1;
                if s[i] < ranks[i] {
                    break;
                }
                s[i] = 0;
            }
        }
        SparseOp::new(self.space_dim, entries)
    }
}

impl CyclicRepresentation for GnsTriplet {
    fn cyclic(&self) -> &Vector {
        &self.cyclic
    }
}

/// `Λ(x) = π(x) Ω`.
pub fn gns_lambda(g: &GnsTriplet, x: &AlgebraElement) -> Result<Vector> {
    g.lambda(x)
}

/// `π_1 ⊗_φ π_2 = (π_1 ⊗ π_2) ∘ φ_{a,b}` with cyclic vector `Ω_1 ⊗ Ω_2`.
#[derive(Debug, Clone)]
pub struct TensorPhiRep<A, B> {
    left: A,
    right: B,
    sig: Signature,
    cyclic: Vector,
}

impl<A: CyclicRepresentation, B: CyclicRepresentation> TensorPhiRep<A, B> {
    pub fn new(left: A, right: B) -> Result<Self> {
        let sig = Signature::product(left.signature(), right.signature())?;
        check_guard(left.space_dim() * right.space_dim())?;
        let cyclic = vec_kron(left.cyclic(), right.cyclic());
        Ok(Self {
            left,
            right,
            sig,
            cyclic,
        })
    }

    pub fn left(&self) -> &A {
        &self.left
    }

    pub fn right(&self) -> &B {
        &self.right
    }
}

impl<A: CyclicRepresentation, B: CyclicRepresentation> Representation for TensorPhiRep<A, B> {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn space_dim(&self) -> usize {
        self.left.space_dim() * self.right.space_dim()
    }

    fn unit_image(&self, idx: &MatrixUnitIndex) -> SparseOp {
        let (u, v) = split_unit(idx, self.right.signature());
        self.left.unit_image(&u).kron(&self.right.unit_image(&v))
    }
}

impl<A: CyclicRepresentation, B: CyclicRepresentation> CyclicRepresentation for TensorPhiRep<A, B> {
    fn cyclic(&self) -> &Vector {
        &self.cyclic
    }
}

/// `V π(·) V†` with cyclic vector `VΩ`, for a unitary `V`.
#[derive(Debug, Clone)]
pub struct Conjugated<R> {
    inner: R,
    unitary: DenseMatrix,
    cyclic: Vector,
}

impl<R: CyclicRepresentation> Conjugated<R> {
    pub fn new(inner: R, unitary: DenseMatrix) -> Result<Self> {
        let d = inner.space_dim();
        if unitary.shape() != (d, d) {
            return Err(Error::InvalidInput(format!(
                "unitary is {}x{}, representation space has dimension {d}",
                unitary.nrows(),
                unitary.ncols()
            )));
        }
        let cyclic = &unitary * inner.cyclic();
        Ok(Self {
            inner,
            unitary,
            cyclic,
        })
    }
}

impl<R: CyclicRepresentation> Representation for Conjugated<R> {
    fn signature(&self) -> &Signature {
        self.inner.signature()
    }

    fn space_dim(&self) -> usize {
        self.inner.space_dim()
    }

    fn unit_image(&self, idx: &MatrixUnitIndex) -> SparseOp {
        SparseOp::from_dense(
            &self.inner.unit_image(idx).conjugated_by(&self.unitary),
            0.0,
        )
    }
}

impl<R: CyclicRepresentation> CyclicRepresentation for Conjugated<R> {
    fn cyclic(&self) -> &Vector {
        &self.cyclic
    }
}

/// The unitary `U` with `U π_src(x) Ω_src = π_dst(x) Ω_dst` for every `x`,
/// obtained by linear extension over the spanning family `{π_src(E_u) Ω_src}`.
///
/// Fails with [`Error::Consistency`] when the Gram matrices of the two
/// families differ by more than [`GRAM_TOL`], i.e. when no such isometry
/// exists.
pub fn cyclic_intertwiner<S, D>(src: &S, dst: &D) -> Result<DenseMatrix>
where
    S: CyclicRepresentation + ?Sized,
    D: CyclicRepresentation + ?Sized,
{
    if src.signature() != dst.signature() {
        return Err(Error::SignatureMismatch {
            left: src.signature().clone(),
            right: dst.signature().clone(),
        });
    }
    if src.space_dim() != dst.space_dim() {
        return Err(Error::Consistency(format!(
            "space dimensions differ: {} vs {}",
            src.space_dim(),
            dst.space_dim()
        )));
    }
    let units: Vec<_> = src.signature().units().collect();
    let span = |rep: &dyn Fn(&MatrixUnitIndex) -> Vector, dim: usize| {
        let mut m = DMatrix::zeros(dim, units.len());
        for (k, u) in units.iter().enumerate() {
            m.set_column(k, &rep(u));
        }
        m
    };
    let v = span(&|u| src.unit_image(u).apply(src.cyclic()), src.space_dim());
    let w = span(&|u| dst.unit_image(u).apply(dst.cyclic()), dst.space_dim());

    let gram_gap = crate::dense::max_abs_diff(&(v.adjoint() * &v), &(w.adjoint() * &w));
    if gram_gap > GRAM_TOL {
        return Err(Error::Consistency(format!(
            "Gram matrices of the cyclic families differ by {gram_gap:e}"
        )));
    }
    let v_pinv = v
        .pseudo_inverse(1e-10)
        .map_err(|e| Error::Consistency(e.to_string()))?;
    Ok(w * v_pinv)
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &DenseMatrix) -> f64 {
    let n = u.ncols();
    crate::dense::max_abs_diff(&(u.adjoint() * u), &DenseMatrix::identity(n, n))
}

/// Largest entrywise `|U π_src(E_u) U† − π_dst(E_u)|` over all units.
pub fn intertwining_error<S, D>(u: &DenseMatrix, src: &S, dst: &D) -> f64
where
    S: Representation + ?Sized,
    D: Representation + ?Sized,
{
    src.signature()
        .units()
        .map(|idx| {
            let lhs = src.unit_image(&idx).conjugated_by(u);
            crate::dense::max_abs_diff(&lhs, &dst.unit_image(&idx).to_dense())
        })
        .fold(0.0, f64::max)
}

/// The unitary `U^{(T,R)}: H_{T⊠R} → H_T ⊗ H_R` together with both sides.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    pub unitary: DenseMatrix,
    pub product_gns: GnsTriplet,
    pub tensor_rep: TensorPhiRep<GnsTriplet, GnsTriplet>,
}

impl Intertwiner {
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.unitary)
    }

    pub fn intertwining_error(&self) -> f64 {
        intertwining_error(&self.unitary, &self.product_gns, &self.tensor_rep)
    }
}

/// Builds `U^{(T,R)}` with `U Λ_{T⊠R}(x) = (Λ_T ⊗ Λ_R)(φ_{a,b}(x))`.
pub fn gns_intertwiner(t: &ProductState, r: &ProductState, cutoff: f64) -> Result<Intertwiner> {
    let product_gns = GnsTriplet::build(&state_boxtimes(t, r)?, cutoff)?;
    let tensor_rep =
        TensorPhiRep::new(GnsTriplet::build(t, cutoff)?, GnsTriplet::build(r, cutoff)?)?;
    let unitary = cyclic_intertwiner(&product_gns, &tensor_rep)?;
    Ok(Intertwiner {
        unitary,
        product_gns,
        tensor_rep,
    })
}

/// Dimension of `{X : [π(E_u), X] = 0 for all units u}`.
///
/// The commutator equations of every unit are stacked into one linear system
/// in the `D²` entries of `X`; the answer is `D²` minus the number of singular
/// values above [`COMMUTANT_CUTOFF`].
pub fn commutant_dimension<R: Representation + ?Sized>(rep: &R) -> Result<usize> {
    let d = rep.space_dim();
    let unknowns = d * d;
    if unknowns > DENSE_GUARD {
        return Err(Error::DimensionGuard {
            dim: unknowns,
            limit: DENSE_GUARD,
        });
    }
    // Equation (i, j) of π X − X π: Σ_c A_ic X_cj − Σ_r X_ir A_rj.
    let mut rows: std::collections::BTreeSet<Vec<(usize, i64, i64)>> = Default::default();
    let mut dense_rows: Vec<Vec<(usize, Complex64)>> = Vec::new();
    for u in rep.signature().units() {
        let a = rep.unit_image(&u);
        let mut eqs: std::collections::BTreeMap<(usize, usize), Vec<(usize, Complex64)>> =
            Default::default();
        for &(r, c, v) in a.entries() {
            for j in 0..d {
                eqs.entry((r, j)).or_default().push((c * d + j, v));
            }
            for i in 0..d {
                eqs.entry((i, c)).or_default().push((i * d + r, -v));
            }
        }
        for (_, mut eq) in eqs {
            eq.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(eq.len());
            for (k, v) in eq {
                match merged.last_mut() {
                    Some(last) if last.0 == k => last.1 += v,
                    _ => merged.push((k, v)),
                }
            }
            merged.retain(|e| e.1.norm() > 0.0);
            if merged.is_empty() {
                continue;
            }
            // exact duplicates carry no new information
            let key: Vec<_> = merged
                .iter()
                .map(|&(k, v)| (k, v.re.to_bits() as i64, v.im.to_bits() as i64))
                .collect();
            if rows.insert(key) {
                dense_rows.push(merged);
            }
        }
    }
    if dense_rows.is_empty() {
        return Ok(unknowns);
    }
    let mut system = DMatrix::<Complex64>::zeros(dense_rows.len(), unknowns);
    for (i, row) in dense_rows.iter().enumerate() {
        for &(k, v) in row {
            system[(i, k)] = v;
        }
    }
    let rank = system
        .singular_values()
        .iter()
        .filter(|&&s| s > COMMUTANT_CUTOFF)
        .count();
    Ok(unknowns - rank)
}
