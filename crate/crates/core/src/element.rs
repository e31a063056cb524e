//! Sparse elements of `A_n(a) = M_{a_1} ⊗ … ⊗ M_{a_n}`.

use std::collections::BTreeMap;

pub use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signature::{MatrixUnitIndex, Signature};
use crate::tolerance::PRUNE;

/// Complex linear combination of matrix-unit tensors over a [`Signature`].
///
/// Always canonical: every index is valid for the signature, indices are
/// unique, and no stored coefficient has magnitude `≤ 1e-14`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    sig: Signature,
    terms: BTreeMap<MatrixUnitIndex, Complex64>,
}

impl AlgebraElement {
    pub fn zero(sig: Signature) -> Self {
        Self {
            sig,
            terms: BTreeMap::new(),
        }
    }

    /// `I = Σ_J E_{JJ}`.
    pub fn identity(sig: Signature) -> Self {
        let mut terms = BTreeMap::new();
        let mut diag = vec![0usize; sig.level()];
        'outer: loop {
            terms.insert(
                MatrixUnitIndex::zero_based(diag.clone(), diag.clone()),
                Complex64::new(1.0, 0.0),
            );
            for pos in (0..diag.len()).rev() {
                diag[pos] += 1;
                if diag[pos] < sig.dims()[pos] {
                    continue 'outer;
                }
                diag[pos] = 0;
            }
            break;
        }
        Self { sig, terms }
    }

    /// The single unit `E_{j_1k_1} ⊗ … ⊗ E_{j_nk_n}` with coefficient 1.
    pub fn matrix_unit(sig: Signature, idx: MatrixUnitIndex) -> Result<Self> {
        idx.validate(&sig)?;
        Ok(Self {
            sig,
            terms: BTreeMap::from([(idx, Complex64::new(1.0, 0.0))]),
        })
    }

    /// Validates, merges duplicates and prunes.
    pub fn from_terms<I>(sig: Signature, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MatrixUnitIndex, Complex64)>,
    {
        let mut map: BTreeMap<MatrixUnitIndex, Complex64> = BTreeMap::new();
        for (idx, c) in terms {
            idx.validate(&sig)?;
            *map.entry(idx).or_default() += c;
        }
        Ok(Self::pruned(sig, map, PRUNE))
    }

    /// Like [`from_terms`](Self::from_terms) for indices known to be valid.
    pub(crate) fn from_valid_terms<I>(sig: Signature, terms: I) -> Self
    where
        I: IntoIterator<Item = (MatrixUnitIndex, Complex64)>,
    {
        let mut map: BTreeMap<MatrixUnitIndex, Complex64> = BTreeMap::new();
        for (idx, c) in terms {
            debug_assert!(idx.validate(&sig).is_ok());
            *map.entry(idx).or_default() += c;
        }
        Self::pruned(sig, map, PRUNE)
    }

    fn pruned(sig: Signature, mut terms: BTreeMap<MatrixUnitIndex, Complex64>, eps: f64) -> Self {
        terms.retain(|_, c| c.norm() > eps);
        Self { sig, terms }
    }

    /// Re-prunes with a custom threshold. Idempotent.
    pub fn canonicalize_with(&self, threshold: f64) -> Self {
        Self::pruned(self.sig.clone(), self.terms.clone(), threshold)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&MatrixUnitIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &MatrixUnitIndex) -> Complex64 {
        self.terms.get(idx).copied().unwrap_or_default()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch {
                left: self.sig.clone(),
                right: other.sig.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (idx, c) in &other.terms {
            *terms.entry(idx.clone()).or_default() += c;
        }
        Ok(Self::pruned(self.sig.clone(), terms, PRUNE))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::pruned(
            self.sig.clone(),
            self.terms.iter().map(|(i, v)| (i.clone(), c * v)).collect(),
            PRUNE,
        )
    }

    /// `x*`: swaps rows and columns of every unit and conjugates coefficients.
    pub fn adjoint(&self) -> Self {
        Self {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.transposed(), c.conj()))
                .collect(),
        }
    }

    /// Algebra product, from `E_{jk} E_{lm} = δ_{kl} E_{jm}` in every slot.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out: BTreeMap<MatrixUnitIndex, Complex64> = BTreeMap::new();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                if u.cols() == v.rows() {
                    let idx = MatrixUnitIndex::zero_based(u.rows().to_vec(), v.cols().to_vec());
                    *out.entry(idx).or_default() += cu * cv;
                }
            }
        }
        Ok(Self::pruned(self.sig.clone(), out, PRUNE))
    }

    /// `x ⊗ y` over the concatenated signature.
    pub fn tensor(&self, other: &Self) -> Self {
        let sig = self.sig.concat(&other.sig);
        let mut terms = BTreeMap::new();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                terms.insert(u.concat(v), cu * cv);
            }
        }
        Self::pruned(sig, terms, PRUNE)
    }

    /// The embedding `A ↦ A ⊗ I` into the next stage.
    pub fn embed_psi(&self, next_dim: usize) -> Result<Self> {
        crate::coproduct::embed_identity_at(self, self.sig.level(), next_dim)
    }

    /// Same signature and every coefficient within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.sig != other.sig {
            return false;
        }
        let close = |a: &Self, b: &Self| {
            a.terms
                .iter()
                .all(|(i, c)| (c - b.coefficient(i)).norm() <= tol)
        };
        close(self, other) && close(other, self)
    }
}
