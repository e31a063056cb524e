//! The Kronecker coproduct `φ_{a,b}: A_n(a·b) → A_n(a) ⊗ A_n(b)` and the
//! identity-insertion embeddings it is compatible with.
//!
//! Every map here is an exact integer recoding of matrix-unit indices; the
//! coefficients are carried through untouched.

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::signature::{MatrixUnitIndex, Signature};

/// Splits a 1-based index `j ∈ {1,…,ab}` into `(j', j'')` with
/// `j = b(j'−1) + j''`, `j' ∈ {1,…,a}`, `j'' ∈ {1,…,b}`.
pub fn split_index(j: usize, b: usize) -> (usize, usize) {
    assert!(j >= 1 && b >= 1, "indices are 1-based");
    let (hi, lo) = split0(j - 1, b);
    (hi + 1, lo + 1)
}

#[inline]
fn split0(j: usize, b: usize) -> (usize, usize) {
    (j / b, j % b)
}

/// `φ_{a,b}` on an element over `a·b`; the result lives over `(a_1,…,a_n,b_1,…,b_n)`.
pub fn coproduct(x: &AlgebraElement, a: &Signature, b: &Signature) -> Result<AlgebraElement> {
    let ab = Signature::product(a, b)?;
    if x.signature().level() != ab.level() {
        return Err(Error::LevelMismatch {
            left: x.signature().level(),
            right: ab.level(),
        });
    }
    coproduct_on_block(x, 0, a, b)
}

/// Applies `φ_{a,b}` to slots `start..start+n` of `x`, leaving the other slots
/// alone. The `n` slots are replaced by the `a`-block followed by the `b`-block.
///
/// `coproduct_on_block(x, 0, a, b)` is `φ_{a,b} ⊗ id`, and with `start = n`
/// on an element over `(a, b·c)` it is `id ⊗ φ_{b,c}`.
pub fn coproduct_on_block(
    x: &AlgebraElement,
    start: usize,
    a: &Signature,
    b: &Signature,
) -> Result<AlgebraElement> {
    let sig = x.signature();
    let n = a.level();
    let ab = Signature::product(a, b)?;
    if start + n > sig.level() || sig.dims()[start..start + n] != *ab.dims() {
        return Err(Error::NotFactorizable {
            sig: sig.clone(),
            a: a.clone(),
            b: b.clone(),
        });
    }

    let mut dims = sig.dims()[..start].to_vec();
    dims.extend_from_slice(a.dims());
    dims.extend_from_slice(b.dims());
    dims.extend_from_slice(&sig.dims()[start + n..]);
    let out_sig = Signature::new(dims)?;

    let recode = |list: &[usize]| -> Vec<usize> {
        let mut hi = Vec::with_capacity(n);
        let mut lo = Vec::with_capacity(n);
        for (&j, &bi) in list[start..start + n].iter().zip(b.dims()) {
            let (p, q) = split0(j, bi);
            hi.push(p);
            lo.push(q);
        }
        let mut out = list[..start].to_vec();
        out.extend(hi);
        out.extend(lo);
        out.extend_from_slice(&list[start + n..]);
        out
    };

    Ok(AlgebraElement::from_valid_terms(
        out_sig,
        x.terms().map(|(idx, c)| {
            (
                MatrixUnitIndex::zero_based(recode(idx.rows()), recode(idx.cols())),
                *c,
            )
        }),
    ))
}

/// Splits a unit over `a·b` into its `a`- and `b`-parts, `φ(E_u) = E_{u'} ⊗ E_{u''}`.
pub(crate) fn split_unit(
    idx: &MatrixUnitIndex,
    b: &Signature,
) -> (MatrixUnitIndex, MatrixUnitIndex) {
    let split = |list: &[usize]| -> (Vec<usize>, Vec<usize>) {
        list.iter()
            .zip(b.dims())
            .map(|(&j, &bi)| split0(j, bi))
            .unzip()
    };
    let (rh, rl) = split(idx.rows());
    let (ch, cl) = split(idx.cols());
    (
        MatrixUnitIndex::zero_based(rh, ch),
        MatrixUnitIndex::zero_based(rl, cl),
    )
}

/// `φ^{-1}`: merges slots `i` and `split + i` back into one slot of dimension
/// `a_i b_i`. The signature of `y` must have exactly `2·split` slots.
pub fn coproduct_inverse(y: &AlgebraElement, split: usize) -> Result<AlgebraElement> {
    let sig = y.signature();
    if split == 0 || sig.level() != 2 * split {
        return Err(Error::LevelMismatch {
            left: split,
            right: sig.level().saturating_sub(split),
        });
    }
    let a = sig.slice(0, split)?;
    let b = sig.slice(split, 2 * split)?;
    let ab = Signature::product(&a, &b)?;
    let merge = |list: &[usize]| -> Vec<usize> {
        (0..split)
            .map(|i| list[i] * b.dims()[i] + list[split + i])
            .collect()
    };
    Ok(AlgebraElement::from_valid_terms(
        ab,
        y.terms().map(|(idx, c)| {
            (
                MatrixUnitIndex::zero_based(merge(idx.rows()), merge(idx.cols())),
                *c,
            )
        }),
    ))
}

/// Inserts an identity factor `I_dim` at slot `position` (0-based, may equal
/// the level). With `position = level` this is the embedding `A ↦ A ⊗ I`.
pub fn embed_identity_at(
    x: &AlgebraElement,
    position: usize,
    dim: usize,
) -> Result<AlgebraElement> {
    let sig = x.signature();
    if position > sig.level() {
        return Err(Error::InvalidInput(format!(
            "insertion slot {position} beyond level {}",
            sig.level()
        )));
    }
    let out_sig = sig.inserted(position, dim)?;
    let mut terms = Vec::with_capacity(x.num_terms() * dim);
    for (idx, c) in x.terms() {
        for m in 0..dim {
            let mut e = idx.clone();
            let (rows, cols) = e.parts_mut();
            rows.insert(position, m);
            cols.insert(position, m);
            terms.push((e, *c));
        }
    }
    Ok(AlgebraElement::from_valid_terms(out_sig, terms))
}
