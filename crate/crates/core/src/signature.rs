//! Signatures `(a_1,…,a_n)` and matrix-unit indices over them.

use std::fmt;

use crate::error::{Axis, Error, Result};

/// Factor dimensions `(a_1,…,a_n)` of the stage `M_{a_1} ⊗ … ⊗ M_{a_n}`.
///
/// Every entry is at least 2 and the level `n` is at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<usize>);

impl Signature {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSignature("level must be at least 1".into()));
        }
        if let Some((pos, d)) = dims.iter().enumerate().find(|(_, &d)| d < 2) {
            return Err(Error::InvalidSignature(format!(
                "dimension {d} at position {} is below 2",
                pos + 1
            )));
        }
        Ok(Self(dims))
    }

    /// `(d, d, …, d)` with `level` entries.
    pub fn constant(d: usize, level: usize) -> Result<Self> {
        Self::new(vec![d; level])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    /// `∏ a_i`, the size of the dense representation.
    pub fn total_dim(&self) -> usize {
        self.0.iter().product()
    }

    /// Number of matrix units, `∏ a_i²`.
    pub fn unit_count(&self) -> usize {
        self.0.iter().map(|d| d * d).product()
    }

    /// Entrywise product `a·b = (a_1 b_1,…,a_n b_n)`.
    pub fn product(a: &Signature, b: &Signature) -> Result<Signature> {
        if a.level() != b.level() {
            return Err(Error::LevelMismatch {
                left: a.level(),
                right: b.level(),
            });
        }
        Ok(Self(a.0.iter().zip(&b.0).map(|(x, y)| x * y).collect()))
    }

    /// Concatenation `(a_1,…,a_n,b_1,…,b_m)`.
    pub fn concat(&self, other: &Signature) -> Signature {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        Self(dims)
    }

    /// Signature with one more factor of dimension `next` appended.
    pub fn extended(&self, next: usize) -> Result<Signature> {
        self.inserted(self.level(), next)
    }

    pub(crate) fn inserted(&self, position: usize, dim: usize) -> Result<Signature> {
        let mut dims = self.0.clone();
        dims.insert(position, dim);
        Self::new(dims)
    }

    /// Slots `start..end` as a signature of their own.
    pub fn slice(&self, start: usize, end: usize) -> Result<Signature> {
        Self::new(self.0[start..end].to_vec())
    }

    /// Lexicographic (Kronecker) flattening of a 0-based multi-index.
    pub(crate) fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.0).fold(0, |acc, (&j, &d)| acc * d + j)
    }

    /// Iterator over every matrix unit of the signature, in index order.
    pub fn units(&self) -> Units<'_> {
        Units {
            sig: self,
            next: Some(MatrixUnitIndex {
                rows: vec![0; self.level()],
                cols: vec![0; self.level()],
            }),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// Index of `E_{j_1k_1} ⊗ … ⊗ E_{j_nk_n}`.
///
/// Stored 0-based; the `one_based` constructor and accessor are the public
/// 1-based surface. The derived ordering (rows first, then columns) is the
/// canonical term order used for printing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixUnitIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MatrixUnitIndex {
    /// Builds an index from 1-based row and column lists.
    pub fn one_based(rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::MalformedIndex(format!(
                "{} row indices but {} column indices",
                rows.len(),
                cols.len()
            )));
        }
        if rows.is_empty() {
            return Err(Error::MalformedIndex("empty index".into()));
        }
        for (axis, list) in [(Axis::Row, rows), (Axis::Col, cols)] {
            if let Some(p) = list.iter().position(|&v| v == 0) {
                return Err(Error::MalformedIndex(format!(
                    "{axis} index at factor position {} is 0; indices are 1-based",
                    p + 1
                )));
            }
        }
        Ok(Self {
            rows: rows.iter().map(|v| v - 1).collect(),
            cols: cols.iter().map(|v| v - 1).collect(),
        })
    }

    /// 0-based constructor; callers validate against a signature.
    pub fn zero_based(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        debug_assert_eq!(rows.len(), cols.len());
        Self { rows, cols }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn rows_one_based(&self) -> Vec<usize> {
        self.rows.iter().map(|v| v + 1).collect()
    }

    pub fn cols_one_based(&self) -> Vec<usize> {
        self.cols.iter().map(|v| v + 1).collect()
    }

    pub fn level(&self) -> usize {
        self.rows.len()
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        if self.level() != sig.level() {
            return Err(Error::LevelMismatch {
                left: self.level(),
                right: sig.level(),
            });
        }
        for (pos, &d) in sig.dims().iter().enumerate() {
            for (axis, v) in [(Axis::Row, self.rows[pos]), (Axis::Col, self.cols[pos])] {
                if v >= d {
                    return Err(Error::IndexOutOfRange {
                        axis,
                        position: pos + 1,
                        index: v + 1,
                        dim: d,
                    });
                }
            }
        }
        Ok(())
    }

    /// Index of `E_u ⊗ E_v`.
    pub fn concat(&self, other: &MatrixUnitIndex) -> MatrixUnitIndex {
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        let mut cols = self.cols.clone();
        cols.extend_from_slice(&other.cols);
        Self { rows, cols }
    }

    /// Slots `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> MatrixUnitIndex {
        Self {
            rows: self.rows[start..end].to_vec(),
            cols: self.cols[start..end].to_vec(),
        }
    }

    /// Index of the adjoint unit.
    pub fn transposed(&self) -> MatrixUnitIndex {
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<usize>, &mut Vec<usize>) {
        (&mut self.rows, &mut self.cols)
    }
}

/// See [`Signature::units`].
pub struct Units<'a> {
    sig: &'a Signature,
    next: Option<MatrixUnitIndex>,
}

impl Iterator for Units<'_> {
    type Item = MatrixUnitIndex;

    fn next(&mut self) -> Option<MatrixUnitIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let dims = self.sig.dims();
        // Odometer over (rows, cols) with the last column slot fastest.
        let n = dims.len();
        let mut carried = true;
        for slot in (0..2 * n).rev() {
            let (list, pos) = if slot < n {
                (&mut succ.rows, slot)
            } else {
                (&mut succ.cols, slot - n)
            };
            list[pos] += 1;
            if list[pos] < dims[pos] {
                carried = false;
                break;
            }
            list[pos] = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_dims_and_empty() {
        assert!(Signature::new(vec![]).is_err());
        assert!(matches!(
            Signature::new(vec![2, 1, 3]),
            Err(Error::InvalidSignature(_))
        ));
        assert_eq!(Signature::new(vec![2, 3]).unwrap().total_dim(), 6);
    }

    #[test]
    fn product_and_concat() {
        let a = Signature::new(vec![2, 3]).unwrap();
        let b = Signature::new(vec![3, 2]).unwrap();
        assert_eq!(Signature::product(&a, &b).unwrap().dims(), &[6, 6]);
        assert_eq!(a.concat(&b).dims(), &[2, 3, 3, 2]);
        let c = Signature::new(vec![2]).unwrap();
        assert!(matches!(
            Signature::product(&a, &c),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn units_enumerates_everything_once_in_order() {
        let sig = Signature::new(vec![2, 3]).unwrap();
        let all: Vec<_> = sig.units().collect();
        assert_eq!(all.len(), 36);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|u| u.validate(&sig).is_ok()));
    }

    #[test]
    fn one_based_round_trip_and_validation() {
        let sig = Signature::new(vec![2, 2]).unwrap();
        let idx = MatrixUnitIndex::one_based(&[1, 2], &[2, 1]).unwrap();
        assert_eq!(idx.rows(), &[0, 1]);
        assert_eq!(idx.cols_one_based(), vec![2, 1]);
        idx.validate(&sig).unwrap();

        let bad = MatrixUnitIndex::one_based(&[1, 3], &[1, 1]).unwrap();
        match bad.validate(&sig) {
            Err(Error::IndexOutOfRange {
                axis: Axis::Row,
                position: 2,
                index: 3,
                dim: 2,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(MatrixUnitIndex::one_based(&[0], &[1]).is_err());
        assert!(MatrixUnitIndex::one_based(&[1, 1], &[1]).is_err());
    }
}
