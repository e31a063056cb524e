//! Atom states `T(J) = (F_{j_1}, F_{j_2}, …)` with `F_j = E_{jj}` and the
//! label product `J·K = (m(j_1−1)+k_1, m(j_2−1)+k_2, …)`.

use std::fmt;

use crate::element::Complex64;
use crate::error::{Error, Result};
use crate::states::{
    state_boxtimes, state_tensor_phi_eval, DensityFactor, ProductState, StateFunctional,
};

/// A label `J ∈ {1,…,n}^∞`, stored as a finite prefix and an optional
/// constant tail `(j, j, j, …)` continuing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomLabel {
    base: usize,
    prefix: Vec<usize>,
    tail: Option<usize>,
}

impl AtomLabel {
    /// 1-based entries.
    pub fn new(base: usize, prefix: Vec<usize>, tail: Option<usize>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidLabel(format!("base {base} is below 2")));
        }
        if prefix.is_empty() && tail.is_none() {
            return Err(Error::InvalidLabel("label is empty".into()));
        }
        for (pos, &j) in prefix.iter().enumerate() {
            if !(1..=base).contains(&j) {
                return Err(Error::InvalidLabel(format!(
                    "entry {j} at position {} is outside 1..={base}",
                    pos + 1
                )));
            }
        }
        if let Some(j) = tail {
            if !(1..=base).contains(&j) {
                return Err(Error::InvalidLabel(format!(
                    "tail entry {j} is outside 1..={base}"
                )));
            }
        }
        Ok(Self { base, prefix, tail })
    }

    pub fn finite(base: usize, prefix: Vec<usize>) -> Result<Self> {
        Self::new(base, prefix, None)
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<usize> {
        self.tail
    }

    /// Number of defined entries; `None` when a tail makes it infinite.
    pub fn defined_len(&self) -> Option<usize> {
        match self.tail {
            Some(_) => None,
            None => Some(self.prefix.len()),
        }
    }

    /// Entry `l` (0-based position, 1-based value).
    pub fn entry(&self, l: usize) -> Option<usize> {
        self.prefix.get(l).copied().or(self.tail)
    }

    /// First `level` entries.
    pub fn entries(&self, level: usize) -> Result<Vec<usize>> {
        (0..level)
            .map(|l| {
                self.entry(l).ok_or_else(|| {
                    Error::InvalidLabel(format!(
                        "level {level} exceeds the {} defined entries and no tail is set",
                        self.prefix.len()
                    ))
                })
            })
            .collect()
    }
}

impl fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.base)?;
        for (i, j) in self.prefix.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        if let Some(t) = self.tail {
            write!(f, ";{t},{t},…")?;
        }
        f.write_str("]")
    }
}

fn diagonal_unit(dim: usize, j: usize) -> DensityFactor {
    let mut p = vec![0.0; dim];
    p[j - 1] = 1.0;
    DensityFactor::diagonal(&p).expect("a diagonal matrix unit is a density")
}

/// `T(J)` truncated at `level`: factor `l` is `E_{j_l j_l}` in `M_n`.
pub fn atom_state(label: &AtomLabel, level: usize) -> Result<ProductState> {
    if level == 0 {
        return Err(Error::InvalidLabel("level must be at least 1".into()));
    }
    ProductState::new(
        label
            .entries(level)?
            .into_iter()
            .map(|j| diagonal_unit(label.base, j))
            .collect(),
    )
}

/// `J·K` in base `nm`, entrywise `m(j−1)+k`.
///
/// Finite labels must have equal lengths. A tailed label is extended to the
/// length of a finite partner; two tailed labels give a tailed product.
pub fn atom_label_product(j: &AtomLabel, k: &AtomLabel) -> Result<AtomLabel> {
    let m = k.base;
    let len = match (j.defined_len(), k.defined_len()) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::InvalidLabel(format!(
                "label lengths differ: {a} vs {b}"
            )))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => j.prefix.len().max(k.prefix.len()),
    };
    let combine = |a: usize, b: usize| m * (a - 1) + b;
    let prefix = (0..len)
        .map(|l| combine(j.entry(l).unwrap(), k.entry(l).unwrap()))
        .collect();
    let tail = match (j.tail, k.tail) {
        (Some(a), Some(b)) => Some(combine(a, b)),
        _ => None,
    };
    AtomLabel::new(j.base * m, prefix, tail)
}

/// Outcome of [`atom_check_product`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCheck {
    pub holds: bool,
    /// Number of level units on which `⊗_φ` evaluations were compared.
    pub units_checked: usize,
    pub diagnostic: Option<String>,
}

/// Checks `T(J) ⊠ T(K) = T(J·K)` factor by factor (exactly) and
/// `ω_{T(J)} ⊗_φ ω_{T(K)} = ω_{T(J·K)}` on every unit at `level`.
pub fn atom_check_product(j: &AtomLabel, k: &AtomLabel, level: usize) -> Result<ProductCheck> {
    atom_check_product_against(j, k, &atom_label_product(j, k)?, level)
}

/// [`atom_check_product`] against an arbitrary claimed label instead of `J·K`.
pub fn atom_check_product_against(
    j: &AtomLabel,
    k: &AtomLabel,
    claimed: &AtomLabel,
    level: usize,
) -> Result<ProductCheck> {
    let tj = atom_state(j, level)?;
    let tk = atom_state(k, level)?;
    let tjk = atom_state(claimed, level)?;
    let boxed = state_boxtimes(&tj, &tk)?;

    if boxed.signature() != tjk.signature() {
        return Ok(ProductCheck {
            holds: false,
            units_checked: 0,
            diagnostic: Some(format!(
                "signature {} of T(J)⊠T(K) differs from {} of the claimed label",
                boxed.signature(),
                tjk.signature()
            )),
        });
    }
    for (pos, (a, b)) in boxed.factors().iter().zip(tjk.factors()).enumerate() {
        if a.matrix() != b.matrix() {
            return Ok(ProductCheck {
                holds: false,
                units_checked: 0,
                diagnostic: Some(format!(
                    "factor {} differs: T(J)⊠T(K) has E_{{{p},{p}}}, label has entry {}",
                    pos + 1,
                    claimed.entry(pos).unwrap(),
                    p = diagonal_position(a).unwrap_or(0)
                )),
            });
        }
    }

    let sig = tjk.signature().clone();
    let mut checked = 0;
    for u in sig.units() {
        let x = crate::element::AlgebraElement::matrix_unit(sig.clone(), u.clone())?;
        let lhs = state_tensor_phi_eval(&tj, &tk, &x)?;
        let rhs = tjk.eval_unit(&u);
        checked += 1;
        if lhs != rhs {
            return Ok(ProductCheck {
                holds: false,
                units_checked: checked,
                diagnostic: Some(format!(
                    "evaluations differ on unit rows {:?} cols {:?}: {lhs} vs {rhs}",
                    u.rows_one_based(),
                    u.cols_one_based()
                )),
            });
        }
    }
    Ok(ProductCheck {
        holds: true,
        units_checked: checked,
        diagnostic: None,
    })
}

fn diagonal_position(f: &DensityFactor) -> Option<usize> {
    (0..f.dim())
        .find(|&i| f.matrix()[(i, i)] == Complex64::new(1.0, 0.0))
        .map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(base: usize, v: &[usize]) -> AtomLabel {
        AtomLabel::finite(base, v.to_vec()).unwrap()
    }

    #[test]
    fn label_validation() {
        assert!(AtomLabel::finite(2, vec![1, 3]).is_err());
        assert!(AtomLabel::finite(2, vec![0]).is_err());
        assert!(AtomLabel::finite(1, vec![1]).is_err());
        assert!(AtomLabel::finite(2, vec![]).is_err());
        assert!(AtomLabel::new(2, vec![], Some(2)).is_ok());
        assert!(AtomLabel::new(2, vec![1], Some(3)).is_err());
    }

    #[test]
    fn atom_state_factors() {
        let s = atom_state(&label(2, &[1, 2]), 2).unwrap();
        assert_eq!(
            s.factors()[0],
            DensityFactor::diagonal(&[1.0, 0.0]).unwrap()
        );
        assert_eq!(
            s.factors()[1],
            DensityFactor::diagonal(&[0.0, 1.0]).unwrap()
        );
        for f in s.factors() {
            assert_eq!(f.matrix().trace(), Complex64::new(1.0, 0.0));
            assert_eq!(f.matrix().rank(1e-12), 1);
        }
    }

    #[test]
    fn level_beyond_label_needs_tail() {
        assert!(matches!(
            atom_state(&label(2, &[1]), 2),
            Err(Error::InvalidLabel(_))
        ));
        let tailed = AtomLabel::new(3, vec![1], Some(3)).unwrap();
        let s = atom_state(&tailed, 3).unwrap();
        assert_eq!(
            s.factors()[2],
            DensityFactor::diagonal(&[0.0, 0.0, 1.0]).unwrap()
        );
    }

    #[test]
    fn label_product_worked_values() {
        let p = atom_label_product(&label(2, &[1, 1, 1]), &label(2, &[2, 2, 2])).unwrap();
        assert_eq!(p, label(4, &[2, 2, 2]));
        let p = atom_label_product(&label(2, &[2]), &label(3, &[1])).unwrap();
        assert_eq!(p, label(6, &[4]));
        assert!(atom_label_product(&label(2, &[1, 2]), &label(2, &[1])).is_err());
    }

    #[test]
    fn label_product_with_tails() {
        let j = AtomLabel::new(2, vec![1], Some(2)).unwrap();
        let k = label(3, &[1, 2, 3]);
        assert_eq!(atom_label_product(&j, &k).unwrap(), label(6, &[1, 5, 6]));
        let k = AtomLabel::new(3, vec![], Some(3)).unwrap();
        assert_eq!(
            atom_label_product(&j, &k).unwrap(),
            AtomLabel::new(6, vec![3], Some(6)).unwrap()
        );
    }

    #[test]
    fn label_product_range_is_exhaustive_bijection() {
        for n in 2..5 {
            for m in 2..5 {
                let mut seen = vec![false; n * m];
                for j in 1..=n {
                    for k in 1..=m {
                        let p = atom_label_product(&label(n, &[j]), &label(m, &[k])).unwrap();
                        let v = p.prefix()[0];
                        assert!((1..=n * m).contains(&v));
                        assert!(!seen[v - 1]);
                        seen[v - 1] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn product_check_worked_instance() {
        let c = atom_check_product(&label(2, &[1, 1]), &label(2, &[2, 2]), 2).unwrap();
        assert!(c.holds, "{:?}", c.diagnostic);
        assert_eq!(c.units_checked, 16 * 16);
    }

    #[test]
    fn product_check_rejects_corrupted_label() {
        let j = label(2, &[1, 2]);
        let k = label(2, &[2, 1]);
        let good = atom_label_product(&j, &k).unwrap();
        assert_eq!(good, label(4, &[2, 3]));
        let bad = label(4, &[2, 4]);
        let c = atom_check_product_against(&j, &k, &bad, 2).unwrap();
        assert!(!c.holds);
        assert!(c.diagnostic.unwrap().contains("factor 2"));
    }

    #[test]
    fn non_commutativity_witness() {
        let j = label(2, &[1, 1]);
        let k = label(2, &[2, 2]);
        assert_ne!(
            atom_label_product(&j, &k).unwrap(),
            atom_label_product(&k, &j).unwrap()
        );
    }
}
