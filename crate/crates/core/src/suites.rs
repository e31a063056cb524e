//! Named property suites: exhaustive or seeded checks of the identities the
//! coproduct and the tensor product are required to satisfy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::atoms::{atom_check_product, AtomLabel};
use crate::coproduct::{coproduct, coproduct_inverse, coproduct_on_block, embed_identity_at};
use crate::dense::{block_permutation, max_abs_diff, to_dense};
use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::sample::{random_element, random_product_state};
use crate::signature::Signature;
use crate::states::{
    state_boxtimes, state_tensor_phi_eval, ProductState, StateFunctional, TensorPhiState,
};

pub const SUITES: &[&str] = &[
    "coassociativity",
    "compatibility",
    "bijection",
    "homomorphism",
    "dense-oracle",
    "tensor-formula",
    "associativity",
    "atoms",
];

/// Only the first few failures are kept.
const MAX_FAILURES: usize = 8;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }
}

fn unit_element(sig: &Signature, u: crate::signature::MatrixUnitIndex) -> AlgebraElement {
    AlgebraElement::from_valid_terms(sig.clone(), [(u, crate::element::Complex64::new(1.0, 0.0))])
}

fn describe(u: &crate::signature::MatrixUnitIndex) -> String {
    format!(
        "rows {:?} cols {:?}",
        u.rows_one_based(),
        u.cols_one_based()
    )
}

/// `(φ_{a,b} ⊗ id_c) ∘ φ_{a·b,c} = (id_a ⊗ φ_{b,c}) ∘ φ_{a,b·c}` on every unit
/// of `A_n(a·b·c)`, compared exactly.
pub fn coassociativity(a: &Signature, b: &Signature, c: &Signature) -> Result<SuiteReport> {
    let ab = Signature::product(a, b)?;
    let bc = Signature::product(b, c)?;
    let abc = Signature::product(&ab, c)?;
    let n = a.level();
    let mut report = SuiteReport::default();
    for u in abc.units() {
        let x = unit_element(&abc, u.clone());
        let left = coproduct_on_block(&coproduct(&x, &ab, c)?, 0, a, b)?;
        let right = coproduct_on_block(&coproduct(&x, a, &bc)?, n, b, c)?;
        report.record(left == right, || describe(&u));
    }
    Ok(report)
}

/// `(ψ_a ⊗ ψ_b) ∘ φ^{(n)} = φ^{(n+1)} ∘ ψ_{a·b}` on every unit of `A_n(a·b)`.
/// `a` and `b` have `n + 1` slots; the last one is the embedding target.
pub fn compatibility(a: &Signature, b: &Signature) -> Result<SuiteReport> {
    let levels = a.level();
    if levels < 2 || b.level() != levels {
        return Err(Error::InvalidInput(format!(
            "compatibility needs two signatures of equal level at least 2, got {a} and {b}"
        )));
    }
    let n = levels - 1;
    let (a_n, b_n) = (a.slice(0, n)?, b.slice(0, n)?);
    let (next_a, next_b) = (a.dims()[n], b.dims()[n]);
    let ab_n = Signature::product(&a_n, &b_n)?;
    let mut report = SuiteReport::default();
    for u in ab_n.units() {
        let x = unit_element(&ab_n, u.clone());
        let y = coproduct(&x, &a_n, &b_n)?;
        let left = embed_identity_at(&embed_identity_at(&y, 2 * n, next_b)?, n, next_a)?;
        let right = coproduct(&x.embed_psi(next_a * next_b)?, a, b)?;
        report.record(left == right, || describe(&u));
    }
    Ok(report)
}

/// `φ` maps units to distinct single units with coefficient 1, and `φ^{-1}` undoes it.
pub fn bijection(a: &Signature, b: &Signature) -> Result<SuiteReport> {
    let ab = Signature::product(a, b)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut report = SuiteReport::default();
    for u in ab.units() {
        let x = unit_element(&ab, u.clone());
        let y = coproduct(&x, a, b)?;
        let single = y.num_terms() == 1
            && y.terms().all(|(i, c)| {
                *c == crate::element::Complex64::new(1.0, 0.0) && seen.insert(i.clone())
            });
        let back = coproduct_inverse(&y, a.level())? == x;
        report.record(single && back, || describe(&u));
    }
    Ok(report)
}

/// `φ(x+y) = φ(x)+φ(y)`, `φ(xy) = φ(x)φ(y)`, `φ(x*) = φ(x)*` on seeded samples.
pub fn homomorphism(
    a: &Signature,
    b: &Signature,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    let ab = Signature::product(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    for s in 0..samples {
        let x = random_element(&ab, 12, &mut rng);
        let y = random_element(&ab, 12, &mut rng);
        let (px, py) = (coproduct(&x, a, b)?, coproduct(&y, a, b)?);
        let sum = coproduct(&x.add(&y)?, a, b)?.approx_eq(&px.add(&py)?, tol);
        let prod = coproduct(&x.mul(&y)?, a, b)?.approx_eq(&px.mul(&py)?, tol);
        let adj = coproduct(&x.adjoint(), a, b)?.approx_eq(&px.adjoint(), tol);
        report.record(sum && prod && adj, || {
            format!("sample {s}: additive {sum}, multiplicative {prod}, adjoint {adj}")
        });
    }
    Ok(report)
}

/// `dense(φ(x)) = P dense(x) Pᵀ` on seeded samples.
pub fn dense_oracle(
    a: &Signature,
    b: &Signature,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    let ab = Signature::product(a, b)?;
    let p = block_permutation(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    for s in 0..samples {
        let x = random_element(&ab, 16, &mut rng);
        let lhs = to_dense(&coproduct(&x, a, b)?)?;
        let rhs = &p * to_dense(&x)? * p.transpose();
        let gap = max_abs_diff(&lhs, &rhs);
        report.record(gap <= tol, || format!("sample {s}: gap {gap:e}"));
    }
    Ok(report)
}

/// `ω_S ⊗_φ ω_R = ω_{S⊠R}` on every unit of `A_n(a·b)`, for `states` seeded
/// random pairs.
pub fn tensor_formula(
    a: &Signature,
    b: &Signature,
    states: usize,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    let ab = Signature::product(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    for k in 0..states {
        let s = random_product_state(a, &mut rng)?;
        let r = random_product_state(b, &mut rng)?;
        let sr = state_boxtimes(&s, &r)?;
        for u in ab.units() {
            let x = unit_element(&ab, u.clone());
            let lhs = state_tensor_phi_eval(&s, &r, &x)?;
            let rhs = sr.eval_unit(&u);
            report.record((lhs - rhs).norm() <= tol, || {
                format!("pair {k}, {}: {lhs} vs {rhs}", describe(&u))
            });
        }
    }
    Ok(report)
}

/// `(ρ_1 ⊗_φ ρ_2) ⊗_φ ρ_3 = ρ_1 ⊗_φ (ρ_2 ⊗_φ ρ_3)` on every unit of
/// `A_n(a·b·c)` for one seeded random triple of product states.
pub fn associativity(
    a: &Signature,
    b: &Signature,
    c: &Signature,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s1 = random_product_state(a, &mut rng)?;
    let s2 = random_product_state(b, &mut rng)?;
    let s3 = random_product_state(c, &mut rng)?;
    associativity_for(&s1, &s2, &s3, tol)
}

pub fn associativity_for(
    s1: &ProductState,
    s2: &ProductState,
    s3: &ProductState,
    tol: f64,
) -> Result<SuiteReport> {
    let left = TensorPhiState::new(TensorPhiState::new(s1, s2)?, s3)?;
    let right = TensorPhiState::new(s1, TensorPhiState::new(s2, s3)?)?;
    let sig = left.signature().clone();
    let mut report = SuiteReport::default();
    for u in sig.units() {
        let (l, r) = (left.eval_unit(&u), right.eval_unit(&u));
        report.record((l - r).norm() <= tol, || {
            format!("{}: {l} vs {r}", describe(&u))
        });
    }
    Ok(report)
}

/// Every label pair `J ∈ {1..n}^level`, `K ∈ {1..m}^level`, through
/// [`atom_check_product`].
pub fn atoms(n: usize, m: usize, level: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for j in all_labels(n, level)? {
        for k in all_labels(m, level)? {
            let check = atom_check_product(&j, &k, level)?;
            report.record(check.holds, || {
                format!(
                    "J={j}, K={k}: {}",
                    check.diagnostic.clone().unwrap_or_default()
                )
            });
        }
    }
    Ok(report)
}

fn all_labels(base: usize, level: usize) -> Result<Vec<AtomLabel>> {
    let count = base.pow(level as u32);
    (0..count)
        .map(|mut code| {
            let mut v = vec![0; level];
            for slot in (0..level).rev() {
                v[slot] = code % base + 1;
                code /= base;
            }
            AtomLabel::finite(base, v)
        })
        .collect()
}

/// Dispatch used by the command line `check` subcommand. Each entry of `dims`
/// is a factor dimension repeated over `level` slots.
pub fn run_suite(
    name: &str,
    dims: &[usize],
    level: usize,
    seed: u64,
    tol: f64,
) -> Result<SuiteReport> {
    let need = |k: usize| -> Result<Vec<Signature>> {
        if dims.len() != k {
            return Err(Error::InvalidInput(format!(
                "suite `{name}` needs {k} dimensions, got {}",
                dims.len()
            )));
        }
        dims.iter()
            .map(|&d| Signature::constant(d, level))
            .collect()
    };
    match name {
        "coassociativity" => {
            let s = need(3)?;
            coassociativity(&s[0], &s[1], &s[2])
        }
        "compatibility" => {
            need(2)?;
            let a = Signature::constant(dims[0], level + 1)?;
            let b = Signature::constant(dims[1], level + 1)?;
            compatibility(&a, &b)
        }
        "bijection" => {
            let s = need(2)?;
            bijection(&s[0], &s[1])
        }
        "homomorphism" => {
            let s = need(2)?;
            homomorphism(&s[0], &s[1], 50, seed, tol)
        }
        "dense-oracle" => {
            let s = need(2)?;
            dense_oracle(&s[0], &s[1], 20, seed, tol)
        }
        "tensor-formula" => {
            let s = need(2)?;
            tensor_formula(&s[0], &s[1], 5, seed, tol)
        }
        "associativity" => {
            let s = need(3)?;
            associativity(&s[0], &s[1], &s[2], seed, tol.max(1e-10))
        }
        "atoms" => {
            need(2)?;
            atoms(dims[0], dims[1], level)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown suite `{other}`; available: {}",
            SUITES.join(", ")
        ))),
    }
}
