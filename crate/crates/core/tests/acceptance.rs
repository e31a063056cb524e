//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uhfkron::dense::{from_dense, max_abs_diff};
use uhfkron::gns::{commutant_dimension, gns_intertwiner, GnsTriplet, RANK_CUTOFF};
use uhfkron::sample::{random_element, random_matrix, random_product_state};
use uhfkron::suites;
use uhfkron::{
    atom_state, coproduct, kron_box, state_boxtimes, state_tensor_phi_eval, state_trace_distance,
    to_dense, AlgebraElement, AtomLabel, Complex64, DenseMatrix, DensityFactor, MatrixUnitIndex,
    ProductState, Signature, StateFunctional, TensorPhiState,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn sig(d: &[usize]) -> Signature {
    Signature::new(d.to_vec()).unwrap()
}

fn repeated(p: &[f64], level: usize) -> ProductState {
    ProductState::new(vec![DensityFactor::diagonal(p).unwrap(); level]).unwrap()
}

fn unit(d: &[usize], r: &[usize], c: &[usize]) -> AlgebraElement {
    AlgebraElement::matrix_unit(sig(d), MatrixUnitIndex::one_based(r, c).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1_non_symmetry() -> Outcome {
    let t = repeated(&[1.0, 0.0], 1);
    let r = repeated(&[0.0, 1.0], 1);
    let x = unit(&[4], &[2], &[2]).sub(&unit(&[4], &[3], &[3])).unwrap();
    let tr = state_tensor_phi_eval(&t, &r, &x).unwrap();
    let rt = state_tensor_phi_eval(&r, &t, &x).unwrap();
    ensure((tr - Complex64::new(1.0, 0.0)).norm() <= 1e-12, || {
        format!("(ω⊗ω')(x) = {tr}")
    })?;
    ensure((rt - Complex64::new(-1.0, 0.0)).norm() <= 1e-12, || {
        format!("(ω'⊗ω)(x) = {rt}")
    })?;
    Ok(format!("values {tr} and {rt}"))
}

fn ac2_tensor_formula() -> Outcome {
    let a = sig(&[2, 3, 2]);
    let b = sig(&[3, 2, 2]);
    let ab = Signature::product(&a, &b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let s = random_product_state(&a, &mut rng).unwrap();
        let r = random_product_state(&b, &mut rng).unwrap();
        let sr = state_boxtimes(&s, &r).unwrap();
        for _ in 0..200 {
            let x = random_element(&ab, 8, &mut rng);
            let lhs = state_tensor_phi_eval(&s, &r, &x).unwrap();
            let rhs = sr.evaluate(&x).unwrap();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "50 pairs x 200 elements, max deviation {worst:.2e}"
    ))
}

fn ac3_coassociativity() -> Outcome {
    let mut total = 0;
    for level in [1, 2] {
        let (a, b, c) = (
            Signature::constant(2, level).unwrap(),
            Signature::constant(3, level).unwrap(),
            Signature::constant(2, level).unwrap(),
        );
        let r = suites::coassociativity(&a, &b, &c).unwrap();
        let expected = Signature::constant(12, level).unwrap().unit_count();
        ensure(r.failed == 0 && r.passed == expected, || {
            format!("level {level}: {r:?}")
        })?;
        total += r.passed;
    }
    Ok(format!("{total} units, exact"))
}

fn ac4_compatibility() -> Outcome {
    let mut total = 0;
    for (da, db) in [(2, 2), (2, 3)] {
        for n in [1, 2] {
            let a = Signature::constant(da, n + 1).unwrap();
            let b = Signature::constant(db, n + 1).unwrap();
            let r = suites::compatibility(&a, &b).unwrap();
            let expected = Signature::constant(da * db, n).unwrap().unit_count();
            ensure(r.failed == 0 && r.passed == expected, || {
                format!("dims ({da},{db}), n={n}: {r:?}")
            })?;
            total += r.passed;
        }
    }
    Ok(format!("{total} units, exact"))
}

fn ac5_level_one_anchor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(3, &mut rng);
        let x = from_dense(sig(&[6]), &kron_box(&a, &b)).unwrap();
        let y = coproduct(&x, &sig(&[2]), &sig(&[3])).unwrap();
        let tensor = from_dense(sig(&[2]), &a)
            .unwrap()
            .tensor(&from_dense(sig(&[3]), &b).unwrap());
        ensure(y.approx_eq(&tensor, 1e-12), || {
            "φ(A⊠B) ≠ A⊗B termwise".into()
        })?;
        // independent dense route: nalgebra's Kronecker product
        worst = worst.max(max_abs_diff(&to_dense(&y).unwrap(), &a.kronecker(&b)));
    }
    ensure(worst <= 1e-12, || format!("dense deviation {worst:e}"))?;
    Ok(format!("20 pairs, dense deviation {worst:.2e}"))
}

fn ac6_gns() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let shapes: [&[usize]; 6] = [&[2], &[3], &[2, 2], &[2, 3], &[3, 2], &[3, 3]];
    let mut worst_expect: f64 = 0.0;
    for k in 0..20 {
        let s = random_product_state(&sig(shapes[k % shapes.len()]), &mut rng).unwrap();
        let g = GnsTriplet::build(&s, RANK_CUTOFF).unwrap();
        worst_expect = worst_expect.max(g.expectation_error());
    }
    ensure(worst_expect <= 1e-10, || {
        format!("expectation error {worst_expect:e}")
    })?;

    let pairs: [(&[usize], &[usize]); 4] =
        [(&[2], &[2]), (&[2], &[3]), (&[3], &[3]), (&[2, 2], &[2, 2])];
    let (mut worst_unitary, mut worst_inter, mut max_dim): (f64, f64, usize) = (0.0, 0.0, 0);
    for (da, db) in pairs {
        let t = random_product_state(&sig(da), &mut rng).unwrap();
        let r = random_product_state(&sig(db), &mut rng).unwrap();
        let it = gns_intertwiner(&t, &r, RANK_CUTOFF).map_err(|e| e.to_string())?;
        let dim = it.unitary.nrows();
        ensure(dim <= 256, || format!("GNS dimension {dim} above 256"))?;
        max_dim = max_dim.max(dim);
        worst_unitary = worst_unitary.max(it.unitarity_defect());
        worst_inter = worst_inter.max(it.intertwining_error());
    }
    ensure(worst_unitary <= 1e-8, || {
        format!("unitarity defect {worst_unitary:e}")
    })?;
    ensure(worst_inter <= 1e-8, || {
        format!("intertwining error {worst_inter:e}")
    })?;
    Ok(format!(
        "expectation {worst_expect:.1e}, U†U−I {worst_unitary:.1e}, intertwining {worst_inter:.1e}, max dim {max_dim}"
    ))
}

fn ac7_irreducibility() -> Outcome {
    let atom = atom_state(&AtomLabel::finite(2, vec![1, 2, 1]).unwrap(), 3).unwrap();
    let g = GnsTriplet::build(&atom, RANK_CUTOFF).unwrap();
    let d_atom = commutant_dimension(&g).unwrap();
    let trace = GnsTriplet::build(&repeated(&[0.5, 0.5], 1), RANK_CUTOFF).unwrap();
    let d_trace = commutant_dimension(&trace).unwrap();
    ensure(d_atom == 1 && d_trace == 4, || {
        format!("atom {d_atom}, trace state {d_trace}")
    })?;
    Ok(format!(
        "atom (2,2,2): {d_atom}, trace state on M_2: {d_trace}"
    ))
}

fn ac8_atom_semigroup() -> Outcome {
    let r = suites::atoms(2, 2, 3).unwrap();
    ensure(r.failed == 0 && r.passed == 64, || format!("{r:?}"))?;
    Ok("64 pairs, 4096 units each".into())
}

/// Level density of an arbitrary state functional, `D_{kj} = ω(E_{jk})`.
fn density_of<S: StateFunctional>(s: &S) -> DenseMatrix {
    let sg = s.signature().clone();
    let n = sg.total_dim();
    let mut d = DenseMatrix::zeros(n, n);
    for u in sg.units() {
        let e = AlgebraElement::matrix_unit(sg.clone(), u.clone()).unwrap();
        let pos = to_dense(&e).unwrap();
        let (j, k) = pos
            .iter()
            .position(|z| *z != Complex64::default())
            .map(|flat| (flat % n, flat / n))
            .unwrap();
        d[(k, j)] = s.eval_unit(&u);
    }
    d
}

fn ac9_trace_distance() -> Outcome {
    let mut worst: f64 = 0.0;
    for level in 1..=3 {
        let t = repeated(&[1.0, 0.0], level);
        let r = repeated(&[0.0, 1.0], level);
        // via T⊠R
        let via_box = state_trace_distance(
            &state_boxtimes(&t, &r).unwrap(),
            &state_boxtimes(&r, &t).unwrap(),
        )
        .unwrap();
        // via ⊗_φ evaluations
        let tr = density_of(&TensorPhiState::new(&t, &r).unwrap());
        let rt = density_of(&TensorPhiState::new(&r, &t).unwrap());
        let via_phi: f64 = (tr - rt)
            .symmetric_eigenvalues()
            .iter()
            .map(|v| v.abs())
            .sum();
        for d in [via_box, via_phi] {
            worst = worst.max((d - 2.0).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("deviation from 2: {worst:e}"))?;
    Ok(format!("levels 1..3, deviation from 2: {worst:.1e}"))
}

fn ac10_associativity() -> Outcome {
    let d = sig(&[2, 2]);
    let r = suites::associativity(&d, &d, &d, 10, 1e-10).unwrap();
    ensure(r.failed == 0 && r.passed == 4096, || format!("{r:?}"))?;
    Ok(format!("{} units of (8,8)", r.passed))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "AC1",
            "non-symmetry witness",
            Duration::from_secs(1),
            ac1_non_symmetry,
        ),
        (
            "AC2",
            "tensor-product formula",
            Duration::from_secs(10),
            ac2_tensor_formula,
        ),
        (
            "AC3",
            "coassociativity",
            Duration::from_secs(5),
            ac3_coassociativity,
        ),
        (
            "AC4",
            "compatibility with embeddings",
            Duration::from_secs(5),
            ac4_compatibility,
        ),
        (
            "AC5",
            "level-1 Kronecker anchor",
            Duration::MAX,
            ac5_level_one_anchor,
        ),
        (
            "AC6",
            "GNS triplets and intertwiner",
            Duration::from_secs(60),
            ac6_gns,
        ),
        (
            "AC7",
            "irreducibility proxies",
            Duration::MAX,
            ac7_irreducibility,
        ),
        (
            "AC8",
            "atom semigroup",
            Duration::from_secs(30),
            ac8_atom_semigroup,
        ),
        (
            "AC9",
            "trace-distance separation",
            Duration::MAX,
            ac9_trace_distance,
        ),
        (
            "AC10",
            "associativity of tensor product on states",
            Duration::MAX,
            ac10_associativity,
        ),
    ];

    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed > limit {
                Err(format!("{msg}; runtime {elapsed:.2?} over limit {limit:?}"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("{id} {name}: PASS ({msg}) [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("{id} {name}: FAIL ({msg}) [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
