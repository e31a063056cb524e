//! The `uhfkron` command line front end. Every subcommand prints exactly one
//! JSON document on standard output.

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::atoms::{atom_label_product, AtomLabel};
use crate::coproduct::coproduct;
use crate::element::Complex64;
use crate::error::{Error, Result};
use crate::expr::{format_element, parse_element, parse_state};
use crate::gns::{commutant_dimension, gns_intertwiner, GnsTriplet, Representation, RANK_CUTOFF};
use crate::signature::Signature;
use crate::states::{state_boxtimes, state_tensor_phi_eval, state_trace_distance};
use crate::suites::run_suite;
use crate::tolerance::Tolerances;

#[derive(Debug, Parser)]
#[command(
    name = "uhfkron",
    version,
    about = "Kronecker coproducts and product states on UHF stages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a product state on an element.
    Eval {
        #[arg(long)]
        state: String,
        #[arg(long)]
        expr: String,
    },
    /// Print the coproduct φ_{a,b}(x) as a term list.
    Coproduct {
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<usize>,
        #[arg(long)]
        expr: String,
    },
    /// Evaluate ω_T ⊗_φ ω_R on an element over a·b.
    TensorState {
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<usize>,
        #[arg(long = "T")]
        t: String,
        #[arg(long = "R")]
        r: String,
        #[arg(long)]
        expr: String,
    },
    /// Componentwise Kronecker product T ⊠ R of state data.
    Boxtimes {
        #[arg(long = "T")]
        t: String,
        #[arg(long = "R")]
        r: String,
    },
    /// Label product J·K of atom labels.
    AtomProduct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "J", value_delimiter = ',')]
        j: Vec<usize>,
        #[arg(long = "K", value_delimiter = ',')]
        k: Vec<usize>,
        /// Constant tail continuing J.
        #[arg(long = "J-tail")]
        j_tail: Option<usize>,
        /// Constant tail continuing K.
        #[arg(long = "K-tail")]
        k_tail: Option<usize>,
    },
    /// GNS data of a product state; with --R also the intertwiner for T ⊠ R.
    Gns {
        #[arg(long)]
        state: String,
        #[arg(long = "R")]
        r: Option<String>,
    },
    /// Run a named property suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Trace-norm distance of two level densities.
    Distance {
        #[arg(long = "S1")]
        s1: String,
        #[arg(long = "S2")]
        s2: String,
    },
}

#[derive(Debug, Serialize)]
struct JsonComplex {
    re: f64,
    im: f64,
}

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct ValueOut {
    value: JsonComplex,
}

#[derive(Serialize)]
struct TermOut {
    rows: Vec<usize>,
    cols: Vec<usize>,
    value: JsonComplex,
}

#[derive(Serialize)]
struct CoproductOut {
    signature: Vec<usize>,
    terms: Vec<TermOut>,
    text: String,
}

#[derive(Serialize)]
struct BoxtimesOut {
    signature: Vec<usize>,
    factors: Vec<Vec<Vec<JsonComplex>>>,
}

#[derive(Serialize)]
struct LabelOut {
    base: usize,
    label: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<usize>,
}

#[derive(Serialize)]
struct IntertwinerOut {
    space_dim: usize,
    unitarity_defect: f64,
    intertwining_error: f64,
}

#[derive(Serialize)]
struct GnsOut {
    space_dim: usize,
    ranks: Vec<usize>,
    commutant_dim: Option<usize>,
    expectation_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    intertwiner: Option<IntertwinerOut>,
}

#[derive(Serialize)]
struct DistanceOut {
    distance: f64,
}

#[derive(Serialize)]
struct ErrorBody {
    code: String,
    message: String,
}

#[derive(Serialize)]
struct ErrorOut {
    error: ErrorBody,
}

fn signature(dims: &[usize]) -> Result<Signature> {
    Signature::new(dims.to_vec())
}

fn expect_sig(what: &str, got: &Signature, want: &Signature) -> Result<()> {
    if got != want {
        return Err(Error::InvalidInput(format!(
            "{what} has signature {got}, expected {want}"
        )));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("output types serialize")
}

fn execute(command: Command, tol: Tolerances) -> Result<(i32, String)> {
    let out = match command {
        Command::Eval { state, expr } => {
            let s = parse_state(&state)?;
            let x = parse_element(&expr)?;
            to_json(&ValueOut {
                value: s.evaluate(&x)?.into(),
            })
        }
        Command::Coproduct { a, b, expr } => {
            let x = parse_element(&expr)?;
            let y = coproduct(&x, &signature(&a)?, &signature(&b)?)?;
            to_json(&CoproductOut {
                signature: y.signature().dims().to_vec(),
                terms: y
                    .terms()
                    .map(|(idx, c)| TermOut {
                        rows: idx.rows_one_based(),
                        cols: idx.cols_one_based(),
                        value: (*c).into(),
                    })
                    .collect(),
                text: format_element(&y),
            })
        }
        Command::TensorState { a, b, t, r, expr } => {
            let (a, b) = (signature(&a)?, signature(&b)?);
            let (t, r) = (parse_state(&t)?, parse_state(&r)?);
            expect_sig("--T", t.signature_ref(), &a)?;
            expect_sig("--R", r.signature_ref(), &b)?;
            let x = parse_element(&expr)?;
            to_json(&ValueOut {
                value: state_tensor_phi_eval(&t, &r, &x)?.into(),
            })
        }
        Command::Boxtimes { t, r } => {
            let p = state_boxtimes(&parse_state(&t)?, &parse_state(&r)?)?;
            to_json(&BoxtimesOut {
                signature: p.signature_ref().dims().to_vec(),
                factors: p
                    .factors()
                    .iter()
                    .map(|f| {
                        let m = f.matrix();
                        (0..m.nrows())
                            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
                            .collect()
                    })
                    .collect(),
            })
        }
        Command::AtomProduct {
            n,
            m,
            j,
            k,
            j_tail,
            k_tail,
        } => {
            let jl = AtomLabel::new(n, j, j_tail)?;
            let kl = AtomLabel::new(m, k, k_tail)?;
            let p = atom_label_product(&jl, &kl)?;
            to_json(&LabelOut {
                base: p.base(),
                label: p.prefix().to_vec(),
                tail: p.tail(),
            })
        }
        Command::Gns { state, r } => {
            let s = parse_state(&state)?;
            let g = GnsTriplet::build(&s, RANK_CUTOFF)?;
            let commutant_dim = match commutant_dimension(&g) {
                Ok(d) => Some(d),
                Err(Error::DimensionGuard { .. }) => None,
                Err(e) => return Err(e),
            };
            let intertwiner = match r {
                Some(r) => {
                    let it = gns_intertwiner(&s, &parse_state(&r)?, RANK_CUTOFF)?;
                    Some(IntertwinerOut {
                        space_dim: it.product_gns.space_dim(),
                        unitarity_defect: it.unitarity_defect(),
                        intertwining_error: it.intertwining_error(),
                    })
                }
                None => None,
            };
            to_json(&GnsOut {
                space_dim: g.space_dim(),
                ranks: g.ranks(),
                commutant_dim,
                expectation_error: g.expectation_error(),
                intertwiner,
            })
        }
        Command::Check {
            suite,
            dims,
            level,
            seed,
        } => {
            let report = run_suite(&suite, &dims, level, seed, tol.compare)?;
            let code = if report.failed == 0 { 0 } else { 1 };
            return Ok((code, to_json(&report)));
        }
        Command::Distance { s1, s2 } => to_json(&DistanceOut {
            distance: state_trace_distance(&parse_state(&s1)?, &parse_state(&s2)?)?,
        }),
    };
    Ok((0, out))
}

fn error_json(code: &str, message: String) -> String {
    to_json(&ErrorOut {
        error: ErrorBody {
            code: code.into(),
            message,
        },
    })
}

/// Runs one invocation; returns the exit code and the JSON text for stdout.
///
/// Exit codes: 0 success, 1 validation or computation failure (including a
/// suite with failures), 2 usage error.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (2, error_json("usage", e.to_string().trim().to_string())),
            };
        }
    };
    match execute(cli.command, Tolerances::from_env()) {
        Ok(r) => r,
        Err(e) => (1, error_json(e.code(), e.to_string())),
    }
}
