//! Finite stages of UHF algebras, the Kronecker coproduct and the
//! non-symmetric tensor product of product states and their GNS
//! representations.
//!
//! An element of `M_{a_1} ⊗ … ⊗ M_{a_n}` is stored sparsely as a map from
//! matrix-unit tensors to complex coefficients ([`AlgebraElement`]). The
//! coproduct [`coproduct`] recodes every index `j ∈ {1,…,ab}` as the pair
//! `(j', j'')` with `j = b(j'−1) + j''`, turning an element over `a·b` into an
//! element over the concatenated signature `(a, b)`. Dense matrices are only
//! used as an independent oracle and for the finite-dimensional GNS spaces.
//!
//! All public indices are 1-based. Internally everything is 0-based.

#![forbid(unsafe_code)]

pub mod atoms;
pub mod cli;
pub mod coproduct;
pub mod dense;
pub mod element;
pub mod error;
pub mod expr;
pub mod gns;
pub mod sample;
pub mod signature;
pub mod states;
pub mod suites;
pub mod tolerance;

pub use atoms::{atom_check_product, atom_label_product, atom_state, AtomLabel, ProductCheck};
pub use coproduct::{
    coproduct, coproduct_inverse, coproduct_on_block, embed_identity_at, split_index,
};
pub use dense::{block_permutation, kron_box, to_dense, DenseMatrix, DENSE_GUARD};
pub use element::{AlgebraElement, Complex64};
pub use error::{Error, Result};
pub use gns::{
    commutant_dimension, cyclic_intertwiner, gns_intertwiner, CyclicRepresentation, FactorGns,
    GnsTriplet, Representation, SparseOp, TensorPhiRep,
};
pub use signature::{MatrixUnitIndex, Signature};
pub use states::{
    random_density, state_boxtimes, state_density_level, state_tensor_phi_eval,
    state_trace_distance, DensityFactor, ProductState, StateFunctional, TensorPhiState,
};
pub use tolerance::Tolerances;
