//! Generalized cycle classes and their intersection products on smooth
//! projective varieties: projective space, products of two projective
//! spaces, and the blow-up of the projective plane at a point.
//!
//! Classes live in truncated graded rings ([`ring`]); ambient spaces,
//! supports and embeddings are in [`spaces`]; classes are
//! [`gcycle::GCycleClass`]; products and their conversions are in
//! [`products`].

pub mod error;
pub mod gcycle;
pub mod products;
pub mod ring;
pub mod sample;
pub mod spaces;

pub use error::{Error, Result};
pub use gcycle::{GCycleClass, Multiplicities};
pub use products::{
    AxiomKind, AxiomVerdict, ProductAxiom, ProductContext, ProductEngine, ProductKind, Sign,
    TraceEntry,
};
pub use ring::{RingDescriptor, RingElement};
pub use spaces::{Ambient, AmbientKind, Embedding, Support, SupportSpec, FULL_SUPPORT};
