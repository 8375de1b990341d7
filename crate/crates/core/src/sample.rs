//! Random elements and classes for property checks and the acceptance suite.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::gcycle::GCycleClass;
use crate::ring::{RingDescriptor, RingElement};
use crate::spaces::Ambient;

/// Uniform coefficients in `[-bound, bound]` on every basis monomial.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, ring: &Arc<RingDescriptor>, bound: i64) -> RingElement {
    RingElement::from_terms(
        ring,
        ring.basis()
            .into_iter()
            .map(|e| (e, BigInt::from(rng.gen_range(-bound..=bound)))),
    )
}

/// Homogeneous of degree `d`; zero when the ring has nothing in that degree.
pub fn random_homogeneous<R: Rng + ?Sized>(
    rng: &mut R,
    ring: &Arc<RingDescriptor>,
    d: u32,
    bound: i64,
) -> RingElement {
    RingElement::from_terms(
        ring,
        ring.basis_of_degree(d)
            .into_iter()
            .map(|e| (e, BigInt::from(rng.gen_range(-bound..=bound)))),
    )
}

/// A unit: `±1` plus a random nilpotent part.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, ring: &Arc<RingDescriptor>, bound: i64) -> RingElement {
    let mut x = random_element(rng, ring, bound);
    let c = x.constant_term();
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    x = &x - &RingElement::constant(ring, c - sign);
    x
}

/// A random component on `support` of dimension `dim`.
pub fn random_component<R: Rng + ?Sized>(
    rng: &mut R,
    ambient: &Arc<Ambient>,
    support: &str,
    dim: u32,
    bound: i64,
) -> GCycleClass {
    let s = ambient.support(support).expect("known support");
    let kappa = random_homogeneous(rng, s.ring(), s.dim() - dim, bound);
    GCycleClass::component(ambient, support, dim, kappa).expect("well-formed component")
}

/// A sum of up to `max_components` random components.
pub fn random_class<R: Rng + ?Sized>(
    rng: &mut R,
    ambient: &Arc<Ambient>,
    max_components: usize,
    bound: i64,
) -> GCycleClass {
    let supports: Vec<_> = ambient.supports().map(|s| (s.id().to_string(), s.dim())).collect();
    let mut out = GCycleClass::zero(ambient);
    for _ in 0..rng.gen_range(1..=max_components.max(1)) {
        let (id, sdim) = supports.choose(rng).expect("ambient has supports");
        let dim = rng.gen_range(0..=*sdim);
        out = out
            .try_add(&random_component(rng, ambient, id, dim, bound))
            .expect("same ambient");
    }
    out
}

/// A random class with every component of dimension `dim`.
pub fn random_pure_class<R: Rng + ?Sized>(
    rng: &mut R,
    ambient: &Arc<Ambient>,
    dim: u32,
    max_components: usize,
    bound: i64,
) -> GCycleClass {
    let supports: Vec<_> = ambient
        .supports()
        .filter(|s| s.dim() >= dim)
        .map(|s| s.id().to_string())
        .collect();
    let mut out = GCycleClass::zero(ambient);
    if supports.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=max_components.max(1)) {
        let id = supports.choose(rng).expect("nonempty");
        out = out
            .try_add(&random_component(rng, ambient, id, dim, bound))
            .expect("same ambient");
    }
    out
}
