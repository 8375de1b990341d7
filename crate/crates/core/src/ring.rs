//! Exact arithmetic in truncated polynomial rings `Z[g_1, ..., g_r] / (g_i^(n_i + 1))`.
//!
//! Every generator has degree one and is nilpotent, so each ring is a free
//! `Z`-module on the finite monomial basis `{ g^a : 0 <= a_i <= n_i }` and is
//! graded by total degree. Elements are stored sparsely as a map from exponent
//! vectors to arbitrary-precision integers with no zero entries.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial, one entry per generator.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    /// Largest surviving power; `g^(order + 1) = 0`.
    pub order: u32,
}

/// The shape of a truncated polynomial ring: an ordered list of named
/// nilpotent generators.
///
/// An order of zero is accepted and yields a generator that is already zero;
/// this is how the ring of a point (`Z`) is represented.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    generators: Vec<Generator>,
}

impl RingDescriptor {
    pub fn new<I, S>(generators: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let generators: Vec<Generator> = generators
            .into_iter()
            .map(|(name, order)| Generator {
                name: name.into(),
                order,
            })
            .collect();
        if generators.is_empty() {
            return Err(Error::InvalidArgument(
                "a ring needs at least one generator".into(),
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.name.is_empty() {
                return Err(Error::InvalidArgument("empty generator name".into()));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate generator name `{}`",
                    g.name
                )));
            }
        }
        Ok(Arc::new(RingDescriptor { generators }))
    }

    /// `Z[name] / (name^(order + 1))`.
    pub fn truncated(name: &str, order: u32) -> Arc<Self> {
        Arc::new(RingDescriptor {
            generators: vec![Generator {
                name: name.to_string(),
                order,
            }],
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Degree of the top monomial, i.e. the sum of all nilpotency orders.
    pub fn top_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.order).sum()
    }

    pub fn top_monomial(&self) -> Exponents {
        self.generators.iter().map(|g| g.order).collect()
    }

    pub fn in_bounds(&self, exps: &[u32]) -> bool {
        exps.len() == self.generators.len()
            && exps.iter().zip(&self.generators).all(|(e, g)| *e <= g.order)
    }

    /// All basis monomials, ordered by degree.
    pub fn basis(&self) -> Vec<Exponents> {
        let mut out = vec![Vec::new()];
        for g in &self.generators {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=g.order).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out.sort_by_key(|m| (degree_of(m), Reverse(m.clone())));
        out
    }

    /// Basis monomials of total degree exactly `d`.
    pub fn basis_of_degree(&self, d: u32) -> Vec<Exponents> {
        self.basis()
            .into_iter()
            .filter(|m| degree_of(m) == d)
            .collect()
    }

    /// Human-readable monomial, `"1"` for the constant monomial.
    pub fn monomial_label(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let rels: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}^{}", g.name, g.order + 1))
            .collect();
        write!(f, "Z[{}]/({})", gens.join(","), rels.join(","))
    }
}

pub fn degree_of(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

/// An element of a truncated polynomial ring, in normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Arc<RingDescriptor>,
    terms: BTreeMap<Exponents, BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; fails if the operands live in different rings.
pub fn ring_arith(a: &RingElement, b: &RingElement, op: ArithOp) -> Result<RingElement> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

impl RingElement {
    pub fn zero(ring: &Arc<RingDescriptor>) -> Self {
        RingElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingDescriptor>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Arc<RingDescriptor>, c: impl Into<BigInt>) -> Self {
        Self::monomial(ring, vec![0; ring.len()], c)
    }

    /// `coeff * g^exps`; zero when the monomial is killed by nilpotency.
    pub fn monomial(ring: &Arc<RingDescriptor>, exps: Exponents, coeff: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), ring.len(), "exponent vector length mismatch");
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if ring.in_bounds(&exps) && !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        RingElement {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn generator(ring: &Arc<RingDescriptor>, name: &str) -> Result<Self> {
        let idx = ring
            .index_of(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown generator `{name}` in {ring}")))?;
        Ok(Self::generator_at(ring, idx))
    }

    pub fn generator_at(ring: &Arc<RingDescriptor>, idx: usize) -> Self {
        let mut exps = vec![0; ring.len()];
        exps[idx] = 1;
        Self::monomial(ring, exps, 1)
    }

    /// Builds an element from `(exponents, coefficient)` pairs, summing repeats
    /// and dropping anything out of bounds.
    pub fn from_terms<I>(ring: &Arc<RingDescriptor>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigInt)>,
    {
        let mut out = Self::zero(ring);
        for (exps, c) in terms {
            assert_eq!(exps.len(), ring.len(), "exponent vector length mismatch");
            if ring.in_bounds(&exps) {
                out.accumulate(exps, c);
            }
        }
        out
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.ring.len()])
    }

    /// Coefficient of the top monomial of the ring.
    pub fn top_coefficient(&self) -> BigInt {
        self.coefficient(&self.ring.top_monomial())
    }

    fn accumulate(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &RingElement) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )))
        }
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let mut out = RingElement::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if self.ring.in_bounds(&exps) {
                    out.accumulate(exps, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        if c.is_zero() {
            return RingElement::zero(&self.ring);
        }
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// `self^e`. Negative exponents invert first; that needs a constant term
    /// of `+1` or `-1`.
    pub fn pow(&self, e: i64) -> Result<RingElement> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = RingElement::one(&self.ring);
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                if base.is_zero() {
                    return Ok(RingElement::zero(&self.ring));
                }
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Inverse of a unit `u = c + n` with `c = ±1` and `n` nilpotent:
    /// `u^-1 = c * sum_k (-c n)^k`, which terminates because `n^(top+1) = 0`.
    pub fn inverse(&self) -> Result<RingElement> {
        let c = self.constant_term();
        if c.abs() != BigInt::one() {
            return Err(Error::NotAUnit(c.to_string()));
        }
        let nil = self.try_sub(&RingElement::constant(&self.ring, c.clone()))?;
        let step = nil.scale(&-&c);
        let mut power = RingElement::one(&self.ring);
        let mut sum = RingElement::one(&self.ring);
        for _ in 0..self.ring.top_degree() {
            power = &power * &step;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&c))
    }

    /// Homogeneous part of total degree `d`.
    pub fn graded_part(&self, d: u32) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree_of(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous parts keyed by degree.
    pub fn graded_parts(&self) -> BTreeMap<u32, RingElement> {
        let mut out: BTreeMap<u32, RingElement> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(degree_of(e))
                .or_insert_with(|| RingElement::zero(&self.ring))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    /// `Some(d)` if the element is nonzero and homogeneous of degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| degree_of(e));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Evaluates the ring homomorphism sending generator `i` to `images[i]`.
    ///
    /// The caller is responsible for the map being well defined, i.e. for the
    /// images respecting the nilpotency relations.
    pub fn substitute(&self, target: &Arc<RingDescriptor>, images: &[RingElement]) -> Result<RingElement> {
        if images.len() != self.ring.len() {
            return Err(Error::InvalidArgument(format!(
                "substitution has {} images for {} generators",
                images.len(),
                self.ring.len()
            )));
        }
        for img in images {
            if img.ring != *target {
                return Err(Error::DescriptorMismatch(format!(
                    "substitution image in {} but target is {}",
                    img.ring, target
                )));
            }
        }
        // powers[i][k] = images[i]^k
        let mut powers: Vec<Vec<RingElement>> = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let order = self.ring.generators[i].order as usize;
            let mut row = vec![RingElement::one(target)];
            for k in 1..=order {
                let next = &row[k - 1] * img;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = RingElement::zero(target);
        for (exps, c) in &self.terms {
            let mut term = RingElement::constant(target, c.clone());
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    term = &term * &powers[i][*e as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Monomial labels and coefficients in display order.
    pub fn labelled_terms(&self) -> Vec<(String, BigInt)> {
        self.display_order()
            .into_iter()
            .map(|(e, c)| (self.ring.monomial_label(e), c.clone()))
            .collect()
    }

    fn display_order(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| (degree_of(e), Reverse((*e).clone())));
        v
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.display_order().into_iter().enumerate() {
            let label = self.ring.monomial_label(exps);
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if label == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}*{label}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({} in {})", self, self.ring)
    }
}

// Operator forms panic on a descriptor mismatch; use the `try_*` methods
// when the operands come from untrusted input.

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.try_add(rhs).expect("ring descriptor mismatch")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.try_sub(rhs).expect("ring descriptor mismatch")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.try_mul(rhs).expect("ring descriptor mismatch")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&-BigInt::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Arc<RingDescriptor> {
        RingDescriptor::new([("w", n)]).unwrap()
    }

    fn pp(m: u32, n: u32) -> Arc<RingDescriptor> {
        RingDescriptor::new([("wx", m), ("wy", n)]).unwrap()
    }

    fn w(r: &Arc<RingDescriptor>, name: &str) -> RingElement {
        RingElement::generator(r, name).unwrap()
    }

    fn c(r: &Arc<RingDescriptor>, v: i64) -> RingElement {
        RingElement::constant(r, v)
    }

    #[test]
    fn descriptor_validation() {
        assert!(RingDescriptor::new(Vec::<(String, u32)>::new()).is_err());
        assert!(RingDescriptor::new([("w", 1), ("w", 2)]).is_err());
        assert_eq!(pp(2, 1).top_degree(), 3);
        assert_eq!(pp(2, 1).basis().len(), 6);
    }

    #[test]
    fn square_of_one_plus_w() {
        let r = p(2);
        let x = &c(&r, 1) + &w(&r, "w");
        let sq = &x * &x;
        let wx = w(&r, "w");
        let expected = &(&c(&r, 1) + &wx.scale(&2.into())) + &(&wx * &wx);
        assert_eq!(sq, expected);
    }

    #[test]
    fn product_of_squares_on_p1xp1() {
        let r = pp(1, 1);
        let ox = &c(&r, 1) + &w(&r, "wx");
        let oy = &c(&r, 1) + &w(&r, "wy");
        let prod = &(&ox * &ox) * &(&oy * &oy);
        let l = &w(&r, "wx") + &w(&r, "wy");
        let expected = &(&c(&r, 1) + &l.scale(&2.into())) + &(&l * &l).scale(&2.into());
        assert_eq!(prod, expected);
        assert_eq!(prod.coefficient(&[1, 1]), BigInt::from(4));
    }

    #[test]
    fn fourth_power_truncates() {
        let r = p(3);
        let x = &c(&r, 1) + &w(&r, "w");
        let q = x.pow(4).unwrap();
        let coeffs: Vec<BigInt> = (0..4).map(|k| q.coefficient(&[k])).collect();
        assert_eq!(coeffs, [1, 4, 6, 4].map(BigInt::from));
    }

    #[test]
    fn geometric_inverse() {
        let r = p(3);
        let x = &c(&r, 1) + &w(&r, "w");
        let inv = x.pow(-1).unwrap();
        let coeffs: Vec<BigInt> = (0..4).map(|k| inv.coefficient(&[k])).collect();
        assert_eq!(coeffs, [1, -1, 1, -1].map(BigInt::from));
    }

    #[test]
    fn inverse_of_one_plus_wy() {
        let r = pp(2, 1);
        let x = &c(&r, 1) + &w(&r, "wy");
        assert_eq!(x.pow(-1).unwrap(), &c(&r, 1) - &w(&r, "wy"));
    }

    #[test]
    fn ratio_on_p1xp1() {
        let r = pp(1, 1);
        let l = &w(&r, "wx") + &w(&r, "wy");
        let l2 = &l * &l;
        let num = &(&c(&r, 1) + &l.scale(&4.into())) + &l2.scale(&6.into());
        let den = &(&c(&r, 1) + &l.scale(&2.into())) + &l2.scale(&2.into());
        let q = &num * &den.pow(-1).unwrap();
        assert_eq!(q, &c(&r, 1) + &l.scale(&2.into()));
        // multiply back
        assert_eq!(&q * &den, num);
    }

    #[test]
    fn non_unit_inverse_fails() {
        let r = p(2);
        let x = &c(&r, 2) + &w(&r, "w");
        assert!(matches!(x.pow(-1), Err(Error::NotAUnit(_))));
        assert!(matches!(w(&r, "w").inverse(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn negative_unit_inverse() {
        let r = p(2);
        let x = &c(&r, -1) + &w(&r, "w");
        let inv = x.inverse().unwrap();
        assert!((&inv * &x).is_one());
    }

    #[test]
    fn graded_parts() {
        let r = p(2);
        let wx = w(&r, "w");
        let x = &(&c(&r, 1) + &wx.scale(&2.into())) + &(&wx * &wx);
        assert_eq!(x.graded_part(1), wx.scale(&2.into()));
        assert!(x.graded_part(3).is_zero());
        assert!(x.graded_part(17).is_zero());

        let r = pp(1, 1);
        let l = &w(&r, "wx") + &w(&r, "wy");
        let x = &(&c(&r, 1) + &l.scale(&2.into())) + &(&l * &l).scale(&2.into());
        assert_eq!(
            x.graded_part(2),
            RingElement::monomial(&r, vec![1, 1], 4)
        );
    }

    #[test]
    fn mismatch_is_structural_error() {
        let a = c(&p(2), 1);
        let b = c(&p(3), 1);
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul] {
            assert!(matches!(ring_arith(&a, &b, op), Err(Error::DescriptorMismatch(_))));
        }
    }

    #[test]
    fn substitution_is_homomorphic() {
        let r = pp(2, 1);
        let h = RingDescriptor::truncated("h", 1);
        let images = [RingElement::zero(&h), RingElement::generator_at(&h, 0)];
        let l = &w(&r, "wx") + &w(&r, "wy");
        assert_eq!(l.substitute(&h, &images).unwrap(), RingElement::generator_at(&h, 0));
        let x = &c(&r, 1) + &l;
        let y = &(&c(&r, 3) + &w(&r, "wx")) + &w(&r, "wy").scale(&(-2).into());
        let lhs = (&x * &y).substitute(&h, &images).unwrap();
        let rhs = &x.substitute(&h, &images).unwrap() * &y.substitute(&h, &images).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display() {
        let r = pp(1, 1);
        let x = &(&c(&r, 1) - &w(&r, "wx").scale(&2.into())) + &RingElement::monomial(&r, vec![1, 1], 4);
        assert_eq!(x.to_string(), "1 - 2*wx + 4*wx*wy");
        assert_eq!(RingElement::zero(&r).to_string(), "0");
        assert_eq!((-&w(&r, "wy")).to_string(), "-wy");
    }
}
