//! Generalized cycle classes as finite sums of components `kappa ∧ [S]`
//! where `S` is a support and `kappa` a homogeneous class on `S`.
//!
//! A component on `S` of dimension `l` carries a coefficient of degree
//! `dim S - l`. Components with `l = dim S` are fixed (ordinary cycle
//! components); the rest are moving.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::RingElement;
use crate::spaces::{restrict_to, Ambient, FULL_SUPPORT};

/// Components are keyed by `(support id, dimension)`.
pub type ComponentKey = (String, u32);

#[derive(Clone)]
pub struct GCycleClass {
    ambient: Arc<Ambient>,
    components: BTreeMap<ComponentKey, RingElement>,
}

/// Per-dimension multiplicities at a point.
pub type Multiplicities = BTreeMap<u32, BigInt>;

impl GCycleClass {
    pub fn zero(ambient: &Arc<Ambient>) -> Self {
        GCycleClass {
            ambient: ambient.clone(),
            components: BTreeMap::new(),
        }
    }

    /// A single component `coeff ∧ [support]` of dimension `dim`.
    pub fn component(
        ambient: &Arc<Ambient>,
        support: &str,
        dim: u32,
        coeff: RingElement,
    ) -> Result<Self> {
        let s = ambient.support(support)?;
        if s.is_full() && ambient.is_hypersurface_model() {
            return Err(Error::InvalidArgument(format!(
                "`{}` admits no full-space components",
                ambient.id()
            )));
        }
        if dim > s.dim() {
            return Err(Error::InvalidArgument(format!(
                "component of dimension {dim} on `{support}` of dimension {}",
                s.dim()
            )));
        }
        if coeff.ring() != s.ring() {
            return Err(Error::DescriptorMismatch(format!(
                "coefficient in {} but `{support}` uses {}",
                coeff.ring(),
                s.ring()
            )));
        }
        let mut out = GCycleClass::zero(ambient);
        if coeff.is_zero() {
            return Ok(out);
        }
        if coeff.homogeneous_degree() != Some(s.dim() - dim) {
            return Err(Error::InvalidArgument(format!(
                "coefficient `{coeff}` on `{support}` must be homogeneous of degree {}",
                s.dim() - dim
            )));
        }
        out.components.insert((support.to_string(), dim), coeff);
        Ok(out)
    }

    /// The fundamental class `[S]`.
    pub fn fundamental(ambient: &Arc<Ambient>, support: &str) -> Result<Self> {
        let s = ambient.support(support)?;
        Self::component(ambient, support, s.dim(), RingElement::one(s.ring()))
    }

    /// `1_Y`, the fundamental class of the whole space.
    pub fn unit(ambient: &Arc<Ambient>) -> Result<Self> {
        if ambient.full_support().is_none() {
            return Err(Error::InvalidArgument(format!(
                "`{}` has no full-space class",
                ambient.id()
            )));
        }
        Self::fundamental(ambient, FULL_SUPPORT)
    }

    /// The point class `[a]`.
    pub fn point(ambient: &Arc<Ambient>, point: &str) -> Result<Self> {
        if !ambient.has_point(point) {
            return Err(Error::UnknownPoint(point.to_string()));
        }
        Self::fundamental(ambient, point)
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn components(&self) -> impl Iterator<Item = (&ComponentKey, &RingElement)> {
        self.components.iter()
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn coefficient(&self, support: &str, dim: u32) -> Option<&RingElement> {
        self.components.get(&(support.to_string(), dim))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn same_ambient(&self, other: &Arc<Ambient>) -> bool {
        Arc::ptr_eq(&self.ambient, other) || *self.ambient == **other
    }

    fn check_ambient(&self, other: &GCycleClass) -> Result<()> {
        if self.same_ambient(&other.ambient) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(
                self.ambient.id().to_string(),
                other.ambient.id().to_string(),
            ))
        }
    }

    fn insert_sum(&mut self, key: ComponentKey, coeff: RingElement) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.components.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn try_add(&self, other: &GCycleClass) -> Result<GCycleClass> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (k, c) in &other.components {
            out.insert_sum(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GCycleClass) -> Result<GCycleClass> {
        self.try_add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> GCycleClass {
        let mut out = GCycleClass::zero(&self.ambient);
        if c.is_zero() {
            return out;
        }
        out.components = self
            .components
            .iter()
            .map(|(k, x)| (k.clone(), x.scale(c)))
            .collect();
        out
    }

    /// Sum of classes on a common ambient; `ambient` is used when `items` is empty.
    pub fn sum<'a, I>(ambient: &Arc<Ambient>, items: I) -> Result<GCycleClass>
    where
        I: IntoIterator<Item = &'a GCycleClass>,
    {
        let mut out = GCycleClass::zero(ambient);
        for x in items {
            out = out.try_add(x)?;
        }
        Ok(out)
    }

    /// `gamma ∧ mu` for an ambient class `gamma`: each degree-`j` part of the
    /// restriction of `gamma` lowers the dimension of a component by `j`.
    pub fn wedge(&self, gamma: &RingElement) -> Result<GCycleClass> {
        if gamma.ring() != self.ambient.ring() {
            return Err(Error::DescriptorMismatch(format!(
                "wedge factor in {} on ambient `{}`",
                gamma.ring(),
                self.ambient.id()
            )));
        }
        let mut out = GCycleClass::zero(&self.ambient);
        let mut restricted: BTreeMap<&str, BTreeMap<u32, RingElement>> = BTreeMap::new();
        for ((support, dim), kappa) in &self.components {
            if !restricted.contains_key(support.as_str()) {
                let s = self.ambient.support(support)?;
                let r = restrict_to(&self.ambient, gamma, s)?;
                restricted.insert(support, r.graded_parts());
            }
            for (j, part) in &restricted[support.as_str()] {
                if *j > *dim {
                    continue;
                }
                out.insert_sum((support.clone(), dim - j), kappa * part);
            }
        }
        Ok(out)
    }

    /// The component of dimension exactly `l`.
    pub fn dim_part(&self, l: u32) -> GCycleClass {
        GCycleClass {
            ambient: self.ambient.clone(),
            components: self
                .components
                .iter()
                .filter(|((_, d), _)| *d == l)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn dims(&self) -> BTreeSet<u32> {
        self.components.keys().map(|(_, d)| *d).collect()
    }

    pub fn top_dim(&self) -> Option<u32> {
        self.dims().into_iter().next_back()
    }

    /// `Some(l)` when every component has dimension `l`.
    pub fn pure_dim(&self) -> Option<u32> {
        let dims = self.dims();
        (dims.len() == 1).then(|| *dims.iter().next().unwrap())
    }

    pub fn support_ids(&self) -> BTreeSet<&str> {
        self.components.keys().map(|(s, _)| s.as_str()).collect()
    }

    /// The class split into its single components.
    pub fn split(&self) -> Vec<GCycleClass> {
        self.components
            .iter()
            .map(|(k, c)| GCycleClass {
                ambient: self.ambient.clone(),
                components: BTreeMap::from([(k.clone(), c.clone())]),
            })
            .collect()
    }

    /// `deg_L mu`: the sum over components of `\int_S kappa ∧ omega_L^l`.
    pub fn deg_l(&self) -> BigInt {
        let mut total = BigInt::zero();
        for ((support, dim), kappa) in &self.components {
            let s = self.ambient.support(support).expect("component support");
            let l = restrict_to(&self.ambient, self.ambient.polarization(), s)
                .expect("polarization restricts");
            let integrand = kappa * &l.pow(*dim as i64).expect("non-negative power");
            total += s.integrate(&integrand).expect("homogeneous integrand");
        }
        total
    }

    /// Multiplicities at a marked point for every dimension up to the top
    /// dimension of the class.
    ///
    /// Only fixed components through the point contribute: a smooth support
    /// has multiplicity one at its points, and a positive-degree smooth factor
    /// kills the multiplicity of a moving component.
    pub fn mult_at(&self, point: &str) -> Result<Multiplicities> {
        if !self.ambient.has_point(point) {
            return Err(Error::UnknownPoint(point.to_string()));
        }
        let mut out: Multiplicities = match self.top_dim() {
            Some(top) => (0..=top).map(|l| (l, BigInt::zero())).collect(),
            None => BTreeMap::new(),
        };
        for ((support, dim), kappa) in &self.components {
            let s = self.ambient.support(support)?;
            if *dim == s.dim() && s.contains_point(point) {
                *out.get_mut(dim).expect("dimension in range") += kappa.constant_term();
            }
        }
        Ok(out)
    }

    /// Sum of the per-dimension multiplicities at a point.
    pub fn total_mult_at(&self, point: &str) -> Result<BigInt> {
        Ok(self.mult_at(point)?.values().sum())
    }

    /// Certified effective: every coefficient is nonnegative in the monomial
    /// basis. A `false` answer means "not certified", not "not effective".
    pub fn is_effective(&self) -> bool {
        self.components.values().all(RingElement::is_nonnegative)
    }

    /// Splits into the fixed part (an ordinary cycle) and the moving part.
    pub fn fix_mov(&self) -> (GCycleClass, GCycleClass) {
        let mut fixed = GCycleClass::zero(&self.ambient);
        let mut moving = GCycleClass::zero(&self.ambient);
        for ((support, dim), kappa) in &self.components {
            let s = self.ambient.support(support).expect("component support");
            let target = if *dim == s.dim() { &mut fixed } else { &mut moving };
            target.components.insert((support.clone(), *dim), kappa.clone());
        }
        (fixed, moving)
    }
}

impl PartialEq for GCycleClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(&other.ambient) && self.components == other.components
    }
}

impl Eq for GCycleClass {}

impl fmt::Display for GCycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        // highest dimension first
        let mut items: Vec<_> = self.components.iter().collect();
        items.sort_by(|((sa, da), _), ((sb, db), _)| db.cmp(da).then(sa.cmp(sb)));
        for (i, ((support, dim), kappa)) in items.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let fixed = kappa.homogeneous_degree() == Some(0);
            if fixed && kappa.is_one() {
                write!(f, "[{support}]")?;
            } else if fixed {
                write!(f, "{}*[{support}]", kappa.constant_term())?;
            } else {
                write!(f, "({kappa})∧[{support}]_{dim}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GCycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GCycleClass({} on {})", self, self.ambient.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{blowup_catalog, make_biprojective, make_projective, SupportSpec};

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// P3 with the lines A, B and points a, b; b = A ∩ B.
    fn p3() -> Arc<Ambient> {
        let mut y = make_projective(3).unwrap();
        y.add_point("a").unwrap();
        y.add_point("b").unwrap();
        y.add_support(SupportSpec::new("A", 1, &[("w", 1)]).containing(&["a", "b"]))
            .unwrap();
        y.add_support(SupportSpec::new("B", 1, &[("w", 1)]).containing(&["b"]))
            .unwrap();
        y.freeze().unwrap()
    }

    fn w(y: &Arc<Ambient>) -> RingElement {
        RingElement::generator_at(y.ring(), 0)
    }

    fn one(y: &Arc<Ambient>) -> RingElement {
        RingElement::one(y.ring())
    }

    #[test]
    fn add_and_scale() {
        let y = p3();
        let a = GCycleClass::fundamental(&y, "A").unwrap();
        let b = GCycleClass::fundamental(&y, "B").unwrap();
        let m = 3;
        let mu = a.scale(&int(2)).try_add(&b.scale(&int(m - 1))).unwrap();
        assert_eq!(mu.coefficient("A", 1).unwrap().constant_term(), int(2));
        assert_eq!(mu.coefficient("B", 1).unwrap().constant_term(), int(2));
        assert_eq!(mu.try_add(&GCycleClass::zero(&y)).unwrap(), mu);
        assert!(mu.scale(&int(0)).is_zero());
        assert!(mu.try_sub(&mu).unwrap().is_zero());
    }

    #[test]
    fn ambient_mismatch() {
        let y = p3();
        let z = make_projective(2).unwrap().freeze().unwrap();
        let a = GCycleClass::fundamental(&y, "A").unwrap();
        let u = GCycleClass::unit(&z).unwrap();
        assert!(matches!(a.try_add(&u), Err(Error::AmbientMismatch(..))));
    }

    #[test]
    fn component_validation() {
        let y = p3();
        let s = y.support("A").unwrap();
        let h = RingElement::generator_at(s.ring(), 0);
        assert!(GCycleClass::component(&y, "A", 2, RingElement::one(s.ring())).is_err());
        assert!(GCycleClass::component(&y, "A", 1, h.clone()).is_err());
        assert!(GCycleClass::component(&y, "A", 0, h).is_ok());
        assert!(GCycleClass::component(&y, "A", 0, one(&y)).is_err());
        assert!(GCycleClass::component(&y, "nope", 0, one(&y)).is_err());

        let bl = blowup_catalog().unwrap();
        assert!(GCycleClass::unit(&bl).is_err());
    }

    #[test]
    fn wedge_examples() {
        let y = p3();
        let a = GCycleClass::fundamental(&y, "A").unwrap();
        let x = a.wedge(&(&one(&y) + &w(&y))).unwrap();
        let h = RingElement::generator_at(y.support("A").unwrap().ring(), 0);
        let expected = a
            .try_add(&GCycleClass::component(&y, "A", 0, h).unwrap())
            .unwrap();
        assert_eq!(x, expected);
        assert_eq!(a.wedge(&one(&y)).unwrap(), a);
        // w^2 kills a line
        assert!(a.wedge(&(&w(&y) * &w(&y))).unwrap().is_zero());

        let bl = blowup_catalog().unwrap();
        let e = GCycleClass::fundamental(&bl, "E").unwrap();
        let wx = RingElement::generator_at(bl.ring(), 0);
        assert!(e.wedge(&wx).unwrap().is_zero());
    }

    #[test]
    fn dim_part_and_fix_mov_on_p1xp1() {
        let y = make_biprojective(1, 1).unwrap().freeze().unwrap();
        let u = GCycleClass::unit(&y).unwrap();
        let lu = u.wedge(y.polarization()).unwrap();
        let mu = u.try_add(&lu).unwrap();
        assert_eq!(mu.dim_part(1), lu);
        assert!(mu.dim_part(0).is_zero());
        assert_eq!(mu.fix_mov(), (u.clone(), lu.clone()));
        assert_eq!(mu.deg_l(), int(4));
        assert!(mu.is_effective());
        assert_eq!(mu.pure_dim(), None);
        assert_eq!(lu.pure_dim(), Some(1));
    }

    #[test]
    fn degree_of_e_minus_le() {
        let bl = blowup_catalog().unwrap();
        let e = GCycleClass::fundamental(&bl, "E").unwrap();
        let x = e.try_sub(&e.wedge(bl.polarization()).unwrap()).unwrap();
        assert_eq!(x.deg_l(), int(0));
        assert!(!x.is_effective());
        assert!(GCycleClass::zero(&bl).is_effective());
        assert_eq!(GCycleClass::zero(&bl).deg_l(), int(0));
    }

    #[test]
    fn multiplicities_follow_the_fixed_part() {
        let y = p3();
        let m = 3;
        let a = GCycleClass::fundamental(&y, "A").unwrap();
        let b = GCycleClass::point(&y, "b").unwrap();
        let oa = a.wedge(&(&one(&y) + &w(&y))).unwrap();
        let mu = oa.scale(&int(2)).try_add(&b.scale(&int(m - 1))).unwrap();
        let mults = mu.mult_at("b").unwrap();
        assert_eq!(mults, BTreeMap::from([(0, int(2)), (1, int(2))]));
        let (fixed, moving) = mu.fix_mov();
        assert_eq!(fixed.mult_at("b").unwrap(), mults);
        assert!(moving.mult_at("b").unwrap().values().all(Zero::is_zero));
        assert!(mu.mult_at("zz").is_err());

        // m[a] + (1+w)∧A splits as (m[a] + A, w∧A)
        let pa = GCycleClass::point(&y, "a").unwrap();
        let nu = pa.scale(&int(m)).try_add(&oa).unwrap();
        let (fixed, moving) = nu.fix_mov();
        assert_eq!(fixed, pa.scale(&int(m)).try_add(&a).unwrap());
        assert_eq!(moving, a.wedge(&w(&y)).unwrap());
        assert_eq!(nu.dim_part(0), pa.scale(&int(m)).try_add(&moving).unwrap());
    }

    #[test]
    fn positive_degree_factor_has_zero_multiplicity() {
        let y = make_biprojective(1, 1).unwrap();
        let mut y = y;
        y.add_point("x").unwrap();
        let y = y.freeze().unwrap();
        let lu = GCycleClass::unit(&y).unwrap().wedge(y.polarization()).unwrap();
        assert!(lu.mult_at("x").unwrap().values().all(Zero::is_zero));
    }
}
