//! Ambient manifolds, their supports and marked points, and embeddings
//! between them.
//!
//! A [`Support`] is a model of a smooth irreducible subvariety `S`: a graded
//! ring carrying the classes of `S`, the restriction homomorphism from the
//! ambient ring, and an integration rule on top-degree classes. Most supports
//! use `Z[h]/(h^(s+1))` with `\int_S h^s = deg`; the full space uses the
//! ambient ring itself, and images of full spaces under embeddings keep the
//! source ring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gcycle::GCycleClass;
use crate::ring::{RingDescriptor, RingElement};

/// Id of the full-space support registered on every ambient that admits one.
pub const FULL_SUPPORT: &str = "Y";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientKind {
    Projective { n: u32 },
    Biprojective { m: u32, n: u32 },
    /// Blow-up of the projective plane at a point, modelled as the
    /// hypersurface `x1*y1 = x2*y0` of bidegree (1,1) in `P2 x P1`.
    BlowupP2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    id: String,
    dim: u32,
    ring: Arc<RingDescriptor>,
    /// Image of each ambient generator in `ring`.
    substitution: Vec<RingElement>,
    /// Integration: `scale * top_coefficient(fundamental * gamma)`.
    fundamental: RingElement,
    scale: BigInt,
    full: bool,
    point: bool,
    contains: BTreeSet<String>,
    inside: BTreeSet<String>,
}

impl Support {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn substitution(&self) -> &[RingElement] {
        &self.substitution
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// True for the zero-dimensional support attached to a marked point.
    pub fn is_point(&self) -> bool {
        self.point
    }

    pub fn contains_point(&self, point: &str) -> bool {
        self.contains.contains(point)
    }

    pub fn points(&self) -> impl Iterator<Item = &str> {
        self.contains.iter().map(String::as_str)
    }

    /// Declared supports this one lies inside.
    pub fn inside(&self) -> impl Iterator<Item = &str> {
        self.inside.iter().map(String::as_str)
    }

    /// `\int_S gamma` for `gamma` homogeneous of degree `dim S`.
    pub fn integrate(&self, gamma: &RingElement) -> Result<BigInt> {
        if gamma.ring() != &self.ring {
            return Err(Error::DescriptorMismatch(format!(
                "integrand in {} but support `{}` uses {}",
                gamma.ring(),
                self.id,
                self.ring
            )));
        }
        if gamma.is_zero() {
            return Ok(BigInt::zero());
        }
        match gamma.homogeneous_degree() {
            Some(d) if d == self.dim => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "integrand `{gamma}` is not homogeneous of degree {} on `{}`",
                    self.dim, self.id
                )))
            }
        }
        Ok(&self.scale * (&self.fundamental * gamma).top_coefficient())
    }

    /// Degree-one element of the support ring, used to generate coefficients.
    pub fn hyperplane(&self) -> Option<&RingElement> {
        self.substitution.iter().find(|x| !x.is_zero())
    }
}

/// Declaration of a support with a single-generator ring `Z[h]/(h^(dim+1))`.
#[derive(Debug, Clone)]
pub struct SupportSpec {
    pub id: String,
    pub dim: u32,
    /// Ambient generator name to the integer `a` in `g -> a*h`; missing names map to 0.
    pub substitution: Vec<(String, i64)>,
    /// `\int_S h^dim`.
    pub degree: BigInt,
    pub contains: Vec<String>,
    pub inside: Vec<String>,
}

impl SupportSpec {
    pub fn new(id: &str, dim: u32, substitution: &[(&str, i64)]) -> Self {
        SupportSpec {
            id: id.to_string(),
            dim,
            substitution: substitution.iter().map(|(g, a)| (g.to_string(), *a)).collect(),
            degree: BigInt::one(),
            contains: Vec::new(),
            inside: Vec::new(),
        }
    }

    pub fn degree(mut self, degree: impl Into<BigInt>) -> Self {
        self.degree = degree.into();
        self
    }

    pub fn containing(mut self, points: &[&str]) -> Self {
        self.contains.extend(points.iter().map(|p| p.to_string()));
        self
    }

    pub fn inside(mut self, supports: &[&str]) -> Self {
        self.inside.extend(supports.iter().map(|s| s.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ambient {
    id: String,
    kind: AmbientKind,
    dim: u32,
    ring: Arc<RingDescriptor>,
    polarization: RingElement,
    total_chern: RingElement,
    fundamental_class: RingElement,
    embed_dim: u32,
    supports: BTreeMap<String, Support>,
    points: BTreeSet<String>,
}

fn one_plus(x: &RingElement) -> RingElement {
    &RingElement::one(x.ring()) + x
}

/// Projective space `P^n` with `omega_L = w`, `c(TY) = (1+w)^(n+1)`.
pub fn make_projective(n: u32) -> Result<Ambient> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "projective space needs n >= 1, got {n}"
        )));
    }
    let ring = RingDescriptor::new([("w", n)])?;
    let w = RingElement::generator_at(&ring, 0);
    let chern = one_plus(&w).pow(n as i64 + 1)?;
    Ok(Ambient::with_full_support(
        format!("P{n}"),
        AmbientKind::Projective { n },
        n,
        ring,
        w,
        chern,
        n,
    ))
}

/// `P^m x P^n` polarized by `O(1,1)`, the pullback of `O(1)` under the Segre map.
pub fn make_biprojective(m: u32, n: u32) -> Result<Ambient> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "biprojective space needs m, n >= 1, got ({m}, {n})"
        )));
    }
    let ring = RingDescriptor::new([("wx", m), ("wy", n)])?;
    let wx = RingElement::generator_at(&ring, 0);
    let wy = RingElement::generator_at(&ring, 1);
    let chern = &one_plus(&wx).pow(m as i64 + 1)? * &one_plus(&wy).pow(n as i64 + 1)?;
    Ok(Ambient::with_full_support(
        format!("P{m}xP{n}"),
        AmbientKind::Biprojective { m, n },
        m + n,
        ring,
        &wx + &wy,
        chern,
        (m + 1) * (n + 1) - 1,
    ))
}

/// The blow-up of `P2` at a point as a hypersurface of class `wx + wy` in
/// `P2 x P1`, with `c(TY) = (1+wx)^3 (1+wy)^2 / (1+wx+wy)`.
///
/// No full-space support is registered: classes may only live on proper
/// supports (the exceptional curve, curves, points).
pub fn make_blowup_p2() -> Result<Ambient> {
    let ring = RingDescriptor::new([("wx", 2), ("wy", 1)])?;
    let wx = RingElement::generator_at(&ring, 0);
    let wy = RingElement::generator_at(&ring, 1);
    let l = &wx + &wy;
    let chern = &(&one_plus(&wx).pow(3)? * &one_plus(&wy).pow(2)?) * &one_plus(&l).pow(-1)?;
    Ok(Ambient {
        id: "Bl_p(P2)".to_string(),
        kind: AmbientKind::BlowupP2,
        dim: 2,
        fundamental_class: l.clone(),
        ring,
        polarization: l,
        total_chern: chern,
        embed_dim: 5,
        supports: BTreeMap::new(),
        points: BTreeSet::new(),
    })
}

impl Ambient {
    fn with_full_support(
        id: String,
        kind: AmbientKind,
        dim: u32,
        ring: Arc<RingDescriptor>,
        polarization: RingElement,
        total_chern: RingElement,
        embed_dim: u32,
    ) -> Self {
        let substitution = (0..ring.len())
            .map(|i| RingElement::generator_at(&ring, i))
            .collect();
        let full = Support {
            id: FULL_SUPPORT.to_string(),
            dim,
            ring: ring.clone(),
            substitution,
            fundamental: RingElement::one(&ring),
            scale: BigInt::one(),
            full: true,
            point: false,
            contains: BTreeSet::new(),
            inside: BTreeSet::new(),
        };
        Ambient {
            id,
            kind,
            dim,
            fundamental_class: RingElement::one(&ring),
            ring,
            polarization,
            total_chern,
            embed_dim,
            supports: BTreeMap::from([(FULL_SUPPORT.to_string(), full)]),
            points: BTreeSet::new(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> AmbientKind {
        self.kind
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn polarization(&self) -> &RingElement {
        &self.polarization
    }

    pub fn total_chern(&self) -> &RingElement {
        &self.total_chern
    }

    pub fn fundamental_class(&self) -> &RingElement {
        &self.fundamental_class
    }

    pub fn embed_dim(&self) -> u32 {
        self.embed_dim
    }

    pub fn is_projective_space(&self) -> bool {
        matches!(self.kind, AmbientKind::Projective { .. })
    }

    pub fn is_hypersurface_model(&self) -> bool {
        matches!(self.kind, AmbientKind::BlowupP2)
    }

    pub fn set_embed_dim(&mut self, m: u32) -> Result<()> {
        if m < self.dim {
            return Err(Error::InvalidArgument(format!(
                "embedding dimension {m} is below the dimension {} of `{}`",
                self.dim, self.id
            )));
        }
        self.embed_dim = m;
        Ok(())
    }

    pub fn supports(&self) -> impl Iterator<Item = &Support> {
        self.supports.values()
    }

    pub fn support(&self, id: &str) -> Result<&Support> {
        self.supports
            .get(id)
            .ok_or_else(|| Error::UnknownSupport(id.to_string()))
    }

    pub fn full_support(&self) -> Option<&Support> {
        self.supports.get(FULL_SUPPORT).filter(|s| s.full)
    }

    pub fn points(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(String::as_str)
    }

    pub fn has_point(&self, id: &str) -> bool {
        self.points.contains(id)
    }

    /// `\int_Y gamma` over the whole ambient, for `gamma` of degree `dim Y`.
    pub fn integrate(&self, gamma: &RingElement) -> Result<BigInt> {
        if gamma.ring() != &self.ring {
            return Err(Error::DescriptorMismatch(format!(
                "integrand in {} but ambient `{}` uses {}",
                gamma.ring(),
                self.id,
                self.ring
            )));
        }
        if gamma.is_zero() {
            return Ok(BigInt::zero());
        }
        if gamma.homogeneous_degree() != Some(self.dim) {
            return Err(Error::InvalidArgument(format!(
                "integrand `{gamma}` is not homogeneous of degree {}",
                self.dim
            )));
        }
        Ok((&self.fundamental_class * gamma).top_coefficient())
    }

    /// `deg_L Y = \int_Y omega_L^n`.
    pub fn degree(&self) -> BigInt {
        let top = self
            .polarization
            .pow(self.dim as i64)
            .expect("non-negative power");
        self.integrate(&top).expect("homogeneous top class")
    }

    /// Restriction of an ambient class to a support.
    pub fn restrict(&self, gamma: &RingElement, support: &str) -> Result<RingElement> {
        let s = self.support(support)?;
        restrict(gamma, s, &self.ring)
    }

    /// Integration of a class of degree `dim S` over the support `S`.
    pub fn integrate_on(&self, support: &str, gamma: &RingElement) -> Result<BigInt> {
        self.support(support)?.integrate(gamma)
    }

    /// `S ⊆ T` as far as the declared data shows: equality, the full space,
    /// point membership, or a chain of declared inclusions.
    pub fn is_subset(&self, s: &str, t: &str) -> bool {
        let mut seen = BTreeSet::new();
        self.subset_walk(s, t, &mut seen)
    }

    fn subset_walk<'a>(&'a self, s: &'a str, t: &str, seen: &mut BTreeSet<&'a str>) -> bool {
        if s == t {
            return true;
        }
        let (Some(ss), Some(tt)) = (self.supports.get(s), self.supports.get(t)) else {
            return false;
        };
        if tt.full || (ss.point && tt.contains.contains(s)) {
            return true;
        }
        if !seen.insert(s) {
            return false;
        }
        ss.inside.iter().any(|u| self.subset_walk(u, t, seen))
    }

    /// Registers a marked point together with its zero-dimensional support.
    pub fn add_point(&mut self, id: &str) -> Result<()> {
        if self.points.contains(id) || self.supports.contains_key(id) {
            return Err(Error::InvalidArgument(format!("duplicate id `{id}`")));
        }
        let ring = RingDescriptor::truncated("h", 0);
        let support = Support {
            id: id.to_string(),
            dim: 0,
            substitution: vec![RingElement::zero(&ring); self.ring.len()],
            fundamental: RingElement::one(&ring),
            ring,
            scale: BigInt::one(),
            full: false,
            point: true,
            contains: BTreeSet::from([id.to_string()]),
            inside: BTreeSet::new(),
        };
        self.points.insert(id.to_string());
        self.supports.insert(id.to_string(), support);
        if let Some(full) = self.supports.get_mut(FULL_SUPPORT) {
            full.contains.insert(id.to_string());
        }
        Ok(())
    }

    pub fn add_support(&mut self, spec: SupportSpec) -> Result<()> {
        if self.supports.contains_key(&spec.id) || self.points.contains(&spec.id) {
            return Err(Error::InvalidArgument(format!("duplicate id `{}`", spec.id)));
        }
        if spec.dim >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "support `{}` has dimension {} but proper supports of `{}` have dimension < {}",
                spec.id, spec.dim, self.id, self.dim
            )));
        }
        if !spec.degree.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "support `{}` needs a positive degree",
                spec.id
            )));
        }
        let ring = RingDescriptor::truncated("h", spec.dim);
        let h = RingElement::generator_at(&ring, 0);
        let mut coeffs = vec![0i64; self.ring.len()];
        for (name, a) in &spec.substitution {
            let idx = self.ring.index_of(name).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "support `{}` substitutes unknown generator `{name}`",
                    spec.id
                ))
            })?;
            coeffs[idx] = *a;
        }
        let substitution: Vec<RingElement> =
            coeffs.iter().map(|a| h.scale(&BigInt::from(*a))).collect();
        check_homomorphism(&self.ring, &substitution, &spec.id)?;
        for p in &spec.contains {
            if !self.points.contains(p) {
                return Err(Error::UnknownPoint(p.clone()));
            }
        }
        self.supports.insert(
            spec.id.clone(),
            Support {
                id: spec.id,
                dim: spec.dim,
                fundamental: RingElement::one(&ring),
                ring,
                substitution,
                scale: spec.degree,
                full: false,
                point: false,
                contains: spec.contains.into_iter().collect(),
                inside: spec.inside.into_iter().collect(),
            },
        );
        Ok(())
    }

    /// Checks declared inclusions: targets exist, dimensions do not go up, and
    /// every marked point of the smaller support lies on the larger one.
    pub fn validate(&self) -> Result<()> {
        for s in self.supports.values() {
            for t in &s.inside {
                let tt = self.support(t)?;
                if tt.dim < s.dim {
                    return Err(Error::InvalidArgument(format!(
                        "support `{}` (dim {}) declared inside `{t}` (dim {})",
                        s.id, s.dim, tt.dim
                    )));
                }
                if let Some(p) = s.contains.iter().find(|p| !tt.contains.contains(*p)) {
                    return Err(Error::InvalidArgument(format!(
                        "point `{p}` lies on `{}` which is declared inside `{t}`, but not on `{t}`",
                        s.id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn freeze(self) -> Result<Arc<Ambient>> {
        self.validate()?;
        Ok(Arc::new(self))
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)
    }
}

fn restrict(gamma: &RingElement, s: &Support, ambient_ring: &Arc<RingDescriptor>) -> Result<RingElement> {
    if gamma.ring() != ambient_ring {
        return Err(Error::DescriptorMismatch(format!(
            "class in {} restricted from ambient ring {}",
            gamma.ring(),
            ambient_ring
        )));
    }
    if s.full {
        return Ok(gamma.clone());
    }
    gamma.substitute(&s.ring, &s.substitution)
}

/// Restriction of an ambient class to a support.
pub fn restrict_to(ambient: &Ambient, gamma: &RingElement, support: &Support) -> Result<RingElement> {
    restrict(gamma, support, &ambient.ring)
}

/// A substitution `g_i -> x_i` defines a ring map only if each
/// `x_i^(order_i + 1)` vanishes.
fn check_homomorphism(source: &RingDescriptor, images: &[RingElement], id: &str) -> Result<()> {
    for (g, x) in source.generators().iter().zip(images) {
        if x.homogeneous_degree().is_some_and(|d| d != 1) {
            return Err(Error::InvalidArgument(format!(
                "support `{id}`: image of `{}` is not of degree one",
                g.name
            )));
        }
        if !x.pow(g.order as i64 + 1)?.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "support `{id}`: `{}`^{} does not vanish after restriction",
                g.name,
                g.order + 1
            )));
        }
    }
    Ok(())
}

/// A catalog embedding `i: source -> target` given by the pullback of each
/// target generator. The target carries an image support `name(S)` for every
/// support `S` of the source and an image point `name(p)` for every point.
#[derive(Debug, Clone)]
pub struct Embedding {
    name: String,
    source: Arc<Ambient>,
    target: Arc<Ambient>,
    pullback: Vec<RingElement>,
    support_map: BTreeMap<String, String>,
}

impl Embedding {
    pub fn new(
        name: &str,
        source: Arc<Ambient>,
        mut target: Ambient,
        pullback: Vec<RingElement>,
    ) -> Result<Self> {
        if pullback.len() != target.ring.len() {
            return Err(Error::InvalidArgument(format!(
                "embedding `{name}` needs {} pullbacks",
                target.ring.len()
            )));
        }
        check_homomorphism(&target.ring, &pullback, name)?;
        let pulled_l = target
            .polarization
            .substitute(&source.ring, &pullback)?;
        if &pulled_l != source.polarization() {
            return Err(Error::InvalidArgument(format!(
                "embedding `{name}` does not pull the polarization of `{}` back to that of `{}`",
                target.id, source.id
            )));
        }
        let image = |x: &str| format!("{name}({x})");
        for p in source.points() {
            target.add_point(&image(p))?;
        }
        let mut support_map = BTreeMap::new();
        for s in source.supports() {
            let img = image(&s.id);
            support_map.insert(s.id.clone(), img.clone());
            if s.point {
                continue;
            }
            let substitution = pullback
                .iter()
                .map(|x| restrict(x, s, &source.ring))
                .collect::<Result<Vec<_>>>()?;
            check_homomorphism(&target.ring, &substitution, &img)?;
            let contains = if s.full {
                source.points().map(image).collect()
            } else {
                s.contains.iter().map(|p| image(p)).collect()
            };
            target.supports.insert(
                img.clone(),
                Support {
                    id: img,
                    dim: s.dim,
                    ring: s.ring.clone(),
                    substitution,
                    fundamental: s.fundamental.clone(),
                    scale: s.scale.clone(),
                    full: false,
                    point: false,
                    contains,
                    inside: s.inside.iter().map(|t| image(t)).collect(),
                },
            );
        }
        if let Some(full) = target.supports.get_mut(FULL_SUPPORT) {
            full.contains.extend(target.points.iter().cloned());
        }
        target.id = format!("{}<-{}", target.id, name);
        let target = target.freeze()?;
        Ok(Embedding {
            name: name.to_string(),
            source,
            target,
            pullback,
            support_map,
        })
    }

    /// The Segre embedding `P^m x P^n -> P^((m+1)(n+1)-1)`, `w -> wx + wy`.
    pub fn segre(source: Arc<Ambient>) -> Result<Self> {
        let AmbientKind::Biprojective { m, n } = source.kind else {
            return Err(Error::InvalidArgument(format!(
                "the Segre embedding needs a biprojective source, got `{}`",
                source.id
            )));
        };
        let target = make_projective((m + 1) * (n + 1) - 1)?;
        let pull = vec![source.polarization.clone()];
        Embedding::new("segre", source, target, pull)
    }

    /// The inclusion of the blow-up into `P2 x P1`.
    pub fn blowup_inclusion(source: Arc<Ambient>) -> Result<Self> {
        if source.kind != AmbientKind::BlowupP2 {
            return Err(Error::InvalidArgument(format!(
                "the blow-up inclusion needs the blow-up as source, got `{}`",
                source.id
            )));
        }
        let target = make_biprojective(2, 1)?;
        let pull = vec![
            RingElement::generator_at(&source.ring, 0),
            RingElement::generator_at(&source.ring, 1),
        ];
        Embedding::new("j", source, target, pull)
    }

    /// The blow-up inclusion followed by the Segre map of `P2 x P1` into `P5`.
    pub fn blowup_to_p5(source: Arc<Ambient>) -> Result<Self> {
        if source.kind != AmbientKind::BlowupP2 {
            return Err(Error::InvalidArgument(format!(
                "the blow-up embedding needs the blow-up as source, got `{}`",
                source.id
            )));
        }
        let target = make_projective(5)?;
        let pull = vec![source.polarization.clone()];
        Embedding::new("i", source, target, pull)
    }

    /// Looks up a catalog embedding by name.
    pub fn catalog(name: &str, source: Arc<Ambient>) -> Result<Self> {
        match name {
            "segre" => Embedding::segre(source),
            "blowup_inclusion" => Embedding::blowup_inclusion(source),
            "blowup_to_p5" => Embedding::blowup_to_p5(source),
            other => Err(Error::UnknownEmbedding(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<Ambient> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Ambient> {
        &self.target
    }

    pub fn image_support(&self, source_support: &str) -> Result<&str> {
        self.support_map
            .get(source_support)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownSupport(source_support.to_string()))
    }

    pub fn image_point(&self, point: &str) -> Result<String> {
        if !self.source.has_point(point) {
            return Err(Error::UnknownPoint(point.to_string()));
        }
        Ok(format!("{}({point})", self.name))
    }

    /// `i^* gamma` for a class on the target ambient.
    pub fn pullback(&self, gamma: &RingElement) -> Result<RingElement> {
        gamma.substitute(&self.source.ring, &self.pullback)
    }

    /// `i^* c(N) = i^* c(T target) * c(T source)^-1`.
    pub fn normal_chern(&self) -> Result<RingElement> {
        let pulled = self.pullback(self.target.total_chern())?;
        pulled.try_mul(&self.source.total_chern.inverse()?)
    }

    /// `i_* mu`: every component moves to the image of its support with the
    /// same coefficient.
    pub fn pushforward(&self, mu: &GCycleClass) -> Result<GCycleClass> {
        if !mu.same_ambient(&self.source) {
            return Err(Error::AmbientMismatch(
                mu.ambient().id().to_string(),
                self.source.id.clone(),
            ));
        }
        let mut out = GCycleClass::zero(&self.target);
        for ((support, dim), coeff) in mu.components() {
            let img = self.image_support(support)?;
            out = out.try_add(&GCycleClass::component(&self.target, img, *dim, coeff.clone())?)?;
        }
        Ok(out)
    }
}

/// Ambients with enough supports and points to exercise every operation:
/// `P1..P5` with a flag of linear subspaces, `P1 x P1`, `P2 x P1` and the
/// blow-up of `P2`.
pub fn catalog_ambients() -> Vec<Arc<Ambient>> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(projective_with_flag(n).expect("catalog ambient"));
    }
    out.push(p1xp1_catalog().expect("catalog ambient"));
    out.push(p2xp1_catalog().expect("catalog ambient"));
    out.push(blowup_catalog().expect("catalog ambient"));
    out
}

/// `P^n` with the linear subspaces `L0 ⊂ L1 ⊂ ... ⊂ L(n-1)` through the point
/// `p` and a second point `q` off the flag.
pub fn projective_with_flag(n: u32) -> Result<Arc<Ambient>> {
    let mut y = make_projective(n)?;
    y.add_point("p")?;
    y.add_point("q")?;
    for k in 0..n {
        let mut spec = SupportSpec::new(&format!("L{k}"), k, &[("w", 1)]).containing(&["p"]);
        if k + 1 < n {
            spec = spec.inside(&[&format!("L{}", k + 1)]);
        }
        y.add_support(spec)?;
    }
    y.freeze()
}

/// `P1 x P1` with the rulings through `p` and the diagonal through `p`, `q`.
pub fn p1xp1_catalog() -> Result<Arc<Ambient>> {
    let mut y = make_biprojective(1, 1)?;
    y.add_point("p")?;
    y.add_point("q")?;
    y.add_support(SupportSpec::new("Fx", 1, &[("wy", 1)]).containing(&["p"]))?;
    y.add_support(SupportSpec::new("Fy", 1, &[("wx", 1)]).containing(&["p"]))?;
    y.add_support(SupportSpec::new("D", 1, &[("wx", 1), ("wy", 1)]).containing(&["p", "q"]))?;
    y.freeze()
}

/// `P2 x P1` with a plane, a line and the fibre over a point, all through `p`.
pub fn p2xp1_catalog() -> Result<Arc<Ambient>> {
    let mut y = make_biprojective(2, 1)?;
    y.add_point("p")?;
    y.add_support(SupportSpec::new("P", 2, &[("wx", 1)]).containing(&["p"]))?;
    y.add_support(SupportSpec::new("l", 1, &[("wx", 1)]).containing(&["p"]).inside(&["P"]))?;
    y.add_support(SupportSpec::new("F", 1, &[("wy", 1)]).containing(&["p"]))?;
    y.freeze()
}

/// The blow-up with the exceptional curve `E`, the strict transform `F` of
/// a line through the blown-up point, and a general line `G`.
/// `p` is the point `E ∩ F`; `q` lies on `G` only.
pub fn blowup_catalog() -> Result<Arc<Ambient>> {
    let mut y = make_blowup_p2()?;
    y.add_point("p")?;
    y.add_point("q")?;
    y.add_support(SupportSpec::new("E", 1, &[("wy", 1)]).containing(&["p"]))?;
    y.add_support(SupportSpec::new("F", 1, &[("wx", 1)]).containing(&["p"]))?;
    y.add_support(SupportSpec::new("G", 1, &[("wx", 1), ("wy", 1)]).containing(&["q"]))?;
    y.freeze()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn projective_chern_and_normalization() {
        let p3 = make_projective(3).unwrap();
        let coeffs: Vec<BigInt> = (0..4).map(|k| p3.total_chern().coefficient(&[k])).collect();
        assert_eq!(coeffs, [1, 4, 6, 4].map(BigInt::from));
        assert_eq!(p3.embed_dim(), 3);
        let p1 = make_projective(1).unwrap();
        assert_eq!(p1.total_chern().to_string(), "1 + 2*w");
        let p2 = make_projective(2).unwrap();
        assert_eq!(p2.degree(), int(1));
        assert!(make_projective(0).is_err());
    }

    #[test]
    fn biprojective_basics() {
        let y = make_biprojective(1, 1).unwrap();
        assert_eq!(y.degree(), int(2));
        assert_eq!(y.embed_dim(), 3);
        let y21 = make_biprojective(2, 1).unwrap();
        let r = y21.ring();
        let wx = RingElement::generator_at(r, 0);
        let wy = RingElement::generator_at(r, 1);
        let one = RingElement::one(r);
        let expected = &(&one + &wx).pow(3).unwrap() * &(&one + &wy).pow(2).unwrap();
        assert_eq!(y21.total_chern(), &expected);
        assert!(make_biprojective(0, 1).is_err());
        assert!(make_biprojective(1, 0).is_err());
    }

    #[test]
    fn blowup_chern_restricts_to_one_plus_h_on_e() {
        let y = blowup_catalog().unwrap();
        let c_e = y.restrict(y.total_chern(), "E").unwrap();
        let h = RingElement::generator_at(y.support("E").unwrap().ring(), 0);
        assert_eq!(c_e, &RingElement::one(h.ring()) + &h);
        assert_eq!(y.embed_dim(), 5);
        // \int_Y omega_L^2 = \int_{P2xP1} (wx+wy)^3 = 3
        assert_eq!(y.degree(), int(3));
        let l_e = y.restrict(y.polarization(), "E").unwrap();
        assert_eq!(y.integrate_on("E", &l_e).unwrap(), int(1));
        assert!(y.full_support().is_none());
    }

    #[test]
    fn restriction_examples() {
        let y = blowup_catalog().unwrap();
        let h = RingElement::generator_at(y.support("E").unwrap().ring(), 0);
        assert_eq!(y.restrict(y.polarization(), "E").unwrap(), h);

        let p3 = projective_with_flag(3).unwrap();
        let w = RingElement::generator_at(p3.ring(), 0);
        assert_eq!(p3.restrict(&w, FULL_SUPPORT).unwrap(), w);
        let h = p3.restrict(&w, "L1").unwrap();
        assert_eq!(h, RingElement::generator_at(p3.support("L1").unwrap().ring(), 0));
        assert!((&h * &h).is_zero());
    }

    #[test]
    fn integration_examples() {
        let p3 = projective_with_flag(3).unwrap();
        let a = p3.support("L1").unwrap();
        assert_eq!(a.integrate(&RingElement::generator_at(a.ring(), 0)).unwrap(), int(1));
        let pt = p3.support("p").unwrap();
        assert_eq!(pt.integrate(&RingElement::one(pt.ring())).unwrap(), int(1));

        let y = make_biprojective(1, 1).unwrap();
        let x = RingElement::monomial(y.ring(), vec![1, 1], 2);
        assert_eq!(y.integrate_on(FULL_SUPPORT, &x).unwrap(), int(2));

        let bad = &RingElement::one(a.ring()) + &RingElement::generator_at(a.ring(), 0);
        assert!(matches!(a.integrate(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn support_validation() {
        let mut y = make_projective(2).unwrap();
        assert!(y.add_support(SupportSpec::new("S", 2, &[("w", 1)])).is_err());
        assert!(y.add_support(SupportSpec::new("S", 1, &[("v", 1)])).is_err());
        assert!(y.add_support(SupportSpec::new("S", 1, &[("w", 1)]).degree(0)).is_err());
        assert!(y.add_support(SupportSpec::new("S", 1, &[("w", 1)]).containing(&["nope"])).is_err());

        // wy^2 = 0 but h^2 != 0 on a surface
        let mut z = make_biprojective(2, 1).unwrap();
        assert!(z.add_support(SupportSpec::new("S", 2, &[("wy", 1)])).is_err());

        let mut y = make_projective(3).unwrap();
        y.add_point("a").unwrap();
        y.add_support(SupportSpec::new("H", 2, &[("w", 1)])).unwrap();
        y.add_support(SupportSpec::new("A", 1, &[("w", 1)]).containing(&["a"]).inside(&["H"]))
            .unwrap();
        assert!(y.clone().freeze().is_err(), "a lies on A but not on H");
    }

    #[test]
    fn subset_relation() {
        let p3 = projective_with_flag(3).unwrap();
        assert!(p3.is_subset("L0", "L2"));
        assert!(p3.is_subset("p", "L1"));
        assert!(!p3.is_subset("q", "L1"));
        assert!(p3.is_subset("q", FULL_SUPPORT));
        assert!(!p3.is_subset("L2", "L0"));
    }

    #[test]
    fn segre_embedding_images() {
        let y = p1xp1_catalog().unwrap();
        let e = Embedding::segre(y).unwrap();
        assert_eq!(e.target().dim(), 3);
        let img = e.target().support(e.image_support(FULL_SUPPORT).unwrap()).unwrap();
        assert_eq!(img.dim(), 2);
        let w = RingElement::generator_at(e.target().ring(), 0);
        let h = e.target().restrict(&w, img.id()).unwrap();
        assert_eq!(img.integrate(&(&h * &h)).unwrap(), int(2));
        assert!(img.contains_point("segre(p)"));
        assert!(Embedding::catalog("nope", p1xp1_catalog().unwrap()).is_err());
    }

    #[test]
    fn normal_chern_of_segre_surface() {
        let y = make_biprojective(1, 1).unwrap().freeze().unwrap();
        let e = Embedding::segre(y.clone()).unwrap();
        let l = y.polarization().clone();
        let expected = &RingElement::one(y.ring()) + &l.scale(&int(2));
        assert_eq!(e.normal_chern().unwrap(), expected);
    }

    #[test]
    fn restriction_is_a_ring_homomorphism() {
        for y in catalog_ambients() {
            let gens: Vec<RingElement> = (0..y.ring().len())
                .map(|i| RingElement::generator_at(y.ring(), i))
                .collect();
            let one = RingElement::one(y.ring());
            let a = &(&one + &gens[0].scale(&int(3))) - &gens[gens.len() - 1];
            let b = &(&one - &gens[0]) + &(&gens[0] * &gens[gens.len() - 1]).scale(&int(5));
            for s in y.supports() {
                let lhs = y.restrict(&(&a * &b), s.id()).unwrap();
                let rhs = &y.restrict(&a, s.id()).unwrap() * &y.restrict(&b, s.id()).unwrap();
                assert_eq!(lhs, rhs, "{} on {}", y.id(), s.id());
            }
        }
    }

    #[test]
    fn every_catalog_ambient_has_positive_degree() {
        for y in catalog_ambients() {
            assert!(y.degree().is_positive(), "{}", y.id());
            assert_eq!(y.total_chern().constant_term(), int(1));
            assert!(y.embed_dim() >= y.dim());
        }
    }
}
