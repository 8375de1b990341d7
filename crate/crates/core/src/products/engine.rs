//! Derivation of products from declared base values.
//!
//! A product `a ⋆ b` is resolved in this order:
//!
//! 1. direct rules: a base value for `(a, b)` or `(b, a)` (converted to the
//!    requested product when declared for another one), the unit rule and
//!    the point rule. When several apply, all are computed and must agree;
//! 2. bilinearity over components, then integer scaling;
//! 3. the smooth-factor rule for moving components whose coefficient is the
//!    restriction of an ambient class.
//!
//! Anything else is reported as underivable, naming the missing base value.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{
    bullet_from_diamond, bullet_l_from_diamond, bullet_l_unit, diamond_from_bullet,
    diamond_from_bullet_l, diamond_unit, product_by_smooth_factor, product_with_point,
    validate_axiom, AxiomKind, AxiomVerdict, ProductAxiom,
};
use crate::error::{Error, Result};
use crate::gcycle::GCycleClass;
use crate::ring::RingElement;
use crate::spaces::{Ambient, Support};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductKind {
    Diamond,
    BulletL,
}

impl ProductKind {
    pub fn symbol(self) -> &'static str {
        match self {
            ProductKind::Diamond => "⋄",
            ProductKind::BulletL => "•_L",
        }
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One step of a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: String,
    pub formula: String,
    pub detail: String,
}

impl TraceEntry {
    fn new(rule: &str, formula: &str, detail: String) -> Self {
        TraceEntry {
            rule: rule.to_string(),
            formula: formula.to_string(),
            detail,
        }
    }
}

const F_BASE: &str = "declared base value";
const F_PROPER: &str = "μ1 ⋄ μ2 = μ1 • μ2 = μ1 · μ2 for a proper intersection on P^n";
const F_PN_BULLET: &str = "μ1 •_L μ2 = μ1 • μ2 on P^n";
const F_DIAMOND_FROM_BULLET: &str = "μ1 ⋄ μ2 = Σ_ℓ (1+ω)^(ℓ-ρ) ∧ (μ1 • μ2)_ℓ";
const F_DIAMOND_FROM_BULLET_L: &str = "μ1 ⋄ μ2 = c(TY) ∧ Σ_ℓ (1+ω_L)^(ℓ-d-1) ∧ (μ1 •_L μ2)_ℓ";
const F_BULLET_L_FROM_DIAMOND: &str = "μ1 •_L μ2 = Σ_k (1-ω_L)^(k-d-1) ∧ (c(TY)^-1 ∧ μ1 ⋄ μ2)_k";
const F_UNIT_DIAMOND: &str = "μ ⋄ 1_Y = μ";
const F_UNIT_BULLET_L: &str = "μ •_L 1_Y = Σ_k (1-ω_L)^(k-n-dim μ-1) ∧ (c(TY)^-1 ∧ μ)_k";
const F_POINT: &str = "μ ⋆ {a} = mult_a(μ) · [a]";
const F_LINEAR: &str = "(μ + μ') ⋆ ν = μ ⋆ ν + μ' ⋆ ν";
const F_SCALE: &str = "(c·μ) ⋆ ν = c·(μ ⋆ ν)";
const F_SMOOTH: &str = "(γ ∧ [S]) ⋆ ν = γ ∧ ([S] ⋆ ν)";

/// Product evaluator over one ambient with a set of validated base values.
#[derive(Debug, Clone)]
pub struct ProductEngine {
    ambient: Arc<Ambient>,
    axioms: Vec<ProductAxiom>,
}

struct Candidate {
    value: GCycleClass,
    entry: TraceEntry,
}

impl ProductEngine {
    pub fn new(ambient: Arc<Ambient>) -> Self {
        ProductEngine {
            ambient,
            axioms: Vec::new(),
        }
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn axioms(&self) -> &[ProductAxiom] {
        &self.axioms
    }

    /// Validates and stores a base value.
    pub fn add_axiom(&mut self, ax: ProductAxiom) -> Result<()> {
        if !ax.left.same_ambient(&self.ambient) {
            return Err(Error::AmbientMismatch(
                ax.left.ambient().id().to_string(),
                self.ambient.id().to_string(),
            ));
        }
        match validate_axiom(&ax) {
            AxiomVerdict::Accepted => {
                self.axioms.push(ax);
                Ok(())
            }
            AxiomVerdict::Rejected(reason) => Err(Error::AxiomRejected(format!(
                "{} {} {} = {}: {reason}",
                ax.left,
                ax.kind.as_str(),
                ax.right,
                ax.result
            ))),
        }
    }

    pub fn product(&self, kind: ProductKind, a: &GCycleClass, b: &GCycleClass) -> Result<GCycleClass> {
        let mut trace = Vec::new();
        self.derive(kind, a, b, &mut trace)
    }

    pub fn product_traced(
        &self,
        kind: ProductKind,
        a: &GCycleClass,
        b: &GCycleClass,
    ) -> Result<(GCycleClass, Vec<TraceEntry>)> {
        let mut trace = Vec::new();
        let value = self.derive(kind, a, b, &mut trace)?;
        Ok((value, trace))
    }

    pub fn diamond(&self, a: &GCycleClass, b: &GCycleClass) -> Result<GCycleClass> {
        self.product(ProductKind::Diamond, a, b)
    }

    pub fn bullet_l(&self, a: &GCycleClass, b: &GCycleClass) -> Result<GCycleClass> {
        self.product(ProductKind::BulletL, a, b)
    }

    fn derive(
        &self,
        kind: ProductKind,
        a: &GCycleClass,
        b: &GCycleClass,
        trace: &mut Vec<TraceEntry>,
    ) -> Result<GCycleClass> {
        for x in [a, b] {
            if !x.same_ambient(&self.ambient) {
                return Err(Error::AmbientMismatch(
                    x.ambient().id().to_string(),
                    self.ambient.id().to_string(),
                ));
            }
        }
        if a.is_zero() || b.is_zero() {
            return Ok(GCycleClass::zero(&self.ambient));
        }

        let candidates = self.direct_candidates(kind, a, b)?;
        if let Some(first) = candidates.first() {
            if let Some(other) = candidates.iter().find(|c| c.value != first.value) {
                return Err(Error::Inconsistent(format!(
                    "{a} {kind} {b}: `{}` gives {} but `{}` gives {}",
                    first.entry.rule, first.value, other.entry.rule, other.value
                )));
            }
            let value = first.value.clone();
            trace.extend(candidates.into_iter().map(|c| c.entry));
            return Ok(value);
        }

        if a.num_components() > 1 || b.num_components() > 1 {
            let (many, other, swapped) = if a.num_components() > 1 {
                (a, b, false)
            } else {
                (b, a, true)
            };
            trace.push(TraceEntry::new(
                "bilinearity",
                F_LINEAR,
                format!("split {many} into {} components", many.num_components()),
            ));
            let mut out = GCycleClass::zero(&self.ambient);
            for part in many.split() {
                let p = if swapped {
                    self.derive(kind, other, &part, trace)?
                } else {
                    self.derive(kind, &part, other, trace)?
                };
                out = out.try_add(&p)?;
            }
            return Ok(out);
        }

        for (x, y, swapped) in [(a, b, false), (b, a, true)] {
            if let Some((base, c)) = self.scaled(x)? {
                trace.push(TraceEntry::new("scaling", F_SCALE, format!("{x} = {c}·{base}")));
                let p = if swapped {
                    self.derive(kind, y, &base, trace)?
                } else {
                    self.derive(kind, &base, y, trace)?
                };
                return Ok(p.scale(&c));
            }
        }

        for (x, y, swapped) in [(a, b, false), (b, a, true)] {
            let ((support, dim), kappa) = x.components().next().expect("one component");
            let s = self.ambient.support(support)?;
            if *dim == s.dim() {
                continue;
            }
            let Some(gamma) = self.lift(s, kappa)? else {
                return Err(Error::Underivable(format!(
                    "{a} {kind} {b}: the coefficient `{kappa}` on `{support}` is not the \
                     restriction of an ambient class"
                )));
            };
            let base = GCycleClass::fundamental(&self.ambient, support)?;
            trace.push(TraceEntry::new(
                "smooth factor",
                F_SMOOTH,
                format!("{x} = ({gamma}) ∧ {base}"),
            ));
            let p = if swapped {
                self.derive(kind, y, &base, trace)?
            } else {
                self.derive(kind, &base, y, trace)?
            };
            return product_by_smooth_factor(&gamma, &p);
        }

        Err(Error::Underivable(format!(
            "no base value for {a} {kind} {b}; declare an axiom for this pair"
        )))
    }

    fn direct_candidates(
        &self,
        kind: ProductKind,
        a: &GCycleClass,
        b: &GCycleClass,
    ) -> Result<Vec<Candidate>> {
        let mut out = Vec::new();
        for ax in &self.axioms {
            let matches = (&ax.left == a && &ax.right == b) || (&ax.left == b && &ax.right == a);
            if matches {
                self.axiom_candidates(kind, ax, &mut out)?;
            }
        }
        for (x, y) in [(a, b), (b, a)] {
            if self.is_unit(y) {
                let (value, formula) = match kind {
                    ProductKind::Diamond => (diamond_unit(x), F_UNIT_DIAMOND),
                    ProductKind::BulletL => (bullet_l_unit(x)?, F_UNIT_BULLET_L),
                };
                out.push(Candidate {
                    entry: TraceEntry::new("unit", formula, format!("{x} {kind} 1_Y = {value}")),
                    value,
                });
            }
            if let Some(point) = point_of(y) {
                let value = product_with_point(x, &point)?;
                out.push(Candidate {
                    entry: TraceEntry::new("point", F_POINT, format!("{x} {kind} {y} = {value}")),
                    value,
                });
            }
        }
        Ok(out)
    }

    fn axiom_candidates(&self, kind: ProductKind, ax: &ProductAxiom, out: &mut Vec<Candidate>) -> Result<()> {
        let ctx = ax.context()?;
        let on_pn = self.ambient.is_projective_space();
        let r = &ax.result;
        let detail = |v: &GCycleClass| format!("{} {kind} {} = {v}", ax.left, ax.right);
        let mut push = |rule: &str, formula: &str, value: GCycleClass| {
            out.push(Candidate {
                entry: TraceEntry::new(rule, formula, detail(&value)),
                value,
            });
        };
        match (ax.kind, kind) {
            (AxiomKind::ProperDot, ProductKind::Diamond) => push("axiom proper_dot", F_PROPER, r.clone()),
            (AxiomKind::ProperDot, ProductKind::BulletL) => {
                push(
                    "axiom proper_dot, diamond to bullet_L",
                    F_BULLET_L_FROM_DIAMOND,
                    bullet_l_from_diamond(r, &ctx)?,
                );
                if on_pn {
                    push("axiom proper_dot", F_PROPER, r.clone());
                }
            }
            (AxiomKind::BulletPn, ProductKind::BulletL) => push("axiom bullet_pn", F_PN_BULLET, r.clone()),
            (AxiomKind::BulletPn, ProductKind::Diamond) => {
                push(
                    "axiom bullet_pn, bullet to diamond",
                    F_DIAMOND_FROM_BULLET,
                    diamond_from_bullet(r, &ctx)?,
                );
                push(
                    "axiom bullet_pn, bullet_L to diamond",
                    F_DIAMOND_FROM_BULLET_L,
                    diamond_from_bullet_l(r, &ctx)?,
                );
            }
            (AxiomKind::BulletL, ProductKind::BulletL) => push("axiom bullet_L", F_BASE, r.clone()),
            (AxiomKind::BulletL, ProductKind::Diamond) => {
                push(
                    "axiom bullet_L, bullet_L to diamond",
                    F_DIAMOND_FROM_BULLET_L,
                    diamond_from_bullet_l(r, &ctx)?,
                );
                if on_pn {
                    push(
                        "axiom bullet_L, bullet to diamond",
                        F_DIAMOND_FROM_BULLET,
                        diamond_from_bullet(r, &ctx)?,
                    );
                }
            }
        }
        if on_pn && ax.kind != AxiomKind::ProperDot && kind == ProductKind::BulletL {
            // Round trip through the diamond product as a consistency check.
            let back = bullet_from_diamond(&diamond_from_bullet(r, &ctx)?, &ctx)?;
            push("axiom round trip", F_DIAMOND_FROM_BULLET, back);
        }
        Ok(())
    }

    fn is_unit(&self, x: &GCycleClass) -> bool {
        match self.ambient.full_support() {
            Some(full) => GCycleClass::fundamental(&self.ambient, full.id())
                .map(|u| &u == x)
                .unwrap_or(false),
            None => false,
        }
    }

    /// `(base, c)` when `x = c·base` for a single fixed component with
    /// integer coefficient `c != 1`.
    fn scaled(&self, x: &GCycleClass) -> Result<Option<(GCycleClass, BigInt)>> {
        let ((support, dim), kappa) = x.components().next().expect("one component");
        let s = self.ambient.support(support)?;
        if *dim != s.dim() || kappa.is_one() {
            return Ok(None);
        }
        let c = kappa.constant_term();
        Ok(Some((GCycleClass::fundamental(&self.ambient, support)?, c)))
    }

    /// An ambient class `gamma` whose restriction to `s` is `kappa`: the
    /// class itself on the full space, otherwise an integer multiple of a
    /// power of `omega_L` or of one generator.
    fn lift(&self, s: &Support, kappa: &RingElement) -> Result<Option<RingElement>> {
        if s.is_full() {
            return Ok(Some(kappa.clone()));
        }
        let Some(j) = kappa.homogeneous_degree() else {
            return Ok(None);
        };
        let ring = self.ambient.ring();
        let mut bases = vec![self.ambient.polarization().clone()];
        bases.extend((0..ring.len()).map(|i| RingElement::generator_at(ring, i)));
        for g in bases {
            let gj = g.pow(j as i64)?;
            let r = self.ambient.restrict(&gj, s.id())?;
            let Some((exps, rc)) = r.terms().next() else {
                continue;
            };
            let kc = kappa.coefficient(exps);
            if (&kc % rc).is_zero() {
                let c = &kc / rc;
                if r.scale(&c) == *kappa {
                    return Ok(Some(gj.scale(&c)));
                }
            }
        }
        Ok(None)
    }
}

/// The point when `x` is exactly `[a]`.
fn point_of(x: &GCycleClass) -> Option<String> {
    if x.num_components() != 1 {
        return None;
    }
    let ((support, _), kappa) = x.components().next()?;
    let s = x.ambient().support(support).ok()?;
    (s.is_point() && kappa.constant_term() == BigInt::one()).then(|| support.clone())
}
