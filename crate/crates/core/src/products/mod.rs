//! The product calculus.
//!
//! Nothing here computes a product from first principles. Base values enter
//! as validated [`ProductAxiom`]s; everything else follows from the
//! conversion formulas between the diamond product and the bullet products,
//! the unit and point rules, the smooth-factor rule and bilinearity. The
//! derivation strategy lives in [`engine`].
//!
//! All conversions are instances of one graded transform: for a class
//! `mu = sum_l mu_l`, a degree-one class `u` and an integer `r`,
//!
//! ```text
//! T(mu; u, ±, r) = sum_l (1 ± u)^(l + r) ∧ mu_l
//! ```
//!
//! and `T(·; u, -, r)` inverts `T(·; u, +, r)`.

pub mod engine;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gcycle::{GCycleClass, Multiplicities};
use crate::ring::RingElement;
use crate::spaces::{Ambient, Embedding};

pub use engine::{ProductEngine, ProductKind, TraceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// `sum_l (1 + sign*u)^(l + r) ∧ mu_l`. Negative exponents invert
/// `1 ± u`, which is always a unit since `u` is nilpotent.
pub fn graded_series_transform(
    mu: &GCycleClass,
    u: &RingElement,
    sign: Sign,
    r: i64,
) -> Result<GCycleClass> {
    if !u.is_zero() && u.homogeneous_degree() != Some(1) {
        return Err(Error::InvalidArgument(format!(
            "transform needs a degree-one class, got `{u}`"
        )));
    }
    let signed = match sign {
        Sign::Plus => u.clone(),
        Sign::Minus => -u,
    };
    let base = &RingElement::one(u.ring()) + &signed;
    let mut out = GCycleClass::zero(mu.ambient());
    for l in mu.dims() {
        let factor = base.pow(l as i64 + r)?;
        out = out.try_add(&mu.dim_part(l).wedge(&factor)?)?;
    }
    Ok(out)
}

/// Dimension data of a product of two pure-dimensional classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductContext {
    /// Dimension of the ambient.
    pub n: u32,
    /// Dimension of the projective space the polarization embeds into.
    pub embed_dim: u32,
    pub dim1: u32,
    pub dim2: u32,
    /// Dimension of the intersection of the supports.
    pub dim_v: u32,
}

impl ProductContext {
    pub fn new(ambient: &Ambient, dim1: u32, dim2: u32, dim_v: u32) -> Result<Self> {
        let ctx = ProductContext {
            n: ambient.dim(),
            embed_dim: ambient.embed_dim(),
            dim1,
            dim2,
            dim_v,
        };
        if dim1 > ctx.n || dim2 > ctx.n {
            return Err(Error::InvalidArgument(format!(
                "operand dimensions ({dim1}, {dim2}) exceed the ambient dimension {}",
                ctx.n
            )));
        }
        if (dim_v as i64) < ctx.rho() || dim_v > dim1.min(dim2) {
            return Err(Error::InvalidArgument(format!(
                "dim V = {dim_v} outside [{}, {}]",
                ctx.rho(),
                dim1.min(dim2)
            )));
        }
        Ok(ctx)
    }

    /// Context with `dim V` taken from `declared`, or else from the top
    /// dimension of a known product, or else the smallest admissible value.
    pub fn infer(
        ambient: &Ambient,
        dim1: u32,
        dim2: u32,
        declared: Option<u32>,
        product: &GCycleClass,
    ) -> Result<Self> {
        let floor = {
            let n = ambient.dim() as i64;
            (dim1 as i64 + dim2 as i64 - n).max(0) as u32
        };
        let dim_v = declared
            .or_else(|| product.top_dim())
            .unwrap_or(floor)
            .max(floor)
            .min(dim1.min(dim2));
        Self::new(ambient, dim1, dim2, dim_v)
    }

    /// `d = dim mu1 + dim mu2`.
    pub fn d(&self) -> i64 {
        self.dim1 as i64 + self.dim2 as i64
    }

    /// Expected dimension `d - n`.
    pub fn rho(&self) -> i64 {
        self.d() - self.n as i64
    }

    /// `d - M` for the embedding dimension `M`.
    pub fn rho_hat(&self) -> i64 {
        self.d() - self.embed_dim as i64
    }
}

fn require_projective(ambient: &Ambient, what: &str) -> Result<()> {
    if ambient.is_projective_space() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} is only defined on projective space, not on `{}`",
            ambient.id()
        )))
    }
}

/// `mu1 ⋄ mu2` from `mu1 • mu2` on `P^n`:
/// `sum_{l = max(0, rho)}^{dim V} (1 + w)^(l - rho) (mu1 • mu2)_l`.
pub fn diamond_from_bullet(beta: &GCycleClass, ctx: &ProductContext) -> Result<GCycleClass> {
    let ambient = beta.ambient();
    require_projective(ambient, "the bullet to diamond conversion")?;
    let lo = ctx.rho().max(0);
    if let Some(l) = beta
        .dims()
        .into_iter()
        .find(|l| (*l as i64) < lo || *l > ctx.dim_v)
    {
        return Err(Error::Domain(format!(
            "a bullet product has no part of dimension {l} outside [{lo}, {}]",
            ctx.dim_v
        )));
    }
    graded_series_transform(beta, ambient.polarization(), Sign::Plus, -ctx.rho())
}

/// `mu1 • mu2` from `mu1 ⋄ mu2` on `P^n`:
/// `sum_{k=0}^{dim V} (1 - w)^(k - rho) (mu1 ⋄ mu2)_k`.
pub fn bullet_from_diamond(delta: &GCycleClass, ctx: &ProductContext) -> Result<GCycleClass> {
    let ambient = delta.ambient();
    require_projective(ambient, "the diamond to bullet conversion")?;
    if let Some(l) = delta.dims().into_iter().find(|l| *l > ctx.dim_v) {
        return Err(Error::Domain(format!(
            "a diamond product has no part of dimension {l} > dim V = {}",
            ctx.dim_v
        )));
    }
    graded_series_transform(delta, ambient.polarization(), Sign::Minus, -ctx.rho())
}

/// `mu1 ⋄_Y mu2 = sum_l (1 + omega_L)^(l - d - 1) ∧ c(TY) ∧ (mu1 •_L mu2)_l`.
pub fn diamond_from_bullet_l(beta: &GCycleClass, ctx: &ProductContext) -> Result<GCycleClass> {
    let ambient = beta.ambient();
    let t = graded_series_transform(beta, ambient.polarization(), Sign::Plus, -ctx.d() - 1)?;
    t.wedge(ambient.total_chern())
}

/// `mu1 •_L mu2 = sum_k (1 - omega_L)^(k - d - 1) (c(TY)^-1 ∧ mu1 ⋄_Y mu2)_k`.
pub fn bullet_l_from_diamond(delta: &GCycleClass, ctx: &ProductContext) -> Result<GCycleClass> {
    let ambient = delta.ambient();
    let twisted = delta.wedge(&ambient.total_chern().inverse()?)?;
    graded_series_transform(&twisted, ambient.polarization(), Sign::Minus, -ctx.d() - 1)
}

/// `mu ⋄_Y 1_Y = mu`.
pub fn diamond_unit(mu: &GCycleClass) -> GCycleClass {
    mu.clone()
}

/// `mu •_L 1_Y = sum_k (1 - omega_L)^(k - n - dim mu - 1) (c(TY)^-1 ∧ mu)_k`,
/// applied to each pure-dimensional part of `mu`.
pub fn bullet_l_unit(mu: &GCycleClass) -> Result<GCycleClass> {
    let ambient = mu.ambient();
    let c_inv = ambient.total_chern().inverse()?;
    let n = ambient.dim() as i64;
    let mut out = GCycleClass::zero(ambient);
    for p in mu.dims() {
        let twisted = mu.dim_part(p).wedge(&c_inv)?;
        let part = graded_series_transform(
            &twisted,
            ambient.polarization(),
            Sign::Minus,
            -(n + p as i64) - 1,
        )?;
        out = out.try_add(&part)?;
    }
    Ok(out)
}

/// `mu ⋄ {a} = mu •_L {a} = mult_a(mu) · [a]`, with the multiplicity summed
/// over dimensions.
pub fn product_with_point(mu: &GCycleClass, point: &str) -> Result<GCycleClass> {
    let total = mu.total_mult_at(point)?;
    Ok(GCycleClass::point(mu.ambient(), point)?.scale(&total))
}

/// `(gamma ∧ mu0) ⋆ mu2 = gamma ∧ (mu0 ⋆ mu2)` for either product `⋆`,
/// given the base product `mu0 ⋆ mu2`.
pub fn product_by_smooth_factor(gamma: &RingElement, base_product: &GCycleClass) -> Result<GCycleClass> {
    base_product.wedge(gamma)
}

/// Which product a base value is declared for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomKind {
    /// The bullet product on `P^n`.
    BulletPn,
    /// The bullet product attached to the polarization.
    BulletL,
    /// The intersection product of two properly intersecting cycles.
    ProperDot,
}

impl AxiomKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AxiomKind::BulletPn => "bullet_pn",
            AxiomKind::BulletL => "bullet_L",
            AxiomKind::ProperDot => "proper_dot",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bullet_pn" => Some(AxiomKind::BulletPn),
            "bullet_L" | "bullet_l" => Some(AxiomKind::BulletL),
            "proper_dot" => Some(AxiomKind::ProperDot),
            _ => None,
        }
    }
}

/// A declared base value `left ⋆ right = result`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAxiom {
    pub kind: AxiomKind,
    pub left: GCycleClass,
    pub right: GCycleClass,
    pub result: GCycleClass,
    pub dim_v: Option<u32>,
    pub note: String,
}

impl ProductAxiom {
    pub fn new(kind: AxiomKind, left: GCycleClass, right: GCycleClass, result: GCycleClass) -> Self {
        ProductAxiom {
            kind,
            left,
            right,
            result,
            dim_v: None,
            note: String::new(),
        }
    }

    pub fn with_dim_v(mut self, dim_v: u32) -> Self {
        self.dim_v = Some(dim_v);
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = note.to_string();
        self
    }

    /// Context of the axiom; operands must be pure-dimensional.
    pub fn context(&self) -> Result<ProductContext> {
        let (Some(d1), Some(d2)) = (self.left.pure_dim(), self.right.pure_dim()) else {
            return Err(Error::AxiomRejected(
                "operands must be nonzero and pure-dimensional".into(),
            ));
        };
        ProductContext::infer(self.left.ambient(), d1, d2, self.dim_v, &self.result)
            .map_err(|e| Error::AxiomRejected(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomVerdict {
    Accepted,
    Rejected(String),
}

impl AxiomVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, AxiomVerdict::Accepted)
    }
}

/// Admission test for a base value: dimension window, support containment,
/// and the Bézout equalities/inequalities that apply to its kind.
pub fn validate_axiom(ax: &ProductAxiom) -> AxiomVerdict {
    match check_axiom(ax) {
        Ok(()) => AxiomVerdict::Accepted,
        Err(reason) => AxiomVerdict::Rejected(reason),
    }
}

fn check_axiom(ax: &ProductAxiom) -> std::result::Result<(), String> {
    let ambient = ax.left.ambient();
    if !ax.right.same_ambient(ambient) || !ax.result.same_ambient(ambient) {
        return Err("operands and result must share one ambient".into());
    }
    let ctx = ax.context().map_err(|e| e.to_string())?;
    let rho = ctx.rho();
    let lo = match ax.kind {
        AxiomKind::BulletL => ctx.rho_hat().max(0),
        _ => rho.max(0),
    };
    for l in ax.result.dims() {
        if (l as i64) < lo || l > ctx.dim_v {
            return Err(format!(
                "result has a part of dimension {l} outside [{lo}, {}]",
                ctx.dim_v
            ));
        }
    }
    for s in ax.result.support_ids() {
        let in_left = ax.left.support_ids().iter().any(|t| ambient.is_subset(s, t));
        let in_right = ax.right.support_ids().iter().any(|t| ambient.is_subset(s, t));
        if !(in_left && in_right) {
            return Err(format!(
                "result support `{s}` is not declared inside both operand supports"
            ));
        }
    }
    let deg1 = ax.left.deg_l();
    let deg2 = ax.right.deg_l();
    let deg = ax.result.deg_l();
    let effective = ax.left.is_effective() && ax.right.is_effective();
    match ax.kind {
        AxiomKind::ProperDot => {
            let (_, l_mov) = ax.left.fix_mov();
            let (_, r_mov) = ax.right.fix_mov();
            let (_, res_mov) = ax.result.fix_mov();
            if !l_mov.is_zero() || !r_mov.is_zero() || !res_mov.is_zero() {
                return Err("a proper intersection relates ordinary cycles only".into());
            }
            if let Some(l) = ax.result.dims().into_iter().find(|l| *l as i64 != rho) {
                return Err(format!(
                    "proper intersection has a component of dimension {l}, expected {rho}"
                ));
            }
            if ambient.is_projective_space() && deg != &deg1 * &deg2 {
                return Err(format!(
                    "Bézout equality fails: deg = {deg}, deg1 * deg2 = {}",
                    &deg1 * &deg2
                ));
            }
        }
        AxiomKind::BulletPn | AxiomKind::BulletL => {
            if ax.kind == AxiomKind::BulletPn && !ambient.is_projective_space() {
                return Err(format!(
                    "a bullet_pn axiom needs projective space, not `{}`",
                    ambient.id()
                ));
            }
            let exact = match ax.kind {
                AxiomKind::BulletPn => rho >= 0,
                _ => ctx.rho_hat() >= 0,
            };
            if exact && deg != &deg1 * &deg2 {
                return Err(format!(
                    "Bézout equality fails: deg = {deg}, deg1 * deg2 = {}",
                    &deg1 * &deg2
                ));
            }
            if effective {
                if !ax.result.is_effective() {
                    return Err("product of effective classes must be effective".into());
                }
                if deg > &deg1 * &deg2 {
                    return Err(format!(
                        "Bézout inequality fails: deg = {deg} > deg1 * deg2 = {}",
                        &deg1 * &deg2
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Both sides of `deg(mu1 ⋄ mu2) <= 2^(dim V - rho) deg(mu1 • mu2)` on `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutReport {
    pub diamond_degree: BigInt,
    pub bullet_degree: BigInt,
    /// `dim V - rho`.
    pub exponent: u32,
    pub bound: BigInt,
    pub slack: BigInt,
    pub equality: bool,
    /// `deg (mu1 ⋄ mu2)_rho`, which should equal `deg(mu1 • mu2)` when `rho >= 0`.
    pub expected_dim_degree: Option<BigInt>,
}

pub fn bezout_bound_pn(
    bullet: &GCycleClass,
    diamond: &GCycleClass,
    ctx: &ProductContext,
) -> Result<BezoutReport> {
    require_projective(bullet.ambient(), "the diamond/bullet degree estimate")?;
    if !bullet.is_effective() {
        return Err(Error::Domain(
            "the degree estimate needs an effective bullet product".into(),
        ));
    }
    let exponent = (ctx.dim_v as i64 - ctx.rho()) as u32;
    let bullet_degree = bullet.deg_l();
    let diamond_degree = diamond.deg_l();
    let bound = (BigInt::one() << exponent) * &bullet_degree;
    if diamond_degree > bound {
        return Err(Error::Invariant(format!(
            "deg(⋄) = {diamond_degree} exceeds 2^{exponent} * deg(•) = {bound}"
        )));
    }
    let expected_dim_degree = (ctx.rho() >= 0).then(|| diamond.dim_part(ctx.rho() as u32).deg_l());
    Ok(BezoutReport {
        slack: &bound - &diamond_degree,
        equality: diamond_degree == bound,
        diamond_degree,
        bullet_degree,
        exponent,
        bound,
        expected_dim_degree,
    })
}

/// `deg_L(mu1 •_L mu2)` against `deg_L mu1 · deg_L mu2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutLReport {
    pub product_degree: BigInt,
    pub factor_product: BigInt,
    /// Equality is required when `rho_hat >= 0`.
    pub equality_required: bool,
    pub holds: bool,
}

pub fn bezout_bound_l(
    mu1: &GCycleClass,
    mu2: &GCycleClass,
    bullet_l: &GCycleClass,
    ctx: &ProductContext,
) -> BezoutLReport {
    let product_degree = bullet_l.deg_l();
    let factor_product = mu1.deg_l() * mu2.deg_l();
    let equality_required = ctx.rho_hat() >= 0;
    let effective = mu1.is_effective() && mu2.is_effective();
    let holds = if equality_required {
        product_degree == factor_product
    } else if effective {
        product_degree <= factor_product
    } else {
        true
    };
    BezoutLReport {
        product_degree,
        factor_product,
        equality_required,
        holds,
    }
}

/// `epsilon_l(mu1, mu2, x)` read off a computed product.
pub fn local_intersection_numbers(product: &GCycleClass, point: &str) -> Result<Multiplicities> {
    product.mult_at(point)
}

/// Both sides of `i_* mu1 ⋄ i_* mu2 = i_*(i^* c(N) ∧ mu1 ⋄_Y mu2)` for an
/// embedding into projective space.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatReport {
    pub left: GCycleClass,
    pub right: GCycleClass,
    pub holds: bool,
}

/// The left side goes through the bullet product: `mu1 •_L mu2` from the
/// given diamond product, pushed forward, then converted to the diamond
/// product on `P^M`. The right side twists the diamond product by the Chern
/// class of the normal bundle and pushes forward.
pub fn pushforward_compat_check(
    emb: &Embedding,
    mu1: &GCycleClass,
    mu2: &GCycleClass,
    diamond: &GCycleClass,
) -> Result<CompatReport> {
    let target = emb.target();
    require_projective(target, "the pushforward cross-check")?;
    if target.dim() != emb.source().embed_dim() {
        return Err(Error::Domain(format!(
            "`{}` is not the embedding space P^{} of `{}`",
            target.id(),
            emb.source().embed_dim(),
            emb.source().id()
        )));
    }
    if mu1.is_zero() || mu2.is_zero() {
        if !diamond.is_zero() {
            return Err(Error::InvalidArgument(
                "a product with the zero class is zero".into(),
            ));
        }
        let zero = GCycleClass::zero(target);
        return Ok(CompatReport {
            left: zero.clone(),
            right: zero,
            holds: true,
        });
    }
    let (Some(d1), Some(d2)) = (mu1.pure_dim(), mu2.pure_dim()) else {
        return Err(Error::InvalidArgument(
            "the cross-check needs pure-dimensional operands".into(),
        ));
    };
    let src_ctx = ProductContext::infer(emb.source(), d1, d2, None, diamond)?;
    let bullet_l = bullet_l_from_diamond(diamond, &src_ctx)?;
    let pushed = emb.pushforward(&bullet_l)?;
    let tgt_ctx = ProductContext::infer(target, d1, d2, Some(src_ctx.dim_v), &pushed)?;
    let left = diamond_from_bullet(&pushed, &tgt_ctx)?;
    let right = emb.pushforward(&diamond.wedge(&emb.normal_chern()?)?)?;
    Ok(CompatReport {
        holds: left == right,
        left,
        right,
    })
}

/// `true` when every per-dimension entry of the two maps agrees, treating
/// missing dimensions as zero.
pub fn same_multiplicities(a: &Multiplicities, b: &Multiplicities) -> bool {
    let keys: std::collections::BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
    let zero = BigInt::zero();
    keys.into_iter()
        .all(|k| a.get(&k).unwrap_or(&zero) == b.get(&k).unwrap_or(&zero))
}

/// `2^e` as a big integer.
pub fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

/// `deg` restricted to effective inputs; convenience for reports.
pub fn is_nonnegative(x: &BigInt) -> bool {
    !x.is_negative()
}
