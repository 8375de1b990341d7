//! The built-in verification suite: the numbered acceptance checks plus the
//! expectations stored in the built-in scenarios.

use std::collections::BTreeMap;
use std::sync::Arc;

use gencyc_core::products::{
    bezout_bound_l, bezout_bound_pn, bullet_from_diamond, bullet_l_from_diamond, diamond_from_bullet,
    diamond_from_bullet_l, graded_series_transform, pushforward_compat_check, same_multiplicities,
    validate_axiom,
};
use gencyc_core::sample::{random_class, random_pure_class};
use gencyc_core::spaces::{catalog_ambients, make_projective, projective_with_flag};
use gencyc_core::{
    Ambient, AxiomKind, Embedding, GCycleClass, ProductAxiom, ProductContext, ProductEngine, ProductKind, Sign,
    SupportSpec, FULL_SUPPORT,
};
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::error::CliError;
use crate::eval::Evaluator;
use crate::expr::parse;
use crate::scenario::Scenario;

pub const DEFAULT_SEED: u64 = 0x6765_6e63_7963;
pub const KOKONG_PARAMETERS: [i64; 4] = [1, 2, 3, 5];
pub const RANDOM_INSTANCES: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub criteria: Vec<CheckResult>,
    pub goldens: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().chain(&self.goldens).all(|c| c.passed)
    }

    pub fn to_json(&self) -> Json {
        let item = |c: &CheckResult| json!({ "id": c.id, "title": c.title, "passed": c.passed, "detail": c.detail });
        json!({
            "passed": self.passed(),
            "criteria": self.criteria.iter().map(item).collect::<Vec<_>>(),
            "goldens": self.goldens.iter().map(item).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out: Vec<String> = self.criteria.iter().map(CheckResult::line).collect();
        let failed: Vec<&CheckResult> = self.goldens.iter().filter(|g| !g.passed).collect();
        out.push(format!(
            "[{}] scenario expectations: {} of {} hold",
            if failed.is_empty() { "PASS" } else { "FAIL" },
            self.goldens.len() - failed.len(),
            self.goldens.len()
        ));
        out.extend(failed.iter().map(|g| format!("    {}", g.line())));
        out.join("\n")
    }
}

type Check = fn(u64) -> Result<String, String>;

pub const CRITERIA: [(u32, &str, Check); 10] = [
    (1, "blow-up exceptional curve", criterion_blowup),
    (2, "Segre self-intersection", criterion_segre),
    (3, "non-associativity in P3", criterion_non_associativity),
    (4, "sharpness for linear subspaces", criterion_sharpness),
    (5, "graded transform involution", criterion_involution),
    (6, "conversion round trips", criterion_round_trips),
    (7, "Bézout checks", criterion_bezout),
    (8, "multiplicity consistency", criterion_multiplicities),
    (9, "proper-case structure", criterion_proper_case),
    (10, "pushforward compatibility", criterion_pushforward),
];

pub fn run_criterion(id: u32, seed: u64) -> CheckResult {
    let (_, title, f) = CRITERIA
        .iter()
        .find(|(i, _, _)| *i == id)
        .expect("criterion id in 1..=10");
    let (passed, detail) = match f(seed) {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        id: id.to_string(),
        title: title.to_string(),
        passed,
        detail,
    }
}

pub fn run_suite(seed: u64) -> SuiteReport {
    SuiteReport {
        criteria: CRITERIA.iter().map(|(id, _, _)| run_criterion(*id, seed)).collect(),
        goldens: run_goldens(),
    }
}

/// Every built-in scenario instance: the kokong family for each parameter
/// value, the Segre quadric and the blow-up.
pub fn suite_scenarios() -> Result<Vec<Scenario>, CliError> {
    let mut out = Vec::new();
    for m in KOKONG_PARAMETERS {
        out.push(Scenario::builtin("kokong", &BTreeMap::from([("m".to_string(), m)]))?);
    }
    out.push(Scenario::builtin("segre", &BTreeMap::new())?);
    out.push(Scenario::builtin("blowup", &BTreeMap::new())?);
    Ok(out)
}

fn scenario_label(s: &Scenario) -> String {
    if s.parameters.is_empty() {
        s.name.clone()
    } else {
        let ps: Vec<String> = s.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}[{}]", s.name, ps.join(","))
    }
}

pub fn run_goldens() -> Vec<CheckResult> {
    let scenarios = match suite_scenarios() {
        Ok(s) => s,
        Err(e) => {
            return vec![CheckResult {
                id: "load".into(),
                title: "built-in scenarios".into(),
                passed: false,
                detail: e.to_string(),
            }]
        }
    };
    let mut out = Vec::new();
    for s in &scenarios {
        out.extend(scenario_checks(s, &scenario_label(s)));
    }
    out
}

/// Expectations of one scenario as check results.
pub fn scenario_checks(s: &Scenario, label: &str) -> Vec<CheckResult> {
    s.check_expectations()
        .into_iter()
        .map(|(what, r)| CheckResult {
            id: label.to_string(),
            title: what,
            passed: r.is_ok(),
            detail: r.err().unwrap_or_else(|| "ok".into()),
        })
        .collect()
}

fn fail<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn class_of(s: &Scenario, text: &str) -> Result<GCycleClass, String> {
    let e = parse(text).map_err(fail)?;
    Evaluator::new(s).class(&e).map_err(fail)
}

fn criterion_blowup(_: u64) -> Result<String, String> {
    let s = Scenario::builtin("blowup", &BTreeMap::new()).map_err(fail)?;
    let y = &s.ambient;
    let e = GCycleClass::fundamental(y, "E").map_err(fail)?;
    let expect = e.try_sub(&e.wedge(y.polarization()).map_err(fail)?).map_err(fail)?;
    let ctx = ProductContext::new(y, 1, 1, 1).map_err(fail)?;
    let converted = diamond_from_bullet_l(&e, &ctx).map_err(fail)?;
    ensure(converted == expect, || format!("conversion gives {converted}, expected {expect}"))?;
    let derived = s.engine.diamond(&e, &e).map_err(fail)?;
    ensure(derived == expect, || format!("engine gives {derived}, expected {expect}"))?;
    let back = bullet_l_from_diamond(&derived, &ctx).map_err(fail)?;
    ensure(back == e, || format!("round trip gives {back}"))?;
    Ok(format!("E ⋄ E = {derived}; back to E •_L E = {back}"))
}

fn criterion_segre(_: u64) -> Result<String, String> {
    let s = Scenario::builtin("segre", &BTreeMap::new()).map_err(fail)?;
    let y = &s.ambient;
    let u = GCycleClass::unit(y).map_err(fail)?;
    let expect = u.try_add(&u.wedge(y.polarization()).map_err(fail)?).map_err(fail)?;
    let ctx = ProductContext::new(y, 2, 2, 2).map_err(fail)?;
    let converted = bullet_l_from_diamond(&u, &ctx).map_err(fail)?;
    ensure(converted == expect, || format!("conversion gives {converted}, expected {expect}"))?;
    let derived = s.engine.bullet_l(&u, &u).map_err(fail)?;
    ensure(derived == expect, || format!("engine gives {derived}"))?;
    let (d_y, d_p) = (u.deg_l(), derived.deg_l());
    ensure(d_y == BigInt::from(2) && d_p == BigInt::from(4), || {
        format!("deg Y = {d_y}, deg(Y •_L Y) = {d_p}")
    })?;
    Ok(format!("Y •_L Y = {derived}, deg_L Y = {d_y}, deg_L(Y •_L Y) = {d_p}"))
}

fn criterion_non_associativity(_: u64) -> Result<String, String> {
    for m in KOKONG_PARAMETERS {
        let s = Scenario::builtin("kokong", &BTreeMap::from([("m".to_string(), m)])).map_err(fail)?;
        let y = &s.ambient;
        let f = |id: &str| GCycleClass::fundamental(y, id).map_err(fail);
        let one_plus_w_a = f("A")?.try_add(&f("A")?.wedge(y.polarization()).map_err(fail)?).map_err(fail)?;
        let expect4 = one_plus_w_a
            .scale(&BigInt::from(2))
            .try_add(&f("b")?.scale(&BigInt::from(m - 1)))
            .map_err(fail)?;
        let expect5 = f("a")?.scale(&BigInt::from(m)).try_add(&one_plus_w_a).map_err(fail)?;
        let spor4 = class_of(&s, "diamond(H3, diamond(H2, Z))")?;
        let spor5 = class_of(&s, "diamond(diamond(H3, H2), Z)")?;
        ensure(spor4 == expect4, || format!("m={m}: H3 ⋄ (H2 ⋄ Z) = {spor4}, expected {expect4}"))?;
        ensure(spor5 == expect5, || format!("m={m}: (H3 ⋄ H2) ⋄ Z = {spor5}, expected {expect5}"))?;
        ensure(spor4 != spor5, || format!("m={m}: the two bracketings agree"))?;
    }
    Ok(format!(
        "m ∈ {KOKONG_PARAMETERS:?}: H3 ⋄ (H2 ⋄ Z) = 2(1+ω)∧A + (m-1)[b] ≠ m[a] + (1+ω)∧A = (H3 ⋄ H2) ⋄ Z"
    ))
}

/// `P^n` with a linear subspace `V` of dimension `k < n` through a point.
fn plane_in(n: u32, k: u32) -> Result<(Arc<Ambient>, GCycleClass), String> {
    let mut y = make_projective(n).map_err(fail)?;
    y.add_point("p").map_err(fail)?;
    if k == n {
        let y = y.freeze().map_err(fail)?;
        let v = GCycleClass::fundamental(&y, FULL_SUPPORT).map_err(fail)?;
        return Ok((y, v));
    }
    y.add_support(SupportSpec::new("V", k, &[("w", 1)]).containing(&["p"]))
        .map_err(fail)?;
    let y = y.freeze().map_err(fail)?;
    let v = GCycleClass::fundamental(&y, "V").map_err(fail)?;
    Ok((y, v))
}

fn criterion_sharpness(_: u64) -> Result<String, String> {
    let mut count = 0;
    for n in 1..=6u32 {
        for k in n.div_ceil(2)..=n {
            let (y, v) = plane_in(n, k)?;
            let mut engine = ProductEngine::new(y.clone());
            engine
                .add_axiom(ProductAxiom::new(AxiomKind::BulletPn, v.clone(), v.clone(), v.clone()))
                .map_err(fail)?;
            let diamond = engine.diamond(&v, &v).map_err(fail)?;
            let bullet = engine.bullet_l(&v, &v).map_err(fail)?;
            let ctx = ProductContext::new(&y, k, k, k).map_err(fail)?;
            let report = bezout_bound_pn(&bullet, &diamond, &ctx).map_err(fail)?;
            let want = BigInt::from(1) << (n - k);
            ensure(report.diamond_degree == want && report.equality, || {
                format!(
                    "n={n}, k={k}: deg(V ⋄ V) = {}, bound {} (2^{})",
                    report.diamond_degree, report.bound, report.exponent
                )
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs (k, n) with 2k ≥ n, n ≤ 6: deg(V ⋄ V) = 2^(n-k), equality in every case"))
}

fn criterion_involution(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ambients = catalog_ambients();
    for y in &ambients {
        for i in 0..RANDOM_INSTANCES {
            let mu = random_class(&mut rng, y, 5, 4);
            let r = rng.gen_range(-8..=8);
            let t = graded_series_transform(&mu, y.polarization(), Sign::Plus, r).map_err(fail)?;
            let back = graded_series_transform(&t, y.polarization(), Sign::Minus, r).map_err(fail)?;
            ensure(back == mu, || format!("{} instance {i}, r={r}: {mu} -> {back}", y.id()))?;
            let t = graded_series_transform(&mu, y.polarization(), Sign::Minus, r).map_err(fail)?;
            let back = graded_series_transform(&t, y.polarization(), Sign::Plus, r).map_err(fail)?;
            ensure(back == mu, || format!("{} instance {i}, r={r} (minus first): {mu} -> {back}", y.id()))?;
        }
    }
    Ok(format!("{RANDOM_INSTANCES} classes on each of {} catalog ambients, r ∈ [-8, 8]", ambients.len()))
}

/// A random context for operands of dimensions at most `dim Y`.
fn random_context<R: Rng>(rng: &mut R, y: &Ambient) -> ProductContext {
    let n = y.dim();
    let d1 = rng.gen_range(0..=n);
    let d2 = rng.gen_range(0..=n);
    let lo = (d1 as i64 + d2 as i64 - n as i64).max(0) as u32;
    let dim_v = rng.gen_range(lo..=d1.min(d2));
    ProductContext::new(y, d1, d2, dim_v).expect("valid context")
}

/// A random class with parts only in dimensions `lo..=hi`.
fn random_window_class<R: Rng>(rng: &mut R, y: &Arc<Ambient>, lo: u32, hi: u32) -> GCycleClass {
    let mut out = GCycleClass::zero(y);
    for l in lo..=hi {
        if rng.gen_bool(0.7) {
            out = out.try_add(&random_pure_class(rng, y, l, 3, 4)).expect("same ambient");
        }
    }
    out
}

fn criterion_round_trips(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for n in 1..=5 {
        let y = projective_with_flag(n).map_err(fail)?;
        for i in 0..RANDOM_INSTANCES {
            let ctx = random_context(&mut rng, &y);
            let lo = ctx.rho().max(0) as u32;
            let beta = random_window_class(&mut rng, &y, lo, ctx.dim_v);
            let delta = diamond_from_bullet(&beta, &ctx).map_err(fail)?;
            let back = bullet_from_diamond(&delta, &ctx).map_err(fail)?;
            ensure(back == beta, || format!("P{n} instance {i}: {beta} -> {delta} -> {back}"))?;
            let delta = if ctx.rho() <= 0 {
                random_window_class(&mut rng, &y, 0, ctx.dim_v)
            } else {
                delta
            };
            let beta = bullet_from_diamond(&delta, &ctx).map_err(fail)?;
            let back = diamond_from_bullet(&beta, &ctx).map_err(fail)?;
            ensure(back == delta, || format!("P{n} instance {i}: {delta} -> {beta} -> {back}"))?;
        }
    }
    let ambients = catalog_ambients();
    for y in &ambients {
        for i in 0..RANDOM_INSTANCES {
            let ctx = random_context(&mut rng, y);
            let delta = random_window_class(&mut rng, y, 0, ctx.dim_v);
            let beta = bullet_l_from_diamond(&delta, &ctx).map_err(fail)?;
            let back = diamond_from_bullet_l(&beta, &ctx).map_err(fail)?;
            ensure(back == delta, || format!("{} instance {i}: {delta} -> {beta} -> {back}", y.id()))?;
            let beta = random_window_class(&mut rng, y, 0, ctx.dim_v);
            let delta = diamond_from_bullet_l(&beta, &ctx).map_err(fail)?;
            let back = bullet_l_from_diamond(&delta, &ctx).map_err(fail)?;
            ensure(back == beta, || format!("{} instance {i}: {beta} -> {delta} -> {back}", y.id()))?;
        }
    }
    Ok(format!(
        "bullet/diamond on P1..P5 and bullet_L/diamond on {} catalog ambients, {RANDOM_INSTANCES} classes each way",
        ambients.len()
    ))
}

/// Both products for every operand pair of every suite scenario.
struct Instance {
    scenario: String,
    left: GCycleClass,
    right: GCycleClass,
    diamond: GCycleClass,
    bullet_l: GCycleClass,
}

fn suite_instances() -> Result<Vec<Instance>, String> {
    let mut out = Vec::new();
    for s in suite_scenarios().map_err(fail)? {
        for (a, b) in s.instance_pairs().map_err(fail)? {
            let diamond = s.engine.product(ProductKind::Diamond, &a, &b).map_err(fail)?;
            let bullet_l = s.engine.product(ProductKind::BulletL, &a, &b).map_err(fail)?;
            out.push(Instance {
                scenario: scenario_label(&s),
                left: a,
                right: b,
                diamond,
                bullet_l,
            });
        }
    }
    Ok(out)
}

fn criterion_bezout(_: u64) -> Result<String, String> {
    let mut axioms = 0;
    for s in suite_scenarios().map_err(fail)? {
        for ax in s.engine.axioms() {
            let v = validate_axiom(ax);
            ensure(v.is_accepted(), || format!("{}: axiom {} {} rejected: {v:?}", s.name, ax.left, ax.right))?;
            axioms += 1;
        }
    }
    let (mut checked_l, mut checked_pn) = (0, 0);
    for inst in suite_instances()? {
        let (Some(d1), Some(d2)) = (inst.left.pure_dim(), inst.right.pure_dim()) else {
            continue;
        };
        let y = inst.left.ambient();
        let ctx = ProductContext::infer(y, d1, d2, None, &inst.diamond).map_err(fail)?;
        let effective = inst.left.is_effective() && inst.right.is_effective();
        if effective {
            let r = bezout_bound_l(&inst.left, &inst.right, &inst.bullet_l, &ctx);
            ensure(r.holds && r.product_degree <= r.factor_product, || {
                format!(
                    "{}: deg_L({} •_L {}) = {} against {}",
                    inst.scenario, inst.left, inst.right, r.product_degree, r.factor_product
                )
            })?;
            ensure(inst.bullet_l.is_effective(), || {
                format!("{}: {} •_L {} = {} is not effective", inst.scenario, inst.left, inst.right, inst.bullet_l)
            })?;
            checked_l += 1;
        }
        if y.is_projective_space() && inst.bullet_l.is_effective() {
            let r = bezout_bound_pn(&inst.bullet_l, &inst.diamond, &ctx).map_err(fail)?;
            if let Some(shadow) = &r.expected_dim_degree {
                ensure(*shadow == r.bullet_degree, || {
                    format!(
                        "{}: deg({} ⋄ {})_ρ = {shadow} but deg(•) = {}",
                        inst.scenario, inst.left, inst.right, r.bullet_degree
                    )
                })?;
            }
            checked_pn += 1;
        }
    }
    Ok(format!(
        "{axioms} axioms admitted; deg_L bound on {checked_l} effective products; diamond/bullet estimate on {checked_pn} products in P^n"
    ))
}

fn criterion_multiplicities(_: u64) -> Result<String, String> {
    let mut checked = 0;
    for inst in suite_instances()? {
        let y = inst.left.ambient().clone();
        for p in y.points() {
            let md = inst.diamond.mult_at(p).map_err(fail)?;
            let mb = inst.bullet_l.mult_at(p).map_err(fail)?;
            ensure(same_multiplicities(&md, &mb), || {
                format!(
                    "{}: at {p}, mult({} ⋄ {}) = {md:?} but mult(•_L) = {mb:?}",
                    inst.scenario, inst.left, inst.right
                )
            })?;
            for product in [&inst.diamond, &inst.bullet_l] {
                let (_, moving) = product.fix_mov();
                let total = moving.total_mult_at(p).map_err(fail)?;
                let all_zero = moving.mult_at(p).map_err(fail)?.values().all(|v| *v == BigInt::from(0));
                ensure(all_zero, || format!("{}: moving part of {product} has multiplicity {total} at {p}", inst.scenario))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (product, point) pairs agree; moving parts have zero multiplicity"))
}

fn criterion_proper_case(_: u64) -> Result<String, String> {
    let s = Scenario::builtin("segre", &BTreeMap::new()).map_err(fail)?;
    let u = GCycleClass::unit(&s.ambient).map_err(fail)?;
    let cycle = s.engine.diamond(&u, &u).map_err(fail)?;
    let bullet = s.engine.bullet_l(&u, &u).map_err(fail)?;
    let (fixed, moving) = bullet.fix_mov();
    ensure(fixed == cycle, || format!("fixed part {fixed} differs from the intersection cycle {cycle}"))?;
    let rho = 2;
    ensure(moving.dims().iter().all(|l| *l < rho), || format!("moving part {moving} is not of lower dimension"))?;
    for p in s.ambient.points() {
        let mb = bullet.mult_at(p).map_err(fail)?;
        let mf = fixed.mult_at(p).map_err(fail)?;
        ensure(same_multiplicities(&mb, &mf), || format!("at {p}: {mb:?} vs {mf:?}"))?;
        ensure(moving.total_mult_at(p).map_err(fail)? == BigInt::from(0), || format!("moving multiplicity at {p}"))?;
    }
    Ok(format!("Y •_L Y = {fixed} + ({moving}); moving terms vanish at every marked point"))
}

fn criterion_pushforward(_: u64) -> Result<String, String> {
    let s = Scenario::builtin("segre", &BTreeMap::new()).map_err(fail)?;
    let y = &s.ambient;
    let u = GCycleClass::unit(y).map_err(fail)?;
    let emb = Embedding::segre(y.clone()).map_err(fail)?;
    let diamond = s.engine.diamond(&u, &u).map_err(fail)?;
    let report = pushforward_compat_check(&emb, &u, &u, &diamond).map_err(fail)?;
    let two_omega = y.polarization().scale(&BigInt::from(2));
    let expect = emb
        .pushforward(&u.try_add(&u.wedge(&two_omega).map_err(fail)?).map_err(fail)?)
        .map_err(fail)?;
    ensure(report.holds, || format!("sides differ: {} vs {}", report.left, report.right))?;
    ensure(report.left == expect, || format!("both sides {} but expected {expect}", report.left))?;
    let bullet = s.engine.bullet_l(&u, &u).map_err(fail)?;
    let pushed = emb.pushforward(&bullet).map_err(fail)?;
    ensure(pushed.deg_l() == bullet.deg_l(), || "degree changes under pushforward".into())?;
    Ok(format!("i_*Y ⋄ i_*Y = i_*(i^*c(N) ∧ Y ⋄ Y) = {}", report.left))
}
