//! Scenario files: an ambient with supports and points, named classes,
//! product axioms and expected values.
//!
//! Strings may contain `{...}` templates with integer arithmetic over the
//! scenario parameters, e.g. `"{m-1}*B"`. Templates are expanded before the
//! string is parsed.

use std::collections::BTreeMap;
use std::sync::Arc;

use gencyc_core::spaces::{make_biprojective, make_blowup_p2, make_projective};
use gencyc_core::{Ambient, AxiomKind, GCycleClass, Multiplicities, ProductAxiom, ProductEngine, SupportSpec};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::eval::{Evaluator, Value};
use crate::expr::{parse, Expr};

pub const SCHEMA: &str = "gencyc-scenario/1";

/// An integer given either as a JSON number or as a (possibly templated)
/// decimal string.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum IntLike {
    Number(i64),
    Text(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, i64>,
    pub ambient: AmbientDecl,
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub supports: Vec<SupportDecl>,
    #[serde(default)]
    pub classes: Vec<ClassDecl>,
    #[serde(default)]
    pub axioms: Vec<AxiomDecl>,
    #[serde(default)]
    pub expect: Vec<ExpectDecl>,
    #[serde(default)]
    pub pairs: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientDecl {
    pub kind: String,
    #[serde(default)]
    pub m: Option<IntLike>,
    #[serde(default)]
    pub n: Option<IntLike>,
    #[serde(default)]
    pub embed_dim: Option<IntLike>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportDecl {
    pub id: String,
    pub dim: IntLike,
    pub substitution: BTreeMap<String, IntLike>,
    #[serde(default)]
    pub degree: Option<IntLike>,
    #[serde(default)]
    pub contains: Vec<String>,
    #[serde(default)]
    pub inside: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDecl {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomDecl {
    pub kind: String,
    pub left: String,
    pub right: String,
    pub result: String,
    #[serde(default)]
    pub dim_v: Option<IntLike>,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectDecl {
    pub expr: String,
    #[serde(default)]
    pub class: Option<String>,
    #[serde(default)]
    pub integer: Option<IntLike>,
    #[serde(default)]
    pub mult: Option<MultDecl>,
    #[serde(default)]
    pub not_equal: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultDecl {
    pub point: String,
    pub values: BTreeMap<String, IntLike>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    Class(Expr),
    Integer(BigInt),
    Mult { point: String, values: Multiplicities },
    NotEqual(Expr),
}

#[derive(Debug, Clone)]
pub struct Expectation {
    pub expr: Expr,
    pub check: Check,
}

/// A loaded scenario. Everything is immutable after loading.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub parameters: BTreeMap<String, i64>,
    pub ambient: Arc<Ambient>,
    pub engine: ProductEngine,
    /// Named classes, resolved on use.
    pub classes: BTreeMap<String, Expr>,
    pub expectations: Vec<Expectation>,
    /// Operand pairs for the property checks, in addition to the axiom operands.
    pub pairs: Vec<(Expr, Expr)>,
}

const BUILTIN: &[(&str, &str)] = &[
    ("kokong", include_str!("../scenarios/kokong.json")),
    ("segre", include_str!("../scenarios/segre.json")),
    ("blowup", include_str!("../scenarios/blowup.json")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

impl Scenario {
    pub fn builtin(name: &str, overrides: &BTreeMap<String, i64>) -> Result<Scenario, CliError> {
        let src = builtin_source(name)
            .ok_or_else(|| CliError::Scenario(format!("no built-in scenario `{name}`")))?;
        Scenario::from_json(src, overrides)
    }

    pub fn from_json(text: &str, overrides: &BTreeMap<String, i64>) -> Result<Scenario, CliError> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| CliError::Scenario(format!("invalid scenario JSON: {e}")))?;
        Scenario::from_file(file, overrides)
    }

    pub fn from_file(file: ScenarioFile, overrides: &BTreeMap<String, i64>) -> Result<Scenario, CliError> {
        if file.schema != SCHEMA {
            return Err(CliError::Scenario(format!(
                "unsupported schema `{}`, expected `{SCHEMA}`",
                file.schema
            )));
        }
        let mut params = file.parameters.clone();
        for (k, v) in overrides {
            if !params.contains_key(k) {
                return Err(CliError::Scenario(format!("scenario has no parameter `{k}`")));
            }
            params.insert(k.clone(), *v);
        }
        let t = Templates { params: &params };

        let mut ambient = build_ambient(&file.ambient, &t)?;
        for p in &file.points {
            ambient.add_point(p).map_err(scenario_err)?;
        }
        for s in &file.supports {
            let subst = s
                .substitution
                .iter()
                .map(|(g, c)| Ok((g.as_str(), t.int(c)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let mut spec = SupportSpec::new(&s.id, t.u32(&s.dim)?, &subst);
            if let Some(d) = &s.degree {
                spec = spec.degree(t.int(d)?);
            }
            let contains: Vec<&str> = s.contains.iter().map(String::as_str).collect();
            let inside: Vec<&str> = s.inside.iter().map(String::as_str).collect();
            spec = spec.containing(&contains).inside(&inside);
            ambient.add_support(spec).map_err(scenario_err)?;
        }
        let ambient = ambient.freeze().map_err(scenario_err)?;

        let mut classes = BTreeMap::new();
        for c in &file.classes {
            if ambient.support(&c.name).is_ok() {
                return Err(CliError::Scenario(format!(
                    "class name `{}` clashes with a support or point",
                    c.name
                )));
            }
            if classes.insert(c.name.clone(), t.expr(&c.value)?).is_some() {
                return Err(CliError::Scenario(format!("duplicate class `{}`", c.name)));
            }
        }

        let mut scenario = Scenario {
            name: file.name.clone(),
            description: file.description.clone(),
            parameters: params.clone(),
            engine: ProductEngine::new(ambient.clone()),
            ambient,
            classes,
            expectations: Vec::new(),
            pairs: Vec::new(),
        };

        for a in &file.axioms {
            let kind = AxiomKind::parse(&a.kind)
                .ok_or_else(|| CliError::Scenario(format!("unknown axiom kind `{}`", a.kind)))?;
            let class = |s: &str| -> Result<GCycleClass, CliError> {
                let e = t.expr(s)?;
                Evaluator::new(&scenario).class(&e)
            };
            let mut ax = ProductAxiom::new(kind, class(&a.left)?, class(&a.right)?, class(&a.result)?)
                .with_note(&a.note);
            if let Some(d) = &a.dim_v {
                ax = ax.with_dim_v(t.u32(d)?);
            }
            scenario.engine.add_axiom(ax).map_err(|e| CliError::Scenario(e.to_string()))?;
        }

        for x in &file.expect {
            let expr = t.expr(&x.expr)?;
            let mut checks = Vec::new();
            if let Some(c) = &x.class {
                checks.push(Check::Class(t.expr(c)?));
            }
            if let Some(i) = &x.integer {
                checks.push(Check::Integer(BigInt::from(t.int(i)?)));
            }
            if let Some(m) = &x.mult {
                let values = m
                    .values
                    .iter()
                    .map(|(k, v)| {
                        let l = k
                            .parse::<u32>()
                            .map_err(|_| CliError::Scenario(format!("bad dimension key `{k}`")))?;
                        Ok((l, BigInt::from(t.int(v)?)))
                    })
                    .collect::<Result<Multiplicities, CliError>>()?;
                checks.push(Check::Mult {
                    point: m.point.clone(),
                    values,
                });
            }
            if let Some(c) = &x.not_equal {
                checks.push(Check::NotEqual(t.expr(c)?));
            }
            if checks.len() != 1 {
                return Err(CliError::Scenario(format!(
                    "expectation `{}` needs exactly one of class, integer, mult, not_equal",
                    x.expr
                )));
            }
            scenario.expectations.push(Expectation {
                expr,
                check: checks.pop().expect("one check"),
            });
        }
        for [a, b] in &file.pairs {
            scenario.pairs.push((t.expr(a)?, t.expr(b)?));
        }
        Ok(scenario)
    }

    /// Operand pairs for property checks: every axiom's operands and the
    /// declared pairs.
    pub fn instance_pairs(&self) -> Result<Vec<(GCycleClass, GCycleClass)>, CliError> {
        let mut out: Vec<(GCycleClass, GCycleClass)> = self
            .engine
            .axioms()
            .iter()
            .map(|a| (a.left.clone(), a.right.clone()))
            .collect();
        let ev = Evaluator::new(self);
        for (a, b) in &self.pairs {
            out.push((ev.class(a)?, ev.class(b)?));
        }
        Ok(out)
    }

    /// Evaluates every expectation; `Err` lists the failures.
    pub fn check_expectations(&self) -> Vec<(String, Result<(), String>)> {
        self.expectations
            .iter()
            .map(|x| (describe(x), self.check_one(x)))
            .collect()
    }

    fn check_one(&self, x: &Expectation) -> Result<(), String> {
        let ev = Evaluator::new(self);
        let got = ev.value(&x.expr).map_err(|e| e.to_string())?;
        match (&x.check, &got) {
            (Check::Class(e), Value::Class(c)) => {
                let want = ev.class(e).map_err(|e| e.to_string())?;
                (&want == c).then_some(()).ok_or(format!("got {c}, expected {want}"))
            }
            (Check::NotEqual(e), Value::Class(c)) => {
                let other = ev.class(e).map_err(|e| e.to_string())?;
                (&other != c).then_some(()).ok_or(format!("both sides are {c}"))
            }
            (Check::Integer(want), Value::Integer(n)) => {
                (want == n).then_some(()).ok_or(format!("got {n}, expected {want}"))
            }
            (Check::Mult { point, values }, Value::Class(c)) => {
                let got = c.mult_at(point).map_err(|e| e.to_string())?;
                gencyc_core::products::same_multiplicities(&got, values)
                    .then_some(())
                    .ok_or(format!("got {got:?}, expected {values:?}"))
            }
            (Check::Mult { .. }, Value::Mult { values, .. }) => Err(format!(
                "expected a class to take multiplicities of, got multiplicities {values:?}"
            )),
            (_, v) => Err(format!("value of the wrong type: {v}")),
        }
    }
}

fn describe(x: &Expectation) -> String {
    match &x.check {
        Check::Class(e) => format!("{} = {e}", x.expr),
        Check::NotEqual(e) => format!("{} != {e}", x.expr),
        Check::Integer(n) => format!("{} = {n}", x.expr),
        Check::Mult { point, values } => {
            let vals: Vec<String> = values.iter().map(|(l, v)| format!("{l}: {v}")).collect();
            format!("mult({}, {point}) = {{{}}}", x.expr, vals.join(", "))
        }
    }
}

fn scenario_err(e: gencyc_core::Error) -> CliError {
    CliError::Scenario(e.to_string())
}

fn build_ambient(decl: &AmbientDecl, t: &Templates) -> Result<Ambient, CliError> {
    let need = |x: &Option<IntLike>, what: &str| -> Result<u32, CliError> {
        match x {
            Some(v) => t.u32(v),
            None => Err(CliError::Scenario(format!(
                "ambient `{}` needs `{what}`",
                decl.kind
            ))),
        }
    };
    let mut y = match decl.kind.as_str() {
        "projective" => make_projective(need(&decl.n, "n")?),
        "biprojective" => make_biprojective(need(&decl.m, "m")?, need(&decl.n, "n")?),
        "blowup_p2" => make_blowup_p2(),
        other => return Err(CliError::Scenario(format!("unknown ambient kind `{other}`"))),
    }
    .map_err(scenario_err)?;
    if let Some(m) = &decl.embed_dim {
        y.set_embed_dim(t.u32(m)?).map_err(scenario_err)?;
    }
    Ok(y)
}

struct Templates<'a> {
    params: &'a BTreeMap<String, i64>,
}

impl Templates<'_> {
    fn expand(&self, s: &str) -> Result<String, CliError> {
        let mut out = String::new();
        let mut rest = s;
        while let Some(start) = rest.find('{') {
            out.push_str(&rest[..start]);
            let Some(len) = rest[start..].find('}') else {
                return Err(CliError::Scenario(format!("unterminated template in `{s}`")));
            };
            let inner = &rest[start + 1..start + len];
            out.push_str(&eval_template(inner, self.params)?.to_string());
            rest = &rest[start + len + 1..];
        }
        out.push_str(rest);
        Ok(out)
    }

    fn expr(&self, s: &str) -> Result<Expr, CliError> {
        let text = self.expand(s)?;
        parse(&text).map_err(|e| CliError::Parse {
            source_text: text.clone(),
            error: e,
        })
    }

    fn int(&self, v: &IntLike) -> Result<i64, CliError> {
        match v {
            IntLike::Number(n) => Ok(*n),
            IntLike::Text(s) => {
                let e = self.expand(s)?;
                e.trim()
                    .parse()
                    .map_err(|_| CliError::Scenario(format!("`{s}` is not an integer")))
            }
        }
    }

    fn u32(&self, v: &IntLike) -> Result<u32, CliError> {
        let n = self.int(v)?;
        u32::try_from(n).map_err(|_| CliError::Scenario(format!("{n} is not a nonnegative dimension")))
    }
}

/// Integer arithmetic with `+ - *`, parentheses and parameter names.
pub fn eval_template(text: &str, params: &BTreeMap<String, i64>) -> Result<i64, CliError> {
    let err = |m: String| CliError::Scenario(format!("template `{{{text}}}`: {m}"));
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;

    fn sum(c: &[char], pos: &mut usize, p: &BTreeMap<String, i64>) -> Result<i64, String> {
        let mut v = prod(c, pos, p)?;
        while *pos < c.len() && (c[*pos] == '+' || c[*pos] == '-') {
            let op = c[*pos];
            *pos += 1;
            let r = prod(c, pos, p)?;
            v = if op == '+' { v.checked_add(r) } else { v.checked_sub(r) }.ok_or("overflow")?;
        }
        Ok(v)
    }
    fn prod(c: &[char], pos: &mut usize, p: &BTreeMap<String, i64>) -> Result<i64, String> {
        let mut v = unary(c, pos, p)?;
        while *pos < c.len() && c[*pos] == '*' {
            *pos += 1;
            v = v.checked_mul(unary(c, pos, p)?).ok_or("overflow")?;
        }
        Ok(v)
    }
    fn unary(c: &[char], pos: &mut usize, p: &BTreeMap<String, i64>) -> Result<i64, String> {
        match c.get(*pos) {
            Some('-') => {
                *pos += 1;
                Ok(-unary(c, pos, p)?)
            }
            Some('(') => {
                *pos += 1;
                let v = sum(c, pos, p)?;
                if c.get(*pos) != Some(&')') {
                    return Err("expected `)`".into());
                }
                *pos += 1;
                Ok(v)
            }
            Some(d) if d.is_ascii_digit() => {
                let start = *pos;
                while *pos < c.len() && c[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let s: String = c[start..*pos].iter().collect();
                s.parse().map_err(|_| "integer too large".into())
            }
            Some(a) if a.is_ascii_alphabetic() || *a == '_' => {
                let start = *pos;
                while *pos < c.len() && (c[*pos].is_ascii_alphanumeric() || c[*pos] == '_') {
                    *pos += 1;
                }
                let s: String = c[start..*pos].iter().collect();
                p.get(&s).copied().ok_or(format!("unknown parameter `{s}`"))
            }
            Some(x) => Err(format!("unexpected `{x}`")),
            None => Err("unexpected end".into()),
        }
    }

    let v = sum(&chars, &mut pos, params).map_err(err)?;
    if pos != chars.len() {
        return Err(err(format!("unexpected `{}`", chars[pos])));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates() {
        let p = BTreeMap::from([("m".to_string(), 3)]);
        assert_eq!(eval_template("m-1", &p).unwrap(), 2);
        assert_eq!(eval_template("2*(m + 1) - -1", &p).unwrap(), 9);
        assert!(eval_template("k", &p).is_err());
        assert!(eval_template("m)", &p).is_err());
        let t = Templates { params: &p };
        assert_eq!(t.expand("{m-1}*B + {m}*a").unwrap(), "2*B + 3*a");
        assert!(t.expand("{m").is_err());
    }

    #[test]
    fn builtins_load() {
        for name in builtin_names() {
            let s = Scenario::builtin(name, &BTreeMap::new()).unwrap();
            assert!(!s.engine.axioms().is_empty(), "{name}");
        }
    }

    #[test]
    fn overrides_must_name_parameters() {
        let o = BTreeMap::from([("k".to_string(), 1)]);
        assert!(Scenario::builtin("kokong", &o).is_err());
    }
}
