use std::cell::RefCell;
use std::fmt;

use gencyc_core::{GCycleClass, Multiplicities, ProductKind, RingElement, TraceEntry};
use num_bigint::BigInt;

use crate::error::CliError;
use crate::expr::{Expr, Poly};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Class(GCycleClass),
    Integer(BigInt),
    Mult { point: String, values: Multiplicities },
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Class(_) => "class",
            Value::Integer(_) => "integer",
            Value::Mult { .. } => "multiplicities",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Class(c) => write!(f, "{c}"),
            Value::Integer(n) => write!(f, "{n}"),
            Value::Mult { values, .. } => {
                let parts: Vec<String> = values.iter().map(|(l, v)| format!("{l}: {v}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

/// Evaluates expressions against a scenario, collecting the derivation trace.
pub struct Evaluator<'a> {
    scenario: &'a Scenario,
    trace: RefCell<Vec<TraceEntry>>,
    stack: RefCell<Vec<String>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(scenario: &'a Scenario) -> Self {
        Evaluator {
            scenario,
            trace: RefCell::new(Vec::new()),
            stack: RefCell::new(Vec::new()),
        }
    }

    pub fn trace(&self) -> Vec<TraceEntry> {
        self.trace.borrow().clone()
    }

    pub fn class(&self, e: &Expr) -> Result<GCycleClass, CliError> {
        match self.value(e)? {
            Value::Class(c) => Ok(c),
            v => Err(CliError::Type(format!("`{e}` is {}, expected a class", v.type_name()))),
        }
    }

    pub fn value(&self, e: &Expr) -> Result<Value, CliError> {
        let ambient = &self.scenario.ambient;
        Ok(match e {
            Expr::Ref(name) => return self.lookup(name),
            Expr::Scale(k, x) => {
                let k = BigInt::from(k.clone());
                match self.value(x)? {
                    Value::Class(c) => Value::Class(c.scale(&k)),
                    Value::Integer(n) => Value::Integer(n * k),
                    v => return Err(CliError::Type(format!("cannot scale {}", v.type_name()))),
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let add = matches!(e, Expr::Add(..));
                match (self.value(a)?, self.value(b)?) {
                    (Value::Class(x), Value::Class(y)) => {
                        Value::Class(if add { x.try_add(&y)? } else { x.try_sub(&y)? })
                    }
                    (Value::Integer(x), Value::Integer(y)) => Value::Integer(if add { x + y } else { x - y }),
                    (x, y) => {
                        return Err(CliError::Type(format!(
                            "cannot combine {} and {} in `{e}`",
                            x.type_name(),
                            y.type_name()
                        )))
                    }
                }
            }
            Expr::Diamond(a, b) | Expr::BulletL(a, b) => {
                let kind = if matches!(e, Expr::Diamond(..)) {
                    ProductKind::Diamond
                } else {
                    ProductKind::BulletL
                };
                let (x, y) = (self.class(a)?, self.class(b)?);
                let (value, trace) = self.scenario.engine.product_traced(kind, &x, &y)?;
                self.trace.borrow_mut().extend(trace);
                Value::Class(value)
            }
            Expr::Wedge(p, x) => {
                let gamma = self.poly(p)?;
                Value::Class(self.class(x)?.wedge(&gamma)?)
            }
            Expr::DimPart(x, l) => Value::Class(self.class(x)?.dim_part(*l)),
            Expr::Deg(x) => Value::Integer(self.class(x)?.deg_l()),
            Expr::Mult(x, point) => {
                if !ambient.has_point(point) {
                    return Err(CliError::Eval(gencyc_core::Error::UnknownPoint(point.clone())));
                }
                Value::Mult {
                    point: point.clone(),
                    values: self.class(x)?.mult_at(point)?,
                }
            }
        })
    }

    fn lookup(&self, name: &str) -> Result<Value, CliError> {
        let ambient = &self.scenario.ambient;
        if let Some(def) = self.scenario.classes.get(name) {
            if self.stack.borrow().iter().any(|n| n == name) {
                return Err(CliError::Scenario(format!("class `{name}` is defined in terms of itself")));
            }
            self.stack.borrow_mut().push(name.to_string());
            let v = self.value(def);
            self.stack.borrow_mut().pop();
            return v;
        }
        if ambient.support(name).is_ok() {
            return Ok(Value::Class(GCycleClass::fundamental(ambient, name)?));
        }
        Err(CliError::UnknownName(name.to_string()))
    }

    pub fn poly(&self, p: &Poly) -> Result<RingElement, CliError> {
        let ambient = &self.scenario.ambient;
        let ring = ambient.ring();
        Ok(match p {
            Poly::Int(n) => RingElement::constant(ring, BigInt::from(n.clone())),
            Poly::Var(v) if v == "omega" => ambient.polarization().clone(),
            Poly::Var(v) => {
                RingElement::generator(ring, v).map_err(|_| CliError::UnknownName(v.clone()))?
            }
            Poly::Add(a, b) => self.poly(a)?.try_add(&self.poly(b)?)?,
            Poly::Sub(a, b) => self.poly(a)?.try_sub(&self.poly(b)?)?,
            Poly::Mul(a, b) => self.poly(a)?.try_mul(&self.poly(b)?)?,
            Poly::Neg(a) => -&self.poly(a)?,
            Poly::Pow(a, e) => self.poly(a)?.pow(*e as i64)?,
        })
    }
}

/// The value of `e` together with its derivation trace.
pub fn evaluate(e: &Expr, scenario: &Scenario) -> Result<(Value, Vec<TraceEntry>), CliError> {
    let ev = Evaluator::new(scenario);
    let v = ev.value(e)?;
    Ok((v, ev.trace()))
}
