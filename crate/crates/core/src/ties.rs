//! Triangular congruence systems ("ties") describing embedding images.
//!
//! A tie constrains one target coordinate by a linear form over coordinates
//! that come strictly earlier in a declared order:
//!
//!   target - sum_j coeff_j * coord_j  ~  0  (mod modulus).
//!
//! Moduli come in three flavours: a power t^k of t = 1 - zeta_{p^n} (checked
//! by t-adic valuation), a ring element of Z[zeta_m] (checked by exact
//! division and integrality), or a rational integer (checked coordinatewise).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cyclotomic::{CycElement, Valuation};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum TieModulus {
    /// t^k in Z_(p)[zeta_{p^n}].
    TPower(u64),
    /// A nonzero element of Z[zeta_m].
    Element(CycElement),
    /// A rational integer modulus.
    Integer(BigInt),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TieCoeff {
    Int(BigInt),
    Cyc(CycElement),
}

/// One congruence: target ≡ sum of (coefficient * coordinate) mod modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct Congruence {
    pub target: String,
    pub modulus: TieModulus,
    pub form: Vec<(String, TieCoeff)>,
}

/// A triangular list of congruences over named coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TieSystem {
    /// Declared coordinate order; forms may only reference coordinates
    /// strictly earlier than their target.
    pub order: Vec<String>,
    pub congruences: Vec<Congruence>,
}

/// A failed congruence, with both sides for inspection.
#[derive(Clone, Debug, PartialEq)]
pub struct TieViolation {
    pub index: usize,
    pub target: String,
    pub modulus: String,
    pub lhs: String,
    pub rhs: String,
}

impl TieSystem {
    /// Checks the triangularity invariant against the declared order.
    pub fn is_triangular(&self) -> bool {
        let pos: BTreeMap<&str, usize> = self
            .order
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        self.congruences.iter().all(|c| {
            let Some(&tp) = pos.get(c.target.as_str()) else {
                return false;
            };
            c.form.iter().all(|(name, _)| {
                pos.get(name.as_str()).is_some_and(|&np| np < tp)
            })
        })
    }

    /// Evaluates the system on a cyclotomic assignment. `p`, `n` give the
    /// ambient prime power for `TPower` moduli; element moduli are checked
    /// by exact division and integrality of the quotient.
    pub fn check_cyclotomic(
        &self,
        assignment: &BTreeMap<String, CycElement>,
        p: u64,
        n: u32,
    ) -> Result<Vec<TieViolation>, Error> {
        let mut violations = Vec::new();
        for (index, c) in self.congruences.iter().enumerate() {
            let target = assignment
                .get(&c.target)
                .ok_or_else(|| Error::BadInput(format!("missing coordinate {}", c.target)))?;
            let mut residual = target.clone();
            for (name, coeff) in &c.form {
                let coord = assignment
                    .get(name)
                    .ok_or_else(|| Error::BadInput(format!("missing coordinate {}", name)))?;
                let term = match coeff {
                    TieCoeff::Cyc(e) => e * coord,
                    TieCoeff::Int(k) => coord.scale(&crate::rational::Rat::from_integer(k.clone())),
                };
                residual = &residual - &term;
            }
            let ok = match &c.modulus {
                TieModulus::TPower(k) => {
                    let v = residual.t_valuation(p, n)?;
                    v >= Valuation::Finite(*k as i64)
                }
                TieModulus::Element(e) => {
                    let q = &residual * &e.inv()?;
                    q.is_integral()
                }
                TieModulus::Integer(_) => {
                    return Err(Error::BadInput(
                        "integer modulus in a cyclotomic tie system".into(),
                    ))
                }
            };
            if !ok {
                violations.push(TieViolation {
                    index,
                    target: c.target.clone(),
                    modulus: c.modulus.display(),
                    lhs: target.to_string(),
                    rhs: (&target.clone() - &residual).to_string(),
                });
            }
        }
        Ok(violations)
    }

    /// Evaluates the system on an integer assignment; all moduli must be
    /// integers.
    pub fn check_integer(
        &self,
        assignment: &BTreeMap<String, BigInt>,
    ) -> Result<Vec<TieViolation>, Error> {
        let mut violations = Vec::new();
        for (index, c) in self.congruences.iter().enumerate() {
            let target = assignment
                .get(&c.target)
                .ok_or_else(|| Error::BadInput(format!("missing coordinate {}", c.target)))?;
            let mut rhs = BigInt::zero();
            for (name, coeff) in &c.form {
                let coord = assignment
                    .get(name)
                    .ok_or_else(|| Error::BadInput(format!("missing coordinate {}", name)))?;
                match coeff {
                    TieCoeff::Int(k) => rhs += k * coord,
                    TieCoeff::Cyc(_) => {
                        return Err(Error::BadInput(
                            "cyclotomic coefficient in an integer tie system".into(),
                        ))
                    }
                }
            }
            let TieModulus::Integer(m) = &c.modulus else {
                return Err(Error::BadInput("non-integer modulus in an integer tie system".into()));
            };
            if !(target - &rhs).is_multiple_of(m) {
                violations.push(TieViolation {
                    index,
                    target: c.target.clone(),
                    modulus: m.to_string(),
                    lhs: target.mod_floor(m).to_string(),
                    rhs: rhs.mod_floor(m).to_string(),
                });
            }
        }
        Ok(violations)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "congruences": self.congruences.iter().map(|c| {
                let mut obj = serde_json::Map::new();
                obj.insert("target".into(), Value::String(c.target.clone()));
                match &c.modulus {
                    TieModulus::TPower(k) => {
                        obj.insert("modulus_valuation".into(), json!(k));
                    }
                    TieModulus::Element(e) => {
                        obj.insert("modulus_element".into(), e.to_json());
                    }
                    TieModulus::Integer(m) => {
                        obj.insert("modulus_integer".into(), Value::String(m.to_string()));
                    }
                }
                obj.insert("form".into(), Value::Array(c.form.iter().map(|(name, coeff)| {
                    let cj = match coeff {
                        TieCoeff::Int(k) => Value::String(k.to_string()),
                        TieCoeff::Cyc(e) => e.to_json(),
                    };
                    Value::Array(vec![Value::String(name.clone()), cj])
                }).collect()));
                Value::Object(obj)
            }).collect::<Vec<_>>(),
        })
    }

    /// Human-readable rendering, one congruence per line, grouping integer
    /// coefficients of equal magnitude like `9(x + y) + 3(z + w)`.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.congruences {
            out.push_str(&c.render_line());
            out.push('\n');
        }
        out
    }
}

impl TieModulus {
    fn display(&self) -> String {
        match self {
            TieModulus::TPower(k) => format!("t^{}", k),
            TieModulus::Element(e) => format!("({})", e),
            TieModulus::Integer(m) => m.to_string(),
        }
    }
}

impl Congruence {
    fn render_line(&self) -> String {
        let rhs = if self.form.is_empty() {
            "0".to_string()
        } else {
            match &self.modulus {
                TieModulus::Integer(_) => render_grouped_int_form(&self.form),
                _ => self
                    .form
                    .iter()
                    .map(|(name, coeff)| match coeff {
                        TieCoeff::Int(k) => format!("{}*{}", k, name),
                        TieCoeff::Cyc(e) => format!("({})*{}", e, name),
                    })
                    .collect::<Vec<_>>()
                    .join(" + "),
            }
        };
        format!("{} =_{} {}", self.target, self.modulus.display(), rhs)
    }
}

/// Groups integer-coefficient terms by |coefficient|, descending, rendering
/// e.g. `9(x_{3,8} + x_{3,17}) + 3(x_{2,2} + x_{2,5}) + (x_{1,0} + x_{1,1})`.
fn render_grouped_int_form(form: &[(String, TieCoeff)]) -> String {
    let mut groups: BTreeMap<BigInt, Vec<String>> = BTreeMap::new();
    for (name, coeff) in form {
        let TieCoeff::Int(k) = coeff else { unreachable!() };
        if k.is_zero() {
            continue;
        }
        let term = if k.is_negative() {
            format!("- {}", name)
        } else {
            format!("+ {}", name)
        };
        groups.entry(k.abs()).or_default().push(term);
    }
    let mut parts: Vec<String> = Vec::new();
    for (mag, terms) in groups.iter().rev() {
        let mut inner = terms.join(" ");
        if let Some(stripped) = inner.strip_prefix("+ ") {
            inner = stripped.to_string();
        }
        if mag.is_one() {
            if terms.len() == 1 && !inner.starts_with('-') {
                parts.push(inner);
            } else {
                parts.push(format!("({})", inner));
            }
        } else {
            parts.push(format!("{}({})", mag, inner));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
