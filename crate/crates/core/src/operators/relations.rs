//! The twenty fundamental relations (Groups I-IV): images of `t^n` and
//! `p_j t^n` under `U^(0)`/`U^(1)` for `n = -4..=0`, stored as data so the
//! verifier treats them as inputs rather than code.

use std::fmt;

use serde_json::{json, Value};

use crate::operators::{Context, OperatorError};
use crate::qseries::LaurentSeries;
use crate::tpoly::TPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    U0,
    U1,
}

impl OperatorKind {
    pub fn index(self) -> usize {
        match self {
            OperatorKind::U0 => 0,
            OperatorKind::U1 => 1,
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}", self.index())
    }
}

/// One relation `op{arg} = alpha(t) + partner * beta(t)`, where the argument
/// is `t^n` (optionally multiplied by the operator's own `p_j`) and the
/// partner function is `p_1` for `U^(0)` images and `p_0` for `U^(1)`
/// images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub group: u8,
    pub n: i64,
    pub op: OperatorKind,
    pub arg_has_p: bool,
    pub alpha: TPoly,
    pub beta: TPoly,
}

impl Relation {
    pub fn name(&self) -> String {
        let arg_p = if self.arg_has_p {
            match self.op {
                OperatorKind::U0 => "p0",
                OperatorKind::U1 => "p1",
            }
        } else {
            ""
        };
        let arg = match (arg_p.is_empty(), self.n) {
            (true, 0) => "1".to_string(),
            (true, n) => format!("t^{n}"),
            (false, 0) => arg_p.to_string(),
            (false, n) => format!("{arg_p} t^{n}"),
        };
        format!("{}{{{arg}}}", self.op)
    }

    pub fn group_label(&self) -> &'static str {
        match self.group {
            1 => "I",
            2 => "II",
            3 => "III",
            _ => "IV",
        }
    }
}

/// `(degree, coefficient, power-of-5)` triplets for both sides of each
/// relation; the coefficient of `t^degree` is `coefficient * 5^power`.
type Terms = &'static [(i64, i64, u32)];

#[rustfmt::skip]
const TABLE: [(u8, i64, Terms, Terms); 20] = [
    // Group I: U0{t^n}
    (1,  0, &[], &[(0, 1, 0)]),
    (1, -1, &[(0, 1, 0), (1, 1, 2)], &[(0, -1, 1)]),
    (1, -2, &[(0, -9, 0), (2, 1, 5)], &[(0, 9, 1)]),
    (1, -3, &[(0, 17, 1), (3, 1, 8)], &[(0, -17, 2)]),
    (1, -4, &[(0, -161, 1), (4, 1, 11)], &[(0, 161, 2)]),
    // Group II: U0{p0 t^n}
    (2,  0,
     &[(1, -63, 2), (2, -104, 5), (3, -189, 7), (4, -24, 10), (5, -1, 13)],
     &[(0, 1, 0), (1, -63, 2), (2, -104, 5), (3, -189, 7), (4, -24, 10), (5, -1, 13)]),
    (2, -1, &[(1, 1, 2)], &[(0, -6, 0)]),
    (2, -2, &[(0, -9, 0), (1, -1, 3), (2, 1, 5)], &[(0, 9, 1), (1, -1, 3)]),
    (2, -3, &[(0, 17, 1), (2, -1, 6), (3, 1, 8)], &[(0, -17, 2), (2, 1, 6)]),
    (2, -4, &[(0, -161, 1), (3, -1, 9), (4, 1, 11)], &[(0, 161, 2), (3, -1, 9)]),
    // Group III: U1{t^n}
    (3,  0, &[(0, 1, 0)], &[]),
    (3, -1, &[(0, -6, 0), (1, -1, 2)], &[]),
    (3, -2, &[(0, 54, 0), (2, -1, 5)], &[]),
    (3, -3, &[(0, -102, 1), (3, -1, 8)], &[]),
    (3, -4, &[(0, 966, 1), (4, -1, 11)], &[]),
    // Group IV: U1{p1 t^n}
    (4,  0,
     &[(1, 233, 2), (2, 1188, 4), (3, 317, 7), (4, 31, 10), (5, 1, 13)],
     &[(0, 2, 1), (1, 44, 3), (2, 14, 6), (3, 1, 9)]),
    (4, -1, &[(0, 13, 0), (1, 1, 2)], &[(0, 1, 1)]),
    (4, -2, &[(0, -66, 0), (1, -1, 4), (2, 1, 5)], &[(1, 1, 4)]),
    (4, -3, &[(0, 114, 1), (2, -1, 7), (3, 1, 8)], &[(2, 1, 7)]),
    (4, -4,
     &[(0, -1037, 1), (1, 82, 4), (2, 112, 6), (3, -7, 9), (4, -4, 11)],
     &[(-1, 1, 0), (0, -2, 3), (1, -44, 5), (2, -14, 8), (3, -4, 10)]),
];

/// The twenty built-in relations, Groups I through IV.
pub fn builtin_relations() -> Vec<Relation> {
    TABLE
        .iter()
        .map(|&(group, n, alpha, beta)| Relation {
            group,
            n,
            op: if group <= 2 {
                OperatorKind::U0
            } else {
                OperatorKind::U1
            },
            arg_has_p: group == 2 || group == 4,
            alpha: TPoly::from_pow5_terms(alpha),
            beta: TPoly::from_pow5_terms(beta),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: String,
    pub group: u8,
    pub n: i64,
    pub pass: bool,
    /// Highest exponent compared (exclusive); coefficients below this agree.
    pub window: i64,
    pub first_mismatch: Option<(i64, num_bigint::BigInt)>,
}

/// Reconstructs the right side of a relation as a series.
pub fn relation_rhs(ctx: &Context, rel: &Relation) -> Result<LaurentSeries, OperatorError> {
    use crate::operators::FunctionName;
    let t = ctx.series(FunctionName::T);
    let partner = match rel.op {
        OperatorKind::U0 => ctx.series(FunctionName::P1),
        OperatorKind::U1 => ctx.series(FunctionName::P0),
    };
    let mut rhs = rel.alpha.eval(t)?;
    if !rel.beta.is_zero() {
        rhs = rhs.add(&partner.mul(&rel.beta.eval(t)?));
    }
    Ok(rhs)
}

/// Checks one relation by exact coefficient comparison on the common
/// window.
pub fn verify_relation(ctx: &Context, rel: &Relation) -> Result<RelationCheck, OperatorError> {
    use crate::operators::FunctionName;
    let mut arg = ctx.t_pow(rel.n);
    if rel.arg_has_p {
        let own_p = match rel.op {
            OperatorKind::U0 => ctx.series(FunctionName::P0),
            OperatorKind::U1 => ctx.series(FunctionName::P1),
        };
        arg = arg.mul(own_p);
    }
    let lhs = match rel.op {
        OperatorKind::U0 => ctx.u0(&arg)?,
        OperatorKind::U1 => ctx.u1(&arg),
    };
    let rhs = relation_rhs(ctx, rel)?;
    let window = lhs.prec().min(rhs.prec());
    let first_mismatch = lhs.first_difference(&rhs);
    Ok(RelationCheck {
        name: rel.name(),
        group: rel.group,
        n: rel.n,
        pass: first_mismatch.is_none(),
        window,
        first_mismatch,
    })
}

/// Runs the whole table. Any mismatch is reported in the checks, not as an
/// error; errors are reserved for windows too small to compare at all.
pub fn verify_group_relations(
    ctx: &Context,
    relations: &[Relation],
) -> Result<Vec<RelationCheck>, OperatorError> {
    relations.iter().map(|r| verify_relation(ctx, r)).collect()
}

pub fn relations_to_json(relations: &[Relation]) -> Value {
    Value::Array(
        relations
            .iter()
            .map(|r| {
                json!({
                    "group": r.group,
                    "n": r.n,
                    "lhs": { "op": r.op.to_string(), "power": r.n },
                    "rhs": {
                        "const_poly": r.alpha.to_json(),
                        "p_poly": r.beta.to_json(),
                    },
                })
            })
            .collect(),
    )
}

pub fn relations_from_json(v: &Value) -> Result<Vec<Relation>, OperatorError> {
    let bad = |msg: &str| OperatorError::InvalidRelationTable(msg.to_string());
    let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
    let mut out = Vec::with_capacity(arr.len());
    for item in arr {
        let group = item["group"].as_u64().ok_or_else(|| bad("missing group"))? as u8;
        if !(1..=4).contains(&group) {
            return Err(bad("group must be 1..=4"));
        }
        let n = item["n"].as_i64().ok_or_else(|| bad("missing n"))?;
        let op = match item["lhs"]["op"].as_str() {
            Some("U0") => OperatorKind::U0,
            Some("U1") => OperatorKind::U1,
            _ => return Err(bad("lhs.op must be U0 or U1")),
        };
        let alpha = TPoly::from_json(&item["rhs"]["const_poly"])
            .ok_or_else(|| bad("bad const_poly"))?;
        let beta =
            TPoly::from_json(&item["rhs"]["p_poly"]).ok_or_else(|| bad("bad p_poly"))?;
        out.push(Relation {
            group,
            n,
            op,
            arg_has_p: group == 2 || group == 4,
            alpha,
            beta,
        });
    }
    Ok(out)
}
