//! Integer polynomials in the Hauptmodul-like function `t`, with occasional
//! negative powers (one of the fundamental relations carries a `t^-1`).
//!
//! These are the coefficient objects of the free modules `<1, p_j>` over
//! `Z[t]`: everything here is exact, finitely supported, and cheap.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::qseries::{LaurentSeries, SeriesError};

/// Finitely supported integer Laurent polynomial in `t`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, BigInt::from(c))
    }

    pub fn monomial(deg: i64, c: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        Self { coeffs }
    }

    /// Builds from `(degree, coefficient)` pairs, e.g. `&[(0, 1), (1, 25)]`.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(d, c) in terms {
            p.add_term(d, &BigInt::from(c));
        }
        p
    }

    /// Term with coefficient `c * 5^pow5` at `t^deg`; the relation tables and
    /// valuation ledgers are all written this way.
    pub fn from_pow5_terms(terms: &[(i64, i64, u32)]) -> Self {
        let mut p = Self::zero();
        for &(d, c, pow5) in terms {
            p.add_term(d, &(BigInt::from(c) * BigInt::from(5).pow(pow5)));
        }
        p
    }

    pub fn add_term(&mut self, deg: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(deg).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, deg: i64) -> BigInt {
        self.coeffs.get(&deg).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in rhs.iter() {
            out.add_term(d, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, c * k)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (d1, c1) in self.iter() {
            for (d2, c2) in rhs.iter() {
                out.add_term(d1 + d2, &(c1 * c2));
            }
        }
        out
    }

    /// Divides every coefficient exactly by `k`; `None` when any remainder
    /// is nonzero.
    pub fn divide_exact(&self, k: &BigInt) -> Option<Self> {
        assert!(!k.is_zero());
        let mut coeffs = BTreeMap::new();
        for (d, c) in self.iter() {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coeffs.insert(d, q);
        }
        Some(Self { coeffs })
    }

    /// Evaluates at a series value of `t`. Negative degrees invert `t`,
    /// which requires a unit leading coefficient.
    pub fn eval(&self, t: &LaurentSeries) -> Result<LaurentSeries, SeriesError> {
        if self.is_zero() {
            return Ok(LaurentSeries::zero(t.prec()));
        }
        let mut acc: Option<LaurentSeries> = None;
        let mut t_inv: Option<LaurentSeries> = None;
        for (d, c) in self.iter() {
            let pow = if d >= 0 {
                t.pow(d)?
            } else {
                let inv = match &t_inv {
                    Some(i) => i.clone(),
                    None => {
                        let i = t.invert()?;
                        t_inv = Some(i.clone());
                        i
                    }
                };
                inv.pow(-d)?
            };
            let term = pow.scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        Ok(acc.expect("nonzero polynomial"))
    }

    /// JSON form: `[[degree, "coefficient"], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.iter()
                .map(|(d, c)| serde_json::json!([d, c.to_string()]))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let mut p = Self::zero();
        for item in v.as_array()? {
            let pair = item.as_array()?;
            if pair.len() != 2 {
                return None;
            }
            let deg = pair[0].as_i64()?;
            let c: BigInt = pair[1].as_str()?.parse().ok()?;
            p.add_term(deg, &c);
        }
        Some(p)
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.iter() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match d {
                0 => write!(f, "{mag}")?,
                1 if mag == BigInt::from(1) => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                _ if mag == BigInt::from(1) => write!(f, "t^{d}")?,
                _ => write!(f, "{mag}*t^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::LaurentSeries;

    #[test]
    fn arithmetic_and_exact_division() {
        let a = TPoly::from_terms(&[(0, 1), (1, 25)]);
        let b = TPoly::from_terms(&[(1, -25), (2, 5)]);
        let sum = a.add(&b);
        assert_eq!(sum.coeff(1), BigInt::zero());
        assert_eq!(sum.coeff(2), BigInt::from(5));

        let prod = a.mul(&b);
        assert_eq!(prod.coeff(1), BigInt::from(-25));
        assert_eq!(prod.coeff(3), BigInt::from(125));

        assert_eq!(
            b.divide_exact(&BigInt::from(5)),
            Some(TPoly::from_terms(&[(1, -5), (2, 1)]))
        );
        assert_eq!(a.divide_exact(&BigInt::from(5)), None);
    }

    #[test]
    fn pow5_terms_constructor() {
        // -6*5*t - 5^3*t^2
        let p = TPoly::from_pow5_terms(&[(1, -6, 1), (2, -1, 3)]);
        assert_eq!(p.coeff(1), BigInt::from(-30));
        assert_eq!(p.coeff(2), BigInt::from(-125));
    }

    #[test]
    fn eval_with_negative_degrees() {
        let t = LaurentSeries::from_terms(&[(1, 1), (2, 3)], 12);
        let p = TPoly::from_terms(&[(-1, 2), (1, 1)]);
        let v = p.eval(&t).unwrap();
        // 2/t = 2 q^-1 (1 + 3q)^-1 = 2q^-1 - 6 + 18q - ...; plus t
        assert_eq!(v.coeff(-1).unwrap(), BigInt::from(2));
        assert_eq!(v.coeff(0).unwrap(), BigInt::from(-6));
        assert_eq!(v.coeff(1).unwrap(), BigInt::from(18 + 1));
    }

    #[test]
    fn json_roundtrip() {
        let p = TPoly::from_pow5_terms(&[(-1, 1, 0), (3, -4, 10)]);
        let back = TPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }
}
