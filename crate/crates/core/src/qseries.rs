//! Exact truncated Laurent series in `q` with arbitrary-precision integer
//! coefficients.
//!
//! Every identity in this crate is checked coefficient-by-coefficient on a
//! finite window, so the series type tracks its own precision: a
//! [`LaurentSeries`] stores coefficients for exponents in `[min_exp, prec)`
//! and refuses to report anything at or above `prec`. Precision propagates
//! pessimistically through arithmetic; reading past the window is an error,
//! never a silent zero.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Default working truncation depth.
pub const DEFAULT_DEPTH: usize = 250;

/// A positive truncation depth for series constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    depth: usize,
}

impl Precision {
    /// `depth` is the number of coefficients guaranteed from the natural
    /// starting exponent of whatever gets built. Must be at least 1.
    pub fn new(depth: usize) -> Self {
        assert!(depth >= 1, "precision depth must be at least 1");
        Self { depth }
    }

    pub fn depth(self) -> usize {
        self.depth
    }

    pub fn as_i64(self) -> i64 {
        self.depth as i64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(DEFAULT_DEPTH)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("leading coefficient {0} is not a unit in Z; cannot invert")]
    NonUnitLeadingCoefficient(BigInt),
    #[error("coefficient of q^{exp} requested, but the series is only known below q^{prec}")]
    PrecisionExceeded { exp: i64, prec: i64 },
    #[error("window ends at q^{have}, need coefficients below q^{need}")]
    InsufficientPrecision { need: i64, have: i64 },
}

/// Truncated Laurent expansion: coefficients are exact integers, valid for
/// exponents `min_exp <= e < prec`, zero-filled between stored entries.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    min_exp: i64,
    prec: i64,
    /// `coeffs[i]` is the coefficient of `q^(min_exp + i)`;
    /// `coeffs.len() == prec - min_exp`.
    coeffs: Vec<BigInt>,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

impl LaurentSeries {
    fn normalized(min_exp: i64, prec: i64, mut coeffs: Vec<BigInt>) -> Self {
        assert!(min_exp < prec, "empty series window [{min_exp}, {prec})");
        assert_eq!(coeffs.len(), (prec - min_exp) as usize);
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        // Keep one slot so the window stays nonempty for the zero series.
        let strip = lead.min(coeffs.len() - 1);
        if strip > 0 {
            coeffs.drain(..strip);
        }
        Self {
            min_exp: min_exp + strip as i64,
            prec,
            coeffs,
        }
    }

    /// The zero series on the (minimal) window below `prec`.
    pub fn zero(prec: i64) -> Self {
        Self {
            min_exp: prec - 1,
            prec,
            coeffs: vec![BigInt::zero()],
        }
    }

    /// The constant series 1 on `[0, prec)`.
    pub fn one(prec: i64) -> Self {
        Self::monomial(BigInt::one(), 0, prec)
    }

    /// `c * q^exp`, valid on `[exp, prec)`.
    pub fn monomial(c: BigInt, exp: i64, prec: i64) -> Self {
        assert!(exp < prec);
        let mut coeffs = vec![BigInt::zero(); (prec - exp) as usize];
        coeffs[0] = c;
        Self::normalized(exp, prec, coeffs)
    }

    /// Builds a series from explicit `(exponent, coefficient)` terms.
    pub fn from_terms(terms: &[(i64, i64)], prec: i64) -> Self {
        let min_exp = terms.iter().map(|&(e, _)| e).min().unwrap_or(0).min(0);
        assert!(min_exp < prec);
        let mut coeffs = vec![BigInt::zero(); (prec - min_exp) as usize];
        for &(e, c) in terms {
            assert!(e < prec, "term q^{e} is at or above the precision {prec}");
            coeffs[(e - min_exp) as usize] += c;
        }
        Self::normalized(min_exp, prec, coeffs)
    }

    pub fn from_bigint_terms(terms: &[(i64, BigInt)], prec: i64) -> Self {
        let min_exp = terms.iter().map(|&(e, _)| e).min().unwrap_or(0).min(0);
        assert!(min_exp < prec);
        let mut coeffs = vec![BigInt::zero(); (prec - min_exp) as usize];
        for (e, c) in terms {
            assert!(*e < prec);
            coeffs[(e - min_exp) as usize] += c;
        }
        Self::normalized(min_exp, prec, coeffs)
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Exclusive upper bound of valid exponents.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// True when every coefficient on the window vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest exponent with a nonzero coefficient, with that coefficient.
    pub fn leading(&self) -> Option<(i64, &BigInt)> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| (self.min_exp + i as i64, &self.coeffs[i]))
    }

    /// Coefficient of `q^exp`. Exponents below the window are genuinely zero;
    /// exponents at or past `prec` are unknown and refused.
    pub fn coeff(&self, exp: i64) -> Result<BigInt, SeriesError> {
        if exp >= self.prec {
            return Err(SeriesError::PrecisionExceeded {
                exp,
                prec: self.prec,
            });
        }
        if exp < self.min_exp {
            return Ok(BigInt::zero());
        }
        Ok(self.coeffs[(exp - self.min_exp) as usize].clone())
    }

    /// Nonzero stored terms in increasing exponent order.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Requires the window to reach at least `need`; errors otherwise.
    pub fn require_prec(&self, need: i64) -> Result<(), SeriesError> {
        if self.prec < need {
            Err(SeriesError::InsufficientPrecision {
                need,
                have: self.prec,
            })
        } else {
            Ok(())
        }
    }

    /// Restricts the window to exponents below `prec` (never extends).
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.min_exp {
            return Self::zero(prec);
        }
        let coeffs = self.coeffs[..(prec - self.min_exp) as usize].to_vec();
        Self::normalized(self.min_exp, prec, coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        Self::normalized(self.min_exp, self.prec, coeffs)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.prec);
        }
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        Self::normalized(self.min_exp, self.prec, coeffs)
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }

    /// Coefficientwise sum; the result is valid below `min(prec, rhs.prec)`.
    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let min_exp = self.min_exp.min(rhs.min_exp).min(prec - 1);
        let mut coeffs = vec![BigInt::zero(); (prec - min_exp) as usize];
        for (f, base) in [(self, self.min_exp), (rhs, rhs.min_exp)] {
            for (i, c) in f.coeffs.iter().enumerate() {
                let e = base + i as i64;
                if e < prec && !c.is_zero() {
                    coeffs[(e - min_exp) as usize] += c;
                }
            }
        }
        Self::normalized(min_exp, prec, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Multiplies by `q^d`.
    pub fn shift(&self, d: i64) -> Self {
        Self {
            min_exp: self.min_exp + d,
            prec: self.prec + d,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Cauchy product. Result window: `min_exp` sums, and the precision is
    /// `min(self.prec + rhs.min_exp, rhs.prec + self.min_exp)` -- the point
    /// where unknown tails of either factor could first contribute.
    pub fn mul(&self, rhs: &Self) -> Self {
        let min_exp = self.min_exp + rhs.min_exp;
        let prec = (self.prec + rhs.min_exp).min(rhs.prec + self.min_exp);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(prec);
        }
        let out_len = (prec - min_exp) as usize;
        let mut coeffs = vec![BigInt::zero(); out_len];
        // Drive the convolution from the factor with fewer nonzero terms.
        let (outer, inner) = {
            let na = self.coeffs.iter().filter(|c| !c.is_zero()).count();
            let nb = rhs.coeffs.iter().filter(|c| !c.is_zero()).count();
            if na <= nb {
                (self, rhs)
            } else {
                (rhs, self)
            }
        };
        for (i, a) in outer.coeffs.iter().enumerate() {
            if a.is_zero() || i >= out_len {
                continue;
            }
            let jmax = inner.coeffs.len().min(out_len - i);
            for (j, b) in inner.coeffs[..jmax].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::normalized(min_exp, prec, coeffs)
    }

    /// Multiplicative inverse. Only unit leading coefficients (+1/-1) keep
    /// everything over the integers, so anything else is refused.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let (lead_exp, lead) = self
            .leading()
            .ok_or_else(|| SeriesError::NonUnitLeadingCoefficient(BigInt::zero()))?;
        if !(lead.is_one() || (-lead).is_one()) {
            return Err(SeriesError::NonUnitLeadingCoefficient(lead.clone()));
        }
        let lead = lead.clone();
        // Relative coefficients a_0.. of self starting at lead_exp; the
        // inverse has the same relative window length.
        let offset = (lead_exp - self.min_exp) as usize;
        let rel = &self.coeffs[offset..];
        let len = rel.len();
        let nonzero: Vec<usize> = (1..len).filter(|&k| !rel[k].is_zero()).collect();
        let mut out = vec![BigInt::zero(); len];
        out[0] = lead.clone(); // 1/(+-1) = +-1
        for n in 1..len {
            let mut acc = BigInt::zero();
            for &k in &nonzero {
                if k > n {
                    break;
                }
                acc += &rel[k] * &out[n - k];
            }
            if !acc.is_zero() {
                out[n] = -(&lead * acc);
            }
        }
        Ok(Self::normalized(-lead_exp, -lead_exp + len as i64, out))
    }

    /// Integer power by repeated squaring; negative powers invert first.
    /// The relative window length of `self` is preserved.
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        let rel_len = self.prec - self.min_exp;
        if k == 0 {
            return Ok(Self::one(rel_len));
        }
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(r) => r.mul(&sq),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc.expect("k != 0"))
    }

    /// Substitutes `q -> q^k`: every exponent scales by `k`, and so does the
    /// precision (the interleaving coefficients are known zeros).
    pub fn substitute_qk(&self, k: u32) -> Self {
        assert!(k >= 1, "substitution step must be positive");
        if k == 1 {
            return self.clone();
        }
        let k = k as i64;
        let min_exp = self.min_exp * k;
        let prec = self.prec * k;
        let mut coeffs = vec![BigInt::zero(); (prec - min_exp) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * k as usize] = c.clone();
            }
        }
        Self::normalized(min_exp, prec, coeffs)
    }

    /// The operator extracting every fifth coefficient:
    /// the coefficient of `q^m` in the output is the coefficient of `q^{5m}`
    /// in the input. Works on negative exponents too.
    pub fn u5(&self) -> Self {
        let min_exp = ceil_div(self.min_exp, 5);
        let prec = ceil_div(self.prec, 5);
        if min_exp >= prec {
            // No multiple of 5 lies in the window; everything known is zero.
            return Self::zero(prec);
        }
        let mut coeffs = vec![BigInt::zero(); (prec - min_exp) as usize];
        for (e, c) in self.iter_nonzero() {
            if e.rem_euclid(5) == 0 {
                coeffs[(e / 5 - min_exp) as usize] = c.clone();
            }
        }
        Self::normalized(min_exp, prec, coeffs)
    }

    /// Divides every coefficient exactly by `k`; `None` when any remainder
    /// is nonzero.
    pub fn divide_exact(&self, k: &BigInt) -> Option<Self> {
        assert!(!k.is_zero());
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = num_integer::Integer::div_rem(c, k);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(Self::normalized(self.min_exp, self.prec, coeffs))
    }

    /// Minimum 5-adic valuation over the window; `None` means the window is
    /// zero (valuation +infinity).
    pub fn valuation5(&self) -> Option<u64> {
        let five = BigInt::from(5);
        self.iter_nonzero()
            .map(|(_, c)| {
                let mut v = 0u64;
                let mut x = c.abs();
                while (&x % &five).is_zero() {
                    x /= &five;
                    v += 1;
                }
                v
            })
            .min()
    }

    /// True when both series agree at every exponent below the smaller
    /// precision.
    pub fn agrees_with(&self, rhs: &Self) -> bool {
        self.sub(rhs).is_zero()
    }

    /// First exponent (below the common precision) where the two differ.
    pub fn first_difference(&self, rhs: &Self) -> Option<(i64, BigInt)> {
        let d = self.sub(rhs);
        d.leading().map(|(e, c)| (e, c.clone()))
    }

    /// JSON form used in reports: `[[exponent, "coefficient"], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.iter_nonzero()
                .map(|(e, c)| serde_json::json!([e, c.to_string()]))
                .collect(),
        )
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (e, c) in self.iter_nonzero().take(12) {
            if wrote {
                if c.is_negative() {
                    write!(f, " - {}", term(&-c, e))?;
                } else {
                    write!(f, " + {}", term(c, e))?;
                }
            } else {
                if c.is_negative() {
                    write!(f, "-{}", term(&-c, e))?;
                } else {
                    write!(f, "{}", term(c, e))?;
                }
                wrote = true;
            }
        }
        if self.iter_nonzero().count() > 12 {
            write!(f, " + ...")?;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec)
    }
}

fn term(c: &BigInt, e: i64) -> String {
    match (e, c.is_one()) {
        (0, _) => format!("{c}"),
        (1, true) => "q".into(),
        (1, false) => format!("{c}*q"),
        (_, true) => format!("q^{e}"),
        (_, false) => format!("{c}*q^{e}"),
    }
}

/// Expansion of `prod_{n>=1} (1 - q^{delta n})^r` to the requested depth.
///
/// The base product is expanded by the pentagonal number theorem
/// (exponents `delta * k(3k-1)/2`, sign `(-1)^k`), then raised to the power
/// `r` by repeated squaring. A literal product expansion is kept in the test
/// suite as an independent oracle.
pub fn euler_product(r: i64, delta: u32, prec: Precision) -> LaurentSeries {
    let base = pentagonal_series(delta, prec);
    if r == 0 {
        return LaurentSeries::one(prec.as_i64());
    }
    base.pow(r).expect("leading coefficient is 1")
}

/// `(q^delta; q^delta)_inf` by the pentagonal number theorem.
pub fn pentagonal_series(delta: u32, prec: Precision) -> LaurentSeries {
    assert!(delta >= 1);
    let depth = prec.as_i64();
    let d = delta as i64;
    let mut terms: Vec<(i64, i64)> = vec![(0, 1)];
    for k in 1i64.. {
        let g1 = d * k * (3 * k - 1) / 2;
        let g2 = d * k * (3 * k + 1) / 2;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let mut hit = false;
        if g1 < depth {
            terms.push((g1, sign));
            hit = true;
        }
        if g2 < depth {
            terms.push((g2, sign));
            hit = true;
        }
        if !hit {
            break;
        }
    }
    LaurentSeries::from_terms(&terms, depth)
}

/// `sum_{r>=1} q^{r^2}`, truncated.
pub fn theta_onesided(prec: Precision) -> LaurentSeries {
    let depth = prec.as_i64();
    let mut terms = Vec::new();
    let mut r = 1i64;
    while r * r < depth {
        terms.push((r * r, 1));
        r += 1;
    }
    LaurentSeries::from_terms(&terms, depth)
}

/// `sum_{r in Z} q^{r^2}`, truncated.
pub fn theta_full(prec: Precision) -> LaurentSeries {
    let depth = prec.as_i64();
    let mut terms = vec![(0, 1)];
    let mut r = 1i64;
    while r * r < depth {
        terms.push((r * r, 2));
        r += 1;
    }
    LaurentSeries::from_terms(&terms, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(terms: &[(i64, i64)], prec: i64) -> LaurentSeries {
        LaurentSeries::from_terms(terms, prec)
    }

    /// Literal truncated product of (1 - q^{delta n}) factors; the oracle for
    /// the pentagonal expansion.
    fn naive_euler_base(delta: u32, depth: i64) -> LaurentSeries {
        let mut acc = LaurentSeries::one(depth);
        let mut n = delta as i64;
        while n < depth {
            acc = acc.mul(&s(&[(0, 1), (n, -1)], depth));
            n += delta as i64;
        }
        acc
    }

    /// Counts partitions into parts with `colors` colors by direct DP; the
    /// oracle for euler_product(-colors, 1).
    fn colored_partition_counts(colors: u64, depth: usize) -> Vec<BigInt> {
        let mut table = vec![BigInt::zero(); depth];
        table[0] = BigInt::one();
        for part in 1..depth {
            for _ in 0..colors {
                for m in part..depth {
                    let add = table[m - part].clone();
                    table[m] += add;
                }
            }
        }
        table
    }

    #[test]
    fn add_cancellation_and_renormalization() {
        let f = s(&[(1, 1), (2, 1)], 10);
        let g = s(&[(1, -1)], 10);
        let sum = f.add(&g);
        assert_eq!(sum, s(&[(2, 1)], 10));
        assert_eq!(sum.min_exp(), 2);

        let h = s(&[(0, 1), (1, 6)], 10).add(&s(&[(0, -1)], 10));
        assert_eq!(h.min_exp(), 1);
        assert_eq!(h.coeff(1).unwrap(), BigInt::from(6));

        let f = s(&[(0, 3), (4, -2)], 9);
        assert_eq!(f.add(&LaurentSeries::zero(9)), f);
    }

    #[test]
    fn mul_examples() {
        let geom: Vec<(i64, i64)> = (0..20).map(|e| (e, 1)).collect();
        let prod = s(&[(0, 1), (1, -1)], 20).mul(&s(&geom, 20));
        assert!(prod.agrees_with(&LaurentSeries::one(20)));

        let l = LaurentSeries::monomial(BigInt::one(), -5, 5);
        let r = LaurentSeries::monomial(BigInt::one(), 5, 15);
        let p = l.mul(&r);
        assert_eq!(p.coeff(0).unwrap(), BigInt::one());
        assert_eq!(p.min_exp(), 0);

        let sq = s(&[(0, 1), (1, 1)], 10).mul(&s(&[(0, 1), (1, 1)], 10));
        assert_eq!(sq, s(&[(0, 1), (1, 2), (2, 1)], 10));
    }

    #[test]
    fn invert_roundtrips_and_rejects_nonunits() {
        let f = s(&[(0, 1), (1, -1)], 12);
        let inv = f.invert().unwrap();
        for e in 0..12 {
            assert_eq!(inv.coeff(e).unwrap(), BigInt::one());
        }

        // Laurent leading exponent negates.
        let g = s(&[(-5, 1), (-4, 3), (0, 2)], 10);
        let ginv = g.invert().unwrap();
        assert_eq!(ginv.min_exp(), 5);
        assert!(g.mul(&ginv).agrees_with(&LaurentSeries::one(1)));

        match s(&[(0, 2), (1, 1)], 8).invert() {
            Err(SeriesError::NonUnitLeadingCoefficient(c)) => assert_eq!(c, BigInt::from(2)),
            other => panic!("expected NonUnitLeadingCoefficient, got {other:?}"),
        }
    }

    #[test]
    fn pow_examples() {
        let f = s(&[(0, 1), (1, 1)], 10);
        assert_eq!(f.pow(2).unwrap(), s(&[(0, 1), (1, 2), (2, 1)], 10));
        assert!(f.pow(0).unwrap().agrees_with(&LaurentSeries::one(10)));
        let inv = s(&[(0, 1), (1, -1)], 10).pow(-1).unwrap();
        assert_eq!(inv.coeff(7).unwrap(), BigInt::one());
    }

    #[test]
    fn substitution_scales_exponents_and_precision() {
        let f = s(&[(1, 1), (3, 1)], 5);
        let g = f.substitute_qk(5);
        assert_eq!(g.prec(), 25);
        assert_eq!(g.coeff(5).unwrap(), BigInt::one());
        assert_eq!(g.coeff(15).unwrap(), BigInt::one());
        assert_eq!(g.coeff(10).unwrap(), BigInt::zero());

        assert_eq!(f.substitute_qk(1), f);

        let h = LaurentSeries::monomial(BigInt::one(), -1, 3).substitute_qk(4);
        assert_eq!(h.min_exp(), -4);
        assert_eq!(h.coeff(-4).unwrap(), BigInt::one());
    }

    #[test]
    fn u5_extraction() {
        let f = s(&[(5, 1), (6, 1), (10, 1)], 12);
        let u = f.u5();
        assert_eq!(u.coeff(1).unwrap(), BigInt::one());
        assert_eq!(u.coeff(2).unwrap(), BigInt::one());
        assert!(u.coeff(3).is_err()); // prec = ceil(12/5) = 3

        assert!(LaurentSeries::one(10).u5().agrees_with(&LaurentSeries::one(2)));

        let g = s(&[(-10, 1), (-1, 1)], 3);
        let ug = g.u5();
        assert_eq!(ug.coeff(-2).unwrap(), BigInt::one());
        assert_eq!(ug.coeff(-1).unwrap(), BigInt::zero());
        assert_eq!(ug.coeff(0).unwrap(), BigInt::zero());
    }

    #[test]
    fn valuation5_examples() {
        assert_eq!(s(&[(1, 25), (2, 125)], 5).valuation5(), Some(2));
        assert_eq!(LaurentSeries::zero(5).valuation5(), None);
        assert_eq!(s(&[(1, 5), (2, 3)], 5).valuation5(), Some(0));
    }

    #[test]
    fn coeff_rejects_reads_past_precision() {
        let f = s(&[(0, 1)], 5);
        assert!(matches!(
            f.coeff(5),
            Err(SeriesError::PrecisionExceeded { exp: 5, prec: 5 })
        ));
        assert_eq!(f.coeff(-3).unwrap(), BigInt::zero());
    }

    #[test]
    fn euler_product_matches_pentagonal_and_colored_oracles() {
        let p = Precision::new(40);
        let one_one = euler_product(1, 1, p);
        assert!(one_one.agrees_with(&naive_euler_base(1, 40)));
        assert_eq!(
            one_one.truncate(13),
            s(&[(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)], 13)
        );

        let six = euler_product(-6, 1, p);
        let oracle = colored_partition_counts(6, 40);
        for (m, want) in oracle.iter().enumerate() {
            assert_eq!(&six.coeff(m as i64).unwrap(), want, "mismatch at q^{m}");
        }
        assert_eq!(six.coeff(1).unwrap(), BigInt::from(6));
        assert_eq!(six.coeff(2).unwrap(), BigInt::from(27));
        assert_eq!(six.coeff(3).unwrap(), BigInt::from(98));
        assert_eq!(six.coeff(4).unwrap(), BigInt::from(315));

        for delta in [2u32, 4] {
            assert!(euler_product(3, delta, Precision::new(30))
                .agrees_with(&naive_euler_base(delta, 30).pow(3).unwrap()));
        }

        assert!(euler_product(0, 7, p).agrees_with(&LaurentSeries::one(40)));
    }

    #[test]
    fn theta_series() {
        let p = Precision::new(30);
        let one = theta_onesided(p);
        assert_eq!(one.truncate(17), s(&[(1, 1), (4, 1), (9, 1), (16, 1)], 17));
        let full = theta_full(p);
        assert_eq!(full.coeff(0).unwrap(), BigInt::one());
        assert_eq!(full.coeff(4).unwrap(), BigInt::from(2));
        // full - 2*onesided = 1
        assert!(full.sub(&one.scale_i64(2)).agrees_with(&LaurentSeries::one(30)));
    }

    #[test]
    fn display_is_readable() {
        let f = s(&[(-2, 1), (0, -3), (1, 1)], 4);
        assert_eq!(format!("{f}"), "q^-2 - 3 + q + O(q^4)");
    }

    prop_compose! {
        fn arb_series()(
            min_exp in -8i64..8,
            len in 1usize..24,
            coeffs in prop::collection::vec(-30i64..30, 24),
        ) -> LaurentSeries {
            let prec = min_exp + len as i64;
            let terms: Vec<(i64, i64)> = coeffs[..len]
                .iter()
                .enumerate()
                .map(|(i, &c)| (min_exp + i as i64, c))
                .collect();
            LaurentSeries::from_terms(&terms, prec)
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_series(), g in arb_series(), h in arb_series()) {
            prop_assert!(f.add(&g).agrees_with(&g.add(&f)));
            prop_assert!(f.mul(&g).agrees_with(&g.mul(&f)));
            prop_assert!(f.add(&g).add(&h).agrees_with(&f.add(&g.add(&h))));
            prop_assert!(f.mul(&g).mul(&h).agrees_with(&f.mul(&g.mul(&h))));
            prop_assert!(f.mul(&g.add(&h)).agrees_with(&f.mul(&g).add(&f.mul(&h))));
        }

        #[test]
        fn invert_roundtrip(f in arb_series(), lead in prop_oneof![Just(1i64), Just(-1)]) {
            // Force a unit leading coefficient one exponent below the window.
            let unit = LaurentSeries::monomial(BigInt::from(lead), f.min_exp() - 1, f.prec());
            let g = unit.add(&f);
            let inv = g.invert().unwrap();
            prop_assert!(g.mul(&inv).agrees_with(&LaurentSeries::one(1)));
        }

        #[test]
        fn u5_is_linear(f in arb_series(), g in arb_series(), alpha in -9i64..9) {
            let lhs = f.scale_i64(alpha).add(&g).u5();
            let rhs = f.u5().scale_i64(alpha).add(&g.u5());
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn u5_pulls_out_substituted_factors(f in arb_series(), g in arb_series()) {
            // u5(f(q^5) g(q)) = f(q) u5(g(q)) on the common window
            let lhs = f.substitute_qk(5).mul(&g).u5();
            let rhs = f.mul(&g.u5());
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn deeper_recomputation_is_consistent(r in -4i64..5, delta in 1u32..4) {
            let shallow = euler_product(r, delta, Precision::new(25));
            let deep = euler_product(r, delta, Precision::new(60));
            prop_assert!(shallow.agrees_with(&deep));
        }
    }
}
