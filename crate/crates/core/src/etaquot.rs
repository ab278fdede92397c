//! Symbolic eta quotients on `Gamma_0(N)`: the Newman modularity criterion,
//! cusp enumeration, the Ligozat order formula, and expansion into the
//! series engine.
//!
//! An eta quotient is a finite product `prod eta(delta tau)^{r_delta}` over
//! divisors `delta | N`; its q-expansion is
//! `q^{(sum delta r_delta)/24} prod (q^delta; q^delta)_inf^{r_delta}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::qseries::{euler_product, LaurentSeries, Precision};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("delta = {delta} does not divide the level {level}")]
    NonDivisorDelta { delta: u32, level: u32 },
    #[error("sum of delta*r_delta is {sum}, not divisible by 24; leading power of q is fractional")]
    FractionalLeadingPower { sum: i64 },
    #[error("cannot parse eta quotient spec: {0}")]
    ParseError(String),
}

/// Exponent vector of an eta product at a fixed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    level: u32,
    exponents: BTreeMap<u32, i64>,
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

impl EtaQuotient {
    pub fn new(level: u32, pairs: &[(u32, i64)]) -> Result<Self, EtaError> {
        assert!(level >= 1);
        let mut exponents = BTreeMap::new();
        for &(delta, r) in pairs {
            if delta == 0 || level % delta != 0 {
                return Err(EtaError::NonDivisorDelta { delta, level });
            }
            *exponents.entry(delta).or_insert(0) += r;
        }
        Ok(Self { level, exponents })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn exponent(&self, delta: u32) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.exponents.iter().map(|(&d, &r)| (d, r))
    }

    /// Pointwise sum of exponent vectors (product of the quotients).
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.level, rhs.level, "levels must match");
        let mut exponents = self.exponents.clone();
        for (d, r) in rhs.exponents() {
            *exponents.entry(d).or_insert(0) += r;
        }
        Self {
            level: self.level,
            exponents,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        Self {
            level: self.level,
            exponents: self.exponents.iter().map(|(&d, &r)| (d, r * k)).collect(),
        }
    }

    /// `sum delta * r_delta`; the leading q-power is this over 24.
    pub fn weighted_sum(&self) -> i64 {
        self.exponents().map(|(d, r)| d as i64 * r).sum()
    }

    /// Leading exponent of the q-expansion, when integral.
    pub fn leading_exponent(&self) -> Result<i64, EtaError> {
        let sum = self.weighted_sum();
        if sum.rem_euclid(24) != 0 {
            return Err(EtaError::FractionalLeadingPower { sum });
        }
        Ok(sum.div_euclid(24))
    }

    /// q-expansion with at least `prec.depth()` coefficients past the
    /// leading exponent.
    pub fn expand(&self, prec: Precision) -> Result<LaurentSeries, EtaError> {
        let shift = self.leading_exponent()?;
        let mut acc = LaurentSeries::one(prec.as_i64());
        for (delta, r) in self.exponents() {
            if r != 0 {
                acc = acc.mul(&euler_product(r, delta, prec));
            }
        }
        Ok(acc.shift(shift))
    }

    pub fn newman_check(&self) -> NewmanCheck {
        let exponent_sum: i64 = self.exponents().map(|(_, r)| r).sum();
        let delta_weighted_sum = self.weighted_sum();
        let conjugate_weighted_sum: i64 = self
            .exponents()
            .map(|(d, r)| (self.level / d) as i64 * r)
            .sum();
        let mut product = BigInt::from(1);
        for (d, r) in self.exponents() {
            product *= BigInt::from(d).pow(r.unsigned_abs() as u32);
        }
        let sqrt = product.sqrt();
        let product_sqrt = (&sqrt * &sqrt == product).then_some(sqrt);
        NewmanCheck {
            exponent_sum,
            delta_weighted_sum,
            conjugate_weighted_sum,
            product,
            product_sqrt,
        }
    }

    pub fn cusp_order_table(&self) -> CuspOrderTable {
        let orders = cusp_representatives(self.level)
            .into_iter()
            .map(|cusp| {
                let ord = ligozat_order(self, &cusp);
                (cusp, ord)
            })
            .collect();
        CuspOrderTable {
            level: self.level,
            orders,
        }
    }

    /// Membership in the functions holomorphic away from the cusp at
    /// infinity: Newman's criterion plus nonnegative order at every cusp
    /// other than `1/N`.
    pub fn kinf_check(&self) -> KinfCheck {
        let newman = self.newman_check();
        let orders = self.cusp_order_table();
        let holomorphic_away_from_infinity = orders
            .orders
            .iter()
            .filter(|(c, _)| c.c() != self.level)
            .all(|(_, ord)| !ord.is_negative());
        let pass = newman.pass() && holomorphic_away_from_infinity;
        KinfCheck {
            newman,
            orders,
            holomorphic_away_from_infinity,
            pass,
        }
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={};", self.level)?;
        for (d, r) in self.exponents() {
            write!(f, " {d}:{r}")?;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = EtaError;

    /// Compact text form: `N=20; 1:0 2:-2 4:4 5:0 10:2 20:-4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| EtaError::ParseError(format!("{msg} in {s:?}"));
        let (head, tail) = s.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let level: u32 = head
            .trim()
            .strip_prefix("N=")
            .ok_or_else(|| bad("expected N=<level>"))?
            .trim()
            .parse()
            .map_err(|_| bad("bad level"))?;
        if level == 0 {
            return Err(bad("level must be positive"));
        }
        let mut pairs = Vec::new();
        for tok in tail.split_whitespace() {
            let (d, r) = tok.split_once(':').ok_or_else(|| bad("expected delta:r"))?;
            let delta: u32 = d.parse().map_err(|_| bad("bad delta"))?;
            let r: i64 = r.parse().map_err(|_| bad("bad exponent"))?;
            pairs.push((delta, r));
        }
        EtaQuotient::new(level, &pairs)
    }
}

/// The four conditions of Newman's modularity criterion, with the raw sums
/// kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewmanCheck {
    pub exponent_sum: i64,
    pub delta_weighted_sum: i64,
    pub conjugate_weighted_sum: i64,
    pub product: BigInt,
    pub product_sqrt: Option<BigInt>,
}

impl NewmanCheck {
    pub fn cond_weight_zero(&self) -> bool {
        self.exponent_sum == 0
    }
    pub fn cond_delta_sum(&self) -> bool {
        self.delta_weighted_sum.rem_euclid(24) == 0
    }
    pub fn cond_conjugate_sum(&self) -> bool {
        self.conjugate_weighted_sum.rem_euclid(24) == 0
    }
    pub fn cond_square_product(&self) -> bool {
        self.product_sqrt.is_some()
    }
    pub fn pass(&self) -> bool {
        self.cond_weight_zero()
            && self.cond_delta_sum()
            && self.cond_conjugate_sum()
            && self.cond_square_product()
    }
}

/// A cusp `a/c` of `Gamma_0(N)`, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cusp {
    a: i64,
    c: u32,
    level: u32,
}

impl Cusp {
    pub fn new(a: i64, c: u32, level: u32) -> Self {
        assert!(level >= 1);
        assert!(a.gcd(&(c as i64)) == 1, "cusp {a}/{c} is not in lowest terms");
        Self { a, c, level }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The cusp at infinity is represented by `1/N`.
    pub fn is_infinity(&self) -> bool {
        self.c == self.level
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.c)
        }
    }
}

/// One representative per cusp: denominators run over divisors `c | N`, and
/// for each `c` the numerators run over residues modulo `gcd(c, N/c)`
/// coprime to `c`. Ordered by descending denominator so the cusp at
/// infinity (`1/N`) comes first.
pub fn cusp_representatives(level: u32) -> Vec<Cusp> {
    let mut out = Vec::new();
    for c in divisors(level).into_iter().rev() {
        let g = c.gcd(&(level / c));
        for residue in 1..=g {
            if residue.gcd(&g) != 1 {
                continue;
            }
            // Smallest positive a with a = residue (mod g) and gcd(a, c) = 1.
            let mut a = residue as i64;
            while a.gcd(&(c as i64)) != 1 {
                a += g as i64;
            }
            out.push(Cusp::new(a, c, level));
        }
    }
    out
}

/// Tests `Gamma_0(N)`-equivalence of two cusps: completing `a/c` to a
/// matrix `[a, x; c, y]` in `SL_2(Z)`, the cusps are equivalent exactly
/// when `c2*y1 - c1*y2 = 0 (mod gcd(c1*c2, N))`.
pub fn cusps_equivalent(x: &Cusp, y: &Cusp) -> bool {
    assert_eq!(x.level, y.level);
    let n = x.level as i64;
    let y1 = completion_bottom_right(x.a, x.c as i64);
    let y2 = completion_bottom_right(y.a, y.c as i64);
    let g = (x.c as i64 * y.c as i64).gcd(&n);
    (y.c as i64 * y1 - x.c as i64 * y2).rem_euclid(g) == 0
}

/// Some `y` with `a*y = 1 (mod c)` (any completion works; the equivalence
/// test is invariant under the choice).
fn completion_bottom_right(a: i64, c: i64) -> i64 {
    if c == 0 {
        return 1;
    }
    let (mut r0, mut r1) = (a.rem_euclid(c), c);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(c)
}

/// Order of the eta quotient at a cusp `a/c`, as an exact rational:
/// `(N / (24 gcd(c^2, N))) * sum_delta r_delta gcd(c, delta)^2 / delta`.
/// Depends only on the denominator `c`.
pub fn ligozat_order(e: &EtaQuotient, cusp: &Cusp) -> BigRational {
    assert_eq!(e.level(), cusp.level());
    let n = e.level() as i64;
    let c = cusp.c() as i64;
    let mut acc = BigRational::zero();
    for (delta, r) in e.exponents() {
        let g = c.gcd(&(delta as i64));
        acc += BigRational::new(BigInt::from(r * g * g), BigInt::from(delta));
    }
    let scale = BigRational::new(BigInt::from(n), BigInt::from(24 * (c * c).gcd(&n)));
    acc * scale
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspOrderTable {
    pub level: u32,
    pub orders: Vec<(Cusp, BigRational)>,
}

impl CuspOrderTable {
    pub fn order_at_denominator(&self, c: u32) -> Option<&BigRational> {
        self.orders.iter().find(|(cusp, _)| cusp.c() == c).map(|(_, o)| o)
    }

    pub fn order_at_infinity(&self) -> &BigRational {
        self.order_at_denominator(self.level)
            .expect("representatives always include 1/N")
    }

    /// Divisor degree over the cusps; zero for every weight-0 eta quotient
    /// (no zeros or poles away from the cusps).
    pub fn total(&self) -> BigRational {
        self.orders.iter().map(|(_, o)| o).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinfCheck {
    pub newman: NewmanCheck,
    pub orders: CuspOrderTable,
    pub holomorphic_away_from_infinity: bool,
    pub pass: bool,
}
