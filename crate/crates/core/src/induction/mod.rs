//! The L-sequence, its 5-adic valuation certificates, and the two-route
//! machinery that cross-validates it.
//!
//! `L_n` can be computed two independent ways: directly from the
//! coefficients `a(5^n m + lambda_n)` of the master series, or by
//! alternately applying the `U^(0)`/`U^(1)` operators. The series route
//! costs a factor of five in depth per application, so the certificates for
//! deep members run on the exact polynomial route through the image tables,
//! which the series route validates on its reachable window.

pub mod images;
pub mod skeleton;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{solve_exact, SolveOutcome};
use crate::operators::{Context, FunctionName, OperatorError};
use crate::partition::{a_series, inverse_of_24};
use crate::qseries::{LaurentSeries, Precision, SeriesError};
use crate::tpoly::TPoly;

use images::{apply_u, ImageTables};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error("no representation over {{t^n}} u {{p t^n}} on the window below q^{window}")]
    NoRepresentation { window: i64 },
    #[error("decomposition exists but the {basis} t^{degree} coefficient is not an integer")]
    NonIntegralCoefficients { basis: &'static str, degree: i64 },
    #[error("skeleton entry {kind}({m},{n}) is not divisible by 5^{power}")]
    NonIntegralSkeleton {
        kind: &'static str,
        m: i64,
        n: i64,
        power: u32,
    },
    #[error("skeleton entry {kind}({m},{n}) is nonzero outside its support bound")]
    SupportViolation { kind: &'static str, m: i64, n: i64 },
    #[error("window ends at q^{have}, need q^{need}")]
    InsufficientPrecision { need: i64, have: i64 },
    #[error("image tables have no column at degree {degree}")]
    UnsupportedDegree { degree: i64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Which of the two free modules an element lives in: `Even` pairs with
/// `p_0`, `Odd` with `p_1`. `L_n` has the parity of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn index(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn of(n: u32) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn partner(self) -> FunctionName {
        match self {
            Parity::Even => FunctionName::P0,
            Parity::Odd => FunctionName::P1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Minimal positive solution of `24 x = 1 (mod 5^n)`: the progression index
/// of the congruence family. Closed forms split on the parity of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lambda {
    pub n: u32,
    pub value: BigInt,
}

pub fn lambda_of(n: u32) -> Lambda {
    assert!(n >= 1);
    let power = BigInt::from(5).pow(n);
    let numerator = if n % 2 == 1 {
        BigInt::from(19) * &power + 1
    } else {
        BigInt::from(23) * &power + 1
    };
    let (value, rem) = num_integer::Integer::div_rem(&numerator, &BigInt::from(24));
    assert!(rem.is_zero(), "closed form must be integral");
    debug_assert!(((BigInt::from(24) * &value) % &power).is_one());
    debug_assert!(value < power);
    if n <= 20 {
        // Cross-check against the generic modular inverse while it fits.
        debug_assert_eq!(value, BigInt::from(inverse_of_24(5u64.pow(n))));
    }
    Lambda { n, value }
}

/// An element `alpha(t) + p_j beta(t)` of the free module `<1, p_j>` over
/// `Z[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPolyPair {
    pub alpha: TPoly,
    pub beta: TPoly,
    pub parity: Parity,
}

impl TPolyPair {
    pub fn zero(parity: Parity) -> Self {
        Self {
            alpha: TPoly::zero(),
            beta: TPoly::zero(),
            parity,
        }
    }

    pub fn one(parity: Parity) -> Self {
        Self {
            alpha: TPoly::constant(1),
            beta: TPoly::zero(),
            parity,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.parity, rhs.parity);
        Self {
            alpha: self.alpha.add(&rhs.alpha),
            beta: self.beta.add(&rhs.beta),
            parity: self.parity,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            alpha: self.alpha.neg(),
            beta: self.beta.neg(),
            parity: self.parity,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            alpha: self.alpha.scale(k),
            beta: self.beta.scale(k),
            parity: self.parity,
        }
    }

    /// Multiplication by an element of `Z[t]` (the module action).
    pub fn mul_tpoly(&self, f: &TPoly) -> Self {
        Self {
            alpha: self.alpha.mul(f),
            beta: self.beta.mul(f),
            parity: self.parity,
        }
    }

    pub fn divide_exact_pow5(&self, k: u32) -> Option<Self> {
        let d = BigInt::from(5).pow(k);
        Some(Self {
            alpha: self.alpha.divide_exact(&d)?,
            beta: self.beta.divide_exact(&d)?,
            parity: self.parity,
        })
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.alpha.max_degree().max(self.beta.max_degree())
    }

    /// Back to a q-series through the named expansions.
    pub fn reconstruct(&self, ctx: &Context) -> Result<LaurentSeries, SeriesError> {
        let t = ctx.series(FunctionName::T);
        let p = ctx.series(self.parity.partner());
        self.reconstruct_with(t, p)
    }

    pub fn reconstruct_with(
        &self,
        t: &LaurentSeries,
        p: &LaurentSeries,
    ) -> Result<LaurentSeries, SeriesError> {
        let mut out = self.alpha.eval(t)?;
        if !self.beta.is_zero() {
            out = out.add(&p.mul(&self.beta.eval(t)?));
        }
        if self.is_zero() {
            out = LaurentSeries::zero(t.prec());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "parity": self.parity.index(),
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
        })
    }
}

impl fmt::Display for TPolyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + p{}*({})", self.alpha, self.parity, self.beta)
    }
}

/// Splits a power series over the basis `{t^d} u {p_j t^d}`, `0 <= d <=
/// max_deg`, by exact linear elimination on the coefficient window, then
/// asserts the solution is integral. `t` and `p_j` both start at `q^1`, so
/// leading orders alone cannot separate the basis; the dense solve is the
/// point, not a fallback.
pub fn decompose(
    f: &LaurentSeries,
    parity: Parity,
    max_deg: i64,
    t: &LaurentSeries,
    p: &LaurentSeries,
) -> Result<TPolyPair, InductionError> {
    assert!(f.min_exp() >= 0, "decompose expects a power series");
    assert!(max_deg >= 0);
    let window = f.prec().min(t.prec()).min(p.prec());
    let need = 2 * max_deg + 4;
    if window < need {
        return Err(InductionError::InsufficientPrecision {
            need,
            have: window,
        });
    }

    let n_basis = (max_deg + 1) as usize;
    let mut columns: Vec<LaurentSeries> = Vec::with_capacity(2 * n_basis);
    let mut t_pow = LaurentSeries::one(window);
    for d in 0..=max_deg {
        columns.push(t_pow.clone());
        if d < max_deg {
            t_pow = t_pow.mul(t).truncate(window);
        }
    }
    for d in 0..n_basis {
        columns.push(p.mul(&columns[d]).truncate(window));
    }

    let rows: Vec<Vec<BigInt>> = (0..window)
        .map(|e| {
            columns
                .iter()
                .map(|c| c.coeff(e).expect("within window"))
                .collect()
        })
        .collect();
    let rhs: Vec<BigInt> = (0..window).map(|e| f.coeff(e).expect("window")).collect();

    let solution = match solve_exact(rows, rhs) {
        SolveOutcome::Unique(x) => x,
        SolveOutcome::Inconsistent => {
            return Err(InductionError::NoRepresentation { window })
        }
        SolveOutcome::Underdetermined => {
            return Err(InductionError::InsufficientPrecision {
                need: window + 1,
                have: window,
            })
        }
    };

    let mut alpha = TPoly::zero();
    let mut beta = TPoly::zero();
    for (i, value) in solution.iter().enumerate() {
        let (basis, degree, poly): (&'static str, i64, &mut TPoly) = if i < n_basis {
            ("t-part", i as i64, &mut alpha)
        } else {
            ("p-part", (i - n_basis) as i64, &mut beta)
        };
        if !value.is_integer() {
            return Err(InductionError::NonIntegralCoefficients { basis, degree });
        }
        poly.add_term(degree, &value.to_integer());
    }
    Ok(TPolyPair {
        alpha,
        beta,
        parity,
    })
}

/// Prescribed minimum 5-adic valuation of the `t^n` coefficient for
/// membership in `X^(j)`; `None` means the coefficient must vanish (the
/// spaces contain no constant term and no negative powers).
pub fn required_t_valuation(parity: Parity, n: i64) -> Option<u32> {
    if n < 1 {
        return None;
    }
    let v = match parity {
        Parity::Even => 5 * n - 3,
        Parity::Odd => 5 * n - 1,
    };
    Some((v.div_euclid(2)) as u32)
}

/// Prescribed minimum valuation of the `p_j t^n` coefficient.
pub fn required_p_valuation(n: i64) -> Option<u32> {
    if n < 0 {
        return None;
    }
    Some(((5 * n).div_euclid(2)) as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    T,
    PT,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::T => write!(f, "t^n"),
            BasisKind::PT => write!(f, "p*t^n"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CertTerm {
    pub basis: BasisKind,
    pub degree: i64,
    pub coefficient: BigInt,
    /// `None`: this slot must be zero for membership.
    pub required: Option<u32>,
    pub actual: u64,
    /// `actual - required`; `None` when the slot is forbidden.
    pub margin: Option<i64>,
    pub ok: bool,
}

/// Per-term 5-adic valuation ledger showing membership in `X^(0)` or
/// `X^(1)`, with the discrete quotient functions extracted.
#[derive(Debug, Clone)]
pub struct ValuationCertificate {
    pub parity: Parity,
    pub terms: Vec<CertTerm>,
    pub member: bool,
    pub min_margin: Option<i64>,
    /// Discrete function on the `p_j t^n` slots (quotient by the
    /// prescribed power).
    pub r: BTreeMap<i64, BigInt>,
    /// Discrete function on the `t^n` slots.
    pub s: BTreeMap<i64, BigInt>,
}

impl ValuationCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "parity": self.parity.index(),
            "member": self.member,
            "min_margin": self.min_margin,
            "terms": self.terms.iter().map(|t| serde_json::json!({
                "basis": t.basis.to_string(),
                "degree": t.degree,
                "coefficient": t.coefficient.to_string(),
                "required": t.required,
                "actual": t.actual,
                "margin": t.margin,
                "ok": t.ok,
            })).collect::<Vec<_>>(),
            "r": self.r.iter().map(|(n, v)| serde_json::json!([n, v.to_string()]))
                .collect::<Vec<_>>(),
            "s": self.s.iter().map(|(n, v)| serde_json::json!([n, v.to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

fn valuation5_int(x: &BigInt) -> u64 {
    debug_assert!(!x.is_zero());
    let five = BigInt::from(5);
    let mut v = 0;
    let mut x = x.abs();
    while (&x % &five).is_zero() {
        x /= &five;
        v += 1;
    }
    v
}

/// Checks every nonzero coefficient of the pair against the `X^(j)` floor
/// requirements. Failure is a verdict, not an error.
pub fn x_membership(pair: &TPolyPair) -> ValuationCertificate {
    let mut terms = Vec::new();
    let mut r = BTreeMap::new();
    let mut s = BTreeMap::new();
    for (basis, poly) in [(BasisKind::T, &pair.alpha), (BasisKind::PT, &pair.beta)] {
        for (degree, coefficient) in poly.iter() {
            let required = match basis {
                BasisKind::T => required_t_valuation(pair.parity, degree),
                BasisKind::PT => required_p_valuation(degree),
            };
            let actual = valuation5_int(coefficient);
            let (margin, ok) = match required {
                None => (None, false),
                Some(req) => {
                    let m = actual as i64 - req as i64;
                    (Some(m), m >= 0)
                }
            };
            if ok {
                let req = required.expect("ok implies a requirement");
                let q = coefficient / BigInt::from(5).pow(req);
                match basis {
                    BasisKind::T => s.insert(degree, q),
                    BasisKind::PT => r.insert(degree, q),
                };
            }
            terms.push(CertTerm {
                basis,
                degree,
                coefficient: coefficient.clone(),
                required,
                actual,
                margin,
                ok,
            });
        }
    }
    let member = terms.iter().all(|t| t.ok);
    let min_margin = terms.iter().filter_map(|t| t.margin).min();
    ValuationCertificate {
        parity: pair.parity,
        terms,
        member,
        min_margin,
        r,
        s,
    }
}

/// One member of the L-sequence as a q-series, with the 5-power it is
/// claimed to carry (`floor(n/2)`).
#[derive(Debug, Clone)]
pub struct LnValue {
    pub n: u32,
    pub series: LaurentSeries,
    pub claimed_power: u32,
}

impl LnValue {
    /// `series / 5^claimed_power` when every coefficient divides.
    pub fn divided(&self) -> Option<LaurentSeries> {
        self.series
            .divide_exact(&BigInt::from(5).pow(self.claimed_power))
    }
}

/// Depth of the master series needed for `ln_iterate(n)` to produce
/// `wanted` coefficients: each operator application divides the window by
/// five.
pub fn iterate_budget(n: u32, wanted: usize) -> usize {
    5usize.pow(n) * wanted + 10
}

/// Depth needed for `ln_direct(n)` to produce `wanted` coefficients.
pub fn direct_budget(n: u32, wanted: usize) -> usize {
    let lambda = lambda_of(n).value;
    5usize.pow(n) * (wanted.max(1) - 1)
        + usize::try_from(lambda).expect("desk-scale lambda")
        + 2
}

/// Shared computation for both routes to the L-sequence: everything derives
/// from one master series, whose coefficients are `a(m)`.
///
/// The prefactors and the multiplier A are all reshapings of the same
/// quotient: the even prefactor is `1/a(q)`, the odd prefactor is
/// `1/a(q^5)`, and `A = q a(q) / a(q^25)`.
pub struct LnEngine {
    a: LaurentSeries,
}

impl LnEngine {
    pub fn with_depth(depth: usize) -> Self {
        Self {
            a: a_series(Precision::new(depth)),
        }
    }

    pub fn from_series(a: LaurentSeries) -> Self {
        Self { a }
    }

    pub fn a(&self) -> &LaurentSeries {
        &self.a
    }

    /// The multiplier `A = q a(q) (1/a)(q^25)` to the given depth.
    pub fn big_a(&self, depth: i64) -> Result<LaurentSeries, InductionError> {
        self.a.require_prec(depth)?;
        let inner = self
            .a
            .truncate(ceil_div_i64(depth, 25))
            .invert()
            .expect("a(0) = 1");
        let sub = inner.substitute_qk(25);
        Ok(self.a.truncate(depth).mul(&sub).shift(1))
    }

    /// The eta-quotient prefactor of `L_n`, by parity of `n`.
    pub fn prefactor(&self, parity: Parity, depth: i64) -> Result<LaurentSeries, InductionError> {
        match parity {
            Parity::Even => {
                self.a.require_prec(depth)?;
                Ok(self.a.truncate(depth).invert().expect("a(0) = 1"))
            }
            Parity::Odd => {
                let inner = ceil_div_i64(depth, 5);
                self.a.require_prec(inner)?;
                Ok(self
                    .a
                    .truncate(inner)
                    .invert()
                    .expect("a(0) = 1")
                    .substitute_qk(5))
            }
        }
    }

    /// `L_n` from the coefficient extraction
    /// `prefactor * sum a(5^n m + lambda_n) q^{m+1}`.
    pub fn ln_direct(&self, n: u32, wanted: usize) -> Result<LnValue, InductionError> {
        assert!(n >= 1 && wanted >= 1);
        let lambda = lambda_of(n).value;
        let step = BigInt::from(5).pow(n);
        let top = &step * BigInt::from(wanted as i64 - 1) + &lambda;
        let need =
            i64::try_from(top + 1).map_err(|_| InductionError::InsufficientPrecision {
                need: i64::MAX,
                have: self.a.prec(),
            })?;
        self.a.require_prec(need)?;
        let terms: Vec<(i64, BigInt)> = (0..wanted as i64)
            .map(|m| {
                let arg = i64::try_from(&step * BigInt::from(m) + &lambda).expect("within depth");
                (m + 1, self.a.coeff(arg).expect("within depth"))
            })
            .collect();
        let sum = LaurentSeries::from_bigint_terms(&terms, wanted as i64 + 1);
        let prefactor = self.prefactor(Parity::of(n), wanted as i64 + 1)?;
        Ok(LnValue {
            n,
            series: prefactor.mul(&sum),
            claimed_power: n / 2,
        })
    }

    /// Largest `wanted` this engine can serve for `ln_direct(n)`.
    pub fn direct_capacity(&self, n: u32) -> usize {
        let lambda = lambda_of(n).value;
        let step = BigInt::from(5).pow(n);
        let room: BigInt = BigInt::from(self.a.prec()) - 1 - &lambda;
        if room.is_negative() {
            return 0;
        }
        usize::try_from(room / step).map_or(0, |w| w + 1)
    }

    /// `L_0..L_{n_max}` by alternating the two operators at series level,
    /// spending the engine's whole depth. The window of `L_{n_max}` is
    /// roughly `depth / 5^{n_max}`.
    pub fn ln_iterate_chain(&self, n_max: u32) -> Result<Vec<LnValue>, InductionError> {
        let depth = self.a.prec();
        let big_a = self.big_a(depth)?;
        let mut out = vec![LnValue {
            n: 0,
            series: LaurentSeries::one(depth + 1),
            claimed_power: 0,
        }];
        for n in 1..=n_max {
            let prev = &out[(n - 1) as usize].series;
            let series = if n % 2 == 1 {
                big_a.mul(prev).u5()
            } else {
                prev.u5()
            };
            if series.prec() <= 1 {
                return Err(InductionError::InsufficientPrecision {
                    need: 2,
                    have: series.prec(),
                });
            }
            out.push(LnValue {
                n,
                series,
                claimed_power: n / 2,
            });
        }
        Ok(out)
    }
}

fn ceil_div_i64(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// Spec-shaped entry point: `L_n` to `prec.depth()` coefficients through
/// the coefficient-extraction route. The engine depth is budgeted up front.
pub fn ln_direct(n: u32, prec: Precision) -> Result<LnValue, InductionError> {
    let engine = LnEngine::with_depth(direct_budget(n, prec.depth()));
    engine.ln_direct(n, prec.depth())
}

/// Spec-shaped entry point: `L_n` to `prec.depth()` coefficients through
/// the operator route.
pub fn ln_iterate(n: u32, prec: Precision) -> Result<LnValue, InductionError> {
    assert!(n >= 1);
    let engine = LnEngine::with_depth(iterate_budget(n, prec.depth()));
    let mut chain = engine.ln_iterate_chain(n)?;
    Ok(chain.pop().expect("chain has n_max entries"))
}

/// One step of the certified pipeline.
#[derive(Debug, Clone)]
pub struct Theorem8Step {
    pub n: u32,
    pub claimed_power: u32,
    pub parity: Parity,
    pub pair: TPolyPair,
    /// `5^claimed_power` divides every coefficient of `L_n`.
    pub divisible: bool,
    /// Certificate for `L_n / 5^claimed_power` in its `X^(j)`.
    pub certificate: Option<ValuationCertificate>,
    /// When the series route could reach this `n`: the window compared.
    pub series_window: Option<i64>,
    pub series_match: Option<bool>,
}

impl Theorem8Step {
    pub fn pass(&self) -> bool {
        self.divisible
            && self.certificate.as_ref().is_some_and(|c| c.member)
            && self.series_match != Some(false)
    }
}

#[derive(Debug, Clone)]
pub struct Theorem8Report {
    pub steps: Vec<Theorem8Step>,
}

impl Theorem8Report {
    pub fn all_pass(&self) -> bool {
        self.steps.iter().all(Theorem8Step::pass)
    }
}

/// Runs the induction pipeline up to `L_{n_max}`: compute each `L_n` on the
/// exact polynomial route, peel off the claimed power of five, and certify
/// membership in the right `X^(j)`. For `n <= series_check_max` the
/// polynomial value is also reconstructed as a q-series and compared with
/// the coefficient-extraction route on the engine's reachable window.
pub fn theorem8_check_with(
    n_max: u32,
    engine: &LnEngine,
    series_check_max: u32,
) -> Result<Theorem8Report, InductionError> {
    assert!(n_max >= 1);
    let mut tables = ImageTables::new();
    let mut pair = TPolyPair::one(Parity::Even);
    let mut steps = Vec::new();

    // One shared context sized for the widest series comparison.
    let recon_depth: usize = (1..=n_max.min(series_check_max))
        .map(|n| engine.direct_capacity(n).min(60) + 4)
        .max()
        .unwrap_or(0);
    let ctx = (recon_depth > 6).then(|| Context::new(recon_depth));

    for n in 1..=n_max {
        pair = apply_u(&pair, &mut tables)?;
        let claimed_power = n / 2;
        let divided = pair.divide_exact_pow5(claimed_power);
        let certificate = divided.as_ref().map(x_membership);

        let (mut series_window, mut series_match) = (None, None);
        if n <= series_check_max {
            if let Some(ctx) = &ctx {
                let wanted = engine.direct_capacity(n).min(60);
                if wanted >= 3 {
                    let direct = engine.ln_direct(n, wanted)?;
                    let rebuilt = pair.reconstruct(ctx)?;
                    let window = direct.series.prec().min(rebuilt.prec());
                    series_window = Some(window);
                    series_match = Some(direct.series.agrees_with(&rebuilt));
                }
            }
        }

        steps.push(Theorem8Step {
            n,
            claimed_power,
            parity: pair.parity,
            pair: pair.clone(),
            divisible: divided.is_some(),
            certificate,
            series_window,
            series_match,
        });
    }
    Ok(Theorem8Report { steps })
}

/// Standalone variant that budgets its own engine: series cross-checks run
/// for `n <= 3`, which keeps the master-series depth modest.
pub fn theorem8_check(n_max: u32, prec: Precision) -> Result<Theorem8Report, InductionError> {
    let series_check_max = n_max.min(3);
    let depth = prec
        .depth()
        .max(direct_budget(series_check_max, 12))
        .max(64);
    let engine = LnEngine::with_depth(depth);
    theorem8_check_with(n_max, &engine, series_check_max)
}

/// A randomized member of `X^(j)` with the prescribed powers attached:
/// support of size at most `max_support` in each slot family, quotient
/// values in `-9..=9`.
pub fn random_x_element(parity: Parity, max_support: usize, rng: &mut impl Rng) -> TPolyPair {
    let mut alpha = TPoly::zero();
    let mut beta = TPoly::zero();
    let t_degrees: Vec<i64> = (1..=8).collect();
    let p_degrees: Vec<i64> = (0..=8).collect();
    let n_t = rng.gen_range(0..=max_support);
    let n_p = rng.gen_range(if n_t == 0 { 1 } else { 0 }..=max_support);
    for &d in t_degrees.choose_multiple(rng, n_t) {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-9..=9);
        }
        let req = required_t_valuation(parity, d).expect("d >= 1");
        alpha.add_term(d, &(BigInt::from(c) * BigInt::from(5).pow(req)));
    }
    for &d in p_degrees.choose_multiple(rng, n_p) {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-9..=9);
        }
        let req = required_p_valuation(d).expect("d >= 0");
        beta.add_term(d, &(BigInt::from(c) * BigInt::from(5).pow(req)));
    }
    TPolyPair {
        alpha,
        beta,
        parity,
    }
}

#[derive(Debug, Clone)]
pub struct Theorem7Case {
    pub index: usize,
    pub parity_in: Parity,
    /// For odd inputs: the image divided exactly by 5.
    pub extra_power_exact: bool,
    pub member: bool,
    pub min_margin: Option<i64>,
}

impl Theorem7Case {
    pub fn pass(&self) -> bool {
        self.extra_power_exact && self.member
    }
}

/// Instance checks of the mapping laws on random elements:
/// `U^(0)` sends `X^(0)` into `X^(1)`, and `U^(1)` sends `X^(1)` into
/// `5 X^(0)`. Deterministic for a fixed seed.
pub fn theorem7_random_check(
    count_per_parity: usize,
    seed: u64,
) -> Result<Vec<Theorem7Case>, InductionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tables = ImageTables::new();
    let mut out = Vec::new();
    for index in 0..2 * count_per_parity {
        let parity = if index % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        let f = random_x_element(parity, 6, &mut rng);
        debug_assert!(x_membership(&f).member);
        let image = apply_u(&f, &mut tables)?;
        let (target, extra_power_exact) = match parity {
            Parity::Even => (Some(image), true),
            Parity::Odd => match image.divide_exact_pow5(1) {
                Some(g) => (Some(g), true),
                None => (None, false),
            },
        };
        let cert = target.map(|g| x_membership(&g));
        out.push(Theorem7Case {
            index,
            parity_in: parity,
            extra_power_exact,
            member: cert.as_ref().is_some_and(|c| c.member),
            min_margin: cert.and_then(|c| c.min_margin),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_values_and_recurrences() {
        assert_eq!(lambda_of(1).value, BigInt::from(4));
        assert_eq!(lambda_of(2).value, BigInt::from(24));
        assert_eq!(lambda_of(3).value, BigInt::from(99));
        assert_eq!(lambda_of(4).value, BigInt::from(599));
        assert_eq!(lambda_of(5).value, BigInt::from(2474));

        // The index-shift identities behind the operator route.
        for n in 1u32..=10 {
            let p = |k: u32| BigInt::from(5).pow(k);
            assert_eq!(
                p(2 * n) - p(2 * n - 1) + &lambda_of(2 * n - 1).value,
                lambda_of(2 * n).value
            );
            assert_eq!(
                p(2 * n + 1) - 2 * p(2 * n) + &lambda_of(2 * n).value,
                lambda_of(2 * n + 1).value
            );
        }
    }

    #[test]
    fn decompose_basis_elements_and_relations() {
        let ctx = Context::new(40);
        let t = ctx.series(FunctionName::T);
        let p1 = ctx.series(FunctionName::P1);

        let pair = decompose(p1, Parity::Odd, 2, t, p1).unwrap();
        assert!(pair.alpha.is_zero());
        assert_eq!(pair.beta, TPoly::constant(1));

        // -6 - 25 t as a series decomposes back to itself.
        let series = LaurentSeries::one(t.prec())
            .scale_i64(-6)
            .add(&t.scale_i64(-25));
        let pair = decompose(&series, Parity::Odd, 3, t, p1).unwrap();
        assert_eq!(pair.alpha, TPoly::from_terms(&[(0, -6), (1, -25)]));
        assert!(pair.beta.is_zero());

        // Roundtrip through reconstruct.
        let rebuilt = pair.reconstruct(&ctx).unwrap();
        assert!(rebuilt.agrees_with(&series));
    }

    #[test]
    fn decompose_error_paths() {
        let ctx = Context::new(30);
        let t = ctx.series(FunctionName::T);
        let p0 = ctx.series(FunctionName::P0);

        // rho is not in S_0 (it has a pole), so a shifted version of it
        // cannot be represented; use a random-ish power series instead that
        // genuinely fails: theta_onesided is not in the module either.
        let outsider = crate::qseries::theta_onesided(Precision::new(30));
        assert!(matches!(
            decompose(&outsider, Parity::Even, 4, t, p0),
            Err(InductionError::NoRepresentation { .. })
        ));

        assert!(matches!(
            decompose(&outsider, Parity::Even, 40, t, p0),
            Err(InductionError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn membership_rules() {
        // p_1 itself: member of X^(1) with r(0) = 1.
        let pair = TPolyPair {
            alpha: TPoly::zero(),
            beta: TPoly::constant(1),
            parity: Parity::Odd,
        };
        let cert = x_membership(&pair);
        assert!(cert.member);
        assert_eq!(cert.r.get(&0), Some(&BigInt::one()));
        assert!(cert.s.is_empty());

        // bare t with coefficient 1 is not in X^(0): needs 5^1.
        let pair = TPolyPair {
            alpha: TPoly::from_terms(&[(1, 1)]),
            beta: TPoly::zero(),
            parity: Parity::Even,
        };
        let cert = x_membership(&pair);
        assert!(!cert.member);
        assert_eq!(cert.terms[0].required, Some(1));
        assert_eq!(cert.min_margin, Some(-1));

        // 5t is a member with margin 0.
        let pair = TPolyPair {
            alpha: TPoly::from_terms(&[(1, 5)]),
            beta: TPoly::zero(),
            parity: Parity::Even,
        };
        assert!(x_membership(&pair).member);

        // constants are outside both spaces.
        let pair = TPolyPair {
            alpha: TPoly::constant(5),
            beta: TPoly::zero(),
            parity: Parity::Even,
        };
        let cert = x_membership(&pair);
        assert!(!cert.member);
        assert_eq!(cert.terms[0].required, None);
    }

    #[test]
    fn ln_direct_small_values() {
        let engine = LnEngine::with_depth(700);
        let l1 = engine.ln_direct(1, 20).unwrap();
        assert_eq!(l1.series.coeff(1).unwrap(), BigInt::from(13));
        assert_eq!(l1.claimed_power, 0);

        // L_2 is 5 times an integral series.
        let l2 = engine.ln_direct(2, 20).unwrap();
        assert_eq!(l2.claimed_power, 1);
        assert!(l2.divided().is_some());

        assert!(matches!(
            engine.ln_direct(4, 20),
            Err(InductionError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn iterate_matches_direct_for_l1_l2() {
        let engine = LnEngine::with_depth(iterate_budget(2, 12));
        let chain = engine.ln_iterate_chain(2).unwrap();
        for n in 1..=2u32 {
            let direct = engine
                .ln_direct(n, engine.direct_capacity(n).min(40))
                .unwrap();
            assert!(
                chain[n as usize].series.agrees_with(&direct.series),
                "L_{n} routes disagree: {:?}",
                chain[n as usize].series.first_difference(&direct.series)
            );
        }
    }

    #[test]
    fn theorem8_pipeline_small() {
        let report = theorem8_check(4, Precision::new(64)).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.steps.len(), 4);
        // L_1 = p_1 exactly.
        let l1 = &report.steps[0];
        assert!(l1.pair.alpha.is_zero());
        assert_eq!(l1.pair.beta, TPoly::constant(1));
        assert_eq!(l1.claimed_power, 0);
        assert_eq!(l1.series_match, Some(true));
        // L_2 carries one power of five and lands in X^(0).
        let l2 = &report.steps[1];
        assert_eq!(l2.claimed_power, 1);
        assert_eq!(l2.parity, Parity::Even);
        assert!(l2.certificate.as_ref().unwrap().member);
    }

    #[test]
    fn theorem7_instances() {
        let cases = theorem7_random_check(10, 0x5eed).unwrap();
        assert_eq!(cases.len(), 20);
        for case in &cases {
            assert!(case.pass(), "case {} failed", case.index);
        }
    }

    #[test]
    fn budgets() {
        assert_eq!(iterate_budget(4, 8), 5010);
        // direct budget for one coefficient of L_1 is lambda_1 + 2
        assert_eq!(direct_budget(1, 1), 6);
    }
}
