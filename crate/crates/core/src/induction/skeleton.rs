//! The discrete "skeleton" arrays behind the operator images: integer
//! arrays `a_j(m,n), b_j(m,n), c(m,n), d_j(m,n)` such that, for example,
//!
//! `U^(0){t^n} = sum_m a_0(m,n) 5^floor((5m-n-1)/2) t^m
//!             + sum_m a_1(m,n) 5^floor((5m-n)/2) p_1 t^m`,
//!
//! with support bounded below by `m >= ceil((n+u)/5)` per array. The
//! entries are derived from the exact image tables by dividing out the
//! prescribed power of five; a failed division falsifies the valuation
//! pattern and is an error.
//!
//! Corner case: on the diagonal `n = 5m` the `c` family prescribes the
//! power `5^(-1)`. A nonzero coefficient there is stored against a power
//! clamped to `5^0` and flagged, so reports stay honest about the corner.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::induction::images::{ImageKind, ImageTables, BASE_N};
use crate::induction::{InductionError, TPolyPair};
use crate::tpoly::TPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SkeletonKind {
    A0,
    A1,
    B0,
    B1,
    C,
    D0,
    D1,
}

impl SkeletonKind {
    pub const ALL: [SkeletonKind; 7] = [
        SkeletonKind::A0,
        SkeletonKind::A1,
        SkeletonKind::B0,
        SkeletonKind::B1,
        SkeletonKind::C,
        SkeletonKind::D0,
        SkeletonKind::D1,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SkeletonKind::A0 => "a_0",
            SkeletonKind::A1 => "a_1",
            SkeletonKind::B0 => "b_0",
            SkeletonKind::B1 => "b_1",
            SkeletonKind::C => "c",
            SkeletonKind::D0 => "d_0",
            SkeletonKind::D1 => "d_1",
        }
    }

    pub fn image_kind(self) -> ImageKind {
        match self {
            SkeletonKind::A0 | SkeletonKind::A1 => ImageKind::U0T,
            SkeletonKind::B0 | SkeletonKind::B1 => ImageKind::U0P0T,
            SkeletonKind::C => ImageKind::U1T,
            SkeletonKind::D0 | SkeletonKind::D1 => ImageKind::U1P1T,
        }
    }

    /// Reads the partner-`p` polynomial of the image rather than the plain
    /// `t` polynomial.
    pub fn takes_p_part(self) -> bool {
        matches!(self, SkeletonKind::A1 | SkeletonKind::B1 | SkeletonKind::D1)
    }

    /// Support rule offset `u`: entries vanish unless `m >= ceil((n+u)/5)`.
    pub fn support_offset(self) -> i64 {
        match self {
            SkeletonKind::A0 => 1,
            SkeletonKind::A1 => 0,
            SkeletonKind::B0 => 2,
            SkeletonKind::B1 => 0,
            SkeletonKind::C => 0,
            SkeletonKind::D0 => 1,
            SkeletonKind::D1 => -1,
        }
    }

    /// Valuation rule offset `v`: the prescribed power is
    /// `floor((5m - n + v)/2)`.
    pub fn valuation_offset(self) -> i64 {
        match self {
            SkeletonKind::A0 => -1,
            SkeletonKind::A1 => 0,
            SkeletonKind::B0 => -1,
            SkeletonKind::B1 => 0,
            SkeletonKind::C => -1,
            SkeletonKind::D0 => -1,
            SkeletonKind::D1 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonEntry {
    pub h: BigInt,
    pub power: u32,
    /// True when the prescribed power was negative and got clamped to 0.
    pub clamped: bool,
}

/// All seven arrays over a contiguous column range `BASE_N ..= n_max`.
#[derive(Debug, Clone)]
pub struct SkeletonSet {
    entries: BTreeMap<SkeletonKind, BTreeMap<(i64, i64), SkeletonEntry>>,
    n_max: i64,
}

impl SkeletonSet {
    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn entry(&self, kind: SkeletonKind, m: i64, n: i64) -> Option<&SkeletonEntry> {
        self.entries.get(&kind).and_then(|map| map.get(&(n, m)))
    }

    pub fn column(
        &self,
        kind: SkeletonKind,
        n: i64,
    ) -> impl Iterator<Item = (i64, &SkeletonEntry)> {
        self.entries
            .get(&kind)
            .into_iter()
            .flat_map(move |map| map.range((n, i64::MIN)..=(n, i64::MAX)))
            .map(|(&(_, m), e)| (m, e))
    }

    /// Entries with the prescribed 5-powers re-attached; must equal the
    /// corresponding image polynomial exactly.
    pub fn reassemble_column(&self, kind: SkeletonKind, n: i64) -> TPoly {
        let mut poly = TPoly::zero();
        for (m, e) in self.column(kind, n) {
            poly.add_term(m, &(&e.h * BigInt::from(5).pow(e.power)));
        }
        poly
    }

    /// Flagged corner entries (clamped prescribed powers).
    pub fn flagged(&self) -> Vec<(SkeletonKind, i64, i64)> {
        let mut out = Vec::new();
        for (&kind, map) in &self.entries {
            for (&(n, m), e) in map {
                if e.clamped {
                    out.push((kind, m, n));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arrays: Vec<serde_json::Value> = SkeletonKind::ALL
            .iter()
            .map(|&kind| {
                let entries: Vec<serde_json::Value> = self
                    .entries
                    .get(&kind)
                    .map(|map| {
                        map.iter()
                            .map(|(&(n, m), e)| {
                                serde_json::json!({
                                    "m": m,
                                    "n": n,
                                    "h": e.h.to_string(),
                                    "power": e.power,
                                    "clamped": e.clamped,
                                })
                            })
                            .collect()
                    })
                    .unwrap_or_default();
                serde_json::json!({ "kind": kind.label(), "entries": entries })
            })
            .collect();
        serde_json::json!({ "n_max": self.n_max, "arrays": arrays })
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn convert_column(
    set: &mut SkeletonSet,
    kind: SkeletonKind,
    n: i64,
    image: &TPolyPair,
) -> Result<(), InductionError> {
    let poly = if kind.takes_p_part() {
        &image.beta
    } else {
        &image.alpha
    };
    let u = kind.support_offset();
    let v = kind.valuation_offset();
    let map = set.entries.entry(kind).or_default();
    for (m, c) in poly.iter() {
        debug_assert!(!c.is_zero());
        if m < ceil_div(n + u, 5) {
            return Err(InductionError::SupportViolation {
                kind: kind.label(),
                m,
                n,
            });
        }
        let prescribed = (5 * m - n + v).div_euclid(2);
        let entry = if prescribed >= 0 {
            let power = prescribed as u32;
            let denom = BigInt::from(5).pow(power);
            let (h, rem) = c.div_rem(&denom);
            if !rem.is_zero() {
                return Err(InductionError::NonIntegralSkeleton {
                    kind: kind.label(),
                    m,
                    n,
                    power,
                });
            }
            SkeletonEntry {
                h,
                power,
                clamped: false,
            }
        } else {
            SkeletonEntry {
                h: c.clone(),
                power: 0,
                clamped: true,
            }
        };
        map.insert((n, m), entry);
    }
    Ok(())
}

/// Converts the base columns `n = -4..=0` of every family into skeleton
/// arrays.
pub fn skeleton_init(tables: &mut ImageTables) -> Result<SkeletonSet, InductionError> {
    let mut set = SkeletonSet {
        entries: BTreeMap::new(),
        n_max: BASE_N - 1,
    };
    skeleton_extend(&mut set, tables, 0)?;
    Ok(set)
}

/// Extends all arrays through column `up_to` using the recursion carried by
/// the image tables.
pub fn skeleton_extend(
    set: &mut SkeletonSet,
    tables: &mut ImageTables,
    up_to: i64,
) -> Result<(), InductionError> {
    tables.ensure(up_to);
    for n in (set.n_max + 1).max(BASE_N)..=up_to {
        for kind in SkeletonKind::ALL {
            let image = tables.get(kind.image_kind(), n).clone();
            convert_column(set, kind, n, &image)?;
        }
        set.n_max = n;
    }
    Ok(())
}
