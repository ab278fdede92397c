//! Exact polynomial tables of the operator images `U^(0){t^n}`,
//! `U^(0){p_0 t^n}`, `U^(1){t^n}`, `U^(1){p_1 t^n}`.
//!
//! Columns `n = -4..=0` are seeded from the twenty fundamental relations;
//! every later column follows from the modular-equation recursion
//! `U_5{g t^k} = -sum_j a_j(t) U_5{g t^{k+j-5}}`, carried out entirely in
//! the `<1, p_j>` module over `Z[t]`. This is what makes the deep members
//! of the L-sequence reachable: no series truncation is involved.

use crate::induction::{InductionError, Parity, TPolyPair};
use crate::operators::relations::{builtin_relations, OperatorKind};
use crate::operators::{modeq_coeffs, Context, FunctionName};
use crate::qseries::LaurentSeries;
use crate::tpoly::TPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ImageKind {
    U0T,
    U0P0T,
    U1T,
    U1P1T,
}

impl ImageKind {
    pub const ALL: [ImageKind; 4] = [
        ImageKind::U0T,
        ImageKind::U0P0T,
        ImageKind::U1T,
        ImageKind::U1P1T,
    ];

    pub fn op(self) -> OperatorKind {
        match self {
            ImageKind::U0T | ImageKind::U0P0T => OperatorKind::U0,
            ImageKind::U1T | ImageKind::U1P1T => OperatorKind::U1,
        }
    }

    pub fn arg_has_p(self) -> bool {
        matches!(self, ImageKind::U0P0T | ImageKind::U1P1T)
    }

    /// Which module the image lands in: `U^(0)` images pair with `p_1`,
    /// `U^(1)` images with `p_0`.
    pub fn result_parity(self) -> Parity {
        match self.op() {
            OperatorKind::U0 => Parity::Odd,
            OperatorKind::U1 => Parity::Even,
        }
    }

    fn group(self) -> u8 {
        match self {
            ImageKind::U0T => 1,
            ImageKind::U0P0T => 2,
            ImageKind::U1T => 3,
            ImageKind::U1P1T => 4,
        }
    }

    pub fn describe(self, n: i64) -> String {
        let (op, p) = match self {
            ImageKind::U0T => ("U0", ""),
            ImageKind::U0P0T => ("U0", "p0 "),
            ImageKind::U1T => ("U1", ""),
            ImageKind::U1P1T => ("U1", "p1 "),
        };
        match (p.is_empty(), n) {
            (true, 0) => format!("{op}{{1}}"),
            (true, _) => format!("{op}{{t^{n}}}"),
            (false, 0) => format!("{op}{{{}}}", p.trim_end()),
            (false, _) => format!("{op}{{{p}t^{n}}}"),
        }
    }
}

/// Base column index: the relation tables cover `n = -4..=0`.
pub const BASE_N: i64 = -4;

pub struct ImageTables {
    families: [Vec<TPolyPair>; 4],
    a_polys: [TPoly; 5],
}

impl Default for ImageTables {
    fn default() -> Self {
        Self::new()
    }
}

impl ImageTables {
    /// Seeds the four families from the built-in relation tables.
    pub fn new() -> Self {
        let mut families: [Vec<TPolyPair>; 4] = Default::default();
        for rel in builtin_relations() {
            let kind_idx = (rel.group - 1) as usize;
            let parity = match rel.op {
                OperatorKind::U0 => Parity::Odd,
                OperatorKind::U1 => Parity::Even,
            };
            let idx = (rel.n - BASE_N) as usize;
            let fam = &mut families[kind_idx];
            if fam.len() <= idx {
                fam.resize(idx + 1, TPolyPair::zero(parity));
            }
            fam[idx] = TPolyPair {
                alpha: rel.alpha,
                beta: rel.beta,
                parity,
            };
        }
        for fam in &families {
            assert_eq!(fam.len(), 5, "expected five consecutive base columns");
        }
        Self {
            families,
            a_polys: modeq_coeffs(),
        }
    }

    pub fn max_n(&self) -> i64 {
        BASE_N + self.families[0].len() as i64 - 1
    }

    /// Extends every family through column `n_max` by the recursion.
    pub fn ensure(&mut self, n_max: i64) {
        for kind in ImageKind::ALL {
            let fam_idx = (kind.group() - 1) as usize;
            while BASE_N + (self.families[fam_idx].len() as i64) <= n_max {
                let len = self.families[fam_idx].len();
                let parity = kind.result_parity();
                let mut acc = TPolyPair::zero(parity);
                for (j, a_j) in self.a_polys.iter().enumerate() {
                    // column (k + j - 5) is at index len - 5 + j
                    let prev = &self.families[fam_idx][len - 5 + j];
                    acc = acc.add(&prev.mul_tpoly(a_j));
                }
                self.families[fam_idx].push(acc.neg());
            }
        }
    }

    /// Image of `t^n` (or `p_j t^n`) under the family's operator; `n >= -4`.
    pub fn get(&mut self, kind: ImageKind, n: i64) -> &TPolyPair {
        assert!(n >= BASE_N, "image tables start at n = {BASE_N}");
        self.ensure(n);
        &self.families[(kind.group() - 1) as usize][(n - BASE_N) as usize]
    }
}

/// Applies `U^(j)` (with `j` the parity of `pair`) by expanding over the
/// image tables. Exact; the result lands in the opposite module.
pub fn apply_u(pair: &TPolyPair, tables: &mut ImageTables) -> Result<TPolyPair, InductionError> {
    let (t_kind, pt_kind) = match pair.parity {
        Parity::Even => (ImageKind::U0T, ImageKind::U0P0T),
        Parity::Odd => (ImageKind::U1T, ImageKind::U1P1T),
    };
    let out_parity = t_kind.result_parity();
    let mut acc = TPolyPair::zero(out_parity);
    for (poly, kind) in [(&pair.alpha, t_kind), (&pair.beta, pt_kind)] {
        for (d, c) in poly.iter() {
            if d < BASE_N {
                return Err(InductionError::UnsupportedDegree { degree: d });
            }
            let image = tables.get(kind, d).clone();
            acc = acc.add(&image.scale(c));
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct ImageCheck {
    pub kind: ImageKind,
    pub n: i64,
    pub name: String,
    pub window: i64,
    pub pass: bool,
    pub first_mismatch: Option<(i64, num_bigint::BigInt)>,
}

/// Oracle check: reconstruct each tabulated image as a q-series and compare
/// it with the operator applied directly to the expanded argument.
pub fn verify_images_against_direct(
    tables: &mut ImageTables,
    ctx: &Context,
    n_from: i64,
    n_to: i64,
) -> Result<Vec<ImageCheck>, InductionError> {
    let mut out = Vec::new();
    for kind in ImageKind::ALL {
        for n in n_from..=n_to {
            let mut arg: LaurentSeries = ctx.t_pow(n);
            if kind.arg_has_p() {
                let own_p = match kind.op() {
                    OperatorKind::U0 => ctx.series(FunctionName::P0),
                    OperatorKind::U1 => ctx.series(FunctionName::P1),
                };
                arg = arg.mul(own_p);
            }
            let direct = match kind.op() {
                OperatorKind::U0 => ctx.u0(&arg)?,
                OperatorKind::U1 => ctx.u1(&arg),
            };
            let rebuilt = tables.get(kind, n).reconstruct(ctx)?;
            let window = direct.prec().min(rebuilt.prec());
            let first_mismatch = direct.first_difference(&rebuilt);
            out.push(ImageCheck {
                kind,
                n,
                name: kind.describe(n),
                window,
                pass: first_mismatch.is_none(),
                first_mismatch,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn tables_seed_from_relations() {
        let mut tables = ImageTables::new();
        // U0{1} = p1
        let img = tables.get(ImageKind::U0T, 0);
        assert!(img.alpha.is_zero());
        assert_eq!(img.beta.coeff(0), BigInt::from(1));
        // U1{t^-1} = -6 - 25 t
        let img = tables.get(ImageKind::U1T, -1);
        assert_eq!(img.alpha.coeff(0), BigInt::from(-6));
        assert_eq!(img.alpha.coeff(1), BigInt::from(-25));
        assert!(img.beta.is_zero());
    }

    #[test]
    fn extended_columns_match_direct_series() {
        let ctx = Context::new(220);
        let mut tables = ImageTables::new();
        let checks = verify_images_against_direct(&mut tables, &ctx, 1, 10).unwrap();
        assert_eq!(checks.len(), 40);
        for c in &checks {
            assert!(
                c.pass,
                "{} disagrees with the direct route: {:?}",
                c.name, c.first_mismatch
            );
            assert!(c.window >= 10, "{} window {}", c.name, c.window);
        }
    }

    #[test]
    fn image_degrees_stay_small() {
        // The recursion cancels aggressively: degrees grow like n/5, and the
        // induction pipeline relies on that staying tame.
        let mut tables = ImageTables::new();
        tables.ensure(20);
        for kind in ImageKind::ALL {
            let deg = tables.get(kind, 20).max_degree().unwrap_or(0);
            assert!(deg <= 12, "{kind:?} degree {deg}");
        }
    }
}
