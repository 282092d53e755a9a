//! The Galois ring GR(4^n) = R in Teichmüller coordinates.
//!
//! Every element is uniquely `t(a) + 2 t(b)` with `t` the Teichmüller lift, and
//! is stored as the pair `(a, b)` of GF(2^n) elements. Ring operations:
//!
//! - `t(u) + t(v) = t(u + v) + 2 t(sqrt(uv))`
//! - `(a + 2b) + (c + 2d) = (a + c) + 2(b + d + sqrt(ac))`
//! - `(a + 2b)(c + 2d) = ac + 2(ad + bc)`
//! - `-(a + 2b) = a + 2(b + a)`
//!
//! The maximal ideal `2R` is the set of pairs with `a = 0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{Fe, FieldCtx};
use crate::planar::DoQuad;

/// Largest `n` for which difference sets are built and verified.
pub const RDS_LIMIT: u32 = 12;

/// `t(a) + 2 t(b)`.
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrElem {
    pub a: Fe,
    pub b: Fe,
}

impl fmt::Debug for GrElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + 2{:?})", self.a, self.b)
    }
}

impl GrElem {
    pub const ZERO: GrElem = GrElem {
        a: Fe::ZERO,
        b: Fe::ZERO,
    };
    pub const ONE: GrElem = GrElem {
        a: Fe::ONE,
        b: Fe::ZERO,
    };

    pub fn new(a: Fe, b: Fe) -> GrElem {
        GrElem { a, b }
    }

    /// The Teichmüller lift `t(u)`.
    pub fn teich(u: Fe) -> GrElem {
        GrElem { a: u, b: Fe::ZERO }
    }

    /// `2 t(u)`.
    pub fn twice(u: Fe) -> GrElem {
        GrElem { a: Fe::ZERO, b: u }
    }

    /// Whether the element lies in the ideal `2R`.
    pub fn in_two_r(self) -> bool {
        self.a.is_zero()
    }

    /// Dense index `a * 2^n + b`.
    pub fn index(self, n: u32) -> usize {
        ((self.a.0 as usize) << n) | self.b.0 as usize
    }

    pub fn from_index(idx: usize, n: u32) -> GrElem {
        GrElem {
            a: Fe((idx >> n) as u32),
            b: Fe((idx & ((1 << n) - 1)) as u32),
        }
    }
}

/// An element of Z4 = Z/4Z.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z4(u8);

impl Z4 {
    pub fn new(v: i64) -> Z4 {
        Z4(v.rem_euclid(4) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// The embedding Z4 -> R: `0, 1, 2, 3 = (0,0), (1,0), (0,1), (1,1)`.
    pub fn to_gr(self) -> GrElem {
        GrElem {
            a: Fe((self.0 & 1) as u32),
            b: Fe((self.0 >> 1) as u32),
        }
    }

    /// Inverse of [`Z4::to_gr`]; `None` outside the prime subring.
    pub fn from_gr(x: GrElem) -> Option<Z4> {
        (x.a.0 <= 1 && x.b.0 <= 1).then(|| Z4((x.a.0 + 2 * x.b.0) as u8))
    }
}

impl std::ops::Add for Z4 {
    type Output = Z4;
    fn add(self, o: Z4) -> Z4 {
        Z4((self.0 + o.0) % 4)
    }
}

impl std::ops::Mul for Z4 {
    type Output = Z4;
    fn mul(self, o: Z4) -> Z4 {
        Z4((self.0 * o.0) % 4)
    }
}

impl std::ops::Neg for Z4 {
    type Output = Z4;
    fn neg(self) -> Z4 {
        Z4((4 - self.0) % 4)
    }
}

pub fn gr_add(ctx: &FieldCtx, x: GrElem, y: GrElem) -> GrElem {
    GrElem {
        a: x.a + y.a,
        b: x.b + y.b + ctx.sqrt(ctx.mul(x.a, y.a)),
    }
}

pub fn gr_neg(x: GrElem) -> GrElem {
    GrElem {
        a: x.a,
        b: x.b + x.a,
    }
}

pub fn gr_sub(ctx: &FieldCtx, x: GrElem, y: GrElem) -> GrElem {
    gr_add(ctx, x, gr_neg(y))
}

pub fn gr_mul(ctx: &FieldCtx, x: GrElem, y: GrElem) -> GrElem {
    GrElem {
        a: ctx.mul(x.a, y.a),
        b: ctx.mul(x.a, y.b) + ctx.mul(x.b, y.a),
    }
}

/// The ring Frobenius `a + 2b -> a^2 + 2b^2`.
pub fn gr_frobenius(ctx: &FieldCtx, x: GrElem) -> GrElem {
    GrElem {
        a: ctx.square(x.a),
        b: ctx.square(x.b),
    }
}

/// `tr_R(a + 2b) = sum_k t(a^(2^k)) + 2 tr(b)`, summed with carries in R.
pub fn tr_r(ctx: &FieldCtx, x: GrElem) -> Z4 {
    let mut acc = GrElem::ZERO;
    let mut conj = x.a;
    for _ in 0..ctx.n() {
        acc = gr_add(ctx, acc, GrElem::teich(conj));
        conj = ctx.square(conj);
    }
    acc = gr_add(ctx, acc, GrElem::twice(Fe(ctx.abs_trace(x.b))));
    Z4::from_gr(acc).expect("the ring trace lands in Z4")
}

/// `D = { t(x) + 2 t(sqrt(F(x))) : x in GF(2^n) }`, ordered by `x`.
pub fn rds_from_function(f: &DoQuad) -> Result<Vec<GrElem>> {
    let ctx = f.ctx();
    check_rds_size(ctx)?;
    Ok(ctx
        .elements()
        .map(|x| GrElem::new(x, ctx.sqrt(f.eval(x))))
        .collect())
}

/// The same set for an arbitrary value table.
pub fn rds_from_table(ctx: &FieldCtx, table: &[Fe]) -> Result<Vec<GrElem>> {
    check_rds_size(ctx)?;
    Ok(ctx
        .elements()
        .map(|x| GrElem::new(x, ctx.sqrt(table[x.0 as usize])))
        .collect())
}

fn check_rds_size(ctx: &FieldCtx) -> Result<()> {
    if ctx.n() > RDS_LIMIT {
        return Err(Error::TooLarge {
            what: "relative difference set",
            n: ctx.n(),
            limit: RDS_LIMIT,
        });
    }
    Ok(())
}

/// Outcome of [`verify_rds`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdsReport {
    pub is_rds: bool,
    pub size: usize,
    /// Elements of `R \ 2R` hit exactly once.
    pub unit_coverage: u64,
    /// `|R \ 2R| = 4^n - 2^n`.
    pub expected_unit_coverage: u64,
    /// Differences that land in `2R \ {0}`.
    pub forbidden_hits: u64,
    /// Multiplicity -> number of elements of `R \ 2R` with that many hits.
    pub histogram: BTreeMap<u64, u64>,
    /// First element of `R \ 2R` (by index) not hit exactly once, with its count.
    pub first_miscovered: Option<(GrElem, u64)>,
    /// First element of `2R \ {0}` that is hit, with its count.
    pub first_forbidden: Option<(GrElem, u64)>,
    /// Set when `D` has the wrong size or repeats an element.
    pub note: Option<String>,
}

/// Checks that the differences `d - d'`, `d != d'`, cover every element of
/// `R \ 2R` exactly once and never hit `2R`.
pub fn verify_rds(ctx: &FieldCtx, d: &[GrElem]) -> Result<RdsReport> {
    check_rds_size(ctx)?;
    let n = ctx.n();
    let q = 1usize << n;
    let mut report = RdsReport {
        is_rds: false,
        size: d.len(),
        unit_coverage: 0,
        expected_unit_coverage: (q * q - q) as u64,
        forbidden_hits: 0,
        histogram: BTreeMap::new(),
        first_miscovered: None,
        first_forbidden: None,
        note: None,
    };
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d.len() {
        report.note = Some("D repeats an element".into());
    } else if d.len() != q {
        report.note = Some(format!("|D| = {}, expected {q}", d.len()));
    }

    let mut counts = vec![0u32; q * q];
    for (i, &x) in d.iter().enumerate() {
        for (j, &y) in d.iter().enumerate() {
            if i != j {
                counts[gr_sub(ctx, x, y).index(n)] += 1;
            }
        }
    }
    for (idx, &c) in counts.iter().enumerate() {
        let e = GrElem::from_index(idx, n);
        let c = c as u64;
        if e.in_two_r() {
            if idx != 0 && c > 0 {
                report.forbidden_hits += c;
                report.first_forbidden.get_or_insert((e, c));
            }
        } else {
            *report.histogram.entry(c).or_default() += 1;
            if c == 1 {
                report.unit_coverage += 1;
            } else {
                report.first_miscovered.get_or_insert((e, c));
            }
        }
    }
    report.is_rds = report.note.is_none()
        && report.forbidden_hits == 0
        && report.unit_coverage == report.expected_unit_coverage;
    Ok(report)
}
