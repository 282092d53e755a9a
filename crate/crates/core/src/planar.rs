//! Quadratic (Dembowski-Ostrom) functions `F(x) = sum c_ij x^(2^i + 2^j)` and
//! their pseudo-planarity.
//!
//! A function is stored as a canonical map `(i, j) -> c` with `i < j < n`.
//! Family form for a split `n = t m` means every term has `m | j - i`; then the
//! term on `(i, km + i)` is the family coefficient `c_{k,i}` of
//! `x^(2^i (q^k + 1))`.
//!
//! Two independent tests are provided: the definition (every derivative
//! `x -> F(x+a) + F(x) + a x` is a bijection) and the dual criterion
//! (`det M_b != 0` for every `b != 0`, with `M_b` the Dickson matrix of the dual
//! of the derivative).

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{Fe, FieldCtx, Split};
use crate::linop::{dual_coefficient, dual_of_derivative, LinPoly};

/// Largest `n` accepted by the brute-force test and by [`DoQuad::table`].
pub const BRUTE_FORCE_LIMIT: u32 = 20;

#[derive(Clone)]
pub struct DoQuad {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<(u32, u32), Fe>,
}

impl std::fmt::Debug for DoQuad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DoQuad")
            .field("n", &self.ctx.n())
            .field("terms", &self.terms)
            .finish()
    }
}

impl PartialEq for DoQuad {
    fn eq(&self, other: &DoQuad) -> bool {
        self.ctx.n() == other.ctx.n()
            && self.ctx.poly() == other.ctx.poly()
            && self.terms == other.terms
    }
}

/// Family coefficients `c_{k,i}` for `1 <= k < t`, `0 <= i < (t-k) m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyView {
    pub t: u32,
    pub m: u32,
    coeffs: Vec<Vec<Fe>>,
}

impl FamilyView {
    /// Zero coefficients for the split.
    pub fn new(split: Split) -> FamilyView {
        let coeffs = (1..split.t)
            .map(|k| vec![Fe::ZERO; ((split.t - k) * split.m) as usize])
            .collect();
        FamilyView {
            t: split.t,
            m: split.m,
            coeffs,
        }
    }

    /// `c_{k,0} .. c_{k,(t-k)m - 1}`.
    pub fn coeffs(&self, k: u32) -> &[Fe] {
        &self.coeffs[(k - 1) as usize]
    }

    pub fn set(&mut self, k: u32, i: u32, c: Fe) {
        self.coeffs[(k - 1) as usize][i as usize] = c;
    }

    /// Nonzero entries as `(k, i, c)`, ordered by `k` then `i`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, Fe)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, &c)| (k as u32 + 1, i as u32, c))
        })
    }
}

impl DoQuad {
    pub fn zero(ctx: Arc<FieldCtx>) -> DoQuad {
        DoQuad {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    /// Builds `sum c x^(2^i + 2^j)` from arbitrary exponent pairs.
    ///
    /// Indices are reduced mod `n` (`x^(2^n) = x`), colliding pairs are added,
    /// zero coefficients dropped. A pair with `i = j mod n` is a linearized
    /// monomial and is rejected.
    pub fn from_terms<I>(ctx: Arc<FieldCtx>, terms: I) -> Result<DoQuad>
    where
        I: IntoIterator<Item = ((u32, u32), Fe)>,
    {
        let n = ctx.n();
        let mut map: BTreeMap<(u32, u32), Fe> = BTreeMap::new();
        for ((i, j), c) in terms {
            if n < 32 && c.0 >> n != 0 {
                return Err(Error::Invalid(format!(
                    "coefficient {c:?} is not an element of GF(2^{n})"
                )));
            }
            let (a, b) = (i % n, j % n);
            if a == b {
                return Err(Error::LinearizedTerm { i, j });
            }
            *map.entry((a.min(b), a.max(b))).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(DoQuad { ctx, terms: map })
    }

    /// Builds `sum c_{k,i} x^(2^i (q^k + 1))` from `(k, i, c)` entries; needs a split.
    ///
    /// `k` must lie in `1..t`; `i` may run past `(t-k) m`, in which case the
    /// term wraps onto `c_{t-k, km+i-n}`.
    pub fn from_family<I>(ctx: Arc<FieldCtx>, entries: I) -> Result<DoQuad>
    where
        I: IntoIterator<Item = (u32, u32, Fe)>,
    {
        let s = ctx.require_split()?;
        let mut terms = Vec::new();
        for (k, i, c) in entries {
            if k == 0 || k >= s.t {
                return Err(Error::Invalid(format!(
                    "family index k={k} outside 1..{} for t={}",
                    s.t, s.t
                )));
            }
            terms.push(((i, k * s.m + i), c));
        }
        DoQuad::from_terms(ctx, terms)
    }

    pub fn from_view(ctx: Arc<FieldCtx>, view: &FamilyView) -> Result<DoQuad> {
        let s = ctx.require_split()?;
        if s.t != view.t || s.m != view.m {
            return Err(Error::SplitMismatch {
                expected: view.t,
                found: s.t,
            });
        }
        DoQuad::from_family(ctx, view.entries().collect::<Vec<_>>())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Canonical terms `(i, j) -> c` with `i < j < n`, all `c != 0`.
    pub fn terms(&self) -> &BTreeMap<(u32, u32), Fe> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The family coefficients for the field's split.
    pub fn family_view(&self) -> Result<FamilyView> {
        let s = self.ctx.require_split()?;
        let mut view = FamilyView::new(s);
        for (&(i, j), &c) in &self.terms {
            let d = j - i;
            if d % s.m != 0 {
                return Err(Error::NotFamilyForm { m: s.m, i, j });
            }
            view.set(d / s.m, i, c);
        }
        Ok(view)
    }

    pub fn is_family_form(&self) -> bool {
        self.family_view().is_ok()
    }

    pub fn eval(&self, x: Fe) -> Fe {
        if self.terms.is_empty() || x.is_zero() {
            return Fe::ZERO;
        }
        let ctx = &*self.ctx;
        let mut frobs = Vec::with_capacity(ctx.n() as usize);
        let mut cur = x;
        for _ in 0..ctx.n() {
            frobs.push(cur);
            cur = ctx.square(cur);
        }
        let mut acc = Fe::ZERO;
        for (&(i, j), &c) in &self.terms {
            acc += ctx.mul(c, ctx.mul(frobs[i as usize], frobs[j as usize]));
        }
        acc
    }

    /// Value table indexed by element encoding.
    pub fn table(&self) -> Result<Vec<Fe>> {
        check_brute_force_size(&self.ctx, "value table")?;
        Ok(self
            .ctx
            .elements()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&x| self.eval(x))
            .collect())
    }

    /// A sparse random family-form function: each coefficient slot is kept with
    /// probability `2 / max(slots, 4)`, drawn from the subfield or the whole field.
    pub fn random_family<R: Rng + ?Sized>(ctx: Arc<FieldCtx>, rng: &mut R) -> DoQuad {
        let s = ctx.split().expect("random_family needs a split");
        let mut view = FamilyView::new(s);
        let slots: u32 = (1..s.t).map(|k| (s.t - k) * s.m).sum();
        let sub = ctx.subfield_elements(s.m).expect("m divides n");
        for k in 1..s.t {
            for i in 0..(s.t - k) * s.m {
                if rng.gen_range(0..slots.max(4)) < 2 {
                    let c = if rng.gen_bool(0.5) {
                        sub[rng.gen_range(1..sub.len())]
                    } else {
                        Fe(rng.gen_range(1..ctx.size()) as u32)
                    };
                    view.set(k, i, c);
                }
            }
        }
        DoQuad::from_view(ctx, &view).expect("view matches the split")
    }

    /// A random quadratic function with about `n / 2` terms, not necessarily in family form.
    pub fn random_generic<R: Rng + ?Sized>(ctx: Arc<FieldCtx>, rng: &mut R) -> DoQuad {
        let n = ctx.n();
        if n < 2 {
            return DoQuad::zero(ctx);
        }
        let count = rng.gen_range(1..=n.div_ceil(2));
        let terms: Vec<_> = (0..count)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                ((i, j), Fe(rng.gen_range(1..ctx.size()) as u32))
            })
            .collect();
        DoQuad::from_terms(ctx, terms).expect("pairs are distinct mod n")
    }
}

fn check_brute_force_size(ctx: &FieldCtx, what: &'static str) -> Result<()> {
    if ctx.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what,
            n: ctx.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// brute force

/// The definition applied to a value table of any function (quadratic or not).
pub fn is_pp_table(ctx: &FieldCtx, table: &[Fe]) -> Result<bool> {
    check_brute_force_size(ctx, "brute-force pseudo-planarity (use the criterion test)")?;
    if table.len() as u64 != ctx.size() {
        return Err(Error::Invalid(format!(
            "value table has {} entries, field has {}",
            table.len(),
            ctx.size()
        )));
    }
    let size = ctx.size() as usize;
    let words = size.div_ceil(64);
    let failed = (1..size).into_par_iter().any(|a| {
        let a = Fe(a as u32);
        let mut seen = vec![0u64; words];
        for x in 0..size {
            let v = (table[x ^ a.0 as usize] + table[x] + ctx.mul(a, Fe(x as u32))).0 as usize;
            let (w, bit) = (v / 64, 1u64 << (v % 64));
            if seen[w] & bit != 0 {
                return true;
            }
            seen[w] |= bit;
        }
        false
    });
    Ok(!failed)
}

/// True iff every derivative `x -> F(x+a) + F(x) + a x`, `a != 0`, is a bijection.
pub fn is_pp_bruteforce(f: &DoQuad) -> Result<bool> {
    check_brute_force_size(
        f.ctx(),
        "brute-force pseudo-planarity (use the criterion test)",
    )?;
    is_pp_table(f.ctx(), &f.table()?)
}

// ---------------------------------------------------------------------------
// dual criterion

/// Which determinant formula to use for `det M_b`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DetPath {
    /// Closed form for `t` in {2, 3, 4}, generic elimination otherwise.
    Specialized,
    /// Gaussian elimination of the Dickson matrix.
    Generic,
}

/// `x^(q^k)`.
#[inline]
fn qpow(ctx: &FieldCtx, x: Fe, m: u32, k: u32) -> Fe {
    ctx.frob(x, k * m)
}

/// `det M_b` by the closed forms for `t = 2, 3, 4`.
pub fn det_specialized(ctx: &FieldCtx, view: &FamilyView, b: Fe) -> Fe {
    let (t, m) = (view.t, view.m);
    let mul = |a: Fe, c: Fe| ctx.mul(a, c);
    let q = |x: Fe, k: u32| qpow(ctx, x, m, k);
    match t {
        2 => {
            // b^(q+1) + A_1^2
            let a1 = dual_coefficient(ctx, view, b, 1);
            mul(b, q(b, 1)) + ctx.square(a1)
        }
        3 => {
            // b^(q^2+q+1) + tr_{n/m}(b^q A_2^2)
            let a2 = dual_coefficient(ctx, view, b, 2);
            let norm = mul(mul(b, q(b, 1)), q(b, 2));
            norm + ctx.trace_unchecked(mul(q(b, 1), ctx.square(a2)), m)
        }
        4 => {
            let a2 = dual_coefficient(ctx, view, b, 2);
            let a3 = dual_coefficient(ctx, view, b, 3);
            let (b1, b2, b3) = (q(b, 1), q(b, 2), q(b, 3));
            let norm = mul(mul(b, b1), mul(b2, b3));
            // A_2^(2q+2)
            let t1 = ctx.square(mul(a2, q(a2, 1)));
            // A_3^(2q^2+2)
            let t2 = ctx.square(mul(a3, q(a3, 2)));
            // A_3^(2q^3+2q)
            let t3 = ctx.square(mul(q(a3, 1), q(a3, 3)));
            // b^(q^2+1) A_2^(2q)
            let t4 = mul(mul(b2, b), ctx.square(q(a2, 1)));
            // b^(q^3+q) A_2^2
            let t5 = mul(mul(b3, b1), ctx.square(a2));
            // tr_{n/m}(b^(q^2+q) A_3^2)
            let t6 = ctx.trace_unchecked(mul(mul(b2, b1), ctx.square(a3)), m);
            norm + t1 + t2 + t3 + t4 + t5 + t6
        }
        _ => det_generic_view(ctx, view, b),
    }
}

fn det_generic_view(ctx: &FieldCtx, view: &FamilyView, b: Fe) -> Fe {
    let coeffs = (0..view.t)
        .map(|j| dual_coefficient(ctx, view, b, j))
        .collect();
    LinPoly::new(ctx, view.m, coeffs)
        .expect("t coefficients with base exponent m")
        .dickson_det(ctx)
}

/// `det M_b` for a family-form function.
pub fn det_mb(f: &DoQuad, b: Fe, path: DetPath) -> Result<Fe> {
    let view = f.family_view()?;
    Ok(match path {
        DetPath::Specialized => det_specialized(f.ctx(), &view, b),
        DetPath::Generic => dual_of_derivative(f, b)?.dickson_det(f.ctx()),
    })
}

/// The dual criterion: `det M_b != 0` for every `b != 0`, scanning `b` in
/// generator-power order and stopping at the first zero.
pub fn is_pp_criterion(f: &DoQuad) -> Result<bool> {
    is_pp_criterion_with(f, DetPath::Specialized)
}

pub fn is_pp_criterion_with(f: &DoQuad, path: DetPath) -> Result<bool> {
    Ok(first_zero_det(f, path)?.is_none())
}

/// The first `b` (in generator-power order) with `det M_b = 0`.
pub fn first_zero_det(f: &DoQuad, path: DetPath) -> Result<Option<Fe>> {
    let ctx = f.ctx();
    let view = f.family_view()?;
    let det = |b: Fe| match path {
        DetPath::Specialized => det_specialized(ctx, &view, b),
        DetPath::Generic => det_generic_view(ctx, &view, b),
    };
    Ok(ctx.powers_of_generator().find(|&b| det(b).is_zero()))
}

fn require_t3(ctx: &FieldCtx) -> Result<Split> {
    ctx.require_t(3)
}

/// Scans `b != 0` for a zero of `expr`.
fn all_nonzero(ctx: &FieldCtx, expr: impl Fn(Fe) -> Fe + Sync) -> bool {
    let elems: Vec<Fe> = ctx.powers_of_generator().collect();
    !elems.par_iter().any(|&b| expr(b).is_zero())
}

/// The trinomial `c1 x^(q+1) + c2 x^(q^2+q) + c3 x^(q^2+1)` (t = 3) is
/// pseudo-planar iff
/// `b^(q^2+q+1) + tr_{n/m}(c1^2 b^(q^2+2) + c2^2 b^3 + c3^2 b^(q+2)) != 0` for all `b != 0`.
pub fn trinomial_condition(ctx: &FieldCtx, c1: Fe, c2: Fe, c3: Fe) -> Result<bool> {
    let s = require_t3(ctx)?;
    let m = s.m;
    let (c1s, c2s, c3s) = (ctx.square(c1), ctx.square(c2), ctx.square(c3));
    Ok(all_nonzero(ctx, |b| {
        let (bq, bq2) = (qpow(ctx, b, m, 1), qpow(ctx, b, m, 2));
        let b2 = ctx.square(b);
        let norm = ctx.mul(ctx.mul(b, bq), bq2);
        let inner = ctx.mul(c1s, ctx.mul(bq2, b2))
            + ctx.mul(c2s, ctx.mul(b2, b))
            + ctx.mul(c3s, ctx.mul(bq, b2));
        norm + ctx.trace_unchecked(inner, m)
    }))
}

/// `a^(-(q+1)) x^(q+1) + a^(q^2+1) x^(q^2+1)` (t = 3) is pseudo-planar iff
/// `b^(q^2+q+1) + tr_{n/m}(a^(-2(q^2+q)) b^(2q+1) + a^(2(q^2+1)) b^(q+2)) != 0` for all `b != 0`.
pub fn hu_condition(ctx: &FieldCtx, a: Fe) -> Result<bool> {
    let s = require_t3(ctx)?;
    let m = s.m;
    let ainv = ctx.inv(a)?;
    let k1 = ctx.square(ctx.mul(qpow(ctx, ainv, m, 2), qpow(ctx, ainv, m, 1)));
    let k2 = ctx.square(ctx.mul(qpow(ctx, a, m, 2), a));
    Ok(all_nonzero(ctx, |b| {
        let (bq, bq2) = (qpow(ctx, b, m, 1), qpow(ctx, b, m, 2));
        let norm = ctx.mul(ctx.mul(b, bq), bq2);
        let inner =
            ctx.mul(k1, ctx.mul(ctx.square(bq), b)) + ctx.mul(k2, ctx.mul(bq, ctx.square(b)));
        norm + ctx.trace_unchecked(inner, m)
    }))
}

/// `c x^(2^m + 1)` (t = 2) is pseudo-planar iff `tr_{m/1}(c^(q+1)) = 0`.
pub fn mono_t2_condition(ctx: &FieldCtx, c: Fe) -> Result<bool> {
    let s = ctx.require_t(2)?;
    let nc = ctx.mul(c, qpow(ctx, c, s.m, 1));
    Ok(ctx.trace_rel(nc, s.m, 1)?.is_zero())
}

/// Census of `c` in GF(2^(2m)) with `c x^(2^m+1)` pseudo-planar: `(total, nonzero)`.
pub fn mono_t2_census(ctx: &FieldCtx) -> Result<(u64, u64)> {
    ctx.require_t(2)?;
    let mut total = 0;
    let mut nonzero = 0;
    for c in ctx.elements() {
        if mono_t2_condition(ctx, c)? {
            total += 1;
            if !c.is_zero() {
                nonzero += 1;
            }
        }
    }
    Ok((total, nonzero))
}

/// Outcome of the reducibility test for `c x^(q^2+q)` (t = 3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoT3Report {
    pub cube_root: Fe,
    pub u: Fe,
    pub pseudo_planar: bool,
}

/// With `c = c0^3` (least-encoding `c0`) and `u = c0^(-2(q^2+q+1))`:
/// pseudo-planar iff `u != 1` and `x^3 + x^2 + B2 x + (B2+1)/(u+1)` is
/// reducible over GF(q) for every `B2` in GF(q).
pub fn mono_t3_condition(ctx: &FieldCtx, c: Fe) -> Result<bool> {
    Ok(mono_t3_report(ctx, c)?.pseudo_planar)
}

pub fn mono_t3_report(ctx: &FieldCtx, c: Fe) -> Result<MonoT3Report> {
    let c0 = ctx.cube_root(c)?.ok_or(Error::NotCube(c.0))?;
    mono_t3_with_root(ctx, c0)
}

/// The same test for an explicitly chosen cube root.
pub fn mono_t3_with_root(ctx: &FieldCtx, c0: Fe) -> Result<MonoT3Report> {
    let s = require_t3(ctx)?;
    let q = s.q();
    let c0inv = ctx.inv(c0)?;
    let u = ctx.pow(c0inv, 2 * (q * q + q + 1));
    let pseudo_planar = u != Fe::ONE && {
        let d = ctx.inv(u + Fe::ONE)?;
        let sub = ctx.subfield_elements(s.m)?;
        sub.iter().all(|&b2| {
            let poly = [Fe::ONE, Fe::ONE, b2, ctx.mul(b2 + Fe::ONE, d)];
            sub.iter().any(|&x| ctx.horner(&poly, x).is_zero())
        })
    };
    Ok(MonoT3Report {
        cube_root: c0,
        u,
        pseudo_planar,
    })
}

// ---------------------------------------------------------------------------
// families

fn family(ctx: Arc<FieldCtx>, t: u32, pairs: &[((u32, u32), Fe)]) -> Result<DoQuad> {
    ctx.require_t(t)?;
    DoQuad::from_terms(ctx, pairs.iter().copied())
}

impl DoQuad {
    /// `c x^(2(q+1)) + c^q x^(2(q^2+1))`, t = 3; `c != 0`.
    pub fn fam_t3_binomial(ctx: Arc<FieldCtx>, c: Fe) -> Result<DoQuad> {
        let s = require_t3(&ctx)?;
        if c.is_zero() {
            return Err(Error::Zero("binomial family coefficient"));
        }
        let cq = qpow(&ctx, c, s.m, 1);
        let m = s.m;
        family(ctx, 3, &[((1, m + 1), c), ((1, 2 * m + 1), cq)])
    }

    /// `x^(2(q+1)) + x^(q^2+1) + x^(q^2+q) + x^(2(q^2+1))`, t = 3.
    pub fn fam_t3_quadrinomial(ctx: Arc<FieldCtx>) -> Result<DoQuad> {
        let m = require_t3(&ctx)?.m;
        let one = Fe::ONE;
        family(
            ctx,
            3,
            &[
                ((1, m + 1), one),
                ((0, 2 * m), one),
                ((m, 2 * m), one),
                ((1, 2 * m + 1), one),
            ],
        )
    }

    /// `c1 x^(q+1) + c2 x^(q^2+q) + c3 x^(q^2+1)`, t = 3.
    pub fn fam_t3_trinomial(ctx: Arc<FieldCtx>, c1: Fe, c2: Fe, c3: Fe) -> Result<DoQuad> {
        let m = require_t3(&ctx)?.m;
        family(ctx, 3, &[((0, m), c1), ((m, 2 * m), c2), ((0, 2 * m), c3)])
    }

    /// `x^(q+1) + alpha x^(q^2+q) + x^(q^2+1)` with `alpha` the least-encoding
    /// root of `x^3 + x^2 + 1` (it lies in GF(8), a subfield since `3 | n`).
    pub fn fam_t3_trinomial_alpha(ctx: Arc<FieldCtx>) -> Result<DoQuad> {
        require_t3(&ctx)?;
        let alpha = alpha_root(&ctx)?;
        DoQuad::fam_t3_trinomial_with_alpha(ctx, alpha)
    }

    pub fn fam_t3_trinomial_with_alpha(ctx: Arc<FieldCtx>, alpha: Fe) -> Result<DoQuad> {
        require_t3(&ctx)?;
        if !ctx.horner(&ALPHA_POLY, alpha).is_zero() {
            return Err(Error::Invalid(format!(
                "{alpha:?} is not a root of x^3 + x^2 + 1"
            )));
        }
        DoQuad::fam_t3_trinomial(ctx, Fe::ONE, alpha, Fe::ONE)
    }

    /// `x^(q+1) + x^(q^2+1) + x^(q^3+q) + x^(q^3+1)`, t = 4.
    pub fn fam_t4_quadrinomial(ctx: Arc<FieldCtx>) -> Result<DoQuad> {
        let m = ctx.require_t(4)?.m;
        let one = Fe::ONE;
        family(
            ctx,
            4,
            &[
                ((0, m), one),
                ((0, 2 * m), one),
                ((m, 3 * m), one),
                ((0, 3 * m), one),
            ],
        )
    }

    /// `x^(q^2+q) + x^(q^3+q^2) + x^(q^3+q)`, t = 4.
    pub fn fam_t4_trinomial(ctx: Arc<FieldCtx>) -> Result<DoQuad> {
        let m = ctx.require_t(4)?.m;
        let one = Fe::ONE;
        family(
            ctx,
            4,
            &[((m, 2 * m), one), ((2 * m, 3 * m), one), ((m, 3 * m), one)],
        )
    }

    /// `c x^(2^m + 1)`, t = 2.
    pub fn mono_t2(ctx: Arc<FieldCtx>, c: Fe) -> Result<DoQuad> {
        let m = ctx.require_t(2)?.m;
        family(ctx, 2, &[((0, m), c)])
    }

    /// `c x^(q^2 + q)`, t = 3.
    pub fn mono_t3(ctx: Arc<FieldCtx>, c: Fe) -> Result<DoQuad> {
        let m = require_t3(&ctx)?.m;
        family(ctx, 3, &[((m, 2 * m), c)])
    }

    /// `a^(-(q+1)) x^(q+1) + a^(q^2+1) x^(q^2+1)`, t = 3; `a != 0`.
    pub fn hu_binomial_a(ctx: Arc<FieldCtx>, a: Fe) -> Result<DoQuad> {
        let m = require_t3(&ctx)?.m;
        let ainv = ctx.inv(a)?;
        let c1 = ctx.mul(ainv, qpow(&ctx, ainv, m, 1));
        let c3 = ctx.mul(a, qpow(&ctx, a, m, 2));
        family(ctx, 3, &[((0, m), c1), ((0, 2 * m), c3)])
    }

    /// `(x sum_i tr_{n/d_i}(zeta_i x))^2` for a subfield chain
    /// `n = d_0 > d_1 > ... > d_r` with `d_{i+1} | d_i` and `n / d_r` odd.
    ///
    /// `zetas[i - 1]` belongs to `d_i`. When the field has a split, `d_r` must
    /// equal `m` so that the result is in family form.
    pub fn kantor(ctx: Arc<FieldCtx>, chain: &[u32], zetas: &[Fe]) -> Result<DoQuad> {
        let n = ctx.n();
        if chain.first() != Some(&n) {
            return Err(Error::Invalid(format!(
                "subfield chain must start at n={n}"
            )));
        }
        if zetas.len() + 1 != chain.len() {
            return Err(Error::Invalid(format!(
                "chain of length {} needs {} zeta values, got {}",
                chain.len(),
                chain.len() - 1,
                zetas.len()
            )));
        }
        for w in chain.windows(2) {
            if w[1] >= w[0] || w[1] == 0 || w[0] % w[1] != 0 {
                return Err(Error::Invalid(format!(
                    "chain step {} -> {} is not a proper subfield",
                    w[0], w[1]
                )));
            }
        }
        let last = *chain.last().expect("chain is nonempty");
        if (n / last).is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "[GF(2^{n}) : GF(2^{last})] must be odd"
            )));
        }
        if let Some(s) = ctx.split() {
            if last != s.m {
                return Err(Error::Invalid(format!(
                    "chain must end at the split subfield m={}, ends at {last}",
                    s.m
                )));
            }
        }
        if zetas.iter().any(|z| z.is_zero()) {
            return Err(Error::Zero("Kantor parameter zeta"));
        }
        // x tr(zeta x) = sum_k zeta^(2^(kd)) x^(1 + 2^(kd)); the square shifts both
        // exponents by one and the k = 0 term x^4 is linearized, so it is dropped.
        let mut terms = Vec::new();
        for (&d, &zeta) in chain[1..].iter().zip(zetas) {
            for k in 1..n / d {
                terms.push(((1, k * d + 1), ctx.frob(zeta, k * d + 1)));
            }
        }
        DoQuad::from_terms(ctx, terms)
    }
}

/// `x^3 + x^2 + 1`, leading coefficient first.
const ALPHA_POLY: [Fe; 4] = [Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ONE];

fn alpha_root(ctx: &FieldCtx) -> Result<Fe> {
    if !ctx.n().is_multiple_of(3) {
        return Err(Error::NotDivisor { k: 3, n: ctx.n() });
    }
    // the roots lie in GF(8), so scanning that subfield suffices
    ctx.subfield_elements(3)?
        .into_iter()
        .find(|&x| ctx.horner(&ALPHA_POLY, x).is_zero())
        .ok_or_else(|| Error::Invalid("x^3 + x^2 + 1 has no root".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(n: u32, m: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::with_split(n, None, m).unwrap())
    }

    fn naive_pp(ctx: &FieldCtx, f: impl Fn(Fe) -> Fe) -> bool {
        ctx.nonzero().all(|a| {
            let mut image: Vec<u32> = ctx
                .elements()
                .map(|x| (f(x + a) + f(x) + ctx.mul(a, x)).0)
                .collect();
            image.sort_unstable();
            image.dedup();
            image.len() as u64 == ctx.size()
        })
    }

    #[test]
    fn canonical_terms() {
        let ctx = Arc::new(FieldCtx::new(3, None).unwrap());
        let f = DoQuad::from_terms(ctx.clone(), [((2, 1), Fe(3)), ((4, 2), Fe(1))]).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[&(1, 2)], Fe(2));
        let g = DoQuad::from_terms(ctx.clone(), [((1, 2), Fe(5)), ((2, 1), Fe(5))]).unwrap();
        assert!(g.is_zero());
        assert_eq!(
            DoQuad::from_terms(ctx.clone(), [((0, 3), Fe(1))]),
            Err(Error::LinearizedTerm { i: 0, j: 3 })
        );
        assert!(DoQuad::from_terms(ctx, [((0, 1), Fe(8))]).is_err());
    }

    #[test]
    fn eval_examples() {
        let ctx = field(4, 2);
        let f = DoQuad::mono_t2(ctx.clone(), Fe::ONE).unwrap();
        let g = ctx.generator();
        assert_eq!(f.eval(g), ctx.mul(g, ctx.pow(g, 4)));
        assert!(DoQuad::zero(ctx.clone()).eval(g).is_zero());
        // x^6 + x^10 over GF(8)
        let ctx = Arc::new(FieldCtx::new(3, None).unwrap());
        let f = DoQuad::from_terms(ctx.clone(), [((1, 2), Fe::ONE), ((1, 3), Fe::ONE)]).unwrap();
        for x in ctx.elements() {
            assert_eq!(f.eval(x), ctx.pow(x, 6) + ctx.pow(x, 10));
        }
    }

    #[test]
    fn family_view_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, m) in [(6, 2), (6, 3), (8, 2), (9, 3), (12, 4), (3, 1)] {
            let ctx = field(n, m);
            for _ in 0..50 {
                let f = DoQuad::random_family(ctx.clone(), &mut rng);
                let view = f.family_view().unwrap();
                let back = DoQuad::from_view(ctx.clone(), &view).unwrap();
                assert_eq!(back, f);
                for x in ctx.elements().step_by(7) {
                    let direct = view
                        .entries()
                        .map(|(k, i, c)| {
                            let xi = ctx.frob(x, i);
                            ctx.mul(c, ctx.mul(xi, ctx.frob(xi, k * m)))
                        })
                        .fold(Fe::ZERO, |a, b| a + b);
                    assert_eq!(f.eval(x), direct);
                }
            }
        }
        let ctx = field(6, 2);
        let f = DoQuad::from_terms(ctx, [((0, 1), Fe::ONE)]).unwrap();
        assert_eq!(
            f.family_view(),
            Err(Error::NotFamilyForm { m: 2, i: 0, j: 1 })
        );
    }

    #[test]
    fn family_wraps() {
        let ctx = field(6, 2);
        // k = 2, i = 3: 2^3 (q^2 + 1) = 2^7 + 2^3 = 2^1 + 2^3 mod x^64 = x
        let f = DoQuad::from_family(ctx.clone(), [(2, 3, Fe::ONE)]).unwrap();
        assert_eq!(f.terms().keys().collect::<Vec<_>>(), vec![&(1, 3)]);
        assert_eq!(f.family_view().unwrap().coeffs(1)[1], Fe::ONE);
        assert!(DoQuad::from_family(ctx, [(3, 0, Fe::ONE)]).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let ctx = Arc::new(FieldCtx::with_split(3, None, 1).unwrap());
        assert!(is_pp_bruteforce(&DoQuad::zero(ctx.clone())).unwrap());
        let f = DoQuad::from_terms(ctx.clone(), [((1, 2), Fe::ONE), ((1, 3), Fe::ONE)]).unwrap();
        assert!(is_pp_bruteforce(&f).unwrap());
        let cube = DoQuad::from_terms(ctx.clone(), [((0, 1), Fe::ONE)]).unwrap();
        assert!(!is_pp_bruteforce(&cube).unwrap());
        let big = Arc::new(FieldCtx::new(21, None).unwrap());
        assert!(matches!(
            is_pp_bruteforce(&DoQuad::zero(big)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_force_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 2..=5 {
            let ctx = Arc::new(FieldCtx::new(n, None).unwrap());
            for _ in 0..40 {
                let f = DoQuad::random_generic(ctx.clone(), &mut rng);
                assert_eq!(is_pp_bruteforce(&f).unwrap(), naive_pp(&ctx, |x| f.eval(x)));
            }
        }
    }

    #[test]
    fn criterion_examples() {
        let ctx = field(6, 2);
        assert!(is_pp_criterion(&DoQuad::zero(ctx.clone())).unwrap());
        let q = 4u64;
        for c in ctx.nonzero().step_by(5) {
            let f = DoQuad::fam_t3_binomial(ctx.clone(), c).unwrap();
            for b in ctx.nonzero() {
                let norm = ctx.pow(b, q * q + q + 1);
                assert_eq!(det_mb(&f, b, DetPath::Specialized).unwrap(), norm);
                assert_eq!(det_mb(&f, b, DetPath::Generic).unwrap(), norm);
            }
            assert!(is_pp_criterion(&f).unwrap());
        }
        let f = DoQuad::fam_t3_quadrinomial(field(3, 1)).unwrap();
        assert!(!is_pp_criterion(&f).unwrap());
        let g = DoQuad::from_terms(ctx, [((0, 1), Fe::ONE)]).unwrap();
        assert!(is_pp_criterion(&g).is_err());
    }

    #[test]
    fn specialized_and_generic_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (n, m) in [
            (4, 2),
            (6, 3),
            (8, 4),
            (3, 1),
            (6, 2),
            (9, 3),
            (4, 1),
            (8, 2),
            (12, 3),
            (5, 1),
        ] {
            let ctx = field(n, m);
            for _ in 0..30 {
                let f = DoQuad::random_family(ctx.clone(), &mut rng);
                for b in ctx.nonzero().step_by(1 + (ctx.size() / 200) as usize) {
                    assert_eq!(
                        det_mb(&f, b, DetPath::Specialized).unwrap(),
                        det_mb(&f, b, DetPath::Generic).unwrap(),
                        "n={n} m={m} f={f:?} b={b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn criterion_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (n, m) in [
            (4, 2),
            (4, 1),
            (6, 2),
            (6, 3),
            (6, 1),
            (8, 2),
            (8, 4),
            (9, 3),
        ] {
            let ctx = field(n, m);
            let mut positives = 0;
            for _ in 0..150 {
                let f = DoQuad::random_family(ctx.clone(), &mut rng);
                let brute = is_pp_bruteforce(&f).unwrap();
                assert_eq!(is_pp_criterion(&f).unwrap(), brute, "{f:?}");
                assert_eq!(is_pp_criterion_with(&f, DetPath::Generic).unwrap(), brute);
                positives += brute as u32;
            }
            assert!(positives > 0, "no positives sampled at n={n} m={m}");
        }
    }

    #[test]
    fn det_scales_by_cube_over_subfield() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (n, m) in [(6, 2), (9, 3)] {
            let ctx = field(n, m);
            let sub = ctx.subfield_elements(m).unwrap();
            // holds for these families, not for every family-form function
            let mut fs = vec![DoQuad::fam_t3_quadrinomial(ctx.clone()).unwrap()];
            for _ in 0..3 {
                let mut c = || Fe(rng.gen_range(0..ctx.size()) as u32);
                let (c1, c2, c3) = (c(), c(), c());
                fs.push(DoQuad::fam_t3_trinomial(ctx.clone(), c1, c2, c3).unwrap());
                fs.push(
                    DoQuad::fam_t3_binomial(ctx.clone(), c1 + Fe::ONE)
                        .unwrap_or_else(|_| fs[0].clone()),
                );
            }
            for f in &fs {
                for b in ctx.nonzero() {
                    let d = det_mb(f, b, DetPath::Specialized).unwrap();
                    for &c in &sub[1..] {
                        let dc = det_mb(f, ctx.mul(c, b), DetPath::Specialized).unwrap();
                        assert_eq!(dc, ctx.mul(ctx.pow(c, 3), d));
                    }
                }
            }
        }
    }

    #[test]
    fn trinomial_condition_examples() {
        for m in 1..=3 {
            let ctx = field(3 * m, m);
            let (z, o) = (Fe::ZERO, Fe::ONE);
            assert_eq!(trinomial_condition(&ctx, z, o, o).unwrap(), m % 3 != 1);
            assert_eq!(trinomial_condition(&ctx, o, o, z).unwrap(), m % 3 != 2);
            // alpha lies in GF(q) only when 3 | m, and only then is the trinomial pseudo-planar
            let alpha = alpha_root(&ctx).unwrap();
            assert_eq!(trinomial_condition(&ctx, o, alpha, o).unwrap(), m % 3 == 0);
            let f = DoQuad::fam_t3_trinomial_alpha(ctx.clone()).unwrap();
            assert_eq!(is_pp_bruteforce(&f).unwrap(), m % 3 == 0);
        }
        assert!(trinomial_condition(&field(4, 2), Fe::ONE, Fe::ONE, Fe::ONE).is_err());
    }

    #[test]
    fn trinomial_condition_matches_brute_force() {
        let ctx = field(3, 1);
        for c1 in ctx.elements() {
            for c2 in ctx.elements() {
                for c3 in ctx.elements() {
                    let f = DoQuad::fam_t3_trinomial(ctx.clone(), c1, c2, c3).unwrap();
                    let brute = is_pp_bruteforce(&f).unwrap();
                    assert_eq!(trinomial_condition(&ctx, c1, c2, c3).unwrap(), brute);
                    assert_eq!(is_pp_criterion(&f).unwrap(), brute);
                }
            }
        }
    }

    #[test]
    fn hu_condition_matches_brute_force() {
        let ctx = field(6, 2);
        for a in ctx.nonzero() {
            let f = DoQuad::hu_binomial_a(ctx.clone(), a).unwrap();
            assert_eq!(
                hu_condition(&ctx, a).unwrap(),
                is_pp_bruteforce(&f).unwrap()
            );
        }
    }

    #[test]
    fn family_members() {
        for m in 1..=3 {
            let ctx = field(3 * m, m);
            assert_eq!(
                is_pp_bruteforce(&DoQuad::fam_t3_quadrinomial(ctx.clone()).unwrap()).unwrap(),
                m % 3 != 1
            );
            let c = Fe(ctx.size() as u32 - 1);
            assert!(is_pp_bruteforce(&DoQuad::fam_t3_binomial(ctx, c).unwrap()).unwrap());
        }
        for m in 1..=2 {
            let ctx = field(4 * m, m);
            assert!(is_pp_bruteforce(&DoQuad::fam_t4_quadrinomial(ctx.clone()).unwrap()).unwrap());
            assert!(is_pp_bruteforce(&DoQuad::fam_t4_trinomial(ctx).unwrap()).unwrap());
        }
    }

    #[test]
    fn mono_t2_census_counts() {
        for m in 1..=4u32 {
            let ctx = field(2 * m, m);
            let (total, nonzero) = mono_t2_census(&ctx).unwrap();
            assert_eq!(total, (1 << (2 * m - 1)) - (1 << (m - 1)));
            assert_eq!(nonzero, total - 1);
        }
        for m in 1..=2u32 {
            let ctx = field(2 * m, m);
            for c in ctx.elements() {
                let f = DoQuad::mono_t2(ctx.clone(), c).unwrap();
                assert_eq!(
                    mono_t2_condition(&ctx, c).unwrap(),
                    is_pp_bruteforce(&f).unwrap()
                );
            }
        }
    }

    #[test]
    fn mono_t3_condition_matches_brute_force() {
        for m in 1..=3 {
            let ctx = field(3 * m, m);
            let mut seen_true = false;
            for c in ctx.nonzero() {
                let Some(c0) = ctx.cube_root(c).unwrap() else {
                    assert_eq!(mono_t3_condition(&ctx, c), Err(Error::NotCube(c.0)));
                    continue;
                };
                let f = DoQuad::mono_t3(ctx.clone(), c).unwrap();
                let cond = mono_t3_condition(&ctx, c).unwrap();
                assert_eq!(cond, is_pp_bruteforce(&f).unwrap(), "m={m} c={c:?}");
                seen_true |= cond;
                // the decision does not depend on the cube root chosen
                let order = ctx.group_order();
                if order.is_multiple_of(3) {
                    let w = ctx.pow(ctx.generator(), order / 3);
                    for r in [ctx.mul(c0, w), ctx.mul(c0, ctx.square(w))] {
                        assert_eq!(mono_t3_with_root(&ctx, r).unwrap().pseudo_planar, cond);
                    }
                }
            }
            if m == 2 {
                assert!(seen_true);
            }
        }
    }

    #[test]
    fn mono_t3_u_examples() {
        let ctx = field(6, 2);
        let q = 4u64;
        let order = ctx.group_order();
        let w = ctx.pow(ctx.generator(), order / 3);
        let mut hit_omega = false;
        let mut hit_one = false;
        for c0 in ctx.nonzero() {
            let r = mono_t3_with_root(&ctx, c0).unwrap();
            assert_eq!(r.u, ctx.inv(ctx.pow(c0, 2 * (q * q + q + 1))).unwrap());
            if r.u == w {
                hit_omega = true;
                assert!(r.pseudo_planar);
            }
            if r.u == Fe::ONE {
                hit_one = true;
                assert!(!r.pseudo_planar);
            }
        }
        assert!(hit_omega && hit_one);
    }

    #[test]
    fn kantor_examples() {
        let ctx = field(9, 3);
        let g = ctx.generator();
        for zeta in [Fe::ONE, g] {
            let f = DoQuad::kantor(ctx.clone(), &[9, 3], &[zeta]).unwrap();
            for x in ctx.elements().step_by(11) {
                let inner = ctx_kantor_inner(&ctx, x, &[(3, zeta)]);
                assert_eq!(f.eval(x) + linear_part(&ctx, x, &[zeta]), ctx.square(inner));
            }
            assert!(is_pp_bruteforce(&f).unwrap());
            assert!(is_pp_criterion(&f).unwrap());
        }
        let plain = Arc::new(FieldCtx::new(15, None).unwrap());
        let f = DoQuad::kantor(plain.clone(), &[15, 5, 1], &[Fe(3), Fe(7)]).unwrap();
        let x = Fe(0x1234);
        let inner = ctx_kantor_inner(&plain, x, &[(5, Fe(3)), (1, Fe(7))]);
        assert_eq!(
            f.eval(x) + linear_part(&plain, x, &[Fe(3), Fe(7)]),
            plain.square(inner)
        );
        assert!(DoQuad::kantor(ctx.clone(), &[9, 3], &[]).is_err());
        assert!(DoQuad::kantor(field(8, 2), &[8, 2], &[Fe::ONE]).is_err());
        assert!(DoQuad::kantor(ctx, &[9, 1], &[Fe::ONE]).is_err());
    }

    // the dropped terms zeta^2 x^4
    fn linear_part(ctx: &FieldCtx, x: Fe, zetas: &[Fe]) -> Fe {
        let x4 = ctx.frob(x, 2);
        zetas
            .iter()
            .map(|&z| ctx.mul(ctx.square(z), x4))
            .fold(Fe::ZERO, |a, b| a + b)
    }

    fn ctx_kantor_inner(ctx: &FieldCtx, x: Fe, parts: &[(u32, Fe)]) -> Fe {
        let s = parts
            .iter()
            .map(|&(d, z)| ctx.trace(ctx.mul(z, x), d).unwrap())
            .fold(Fe::ZERO, |a, b| a + b);
        ctx.mul(x, s)
    }

    #[test]
    fn linearized_perturbation_preserves_pseudo_planarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (n, m) in [(3, 1), (4, 2), (6, 2), (6, 3)] {
            let ctx = field(n, m);
            for _ in 0..40 {
                let f = DoQuad::random_family(ctx.clone(), &mut rng);
                let l: Vec<Fe> = (0..n)
                    .map(|_| Fe(rng.gen_range(0..ctx.size()) as u32))
                    .collect();
                let l = LinPoly::new(&ctx, 1, l).unwrap();
                let shift = Fe(rng.gen_range(0..ctx.size()) as u32);
                let table: Vec<Fe> = ctx
                    .elements()
                    .map(|x| f.eval(x) + l.eval(&ctx, x) + shift)
                    .collect();
                assert_eq!(
                    is_pp_table(&ctx, &table).unwrap(),
                    is_pp_bruteforce(&f).unwrap()
                );
            }
        }
    }
}
