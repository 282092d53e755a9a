//! Complete sets of mutually unbiased bases and optimal codebooks built from a
//! pseudo-planar function, with exact arithmetic.
//!
//! Vectors are stored as Gaussian-integer numerators over `sqrt(denom_sq)`;
//! every inner product is exact and `|<x, y>|^2` is an exact rational.
//! Floating point appears only in bound values and exports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{Fe, FieldCtx};
use crate::gring::{gr_mul, tr_r, verify_rds, GrElem, Z4};
use crate::planar::{is_pp_bruteforce, DoQuad};

/// Largest `n` for which bases and codebooks are materialized.
pub const SIGNAL_LIMIT: u32 = 10;

pub type Rational = Ratio<u64>;

#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };

    pub fn new(re: i64, im: i64) -> GaussInt {
        GaussInt { re, im }
    }

    /// `i^k`.
    pub fn omega(k: Z4) -> GaussInt {
        match k.value() {
            0 => GaussInt::new(1, 0),
            1 => GaussInt::new(0, 1),
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }

    pub fn conj(self) -> GaussInt {
        GaussInt::new(self.re, -self.im)
    }

    pub fn norm_sq(self) -> u64 {
        (self.re * self.re + self.im * self.im) as u64
    }
}

impl std::ops::Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl std::ops::Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

/// `entries / sqrt(denom_sq)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodeVec {
    pub entries: Vec<GaussInt>,
    pub denom_sq: u64,
}

impl CodeVec {
    /// The standard basis vector `e_i` of length `k`.
    pub fn unit(k: usize, i: usize) -> CodeVec {
        let mut entries = vec![GaussInt::ZERO; k];
        entries[i] = GaussInt::ONE;
        CodeVec {
            entries,
            denom_sq: 1,
        }
    }

    /// `(i^e_0, .., i^e_(k-1)) / sqrt(k)`.
    pub fn phases(exps: impl IntoIterator<Item = Z4>, denom_sq: u64) -> CodeVec {
        CodeVec {
            entries: exps.into_iter().map(GaussInt::omega).collect(),
            denom_sq,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Unnormalized `sum x_j conj(y_j)`; the true value divides by `sqrt(dx dy)`.
    pub fn inner_numerator(&self, other: &CodeVec) -> GaussInt {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(GaussInt::ZERO, |acc, (&x, &y)| acc + x * y.conj())
    }

    /// `|<x, y>|^2` exactly.
    pub fn inner_abs_sq(&self, other: &CodeVec) -> Rational {
        Ratio::new(
            self.inner_numerator(other).norm_sq(),
            self.denom_sq * other.denom_sq,
        )
    }

    pub fn norm_sq(&self) -> Rational {
        Ratio::new(
            self.entries.iter().map(|e| e.norm_sq()).sum(),
            self.denom_sq,
        )
    }

    /// `(re, im)` of entry `j` as floats.
    pub fn entry_f64(&self, j: usize) -> (f64, f64) {
        let s = (self.denom_sq as f64).sqrt();
        let e = self.entries[j];
        (e.re as f64 / s, e.im as f64 / s)
    }
}

/// An exact alphabet value `numerator / sqrt(denom_sq)`, with zero normalized.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphabetValue {
    pub numerator: GaussInt,
    pub denom_sq: u64,
}

impl fmt::Display for AlphabetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let GaussInt { re, im } = self.numerator;
        let num = match (re, im) {
            (0, 0) => return write!(f, "0"),
            (r, 0) => format!("{r}"),
            (0, 1) => "i".to_string(),
            (0, -1) => "-i".to_string(),
            (0, i) => format!("{i}i"),
            (r, i) => format!("({r}{i:+}i)"),
        };
        if self.denom_sq == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/sqrt({})", self.denom_sq)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    pub dim: usize,
    pub vectors: Vec<CodeVec>,
}

impl Codebook {
    pub fn new(dim: usize, vectors: Vec<CodeVec>) -> Result<Codebook> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::Invalid(format!(
                "codebook vector of length {} in dimension {dim}",
                v.dim()
            )));
        }
        Ok(Codebook { dim, vectors })
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn all_unit_norm(&self) -> bool {
        self.vectors
            .iter()
            .all(|v| v.norm_sq() == Ratio::from_integer(1))
    }

    /// `I_max^2 = max_{i != j} |<c_i, c_j>|^2`.
    pub fn imax_sq(&self) -> Rational {
        let vs = &self.vectors;
        (0..vs.len())
            .into_par_iter()
            .map(|i| {
                vs[i + 1..]
                    .iter()
                    .map(|w| vs[i].inner_abs_sq(w))
                    .max()
                    .unwrap_or_else(|| Ratio::from_integer(0))
            })
            .max()
            .unwrap_or_else(|| Ratio::from_integer(0))
    }

    /// Multiset of `|<c_i, c_j>|^2` over unordered pairs `i < j`.
    pub fn gram_spectrum(&self) -> BTreeMap<Rational, u64> {
        let vs = &self.vectors;
        (0..vs.len())
            .into_par_iter()
            .map(|i| {
                let mut local: BTreeMap<Rational, u64> = BTreeMap::new();
                for w in &vs[i + 1..] {
                    *local.entry(vs[i].inner_abs_sq(w)).or_default() += 1;
                }
                local
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            })
    }

    /// Distinct entry values across all vectors.
    pub fn alphabet(&self) -> BTreeSet<AlphabetValue> {
        self.vectors
            .iter()
            .flat_map(|v| {
                v.entries.iter().map(move |&e| {
                    if e == GaussInt::ZERO {
                        AlphabetValue {
                            numerator: e,
                            denom_sq: 1,
                        }
                    } else {
                        AlphabetValue {
                            numerator: e,
                            denom_sq: v.denom_sq,
                        }
                    }
                })
            })
            .collect()
    }

    /// The vectors as a sorted multiset, for order-free comparison.
    pub fn sorted_vectors(&self) -> Vec<CodeVec> {
        let mut v = self.vectors.clone();
        v.sort();
        v
    }
}

/// `(2N - K^2 - K) / ((K + 1)(N - K))`, the square of the Levenstein bound; needs `N > K^2`.
pub fn levenstein_bound_sq(n: u64, k: u64) -> Result<Rational> {
    if k == 0 || n <= k * k {
        return Err(Error::BoundHypothesis { n, k });
    }
    Ok(Ratio::new(2 * n - k * k - k, (k + 1) * (n - k)))
}

pub fn levenstein_bound(n: u64, k: u64) -> Result<f64> {
    Ok(ratio_f64(levenstein_bound_sq(n, k)?).sqrt())
}

/// `(N - K) / ((N - 1) K)`, the square of the Welch bound; needs `N > K`.
pub fn welch_bound_sq(n: u64, k: u64) -> Result<Rational> {
    if k == 0 || n <= k {
        return Err(Error::Invalid(format!(
            "Welch bound needs N > K >= 1 (N = {n}, K = {k})"
        )));
    }
    Ok(Ratio::new(n - k, (n - 1) * k))
}

pub fn welch_bound(n: u64, k: u64) -> Result<f64> {
    Ok(ratio_f64(welch_bound_sq(n, k)?).sqrt())
}

pub fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Whether `I_max^2` equals the squared Levenstein bound exactly.
pub fn meets_levenstein(cb: &Codebook) -> Result<bool> {
    let bound = levenstein_bound_sq(cb.len() as u64, cb.dim as u64)?;
    Ok(cb.imax_sq() == bound)
}

// ---------------------------------------------------------------------------
// mutually unbiased bases

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisLabel {
    /// The standard basis.
    Infinity,
    /// `B_m` for `m` in the field.
    M(Fe),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Infinity => write!(f, "inf"),
            BasisLabel::M(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    pub label: BasisLabel,
    pub vectors: Vec<CodeVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MubSet {
    pub dim: usize,
    /// `B_inf`, then `B_m` in element order.
    pub bases: Vec<Basis>,
}

impl MubSet {
    /// All vectors of all bases, in basis order.
    pub fn to_codebook(&self) -> Codebook {
        let vectors = self
            .bases
            .iter()
            .flat_map(|b| b.vectors.iter().cloned())
            .collect();
        Codebook {
            dim: self.dim,
            vectors,
        }
    }
}

fn check_signal_size(ctx: &FieldCtx) -> Result<()> {
    if ctx.n() > SIGNAL_LIMIT {
        return Err(Error::TooLarge {
            what: "bases and codebooks",
            n: ctx.n(),
            limit: SIGNAL_LIMIT,
        });
    }
    Ok(())
}

/// Phase exponent of `b_{m,v}` at coordinate `w`:
/// `tr_R(t(m)(t(w)^2 + 2 t(F(w))) + 2 t(v) t(w)) = tr_R(t(m w^2) + 2 t(m F(w) + v w))`.
pub fn mub_exponent(ctx: &FieldCtx, m: Fe, v: Fe, w: Fe, fw: Fe) -> Z4 {
    tr_r(
        ctx,
        GrElem::new(ctx.mul(m, ctx.square(w)), ctx.mul(m, fw) + ctx.mul(v, w)),
    )
}

/// `B_m = { b_{m,v} : v }` with `b_{m,v}[w] = i^(mub_exponent(m, v, w)) / sqrt(2^n)`.
pub fn mub_basis(ctx: &FieldCtx, table: &[Fe], m: Fe) -> Basis {
    let vectors = ctx
        .elements()
        .map(|v| {
            CodeVec::phases(
                ctx.elements()
                    .map(|w| mub_exponent(ctx, m, v, w, table[w.0 as usize])),
                ctx.size(),
            )
        })
        .collect();
    Basis {
        label: BasisLabel::M(m),
        vectors,
    }
}

/// The `2^n + 1` bases from a pseudo-planar `F`; rejects any other `F`.
pub fn mub_from_function(f: &DoQuad) -> Result<MubSet> {
    let ctx = f.ctx();
    check_signal_size(ctx)?;
    if !is_pp_bruteforce(f)? {
        return Err(Error::NotPseudoPlanar);
    }
    let table = f.table()?;
    let k = ctx.size() as usize;
    let standard = Basis {
        label: BasisLabel::Infinity,
        vectors: (0..k).map(|i| CodeVec::unit(k, i)).collect(),
    };
    let ms: Vec<Fe> = ctx.elements().collect();
    let mut bases = vec![standard];
    bases.extend(
        ms.par_iter()
            .map(|&m| mub_basis(ctx, &table, m))
            .collect::<Vec<_>>(),
    );
    Ok(MubSet { dim: k, bases })
}

/// A pair of vectors `(basis index, vector index)` and its deviation from the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDeviation {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub value: Rational,
    pub target: Rational,
}

impl PairDeviation {
    pub fn deviation(&self) -> Rational {
        if self.value > self.target {
            self.value - self.target
        } else {
            self.target - self.value
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MubReport {
    pub ok: bool,
    pub bases: usize,
    pub dim: usize,
    pub within_pairs: u64,
    pub cross_pairs: u64,
    /// Largest `| |<x,y>|^2 - target |` over all pairs (zero when `ok`).
    pub worst: Option<PairDeviation>,
}

/// Checks orthonormality within each basis and `|<x, y>|^2 = 1 / dim` across bases.
pub fn verify_mub(set: &MubSet) -> MubReport {
    let dim = set.dim;
    let unbiased = Ratio::new(1, dim as u64);
    let flat: Vec<(usize, usize, &CodeVec)> = set
        .bases
        .iter()
        .enumerate()
        .flat_map(|(bi, b)| b.vectors.iter().enumerate().map(move |(vi, v)| (bi, vi, v)))
        .collect();
    let total = flat.len();
    let worst = (0..total)
        .into_par_iter()
        .map(|i| {
            let (bi, vi, x) = flat[i];
            let mut local: Option<PairDeviation> = None;
            let mut counts = (0u64, 0u64);
            for &(bj, vj, y) in &flat[i..] {
                let target = if bi != bj {
                    counts.1 += 1;
                    unbiased
                } else if vi == vj {
                    Ratio::from_integer(1)
                } else {
                    counts.0 += 1;
                    Ratio::from_integer(0)
                };
                let dev = PairDeviation {
                    first: (bi, vi),
                    second: (bj, vj),
                    value: x.inner_abs_sq(y),
                    target,
                };
                // a within-basis pair must also be exactly orthogonal, not just small
                let bad_phase = bi == bj && vi != vj && x.inner_numerator(y) != GaussInt::ZERO;
                if (dev.deviation() > Ratio::from_integer(0) || bad_phase)
                    && local
                        .as_ref()
                        .is_none_or(|w| dev.deviation() > w.deviation())
                {
                    local = Some(dev);
                }
            }
            (local, counts)
        })
        .reduce(
            || (None, (0, 0)),
            |(a, ca), (b, cb)| {
                let pick = match (a, b) {
                    (None, x) | (x, None) => x,
                    (Some(x), Some(y)) => {
                        let keep_x = x.deviation() > y.deviation()
                            || (x.deviation() == y.deviation()
                                && (x.first, x.second) <= (y.first, y.second));
                        Some(if keep_x { x } else { y })
                    }
                };
                (pick, (ca.0 + cb.0, ca.1 + cb.1))
            },
        );
    let (worst, (within_pairs, cross_pairs)) = worst;
    MubReport {
        ok: worst.is_none() && set.bases.len() == dim + 1,
        bases: set.bases.len(),
        dim,
        within_pairs,
        cross_pairs,
        worst,
    }
}

/// The union of all bases: an `(2^(2n) + 2^n, 2^n)` codebook.
pub fn codebook_from_function(f: &DoQuad) -> Result<Codebook> {
    Ok(mub_from_function(f)?.to_codebook())
}

// ---------------------------------------------------------------------------
// codebook from the difference set

/// `chi_y(x) = i^(tr_R(y x))`, the additive characters of R.
pub fn character(ctx: &FieldCtx, y: GrElem, x: GrElem) -> Z4 {
    tr_r(ctx, gr_mul(ctx, y, x))
}

/// One codeword `(chi_y(d_0), .., chi_y(d_(k-1))) / sqrt(k)` per `y` in R, then the standard basis.
pub fn rds_codebook(ctx: &FieldCtx, d: &[GrElem]) -> Result<Codebook> {
    check_signal_size(ctx)?;
    if !verify_rds(ctx, d)?.is_rds {
        return Err(Error::NotRds);
    }
    let k = d.len();
    let n = ctx.n();
    let ys: Vec<GrElem> = (0..k * k).map(|i| GrElem::from_index(i, n)).collect();
    let mut vectors: Vec<CodeVec> = ys
        .par_iter()
        .map(|&y| CodeVec::phases(d.iter().map(|&x| character(ctx, y, x)), k as u64))
        .collect();
    vectors.extend((0..k).map(|i| CodeVec::unit(k, i)));
    Codebook::new(k, vectors)
}

// ---------------------------------------------------------------------------
// sensing matrices

/// A `K x N` measurement matrix whose columns are the codebook vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensingMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<CodeVec>,
    /// Squared coherence: the largest `|<a_i, a_j>|^2` between distinct unit columns.
    pub coherence_sq: Rational,
}

impl SensingMatrix {
    pub fn coherence(&self) -> f64 {
        ratio_f64(self.coherence_sq).sqrt()
    }

    /// Entry at row `r`, column `c`.
    pub fn entry(&self, r: usize, c: usize) -> (f64, f64) {
        self.columns[c].entry_f64(r)
    }
}

pub fn sensing_matrix(cb: &Codebook) -> SensingMatrix {
    SensingMatrix {
        rows: cb.dim,
        cols: cb.len(),
        columns: cb.vectors.clone(),
        coherence_sq: cb.imax_sq(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::rds_from_function;
    use std::sync::Arc;

    fn x6_x10() -> DoQuad {
        let ctx = Arc::new(FieldCtx::new(3, None).unwrap());
        DoQuad::from_terms(ctx, [((1, 2), Fe::ONE), ((1, 3), Fe::ONE)]).unwrap()
    }

    fn zero(n: u32) -> DoQuad {
        DoQuad::zero(Arc::new(FieldCtx::new(n, None).unwrap()))
    }

    #[test]
    fn gaussian_integers() {
        let i = GaussInt::omega(Z4::new(1));
        assert_eq!(i * i, GaussInt::omega(Z4::new(2)));
        assert_eq!(i * i.conj(), GaussInt::ONE);
        assert_eq!(GaussInt::new(3, 4).norm_sq(), 25);
    }

    #[test]
    fn bounds() {
        assert_eq!(levenstein_bound_sq(72, 8).unwrap(), Ratio::new(1, 8));
        assert_eq!(levenstein_bound_sq(6, 2).unwrap(), Ratio::new(1, 2));
        assert_eq!(
            levenstein_bound_sq(64, 8),
            Err(Error::BoundHypothesis { n: 64, k: 8 })
        );
        assert!((levenstein_bound(72, 8).unwrap() - (0.125f64).sqrt()).abs() < 1e-15);
        assert_eq!(welch_bound_sq(72, 8).unwrap(), Ratio::new(64, 568));
        assert!(welch_bound(72, 8).unwrap() < levenstein_bound(72, 8).unwrap());
    }

    #[test]
    fn mub_n3_example() {
        let f = x6_x10();
        let set = mub_from_function(&f).unwrap();
        assert_eq!(set.bases.len(), 9);
        assert_eq!(set.bases[0].label, BasisLabel::Infinity);
        let report = verify_mub(&set);
        assert!(report.ok, "{report:?}");
        assert_eq!(report.cross_pairs, 2304);
        assert_eq!(report.within_pairs, 9 * 28);
        // B_0 is the character basis of GF(8) and contains the all-ones vector
        let all_ones = CodeVec::phases(std::iter::repeat_n(Z4::new(0), 8), 8);
        assert!(set.bases[1].vectors.contains(&all_ones));
    }

    #[test]
    fn mub_rejects_non_planar() {
        let ctx = Arc::new(FieldCtx::new(3, None).unwrap());
        let cube = DoQuad::from_terms(ctx, [((0, 1), Fe::ONE)]).unwrap();
        assert_eq!(mub_from_function(&cube), Err(Error::NotPseudoPlanar));
    }

    #[test]
    fn perturbed_entry_is_named() {
        let mut set = mub_from_function(&x6_x10()).unwrap();
        let e = &mut set.bases[3].vectors[2].entries[5];
        *e = *e * GaussInt::omega(Z4::new(1));
        let report = verify_mub(&set);
        assert!(!report.ok);
        let w = report.worst.unwrap();
        assert!(w.first == (3, 2) || w.second == (3, 2), "{w:?}");
    }

    #[test]
    fn n1_by_hand() {
        let set = mub_from_function(&zero(1)).unwrap();
        assert_eq!(set.bases.len(), 3);
        assert!(verify_mub(&set).ok);
        // B_0 = {(1,1), (1,-1)}/sqrt2 and B_1 = {(1,i), (1,-i)}/sqrt2
        let v = |a: i64, b: i64, c: i64, d: i64| CodeVec {
            entries: vec![GaussInt::new(a, b), GaussInt::new(c, d)],
            denom_sq: 2,
        };
        assert_eq!(set.bases[1].vectors, vec![v(1, 0, 1, 0), v(1, 0, -1, 0)]);
        let mut b1 = set.bases[2].vectors.clone();
        b1.sort();
        let mut expect = vec![v(1, 0, 0, 1), v(1, 0, 0, -1)];
        expect.sort();
        assert_eq!(b1, expect);
        let cb = set.to_codebook();
        assert_eq!((cb.len(), cb.dim), (6, 2));
        assert_eq!(cb.imax_sq(), Ratio::new(1, 2));
        assert!(meets_levenstein(&cb).unwrap());
    }

    #[test]
    fn codebook_n3() {
        let cb = codebook_from_function(&x6_x10()).unwrap();
        assert_eq!((cb.len(), cb.dim), (72, 8));
        assert!(cb.all_unit_norm());
        assert_eq!(cb.imax_sq(), Ratio::new(1, 8));
        assert!(meets_levenstein(&cb).unwrap());
        let alphabet: Vec<String> = cb.alphabet().iter().map(|a| a.to_string()).collect();
        assert_eq!(alphabet.len(), 6, "{alphabet:?}");
        for s in [
            "0",
            "1",
            "1/sqrt(8)",
            "-1/sqrt(8)",
            "i/sqrt(8)",
            "-i/sqrt(8)",
        ] {
            assert!(alphabet.contains(&s.to_string()), "{s}");
        }
        let m = sensing_matrix(&cb);
        assert_eq!((m.rows, m.cols), (8, 72));
        assert!((m.coherence() - (0.125f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sensing_matrix_trivial_cases() {
        let id = Codebook::new(4, (0..4).map(|i| CodeVec::unit(4, i)).collect()).unwrap();
        assert_eq!(sensing_matrix(&id).coherence_sq, Ratio::from_integer(0));
        let dup = Codebook::new(4, vec![CodeVec::unit(4, 1), CodeVec::unit(4, 1)]).unwrap();
        assert_eq!(sensing_matrix(&dup).coherence(), 1.0);
    }

    #[test]
    fn rds_codebook_equals_mub_codebook() {
        for f in [zero(1), zero(2), x6_x10()] {
            let ctx = f.ctx();
            let d = rds_from_function(&f).unwrap();
            let a = rds_codebook(ctx, &d).unwrap();
            let b = codebook_from_function(&f).unwrap();
            assert_eq!(a.sorted_vectors(), b.sorted_vectors());
            assert_eq!(a.gram_spectrum(), b.gram_spectrum());
            // y = 0 gives the constant vector
            assert!(a.vectors[0].entries.iter().all(|&e| e == GaussInt::ONE));
        }
        let ctx = FieldCtx::new(3, None).unwrap();
        let mut not_rds: Vec<GrElem> = ctx.elements().map(GrElem::teich).collect();
        not_rds[3] = GrElem::new(not_rds[3].a, Fe::ONE);
        assert_eq!(rds_codebook(&ctx, &not_rds), Err(Error::NotRds));
    }

    #[test]
    fn exponent_matches_ring_arithmetic() {
        use crate::gring::gr_add;
        for n in 1..=4 {
            let ctx = FieldCtx::new(n, None).unwrap();
            // any table works; the identity is pointwise
            let f = |w: Fe| ctx.pow(w, 3) + w;
            for m in ctx.elements() {
                for w in ctx.elements() {
                    for v in ctx.elements() {
                        let (tm, tw) = (GrElem::teich(m), GrElem::teich(w));
                        // t(m) (t(w)^2 + 2 t(F(w))) + 2 t(v) t(w)
                        let inner = gr_add(&ctx, gr_mul(&ctx, tw, tw), GrElem::twice(f(w)));
                        let x = gr_add(
                            &ctx,
                            gr_mul(&ctx, tm, inner),
                            gr_mul(&ctx, GrElem::twice(v), tw),
                        );
                        assert_eq!(mub_exponent(&ctx, m, v, w, f(w)), tr_r(&ctx, x));
                    }
                }
            }
        }
    }

    #[test]
    fn characters_are_orthogonal() {
        for n in 1..=3 {
            let ctx = FieldCtx::new(n, None).unwrap();
            let all: Vec<GrElem> = (0..1usize << (2 * n))
                .map(|i| GrElem::from_index(i, n))
                .collect();
            let rows: Vec<CodeVec> = all
                .iter()
                .map(|&y| CodeVec::phases(all.iter().map(|&x| character(&ctx, y, x)), 1))
                .collect();
            for (i, r) in rows.iter().enumerate() {
                for (j, s) in rows.iter().enumerate() {
                    let ip = r.inner_numerator(s);
                    let expect = if i == j { all.len() as i64 } else { 0 };
                    assert_eq!(ip, GaussInt::new(expect, 0));
                }
            }
        }
    }
}
