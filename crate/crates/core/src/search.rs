//! Exhaustive searches over coefficient spaces whose pseudo-planarity test is
//! GF(2)-affine in the coefficients.
//!
//! For the t = 3 trinomials and the general t = 2 family, `det M_b` splits as
//! `N(b) + sum_s T_s(b, c_s)` with every term in GF(q) and `T_s` additive in
//! `c_s`. A candidate `(c_0, .., c_{k-1})` is pseudo-planar iff that sum is
//! nonzero for every `b != 0`. Values are mapped to GF(2)-coordinates in GF(q)
//! so the sum becomes an XOR of small integers. For each prefix (all slots but
//! the last) the scanner unions precomputed bitsets `{c : T_last(b, c) = x}`
//! over `b`; the members are the complement.
//!
//! Candidates are ordered lexicographically by slot encodings, last slot
//! fastest, and the prefix index space `[0, size^(k-1))` is what ranges and
//! checkpoints refer to.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{Fe, FieldCtx};

/// Contribution of one coefficient slot, as a function of (b, c).
type SlotFn<'a> = Box<dyn Fn(Fe, Fe) -> Fe + Sync + 'a>;

/// Which coefficient space to scan.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SearchKind {
    /// `c1 x^(q+1) + c2 x^(q^2+q) + c3 x^(q^2+1)` over GF(2^(3m)).
    TrinomialT3,
    /// `sum_{i<m} c_i x^(2^(m+i) + 2^i)` over GF(2^(2m)).
    T2General,
}

impl SearchKind {
    pub fn name(self) -> &'static str {
        match self {
            SearchKind::TrinomialT3 => "trinomial-t3",
            SearchKind::T2General => "t2-general",
        }
    }

    pub fn t(self) -> u32 {
        match self {
            SearchKind::TrinomialT3 => 3,
            SearchKind::T2General => 2,
        }
    }

    /// Largest `m` that runs without an explicit long-run acknowledgment.
    pub fn default_max_m(self) -> u32 {
        match self {
            SearchKind::TrinomialT3 => 2,
            SearchKind::T2General => 3,
        }
    }
}

/// A scan over one coefficient space, with all per-`b` tables precomputed.
pub struct AffineScan {
    kind: SearchKind,
    slots: usize,
    size: usize,
    nb: usize,
    words: usize,
    target: Vec<u16>,
    // tables[s][b * size + c]
    tables: Vec<Vec<u16>>,
    // pre[(b * q + x) * words ..]: bitset of last-slot values c with T_last(b, c) = x
    pre: Vec<u64>,
    q: usize,
}

/// Count and (optionally) members found in a prefix range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RangeResult {
    pub count: u64,
    pub members: Vec<Vec<Fe>>,
}

impl RangeResult {
    fn merge(mut self, other: RangeResult) -> RangeResult {
        self.count += other.count;
        self.members.extend(other.members);
        self
    }
}

/// GF(2)-linear coordinates of GF(2^m) inside GF(2^n).
fn subfield_coordinates(ctx: &FieldCtx, m: u32) -> Result<Vec<u16>> {
    let elems = ctx.subfield_elements(m)?;
    let mut basis: Vec<Fe> = Vec::new();
    let mut span: Vec<Fe> = vec![Fe::ZERO];
    for &e in &elems {
        if span.contains(&e) {
            continue;
        }
        let extra: Vec<Fe> = span.iter().map(|&s| s + e).collect();
        span.extend(extra);
        basis.push(e);
    }
    debug_assert_eq!(basis.len() as u32, m);
    let mut coord = vec![u16::MAX; ctx.size() as usize];
    for mask in 0..(1usize << m) {
        let v = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(Fe::ZERO, |acc, (_, &b)| acc + b);
        coord[v.0 as usize] = mask as u16;
    }
    Ok(coord)
}

impl AffineScan {
    /// Precomputes the tables for the field's split (`t` must match `kind`).
    pub fn new(ctx: &FieldCtx, kind: SearchKind) -> Result<AffineScan> {
        let s = ctx.require_t(kind.t())?;
        if s.m > 8 {
            return Err(Error::TooLarge {
                what: "affine coefficient scan",
                n: ctx.n(),
                limit: 8 * kind.t(),
            });
        }
        let (n, m) = (ctx.n(), s.m);
        let coord = subfield_coordinates(ctx, m)?;
        let size = ctx.size() as usize;
        let bs: Vec<Fe> = ctx.powers_of_generator().collect();
        let nb = bs.len();
        let qf = |x: Fe, k: u32| ctx.frob(x, k * m);
        let to_coord = |v: Fe| -> u16 {
            let c = coord[v.0 as usize];
            debug_assert!(c != u16::MAX, "value {v:?} outside GF(q)");
            c
        };

        let (target, per_slot): (Vec<u16>, Vec<SlotFn<'_>>) = match kind {
            SearchKind::TrinomialT3 => {
                // b^(q^2+q+1) + tr_{n/m}(c1^2 b^(q^2+2) + c2^2 b^3 + c3^2 b^(q+2))
                let target = bs
                    .iter()
                    .map(|&b| to_coord(ctx.mul(ctx.mul(b, qf(b, 1)), qf(b, 2))))
                    .collect();
                let tr = move |x: Fe| ctx.trace_unchecked(x, m);
                let slot1 = move |b: Fe, c: Fe| {
                    tr(ctx.mul(ctx.square(c), ctx.mul(ctx.frob(b, 2 * m), ctx.square(b))))
                };
                let slot2 =
                    move |b: Fe, c: Fe| tr(ctx.mul(ctx.square(c), ctx.mul(ctx.square(b), b)));
                let slot3 = move |b: Fe, c: Fe| {
                    tr(ctx.mul(ctx.square(c), ctx.mul(ctx.frob(b, m), ctx.square(b))))
                };
                (
                    target,
                    vec![Box::new(slot1), Box::new(slot2), Box::new(slot3)],
                )
            }
            SearchKind::T2General => {
                // b^(q+1) + A_1^2 = 0  iff  A_1 = sqrt(b^(q+1)),
                // A_1 = sum_i (c_i b)^(2^(n-i)) + (c_i b)^(2^(m-i))
                let target = bs
                    .iter()
                    .map(|&b| to_coord(ctx.sqrt(ctx.mul(b, qf(b, 1)))))
                    .collect();
                let slots: Vec<Box<dyn Fn(Fe, Fe) -> Fe + Sync + '_>> = (0..m)
                    .map(|i| {
                        Box::new(move |b: Fe, c: Fe| {
                            let cb = ctx.mul(c, b);
                            ctx.frob(cb, n - i) + ctx.frob(cb, m - i)
                        }) as Box<dyn Fn(Fe, Fe) -> Fe + Sync + '_>
                    })
                    .collect();
                (target, slots)
            }
        };

        let tables: Vec<Vec<u16>> = per_slot
            .iter()
            .map(|f| {
                bs.par_iter()
                    .flat_map_iter(|&b| (0..size).map(move |c| to_coord(f(b, Fe(c as u32)))))
                    .collect()
            })
            .collect();

        let q = 1usize << m;
        let words = size.div_ceil(64);
        let last = tables.last().expect("at least one slot");
        let mut pre = vec![0u64; nb * q * words];
        pre.par_chunks_mut(q * words)
            .enumerate()
            .for_each(|(b, chunk)| {
                for c in 0..size {
                    let x = last[b * size + c] as usize;
                    chunk[x * words + c / 64] |= 1u64 << (c % 64);
                }
            });

        Ok(AffineScan {
            kind,
            slots: per_slot.len(),
            size,
            nb,
            words,
            target,
            tables,
            pre,
            q,
        })
    }

    pub fn kind(&self) -> SearchKind {
        self.kind
    }

    /// Number of coefficient slots.
    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Number of prefixes, `size^(slots-1)`.
    pub fn prefix_count(&self) -> u64 {
        (self.size as u64).pow(self.slots as u32 - 1)
    }

    /// Total number of candidates.
    pub fn candidate_count(&self) -> u64 {
        (self.size as u64).pow(self.slots as u32)
    }

    fn prefix_values(&self, mut p: u64) -> Vec<usize> {
        let mut vals = vec![0usize; self.slots - 1];
        for v in vals.iter_mut().rev() {
            *v = (p % self.size as u64) as usize;
            p /= self.size as u64;
        }
        vals
    }

    /// Scans prefixes `lo..hi` on the current thread.
    pub fn scan_prefixes(&self, lo: u64, hi: u64, collect: bool) -> RangeResult {
        let mut out = RangeResult::default();
        let mut x = vec![0u16; self.nb];
        let mut bad = vec![0u64; self.words];
        let full_tail = self.size % 64;
        for p in lo..hi {
            let vals = self.prefix_values(p);
            x.copy_from_slice(&self.target);
            for (s, &c) in vals.iter().enumerate() {
                let table = &self.tables[s];
                for (b, xb) in x.iter_mut().enumerate() {
                    *xb ^= table[b * self.size + c];
                }
            }
            bad.iter_mut().for_each(|w| *w = 0);
            let mut full = false;
            for (b, &xb) in x.iter().enumerate() {
                let off = (b * self.q + xb as usize) * self.words;
                let row = &self.pre[off..off + self.words];
                for (w, r) in bad.iter_mut().zip(row) {
                    *w |= r;
                }
                if b % 16 == 15 && is_full(&bad, full_tail) {
                    full = true;
                    break;
                }
            }
            if full {
                continue;
            }
            for (wi, &w) in bad.iter().enumerate() {
                let mut good = !w;
                if wi == self.words - 1 && full_tail != 0 {
                    good &= (1u64 << full_tail) - 1;
                }
                out.count += good.count_ones() as u64;
                if collect {
                    while good != 0 {
                        let bit = good.trailing_zeros() as usize;
                        good &= good - 1;
                        let mut member: Vec<Fe> = vals.iter().map(|&v| Fe(v as u32)).collect();
                        member.push(Fe((wi * 64 + bit) as u32));
                        out.members.push(member);
                    }
                }
            }
        }
        out
    }

    /// Scans prefixes `lo..hi` in parallel chunks; listings stay in candidate order.
    pub fn scan_range(&self, lo: u64, hi: u64, collect: bool) -> RangeResult {
        const CHUNK: u64 = 64;
        let chunks: Vec<(u64, u64)> = (lo..hi)
            .step_by(CHUNK as usize)
            .map(|s| (s, (s + CHUNK).min(hi)))
            .collect();
        chunks
            .par_iter()
            .map(|&(a, b)| self.scan_prefixes(a, b, collect))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(RangeResult::default(), RangeResult::merge)
    }

    /// The whole space.
    pub fn run(&self, collect: bool) -> RangeResult {
        self.scan_range(0, self.prefix_count(), collect)
    }

    /// Direct test of one candidate against every `b`.
    pub fn is_member(&self, coeffs: &[Fe]) -> bool {
        assert_eq!(coeffs.len(), self.slots);
        (0..self.nb).all(|b| {
            let mut x = self.target[b];
            for (s, c) in coeffs.iter().enumerate() {
                x ^= self.tables[s][b * self.size + c.0 as usize];
            }
            x != 0
        })
    }
}

fn is_full(bits: &[u64], tail: usize) -> bool {
    let (last, body) = bits.split_last().expect("nonempty bitset");
    body.iter().all(|&w| w == u64::MAX)
        && if tail == 0 {
            *last == u64::MAX
        } else {
            *last == (1u64 << tail) - 1
        }
}
