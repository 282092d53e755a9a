//! Commutative presemifields `x * y = xy + F(x+y) + F(x) + F(y)` and the
//! semifields isotopic to them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{Fe, FieldCtx};
use crate::planar::DoQuad;

/// Largest `n` for which presemifields are checked and semifield tables built.
pub const TABLE_LIMIT: u32 = 10;
/// Largest `n` for the `O(2^(3n))` associativity and nucleus scans.
pub const SCAN_LIMIT: u32 = 9;

/// `x * y = xy + F(x+y) + F(x) + F(y)`.
pub fn star(f: &DoQuad, x: Fe, y: Fe) -> Fe {
    let ctx = f.ctx();
    ctx.mul(x, y) + f.eval(x + y) + f.eval(x) + f.eval(y)
}

/// `*` backed by a value table of `F`, with no zero divisors.
#[derive(Clone, Debug)]
pub struct PresemifieldOp {
    f: DoQuad,
    table: Vec<Fe>,
}

impl PresemifieldOp {
    /// Rejects `F` whose product has zero divisors (`F` not pseudo-planar).
    pub fn new(f: &DoQuad) -> Result<PresemifieldOp> {
        guard(f.ctx(), TABLE_LIMIT, "presemifield zero-divisor check")?;
        let op = PresemifieldOp {
            f: f.clone(),
            table: f.table()?,
        };
        if op.zero_divisor().is_some() {
            return Err(Error::NotPseudoPlanar);
        }
        Ok(op)
    }

    pub fn function(&self) -> &DoQuad {
        &self.f
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.f.ctx()
    }

    pub fn star(&self, x: Fe, y: Fe) -> Fe {
        let t = &self.table;
        self.ctx().mul(x, y) + t[(x + y).0 as usize] + t[x.0 as usize] + t[y.0 as usize]
    }

    /// Some `(x, y)`, both nonzero, with `x * y = 0`.
    pub fn zero_divisor(&self) -> Option<(Fe, Fe)> {
        let ctx = self.ctx();
        let xs: Vec<Fe> = ctx.nonzero().collect();
        xs.par_iter().find_map_first(|&x| {
            ctx.nonzero()
                .find(|&y| self.star(x, y).is_zero())
                .map(|y| (x, y))
        })
    }
}

fn guard(ctx: &FieldCtx, limit: u32, what: &'static str) -> Result<()> {
    if ctx.n() > limit {
        return Err(Error::TooLarge {
            what,
            n: ctx.n(),
            limit,
        });
    }
    Ok(())
}

/// Full multiplication table of a semifield on GF(2^n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemifieldTable {
    n: u32,
    identity: Fe,
    /// `table[x * 2^n + y] = x o y`.
    table: Vec<Fe>,
}

impl SemifieldTable {
    /// `x o y = x y` in GF(2^n).
    pub fn field(ctx: &FieldCtx) -> Result<SemifieldTable> {
        guard(ctx, TABLE_LIMIT, "semifield table")?;
        let q = ctx.size() as usize;
        let table = (0..q * q)
            .into_par_iter()
            .map(|i| ctx.mul(Fe((i / q) as u32), Fe((i % q) as u32)))
            .collect();
        Ok(SemifieldTable {
            n: ctx.n(),
            identity: Fe::ONE,
            table,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn identity(&self) -> Fe {
        self.identity
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        self.table[((x.0 as usize) << self.n) | y.0 as usize]
    }

    fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.size() as u32).map(Fe)
    }

    pub fn is_commutative(&self) -> bool {
        let els: Vec<Fe> = self.elements().collect();
        els.par_iter()
            .all(|&x| self.elements().all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Both distributive laws and the identity axioms, exhaustively.
    pub fn check_axioms(&self) -> bool {
        let e = self.identity;
        let els: Vec<Fe> = self.elements().collect();
        els.par_iter().all(|&x| {
            self.mul(e, x) == x
                && self.mul(x, e) == x
                && self.elements().all(|y| {
                    self.elements().all(|z| {
                        self.mul(x, y + z) == self.mul(x, y) + self.mul(x, z)
                            && self.mul(y + z, x) == self.mul(y, x) + self.mul(z, x)
                    })
                })
        })
    }

    /// A triple with `(a o x) o y != a o (x o y)`, if any.
    pub fn associativity_witness(&self) -> Result<Option<(Fe, Fe, Fe)>> {
        self.scan_guard()?;
        let els: Vec<Fe> = self.elements().collect();
        Ok(els.par_iter().find_map_first(|&a| {
            self.elements().find_map(|x| {
                let ax = self.mul(a, x);
                self.elements()
                    .find(|&y| self.mul(ax, y) != self.mul(a, self.mul(x, y)))
                    .map(|y| (a, x, y))
            })
        }))
    }

    pub fn is_associative(&self) -> Result<bool> {
        Ok(self.associativity_witness()?.is_none())
    }

    fn scan_guard(&self) -> Result<()> {
        if self.n > SCAN_LIMIT {
            return Err(Error::TooLarge {
                what: "semifield associativity scan",
                n: self.n,
                limit: SCAN_LIMIT,
            });
        }
        Ok(())
    }

    /// Left, middle and right nuclei by exhaustive scan; each is checked to be a
    /// subfield (closed under `+` and `o`, size a power of two).
    pub fn nuclei(&self) -> Result<Nuclei> {
        self.scan_guard()?;
        let assoc =
            |a: Fe, b: Fe, c: Fe| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        let left = self.nucleus(assoc)?;
        let middle = self.nucleus(|a, x, y| assoc(x, a, y))?;
        let right = self.nucleus(|a, x, y| assoc(x, y, a))?;
        Ok(Nuclei {
            left,
            middle,
            right,
        })
    }

    fn nucleus(&self, holds: impl Fn(Fe, Fe, Fe) -> bool + Sync) -> Result<Nucleus> {
        let els: Vec<Fe> = self.elements().collect();
        let flags: Vec<bool> = els
            .par_iter()
            .map(|&a| {
                self.elements()
                    .all(|x| self.elements().all(|y| holds(a, x, y)))
            })
            .collect();
        let nucleus = Nucleus::from_flags(&flags);
        let closed = nucleus.members().all(|a| {
            nucleus
                .members()
                .all(|b| nucleus.contains(a + b) && nucleus.contains(self.mul(a, b)))
        });
        if !closed || !nucleus.size().is_power_of_two() {
            return Err(Error::Invalid(format!(
                "nucleus of size {} is not a subfield",
                nucleus.size()
            )));
        }
        Ok(nucleus)
    }
}

/// A subset of GF(2^n) as a bitset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nucleus {
    bits: Vec<u64>,
    len: usize,
}

impl Nucleus {
    fn from_flags(flags: &[bool]) -> Nucleus {
        let mut bits = vec![0u64; flags.len().div_ceil(64)];
        for (i, _) in flags.iter().enumerate().filter(|(_, &f)| f) {
            bits[i / 64] |= 1 << (i % 64);
        }
        Nucleus {
            bits,
            len: flags.len(),
        }
    }

    pub fn contains(&self, x: Fe) -> bool {
        let i = x.0 as usize;
        i < self.len && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn size(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Degree `k` with `size = 2^k`.
    pub fn degree(&self) -> u32 {
        self.size().trailing_zeros()
    }

    pub fn members(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.len as u32).map(Fe).filter(|&x| self.contains(x))
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nuclei {
    pub left: Nucleus,
    pub middle: Nucleus,
    pub right: Nucleus,
}

impl Nuclei {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.left.size(), self.middle.size(), self.right.size())
    }
}

/// `x o y = R^-1(x) * L^-1(y)` with `R(u) = u * e`, `L(v) = e * v`; the identity is `e * e`.
pub fn derive_semifield(f: &DoQuad, e: Fe) -> Result<SemifieldTable> {
    if e.is_zero() {
        return Err(Error::Zero("semifield element e"));
    }
    let op = PresemifieldOp::new(f)?;
    let ctx = op.ctx();
    let q = ctx.size() as usize;
    let invert = |g: &dyn Fn(Fe) -> Fe| -> Result<Vec<Fe>> {
        let mut inv = vec![None; q];
        for u in ctx.elements() {
            let slot = &mut inv[g(u).0 as usize];
            if slot.is_some() {
                return Err(Error::NotPseudoPlanar);
            }
            *slot = Some(u);
        }
        Ok(inv
            .into_iter()
            .map(|u| u.expect("a bijection of a finite set"))
            .collect())
    };
    let r_inv = invert(&|u| op.star(u, e))?;
    let l_inv = invert(&|v| op.star(e, v))?;
    let table = (0..q * q)
        .into_par_iter()
        .map(|i| op.star(r_inv[i / q], l_inv[i % q]))
        .collect();
    Ok(SemifieldTable {
        n: ctx.n(),
        identity: op.star(e, e),
        table,
    })
}
