//! Arithmetic in GF(2^n), 1 <= n <= 32, in the polynomial basis.
//!
//! Elements are `u32` bit vectors with bit `i` holding the coefficient of `x^i`
//! modulo the defining polynomial. A [`FieldCtx`] owns the defining polynomial,
//! an optional `(t, m)` split with `n = t * m`, and exp/log tables: built when
//! the context is created for `n <= 16`, on first use for `n <= 20`, and never
//! for larger fields (multiplication then falls back to shift-and-reduce).

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest extension degree for which exp/log tables are ever built.
const TABLE_LIMIT: u32 = 20;
/// Largest extension degree for which tables are built eagerly.
const EAGER_TABLE_LIMIT: u32 = 16;

/// An element of GF(2^n).
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({:#x})", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl std::ops::Add for Fe {
    type Output = Fe;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Fe) -> Fe {
        Fe(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Fe {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Fe) {
        self.0 ^= rhs.0;
    }
}

/// The tower split `n = t * m` with `q = 2^m` and `t >= 2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub t: u32,
    pub m: u32,
}

impl Split {
    /// `q = 2^m`.
    pub fn q(&self) -> u64 {
        1u64 << self.m
    }
}

struct Tables {
    // exp has length 2 * (2^n - 1) so that log a + log b never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A binary field GF(2^n) together with its defining polynomial.
pub struct FieldCtx {
    n: u32,
    poly: u64,
    split: Option<Split>,
    generator: Fe,
    group_order_factors: Vec<u64>,
    tables: OnceLock<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("poly", &format_args!("{:#x}", self.poly))
            .field("split", &self.split)
            .finish()
    }
}

// ---------------------------------------------------------------------------
// GF(2)[x] helpers on u64 (degree <= 63)

/// Carry-less product of two values below 2^32.
#[inline]
pub(crate) fn clmul32(a: u32, b: u32) -> u64 {
    let a = a as u64;
    let mut b = b;
    let mut r = 0u64;
    let mut shift = 0;
    while b != 0 {
        // two bits per step
        let lo = b & 3;
        r ^= match lo {
            0 => 0,
            1 => a << shift,
            2 => a << (shift + 1),
            _ => (a << shift) ^ (a << (shift + 1)),
        };
        b >>= 2;
        shift += 2;
    }
    r
}

#[inline]
fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `m` in GF(2)[x]; `m != 0`.
fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// `a * b mod f` for a monic `f` of degree `n <= 32` and `a, b` reduced.
fn poly_mulmod(a: u64, b: u64, f: u64) -> u64 {
    poly_rem(clmul32(a as u32, b as u32), f)
}

/// Degree of the smallest irreducible factor of `f` (degree `n`).
///
/// The smallest `d` with `gcd(f, x^(2^d) - x) != 1` is exactly that degree.
fn smallest_factor_degree(f: u64, n: u32) -> u32 {
    if n <= 1 {
        return n;
    }
    let x = 0b10u64;
    let mut power = x; // x^(2^d) mod f
    for d in 1..=n / 2 {
        power = poly_mulmod(power, power, f);
        if poly_gcd(f, power ^ x) != 1 {
            return d;
        }
    }
    n
}

fn is_irreducible_poly(f: u64, n: u32) -> bool {
    smallest_factor_degree(f, n) == n
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= v {
        if v.is_multiple_of(p) {
            out.push(p);
            while v.is_multiple_of(p) {
                v /= p;
            }
        }
        p += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

// ---------------------------------------------------------------------------

impl FieldCtx {
    /// Builds GF(2^n). Without `poly`, the defining polynomial is the monic
    /// irreducible of degree `n` with nonzero constant term whose coefficient
    /// vector is the smallest integer.
    pub fn new(n: u32, poly: Option<u64>) -> Result<FieldCtx> {
        if !(1..=32).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        let poly = match poly {
            Some(p) => {
                if p >> n != 1 {
                    return Err(Error::NotMonic { poly: p, n });
                }
                let d = smallest_factor_degree(p, n);
                if d != n {
                    return Err(Error::Reducible {
                        poly: p,
                        factor_degree: d,
                    });
                }
                p
            }
            None => default_poly(n),
        };
        let mut ctx = FieldCtx {
            n,
            poly,
            split: None,
            generator: Fe::ONE,
            group_order_factors: prime_factors((1u64 << n) - 1),
            tables: OnceLock::new(),
        };
        ctx.generator = ctx.find_generator();
        if n <= EAGER_TABLE_LIMIT {
            let _ = ctx.tables();
        }
        Ok(ctx)
    }

    /// Same as [`FieldCtx::new`] with the `(t, m)` split `t = n / m` set.
    pub fn with_split(n: u32, poly: Option<u64>, m: u32) -> Result<FieldCtx> {
        let mut ctx = FieldCtx::new(n, poly)?;
        ctx.set_split(m)?;
        Ok(ctx)
    }

    pub fn set_split(&mut self, m: u32) -> Result<()> {
        if m == 0 || !self.n.is_multiple_of(m) || self.n / m < 2 {
            return Err(Error::BadSplit { n: self.n, m });
        }
        self.split = Some(Split { t: self.n / m, m });
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Defining polynomial, bit `i` = coefficient of `x^i`.
    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn split(&self) -> Option<Split> {
        self.split
    }

    pub fn require_split(&self) -> Result<Split> {
        self.split.ok_or(Error::NoSplit)
    }

    /// Checks the split exists and has the given `t`.
    pub fn require_t(&self, t: u32) -> Result<Split> {
        let s = self.require_split()?;
        if s.t != t {
            return Err(Error::SplitMismatch {
                expected: t,
                found: s.t,
            });
        }
        Ok(s)
    }

    /// Number of field elements, `2^n`.
    #[inline]
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    /// `2^n - 1`.
    #[inline]
    pub fn group_order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// The primitive element with the smallest encoding.
    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size()).map(|v| Fe(v as u32))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> {
        (1..self.size()).map(|v| Fe(v as u32))
    }

    /// Nonzero elements in the order `g^0, g^1, ...` for the generator `g`.
    pub fn powers_of_generator(&self) -> impl Iterator<Item = Fe> + '_ {
        let g = self.generator;
        (0..self.group_order()).scan(Fe::ONE, move |acc, _| {
            let cur = *acc;
            *acc = self.mul(*acc, g);
            Some(cur)
        })
    }

    pub fn has_tables(&self) -> bool {
        self.tables.get().is_some()
    }

    fn tables(&self) -> Option<&Tables> {
        if self.n > TABLE_LIMIT {
            return None;
        }
        Some(self.tables.get_or_init(|| self.build_tables()))
    }

    fn build_tables(&self) -> Tables {
        let order = self.group_order() as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; 1usize << self.n];
        let mut cur = Fe::ONE;
        #[allow(clippy::needless_range_loop)]
        for k in 0..order {
            exp[k] = cur.0;
            log[cur.0 as usize] = k as u32;
            cur = self.mul_shift_reduce(cur, self.generator);
        }
        for k in order..exp.len() {
            exp[k] = exp[k - order];
        }
        Tables { exp, log }
    }

    fn find_generator(&self) -> Fe {
        let order = self.group_order();
        for v in 1..self.size() {
            let x = Fe(v as u32);
            if self
                .group_order_factors
                .iter()
                .all(|&p| self.pow_slow(x, order / p) != Fe::ONE)
            {
                return x;
            }
        }
        Fe::ONE
    }

    fn pow_slow(&self, x: Fe, mut e: u64) -> Fe {
        let mut base = x;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_shift_reduce(acc, base);
            }
            base = self.mul_shift_reduce(base, base);
            e >>= 1;
        }
        acc
    }

    // -- arithmetic -------------------------------------------------------

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 ^ b.0)
    }

    /// Carry-less multiply followed by reduction modulo the defining polynomial.
    pub fn mul_shift_reduce(&self, a: Fe, b: Fe) -> Fe {
        let mut r = clmul32(a.0, b.0);
        let n = self.n as i32;
        while r != 0 {
            let d = degree(r);
            if d < n {
                break;
            }
            r ^= self.poly << (d - n);
        }
        Fe(r as u32)
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match self.tables() {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Fe::ZERO
                } else {
                    let i = t.log[a.0 as usize] + t.log[b.0 as usize];
                    Fe(t.exp[i as usize])
                }
            }
            None => self.mul_shift_reduce(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    /// `x^e`, with `0^0 = 1`.
    pub fn pow(&self, x: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if x.0 == 0 {
            return Fe::ZERO;
        }
        match self.tables() {
            Some(t) => {
                let order = self.group_order();
                let l = t.log[x.0 as usize] as u128;
                let k = (l * (e % order) as u128) % order as u128;
                Fe(t.exp[k as usize])
            }
            None => self.pow_slow(x, e),
        }
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if x.0 == 0 {
            return Err(Error::Zero("inverse"));
        }
        Ok(self.pow(x, self.group_order() - 1))
    }

    /// `a / b`; `b != 0`.
    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The Frobenius power `x^(2^k)`, `k` taken modulo `n`.
    #[inline]
    pub fn frob(&self, x: Fe, k: u32) -> Fe {
        let k = k % self.n;
        if k == 0 || x.0 == 0 {
            return x;
        }
        match self.tables() {
            Some(t) => {
                let order = self.group_order();
                let l = t.log[x.0 as usize] as u64;
                Fe(t.exp[((l << k) % order) as usize])
            }
            None => {
                let mut y = x;
                for _ in 0..k {
                    y = self.mul_shift_reduce(y, y);
                }
                y
            }
        }
    }

    /// The unique square root `x^(2^(n-1))`.
    pub fn sqrt(&self, x: Fe) -> Fe {
        self.frob(x, self.n - 1)
    }

    /// Discrete logarithm to the base of [`FieldCtx::generator`]; needs tables.
    pub fn log(&self, x: Fe) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::Zero("logarithm"));
        }
        let t = self.tables().ok_or(Error::TooLarge {
            what: "discrete logarithm",
            n: self.n,
            limit: TABLE_LIMIT,
        })?;
        Ok(t.log[x.0 as usize] as u64)
    }

    /// Cube root with the least encoding, if `x` is a cube.
    pub fn cube_root(&self, x: Fe) -> Result<Option<Fe>> {
        if x.0 == 0 {
            return Ok(Some(Fe::ZERO));
        }
        let order = self.group_order();
        if !order.is_multiple_of(3) {
            // cubing is a bijection; invert the exponent 3 modulo 2^n - 1
            let inv3 = (1..3u64)
                .map(|k| (k * order + 1) / 3)
                .find(|e| (3 * e) % order == 1)
                .expect("3 is invertible modulo an order prime to 3");
            return Ok(Some(self.pow(x, inv3)));
        }
        let l = self.log(x)?;
        if l % 3 != 0 {
            return Ok(None);
        }
        let r = self.pow(self.generator, l / 3);
        let w = self.pow(self.generator, order / 3);
        let w2 = self.square(w);
        Ok([r, self.mul(r, w), self.mul(r, w2)].into_iter().min())
    }

    fn check_divisor(&self, k: u32) -> Result<()> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return Err(Error::NotDivisor { k, n: self.n });
        }
        Ok(())
    }

    /// `tr_{n/k}(x) = sum_{i < n/k} x^(2^(ik))`.
    pub fn trace(&self, x: Fe, k: u32) -> Result<Fe> {
        self.check_divisor(k)?;
        Ok(self.trace_unchecked(x, k))
    }

    #[inline]
    pub(crate) fn trace_unchecked(&self, x: Fe, k: u32) -> Fe {
        let mut acc = Fe::ZERO;
        for i in 0..self.n / k {
            acc.0 ^= self.frob(x, i * k).0;
        }
        acc
    }

    /// Absolute trace as a bit.
    #[inline]
    pub fn abs_trace(&self, x: Fe) -> u32 {
        self.trace_unchecked(x, 1).0
    }

    /// Relative trace `tr_{d/k}` of an element of the subfield GF(2^d).
    pub fn trace_rel(&self, x: Fe, d: u32, k: u32) -> Result<Fe> {
        self.check_divisor(d)?;
        if k == 0 || !d.is_multiple_of(k) {
            return Err(Error::NotDivisor { k, n: d });
        }
        let mut acc = Fe::ZERO;
        for i in 0..d / k {
            acc.0 ^= self.frob(x, i * k).0;
        }
        Ok(acc)
    }

    /// `N_{n/k}(x) = x^((2^n - 1) / (2^k - 1))`.
    pub fn norm(&self, x: Fe, k: u32) -> Result<Fe> {
        self.check_divisor(k)?;
        Ok(self.pow(x, self.group_order() / ((1u64 << k) - 1)))
    }

    pub fn mult_order(&self, x: Fe) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::Zero("multiplicative order"));
        }
        let mut order = self.group_order();
        for &p in &self.group_order_factors {
            while order.is_multiple_of(p) && self.pow(x, order / p) == Fe::ONE {
                order /= p;
            }
        }
        Ok(order)
    }

    /// True iff `x` lies in the subfield GF(2^k).
    pub fn in_subfield(&self, x: Fe, k: u32) -> Result<bool> {
        self.check_divisor(k)?;
        Ok(self.frob(x, k) == x)
    }

    /// Elements of the subfield GF(2^k), sorted by encoding.
    pub fn subfield_elements(&self, k: u32) -> Result<Vec<Fe>> {
        self.check_divisor(k)?;
        let step = self.group_order() / ((1u64 << k) - 1);
        let h = self.pow(self.generator, step);
        let mut out = Vec::with_capacity(1 << k);
        out.push(Fe::ZERO);
        let mut cur = Fe::ONE;
        for _ in 0..((1u64 << k) - 1) {
            out.push(cur);
            cur = self.mul(cur, h);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Characteristic polynomial of `b` over GF(q) for the configured split.
    pub fn char_poly(&self, b: Fe) -> Result<SubfieldPoly> {
        let s = self.require_split()?;
        // prod_{i<t} (X + b^(q^i)), coefficient vector from the top: [1, B1, ..., Bt]
        let mut coeffs = vec![Fe::ONE];
        for i in 0..s.t {
            let root = self.frob(b, i * s.m);
            let mut next = vec![Fe::ZERO; coeffs.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                next[j] += c;
                next[j + 1] += self.mul(c, root);
            }
            coeffs = next;
        }
        Ok(SubfieldPoly {
            coeffs: coeffs[1..].to_vec(),
        })
    }

    /// Whether the characteristic polynomial of `b` over GF(q) is irreducible,
    /// i.e. `b` lies in no GF(q^r) for a proper divisor `r` of `t`.
    pub fn char_poly_irreducible(&self, b: Fe) -> Result<bool> {
        let s = self.require_split()?;
        Ok((1..s.t)
            .filter(|r| s.t % r == 0)
            .all(|r| self.frob(b, r * s.m) != b))
    }

    /// Whether `x^2 + a x + b` is irreducible over the field, by the trace test.
    pub fn quad_irreducible(&self, a: Fe, b: Fe) -> Result<bool> {
        if a.0 == 0 {
            return Err(Error::Zero("trace test coefficient a"));
        }
        let a2inv = self.inv(self.square(a))?;
        Ok(self.abs_trace(self.mul(b, a2inv)) == 1)
    }

    /// Evaluates a polynomial given by coefficients from the leading term down.
    pub fn horner(&self, coeffs_high_first: &[Fe], x: Fe) -> Fe {
        coeffs_high_first
            .iter()
            .fold(Fe::ZERO, |acc, &c| self.mul(acc, x) + c)
    }

    /// Whether the polynomial (leading coefficient first) has a root in GF(2^k).
    pub fn has_root_in_subfield(&self, coeffs_high_first: &[Fe], k: u32) -> Result<bool> {
        Ok(self
            .subfield_elements(k)?
            .into_iter()
            .any(|x| self.horner(coeffs_high_first, x).is_zero()))
    }

    /// Least-encoding root of a polynomial in the field, if any.
    pub fn least_root(&self, coeffs_high_first: &[Fe]) -> Option<Fe> {
        self.elements()
            .find(|&x| self.horner(coeffs_high_first, x).is_zero())
    }
}

/// Monic least irreducible of degree `n` with nonzero constant term.
fn default_poly(n: u32) -> u64 {
    let top = 1u64 << n;
    (0..top)
        .map(|low| top | low)
        .filter(|p| p & 1 == 1)
        .find(|&p| is_irreducible_poly(p, n))
        .expect("an irreducible polynomial exists in every degree")
}

/// `x^t + B_1 x^(t-1) + ... + B_t` over the subfield GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfieldPoly {
    /// `B_1 .. B_t`.
    pub coeffs: Vec<Fe>,
}

impl SubfieldPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Fe) -> Fe {
        let mut all = Vec::with_capacity(self.coeffs.len() + 1);
        all.push(Fe::ONE);
        all.extend_from_slice(&self.coeffs);
        ctx.horner(&all, x)
    }
}

/// Field description used by the CLI: `n=<int>[,poly=0x<hex>][,m=<int>]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub n: u32,
    pub poly: Option<u64>,
    pub m: Option<u32>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        let mut ctx = FieldCtx::new(self.n, self.poly)?;
        if let Some(m) = self.m {
            ctx.set_split(m)?;
        }
        Ok(ctx)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldSpec> {
        let mut n = None;
        let mut poly = None;
        let mut m = None;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "n" => n = Some(parse_int(value)? as u32),
                "poly" => poly = Some(parse_int(value)?),
                "m" => m = Some(parse_int(value)? as u32),
                other => return Err(Error::Parse(format!("unknown field key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("field spec needs n=<int>".into()))?;
        Ok(FieldSpec { n, poly, m })
    }
}

/// Parses a decimal or `0x`-prefixed hexadecimal integer.
pub fn parse_int(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse::<u64>()
    };
    parsed.map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}
