//! Independent model of GR(4^n): Z4[x] modulo the coefficient-wise lift of the
//! defining polynomial of GF(2^n). Elements are coefficient vectors.

use ppf_core::gring::{GrElem, Z4};
use ppf_core::{Fe, FieldCtx};

/// Z4[x] / (f~) with f~ the coefficient-wise lift of the binary polynomial.
pub struct Model {
    pub n: usize,
    modulus: Vec<u8>,
}

pub type Poly = Vec<u8>;

impl Model {
    pub fn new(ctx: &FieldCtx) -> Model {
        let n = ctx.n() as usize;
        let modulus = (0..=n).map(|i| ((ctx.poly() >> i) & 1) as u8).collect();
        Model { n, modulus }
    }

    pub fn lift(&self, u: Fe) -> Poly {
        (0..self.n).map(|i| ((u.0 >> i) & 1) as u8).collect()
    }

    pub fn add(&self, x: &Poly, y: &Poly) -> Poly {
        x.iter().zip(y).map(|(a, b)| (a + b) % 4).collect()
    }

    pub fn scale(&self, k: u8, x: &Poly) -> Poly {
        x.iter().map(|a| (a * k) % 4).collect()
    }

    pub fn mul(&self, x: &Poly, y: &Poly) -> Poly {
        let n = self.n;
        let mut prod = vec![0u32; 2 * n];
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] += (a * b) as u32;
            }
        }
        for d in (n..2 * n).rev() {
            let c = prod[d] % 4;
            if c == 0 {
                continue;
            }
            // subtract c * x^(d-n) * f~
            for (k, &m) in self.modulus.iter().enumerate() {
                prod[d - n + k] += 4 * 4 - c * m as u32;
            }
        }
        prod[..n].iter().map(|&v| (v % 4) as u8).collect()
    }

    pub fn pow2k(&self, x: &Poly, k: usize) -> Poly {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.mul(&y, &y);
        }
        y
    }

    /// `t(u) = U^(2^n)` for any lift `U` of `u`.
    pub fn teich(&self, u: Fe) -> Poly {
        self.pow2k(&self.lift(u), self.n)
    }

    pub fn embed(&self, x: GrElem) -> Poly {
        self.add(&self.teich(x.a), &self.scale(2, &self.teich(x.b)))
    }

    /// Decomposes `x = t(a) + 2 t(b)`.
    pub fn coords(&self, x: &Poly) -> GrElem {
        let a = Fe(x
            .iter()
            .enumerate()
            .map(|(i, &c)| ((c & 1) as u32) << i)
            .sum());
        let ta = self.teich(a);
        let diff: Poly = x.iter().zip(&ta).map(|(p, t)| (p + 4 - t) % 4).collect();
        assert!(diff.iter().all(|c| c % 2 == 0));
        let b = Fe(diff
            .iter()
            .enumerate()
            .map(|(i, &c)| (((c / 2) & 1) as u32) << i)
            .sum());
        GrElem::new(a, b)
    }

    /// Trace of the Z4-linear map `y -> x y` in the basis `1, x, .., x^(n-1)`.
    pub fn module_trace(&self, x: &Poly) -> Z4 {
        let mut tr = 0i64;
        for i in 0..self.n {
            let mut e = vec![0u8; self.n];
            e[i] = 1;
            tr += self.mul(x, &e)[i] as i64;
        }
        Z4::new(tr)
    }
}
