//! Integer combinations of `m`-th roots of unity.
//!
//! A [`ClassVector`] is an element of `Z[x]/(x^m - 1)`; evaluating at
//! `zeta_m = exp(2 pi i / m)` gives the represented complex number. Whether
//! that number is a rational integer is decided exactly by reducing modulo
//! the cyclotomic polynomial `Phi_m` over the integers.
//!
//! All coefficient arithmetic is checked `i64`; overflow panics.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::Error;

/// `sum_j coeffs[j] x^j` in `Z[x]/(x^m - 1)` with `m = coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassVector {
    coeffs: Vec<i64>,
}

/// Monic integer polynomial `Phi_m`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPoly {
    m: usize,
    coeffs: Vec<i64>,
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("class vector coefficient overflow")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("class vector coefficient overflow")
}

impl ClassVector {
    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "class vector modulus must be at least 1");
        ClassVector { coeffs }
    }

    pub fn zero(m: usize) -> Self {
        Self::from_coeffs(vec![0; m])
    }

    /// `c * x^j`.
    pub fn monomial(m: usize, j: usize, c: i64) -> Self {
        let mut v = Self::zero(m);
        v.coeffs[j % m] = c;
        v
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Adds `c * x^j` in place.
    pub fn add_term(&mut self, j: usize, c: i64) {
        let m = self.modulus();
        self.coeffs[j % m] = checked_add(self.coeffs[j % m], c);
    }

    /// Complex conjugation: `x^j -> x^(m - j)`.
    pub fn conj(&self) -> Self {
        let m = self.modulus();
        let coeffs = (0..m).map(|j| self.coeffs[(m - j) % m]).collect();
        ClassVector { coeffs }
    }

    /// Cyclic convolution.
    pub fn mul_mod(&self, other: &ClassVector) -> Result<Self, Error> {
        let m = self.modulus();
        if other.modulus() != m {
            return Err(Error::ModulusMismatch { left: m, right: other.modulus() });
        }
        let mut out = vec![0i64; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    let k = (i + j) % m;
                    out[k] = checked_add(out[k], checked_mul(a, b));
                }
            }
        }
        Ok(ClassVector { coeffs: out })
    }

    /// `P * conj(P)`, which evaluates to `|P(zeta_m)|^2`.
    pub fn norm_sq(&self) -> Self {
        self.mul_mod(&self.conj()).expect("same modulus")
    }

    /// Remainder of `P` modulo `phi`, of length `deg(phi)`.
    pub fn reduce(&self, phi: &CyclotomicPoly) -> Vec<i64> {
        assert_eq!(phi.m, self.modulus(), "cyclotomic index must match the class vector modulus");
        poly_rem(&self.coeffs, &phi.coeffs)
    }

    /// `Some(c)` iff `P(zeta_m) = c` exactly.
    pub fn as_integer(&self) -> Option<i64> {
        self.as_integer_with(&cyclotomic_poly(self.modulus()))
    }

    /// [`ClassVector::as_integer`] with a precomputed `Phi_m`.
    pub fn as_integer_with(&self, phi: &CyclotomicPoly) -> Option<i64> {
        let rem = self.reduce(phi);
        if rem[1..].iter().all(|&c| c == 0) {
            Some(rem[0])
        } else {
            None
        }
    }

    /// Double-precision evaluation at `zeta_m`. Screening only.
    pub fn eval_float(&self) -> Complex64 {
        let m = self.modulus() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| {
                let theta = 2.0 * PI * j as f64 / m;
                Complex64::new(c as f64 * libm::cos(theta), c as f64 * libm::sin(theta))
            })
            .sum()
    }
}

impl CyclotomicPoly {
    pub fn index(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Remainder of `a` modulo the monic polynomial `b` (ascending coefficients).
fn poly_rem(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    let mut r = a.to_vec();
    if r.len() < b.len() {
        r.resize(db.max(1), 0);
        r.truncate(db.max(1));
        return r;
    }
    for top in (db..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        let shift = top - db;
        for (k, &bk) in b.iter().enumerate() {
            if bk != 0 {
                r[shift + k] = checked_add(r[shift + k], -checked_mul(c, bk));
            }
        }
    }
    r.truncate(db.max(1));
    r
}

/// Exact quotient of `a` by the monic `b`; panics if the division leaves a remainder.
fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for top in (db..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        let shift = top - db;
        q[shift] = c;
        for (k, &bk) in b.iter().enumerate() {
            r[shift + k] = checked_add(r[shift + k], -checked_mul(c, bk));
        }
    }
    assert!(r.iter().all(|&c| c == 0), "inexact polynomial division");
    q
}

fn cyclotomic_memo(m: usize, memo: &mut BTreeMap<usize, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let mut p = vec![0i64; m + 1];
    p[0] = -1;
    p[m] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let phi_d = cyclotomic_memo(d, memo);
        p = poly_div_exact(&p, &phi_d);
    }
    memo.insert(m, p.clone());
    p
}

/// `Phi_m`, by dividing `x^m - 1` by `Phi_d` for every proper divisor `d`.
///
/// Panics if `m == 0`.
pub fn cyclotomic_poly(m: usize) -> CyclotomicPoly {
    assert!(m >= 1, "cyclotomic index must be at least 1");
    let mut memo = BTreeMap::new();
    CyclotomicPoly { m, coeffs: cyclotomic_memo(m, &mut memo) }
}
