//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! An element of order `n` is stored as its coefficient vector over the power
//! basis `1, ζ, …, ζ^{φ(n)-1}` after reduction modulo the cyclotomic polynomial
//! `Φ_n`. This reduced form is unique, so two values in the same field are equal
//! exactly when their coefficient vectors agree.
//!
//! Binary operations on values of different orders promote both operands to the
//! least common multiple of the orders. Equality compares values, not labels:
//! `-1` built as `ζ_2` equals the rational `-1`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_integer::Integer;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// Exact quotient of integer polynomials (ascending coefficients), divisor monic.
fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// The `n`-th cyclotomic polynomial with ascending integer coefficients.
///
/// Computed as `(x^n - 1) / ∏_{d | n, d < n} Φ_d(x)`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    fn go(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut p = vec![0i64; n as usize + 1];
        p[0] = -1;
        p[n as usize] = 1;
        for d in divisors(n) {
            if d < n {
                let q = go(d, memo);
                p = div_exact_monic(&p, &q);
            }
        }
        memo.insert(n, p.clone());
        p
    }
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    go(n, &mut HashMap::new())
}

/// Shared per-order data: `Φ_n` and the reduced forms of `ζ^k` for `k < n`.
#[derive(Debug)]
pub struct CycField {
    order: u32,
    phi: usize,
    /// Sparse reduced form of `ζ^k`, indexed by `k mod n`.
    powers: Vec<Vec<(usize, Rational)>>,
}

impl CycField {
    pub fn new(order: u32) -> Result<Arc<CycField>> {
        if order == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be positive".into()));
        }
        let modulus = cyclotomic_polynomial(order);
        let phi = modulus.len() - 1;
        let n = order as usize;
        let mut powers = Vec::with_capacity(n);
        // Dense running value of x^k mod Φ_n.
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        if phi == 1 {
            // Q itself: x = -modulus[0].
            let root = -modulus[0];
            let mut v = 1i64;
            for _ in 0..n {
                powers.push(vec![(0, Rational::from(v))]);
                v *= root;
            }
        } else {
            for _ in 0..n {
                powers.push(
                    cur.iter().enumerate().filter(|&(_, &c)| c != 0).map(|(i, &c)| (i, Rational::from(c))).collect(),
                );
                let top = cur[phi - 1];
                for i in (1..phi).rev() {
                    cur[i] = cur[i - 1];
                }
                cur[0] = 0;
                if top != 0 {
                    for i in 0..phi {
                        cur[i] -= top * modulus[i];
                    }
                }
            }
        }
        Ok(Arc::new(CycField { order, phi, powers }))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.phi
    }
}

/// An exact element of `Q(ζ_n)` in canonical reduced form.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycField>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero_in(field: &Arc<CycField>) -> Self {
        Cyclotomic { field: field.clone(), coeffs: vec![Rational::ZERO; field.phi] }
    }

    pub fn rational_in(field: &Arc<CycField>, r: Rational) -> Self {
        let mut c = Self::zero_in(field);
        c.coeffs[0] = r;
        c
    }

    pub fn from_rational(r: Rational) -> Self {
        let field = CycField::new(1).expect("order 1");
        Cyclotomic { field, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `ζ_n^k` with `k` taken modulo `n`. Rejects `n = 0`.
    pub fn root(n: u32, k: i64) -> Result<Self> {
        let field = CycField::new(n)?;
        Ok(Self::root_in(&field, k))
    }

    pub fn root_in(field: &Arc<CycField>, k: i64) -> Self {
        let idx = k.rem_euclid(field.order as i64) as usize;
        let mut c = Self::zero_in(field);
        for (i, v) in &field.powers[idx] {
            c.coeffs[*i] = v.clone();
        }
        c
    }

    /// Builds a value from coefficients over `1, ζ_n, …, ζ_n^{len-1}` of any length,
    /// reducing modulo `Φ_n`.
    pub fn from_powers(n: u32, coeffs: &[Rational]) -> Result<Self> {
        let field = CycField::new(n)?;
        let mut out = Self::zero_in(&field);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, v) in &field.powers[k % n as usize] {
                out.coeffs[*i] += &(c * v);
            }
        }
        Ok(out)
    }

    /// The representation of `-1` built from positive roots only:
    /// `ζ^{n/2}` for even `n`, `ζ + … + ζ^{n-1}` for odd `n`.
    pub fn negative_unit(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("negative unit needs root order >= 2, got {n}")));
        }
        if n.is_multiple_of(2) {
            return Self::root(n, (n / 2) as i64);
        }
        let mut powers = vec![Rational::ONE; n as usize];
        powers[0] = Rational::ZERO;
        Self::from_powers(n, &powers)
    }

    /// `√2 = ζ_8 - ζ_8^3`.
    pub fn sqrt2() -> Self {
        let f = CycField::new(8).expect("order 8");
        &Self::root_in(&f, 1) - &Self::root_in(&f, 3)
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    /// Canonical coefficients over `1, ζ, …, ζ^{φ(n)-1}`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Re-expresses the value in `Q(ζ_m)`; `m` must be a multiple of the current order.
    pub fn promote(&self, m: u32) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(self.order()) {
            return Err(Error::InvalidArgument(format!(
                "cannot promote order {} to {m}: not a multiple",
                self.order()
            )));
        }
        if m == self.order() {
            return Ok(self.clone());
        }
        let field = CycField::new(m)?;
        Ok(self.promote_into(&field))
    }

    /// Re-expresses the value in an existing field whose order is a multiple of the current one.
    pub fn promote_in(&self, field: &Arc<CycField>) -> Result<Self> {
        if !field.order.is_multiple_of(self.order()) {
            return Err(Error::InvalidArgument(format!(
                "cannot promote order {} to {}: not a multiple",
                self.order(),
                field.order
            )));
        }
        Ok(self.promote_into(field))
    }

    fn promote_into(&self, field: &Arc<CycField>) -> Self {
        if field.order == self.order() {
            return self.clone();
        }
        let step = (field.order / self.order()) as usize;
        let mut out = Self::zero_in(field);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, v) in &field.powers[(k * step) % field.order as usize] {
                out.coeffs[*i] += &(c * v);
            }
        }
        out
    }

    /// Promotes both operands to a common field, reusing an existing one when
    /// one order divides the other.
    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let (na, nb) = (a.order(), b.order());
        if na == nb {
            return (a.clone(), b.clone());
        }
        if na % nb == 0 {
            return (a.clone(), b.promote_into(&a.field));
        }
        if nb % na == 0 {
            return (a.promote_into(&b.field), b.clone());
        }
        let field = CycField::new(na.lcm(&nb)).expect("positive lcm");
        (a.promote_into(&field), b.promote_into(&field))
    }

    fn add_same(&self, rhs: &Self) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    fn mul_same(&self, rhs: &Self) -> Self {
        let phi = self.field.phi;
        if phi == 1 {
            return Cyclotomic { field: self.field.clone(), coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        let mut prod = vec![Rational::ZERO; 2 * phi - 1];
        let mut any = false;
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += &(x * y);
                any = true;
            }
        }
        if !any {
            return Self::zero_in(&self.field);
        }
        let n = self.field.order as usize;
        let mut coeffs: Vec<Rational> = prod.drain(..phi).collect();
        for (off, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, v) in &self.field.powers[(phi + off) % n] {
                coeffs[*i] += &(&c * v);
            }
        }
        Cyclotomic { field: self.field.clone(), coeffs }
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Complex conjugation, `ζ^k ↦ ζ^{n-k}`.
    pub fn conj(&self) -> Self {
        let n = self.field.order as usize;
        let mut out = Self::zero_in(&self.field);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, v) in &self.field.powers[(n - k) % n] {
                out.coeffs[*i] += &(c * v);
            }
        }
        out
    }

    /// Galois automorphism `ζ ↦ ζ^k`, `k` coprime to the order.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let n = self.field.order as i64;
        if k.gcd(&n) != 1 {
            return Err(Error::InvalidArgument(format!("{k} is not a unit modulo {n}")));
        }
        let mut out = Self::zero_in(&self.field);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (j as i64 * k).rem_euclid(n) as usize;
            for (i, v) in &self.field.powers[idx] {
                out.coeffs[*i] += &(c * v);
            }
        }
        Ok(out)
    }

    /// `a · conj(a)`.
    pub fn abs2(&self) -> Self {
        self * &self.conj()
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::rational_in(&self.field, Rational::ONE);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_n`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::rational_in(&self.field, r.recip().expect("nonzero")));
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order()).into_iter().map(Rational::from).collect();
        let a = trim(self.coeffs.clone());
        let (g, s) = poly_ext_gcd(&a, &modulus);
        // g is a nonzero constant because Φ_n is irreducible.
        if g.len() != 1 {
            return Err(Error::Internal("cyclotomic polynomial not coprime to element".into()));
        }
        let ginv = g[0].recip().expect("nonzero gcd");
        let scaled: Vec<Rational> = s.iter().map(|c| c * &ginv).collect();
        let out = Self::from_dense(&self.field, &scaled);
        debug_assert!((&out * self).is_one());
        Ok(out)
    }

    fn from_dense(field: &Arc<CycField>, dense: &[Rational]) -> Self {
        let mut out = Self::zero_in(field);
        for (k, c) in dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, v) in &field.powers[k % field.order as usize] {
                out.coeffs[*i] += &(c * v);
            }
        }
        out
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Total order on the canonical form: by field order, then coefficients.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Appends the canonical byte serialization: the order followed by the φ(n)
    /// reduced fractions in basis order.
    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        write_varint(out, self.order() as u64);
        for c in &self.coeffs {
            write_rational(out, c);
        }
    }

    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_canonical(&mut out);
        out
    }

    /// Parses one value written by [`Cyclotomic::write_canonical`], advancing `pos`.
    pub fn read_canonical(bytes: &[u8], pos: &mut usize, field: Option<&Arc<CycField>>) -> Result<Self> {
        let order = read_varint(bytes, pos)? as u32;
        let field = match field {
            Some(f) if f.order == order => f.clone(),
            _ => CycField::new(order)?,
        };
        let mut coeffs = Vec::with_capacity(field.phi);
        for _ in 0..field.phi {
            coeffs.push(read_rational(bytes, pos)?);
        }
        Ok(Cyclotomic { field, coeffs })
    }

    /// The same value in the smallest field `Q(ζ_m)` containing it, `m | n`.
    pub fn minimal(&self) -> Self {
        if let Some(r) = self.as_rational() {
            return Self::from_rational(r);
        }
        let n = self.order();
        for m in divisors(n) {
            if m == n {
                break;
            }
            if m % 4 == 2 || !self.fixed_by_units_over(m) {
                continue;
            }
            let field = CycField::new(m).expect("positive divisor");
            if let Some(v) = self.coordinates_in(&field) {
                return v;
            }
        }
        self.clone()
    }

    /// Whether `σ_k` fixes the value for every unit `k ≡ 1 (mod m)`.
    fn fixed_by_units_over(&self, m: u32) -> bool {
        let n = self.order() as i64;
        (1..n).step_by(m as usize).filter(|k| k.gcd(&n) == 1).all(|k| self.galois(k).expect("unit") == *self)
    }

    /// Solves `self = Σ_j c_j ζ_m^j` for `j < φ(m)`.
    fn coordinates_in(&self, field: &Arc<CycField>) -> Option<Self> {
        let (rows, cols) = (self.field.phi, field.phi);
        let step = (self.order() / field.order) as usize;
        // Augmented system, one row per basis element of Q(ζ_n).
        let mut a = vec![vec![Rational::ZERO; cols + 1]; rows];
        for j in 0..cols {
            for (i, v) in &self.field.powers[j * step] {
                a[*i][j] = v.clone();
            }
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            a[i][cols] = c.clone();
        }
        let mut pivot_row = 0;
        for col in 0..cols {
            let p = (pivot_row..rows).find(|&r| !a[r][col].is_zero())?;
            a.swap(pivot_row, p);
            let inv = a[pivot_row][col].recip().expect("nonzero pivot");
            for x in a[pivot_row].iter_mut() {
                *x = &*x * &inv;
            }
            let pr = a[pivot_row].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != pivot_row && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pr) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            pivot_row += 1;
        }
        if a[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
            return None;
        }
        let coeffs = a[..cols].iter().map(|row| row[cols].clone()).collect();
        Some(Cyclotomic { field: field.clone(), coeffs })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Approximate complex value, for diagnostics only.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.order() as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let t = std::f64::consts::TAU * k as f64 / n;
            let v = c.to_f64();
            (re + v * t.cos(), im + v * t.sin())
        })
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub_mul(a: &[Rational], b: &[Rational], c: &Rational, shift: usize) -> Vec<Rational> {
    let mut out = a.to_vec();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, Rational::ZERO);
    }
    for (i, x) in b.iter().enumerate() {
        out[i + shift] -= &(x * c);
    }
    trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].recip().expect("nonzero leading coefficient");
    if rem.len() < b.len() {
        return (vec![Rational::ZERO], rem);
    }
    let mut quot = vec![Rational::ZERO; rem.len() - db];
    while rem.len() >= b.len() && !(rem.len() == 1 && rem[0].is_zero()) {
        let shift = rem.len() - b.len();
        let c = &rem[rem.len() - 1] * &lead;
        quot[shift] = c.clone();
        rem = poly_sub_mul(&rem, b, &c, shift);
        if rem.len() - 1 < db {
            break;
        }
    }
    (trim(quot), rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rational::ZERO);
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)`.
fn poly_ext_gcd(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![Rational::ZERO], vec![Rational::ONE]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

fn write_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Result<u64> {
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos).ok_or_else(|| Error::InvalidArgument("truncated canonical bytes".into()))?;
        *pos += 1;
        v |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
        shift += 7;
        if shift > 63 {
            return Err(Error::InvalidArgument("varint overflow".into()));
        }
    }
}

// Small values: tag 0, zigzag numerator, denominator. Large: tag 1, decimal text.
fn write_rational(out: &mut Vec<u8>, r: &Rational) {
    match r.as_small() {
        Some((n, d)) => {
            out.push(0);
            write_varint(out, ((n << 1) ^ (n >> 63)) as u64);
            write_varint(out, d as u64);
        }
        None => {
            out.push(1);
            let s = r.to_string();
            write_varint(out, s.len() as u64);
            out.extend_from_slice(s.as_bytes());
        }
    }
}

fn read_rational(bytes: &[u8], pos: &mut usize) -> Result<Rational> {
    let tag = *bytes.get(*pos).ok_or_else(|| Error::InvalidArgument("truncated canonical bytes".into()))?;
    *pos += 1;
    if tag == 0 {
        let z = read_varint(bytes, pos)?;
        let n = ((z >> 1) as i64) ^ -((z & 1) as i64);
        let d = read_varint(bytes, pos)? as i64;
        Ok(Rational::new(n, d))
    } else {
        let len = read_varint(bytes, pos)? as usize;
        let s =
            bytes.get(*pos..*pos + len).ok_or_else(|| Error::InvalidArgument("truncated canonical bytes".into()))?;
        *pos += len;
        std::str::from_utf8(s)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidArgument("bad rational in canonical bytes".into()))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order() == other.order() {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Self {
        Cyclotomic::from_rational(r)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order() == rhs.order() {
            return self.add_same(rhs);
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        a.add_same(&b)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order() == rhs.order() {
            return self.mul_same(rhs);
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        a.mul_same(&b)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.order() == rhs.order() {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        if self.order() == rhs.order() {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "z{n}")?;
                    } else {
                        write!(f, "z{n}^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let this = self.minimal();
        let coeffs: Vec<[String; 2]> =
            this.coeffs.iter().map(|c| [c.numer().to_string(), c.denom().to_string()]).collect();
        let mut st = serializer.serialize_struct("Cyclotomic", 2)?;
        st.serialize_field("order", &this.order())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            order: u32,
            coeffs: Vec<(String, String)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let field = CycField::new(raw.order).map_err(de::Error::custom)?;
        if raw.coeffs.len() != field.phi {
            return Err(de::Error::custom(format!(
                "order {} needs {} coefficients, got {}",
                raw.order,
                field.phi,
                raw.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(field.phi);
        for (num, den) in raw.coeffs {
            let r: Rational = format!("{num}/{den}").parse().map_err(de::Error::custom)?;
            coeffs.push(r);
        }
        Ok(Cyclotomic { field, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root(n, k).unwrap()
    }

    /// Long division of x^k by a monic integer polynomial, written independently
    /// of the field's power table.
    fn reduce_monomial_oracle(k: usize, modulus: &[i64]) -> Vec<i64> {
        let mut p = vec![0i64; k + 1];
        p[k] = 1;
        let d = modulus.len() - 1;
        for top in (d..=k).rev() {
            let c = p[top];
            if c != 0 {
                for (j, m) in modulus.iter().enumerate() {
                    p[top - d + j] -= c * m;
                }
            }
        }
        p.resize(d.max(p.len()), 0);
        p.truncate(d);
        p
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..60 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn power_table_matches_long_division() {
        for n in [3u32, 4, 5, 8, 9, 12, 15, 24] {
            let modulus = cyclotomic_polynomial(n);
            for k in 0..n as usize {
                let expect: Vec<Rational> =
                    reduce_monomial_oracle(k, &modulus).into_iter().map(Rational::from).collect();
                assert_eq!(z(n, k as i64).coeffs(), &expect[..], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn root_examples() {
        assert!(z(3, 0).is_one());
        assert_eq!(z(2, 1), Cyclotomic::from_int(-1));
        // x^3 mod x^2+1 = -x
        let oracle: Vec<Rational> = reduce_monomial_oracle(3, &[1, 0, 1]).into_iter().map(Rational::from).collect();
        assert_eq!(z(4, 3).coeffs(), &oracle[..]);
        assert_eq!(z(4, 3), -z(4, 1));
        assert_eq!(z(5, -1), z(5, 4));
        assert!(Cyclotomic::root(0, 1).is_err());
    }

    #[test]
    fn ring_examples() {
        assert!((&z(3, 1) * &z(3, 2)).is_one());
        let one = Cyclotomic::one();
        let a = &one + &z(3, 1);
        let b = &one + &z(3, 2);
        assert!((&a * &b).is_one());
        let s = &z(8, 1) + &z(8, 7);
        assert_eq!(s, &z(8, 1) - &z(8, 3));
        assert_eq!(s, Cyclotomic::sqrt2());
        assert_eq!((&s * &s).as_rational(), Some(Rational::from(2)));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let zero = Cyclotomic::zero_in(z(5, 1).field());
        assert_eq!(z(5, 1).checked_div(&zero), Err(Error::DivisionByZero));
        assert_eq!(zero.inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_examples() {
        let a = &Cyclotomic::from_int(1) + &z(5, 1).scale(&q(2, 1));
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        let s2 = Cyclotomic::sqrt2();
        assert_eq!(s2.inv().unwrap(), s2.scale(&q(1, 2)));
    }

    #[test]
    fn conj_examples() {
        assert_eq!(z(3, 1).conj(), z(3, 2));
        let r = Cyclotomic::from_rational(q(5, 2));
        assert_eq!(r.conj(), r);
        let a = &Cyclotomic::one() + &z(5, 1).scale(&q(2, 1));
        let expect = Cyclotomic::from_powers(5, &[q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(2, 1)]).unwrap();
        assert_eq!(a.conj(), expect);
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn promote_examples() {
        assert_eq!(z(2, 1).promote(4).unwrap(), z(4, 2));
        assert_eq!(z(4, 2), Cyclotomic::from_int(-1));
        assert!(Cyclotomic::one().promote(12).unwrap().is_one());
        let p = z(3, 1).promote(6).unwrap();
        assert_eq!(p.coeffs().to_vec(), z(6, 2).coeffs().to_vec());
        assert!(p.pow(3).is_one());
        assert!(!p.is_one());
        assert!(z(3, 1).promote(4).is_err());
    }

    #[test]
    fn abs2_examples() {
        assert!(z(5, 1).abs2().is_one());
        assert!((&Cyclotomic::one() + &z(3, 1)).abs2().is_one());
        assert_eq!(Cyclotomic::from_rational(q(3, 2)).abs2().as_rational(), Some(q(9, 4)));
    }

    #[test]
    fn rationality_examples() {
        let s = &(&Cyclotomic::one() + &z(3, 1)) + &z(3, 2);
        assert_eq!(s.as_rational(), Some(Rational::ZERO));
        assert!(!z(4, 1).is_rational());
        let r = &z(8, 1) - &z(8, 3);
        assert_eq!((&r * &r).as_rational(), Some(Rational::from(2)));
    }

    #[test]
    fn negative_unit_examples() {
        for n in 2..20 {
            assert_eq!(Cyclotomic::negative_unit(n).unwrap(), Cyclotomic::from_int(-1), "n={n}");
        }
        assert_eq!(Cyclotomic::negative_unit(2).unwrap(), z(2, 1));
        assert_eq!(Cyclotomic::negative_unit(3).unwrap(), &z(3, 1) + &z(3, 2));
        assert_eq!(Cyclotomic::negative_unit(6).unwrap(), z(6, 3));
        assert!(Cyclotomic::negative_unit(1).is_err());
        assert!(Cyclotomic::negative_unit(0).is_err());
    }

    #[test]
    fn roots_sum_to_zero() {
        for n in 2..40u32 {
            let f = CycField::new(n).unwrap();
            let s = (0..n as i64).map(|k| Cyclotomic::root_in(&f, k)).fold(Cyclotomic::zero_in(&f), |acc, x| &acc + &x);
            assert!(s.is_zero(), "n={n}");
        }
    }

    #[test]
    fn json_round_trip() {
        let a = &z(12, 5).scale(&q(-3, 7)) + &Cyclotomic::from_int(2);
        let v = a.to_json();
        assert_eq!(v["order"], 12);
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
        let back: Cyclotomic = serde_json::from_value(v).unwrap();
        assert_eq!(back, a);
        let bad = serde_json::json!({"order": 4, "coeffs": [["1","1"]]});
        assert!(serde_json::from_value::<Cyclotomic>(bad).is_err());
    }

    #[test]
    fn minimal_field() {
        // ζ_6 = 1 + ζ_3
        let m = z(6, 1).minimal();
        assert_eq!(m.order(), 3);
        assert_eq!(m.coeffs(), &[q(1, 1), q(1, 1)]);
        assert_eq!(z(12, 3).minimal().order(), 4);
        assert_eq!(z(24, 8).minimal().order(), 3);
        assert_eq!(Cyclotomic::sqrt2().minimal().order(), 8);
        assert_eq!((&z(12, 1) + &z(12, 11)).minimal().order(), 12);
        assert_eq!(z(12, 6).minimal().order(), 1);
        assert_eq!(z(12, 3).to_json()["order"], 4);
    }

    #[test]
    fn canonical_bytes_round_trip() {
        let a = &z(9, 4).scale(&q(i64::MAX, 3)) + &z(9, 1).scale(&q(i64::MAX, 1).pow(2));
        let bytes = a.canonical_bytes();
        let mut pos = 0;
        let back = Cyclotomic::read_canonical(&bytes, &mut pos, None).unwrap();
        assert_eq!(pos, bytes.len());
        assert_eq!(back, a);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!((&z(8, 1) - &z(8, 3)).to_string(), "z8 - z8^3");
        assert_eq!(Cyclotomic::zero().to_string(), "0");
        assert_eq!(z(4, 3).to_string(), "-z4");
    }

    use proptest::prelude::*;

    fn arb_cyc(order: u32) -> impl Strategy<Value = Cyclotomic> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), euler_phi(order)).prop_map(move |v| {
            let coeffs: Vec<Rational> = v.into_iter().map(|(n, d)| Rational::new(n, d)).collect();
            Cyclotomic::from_powers(order, &coeffs).unwrap()
        })
    }

    fn arb_any() -> impl Strategy<Value = Cyclotomic> {
        prop_oneof![arb_cyc(1), arb_cyc(3), arb_cyc(4), arb_cyc(5), arb_cyc(8), arb_cyc(12)]
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_any(), b in arb_any(), c in arb_any()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conj_is_an_involutive_homomorphism(a in arb_any(), b in arb_any()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!(a.abs2(), a.conj().abs2());
            prop_assert_eq!(a.abs2().conj(), a.abs2());
        }

        #[test]
        fn promotion_commutes_with_ring_ops(a in arb_cyc(6), b in arb_cyc(6), k in 1u32..4) {
            let m = 6 * k;
            let (pa, pb) = (a.promote(m).unwrap(), b.promote(m).unwrap());
            prop_assert_eq!(pa.order(), m);
            let same = |x: Cyclotomic, y: Cyclotomic| x.coeffs().to_vec() == y.coeffs().to_vec();
            prop_assert!(same((&a * &b).promote(m).unwrap(), &pa * &pb));
            prop_assert!(same((&a + &b).promote(m).unwrap(), &pa + &pb));
            prop_assert!(same(a.conj().promote(m).unwrap(), pa.conj()));
            // injective
            prop_assert_eq!(a == b, pa.coeffs() == pb.coeffs());
        }

        #[test]
        fn minimal_preserves_value(a in arb_cyc(12), b in arb_cyc(8)) {
            for x in [a.clone(), &a * &b, (&a + &a.conj())] {
                let m = x.minimal();
                prop_assert_eq!(&m, &x);
                prop_assert!(x.order() % m.order() == 0);
                prop_assert_eq!(m.minimal().order(), m.order());
            }
        }

        #[test]
        fn canonical_form_is_unique(a in arb_cyc(12), b in arb_cyc(12)) {
            // (a+b)^2 built two ways.
            let s = &a + &b;
            let lhs = &s * &s;
            let two = Cyclotomic::from_int(2);
            let rhs = &(&(&a * &a) + &(&two * &(&a * &b))) + &(&b * &b);
            prop_assert_eq!(lhs.canonical_bytes(), rhs.canonical_bytes());
            prop_assert_eq!(
                serde_json::to_string(&lhs).unwrap(),
                serde_json::to_string(&rhs).unwrap()
            );
        }
    }
}
