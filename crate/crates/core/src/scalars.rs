//! Exact arithmetic in the cyclotomic fields `Q(zeta_m)`.
//!
//! A [`CycloScalar`] stores its coordinates in the power basis
//! `1, zeta, ..., zeta^(phi(m)-1)` of `Q(zeta_m)`, reduced modulo the m-th
//! cyclotomic polynomial. Conductors congruent to 2 mod 4 are folded onto
//! `m/2` (the fields coincide), and values that happen to be rational are
//! always stored with conductor 1. Mixed-conductor arithmetic lifts both
//! operands into the least common conductor.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

static CYCLOTOMIC_CACHE: Lazy<RwLock<HashMap<u32, Arc<Vec<BigInt>>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Coefficients (ascending) of the m-th cyclotomic polynomial.
///
/// Computed as `(t^m - 1) / prod_{d | m, d < m} Phi_d(t)` and cached.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "cyclotomic polynomial of order 0");
    {
        let cache = CYCLOTOMIC_CACHE.read().expect("cyclotomic cache poisoned");
        if let Some(p) = cache.get(&m) {
            return Arc::clone(p);
        }
    }
    let mut quotient = vec![BigInt::zero(); m as usize + 1];
    quotient[0] = -BigInt::one();
    quotient[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            quotient = exact_monic_division(&quotient, &cyclotomic_polynomial(d));
        }
    }
    let mut cache = CYCLOTOMIC_CACHE.write().expect("cyclotomic cache poisoned");
    Arc::clone(cache.entry(m).or_insert_with(|| Arc::new(quotient)))
}

fn exact_monic_division(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// Euler's totient, i.e. the degree of `Q(zeta_m)` over `Q`.
pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
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

/// Conductor used internally for `Q(zeta_m)`; `m = 2 (mod 4)` folds to `m/2`.
pub fn canonical_conductor(m: u32) -> u32 {
    if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

/// Number of roots of unity in `Q(zeta_m)`.
pub fn torsion_order(m: u32) -> u64 {
    assert!(m >= 1);
    if m.is_multiple_of(2) {
        m as u64
    } else {
        2 * m as u64
    }
}

/// Exact element of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct CycloScalar {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CycloScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloScalar {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// `zeta_m^k`; the result has multiplicative order `m / gcd(m, k)`.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        assert!(m >= 1, "root of unity of order 0");
        let k = k.rem_euclid(m as i64) as u64;
        if m % 4 == 2 {
            // zeta_m = -zeta_h^((h+1)/2) with h = m/2 odd
            let h = (m / 2) as u64;
            let exponent = (k * h.div_ceil(2)) % h;
            let base = Self::power_of_generator(h as u32, exponent as usize);
            if k % 2 == 1 {
                -base
            } else {
                base
            }
        } else {
            Self::power_of_generator(m, k as usize)
        }
    }

    fn power_of_generator(c: u32, k: usize) -> Self {
        let mut dense = vec![BigRational::zero(); c as usize];
        dense[k % c as usize] = BigRational::one();
        Self::from_dense(c, dense)
    }

    /// `sum_k coeffs[k] * zeta_m^k` for an arbitrary (not necessarily canonical) m.
    pub fn from_power_sum(m: u32, coeffs: &[BigRational]) -> Self {
        let mut acc = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(&Self::root_of_unity(m, k as i64) * &Self::from_rational(c.clone()));
            }
        }
        acc
    }

    fn from_dense(c: u32, dense: Vec<BigRational>) -> Self {
        debug_assert_eq!(c, canonical_conductor(c));
        let coeffs = reduce_dense(dense, c);
        Self {
            conductor: c,
            coeffs,
        }
        .normalized()
    }

    /// Rational values are stored with conductor 1.
    pub fn normalized(mut self) -> Self {
        if self.conductor > 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            self.coeffs.truncate(1);
            self.conductor = 1;
        }
        self
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    fn lifted(&self, l: u32) -> Vec<BigRational> {
        if l == self.conductor {
            return self.coeffs.clone();
        }
        debug_assert_eq!(l % self.conductor, 0);
        let step = (l / self.conductor) as usize;
        let mut dense = vec![BigRational::zero(); l as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            dense[k * step] += c;
        }
        reduce_dense(dense, l)
    }

    fn common(&self, other: &Self) -> (u32, Vec<BigRational>, Vec<BigRational>) {
        let l = self.conductor.lcm(&other.conductor);
        (l, self.lifted(l), other.lifted(l))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()));
        }
        let c = self.conductor;
        let phi = self.coeffs.len();
        // Column j of the multiplication-by-self matrix is self * zeta^j.
        let columns: Vec<Vec<BigRational>> = (0..phi)
            .map(|j| (self * &Self::power_of_generator(c, j)).lifted(c))
            .collect();
        let mut rows: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = columns.iter().map(|col| col[i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        let solution = solve_rational(&mut rows, phi).ok_or(Error::ZeroInverse)?;
        Ok(Self {
            conductor: c,
            coeffs: solution,
        }
        .normalized())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }
}

fn reduce_dense(mut dense: Vec<BigRational>, c: u32) -> Vec<BigRational> {
    let phi_poly = cyclotomic_polynomial(c);
    let deg = phi_poly.len() - 1;
    if dense.len() < deg {
        dense.resize(deg, BigRational::zero());
        return dense;
    }
    for i in (deg..dense.len()).rev() {
        if dense[i].is_zero() {
            continue;
        }
        let lead = dense[i].clone();
        for (j, pj) in phi_poly.iter().enumerate() {
            if !pj.is_zero() {
                let t = &lead * BigRational::from_integer(pj.clone());
                dense[i - deg + j] -= t;
            }
        }
    }
    dense.truncate(deg);
    dense
}

/// Gauss-Jordan on an augmented `n x (n+1)` rational system.
fn solve_rational(rows: &mut [Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (v, p) in rows[r].iter_mut().zip(pivot_row.iter()) {
                    *v -= &factor * p;
                }
            }
        }
    }
    Some(rows.iter().map(|r| r[n].clone()).collect())
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            self.coeffs == other.coeffs
        } else {
            let (_, a, b) = self.common(other);
            a == b
        }
    }
}

impl Eq for CycloScalar {}

impl<'a> Add<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        if self.conductor == rhs.conductor {
            let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
            return CycloScalar {
                conductor: self.conductor,
                coeffs,
            }
            .normalized();
        }
        let (l, a, b) = self.common(rhs);
        CycloScalar {
            conductor: l,
            coeffs: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        }
        .normalized()
    }
}

impl<'a> Sub<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        if self.conductor == 1 && rhs.conductor == 1 {
            return CycloScalar::from_rational(&self.coeffs[0] * &rhs.coeffs[0]);
        }
        if self.conductor == 1 || rhs.conductor == 1 {
            let (q, v) = if self.conductor == 1 {
                (&self.coeffs[0], rhs)
            } else {
                (&rhs.coeffs[0], self)
            };
            if q.is_zero() {
                return CycloScalar::zero();
            }
            return CycloScalar {
                conductor: v.conductor,
                coeffs: v.coeffs.iter().map(|c| c * q).collect(),
            };
        }
        let (l, a, b) = self.common(rhs);
        let mut dense = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    dense[i + j] += x * y;
                }
            }
        }
        CycloScalar::from_dense(l, dense)
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}

impl Add for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: CycloScalar) -> CycloScalar {
        &self + &rhs
    }
}

impl Sub for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: CycloScalar) -> CycloScalar {
        &self - &rhs
    }
}

impl Mul for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: CycloScalar) -> CycloScalar {
        &self * &rhs
    }
}

impl AddAssign<&CycloScalar> for CycloScalar {
    fn add_assign(&mut self, rhs: &CycloScalar) {
        *self = &*self + rhs;
    }
}

impl Default for CycloScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycloScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return f.write_str(&fmt_rational(&self.coeffs[0]));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            let body = if k == 0 {
                fmt_rational(&magnitude)
            } else if magnitude.is_one() {
                format!("z{}^{}", self.conductor, k)
            } else {
                format!("{}*z{}^{}", fmt_rational(&magnitude), self.conductor, k)
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for CycloScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for CycloScalar {
    type Err = Error;

    /// Parses sums of terms such as `1/2`, `z3^1`, `-2*z4^3`.
    fn from_str(text: &str) -> Result<Self> {
        ScalarParser::new(text).parse()
    }
}

struct ScalarParser<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> ScalarParser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            line: 1,
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn factor(&mut self) -> Result<CycloScalar> {
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                let m = self.nat()?;
                if self.peek() != Some('^') {
                    return Err(self.err("expected `^` after root of unity"));
                }
                self.pos += 1;
                let k = self.nat()?;
                let m: u32 = m
                    .try_into()
                    .ok()
                    .filter(|&m: &u32| m >= 1)
                    .ok_or_else(|| self.err("bad root-of-unity order"))?;
                let k: i64 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                Ok(CycloScalar::root_of_unity(m, k))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let d = self.nat()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(CycloScalar::from_rational(BigRational::new(n, d)))
                } else {
                    Ok(CycloScalar::from_rational(BigRational::from_integer(n)))
                }
            }
            _ => Err(self.err("expected a rational or `z<m>^<k>`")),
        }
    }

    fn parse(mut self) -> Result<CycloScalar> {
        let mut acc = CycloScalar::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                None if !first => break,
                _ if first => 1,
                _ => return Err(self.err("expected `+` or `-`")),
            };
            let mut term = self.factor()?;
            while self.peek() == Some('*') {
                self.pos += 1;
                term = &term * &self.factor()?;
            }
            if sign < 0 {
                term = -term;
            }
            acc += &term;
            first = false;
            if self.peek().is_none() {
                break;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> CycloScalar {
        CycloScalar::from_ratio(n, d)
    }

    fn z(m: u32, k: i64) -> CycloScalar {
        CycloScalar::root_of_unity(m, k)
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |m| -> Vec<i64> {
            cyclotomic_polynomial(m)
                .iter()
                .map(|c| c.try_into().unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        for m in 1..=64 {
            assert_eq!(cyclotomic_polynomial(m).len() - 1, euler_phi(m));
        }
    }

    #[test]
    fn add_examples() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
        assert_eq!(&z(3, 1) + &z(3, 2), q(-1, 1));
        let x = &z(5, 2) + &q(3, 7);
        assert_eq!(&x + &CycloScalar::zero(), x);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&z(4, 1) * &z(4, 1), q(-1, 1));
        assert_eq!(&(&z(3, 1) * &z(3, 1)) * &z(3, 1), CycloScalar::one());
        let a = &CycloScalar::one() + &z(3, 1);
        let b = &CycloScalar::one() + &z(3, 2);
        assert_eq!(&a * &b, CycloScalar::one());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(q(2, 1).inverse().unwrap(), q(1, 2));
        for m in 1..=12 {
            assert_eq!(z(m, 1).inverse().unwrap(), z(m, m as i64 - 1));
        }
        let a = &CycloScalar::one() + &z(4, 1);
        let expected = &(&CycloScalar::one() - &z(4, 1)) * &q(1, 2);
        assert_eq!(a.inverse().unwrap(), expected);
        assert_eq!(CycloScalar::zero().inverse(), Err(Error::ZeroInverse));
    }

    #[test]
    fn roots_of_unity() {
        assert!(z(1, 0).is_one());
        assert_eq!(z(2, 1), q(-1, 1));
        let z3 = z(3, 1);
        assert!(!z3.is_one());
        assert!(z3.pow(3).unwrap().is_one());
        for m in 1..=12u32 {
            for k in 0..m as i64 {
                assert!(z(m, k).pow(m as i64).unwrap().is_one(), "m={m} k={k}");
                let order = m as i64 / (m as i64).gcd(&k);
                for j in 1..order {
                    assert!(!z(m, k).pow(j).unwrap().is_one());
                }
            }
        }
        // zeta_6 lives in Q(zeta_3)
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(&z(6, 1) * &z(6, 1), z(3, 1));
    }

    #[test]
    fn torsion_orders() {
        assert_eq!(torsion_order(1), 2);
        assert_eq!(torsion_order(3), 6);
        assert_eq!(torsion_order(4), 4);
        // -zeta_3 has order 6, found by repeated multiplication
        let w = -z(3, 1);
        let order = (1..=12)
            .find(|&j| w.pow(j).unwrap().is_one())
            .unwrap();
        assert_eq!(order, 6);
        let i = z(4, 1);
        let order = (1..=12).find(|&j| i.pow(j).unwrap().is_one()).unwrap();
        assert_eq!(order, 4);
    }

    #[test]
    fn mixed_conductors_lift() {
        // zeta_12^4 = zeta_3
        assert_eq!(z(12, 4), z(3, 1));
        let s = &z(4, 1) + &z(3, 1);
        assert_eq!(s.conductor(), 12);
        assert_eq!(&s - &z(3, 1), z(4, 1));
    }

    #[test]
    fn text_round_trip() {
        for s in [
            &q(5, 6),
            &(&z(3, 1) * &q(-2, 3)),
            &(&z(4, 1) + &q(1, 2)),
            &(&z(5, 3) - &z(5, 1)),
        ] {
            let text = s.to_string();
            assert_eq!(&text.parse::<CycloScalar>().unwrap(), s, "{text}");
        }
        assert_eq!("z4^2".parse::<CycloScalar>().unwrap(), q(-1, 1));
        assert!("z4".parse::<CycloScalar>().is_err());
    }

    #[test]
    fn normalization_idempotent() {
        let a = &z(3, 1) + &z(3, 2);
        assert_eq!(a.conductor(), 1);
        let once = a.clone().normalized();
        let twice = once.clone().normalized();
        assert_eq!(once.coeffs(), twice.coeffs());
        assert_eq!(once.conductor(), twice.conductor());
    }
}
