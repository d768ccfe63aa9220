//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! An element is a polynomial in `zeta_N` of degree `< phi(N)`, reduced modulo the
//! `N`-th cyclotomic polynomial. Operands with different conductors are lifted to
//! the least common multiple through `zeta_M = zeta_N^(N/M)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Cached reduction data for one conductor.
struct Field {
    degree: usize,
    /// `powers[k]` is `x^k mod Phi_N` for `0 <= k < N`.
    powers: Vec<Vec<i64>>,
    phi: Vec<i64>,
}

fn field(n: u64) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("cyclotomic cache poisoned").get(&n) {
        return f.clone();
    }
    let phi = cyclotomic_polynomial(n);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; degree];
    if degree > 0 {
        cur[0] = 1;
    }
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow coefficient with the monic Phi_N
        let top = cur[degree - 1];
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for (c, p) in cur.iter_mut().zip(&phi) {
                *c -= top * p;
            }
        }
    }
    let f = Arc::new(Field {
        degree,
        powers,
        phi,
    });
    cache
        .lock()
        .expect("cyclotomic cache poisoned")
        .insert(n, f.clone());
    f
}

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs a positive index");
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Euler's totient, the degree of `Q(zeta_n)`.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// An element of the cyclotomic field `Q(zeta_N)`.
#[derive(Clone)]
pub struct Cyclo {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo {
            conductor: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(v: BigRational) -> Self {
        Cyclo {
            conductor: 1,
            coeffs: vec![v],
        }
    }

    /// `num / den` as a rational element.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `zeta_n^k` with `zeta_n = exp(2 pi i / n)`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1, "root of unity needs a positive order");
        let mut counts = vec![0i64; n as usize];
        counts[k.rem_euclid(n as i64) as usize] = 1;
        Self::from_power_counts(n, &counts)
    }

    /// `sum_k counts[k] * zeta_n^k`, the natural shape of a character sum.
    pub fn from_power_counts(n: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, n, "one count per power of zeta_n");
        let f = field(n);
        let mut acc = vec![0i64; f.degree];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, p) in acc.iter_mut().zip(&f.powers[k]) {
                    *a += c * p;
                }
            }
        }
        Cyclo {
            conductor: n,
            coeffs: acc
                .into_iter()
                .map(|a| BigRational::from_integer(a.into()))
                .collect(),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients in the power basis `1, zeta_N, ..., zeta_N^(phi(N)-1)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The integer value, when the element lies in `Z`.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// Coefficients of this element re-expressed over conductor `n`, a multiple of ours.
    fn lifted(&self, n: u64) -> Vec<BigRational> {
        if n == self.conductor {
            return self.coeffs.clone();
        }
        debug_assert_eq!(n % self.conductor, 0);
        let step = (n / self.conductor) as usize;
        let f = field(n);
        let mut out = vec![BigRational::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&f.powers[i * step]) {
                if *p != 0 {
                    *o += c * BigRational::from_integer((*p).into());
                }
            }
        }
        out
    }

    /// This element viewed in `Q(zeta_n)`; `n` must be a multiple of the conductor.
    pub fn lift_to(&self, n: u64) -> Cyclo {
        assert_eq!(
            n % self.conductor,
            0,
            "lift target must be a multiple of the conductor"
        );
        Cyclo {
            conductor: n,
            coeffs: self.lifted(n),
        }
    }

    fn common(&self, other: &Cyclo) -> (u64, Vec<BigRational>, Vec<BigRational>) {
        let n = self.conductor.lcm(&other.conductor);
        (n, self.lifted(n), other.lifted(n))
    }

    /// Reduces a polynomial of degree `< 2N` modulo `Phi_N`.
    fn reduce(n: u64, poly: Vec<BigRational>) -> Vec<BigRational> {
        let f = field(n);
        let mut out = vec![BigRational::zero(); f.degree];
        for (k, c) in poly.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < f.degree {
                out[k] += c;
                continue;
            }
            for (o, p) in out.iter_mut().zip(&f.powers[k % n as usize]) {
                if *p != 0 {
                    *o += &c * BigRational::from_integer((*p).into());
                }
            }
        }
        out
    }

    /// Complex conjugate, `zeta -> zeta^-1`.
    pub fn conj(&self) -> Cyclo {
        let n = self.conductor;
        let f = field(n);
        let mut out = vec![BigRational::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (n as usize - i) % n as usize;
            for (o, p) in out.iter_mut().zip(&f.powers[k]) {
                if *p != 0 {
                    *o += c * BigRational::from_integer((*p).into());
                }
            }
        }
        Cyclo {
            conductor: n,
            coeffs: out,
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Phi_N`.
    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let n = self.conductor;
        let f = field(n);
        let modulus: Vec<BigRational> = f
            .phi
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let inv = poly_inverse_mod(&trim(self.coeffs.clone()), &modulus);
        let mut coeffs = inv;
        coeffs.resize(f.degree, BigRational::zero());
        Ok(Cyclo {
            conductor: n,
            coeffs,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Cyclo> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclo::one();
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

    pub fn checked_div(&self, other: &Cyclo) -> Result<Cyclo> {
        Ok(self * &other.inv()?)
    }

    /// Image under the complex embedding `zeta_N -> exp(2 pi i / N)`.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(v, 2.0 * std::f64::consts::PI * k as f64 / n)
            })
            .sum()
    }

    /// Squared absolute value `self * conj(self)`, a totally real element.
    pub fn norm_sq(&self) -> Cyclo {
        self * &self.conj()
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= &c * bi;
            }
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    (q, trim(r))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Inverse of `a` modulo the irreducible `m`.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    // invariant: s * a == r (mod m)
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant because m is irreducible and a is nonzero mod m
    let c = r0[0].clone();
    let (_, s) = poly_divrem(&s0, m);
    s.into_iter().map(|x| x / &c).collect()
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match k {
                0 => format!("{c}"),
                _ if c.is_one() => format!("z{}^{k}", self.conductor),
                _ => format!("{c}*z{}^{k}", self.conductor),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl From<i64> for Cyclo {
    fn from(v: i64) -> Self {
        Cyclo::from_int(v)
    }
}

impl From<BigRational> for Cyclo {
    fn from(v: BigRational) -> Self {
        Cyclo::from_rational(v)
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let (n, mut a, b) = self.common(rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Cyclo {
            conductor: n,
            coeffs: a,
        }
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        let (n, mut a, b) = self.common(rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x -= y;
        }
        Cyclo {
            conductor: n,
            coeffs: a,
        }
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if rhs.conductor == 1 {
            let c = &rhs.coeffs[0];
            return Cyclo {
                conductor: self.conductor,
                coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            };
        }
        if self.conductor == 1 {
            return rhs * self;
        }
        let (n, a, b) = self.common(rhs);
        Cyclo {
            conductor: n,
            coeffs: Cyclo::reduce(n, poly_mul(&a, &b)),
        }
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &Cyclo) -> Cyclo {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Cyclo> for &'a Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> std::iter::Sum<&'a Cyclo> for Cyclo {
    fn sum<I: Iterator<Item = &'a Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// Rational helper used by callers that build exact scalars from small integers.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_match_known_values() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(
            cyclotomic_polynomial(105).iter().map(|c| c.abs()).max(),
            Some(2)
        );
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = Cyclo::root_of_unity(3, 1) + Cyclo::root_of_unity(3, 2) + Cyclo::one();
        assert!(s.is_zero());
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let i = Cyclo::root_of_unity(4, 1);
        assert_eq!(&i * &i, Cyclo::from_int(-1));
    }

    #[test]
    fn conjugate_of_root_is_inverse() {
        let z = Cyclo::root_of_unity(5, 1);
        assert!((z.conj() * z).is_one());
    }

    #[test]
    fn mixed_conductors_lift_to_lcm() {
        let a = Cyclo::root_of_unity(4, 1);
        let b = Cyclo::root_of_unity(6, 1);
        let c = &a * &b;
        assert_eq!(c.conductor(), 12);
        assert_eq!(c, Cyclo::root_of_unity(12, 5));
        assert_eq!(Cyclo::root_of_unity(2, 1), Cyclo::from_int(-1));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(Cyclo::zero().inv(), Err(Error::ZeroDivision));
    }

    #[test]
    fn inverse_round_trips() {
        let x = Cyclo::root_of_unity(7, 1) + Cyclo::from_int(2) - Cyclo::root_of_unity(7, 3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }

    #[test]
    fn complex_embedding_matches_exponential() {
        let z = Cyclo::root_of_unity(8, 3).to_complex();
        let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 3.0 / 8.0);
        assert!((z - e).norm() < 1e-12);
    }
}
