//! Finite fields `F_q` with discrete-log tables.
//!
//! Elements are indices `0..q`: the base-`p` digits of an index are the coefficients
//! of a polynomial in a root of a primitive polynomial of degree `f`, so index `0`
//! is zero and `1` is one. Multiplication goes through the log table of the fixed
//! generator `g`, whose discrete log is `1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Fq {
    q: u64,
    p: u64,
    degree: u32,
    /// `exp[k]` is the index of `g^k` for `0 <= k < q - 1`.
    exp: Vec<u32>,
    /// `log[a]` is the discrete log of the nonzero index `a`.
    log: Vec<u32>,
    /// Absolute trace to `F_p`, as an integer in `0..p`.
    trace: Vec<u32>,
}

/// Splits `q = p^f`, or returns `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut m, mut f) = (q, 0);
    while m % p == 0 {
        m /= p;
        f += 1;
    }
    (m == 1).then_some((p, f))
}

impl Fq {
    /// The field of order `q`, built once per process and shared afterwards.
    pub fn new(q: u64) -> Result<Arc<Fq>> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Fq>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().expect("field cache poisoned").get(&q) {
            return Ok(f.clone());
        }
        let (p, degree) =
            prime_power(q).ok_or_else(|| Error::Config(format!("q = {q} is not a prime power")))?;
        if q > 1 << 16 {
            return Err(Error::Resource(format!(
                "field of order {q} is too large for tables"
            )));
        }
        let f = Arc::new(Self::build(q, p, degree));
        cache
            .lock()
            .expect("field cache poisoned")
            .insert(q, f.clone());
        Ok(f)
    }

    fn build(q: u64, p: u64, degree: u32) -> Fq {
        let d = degree as usize;
        let digits = |mut a: u64| -> Vec<u64> {
            (0..d)
                .map(|_| {
                    let r = a % p;
                    a /= p;
                    r
                })
                .collect()
        };
        let index = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c);
        // search monic polynomials x^f + c_{f-1} x^{f-1} + ... + c_0 for one whose root
        // x has multiplicative order exactly q - 1; such a polynomial is irreducible
        for tail in 0..q {
            let c = digits(tail);
            if d > 1 && c[0] == 0 {
                continue;
            }
            let times_x = |v: &[u64]| -> Vec<u64> {
                if d == 1 {
                    // F_p itself: the "root" is -c_0, so multiplication is by that scalar
                    return vec![(v[0] * ((p - c[0]) % p)) % p];
                }
                let top = v[d - 1];
                let mut out = vec![0u64; d];
                for i in (1..d).rev() {
                    out[i] = v[i - 1];
                }
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (*o + top * ((p - c[i]) % p)) % p;
                }
                out
            };
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![u32::MAX; q as usize];
            let mut cur = vec![0u64; d];
            cur[0] = 1;
            let mut ok = true;
            for k in 0..q - 1 {
                let idx = index(&cur) as usize;
                if idx == 0 || log[idx] != u32::MAX {
                    ok = false;
                    break;
                }
                log[idx] = k as u32;
                exp.push(idx as u32);
                cur = times_x(&cur);
            }
            if !ok || index(&cur) != 1 {
                continue;
            }
            let mut field = Fq {
                q,
                p,
                degree,
                exp,
                log,
                trace: vec![0; q as usize],
            };
            for a in 0..q as u32 {
                let mut t = 0u32;
                let mut x = a;
                for _ in 0..degree {
                    t = field.add(t, x);
                    x = field.pow(x, p);
                }
                debug_assert!((t as u64) < p, "trace must land in the prime field");
                field.trace[a as usize] = t;
            }
            return field;
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Index of the fixed generator of `F_q^x`.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u32;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p as u32;
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        for _ in 0..self.degree {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.q - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % m;
        self.exp[k as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let m = self.q - 1;
        self.exp[((self.log[a as usize] as u64 * (e % m)) % m) as usize]
    }

    /// Discrete log of a nonzero element with respect to [`Fq::generator`].
    pub fn dlog(&self, a: u32) -> Option<u64> {
        (a != 0 && (a as u64) < self.q).then(|| self.log[a as usize] as u64)
    }

    /// `g^k`.
    pub fn exp(&self, k: i64) -> u32 {
        self.exp[k.rem_euclid(self.q as i64 - 1) as usize]
    }

    /// Absolute trace `F_q -> F_p`.
    pub fn trace(&self, a: u32) -> u64 {
        self.trace[a as usize] as u64
    }

    /// Discrete log of `-1`.
    pub fn minus_one_log(&self) -> u64 {
        if self.p == 2 {
            0
        } else {
            (self.q - 1) / 2
        }
    }

    /// Nonzero elements in generator-power order.
    pub fn units(&self) -> impl Iterator<Item = u32> + '_ {
        self.exp.iter().copied()
    }
}
