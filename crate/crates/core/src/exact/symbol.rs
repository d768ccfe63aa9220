//! Tame Hilbert symbols, the sign `epsilon`, and Gauss sums over `F_q`.

use serde::{Deserialize, Serialize};

use super::cyclo::Cyclo;
use super::field::Fq;
use crate::error::{Error, Result};

/// An element `varpi^m * u` of `F^x / (1 + p)`, with the unit stored by its discrete log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TameElement {
    pub valuation: i64,
    /// Discrete log of the residue unit, reduced modulo `q - 1`.
    pub unit_log: u64,
    q: u64,
}

impl TameElement {
    pub fn new(field: &Fq, valuation: i64, unit_log: i64) -> Self {
        let m = field.order() as i64 - 1;
        TameElement {
            valuation,
            unit_log: unit_log.rem_euclid(m) as u64,
            q: field.order(),
        }
    }

    /// The uniformizer `varpi`.
    pub fn uniformizer(field: &Fq) -> Self {
        Self::new(field, 1, 0)
    }

    /// A unit given by its field index.
    pub fn unit(field: &Fq, index: u32) -> Result<Self> {
        let log = field.dlog(index).ok_or_else(|| {
            Error::Config(format!("{index} is not a unit of F_{}", field.order()))
        })?;
        Ok(Self::new(field, 0, log as i64))
    }

    /// The class of `-1`.
    pub fn minus_one(field: &Fq) -> Self {
        Self::new(field, 0, field.minus_one_log() as i64)
    }

    pub fn mul(&self, other: &TameElement) -> TameElement {
        assert_eq!(
            self.q, other.q,
            "tame elements over different residue fields"
        );
        let m = self.q - 1;
        TameElement {
            valuation: self.valuation + other.valuation,
            unit_log: (self.unit_log + other.unit_log) % m,
            q: self.q,
        }
    }

    pub fn inverse(&self) -> TameElement {
        let m = self.q - 1;
        TameElement {
            valuation: -self.valuation,
            unit_log: (m - self.unit_log) % m,
            q: self.q,
        }
    }
}

fn require_tame(q: u64, n: u64) -> Result<()> {
    if n == 0 || !(q - 1).is_multiple_of(n) {
        return Err(Error::Config(format!(
            "n = {n} does not divide q - 1 = {}",
            q - 1
        )));
    }
    Ok(())
}

/// Exponent `k` in `(a, b)_n = zeta_n^k` for the tame symbol
/// `((-1)^(m_a m_b) u_a^(m_b) u_b^(-m_a))^((q-1)/n)`.
///
/// The value `g^((q-1)/n)` of the fixed generator is identified with `zeta_n`, so the
/// exponent is the discrete log of the bracketed unit reduced modulo `n`.
pub fn hilbert_symbol(field: &Fq, n: u64, a: &TameElement, b: &TameElement) -> Result<u64> {
    let q = field.order();
    require_tame(q, n)?;
    let m = (q - 1) as i128;
    let (ma, mb) = (a.valuation as i128, b.valuation as i128);
    let log =
        ma * mb * field.minus_one_log() as i128 + mb * a.unit_log as i128 - ma * b.unit_log as i128;
    Ok((log.rem_euclid(m) % n as i128) as u64)
}

/// `epsilon = (-1, varpi)_n`, which equals `(-1)^((q-1)/n)` in odd characteristic.
pub fn epsilon(q: u64, n: u64) -> Result<i64> {
    require_tame(q, n)?;
    if q.is_multiple_of(2) {
        // -1 = 1 in characteristic two
        return Ok(1);
    }
    Ok(if ((q - 1) / n).is_multiple_of(2) {
        1
    } else {
        -1
    })
}

/// `sum_{u in F_q^x} zeta_p^Tr(c u) * zeta_n^(k dlog u)`, an element of conductor `p n`.
pub fn gauss_sum(field: &Fq, n: u64, k: i64, c: u32) -> Result<Cyclo> {
    let q = field.order();
    require_tame(q, n)?;
    if c == 0 {
        return Err(Error::Config(
            "additive character scale must be a unit".into(),
        ));
    }
    let p = field.characteristic();
    let conductor = p * n;
    let mut counts = vec![0i64; conductor as usize];
    for u in field.units() {
        let tr = field.trace(field.mul(c, u));
        let log = field.dlog(u).expect("units have logs") as i64;
        let e =
            tr as i64 * n as i64 + (k.rem_euclid(n as i64) * log).rem_euclid(n as i64) * p as i64;
        counts[(e % conductor as i64) as usize] += 1;
    }
    Ok(Cyclo::from_power_counts(conductor, &counts))
}

/// Gauss sum against the character `u -> (varpi, u)_n^k` with the unit additive scale.
///
/// Under the fixed symbol orientation `(varpi, u)_n = zeta_n^(-dlog u)`.
pub fn symbol_gauss_sum(field: &Fq, n: u64, k: i64) -> Result<Cyclo> {
    gauss_sum(field, n, -k, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniformizer_self_pairing_is_epsilon() {
        let f5 = Fq::new(5).unwrap();
        let w = TameElement::uniformizer(&f5);
        assert_eq!(hilbert_symbol(&f5, 4, &w, &w).unwrap(), 2);
        let f7 = Fq::new(7).unwrap();
        let w = TameElement::uniformizer(&f7);
        assert_eq!(hilbert_symbol(&f7, 3, &w, &w).unwrap(), 0);
    }

    #[test]
    fn units_pair_trivially() {
        let f = Fq::new(13).unwrap();
        for a in 1..13 {
            for b in 1..13 {
                let (x, y) = (
                    TameElement::unit(&f, a).unwrap(),
                    TameElement::unit(&f, b).unwrap(),
                );
                assert_eq!(hilbert_symbol(&f, 12, &x, &y).unwrap(), 0);
            }
        }
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon(5, 4).unwrap(), -1);
        assert_eq!(epsilon(5, 2).unwrap(), 1);
        assert_eq!(epsilon(11, 1).unwrap(), 1);
        assert!(matches!(epsilon(5, 3), Err(Error::Config(_))));
    }

    #[test]
    fn trivial_character_gauss_sum_is_minus_one() {
        let f = Fq::new(7).unwrap();
        for n in [1, 2, 3, 6] {
            assert_eq!(gauss_sum(&f, n, 0, 1).unwrap(), Cyclo::from_int(-1));
            assert_eq!(gauss_sum(&f, n, n as i64, 3).unwrap(), Cyclo::from_int(-1));
        }
    }

    #[test]
    fn quadratic_gauss_sum_over_f3() {
        let f = Fq::new(3).unwrap();
        let g = gauss_sum(&f, 2, 1, 1).unwrap();
        let expected = Cyclo::root_of_unity(3, 1) - Cyclo::root_of_unity(3, 2);
        assert_eq!(g, expected);
        assert_eq!(&g * &g, Cyclo::from_int(-3));
    }
}
