//! Cover data `(n, Q)` on a root datum: the bilinear forms `B_Q` and `D`, the modified
//! coroots `n_alpha alpha^vee`, the sublattices `Y_{Q,n}` and `Y^sc_{Q,n}`, the finite
//! quotient `X_{Q,n} = Y / Y_{Q,n}`, and the arithmetic classification predicates.

use std::sync::{Arc, OnceLock};

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{dot, kernel, IVec, IntMatrix, Lattice, LatticeQuotient};
use crate::rootdata::{CartanType, Coweight, Flavor, RootDatum, WeylGroup};

/// The serialized form of a cover: `{"type","rank","flavor","n","Q":[...],"gl_pq":[p,q]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverConfig {
    #[serde(rename = "type")]
    pub cartan_type: CartanType,
    pub rank: usize,
    #[serde(default)]
    pub flavor: Flavor,
    pub n: u64,
    /// One value for the short coroots, one per coroot length, or one per simple coroot.
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q_values: Option<Vec<i64>>,
    /// `(p, q)` with `B(e_i, e_i) = 2p` and `B(e_i, e_j) = q`, for the GL flavor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gl_pq: Option<(i64, i64)>,
}

/// An `n`-fold cover of a split group, determined by the Weyl-invariant form `Q`.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    datum: RootDatum,
    n: u64,
    /// Gram matrix of `B_Q` in the basis of `Y`.
    bq: IntMatrix,
    /// Upper-triangular `D` with `D + D^T = B_Q`.
    d: IntMatrix,
    config: CoverConfig,
    weyl: OnceLock<Arc<WeylGroup>>,
}

/// Lattice-level classification of a cover, with persistence for one twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub saturated: bool,
    pub aligned: bool,
    pub very_saturated: bool,
    pub oasitic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_persistent: Option<bool>,
}

/// The sublattices attached to a cover.
#[derive(Clone, Debug)]
pub struct Sublattices {
    pub y: Lattice,
    pub y_sc: Lattice,
    pub y_qn: Lattice,
    pub y_qn_sc: Lattice,
    /// `P_{Q,n}` in coweight coordinates: `n_alpha` divides `<alpha, lambda>` for simple `alpha`.
    pub p_qn: Lattice,
}

impl CoverConfig {
    pub fn new(cartan_type: CartanType, rank: usize, flavor: Flavor, n: u64, q: &[i64]) -> Self {
        CoverConfig {
            cartan_type,
            rank,
            flavor,
            n,
            q_values: Some(q.to_vec()),
            gl_pq: None,
        }
    }

    pub fn gl(rank: usize, n: u64, p: i64, q: i64) -> Self {
        CoverConfig {
            cartan_type: CartanType::A,
            rank: rank - 1,
            flavor: Flavor::Gl,
            n,
            q_values: None,
            gl_pq: Some((p, q)),
        }
    }
}

impl CoverSpec {
    pub fn new(config: CoverConfig) -> Result<Self> {
        if config.n == 0 {
            return Err(Error::Config(
                "the degree n of the cover must be positive".into(),
            ));
        }
        let datum = RootDatum::new(config.cartan_type, config.rank, config.flavor)?;
        let bq = match (config.flavor, config.gl_pq) {
            (Flavor::Gl, Some((p, q))) => {
                if config.q_values.is_some() {
                    return Err(Error::Config("GL covers take gl_pq, not Q".into()));
                }
                let dim = datum.dim();
                let mut b = IntMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        b[(i, j)] = if i == j { 2 * p } else { q };
                    }
                }
                b
            }
            (Flavor::Gl, None) => return Err(Error::Config("GL covers require gl_pq".into())),
            (_, Some(_)) => {
                return Err(Error::Config("gl_pq applies only to the GL flavor".into()))
            }
            (_, None) => semisimple_form(&datum, config.q_values.as_deref().unwrap_or(&[1]))?,
        };
        for (i, s) in datum.reflections().iter().enumerate() {
            if &(&s.transpose() * &bq) * s != bq {
                return Err(Error::Config(format!(
                    "B_Q is not invariant under s_{}",
                    i + 1
                )));
            }
        }
        let dim = datum.dim();
        let mut d = IntMatrix::zeros(dim, dim);
        for i in 0..dim {
            d[(i, i)] = bq[(i, i)] / 2;
            for j in i + 1..dim {
                d[(i, j)] = bq[(i, j)];
            }
        }
        Ok(CoverSpec {
            datum,
            n: config.n,
            bq,
            d,
            config,
            weyl: OnceLock::new(),
        })
    }

    /// Simply-connected cover of the given type with `Q(short coroot) = q_short`.
    pub fn simply_connected(t: CartanType, rank: usize, n: u64, q_short: i64) -> Result<Self> {
        Self::new(CoverConfig::new(t, rank, Flavor::Sc, n, &[q_short]))
    }

    pub fn config(&self) -> &CoverConfig {
        &self.config
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    /// The Weyl group of the datum, enumerated on first use.
    pub fn weyl_group(&self) -> Result<Arc<WeylGroup>> {
        if let Some(w) = self.weyl.get() {
            return Ok(w.clone());
        }
        let w = Arc::new(self.datum.weyl_group()?);
        Ok(self.weyl.get_or_init(|| w).clone())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn name(&self) -> String {
        match self.config.gl_pq {
            Some((p, q)) => format!("{} n={} (p,q)=({p},{q})", self.datum.name(), self.n),
            None => format!(
                "{} n={} Q={:?}",
                self.datum.name(),
                self.n,
                self.simple_q_values()
            ),
        }
    }

    pub fn bq_matrix(&self) -> &IntMatrix {
        &self.bq
    }

    pub fn d_matrix(&self) -> &IntMatrix {
        &self.d
    }

    pub fn bq(&self, y: &[i64], z: &[i64]) -> i64 {
        dot(y, &self.bq.apply(z))
    }

    pub fn d(&self, y: &[i64], z: &[i64]) -> i64 {
        dot(y, &self.d.apply(z))
    }

    /// `Q(y) = D(y, y)`.
    pub fn q(&self, y: &[i64]) -> i64 {
        self.d(y, y)
    }

    pub fn simple_q_values(&self) -> Vec<i64> {
        self.datum
            .simple_coroots()
            .iter()
            .map(|c| self.q(c))
            .collect()
    }

    /// `n / gcd(n, Q(alpha^vee))` for the coroot `alpha^vee`.
    pub fn n_alpha(&self, coroot: &[i64]) -> i64 {
        let n = self.n as i64;
        n / gcd(n, self.q(coroot))
    }

    pub fn simple_n_alpha(&self, i: usize) -> i64 {
        self.n_alpha(self.datum.simple_coroot(i))
    }

    /// `n_alpha alpha^vee` for the simple coroots.
    pub fn modified_simple_coroots(&self) -> Vec<IVec> {
        (0..self.datum.rank())
            .map(|i| {
                let k = self.simple_n_alpha(i);
                self.datum.simple_coroot(i).iter().map(|x| k * x).collect()
            })
            .collect()
    }

    /// `Y_{Q,n} = Y ∩ n Y*`, the `y` with `B_Q(y, Y) ⊆ nZ`.
    pub fn y_qn(&self) -> Lattice {
        let dim = self.datum.dim();
        let n = self.n as i64;
        // kernel of [B | -n I] projected to its first block
        let rows: Vec<IVec> = (0..dim)
            .map(|i| {
                let mut row = self.bq.row(i).to_vec();
                row.extend((0..dim).map(|j| if i == j { -n } else { 0 }));
                row
            })
            .collect();
        let gens: Vec<IVec> = kernel(&IntMatrix::from_rows(&rows))
            .into_iter()
            .map(|v| v[..dim].to_vec())
            .collect();
        Lattice::from_generators(dim, &gens)
    }

    /// `Y^sc_{Q,n}`, spanned by the modified simple coroots.
    pub fn y_qn_sc(&self) -> Lattice {
        Lattice::from_generators(self.datum.dim(), &self.modified_simple_coroots())
    }

    pub fn sublattices(&self) -> Sublattices {
        let rank = self.datum.coweight_basis().len();
        let p_gens: Vec<IVec> = (0..rank)
            .map(|i| {
                let mut e = vec![0; rank];
                e[i] = match self.datum.flavor() {
                    Flavor::Gl => 1,
                    _ => self.simple_n_alpha(i),
                };
                e
            })
            .collect();
        Sublattices {
            y: Lattice::standard(self.datum.dim()),
            y_sc: self.datum.coroot_lattice(),
            y_qn: self.y_qn(),
            y_qn_sc: self.y_qn_sc(),
            p_qn: Lattice::from_generators(rank, &p_gens),
        }
    }

    /// `X_{Q,n} = Y / Y_{Q,n}`, finite even for degenerate `B_Q` since `nY ⊆ Y_{Q,n}`.
    pub fn quotient(&self) -> Result<LatticeQuotient> {
        LatticeQuotient::new(self.y_qn())
    }

    /// `X^sc_{Q,n} = Y / Y^sc_{Q,n}`, finite only for semisimple data.
    pub fn sc_quotient(&self) -> Result<LatticeQuotient> {
        LatticeQuotient::new(self.y_qn_sc())
    }

    /// Gram determinant of `B_Q`.
    pub fn det_bq(&self) -> i64 {
        self.bq.determinant()
    }

    /// `I_Delta * prod Q(alpha^vee)` over simple coroots, valid for simply-connected data.
    pub fn det_bq_closed_form(&self) -> Option<i64> {
        (self.datum.flavor() == Flavor::Sc).then(|| {
            self.datum.index_of_connection() * self.simple_q_values().iter().product::<i64>()
        })
    }

    pub fn is_saturated(&self) -> bool {
        self.datum.coroot_lattice().intersect(&self.y_qn()) == self.y_qn_sc()
    }

    /// The `n'` with `Y^sc_{Q,n} = n' Y^sc`, if any.
    pub fn alignment(&self) -> Option<i64> {
        self.y_qn_sc()
            .scalar_multiple_of(&self.datum.coroot_lattice())
    }

    pub fn is_oasitic(&self) -> bool {
        let n = self.n as i64;
        self.datum
            .highest_coroot_coeffs()
            .iter()
            .all(|&c| gcd(n, c) == 1)
            && gcd(n, self.det_bq()) == 1
    }

    /// The arithmetic predicates, plus `z`-persistence when a twist is supplied.
    pub fn classify(&self, z: Option<&Coweight>) -> Result<Classification> {
        let saturated = self.is_saturated();
        let aligned = self.alignment().is_some();
        let z_persistent = z
            .map(|z| crate::orbits::is_z_persistent(self, z))
            .transpose()?;
        Ok(Classification {
            saturated,
            aligned,
            very_saturated: saturated && aligned,
            oasitic: self.is_oasitic(),
            z_persistent,
        })
    }

    /// `epsilon = (-1, varpi)_n` for residue field size `q`.
    pub fn epsilon(&self, q: u64) -> Result<i64> {
        crate::exact::epsilon(q, self.n)
    }
}

/// `B_Q` on `Y` for a semisimple datum, from `Q` on the simple coroots.
fn semisimple_form(datum: &RootDatum, q_input: &[i64]) -> Result<IntMatrix> {
    let r = datum.rank();
    let lengths: Vec<i64> = (0..r).map(|i| datum.simple_coroot_length(i)).collect();
    let short_q = |q: i64| -> Vec<i64> { lengths.iter().map(|l| l * q).collect() };
    let distinct: Vec<i64> = {
        let mut l = lengths.clone();
        l.sort();
        l.dedup();
        l
    };
    let qs = match q_input.len() {
        1 => short_q(q_input[0]),
        2 if distinct.len() == 2 && r != 2 => lengths
            .iter()
            .map(|&l| if l == 1 { q_input[0] } else { q_input[1] })
            .collect(),
        k if k == r => q_input.to_vec(),
        k => {
            return Err(Error::Config(format!(
                "Q needs 1 value, one per coroot length, or {r} values; got {k}"
            )))
        }
    };
    if qs.contains(&0) {
        return Err(Error::Config("Q must be nonzero on every coroot".into()));
    }
    let c = datum.cartan();
    // B(a_i^v, a_j^v) = Q(a_j^v) <a_j, a_i^v>
    let mut bsc = IntMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            bsc[(i, j)] = qs[j] * c[(j, i)];
        }
    }
    if bsc != bsc.transpose() {
        return Err(Error::Config(format!(
            "Q values {qs:?} are not Weyl-invariant"
        )));
    }
    match datum.flavor() {
        Flavor::Sc => Ok(bsc),
        Flavor::Adjoint => {
            // Y basis in coroot coordinates is C^-1 = inv / den
            let (inv, den) = c.inverse_scaled().expect("Cartan matrices are invertible");
            let num = &(&inv.transpose() * &bsc) * &inv;
            let mut b = IntMatrix::zeros(r, r);
            for i in 0..r {
                for j in 0..r {
                    let x = num[(i, j)];
                    if x % (den * den) != 0 {
                        return Err(Error::Config(
                            "Q does not extend integrally to the coweight lattice".into(),
                        ));
                    }
                    b[(i, j)] = x / (den * den);
                }
            }
            if (0..r).any(|i| b[(i, i)] % 2 != 0) {
                return Err(Error::Config(
                    "Q is not integral on the coweight lattice".into(),
                ));
            }
            Ok(b)
        }
        Flavor::Gl => unreachable!("GL forms come from gl_pq"),
    }
}
