//! Root data of split almost-simple groups and of `GL_r`, with Weyl groups realized as
//! integer matrix groups acting on the cocharacter lattice `Y`.
//!
//! Conventions: simple roots are labelled as in Bourbaki's plates, the Cartan matrix
//! entry `(i, j)` is `<alpha_i, alpha_j^vee>`, and `X` carries the basis dual to the
//! chosen basis of `Y`, so pairings are plain dot products.

mod affine;
mod weyl;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{group_bound, Error, Result};
use crate::lattice::{dot, IVec, IntMatrix, Lattice, LatticeQuotient};

pub use affine::ExtAffineElt;
pub use weyl::{ConjugacyClasses, Subgroup, WeylElt, WeylGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl std::str::FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "E" => Ok(CartanType::E),
            "F" => Ok(CartanType::F),
            "G" => Ok(CartanType::G),
            other => Err(Error::Config(format!("unknown Cartan type {other:?}"))),
        }
    }
}

impl std::fmt::Display for CartanType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Which lattice between the coroot and coweight lattices plays the role of `Y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `Y` is the coroot lattice.
    #[default]
    #[serde(alias = "simply-connected", alias = "simply_connected")]
    Sc,
    /// `Y` is the coweight lattice.
    Adjoint,
    /// `GL_{r+1}` on `Z^(r+1)`, type `A_r` only.
    Gl,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sc" | "simply-connected" | "simply_connected" => Ok(Flavor::Sc),
            "adjoint" | "ad" => Ok(Flavor::Adjoint),
            "gl" => Ok(Flavor::Gl),
            other => Err(Error::Config(format!("unknown lattice flavor {other:?}"))),
        }
    }
}

/// A positive root with its coroot, in lattice coordinates and in simple coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Root {
    /// Coordinates in `X`.
    pub root: IVec,
    /// Coordinates in `Y`.
    pub coroot: IVec,
    /// Coefficients in the simple roots.
    pub root_coeffs: IVec,
    /// Coefficients in the simple coroots.
    pub coroot_coeffs: IVec,
    /// Squared length of the coroot relative to a short coroot: 1, 2 or 3.
    pub coroot_length: i64,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.root_coeffs.iter().sum()
    }
}

/// A rational cocharacter `num / den` in `Y` coordinates, used for coweights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coweight {
    pub num: IVec,
    pub den: i64,
}

impl Coweight {
    pub fn integral(y: IVec) -> Self {
        Coweight { num: y, den: 1 }
    }

    pub fn zero(dim: usize) -> Self {
        Self::integral(vec![0; dim])
    }

    pub fn is_integral(&self) -> bool {
        self.num.iter().all(|x| x % self.den == 0)
    }

    pub fn to_integral(&self) -> Option<IVec> {
        self.is_integral()
            .then(|| self.num.iter().map(|x| x / self.den).collect())
    }

    /// `w z - z`, which lies in the coroot lattice for every coweight.
    pub fn shift(&self, w: &IntMatrix) -> IVec {
        let wz = w.apply(&self.num);
        wz.iter()
            .zip(&self.num)
            .map(|(a, b)| {
                let d = a - b;
                assert_eq!(d % self.den, 0, "w z - z must be integral");
                d / self.den
            })
            .collect()
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        let den = self.den * other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * other.den + b * self.den)
            .collect();
        Coweight { num, den }.normalized()
    }

    pub fn scale(&self, k: i64) -> Coweight {
        Coweight {
            num: self.num.iter().map(|x| k * x).collect(),
            den: self.den,
        }
        .normalized()
    }

    pub fn neg(&self) -> Coweight {
        self.scale(-1)
    }

    /// `<x, z>` as a rational number.
    pub fn pair(&self, x: &[i64]) -> Ratio<i64> {
        Ratio::new(dot(x, &self.num), self.den)
    }

    fn normalized(self) -> Coweight {
        let g = self
            .num
            .iter()
            .fold(self.den, |acc, &x| num_integer::gcd(acc, x));
        let g = if self.den < 0 { -g.abs() } else { g.abs() };
        Coweight {
            num: self.num.iter().map(|x| x / g).collect(),
            den: self.den / g,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    cartan_type: CartanType,
    rank: usize,
    flavor: Flavor,
    dim: usize,
    cartan: IntMatrix,
    simple_roots: Vec<IVec>,
    simple_coroots: Vec<IVec>,
    /// Positive roots, sorted by height; the first `rank` are the simple roots.
    positive: Vec<Root>,
    highest_root: usize,
    highest_coroot: usize,
    coweight_basis: Vec<Coweight>,
    reflections: Vec<IntMatrix>,
}

/// `<alpha_i, alpha_j^vee>` for the given type in Bourbaki labelling.
pub fn cartan_matrix(t: CartanType, r: usize) -> Result<IntMatrix> {
    let unsupported = || Error::Config(format!("unsupported Cartan type {t}{r}"));
    let ok = match t {
        CartanType::A => r >= 1,
        CartanType::B | CartanType::C => r >= 2,
        CartanType::D => r >= 4,
        CartanType::E => (6..=8).contains(&r),
        CartanType::F => r == 4,
        CartanType::G => r == 2,
    };
    if !ok {
        return Err(unsupported());
    }
    let mut c = IntMatrix::identity(r);
    for i in 0..r {
        c[(i, i)] = 2;
    }
    let mut bond = |i: usize, j: usize| {
        c[(i, j)] = -1;
        c[(j, i)] = -1;
    };
    match t {
        CartanType::A | CartanType::B | CartanType::C | CartanType::F => {
            (0..r - 1).for_each(|i| bond(i, i + 1))
        }
        CartanType::D => {
            (0..r - 2).for_each(|i| bond(i, i + 1));
            bond(r - 3, r - 1);
        }
        CartanType::E => {
            bond(0, 2);
            bond(1, 3);
            (2..r - 1).for_each(|i| bond(i, i + 1));
        }
        CartanType::G => bond(0, 1),
    }
    match t {
        // alpha_r short
        CartanType::B => c[(r - 2, r - 1)] = -2,
        // alpha_r long
        CartanType::C => c[(r - 1, r - 2)] = -2,
        // alpha_1, alpha_2 long; alpha_3, alpha_4 short
        CartanType::F => c[(1, 2)] = -2,
        // alpha_1 short, alpha_2 long
        CartanType::G => c[(1, 0)] = -3,
        _ => {}
    }
    Ok(c)
}

/// `|W|` from the classical order formulas.
pub fn weyl_order(t: CartanType, r: usize) -> u128 {
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    match t {
        CartanType::A => fact(r + 1),
        CartanType::B | CartanType::C => (1u128 << r) * fact(r),
        CartanType::D => (1u128 << (r - 1)) * fact(r),
        CartanType::E => match r {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        CartanType::F => 1_152,
        CartanType::G => 12,
    }
}

/// Squared root lengths up to a common factor, scaled so the shortest is 1.
fn root_lengths(c: &IntMatrix) -> Vec<i64> {
    let r = c.rows();
    let mut len: Vec<Option<Ratio<i64>>> = vec![None; r];
    len[0] = Some(Ratio::from_integer(1));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..r {
            if i != j && c[(i, j)] != 0 && len[j].is_none() {
                // <a_i, a_j^v> / <a_j, a_i^v> = |a_i|^2 / |a_j|^2
                len[j] = Some(len[i].unwrap() * Ratio::new(c[(j, i)], c[(i, j)]));
                stack.push(j);
            }
        }
    }
    let len: Vec<Ratio<i64>> = len
        .into_iter()
        .map(|l| l.expect("Dynkin diagram is connected"))
        .collect();
    let min = *len.iter().min().unwrap();
    len.iter().map(|l| (l / min).to_integer()).collect()
}

impl RootDatum {
    /// The root datum of the given type; for [`Flavor::Gl`], `rank` is the semisimple
    /// rank and `Y = Z^(rank+1)`.
    pub fn new(cartan_type: CartanType, rank: usize, flavor: Flavor) -> Result<Self> {
        let cartan = cartan_matrix(cartan_type, rank)?;
        let r = rank;
        let (dim, simple_roots, simple_coroots) = match flavor {
            Flavor::Sc => {
                let roots = (0..r).map(|i| cartan.row(i).to_vec()).collect();
                let coroots = (0..r).map(|i| unit(r, i)).collect();
                (r, roots, coroots)
            }
            Flavor::Adjoint => {
                let roots = (0..r).map(|i| unit(r, i)).collect();
                let coroots = (0..r).map(|i| cartan.column(i)).collect();
                (r, roots, coroots)
            }
            Flavor::Gl => {
                if cartan_type != CartanType::A {
                    return Err(Error::Config("the GL flavor exists only for type A".into()));
                }
                let v: Vec<IVec> = (0..r)
                    .map(|i| {
                        let mut e = vec![0; r + 1];
                        e[i] = 1;
                        e[i + 1] = -1;
                        e
                    })
                    .collect();
                (r + 1, v.clone(), v)
            }
        };
        let reflections = (0..r)
            .map(|i| {
                let mut m = IntMatrix::identity(dim);
                for a in 0..dim {
                    for b in 0..dim {
                        m[(a, b)] -= simple_coroots[i][a] * simple_roots[i][b];
                    }
                }
                m
            })
            .collect();
        let positive = positive_roots(&cartan, &simple_roots, &simple_coroots);
        let highest_root = argmax(&positive, |p| p.root_coeffs.iter().sum());
        let highest_coroot = argmax(&positive, |p| p.coroot_coeffs.iter().sum());
        let coweight_basis = match flavor {
            Flavor::Sc => {
                let (inv, den) = cartan
                    .inverse_scaled()
                    .expect("Cartan matrices are invertible");
                (0..r)
                    .map(|j| {
                        Coweight {
                            num: inv.column(j),
                            den,
                        }
                        .normalized()
                    })
                    .collect()
            }
            Flavor::Adjoint | Flavor::Gl => {
                (0..dim).map(|j| Coweight::integral(unit(dim, j))).collect()
            }
        };
        Ok(RootDatum {
            cartan_type,
            rank,
            flavor,
            dim,
            cartan,
            simple_roots,
            simple_coroots,
            positive,
            highest_root,
            highest_coroot,
            coweight_basis,
            reflections,
        })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    /// Semisimple rank, the number of simple roots.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Rank of `Y`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> String {
        match self.flavor {
            Flavor::Gl => format!("GL{}", self.rank + 1),
            Flavor::Sc => format!("{}{}", self.cartan_type, self.rank),
            Flavor::Adjoint => format!("{}{}ad", self.cartan_type, self.rank),
        }
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.simple_coroots[i]
    }

    pub fn simple_coroots(&self) -> &[IVec] {
        &self.simple_coroots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// `|Phi|`.
    pub fn root_count(&self) -> usize {
        2 * self.positive.len()
    }

    /// The highest root, the one defining the affine simple reflection.
    pub fn highest_root(&self) -> &Root {
        &self.positive[self.highest_root]
    }

    /// Coefficients of the highest coroot in the simple coroots.
    pub fn highest_coroot_coeffs(&self) -> &[i64] {
        &self.positive[self.highest_coroot].coroot_coeffs
    }

    /// Squared length of `alpha_i^vee` relative to a short coroot.
    pub fn simple_coroot_length(&self, i: usize) -> i64 {
        self.positive[i].coroot_length
    }

    /// Index of connection, the determinant of the Cartan matrix.
    pub fn index_of_connection(&self) -> i64 {
        self.cartan.determinant()
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        dot(x, y)
    }

    /// The simple reflection `s_i` as a matrix on `Y`.
    pub fn reflection(&self, i: usize) -> &IntMatrix {
        &self.reflections[i]
    }

    pub fn reflections(&self) -> &[IntMatrix] {
        &self.reflections
    }

    /// The reflection in an arbitrary root, as a matrix on `Y`.
    pub fn root_reflection(&self, root: &Root) -> IntMatrix {
        let mut m = IntMatrix::identity(self.dim);
        for a in 0..self.dim {
            for b in 0..self.dim {
                m[(a, b)] -= root.coroot[a] * root.root[b];
            }
        }
        m
    }

    pub fn weyl_order(&self) -> u128 {
        weyl_order(self.cartan_type, self.rank)
    }

    /// The Weyl group, enumerated when its order is within the group bound.
    pub fn weyl_group(&self) -> Result<WeylGroup> {
        let order = self.weyl_order();
        if order > group_bound() as u128 {
            return Err(Error::Resource(format!(
                "|W({})| = {order} exceeds the group bound {}",
                self.name(),
                group_bound()
            )));
        }
        WeylGroup::generate(self.reflections.clone())
    }

    /// The coroot lattice `Y^sc` inside `Y`.
    pub fn coroot_lattice(&self) -> Lattice {
        Lattice::from_generators(self.dim, &self.simple_coroots)
    }

    /// Basis of the coweight lattice `P`; for the GL flavor `P = Y`.
    pub fn coweight_basis(&self) -> &[Coweight] {
        &self.coweight_basis
    }

    /// The coweight with the given coordinates in [`RootDatum::coweight_basis`].
    pub fn coweight(&self, coords: &[i64]) -> Result<Coweight> {
        if coords.len() != self.coweight_basis.len() {
            return Err(Error::Config(format!(
                "coweight needs {} coordinates, got {}",
                self.coweight_basis.len(),
                coords.len()
            )));
        }
        let mut z = Coweight::zero(self.dim);
        for (c, w) in coords.iter().zip(&self.coweight_basis) {
            z = z.add(&w.scale(*c));
        }
        Ok(z)
    }

    /// Half the sum of the positive coroots.
    pub fn rho(&self) -> Coweight {
        let mut sum = vec![0; self.dim];
        for p in &self.positive {
            for (s, c) in sum.iter_mut().zip(&p.coroot) {
                *s += c;
            }
        }
        Coweight { num: sum, den: 2 }.normalized()
    }

    /// Coordinates of `y` in the coweight basis.
    pub fn coweight_coords(&self, y: &[i64]) -> IVec {
        match self.flavor {
            Flavor::Gl => y.to_vec(),
            _ => self.simple_roots.iter().map(|a| dot(a, y)).collect(),
        }
    }

    /// `P / Y` with `Y` written in coweight coordinates.
    pub fn coweight_quotient(&self) -> Result<LatticeQuotient> {
        let n = self.coweight_basis.len();
        let gens: Vec<IVec> = (0..self.dim)
            .map(|j| self.coweight_coords(&unit(self.dim, j)))
            .collect();
        LatticeQuotient::new(Lattice::from_generators(n, &gens))
    }

    /// `<alpha, y>` for all simple roots.
    pub fn simple_pairings(&self, y: &[i64]) -> IVec {
        self.simple_roots.iter().map(|a| dot(a, y)).collect()
    }

    pub fn is_dominant(&self, y: &[i64]) -> bool {
        self.simple_pairings(y).iter().all(|&m| m >= 0)
    }
}

fn unit(dim: usize, i: usize) -> IVec {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

fn argmax(roots: &[Root], key: impl Fn(&Root) -> i64) -> usize {
    let mut best = 0;
    for (i, r) in roots.iter().enumerate() {
        if key(r) > key(&roots[best]) {
            best = i;
        }
    }
    best
}

/// All positive roots paired with their coroots, found as Weyl orbits of simple roots.
fn positive_roots(c: &IntMatrix, simple_roots: &[IVec], simple_coroots: &[IVec]) -> Vec<Root> {
    let r = c.rows();
    let lengths = root_lengths(c);
    let max_len = *lengths.iter().max().unwrap();
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let mut out = Vec::new();
    for i in 0..r {
        let (a, g) = (unit(r, i), unit(r, i));
        seen.insert(a.clone());
        queue.push_back((a, g, max_len / lengths[i]));
    }
    while let Some((a, g, len)) = queue.pop_front() {
        for j in 0..r {
            // s_j a = a - <a, a_j^v> a_j,  s_j g = g - <a_j, g> a_j^v
            let pa: i64 = (0..r).map(|k| a[k] * c[(k, j)]).sum();
            let pg: i64 = (0..r).map(|k| c[(j, k)] * g[k]).sum();
            let mut a2 = a.clone();
            a2[j] -= pa;
            let mut g2 = g.clone();
            g2[j] -= pg;
            if seen.insert(a2.clone()) {
                queue.push_back((a2, g2, len));
            }
        }
        if a.iter().all(|&x| x >= 0) {
            out.push((a, g, len));
        }
    }
    out.sort_by(|x, y| {
        let (hx, hy) = (x.0.iter().sum::<i64>(), y.0.iter().sum::<i64>());
        hx.cmp(&hy).then_with(|| y.0.cmp(&x.0))
    });
    let dim_x = simple_roots[0].len();
    let combine = |coeffs: &[i64], basis: &[IVec]| -> IVec {
        (0..dim_x)
            .map(|t| coeffs.iter().zip(basis).map(|(k, b)| k * b[t]).sum())
            .collect()
    };
    out.into_iter()
        .map(|(a, g, len)| Root {
            root: combine(&a, simple_roots),
            coroot: combine(&g, simple_coroots),
            root_coeffs: a,
            coroot_coeffs: g,
            coroot_length: len,
        })
        .collect()
}
