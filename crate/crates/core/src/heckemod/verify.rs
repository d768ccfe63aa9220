//! Relation checks for the Gelfand–Graev module, orbit components, and the exceptional
//! rank-one component with an affine rather than finite splitting.

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::Cyclo;
use crate::lattice::{add, scale, sub, IVec};
use crate::orbits::{OrbitCensus, OrbitRecord};
use crate::rootdata::{WeylElt, WeylGroup};

use super::module::{GgModule, GgOp, GgVector};
use super::torus::{epsilon_power, reflect_section};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub cover: String,
    pub q: u64,
    pub vectors_checked: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<IVec>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// The box `|y_i| <= R` in the coordinates of `Y`, with `R` minimal for `min_vectors` points.
pub fn default_window(cover: &CoverSpec, min_vectors: usize) -> Vec<IVec> {
    let dim = cover.datum().dim();
    let mut radius = 0i64;
    while ((2 * radius + 1) as usize).pow(dim as u32) < min_vectors {
        radius += 1;
    }
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-radius..=radius).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Coxeter order of `s_i s_j` from the Cartan matrix.
pub fn bond_order(cover: &CoverSpec, i: usize, j: usize) -> usize {
    let a = cover.datum().cartan();
    match a.row(i)[j] * a.row(j)[i] {
        0 => 2,
        1 => 3,
        2 => 4,
        _ => 6,
    }
}

/// Shifts used for the Bernstein and torus checks: a basis of `Y_{Q,n}`, the modified
/// simple coroots, and their negatives.
pub fn bernstein_shifts(cover: &CoverSpec) -> Vec<IVec> {
    let mut out: Vec<IVec> = cover.y_qn().basis().to_vec();
    out.extend(cover.modified_simple_coroots());
    let negs: Vec<IVec> = out.iter().map(|v| scale(-1, v)).collect();
    out.extend(negs);
    out.sort();
    out.dedup();
    out
}

struct Checker<'a> {
    module: &'a GgModule,
    window: &'a [IVec],
}

impl Checker<'_> {
    fn report(
        &self,
        relation: String,
        mut holds: impl FnMut(&GgVector) -> Result<bool>,
    ) -> Result<RelationReport> {
        let mut counterexample = None;
        for y in self.window {
            if !holds(&GgVector::basis(y.clone()))? {
                counterexample = Some(y.clone());
                break;
            }
        }
        Ok(RelationReport {
            relation,
            cover: self.module.cover().name(),
            q: self.module.q(),
            vectors_checked: self.window.len(),
            status: if counterexample.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            counterexample,
        })
    }
}

/// `(T_alpha)^2 = (q-1) T_alpha + q`.
fn quadratic(m: &GgModule, v: &GgVector, i: usize) -> bool {
    let tv = m.t(v, i);
    let mut rhs = tv.scaled(&Cyclo::from_int(m.q() as i64 - 1));
    rhs.add_scaled(v, &Cyclo::from_int(m.q() as i64));
    m.t(&tv, i) == rhs
}

fn braid(m: &GgModule, v: &GgVector, i: usize, j: usize, order: usize) -> bool {
    let word = |a: usize, b: usize| -> Vec<u8> {
        (0..order)
            .map(|k| if k % 2 == 0 { a } else { b } as u8)
            .collect()
    };
    m.t_word(v, &word(i, j)) == m.t_word(v, &word(j, i))
}

/// `Theta_y T_alpha = T_alpha Theta_{w_alpha(-1).s_y} + (q-1)(correction)` where the
/// correction collects `epsilon^{jQ(alpha^vee)} Theta_{s_y h_alpha(varpi^j)}` over `n_alpha | j`,
/// on `[1 - <alpha,y>, 0]` when the pairing is positive and with a minus sign on
/// `[1, -<alpha,y>]` when it is negative.
fn bernstein(m: &GgModule, v: &GgVector, i: usize, y: &[i64]) -> Result<bool> {
    let cover = m.cover();
    let d = cover.datum();
    let coroot = d.simple_coroot(i);
    let pairing = d.pair(d.simple_root(i), y);
    let n_alpha = cover.simple_n_alpha(i);
    let lhs = m.t(&m.theta(v, y)?, i);
    let reflected = reflect_section(cover, i, y);
    let mut rhs = m
        .theta(&m.t(v, i), &reflected.y)?
        .scaled(&reflected.scalar(m.epsilon()));
    let (range, sign) = if pairing > 0 {
        ((1 - pairing)..=0, 1)
    } else {
        (1..=-pairing, -1)
    };
    let q1 = Cyclo::from_int(sign * (m.q() as i64 - 1));
    for j in range.filter(|j| j % n_alpha == 0) {
        let twist = j * cover.q(coroot) + j * cover.d(y, coroot);
        let shifted = m.theta(v, &add(y, &scale(j, coroot)))?;
        rhs.add_scaled(&shifted, &(&q1 * epsilon_power(m.epsilon(), twist)));
    }
    Ok(lhs == rhs)
}

/// Quadratic, braid, Bernstein and torus relations on every window vector, plus
/// invariance of orbit components under all generators.
pub fn verify_gg_relations(
    m: &GgModule,
    census: &OrbitCensus,
    window: &[IVec],
) -> Result<Vec<RelationReport>> {
    let checker = Checker { module: m, window };
    let cover = m.cover();
    let rank = m.rank();
    let mut out = Vec::new();
    for i in 0..rank {
        out.push(checker.report(format!("quadratic T{i}"), |v| Ok(quadratic(m, v, i)))?);
    }
    for i in 0..rank {
        for j in (i + 1)..rank {
            let order = bond_order(cover, i, j);
            out.push(
                checker.report(format!("braid T{i} T{j} order {order}"), |v| {
                    Ok(braid(m, v, i, j, order))
                })?,
            );
        }
    }
    let shifts = bernstein_shifts(cover);
    for i in 0..rank {
        out.push(checker.report(format!("bernstein T{i}"), |v| {
            for y in &shifts {
                if !bernstein(m, v, i, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })?);
    }
    out.push(checker.report("theta twisted composition".into(), |v| {
        for a in &shifts {
            for b in &shifts {
                let lhs = m.theta(&m.theta(v, a)?, b)?;
                let rhs = m
                    .theta(v, &add(a, b))?
                    .scaled(&epsilon_power(m.epsilon(), cover.d(a, b)));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })?);
    let mut ops: Vec<GgOp> = (0..rank).map(GgOp::T).collect();
    ops.extend(shifts.iter().cloned().map(GgOp::Theta));
    out.push(checker.report("orbit components invariant".into(), |v| {
        let y = v.support().next().expect("basis vector").clone();
        let home = census.quotient.index(&census.orbit_of(&y).rep);
        for op in &ops {
            let image = m.apply(v, op)?;
            if image
                .support()
                .any(|z| census.quotient.index(&census.orbit_of(z).rep) != home)
            {
                return Ok(false);
            }
        }
        Ok(true)
    })?);
    Ok(out)
}

/// Laurent polynomials in the coordinates of a basis of `Y_{Q,n}`.
type Laurent = std::collections::BTreeMap<IVec, Cyclo>;

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = add(ea, eb);
            let c = out.entry(e.clone()).or_insert_with(Cyclo::zero);
            *c += &(ca * cb);
            if c.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

fn laurent_add_assign(a: &mut Laurent, b: &Laurent, sign: i64) {
    for (e, c) in b {
        let slot = a.entry(e.clone()).or_insert_with(Cyclo::zero);
        *slot += &(c * Cyclo::from_int(sign));
        if slot.is_zero() {
            a.remove(e);
        }
    }
}

/// Largest matrix handled by the permutation expansion of the determinant.
const MAX_DETERMINANT_SIZE: usize = 8;

fn determinant(mat: &[Vec<Laurent>]) -> Result<Laurent> {
    let k = mat.len();
    if k > MAX_DETERMINANT_SIZE {
        return Err(Error::Resource(format!(
            "determinant of size {k} over Laurent polynomials"
        )));
    }
    // Leibniz expansion; choosing column `col` in this row adds one inversion per
    // already-used column to its right
    fn expand(
        mat: &[Vec<Laurent>],
        row: usize,
        used: &mut [bool],
        acc: Laurent,
        sign: i64,
        out: &mut Laurent,
    ) {
        if row == mat.len() {
            laurent_add_assign(out, &acc, sign);
            return;
        }
        for col in 0..mat.len() {
            if used[col] || mat[row][col].is_empty() {
                continue;
            }
            let flips = used[col + 1..].iter().filter(|&&u| u).count();
            let s = if flips % 2 == 0 { sign } else { -sign };
            used[col] = true;
            expand(
                mat,
                row + 1,
                used,
                laurent_mul(&acc, &mat[row][col]),
                s,
                out,
            );
            used[col] = false;
        }
    }
    let vars = mat
        .iter()
        .flatten()
        .find_map(|p| p.keys().next())
        .map_or(0, Vec::len);
    let one: Laurent = [(vec![0; vars], Cyclo::one())].into_iter().collect();
    let mut out = Laurent::new();
    expand(mat, 0, &mut vec![false; k], one, 1, &mut out);
    Ok(out)
}

/// Outcome of comparing an orbit component with the module induced from the sign
/// character of the stabilizer of a dominant splitting lift.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InducedReport {
    pub orbit_rep: IVec,
    /// Dominant lift `y` with `Stab_W(y) = Stab_W(y mod Y_{Q,n})`.
    pub witness: IVec,
    /// Simple roots orthogonal to `y`; they generate `W_y`.
    pub wall: Vec<usize>,
    /// `e_y T_alpha = -e_y` for every wall root.
    pub sign_eigenvector: bool,
    /// The images `e_y T_w` stay in the component.
    pub invariant: bool,
    pub rank: usize,
    /// The images `e_y T_w` over minimal coset representatives form a basis over the
    /// `Theta`-subalgebra: their coordinate matrix has a monomial determinant.
    pub basis_over_theta: bool,
    /// `W_y` is trivial, so the component is free of rank one over `H_I`.
    pub free_rank_one: bool,
}

impl InducedReport {
    pub fn passed(&self) -> bool {
        self.sign_eigenvector && self.invariant && self.basis_over_theta
    }
}

fn dominant_conjugate(group: &WeylGroup, cover: &CoverSpec, y: &[i64]) -> IVec {
    let d = cover.datum();
    let mut y = y.to_vec();
    while let Some(i) = (0..d.rank()).find(|&i| d.pair(d.simple_root(i), &y) < 0) {
        y = group.act(group.generator(i), &y);
    }
    y
}

/// `sum_i D(b_i,b_i) c_i (c_i - 1)/2 + sum_{i<j} c_i c_j D(b_i,b_j)`, the `epsilon`-exponent with
/// `Theta_{b_1}^{c_1} ... Theta_{b_r}^{c_r} = epsilon^f(c) Theta_{sum c_i b_i}`.
fn ordered_monomial_twist(cover: &CoverSpec, basis: &[IVec], c: &[i64]) -> i64 {
    let mut f = 0;
    for i in 0..basis.len() {
        f += cover.d(&basis[i], &basis[i]) * c[i] * (c[i] - 1) / 2;
        for j in (i + 1)..basis.len() {
            f += c[i] * c[j] * cover.d(&basis[i], &basis[j]);
        }
    }
    f
}

pub fn compare_induced(
    m: &GgModule,
    census: &OrbitCensus,
    orbit: &OrbitRecord,
) -> Result<InducedReport> {
    let cover = m.cover();
    let group = census.group();
    let lift = orbit
        .witness
        .as_ref()
        .filter(|_| orbit.splitting)
        .ok_or_else(|| Error::Hypothesis(format!("orbit of {:?} is not splitting", orbit.rep)))?;
    let y = dominant_conjugate(group, cover, lift);
    let d = cover.datum();
    let wall: Vec<usize> = (0..d.rank())
        .filter(|&i| d.pair(d.simple_root(i), &y) == 0)
        .collect();
    let wall_order = group.parabolic(&wall).order();
    if wall_order != orbit.stabilizer.order() {
        return Err(Error::Hypothesis(format!(
            "stabilizer of lift {y:?} differs from the orbit stabilizer"
        )));
    }
    let e_y = GgVector::basis(y.clone());
    let minus = Cyclo::from_int(-1);
    let sign_eigenvector = wall.iter().all(|&i| m.t(&e_y, i) == e_y.scaled(&minus));

    let reps: Vec<WeylElt> = group
        .elements()
        .filter(|&w| {
            wall.iter()
                .all(|&i| group.length(group.mul_generator_left(i, w)) > group.length(w))
        })
        .collect();
    let images: Vec<GgVector> = reps
        .iter()
        .map(|&w| m.t_word(&e_y, group.reduced_word(w)))
        .collect();
    let home = census.quotient.index(&orbit.rep);
    let invariant = images.iter().all(|v| {
        v.support()
            .all(|z| census.quotient.index(&census.orbit_of(z).rep) == home)
    });

    // coordinates over the Theta-subalgebra with respect to e_{w^-1 y}
    let anchors: Vec<IVec> = reps
        .iter()
        .map(|&w| group.act(group.inverse(w), &y))
        .collect();
    let anchor_of: std::collections::HashMap<usize, usize> = anchors
        .iter()
        .enumerate()
        .map(|(k, a)| (census.quotient.index(a), k))
        .collect();
    let y_qn = m.y_qn();
    let basis = y_qn.basis().to_vec();
    let mut matrix = vec![vec![Laurent::new(); reps.len()]; reps.len()];
    let mut basis_over_theta = anchor_of.len() == orbit.size() && reps.len() == orbit.size();
    if basis_over_theta && invariant {
        for (row, v) in images.iter().enumerate() {
            for (z, c) in v.terms() {
                let k = anchor_of[&census.quotient.index(z)];
                let shift = sub(z, &anchors[k]);
                let coords = y_qn
                    .coordinates(&shift)
                    .ok_or_else(|| Error::Config("component vector outside its class".into()))?;
                let twist =
                    cover.d(&anchors[k], &shift) + ordered_monomial_twist(cover, &basis, &coords);
                let term: Laurent = [(coords, c * epsilon_power(m.epsilon(), twist))]
                    .into_iter()
                    .collect();
                laurent_add_assign(&mut matrix[row][k], &term, 1);
            }
        }
        basis_over_theta = determinant(&matrix)?.len() == 1;
    } else {
        basis_over_theta = false;
    }
    Ok(InducedReport {
        orbit_rep: orbit.rep.clone(),
        witness: y,
        wall,
        sign_eigenvector,
        invariant,
        rank: orbit.size(),
        basis_over_theta,
        free_rank_one: orbit.is_free(),
    })
}

/// Data of the component `O_{n*/2}` of a cover of `SL_2` with `n*` even.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sl2SpecialReport {
    pub n_star: i64,
    pub vectors_checked: usize,
    /// `h = T_alpha Theta_{-n* alpha^vee}` satisfies `h^2 = q` on every checked vector.
    pub h_squared_is_q: bool,
    /// `e_y h = lambda e_y` for `y = -n* alpha^vee / 2`.
    pub eigenvalue: Option<String>,
    /// `lambda^2 = q`, so the normalized eigenvalue `q^{-1/2} lambda` is a sign.
    pub normalized_square_is_one: bool,
    /// `lambda` is the Gauss sum `g_alpha(psi, phi(y))` up to the sign `epsilon^k`
    /// produced by the torus normal form.
    pub eigenvalue_is_gauss_sum: bool,
}

impl Sl2SpecialReport {
    pub fn passed(&self) -> bool {
        self.h_squared_is_q && self.normalized_square_is_one && self.eigenvalue_is_gauss_sum
    }
}

pub fn sl2_special(m: &GgModule, half_window: i64) -> Result<Sl2SpecialReport> {
    let cover = m.cover();
    let d = cover.datum();
    if d.rank() != 1 || d.dim() != 1 {
        return Err(Error::Config(format!(
            "{} is not a cover of SL_2",
            cover.name()
        )));
    }
    let coroot = d.simple_coroot(0).to_vec();
    let n = cover.n() as i64;
    let n_star = n / gcd(n, 2 * cover.q(&coroot));
    if n_star % 2 != 0 {
        return Err(Error::Hypothesis(format!(
            "n* = {n_star} is odd; the component O_(n*/2) does not exist"
        )));
    }
    let h = [GgOp::T(0), GgOp::Theta(scale(-n_star, &coroot))];
    let q = Cyclo::from_int(m.q() as i64);
    let mut h_squared_is_q = true;
    let mut checked = 0;
    for k in -half_window..=half_window {
        let v = GgVector::basis(scale(n_star / 2 + k * n_star, &coroot));
        let hh = m.apply_word(&m.apply_word(&v, &h)?, &h)?;
        h_squared_is_q &= hh == v.scaled(&q);
        checked += 1;
    }
    let y = scale(-n_star / 2, &coroot);
    let image = m.apply_word(&GgVector::basis(y.clone()), &h)?;
    let lambda = image.as_multiple_of(&y).filter(|c| !c.is_zero());
    let normalized_square_is_one = lambda.as_ref().is_some_and(|l| l * l == q);
    let g = m.gauss_factor(0, &y);
    let eigenvalue_is_gauss_sum = lambda.as_ref().is_some_and(|l| *l == g || *l == -&g);
    Ok(Sl2SpecialReport {
        n_star,
        vectors_checked: checked,
        h_squared_is_q,
        eigenvalue: lambda.map(|l| l.to_string()),
        normalized_square_is_one,
        eigenvalue_is_gauss_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::enumerate_orbits;
    use crate::rootdata::{CartanType, Coweight};

    fn census(c: &CoverSpec) -> OrbitCensus {
        enumerate_orbits(c, &Coweight::zero(c.datum().dim())).unwrap()
    }

    #[test]
    fn laurent_determinant_detects_units() {
        let mono =
            |e: i64, c: i64| -> Laurent { [(vec![e], Cyclo::from_int(c))].into_iter().collect() };
        let unit = vec![
            vec![Laurent::new(), mono(1, 1)],
            vec![mono(0, 1), Laurent::new()],
        ];
        assert_eq!(determinant(&unit).unwrap(), mono(1, -1));
        let not_unit = vec![vec![mono(0, 1), mono(1, 1)], vec![mono(1, 1), mono(0, 1)]];
        assert_eq!(determinant(&not_unit).unwrap().len(), 2);
    }

    #[test]
    fn relations_hold_for_linear_sl2() {
        let c = CoverSpec::simply_connected(CartanType::A, 1, 1, 1).unwrap();
        let m = GgModule::new(&c, 5).unwrap();
        let window: Vec<IVec> = (-2..=2).map(|k| vec![k]).collect();
        for r in verify_gg_relations(&m, &census(&c), &window).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn printed_negative_branch_fails_quadratic() {
        let c = CoverSpec::simply_connected(CartanType::A, 1, 1, 1).unwrap();
        let m = GgModule::with_branch(&c, 5, super::super::NegativeBranch::Printed).unwrap();
        let window: Vec<IVec> = (-2..=2).map(|k| vec![k]).collect();
        let reports = verify_gg_relations(&m, &census(&c), &window).unwrap();
        assert!(!reports[0].passed());
    }

    #[test]
    fn covers_with_epsilon_minus_one() {
        for (n, q) in [(4, 5), (6, 7)] {
            let c = CoverSpec::simply_connected(CartanType::A, 1, n, -1).unwrap();
            let m = GgModule::new(&c, q).unwrap();
            for r in verify_gg_relations(&m, &census(&c), &default_window(&c, 21)).unwrap() {
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn rank_two_double_covers_over_f3() {
        // (q - 1)/n = 1, so epsilon = -1 and the D-twists are visible
        for (t, r) in [
            (CartanType::A, 2),
            (CartanType::B, 2),
            (CartanType::C, 2),
            (CartanType::G, 2),
            (CartanType::A, 3),
        ] {
            let c = CoverSpec::simply_connected(t, r, 2, 1).unwrap();
            let m = GgModule::new(&c, 3).unwrap();
            assert_eq!(m.epsilon(), -1);
            for rep in verify_gg_relations(&m, &census(&c), &default_window(&c, 25)).unwrap() {
                assert!(rep.passed(), "{t}{r}: {rep:?}");
            }
        }
    }

    #[test]
    fn a2_double_cover_relations_and_components() {
        let c = CoverSpec::simply_connected(CartanType::A, 2, 2, 1).unwrap();
        let m = GgModule::new(&c, 5).unwrap();
        let cen = census(&c);
        for r in verify_gg_relations(&m, &cen, &default_window(&c, 25)).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
        for o in cen.orbits.iter().filter(|o| o.splitting) {
            let rep = compare_induced(&m, &cen, o).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn special_component_of_fourfold_sl2() {
        let c = CoverSpec::simply_connected(CartanType::A, 1, 4, -1).unwrap();
        let m = GgModule::new(&c, 5).unwrap();
        let rep = sl2_special(&m, 5).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let c2 = CoverSpec::simply_connected(CartanType::A, 1, 2, -1).unwrap();
        let m2 = GgModule::new(&c2, 5).unwrap();
        assert!(matches!(sl2_special(&m2, 1), Err(Error::Hypothesis(_))));
    }
}
