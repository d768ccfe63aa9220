//! Exhaustive checks tying R-groups, twisted permutation characters and affine
//! stabilizers together.

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::Cyclo;
use crate::lattice::{add, IVec};
use crate::orbits::{delta_a_y, enumerate_orbits, OrbitCensus};
use crate::rootdata::{Coweight, WeylElt};

use super::rgroup::{rgroup_characters, zeta_rho, RGroup};
use super::{fixed_points, inner_product, CharacterContext, ClassFunction};

/// Candidates `y` on the affine wall and those whose affine stabilizer meets a conjugate
/// of `R_chi` nontrivially.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct UniKeyReport {
    pub candidates: Vec<IVec>,
    pub violations: Vec<IVec>,
}

impl UniKeyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Dominant coweight coordinates `c >= 0` with `sum c_i m_i = total`.
fn compositions(weights: &[i64], total: i64) -> Vec<IVec> {
    let Some((&w, rest)) = weights.split_first() else {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    };
    let mut out = Vec::new();
    for c in 0..=total / w {
        for mut tail in compositions(rest, total - c * w) {
            tail.insert(0, c);
            out.push(tail);
        }
    }
    out
}

/// Checks that for every dominant `y` with `<highest root, y> = n`, the group generated
/// by the affine simple reflections fixing `y` meets every conjugate of `R_chi` trivially.
pub fn verify_uni_key(
    ctx: &CharacterContext,
    cover: &CoverSpec,
    rgroup: &RGroup,
) -> Result<UniKeyReport> {
    let d = cover.datum();
    let group = ctx.group();
    let classes = ctx.classes();
    let forbidden: Vec<bool> = {
        let mut f = vec![false; classes.count()];
        for w in rgroup.subgroup.iter().filter(|&w| w != WeylElt::IDENTITY) {
            f[classes.class_of(w)] = true;
        }
        f
    };
    let highest = d.highest_root();
    let reflect_highest = group
        .find(&d.root_reflection(highest))
        .ok_or_else(|| Error::Config("highest root reflection not in W".into()))?;
    let mut report = UniKeyReport::default();
    for coords in compositions(&highest.root_coeffs, cover.n() as i64) {
        let Some(y) = d.coweight(&coords)?.to_integral() else {
            continue;
        };
        let walls = delta_a_y(cover, &y)?;
        let gens: Vec<WeylElt> = walls
            .iter()
            .map(|&i| {
                if i == d.rank() {
                    reflect_highest
                } else {
                    group.generator(i)
                }
            })
            .collect();
        let stabilizer = group.subgroup(&gens)?;
        if stabilizer.iter().any(|h| forbidden[classes.class_of(h)]) {
            report.violations.push(y.clone());
        }
        report.candidates.push(y);
    }
    Ok(report)
}

/// `y_z = (m n - 1) z` for the least `m >= 0` with `m n = 1` modulo the order of `z` in
/// `P / Y`, so that `y_z + z = m n z` lies in `nP`.
pub fn twist_shift(cover: &CoverSpec, z: &Coweight) -> Option<IVec> {
    let bound = cover.datum().index_of_connection().max(1);
    let order = (1..=bound).find(|&k| z.scale(k).is_integral())?;
    let n = cover.n() as i64;
    let m = (0..order).find(|m| (m * n - 1).rem_euclid(order) == 0)?;
    z.scale(m * n - 1).to_integral()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistReport {
    /// Equality of the permutation characters for the twisted and untwisted actions.
    pub isomorphic: bool,
    pub y_z: Option<IVec>,
    /// Whether `y -> y + y_z` intertwines the untwisted and twisted actions on `X_{Q,n}`.
    pub equivariant: bool,
}

fn total_character(ctx: &CharacterContext, census: &OrbitCensus) -> Vec<i64> {
    let mut total = vec![0i64; ctx.group().order()];
    for o in &census.orbits {
        for (t, v) in total.iter_mut().zip(ctx.orbit_character_by_classes(o)) {
            *t += v;
        }
    }
    total
}

pub fn verify_twist_equiv(
    ctx: &CharacterContext,
    cover: &CoverSpec,
    z: &Coweight,
) -> Result<TwistReport> {
    let twisted = enumerate_orbits(cover, z)?;
    let plain = enumerate_orbits(cover, &Coweight::zero(cover.datum().dim()))?;
    let isomorphic = total_character(ctx, &twisted) == total_character(ctx, &plain);
    let y_z = twist_shift(cover, z);
    let equivariant = y_z.as_ref().is_some_and(|shift| {
        let q = &twisted.quotient;
        let group = ctx.group();
        q.representatives().all(|x| {
            (0..group.rank()).all(|i| {
                let s = group.generator(i);
                let lhs = twisted.action.act(s, &add(&x, shift));
                let rhs = add(shift, &group.act(s, &x));
                q.same_class(&lhs, &rhs)
            })
        })
    });
    Ok(TwistReport {
        isomorphic,
        y_z,
        equivariant,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WhEquiRow {
    pub sigma: usize,
    pub orbit_rep: IVec,
    pub untwisted: i64,
    pub twisted: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WhEquiReport {
    pub rows: Vec<WhEquiRow>,
}

impl WhEquiReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.untwisted == r.twisted)
    }
}

fn restricted_perm(
    census: &OrbitCensus,
    orbit: &crate::orbits::OrbitRecord,
    rgroup: &RGroup,
    like: &ClassFunction,
) -> Result<ClassFunction> {
    let values: Vec<i64> = rgroup
        .subgroup
        .iter()
        .map(|w| fixed_points(census, orbit, w))
        .collect();
    ClassFunction::from_integers(like.group().clone(), rgroup.subgroup.clone(), &values)
}

fn as_integer(x: num_rational::BigRational) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::Config(format!("non-integral multiplicity {x}")));
    }
    x.to_integer()
        .try_into()
        .map_err(|_| Error::Resource("multiplicity overflow".into()))
}

/// Compares `<sigma ⊗ zeta^-1, sigma_[0]^O>` with `<sigma_[-rho]^{m(O)}, sigma ⊗ zeta^-1>`
/// over `R_chi`, where `m` translates by `y_{-rho}`.
pub fn verify_wh_equi(cover: &CoverSpec, rgroup: &RGroup, chi: &[Cyclo]) -> Result<WhEquiReport> {
    if !cover.is_oasitic() {
        return Err(Error::Hypothesis(format!(
            "{} is not oasitic",
            cover.name()
        )));
    }
    if rgroup.spec.orders.len() > 2 || rgroup.spec.orders.iter().any(|&o| o != 2) {
        return Err(Error::Hypothesis(format!(
            "R_chi = {} is not (Z/2)^i with i <= 2",
            rgroup.spec.label
        )));
    }
    let dim = cover.datum().dim();
    let minus_rho = cover.datum().rho().neg();
    let shift = twist_shift(cover, &minus_rho)
        .ok_or_else(|| Error::Hypothesis("no translation matches the -rho twist".into()))?;
    let plain = enumerate_orbits(cover, &Coweight::zero(dim))?;
    let twisted = enumerate_orbits(cover, &minus_rho)?;
    let zeta_inv = zeta_rho(cover, rgroup, chi)?.conj();
    let mut rows = Vec::new();
    for (k, sigma) in rgroup_characters(cover, rgroup)?.iter().enumerate() {
        let tau = sigma.tensor(&zeta_inv)?;
        for o in &plain.orbits {
            let image = twisted.orbit_of(&add(&o.rep, &shift));
            let lhs = inner_product(
                &tau,
                &restricted_perm(&plain, o, rgroup, &tau)?,
                &rgroup.subgroup,
            )?;
            let rhs = inner_product(
                &restricted_perm(&twisted, image, rgroup, &tau)?,
                &tau,
                &rgroup.subgroup,
            )?;
            rows.push(WhEquiRow {
                sigma: k,
                orbit_rep: o.rep.clone(),
                untwisted: as_integer(lhs)?,
                twisted: as_integer(rhs)?,
            });
        }
    }
    Ok(WhEquiReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;
    use crate::wchar::rgroup_registry;

    fn setup(t: CartanType, r: usize, n: u64) -> (CoverSpec, CharacterContext) {
        let c = CoverSpec::simply_connected(t, r, n, 1).unwrap();
        let ctx = CharacterContext::new(c.weyl_group().unwrap());
        (c, ctx)
    }

    #[test]
    fn uni_key_vacuous_for_c2() {
        let (c, ctx) = setup(CartanType::C, 2, 3);
        let rg = RGroup::new(&c, rgroup_registry(CartanType::C, 2).remove(0)).unwrap();
        let report = verify_uni_key(&ctx, &c, &rg).unwrap();
        assert!(report.candidates.is_empty());
    }

    #[test]
    fn uni_key_holds_for_small_cases() {
        for (t, r, n) in [(CartanType::A, 2, 2), (CartanType::B, 3, 3)] {
            let (c, ctx) = setup(t, r, n);
            for spec in rgroup_registry(t, r) {
                let rg = RGroup::new(&c, spec).unwrap();
                let report = verify_uni_key(&ctx, &c, &rg).unwrap();
                assert!(!report.candidates.is_empty());
                assert!(report.passed(), "{t}{r}: {:?}", report.violations);
            }
        }
    }

    #[test]
    fn twist_witnesses() {
        let (c, ctx) = setup(CartanType::A, 2, 2);
        let omega1 = c.datum().coweight(&[1, 0]).unwrap();
        let report = verify_twist_equiv(&ctx, &c, &omega1).unwrap();
        assert_eq!(report.y_z, Some(vec![2, 1]));
        assert!(report.isomorphic && report.equivariant);
        let y = Coweight::integral(vec![1, -1]);
        assert_eq!(twist_shift(&c, &y), Some(vec![-1, 1]));
    }

    #[test]
    fn wh_equi_on_sl2() {
        let (c, _) = setup(CartanType::A, 1, 3);
        let spec = rgroup_registry(CartanType::A, 1).remove(0);
        let chi = spec.standard_chi();
        let rg = RGroup::new(&c, spec).unwrap();
        let report = verify_wh_equi(&c, &rg, &chi).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.holds());
    }
}
