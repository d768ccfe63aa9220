//! R-groups of unitary unramified principal series and the quadratic character
//! `zeta_rho` of `R_chi`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::Cyclo;
use crate::orbits::{s_property, OrbitCensus, OrbitRecord, SProperty};
use crate::rootdata::{CartanType, Coweight, Flavor, Subgroup, WeylElt};

use super::{fixed_points, inner_product, ClassFunction, WhittakerDim};

/// `zeta_order^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: i64,
}

impl RootOfUnity {
    fn value(self) -> Cyclo {
        Cyclo::root_of_unity(self.order, self.exponent)
    }
}

const MINUS_ONE: RootOfUnity = RootOfUnity {
    order: 2,
    exponent: 1,
};

/// One isomorphism class of nontrivial `R_chi`, with generators as words in the simple
/// reflections (0-based) and the values `chi_alpha` forced on simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RGroupSpec {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub label: String,
    pub generators: Vec<Vec<usize>>,
    pub orders: Vec<u64>,
    /// `chi_alpha` on each simple root, or `None` where unconstrained.
    pub chi: Vec<Option<RootOfUnity>>,
}

/// Values `chi_alpha = chi(h_alpha(varpi^{n_alpha}))` on the simple roots.
pub type ChiValues = Vec<Cyclo>;

impl RGroupSpec {
    fn new(
        t: CartanType,
        rank: usize,
        label: String,
        generators: Vec<Vec<usize>>,
        orders: Vec<u64>,
    ) -> Self {
        RGroupSpec {
            cartan_type: t,
            rank,
            label,
            generators,
            orders,
            chi: vec![None; rank],
        }
    }

    fn force(mut self, roots: &[usize], value: RootOfUnity) -> Self {
        for &i in roots {
            self.chi[i] = Some(value);
        }
        self
    }

    /// The forced values, with `1` on unconstrained roots.
    pub fn standard_chi(&self) -> ChiValues {
        self.chi
            .iter()
            .map(|c| c.map_or_else(Cyclo::one, RootOfUnity::value))
            .collect()
    }

    pub fn check_chi(&self, chi: &[Cyclo]) -> Result<()> {
        if chi.len() != self.rank {
            return Err(Error::Config(format!(
                "need {} chi values, got {}",
                self.rank,
                chi.len()
            )));
        }
        for (i, (want, got)) in self.chi.iter().zip(chi).enumerate() {
            if let Some(w) = want {
                if &w.value() != got {
                    return Err(Error::Config(format!(
                        "chi on simple root {} must be zeta_{}^{}",
                        i + 1,
                        w.order,
                        w.exponent
                    )));
                }
            }
        }
        Ok(())
    }
}

fn odd_positions(upto: usize) -> Vec<usize> {
    // 1-based 1, 3, 5, ... <= upto, returned 0-based
    (0..upto).step_by(2).collect()
}

/// The nontrivial `R_chi` for an almost simple simply-connected type.
pub fn rgroup_registry(t: CartanType, rank: usize) -> Vec<RGroupSpec> {
    use CartanType::*;
    let r = rank;
    match t {
        A => (2..=r + 1)
            .filter(|d| (r + 1).is_multiple_of(*d))
            .map(|d| {
                let word: Vec<usize> = (0..(r + 1) / d)
                    .flat_map(|b| b * d..b * d + d - 1)
                    .collect();
                let value = RootOfUnity {
                    order: d as u64,
                    exponent: 1,
                };
                RGroupSpec::new(t, r, format!("Z/{d}"), vec![word.clone()], vec![d as u64])
                    .force(&word, value)
            })
            .collect(),
        B => {
            let word = if r.is_multiple_of(2) {
                odd_positions(r - 1)
            } else {
                let mut w = odd_positions(r - 2);
                w.push(r - 1);
                w
            };
            vec![
                RGroupSpec::new(t, r, "Z/2".into(), vec![word.clone()], vec![2])
                    .force(&word, MINUS_ONE),
            ]
        }
        C => vec![
            RGroupSpec::new(t, r, "Z/2".into(), vec![vec![r - 1]], vec![2])
                .force(&[r - 1], MINUS_ONE),
        ],
        D => {
            let tail = vec![r - 2, r - 1];
            let tail_group = RGroupSpec::new(t, r, "Z/2".into(), vec![tail.clone()], vec![2])
                .force(&tail, MINUS_ONE);
            if r.is_multiple_of(2) {
                let alt = odd_positions(r - 1);
                vec![
                    tail_group,
                    RGroupSpec::new(t, r, "Z/2".into(), vec![alt.clone()], vec![2])
                        .force(&alt, MINUS_ONE),
                    RGroupSpec::new(
                        t,
                        r,
                        "(Z/2)^2".into(),
                        vec![alt.clone(), tail.clone()],
                        vec![2, 2],
                    )
                    .force(&alt, MINUS_ONE)
                    .force(&tail, MINUS_ONE),
                ]
            } else {
                let mut word = odd_positions(r - 4);
                word.extend([r - 3, r - 2, r - 1]);
                let minus: Vec<usize> = odd_positions(r - 2);
                let four = RGroupSpec::new(t, r, "Z/4".into(), vec![word], vec![4])
                    .force(&minus, MINUS_ONE)
                    .force(
                        &[r - 2],
                        RootOfUnity {
                            order: 4,
                            exponent: 1,
                        },
                    )
                    .force(
                        &[r - 1],
                        RootOfUnity {
                            order: 4,
                            exponent: -1,
                        },
                    );
                vec![tail_group, four]
            }
        }
        E if r == 6 => {
            let xi = RootOfUnity {
                order: 3,
                exponent: 1,
            };
            let xi_inv = RootOfUnity {
                order: 3,
                exponent: -1,
            };
            vec![
                RGroupSpec::new(t, r, "Z/3".into(), vec![vec![0, 2, 5, 4]], vec![3])
                    .force(&[0, 2], xi)
                    .force(&[4, 5], xi_inv),
            ]
        }
        E if r == 7 => {
            vec![
                RGroupSpec::new(t, r, "Z/2".into(), vec![vec![1, 4, 6]], vec![2])
                    .force(&[1, 4, 6], MINUS_ONE),
            ]
        }
        _ => Vec::new(),
    }
}

/// An `R_chi` realized inside an enumerated Weyl group.
#[derive(Clone, Debug)]
pub struct RGroup {
    pub spec: RGroupSpec,
    pub generators: Vec<WeylElt>,
    pub subgroup: Subgroup,
    /// Exponents `k` with `element = prod g_i^{k_i}`.
    exponents: HashMap<WeylElt, Vec<u64>>,
}

impl RGroup {
    pub fn new(cover: &CoverSpec, spec: RGroupSpec) -> Result<Self> {
        let group = cover.weyl_group()?;
        let d = cover.datum();
        if (d.cartan_type(), d.rank()) != (spec.cartan_type, spec.rank) {
            return Err(Error::Config(format!(
                "R-group for {}{} used on {}",
                spec.cartan_type,
                spec.rank,
                d.name()
            )));
        }
        let generators: Vec<WeylElt> = spec
            .generators
            .iter()
            .map(|w| group.from_word(&w.iter().map(|&i| i as u8).collect::<Vec<_>>()))
            .collect();
        for (g, &o) in generators.iter().zip(&spec.orders) {
            if group.element_order(*g) as u64 != o {
                return Err(Error::Config(format!(
                    "R-group generator has order {}, not {o}",
                    group.element_order(*g)
                )));
            }
        }
        for a in &generators {
            for b in &generators {
                if group.mul(*a, *b) != group.mul(*b, *a) {
                    return Err(Error::Config("R-group generators do not commute".into()));
                }
            }
        }
        let mut exponents = HashMap::new();
        let mut k = vec![0u64; generators.len()];
        loop {
            let w = generators
                .iter()
                .zip(&k)
                .fold(WeylElt::IDENTITY, |acc, (&g, &e)| {
                    (0..e).fold(acc, |x, _| group.mul(x, g))
                });
            if exponents.insert(w, k.clone()).is_some() {
                return Err(Error::Config(
                    "R-group generators are not independent".into(),
                ));
            }
            let mut i = 0;
            while i < k.len() {
                k[i] += 1;
                if k[i] < spec.orders[i] {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == k.len() {
                break;
            }
        }
        let mut elements: Vec<WeylElt> = exponents.keys().copied().collect();
        elements.sort();
        Ok(RGroup {
            spec,
            generators,
            subgroup: Subgroup::from_sorted(elements),
            exponents,
        })
    }

    pub fn order(&self) -> usize {
        self.subgroup.order()
    }

    pub fn exponents(&self, w: WeylElt) -> Option<&[u64]> {
        self.exponents.get(&w).map(Vec::as_slice)
    }
}

/// All characters of `R_chi`, the trivial one first, indexed by exponent tuples `j`
/// with `sigma_j(prod g_i^{k_i}) = prod zeta_{o_i}^{j_i k_i}`.
pub fn rgroup_characters(cover: &CoverSpec, rgroup: &RGroup) -> Result<Vec<ClassFunction>> {
    let group = cover.weyl_group()?;
    let orders = &rgroup.spec.orders;
    let count: u64 = orders.iter().product();
    (0..count)
        .map(|mut idx| {
            let j: Vec<u64> = orders
                .iter()
                .map(|&o| {
                    let x = idx % o;
                    idx /= o;
                    x
                })
                .collect();
            let values = rgroup
                .subgroup
                .iter()
                .map(|w| {
                    let k = rgroup.exponents(w).expect("every element has exponents");
                    k.iter()
                        .zip(&j)
                        .zip(orders)
                        .fold(Cyclo::one(), |acc, ((&k, &j), &o)| {
                            &acc * &Cyclo::root_of_unity(o, (j * k) as i64)
                        })
                })
                .collect();
            ClassFunction::new(group.clone(), rgroup.subgroup.clone(), values)
        })
        .collect()
}

/// `zeta_rho(w) = s_chi(w(rho~) - rho~)` with `rho~` half the sum of the positive modified
/// coroots, read off from the expansion in the modified simple coroots.
pub fn zeta_rho(cover: &CoverSpec, rgroup: &RGroup, chi: &[Cyclo]) -> Result<ClassFunction> {
    rgroup.spec.check_chi(chi)?;
    let d = cover.datum();
    if d.flavor() != Flavor::Sc {
        return Err(Error::Hypothesis(
            "zeta_rho needs a simply-connected datum".into(),
        ));
    }
    let group = cover.weyl_group()?;
    let mut two_rho = vec![0i64; d.dim()];
    for root in d.positive_roots() {
        let k = cover.n_alpha(&root.coroot);
        for (s, c) in two_rho.iter_mut().zip(&root.coroot) {
            *s += k * c;
        }
    }
    let rho = Coweight {
        num: two_rho,
        den: 2,
    };
    let values = rgroup
        .subgroup
        .iter()
        .map(|w| {
            // Y coordinates of a simply-connected datum are simple coroot coefficients
            let shift = rho.shift(group.matrix(w));
            shift
                .iter()
                .enumerate()
                .try_fold(Cyclo::one(), |acc, (i, &c)| {
                    let k = cover.simple_n_alpha(i);
                    if c % k != 0 {
                        return Err(Error::Hypothesis(
                            "w(rho~) - rho~ is not in the modified coroot lattice".into(),
                        ));
                    }
                    Ok(&acc * &chi[i].pow(c / k)?)
                })
        })
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(group, rgroup.subgroup.clone(), values)
}

/// `<sigma ⊗ zeta_rho, Res sigma_O>_{R_chi}`.
pub fn whittaker_unitary(
    cover: &CoverSpec,
    census: &OrbitCensus,
    rgroup: &RGroup,
    chi: &[Cyclo],
    sigma: &ClassFunction,
    orbit: &OrbitRecord,
) -> Result<WhittakerDim> {
    let zeta = zeta_rho(cover, rgroup, chi)?;
    let perm: Vec<i64> = rgroup
        .subgroup
        .iter()
        .map(|w| fixed_points(census, orbit, w))
        .collect();
    let perm = ClassFunction::from_integers(zeta.group().clone(), rgroup.subgroup.clone(), &perm)?;
    let product = sigma.tensor(&zeta)?;
    let dim = inner_product(&product, &perm, &rgroup.subgroup)?;
    if !dim.is_integer() {
        return Err(Error::Config(format!("non-integral multiplicity {dim}")));
    }
    let dim: i64 = dim
        .to_integer()
        .try_into()
        .map_err(|_| Error::Resource("dimension overflow".into()))?;
    let d = cover.datum();
    let short_q_one = (0..d.rank())
        .filter(|&i| d.simple_coroot_length(i) == 1)
        .all(|i| cover.simple_q_values()[i] == 1);
    let within_hypotheses = cover.classify(None)?.very_saturated
        && short_q_one
        && s_property(cover, orbit) != SProperty::Unknown;
    Ok(WhittakerDim {
        dim,
        within_hypotheses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::enumerate_orbits;

    fn cover(t: CartanType, r: usize, n: u64) -> CoverSpec {
        CoverSpec::simply_connected(t, r, n, 1).unwrap()
    }

    fn zeta_at_generators(t: CartanType, r: usize, n: u64) -> Vec<(String, Vec<Cyclo>)> {
        let c = cover(t, r, n);
        rgroup_registry(t, r)
            .into_iter()
            .map(|spec| {
                let chi = spec.standard_chi();
                let label = spec.label.clone();
                let rg = RGroup::new(&c, spec).unwrap();
                let zeta = zeta_rho(&c, &rg, &chi).unwrap();
                (
                    label,
                    rg.generators
                        .iter()
                        .map(|&g| zeta.value(g).unwrap().clone())
                        .collect(),
                )
            })
            .collect()
    }

    #[test]
    fn registry_shapes() {
        let labels = |t, r| {
            rgroup_registry(t, r)
                .into_iter()
                .map(|s| s.label)
                .collect::<Vec<_>>()
        };
        assert_eq!(labels(CartanType::A, 5), vec!["Z/2", "Z/3", "Z/6"]);
        assert_eq!(labels(CartanType::D, 5), vec!["Z/2", "Z/4"]);
        assert_eq!(labels(CartanType::D, 4), vec!["Z/2", "Z/2", "(Z/2)^2"]);
        assert_eq!(
            rgroup_registry(CartanType::E, 6)[0].generators,
            vec![vec![0, 2, 5, 4]]
        );
        assert!(rgroup_registry(CartanType::F, 4).is_empty());
        assert!(rgroup_registry(CartanType::G, 2).is_empty());
    }

    #[test]
    fn generated_groups_have_the_stated_orders() {
        for (t, r, n) in [
            (CartanType::A, 5, 1),
            (CartanType::B, 3, 1),
            (CartanType::D, 4, 1),
            (CartanType::D, 5, 1),
        ] {
            let c = cover(t, r, n);
            for spec in rgroup_registry(t, r) {
                let expected: u64 = spec.orders.iter().product();
                let rg = RGroup::new(&c, spec).unwrap();
                assert_eq!(rg.order() as u64, expected);
            }
        }
    }

    #[test]
    fn zeta_values_on_generators() {
        let sign = |k: i64| Cyclo::from_int(k);
        // one d-cycle: (-1)^(d-1)
        for d in 2..=5usize {
            let z = zeta_at_generators(CartanType::A, d - 1, 1);
            let last = z.iter().find(|(l, _)| l == &format!("Z/{d}")).unwrap();
            assert_eq!(last.1[0], sign(if d % 2 == 0 { -1 } else { 1 }));
        }
        for r in [5usize, 7] {
            let z = zeta_at_generators(CartanType::D, r, 1);
            let four = z.iter().find(|(l, _)| l == "Z/4").unwrap();
            assert_eq!(four.1[0], sign(if (r - 1) / 2 % 2 == 0 { 1 } else { -1 }));
        }
        assert_eq!(zeta_at_generators(CartanType::E, 6, 1)[0].1[0], sign(1));
    }

    #[test]
    fn sl2_unitary_dimensions() {
        let c = cover(CartanType::A, 1, 3);
        let census = enumerate_orbits(&c, &Coweight::zero(1)).unwrap();
        let spec = rgroup_registry(CartanType::A, 1).remove(0);
        let chi = spec.standard_chi();
        let rg = RGroup::new(&c, spec).unwrap();
        let sigmas = rgroup_characters(&c, &rg).unwrap();
        let dims: Vec<(usize, i64)> = census
            .orbits
            .iter()
            .map(|o| {
                (
                    o.size(),
                    whittaker_unitary(&c, &census, &rg, &chi, &sigmas[0], o)
                        .unwrap()
                        .dim,
                )
            })
            .collect();
        assert_eq!(dims, vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn chi_constraints_are_enforced() {
        let c = cover(CartanType::B, 2, 3);
        let spec = rgroup_registry(CartanType::B, 2).remove(0);
        let rg = RGroup::new(&c, spec).unwrap();
        assert!(zeta_rho(&c, &rg, &[Cyclo::one(), Cyclo::one()]).is_err());
    }
}
