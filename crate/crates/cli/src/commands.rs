//! One function per command; each turns a [`Job`] into an [`Outcome`] of ordered rows.

use cover_core::cover::CoverSpec;
use cover_core::exact::Cyclo;
use cover_core::heckemod::{
    compare_induced, default_window, sl2_special, verify_gg_relations, GgModule,
};
use cover_core::orbits::{enumerate_orbits, OrbitCensus};
use cover_core::propp::propp_checks;
use cover_core::rootdata::{CartanType, Coweight};
use cover_core::scatter::{ChiPoint, Scalar, ScatterContext, ScatterMatrix};
use cover_core::wchar::{
    rgroup_characters, rgroup_registry, verify_twist_equiv, verify_uni_key, verify_wh_equi,
    whittaker_unitary, zeta_rho, CharacterContext, RGroup, RGroupSpec,
};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::job::{CommandName, Job};

pub type Row = Map<String, Value>;

/// Rows in canonical order plus the verdicts that drive the exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    /// `Some(false)` when a verification failed.
    pub passed: Option<bool>,
    /// Rows whose values rest on unmet hypotheses.
    pub flagged: usize,
    /// A layout replacing the generic markdown table.
    pub markdown: Option<String>,
}

impl Outcome {
    fn verdict(&mut self, ok: bool) {
        self.passed = Some(self.passed.unwrap_or(true) && ok);
    }

    fn push(&mut self, row: Value) {
        if let Value::Object(map) = row {
            self.rows.push(map);
        }
    }
}

fn covers(job: &Job) -> Result<Vec<CoverSpec>, CliError> {
    if job.covers.is_empty() {
        return Err(CliError::Usage(format!(
            "{} needs at least one cover",
            job.command.label()
        )));
    }
    job.covers
        .iter()
        .cloned()
        .map(|c| Ok(CoverSpec::new(c)?))
        .collect()
}

fn twist(job: &Job, cover: &CoverSpec) -> Result<Coweight, CliError> {
    match &job.z {
        Some(z) => z.resolve(cover.datum()),
        None => Ok(Coweight::zero(cover.datum().dim())),
    }
}

fn cyclo_json(c: &Cyclo) -> Value {
    match c.to_rational() {
        Some(r) => json!(r.to_string()),
        None => json!({
            "conductor": c.conductor(),
            "coeffs": c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        }),
    }
}

fn rgroups(job: &Job, cover: &CoverSpec) -> Result<Vec<RGroupSpec>, CliError> {
    let cfg = cover.config();
    let all = rgroup_registry(cfg.cartan_type, cfg.rank);
    let chosen: Vec<RGroupSpec> = match &job.rgroup {
        Some(label) => all.into_iter().filter(|s| &s.label == label).collect(),
        None => all,
    };
    if chosen.is_empty() {
        return Err(CliError::Usage(format!(
            "no registered R-group {} for {}",
            job.rgroup.as_deref().unwrap_or("at all"),
            cover.name()
        )));
    }
    Ok(chosen)
}

pub fn execute(job: &Job) -> Result<Outcome, CliError> {
    match job.command {
        CommandName::Classify => classify(job),
        CommandName::Tables => tables(job),
        CommandName::Orbits => orbits(job),
        CommandName::WhittakerReg => whittaker_reg(job),
        CommandName::WhittakerUni => whittaker_uni(job),
        CommandName::Zeta => zeta(job),
        CommandName::VerifyHecke => verify_hecke(job),
        CommandName::VerifyPropp => verify_propp(job),
        CommandName::VerifyUnikey => verify_unikey(job),
        CommandName::VerifyTwist => verify_twist(job),
        CommandName::VerifyWhequi => verify_whequi(job),
        CommandName::VerifySl2 => verify_sl2(job),
        CommandName::VerifyScatter => verify_scatter(job),
        CommandName::Scattering => scattering(job),
    }
}

fn classify(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        let z = job.z.as_ref().map(|z| z.resolve(c.datum())).transpose()?;
        let k = c.classify(z.as_ref())?;
        out.push(json!({
            "cover": c.name(),
            "det_bq": c.det_bq(),
            "quotient_size": c.quotient()?.size(),
            "saturated": k.saturated,
            "aligned": k.aligned,
            "very_saturated": k.very_saturated,
            "oasitic": k.oasitic,
            "z_persistent": k.z_persistent,
        }));
    }
    Ok(out)
}

/// The types of the predicate sweep, split as classical and exceptional.
fn table_types() -> [Vec<(CartanType, usize)>; 2] {
    use CartanType::*;
    let mut classical: Vec<(CartanType, usize)> = (1..=6).map(|r| (A, r)).collect();
    classical.extend((2..=4).map(|r| (B, r)));
    classical.extend((2..=4).map(|r| (C, r)));
    classical.extend([(D, 4), (D, 5)]);
    [classical, vec![(E, 6), (E, 7), (E, 8), (F, 4), (G, 2)]]
}

const PREDICATES: [&str; 3] = ["saturated", "very_saturated", "oasitic"];

fn tables(job: &Job) -> Result<Outcome, CliError> {
    let n_max = job.n_max.unwrap_or(12);
    if n_max == 0 {
        return Err(CliError::Usage("n_max must be positive".into()));
    }
    let mut out = Outcome::default();
    let mut markdown = String::new();
    for (k, types) in table_types().iter().enumerate() {
        // holds[type][predicate] lists the n with the predicate
        let mut holds: Vec<[Vec<u64>; 3]> = Vec::new();
        for &(t, r) in types {
            let mut cell: [Vec<u64>; 3] = Default::default();
            for n in 1..=n_max {
                let c = CoverSpec::simply_connected(t, r, n, 1)?;
                let k = c.classify(None)?;
                for (list, value) in cell
                    .iter_mut()
                    .zip([k.saturated, k.very_saturated, k.oasitic])
                {
                    if value {
                        list.push(n);
                    }
                }
                out.push(json!({
                    "type": t.to_string(),
                    "rank": r,
                    "n": n,
                    "saturated": k.saturated,
                    "very_saturated": k.very_saturated,
                    "oasitic": k.oasitic,
                }));
            }
            holds.push(cell);
        }
        if k > 0 {
            markdown.push('\n');
        }
        markdown.push_str(&format!(
            "Table {}: n in 1..={n_max} with each property\n\n|  |",
            k + 1
        ));
        for (t, r) in types {
            markdown.push_str(&format!(" {t}{r} |"));
        }
        markdown.push_str(&format!("\n|---|{}\n", "---|".repeat(types.len())));
        for (p, name) in PREDICATES.iter().enumerate() {
            markdown.push_str(&format!("| {} |", name.replace('_', " ")));
            for cell in &holds {
                let list = &cell[p];
                let text = if list.len() as u64 == n_max {
                    "all".to_string()
                } else if list.is_empty() {
                    "none".to_string()
                } else {
                    list.iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                };
                markdown.push_str(&format!(" {text} |"));
            }
            markdown.push('\n');
        }
    }
    out.markdown = Some(markdown);
    Ok(out)
}

fn orbits(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        let census = enumerate_orbits(&c, &twist(job, &c)?)?;
        let mut matched = false;
        for o in &census.orbits {
            if job.orbit.as_ref().is_some_and(|rep| rep != &o.rep) {
                continue;
            }
            matched = true;
            out.push(json!({
                "cover": c.name(),
                "rep": o.rep,
                "size": o.size(),
                "stab_order": o.stabilizer.order(),
                "free": o.is_free(),
                "splitting": o.splitting,
                "witness": o.witness,
            }));
        }
        if let (Some(rep), false) = (&job.orbit, matched) {
            return Err(CliError::Usage(format!(
                "{rep:?} is not a canonical orbit representative of {}",
                c.name()
            )));
        }
    }
    Ok(out)
}

fn whittaker_reg(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        let census = enumerate_orbits(&c, &twist(job, &c)?)?;
        let ctx = CharacterContext::new(c.weyl_group()?);
        let rank = c.datum().rank();
        let phi_chi: Vec<usize> = job.phi_chi.clone().unwrap_or_else(|| (0..rank).collect());
        for o in &census.orbits {
            let dims = match &job.s {
                Some(s) => vec![(s.clone(), ctx.whittaker_regular(&census, o, &phi_chi, s)?)],
                None => ctx.whittaker_regular_all(&census, o, &phi_chi)?,
            };
            for (s, d) in dims {
                out.flagged += usize::from(!d.within_hypotheses);
                out.push(json!({
                    "cover": c.name(),
                    "orbit": o.rep,
                    "orbit_size": o.size(),
                    "S": s,
                    "dim": d.dim,
                    "within_hypotheses": d.within_hypotheses,
                }));
            }
        }
    }
    Ok(out)
}

fn whittaker_uni(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        let census = enumerate_orbits(&c, &Coweight::zero(c.datum().dim()))?;
        for spec in rgroups(job, &c)? {
            let chi = spec.standard_chi();
            let label = spec.label.clone();
            let rg = RGroup::new(&c, spec)?;
            for (k, sigma) in rgroup_characters(&c, &rg)?.iter().enumerate() {
                for o in &census.orbits {
                    let d = whittaker_unitary(&c, &census, &rg, &chi, sigma, o)?;
                    out.flagged += usize::from(!d.within_hypotheses);
                    out.push(json!({
                        "cover": c.name(),
                        "rgroup": label,
                        "sigma": k,
                        "orbit": o.rep,
                        "dim": d.dim,
                        "within_hypotheses": d.within_hypotheses,
                    }));
                }
            }
        }
    }
    Ok(out)
}

fn zeta(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        let group = c.weyl_group()?;
        for spec in rgroups(job, &c)? {
            let chi = spec.standard_chi();
            let label = spec.label.clone();
            let rg = RGroup::new(&c, spec)?;
            let z = zeta_rho(&c, &rg, &chi)?;
            for w in rg.subgroup.iter() {
                let value = z
                    .value(w)
                    .ok_or_else(|| CliError::Usage("zeta undefined on R-group".into()))?;
                out.push(json!({
                    "cover": c.name(),
                    "rgroup": label,
                    "element": group.reduced_word(w),
                    "generator": rg.generators.contains(&w),
                    "value": cyclo_json(value),
                }));
            }
        }
    }
    Ok(out)
}

fn zero_census(c: &CoverSpec) -> Result<OrbitCensus, CliError> {
    Ok(enumerate_orbits(c, &Coweight::zero(c.datum().dim()))?)
}

fn verify_hecke(job: &Job) -> Result<Outcome, CliError> {
    let q = job.require_q()?;
    let mut out = Outcome::default();
    for c in covers(job)? {
        let m = GgModule::new(&c, q)?;
        let census = zero_census(&c)?;
        let window = default_window(&c, job.window.unwrap_or(50));
        for r in verify_gg_relations(&m, &census, &window)? {
            out.verdict(r.passed());
            out.push(json!({
                "cover": c.name(),
                "check": r.relation,
                "detail": r.vectors_checked,
                "status": if r.passed() { "pass" } else { "fail" },
                "counterexample": r.counterexample,
            }));
        }
        for o in census.orbits.iter().filter(|o| o.splitting) {
            let r = compare_induced(&m, &census, o)?;
            out.verdict(r.passed());
            out.push(json!({
                "cover": c.name(),
                "check": format!("induced {:?}", o.rep),
                "detail": format!("rank {}, wall {:?}, free rank one {}", r.rank, r.wall, r.free_rank_one),
                "status": if r.passed() { "pass" } else { "fail" },
                "counterexample": Value::Null,
            }));
        }
    }
    Ok(out)
}

fn report_rows(out: &mut Outcome, cover: &CoverSpec, report: &impl serde::Serialize, passed: bool) {
    out.verdict(passed);
    let mut row = Map::new();
    row.insert("cover".into(), json!(cover.name()));
    row.insert("status".into(), json!(if passed { "pass" } else { "fail" }));
    if let Value::Object(fields) = json!(report) {
        row.extend(fields);
    }
    out.rows.push(row);
}

fn verify_propp(job: &Job) -> Result<Outcome, CliError> {
    let q = job.require_q()?;
    let mut out = Outcome::default();
    for c in covers(job)? {
        let r = propp_checks(&c, q, job.samples.unwrap_or(200), job.seed.unwrap_or(0))?;
        report_rows(&mut out, &c, &r, r.passed());
    }
    Ok(out)
}

fn verify_unikey(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        let ctx = CharacterContext::new(c.weyl_group()?);
        for spec in rgroups(job, &c)? {
            let label = spec.label.clone();
            let rg = RGroup::new(&c, spec)?;
            let r = verify_uni_key(&ctx, &c, &rg)?;
            out.verdict(r.passed());
            out.push(json!({
                "cover": c.name(),
                "rgroup": label,
                "status": if r.passed() { "pass" } else { "fail" },
                "candidates": r.candidates.len(),
                "violations": r.violations,
            }));
        }
    }
    Ok(out)
}

/// Representatives of `P / Y` in fundamental coweight coordinates.
fn coweight_classes(c: &CoverSpec) -> Result<Vec<Coweight>, CliError> {
    let d = c.datum();
    let quotient = d.coweight_quotient()?;
    quotient
        .representatives()
        .map(|coords| Ok(d.coweight(&coords)?))
        .collect()
}

fn verify_twist(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        let ctx = CharacterContext::new(c.weyl_group()?);
        let twists = match &job.z {
            Some(z) => vec![z.resolve(c.datum())?],
            None => coweight_classes(&c)?,
        };
        for z in twists {
            let r = verify_twist_equiv(&ctx, &c, &z)?;
            let passed = r.isomorphic && r.equivariant;
            out.verdict(passed);
            out.push(json!({
                "cover": c.name(),
                "z": c.datum().coweight_coords(&z.num).iter().map(|x| x / z.den).collect::<Vec<_>>(),
                "status": if passed { "pass" } else { "fail" },
                "isomorphic": r.isomorphic,
                "equivariant": r.equivariant,
                "y_z": r.y_z,
            }));
        }
    }
    Ok(out)
}

fn verify_whequi(job: &Job) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for c in covers(job)? {
        for spec in rgroups(job, &c)? {
            let chi = spec.standard_chi();
            let label = spec.label.clone();
            let rg = RGroup::new(&c, spec)?;
            let r = verify_wh_equi(&c, &rg, &chi)?;
            for row in &r.rows {
                let passed = row.untwisted == row.twisted;
                out.verdict(passed);
                out.push(json!({
                    "cover": c.name(),
                    "rgroup": label,
                    "sigma": row.sigma,
                    "orbit": row.orbit_rep,
                    "status": if passed { "pass" } else { "fail" },
                    "untwisted": row.untwisted,
                    "twisted": row.twisted,
                }));
            }
        }
    }
    Ok(out)
}

fn verify_sl2(job: &Job) -> Result<Outcome, CliError> {
    let q = job.require_q()?;
    let mut out = Outcome::default();
    for c in covers(job)? {
        let m = GgModule::new(&c, q)?;
        let r = sl2_special(&m, job.window.unwrap_or(10) as i64)?;
        report_rows(&mut out, &c, &r, r.passed());
    }
    Ok(out)
}

fn verify_scatter(job: &Job) -> Result<Outcome, CliError> {
    let q = job.require_q()?;
    let mut out = Outcome::default();
    for c in covers(job)? {
        let ctx = ScatterContext::new(&c, q, &twist(job, &c)?)?;
        let r = ctx.sweep(job.samples.unwrap_or(20), 5, job.seed.unwrap_or(0))?;
        report_rows(&mut out, &c, &r, r.passed());
    }
    Ok(out)
}

fn matrix_rows<S: Scalar>(
    out: &mut Outcome,
    ctx: &ScatterContext,
    cover: &CoverSpec,
    m: &ScatterMatrix<S>,
    value: impl Fn(&S) -> Vec<(&'static str, Value)>,
) {
    let quotient = ctx.quotient();
    for (row, col) in m.support() {
        let mut entry = Map::new();
        entry.insert("cover".into(), json!(cover.name()));
        entry.insert("row".into(), json!(quotient.from_index(row)));
        entry.insert("col".into(), json!(quotient.from_index(col)));
        entry.extend(
            value(m.get(row, col))
                .into_iter()
                .map(|(k, v)| (k.to_string(), v)),
        );
        out.rows.push(entry);
    }
}

fn scattering(job: &Job) -> Result<Outcome, CliError> {
    let q = job.require_q()?;
    let word = job.word.clone().unwrap_or_default();
    let exps = job
        .chi
        .clone()
        .ok_or_else(|| CliError::Usage("scattering needs chi".into()))?;
    let order = job.chi_order.unwrap_or(7);
    if order == 0 {
        return Err(CliError::Usage("chi_order must be positive".into()));
    }
    let mut out = Outcome::default();
    for c in covers(job)? {
        let ctx = ScatterContext::new(&c, q, &twist(job, &c)?)?;
        let exact = ChiPoint::roots_of_unity(order, &exps);
        if job.float {
            let chi = ChiPoint::new(
                exact
                    .values
                    .iter()
                    .map(Cyclo::to_complex)
                    .collect::<Vec<Complex64>>(),
            );
            let m = ctx.scattering_matrix(&word, &chi)?;
            matrix_rows(&mut out, &ctx, &c, &m, |z| {
                vec![("re", json!(z.re)), ("im", json!(z.im))]
            });
        } else {
            let m = ctx.scattering_matrix(&word, &exact)?;
            matrix_rows(&mut out, &ctx, &c, &m, |x| vec![("value", cyclo_json(x))]);
        }
    }
    Ok(out)
}
