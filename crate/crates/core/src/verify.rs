//! Bound evaluation: the completely reducible bound, its absolute-irreducible
//! sharpening, the p-core quotient version, the sharpness suite and the fuzzer.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::construct::{self, Family};
use crate::error::{Error, Result};
use crate::gf::valuation::valuation;
use crate::gf::{epsilon_q, Field, Rational};
use crate::grp::{MatrixGroup, Perm};
use crate::matfq::Matrix;
use crate::modstruct::{decompose, CrStatus, ModuleDecomposition};
use crate::structure::{composition_tally, p_core, perm_tally, CompositionTally, Strategy};

fn ratio_str<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn opt_ratio_str<S: Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Inputs, computed invariants and the bound (eps_q d - r)/(p - 1) for one group.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub p: u32,
    pub f: u32,
    pub q: u32,
    pub d: usize,
    pub order: u128,
    pub r: usize,
    pub s: Option<usize>,
    pub c_p: u32,
    #[serde(serialize_with = "ratio_str")]
    pub epsilon: Rational,
    #[serde(serialize_with = "ratio_str")]
    pub bound: Rational,
    #[serde(serialize_with = "ratio_str")]
    pub slack: Rational,
    pub sharp: bool,
    /// (eps_q d - s)/(p - 1), computed unless q is an odd power of 2.
    #[serde(serialize_with = "opt_ratio_str")]
    pub s_bound: Option<Rational>,
    #[serde(serialize_with = "opt_ratio_str")]
    pub s_slack: Option<Rational>,
    pub cr: CrStatus,
    /// Order of the p-core, for the quotient check.
    pub p_core_order: Option<u128>,
    pub sampled: bool,
    pub tally: CompositionTally,
    pub elapsed_ms: u128,
}

impl BoundReport {
    /// The bound fails (a theorem violation when the group is completely reducible).
    pub fn violated(&self) -> bool {
        self.slack < Rational::from_integer(0)
    }

    pub fn s_violated(&self) -> bool {
        self.s_slack.is_some_and(|x| x < Rational::from_integer(0))
    }

    pub fn tsv_header() -> &'static str {
        "name\tp\tf\td\tr\ts\tc_p\tepsilon\tbound\tslack\tsharp"
    }

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.name,
            self.p,
            self.f,
            self.d,
            self.r,
            self.s.map_or("-".to_string(), |s| s.to_string()),
            self.c_p,
            self.epsilon,
            self.bound,
            self.slack,
            self.sharp
        )
    }
}

/// (eps d - r)/(p - 1).
pub fn bound_value(epsilon: Rational, d: usize, r: usize, p: u32) -> Rational {
    (epsilon * Rational::from_integer(d as i64) - Rational::from_integer(r as i64))
        / Rational::from_integer(p as i64 - 1)
}

fn report(
    name: &str,
    g: &MatrixGroup,
    dec: &ModuleDecomposition,
    tally: CompositionTally,
    c_p: u32,
    start: Instant,
) -> Result<BoundReport> {
    let field = g.field();
    let (p, f) = (field.p(), field.f());
    let epsilon = epsilon_q(p as u64, f as u64);
    let bound = bound_value(epsilon, g.dim(), dec.r, p);
    let slack = bound - Rational::from_integer(c_p as i64);
    let odd_power_of_two = p == 2 && f % 2 == 1;
    let s_bound = match dec.s {
        Some(s) if !odd_power_of_two => Some(bound_value(epsilon, g.dim(), s, p)),
        _ => None,
    };
    Ok(BoundReport {
        name: name.to_string(),
        p,
        f,
        q: field.q(),
        d: g.dim(),
        order: g.order()?,
        r: dec.r,
        s: dec.s,
        c_p,
        epsilon,
        bound,
        slack,
        sharp: slack == Rational::from_integer(0),
        s_slack: s_bound.map(|b| b - Rational::from_integer(c_p as i64)),
        s_bound,
        cr: dec.cr,
        p_core_order: None,
        sampled: tally.sampled,
        tally,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Checks c_p(G) <= (eps_q d - r)/(p - 1) for a completely reducible G.
pub fn verify_bound(name: &str, g: &MatrixGroup, cfg: &Config) -> Result<BoundReport> {
    let start = Instant::now();
    g.vector_action()?;
    let dec = decompose(g);
    if !dec.is_cr() {
        return Err(Error::NotCompletelyReducible);
    }
    let tally = composition_tally(g, cfg)?;
    let c = tally.c_p(g.field().p() as u64);
    report(name, g, &dec, tally, c, start)
}

/// Checks c_p(G / O_p(G)) <= (eps_q d - r)/(p - 1) with r the length of a
/// composition flag of the natural module.
pub fn verify_corollary(name: &str, g: &MatrixGroup, cfg: &Config) -> Result<BoundReport> {
    let start = Instant::now();
    let act = g.vector_action()?;
    let dec = decompose(g);
    let core = p_core(g, &dec)?;
    let core_order = core.order()?;
    let tally = if core_order == 1 {
        composition_tally(g, cfg)?
    } else {
        let quotient = g.coset_action(&core)?.quotient();
        debug_assert_eq!(quotient.order() * core_order, act.order());
        perm_tally(&quotient, cfg, Strategy::DerivedFirst)?
    };
    let c = tally.c_p(g.field().p() as u64);
    let mut rep = report(name, g, &dec, tally, c, start)?;
    rep.p_core_order = Some(core_order);
    Ok(rep)
}

/// One row of the sharpness suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteEntry {
    pub family: String,
    pub level: u32,
    pub report: Option<BoundReport>,
    /// Constant of the tower construction: (c_p(level 1)(p - 1) + 1)/r_1.
    #[serde(serialize_with = "opt_ratio_str")]
    pub family_epsilon: Option<Rational>,
    /// (family_epsilon d - r)/(p - 1) - c_p; zero along a sharp tower.
    #[serde(serialize_with = "opt_ratio_str")]
    pub family_slack: Option<Rational>,
    pub error: Option<String>,
}

/// Families of the suite: (family, p, q).
pub const SUITE_FAMILIES: &[(Family, u32, u32)] = &[
    (Family::GammaL1, 2, 2),
    (Family::GammaL1, 3, 3),
    (Family::GammaL1, 2, 4),
    (Family::GammaL1, 5, 5),
    (Family::Gu32, 2, 4),
    (Family::Extraspecial, 3, 3),
    (Family::Extraspecial, 5, 5),
];

pub const DEFAULT_SUITE_MAX_DIM: usize = 9;

fn base_dim(family: Family, p: u32) -> usize {
    match family {
        Family::GammaL1 => p as usize,
        Family::Gu32 => 3,
        Family::Extraspecial => p as usize - 1,
        Family::GlCounterexample => 1,
    }
}

/// Runs every tower level of dimension at most `max_dim`.
pub fn sharpness_suite(max_dim: usize, cfg: &Config) -> Vec<SuiteEntry> {
    let mut out = Vec::new();
    for &(family, p, q) in SUITE_FAMILIES {
        let tp = family.prime(p);
        let r1 = base_dim(family, p);
        let mut family_eps: Option<Rational> = None;
        let mut level = 1;
        while r1 * (tp as usize).pow(level - 1) <= max_dim {
            let name = format!("{}-p{}-q{}-L{}", family.name(), tp, q, level);
            let built = family.build(p, q, level, cfg.degree_limit);
            let res = built.and_then(|g| verify_bound(&name, &g, cfg));
            let entry = match res {
                Ok(rep) => {
                    if level == 1 {
                        family_eps = Some(
                            Rational::from_integer(rep.c_p as i64 * (tp as i64 - 1) + 1)
                                / Rational::from_integer(r1 as i64),
                        );
                    }
                    let family_slack = family_eps.map(|e| {
                        bound_value(e, rep.d, rep.r, tp) - Rational::from_integer(rep.c_p as i64)
                    });
                    SuiteEntry {
                        family: family.name().to_string(),
                        level,
                        family_epsilon: family_eps,
                        family_slack,
                        report: Some(rep),
                        error: None,
                    }
                }
                Err(e) => SuiteEntry {
                    family: family.name().to_string(),
                    level,
                    report: None,
                    family_epsilon: family_eps,
                    family_slack: None,
                    error: Some(e.to_string()),
                },
            };
            out.push(entry);
            level += 1;
        }
    }
    out
}

/// Aggregate outcome of a fuzzing run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FuzzSummary {
    pub tested: usize,
    pub cr: usize,
    pub sharp: usize,
    pub max_cp: u32,
    pub skipped: usize,
    pub violations: Vec<String>,
}

/// Seeded random subgroups of GL(d, q) for every d <= d_max and q in `qs`;
/// each completely reducible one must satisfy the bound.
pub fn fuzz(
    d_max: usize,
    qs: &[u32],
    trials: usize,
    seed: u64,
    cfg: &Config,
) -> Result<FuzzSummary> {
    let mut summary = FuzzSummary::default();
    for d in 1..=d_max {
        for &q in qs {
            let (r, f) = construct::prime_power(q)
                .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
            let field = Arc::new(Field::new(r, f, None)?);
            for t in 0..trials {
                let case_seed = seed ^ ((d as u64) << 48) ^ ((q as u64) << 32) ^ t as u64;
                let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
                let name = format!("fuzz-d{d}-q{q}-{t}");
                let g = random_group(&field, d, &mut rng)?.with_degree_limit(cfg.degree_limit);
                summary.tested += 1;
                match verify_bound(&name, &g, cfg) {
                    Ok(rep) => {
                        summary.cr += 1;
                        summary.sharp += rep.sharp as usize;
                        summary.max_cp = summary.max_cp.max(rep.c_p);
                        let p = rep.p as u64;
                        let v = valuation(rep.order, p);
                        let log_a = valuation(rep.tally.a_of_g(), p);
                        if rep.violated()
                            || rep.c_p > v
                            || rep.c_p > log_a
                            || rep.tally.order() != rep.order
                        {
                            summary
                                .violations
                                .push(format!("{name}: c_p={} bound={}", rep.c_p, rep.bound));
                        }
                    }
                    Err(Error::NotCompletelyReducible) => {}
                    Err(e) if e.is_resource_limit() => summary.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(summary)
}

fn random_invertible(field: &Field, d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let data = (0..d * d).map(|_| rng.gen_range(0..field.q())).collect();
        let m = Matrix::from_flat(d, d, data);
        if m.is_invertible(field) {
            return m;
        }
    }
}

/// A pseudorandom subgroup: random generators, a reducible block sum, a
/// monomial group, or a subfield group.
fn random_group(field: &Arc<Field>, d: usize, rng: &mut ChaCha8Rng) -> Result<MatrixGroup> {
    let kind = rng.gen_range(0..4);
    match kind {
        1 if d >= 2 => {
            let k = rng.gen_range(1..d);
            let a = random_group(field, k, rng)?;
            let b = random_group(field, d - k, rng)?;
            construct::direct_sum_groups(&a, &b)
        }
        2 if d >= 2 => {
            let diag: Vec<Matrix> = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let entries: Vec<u32> = (0..d).map(|_| rng.gen_range(1..field.q())).collect();
                    Matrix::diagonal(&entries)
                })
                .collect();
            let mut images: Vec<u32> = (0..d as u32).collect();
            for i in (1..d).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let top = Perm::from_images(images);
            let mut gens = diag;
            gens.push(Matrix::permutation(
                &top.images().iter().map(|&x| x as usize).collect::<Vec<_>>(),
            ));
            MatrixGroup::new(field.clone(), d, gens)
        }
        3 if field.f() > 1 => {
            let sub = Arc::new(Field::prime(field.p())?);
            let h = random_group(&sub, d, rng)?;
            h.extend_scalars(field.clone())
        }
        _ => {
            let k = rng.gen_range(1..=2);
            let gens = (0..k).map(|_| random_invertible(field, d, rng)).collect();
            MatrixGroup::new(field.clone(), d, gens)
        }
    }
}
