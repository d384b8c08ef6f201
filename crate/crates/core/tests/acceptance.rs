//! One test per acceptance criterion. Each prints a PASS or FAIL line
//! straight to stdout (bypassing the harness capture) and then asserts.

mod common;

use std::io::Write;
use std::time::Instant;

use crfactor::construct::{
    counterexample_gl, direct_sum_groups, extraspecial_normalizer, gamma_l_1, general_linear,
    subdirect_sample, tensor_groups, upper_triangular, Family,
};
use crfactor::gf::{epsilon_q, legendre_valuation, valuation, Rational};
use crfactor::grp::{Cert, MatrixGroup, PermGroup};
use crfactor::matfq::Subspace;
use crfactor::modstruct::{decompose, endo_dim};
use crfactor::structure::{composition_tally, perm_tally, CompositionTally, Strategy};
use crfactor::verify::{fuzz, verify_bound, verify_corollary, BoundReport};
use crfactor::{Config, Error};

use common::{brute_force_order, corpus, field};

fn conclude(id: u32, title: &str, started: Instant, failures: &[String]) {
    let secs = started.elapsed().as_secs_f64();
    let line = if failures.is_empty() {
        format!("criterion {id:>2} PASS  {title} ({secs:.2}s)")
    } else {
        format!(
            "criterion {id:>2} FAIL  {title} ({secs:.2}s): {}",
            failures.join("; ")
        )
    };
    let _ = writeln!(std::io::stdout().lock(), "{line}");
    assert!(failures.is_empty(), "{line}");
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// Checks (d, c_p) and a zero slack on one tower level.
fn check_level(rep: &BoundReport, d: usize, c: u32, failures: &mut Vec<String>) {
    if rep.d != d || rep.c_p != c {
        failures.push(format!(
            "{}: (d, c_p) = ({}, {}), expected ({d}, {c})",
            rep.name, rep.d, rep.c_p
        ));
    }
    if rep.slack != zero() {
        failures.push(format!(
            "{}: bound {} minus c_p {} leaves slack {}",
            rep.name, rep.bound, rep.c_p, rep.slack
        ));
    }
}

fn family_level(family: Family, p: u32, q: u32, level: u32) -> BoundReport {
    let cfg = Config::default();
    let g = family.build(p, q, level, cfg.degree_limit).unwrap();
    let name = format!("{}-p{}-q{q}-L{level}", family.name(), family.prime(p));
    verify_bound(&name, &g, &cfg).unwrap()
}

#[test]
fn criterion_01_gamma_l_tower_binary() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (level, d, c) in [(1, 2, 1), (2, 4, 3), (3, 8, 7)] {
        check_level(
            &family_level(Family::GammaL1, 2, 2, level),
            d,
            c,
            &mut failures,
        );
    }
    conclude(1, "gammaL1 tower p=2 q=2 levels 1-3 sharp", t, &failures);
}

#[test]
fn criterion_02_gamma_l_tower_ternary() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (level, d, c) in [(1, 3, 1), (2, 9, 4)] {
        check_level(
            &family_level(Family::GammaL1, 3, 3, level),
            d,
            c,
            &mut failures,
        );
    }
    conclude(2, "gammaL1 tower p=3 q=3 levels 1-2 sharp", t, &failures);
}

#[test]
fn criterion_03_unitary_tower() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let base = family_level(Family::Gu32, 2, 4, 1);
    if base.order != 648 || base.c_p != 3 {
        failures.push(format!(
            "level 1: order {} c_2 {}, expected 648 and 3",
            base.order, base.c_p
        ));
    }
    let top = family_level(Family::Gu32, 2, 4, 2);
    check_level(&top, 6, 7, &mut failures);
    if top.bound != Rational::new(4, 3) * Rational::from_integer(6) - Rational::from_integer(1) {
        failures.push(format!("level 2 bound {}", top.bound));
    }
    conclude(
        3,
        "gu32 tower q=4: order 648, level 2 c_2 = 7 sharp",
        t,
        &failures,
    );
}

#[test]
fn criterion_04_extraspecial_tower() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let base = family_level(Family::Extraspecial, 3, 3, 1);
    if base.order != 24 {
        failures.push(format!("level 1 order {}", base.order));
    }
    if base.bound
        != (Rational::new(3, 2) * Rational::from_integer(2) - Rational::from_integer(1)) / 2
    {
        failures.push(format!("level 1 bound {}", base.bound));
    }
    check_level(&base, 2, 1, &mut failures);
    check_level(
        &family_level(Family::Extraspecial, 3, 3, 2),
        6,
        4,
        &mut failures,
    );
    conclude(
        4,
        "extraspecial tower p=3: orders 24, c_3 = 1 then 4, sharp",
        t,
        &failures,
    );
}

#[test]
fn criterion_05_unbounded_in_f() {
    let t = Instant::now();
    let cfg = Config::default();
    let mut failures = Vec::new();
    for (p, r, f, expected) in [(3u32, 7u32, 3u32, 2u32), (5, 11, 5, 2)] {
        let g = counterexample_gl(p, r, f, 1, cfg.degree_limit).unwrap();
        let q = (r as u128).pow(f);
        let c = composition_tally(&g, &cfg).unwrap().c_p(p as u64);
        let v = valuation(q - 1, p as u64);
        if c != expected || v != expected || c < v {
            failures.push(format!(
                "GL(1,{q}): c_{p} = {c}, v_{p}(q-1) = {v}, expected {expected}"
            ));
        }
    }
    if !matches!(
        counterexample_gl(3, 7, 1, 1, cfg.degree_limit),
        Err(Error::PreconditionViolated(_))
    ) {
        failures.push("f = 1 accepted".into());
    }
    conclude(5, "GL(1,343) has c_3 = 2 = v_3(342)", t, &failures);
}

#[test]
fn criterion_06_quotient_by_p_core() {
    let t = Instant::now();
    let cfg = Config::default();
    let g = upper_triangular(field(3, 1), 2).unwrap();
    let rep = verify_corollary("upper-2-3", &g, &cfg).unwrap();
    let mut failures = Vec::new();
    if rep.r != 2 || rep.p_core_order != Some(3) || rep.c_p != 0 {
        failures.push(format!(
            "r {} core {:?} c_3 {}",
            rep.r, rep.p_core_order, rep.c_p
        ));
    }
    if rep.bound != zero() || rep.slack != zero() {
        failures.push(format!(
            "bound {} slack {}, expected 0 and 0",
            rep.bound, rep.slack
        ));
    }
    conclude(
        6,
        "upper triangular GL(2,3): r = 2, |O_3| = 3, quotient c_3 = 0, slack 0",
        t,
        &failures,
    );
}

#[test]
fn criterion_07_legendre() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for p in [2u64, 3, 5, 7, 17] {
        for r in 1..=2000u64 {
            let mut oracle = 0;
            let mut pk = p;
            while pk <= r {
                oracle += r / pk;
                pk *= p;
            }
            let v = legendre_valuation(r, p).value;
            if v != oracle {
                failures.push(format!("v_{p}({r}!) = {v}, oracle {oracle}"));
            }
            if v * (p - 1) > r - 1 || v < valuation(r as u128, p) as u64 {
                failures.push(format!("inequality fails at r = {r}, p = {p}"));
            }
        }
    }
    conclude(
        7,
        "Legendre valuation matches floor sums for r <= 2000",
        t,
        &failures,
    );
}

#[test]
fn criterion_08_epsilon_table() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut expect = |p: u64, f: u64, e: Rational| {
        if epsilon_q(p, f) != e {
            failures.push(format!("eps({p}, {f}) = {}, expected {e}", epsilon_q(p, f)));
        }
    };
    for f in 1..=8 {
        expect(
            2,
            f,
            if f % 2 == 0 {
                Rational::new(4, 3)
            } else {
                Rational::from_integer(1)
            },
        );
        for p in [3u64, 5, 17] {
            expect(p, f, Rational::new(p as i64, p as i64 - 1));
        }
        expect(7, f, Rational::from_integer(1));
        expect(11, f, Rational::from_integer(1));
    }
    conclude(8, "epsilon_q table", t, &failures);
}

#[test]
fn criterion_09_two_series_agree() {
    let t = Instant::now();
    let cfg = Config::default();
    let mut failures = Vec::new();
    for (name, g) in corpus() {
        let Some(order) = brute_force_order(&g, 10_000) else {
            continue;
        };
        let action = g.vector_action().unwrap();
        let derived = perm_tally(action, &cfg, Strategy::DerivedFirst).unwrap();
        let normal = perm_tally(action, &cfg, Strategy::NormalFirst).unwrap();
        if !derived.same_factors(&normal) {
            failures.push(format!("{name}: {derived:?} vs {normal:?}"));
        }
        if derived.order() != order || normal.order() != order {
            failures.push(format!(
                "{name}: factor product {} vs order {order}",
                derived.order()
            ));
        }
    }
    conclude(
        9,
        "tallies along two series coincide and multiply to |G|",
        t,
        &failures,
    );
}

fn tally(g: &PermGroup) -> CompositionTally {
    perm_tally(g, &Config::default(), Strategy::DerivedFirst).unwrap()
}

fn primes_of(t: &CompositionTally) -> Vec<u64> {
    t.cyclic.keys().copied().chain([2, 3, 5, 7]).collect()
}

/// c_p(H) <= (n - 1)/(p - 1) for a permutation group H of degree n.
fn check_symmetric_bound(what: &str, h: &PermGroup, failures: &mut Vec<String>) {
    let t = tally(h);
    let n = h.degree() as u64;
    for p in primes_of(&t) {
        if (t.c_p(p) as u64) * (p - 1) > n - 1 {
            failures.push(format!(
                "{what}: c_{p} = {} exceeds ({n} - 1)/({p} - 1)",
                t.c_p(p)
            ));
        }
    }
}

fn check_product_bound(
    what: &str,
    g: &MatrixGroup,
    parts: &[&MatrixGroup],
    failures: &mut Vec<String>,
) {
    let cfg = Config::default();
    let whole = composition_tally(g, &cfg).unwrap();
    let tallies: Vec<CompositionTally> = parts
        .iter()
        .map(|h| composition_tally(h, &cfg).unwrap())
        .collect();
    for p in primes_of(&whole) {
        let sum: u32 = tallies.iter().map(|t| t.c_p(p)).sum();
        if whole.c_p(p) > sum {
            failures.push(format!("{what}: c_{p} = {} exceeds {sum}", whole.c_p(p)));
        }
    }
}

#[test]
fn criterion_10_tally_lemmas() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (name, g) in corpus() {
        let action = g.vector_action().unwrap();
        let whole = tally(action);
        if whole.nonabelian.is_empty() {
            let order = g.order().unwrap();
            for p in primes_of(&whole) {
                if whole.c_p(p) != valuation(order, p) {
                    failures.push(format!("{name}: soluble but c_{p} != v_{p}(|G|)"));
                }
            }
        }
        for (i, x) in action.random_elements(7, 3).into_iter().enumerate() {
            let n = action.normal_closure(&[x]);
            if n.order() == action.order() {
                continue;
            }
            let Ok(coset) = action.coset_action(&n, 1 << 16) else {
                continue;
            };
            let quotient = coset.quotient();
            let mut sum = tally(&n);
            sum.merge(&tally(&quotient));
            if !sum.same_factors(&whole) {
                failures.push(format!("{name} normal #{i}: {sum:?} vs {whole:?}"));
            }
            check_symmetric_bound(&format!("{name}/N#{i}"), &quotient, &mut failures);
            let blocks = n.orbits();
            let image = PermGroup::new(blocks.len(), action.block_action(&blocks), Cert::All);
            check_symmetric_bound(&format!("{name} on N#{i} orbits"), &image, &mut failures);
        }
    }

    let (f2, f3) = (field(2, 1), field(3, 1));
    let gl22 = general_linear(f2.clone(), 2).unwrap();
    let gl32 = general_linear(f2, 3).unwrap();
    let gl23 = general_linear(f3.clone(), 2).unwrap();
    let ut23 = upper_triangular(f3, 2).unwrap();
    let ext3 = extraspecial_normalizer(3).unwrap();
    let gam2 = gamma_l_1(2).unwrap();
    let products: [(&str, Vec<&MatrixGroup>); 4] = [
        ("gl22 x gl32", vec![&gl22, &gl32]),
        ("gl23 x ut23", vec![&gl23, &ut23]),
        ("ext3 x gl23", vec![&ext3, &gl23]),
        ("gam2 x gl22 x gam2", vec![&gam2, &gl22, &gam2]),
    ];
    for (what, parts) in &products {
        let owned: Vec<MatrixGroup> = parts.iter().map(|h| (*h).clone()).collect();
        for seed in 0..4 {
            let g = subdirect_sample(&owned, 2 + seed as usize, seed).unwrap();
            check_product_bound(
                &format!("subdirect {what} seed {seed}"),
                &g,
                parts,
                &mut failures,
            );
        }
        if parts.len() == 2 {
            let g = tensor_groups(parts[0], parts[1]).unwrap();
            check_product_bound(&format!("central {what}"), &g, parts, &mut failures);
        }
    }
    conclude(
        10,
        "additivity, soluble valuations, symmetric and product bounds",
        t,
        &failures,
    );
}

#[test]
fn criterion_11_fuzz() {
    let t = Instant::now();
    let cfg = Config::default();
    let summary = fuzz(3, &[2, 3, 4, 5], 200, cfg.seed, &cfg).unwrap();
    let mut failures = summary.violations.clone();
    if summary.cr == 0 {
        failures.push("no completely reducible samples".into());
    }
    let title = format!(
        "fuzz d <= 3, q in 2..5: {} tested, {} CR, {} sharp, max c_p {}",
        summary.tested, summary.cr, summary.sharp, summary.max_cp
    );
    conclude(11, &title, t, &failures);
}

#[test]
fn criterion_12_module_engine() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let (f2, f3) = (field(2, 1), field(3, 1));
    let families = [
        vec![
            general_linear(f2.clone(), 2).unwrap(),
            general_linear(f2.clone(), 3).unwrap(),
            gamma_l_1(2).unwrap(),
            general_linear(f2.clone(), 2).unwrap(),
        ],
        vec![
            general_linear(f3.clone(), 2).unwrap(),
            extraspecial_normalizer(3).unwrap(),
            gamma_l_1(3).unwrap(),
            general_linear(f3, 2).unwrap(),
        ],
    ];
    for irreducibles in &families {
        let mut g = irreducibles[0].clone();
        for k in 1..=irreducibles.len() {
            if k > 1 {
                g = direct_sum_groups(&g, &irreducibles[k - 1]).unwrap();
            }
            let dec = decompose(&g);
            if !dec.is_cr() || dec.r != k {
                failures.push(format!(
                    "sum of {k} over F_{}: r = {}, cr = {}",
                    g.field().q(),
                    dec.r,
                    dec.is_cr()
                ));
            }
        }
    }
    let semilinear = gamma_l_1(2).unwrap();
    let linear = MatrixGroup::new(f2, 2, semilinear.generators()[..1].to_vec()).unwrap();
    let full = Subspace::full(2);
    let (a, b) = (
        endo_dim(&semilinear, &full).unwrap(),
        endo_dim(&linear, &full).unwrap(),
    );
    if (a, b) != (1, 2) {
        failures.push(format!("endo dims ({a}, {b}), expected (1, 2)"));
    }
    conclude(
        12,
        "direct sums of k <= 4 irreducibles give r = k; endo dims 1 and 2",
        t,
        &failures,
    );
}
