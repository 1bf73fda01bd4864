//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use fracmono::circle_action::{euler_from_fixed_points, WeightedFixedPoint, Weights};
use fracmono::monodromy::{analyze, AnalyzeOptions, LoopSpec, MonodromyCertificate};
use fracmono::numverify::{grad_check, periodicity_error, poisson_residual, rotation_holonomy, HolonomyOptions};
use fracmono::qalgebra::{gcd, in_transport_lattice};
use fracmono::systems::{catalog_system, critical_scan, ScanOptions, Window};
use fracmono::{Cycle, Lattice2, MonodromyMatrixQ, Rational, SeifertData, Transport};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d).unwrap()
}

fn unipotent(n: i128, d: i128) -> MonodromyMatrixQ {
    MonodromyMatrixQ::try_new([[q(1, 1), q(n, d)], [q(0, 1), q(1, 1)]]).unwrap()
}

fn span(gens: &[(i64, i64)]) -> Lattice2 {
    Lattice2::span(&gens.iter().map(|&(a, b)| Cycle::new(a, b)).collect::<Vec<_>>()).unwrap()
}

fn certificate(id: &str, lp: &str) -> Result<MonodromyCertificate, String> {
    let sys = catalog_system(id, &[]).map_err(|e| e.to_string())?;
    let lp: LoopSpec = lp.parse().map_err(|e| format!("{e}"))?;
    analyze(&*sys, &lp, &AnalyzeOptions::default()).map_err(|e| format!("{id} {lp}: {e}"))
}

fn expect_certificate(
    c: &MonodromyCertificate,
    euler: Rational,
    n: u64,
    k: i64,
    matrix: &MonodromyMatrixQ,
    group: &Lattice2,
) -> Result<(), String> {
    let got = (c.euler, c.n, c.k, c.matrix, c.transport_group);
    let want = (euler, n, k, *matrix, *group);
    ensure(got == want, || {
        format!(
            "{} {}: got e={} N={} k={} M={} G={:?}, want e={} N={} k={} M={} G={:?}",
            c.system, c.loop_, got.0, got.1, got.2, got.3, got.4, want.0, want.1, want.2, want.3, want.4
        )
    })
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn coprime_pairs() -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for m in 1..=5i64 {
        for n in 1..=5i64 {
            if gcd(m as i128, n as i128) == 1 {
                v.push((m, n));
            }
        }
    }
    v
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let c = certificate("res:1:-2", "circle:0,0.03,0.045")?;
    expect_certificate(&c, q(1, 2), 2, 1, &unipotent(1, 2), &span(&[(2, 0), (0, 1)]))?;
    ensure(c.orders_on_loop == vec![2], || format!("orders {:?}", c.orders_on_loop))?;
    let t = within(Duration::from_secs(5), start)?;
    Ok(format!("e=1/2 N=2 k=1 M=[[1,1/2],[0,1]] group span{{2a,b}} in {t:.2?}"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let pairs = coprime_pairs();
    for &(m, n) in &pairs {
        let id = format!("res:{m}:-{n}");
        let mn = (m * n) as i128;
        let around = certificate(&id, "circle:0,0.1,0.3")?;
        expect_certificate(
            &around,
            q(1, mn),
            (m * n) as u64,
            1,
            &unipotent(1, mn),
            &span(&[(m * n, 0), (0, 1)]),
        )?;
        let away = certificate(&id, "circle:0,3,0.5")?;
        expect_certificate(
            &away,
            q(0, 1),
            1,
            0,
            &MonodromyMatrixQ::identity(),
            &span(&[(1, 0), (0, 1)]),
        )?;
        ensure(away.regularity.crossings.is_empty(), || {
            format!("{id}: far loop crosses strata")
        })?;
    }
    let t = within(Duration::from_secs(30), start)?;
    Ok(format!("{} coprime pairs, both cases exact, in {t:.2?}", pairs.len()))
}

fn criterion_3() -> Verdict {
    let group = span(&[(2, 0), (0, 1)]);
    let g2 = certificate("s2xs2", "circle:-1,0,0.3")?;
    expect_certificate(&g2, q(1, 2), 2, 1, &unipotent(1, 2), &group)?;
    let g3 = certificate("s2xs2", "circle:1,0,0.3")?;
    expect_certificate(&g3, q(1, 2), 2, 1, &unipotent(1, 2), &group)?;
    let g1 = certificate("s2xs2", "poly:-2,-0.2;2,-0.2;2,0.2;-2,0.2")?;
    expect_certificate(&g1, q(1, 1), 2, 2, &unipotent(1, 1), &group)?;
    Ok("gamma2, gamma3 -> [[1,1/2],[0,1]]; gamma1 -> [[1,1],[0,1]]; N=2 in all three".into())
}

fn criterion_4() -> Verdict {
    let g1 = certificate("qsp", "circle:0,-0.5,0.3")?;
    expect_certificate(&g1, q(1, 1), 1, 1, &unipotent(1, 1), &span(&[(1, 0), (0, 1)]))?;
    let g2 = certificate("qsp", "poly:0.6,0.25;0.9,0.25;0.9,0.5;0.6,0.5")?;
    expect_certificate(
        &g2,
        q(0, 1),
        1,
        0,
        &MonodromyMatrixQ::identity(),
        &span(&[(1, 0), (0, 1)]),
    )?;
    Ok("gamma1 -> [[1,1],[0,1]] N=1 full group; gamma2 -> identity".into())
}

fn criterion_5() -> Verdict {
    let pairs = coprime_pairs();
    for &(m, n) in &pairs {
        let p = WeightedFixedPoint::new(Vec::new(), Weights::new(m, n).unwrap(), (0.0, 0.0));
        let e = euler_from_fixed_points(&[p]);
        ensure(e == q(1, (m * n) as i128), || format!("({m},{n}) -> {e}"))?;
    }
    Ok(format!("1/mn exact for {} pairs", pairs.len()))
}

fn criterion_6() -> Verdict {
    let opts = HolonomyOptions::default();
    let start = Instant::now();
    let ff = catalog_system("res:1:-1", &[]).unwrap();
    let lp: LoopSpec = "circle:0,0,0.5".parse().unwrap();
    let k1 = rotation_holonomy(&*ff, &lp, &opts)
        .map_err(|e| e.to_string())?
        .k_estimate;
    ensure((k1 - 1.0).abs() < 1e-3, || format!("1:(-1) loop k = {k1}"))?;
    let t1 = within(Duration::from_secs(60), start)?;
    let cert = analyze(&*ff, &lp, &AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    ensure(cert.n == 1 && (k1 - cert.k as f64).abs() < 1e-3, || {
        format!("certificate k = {}", cert.k)
    })?;

    let start = Instant::now();
    let res = catalog_system("res:1:-2", &[]).unwrap();
    let k0 = rotation_holonomy(&*res, &"circle:1,2,0.3".parse().unwrap(), &opts)
        .map_err(|e| e.to_string())?
        .k_estimate;
    ensure(k0.abs() < 1e-3, || format!("contractible loop k = {k0}"))?;
    let t0 = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "k = {k1:.6} around O ({t1:.2?}); k = {k0:.1e} contractible ({t0:.2?})"
    ))
}

fn criterion_7() -> Verdict {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for id in [
        "res:1:-2", "res:1:-1", "res:2:-3", "res:3:-1", "res:5:-4", "s2xs2", "qsp",
    ] {
        let sys = catalog_system(id, &[]).unwrap();
        let pr = poisson_residual(&*sys, 1000, 11);
        ensure(pr < 1e-9, || format!("{id}: poisson residual {pr:e}"))?;
        let g = grad_check(&*sys, 1000, 1e-5, 12);
        ensure(g.max_rel_error < 1e-6, || {
            format!("{id}: gradient error {:e}", g.max_rel_error)
        })?;
        let per = periodicity_error(&*sys, 1000, 13).map_err(|e| e.to_string())?;
        ensure(per < 1e-8, || format!("{id}: 2 pi return error {per:e}"))?;
        worst = (worst.0.max(pr), worst.1.max(g.max_rel_error), worst.2.max(per));
    }
    Ok(format!(
        "7 systems x 1000 points: poisson {:.1e}, gradient {:.1e}, period {:.1e}",
        worst.0, worst.1, worst.2
    ))
}

fn criterion_8() -> Verdict {
    let sys = catalog_system("res:1:-2", &[]).unwrap();
    // near O the only critical values are the origin and the image of z = 0
    let w = Window::new(-0.08, 0.02, -0.004, 0.01);
    let rep = critical_scan(
        &*sys,
        &w,
        &ScanOptions {
            grid: 12,
            ..Default::default()
        },
    );
    let mut branch = 0;
    let mut origin = 0;
    for p in &rep.points {
        ensure(w.contains(p.j, p.h), || format!("({}, {}) outside window", p.j, p.h))?;
        let x = &p.witness;
        let z2 = x[0] * x[0] + x[1] * x[1];
        let w2 = x[2] * x[2] + x[3] * x[3];
        // symbolic restriction to z = 0: J = -|w|^2, H = R^2 = |w|^4 = J^2
        if p.j.abs() < 1e-9 && p.h.abs() < 1e-9 {
            origin += 1;
        } else if p.j < 0.0 && (p.h - p.j * p.j).abs() < 1e-6 && z2 < 1e-10 && (p.j + w2).abs() < 1e-9 {
            branch += 1;
        } else {
            return Err(format!("({}, {}) is off the branch H = J^2", p.j, p.h));
        }
    }
    ensure(branch >= 50 && origin == 1, || {
        format!("{branch} branch points, {origin} origin")
    })?;
    Ok(format!("{branch} points on H = J^2 (J < 0) plus the origin"))
}

fn criterion_9() -> Verdict {
    let mut runner = TestRunner::new(Config {
        cases: 4000,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (
        proptest::collection::vec(2u64..8, 0..4),
        -40i64..40,
        (-200i64..200, -200i64..200),
        (-200i64..200, -200i64..200),
    );
    runner
        .run(&strategy, |(orders, k, (a1, b1), (a2, b2))| {
            let n = fracmono::qalgebra::lcm_orders(&orders).unwrap();
            let e = fracmono::seifert::k_to_euler(k, &orders).unwrap();
            let data = SeifertData::new(e, orders.clone(), "prop").unwrap();
            // k = N e is an integer and reproduces k
            prop_assert_eq!(data.k(), k);
            prop_assert_eq!(data.quotient_euler(), e.checked_mul_int(n as i128).unwrap());
            let m = data.monodromy_matrix();
            prop_assert_eq!(m.det(), Rational::integer(1));
            let c1 = Cycle::new(a1, b1);
            let c2 = Cycle::new(a2, b2);
            for c in [c1, c2] {
                let transportable = (c.a_coeff as i128).rem_euclid(n as i128) == 0;
                prop_assert_eq!(transportable, in_transport_lattice(c, n));
                match data.transport(c) {
                    Transport::Image(img) => {
                        prop_assert!(transportable);
                        // the image is the unique cycle given by the matrix
                        prop_assert_eq!(m.apply(c).unwrap(), img);
                        prop_assert_eq!(img.a_coeff, c.a_coeff);
                    }
                    Transport::NotTransportable => prop_assert!(!transportable),
                }
            }
            if let (Transport::Image(i1), Transport::Image(i2)) = (data.transport(c1), data.transport(c2)) {
                let sum = c1.checked_add(c2).unwrap();
                prop_assert_eq!(data.transport(sum), Transport::Image(i1.checked_add(i2).unwrap()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let quotient = SeifertData::new(q(1, 2), vec![2], "quotient").unwrap().quotient_euler();
    ensure(quotient == Rational::integer(1), || {
        format!("quotient_euler(1/2, [2]) = {quotient}")
    })?;
    Ok("4000 random cases: uniqueness, homomorphism, lattice test, N e integral, det 1; (1/2,[2]) -> 1".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1:(-2) golden certificate", criterion_1),
        ("resonant family sweep", criterion_2),
        ("S2 x S2 loops", criterion_3),
        ("quadratic spherical pendulum loops", criterion_4),
        ("single fixed point Euler number", criterion_5),
        ("rotation-number holonomy", criterion_6),
        ("numerical hygiene", criterion_7),
        ("critical branch reproduction", criterion_8),
        ("exact property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
