//! Acceptance suite: eight end to end criteria, each ending in one
//! printed PASS line with its elapsed time. Every comparison is exact
//! integer equality; runtime limits are asserted.

use std::time::{Duration, Instant};

use klift_core::complex::ChainComplex;
use klift_core::dg::{dg_ext, dg_ext_from, dg_tor, semifree_resolution};
use klift_core::ext::{ext_disc, hyper_ext};
use klift_core::formulas::{
    mult_two_term, periodic_tensor_complex, power_quotient_homotopy,
    power_quotient_tensor_closed_form,
};
use klift_core::gb::Vect;
use klift_core::homtools::{elem_quotient, modules_isomorphic};
use klift_core::koszul::KoszulAlgebra;
use klift_core::lifting::{
    check_lci, lift_step_with, lift_to_order, obstruction_window, reconstruct_limit,
    stage_reduction, step_certificates, verify_lifting, LciVerdict, LiftOptions, StepOutcome,
};
use klift_core::module::{FPModule, ModuleMap};
use klift_core::mono::MonoOrder;
use klift_core::poly::Poly;
use klift_core::ring::Ring;
use klift_core::rng::SplitMix64;
use klift_core::scalar::FieldSpec;

fn poly_ring(field: FieldSpec, vars: &[(&str, i64)]) -> Ring {
    Ring::polynomial_ring(field, vars, MonoOrder::GrevLex).unwrap()
}

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime_field(p).unwrap()
}

/// Cyclic quotient `A/(f)` presented as a cokernel.
fn cyclic(ring: &Ring, f: &Poly) -> FPModule {
    let free = FPModule::free(ring, &[0]);
    ModuleMap::mult_by(&free, f).unwrap().cokernel().unwrap().0
}

/// Random homogeneous polynomial of the given degree (all corpus rings
/// have weight-1 variables); may normalize to zero in a quotient ring.
fn rand_homog(ring: &Ring, deg: i64, rng: &mut SplitMix64) -> Poly {
    let mut acc = ring.zero();
    let terms = 1 + rng.below(2);
    for _ in 0..terms {
        let mut t = ring.constant(1 + rng.below(3) as i64);
        for _ in 0..deg {
            let v = ring.var(rng.below(ring.nvars() as u64) as usize);
            t = ring.mul(&t, &v);
        }
        acc = ring.add(&acc, &t);
    }
    ring.nf_poly(&acc)
}

/// Random finitely presented graded module with bounded presentation:
/// up to two generators in degrees 0..=2 and up to two homogeneous
/// relations of degree at most 3.
fn random_module(ring: &Ring, rng: &mut SplitMix64) -> FPModule {
    let rank = 1 + rng.below(2) as usize;
    let gen_degs: Vec<i64> = (0..rank).map(|_| rng.below(3) as i64).collect();
    let nrels = rng.below(3) as usize;
    let mut rels: Vec<Vect> = Vec::new();
    for _ in 0..nrels {
        let t = 1 + rng.below(3) as i64;
        let rel: Vect = gen_degs
            .iter()
            .map(|g| {
                let d = t - g;
                if d <= 0 {
                    ring.zero()
                } else {
                    rand_homog(ring, d, rng)
                }
            })
            .collect();
        if rel.iter().any(|p| !p.is_zero()) {
            rels.push(rel);
        }
    }
    FPModule::new(ring, gen_degs, rels).unwrap()
}

/// The three small singular-or-smooth corpus rings with their
/// distinguished degree one element.
fn corpus_rings() -> Vec<(Ring, Poly)> {
    let r1 = poly_ring(fp(2), &[("x", 1)]);
    let r2 = {
        let base = poly_ring(fp(3), &[("x", 1), ("y", 1)]);
        let xy = base.mul(&base.var(0), &base.var(1));
        base.quotient(&[xy]).unwrap()
    };
    let r3 = {
        let base = poly_ring(fp(5), &[("x", 1), ("y", 1)]);
        let y2 = base.mul(&base.var(1), &base.var(1));
        base.quotient(&[y2]).unwrap()
    };
    vec![
        (r1.clone(), r1.var(0)),
        (r2.clone(), r2.var(0)),
        (r3.clone(), r3.var(0)),
    ]
}

fn total_dim(m: &FPModule, lo: i64, hi: i64) -> usize {
    (lo..=hi).map(|d| m.graded_dim(d)).sum()
}

/// Criterion 1: the residue field against the two-periodic complex over
/// the line has one dimensional groups in every level 0..=6, while the
/// two-step side over the plain coordinate ring is 1, 1, 0, 0, ...
#[test]
fn criterion_1_ext_window_gap_exact() {
    let t0 = Instant::now();
    let a = poly_ring(fp(3), &[("x", 1)]);
    let x = a.var(0);
    let k = FPModule::new(&a, vec![0], vec![vec![x.clone()]]).unwrap();
    let twists: [i64; 8] = [0, 1, 1, 2, 2, 3, 3, 4];
    let terms: Vec<FPModule> = twists.iter().map(|t| FPModule::free(&a, &[*t])).collect();
    let mut maps = Vec::new();
    for j in 0..terms.len() - 1 {
        maps.push(if j % 2 == 0 {
            ModuleMap::new(terms[j + 1].clone(), terms[j].clone(), 0, vec![vec![x.clone()]])
                .unwrap()
        } else {
            ModuleMap::zero(terms[j + 1].clone(), terms[j].clone(), 0)
        });
    }
    let c = ChainComplex::new(0, terms, maps).unwrap();
    let hyper = hyper_ext(&c, &k, 0, 6).unwrap();
    assert_eq!(hyper.len(), 7);
    for (i, e) in hyper.iter().enumerate() {
        let want_deg = -((i as i64 + 1) / 2);
        assert_eq!(e.graded_dim(want_deg), 1, "level {i}");
        assert_eq!(total_dim(&e.module, -10, 10), 1, "level {i} total");
    }
    let disc = ext_disc(&k, &k, 6).unwrap();
    let expected: [usize; 7] = [1, 1, 0, 0, 0, 0, 0];
    for (i, e) in disc.iter().enumerate() {
        assert_eq!(total_dim(&e.module, -10, 10), expected[i], "two-step level {i}");
    }
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(5), "took {el:.2?}");
    println!("criterion 1 (window gap, dims 1,1,1,1,1,1,1 vs 1,1,0,...): PASS in {el:.2?}");
}

/// Criterion 2: for 51 random modules over the three corpus rings and
/// every power n in 1..=3, the closed forms (M/x^n M, M[x^n], 0) match
/// the homology of the two-term complex in every degree up to 12.
#[test]
fn criterion_2_power_homotopy_closed_forms() {
    let t0 = Instant::now();
    let mut rng = SplitMix64::new(02);
    let mut modules = 0usize;
    for (ring, x) in corpus_rings() {
        let dx = ring.poly_degree(&x).unwrap().unwrap();
        for _ in 0..17 {
            let m = random_module(&ring, &mut rng);
            modules += 1;
            let lo = m.min_gen_degree().unwrap_or(0) - 1;
            for n in 1..=3usize {
                let xn = ring.pow(&x, n as u32);
                let c = mult_two_term(&m, &xn).unwrap();
                let h0 = c.homology(0).unwrap().module;
                let h1 = c.homology(1).unwrap().module;
                let k0 = power_quotient_homotopy(&m, &x, n, 0).unwrap();
                let k1 = power_quotient_homotopy(&m, &x, n, 1).unwrap();
                let k2 = power_quotient_homotopy(&m, &x, n, 2).unwrap();
                assert!(k2.is_zero(), "level 2 closed form must vanish");
                let tw = n as i64 * dx;
                for d in lo..=12 {
                    assert_eq!(h0.graded_dim(d), k0.graded_dim(d), "H0 at {d}, n={n}");
                    assert_eq!(h1.graded_dim(d), k1.graded_dim(d - tw), "H1 at {d}, n={n}");
                }
            }
        }
    }
    assert!(modules >= 50, "only {modules} corpus modules");
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(60), "took {el:.2?}");
    println!("criterion 2 (closed forms on {modules} modules, n in 1..=3): PASS in {el:.2?}");
}

/// Criterion 3: on the same corpus restricted to x^n M = 0, the closed
/// form, the periodic complex homology, and the dg side agree for all
/// inner exponents 1 <= i <= n-1 and levels k <= 4.
#[test]
fn criterion_3_triple_agreement() {
    let t0 = Instant::now();
    let mut rng = SplitMix64::new(02);
    let kmax = 4usize;
    let mut instances = 0usize;
    let mut dg_instances = 0usize;
    for (ring, x) in corpus_rings() {
        let dx = ring.poly_degree(&x).unwrap().unwrap();
        for _ in 0..17 {
            let m_raw = random_module(&ring, &mut rng);
            for n in 2..=3usize {
                let xn = ring.pow(&x, n as u32);
                let m = elem_quotient(&m_raw, &xn).unwrap().0;
                if m.is_zero() {
                    continue;
                }
                let lo = m.min_gen_degree().unwrap_or(0) - 1;
                let kz = KoszulAlgebra::new(&ring, &[xn.clone()]).unwrap();
                // A discrete module stands in for the inner-stage
                // coefficient only when the algebra itself is discrete
                // (the power is a regular element).  Otherwise the
                // stage has homology above level 0 and its free
                // realization over the algebra is the periodic complex
                // itself, which the closed-vs-periodic leg covers.
                let dg_applies = kz.is_discrete().unwrap();
                for i in 1..=n - 1 {
                    let c = periodic_tensor_complex(&m, &x, n, i, kmax + 2).unwrap();
                    let tor = if dg_applies {
                        let coeff = cyclic(&ring, &ring.pow(&x, i as u32));
                        Some(dg_tor(&kz, &m, &coeff, kmax).unwrap())
                    } else {
                        None
                    };
                    for k in 0..=kmax {
                        let closed =
                            power_quotient_tensor_closed_form(&m, &x, n, i, k).unwrap();
                        let h = c.homology(k as i64).unwrap().module;
                        let tw = ((k / 2) * n + if k % 2 == 1 { i } else { 0 }) as i64 * dx;
                        for d in lo..=12 {
                            let cd = closed.graded_dim(d - tw);
                            let pd = h.graded_dim(d);
                            assert_eq!(cd, pd, "closed vs periodic at {d}, n={n} i={i} k={k}");
                            if let Some(tor) = &tor {
                                let gd = tor[k].graded_dim(d);
                                assert_eq!(pd, gd, "periodic vs dg at {d}, n={n} i={i} k={k}");
                            }
                        }
                    }
                    instances += 1;
                    if dg_applies {
                        dg_instances += 1;
                    }
                }
            }
        }
    }
    assert!(instances >= 50, "only {instances} restricted instances");
    assert!(dg_instances >= 30, "only {dg_instances} dg-checked instances");
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(120), "took {el:.2?}");
    println!(
        "criterion 3 (triple agreement on {instances} instances, dg leg on {dg_instances}): PASS in {el:.2?}"
    );
}

/// Criterion 4: for a regular element on five test rings, the base
/// module with a vanishing window lifts to every order, the limit
/// reconstruction passes its checks, each truncation of the limit is
/// isomorphic to the corresponding stage, and multiplication by the
/// element on the limit is injective with cokernel the base.
#[test]
fn criterion_4_regular_lift_full_circle() {
    let t0 = Instant::now();
    let rings: Vec<Ring> = vec![
        poly_ring(fp(2), &[("x", 1)]),
        poly_ring(fp(3), &[("u", 1)]),
        poly_ring(fp(5), &[("x", 1), ("y", 1)]),
        poly_ring(FieldSpec::Q, &[("t", 1)]),
        {
            let base = poly_ring(fp(3), &[("x", 1), ("y", 1)]);
            let y2 = base.mul(&base.var(1), &base.var(1));
            base.quotient(&[y2]).unwrap()
        },
    ];
    for ring in &rings {
        let x = ring.var(0);
        let m = cyclic(ring, &x);
        let kz = KoszulAlgebra::new(ring, std::slice::from_ref(&x)).unwrap();
        let window = obstruction_window(&kz, &m, -6..=12).unwrap();
        assert!(window.vanishes, "window must vanish before lifting");
        let opts = LiftOptions {
            order: 5,
            degree_bound: 12,
            seed: 0,
            retry_breadth: 1,
        };
        let chain = lift_to_order(&m, &x, &opts).unwrap();
        assert!(chain.obstruction.is_none(), "lift obstructed unexpectedly");
        assert!(chain.reached >= 5 && chain.reached == chain.target);
        let limit = reconstruct_limit(&chain, 12).unwrap();
        assert!(limit.checks.all_ok(), "limit checks failed");
        for stage in chain.stages.iter().filter(|s| s.order <= 5) {
            let xn = ring.pow(&x, stage.order as u32);
            let q = elem_quotient(&limit.module, &xn).unwrap().0;
            assert!(
                modules_isomorphic(&q, &stage.module, 0).unwrap(),
                "L/x^{} L is not the stage module",
                stage.order
            );
        }
        let mult = ModuleMap::mult_by(&limit.module, &x).unwrap();
        let (ker, _) = mult.kernel().unwrap();
        assert!(ker.is_zero(), "multiplication on the limit has torsion");
        let (cok, _) = mult.cokernel().unwrap();
        assert!(
            modules_isomorphic(&cok, &m, 0).unwrap(),
            "limit cokernel is not the base"
        );
    }
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(60), "took {el:.2?}");
    println!("criterion 4 (full circle on 5 rings, orders <= 5, degrees <= 12): PASS in {el:.2?}");
}

/// Criterion 5: on generated stage instances the three verdicts agree:
/// the retraction existence test, the step outcome, and independent
/// verification of the constructed extension.
#[test]
fn criterion_5_step_verdicts_agree() {
    let t0 = Instant::now();
    let uv_ring = {
        let base = poly_ring(fp(3), &[("u", 1), ("v", 1)]);
        let uv = base.mul(&base.var(0), &base.var(1));
        base.quotient(&[uv]).unwrap()
    };
    let rings: Vec<(Ring, Poly)> = vec![
        (uv_ring.clone(), uv_ring.var(0)),
        {
            let r = poly_ring(fp(2), &[("x", 1)]);
            let x = r.var(0);
            (r, x)
        },
        {
            let r = poly_ring(fp(3), &[("u", 1)]);
            let u = r.var(0);
            (r, u)
        },
    ];
    let mut rng = SplitMix64::new(05);
    let mut instances = 0usize;
    let mut lifted = 0usize;
    let mut obstructed_on_uv = 0usize;
    for (ridx, (ring, x)) in rings.iter().enumerate() {
        let mut tried = 0;
        while tried < 35 {
            let lp = random_module(ring, &mut rng);
            let n = 1 + rng.below(3) as usize;
            let xn = ring.pow(x, n as u32);
            let l = elem_quotient(&lp, &xn).unwrap().0;
            if l.is_zero() {
                continue;
            }
            tried += 1;
            let m = elem_quotient(&l, x).unwrap().0;
            let reduction = stage_reduction(&m, &l, x, 0).unwrap();
            let certs = step_certificates(&reduction, x, n).unwrap();
            let outcome = lift_step_with(&reduction, x, n, 0).unwrap();
            match &outcome {
                StepOutcome::Lifted(step) => {
                    assert!(certs.splits, "lifted but the split test disagrees");
                    let (flags, _) =
                        verify_lifting(&step.injection, &step.onto_previous, &m, x, n, 0)
                            .unwrap();
                    assert!(
                        flags.all_ok(),
                        "constructed extension fails independent verification"
                    );
                    lifted += 1;
                }
                StepOutcome::Obstructed(_) => {
                    assert!(!certs.splits, "obstructed but the split test disagrees");
                    if ridx == 0 {
                        obstructed_on_uv += 1;
                    }
                }
            }
            instances += 1;
        }
    }
    assert!(instances >= 100, "only {instances} instances");
    assert!(lifted > 0, "no successful steps in the corpus");
    assert!(
        obstructed_on_uv > 0,
        "no obstructed instances over the crossing ring"
    );
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(300), "took {el:.2?}");
    println!(
        "criterion 5 (three verdicts agree on {instances} instances, {lifted} lifted, {obstructed_on_uv} obstructed on the crossing ring): PASS in {el:.2?}"
    );
}

/// Criterion 6: non-regular sequences produce a nonzero obstruction
/// window on every corpus module, while for regular sequences the
/// canonical cyclic module has a vanishing window and the full checker
/// returns the regular verdict with its internal facts agreeing.
#[test]
fn criterion_6_window_detects_non_regularity() {
    let t0 = Instant::now();
    let line = poly_ring(fp(3), &[("x", 1)]);
    let plane = poly_ring(fp(2), &[("x", 1), ("y", 1)]);
    let mut rng = SplitMix64::new(06);

    // Non-regular sequences: (x, x) on the line and (x, xy) on the plane.
    let nonregular: Vec<(Ring, Vec<Poly>)> = vec![
        (line.clone(), vec![line.var(0), line.var(0)]),
        (plane.clone(), {
            let x = plane.var(0);
            let xy = plane.mul(&x, &plane.var(1));
            vec![x, xy]
        }),
    ];
    let mut corpus = 0usize;
    for (ring, seq) in &nonregular {
        let kz = KoszulAlgebra::new(ring, seq).unwrap();
        let mut count = 0;
        while count < 16 {
            let mp = random_module(ring, &mut rng);
            // A module over the derived quotient: killed by the first
            // entry, which divides the second in both sequences.
            let m = elem_quotient(&mp, &seq[0]).unwrap().0;
            if m.is_zero() {
                continue;
            }
            count += 1;
            corpus += 1;
            let w = obstruction_window(&kz, &m, -10..=10).unwrap();
            assert!(
                !w.vanishes,
                "non-regular sequence produced a zero window on a nonzero module"
            );
        }
    }
    assert!(corpus >= 30, "only {corpus} corpus modules");

    // Regular sequences: (x) on the line and (x, y) on the plane.
    let opts = LiftOptions {
        order: 4,
        degree_bound: 8,
        seed: 0,
        retry_breadth: 1,
    };
    let regular: Vec<(Ring, Vec<Poly>)> = vec![
        (line.clone(), vec![line.var(0)]),
        (plane.clone(), vec![plane.var(0), plane.var(1)]),
    ];
    for (ring, seq) in &regular {
        let rels: Vec<Vect> = seq.iter().map(|f| vec![f.clone()]).collect();
        let m = FPModule::new(ring, vec![0], rels).unwrap();
        let kz = KoszulAlgebra::new(ring, seq).unwrap();
        let w = obstruction_window(&kz, &m, -10..=10).unwrap();
        assert!(w.vanishes, "regular sequence produced a nonzero window");
        let report = check_lci(ring, seq, &opts).unwrap();
        assert_eq!(report.verdict, LciVerdict::Regular);
        assert!(report.window.vanishes);
        assert!(report.regularity.is_none());
        assert_eq!(report.lift.as_ref().map(|l| l.completed), Some(true));
    }

    // The checker agrees with the windows on the non-regular side too.
    for (ring, seq) in &nonregular {
        let report = check_lci(ring, seq, &opts).unwrap();
        assert_eq!(report.verdict, LciVerdict::NotRegular);
    }
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(300), "took {el:.2?}");
    println!(
        "criterion 6 (nonzero windows on {corpus} modules; regular verdicts consistent): PASS in {el:.2?}"
    );
}

/// Criterion 7: the graded Leibniz, anticommutation, and d^2 = 0 axioms
/// hold for the dg modules the suites construct (validated at
/// construction, re-exercised here explicitly), and dg Ext dimensions
/// do not change when the resolution window grows by two.
#[test]
fn criterion_7_dg_axioms_and_resolution_stability() {
    let t0 = Instant::now();
    let mut rng = SplitMix64::new(07);
    let mut sampled = 0usize;
    for (ring, x) in corpus_rings() {
        let x2 = ring.pow(&x, 2);
        let kz = KoszulAlgebra::new(&ring, &[x2.clone()]).unwrap();
        for _ in 0..2 {
            let m = elem_quotient(&random_module(&ring, &mut rng), &x2).unwrap().0;
            if m.is_zero() {
                continue;
            }
            sampled += 1;
            // Constructing the dg module runs the full axiom check;
            // failure would be an error here.
            let sf = semifree_resolution(&kz, &m, 4).unwrap();
            sf.as_dg_module(3).unwrap();
            // Stability: the same window of Ext from a resolution two
            // levels longer than the default.
            let e1 = dg_ext(&kz, &m, &m, 2).unwrap();
            let mut sf2 = semifree_resolution(&kz, &m, 5).unwrap();
            let e2 = dg_ext_from(&mut sf2, &m, 2).unwrap();
            assert_eq!(e1.len(), e2.len());
            for (a, b) in e1.iter().zip(&e2) {
                for d in -12..=12 {
                    assert_eq!(
                        a.graded_dim(d),
                        b.graded_dim(d),
                        "Ext^{} changed at degree {d} when the window grew",
                        a.index
                    );
                }
            }
        }
    }
    assert!(sampled >= 4, "only {sampled} samples");
    let el = t0.elapsed();
    println!(
        "criterion 7 (dg axioms construction-checked, Ext stable under +2 window on {sampled} samples): PASS in {el:.2?}"
    );
}

/// Criterion 8: the pinned-examples run emits byte identical JSON
/// across repeated invocations and across worker counts 1 and 4.
#[test]
fn criterion_8_byte_identical_output() {
    let t0 = Instant::now();
    let script = "\
ring A = poly(F3; u:1)
module K = coker(A; shifts=[0]; rels=[[u]])
paper-examples
resolve(K; len=3)
ext(K, K; i=3)
lift(K; x=u; N=3; D=6)
";
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pinned.kl");
    std::fs::write(&path, script).unwrap();
    let run = |extra: &[&str], threads: Option<&str>| -> String {
        let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_klift"));
        cmd.arg(&path).arg("--json");
        for a in extra {
            cmd.arg(a);
        }
        if let Some(t) = threads {
            cmd.env("KLIFT_THREADS", t);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "pinned run failed");
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run(&[], None);
    let second = run(&[], None);
    let par1 = run(&["--parallel"], Some("1"));
    let par4 = run(&["--parallel"], Some("4"));
    assert!(first.contains("\"all_pass\": true"));
    assert_eq!(first, second, "reruns differ");
    assert_eq!(first, par1, "one worker differs");
    assert_eq!(first, par4, "four workers differ");
    let el = t0.elapsed();
    assert!(el < Duration::from_secs(30), "took {el:.2?}");
    println!("criterion 8 (byte identical JSON across reruns and 1/4 workers): PASS in {el:.2?}");
}
