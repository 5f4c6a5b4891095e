//! Acceptance suite: every criterion is exact over the symbolic ring
//! (tolerance zero) unless explicitly labelled as a sampling probe.

use het5::connection::{
    curvature, curvature_via_brackets, covariant_derivative, instanton_connection, levi_civita,
    pontrjagin_p, ricci, with_torsion,
};
use het5::exterior::{DenseTensor, KForm};
use het5::heterotic::{
    alpha_prime_lc, alpha_prime_plus, anomaly_solve, classify_probe, domain_points,
    identity_suite, motion_check, supmot_check, tensor_vanishes_at,
};
use het5::liealg::{heisenberg_h21, LieAlgebra};
use het5::ring::{rat, rat_int, ParamSet, RingElement};
use het5::su2::{cylinder_of, instanton_check, HeteroticBackground, SU2Structure};
use std::sync::Arc;

fn params() -> Arc<ParamSet> {
    ParamSet::new(["a", "b", "c", "lambda", "mu", "tau"].iter().map(|s| s.to_string()).collect())
        .unwrap()
}

fn n21() -> (LieAlgebra, HeteroticBackground) {
    let alg = heisenberg_h21(&params()).unwrap();
    let s = SU2Structure::standard(&alg).unwrap();
    let bg = HeteroticBackground::new(alg.clone(), s).unwrap();
    (alg, bg)
}

fn var(alg: &LieAlgebra, n: &str) -> RingElement {
    RingElement::var(&alg.params, n).unwrap()
}

fn r_of(alg: &LieAlgebra) -> RingElement {
    let sq = |n: &str| var(alg, n).mul(&var(alg, n));
    sq("a").add(&sq("b")).add(&sq("c"))
}

fn s_of(alg: &LieAlgebra) -> RingElement {
    let sq = |n: &str| var(alg, n).mul(&var(alg, n));
    sq("lambda").add(&sq("mu")).add(&sq("tau"))
}

fn instanton(alg: &LieAlgebra) -> het5::connection::ConnectionForms {
    instanton_connection(alg, &var(alg, "lambda"), &var(alg, "mu"), &var(alg, "tau")).unwrap()
}

#[test]
fn a01_torsion_derivative() {
    let (alg, bg) = n21();
    let dt = alg.exterior_derivative(&bg.flux);
    let expected =
        KForm::basis(&alg.params, 5, &[1, 2, 3, 4]).scale(&r_of(&alg).scale(&rat_int(-2)));
    assert_eq!(dt, expected);
    println!("A1 dT = -2(a^2+b^2+c^2) e^1234: pass");
}

#[test]
fn a02_curvature_tables() {
    let (alg, bg) = n21();
    let lc = levi_civita(&alg);
    let plus = with_torsion(&lc, &bg.flux, 1).unwrap();
    let de5 = alg.d_of_coframe(5);
    let e = |i: &[u8]| KForm::basis(&alg.params, 5, i);
    let (a, b, c) = (var(&alg, "a"), var(&alg, "b"), var(&alg, "c"));
    let r = r_of(&alg);

    // torsion connection table
    let cv = curvature(&alg, &plus);
    assert_eq!(*cv.omega(1, 2), de5.scale(&a.neg()));
    assert_eq!(*cv.omega(3, 4), de5.scale(&a));
    assert_eq!(*cv.omega(1, 3), de5.scale(&b.neg()));
    assert_eq!(*cv.omega(2, 4), de5.scale(&b.neg()));
    assert_eq!(*cv.omega(1, 4), de5.scale(&c.neg()));
    assert_eq!(*cv.omega(2, 3), de5.scale(&c));
    for i in 1..=5 {
        for j in 1..=5 {
            if ![(1, 2), (2, 1), (3, 4), (4, 3), (1, 3), (3, 1), (2, 4), (4, 2), (1, 4), (4, 1), (2, 3), (3, 2)]
                .contains(&(i, j))
            {
                assert!(cv.omega(i, j).is_zero(), "Omega+^{i}_{j} should vanish");
            }
        }
    }

    // Levi-Civita table
    let cg = curvature(&alg, &lc);
    let q = r.scale(&rat(1, 4));
    let t34 = |x: &RingElement, s: i64| de5.scale(&x.scale(&rat(-3 * s, 4)));
    assert_eq!(*cg.omega(1, 2), t34(&a, 1).sub(&e(&[3, 4]).scale(&q)).unwrap());
    assert_eq!(*cg.omega(1, 3), t34(&b, 1).add(&e(&[2, 4]).scale(&q)).unwrap());
    assert_eq!(*cg.omega(1, 4), t34(&c, 1).sub(&e(&[2, 3]).scale(&q)).unwrap());
    assert_eq!(*cg.omega(2, 3), t34(&c, -1).sub(&e(&[1, 4]).scale(&q)).unwrap());
    assert_eq!(*cg.omega(2, 4), t34(&b, 1).add(&e(&[1, 3]).scale(&q)).unwrap());
    assert_eq!(*cg.omega(3, 4), t34(&a, -1).sub(&e(&[1, 2]).scale(&q)).unwrap());
    for i in 1..=4u8 {
        assert_eq!(*cg.omega(i as usize, 5), e(&[i, 5]).scale(&q));
    }
    println!("A2 curvature tables (torsion and Levi-Civita): pass");
}

#[test]
fn a03_pontrjagin_forms() {
    let (alg, bg) = n21();
    let lc = levi_civita(&alg);
    let plus = with_torsion(&lc, &bg.flux, 1).unwrap();
    let minus = with_torsion(&lc, &bg.flux, -1).unwrap();
    let inst = instanton(&alg);
    let e1234 = KForm::basis(&alg.params, 5, &[1, 2, 3, 4]);
    let r = r_of(&alg);
    let s = s_of(&alg);

    assert_eq!(pontrjagin_p(&alg, &plus), e1234.scale(&r.mul(&r).scale(&rat_int(-4))));
    assert_eq!(pontrjagin_p(&alg, &lc), e1234.scale(&r.mul(&r).scale(&rat(-3, 2))));
    assert_eq!(pontrjagin_p(&alg, &inst), e1234.scale(&s.mul(&r).scale(&rat_int(-4))));
    assert!(pontrjagin_p(&alg, &minus).is_zero());
    println!("A3 P(plus), P(lc), P(inst), P(minus): pass");
}

#[test]
fn a04_alpha_prime_values() {
    let (alg, bg) = n21();
    let lc = levi_civita(&alg);
    let plus = with_torsion(&lc, &bg.flux, 1).unwrap();
    let inst = instanton(&alg);

    let res = anomaly_solve(&alg, &bg, &plus, &inst).unwrap();
    assert_eq!(res.alpha_prime, alpha_prime_plus(&alg.params).unwrap());

    let res = anomaly_solve(&alg, &bg, &lc, &inst).unwrap();
    assert_eq!(res.alpha_prime, alpha_prime_lc(&alg.params).unwrap());
    println!("A4 alpha' = 2/(r-s) and 16/(3r-8s): pass");
}

#[test]
fn a05_ricci_convention_pinning() {
    let (alg, bg) = n21();
    let lc = levi_civita(&alg);
    let plus = with_torsion(&lc, &bg.flux, 1).unwrap();
    let de = alg.d_of_coframe(5).to_tensor();
    let n = 5usize;

    // Ric+_{mn} = -d-eta_{im} d-eta_{in}
    let ric_plus = ricci(&alg, &plus);
    let s_t = DenseTensor::from_fn(&alg.params, n, 2, |idx| {
        let (m, nn) = (idx[0], idx[1]);
        let mut acc = RingElement::zero(&alg.params);
        for i in 1..=n {
            acc = acc.add(&de.get(&[i, m]).mul(de.get(&[i, nn])));
        }
        acc
    });
    assert_eq!(ric_plus, s_t.neg());

    // Ric^g_{mn} = -1/2 d-eta_{im} d-eta_{in} + 1/4 |d-eta|^2 eta_m eta_n
    let ric_g = ricci(&alg, &lc);
    let mut norm = RingElement::zero(&alg.params);
    for i in 1..=n {
        for j in 1..=n {
            norm = norm.add(&de.get(&[i, j]).mul(de.get(&[i, j])));
        }
    }
    let mut expected = s_t.scale_rat(&rat(-1, 2));
    expected.add_at(&[5, 5], &norm.scale(&rat(1, 4)));
    assert_eq!(ric_g, expected);
    println!("A5 Ricci convention pinning (ricc5 closed forms): pass");
}

#[test]
fn a06_torsion_is_plus_parallel() {
    let (alg, bg) = n21();
    let plus = with_torsion(&levi_civita(&alg), &bg.flux, 1).unwrap();
    let t = bg.flux.to_tensor();
    assert!(covariant_derivative(&alg, &plus, &t).is_zero());
    println!("A6 nabla+ T = 0: pass");
}

#[test]
fn a07_instanton_tests() {
    let (alg, bg) = n21();
    let lc = levi_civita(&alg);
    let plus = with_torsion(&lc, &bg.flux, 1).unwrap();
    let inst = instanton(&alg);
    let s = &bg.structure;

    assert!(instanton_check(&alg, s, &curvature(&alg, &inst)).pass);
    assert!(instanton_check(&alg, s, &curvature(&alg, &plus)).pass);
    let rep = instanton_check(&alg, s, &curvature(&alg, &lc));
    assert!(!rep.pass);
    assert!(rep.witness.is_some());
    println!("A7 instanton: A and R+ pass, R^g fails with witness: pass");
}

#[test]
fn a08_equations_of_motion() {
    let (alg, bg) = n21();
    let plus = with_torsion(&levi_civita(&alg), &bg.flux, 1).unwrap();
    let inst = instanton(&alg);
    let alpha = alpha_prime_plus(&alg.params).unwrap();
    let report = motion_check(&alg, &bg, &plus, &inst, &alpha);
    assert!(report.einstein_residual.is_zero());
    assert!(report.h_divergence.is_zero());
    assert!(report.gauge_divergence.is_zero());
    assert!(report.gauge_divergence_uncoupled.is_zero());
    assert!(report.supmot_residual.is_zero());

    // evaluation spot-checks at 25 rational points inside the domain
    for p in domain_points(25, 20260810) {
        assert!(tensor_vanishes_at(&report.einstein_residual, &p).unwrap());
        assert!(tensor_vanishes_at(&report.h_divergence, &p).unwrap());
    }
    println!("A8 equations of motion for (plus, A, alpha'=2/(r-s)) + spot checks: pass");
}

#[test]
fn a09_quadratic_curvature_condition() {
    let (alg, bg) = n21();
    let lc = levi_civita(&alg);
    let plus = with_torsion(&lc, &bg.flux, 1).unwrap();
    let inst = instanton(&alg);
    let s = &bg.structure;

    assert!(supmot_check(&alg, s, &curvature(&alg, &plus).tensor(&alg)).is_zero());
    assert!(supmot_check(&alg, s, &curvature(&alg, &inst).tensor(&alg)).is_zero());
    let res = supmot_check(&alg, s, &curvature(&alg, &lc).tensor(&alg));
    assert!(!res.is_zero());
    let (idx, val) = res.first_nonzero().unwrap();
    println!(
        "A9 quadratic condition: zero for R+ and A, witness for R^g at {:?} = {}: pass",
        idx,
        val.render_compact()
    );
}

#[test]
fn a10_identity_suite() {
    let (alg, bg) = n21();
    let rep = identity_suite(&alg, &bg);
    for e in &rep.entries {
        assert!(e.pass, "{} failed: {:?}", e.name, e.witness);
    }
    println!("A10 identity suite (ricg+, mo, ric+ff, su2 trace, ricc5): pass");
}

#[test]
fn a11_cylinder_lift() {
    let (alg, bg) = n21();
    let cyl = cylinder_of(&alg, &bg.structure).unwrap();
    let six = &cyl.algebra;

    let omega2 = cyl.omega.wedge(&cyl.omega).unwrap();
    assert!(six.exterior_derivative(&omega2).is_zero());
    assert!(six.exterior_derivative(&cyl.psi_plus).is_zero());
    assert!(six.exterior_derivative(&cyl.psi_minus).is_zero());

    // -*_6 d Omega = eta ^ d eta
    let d_omega = six.exterior_derivative(&cyl.omega);
    let lhs = d_omega.hodge_full().unwrap().neg();
    let t6 = bg.flux.lift_to_dim(6);
    assert_eq!(lhs, t6);
    println!("A11 cylinder lift: d(Omega^Omega) = dPsi+ = dPsi- = 0, -*6 dOmega = eta^d eta: pass");
}

#[test]
fn a12_property_suite() {
    // dism: d o d = 0 iff the bracket Jacobiator vanishes, on families
    // that pass and on ones that fail
    let ps = params();
    let families: Vec<LieAlgebra> = vec![
        heisenberg_h21(&ps).unwrap(),
        LieAlgebra::abelian(5, ps.clone(), Some(5)),
        broken_algebra(&ps),
    ];
    for alg in &families {
        assert_dd_matches_jacobiator(alg);
    }

    // randomized structure equations: generic draws violate Jacobi, and the
    // two obstruction routes must still agree on each draw
    let qs = ParamSet::empty();
    let mut rng_state = 97u64;
    let mut rnd = || {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((rng_state >> 33) % 7) as i64 - 3
    };
    for _ in 0..12 {
        let mut d_coframe = Vec::with_capacity(5);
        for _ in 0..5 {
            let mut f = KForm::zero(&qs, 5, 2);
            for _ in 0..3 {
                let i = (rnd().rem_euclid(5) + 1) as u8;
                let j = (rnd().rem_euclid(5) + 1) as u8;
                f.add_term(&[i, j], RingElement::int(&qs, rnd()));
            }
            d_coframe.push(f);
        }
        let alg = LieAlgebra::new(
            "random",
            het5::exterior::Coframe::new(5, None).unwrap(),
            d_coframe,
            qs.clone(),
        )
        .unwrap();
        assert_dd_matches_jacobiator(&alg);
    }

    // wedge graded-commutativity on random forms
    let mut state = 11u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 9) as i64 - 4
    };
    for (du, dv) in [(1usize, 1usize), (1, 2), (2, 2), (2, 3)] {
        let mut u = KForm::zero(&ps, 5, du);
        let mut v = KForm::zero(&ps, 5, dv);
        for _ in 0..4 {
            let iu: Vec<u8> = (0..du).map(|_| (next().rem_euclid(5) + 1) as u8).collect();
            let iv: Vec<u8> = (0..dv).map(|_| (next().rem_euclid(5) + 1) as u8).collect();
            u.add_term(&iu, RingElement::int(&ps, next()));
            v.add_term(&iv, RingElement::int(&ps, next()));
        }
        let uv = u.wedge(&v).unwrap();
        let vu = v.wedge(&u).unwrap();
        let expected = if (du * dv) % 2 == 1 { vu.neg() } else { vu };
        assert_eq!(uv, expected);
    }

    // the two curvature code paths agree
    let bgs = n21();
    let lc = levi_civita(&bgs.0);
    let plus = with_torsion(&lc, &bgs.1.flux, 1).unwrap();
    for conn in [&lc, &plus] {
        assert_eq!(
            curvature(&bgs.0, conn).tensor(&bgs.0),
            curvature_via_brackets(&bgs.0, conn)
        );
    }

    // hodge involution and (3,3) eigenspace split
    let e = |i: &[u8]| KForm::basis(&ps, 5, i);
    let basis2 = [[1u8, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]];
    for idxs in basis2 {
        let u = e(&idxs);
        assert_eq!(u.hodge_h(5).unwrap().hodge_h(5).unwrap(), u);
    }
    let sd = [
        e(&[1, 2]).add(&e(&[3, 4])).unwrap(),
        e(&[1, 3]).sub(&e(&[2, 4])).unwrap(),
        e(&[1, 4]).add(&e(&[2, 3])).unwrap(),
    ];
    let asd = [
        e(&[1, 2]).sub(&e(&[3, 4])).unwrap(),
        e(&[1, 3]).add(&e(&[2, 4])).unwrap(),
        e(&[1, 4]).sub(&e(&[2, 3])).unwrap(),
    ];
    for u in &sd {
        assert_eq!(u.hodge_h(5).unwrap(), *u);
    }
    for u in &asd {
        assert_eq!(u.hodge_h(5).unwrap(), u.neg());
    }
    // the six of them span: every basis 2-form is a half sum
    let half = rat(1, 2);
    assert_eq!(e(&[1, 2]), sd[0].add(&asd[0]).unwrap().scale_rat(&half));
    assert_eq!(e(&[3, 4]), sd[0].sub(&asd[0]).unwrap().scale_rat(&half));
    assert_eq!(e(&[1, 3]), sd[1].add(&asd[1]).unwrap().scale_rat(&half));
    assert_eq!(e(&[2, 4]), asd[1].sub(&sd[1]).unwrap().scale_rat(&half));
    assert_eq!(e(&[1, 4]), sd[2].add(&asd[2]).unwrap().scale_rat(&half));
    assert_eq!(e(&[2, 3]), sd[2].sub(&asd[2]).unwrap().scale_rat(&half));

    // classification probe: 1000 samples, seed 42, zero counterexamples,
    // within the time budget
    let start = std::time::Instant::now();
    let probe = classify_probe(1000, 42);
    let elapsed = start.elapsed();
    assert!(probe.counterexamples.is_empty(), "{:?}", probe.counterexamples);
    assert!(probe.cii_zero && probe.ces_ok);
    assert!(elapsed.as_secs() < 60, "probe took {elapsed:?}");
    println!(
        "A12 property suite (d^2 vs jacobi, wedge signs, curvature routes, hodge split, probe {} samples in {:?}): pass",
        probe.samples, elapsed
    );
}

fn assert_dd_matches_jacobiator(alg: &LieAlgebra) {
    let dd_zero = alg.jacobi_check().pass();
    let n = alg.dim();
    let mut jac_zero = true;
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if !alg.jacobiator(i, j, k, l).is_zero() {
                        jac_zero = false;
                    }
                }
            }
        }
    }
    assert_eq!(dd_zero, jac_zero, "algebra {}", alg.name);
}

fn broken_algebra(ps: &Arc<ParamSet>) -> LieAlgebra {
    let mut d_coframe = vec![KForm::zero(ps, 5, 2); 5];
    d_coframe[0] = KForm::basis(ps, 5, &[2, 5]);
    let mut de5 = KForm::basis(ps, 5, &[1, 2]);
    de5.add_term(&[3, 4], RingElement::int(ps, -1));
    d_coframe[4] = de5;
    LieAlgebra::new(
        "broken",
        het5::exterior::Coframe::new(5, Some(5)).unwrap(),
        d_coframe,
        ps.clone(),
    )
    .unwrap()
}
