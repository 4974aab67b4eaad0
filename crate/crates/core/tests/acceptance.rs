//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::Rng;

use tgeom::catalog::{example, g2_product_omegas};
use tgeom::decomposition::{decompose, DecomposeOptions};
use tgeom::dilaton_solver::{
    bounds, build_flat_torus, linear_solve, monotone_iterate, pick_lambda, residual, DiscreteDomain, LambdaPolicy,
    SolverConfig, SourcePreset,
};
use tgeom::fibration_topology::{
    build_su3_fibration, chern_topology, enumerate_diophantine, frestrict_residual, quaternionic_b, sd_asd_split,
    wedge_trace, FiberMode, TopologyData,
};
use tgeom::frame_algebra::unit_vector;
use tgeom::invariant_geometry::{bianchi_report, d_invariant, nabla_form, with_torsion, BianchiKind};
use tgeom::random::{random_form, random_geometry_with_torsion, random_parallel_torsion_geometry, random_unimodular_geometry, rng};
use tgeom::special_structures::{
    build_g2, build_spin7, build_su3, bryant_positivity, cayley_square, compact_metric, eigen_range, hkt_report,
    standard_quaternion_triple, Chevalley, G2Mode, HypercomplexTriple, ROOT_ALPHA, ROOT_BETA,
};
use tgeom::EpsilonOrientation;

const TOL: f64 = 1e-10;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.2}s < {}s", e.as_secs_f64(), limit.as_secs()))
}

fn bianchi_suite() -> Outcome {
    let t = Instant::now();
    let mut r = rng(2024);
    let (mut first, mut second, mut pair) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 3 + i % 4;
        // general torsion for the two identities
        let g = random_geometry_with_torsion(n, &mut r);
        first = first.max(bianchi_report(&g, BianchiKind::First, TOL).unwrap().value("first_bianchi").unwrap());
        second = second.max(bianchi_report(&g, BianchiKind::Second, TOL).unwrap().value("second_bianchi").unwrap());
        // exact torsion H = dβ for pair symmetry
        let base = random_unimodular_geometry(n, &mut r);
        let h = d_invariant(&random_form(n, 2, &mut r), &base).unwrap();
        let g = base.with_torsion_form(h).unwrap();
        let rep = bianchi_report(&g, BianchiKind::PairSymmetry, TOL).unwrap();
        pair = pair.max(rep.value("pair_symmetry").unwrap());
        first = first.max(bianchi_report(&g, BianchiKind::First, TOL).unwrap().value("first_bianchi").unwrap());
        second = second.max(bianchi_report(&g, BianchiKind::Second, TOL).unwrap().value("second_bianchi").unwrap());
    }
    let (fast, time) = within(t, Duration::from_secs(10));
    outcome(
        first <= TOL && second <= TOL && pair <= TOL && fast,
        format!("200 samples dim 3-6: first {first:.1e}, second {second:.1e}, pair {pair:.1e}; {time}"),
    )
}

fn lccc_suite() -> Outcome {
    let mut r = rng(7);
    let mut samples: Vec<_> = (0..60).map(|i| random_parallel_torsion_geometry(3 + i % 6, &mut r)).collect();
    for n in ["su2-biinvariant", "su2su2", "su2-plus-abelian3", "su3-hkt", "g2-su2-product"] {
        samples.push(example(n).unwrap().geometry);
    }
    let (mut used, mut worst_nabla, mut worst_jac) = (0, 0.0f64, 0.0f64);
    for g in &samples {
        let dh = d_invariant(g.torsion(), g).unwrap().sup_norm();
        let nh = nabla_form(g.torsion(), &with_torsion(g, 1)).sup_norm();
        if dh > TOL || nh > TOL {
            continue;
        }
        used += 1;
        let rep = bianchi_report(g, BianchiKind::Lccc, TOL).unwrap();
        worst_nabla = worst_nabla.max(rep.value("nabla_H").unwrap());
        worst_jac = worst_jac.max(rep.value("jacobi_H").unwrap());
    }
    outcome(
        used >= 60 && worst_nabla <= TOL && worst_jac <= TOL,
        format!("{used} samples with dH = 0, ∇̂H = 0: |∇H| {worst_nabla:.1e}, jacobi {worst_jac:.1e}"),
    )
}

fn su3_suite() -> Outcome {
    let t = Instant::now();
    let b = build_su3();
    let rep = hkt_report(&b.geometry, &b.triple, &EpsilonOrientation::positive(8), TOL).unwrap();
    let ch = Chevalley::new();
    let h = ch.coroot([ROOT_ALPHA[0] - ROOT_BETA[0], ROOT_ALPHA[1] - ROOT_BETA[1]]);
    // ⟨h, h⟩ = tr(h h); the compact metric of i h equals it
    let ih = h * num_complex::Complex::new(0.0, 1.0);
    let norm = compact_metric(&ih, &ih);
    let d = decompose(&b.geometry, DecomposeOptions::default()).unwrap();
    let one_block = d.kernel_dim == 0 && d.blocks.len() == 1 && d.blocks[0].dim == 8;
    let (fast, time) = within(t, Duration::from_secs(5));
    let failing: Vec<_> = rep.failures().iter().map(|r| r.label.clone()).collect();
    outcome(
        rep.passed() && norm == 6.0 && one_block && fast,
        format!(
            "hkt rows failing {:?}; ⟨h_(α−β), h_(α−β)⟩ = {norm}; kernel {}, blocks {:?}; {time}",
            failing,
            d.kernel_dim,
            d.blocks.iter().map(|b| b.dim).collect::<Vec<_>>()
        ),
    )
}

fn desk_cases() -> Outcome {
    let summary = |name: &str| {
        let d = decompose(&example(name).unwrap().geometry, DecomposeOptions::default()).unwrap();
        (d.kernel_dim, d.block_names().iter().map(|s| s.to_string()).collect::<Vec<_>>())
    };
    let a = summary("su2-plus-abelian3");
    let b = summary("su2su2");
    outcome(
        a == (3, vec!["su(2)".into()]) && b == (2, vec!["su(2)".into(), "su(2)".into()]),
        format!("su2+R3: kernel {} {:?}; su2+su2+R2: kernel {} {:?}", a.0, a.1, b.0, b.1),
    )
}

fn g2_spin7() -> Outcome {
    let plus = EpsilonOrientation::positive(7);
    let g2 = build_g2(G2Mode::Standard, plus).unwrap();
    let bry = bryant_positivity(&g2);
    let bry_err = (&bry - nalgebra::DMatrix::<f64>::identity(7, 7)).amax();
    let c = build_spin7(&g2).unwrap();
    let star = tgeom::frame_algebra::hodge_star(&c.phi, &c.orient).unwrap();
    let sd = (&star - &c.phi).sup_norm();
    let sq = (cayley_square(&c) - 14.0).abs();
    let lambda = || [unit_vector(7, 0), unit_vector(7, 1), unit_vector(7, 2)];
    let positive_in: Vec<i8> = [1i8, -1]
        .into_iter()
        .filter(|&s| {
            let o = EpsilonOrientation::new(7, s).unwrap();
            let d = build_g2(
                G2Mode::Product {
                    lambda: lambda(),
                    omegas: g2_product_omegas(),
                },
                o,
            )
            .unwrap();
            eigen_range(&bryant_positivity(&d)).0 > 1e-12
        })
        .collect();
    outcome(
        bry_err <= 1e-12 && sd <= 1e-12 && sq <= 1e-12 && positive_in.len() == 1,
        format!("|B − 1| {bry_err:.1e}; |*Φ − Φ| {sd:.1e}; |Φ∧Φ − 14| {sq:.1e}; product positive in orientations {positive_in:?}"),
    )
}

fn fibration() -> Outcome {
    let f = build_su3_fibration();
    let fr = frestrict_residual(&f.curvature, &quaternionic_b(f.kappa), &f.base_triple).unwrap();
    let wt = wedge_trace(&f.curvature).unwrap().sup_norm();
    let (sd, _) = sd_asd_split(&f.curvature.f[0], &f.orient).unwrap();
    let u1_sd = sd.sup_norm();
    let u1_norm = f.curvature.f[0].sup_norm();
    outcome(
        fr <= 1e-12 && wt <= 1e-12 && u1_sd <= 1e-12 && u1_norm > 0.1,
        format!("frestrict {fr:.1e}; wedge_trace {wt:.1e}; F_u(1) self-dual part {u1_sd:.1e} (|F_u(1)| {u1_norm:.2})"),
    )
}

fn topology() -> Outcome {
    let t = Instant::now();
    let cp2 = chern_topology(&TopologyData::connected_sum(vec![1]), FiberMode::Su2).unwrap();
    let s4 = chern_topology(&TopologyData::s4(), FiberMode::Su2).unwrap();
    let sols: Vec<(u32, Vec<i64>)> = enumerate_diophantine(12).unwrap().into_iter().map(|s| (s.k, s.n)).collect();
    let expected = vec![(1, vec![-1]), (1, vec![1]), (4, vec![0, 0, 0, 0])];
    let (fast, time) = within(t, Duration::from_secs(1));
    outcome(
        cp2.obstruction == 0 && cp2.c2e == -1.0 && s4.obstruction == 4 && sols == expected && fast,
        format!(
            "CP2bar obstruction {} c2E {}; S4 obstruction {}; solutions {:?}; {time}",
            cp2.obstruction, cp2.c2e, s4.obstruction, sols
        ),
    )
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn solve(domain: &DiscreteDomain, w: &[f64], tol: f64) -> tgeom::dilaton_solver::DilatonSolution {
    let cfg = SolverConfig {
        lambda: LambdaPolicy::AUTO,
        tol,
        max_iter: 10_000,
    };
    monotone_iterate(domain, w, &cfg).unwrap()
}

fn dilaton() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    let d = build_flat_torus(32, 32, 1.0 / 32.0).unwrap();
    let w = SourcePreset::Constant.sample(&d).unwrap();
    let s = solve(&d, &w, 1e-12);
    let dev = s.u.iter().fold(0.0f64, |a, u| a.max((u - 2.0).abs()));
    ok &= dev < 1e-8;
    notes.push(format!("w = 4: |u − 2| {dev:.1e}"));

    let d = build_flat_torus(64, 64, 1.0 / 64.0).unwrap();
    let w = SourcePreset::SinBump.sample(&d).unwrap();
    let s = solve(&d, &w, TOL);
    let res = sup(&residual(&d, &s.u, &w).unwrap());
    ok &= s.trace.all_ok() && res < 1e-8;
    notes.push(format!("64² sin-bump: {} steps, monotone/bounded {}, residual {res:.1e}", s.trace.steps.len(), s.trace.all_ok()));

    // order preservation of v ↦ (−∇² + λ)⁻¹(λv − v² + w) on the box [a, b]
    let (a, b) = bounds(&w).unwrap();
    let lambda = pick_lambda(b, LambdaPolicy::AUTO).unwrap();
    let map = |v: &[f64]| {
        let rhs: Vec<f64> = v.iter().zip(&w).map(|(x, wi)| lambda * x - x * x + wi).collect();
        linear_solve(&d, lambda, &rhs).unwrap()
    };
    let slack = 1e-11 * (b + lambda);
    let mut r = rng(99);
    let (mut worst_order, mut worst_box) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let lo: Vec<f64> = (0..d.node_count()).map(|_| r.gen_range(a..b)).collect();
        let hi: Vec<f64> = lo.iter().map(|x| r.gen_range(*x..=b)).collect();
        let (tl, th) = (map(&lo), map(&hi));
        for i in 0..tl.len() {
            worst_order = worst_order.max(tl[i] - th[i]);
            worst_box = worst_box.max(a - tl[i]).max(th[i] - b);
        }
    }
    ok &= worst_order <= slack && worst_box <= slack;
    notes.push(format!("50 ordered pairs: max order violation {worst_order:.1e}, box violation {worst_box:.1e}"));

    // refinement: compare on the common nodes of 32², 64², 128²
    let sols: Vec<(DiscreteDomain, Vec<f64>)> = [32usize, 64, 128]
        .into_iter()
        .map(|n| {
            let d = build_flat_torus(n, n, 1.0 / n as f64).unwrap();
            let w = SourcePreset::SinBump.sample(&d).unwrap();
            let u = solve(&d, &w, 1e-13).u;
            (d, u)
        })
        .collect();
    let diff = |c: usize, f: usize| {
        let key = |x: &[f64]| ((x[0] * 1024.0).round() as i64, (x[1] * 1024.0).round() as i64);
        let fine: HashMap<_, usize> =
            (0..sols[f].0.node_count()).map(|i| (key(&sols[f].0.coordinates(i).unwrap()), i)).collect();
        (0..sols[c].0.node_count())
            .map(|i| (sols[c].1[i] - sols[f].1[fine[&key(&sols[c].0.coordinates(i).unwrap())]]).abs())
            .fold(0.0f64, f64::max)
    };
    let (e1, e2) = (diff(0, 1), diff(1, 2));
    let ratio = e1 / e2;
    ok &= (3.0..5.0).contains(&ratio);
    notes.push(format!("refinement |u32 − u64| {e1:.2e}, |u64 − u128| {e2:.2e}, ratio {ratio:.2}"));

    let (fast, time) = within(t, Duration::from_secs(60));
    ok &= fast;
    notes.push(time);
    outcome(ok, notes.join("; "))
}

fn negative_controls() -> Outcome {
    let mut r = rng(31);
    let g = random_geometry_with_torsion(5, &mut r);
    let rep = bianchi_report(&g, BianchiKind::PairSymmetry, TOL).unwrap();
    let (dh, pair) = (rep.value("dH").unwrap(), rep.value("pair_symmetry").unwrap());

    let std = standard_quaternion_triple();
    let [i1, _, _] = std.members();
    let bad = HypercomplexTriple::unchecked(i1.clone(), i1.clone(), i1.clone());
    let hk = hkt_report(&tgeom::invariant_geometry::LieFrameGeometry::abelian(4), &bad, &EpsilonOrientation::positive(4), TOL)
        .unwrap();
    let anti = hk.value("anticommute").unwrap();

    let s4 = chern_topology(&TopologyData::s4(), FiberMode::Su2).unwrap();
    outcome(
        dh > 1e-3 && pair > 1e-3 && !hk.passed() && anti > 1.0 && !s4.admissible(),
        format!(
            "dH {dh:.2e} with pair residual {pair:.2e}; triple (I, I, I) anticommute residual {anti:.2}; S4 obstruction {} rejected",
            s4.obstruction
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("bianchi identities and pair symmetry", bianchi_suite),
        ("parallel torsion is Levi-Civita parallel and Jacobi", lccc_suite),
        ("su(3) HKT construction", su3_suite),
        ("decomposition desk cases", desk_cases),
        ("G2 and Spin(7) forms", g2_spin7),
        ("su(3) fibration curvature", fibration),
        ("characteristic class obstruction", topology),
        ("monotone dilaton solver", dilaton),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!("{} criterion {}: {name}: {}", if o.ok { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
