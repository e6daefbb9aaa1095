//! Acceptance criteria. Runs without the test harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any fails.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use solitonforge::field::{cnl_residual, ScalarField};
use solitonforge::laxpair::{
    ratio_jet, ratio_value, riccati_residual, unitarity_defect, zero_curvature_residual, Direction, PropagatedGroup,
    RiccatiForm,
};
use solitonforge::numkit::{c64, Orders, C64};
use solitonforge::sigma2::{
    resolve_convention, sigma2_backlund_constraints, PhaseConvention, Sigma2Branch, Sigma2Spec, TriangularGaugeState,
    TriangularVacuum,
};
use solitonforge::soliton_engine::{cramer_p_coefficients, direct_n_dressing, DressingChain, NSoliton, SolitonSpec};
use solitonforge::transforms::{
    appendix_residuals, energy_series, forward_jets, inverse_jets, one_soliton_energy, relative_spread,
    sigma1_centre, sigma1_ladder_check, ExponentialSeed, HankelLadder,
};
use solitonforge::{FieldPair, GroupProvider, SampleGrid, Vacuum};

type Outcome = Result<String, String>;

fn specs() -> Vec<SolitonSpec> {
    let one = (c64(0.0, 1.0), c64(1.0, 0.0));
    let two = (c64(0.5, 1.0), c64(1.0, 0.0));
    let three = (c64(-0.4, 0.7), c64(2.0, -1.0));
    let mid = (c64(0.5, 1.0), c64(0.8, 0.6));
    vec![
        SolitonSpec::sigma1(&[one]).unwrap(),
        SolitonSpec::sigma1(&[one, two]).unwrap(),
        SolitonSpec::sigma1(&[one, mid, three]).unwrap(),
    ]
}

fn grid() -> SampleGrid {
    SampleGrid::new((-10.0, 10.0, 41), (-2.0, 2.0, 11))
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// `max|a − b| / max|a|` over paired samples.
fn sup_rel(pairs: &[((C64, C64), (C64, C64))]) -> f64 {
    let num = pairs
        .iter()
        .map(|(a, b)| (a.0 - b.0).norm().max((a.1 - b.1).norm()))
        .fold(0.0, f64::max);
    let den = pairs.iter().map(|(a, _)| a.0.norm().max(a.1.norm())).fold(0.0, f64::max);
    num / den.max(f64::MIN_POSITIVE)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn max_over<F>(points: &[(f64, f64)], f: F) -> Result<f64, String>
where
    F: Fn(f64, f64) -> solitonforge::Result<f64> + Sync,
{
    let vals: Vec<solitonforge::Result<f64>> = points.par_iter().map(|&(x, t)| f(x, t)).collect();
    let mut worst = 0f64;
    for (v, (x, t)) in vals.into_iter().zip(points) {
        let v = v.map_err(|e| format!("evaluation failed at ({x}, {t}): {e}"))?;
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
    }
    Ok(worst)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let pts = grid().points();
    let mut details = Vec::new();
    let mut ok = true;
    for spec in specs() {
        let f = NSoliton::on_vacuum(spec.clone());
        let r = max_over(&pts, |x, t| {
            let j = f.jets(x, t, Orders::new(2, 1))?;
            Ok(cnl_residual(&j.u)?.norm())
        })?;
        ok &= r <= 1e-8;
        details.push(format!("n={} cnl={r:.2e}", spec.n()));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 30.0;
    details.push(format!("runtime={secs:.2}s"));
    check(ok, details.join(" "))
}

fn criterion_2() -> Outcome {
    let pts = grid().points();
    let mut ok = true;
    let mut details = Vec::new();
    for spec in specs() {
        let f = NSoliton::on_vacuum(spec.clone());
        let chain = DressingChain::new(Arc::new(Vacuum), spec.steps());
        let real = max_over(&pts, |x, t| {
            let (u, v) = f.jets(x, t, Orders::new(0, 0))?.values();
            Ok((u - v.conj()).norm())
        })?;
        let step = max_over(&pts, |x, t| {
            Ok(chain
                .factors(x, t, Orders::new(0, 0))?
                .iter()
                .map(|p| (p.b.value() + p.c.value().conj()).norm())
                .fold(0.0, f64::max))
        })?;
        ok &= real <= 1e-10 && step <= 1e-10;
        details.push(format!("n={} |U-V*|={real:.2e} |B+C*|={step:.2e}", spec.n()));
    }
    check(ok, details.join(" "))
}

fn criterion_3() -> Outcome {
    let pts = grid().points();
    let generic = SolitonSpec::new(
        vec![(c64(0.5, 1.0), c64(0.7, 0.2)), (c64(-0.3, 0.4), c64(1.5, -0.5))],
        false,
    )
    .unwrap();
    let mut chains: Vec<(String, DressingChain)> = specs()
        .into_iter()
        .map(|s| (format!("n={}", s.n()), DressingChain::new(Arc::new(Vacuum), s.steps())))
        .collect();
    chains.push(("generic".into(), DressingChain::new(Arc::new(Vacuum), generic.steps())));
    let mut ok = true;
    let mut details = Vec::new();
    for (name, chain) in chains {
        let per_point: Vec<_> = pts
            .par_iter()
            .map(|&(x, t)| chain.factors(x, t, Orders::new(0, 0)))
            .collect::<solitonforge::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let (mut roots, mut minor_def, mut spread) = (0f64, 0f64, 0f64);
        for k in 0..chain.steps.len() {
            let (l1, l2) = (chain.steps[k].lambda1, chain.steps[k].lambda2);
            let traces: Vec<C64> = per_point.iter().map(|f| f[k].trace()).collect();
            let minors: Vec<C64> = per_point.iter().map(|f| f[k].minor()).collect();
            spread = spread.max(relative_spread(&traces)).max(relative_spread(&minors));
            for f in &per_point {
                roots = roots.max(f[k].p_value(l1).det().norm()).max(f[k].p_value(l2).det().norm());
                minor_def = minor_def.max((f[k].minor() - l1 * l2).norm());
            }
        }
        ok &= roots <= 1e-10 && minor_def <= 1e-10 && spread <= 1e-10;
        details.push(format!("{name}: detP={roots:.1e} AD-BC={minor_def:.1e} spread={spread:.1e}"));
    }
    check(ok, details.join("; "))
}

fn sample(f: &dyn FieldPair, pts: &[(f64, f64)]) -> Result<Vec<(C64, C64)>, String> {
    pts.par_iter()
        .map(|&(x, t)| f.jets(x, t, Orders::new(0, 0)).map(|j| j.values()))
        .collect::<solitonforge::Result<Vec<_>>>()
        .map_err(|e| e.to_string())
}

fn criterion_4() -> Outcome {
    let pts = grid().points();
    let mut worst = 0f64;
    for spec in specs() {
        let base = sample(&NSoliton::on_vacuum(spec.clone()), &pts)?;
        let chain = sample(&DressingChain::new(Arc::new(Vacuum), spec.steps()), &pts)?;
        for i in 0..spec.n() {
            for j in (i + 1)..spec.n() {
                let sw = spec.swapped(i, j);
                let direct = sample(&NSoliton::on_vacuum(sw.clone()), &pts)?;
                let ch = sample(&DressingChain::new(Arc::new(Vacuum), sw.steps()), &pts)?;
                let a: Vec<_> = base.iter().cloned().zip(direct).collect();
                let b: Vec<_> = chain.iter().cloned().zip(ch).collect();
                worst = worst.max(sup_rel(&a)).max(sup_rel(&b));
            }
        }
    }
    check(worst <= 1e-10, format!("max relative change under swaps {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let pts = grid().points();
    let mut worst_chain = 0f64;
    let mut worst_cramer = 0f64;
    for spec in specs() {
        let chain = DressingChain::new(Arc::new(Vacuum), spec.steps());
        let rows: Vec<_> = pts
            .par_iter()
            .map(|&(x, t)| -> solitonforge::Result<_> {
                let direct = direct_n_dressing(&spec, &Vacuum, x, t)?;
                let seq = chain.jets(x, t, Orders::new(0, 0))?.values();
                let (lams, fs): (Vec<C64>, Vec<C64>) = spec
                    .dressing_points()
                    .iter()
                    .map(|&(l, a)| {
                        let g = Vacuum.group(l, x, t, Orders::new(0, 0))?.value();
                        Ok((l, ratio_value(&g, l, a)?.value))
                    })
                    .collect::<solitonforge::Result<Vec<_>>>()?
                    .into_iter()
                    .unzip();
                let (p12, p21) = cramer_p_coefficients(&lams, &fs, (x, t))?;
                Ok((direct, seq, (-2.0 * p12, 2.0 * p21)))
            })
            .collect::<solitonforge::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let a: Vec<_> = rows.iter().map(|r| (r.0, r.1)).collect();
        let b: Vec<_> = rows.iter().map(|r| (r.0, r.2)).collect();
        worst_chain = worst_chain.max(sup_rel(&a));
        worst_cramer = worst_cramer.max(sup_rel(&b));
    }
    check(
        worst_chain <= 1e-8 && worst_cramer <= 1e-8,
        format!("chain {worst_chain:.2e} cramer {worst_cramer:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    let pts = SampleGrid::new((-3.0, 3.0, 13), (-0.5, 0.5, 3)).points();
    let seed = Arc::new(
        ExponentialSeed::new(
            vec![c64(0.7, 0.0), c64(-1.2, 0.0), c64(0.2, 0.3), c64(1.5, -0.1), c64(-0.4, 0.2)],
            vec![c64(1.0, 0.0), c64(0.5, 0.2), c64(-0.3, 0.6), c64(0.2, -0.1), c64(0.8, 0.4)],
        )
        .unwrap(),
    );
    let ladder = HankelLadder::new(seed.clone() as Arc<dyn ScalarField>);
    let rung1 = |x: f64, t: f64, o: Orders| ladder.rung(1, x, t, o);
    let soliton = NSoliton::on_vacuum(specs()[1].clone());
    let fi_if = |j: &solitonforge::PointJets| -> solitonforge::Result<f64> {
        let (a, b) = j.values();
        let fi = inverse_jets(&forward_jets(j)?)?.values();
        let if_ = forward_jets(&inverse_jets(j)?)?.values();
        Ok(rel(fi.0, a).max(rel(fi.1, b)).max(rel(if_.0, a)).max(rel(if_.1, b)))
    };
    let o = Orders::new(4, 0);
    let mut round = max_over(&pts, |x, t| fi_if(&soliton.jets(x, t, o)?))?;
    round = round.max(max_over(&pts, |x, t| fi_if(&rung1(x, t, o)?))?);
    // u = 0 on the seed itself, so only the inverse of the forward step exists there.
    round = round.max(max_over(&pts, |x, t| {
        let j = seed.jets(x, t, o)?;
        let back = inverse_jets(&forward_jets(&j)?)?.values();
        Ok(rel(back.0, j.values().0).max(rel(back.1, j.values().1)))
    })?);
    let rungs = max_over(&pts, |x, t| {
        let mut worst = 0f64;
        for s in 0..=3 {
            let next = forward_jets(&ladder.rung(s, x, t, Orders::new(2, 0))?)?.values();
            let want = ladder.rung(s + 1, x, t, Orders::new(0, 0))?.values();
            worst = worst.max(rel(next.0, want.0)).max(rel(next.1, want.1));
        }
        Ok(worst)
    })?;
    check(round <= 1e-11 && rungs <= 1e-9, format!("round trip {round:.2e} rungs {rungs:.2e}"))
}

fn criterion_7() -> Outcome {
    let g = SampleGrid::new((-6.0, 6.0, 25), (-1.0, 1.0, 5));
    let seeds = [
        (1, ExponentialSeed::sigma1_closing(&[c64(0.3, -0.8), c64(0.3, 0.8)], &[c64(0.0, 0.0), c64(1.0, 0.5)])),
        (
            2,
            ExponentialSeed::sigma1_closing(
                &[c64(0.3, -0.8), c64(0.3, 0.8), c64(-0.5, -0.6), c64(-0.5, 0.6)],
                &[c64(0.0, 0.0), c64(1.0, 0.5), c64(0.0, 0.0), c64(0.7, -0.2)],
            ),
        ),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (m, seed) in seeds {
        let seed = Arc::new(seed.map_err(|e| e.to_string())?);
        let r = sigma1_ladder_check(&sigma1_centre(seed, m), m, &g).map_err(|e| e.to_string())?;
        ok &= r.max_defect <= 1e-8;
        details.push(format!("m={m} defect={:.2e}", r.max_defect));
    }
    check(ok, details.join(" "))
}

fn criterion_8() -> Outcome {
    let pts = grid().points();
    let probes = [c64(0.3, 0.7), c64(-1.1, 0.2), c64(0.8, 0.0)];
    let mut zc = 0f64;
    let mut riccati = 0f64;
    for spec in specs() {
        let f = NSoliton::on_vacuum(spec.clone());
        zc = zc.max(max_over(&pts, |x, t| {
            Ok(probes
                .iter()
                .map(|&l| zero_curvature_residual(&f, l, x, t).map(|m| m.frobenius()))
                .collect::<solitonforge::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max))
        })?);
        riccati = riccati.max(max_over(&pts, |x, t| {
            let j = f.jets(x, t, Orders::new(1, 0))?;
            let mut w = 0f64;
            for (l, a) in [(c64(0.3, 0.7), c64(0.6, -0.2)), (c64(-0.8, 0.0), c64(1.0, 1.0))] {
                let ratio = ratio_jet(&f.group(l, x, t, Orders::new(1, 1))?, a)?;
                for d in [Direction::X, Direction::T] {
                    for form in [RiccatiForm::Ratio, RiccatiForm::Reciprocal] {
                        w = w.max(riccati_residual(&j, &ratio, l, d, form)?.norm() / 1f64.max(ratio.value().norm()));
                    }
                }
            }
            Ok(w)
        })?);
    }
    let two = PropagatedGroup::new(Arc::new(NSoliton::on_vacuum(specs()[1].clone())));
    let targets = [(1.5, 0.5), (-2.0, -0.7), (0.8, 1.2)];
    let mut path = 0f64;
    let mut unit = 0f64;
    for &(x, t) in &targets {
        for l in [c64(0.4, 0.0), c64(-1.0, 0.0)] {
            let p = two.propagate(l, x, t).map_err(|e| e.to_string())?;
            path = path.max(p.path_defect);
            unit = unit.max(unitarity_defect(&p.element));
        }
        let p = two.propagate(c64(0.2, 0.5), x, t).map_err(|e| e.to_string())?;
        path = path.max(p.path_defect);
    }
    check(
        zc <= 1e-8 && path <= 1e-6 && unit <= 1e-8 && riccati <= 1e-8,
        format!("zero curvature {zc:.2e} path {path:.2e} unitarity {unit:.2e} riccati {riccati:.2e}"),
    )
}

fn criterion_9() -> Outcome {
    let fp = PhaseConvention::FullPhase;
    let n0 = Sigma2Spec::normalized(vec![c64(0.7, 0.0)], &[c64(1.0, 0.0)], fp).map_err(|e| e.to_string())?;
    let n1 = Sigma2Spec::normalized(
        vec![c64(0.5, 0.0), c64(1.0, 0.5), c64(1.0, -0.5)],
        &[c64(1.0, 0.0), c64(0.8, 0.3), c64(0.0, 0.0)],
        fp,
    )
    .map_err(|e| e.to_string())?;
    let n1_real = Sigma2Spec::normalized(vec![c64(1.0, 0.0), c64(2.0, 0.0), c64(3.0, 0.0)], &[c64(1.0, 0.0); 3], fp)
        .map_err(|e| e.to_string())?;
    let pts = [(-2.0, -0.5), (-0.7, 0.3), (0.4, 0.1), (1.3, -0.2), (2.5, 0.5)];
    let conv = resolve_convention(&[n0, n1, n1_real.clone()], &pts, 1e-8).map_err(|e| e.to_string())?;
    let worst_selected = conv
        .residuals
        .iter()
        .filter(|r| r.0 == conv.selected)
        .map(|r| r.2)
        .fold(0.0, f64::max);

    let exact = Sigma2Spec::new(n1_real.lambdas.clone(), n1_real.cs.clone(), fp).is_ok();
    let mut off = n1_real.cs.clone();
    off[1] *= 1.0 + 1e-9;
    let validator = exact && Sigma2Spec::new(n1_real.lambdas.clone(), off, fp).is_err();

    let l0 = 0.4;
    let nu = |l: f64, dir: C64, scale: f64| dir / dir.norm() / (2.0 * (l - l0)).abs() * scale;
    let constraints = |scale: f64| -> Result<(f64, bool), String> {
        let mut worst = 0f64;
        let mut branch = true;
        for (x, t) in [(0.3, 0.1), (-1.0, 0.4), (2.0, -0.3), (-2.5, -0.6)] {
            let s1 = TriangularGaugeState::new(c64(1.0, 0.0), l0, nu(1.0, c64(0.3, 0.7), scale), x, t);
            let s2 = TriangularGaugeState::new(c64(-0.3, 0.0), l0, nu(-0.3, c64(-0.6, 0.2), 1.0), x, t);
            let (s1, s2) = (s1.map_err(|e| e.to_string())?, s2.map_err(|e| e.to_string())?);
            let v = TriangularVacuum { lambda0: l0 }.jets(x, t, Orders::new(0, 0)).map_err(|e| e.to_string())?.v;
            let r = sigma2_backlund_constraints(&s1, &s2, &v).map_err(|e| e.to_string())?;
            worst = worst.max(r.cc_defect).max(r.vic_defect).max(r.extra_defect);
            branch &= r.branch == Some(Sigma2Branch::RealPair);
        }
        Ok((worst, branch))
    };
    let (good, branch) = constraints(1.0)?;
    let (bad, _) = constraints(1.3)?;
    check(
        worst_selected <= 1e-8 && validator && good <= 1e-8 && branch && bad >= 1e-3,
        format!(
            "convention={} residual {worst_selected:.2e}, validator {validator}, constraints {good:.2e} (real pair {branch}), control {bad:.2e}",
            conv.selected.name()
        ),
    )
}

fn criterion_10() -> Outcome {
    let spec = SolitonSpec::sigma1(&[(c64(0.5, 1.0), c64(0.8, 0.6))]).unwrap();
    let g = SampleGrid::new((-5.0, 5.0, 40), (-1.0, 1.0, 6));
    let r = appendix_residuals(&Vacuum, &spec.steps()[0], &g).map_err(|e| e.to_string())?;
    check(
        r.system_residual <= 1e-6 && r.reconstruction_defect <= 1e-6,
        format!(
            "system {:.2e} reconstruction {:.2e}",
            r.system_residual, r.reconstruction_defect
        ),
    )
}

fn criterion_11() -> Outcome {
    let one = SolitonSpec::sigma1(&[(c64(0.5, 1.0), c64(1.0, 0.0))]).unwrap();
    let g1 = SampleGrid::new((-20.0, 20.0, 1601), (-2.0, 2.0, 9));
    let series = energy_series(&NSoliton::on_vacuum(one), &g1).map_err(|e| e.to_string())?;
    let raws: Vec<f64> = series.iter().map(|s| s.raw).collect();
    let drift = raws.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - raws.iter().cloned().fold(f64::INFINITY, f64::min);

    let (l1, l2) = (c64(-2.0, 1.0), c64(2.0, 0.6));
    let two = SolitonSpec::sigma1(&[(l1, c64(1.0, 0.0)), (l2, c64(0.5, 0.5))]).unwrap();
    let g2 = SampleGrid::new((-30.0, 30.0, 3001), (-2.0, 2.0, 2));
    let refs = one_soliton_energy(l1, &g2).map_err(|e| e.to_string())? + one_soliton_energy(l2, &g2).map_err(|e| e.to_string())?;
    let ends = energy_series(&NSoliton::on_vacuum(two), &g2).map_err(|e| e.to_string())?;
    let additivity = ends.iter().map(|s| (s.raw - refs).abs() / refs).fold(0.0, f64::max);
    check(
        drift <= 1e-4 && additivity <= 1e-3,
        format!("drift {drift:.2e} additivity {additivity:.2e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("n-soliton PDE residual", criterion_1),
        ("sigma1 reality", criterion_2),
        ("dressing-factor invariants", criterion_3),
        ("commutativity", criterion_4),
        ("chain vs direct", criterion_5),
        ("discrete map", criterion_6),
        ("sigma1 ladder", criterion_7),
        ("Lax verification", criterion_8),
        ("sigma2 sector", criterion_9),
        ("appendix", criterion_10),
        ("energy", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.2}s]", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
