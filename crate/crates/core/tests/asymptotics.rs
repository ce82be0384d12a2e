use vecopt_core::asymptotics::{
    bounded_section_probe, k_zero_cloud, mtame_probe, properness_probe, ps_probe, shell_sampler,
    theorem31_crosscheck, weak_ps_probe, AsymptoticCloud, CloudStatus, ProbeConfig, RadiusSchedule,
};
use vecopt_core::linalg::{dist, norm};
use vecopt_core::minnorm::{gamma_residual, rabier_nu, RabierMode};
use vecopt_core::oracle::GridSpec;
use vecopt_core::verdict::Status;
use vecopt_core::{Error, Expr, FeasibleSet, Problem, SublevelBound};

const SEED: u64 = 20;

fn x1() -> Expr {
    Expr::var(0)
}

fn sin() -> Problem {
    Problem::new(1, vec![x1().sin()], FeasibleSet::Full).unwrap()
}

fn square() -> Problem {
    Problem::new(1, vec![x1().powi(2)], FeasibleSet::Full).unwrap()
}

fn line() -> Problem {
    Problem::new(1, vec![x1()], FeasibleSet::Full).unwrap()
}

fn example_41() -> Problem {
    Problem::new(1, vec![-(x1().powi(2)), x1()], FeasibleSet::half_line(0.0)).unwrap()
}

fn plane_sum() -> Problem {
    Problem::new(2, vec![Expr::var(0) + Expr::var(1)], FeasibleSet::Full).unwrap()
}

fn yb(v: &[f64]) -> SublevelBound {
    SublevelBound::new(v.to_vec()).unwrap()
}

fn cfg() -> ProbeConfig {
    ProbeConfig::default()
}

fn sched() -> RadiusSchedule {
    RadiusSchedule::default()
}

#[test]
fn sampler_sin_fills_every_shell() {
    let shells = shell_sampler(&sin(), &yb(&[0.0]), &sched(), SEED, &cfg()).unwrap();
    assert_eq!(shells.len(), 20);
    for s in &shells {
        assert!(!s.points.is_empty(), "shell {} empty", s.index);
        for x in &s.points {
            let r = norm(x);
            assert!(r >= s.inner_radius && r < s.outer_radius);
            assert!(x[0].sin() <= 1e-9);
        }
    }
}

#[test]
fn sampler_bounded_sublevels_empty_out() {
    let shells = shell_sampler(&square(), &yb(&[1.0]), &sched(), SEED, &cfg()).unwrap();
    assert!(shells.iter().filter(|s| s.inner_radius > 1.0).all(|s| s.points.is_empty()));
    let shells = shell_sampler(&example_41(), &yb(&[-4.0, 2.0]), &sched(), SEED, &cfg()).unwrap();
    for s in &shells {
        if s.inner_radius > 2.0 {
            assert!(s.points.is_empty());
        }
        for x in &s.points {
            assert!((x[0] - 2.0).abs() < 1e-6);
        }
    }
}

#[test]
fn sampler_is_deterministic() {
    let a = shell_sampler(&plane_sum(), &yb(&[0.0]), &sched(), 3, &cfg()).unwrap();
    let b = shell_sampler(&plane_sum(), &yb(&[0.0]), &sched(), 3, &cfg()).unwrap();
    assert_eq!(a, b);
    let c = shell_sampler(&plane_sum(), &yb(&[0.0]), &sched(), 4, &cfg()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn section_probe_examples() {
    let v = bounded_section_probe(&example_41(), &yb(&[-4.0, 2.0]), &sched(), SEED, &cfg()).unwrap();
    assert_eq!(v.status, Status::HoldsEvidence);
    let v = bounded_section_probe(&plane_sum(), &yb(&[0.0]), &sched(), SEED, &cfg()).unwrap();
    assert_eq!(v.status, Status::FailsWithWitness);
    assert!(v.witness.last().unwrap().fx[0] < -1e6);
    let v = bounded_section_probe(&sin(), &yb(&[0.0]), &sched(), SEED, &cfg()).unwrap();
    assert_eq!(v.status, Status::HoldsEvidence);
    assert!(matches!(
        bounded_section_probe(&sin(), &SublevelBound::unrestricted(1), &sched(), SEED, &cfg()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn properness_probe_examples() {
    let v = properness_probe(&sin(), &yb(&[0.0]), &sched(), SEED, &cfg()).unwrap();
    assert_eq!(v.status, Status::FailsWithWitness);
    let v = properness_probe(&square(), &SublevelBound::unrestricted(1), &sched(), SEED, &cfg()).unwrap();
    assert_eq!(v.status, Status::HoldsEvidence);
    let v = properness_probe(&plane_sum(), &yb(&[0.0]), &sched(), SEED, &cfg()).unwrap();
    assert_eq!(v.status, Status::FailsWithWitness);
    let far = v.witness.last().unwrap();
    assert!(far.norm_x > 1e5 && far.fx[0].abs() <= 10.0);
}

fn near(cloud: &AsymptoticCloud, y: &[f64]) -> f64 {
    cloud.nearest(y).map_or(f64::INFINITY, |(_, d)| d)
}

#[test]
fn ps_probe_examples() {
    let c = ps_probe(&square(), &SublevelBound::unrestricted(1), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert_eq!(c.status, CloudStatus::Empty);
    let c = ps_probe(&sin(), &yb(&[0.0]), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert!(near(&c, &[-1.0]) <= 1e-3);
    let c = ps_probe(&example_41(), &SublevelBound::unrestricted(2), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert_eq!(c.status, CloudStatus::DivergentImages);
    assert!(c.accepted > 0);
}

#[test]
fn weak_ps_probe_examples() {
    let c = weak_ps_probe(&sin(), &yb(&[0.0]), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert!(near(&c, &[0.0]) > 0.9);
    assert!(near(&c, &[-1.0]) <= 1e-3);
    let c = weak_ps_probe(&line(), &yb(&[0.0]), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert!(c.is_empty());
}

#[test]
fn mtame_probe_examples() {
    let c = mtame_probe(&sin(), &yb(&[0.0]), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert!(near(&c, &[0.0]) <= 1e-3);
    let c = mtame_probe(&line(), &yb(&[0.0]), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert!(c.is_empty());
    let c = mtame_probe(&square(), &SublevelBound::unrestricted(1), &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
    assert!(c.is_empty());
}

#[test]
fn k_zero_examples() {
    let g = GridSpec::uniform(1, 0.0, 10.0, 21).unwrap();
    let c = k_zero_cloud(&example_41(), &yb(&[-4.0, 2.0]), &g, RabierMode::Full, &cfg()).unwrap();
    assert_eq!(c.candidates.len(), 1);
    assert!(dist(&c.candidates[0].y, &[-4.0, 2.0]) < 1e-6);

    let g = GridSpec::uniform(1, -5.0, 5.0, 21).unwrap();
    let c = k_zero_cloud(&square(), &SublevelBound::unrestricted(1), &g, RabierMode::Full, &cfg()).unwrap();
    assert_eq!(c.candidates.len(), 1);
    assert!(c.candidates[0].y[0].abs() < 1e-9);

    let g = GridSpec::uniform(1, -5.0, 0.0, 21).unwrap();
    let c = k_zero_cloud(&line(), &yb(&[0.0]), &g, RabierMode::Full, &cfg()).unwrap();
    assert!(c.is_empty());
}

#[test]
fn crosscheck_suite_agrees() {
    let cases = [
        (square(), yb(&[1.0]), true),
        (example_41(), yb(&[-4.0, 2.0]), true),
        (sin(), yb(&[0.0]), false),
    ];
    for (p, y, expect) in cases {
        let r = theorem31_crosscheck(&p, &y, &sched(), RabierMode::Full, SEED, &cfg()).unwrap();
        assert!(r.consistent(), "{:?}", r.flags());
        assert_eq!(r.flags()[0], expect);
    }
}

#[test]
fn crosscheck_needs_bounded_sections() {
    let err = theorem31_crosscheck(&plane_sum(), &yb(&[0.0]), &sched(), RabierMode::Full, SEED, &cfg());
    assert!(matches!(err, Err(Error::Precondition(_))));
}

#[test]
fn weak_candidates_are_ps_candidates() {
    let cases = [
        (sin(), yb(&[0.0])),
        (sin(), yb(&[0.5])),
        (square(), SublevelBound::unrestricted(1)),
        (example_41(), SublevelBound::unrestricted(2)),
        (plane_sum(), yb(&[0.0])),
    ];
    let c = cfg();
    for (p, y) in cases {
        let k = weak_ps_probe(&p, &y, &sched(), RabierMode::Full, SEED, &c).unwrap();
        let kt = ps_probe(&p, &y, &sched(), RabierMode::Full, SEED, &c).unwrap();
        for cand in &k.candidates {
            assert!(near(&kt, &cand.y) <= 2.0 * c.cluster_radius);
        }
    }
}

#[test]
fn witnesses_replay() {
    let p = sin();
    let y = yb(&[0.0]);
    let c = cfg();
    let clouds = [
        ps_probe(&p, &y, &sched(), RabierMode::Full, SEED, &c).unwrap(),
        mtame_probe(&p, &y, &sched(), RabierMode::Full, SEED, &c).unwrap(),
    ];
    for cloud in &clouds {
        for cand in &cloud.candidates {
            for rec in &cand.witness {
                assert!(p.sublevel_member(&y, &rec.x, c.sublevel_tol).unwrap());
                let fx = p.evaluate(&rec.x).unwrap();
                assert!(dist(&fx, &rec.fx) <= 1e-10);
                assert!((norm(&rec.x) - rec.norm_x).abs() <= 1e-10);
                if let Some(nu) = rec.nu {
                    let again = rabier_nu(&p, &rec.x, RabierMode::Full, c.minnorm_tol).unwrap().value;
                    assert!((again - nu).abs() <= 1e-10);
                }
                if let Some(g) = rec.gamma {
                    let again = gamma_residual(&p, &rec.x, RabierMode::Full, c.minnorm_tol).unwrap().value;
                    assert!((again - g).abs() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn probes_are_deterministic() {
    let p = sin();
    let y = yb(&[0.0]);
    let a = weak_ps_probe(&p, &y, &sched(), RabierMode::Full, 5, &cfg()).unwrap();
    let b = weak_ps_probe(&p, &y, &sched(), RabierMode::Full, 5, &cfg()).unwrap();
    assert_eq!(a, b);
}
