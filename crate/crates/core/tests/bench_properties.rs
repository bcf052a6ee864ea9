use std::path::{Path, PathBuf};

use meshless_claw::bench::{errors, eval_at, exact_burgers_corner, load_reference_grid, GridField, Problem, ProblemId};
use meshless_claw::cli::RunConfig;
use meshless_claw::geometry::{generate_nodes, Domain, Face, NodeCloud, NodeKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn initial(x: f64, y: f64) -> f64 {
    match (x < 0.5, y < 0.5) {
        (true, false) => -0.2,
        (false, false) => -1.0,
        (true, true) => 0.5,
        (false, true) => 0.8,
    }
}

/// Height at which the solution turns negative along the vertical line
/// through `x`, by bisection.
fn shock_height(t: f64, x: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    assert!(exact_burgers_corner(t, &[x, lo]) > 0.0 && exact_burgers_corner(t, &[x, hi]) < 0.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if exact_burgers_corner(t, &[x, mid]) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn shock_curve_is_continuous_across_pieces() {
    for t in [0.05, 0.2, 0.35, 0.5] {
        let breaks = [0.5 - 0.6 * t, 0.5 - 0.25 * t, 0.5 + 0.5 * t, 0.5 + 0.8 * t];
        for x in breaks {
            let left = shock_height(t, x - 1e-10);
            let right = shock_height(t, x + 1e-10);
            assert!((left - right).abs() < 1e-8, "t={t} x={x}: {left} vs {right}");
        }
    }
}

#[test]
fn constant_states_follow_characteristics() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..4000 {
        let t = rng.gen_range(0.05..0.5);
        let (x, y) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let u = exact_burgers_corner(t, &[x, y]);
        // stay clear of shocks
        let eps = 2e-3;
        let near = [[eps, 0.0], [-eps, 0.0], [0.0, eps], [0.0, -eps]];
        if near.iter().any(|d| exact_burgers_corner(t, &[x + d[0], y + d[1]]).signum() != u.signum()) {
            continue;
        }
        let (x0, y0) = (x - u * t, y - u * t);
        if !(0.0..=1.0).contains(&x0) || !(0.0..=1.0).contains(&y0) {
            continue;
        }
        if u > 0.5 && u < 0.8 {
            // inside the fan every characteristic starts on the jump at x = 0.5
            assert!((x0 - 0.5).abs() < 1e-12 && y0 < 0.5, "fan at ({x}, {y}, {t})");
        } else {
            if (x0 - 0.5).abs() < 1e-9 || (y0 - 0.5).abs() < 1e-9 {
                continue;
            }
            assert_eq!(initial(x0, y0), u, "({x}, {y}, {t})");
        }
        checked += 1;
    }
    assert!(checked > 2000, "{checked}");
}

#[test]
fn small_times_reproduce_the_initial_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    while count < 100 {
        let (x, y) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        if (x - 0.5f64).abs() < 1e-3 || (y - 0.5f64).abs() < 1e-3 {
            continue;
        }
        assert_eq!(exact_burgers_corner(1e-6, &[x, y]), initial(x, y), "({x}, {y})");
        count += 1;
    }
}

fn unit_cloud(h: f64) -> NodeCloud {
    let dom = Domain::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let faces = [Face::lower(0), Face::upper(0), Face::lower(1), Face::upper(1)];
    NodeCloud::new(generate_nodes(NodeKind::Halton, h, &dom, None, &faces).unwrap(), 12).unwrap()
}

#[test]
fn sampling_error_is_second_order() {
    let f = |p: &[f64]| p[0] * p[0] + p[0] * p[1];
    let line: Vec<Vec<f64>> = (0..200).map(|k| vec![0.1 + 0.8 * k as f64 / 199.0, 0.37]).collect();
    let max_error = |h: f64| {
        let cloud = unit_cloud(h);
        let values: Vec<f64> = cloud.nodes.points().map(f).collect();
        let got = eval_at(&line, &values, &cloud, 10).unwrap();
        got.iter().zip(&line).map(|(g, p)| (g - f(p)).abs()).fold(0.0, f64::max)
    };
    let (coarse, fine) = (max_error(0.04), max_error(0.02));
    assert!(coarse / fine >= 3.0, "{coarse:e} / {fine:e}");
}

#[test]
fn sampling_reproduces_affine_fields() {
    let cloud = unit_cloud(0.05);
    let f = |p: &[f64]| 0.3 - 2.0 * p[0] + 0.7 * p[1];
    let values: Vec<f64> = cloud.nodes.points().map(f).collect();
    let points: Vec<Vec<f64>> = (0..50).map(|k| vec![k as f64 / 49.0, (k * 7 % 50) as f64 / 49.0]).collect();
    for (g, p) in eval_at(&points, &values, &cloud, 10).unwrap().iter().zip(&points) {
        assert!((g - f(p)).abs() < 1e-12);
    }
}

#[test]
fn sample_reference_grid_loads() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/sample_grid.csv");
    let g = load_reference_grid(&path).unwrap();
    assert_eq!((g.nx, g.ny), (20, 20));
    assert_eq!(g.bounds(), [0.0, 1.0, 0.0, 1.0]);
    for p in [[0.0, 0.0], [0.33, 0.71], [1.0, 1.0], [0.999, 0.001]] {
        let want = p[0] + 2.0 * p[1] - 0.5;
        assert!((g.interp(&p).unwrap() - want).abs() < 1e-12);
    }
    assert!(g.interp(&[1.1, 0.5]).is_err());
}

#[test]
fn benchmark_problems_have_consistent_defaults() {
    for id in ProblemId::ALL {
        let p = Problem::new(id);
        let cfg = RunConfig::parse(Path::new("cfg"), &format!("problem = {}", id.name())).unwrap();
        assert_eq!(cfg.h, p.default_h);
        assert_eq!(cfg.t_final, p.default_t);
        assert_eq!(cfg.steps() as f64 * cfg.dt, cfg.t_final);
    }
}

proptest! {
    #[test]
    fn mean_error_never_exceeds_rms(pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..200)) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let r = errors(&a, &b).unwrap();
        prop_assert!(r.e1 <= r.e2);
        prop_assert!(r.e1 >= 0.0);
        prop_assert_eq!(errors(&a, &a).unwrap().e2, 0.0);
    }

    #[test]
    fn grid_interpolation_is_exact_on_linear_data(
        nx in 2usize..30, ny in 2usize..30,
        c in prop::array::uniform3(-5.0f64..5.0),
        lo in prop::array::uniform2(-3.0f64..3.0),
        size in prop::array::uniform2(0.1f64..4.0),
        s in prop::array::uniform2(0.0f64..=1.0),
    ) {
        let b = [lo[0], lo[0] + size[0], lo[1], lo[1] + size[1]];
        let f = |x: f64, y: f64| c[0] + c[1] * x + c[2] * y;
        let g = GridField::from_fn(nx, ny, b, f).unwrap();
        let (x, y) = (b[0] + s[0] * size[0], b[2] + s[1] * size[1]);
        let scale = 1.0 + c.iter().map(|v| v.abs()).sum::<f64>() * 10.0;
        prop_assert!((g.interp(&[x, y]).unwrap() - f(x, y)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn configs_round_trip_through_text(
        problem in 0usize..3,
        algorithm in 1u8..4,
        kind in 0usize..3,
        h_steps in 1usize..5,
        k in 1usize..6,
        n_min in 6usize..20,
        extra in 0usize..50,
        c in prop::array::uniform3(0.5f64..6.0),
        seed in any::<u64>(),
        snapshot in 0usize..10,
    ) {
        let id = ProblemId::ALL[problem];
        let kinds = ["grid", "halton", "random"];
        let h = 0.01 * h_steps as f64;
        let dt = 1.0 / 512.0;
        let text = format!(
            "problem = {}\nalgorithm = {algorithm}\nnode_kind = {}\nh = {h}\nT = {}\ndt = {dt}\n\
             n_min = {n_min}\nn_max = {}\nn_F = {n_min}\nC1 = {}\nC2 = {}\nC3 = {}\nseed = {seed}\n\
             output_dir = runs/out dir\nreference = ref.csv\nsnapshot_every = {snapshot}\n",
            id.name(), kinds[kind], k as f64 * 0.125, n_min + extra, c[0], c[1], c[2],
        );
        let cfg = RunConfig::parse(Path::new("a.cfg"), &text).unwrap();
        prop_assert_eq!(cfg.steps(), k * 64);
        prop_assert_eq!(&cfg.output_dir, &PathBuf::from("runs/out dir"));
        let again = RunConfig::parse(Path::new("b.cfg"), &cfg.to_text()).unwrap();
        prop_assert_eq!(cfg, again);
    }
}
