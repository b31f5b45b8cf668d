use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use steadycorr::random::random_density_matrix;
use steadycorr::*;

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

#[test]
fn evolution_converges_across_grid() {
    let mut points = Vec::new();
    for &g1 in &grid(0.2, 2.0, 5) {
        for &x in &grid(0.5, 6.0, 5) {
            points.push((g1, 0.0, x));
            points.push((g1, g1, x));
        }
    }
    let worst = points
        .par_iter()
        .enumerate()
        .map(|(k, &(g1, g2, x))| {
            let p = ModelParams::new(g1, g2, x, 1.0).unwrap();
            let sol = steady_state(&p, None).unwrap();
            let start = random_density_matrix::<f64, _>(&mut ChaCha8Rng::seed_from_u64(k as u64));
            let traj = time_evolve(&p, &start, 50.0 / sol.spectral_gap, 1e-2, usize::MAX).unwrap();
            (traj.last().unwrap().1.trace_distance(&sol.rho), g1, g2, x)
        })
        .reduce(|| (0.0, 0.0, 0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    assert!(worst.0 <= 1e-6, "{worst:?}");
}

#[test]
fn evolved_states_stay_positive() {
    for (seed, (g1, g2, x, r)) in [(1.5, 0.0, 0.3, 1.0), (0.7, 0.7, 2.0, 0.0), (3.0, 1.0, 1.0, 1.0)]
        .into_iter()
        .enumerate()
    {
        let p = ModelParams::new(g1, g2, x, r).unwrap();
        let start = random_density_matrix::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed as u64));
        let traj = time_evolve(&p, &start, 20.0, 1e-3, 50).unwrap();
        assert!(traj.len() > 100);
        for (t, rho) in &traj {
            let lowest = *hermitian_eigen(rho.matrix()).unwrap().values.last().unwrap();
            assert!(lowest >= -1e-8, "t = {t}: eigenvalue {lowest}");
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }
}
