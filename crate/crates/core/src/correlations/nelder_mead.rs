use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct Minimum<T> {
    pub point: [T; 2],
    pub value: T,
    pub evals: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct Settings<T> {
    /// Simplex collapses once the spread of its values is below this.
    pub ftol: T,
    /// ... and its diameter is below this.
    pub xtol: T,
    /// A restart that improves the minimum by less than this ends the search.
    pub restart_tol: T,
    pub max_evals: usize,
}

impl<T: Real> Default for Settings<T> {
    fn default() -> Self {
        Self {
            ftol: T::tol(1e-15),
            xtol: T::tol(1e-10),
            restart_tol: T::tol(1e-10),
            max_evals: 4000,
        }
    }
}

/// Nelder–Mead minimization in two variables, restarted from the best
/// vertex with a fresh simplex until a restart stops paying off.
pub fn minimize<T: Real>(
    mut f: impl FnMut([T; 2]) -> T,
    start: [T; 2],
    step: [T; 2],
    settings: &Settings<T>,
) -> Minimum<T> {
    let mut evals = 0usize;
    let mut eval = |p: [T; 2], evals: &mut usize| {
        *evals += 1;
        f(p)
    };
    let mut best_point = start;
    let mut best_value = eval(start, &mut evals);
    let mut scale = T::one();
    loop {
        let s = [step[0] * scale, step[1] * scale];
        let (point, value) = run(&mut |p| eval(p, &mut evals), best_point, best_value, s, settings);
        let improvement = best_value - value;
        if value < best_value {
            best_point = point;
            best_value = value;
        }
        if !(improvement >= settings.restart_tol) || evals >= settings.max_evals {
            break;
        }
        scale *= T::lit(0.5);
    }
    Minimum {
        point: best_point,
        value: best_value,
        evals,
    }
}

fn run<T: Real>(
    f: &mut impl FnMut([T; 2]) -> T,
    start: [T; 2],
    start_value: T,
    step: [T; 2],
    settings: &Settings<T>,
) -> ([T; 2], T) {
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut simplex = [
        (start, start_value),
        ([start[0] + step[0], start[1]], T::zero()),
        ([start[0], start[1] + step[1]], T::zero()),
    ];
    simplex[1].1 = f(simplex[1].0);
    simplex[2].1 = f(simplex[2].0);
    let mut budget = settings.max_evals;

    let lerp = |a: [T; 2], b: [T; 2], t: T| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    while budget > 0 {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[2].1 - simplex[0].1;
        let diameter = (1..3)
            .map(|k| {
                let d0 = simplex[k].0[0] - simplex[0].0[0];
                let d1 = simplex[k].0[1] - simplex[0].0[1];
                d0.abs().max(d1.abs())
            })
            .fold(T::zero(), |a, b| a.max(b));
        if spread <= settings.ftol && diameter <= settings.xtol {
            break;
        }
        if diameter <= T::epsilon() * T::lit(16.0) {
            break;
        }

        let centroid = lerp(simplex[0].0, simplex[1].0, half);
        let worst = simplex[2];
        let reflected = lerp(worst.0, centroid, two);
        let fr = f(reflected);
        budget = budget.saturating_sub(1);

        if fr < simplex[0].1 {
            let expanded = lerp(worst.0, centroid, T::lit(3.0));
            let fe = f(expanded);
            budget = budget.saturating_sub(1);
            simplex[2] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflected, fr);
        } else {
            let (target, ft) = if fr < worst.1 { (reflected, fr) } else { worst };
            let contracted = lerp(centroid, target, half);
            let fc = f(contracted);
            budget = budget.saturating_sub(1);
            if fc < ft {
                simplex[2] = (contracted, fc);
            } else {
                for k in 1..3 {
                    let p = lerp(simplex[0].0, simplex[k].0, half);
                    simplex[k] = (p, f(p));
                }
                budget = budget.saturating_sub(2);
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex[0]
}
