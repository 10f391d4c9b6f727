//! Derivative-free minimisation (Nelder–Mead simplex).

/// Nelder–Mead settings. Coefficients are the standard ones
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Stop when every vertex is within this distance of the best one...
    pub x_tol: f64,
    /// ...and the spread of simplex values is below this.
    pub f_tol: f64,
    pub max_evals: usize,
    /// Number of restarts from the best point once converged.
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            x_tol: 1e-10,
            f_tol: 1e-14,
            max_evals: 4000,
            restarts: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> Minimum {
        let mut evals = 0;
        let mut best = x0.to_vec();
        let mut best_val = f(&best);
        evals += 1;
        let mut converged = false;
        for round in 0..=self.restarts {
            let step = if round == 0 {
                self.initial_step
            } else {
                self.initial_step * 0.1
            };
            let (x, v, c) = self.run(&mut f, &best, best_val, step, &mut evals);
            let improved = v < best_val;
            if v <= best_val {
                best = x;
                best_val = v;
            }
            converged = c;
            if !c || !improved || evals >= self.max_evals {
                break;
            }
        }
        Minimum {
            x: best,
            value: best_val,
            evaluations: evals,
            converged,
        }
    }

    fn run<F: FnMut(&[f64]) -> f64>(
        &self,
        f: &mut F,
        x0: &[f64],
        f0: f64,
        step: f64,
        evals: &mut usize,
    ) -> (Vec<f64>, f64, bool) {
        let dim = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((x0.to_vec(), f0));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += step;
            let v = f(&x);
            *evals += 1;
            simplex.push((x, v));
        }

        let lerp =
            |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect() };

        loop {
            // stable order keeps runs deterministic when values tie
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[dim].1 - simplex[0].1;
            let size = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if size <= self.x_tol && spread <= self.f_tol {
                return (simplex[0].0.clone(), simplex[0].1, true);
            }
            if *evals >= self.max_evals {
                return (simplex[0].0.clone(), simplex[0].1, false);
            }

            let mut centroid = vec![0.0; dim];
            for (x, _) in &simplex[..dim] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / dim as f64;
                }
            }
            let worst = simplex[dim].clone();
            let reflected = lerp(&centroid, &worst.0, -1.0);
            let fr = f(&reflected);
            *evals += 1;

            if fr < simplex[0].1 {
                let expanded = lerp(&centroid, &worst.0, -2.0);
                let fe = f(&expanded);
                *evals += 1;
                simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
                continue;
            }
            if fr < simplex[dim - 1].1 {
                simplex[dim] = (reflected, fr);
                continue;
            }
            let (contracted, fc) = if fr < worst.1 {
                let x = lerp(&centroid, &reflected, 0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = lerp(&centroid, &worst.0, 0.5);
                let v = f(&x);
                (x, v)
            };
            *evals += 1;
            if fc < worst.1.min(fr) {
                simplex[dim] = (contracted, fc);
                continue;
            }
            // shrink towards the best vertex
            let best = simplex[0].0.clone();
            for entry in simplex.iter_mut().skip(1) {
                entry.0 = lerp(&best, &entry.0, 0.5);
                entry.1 = f(&entry.0);
                *evals += 1;
            }
        }
    }
}
