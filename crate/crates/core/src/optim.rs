//! Derivative-free Nelder-Mead simplex minimisation.

/// Simplex search settings.
#[derive(Debug, Clone)]
pub struct NelderMead {
    pub max_iterations: usize,
    /// Stop once `f(worst) - f(best)` across the simplex falls below this.
    pub f_tolerance: f64,
    /// Restart from the best vertex after convergence, up to this many times,
    /// while the restart keeps improving the objective.
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            f_tolerance: 1e-8,
            restarts: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    /// Minimises `f` starting from `x0`; the initial simplex offsets coordinate `i` by `steps[i]`.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64], steps: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        assert_eq!(x0.len(), steps.len());
        let mut evaluations = 0;
        let mut eval = |x: &[f64]| {
            evaluations += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        if x0.is_empty() {
            let f0 = eval(x0);
            return Minimum {
                x: vec![],
                f: f0,
                iterations: 0,
                evaluations,
                converged: true,
            };
        }

        let mut best = (x0.to_vec(), eval(x0));
        let mut iterations = 0;
        let mut converged = false;
        for round in 0..=self.restarts {
            let budget = self.max_iterations.saturating_sub(iterations);
            if budget == 0 {
                break;
            }
            let (x, fx, used, ok) = self.run(&mut eval, &best.0, best.1, steps, budget);
            iterations += used;
            let improved = fx < best.1 - self.f_tolerance;
            if fx <= best.1 {
                best = (x, fx);
            }
            converged = ok;
            if !ok || (round > 0 && !improved) {
                break;
            }
        }

        Minimum {
            x: best.0,
            f: best.1,
            iterations,
            evaluations,
            converged,
        }
    }

    fn run<F>(
        &self,
        eval: &mut F,
        x0: &[f64],
        f0: f64,
        steps: &[f64],
        budget: usize,
    ) -> (Vec<f64>, f64, usize, bool)
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), f0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += steps[i];
            let fx = eval(&x);
            simplex.push((x, fx));
        }

        let mut iterations = 0;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if spread.is_finite() && spread < self.f_tolerance {
                return (simplex[0].0.clone(), simplex[0].1, iterations, true);
            }
            if iterations >= budget {
                return (simplex[0].0.clone(), simplex[0].1, iterations, false);
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..n)
                .map(|j| simplex[..n].iter().map(|v| v.0[j]).sum::<f64>() / n as f64)
                .collect();
            let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, w)| c + coef * (c - w))
                    .collect()
            };

            let worst = simplex[n].0.clone();
            let reflected = toward(REFLECT, &worst);
            let fr = eval(&reflected);

            if fr < simplex[0].1 {
                let expanded = toward(EXPAND, &worst);
                let fe = eval(&expanded);
                simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
                continue;
            }

            // outside contraction if the reflection helped at all, inside otherwise
            let contracted = if fr < simplex[n].1 {
                toward(CONTRACT, &worst)
            } else {
                toward(-CONTRACT, &worst)
            };
            let fc = eval(&contracted);
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (contracted, fc);
                continue;
            }

            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(b, v)| b + SHRINK * (v - b))
                    .collect();
                let fx = eval(&x);
                *vertex = (x, fx);
            }
        }
    }
}
