//! Box-bounded Nelder–Mead with dimension-adaptive coefficients (Gao and
//! Han). Trial points are clamped into the box, so the objective is never
//! evaluated outside it.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmOptions {
    pub max_evals: usize,
    /// Converged once the spread of simplex values drops below this.
    pub f_tol: f64,
    /// Initial step as a fraction of each bound width.
    pub initial_step: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions { max_evals: 2000, f_tol: 1e-8, initial_step: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

fn clamp_into(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Minimise `f` from `x0` inside `bounds`.
pub fn minimize<F>(mut f: F, x0: &[f64], bounds: &[(f64, f64)], opts: &NmOptions) -> Result<NmResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    if n == 0 || bounds.len() != n {
        return Err(Error::invalid("one bound pair per parameter is required"));
    }
    if bounds.iter().any(|&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi)) {
        return Err(Error::invalid("bounds must be finite with lo < hi"));
    }
    if x0.iter().zip(bounds).any(|(v, &(lo, hi))| !(*v >= lo && *v <= hi)) {
        return Err(Error::invalid("starting point lies outside the bounds"));
    }
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| -> Result<f64> {
        *evals += 1;
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::Convergence(format!("objective is not finite at {x:?}")));
        }
        Ok(v)
    };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let (lo, hi) = bounds[i];
        let step = opts.initial_step * (hi - lo);
        let mut v = x0.to_vec();
        // Step away from the nearer bound.
        v[i] = if x0[i] + step <= hi { x0[i] + step } else { x0[i] - step };
        simplex.push(v);
    }
    let mut values = Vec::with_capacity(n + 1);
    for v in &simplex {
        values.push(eval(v, &mut evals)?);
    }

    let nf = n as f64;
    let (expand, contract, shrink) = (1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);
    let mut converged = false;
    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        if values[n] - values[0] <= opts.f_tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = (0..n).map(|j| centroid[j] + t * (simplex[n][j] - centroid[j])).collect();
            clamp_into(&mut p, bounds);
            p
        };
        let xr = along(-1.0);
        let fr = eval(&xr, &mut evals)?;
        if fr < values[0] {
            let xe = along(-expand);
            let fe = eval(&xe, &mut evals)?;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(-contract);
            let fc = eval(&xc, &mut evals)?;
            (xc, fc)
        } else {
            let xc = along(contract);
            let fc = eval(&xc, &mut evals)?;
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for i in 1..=n {
            let shrunk: Vec<f64> = (0..n).map(|j| simplex[0][j] + shrink * (simplex[i][j] - simplex[0][j])).collect();
            values[i] = eval(&shrunk, &mut evals)?;
            simplex[i] = shrunk;
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("non-empty simplex");
    Ok(NmResult { x: simplex[best].clone(), f: values[best], evals, converged })
}
