//! Nelder-Mead simplex minimizer for small unconstrained problems.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Converged once every vertex is within this distance of the best one...
    pub x_tol: f64,
    /// ...and the objective spread across vertices is below this.
    pub f_tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-4,
            f_tol: 1e-6,
            max_iter: 5_000,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `start`. Non-finite objective values are treated as `+inf`.
pub fn minimize<F>(mut f: F, start: &[f64], opts: SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    verts.push(start.to_vec());
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += opts.initial_step;
        verts.push(v);
    }
    let mut vals: Vec<f64> = verts.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        // stable sort keeps the outcome deterministic under ties
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        verts = order.iter().map(|&i| verts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let diameter = verts[1..]
            .iter()
            .map(|v| dist(v, &verts[0]))
            .fold(0.0, f64::max);
        let spread = vals[dim] - vals[0];
        if diameter < opts.x_tol && spread.abs() < opts.f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| verts[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&verts[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = eval(&xr);
        if fr < vals[0] {
            let xe = along(EXPAND);
            let fe = eval(&xe);
            if fe < fr {
                verts[dim] = xe;
                vals[dim] = fe;
            } else {
                verts[dim] = xr;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            verts[dim] = xr;
            vals[dim] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[dim] {
            let xc = along(REFLECT * CONTRACT);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-CONTRACT);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < vals[dim].min(fr) {
            verts[dim] = xc;
            vals[dim] = fc;
            continue;
        }
        let best = verts[0].clone();
        for i in 1..=dim {
            let v: Vec<f64> = best
                .iter()
                .zip(&verts[i])
                .map(|(b, x)| b + SHRINK * (x - b))
                .collect();
            vals[i] = eval(&v);
            verts[i] = v;
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    SimplexResult {
        x: verts[best].clone(),
        value: vals[best],
        iterations,
        converged,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let opts = SimplexOptions {
            x_tol: 1e-8,
            f_tol: 1e-12,
            ..Default::default()
        };
        let r = minimize(f, &[-1.2, 1.0], opts);
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn nonsmooth_max_of_lines() {
        let f = |p: &[f64]| (p[0] - 2.0).abs().max((p[1] + 1.0).abs());
        let r = minimize(f, &[0.0, 0.0], SimplexOptions::default());
        assert!(r.value < 1e-4);
    }

    #[test]
    fn infinite_region_is_avoided() {
        let f = |p: &[f64]| {
            if p[0] < 0.0 {
                f64::NAN
            } else {
                (p[0] - 0.5).powi(2)
            }
        };
        let r = minimize(f, &[0.05], SimplexOptions::default());
        assert!((r.x[0] - 0.5).abs() < 1e-3);
    }
}
