use super::OptError;

/// Simplex coefficients: reflection, expansion, contraction, shrink.
const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

/// Per-coordinate offset of the initial simplex vertices from `x0`.
pub const INITIAL_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Maximizes `f` by the Nelder–Mead simplex method started at `x0`.
///
/// Stops once the spread of simplex values drops below `tol` or after
/// `max_evals` evaluations (a shrink step may finish past the budget).
/// A collapsed simplex can stall away from the optimum, so on convergence
/// the simplex is rebuilt around the best vertex; the search ends when a
/// rebuilt simplex converges without improving the best value by `tol`.
pub fn nelder_mead<F>(f: &mut F, x0: &[f64], tol: f64, max_evals: usize) -> Result<LocalResult, OptError>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    if dim == 0 {
        return Err(OptError::EmptyDomain);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(OptError::BadTolerance(tol));
    }
    let mut evals = 0usize;
    // internally minimize h = -f
    let mut h = |x: &[f64], evals: &mut usize| -> Result<f64, OptError> {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            Ok(-v)
        } else {
            Err(OptError::NonFinite { x: x.to_vec(), value: v })
        }
    };

    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec(); dim + 1];
    let mut vals = vec![0.0; dim + 1];
    vals[0] = h(x0, &mut evals)?;
    rebuild(&mut pts, &mut vals, 0, &mut |x| h(x, &mut evals))?;
    let mut checkpoint = f64::INFINITY;

    let mut centroid = vec![0.0; dim];
    let mut xr = vec![0.0; dim];
    let mut xe = vec![0.0; dim];
    let mut xc = vec![0.0; dim];
    let mut order: Vec<usize> = (0..=dim).collect();
    let converged = loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let (best, worst, second) = (order[0], order[dim], order[dim - 1]);
        if vals[worst] - vals[best] < tol {
            if checkpoint - vals[best] < tol {
                break true;
            }
            checkpoint = vals[best];
            rebuild(&mut pts, &mut vals, best, &mut |x| h(x, &mut evals))?;
            continue;
        }
        if evals >= max_evals {
            break false;
        }

        centroid.fill(0.0);
        for &i in &order[..dim] {
            for (c, &x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        along(&mut xr, &centroid, &pts[worst], ALPHA);
        let hr = h(&xr, &mut evals)?;
        if hr < vals[best] {
            along(&mut xe, &centroid, &pts[worst], GAMMA);
            let he = h(&xe, &mut evals)?;
            if he < hr {
                pts[worst].copy_from_slice(&xe);
                vals[worst] = he;
            } else {
                pts[worst].copy_from_slice(&xr);
                vals[worst] = hr;
            }
            continue;
        }
        if hr < vals[second] {
            pts[worst].copy_from_slice(&xr);
            vals[worst] = hr;
            continue;
        }
        let (hc, accepted) = if hr < vals[worst] {
            along(&mut xc, &centroid, &pts[worst], RHO * ALPHA);
            let hc = h(&xc, &mut evals)?;
            (hc, hc <= hr)
        } else {
            along(&mut xc, &centroid, &pts[worst], -RHO);
            let hc = h(&xc, &mut evals)?;
            (hc, hc < vals[worst])
        };
        if accepted {
            pts[worst].copy_from_slice(&xc);
            vals[worst] = hc;
            continue;
        }
        let anchor = pts[best].clone();
        for &i in &order[1..] {
            for (x, &a) in pts[i].iter_mut().zip(&anchor) {
                *x = a + SIGMA * (*x - a);
            }
            vals[i] = h(&pts[i], &mut evals)?;
        }
    };

    let best = (0..=dim).min_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b))).expect("simplex is nonempty");
    Ok(LocalResult { x: pts[best].clone(), value: -vals[best], evaluations: evals, converged })
}

/// Replaces every vertex but `keep` by `pts[keep]` plus a step along one axis.
fn rebuild<H>(pts: &mut [Vec<f64>], vals: &mut [f64], keep: usize, h: &mut H) -> Result<(), OptError>
where
    H: FnMut(&[f64]) -> Result<f64, OptError>,
{
    let anchor = pts[keep].clone();
    let (anchor_val, dim) = (vals[keep], anchor.len());
    pts.swap(0, keep);
    vals.swap(0, keep);
    for i in 0..dim {
        let x = &mut pts[i + 1];
        x.copy_from_slice(&anchor);
        x[i] += INITIAL_STEP;
        vals[i + 1] = h(x)?;
    }
    debug_assert_eq!(vals[0], anchor_val);
    Ok(())
}

/// `out = c + t (c − w)`.
fn along(out: &mut [f64], c: &[f64], w: &[f64], t: f64) {
    for ((o, &ci), &wi) in out.iter_mut().zip(c).zip(w) {
        *o = ci + t * (ci - wi);
    }
}
