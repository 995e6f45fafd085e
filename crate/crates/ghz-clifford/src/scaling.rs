//! Finite-size-scaling data collapse.
//!
//! Curves y(x) measured at several chain lengths N are rescaled to
//! u = (x - x_c) * N^b and judged by how well points from different sizes
//! fall on one master curve. The quality function is the reduced chi-square
//! of each point against a local weighted-linear fit through the bracketing
//! points of the other sizes; 1 means statistically perfect collapse.
//! Minimization is a plain Nelder-Mead over (x_c, b) with a grid of starting
//! simplexes, and uncertainties come from refitting Gaussian resamples of
//! the input means.

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const SIGMA_FLOOR: f64 = 1e-9;
const B_RANGE: (f64, f64) = (0.05, 5.0);

/// One observable curve at a fixed chain length.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeCurve {
    pub size: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl SizeCurve {
    pub fn new(size: usize, x: Vec<f64>, y: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() != sigma.len() {
            return Err(Error::Dimension("curve arrays differ in length".into()));
        }
        if x.iter().any(|v| !v.is_finite())
            || y.iter().any(|v| !v.is_finite())
            || sigma.iter().any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(Error::DegenerateData("non-finite curve data".into()));
        }
        let mut c = SizeCurve { size, x, y, sigma };
        c.sort_by_x();
        Ok(c)
    }

    fn sort_by_x(&mut self) {
        let mut idx: Vec<usize> = (0..self.x.len()).collect();
        idx.sort_by(|&a, &b| self.x[a].total_cmp(&self.x[b]));
        self.x = idx.iter().map(|&i| self.x[i]).collect();
        self.y = idx.iter().map(|&i| self.y[i]).collect();
        self.sigma = idx.iter().map(|&i| self.sigma[i]).collect();
    }

    fn restricted(&self, window: (f64, f64)) -> SizeCurve {
        let keep: Vec<usize> = (0..self.x.len())
            .filter(|&i| self.x[i] >= window.0 && self.x[i] <= window.1)
            .collect();
        SizeCurve {
            size: self.size,
            x: keep.iter().map(|&i| self.x[i]).collect(),
            y: keep.iter().map(|&i| self.y[i]).collect(),
            sigma: keep.iter().map(|&i| self.sigma[i]).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalingCurveSet {
    pub curves: Vec<SizeCurve>,
}

impl ScalingCurveSet {
    pub fn new(curves: Vec<SizeCurve>) -> Result<Self> {
        let mut sizes: Vec<usize> = curves.iter().map(|c| c.size).collect();
        sizes.sort_unstable();
        sizes.dedup();
        if sizes.len() != curves.len() {
            return Err(Error::DegenerateData("duplicate sizes in curve set".into()));
        }
        Ok(ScalingCurveSet { curves })
    }

    pub fn x_range(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in &self.curves {
            for &x in &c.x {
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CollapseOptions {
    /// Pin the critical value and fit only the exponent.
    pub fix_critical: Option<f64>,
    /// Restrict the fit to x inside this window.
    pub window: Option<(f64, f64)>,
    /// Gaussian resamples for the uncertainty estimate.
    pub n_bootstrap: usize,
    pub seed: u64,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        CollapseOptions {
            fix_critical: None,
            window: None,
            n_bootstrap: 100,
            seed: 0x5ca1ab1e,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CollapseFit {
    pub critical_value: f64,
    /// The power b in u = (x - x_c) * N^b, i.e. the inverse of the
    /// correlation-length exponent.
    pub inv_exponent: f64,
    /// Reduced chi-square of the collapse; near 1 for a good fit.
    pub quality: f64,
    pub critical_uncertainty: f64,
    pub inv_exponent_uncertainty: f64,
    /// Effective x window that contributed points.
    pub window: (f64, f64),
    pub n_points: usize,
}

impl CollapseFit {
    pub fn exponent(&self) -> f64 {
        1.0 / self.inv_exponent
    }
}

/// Collapse quality at (x_c, b): mean squared deviation of every point from
/// the local master-curve estimate built from the other sizes, in units of
/// the combined variances. Returns the count of points that had a usable
/// estimate.
pub fn collapse_quality(curves: &[SizeCurve], x_c: f64, b: f64) -> (f64, usize) {
    let us: Vec<Vec<f64>> = curves
        .iter()
        .map(|c| {
            let scale = (c.size as f64).powf(b);
            c.x.iter().map(|&x| (x - x_c) * scale).collect()
        })
        .collect();
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..curves.len() {
        for j in 0..curves[i].x.len() {
            let u = us[i][j];
            let mut k_w = 0.0;
            let mut k_x = 0.0;
            let mut k_y = 0.0;
            let mut k_xx = 0.0;
            let mut k_xy = 0.0;
            let mut n_pts = 0usize;
            for i2 in 0..curves.len() {
                if i2 == i {
                    continue;
                }
                let u2 = &us[i2];
                if u2.len() < 2 || u < u2[0] || u > u2[u2.len() - 1] {
                    continue;
                }
                let hi = u2.partition_point(|&v| v < u).min(u2.len() - 1).max(1);
                for k in [hi - 1, hi] {
                    let w = 1.0 / curves[i2].sigma[k].max(SIGMA_FLOOR).powi(2);
                    let (ux, uy) = (u2[k], curves[i2].y[k]);
                    k_w += w;
                    k_x += w * ux;
                    k_y += w * uy;
                    k_xx += w * ux * ux;
                    k_xy += w * ux * uy;
                    n_pts += 1;
                }
            }
            if n_pts < 2 {
                continue;
            }
            let delta = k_w * k_xx - k_x * k_x;
            if delta.abs() < 1e-30 {
                continue;
            }
            let slope = (k_w * k_xy - k_x * k_y) / delta;
            let inter = (k_xx * k_y - k_x * k_xy) / delta;
            let y_hat = slope * u + inter;
            let var_hat = (k_xx - 2.0 * u * k_x + u * u * k_w) / delta;
            let var = curves[i].sigma[j].max(SIGMA_FLOOR).powi(2) + var_hat.max(0.0);
            sum += (curves[i].y[j] - y_hat).powi(2) / var;
            count += 1;
        }
    }
    if count == 0 {
        (f64::INFINITY, 0)
    } else {
        (sum / count as f64, count)
    }
}

/// Plain Nelder-Mead in 1 or 2 dimensions.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: &[f64],
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f(start)));
    for d in 0..n {
        let mut p = start.to_vec();
        p[d] += step[d];
        let v = f(&p);
        simplex.push((p, v));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread: f64 = (0..n)
            .map(|d| {
                let vals: Vec<f64> = simplex.iter().map(|(p, _)| p[d]).collect();
                vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - vals.iter().cloned().fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let f_spread = simplex[n].1 - simplex[0].1;
        if spread < 1e-5 && (f_spread.abs() < 1e-8 || !f_spread.is_finite()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|(p, _)| p[d]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let combine = |a: &[f64], t: f64| -> Vec<f64> {
            (0..n)
                .map(|d| centroid[d] + t * (a[d] - centroid[d]))
                .collect()
        };
        let refl = combine(&worst.0, -1.0);
        let f_refl = f(&refl);
        if f_refl < simplex[0].1 {
            let exp = combine(&worst.0, -2.0);
            let f_exp = f(&exp);
            simplex[n] = if f_exp < f_refl {
                (exp, f_exp)
            } else {
                (refl, f_refl)
            };
        } else if f_refl < simplex[n - 1].1 {
            simplex[n] = (refl, f_refl);
        } else {
            let contr = if f_refl < worst.1 {
                combine(&refl, 0.5)
            } else {
                combine(&worst.0, 0.5)
            };
            let f_contr = f(&contr);
            if f_contr < worst.1.min(f_refl) {
                simplex[n] = (contr, f_contr);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let p: Vec<f64> = (0..n)
                        .map(|d| best[d] + 0.5 * (item.0[d] - best[d]))
                        .collect();
                    item.1 = f(&p);
                    item.0 = p;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

fn prepare(set: &ScalingCurveSet, opts: &CollapseOptions) -> Result<Vec<SizeCurve>> {
    if set.curves.len() < 2 {
        return Err(Error::InsufficientData(
            "collapse needs curves for at least two sizes".into(),
        ));
    }
    let curves: Vec<SizeCurve> = match opts.window {
        Some(w) => set.curves.iter().map(|c| c.restricted(w)).collect(),
        None => set.curves.clone(),
    };
    for c in &curves {
        if c.x.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "size {} has {} points in the fit window, need 3",
                c.size,
                c.x.len()
            )));
        }
    }
    Ok(curves)
}

fn fit_once(
    curves: &[SizeCurve],
    opts: &CollapseOptions,
    x_bounds: (f64, f64),
    starts: &[Vec<f64>],
    step: &[f64],
) -> (Vec<f64>, f64) {
    let objective = |params: &[f64]| -> f64 {
        let (x_c, b) = match opts.fix_critical {
            Some(xc) => (xc, params[0]),
            None => (params[0], params[1]),
        };
        if !(B_RANGE.0..=B_RANGE.1).contains(&b) {
            return f64::INFINITY;
        }
        if !(x_bounds.0..=x_bounds.1).contains(&x_c) {
            return f64::INFINITY;
        }
        collapse_quality(curves, x_c, b).0
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in starts {
        let (p, v) = nelder_mead(objective, s, step, 400);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((p, v));
        }
    }
    best.unwrap()
}

/// Fits the collapse. With `fix_critical` only the exponent varies; otherwise
/// both the critical value and the exponent are free.
pub fn collapse(set: &ScalingCurveSet, opts: &CollapseOptions) -> Result<CollapseFit> {
    let curves = prepare(set, opts)?;
    let (xlo, xhi) = ScalingCurveSet {
        curves: curves.clone(),
    }
    .x_range()
    .ok_or_else(|| Error::InsufficientData("empty curves".into()))?;
    let margin = 0.2 * (xhi - xlo).max(f64::MIN_POSITIVE);
    let x_bounds = (xlo - margin, xhi + margin);

    let b_starts = [0.3, 0.6, 1.0, 1.6, 2.5];
    let (starts, step): (Vec<Vec<f64>>, Vec<f64>) = match opts.fix_critical {
        Some(_) => (b_starts.iter().map(|&b| vec![b]).collect(), vec![0.15]),
        None => {
            let mut s = Vec::new();
            for i in 1..=5 {
                let xc = xlo + (xhi - xlo) * i as f64 / 6.0;
                for &b in &b_starts {
                    s.push(vec![xc, b]);
                }
            }
            (s, vec![0.05 * (xhi - xlo), 0.15])
        }
    };

    let (params, q) = fit_once(&curves, opts, x_bounds, &starts, &step);
    if !q.is_finite() {
        return Err(Error::DegenerateData(
            "no overlapping points under any trial rescaling".into(),
        ));
    }
    let (x_c, b) = match opts.fix_critical {
        Some(xc) => (xc, params[0]),
        None => (params[0], params[1]),
    };
    let (_, n_points) = collapse_quality(&curves, x_c, b);

    // parametric bootstrap: refit Gaussian resamples from the central optimum
    let mut xc_samples = Vec::with_capacity(opts.n_bootstrap);
    let mut b_samples = Vec::with_capacity(opts.n_bootstrap);
    if opts.n_bootstrap > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        for _ in 0..opts.n_bootstrap {
            let resampled: Vec<SizeCurve> = curves
                .iter()
                .map(|c| {
                    let y =
                        c.y.iter()
                            .zip(&c.sigma)
                            .map(|(&y, &s)| y + s * normal.sample(&mut rng))
                            .collect();
                    SizeCurve {
                        size: c.size,
                        x: c.x.clone(),
                        y,
                        sigma: c.sigma.clone(),
                    }
                })
                .collect();
            let (p, v) = fit_once(&resampled, opts, x_bounds, &[params.clone()], &step);
            if !v.is_finite() {
                continue;
            }
            match opts.fix_critical {
                Some(_) => b_samples.push(p[0]),
                None => {
                    xc_samples.push(p[0]);
                    b_samples.push(p[1]);
                }
            }
        }
    }
    let std = |v: &[f64]| -> f64 {
        if v.len() < 2 {
            return 0.0;
        }
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
    };

    Ok(CollapseFit {
        critical_value: x_c,
        inv_exponent: b,
        quality: q,
        critical_uncertainty: std(&xc_samples),
        inv_exponent_uncertainty: std(&b_samples),
        window: (xlo, xhi),
        n_points,
    })
}

/// Crude critical-point estimate: the average location where curves of
/// different sizes cross, found by linear interpolation on shared x values.
pub fn crossing_estimate(set: &ScalingCurveSet) -> Option<f64> {
    let mut crossings = Vec::new();
    for i in 0..set.curves.len() {
        for j in i + 1..set.curves.len() {
            let (a, b) = (&set.curves[i], &set.curves[j]);
            let shared: Vec<(f64, f64)> =
                a.x.iter()
                    .zip(&a.y)
                    .filter_map(|(&x, &ya)| {
                        b.x.iter()
                            .position(|&xb| (xb - x).abs() < 1e-12)
                            .map(|k| (x, ya - b.y[k]))
                    })
                    .collect();
            for w in shared.windows(2) {
                let (x0, d0) = w[0];
                let (x1, d1) = w[1];
                if d0 == 0.0 {
                    crossings.push(x0);
                } else if d0 * d1 < 0.0 {
                    crossings.push(x0 + d0 / (d0 - d1) * (x1 - x0));
                }
            }
        }
    }
    if crossings.is_empty() {
        None
    } else {
        Some(crossings.iter().sum::<f64>() / crossings.len() as f64)
    }
}

/// Least-squares line fit returning (slope, intercept, r_squared).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientData(
            "line fit needs two or more paired points".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx < 1e-30 {
        return Err(Error::DegenerateData("all x values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let r2 = if ss_tot < 1e-30 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok((slope, intercept, r2))
}
