//! Bounded one-dimensional search helpers shared by the threshold and
//! covert-parameter optimizers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `rel_tol * max(|a|, |b|, 1e-300)`
/// or after `max_iter` shrink steps. Returns `(x_min, f_min)`; the interval
/// endpoints are compared as well so a monotone `f` lands on the boundary.
pub fn golden_section_min(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let fa = f(lo);
    let fb = f(hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    for _ in 0..max_iter {
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        if hi - lo <= rel_tol * scale {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }

    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fa < best.1 {
        best = (a.min(b), fa);
    }
    if fb < best.1 {
        best = (a.max(b), fb);
    }
    best
}

/// Coarse grid scan followed by golden-section refinement in the best cell.
///
/// The grid guards against `f` having more than one local minimum on the
/// interval; the refinement then only has to be locally unimodal.
pub fn grid_then_golden_min(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    grid_points: usize,
    rel_tol: f64,
) -> (f64, f64) {
    if a == b {
        return (a, f(a));
    }
    let n = grid_points.max(3);
    let xs = linspace(a, b, n);
    let (best_i, best_f) =
        xs.iter()
            .map(|&x| f(x))
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );
    let lo = xs[best_i.saturating_sub(1)];
    let hi = xs[(best_i + 1).min(n - 1)];
    let refined = golden_section_min(&f, lo, hi, rel_tol, 200);
    if refined.1 <= best_f {
        refined
    } else {
        (xs[best_i], best_f)
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
                .collect()
        }
    }
}

/// `n` logarithmically spaced points from `a` to `b` inclusive (`a, b > 0`).
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    linspace(la, lb, n)
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                l.exp()
            }
        })
        .collect()
}
