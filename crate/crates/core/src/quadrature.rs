//! Adaptive Gauss-Kronrod (7, 15) quadrature for small vector integrands.

use alloc::vec::Vec;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_DEPTH: u32 = 40;
/// Cap on accepted plus split intervals; past it, intervals are accepted
/// as they are. Guards against integrands whose rounding noise exceeds the
/// tolerance.
const MAX_INTERVALS: usize = 20_000;

/// ∫ₐᵇ f(t) dt for an `N`-component integrand, to
/// `max(abs_tol, rel_tol·|∫|)` per component.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    if a == b {
        return [0.0; N];
    }
    let (whole, err) = gk15(&f, a, b);
    let scale: [f64; N] = core::array::from_fn(|k| whole[k].abs());
    if within(&err, &scale, rel_tol, abs_tol) {
        return whole;
    }
    let mut total = [0.0; N];
    // Explicit stack of pending intervals; each is split until its own
    // error is acceptable relative to the global magnitude estimate.
    let mut stack: Vec<(f64, f64, u32)> = alloc::vec![(a, b, 0)];
    let width = (b - a).abs();
    let mut visited = 0;
    while let Some((lo, hi, depth)) = stack.pop() {
        visited += 1;
        let (val, err) = gk15(&f, lo, hi);
        let share = (hi - lo).abs() / width;
        let ok = (0..N).all(|k| err[k] <= share * abs_tol.max(rel_tol * scale[k]).max(f64::MIN_POSITIVE));
        if ok || depth >= MAX_DEPTH || visited > MAX_INTERVALS {
            for k in 0..N {
                total[k] += val[k];
            }
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    total
}

fn within<const N: usize>(err: &[f64; N], scale: &[f64; N], rel: f64, abs: f64) -> bool {
    (0..N).all(|k| err[k] <= abs.max(rel * scale[k]))
}

fn gk15<const N: usize, F>(f: &F, a: f64, b: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64) -> [f64; N],
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod: [f64; N] = core::array::from_fn(|k| fc[k] * WGK[7]);
    let mut gauss: [f64; N] = core::array::from_fn(|k| fc[k] * WG[3]);
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(centre - half * x);
        let f2 = f(centre + half * x);
        for k in 0..N {
            let s = f1[k] + f2[k];
            kronrod[k] += w * s;
            if i % 2 == 1 {
                gauss[k] += WG[i / 2] * s;
            }
        }
    }
    let value: [f64; N] = core::array::from_fn(|k| kronrod[k] * half);
    let err: [f64; N] = core::array::from_fn(|k| ((kronrod[k] - gauss[k]) * half).abs());
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let [v] = integrate(|t| [t.powi(5) - 3.0 * t * t], -1.0, 2.0, 1e-14, 0.0);
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand_converges() {
        let [v, w] = integrate(|t| [(10.0 * t).sin(), (-t).exp()], 0.0, 7.0, 1e-12, 0.0);
        assert!((v - (1.0 - 70f64.cos()) / 10.0).abs() < 1e-12);
        assert!((w - (1.0 - (-7f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let [v] = integrate(|t| [t.cos()], 1.0, 0.0, 1e-12, 0.0);
        assert!((v + 1f64.sin()).abs() < 1e-13);
    }
}
