//! The scalar functions behind the closed-form bounds.
//!
//! * `phi(a) = 1 - (2/a) atan(a/2)`
//! * `psi(a) = (1/a) ln((sqrt(a^2+4) + a)/(sqrt(a^2+4) - a)) = (2/a) asinh(a/2)`
//! * `upsilon(a) = (1/2pi) int_0^{2pi} (a - cos x)/sqrt(1 - 2a cos x + a^2) dx`
//!
//! `upsilon` has no elementary closed form and is evaluated by adaptive
//! Gauss-Legendre quadrature. Differences such as `1 - phi - psi^2` that
//! vanish for small arguments get their own series so the bounds stay
//! accurate deep in the far field.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `order` points, nodes found by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Self {
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Fixed-rule estimate of `int_a^b f`.
    pub fn integrate(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }

    /// Adaptive bisection until each panel agrees with its two halves to `tol` (absolute).
    pub fn integrate_adaptive(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        let whole = self.integrate(f, a, b);
        self.refine(f, a, b, whole, tol, 0)
    }

    fn refine(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
        let mid = 0.5 * (a + b);
        let left = self.integrate(f, a, mid);
        let right = self.integrate(f, mid, b);
        if (left + right - whole).abs() <= tol || depth >= 60 {
            return left + right;
        }
        self.refine(f, a, mid, left, tol / 2.0, depth + 1) + self.refine(f, mid, b, right, tol / 2.0, depth + 1)
    }
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// `phi(a) = 1 - (2/a) atan(a/2)`, with `phi(0) = 0`.
pub fn phi(alpha: f64) -> f64 {
    let a = alpha.abs();
    if a < 0.1 {
        // sum_{k>=1} (-1)^{k+1} (a/2)^{2k} / (2k+1)
        let z = a * a / 4.0;
        let mut term = z;
        let mut sum = 0.0;
        for k in 1..12 {
            sum += term / (2 * k + 1) as f64;
            term *= -z;
        }
        sum
    } else {
        1.0 - 2.0 / a * (a / 2.0).atan()
    }
}

/// `psi(a) = (2/a) asinh(a/2)`, with `psi(0) = 1`.
pub fn psi(alpha: f64) -> f64 {
    let a = alpha.abs();
    if a < 1e-8 {
        1.0 - a * a / 24.0
    } else {
        2.0 / a * (a / 2.0).asinh()
    }
}

/// Coefficients of `a^{2k}`, `k = 2..=12`, in the expansion of `1 - phi - psi^2`.
const BROADSIDE_DEFICIT_SERIES: [(f64, f64); 11] = [
    (1.0, 720.0),
    (-1.0, 2240.0),
    (47.0, 403_200.0),
    (-61.0, 2_128_896.0),
    (593.0, 86_102_016.0),
    (-173.0, 105_431_040.0),
    (25_147.0, 64_523_796_480.0),
    (-28_007.0, 302_704_230_400.0),
    (245_935.0, 11_187_948_355_584.0),
    (-133_465.0, 25_519_617_736_704.0),
    (4_594_203.0, 3_686_167_006_412_800.0),
];

/// `1 - phi(a) - psi(a)^2`, which behaves like `a^4 / 720` for small `a`.
pub fn broadside_deficit(alpha: f64) -> f64 {
    let a = alpha.abs();
    if a <= 0.5 {
        let z = a * a;
        let mut power = z * z;
        let mut sum = 0.0;
        for (num, den) in BROADSIDE_DEFICIT_SERIES {
            sum += num / den * power;
            power *= z;
        }
        sum
    } else {
        let p = psi(a);
        1.0 - phi(a) - p * p
    }
}

/// Coefficients `[(-1/2)_n / n!]^2` of `2F1(-1/2, -1/2; 1; z)`.
fn hypergeometric_coefficients(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 1.0f64;
    for n in 0..count {
        out.push(c * c);
        let nf = n as f64;
        c *= (nf - 0.5) / (nf + 1.0);
    }
    out
}

/// `upsilon` by its hypergeometric series; converges geometrically away from `a = 1`.
///
/// The mean distance `(1/2pi) int sqrt(1 - 2a cos x + a^2) dx` equals
/// `F(a^2)` for `a < 1` and `a F(1/a^2)` for `a > 1`, with
/// `F = 2F1(-1/2, -1/2; 1; .)`; `upsilon` is its derivative in `a`.
pub fn upsilon_series(alpha: f64, terms: usize) -> f64 {
    let a = alpha.abs();
    let coeffs = hypergeometric_coefficients(terms);
    if a < 1.0 {
        let z = a * a;
        let mut power = a;
        let mut sum = 0.0;
        for (n, c) in coeffs.iter().enumerate().skip(1) {
            sum += 2.0 * n as f64 * c * power;
            power *= z;
        }
        sum
    } else {
        let z = 1.0 / (a * a);
        let mut power = 1.0;
        let mut sum = 0.0;
        for (n, c) in coeffs.iter().enumerate() {
            sum += (1.0 - 2.0 * n as f64) * c * power;
            power *= z;
        }
        sum
    }
}

/// `upsilon(a)` by adaptive quadrature over the half period.
///
/// The integrand is symmetric about `pi` and is rewritten with
/// `1 - 2a cos x + a^2 = (1-a)^2 + 4a sin^2(x/2)` and
/// `a - cos x = (a - 1) + 2 sin^2(x/2)`, which removes cancellation near
/// `x = 0` when `a` is close to 1. At `a = 1` the integrand reduces to
/// `sin(x/2)`.
pub fn upsilon(alpha: f64) -> f64 {
    let a = alpha.abs();
    if a == 0.0 {
        return 0.0;
    }
    let gap = a - 1.0;
    let integrand = move |x: f64| {
        let s = (0.5 * x).sin();
        let s2 = s * s;
        if gap == 0.0 {
            return s;
        }
        (gap + 2.0 * s2) / (gap * gap + 4.0 * a * s2).sqrt()
    };
    let g = rule();
    let coarse = g.integrate(&integrand, 0.0, PI);
    let scale = coarse.abs().max(a.min(1.0) * 1e-3);
    g.integrate_adaptive(&integrand, 0.0, PI, 1e-14 * scale) / PI
}

/// `1 - 1/(2a^2) - upsilon(a)^2` for `a >= 1`, which falls off like `1/(32 a^4)`.
pub fn uca_outside_deficit(alpha: f64) -> f64 {
    let a = alpha.abs();
    if a >= 2.0 {
        // Square the series of upsilon in z = 1/a^2 and drop the terms 1 - z/2.
        let z = 1.0 / (a * a);
        let coeffs = hypergeometric_coefficients(60);
        let b: Vec<f64> = coeffs.iter().enumerate().map(|(n, c)| (1.0 - 2.0 * n as f64) * c).collect();
        let mut sum = 0.0;
        let mut power = z * z;
        for k in 2..b.len() {
            let ck: f64 = (0..=k).map(|i| b[i] * b[k - i]).sum();
            sum -= ck * power;
            power *= z;
            if power < 1e-20 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        let u = upsilon(a);
        1.0 - 0.5 / (a * a) - u * u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 30-digit quadrature.
    const UPSILON_REFERENCE: [(f64, f64); 7] = [
        (0.25, 0.126_000_225_523_518_84),
        (0.5, 0.258_657_904_611_341_7),
        (0.9, 0.522_306_003_426_886),
        (1.1, 0.738_664_794_572_131_3),
        (2.0, 0.934_215_457_667_694_1),
        (8.0, 0.996_082_230_759_415_8),
        (40.0, 0.999_843_731_684_683_1),
    ];

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let g = GaussLegendre::new(5);
        let exact = |k: i32| (1.0 - (-1.0f64).powi(k + 1)) / (k + 1) as f64;
        for k in 0..10 {
            let v = g.integrate(&|x: f64| x.powi(k), -1.0, 1.0);
            assert!((v - exact(k)).abs() < 1e-14, "degree {k}");
        }
        let w: f64 = GaussLegendre::new(20).weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn phi_and_psi_values() {
        assert!((phi(2.0) - (1.0 - PI / 4.0)).abs() < 1e-15);
        assert!((psi(2.0) - (1.0 + 2.0_f64.sqrt()).ln()).abs() < 1e-15);
        let a: f64 = 1.3;
        let direct = (1.0 / a) * (((a * a + 4.0).sqrt() + a) / ((a * a + 4.0).sqrt() - a)).ln();
        assert!((psi(a) - direct).abs() < 1e-15);
        // Series branch joins the direct formula.
        let near: f64 = 0.1 * (1.0 - 1e-12);
        let direct = 1.0 - 2.0 / near * (near / 2.0).atan();
        assert!((phi(near) - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn broadside_deficit_branches_join() {
        let a: f64 = 0.5;
        let p = psi(a);
        let direct = 1.0 - phi(a) - p * p;
        assert!((broadside_deficit(a) - direct).abs() <= 1e-11 * direct);
        assert!((broadside_deficit(1e-3) - 1e-12 / 720.0).abs() <= 1e-6 * 1e-12 / 720.0);
    }

    #[test]
    fn upsilon_matches_reference_values() {
        for (a, expected) in UPSILON_REFERENCE {
            assert!((upsilon(a) - expected).abs() <= 1e-12 * expected, "a = {a}");
        }
        assert_eq!(upsilon(0.0), 0.0);
        assert!((upsilon(1.0) - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn series_agrees_with_quadrature_away_from_one() {
        for a in [0.05, 0.3, 0.5, 2.0, 3.0, 10.0] {
            assert!((upsilon_series(a, 80) - upsilon(a)).abs() < 1e-13, "a = {a}");
        }
    }

    #[test]
    fn outside_deficit_branches_join() {
        let a: f64 = 2.0;
        let u = upsilon(a);
        let direct = 1.0 - 0.5 / (a * a) - u * u;
        assert!((uca_outside_deficit(a) - direct).abs() <= 1e-11 * direct);
        let t: f64 = 1e-3;
        assert!((uca_outside_deficit(1e3) - t.powi(4) / 32.0).abs() <= 1e-3 * t.powi(4) / 32.0);
    }

    #[test]
    fn monotone_shapes() {
        let mut prev = (phi(0.01), psi(0.01), upsilon(0.01));
        for i in 2..400 {
            let a = 0.01 * i as f64 * 1.5;
            let cur = (phi(a), psi(a), upsilon(a));
            assert!(cur.0 > prev.0 && cur.1 < prev.1 && cur.2 > prev.2);
            assert!(cur.0 < 1.0 && cur.1 > 0.0 && cur.2 < 1.0);
            prev = cur;
        }
    }
}
