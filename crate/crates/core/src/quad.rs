//! Gauss–Legendre quadrature and the product grid used for integrals over
//! the unit sphere.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    ///
    /// Nodes are found by Newton iteration on the three-term recurrence,
    /// started from Tricomi's approximation.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Rule mapped onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        crate::sum::kahan_sum(self.on_interval(a, b).map(|(x, w)| w * f(x)))
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` times the
/// trapezoid rule in `φ`. With `n_theta, n_phi ≥ L + 1` it integrates every
/// product of two harmonics of degree `≤ L` exactly.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    /// `(θ, φ, weight)` triples; weights sum to `4π`.
    pub points: Vec<(f64, f64, f64)>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let gl = GaussLegendre::new(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut points = Vec::with_capacity(n_theta * n_phi);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            let theta = libm::acos(x);
            for j in 0..n_phi {
                points.push((theta, j as f64 * dphi, w * dphi));
            }
        }
        Self { points }
    }

    /// Grid exact for products of harmonics up to degree `lmax`.
    pub fn for_degree(lmax: usize) -> Self {
        Self::new(lmax + 2, 2 * lmax + 2)
    }
}
