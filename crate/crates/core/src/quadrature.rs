//! Gauss–Legendre rules on `[-1, 1]`.

use std::sync::OnceLock;

/// Default node count for wall-normal integrals.
pub const DEFAULT_NODES: usize = 96;

/// Frequencies above this trigger a doubled rule.
pub const FREQUENCY_THRESHOLD: f64 = 30.0;

/// Nodes and weights of an n-point Gauss–Legendre rule.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the rule by Newton iteration on the Legendre polynomial `P_n`.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared default rule.
pub fn default_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(DEFAULT_NODES))
}

/// The default rule, doubled (up to twice) when the integrand oscillates faster.
pub fn rule_for_frequency(freq: f64) -> &'static QuadratureRule {
    static DOUBLE: OnceLock<QuadratureRule> = OnceLock::new();
    static QUAD: OnceLock<QuadratureRule> = OnceLock::new();
    if freq <= FREQUENCY_THRESHOLD {
        default_rule()
    } else if freq <= 2.0 * FREQUENCY_THRESHOLD {
        DOUBLE.get_or_init(|| QuadratureRule::gauss_legendre(2 * DEFAULT_NODES))
    } else {
        QUAD.get_or_init(|| QuadratureRule::gauss_legendre(4 * DEFAULT_NODES))
    }
}
