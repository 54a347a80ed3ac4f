//! Gauss-Kronrod 7-15 quadrature for complex-valued integrands of a real
//! variable: single panel, global adaptive bisection, and fixed composite
//! rules whose nodes can be reused across many integrands.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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
// Gauss weights at the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn zero() -> Self {
        Self { value: Complex64::new(0.0, 0.0), error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

impl std::ops::AddAssign for Estimate {
    fn add_assign(&mut self, o: Estimate) {
        self.value += o.value;
        self.error += o.error;
    }
}

/// Nodes of the 15-point rule on `[a, b]` in the order used by [`gk15_from_values`].
pub fn gk15_nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [0.0; 15];
    for i in 0..7 {
        x[2 * i] = c - h * XGK[i];
        x[2 * i + 1] = c + h * XGK[i];
    }
    x[14] = c;
    x
}

/// Combine values at [`gk15_nodes`] into a Kronrod value and `|K − G|`.
pub fn gk15_from_values(half_width: f64, v: &[Complex64]) -> Estimate {
    let mut k = v[14] * WGK[7];
    let mut g = v[14] * WG[3];
    for i in 0..7 {
        let s = v[2 * i] + v[2 * i + 1];
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    Estimate { value: k * half_width, error: ((k - g) * half_width).norm() }
}

/// One 15-point panel on `[a, b]`.
pub fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Estimate {
    let x = gk15_nodes(a, b);
    let v: Vec<Complex64> = x.iter().map(|&t| f(t)).collect();
    gk15_from_values(0.5 * (b - a), &v)
}

/// Sum of 15-point panels over consecutive edges.
pub fn composite<F: Fn(f64) -> Complex64>(f: &F, edges: &[f64]) -> Estimate {
    edges.windows(2).fold(Estimate::zero(), |acc, w| acc + gk15(f, w[0], w[1]))
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.est.error == o.est.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.est.error.total_cmp(&o.est.error)
    }
}

/// Global adaptive integration: bisect the worst panel until the summed
/// error is below `max(abs_tol, rel_tol·|I|)`.
///
/// On budget exhaustion returns [`Error::Tolerance`]; use
/// [`adaptive_best_effort`] to keep the partial estimate.
pub fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Estimate> {
    let (est, ok) = adaptive_best_effort(f, a, b, abs_tol, rel_tol, max_panels);
    if ok {
        Ok(est)
    } else {
        Err(Error::Tolerance(format!(
            "adaptive quadrature on [{a}, {b}] stopped at error {:.3e}",
            est.error
        )))
    }
}

/// As [`adaptive`], returning the estimate and whether the target was met.
pub fn adaptive_best_effort<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> (Estimate, bool) {
    adaptive_edges(f, &[a, b], abs_tol, rel_tol, max_panels)
}

/// Adaptive integration seeded with the panels given by `edges`.
pub fn adaptive_edges<F: Fn(f64) -> Complex64>(
    f: &F,
    edges: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> (Estimate, bool) {
    let mut heap = BinaryHeap::new();
    let mut total = Estimate::zero();
    for w in edges.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let est = gk15(f, w[0], w[1]);
        total += est;
        heap.push(Piece { a: w[0], b: w[1], est });
    }
    if heap.is_empty() {
        return (total, true);
    }
    loop {
        let target = abs_tol.max(rel_tol * total.value.norm());
        if total.error <= target {
            return (total, true);
        }
        if heap.len() >= max_panels {
            return (total, false);
        }
        let worst = heap.pop().expect("heap is nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(worst);
            return (total, false);
        }
        let l = gk15(f, worst.a, m);
        let r = gk15(f, m, worst.b);
        total.value += l.value + r.value - worst.est.value;
        total.error += l.error + r.error - worst.est.error;
        heap.push(Piece { a: worst.a, b: m, est: l });
        heap.push(Piece { a: m, b: worst.b, est: r });
    }
}

/// Composite 15-point rule with precomputed nodes, for integrating many
/// integrands sampled at the same points.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    half_widths: Vec<f64>,
}

impl PanelRule {
    pub fn new(edges: &[f64]) -> Self {
        let mut nodes = Vec::with_capacity(15 * edges.len());
        let mut half_widths = Vec::with_capacity(edges.len());
        for w in edges.windows(2) {
            nodes.extend_from_slice(&gk15_nodes(w[0], w[1]));
            half_widths.push(0.5 * (w[1] - w[0]));
        }
        Self { nodes, half_widths }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate values given at [`PanelRule::nodes`].
    pub fn apply(&self, values: &[Complex64]) -> Estimate {
        assert_eq!(values.len(), self.nodes.len(), "value count must match node count");
        self.half_widths
            .iter()
            .zip(values.chunks(15))
            .fold(Estimate::zero(), |acc, (&h, v)| acc + gk15_from_values(h, v))
    }

    /// Integrate `w(x)·values` for a node-wise weight.
    pub fn apply_weighted<W: Fn(f64) -> Complex64>(&self, values: &[Complex64], w: W) -> Estimate {
        let wv: Vec<Complex64> = self.nodes.iter().zip(values).map(|(&x, &v)| w(x) * v).collect();
        self.apply(&wv)
    }
}

/// Edges `a = e_0 < … < e_m = b` with geometric grading toward `a`.
pub fn graded_edges(a: f64, b: f64, first: f64, ratio: f64) -> Vec<f64> {
    let mut edges = vec![a];
    let mut w = first.min(b - a);
    let mut x = a;
    while x + w < b {
        x += w;
        edges.push(x);
        w *= ratio;
    }
    edges.push(b);
    edges
}

/// Uniform edges with width at most `h`.
pub fn uniform_edges(a: f64, b: f64, h: f64) -> Vec<f64> {
    let m = ((b - a) / h).ceil().max(1.0) as usize;
    (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect()
}
