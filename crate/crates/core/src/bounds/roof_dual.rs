//! Roof-duality lower bound via the implication network of a posiform.
//!
//! The reduced problem is rewritten as a posiform
//! `c0 + sum a_u u + sum a_uv u v` with nonnegative coefficients over
//! literals. Each quadratic term contributes arcs `u -> !v` and `v -> !u`,
//! each linear term arcs `x0 -> !u` and `u -> !x0`, all with half the term's
//! coefficient as capacity. The maximum `x0 -> !x0` flow added to `c0` is the
//! roof-dual bound.

use crate::qubo::QuboInstance;

use super::maxflow::FlowNetwork;

/// Coefficients are quantized to `max coefficient / precision` before the
/// flow computation.
pub const DEFAULT_ROOF_PRECISION: f64 = 1e6;

/// The QUBO restricted to the free variables once some are fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedProblem {
    /// Original indices of the free variables.
    pub free: Vec<usize>,
    /// Diagonal terms of the free variables, pin interactions folded in.
    pub linear: Vec<f64>,
    /// `(i, j, b)` over reduced indices with `i < j`, nonzero `b` only.
    pub quadratic: Vec<(usize, usize, f64)>,
    /// Energy contributed by the fixed variables alone.
    pub constant: f64,
}

impl ReducedProblem {
    pub fn fix(q: &QuboInstance, pins: &[(usize, u8)]) -> Self {
        let n = q.n();
        let mut fixed = vec![None; n];
        for &(i, v) in pins {
            fixed[i] = Some(v);
        }
        let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
        let mut pos = vec![usize::MAX; n];
        for (r, &i) in free.iter().enumerate() {
            pos[i] = r;
        }
        let mut linear = vec![0.0; free.len()];
        let mut quadratic = Vec::new();
        let mut constant = 0.0;
        for (i, j, v) in q.upper_entries() {
            if v == 0.0 {
                continue;
            }
            match (fixed[i], fixed[j]) {
                (Some(a), Some(b)) => {
                    if a == 1 && b == 1 {
                        constant += v;
                    }
                }
                (Some(a), None) => {
                    if a == 1 {
                        linear[pos[j]] += v;
                    }
                }
                (None, Some(b)) => {
                    if b == 1 {
                        linear[pos[i]] += v;
                    }
                }
                (None, None) if i == j => linear[pos[i]] += v,
                (None, None) => quadratic.push((pos[i], pos[j], v)),
            }
        }
        Self { free, linear, quadratic, constant }
    }

    /// Energy of an assignment to the free variables.
    pub fn energy(&self, y: &[u8]) -> f64 {
        let lin: f64 = self.linear.iter().zip(y).filter(|(_, &b)| b == 1).map(|(a, _)| a).sum();
        let quad: f64 = self.quadratic.iter().filter(|&&(i, j, _)| y[i] == 1 && y[j] == 1).map(|&(_, _, b)| b).sum();
        self.constant + lin + quad
    }
}

struct Posiform {
    constant: f64,
    /// `(literal, coefficient)`; literal `2i` is `y_i`, `2i + 1` its complement.
    linear: Vec<(usize, f64)>,
    quadratic: Vec<(usize, usize, f64)>,
}

fn to_posiform(p: &ReducedProblem) -> Posiform {
    let mut a = p.linear.clone();
    let mut quadratic = Vec::with_capacity(p.quadratic.len());
    for &(i, j, b) in &p.quadratic {
        if b > 0.0 {
            quadratic.push((2 * i, 2 * j, b));
        } else {
            // b y_i y_j = b y_i + |b| y_i !y_j
            a[i] += b;
            quadratic.push((2 * i, 2 * j + 1, -b));
        }
    }
    let mut constant = p.constant;
    let mut linear = Vec::with_capacity(a.len());
    for (i, &ai) in a.iter().enumerate() {
        if ai > 0.0 {
            linear.push((2 * i, ai));
        } else if ai < 0.0 {
            // a y_i = a + |a| !y_i
            constant += ai;
            linear.push((2 * i + 1, -ai));
        }
    }
    Posiform { constant, linear, quadratic }
}

/// Roof-dual lower bound on the minimum of `p`.
///
/// Capacities are rounded down to multiples of a quantum, so every integral
/// flow is also feasible in the exact network; one further quantum is
/// subtracted to absorb rounding in the constant.
pub fn roof_dual_bound(p: &ReducedProblem, precision: f64) -> f64 {
    let pf = to_posiform(p);
    let max_coef = pf.linear.iter().map(|&(_, c)| c).chain(pf.quadratic.iter().map(|&(_, _, c)| c)).fold(0.0, f64::max);
    if max_coef == 0.0 {
        return pf.constant;
    }
    let quantum = max_coef / precision;
    let cap = |c: f64| (c / 2.0 / quantum).floor() as i64;
    let m = p.free.len();
    let source = 2 * m;
    let sink = 2 * m + 1;
    let neg = |lit: usize| lit ^ 1;
    let mut g = FlowNetwork::new(2 * m + 2);
    for &(u, c) in &pf.linear {
        g.add_edge(source, neg(u), cap(c));
        g.add_edge(u, sink, cap(c));
    }
    for &(u, v, c) in &pf.quadratic {
        g.add_edge(u, neg(v), cap(c));
        g.add_edge(v, neg(u), cap(c));
    }
    let flow = g.max_flow(source, sink) as f64 * quantum;
    pf.constant + flow - quantum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(linear: Vec<f64>, quadratic: Vec<(usize, usize, f64)>) -> ReducedProblem {
        ReducedProblem { free: (0..linear.len()).collect(), linear, quadratic, constant: 0.0 }
    }

    fn exact_min(p: &ReducedProblem) -> f64 {
        let m = p.free.len();
        (0..1u64 << m)
            .map(|mask| p.energy(&(0..m).map(|i| (mask >> i & 1) as u8).collect::<Vec<_>>()))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn hand_computed_bound() {
        // y1 y2 - y1 - y2 has minimum -1; the network carries flow 1 on top of
        // the posiform constant -2.
        let p = problem(vec![-1.0, -1.0], vec![(0, 1, 1.0)]);
        let b = roof_dual_bound(&p, 1e6);
        assert!((b + 1.0).abs() < 1e-5 && b <= -1.0);
    }

    #[test]
    fn frustrated_triangle_has_half_integral_gap() {
        // Antiferromagnetic triangle: min is -1 but the roof dual is weaker.
        let p = problem(vec![-1.0, -1.0, -1.0], vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
        let b = roof_dual_bound(&p, 1e6);
        assert!(b <= exact_min(&p));
        assert!((b + 1.5).abs() < 1e-5);
    }

    #[test]
    fn fixing_folds_pins_into_linear_terms() {
        let q = QuboInstance::from_dense(&[[-1.0, 0.4, 1.0], [0.0, 0.4, -0.8], [0.0, 0.0, -1.5]]).unwrap();
        let r = ReducedProblem::fix(&q, &[(1, 1), (2, 1)]);
        assert_eq!(r.free, vec![0]);
        assert!((r.constant - (0.4 - 0.8 - 1.5)).abs() < 1e-12);
        assert!((r.linear[0] - (-1.0 + 0.4 + 1.0)).abs() < 1e-12);
        assert!(r.quadratic.is_empty());
    }

    #[test]
    fn empty_problem_returns_constant() {
        let p = ReducedProblem { free: vec![], linear: vec![], quadratic: vec![], constant: -2.5 };
        assert_eq!(roof_dual_bound(&p, 1e6), -2.5);
    }
}
