//! Norm-preserving Szegedy evolutions U = S(2d*d − 1_A).
//!
//! Setting 1: m ≡ 1 and Σ_{o(e)=u} |w₁(e)|² = 1.
//! Setting 2: Σ_{o(e)=u} w₂(e) = 1 with extended detailed balance
//! m_A(e) = m_V(o(e))w₂(e) = m_V(t(e))w₂(ē).

use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{ComplexMatrix, ZERO};
use crate::operators::{arc_norm, assemble_w, norm_preservation_defect, WeightScheme};

/// Tolerance for the setting normalizations and detailed balance.
pub const SETTING_TOL: f64 = 1e-10;
/// Deviation from unitarity tolerated before a scheme is refused as a walk.
pub const NORM_TOL: f64 = 1e-10;

const TWO: Complex64 = Complex64::new(2.0, 0.0);

/// w₁(e) = 1/√deg(o(e)), the Grover coin.
pub fn uniform_setting1_weights(g: &Graph) -> Vec<Complex64> {
    g.arcs().map(|e| Complex64::new(1.0 / (g.degree(g.origin(e)) as f64).sqrt(), 0.0)).collect()
}

/// Simple random walk: w₂(e) = 1/deg(o(e)) with m_V(u) = deg(u), so m_A ≡ 1.
pub fn uniform_setting2_weights(g: &Graph) -> (Vec<f64>, Vec<f64>) {
    let w2 = g.arcs().map(|e| 1.0 / g.degree(g.origin(e)) as f64).collect();
    let mv = (0..g.num_vertices()).map(|u| g.degree(u) as f64).collect();
    (w2, mv)
}

pub fn build_setting1(g: &Graph, w1: &[Complex64]) -> Result<(WeightScheme, ComplexMatrix)> {
    if w1.len() != g.num_arcs() {
        return Err(Error::DimensionMismatch { expected: g.num_arcs(), got: w1.len() });
    }
    for u in 0..g.num_vertices() {
        let sum: f64 = g.out_arcs(u).iter().map(|&e| w1[e].norm_sqr()).sum();
        if (sum - 1.0).abs() > SETTING_TOL {
            return Err(Error::Setting1Normalization { vertex: u, sum });
        }
    }
    let ws = WeightScheme::unit_measures(g, w1.to_vec(), TWO)?;
    let u = assemble_w(g, &ws)?;
    Ok((ws, u))
}

pub fn build_setting2(g: &Graph, w2: &[f64], vertex_measure: &[f64]) -> Result<(WeightScheme, ComplexMatrix)> {
    if w2.len() != g.num_arcs() {
        return Err(Error::DimensionMismatch { expected: g.num_arcs(), got: w2.len() });
    }
    if vertex_measure.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: vertex_measure.len() });
    }
    if let Some(arc) = w2.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::NotRealPositive { arc });
    }
    for u in 0..g.num_vertices() {
        let sum: f64 = g.out_arcs(u).iter().map(|&e| w2[e]).sum();
        if (sum - 1.0).abs() > SETTING_TOL {
            return Err(Error::Setting2RowSum { vertex: u, sum });
        }
    }
    let arc_measure: Vec<f64> = g.arcs().map(|e| vertex_measure[g.origin(e)] * w2[e]).collect();
    for e in g.arcs() {
        let lhs = arc_measure[e];
        let rhs = vertex_measure[g.terminus(e)] * w2[g.inverse(e)];
        if (lhs - rhs).abs() > SETTING_TOL * lhs.max(rhs) {
            return Err(Error::DetailedBalance { arc: e, lhs, rhs });
        }
    }
    let weight = w2.iter().map(|&w| Complex64::new(w, 0.0)).collect();
    let ws = WeightScheme::new(g, vertex_measure.to_vec(), arc_measure, weight, TWO)?;
    let u = assemble_w(g, &ws)?;
    Ok((ws, u))
}

/// A vertex measure satisfying m_V(o(e))w₂(e) = m_V(t(e))w₂(ē), found by
/// propagation along a BFS spanning tree and validated on the remaining
/// edges. Normalized so that Σ_u m_V(u) = |A|.
pub fn reversible_vertex_measure(g: &Graph, w2: &[f64]) -> Result<Vec<f64>> {
    if let Some(arc) = w2.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::NotRealPositive { arc });
    }
    let mut mv = vec![0.0; g.num_vertices()];
    mv[0] = 1.0;
    let mut in_tree = vec![false; g.num_edges()];
    for a in g.spanning_tree_arcs() {
        mv[g.terminus(a)] = mv[g.origin(a)] * w2[a] / w2[g.inverse(a)];
        in_tree[a / 2] = true;
    }
    for (k, _) in in_tree.iter().enumerate().filter(|(_, &t)| !t) {
        let e = 2 * k;
        let lhs = mv[g.origin(e)] * w2[e];
        let rhs = mv[g.terminus(e)] * w2[g.inverse(e)];
        if (lhs - rhs).abs() > SETTING_TOL * lhs.max(rhs) {
            return Err(Error::NonReversible { arc: e });
        }
    }
    let scale = g.num_arcs() as f64 / mv.iter().sum::<f64>();
    Ok(mv.into_iter().map(|m| m * scale).collect())
}

/// Complex amplitudes on arcs, measured in the scheme's m_A norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState<'a> {
    pub amplitudes: Vec<Complex64>,
    pub scheme: &'a WeightScheme,
}

impl<'a> WalkState<'a> {
    pub fn new(scheme: &'a WeightScheme, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != scheme.arc_measure.len() {
            return Err(Error::DimensionMismatch { expected: scheme.arc_measure.len(), got: amplitudes.len() });
        }
        Ok(Self { amplitudes, scheme })
    }

    /// Unit state concentrated on one arc.
    pub fn arc_delta(scheme: &'a WeightScheme, arc: usize) -> Result<Self> {
        let n = scheme.arc_measure.len();
        if arc >= n {
            return Err(Error::InvalidParameter(format!("arc {arc} out of range ({n} arcs)")));
        }
        let mut amplitudes = vec![ZERO; n];
        amplitudes[arc] = Complex64::new(1.0 / scheme.arc_measure[arc].sqrt(), 0.0);
        Ok(Self { amplitudes, scheme })
    }

    pub fn norm(&self) -> f64 {
        arc_norm(self.scheme, &self.amplitudes)
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { amplitudes: self.amplitudes.iter().map(|z| z / n).collect(), scheme: self.scheme }
    }
}

/// ψ₀, ψ₁ = Uψ₀, …, ψₙ by repeated mat-vec.
pub fn evolve<'a>(u: &ComplexMatrix, psi0: &WalkState<'a>, steps: usize) -> Result<Vec<WalkState<'a>>> {
    if u.rows() != psi0.amplitudes.len() || !u.is_square() {
        return Err(Error::DimensionMismatch { expected: u.cols(), got: psi0.amplitudes.len() });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(psi0.clone());
    for _ in 0..steps {
        let next = u.mul_vec(&out.last().expect("non-empty").amplitudes);
        out.push(WalkState { amplitudes: next, scheme: psi0.scheme });
    }
    Ok(out)
}

/// A graph, scheme and evolution operator, admitted only when the operator
/// preserves the m_A norm.
#[derive(Debug, Clone)]
pub struct QuantumWalk<'g> {
    pub graph: &'g Graph,
    pub scheme: WeightScheme,
    pub operator: ComplexMatrix,
}

impl<'g> QuantumWalk<'g> {
    pub fn new(graph: &'g Graph, scheme: WeightScheme) -> Result<Self> {
        let operator = assemble_w(graph, &scheme)?;
        let deviation = norm_preservation_defect(&scheme, &operator);
        if deviation > NORM_TOL {
            return Err(Error::NotNormPreserving { deviation });
        }
        Ok(Self { graph, scheme, operator })
    }

    pub fn setting1(graph: &'g Graph, w1: &[Complex64]) -> Result<Self> {
        let (scheme, _) = build_setting1(graph, w1)?;
        Self::new(graph, scheme)
    }

    pub fn setting2(graph: &'g Graph, w2: &[f64], vertex_measure: &[f64]) -> Result<Self> {
        let (scheme, _) = build_setting2(graph, w2, vertex_measure)?;
        Self::new(graph, scheme)
    }

    pub fn run(&self, psi0: &[Complex64], steps: usize) -> Result<Vec<WalkState<'_>>> {
        let state = WalkState::new(&self.scheme, psi0.to_vec())?;
        evolve(&self.operator, &state, steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcDistribution(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexDistribution(pub Vec<f64>);

impl ArcDistribution {
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl VertexDistribution {
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// μ(e) = |ψ(e)|² m_A(e).
pub fn arc_distribution(psi: &WalkState<'_>) -> ArcDistribution {
    if !psi.is_unit() {
        warn!("arc distribution of a non-unit state (norm {})", psi.norm());
    }
    ArcDistribution(psi.amplitudes.iter().zip(&psi.scheme.arc_measure).map(|(z, m)| z.norm_sqr() * m).collect())
}

/// ν(u) = Σ_{t(e)=u} μ(e).
pub fn vertex_distribution(g: &Graph, psi: &WalkState<'_>) -> VertexDistribution {
    let mu = arc_distribution(psi);
    VertexDistribution((0..g.num_vertices()).map(|u| g.in_arcs(u).iter().map(|&e| mu.0[e]).sum()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub steps: usize,
    pub vertex_measure: Vec<f64>,
    pub arc_measure: Vec<f64>,
    /// max over n ≤ steps of |𝔇^{−1/2}U₁ⁿ𝔇^{1/2} − U₂ⁿ| entrywise
    pub max_operator_error: f64,
    /// max over n ≤ steps of |μ̃ₙ^{(ψ₀)} − μₙ^{(𝔇^{1/2}ψ₀)}| pointwise
    pub max_distribution_error: f64,
    pub operator_ok: bool,
    pub distribution_ok: bool,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.operator_ok && self.distribution_ok
    }
}

/// Checks that the setting-1 walk with real positive w₁ and the setting-2
/// walk with w₂ = w₁² are conjugate through 𝔇^{1/2}, (𝔇ψ)(e) = m_A(e)ψ(e).
pub fn verify_conjugation(g: &Graph, w1: &[f64], steps: usize, psi0: &[Complex64]) -> Result<ConjugationReport> {
    if let Some(arc) = w1.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::NotRealPositive { arc });
    }
    let w1c: Vec<Complex64> = w1.iter().map(|&w| Complex64::new(w, 0.0)).collect();
    let (ws1, u1) = build_setting1(g, &w1c)?;
    let w2: Vec<f64> = w1.iter().map(|w| w * w).collect();
    let mv = reversible_vertex_measure(g, &w2)?;
    let (ws2, u2) = build_setting2(g, &w2, &mv)?;

    let sq: Vec<f64> = ws2.arc_measure.iter().map(|m| m.sqrt()).collect();
    let n = g.num_arcs();
    let mut p1 = ComplexMatrix::identity(n);
    let mut p2 = ComplexMatrix::identity(n);
    let mut op_err = 0.0f64;
    for step in 0..=steps {
        if step > 0 {
            p1 = u1.matmul(&p1);
            p2 = u2.matmul(&p2);
        }
        let conj = ComplexMatrix::from_fn(n, n, |i, j| p1[(i, j)] * (sq[j] / sq[i]));
        op_err = op_err.max(conj.max_abs_diff(&p2));
    }

    let start2 = WalkState::new(&ws2, psi0.to_vec())?.normalized();
    let lifted: Vec<Complex64> = start2.amplitudes.iter().zip(&sq).map(|(z, s)| z * *s).collect();
    let start1 = WalkState::new(&ws1, lifted)?;
    let tilde = evolve(&u2, &start2, steps)?;
    let plain = evolve(&u1, &start1, steps)?;
    let mut dist_err = 0.0f64;
    for (a, b) in tilde.iter().zip(&plain) {
        let (ma, mb) = (arc_distribution(a), arc_distribution(b));
        dist_err = ma.0.iter().zip(&mb.0).map(|(x, y)| (x - y).abs()).fold(dist_err, f64::max);
    }

    Ok(ConjugationReport {
        steps,
        vertex_measure: mv,
        arc_measure: ws2.arc_measure.clone(),
        max_operator_error: op_err,
        max_distribution_error: dist_err,
        operator_ok: op_err <= 1e-9,
        distribution_ok: dist_err <= 1e-10,
    })
}
