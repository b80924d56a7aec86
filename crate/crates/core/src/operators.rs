//! Boundary/coboundary operators, the flip S, the evolution
//! W = S(c·d*d − 1_A) and the vertex-space discriminant d·S·d*.
//!
//! A [`WeightScheme`] carries the vertex measure m_V, the arc measure m_A,
//! the arc weight w and the scalar c. With these,
//!
//! ```text
//! (dψ)(u)  = Σ_{e: t(e)=u} conj(w(ē)) ψ(e)
//! (d*f)(e) = f(t(e)) · m_V(t(e)) · w(ē) / m_A(e)
//! ```
//!
//! so that ⟨d*f, ψ⟩_{m_A} = ⟨f, dψ⟩_{m_V}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::check_dense_dim;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{ComplexMatrix, ONE, ZERO};

/// Relative tolerance for c′ constancy across vertices.
pub const C_PRIME_TOL: f64 = 1e-10;
/// Entries at or below this are outside the positive support.
pub const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightScheme {
    pub vertex_measure: Vec<f64>,
    pub arc_measure: Vec<f64>,
    pub weight: Vec<Complex64>,
    pub c: Complex64,
}

impl WeightScheme {
    /// Checks sizes and positivity of both measures.
    pub fn new(
        g: &Graph,
        vertex_measure: Vec<f64>,
        arc_measure: Vec<f64>,
        weight: Vec<Complex64>,
        c: Complex64,
    ) -> Result<Self> {
        if vertex_measure.len() != g.num_vertices() {
            return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: vertex_measure.len() });
        }
        for (len, what) in [(arc_measure.len(), "arc measure"), (weight.len(), "weight")] {
            if len != g.num_arcs() {
                return Err(Error::InvalidScheme(format!("{what} has {len} entries for {} arcs", g.num_arcs())));
            }
        }
        if let Some(u) = vertex_measure.iter().position(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidScheme(format!("m_V({u}) must be positive")));
        }
        if let Some(e) = arc_measure.iter().position(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidScheme(format!("m_A({e}) must be positive")));
        }
        if weight.iter().chain(std::iter::once(&c)).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidScheme("weights and c must be finite".into()));
        }
        Ok(Self { vertex_measure, arc_measure, weight, c })
    }

    /// m ≡ 1 with the given weights.
    pub fn unit_measures(g: &Graph, weight: Vec<Complex64>, c: Complex64) -> Result<Self> {
        Self::new(g, vec![1.0; g.num_vertices()], vec![1.0; g.num_arcs()], weight, c)
    }

    /// c = 1, w ≡ 1, m ≡ 1: W is the positive support of the Grover walk.
    pub fn grover_support(g: &Graph) -> Result<Self> {
        Self::unit_measures(g, vec![ONE; g.num_arcs()], ONE)
    }

    /// m_A(e) = m_A(ē) for every arc, the condition for S to be an isometry.
    pub fn arc_measure_symmetric(&self, tol: f64) -> bool {
        self.arc_measure.chunks(2).all(|p| (p[0] - p[1]).abs() <= tol * p[0].max(p[1]))
    }
}

/// Per-vertex values Σ_{e: t(e)=u} m_V(u)|w(ē)|²/m_A(e).
pub fn c_prime_per_vertex(g: &Graph, ws: &WeightScheme) -> Vec<f64> {
    (0..g.num_vertices())
        .map(|u| {
            g.in_arcs(u)
                .iter()
                .map(|&e| ws.vertex_measure[u] * ws.weight[g.inverse(e)].norm_sqr() / ws.arc_measure[e])
                .sum()
        })
        .collect()
}

/// The common value c′, or an error when it varies across vertices.
pub fn compute_c_prime(g: &Graph, ws: &WeightScheme) -> Result<f64> {
    let vals = c_prime_per_vertex(g, ws);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max - min > C_PRIME_TOL * max.abs().max(1.0) {
        return Err(Error::NonConstantCPrime { min, max });
    }
    Ok(vals.iter().sum::<f64>() / vals.len() as f64)
}

/// How far d·d* is from c′·1_V.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DdStarReport {
    pub c_prime: f64,
    pub max_diagonal_deviation: f64,
    pub max_off_diagonal: f64,
}

impl DdStarReport {
    pub fn is_identity(&self, tol: f64) -> bool {
        (self.c_prime - 1.0).abs() <= tol && self.is_scalar(tol)
    }

    pub fn is_scalar(&self, tol: f64) -> bool {
        self.max_diagonal_deviation <= tol && self.max_off_diagonal <= tol
    }
}

pub fn dd_star_report(g: &Graph, ws: &WeightScheme) -> Result<DdStarReport> {
    let c_prime = compute_c_prime(g, ws)?;
    let p = assemble_d(g, ws).matmul(&assemble_d_star(g, ws));
    let n = g.num_vertices();
    let mut diag = 0.0f64;
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                diag = diag.max((p[(i, i)] - c_prime).norm());
            } else {
                off = off.max(p[(i, j)].norm());
            }
        }
    }
    Ok(DdStarReport { c_prime, max_diagonal_deviation: diag, max_off_diagonal: off })
}

/// |V|×|A| boundary operator.
pub fn assemble_d(g: &Graph, ws: &WeightScheme) -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(g.num_vertices(), g.num_arcs());
    for e in g.arcs() {
        d[(g.terminus(e), e)] = ws.weight[g.inverse(e)].conj();
    }
    d
}

/// |A|×|V| coboundary operator, the m-weighted adjoint of d.
pub fn assemble_d_star(g: &Graph, ws: &WeightScheme) -> ComplexMatrix {
    let mut ds = ComplexMatrix::zeros(g.num_arcs(), g.num_vertices());
    for e in g.arcs() {
        let u = g.terminus(e);
        ds[(e, u)] = ws.weight[g.inverse(e)] * (ws.vertex_measure[u] / ws.arc_measure[e]);
    }
    ds
}

/// Permutation matrix of the arc involution.
pub fn assemble_s(g: &Graph) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(g.num_arcs(), g.num_arcs());
    for e in g.arcs() {
        s[(e, g.inverse(e))] = ONE;
    }
    s
}

/// Validated (c, c′) pair.
pub fn spectral_constants(g: &Graph, ws: &WeightScheme) -> Result<(Complex64, f64)> {
    let c_prime = compute_c_prime(g, ws)?;
    if (ws.c * c_prime - ONE).norm() <= 1e-12 {
        return Err(Error::DegenerateSpectralParameter);
    }
    Ok((ws.c, c_prime))
}

/// W = S(c·d*d − 1_A).
pub fn assemble_w(g: &Graph, ws: &WeightScheme) -> Result<ComplexMatrix> {
    check_dense_dim(g.num_arcs())?;
    spectral_constants(g, ws)?;
    Ok(assemble_w_unchecked(g, ws))
}

pub(crate) fn assemble_w_unchecked(g: &Graph, ws: &WeightScheme) -> ComplexMatrix {
    let coin = assemble_d_star(g, ws)
        .matmul(&assemble_d(g, ws))
        .scale(ws.c)
        .sub(&ComplexMatrix::identity(g.num_arcs()));
    assemble_s(g).matmul(&coin)
}

/// The |V|×|V| discriminant d·S·d*.
pub fn discriminant(g: &Graph, ws: &WeightScheme) -> ComplexMatrix {
    assemble_d(g, ws).matmul(&assemble_s(g)).matmul(&assemble_d_star(g, ws))
}

/// Adjacency matrix (with multiplicity for parallel edges).
pub fn adjacency(g: &Graph) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(g.num_vertices(), g.num_vertices());
    for a in g.arcs() {
        m[(g.origin(a), g.terminus(a))] += ONE;
    }
    m
}

/// 0/1 matrix marking the strictly positive entries of `m`: real part
/// above [`SUPPORT_TOL`] and imaginary part at most [`SUPPORT_TOL`].
pub fn positive_support(m: &ComplexMatrix) -> ComplexMatrix {
    positive_support_with_tol(m, SUPPORT_TOL)
}

pub fn positive_support_with_tol(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m[(i, j)];
        if z.re > tol && z.im.abs() <= tol {
            ONE
        } else {
            ZERO
        }
    })
}

pub fn inner_vertex(ws: &WeightScheme, f1: &[Complex64], f2: &[Complex64]) -> Complex64 {
    f1.iter().zip(f2).zip(&ws.vertex_measure).map(|((a, b), m)| a.conj() * b * m).sum()
}

pub fn inner_arc(ws: &WeightScheme, psi1: &[Complex64], psi2: &[Complex64]) -> Complex64 {
    psi1.iter().zip(psi2).zip(&ws.arc_measure).map(|((a, b), m)| a.conj() * b * m).sum()
}

pub fn arc_norm(ws: &WeightScheme, psi: &[Complex64]) -> f64 {
    inner_arc(ws, psi, psi).re.max(0.0).sqrt()
}

/// Largest entrywise deviation of 𝔇^{1/2} W 𝔇^{−1/2} from unitarity,
/// where (𝔇ψ)(e) = m_A(e)ψ(e). Zero means W preserves ‖·‖_{m_A}.
pub fn norm_preservation_defect(ws: &WeightScheme, w: &ComplexMatrix) -> f64 {
    let n = w.rows();
    let sq: Vec<f64> = ws.arc_measure.iter().map(|m| m.sqrt()).collect();
    let v = ComplexMatrix::from_fn(n, n, |i, j| w[(i, j)] * (sq[i] / sq[j]));
    v.adjoint().matmul(&v).max_abs_diff(&ComplexMatrix::identity(n))
}
