//! Equilateral quantum-graph walk Ũ = e^{ikL}·S(c·d*d − 1_A) on a
//! κ-regular graph with common edge length L and common vertex parameter α.
//!
//! q = α/k, τ = 2/(κ + iq), γ = arg τ ∈ (−π/2, π/2), c = κτ = 2e^{iγ}cos γ.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compare::{compare_multisets, ComparisonReport, DEFAULT_TOL};
use crate::eigen::{eig, eigenvalues};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{ComplexMatrix, ONE, ZERO};
use crate::operators::{adjacency, assemble_w, WeightScheme};
use crate::spectral_map::{birth_multiplicities, SpectralMapParams, EXCEPTIONAL_TOL};
use crate::spectrum::{Provenance, Spectrum};

/// Larger |α| approaches the Dirichlet limit and is refused.
pub const ALPHA_CAP: f64 = 1e6;
/// A k counts as non-trivial when some eigenvalue is this close to 1.
pub const ROOT_TOL: f64 = 1e-6;
/// Final bracket width of the k refinement.
pub const ROOT_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QGraphParams {
    pub k: f64,
    pub length: f64,
    pub alpha: f64,
    pub kappa: usize,
}

impl QGraphParams {
    pub fn new(g: &Graph, k: f64, length: f64, alpha: f64) -> Result<Self> {
        let kappa = g.regular_degree().ok_or(Error::NotRegular)?;
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!("L must be positive, got {length}")));
        }
        if !alpha.is_finite() || alpha.abs() > ALPHA_CAP {
            return Err(Error::InvalidParameter(format!("|alpha| must be at most {ALPHA_CAP:e}, got {alpha}")));
        }
        Ok(Self { k, length, alpha, kappa })
    }

    /// Per-edge lengths and per-vertex α; only the homogeneous case is
    /// accepted.
    pub fn from_lists(g: &Graph, k: f64, lengths: &[f64], alphas: &[f64]) -> Result<Self> {
        if lengths.len() != g.num_edges() {
            return Err(Error::DimensionMismatch { expected: g.num_edges(), got: lengths.len() });
        }
        if alphas.len() != g.num_vertices() {
            return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: alphas.len() });
        }
        if lengths.windows(2).any(|p| p[0] != p[1]) {
            return Err(Error::Heterogeneous("edge lengths differ".into()));
        }
        if alphas.windows(2).any(|p| p[0] != p[1]) {
            return Err(Error::Heterogeneous("vertex parameters alpha differ".into()));
        }
        Self::new(g, k, lengths[0], alphas[0])
    }

    pub fn q(&self) -> f64 {
        self.alpha / self.k
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(2.0, 0.0) / Complex64::new(self.kappa as f64, self.q())
    }

    pub fn gamma(&self) -> f64 {
        self.tau().arg()
    }

    /// κ/√(κ² + q²) = cos γ
    pub fn cos_gamma(&self) -> f64 {
        let kappa = self.kappa as f64;
        kappa / (kappa * kappa + self.q() * self.q()).sqrt()
    }

    pub fn c(&self) -> Complex64 {
        self.tau() * self.kappa as f64
    }

    /// e^{ikL}
    pub fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.k * self.length)
    }

    pub fn scheme(&self, g: &Graph) -> Result<WeightScheme> {
        let w = Complex64::new(1.0 / (self.kappa as f64).sqrt(), 0.0);
        WeightScheme::unit_measures(g, vec![w; g.num_arcs()], self.c())
    }
}

fn check_regular(g: &Graph, p: &QGraphParams) -> Result<()> {
    if g.regular_degree() != Some(p.kappa) {
        return Err(Error::NotRegular);
    }
    Ok(())
}

pub fn build_qgraph_walk(g: &Graph, p: &QGraphParams) -> Result<ComplexMatrix> {
    check_regular(g, p)?;
    Ok(assemble_w(g, &p.scheme(g)?)?.scale(p.phase()))
}

/// (Ũψ)(e) = e^{ikL} Σ_{f: t(f)=o(e)} (τ − δ_{f,ē}) ψ(f), entry by entry.
pub fn build_qgraph_walk_direct(g: &Graph, p: &QGraphParams) -> Result<ComplexMatrix> {
    check_regular(g, p)?;
    let (tau, phase) = (p.tau(), p.phase());
    let mut u = ComplexMatrix::zeros(g.num_arcs(), g.num_arcs());
    for e in g.arcs() {
        for &f in g.in_arcs(g.origin(e)) {
            let delta = if f == g.inverse(e) { ONE } else { ZERO };
            u[(e, f)] = phase * (tau - delta);
        }
    }
    Ok(u)
}

/// Birth-set case as stated for the homogeneous quantum graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QGraphBirthCase {
    /// Tree, or q ≠ 0 with at most one cycle: no birth set.
    Empty,
    /// q = 0 and exactly one cycle, of odd length: {1}.
    Plus,
    /// Otherwise: {±1}.
    PlusMinus,
}

pub fn qgraph_birth_case(g: &Graph, p: &QGraphParams) -> QGraphBirthCase {
    let prof = g.profile();
    let q_zero = p.q() == 0.0;
    if prof.is_tree || (!q_zero && prof.cycle_rank <= 1) {
        QGraphBirthCase::Empty
    } else if q_zero && prof.cycle_rank == 1 && !prof.is_bipartite {
        QGraphBirthCase::Plus
    } else {
        QGraphBirthCase::PlusMinus
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QGraphSpectrum {
    pub params: QGraphParams,
    pub gamma: f64,
    pub cos_gamma: f64,
    /// σ(P) of the simple random walk.
    pub transition: Spectrum,
    /// σ(Ũ) with provenance.
    pub spectrum: Spectrum,
    pub birth_case: QGraphBirthCase,
    pub birth_plus: usize,
    pub birth_minus: usize,
    /// The scaling applied to σ(P) before φ₁⁻¹.
    pub scaling_note: String,
    /// spectrum against eig(Ũ), tolerance 1e−7.
    pub cross_check: ComparisonReport,
}

/// σ(Ũ) = e^{ikL}·[ e^{iγ}φ₁⁻¹(cos γ·ν) for ν ∈ σ(P) \ {±1},
/// ±e^{2iγ} for ν = ±1, and births {1}, {−1} on ker d ].
pub fn qgraph_spectrum(g: &Graph, p: &QGraphParams) -> Result<QGraphSpectrum> {
    check_regular(g, p)?;
    let kappa = p.kappa as f64;
    let transition = eig(&adjacency(g).scale(Complex64::new(1.0 / kappa, 0.0)))?;
    let rot = Complex64::from_polar(1.0, p.gamma());
    let phi1 = SpectralMapParams::new(Complex64::new(2.0, 0.0), ONE)?;
    let phase = p.phase();
    let exc = rot * rot;

    let mut spectrum = Spectrum::new();
    for ev in &transition.entries {
        let (nu, m) = (ev.value, ev.multiplicity);
        if (nu - ONE).norm() <= EXCEPTIONAL_TOL {
            spectrum.push(phase * exc, m, Provenance::Exceptional);
        } else if (nu + ONE).norm() <= EXCEPTIONAL_TOL {
            spectrum.push(-phase * exc, m, Provenance::Exceptional);
        } else {
            let (a, b) = phi1.phi_inverse(nu * p.cos_gamma());
            spectrum.push(phase * rot * a, m, Provenance::Inherited);
            spectrum.push(phase * rot * b, m, Provenance::Inherited);
        }
    }
    let (birth_plus, birth_minus) = birth_multiplicities(g, &p.scheme(g)?)?;
    spectrum.push(phase, birth_plus, Provenance::BirthPlus);
    spectrum.push(-phase, birth_minus, Provenance::BirthMinus);
    spectrum.sort();

    let observed = eig(&build_qgraph_walk(g, p)?)?;
    let cross_check = compare_multisets(&spectrum, &observed, DEFAULT_TOL);
    Ok(QGraphSpectrum {
        params: *p,
        gamma: p.gamma(),
        cos_gamma: p.cos_gamma(),
        transition,
        spectrum,
        birth_case: qgraph_birth_case(g, p),
        birth_plus,
        birth_minus,
        scaling_note: "sigma(P) scaled by kappa/sqrt(kappa^2+q^2) (the variant kappa/(kappa+q^2) is not used)".into(),
        cross_check,
    })
}

/// min over σ(Ũ(k)) of |λ − 1|.
pub fn distance_to_one(g: &Graph, length: f64, alpha: f64, k: f64) -> Result<f64> {
    let p = QGraphParams::new(g, k, length, alpha)?;
    let vals = eigenvalues(&build_qgraph_walk(g, &p)?)?;
    Ok(vals.iter().map(|z| (z - ONE).norm()).fold(f64::INFINITY, f64::min))
}

/// Eigenvalues of Ũ(k) within 1e−6 of 1.
fn multiplicity_of_one(g: &Graph, length: f64, alpha: f64, k: f64) -> Result<usize> {
    let p = QGraphParams::new(g, k, length, alpha)?;
    Ok(eigenvalues(&build_qgraph_walk(g, &p)?)?.iter().filter(|z| (*z - ONE).norm() <= ROOT_TOL).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KRoot {
    pub k: f64,
    pub distance: f64,
    /// Eigenvalues of Ũ(k) within 1e−6 of 1.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KFamily {
    /// k = 2nπ/L
    Even,
    /// k = (2n+1)π/L
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticK {
    pub k: f64,
    pub family: KFamily,
    pub n: u64,
    /// Whether 1 ∈ σ(Ũ(k)) within 1e−6 at this k.
    pub confirmed: bool,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KScan {
    pub roots: Vec<KRoot>,
    /// Only populated when the graph has a cycle.
    pub families: Vec<AnalyticK>,
}

fn golden_min(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, width: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > width {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
    }
    let candidates = [(a, f(a)?), (b, f(b)?), (x1, f1), (x2, f2)];
    Ok(candidates.into_iter().min_by(|p, q| p.1.total_cmp(&q.1)).expect("non-empty"))
}

/// Locates k in [k_min, k_max] with 1 ∈ σ(Ũ(k)): the distance to 1 is
/// sampled on `grid` points, every local minimum is refined by
/// golden-section search to width 1e−9, and minima at or below 1e−6 are
/// kept.
pub fn scan_nontrivial_k(g: &Graph, length: f64, alpha: f64, k_min: f64, k_max: f64, grid: usize) -> Result<KScan> {
    if !(k_min < k_max) || !k_min.is_finite() || !k_max.is_finite() {
        return Err(Error::EmptyRange);
    }
    if grid < 2 {
        return Err(Error::InvalidParameter(format!("grid must have at least 2 points, got {grid}")));
    }
    QGraphParams::new(g, k_min, length, alpha)?;
    let step = (k_max - k_min) / (grid - 1) as f64;
    let ks: Vec<f64> = (0..grid).map(|i| if i + 1 == grid { k_max } else { k_min + step * i as f64 }).collect();
    let dist: Vec<f64> = ks.par_iter().map(|&k| distance_to_one(g, length, alpha, k)).collect::<Result<_>>()?;

    let minima: Vec<usize> = (0..grid)
        .filter(|&i| (i == 0 || dist[i] <= dist[i - 1]) && (i + 1 == grid || dist[i] <= dist[i + 1]))
        .collect();
    let f = |k: f64| distance_to_one(g, length, alpha, k);
    let refined: Vec<(f64, f64)> = minima
        .par_iter()
        .map(|&i| golden_min(&f, ks[i.saturating_sub(1)], ks[(i + 1).min(grid - 1)], ROOT_WIDTH))
        .collect::<Result<_>>()?;

    let mut roots: Vec<KRoot> = Vec::new();
    for (k, d) in refined {
        if d > ROOT_TOL || roots.last().is_some_and(|r| (r.k - k).abs() < 10.0 * ROOT_WIDTH) {
            continue;
        }
        let multiplicity = multiplicity_of_one(g, length, alpha, k)?;
        roots.push(KRoot { k, distance: d, multiplicity });
    }

    let mut families = Vec::new();
    if g.profile().cycle_rank >= 1 {
        let n_max = (k_max * length / PI).floor() as u64;
        for m in 1..=n_max {
            let k = m as f64 * PI / length;
            if k < k_min || k > k_max {
                continue;
            }
            let (family, n) = if m % 2 == 0 { (KFamily::Even, m / 2) } else { (KFamily::Odd, (m - 1) / 2) };
            let multiplicity = multiplicity_of_one(g, length, alpha, k)?;
            families.push(AnalyticK { k, family, n, confirmed: multiplicity > 0, multiplicity });
        }
    }
    Ok(KScan { roots, families })
}
