//! σ(W) from the |V|×|V| discriminant.
//!
//! With φ(x) = (x + (cc′−1)x⁻¹)/c every ν ∈ σ(dSd*) away from ±c′ lifts to
//! the two roots of λ² − cνλ + (cc′−1) = 0; ν = ±c′ lifts to ±(cc′−1).
//! The remaining |A| − 2|V| + (m₊ + m₋) eigenvalues are ±1 and live on
//! ker d: +1 on the antisymmetric part H₋, −1 on the symmetric part H₊.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compare::{compare_multisets, ComparisonReport, DEFAULT_TOL};
use crate::eigen::{check_dense_dim, eig, rank};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{vec_norm, vec_sub, ComplexMatrix, ONE, ZERO};
use crate::operators::{
    arc_norm, assemble_d, assemble_d_star, assemble_s, assemble_w, discriminant, spectral_constants, WeightScheme,
};
use crate::spectrum::{Provenance, Spectrum, CLUSTER_TOL};
use crate::szegedy::{build_setting1, build_setting2};

/// Membership tolerance for ν = ±c′.
pub const EXCEPTIONAL_TOL: f64 = 1e-7;
const RANK_TOL: f64 = 1e-9;
const LIFT_RESIDUAL_TOL: f64 = 1e-8;
const LIFT_ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralMapParams {
    pub c: Complex64,
    pub c_prime: Complex64,
}

impl SpectralMapParams {
    pub fn new(c: Complex64, c_prime: Complex64) -> Result<Self> {
        if (c * c_prime - ONE).norm() <= 1e-12 {
            return Err(Error::DegenerateSpectralParameter);
        }
        Ok(Self { c, c_prime })
    }

    /// cc′ − 1
    pub fn shift(&self) -> Complex64 {
        self.c * self.c_prime - ONE
    }

    pub fn phi(&self, x: Complex64) -> Complex64 {
        (x + self.shift() / x) / self.c
    }

    /// Both roots of λ² − cνλ + (cc′−1) = 0. The first has the larger
    /// imaginary part; equal imaginary parts put the larger real part first.
    pub fn phi_inverse(&self, nu: Complex64) -> (Complex64, Complex64) {
        let b = self.c * nu;
        let s = (b * b - 4.0 * self.shift()).sqrt();
        let (p, m) = (b + s, b - s);
        // larger-magnitude root first, the other from Vieta
        let r1 = if p.norm() >= m.norm() { p / 2.0 } else { m / 2.0 };
        let r2 = if r1 == ZERO { ZERO } else { self.shift() / r1 };
        let scale = r1.norm().max(r2.norm()).max(1.0);
        let tie = (r1.im - r2.im).abs() <= 1e-14 * scale;
        let first_is_plus = if tie { r1.re >= r2.re } else { r1.im > r2.im };
        if first_is_plus {
            (r1, r2)
        } else {
            (r2, r1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappedEigenvalue {
    pub value: Complex64,
    pub multiplicity: usize,
    /// The discriminant eigenvalue this came from.
    pub source: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedSpectrum {
    pub params: SpectralMapParams,
    pub discriminant: Spectrum,
    pub inherited: Vec<MappedEigenvalue>,
    pub exceptional: Vec<MappedEigenvalue>,
    /// dim(ker d ∩ H₋), by rank.
    pub birth_plus: usize,
    /// dim(ker d ∩ H₊), by rank.
    pub birth_minus: usize,
    /// |E| − |V| + m₊ with m₊ the multiplicity of c′ in σ(dSd*).
    pub formula_birth_plus: i64,
    /// |E| − |V| + m₋ with m₋ the multiplicity of −c′.
    pub formula_birth_minus: i64,
    pub num_arcs: usize,
}

impl MappedSpectrum {
    pub fn formula_agrees(&self) -> bool {
        self.formula_birth_plus == self.birth_plus as i64 && self.formula_birth_minus == self.birth_minus as i64
    }

    pub fn total_multiplicity(&self) -> usize {
        self.inherited.iter().chain(&self.exceptional).map(|e| e.multiplicity).sum::<usize>()
            + self.birth_plus
            + self.birth_minus
    }

    pub fn is_complete(&self) -> bool {
        self.total_multiplicity() == self.num_arcs
    }

    pub fn to_spectrum(&self) -> Spectrum {
        let mut s = Spectrum::new();
        for e in &self.inherited {
            s.push(e.value, e.multiplicity, Provenance::Inherited);
        }
        for e in &self.exceptional {
            s.push(e.value, e.multiplicity, Provenance::Exceptional);
        }
        s.push(ONE, self.birth_plus, Provenance::BirthPlus);
        s.push(-ONE, self.birth_minus, Provenance::BirthMinus);
        s.sort();
        s
    }
}

/// Orthonormal basis of H₊ (sign +1) or H₋ (sign −1) as columns.
fn flip_eigenbasis(g: &Graph, sign: f64) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut b = ComplexMatrix::zeros(g.num_arcs(), g.num_edges());
    for k in 0..g.num_edges() {
        b[(2 * k, k)] = Complex64::new(h, 0.0);
        b[(2 * k + 1, k)] = Complex64::new(sign * h, 0.0);
    }
    b
}

/// (dim(ker d ∩ H₋), dim(ker d ∩ H₊)).
pub fn birth_multiplicities(g: &Graph, ws: &WeightScheme) -> Result<(usize, usize)> {
    check_dense_dim(g.num_arcs())?;
    let d = assemble_d(g, ws);
    let e = g.num_edges();
    let plus = e - rank(&d.matmul(&flip_eigenbasis(g, -1.0)), RANK_TOL)?;
    let minus = e - rank(&d.matmul(&flip_eigenbasis(g, 1.0)), RANK_TOL)?;
    Ok((plus, minus))
}

pub fn mapped_spectrum(g: &Graph, ws: &WeightScheme) -> Result<MappedSpectrum> {
    let (c, c_prime) = spectral_constants(g, ws)?;
    check_dense_dim(g.num_arcs())?;
    let params = SpectralMapParams::new(c, Complex64::new(c_prime, 0.0))?;
    let disc = eig(&discriminant(g, ws))?;
    let mut inherited = Vec::new();
    let mut exceptional = Vec::new();
    let (mut m_plus, mut m_minus) = (0usize, 0usize);
    for ev in &disc.entries {
        let (nu, m) = (ev.value, ev.multiplicity);
        if (nu - params.c_prime).norm() <= EXCEPTIONAL_TOL {
            m_plus += m;
            exceptional.push(MappedEigenvalue { value: params.shift(), multiplicity: m, source: nu });
        } else if (nu + params.c_prime).norm() <= EXCEPTIONAL_TOL {
            m_minus += m;
            exceptional.push(MappedEigenvalue { value: -params.shift(), multiplicity: m, source: nu });
        } else {
            let (lp, lm) = params.phi_inverse(nu);
            if (lp - lm).norm() <= CLUSTER_TOL {
                inherited.push(MappedEigenvalue { value: (lp + lm) / 2.0, multiplicity: 2 * m, source: nu });
            } else {
                inherited.push(MappedEigenvalue { value: lp, multiplicity: m, source: nu });
                inherited.push(MappedEigenvalue { value: lm, multiplicity: m, source: nu });
            }
        }
    }
    let (birth_plus, birth_minus) = birth_multiplicities(g, ws)?;
    let base = g.num_edges() as i64 - g.num_vertices() as i64;
    Ok(MappedSpectrum {
        params,
        discriminant: disc,
        inherited,
        exceptional,
        birth_plus,
        birth_minus,
        formula_birth_plus: base + m_plus as i64,
        formula_birth_minus: base + m_minus as i64,
        num_arcs: g.num_arcs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedEigenvector {
    pub lambda: Complex64,
    /// Unit vector in the m_A norm.
    pub vector: Vec<Complex64>,
    /// ‖Wψ − λψ‖₂ / ‖ψ‖₂
    pub residual: f64,
    pub exceptional: bool,
}

/// Lifts an eigenvector f of dSd* (eigenvalue ν) to eigenvectors of W:
/// (d* − λSd*)f for λ ∈ φ⁻¹(ν), or d*f with eigenvalue ±(cc′−1) when
/// ν = ±c′ (where the ±1 lift vanishes).
pub fn lift_eigenvector(g: &Graph, ws: &WeightScheme, nu: Complex64, f: &[Complex64]) -> Result<Vec<LiftedEigenvector>> {
    let (c, c_prime) = spectral_constants(g, ws)?;
    let params = SpectralMapParams::new(c, Complex64::new(c_prime, 0.0))?;
    if f.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: f.len() });
    }
    let fnorm = vec_norm(f);
    let disc = discriminant(g, ws);
    let residual = vec_norm(&vec_sub(&disc.mul_vec(f), &f.iter().map(|z| z * nu).collect::<Vec<_>>()));
    if fnorm == 0.0 || residual > LIFT_RESIDUAL_TOL * fnorm {
        return Err(Error::NotEigenvector { residual });
    }
    let w = assemble_w(g, ws)?;
    let ds_f = assemble_d_star(g, ws).mul_vec(f);
    let sds_f = assemble_s(g).mul_vec(&ds_f);

    let candidates: Vec<(Complex64, Vec<Complex64>, bool)> = if (nu - params.c_prime).norm() <= EXCEPTIONAL_TOL {
        vec![(params.shift(), ds_f.clone(), true)]
    } else if (nu + params.c_prime).norm() <= EXCEPTIONAL_TOL {
        vec![(-params.shift(), ds_f.clone(), true)]
    } else {
        let (lp, lm) = params.phi_inverse(nu);
        let mut roots = vec![lp];
        if (lp - lm).norm() > CLUSTER_TOL {
            roots.push(lm);
        }
        roots
            .into_iter()
            .map(|l| (l, ds_f.iter().zip(&sds_f).map(|(a, b)| a - l * b).collect(), false))
            .collect()
    };

    let mut out = Vec::new();
    for (lambda, psi, exceptional) in candidates {
        let n = arc_norm(ws, &psi);
        if !(n > LIFT_ZERO_TOL * fnorm) {
            return Err(Error::LiftedZero);
        }
        let vector: Vec<Complex64> = psi.iter().map(|z| z / n).collect();
        let wpsi = w.mul_vec(&vector);
        let res = vec_norm(&vec_sub(&wpsi, &vector.iter().map(|z| z * lambda).collect::<Vec<_>>())) / vec_norm(&vector);
        if res > LIFT_RESIDUAL_TOL {
            return Err(Error::NotEigenvector { residual: res });
        }
        out.push(LiftedEigenvector { lambda, vector, residual: res, exceptional });
    }
    Ok(out)
}

/// Largest entry of W·[d* | Sd*] − [d* | Sd*]·T̃ with
/// T̃ = [[0, −1], [(cc′−1)1, c·dSd*]].
pub fn intertwining_residual(g: &Graph, ws: &WeightScheme) -> Result<f64> {
    let (c, c_prime) = spectral_constants(g, ws)?;
    let w = assemble_w(g, ws)?;
    let ds = assemble_d_star(g, ws);
    let sds = assemble_s(g).matmul(&ds);
    let n = g.num_vertices();
    let id = ComplexMatrix::identity(n);
    let t = ComplexMatrix::block2(
        &ComplexMatrix::zeros(n, n),
        &id.scale(-ONE),
        &id.scale(c * c_prime - ONE),
        &discriminant(g, ws).scale(c),
    );
    let lhs_basis = ds.hstack(&sds);
    Ok(w.matmul(&lhs_basis).max_abs_diff(&lhs_basis.matmul(&t)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SzegedyWeights {
    Setting1 { w1: Vec<Complex64> },
    Setting2 { w2: Vec<f64>, vertex_measure: Vec<f64> },
}

/// Which ±1 birth eigenvalues the closed form attaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BirthCase {
    None,
    PlusOnly,
    MinusOnly,
    PlusMinus,
}

impl BirthCase {
    fn from_counts(plus: i64, minus: i64) -> Self {
        match (plus > 0, minus > 0) {
            (true, true) => BirthCase::PlusMinus,
            (true, false) => BirthCase::PlusOnly,
            (false, true) => BirthCase::MinusOnly,
            (false, false) => BirthCase::None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BirthCase::None => "none",
            BirthCase::PlusOnly => "{1}",
            BirthCase::MinusOnly => "{-1}",
            BirthCase::PlusMinus => "{1,-1}",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzegedySpectrum {
    pub setting: u8,
    /// σ(T) in setting 1, σ(L) in setting 2.
    pub vertex_operator: Spectrum,
    pub birth_case: BirthCase,
    pub closed_form: Spectrum,
    pub mapped: MappedSpectrum,
    /// closed_form against mapped, tolerance 1e−7.
    pub cross_check: ComparisonReport,
}

/// (Tf)(u) = Σ_{o(e)=u} w₁(e)·conj(w₁(ē))·f(t(e))
fn assemble_t(g: &Graph, w1: &[Complex64]) -> ComplexMatrix {
    let mut t = ComplexMatrix::zeros(g.num_vertices(), g.num_vertices());
    for e in g.arcs() {
        t[(g.origin(e), g.terminus(e))] += w1[e] * w1[g.inverse(e)].conj();
    }
    t
}

/// (Lf)(u) = Σ_{o(e)=u} w₂(e)·f(t(e)) − f(u)
fn assemble_laplacian(g: &Graph, w2: &[f64]) -> ComplexMatrix {
    let mut l = ComplexMatrix::identity(g.num_vertices()).scale(-ONE);
    for e in g.arcs() {
        l[(g.origin(e), g.terminus(e))] += Complex64::new(w2[e], 0.0);
    }
    l
}

/// Closed-form σ(U₁) / σ(U₂) through φ₁(x) = (x+x⁻¹)/2 and φ₂ = φ₁ − 1,
/// cross-validated against [`mapped_spectrum`].
pub fn szegedy_spectrum(g: &Graph, weights: &SzegedyWeights) -> Result<SzegedySpectrum> {
    let phi1 = SpectralMapParams::new(Complex64::new(2.0, 0.0), ONE)?;
    let base = g.num_edges() as i64 - g.num_vertices() as i64;
    let (setting, ws, vertex_operator, shift, birth_case) = match weights {
        SzegedyWeights::Setting1 { w1 } => {
            let (ws, _) = build_setting1(g, w1)?;
            let t = eig(&assemble_t(g, w1))?;
            let m1 = t.multiplicity_near(ONE, EXCEPTIONAL_TOL) as i64;
            let m_1 = t.multiplicity_near(-ONE, EXCEPTIONAL_TOL) as i64;
            let case = BirthCase::from_counts(base + m1, base + m_1);
            (1u8, ws, t, ZERO, case)
        }
        SzegedyWeights::Setting2 { w2, vertex_measure } => {
            let (ws, _) = build_setting2(g, w2, vertex_measure)?;
            let l = eig(&assemble_laplacian(g, w2))?;
            let p = g.profile();
            let case = if p.is_tree {
                BirthCase::None
            } else if p.cycle_rank == 1 && !p.is_bipartite {
                BirthCase::PlusOnly
            } else {
                BirthCase::PlusMinus
            };
            (2u8, ws, l, ONE, case)
        }
    };

    let mut closed = Spectrum::new();
    let (mut m1, mut m_1) = (0i64, 0i64);
    for ev in &vertex_operator.entries {
        let nu = ev.value + shift;
        let m = ev.multiplicity;
        if (nu - ONE).norm() <= EXCEPTIONAL_TOL {
            m1 += m as i64;
            closed.push(ONE, m, Provenance::Exceptional);
        } else if (nu + ONE).norm() <= EXCEPTIONAL_TOL {
            m_1 += m as i64;
            closed.push(-ONE, m, Provenance::Exceptional);
        } else {
            let (lp, lm) = phi1.phi_inverse(nu);
            closed.push(lp, m, Provenance::Inherited);
            closed.push(lm, m, Provenance::Inherited);
        }
    }
    let (plus, minus) = match birth_case {
        BirthCase::None => (0, 0),
        BirthCase::PlusOnly => (base + m1, 0),
        BirthCase::MinusOnly => (0, base + m_1),
        BirthCase::PlusMinus => (base + m1, base + m_1),
    };
    closed.push(ONE, plus.max(0) as usize, Provenance::BirthPlus);
    closed.push(-ONE, minus.max(0) as usize, Provenance::BirthMinus);
    closed.sort();

    let mapped = mapped_spectrum(g, &ws)?;
    let cross_check = compare_multisets(&closed, &mapped.to_spectrum(), DEFAULT_TOL);
    Ok(SzegedySpectrum { setting, vertex_operator, birth_case, closed_form: closed, mapped, cross_check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{eig_with_vectors, eigenvalues};
    use crate::szegedy::{uniform_setting1_weights, uniform_setting2_weights};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grover(g: &Graph) -> WeightScheme {
        build_setting1(g, &uniform_setting1_weights(g)).unwrap().0
    }

    fn assert_matches_eig(g: &Graph, ws: &WeightScheme) {
        let mapped = mapped_spectrum(g, ws).unwrap();
        assert!(mapped.is_complete(), "{mapped:?}");
        let observed = eig(&assemble_w(g, ws).unwrap()).unwrap();
        let r = compare_multisets(&mapped.to_spectrum(), &observed, 1e-7);
        assert!(r.passed(), "{r:?}");
        assert!(mapped.formula_agrees(), "{mapped:?}");
    }

    #[test]
    fn phi_inverse_examples() {
        let grover = SpectralMapParams::new(c(2.0, 0.0), ONE).unwrap();
        assert_eq!(grover.phi_inverse(ONE), (ONE, ONE));
        let (a, b) = grover.phi_inverse(c(0.0, 0.0));
        assert!((a - c(0.0, 1.0)).norm() < 1e-15 && (b - c(0.0, -1.0)).norm() < 1e-15);
        let support = SpectralMapParams::new(ONE, c(3.0, 0.0)).unwrap();
        let (a, b) = support.phi_inverse(c(3.0, 0.0));
        assert!((a - c(2.0, 0.0)).norm() < 1e-15 && (b - ONE).norm() < 1e-15);
    }

    #[test]
    fn phi_round_trip() {
        let p = SpectralMapParams::new(c(1.3, -0.4), c(0.7, 0.0)).unwrap();
        for k in 0..20 {
            let nu = c(-2.0 + 0.2 * k as f64, 0.1 * (k as f64).sin());
            let (a, b) = p.phi_inverse(nu);
            assert!((p.phi(a) - nu).norm() < 1e-12);
            assert!((p.phi(b) - nu).norm() < 1e-12);
            assert!(a.im >= b.im);
        }
    }

    #[test]
    fn degenerate_parameter_rejected() {
        assert!(matches!(SpectralMapParams::new(c(0.5, 0.0), c(2.0, 0.0)), Err(Error::DegenerateSpectralParameter)));
    }

    #[test]
    fn grover_c4() {
        let g = Graph::cycle(4).unwrap();
        let ws = grover(&g);
        let m = mapped_spectrum(&g, &ws).unwrap();
        assert_eq!(m.birth_plus, 1);
        assert_eq!(m.birth_minus, 1);
        let s = m.to_spectrum();
        assert_eq!(s.multiplicity_near(c(0.0, 1.0), 1e-9), 2);
        assert_eq!(s.multiplicity_near(c(0.0, -1.0), 1e-9), 2);
        assert_eq!(s.multiplicity_near(ONE, 1e-9), 2);
        assert_eq!(s.multiplicity_near(-ONE, 1e-9), 2);
        assert_matches_eig(&g, &ws);
    }

    #[test]
    fn tree_has_no_births() {
        let g = Graph::path(3).unwrap();
        let ws = grover(&g);
        let m = mapped_spectrum(&g, &ws).unwrap();
        assert_eq!((m.birth_plus, m.birth_minus), (0, 0));
        assert_matches_eig(&g, &ws);
    }

    #[test]
    fn petersen_support() {
        let g = Graph::petersen();
        let ws = WeightScheme::grover_support(&g).unwrap();
        let m = mapped_spectrum(&g, &ws).unwrap();
        assert_eq!(m.birth_plus, 6);
        assert_eq!(m.birth_minus, 5);
        assert_eq!(m.exceptional.len(), 1);
        assert!((m.exceptional[0].value - c(2.0, 0.0)).norm() < 1e-12);
        assert_matches_eig(&g, &ws);
    }

    #[test]
    fn random_graphs_both_settings() {
        for seed in 0..6 {
            let g = Graph::random_connected(7, 7 + seed as usize, seed).unwrap();
            assert_matches_eig(&g, &grover(&g));
            let (w2, mv) = uniform_setting2_weights(&g);
            assert_matches_eig(&g, &build_setting2(&g, &w2, &mv).unwrap().0);
        }
    }

    #[test]
    fn generic_complex_scheme() {
        let g = Graph::complete(4).unwrap();
        let w: Vec<Complex64> = g.arcs().map(|e| c(0.5 + 0.1 * e as f64, 0.2)).collect();
        // c′ must be constant: rescale m_V per vertex
        let base = WeightScheme::unit_measures(&g, w.clone(), c(0.8, 0.3)).unwrap();
        let per = crate::operators::c_prime_per_vertex(&g, &base);
        let mv: Vec<f64> = per.iter().map(|p| 1.0 / p).collect();
        let ws = WeightScheme::new(&g, mv, vec![1.0; 12], w, c(0.8, 0.3)).unwrap();
        let mapped = mapped_spectrum(&g, &ws).unwrap();
        let observed = eig(&crate::operators::assemble_w(&g, &ws).unwrap()).unwrap();
        assert!(compare_multisets(&mapped.to_spectrum(), &observed, 1e-7).passed());
        assert!(intertwining_residual(&g, &ws).unwrap() < 1e-10);
    }

    #[test]
    fn intertwining_holds() {
        for g in [Graph::petersen(), Graph::cycle(5).unwrap(), Graph::random_connected(8, 12, 3).unwrap()] {
            assert!(intertwining_residual(&g, &grover(&g)).unwrap() < 1e-10);
        }
        let p = Graph::petersen();
        assert!(intertwining_residual(&p, &WeightScheme::grover_support(&p).unwrap()).unwrap() < 1e-10);
    }

    #[test]
    fn lift_constant_is_exceptional() {
        let g = Graph::petersen();
        let ws = grover(&g);
        let f = vec![ONE; 10];
        let lifted = lift_eigenvector(&g, &ws, ONE, &f).unwrap();
        assert_eq!(lifted.len(), 1);
        assert!(lifted[0].exceptional);
        assert!((lifted[0].lambda - ONE).norm() < 1e-12);
        assert!(lifted[0].residual < 1e-12);
    }

    #[test]
    fn lift_c4_fourier_mode() {
        let g = Graph::cycle(4).unwrap();
        let ws = grover(&g);
        // ν = 0 for f = (1, i, −1, −i)
        let f = vec![ONE, c(0.0, 1.0), -ONE, c(0.0, -1.0)];
        let lifted = lift_eigenvector(&g, &ws, c(0.0, 0.0), &f).unwrap();
        assert_eq!(lifted.len(), 2);
        let lambdas: Vec<Complex64> = lifted.iter().map(|l| l.lambda).collect();
        assert!((lambdas[0] - c(0.0, 1.0)).norm() < 1e-14 && (lambdas[1] - c(0.0, -1.0)).norm() < 1e-14);
        for l in &lifted {
            assert!(l.residual < 1e-12);
            assert!((arc_norm(&ws, &l.vector) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lift_rejects_non_eigenvectors() {
        let g = Graph::cycle(4).unwrap();
        let ws = grover(&g);
        assert!(matches!(lift_eigenvector(&g, &ws, ONE, &[ZERO; 4]), Err(Error::NotEigenvector { .. })));
        let f = vec![ONE, ZERO, ZERO, ZERO];
        assert!(matches!(lift_eigenvector(&g, &ws, ONE, &f), Err(Error::NotEigenvector { .. })));
    }

    #[test]
    fn lift_every_discriminant_eigenvector() {
        let g = Graph::cycle(5).unwrap();
        let ws = grover(&g);
        let dec = eig_with_vectors(&discriminant(&g, &ws)).unwrap();
        for (j, nu) in dec.values.iter().enumerate() {
            for l in lift_eigenvector(&g, &ws, *nu, &dec.vectors.column(j)).unwrap() {
                assert!(l.residual < 1e-8);
            }
        }
    }

    #[test]
    fn setting2_trichotomy() {
        let cases = [
            (Graph::path(3).unwrap(), BirthCase::None),
            (Graph::cycle(5).unwrap(), BirthCase::PlusOnly),
            (Graph::cycle(4).unwrap(), BirthCase::PlusMinus),
            (Graph::complete(4).unwrap(), BirthCase::PlusMinus),
        ];
        for (g, expect) in cases {
            let (w2, mv) = uniform_setting2_weights(&g);
            let s = szegedy_spectrum(&g, &SzegedyWeights::Setting2 { w2, vertex_measure: mv }).unwrap();
            assert_eq!(s.birth_case, expect);
            assert!(s.cross_check.passed(), "{:?}", s.cross_check);
        }
    }

    #[test]
    fn setting1_four_cases() {
        let tree = Graph::path(4).unwrap();
        let s = szegedy_spectrum(&tree, &SzegedyWeights::Setting1 { w1: uniform_setting1_weights(&tree) }).unwrap();
        assert_eq!(s.birth_case, BirthCase::None);
        assert!(s.cross_check.passed());
        let c5 = Graph::cycle(5).unwrap();
        let s = szegedy_spectrum(&c5, &SzegedyWeights::Setting1 { w1: uniform_setting1_weights(&c5) }).unwrap();
        assert_eq!(s.birth_case, BirthCase::PlusOnly);
        assert!(s.cross_check.passed());
    }

    #[test]
    fn unit_circle() {
        let g = Graph::random_connected(9, 13, 5).unwrap();
        for z in eigenvalues(&assemble_w(&g, &grover(&g)).unwrap()).unwrap() {
            assert!((z.norm() - 1.0).abs() < 1e-9);
        }
        let m = mapped_spectrum(&g, &grover(&g)).unwrap();
        for z in m.to_spectrum().expanded() {
            assert!((z.norm() - 1.0).abs() < 1e-9);
        }
    }
}
