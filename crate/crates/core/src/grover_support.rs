//! Positive supports (U^j)⁺ of powers of the Grover walk on κ-regular
//! graphs, their closed-form spectra, the cube identity
//! (U³)⁺ = (U⁺)³ + ᵀU⁺ and the poles of Z^{(j)}(u) = Π(1 − uλ)⁻¹.
//!
//! Supports are computed over the integers from κU, whose entries are 2
//! (non-backtracking step) and 2 − κ (backtracking step).

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compare::{compare_multisets, ComparisonReport};
use crate::eigen::{check_dense_dim, eig};
use crate::error::{Error, Result};
use crate::graph::{Girth, Graph};
use crate::linalg::{ComplexMatrix, IntMatrix, ONE};
use crate::operators::{adjacency, assemble_d_star, assemble_s, WeightScheme};
use crate::spectrum::{fmt_f64, Provenance, Spectrum, CLUSTER_TOL};

/// Tolerance for support spectra against the eigensolver.
pub const SUPPORT_SPECTRUM_TOL: f64 = 1e-6;
const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// s±^{(1)}(x): the roots of λ² − xλ + (κ−1) = 0.
pub fn s1(x: f64, kappa: usize) -> (Complex64, Complex64) {
    let k = kappa as f64;
    let r = re(x * x - 4.0 * k + 4.0).sqrt();
    (re(x / 2.0) + r / 2.0, re(x / 2.0) - r / 2.0)
}

pub fn s2(x: f64, kappa: usize) -> (Complex64, Complex64) {
    let k = kappa as f64;
    let r = re(x * x - 4.0 * k + 4.0).sqrt();
    let a = re((x * x - 2.0 * k + 4.0) / 2.0);
    (a + r * x / 2.0, a - r * x / 2.0)
}

pub fn s3(x: f64, kappa: usize) -> (Complex64, Complex64) {
    let k = kappa as f64;
    let x2 = x * x;
    let radicand = x2 * x2 * x2 + 2.0 * (2.0 - 3.0 * k) * x2 * x2 + (13.0 * k * k - 24.0 * k + 16.0) * x2
        - 8.0 * (k - 1.0) * (k * k - 2.0 * k + 2.0);
    let r = re(radicand).sqrt();
    let a = re(x * (x2 + 4.0 - 3.0 * k) / 2.0);
    (a + r / 2.0, a - r / 2.0)
}

pub fn s_pair(j: u32, x: f64, kappa: usize) -> Result<(Complex64, Complex64)> {
    match j {
        1 => Ok(s1(x, kappa)),
        2 => Ok(s2(x, kappa)),
        3 => Ok(s3(x, kappa)),
        _ => Err(Error::InvalidParameter(format!("j must be 1, 2 or 3, got {j}"))),
    }
}

fn regular_degree(g: &Graph) -> Result<usize> {
    g.regular_degree().ok_or(Error::NotRegular)
}

/// κU over the integers.
pub fn grover_integer(g: &Graph) -> Result<IntMatrix> {
    let kappa = regular_degree(g)? as i64;
    check_dense_dim(g.num_arcs())?;
    let mut u = IntMatrix::zeros(g.num_arcs(), g.num_arcs());
    for e in g.arcs() {
        for &f in g.in_arcs(g.origin(e)) {
            u[(e, f)] = if f == g.inverse(e) { 2 - kappa } else { 2 };
        }
    }
    Ok(u)
}

/// (U^j)⁺ as a 0/1 integer matrix.
pub fn support_matrix(g: &Graph, j: u32) -> Result<IntMatrix> {
    if j == 0 {
        return Err(Error::InvalidParameter("j must be positive".into()));
    }
    let u = grover_integer(g)?;
    let mut p = u.clone();
    for _ in 1..j {
        p = p.matmul(&u);
    }
    Ok(p.positive_support())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportPair {
    pub lambda: f64,
    pub multiplicity: usize,
    pub plus: Complex64,
    pub minus: Complex64,
    /// s₊ = s₋: the eigensolver may see a defective pair.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSpectrumResult {
    pub j: u32,
    pub kappa: usize,
    pub adjacency_spectrum: Spectrum,
    pub mapped_pairs: Vec<SupportPair>,
    pub extras: Vec<(f64, usize)>,
    /// λ ∈ σ(M) with s₊(λ) = s₋(λ).
    pub degenerate_flags: Vec<f64>,
    pub claimed: Spectrum,
    pub observed: Spectrum,
    pub comparison: ComparisonReport,
    pub support_trace: i64,
    pub claimed_trace: Complex64,
    pub notes: Vec<String>,
}

impl SupportSpectrumResult {
    pub fn trace_matches(&self) -> bool {
        (self.claimed_trace - re(self.support_trace as f64)).norm() <= SUPPORT_SPECTRUM_TOL * (self.claimed.total_multiplicity() as f64)
    }
}

fn check_girth(g: &Graph, required: usize) -> Result<()> {
    let girth = g.girth();
    if !girth.at_least(required) {
        return Err(Error::GirthTooSmall { girth: girth.to_string(), required });
    }
    Ok(())
}

/// Closed-form σ((U^j)⁺), cross-validated against the eigensolver on the
/// assembled support matrix.
pub fn support_spectrum(g: &Graph, j: u32) -> Result<SupportSpectrumResult> {
    let kappa = regular_degree(g)?;
    if kappa < 2 {
        return Err(Error::InvalidParameter(format!("support spectra need degree at least 2, got {kappa}")));
    }
    let mut notes = Vec::new();
    match j {
        1 => {}
        2 => {
            check_girth(g, 3)?;
            if !g.girth().at_least(5) {
                notes.push("girth below 5: closed form for j=2 checked numerically only".into());
            }
        }
        3 => check_girth(g, 5)?,
        _ => return Err(Error::InvalidParameter(format!("j must be 1, 2 or 3, got {j}"))),
    }
    if kappa == 2 {
        notes.push("degree 2: s-formulas degenerate; closed form checked numerically only".into());
    }

    let adjacency_spectrum = eig(&adjacency(g))?;
    let mut mapped_pairs = Vec::new();
    let mut degenerate_flags = Vec::new();
    let mut claimed = Spectrum::new();
    for ev in &adjacency_spectrum.entries {
        let lambda = ev.value.re;
        let (plus, minus) = s_pair(j, lambda, kappa)?;
        let degenerate = (plus - minus).norm() <= CLUSTER_TOL;
        if degenerate {
            degenerate_flags.push(lambda);
            claimed.push((plus + minus) / 2.0, 2 * ev.multiplicity, Provenance::Inherited);
        } else {
            claimed.push(plus, ev.multiplicity, Provenance::Inherited);
            claimed.push(minus, ev.multiplicity, Provenance::Inherited);
        }
        mapped_pairs.push(SupportPair { lambda, multiplicity: ev.multiplicity, plus, minus, degenerate });
    }
    let excess = g.num_edges().saturating_sub(g.num_vertices());
    let extras = match j {
        1 => vec![(1.0, excess), (-1.0, excess)],
        2 => vec![(2.0, 2 * excess)],
        _ => vec![(2.0, excess), (-2.0, excess)],
    };
    for &(v, m) in &extras {
        claimed.push(re(v), m, Provenance::Extra);
    }
    claimed.sort();
    if !degenerate_flags.is_empty() {
        notes.push(format!(
            "degenerate pairs at lambda = {:?}: algebraic multiplicity reported, geometric may be half",
            degenerate_flags
        ));
    }

    let support = support_matrix(g, j)?;
    let observed = eig(&support.to_complex())?;
    let comparison = compare_multisets(&claimed, &observed, SUPPORT_SPECTRUM_TOL);
    let claimed_trace = claimed.sum();
    Ok(SupportSpectrumResult {
        j,
        kappa,
        adjacency_spectrum,
        mapped_pairs,
        extras,
        degenerate_flags,
        claimed,
        observed,
        comparison,
        support_trace: support.trace(),
        claimed_trace,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityRole {
    /// κ-regular with girth ≥ 5: the identity is claimed.
    Claimed,
    /// Girth below 5: a failure is the expected outcome.
    NegativeControl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeIdentityReport {
    pub kappa: usize,
    pub girth: Girth,
    pub role: IdentityRole,
    pub holds: bool,
    pub mismatched_entries: usize,
}

/// Exact comparison of (U³)⁺ with (U⁺)³ + ᵀU⁺.
pub fn verify_cube_identity(g: &Graph) -> Result<CubeIdentityReport> {
    let kappa = regular_degree(g)?;
    let girth = g.girth();
    let cube = support_matrix(g, 3)?;
    let up = support_matrix(g, 1)?;
    let rhs = up.matmul(&up).matmul(&up).add(&up.transpose());
    let mismatched_entries = cube.count_mismatches(&rhs);
    Ok(CubeIdentityReport {
        kappa,
        girth,
        role: if girth.at_least(5) { IdentityRole::Claimed } else { IdentityRole::NegativeControl },
        holds: mismatched_entries == 0,
        mismatched_entries,
    })
}

/// Λ(λ) = [[−λ(κ−2), −λ²+2κ−2], [(κ−1)(λ²−κ+1)−1, λ(λ²−2κ+2)]]
pub fn lambda_block(lambda: f64, kappa: usize) -> [[f64; 2]; 2] {
    let k = kappa as f64;
    let l2 = lambda * lambda;
    [[-lambda * (k - 2.0), -l2 + 2.0 * k - 2.0], [(k - 1.0) * (l2 - k + 1.0) - 1.0, lambda * (l2 - 2.0 * k + 2.0)]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaCheck {
    pub lambda: f64,
    pub trace: f64,
    pub det: f64,
    pub s3_plus: Complex64,
    pub s3_minus: Complex64,
    /// max(|tr Λ − (s₊+s₋)|, |det Λ − s₊s₋|)
    pub error: f64,
    /// |Λ(λ) − ([[0,−1],[κ−1,λ]]³ + [[λ,κ−1],[−1,0]])|
    pub block_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwinerReport {
    /// Largest entry of [(U³)⁺d* | (U³)⁺Sd*] − [d* | Sd*](T̃³ + T̃′).
    pub block_residual: f64,
    pub lambda_checks: Vec<LambdaCheck>,
    pub passed: bool,
}

fn mul2(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Checks [(U³)⁺d* | (U³)⁺Sd*] = [d* | Sd*](T̃³ + T̃′) with
/// T̃ = [[0, −1], [(κ−1)1, M]], T̃′ = swap·T̃·swap, and σ(Λ(λ)) = {s±^{(3)}(λ)}.
pub fn intertwiner_check_cube(g: &Graph) -> Result<IntertwinerReport> {
    let kappa = regular_degree(g)?;
    check_girth(g, 5)?;
    let n = g.num_vertices();
    let ws = WeightScheme::grover_support(g)?;
    let ds = assemble_d_star(g, &ws);
    let sds = assemble_s(g).matmul(&ds);
    let basis = ds.hstack(&sds);
    let cube = support_matrix(g, 3)?.to_complex();
    let id = ComplexMatrix::identity(n);
    let zero = ComplexMatrix::zeros(n, n);
    let m = adjacency(g);
    let t = ComplexMatrix::block2(&zero, &id.scale(-ONE), &id.scale(re(kappa as f64 - 1.0)), &m);
    let t_prime = ComplexMatrix::block2(&m, &id.scale(re(kappa as f64 - 1.0)), &id.scale(-ONE), &zero);
    let rhs = basis.matmul(&t.pow(3).add(&t_prime));
    let block_residual = cube.matmul(&basis).max_abs_diff(&rhs);

    let mut lambda_checks = Vec::new();
    for ev in &eig(&m)?.entries {
        let lambda = ev.value.re;
        let l = lambda_block(lambda, kappa);
        let small = [[0.0, -1.0], [kappa as f64 - 1.0, lambda]];
        let cube_small = mul2(mul2(small, small), small);
        let from_blocks = [
            [cube_small[0][0] + lambda, cube_small[0][1] + kappa as f64 - 1.0],
            [cube_small[1][0] - 1.0, cube_small[1][1]],
        ];
        let block_error = (0..4).map(|i| (l[i / 2][i % 2] - from_blocks[i / 2][i % 2]).abs()).fold(0.0, f64::max);
        let trace = l[0][0] + l[1][1];
        let det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
        let (sp, sm) = s3(lambda, kappa);
        let error = (re(trace) - (sp + sm)).norm().max((re(det) - sp * sm).norm());
        lambda_checks.push(LambdaCheck { lambda, trace, det, s3_plus: sp, s3_minus: sm, error, block_error });
    }
    let scale = |x: f64| 1e-9 * x.abs().max(1.0);
    let passed = block_residual <= 1e-9
        && lambda_checks.iter().all(|c| c.error <= scale(c.det) && c.block_error <= scale(c.det));
    Ok(IntertwinerReport { block_residual, lambda_checks, passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleSource {
    /// Reciprocals of the verified closed-form spectrum.
    ClosedForm,
    /// The closed form disagreed with the eigensolver; its spectrum was used.
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaPoles {
    pub j: u32,
    /// (pole, multiplicity), sorted by (re, im).
    pub poles: Vec<(Complex64, usize)>,
    /// Multiplicity of the eigenvalue 0, which contributes no pole.
    pub zero_multiplicity: usize,
    pub source: PoleSource,
}

impl ZetaPoles {
    pub fn total_multiplicity(&self) -> usize {
        self.poles.iter().map(|p| p.1).sum()
    }

    /// `re,im,multiplicity` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity\n");
        for (z, m) in &self.poles {
            let _ = writeln!(out, "{},{},{}", fmt_f64(z.re), fmt_f64(z.im), m);
        }
        out
    }

    /// 600×600 scatter of the poles; marker radius grows with multiplicity.
    pub fn to_svg(&self) -> String {
        const SIZE: f64 = 600.0;
        let max = self.poles.iter().map(|(z, _)| z.norm()).fold(0.0, f64::max);
        let half = if max > 0.0 { max * 1.1 } else { 1.0 };
        let sx = |x: f64| SIZE / 2.0 + x / half * (SIZE / 2.0);
        let sy = |y: f64| SIZE / 2.0 - y / half * (SIZE / 2.0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 600 600">"#
        );
        let _ = writeln!(out, r#"<rect x="0" y="0" width="600" height="600" fill="white"/>"#);
        let _ = writeln!(out, r#"<line x1="0" y1="300" x2="600" y2="300" stroke="gray" stroke-width="1"/>"#);
        let _ = writeln!(out, r#"<line x1="300" y1="0" x2="300" y2="600" stroke="gray" stroke-width="1"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="8" y="20" font-family="monospace" font-size="14">poles of Z^({}), axes [-{:.4}, {:.4}]</text>"#,
            self.j, half, half
        );
        for (z, m) in &self.poles {
            let r = 3.0 * (*m as f64).sqrt();
            let _ = writeln!(
                out,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="steelblue" fill-opacity="0.7"><title>{:.6}{:+.6}i x{}</title></circle>"#,
                sx(z.re),
                sy(z.im),
                r,
                z.re,
                z.im,
                m
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Poles of Z^{(j)}(u) = Π_{λ ∈ σ((U^j)⁺)} (1 − uλ)⁻¹: the reciprocals of
/// the non-zero eigenvalues.
pub fn zeta_poles(g: &Graph, j: u32) -> Result<ZetaPoles> {
    let spec = support_spectrum(g, j)?;
    let (values, source) = if spec.comparison.passed() {
        (spec.claimed.expanded(), PoleSource::ClosedForm)
    } else {
        (spec.observed.expanded(), PoleSource::Numeric)
    };
    Ok(poles_from_values(j, &values, source))
}

fn poles_from_values(j: u32, values: &[Complex64], source: PoleSource) -> ZetaPoles {
    let zero_multiplicity = values.iter().filter(|z| z.norm() <= ZERO_EIGENVALUE_TOL).count();
    let recips: Vec<Complex64> = values.iter().filter(|z| z.norm() > ZERO_EIGENVALUE_TOL).map(|z| z.inv()).collect();
    let clustered = Spectrum::from_values(&recips, CLUSTER_TOL, Provenance::Numeric);
    ZetaPoles {
        j,
        poles: clustered.entries.iter().map(|e| (e.value, e.multiplicity)).collect(),
        zero_multiplicity,
        source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: f64, b: f64) -> Complex64 {
        Complex64::new(a, b)
    }

    fn close(a: (Complex64, Complex64), b: (f64, f64)) -> bool {
        (a.0 - re(b.0)).norm() < 1e-12 && (a.1 - re(b.1)).norm() < 1e-12
    }

    #[test]
    fn spot_values() {
        assert!(close(s1(3.0, 3), (2.0, 1.0)));
        assert!(close(s2(3.0, 3), (5.0, 2.0)));
        assert!(close(s3(3.0, 3), (10.0, 2.0)));
    }

    #[test]
    fn vieta_and_square_relation() {
        for kappa in 2..7 {
            for i in 0..41 {
                let x = -(kappa as f64) + i as f64 * kappa as f64 / 20.0;
                let (p, m) = s1(x, kappa);
                assert!((p + m - re(x)).norm() < 1e-12);
                assert!((p * m - re(kappa as f64 - 1.0)).norm() < 1e-12);
                let (p2, m2) = s2(x, kappa);
                assert!((p2 - (p * p + 1.0)).norm() < 1e-10);
                assert!((m2 - (m * m + 1.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn principal_root_puts_positive_imaginary_first() {
        let (p, m) = s1(1.0, 3);
        assert!((p - c(0.5, 7f64.sqrt() / 2.0)).norm() < 1e-14);
        assert!((m - c(0.5, -7f64.sqrt() / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn grover_integer_entries() {
        let g = Graph::petersen();
        let u = grover_integer(&g).unwrap();
        let (_, grover) = crate::szegedy::build_setting1(&g, &crate::szegedy::uniform_setting1_weights(&g)).unwrap();
        assert!(u.to_complex().max_abs_diff(&grover.scale(re(3.0))) < 1e-13);
    }

    #[test]
    fn u_plus_is_non_backtracking() {
        let g = Graph::complete(4).unwrap();
        let up = support_matrix(&g, 1).unwrap();
        let ws = WeightScheme::grover_support(&g).unwrap();
        let b = crate::operators::assemble_w(&g, &ws).unwrap();
        assert!(up.to_complex().max_abs_diff(&b) == 0.0);
    }

    #[test]
    fn petersen_j1() {
        let r = support_spectrum(&Graph::petersen(), 1).unwrap();
        assert!(r.comparison.passed(), "{:?}", r.comparison);
        assert_eq!(r.claimed.total_multiplicity(), 30);
        assert_eq!(r.claimed.multiplicity_near(ONE, 1e-9), 6);
        assert_eq!(r.claimed.multiplicity_near(-ONE, 1e-9), 5);
        assert_eq!(r.claimed.multiplicity_near(c(-1.0, 1.0), 1e-9), 4);
        assert_eq!(r.claimed.multiplicity_near(c(0.5, 7f64.sqrt() / 2.0), 1e-9), 5);
        assert!(r.trace_matches());
    }

    #[test]
    fn petersen_j2_j3() {
        for j in [2, 3] {
            let r = support_spectrum(&Graph::petersen(), j).unwrap();
            assert!(r.comparison.passed(), "j={j} {:?}", r.comparison);
            assert_eq!(r.claimed.total_multiplicity(), 30);
            assert!(r.trace_matches());
        }
    }

    #[test]
    fn girth_gate_for_cube() {
        assert!(matches!(support_spectrum(&Graph::cycle(4).unwrap(), 3), Err(Error::GirthTooSmall { .. })));
        assert!(matches!(support_spectrum(&Graph::path(3).unwrap(), 1), Err(Error::NotRegular)));
        assert!(matches!(support_spectrum(&Graph::petersen(), 4), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cube_identity_controls() {
        let p = verify_cube_identity(&Graph::petersen()).unwrap();
        assert_eq!(p.role, IdentityRole::Claimed);
        assert!(p.holds);
        let d = verify_cube_identity(&Graph::dodecahedron()).unwrap();
        assert!(d.holds);
        for g in [Graph::complete(4).unwrap(), Graph::complete_bipartite(3, 3).unwrap()] {
            let r = verify_cube_identity(&g).unwrap();
            assert_eq!(r.role, IdentityRole::NegativeControl);
            assert!(!r.holds);
        }
    }

    #[test]
    fn lambda_block_examples() {
        let l = lambda_block(3.0, 3);
        assert_eq!(l, [[-3.0, -5.0], [13.0, 15.0]]);
        let r = intertwiner_check_cube(&Graph::petersen()).unwrap();
        assert!(r.passed, "{r:?}");
        let top = r.lambda_checks.iter().find(|c| (c.lambda - 3.0).abs() < 1e-9).unwrap();
        assert!((top.trace - 12.0).abs() < 1e-9 && (top.det - 20.0).abs() < 1e-9);
    }

    #[test]
    fn poles_are_reciprocals() {
        let g = Graph::petersen();
        let z = zeta_poles(&g, 3).unwrap();
        assert_eq!(z.source, PoleSource::ClosedForm);
        let at = |v: f64| z.poles.iter().filter(|(p, _)| (p - re(v)).norm() < 1e-9).map(|p| p.1).sum::<usize>();
        // extras {2}⁵ plus s3(3) = (10, 2) and s3(−2) = (2, 0) four times
        assert_eq!(at(0.5), 10);
        assert_eq!(at(-0.5), 5);
        assert_eq!(z.zero_multiplicity, 4);
        assert_eq!(z.total_multiplicity() + z.zero_multiplicity, 30);
        let csv = z.to_csv();
        assert!(csv.starts_with("re,im,multiplicity\n"));
        assert_eq!(csv.lines().count(), z.poles.len() + 1);
    }

    #[test]
    fn zero_eigenvalues_have_no_pole() {
        let z = poles_from_values(1, &[re(0.0), re(2.0), re(2.0)], PoleSource::Numeric);
        assert_eq!(z.zero_multiplicity, 1);
        assert_eq!(z.poles, vec![(re(0.5), 2)]);
    }

    #[test]
    fn svg_is_deterministic() {
        let g = Graph::petersen();
        let a = zeta_poles(&g, 1).unwrap().to_svg();
        let b = zeta_poles(&g, 1).unwrap().to_svg();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
    }
}
