//! Eigenvalue multisets.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues closer than this are one cluster when assigning algebraic
/// multiplicities.
pub const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// φ⁻¹ image of a discriminant eigenvalue.
    Inherited,
    /// ±(cc′ − 1), contributed by a discriminant eigenvalue at ±c′.
    Exceptional,
    /// +1 living on ker(d) ∩ H₋.
    BirthPlus,
    /// −1 living on ker(d) ∩ H₊.
    BirthMinus,
    /// Closed-form value outside the discriminant picture (support extras).
    Extra,
    /// Produced directly by a numerical eigensolve.
    Numeric,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Inherited => "inherited",
            Provenance::Exceptional => "exceptional",
            Provenance::BirthPlus => "birth_plus",
            Provenance::BirthMinus => "birth_minus",
            Provenance::Extra => "extra",
            Provenance::Numeric => "numeric",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "inherited" => Provenance::Inherited,
            "exceptional" => Provenance::Exceptional,
            "birth_plus" => Provenance::BirthPlus,
            "birth_minus" => Provenance::BirthMinus,
            "extra" => Provenance::Extra,
            "numeric" => Provenance::Numeric,
            other => return Err(Error::Parse { line: 0, message: format!("unknown provenance {other:?}") }),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub multiplicity: usize,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub entries: Vec<Eigenvalue>,
}

impl Spectrum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, value: Complex64, multiplicity: usize, provenance: Provenance) {
        if multiplicity > 0 {
            self.entries.push(Eigenvalue { value, multiplicity, provenance });
        }
    }

    /// Greedy single-linkage clustering of raw eigenvalues: values within
    /// `tol` of any member join the cluster; the cluster value is the mean.
    pub fn from_values(values: &[Complex64], tol: f64, provenance: Provenance) -> Self {
        let n = values.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if (values[i] - values[j]).norm() <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[rj.max(ri)] = rj.min(ri);
                    }
                }
            }
        }
        let mut sums: Vec<(Complex64, usize)> = vec![(Complex64::new(0.0, 0.0), 0); n];
        for i in 0..n {
            let r = find(&mut parent, i);
            sums[r].0 += values[i];
            sums[r].1 += 1;
        }
        let mut out = Spectrum::new();
        for (sum, count) in sums {
            if count > 0 {
                out.push(sum / count as f64, count, provenance);
            }
        }
        out.sort();
        out
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Each eigenvalue repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.entries.iter().flat_map(|e| std::iter::repeat(e.value).take(e.multiplicity)).collect()
    }

    /// Sort by (re, im), then provenance.
    pub fn sort(&mut self) {
        self.entries.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
                .then((a.provenance as u8).cmp(&(b.provenance as u8)))
        });
    }

    /// Total multiplicity of eigenvalues within `tol` of `z`.
    pub fn multiplicity_near(&self, z: Complex64, tol: f64) -> usize {
        self.entries.iter().filter(|e| (e.value - z).norm() <= tol).map(|e| e.multiplicity).sum()
    }

    pub fn multiplicity_with(&self, provenance: Provenance) -> usize {
        self.entries.iter().filter(|e| e.provenance == provenance).map(|e| e.multiplicity).sum()
    }

    /// Apply `f` to every value, keeping multiplicities and provenance.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Spectrum {
        Spectrum {
            entries: self
                .entries
                .iter()
                .map(|e| Eigenvalue { value: f(e.value), multiplicity: e.multiplicity, provenance: e.provenance })
                .collect(),
        }
    }

    pub fn sum(&self) -> Complex64 {
        self.entries.iter().map(|e| e.value * e.multiplicity as f64).sum()
    }

    /// CSV with header `re,im,multiplicity,provenance`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity,provenance\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(e.value.re),
                fmt_f64(e.value.im),
                e.multiplicity,
                e.provenance
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut out = Spectrum::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if idx == 0 || line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse { line: idx + 1, message };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(bad(format!("expected 4 fields, got {}", fields.len())));
            }
            let re: f64 = fields[0].parse().map_err(|_| bad(format!("bad real part {:?}", fields[0])))?;
            let im: f64 = fields[1].parse().map_err(|_| bad(format!("bad imaginary part {:?}", fields[1])))?;
            let m: usize = fields[2].parse().map_err(|_| bad(format!("bad multiplicity {:?}", fields[2])))?;
            let p: Provenance = fields[3].parse().map_err(|_| bad(format!("bad provenance {:?}", fields[3])))?;
            out.push(Complex64::new(re, im), m, p);
        }
        Ok(out)
    }
}

/// Round-trip-safe float formatting (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}
