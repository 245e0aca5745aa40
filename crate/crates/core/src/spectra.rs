//! Factor spectra: built-in catalog (round spheres, real projective spaces)
//! and the JSON spectrum file format.

use std::f64::consts::PI;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{from_int, serde_q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub index: usize,
    #[serde(with = "serde_q")]
    pub eigenvalue: BigRational,
    pub multiplicity: u64,
}

/// Spectral and geometric data of one factor manifold.
///
/// Entries are the distinct Laplace–Beltrami eigenvalues `0 = ρ_0 < ρ_1 < ...`
/// with multiplicities, truncated to however many the caller knows. The
/// struct is validated on construction and immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpectrum {
    name: String,
    dim: u32,
    scalar_curvature: BigRational,
    volume: Option<f64>,
    entries: Vec<SpectrumEntry>,
    einstein: bool,
    harmonically_free: bool,
}

/// On-disk representation. Multiplicities are signed so that a negative value
/// produces a validation error instead of a parse error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub name: String,
    pub dim: u32,
    #[serde(with = "serde_q")]
    pub scalar_curvature: BigRational,
    pub volume: Option<f64>,
    pub einstein: bool,
    pub harmonically_free: bool,
    pub entries: Vec<SpectrumFileEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumFileEntry {
    pub index: usize,
    #[serde(with = "serde_q")]
    pub eigenvalue: BigRational,
    pub multiplicity: i64,
}

impl FactorSpectrum {
    pub fn builder(
        name: impl Into<String>,
        dim: u32,
        scalar_curvature: BigRational,
    ) -> FactorBuilder {
        FactorBuilder {
            file: SpectrumFile {
                name: name.into(),
                dim,
                scalar_curvature,
                volume: None,
                einstein: false,
                harmonically_free: false,
                entries: Vec::new(),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn scalar_curvature(&self) -> &BigRational {
        &self.scalar_curvature
    }

    pub fn volume(&self) -> Option<f64> {
        self.volume
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn truncation_count(&self) -> usize {
        self.entries.len()
    }

    pub fn einstein(&self) -> bool {
        self.einstein
    }

    pub fn harmonically_free(&self) -> bool {
        self.harmonically_free
    }

    pub fn eigenvalue(&self, index: usize) -> Option<&BigRational> {
        self.entries.get(index).map(|e| &e.eigenvalue)
    }

    pub fn multiplicity(&self, index: usize) -> Option<u64> {
        self.entries.get(index).map(|e| e.multiplicity)
    }

    /// Same spectrum with the harmonic-freeness flag replaced.
    pub fn with_harmonically_free(mut self, flag: bool) -> Self {
        self.harmonically_free = flag;
        self
    }

    /// Spectrum of the metric `c·g`: eigenvalues and scalar curvature scale by
    /// `1/c`, volume by `c^{dim/2}`.
    pub fn scaled_metric(&self, c: &BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::NonPositiveLambda(c.clone()));
        }
        let inv = c.recip();
        let mut out = self.clone();
        out.scalar_curvature = &self.scalar_curvature * &inv;
        for e in &mut out.entries {
            e.eigenvalue = &e.eigenvalue * &inv;
        }
        out.volume = self
            .volume
            .map(|v| v * crate::rational::to_f64(c).powf(self.dim as f64 / 2.0));
        Ok(out)
    }

    pub fn to_file(&self) -> SpectrumFile {
        SpectrumFile {
            name: self.name.clone(),
            dim: self.dim,
            scalar_curvature: self.scalar_curvature.clone(),
            volume: self.volume,
            einstein: self.einstein,
            harmonically_free: self.harmonically_free,
            entries: self
                .entries
                .iter()
                .map(|e| SpectrumFileEntry {
                    index: e.index,
                    eigenvalue: e.eigenvalue.clone(),
                    multiplicity: e.multiplicity as i64,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpectrumFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::try_from(file)
    }
}

impl TryFrom<SpectrumFile> for FactorSpectrum {
    type Error = Error;

    fn try_from(file: SpectrumFile) -> Result<Self> {
        if file.dim < 1 {
            return Err(Error::Dimension {
                dim: file.dim,
                reason: "factor dimension must be at least 1",
            });
        }
        if let Some(v) = file.volume {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidFactor(format!(
                    "volume must be positive, got {v}"
                )));
            }
        }
        if file.entries.is_empty() {
            return Err(Error::InvalidFactor(
                "spectrum must list at least the constant eigenvalue 0".into(),
            ));
        }

        let mut entries = Vec::with_capacity(file.entries.len());
        for (pos, e) in file.entries.iter().enumerate() {
            let fail = |reason: String| Error::Validation { index: pos, reason };
            if e.index != pos {
                return Err(fail(format!("entry index {} out of order", e.index)));
            }
            if e.multiplicity <= 0 {
                return Err(fail(format!("nonpositive multiplicity {}", e.multiplicity)));
            }
            if pos == 0 {
                if !e.eigenvalue.is_zero() {
                    return Err(fail("first eigenvalue must be 0".into()));
                }
                if e.multiplicity != 1 {
                    return Err(fail("constant eigenspace multiplicity must be 1".into()));
                }
            } else if e.eigenvalue <= file.entries[pos - 1].eigenvalue {
                return Err(fail(format!("non-increasing at index {pos}")));
            }
            entries.push(SpectrumEntry {
                index: pos,
                eigenvalue: e.eigenvalue.clone(),
                multiplicity: e.multiplicity as u64,
            });
        }

        // Lichnerowicz–Obata: ρ_1 ≥ κ/(dim − 1) for Einstein metrics with κ > 0.
        if file.einstein
            && file.scalar_curvature.is_positive()
            && file.dim >= 2
            && entries.len() >= 2
        {
            let bound = &file.scalar_curvature / from_int(file.dim as i64 - 1);
            if entries[1].eigenvalue < bound {
                return Err(Error::Validation {
                    index: 1,
                    reason: format!(
                        "Einstein factor violates the Lichnerowicz bound rho_1 >= {}",
                        crate::rational::format_rational(&bound)
                    ),
                });
            }
        }

        Ok(FactorSpectrum {
            name: file.name,
            dim: file.dim,
            scalar_curvature: file.scalar_curvature,
            volume: file.volume,
            entries,
            einstein: file.einstein,
            harmonically_free: file.harmonically_free,
        })
    }
}

pub struct FactorBuilder {
    file: SpectrumFile,
}

impl FactorBuilder {
    /// Appends the next eigenvalue. Entry indices are assigned in order.
    pub fn eigen(mut self, eigenvalue: BigRational, multiplicity: u64) -> Self {
        let index = self.file.entries.len();
        self.file.entries.push(SpectrumFileEntry {
            index,
            eigenvalue,
            multiplicity: multiplicity as i64,
        });
        self
    }

    pub fn volume(mut self, v: f64) -> Self {
        self.file.volume = Some(v);
        self
    }

    pub fn einstein(mut self, flag: bool) -> Self {
        self.file.einstein = flag;
        self
    }

    pub fn harmonically_free(mut self, flag: bool) -> Self {
        self.file.harmonically_free = flag;
        self
    }

    pub fn build(self) -> Result<FactorSpectrum> {
        FactorSpectrum::try_from(self.file)
    }
}

pub fn load_factor(path: impl AsRef<Path>) -> Result<FactorSpectrum> {
    let text = std::fs::read_to_string(path)?;
    FactorSpectrum::from_json(&text)
}

pub fn save_factor(f: &FactorSpectrum, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, f.to_json()?)?;
    Ok(())
}

/// Dimension of the space of degree-`k` harmonic polynomials in `n + 1`
/// variables: `C(n+k, k) − C(n+k−2, k−2)`.
pub fn harmonic_dim(n: u32, k: u32) -> u64 {
    let n = n as u64;
    let k = k as u64;
    let all = binomial(n + k, k);
    if k < 2 {
        all
    } else {
        all - binomial(n + k - 2, k - 2)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc as u64
}

/// Multiplicity of `k(k+n−1)` on the unit `Sⁿ`, via `(2k+n−1)/(k+n−1) · C(k+n−1, k)`.
fn sphere_multiplicity(n: u32, k: u32) -> u64 {
    if k == 0 {
        return 1;
    }
    let (n, k) = (n as u64, k as u64);
    let c = binomial(k + n - 1, k) as u128;
    (c * (2 * k + n - 1) as u128 / (k + n - 1) as u128) as u64
}

/// Volume of the unit round `Sⁿ`, from `ω_n = 2π/(n−1) · ω_{n−2}`.
pub fn unit_sphere_volume(n: u32) -> f64 {
    let (mut vol, start) = if n.is_multiple_of(2) {
        (2.0, 0)
    } else {
        (2.0 * PI, 1)
    };
    let mut d = start;
    while d < n {
        d += 2;
        vol *= 2.0 * PI / (d as f64 - 1.0);
    }
    vol
}

/// Built-in factor spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Catalog {
    Sphere,
    Projective,
}

impl Catalog {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "sphere" | "S" => Some(Catalog::Sphere),
            "rp" | "RP" => Some(Catalog::Projective),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Catalog::Sphere => "sphere",
            Catalog::Projective => "rp",
        }
    }

    /// The `k`-th distinct eigenvalue on the unit-radius model.
    pub fn eigenvalue(self, n: u32, k: u32) -> BigRational {
        let d = match self {
            Catalog::Sphere => k as i64,
            Catalog::Projective => 2 * k as i64,
        };
        from_int(d * (d + n as i64 - 1))
    }

    pub fn spectrum(self, n: u32, count: usize) -> Result<FactorSpectrum> {
        match self {
            Catalog::Sphere => sphere_spectrum(n, count),
            Catalog::Projective => projective_spectrum(n, count),
        }
    }

    /// Smallest `count` whose last eigenvalue reaches `bound`.
    pub fn count_reaching(self, n: u32, bound: &BigRational) -> usize {
        let mut k = 0u32;
        while &self.eigenvalue(n, k) < bound {
            k += 1;
        }
        k as usize + 1
    }
}

fn check_catalog_args(n: u32, count: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension {
            dim: n,
            reason: "catalog spaces need n >= 2",
        });
    }
    if count == 0 {
        return Err(Error::InvalidFactor(
            "eigenvalue count must be positive".into(),
        ));
    }
    Ok(())
}

/// Unit-radius round `Sⁿ`: `κ = n(n−1)`, `ρ_k = k(k+n−1)`.
pub fn sphere_spectrum(n: u32, count: usize) -> Result<FactorSpectrum> {
    check_catalog_args(n, count)?;
    let kappa = from_int(n as i64 * (n as i64 - 1));
    let mut b = FactorSpectrum::builder(format!("S^{n}"), n, kappa)
        .volume(unit_sphere_volume(n))
        .einstein(true)
        .harmonically_free(true);
    for k in 0..count as u32 {
        b = b.eigen(Catalog::Sphere.eigenvalue(n, k), sphere_multiplicity(n, k));
    }
    b.build()
}

/// `ℝPⁿ` as the quotient of the unit sphere: even-degree harmonics only.
pub fn projective_spectrum(n: u32, count: usize) -> Result<FactorSpectrum> {
    check_catalog_args(n, count)?;
    let kappa = from_int(n as i64 * (n as i64 - 1));
    let mut b = FactorSpectrum::builder(format!("RP^{n}"), n, kappa)
        .volume(unit_sphere_volume(n) / 2.0)
        .einstein(true)
        .harmonically_free(true);
    for k in 0..count as u32 {
        b = b.eigen(Catalog::Projective.eigenvalue(n, k), harmonic_dim(n, 2 * k));
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn triples(f: &FactorSpectrum) -> Vec<(usize, BigRational, u64)> {
        f.entries()
            .iter()
            .map(|e| (e.index, e.eigenvalue.clone(), e.multiplicity))
            .collect()
    }

    fn t(i: usize, ev: i64, m: u64) -> (usize, BigRational, u64) {
        (i, from_int(ev), m)
    }

    /// Number of monomials of degree `k` in `vars` variables, by enumeration.
    fn count_monomials(vars: u32, k: u32) -> u64 {
        if vars == 1 {
            return 1;
        }
        (0..=k)
            .map(|first| count_monomials(vars - 1, k - first))
            .sum()
    }

    /// Harmonic polynomials of degree k = kernel of the surjective Laplacian
    /// P_k → P_{k−2}, so dim = #monomials(k) − #monomials(k−2).
    fn harmonic_dim_by_monomials(n: u32, k: u32) -> u64 {
        let below = if k >= 2 {
            count_monomials(n + 1, k - 2)
        } else {
            0
        };
        count_monomials(n + 1, k) - below
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(
            triples(&sphere_spectrum(2, 3).unwrap()),
            vec![t(0, 0, 1), t(1, 2, 3), t(2, 6, 5)]
        );
        assert_eq!(
            triples(&sphere_spectrum(3, 2).unwrap()),
            vec![t(0, 0, 1), t(1, 3, 4)]
        );
        assert_eq!(triples(&sphere_spectrum(2, 1).unwrap()), vec![t(0, 0, 1)]);
        let s3 = sphere_spectrum(3, 1).unwrap();
        assert_eq!(s3.scalar_curvature(), &from_int(6));
        assert!(s3.einstein() && s3.harmonically_free());
    }

    #[test]
    fn projective_examples() {
        assert_eq!(
            triples(&projective_spectrum(2, 2).unwrap()),
            vec![t(0, 0, 1), t(1, 6, 5)]
        );
        assert_eq!(
            triples(&projective_spectrum(3, 2).unwrap()),
            vec![t(0, 0, 1), t(1, 8, 9)]
        );
        assert_eq!(
            triples(&projective_spectrum(2, 1).unwrap()),
            vec![t(0, 0, 1)]
        );
        let rp = projective_spectrum(4, 1).unwrap();
        let s = sphere_spectrum(4, 1).unwrap();
        assert!((rp.volume().unwrap() * 2.0 - s.volume().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn catalog_rejects_low_dimension() {
        assert!(matches!(
            sphere_spectrum(1, 3),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            projective_spectrum(0, 3),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn harmonic_dim_examples() {
        assert_eq!(harmonic_dim(2, 1), 3);
        assert_eq!(harmonic_dim(2, 2), 5);
        assert_eq!(harmonic_dim(5, 0), 1);
        assert_eq!(harmonic_dim(3, 2), 9);
    }

    #[test]
    fn harmonic_dim_matches_monomial_count() {
        for n in 2..=6 {
            for k in 0..=10 {
                assert_eq!(
                    harmonic_dim(n, k),
                    harmonic_dim_by_monomials(n, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn sphere_multiplicities_match_harmonic_dim() {
        for n in 2..=6 {
            let s = sphere_spectrum(n, 11).unwrap();
            for k in 0..=10u32 {
                assert_eq!(
                    s.multiplicity(k as usize),
                    Some(harmonic_dim(n, k)),
                    "n={n} k={k}"
                );
            }
            let rp = projective_spectrum(n, 6).unwrap();
            for k in 0..6u32 {
                assert_eq!(
                    rp.multiplicity(k as usize),
                    Some(harmonic_dim_by_monomials(n, 2 * k))
                );
            }
        }
    }

    #[test]
    fn sphere_eigenvalues_strictly_increase() {
        for n in 2..=6 {
            let s = sphere_spectrum(n, 12).unwrap();
            for w in s.entries().windows(2) {
                let gap = &w[1].eigenvalue - &w[0].eigenvalue;
                assert_eq!(gap, from_int(2 * w[0].index as i64 + n as i64));
            }
        }
    }

    #[test]
    fn catalog_spaces_are_never_degenerate() {
        // ρ_1 > κ/(m−1) for every total dimension m > dim.
        for n in 2..=6u32 {
            for f in [
                sphere_spectrum(n, 2).unwrap(),
                projective_spectrum(n, 2).unwrap(),
            ] {
                for m in n + 2..=n + 5 {
                    let threshold = f.scalar_curvature() / from_int(m as i64 - 1);
                    assert!(f.eigenvalue(1).unwrap() > &threshold);
                }
            }
        }
    }

    #[test]
    fn unit_sphere_volumes() {
        assert!((unit_sphere_volume(1) - 2.0 * PI).abs() < 1e-12);
        assert!((unit_sphere_volume(2) - 4.0 * PI).abs() < 1e-12);
        assert!((unit_sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((unit_sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn file_round_trip_equals_catalog() {
        let json = r#"{"name":"S^2","dim":2,"scalar_curvature":"2","volume":12.566370614359172,
            "einstein":true,"harmonically_free":true,
            "entries":[{"index":0,"eigenvalue":"0","multiplicity":1},
                       {"index":1,"eigenvalue":"2","multiplicity":3}]}"#;
        let f = FactorSpectrum::from_json(json).unwrap();
        assert_eq!(f, sphere_spectrum(2, 2).unwrap());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s3.json");
        let s3 = sphere_spectrum(3, 10).unwrap();
        save_factor(&s3, &path).unwrap();
        assert_eq!(load_factor(&path).unwrap(), s3);
    }

    fn file_with(entries: &[(&str, i64)]) -> String {
        let list: Vec<String> = entries
            .iter()
            .enumerate()
            .map(|(i, (ev, m))| {
                format!(r#"{{"index":{i},"eigenvalue":"{ev}","multiplicity":{m}}}"#)
            })
            .collect();
        format!(
            r#"{{"name":"x","dim":2,"scalar_curvature":"2","volume":null,"einstein":false,
                "harmonically_free":false,"entries":[{}]}}"#,
            list.join(",")
        )
    }

    #[test]
    fn validation_errors_name_the_entry() {
        let err =
            FactorSpectrum::from_json(&file_with(&[("0", 1), ("2", 3), ("2", 1)])).unwrap_err();
        assert!(matches!(err, Error::Validation { index: 2, .. }));
        assert!(err.to_string().contains("non-increasing at index 2"));

        let err = FactorSpectrum::from_json(&file_with(&[("0", 3), ("2", 3)])).unwrap_err();
        assert!(err
            .to_string()
            .contains("constant eigenspace multiplicity must be 1"));

        let err = FactorSpectrum::from_json(&file_with(&[("1/2", 1)])).unwrap_err();
        assert!(matches!(err, Error::Validation { index: 0, .. }));

        let err = FactorSpectrum::from_json(&file_with(&[("0", 1), ("3", 0)])).unwrap_err();
        assert!(matches!(err, Error::Validation { index: 1, .. }));

        assert!(matches!(
            FactorSpectrum::from_json("{\"name\": 3}"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn einstein_flag_enforces_lichnerowicz() {
        let err = FactorSpectrum::builder("fake", 2, from_int(2))
            .eigen(from_int(0), 1)
            .eigen(q(1, 2), 2)
            .einstein(true)
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::Validation { index: 1, .. }));
        // Without the flag the same data is a legal (non-Einstein) factor.
        assert!(FactorSpectrum::builder("fake", 2, from_int(2))
            .eigen(from_int(0), 1)
            .eigen(q(1, 2), 2)
            .build()
            .is_ok());
    }

    #[test]
    fn scaling_divides_eigenvalues() {
        let s = sphere_spectrum(2, 3).unwrap();
        let scaled = s.scaled_metric(&from_int(2)).unwrap();
        assert_eq!(scaled.scalar_curvature(), &from_int(1));
        assert_eq!(scaled.eigenvalue(2), Some(&from_int(3)));
        assert!((scaled.volume().unwrap() - 8.0 * PI).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn json_round_trip_is_identity(
            dim in 1u32..6,
            kn in -20i64..20, kd in 1i64..7,
            steps in proptest::collection::vec((1i64..50, 1i64..5, 1u64..40), 0..8),
        ) {
            let mut b = FactorSpectrum::builder("random", dim, q(kn, kd)).eigen(from_int(0), 1);
            let mut ev = from_int(0);
            for (num, den, mult) in steps {
                ev += q(num, den);
                b = b.eigen(ev.clone(), mult);
            }
            let f = b.build().unwrap();
            proptest::prop_assert_eq!(FactorSpectrum::from_json(&f.to_json().unwrap()).unwrap(), f);
        }
    }
}
