//! Analysis reports, bifurcation-diagram samples and factor sources.

use std::io::Write;
use std::path::PathBuf;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bifurcation::{
    complement, enumerate_instants, morse_index, DegeneracyInstant, RigidityInterval,
};
use crate::error::{Error, Result};
use crate::family::ProductFamily;
use crate::rational::{format_rational, format_significant_rational, from_int, serde_q};
use crate::spectra::{load_factor, Catalog, FactorSpectrum};
use crate::sphere_case::{yamabe_obstruction, ObstructionResult};

pub const INDEX_CONVENTION: &str =
    "morse_index counts negative Jacobi eigenvalues sigma_{i,j}(lambda) \
    with (i,j) != (0,0), weighted by multiplicity; the constant mode is excluded, so where \
    kappa_lambda > 0 this is one less than the number of Laplacian eigenvalues below \
    kappa_lambda/(m-1). Index jumps are the same under either count.";

pub const RADIUS_CONVENTION: &str = "catalog spheres and projective spaces use the unit-radius \
    round metric: kappa = n(n-1), rho_k = k(k+n-1) (even degrees only on RP^n); volumes are \
    unit-radius volumes. Scaling a factor's metric by c divides its eigenvalues and kappa by c \
    and rescales every instant accordingly.";

/// Where a factor spectrum comes from: a catalog descriptor such as
/// `sphere:3:12` / `rp:2:8`, or a spectrum JSON file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorSource {
    Catalog {
        catalog: Catalog,
        n: u32,
        count: usize,
    },
    File(PathBuf),
}

impl FactorSource {
    /// Three `:`-separated fields ending in two integers are read as a catalog
    /// descriptor (and an unknown catalog name is an error); anything else is
    /// a file path.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if let [name, n, count] = parts[..] {
            if let (Ok(n), Ok(count)) = (n.parse::<u32>(), count.parse::<usize>()) {
                let catalog = Catalog::parse(name).ok_or_else(|| {
                    Error::Usage(format!(
                        "unknown catalog space {name:?} (expected sphere or rp)"
                    ))
                })?;
                return Ok(FactorSource::Catalog { catalog, n, count });
            }
        }
        Ok(FactorSource::File(PathBuf::from(s)))
    }

    pub fn load(&self) -> Result<FactorSpectrum> {
        match self {
            FactorSource::Catalog { catalog, n, count } => catalog.spectrum(*n, *count),
            FactorSource::File(path) => load_factor(path),
        }
    }

    /// For catalog sources, the eigenvalue count that reaches `bound`.
    pub fn count_reaching(&self, bound: &BigRational) -> Option<usize> {
        match self {
            FactorSource::Catalog { catalog, n, .. } => Some(catalog.count_reaching(*n, bound)),
            FactorSource::File(_) => None,
        }
    }

    /// Human-readable hint appended to truncation errors.
    pub fn truncation_hint(&self, err: &Error) -> Option<String> {
        if let Error::InsufficientTruncation {
            needed_eigenvalue, ..
        } = err
        {
            if let FactorSource::Catalog { catalog, n, .. } = self {
                let count = catalog.count_reaching(*n, needed_eigenvalue);
                return Some(format!(
                    "required eigenvalue count: {count} (use {}:{n}:{count})",
                    catalog.tag()
                ));
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDescriptor {
    pub name: String,
    pub dim: u32,
    #[serde(with = "serde_q")]
    pub scalar_curvature: BigRational,
    pub volume: Option<f64>,
    pub einstein: bool,
    pub harmonically_free: bool,
    pub truncation_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub factors: Vec<FactorDescriptor>,
    pub m: u32,
    /// `None` when the listed spectrum never reaches `κ/(m−1)`.
    pub i_star: Option<usize>,
    pub j_star: Option<usize>,
    pub degenerate_pair: bool,
}

impl FamilyDescriptor {
    pub fn of(fam: &ProductFamily) -> Self {
        let factors = fam
            .factors()
            .iter()
            .map(|f| FactorDescriptor {
                name: f.name().to_string(),
                dim: f.dim(),
                scalar_curvature: f.scalar_curvature().clone(),
                volume: f.volume(),
                einstein: f.einstein(),
                harmonically_free: f.harmonically_free(),
                truncation_count: f.truncation_count(),
            })
            .collect();
        FamilyDescriptor {
            factors,
            m: fam.m(),
            i_star: fam.i_star(),
            j_star: fam.j_star(),
            degenerate_pair: fam.degenerate_pair(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "serde_q")]
    pub lo: BigRational,
    #[serde(with = "serde_q")]
    pub hi: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSample {
    #[serde(with = "serde_q")]
    pub lambda: BigRational,
    pub morse_index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub index_convention: String,
    pub radius_convention: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            index_convention: INDEX_CONVENTION.to_string(),
            radius_convention: RADIUS_CONVENTION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub family: FamilyDescriptor,
    pub window: Window,
    pub instants: Vec<DegeneracyInstant>,
    pub rigidity: Vec<RigidityInterval>,
    pub index_samples: Vec<IndexSample>,
    pub obstruction: Option<Vec<ObstructionResult>>,
    pub conventions: Conventions,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Checks that the Morse index at consecutive samples differs by the sum
    /// of `delta_n` over the instants strictly between them.
    pub fn check_telescoping(&self) -> Result<()> {
        for w in self.index_samples.windows(2) {
            let jumps: i64 = self
                .instants
                .iter()
                .filter(|i| w[0].lambda < i.lambda && i.lambda < w[1].lambda)
                .map(|i| i.delta_n)
                .sum();
            let diff = w[1].morse_index as i64 - w[0].morse_index as i64;
            if diff != jumps {
                return Err(Error::Inconsistent(format!(
                    "index samples at {} and {} differ by {diff}, instants in between sum to {jumps}",
                    format_rational(&w[0].lambda),
                    format_rational(&w[1].lambda)
                )));
            }
        }
        Ok(())
    }
}

/// Full analysis of `fam` over `[lo, hi]`.
///
/// Index samples are taken at the window ends (unless they are instants) and
/// at the midpoint of every rigidity interval. With `obstruction`, Yamabe
/// certificates are computed at every instant and midpoint.
pub fn analyze(
    fam: &ProductFamily,
    lo: &BigRational,
    hi: &BigRational,
    obstruction: bool,
) -> Result<AnalysisReport> {
    let instants = enumerate_instants(fam, lo, hi)?;
    let rigidity = complement(lo, hi, instants.iter().map(|i| &i.lambda));
    let is_instant = |x: &BigRational| instants.iter().any(|i| &i.lambda == x);

    let mut points: Vec<BigRational> = Vec::new();
    if !is_instant(lo) {
        points.push(lo.clone());
    }
    points.extend(rigidity.iter().map(RigidityInterval::midpoint));
    if !is_instant(hi) {
        points.push(hi.clone());
    }
    let index_samples = points
        .iter()
        .map(|x| {
            Ok(IndexSample {
                lambda: x.clone(),
                morse_index: morse_index(fam, x)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let obstruction = if obstruction {
        let mut at: Vec<BigRational> = instants.iter().map(|i| i.lambda.clone()).collect();
        at.extend(rigidity.iter().map(RigidityInterval::midpoint));
        at.sort();
        Some(
            at.iter()
                .map(|x| yamabe_obstruction(fam, x))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let report = AnalysisReport {
        family: FamilyDescriptor::of(fam),
        window: Window {
            lo: lo.clone(),
            hi: hi.clone(),
        },
        instants,
        rigidity,
        index_samples,
        obstruction,
        conventions: Conventions::default(),
    };
    report.check_telescoping()?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramRow {
    pub lambda: BigRational,
    pub i: usize,
    pub j: usize,
    pub sigma: BigRational,
    pub multiplicity: u64,
}

pub const DIAGRAM_HEADER: &str = "lambda,i,j,sigma,multiplicity";

/// Samples `σ_{i,j}` at `samples` evenly spaced `λ` in `[lo, hi]` (just `lo`
/// when `samples = 1`) for every listed branch with `i, j ≤ max_index`.
pub fn diagram_rows(
    fam: &ProductFamily,
    lo: &BigRational,
    hi: &BigRational,
    samples: usize,
    max_index: Option<usize>,
) -> Result<Vec<DiagramRow>> {
    crate::bifurcation::check_window(lo, hi)?;
    if samples == 0 {
        return Err(Error::Usage("sample count must be at least 1".into()));
    }
    if max_index == Some(0) {
        return Err(Error::Usage("branch index cap must be at least 1".into()));
    }
    if fam.degenerate_pair() {
        return Err(Error::DegeneratePair);
    }
    let cap = max_index.unwrap_or(usize::MAX);
    let branches: Vec<(usize, usize)> = fam
        .branches()
        .filter(|&(i, j)| i <= cap && j <= cap)
        .collect();

    let step = if samples > 1 {
        (hi - lo) / from_int(samples as i64 - 1)
    } else {
        BigRational::from_integer(0.into())
    };
    let mut rows = Vec::with_capacity(samples * branches.len());
    for k in 0..samples {
        let lambda = if k + 1 == samples && samples > 1 {
            hi.clone()
        } else {
            lo + &step * from_int(k as i64)
        };
        for &(i, j) in &branches {
            rows.push(DiagramRow {
                lambda: lambda.clone(),
                i,
                j,
                sigma: fam.sigma_eval(i, j, &lambda)?,
                multiplicity: fam.multiplicity(i, j)?,
            });
        }
    }
    Ok(rows)
}

/// CSV with [`DIAGRAM_HEADER`]; `lambda` and `sigma` use 12 significant digits.
pub fn write_diagram_csv<W: Write>(rows: &[DiagramRow], mut out: W) -> Result<()> {
    writeln!(out, "{DIAGRAM_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_significant_rational(&r.lambda, 12),
            r.i,
            r.j,
            format_significant_rational(&r.sigma, 12),
            r.multiplicity
        )?;
    }
    Ok(())
}
