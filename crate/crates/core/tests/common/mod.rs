//! Seeded random corpus of small rational product families shared by the
//! invariant tests and the acceptance suite.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yamabif::bifurcation::{
    enumerate_instants, morse_index, rigidity_intervals, DegeneracyInstant,
};
use yamabif::family::ProductFamily;
use yamabif::oracle::{brute_morse_index, grid_scan_instants};
use yamabif::rational::{format_rational, from_int, q, BigRational};
use yamabif::spectra::FactorSpectrum;

pub const CORPUS_SEED: u64 = 0x5eed_cafe;
pub const CORPUS_SIZE: usize = 100;
/// Families whose oracle grid would exceed this many points are redrawn.
pub const MAX_GRID_POINTS: i64 = 1500;

pub struct Case {
    pub family: ProductFamily,
    pub lo: BigRational,
    pub hi: BigRational,
    /// Grid resolution: a tenth of the smallest gap between instants and window ends.
    pub delta: BigRational,
}

fn small_rational(rng: &mut impl Rng, max_num: i64) -> BigRational {
    q(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=4))
}

pub fn random_factor(
    rng: &mut impl Rng,
    name: &str,
    dim: u32,
    kappa: BigRational,
) -> FactorSpectrum {
    let count = rng.gen_range(2..=8);
    let mut b = FactorSpectrum::builder(name, dim, kappa).eigen(BigRational::zero(), 1);
    let mut rho = BigRational::zero();
    for _ in 1..count {
        rho += q(rng.gen_range(1..=12), rng.gen_range(1..=3));
        b = b.eigen(rho.clone(), rng.gen_range(1..=5));
    }
    b.volume(rng.gen_range(1.0..20.0))
        .build()
        .expect("generated spectrum is valid")
}

/// A factor whose top listed eigenvalue is at least `top`.
pub fn random_factor_reaching(
    rng: &mut impl Rng,
    name: &str,
    dim: u32,
    kappa: BigRational,
    top: &BigRational,
) -> FactorSpectrum {
    let f = random_factor(rng, name, dim, kappa.clone());
    let mut b = FactorSpectrum::builder(name, dim, kappa);
    for e in f.entries() {
        b = b.eigen(e.eigenvalue.clone(), e.multiplicity);
    }
    let last = &f.entries().last().unwrap().eigenvalue;
    if last < top {
        b = b.eigen(top.ceil(), rng.gen_range(1..=5));
    }
    b.volume(f.volume().unwrap())
        .build()
        .expect("generated spectrum is valid")
}

/// Family with `κ⁽⁰⁾ ≤ 0` and `κ⁽¹⁾ ≤ 0` (or `> 0` with `positive_second`),
/// listed far enough to cover every `λ ≥ lo`. Degenerate pairs are redrawn.
pub fn sign_family(rng: &mut impl Rng, positive_second: bool, lo: &BigRational) -> ProductFamily {
    loop {
        let (d0, d1) = random_dims(rng);
        let m1 = from_int((d0 + d1) as i64 - 1);
        let k0 = q(-rng.gen_range(0..=24), rng.gen_range(1..=4));
        let k1 = if positive_second {
            q(rng.gen_range(1..=24), rng.gen_range(1..=4))
        } else {
            q(-rng.gen_range(0..=24), rng.gen_range(1..=4))
        };
        // A_last ≥ −B_0/lo; since A_0 = −κ⁽⁰⁾/(m−1) ≥ 0, B_last ≥ 0 covers any hi.
        let t0 = &k0 / &m1;
        let t1 = &k1 / &m1;
        let top0 = std::cmp::max(&t1 / lo + &t0, t0.clone());
        let top1 = std::cmp::max(t1.clone(), BigRational::zero());
        let f0 = random_factor_reaching(rng, "X", d0, k0, &top0);
        let f1 = random_factor_reaching(rng, "Y", d1, k1, &top1);
        let fam = ProductFamily::new(f0, f1).expect("dimension ≥ 3");
        if !fam.degenerate_pair() {
            return fam;
        }
    }
}

fn random_dims(rng: &mut impl Rng) -> (u32, u32) {
    loop {
        let (d0, d1) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        if d0 + d1 >= 3 {
            return (d0, d1);
        }
    }
}

fn random_family(rng: &mut impl Rng) -> ProductFamily {
    loop {
        let (d0, d1) = random_dims(rng);
        let (k0, k1) = (small_rational(rng, 24), small_rational(rng, 24));
        let f0 = random_factor(rng, "X", d0, k0);
        let f1 = random_factor(rng, "Y", d1, k1);
        let fam = ProductFamily::new(f0, f1).expect("dimension ≥ 3");
        if !fam.degenerate_pair() {
            return fam;
        }
    }
}

/// A window inside the range the listed spectra cover, clipped to
/// `[1/100, 100]`.
fn window_for(fam: &ProductFamily) -> Option<(BigRational, BigRational)> {
    let (lower, upper) = fam.point_truncation_range()?;
    let lo = std::cmp::max(lower * q(5, 4), q(1, 100));
    let hi = match upper {
        Some(u) => std::cmp::min(u * q(4, 5), from_int(100)),
        None => from_int(100),
    };
    (lo < hi).then_some((lo, hi))
}

fn resolution(fam: &ProductFamily, lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
    // engine failures must surface, not thin out the corpus
    let instants = enumerate_instants(fam, lo, hi).expect("engine accepts a covered window");
    let mut points = vec![lo.clone()];
    points.extend(instants.into_iter().map(|i| i.lambda));
    points.push(hi.clone());
    let gap = points
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .filter(|g| !g.is_zero())
        .min()?;
    let delta = gap / from_int(10);
    let grid = ((hi - lo) / &delta).ceil().to_integer();
    (grid <= BigInt::from(MAX_GRID_POINTS)).then_some(delta)
}

pub fn corpus(seed: u64, size: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let family = random_family(&mut rng);
        let Some((lo, hi)) = window_for(&family) else {
            continue;
        };
        let Some(delta) = resolution(&family, &lo, &hi) else {
            continue;
        };
        out.push(Case {
            family,
            lo,
            hi,
            delta,
        });
    }
    out
}

pub fn default_corpus() -> Vec<Case> {
    corpus(CORPUS_SEED, CORPUS_SIZE)
}

/// Random scale factors in `[1/4, 4]`, never 1.
pub fn scale_factor(rng: &mut impl Rng) -> BigRational {
    loop {
        let c = q(rng.gen_range(1..=16), rng.gen_range(1..=4));
        if !c.is_one() && c >= q(1, 4) && c <= from_int(4) {
            return c;
        }
    }
}

fn show(x: &BigRational) -> String {
    format_rational(x)
}

/// Exchanging the factors maps each instant `λ` to `1/λ`. Traversed in the
/// direction of increasing parameter the order is reversed, so every jump
/// changes sign; contributors are transposed with flipped kinds and the
/// classification is unchanged.
pub fn check_swap(case: &Case) -> Result<(), String> {
    let fam = &case.family;
    let swapped = fam.swapped().map_err(|e| e.to_string())?;
    let orig = enumerate_instants(fam, &case.lo, &case.hi).map_err(|e| e.to_string())?;
    let mirrored = enumerate_instants(&swapped, &case.hi.recip(), &case.lo.recip())
        .map_err(|e| e.to_string())?;
    if orig.len() != mirrored.len() {
        return Err(format!(
            "{} instants vs {} after swap",
            orig.len(),
            mirrored.len()
        ));
    }
    for (a, b) in orig.iter().zip(mirrored.iter().rev()) {
        if b.lambda != a.lambda.recip() {
            return Err(format!(
                "instant {} maps to {}, expected its reciprocal",
                show(&a.lambda),
                show(&b.lambda)
            ));
        }
        if b.delta_n != -a.delta_n || b.classification != a.classification {
            return Err(format!(
                "instant {}: delta {} / {:?} vs swapped {} / {:?}",
                show(&a.lambda),
                a.delta_n,
                a.classification,
                b.delta_n,
                b.classification
            ));
        }
        let mut transposed: Vec<_> = a
            .contributors
            .iter()
            .map(|c| (c.j, c.i, c.multiplicity, c.kind.swapped()))
            .collect();
        transposed.sort_by_key(|t| (t.0, t.1));
        let mut got: Vec<_> = b
            .contributors
            .iter()
            .map(|c| (c.i, c.j, c.multiplicity, c.kind))
            .collect();
        got.sort_by_key(|t| (t.0, t.1));
        if transposed != got {
            return Err(format!(
                "contributors at {} do not transpose",
                show(&a.lambda)
            ));
        }
    }
    Ok(())
}

/// Replacing `g⁽¹⁾` by `c·g⁽¹⁾` maps instants `λ ↦ λ/c` with identical jumps,
/// contributors and classification.
pub fn check_scaling(case: &Case, c: &BigRational) -> Result<(), String> {
    let fam = &case.family;
    let scaled_factor = fam.factor(1).scaled_metric(c).map_err(|e| e.to_string())?;
    let scaled =
        ProductFamily::new(fam.factor(0).clone(), scaled_factor).map_err(|e| e.to_string())?;
    let orig = enumerate_instants(fam, &case.lo, &case.hi).map_err(|e| e.to_string())?;
    let moved =
        enumerate_instants(&scaled, &(&case.lo / c), &(&case.hi / c)).map_err(|e| e.to_string())?;
    let expect: Vec<DegeneracyInstant> = orig
        .into_iter()
        .map(|mut i| {
            i.lambda = &i.lambda / c;
            i
        })
        .collect();
    if expect != moved {
        return Err(format!(
            "scaling by {} does not move instants to λ/c",
            show(c)
        ));
    }
    Ok(())
}

/// Grid scan, brute-force index and the engine agree on one case.
pub fn check_oracles(case: &Case) -> Result<(), String> {
    let fam = &case.family;
    let instants = enumerate_instants(fam, &case.lo, &case.hi).map_err(|e| e.to_string())?;
    let scan =
        grid_scan_instants(fam, &case.lo, &case.hi, &case.delta).map_err(|e| e.to_string())?;
    if !scan.is_consistent() || scan.detected.len() != instants.len() {
        return Err(format!(
            "grid scan at {} found {} cells for {} instants (unmatched {:?})",
            show(&case.delta),
            scan.detected.len(),
            instants.len(),
            scan.unmatched_instants
        ));
    }

    let mut samples: Vec<BigRational> = rigidity_intervals(fam, &case.lo, &case.hi)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.midpoint())
        .collect();
    for end in [&case.lo, &case.hi] {
        if instants.iter().all(|i| &i.lambda != end) {
            samples.push(end.clone());
        }
    }
    samples.sort();
    let mut indices = Vec::with_capacity(samples.len());
    for x in &samples {
        let engine = morse_index(fam, x).map_err(|e| e.to_string())?;
        let brute = brute_morse_index(fam, x).map_err(|e| e.to_string())?;
        if engine != brute {
            return Err(format!(
                "index at {}: engine {engine}, brute force {brute}",
                show(x)
            ));
        }
        indices.push(brute as i64);
    }
    for (w, n) in samples.windows(2).zip(indices.windows(2)) {
        let jumps: i64 = instants
            .iter()
            .filter(|i| w[0] < i.lambda && i.lambda < w[1])
            .map(|i| i.delta_n)
            .sum();
        if n[1] - n[0] != jumps {
            return Err(format!(
                "brute index changes by {} between {} and {}, jumps sum to {jumps}",
                n[1] - n[0],
                show(&w[0]),
                show(&w[1])
            ));
        }
    }
    Ok(())
}
