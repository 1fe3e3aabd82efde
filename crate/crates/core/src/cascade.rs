//! Synthetic gapped complexes and maps with prescribed zero-energy parts, and a rehearsal of
//! the gapped Cartan argument on them.
//!
//! A deformation of a `Z/2` complex `(B, ∂)` is `P ∂̂ P⁻¹`, where `∂̂` is the zero-energy lift
//! and `P = I + N` with `N` strictly triangular, degree-preserving and supported in energies
//! `≥ ħ`. Maps between deformations are conjugates of lifted chain maps plus null-homotopic
//! gapped corrections, so every chain-map law holds exactly and every zero-energy part is the
//! prescribed one.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::borel::{borel_tower, required_depth, stage_projection};
use crate::complexes::{FilteredComplex, GappedMap, NovikovMatrix};
use crate::gcw::{quotient_complex, EGFamily, GcwComplex};
use crate::homology::{gapped_iso_check, Barcode, Betti, DegreeWindow, Verdict};
use crate::novikov::{Energy, NovikovScalar, Valuation};
use crate::telescope::{build_telescope, is_homotopy, universal_map};
use crate::z2::{Generator, Z2ChainMap, Z2Complex};
use crate::{Error, Result};

/// Probability that an admissible entry of a random correction is nonzero.
const DENSITY: f64 = 0.25;
/// Random energies are `k·ħ` with `1 ≤ k ≤ MAX_MULTIPLE`.
const MAX_MULTIPLE: i64 = 3;

/// A gapped complex whose zero-energy part is a prescribed `Z/2` complex.
#[derive(Debug, Clone)]
pub struct SyntheticFloerComplex {
    pub base: Z2Complex,
    pub deformation: Arc<FilteredComplex>,
    pub minimal_energy: Energy,
    /// `P`, with `∂ = P ∂̂ P⁻¹`.
    pub conjugator: NovikovMatrix,
    pub conjugator_inverse: NovikovMatrix,
}

impl SyntheticFloerComplex {
    /// Checks `bar = base`, the gap and `∂² = 0`.
    pub fn verify(&self) -> Result<()> {
        let gap = self.deformation.gap_certificate()?;
        if gap < Valuation::Finite(self.minimal_energy) {
            return Err(Error::Invariant { location: "deformation".into(), detail: format!("gap {gap} < {}", self.minimal_energy) });
        }
        if self.deformation.bar_reduce()? != self.base {
            return Err(Error::Invariant { location: "deformation".into(), detail: "zero-energy part differs from the base".into() });
        }
        Ok(())
    }
}

fn random_energy(rng: &mut ChaCha8Rng, gap: Energy) -> NovikovScalar {
    let k = rng.gen_range(1..=MAX_MULTIPLE);
    NovikovScalar::monomial(gap * Energy::from_integer(k)).expect("positive energy")
}

/// `I + N` with `N` strictly upper triangular between generators of equal degree.
fn random_unipotent(gens: &[Generator], gap: Energy, density: f64, rng: &mut ChaCha8Rng) -> Result<NovikovMatrix> {
    let mut entries = Vec::new();
    for j in 0..gens.len() {
        for i in 0..j {
            if gens[i].degree == gens[j].degree && rng.gen_bool(density) {
                entries.push((i, j, random_energy(rng, gap)));
            }
        }
    }
    NovikovMatrix::identity(gens.len()).add(&NovikovMatrix::from_entries(gens.len(), gens.len(), entries)?)
}

/// `(I + N)⁻¹ = Σ Nᵏ` over `Z/2`.
fn unipotent_inverse(p: &NovikovMatrix) -> Result<NovikovMatrix> {
    let n = p.ncols();
    let nil = p.add(&NovikovMatrix::identity(n))?;
    let mut inv = NovikovMatrix::identity(n);
    let mut power = nil.clone();
    while !power.is_zero() {
        inv = inv.add(&power)?;
        power = power.mul(&nil)?;
    }
    Ok(inv)
}

/// A random map raising degrees by `shift`, supported in energies `≥ ħ`.
fn random_gapped(source: &[Generator], target: &[Generator], shift: i32, gap: Energy, density: f64, rng: &mut ChaCha8Rng) -> Result<NovikovMatrix> {
    let mut entries = Vec::new();
    for (c, s) in source.iter().enumerate() {
        for (r, t) in target.iter().enumerate() {
            if t.degree == s.degree + shift && rng.gen_bool(density) {
                entries.push((r, c, random_energy(rng, gap)));
            }
        }
    }
    NovikovMatrix::from_entries(target.len(), source.len(), entries)
}

fn check_gap(gap: Energy) -> Result<()> {
    if gap <= Energy::zero() {
        return Err(Error::InvalidComplex(format!("minimal energy must be positive, got {gap}")));
    }
    Ok(())
}

fn deform_with(base: &Z2Complex, gap: Energy, density: f64, rng: &mut ChaCha8Rng) -> Result<SyntheticFloerComplex> {
    check_gap(gap)?;
    if let Some(v) = base.violations().first() {
        return Err(Error::InvalidComplex(v.clone()));
    }
    let p = random_unipotent(base.generators(), gap, density, rng)?;
    let p_inv = unipotent_inverse(&p)?;
    let d = p.mul(&NovikovMatrix::lift(base.differential()))?.mul(&p_inv)?;
    let deformation = Arc::new(FilteredComplex::new(base.generators().to_vec(), d, Some(gap))?);
    let s = SyntheticFloerComplex { base: base.clone(), deformation, minimal_energy: gap, conjugator: p, conjugator_inverse: p_inv };
    s.verify()?;
    Ok(s)
}

/// A random `ħ`-gapped complex with zero-energy part `base`.
pub fn deform_complex(base: &Z2Complex, gap: Energy, seed: u64) -> Result<SyntheticFloerComplex> {
    deform_with(base, gap, DENSITY, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// The undeformed complex viewed as a (trivial) deformation.
pub fn trivial_deformation(base: &Z2Complex, gap: Energy) -> Result<SyntheticFloerComplex> {
    deform_with(base, gap, 0.0, &mut ChaCha8Rng::seed_from_u64(0))
}

fn increment_with(
    src: &SyntheticFloerComplex,
    dst: &SyntheticFloerComplex,
    zero_part: &Z2ChainMap,
    gap: Energy,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> Result<GappedMap> {
    check_gap(gap)?;
    zero_part.check(&src.base, &dst.base)?;
    // f̂ + ∂̂K + K∂̂ is a chain map between the lifts with the same zero-energy part
    let k = random_gapped(src.base.generators(), dst.base.generators(), 1, gap, density, rng)?;
    let (ds, dt) = (NovikovMatrix::lift(src.base.differential()), NovikovMatrix::lift(dst.base.differential()));
    let lifted = NovikovMatrix::lift(&zero_part.matrix).add(&dt.mul(&k)?.add(&k.mul(&ds)?)?)?;
    let m = dst.conjugator.mul(&lifted)?.mul(&src.conjugator_inverse)?;
    GappedMap::with_claimed_gap(src.deformation.clone(), dst.deformation.clone(), m, 0, gap)
}

/// A random `ħ`-gapped chain map between deformations with zero-energy part `zero_part`.
pub fn synth_increment(
    src: &SyntheticFloerComplex,
    dst: &SyntheticFloerComplex,
    zero_part: &Z2ChainMap,
    gap: Energy,
    seed: u64,
) -> Result<GappedMap> {
    increment_with(src, dst, zero_part, gap, DENSITY, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Parameters of [`main_theorem_rehearsal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RehearsalConfig {
    /// Homology is compared on degrees `0..=top_degree`.
    pub top_degree: usize,
    pub gap: Energy,
    pub seed: u64,
    /// Use undeformed complexes and maps.
    pub trivial: bool,
    /// Replace the Cartan zero-energy parts by zero maps.
    pub adversarial: bool,
}

impl RehearsalConfig {
    pub fn new(top_degree: usize, gap: Energy, seed: u64) -> Self {
        RehearsalConfig { top_degree, gap, seed, trivial: false, adversarial: false }
    }
}

/// Evidence produced by [`main_theorem_rehearsal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RehearsalReport {
    pub verdict: Verdict,
    pub depth: usize,
    /// Computed gaps of the deformed Borel stages.
    pub stage_gaps: Vec<Valuation>,
    /// Computed gap of the deformed quotient complex.
    pub quotient_gap: Valuation,
    pub telescope_gap: Valuation,
    /// Computed gap of the universal map.
    pub map_gap: Valuation,
    /// Every map preserves the filtration and its positive part raises it by at least `ħ`.
    pub filtration_preserved: bool,
    pub bar_cone_homology: Betti,
    pub cone_barcode: Option<Barcode>,
}

fn at_stage(n: usize, e: Error) -> Error {
    Error::Invariant { location: format!("rehearsal stage {n}"), detail: e.to_string() }
}

/// Runs the gapped Cartan argument on random deformations of the Borel stages of `m` and of
/// `m/G`, and decides whether the induced map `Tel → m/G` is an isomorphism over `Λ₀`.
pub fn main_theorem_rehearsal(m: &GcwComplex, family: &EGFamily, cfg: RehearsalConfig) -> Result<RehearsalReport> {
    check_gap(cfg.gap)?;
    if !m.is_free() {
        return Err(Error::NotFree("the rehearsal needs a free action".into()));
    }
    let gap = cfg.gap;
    let density = if cfg.trivial { 0.0 } else { DENSITY };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let depth = required_depth(family, cfg.top_degree);
    let tower = borel_tower(m, family, depth)?;
    let mq = quotient_complex(m)?;

    // (1) deformed stages and (3) deformed quotient
    let stages = tower
        .stages
        .iter()
        .enumerate()
        .map(|(n, s)| deform_with(s.complex(), gap, density, &mut rng).map_err(|e| at_stage(n, e)))
        .collect::<Result<Vec<_>>>()?;
    let target = deform_with(&mq.complex, gap, density, &mut rng)?;

    // (2) gapped increments
    let increments = tower
        .increments
        .iter()
        .enumerate()
        .map(|(n, inc)| increment_with(&stages[n], &stages[n + 1], inc, gap, density, &mut rng).map_err(|e| at_stage(n, e)))
        .collect::<Result<Vec<_>>>()?;

    // (4) stage maps, built from the last stage down so that
    //     ∂Hₙ + Hₙ∂ = 𝔓ₙ₊₁∘αₙ + 𝔓ₙ holds with random gapped Hₙ
    let mut zero_last = stage_projection(&tower.stages[depth], &mq)?;
    if cfg.adversarial {
        zero_last = Z2ChainMap::zero(tower.stages[depth].complex(), &mq.complex);
    }
    let mut maps = vec![increment_with(&stages[depth], &target, &zero_last, gap, density, &mut rng)?];
    let mut homotopies = Vec::with_capacity(depth);
    let dt = target.deformation.differential();
    for n in (0..depth).rev() {
        let src = &stages[n];
        let h = random_gapped(src.base.generators(), target.base.generators(), 1, gap, density, &mut rng)?;
        let h = GappedMap::new(src.deformation.clone(), target.deformation.clone(), h, 1)?;
        let through = maps.last().expect("nonempty").compose(&increments[n])?;
        let boundary = dt.mul(h.matrix())?.add(&h.matrix().mul(src.deformation.differential())?)?;
        let p = GappedMap::new(src.deformation.clone(), target.deformation.clone(), through.matrix().add(&boundary)?, 0)
            .map_err(|e| at_stage(n, e))?;
        if !is_homotopy(&h, &through, &p)? {
            return Err(at_stage(n, Error::HomotopyLaw { stage: n, detail: "constructed witness fails".into() }));
        }
        if !cfg.adversarial && p.bar_reduce()? != stage_projection(&tower.stages[n], &mq)? {
            return Err(at_stage(n, Error::Invariant { location: "stage map".into(), detail: "zero-energy part is not the projection".into() }));
        }
        maps.push(p);
        homotopies.push(h);
    }
    maps.reverse();
    homotopies.reverse();

    // (5) gapped telescope and universal map
    let tel = build_telescope(stages.iter().map(|s| s.deformation.clone()).collect(), increments.clone())?;
    let phi = universal_map(&tel, target.deformation.clone(), &maps, &homotopies)?;

    let gapped = |g: &NovikovMatrix| g.min_valuation() >= Valuation::Finite(Energy::zero()) && g.respects_gap(gap);
    let filtration_preserved = increments.iter().chain(&maps).chain(&homotopies).all(|f| gapped(f.matrix())) && gapped(phi.matrix());

    // (6) cone degrees 0..=D+1 cover isomorphism on H_0..H_D
    let report = gapped_iso_check(&phi, DegreeWindow::new(0, cfg.top_degree as i32 + 1))?;
    Ok(RehearsalReport {
        verdict: report.verdict,
        depth,
        stage_gaps: stages.iter().map(|s| s.deformation.differential().min_positive_exponent()).collect(),
        quotient_gap: target.deformation.differential().min_positive_exponent(),
        telescope_gap: tel.gap(),
        map_gap: phi.gap(),
        filtration_preserved,
        bar_cone_homology: report.bar_cone_homology,
        cone_barcode: report.cone_barcode,
    })
}
