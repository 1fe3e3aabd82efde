//! Equivariant homology through Borel approximations `M ×_G EGₙ`.
//!
//! Each stage is the orbit complex of `M × EGₙ`; stages are joined by the maps induced from
//! `EGₙ ⊂ EGₙ₊₁` and assembled into a finite telescope. For a free `M` the projections onto
//! `M/G` commute strictly with the increments, so the telescope maps to `M/G` with zero
//! homotopies; [`cartan_check`] verifies that this map is an isomorphism on homology.

use std::sync::Arc;

use crate::complexes::{FilteredComplex, GappedMap, NovikovMatrix};
use crate::gcw::{product, quotient_complex, EGFamily, GcwComplex, Quotient};
use crate::homology::{is_z2_quasi_iso, z2_homology, DegreeWindow, Verdict};
use crate::telescope::{build_z2_telescope, universal_map, TelescopeComplex};
use crate::z2::{Z2ChainMap, Z2Complex, Z2Matrix};
use crate::{Error, Result};

/// Largest family depth [`equivariant_homology`] will extend to.
pub const MAX_FAMILY_DEPTH: usize = 40;

/// `M × EGₙ` and its orbit complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelStage {
    pub product: GcwComplex,
    pub quotient: Quotient,
}

impl BorelStage {
    pub fn complex(&self) -> &Z2Complex {
        &self.quotient.complex
    }
}

fn check_group(m: &GcwComplex, family: &EGFamily) -> Result<()> {
    if m.group() != family.group() {
        return Err(Error::GroupMismatch(format!("space has {}, family has {}", m.group(), family.group())));
    }
    Ok(())
}

/// The stage `(M × EGₙ)/G`.
pub fn borel_stage(m: &GcwComplex, family: &EGFamily, n: usize) -> Result<BorelStage> {
    check_group(m, family)?;
    let eg = family
        .approximations()
        .get(n)
        .ok_or(Error::FamilyTooShallow { needed: n, cap: family.depth() })?;
    let product = product(m, eg)?;
    let quotient = quotient_complex(&product)?;
    Ok(BorelStage { product, quotient })
}

/// `σ×τ ↦ σ×ιₙ(τ)` on orbit complexes.
fn increment_between(family: &EGFamily, n: usize, src: &BorelStage, dst: &BorelStage) -> Result<Z2ChainMap> {
    let (_, e_src) = src.product.factors().ok_or(Error::NotAProduct)?;
    let (_, e_dst) = dst.product.factors().ok_or(Error::NotAProduct)?;
    let iota = &family.inclusions()[n].matrix;
    let (nb, nb2) = (e_src.len(), e_dst.len());
    let mut entries = Vec::new();
    for (o, &r) in src.quotient.representatives.iter().enumerate() {
        let (i, j) = (r / nb, r % nb);
        entries.extend(iota.col(j).iter().map(|&j2| (dst.quotient.orbit_of[i * nb2 + j2], o)));
    }
    let m = Z2Matrix::from_entries(dst.complex().len(), src.complex().len(), entries)?;
    Z2ChainMap::new(src.complex(), dst.complex(), m)
}

/// The increment `(M × EGₙ)/G → (M × EGₙ₊₁)/G`.
pub fn increment_map(m: &GcwComplex, family: &EGFamily, n: usize) -> Result<Z2ChainMap> {
    let src = borel_stage(m, family, n)?;
    let dst = borel_stage(m, family, n + 1)?;
    increment_between(family, n, &src, &dst)
}

/// Stages `0..=N`, their increments and the assembled telescope.
#[derive(Debug, Clone)]
pub struct BorelTower {
    pub stages: Vec<BorelStage>,
    pub increments: Vec<Z2ChainMap>,
    pub telescope: TelescopeComplex,
}

/// Smallest `n` whose approximation `EGₙ` is `(D+1)`-connected.
pub fn required_depth(family: &EGFamily, top_degree: usize) -> usize {
    (0..).find(|&n| family.connectivity(n) > top_degree as i64).expect("connectivity grows without bound")
}

fn deep_enough(family: &EGFamily, depth: usize) -> Result<EGFamily> {
    if depth > MAX_FAMILY_DEPTH {
        return Err(Error::FamilyTooShallow { needed: depth, cap: MAX_FAMILY_DEPTH });
    }
    let mut f = family.clone();
    while f.depth() < depth {
        f.extend()?;
    }
    Ok(f)
}

/// Builds the tower up to `depth`, extending the family when needed.
pub fn borel_tower(m: &GcwComplex, family: &EGFamily, depth: usize) -> Result<BorelTower> {
    check_group(m, family)?;
    let family = deep_enough(family, depth)?;
    let stages = (0..=depth).map(|n| borel_stage(m, &family, n)).collect::<Result<Vec<_>>>()?;
    let increments =
        (0..depth).map(|n| increment_between(&family, n, &stages[n], &stages[n + 1])).collect::<Result<Vec<_>>>()?;
    let complexes: Vec<Z2Complex> = stages.iter().map(|s| s.complex().clone()).collect();
    let telescope = build_z2_telescope(&complexes, &increments)?;
    Ok(BorelTower { stages, increments, telescope })
}

/// Equivariant Betti numbers on `[0, D]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantHomology {
    pub dims: Vec<usize>,
    /// Index of the last stage used.
    pub depth: usize,
}

fn telescope_dims(tower: &BorelTower, top: usize) -> Result<Vec<usize>> {
    let bar = tower.telescope.assembled().bar_reduce()?;
    Ok(z2_homology(&bar)?.on(0, top as i32))
}

/// `H^G_k(M; Z/2)` for `0 ≤ k ≤ D`, from a telescope deep enough for those degrees; the answer
/// is checked to be unchanged by one more stage.
pub fn equivariant_homology(m: &GcwComplex, family: &EGFamily, top_degree: usize) -> Result<EquivariantHomology> {
    let depth = required_depth(family, top_degree);
    let dims = telescope_dims(&borel_tower(m, family, depth)?, top_degree)?;
    let next = telescope_dims(&borel_tower(m, family, depth + 1)?, top_degree)?;
    if dims != next {
        return Err(Error::Invariant {
            location: "equivariant homology".into(),
            detail: format!("stage {depth} gives {dims:?} but stage {} gives {next:?}", depth + 1),
        });
    }
    Ok(EquivariantHomology { dims, depth })
}

/// The projection of a Borel stage onto `M/G`: `[σ×τ] ↦ [σ]` for 0-cells `τ`.
pub fn stage_projection(stage: &BorelStage, m_quotient: &Quotient) -> Result<Z2ChainMap> {
    let (_, e) = stage.product.factors().ok_or(Error::NotAProduct)?;
    let nb = e.len();
    let entries = stage
        .quotient
        .representatives
        .iter()
        .enumerate()
        .filter(|(_, &r)| e.complex().generators()[r % nb].degree == 0)
        .map(|(o, &r)| (m_quotient.orbit_of[r / nb], o));
    let mat = Z2Matrix::from_entries(m_quotient.complex.len(), stage.complex().len(), entries)?;
    Z2ChainMap::new(stage.complex(), &m_quotient.complex, mat)
}

/// Outcome of [`cartan_check`].
#[derive(Debug, Clone)]
pub struct CartanReport {
    pub verdict: Verdict,
    /// `Tel → M/G` at chain level.
    pub phi: GappedMap,
    /// Betti numbers of the telescope on `[0, D]`.
    pub equivariant: Vec<usize>,
    /// Betti numbers of `M/G` on `[0, D]`, computed directly.
    pub quotient: Vec<usize>,
    pub depth: usize,
}

/// Compares `H^G_*(M)` with `H_*(M/G)` through the map induced by the projections.
pub fn cartan_check(m: &GcwComplex, family: &EGFamily, top_degree: usize) -> Result<CartanReport> {
    if !m.is_free() {
        return Err(Error::NotFree("the Cartan comparison needs a free action".into()));
    }
    let depth = required_depth(family, top_degree);
    let tower = borel_tower(m, family, depth)?;
    let mq = quotient_complex(m)?;
    let target = Arc::new(FilteredComplex::lift(&mq.complex));

    let projections = tower.stages.iter().map(|s| stage_projection(s, &mq)).collect::<Result<Vec<_>>>()?;
    for (n, inc) in tower.increments.iter().enumerate() {
        if projections[n + 1].compose(inc)? != projections[n] {
            return Err(Error::HomotopyLaw { stage: n, detail: "projection does not commute with the increment".into() });
        }
    }
    let tel = &tower.telescope;
    let phis = projections
        .iter()
        .enumerate()
        .map(|(n, p)| GappedMap::new(tel.stages()[n].clone(), target.clone(), NovikovMatrix::lift(&p.matrix), 0))
        .collect::<Result<Vec<_>>>()?;
    let homotopies: Vec<GappedMap> =
        (0..depth).map(|n| GappedMap::zero(tel.stages()[n].clone(), target.clone(), 1)).collect();
    let phi = universal_map(tel, target, &phis, &homotopies)?;

    let bar_tel = tel.assembled().bar_reduce()?;
    let window = DegreeWindow::new(0, top_degree as i32);
    let iso = is_z2_quasi_iso(&phi.bar_reduce()?, &bar_tel, &mq.complex, window)?;
    let equivariant = z2_homology(&bar_tel)?.on(0, top_degree as i32);
    let quotient = z2_homology(&mq.complex)?.on(0, top_degree as i32);
    let verdict = if iso && equivariant == quotient { Verdict::Iso } else { Verdict::NotIso };
    Ok(CartanReport { verdict, phi, equivariant, quotient, depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcw::{sphere_model, FiniteGroup};

    fn z2_family() -> EGFamily {
        EGFamily::spheres(FiniteGroup::cyclic(2).unwrap(), 2).unwrap()
    }

    #[test]
    fn point_stage_is_projective_space() {
        let pt = GcwComplex::point(FiniteGroup::cyclic(2).unwrap()).unwrap();
        let fam = EGFamily::spheres(FiniteGroup::cyclic(2).unwrap(), 3).unwrap();
        let s = borel_stage(&pt, &fam, 3).unwrap();
        assert_eq!(z2_homology(s.complex()).unwrap().on(0, 3), vec![1, 1, 1, 1]);
    }

    #[test]
    fn free_pair_of_points() {
        let two = GcwComplex::regular_orbit(FiniteGroup::cyclic(2).unwrap()).unwrap();
        let fam = EGFamily::spheres(FiniteGroup::cyclic(2).unwrap(), 3).unwrap();
        let s = borel_stage(&two, &fam, 3).unwrap();
        assert_eq!(z2_homology(s.complex()).unwrap().on(0, 3), vec![1, 0, 0, 1]);
    }

    #[test]
    fn increment_is_iso_below_the_stage() {
        let pt = GcwComplex::point(FiniteGroup::cyclic(2).unwrap()).unwrap();
        let fam = EGFamily::spheres(FiniteGroup::cyclic(2).unwrap(), 4).unwrap();
        let (a, b) = (borel_stage(&pt, &fam, 3).unwrap(), borel_stage(&pt, &fam, 4).unwrap());
        let inc = increment_map(&pt, &fam, 3).unwrap();
        assert!(is_z2_quasi_iso(&inc, a.complex(), b.complex(), DegreeWindow::new(0, 2)).unwrap());
        assert!(!is_z2_quasi_iso(&inc, a.complex(), b.complex(), DegreeWindow::new(0, 4)).unwrap());
    }

    #[test]
    fn classifying_space_of_z2() {
        let pt = GcwComplex::point(FiniteGroup::cyclic(2).unwrap()).unwrap();
        let h = equivariant_homology(&pt, &z2_family(), 4).unwrap();
        assert_eq!(h.dims, vec![1, 1, 1, 1, 1]);
        assert_eq!(h.depth, 6);
    }

    #[test]
    fn trivial_group_gives_ordinary_homology() {
        let s2 = sphere_model(2, 2).unwrap();
        let plain = GcwComplex::with_trivial_action(s2.complex().clone(), FiniteGroup::trivial()).unwrap();
        let fam = EGFamily::spheres(FiniteGroup::trivial(), 0).unwrap();
        assert_eq!(equivariant_homology(&plain, &fam, 3).unwrap().dims, vec![1, 0, 1, 0]);
    }

    #[test]
    fn cartan_on_the_circle() {
        let s1 = sphere_model(2, 1).unwrap();
        let r = cartan_check(&s1, &z2_family(), 3).unwrap();
        assert_eq!(r.verdict, Verdict::Iso);
        assert_eq!(r.equivariant, vec![1, 1, 0, 0]);
        assert_eq!(r.quotient, r.equivariant);
    }

    #[test]
    fn cartan_needs_freeness() {
        let pt = GcwComplex::point(FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert!(matches!(cartan_check(&pt, &z2_family(), 2), Err(Error::NotFree(_))));
    }
}
