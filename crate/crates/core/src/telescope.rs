//! Mapping telescopes of finite sequences `C⁰ → C¹ → … → Cᴺ`.
//!
//! The assembled complex has a copy of every stage plus a shifted copy `q·Cⁿ` for every
//! `n < N`, with `∂(x + q·y) = ∂x + f(y) + y + q·∂y` (signs vanish over `Z/2`). Its homology is
//! the colimit of the homologies of the stages, which for a finite sequence is computed by
//! [`colim_homology`] without ever forming the telescope.

use std::sync::Arc;

use crate::complexes::{FilteredComplex, GappedMap, NovikovMatrix};
use crate::homology::{z2_homology, Betti};
use crate::novikov::Valuation;
use crate::z2::{Generator, Z2ChainMap, Z2Complex, Z2Matrix};
use crate::{Error, Result};

/// A finite telescope together with its stages and connecting maps.
#[derive(Debug, Clone)]
pub struct TelescopeComplex {
    stages: Vec<Arc<FilteredComplex>>,
    connecting: Vec<GappedMap>,
    assembled: Arc<FilteredComplex>,
    stage_offsets: Vec<usize>,
    q_offsets: Vec<usize>,
}

fn same_complex(a: &Arc<FilteredComplex>, b: &Arc<FilteredComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Assembles the telescope of `stages` along `connecting` (`connecting[n]: Cⁿ → Cⁿ⁺¹`).
pub fn build_telescope(stages: Vec<Arc<FilteredComplex>>, connecting: Vec<GappedMap>) -> Result<TelescopeComplex> {
    if stages.is_empty() {
        return Err(Error::ShapeMismatch("a telescope needs at least one stage".into()));
    }
    if connecting.len() + 1 != stages.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} stages need {} connecting maps, got {}",
            stages.len(),
            stages.len() - 1,
            connecting.len()
        )));
    }
    for (n, f) in connecting.iter().enumerate() {
        if f.degree_shift() != 0 {
            return Err(Error::InvalidMap(format!("connecting map {n} is not a chain map")));
        }
        if !same_complex(f.source(), &stages[n]) || !same_complex(f.target(), &stages[n + 1]) {
            return Err(Error::ShapeMismatch(format!("connecting map {n} does not go from stage {n} to stage {}", n + 1)));
        }
    }

    let mut generators = Vec::new();
    let mut stage_offsets = Vec::with_capacity(stages.len());
    let mut q_offsets = Vec::with_capacity(connecting.len());
    for (n, c) in stages.iter().enumerate() {
        stage_offsets.push(generators.len());
        generators.extend(c.generators().iter().map(|g| Generator::new(format!("{n}:{}", g.label), g.degree)));
        if n + 1 < stages.len() {
            q_offsets.push(generators.len());
            generators.extend(c.generators().iter().map(|g| Generator::new(format!("q{n}:{}", g.label), g.degree + 1)));
        }
    }
    let total = generators.len();
    let mut d = NovikovMatrix::zeros(total, total);
    for (n, c) in stages.iter().enumerate() {
        let x0 = stage_offsets[n];
        d = d.add(&c.differential().embed(total, total, x0, x0))?;
        if let Some(&q0) = q_offsets.get(n) {
            // q·y ↦ f(y) + y + q·∂y
            d = d.add(&connecting[n].matrix().embed(total, total, stage_offsets[n + 1], q0))?;
            d = d.add(&NovikovMatrix::identity(c.len()).embed(total, total, x0, q0))?;
            d = d.add(&c.differential().embed(total, total, q0, q0))?;
        }
    }
    let assembled = Arc::new(FilteredComplex::new(generators, d, None)?.with_computed_gap());
    Ok(TelescopeComplex { stages, connecting, assembled, stage_offsets, q_offsets })
}

/// Telescope of `Z/2` complexes, assembled through their zero-energy lifts.
pub fn build_z2_telescope(stages: &[Z2Complex], connecting: &[Z2ChainMap]) -> Result<TelescopeComplex> {
    let lifted: Vec<Arc<FilteredComplex>> = stages.iter().map(|c| Arc::new(FilteredComplex::lift(c))).collect();
    let maps = connecting
        .iter()
        .enumerate()
        .map(|(n, f)| {
            let (Some(s), Some(t)) = (lifted.get(n), lifted.get(n + 1)) else {
                return Err(Error::ShapeMismatch("more connecting maps than stages".into()));
            };
            GappedMap::new(s.clone(), t.clone(), NovikovMatrix::lift(&f.matrix), 0)
        })
        .collect::<Result<Vec<_>>>()?;
    build_telescope(lifted, maps)
}

impl TelescopeComplex {
    pub fn stages(&self) -> &[Arc<FilteredComplex>] {
        &self.stages
    }

    pub fn connecting(&self) -> &[GappedMap] {
        &self.connecting
    }

    pub fn assembled(&self) -> &Arc<FilteredComplex> {
        &self.assembled
    }

    /// Index of the last stage.
    pub fn last(&self) -> usize {
        self.stages.len() - 1
    }

    /// The inclusion `iₙ: Cⁿ → Tel`, `x ↦ x`.
    pub fn inclusion(&self, n: usize) -> Result<GappedMap> {
        let c = &self.stages[n];
        let m = NovikovMatrix::identity(c.len()).embed(self.assembled.len(), c.len(), self.stage_offsets[n], 0);
        GappedMap::new(c.clone(), self.assembled.clone(), m, 0)
    }

    /// The degree-one map `y ↦ q·y` on `Cⁿ`, a homotopy between `iₙ₊₁∘fₙ` and `iₙ`.
    pub fn q_homotopy(&self, n: usize) -> Result<GappedMap> {
        let c = &self.stages[n];
        let q0 = *self.q_offsets.get(n).ok_or_else(|| Error::ShapeMismatch(format!("stage {n} has no q-copy")))?;
        let m = NovikovMatrix::identity(c.len()).embed(self.assembled.len(), c.len(), q0, 0);
        GappedMap::new(c.clone(), self.assembled.clone(), m, 1)
    }

    /// Computed gap of the assembled differential.
    pub fn gap(&self) -> Valuation {
        self.assembled.differential().min_positive_exponent()
    }
}

/// Checks `∂H + H∂ = a + b` for a degree-one map `h` between the sources and targets of `a`, `b`.
pub fn is_homotopy(h: &GappedMap, a: &GappedMap, b: &GappedMap) -> Result<bool> {
    let lhs = h.target().differential().mul(h.matrix())?.add(&h.matrix().mul(h.source().differential())?)?;
    let rhs = a.matrix().add(b.matrix())?;
    Ok(lhs == rhs)
}

/// The map `Φ: Tel → D`, `x + q·y ↦ φ(x) + H(y)`, induced by maps `φₙ: Cⁿ → D` and homotopies
/// `Hₙ` with `∂Hₙ + Hₙ∂ = φₙ₊₁∘fₙ + φₙ`.
pub fn universal_map(
    tel: &TelescopeComplex,
    target: Arc<FilteredComplex>,
    phis: &[GappedMap],
    homotopies: &[GappedMap],
) -> Result<GappedMap> {
    let n_stages = tel.stages.len();
    if phis.len() != n_stages || homotopies.len() + 1 != n_stages {
        return Err(Error::ShapeMismatch(format!(
            "{n_stages} stages need {n_stages} maps and {} homotopies, got {} and {}",
            n_stages - 1,
            phis.len(),
            homotopies.len()
        )));
    }
    for (n, phi) in phis.iter().enumerate() {
        if phi.degree_shift() != 0 || !same_complex(phi.source(), &tel.stages[n]) || !same_complex(phi.target(), &target) {
            return Err(Error::InvalidMap(format!("φ_{n} is not a chain map from stage {n} to the target")));
        }
    }
    for (n, h) in homotopies.iter().enumerate() {
        if h.degree_shift() != 1 || !same_complex(h.source(), &tel.stages[n]) || !same_complex(h.target(), &target) {
            return Err(Error::HomotopyLaw { stage: n, detail: "H_n must be a degree-one map from stage n to the target".into() });
        }
        let composite = phis[n + 1].compose(&tel.connecting[n])?;
        if !is_homotopy(h, &composite, &phis[n])? {
            return Err(Error::HomotopyLaw { stage: n, detail: "∂H + H∂ ≠ φ_{n+1}∘f_n + φ_n".into() });
        }
    }
    let total = tel.assembled.len();
    let rows = target.len();
    let mut m = NovikovMatrix::zeros(rows, total);
    for (n, phi) in phis.iter().enumerate() {
        m = m.add(&phi.matrix().embed(rows, total, 0, tel.stage_offsets[n]))?;
    }
    for (n, h) in homotopies.iter().enumerate() {
        m = m.add(&h.matrix().embed(rows, total, 0, tel.q_offsets[n]))?;
    }
    GappedMap::new(tel.assembled.clone(), target, m, 0).map_err(|e| Error::Invariant {
        location: "universal map".into(),
        detail: format!("Φ failed the chain-map law despite valid homotopies: {e}"),
    })
}

/// Homology of a finite diagram computed on the homology level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimHomology {
    /// Dimensions of the colimit per degree.
    pub dims: Betti,
    /// Rank of `H(Cⁿ) → H(Cᴺ)` per stage and degree.
    pub stage_images: Vec<Betti>,
}

/// Colimit of `H(C⁰) → … → H(Cᴺ)` over `Z/2`, as the cokernel of
/// `⊕_{n<N} H(Cⁿ) → ⊕_n H(Cⁿ)`, `[y] ↦ [y] − [fₙ y]`.
pub fn colim_homology(stages: &[Z2Complex], connecting: &[Z2ChainMap]) -> Result<ColimHomology> {
    if stages.is_empty() || connecting.len() + 1 != stages.len() {
        return Err(Error::ShapeMismatch("need N+1 stages and N connecting maps".into()));
    }
    for (n, f) in connecting.iter().enumerate() {
        f.check(&stages[n], &stages[n + 1])?;
    }
    let betti: Vec<Betti> = stages.iter().map(z2_homology).collect::<Result<_>>()?;
    let mut degrees: Vec<i32> = stages.iter().flat_map(|c| c.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();

    let last = stages.len() - 1;
    let mut dims = Betti::default();
    let mut stage_images = vec![Betti::default(); stages.len()];
    for &k in &degrees {
        let idx: Vec<Vec<usize>> = stages.iter().map(|c| c.indices_in_degree(k)).collect();
        let offs: Vec<usize> = idx.iter().scan(0, |acc, v| {
            let o = *acc;
            *acc += v.len();
            Some(o)
        }).collect();
        let width: usize = idx.iter().map(Vec::len).sum();

        // Boundaries of the direct sum, then the relations applied to cycles.
        let mut entries = Vec::new();
        let mut col = 0;
        for (n, c) in stages.iter().enumerate() {
            let b = c.block(k + 1);
            for j in 0..b.ncols() {
                entries.extend(b.col(j).iter().map(|&r| (offs[n] + r, col)));
                col += 1;
            }
        }
        let boundary_cols = col;
        for n in 0..last {
            let z = stages[n].block(k).kernel();
            let f = connecting[n].matrix.submatrix(&idx[n + 1], &idx[n]).mul(&z)?;
            for j in 0..z.ncols() {
                entries.extend(z.col(j).iter().map(|&r| (offs[n] + r, col)));
                entries.extend(f.col(j).iter().map(|&r| (offs[n + 1] + r, col)));
                col += 1;
            }
        }
        let all = Z2Matrix::from_entries(width, col, entries)?;
        let b_rank = all.submatrix(&(0..width).collect::<Vec<_>>(), &(0..boundary_cols).collect::<Vec<_>>()).rank();
        let relations = all.rank() - b_rank;
        let total: usize = betti.iter().map(|b| b.get(k)).sum();
        dims.0.insert(k, total - relations);

        // Image of each stage in the last one.
        for n in 0..=last {
            let mut z = stages[n].block(k).kernel();
            let mut rows = idx[n].clone();
            for (m, f) in connecting.iter().enumerate().skip(n) {
                let sub = f.matrix.submatrix(&idx[m + 1], &rows_in(&rows, &idx[m]));
                z = sub.mul(&z)?;
                rows = idx[m + 1].clone();
            }
            let bdry = stages[last].block(k + 1);
            let rank = bdry.hstack(&z)?.rank() - bdry.rank();
            stage_images[n].0.insert(k, rank);
        }
    }
    Ok(ColimHomology { dims, stage_images })
}

fn rows_in(rows: &[usize], idx: &[usize]) -> Vec<usize> {
    debug_assert_eq!(rows, idx);
    idx.to_vec()
}
