//! Based filtered chain complexes over `Λ₀` and gapped maps between them.
//!
//! A [`FilteredComplex`] is a finite-rank free `Λ₀`-module with a chosen basis of zero-energy
//! generators and a differential whose entries are `Λ₀` scalars. The complex is *ħ-gapped* when
//! every entry has support in `{0} ∪ [ħ, ∞)`; the gap is always recomputed from the matrix and
//! a user-supplied value is only checked against it.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::novikov::{Energy, NovikovScalar, Valuation, Variant};
use crate::z2::{Generator, Z2ChainMap, Z2Complex, Z2Matrix};
use crate::{Error, Result};

/// An extended positive energy: a gap is either a finite rational or `+∞`.
pub type Gap = Valuation;

/// Sparse matrix of `Λ₀` scalars stored by columns, rows sorted, zero entries omitted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NovikovMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, NovikovScalar)>>,
}

impl NovikovMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        NovikovMatrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        NovikovMatrix { nrows: n, cols: (0..n).map(|i| vec![(i, NovikovScalar::one())]).collect() }
    }

    /// Builds a matrix from `(row, col, scalar)` triples; repeated positions are summed.
    pub fn from_entries(
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize, NovikovScalar)>,
    ) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, NovikovScalar>> = vec![BTreeMap::new(); ncols];
        for (r, c, s) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::ShapeMismatch(format!("entry ({r}, {c}) outside {nrows}x{ncols}")));
            }
            if s.variant() != Variant::Ring {
                return Err(Error::VariantMismatch);
            }
            accumulate(&mut acc[c], r, &s);
        }
        Ok(NovikovMatrix { nrows, cols: acc.into_iter().map(finish_column).collect() })
    }

    /// Zero-energy lift of a `Z/2` matrix: every nonzero entry becomes the unit.
    pub fn lift(m: &Z2Matrix) -> Self {
        NovikovMatrix {
            nrows: m.nrows(),
            cols: (0..m.ncols()).map(|c| m.col(c).iter().map(|&r| (r, NovikovScalar::one())).collect()).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, c: usize) -> &[(usize, NovikovScalar)] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&NovikovScalar> {
        let col = &self.cols[c];
        col.binary_search_by_key(&r, |(i, _)| *i).ok().map(|i| &col[i].1)
    }

    /// Nonzero entries in lexicographic `(row, col)` order.
    pub fn entries(&self) -> Vec<(usize, usize, &NovikovScalar)> {
        let mut out: Vec<(usize, usize, &NovikovScalar)> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, s)| (*r, c, s)))
            .collect();
        out.sort_unstable_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn add(&self, other: &NovikovMatrix) -> Result<NovikovMatrix> {
        if self.nrows != other.nrows || self.ncols() != other.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows,
                self.ncols(),
                other.nrows,
                other.ncols()
            )));
        }
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, NovikovScalar> = a.iter().cloned().collect();
                for (r, s) in b {
                    accumulate(&mut acc, *r, s);
                }
                finish_column(acc)
            })
            .collect();
        Ok(NovikovMatrix { nrows: self.nrows, cols })
    }

    /// The composite `self ∘ other`.
    pub fn mul(&self, other: &NovikovMatrix) -> Result<NovikovMatrix> {
        if self.ncols() != other.nrows {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.nrows,
                self.ncols(),
                other.nrows,
                other.ncols()
            )));
        }
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc = BTreeMap::new();
                for (k, s) in col {
                    for (r, t) in &self.cols[*k] {
                        accumulate(&mut acc, *r, &t.mul_unchecked(s, None));
                    }
                }
                finish_column(acc)
            })
            .collect();
        Ok(NovikovMatrix { nrows: self.nrows, cols })
    }

    /// Multiplies every entry by `T^e`, `e >= 0`.
    pub fn shift(&self, e: Energy) -> Result<NovikovMatrix> {
        if e.is_negative() {
            return Err(Error::NegativeExponent(e));
        }
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, s)| Ok((*r, s.shift(e)?))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(NovikovMatrix { nrows: self.nrows, cols })
    }

    /// Entry-wise reduction modulo `Λ₀⁺`.
    pub fn reduce(&self) -> Z2Matrix {
        let entries = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().filter(|(_, s)| s.constant_term()).map(move |(r, _)| (*r, c)));
        Z2Matrix::from_entries(self.nrows, self.ncols(), entries).expect("indices in range")
    }

    /// Smallest strictly positive exponent over all entries, or `+∞`.
    pub fn min_positive_exponent(&self) -> Gap {
        self.cols
            .iter()
            .flatten()
            .filter_map(|(_, s)| s.min_positive_exponent())
            .min()
            .map_or(Valuation::Infinity, Valuation::Finite)
    }

    /// Smallest valuation over all entries.
    pub fn min_valuation(&self) -> Valuation {
        self.cols.iter().flatten().map(|(_, s)| s.valuation()).min().unwrap_or(Valuation::Infinity)
    }

    /// Whether every entry with a positive-energy term has all such terms at least `ħ`.
    pub fn respects_gap(&self, gap: Energy) -> bool {
        self.cols.iter().flatten().all(|(_, s)| s.respects_gap(gap))
    }

    /// The part of the matrix of strictly positive energy.
    pub fn positive_part(&self) -> NovikovMatrix {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(r, s)| {
                        let exps: Vec<Energy> = s.exponents().iter().filter(|e| e.is_positive()).copied().collect();
                        (!exps.is_empty()).then(|| (*r, NovikovScalar::from_sorted_unchecked(exps, Variant::Ring)))
                    })
                    .collect()
            })
            .collect();
        NovikovMatrix { nrows: self.nrows, cols }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> NovikovMatrix {
        let mut pos = vec![usize::MAX; self.nrows];
        for (i, &r) in rows.iter().enumerate() {
            pos[r] = i;
        }
        let cols = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(usize, NovikovScalar)> = self.cols[c]
                    .iter()
                    .filter(|(r, _)| pos[*r] != usize::MAX)
                    .map(|(r, s)| (pos[*r], s.clone()))
                    .collect();
                col.sort_unstable_by_key(|(r, _)| *r);
                col
            })
            .collect();
        NovikovMatrix { nrows: rows.len(), cols }
    }

    /// Places `self` at row offset `row0`, column offset `col0` inside an `nrows x ncols` matrix.
    pub fn embed(&self, nrows: usize, ncols: usize, row0: usize, col0: usize) -> NovikovMatrix {
        let mut cols = vec![Vec::new(); ncols];
        for (c, col) in self.cols.iter().enumerate() {
            cols[col0 + c] = col.iter().map(|(r, s)| (r + row0, s.clone())).collect();
        }
        NovikovMatrix { nrows, cols }
    }

    /// Dense row-major copy, used by elimination routines.
    pub(crate) fn to_dense(&self) -> Vec<Vec<NovikovScalar>> {
        let mut rows = vec![vec![NovikovScalar::zero(Variant::Ring); self.ncols()]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, s) in col {
                rows[*r][c] = s.clone();
            }
        }
        rows
    }
}

fn accumulate(acc: &mut BTreeMap<usize, NovikovScalar>, r: usize, s: &NovikovScalar) {
    if s.is_zero() {
        return;
    }
    match acc.get_mut(&r) {
        Some(cur) => *cur = cur.add_unchecked(s),
        None => {
            acc.insert(r, s.clone());
        }
    }
}

fn finish_column(acc: BTreeMap<usize, NovikovScalar>) -> Vec<(usize, NovikovScalar)> {
    acc.into_iter().filter(|(_, s)| !s.is_zero()).collect()
}

/// One violated invariant of a filtered complex, with the witnessing entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    DuplicateLabel(String),
    DegreeNotLowered { source: String, target: String },
    NotSquareZero { source: String, target: String, coefficient: NovikovScalar },
    NegativeExponent { source: String, target: String },
    GapViolated { source: String, target: String, entry: NovikovScalar, claimed: Energy },
    NonPositiveGap(Energy),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::DuplicateLabel(l) => write!(f, "duplicate generator label {l:?}"),
            Violation::DegreeNotLowered { source, target } => {
                write!(f, "degree: entry {source} -> {target} does not lower degree by one")
            }
            Violation::NotSquareZero { source, target, coefficient } => {
                write!(f, "d∘d ≠ 0: coefficient of {target} in dd({source}) is {coefficient}")
            }
            Violation::NegativeExponent { source, target } => {
                write!(f, "filtration: entry {source} -> {target} has negative energy")
            }
            Violation::GapViolated { source, target, entry, claimed } => {
                write!(f, "gap: entry {source} -> {target} = {entry} has energy in (0, {claimed})")
            }
            Violation::NonPositiveGap(g) => write!(f, "gap: claimed gap {g} is not positive"),
        }
    }
}

/// Outcome of [`FilteredComplex::validate`]: empty iff the complex is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(v.to_string())),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A based filtered chain complex over `Λ₀`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FilteredComplex {
    generators: Vec<Generator>,
    differential: NovikovMatrix,
    gap: Option<Energy>,
}

impl FilteredComplex {
    /// Builds a complex and rejects it if any invariant fails.
    pub fn new(generators: Vec<Generator>, differential: NovikovMatrix, gap: Option<Energy>) -> Result<Self> {
        let c = Self::from_parts(generators, differential, gap);
        c.validate().into_result()?;
        Ok(c)
    }

    /// Builds a complex without validation (see [`validate`](Self::validate)).
    pub fn from_parts(generators: Vec<Generator>, differential: NovikovMatrix, gap: Option<Energy>) -> Self {
        FilteredComplex { generators, differential, gap }
    }

    pub fn from_entries(
        generators: Vec<Generator>,
        entries: impl IntoIterator<Item = (usize, usize, NovikovScalar)>,
        gap: Option<Energy>,
    ) -> Result<Self> {
        let n = generators.len();
        Self::new(generators, NovikovMatrix::from_entries(n, n, entries)?, gap)
    }

    /// The zero-energy lift of a `Z/2` complex.
    pub fn lift(c: &Z2Complex) -> Self {
        FilteredComplex { generators: c.generators().to_vec(), differential: NovikovMatrix::lift(c.differential()), gap: None }
    }

    /// Sets the claimed gap to the computed certificate when it is finite.
    pub fn with_computed_gap(mut self) -> Self {
        self.gap = self.differential.min_positive_exponent().finite();
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn differential(&self) -> &NovikovMatrix {
        &self.differential
    }

    pub fn claimed_gap(&self) -> Option<Energy> {
        self.gap
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn indices_in_degree(&self, k: i32) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].degree == k).collect()
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The block `C_k → C_{k-1}` of the differential.
    pub fn block(&self, k: i32) -> NovikovMatrix {
        self.differential.submatrix(&self.indices_in_degree(k - 1), &self.indices_in_degree(k))
    }

    fn label(&self, i: usize) -> String {
        self.generators[i].label.clone()
    }

    /// Checks every invariant and reports each failure with a witnessing entry.
    pub fn validate(&self) -> ValidationReport {
        let n = self.generators.len();
        let mut violations = Vec::new();
        if self.differential.nrows() != n || self.differential.ncols() != n {
            violations.push(Violation::Shape(format!(
                "differential is {}x{}, expected {n}x{n}",
                self.differential.nrows(),
                self.differential.ncols()
            )));
            return ValidationReport { violations };
        }
        let mut seen = HashSet::new();
        for g in &self.generators {
            if !seen.insert(&g.label) {
                violations.push(Violation::DuplicateLabel(g.label.clone()));
            }
        }
        if let Some(h) = self.gap {
            if !h.is_positive() {
                violations.push(Violation::NonPositiveGap(h));
            }
        }
        for (r, c, s) in self.differential.entries() {
            if self.generators[r].degree + 1 != self.generators[c].degree {
                violations.push(Violation::DegreeNotLowered { source: self.label(c), target: self.label(r) });
            }
            if s.variant() != Variant::Ring || s.exponents().iter().any(|e| e.is_negative()) {
                violations.push(Violation::NegativeExponent { source: self.label(c), target: self.label(r) });
            }
            if let Some(h) = self.gap.filter(|h| h.is_positive()) {
                if !s.respects_gap(h) {
                    violations.push(Violation::GapViolated {
                        source: self.label(c),
                        target: self.label(r),
                        entry: s.clone(),
                        claimed: h,
                    });
                }
            }
        }
        let sq = self.differential.mul(&self.differential).expect("square shape checked");
        for (r, c, s) in sq.entries() {
            violations.push(Violation::NotSquareZero { source: self.label(c), target: self.label(r), coefficient: s.clone() });
        }
        ValidationReport { violations }
    }

    /// Minimal positive energy over all differential entries; `+∞` for a zero-energy
    /// differential.
    pub fn gap_certificate(&self) -> Result<Gap> {
        self.validate().into_result()?;
        Ok(self.differential.min_positive_exponent())
    }

    /// Reduction modulo `Λ₀⁺`: the zero-energy `Z/2` complex.
    pub fn bar_reduce(&self) -> Result<Z2Complex> {
        self.validate().into_result()?;
        Ok(Z2Complex::new_unchecked(self.generators.clone(), self.differential.reduce()))
    }
}

/// A filtration-preserving `Λ₀`-linear map between two filtered complexes.
///
/// `degree_shift` is `0` for chain maps and `1` for homotopies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GappedMap {
    source: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    matrix: NovikovMatrix,
    degree_shift: i32,
    gap: Gap,
}

impl GappedMap {
    /// Builds a map, checking shape, degrees, and the chain-map law when `degree_shift == 0`.
    pub fn new(
        source: Arc<FilteredComplex>,
        target: Arc<FilteredComplex>,
        matrix: NovikovMatrix,
        degree_shift: i32,
    ) -> Result<Self> {
        let gap = matrix.min_positive_exponent();
        let map = GappedMap { source, target, matrix, degree_shift, gap };
        map.check()?;
        Ok(map)
    }

    /// Builds a map and checks that it is `ħ`-gapped for the claimed `ħ`.
    pub fn with_claimed_gap(
        source: Arc<FilteredComplex>,
        target: Arc<FilteredComplex>,
        matrix: NovikovMatrix,
        degree_shift: i32,
        claimed: Energy,
    ) -> Result<Self> {
        let map = Self::new(source, target, matrix, degree_shift)?;
        if !claimed.is_positive() || !map.matrix.respects_gap(claimed) {
            return Err(Error::InvalidMap(format!("map is not {claimed}-gapped (computed gap {})", map.gap)));
        }
        Ok(map)
    }

    pub fn identity(c: Arc<FilteredComplex>) -> Self {
        let n = c.len();
        GappedMap { source: c.clone(), target: c, matrix: NovikovMatrix::identity(n), degree_shift: 0, gap: Valuation::Infinity }
    }

    pub fn zero(source: Arc<FilteredComplex>, target: Arc<FilteredComplex>, degree_shift: i32) -> Self {
        let matrix = NovikovMatrix::zeros(target.len(), source.len());
        GappedMap { source, target, matrix, degree_shift, gap: Valuation::Infinity }
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.matrix.nrows() != t.len() || self.matrix.ncols() != s.len() {
            return Err(Error::ShapeMismatch(format!(
                "map is {}x{}, complexes have {} -> {} generators",
                self.matrix.nrows(),
                self.matrix.ncols(),
                s.len(),
                t.len()
            )));
        }
        for (r, c, e) in self.matrix.entries() {
            if t.generators[r].degree != s.generators[c].degree + self.degree_shift {
                return Err(Error::InvalidMap(format!(
                    "entry {} -> {} does not shift degree by {}",
                    s.label(c),
                    t.label(r),
                    self.degree_shift
                )));
            }
            if e.variant() != Variant::Ring {
                return Err(Error::InvalidMap(format!("entry {} -> {} is not in Λ₀", s.label(c), t.label(r))));
            }
        }
        if self.degree_shift == 0 {
            let lhs = t.differential.mul(&self.matrix)?;
            let rhs = self.matrix.mul(&s.differential)?;
            if let Some((r, c, _)) = lhs.add(&rhs)?.entries().first() {
                return Err(Error::NotAChainMap(format!("d∘f ≠ f∘d at ({}, {})", t.label(*r), s.label(*c))));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FilteredComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FilteredComplex> {
        &self.target
    }

    pub fn matrix(&self) -> &NovikovMatrix {
        &self.matrix
    }

    pub fn degree_shift(&self) -> i32 {
        self.degree_shift
    }

    /// Computed gap: the minimal positive energy among the entries, `+∞` if none.
    pub fn gap(&self) -> Gap {
        self.gap
    }

    /// The zero-energy part `φ̄` as a `Z/2` matrix.
    pub fn bar_matrix(&self) -> Z2Matrix {
        self.matrix.reduce()
    }

    /// The zero-energy part as a `Z/2` chain map between the bar reductions.
    pub fn bar_reduce(&self) -> Result<Z2ChainMap> {
        if self.degree_shift != 0 {
            return Err(Error::InvalidMap("only chain maps reduce to chain maps".into()));
        }
        Z2ChainMap::new(&self.source.bar_reduce()?, &self.target.bar_reduce()?, self.bar_matrix())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GappedMap) -> Result<GappedMap> {
        if !Arc::ptr_eq(&first.target, &self.source) && *first.target != *self.source {
            return Err(Error::ShapeMismatch("composition of maps with mismatched complexes".into()));
        }
        GappedMap::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix)?,
            self.degree_shift + first.degree_shift,
        )
    }

    /// Whether positive-energy parts raise the filtration by at least `ħ`.
    pub fn is_gapped_by(&self, gap: Energy) -> bool {
        self.matrix.respects_gap(gap)
    }
}

/// The zero-energy lift of a `Z/2` matrix to a map between two filtered complexes.
pub fn zero_energy_lift(
    source: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    m: &Z2Matrix,
    degree_shift: i32,
) -> Result<GappedMap> {
    if m.nrows() != target.len() || m.ncols() != source.len() {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {}x{}, complexes have {} -> {} generators",
            m.nrows(),
            m.ncols(),
            source.len(),
            target.len()
        )));
    }
    GappedMap::new(source, target, NovikovMatrix::lift(m), degree_shift)
}

/// The mapping cone of a chain map `f: C → D`.
///
/// Generators are `C` shifted up by one (labels prefixed `c:`) followed by `D` (labels
/// prefixed `d:`); the differential is `(c, d) ↦ (∂c, f(c) + ∂d)`.
pub fn mapping_cone(f: &GappedMap) -> Result<FilteredComplex> {
    if f.degree_shift != 0 {
        return Err(Error::InvalidMap("mapping cone needs a chain map".into()));
    }
    f.source.validate().into_result()?;
    f.target.validate().into_result()?;
    let (m, n) = (f.source.len(), f.target.len());
    let mut generators = Vec::with_capacity(m + n);
    generators.extend(f.source.generators.iter().map(|g| Generator::new(format!("c:{}", g.label), g.degree + 1)));
    generators.extend(f.target.generators.iter().map(|g| Generator::new(format!("d:{}", g.label), g.degree)));
    let differential = f
        .source
        .differential
        .embed(m + n, m + n, 0, 0)
        .add(&f.matrix.embed(m + n, m + n, m, 0))?
        .add(&f.target.differential.embed(m + n, m + n, m, m))?;
    Ok(FilteredComplex::new(generators, differential, None)?.with_computed_gap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn r(p: i64, q: i64) -> Energy {
        Ratio::new(p, q)
    }

    fn mono(p: i64, q: i64) -> NovikovScalar {
        NovikovScalar::monomial(r(p, q)).unwrap()
    }

    fn interval(a: Energy) -> FilteredComplex {
        let gens = vec![Generator::new("x", 1), Generator::new("v", 0)];
        FilteredComplex::from_entries(gens, [(1, 0, NovikovScalar::monomial(a).unwrap())], Some(a)).unwrap()
    }

    #[test]
    fn single_generator_is_valid() {
        let c = FilteredComplex::from_entries(vec![Generator::new("p", 0)], [], None).unwrap();
        assert!(c.validate().is_valid());
        assert_eq!(c.gap_certificate().unwrap(), Valuation::Infinity);
    }

    #[test]
    fn interval_with_gap() {
        let c = interval(r(1, 2));
        assert!(c.validate().is_valid());
        assert_eq!(c.gap_certificate().unwrap(), Valuation::Finite(r(1, 2)));
    }

    #[test]
    fn gap_violation_is_reported() {
        let gens = vec![Generator::new("x", 1), Generator::new("v", 0)];
        let entry = NovikovScalar::ring_from_pairs(&[(1, 4), (1, 2)]).unwrap();
        let n = NovikovMatrix::from_entries(2, 2, [(1, 0, entry)]).unwrap();
        let c = FilteredComplex::from_parts(gens, n, Some(r(1, 2)));
        let report = c.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0], Violation::GapViolated { .. }));
        assert!(report.to_string().contains("x -> v"));
    }

    #[test]
    fn square_zero_violation_names_the_pair() {
        let gens = vec![Generator::new("a", 2), Generator::new("b", 1), Generator::new("c", 0)];
        let n = NovikovMatrix::from_entries(3, 3, [(1, 0, NovikovScalar::one()), (2, 1, mono(1, 1))]).unwrap();
        let report = FilteredComplex::from_parts(gens, n, None).validate();
        assert_eq!(
            report.violations,
            vec![Violation::NotSquareZero { source: "a".into(), target: "c".into(), coefficient: mono(1, 1) }]
        );
    }

    #[test]
    fn gap_certificates() {
        let gens = vec![Generator::new("x", 1), Generator::new("v", 0), Generator::new("w", 0)];
        let c = FilteredComplex::from_entries(gens.clone(), [(1, 0, NovikovScalar::one()), (2, 0, mono(2, 1))], None).unwrap();
        assert_eq!(c.gap_certificate().unwrap(), Valuation::Finite(r(2, 1)));

        let c = FilteredComplex::from_entries(gens.clone(), [(1, 0, mono(1, 3)), (2, 0, mono(1, 2))], None).unwrap();
        assert_eq!(c.gap_certificate().unwrap(), Valuation::Finite(r(1, 3)));

        let morse = FilteredComplex::from_entries(gens, [(1, 0, NovikovScalar::one())], None).unwrap();
        assert_eq!(morse.gap_certificate().unwrap(), Valuation::Infinity);
    }

    #[test]
    fn bar_reduction_keeps_zero_energy_part() {
        let gens = vec![Generator::new("x", 1), Generator::new("v", 0), Generator::new("w", 0)];
        let c = FilteredComplex::from_entries(gens, [(1, 0, NovikovScalar::one()), (2, 0, mono(1, 2))], None).unwrap();
        let bar = c.bar_reduce().unwrap();
        assert_eq!(bar.differential().entries(), vec![(1, 0)]);

        let pure = interval(r(1, 1)).bar_reduce().unwrap();
        assert!(pure.differential().is_zero());
    }

    #[test]
    fn lift_then_reduce_is_identity() {
        let gens = vec![Generator::new("v", 0), Generator::new("x", 1)];
        let z = Z2Complex::from_entries(gens, [(0, 1)]).unwrap();
        let lifted = Arc::new(FilteredComplex::lift(&z));
        assert_eq!(lifted.bar_reduce().unwrap(), z);

        let id = zero_energy_lift(lifted.clone(), lifted.clone(), &Z2Matrix::identity(2), 0).unwrap();
        assert_eq!(id, GappedMap::identity(lifted.clone()));
        assert_eq!(id.bar_matrix(), Z2Matrix::identity(2));

        let err = zero_energy_lift(lifted.clone(), lifted, &Z2Matrix::identity(3), 0).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }

    #[test]
    fn cone_of_identity_on_a_point() {
        let p = Arc::new(FilteredComplex::from_entries(vec![Generator::new("p", 0)], [], None).unwrap());
        let cone = mapping_cone(&GappedMap::identity(p)).unwrap();
        assert_eq!(cone.len(), 2);
        assert_eq!(cone.generators()[0], Generator::new("c:p", 1));
        assert_eq!(cone.differential().get(1, 0), Some(&NovikovScalar::one()));
    }

    #[test]
    fn cone_gap_bounded_by_inputs() {
        let a = r(1, 2);
        let src = Arc::new(FilteredComplex::from_entries(vec![Generator::new("x", 1)], [], None).unwrap());
        let dst = Arc::new(FilteredComplex::from_entries(vec![Generator::new("y", 1)], [], None).unwrap());
        let m = NovikovMatrix::from_entries(1, 1, [(0, 0, NovikovScalar::monomial(a).unwrap())]).unwrap();
        let f = GappedMap::with_claimed_gap(src, dst, m, 0, a).unwrap();
        let cone = mapping_cone(&f).unwrap();
        assert_eq!(cone.gap_certificate().unwrap(), Valuation::Finite(a));
        assert_eq!(cone.claimed_gap(), Some(a));
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let c = Arc::new(interval(r(1, 1)));
        // Send x to x only: d f(x) = T v but f(d x) = 0.
        let m = NovikovMatrix::from_entries(2, 2, [(0, 0, NovikovScalar::one())]).unwrap();
        assert!(matches!(GappedMap::new(c.clone(), c, m, 0), Err(Error::NotAChainMap(_))));
    }
}
