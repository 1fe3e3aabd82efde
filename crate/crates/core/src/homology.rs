//! Homology over `Z/2` and over `Λ₀`.
//!
//! Over `Λ₀` the homology of a finite free complex is a direct sum of free summands and torsion
//! summands `Λ₀/T^a`, recorded as a [`Barcode`]. Since `C_k / ker ∂_k` embeds in the free module
//! `C_{k-1}`, the cycles split off, so the torsion of `H_k` is read from the invariant factors of
//! `∂_{k+1}` alone and the free rank is `n_k − rank ∂_k − rank ∂_{k+1}`.
//!
//! Invariant factors are computed by fraction-free elimination: the pivot is an entry of
//! minimal valuation `v`, written `T^v·u` with `u` a unit, and a column `col_j` with entry `b`
//! in the pivot row is replaced by `u·col_j + (b/T^v)·col_pivot`. Both coefficients are finite
//! sums and the operation is invertible over the completed ring, so no inverse of a unit is ever
//! formed. Arithmetic is carried out modulo `T^E` with `E` above an a priori bound on every
//! finite invariant factor, which keeps the results exact.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::complexes::{mapping_cone, FilteredComplex, GappedMap, NovikovMatrix};
use crate::novikov::{Energy, Valuation};
#[cfg(test)]
use crate::novikov::{NovikovScalar, Variant};
use crate::z2::{BitVec, Z2ChainMap, Z2Complex, Z2Matrix};
use crate::{Error, Result};

/// `Z/2` Betti numbers indexed by degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Betti(pub BTreeMap<i32, usize>);

impl Betti {
    pub fn get(&self, k: i32) -> usize {
        self.0.get(&k).copied().unwrap_or(0)
    }

    /// Dimensions on `lo..=hi`, zero-filled.
    pub fn on(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|k| self.get(k)).collect()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// Whether every listed dimension vanishes.
    pub fn is_zero(&self) -> bool {
        self.0.values().all(|d| *d == 0)
    }
}

impl fmt::Display for Betti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, d)| format!("{k}:{d}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// An inclusive range of degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeWindow {
    pub lo: i32,
    pub hi: i32,
}

impl DegreeWindow {
    pub const ALL: DegreeWindow = DegreeWindow { lo: i32::MIN, hi: i32::MAX };

    pub fn new(lo: i32, hi: i32) -> Self {
        DegreeWindow { lo, hi }
    }

    pub fn contains(&self, k: i32) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// Betti numbers of a `Z/2` complex: `dim H_k = n_k − rank ∂_k − rank ∂_{k+1}`.
pub fn z2_homology(c: &Z2Complex) -> Result<Betti> {
    if let Some(v) = c.violations().first() {
        return Err(Error::NotSquareZero(v.clone()));
    }
    let degrees = c.degrees();
    let ranks: BTreeMap<i32, usize> = degrees.iter().map(|&k| (k, c.block(k).rank())).collect();
    let rank = |k: i32| ranks.get(&k).copied().unwrap_or(0);
    Ok(Betti(degrees.iter().map(|&k| (k, c.indices_in_degree(k).len() - rank(k) - rank(k + 1))).collect()))
}

/// Rank of the map induced on `H_k` by a `Z/2` chain map.
pub fn induced_rank(f: &Z2ChainMap, source: &Z2Complex, target: &Z2Complex, k: i32) -> usize {
    let src = source.indices_in_degree(k);
    let dst = target.indices_in_degree(k);
    let cycles = source.block(k).kernel();
    let image = f.matrix.submatrix(&dst, &src).mul(&cycles).expect("shapes agree");
    let boundaries = target.block(k + 1);
    let both = boundaries.hstack(&image).expect("row counts agree");
    both.rank() - boundaries.rank()
}

/// Whether a `Z/2` chain map induces isomorphisms on `H_k` for every `k` in the window.
pub fn is_z2_quasi_iso(f: &Z2ChainMap, source: &Z2Complex, target: &Z2Complex, window: DegreeWindow) -> Result<bool> {
    f.check(source, target)?;
    let hs = z2_homology(source)?;
    let ht = z2_homology(target)?;
    let mut degrees: Vec<i32> = source.degrees();
    degrees.extend(target.degrees());
    degrees.sort_unstable();
    degrees.dedup();
    Ok(degrees
        .into_iter()
        .filter(|k| window.contains(*k))
        .all(|k| hs.get(k) == ht.get(k) && induced_rank(f, source, target, k) == hs.get(k)))
}

/// A bar `[birth, birth + length)` in the given degree; `length` is `+∞` for free summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub degree: i32,
    pub birth: Energy,
    pub length: Valuation,
}

/// Interval decomposition of the `Λ₀`-module `H_*(C)`, kept in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    pub bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort();
        Barcode { bars }
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn infinite_count(&self, k: i32) -> usize {
        self.bars.iter().filter(|b| b.degree == k && b.length.is_infinite()).count()
    }

    /// Restriction to degrees in the window.
    pub fn restrict(&self, window: DegreeWindow) -> Barcode {
        Barcode { bars: self.bars.iter().filter(|b| window.contains(b.degree)).cloned().collect() }
    }

    /// Number of bars in degree `k` born by `s` and still alive after `t`.
    pub fn persistence_rank(&self, s: Energy, t: Energy, k: i32) -> usize {
        self.bars
            .iter()
            .filter(|b| b.degree == k && b.birth <= s)
            .filter(|b| match b.length {
                Valuation::Infinity => true,
                Valuation::Finite(l) => b.birth + l > t,
            })
            .count()
    }

    /// Plain-text table, one bar per line.
    pub fn to_table(&self) -> String {
        let mut out = String::from("degree  birth  length\n");
        for b in &self.bars {
            out.push_str(&format!("{:>6}  {:>5}  {}\n", b.degree, b.birth.to_string(), b.length));
        }
        out
    }
}

/// Upper bound on every finite invariant factor of `m`: a nonzero maximal minor is a sum of
/// products taking one entry from each of its rows, so its valuation is at most the sum over
/// rows of the largest exponent in that row (and likewise for columns).
pub(crate) fn invariant_factor_bound(m: &NovikovMatrix) -> Energy {
    let mut row_max: BTreeMap<usize, Energy> = BTreeMap::new();
    let mut col_sum = Energy::zero();
    for c in 0..m.ncols() {
        let mut cmax = Energy::zero();
        for (r, s) in m.col(c) {
            let e = s.max_exponent().unwrap_or_default();
            cmax = cmax.max(e);
            let slot = row_max.entry(*r).or_default();
            *slot = (*slot).max(e);
        }
        col_sum += cmax;
    }
    let row_sum: Energy = row_max.values().sum();
    row_sum.min(col_sum)
}

/// Valuations of the invariant factors of a `Λ₀` matrix (one per pivot, in elimination order).
///
/// Pivots are chosen among minimal-valuation entries, lowest row first, then lowest column.
/// Entries are polynomials in `t = T^{1/L}` for the common denominator `L` of their exponents,
/// and elimination runs modulo a power of `t` beyond every factor: a column operation
/// `col_j ← u·col_j + f·col_c` by a pivot `T^v·u` only needs `u` and `f` modulo `T^{C−v}`
/// because every active entry has valuation at least `v`.
pub fn invariant_factors(m: &NovikovMatrix) -> Vec<Energy> {
    packed_invariant_factors(m).unwrap_or_else(|| scalar_invariant_factors(m))
}

/// Largest truncation (in bits) handled by the packed routine.
const MAX_PACKED_BITS: i64 = 1 << 20;

/// A polynomial over `Z/2` truncated below `t^len`, one bit per coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Packed(Vec<u64>);

impl Packed {
    fn zero(words: usize) -> Self {
        Packed(vec![0; words])
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn is_one(&self) -> bool {
        self.0.first() == Some(&1) && self.0[1..].iter().all(|&w| w == 0)
    }

    fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|&w| w != 0).map(|i| i * 64 + self.0[i].trailing_zeros() as usize)
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    fn xor(&mut self, other: &Packed) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    /// Division by `t^v`; the vacated top bits are unknown and left zero.
    fn shr(&self, v: usize) -> Packed {
        let (ws, bs) = (v / 64, v % 64);
        let n = self.0.len();
        let mut out = Packed::zero(n);
        for w in ws..n {
            out.0[w - ws] |= self.0[w] >> bs;
            if bs > 0 && w + 1 < n {
                out.0[w - ws] |= self.0[w + 1] << (64 - bs);
            }
        }
        out
    }

    fn mul(&self, other: &Packed, len: usize) -> Packed {
        let n = self.0.len();
        let mut out = Packed::zero(n);
        for (wi, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let i = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let (ws, bs) = (i / 64, i % 64);
                for w in 0..n - ws {
                    out.0[w + ws] ^= other.0[w] << bs;
                    if bs > 0 && w + ws + 1 < n {
                        out.0[w + ws + 1] ^= other.0[w] >> (64 - bs);
                    }
                }
            }
        }
        if !len.is_multiple_of(64) {
            if let Some(last) = out.0.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        out
    }
}

fn packed_invariant_factors(m: &NovikovMatrix) -> Option<Vec<Energy>> {
    let mut l: i64 = 1;
    for (_, _, s) in m.entries() {
        for e in s.exponents() {
            l = l.lcm(e.denom());
        }
    }
    let scaled = |e: &Energy| e.numer().checked_mul(l / e.denom());
    let len = scaled(&invariant_factor_bound(m))?.checked_add(1)?;
    if len > MAX_PACKED_BITS {
        return None;
    }
    let len = len as usize;
    let words = len.div_ceil(64);
    let mut rows = vec![vec![Packed::zero(words); m.ncols()]; m.nrows()];
    for (r, c, s) in m.entries() {
        for e in s.exponents() {
            let i = scaled(e)? as usize;
            if i < len {
                rows[r][c].set(i);
            }
        }
    }
    let mut active_rows: Vec<usize> = (0..m.nrows()).collect();
    let mut active_cols: Vec<usize> = (0..m.ncols()).collect();
    let mut factors = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for (ri, &r) in active_rows.iter().enumerate() {
            for (ci, &c) in active_cols.iter().enumerate() {
                if let Some(v) = rows[r][c].valuation() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, ri, ci));
                        if v == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((v, ri, ci)) = best else { break };
        let (p, c) = (active_rows[ri], active_cols[ci]);
        let unit = rows[p][c].shr(v);
        for &j in &active_cols {
            if j == c || rows[p][j].is_zero() {
                continue;
            }
            let factor = rows[p][j].shr(v);
            for &i in &active_rows {
                if rows[i][c].is_zero() && unit.is_one() {
                    continue;
                }
                let mut next = if unit.is_one() { rows[i][j].clone() } else { rows[i][j].mul(&unit, len) };
                if !rows[i][c].is_zero() {
                    next.xor(&rows[i][c].mul(&factor, len));
                }
                rows[i][j] = next;
            }
            debug_assert!(rows[p][j].is_zero());
        }
        factors.push(Energy::new(v as i64, l));
        active_rows.remove(ri);
        active_cols.remove(ci);
    }
    Some(factors)
}

/// The same elimination on [`crate::novikov::NovikovScalar`] entries, used when exponents
/// have unwieldy denominators.
pub(crate) fn scalar_invariant_factors(m: &NovikovMatrix) -> Vec<Energy> {
    let cutoff = invariant_factor_bound(m) + Energy::from_integer(1);
    let mut rows = m.to_dense();
    for row in &mut rows {
        for s in row.iter_mut() {
            *s = s.truncated(cutoff);
        }
    }
    let mut active_rows: Vec<usize> = (0..m.nrows()).collect();
    let mut active_cols: Vec<usize> = (0..m.ncols()).collect();
    let mut factors = Vec::new();
    loop {
        let mut best: Option<(Energy, usize, usize)> = None;
        'scan: for (ri, &r) in active_rows.iter().enumerate() {
            for (ci, &c) in active_cols.iter().enumerate() {
                if let Valuation::Finite(v) = rows[r][c].valuation() {
                    if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                        best = Some((v, ri, ci));
                        if v.is_zero() {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((v, ri, ci)) = best else { break };
        let (p, c) = (active_rows[ri], active_cols[ci]);
        let unit = rows[p][c].shift(-v).expect("shift of a field-free scalar").into_ring().expect("valuation is minimal");
        for &j in &active_cols {
            if j == c || rows[p][j].is_zero() {
                continue;
            }
            let factor = rows[p][j].shift(-v).expect("shift").into_ring().expect("valuation is minimal");
            for &i in &active_rows {
                let scaled = rows[i][j].mul_unchecked(&unit, Some(cutoff));
                let pivot_part = rows[i][c].mul_unchecked(&factor, Some(cutoff));
                rows[i][j] = scaled.add_unchecked(&pivot_part);
            }
            debug_assert!(rows[p][j].is_zero());
        }
        factors.push(v);
        active_rows.remove(ri);
        active_cols.remove(ci);
    }
    factors
}

/// Rank over the Novikov field `Λ`.
pub fn lambda_rank(m: &NovikovMatrix) -> usize {
    invariant_factors(m).len()
}

/// The barcode of a valid filtered complex. Births are `0`: every generator sits at energy `0`.
pub fn barcode(c: &FilteredComplex) -> Result<Barcode> {
    barcode_in(c, DegreeWindow::ALL)
}

/// The bars of [`barcode`] in degrees inside `window`, factoring only the blocks they need.
pub fn barcode_in(c: &FilteredComplex, window: DegreeWindow) -> Result<Barcode> {
    let report = c.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidComplex(v.to_string()));
    }
    let degrees: Vec<i32> = c.degrees().into_iter().filter(|&k| window.contains(k)).collect();
    let blocks: Vec<i32> = c.degrees().into_iter().filter(|&k| window.contains(k) || k.checked_sub(1).is_some_and(|j| window.contains(j))).collect();
    let factors: BTreeMap<i32, Vec<Energy>> = blocks.iter().map(|&k| (k, invariant_factors(&c.block(k)))).collect();
    let rank = |k: i32| factors.get(&k).map_or(0, Vec::len);
    let mut bars = Vec::new();
    for &k in &degrees {
        let free = c.indices_in_degree(k).len() - rank(k) - rank(k + 1);
        bars.extend((0..free).map(|_| Bar { degree: k, birth: Energy::zero(), length: Valuation::Infinity }));
        if let Some(fs) = factors.get(&(k + 1)) {
            bars.extend(fs.iter().filter(|a| a.is_positive()).map(|a| Bar {
                degree: k,
                birth: Energy::zero(),
                length: Valuation::Finite(*a),
            }));
        }
    }
    Ok(Barcode::new(bars))
}

/// Brute-force oracle for [`Barcode::persistence_rank`], independent of [`barcode`].
///
/// Every entry of `∂_k` and `∂_{k+1}` is expanded into a `Z/2` block over the energy lattice
/// `δ·Z≥0` (with `δ = 1/lcm` of all denominators) truncated below `m`. The `Z/2` rank `ρ(m)` of
/// the expanded matrix equals `Σᵢ max(0, m − aᵢ)/δ` over the invariant factors `aᵢ`, so
/// `ρ(m + δ) − ρ(m)` counts the factors `≤ m`. With all births at energy `0`, the number of bars
/// in degree `k` born by `s` and alive after `t` is the free rank plus the torsion factors of
/// `∂_{k+1}` exceeding `t`.
pub fn persistence_rank(c: &FilteredComplex, s: Energy, t: Energy, k: i32) -> Result<usize> {
    if s > t {
        return Err(Error::InvalidWindow { s, t });
    }
    if let Some(v) = c.validate().violations.first() {
        return Err(Error::InvalidComplex(v.to_string()));
    }
    if s.is_negative() {
        return Ok(0);
    }
    let d_in = c.block(k + 1);
    let d_out = c.block(k);
    let step = lattice_step(&[&d_in, &d_out]);
    let rank_out = ExpandedRanks::new(&d_out, step).total_rank();
    let ranks_in = ExpandedRanks::new(&d_in, step);
    let rank_in = ranks_in.total_rank();
    let free = c.indices_in_degree(k).len() - rank_out - rank_in;
    let at_most_t = if t.is_negative() { 0 } else { ranks_in.factors_at_most(t) };
    Ok(free + rank_in - at_most_t)
}

fn lattice_step(ms: &[&NovikovMatrix]) -> Energy {
    let mut l: i64 = 1;
    for m in ms {
        for c in 0..m.ncols() {
            for (_, s) in m.col(c) {
                for e in s.exponents() {
                    l = l.lcm(e.denom());
                }
            }
        }
    }
    Ratio::new(1, l)
}

struct ExpandedRanks<'a> {
    matrix: &'a NovikovMatrix,
    step: Energy,
}

impl<'a> ExpandedRanks<'a> {
    fn new(matrix: &'a NovikovMatrix, step: Energy) -> Self {
        ExpandedRanks { matrix, step }
    }

    /// `ρ(levels·δ)`: rank of the expansion over `Λ₀/T^{levels·δ}`.
    fn rho(&self, levels: i64) -> usize {
        let levels = levels.max(0) as usize;
        let (nr, nc) = (self.matrix.nrows(), self.matrix.ncols());
        let mut cols = Vec::with_capacity(nc * levels);
        for c in 0..nc {
            for j in 0..levels {
                let mut bits = BitVec::zeros(nr * levels);
                for (r, s) in self.matrix.col(c) {
                    for e in s.exponents() {
                        let shift = (e / self.step).to_integer() as usize;
                        if j + shift < levels {
                            bits.flip(r * levels + j + shift);
                        }
                    }
                }
                cols.push(bits.ones());
            }
        }
        Z2Matrix::from_entries(nr * levels, nc * levels, cols.iter().enumerate().flat_map(|(c, rs)| rs.iter().map(move |&r| (r, c))))
            .expect("indices in range")
            .rank()
    }

    /// Number of invariant factors `<= x` for `x >= 0`.
    fn factors_at_most(&self, x: Energy) -> usize {
        let levels = (x / self.step).floor().to_integer();
        self.rho(levels + 1) - self.rho(levels)
    }

    fn total_rank(&self) -> usize {
        let bound = invariant_factor_bound(self.matrix);
        self.factors_at_most(bound)
    }
}

/// Outcome of [`gapped_iso_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The map induces an isomorphism on `Λ₀` homology in the window.
    Iso,
    /// The zero-energy part is a quasi-isomorphism but the `Λ₀` cone is not acyclic: a
    /// counterexample to the gapped isomorphism theorem, never expected.
    NotIso,
    /// The zero-energy part is not a quasi-isomorphism, so the theorem does not apply.
    BarNotQuasiIso,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Iso => "iso",
            Verdict::NotIso => "not-iso",
            Verdict::BarNotQuasiIso => "bar-not-quasi-iso",
        })
    }
}

/// Evidence collected by [`gapped_iso_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub verdict: Verdict,
    /// `Z/2` homology of the cone of the zero-energy part, restricted to the window.
    pub bar_cone_homology: Betti,
    /// `Λ₀` barcode of the cone, restricted to the window (computed only when the bar test passes).
    pub cone_barcode: Option<Barcode>,
}

/// Decides whether a gapped chain map is an isomorphism on homology via its mapping cone.
///
/// `window` is a range of cone degrees; acyclicity of the cone on `lo..=hi` makes `f` an
/// isomorphism on `H_k` for `lo <= k < hi`. The `Z/2` test on the bar reduction runs first;
/// when it passes, the `Λ₀` cone barcode must be empty on the window.
pub fn gapped_iso_check(f: &GappedMap, window: DegreeWindow) -> Result<IsoReport> {
    if f.degree_shift() != 0 {
        return Err(Error::InvalidMap("isomorphism check needs a chain map".into()));
    }
    let cone = mapping_cone(f)?;
    let bar = cone.bar_reduce()?;
    let bar_h = z2_homology(&bar)?;
    let bar_cone_homology = Betti(bar_h.0.into_iter().filter(|(k, _)| window.contains(*k)).collect());
    if !bar_cone_homology.is_zero() {
        return Ok(IsoReport { verdict: Verdict::BarNotQuasiIso, bar_cone_homology, cone_barcode: None });
    }
    let bars = barcode_in(&cone, window)?;
    let verdict = if bars.is_empty() { Verdict::Iso } else { Verdict::NotIso };
    Ok(IsoReport { verdict, bar_cone_homology, cone_barcode: Some(bars) })
}

/// Scalar helper for tests and generators: `Σ T^{e}` in `Λ₀`.
#[cfg(test)]
pub(crate) fn ring_scalar(exps: &[Energy]) -> NovikovScalar {
    NovikovScalar::from_exponents(Variant::Ring, exps.iter().copied()).expect("non-negative exponents")
}
