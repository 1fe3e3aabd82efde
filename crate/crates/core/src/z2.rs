//! Linear algebra over `Z/2`: sparse column matrices, bit-packed elimination, chain complexes
//! and chain maps.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// A basis element of a graded module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub label: String,
    pub degree: i32,
}

impl Generator {
    pub fn new(label: impl Into<String>, degree: i32) -> Self {
        Generator { label: label.into(), degree }
    }
}

/// Dense bit vector used during elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in idx {
            v.flip(i);
        }
        v
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Highest set index.
    pub fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            let mut w = *w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(i * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
}

/// Column reduction `R = M·V` of a `Z/2` matrix given by bit-packed columns.
struct Reduction {
    reduced: Vec<BitVec>,
    transform: Vec<BitVec>,
}

impl Reduction {
    fn run(columns: Vec<BitVec>, ncols: usize) -> Self {
        let mut reduced = columns;
        let mut transform: Vec<BitVec> = (0..ncols).map(|j| BitVec::from_indices(ncols, &[j])).collect();
        let mut pivot_of: BTreeMap<usize, usize> = BTreeMap::new();
        for j in 0..reduced.len() {
            while let Some(low) = reduced[j].last_one() {
                match pivot_of.get(&low) {
                    Some(&i) => {
                        let (ri, vi) = (reduced[i].clone(), transform[i].clone());
                        reduced[j].xor_assign(&ri);
                        transform[j].xor_assign(&vi);
                    }
                    None => {
                        pivot_of.insert(low, j);
                        break;
                    }
                }
            }
        }
        Reduction { reduced, transform }
    }

    fn rank(&self) -> usize {
        self.reduced.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Sparse `Z/2` matrix stored by columns; each column is a sorted list of row indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2Matrix {
    nrows: usize,
    cols: Vec<Vec<usize>>,
}

impl Z2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Z2Matrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        Z2Matrix { nrows: n, cols: (0..n).map(|i| vec![i]).collect() }
    }

    /// Builds a matrix from `(row, col)` entries; repeated entries cancel.
    pub fn from_entries(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut cols = vec![Vec::new(); ncols];
        for (r, c) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::ShapeMismatch(format!("entry ({r}, {c}) outside {nrows}x{ncols}")));
            }
            cols[c].push(r);
        }
        for col in &mut cols {
            normalize(col);
        }
        Ok(Z2Matrix { nrows, cols })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].binary_search(&r).is_ok()
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        match (self.cols[c].binary_search(&r), value) {
            (Ok(i), false) => {
                self.cols[c].remove(i);
            }
            (Err(i), true) => self.cols[c].insert(i, r),
            _ => {}
        }
    }

    /// Entries in lexicographic `(row, col)` order.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&r| (r, c)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn add(&self, other: &Z2Matrix) -> Result<Z2Matrix> {
        if self.nrows != other.nrows || self.ncols() != other.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows,
                self.ncols(),
                other.nrows,
                other.ncols()
            )));
        }
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| sym_diff(a, b)).collect();
        Ok(Z2Matrix { nrows: self.nrows, cols })
    }

    /// The composite `self ∘ other`.
    pub fn mul(&self, other: &Z2Matrix) -> Result<Z2Matrix> {
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
                let mut acc = Vec::new();
                for &k in col {
                    acc.extend_from_slice(&self.cols[k]);
                }
                normalize(&mut acc);
                acc
            })
            .collect();
        Ok(Z2Matrix { nrows: self.nrows, cols })
    }

    pub fn transpose(&self) -> Z2Matrix {
        let mut cols = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &r in col {
                cols[r].push(c);
            }
        }
        Z2Matrix { nrows: self.ncols(), cols }
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Z2Matrix {
        let mut pos = vec![usize::MAX; self.nrows];
        for (i, &r) in rows.iter().enumerate() {
            pos[r] = i;
        }
        let cols = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<usize> = self.cols[c].iter().map(|&r| pos[r]).filter(|&p| p != usize::MAX).collect();
                col.sort_unstable();
                col
            })
            .collect();
        Z2Matrix { nrows: rows.len(), cols }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Z2Matrix) -> Result<Z2Matrix> {
        if self.nrows != other.nrows {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(Z2Matrix { nrows: self.nrows, cols })
    }

    fn bit_columns(&self) -> Vec<BitVec> {
        self.cols.iter().map(|c| BitVec::from_indices(self.nrows, c)).collect()
    }

    pub fn rank(&self) -> usize {
        Reduction::run(self.bit_columns(), self.ncols()).rank()
    }

    /// A basis of the kernel, as the columns of a `ncols x dim ker` matrix.
    pub fn kernel(&self) -> Z2Matrix {
        let red = Reduction::run(self.bit_columns(), self.ncols());
        let cols = red
            .reduced
            .iter()
            .zip(&red.transform)
            .filter(|(r, _)| r.is_zero())
            .map(|(_, v)| v.ones())
            .collect();
        Z2Matrix { nrows: self.ncols(), cols }
    }
}

fn normalize(col: &mut Vec<usize>) {
    col.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(col.len());
    for &r in col.iter() {
        if out.last() == Some(&r) {
            out.pop();
        } else {
            out.push(r);
        }
    }
    *col = out;
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    normalize(&mut v);
    v
}

/// A finite based chain complex over `Z/2`; the differential lowers degree by one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2Complex {
    generators: Vec<Generator>,
    differential: Z2Matrix,
}

impl Z2Complex {
    /// Builds and validates a complex.
    pub fn new(generators: Vec<Generator>, differential: Z2Matrix) -> Result<Self> {
        let c = Z2Complex { generators, differential };
        let violations = c.violations();
        if let Some(v) = violations.first() {
            return Err(Error::InvalidComplex(v.clone()));
        }
        Ok(c)
    }

    pub(crate) fn new_unchecked(generators: Vec<Generator>, differential: Z2Matrix) -> Self {
        Z2Complex { generators, differential }
    }

    pub fn from_entries(generators: Vec<Generator>, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = generators.len();
        Self::new(generators, Z2Matrix::from_entries(n, n, entries)?)
    }

    /// Human-readable list of violated invariants; empty iff valid.
    pub fn violations(&self) -> Vec<String> {
        let n = self.generators.len();
        let mut out = Vec::new();
        if self.differential.nrows() != n || self.differential.ncols() != n {
            out.push(format!("differential is {}x{}, expected {n}x{n}", self.differential.nrows(), self.differential.ncols()));
            return out;
        }
        let mut seen = std::collections::HashSet::new();
        for g in &self.generators {
            if !seen.insert(&g.label) {
                out.push(format!("duplicate generator label {:?}", g.label));
            }
        }
        for (r, c) in self.differential.entries() {
            if self.generators[r].degree + 1 != self.generators[c].degree {
                out.push(format!(
                    "entry d({}) -> {} does not lower degree by one",
                    self.generators[c].label, self.generators[r].label
                ));
            }
        }
        if let Ok(sq) = self.differential.mul(&self.differential) {
            for (r, c) in sq.entries() {
                out.push(format!(
                    "d∘d nonzero: coefficient of {} in dd({})",
                    self.generators[r].label, self.generators[c].label
                ));
            }
        }
        out
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn differential(&self) -> &Z2Matrix {
        &self.differential
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator indices of the given degree, in basis order.
    pub fn indices_in_degree(&self, k: i32) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].degree == k).collect()
    }

    /// Sorted distinct degrees.
    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The block `C_k → C_{k-1}` of the differential.
    pub fn block(&self, k: i32) -> Z2Matrix {
        self.differential.submatrix(&self.indices_in_degree(k - 1), &self.indices_in_degree(k))
    }

    /// Alternating sum of generator counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.generators.iter().map(|g| if g.degree.rem_euclid(2) == 0 { 1 } else { -1 }).sum()
    }
}

/// A degree-preserving `Z/2` linear map between two based complexes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2ChainMap {
    pub matrix: Z2Matrix,
}

impl Z2ChainMap {
    /// Wraps a matrix after checking shape, degree preservation and `d∘f = f∘d`.
    pub fn new(source: &Z2Complex, target: &Z2Complex, matrix: Z2Matrix) -> Result<Self> {
        let map = Z2ChainMap { matrix };
        map.check(source, target)?;
        Ok(map)
    }

    pub fn identity(c: &Z2Complex) -> Self {
        Z2ChainMap { matrix: Z2Matrix::identity(c.len()) }
    }

    pub fn zero(source: &Z2Complex, target: &Z2Complex) -> Self {
        Z2ChainMap { matrix: Z2Matrix::zeros(target.len(), source.len()) }
    }

    pub fn check(&self, source: &Z2Complex, target: &Z2Complex) -> Result<()> {
        if self.matrix.nrows() != target.len() || self.matrix.ncols() != source.len() {
            return Err(Error::ShapeMismatch(format!(
                "map is {}x{}, complexes have {} -> {} generators",
                self.matrix.nrows(),
                self.matrix.ncols(),
                source.len(),
                target.len()
            )));
        }
        for (r, c) in self.matrix.entries() {
            if target.generators()[r].degree != source.generators()[c].degree {
                return Err(Error::NotAChainMap(format!(
                    "entry {} -> {} changes degree",
                    source.generators()[c].label,
                    target.generators()[r].label
                )));
            }
        }
        let lhs = target.differential().mul(&self.matrix)?;
        let rhs = self.matrix.mul(source.differential())?;
        let diff = lhs.add(&rhs)?;
        if let Some((r, c)) = diff.entries().first() {
            return Err(Error::NotAChainMap(format!(
                "d∘f ≠ f∘d at ({}, {})",
                target.generators()[*r].label,
                source.generators()[*c].label
            )));
        }
        Ok(())
    }

    pub fn compose(&self, first: &Z2ChainMap) -> Result<Z2ChainMap> {
        Ok(Z2ChainMap { matrix: self.matrix.mul(&first.matrix)? })
    }

    /// The mapping cone: `source` shifted up by one (labels `c:`) followed by `target`
    /// (labels `d:`), with differential `(c, d) ↦ (∂c, f(c) + ∂d)`.
    pub fn cone(&self, source: &Z2Complex, target: &Z2Complex) -> Result<Z2Complex> {
        self.check(source, target)?;
        let (m, n) = (source.len(), target.len());
        let mut generators = Vec::with_capacity(m + n);
        generators.extend(source.generators().iter().map(|g| Generator::new(format!("c:{}", g.label), g.degree + 1)));
        generators.extend(target.generators().iter().map(|g| Generator::new(format!("d:{}", g.label), g.degree)));
        let mut entries = source.differential().entries();
        entries.extend(self.matrix.entries().into_iter().map(|(r, c)| (r + m, c)));
        entries.extend(target.differential().entries().into_iter().map(|(r, c)| (r + m, c + m)));
        Z2Complex::from_entries(generators, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::from_indices(130, &[0, 64, 129]);
        assert_eq!(v.last_one(), Some(129));
        v.flip(129);
        assert_eq!(v.last_one(), Some(64));
        assert_eq!(v.ones(), vec![0, 64]);
    }

    #[test]
    fn rank_and_kernel() {
        // Rows r0 = c0 + c1, r1 = c1 + c2: rank 2 with kernel (1,1,1).
        let m = Z2Matrix::from_entries(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)]).unwrap();
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.ncols(), 1);
        assert_eq!(k.col(0), &[0, 1, 2]);
    }

    #[test]
    fn repeated_entries_cancel() {
        let m = Z2Matrix::from_entries(2, 2, [(0, 0), (0, 0), (1, 1)]).unwrap();
        assert_eq!(m.entries(), vec![(1, 1)]);
        assert!(Z2Matrix::from_entries(1, 1, [(1, 0)]).is_err());
    }

    #[test]
    fn complex_validation() {
        let gens = vec![Generator::new("v", 0), Generator::new("x", 1)];
        assert!(Z2Complex::from_entries(gens.clone(), [(0, 1)]).is_ok());
        let err = Z2Complex::from_entries(gens, [(1, 0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidComplex(_)));
    }

    #[test]
    fn chain_map_check() {
        let gens = vec![Generator::new("v", 0), Generator::new("x", 1)];
        let c = Z2Complex::from_entries(gens, [(0, 1)]).unwrap();
        assert!(Z2ChainMap::new(&c, &c, Z2Matrix::identity(2)).is_ok());
        // Only hitting v is not a chain map: d(f(x)) = 0 but f(d x) = v.
        let bad = Z2Matrix::from_entries(2, 2, [(0, 0)]).unwrap();
        assert!(matches!(Z2ChainMap::new(&c, &c, bad), Err(Error::NotAChainMap(_))));
    }

    fn arb_matrix() -> impl Strategy<Value = Z2Matrix> {
        (1usize..9, 1usize..9)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec((0..r, 0..c), 0..20)))
            .prop_map(|(r, c, e)| Z2Matrix::from_entries(r, c, e).unwrap())
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.ncols(), m.ncols());
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.ncols());
            prop_assert_eq!(m.transpose().rank(), m.rank());
        }
    }
}
