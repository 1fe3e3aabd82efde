//! Finite `Z/2` cellular complexes with actions of finite groups.
//!
//! Cells are the generators of a [`Z2Complex`]; a group element acts by a degree-preserving
//! permutation of cell indices. Free actions admit orbit quotients, products carry the diagonal
//! action, and [`EGFamily`] provides free approximations `EG₀ ⊂ EG₁ ⊂ …` built from sphere models.

use std::fmt;

use crate::homology::z2_homology;
use crate::z2::{Generator, Z2ChainMap, Z2Complex, Z2Matrix};
use crate::{Error, Result};

/// A finite group given by its multiplication table; element `0` is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Checks identity, closure, associativity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not a square table on its elements".into()));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::InvalidGroup(format!("element 0 is not an identity for {a}")));
            }
            if !(0..n).any(|b| table[a][b] == 0) {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { table })
    }

    /// `Z/m` with `a·b = a + b mod m`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("Z/0 is not finite".into()));
        }
        Ok(FiniteGroup { table: (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect() })
    }

    pub fn trivial() -> Self {
        FiniteGroup { table: vec![vec![0]] }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("validated group")
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// `Some(m)` when this is literally the table of [`FiniteGroup::cyclic`]`(m)`.
    pub fn as_cyclic(&self) -> Option<usize> {
        let m = self.order();
        (FiniteGroup::cyclic(m).ok()? == *self).then_some(m)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_cyclic() {
            Some(1) => f.write_str("trivial"),
            Some(m) => write!(f, "Z/{m}"),
            None => write!(f, "group of order {}", self.order()),
        }
    }
}

/// Factor data kept by [`product`] so that projections can be formed later.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ProductOf {
    first: Box<GcwComplex>,
    second: Box<GcwComplex>,
}

/// A `Z/2` cellular complex with a cellular action of a finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcwComplex {
    complex: Z2Complex,
    group: FiniteGroup,
    /// `action[g][i]` is the cell `g·i`.
    action: Vec<Vec<usize>>,
    free: bool,
    product_of: Option<ProductOf>,
}

/// Outcome of [`validate_gcw`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GcwReport {
    pub violations: Vec<String>,
}

impl GcwReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GcwReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn fixed_point(group: &FiniteGroup, action: &[Vec<usize>], cells: usize) -> Option<(usize, usize)> {
    (1..group.order()).find_map(|g| (0..cells).find(|&i| action[g][i] == i).map(|i| (g, i)))
}

/// Checks `∂² = 0`, that the action is a degree-preserving homomorphism commuting with `∂`,
/// and that a claimed free action has no fixed cells.
pub fn validate_gcw(c: &GcwComplex) -> GcwReport {
    let mut violations = c.complex.violations();
    let (n, order) = (c.complex.len(), c.group.order());
    let gens = c.complex.generators();
    if c.action.len() != order {
        violations.push(format!("action has {} permutations for a group of order {order}", c.action.len()));
        return GcwReport { violations };
    }
    for (g, perm) in c.action.iter().enumerate() {
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
            violations.push(format!("element {g} does not act by a permutation of the {n} cells"));
            return GcwReport { violations };
        }
        for (i, &j) in perm.iter().enumerate() {
            if gens[i].degree != gens[j].degree {
                violations.push(format!("element {g} sends {} to {} in another degree", gens[i].label, gens[j].label));
            }
        }
    }
    for g in 0..order {
        for h in 0..order {
            let gh = c.group.mul(g, h);
            if let Some(i) = (0..n).find(|&i| c.action[gh][i] != c.action[g][c.action[h][i]]) {
                violations.push(format!("action is not a homomorphism: ({g}·{h})·{} ≠ {g}·({h}·{})", gens[i].label, gens[i].label));
            }
        }
    }
    let d = c.complex.differential();
    for (g, perm) in c.action.iter().enumerate() {
        for i in 0..n {
            let mut moved: Vec<usize> = d.col(i).iter().map(|&r| perm[r]).collect();
            moved.sort_unstable();
            if moved != d.col(perm[i]) {
                violations.push(format!("element {g} does not commute with ∂ on {}", gens[i].label));
                break;
            }
        }
    }
    if c.free {
        if let Some((g, i)) = fixed_point(&c.group, &c.action, n) {
            violations.push(format!("action claimed free but element {g} fixes {}", gens[i].label));
        }
    }
    GcwReport { violations }
}

impl GcwComplex {
    /// Validated constructor; the free flag is computed.
    pub fn new(complex: Z2Complex, group: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        let mut c = GcwComplex { complex, group, action, free: false, product_of: None };
        let report = validate_gcw(&c);
        if !report.is_valid() {
            return Err(Error::InvalidComplex(report.to_string().trim_end().to_string()));
        }
        c.free = fixed_point(&c.group, &c.action, c.complex.len()).is_none();
        Ok(c)
    }

    /// Unchecked constructor with a claimed free flag, for parsed documents; see [`validate_gcw`].
    pub fn from_parts(complex: Z2Complex, group: FiniteGroup, action: Vec<Vec<usize>>, free: bool) -> Self {
        GcwComplex { complex, group, action, free, product_of: None }
    }

    /// Trivial action of `group` on `complex`.
    pub fn with_trivial_action(complex: Z2Complex, group: FiniteGroup) -> Result<Self> {
        let action = vec![(0..complex.len()).collect(); group.order()];
        GcwComplex::new(complex, group, action)
    }

    /// A point with the trivial action; free only for the trivial group.
    pub fn point(group: FiniteGroup) -> Result<Self> {
        let pt = Z2Complex::from_entries(vec![Generator::new("pt", 0)], [])?;
        GcwComplex::with_trivial_action(pt, group)
    }

    /// `|G|` points permuted by left multiplication.
    pub fn regular_orbit(group: FiniteGroup) -> Result<Self> {
        let n = group.order();
        let w = digits(n);
        let gens = (0..n).map(|g| Generator::new(format!("p{g:0w$}"), 0)).collect();
        let action = (0..n).map(|g| (0..n).map(|h| group.mul(g, h)).collect()).collect();
        GcwComplex::new(Z2Complex::from_entries(gens, [])?, group, action)
    }

    /// Two copies of `base` swapped by `Z/2`; the quotient is `base` again.
    pub fn doubled(base: &Z2Complex) -> Result<Self> {
        let n = base.len();
        let mut gens = Vec::with_capacity(2 * n);
        for sign in ["+", "-"] {
            gens.extend(base.generators().iter().map(|g| Generator::new(format!("{}{sign}", g.label), g.degree)));
        }
        let mut entries = base.differential().entries();
        entries.extend(base.differential().entries().into_iter().map(|(r, c)| (r + n, c + n)));
        let swap: Vec<usize> = (0..2 * n).map(|i| (i + n) % (2 * n)).collect();
        GcwComplex::new(Z2Complex::from_entries(gens, entries)?, FiniteGroup::cyclic(2)?, vec![(0..2 * n).collect(), swap])
    }

    pub fn complex(&self) -> &Z2Complex {
        &self.complex
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    /// Factors when built by [`product`].
    pub fn factors(&self) -> Option<(&GcwComplex, &GcwComplex)> {
        self.product_of.as_ref().map(|p| (&*p.first, &*p.second))
    }

    /// Whether a cellular map (`matrix`: cells of `self` → cells of `target`) commutes with the actions.
    pub fn is_equivariant(&self, target: &GcwComplex, matrix: &Z2Matrix) -> bool {
        self.group == target.group
            && (0..self.group.order()).all(|g| {
                (0..self.len()).all(|i| {
                    let mut moved: Vec<usize> = matrix.col(i).iter().map(|&r| target.action[g][r]).collect();
                    moved.sort_unstable();
                    moved == matrix.col(self.action[g][i])
                })
            })
    }
}

fn digits(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Free `Z/m` cell structure on `Sⁿ`: cells `e_k·g` for `0 ≤ k ≤ n`, `g ∈ Z/m`, with
/// `∂(e_{2i+1}·g) = e_{2i}·(g+1) + e_{2i}·g` and `∂(e_{2i}·g) = Σ_h e_{2i−1}·h` (mod 2).
///
/// For `m = 2` this is the antipodal structure with `∂e_k^± = e_{k−1}^+ + e_{k−1}^−` and any `n`;
/// for `m > 2` the sphere must be odd-dimensional. Cell `e_k·g` has index `k·m + g`.
pub fn sphere_model(m: usize, n: usize) -> Result<GcwComplex> {
    if m < 2 || (m > 2 && n.is_multiple_of(2)) {
        return Err(Error::InvalidSphereModel { m, n });
    }
    let w = digits(m);
    let idx = |k: usize, g: usize| k * m + g;
    let mut gens = Vec::with_capacity((n + 1) * m);
    let mut entries = Vec::new();
    for k in 0..=n {
        for g in 0..m {
            gens.push(Generator::new(format!("e{k}.{g:0w$}"), k as i32));
            if k == 0 {
                continue;
            }
            if k % 2 == 1 {
                entries.push((idx(k - 1, (g + 1) % m), idx(k, g)));
                entries.push((idx(k - 1, g), idx(k, g)));
            } else {
                entries.extend((0..m).map(|h| (idx(k - 1, h), idx(k, g))));
            }
        }
    }
    let action = (0..m).map(|a| (0..=n).flat_map(|k| (0..m).map(move |g| idx(k, (a + g) % m))).collect()).collect();
    GcwComplex::new(Z2Complex::from_entries(gens, entries)?, FiniteGroup::cyclic(m)?, action)
}

/// Cellular product with the diagonal action: cell `(i, j)` has index `i·|b| + j`, label
/// `a×b`, and `∂(σ×τ) = ∂σ×τ + σ×∂τ`.
pub fn product(a: &GcwComplex, b: &GcwComplex) -> Result<GcwComplex> {
    if a.group != b.group {
        return Err(Error::GroupMismatch(format!("{} vs {}", a.group, b.group)));
    }
    let (na, nb) = (a.len(), b.len());
    let mut gens = Vec::with_capacity(na * nb);
    for ga in a.complex.generators() {
        for gb in b.complex.generators() {
            gens.push(Generator::new(format!("{}×{}", ga.label, gb.label), ga.degree + gb.degree));
        }
    }
    let mut entries = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            let col = i * nb + j;
            entries.extend(a.complex.differential().col(i).iter().map(|&r| (r * nb + j, col)));
            entries.extend(b.complex.differential().col(j).iter().map(|&r| (i * nb + r, col)));
        }
    }
    let action = (0..a.group.order())
        .map(|g| (0..na).flat_map(|i| (0..nb).map(move |j| a.action[g][i] * nb + b.action[g][j])).collect())
        .collect();
    let mut p = GcwComplex::new(Z2Complex::from_entries(gens, entries)?, a.group.clone(), action)?;
    p.product_of = Some(ProductOf { first: Box::new(a.clone()), second: Box::new(b.clone()) });
    Ok(p)
}

/// Orbit complex of a free complex with its projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub complex: Z2Complex,
    /// Cell ↦ orbit, as a chain map.
    pub projection: Z2ChainMap,
    /// Orbit index of every cell.
    pub orbit_of: Vec<usize>,
    /// Representative cell of every orbit (least label).
    pub representatives: Vec<usize>,
}

/// Orbit complex `C/G` with `∂[σ] = [∂σ]`, orbits ordered by their first cell and labelled by
/// their lexicographically least cell label.
pub fn quotient_complex(c: &GcwComplex) -> Result<Quotient> {
    if !c.free {
        return Err(Error::NotFree("the action has fixed cells, so the orbit complex is not a cellular quotient".into()));
    }
    let n = c.len();
    let gens = c.complex.generators();
    let mut orbit_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for i in 0..n {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let o = representatives.len();
        let mut rep = i;
        for perm in &c.action {
            orbit_of[perm[i]] = o;
            if gens[perm[i]].label < gens[rep].label {
                rep = perm[i];
            }
        }
        representatives.push(rep);
    }
    let qgens = representatives.iter().map(|&r| gens[r].clone()).collect();
    let d = c.complex.differential();
    let entries: Vec<(usize, usize)> =
        representatives.iter().enumerate().flat_map(|(o, &r)| d.col(r).iter().map(|&x| (orbit_of[x], o)).collect::<Vec<_>>()).collect();
    let complex = Z2Complex::from_entries(qgens, entries)?;
    let pm = Z2Matrix::from_entries(representatives.len(), n, (0..n).map(|i| (orbit_of[i], i)))?;
    let projection = Z2ChainMap::new(&c.complex, &complex, pm)?;
    Ok(Quotient { complex, projection, orbit_of, representatives })
}

/// The map induced on orbit complexes by an equivariant cellular chain map `f: X → Y`.
pub fn descend(f: &Z2Matrix, source: &GcwComplex, target: &GcwComplex) -> Result<(Quotient, Quotient, Z2ChainMap)> {
    if !source.is_equivariant(target, f) {
        return Err(Error::InvalidMap("map is not equivariant".into()));
    }
    Z2ChainMap::new(&source.complex, &target.complex, f.clone())?;
    let qs = quotient_complex(source)?;
    let qt = quotient_complex(target)?;
    let entries = qs.representatives.iter().enumerate().flat_map(|(o, &r)| f.col(r).iter().map(|&x| (qt.orbit_of[x], o)).collect::<Vec<_>>());
    let m = Z2Matrix::from_entries(qt.representatives.len(), qs.representatives.len(), entries)?;
    let map = Z2ChainMap::new(&qs.complex, &qt.complex, m)?;
    Ok((qs, qt, map))
}

/// `σ×τ ↦ σ` when `τ` is a 0-cell and `0` otherwise, from a product to its first factor.
pub fn projection_chain_map(p: &GcwComplex) -> Result<Z2ChainMap> {
    let (first, second) = p.factors().ok_or(Error::NotAProduct)?;
    let nb = second.len();
    let entries = (0..p.len()).filter(|k| second.complex.generators()[k % nb].degree == 0).map(|k| (k / nb, k));
    let m = Z2Matrix::from_entries(first.len(), p.len(), entries)?;
    Z2ChainMap::new(&p.complex, &first.complex, m)
}

/// Free approximations `EG₀ ⊂ EG₁ ⊂ …` of a universal free space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EGFamily {
    group: FiniteGroup,
    approximations: Vec<GcwComplex>,
    inclusions: Vec<Z2ChainMap>,
}

impl EGFamily {
    /// Sphere family: `Sⁿ` for `Z/2`, `S^{2n+1}` for `Z/m`, points for the trivial group.
    pub fn spheres(group: FiniteGroup, depth: usize) -> Result<Self> {
        if group.as_cyclic().is_none() {
            return Err(Error::UnsupportedGroup(format!("no sphere family for {group}")));
        }
        let mut fam = EGFamily { group, approximations: Vec::new(), inclusions: Vec::new() };
        for _ in 0..=depth {
            fam.extend()?;
        }
        Ok(fam)
    }

    /// Dimension of the sphere `EGₙ`.
    pub fn sphere_dim(&self, n: usize) -> usize {
        match self.group.order() {
            1 => 0,
            2 => n,
            _ => 2 * n + 1,
        }
    }

    /// Largest `k` with `H_j(EGₙ) = H_j(pt)` for all `j ≤ k`; `−1` for `S⁰`.
    pub fn connectivity(&self, n: usize) -> i64 {
        match self.group.order() {
            1 => i64::MAX,
            _ => self.sphere_dim(n) as i64 - 1,
        }
    }

    /// Appends `EG_{N+1}` and the inclusion `ι_N`.
    pub fn extend(&mut self) -> Result<()> {
        let n = self.approximations.len();
        let next = match self.group.order() {
            1 => GcwComplex::point(self.group.clone())?,
            m => sphere_model(m, self.sphere_dim(n))?,
        };
        if let Some(prev) = self.approximations.last() {
            // cell indices of low skeleta agree
            let m = Z2Matrix::from_entries(next.len(), prev.len(), (0..prev.len()).map(|i| (i, i)))?;
            self.inclusions.push(Z2ChainMap::new(prev.complex(), next.complex(), m)?);
        }
        self.approximations.push(next);
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn depth(&self) -> usize {
        self.approximations.len() - 1
    }

    pub fn approximations(&self) -> &[GcwComplex] {
        &self.approximations
    }

    pub fn inclusions(&self) -> &[Z2ChainMap] {
        &self.inclusions
    }

    /// Exhaustive check of freeness, connectivity and equivariant injective inclusions.
    pub fn verify(&self) -> Result<()> {
        for (n, eg) in self.approximations.iter().enumerate() {
            if !eg.is_free() {
                return Err(Error::NotFree(format!("EG_{n} is not free")));
            }
            let h = z2_homology(eg.complex())?;
            let top = eg.complex().degrees().last().copied().unwrap_or(0) as i64;
            for k in 0..=self.connectivity(n).min(top + 1) as i32 {
                let expected = usize::from(k == 0);
                if h.get(k) != expected {
                    return Err(Error::Invariant { location: format!("EG_{n}"), detail: format!("H_{k} = {} ≠ {expected}", h.get(k)) });
                }
            }
        }
        for (n, i) in self.inclusions.iter().enumerate() {
            let (a, b) = (&self.approximations[n], &self.approximations[n + 1]);
            i.check(a.complex(), b.complex())?;
            if !a.is_equivariant(b, &i.matrix) || i.matrix.nnz() != a.len() || i.matrix.transpose().mul(&i.matrix)? != Z2Matrix::identity(a.len()) {
                return Err(Error::Invariant { location: format!("ι_{n}"), detail: "not an equivariant cellular embedding".into() });
            }
        }
        Ok(())
    }
}

/// Built-in spaces: `pt`, `s<n>-antipodal`, `regular-z<m>`, `lens-z<m>-s<n>` (free `Z/m` on odd spheres).
pub fn named_space(name: &str) -> Result<GcwComplex> {
    let bad = || Error::Parse(format!("unknown space `{name}`"));
    if name == "pt" {
        return GcwComplex::point(FiniteGroup::trivial());
    }
    if let Some(n) = name.strip_prefix('s').and_then(|r| r.strip_suffix("-antipodal")) {
        return sphere_model(2, n.parse().map_err(|_| bad())?);
    }
    if let Some(m) = name.strip_prefix("regular-z") {
        return GcwComplex::regular_orbit(FiniteGroup::cyclic(m.parse().map_err(|_| bad())?)?);
    }
    if let Some((m, n)) = name.strip_prefix("lens-z").and_then(|r| r.split_once("-s")) {
        return sphere_model(m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?);
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(c: &Z2Complex, hi: i32) -> Vec<usize> {
        z2_homology(c).unwrap().on(0, hi)
    }

    #[test]
    fn group_tables() {
        let g = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(g.inverse(1), 3);
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert_eq!(FiniteGroup::trivial().to_string(), "trivial");
    }

    #[test]
    fn point_is_free_only_for_the_trivial_group() {
        assert!(GcwComplex::point(FiniteGroup::trivial()).unwrap().is_free());
        let p = GcwComplex::point(FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert!(!p.is_free());
        assert!(matches!(quotient_complex(&p), Err(Error::NotFree(_))));
    }

    #[test]
    fn antipodal_circle() {
        let s1 = sphere_model(2, 1).unwrap();
        assert!(s1.is_free());
        assert_eq!(dims(s1.complex(), 1), vec![1, 1]);
        assert_eq!(dims(&quotient_complex(&s1).unwrap().complex, 1), vec![1, 1]);
    }

    #[test]
    fn sphere_and_projective_space() {
        let s2 = sphere_model(2, 2).unwrap();
        assert_eq!(dims(s2.complex(), 2), vec![1, 0, 1]);
        assert_eq!(dims(&quotient_complex(&s2).unwrap().complex, 2), vec![1, 1, 1]);
        for n in 0..=6 {
            let q = quotient_complex(&sphere_model(2, n).unwrap()).unwrap();
            assert_eq!(dims(&q.complex, n as i32), vec![1; n + 1]);
        }
    }

    #[test]
    fn lens_models() {
        let s = sphere_model(3, 3).unwrap();
        assert_eq!(dims(s.complex(), 3), vec![1, 0, 0, 1]);
        // H_*(L(3); Z/2) = H_*(S³; Z/2) since 3 is odd
        assert_eq!(dims(&quotient_complex(&s).unwrap().complex, 3), vec![1, 0, 0, 1]);
        let s = sphere_model(4, 3).unwrap();
        assert_eq!(dims(&quotient_complex(&s).unwrap().complex, 3), vec![1, 1, 1, 1]);
        assert!(sphere_model(3, 2).is_err());
        assert!(sphere_model(1, 1).is_err());
    }

    #[test]
    fn action_not_commuting_with_boundary_is_reported() {
        // ∂x = a, but the action swaps a and b while fixing x
        let c = Z2Complex::from_entries(vec![Generator::new("a", 0), Generator::new("b", 0), Generator::new("x", 1)], [(0, 2)]).unwrap();
        let action = vec![vec![0, 1, 2], vec![1, 0, 2]];
        let bad = GcwComplex::from_parts(c, FiniteGroup::cyclic(2).unwrap(), action, false);
        let report = validate_gcw(&bad);
        assert!(report.violations.iter().any(|v| v.contains("commute")), "{report}");
    }

    #[test]
    fn products() {
        let s1 = sphere_model(2, 1).unwrap();
        let torus = product(&s1, &s1).unwrap();
        assert!(torus.is_free());
        assert_eq!(dims(torus.complex(), 2), vec![1, 2, 1]);
        let pt = GcwComplex::point(FiniteGroup::cyclic(2).unwrap()).unwrap();
        let e = product(&pt, &s1).unwrap();
        assert_eq!(dims(e.complex(), 1), vec![1, 1]);
        assert!(e.is_free());
        assert!(product(&s1, &GcwComplex::point(FiniteGroup::trivial()).unwrap()).is_err());
    }

    #[test]
    fn projection_descends() {
        let s1 = sphere_model(2, 1).unwrap();
        let s2 = sphere_model(2, 2).unwrap();
        let p = product(&s1, &s2).unwrap();
        let pr = projection_chain_map(&p).unwrap();
        let (_, _, down) = descend(&pr.matrix, &p, &s1).unwrap();
        assert_eq!(down.matrix.nrows(), 2);
        assert!(matches!(projection_chain_map(&s1), Err(Error::NotAProduct)));
    }

    #[test]
    fn trivial_group_quotient_is_identity() {
        let c = Z2Complex::from_entries(vec![Generator::new("v", 0), Generator::new("x", 1)], [(0, 1)]).unwrap();
        let g = GcwComplex::with_trivial_action(c.clone(), FiniteGroup::trivial()).unwrap();
        let q = quotient_complex(&g).unwrap();
        assert_eq!(q.complex, c);
        assert_eq!(q.projection.matrix, Z2Matrix::identity(2));
    }

    #[test]
    fn families_verify() {
        for m in [1, 2, 3] {
            let fam = EGFamily::spheres(FiniteGroup::cyclic(m).unwrap(), 4).unwrap();
            fam.verify().unwrap();
        }
        let klein = FiniteGroup::new(vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]]).unwrap();
        assert!(matches!(EGFamily::spheres(klein, 2), Err(Error::UnsupportedGroup(_))));
    }

    #[test]
    fn named_spaces() {
        assert_eq!(named_space("s3-antipodal").unwrap().len(), 8);
        assert_eq!(named_space("regular-z3").unwrap().len(), 3);
        assert!(named_space("torus").is_err());
    }
}
