//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use novtel::complexes::{FilteredComplex, NovikovMatrix};
use novtel::gcw::GcwComplex;
use novtel::z2::{Generator, Z2ChainMap, Z2Complex, Z2Matrix};
use novtel::{Energy, NovikovScalar, Variant};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn e(p: i64, q: i64) -> Energy {
    Energy::new(p, q)
}

pub fn scalar(exps: &[Energy]) -> NovikovScalar {
    NovikovScalar::from_exponents(Variant::Ring, exps.iter().copied()).unwrap()
}

/// A random element of `Λ₀` with up to `max_terms` exponents `p/q`, `q ≤ 4`, value `< 4`.
pub fn random_scalar(rng: &mut ChaCha8Rng, max_terms: usize) -> NovikovScalar {
    let n = rng.gen_range(0..=max_terms);
    let exps: Vec<Energy> = (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=4);
            e(rng.gen_range(0..4 * q), q)
        })
        .collect();
    scalar(&exps)
}

/// Exponent multiset with multiplicities mod 2, built without the library's arithmetic.
pub fn oracle_terms(s: &NovikovScalar) -> BTreeMap<Energy, u8> {
    let mut m = BTreeMap::new();
    for x in s.exponents() {
        *m.entry(*x).or_insert(0) ^= 1;
    }
    m.retain(|_, v| *v == 1);
    m
}

pub fn oracle_product(a: &NovikovScalar, b: &NovikovScalar) -> BTreeMap<Energy, u8> {
    let mut m = BTreeMap::new();
    for x in a.exponents() {
        for y in b.exponents() {
            *m.entry(x + y).or_insert(0u8) ^= 1;
        }
    }
    m.retain(|_, v| *v == 1);
    m
}

/// Rank over `Z/2` of a dense 0/1 matrix by plain Gaussian elimination.
pub fn dense_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `Z/2` Betti numbers of a complex given by degrees and boundary pairs `(row, col)`.
pub fn brute_force_betti(degrees: &[i32], boundary: &[(usize, usize)], lo: i32, hi: i32) -> Vec<usize> {
    let block_rank = |k: i32| {
        let rows: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == k - 1).collect();
        let cols: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == k).collect();
        let mut dense = vec![vec![false; cols.len()]; rows.len()];
        for &(r, c) in boundary {
            if let (Some(ri), Some(ci)) = (rows.iter().position(|&x| x == r), cols.iter().position(|&x| x == c)) {
                dense[ri][ci] ^= true;
            }
        }
        dense_rank(dense)
    };
    (lo..=hi)
        .map(|k| degrees.iter().filter(|&&d| d == k).count() - block_rank(k) - block_rank(k + 1))
        .collect()
}

pub fn z2_betti(c: &Z2Complex, lo: i32, hi: i32) -> Vec<usize> {
    let degrees: Vec<i32> = c.generators().iter().map(|g| g.degree).collect();
    brute_force_betti(&degrees, &c.differential().entries(), lo, hi)
}

/// Orbit complex computed directly from the action, independent of the library's quotient.
pub fn oracle_quotient_betti(m: &GcwComplex, lo: i32, hi: i32) -> Vec<usize> {
    let n = m.len();
    let mut orbit = vec![usize::MAX; n];
    let mut count = 0;
    for i in 0..n {
        if orbit[i] == usize::MAX {
            for perm in m.action() {
                orbit[perm[i]] = count;
            }
            count += 1;
        }
    }
    let mut reps = vec![usize::MAX; count];
    for i in (0..n).rev() {
        reps[orbit[i]] = i;
    }
    let degrees: Vec<i32> = reps.iter().map(|&r| m.complex().generators()[r].degree).collect();
    let mut boundary = Vec::new();
    for (o, &r) in reps.iter().enumerate() {
        for x in m.complex().differential().col(r) {
            boundary.push((orbit[*x], o));
        }
    }
    brute_force_betti(&degrees, &boundary, lo, hi)
}

/// A random invertible degree-preserving `Z/2` matrix (a product of elementary operations).
pub fn random_automorphism(degrees: &[i32], rng: &mut ChaCha8Rng) -> Z2Matrix {
    let n = degrees.len();
    let mut m = Z2Matrix::identity(n);
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n.max(1)), rng.gen_range(0..n.max(1)));
        if n > 0 && i != j && degrees[i] == degrees[j] {
            let mut el = Z2Matrix::identity(n);
            el.set(i, j, true);
            m = el.mul(&m).unwrap();
        }
    }
    m
}

/// A random `Z/2` complex with at most `max_gens` generators in degrees `0..=2`.
pub fn random_z2_complex(rng: &mut ChaCha8Rng, max_gens: usize) -> Z2Complex {
    let n = rng.gen_range(1..=max_gens);
    let mut degrees = Vec::with_capacity(n);
    let mut pairs = Vec::new();
    while degrees.len() < n {
        let k = rng.gen_range(0..=2);
        if degrees.len() + 2 <= n && k > 0 && rng.gen_bool(0.5) {
            pairs.push((degrees.len(), degrees.len() + 1));
            degrees.push(k);
            degrees.push(k - 1);
        } else {
            degrees.push(k);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let degrees: Vec<i32> = perm.iter().map(|&i| degrees[i]).collect();
    let pos = |i: usize| perm.iter().position(|&p| p == i).unwrap();
    let d = Z2Matrix::from_entries(n, n, pairs.iter().map(|&(x, y)| (pos(y), pos(x)))).unwrap();
    let p = random_automorphism(&degrees, rng);
    let p_inv = inverse(&p);
    let d = p.mul(&d).unwrap().mul(&p_inv).unwrap();
    let gens = degrees.iter().enumerate().map(|(i, &k)| Generator::new(format!("g{i}"), k)).collect();
    Z2Complex::new(gens, d).unwrap()
}

pub fn inverse(p: &Z2Matrix) -> Z2Matrix {
    let n = p.ncols();
    let mut a: Vec<Vec<bool>> = (0..n).map(|r| (0..n).map(|c| p.get(r, c)).collect()).collect();
    let mut inv: Vec<Vec<bool>> = (0..n).map(|r| (0..n).map(|c| r == c).collect()).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| a[r][c]).expect("invertible");
        a.swap(c, piv);
        inv.swap(c, piv);
        for r in 0..n {
            if r != c && a[r][c] {
                let (ar, ir) = (a[c].clone(), inv[c].clone());
                for k in 0..n {
                    a[r][k] ^= ar[k];
                    inv[r][k] ^= ir[k];
                }
            }
        }
    }
    let entries = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).filter(|&(r, c)| inv[r][c]);
    Z2Matrix::from_entries(n, n, entries.collect::<Vec<_>>()).unwrap()
}

/// A uniformly random chain map: a random vector in the kernel of `F ↦ d_D F + F d_C`.
pub fn random_chain_map(source: &Z2Complex, target: &Z2Complex, rng: &mut ChaCha8Rng) -> Z2ChainMap {
    let vars: Vec<(usize, usize)> = (0..target.len())
        .flat_map(|r| (0..source.len()).map(move |c| (r, c)))
        .filter(|&(r, c)| target.generators()[r].degree == source.generators()[c].degree)
        .collect();
    let (nt, ns) = (target.len(), source.len());
    // equation (r, c) collects the coefficient of (d_D F + F d_C)[r][c]
    let mut entries = Vec::new();
    for (v, &(i, j)) in vars.iter().enumerate() {
        for &r in target.differential().col(i) {
            entries.push((r * ns + j, v));
        }
        for c in 0..ns {
            if source.differential().col(c).contains(&j) {
                entries.push((i * ns + c, v));
            }
        }
    }
    let system = Z2Matrix::from_entries(nt * ns, vars.len(), entries).unwrap();
    let kernel = system.kernel();
    let mut chosen = vec![false; vars.len()];
    for b in 0..kernel.ncols() {
        if rng.gen_bool(0.5) {
            for &v in kernel.col(b) {
                chosen[v] ^= true;
            }
        }
    }
    let m = Z2Matrix::from_entries(nt, ns, vars.iter().zip(&chosen).filter(|(_, &on)| on).map(|(&rc, _)| rc)).unwrap();
    Z2ChainMap::new(source, target, m).unwrap()
}

/// A random diagram `C⁰ → … → C^{len−1}`.
pub fn random_diagram(rng: &mut ChaCha8Rng, len: usize, max_gens: usize) -> (Vec<Z2Complex>, Vec<Z2ChainMap>) {
    let stages: Vec<Z2Complex> = (0..len).map(|_| random_z2_complex(rng, max_gens)).collect();
    let maps = (0..len - 1).map(|n| random_chain_map(&stages[n], &stages[n + 1], rng)).collect();
    (stages, maps)
}

/// Random gapped complex: elementary pieces (free generators and pairs `∂x = T^a y`) with
/// energies from a pool of at most six values, conjugated by a random unipotent change of basis
/// whose entries also come from the pool.
pub fn random_gdcf(rng: &mut ChaCha8Rng, max_gens: usize) -> FilteredComplex {
    let pool_size = rng.gen_range(1..=6);
    let mut pool: Vec<Energy> = vec![Energy::from_integer(0)];
    while pool.len() < pool_size {
        let x = e(rng.gen_range(1..=8), 2);
        if !pool.contains(&x) {
            pool.push(x);
        }
    }
    let n = rng.gen_range(1..=max_gens);
    let mut degrees = Vec::new();
    let mut entries = Vec::new();
    while degrees.len() < n {
        let k = rng.gen_range(0..=2);
        if degrees.len() + 2 <= n && k > 0 && rng.gen_bool(0.6) {
            let a = *pool.choose(rng).unwrap();
            entries.push((degrees.len() + 1, degrees.len(), scalar(&[a])));
            degrees.push(k);
            degrees.push(k - 1);
        } else {
            degrees.push(k);
        }
    }
    let d = NovikovMatrix::from_entries(n, n, entries).unwrap();
    let mut nil = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if degrees[i] == degrees[j] && rng.gen_bool(0.4) {
                nil.push((i, j, scalar(&[*pool.choose(rng).unwrap()])));
            }
        }
    }
    let nil = NovikovMatrix::from_entries(n, n, nil).unwrap();
    let p = NovikovMatrix::identity(n).add(&nil).unwrap();
    let mut p_inv = NovikovMatrix::identity(n);
    let mut power = nil.clone();
    while !power.is_zero() {
        p_inv = p_inv.add(&power).unwrap();
        power = power.mul(&nil).unwrap();
    }
    let d = p.mul(&d).unwrap().mul(&p_inv).unwrap();
    let gens = degrees.iter().enumerate().map(|(i, &k)| Generator::new(format!("g{i}"), k)).collect();
    FilteredComplex::new(gens, d, None).unwrap().with_computed_gap()
}

/// A random unipotent `I + N` between generators of equal degree with entries of energy `≥ ħ`.
pub fn random_gapped_unipotent(c: &FilteredComplex, gap: Energy, rng: &mut ChaCha8Rng) -> (NovikovMatrix, NovikovMatrix) {
    let n = c.len();
    let gens = c.generators();
    let mut nil = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if i != j && gens[i].degree == gens[j].degree && (i < j) && rng.gen_bool(0.4) {
                nil.push((i, j, scalar(&[gap * Energy::from_integer(rng.gen_range(1..=3))])));
            }
        }
    }
    let nil = NovikovMatrix::from_entries(n, n, nil).unwrap();
    let p = NovikovMatrix::identity(n).add(&nil).unwrap();
    let mut p_inv = NovikovMatrix::identity(n);
    let mut power = nil.clone();
    while !power.is_zero() {
        p_inv = p_inv.add(&power).unwrap();
        power = power.mul(&nil).unwrap();
    }
    (p, p_inv)
}

/// CLI cases with golden outputs in `tests/golden/<name>.txt`; `{data}` expands to `tests/data`.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("trees_n2", &["trees", "--n", "2"]),
    ("trees_n4_doc", &["--format", "doc", "trees", "--n", "4"]),
    ("cartan_s1", &["cartan", "--space", "s1-antipodal", "--depth", "3"]),
    ("cartan_s3_doc", &["--format", "doc", "cartan", "--space", "s3-antipodal", "--depth", "3"]),
    ("cartan_lens", &["cartan", "--space", "lens-z3-s3", "--depth", "3"]),
    ("borel_z2_pt", &["borel", "--group", "z2", "--space", "pt", "--depth", "4"]),
    ("borel_z4_pt", &["borel", "--group", "z4", "--space", "pt", "--depth", "3"]),
    ("rehearse_s2", &["--seed", "11", "cascade", "rehearse", "--space", "s2-antipodal", "--gap", "1/2", "--seeds", "3"]),
    ("rehearse_s1_doc", &["--seed", "5", "--format", "doc", "cascade", "rehearse", "--space", "s1-antipodal", "--gap", "1/3", "--seeds", "2"]),
    ("rehearse_adversarial", &["cascade", "rehearse", "--space", "s1-antipodal", "--gap", "1/2", "--seeds", "2", "--adversarial"]),
    ("homology_z2", &["homology", "{data}/complex.json"]),
    ("homology_novikov_doc", &["--format", "doc", "homology", "{data}/complex.json", "--over", "novikov"]),
    ("telescope_diagram", &["telescope", "{data}/diagram.json"]),
    ("validate_bad", &["validate", "{data}/bad_square.json"]),
    ("validate_diagram", &["validate", "{data}/diagram.json"]),
];

/// Runs the CLI in-process; the transcript starts with the exit code.
pub fn run_cli(args: &[&str]) -> String {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let argv: Vec<String> = std::iter::once("novtel".to_string()).chain(args.iter().map(|a| a.replace("{data}", data))).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = novtel::cli::run(argv, &mut out, &mut err);
    format!("exit {code}\n{}{}", String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}
