//! Python module `novtel`: scalars, filtered complexes, barcodes and the equivariant checks.

use std::sync::Arc;

use novtel::borel::{cartan_check, equivariant_homology};
use novtel::cascade::{main_theorem_rehearsal, RehearsalConfig};
use novtel::complexes::{FilteredComplex, GappedMap, NovikovMatrix};
use novtel::doc::{self, Document};
use novtel::gcw::{named_space, EGFamily, FiniteGroup, GcwComplex};
use novtel::homology::{self, Barcode, DegreeWindow};
use novtel::novikov::{format_energy, parse_energy};
use novtel::trees;
use novtel::z2::Generator;
use novtel::{Energy, NovikovScalar, Variant};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: novtel::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn energies(exps: &[String]) -> PyResult<Vec<Energy>> {
    exps.iter().map(|s| parse_energy(s).map_err(err)).collect()
}

/// An element of the Novikov ring (or field) over `Z/2`, given by its exponents.
#[pyclass(name = "NovikovScalar", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyScalar(NovikovScalar);

#[pymethods]
impl PyScalar {
    #[new]
    #[pyo3(signature = (exponents, field = false))]
    fn new(exponents: Vec<String>, field: bool) -> PyResult<Self> {
        let variant = if field { Variant::Field } else { Variant::Ring };
        NovikovScalar::from_exponents(variant, energies(&exponents)?).map(PyScalar).map_err(err)
    }

    fn exponents(&self) -> Vec<String> {
        self.0.exponents().iter().map(format_energy).collect()
    }

    /// The valuation as a string, or `None` for zero.
    fn valuation(&self) -> Option<String> {
        self.0.valuation().finite().map(|v| format_energy(&v))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &PyScalar) -> PyResult<PyScalar> {
        self.0.add(&other.0).map(PyScalar).map_err(err)
    }

    fn __mul__(&self, other: &PyScalar) -> PyScalar {
        PyScalar(self.0.mul(&other.0))
    }

    fn __repr__(&self) -> String {
        format!("NovikovScalar({:?})", self.exponents())
    }
}

/// A filtered complex over the Novikov ring.
#[pyclass(name = "FilteredComplex", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyComplex(Arc<FilteredComplex>);

#[pymethods]
impl PyComplex {
    /// `generators` is a list of `(label, degree)`; `entries` a list of `(row, col, exponents)`.
    #[new]
    #[pyo3(signature = (generators, entries, gap = None))]
    fn new(generators: Vec<(String, i32)>, entries: Vec<(usize, usize, Vec<String>)>, gap: Option<String>) -> PyResult<Self> {
        let n = generators.len();
        let gens = generators.into_iter().map(|(l, d)| Generator::new(l, d)).collect();
        let entries = entries
            .into_iter()
            .map(|(r, c, exps)| Ok((r, c, NovikovScalar::from_exponents(Variant::Ring, energies(&exps)?).map_err(err)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let d = NovikovMatrix::from_entries(n, n, entries).map_err(err)?;
        let gap = gap.map(|g| parse_energy(&g).map_err(err)).transpose()?;
        FilteredComplex::new(gens, d, gap).map(|c| PyComplex(Arc::new(c))).map_err(err)
    }

    /// Parses a complex document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let d: Document = text.parse().map_err(err)?;
        doc::complex_from_doc(&d).map(|c| PyComplex(Arc::new(c))).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        doc::complex_doc(&self.0).map(|d| d.to_pretty()).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn labels(&self) -> Vec<String> {
        self.0.generators().iter().map(|g| g.label.clone()).collect()
    }

    /// Computed gap, or `None` when the differential has no positive-energy entries.
    fn gap(&self) -> Option<String> {
        self.0.differential().min_positive_exponent().finite().map(|e| format_energy(&e))
    }

    /// `Z/2` Betti numbers of the zero-energy reduction, as `{degree: rank}`.
    fn bar_homology(&self) -> PyResult<Vec<(i32, usize)>> {
        let bar = self.0.bar_reduce().map_err(err)?;
        Ok(homology::z2_homology(&bar).map_err(err)?.0.into_iter().collect())
    }

    fn barcode(&self) -> PyResult<PyBarcode> {
        homology::barcode(&self.0).map(PyBarcode).map_err(err)
    }

    /// Rank of `H_k(F^s C) → H_k(F^t C)`, by direct lattice computation.
    fn persistence_rank(&self, s: &str, t: &str, k: i32) -> PyResult<usize> {
        homology::persistence_rank(&self.0, parse_energy(s).map_err(err)?, parse_energy(t).map_err(err)?, k).map_err(err)
    }

    /// Checks whether the map `self → target` given by `entries` is an isomorphism on homology.
    fn iso_check(&self, target: &PyComplex, entries: Vec<(usize, usize, Vec<String>)>) -> PyResult<String> {
        let entries = entries
            .into_iter()
            .map(|(r, c, exps)| Ok((r, c, NovikovScalar::from_exponents(Variant::Ring, energies(&exps)?).map_err(err)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let m = NovikovMatrix::from_entries(target.0.len(), self.0.len(), entries).map_err(err)?;
        let f = GappedMap::new(self.0.clone(), target.0.clone(), m, 0).map_err(err)?;
        Ok(homology::gapped_iso_check(&f, DegreeWindow::ALL).map_err(err)?.verdict.to_string())
    }
}

#[pyclass(name = "Barcode", frozen)]
struct PyBarcode(Barcode);

#[pymethods]
impl PyBarcode {
    /// Bars as `(degree, birth, length)`; an infinite bar has length `None`.
    fn bars(&self) -> Vec<(i32, String, Option<String>)> {
        self.0.bars.iter().map(|b| (b.degree, format_energy(&b.birth), b.length.finite().map(|l| format_energy(&l)))).collect()
    }

    fn persistence_rank(&self, s: &str, t: &str, k: i32) -> PyResult<usize> {
        Ok(self.0.persistence_rank(parse_energy(s).map_err(err)?, parse_energy(t).map_err(err)?, k))
    }

    fn __len__(&self) -> usize {
        self.0.bars.len()
    }

    fn __str__(&self) -> String {
        self.0.to_table()
    }
}

fn space(name: &str, group_order: Option<usize>) -> PyResult<GcwComplex> {
    match (name, group_order) {
        ("pt", Some(m)) => GcwComplex::point(FiniteGroup::cyclic(m).map_err(err)?).map_err(err),
        ("regular", Some(m)) => GcwComplex::regular_orbit(FiniteGroup::cyclic(m).map_err(err)?).map_err(err),
        _ => named_space(name).map_err(err),
    }
}

fn family(m: &GcwComplex) -> PyResult<EGFamily> {
    EGFamily::spheres(m.group().clone(), 1).map_err(err)
}

/// `Z/2` equivariant Betti numbers of a space on degrees `0..=depth`.
#[pyfunction]
#[pyo3(signature = (space_name, depth, group_order = None))]
fn equivariant_betti(space_name: &str, depth: usize, group_order: Option<usize>) -> PyResult<Vec<usize>> {
    let m = space(space_name, group_order)?;
    Ok(equivariant_homology(&m, &family(&m)?, depth).map_err(err)?.dims)
}

/// Compares equivariant homology with the homology of the orbit space; returns
/// `(verdict, equivariant, quotient)`.
#[pyfunction]
fn cartan(space_name: &str, depth: usize) -> PyResult<(String, Vec<usize>, Vec<usize>)> {
    let m = space(space_name, None)?;
    let r = cartan_check(&m, &family(&m)?, depth).map_err(err)?;
    Ok((r.verdict.to_string(), r.equivariant, r.quotient))
}

/// One seeded run of the deformed Cartan comparison; returns the verdict.
#[pyfunction]
#[pyo3(signature = (space_name, depth, gap, seed, adversarial = false))]
fn rehearse(space_name: &str, depth: usize, gap: &str, seed: u64, adversarial: bool) -> PyResult<String> {
    let m = space(space_name, None)?;
    let cfg = RehearsalConfig { adversarial, ..RehearsalConfig::new(depth, parse_energy(gap).map_err(err)?, seed) };
    Ok(main_theorem_rehearsal(&m, &family(&m)?, cfg).map_err(err)?.verdict.to_string())
}

/// Strata of the compactified tree space `T_n`, as lists of edge states.
#[pyfunction]
fn tree_strata(n: i64) -> PyResult<Vec<Vec<String>>> {
    let strata = trees::enumerate_strata(n).map_err(err)?;
    Ok(strata.iter().map(|s| s.edge_states().iter().map(ToString::to_string).collect()).collect())
}

/// Runs the command-line interface; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut errs) = (Vec::new(), Vec::new());
    let argv = std::iter::once("novtel".to_string()).chain(args);
    let code = novtel::cli::run(argv, &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pymodule(name = "novtel")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyBarcode>()?;
    m.add_function(wrap_pyfunction!(equivariant_betti, m)?)?;
    m.add_function(wrap_pyfunction!(cartan, m)?)?;
    m.add_function(wrap_pyfunction!(rehearse, m)?)?;
    m.add_function(wrap_pyfunction!(tree_strata, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
