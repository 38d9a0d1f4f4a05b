//! Python bindings for the toric Calabi-Yau toolkit.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use toric_cy::catalog::{catalog_names, lookup};
use toric_cy::io::{parse_cy, parse_fan, to_json_pretty, CyFile, FanFile};
use toric_cy::lattice::Rational;
use toric_cy::pipeline::SmoothnessCertificate;
use toric_cy::{
    ci_twisted_cohomology, class_group, cohomology_dims_with, euler_characteristic_ci,
    hodge_report, is_ample, is_fano, is_nef, monomial_intersection, smoothness_certificate_with,
    validate_fan, CertPath, CertificateOptions, Method, TorusDivisor,
};

create_exception!(toric_cy_py, ToricCyError, PyException);

fn err(e: toric_cy::Error) -> PyErr {
    ToricCyError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

/// A complete or incomplete simplicial fan.
#[pyclass(frozen, skip_from_py_object, name = "Fan")]
#[derive(Clone)]
struct PyFan {
    inner: toric_cy::Fan,
}

#[pymethods]
impl PyFan {
    /// Validates the fan; non-primitive rays are divided down silently.
    #[new]
    fn new(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> PyResult<Self> {
        let (inner, _) = validate_fan(rays, max_cones).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (_, inner, _) = parse_fan(text).map_err(err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        to_json_pretty(&FanFile::from_fan(&self.inner, ""))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.inner.rays().to_vec()
    }

    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.inner
            .max_cones()
            .iter()
            .map(|c| c.rays().to_vec())
            .collect()
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn is_smooth(&self) -> bool {
        self.inner.is_smooth()
    }

    fn is_fano(&self) -> PyResult<bool> {
        is_fano(&self.inner).map_err(err)
    }

    fn is_nef(&self, divisor: Vec<i64>) -> PyResult<bool> {
        is_nef(&self.inner, &TorusDivisor(divisor)).map_err(err)
    }

    fn is_ample(&self, divisor: Vec<i64>) -> PyResult<bool> {
        is_ample(&self.inner, &TorusDivisor(divisor)).map_err(err)
    }

    /// `(rank, torsion)` of the divisor class group.
    fn class_group<'py>(&self, py: Python<'py>) -> PyResult<(usize, Bound<'py, PyList>)> {
        let g = class_group(&self.inner);
        Ok((g.rank(), PyList::new(py, g.torsion())?))
    }

    /// `h^i(X, O(D))` for `i = 0..dim`.
    #[pyo3(signature = (divisor, method = "auto"))]
    fn cohomology(&self, divisor: Vec<i64>, method: &str) -> PyResult<Vec<u64>> {
        let method: Method = method.parse().map_err(err)?;
        let (v, _) =
            cohomology_dims_with(&self.inner, &TorusDivisor(divisor), method).map_err(err)?;
        Ok(v.dims().expect("ambient cohomology is exact").to_vec())
    }

    /// Degree of the monomial `prod x_i^e_i`, as a `Fraction`.
    fn intersection<'py>(
        &self,
        py: Python<'py>,
        exponents: Vec<u32>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let q = monomial_intersection(&self.inner, &exponents).map_err(err)?;
        fraction(py, &q)
    }

    fn __repr__(&self) -> String {
        format!(
            "Fan(dim={}, rays={}, max_cones={})",
            self.inner.dim(),
            self.inner.num_rays(),
            self.inner.max_cones().len()
        )
    }
}

/// A complete intersection of hypersurfaces in a toric variety.
#[pyclass(frozen, name = "CompleteIntersection")]
struct PyCi {
    inner: toric_cy::CompleteIntersection,
}

fn certificate_dict<'py>(
    py: Python<'py>,
    c: &SmoothnessCertificate,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("verdict", c.verdict.to_string())?;
    d.set_item("reason", c.reason.clone())?;
    d.set_item("dimension_ok", c.dimension_ok)?;
    let rays = PyList::empty(py);
    for r in &c.per_ray {
        let rd = PyDict::new(py);
        rd.set_item("ray", r.ray)?;
        rd.set_item("path", r.path.map(|p| p.to_string()))?;
        let attempts: Vec<(String, bool, String)> = r
            .attempts
            .iter()
            .map(|a| (a.path.to_string(), a.success, a.evidence.clone()))
            .collect();
        rd.set_item("attempts", attempts)?;
        rays.append(rd)?;
    }
    d.set_item("per_ray", rays)?;
    let assumptions: Vec<&str> = c.assumptions.iter().map(|a| a.describe()).collect();
    d.set_item("assumptions", assumptions)?;
    Ok(d)
}

#[pymethods]
impl PyCi {
    #[new]
    #[pyo3(signature = (fan, hypersurfaces, assume_smooth = false))]
    fn new(fan: &PyFan, hypersurfaces: Vec<Vec<i64>>, assume_smooth: bool) -> PyResult<Self> {
        let hs = hypersurfaces.into_iter().map(TorusDivisor).collect();
        let inner = toric_cy::CompleteIntersection::new(fan.inner.clone(), hs, assume_smooth)
            .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (inner, _) = parse_cy(text).map_err(err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        to_json_pretty(&CyFile::from_ci(&self.inner))
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.name.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn fan(&self) -> PyFan {
        PyFan {
            inner: self.inner.fan().clone(),
        }
    }

    /// `h^i(Z, O_Z(D))`; entries are `(lower, upper)` bounds, equal when exact.
    fn cohomology(&self, divisor: Vec<i64>) -> PyResult<Vec<(u64, u64)>> {
        let v = ci_twisted_cohomology(&self.inner, &TorusDivisor(divisor)).map_err(err)?;
        Ok(v.lower()
            .iter()
            .copied()
            .zip(v.upper().iter().copied())
            .collect())
    }

    fn euler_characteristic(&self) -> PyResult<i64> {
        euler_characteristic_ci(&self.inner).map_err(err)
    }

    /// Smoothness certificate for the forgetful morphism.
    #[pyo3(signature = (all_paths = false, path = None))]
    fn certificate<'py>(
        &self,
        py: Python<'py>,
        all_paths: bool,
        path: Option<&str>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let only = path.map(str::parse::<CertPath>).transpose().map_err(err)?;
        let c = smoothness_certificate_with(&self.inner, CertificateOptions { all_paths, only })
            .map_err(err)?;
        certificate_dict(py, &c)
    }

    /// Hodge numbers, the full diamond and the Euler cross-check.
    fn hodge<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = hodge_report(&self.inner, CertificateOptions::default()).map_err(err)?;
        let d = PyDict::new(py);
        let h = &r.diamond;
        d.set_item("h11", h.get(1, 1))?;
        d.set_item("h21", h.get(2, 1))?;
        if h.m == 4 {
            d.set_item("h31", h.get(3, 1))?;
            d.set_item("h22", h.get(2, 2))?;
        }
        d.set_item("diamond", h.h.clone())?;
        d.set_item("euler", h.euler_characteristic())?;
        d.set_item("euler_oracle", h.cross_checks.euler_oracle)?;
        d.set_item("certificate", certificate_dict(py, &r.certificate)?)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "CompleteIntersection(name={:?}, dim={}, codim={})",
            self.inner.name.as_deref().unwrap_or(""),
            self.inner.dim(),
            self.inner.codim()
        )
    }
}

/// Names of the built-in fixtures.
#[pyfunction]
fn catalog() -> Vec<String> {
    catalog_names()
}

/// A built-in fixture as a complete intersection.
#[pyfunction]
fn catalog_entry(name: &str) -> PyResult<PyCi> {
    let inner = lookup(name).and_then(|e| e.build()).map_err(err)?;
    Ok(PyCi { inner })
}

#[pymodule]
fn toric_cy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFan>()?;
    m.add_class::<PyCi>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_entry, m)?)?;
    m.add("ToricCyError", m.py().get_type::<ToricCyError>())?;
    Ok(())
}
