//! Python bindings. Areas are passed as sequences of anything whose `str()`
//! is an exact rational (`int`, `fractions.Fraction`, `"5/2"`); reports come
//! back as the same dictionaries the CLI prints with `--format json`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde_json::Value;

use symstab::packing::{critical_capacities as profile, BallConfig};
use symstab::rational::{format_rational, parse_rational};
use symstab::spheres::enumerate_candidates;
use symstab::stability::{certify as certify_pair, max_stable_level, segment_walls};
use symstab::strata::{codimension, enumerate_admissible, is_admissible};
use symstab::{wire, ClassCatalog, EnumerationBounds, Floor, LatticeClass, Rational, SymplecticClass};

create_exception!(symstab_py, SymstabError, PyException);

fn err(e: symstab::Error) -> PyErr {
    SymstabError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn rationals(values: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    values.iter().map(|x| parse_rational(&x.str()?.to_string()).map_err(err)).collect()
}

fn floor(n: Option<i64>) -> Floor {
    n.map_or(Floor::Unbounded, Floor::Finite)
}

/// A lattice model: `"product"` or `"blowup:k"`.
#[pyclass(name = "Surface", frozen, from_py_object)]
#[derive(Clone)]
struct PySurface {
    inner: symstab::SurfaceModel,
}

impl PySurface {
    fn class(&self, coords: Vec<i64>) -> PyResult<LatticeClass> {
        if coords.len() != self.inner.rank() {
            return Err(SymstabError::new_err(format!(
                "expected {} coordinates, got {}",
                self.inner.rank(),
                coords.len()
            )));
        }
        Ok(LatticeClass::new(coords))
    }

    fn point(&self, areas: &[Bound<'_, PyAny>]) -> PyResult<SymplecticClass> {
        SymplecticClass::from_areas(&self.inner, &rationals(areas)?).map_err(err)
    }
}

#[pymethods]
impl PySurface {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: wire::parse_surface(spec).map_err(err)? })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn blow_ups(&self) -> Option<usize> {
        self.inner.blow_ups()
    }

    #[getter]
    fn basis_names(&self) -> Vec<String> {
        self.inner.basis_names()
    }

    #[getter]
    fn canonical(&self) -> Vec<i64> {
        self.inner.canonical().0
    }

    fn pair(&self, a: Vec<i64>, b: Vec<i64>) -> PyResult<i64> {
        self.inner.pair(&self.class(a)?, &self.class(b)?).map_err(err)
    }

    fn square(&self, a: Vec<i64>) -> PyResult<i64> {
        self.inner.square(&self.class(a)?).map_err(err)
    }

    fn adjunction_defect(&self, a: Vec<i64>) -> PyResult<i64> {
        self.inner.adjunction_defect(&self.class(a)?).map_err(err)
    }

    fn cod(&self, a: Vec<i64>) -> PyResult<i64> {
        self.inner.cod(&self.class(a)?).map_err(err)
    }

    fn format_class(&self, a: Vec<i64>) -> PyResult<String> {
        Ok(self.inner.format_class(&self.class(a)?))
    }

    /// Reduced areas (as strings) and the number of reflections used.
    fn reduce(&self, areas: Vec<Bound<'_, PyAny>>) -> PyResult<(Vec<String>, usize)> {
        let (r, w) = self.inner.reduce(&self.point(&areas)?).map_err(err)?;
        Ok((r.areas(&self.inner).iter().map(format_rational).collect(), w.len()))
    }

    /// Adjunction classes of the given square.
    fn enumerate(&self, square: i64) -> PyResult<Vec<Vec<i64>>> {
        let found = enumerate_candidates(&self.inner, square, &EnumerationBounds::none()).map_err(err)?;
        Ok(found.into_iter().map(|a| a.0).collect())
    }

    fn is_admissible(&self, classes: Vec<Vec<i64>>) -> PyResult<bool> {
        let cs = classes.into_iter().map(|c| self.class(c)).collect::<PyResult<Vec<_>>>()?;
        is_admissible(&self.inner, &cs).map_err(err)
    }

    fn codimension(&self, classes: Vec<Vec<i64>>) -> PyResult<i64> {
        let cs = classes.into_iter().map(|c| self.class(c)).collect::<PyResult<Vec<_>>>()?;
        codimension(&self.inner, &cs).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Surface({:?})", wire::surface_name(&self.inner))
    }
}

/// Memoized enumeration on one surface. `square_min` and `radius` bound the
/// search; both are needed on `blowup:9`.
#[pyclass(name = "Catalog", frozen)]
struct PyCatalog {
    surface: PySurface,
    inner: ClassCatalog,
}

#[pymethods]
impl PyCatalog {
    #[new]
    #[pyo3(signature = (surface, square_min=None, radius=None))]
    fn new(surface: &PySurface, square_min: Option<i64>, radius: Option<i64>) -> PyResult<Self> {
        let bounds = match radius {
            Some(r) => EnumerationBounds::cube(surface.inner.rank(), r, square_min),
            None => EnumerationBounds { square_min, coefficient_box: None },
        };
        let inner = ClassCatalog::new(surface.inner.clone(), bounds).map_err(err)?;
        Ok(Self { surface: surface.clone(), inner })
    }

    #[getter]
    fn surface(&self) -> PySurface {
        self.surface.clone()
    }

    /// Negative sphere classes of `u` down to square `-floor` (derived when `None`).
    #[pyo3(signature = (u, floor=None))]
    fn spherical_set<'py>(&self, py: Python<'py>, u: Vec<Bound<'py, PyAny>>, floor: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
        let u = self.surface.point(&u)?;
        let n = self.inner.resolve_floor(self::floor(floor), &[&u]).map_err(err)?;
        let set = self.inner.spherical_set(&u, n).map_err(err)?.with_cremona_certification();
        to_py(py, &wire::sets_report(&set, &u))
    }

    #[pyo3(signature = (u, v, floor=None))]
    fn symmetric_difference<'py>(
        &self,
        py: Python<'py>,
        u: Vec<Bound<'py, PyAny>>,
        v: Vec<Bound<'py, PyAny>>,
        floor: Option<i64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (u, v) = (self.surface.point(&u)?, self.surface.point(&v)?);
        let (a, b) = self.inner.symmetric_difference(&u, &v, self::floor(floor)).map_err(err)?;
        to_py(py, &wire::difference_report(&a, &b))
    }

    fn stability<'py>(&self, py: Python<'py>, u: Vec<Bound<'py, PyAny>>, v: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let (u, v) = (self.surface.point(&u)?, self.surface.point(&v)?);
        to_py(py, &wire::verdict_json(&max_stable_level(&self.inner, &u, &v).map_err(err)?))
    }

    fn walls<'py>(&self, py: Python<'py>, u: Vec<Bound<'py, PyAny>>, v: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let (u, v) = (self.surface.point(&u)?, self.surface.point(&v)?);
        let walls = segment_walls(&self.inner, &u, &v).map_err(err)?;
        to_py(py, &wire::walls_json(&self.surface.inner, &walls))
    }

    fn certify<'py>(&self, py: Python<'py>, u: Vec<Bound<'py, PyAny>>, v: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let (u, v) = (self.surface.point(&u)?, self.surface.point(&v)?);
        to_py(py, &wire::certificate_json(&certify_pair(&self.inner, &u, &v).map_err(err)?))
    }

    /// Admissible sets of codimension below `2 * level`.
    fn strata<'py>(&self, py: Python<'py>, u: Vec<Bound<'py, PyAny>>, level: i64) -> PyResult<Bound<'py, PyAny>> {
        let u = self.surface.point(&u)?;
        to_py(py, &wire::strata_json(&enumerate_admissible(&self.inner, &u, level).map_err(err)?))
    }
}

/// Critical capacities of balls with the given weights along `c * weights`.
#[pyfunction]
#[pyo3(signature = (surface, u, weights, square_min=None))]
fn critical_capacities<'py>(
    py: Python<'py>,
    surface: &PySurface,
    u: Vec<Bound<'py, PyAny>>,
    weights: Vec<Bound<'py, PyAny>>,
    square_min: Option<i64>,
) -> PyResult<Bound<'py, PyAny>> {
    let s = surface.inner;
    let u = surface.point(&u)?;
    let config = BallConfig::new(s, rationals(&weights)?, true).map_err(err)?;
    let bounds = EnumerationBounds { square_min, coefficient_box: None };
    to_py(py, &wire::profile_json(&profile(&s, &u, &config, &bounds).map_err(err)?))
}

#[pymodule]
fn symstab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySurface>()?;
    m.add_class::<PyCatalog>()?;
    m.add_function(wrap_pyfunction!(critical_capacities, m)?)?;
    m.add("SymstabError", m.py().get_type::<SymstabError>())?;
    m.add("SCHEMA", wire::SCHEMA)?;
    Ok(())
}
