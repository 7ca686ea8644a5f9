//! Python bindings. Numbers go in as decimal strings (or Python numbers)
//! and come back as decimal strings at the requested number of digits, so
//! no precision is lost at the boundary.

use ellagm_core::agm::{agm_optimal, agm_scheduled, AgmPair, SignSet};
use ellagm_core::agm_values::classify_agm_value;
use ellagm_core::curve::{CurveRoots, Point};
use ellagm_core::elog::elog_any;
use ellagm_core::lattice::ReduceMode;
use ellagm_core::numerics::{format_cnum, format_real, parse_cnum, CNum, PrecisionContext};
use ellagm_core::oracle::wp as wp_core;
use ellagm_core::periods::{period_basis, PeriodTriple};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

create_exception!(ellagm, EllagmError, PyException);

fn py_err(e: ellagm_core::Error) -> PyErr {
    EllagmError::new_err((e.kind(), e.to_string()))
}

fn context(digits: u32) -> PyResult<PrecisionContext> {
    PrecisionContext::new(digits).map_err(py_err)
}

/// Accepts `"1.5-2i"`, an int, a float or a complex.
fn to_cnum(obj: &Bound<'_, PyAny>, ctx: &PrecisionContext) -> PyResult<CNum> {
    if let Ok(s) = obj.extract::<String>() {
        return parse_cnum(&s, ctx).map_err(py_err);
    }
    if let Ok(c) = obj.cast::<PyComplex>() {
        return Ok(ctx.cnum(c.real(), c.imag()));
    }
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(ctx.cint(n, 0));
    }
    let x: f64 = obj.extract()?;
    Ok(ctx.cnum(x, 0.0))
}

fn to_roots(roots: &Bound<'_, PyAny>, ctx: &PrecisionContext) -> PyResult<CurveRoots> {
    let items: Vec<Bound<'_, PyAny>> = roots.extract()?;
    let [a, b, c] = items.as_slice() else {
        return Err(EllagmError::new_err(("ArgumentError", "expected three roots")));
    };
    CurveRoots::new(to_cnum(a, ctx)?, to_cnum(b, ctx)?, to_cnum(c, ctx)?, ctx).map_err(py_err)
}

/// A period lattice: `w1`, `w2`, `w3` with `w3 = ±w1 ± w2`.
#[pyclass(module = "ellagm", frozen, get_all)]
struct Periods {
    w1: String,
    w2: String,
    w3: String,
    rectangular: bool,
    /// Orthogonal basis of a rectangular lattice.
    ortho_basis: Option<(String, String)>,
    /// The basis in which elliptic logarithm coordinates are reported.
    lattice: (String, String),
}

impl Periods {
    fn new(t: &PeriodTriple, digits: u32) -> Self {
        let f = |z: &CNum| format_cnum(z, digits);
        Periods {
            w1: f(&t.w1),
            w2: f(&t.w2),
            w3: f(&t.w3),
            rectangular: t.rectangular,
            ortho_basis: t.ortho_basis.as_ref().map(|(a, b)| (f(a), f(b))),
            lattice: (f(&t.lattice.w1), f(&t.lattice.w2)),
        }
    }
}

#[pymethods]
impl Periods {
    fn __repr__(&self) -> String {
        format!("Periods(w1={}, w2={}, w3={})", self.w1, self.w2, self.w3)
    }
}

/// The optimal AGM of `(a, b)`, or the one with sign changes at the steps
/// in `schedule` (e.g. `"1,3"`).
#[pyfunction]
#[pyo3(signature = (a, b, digits = 100, schedule = None))]
fn agm<'py>(
    py: Python<'py>,
    a: &Bound<'py, PyAny>,
    b: &Bound<'py, PyAny>,
    digits: u32,
    schedule: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let ctx = context(digits)?;
    let pair = AgmPair::new(to_cnum(a, &ctx)?, to_cnum(b, &ctx)?, &ctx).map_err(py_err)?;
    let res = match schedule {
        None => agm_optimal(&pair, &ctx),
        Some(s) => {
            let s: SignSet = s.parse().map_err(py_err)?;
            agm_scheduled(&pair, &s, &ctx)
        }
    }
    .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("m", format_cnum(&res.m, digits))?;
    d.set_item("iterations", res.iterations)?;
    d.set_item("tie_broken", res.tie_broken)?;
    d.set_item("schedule", res.schedule.to_string())?;
    Ok(d)
}

/// Periods of `Y^2 = 4(X - e1)(X - e2)(X - e3)`.
#[pyfunction]
#[pyo3(signature = (roots, digits = 100))]
fn periods(roots: &Bound<'_, PyAny>, digits: u32) -> PyResult<Periods> {
    let ctx = context(digits)?;
    let t = period_basis(&to_roots(roots, &ctx)?, &ctx).map_err(py_err)?;
    Ok(Periods::new(&t, digits))
}

/// Elliptic logarithm of `(x, y)`. `reduce` is `"strip"` or `"fundamental"`.
#[pyfunction]
#[pyo3(signature = (roots, x, y, digits = 100, reduce = "strip"))]
fn elog<'py>(
    py: Python<'py>,
    roots: &Bound<'py, PyAny>,
    x: &Bound<'py, PyAny>,
    y: &Bound<'py, PyAny>,
    digits: u32,
    reduce: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let ctx = context(digits)?;
    let r = to_roots(roots, &ctx)?;
    let p = Point::affine(to_cnum(x, &ctx)?, to_cnum(y, &ctx)?);
    let mut res = elog_any(&r, &p, &ctx).map_err(py_err)?;
    match reduce {
        "strip" => {}
        "fundamental" => {
            let t = period_basis(&r, &ctx).map_err(py_err)?;
            res.z = t.lattice.reduce_mod(&res.z, ReduceMode::Fundamental);
            res.coords = t.lattice.coordinates(&res.z);
        }
        other => {
            return Err(EllagmError::new_err((
                "ArgumentError",
                format!("unknown reduction {other:?}"),
            )))
        }
    }
    let d = PyDict::new(py);
    d.set_item("z", format_cnum(&res.z, digits))?;
    d.set_item(
        "coords",
        (format_real(&res.coords.u, digits), format_real(&res.coords.v, digits)),
    )?;
    d.set_item("iterations", res.iterations)?;
    d.set_item("tie_broken", res.tie_broken)?;
    Ok(d)
}

/// `(℘(z), ℘'(z))` for the period lattice of the curve.
#[pyfunction]
#[pyo3(signature = (roots, z, digits = 100))]
fn wp(roots: &Bound<'_, PyAny>, z: &Bound<'_, PyAny>, digits: u32) -> PyResult<(String, String)> {
    let ctx = context(digits)?;
    let r = to_roots(roots, &ctx)?;
    let t = period_basis(&r, &ctx).map_err(py_err)?;
    let v = wp_core(&to_cnum(z, &ctx)?, &t.lattice, &ctx).map_err(py_err)?;
    // ℘ of the lattice belongs to the centered model; move back to these roots
    let x = &v.wp + &r.shift();
    Ok((format_cnum(&x, digits), format_cnum(&v.wp_prime, digits)))
}

/// Locate `π/M_S(±a, ±b)` in the lattice spanned by `π/M(a, b)` and
/// `iπ/M(a, c)`. Raises `EllagmError` if the coset prediction fails.
#[pyfunction]
#[pyo3(signature = (a, b, schedule = "", sign_a = 1, sign_b = 1, digits = 60))]
fn classify<'py>(
    py: Python<'py>,
    a: &Bound<'py, PyAny>,
    b: &Bound<'py, PyAny>,
    schedule: &str,
    sign_a: i8,
    sign_b: i8,
    digits: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let ctx = context(digits)?;
    let s: SignSet = schedule.parse().map_err(py_err)?;
    let rep = classify_agm_value(&to_cnum(a, &ctx)?, &to_cnum(b, &ctx)?, &s, sign_a, sign_b, &ctx)
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("value", format_cnum(&rep.value, digits))?;
    d.set_item("u", rep.u.to_string())?;
    d.set_item("v", rep.v.to_string())?;
    d.set_item("residues", rep.residues)?;
    d.set_item("primitive", rep.primitive)?;
    d.set_item("error", rep.error.to_f64())?;
    Ok(d)
}

/// Convert a `"re±imi"` string to a Python complex (rounding to double).
#[pyfunction]
fn to_complex(s: &str) -> PyResult<(f64, f64)> {
    let ctx = context(20)?;
    let z = parse_cnum(s, &ctx).map_err(py_err)?;
    Ok((z.re().to_f64(), z.im().to_f64()))
}

#[pymodule]
fn ellagm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EllagmError", m.py().get_type::<EllagmError>())?;
    m.add_class::<Periods>()?;
    m.add_function(wrap_pyfunction!(agm, m)?)?;
    m.add_function(wrap_pyfunction!(periods, m)?)?;
    m.add_function(wrap_pyfunction!(elog, m)?)?;
    m.add_function(wrap_pyfunction!(wp, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(to_complex, m)?)?;
    Ok(())
}
