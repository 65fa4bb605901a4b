//! C ABI for `dyson-core`.
//!
//! Every function returns a [`DysonStatus`] and writes results through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`dyson_last_error`]. Objects with state live behind opaque handles that
//! the caller releases with the matching `_free` function. Matrices are
//! row-major.
//!
//! The header `include/dyson.h` is generated by the build script.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the access implied by their
//! type: inputs readable, outputs writable. Null is reported as
//! `NullPointer` except where a function documents an optional output.
//! Handles must come from the matching `_new` function and be freed once.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use dyson_core::cli::{evaluate, ScenarioConfig};
use dyson_core::metric::{
    integrate_metric, static_metric, zeta_metric, MetricFlow, Su2Hamiltonian, ZetaConstants,
};
use dyson_core::propagator::time_ordered_u;
use dyson_core::su2::{eigensystem, hermitian_sqrt, pauli_decompose};
use dyson_core::yang_lee::{self, Branch, YangLeeParams};
use dyson_core::{Complex2x2, Error, IntegrationGrid, StateVector2, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DysonStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidGrid = 3,
    NonFinite = 4,
    NotHermitian = 5,
    NotPositiveDefinite = 6,
    NonDiagonalizable = 7,
    SingularDysonMap = 8,
    UnsupportedHamiltonian = 9,
    PositivityLost = 10,
    StepTooLarge = 11,
    ConfigInvalid = 12,
    Io = 13,
    CallbackFailed = 14,
    OutOfRange = 15,
    Panic = 16,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DysonComplex {
    pub re: f64,
    pub im: f64,
}

/// Row-major 2×2 complex matrix: `m[0]` is row 0, column 0; `m[1]` row 0, column 1.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DysonMatrix2 {
    pub m: [DysonComplex; 4],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DysonVector2 {
    pub v: [DysonComplex; 2],
}

/// `H = ½(κ₀ + iλ₀)𝕀 + ½(κ⃗ + iλ⃗)·σ⃗`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DysonSu2 {
    pub kappa0: f64,
    pub lambda0: f64,
    pub kappa: [f64; 3],
    pub lambda: [f64; 3],
}

/// `+1` for the upper energy branch, `-1` for the lower.
pub type DysonBranch = i32;

/// Callback filling `*out` with `h(t)`; nonzero return aborts the integration.
pub type DysonHamiltonianFn =
    Option<unsafe extern "C" fn(t: f64, user_data: *mut c_void, out: *mut DysonMatrix2) -> i32>;

/// Opaque Yang–Lee model.
pub struct DysonYangLee {
    params: YangLeeParams,
}

/// Opaque integrated metric series.
pub struct DysonMetricFlow {
    flow: MetricFlow,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DysonStatus {
    match e {
        Error::NonFinite => DysonStatus::NonFinite,
        Error::NonDiagonalizable { .. } => DysonStatus::NonDiagonalizable,
        Error::NotHermitian { .. } => DysonStatus::NotHermitian,
        Error::NotPositiveDefinite { .. } | Error::PositivityViolation { .. } => {
            DysonStatus::NotPositiveDefinite
        }
        Error::UnsupportedHamiltonian(_) => DysonStatus::UnsupportedHamiltonian,
        Error::PositivityLost { .. } => DysonStatus::PositivityLost,
        Error::StepTooLarge { .. } => DysonStatus::StepTooLarge,
        Error::SingularDysonMap { .. } => DysonStatus::SingularDysonMap,
        Error::DimensionTooLarge { .. } | Error::InvalidParameter(_) => {
            DysonStatus::InvalidParameter
        }
        Error::InvalidGrid(_) => DysonStatus::InvalidGrid,
        Error::ConfigInvalid(_) => DysonStatus::ConfigInvalid,
        Error::Io(_) => DysonStatus::Io,
    }
}

enum Failure {
    Core(Error),
    Status(DysonStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn null() -> Failure {
    Failure::Status(DysonStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, translating errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DysonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DysonStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            DysonStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn read<T: Copy>(p: *const T) -> Result<T, Failure> {
    if p.is_null() {
        return Err(null());
    }
    Ok(p.read())
}

unsafe fn model<'a>(h: *const DysonYangLee) -> Result<&'a YangLeeParams, Failure> {
    h.as_ref().map(|m| &m.params).ok_or_else(null)
}

fn branch(b: DysonBranch) -> Result<Branch, Failure> {
    match b {
        1 => Ok(Branch::Plus),
        -1 => Ok(Branch::Minus),
        other => Err(Failure::Status(
            DysonStatus::InvalidParameter,
            format!("branch must be +1 or -1, got {other}"),
        )),
    }
}

impl From<C64> for DysonComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<DysonComplex> for C64 {
    fn from(z: DysonComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

impl From<Complex2x2> for DysonMatrix2 {
    fn from(m: Complex2x2) -> Self {
        let [[a, b], [c, d]] = m.rows();
        Self {
            m: [a.into(), b.into(), c.into(), d.into()],
        }
    }
}

impl DysonMatrix2 {
    fn to_core(self) -> Result<Complex2x2, Error> {
        let [a, b, c, d] = self.m.map(C64::from);
        Complex2x2::new([[a, b], [c, d]])
    }
}

impl From<StateVector2> for DysonVector2 {
    fn from(s: StateVector2) -> Self {
        Self {
            v: s.0.map(DysonComplex::from),
        }
    }
}

impl From<DysonSu2> for Su2Hamiltonian {
    fn from(h: DysonSu2) -> Self {
        Su2Hamiltonian::new(h.kappa0, h.lambda0, h.kappa, h.lambda)
    }
}

/// Message of the last failure on this thread. Valid until the next failing
/// call on the same thread; never null.
#[no_mangle]
pub extern "C" fn dyson_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dyson_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// Yang–Lee model

/// Creates a model with `0 < gamma < 1`. Release with [`dyson_yang_lee_free`].
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_new(
    gamma: f64,
    omega: f64,
    out: *mut *mut DysonYangLee,
) -> DysonStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let params = YangLeeParams::new(gamma, omega)?;
        out.write(Box::into_raw(Box::new(DysonYangLee { params })));
        Ok(())
    })
}

/// Releases a model. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_free(handle: *mut DysonYangLee) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Rabi frequency `Ω = √(1 − γ²)`, reference time `t₀ = −π/(2Ω)` and the
/// eigenvalues `E₊`, `E₋` of the static Hamiltonian. Any out pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_constants(
    handle: *const DysonYangLee,
    rabi_frequency: *mut f64,
    reference_time: *mut f64,
    e_plus: *mut f64,
    e_minus: *mut f64,
) -> DysonStatus {
    guard(|| {
        let p = model(handle)?;
        let (ep, em) = yang_lee::eigenvalues_h1(p);
        for (out, v) in [
            (rabi_frequency, p.rabi_frequency()),
            (reference_time, p.reference_time()),
            (e_plus, ep),
            (e_minus, em),
        ] {
            if !out.is_null() {
                out.write(v);
            }
        }
        Ok(())
    })
}

/// Static non-Hermitian Hamiltonian `H₁`.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_hamiltonian(
    handle: *const DysonYangLee,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| write(out, model(handle)?.hamiltonian().into()))
}

/// Closed-form metric `ρ(t)`.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_rho(
    handle: *const DysonYangLee,
    t: f64,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| write(out, yang_lee::rho_closed(t, model(handle)?).into()))
}

/// Closed-form Dyson map `η(t)` and `∂ₜη`. Either out pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_eta(
    handle: *const DysonYangLee,
    t: f64,
    eta: *mut DysonMatrix2,
    eta_dot: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| {
        let s = yang_lee::eta_closed(t, model(handle)?);
        if !eta.is_null() {
            eta.write(s.eta.into());
        }
        if !eta_dot.is_null() {
            eta_dot.write(s.eta_dot.into());
        }
        Ok(())
    })
}

/// Hermitian Hamiltonian `h(t)`.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_hermitian_h(
    handle: *const DysonYangLee,
    t: f64,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| write(out, yang_lee::rabi_h(t, model(handle)?).into()))
}

/// Closed-form propagator `u(t, t₀)`.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_propagator(
    handle: *const DysonYangLee,
    t: f64,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| write(out, yang_lee::u_closed(t, model(handle)?).into()))
}

/// Continuous phase `θ(t)` of the first diagonal entry of `u(t, t₀)`.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_theta(
    handle: *const DysonYangLee,
    t: f64,
    out: *mut f64,
) -> DysonStatus {
    guard(|| write(out, yang_lee::theta(t, model(handle)?)))
}

/// Energy expectation `E±(t)` of the Hermitian-picture states.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_energy(
    handle: *const DysonYangLee,
    t: f64,
    which: DysonBranch,
    out: *mut f64,
) -> DysonStatus {
    guard(|| write(out, yang_lee::energy_expectation(t, branch(which)?, model(handle)?)))
}

/// Non-Hermitian picture eigenstate `Ψ±(t)`.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_psi(
    handle: *const DysonYangLee,
    t: f64,
    which: DysonBranch,
    out: *mut DysonVector2,
) -> DysonStatus {
    guard(|| write(out, yang_lee::psi_pm(t, branch(which)?, model(handle)?).into()))
}

/// Hermitian-picture state `φ±(t) = η(t)Ψ±(t)`.
#[no_mangle]
pub unsafe extern "C" fn dyson_yang_lee_phi(
    handle: *const DysonYangLee,
    t: f64,
    which: DysonBranch,
    out: *mut DysonVector2,
) -> DysonStatus {
    guard(|| write(out, yang_lee::phi_pm(t, branch(which)?, model(handle)?).into()))
}

// 2×2 algebra

/// Hermitian square root of a Hermitian positive-definite matrix.
#[no_mangle]
pub unsafe extern "C" fn dyson_hermitian_sqrt(
    m: *const DysonMatrix2,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| {
        let m = read(m)?.to_core()?;
        write(out, hermitian_sqrt(&m)?.into())
    })
}

/// Coefficients `(a₀, a_x, a_y, a_z)` with `M = a₀𝕀 + a⃗·σ⃗`.
#[no_mangle]
pub unsafe extern "C" fn dyson_pauli_decompose(
    m: *const DysonMatrix2,
    out: *mut [DysonComplex; 4],
) -> DysonStatus {
    guard(|| {
        let c = pauli_decompose(&read(m)?.to_core()?);
        write(out, [c.a0, c.ax, c.ay, c.az].map(DysonComplex::from))
    })
}

/// Eigenvalues sorted by real part and unit eigenvectors stored as the
/// columns of `vectors`.
#[no_mangle]
pub unsafe extern "C" fn dyson_eigensystem(
    m: *const DysonMatrix2,
    values: *mut [DysonComplex; 2],
    vectors: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| {
        let e = eigensystem(&read(m)?.to_core()?)?;
        write(values, e.values.map(DysonComplex::from))?;
        write(vectors, e.vector_matrix().into())
    })
}

// Metrics

/// Time-independent metric `α𝕀 + β⃗·σ⃗` with `β⃗ = (α/|κ⃗|²)λ⃗×κ⃗ + νκ⃗`.
#[no_mangle]
pub unsafe extern "C" fn dyson_static_metric(
    h: *const DysonSu2,
    alpha: f64,
    nu: f64,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| {
        let s = static_metric(&read(h)?.into(), alpha, nu)?;
        write(out, s.matrix().into())
    })
}

/// Closed-form time-dependent metric of the ζ family at time `t`.
#[no_mangle]
pub unsafe extern "C" fn dyson_zeta_metric(
    h: *const DysonSu2,
    constants: *const [f64; 4],
    t: f64,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| {
        let [c1, c2, c3, c4] = read(constants)?;
        let s = zeta_metric(t, &read(h)?.into(), &ZetaConstants::new(c1, c2, c3, c4))?;
        write(out, s.matrix().into())
    })
}

/// Integrates `∂ₜρ = −i(H†ρ − ρH)` from `rho0` on `[t_start, t_end]` in equal
/// steps no longer than `max_dt`. Release with [`dyson_metric_flow_free`].
#[no_mangle]
pub unsafe extern "C" fn dyson_metric_flow_new(
    h: *const DysonSu2,
    rho0: *const DysonMatrix2,
    t_start: f64,
    t_end: f64,
    max_dt: f64,
    out: *mut *mut DysonMetricFlow,
) -> DysonStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let grid = IntegrationGrid::with_max_step(t_start, t_end, max_dt)?;
        let flow = integrate_metric(&read(h)?.into(), &read(rho0)?.to_core()?, &grid)?;
        out.write(Box::into_raw(Box::new(DysonMetricFlow { flow })));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dyson_metric_flow_free(handle: *mut DysonMetricFlow) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of samples, including the initial one.
#[no_mangle]
pub unsafe extern "C" fn dyson_metric_flow_len(
    handle: *const DysonMetricFlow,
    out: *mut usize,
) -> DysonStatus {
    guard(|| {
        let f = handle.as_ref().ok_or_else(null)?;
        write(out, f.flow.series.len())
    })
}

/// Sample `index` and its time.
#[no_mangle]
pub unsafe extern "C" fn dyson_metric_flow_sample(
    handle: *const DysonMetricFlow,
    index: usize,
    t: *mut f64,
    rho: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| {
        let f = handle.as_ref().ok_or_else(null)?;
        let m = f.flow.series.get(index).ok_or_else(|| {
            Failure::Status(DysonStatus::OutOfRange, format!("sample {index} out of range"))
        })?;
        write(t, f.flow.series.time(index))?;
        write(rho, (*m).into())
    })
}

/// Smallest `det ρ` and where it occurs. `breakdown_t` receives the first
/// time with `det ρ ≤ 0`, or NaN when positivity held throughout.
#[no_mangle]
pub unsafe extern "C" fn dyson_metric_flow_positivity(
    handle: *const DysonMetricFlow,
    min_det: *mut f64,
    min_det_t: *mut f64,
    breakdown_t: *mut f64,
) -> DysonStatus {
    guard(|| {
        let f = &handle.as_ref().ok_or_else(null)?.flow;
        write(min_det, f.min_margin)?;
        write(min_det_t, f.min_margin_t)?;
        write(breakdown_t, f.breakdown.unwrap_or(f64::NAN))
    })
}

// Propagation

/// Time-ordered propagator `u(t_to, t_from)` of a Hamiltonian supplied by
/// `callback`, with a step that divides the interval and is at most `dt`.
#[no_mangle]
pub unsafe extern "C" fn dyson_time_ordered_u(
    callback: DysonHamiltonianFn,
    user_data: *mut c_void,
    t_from: f64,
    t_to: f64,
    dt: f64,
    out: *mut DysonMatrix2,
) -> DysonStatus {
    guard(|| {
        let cb = callback.ok_or_else(null)?;
        let failed = std::cell::Cell::new(None::<f64>);
        let h = |t: f64| {
            let mut m = DysonMatrix2::default();
            let code = cb(t, user_data, &mut m);
            match (code, m.to_core()) {
                (0, Ok(c)) => c,
                _ => {
                    if failed.get().is_none() {
                        failed.set(Some(t));
                    }
                    Complex2x2::identity() * f64::NAN
                }
            }
        };
        let span = (t_to - t_from).abs();
        let steps = if span == 0.0 { 1.0 } else { (span / dt).ceil().max(1.0) };
        let result = time_ordered_u(&h, t_from, t_to, span / steps);
        if let Some(t) = failed.get() {
            return Err(Failure::Status(
                DysonStatus::CallbackFailed,
                format!("Hamiltonian callback failed at t = {t}"),
            ));
        }
        write(out, result?.into())
    })
}

// Scenarios

/// Runs a TOML scenario in verify mode and reports whether every check passed.
#[no_mangle]
pub unsafe extern "C" fn dyson_verify_config(path: *const c_char, passed: *mut bool) -> DysonStatus {
    guard(|| {
        if path.is_null() {
            return Err(null());
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| {
            Failure::Status(DysonStatus::InvalidParameter, "path is not UTF-8".into())
        })?;
        let cfg = ScenarioConfig::load(Path::new(path))?.resolve()?;
        let run = evaluate(&cfg)?;
        write(passed, run.report.passed())
    })
}
