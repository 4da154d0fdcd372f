//! C ABI over the `matula` crate.
//!
//! Every function returns a [`MatulaStatus`]; results come back through out
//! pointers. Strings returned to the caller are owned by the caller and must
//! be released with [`matula_string_free`]. After a non-OK status,
//! [`matula_last_error`] describes the failure on the calling thread.
//!
//! Integers cross the boundary as NUL-terminated decimal strings so that
//! values beyond 64 bits are not truncated.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use matula::cli::parse_natural;
use matula::primes::BackendConfig;
use matula::{codec, gim, tree, Error, PrimeBackend, RootedTree};
use num_bigint::BigUint;

/// Result codes. `MATULA_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatulaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseInt = 3,
    Unbalanced = 4,
    NonCanonical = 5,
    NotPrime = 6,
    Domain = 7,
    IndexOverflow = 8,
    FactorizationFailure = 9,
    Capacity = 10,
    Config = 11,
    Panic = 12,
}

/// Prime tables shared by the conversion functions. Safe to use from
/// several threads at once.
pub struct MatulaBackend(PrimeBackend);

/// A rooted tree.
pub struct MatulaTree(RootedTree);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> MatulaStatus {
    match err {
        Error::IndexOverflow { .. } => MatulaStatus::IndexOverflow,
        Error::NotPrime { .. } => MatulaStatus::NotPrime,
        Error::FactorizationFailure { .. } => MatulaStatus::FactorizationFailure,
        Error::Unbalanced { .. } => MatulaStatus::Unbalanced,
        Error::NonCanonical { .. } => MatulaStatus::NonCanonical,
        Error::Domain(_) | Error::InvalidDistribution(_) => MatulaStatus::Domain,
        Error::Capacity(_) => MatulaStatus::Capacity,
        Error::ParseInt { .. } => MatulaStatus::ParseInt,
        Error::Config(_) => MatulaStatus::Config,
    }
}

struct Failure(MatulaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MatulaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MatulaStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MatulaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            MatulaStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(MatulaStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(MatulaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            MatulaStatus::NullPointer,
            "out pointer is null".into(),
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    // Dyck words and decimals never contain NUL.
    write_out(out, CString::new(s).expect("no NUL").into_raw())
}

fn positive(text: &str) -> Result<BigUint, Failure> {
    let n = parse_natural(text)?;
    if n == BigUint::ZERO {
        return Err(Error::Domain("expected a positive integer, got 0".into()).into());
    }
    Ok(n)
}

/// Creates a backend. Zero for either limit selects the default.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn matula_backend_new(
    sieve_limit: u64,
    hard_ceiling: u64,
    out: *mut *mut MatulaBackend,
) -> MatulaStatus {
    guard(|| {
        let defaults = BackendConfig::default();
        let config = BackendConfig {
            sieve_limit: if sieve_limit == 0 {
                defaults.sieve_limit
            } else {
                sieve_limit
            },
            hard_ceiling: if hard_ceiling == 0 {
                defaults.hard_ceiling
            } else {
                hard_ceiling
            },
        };
        let backend = PrimeBackend::new(config)?;
        write_out(out, Box::into_raw(Box::new(MatulaBackend(backend))))
    })
}

/// # Safety
/// `backend` must come from [`matula_backend_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn matula_backend_free(backend: *mut MatulaBackend) {
    if !backend.is_null() {
        drop(Box::from_raw(backend));
    }
}

/// Codeword of the decimal `n`.
///
/// # Safety
/// Pointers must be valid; `n` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn matula_encode(
    backend: *const MatulaBackend,
    n: *const c_char,
    out_word: *mut *mut c_char,
) -> MatulaStatus {
    guard(|| {
        let b = &ref_arg(backend, "backend")?.0;
        let n = positive(str_arg(n, "n")?)?;
        write_string(out_word, codec::encode(&n, b)?.into_string())
    })
}

/// Decimal number spelled by `word`. With `strict`, sibling blocks must
/// appear in canonical order.
///
/// # Safety
/// Pointers must be valid; `word` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn matula_decode(
    backend: *const MatulaBackend,
    word: *const c_char,
    strict: bool,
    out_n: *mut *mut c_char,
) -> MatulaStatus {
    guard(|| {
        let b = &ref_arg(backend, "backend")?.0;
        let word = str_arg(word, "word")?;
        write_string(out_n, codec::decode_str(word, strict, b)?.to_string())
    })
}

/// g of the decimal `n`.
///
/// # Safety
/// Pointers must be valid; `n` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn matula_g(
    backend: *const MatulaBackend,
    n: *const c_char,
    out: *mut u64,
) -> MatulaStatus {
    guard(|| {
        let b = &ref_arg(backend, "backend")?.0;
        let n = positive(str_arg(n, "n")?)?;
        write_out(out, gim::g(&n, b)?)
    })
}

/// G(n) = g(1) + ... + g(n).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_big_g(n: u64, out: *mut u64) -> MatulaStatus {
    guard(|| write_out(out, gim::big_g(n)?))
}

/// Canonical tree of the decimal `n`.
///
/// # Safety
/// Pointers must be valid; `n` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_from_number(
    backend: *const MatulaBackend,
    n: *const c_char,
    out: *mut *mut MatulaTree,
) -> MatulaStatus {
    guard(|| {
        let b = &ref_arg(backend, "backend")?.0;
        let n = positive(str_arg(n, "n")?)?;
        let t = tree::tau(&n, b)?;
        write_out(out, Box::into_raw(Box::new(MatulaTree(t))))
    })
}

/// Tree spelled by `word`.
///
/// # Safety
/// Pointers must be valid; `word` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_from_word(
    backend: *const MatulaBackend,
    word: *const c_char,
    strict: bool,
    out: *mut *mut MatulaTree,
) -> MatulaStatus {
    guard(|| {
        let b = &ref_arg(backend, "backend")?.0;
        let w = codec::DyckWord::parse(str_arg(word, "word")?)?;
        let t = codec::dyck_to_tree(&w, strict, b)?;
        write_out(out, Box::into_raw(Box::new(MatulaTree(t))))
    })
}

/// Matula number of `tree` as a decimal string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_number(
    backend: *const MatulaBackend,
    tree: *const MatulaTree,
    out_n: *mut *mut c_char,
) -> MatulaStatus {
    guard(|| {
        let b = &ref_arg(backend, "backend")?.0;
        let t = &ref_arg(tree, "tree")?.0;
        write_string(out_n, t.matula_number(b)?.to_string())
    })
}

/// Serializes `tree` with its children in their stored order.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_word(
    tree: *const MatulaTree,
    out_word: *mut *mut c_char,
) -> MatulaStatus {
    guard(|| {
        let t = &ref_arg(tree, "tree")?.0;
        write_string(out_word, codec::tree_to_dyck(t).into_string())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_edge_count(
    tree: *const MatulaTree,
    out: *mut usize,
) -> MatulaStatus {
    guard(|| write_out(out, ref_arg(tree, "tree")?.0.edge_count()))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_is_planted(
    tree: *const MatulaTree,
    out: *mut bool,
) -> MatulaStatus {
    guard(|| write_out(out, ref_arg(tree, "tree")?.0.is_planted()))
}

/// Joins the roots of `a` and `b`; the Matula number of the result is the
/// product of theirs.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_merge(
    a: *const MatulaTree,
    b: *const MatulaTree,
    out: *mut *mut MatulaTree,
) -> MatulaStatus {
    guard(|| {
        let t = ref_arg(a, "a")?.0.merge(&ref_arg(b, "b")?.0);
        write_out(out, Box::into_raw(Box::new(MatulaTree(t))))
    })
}

/// Hangs `tree` below a new root.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_plant(
    tree: *const MatulaTree,
    out: *mut *mut MatulaTree,
) -> MatulaStatus {
    guard(|| {
        let t = ref_arg(tree, "tree")?.0.plant();
        write_out(out, Box::into_raw(Box::new(MatulaTree(t))))
    })
}

/// Rooted isomorphism: child order does not matter.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_equal(
    a: *const MatulaTree,
    b: *const MatulaTree,
    out: *mut bool,
) -> MatulaStatus {
    guard(|| write_out(out, ref_arg(a, "a")?.0 == ref_arg(b, "b")?.0))
}

/// # Safety
/// `tree` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn matula_tree_free(tree: *mut MatulaTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// # Safety
/// `s` must be a string returned by this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn matula_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread. Valid until the next call
/// into the library from the same thread. Empty if nothing failed yet.
#[no_mangle]
pub extern "C" fn matula_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn matula_status_name(status: MatulaStatus) -> *const c_char {
    let name: &'static CStr = match status {
        MatulaStatus::Ok => c"ok",
        MatulaStatus::NullPointer => c"null pointer",
        MatulaStatus::InvalidUtf8 => c"invalid utf-8",
        MatulaStatus::ParseInt => c"invalid integer",
        MatulaStatus::Unbalanced => c"unbalanced word",
        MatulaStatus::NonCanonical => c"non-canonical word",
        MatulaStatus::NotPrime => c"not prime",
        MatulaStatus::Domain => c"domain error",
        MatulaStatus::IndexOverflow => c"index overflow",
        MatulaStatus::FactorizationFailure => c"factorization failure",
        MatulaStatus::Capacity => c"capacity exceeded",
        MatulaStatus::Config => c"configuration error",
        MatulaStatus::Panic => c"internal panic",
    };
    name.as_ptr()
}
