//! C ABI for the gridpath engine.
//!
//! Maps and solved paths are opaque handles created and freed through this
//! interface; every fallible call returns a [`GpStatus`] and writes its
//! result through an out-pointer. The generated header lives in
//! `include/gridpath.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gridpath::grid::{gen_maze, gen_synthetic, load_map, Coord, GridMap};
use gridpath::search::{Algorithm, Engine, PathResult, QueryMetrics, SearchOpts};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GpStatus {
    GpOk = 0,
    /// A required pointer argument was null.
    GpNullArgument = 1,
    /// A string argument was not valid UTF-8.
    GpInvalidUtf8 = 2,
    /// A numeric argument was out of range.
    GpInvalidArgument = 3,
    /// Map or scenario text failed to parse.
    GpParseError = 4,
    /// File could not be read or written.
    GpIoError = 5,
    /// A search endpoint was not traversable.
    GpSearchError = 6,
    /// An index was out of range.
    GpOutOfRange = 7,
    /// The engine panicked; state may be inconsistent.
    GpInternalError = 8,
}

/// Search algorithm selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GpAlgorithm {
    GpAstar = 0,
    GpJps = 1,
    GpCjps = 2,
}

/// Variant flag: cache g-values on corner points met during diagonal
/// recursion.
pub const GP_FLAG_DIAGONAL_CACHING: u32 = 1;
/// Variant flag: label corner points by scanning backwards from found jump
/// points.
pub const GP_FLAG_BACKWARDS_SCANNING: u32 = 2;
/// Variant flag: expand equal-cost re-arrivals with intersected successor
/// sets.
pub const GP_FLAG_INTERSECTION_PRUNING: u32 = 4;

/// Opaque traversability map handle.
pub struct GpMap {
    map: GridMap,
}

/// Opaque handle to one solved query: the path plus its metrics.
pub struct GpPath {
    result: PathResult,
    metrics: QueryMetrics,
}

fn out_ptr<T>(out: *mut *mut T, value: T) -> GpStatus {
    if out.is_null() {
        return GpStatus::GpNullArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    GpStatus::GpOk
}

unsafe fn cstr<'a>(s: *const c_char) -> Result<&'a str, GpStatus> {
    if s.is_null() {
        return Err(GpStatus::GpNullArgument);
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| GpStatus::GpInvalidUtf8)
}

/// Parses MovingAI `.map` text into a new map handle.
///
/// # Safety
/// `text` must point to a NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns the map and must be released with
/// [`gp_map_free`].
#[no_mangle]
pub unsafe extern "C" fn gp_map_parse(text: *const c_char, out: *mut *mut GpMap) -> GpStatus {
    let text = match unsafe { cstr(text) } {
        Ok(t) => t,
        Err(e) => return e,
    };
    match load_map(text) {
        Ok(map) => out_ptr(out, GpMap { map }),
        Err(_) => GpStatus::GpParseError,
    }
}

/// Loads a MovingAI `.map` file.
///
/// # Safety
/// As [`gp_map_parse`]; `path` must be a NUL-terminated file path.
#[no_mangle]
pub unsafe extern "C" fn gp_map_load_file(path: *const c_char, out: *mut *mut GpMap) -> GpStatus {
    let path = match unsafe { cstr(path) } {
        Ok(p) => p,
        Err(e) => return e,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(_) => return GpStatus::GpIoError,
    };
    match load_map(&text) {
        Ok(map) => out_ptr(out, GpMap { map }),
        Err(_) => GpStatus::GpParseError,
    }
}

/// Generates a pathological synthetic map: an anti-diagonal wall covering
/// fraction `blockage` of the diagonal plus `density` random obstacles,
/// deterministic per seed.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_map_synthetic(
    side: i32,
    blockage: f64,
    density: f64,
    seed: u64,
    out: *mut *mut GpMap,
) -> GpStatus {
    match gen_synthetic(side, blockage, density, seed) {
        Ok(map) => out_ptr(out, GpMap { map }),
        Err(_) => GpStatus::GpInvalidArgument,
    }
}

/// Generates a perfect maze with corridors of width 1. `side` must be odd
/// and at least 5.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_map_maze(side: i32, seed: u64, out: *mut *mut GpMap) -> GpStatus {
    match gen_maze(side, seed) {
        Ok(map) => out_ptr(out, GpMap { map }),
        Err(_) => GpStatus::GpInvalidArgument,
    }
}

/// Deep copy of a map handle.
///
/// # Safety
/// `map` must be a live handle from this interface; `out` as elsewhere.
#[no_mangle]
pub unsafe extern "C" fn gp_map_clone(map: *const GpMap, out: *mut *mut GpMap) -> GpStatus {
    let Some(m) = (unsafe { map.as_ref() }) else {
        return GpStatus::GpNullArgument;
    };
    out_ptr(out, GpMap { map: m.map.clone() })
}

/// Map width in cells; 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_map_width(map: *const GpMap) -> i32 {
    unsafe { map.as_ref() }.map_or(0, |m| m.map.width())
}

/// Map height in cells; 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_map_height(map: *const GpMap) -> i32 {
    unsafe { map.as_ref() }.map_or(0, |m| m.map.height())
}

/// True iff the cell is in bounds and traversable.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_map_is_traversable(map: *const GpMap, x: i32, y: i32) -> bool {
    unsafe { map.as_ref() }.is_some_and(|m| m.map.is_traversable(Coord::new(x, y)))
}

/// Blocks a cell. Blocking an already-blocked cell is a no-op.
///
/// # Safety
/// `map` must be a live handle with no concurrent readers.
#[no_mangle]
pub unsafe extern "C" fn gp_map_set_obstacle(map: *mut GpMap, x: i32, y: i32) -> GpStatus {
    let Some(m) = (unsafe { map.as_mut() }) else {
        return GpStatus::GpNullArgument;
    };
    match m.map.set_obstacle(Coord::new(x, y)) {
        Ok(_) => GpStatus::GpOk,
        Err(_) => GpStatus::GpInvalidArgument,
    }
}

/// Reverts a cell to traversable.
///
/// # Safety
/// `map` must be a live handle with no concurrent readers.
#[no_mangle]
pub unsafe extern "C" fn gp_map_unset_obstacle(map: *mut GpMap, x: i32, y: i32) -> GpStatus {
    let Some(m) = (unsafe { map.as_mut() }) else {
        return GpStatus::GpNullArgument;
    };
    match m.map.unset_obstacle(Coord::new(x, y)) {
        Ok(()) => GpStatus::GpOk,
        Err(_) => GpStatus::GpInvalidArgument,
    }
}

/// Renders the map as MovingAI `.map` text. Free the returned string with
/// [`gp_string_free`]; returns null on a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_map_to_text(map: *const GpMap) -> *mut c_char {
    let Some(m) = (unsafe { map.as_ref() }) else {
        return ptr::null_mut();
    };
    CString::new(m.map.to_movingai()).map_or(ptr::null_mut(), CString::into_raw)
}

/// Releases a map handle. Null is ignored.
///
/// # Safety
/// `map` must be null or an unreleased handle from this interface.
#[no_mangle]
pub unsafe extern "C" fn gp_map_free(map: *mut GpMap) {
    if !map.is_null() {
        drop(unsafe { Box::from_raw(map) });
    }
}

/// Releases a string returned by this interface. Null is ignored.
///
/// # Safety
/// `s` must be null or an unreleased string from this interface.
#[no_mangle]
pub unsafe extern "C" fn gp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Solves one query on the map and returns a path handle. `flags` is a
/// bitwise OR of the `GP_FLAG_*` constants. The map is borrowed exclusively
/// for the duration of the call (constrained scans place and remove
/// temporary obstacles) and is bit-identical afterwards.
///
/// # Safety
/// `map` must be a live handle with no concurrent use; `out` must be valid.
/// On success `*out` must be released with [`gp_path_free`].
#[no_mangle]
pub unsafe extern "C" fn gp_find_path(
    map: *mut GpMap,
    algorithm: GpAlgorithm,
    flags: u32,
    start_x: i32,
    start_y: i32,
    target_x: i32,
    target_y: i32,
    out: *mut *mut GpPath,
) -> GpStatus {
    let Some(m) = (unsafe { map.as_mut() }) else {
        return GpStatus::GpNullArgument;
    };
    if flags
        & !(GP_FLAG_DIAGONAL_CACHING | GP_FLAG_BACKWARDS_SCANNING | GP_FLAG_INTERSECTION_PRUNING)
        != 0
    {
        return GpStatus::GpInvalidArgument;
    }
    let algo = match algorithm {
        GpAlgorithm::GpAstar => Algorithm::AStar,
        GpAlgorithm::GpJps => Algorithm::Jps,
        GpAlgorithm::GpCjps => Algorithm::Cjps,
    };
    let opts = SearchOpts {
        diagonal_caching: flags & GP_FLAG_DIAGONAL_CACHING != 0,
        backwards_scanning: flags & GP_FLAG_BACKWARDS_SCANNING != 0,
        intersection_pruning: flags & GP_FLAG_INTERSECTION_PRUNING != 0,
        record_log: false,
    };
    let start = Coord::new(start_x, start_y);
    let target = Coord::new(target_x, target_y);
    let solved = catch_unwind(AssertUnwindSafe(|| {
        let mut engine = Engine::new(m.map.clone());
        engine.solve(algo, &opts, start, target)
    }));
    match solved {
        Ok(Ok((result, metrics))) => out_ptr(out, GpPath { result, metrics }),
        Ok(Err(_)) => GpStatus::GpSearchError,
        Err(_) => GpStatus::GpInternalError,
    }
}

/// True iff the query was solved.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_found(path: *const GpPath) -> bool {
    unsafe { path.as_ref() }.is_some_and(|p| p.result.found)
}

/// Path length as a double (infinity when not found or on a null handle).
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_length(path: *const GpPath) -> f64 {
    unsafe { path.as_ref() }.map_or(f64::INFINITY, |p| p.result.length.to_f64())
}

/// Exact path length as step counts: `cardinals` unit moves plus
/// `diagonals` sqrt(2) moves.
///
/// # Safety
/// `path` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gp_path_cost(
    path: *const GpPath,
    cardinals: *mut u32,
    diagonals: *mut u32,
) -> GpStatus {
    let Some(p) = (unsafe { path.as_ref() }) else {
        return GpStatus::GpNullArgument;
    };
    if cardinals.is_null() || diagonals.is_null() {
        return GpStatus::GpNullArgument;
    }
    unsafe {
        *cardinals = p.result.length.cardinals();
        *diagonals = p.result.length.diagonals();
    }
    GpStatus::GpOk
}

/// Number of cells on the full interpolated path (0 when not found).
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_cell_count(path: *const GpPath) -> usize {
    unsafe { path.as_ref() }.map_or(0, |p| p.result.full_path.len())
}

/// Fetches one cell of the full path by index.
///
/// # Safety
/// `path` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gp_path_cell(
    path: *const GpPath,
    index: usize,
    x: *mut i32,
    y: *mut i32,
) -> GpStatus {
    let Some(p) = (unsafe { path.as_ref() }) else {
        return GpStatus::GpNullArgument;
    };
    if x.is_null() || y.is_null() {
        return GpStatus::GpNullArgument;
    }
    let Some(c) = p.result.full_path.get(index) else {
        return GpStatus::GpOutOfRange;
    };
    unsafe {
        *x = c.x;
        *y = c.y;
    }
    GpStatus::GpOk
}

/// Number of jump points on the path (every node the search queued).
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_jump_point_count(path: *const GpPath) -> usize {
    unsafe { path.as_ref() }.map_or(0, |p| p.result.jump_points.len())
}

/// Fetches one jump point by index.
///
/// # Safety
/// As [`gp_path_cell`].
#[no_mangle]
pub unsafe extern "C" fn gp_path_jump_point(
    path: *const GpPath,
    index: usize,
    x: *mut i32,
    y: *mut i32,
) -> GpStatus {
    let Some(p) = (unsafe { path.as_ref() }) else {
        return GpStatus::GpNullArgument;
    };
    if x.is_null() || y.is_null() {
        return GpStatus::GpNullArgument;
    }
    let Some(c) = p.result.jump_points.get(index) else {
        return GpStatus::GpOutOfRange;
    };
    unsafe {
        *x = c.x;
        *y = c.y;
    }
    GpStatus::GpOk
}

/// Node expansions performed by the query.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_expansions(path: *const GpPath) -> u64 {
    unsafe { path.as_ref() }.map_or(0, |p| p.metrics.expansions)
}

/// Open-list insertions performed by the query.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_insertions(path: *const GpPath) -> u64 {
    unsafe { path.as_ref() }.map_or(0, |p| p.metrics.insertions)
}

/// Cells traversed by scans and diagonal recursion.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_scan_steps(path: *const GpPath) -> u64 {
    unsafe { path.as_ref() }.map_or(0, |p| p.metrics.scan_steps)
}

/// Wall-clock time of the query in nanoseconds.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_path_time_ns(path: *const GpPath) -> u64 {
    unsafe { path.as_ref() }.map_or(0, |p| p.metrics.time_ns)
}

/// Releases a path handle. Null is ignored.
///
/// # Safety
/// `path` must be null or an unreleased handle from this interface.
#[no_mangle]
pub unsafe extern "C" fn gp_path_free(path: *mut GpPath) {
    if !path.is_null() {
        drop(unsafe { Box::from_raw(path) });
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn gp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
