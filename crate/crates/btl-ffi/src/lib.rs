//! C ABI for the workbench: opaque handles, integer status codes, and
//! JSON/text exchange for structured data. See `include/btl.h` (regenerated
//! by the build script via cbindgen).

// Exported functions take raw pointers from C and null-check them before any
// dereference; the usual lint about unmarked unsafe does not buy anything here.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use btl::checker::{self, Assignment, Mode};
use btl::formula::{Formula, StateFormula};
use btl::models::Tree;
use btl::parser::{self, json};
use libc::{c_char, c_int};
use std::ffi::{CStr, CString};

/// Status codes returned by fallible calls.
#[repr(C)]
pub enum BtlStatus {
    Ok = 0,
    /// Syntax or validation error in an input.
    ParseError = -1,
    /// A handle or argument was null or out of range.
    BadArgument = -2,
    /// The operation itself reported an error (see the message).
    OperationError = -3,
}

pub struct BtlFormula(StateFormula);
pub struct BtlTree(Tree);

fn opt_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().ok()
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(std::ptr::null_mut())
}

/// Parse a formula; returns null on error (fetch the message with
/// `btl_formula_parse_err`).
#[no_mangle]
pub extern "C" fn btl_formula_parse(text: *const c_char) -> *mut BtlFormula {
    match opt_str(text).and_then(|t| parser::parse_formula(t).ok()) {
        Some(f) => Box::into_raw(Box::new(BtlFormula(f))),
        None => std::ptr::null_mut(),
    }
}

/// Error message for the most recent parse failure of `text`, as a fresh
/// string (free with `btl_string_free`); null when the text parses.
#[no_mangle]
pub extern "C" fn btl_formula_parse_err(text: *const c_char) -> *mut c_char {
    match opt_str(text) {
        None => string_out("input is not valid UTF-8".into()),
        Some(t) => match parser::parse_formula(t) {
            Ok(_) => std::ptr::null_mut(),
            Err(e) => string_out(e.to_string()),
        },
    }
}

#[no_mangle]
pub extern "C" fn btl_formula_free(f: *mut BtlFormula) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Render the formula; free the result with `btl_string_free`.
#[no_mangle]
pub extern "C" fn btl_formula_print(f: *const BtlFormula) -> *mut c_char {
    if f.is_null() {
        return std::ptr::null_mut();
    }
    string_out(parser::print_formula(&unsafe { &*f }.0))
}

#[no_mangle]
pub extern "C" fn btl_formula_size(f: *const BtlFormula) -> c_int {
    if f.is_null() {
        return BtlStatus::BadArgument as c_int;
    }
    unsafe { &*f }.0.size() as c_int
}

#[no_mangle]
pub extern "C" fn btl_formula_depth(f: *const BtlFormula) -> c_int {
    if f.is_null() {
        return BtlStatus::BadArgument as c_int;
    }
    unsafe { &*f }.0.depth() as c_int
}

/// Syntactic class: 0 CTL, 1 CTL+, 2 CTL*.
#[no_mangle]
pub extern "C" fn btl_formula_class(f: *const BtlFormula) -> c_int {
    if f.is_null() {
        return BtlStatus::BadArgument as c_int;
    }
    match unsafe { &*f }.0.classify().level {
        btl::formula::Level::Ctl => 0,
        btl::formula::Level::CtlPlus => 1,
        btl::formula::Level::CtlStar => 2,
    }
}

/// Load a tree from its JSON form; null on error.
#[no_mangle]
pub extern "C" fn btl_tree_load_json(text: *const c_char) -> *mut BtlTree {
    match opt_str(text).and_then(|t| json::load_tree(t.as_bytes()).ok()) {
        Some(t) => Box::into_raw(Box::new(BtlTree(t))),
        None => std::ptr::null_mut(),
    }
}

#[no_mangle]
pub extern "C" fn btl_tree_free(t: *mut BtlTree) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}

#[no_mangle]
pub extern "C" fn btl_tree_save_json(t: *const BtlTree) -> *mut c_char {
    if t.is_null() {
        return std::ptr::null_mut();
    }
    string_out(json::save_tree(&unsafe { &*t }.0))
}

/// Model-check at the root under the all-root assignment. `strict_mode` 0
/// selects leaf-loop semantics. Returns 1, 0, or a negative status.
#[no_mangle]
pub extern "C" fn btl_models(
    t: *const BtlTree,
    f: *const BtlFormula,
    strict_mode: c_int,
) -> c_int {
    if t.is_null() || f.is_null() {
        return BtlStatus::BadArgument as c_int;
    }
    let mode = if strict_mode == 0 { Mode::LeafLoop } else { Mode::Strict };
    checker::models(&unsafe { &*t }.0, &unsafe { &*f }.0, mode) as c_int
}

/// Model-check at a node (external id) under an explicit assignment of
/// external ids (`assign`/`assign_len` may be null/0).
#[no_mangle]
pub extern "C" fn btl_check(
    t: *const BtlTree,
    f: *const BtlFormula,
    node: u64,
    assign: *const u64,
    assign_len: usize,
    strict_mode: c_int,
) -> c_int {
    if t.is_null() || f.is_null() || (assign.is_null() && assign_len > 0) {
        return BtlStatus::BadArgument as c_int;
    }
    let tree = &unsafe { &*t }.0;
    let formula = &unsafe { &*f }.0;
    let mode = if strict_mode == 0 { Mode::LeafLoop } else { Mode::Strict };
    let Ok(v) = tree.node_by_ext_id(node) else {
        return BtlStatus::BadArgument as c_int;
    };
    let mut nodes = Vec::with_capacity(assign_len);
    for i in 0..assign_len {
        let id = unsafe { *assign.add(i) };
        match tree.node_by_ext_id(id) {
            Ok(n) => nodes.push(n),
            Err(_) => return BtlStatus::BadArgument as c_int,
        }
    }
    match checker::check_state(tree, v, &Assignment(nodes), formula, mode) {
        Ok(b) => b as c_int,
        Err(_) => BtlStatus::OperationError as c_int,
    }
}

/// Rewrite pipelines: 0 u-normal, 1 e-normal, 2 to-ctl, 3
/// eliminate-past-fairness. Returns a new handle or null on error. The
/// past/fairness pipeline may produce a top-level path formula; in that case
/// this entry point reports an error (use the CLI for those outputs).
#[no_mangle]
pub extern "C" fn btl_rewrite(f: *const BtlFormula, pipeline: c_int) -> *mut BtlFormula {
    if f.is_null() {
        return std::ptr::null_mut();
    }
    let input = &unsafe { &*f }.0;
    let out = match pipeline {
        0 => btl::rewriter::to_u_normal(input).ok(),
        1 => btl::rewriter::to_e_normal(input).ok(),
        2 => btl::rewriter::ctlplus_to_ctl(input).ok(),
        3 => btl::rewriter::eliminate_past_fairness(&Formula::State(input.clone()))
            .ok()
            .and_then(|r| match r.output {
                Formula::State(s) => Some(s),
                Formula::Path(_) => None,
            }),
        _ => None,
    };
    match out {
        Some(s) => Box::into_raw(Box::new(BtlFormula(s))),
        None => std::ptr::null_mut(),
    }
}

/// Solve the comparison game: 1 spoiler wins, 0 duplicator, negative status
/// on error.
#[no_mangle]
pub extern "C" fn btl_game_solve(
    left: *const BtlTree,
    right: *const BtlTree,
    rounds: c_int,
) -> c_int {
    if left.is_null() || right.is_null() || rounds < 0 {
        return BtlStatus::BadArgument as c_int;
    }
    match btl::game::solve_game(&unsafe { &*left }.0, &unsafe { &*right }.0, rounds as usize) {
        btl::game::Player::Spoiler => 1,
        btl::game::Player::Duplicator => 0,
    }
}

/// Solve a tiling game from an instance in JSON form: 1 E wins, 0 A wins,
/// 2 inconclusive, negative status on error.
#[no_mangle]
pub extern "C" fn btl_solve_tiling(
    instance_json: *const c_char,
    width: c_int,
    max_rows: c_int,
) -> c_int {
    let Some(text) = opt_str(instance_json) else {
        return BtlStatus::BadArgument as c_int;
    };
    let Ok(inst) = json::load_tiling_instance(text.as_bytes()) else {
        return BtlStatus::ParseError as c_int;
    };
    if width <= 0 || max_rows < 0 {
        return BtlStatus::BadArgument as c_int;
    }
    match btl::tiling::solve_tiling(&inst, width as usize, max_rows as usize) {
        Ok(btl::tiling::TilingVerdict::EWins) => 1,
        Ok(btl::tiling::TilingVerdict::AWins) => 0,
        Ok(btl::tiling::TilingVerdict::Inconclusive) => 2,
        Err(_) => BtlStatus::OperationError as c_int,
    }
}

/// Free a string returned by this library.
#[no_mangle]
pub extern "C" fn btl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn parse_print_roundtrip_through_handles() {
        let text = c("down x1 . @root E F (p & E F x1)");
        let f = btl_formula_parse(text.as_ptr());
        assert!(!f.is_null());
        let printed = btl_formula_print(f);
        let back = unsafe { CStr::from_ptr(printed) }.to_str().unwrap().to_string();
        btl_string_free(printed);
        let f2 = btl_formula_parse(c(&back).as_ptr());
        assert!(!f2.is_null());
        assert_eq!(btl_formula_size(f), btl_formula_size(f2));
        btl_formula_free(f);
        btl_formula_free(f2);
    }

    #[test]
    fn check_through_handles() {
        let tree = btl_tree_load_json(
            c(r#"{"root":0,"nodes":[{"id":0,"props":["p"],"children":[]}]}"#).as_ptr(),
        );
        let f = btl_formula_parse(c("p").as_ptr());
        assert_eq!(btl_models(tree, f, 0), 1);
        let g = btl_formula_parse(c("q").as_ptr());
        assert_eq!(btl_models(tree, g, 0), 0);
        btl_formula_free(f);
        btl_formula_free(g);
        btl_tree_free(tree);
    }

    #[test]
    fn null_arguments_are_status_codes() {
        assert_eq!(btl_formula_size(std::ptr::null()), BtlStatus::BadArgument as c_int);
        assert!(btl_formula_parse(std::ptr::null()).is_null());
        let msg = btl_formula_parse_err(c("E (p U ").as_ptr());
        assert!(!msg.is_null());
        btl_string_free(msg);
    }
}
