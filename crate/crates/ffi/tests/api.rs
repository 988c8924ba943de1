use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use nchull_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    nchull_string_free(s);
    out
}

#[test]
fn lattice_round_trip() {
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(
            nchull_lattice_new(cstr("[1;1;1]").as_ptr(), &mut l),
            NchullStatus::Ok
        );
        let mut len = 0;
        assert_eq!(nchull_lattice_len(l, &mut len), NchullStatus::Ok);
        assert_eq!(len, 95);

        let mut ranks = [0usize; 8];
        let mut n = 0;
        assert_eq!(
            nchull_lattice_rank_vector(l, ranks.as_mut_ptr(), ranks.len(), &mut n),
            NchullStatus::Ok
        );
        assert_eq!(&ranks[..n], &[1, 12, 34, 35, 12, 1]);
        assert_eq!(
            nchull_lattice_rank_vector(l, ranks.as_mut_ptr(), 3, &mut n),
            NchullStatus::BufferTooSmall
        );
        assert_eq!(n, 6);

        let (mut graded, mut sym) = (false, true);
        assert_eq!(nchull_lattice_is_graded(l, &mut graded), NchullStatus::Ok);
        assert_eq!(
            nchull_lattice_is_rank_symmetric(l, &mut sym),
            NchullStatus::Ok
        );
        assert!(graded && !sym);

        let mut s = ptr::null_mut();
        assert_eq!(nchull_lattice_element(l, 0, &mut s), NchullStatus::Ok);
        assert_eq!(take(s), "0|1|2|3|4|5");
        assert_eq!(
            nchull_lattice_element(l, 95, &mut s),
            NchullStatus::OutOfRange
        );

        let mut le = false;
        assert_eq!(nchull_lattice_leq(l, 0, 94, &mut le), NchullStatus::Ok);
        assert!(le);

        assert_eq!(nchull_lattice_to_json(l, &mut s), NchullStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["elements"].as_array().unwrap().len(), 95);

        let mut d = ptr::null_mut();
        assert_eq!(nchull_scd_new(l, 0, &mut d), NchullStatus::NoBlankSide);
        assert!(CStr::from_ptr(nchull_last_error())
            .to_str()
            .unwrap()
            .contains("blank side"));
        nchull_lattice_free(l);
    }
}

#[test]
fn decomposition() {
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(
            nchull_lattice_new(cstr("[0;1;1]").as_ptr(), &mut l),
            NchullStatus::Ok
        );
        let mut d = ptr::null_mut();
        assert_eq!(nchull_scd_new(l, 0, &mut d), NchullStatus::Ok);
        let mut chains = 0;
        assert_eq!(nchull_scd_num_chains(d, &mut chains), NchullStatus::Ok);
        let mut total = 0;
        for i in 0..chains {
            let mut buf = [0usize; 16];
            let mut n = 0;
            assert_eq!(
                nchull_scd_chain(d, i, buf.as_mut_ptr(), buf.len(), &mut n),
                NchullStatus::Ok
            );
            total += n;
        }
        let mut len = 0;
        nchull_lattice_len(l, &mut len);
        assert_eq!(total, len);
        let mut ok = false;
        assert_eq!(nchull_scd_verify(l, d, &mut ok), NchullStatus::Ok);
        assert!(ok);
        nchull_scd_free(d);
        nchull_lattice_free(l);
    }
}

#[test]
fn trees() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            nchull_trees_new(cstr("[0;0;0;0]").as_ptr(), &mut t),
            NchullStatus::Ok
        );
        let mut n = 0;
        assert_eq!(nchull_trees_len(t, &mut n), NchullStatus::Ok);
        assert_eq!(n, 12);
        let mut s = ptr::null_mut();
        assert_eq!(nchull_trees_get(t, 0, &mut s), NchullStatus::Ok);
        assert_eq!(take(s).matches('-').count(), 3);
        nchull_trees_free(t);
    }
}

#[test]
fn errors() {
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(
            nchull_lattice_new(ptr::null(), &mut l),
            NchullStatus::NullPointer
        );
        assert_eq!(
            nchull_lattice_new(cstr("[1;1").as_ptr(), &mut l),
            NchullStatus::ParseError
        );
        assert!(!nchull_last_error().is_null());
        assert_eq!(
            nchull_lattice_new(cstr("segment:20").as_ptr(), &mut l),
            NchullStatus::BudgetExceeded
        );
        assert_eq!(
            nchull_lattice_new(cstr("segment:3").as_ptr(), ptr::null_mut()),
            NchullStatus::NullPointer
        );
        let mut len = 0;
        assert_eq!(
            nchull_lattice_len(ptr::null(), &mut len),
            NchullStatus::NullPointer
        );
        nchull_lattice_free(ptr::null_mut());
        nchull_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/nchull.h");
    let text = std::fs::read_to_string(header).unwrap();
    assert!(
        text.contains("NchullStatus nchull_lattice_new(const char *shape, NchullLattice **out);")
    );
    let Ok(status) = Command::new("cc")
        .args([
            "-fsyntax-only",
            "-x",
            "c",
            "-std=c99",
            "-Wall",
            "-Werror",
            header,
        ])
        .status()
    else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
