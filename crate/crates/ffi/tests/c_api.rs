use std::ffi::{c_char, CStr, CString};
use std::ptr;

use khlab_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { khlab_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = khlab_last_error_message();
    (!p.is_null()).then(|| take_string(p))
}

fn braid(text: &str) -> *mut KhDiagram {
    let text = CString::new(text).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { khlab_diagram_from_braid(text.as_ptr(), &mut d) }, KhStatus::Ok);
    assert!(!d.is_null());
    d
}

#[test]
fn trefoil_table_through_handles() {
    let d = braid("1 1 1");
    let (mut m, mut np, mut nm, mut comp) = (0, 0, 0, 0);
    assert_eq!(unsafe { khlab_diagram_info(d, &mut m, &mut np, &mut nm, &mut comp) }, KhStatus::Ok);
    assert_eq!((m, np, nm, comp), (3, 3, 0, 1));

    let mut t = ptr::null_mut();
    assert_eq!(unsafe { khlab_homology(d, 20, &mut t) }, KhStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { khlab_table_len(t, &mut len) }, KhStatus::Ok);
    assert_eq!(len, 5);

    let mut entries = Vec::new();
    for k in 0..len {
        let mut e = KhEntry::default();
        assert_eq!(unsafe { khlab_table_entry(t, k, &mut e) }, KhStatus::Ok);
        entries.push(e);
    }
    let torsion = entries.iter().position(|e| (e.i, e.j) == (3, 7)).unwrap();
    assert_eq!(entries[torsion].rank, 0);
    assert_eq!(entries[torsion].torsion_count, 1);
    let mut order = 0;
    assert_eq!(unsafe { khlab_table_torsion(t, torsion, 0, &mut order) }, KhStatus::Ok);
    assert_eq!(order, 2);
    assert_eq!(unsafe { khlab_table_torsion(t, torsion, 1, &mut order) }, KhStatus::OutOfRange);
    assert!(last_error().is_some());
    let mut e = KhEntry::default();
    assert_eq!(unsafe { khlab_table_entry(t, 99, &mut e) }, KhStatus::OutOfRange);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { khlab_table_to_json(t, &mut json) }, KhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v[3], serde_json::json!({"i": 3, "j": 7, "rank": 0, "torsion": [2]}));
    assert!(last_error().is_none());

    unsafe {
        khlab_table_free(t);
        khlab_diagram_free(d);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let bad = CString::new("0").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { khlab_diagram_from_braid(bad.as_ptr(), &mut d) }, KhStatus::ParseError);
    assert!(d.is_null());
    assert!(last_error().unwrap().contains("parse"));

    assert_eq!(unsafe { khlab_diagram_from_braid(ptr::null(), &mut d) }, KhStatus::NullPointer);
    let ok = CString::new("1").unwrap();
    assert_eq!(unsafe { khlab_diagram_from_braid(ok.as_ptr(), ptr::null_mut()) }, KhStatus::NullPointer);

    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { khlab_diagram_from_braid(invalid.as_ptr() as *const c_char, &mut d) }, KhStatus::InvalidUtf8);

    let big = braid("1 1 1 1");
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { khlab_homology(big, 3, &mut t) }, KhStatus::ResourceLimit);
    assert!(t.is_null());
    assert!(last_error().unwrap().contains("cap of 3"));
    assert_eq!(unsafe { khlab_homology(ptr::null(), 3, &mut t) }, KhStatus::NullPointer);
    unsafe { khlab_diagram_free(big) };

    unsafe {
        khlab_diagram_free(ptr::null_mut());
        khlab_table_free(ptr::null_mut());
        khlab_string_free(ptr::null_mut());
    }
}

#[test]
fn pd_jones_and_verify() {
    let pd = CString::new("X[1,3,2,4] +\nX[3,1,4,2] +\n").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { khlab_diagram_from_pd(pd.as_ptr(), &mut d) }, KhStatus::Ok);
    let mut comp = 0;
    assert_eq!(
        unsafe { khlab_diagram_info(d, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), &mut comp) },
        KhStatus::Ok
    );
    assert_eq!(comp, 2);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { khlab_verify_json(d, 20, &mut out) }, KhStatus::InvalidInput);
    assert_eq!(unsafe { khlab_jones_json(d, 20, &mut out) }, KhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v, serde_json::json!({"0": 1, "2": 1, "4": 1, "6": 1}));
    unsafe { khlab_diagram_free(d) };

    let bad_pd = CString::new("X[1,2,3,4] +").unwrap();
    assert_eq!(unsafe { khlab_diagram_from_pd(bad_pd.as_ptr(), &mut d) }, KhStatus::InvalidInput);

    let w = braid("1 2 1 2");
    assert_eq!(unsafe { khlab_verify_json(w, 20, &mut out) }, KhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["is_knot"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    unsafe { khlab_diagram_free(w) };
}

#[test]
fn version_and_errors_are_per_thread() {
    let v = unsafe { CStr::from_ptr(khlab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let bad = CString::new("x").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { khlab_diagram_from_braid(bad.as_ptr(), &mut d) }, KhStatus::ParseError);
    let other = std::thread::spawn(|| khlab_last_error_message().is_null()).join().unwrap();
    assert!(other);
    assert!(last_error().is_some());
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/khlab.h")).unwrap();
    for name in [
        "typedef struct KhDiagram KhDiagram;",
        "typedef struct KhTable KhTable;",
        "KH_STATUS_RESOURCE_LIMIT = 5",
        "khlab_diagram_from_braid(const char *text, struct KhDiagram **out)",
        "khlab_homology(const struct KhDiagram *d, size_t cap, struct KhTable **out)",
        "void khlab_string_free(char *s);",
        "char *khlab_last_error_message(void);",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
