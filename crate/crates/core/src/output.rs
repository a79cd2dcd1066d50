//! File emission helpers shared by the command front end.

use std::fs;
use std::io;
use std::path::Path;

/// Fixed-point decimal rendering with 17 significant digits.
///
/// Non-finite values render as `inf`, `-inf` or `nan`.
pub fn decimal17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return format!("{:.16}", 0.0);
    }
    // the exponent after rounding to 17 digits, so 9.99...e2 -> 1.0e3 is handled
    let sci = format!("{v:.16e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    let decimals = (16 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Writes `contents` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(decimal17(1.0), "1.0000000000000000");
        assert_eq!(decimal17(-0.25), "-0.25000000000000000");
        assert_eq!(decimal17(1234.5), "1234.5000000000000");
        assert_eq!(decimal17(0.0), "0.0000000000000000");
        assert_eq!(decimal17(f64::INFINITY), "inf");
        assert_eq!(decimal17(1e20), "100000000000000000000");
        let small = decimal17(3.0e-7);
        assert_eq!(small, "0.00000029999999999999999");
        assert_eq!(small.parse::<f64>().unwrap(), 3.0e-7);
    }

    #[test]
    fn roundtrip_precision() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, -2.5e-5, 9.999999999999999e2, 6.02e23] {
            let s = decimal17(v);
            assert!(!s.contains('e'));
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
