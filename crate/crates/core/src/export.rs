//! Shared formatting for the delimited-text outputs.
//!
//! Every floating value is written with 17 significant digits in scientific
//! notation so that outputs round-trip exactly and are byte-stable.

use std::io::{self, Write};

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one comma-separated record terminated by `\n`.
pub fn record<W: Write, S: AsRef<str>>(out: &mut W, fields: &[S]) -> io::Result<()> {
    let mut first = true;
    for f in fields {
        if !first {
            out.write_all(b",")?;
        }
        out.write_all(f.as_ref().as_bytes())?;
        first = false;
    }
    out.write_all(b"\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 5f64.sqrt(), 1e-300, 6.02e23] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn record_layout() {
        let mut buf = Vec::new();
        record(&mut buf, &["a", "b", "c"]).unwrap();
        record::<_, &str>(&mut buf, &[]).unwrap();
        assert_eq!(buf, b"a,b,c\n\n");
    }
}
