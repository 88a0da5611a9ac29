//! JSON and CSV output.
//!
//! JSON objects keep the field order of their Rust structs and print every
//! floating-point number with 17 significant digits, which round-trips
//! exactly through `f64`. Complex numbers are `{"re": .., "im": ..}` objects.

use std::io::{self, Write};

use serde::Serialize;

use crate::verifier::{CaseResult, SweepRecord};

/// `serde(with = ...)` helpers writing `Complex64` as `{re, im}`.
pub mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let ReIm { re, im } = ReIm::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }

    pub mod vec {
        use super::ReIm;
        use num_complex::Complex64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            let items: Vec<ReIm> = v.iter().map(|z| ReIm { re: z.re, im: z.im }).collect();
            items.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            let items = Vec::<ReIm>::deserialize(d)?;
            Ok(items.into_iter().map(|ReIm { re, im }| Complex64::new(re, im)).collect())
        }
    }
}

/// 17 significant digits in scientific notation, e.g. `3.0303030303030304e-2`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        // keeps the sign of -0.0 out of reports
        return "0.0000000000000000e0".to_string();
    }
    format!("{v:.16e}")
}

/// Compact formatter that differs from serde_json's only in how `f64` is written.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as one line of JSON followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    out.write_all(b"\n")
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    write_json(value, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "p1_re", "p1_im", "p2_re", "p2_im", "p3_re", "p3_im", "h_abs"])?;
    for r in records {
        let mut row = vec![r.index.to_string()];
        for z in [r.p1, r.p2, r.p3] {
            row.push(format_f64(z.re));
            row.push(format_f64(z.im));
        }
        row.push(format_f64(r.h_abs));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cases_csv<W: Write>(cases: &[CaseResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["label", "lower", "upper", "maximum", "location", "reference", "deviation"])?;
    for c in cases {
        let mut row = vec![c.label.clone()];
        row.extend([c.lower, c.upper, c.maximum, c.location, c.reference, c.deviation].map(format_f64));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
