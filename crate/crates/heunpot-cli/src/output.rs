//! CSV and JSON rendering. Reals are written with 17 significant digits.

use crate::Failure;
use heunpot::triad::Triad;
use serde::Serialize;

/// 17 significant digits, round-trippable; −0 prints as 0.
pub fn num(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// Triad as doubled exponents, e.g. `2 1 -1`.
pub fn triad(t: Triad) -> String {
    t.doubled().map(|d| d.to_string()).join(" ")
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// A CSV table with a fixed header.
pub struct Table {
    out: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(header).expect("writing to memory");
        Table { out }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.out.write_record(fields).expect("writing to memory");
    }

    pub fn finish(self) -> String {
        let bytes = self.out.into_inner().expect("writing to memory");
        String::from_utf8(bytes).expect("fields are UTF-8")
    }
}
