//! Text output: `%.17g` floats and CSV rendering of result rows.

use num_complex::Complex64;

use crate::charfn::{MtildeEval, PhiEval};
use crate::density::DistributionTable;
use crate::lfunc::EmpiricalSample;

/// C's `%.17g`: 17 significant digits, trailing zeros trimmed, `-0` as `0`.
/// Parses back to the identical `f64`.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-4..17).contains(&exp) {
        trim(format!("{:.*}", (16 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant.to_string()), exp.abs())
    }
}

fn trim(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn phi_csv(rows: &[PhiEval]) -> Csv {
    let mut csv = Csv::new(&["y", "re_phi", "im_phi", "tail_bound"]);
    for r in rows {
        csv.push(vec![
            g17(r.y),
            g17(r.value.re),
            g17(r.value.im),
            g17(r.tail_bound),
        ]);
    }
    csv
}

pub fn mtilde_csv(rows: &[MtildeEval]) -> Csv {
    let mut csv = Csv::new(&["y", "re_mtilde", "im_mtilde", "tail_bound", "terms"]);
    for r in rows {
        csv.push(vec![
            g17(r.y),
            g17(r.value.re),
            g17(r.value.im),
            g17(r.tail_bound),
            r.terms.to_string(),
        ]);
    }
    csv
}

pub fn table_csv(t: &DistributionTable) -> Csv {
    let mut csv = Csv::new(&["t", "density", "cdf"]);
    for k in 0..t.t.len() {
        csv.push(vec![g17(t.t[k]), g17(t.density[k]), g17(t.cdf[k])]);
    }
    csv
}

/// One row per family member; `script_l` is empty for excluded members.
pub fn samples_csv(samples: &[EmpiricalSample]) -> Csv {
    let mut csv = Csv::new(&["c", "norm", "re_l", "im_l", "script_l", "excluded"]);
    for s in samples {
        csv.push(vec![
            s.c.c.to_string(),
            s.c.norm.to_string(),
            g17(s.l_value.re),
            g17(s.l_value.im),
            s.script_l.map(g17).unwrap_or_default(),
            (s.excluded as u8).to_string(),
        ]);
    }
    csv
}

/// `(y, value)` rows, e.g. an empirical characteristic function.
pub fn complex_series_csv(names: [&str; 3], rows: &[(f64, Complex64)]) -> Csv {
    let mut csv = Csv::new(&names);
    for (y, z) in rows {
        csv.push(vec![g17(*y), g17(z.re), g17(z.im)]);
    }
    csv
}
