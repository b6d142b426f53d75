//! Spectra as CSV rows `sample_index,kind,re,im`.
//!
//! `kind` is `real` or `pair` for the real and quaternion classes (a pair row
//! holds the upper-half-plane representative) and `complex` for
//! complex-class eigenvalues. Numbers use the shortest representation that
//! parses back to the identical `f64`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Spectrum, SymmetryClass};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenKind {
    Real,
    Pair,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub sample_index: u64,
    pub kind: EigenKind,
    pub re: f64,
    pub im: f64,
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

/// Write the header and one row per stored eigenvalue.
pub fn write_spectra_csv<'a, W, I>(out: W, spectra: I) -> Result<u64>
where
    W: Write,
    I: IntoIterator<Item = (u64, &'a Spectrum)>,
{
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["sample_index", "kind", "re", "im"]).map_err(csv_err)?;
    let mut rows = 0u64;
    for (index, s) in spectra {
        let idx = index.to_string();
        for x in &s.real_eigs {
            w.write_record([idx.as_str(), "real", &format!("{x:?}"), "0.0"]).map_err(csv_err)?;
            rows += 1;
        }
        for z in &s.pair_reps {
            w.write_record([idx.as_str(), "pair", &format!("{:?}", z.re), &format!("{:?}", z.im)]).map_err(csv_err)?;
            rows += 1;
        }
        for z in &s.complex_eigs {
            w.write_record([idx.as_str(), "complex", &format!("{:?}", z.re), &format!("{:?}", z.im)])
                .map_err(csv_err)?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(rows)
}

/// Parse spectra CSV; the header row is required.
pub fn read_spectra_csv<R: Read>(input: R) -> Result<Vec<SpectrumRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).comment(Some(b'#')).trim(csv::Trim::All).from_reader(input);
    let headers = r.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["sample_index", "kind", "re", "im"] {
        return Err(Error::Parse(format!("unexpected header {headers:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.deserialize::<SpectrumRow>() {
        let row = rec.map_err(csv_err)?;
        if !row.re.is_finite() || !row.im.is_finite() {
            return Err(Error::Parse(format!("non-finite eigenvalue in sample {}", row.sample_index)));
        }
        match row.kind {
            EigenKind::Real if row.im != 0.0 => {
                return Err(Error::Parse(format!("real row with im = {} in sample {}", row.im, row.sample_index)))
            }
            EigenKind::Pair if row.im <= 0.0 => {
                return Err(Error::Parse(format!("pair row with im <= 0 in sample {}", row.sample_index)))
            }
            _ => {}
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reassemble spectra from parsed rows; rows of a sample must be contiguous.
pub fn group_rows(rows: &[SpectrumRow], class: SymmetryClass) -> Result<Vec<(u64, Spectrum)>> {
    let mut out: Vec<(u64, Spectrum)> = Vec::new();
    for row in rows {
        let allowed = match class {
            SymmetryClass::Complex => row.kind == EigenKind::Complex,
            _ => row.kind != EigenKind::Complex,
        };
        if !allowed {
            return Err(Error::Parse(format!("{:?} row not valid for the {} class", row.kind, class.name())));
        }
        let start_new = out.last().is_none_or(|(i, _)| *i != row.sample_index);
        if start_new {
            if out.iter().any(|(i, _)| *i == row.sample_index) {
                return Err(Error::Parse(format!("sample {} is not contiguous", row.sample_index)));
            }
            out.push((
                row.sample_index,
                Spectrum { dim: 0, class, real_eigs: vec![], pair_reps: vec![], complex_eigs: vec![] },
            ));
        }
        let s = &mut out.last_mut().expect("pushed above").1;
        match row.kind {
            EigenKind::Real => {
                s.real_eigs.push(row.re);
                s.dim += 1;
            }
            EigenKind::Pair => {
                s.pair_reps.push(Complex64::new(row.re, row.im));
                s.dim += 2;
            }
            EigenKind::Complex => {
                s.complex_eigs.push(Complex64::new(row.re, row.im));
                s.dim += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Spectrum {
        Spectrum {
            dim: 4,
            class: SymmetryClass::Real,
            real_eigs: vec![-0.1, 1.0 / 3.0],
            pair_reps: vec![Complex64::new(0.7, 1e-7)],
            complex_eigs: vec![],
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s = sample();
        let mut buf = Vec::new();
        let n = write_spectra_csv(&mut buf, [(5u64, &s)]).unwrap();
        assert_eq!(n, 3);
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("sample_index,kind,re,im\n5,real,-0.1,0.0\n"));
        let rows = read_spectra_csv(&buf[..]).unwrap();
        let back = group_rows(&rows, SymmetryClass::Real).unwrap();
        assert_eq!(back, vec![(5, s)]);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(read_spectra_csv("a,b,c,d\n".as_bytes()).is_err());
        assert!(read_spectra_csv("sample_index,kind,re,im\n0,real,1.0,0.5\n".as_bytes()).is_err());
        assert!(read_spectra_csv("sample_index,kind,re,im\n0,pair,1.0,-0.5\n".as_bytes()).is_err());
        assert!(read_spectra_csv("sample_index,kind,re,im\n0,blue,1.0,0.0\n".as_bytes()).is_err());
        assert!(read_spectra_csv("sample_index,kind,re,im\n-1,real,1.0,0.0\n".as_bytes()).is_err());
        assert!(read_spectra_csv("sample_index,kind,re,im\n0,real,NaN,0.0\n".as_bytes()).is_err());
    }

    #[test]
    fn grouping_checks_class_and_contiguity() {
        let rows = read_spectra_csv("sample_index,kind,re,im\n0,complex,1.0,2.0\n".as_bytes()).unwrap();
        assert!(group_rows(&rows, SymmetryClass::Real).is_err());
        let rows =
            read_spectra_csv("sample_index,kind,re,im\n0,real,1.0,0\n1,real,2.0,0\n0,real,3.0,0\n".as_bytes()).unwrap();
        assert!(group_rows(&rows, SymmetryClass::Real).is_err());
    }
}
