#![no_main]

use ginlab::ensembles::{group_rows, read_spectra_csv, write_spectra_csv, SymmetryClass};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(rows) = read_spectra_csv(data) else { return };
    for class in [SymmetryClass::Complex, SymmetryClass::Real, SymmetryClass::Quaternion] {
        let Ok(spectra) = group_rows(&rows, class) else { continue };
        // whatever parses must survive a write/read round trip
        let mut buf = Vec::new();
        write_spectra_csv(&mut buf, spectra.iter().map(|(i, s)| (*i, s))).unwrap();
        let again = read_spectra_csv(buf.as_slice()).unwrap();
        assert_eq!(group_rows(&again, class).unwrap(), spectra);
    }
});
