#![no_main]

use ginlab::config::{Dim, OutputFormat, VariantName};
use ginlab::ensembles::SymmetryClass;
use ginlab::mc_verify::Suite;
use libfuzzer_sys::fuzz_target;

// Flag values the command line hands to the library as text.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = s.parse::<Dim>() {
        assert_eq!(d.to_string().parse::<Dim>().unwrap(), d);
    }
    let _ = s.parse::<SymmetryClass>();
    let _ = s.parse::<VariantName>();
    let _ = s.parse::<OutputFormat>();
    let _ = s.parse::<Suite>();
});
