#![no_main]

use ginlab::mc_verify::VerificationReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = serde_json::from_slice::<VerificationReport>(data) {
        let _ = report.max_abs_z();
        if let Ok(json) = report.to_json() {
            let back: VerificationReport = serde_json::from_str(&json).unwrap();
            assert_eq!(back.statistic, report.statistic);
        }
    }
});
