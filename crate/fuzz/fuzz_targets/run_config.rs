#![no_main]

use ginlab::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::from_json(text) {
        let _ = cfg.ensemble();
        let _ = cfg.samples();
        let _ = cfg.hash();
        let _ = cfg.clone().with_env_seed(Some(text));
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&json).unwrap().hash(), cfg.hash());
    }
});
