//! Genome strings come straight from the command line; parsing must never
//! panic, and accepted genomes must round-trip through Display.

#![no_main]

use libfuzzer_sys::fuzz_target;
use rocket_qd::genome::parse_genome;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(genome) = parse_genome(text) {
        assert!(genome.as_slice().iter().all(|v| v.is_finite()));
        let line: Vec<String> = genome.as_slice().iter().map(|v| v.to_string()).collect();
        let again = parse_genome(&line.join(",")).expect("formatted genome must re-parse");
        assert_eq!(genome, again);
    }
});
