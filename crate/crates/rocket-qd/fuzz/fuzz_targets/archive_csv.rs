//! Archive CSV import must reject malformed input with an error, never a
//! panic, and any accepted archive must round-trip through the writer.

#![no_main]

use libfuzzer_sys::fuzz_target;
use rocket_qd::archive_csv::{read_archive, write_archive};
use rocket_qd::ArchiveConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(archive) = read_archive(data, ArchiveConfig::default()) {
        let mut out = Vec::new();
        write_archive(&archive, &mut out).expect("accepted archive must serialize");
        let again = read_archive(out.as_slice(), ArchiveConfig::default())
            .expect("writer output must parse");
        assert_eq!(archive.occupied_count(), again.occupied_count());
    }
});
