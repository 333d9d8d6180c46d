#![no_main]

use cycleforge::graph::io::{parse_edge_list, write_edge_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_edge_list(text) else { return };
    // anything accepted must survive a round trip
    let again = parse_edge_list(&write_edge_list(&g, true)).expect("written edge list parses");
    assert_eq!(again.vertex_count(), g.vertex_count());
    assert_eq!(again.edge_count(), g.edge_count());
    let _ = g.is_balanced();
});
