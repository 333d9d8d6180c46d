#![no_main]

use cycleforge::decompose::verify_cycles;
use cycleforge::format::{parse_decomposition, resolve};
use cycleforge::graph::io::parse_edge_list;
use libfuzzer_sys::fuzz_target;

// A small fixed graph to resolve parsed cycles against.
const GRAPH: &str = "H 4 12 0\n0 1\n0 2\n0 3\n1 0\n1 2\n1 3\n2 0\n2 1\n2 3\n3 0\n3 1\n3 2\n";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_decomposition(text) else { return };
    let g = parse_edge_list(GRAPH).unwrap();
    if let Ok(cycles) = resolve(&parsed, &g) {
        let _ = verify_cycles(&cycles, &g);
    }
});
