use std::fs;
use std::path::PathBuf;

use cycleforge::decompose::verify_cycles;
use cycleforge::format::{parse_decomposition, resolve};
use cycleforge::graph::io::{parse_edge_list, write_edge_list};
use cycleforge::generators::gen_k_symmetric;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn edge_list_seeds() {
    let all = seeds("parse_edge_list");
    assert!(all.len() >= 5);
    let accepted = ["triangle", "k4_header", "weighted", "loops_parallel", "empty"];
    for (name, text) in &all {
        let r = parse_edge_list(text);
        assert_eq!(r.is_ok(), accepted.contains(&name.as_str()), "{name}: {r:?}");
        if let Ok(g) = r {
            let again = parse_edge_list(&write_edge_list(&g, true)).unwrap();
            assert_eq!(again.edge_count(), g.edge_count());
        }
    }
}

#[test]
fn decomposition_seeds() {
    let g = gen_k_symmetric(3).unwrap();
    let all = seeds("parse_decomposition");
    assert!(all.len() >= 5);
    let accepted = ["triangle", "mixed", "self_loop", "repeated_vertex"];
    for (name, text) in &all {
        let r = parse_decomposition(text);
        assert_eq!(r.is_ok(), accepted.contains(&name.as_str()), "{name}: {r:?}");
        if let Ok(parsed) = r {
            if let Ok(cycles) = resolve(&parsed, &g) {
                let _ = verify_cycles(&cycles, &g);
            }
        }
    }
}
