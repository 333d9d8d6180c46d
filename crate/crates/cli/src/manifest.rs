use std::fmt::Write as _;
use std::time::Duration;

use cycleforge::graph::io::write_edge_list;
use cycleforge::Digraph;
use sha2::{Digest, Sha256};

/// Header block written as `#` comment lines at the top of every output.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: &'static str,
    pub flags: Vec<(&'static str, String)>,
    pub seed: Option<u64>,
    pub digest: Option<u64>,
    pub duration: Option<Duration>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        RunManifest { command, flags: Vec::new(), seed: None, digest: None, duration: None }
    }

    pub fn flag(&mut self, name: &'static str, value: impl ToString) -> &mut Self {
        self.flags.push((name, value.to_string()));
        self
    }

    /// Comment block. The duration is left out when `with_duration` is
    /// false so that file outputs stay byte-identical across runs.
    pub fn header(&self, with_duration: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# cycleforge {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# command: {}", self.command);
        out.push_str("# flags:");
        for (k, v) in &self.flags {
            let _ = write!(out, " --{k}");
            if !v.is_empty() {
                let _ = write!(out, " {v}");
            }
        }
        out.push('\n');
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed: {seed}");
        }
        if let Some(d) = self.digest {
            let _ = writeln!(out, "# input: {d:016x}");
        }
        if with_duration {
            if let Some(t) = self.duration {
                let _ = writeln!(out, "# seconds: {:.6}", t.as_secs_f64());
            }
        }
        out
    }
}

/// First 8 bytes of SHA-256 over the weighted edge list, big-endian.
pub fn graph_digest(g: &Digraph) -> u64 {
    let hash = Sha256::digest(write_edge_list(g, true).as_bytes());
    u64::from_be_bytes(hash[..8].try_into().expect("sha256 is 32 bytes"))
}
