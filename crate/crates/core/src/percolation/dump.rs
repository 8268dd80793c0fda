use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::GraphPatch;
use crate::percolation::labels::EdgeLabels;

/// A replayable record of one configuration: where its labels came from and
/// which edges were open.
///
/// ```text
/// perclab-config 1
/// seed 42
/// replica 0
/// p 0.5
/// patch hypercubic(2) 3
/// open 3 0 4 9
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDump {
    pub seed: u64,
    pub replica: u64,
    pub p: f64,
    pub patch_id: String,
    pub open: Vec<usize>,
}

fn patch_id(patch: &GraphPatch) -> String {
    format!("{} {}", patch.family(), patch.radius())
}

impl ConfigDump {
    pub fn capture(patch: &GraphPatch, labels: &EdgeLabels, p: f64) -> ConfigDump {
        ConfigDump {
            seed: labels.seed(),
            replica: labels.replica(),
            p,
            patch_id: patch_id(patch),
            open: labels.open_edges(p),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "perclab-config 1");
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "replica {}", self.replica);
        // {:?} prints the shortest string that parses back to the same double.
        let _ = writeln!(s, "p {:?}", self.p);
        let _ = writeln!(s, "patch {}", self.patch_id);
        let _ = write!(s, "open {}", self.open.len());
        for e in &self.open {
            let _ = write!(s, " {e}");
        }
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<ConfigDump> {
        let mut lines = text.lines();
        if lines.next() != Some("perclab-config 1") {
            return Err(Error::Parse("not a perclab configuration dump".into()));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing '{name}' line")))?;
            line.strip_prefix(name)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("expected '{name}', got '{line}'")))
        };
        let bad = |what: &str, s: &str| Error::Parse(format!("bad {what} '{s}'"));
        let seed_s = field("seed")?;
        let seed = seed_s.parse().map_err(|_| bad("seed", &seed_s))?;
        let rep_s = field("replica")?;
        let replica = rep_s.parse().map_err(|_| bad("replica", &rep_s))?;
        let p_s = field("p")?;
        let p = p_s.parse().map_err(|_| bad("p", &p_s))?;
        let patch_id = field("patch")?;
        let open_s = field("open")?;
        let mut it = open_s.split(' ');
        let count: usize = it.next().unwrap_or("").parse().map_err(|_| bad("open count", &open_s))?;
        let open = it.map(|t| t.parse().map_err(|_| bad("edge index", t))).collect::<Result<Vec<usize>>>()?;
        if open.len() != count {
            return Err(Error::Parse(format!("open list has {} entries, header says {count}", open.len())));
        }
        Ok(ConfigDump { seed, replica, p, patch_id, open })
    }

    /// Regenerates the labels from the recorded seed and checks that the
    /// configuration comes out identical.
    pub fn replay(&self, patch: &GraphPatch) -> Result<EdgeLabels> {
        if patch_id(patch) != self.patch_id {
            return Err(Error::Argument(format!(
                "dump was taken on '{}', not '{}'",
                self.patch_id,
                patch_id(patch)
            )));
        }
        let labels = EdgeLabels::sample(patch.graph(), self.seed, self.replica);
        if labels.open_edges(self.p) != self.open {
            return Err(Error::Invariant("replayed configuration differs from the dump".into()));
        }
        Ok(labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn dump_roundtrip_and_replay() {
        let patch = GraphPatch::build(GraphFamily::Hexagonal, 3).unwrap();
        let labels = EdgeLabels::sample(patch.graph(), 99, 4);
        let dump = ConfigDump::capture(&patch, &labels, 0.6527);
        let parsed = ConfigDump::parse(&dump.to_text()).unwrap();
        assert_eq!(parsed, dump);
        assert_eq!(parsed.replay(&patch).unwrap(), labels);
    }
}
