use std::fmt::Write;

use super::FormatError;
use crate::atam::{Color, Configuration, Trace, Tileset};
use crate::oracle::OracleGrid;
use crate::prefix::CodingPrefix;
use crate::verifier::{grid_of, VerifyError};

pub const SNAPSHOT_VERSION: u32 = 1;

/// The stage-n square of a finished run. Cells are listed row by row from
/// y = 1, x ascending within a row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub stage: u32,
    pub decisions: CodingPrefix,
    pub seed: u64,
    pub cells: Vec<(String, Color)>,
}

impl Snapshot {
    pub fn from_config(c: &Configuration, ts: &Tileset, stage: u32, decisions: CodingPrefix, seed: u64) -> Result<Self, VerifyError> {
        grid_of(c, ts, stage)?;
        let side = 1u32 << stage;
        let mut cells = Vec::with_capacity((side * side) as usize);
        for y in 1..=side {
            for x in 1..=side {
                let t = ts.tile(c.get((x, y)).expect("square is complete"));
                cells.push((t.name.clone(), t.color));
            }
        }
        Ok(Snapshot { stage, decisions, seed, cells })
    }

    /// Snapshot of a stage-complete trace; the stage is its decision count.
    pub fn from_trace(trace: &Trace, ts: &Tileset) -> Result<Self, VerifyError> {
        let c = crate::atam::replay(trace, ts).map_err(VerifyError::Corrupt)?;
        let d = trace.realized();
        Self::from_config(&c, ts, d.len() as u32, d, trace.rng_seed)
    }

    pub fn grid(&self) -> OracleGrid {
        OracleGrid::from_cells(self.stage, self.cells.iter().map(|(_, c)| c.is_on()).collect())
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        writeln!(s, "sssst-snapshot {SNAPSHOT_VERSION}").unwrap();
        writeln!(s, "stage {}", self.stage).unwrap();
        let d = if self.decisions.is_empty() { "-".to_string() } else { self.decisions.to_string() };
        writeln!(s, "decisions {d}").unwrap();
        writeln!(s, "seed {}", self.seed).unwrap();
        for (name, color) in &self.cells {
            writeln!(s, "{name} {color}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Snapshot, FormatError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header = |key: &'static str| -> Result<(usize, String), FormatError> {
            let (n, l) = lines.next().ok_or_else(|| FormatError::parse(0, key, "missing header line"))?;
            match l.split_once(' ') {
                Some((k, v)) if k == key => Ok((n, v.trim().to_string())),
                _ => Err(FormatError::parse(n, key, format!("expected `{key} ...`, found {l:?}"))),
            }
        };
        let (n, v) = header("sssst-snapshot")?;
        if v != SNAPSHOT_VERSION.to_string() {
            return Err(FormatError::parse(n, "version", format!("unsupported version {v:?}")));
        }
        let (n, v) = header("stage")?;
        let stage: u32 = v.parse().ok().filter(|&s| s <= 15).ok_or_else(|| FormatError::parse(n, "stage", format!("bad stage {v:?}")))?;
        let (n, v) = header("decisions")?;
        let decisions = if v == "-" {
            CodingPrefix::empty()
        } else {
            v.parse().map_err(|e: crate::prefix::PrefixError| FormatError::parse(n, "decisions", e.to_string()))?
        };
        let (n, v) = header("seed")?;
        let seed = v.parse().map_err(|_| FormatError::parse(n, "seed", format!("bad seed {v:?}")))?;
        let want = 1usize << (2 * stage);
        let mut cells = Vec::with_capacity(want);
        let mut last = n;
        for (n, l) in lines {
            last = n;
            if cells.len() == want {
                return Err(FormatError::parse(n, "cells", format!("more than {want} cells")));
            }
            let (name, color) = l.rsplit_once(' ').ok_or_else(|| FormatError::parse(n, "cells", "expected `tile color`"))?;
            let color = match color {
                "ON" => Color::On,
                "OFF" => Color::Off,
                _ => return Err(FormatError::parse(n, "cells.color", format!("expected ON or OFF, found {color:?}"))),
            };
            if name.is_empty() {
                return Err(FormatError::parse(n, "cells.tile", "empty tile name"));
            }
            cells.push((name.to_string(), color));
        }
        if cells.len() != want {
            return Err(FormatError::parse(last, "cells", format!("expected {want} cells, found {}", cells.len())));
        }
        Ok(Snapshot { stage, decisions, seed, cells })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atam::{run, StopPolicy};

    fn sample() -> Snapshot {
        let (ts, _) = crate::compiler::generate().unwrap();
        let t = run(&ts, StopPolicy::StageComplete(2), 9, Some(&"13".parse().unwrap())).unwrap();
        Snapshot::from_trace(&t, &ts).unwrap()
    }

    #[test]
    fn round_trip() {
        let s = sample();
        assert_eq!(s.decisions.to_string(), "13");
        assert_eq!(Snapshot::parse(&s.emit()).unwrap(), s);
    }

    #[test]
    fn empty_prefix_round_trips() {
        let s = Snapshot { stage: 0, decisions: CodingPrefix::empty(), seed: 0, cells: vec![("seed".into(), Color::On)] };
        assert!(s.emit().contains("decisions -"));
        assert_eq!(Snapshot::parse(&s.emit()).unwrap(), s);
    }

    #[test]
    fn bad_lines_are_located() {
        let text = sample().emit().replacen(" OFF", " GREY", 1);
        match Snapshot::parse(&text) {
            Err(FormatError::Parse { line, field, .. }) => {
                assert!(line > 4);
                assert_eq!(field, "cells.color");
            }
            other => panic!("{other:?}"),
        }
        let short: String = sample().emit().lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(Snapshot::parse(&short).is_err());
        assert!(Snapshot::parse("sssst-snapshot 2\n").is_err());
    }
}
