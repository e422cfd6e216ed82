use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{attachable_at, bound_strengths, Configuration, Loc, Side, TileId, Tileset, TEMPERATURE};
use crate::prefix::CodingPrefix;

/// Event budget for the `Terminal` policy when none is given.
pub const DEFAULT_TERMINAL_CAP: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopPolicy {
    /// Refuse decisions past stage n, then drain the frontier. The
    /// 2^n x 2^n square must be fully tiled at the end.
    StageComplete(u32),
    MaxEvents(usize),
    Terminal,
}

impl StopPolicy {
    pub fn default_cap(self) -> usize {
        match self {
            StopPolicy::StageComplete(n) => (1usize << (2 * n)) + 4 * (1usize << n),
            StopPolicy::MaxEvents(m) => m,
            StopPolicy::Terminal => DEFAULT_TERMINAL_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentEvent {
    pub step: usize,
    pub loc: Loc,
    pub tile: String,
    /// Strength contributed per side, in N, E, S, W order.
    pub bound_sides: [u8; 4],
    pub total_strength: u8,
}

impl AttachmentEvent {
    pub fn bound(&self, side: Side) -> u8 {
        self.bound_sides[side.index()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub index: usize,
    pub loc: Loc,
    pub trit: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub rng_seed: u64,
    pub stop: StopPolicy,
    pub forced: Option<CodingPrefix>,
    pub events: Vec<AttachmentEvent>,
    pub decisions: Vec<DecisionRecord>,
}

impl Trace {
    pub fn realized(&self) -> CodingPrefix {
        CodingPrefix::new(self.decisions.iter().map(|d| d.trit).collect()).expect("recorded trits are valid")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RunError {
    #[error("terminal: no tile can attach")]
    Terminal,
    #[error("budget exceeded: {cap} events")]
    BudgetExceeded { cap: usize },
    #[error("assembly went terminal before the stage-{stage} square was complete ({placed} of {needed} cells)")]
    Incomplete { stage: u32, placed: usize, needed: usize },
    #[error("forced trit {trit} for decision {index} has no attachable tile")]
    ForcedUnavailable { index: usize, trit: u8 },
    #[error("corrupt trace at step {step}: {reason}")]
    CorruptTrace { step: usize, reason: String },
}

/// A growing assembly with an incrementally maintained frontier.
pub struct Assembly<'a> {
    ts: &'a Tileset,
    config: Configuration,
    sites: BTreeMap<Loc, Vec<TileId>>,
    pairs: usize,
    decision_cap: Option<usize>,
    events: Vec<AttachmentEvent>,
    decisions: Vec<DecisionRecord>,
}

impl<'a> Assembly<'a> {
    pub fn new(ts: &'a Tileset) -> Self {
        let mut a = Assembly {
            ts,
            config: Configuration::seeded(ts),
            sites: BTreeMap::new(),
            pairs: 0,
            decision_cap: None,
            events: Vec::new(),
            decisions: Vec::new(),
        };
        a.refresh_around((1, 1));
        a
    }

    /// Decisions with index above `cap` are never offered.
    pub fn with_decision_cap(mut self, cap: usize) -> Self {
        self.decision_cap = Some(cap);
        self.refresh_all();
        self
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn events(&self) -> &[AttachmentEvent] {
        &self.events
    }

    pub fn decisions(&self) -> &[DecisionRecord] {
        &self.decisions
    }

    pub fn frontier_len(&self) -> usize {
        self.pairs
    }

    /// Current frontier as (loc, tile) pairs in location order.
    pub fn frontier(&self) -> Vec<(Loc, TileId)> {
        self.sites.iter().flat_map(|(&l, ts)| ts.iter().map(move |&t| (l, t))).collect()
    }

    fn offered(&self, loc: Loc) -> Vec<TileId> {
        let mut v = attachable_at(&self.config, self.ts, loc);
        if self.decision_cap.is_some_and(|cap| self.decisions.len() >= cap) {
            v.retain(|&t| self.ts.decision(t).is_none());
        }
        v
    }

    fn set_site(&mut self, loc: Loc, tiles: Vec<TileId>) {
        if let Some(old) = self.sites.remove(&loc) {
            self.pairs -= old.len();
        }
        if !tiles.is_empty() {
            self.pairs += tiles.len();
            self.sites.insert(loc, tiles);
        }
    }

    fn refresh_around(&mut self, loc: Loc) {
        self.set_site(loc, Vec::new());
        for side in Side::ALL {
            if let Some(n) = side.step(loc) {
                if self.config.get(n).is_none() {
                    let offered = self.offered(n);
                    self.set_site(n, offered);
                }
            }
        }
    }

    fn refresh_all(&mut self) {
        let locs: Vec<Loc> = super::open_sites(&self.config).into_iter().collect();
        self.sites.clear();
        self.pairs = 0;
        for l in locs {
            let offered = self.offered(l);
            self.set_site(l, offered);
        }
    }

    /// Attach one uniformly chosen frontier pair. A decision tile for stage
    /// k <= |forced| is swapped for the sibling carrying forced[k].
    pub fn step<R: Rng>(&mut self, rng: &mut R, forced: Option<&CodingPrefix>) -> Result<AttachmentEvent, RunError> {
        if self.pairs == 0 {
            return Err(RunError::Terminal);
        }
        let mut r = rng.random_range(0..self.pairs);
        let (loc, mut tile) = self
            .sites
            .iter()
            .find_map(|(&l, ts)| {
                if r < ts.len() {
                    Some((l, ts[r]))
                } else {
                    r -= ts.len();
                    None
                }
            })
            .expect("pair count matches sites");
        if let Some((family, _)) = self.ts.decision(tile) {
            let index = self.decisions.len() + 1;
            if let Some(trit) = forced.and_then(|f| f.get(index)) {
                tile = self.ts.families()[family][trit as usize - 1];
                if !self.sites[&loc].contains(&tile) {
                    return Err(RunError::ForcedUnavailable { index, trit });
                }
            }
        }
        Ok(self.attach(loc, tile))
    }

    /// Place a tile that is known to be in the frontier.
    pub fn attach(&mut self, loc: Loc, tile: TileId) -> AttachmentEvent {
        let bound_sides = bound_strengths(&self.config, self.ts, loc, tile);
        let total_strength = bound_sides.iter().sum();
        debug_assert!(total_strength >= TEMPERATURE);
        self.config.place(loc, tile).expect("frontier sites are empty");
        let event = AttachmentEvent {
            step: self.events.len() + 1,
            loc,
            tile: self.ts.tile(tile).name.clone(),
            bound_sides,
            total_strength,
        };
        self.events.push(event.clone());
        if let Some((_, trit)) = self.ts.decision(tile) {
            self.decisions.push(DecisionRecord { index: self.decisions.len() + 1, loc, trit });
            if self.decision_cap == Some(self.decisions.len()) {
                self.refresh_all();
            }
        }
        self.refresh_around(loc);
        event
    }

    fn into_trace(self, rng_seed: u64, stop: StopPolicy, forced: Option<CodingPrefix>) -> Trace {
        Trace { rng_seed, stop, forced, events: self.events, decisions: self.decisions }
    }
}

pub fn run(ts: &Tileset, stop: StopPolicy, rng_seed: u64, forced: Option<&CodingPrefix>) -> Result<Trace, RunError> {
    run_with_cap(ts, stop, rng_seed, forced, stop.default_cap())
}

pub fn run_with_cap(
    ts: &Tileset,
    stop: StopPolicy,
    rng_seed: u64,
    forced: Option<&CodingPrefix>,
    cap: usize,
) -> Result<Trace, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut asm = Assembly::new(ts);
    if let StopPolicy::StageComplete(n) = stop {
        asm = asm.with_decision_cap(n as usize);
    }
    let limit = match stop {
        StopPolicy::MaxEvents(m) => m,
        _ => usize::MAX,
    };
    while asm.events.len() < limit && asm.frontier_len() > 0 {
        if asm.events.len() >= cap {
            return Err(RunError::BudgetExceeded { cap });
        }
        asm.step(&mut rng, forced)?;
    }
    if let StopPolicy::StageComplete(n) = stop {
        let side = 1u32 << n;
        let needed = (side as usize) * (side as usize);
        let placed = asm.config.iter().filter(|&((x, y), _)| x <= side && y <= side).count();
        if placed < needed {
            return Err(RunError::Incomplete { stage: n, placed, needed });
        }
    }
    Ok(asm.into_trace(rng_seed, stop, forced.cloned()))
}

/// Rebuild the configuration of a trace, checking every event against the
/// tileset: known tile, empty site, legal attachment, recorded strengths.
pub fn replay(trace: &Trace, ts: &Tileset) -> Result<Configuration, RunError> {
    let mut c = Configuration::seeded(ts);
    let corrupt = |step: usize, reason: String| RunError::CorruptTrace { step, reason };
    for (i, e) in trace.events.iter().enumerate() {
        if e.step != i + 1 {
            return Err(corrupt(e.step, format!("expected step {}", i + 1)));
        }
        let tile = ts.id(&e.tile).ok_or_else(|| corrupt(e.step, format!("unknown tile {:?}", e.tile)))?;
        if e.loc.0 == 0 || e.loc.1 == 0 || c.get(e.loc).is_some() {
            return Err(corrupt(e.step, format!("site {:?} unavailable", e.loc)));
        }
        let sides = bound_strengths(&c, ts, e.loc, tile);
        let total: u8 = sides.iter().sum();
        if total < TEMPERATURE {
            return Err(corrupt(e.step, format!("{} binds with strength {total}", e.tile)));
        }
        if sides != e.bound_sides || total != e.total_strength {
            return Err(corrupt(e.step, "recorded strengths disagree with the tileset".into()));
        }
        c.place(e.loc, tile).expect("checked empty");
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::super::toy::*;
    use super::super::{Role, Tileset};
    use super::*;

    /// A row that grows east forever, with a three-way choice at x = 2.
    fn choice_row() -> Tileset {
        let tiles = vec![
            tile("seed", ("", 0), ("h", 2), ("", 0), ("", 0), Role::Seed),
            tile("d1", ("", 0), ("r", 2), ("", 0), ("h", 2), Role::Decision),
            tile("d2", ("", 0), ("r", 2), ("", 0), ("h", 2), Role::Decision),
            tile("d3", ("", 0), ("r", 2), ("", 0), ("h", 2), Role::Decision),
            tile("row", ("", 0), ("r", 2), ("", 0), ("r", 2), Role::Filler),
        ];
        let fam = ["d1".to_string(), "d2".to_string(), "d3".to_string()];
        Tileset::new(tiles, "seed", vec![fam]).unwrap()
    }

    #[test]
    fn single_legal_pair_is_taken() {
        let ts = corner_set();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut a = Assembly::new(&ts);
        let e = a.step(&mut rng, None).unwrap();
        assert_eq!((e.loc, e.tile.as_str(), e.total_strength), ((2, 1), "right", 2));
    }

    #[test]
    fn empty_frontier_is_terminal() {
        let ts = corner_set();
        let t = run(&ts, StopPolicy::Terminal, 3, None).unwrap();
        assert_eq!(t.events.len(), 2);
        let mut a = Assembly::new(&ts);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        a.step(&mut rng, None).unwrap();
        a.step(&mut rng, None).unwrap();
        assert_eq!(a.step(&mut rng, None), Err(RunError::Terminal));
    }

    #[test]
    fn decision_site_offers_three_tiles() {
        let ts = choice_row();
        let a = Assembly::new(&ts);
        let f = a.frontier();
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|&(l, _)| l == (2, 1)));
    }

    #[test]
    fn forcing_overrides_the_draw() {
        let ts = choice_row();
        let forced: CodingPrefix = "2".parse().unwrap();
        for seed in 0..20 {
            let t = run(&ts, StopPolicy::MaxEvents(3), seed, Some(&forced)).unwrap();
            assert_eq!(t.decisions, vec![DecisionRecord { index: 1, loc: (2, 1), trit: 2 }]);
        }
    }

    #[test]
    fn unforced_decisions_cover_all_trits() {
        let ts = choice_row();
        let mut seen = [0usize; 3];
        for seed in 0..300 {
            let t = run(&ts, StopPolicy::MaxEvents(1), seed, None).unwrap();
            seen[t.decisions[0].trit as usize - 1] += 1;
        }
        assert!(seen.iter().all(|&c| (70..=130).contains(&c)), "{seen:?}");
    }

    #[test]
    fn same_seed_same_trace() {
        let ts = choice_row();
        let a = run(&ts, StopPolicy::MaxEvents(40), 99, None).unwrap();
        let b = run(&ts, StopPolicy::MaxEvents(40), 99, None).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn unbounded_growth_hits_the_cap() {
        let ts = choice_row();
        assert_eq!(
            run_with_cap(&ts, StopPolicy::Terminal, 0, None, 50),
            Err(RunError::BudgetExceeded { cap: 50 })
        );
    }

    #[test]
    fn stage_complete_refuses_later_decisions() {
        let ts = choice_row();
        // stage 0 is the seed alone; the stage-1 decision must be refused.
        let t = run(&ts, StopPolicy::StageComplete(0), 5, None).unwrap();
        assert!(t.events.is_empty());
    }

    #[test]
    fn replay_detects_tampering() {
        let ts = choice_row();
        let mut t = run(&ts, StopPolicy::MaxEvents(5), 1, None).unwrap();
        assert_eq!(replay(&t, &ts).unwrap().len(), 6);
        t.events[2].loc = (9, 9);
        assert!(matches!(replay(&t, &ts), Err(RunError::CorruptTrace { step: 3, .. })));
    }
}
