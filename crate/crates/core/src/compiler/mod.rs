//! Tileset compiler: local rules plus a fixpoint closure that turns them
//! into an explicit finite tile list.
//!
//! The rules realize the 4x4 base case (stages 1 and 2). The nested
//! popup/popright recursion that would carry growth past stage 2 is not
//! implemented, so the generated tileset assembles exactly the first two
//! stages and then goes terminal. See the README for the details.

mod basecase;
pub mod glue;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

pub use basecase::{
    basecase_rules, cell_color, crawlback_rules, decision_rules, inputs, known, mask_rules, rule, Cell, CrawlDir,
    DecisionPoint,
};

use crate::atam::{AtamError, Glue, Role, Side, TileType, Tileset};

pub const DEFAULT_CEILING: usize = 50_000;

/// Highest stage the generated tileset can complete.
pub const MAX_STAGE: u32 = 2;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("closure diverged: more than {0} tile types")]
    ClosureDiverged(usize),
    #[error("two rules produced different tiles named {0:?}")]
    NameClash(String),
    #[error(transparent)]
    Tileset(#[from] AtamError),
}

/// A binding context: the glues a new tile must present, by side.
pub type Context = Vec<(Side, Glue)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub tiles: Vec<TileType>,
    /// Tile names per decision context, trits 1, 2, 3 in order.
    pub families: Vec<[String; 3]>,
    pub contexts_tried: usize,
    pub rounds: usize,
}

/// Grow `start` under `rule` until no context yields a new tile type.
///
/// Contexts are every single strength-2 glue some tile exposes and every
/// pair of strength-1 glues facing a common site from two different sides.
pub fn close(
    start: Vec<TileType>,
    rule: impl Fn(&[(Side, Glue)]) -> Vec<TileType>,
    ceiling: usize,
) -> Result<Closure, CompileError> {
    let mut tiles: Vec<TileType> = Vec::new();
    let mut by_name: BTreeMap<String, usize> = BTreeMap::new();
    let mut exposed: BTreeSet<(Side, Glue)> = BTreeSet::new();
    let mut families = Vec::new();
    let mut tried: HashSet<Context> = HashSet::new();

    let mut add = |t: TileType, tiles: &mut Vec<TileType>, exposed: &mut BTreeSet<(Side, Glue)>| {
        if let Some(&i) = by_name.get(&t.name) {
            return if tiles[i] == t { Ok(false) } else { Err(CompileError::NameClash(t.name)) };
        }
        for side in Side::ALL {
            let g = t.glue(side);
            if g.strength > 0 {
                exposed.insert((side.opposite(), g.clone()));
            }
        }
        by_name.insert(t.name.clone(), tiles.len());
        tiles.push(t);
        if tiles.len() > ceiling {
            return Err(CompileError::ClosureDiverged(ceiling));
        }
        Ok(true)
    };

    for t in start {
        add(t, &mut tiles, &mut exposed)?;
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let snapshot: Vec<(Side, Glue)> = exposed.iter().cloned().collect();
        let mut contexts: Vec<Context> = snapshot
            .iter()
            .filter(|(_, g)| g.strength == 2)
            .map(|sg| vec![sg.clone()])
            .collect();
        let weak: Vec<&(Side, Glue)> = snapshot.iter().filter(|(_, g)| g.strength == 1).collect();
        for (i, a) in weak.iter().enumerate() {
            for b in &weak[i + 1..] {
                if a.0 != b.0 {
                    contexts.push(vec![(*a).clone(), (*b).clone()]);
                }
            }
        }
        let mut grew = false;
        for ctx in contexts {
            if !tried.insert(ctx.clone()) {
                continue;
            }
            let out = rule(&ctx);
            if out.len() == 3 && out.iter().all(|t| t.role == Role::Decision) {
                families.push([out[0].name.clone(), out[1].name.clone(), out[2].name.clone()]);
            }
            for t in out {
                grew |= add(t, &mut tiles, &mut exposed)?;
            }
        }
        if !grew {
            break;
        }
    }
    families.sort();
    Ok(Closure { tiles, families, contexts_tried: tried.len(), rounds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileReport {
    pub tiles: usize,
    pub by_role: BTreeMap<Role, usize>,
    pub families: usize,
    pub contexts_tried: usize,
    pub rounds: usize,
    pub max_stage: u32,
}

impl fmt::Display for CompileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tile types: {} (", self.tiles)?;
        let roles: Vec<String> = self.by_role.iter().map(|(r, n)| format!("{} {n}", r.name())).collect();
        write!(f, "{})", roles.join(", "))?;
        write!(
            f,
            "; decision families: {}; contexts tried: {}; closure rounds: {}; completes stages 1..={}",
            self.families, self.contexts_tried, self.rounds, self.max_stage
        )
    }
}

pub fn generate_with_ceiling(ceiling: usize) -> Result<(Tileset, CompileReport), CompileError> {
    let seed = basecase_rules((1, 1), 1, 1);
    let seed_name = seed.name.clone();
    let closure = close(vec![seed], rule, ceiling)?;
    let mut by_role = BTreeMap::new();
    for t in &closure.tiles {
        *by_role.entry(t.role).or_insert(0) += 1;
    }
    let report = CompileReport {
        tiles: closure.tiles.len(),
        by_role,
        families: closure.families.len(),
        contexts_tried: closure.contexts_tried,
        rounds: closure.rounds,
        max_stage: MAX_STAGE,
    };
    let ts = Tileset::new(closure.tiles, &seed_name, closure.families)?;
    Ok((ts, report))
}

/// The closed tileset and its type-count report.
pub fn generate() -> Result<(Tileset, CompileReport), CompileError> {
    generate_with_ceiling(DEFAULT_CEILING)
}
