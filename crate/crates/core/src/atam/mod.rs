//! The abstract tile assembly model at temperature 2.

mod engine;
mod stability;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use engine::{replay, run, run_with_cap, Assembly, AttachmentEvent, DecisionRecord, RunError, StopPolicy, Trace};
pub use stability::is_stable;

pub const TEMPERATURE: u8 = 2;

/// 1-indexed (x, y), seed at (1, 1).
pub type Loc = (u32, u32);
pub type TileId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::North, Side::East, Side::South, Side::West];

    pub fn opposite(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::East => Side::West,
            Side::South => Side::North,
            Side::West => Side::East,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The neighbour of `loc` across this side, if it stays in the quadrant.
    pub fn step(self, (x, y): Loc) -> Option<Loc> {
        match self {
            Side::North => Some((x, y.checked_add(1)?)),
            Side::East => Some((x.checked_add(1)?, y)),
            Side::South => (y > 1).then(|| (x, y - 1)),
            Side::West => (x > 1).then(|| (x - 1, y)),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::North => 'N',
            Side::East => 'E',
            Side::South => 'S',
            Side::West => 'W',
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtamError {
    #[error("location occupied: ({}, {})", .0.0, .0.1)]
    LocationOccupied(Loc),
    #[error("coordinates are 1-indexed, got ({}, {})", .0.0, .0.1)]
    OutOfQuadrant(Loc),
    #[error("glue strength {0} is not in {{0,1,2}}")]
    BadStrength(u8),
    #[error("duplicate tile name {0:?}")]
    DuplicateName(String),
    #[error("unknown tile {0:?}")]
    UnknownTile(String),
    #[error("decision family {0} must hold three decision tiles")]
    BadFamily(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Glue {
    pub token: String,
    pub strength: u8,
}

impl Glue {
    pub fn new(token: impl Into<String>, strength: u8) -> Result<Glue, AtamError> {
        if strength > 2 {
            return Err(AtamError::BadStrength(strength));
        }
        Ok(Glue { token: token.into(), strength })
    }

    /// The inert glue on sides that never bind.
    pub fn null() -> Glue {
        Glue { token: String::new(), strength: 0 }
    }

    pub fn is_null(&self) -> bool {
        self.strength == 0 && self.token.is_empty()
    }
}

/// Strength contributed when two facing sides meet.
pub fn binds(a: &Glue, b: &Glue) -> u8 {
    if a.strength > 0 && a.strength == b.strength && a.token == b.token {
        a.strength
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    On,
    Off,
}

impl Color {
    pub fn from_bool(on: bool) -> Color {
        if on {
            Color::On
        } else {
            Color::Off
        }
    }

    pub fn is_on(self) -> bool {
        self == Color::On
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_on() { "ON" } else { "OFF" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Seed,
    Basecase,
    Filler,
    Crawlback,
    Decision,
    Popup,
    Popright,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::Seed,
        Role::Basecase,
        Role::Filler,
        Role::Crawlback,
        Role::Decision,
        Role::Popup,
        Role::Popright,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Role::Seed => "seed",
            Role::Basecase => "basecase",
            Role::Filler => "filler",
            Role::Crawlback => "crawlback",
            Role::Decision => "decision",
            Role::Popup => "popup",
            Role::Popright => "popright",
        }
    }

    pub fn from_name(s: &str) -> Option<Role> {
        Role::ALL.into_iter().find(|r| r.name() == s)
    }
}

/// A non-rotatable square tile. Glues are indexed by `Side::index`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TileType {
    pub name: String,
    pub glues: [Glue; 4],
    pub color: Color,
    pub role: Role,
}

impl TileType {
    pub fn glue(&self, side: Side) -> &Glue {
        &self.glues[side.index()]
    }
}

/// A finite tile set together with its seed and its decision families.
/// Each family lists the tiles for trits 1, 2 and 3 in that order.
#[derive(Clone, Debug)]
pub struct Tileset {
    tiles: Vec<TileType>,
    seed: TileId,
    families: Vec<[TileId; 3]>,
    by_name: HashMap<String, TileId>,
    by_glue: HashMap<(Side, Glue), Vec<TileId>>,
    decision_of: HashMap<TileId, (usize, u8)>,
}

impl PartialEq for Tileset {
    fn eq(&self, other: &Self) -> bool {
        self.tiles == other.tiles && self.seed == other.seed && self.families == other.families
    }
}

impl Tileset {
    pub fn new(tiles: Vec<TileType>, seed: &str, families: Vec<[String; 3]>) -> Result<Tileset, AtamError> {
        let mut by_name = HashMap::new();
        let mut by_glue: HashMap<(Side, Glue), Vec<TileId>> = HashMap::new();
        for (id, t) in tiles.iter().enumerate() {
            if by_name.insert(t.name.clone(), id).is_some() {
                return Err(AtamError::DuplicateName(t.name.clone()));
            }
            for side in Side::ALL {
                let g = t.glue(side);
                if g.strength > 2 {
                    return Err(AtamError::BadStrength(g.strength));
                }
                if g.strength > 0 {
                    by_glue.entry((side, g.clone())).or_default().push(id);
                }
            }
        }
        let lookup = |n: &str| by_name.get(n).copied().ok_or_else(|| AtamError::UnknownTile(n.to_string()));
        let seed = lookup(seed)?;
        let mut fams = Vec::new();
        let mut decision_of = HashMap::new();
        for (f, names) in families.iter().enumerate() {
            let ids = [lookup(&names[0])?, lookup(&names[1])?, lookup(&names[2])?];
            for (i, &id) in ids.iter().enumerate() {
                if tiles[id].role != Role::Decision || decision_of.insert(id, (f, i as u8 + 1)).is_some() {
                    return Err(AtamError::BadFamily(f));
                }
            }
            fams.push(ids);
        }
        Ok(Tileset { tiles, seed, families: fams, by_name, by_glue, decision_of })
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn tile(&self, id: TileId) -> &TileType {
        &self.tiles[id]
    }

    pub fn id(&self, name: &str) -> Option<TileId> {
        self.by_name.get(name).copied()
    }

    pub fn seed(&self) -> TileId {
        self.seed
    }

    pub fn temperature(&self) -> u8 {
        TEMPERATURE
    }

    pub fn families(&self) -> &[[TileId; 3]] {
        &self.families
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Family index and trit for a decision tile.
    pub fn decision(&self, id: TileId) -> Option<(usize, u8)> {
        self.decision_of.get(&id).copied()
    }

    /// Tiles whose `side` carries exactly `glue`.
    pub fn with_glue(&self, side: Side, glue: &Glue) -> &[TileId] {
        self.by_glue.get(&(side, glue.clone())).map_or(&[], |v| v.as_slice())
    }
}

/// Sparse placement of tiles in the first quadrant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    cells: HashMap<Loc, TileId>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn seeded(ts: &Tileset) -> Self {
        let mut c = Self::new();
        c.cells.insert((1, 1), ts.seed());
        c
    }

    pub fn get(&self, loc: Loc) -> Option<TileId> {
        self.cells.get(&loc).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Loc, TileId)> + '_ {
        self.cells.iter().map(|(&l, &t)| (l, t))
    }

    /// Occupied cells in (y, x) order, for deterministic output.
    pub fn sorted(&self) -> Vec<(Loc, TileId)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by_key(|&((x, y), _)| (y, x));
        v
    }

    pub fn place(&mut self, loc: Loc, tile: TileId) -> Result<(), AtamError> {
        if loc.0 == 0 || loc.1 == 0 {
            return Err(AtamError::OutOfQuadrant(loc));
        }
        if self.cells.contains_key(&loc) {
            return Err(AtamError::LocationOccupied(loc));
        }
        self.cells.insert(loc, tile);
        Ok(())
    }

    pub fn remove(&mut self, loc: Loc) -> Option<TileId> {
        self.cells.remove(&loc)
    }

    /// Largest x and y in use, or (0, 0) when empty.
    pub fn extent(&self) -> (u32, u32) {
        self.cells.keys().fold((0, 0), |(mx, my), &(x, y)| (mx.max(x), my.max(y)))
    }

    pub fn neighbours(&self, loc: Loc) -> impl Iterator<Item = (Side, Loc, TileId)> + '_ {
        Side::ALL
            .into_iter()
            .filter_map(move |s| s.step(loc).and_then(|n| self.get(n).map(|t| (s, n, t))))
    }
}

/// Strength each side of `tile` would contribute if placed at `loc`.
pub fn bound_strengths(c: &Configuration, ts: &Tileset, loc: Loc, tile: TileId) -> [u8; 4] {
    let t = ts.tile(tile);
    let mut out = [0u8; 4];
    for (side, _, nb) in c.neighbours(loc) {
        out[side.index()] = binds(t.glue(side), ts.tile(nb).glue(side.opposite()));
    }
    out
}

pub fn attachable(c: &Configuration, ts: &Tileset, loc: Loc, tile: TileId) -> Result<bool, AtamError> {
    if c.get(loc).is_some() {
        return Err(AtamError::LocationOccupied(loc));
    }
    let total: u32 = bound_strengths(c, ts, loc, tile).iter().map(|&s| s as u32).sum();
    Ok(total >= TEMPERATURE as u32)
}

/// Tiles attachable at an empty location, in id order.
pub fn attachable_at(c: &Configuration, ts: &Tileset, loc: Loc) -> Vec<TileId> {
    let mut cands: Vec<TileId> = Vec::new();
    for (side, _, nb) in c.neighbours(loc) {
        let g = ts.tile(nb).glue(side.opposite());
        if g.strength > 0 {
            cands.extend_from_slice(ts.with_glue(side, g));
        }
    }
    cands.sort_unstable();
    cands.dedup();
    cands.retain(|&t| {
        bound_strengths(c, ts, loc, t).iter().map(|&s| s as u32).sum::<u32>() >= TEMPERATURE as u32
    });
    cands
}

/// Empty quadrant locations next to at least one tile.
pub fn open_sites(c: &Configuration) -> BTreeSet<Loc> {
    c.iter()
        .flat_map(|(l, _)| Side::ALL.into_iter().filter_map(move |s| s.step(l)))
        .filter(|&l| c.get(l).is_none())
        .collect()
}

pub fn frontier(c: &Configuration, ts: &Tileset) -> BTreeSet<(Loc, TileId)> {
    open_sites(c)
        .into_iter()
        .flat_map(|l| attachable_at(c, ts, l).into_iter().map(move |t| (l, t)))
        .collect()
}

pub fn is_terminal(c: &Configuration, ts: &Tileset) -> bool {
    open_sites(c).into_iter().all(|l| attachable_at(c, ts, l).is_empty())
}

#[cfg(test)]
pub(crate) mod toy {
    use super::*;

    pub fn tile(name: &str, n: (&str, u8), e: (&str, u8), s: (&str, u8), w: (&str, u8), role: Role) -> TileType {
        let g = |(t, st): (&str, u8)| Glue::new(t, st).unwrap();
        TileType { name: name.into(), glues: [g(n), g(e), g(s), g(w)], color: Color::On, role }
    }

    /// Seed with one strength-2 east glue and one strength-1 north glue,
    /// a strength-2 follower with a corner above it; "top" can never attach.
    pub fn corner_set() -> Tileset {
        let tiles = vec![
            tile("seed", ("up", 1), ("r", 2), ("", 0), ("", 0), Role::Seed),
            tile("right", ("rup", 2), ("", 0), ("", 0), ("r", 2), Role::Filler),
            tile("corner", ("", 0), ("", 0), ("rup", 2), ("", 0), Role::Filler),
            tile("top", ("", 0), ("", 0), ("up", 1), ("", 0), Role::Filler),
        ];
        Tileset::new(tiles, "seed", vec![]).unwrap()
    }
}
