//! The 4x4 base case: seed, both stage decisions, and every cell of the
//! first two stages.
//!
//! Growth order inside the block:
//!
//! ```text
//!   y=4   cb  cb  |  .   .        crawl cells bind east(1) + south(1),
//!   y=3   cb  cb  |  .   .        everything else hangs off one
//!   y=2   cb  .   |  .   .        strength-2 glue (west or south)
//!   y=1   S   d1  |  d2  .
//! ```
//!
//! Row 1 grows east from the seed through the two decision tiles, columns
//! 2..4 grow north, and the western cells are filled by crawling back west
//! from column 3 (or 2). Every shared edge is either an input edge carrying
//! the same token on both sides or null on both, so each tile binds with
//! strength exactly 2.

use super::glue::{GlueRole, GluePayload};
use crate::atam::{Color, Glue, Role, Side, TileType};

pub type Cell = (u8, u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrawlDir {
    /// Along a row (the base case crawls westward).
    Ew,
    /// Along a column.
    Ns,
}

/// Sides through which a template cell binds, with their strengths.
pub fn inputs(cell: Cell) -> &'static [(Side, u8)] {
    use Side::*;
    match cell {
        (1, 1) => &[],
        (2, 1) | (3, 1) | (4, 1) => &[(West, 2)],
        (1, 2) | (1, 3) | (2, 3) | (1, 4) | (2, 4) => &[(East, 1), (South, 1)],
        _ => &[(South, 2)],
    }
}

/// How many coding trits a cell has seen when it attaches.
pub fn known(cell: Cell) -> usize {
    match cell {
        (1, 1) => 0,
        (2, 1) | (2, 2) | (1, 2) => 1,
        _ => 2,
    }
}

fn is_crawl(cell: Cell) -> bool {
    inputs(cell).len() == 2
}

fn is_decision(cell: Cell) -> bool {
    matches!(cell, (2, 1) | (3, 1))
}

/// Area of a cell within a block of side 2*half: 0 south-west, 1 north,
/// 2 north-east, 3 east.
fn area(x: u8, y: u8, half: u8) -> u8 {
    match (x > half, y > half) {
        (false, false) => 0,
        (false, true) => 1,
        (true, true) => 2,
        (true, false) => 3,
    }
}

/// Masking flag after reading the trit for one level: once set it stays set.
pub fn mask_rules(masked: bool, trit: Option<u8>, area: u8) -> bool {
    masked || (area != 0 && trit == Some(area))
}

/// Colour of a template cell, by walking the masking flag down the two
/// levels of the block.
pub fn cell_color(cell: Cell, d1: u8, d2: u8) -> Color {
    let (x, y) = cell;
    let outer = mask_rules(false, Some(d2), area(x, y, 2));
    let inner = mask_rules(outer, Some(d1), area((x - 1) % 2 + 1, (y - 1) % 2 + 1, 1));
    Color::from_bool(!inner)
}

/// Trits in the order the frontier hands them out: position i carries the
/// trit of decision trailing_zeros(i) + 1.
fn ruler_trit(pos: u8, d: [u8; 2]) -> u8 {
    d[pos.trailing_zeros() as usize]
}

fn neighbour(cell: Cell, side: Side) -> Option<Cell> {
    let (x, y) = cell;
    let n = match side {
        Side::North => (x, y + 1),
        Side::East => (x + 1, y),
        Side::South => (x, y.wrapping_sub(1)),
        Side::West => (x.wrapping_sub(1), y),
    };
    ((1..=4).contains(&n.0) && (1..=4).contains(&n.1)).then_some(n)
}

/// Token carried across the edge from `from` into `to`, built from what
/// the sender knows.
fn edge_glue(from: Cell, to: Cell, side_of_to: Side, strength: u8, d: [u8; 2]) -> Glue {
    let role = if is_decision(to) {
        GlueRole::DecisionFlag
    } else if is_crawl(to) && side_of_to == Side::East {
        GlueRole::CrawlbackEw
    } else if is_crawl(to) {
        GlueRole::ColumnCarry
    } else {
        GlueRole::Basecase
    };
    let mut p = GluePayload::new(role);
    p.cell = Some(to);
    p.trits = d[..known(from)].to_vec();
    p.masked = cell_color(from, d[0], d[1]) == Color::Off;
    if role == GlueRole::CrawlbackEw {
        p.onoff = Some(cell_color(to, d[0], d[1]).is_on());
        p.phase = Some(to.0 % 4);
    }
    Glue::new(p.token(), strength).expect("template strengths are 1 or 2")
}

/// Strength-0 glue on the outer north/east edge: the frontier label.
fn frontier_glue(cell: Cell, side: Side, d: [u8; 2]) -> Glue {
    let pos = if side == Side::North { cell.0 } else { cell.1 };
    let mut p = if pos == 4 {
        let mut p = GluePayload::new(GlueRole::DecisionFlag);
        p.trits = d.to_vec();
        p
    } else {
        let mut p = GluePayload::new(if side == Side::North { GlueRole::ColumnCarry } else { GlueRole::RowCarry });
        p.trits = vec![ruler_trit(pos, d)];
        p
    };
    p.masked = cell_color(cell, d[0], d[1]) == Color::Off;
    Glue::new(p.token(), 0).expect("strength 0")
}

fn tile_name(cell: Cell, d: [u8; 2]) -> String {
    let (x, y) = cell;
    let trits: String = d[..known(cell)].iter().map(|t| t.to_string()).collect();
    match cell {
        (1, 1) => "seed".to_string(),
        _ if is_decision(cell) => format!("dec{x}{y}_{trits}"),
        _ if is_crawl(cell) => format!("cb{x}{y}_{trits}"),
        _ => format!("bc{x}{y}_{trits}"),
    }
}

/// The tile for one cell of the 4x4 block under decisions (d1, d2). Cells
/// that attach before decision 2 ignore d2.
pub fn basecase_rules(cell: Cell, d1: u8, d2: u8) -> TileType {
    assert!((1..=4).contains(&cell.0) && (1..=4).contains(&cell.1), "cell outside the template");
    assert!((1..=3).contains(&d1) && (1..=3).contains(&d2), "trits are 1, 2 or 3");
    let d = [d1, if known(cell) >= 2 { d2 } else { 1 }];
    if is_crawl(cell) {
        return crawlback_rules(CrawlDir::Ew, cell, d);
    }
    let role = match cell {
        (1, 1) => Role::Seed,
        _ if is_decision(cell) => Role::Decision,
        _ => Role::Basecase,
    };
    build(cell, d, role)
}

/// A crawl cell. Its colour is taken from the "*on"/"*off" bit on its
/// east input, which the sender computed for it.
pub fn crawlback_rules(dir: CrawlDir, cell: Cell, d: [u8; 2]) -> TileType {
    assert_eq!(dir, CrawlDir::Ew, "the base case only crawls along rows");
    assert!(is_crawl(cell), "{cell:?} is not a crawl cell");
    let mut t = build(cell, d, Role::Crawlback);
    let east = GluePayload::parse(&t.glue(Side::East).token).expect("own token");
    t.color = Color::from_bool(east.onoff.expect("crawl input carries the colour bit"));
    t
}

fn build(cell: Cell, d: [u8; 2], role: Role) -> TileType {
    let mut glues = [Glue::null(), Glue::null(), Glue::null(), Glue::null()];
    for side in Side::ALL {
        let g = if let Some(&(_, s)) = inputs(cell).iter().find(|(sd, _)| *sd == side) {
            let from = neighbour(cell, side).expect("inputs come from inside the block");
            edge_glue(from, cell, side, s, d)
        } else if let Some(n) = neighbour(cell, side) {
            match inputs(n).iter().find(|(sd, _)| *sd == side.opposite()) {
                Some(&(_, s)) => edge_glue(cell, n, side.opposite(), s, d),
                None => Glue::null(),
            }
        } else if matches!(side, Side::North | Side::East) {
            frontier_glue(cell, side, d)
        } else {
            Glue::null()
        };
        glues[side.index()] = g;
    }
    TileType { name: tile_name(cell, d), glues, color: cell_color(cell, d[0], d[1]), role }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionPoint {
    First,
    Second { d1: u8 },
}

/// The three competing tiles at a decision point, for trits 1, 2, 3.
pub fn decision_rules(point: DecisionPoint) -> [TileType; 3] {
    [1, 2, 3].map(|t| match point {
        DecisionPoint::First => basecase_rules((2, 1), t, 1),
        DecisionPoint::Second { d1 } => basecase_rules((3, 1), d1, t),
    })
}

/// Local rule: the tiles whose input sides carry exactly `ctx`.
pub fn rule(ctx: &[(Side, Glue)]) -> Vec<TileType> {
    let Some(payloads) = ctx
        .iter()
        .map(|(_, g)| GluePayload::parse(&g.token).ok())
        .collect::<Option<Vec<_>>>()
    else {
        return Vec::new();
    };
    let Some(cell) = payloads.first().and_then(|p| p.cell) else { return Vec::new() };
    if payloads.iter().any(|p| p.cell != Some(cell)) {
        return Vec::new();
    }
    let trits = payloads.iter().map(|p| p.trits.clone()).max_by_key(|t| t.len()).unwrap_or_default();
    let candidates: Vec<TileType> = match cell {
        (2, 1) if trits.is_empty() => decision_rules(DecisionPoint::First).to_vec(),
        (3, 1) if trits.len() == 1 => decision_rules(DecisionPoint::Second { d1: trits[0] }).to_vec(),
        _ if trits.len() == known(cell) && cell != (1, 1) => {
            vec![basecase_rules(cell, trits[0], trits.get(1).copied().unwrap_or(1))]
        }
        _ => Vec::new(),
    };
    candidates
        .into_iter()
        .filter(|t| {
            let want = inputs(cell);
            want.len() == ctx.len()
                && want.iter().all(|&(side, s)| {
                    ctx.iter().any(|(cs, g)| *cs == side && g.strength == s && t.glue(side) == g)
                })
        })
        .collect()
}
