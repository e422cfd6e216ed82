use std::collections::HashMap;

use super::{binds, Configuration, Side, Tileset, TEMPERATURE};

/// True iff every cut of the bond graph has weight at least 2.
///
/// Bond weights are 1 or 2, so a light cut is either a split of the
/// positive-weight graph or a single strength-1 bond that is a bridge.
/// That reduces the min-cut test to connectivity plus bridge finding.
pub fn is_stable(c: &Configuration, ts: &Tileset) -> bool {
    let locs: Vec<_> = c.sorted().into_iter().map(|(l, _)| l).collect();
    if locs.len() <= 1 {
        return true;
    }
    let index: HashMap<_, _> = locs.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut adj: Vec<Vec<(usize, u8, usize)>> = vec![Vec::new(); locs.len()];
    let mut edge = 0;
    for (i, &l) in locs.iter().enumerate() {
        let t = ts.tile(c.get(l).unwrap());
        for side in [Side::North, Side::East] {
            let Some(n) = side.step(l) else { continue };
            let Some(&j) = index.get(&n) else { continue };
            let w = binds(t.glue(side), ts.tile(c.get(n).unwrap()).glue(side.opposite()));
            if w > 0 {
                adj[i].push((j, w, edge));
                adj[j].push((i, w, edge));
                edge += 1;
            }
        }
    }

    // Iterative Tarjan low-link over the positive-weight graph.
    let n = locs.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    time += 1;
    while let Some(&mut (v, parent_edge, ref mut next)) = stack.last_mut() {
        if *next < adj[v].len() {
            let (u, _, e) = adj[v][*next];
            *next += 1;
            if e == parent_edge {
                continue;
            }
            if disc[u] == usize::MAX {
                disc[u] = time;
                low[u] = time;
                time += 1;
                stack.push((u, e, 0));
            } else {
                low[v] = low[v].min(disc[u]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] > disc[p] {
                    let w = adj[p].iter().find(|&&(_, _, e)| e == parent_edge).map(|&(_, w, _)| w);
                    if w.unwrap_or(0) < TEMPERATURE {
                        return false;
                    }
                }
            }
        }
    }
    disc.iter().all(|&d| d != usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::super::toy::*;
    use super::super::{Role, Tileset};
    use super::*;

    #[test]
    fn single_tile_is_stable() {
        let ts = corner_set();
        assert!(is_stable(&Configuration::seeded(&ts), &ts));
    }

    #[test]
    fn strength_two_pair_is_stable() {
        let ts = corner_set();
        let mut c = Configuration::seeded(&ts);
        c.place((2, 1), ts.id("right").unwrap()).unwrap();
        assert!(is_stable(&c, &ts));
    }

    #[test]
    fn mismatched_neighbours_are_unstable() {
        let ts = corner_set();
        let mut c = Configuration::seeded(&ts);
        c.place((1, 2), ts.id("corner").unwrap()).unwrap();
        assert!(!is_stable(&c, &ts));
    }

    #[test]
    fn disconnected_is_unstable() {
        let ts = corner_set();
        let mut c = Configuration::seeded(&ts);
        c.place((5, 5), ts.id("right").unwrap()).unwrap();
        assert!(!is_stable(&c, &ts));
    }

    #[test]
    fn lone_strength_one_bond_is_a_weak_cut() {
        let tiles = vec![
            tile("a", ("", 0), ("w", 1), ("", 0), ("", 0), Role::Seed),
            tile("b", ("", 0), ("", 0), ("", 0), ("w", 1), Role::Filler),
        ];
        let ts = Tileset::new(tiles, "a", vec![]).unwrap();
        let mut c = Configuration::seeded(&ts);
        c.place((2, 1), 1).unwrap();
        assert!(!is_stable(&c, &ts));
    }

    #[test]
    fn ring_of_strength_one_bonds_is_stable() {
        let tiles = vec![
            tile("sw", ("v", 1), ("h", 1), ("", 0), ("", 0), Role::Seed),
            tile("se", ("v", 1), ("", 0), ("", 0), ("h", 1), Role::Filler),
            tile("nw", ("", 0), ("h", 1), ("v", 1), ("", 0), Role::Filler),
            tile("ne", ("", 0), ("", 0), ("v", 1), ("h", 1), Role::Filler),
        ];
        let ts = Tileset::new(tiles, "sw", vec![]).unwrap();
        let mut c = Configuration::seeded(&ts);
        c.place((2, 1), 1).unwrap();
        c.place((1, 2), 2).unwrap();
        c.place((2, 2), 3).unwrap();
        assert!(is_stable(&c, &ts));
    }
}
