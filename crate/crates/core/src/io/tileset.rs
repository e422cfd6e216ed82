use std::fmt::Write;

use serde::Deserialize;
use toml::Spanned;

use super::{line_of, FormatError};
use crate::atam::{Color, Glue, Role, Side, TileType, Tileset, TEMPERATURE};

pub const TILESET_FORMAT_VERSION: i64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format_version: Spanned<i64>,
    temperature: Spanned<i64>,
    seed: Spanned<String>,
    #[serde(default)]
    families: Vec<Spanned<[String; 3]>>,
    #[serde(default, rename = "tile")]
    tiles: Vec<Spanned<RawTile>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTile {
    name: String,
    color: Spanned<String>,
    role: Spanned<String>,
    north: RawSide,
    east: RawSide,
    south: RawSide,
    west: RawSide,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSide {
    label: String,
    strength: Spanned<i64>,
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Canonical TOML: header keys, families, then one [[tile]] table per
/// tile in tileset order.
pub fn emit_tileset(ts: &Tileset) -> String {
    let mut s = String::new();
    writeln!(s, "format_version = {TILESET_FORMAT_VERSION}").unwrap();
    writeln!(s, "temperature = {}", ts.temperature()).unwrap();
    writeln!(s, "seed = {}", quote(&ts.tile(ts.seed()).name)).unwrap();
    writeln!(s, "families = [").unwrap();
    for f in ts.families() {
        let names: Vec<String> = f.iter().map(|&id| quote(&ts.tile(id).name)).collect();
        writeln!(s, "  [{}],", names.join(", ")).unwrap();
    }
    writeln!(s, "]").unwrap();
    for t in ts.tiles() {
        writeln!(s, "\n[[tile]]").unwrap();
        writeln!(s, "name = {}", quote(&t.name)).unwrap();
        writeln!(s, "color = \"{}\"", t.color).unwrap();
        writeln!(s, "role = \"{}\"", t.role.name()).unwrap();
        for (side, key) in Side::ALL.into_iter().zip(["north", "east", "south", "west"]) {
            let g = t.glue(side);
            writeln!(s, "{key} = {{ label = {}, strength = {} }}", quote(&g.token), g.strength).unwrap();
        }
    }
    s
}

pub fn parse_tileset(text: &str) -> Result<Tileset, FormatError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|r| line_of(text, r.start)).unwrap_or(0);
        FormatError::parse(line, "tileset", e.message().to_string())
    })?;
    let at = |span: std::ops::Range<usize>| line_of(text, span.start);
    if *raw.format_version.get_ref() != TILESET_FORMAT_VERSION {
        return Err(FormatError::parse(
            at(raw.format_version.span()),
            "format_version",
            format!("unsupported version {}", raw.format_version.get_ref()),
        ));
    }
    if *raw.temperature.get_ref() != TEMPERATURE as i64 {
        return Err(FormatError::parse(
            at(raw.temperature.span()),
            "temperature",
            format!("temperature must be {TEMPERATURE}, found {}", raw.temperature.get_ref()),
        ));
    }
    let mut tiles = Vec::with_capacity(raw.tiles.len());
    let mut seen = std::collections::HashMap::new();
    for (i, st) in raw.tiles.iter().enumerate() {
        let line = at(st.span());
        let t = st.get_ref();
        let color = match t.color.get_ref().as_str() {
            "ON" => Color::On,
            "OFF" => Color::Off,
            c => return Err(FormatError::parse(at(t.color.span()), format!("tile[{i}].color"), format!("expected ON or OFF, found {c:?}"))),
        };
        let role = Role::from_name(t.role.get_ref())
            .ok_or_else(|| FormatError::parse(at(t.role.span()), format!("tile[{i}].role"), format!("unknown role {:?}", t.role.get_ref())))?;
        let mut glues: [Glue; 4] = std::array::from_fn(|_| Glue::null());
        for (k, (key, side)) in [("north", &t.north), ("east", &t.east), ("south", &t.south), ("west", &t.west)].into_iter().enumerate() {
            let s = *side.strength.get_ref();
            if !(0..=2).contains(&s) {
                return Err(FormatError::parse(
                    at(side.strength.span()),
                    format!("tile[{i}].{key}.strength"),
                    format!("strength must be 0, 1 or 2, found {s}"),
                ));
            }
            glues[k] = Glue::new(side.label.clone(), s as u8).expect("checked");
        }
        if let Some(j) = seen.insert(t.name.clone(), i) {
            return Err(FormatError::parse(line, format!("tile[{i}].name"), format!("duplicate of tile[{j}] {:?}", t.name)));
        }
        tiles.push(TileType { name: t.name.clone(), glues, color, role });
    }
    if !seen.contains_key(raw.seed.get_ref()) {
        return Err(FormatError::parse(at(raw.seed.span()), "seed", format!("no tile named {:?}", raw.seed.get_ref())));
    }
    for (f, fam) in raw.families.iter().enumerate() {
        let bad = fam.get_ref().iter().find(|n| seen.get(*n).map(|&i| tiles[i].role != Role::Decision).unwrap_or(true));
        if let Some(n) = bad {
            return Err(FormatError::parse(at(fam.span()), format!("families[{f}]"), format!("{n:?} is not a decision tile")));
        }
    }
    let families = raw.families.into_iter().map(|f| f.into_inner()).collect();
    Tileset::new(tiles, raw.seed.get_ref(), families).map_err(|e| FormatError::parse(0, "tileset", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"format_version = 1
temperature = 2
seed = "s"

[[tile]]
name = "s"
color = "ON"
role = "seed"
north = { label = "", strength = 0 }
east = { label = "h", strength = 2 }
south = { label = "", strength = 0 }
west = { label = "", strength = 0 }
"#;

    #[test]
    fn generated_set_round_trips() {
        let (ts, _) = crate::compiler::generate().unwrap();
        let text = emit_tileset(&ts);
        assert_eq!(parse_tileset(&text).unwrap(), ts);
        assert_eq!(emit_tileset(&parse_tileset(&text).unwrap()), text);
    }

    #[test]
    fn minimal_file() {
        let ts = parse_tileset(SMALL).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(ts.families().is_empty());
    }

    #[test]
    fn strength_three_is_rejected_with_its_line() {
        let bad = SMALL.replace("label = \"h\", strength = 2", "label = \"h\", strength = 3");
        match parse_tileset(&bad) {
            Err(FormatError::Parse { line, field, .. }) => {
                assert_eq!(line, 10);
                assert_eq!(field, "tile[0].east.strength");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_temperature_is_rejected() {
        let bad = SMALL.replace("temperature = 2", "temperature = 1");
        match parse_tileset(&bad) {
            Err(FormatError::Parse { line, field, .. }) => assert_eq!((line, field.as_str()), (2, "temperature")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn other_defects() {
        for (from, to) in [
            ("seed = \"s\"", "seed = \"t\""),
            ("role = \"seed\"", "role = \"bogus\""),
            ("color = \"ON\"", "color = \"RED\""),
            ("format_version = 1", "format_version = 9"),
            ("name = \"s\"", "name = 5"),
            ("west = {", "wets = {"),
        ] {
            assert!(parse_tileset(&SMALL.replace(from, to)).is_err(), "{to}");
        }
    }
}
