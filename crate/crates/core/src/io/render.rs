use crate::oracle::OracleGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Pbm,
}

/// Rows from the top (largest y) down, so (1,1) lands bottom-left.
/// Neither format ends with a newline.
pub fn render(grid: &OracleGrid, format: Format) -> Vec<u8> {
    let side = grid.side();
    let (on, off) = match format {
        Format::Ascii => ('#', '.'),
        Format::Pbm => ('1', '0'),
    };
    let mut rows: Vec<String> = Vec::with_capacity(side as usize + 2);
    if format == Format::Pbm {
        rows.push("P1".into());
        rows.push(format!("{side} {side}"));
    }
    for y in (1..=side).rev() {
        rows.push((1..=side).map(|x| if grid.get(x, y) { on } else { off }).collect());
    }
    rows.join("\n").into_bytes()
}
