/// Minimal fixed-width table rendering for terminal output.
pub fn render(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.len());
            }
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: Vec<String>| {
        let rendered: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect();
        out.push_str(rendered.join("  ").trim_end());
        out.push('\n');
    };
    line(
        &mut out,
        headers.iter().map(|h| h.to_string()).collect(),
    );
    line(
        &mut out,
        widths.iter().map(|w| "-".repeat(*w)).collect(),
    );
    for row in rows {
        line(&mut out, row.clone());
    }
    out
}
