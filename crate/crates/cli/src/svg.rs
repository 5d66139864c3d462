//! Minimal static SVG plots: the transformed potential V(s) and the first
//! eigenfunction on a shared horizontal axis.

fn polyline(points: &[(f64, f64)], color: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn map_series(
    s: &[f64],
    v: &[f64],
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    frame: (f64, f64, f64, f64),
) -> Vec<(f64, f64)> {
    let (left, top, width, height) = frame;
    s.iter()
        .zip(v)
        .map(|(si, vi)| {
            let fx = (si - x0) / (x1 - x0);
            let fy = if y1 > y0 { (vi - y0) / (y1 - y0) } else { 0.5 };
            (left + fx * width, top + (1.0 - fy) * height)
        })
        .collect()
}

/// Render potential and ground state into one 800x500 document. The
/// eigenfunction is rescaled to the potential's vertical range.
pub fn potential_plot(
    grid: &[f64],
    potential: &[f64],
    eigenfunction: &[f64],
    title: &str,
) -> String {
    let x0 = grid[0];
    let x1 = grid[grid.len() - 1];
    let vmin = potential.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = potential.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let emax = eigenfunction
        .iter()
        .fold(0.0f64, |a, b| a.max(b.abs()))
        .max(1e-300);
    let scaled: Vec<f64> = eigenfunction
        .iter()
        .map(|e| vmin + (e / emax).abs() * 0.8 * (vmax - vmin))
        .collect();
    let frame = (60.0, 40.0, 700.0, 420.0);
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n",
    );
    out.push_str("<rect width=\"800\" height=\"500\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"60\" y=\"25\" font-family=\"monospace\" font-size=\"14\">{title}</text>\n"
    ));
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n",
        frame.0, frame.1, frame.2, frame.3
    ));
    out.push_str(&polyline(
        &map_series(grid, potential, (x0, x1), (vmin, vmax), frame),
        "#1f77b4",
    ));
    out.push_str(&polyline(
        &map_series(grid, &scaled, (x0, x1), (vmin, vmax), frame),
        "#d62728",
    ));
    out.push_str(&format!(
        "<text x=\"60\" y=\"485\" font-family=\"monospace\" font-size=\"12\">s in [{x0:.1}, {x1:.1}]; blue: V(s); red: |ground state| (rescaled)</text>\n"
    ));
    out.push_str("</svg>\n");
    out
}
