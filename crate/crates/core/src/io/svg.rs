use super::format::format_significant;
use crate::central_tendency::ConfidenceSetGrid;

const WIDTH: f64 = 420.0;
const HEIGHT: f64 = 400.0;
const SIDE: f64 = 320.0;
const LEFT: f64 = 50.0;
const BASE: f64 = 320.0;

const INNER: &str = "#000000";
const OUTER: &str = "#9a9a9a";
const NONE: &str = "#ffffff";

fn f(v: f64) -> String {
    format_significant(v, 6)
}

/// Canvas position of `θ`: Mean lower-left, Median apex, Mode lower-right.
fn position(theta: &[f64; 3]) -> (f64, f64) {
    let mean = (LEFT, BASE);
    let mode = (LEFT + SIDE, BASE);
    let median = (LEFT + SIDE / 2.0, BASE - SIDE * 3f64.sqrt() / 2.0);
    (
        theta[0] * mean.0 + theta[1] * median.0 + theta[2] * mode.0,
        theta[0] * mean.1 + theta[1] * median.1 + theta[2] * mode.1,
    )
}

fn confidence_label(alpha: f64) -> String {
    format!("{}%", format_significant(100.0 * (1.0 - alpha), 6))
}

/// Ternary diagram of the grid. Dots are black inside the smallest set
/// (largest α), grey inside only the largest set (smallest α), and white
/// otherwise.
pub fn render_svg(grid: &ConfidenceSetGrid) -> String {
    // index of the tightest and loosest level
    let by_alpha = |cmp: fn(&f64, &f64) -> bool| {
        (0..grid.alpha_levels.len()).reduce(|a, b| {
            if cmp(&grid.alpha_levels[b], &grid.alpha_levels[a]) {
                b
            } else {
                a
            }
        })
    };
    let tight = by_alpha(|b, a| b > a);
    let loose = by_alpha(|b, a| b < a);

    let radius = (120.0 / grid.resolution as f64).clamp(1.5, 6.0);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        f(WIDTH),
        f(HEIGHT),
        f(WIDTH),
        f(HEIGHT)
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    let corners = [
        position(&[1.0, 0.0, 0.0]),
        position(&[0.0, 1.0, 0.0]),
        position(&[0.0, 0.0, 1.0]),
    ];
    s.push_str(&format!(
        "<polygon points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
        f(corners[0].0),
        f(corners[0].1),
        f(corners[1].0),
        f(corners[1].1),
        f(corners[2].0),
        f(corners[2].1)
    ));
    let labels = [
        ("Mean", corners[0].0, corners[0].1 + 22.0, "middle"),
        ("Median", corners[1].0, corners[1].1 - 12.0, "middle"),
        ("Mode", corners[2].0, corners[2].1 + 22.0, "middle"),
    ];
    for (text, x, y, anchor) in labels {
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"{anchor}\">{text}</text>\n",
            f(x),
            f(y)
        ));
    }
    s.push_str("<g stroke=\"#000000\" stroke-width=\"0.5\">\n");
    for p in &grid.points {
        let fill = match (tight, loose) {
            (Some(t), _) if p.members[t] => INNER,
            (_, Some(l)) if p.members[l] => OUTER,
            _ => NONE,
        };
        let (x, y) = position(&p.theta.theta);
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
            f(x),
            f(y),
            f(radius)
        ));
    }
    s.push_str("</g>\n");

    // legend
    let mut entries = Vec::new();
    if let Some(t) = tight {
        entries.push((
            INNER,
            format!("inside {}", confidence_label(grid.alpha_levels[t])),
        ));
    }
    if let (Some(t), Some(l)) = (tight, loose) {
        if t != l {
            entries.push((
                OUTER,
                format!("inside {} only", confidence_label(grid.alpha_levels[l])),
            ));
        }
    }
    if let Some(l) = loose {
        entries.push((
            NONE,
            format!("outside {}", confidence_label(grid.alpha_levels[l])),
        ));
    }
    for (n, (fill, text)) in entries.iter().enumerate() {
        let y = HEIGHT - 40.0 + 14.0 * n as f64;
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{fill}\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n",
            f(LEFT),
            f(y)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{text}</text>\n",
            f(LEFT + 10.0),
            f(y + 4.0)
        ));
    }
    s.push_str("</svg>\n");
    s
}
