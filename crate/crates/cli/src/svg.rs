//! Minimal standalone SVG plots. Every series is also dumped as an XML
//! comment so a figure can be audited with a text editor.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 90.0;
const MARGIN_LEFT: f64 = 110.0;
const MARGIN_RIGHT: f64 = 20.0;
const GAP: f64 = 18.0;
const TITLE_HEIGHT: f64 = 36.0;
const PALETTE: [&str; 6] = ["#1f4e79", "#c0504d", "#4f8a3a", "#8064a2", "#d08a00", "#333333"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// Held until the next point, like a logic trace.
    Step,
    Line,
    /// Vertical bars from zero.
    Bars,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>, style: Style) -> Self {
        Series { name: name.into(), points, style }
    }

    /// How long a step or bar series holds its last value: its own final spacing.
    fn hold(&self) -> f64 {
        match self.points.as_slice() {
            [.., a, b] => b.0 - a.0,
            _ => 1.0,
        }
    }

    /// Samples on a unit grid, drawn as a step trace.
    pub fn steps(name: impl Into<String>, values: &[f64]) -> Self {
        let points = values.iter().enumerate().map(|(i, &v)| (i as f64, v)).collect();
        Self::new(name, points, Style::Step)
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub label: String,
    pub series: Vec<Series>,
}

impl Panel {
    pub fn new(label: impl Into<String>, series: Vec<Series>) -> Self {
        Panel { label: label.into(), series }
    }
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub panels: Vec<Panel>,
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Figure {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>) -> Self {
        Figure { title: title.into(), x_label: x_label.into(), panels: Vec::new() }
    }

    pub fn panel(mut self, panel: Panel) -> Self {
        self.panels.push(panel);
        self
    }

    pub fn render(&self) -> String {
        let points = || self.panels.iter().flat_map(|p| p.series.iter().flat_map(|s| s.points.iter()));
        let x_min = points().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let x_max = self
            .panels
            .iter()
            .flat_map(|p| &p.series)
            .filter_map(|s| {
                let last = s.points.last()?.0;
                Some(if s.style == Style::Line { last } else { last + s.hold() })
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let (x_min, x_max) = if x_min.is_finite() && x_max > x_min { (x_min, x_max) } else { (0.0, 1.0) };
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let height = TITLE_HEIGHT + self.panels.len() as f64 * (PANEL_HEIGHT + GAP) + 30.0;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="11">"#,
            num(WIDTH),
            num(height),
            num(WIDTH),
            num(height)
        );
        let _ = writeln!(out, "<!-- figure: {} -->", escape(&self.title).replace("--", "- -"));
        for panel in &self.panels {
            for s in &panel.series {
                let data: Vec<String> = s.points.iter().map(|&(x, y)| format!("{x},{y}")).collect();
                let _ =
                    writeln!(out, "<!-- data {} / {}: {} -->", escape(&panel.label), escape(&s.name), data.join(" "));
            }
        }
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            num(WIDTH / 2.0),
            escape(&self.title)
        );

        for (i, panel) in self.panels.iter().enumerate() {
            let top = TITLE_HEIGHT + i as f64 * (PANEL_HEIGHT + GAP);
            let ys = panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
            let (mut lo, mut hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
            if panel.series.iter().any(|s| s.style == Style::Bars) {
                lo = lo.min(0.0);
                hi = hi.max(0.0);
            }
            if !lo.is_finite() || hi <= lo {
                let mid = if lo.is_finite() { lo } else { 0.0 };
                (lo, hi) = (mid - 1.0, mid + 1.0);
            }
            let pad = 0.08 * (hi - lo);
            let (lo, hi) = (lo - pad, hi + pad);
            let sy = |y: f64| top + PANEL_HEIGHT - (y - lo) / (hi - lo) * PANEL_HEIGHT;

            let _ = writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#bbbbbb"/>"##,
                num(MARGIN_LEFT),
                num(top),
                num(plot_w),
                num(PANEL_HEIGHT)
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
                num(MARGIN_LEFT - 8.0),
                num(top + PANEL_HEIGHT / 2.0 + 4.0),
                escape(&panel.label)
            );
            for (y, anchor) in [(hi - pad, top + 10.0), (lo + pad, top + PANEL_HEIGHT - 2.0)] {
                let _ = writeln!(
                    out,
                    r##"<text x="{}" y="{}" text-anchor="end" fill="#777777" font-size="9">{}</text>"##,
                    num(MARGIN_LEFT - 2.0),
                    num(anchor),
                    num(y)
                );
            }
            for (k, s) in panel.series.iter().enumerate() {
                let color = PALETTE[k % PALETTE.len()];
                match s.style {
                    Style::Bars => {
                        let w = (s.hold() * plot_w / (x_max - x_min) * 0.8).max(1.0);
                        for &(x, y) in &s.points {
                            let (a, b) = (sy(y.max(0.0)), sy(y.min(0.0)));
                            let _ = writeln!(
                                out,
                                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{color}"/>"#,
                                num(sx(x) + 0.1 * w),
                                num(a),
                                num(w),
                                num((b - a).max(0.5))
                            );
                        }
                    }
                    Style::Step | Style::Line => {
                        let mut path = String::new();
                        for (j, &(x, y)) in s.points.iter().enumerate() {
                            let cmd = if j == 0 { 'M' } else { 'L' };
                            if s.style == Style::Step && j > 0 {
                                let _ = write!(path, "L{} {} ", num(sx(x)), num(sy(s.points[j - 1].1)));
                            }
                            let _ = write!(path, "{cmd}{} {} ", num(sx(x)), num(sy(y)));
                        }
                        if let (Style::Step, Some(&(x, y))) = (s.style, s.points.last()) {
                            let _ = write!(path, "L{} {}", num(sx(x + s.hold())), num(sy(y)));
                        }
                        let _ = writeln!(
                            out,
                            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                            path.trim_end()
                        );
                    }
                }
            }
            if panel.series.len() > 1 {
                for (k, s) in panel.series.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        r#"<text x="{}" y="{}" fill="{}" font-size="9">{}</text>"#,
                        num(MARGIN_LEFT + 4.0 + 90.0 * k as f64),
                        num(top + 10.0),
                        PALETTE[k % PALETTE.len()],
                        escape(&s.name)
                    );
                }
            }
        }
        let axis_y = TITLE_HEIGHT + self.panels.len() as f64 * (PANEL_HEIGHT + GAP);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="start">{}</text>"#,
            num(MARGIN_LEFT),
            num(axis_y + 4.0),
            num(x_min)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            num(WIDTH - MARGIN_RIGHT),
            num(axis_y + 4.0),
            num(x_max)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(MARGIN_LEFT + plot_w / 2.0),
            num(axis_y + 18.0),
            escape(&self.x_label)
        );
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_data_comments() {
        let fig = Figure::new("demo", "slot").panel(Panel::new("a", vec![Series::steps("a", &[0.0, 1.0, 1.0, 0.0])]));
        let svg = fig.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<!-- data a / a: 0,0 1,1 2,1 3,0 -->"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg, fig.render());
    }

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.001), "0");
        assert_eq!(num(2.5), "2.5");
    }
}
