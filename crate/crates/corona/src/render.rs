//! Static SVG rendering of packings, coronas, and spinor arrows.

use num_traits::Signed;

use crate::disk::DiskSymbol;
use crate::error::Result;
use crate::oracle::{Corona, Packing};
use crate::rat::{fmt_rat, to_f64};
use crate::spinor::{disk_from_spinor, Spinor};

/// What to draw and where.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    /// `(xmin, xmax, ymin, ymax)` in packing coordinates.
    pub viewport: (f64, f64, f64, f64),
    /// Curvature labels appear on disks with radius at least this.
    pub label_min_radius: f64,
    /// Members of this corona are filled.
    pub highlight: Option<Corona>,
    /// Arrows drawn from each disk's tangency point toward the disk its
    /// spinor points at, labelled with the components.
    pub arrows: Vec<(DiskSymbol, Spinor)>,
    pub stroke_width: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            viewport: (-1.05, 1.05, -1.05, 1.05),
            label_min_radius: 0.02,
            highlight: None,
            arrows: Vec::new(),
            stroke_width: 0.004,
        }
    }
}

/// Plain decimal with 12 significant digits, deterministic.
fn sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return "0".to_string();
    }
    let s = format!("{:.*e}", 11, v);
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    // Digits represent d.ddddddddddd * 10^exp.
    let point = exp + 1;
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
        if out.ends_with('.') {
            out.pop();
        }
    } else if (point as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        let frac = digits[point as usize..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    if out.is_empty() || out == "-" {
        "0".to_string()
    } else {
        out
    }
}

struct Screen {
    ymin: f64,
    ymax: f64,
}

impl Screen {
    // SVG y grows downward; flip about the viewport.
    fn y(&self, y: f64) -> f64 {
        self.ymax + self.ymin - y
    }
}

fn circle_in_viewport(cx: f64, cy: f64, r: f64, vp: (f64, f64, f64, f64)) -> bool {
    let (xmin, xmax, ymin, ymax) = vp;
    cx + r >= xmin && cx - r <= xmax && cy + r >= ymin && cy - r <= ymax
}

/// Intersection of the line `n . p = d` with the viewport rectangle, if
/// any, as a segment.
fn clip_line(
    nx: f64,
    ny: f64,
    d: f64,
    vp: (f64, f64, f64, f64),
) -> Option<((f64, f64), (f64, f64))> {
    let (xmin, xmax, ymin, ymax) = vp;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let push = |pts: &mut Vec<(f64, f64)>, x: f64, y: f64| {
        let eps = 1e-9;
        if x >= xmin - eps
            && x <= xmax + eps
            && y >= ymin - eps
            && y <= ymax + eps
            && !pts
                .iter()
                .any(|&(px, py)| (px - x).abs() < 1e-9 && (py - y).abs() < 1e-9)
        {
            pts.push((x, y));
        }
    };
    if ny.abs() > 1e-15 {
        for x in [xmin, xmax] {
            push(&mut pts, x, (d - nx * x) / ny);
        }
    }
    if nx.abs() > 1e-15 {
        for y in [ymin, ymax] {
            push(&mut pts, (d - ny * y) / nx, y);
        }
    }
    if pts.len() >= 2 {
        Some((pts[0], pts[1]))
    } else {
        None
    }
}

/// Renders the packing as an SVG document. Output is a pure function of
/// the inputs, byte for byte.
pub fn render_svg(p: &Packing, spec: &RenderSpec) -> Result<String> {
    let (xmin, xmax, ymin, ymax) = spec.viewport;
    let width = xmax - xmin;
    let height = ymax - ymin;
    let screen = Screen { ymin, ymax };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" \
         viewBox=\"{} {} {} {}\">\n",
        sig(xmin),
        sig(ymin),
        sig(width),
        sig(height)
    ));

    let highlighted: Vec<&DiskSymbol> = spec
        .highlight
        .as_ref()
        .map(|c| c.members().iter().collect())
        .unwrap_or_default();
    let is_highlighted = |d: &DiskSymbol| highlighted.contains(&d);

    for d in p.disks() {
        if d.is_line() {
            let nx = to_f64(d.xd());
            let ny = to_f64(d.yd());
            let off = to_f64(d.b_co()) / 2.0;
            if let Some(((x1, y1), (x2, y2))) = clip_line(nx, ny, off, spec.viewport) {
                out.push_str(&format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" \
                     stroke-width=\"{}\"/>\n",
                    sig(x1),
                    sig(screen.y(y1)),
                    sig(x2),
                    sig(screen.y(y2)),
                    sig(spec.stroke_width)
                ));
            }
            continue;
        }
        let (cx, cy) = d.center().expect("circle");
        let (cx, cy) = (to_f64(&cx), to_f64(&cy));
        let r = to_f64(&d.radius().expect("circle").abs());
        if !circle_in_viewport(cx, cy, r, spec.viewport) {
            continue;
        }
        let fill = if is_highlighted(d) { "#9db8e8" } else { "none" };
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"black\" \
             stroke-width=\"{}\"/>\n",
            sig(cx),
            sig(screen.y(cy)),
            sig(r),
            fill,
            sig(spec.stroke_width)
        ));
        if r >= spec.label_min_radius {
            let font = r * 0.9;
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" \
                 dominant-baseline=\"middle\" font-family=\"sans-serif\">{}</text>\n",
                sig(cx),
                sig(screen.y(cy)),
                sig(font),
                fmt_rat(d.b())
            ));
        }
    }

    for (base, u) in &spec.arrows {
        let target = disk_from_spinor(base, u)?;
        let (bx, by) = base.center().expect("arrow base is a circle");
        let (bx, by) = (to_f64(&bx), to_f64(&by));
        let br = to_f64(&base.radius().expect("circle"));
        let (dx, dy) = if target.is_line() {
            (to_f64(target.xd()), to_f64(target.yd()))
        } else {
            let (tx, ty) = target.center().expect("circle");
            let (tx, ty) = (to_f64(&tx) - bx, to_f64(&ty) - by);
            let len = tx.hypot(ty).max(1e-12);
            (tx / len, ty / len)
        };
        // Tangency point, arrow across it.
        let (px, py) = (bx + br * dx, by + br * dy);
        let reach = br.abs().min(0.35) * 0.5;
        let (x1, y1) = (px - reach * dx, py - reach * dy);
        let (x2, y2) = (px + reach * dx, py + reach * dy);
        // Arrow head.
        let (hx, hy) = (x2 - 0.35 * reach * dx, y2 - 0.35 * reach * dy);
        let (ox, oy) = (-dy * 0.2 * reach, dx * 0.2 * reach);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#8b1a89\" \
             stroke-width=\"{}\"/>\n",
            sig(x1),
            sig(screen.y(y1)),
            sig(x2),
            sig(screen.y(y2)),
            sig(spec.stroke_width * 3.0)
        ));
        out.push_str(&format!(
            "<polygon points=\"{},{} {},{} {},{}\" fill=\"#8b1a89\"/>\n",
            sig(x2),
            sig(screen.y(y2)),
            sig(hx + ox),
            sig(screen.y(hy + oy)),
            sig(hx - ox),
            sig(screen.y(hy - oy))
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" fill=\"#8b1a89\">{},{}</text>\n",
            sig(px + 3.0 * oy),
            sig(screen.y(py - 3.0 * ox)),
            sig(reach * 0.8),
            fmt_rat(u.m()),
            fmt_rat(u.n())
        ));
    }

    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{corona_of, generate_packing, presets};
    use crate::rat::rat_i;

    #[test]
    fn sig_formatting() {
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(-0.5), "-0.5");
        assert_eq!(sig(0.125), "0.125");
        assert_eq!(sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig(1e-4), "0.0001");
        assert_eq!(sig(1234.5), "1234.5");
        assert_eq!(sig(1e13), "10000000000000");
    }

    #[test]
    fn svg_structure_and_determinism() {
        let p = generate_packing(&presets::window_seed(), &rat_i(30)).unwrap();
        let spec = RenderSpec::default();
        let a = render_svg(&p, &spec).unwrap();
        let b = render_svg(&p, &spec).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        // Every disk at bound 30 fits in the default viewport.
        assert_eq!(a.matches("<circle").count(), p.len());
        assert!(a.matches("<text").count() > 0);
    }

    #[test]
    fn svg_clips_to_viewport() {
        let p = generate_packing(&presets::window_seed(), &rat_i(30)).unwrap();
        let spec = RenderSpec {
            viewport: (0.0, 1.05, -0.55, 0.55),
            ..RenderSpec::default()
        };
        let a = render_svg(&p, &spec).unwrap();
        assert!(a.matches("<circle").count() < p.len());

        let empty = RenderSpec {
            viewport: (10.0, 11.0, 10.0, 11.0),
            ..RenderSpec::default()
        };
        let e = render_svg(&p, &empty).unwrap();
        assert_eq!(e.matches("<circle").count(), 0);
        assert!(e.starts_with("<svg") && e.ends_with("</svg>\n"));
    }

    #[test]
    fn svg_lines_highlight_and_arrows() {
        let p = crate::oracle::generate_packing_clipped(
            &presets::belt_seed(),
            &rat_i(9),
            Some(&presets::belt_region()),
        )
        .unwrap();
        let line = DiskSymbol::line_from_normal_offset(&rat_i(1), &rat_i(0), &rat_i(1)).unwrap();
        let corona = corona_of(&p, &line).unwrap();
        let unit = DiskSymbol::from_center_radius(&rat_i(0), &rat_i(0), &rat_i(1)).unwrap();
        let spec = RenderSpec {
            viewport: (-1.1, 1.1, -1.1, 2.1),
            highlight: Some(corona),
            arrows: vec![(unit, Spinor::from_ints(1, 0))],
            ..RenderSpec::default()
        };
        let svg = render_svg(&p, &spec).unwrap();
        assert!(
            svg.matches("<line").count() >= 3,
            "two strip lines plus an arrow"
        );
        assert!(svg.contains("#9db8e8"), "highlight fill present");
        assert!(svg.contains(">1,0<") || svg.contains("1,0</text>"));
    }
}
