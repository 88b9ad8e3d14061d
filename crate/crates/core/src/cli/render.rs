use serde::Serialize;

use crate::core_math::{parse_rational, Rational};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::region::{grid, Affine, AlphaTemplate, AntennaProfile, ExponentProfile, GdofRegion, Sweep};

#[derive(Serialize)]
pub struct BoundJson {
    kind: &'static str,
    c1: String,
    c2: String,
    rhs: String,
}

#[derive(Serialize)]
pub struct RegionJson {
    antennas: [u32; 4],
    alpha: [String; 4],
    bounds: Vec<BoundJson>,
    vertices: Vec<[String; 2]>,
}

pub fn exponent_strings(exp: &ExponentProfile) -> [String; 4] {
    exp.as_array().map(|a| a.to_string())
}

pub fn point_strings(points: &[Point]) -> Vec<[String; 2]> {
    points.iter().map(|p| [p.0.to_string(), p.1.to_string()]).collect()
}

pub fn region_json(ant: &AntennaProfile, exp: &ExponentProfile, region: &GdofRegion) -> RegionJson {
    RegionJson {
        antennas: ant.as_array(),
        alpha: exponent_strings(exp),
        bounds: region
            .bounds
            .iter()
            .map(|b| BoundJson { kind: b.kind.name(), c1: b.c1.to_string(), c2: b.c2.to_string(), rhs: b.rhs.to_string() })
            .collect(),
        vertices: point_strings(&region.vertices),
    }
}

pub fn vertices_csv(points: &[Point]) -> String {
    let mut out = String::from("d1,d2\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.0, p.1));
    }
    out
}

pub fn sweep_csv(sweep: &Sweep) -> String {
    let mut out = String::from("alpha,d_sym,active_bound_kind,is_breakpoint\n");
    for p in &sweep.points {
        out.push_str(&format!("{},{},{},{}\n", p.alpha, p.d_sym, p.active, p.is_breakpoint));
    }
    out
}

#[derive(Serialize)]
struct SweepPointJson {
    alpha: String,
    d_sym: String,
    active_bound_kind: &'static str,
    is_breakpoint: bool,
}

#[derive(Serialize)]
pub struct SweepJson {
    antennas: [u32; 4],
    template: [String; 4],
    points: Vec<SweepPointJson>,
    breakpoints: Vec<String>,
}

pub fn sweep_json(ant: &AntennaProfile, template: &AlphaTemplate, sweep: &Sweep) -> SweepJson {
    SweepJson {
        antennas: ant.as_array(),
        template: template.entries.map(|e| e.to_string()),
        points: sweep
            .points
            .iter()
            .map(|p| SweepPointJson {
                alpha: p.alpha.to_string(),
                d_sym: p.d_sym.to_string(),
                active_bound_kind: p.active.name(),
                is_breakpoint: p.is_breakpoint,
            })
            .collect(),
        breakpoints: sweep.breakpoints().iter().map(|b| b.to_string()).collect(),
    }
}

/// `lo:hi:step` (inclusive) or a comma-separated list of values.
pub fn parse_grid(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let values = grid(parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?)?;
            if values.len() > 1_000_000 {
                return Err(Error::Domain(format!("grid {text:?} has too many points")));
            }
            Ok(values)
        }
        [_] => text.split(',').map(parse_rational).collect(),
        _ => Err(Error::Parse(format!("grid must be lo:hi:step or a list, got {text:?}"))),
    }
}

pub fn parse_point(text: &str) -> Result<Point> {
    match text.split(',').collect::<Vec<_>>().as_slice() {
        [a, b] => Ok((parse_rational(a)?, parse_rational(b)?)),
        _ => Err(Error::Parse(format!("point must be d1,d2, got {text:?}"))),
    }
}

/// One template entry: `c`, `a`, `k*a`, `ka`, `c+a`, `c-k*a`, ...
fn parse_affine(text: &str) -> Result<Affine> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad template entry {text:?}"));
    if !t.contains('a') {
        return Ok(Affine::constant(parse_rational(&t)?));
    }
    if !t.ends_with('a') || t.matches('a').count() != 1 {
        return Err(bad());
    }
    let body = &t[..t.len() - 1];
    // split the constant from the coefficient at the last sign not in leading position
    let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
    let (constant, coeff) = match split {
        Some(i) => (parse_rational(&body[..i])?, &body[i..]),
        None => (Rational::from_integer(0), body),
    };
    let coeff = coeff.trim_end_matches('*');
    let slope = match coeff {
        "" | "+" => Rational::from_integer(1),
        "-" => Rational::from_integer(-1),
        c => parse_rational(c.trim_start_matches('+')).map_err(|_| bad())?,
    };
    Ok(Affine { constant, slope })
}

/// Four comma-separated template entries such as `1,a,a,1`.
pub fn parse_template(text: &str) -> Result<AlphaTemplate> {
    let entries: Vec<Affine> = text.split(',').map(parse_affine).collect::<Result<_>>()?;
    let entries: [Affine; 4] = entries
        .try_into()
        .map_err(|_| Error::Parse(format!("template needs four entries, got {text:?}")))?;
    Ok(AlphaTemplate { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_math::{int, rat};

    #[test]
    fn templates() {
        assert_eq!(parse_template("1,a,a,1").unwrap(), AlphaTemplate::default());
        let t = parse_template("1, 2a, 1/2*a, 1-a").unwrap();
        assert_eq!(t.entries[1], Affine { constant: int(0), slope: int(2) });
        assert_eq!(t.entries[2], Affine { constant: int(0), slope: rat(1, 2) });
        assert_eq!(t.entries[3], Affine { constant: int(1), slope: int(-1) });
        let t = parse_template("1,1/3+3/4*a,-a,2").unwrap();
        assert_eq!(t.entries[1], Affine { constant: rat(1, 3), slope: rat(3, 4) });
        assert_eq!(t.entries[2], Affine { constant: int(0), slope: int(-1) });
        assert!(parse_template("1,a,a").is_err());
        assert!(parse_template("1,aa,a,1").is_err());
        assert!(parse_template("1,a2,a,1").is_err());
    }

    #[test]
    fn template_display_round_trip() {
        let t = parse_template("1,1/3+3/4*a,2-a,1/2*a").unwrap();
        let text: Vec<String> = t.entries.iter().map(|e| e.to_string()).collect();
        assert_eq!(parse_template(&text.join(",")).unwrap(), t);
    }

    #[test]
    fn grids_and_points() {
        assert_eq!(parse_grid("0:1:1/2").unwrap(), vec![int(0), rat(1, 2), int(1)]);
        assert_eq!(parse_grid("0,1/2,0.75").unwrap(), vec![int(0), rat(1, 2), rat(3, 4)]);
        assert_eq!(parse_grid("0:3:1/60").unwrap().len(), 181);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(parse_point("1,2/3").unwrap(), (int(1), rat(2, 3)));
        assert!(parse_point("1").is_err());
    }
}
